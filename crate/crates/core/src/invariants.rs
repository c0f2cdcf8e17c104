//! Inertia groups, Brauer invariants, graded Schur indices and grading
//! admissibility of simple modules.
//!
//! For every [`GradingSpec`] variant and dominant weight `lambda` this
//! module computes the inertia subgroup `H_lambda <= G`, the Brauer
//! class `Br(lambda)` over `G / H_lambda`, the Schur index of the
//! associated graded division algebra, and whether the simple module
//! `V_lambda` admits a compatible `G`-grading.  The closed-form
//! predicates in [`corollary_admits`] are implemented independently of
//! the class computation so the two can be cross-checked.

use crate::abelian::{
    elem_sum, quotient, subgroup_from_elements, subgroup_generated, AbelianError, Character,
    FinAbGroup, GroupElem, QmodZ, QuotientMap, Subgroup,
};
use crate::bichar::{
    commutation_factor_from_pair, pair_from_commutation_factor, quadratic_refinement,
    symplectic_decomposition, factor_from_pointwise, BicharError, BrauerClass, CommutationFactor,
};
use crate::gradings::{
    h_bar_prime_from_data, is_elementary_2, partition_xi, t4_elements, GradingError, GradingSpec,
    Orientation, Weight,
};
use thiserror::Error;

/// Errors raised by the invariant computations.
#[derive(Debug, Error)]
pub enum InvariantError {
    /// The specification or weight is invalid for this operation.
    #[error(transparent)]
    Grading(#[from] GradingError),
    /// Underlying group arithmetic failed.
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    /// Underlying bicharacter arithmetic failed.
    #[error(transparent)]
    Bichar(#[from] BicharError),
    /// A redundant internal cross-check failed; indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// The full invariant data of a simple module `V_lambda` for a graded
/// simple Lie algebra.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    /// The highest weight the report describes.
    pub lambda: Weight,
    /// The inertia subgroup `H_lambda` of `G`.
    pub h_lambda: Subgroup,
    /// The quotient `G / H_lambda` over which the class lives.
    pub quotient_group: FinAbGroup,
    /// The projection `G -> G / H_lambda`.
    pub quotient_map: QuotientMap,
    /// The Brauer class `Br(lambda)` over the quotient.
    pub brauer: BrauerClass,
    /// Schur index of the graded division algebra, `sqrt(|support|)`.
    pub schur_index: u64,
    /// Support of `Br(lambda)` inside the quotient group.
    pub support: Subgroup,
    /// Whether `V_lambda` admits a compatible `G`-grading.
    pub admits_grading: bool,
}

/// Computes the invariant report of `V_lambda` for a grading spec.
pub fn brauer_invariant(
    spec: &GradingSpec,
    lambda: &Weight,
) -> Result<InvariantReport, InvariantError> {
    let (_, h_lambda) = spec.weight_orbit(lambda)?;
    let group = spec.group();
    let r = spec.rank();
    let m = lambda.coeffs();
    let exp = group.exponent().max(1);

    let (quotient_group, quotient_map, brauer) = match spec {
        GradingSpec::AInner { class, .. } => {
            let e = weighted_sum(m, |i| (i + 1) as u128, exp);
            let (qg, qmap) = quotient(group, &h_lambda)?;
            (qg, qmap, crate::bichar::brauer_pow(class, e))
        }
        GradingSpec::AOuter { chi, .. } => {
            let data = spec.aouter_data()?;
            if !h_lambda.is_trivial() {
                // Asymmetric weight: the class lives over G/<h> and is
                // the power of (T, beta) by the odd-index coefficient sum.
                let e = weighted_sum(m, |i| (i + 1) as u128, exp);
                (
                    data.quotient.clone(),
                    data.map.clone(),
                    crate::bichar::brauer_pow(&data.class, e),
                )
            } else {
                let (qg, qmap) = quotient(group, &h_lambda)?;
                if r % 2 == 0 {
                    (qg, qmap, BrauerClass::trivial(group))
                } else {
                    // Symmetric weight, r odd: the middle coefficient
                    // drives a factor extending beta^((r+1)/2) by the
                    // evaluation at h-prime.
                    let mid = m[(r - 1) / 2];
                    let gamma = aouter_symmetric_factor(spec)?;
                    let factor = gamma.scale((mid % exp) as i64);
                    let class = pair_from_commutation_factor(&factor)?;
                    let _ = chi;
                    (qg, qmap, class)
                }
            }
        }
        GradingSpec::B { .. } => {
            let gamma = gamma_hat_b(spec)?;
            let (qg, qmap) = quotient(group, &h_lambda)?;
            let factor = gamma.scale((m[r - 1] % exp) as i64);
            (qg, qmap, pair_from_commutation_factor(&factor)?)
        }
        GradingSpec::C { class, .. } => {
            let e = odd_index_sum(m, r, exp);
            let (qg, qmap) = quotient(group, &h_lambda)?;
            (qg, qmap, crate::bichar::brauer_pow(class, e))
        }
        GradingSpec::DInner {
            class, orientation, ..
        } => {
            let (gp, gm) = gamma_hat_plus_d(spec)?;
            let (g_rm1, g_r) = match orientation {
                Orientation::Plus => (gm, gp),
                Orientation::Minus => (gp, gm),
            };
            let beta_hat = commutation_factor_from_pair(class);
            let body: u128 = m[..r - 2]
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &mi)| {
                    (acc + ((i as u128 + 1) % exp as u128) * (mi as u128 % exp as u128))
                        % exp as u128
                });
            let factor = beta_hat
                .scale(body as i64)
                .add(&g_rm1.scale((m[r - 2] % exp) as i64))
                .add(&g_r.scale((m[r - 1] % exp) as i64));
            let (qg, qmap) = quotient(group, &h_lambda)?;
            (qg, qmap, pair_from_commutation_factor(&factor)?)
        }
        GradingSpec::DOuter { class, .. } => {
            if h_lambda.is_trivial() {
                // m_{r-1} = m_r: the class stays over G.
                let e = odd_index_sum(&m[..r - 1], r - 1, exp);
                let (qg, qmap) = quotient(group, &h_lambda)?;
                (qg, qmap, crate::bichar::brauer_pow(class, e))
            } else {
                let (qg, qmap) = quotient(group, &h_lambda)?;
                if (m[r - 2] % 2) == (m[r - 1] % 2) {
                    (qg.clone(), qmap, BrauerClass::trivial(&qg))
                } else {
                    let gamma = gamma_hat_0_d_outer(spec)?;
                    if gamma.group() != &qg {
                        return Err(InvariantError::Internal(
                            "quotient presentations disagree".into(),
                        ));
                    }
                    (qg, qmap, pair_from_commutation_factor(&gamma)?)
                }
            }
        }
    };

    let schur_index = brauer.schur_index();
    let support = brauer.support().clone();
    let admits_grading = h_lambda.is_trivial() && schur_index == 1;
    Ok(InvariantReport {
        lambda: lambda.clone(),
        h_lambda,
        quotient_group,
        quotient_map,
        brauer,
        schur_index,
        support,
        admits_grading,
    })
}

/// The graded Schur index of `V_lambda`.
pub fn schur_index(spec: &GradingSpec, lambda: &Weight) -> Result<u64, InvariantError> {
    Ok(brauer_invariant(spec, lambda)?.schur_index)
}

/// Whether `V_lambda` admits a compatible `G`-grading (it must be fixed
/// by the induced diagram action and have Schur index one).
pub fn admits_grading(spec: &GradingSpec, lambda: &Weight) -> Result<bool, InvariantError> {
    Ok(brauer_invariant(spec, lambda)?.admits_grading)
}

/// Closed-form admissibility predicate, implemented independently of
/// the Brauer-class computation for cross-checking.
pub fn corollary_admits(spec: &GradingSpec, lambda: &Weight) -> Result<bool, InvariantError> {
    spec.validated()?;
    if lambda.len() != spec.rank() {
        return Err(GradingError::RankMismatch {
            expected: spec.rank(),
            got: lambda.len(),
        }
        .into());
    }
    let m = lambda.coeffs();
    let r = spec.rank();
    Ok(match spec {
        GradingSpec::AInner { class, .. } => {
            let exp_t: u128 = class
                .support()
                .basis_orders()
                .iter()
                .fold(1u128, |acc, &d| num_integer::lcm(acc, d as u128));
            let s: u128 = m
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &mi)| (acc + (i as u128 + 1) * mi as u128) % exp_t);
            s % exp_t == 0
        }
        GradingSpec::AOuter { .. } => {
            if *lambda != lambda.reversed() {
                false
            } else if r % 2 == 0 {
                true
            } else if m[(r - 1) / 2] % 2 == 0 {
                true
            } else {
                let data = spec.aouter_data()?;
                let hbp = h_bar_prime_from_data(&data);
                if r % 4 == 3 {
                    hbp.is_identity()
                } else {
                    data.class.support().is_trivial() && hbp.is_identity()
                }
            }
        }
        GradingSpec::B { .. } => {
            m[r - 1] % 2 == 0 || {
                let gamma = gamma_hat_b(spec)?;
                gamma.is_trivial()
            }
        }
        GradingSpec::C { class, .. } => {
            class.support().is_trivial() || odd_index_sum(m, r, 2) % 2 == 0
        }
        GradingSpec::DInner {
            class, orientation, ..
        } => {
            let same_parity = (m[r - 2] % 2) == (m[r - 1] % 2);
            if class.support().is_trivial() {
                same_parity || gamma_hat_plus_d(spec)?.0.is_trivial()
            } else if same_parity {
                if r % 2 == 0 {
                    odd_index_sum(m, r, 2) % 2 == 0
                } else {
                    let s: i128 = (1..=(r - 1) / 2).map(|i| m[2 * i - 2] as i128).sum::<i128>()
                        - (m[r - 2] as i128 - m[r - 1] as i128) / 2;
                    s.rem_euclid(2) == 0
                }
            } else if r % 2 != 0 {
                false
            } else {
                let plus_trivial = gamma_hat_plus_d(spec)?.0.is_trivial();
                let s = odd_index_sum(m, r, 2) % 2;
                plus_trivial
                    && match orientation {
                        Orientation::Plus => s == 0,
                        Orientation::Minus => s == 1,
                    }
            }
        }
        GradingSpec::DOuter { class, .. } => {
            m[r - 2] == m[r - 1]
                && (class.support().is_trivial() || odd_index_sum(&m[..r - 1], r - 1, 2) % 2 == 0)
        }
    })
}

/// `sum_i w(i) * m_i mod exp` for 0-based `i`.
fn weighted_sum(m: &[u64], w: impl Fn(usize) -> u128, exp: u64) -> i64 {
    let e = exp.max(1) as u128;
    m.iter()
        .enumerate()
        .fold(0u128, |acc, (i, &mi)| (acc + (w(i) % e) * (mi as u128 % e)) % e) as i64
}

/// Sum of the odd-index coefficients `m_1 + m_3 + ...` up to `m_r`,
/// reduced mod `exp`.
fn odd_index_sum(m: &[u64], r: usize, exp: u64) -> i64 {
    let e = exp.max(1) as u128;
    (1..=(r + 1) / 2).fold(0u128, |acc, i| (acc + m[2 * i - 2] as u128 % e) % e) as i64
}

// ---------------------------------------------------------------------------
// Quotient-level character descent
// ---------------------------------------------------------------------------

/// Descends a character of `G` that kills the kernel of a quotient map
/// to a character of the quotient.
pub fn character_descend(
    map: &QuotientMap,
    psi: &Character,
) -> Result<Character, InvariantError> {
    let target = map.target();
    let mut coords = vec![0i64; target.rank()];
    for (j, coord) in coords.iter_mut().enumerate() {
        let n = target.orders()[j] as i64;
        let v = psi.eval(&map.any_preimage(&target.standard_gen(j)));
        if n % v.den() != 0 {
            return Err(InvariantError::Internal(
                "character does not descend to the quotient".into(),
            ));
        }
        *coord = v.num() * (n / v.den());
    }
    let bar = Character::from_dual_elem(target.elem(&coords)?);
    for i in 0..map.source().rank() {
        let g = map.source().standard_gen(i);
        if bar.eval(&map.project(&g)) != psi.eval(&g) {
            return Err(InvariantError::Internal(
                "character does not descend to the quotient".into(),
            ));
        }
    }
    Ok(bar)
}

// ---------------------------------------------------------------------------
// Outer series A: h-prime and the symmetric-weight factor
// ---------------------------------------------------------------------------

/// The canonical order-(at most)-2 element `h'` of an A-outer spec with
/// `r` odd: the unique lift of the coset `h-bar-prime` on which `chi`
/// evaluates trivially.
pub fn h_prime(spec: &GradingSpec) -> Result<GroupElem, InvariantError> {
    let GradingSpec::AOuter { h, chi, rank, .. } = spec else {
        return Err(GradingError::WrongSeries {
            expected: "AOuter",
            got: spec.series_name(),
        }
        .into());
    };
    if rank % 2 == 0 {
        return Err(GradingError::Invalid(
            "h-prime is defined only for odd rank".into(),
        )
        .into());
    }
    spec.validated()?;
    let data = spec.aouter_data()?;
    let hbp = h_bar_prime_from_data(&data);
    let mut lift = data.map.any_preimage(&hbp);
    if !chi.eval(&lift).is_zero() {
        lift = lift.add(h);
    }
    if !chi.eval(&lift).is_zero() || !lift.scale(2).is_identity() {
        return Err(InvariantError::Internal(
            "h-prime lift is not an order-2 element killed by chi".into(),
        ));
    }
    Ok(lift)
}

/// The commutation factor on the dual of `G` governing the symmetric,
/// odd-middle-coefficient case of an outer A grading.
fn aouter_symmetric_factor(spec: &GradingSpec) -> Result<CommutationFactor, InvariantError> {
    let GradingSpec::AOuter {
        group, h, chi, rank, ..
    } = spec
    else {
        unreachable!("caller matched the variant");
    };
    let data = spec.aouter_data()?;
    let hp = h_prime(spec)?;
    let beta_bar = commutation_factor_from_pair(&data.class);
    let p = ((*rank as i64) + 1) / 2;
    // Decompose xi = chi^a * psi with psi in the annihilator of h; the
    // factor pairs the chi parts against h' and the psi parts through
    // the quotient-level factor.
    let decompose = |xi: &Character| -> Result<(i64, Character), InvariantError> {
        let a = if xi.eval(h) == QmodZ::HALF { 1 } else { 0 };
        let psi = xi.add(&chi.scale(-a));
        let bar = character_descend(&data.map, &psi)?;
        Ok((a, bar))
    };
    let rule = |x1: &Character, x2: &Character| -> QmodZ {
        let (a1, p1) = decompose(x1).expect("annihilator characters descend");
        let (a2, p2) = decompose(x2).expect("annihilator characters descend");
        let psi_at_hp = |xi: &Character, a: i64| xi.add(&chi.scale(-a)).eval(&hp);
        psi_at_hp(x2, a2)
            .scale(a1)
            .sub(&psi_at_hp(x1, a1).scale(a2))
            .add(&beta_bar.eval(&p1, &p2).scale(p))
    };
    Ok(factor_from_pointwise(group, rule))
}

// ---------------------------------------------------------------------------
// Series B
// ---------------------------------------------------------------------------

/// The order-2 commutation factor of the spin module of a series B
/// spec: `gamma(chi1, chi2) = (-1)^(x . y)` where `x`, `y` record the
/// signs of the characters on the diagonal degrees of the normalized
/// spec.  The support is recomputed from the sign map image as a
/// cross-check.
pub fn gamma_hat_b(spec: &GradingSpec) -> Result<CommutationFactor, InvariantError> {
    let norm = spec.normalize_b()?;
    let GradingSpec::B { group, g0, xi, .. } = &norm else {
        unreachable!("normalize_b returns a B spec");
    };
    let (diag, _) = partition_xi(group, xi, g0)?;
    let sign_vec = |c: &Character| -> Vec<u8> {
        diag.iter()
            .map(|g| if c.eval(g) == QmodZ::HALF { 1 } else { 0 })
            .collect()
    };
    let rule = |c1: &Character, c2: &Character| -> QmodZ {
        let x = sign_vec(c1);
        let y = sign_vec(c2);
        let dot: u64 = x.iter().zip(&y).map(|(&a, &b)| (a & b) as u64).sum();
        QmodZ::HALF.scale(dot as i64)
    };
    let factor = factor_from_pointwise(group, rule);
    // Cross-check: the support must be the image of the sign map,
    // pushed back into G through the diagonal degrees.
    let gens: Vec<GroupElem> = (0..group.rank())
        .map(|i| {
            let c = Character::from_dual_elem(group.standard_gen(i));
            let x = sign_vec(&c);
            elem_sum(
                group,
                diag.iter().zip(&x).filter(|(_, &b)| b == 1).map(|(g, _)| g),
            )
        })
        .collect();
    let remark_support = subgroup_generated(group, &gens)?;
    let class = pair_from_commutation_factor(&factor)?;
    if class.support().elements() != remark_support.elements() {
        return Err(InvariantError::Internal(
            "spin factor support disagrees with the sign-map image".into(),
        ));
    }
    Ok(factor)
}

// ---------------------------------------------------------------------------
// Series D: half-spin factors
// ---------------------------------------------------------------------------

/// The pair of half-spin commutation factors `(gamma_plus, gamma_minus)`
/// of an inner series D spec; the assignment to the two half-spin
/// modules is governed by the spec's orientation.
pub fn gamma_hat_plus_d(
    spec: &GradingSpec,
) -> Result<(CommutationFactor, CommutationFactor), InvariantError> {
    let GradingSpec::DInner {
        rank,
        class,
        g0,
        xi,
        ti,
        ..
    } = spec
    else {
        return Err(GradingError::WrongSeries {
            expected: "DInner",
            got: spec.series_name(),
        }
        .into());
    };
    spec.validated()?;
    let group = class.ambient();
    let r = *rank;
    let t_order = class.support().order();
    let beta_hat = commutation_factor_from_pair(class);
    let (plus, minus) = if t_order == 1 {
        let gamma = gamma_hat_t1(group, &xi[..ti.len()], g0)?;
        (gamma.clone(), gamma)
    } else if t_order == 4 {
        let plus = gamma_hat_t4(class, g0, xi, ti, r)?;
        let minus = if r % 2 == 0 {
            beta_hat.add(&plus)
        } else {
            plus.neg()
        };
        (plus, minus)
    } else if t_order == 16 {
        let plus = gamma_hat_t16(class, ti)?;
        let minus = beta_hat.add(&plus);
        (plus, minus)
    } else {
        (CommutationFactor::trivial(group), beta_hat.clone())
    };
    // Cross-checks that hold for every inner spec: the two factors
    // multiply to the base factor for even rank and cancel for odd
    // rank, and they coincide exactly when the base factor is trivial.
    let same = |x: &CommutationFactor, y: &CommutationFactor| x.add(&y.neg()).is_trivial();
    let relation_ok = if r % 2 == 0 {
        same(&plus.add(&minus), &beta_hat) && plus.scale(2).is_trivial()
    } else {
        plus.add(&minus).is_trivial() && same(&plus.scale(2), &beta_hat)
    };
    if !relation_ok {
        return Err(InvariantError::Internal(
            "half-spin factors violate the square/product relations".into(),
        ));
    }
    if same(&plus, &minus) != beta_hat.is_trivial() {
        return Err(InvariantError::Internal(
            "half-spin factors coincide iff the base factor is trivial".into(),
        ));
    }
    Ok((plus, minus))
}

/// Half-spin factor for trivial support, from the sign map of the
/// diagonal degrees (anchored at the first one to avoid square-root
/// choices); also used at the quotient level by the outer machinery.
fn gamma_hat_t1(
    group: &FinAbGroup,
    diag: &[GroupElem],
    _g0: &GroupElem,
) -> Result<CommutationFactor, InvariantError> {
    if diag.is_empty() {
        return Ok(CommutationFactor::trivial(group));
    }
    if diag.len() % 2 != 0 {
        return Err(InvariantError::Internal(
            "half-spin sign map needs an even diagonal".into(),
        ));
    }
    let anchor = &diag[0];
    let sign_vec = |c: &Character| -> Vec<u8> {
        diag.iter()
            .map(|g| {
                if c.eval(&g.sub(anchor)) == QmodZ::HALF {
                    1
                } else {
                    0
                }
            })
            .collect()
    };
    // The sign vectors must have even weight (the distinguished element
    // of the underlying datum is trivial); otherwise the anchored
    // representative is not the canonical one.
    for i in 0..group.rank() {
        let c = Character::from_dual_elem(group.standard_gen(i));
        if sign_vec(&c).iter().map(|&b| b as u64).sum::<u64>() % 2 != 0 {
            return Err(InvariantError::Internal(
                "half-spin sign map leaves the even-weight hyperplane".into(),
            ));
        }
    }
    let rule = |c1: &Character, c2: &Character| -> QmodZ {
        let x = sign_vec(c1);
        let y = sign_vec(c2);
        let dot: u64 = x.iter().zip(&y).map(|(&a, &b)| (a & b) as u64).sum();
        QmodZ::HALF.scale(dot as i64)
    };
    let factor = factor_from_pointwise(group, rule);
    // Cross-check the support against the image of the sign map shifted
    // by the anchor.
    let gens: Vec<GroupElem> = (0..group.rank())
        .map(|i| {
            let c = Character::from_dual_elem(group.standard_gen(i));
            let x = sign_vec(&c);
            x.iter()
                .zip(diag)
                .filter(|(&b, _)| b == 1)
                .fold(group.identity(), |acc, (_, g)| acc.add(&g.sub(anchor)))
        })
        .collect();
    let remark_support = subgroup_generated(group, &gens)?;
    let class = pair_from_commutation_factor(&factor)?;
    if class.support().elements() != remark_support.elements() {
        return Err(InvariantError::Internal(
            "half-spin support disagrees with the sign-map image".into(),
        ));
    }
    Ok(factor)
}

/// Half-spin `gamma_plus` for `|T| = 4`.
fn gamma_hat_t4(
    class: &BrauerClass,
    g0: &GroupElem,
    xi: &[GroupElem],
    ti: &[GroupElem],
    r: usize,
) -> Result<CommutationFactor, InvariantError> {
    let group = class.ambient();
    let (a, b, c) = t4_elements(class)?;
    let idx_set = |t: &GroupElem| -> Vec<usize> {
        ti.iter()
            .enumerate()
            .filter(|(_, u)| *u == t)
            .map(|(i, _)| i)
            .collect()
    };
    let i_e = idx_set(&group.identity());
    let i_a = idx_set(&a);
    let i_b = idx_set(&b);
    if i_e.len() + i_a.len() + i_b.len() != ti.len() {
        return Err(InvariantError::Internal(
            "diagonal support elements must be symmetric".into(),
        ));
    }
    let g_for = |own: &[usize], shared: &[usize]| -> Result<GroupElem, InvariantError> {
        let n = own.len() + shared.len();
        if n % 2 != 0 {
            return Err(InvariantError::Internal(
                "diagonal multiplicity parity is inconsistent".into(),
            ));
        }
        let mut acc = g0.scale((n / 2) as i64);
        for &i in own.iter().chain(shared) {
            acc = acc.add(&xi[i]);
        }
        Ok(acc)
    };
    let g_a = g_for(&i_a, &i_e)?;
    let g_b = g_for(&i_b, &i_e)?;
    let g_c = g_a.add(&g_b);
    // Fixed characters extending the pairings beta(a, .) and beta(b, .).
    let chi_for = |t: &GroupElem| -> Result<Character, InvariantError> {
        let basis = class.support().basis().to_vec();
        let values: Vec<QmodZ> = basis.iter().map(|s| class.beta().eval(t, s)).collect();
        let mut sols =
            crate::abelian::solve_character_on_subgroup(class.support(), &basis, &values)?;
        sols.sort_by(|x, y| x.dual_elem().cmp(y.dual_elem()));
        sols.into_iter().next().ok_or_else(|| {
            InvariantError::Internal("pairing character does not extend".into())
        })
    };
    let chi_a = chi_for(&a)?;
    let chi_b = chi_for(&b)?;
    let ident = group.identity();
    // t-component of a character: the unique t in T with xi|_T = beta(t, .).
    let t_of = |x: &Character| -> GroupElem {
        class
            .support()
            .elements()
            .iter()
            .find(|t| {
                class
                    .support()
                    .basis()
                    .iter()
                    .all(|s| class.beta().eval(t, s) == x.eval(s))
            })
            .cloned()
            .expect("nondegenerate pairing")
    };
    let section = |t: &GroupElem| -> Character {
        if *t == a {
            chi_a.clone()
        } else if *t == b {
            chi_b.clone()
        } else if *t == c {
            chi_a.add(&chi_b)
        } else {
            chi_a.scale(0)
        }
    };
    let g_of = |t: &GroupElem| -> GroupElem {
        if *t == a {
            g_a.clone()
        } else if *t == b {
            g_b.clone()
        } else if *t == c {
            g_c.clone()
        } else {
            ident.clone()
        }
    };
    // Formal order a < c < b used by the odd-rank quarter twists.
    let pos = |t: &GroupElem| -> u8 {
        if *t == a {
            0
        } else if *t == c {
            1
        } else {
            2
        }
    };
    let rule = |x1: &Character, x2: &Character| -> QmodZ {
        let t1 = t_of(x1);
        let t2 = t_of(x2);
        let p1 = x1.add(&section(&t1).neg());
        let p2 = x2.add(&section(&t2).neg());
        let mut v = p1.eval(&g_of(&t2)).add(&p2.eval(&g_of(&t1)));
        if r % 2 != 0 && !t1.is_identity() && !t2.is_identity() && t1 != t2 {
            // beta(t1, t2) = -1: insert the square root i or -i
            // depending on the formal order.
            v = if pos(&t1) < pos(&t2) {
                v.add(&QmodZ::new(1, 4))
            } else {
                v.add(&QmodZ::new(3, 4))
            };
        }
        v
    };
    let factor = factor_from_pointwise(group, rule);
    // Cross-check the support against its closed description inside
    // Q = <T, g_a, g_b>.
    let q_sub = subgroup_generated(group, &[a.clone(), b.clone(), g_a.clone(), g_b.clone()])?;
    let remark: Vec<GroupElem> = if r % 2 != 0 {
        q_sub.elements().to_vec()
    } else {
        q_sub
            .elements()
            .iter()
            .filter(|x| {
                (!class.support().contains(&g_a) || chi_a.eval(x).is_zero())
                    && (!class.support().contains(&g_b) || chi_b.eval(x).is_zero())
                    && (!class.support().contains(&g_c) || chi_a.eval(x) == chi_b.eval(x))
            })
            .cloned()
            .collect()
    };
    let remark_support = subgroup_from_elements(group, &remark)?;
    let computed = pair_from_commutation_factor(&factor)?;
    if computed.support().elements() != remark_support.elements() {
        return Err(InvariantError::Internal(
            "half-spin support disagrees with its closed description".into(),
        ));
    }
    if r % 2 != 0 && q_sub.basis_orders() != [4, 4] {
        return Err(InvariantError::Internal(
            "odd-rank half-spin support must be Z4 x Z4".into(),
        ));
    }
    Ok(factor)
}

/// The 4x4 mod-2 coupling matrix contributed by one diagonal support
/// element `t` (with quadratic value 0) of a `|T| = 16` spec, in the
/// coordinates of the standard symplectic basis `a_1, a_2, b_1, b_2`.
pub fn compute_m_plus(class: &BrauerClass, t: &GroupElem) -> Result<[[u8; 4]; 4], InvariantError> {
    if class.support().order() != 16 || !is_elementary_2(class.support()) {
        return Err(GradingError::Invalid(
            "coupling matrices are defined for elementary supports of order 16".into(),
        )
        .into());
    }
    let qf = quadratic_refinement(class.beta())?;
    if !qf.value(t).is_zero() {
        return Err(GradingError::Invalid(
            "coupling matrices are defined for quadratic value 0".into(),
        )
        .into());
    }
    let pairs = symplectic_decomposition(class.beta())?;
    let bit = |u: &GroupElem, v: &GroupElem| -> u8 {
        if class.beta().eval(u, v).is_zero() {
            0
        } else {
            1
        }
    };
    // Coordinates of t: x_j pairs against b_j, y_j against a_j.
    let x1 = bit(t, &pairs[0].1);
    let x2 = bit(t, &pairs[1].1);
    let y1 = bit(t, &pairs[0].0);
    let y2 = bit(t, &pairs[1].0);
    let mut m = [[0u8; 4]; 4];
    let entries = [
        (0, 1, (x1 ^ 1) & (x2 ^ 1)),
        (0, 2, 0),
        (0, 3, (x1 ^ 1) & (y2 ^ 1)),
        (1, 2, (x2 ^ 1) & (y1 ^ 1)),
        (1, 3, 1),
        (2, 3, (y1 ^ 1) & (y2 ^ 1)),
    ];
    for (i, j, v) in entries {
        m[i][j] = v;
        m[j][i] = v;
    }
    Ok(m)
}

/// Half-spin `gamma_plus` for `|T| = 16`: a mod-2 pairing of the sign
/// coordinates of the characters through the summed coupling matrix of
/// the diagonal support elements.
fn gamma_hat_t16(class: &BrauerClass, ti: &[GroupElem]) -> Result<CommutationFactor, InvariantError> {
    let group = class.ambient();
    let pairs = symplectic_decomposition(class.beta())?;
    if pairs.len() != 2 {
        return Err(InvariantError::Internal(
            "order-16 support must have two symplectic pairs".into(),
        ));
    }
    let mut m_total = [[0u8; 4]; 4];
    for t in ti {
        let m = compute_m_plus(class, t)?;
        for i in 0..4 {
            for j in 0..4 {
                m_total[i][j] ^= m[i][j];
            }
        }
    }
    let basis = [
        pairs[0].0.clone(),
        pairs[1].0.clone(),
        pairs[0].1.clone(),
        pairs[1].1.clone(),
    ];
    let f = |c: &Character| -> [u8; 4] {
        let mut out = [0u8; 4];
        for (i, g) in basis.iter().enumerate() {
            out[i] = if c.eval(g) == QmodZ::HALF { 1 } else { 0 };
        }
        out
    };
    let rule = |c1: &Character, c2: &Character| -> QmodZ {
        let u = f(c1);
        let v = f(c2);
        let mut acc = 0u8;
        for i in 0..4 {
            for j in 0..4 {
                acc ^= u[i] & m_total[i][j] & v[j];
            }
        }
        QmodZ::HALF.scale(acc as i64)
    };
    let factor = factor_from_pointwise(group, rule);
    // Cross-check: the support lies in T with even elementary rank.
    let computed = pair_from_commutation_factor(&factor)?;
    let rank = computed.support().basis_orders().len();
    if !computed.support().is_contained_in(class.support()) || rank % 2 != 0 {
        return Err(InvariantError::Internal(
            "order-16 half-spin support must be an even-rank subgroup of T".into(),
        ));
    }
    Ok(factor)
}

/// The commutation factor over `G / <h>` governing the opposite-parity
/// case of an outer series D grading.
pub fn gamma_hat_0_d_outer(spec: &GradingSpec) -> Result<CommutationFactor, InvariantError> {
    let GradingSpec::DOuter {
        class, g0, xi, ..
    } = spec
    else {
        return Err(GradingError::WrongSeries {
            expected: "DOuter",
            got: spec.series_name(),
        }
        .into());
    };
    spec.validated()?;
    let group = class.ambient();
    let h = spec.distinguished_element()?;
    let hsub = subgroup_generated(group, &[h.clone()])?;
    let (qg, qmap) = quotient(group, &hsub)?;
    let (xi_bar, g0_bar) = if class.support().is_trivial() {
        (
            xi.iter().map(|g| qmap.project(g)).collect::<Vec<_>>(),
            qmap.project(g0),
        )
    } else {
        // |T| = 4: replace each degree by the pair {g, g + h'} for a
        // support element h' distinct from e and h; shift g0 by h' when
        // h is the skew element.
        let (a, b, c) = t4_elements(class)?;
        let hp = [&a, &b, &c]
            .into_iter()
            .find(|t| **t != h)
            .expect("two support elements differ from h")
            .clone();
        let hp_bar = qmap.project(&hp);
        let mut out = Vec::with_capacity(2 * xi.len());
        for g in xi {
            let gb = qmap.project(g);
            out.push(gb.clone());
            out.push(gb.add(&hp_bar));
        }
        let g0_bar = if h == c {
            qmap.project(g0).add(&hp_bar)
        } else {
            qmap.project(g0)
        };
        (out, g0_bar)
    };
    let (diag, _) = partition_xi(&qg, &xi_bar, &g0_bar)?;
    gamma_hat_t1(&qg, &diag, &g0_bar)
}

/// Closed-form Brauer class of an inner series D weight, used to
/// cross-check the product-form computation.
pub fn d_inner_closed_form(
    spec: &GradingSpec,
    lambda: &Weight,
) -> Result<BrauerClass, InvariantError> {
    let GradingSpec::DInner {
        rank,
        class,
        orientation,
        ..
    } = spec
    else {
        return Err(GradingError::WrongSeries {
            expected: "DInner",
            got: spec.series_name(),
        }
        .into());
    };
    let r = *rank;
    let m = lambda.coeffs();
    if m.len() != r {
        return Err(GradingError::RankMismatch {
            expected: r,
            got: m.len(),
        }
        .into());
    }
    let (gp, gm) = gamma_hat_plus_d(spec)?;
    let g_r = match orientation {
        Orientation::Plus => &gp,
        Orientation::Minus => &gm,
    };
    let beta_hat = commutation_factor_from_pair(class);
    let factor = if (m[r - 2] % 2) == (m[r - 1] % 2) {
        if r % 2 == 0 {
            beta_hat.scale(odd_index_sum(m, r, 2))
        } else {
            let s: i128 = (1..=(r - 1) / 2).map(|i| m[2 * i - 2] as i128).sum::<i128>()
                - (m[r - 2] as i128 - m[r - 1] as i128) / 2;
            beta_hat.scale(s.rem_euclid(2) as i64)
        }
    } else if r % 2 == 0 {
        beta_hat.scale(odd_index_sum(m, r, 2)).add(g_r)
    } else {
        let s: i128 = 2 * (1..=(r - 1) / 2)
            .map(|i| m[2 * i - 2] as i128)
            .sum::<i128>()
            - m[r - 2] as i128
            + m[r - 1] as i128;
        g_r.scale(s.rem_euclid(4) as i64)
    };
    Ok(pair_from_commutation_factor(&factor)?)
}
