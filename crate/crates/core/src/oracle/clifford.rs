//! Exact Clifford-algebra oracle for spin and half-spin commutation
//! factors.
//!
//! The monomial model of a type B/D graded module carries an invariant
//! symmetric bilinear form.  Each character action is a similitude of
//! that form; after scaling it to a proper isometry and changing to an
//! orthonormal basis, it lifts to the Clifford algebra as an explicit
//! product of reflection vectors.  Scalar commutators of those lifts,
//! read in the two half-spin representations, give the spin-level
//! commutation factors by brute force, independently of any closed
//! formula.

use crate::abelian::{Character, FinAbGroup, GroupElem, QmodZ};
use crate::bichar::{Bicharacter, BrauerClass, CommutationFactor};
use crate::gradings::{partition_xi, GradingSpec};
use crate::oracle::cyclo::{CycloField, CycloNum};
use crate::oracle::monomial::{
    form_matrix, standard_division_algebra, DivisionAlgebraRep, MonomialMatrix, OracleError,
};
use num_rational::BigRational;
use std::collections::BTreeMap;

/// Default bound on the dimension of the quadratic space; the Clifford
/// algebra has dimension `2^n`.
pub const DEFAULT_DIM_CAP: usize = 10;

type CMat = Vec<Vec<CycloNum>>;

fn mat_zero(field: &CycloField, n: usize) -> CMat {
    vec![vec![field.zero(); n]; n]
}

fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let field = a[0][0].field().clone();
    let mut out = mat_zero(&field, n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

fn mat_transpose(a: &CMat) -> CMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

fn mat_is_identity(a: &CMat) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

fn mat_from_monomial(field: &CycloField, m: &MonomialMatrix) -> CMat {
    let n = m.dim();
    let mut out = mat_zero(field, n);
    for j in 0..n {
        out[m.row_of(j)][j] = field.root(m.phase_of(j));
    }
    out
}

fn mat_scale(a: &CMat, c: &CycloNum) -> CMat {
    a.iter()
        .map(|row| row.iter().map(|x| x.mul(c)).collect())
        .collect()
}

/// Standard-form inner product `sum_i x_i y_i` (no conjugation; the
/// form is the bilinear extension of the real one).
fn dot(x: &[CycloNum], y: &[CycloNum]) -> CycloNum {
    let field = x[0].field().clone();
    x.iter()
        .zip(y)
        .fold(field.zero(), |acc, (a, b)| acc.add(&a.mul(b)))
}

/// Applies the reflection in `w` (with `dot(w, w) = q` nonzero) to
/// every column of `m` in place.
fn apply_reflection(m: &mut CMat, w: &[CycloNum], q: &CycloNum) {
    let n = m.len();
    let two_inv_q = q.inv().scale(&BigRational::from_integer(2.into()));
    for j in 0..n {
        let col: Vec<CycloNum> = (0..n).map(|i| m[i][j].clone()).collect();
        let c = dot(&col, w).mul(&two_inv_q);
        for i in 0..n {
            m[i][j] = m[i][j].sub(&c.mul(&w[i]));
        }
    }
}

/// Decomposes the orthogonal matrix `m` into reflection vectors whose
/// reflections compose (left to right) to `m`.
fn reflection_vectors(m: &CMat) -> Result<Vec<Vec<CycloNum>>, OracleError> {
    let n = m.len();
    let field = m[0][0].field().clone();
    let mut cur = m.clone();
    let mut ws: Vec<Vec<CycloNum>> = Vec::new();
    for i in 0..n {
        let a: Vec<CycloNum> = (0..n).map(|r| cur[r][i].clone()).collect();
        let mut b = vec![field.zero(); n];
        b[i] = field.one();
        if a.iter().zip(&b).all(|(x, y)| x.sub(y).is_zero()) {
            continue;
        }
        let w1: Vec<CycloNum> = a.iter().zip(&b).map(|(x, y)| x.sub(y)).collect();
        let q1 = dot(&w1, &w1);
        if !q1.is_zero() {
            apply_reflection(&mut cur, &w1, &q1);
            ws.push(w1);
        } else {
            // Isotropic difference: reflect through a + b and then b.
            let w2: Vec<CycloNum> = a.iter().zip(&b).map(|(x, y)| x.add(y)).collect();
            let q2 = dot(&w2, &w2);
            if q2.is_zero() {
                return Err(OracleError::Construction(
                    "both reflection candidates are isotropic".into(),
                ));
            }
            apply_reflection(&mut cur, &w2, &q2);
            let qb = dot(&b, &b);
            apply_reflection(&mut cur, &b, &qb);
            ws.push(w2);
            ws.push(b);
        }
    }
    if !mat_is_identity(&cur) {
        return Err(OracleError::Construction(
            "reflection decomposition did not reach the identity".into(),
        ));
    }
    Ok(ws)
}

/// An element of the Clifford algebra of the standard quadratic form
/// (`e_i^2 = 1`), stored as a sparse sum of basis monomials `e_S`
/// indexed by bitmasks.
#[derive(Clone, Debug)]
pub struct CliffordElem {
    field: CycloField,
    terms: BTreeMap<u64, CycloNum>,
}

/// Parity of the number of pairs `(i, j)` with `i` in `s`, `j` in `t`
/// and `i > j`; the sign picked up when merging `e_s e_t`.
fn reorder_sign(s: u64, t: u64) -> bool {
    let mut total = 0u32;
    let mut tt = t;
    while tt != 0 {
        let j = tt.trailing_zeros();
        total += (s >> (j + 1)).count_ones();
        tt &= tt - 1;
    }
    total % 2 == 1
}

impl CliffordElem {
    /// The zero element.
    pub fn zero(field: &CycloField) -> CliffordElem {
        CliffordElem {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A scalar.
    pub fn scalar(field: &CycloField, c: CycloNum) -> CliffordElem {
        let mut e = CliffordElem::zero(field);
        if !c.is_zero() {
            e.terms.insert(0, c);
        }
        e
    }

    /// The basis monomial `e_S` for the bitmask `mask`.
    pub fn basis(field: &CycloField, mask: u64) -> CliffordElem {
        let mut e = CliffordElem::zero(field);
        e.terms.insert(mask, field.one());
        e
    }

    /// The degree-one element with the given coordinates.
    pub fn vector(field: &CycloField, coords: &[CycloNum]) -> CliffordElem {
        let mut e = CliffordElem::zero(field);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                e.terms.insert(1 << i, c.clone());
            }
        }
        e
    }

    /// Whether the element is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum.
    pub fn add(&self, other: &CliffordElem) -> CliffordElem {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let entry = match out.terms.remove(m) {
                Some(x) => x.add(c),
                None => c.clone(),
            };
            if !entry.is_zero() {
                out.terms.insert(*m, entry);
            }
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &CliffordElem) -> CliffordElem {
        self.add(&other.scale(&self.field.integer(-1)))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &CycloNum) -> CliffordElem {
        if c.is_zero() {
            return CliffordElem::zero(&self.field);
        }
        CliffordElem {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect(),
        }
    }

    /// Clifford product.
    pub fn mul(&self, other: &CliffordElem) -> CliffordElem {
        let mut terms: BTreeMap<u64, CycloNum> = BTreeMap::new();
        for (ms, cs) in &self.terms {
            for (mt, ct) in &other.terms {
                let mask = ms ^ mt;
                let mut c = cs.mul(ct);
                if reorder_sign(*ms, *mt) {
                    c = c.neg();
                }
                let entry = match terms.remove(&mask) {
                    Some(x) => x.add(&c),
                    None => c,
                };
                if !entry.is_zero() {
                    terms.insert(mask, entry);
                }
            }
        }
        CliffordElem {
            field: self.field.clone(),
            terms,
        }
    }

    /// The reversal anti-automorphism `e_{i1} .. e_{ik} -> e_{ik} .. e_{i1}`.
    pub fn reversal(&self) -> CliffordElem {
        CliffordElem {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let k = m.count_ones() as u64;
                    if (k * (k.saturating_sub(1)) / 2) % 2 == 1 {
                        (*m, c.neg())
                    } else {
                        (*m, c.clone())
                    }
                })
                .collect(),
        }
    }

    /// Inverse through the reversal norm, valid whenever `rev(x) x` is
    /// a nonzero scalar (true for products of anisotropic vectors).
    pub fn inverse(&self) -> Result<CliffordElem, OracleError> {
        let norm = self.reversal().mul(self);
        let mut it = norm.terms.iter();
        match (it.next(), it.next()) {
            (Some((0, c)), None) => Ok(self.reversal().scale(&c.inv())),
            _ => Err(OracleError::Construction(
                "reversal norm is not a nonzero scalar".into(),
            )),
        }
    }

    /// If `self = c * other` for a scalar `c`, returns `c`.
    pub fn scalar_ratio(&self, other: &CliffordElem) -> Option<CycloNum> {
        let (m0, c0) = other.terms.iter().next()?;
        let c = self.terms.get(m0)?.mul(&c0.inv());
        let scaled = other.scale(&c);
        if self.sub(&scaled).is_zero() {
            Some(c)
        } else {
            None
        }
    }
}

/// A scalar Clifford-level commutator: either `exp(2 pi i p)` or
/// `exp(2 pi i p)` times the volume element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kappa {
    /// A plain scalar with the given phase.
    Scalar(QmodZ),
    /// A scalar multiple of the volume element `e_1 .. e_n`.
    Volume(QmodZ),
}

/// The pair of phases a commutator contributes to the two half-spin
/// representations of `so(2r)`: the volume element squares to
/// `(-1)^r` and acts on the two half-spin spaces with opposite central
/// characters.
pub fn kappa_half_spin_phases(kappa: &Kappa, r: usize) -> (QmodZ, QmodZ) {
    match kappa {
        Kappa::Scalar(p) => (*p, *p),
        Kappa::Volume(p) => {
            if r % 2 == 0 {
                (*p, p.add(&QmodZ::HALF))
            } else {
                let quarter = QmodZ::new(1, 4);
                (p.add(&quarter), p.add(&quarter.scale(3)))
            }
        }
    }
}

/// The Clifford-algebra model of a type B/D graded module: an
/// orthonormalized quadratic space together with the lifted character
/// actions.
pub struct SpinRep {
    group: FinAbGroup,
    field: CycloField,
    n: usize,
    q: usize,
    degrees: Vec<GroupElem>,
    rep: DivisionAlgebraRep,
    g0: GroupElem,
    p: CMat,
    p_inv: CMat,
    phi: MonomialMatrix,
}

/// A lifted character action: a Clifford group element together with
/// its parity (`true` for odd, i.e. determinant `-1`).
#[derive(Clone, Debug)]
pub struct SpinElement {
    /// The Clifford group element.
    pub elem: CliffordElem,
    /// Whether the element lies in the odd part.
    pub odd: bool,
}

impl SpinRep {
    /// Builds the model from raw series data: grading group, Brauer
    /// class, module degrees, diagonal support elements and the form
    /// degree `-g0`.
    pub fn new(
        group: &FinAbGroup,
        class: &BrauerClass,
        xi: &[GroupElem],
        ti: &[GroupElem],
        g0: &GroupElem,
        cap: usize,
    ) -> Result<SpinRep, OracleError> {
        // The given xi order defines the module slots: one diagonal
        // slot per support element in ti, then consecutive hyperbolic
        // pairs.
        let q = ti.len();
        let k = xi.len();
        if q > k || (k - q) % 2 != 0 {
            return Err(OracleError::Construction(
                "slot layout must be ti-many diagonal slots plus pairs".into(),
            ));
        }
        let neg_g0 = g0.neg();
        for (i, t) in ti.iter().enumerate() {
            if xi[i].scale(2).add(t) != neg_g0 {
                return Err(OracleError::Construction(format!(
                    "diagonal slot {} violates 2g + t = -g0",
                    i
                )));
            }
        }
        let mut j = q;
        while j + 1 < k {
            if xi[j].add(&xi[j + 1]) != neg_g0 {
                return Err(OracleError::Construction(format!(
                    "hyperbolic pair at slots {}, {} violates g + g' = -g0",
                    j,
                    j + 1
                )));
            }
            j += 2;
        }
        let degrees = xi.to_vec();
        let rep = standard_division_algebra(class)?;
        let n = degrees.len() * rep.dim();
        if n > cap {
            return Err(OracleError::Construction(format!(
                "quadratic space dimension {} exceeds the oracle cap {}",
                n, cap
            )));
        }
        let phi = form_matrix(&rep, degrees.len(), ti);
        if phi.transpose() != phi {
            return Err(OracleError::Construction(
                "invariant form is not symmetric".into(),
            ));
        }
        let field = CycloField::for_exponent(group.exponent());
        let (p, p_inv) = orthonormal_change(&field, &phi)?;
        // Sanity: the change of basis takes the form to the identity.
        let phi_dense = mat_from_monomial(&field, &phi);
        if !mat_is_identity(&mat_mul(&mat_mul(&mat_transpose(&p), &phi_dense), &p))
            || !mat_is_identity(&mat_mul(&p, &p_inv))
        {
            return Err(OracleError::Construction(
                "orthonormalization failed to diagonalize the form".into(),
            ));
        }
        Ok(SpinRep {
            group: group.clone(),
            field,
            n,
            q,
            degrees,
            rep,
            g0: g0.clone(),
            p,
            p_inv,
            phi,
        })
    }

    /// Dimension of the quadratic space.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The coefficient field.
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// The grading group.
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// The proper isometry induced by `chi` in the orthonormal basis,
    /// together with its parity.  The similitude is scaled by a square
    /// root of `chi(g0)`; in odd dimension an improper result is
    /// negated (the same Lie-algebra automorphism).
    pub fn isometry(&self, chi: &Character) -> Result<(CMat, bool), OracleError> {
        let diag_phases: Vec<QmodZ> = self.degrees.iter().map(|g| chi.eval(g)).collect();
        let u_mono = MonomialMatrix::diagonal(diag_phases)
            .kron(self.rep.mat(&self.rep.t_of(chi)));
        // Similitude check: u^T Phi u = chi(-g0) Phi.
        let expected = chi.eval(&self.g0).neg();
        let ratio = u_mono
            .transpose()
            .mul(&self.phi)
            .mul(&u_mono)
            .scalar_ratio(&self.phi)
            .ok_or(OracleError::NotProportional)?;
        if ratio != expected {
            return Err(OracleError::Construction(format!(
                "similitude factor is {} instead of {}",
                ratio, expected
            )));
        }
        let c = self.field.half_root(chi.eval(&self.g0));
        let u_dense = mat_scale(&mat_from_monomial(&self.field, &u_mono), &c);
        let mut u_hat = mat_mul(&self.p_inv, &mat_mul(&u_dense, &self.p));
        if !mat_is_identity(&mat_mul(&mat_transpose(&u_hat), &u_hat)) {
            return Err(OracleError::Construction(
                "scaled similitude is not orthogonal".into(),
            ));
        }
        // det(u_hat) = c^n * det(u_mono), a sign.
        let mut det = self.field.root(u_mono.det());
        for _ in 0..self.n {
            det = det.mul(&c);
        }
        let odd = match det.as_root_of_unity() {
            Some(p) if p.is_zero() => false,
            Some(p) if p == QmodZ::HALF => true,
            _ => {
                return Err(OracleError::Construction(
                    "determinant of the isometry is not a sign".into(),
                ))
            }
        };
        if odd && self.n % 2 == 1 {
            // In odd dimension -u induces the same automorphism and is
            // special; use it instead.
            u_hat = mat_scale(&u_hat, &self.field.integer(-1));
            return Ok((u_hat, false));
        }
        Ok((u_hat, odd))
    }

    /// Lifts the isometry of `chi` to the Clifford group: an invertible
    /// element whose conjugation action on degree-one elements is the
    /// isometry.
    pub fn spin_element(&self, chi: &Character) -> Result<SpinElement, OracleError> {
        let (u_hat, odd) = self.isometry(chi)?;
        let ws = reflection_vectors(&u_hat)?;
        let mut s = CliffordElem::scalar(&self.field, self.field.one());
        for w in &ws {
            s = s.mul(&CliffordElem::vector(&self.field, w));
        }
        if ws.len() % 2 == 1 {
            // Conjugation by a product of k vectors is (-1)^k times the
            // composed reflections; in even dimension the volume
            // element conjugates vectors by -1 and restores the sign.
            if self.n % 2 == 1 {
                return Err(OracleError::Construction(
                    "odd reflection count in odd dimension".into(),
                ));
            }
            s = s.mul(&CliffordElem::basis(&self.field, (1u64 << self.n) - 1));
        }
        // Verify the conjugation action column by column.
        let s_inv = s.inverse()?;
        for i in 0..self.n {
            let lhs = s
                .mul(&CliffordElem::basis(&self.field, 1 << i))
                .mul(&s_inv);
            let col: Vec<CycloNum> = (0..self.n).map(|r| u_hat[r][i].clone()).collect();
            if !lhs.sub(&CliffordElem::vector(&self.field, &col)).is_zero() {
                return Err(OracleError::Construction(
                    "lift does not implement the isometry".into(),
                ));
            }
        }
        if s.terms.keys().any(|m| m.count_ones() as usize % 2 != odd as usize) {
            return Err(OracleError::Construction(
                "lift parity disagrees with the determinant".into(),
            ));
        }
        Ok(SpinElement { elem: s, odd })
    }

    /// The scalar commutator `s t s^{-1} t^{-1}` of two lifts, which
    /// must be a scalar or a scalar multiple of the volume element.
    pub fn commutator(&self, s: &SpinElement, t: &SpinElement) -> Result<Kappa, OracleError> {
        let k = s
            .elem
            .mul(&t.elem)
            .mul(&s.elem.inverse()?)
            .mul(&t.elem.inverse()?);
        let volume = (1u64 << self.n) - 1;
        let mut it = k.terms.iter();
        match (it.next(), it.next()) {
            (Some((0, c)), None) => c
                .as_root_of_unity()
                .map(Kappa::Scalar)
                .ok_or_else(|| OracleError::Construction(
                    "commutator scalar is not a root of unity".into(),
                )),
            (Some((m, c)), None) if *m == volume => c
                .as_root_of_unity()
                .map(Kappa::Volume)
                .ok_or_else(|| OracleError::Construction(
                    "commutator coefficient is not a root of unity".into(),
                )),
            _ => Err(OracleError::Construction(
                "commutator is not scalar or volume".into(),
            )),
        }
    }

    /// The degree-one Clifford element of the module basis vector of
    /// slot `j`, expressed in the orthonormal basis.
    pub fn module_vector(&self, j: usize) -> CliffordElem {
        let col: Vec<CycloNum> = (0..self.n).map(|r| self.p_inv[r][j].clone()).collect();
        CliffordElem::vector(&self.field, &col)
    }

    /// Module slot degrees in oracle order (diagonal slots first, then
    /// hyperbolic pairs).
    pub fn degrees(&self) -> &[GroupElem] {
        &self.degrees
    }
}

/// Builds the change of basis `P` (columns: orthonormal basis in
/// module coordinates) and its inverse from the cycle structure of the
/// symmetric monomial form.
fn orthonormal_change(
    field: &CycloField,
    phi: &MonomialMatrix,
) -> Result<(CMat, CMat), OracleError> {
    let n = phi.dim();
    let mut p = mat_zero(field, n);
    let mut p_inv = mat_zero(field, n);
    let sqrt2_inv = field.sqrt2().inv();
    let i_num = field.i();
    let mut col = 0usize;
    for j in 0..n {
        let k = phi.row_of(j);
        if k == j {
            // Fixed point: Phi_jj = +-1.
            if phi.phase_of(j).is_zero() {
                p[j][col] = field.one();
                p_inv[col][j] = field.one();
            } else if phi.phase_of(j) == QmodZ::HALF {
                p[j][col] = i_num.inv();
                p_inv[col][j] = i_num.clone();
            } else {
                return Err(OracleError::Construction(
                    "diagonal form entry is not a sign".into(),
                ));
            }
            col += 1;
        } else if k > j {
            // Two-cycle with pairing value s.
            let s = field.root(phi.phase_of(j));
            let s_inv = s.inv();
            p[j][col] = sqrt2_inv.clone();
            p[k][col] = s_inv.mul(&sqrt2_inv);
            p[j][col + 1] = i_num.mul(&sqrt2_inv);
            p[k][col + 1] = i_num.neg().mul(&s_inv).mul(&sqrt2_inv);
            p_inv[col][j] = sqrt2_inv.clone();
            p_inv[col + 1][j] = i_num.neg().mul(&sqrt2_inv);
            p_inv[col][k] = s.mul(&sqrt2_inv);
            p_inv[col + 1][k] = i_num.mul(&s).mul(&sqrt2_inv);
            col += 2;
        }
    }
    if col != n {
        return Err(OracleError::Construction(
            "form permutation has a cycle longer than two".into(),
        ));
    }
    Ok((p, p_inv))
}

/// Builds the spin model for a validated series B or D datum.
pub fn spin_rep_for(spec: &GradingSpec, cap: usize) -> Result<SpinRep, OracleError> {
    match spec {
        GradingSpec::B { group, .. } => {
            // Normalize first so that g0 = e and the diagonal degrees
            // multiply to the identity; then every isometry is special.
            let normalized = spec
                .normalize_b()
                .map_err(|e| OracleError::Construction(e.to_string()))?;
            let GradingSpec::B { g0: ng0, xi: nxi, .. } = &normalized else {
                unreachable!("normalize_b returns a series B datum");
            };
            let (diag, pairs) = partition_xi(group, nxi, ng0)
                .map_err(|e| OracleError::Construction(e.to_string()))?;
            let mut ordered = diag.clone();
            for (x, y) in pairs {
                ordered.push(x);
                ordered.push(y);
            }
            let class = BrauerClass::trivial(group);
            let ti = vec![group.identity(); diag.len()];
            SpinRep::new(group, &class, &ordered, &ti, ng0, cap)
        }
        GradingSpec::DInner {
            class, g0, xi, ti, ..
        }
        | GradingSpec::DOuter {
            class, g0, xi, ti, ..
        } => SpinRep::new(spec.group(), class, xi, ti, g0, cap),
        _ => Err(OracleError::Construction(format!(
            "the spin oracle applies to series B and D, not {}",
            spec.series_name()
        ))),
    }
}

/// Commutators of the lifts of the dual standard generators, with
/// their parities.
pub struct SpinCommutators {
    /// Parity of each generator lift.
    pub parities: Vec<bool>,
    /// Pairwise commutators `kappa[i][j]` of the generator lifts.
    pub kappas: Vec<Vec<Kappa>>,
}

/// Computes all pairwise commutators of the lifted dual standard
/// generators of the grading group.
pub fn spin_commutators(rep: &SpinRep) -> Result<SpinCommutators, OracleError> {
    let group = rep.group().clone();
    let lifts: Vec<SpinElement> = (0..group.rank())
        .map(|i| rep.spin_element(&Character::from_dual_elem(group.standard_gen(i))))
        .collect::<Result<_, _>>()?;
    let parities = lifts.iter().map(|s| s.odd).collect();
    let mut kappas = Vec::new();
    for s in &lifts {
        let mut row = Vec::new();
        for t in &lifts {
            row.push(rep.commutator(s, t)?);
        }
        kappas.push(row);
    }
    Ok(SpinCommutators { parities, kappas })
}

/// Brute-force unordered pair of half-spin commutation factors of an
/// inner series D datum.
pub fn half_spin_factor_pair(
    spec: &GradingSpec,
    cap: usize,
) -> Result<(CommutationFactor, CommutationFactor), OracleError> {
    let rep = spin_rep_for(spec, cap)?;
    if rep.dim() % 2 != 0 {
        return Err(OracleError::Construction(
            "half-spin representations require even dimension".into(),
        ));
    }
    let r = rep.dim() / 2;
    let comms = spin_commutators(&rep)?;
    if comms.parities.iter().any(|&odd| odd) {
        return Err(OracleError::Construction(
            "an improper isometry appeared in an inner datum".into(),
        ));
    }
    let k = comms.kappas.len();
    let mut plus = vec![vec![QmodZ::ZERO; k]; k];
    let mut minus = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            let (p, m) = kappa_half_spin_phases(&comms.kappas[i][j], r);
            plus[i][j] = p;
            minus[i][j] = m;
        }
    }
    let group = rep.group().clone();
    let f_plus = CommutationFactor::new(Bicharacter::new(group.clone(), plus)?)?;
    let f_minus = CommutationFactor::new(Bicharacter::new(group, minus)?)?;
    Ok((f_plus, f_minus))
}

/// Brute-force spin commutation factor of a series B datum.
pub fn b_spin_factor(spec: &GradingSpec, cap: usize) -> Result<CommutationFactor, OracleError> {
    let rep = spin_rep_for(spec, cap)?;
    let comms = spin_commutators(&rep)?;
    let k = comms.kappas.len();
    let mut matrix = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            match &comms.kappas[i][j] {
                Kappa::Scalar(p) => matrix[i][j] = *p,
                Kappa::Volume(_) => {
                    return Err(OracleError::Construction(
                        "series B commutator involved the volume element".into(),
                    ))
                }
            }
        }
    }
    let group = rep.group().clone();
    Ok(CommutationFactor::new(Bicharacter::new(group, matrix)?)?)
}

/// Brute-force pair of descended commutation factors of an outer
/// series D datum: lifts of the quotient dual generators (all inside
/// the annihilator of the distinguished element `h`) commute up to
/// scalars that descend to the quotient, read in the two half-spin
/// representations.
pub fn d_outer_quotient_factor_pair(
    spec: &GradingSpec,
    cap: usize,
) -> Result<(CommutationFactor, CommutationFactor), OracleError> {
    let rep = spin_rep_for(spec, cap)?;
    let group = spec.group().clone();
    let to_err = |e: crate::gradings::GradingError| OracleError::Construction(e.to_string());
    let h = spec.distinguished_element().map_err(to_err)?;
    let h_sub = crate::abelian::subgroup_generated(&group, &[h])
        .map_err(|e| OracleError::Construction(e.to_string()))?;
    let (qg, map) = crate::abelian::quotient(&group, &h_sub)
        .map_err(|e| OracleError::Construction(e.to_string()))?;
    let hom = map.as_homomorphism();
    let r = rep.dim() / 2;
    let mut lifts = Vec::new();
    for i in 0..qg.rank() {
        let chi = hom.dual_apply(&Character::from_dual_elem(qg.standard_gen(i)));
        let s = rep.spin_element(&chi)?;
        if s.odd {
            return Err(OracleError::Construction(
                "a lift from the annihilator of h is odd".into(),
            ));
        }
        lifts.push(s);
    }
    let k = lifts.len();
    let mut plus = vec![vec![QmodZ::ZERO; k]; k];
    let mut minus = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            let kappa = rep.commutator(&lifts[i], &lifts[j])?;
            let (p, m) = kappa_half_spin_phases(&kappa, r);
            plus[i][j] = p;
            minus[i][j] = m;
        }
    }
    let f_plus = CommutationFactor::new(Bicharacter::new(qg.clone(), plus)?)?;
    let f_minus = CommutationFactor::new(Bicharacter::new(qg, minus)?)?;
    Ok((f_plus, f_minus))
}

/// Cross-term commutator check for an outer series D datum: for each
/// pair of dual standard generators whose lifts have opposite parity,
/// the commutator is a plain sign exactly when the support bicharacter
/// vanishes on the pair (a volume commutator marks the value 1/2).
/// Returns `None` when no generator pair has opposite parity.
pub fn d_outer_cross_terms_match(
    spec: &GradingSpec,
    cap: usize,
) -> Result<Option<bool>, OracleError> {
    let GradingSpec::DOuter { class, .. } = spec else {
        return Err(OracleError::Construction(
            "cross-term check applies to outer series D".into(),
        ));
    };
    let rep = spin_rep_for(spec, cap)?;
    let group = spec.group().clone();
    let beta_factor = crate::bichar::commutation_factor_from_pair(class);
    let mut lifts = Vec::new();
    for i in 0..group.rank() {
        let chi = Character::from_dual_elem(group.standard_gen(i));
        let s = rep.spin_element(&chi)?;
        lifts.push((chi, s));
    }
    let mut any = false;
    let mut ok = true;
    for (i, (chi_i, s_i)) in lifts.iter().enumerate() {
        for (chi_j, s_j) in lifts.iter().skip(i + 1) {
            if s_i.odd == s_j.odd {
                continue;
            }
            any = true;
            let observed = match rep.commutator(s_i, s_j)? {
                Kappa::Scalar(_) => QmodZ::ZERO,
                Kappa::Volume(_) => QmodZ::HALF,
            };
            if observed != beta_factor.eval(chi_i, chi_j) {
                ok = false;
            }
        }
    }
    Ok(if any { Some(ok) } else { None })
}

/// Constructive lift of a series B character action, built from its
/// eigen-decomposition instead of a reflection decomposition: one
/// module vector per diagonal `-1` eigenvalue, and one rank-two factor
/// per hyperbolic pair.
pub fn b_constructive_spin_element(
    rep: &SpinRep,
    chi: &Character,
) -> Result<CliffordElem, OracleError> {
    if rep.dim() % 2 == 0 {
        return Err(OracleError::Construction(
            "the constructive lift targets odd dimension".into(),
        ));
    }
    let field = rep.field().clone();
    let (_, _) = rep.isometry(chi)?; // validates the similitude
    let g0_phase = chi.eval(&rep.g0);
    if !g0_phase.is_zero() {
        return Err(OracleError::Construction(
            "the constructive lift expects a normalized datum".into(),
        ));
    }
    let mut s = CliffordElem::scalar(&field, field.one());
    let degrees = rep.degrees().to_vec();
    let q = rep.q;
    let mut flips = 0usize;
    for (a, g) in degrees.iter().enumerate().take(q) {
        let lam = chi.eval(g);
        if lam == QmodZ::HALF {
            s = s.mul(&rep.module_vector(a));
            flips += 1;
        } else if !lam.is_zero() {
            return Err(OracleError::Construction(
                "diagonal eigenvalue is not a sign".into(),
            ));
        }
    }
    if flips % 2 != 0 {
        return Err(OracleError::Construction(
            "odd number of sign flips on the diagonal part".into(),
        ));
    }
    let mut a = q;
    while a + 1 < degrees.len() {
        let lam = chi.eval(&degrees[a]);
        let half = field.half_root(lam);
        let v = rep.module_vector(a);
        let w = rep.module_vector(a + 1);
        let factor = v.mul(&w).scale(&half).add(&w.mul(&v).scale(&half.inv()));
        s = s.mul(&factor);
        a += 2;
    }
    Ok(s)
}
