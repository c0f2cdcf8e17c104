//! Monomial-matrix models of graded division algebras and graded
//! modules, used as independent brute-force oracles for commutation
//! factors.
//!
//! A monomial matrix has exactly one nonzero entry per row and column,
//! and all entries here are roots of unity; products, transposes,
//! Kronecker products and exterior powers stay monomial, so scalar
//! commutation relations can be read off exactly without any numerical
//! linear algebra.

use crate::abelian::{qmodz_sum, Character, FinAbGroup, GroupElem, QmodZ};
use crate::bichar::{
    symplectic_decomposition, Bicharacter, BicharError, BrauerClass, CommutationFactor,
};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors raised by the monomial oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    /// Underlying bicharacter arithmetic failed.
    #[error(transparent)]
    Bichar(#[from] BicharError),
    /// Two matrices that should be proportional are not.
    #[error("matrices are not proportional")]
    NotProportional,
    /// A structural assumption of the oracle failed.
    #[error("oracle construction failed: {0}")]
    Construction(String),
}

/// A square monomial matrix with root-of-unity entries: column `j` has
/// its unique nonzero entry `exp(2 pi i phases[j])` in row `perm[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    n: usize,
    perm: Vec<usize>,
    phases: Vec<QmodZ>,
}

impl MonomialMatrix {
    /// Builds a matrix from the row index and phase of each column.
    pub fn new(perm: Vec<usize>, phases: Vec<QmodZ>) -> MonomialMatrix {
        let n = perm.len();
        assert_eq!(phases.len(), n);
        let mut seen = vec![false; n];
        for &p in &perm {
            assert!(p < n && !seen[p], "row indices must be a permutation");
            seen[p] = true;
        }
        MonomialMatrix { n, perm, phases }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> MonomialMatrix {
        MonomialMatrix::new((0..n).collect(), vec![QmodZ::ZERO; n])
    }

    /// A diagonal matrix with the given phases.
    pub fn diagonal(phases: Vec<QmodZ>) -> MonomialMatrix {
        MonomialMatrix::new((0..phases.len()).collect(), phases)
    }

    /// Matrix size.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Row index of the nonzero entry of column `j`.
    pub fn row_of(&self, j: usize) -> usize {
        self.perm[j]
    }

    /// Phase of the nonzero entry of column `j`.
    pub fn phase_of(&self, j: usize) -> QmodZ {
        self.phases[j]
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let perm = (0..self.n).map(|j| self.perm[other.perm[j]]).collect();
        let phases = (0..self.n)
            .map(|j| self.phases[other.perm[j]].add(&other.phases[j]))
            .collect();
        MonomialMatrix::new(perm, phases)
    }

    /// Multiplication by the scalar `exp(2 pi i phase)`.
    pub fn scalar_mul(&self, phase: QmodZ) -> MonomialMatrix {
        MonomialMatrix::new(
            self.perm.clone(),
            self.phases.iter().map(|p| p.add(&phase)).collect(),
        )
    }

    /// Inverse matrix.
    pub fn inverse(&self) -> MonomialMatrix {
        let mut perm = vec![0usize; self.n];
        let mut phases = vec![QmodZ::ZERO; self.n];
        for j in 0..self.n {
            perm[self.perm[j]] = j;
            phases[self.perm[j]] = self.phases[j].neg();
        }
        MonomialMatrix::new(perm, phases)
    }

    /// Transpose.
    pub fn transpose(&self) -> MonomialMatrix {
        let mut perm = vec![0usize; self.n];
        let mut phases = vec![QmodZ::ZERO; self.n];
        for j in 0..self.n {
            perm[self.perm[j]] = j;
            phases[self.perm[j]] = self.phases[j];
        }
        MonomialMatrix::new(perm, phases)
    }

    /// Kronecker product, with indices `(i, j) -> i * other.n + j`.
    pub fn kron(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let m = other.n;
        let n = self.n * m;
        let mut perm = vec![0usize; n];
        let mut phases = vec![QmodZ::ZERO; n];
        for ja in 0..self.n {
            for jb in 0..m {
                let col = ja * m + jb;
                perm[col] = self.perm[ja] * m + other.perm[jb];
                phases[col] = self.phases[ja].add(&other.phases[jb]);
            }
        }
        MonomialMatrix::new(perm, phases)
    }

    /// Determinant, as the phase of a root of unity.
    pub fn det(&self) -> QmodZ {
        let mut sign = QmodZ::ZERO;
        let mut seen = vec![false; self.n];
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                sign = sign.add(&QmodZ::HALF);
            }
        }
        qmodz_sum(self.phases.iter().copied()).add(&sign)
    }

    /// If `self = exp(2 pi i c) * other`, returns `c`.
    pub fn scalar_ratio(&self, other: &MonomialMatrix) -> Option<QmodZ> {
        if self.n != other.n || self.perm != other.perm || self.n == 0 {
            return None;
        }
        let c = self.phases[0].sub(&other.phases[0]);
        for j in 1..self.n {
            if self.phases[j].sub(&other.phases[j]) != c {
                return None;
            }
        }
        Some(c)
    }

    /// The scalar `c` with `self * other = exp(2 pi i c) * other * self`.
    pub fn commutation_phase(&self, other: &MonomialMatrix) -> Option<QmodZ> {
        self.mul(other).scalar_ratio(&other.mul(self))
    }

    /// The `i`-th exterior power, on the lexicographically ordered
    /// basis of `i`-element subsets.
    pub fn wedge(&self, i: usize) -> MonomialMatrix {
        let subsets = subsets_lex(self.n, i);
        let index: BTreeMap<Vec<usize>, usize> =
            subsets.iter().cloned().zip(0..).collect();
        let mut perm = vec![0usize; subsets.len()];
        let mut phases = vec![QmodZ::ZERO; subsets.len()];
        for (col, s) in subsets.iter().enumerate() {
            let image: Vec<usize> = s.iter().map(|&j| self.perm[j]).collect();
            let mut sorted = image.clone();
            sorted.sort_unstable();
            // Parity of the permutation sorting the image tuple.
            let mut inv = 0usize;
            for a in 0..image.len() {
                for b in (a + 1)..image.len() {
                    if image[a] > image[b] {
                        inv += 1;
                    }
                }
            }
            let mut phase = qmodz_sum(s.iter().map(|&j| self.phases[j]));
            if inv % 2 == 1 {
                phase = phase.add(&QmodZ::HALF);
            }
            perm[col] = index[&sorted];
            phases[col] = phase;
        }
        MonomialMatrix::new(perm, phases)
    }
}

/// All `i`-element subsets of `{0, .., n-1}` in lexicographic order.
pub fn subsets_lex(n: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, i: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == i {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(n, i, j + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, i, 0, &mut cur, &mut out);
    out
}

/// The standard monomial model of the graded division algebra of a
/// Brauer class: clock and shift generators for each symplectic pair.
#[derive(Clone, Debug)]
pub struct DivisionAlgebraRep {
    class: BrauerClass,
    dim: usize,
    mats: BTreeMap<Vec<u64>, MonomialMatrix>,
}

impl DivisionAlgebraRep {
    /// Dimension `sqrt(|T|)` of the model.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The class being modeled.
    pub fn class(&self) -> &BrauerClass {
        &self.class
    }

    /// The matrix `X_t` of a support element.
    pub fn mat(&self, t: &GroupElem) -> &MonomialMatrix {
        self.mats
            .get(t.coords())
            .expect("element must lie in the support")
    }

    /// The unique `t` in the support with `chi` restricting to
    /// `beta(t, .)`.
    pub fn t_of(&self, chi: &Character) -> GroupElem {
        self.class
            .support()
            .elements()
            .iter()
            .find(|t| {
                self.class
                    .support()
                    .basis()
                    .iter()
                    .all(|s| self.class.beta().eval(t, s) == chi.eval(s))
            })
            .cloned()
            .expect("nondegenerate pairing")
    }
}

/// Builds the standard division algebra model of a Brauer class and
/// verifies all pairwise commutation relations.
pub fn standard_division_algebra(class: &BrauerClass) -> Result<DivisionAlgebraRep, OracleError> {
    let pairs = symplectic_decomposition(class.beta())?;
    let orders: Vec<u64> = pairs.iter().map(|(a, _)| a.order()).collect();
    let dim: usize = orders.iter().map(|&n| n as usize).product();
    // Per-pair clock and shift.
    let clocks: Vec<MonomialMatrix> = orders
        .iter()
        .map(|&n| {
            MonomialMatrix::diagonal((0..n as i64).map(|i| QmodZ::new(i, n as i64)).collect())
        })
        .collect();
    let shifts: Vec<MonomialMatrix> = orders
        .iter()
        .map(|&n| {
            let n = n as usize;
            MonomialMatrix::new(
                (0..n).map(|j| (j + 1) % n).collect(),
                vec![QmodZ::ZERO; n],
            )
        })
        .collect();
    // Coordinates of t in the symplectic basis, read off the pairings.
    let coords_of = |t: &GroupElem| -> Vec<(i64, i64)> {
        pairs
            .iter()
            .zip(&orders)
            .map(|((a, b), &n)| {
                let alpha = class.beta().eval(t, b);
                let beta_c = class.beta().eval(a, t);
                let to_int = |v: QmodZ| -> i64 {
                    if v.is_zero() {
                        0
                    } else {
                        v.num() * (n as i64 / v.den())
                    }
                };
                (to_int(alpha), to_int(beta_c))
            })
            .collect()
    };
    let mut mats = BTreeMap::new();
    for t in class.support().elements() {
        let mut m = MonomialMatrix::identity(1);
        for (j, (alpha, beta_c)) in coords_of(t).iter().enumerate() {
            let mut block = MonomialMatrix::identity(orders[j] as usize);
            for _ in 0..*alpha {
                block = block.mul(&clocks[j]);
            }
            for _ in 0..*beta_c {
                block = block.mul(&shifts[j]);
            }
            m = m.kron(&block);
        }
        mats.insert(t.coords().to_vec(), m);
    }
    let rep = DivisionAlgebraRep {
        class: class.clone(),
        dim,
        mats,
    };
    // Verify the commutation and cocycle structure exhaustively.
    for s in class.support().elements() {
        for t in class.support().elements() {
            let xs = rep.mat(s);
            let xt = rep.mat(t);
            let c = xs
                .commutation_phase(xt)
                .ok_or(OracleError::NotProportional)?;
            if c != class.beta().eval(s, t) {
                return Err(OracleError::Construction(format!(
                    "commutation of X_{:?} and X_{:?} is {} instead of {}",
                    s.coords(),
                    t.coords(),
                    c,
                    class.beta().eval(s, t)
                )));
            }
            let st = s.add(t);
            if xs.mul(xt).scalar_ratio(rep.mat(&st)).is_none() {
                return Err(OracleError::Construction(
                    "product is not proportional to the sum matrix".into(),
                ));
            }
        }
    }
    Ok(rep)
}

/// The monomial model of a graded module: degrees `xi` over the
/// standard division algebra of `class`.
#[derive(Clone, Debug)]
pub struct GradedRep {
    group: FinAbGroup,
    xi: Vec<GroupElem>,
    rep: DivisionAlgebraRep,
}

impl GradedRep {
    /// Builds the model; the dimension is `|xi| * sqrt(|T|)`.
    pub fn new(
        group: &FinAbGroup,
        class: &BrauerClass,
        xi: &[GroupElem],
    ) -> Result<GradedRep, OracleError> {
        Ok(GradedRep {
            group: group.clone(),
            xi: xi.to_vec(),
            rep: standard_division_algebra(class)?,
        })
    }

    /// Total dimension of the module.
    pub fn dim(&self) -> usize {
        self.xi.len() * self.rep.dim()
    }

    /// The underlying division algebra model.
    pub fn division_algebra(&self) -> &DivisionAlgebraRep {
        &self.rep
    }

    /// The grading group.
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// The projective action `u_chi = diag(chi(g_i)) (x) X_{t(chi)}`.
    pub fn u(&self, chi: &Character) -> MonomialMatrix {
        let diag =
            MonomialMatrix::diagonal(self.xi.iter().map(|g| chi.eval(g)).collect());
        diag.kron(self.rep.mat(&self.rep.t_of(chi)))
    }
}

/// The commutation factor of a projective character action, computed
/// from scalar commutators on the dual standard generators.
pub fn factor_from_action(
    group: &FinAbGroup,
    action: impl Fn(&Character) -> MonomialMatrix,
) -> Result<CommutationFactor, OracleError> {
    let k = group.rank();
    let us: Vec<MonomialMatrix> = (0..k)
        .map(|i| action(&Character::from_dual_elem(group.standard_gen(i))))
        .collect();
    let mut matrix = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            matrix[i][j] = us[i]
                .commutation_phase(&us[j])
                .ok_or(OracleError::NotProportional)?;
        }
    }
    let form = Bicharacter::new(group.clone(), matrix)
        .map_err(OracleError::Bichar)?;
    CommutationFactor::new(form).map_err(OracleError::Bichar)
}

/// Brute-force commutation factor of a graded module action.
pub fn commutation_factor_bruteforce(
    group: &FinAbGroup,
    class: &BrauerClass,
    xi: &[GroupElem],
) -> Result<CommutationFactor, OracleError> {
    let rep = GradedRep::new(group, class, xi)?;
    factor_from_action(group, |chi| rep.u(chi))
}

/// Brute-force commutation factor of the `i`-th exterior power of a
/// graded module action.
pub fn wedge_commutation_factor(
    group: &FinAbGroup,
    class: &BrauerClass,
    xi: &[GroupElem],
    i: usize,
) -> Result<CommutationFactor, OracleError> {
    let rep = GradedRep::new(group, class, xi)?;
    factor_from_action(group, |chi| rep.u(chi).wedge(i))
}

/// Determinant phase of the support matrix `X_t`.
pub fn det_x(rep: &DivisionAlgebraRep, t: &GroupElem) -> QmodZ {
    rep.mat(t).det()
}

/// The block monomial matrix of the bilinear form of a series B/D
/// datum: `X_{t_i}` blocks on the diagonal part and unit hyperbolic
/// blocks on the paired part.
pub fn form_matrix(
    rep: &DivisionAlgebraRep,
    xi_len: usize,
    ti: &[GroupElem],
) -> MonomialMatrix {
    let ell = rep.dim();
    let k = xi_len;
    let q = ti.len();
    let n = k * ell;
    let mut perm = vec![0usize; n];
    let mut phases = vec![QmodZ::ZERO; n];
    for i in 0..k {
        if i < q {
            let block = rep.mat(&ti[i]);
            for d in 0..ell {
                perm[i * ell + d] = i * ell + block.row_of(d);
                phases[i * ell + d] = block.phase_of(d);
            }
        }
    }
    let mut j = q;
    while j + 1 < k {
        for d in 0..ell {
            perm[j * ell + d] = (j + 1) * ell + d;
            perm[(j + 1) * ell + d] = j * ell + d;
        }
        j += 2;
    }
    MonomialMatrix::new(perm, phases)
}

/// Checks the similitude congruence `u^T Phi u = psi(-g0) Phi` for the
/// action of one character.
pub fn form_congruence_holds(
    phi: &MonomialMatrix,
    u: &MonomialMatrix,
    psi_g0_inv: QmodZ,
) -> bool {
    u.transpose()
        .mul(phi)
        .mul(u)
        .scalar_ratio(phi)
        .map(|c| c == psi_g0_inv)
        .unwrap_or(false)
}
