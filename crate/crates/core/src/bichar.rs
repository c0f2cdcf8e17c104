//! Bicharacters, Brauer classes and commutation factors.
//!
//! A Brauer class of `G`-graded matrix algebras is stored as a pair `(T, β)`
//! of a support subgroup `T ⊆ G` and a nondegenerate alternating bicharacter
//! `β` on `T`.  The equivalent datum on the character group is the
//! commutation factor `β̂` with `β̂(χ₁, χ₂) = β(t₁, t₂)`, where `tᵢ ∈ T` is
//! the unique element with `χᵢ|_T = β(tᵢ, ·)`.  The group law of the graded
//! Brauer group is pointwise addition of commutation factors in `Q/Z`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::abelian::{
    perp, subgroup_generated, Character, FinAbGroup, GroupElem, Homomorphism, QmodZ, Subgroup,
};

/// Errors raised by bicharacter-level operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BicharError {
    /// Matrix entries are not well-defined modulo the factor orders.
    #[error("bicharacter matrix not well-defined over the group orders")]
    IllDefined,
    /// Matrix shape does not match the group rank.
    #[error("bicharacter matrix has the wrong shape")]
    BadShape,
    /// A bicharacter required to be alternating is not.
    #[error("bicharacter is not alternating")]
    NotAlternating,
    /// A bicharacter required to be nondegenerate has a nontrivial radical.
    #[error("bicharacter is degenerate")]
    Degenerate,
    /// Two classes over different ambient groups were combined.
    #[error("ambient group mismatch")]
    AmbientMismatch,
    /// Supplied generators do not form an independent basis of the subgroup.
    #[error("generators are not an independent basis of the subgroup")]
    NotABasis,
    /// Input outside the operation's domain.
    #[error("{0}")]
    Domain(&'static str),
}

// ---------------------------------------------------------------------------
// Bicharacter
// ---------------------------------------------------------------------------

/// A `Q/Z`-valued biadditive form on a finite abelian group, stored as a
/// matrix over the cyclic decomposition: `β(s, t) = Σ_{ij} s_i·M[i][j]·t_j`.
#[derive(Clone, PartialEq, Eq)]
pub struct Bicharacter {
    group: FinAbGroup,
    matrix: Vec<Vec<QmodZ>>,
}

impl fmt::Debug for Bicharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bicharacter({:?}, {:?})", self.group, self.matrix)
    }
}

impl Bicharacter {
    /// Construct from a matrix, checking well-definedness.
    pub fn new(group: FinAbGroup, matrix: Vec<Vec<QmodZ>>) -> Result<Bicharacter, BicharError> {
        let k = group.rank();
        if matrix.len() != k || matrix.iter().any(|row| row.len() != k) {
            return Err(BicharError::BadShape);
        }
        for i in 0..k {
            for j in 0..k {
                let m = matrix[i][j];
                if !m.scale(group.orders()[i] as i64).is_zero()
                    || !m.scale(group.orders()[j] as i64).is_zero()
                {
                    return Err(BicharError::IllDefined);
                }
            }
        }
        Ok(Bicharacter { group, matrix })
    }

    /// The zero form on a group.
    pub fn zero(group: FinAbGroup) -> Bicharacter {
        let k = group.rank();
        Bicharacter { group, matrix: vec![vec![QmodZ::ZERO; k]; k] }
    }

    /// The underlying group.
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// The defining matrix.
    pub fn matrix(&self) -> &[Vec<QmodZ>] {
        &self.matrix
    }

    /// Evaluate on two elements of the underlying group.
    pub fn eval(&self, s: &GroupElem, t: &GroupElem) -> QmodZ {
        assert_eq!(s.group(), &self.group, "group mismatch in bicharacter");
        assert_eq!(t.group(), &self.group, "group mismatch in bicharacter");
        let mut acc = QmodZ::ZERO;
        for (i, &si) in s.coords().iter().enumerate() {
            for (j, &tj) in t.coords().iter().enumerate() {
                acc = acc.add(&self.matrix[i][j].scale(si as i64).scale(tj as i64));
            }
        }
        acc
    }

    /// Pointwise sum of two forms on the same group.
    pub fn add(&self, other: &Bicharacter) -> Bicharacter {
        assert_eq!(self.group, other.group, "group mismatch in bicharacter sum");
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a.add(b)).collect())
            .collect();
        Bicharacter { group: self.group.clone(), matrix }
    }

    /// Pointwise negation.
    pub fn neg(&self) -> Bicharacter {
        let matrix = self.matrix.iter().map(|r| r.iter().map(QmodZ::neg).collect()).collect();
        Bicharacter { group: self.group.clone(), matrix }
    }

    /// Integer multiple `k·β`.
    pub fn scale(&self, k: i64) -> Bicharacter {
        let matrix = self.matrix.iter().map(|r| r.iter().map(|x| x.scale(k)).collect()).collect();
        Bicharacter { group: self.group.clone(), matrix }
    }

    /// Whether the matrix is symmetric.
    pub fn is_symmetric(&self) -> bool {
        let k = self.group.rank();
        (0..k).all(|i| (0..k).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// Whether the matrix is skew (`M + Mᵀ = 0`).
    pub fn is_skew(&self) -> bool {
        let k = self.group.rank();
        (0..k).all(|i| (0..k).all(|j| self.matrix[i][j].add(&self.matrix[j][i]).is_zero()))
    }

    /// Whether the form is alternating (skew with zero diagonal, which with
    /// biadditivity forces `β(t, t) = 0` for all `t`).
    pub fn is_alternating(&self) -> bool {
        self.is_skew() && (0..self.group.rank()).all(|i| self.matrix[i][i].is_zero())
    }

    /// Whether the form is identically zero.
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(QmodZ::is_zero))
    }

    /// The radical `{t | β(t, s) = 0 ∀ s}` as a subgroup of the underlying
    /// group, by enumeration.
    pub fn radical(&self) -> Subgroup {
        let members: Vec<GroupElem> = self
            .group
            .elements()
            .into_iter()
            .filter(|t| (0..self.group.rank()).all(|j| self.eval(t, &self.group.standard_gen(j)).is_zero()))
            .collect();
        subgroup_generated(&self.group, &members).expect("radical is a subgroup")
    }
}

// ---------------------------------------------------------------------------
// Bicharacters on subgroups
// ---------------------------------------------------------------------------

/// A bicharacter on a subgroup `T` of an ambient group, stored as a matrix
/// over the subgroup's canonical basis (its abstract cyclic decomposition).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupBicharacter {
    subgroup: Subgroup,
    form: Bicharacter,
}

impl SubgroupBicharacter {
    /// Build from a matrix over the subgroup's canonical basis.
    pub fn new(subgroup: Subgroup, matrix: Vec<Vec<QmodZ>>) -> Result<SubgroupBicharacter, BicharError> {
        let form = Bicharacter::new(subgroup.decomposition(), matrix)?;
        Ok(SubgroupBicharacter { subgroup, form })
    }

    /// Build from values on an arbitrary independent generating set of `T`.
    ///
    /// `gens` must be independent with `Π ord(gens_i) = |T|`; `matrix[i][j]`
    /// prescribes `β(gens_i, gens_j)`, and the form is transported to the
    /// canonical basis.
    pub fn from_generator_values(
        ambient: &FinAbGroup,
        gens: &[GroupElem],
        matrix: Vec<Vec<QmodZ>>,
    ) -> Result<SubgroupBicharacter, BicharError> {
        let t = subgroup_generated(ambient, gens).map_err(|_| BicharError::NotABasis)?;
        let prod: u64 = gens.iter().map(GroupElem::order).product();
        if prod != t.order() {
            return Err(BicharError::NotABasis);
        }
        // the given form lives on ⊕ Z/ord(gens_i)
        let gen_group = FinAbGroup::new(gens.iter().map(GroupElem::order).collect())
            .map_err(|_| BicharError::NotABasis)?;
        let gen_form = Bicharacter::new(gen_group.clone(), matrix)?;
        // coordinates of each member of T over `gens`, by enumeration
        let mut gen_coords: HashMap<Vec<u64>, GroupElem> = HashMap::new();
        for c in gen_group.elements() {
            let mut x = ambient.identity();
            for (ci, g) in c.coords().iter().zip(gens) {
                x = x.add(&g.scale(*ci as i64));
            }
            gen_coords.insert(x.coords().to_vec(), c);
        }
        // transport to the canonical basis
        let basis = t.basis().to_vec();
        let k = basis.len();
        let mut out = vec![vec![QmodZ::ZERO; k]; k];
        for i in 0..k {
            for j in 0..k {
                let bi = &gen_coords[basis[i].coords()];
                let bj = &gen_coords[basis[j].coords()];
                out[i][j] = gen_form.eval(bi, bj);
            }
        }
        SubgroupBicharacter::new(t, out)
    }

    /// The subgroup the form lives on.
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// The form over the subgroup's abstract decomposition.
    pub fn form(&self) -> &Bicharacter {
        &self.form
    }

    /// Evaluate on two members of the subgroup (ambient coordinates).
    pub fn eval(&self, s: &GroupElem, t: &GroupElem) -> QmodZ {
        let cs = self.subgroup.coords_in_basis(s).expect("element must lie in the subgroup");
        let ct = self.subgroup.coords_in_basis(t).expect("element must lie in the subgroup");
        let dec = self.form.group();
        self.form.eval(&dec.elem_u(&cs).unwrap(), &dec.elem_u(&ct).unwrap())
    }

    /// The radical as a subgroup of the ambient group.
    pub fn radical(&self) -> Subgroup {
        let members: Vec<GroupElem> = self
            .subgroup
            .elements()
            .iter()
            .filter(|t| self.subgroup.basis().iter().all(|s| self.eval(t, s).is_zero()))
            .cloned()
            .collect();
        subgroup_generated(self.subgroup.ambient(), &members).expect("radical is a subgroup")
    }

    /// Whether the form is alternating.
    pub fn is_alternating(&self) -> bool {
        self.form.is_alternating()
    }

    /// Whether the form is nondegenerate.
    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_trivial()
    }
}

// ---------------------------------------------------------------------------
// Brauer classes
// ---------------------------------------------------------------------------

/// A class in the `G`-graded Brauer group: a support subgroup `T ⊆ G`
/// carrying a nondegenerate alternating bicharacter `β`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BrauerClass {
    ambient: FinAbGroup,
    beta: SubgroupBicharacter,
    schur_index: u64,
}

impl BrauerClass {
    /// Construct and validate `(T, β)`.
    pub fn new(ambient: FinAbGroup, beta: SubgroupBicharacter) -> Result<BrauerClass, BicharError> {
        if beta.subgroup().ambient() != &ambient {
            return Err(BicharError::AmbientMismatch);
        }
        if !beta.is_alternating() {
            return Err(BicharError::NotAlternating);
        }
        if !beta.is_nondegenerate() {
            return Err(BicharError::Degenerate);
        }
        let t = beta.subgroup().order();
        let root = (t as f64).sqrt().round() as u64;
        // |T| is a perfect square: a consequence of the symplectic
        // decomposition, asserted at construction
        if root * root != t {
            return Err(BicharError::Degenerate);
        }
        Ok(BrauerClass { ambient, beta, schur_index: root })
    }

    /// The trivial class on `G`.
    pub fn trivial(ambient: &FinAbGroup) -> BrauerClass {
        let t = subgroup_generated(ambient, &[]).expect("trivial subgroup");
        let beta = SubgroupBicharacter::new(t, Vec::new()).expect("empty matrix");
        BrauerClass { ambient: ambient.clone(), beta, schur_index: 1 }
    }

    /// Ambient group `G`.
    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    /// Support subgroup `T`.
    pub fn support(&self) -> &Subgroup {
        self.beta.subgroup()
    }

    /// The bicharacter `β` on the support.
    pub fn beta(&self) -> &SubgroupBicharacter {
        &self.beta
    }

    /// Degree of the graded division algebra in the class: `√|T|`.
    pub fn schur_index(&self) -> u64 {
        self.schur_index
    }

    /// Whether this is the trivial class.
    pub fn is_trivial(&self) -> bool {
        self.support().is_trivial()
    }
}

// ---------------------------------------------------------------------------
// Commutation factors
// ---------------------------------------------------------------------------

/// An alternating bicharacter on `Ĝ`, presented (under the dual-basis
/// convention) as a matrix over the same cyclic decomposition as `G`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommutationFactor {
    form: Bicharacter,
}

impl CommutationFactor {
    /// Wrap an alternating form on the dual presentation.
    pub fn new(form: Bicharacter) -> Result<CommutationFactor, BicharError> {
        if !form.is_alternating() {
            return Err(BicharError::NotAlternating);
        }
        Ok(CommutationFactor { form })
    }

    /// The trivial factor on `Ĝ`.
    pub fn trivial(g: &FinAbGroup) -> CommutationFactor {
        CommutationFactor { form: Bicharacter::zero(g.clone()) }
    }

    /// The group `G` whose character group carries the factor.
    pub fn group(&self) -> &FinAbGroup {
        self.form.group()
    }

    /// The underlying form (matrix over dual coordinates).
    pub fn form(&self) -> &Bicharacter {
        &self.form
    }

    /// Evaluate on two characters.
    pub fn eval(&self, chi1: &Character, chi2: &Character) -> QmodZ {
        self.form.eval(chi1.dual_elem(), chi2.dual_elem())
    }

    /// Pointwise product of factors (sum in `Q/Z`).
    pub fn add(&self, other: &CommutationFactor) -> CommutationFactor {
        CommutationFactor { form: self.form.add(&other.form) }
    }

    /// Pointwise inverse.
    pub fn neg(&self) -> CommutationFactor {
        CommutationFactor { form: self.form.neg() }
    }

    /// Pointwise power.
    pub fn scale(&self, k: i64) -> CommutationFactor {
        CommutationFactor { form: self.form.scale(k) }
    }

    /// Whether the factor is trivial.
    pub fn is_trivial(&self) -> bool {
        self.form.is_zero()
    }

    /// The radical, as a subgroup of the dual presentation.
    pub fn radical(&self) -> Subgroup {
        self.form.radical()
    }
}

/// Build a commutation factor from a pointwise evaluation rule on `Ĝ × Ĝ`.
///
/// The rule must be biadditive and alternating; the matrix is assembled on
/// the dual standard generators and then verified against the rule on all
/// of `Ĝ × Ĝ` (a hard failure on mismatch — this is the bug trap used by the
/// theorem formulas that are stated pointwise).
pub fn factor_from_pointwise<F>(g: &FinAbGroup, rule: F) -> CommutationFactor
where
    F: Fn(&Character, &Character) -> QmodZ,
{
    let k = g.rank();
    let mut matrix = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            matrix[i][j] = rule(
                &Character::from_dual_elem(g.standard_gen(i)),
                &Character::from_dual_elem(g.standard_gen(j)),
            );
        }
    }
    let form = Bicharacter::new(g.clone(), matrix).expect("pointwise rule must be well-defined");
    let factor = CommutationFactor::new(form).expect("pointwise rule must be alternating");
    for c1 in g.characters() {
        for c2 in g.characters() {
            assert_eq!(
                factor.eval(&c1, &c2),
                rule(&c1, &c2),
                "pointwise rule is not biadditive (mismatch at {:?}, {:?})",
                c1,
                c2
            );
        }
    }
    factor
}

/// The commutation factor `β̂` of a Brauer class:
/// `β̂(χ₁, χ₂) = β(t₁, t₂)` where `tᵢ ∈ T` is the unique solution of
/// `χᵢ|_T = β(tᵢ, ·)`.
pub fn commutation_factor_from_pair(cls: &BrauerClass) -> CommutationFactor {
    let g = cls.ambient();
    let t_sub = cls.support();
    let k = g.rank();
    // t(χ) for each dual standard generator, by enumeration over T
    let solve = |chi: &Character| -> GroupElem {
        t_sub
            .elements()
            .iter()
            .find(|t| t_sub.basis().iter().all(|s| cls.beta().eval(t, s) == chi.eval(s)))
            .cloned()
            .expect("nondegeneracy guarantees a unique solution")
    };
    let ts: Vec<GroupElem> =
        (0..k).map(|i| solve(&Character::from_dual_elem(g.standard_gen(i)))).collect();
    let mut matrix = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            matrix[i][j] = cls.beta().eval(&ts[i], &ts[j]);
        }
    }
    let form = Bicharacter::new(g.clone(), matrix).expect("factor is well-defined");
    CommutationFactor::new(form).expect("factor is alternating")
}

/// Recover the pair `(T, β)` from a commutation factor:
/// `T = (rad γ̂)^⊥`, and `β(t₁, t₂) = γ̂(χ₁, χ₂)` for characters `χᵢ`
/// satisfying `ψ(tᵢ) = γ̂(ψ, χᵢ)` for all `ψ`.
pub fn pair_from_commutation_factor(gamma: &CommutationFactor) -> Result<BrauerClass, BicharError> {
    let g = gamma.group();
    let rad = gamma.radical();
    let t_sub = perp(g, &rad).map_err(|_| BicharError::AmbientMismatch)?;
    // for each basis element t of T, find χ with ψ(t) = γ̂(ψ, χ) for all ψ
    let chars = g.characters();
    let chi_for = |t: &GroupElem| -> Character {
        chars
            .iter()
            .find(|chi| {
                (0..g.rank()).all(|i| {
                    let psi = Character::from_dual_elem(g.standard_gen(i));
                    psi.eval(t) == gamma.eval(&psi, chi)
                })
            })
            .cloned()
            .expect("support elements are realized by characters")
    };
    let basis_chis: Vec<Character> = t_sub.basis().iter().map(chi_for).collect();
    let k = basis_chis.len();
    let mut matrix = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            matrix[i][j] = gamma.eval(&basis_chis[i], &basis_chis[j]);
        }
    }
    let beta = SubgroupBicharacter::new(t_sub, matrix)?;
    BrauerClass::new(g.clone(), beta)
}

// ---------------------------------------------------------------------------
// Brauer group law
// ---------------------------------------------------------------------------

/// Product of two Brauer classes: pointwise sum of commutation factors.
pub fn brauer_mul(c1: &BrauerClass, c2: &BrauerClass) -> Result<BrauerClass, BicharError> {
    if c1.ambient() != c2.ambient() {
        return Err(BicharError::AmbientMismatch);
    }
    let f = commutation_factor_from_pair(c1).add(&commutation_factor_from_pair(c2));
    pair_from_commutation_factor(&f)
}

/// Inverse of a Brauer class (the class of the opposite algebra).
pub fn brauer_inv(c: &BrauerClass) -> BrauerClass {
    pair_from_commutation_factor(&commutation_factor_from_pair(c).neg())
        .expect("inverse of a valid class is valid")
}

/// Integer power of a Brauer class.
pub fn brauer_pow(c: &BrauerClass, n: i64) -> BrauerClass {
    pair_from_commutation_factor(&commutation_factor_from_pair(c).scale(n))
        .expect("power of a valid class is valid")
}

/// Pushforward of a Brauer class along a homomorphism `f : G → G'`
/// (the graded Brauer group is a covariant functor in `G`): the image factor
/// is `β̂ ∘ (f̂ × f̂)` on `Ĝ'`, re-extracted as a pair.
pub fn brauer_pushforward(f: &Homomorphism, c: &BrauerClass) -> Result<BrauerClass, BicharError> {
    if c.ambient() != f.source() {
        return Err(BicharError::AmbientMismatch);
    }
    let factor = commutation_factor_from_pair(c);
    let gp = f.target();
    let k = gp.rank();
    let mut matrix = vec![vec![QmodZ::ZERO; k]; k];
    for i in 0..k {
        for j in 0..k {
            let ci = f.dual_apply(&Character::from_dual_elem(gp.standard_gen(i)));
            let cj = f.dual_apply(&Character::from_dual_elem(gp.standard_gen(j)));
            matrix[i][j] = factor.eval(&ci, &cj);
        }
    }
    let form = Bicharacter::new(gp.clone(), matrix)?;
    pair_from_commutation_factor(&CommutationFactor::new(form)?)
}

// ---------------------------------------------------------------------------
// Symplectic decomposition and quadratic refinement
// ---------------------------------------------------------------------------

/// Decompose `(T, β)` into hyperbolic pairs `(a_j, b_j)` with
/// `ord(a_j) = ord(b_j)`, `β(a_j, b_j) = 1/ord(a_j)` and `β` trivial across
/// distinct pairs.  Deterministic: `a_j` is the first element (in canonical
/// element order) of maximal order, `b_j` the first partner of equal order
/// with a primitive pairing value, normalized by a scalar power.
pub fn symplectic_decomposition(
    beta: &SubgroupBicharacter,
) -> Result<Vec<(GroupElem, GroupElem)>, BicharError> {
    if !beta.is_alternating() {
        return Err(BicharError::NotAlternating);
    }
    if !beta.is_nondegenerate() {
        return Err(BicharError::Degenerate);
    }
    let mut remaining: Vec<GroupElem> = beta.subgroup().elements().to_vec();
    let mut pairs = Vec::new();
    while remaining.len() > 1 {
        let max_ord = remaining.iter().map(GroupElem::order).max().unwrap();
        let a = remaining.iter().find(|x| x.order() == max_ord).unwrap().clone();
        let b_raw = remaining
            .iter()
            .find(|y| y.order() == max_ord && beta.eval(&a, y).order() == max_ord as i64)
            .cloned()
            .ok_or(BicharError::Degenerate)?;
        // normalize: β(a, b·k) = k·u/ord ⇒ choose k with k·u ≡ 1 (mod ord)
        let v = beta.eval(&a, &b_raw);
        debug_assert_eq!(v.den(), max_ord as i64);
        let u = v.num();
        let k = (1..=max_ord as i64)
            .find(|k| (k * u).rem_euclid(max_ord as i64) == 1)
            .expect("u is a unit modulo the order");
        let b = b_raw.scale(k);
        debug_assert_eq!(beta.eval(&a, &b), QmodZ::new(1, max_ord as i64));
        remaining.retain(|t| beta.eval(&a, t).is_zero() && beta.eval(&b, t).is_zero());
        pairs.push((a, b));
    }
    Ok(pairs)
}

/// A quadratic form `T → {0, 1/2} ⊂ Q/Z` on an elementary 2-subgroup whose
/// polar form is the attached alternating bicharacter:
/// `q(st) = q(s) + q(t) + β(s, t)`.
#[derive(Clone, Debug)]
pub struct QuadraticFormZ2 {
    domain: Subgroup,
    values: HashMap<Vec<u64>, QmodZ>,
}

impl QuadraticFormZ2 {
    /// The domain subgroup.
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Value at a member of the domain.
    pub fn value(&self, t: &GroupElem) -> QmodZ {
        *self.values.get(t.coords()).expect("element must lie in the domain")
    }
}

/// The quadratic refinement of `β` on an elementary 2-group fixed by the
/// standard realization: `q(a_j) = q(b_j) = 0` on a symplectic basis, all
/// other values forced by polarization.
pub fn quadratic_refinement(beta: &SubgroupBicharacter) -> Result<QuadraticFormZ2, BicharError> {
    let t_sub = beta.subgroup();
    if t_sub.basis_orders().iter().any(|&d| d != 2) {
        return Err(BicharError::Domain("quadratic refinement requires an elementary 2-group"));
    }
    let pairs = symplectic_decomposition(beta)?;
    let m = pairs.len();
    let mut values = HashMap::new();
    // enumerate Σ ξ_j a_j + η_j b_j over (ξ, η) ∈ Z₂^{2m}
    for mask in 0..(1u64 << (2 * m)) {
        let mut x = t_sub.ambient().identity();
        let mut q = QmodZ::ZERO;
        for (j, (a, b)) in pairs.iter().enumerate() {
            let xi = (mask >> (2 * j)) & 1;
            let eta = (mask >> (2 * j + 1)) & 1;
            if xi == 1 {
                x = x.add(a);
            }
            if eta == 1 {
                x = x.add(b);
            }
            if xi == 1 && eta == 1 {
                q = q.add(&QmodZ::HALF);
            }
        }
        values.insert(x.coords().to_vec(), q);
    }
    assert_eq!(values.len() as u64, t_sub.order(), "refinement covers the domain");
    Ok(QuadraticFormZ2 { domain: t_sub.clone(), values })
}
