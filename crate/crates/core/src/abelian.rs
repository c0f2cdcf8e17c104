//! Exact arithmetic for finite abelian groups.
//!
//! A group is a product of cyclic factors `Z_{n_1} × … × Z_{n_k}`; elements
//! and characters are residue vectors over that decomposition.  Character
//! values live in the additive group `Q/Z` (a reduced fraction `p/q` with
//! `0 ≤ p < q`), standing for the root of unity `exp(2πi·p/q)`.  All
//! operations are pure functions over immutable values.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

/// Errors raised by group-level operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbelianError {
    /// An element (or character) was used with a group it does not belong to.
    #[error("element does not belong to the expected group")]
    GroupMismatch,
    /// A coordinate vector has the wrong length for the group.
    #[error("coordinate vector has length {got}, expected {expected}")]
    BadCoords { got: usize, expected: usize },
    /// A cyclic factor order was zero or the group order overflowed.
    #[error("invalid cyclic factor orders")]
    BadOrders,
    /// A claimed subgroup is not a subgroup of the ambient group.
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    /// A character prescription on a subgroup is inconsistent.
    #[error("inconsistent character prescription on subgroup")]
    InconsistentPrescription,
}

// ---------------------------------------------------------------------------
// Q/Z
// ---------------------------------------------------------------------------

/// An element of `Q/Z`: a reduced fraction `p/q` with `0 ≤ p < q`.
///
/// The zero element denotes the field value `1 ∈ F^×` under `exp(2πi·)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: i64,
    den: i64,
}

impl QmodZ {
    /// The zero class (the root of unity `1`).
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };
    /// The class `1/2` (the root of unity `−1`).
    pub const HALF: QmodZ = QmodZ { num: 1, den: 2 };

    /// Construct `p/q` reduced modulo 1.  Panics if `q = 0`.
    pub fn new(p: i64, q: i64) -> QmodZ {
        assert!(q != 0, "zero denominator in Q/Z");
        let q = q.abs();
        let p = p.rem_euclid(q);
        let g = p.gcd(&q);
        QmodZ { num: p / g, den: q / g }
    }

    /// Numerator of the reduced representative.
    pub fn num(&self) -> i64 {
        self.num
    }

    /// Denominator of the reduced representative (= additive order).
    pub fn den(&self) -> i64 {
        self.den
    }

    /// Additive order in `Q/Z`.
    pub fn order(&self) -> i64 {
        self.den
    }

    /// Whether this is the zero class.
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Sum in `Q/Z`.
    pub fn add(&self, other: &QmodZ) -> QmodZ {
        let den = self.den.lcm(&other.den);
        QmodZ::new(self.num * (den / self.den) + other.num * (den / other.den), den)
    }

    /// Additive inverse.
    pub fn neg(&self) -> QmodZ {
        QmodZ::new(-self.num, self.den)
    }

    /// Difference in `Q/Z`.
    pub fn sub(&self, other: &QmodZ) -> QmodZ {
        self.add(&other.neg())
    }

    /// Integer multiple `k·x`.
    pub fn scale(&self, k: i64) -> QmodZ {
        QmodZ::new(self.num * k.rem_euclid(self.den), self.den)
    }

    /// Parse from the canonical `"p/q"` (or plain integer) form.
    pub fn parse(s: &str) -> Option<QmodZ> {
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().ok()?;
                let q: i64 = q.trim().parse().ok()?;
                if q == 0 {
                    return None;
                }
                Some(QmodZ::new(p, q))
            }
            None => {
                let p: i64 = s.trim().parse().ok()?;
                Some(QmodZ::new(p, 1))
            }
        }
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Sum of an iterator of `Q/Z` values.
pub fn qmodz_sum<I: IntoIterator<Item = QmodZ>>(vals: I) -> QmodZ {
    vals.into_iter().fold(QmodZ::ZERO, |a, b| a.add(&b))
}

// ---------------------------------------------------------------------------
// Groups and elements
// ---------------------------------------------------------------------------

/// A finite abelian group presented as a product of cyclic factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    orders: Vec<u64>,
}

impl FinAbGroup {
    /// Construct from cyclic factor orders (each ≥ 1; overflow-checked).
    pub fn new(orders: Vec<u64>) -> Result<FinAbGroup, AbelianError> {
        if orders.iter().any(|&n| n == 0) {
            return Err(AbelianError::BadOrders);
        }
        orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or(AbelianError::BadOrders)?;
        Ok(FinAbGroup { orders })
    }

    /// The cyclic factor orders.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Group cardinality.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent (lcm of the factor orders).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |a, &b| a.lcm(&b))
    }

    /// The identity element.
    pub fn identity(&self) -> GroupElem {
        GroupElem { group: self.clone(), coords: vec![0; self.orders.len()] }
    }

    /// Build an element from coordinates (reduced modulo the orders).
    pub fn elem(&self, coords: &[i64]) -> Result<GroupElem, AbelianError> {
        if coords.len() != self.orders.len() {
            return Err(AbelianError::BadCoords { got: coords.len(), expected: self.orders.len() });
        }
        let coords = coords
            .iter()
            .zip(&self.orders)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
            .collect();
        Ok(GroupElem { group: self.clone(), coords })
    }

    /// Build an element from unsigned coordinates.
    pub fn elem_u(&self, coords: &[u64]) -> Result<GroupElem, AbelianError> {
        let signed: Vec<i64> = coords.iter().map(|&c| c as i64).collect();
        self.elem(&signed)
    }

    /// All elements, in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut coords = vec![0u64; self.orders.len()];
        loop {
            out.push(GroupElem { group: self.clone(), coords: coords.clone() });
            // increment mixed-radix counter, least significant last
            let mut i = self.orders.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < self.orders[i] {
                    break;
                }
                coords[i] = 0;
            }
        }
    }

    /// All characters, in lexicographic coordinate order.
    pub fn characters(&self) -> Vec<Character> {
        self.elements().into_iter().map(Character::from_dual_elem).collect()
    }

    /// The `i`-th standard generator (coordinate vector `e_i`).
    pub fn standard_gen(&self, i: usize) -> GroupElem {
        let mut coords = vec![0u64; self.orders.len()];
        if self.orders[i] > 1 {
            coords[i] = 1;
        }
        GroupElem { group: self.clone(), coords }
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{:?}", self.orders)
    }
}

/// An element of a [`FinAbGroup`], written additively.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    // `coords` first so the derived ordering is lexicographic on coordinates
    // within a fixed group (all comparisons in practice share the group).
    coords: Vec<u64>,
    group: FinAbGroup,
}

impl GroupElem {
    /// The owning group.
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// Residue coordinates.
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Sum of two elements of the same group.
    pub fn add(&self, other: &GroupElem) -> GroupElem {
        assert_eq!(self.group, other.group, "group mismatch in element addition");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.orders())
            .map(|((&a, &b), &n)| (a + b) % n.max(1))
            .collect();
        GroupElem { group: self.group.clone(), coords }
    }

    /// Additive inverse.
    pub fn neg(&self) -> GroupElem {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders())
            .map(|(&a, &n)| if a == 0 { 0 } else { n - a })
            .collect();
        GroupElem { group: self.group.clone(), coords }
    }

    /// Difference of two elements of the same group.
    pub fn sub(&self, other: &GroupElem) -> GroupElem {
        self.add(&other.neg())
    }

    /// Integer multiple `k·g`.
    pub fn scale(&self, k: i64) -> GroupElem {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders())
            .map(|(&a, &n)| ((a as i64 * k).rem_euclid(n as i64)) as u64)
            .collect();
        GroupElem { group: self.group.clone(), coords }
    }

    /// Additive order of the element.
    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.orders())
            .fold(1u64, |acc, (&a, &n)| {
                let ord = if a == 0 { 1 } else { n / a.gcd(&n) };
                acc.lcm(&ord)
            })
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// Sum of an iterator of elements of one group.
pub fn elem_sum<'a, I: IntoIterator<Item = &'a GroupElem>>(g: &FinAbGroup, it: I) -> GroupElem {
    it.into_iter().fold(g.identity(), |a, b| a.add(b))
}

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

/// A character of a [`FinAbGroup`], identified with a residue vector under
/// the self-duality induced by the cyclic decomposition:
/// `χ(g) = Σ_i coords_i · g_i / n_i` in `Q/Z`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    elem: GroupElem,
}

impl Character {
    /// View a dual-group element (same decomposition) as a character.
    pub fn from_dual_elem(elem: GroupElem) -> Character {
        Character { elem }
    }

    /// The underlying dual-group element.
    pub fn dual_elem(&self) -> &GroupElem {
        &self.elem
    }

    /// The group this is a character of.
    pub fn group(&self) -> &FinAbGroup {
        self.elem.group()
    }

    /// Character coordinates.
    pub fn coords(&self) -> &[u64] {
        self.elem.coords()
    }

    /// Evaluate at a group element, in `Q/Z`.
    pub fn eval(&self, g: &GroupElem) -> QmodZ {
        assert_eq!(self.group(), g.group(), "group mismatch in character evaluation");
        qmodz_sum(
            self.coords()
                .iter()
                .zip(g.coords())
                .zip(self.group().orders())
                .map(|((&c, &a), &n)| QmodZ::new((c as i64) * (a as i64), n as i64)),
        )
    }

    /// Whether this is the trivial character.
    pub fn is_trivial(&self) -> bool {
        self.elem.is_identity()
    }

    /// Product (sum of dual elements).
    pub fn add(&self, other: &Character) -> Character {
        Character { elem: self.elem.add(&other.elem) }
    }

    /// Inverse character.
    pub fn neg(&self) -> Character {
        Character { elem: self.elem.neg() }
    }

    /// Power `k·χ`.
    pub fn scale(&self, k: i64) -> Character {
        Character { elem: self.elem.scale(k) }
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ{:?}", self.elem.coords())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// Smith normal form `U·A·V = D` with unimodular `U`, `V` and diagonal `D`
/// whose entries satisfy `d_1 | d_2 | …` and are nonnegative.
pub struct Snf {
    /// Left transform (rows × rows).
    pub u: Vec<Vec<i128>>,
    /// Inverse of the left transform.
    pub u_inv: Vec<Vec<i128>>,
    /// Right transform (cols × cols).
    pub v: Vec<Vec<i128>>,
    /// Diagonal entries of `D` (length = min(rows, cols)).
    pub diag: Vec<i128>,
}

fn identity_matrix(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Compute the Smith normal form of an integer matrix.
pub fn smith_normal_form(a: &[Vec<i128>]) -> Snf {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut u = identity_matrix(rows);
    let mut u_inv = identity_matrix(rows);
    let mut v = identity_matrix(cols);

    // elementary row ops, mirrored on u and (inversely) on u_inv
    let swap_rows = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        m.swap(i, j);
        u.swap(i, j);
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    };
    let add_row = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, c: i128, src: usize, dst: usize| {
        for k in 0..m[0].len().max(0) {
            m[dst][k] += c * m[src][k];
        }
        for k in 0..u[0].len() {
            u[dst][k] += c * u[src][k];
        }
        for row in ui.iter_mut() {
            let t = row[dst];
            row[src] -= c * t;
        }
    };
    let neg_row = |m: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, ui: &mut Vec<Vec<i128>>, i: usize| {
        for x in m[i].iter_mut() {
            *x = -*x;
        }
        for x in u[i].iter_mut() {
            *x = -*x;
        }
        for row in ui.iter_mut() {
            row[i] = -row[i];
        }
    };
    let swap_cols = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    let add_col = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, c: i128, src: usize, dst: usize| {
        for row in m.iter_mut() {
            let t = row[src];
            row[dst] += c * t;
        }
        for row in v.iter_mut() {
            let t = row[src];
            row[dst] += c * t;
        }
    };
    let neg_col = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize| {
        for row in m.iter_mut() {
            row[i] = -row[i];
        }
        for row in v.iter_mut() {
            row[i] = -row[i];
        }
    };

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // find a pivot of minimal absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            swap_rows(&mut m, &mut u, &mut u_inv, t, pi);
        }
        if pj != t {
            swap_cols(&mut m, &mut v, t, pj);
        }
        // clear row and column t
        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    add_row(&mut m, &mut u, &mut u_inv, -q, t, i);
                    if m[i][t] != 0 {
                        swap_rows(&mut m, &mut u, &mut u_inv, t, i);
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    add_col(&mut m, &mut v, -q, t, j);
                    if m[t][j] != 0 {
                        swap_cols(&mut m, &mut v, t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // divisibility fix: ensure m[t][t] divides every later entry
        let mut fixed = true;
        'outer: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if m[i][j] % m[t][t] != 0 {
                    add_row(&mut m, &mut u, &mut u_inv, 1, i, t);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue; // re-run the pivot clearing at position t
        }
        if m[t][t] < 0 {
            neg_row(&mut m, &mut u, &mut u_inv, t);
        }
        t += 1;
    }
    // remaining diagonal entries (zero block) — normalize sign anyway
    for i in 0..n {
        if m[i][i] < 0 {
            neg_col(&mut m, &mut v, i);
        }
    }
    let diag = (0..n).map(|i| m[i][i]).collect();
    Snf { u, u_inv, v, diag }
}

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

/// A subgroup of a [`FinAbGroup`], held both as a canonical sorted element
/// set and as an independent basis (computed via Smith normal form) that
/// presents the subgroup as its own cyclic-factor product.
#[derive(Clone)]
pub struct Subgroup {
    ambient: FinAbGroup,
    generators: Vec<GroupElem>,
    elems: Vec<GroupElem>,
    basis: Vec<GroupElem>,
    basis_orders: Vec<u64>,
    coords_of: HashMap<Vec<u64>, Vec<u64>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.elems == other.elems
    }
}
impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {:?})", self.elems.len(), self.ambient)
    }
}

impl Subgroup {
    /// Ambient group.
    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    /// Originally supplied generators.
    pub fn generators(&self) -> &[GroupElem] {
        &self.generators
    }

    /// Canonical element set (sorted lexicographically by coordinates).
    pub fn elements(&self) -> &[GroupElem] {
        &self.elems
    }

    /// Subgroup cardinality.
    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    /// Whether this is the trivial subgroup.
    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    /// Membership test.
    pub fn contains(&self, g: &GroupElem) -> bool {
        g.group() == &self.ambient
            && self.elems.binary_search_by(|e| e.coords().cmp(g.coords())).is_ok()
    }

    /// Whether `self ⊆ other` (same ambient).
    pub fn is_contained_in(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.elems.iter().all(|e| other.contains(e))
    }

    /// Independent basis elements `t_1, …, t_m` with the subgroup equal to
    /// the internal direct sum of the `⟨t_i⟩`.
    pub fn basis(&self) -> &[GroupElem] {
        &self.basis
    }

    /// Orders `d_i` of the basis elements, with `d_1 | d_2 | …` and all > 1.
    pub fn basis_orders(&self) -> &[u64] {
        &self.basis_orders
    }

    /// The subgroup as an abstract group `Z_{d_1} × … × Z_{d_m}`.
    pub fn decomposition(&self) -> FinAbGroup {
        FinAbGroup::new(self.basis_orders.clone()).expect("basis orders are valid")
    }

    /// Coordinates of a member element over the basis.
    pub fn coords_in_basis(&self, g: &GroupElem) -> Option<Vec<u64>> {
        self.coords_of.get(g.coords()).cloned()
    }

    /// The member with given basis coordinates.
    pub fn elem_from_basis_coords(&self, c: &[u64]) -> GroupElem {
        assert_eq!(c.len(), self.basis.len());
        let mut acc = self.ambient.identity();
        for (ci, b) in c.iter().zip(&self.basis) {
            acc = acc.add(&b.scale(*ci as i64));
        }
        acc
    }
}

/// The smallest subgroup of `g` containing `gens`, in canonical form.
pub fn subgroup_generated(g: &FinAbGroup, gens: &[GroupElem]) -> Result<Subgroup, AbelianError> {
    for x in gens {
        if x.group() != g {
            return Err(AbelianError::GroupMismatch);
        }
    }
    // element closure
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    let mut stack = vec![g.identity()];
    seen.insert(g.identity().coords().to_vec(), ());
    while let Some(x) = stack.pop() {
        for gen in gens {
            let y = x.add(gen);
            if seen.insert(y.coords().to_vec(), ()).is_none() {
                stack.push(y);
            }
        }
    }
    let mut elems: Vec<GroupElem> = seen
        .keys()
        .map(|c| GroupElem { group: g.clone(), coords: c.clone() })
        .collect();
    elems.sort();

    // basis via SNF: the subgroup is Z^m modulo the kernel lattice of
    // Z^m → G, x ↦ Σ x_i·gens_i; the kernel is the x-projection of the
    // integer kernel of [M | -diag(n)].
    let k = g.rank();
    let m = gens.len();
    let (basis, basis_orders) = if m == 0 || k == 0 {
        (Vec::new(), Vec::new())
    } else {
        let mut a = vec![vec![0i128; m + k]; k];
        for (j, gen) in gens.iter().enumerate() {
            for i in 0..k {
                a[i][j] = gen.coords()[i] as i128;
            }
        }
        for i in 0..k {
            a[i][m + i] = -(g.orders()[i] as i128);
        }
        let snf = smith_normal_form(&a);
        let rank = snf.diag.iter().filter(|&&d| d != 0).count();
        // kernel basis of a = columns of V past the rank; keep x-rows
        let mut kp = vec![vec![0i128; m + k - rank]; m];
        for (cidx, j) in (rank..m + k).enumerate() {
            for i in 0..m {
                kp[i][cidx] = snf.v[i][j];
            }
        }
        let snf2 = smith_normal_form(&kp);
        // subgroup ≅ Z^m / ker ≅ ⊕ Z/d_i via x ↦ U₂x; factor-i generator is
        // Σ_j (U₂⁻¹)_{ji} gens_j
        let mut basis = Vec::new();
        let mut orders = Vec::new();
        for i in 0..m {
            let d = if i < snf2.diag.len() { snf2.diag[i] } else { 0 };
            assert!(d != 0, "subgroup of a finite group must be finite");
            if d == 1 {
                continue;
            }
            let mut t = g.identity();
            for (j, gen) in gens.iter().enumerate() {
                t = t.add(&gen.scale(snf2.u_inv[j][i] as i64));
            }
            basis.push(t);
            orders.push(d as u64);
        }
        (basis, orders)
    };
    let expected: u64 = basis_orders.iter().product();
    assert_eq!(expected, elems.len() as u64, "basis must span the subgroup");
    for (b, &d) in basis.iter().zip(&basis_orders) {
        assert_eq!(b.order(), d, "basis element order mismatch");
    }

    // basis-coordinate lookup for every member
    let mut coords_of = HashMap::new();
    let mut c = vec![0u64; basis_orders.len()];
    loop {
        let mut x = g.identity();
        for (ci, b) in c.iter().zip(&basis) {
            x = x.add(&b.scale(*ci as i64));
        }
        coords_of.insert(x.coords().to_vec(), c.clone());
        let mut i = basis_orders.len();
        loop {
            if i == 0 {
                assert_eq!(coords_of.len(), elems.len(), "basis coordinates must be unique");
                return Ok(Subgroup {
                    ambient: g.clone(),
                    generators: gens.to_vec(),
                    elems,
                    basis,
                    basis_orders,
                    coords_of,
                });
            }
            i -= 1;
            c[i] += 1;
            if c[i] < basis_orders[i] {
                break;
            }
            c[i] = 0;
        }
    }
}

/// The subgroup given by an explicit element set (must be closed).
pub fn subgroup_from_elements(g: &FinAbGroup, elems: &[GroupElem]) -> Result<Subgroup, AbelianError> {
    let s = subgroup_generated(g, elems)?;
    if s.order() != elems.len() as u64 {
        return Err(AbelianError::NotSubgroup);
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

/// The projection `G → G/H` attached to a quotient presentation.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: FinAbGroup,
    target: FinAbGroup,
    /// Rows of the left SNF transform for the kept (order > 1) factors.
    rows: Vec<Vec<i128>>,
}

impl QuotientMap {
    /// Source group `G`.
    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    /// Target group `G/H`.
    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    /// Apply the projection.
    pub fn project(&self, g: &GroupElem) -> GroupElem {
        assert_eq!(g.group(), &self.source, "group mismatch in projection");
        let coords: Vec<i64> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(g.coords())
                    .map(|(&u, &c)| u * c as i128)
                    .sum::<i128>() as i64
            })
            .collect();
        self.target.elem(&coords).expect("projection has correct length")
    }

    /// Some preimage of a quotient element (found by enumeration).
    pub fn any_preimage(&self, q: &GroupElem) -> GroupElem {
        assert_eq!(q.group(), &self.target, "group mismatch in preimage");
        self.source
            .elements()
            .into_iter()
            .find(|g| &self.project(g) == q)
            .expect("projection is surjective")
    }

    /// View the projection as a homomorphism (images of standard generators).
    pub fn as_homomorphism(&self) -> Homomorphism {
        let images = (0..self.source.rank()).map(|i| self.project(&self.source.standard_gen(i))).collect();
        Homomorphism::new(self.source.clone(), self.target.clone(), images)
            .expect("projection is a homomorphism")
    }
}

/// A cyclic-factor presentation of `G/H` together with the projection.
pub fn quotient(g: &FinAbGroup, h: &Subgroup) -> Result<(FinAbGroup, QuotientMap), AbelianError> {
    if h.ambient() != g {
        return Err(AbelianError::NotSubgroup);
    }
    if h.is_trivial() {
        // Keep the presentation of G itself (SNF may reorder factors).
        let k = g.rank();
        let mut rows = vec![vec![0i128; k]; k];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
        }
        let map = QuotientMap { source: g.clone(), target: g.clone(), rows };
        return Ok((g.clone(), map));
    }
    let k = g.rank();
    let gens = h.generators();
    let m = gens.len();
    // relation matrix of G/H: columns = generators of H and the order relations
    let mut a = vec![vec![0i128; m + k]; k];
    for (j, gen) in gens.iter().enumerate() {
        for i in 0..k {
            a[i][j] = gen.coords()[i] as i128;
        }
    }
    for i in 0..k {
        a[i][m + i] = g.orders()[i] as i128;
    }
    let snf = smith_normal_form(&a);
    let mut orders = Vec::new();
    let mut rows = Vec::new();
    for i in 0..k {
        let d = snf.diag[i];
        assert!(d > 0, "quotient of a finite group is finite");
        if d > 1 {
            orders.push(d as u64);
            rows.push(snf.u[i].clone());
        }
    }
    let target = FinAbGroup::new(orders)?;
    let map = QuotientMap { source: g.clone(), target: target.clone(), rows };
    debug_assert!(h.elements().iter().all(|x| map.project(x).is_identity()));
    Ok((target, map))
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

/// A homomorphism of finite abelian groups, given by the images of the
/// standard generators of the source.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    source: FinAbGroup,
    target: FinAbGroup,
    images: Vec<GroupElem>,
}

impl Homomorphism {
    /// Construct and check well-definedness (`n_i · f(e_i) = 0`).
    pub fn new(
        source: FinAbGroup,
        target: FinAbGroup,
        images: Vec<GroupElem>,
    ) -> Result<Homomorphism, AbelianError> {
        if images.len() != source.rank() {
            return Err(AbelianError::BadCoords { got: images.len(), expected: source.rank() });
        }
        for (img, &n) in images.iter().zip(source.orders()) {
            if img.group() != &target {
                return Err(AbelianError::GroupMismatch);
            }
            if !img.scale(n as i64).is_identity() {
                return Err(AbelianError::GroupMismatch);
            }
        }
        Ok(Homomorphism { source, target, images })
    }

    /// Identity homomorphism.
    pub fn identity(g: &FinAbGroup) -> Homomorphism {
        let images = (0..g.rank()).map(|i| g.standard_gen(i)).collect();
        Homomorphism { source: g.clone(), target: g.clone(), images }
    }

    /// Source group.
    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    /// Target group.
    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    /// Apply to an element.
    pub fn apply(&self, g: &GroupElem) -> GroupElem {
        assert_eq!(g.group(), &self.source, "group mismatch in homomorphism");
        let mut acc = self.target.identity();
        for (&c, img) in g.coords().iter().zip(&self.images) {
            acc = acc.add(&img.scale(c as i64));
        }
        acc
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        assert_eq!(&self.target, other.source());
        let images = self.images.iter().map(|x| other.apply(x)).collect();
        Homomorphism { source: self.source.clone(), target: other.target.clone(), images }
    }

    /// The dual map `Ĝ' → Ĝ`, `χ ↦ χ∘f`, on character coordinates.
    pub fn dual_apply(&self, chi: &Character) -> Character {
        assert_eq!(chi.group(), &self.target, "group mismatch in dual map");
        // (χ∘f) has i-th coordinate c_i with c_i/n_i = χ(f(e_i)) in Q/Z
        let coords: Vec<i64> = self
            .images
            .iter()
            .zip(self.source.orders())
            .map(|(img, &n)| {
                let v = chi.eval(img);
                debug_assert_eq!((n as i64) % v.den(), 0, "character order must divide n_i");
                v.num() * ((n as i64) / v.den())
            })
            .collect();
        Character::from_dual_elem(self.source.elem(&coords).expect("correct length"))
    }
}

// ---------------------------------------------------------------------------
// Perp duality
// ---------------------------------------------------------------------------

/// The annihilator `{χ : χ(s) = 0 ∀ s ∈ S}` of a subgroup, as a subgroup of
/// the dual group (presented over the same cyclic decomposition).  Because
/// `Ĝ ≅ G` under the dual-basis convention, the same operation also sends a
/// subgroup of `Ĝ` to its annihilator in `G`.
pub fn perp(g: &FinAbGroup, s: &Subgroup) -> Result<Subgroup, AbelianError> {
    if s.ambient() != g {
        return Err(AbelianError::NotSubgroup);
    }
    let members: Vec<GroupElem> = g
        .elements()
        .into_iter()
        .filter(|c| {
            let chi = Character::from_dual_elem(c.clone());
            s.basis().iter().all(|t| chi.eval(t).is_zero())
        })
        .collect();
    subgroup_from_elements(g, &members)
}

/// All characters of `G` extending the prescription `gens[i] ↦ values[i]` on
/// the subgroup `T`.  Returns the full coset of extensions (size `|G|/|T|`),
/// or an empty list iff the prescription is inconsistent on relations of `T`.
pub fn solve_character_on_subgroup(
    t: &Subgroup,
    gens: &[GroupElem],
    values: &[QmodZ],
) -> Result<Vec<Character>, AbelianError> {
    if gens.len() != values.len() {
        return Err(AbelianError::BadCoords { got: values.len(), expected: gens.len() });
    }
    for x in gens {
        if !t.contains(x) {
            return Err(AbelianError::GroupMismatch);
        }
    }
    let out: Vec<Character> = t
        .ambient()
        .characters()
        .into_iter()
        .filter(|chi| gens.iter().zip(values).all(|(x, v)| chi.eval(x) == *v))
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(orders: &[u64]) -> FinAbGroup {
        FinAbGroup::new(orders.to_vec()).unwrap()
    }

    #[test]
    fn qmodz_arithmetic() {
        let a = QmodZ::new(1, 2);
        let b = QmodZ::new(1, 3);
        assert_eq!(a.add(&b), QmodZ::new(5, 6));
        assert_eq!(a.add(&a), QmodZ::ZERO);
        assert_eq!(QmodZ::new(7, 4), QmodZ::new(3, 4));
        assert_eq!(QmodZ::new(-1, 4), QmodZ::new(3, 4));
        assert_eq!(QmodZ::new(2, 4), QmodZ::HALF);
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(QmodZ::parse("3/4"), Some(QmodZ::new(3, 4)));
        assert_eq!(QmodZ::parse("0"), Some(QmodZ::ZERO));
        assert_eq!(QmodZ::new(1, 6).scale(3), QmodZ::HALF);
    }

    #[test]
    fn character_additivity_exhaustive() {
        // χ(g+h) = χ(g)+χ(h) for |G| ≤ 64 samples
        for orders in [vec![2, 2], vec![4, 2], vec![3, 3], vec![6, 2]] {
            let g = z(&orders);
            for chi in g.characters() {
                for x in g.elements() {
                    for y in g.elements() {
                        assert_eq!(chi.eval(&x.add(&y)), chi.eval(&x).add(&chi.eval(&y)));
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_generated_examples() {
        let g = z(&[2, 2]);
        let a = g.elem(&[1, 0]).unwrap();
        let s = subgroup_generated(&g, &[a.clone()]).unwrap();
        assert_eq!(s.order(), 2);
        assert!(s.contains(&a));
        assert!(s.contains(&g.identity()));

        let e = subgroup_generated(&g, &[]).unwrap();
        assert_eq!(e.order(), 1);

        let z4 = z(&[4]);
        let two = z4.elem(&[2]).unwrap();
        let s = subgroup_generated(&z4, &[two.clone()]).unwrap();
        assert_eq!(s.elements().iter().map(|x| x.coords()[0]).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(s.basis_orders(), &[2]);
    }

    #[test]
    fn subgroup_canonical_forms_agree() {
        // two generator lists spanning the same set give equal subgroups
        let g = z(&[4, 4]);
        let s1 = subgroup_generated(&g, &[g.elem(&[1, 1]).unwrap(), g.elem(&[0, 2]).unwrap()]).unwrap();
        let s2 = subgroup_generated(&g, &[g.elem(&[1, 3]).unwrap(), g.elem(&[2, 2]).unwrap(), g.elem(&[1, 1]).unwrap()]).unwrap();
        assert_eq!(s1, s2);
        // basis reconstructs the subgroup
        let total: u64 = s1.basis_orders().iter().product();
        assert_eq!(total, s1.order());
    }

    #[test]
    fn subgroup_basis_coords_roundtrip() {
        let g = z(&[4, 2, 2]);
        let s = subgroup_generated(&g, &[g.elem(&[2, 1, 0]).unwrap(), g.elem(&[0, 0, 1]).unwrap()]).unwrap();
        for x in s.elements() {
            let c = s.coords_in_basis(x).unwrap();
            assert_eq!(&s.elem_from_basis_coords(&c), x);
        }
    }

    #[test]
    fn quotient_examples() {
        let g = z(&[2, 2]);
        let (q, map) = quotient(&g, &subgroup_generated(&g, &[]).unwrap()).unwrap();
        assert_eq!(q.order(), 4);
        for x in g.elements() {
            // identity projection up to presentation
            assert_eq!(map.project(&x).order(), x.order());
        }

        let h = subgroup_generated(&g, &[g.elem(&[1, 0]).unwrap()]).unwrap();
        let (q, _) = quotient(&g, &h).unwrap();
        assert_eq!(q.orders(), &[2]);

        let z4 = z(&[4]);
        let h = subgroup_generated(&z4, &[z4.elem(&[2]).unwrap()]).unwrap();
        let (q, map) = quotient(&z4, &h).unwrap();
        assert_eq!(q.orders(), &[2]);
        // kernel is exactly {0, 2}, by enumeration
        let kernel: Vec<u64> = z4
            .elements()
            .into_iter()
            .filter(|x| map.project(x).is_identity())
            .map(|x| x.coords()[0])
            .collect();
        assert_eq!(kernel, vec![0, 2]);
    }

    #[test]
    fn quotient_projection_surjective_with_kernel_h() {
        for orders in [vec![2u64, 2], vec![4, 2], vec![4, 4], vec![2, 2, 2]] {
            let g = z(&orders);
            for gen in g.elements() {
                let h = subgroup_generated(&g, &[gen]).unwrap();
                let (q, map) = quotient(&g, &h).unwrap();
                assert_eq!(q.order() * h.order(), g.order());
                let mut images: Vec<Vec<u64>> =
                    g.elements().iter().map(|x| map.project(x).coords().to_vec()).collect();
                images.sort();
                images.dedup();
                assert_eq!(images.len() as u64, q.order(), "projection must be surjective");
                let kernel = g.elements().into_iter().filter(|x| map.project(x).is_identity()).count();
                assert_eq!(kernel as u64, h.order(), "kernel must be exactly H");
            }
        }
    }

    #[test]
    fn perp_examples() {
        let g = z(&[2, 2]);
        let full = subgroup_generated(&g, &[g.elem(&[1, 0]).unwrap(), g.elem(&[0, 1]).unwrap()]).unwrap();
        assert_eq!(perp(&g, &full).unwrap().order(), 1);

        let e = subgroup_generated(&g, &[]).unwrap();
        assert_eq!(perp(&g, &e).unwrap().order(), 4);

        let z4 = z(&[4]);
        let h = subgroup_generated(&z4, &[z4.elem(&[2]).unwrap()]).unwrap();
        let p = perp(&z4, &h).unwrap();
        // characters of order dividing 2, by independent enumeration
        let expected: Vec<GroupElem> = z4
            .elements()
            .into_iter()
            .filter(|c| {
                let chi = Character::from_dual_elem(c.clone());
                chi.eval(&z4.elem(&[2]).unwrap()).is_zero()
            })
            .collect();
        assert_eq!(p.elements(), &expected[..]);
    }

    #[test]
    fn perp_is_order_reversing_involution() {
        for orders in [vec![2u64, 2], vec![4, 2], vec![3, 3], vec![2, 2, 2]] {
            let g = z(&orders);
            for x in g.elements() {
                for y in g.elements() {
                    let h = subgroup_generated(&g, &[x.clone(), y]).unwrap();
                    let p = perp(&g, &h).unwrap();
                    assert_eq!(h.order() * p.order(), g.order());
                    assert_eq!(perp(&g, &p).unwrap(), h);
                }
            }
        }
    }

    #[test]
    fn solve_character_examples() {
        let g = z(&[2, 2]);
        // T = {e}: all characters extend
        let e = subgroup_generated(&g, &[]).unwrap();
        assert_eq!(solve_character_on_subgroup(&e, &[], &[]).unwrap().len(), 4);
        // T = G: exactly one extension
        let full = subgroup_generated(&g, &[g.elem(&[1, 0]).unwrap(), g.elem(&[0, 1]).unwrap()]).unwrap();
        let sols = solve_character_on_subgroup(
            &full,
            &[g.elem(&[1, 0]).unwrap(), g.elem(&[0, 1]).unwrap()],
            &[QmodZ::HALF, QmodZ::ZERO],
        )
        .unwrap();
        assert_eq!(sols.len(), 1);
        // T = ⟨a⟩, a ↦ 1/2: the two characters with χ(a) = −1
        let a = g.elem(&[1, 0]).unwrap();
        let t = subgroup_generated(&g, &[a.clone()]).unwrap();
        let sols = solve_character_on_subgroup(&t, &[a.clone()], &[QmodZ::HALF]).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.iter().all(|chi| chi.eval(&a) == QmodZ::HALF));
        // inconsistent prescription: a ↦ 1/4 has no solution in Z₂²
        let sols = solve_character_on_subgroup(&t, &[a], &[QmodZ::new(1, 4)]).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn homomorphism_dual_map() {
        // quotient Z₄ → Z₂ and its dual: (χ∘f)(g) = χ(f(g))
        let z4 = z(&[4]);
        let h = subgroup_generated(&z4, &[z4.elem(&[2]).unwrap()]).unwrap();
        let (q, map) = quotient(&z4, &h).unwrap();
        let f = map.as_homomorphism();
        for c in q.characters() {
            let pulled = f.dual_apply(&c);
            for x in z4.elements() {
                assert_eq!(pulled.eval(&x), c.eval(&f.apply(&x)));
            }
        }
    }

    #[test]
    fn smith_normal_form_small() {
        let a = vec![vec![2i128, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diag, vec![2, 2, 156]);
        // U·A·V = D, and U·U⁻¹ = I
        let rows = a.len();
        let cols = a[0].len();
        let mut ua = vec![vec![0i128; cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                ua[i][j] = (0..rows).map(|k| snf.u[i][k] * a[k][j]).sum();
            }
        }
        let mut uav = vec![vec![0i128; cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                uav[i][j] = (0..cols).map(|k| ua[i][k] * snf.v[k][j]).sum();
            }
        }
        for i in 0..rows {
            for j in 0..cols {
                let want = if i == j { snf.diag[i] } else { 0 };
                assert_eq!(uav[i][j], want);
            }
        }
        for i in 0..rows {
            for j in 0..rows {
                let prod: i128 = (0..rows).map(|k| snf.u[i][k] * snf.u_inv[k][j]).sum();
                assert_eq!(prod, i128::from(i == j));
            }
        }
    }
}
