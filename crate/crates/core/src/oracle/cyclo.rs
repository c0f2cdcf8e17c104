//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`, represented as
//! `Q[x]` modulo the `M`-th cyclotomic polynomial.
//!
//! The oracles need exact roots of unity of order dividing the group
//! exponent, together with `i` and `sqrt(2)`; a single field with `M`
//! divisible by 8 and twice the exponent contains all of them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::rc::Rc;

use crate::abelian::QmodZ;

/// The `n`-th cyclotomic polynomial with integer coefficients, as the
/// coefficient vector of a monic polynomial (constant term first).
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by the product of the lower cyclotomic factors.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact division of integer polynomials (the divisor must be monic and
/// divide evenly).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            quot[i] = c.clone();
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "division must be exact");
    quot
}

#[derive(Debug)]
struct FieldData {
    m: u64,
    /// Monic modulus (the `M`-th cyclotomic polynomial), constant first.
    modulus: Vec<BigRational>,
}

/// The cyclotomic field `Q(zeta_M)`; cheap to clone.
#[derive(Clone, Debug)]
pub struct CycloField(Rc<FieldData>);

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.0.m == other.0.m
    }
}
impl Eq for CycloField {}

impl CycloField {
    /// The field `Q(zeta_m)`; `m` must be divisible by 8 so that `i`
    /// and `sqrt(2)` are available.
    pub fn new(m: u64) -> CycloField {
        assert!(m % 8 == 0, "conductor must be divisible by 8");
        let modulus: Vec<BigRational> = cyclotomic_polynomial(m)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        CycloField(Rc::new(FieldData { m, modulus }))
    }

    /// The smallest suitable field for computations over a group of the
    /// given exponent: conductor `lcm(8, 2 * exponent)`.
    pub fn for_exponent(exponent: u64) -> CycloField {
        CycloField::new(num_integer::lcm(8, 2 * exponent.max(1)))
    }

    /// The conductor `M`.
    pub fn conductor(&self) -> u64 {
        self.0.m
    }

    /// Degree of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    /// The zero element.
    pub fn zero(&self) -> CycloNum {
        CycloNum {
            field: self.clone(),
            c: vec![BigRational::zero(); self.degree()],
        }
    }

    /// An arbitrary rational as a field element.
    pub fn rational(&self, q: BigRational) -> CycloNum {
        let mut z = self.zero();
        z.c[0] = q;
        z
    }

    /// A small integer as a field element.
    pub fn integer(&self, n: i64) -> CycloNum {
        self.rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The multiplicative identity.
    pub fn one(&self) -> CycloNum {
        self.integer(1)
    }

    /// `zeta_M^k`.
    pub fn zeta_pow(&self, k: i64) -> CycloNum {
        let m = self.0.m as i64;
        let k = k.rem_euclid(m) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        CycloNum {
            field: self.clone(),
            c: reduce(&poly, &self.0.modulus, self.degree()),
        }
    }

    /// `exp(2 pi i q)` for `q` in `Q/Z` with denominator dividing `M`.
    pub fn root(&self, q: QmodZ) -> CycloNum {
        assert!(
            self.0.m % q.den() as u64 == 0,
            "root of unity order must divide the conductor"
        );
        self.zeta_pow(q.num() * (self.0.m as i64 / q.den()))
    }

    /// A fixed square root of `exp(2 pi i q)`, namely `exp(pi i q)`;
    /// requires `2 * denominator(q) | M`.
    pub fn half_root(&self, q: QmodZ) -> CycloNum {
        assert!(
            self.0.m % (2 * q.den() as u64) == 0,
            "half-root order must divide the conductor"
        );
        self.zeta_pow(q.num() * (self.0.m as i64 / (2 * q.den())))
    }

    /// The imaginary unit.
    pub fn i(&self) -> CycloNum {
        self.zeta_pow(self.0.m as i64 / 4)
    }

    /// `sqrt(2) = zeta_8 + zeta_8^-1`.
    pub fn sqrt2(&self) -> CycloNum {
        let e = self.0.m as i64 / 8;
        self.zeta_pow(e).add(&self.zeta_pow(-e))
    }
}

/// Reduce a polynomial modulo the monic modulus, truncating to `deg`
/// coefficients.
fn reduce(poly: &[BigRational], modulus: &[BigRational], deg: usize) -> Vec<BigRational> {
    let mut rem: Vec<BigRational> = poly.to_vec();
    let dd = modulus.len() - 1;
    if rem.len() > dd {
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if !c.is_zero() {
                for (j, mj) in modulus.iter().enumerate() {
                    rem[i - dd + j] -= &c * mj;
                }
            }
        }
    }
    rem.resize(deg, BigRational::zero());
    rem
}

/// An element of a cyclotomic field.
#[derive(Clone, Debug)]
pub struct CycloNum {
    field: CycloField,
    c: Vec<BigRational>,
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}
impl Eq for CycloNum {}

impl CycloNum {
    /// The field this element lives in.
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// True for the multiplicative identity.
    pub fn is_one(&self) -> bool {
        self == &self.field.one()
    }

    /// Sum.
    pub fn add(&self, other: &CycloNum) -> CycloNum {
        assert_eq!(self.field, other.field, "field mismatch");
        CycloNum {
            field: self.field.clone(),
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    /// Negation.
    pub fn neg(&self) -> CycloNum {
        CycloNum {
            field: self.field.clone(),
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    /// Difference.
    pub fn sub(&self, other: &CycloNum) -> CycloNum {
        self.add(&other.neg())
    }

    /// Product.
    pub fn mul(&self, other: &CycloNum) -> CycloNum {
        assert_eq!(self.field, other.field, "field mismatch");
        let deg = self.field.degree();
        let mut poly = vec![BigRational::zero(); 2 * deg];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    poly[i + j] += a * b;
                }
            }
        }
        CycloNum {
            field: self.field.clone(),
            c: reduce(&poly, &self.field.0.modulus, deg),
        }
    }

    /// Multiplicative inverse (the element must be nonzero).
    pub fn inv(&self) -> CycloNum {
        assert!(!self.is_zero(), "division by zero");
        // Extended Euclid in Q[x]: s * self + t * modulus = gcd = const.
        let deg = self.field.degree();
        let modulus = &self.field.0.modulus;
        let mut r0: Vec<BigRational> = modulus.clone();
        let mut r1: Vec<BigRational> = trim(&self.c);
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while poly_deg(&r1) > 0 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            assert!(!r1.is_empty(), "modulus must be coprime to the element");
        }
        let lead = r1[0].clone();
        let inv_poly: Vec<BigRational> = s1.iter().map(|a| a / &lead).collect();
        CycloNum {
            field: self.field.clone(),
            c: reduce(&inv_poly, modulus, deg),
        }
    }

    /// Scale by a rational constant.
    pub fn scale(&self, q: &BigRational) -> CycloNum {
        CycloNum {
            field: self.field.clone(),
            c: self.c.iter().map(|a| a * q).collect(),
        }
    }

    /// If this element is a root of unity in the field, return its
    /// phase as an element of `Q/Z`.
    pub fn as_root_of_unity(&self) -> Option<QmodZ> {
        let m = self.field.conductor();
        for k in 0..m {
            if self == &self.field.zeta_pow(k as i64) {
                return Some(QmodZ::new(k as i64, m as i64));
            }
        }
        None
    }
}

fn trim(p: &[BigRational]) -> Vec<BigRational> {
    let mut v = p.to_vec();
    while v.len() > 1 && v.last().map(|x| x.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_deg(p: &[BigRational]) -> usize {
    trim(p).len() - 1
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&out)
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = trim(den);
    let mut rem = trim(num);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &den[dd];
        if !c.is_zero() {
            quot[i] = c.clone();
            for (j, dj) in den.iter().enumerate() {
                let delta = &c * dj;
                rem[i + j] -= delta;
            }
        }
    }
    (trim(&quot), trim(&rem))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        let to_i = |v: Vec<i64>| -> Vec<BigInt> { v.into_iter().map(BigInt::from).collect() };
        assert_eq!(cyclotomic_polynomial(1), to_i(vec![-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), to_i(vec![1, 1]));
        assert_eq!(cyclotomic_polynomial(4), to_i(vec![1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(8), to_i(vec![1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), to_i(vec![1, 0, -1, 0, 1]));
    }

    #[test]
    fn field_constants() {
        let f = CycloField::new(8);
        assert_eq!(f.degree(), 4);
        let i = f.i();
        assert_eq!(i.mul(&i), f.integer(-1));
        let s = f.sqrt2();
        assert_eq!(s.mul(&s), f.integer(2));
        assert!(f.zeta_pow(8).is_one());
        assert_eq!(f.zeta_pow(3).mul(&f.zeta_pow(5)), f.one());
    }

    #[test]
    fn roots_and_inverses() {
        let f = CycloField::for_exponent(6);
        assert_eq!(f.conductor(), 24);
        let z = f.root(QmodZ::new(1, 6));
        let mut acc = f.one();
        for _ in 0..6 {
            acc = acc.mul(&z);
        }
        assert!(acc.is_one());
        // Sum of all 6th roots of unity is zero.
        let mut total = f.zero();
        for k in 0..6 {
            total = total.add(&f.root(QmodZ::new(k, 6)));
        }
        assert!(total.is_zero());
        // Inverses.
        let x = f.sqrt2().add(&f.i()).add(&f.integer(3));
        assert!(x.mul(&x.inv()).is_one());
        assert_eq!(z.as_root_of_unity(), Some(QmodZ::new(1, 6)));
        assert_eq!(x.as_root_of_unity(), None);
        // Half roots square correctly.
        let h = f.half_root(QmodZ::new(1, 3));
        assert_eq!(h.mul(&h), f.root(QmodZ::new(1, 3)));
    }
}
