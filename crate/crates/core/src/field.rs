//! Arithmetic in the coefficient field `F = F_{p^m}`.
//!
//! Elements are stored by their discrete logarithm with respect to a fixed
//! primitive element, which makes multiplication an integer addition and
//! addition a single table lookup (Zech logarithms). The polynomial basis
//! determined by the caller's modulus is available through
//! [`Field::coeffs`] and [`Field::from_coeffs`].
//!
//! The field also records `f`, the degree of the unramified base field, so
//! that the residue field `k = F_{p^f}` and the embedding set `S = Z/fZ` can be
//! read off a single object.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest field size for which log and Zech tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// Parameters describing `F_{p^m}` together with the degree `f` of `K/Q_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    /// Characteristic.
    pub p: u32,
    /// Degree of the unramified base field `K` over `Q_p`.
    pub f: u32,
    /// Degree of `F` over `F_p`; must be a multiple of `f`.
    pub m: u32,
    /// Coefficients `[a_0, …, a_m]` of a monic irreducible polynomial of degree `m`.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Builds a spec using the first monic irreducible polynomial of degree `m`
    /// in lexicographic order of its coefficient vector.
    pub fn with_default_modulus(p: u32, f: u32, m: u32) -> Result<Self> {
        check_prime(p)?;
        if m == 0 {
            return Err(invalid("m must be positive"));
        }
        let modulus = first_irreducible(p, m as usize)?;
        Ok(Self { p, f, m, modulus })
    }
}

/// A field element, stored as a discrete logarithm.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    /// The additive identity.
    pub const ZERO: FieldElement = FieldElement(u32::MAX);
    /// The multiplicative identity.
    pub const ONE: FieldElement = FieldElement(0);

    /// Whether the element is zero.
    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == u32::MAX
    }

    /// Discrete logarithm with respect to the field's primitive element.
    pub fn log(self) -> Option<u32> {
        (!self.is_zero()).then_some(self.0)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "g^{}", self.0)
        }
    }
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    qm1: u32,
    /// `exp[k]` is the packed polynomial `Σ c_i p^i` of `g^k`.
    exp: Vec<u32>,
    /// Inverse of `exp`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, or `u32::MAX` when `1 + g^d = 0`.
    zech: Vec<u32>,
    log_minus_one: u32,
}

/// The finite field `F_{p^m}`; cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.inner.spec;
        write!(f, "F_{}^{} (f = {}, modulus {:?})", s.p, s.m, s.f, s.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl Field {
    /// Validates the spec and builds the arithmetic tables.
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let p = spec.p;
        check_prime(p)?;
        if spec.m == 0 || spec.f == 0 {
            return Err(invalid("f and m must be positive"));
        }
        if spec.m % spec.f != 0 {
            return Err(invalid(format!("f = {} does not divide m = {}", spec.f, spec.m)));
        }
        let m = spec.m as usize;
        if spec.modulus.len() != m + 1 || spec.modulus[m] != 1 {
            return Err(invalid("modulus must be monic of degree m, given as [a_0, …, a_m]"));
        }
        if spec.modulus.iter().any(|&c| c >= p) {
            return Err(invalid("modulus coefficients must lie in [0, p)"));
        }
        let q64 = (p as u64).checked_pow(spec.m).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_SIZE {
            return Err(invalid(format!("field of size {q64} is too large")));
        }
        if !is_irreducible(p, &spec.modulus) {
            return Err(invalid(format!("modulus {:?} is reducible over F_{p}", spec.modulus)));
        }
        let q = q64 as u32;
        let qm1 = q - 1;
        let g = find_primitive(p, &spec.modulus, q);
        let mut exp = vec![0u32; qm1 as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![0u32; m];
        cur[0] = 1;
        let gpoly = unpack(g, p, m);
        for k in 0..qm1 {
            let packed = pack(&cur, p);
            exp[k as usize] = packed;
            log[packed as usize] = k;
            cur = mulmod(&cur, &gpoly, &spec.modulus, p);
        }
        let mut zech = vec![u32::MAX; qm1 as usize];
        for d in 0..qm1 {
            let mut c = unpack(exp[d as usize], p, m);
            c[0] = (c[0] + 1) % p;
            let packed = pack(&c, p);
            if packed != 0 {
                zech[d as usize] = log[packed as usize];
            }
        }
        let log_minus_one = if p == 2 { 0 } else { qm1 / 2 };
        Ok(Self {
            inner: Arc::new(Inner {
                spec,
                q,
                qm1,
                exp,
                log,
                zech,
                log_minus_one,
            }),
        })
    }

    /// The prime field `F_p` with `f = 1`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(FieldSpec {
            p,
            f: 1,
            m: 1,
            modulus: vec![0, 1],
        })
    }

    /// `F_{p^m}` over a base of degree `f`, with the default modulus.
    pub fn with_degrees(p: u32, f: u32, m: u32) -> Result<Self> {
        Self::new(FieldSpec::with_default_modulus(p, f, m)?)
    }

    /// The defining parameters.
    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    /// Characteristic `p`.
    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.spec.p
    }

    /// Degree `f` of `K` over `Q_p`, i.e. the size of the embedding set `S`.
    #[inline]
    pub fn f(&self) -> usize {
        self.inner.spec.f as usize
    }

    /// Degree `m` of `F` over `F_p`.
    #[inline]
    pub fn m(&self) -> usize {
        self.inner.spec.m as usize
    }

    /// Number of elements `p^m`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// The fixed primitive element.
    pub fn primitive(&self) -> FieldElement {
        FieldElement(if self.inner.qm1 == 1 { 0 } else { 1 % self.inner.qm1 })
    }

    /// The class of `x` in `F_p[x]/(modulus)`.
    pub fn x(&self) -> FieldElement {
        let mut c = vec![0u32; self.m()];
        if self.m() == 1 {
            c[0] = (self.p() - self.inner.spec.modulus[0]) % self.p();
        } else {
            c[1] = 1;
        }
        self.from_packed(pack(&c, self.p()))
    }

    /// Zero.
    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    /// One.
    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.p() as i64;
        let r = n.rem_euclid(p) as u32;
        self.from_packed(r)
    }

    /// Element with the given coordinates in the polynomial basis; missing
    /// trailing coordinates are zero, negative entries are reduced mod `p`.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.m() {
            return Err(invalid(format!(
                "field literal has {} coordinates, the field has degree {}",
                coeffs.len(),
                self.m()
            )));
        }
        let p = self.p() as i64;
        let c: Vec<u32> = (0..self.m())
            .map(|i| coeffs.get(i).map_or(0, |&v| v.rem_euclid(p) as u32))
            .collect();
        Ok(self.from_packed(pack(&c, self.p())))
    }

    /// Coordinates in the polynomial basis.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        unpack(self.packed(x), self.p(), self.m())
    }

    /// The value in `[0, p)` if `x` lies in the prime field.
    pub fn as_prime(&self, x: FieldElement) -> Option<u32> {
        let c = self.coeffs(x);
        c[1..].iter().all(|&v| v == 0).then_some(c[0])
    }

    fn from_packed(&self, packed: u32) -> FieldElement {
        if packed == 0 {
            FieldElement::ZERO
        } else {
            FieldElement(self.inner.log[packed as usize])
        }
    }

    fn packed(&self, x: FieldElement) -> u32 {
        if x.is_zero() {
            0
        } else {
            self.inner.exp[x.0 as usize]
        }
    }

    /// `a + b`.
    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let qm1 = self.inner.qm1;
        let d = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + qm1 - a.0 };
        let z = self.inner.zech[d as usize];
        if z == u32::MAX {
            return FieldElement::ZERO;
        }
        let s = a.0 + z;
        FieldElement(if s >= qm1 { s - qm1 } else { s })
    }

    /// `-a`.
    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.is_zero() {
            return a;
        }
        let s = a.0 + self.inner.log_minus_one;
        let qm1 = self.inner.qm1;
        FieldElement(if s >= qm1 { s - qm1 } else { s })
    }

    /// `a - b`.
    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// `a · b`.
    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let s = a.0 + b.0;
        let qm1 = self.inner.qm1;
        FieldElement(if s >= qm1 { s - qm1 } else { s })
    }

    /// `acc + a · b`.
    #[inline]
    pub fn mul_add(&self, acc: FieldElement, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(acc, self.mul(a, b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let qm1 = self.inner.qm1;
        Some(FieldElement((qm1 - a.0) % qm1))
    }

    /// `a / b`; `None` when `b` is zero.
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for any integer `e` (with `0^0 = 1`); `None` for negative powers of zero.
    pub fn pow(&self, a: FieldElement, e: i64) -> Option<FieldElement> {
        if a.is_zero() {
            return match e {
                0 => Some(FieldElement::ONE),
                e if e > 0 => Some(FieldElement::ZERO),
                _ => None,
            };
        }
        let qm1 = self.inner.qm1 as i128;
        let l = (a.0 as i128 * e as i128).rem_euclid(qm1);
        Some(FieldElement(l as u32))
    }

    /// The Frobenius power `x^{p^k}`; `k` may be negative.
    pub fn frobenius(&self, x: FieldElement, k: i64) -> FieldElement {
        if x.is_zero() {
            return x;
        }
        let m = self.m() as i64;
        let k = k.rem_euclid(m) as u32;
        let qm1 = self.inner.qm1 as u64;
        let pk = (self.p() as u64).pow(k) % qm1.max(1);
        FieldElement(((x.0 as u64 * pk) % qm1.max(1)) as u32)
    }

    /// Whether `x` lies in the subfield `F_{p^d}`.
    pub fn in_subfield(&self, x: FieldElement, d: usize) -> bool {
        self.frobenius(x, d as i64) == x
    }

    /// All elements, zero first, then `g^0, g^1, …`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        std::iter::once(FieldElement::ZERO).chain((0..self.inner.qm1).map(FieldElement))
    }

    /// The element with discrete logarithm `k` (reduced mod `q − 1`).
    pub fn from_log(&self, k: u64) -> FieldElement {
        FieldElement((k % self.inner.qm1 as u64) as u32)
    }

    /// Human-readable polynomial-basis form, e.g. `[1, 2]`.
    pub fn display(&self, x: FieldElement) -> String {
        format!("{:?}", self.coeffs(x))
    }
}

fn check_prime(p: u32) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(invalid(format!("{p} is not prime")));
    }
    Ok(())
}

fn pack(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0u32, |acc, &v| acc * p + v)
}

fn unpack(mut v: u32, p: u32, m: usize) -> Vec<u32> {
    let mut c = vec![0u32; m];
    for ci in c.iter_mut() {
        *ci = v % p;
        v /= p;
    }
    c
}

/// Product of two residues modulo the monic `modulus` (length `m + 1`).
fn mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    reduce(&mut prod, modulus, p);
    prod.truncate(m);
    prod.resize(m, 0);
    prod.into_iter().map(|v| v as u32).collect()
}

fn reduce(v: &mut [u64], modulus: &[u32], p: u32) {
    let m = modulus.len() - 1;
    let p = p as u64;
    for d in (m..v.len()).rev() {
        let lead = v[d] % p;
        if lead == 0 {
            continue;
        }
        v[d] = 0;
        for k in 0..m {
            let sub = lead * modulus[k] as u64 % p;
            let t = d - m + k;
            v[t] = (v[t] + p - sub) % p;
        }
    }
}

fn powmod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut result = vec![0u32; m];
    result[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, modulus, p);
        }
        b = mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Greatest common divisor of two polynomials over `F_p` (monic, or empty for zero).
fn poly_gcd(mut a: Vec<u32>, mut b: Vec<u32>, p: u32) -> Vec<u32> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv_lead = inv_mod_p(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = (*a.last().unwrap() as u64 * inv_lead as u64 % p as u64) as u32;
            for (k, &bk) in b.iter().enumerate() {
                let sub = (factor as u64 * bk as u64 % p as u64) as u32;
                a[shift + k] = (a[shift + k] + p - sub) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lead) = a.last() {
        let il = inv_mod_p(lead, p);
        for c in a.iter_mut() {
            *c = (*c as u64 * il as u64 % p as u64) as u32;
        }
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^{p^k} mod modulus`.
fn x_pow_p_pow(k: usize, modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut x = vec![0u32; m];
    if m == 1 {
        x[0] = (p - modulus[0]) % p;
    } else {
        x[1] = 1;
    }
    for _ in 0..k {
        x = powmod(&x, p as u64, modulus, p);
    }
    x
}

/// Rabin's irreducibility test: `x^{p^m} ≡ x` and `gcd(modulus, x^{p^{m/r}} − x) = 1`
/// for each prime `r | m`.
pub(crate) fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    let x_minus = |v: Vec<u32>| {
        let mut v = v;
        v[1] = (v[1] + p - 1) % p;
        v
    };
    if x_minus(x_pow_p_pow(m, modulus, p)).iter().any(|&c| c != 0) {
        return false;
    }
    for r in prime_factors(m as u64) {
        let h = x_minus(x_pow_p_pow(m / r as usize, modulus, p));
        let g = poly_gcd(modulus.to_vec(), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(p: u32, m: usize) -> Result<Vec<u32>> {
    let total = (p as u64).checked_pow(m as u32).filter(|&t| t <= MAX_FIELD_SIZE);
    let total = total.ok_or_else(|| invalid("field too large"))?;
    for packed in 0..total {
        let mut c = unpack(packed as u32, p, m);
        c.push(1);
        if (m == 1 || c[0] != 0) && is_irreducible(p, &c) {
            return Ok(c);
        }
    }
    Err(invalid("no irreducible polynomial found"))
}

fn find_primitive(p: u32, modulus: &[u32], q: u32) -> u32 {
    let m = modulus.len() - 1;
    let qm1 = q as u64 - 1;
    if qm1 == 1 {
        return 1;
    }
    let factors = prime_factors(qm1);
    let mut one = vec![0u32; m];
    one[0] = 1;
    (1..q)
        .find(|&cand| {
            let c = unpack(cand, p, m);
            factors.iter().all(|&l| powmod(&c, qm1 / l, modulus, p) != one)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(3).unwrap();
        let two = f.from_int(2);
        assert_eq!(f.mul(two, two), f.one());
        assert_eq!(f.add(two, f.one()), f.zero());
        assert_eq!(f.neg(f.one()), two);
    }

    #[test]
    fn degree_one_moduli_are_accepted() {
        let a = Field::new(FieldSpec {
            p: 3,
            f: 1,
            m: 1,
            modulus: vec![0, 1],
        })
        .unwrap();
        let b = Field::new(FieldSpec {
            p: 3,
            f: 1,
            m: 1,
            modulus: vec![2, 1],
        })
        .unwrap();
        assert_eq!(a.q(), 3);
        assert_eq!(b.x(), b.one());
    }

    #[test]
    fn f4_table() {
        let f = Field::new(FieldSpec {
            p: 2,
            f: 2,
            m: 2,
            modulus: vec![1, 1, 1],
        })
        .unwrap();
        let g = f.x();
        assert_eq!(f.mul(g, g), f.add(g, f.one()));
        assert_eq!(f.frobenius(g, 1), f.add(g, f.one()));
    }

    #[test]
    fn f25_reduction() {
        let f = Field::new(FieldSpec {
            p: 5,
            f: 2,
            m: 2,
            modulus: vec![2, 0, 1],
        })
        .unwrap();
        let g = f.x();
        assert_eq!(f.coeffs(f.mul(g, g)), vec![3, 0]);
    }

    #[test]
    fn reducible_moduli_are_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2.
        assert!(Field::new(FieldSpec {
            p: 2,
            f: 1,
            m: 2,
            modulus: vec![1, 0, 1]
        })
        .is_err());
        // (x^2 + x + 1)(x^3 + x + 1) over F_2: no roots, no factor of degree dividing 5's
        // proper divisors, yet reducible.
        let a = [1u32, 1, 1];
        let b = [1u32, 1, 0, 1];
        let mut prod = vec![0u32; 6];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] ^= x * y;
            }
        }
        assert!(!is_irreducible(2, &prod));
        assert!(Field::new(FieldSpec {
            p: 2,
            f: 1,
            m: 5,
            modulus: prod
        })
        .is_err());
    }

    #[test]
    fn divisibility_of_m_by_f_is_enforced() {
        assert!(Field::with_degrees(3, 2, 3).is_err());
    }

    #[test]
    fn inverse_and_frobenius_order() {
        let f = Field::with_degrees(3, 2, 4).unwrap();
        for x in f.elements() {
            if let Some(xi) = f.inv(x) {
                assert_eq!(f.mul(x, xi), f.one());
            }
            assert_eq!(f.frobenius(x, 4), x);
            assert_eq!(f.frobenius(x, 0), x);
        }
    }

    #[test]
    fn subfield_sizes() {
        for &(p, f_deg, m) in &[
            (2u32, 1u32, 6u32),
            (2, 2, 6),
            (2, 3, 6),
            (3, 2, 4),
            (5, 1, 2),
            (7, 2, 2),
            (2, 4, 12),
        ] {
            let field = Field::with_degrees(p, f_deg, m).unwrap();
            let count = field
                .elements()
                .filter(|&x| field.in_subfield(x, f_deg as usize))
                .count();
            assert_eq!(count as u64, (p as u64).pow(f_deg));
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = Field::with_degrees(5, 3, 3).unwrap();
        for x in f.elements() {
            let c: Vec<i64> = f.coeffs(x).into_iter().map(i64::from).collect();
            assert_eq!(f.from_coeffs(&c).unwrap(), x);
        }
    }
}
