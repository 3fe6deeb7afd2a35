//! Truncated Laurent series over `F`, fixed-precision `p`-adic integers, and the
//! binomial powers and root extractions built from them.
//!
//! A [`LaurentSeries`] knows its coefficients for exponents in `[floor, order)`
//! and nothing above `order`. Arithmetic propagates the known window exactly:
//! a product is returned only up to the exponent where an unknown coefficient
//! of either factor could first contribute.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, precision, Error, Result};
use crate::field::{Field, FieldElement};

/// A Laurent series `Σ_{floor ≤ n < order} a_n π^n + O(π^order)`.
///
/// The floor is normalized: either `coeffs[0]` is nonzero, or the series is
/// zero on its window, in which case `floor == order` and `coeffs` is empty.
#[derive(Clone)]
pub struct LaurentSeries {
    field: Field,
    floor: i64,
    order: i64,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.floor == other.floor && self.order == other.order && self.coeffs == other.coeffs
    }
}

impl Eq for LaurentSeries {}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}·π^{}", self.field.display(c), e)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(π^{})", self.order)
    }
}

impl LaurentSeries {
    /// Series with coefficients `coeffs[k]` at exponent `floor + k`, known below `order`.
    /// Coefficients at or beyond `order` are dropped; missing ones are zero.
    pub fn from_coeffs(field: &Field, floor: i64, order: i64, mut coeffs: Vec<FieldElement>) -> Self {
        let len = (order - floor).max(0) as usize;
        coeffs.resize(len, FieldElement::ZERO);
        let mut s = Self {
            field: field.clone(),
            floor,
            order,
            coeffs,
        };
        s.normalize();
        s
    }

    /// Series given by sparse `(exponent, coefficient)` terms; repeated exponents add up.
    pub fn from_terms(field: &Field, terms: &[(i64, FieldElement)], order: i64) -> Self {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(order).min(order);
        let mut coeffs = vec![FieldElement::ZERO; (order - lo) as usize];
        for &(e, c) in terms {
            if e < order {
                let slot = &mut coeffs[(e - lo) as usize];
                *slot = field.add(*slot, c);
            }
        }
        Self::from_coeffs(field, lo, order, coeffs)
    }

    /// The zero series known below `order`.
    pub fn zero(field: &Field, order: i64) -> Self {
        Self {
            field: field.clone(),
            floor: order,
            order,
            coeffs: Vec::new(),
        }
    }

    /// The constant `c` known below `order`.
    pub fn constant(field: &Field, c: FieldElement, order: i64) -> Self {
        Self::from_terms(field, &[(0, c)], order)
    }

    /// The constant one.
    pub fn one(field: &Field, order: i64) -> Self {
        Self::constant(field, FieldElement::ONE, order)
    }

    /// `c·π^e` known below `order`.
    pub fn monomial(field: &Field, c: FieldElement, e: i64, order: i64) -> Self {
        Self::from_terms(field, &[(e, c)], order)
    }

    /// Series with prime-field integer coefficients starting at `floor`.
    pub fn from_ints(field: &Field, floor: i64, order: i64, ints: &[i64]) -> Self {
        let coeffs = ints.iter().map(|&v| field.from_int(v)).collect();
        Self::from_coeffs(field, floor, order, coeffs)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.floor += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.floor = self.order;
            }
        }
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Lowest exponent carrying a nonzero coefficient (or `order` for zero).
    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Exclusive upper bound of the known window.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Valuation, or `None` if the series vanishes on its window.
    pub fn val(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.floor)
    }

    /// Whether every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `π^n`.
    ///
    /// # Panics
    /// If `n ≥ order`, where the coefficient is unknown.
    pub fn coeff(&self, n: i64) -> FieldElement {
        assert!(
            n < self.order,
            "coefficient of π^{n} requested beyond order {}",
            self.order
        );
        if n < self.floor {
            FieldElement::ZERO
        } else {
            self.coeffs[(n - self.floor) as usize]
        }
    }

    /// Coefficients for exponents `floor..order`.
    pub fn coeff_slice(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficients for exponents `lo..hi` (zeros below the floor).
    ///
    /// # Panics
    /// If `hi > order`.
    pub fn coeff_range(&self, lo: i64, hi: i64) -> Vec<FieldElement> {
        (lo..hi).map(|n| self.coeff(n)).collect()
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.floor + k as i64, c))
    }

    /// Same series with the window cut at `min(order, new_order)`.
    pub fn truncate(&self, new_order: i64) -> Self {
        if new_order >= self.order {
            return self.clone();
        }
        let keep = (new_order - self.floor).max(0) as usize;
        let coeffs = self.coeffs[..keep.min(self.coeffs.len())].to_vec();
        Self::from_coeffs(&self.field, self.floor.min(new_order), new_order, coeffs)
    }

    /// Whether `self` and `other` agree below `min(order, self.order, other.order)`.
    pub fn agrees_with(&self, other: &Self, order: i64) -> bool {
        let top = order.min(self.order).min(other.order);
        let lo = self.floor.min(other.floor);
        (lo..top).all(|n| self.coeff(n) == other.coeff(n))
    }

    /// Multiplication by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            field: self.field.clone(),
            floor: self.floor + k,
            order: self.order + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.order);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Self {
            field: self.field.clone(),
            floor: self.floor,
            order: self.order,
            coeffs,
        }
    }

    /// `g(π) ↦ g(π^k)`.
    pub fn substitute_power(&self, k: u64) -> Self {
        assert!(k >= 1, "substitution power must be positive");
        let k = k as i64;
        if k == 1 {
            return self.clone();
        }
        let len = ((self.order - self.floor) * k) as usize;
        let mut coeffs = vec![FieldElement::ZERO; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c;
        }
        Self {
            field: self.field.clone(),
            floor: self.floor * k,
            order: self.order * k,
            coeffs,
        }
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let order = self.order.min(other.order);
        let lo = self.floor.min(other.floor).min(order);
        let mut coeffs = vec![FieldElement::ZERO; (order - lo) as usize];
        for (e, c) in self.terms() {
            if e < order {
                coeffs[(e - lo) as usize] = c;
            }
        }
        let f = &self.field;
        for (e, c) in other.terms() {
            if e < order {
                let slot = &mut coeffs[(e - lo) as usize];
                *slot = if negate { f.sub(*slot, c) } else { f.add(*slot, c) };
            }
        }
        Self::from_coeffs(f, lo, order, coeffs)
    }

    /// Product; the result is known below `min(order_a + val_b, order_b + val_a)`.
    pub fn mul_series(&self, other: &Self) -> Self {
        let order = (self.order + other.floor).min(other.order + self.floor);
        let floor = self.floor + other.floor;
        if order <= floor {
            return Self::zero(&self.field, order);
        }
        let len = (order - floor) as usize;
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; len];
        let a = &self.coeffs;
        let b = &other.coeffs;
        for (i, &ai) in a.iter().enumerate().take(len) {
            if ai.is_zero() {
                continue;
            }
            let lim = (len - i).min(b.len());
            let row = &mut out[i..i + lim];
            for (slot, &bj) in row.iter_mut().zip(&b[..lim]) {
                if !bj.is_zero() {
                    *slot = f.add(*slot, f.mul(ai, bj));
                }
            }
        }
        Self::from_coeffs(f, floor, order, out)
    }

    /// Product truncated to `min(natural order, order)`; avoids computing unneeded terms.
    pub fn mul_trunc(&self, other: &Self, order: i64) -> Self {
        let a = self.truncate(order - other.floor);
        let b = other.truncate(order - self.floor);
        a.mul_series(&b).truncate(order)
    }

    /// `a^{-1}`, known below `order − 2·val(a)`.
    pub fn inv(&self) -> Result<Self> {
        let v = self
            .val()
            .ok_or_else(|| Error::InvalidInput("inverse of zero series".into()))?;
        let rel = (self.order - v) as usize;
        let f = &self.field;
        let a = &self.coeffs;
        let a0inv = f.inv(a[0]).expect("leading coefficient is nonzero");
        let mut b = vec![FieldElement::ZERO; rel];
        b[0] = a0inv;
        for n in 1..rel {
            let mut s = FieldElement::ZERO;
            for k in 1..=n.min(a.len() - 1) {
                s = f.add(s, f.mul(a[k], b[n - k]));
            }
            b[n] = f.neg(f.mul(s, a0inv));
        }
        Ok(Self::from_coeffs(f, -v, rel as i64 - v, b))
    }

    /// `a^e` for any integer `e` (negative powers require a nonzero series).
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul_series(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_series(&base);
            }
        }
        Ok(result.unwrap_or_else(|| {
            let order = if self.is_zero() {
                self.order
            } else {
                self.order - self.floor
            };
            Self::one(&self.field, order)
        }))
    }

    /// Whether the series lies in `1 + πF[[π]]` on its window.
    pub fn is_one_unit(&self) -> bool {
        self.floor == 0 && self.coeffs.first() == Some(&FieldElement::ONE)
    }

    /// Whether every nonzero coefficient lies in the prime field.
    pub fn has_prime_coefficients(&self) -> bool {
        self.terms().all(|(_, c)| self.field.as_prime(c).is_some())
    }

    /// Whether all nonzero terms have exponents `≥ lo` and `≡ residue mod modulus`.
    pub fn in_residual_class(&self, lo: i64, residue: i64, modulus: i64) -> bool {
        self.terms()
            .all(|(e, _)| e >= lo && (e - residue).rem_euclid(modulus) == 0)
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, false)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, true)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(self.field.neg(FieldElement::ONE))
    }
}

/// A `p`-adic integer known modulo `p^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInteger {
    p: u64,
    n: u32,
    value: u64,
}

impl fmt::Debug for PadicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.n)
    }
}

impl PadicInteger {
    /// Largest digit count with `p^n < 2^62`.
    pub fn max_digits(p: u64) -> u32 {
        let mut n = 0;
        let mut pow: u64 = 1;
        while let Some(next) = pow.checked_mul(p).filter(|&v| v < (1u64 << 62)) {
            pow = next;
            n += 1;
        }
        n
    }

    /// The image of the integer `v` modulo `p^n`.
    pub fn new(p: u64, n: u32, v: i128) -> Result<Self> {
        if n == 0 || n > Self::max_digits(p) {
            return Err(invalid(format!("unsupported p-adic precision {p}^{n}")));
        }
        let modulus = p.pow(n) as i128;
        Ok(Self {
            p,
            n,
            value: v.rem_euclid(modulus) as u64,
        })
    }

    /// The integer `v` at the largest supported precision.
    pub fn from_int(p: u64, v: i128) -> Self {
        Self::new(p, Self::max_digits(p), v).expect("maximal precision is valid")
    }

    /// Builds the element from base-`p` digits, least significant first.
    pub fn from_digits(p: u64, digits: &[u64]) -> Result<Self> {
        if digits.iter().any(|&d| d >= p) {
            return Err(invalid("digits must lie in [0, p)"));
        }
        let n = digits.len() as u32;
        let v = digits.iter().rev().fold(0i128, |acc, &d| acc * p as i128 + d as i128);
        Self::new(p, n, v)
    }

    /// The prime.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of known digits.
    pub fn precision(&self) -> u32 {
        self.n
    }

    /// Representative in `[0, p^n)`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// The modulus `p^n`.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// Base-`p` digits, least significant first (length `n`).
    pub fn digits(&self) -> Vec<u64> {
        let mut v = self.value;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// Representative modulo `p^k` for `k ≤ n`.
    pub fn residue(&self, k: u32) -> u64 {
        self.value % self.p.pow(k.min(self.n))
    }

    fn joined(&self, other: &Self) -> (u32, u64) {
        assert_eq!(self.p, other.p, "p-adic integers over different primes");
        let n = self.n.min(other.n);
        (n, self.p.pow(n))
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let (n, m) = self.joined(other);
        Self {
            p: self.p,
            n,
            value: ((self.value % m) + (other.value % m)) % m,
        }
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        let (n, m) = self.joined(other);
        Self {
            p: self.p,
            n,
            value: ((self.value % m) + m - (other.value % m)) % m,
        }
    }

    /// Product.
    pub fn mul(&self, other: &Self) -> Self {
        let (n, m) = self.joined(other);
        let v = (self.value as u128 % m as u128) * (other.value as u128 % m as u128) % m as u128;
        Self {
            p: self.p,
            n,
            value: v as u64,
        }
    }

    /// Power with a non-negative exponent.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self {
            p: self.p,
            n: self.n,
            value: 1 % self.modulus(),
        };
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Whether the lowest digit is nonzero.
    pub fn is_unit(&self) -> bool {
        self.value % self.p != 0
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(invalid("inverse of a non-unit p-adic integer"));
        }
        // The unit group of Z/p^n has order (p-1)p^{n-1}.
        let order = (self.p - 1) * self.p.pow(self.n - 1);
        Ok(self.pow(order - 1))
    }

    /// `v_p(self − 1)`, capped at the precision.
    pub fn level(&self) -> u32 {
        let mut d = (self.value + self.modulus() - 1) % self.modulus();
        if d == 0 {
            return self.n;
        }
        let mut k = 0;
        while d % self.p == 0 {
            d /= self.p;
            k += 1;
        }
        k
    }
}

/// Binomial coefficient `C(n, k) mod p` for `n, k < p` (small-table Lucas digit).
fn binom_small(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    let mut inv = 1u64;
    let mut b = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    num * inv % p
}

/// `(1 + π)^u` modulo `π^order`, with binomial coefficients reduced by Lucas' theorem.
pub fn one_plus_pi_pow(field: &Field, u: &PadicInteger, order: i64) -> Result<LaurentSeries> {
    let p = field.p() as u64;
    if u.p() != p {
        return Err(invalid("exponent is a p-adic integer for a different prime"));
    }
    if order <= 0 {
        return Ok(LaurentSeries::zero(field, order));
    }
    let needed = order as u64 - 1;
    let mut digits_needed = 0u32;
    let mut t = needed;
    while t > 0 {
        digits_needed += 1;
        t /= p;
    }
    if digits_needed > u.precision() {
        return Err(precision(format!(
            "(1+π)^u to order {order} needs {digits_needed} digits of u, only {} known",
            u.precision()
        )));
    }
    let ud = u.digits();
    let mut table = vec![vec![0u64; p as usize]; p as usize];
    for (n, row) in table.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = binom_small(n as u64, k as u64, p);
        }
    }
    let coeffs = (0..order as u64)
        .map(|k| {
            let mut kk = k;
            let mut c = 1u64;
            let mut idx = 0;
            while kk > 0 && c != 0 {
                let kd = kk % p;
                c = c * table[ud[idx] as usize][kd as usize] % p;
                kk /= p;
                idx += 1;
            }
            field.from_int(c as i64)
        })
        .collect();
    Ok(LaurentSeries::from_coeffs(field, 0, order, coeffs))
}

/// The unique `h ∈ 1 + πF[[π]]` with `h^d = g` on the window of `g`.
///
/// Solved by Newton iteration `h ← h − (h^d − g)/(d·h^{d−1})`, doubling the
/// number of correct coefficients each round.
pub fn nth_root_unit(g: &LaurentSeries, d: u64) -> Result<LaurentSeries> {
    let field = g.field().clone();
    let p = field.p() as u64;
    if d == 0 || d % p == 0 {
        return Err(invalid(format!("root degree {d} must be prime to p = {p}")));
    }
    let order = g.order();
    if order <= 0 {
        return Err(invalid("root of a series with empty window"));
    }
    if !g.is_one_unit() {
        return Err(invalid("nth_root_unit expects a series ≡ 1 mod π"));
    }
    if d == 1 {
        return Ok(g.clone());
    }
    let d_inv = field.inv(field.from_int((d % p) as i64)).expect("d is prime to p");
    let mut h = LaurentSeries::one(&field, 1);
    let mut known = 1i64;
    while known < order {
        let next = (2 * known).min(order);
        let h_ext = LaurentSeries::from_coeffs(&field, 0, next, h.coeff_slice().to_vec());
        let hd1 = h_ext.pow(d as i64 - 1)?;
        let hd = hd1.mul_series(&h_ext);
        let resid = &hd - &g.truncate(next);
        let corr = resid.mul_series(&hd1.inv()?).scale(d_inv);
        h = (&h_ext - &corr).truncate(next);
        known = next;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn schoolbook_products() {
        let f3 = fp(3);
        let a = LaurentSeries::from_ints(&f3, 0, 10, &[1, 1]);
        let b = LaurentSeries::from_ints(&f3, 0, 10, &[1, -1]);
        assert_eq!(&a * &b, LaurentSeries::from_ints(&f3, 0, 10, &[1, 0, -1]));

        let f5 = fp(5);
        let a = LaurentSeries::from_ints(&f5, 0, 10, &[1, 2]);
        let b = LaurentSeries::from_ints(&f5, 0, 10, &[3, 1]);
        assert_eq!(&a * &b, LaurentSeries::from_ints(&f5, 0, 10, &[3, 2, 2]));

        let x = LaurentSeries::monomial(&f5, f5.one(), -2, 8);
        let y = LaurentSeries::monomial(&f5, f5.one(), 2, 12);
        assert!((&x * &y).agrees_with(&LaurentSeries::one(&f5, 10), 10));
    }

    #[test]
    fn product_window() {
        let f = fp(5);
        let a = LaurentSeries::from_ints(&f, -3, 10, &[1, 2, 3]);
        let b = LaurentSeries::from_ints(&f, 2, 20, &[4]);
        let c = &a * &b;
        assert_eq!(c.val(), Some(-1));
        assert_eq!(c.order(), 12);
    }

    #[test]
    fn inverses() {
        let f3 = fp(3);
        let a = LaurentSeries::from_ints(&f3, 0, 12, &[1, 1]);
        let ai = a.inv().unwrap();
        assert_eq!(
            ai.coeff_range(0, 4),
            vec![f3.one(), f3.from_int(-1), f3.one(), f3.from_int(-1)]
        );
        let pi = LaurentSeries::monomial(&f3, f3.one(), 1, 12);
        assert_eq!(pi.inv().unwrap().val(), Some(-1));
        let b = LaurentSeries::from_ints(&f3, 0, 12, &[2, 1]);
        assert!((&b * &b.inv().unwrap()).agrees_with(&LaurentSeries::one(&f3, 12), 12));
        assert!(LaurentSeries::zero(&f3, 5).inv().is_err());
    }

    #[test]
    fn substitution() {
        let f = fp(3);
        let g = LaurentSeries::from_ints(&f, 1, 10, &[1, 1]);
        let s = g.substitute_power(3);
        assert_eq!(s, LaurentSeries::from_terms(&f, &[(3, f.one()), (6, f.one())], 30));
        assert_eq!(g.substitute_power(1), g);
    }

    #[test]
    fn binomial_powers() {
        let f = fp(3);
        let u = PadicInteger::from_int(3, 3);
        let s = one_plus_pi_pow(&f, &u, 10).unwrap();
        assert_eq!(s, LaurentSeries::from_terms(&f, &[(0, f.one()), (3, f.one())], 10));
        let u = PadicInteger::from_int(3, 4);
        let s = one_plus_pi_pow(&f, &u, 5).unwrap();
        assert_eq!(s, LaurentSeries::from_ints(&f, 0, 5, &[1, 1, 0, 1, 1]));
        let s = one_plus_pi_pow(&f, &PadicInteger::from_int(3, 1), 6).unwrap();
        assert_eq!(s, LaurentSeries::from_ints(&f, 0, 6, &[1, 1]));
        let short = PadicInteger::new(3, 2, 4).unwrap();
        assert!(matches!(one_plus_pi_pow(&f, &short, 10), Err(Error::Precision(_))));
    }

    #[test]
    fn roots() {
        let f = fp(5);
        let h = LaurentSeries::from_ints(&f, 0, 30, &[1, 1]);
        let g = h.pow(2).unwrap();
        assert_eq!(nth_root_unit(&g, 2).unwrap(), h);
        assert_eq!(nth_root_unit(&g, 1).unwrap(), g);
        assert!(nth_root_unit(&g, 5).is_err());
        let not_unit = LaurentSeries::from_ints(&f, 0, 30, &[2, 1]);
        assert!(nth_root_unit(&not_unit, 2).is_err());
    }

    #[test]
    fn padic_digits_and_inverse() {
        let x = PadicInteger::new(3, 5, -1).unwrap();
        assert_eq!(x.digits(), vec![2; 5]);
        let y = PadicInteger::new(5, 6, 7).unwrap();
        assert_eq!(y.mul(&y.inv().unwrap()).value(), 1);
        assert_eq!(PadicInteger::new(3, 5, 10).unwrap().level(), 2);
        assert_eq!(PadicInteger::from_digits(3, &[1, 2]).unwrap().value(), 7);
    }
}
