//! Unramified coefficients `W(F_{p^m})/p^N` and power series over them.
//!
//! `W(F_{p^m})/p^N` is realized as `(Z/p^N)[x]/(P̃)`, where `P̃` is the
//! coordinatewise lift of the modulus of `F`. Reduction mod `p` is then the
//! coordinatewise reduction into the polynomial basis of `F`.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, precision, Result};
use crate::field::{Field, FieldElement};
use crate::series::{LaurentSeries, PadicInteger};

/// Largest `p^N` accepted, so that products of residues fit in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

struct WittInner {
    field: Field,
    p: u64,
    m: usize,
    depth: u32,
    pn: u64,
    modulus: Vec<u64>,
}

/// The ring `W(F_{p^m})/p^N`.
#[derive(Clone)]
pub struct WittRing {
    inner: Arc<WittInner>,
}

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "W(F_{}^{})/{}^{}",
            self.inner.p, self.inner.m, self.inner.p, self.inner.depth
        )
    }
}

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field && self.inner.depth == other.inner.depth)
    }
}

/// An element of `W(F_{p^m})/p^N` as coordinates in the basis `1, x, …, x^{m−1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittElement(Vec<u64>);

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl WittElement {
    /// Coordinates, each in `[0, p^N)`.
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl WittRing {
    /// The ring lifting `field` with `depth` digits of `p`-adic precision.
    pub fn new(field: &Field, depth: u32) -> Result<Self> {
        let p = field.p() as u64;
        if depth == 0 {
            return Err(invalid("p-adic depth must be positive"));
        }
        let pn = p
            .checked_pow(depth)
            .filter(|&v| v < MAX_MODULUS)
            .ok_or_else(|| invalid(format!("p^N = {p}^{depth} exceeds the supported coefficient size")))?;
        let modulus = field.spec().modulus.iter().map(|&c| c as u64).collect();
        Ok(Self {
            inner: Arc::new(WittInner {
                field: field.clone(),
                p,
                m: field.m(),
                depth,
                pn,
                modulus,
            }),
        })
    }

    /// The residue field `F`.
    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    /// The prime `p`.
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    /// `m = [F : F_p]`.
    pub fn m(&self) -> usize {
        self.inner.m
    }

    /// The number `N` of `p`-adic digits kept.
    pub fn depth(&self) -> u32 {
        self.inner.depth
    }

    /// `p^N`.
    pub fn pn(&self) -> u64 {
        self.inner.pn
    }

    /// `p^k` for `k ≤ N`.
    pub fn p_pow(&self, k: u32) -> u64 {
        self.inner.p.pow(k.min(self.inner.depth))
    }

    /// The image of the integer `n`.
    pub fn from_int(&self, n: i64) -> WittElement {
        let mut v = vec![0; self.m()];
        v[0] = n.rem_euclid(self.pn() as i64) as u64;
        WittElement(v)
    }

    /// Zero.
    pub fn zero(&self) -> WittElement {
        self.from_int(0)
    }

    /// One.
    pub fn one(&self) -> WittElement {
        self.from_int(1)
    }

    /// The coordinatewise lift of `x ∈ F` with digits in `[0, p)`.
    pub fn lift(&self, x: FieldElement) -> WittElement {
        WittElement(self.field().coeffs(x).into_iter().map(u64::from).collect())
    }

    /// Reduction modulo `p`.
    pub fn reduce(&self, x: &WittElement) -> FieldElement {
        let p = self.p();
        let c: Vec<i64> = x.0.iter().map(|&v| (v % p) as i64).collect();
        self.field().from_coeffs(&c).expect("coordinates reduced mod p")
    }

    /// Element from coordinates (reduced mod `p^N`).
    pub fn from_coords(&self, coords: &[i64]) -> Result<WittElement> {
        if coords.len() > self.m() {
            return Err(invalid(format!("expected at most {} coordinates", self.m())));
        }
        let pn = self.pn() as i64;
        let mut v = vec![0; self.m()];
        for (slot, &c) in v.iter_mut().zip(coords) {
            *slot = c.rem_euclid(pn) as u64;
        }
        Ok(WittElement(v))
    }

    /// Sum.
    pub fn add(&self, a: &WittElement, b: &WittElement) -> WittElement {
        let pn = self.pn();
        WittElement(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % pn).collect())
    }

    /// Difference.
    pub fn sub(&self, a: &WittElement, b: &WittElement) -> WittElement {
        let pn = self.pn();
        WittElement(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + pn - y) % pn).collect())
    }

    /// Negation.
    pub fn neg(&self, a: &WittElement) -> WittElement {
        self.sub(&self.zero(), a)
    }

    /// Product.
    pub fn mul(&self, a: &WittElement, b: &WittElement) -> WittElement {
        let m = self.m();
        let mut acc = vec![0u64; 2 * m - 1];
        self.mul_acc(&mut acc, &a.0, &b.0);
        let mut out = vec![0u64; m];
        self.reduce_block(&mut acc, &mut out);
        WittElement(out)
    }

    /// `a^e`.
    pub fn pow(&self, a: &WittElement, mut e: u64) -> WittElement {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// Whether `a` is a unit, i.e. nonzero modulo `p`.
    pub fn is_unit(&self, a: &WittElement) -> bool {
        !self.reduce(a).is_zero()
    }

    /// `a^{-1}` by Newton iteration from the inverse modulo `p`.
    pub fn inv(&self, a: &WittElement) -> Result<WittElement> {
        let r = self.reduce(a);
        let r_inv = self.field().inv(r).ok_or_else(|| invalid("inverse of a non-unit"))?;
        let mut b = self.lift(r_inv);
        let two = self.from_int(2);
        let mut known = 1;
        while known < self.depth() {
            b = self.mul(&b, &self.sub(&two, &self.mul(a, &b)));
            known *= 2;
        }
        Ok(b)
    }

    /// The Teichmüller lift `[x]`, the unique root of unity reducing to `x`.
    pub fn teichmuller(&self, x: FieldElement) -> WittElement {
        if x.is_zero() {
            return self.zero();
        }
        let q = self.field().q() as u64;
        let mut y = self.lift(x);
        for _ in 0..self.depth() {
            y = self.pow(&y, q);
        }
        y
    }

    /// `p`-adic valuation (at most `N`; `None` for zero).
    pub fn valuation(&self, a: &WittElement) -> Option<u32> {
        a.0.iter().filter(|&&v| v != 0).map(|&v| self.val_int(v)).min()
    }

    fn val_int(&self, mut v: u64) -> u32 {
        let mut k = 0;
        while v % self.p() == 0 && k < self.depth() {
            v /= self.p();
            k += 1;
        }
        k
    }

    fn mul_acc(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        let pn = self.pn();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    acc[i + j] = (acc[i + j] + x * y) % pn;
                }
            }
        }
    }

    fn reduce_block(&self, acc: &mut [u64], out: &mut [u64]) {
        let m = self.m();
        let pn = self.pn();
        let md = &self.inner.modulus;
        for d in (m..acc.len()).rev() {
            let c = acc[d];
            if c == 0 {
                continue;
            }
            acc[d] = 0;
            for k in 0..m {
                if md[k] != 0 {
                    let t = c * md[k] % pn;
                    acc[d - m + k] = (acc[d - m + k] + pn - t) % pn;
                }
            }
        }
        out.copy_from_slice(&acc[..m]);
    }
}

/// A truncated Laurent series over `W(F_{p^m})/p^N`.
///
/// Coefficients are known for exponents in `[floor, order)` and only modulo
/// `p^{val_floor}`: every dropped or unknown contribution is divisible by
/// `p^{val_floor}` or lies at an exponent `≥ order`.
#[derive(Clone)]
pub struct PadicSeries {
    ring: WittRing,
    floor: i64,
    order: i64,
    val_floor: u32,
    coeffs: Vec<u64>,
}

impl fmt::Debug for PadicSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .take(12)
            .map(|(e, c)| {
                if self.ring.m() == 1 {
                    format!("{}π^{e}", c.0[0])
                } else {
                    format!("{:?}π^{e}", c.0)
                }
            })
            .collect();
        write!(
            f,
            "{} + O(π^{}, p^{})",
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            },
            self.order,
            self.val_floor
        )
    }
}

impl PartialEq for PadicSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.val_floor == other.val_floor && (self - other).is_zero()
    }
}

impl PadicSeries {
    fn raw(ring: &WittRing, floor: i64, order: i64, val_floor: u32, coeffs: Vec<u64>) -> Self {
        let mut s = Self {
            ring: ring.clone(),
            floor,
            order: order.max(floor),
            val_floor,
            coeffs,
        };
        s.coeffs.resize(((s.order - floor) as usize) * ring.m(), 0);
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        let md = self.ring.p_pow(self.val_floor);
        if md != self.ring.pn() {
            for c in &mut self.coeffs {
                *c %= md;
            }
        }
    }

    /// Zero known below `order`.
    pub fn zero(ring: &WittRing, order: i64) -> Self {
        Self::raw(ring, 0.min(order), order, ring.depth(), Vec::new())
    }

    /// A constant.
    pub fn constant(ring: &WittRing, c: &WittElement, order: i64) -> Self {
        Self::monomial(ring, c, 0, order)
    }

    /// One.
    pub fn one(ring: &WittRing, order: i64) -> Self {
        Self::constant(ring, &ring.one(), order)
    }

    /// `cπ^e` known below `order`.
    pub fn monomial(ring: &WittRing, c: &WittElement, e: i64, order: i64) -> Self {
        let mut s = Self::raw(ring, e.min(order), order, ring.depth(), Vec::new());
        if e < order {
            s.set_coeff(e, c);
        }
        s
    }

    /// Series with integer coefficients `ints[k]` at exponent `floor + k`.
    pub fn from_ints(ring: &WittRing, floor: i64, order: i64, ints: &[i64]) -> Self {
        let mut s = Self::raw(ring, floor.min(order), order, ring.depth(), Vec::new());
        for (k, &v) in ints.iter().enumerate() {
            let e = floor + k as i64;
            if e < order {
                s.set_coeff(e, &ring.from_int(v));
            }
        }
        s
    }

    /// Series from `(exponent, coefficient)` pairs.
    pub fn from_terms(ring: &WittRing, terms: &[(i64, WittElement)], order: i64) -> Self {
        let floor = terms.iter().map(|t| t.0).min().unwrap_or(0).min(0).min(order);
        let mut s = Self::raw(ring, floor, order, ring.depth(), Vec::new());
        for (e, c) in terms {
            if *e < order {
                let cur = s.coeff(*e);
                s.set_coeff(*e, &ring.add(&cur, c));
            }
        }
        s
    }

    fn set_coeff(&mut self, e: i64, c: &WittElement) {
        let m = self.ring.m();
        let k = (e - self.floor) as usize * m;
        self.coeffs[k..k + m].copy_from_slice(&c.0);
        self.canonicalize();
    }

    fn block(&self, k: usize) -> &[u64] {
        let m = self.ring.m();
        &self.coeffs[k * m..(k + 1) * m]
    }

    /// The coefficient ring.
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    /// Lowest stored exponent.
    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Exclusive upper bound of known exponents.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficients are known modulo `p^{val_floor}`.
    pub fn val_floor(&self) -> u32 {
        self.val_floor
    }

    /// Coefficient of `π^n` (zero outside the stored range).
    pub fn coeff(&self, n: i64) -> WittElement {
        if n < self.floor || n >= self.order {
            return self.ring.zero();
        }
        WittElement(self.block((n - self.floor) as usize).to_vec())
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, WittElement)> + '_ {
        let m = self.ring.m();
        self.coeffs
            .chunks(m)
            .enumerate()
            .filter(|(_, c)| c.iter().any(|&v| v != 0))
            .map(move |(k, c)| (self.floor + k as i64, WittElement(c.to_vec())))
    }

    /// Whether every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `π`-adic valuation of the known part, or `None` if it vanishes.
    pub fn val(&self) -> Option<i64> {
        self.terms().next().map(|(e, _)| e)
    }

    /// Exponent of the first coefficient that is a unit, or `None`.
    pub fn unit_val(&self) -> Option<i64> {
        self.terms().find(|(_, c)| self.ring.is_unit(c)).map(|(e, _)| e)
    }

    /// Same series known below `min(order, new_order)`.
    pub fn truncate(&self, new_order: i64) -> Self {
        if new_order >= self.order {
            return self.clone();
        }
        let keep = (new_order - self.floor).max(0) as usize * self.ring.m();
        Self::raw(
            &self.ring,
            self.floor.min(new_order),
            new_order,
            self.val_floor,
            self.coeffs[..keep].to_vec(),
        )
    }

    /// Same series with coefficients only trusted modulo `p^k`.
    pub fn with_val_floor(&self, k: u32) -> Self {
        let mut s = self.clone();
        s.val_floor = k.min(self.val_floor);
        s.canonicalize();
        s
    }

    /// Multiplication by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.floor += k;
        s.order += k;
        s
    }

    /// Multiplication by a constant.
    pub fn scale(&self, c: &WittElement) -> Self {
        let m = self.ring.m();
        let mut out = vec![0u64; self.coeffs.len()];
        let mut acc = vec![0u64; 2 * m - 1];
        for (k, blk) in self.coeffs.chunks(m).enumerate() {
            if blk.iter().all(|&v| v == 0) {
                continue;
            }
            acc.iter_mut().for_each(|v| *v = 0);
            self.ring.mul_acc(&mut acc, blk, &c.0);
            self.ring.reduce_block(&mut acc, &mut out[k * m..(k + 1) * m]);
        }
        Self::raw(&self.ring, self.floor, self.order, self.val_floor, out)
    }

    /// Multiplication by an integer.
    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&self.ring.from_int(n))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        assert!(self.ring == other.ring, "series over different coefficient rings");
        let m = self.ring.m();
        let pn = self.ring.pn();
        let order = self.order.min(other.order);
        let floor = self.floor.min(other.floor).min(order);
        let mut out = vec![0u64; (order - floor) as usize * m];
        for (src, sign) in [(self, false), (other, negate)] {
            for k in 0..((order.min(src.order) - src.floor).max(0) as usize) {
                let dst = (src.floor - floor) as usize + k;
                for t in 0..m {
                    let v = src.coeffs[k * m + t];
                    let slot = &mut out[dst * m + t];
                    *slot = if sign { (*slot + pn - v) % pn } else { (*slot + v) % pn };
                }
            }
        }
        Self::raw(&self.ring, floor, order, self.val_floor.min(other.val_floor), out)
    }

    /// Product; known below `min(order_a + floor_b, order_b + floor_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_to(other, i64::MAX)
    }

    /// Product known below `min(natural order, order)`.
    pub fn mul_to(&self, other: &Self, order: i64) -> Self {
        assert!(self.ring == other.ring, "series over different coefficient rings");
        let m = self.ring.m();
        let floor = self.floor + other.floor;
        let order = order
            .min(self.order + other.floor)
            .min(other.order + self.floor)
            .max(floor);
        let len = (order - floor) as usize;
        let w = 2 * m - 1;
        let mut acc = vec![0u64; len * w];
        let pn = self.ring.pn();
        let la = (self.order - self.floor) as usize;
        let lb = (other.order - other.floor) as usize;
        let b_nonzero: Vec<usize> = (0..lb.min(len))
            .filter(|&j| other.block(j).iter().any(|&v| v != 0))
            .collect();
        for i in 0..la.min(len) {
            let a = self.block(i);
            if a.iter().all(|&v| v == 0) {
                continue;
            }
            for &j in &b_nonzero {
                if i + j >= len {
                    break;
                }
                let b = other.block(j);
                let slot = &mut acc[(i + j) * w..(i + j + 1) * w];
                if m == 1 {
                    slot[0] = (slot[0] + a[0] * b[0]) % pn;
                } else {
                    for (s, &x) in a.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (t, &y) in b.iter().enumerate() {
                            slot[s + t] = (slot[s + t] + x * y) % pn;
                        }
                    }
                }
            }
        }
        let mut out = vec![0u64; len * m];
        for k in 0..len {
            self.ring
                .reduce_block(&mut acc[k * w..(k + 1) * w], &mut out[k * m..(k + 1) * m]);
        }
        Self::raw(&self.ring, floor, order, self.val_floor.min(other.val_floor), out)
    }

    /// `a^e` for `e ≥ 0`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.ring, self.order - self.floor).with_val_floor(self.val_floor);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Inverse of a power series whose constant term is a unit.
    pub fn inv(&self) -> Result<Self> {
        if self.floor != 0 || self.order <= 0 || !self.ring.is_unit(&self.coeff(0)) {
            return Err(invalid("only power series with unit constant term are inverted"));
        }
        let ring = &self.ring;
        let c0inv = ring.inv(&self.coeff(0))?;
        let n = self.order as usize;
        let mut b: Vec<WittElement> = Vec::with_capacity(n);
        b.push(c0inv.clone());
        for k in 1..n {
            let mut s = ring.zero();
            for j in 1..=k {
                let a = self.coeff(j as i64);
                if a.0.iter().any(|&v| v != 0) {
                    s = ring.add(&s, &ring.mul(&a, &b[k - j]));
                }
            }
            b.push(ring.neg(&ring.mul(&s, &c0inv)));
        }
        let flat = b.into_iter().flat_map(|c| c.0).collect();
        Ok(Self::raw(ring, 0, self.order, self.val_floor, flat))
    }

    /// Whether the series lies in `1 + πW[[π]]` on its window.
    pub fn is_one_mod_pi(&self) -> bool {
        self.floor >= 0 || (self.floor..0).all(|e| self.coeff(e).0.iter().all(|&v| v == 0))
    }

    /// Whether the constant term is one and there is no polar part.
    pub fn is_one_plus_pi(&self) -> bool {
        self.is_one_mod_pi() && self.coeff(0) == self.ring.one() && self.floor.min(0) == self.floor
    }

    /// `x(t)` for a power series `x` and a series `t` with zero constant term.
    ///
    /// Known below `min(order_x, order_t)`.
    pub fn compose(&self, t: &Self) -> Result<Self> {
        if self.floor < 0 {
            return Err(invalid("substitution into a series with a polar part"));
        }
        if t.floor < 0 || t.coeff(0).0.iter().any(|&v| v != 0) {
            return Err(invalid("substituted series must have positive valuation"));
        }
        let order = self.order.min(t.order);
        let vf = self.val_floor.min(t.val_floor);
        let top = self.terms().filter(|(e, _)| *e < order).map(|(e, _)| e).last();
        let Some(top) = top else {
            return Ok(Self::zero(&self.ring, order).with_val_floor(vf));
        };
        let t = t.truncate(order);
        let mut acc = Self::constant(&self.ring, &self.coeff(top), order);
        for e in (0..top).rev() {
            acc = acc.mul_to(&t, order);
            let c = self.coeff(e);
            if c.0.iter().any(|&v| v != 0) {
                acc = &acc + &Self::constant(&self.ring, &c, order);
            }
        }
        Ok(acc.truncate(order).with_val_floor(vf))
    }

    /// `φ(x) = x((1+π)^p − 1)`.
    pub fn phi(&self) -> Result<Self> {
        self.compose(&phi_pi(&self.ring, self.order))
    }

    /// `φ^k(x)`.
    pub fn phi_pow(&self, k: usize) -> Result<Self> {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.phi()?;
        }
        Ok(x)
    }

    /// Division by `π^k` of a series with no terms below `π^k`.
    pub fn div_pi_pow(&self, k: i64) -> Result<Self> {
        if let Some(v) = self.val() {
            if v < k {
                return Err(invalid(format!("series has a term at π^{v}, below π^{k}")));
            }
        }
        let s = self.shift(-k);
        let start = 0.max(s.floor).min(s.order);
        Ok(Self::from_block_range(&s, start))
    }

    fn from_block_range(s: &Self, start: i64) -> Self {
        let m = s.ring.m();
        let off = (start - s.floor) as usize * m;
        Self::raw(&s.ring, start, s.order, s.val_floor, s.coeffs[off..].to_vec())
    }

    /// Division by `p` of a series whose coefficients are all divisible by `p`;
    /// one digit of `p`-adic precision is lost.
    pub fn div_p(&self) -> Result<Self> {
        let p = self.ring.p();
        if self.val_floor == 0 {
            return Err(precision("no p-adic digits left to divide by p"));
        }
        if self.coeffs.iter().any(|&c| c % p != 0) {
            return Err(invalid("series is not divisible by p"));
        }
        let coeffs = self.coeffs.iter().map(|&c| c / p).collect();
        Ok(Self::raw(
            &self.ring,
            self.floor,
            self.order,
            self.val_floor - 1,
            coeffs,
        ))
    }

    /// `x/q` for `q = φ(π)/π`, or `None` when `q` does not divide `x`.
    ///
    /// Writing `q = π^{p−1}(1 + ε)` with `ε` a polynomial in `π^{−1}` divisible
    /// by `p`, the quotient is `π^{1−p} Σ_{k<N} (−ε)^k x`; it is a power series
    /// exactly when `q | x`. The result is known below `order − N(p−1)`.
    pub fn div_by_q(&self) -> Result<Option<Self>> {
        let ring = &self.ring;
        let p = ring.p() as i64;
        let n = self.val_floor.max(1) as i64;
        let order = self.order - n * (p - 1);
        if order <= self.floor.max(0) {
            return Err(precision("window too short to divide by q"));
        }
        let q = q_series(ring, p);
        let eps_terms: Vec<(i64, WittElement)> = q
            .terms()
            .filter(|(e, _)| *e < p - 1)
            .map(|(e, c)| (e - (p - 1), ring.neg(&c)))
            .collect();
        let neg_eps = Self::from_terms(ring, &eps_terms, 1);
        let mut term = self.clone();
        let mut total = self.clone();
        for _ in 1..n {
            term = term.mul_laurent(&neg_eps, order + p - 1);
            total = &total.truncate(order + p - 1) + &term;
        }
        let h = total.shift(1 - p).truncate(order);
        if (h.floor..0.min(h.order)).any(|e| h.coeff(e).0.iter().any(|&v| v != 0)) {
            return Ok(None);
        }
        Ok(Some(Self::from_block_range(&h, 0.max(h.floor).min(h.order))))
    }

    /// Product with a Laurent polynomial `e` (exactly known), truncated at `order`.
    fn mul_laurent(&self, e: &Self, order: i64) -> Self {
        let order = order.min(self.order + e.floor.min(0));
        let mut acc = Self::raw(
            &self.ring,
            (self.floor + e.floor).min(order),
            order,
            self.val_floor,
            Vec::new(),
        );
        for (k, c) in e.terms() {
            acc = &acc + &self.scale(&c).shift(k).truncate(order);
        }
        acc
    }

    /// Reduction modulo `p`.
    pub fn reduce_mod_p(&self) -> Result<LaurentSeries> {
        if self.val_floor == 0 {
            return Err(precision("no p-adic digits known"));
        }
        let field = self.ring.field();
        let m = self.ring.m();
        let coeffs = self
            .coeffs
            .chunks(m)
            .map(|c| self.ring.reduce(&WittElement(c.to_vec())))
            .collect();
        Ok(LaurentSeries::from_coeffs(field, self.floor, self.order, coeffs))
    }

    /// Whether `self` and `other` agree below `order` (and their common window).
    pub fn agrees_with(&self, other: &Self, order: i64) -> bool {
        let top = order.min(self.order).min(other.order);
        let vf = self.val_floor.min(other.val_floor);
        (&self.truncate(top).with_val_floor(vf) - &other.truncate(top).with_val_floor(vf)).is_zero()
    }
}

impl std::ops::Add for &PadicSeries {
    type Output = PadicSeries;
    fn add(self, rhs: &PadicSeries) -> PadicSeries {
        self.combine(rhs, false)
    }
}

impl std::ops::Sub for &PadicSeries {
    type Output = PadicSeries;
    fn sub(self, rhs: &PadicSeries) -> PadicSeries {
        self.combine(rhs, true)
    }
}

impl std::ops::Neg for &PadicSeries {
    type Output = PadicSeries;
    fn neg(self) -> PadicSeries {
        PadicSeries::zero(&self.ring, self.order)
            .with_val_floor(self.val_floor)
            .combine(self, true)
    }
}

impl std::ops::Mul for &PadicSeries {
    type Output = PadicSeries;
    fn mul(self, rhs: &PadicSeries) -> PadicSeries {
        PadicSeries::mul(self, rhs)
    }
}

fn binomial_row(p: i64) -> Vec<i64> {
    let mut row = vec![1i64];
    for k in 1..=p {
        let prev = row[(k - 1) as usize];
        row.push(prev * (p - k + 1) / k);
    }
    row
}

/// `φ(π) = (1+π)^p − 1`.
pub fn phi_pi(ring: &WittRing, order: i64) -> PadicSeries {
    let row = binomial_row(ring.p() as i64);
    let mut ints = row;
    ints[0] = 0;
    PadicSeries::from_ints(ring, 0, order, &ints)
}

/// The polynomial `q = φ(π)/π = Σ_{k=1}^{p} C(p,k) π^{k−1}`.
pub fn q_series(ring: &WittRing, order: i64) -> PadicSeries {
    let row = binomial_row(ring.p() as i64);
    PadicSeries::from_ints(ring, 0, order.max(1), &row[1..])
}

/// Number of digits of `χ(γ)` that determine `(1+π)^{χ(γ)}` modulo `(p^N, π^order)`.
pub fn chi_digits_needed(p: u64, depth: u32, order: i64) -> u32 {
    let mut k = depth;
    let mut t = (order - 1).max(1) as u64;
    while t >= p {
        t /= p;
        k += 1;
    }
    k
}

/// `γ(π) = (1+π)^{χ(γ)} − 1` modulo `(p^N, π^order)`.
pub fn gamma_pi(ring: &WittRing, chi: &PadicInteger, order: i64) -> Result<PadicSeries> {
    let k = chi_digits_needed(ring.p(), ring.depth(), order);
    if chi.precision() < k {
        return Err(precision(format!(
            "χ(γ) is known to {} digits, {k} are needed",
            chi.precision()
        )));
    }
    let e = chi.residue(k);
    let base = PadicSeries::from_ints(ring, 0, order, &[1, 1]);
    let pw = base.pow(e);
    Ok(&pw - &PadicSeries::one(ring, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, m: u32, n: u32) -> WittRing {
        WittRing::new(&Field::with_degrees(p, m, m).unwrap(), n).unwrap()
    }

    #[test]
    fn teichmuller_is_a_root_of_unity() {
        let w = ring(3, 2, 4);
        let x = w.field().primitive();
        let t = w.teichmuller(x);
        assert_eq!(w.reduce(&t), x);
        assert_eq!(w.pow(&t, 8), w.one());
        let inv = w.inv(&t).unwrap();
        assert_eq!(w.mul(&t, &inv), w.one());
    }

    #[test]
    fn q_reduces_to_a_power_of_pi() {
        let w = ring(5, 1, 3);
        let q = q_series(&w, 20);
        let qbar = q.reduce_mod_p().unwrap();
        let f = w.field();
        assert_eq!(qbar, LaurentSeries::monomial(f, f.one(), 4, 20));
        let phi = PadicSeries::from_ints(&w, 0, 20, &[0, 1]).phi().unwrap();
        assert_eq!(phi, q.shift(1).truncate(20).div_pi_pow(0).unwrap());
    }

    #[test]
    fn division_by_q() {
        let w = ring(3, 1, 3);
        let x = PadicSeries::from_ints(&w, 0, 60, &[1, 2, 0, 5, 7]);
        let q = q_series(&w, 60);
        let prod = x.mul(&q);
        let back = prod.div_by_q().unwrap().unwrap();
        assert!(back.agrees_with(&x, back.order()));
        assert!(x.div_by_q().unwrap().is_none());
    }

    #[test]
    fn inverse_and_composition() {
        let w = ring(2, 2, 5);
        let x = PadicSeries::from_ints(&w, 0, 30, &[3, 1, 4, 1, 5]);
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), PadicSeries::one(&w, 30));
        let t = gamma_pi(&w, &PadicInteger::from_int(2, -1), 30).unwrap();
        let tt = t.compose(&t).unwrap();
        let id = PadicSeries::from_ints(&w, 0, 30, &[0, 1]);
        assert_eq!(tt, id);
    }
}
