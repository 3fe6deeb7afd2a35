//! The ring `E = F((π))^S` with its Frobenius and `Γ` actions.
//!
//! An element is an `f`-tuple of Laurent series. Frobenius rotates the tuple
//! and substitutes `π ↦ (1+π)^p − 1 = π^p`; an element `γ ∈ Γ` substitutes
//! `π ↦ (1+π)^{χ(γ)} − 1` in every component. [`TateRing`] carries the field,
//! the working precision, the chosen generators of `Γ` and memoized series
//! such as `γ(π)` and `λ_γ`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{Field, FieldElement};
use crate::series::{nth_root_unit, one_plus_pi_pow, LaurentSeries, PadicInteger};

/// Truncation parameters shared by all computations of one job.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    /// Exclusive `π`-adic order `M` of working series.
    pub pi_order: i64,
    /// Lowest exponent `L` allowed for coboundary witnesses.
    pub tail_floor: i64,
    /// Number of `p`-adic digits `N` kept on the integral side.
    pub padic_depth: u32,
}

impl Precision {
    /// `M = 4p^{f+1}`, `L = −4p^f`, `N = 3`.
    pub fn default_for(p: u32, f: usize) -> Self {
        let pf = (p as i64).pow(f as u32);
        Self {
            pi_order: 4 * pf * p as i64,
            tail_floor: -4 * pf,
            padic_depth: 3,
        }
    }

    /// Every window multiplied by `k`.
    pub fn scaled(&self, k: u32) -> Self {
        let k = k.max(1);
        Self {
            pi_order: self.pi_order * k as i64,
            tail_floor: self.tail_floor * k as i64,
            padic_depth: self.padic_depth * k,
        }
    }
}

/// An element of `Γ`, identified by its cyclotomic character value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GammaElement {
    chi: PadicInteger,
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "γ[χ = {} mod {}^{}]",
            self.chi.value(),
            self.chi.p(),
            self.chi.precision()
        )
    }
}

impl GammaElement {
    /// The element with `χ(γ) = chi`; `chi` must be a unit.
    pub fn new(chi: PadicInteger) -> Result<Self> {
        if !chi.is_unit() {
            return Err(invalid("χ(γ) must be a p-adic unit"));
        }
        Ok(Self { chi })
    }

    /// The element with `χ(γ)` equal to the integer `v`, at maximal digit precision.
    pub fn from_int(p: u32, v: i128) -> Result<Self> {
        Self::new(PadicInteger::from_int(p as u64, v))
    }

    /// `χ(γ)`.
    pub fn chi(&self) -> PadicInteger {
        self.chi
    }

    /// `v_p(χ(γ) − 1)`, so that `γ ∈ Γ_n ∖ Γ_{n+1}` for `n = level ≥ 1`.
    pub fn level(&self) -> u32 {
        if self.chi.value() % self.chi.p() == 1 % self.chi.p() {
            self.chi.level()
        } else {
            0
        }
    }

    /// The product `γγ′`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            chi: self.chi.mul(&other.chi),
        }
    }

    /// `γ^k` for `k ≥ 0`.
    pub fn pow(&self, k: u64) -> Self {
        Self { chi: self.chi.pow(k) }
    }
}

/// An `f`-tuple of Laurent series, one per embedding `τ_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct TateElement {
    comps: Vec<LaurentSeries>,
}

impl fmt::Debug for TateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}

impl TateElement {
    /// Tuple with the given components.
    ///
    /// # Panics
    /// If `comps` is empty.
    pub fn new(comps: Vec<LaurentSeries>) -> Self {
        assert!(!comps.is_empty(), "a Tate element needs at least one component");
        Self { comps }
    }

    /// The zero tuple of length `f`.
    pub fn zero(field: &Field, f: usize, order: i64) -> Self {
        Self::new(vec![LaurentSeries::zero(field, order); f])
    }

    /// The diagonal constant `(c, …, c)`.
    pub fn constant(field: &Field, f: usize, c: FieldElement, order: i64) -> Self {
        Self::new(vec![LaurentSeries::constant(field, c, order); f])
    }

    /// `s·e_i`: the series `s` in component `i`, zero elsewhere.
    pub fn unit_vector(f: usize, i: usize, s: LaurentSeries) -> Self {
        let zero = LaurentSeries::zero(s.field(), s.order());
        let mut comps = vec![zero; f];
        comps[i] = s;
        Self::new(comps)
    }

    /// Number of components.
    pub fn f(&self) -> usize {
        self.comps.len()
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        self.comps[0].field()
    }

    /// All components.
    pub fn comps(&self) -> &[LaurentSeries] {
        &self.comps
    }

    /// Component `i` (indices are taken mod `f`).
    pub fn comp(&self, i: usize) -> &LaurentSeries {
        &self.comps[i % self.comps.len()]
    }

    /// Replaces component `i`.
    pub fn with_comp(&self, i: usize, s: LaurentSeries) -> Self {
        let mut comps = self.comps.clone();
        comps[i] = s;
        Self::new(comps)
    }

    /// Minimum of the component valuations, `None` if all vanish.
    pub fn val(&self) -> Option<i64> {
        self.comps.iter().filter_map(|c| c.val()).min()
    }

    /// Minimum of the component orders.
    pub fn order(&self) -> i64 {
        self.comps.iter().map(|c| c.order()).min().expect("nonempty")
    }

    /// Minimum of the component floors.
    pub fn floor(&self) -> i64 {
        self.comps.iter().map(|c| c.floor()).min().expect("nonempty")
    }

    /// Whether all components vanish on their windows.
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Whether every component lies in `π^k F[[π]]` on its window.
    pub fn is_divisible_by_pi_pow(&self, k: i64) -> bool {
        self.comps.iter().all(|c| c.floor() >= k)
    }

    fn zip(&self, other: &Self, op: impl Fn(&LaurentSeries, &LaurentSeries) -> LaurentSeries) -> Self {
        assert_eq!(self.f(), other.f(), "Tate elements of different lengths");
        Self::new(self.comps.iter().zip(&other.comps).map(|(a, b)| op(a, b)).collect())
    }

    /// Componentwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    /// Componentwise scalar multiple.
    pub fn scale(&self, c: FieldElement) -> Self {
        Self::new(self.comps.iter().map(|s| s.scale(c)).collect())
    }

    /// Every component cut at `order`.
    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.comps.iter().map(|s| s.truncate(order)).collect())
    }

    /// Whether all components agree below `order`.
    pub fn agrees_with(&self, other: &Self, order: i64) -> bool {
        self.comps
            .iter()
            .zip(&other.comps)
            .all(|(a, b)| a.agrees_with(b, order))
    }

    /// Componentwise map.
    pub fn map(&self, op: impl Fn(usize, &LaurentSeries) -> LaurentSeries) -> Self {
        Self::new(self.comps.iter().enumerate().map(|(i, s)| op(i, s)).collect())
    }
}

impl std::ops::Add for &TateElement {
    type Output = TateElement;
    fn add(self, rhs: &TateElement) -> TateElement {
        self.zip(rhs, |a, b| a + b)
    }
}

impl std::ops::Sub for &TateElement {
    type Output = TateElement;
    fn sub(self, rhs: &TateElement) -> TateElement {
        self.zip(rhs, |a, b| a - b)
    }
}

impl std::ops::Neg for &TateElement {
    type Output = TateElement;
    fn neg(self) -> TateElement {
        TateElement::new(self.comps.iter().map(|s| -s).collect())
    }
}

/// The Frobenius data `κ_i = C_i π^{e_i}` of a diagonal `φ`-semilinear operator,
/// with `C_0 = C` and `C_i = 1` for `i > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiTwist<'a> {
    /// Unramified constant in component 0.
    pub c: FieldElement,
    /// Exponents `e_i` of `π` in each component.
    pub exps: &'a [i64],
}

type SeriesCache<K> = Mutex<HashMap<K, Arc<LaurentSeries>>>;

/// The ring `F((π))^S` together with working precision and generators of `Γ`.
pub struct TateRing {
    field: Field,
    f: usize,
    precision: Precision,
    eta: GammaElement,
    xi: GammaElement,
    z: FieldElement,
    gamma_pi: SeriesCache<u64>,
    lambdas: SeriesCache<(u64, i64)>,
    unit_powers: SeriesCache<(u64, i64, i64)>,
    gamma_columns: Mutex<HashMap<(u64, i64, i64), Arc<Vec<LaurentSeries>>>>,
}

impl fmt::Debug for TateRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TateRing")
            .field("field", &self.field)
            .field("f", &self.f)
            .field("precision", &self.precision)
            .field("eta", &self.eta)
            .field("xi", &self.xi)
            .finish()
    }
}

/// Smallest primitive root modulo the prime `p`.
pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    (2..p)
        .find(|&g| factors.iter().all(|&q| powmod(g, (p - 1) / q) != 1))
        .expect("primitive root exists")
}

/// Default `χ(η)`: for odd `p` the smallest primitive root `g` mod `p`, replaced
/// by `g + p` when `g^{p−1} ≡ 1 mod p²`; for `p = 2` the value `−1`.
pub fn default_chi_eta(p: u32) -> i128 {
    if p == 2 {
        return -1;
    }
    let p = p as u64;
    let g = smallest_primitive_root(p);
    let p2 = (p * p) as u128;
    let mut r: u128 = 1;
    for _ in 0..p - 1 {
        r = r * g as u128 % p2;
    }
    if r == 1 {
        (g + p) as i128
    } else {
        g as i128
    }
}

impl TateRing {
    /// Ring over `field` (with `f = field.f()` embeddings) using the default generators.
    pub fn new(field: &Field, precision: Precision) -> Result<Self> {
        Self::with_chi_eta(field, precision, None)
    }

    /// Ring with an explicit value of `χ(η)` (a topological generator of `Γ`
    /// for odd `p`; an element with `χ(η) ≡ −1 mod 4` for `p = 2`).
    pub fn with_chi_eta(field: &Field, precision: Precision, chi_eta: Option<PadicInteger>) -> Result<Self> {
        let p = field.p();
        let pu = p as u64;
        let chi = match chi_eta {
            Some(c) => c,
            None => PadicInteger::from_int(pu, default_chi_eta(p)),
        };
        if chi.p() != pu {
            return Err(invalid("χ(η) is given over a different prime"));
        }
        let eta = GammaElement::new(chi)?;
        let (xi, z);
        if p == 2 {
            if chi.residue(2) != 3 {
                return Err(invalid("for p = 2, χ(η) must be ≡ 3 mod 4"));
            }
            xi = GammaElement::from_int(2, 5)?;
            z = field.one();
        } else {
            let r = chi.residue(1);
            let mut order = 1;
            let mut acc = r;
            while acc != 1 {
                acc = acc * r % pu;
                order += 1;
            }
            if order != pu - 1 {
                return Err(invalid("χ(η) mod p must be a primitive root"));
            }
            xi = eta.pow(pu - 1);
            let x2 = xi.chi().residue(2);
            if x2 == 1 {
                return Err(invalid("χ(η)^{p−1} must not be ≡ 1 mod p²"));
            }
            z = field.from_int(((x2 - 1) / pu) as i64);
        }
        if precision.pi_order < 2 {
            return Err(invalid("π-order must be at least 2"));
        }
        Ok(Self {
            field: field.clone(),
            f: field.f(),
            precision,
            eta,
            xi,
            z,
            gamma_pi: Mutex::default(),
            lambdas: Mutex::default(),
            unit_powers: Mutex::default(),
            gamma_columns: Mutex::default(),
        })
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The prime.
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// Number of embeddings.
    pub fn f(&self) -> usize {
        self.f
    }

    /// `p^f`.
    pub fn q(&self) -> i64 {
        (self.p() as i64).pow(self.f as u32)
    }

    /// Working precision.
    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Working `π`-order `M`.
    pub fn order(&self) -> i64 {
        self.precision.pi_order
    }

    /// The chosen generator `η`.
    pub fn eta(&self) -> GammaElement {
        self.eta
    }

    /// `ξ`: `η^{p−1}` for odd `p`, the element with `χ(ξ) = 5` for `p = 2`.
    pub fn xi(&self) -> GammaElement {
        self.xi
    }

    /// `z ∈ F_p^×` with `χ(ξ) ≡ 1 + zp mod p²` (odd `p`); `1` for `p = 2`.
    pub fn z(&self) -> FieldElement {
        self.z
    }

    /// The generators at which cocycles are stored: `[η]` for odd `p`, `[η, ξ]` for `p = 2`.
    pub fn generators(&self) -> Vec<GammaElement> {
        if self.p() == 2 {
            vec![self.eta, self.xi]
        } else {
            vec![self.eta]
        }
    }

    /// `χ(γ) mod p` as an element of `F`.
    pub fn chi_bar(&self, g: &GammaElement) -> FieldElement {
        self.field.from_int(g.chi().residue(1) as i64)
    }

    /// The zero element at working order.
    pub fn zero(&self) -> TateElement {
        TateElement::zero(&self.field, self.f, self.order())
    }

    /// `φ(x)`: component `i` is `x_{i+1}(π^p)`.
    pub fn phi_act(&self, x: &TateElement) -> TateElement {
        let p = self.p() as u64;
        let f = x.f();
        TateElement::new((0..f).map(|i| x.comp((i + 1) % f).substitute_power(p)).collect())
    }

    /// `γ(π) = (1+π)^{χ(γ)} − 1` known below `order`.
    pub fn gamma_pi(&self, g: &GammaElement, order: i64) -> Result<Arc<LaurentSeries>> {
        let key = g.chi().value();
        if let Some(s) = self.gamma_pi.lock().expect("cache lock").get(&key) {
            if s.order() >= order {
                return Ok(s.clone());
            }
        }
        let target = order.max(self.order()).max(2);
        let pow = one_plus_pi_pow(&self.field, &g.chi(), target)?;
        let s = Arc::new(&pow - &LaurentSeries::one(&self.field, target));
        self.gamma_pi.lock().expect("cache lock").insert(key, s.clone());
        Ok(s)
    }

    /// `(γ(π)/π)^v` known below `order`.
    fn unit_power(&self, g: &GammaElement, v: i64, order: i64) -> Result<Arc<LaurentSeries>> {
        let key = (g.chi().value(), v, order);
        if let Some(s) = self.unit_powers.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let u = self.gamma_pi(g, order + 1)?.shift(-1).truncate(order);
        let s = Arc::new(u.pow(v)?.truncate(order));
        self.unit_powers.lock().expect("cache lock").insert(key, s.clone());
        Ok(s)
    }

    /// `g(γ(π))` for a single Laurent series; the result has the same order as `g`.
    pub fn gamma_series(&self, g: &GammaElement, s: &LaurentSeries) -> Result<LaurentSeries> {
        if s.is_zero() {
            return Ok(s.clone());
        }
        let v = s.floor();
        let n = s.order() - v;
        let big_g = self.gamma_pi(g, n)?;
        let gp = big_g.coeff_range(0, n);
        let raw = gamma_nonneg(&self.field, self.p() as usize, s.coeff_slice(), n as usize, &gp);
        let y = LaurentSeries::from_coeffs(&self.field, 0, n, raw);
        let y = if v == 0 {
            y
        } else {
            y.mul_series(&*self.unit_power(g, v, n)?)
        };
        Ok(y.shift(v))
    }

    /// `γ(x)`, componentwise substitution `π ↦ γ(π)`.
    pub fn gamma_act(&self, g: &GammaElement, x: &TateElement) -> Result<TateElement> {
        let comps = x
            .comps()
            .iter()
            .map(|s| self.gamma_series(g, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(TateElement::new(comps))
    }

    /// `λ_γ ∈ 1 + πF_p[[π]]`, the `(p^f−1)/(p−1)`-th root of `γ(π)/(χ̄(γ)π)`, known below `order`.
    pub fn lambda(&self, g: &GammaElement, order: i64) -> Result<Arc<LaurentSeries>> {
        let key = (g.chi().value(), order);
        if let Some(s) = self.lambdas.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let chi_inv = self.field.inv(self.chi_bar(g)).expect("χ(γ) is a unit");
        let ratio = self.gamma_pi(g, order + 1)?.shift(-1).truncate(order).scale(chi_inv);
        let p = self.p() as u64;
        let d = (p.pow(self.f as u32) - 1) / (p - 1);
        let s = Arc::new(nth_root_unit(&ratio, d)?);
        self.lambdas.lock().expect("cache lock").insert(key, s.clone());
        Ok(s)
    }

    /// The columns `γ(π^s)` for `s ∈ [lo, hi)`, each known below `order`.
    ///
    /// Exponents `s = ps′ + r` are assembled from `γ(π^{s′})(π^p)·γ(π)^r`, so only
    /// a small set of columns is computed directly.
    pub fn gamma_columns(&self, g: &GammaElement, lo: i64, hi: i64, order: i64) -> Result<Arc<Vec<LaurentSeries>>> {
        let key = (g.chi().value(), lo, hi);
        if let Some(c) = self.gamma_columns.lock().expect("cache lock").get(&key) {
            if c.iter().all(|s| s.order() >= order) {
                return Ok(c.clone());
            }
        }
        let p = self.p() as i64;
        let big_g = self.gamma_pi(g, order - lo + 1)?;
        let mut memo: HashMap<i64, LaurentSeries> = HashMap::new();
        let mut cols = Vec::with_capacity((hi - lo).max(0) as usize);
        for s in lo..hi {
            cols.push(self.gamma_monomial(g, s, order, p, &big_g, &mut memo)?);
        }
        let cols = Arc::new(cols);
        self.gamma_columns.lock().expect("cache lock").insert(key, cols.clone());
        Ok(cols)
    }

    fn gamma_monomial(
        &self,
        g: &GammaElement,
        s: i64,
        order: i64,
        p: i64,
        big_g: &LaurentSeries,
        memo: &mut HashMap<i64, LaurentSeries>,
    ) -> Result<LaurentSeries> {
        if let Some(c) = memo.get(&s).filter(|c| c.order() >= order) {
            return Ok(c.truncate(order));
        }
        let col = if s.abs() < p || s == 0 {
            let unit = self.unit_power(g, s, order - s)?;
            unit.shift(s).truncate(order)
        } else {
            let r = s.rem_euclid(p);
            let sp = s.div_euclid(p);
            let inner_order = (order - r).div_euclid(p) + 1;
            let inner = self.gamma_monomial(g, sp, inner_order, p, big_g, memo)?;
            let lifted = inner.substitute_power(p as u64);
            if r == 0 {
                lifted.truncate(order)
            } else {
                let gr = big_g.truncate(order - s + r + 1).pow(r)?;
                lifted.mul_series(&gr).truncate(order)
            }
        };
        memo.insert(s, col.clone());
        Ok(col)
    }

    /// Solves `κ_φ φ(G) − G = R` for `G ∈ F[[π]]^S`, where `κ_i = C_i π^{e_i}`.
    ///
    /// With `trivial` set, the operator may be non-injective on constants
    /// (`C = 1`, all `e_i = 0`); the constant of component 0 is then fixed to
    /// zero and the constant term of the folded right-hand side must vanish.
    pub fn solve_twisted_phi(&self, kappa: PhiTwist<'_>, rhs: &TateElement, trivial: bool) -> Result<TateElement> {
        let f = self.f;
        let p = self.p() as u64;
        if rhs.f() != f || kappa.exps.len() != f {
            return Err(invalid("component count mismatch"));
        }
        if rhs.floor() < 0 {
            return Err(invalid("right-hand side must lie in F[[π]]^S"));
        }
        let order = rhs.order();
        let field = &self.field;
        let kappa_series = |i: usize, ord: i64| {
            let c = if i == 0 { kappa.c } else { field.one() };
            LaurentSeries::monomial(field, c, kappa.exps[i], ord)
        };
        let mut folded = rhs.comp(0).truncate(order);
        let mut prefix = kappa_series(0, order);
        let mut sub = p;
        for j in 1..f {
            let term = rhs.comp(j).substitute_power(sub);
            folded = &folded + &prefix.mul_series(&term).truncate(order);
            let next = kappa_series(j, order).substitute_power(sub);
            prefix = prefix.mul_series(&next).truncate(order);
            sub *= p;
        }
        let sigma: i64 = kappa
            .exps
            .iter()
            .enumerate()
            .map(|(i, &e)| e * (p as i64).pow(i as u32))
            .sum();
        let g0 = solve_twisted(kappa.c, sigma, p.pow(f as u32), &folded, trivial)?;
        let mut comps = vec![LaurentSeries::zero(field, order); f];
        comps[0] = g0;
        for i in (1..f).rev() {
            let next = &comps[(i + 1) % f];
            let prod = kappa_series(i, order).mul_series(&next.substitute_power(p));
            comps[i] = (&prod - rhs.comp(i)).truncate(order);
        }
        Ok(TateElement::new(comps))
    }

    /// `(Cπ^{(p−1)Σ}Φ − 1)^{−1}(h)` where `Φ(g)(π) = g(π^{p^f})`.
    pub fn solve_phi_minus_one(&self, c: FieldElement, sigma: i64, h: &LaurentSeries) -> Result<LaurentSeries> {
        if sigma < 0 {
            return Err(invalid("Σ must be non-negative"));
        }
        if sigma == 0 && c == FieldElement::ONE {
            return Err(Error::NotInvertible("C = 1 with Σ = 0".into()));
        }
        let q = (self.p() as u64).pow(self.f as u32);
        solve_twisted(c, (self.p() as i64 - 1) * sigma, q, h, false)
    }
}

/// Solves `Cπ^e g(π^q) − g = h` in `F[[π]]` coefficient by coefficient.
///
/// When `e = 0` and `C = 1` the constant term is undetermined; with `trivial`
/// set it is chosen to be zero (requiring `h_0 = 0`), otherwise an error is returned.
pub fn solve_twisted(c: FieldElement, e: i64, q: u64, h: &LaurentSeries, trivial: bool) -> Result<LaurentSeries> {
    let field = h.field();
    if h.floor() < 0 {
        return Err(invalid("right-hand side must lie in F[[π]]"));
    }
    if e < 0 || q == 0 {
        return Err(invalid("invalid twist parameters"));
    }
    let order = h.order();
    if order <= 0 {
        return Ok(LaurentSeries::zero(field, order));
    }
    let n = order as usize;
    let hs = h.coeff_range(0, order);
    let q = q as usize;
    let e = e as usize;
    let mut g = vec![FieldElement::ZERO; n];
    if e == 0 && q == 1 {
        let d = field.sub(c, field.one());
        let dinv = field
            .inv(d)
            .ok_or_else(|| Error::NotInvertible("C = 1 with trivial twist".into()))?;
        for k in 0..n {
            g[k] = field.mul(hs[k], dinv);
        }
        return Ok(LaurentSeries::from_coeffs(field, 0, order, g));
    }
    for k in 0..n {
        if k == 0 && e == 0 {
            let d = field.sub(c, field.one());
            g[0] = match field.inv(d) {
                Some(dinv) => field.mul(hs[0], dinv),
                None if trivial => {
                    if !hs[0].is_zero() {
                        return Err(Error::NotInvertible("constant term outside the image".into()));
                    }
                    FieldElement::ZERO
                }
                None => return Err(Error::NotInvertible("C = 1 with Σ = 0".into())),
            };
            continue;
        }
        let mut v = field.neg(hs[k]);
        if k >= e && (k - e) % q == 0 {
            v = field.mul_add(v, c, g[(k - e) / q]);
        }
        g[k] = v;
    }
    Ok(LaurentSeries::from_coeffs(field, 0, order, g))
}

fn mul_into(field: &Field, acc: &mut [FieldElement], a: &[FieldElement], a_step: usize, b: &[FieldElement]) {
    let n = acc.len();
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let base = i * a_step;
        if base >= n {
            break;
        }
        let lim = (n - base).min(b.len());
        for (slot, &bj) in acc[base..base + lim].iter_mut().zip(&b[..lim]) {
            if !bj.is_zero() {
                *slot = field.mul_add(*slot, ai, bj);
            }
        }
    }
}

/// `h(G)` for `h ∈ F[[π]]` known below `n` and `G = γ(π)` with `F_p` coefficients.
///
/// Splits `h = Σ_{r<p} π^r h_r(π^p)`; since `G(π)^p = G(π^p)`, each part maps to
/// `G^r·(γh_r)(π^p)`, so the work per level is quadratic in `n`.
fn gamma_nonneg(field: &Field, p: usize, h: &[FieldElement], n: usize, g: &[FieldElement]) -> Vec<FieldElement> {
    let h = &h[..h.len().min(n)];
    let mut out = vec![FieldElement::ZERO; n];
    if h.iter().all(|c| c.is_zero()) {
        return out;
    }
    let mut gpow: Vec<FieldElement> = vec![FieldElement::ZERO; n];
    gpow[0] = FieldElement::ONE;
    if n <= 2 * p {
        for (k, &hk) in h.iter().enumerate() {
            if k > 0 {
                let mut next = vec![FieldElement::ZERO; n];
                mul_into(field, &mut next, &gpow, 1, g);
                gpow = next;
            }
            if !hk.is_zero() {
                for (slot, &c) in out.iter_mut().zip(&gpow) {
                    *slot = field.mul_add(*slot, hk, c);
                }
            }
        }
        return out;
    }
    for r in 0..p.min(n) {
        if r > 0 {
            let mut next = vec![FieldElement::ZERO; n];
            mul_into(field, &mut next, &gpow, 1, g);
            gpow = next;
        }
        let sub: Vec<FieldElement> = h.iter().skip(r).step_by(p).copied().collect();
        if sub.iter().all(|c| c.is_zero()) {
            continue;
        }
        let sub_n = (n - r).div_ceil(p);
        let y = gamma_nonneg(field, p, &sub, sub_n, g);
        mul_into(field, &mut out, &y, p, &gpow);
    }
    out
}
