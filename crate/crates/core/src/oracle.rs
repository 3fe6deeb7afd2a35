//! Brute-force verifiers for the series lemmas behind the cocycle constructions.
//!
//! Every left-hand side is computed from `(1+π)^χ`, root extraction and ring
//! operations only: `λ_γ` is recomputed here as the `(p^f−1)/(p−1)`-th root of
//! `γ(π)/(χ̄(γ)π)` and `γ` acts on Laurent polynomials through
//! `γ(π)^k = (χ̄π u)^k`. Residual classes `π^{lo}F[[π^{p^v}]]·π^{s}` are checked as a
//! valuation floor together with a support congruence on the computed window.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycle::h_series;
use crate::error::{invalid, Error, Result};
use crate::field::{Field, FieldElement};
use crate::rankone::{twisted_digit_sum, RankOneModule};
use crate::series::{nth_root_unit, one_plus_pi_pow, LaurentSeries, PadicInteger};
use crate::tate::{default_chi_eta, Precision, TateRing};

/// The series statements that can be verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    /// `(λ_η^Σ η − 1)(π^s)` up to `π^{s+2p^v}F[[π^{p^v}]]`.
    Delta,
    /// `λ_γ ≡ 1 + zπ^{p^n−1} + zπ^{p^n} mod π^{2p^n−2}` for `γ ∈ Γ_n`.
    GammaN,
    /// `(λ_ξ^Σ ξ − 1)(π^s)` up to `π^{s+2p^v(p−1)}F[[π^{p^v}]]`.
    Gamma,
    /// `χ̄(η)η(π^s) − π^s` and `χ̄(ξ)ξ(π^s) − π^s` for `v = v_p(s)`, over `K = Q_p`.
    Cyc,
    /// `λ_η ≡ 1 + π mod π^{2^f}` and `λ_γ ≡ 1 mod π³` on `Γ_2`, for `p = 2`.
    P2Lambda,
    /// Integrality of `(λ_γ^{Σ_i}γ − 1)(π^{1−2^{r+2}} + π^{1+2^r−2^{r+2}})` for `p = 2`.
    P2H,
    /// `c_i = p−1` with `c_{i+1} ≠ p−2`: integrality of `H` and nonzero pivots.
    Trick,
    /// `c_i = p−1` followed by `r ≥ 1` digits `p−2`: integrality and nonzero pivots.
    TrickPlus,
}

impl Lemma {
    /// All lemmas, in sweep order.
    pub const ALL: [Lemma; 8] = [
        Lemma::Delta,
        Lemma::GammaN,
        Lemma::Gamma,
        Lemma::Cyc,
        Lemma::P2Lambda,
        Lemma::P2H,
        Lemma::Trick,
        Lemma::TrickPlus,
    ];

    /// The name accepted by [`FromStr`].
    pub fn name(self) -> &'static str {
        match self {
            Lemma::Delta => "delta",
            Lemma::GammaN => "gamma_n",
            Lemma::Gamma => "gamma",
            Lemma::Cyc => "cyc",
            Lemma::P2Lambda => "p2lambda",
            Lemma::P2H => "p2H",
            Lemma::Trick => "trick",
            Lemma::TrickPlus => "trick_plus",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| invalid(format!("unknown lemma {s:?}")))
    }
}

/// Parameters of one verification. Unused fields are ignored by a lemma;
/// missing required fields are a precondition error.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaParams {
    /// The prime.
    pub p: u32,
    /// Residue degree of `K`.
    pub f: usize,
    /// Exponent `Σ` of `λ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i64>,
    /// Exponent `s` of `π^s`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    /// Level `n` with `γ ∈ Γ_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// `z` with `χ(γ) ≡ 1 + zp^n mod p^{n+1}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<u32>,
    /// `χ(η)` override, or `χ(γ)` for the lemmas about a single `γ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    /// Digit vector `c⃗`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<u32>>,
    /// Coordinates of `C ∈ F_{p^f}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_const: Option<Vec<i64>>,
    /// Component index `i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    /// Multiplier for every `π`-adic window (default 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<u32>,
}

impl LemmaParams {
    fn scale(&self) -> i64 {
        self.scale.unwrap_or(1).max(1) as i64
    }
}

/// Outcome of one verification.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    /// Which statement.
    pub lemma: Lemma,
    /// The parameters used.
    pub params: LemmaParams,
    /// Whether every assertion held on the window.
    pub pass: bool,
    /// The individual assertions.
    pub checks: Vec<Check>,
    /// `π`-order up to which the left side was computed.
    pub window: i64,
}

/// One assertion inside a [`LemmaReport`].
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    /// What was asserted.
    pub what: String,
    /// Whether it held.
    pub holds: bool,
}

/// Aggregate of a [`sweep`].
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    /// Which statement.
    pub lemma: Lemma,
    /// Number of parameter points run.
    pub cases: usize,
    /// Number of points with a failed assertion.
    pub failures: usize,
    /// The failing points.
    pub failed: Vec<LemmaReport>,
}

fn need<T: Copy>(v: Option<T>, name: &str, lemma: Lemma) -> Result<T> {
    v.ok_or_else(|| invalid(format!("{lemma} needs parameter {name}")))
}

fn p_adic_valuation(n: i64, p: i64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    let mut n = n;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Digit `s_v` of the `p`-adic expansion of `n`, where `p^v ‖ n`.
fn digit_at(n: i64, p: i64, v: u32) -> i64 {
    (n / p.pow(v)).rem_euclid(p)
}

/// Independent model of `γ` and `λ_γ` on `F((π))` for one value of `χ(γ)`.
struct GammaModel {
    field: Field,
    chi_bar: FieldElement,
    /// `γ(π)/(χ̄π)`.
    u: LaurentSeries,
    /// `λ_γ`.
    lambda: LaurentSeries,
}

impl GammaModel {
    fn new(field: &Field, f: usize, chi: &PadicInteger, order: i64) -> Result<Self> {
        let p = field.p() as u64;
        let chi_bar = field.from_int((chi.value() % p) as i64);
        let chi_inv = field.inv(chi_bar).ok_or_else(|| invalid("χ(γ) must be a unit"))?;
        let one = LaurentSeries::one(field, order + 1);
        let gpi = &one_plus_pi_pow(field, chi, order + 1)? - &one;
        let u = gpi.shift(-1).truncate(order).scale(chi_inv);
        let d = (p.pow(f as u32) - 1) / (p - 1);
        let lambda = nth_root_unit(&u, d)?;
        Ok(Self {
            field: field.clone(),
            chi_bar,
            u,
            lambda,
        })
    }

    /// `(λ^Σ γ − 1)(H)` for a Laurent polynomial `H`, known below `floor(H) + order(u)`.
    fn act(&self, sigma: i64, h: &LaurentSeries) -> Result<LaurentSeries> {
        let w = self.u.order();
        let lo = h.val().unwrap_or(0).min(0);
        let top = lo + w;
        let lam = self.lambda.pow(sigma)?;
        let mut acc = LaurentSeries::zero(&self.field, top);
        for (k, c) in h.terms() {
            let coeff = self.field.mul(c, self.field.pow(self.chi_bar, k).expect("unit"));
            let term = LaurentSeries::monomial(&self.field, coeff, k, k + w).mul_series(&self.u.pow(k)?);
            acc = &acc + &term.truncate(top);
        }
        let out = &acc.mul_series(&lam).truncate(top) - &h.truncate(top);
        Ok(out.truncate(top))
    }
}

fn padic(p: u32, v: i64) -> PadicInteger {
    PadicInteger::from_int(p as u64, v as i128)
}

fn chi_eta(params: &LemmaParams) -> PadicInteger {
    padic(params.p, params.chi.unwrap_or(default_chi_eta(params.p) as i64))
}

fn check(what: impl Into<String>, holds: bool) -> Check {
    Check {
        what: what.into(),
        holds,
    }
}

/// Runs one verification.
pub fn verify_lemma(lemma: Lemma, params: &LemmaParams) -> Result<LemmaReport> {
    let p = params.p;
    let p2_only = matches!(lemma, Lemma::P2Lambda | Lemma::P2H);
    if p2_only && p != 2 {
        return Err(invalid(format!("{lemma} is a statement for p = 2")));
    }
    if !p2_only && p < 3 {
        return Err(invalid(format!("{lemma} needs an odd prime p, got {p}")));
    }
    Field::prime(p)?;
    if params.f == 0 {
        return Err(invalid("f must be positive"));
    }
    let (checks, window) = match lemma {
        Lemma::Delta => delta(params)?,
        Lemma::GammaN => gamma_n(params)?,
        Lemma::Gamma => gamma(params)?,
        Lemma::Cyc => cyc(params)?,
        Lemma::P2Lambda => p2_lambda(params)?,
        Lemma::P2H => p2_h(params)?,
        Lemma::Trick | Lemma::TrickPlus => trick(lemma, params)?,
    };
    let pass = checks.iter().all(|c| c.holds);
    Ok(LemmaReport {
        lemma,
        params: params.clone(),
        pass,
        checks,
        window,
    })
}

/// `v` and `s_v` for `n = Σ + s(p^f−1)/(p−1)`.
fn sigma_digit(params: &LemmaParams, lemma: Lemma) -> Result<(i64, i64, u32, i64)> {
    let p = params.p as i64;
    let sigma = need(params.sigma, "sigma", lemma)?;
    let s = need(params.s, "s", lemma)?;
    let n = sigma + s * (p.pow(params.f as u32) - 1) / (p - 1);
    let v = p_adic_valuation(n, p).ok_or_else(|| invalid("v = v_p(Σ + s(p^f−1)/(p−1)) is infinite"))?;
    Ok((sigma, s, v, digit_at(n, p, v)))
}

fn residual_check(r: &LaurentSeries, lo: i64, residue: i64, modulus: i64) -> Check {
    check(
        format!("residual in π^{lo}·F[[π^{modulus}]] shifted to ≡ {residue} mod {modulus}"),
        r.in_residual_class(lo, residue, modulus),
    )
}

fn delta(params: &LemmaParams) -> Result<(Vec<Check>, i64)> {
    let (sigma, s, v, sv) = sigma_digit(params, Lemma::Delta)?;
    let field = Field::prime(params.p)?;
    let pv = (params.p as i64).pow(v);
    let w = (4 * pv * params.p as i64 + 8) * params.scale();
    let model = GammaModel::new(&field, params.f, &chi_eta(params), w)?;
    let lhs = model.act(sigma, &LaurentSeries::monomial(&field, field.one(), s, s + 1))?;
    let chi = model.chi_bar;
    let chis = field.pow(chi, s).expect("unit");
    let half = field.inv(field.from_int(2)).expect("p odd");
    let lead = field.sub(chis, field.one());
    let second = field.mul(
        field.from_int(sv),
        field.mul(chis, field.mul(field.sub(chi, field.one()), half)),
    );
    let expected = LaurentSeries::from_terms(&field, &[(s, lead), (s + pv, second)], lhs.order());
    let r = &lhs - &expected;
    Ok((
        vec![
            check("leading coefficient is χ̄(η)^s − 1", lhs.coeff(s) == lead),
            residual_check(&r, s + 2 * pv, s, pv),
        ],
        lhs.order(),
    ))
}

fn gamma_n(params: &LemmaParams) -> Result<(Vec<Check>, i64)> {
    let p = params.p as i64;
    let n = need(params.n, "n", Lemma::GammaN)?;
    if n == 0 {
        return Err(invalid("gamma_n needs n ≥ 1"));
    }
    let pn = p.pow(n);
    let (chi, z) = match (params.chi, params.z) {
        (Some(chi), _) => {
            let r = chi.rem_euclid(pn * p);
            if (r - 1) % pn != 0 {
                return Err(invalid(format!("χ(γ) = {chi} is not in Γ_{n}")));
            }
            (chi, ((r - 1) / pn) as u32)
        }
        (None, Some(z)) => (1 + z as i64 * pn, z),
        (None, None) => return Err(invalid("gamma_n needs chi or z")),
    };
    let field = Field::prime(params.p)?;
    let top = 2 * pn - 2;
    let w = (top + p) * params.scale();
    let model = GammaModel::new(&field, params.f, &padic(params.p, chi), w)?;
    let zf = field.from_int(z as i64);
    let expected = LaurentSeries::from_terms(
        &field,
        &[(0, field.one()), (pn - 1, zf), (pn, zf)],
        model.lambda.order(),
    );
    let r = &model.lambda - &expected;
    Ok((vec![residual_check(&r, top, 0, 1)], model.lambda.order()))
}

/// `χ(ξ) = χ(η)^{p−1}` and its `z`.
fn xi_of(params: &LemmaParams) -> Result<(PadicInteger, i64)> {
    let p = params.p as i64;
    let xi = chi_eta(params).pow(p as u64 - 1);
    let z = ((xi.value() as i64).rem_euclid(p * p) - 1) / p;
    if z == 0 {
        return Err(invalid("χ(η) does not generate Γ topologically: χ(ξ) ≡ 1 mod p²"));
    }
    Ok((xi, z))
}

fn gamma(params: &LemmaParams) -> Result<(Vec<Check>, i64)> {
    let (sigma, s, v, sv) = sigma_digit(params, Lemma::Gamma)?;
    let p = params.p as i64;
    let field = Field::prime(params.p)?;
    let (xi, z) = xi_of(params)?;
    let pv = p.pow(v);
    let w = (4 * pv * p + 8) * params.scale();
    let model = GammaModel::new(&field, params.f, &xi, w)?;
    let lhs = model.act(sigma, &LaurentSeries::monomial(&field, field.one(), s, s + 1))?;
    let c = field.from_int(sv * z);
    let expected = LaurentSeries::from_terms(&field, &[(s + (p - 1) * pv, c), (s + p * pv, c)], lhs.order());
    let r = &lhs - &expected;
    Ok((vec![residual_check(&r, s + 2 * pv * (p - 1), s, pv)], lhs.order()))
}

fn cyc(params: &LemmaParams) -> Result<(Vec<Check>, i64)> {
    let p = params.p as i64;
    let s = need(params.s, "s", Lemma::Cyc)?;
    let v = p_adic_valuation(s, p).ok_or_else(|| invalid("cyc needs s ≠ 0"))?;
    let sv = digit_at(s, p, v);
    let pv = p.pow(v);
    let field = Field::prime(params.p)?;
    let w = (4 * pv * p * p + 8) * params.scale();
    let eta = GammaModel::new(&field, 1, &chi_eta(params), w)?;
    let (xi, z) = xi_of(params)?;
    let xim = GammaModel::new(&field, 1, &xi, w)?;
    let mono = LaurentSeries::monomial(&field, field.one(), s, s + 1);
    let chi = eta.chi_bar;
    let lhs1 = &eta.act(0, &mono)?.scale(chi) + &mono.scale(field.sub(chi, field.one())).truncate(s + w);
    let chis1 = field.pow(chi, s + 1).expect("unit");
    let half = field.inv(field.from_int(2)).expect("p odd");
    let second = field.mul(
        field.from_int(sv),
        field.mul(chis1, field.mul(field.sub(chi, field.one()), half)),
    );
    let exp1 = LaurentSeries::from_terms(
        &field,
        &[(s, field.sub(chis1, field.one())), (s + pv, second)],
        lhs1.order(),
    );
    let lhs2 = xim.act(0, &mono)?;
    let c = field.from_int(sv * z);
    let exp2 = LaurentSeries::from_terms(&field, &[(s + (p - 1) * pv, c), (s + p * pv, c)], lhs2.order());
    let r1 = &lhs1 - &exp1;
    let r2 = &lhs2 - &exp2;
    Ok((
        vec![
            check(
                "χ̄(η)η(π^s) − π^s: residual in π^{s+2p^v}F[[π^{p^v}]]",
                r1.in_residual_class(s + 2 * pv, s, pv),
            ),
            check(
                "χ̄(ξ)ξ(π^s) − π^s: residual in π^{s+p^{v+1}(p−1)}F[[π^{p^v}]]",
                r2.in_residual_class(s + p * pv * (p - 1), s, pv),
            ),
        ],
        lhs1.order().min(lhs2.order()),
    ))
}

fn p2_lambda(params: &LemmaParams) -> Result<(Vec<Check>, i64)> {
    let f = params.f;
    let field = Field::prime(2)?;
    let top = 1i64 << f;
    let w = (top.max(3) + 4) * params.scale();
    let eta = GammaModel::new(&field, f, &padic(2, -1), w)?;
    let expected = LaurentSeries::from_ints(&field, 0, w, &[1, 1]);
    let mut checks = vec![check(
        "λ_η ≡ 1 + π mod π^{2^f}",
        (&eta.lambda - &expected).in_residual_class(top, 0, 1),
    )];
    let chis: Vec<i64> = match params.chi {
        Some(c) => vec![c],
        None => vec![5, -3, 9, 13, -7, 17, 21],
    };
    for chi in chis {
        if chi.rem_euclid(4) != 1 {
            return Err(invalid(format!("χ(γ) = {chi} is not in Γ_2")));
        }
        let g = GammaModel::new(&field, f, &padic(2, chi), w)?;
        let r = &g.lambda - &LaurentSeries::one(&field, w);
        checks.push(check(
            format!("λ_γ ≡ 1 mod π³ for χ(γ) = {chi}"),
            r.in_residual_class(3, 0, 1),
        ));
    }
    Ok((checks, w))
}

fn p2_h(params: &LemmaParams) -> Result<(Vec<Check>, i64)> {
    let f = params.f;
    let c = params.c.clone().ok_or_else(|| invalid("p2H needs parameter c"))?;
    let i = need(params.i, "i", Lemma::P2H)?;
    if c.len() != f || i >= f || c.iter().any(|&x| x > 1) {
        return Err(invalid("p2H needs c ∈ {0,1}^f and i < f"));
    }
    if c[i] != 1 || c.iter().all(|&x| x == 1) {
        return Err(invalid("p2H needs c_i = 1 and some c_j = 0"));
    }
    let r = (1..f).take_while(|&k| c[(i + k) % f] == 0).count() as u32;
    let digits: Vec<i64> = c.iter().map(|&x| x as i64).collect();
    let sigma = twisted_digit_sum(&digits, 2, i);
    let field = Field::prime(2)?;
    let e1 = 1 - (1i64 << (r + 2));
    let e2 = 1 + (1i64 << r) - (1i64 << (r + 2));
    let h = LaurentSeries::from_terms(&field, &[(e1, field.one()), (e2, field.one())], e2 + 1);
    let w = (-e1 + 8) * params.scale();
    let chis: Vec<i64> = match params.chi {
        Some(c) => vec![c],
        None => vec![-1, 5, -5, 3, 9, -3],
    };
    let mut checks = Vec::new();
    let mut window = i64::MAX;
    for chi in chis {
        let g = GammaModel::new(&field, f, &padic(2, chi), w)?;
        let out = g.act(sigma, &h)?;
        window = window.min(out.order());
        checks.push(check(
            format!("(λ^Σ γ − 1)H integral for χ(γ) = {chi}"),
            out.in_residual_class(0, 0, 1),
        ));
    }
    Ok((checks, window))
}

fn trick(lemma: Lemma, params: &LemmaParams) -> Result<(Vec<Check>, i64)> {
    let p = params.p;
    let f = params.f;
    let c = params
        .c
        .clone()
        .ok_or_else(|| invalid(format!("{lemma} needs parameter c")))?;
    let i = need(params.i, "i", lemma)?;
    if c.len() != f || i >= f {
        return Err(invalid("c must have f digits and i < f"));
    }
    if c[i] != p - 1 {
        return Err(invalid(format!("{lemma} needs c_i = p − 1")));
    }
    let r = (1..f).take_while(|&k| c[(i + k) % f] == p - 2).count();
    match lemma {
        Lemma::Trick if r != 0 => return Err(invalid("trick needs c_{i+1} ≠ p − 2")),
        Lemma::TrickPlus if r == 0 => return Err(invalid("trick_plus needs c_{i+1} = p − 2")),
        _ => {}
    }
    let field = Field::with_degrees(p, f as u32, f as u32)?;
    let cc = match &params.c_const {
        Some(v) => field.from_coeffs(v)?,
        None => field.one(),
    };
    let m = RankOneModule::new(&field, cc, &c)?;
    let chi = params.chi.unwrap_or(default_chi_eta(p) as i64);
    let ring = TateRing::with_chi_eta(
        &field,
        Precision::default_for(p, f).scaled(params.scale() as u32),
        Some(padic(p, chi)),
    )?;
    let hs = h_series(&ring, &m, i)?;
    let sigma = m.sigma(i);
    let lead = hs.h.val().unwrap_or(0);
    let w = (-lead + 2 * p as i64 + 4) * params.scale();
    let eta = GammaModel::new(&field, f, &padic(p, chi), w)?;
    let (xi, _) = xi_of(params)?;
    let xim = GammaModel::new(&field, f, &xi, w)?;
    let h = hs.h.truncate(1);
    let a = eta.act(sigma, &h)?;
    let b = xim.act(sigma, &h)?;
    let mut checks = vec![
        check(
            format!("H starts at π^{{1−p^{}}}", r + 2),
            lead == 1 - (p as i64).pow(r as u32 + 2),
        ),
        check("(λ^Σ η − 1)H ∈ F[[π]]", a.in_residual_class(0, 0, 1)),
        check("(λ^Σ ξ − 1)H ∈ F[[π]]", b.in_residual_class(0, 0, 1)),
    ];
    match &hs.pivots {
        Some(pv) => {
            checks.push(check("ν ≠ 0", !pv.nu.is_zero()));
            checks.push(check("ν′ ≠ 0", !pv.nu_prime.is_zero()));
            checks.push(check("ε^{(r)} ≠ 0", !pv.eps_r.is_zero()));
            checks.push(check("ε_1^{(r+1)} ≠ 0", !pv.eps1_r1.is_zero()));
            checks.push(check("pivot chain length", pv.r == r));
        }
        None => checks.push(check("pivot report present", false)),
    }
    Ok((checks, a.order().min(b.order())))
}

/// All normal-form digit vectors of length `f` with entries `≤ max`.
fn digit_vectors(p: u32, f: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..f {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..=max).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| !v.iter().all(|&d| d == p - 1));
    out
}

/// The default parameter grid of a lemma.
pub fn default_grid(lemma: Lemma) -> Vec<LemmaParams> {
    let base = |p: u32, f: usize| LemmaParams {
        p,
        f,
        ..Default::default()
    };
    let mut grid = Vec::new();
    match lemma {
        Lemma::Delta | Lemma::Gamma => {
            for p in [3u32, 5] {
                for f in [1usize, 2] {
                    let pi = p as i64;
                    let pf1 = pi.pow(f as u32) - 1;
                    for sigma in 0..pf1 {
                        for s in -2 * pi..=-1 {
                            if sigma + s * pf1 / (pi - 1) != 0 {
                                grid.push(LemmaParams {
                                    sigma: Some(sigma),
                                    s: Some(s),
                                    ..base(p, f)
                                });
                            }
                        }
                    }
                }
            }
        }
        Lemma::GammaN => {
            for p in [3u32, 5] {
                for f in [1usize, 2] {
                    for n in [1u32, 2] {
                        for z in 1..p {
                            grid.push(LemmaParams {
                                n: Some(n),
                                z: Some(z),
                                ..base(p, f)
                            });
                        }
                    }
                }
            }
        }
        Lemma::Cyc => {
            for p in [3u32, 5] {
                let pi = p as i64;
                for s in (-2 * pi * pi..=2 * pi * pi).filter(|&s| s != 0) {
                    grid.push(LemmaParams {
                        s: Some(s),
                        ..base(p, 1)
                    });
                }
            }
        }
        Lemma::P2Lambda => {
            for f in [1usize, 2, 3] {
                grid.push(base(2, f));
            }
        }
        Lemma::P2H => {
            for f in [1usize, 2, 3] {
                for c in digit_vectors(2, f, 1) {
                    for i in (0..f).filter(|&i| c[i] == 1) {
                        grid.push(LemmaParams {
                            c: Some(c.clone()),
                            i: Some(i),
                            ..base(2, f)
                        });
                    }
                }
            }
        }
        Lemma::Trick | Lemma::TrickPlus => {
            for p in [3u32, 5] {
                for f in [1usize, 2, 3] {
                    for c in digit_vectors(p, f, p - 1) {
                        for i in (0..f).filter(|&i| c[i] == p - 1) {
                            let r = (1..f).take_while(|&k| c[(i + k) % f] == p - 2).count();
                            if (r == 0) == (lemma == Lemma::Trick) {
                                grid.push(LemmaParams {
                                    c: Some(c.clone()),
                                    i: Some(i),
                                    ..base(p, f)
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    grid
}

/// Runs [`verify_lemma`] over a grid in parallel; the report lists failures
/// in grid order. A precondition error at any point is returned as an error.
pub fn sweep(lemma: Lemma, grid: &[LemmaParams]) -> Result<SweepReport> {
    let reports = grid
        .par_iter()
        .map(|params| verify_lemma(lemma, params))
        .collect::<Result<Vec<_>>>()?;
    let failed: Vec<LemmaReport> = reports.into_iter().filter(|r| !r.pass).collect();
    Ok(SweepReport {
        lemma,
        cases: grid.len(),
        failures: failed.len(),
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_n_example() {
        let params = LemmaParams {
            p: 3,
            f: 1,
            n: Some(1),
            chi: Some(4),
            ..Default::default()
        };
        let rep = verify_lemma(Lemma::GammaN, &params).unwrap();
        assert!(rep.pass, "{rep:?}");
        let field = Field::prime(3).unwrap();
        let model = GammaModel::new(&field, 1, &padic(3, 4), 8).unwrap();
        let diff = &model.lambda - &LaurentSeries::from_ints(&field, 0, 8, &[1, 0, 1, 1]);
        assert!(diff.val().map_or(true, |v| v >= 4));
    }

    #[test]
    fn gamma_example_with_digit_two() {
        let params = LemmaParams {
            p: 3,
            f: 1,
            sigma: Some(1),
            s: Some(-2),
            ..Default::default()
        };
        let rep = verify_lemma(Lemma::Gamma, &params).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn delta_leading_coefficient() {
        let params = LemmaParams {
            p: 5,
            f: 1,
            sigma: Some(1),
            s: Some(-3),
            ..Default::default()
        };
        let rep = verify_lemma(Lemma::Delta, &params).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn lemma_names_round_trip() {
        for l in Lemma::ALL {
            assert_eq!(l.name().parse::<Lemma>().unwrap(), l);
        }
        assert!("gamma-n".parse::<Lemma>().is_err());
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        let params = LemmaParams {
            p: 3,
            f: 1,
            sigma: Some(1),
            s: Some(-1),
            ..Default::default()
        };
        assert!(verify_lemma(Lemma::Delta, &params).is_err());
        assert!(verify_lemma(
            Lemma::P2Lambda,
            &LemmaParams {
                p: 3,
                f: 1,
                ..Default::default()
            }
        )
        .is_err());
    }
}
