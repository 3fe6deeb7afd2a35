//! Rank-one Wach modules `N_{C̃c⃗} = A⁺_{K,F} e` with
//! `φ(e) = (C̃q^{c_0}, q^{c_1}, …, q^{c_{f−1}})e` and `γ(e) = (g_0, …, g_{f−1})e`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{internal, invalid, precision, Result};
use crate::field::FieldElement;
use crate::rankone::{kappa_gamma_for, kappa_phi_for, twisted_digit_sum, RankOneModule};
use crate::series::LaurentSeries;
use crate::tate::{GammaElement, TateElement, TateRing};

use super::witt::{gamma_pi, q_series, PadicSeries, WittElement, WittRing};

/// Safety cap on the number of factors in the product defining `Λ_γ`.
const MAX_LAMBDA_FACTORS: usize = 256;

/// `Λ_γ` together with the number of factors of the product that were used.
#[derive(Clone, Debug)]
pub struct LambdaGamma {
    /// `Λ_γ ∈ 1 + πZ_p[[π]]` modulo `(p^N, π^M)`.
    pub series: PadicSeries,
    /// Index of the first factor `φ^{jf}(q/γ(q))` that is `1` at working precision.
    pub cut: usize,
}

/// Shared precision and caches for integral computations over one coefficient ring.
pub struct WachContext {
    ring: WittRing,
    f: usize,
    order: i64,
    lambdas: Mutex<HashMap<u64, Arc<LambdaGamma>>>,
    ratios: Mutex<HashMap<u64, Arc<PadicSeries>>>,
}

impl WachContext {
    /// Context for `K` of degree `f` over `Q_p`, coefficients in `ring`, `π`-order `order`.
    pub fn new(ring: &WittRing, f: usize, order: i64) -> Result<Self> {
        if f == 0 || ring.field().m() % f != 0 {
            return Err(invalid("f must divide m"));
        }
        if order < 2 {
            return Err(invalid("π-order must be at least 2"));
        }
        Ok(Self {
            ring: ring.clone(),
            f,
            order,
            lambdas: Mutex::default(),
            ratios: Mutex::default(),
        })
    }

    /// The coefficient ring.
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    /// Number of embeddings.
    pub fn f(&self) -> usize {
        self.f
    }

    /// Working `π`-order.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// `q = φ(π)/π`.
    pub fn q(&self) -> PadicSeries {
        q_series(&self.ring, self.order)
    }

    /// `γ(π)` at working order.
    pub fn gamma_pi(&self, g: &GammaElement) -> Result<PadicSeries> {
        gamma_pi(&self.ring, &g.chi(), self.order)
    }

    /// `γ(x)` for a power series `x`.
    pub fn gamma_act(&self, g: &GammaElement, x: &PadicSeries) -> Result<PadicSeries> {
        x.compose(&self.gamma_pi(g)?)
    }

    /// `q/γ(q) = u/φ(u)` with `u = γ(π)/π`, a unit of `Z_p[[π]]` congruent to `1` mod `π`.
    pub fn q_ratio(&self, g: &GammaElement) -> Result<Arc<PadicSeries>> {
        let key = g.chi().value();
        if let Some(r) = self.ratios.lock().expect("cache lock").get(&key) {
            return Ok(r.clone());
        }
        let u = gamma_pi(&self.ring, &g.chi(), self.order + 1)?.div_pi_pow(1)?;
        let r = Arc::new(u.mul(&u.phi()?.inv()?));
        self.ratios.lock().expect("cache lock").insert(key, r.clone());
        Ok(r)
    }

    /// `Λ_γ = ∏_{j≥0} q_{1+jf}/γ(q_{1+jf}) = ∏_{j≥0} φ^{jf}(q/γ(q))`.
    ///
    /// Factors are multiplied in until one is `1` modulo `(p^N, π^M)`; every
    /// later factor is then `1` as well, since `φ^k(π) → 0` in that topology.
    pub fn big_lambda_gamma(&self, g: &GammaElement) -> Result<Arc<LambdaGamma>> {
        let key = g.chi().value();
        if let Some(l) = self.lambdas.lock().expect("cache lock").get(&key) {
            return Ok(l.clone());
        }
        let one = PadicSeries::one(&self.ring, self.order);
        let mut factor = (*self.q_ratio(g)?).clone();
        let mut acc = one.clone();
        let mut cut = None;
        for j in 0..MAX_LAMBDA_FACTORS {
            if factor == one {
                cut = Some(j);
                break;
            }
            acc = acc.mul(&factor);
            factor = factor.phi_pow(self.f)?;
        }
        let cut = cut.ok_or_else(|| precision("product for Λ_γ did not stabilize"))?;
        if !acc.is_one_plus_pi() {
            return Err(internal("Λ_γ is not congruent to 1 mod π"));
        }
        let l = Arc::new(LambdaGamma { series: acc, cut });
        self.lambdas.lock().expect("cache lock").insert(key, l.clone());
        Ok(l)
    }

    /// Builds `N_{C̃c⃗}` with its `Γ`-action at each of `gammas`, checking the
    /// commutation identities `γ(q)^{c_i} g_i = q^{c_i} φ(g_{i+1})`.
    pub fn build_rank1(&self, ctilde: &WittElement, c: &[u32], gammas: &[GammaElement]) -> Result<WachRankOne> {
        if c.len() != self.f {
            return Err(invalid(format!("expected {} exponents, got {}", self.f, c.len())));
        }
        if !self.ring.is_unit(ctilde) {
            return Err(invalid("C̃ must be a unit"));
        }
        let f = self.f;
        let mut gi_cache = Vec::with_capacity(gammas.len());
        for g in gammas {
            let lam = self.big_lambda_gamma(g)?;
            let mut g0 = PadicSeries::one(&self.ring, self.order);
            let mut phik = lam.series.clone();
            for (k, &ck) in c.iter().enumerate() {
                if k > 0 {
                    phik = phik.phi()?;
                }
                if ck > 0 {
                    g0 = g0.mul(&phik.pow(ck as u64));
                }
            }
            let r = self.q_ratio(g)?;
            let mut gs = vec![g0.clone(); f];
            let mut next = g0;
            for i in (1..f).rev() {
                let gi = r.pow(c[i] as u64).mul(&next.phi()?);
                gs[i] = gi.clone();
                next = gi;
            }
            gi_cache.push((*g, gs));
        }
        let n = WachRankOne {
            ring: self.ring.clone(),
            ctilde: ctilde.clone(),
            c: c.to_vec(),
            order: self.order,
            gi_cache,
        };
        for g in gammas {
            n.check_commutation(self, g)?;
        }
        Ok(n)
    }
}

/// The Wach module `N_{C̃c⃗}` at finite precision.
#[derive(Clone, Debug)]
pub struct WachRankOne {
    ring: WittRing,
    /// The unit `C̃` lifting `C`.
    pub ctilde: WittElement,
    /// The exponents `c⃗`.
    pub c: Vec<u32>,
    order: i64,
    /// `γ ↦ (g_0, …, g_{f−1})` for the generators it was built with.
    pub gi_cache: Vec<(GammaElement, Vec<PadicSeries>)>,
}

impl WachRankOne {
    /// The coefficient ring.
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    /// Number of embeddings.
    pub fn f(&self) -> usize {
        self.c.len()
    }

    /// `(C̃q^{c_0}, q^{c_1}, …)`.
    pub fn phi_matrix(&self) -> Vec<PadicSeries> {
        let q = q_series(&self.ring, self.order);
        self.c
            .iter()
            .enumerate()
            .map(|(i, &ci)| {
                let s = q.pow(ci as u64);
                if i == 0 {
                    s.scale(&self.ctilde)
                } else {
                    s
                }
            })
            .collect()
    }

    /// `(g_0, …, g_{f−1})` for a stored `γ`.
    pub fn gamma_matrix(&self, g: &GammaElement) -> Option<&[PadicSeries]> {
        self.gi_cache.iter().find(|(h, _)| h == g).map(|(_, v)| v.as_slice())
    }

    /// Verifies `γ(q)^{c_i} g_i = q^{c_i} φ(g_{i+1})` for every `i` and `g_i ≡ 1 mod π`.
    pub fn check_commutation(&self, ctx: &WachContext, g: &GammaElement) -> Result<()> {
        let gs = self.gamma_matrix(g).ok_or_else(|| invalid("γ not stored"))?;
        let q = ctx.q();
        let gq = ctx.gamma_act(g, &q)?;
        let f = self.f();
        for i in 0..f {
            if !gs[i].is_one_plus_pi() {
                return Err(internal(format!("g_{i} is not congruent to 1 mod π")));
            }
            let ci = self.c[i] as u64;
            let lhs = gq.pow(ci).mul(&gs[i]);
            let rhs = q.pow(ci).mul(&gs[(i + 1) % f].phi()?);
            if !lhs.agrees_with(&rhs, self.order) {
                return Err(internal(format!("commutation fails in component {i} for {g:?}")));
            }
        }
        Ok(())
    }
}

/// Result of reducing `N_{C̃c⃗}` modulo `p`.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    /// `C = C̃ mod p`.
    #[serde(skip)]
    pub c_const: FieldElement,
    /// `C` in the polynomial basis of `F`.
    pub c_const_coeffs: Vec<u32>,
    /// The exponents `c⃗`.
    pub digits: Vec<u32>,
    /// Digits of the normal form `M_{Cc⃗′}` the reduction is matched with.
    pub normal_form: Vec<u32>,
    /// The change of basis `e′ = w·ē`, as exponents of `π` per component.
    pub witness_exponents: Vec<i64>,
    /// `q ≡ π^{p−1} mod p`.
    pub q_reduces: bool,
    /// Reduced `φ`-matrix equals `κ_φ(C, c⃗)`.
    pub phi_match: bool,
    /// Reduced `Γ`-matrices equal `κ_γ(C, c⃗)` at each stored generator.
    pub gamma_match: Vec<bool>,
    /// The transported structure equals that of the normal form.
    pub transport_match: bool,
    /// `π`-order to which equalities were checked.
    pub checked_order: i64,
    /// Overall verdict.
    pub matched: bool,
}

/// Reduces `N` modulo `p` and compares it with `M_{Cc⃗}` on the mod-`p` side.
///
/// The reduced matrices are compared with `κ_φ(C, c⃗)` and `κ_γ(C, c⃗)`
/// directly; the module is then transported to its normal form (a change of
/// basis by `π^{1−p}` when every `c_i = p − 1`).
pub fn reduce_mod_p(n: &WachRankOne, tate: &TateRing) -> Result<ReductionReport> {
    let field = tate.field();
    if field != n.ring().field() {
        return Err(invalid(
            "the Witt ring and the mod-p ring use different coefficient fields",
        ));
    }
    let p = field.p();
    let f = n.f();
    if f != tate.f() {
        return Err(invalid("embedding counts differ"));
    }
    let order = n.order;
    let ring = n.ring();
    let qbar = q_series(ring, order).reduce_mod_p()?;
    let q_reduces = qbar == LaurentSeries::monomial(field, field.one(), p as i64 - 1, order);
    let c_const = ring.reduce(&n.ctilde);
    let exps: Vec<i64> = n.c.iter().map(|&ci| (p as i64 - 1) * ci as i64).collect();
    let pbar = TateElement::new(
        n.phi_matrix()
            .iter()
            .map(|s| s.reduce_mod_p())
            .collect::<Result<Vec<_>>>()?,
    );
    let kphi = kappa_phi_for(field, c_const, &exps, order);
    let phi_match = pbar.agrees_with(&kphi, order);
    let digits: Vec<i64> = n.c.iter().map(|&x| x as i64).collect();
    let sigmas: Vec<i64> = (0..f).map(|l| twisted_digit_sum(&digits, p, l)).collect();
    let all_top = n.c.iter().all(|&x| x == p - 1);
    let normal: Vec<u32> = if all_top { vec![0; f] } else { n.c.clone() };
    let target = RankOneModule::new(field, c_const, &normal)?;
    let shift = if all_top { 1 - p as i64 } else { 0 };
    let w = TateElement::new(
        (0..f)
            .map(|_| LaurentSeries::monomial(field, field.one(), shift, order))
            .collect(),
    );
    let w_inv = TateElement::new(
        (0..f)
            .map(|_| LaurentSeries::monomial(field, field.one(), -shift, order))
            .collect(),
    );
    let phi_t = pbar.mul(&tate.phi_act(&w)).mul(&w_inv);
    let top = order - (p as i64) * shift.abs() - (p as i64 - 1) * (p as i64 - 1);
    let mut transport_match = phi_t.agrees_with(&target.kappa_phi(order), top);
    let mut gamma_match = Vec::new();
    for (g, gs) in &n.gi_cache {
        let gbar = TateElement::new(gs.iter().map(|s| s.reduce_mod_p()).collect::<Result<Vec<_>>>()?);
        let kg = kappa_gamma_for(tate, g, &sigmas, order)?;
        gamma_match.push(gbar.agrees_with(&kg, order));
        let gt = gbar.mul(&tate.gamma_act(g, &w)?).mul(&w_inv);
        transport_match &= gt.agrees_with(&target.kappa_gamma(tate, g, order)?, top);
    }
    let matched = q_reduces && phi_match && transport_match && gamma_match.iter().all(|&b| b);
    Ok(ReductionReport {
        c_const,
        c_const_coeffs: field.coeffs(c_const),
        digits: n.c.clone(),
        normal_form: normal,
        witness_exponents: vec![shift; f],
        q_reduces,
        phi_match,
        gamma_match,
        transport_match,
        checked_order: top.min(order),
        matched,
    })
}
