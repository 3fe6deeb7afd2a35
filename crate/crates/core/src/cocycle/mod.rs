//! Cocycles `(μ_φ, (μ_γ))` describing extensions of the trivial module by a
//! rank-one module, together with coboundaries and the cocycle identities.
//!
//! A pair defines an extension when, for every `γ`,
//! `(κ_φ φ − 1)(μ_γ) = (κ_γ γ − 1)(μ_φ)` and
//! `μ_{γγ′} = κ_γ γ(μ_{γ′}) + μ_γ`. Only the values at the generators returned by
//! [`TateRing::generators`] are stored; other values follow from the second rule.

mod build;
mod system;

pub use build::{
    basis, build_bcyc, build_bi, build_bi_prime, build_btr, build_trivial_basis, h_series, Basis, BiPrime, HSeries,
    PivotReport, TermGroup, TrData,
};
pub use system::{
    coboundary_witness, random_cocycle, span_decompose, span_decompose_many, tail_solve, CoboundaryStatus,
    DecomposeResult, TailColumn, TailProblem, TailSolution, Witness,
};

use std::fmt;

use crate::error::{invalid, Result};
use crate::field::FieldElement;
use crate::rankone::RankOneModule;
use crate::tate::{GammaElement, TateElement, TateRing};

/// A cocycle for `Ext¹(M_0, M)` stored at the generators of `Γ`.
#[derive(Clone)]
pub struct Cocycle {
    /// The module `M`.
    pub module: RankOneModule,
    /// `μ_φ`.
    pub mu_phi: TateElement,
    /// `μ_γ` for each stored generator.
    pub mu_gen: Vec<(GammaElement, TateElement)>,
    /// A short name such as `B_1` or `B_tr`.
    pub label: String,
}

impl fmt::Debug for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cocycle")
            .field("label", &self.label)
            .field("module", &self.module)
            .field("val_mu_phi", &self.mu_phi.val())
            .finish()
    }
}

impl Cocycle {
    /// The stored value at `g`, if `g` is a stored generator.
    pub fn mu(&self, g: &GammaElement) -> Option<&TateElement> {
        self.mu_gen.iter().find(|(h, _)| h == g).map(|(_, m)| m)
    }

    /// The zero cocycle at the ring's generators.
    pub fn zero(ring: &TateRing, module: &RankOneModule) -> Self {
        let z = ring.zero();
        Self {
            module: module.clone(),
            mu_phi: z.clone(),
            mu_gen: ring.generators().into_iter().map(|g| (g, z.clone())).collect(),
            label: "0".into(),
        }
    }

    fn zip(&self, other: &Self, op: impl Fn(&TateElement, &TateElement) -> TateElement) -> Self {
        assert_eq!(
            self.mu_gen.len(),
            other.mu_gen.len(),
            "cocycles stored at different generators"
        );
        Self {
            module: self.module.clone(),
            mu_phi: op(&self.mu_phi, &other.mu_phi),
            mu_gen: self
                .mu_gen
                .iter()
                .zip(&other.mu_gen)
                .map(|((g, a), (h, b))| {
                    assert_eq!(g, h, "generator mismatch");
                    (*g, op(a, b))
                })
                .collect(),
            label: format!("{}+{}", self.label, other.label),
        }
    }

    /// Sum of two cocycles for the same module.
    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    /// Difference of two cocycles for the same module.
    pub fn sub(&self, other: &Self) -> Self {
        let mut c = self.zip(other, |a, b| a - b);
        c.label = format!("{}-{}", self.label, other.label);
        c
    }

    /// Scalar multiple.
    pub fn scale(&self, c: FieldElement) -> Self {
        Self {
            module: self.module.clone(),
            mu_phi: self.mu_phi.scale(c),
            mu_gen: self.mu_gen.iter().map(|(g, m)| (*g, m.scale(c))).collect(),
            label: self.label.clone(),
        }
    }

    /// Every stored series cut at `order`.
    pub fn truncate(&self, order: i64) -> Self {
        Self {
            module: self.module.clone(),
            mu_phi: self.mu_phi.truncate(order),
            mu_gen: self.mu_gen.iter().map(|(g, m)| (*g, m.truncate(order))).collect(),
            label: self.label.clone(),
        }
    }

    /// Lowest exponent appearing in any stored series.
    pub fn floor(&self) -> i64 {
        self.mu_gen
            .iter()
            .map(|(_, m)| m.floor())
            .chain(std::iter::once(self.mu_phi.floor()))
            .min()
            .expect("nonempty")
    }

    /// Lowest order among the stored series.
    pub fn order(&self) -> i64 {
        self.mu_gen
            .iter()
            .map(|(_, m)| m.order())
            .chain(std::iter::once(self.mu_phi.order()))
            .min()
            .expect("nonempty")
    }
}

/// `Σ_k β_k c_k`.
pub fn linear_combination(
    ring: &TateRing,
    module: &RankOneModule,
    coeffs: &[FieldElement],
    cocycles: &[Cocycle],
) -> Cocycle {
    let mut acc = Cocycle::zero(ring, module);
    for (&b, c) in coeffs.iter().zip(cocycles) {
        if !b.is_zero() {
            acc = acc.add(&c.scale(b));
        }
    }
    acc.label = "combination".into();
    acc
}

/// `(κ_φ φ(b) − b, (κ_γ γ(b) − b)_γ)`.
pub fn coboundary(ring: &TateRing, module: &RankOneModule, b: &TateElement) -> Result<Cocycle> {
    if b.f() != ring.f() {
        return Err(invalid("component count mismatch"));
    }
    let order = b.order();
    let kp = module.kappa_phi(order - ring.p() as i64 * b.floor().min(0));
    let mu_phi = (&kp.mul(&ring.phi_act(b)) - b).truncate(order);
    let mut mu_gen = Vec::new();
    for g in ring.generators() {
        let kg = module.kappa_gamma(ring, &g, order - b.floor().min(0))?;
        let gb = ring.gamma_act(&g, b)?;
        mu_gen.push((g, (&kg.mul(&gb) - b).truncate(order)));
    }
    Ok(Cocycle {
        module: module.clone(),
        mu_phi,
        mu_gen,
        label: "coboundary".into(),
    })
}

/// `κ_γ γ(x)` at the given order.
pub fn twisted_gamma(
    ring: &TateRing,
    module: &RankOneModule,
    g: &GammaElement,
    x: &TateElement,
) -> Result<TateElement> {
    let kg = module.kappa_gamma(ring, g, x.order() - x.floor().min(0))?;
    Ok(kg.mul(&ring.gamma_act(g, x)?).truncate(x.order()))
}

/// `μ_{g^k}` from `μ_g` by `μ_{g^{j+1}} = κ_g g(μ_{g^j}) + μ_g`, known below `order`.
pub fn mu_power(ring: &TateRing, c: &Cocycle, g: &GammaElement, k: u64, order: i64) -> Result<TateElement> {
    let base = c.mu(g).ok_or_else(|| invalid("generator not stored"))?.truncate(order);
    let mut acc = base.clone();
    for _ in 1..k {
        acc = &twisted_gamma(ring, &c.module, g, &acc)? + &base;
    }
    Ok(acc)
}

/// `μ_ξ` below `order`: stored for `p = 2`, derived as `μ_{η^{p−1}}` otherwise.
pub fn mu_xi(ring: &TateRing, c: &Cocycle, order: i64) -> Result<TateElement> {
    let xi = ring.xi();
    if let Some(m) = c.mu(&xi) {
        return Ok(m.truncate(order));
    }
    mu_power(ring, c, &ring.eta(), ring.p() as u64 - 1, order)
}

/// Outcome of [`verify_cocycle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    /// Whether every identity held.
    pub pass: bool,
    /// Exclusive exponent bound up to which identities were compared.
    pub checked_order: i64,
    /// Human-readable descriptions of violated identities.
    pub failures: Vec<String>,
}

fn first_difference(a: &TateElement, b: &TateElement, order: i64) -> Option<(usize, i64)> {
    let d = &a.truncate(order) - &b.truncate(order);
    d.comps()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.val().map(|v| (i, v)))
        .min_by_key(|x| x.1)
}

/// Checks `(κ_φ φ − 1)(μ_γ) = (κ_γ γ − 1)(μ_φ)` at each stored generator and at
/// `ξ`, and the group relations among stored generators, below `order`.
pub fn verify_cocycle(ring: &TateRing, c: &Cocycle, order: i64) -> Result<CocycleReport> {
    let module = &c.module;
    let mut failures = Vec::new();
    let order = order.min(c.order());
    let mut checks: Vec<(String, GammaElement, TateElement)> = c
        .mu_gen
        .iter()
        .map(|(g, m)| (format!("{g:?}"), *g, m.clone()))
        .collect();
    if c.mu(&ring.xi()).is_none() {
        checks.push(("ξ (derived)".into(), ring.xi(), mu_xi(ring, c, order)?));
    }
    for (name, g, mu_g) in &checks {
        let kp = module.kappa_phi(order - ring.p() as i64 * mu_g.floor().min(0));
        let lhs = &kp.mul(&ring.phi_act(mu_g)) - mu_g;
        let rhs = &twisted_gamma(ring, module, g, &c.mu_phi.truncate(order))? - &c.mu_phi;
        if let Some((i, v)) = first_difference(&lhs, &rhs, order) {
            failures.push(format!(
                "φ/γ compatibility at {name} fails in component {i} at exponent {v}"
            ));
        }
    }
    if ring.p() == 2 {
        let (eta, xi) = (ring.eta(), ring.xi());
        if let (Some(me), Some(mx)) = (c.mu(&eta), c.mu(&xi)) {
            let me = me.truncate(order);
            let mx = mx.truncate(order);
            let ex = &twisted_gamma(ring, module, &eta, &mx)? + &me;
            let xe = &twisted_gamma(ring, module, &xi, &me)? + &mx;
            if let Some((i, v)) = first_difference(&ex, &xe, order) {
                failures.push(format!("μ_ηξ ≠ μ_ξη in component {i} at exponent {v}"));
            }
            if eta.pow(2).chi().value() == 1 {
                let sq = &twisted_gamma(ring, module, &eta, &me)? + &me;
                if let Some((i, v)) = first_difference(&sq, &ring.zero().truncate(order), order) {
                    failures.push(format!("μ_η² ≠ 0 in component {i} at exponent {v}"));
                }
            }
        }
    }
    Ok(CocycleReport {
        pass: failures.is_empty(),
        checked_order: order,
        failures,
    })
}
