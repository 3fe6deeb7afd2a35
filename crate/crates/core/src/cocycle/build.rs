//! Explicit bases of `Ext¹(M_0, M_{Cc⃗})`.
//!
//! The generic basis element `B_i` has `μ_φ = H·e_i`, where the Laurent
//! polynomial `H` is chosen so that `(λ_η^{Σ_i} η − 1)(H)` has no polar part;
//! `μ_η` is then the unique solution in `F[[π]]^S` of the compatibility
//! equation. The trivial and cyclotomic modules receive additional elements.

use crate::cocycle::{coboundary, linear_combination, mu_xi, twisted_gamma, Cocycle};
use crate::error::{internal, invalid, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;
use crate::rankone::RankOneModule;
use crate::series::LaurentSeries;
use crate::tate::{GammaElement, TateElement, TateRing};

/// How `γ` is twisted in `(tγ − 1)`.
#[derive(Clone, Copy, Debug)]
enum Twist {
    /// Multiply by `λ_γ^σ`.
    Lambda(i64),
    /// Multiply by `χ̄(γ)`.
    Chi,
}

/// Coefficients on `[lo, top)` of `(tγ − 1)(π^e)` for each exponent `e`.
fn polar_columns(
    ring: &TateRing,
    g: &GammaElement,
    twist: Twist,
    exps: &[i64],
    lo: i64,
    top: i64,
) -> Result<Vec<Vec<FieldElement>>> {
    let field = ring.field();
    let min_e = exps.iter().copied().min().unwrap_or(top).min(top);
    let max_e = exps.iter().copied().max().unwrap_or(top).max(min_e);
    let cols = ring.gamma_columns(g, min_e, max_e + 1, top)?;
    let lam = match twist {
        Twist::Lambda(_) => Some(ring.lambda(g, top - min_e + 1)?),
        Twist::Chi => None,
    };
    let mut out = Vec::with_capacity(exps.len());
    for &e in exps {
        let gc = &cols[(e - min_e) as usize];
        let tw = match twist {
            Twist::Lambda(sigma) => {
                let l = lam.as_ref().expect("lambda computed").truncate(top - e);
                gc.mul_series(&l.pow(sigma)?)
            }
            Twist::Chi => gc.scale(ring.chi_bar(g)),
        };
        let y = &tw - &LaurentSeries::monomial(field, field.one(), e, top);
        out.push(y.coeff_range(lo, top));
    }
    Ok(out)
}

/// `(tγ − 1)(h)` at the order of `h`.
fn twisted_minus_one(ring: &TateRing, g: &GammaElement, twist: Twist, h: &LaurentSeries) -> Result<LaurentSeries> {
    let gh = ring.gamma_series(g, h)?;
    let tw = match twist {
        Twist::Lambda(sigma) => {
            let lam = ring.lambda(g, h.order() - h.floor().min(0) + 1)?;
            gh.mul_series(&lam.pow(sigma)?)
        }
        Twist::Chi => gh.scale(ring.chi_bar(g)),
    };
    Ok((&tw - h).truncate(h.order()))
}

/// A block of exponents in the polar part of `H`, with the number of
/// components it must be transported to become part of a normalized cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermGroup {
    /// `lead`, `h` or `h'`.
    pub kind: &'static str,
    /// Block index `j`.
    pub j: usize,
    /// Transport distance.
    pub level: usize,
    /// Exponents carried by the block.
    pub exponents: Vec<i64>,
}

/// Nonvanishing quantities certifying the construction when `c_i = p − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotReport {
    /// Number of consecutive following digits equal to `p − 2`.
    pub r: usize,
    /// Coefficient at `1 − p^{r+1}` produced by the lead block.
    pub nu: FieldElement,
    /// Coefficient at `1 − p^{r+1}` produced by the normalized `h′^{(r)}` block.
    pub nu_prime: FieldElement,
    /// `−ν/ν′`, the coefficient of `π^{1+p^r−2p^{r+1}}` in `H`.
    pub eps_r: FieldElement,
    /// Coefficient of `π^{1−p^{r+2}+p^{r+1}}` in `H`.
    pub eps1_r1: FieldElement,
}

/// The Laurent polynomial `H` behind `B_i`.
#[derive(Clone, Debug)]
pub struct HSeries {
    /// `H` at working order.
    pub h: LaurentSeries,
    /// Exponent of the leading term.
    pub lead: i64,
    /// Exponent blocks, for transport.
    pub groups: Vec<TermGroup>,
    /// Certificates for the `c_i = p − 1` construction.
    pub pivots: Option<PivotReport>,
}

fn chain_length(m: &RankOneModule, i: usize) -> usize {
    let p = m.p();
    let f = m.f();
    (1..f).take_while(|&k| m.digits()[(i + k) % f] == p - 2).count()
}

/// Builds `H` for component `i`.
pub fn h_series(ring: &TateRing, m: &RankOneModule, i: usize) -> Result<HSeries> {
    let p = m.p();
    let order = ring.order();
    let field = ring.field();
    let ci = m.digits()[i];
    if p == 2 {
        let (terms, lead, groups) = if ci == 0 {
            (
                vec![-1],
                -1,
                vec![TermGroup {
                    kind: "lead",
                    j: 0,
                    level: 0,
                    exponents: vec![-1],
                }],
            )
        } else {
            let r = chain_length(m, i) as u32;
            let lead = 1 - 2i64.pow(r + 2);
            let second = 1 + 2i64.pow(r) - 2i64.pow(r + 2);
            (
                vec![lead, second],
                lead,
                vec![
                    TermGroup {
                        kind: "lead",
                        j: r as usize + 1,
                        level: r as usize + 1,
                        exponents: vec![lead],
                    },
                    TermGroup {
                        kind: "h'",
                        j: r as usize,
                        level: r as usize,
                        exponents: vec![second],
                    },
                ],
            )
        };
        let h = LaurentSeries::from_terms(
            field,
            &terms.iter().map(|&e| (e, field.one())).collect::<Vec<_>>(),
            order,
        );
        return Ok(HSeries {
            h,
            lead,
            groups,
            pivots: None,
        });
    }
    let sigma = m.sigma(i);
    let eta = ring.eta();
    if ci < p - 1 {
        return greedy_h(ring, &eta, sigma);
    }
    trick_h(ring, m, i, sigma)
}

/// `H = π^{1−p} + Σ_{e=2−p}^{−1} ε_e π^e` by successive elimination.
fn greedy_h(ring: &TateRing, eta: &GammaElement, sigma: i64) -> Result<HSeries> {
    let p = ring.p() as i64;
    let field = ring.field();
    let lo = 1 - p;
    let exps: Vec<i64> = (lo..0).collect();
    let cols = polar_columns(ring, eta, Twist::Lambda(sigma), &exps, lo, 0)?;
    let mut x = cols[0].clone();
    let mut coeffs = vec![(lo, field.one())];
    let chi = ring.chi_bar(eta);
    for e in (lo + 1)..0 {
        let idx = (e - lo) as usize;
        if x[..idx].iter().any(|c| !c.is_zero()) {
            return Err(internal(format!("elimination did not clear exponents below {e}")));
        }
        let denom = field.sub(field.pow(chi, e).expect("χ̄ is a unit"), field.one());
        let inv = field
            .inv(denom)
            .ok_or_else(|| internal(format!("elimination stalls at exponent {e}")))?;
        let eps = field.neg(field.mul(x[idx], inv));
        if !eps.is_zero() {
            for (a, &b) in x.iter_mut().zip(&cols[idx]) {
                *a = field.mul_add(*a, eps, b);
            }
            coeffs.push((e, eps));
        }
    }
    if x.iter().any(|c| !c.is_zero()) {
        return Err(internal("elimination left a polar part"));
    }
    let h = LaurentSeries::from_terms(field, &coeffs, ring.order());
    let groups = vec![
        TermGroup {
            kind: "lead",
            j: 0,
            level: 0,
            exponents: vec![lo],
        },
        TermGroup {
            kind: "h",
            j: 0,
            level: 0,
            exponents: ((lo + 1)..0).collect(),
        },
    ];
    Ok(HSeries {
        h,
        lead: lo,
        groups,
        pivots: None,
    })
}

fn solve_polar(
    field: &Field,
    cols: &[Vec<FieldElement>],
    target: &[FieldElement],
    rows: std::ops::Range<usize>,
) -> Result<(Vec<FieldElement>, bool)> {
    let n = cols.len();
    let mut a = Matrix::new(n);
    let mut b = Vec::new();
    for t in rows {
        a.push_row(cols.iter().map(|c| c[t]).collect());
        b.push(field.neg(target[t]));
    }
    let unique = a.rank(field) == n;
    let x = a
        .solve(field, &b)
        .ok_or_else(|| internal("polar elimination system is inconsistent"))?;
    Ok((x, unique))
}

fn dot_col(
    field: &Field,
    base: &[FieldElement],
    cols: &[Vec<FieldElement>],
    x: &[FieldElement],
    t: usize,
) -> FieldElement {
    cols.iter()
        .zip(x)
        .fold(base[t], |acc, (c, &xi)| field.mul_add(acc, xi, c[t]))
}

/// `H` for `c_i = p − 1`, with the exponent blocks below the lead term.
fn trick_h(ring: &TateRing, m: &RankOneModule, i: usize, sigma: i64) -> Result<HSeries> {
    let p = m.p() as i64;
    let field = ring.field();
    let eta = ring.eta();
    let r = chain_length(m, i);
    let pw = |k: usize| p.pow(k as u32);
    let lead = 1 - pw(r + 2);
    let mut groups = vec![TermGroup {
        kind: "lead",
        j: r + 1,
        level: r + 1,
        exponents: vec![lead],
    }];
    for j in (0..=r + 1).rev() {
        groups.push(TermGroup {
            kind: "h",
            j,
            level: j,
            exponents: (1..=p - 2).map(|s| 1 - pw(j + 1) + s * pw(j)).collect(),
        });
        if j <= r {
            groups.push(TermGroup {
                kind: "h'",
                j,
                level: j,
                exponents: (0..=p - 2).map(|s| 1 + pw(j) - 2 * pw(j + 1) + s * pw(j)).collect(),
            });
        }
    }
    groups.sort_by_key(|g| g.exponents.first().copied().unwrap_or(lead));
    let unknowns: Vec<i64> = groups
        .iter()
        .filter(|g| g.kind != "lead")
        .flat_map(|g| g.exponents.clone())
        .collect();
    for w in unknowns.windows(2) {
        if w[0] >= w[1] {
            return Err(internal("exponent blocks overlap"));
        }
    }
    let twist = Twist::Lambda(sigma);
    let mut all = vec![lead];
    all.extend(&unknowns);
    let cols = polar_columns(ring, &eta, twist, &all, lead, 0)?;
    let n_rows = (-lead) as usize;
    let (x, unique) = solve_polar(field, &cols[1..], &cols[0], 0..n_rows)?;
    if !unique {
        return Err(internal("polar elimination for c_i = p−1 is not unique"));
    }
    let mut terms = vec![(lead, field.one())];
    terms.extend(unknowns.iter().zip(&x).map(|(&e, &c)| (e, c)));
    let h = LaurentSeries::from_terms(field, &terms, ring.order());
    let coeff_at = |e: i64| {
        unknowns
            .iter()
            .position(|&u| u == e)
            .map(|k| x[k])
            .unwrap_or(FieldElement::ZERO)
    };

    let level_top = 1 - pw(r + 1);
    let hr1: Vec<i64> = (1..=p - 2).map(|s| lead + s * pw(r + 1)).collect();
    let mut sub = vec![lead];
    sub.extend(&hr1);
    let sub_cols = polar_columns(ring, &eta, twist, &sub, lead, level_top + 1)?;
    let rows = 0..(level_top - lead) as usize;
    let (xs, _) = solve_polar(field, &sub_cols[1..], &sub_cols[0], rows)?;
    let nu = dot_col(field, &sub_cols[0], &sub_cols[1..], &xs, (level_top - lead) as usize);

    let base = 1 + pw(r) - 2 * pw(r + 1);
    let hpr: Vec<i64> = (1..=p - 2).map(|s| base + s * pw(r)).collect();
    let mut sub2 = vec![base];
    sub2.extend(&hpr);
    let sub2_cols = polar_columns(ring, &eta, twist, &sub2, base, level_top + 1)?;
    let rows2 = 0..(level_top - base) as usize;
    let (xs2, _) = solve_polar(field, &sub2_cols[1..], &sub2_cols[0], rows2)?;
    let nu_prime = dot_col(field, &sub2_cols[0], &sub2_cols[1..], &xs2, (level_top - base) as usize);

    if nu.is_zero() || nu_prime.is_zero() {
        return Err(internal(format!("vanishing pivot: ν = {nu:?}, ν′ = {nu_prime:?}")));
    }
    let eps_r = field.neg(field.div(nu, nu_prime).expect("ν′ ≠ 0"));
    if eps_r != coeff_at(base) {
        return Err(internal("pivot quotient disagrees with the full elimination"));
    }
    let eps1_r1 = coeff_at(lead + pw(r + 1));
    if eps1_r1.is_zero() {
        return Err(internal("leading coefficient of the h^{(r+1)} block vanishes"));
    }
    Ok(HSeries {
        h,
        lead,
        groups,
        pivots: Some(PivotReport {
            r,
            nu,
            nu_prime,
            eps_r,
            eps1_r1,
        }),
    })
}

fn solve_mu_gamma(ring: &TateRing, m: &RankOneModule, rhs: &TateElement, trivial: bool) -> Result<TateElement> {
    if rhs.floor() < 0 {
        return Err(internal(format!(
            "compatibility right-hand side has polar part at exponent {}",
            rhs.floor()
        )));
    }
    let exps = m.phi_exponents();
    ring.solve_twisted_phi(m.phi_twist(&exps), rhs, trivial)
}

/// The cocycle with the given `μ_φ` whose `μ_γ` are the solutions in `F[[π]]^S`.
fn complete(ring: &TateRing, m: &RankOneModule, mu_phi: TateElement, label: String, trivial: bool) -> Result<Cocycle> {
    let mut mu_gen = Vec::new();
    for g in ring.generators() {
        let rhs = &twisted_gamma(ring, m, &g, &mu_phi)? - &mu_phi;
        mu_gen.push((g, solve_mu_gamma(ring, m, &rhs, trivial)?));
    }
    Ok(Cocycle {
        module: m.clone(),
        mu_phi,
        mu_gen,
        label,
    })
}

/// The basis element `B_i` for a module other than the trivial one.
pub fn build_bi(ring: &TateRing, m: &RankOneModule, i: usize) -> Result<Cocycle> {
    if i >= m.f() {
        return Err(invalid("component index out of range"));
    }
    if m.is_trivial() {
        return Ok(trivial_bi(ring, m, i)?.0);
    }
    let hs = h_series(ring, m, i)?;
    let mu_phi = TateElement::unit_vector(m.f(), i, hs.h);
    complete(ring, m, mu_phi, format!("B_{i}"), false)
}

fn trivial_h(ring: &TateRing, m: &RankOneModule) -> Result<LaurentSeries> {
    if ring.p() == 2 {
        let field = ring.field();
        Ok(LaurentSeries::monomial(field, field.one(), -1, ring.order()))
    } else {
        Ok(greedy_h(ring, &ring.eta(), m.sigma(0))?.h)
    }
}

fn trivial_bi(ring: &TateRing, m: &RankOneModule, i: usize) -> Result<(Cocycle, LaurentSeries)> {
    let h = trivial_h(ring, m)?;
    let hp = h.substitute_power(ring.p() as u64).truncate(ring.order());
    let mu_phi = TateElement::unit_vector(m.f(), i, &h - &hp);
    Ok((complete(ring, m, mu_phi, format!("B_{i}"), true)?, h))
}

/// `[B_nr, B_0, …, B_{f−1}]`, followed by `B_tr` when `p = 2`, for the trivial module.
pub fn build_trivial_basis(ring: &TateRing, m: &RankOneModule) -> Result<Vec<Cocycle>> {
    if !m.is_trivial() {
        return Err(invalid("the trivial basis needs C = 1 and c⃗ = 0⃗"));
    }
    let f = m.f();
    let field = ring.field();
    let order = ring.order();
    let zero = ring.zero();
    let nr = TateElement::unit_vector(f, 0, LaurentSeries::one(field, order));
    let mut out = vec![Cocycle {
        module: m.clone(),
        mu_phi: nr,
        mu_gen: ring.generators().into_iter().map(|g| (g, zero.clone())).collect(),
        label: "B_nr".into(),
    }];
    for i in 0..f {
        out.push(trivial_bi(ring, m, i)?.0);
    }
    if ring.p() == 2 {
        let ones = TateElement::constant(field, f, field.one(), order);
        let mu_gen = ring
            .generators()
            .into_iter()
            .map(|g| (g, if g == ring.xi() { ones.clone() } else { zero.clone() }))
            .collect();
        out.push(Cocycle {
            module: m.clone(),
            mu_phi: zero.clone(),
            mu_gen,
            label: "B_tr".into(),
        });
    }
    Ok(out)
}

/// `B_cyc = Σ_i (B_i + ∂(H e_{i+1}))` for the trivial module; its `μ_φ` vanishes.
pub fn build_bcyc(ring: &TateRing, m: &RankOneModule) -> Result<Cocycle> {
    if !m.is_trivial() {
        return Err(invalid("B_cyc is defined for the trivial module"));
    }
    let f = m.f();
    let mut acc = Cocycle::zero(ring, m);
    for i in 0..f {
        let (bi, h) = trivial_bi(ring, m, i)?;
        let cb = coboundary(ring, m, &TateElement::unit_vector(f, (i + 1) % f, h))?;
        acc = acc.add(&bi).add(&cb);
    }
    acc.label = "B_cyc".into();
    Ok(acc)
}

/// Data of the très ramifiée element for the cyclotomic module.
#[derive(Clone, Debug)]
pub struct TrData {
    /// The cocycle.
    pub cocycle: Cocycle,
    /// Coefficient of `π^{−p}` in `(χ̄(η)η − 1)(h′)`.
    pub alpha: FieldElement,
    /// Coefficient of `π^{−1}` in `(χ̄(η)η − 1)(h′)`.
    pub beta: FieldElement,
    /// `h′ = π^{1−2p} + Σ ε_s π^s` with `ε_{−p} = ε_{−1} = 0`.
    pub h_prime: LaurentSeries,
}

/// `B_tr` for `p > 2`, `C = 1`, `c⃗ = (p−2, …, p−2)`.
pub fn build_btr(ring: &TateRing, m: &RankOneModule) -> Result<TrData> {
    if !m.is_cyclotomic() {
        return Err(invalid("B_tr needs p > 2, C = 1 and c⃗ = (p−2, …, p−2)"));
    }
    let p = ring.p() as i64;
    let field = ring.field();
    let order = ring.order();
    let eta = ring.eta();
    let lead = 1 - 2 * p;
    let unknowns: Vec<i64> = (2 - 2 * p..=0).filter(|&s| s != -p && s != -1).collect();
    let mut all = vec![lead];
    all.extend(&unknowns);
    let cols = polar_columns(ring, &eta, Twist::Chi, &all, lead, 1)?;
    let mut a = Matrix::new(unknowns.len());
    let mut b = Vec::new();
    for &t in &unknowns {
        let k = (t - lead) as usize;
        a.push_row(cols[1..].iter().map(|c| c[k]).collect());
        b.push(field.neg(cols[0][k]));
    }
    if a.rank(field) != unknowns.len() {
        return Err(internal("B_tr normalization system is singular"));
    }
    let x = a
        .solve(field, &b)
        .ok_or_else(|| internal("B_tr normalization system is inconsistent"))?;
    let mut terms = vec![(lead, field.one())];
    terms.extend(unknowns.iter().zip(&x).map(|(&e, &c)| (e, c)));
    let h_prime = LaurentSeries::from_terms(field, &terms, order);
    let y = twisted_minus_one(ring, &eta, Twist::Chi, &h_prime)?;
    let alpha = y.coeff(-p);
    let beta = y.coeff(-1);
    if beta != field.neg(alpha) {
        return Err(internal("coefficients at π^{−p} and π^{−1} are not opposite"));
    }
    let polar = LaurentSeries::from_terms(field, &[(-p, alpha), (-1, beta)], order);
    let rest = &y - &polar;
    if rest.floor() < 1 {
        return Err(internal(format!(
            "unexpected term at exponent {} in (χ̄η−1)h′",
            rest.floor()
        )));
    }
    let g2 = crate::tate::solve_twisted(field.one(), 0, p as u64, &rest, true)?;
    let g_prime = &LaurentSeries::monomial(field, alpha, -1, order) + &g2;
    let f = m.f();
    let mu_phi = TateElement::new(vec![h_prime.shift(2 - p).truncate(order); f]);
    let mu_eta = TateElement::new(vec![g_prime.shift(2 - p).truncate(order); f]);
    let cocycle = Cocycle {
        module: m.clone(),
        mu_phi,
        mu_gen: vec![(eta, mu_eta)],
        label: "B_tr (ε_{−p} = ε_{−1} = 0)".into(),
    };
    Ok(TrData {
        cocycle,
        alpha,
        beta,
        h_prime,
    })
}

/// `B_i′` together with the transport element `b` and its valuation profile.
#[derive(Clone, Debug)]
pub struct BiPrime {
    /// `B_i − ∂b`.
    pub cocycle: Cocycle,
    /// The element whose coboundary was subtracted.
    pub b: TateElement,
    /// `(val e_iμ_φ, val e_jμ_φ, val e_iμ_ξ, val e_jμ_ξ)` with `j = 1 − i`.
    pub profile: [Option<i64>; 4],
    /// Whether the other digit equals `p − 2`.
    pub chain: bool,
}

/// The normalized representative `B_i′` of `[B_i]` for `f = 2`, `c_i = p − 1`.
pub fn build_bi_prime(ring: &TateRing, m: &RankOneModule, i: usize) -> Result<BiPrime> {
    let p = m.p();
    if m.f() != 2 || p == 2 || i > 1 || m.digits()[i] != p - 1 {
        return Err(invalid("B_i′ needs f = 2, p > 2 and c_i = p − 1"));
    }
    let field = ring.field();
    let order = ring.order();
    let f = 2;
    let j = 1 - i;
    let hs = h_series(ring, m, i)?;
    let bi = build_bi(ring, m, i)?;
    let mut b_comps = vec![Vec::<(i64, FieldElement)>::new(); f];
    for g in &hs.groups {
        if g.level == 0 {
            continue;
        }
        for &e in &g.exponents {
            let x = hs.h.coeff(e);
            if x.is_zero() {
                continue;
            }
            let (mut exp, mut coef) = (e, x);
            for k in 1..=g.level {
                let from = (i + k - 1) % f;
                let shift = (p as i64 - 1) * m.digits()[from] as i64;
                if (exp - shift).rem_euclid(p as i64) != 0 {
                    return Err(internal(format!("transport of π^{e} is not exact at step {k}")));
                }
                exp = (exp - shift) / p as i64;
                if from == 0 {
                    coef = field.div(coef, m.c_const()).expect("C ≠ 0");
                }
                b_comps[(i + k) % f].push((exp, coef));
            }
        }
    }
    let b = TateElement::new(
        b_comps
            .iter()
            .map(|t| LaurentSeries::from_terms(field, t, order))
            .collect(),
    );
    let cb = coboundary(ring, m, &b)?;
    let mut cocycle = bi.sub(&cb);
    cocycle.label = format!("B_{i}'");
    let xi = mu_xi(ring, &cocycle, 8)?;
    let profile = [
        cocycle.mu_phi.comp(i).val(),
        cocycle.mu_phi.comp(j).val(),
        xi.comp(i).val(),
        xi.comp(j).val(),
    ];
    let chain = m.digits()[j] == p - 2;
    let pi = p as i64;
    let ok = if chain {
        profile[0].is_none_or(|v| v >= 2 - 2 * pi)
            && profile[1] == Some(3 - 3 * pi)
            && profile[2] == Some(1 - pi)
            && profile[3].is_none_or(|v| v >= 2 - 2 * pi)
    } else {
        profile[0] == Some(2 - 2 * pi)
            && profile[1] == Some(2 - 2 * pi)
            && profile[2].is_none_or(|v| v >= 0)
            && profile[3] == Some(1 - pi)
    };
    if !ok {
        return Err(internal(format!(
            "B_{i}′ valuation profile {profile:?} differs from the normalized shape"
        )));
    }
    Ok(BiPrime {
        cocycle,
        b,
        profile,
        chain,
    })
}

/// The constructed basis of `Ext¹(M_0, M)`.
#[derive(Clone, Debug)]
pub struct Basis {
    /// Basis cocycles in coordinate order.
    pub cocycles: Vec<Cocycle>,
}

impl Basis {
    /// Labels in coordinate order.
    pub fn labels(&self) -> Vec<String> {
        self.cocycles.iter().map(|c| c.label.clone()).collect()
    }

    /// Position of the element with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.cocycles
            .iter()
            .position(|c| c.label == label || c.label.starts_with(&format!("{label} ")))
    }

    /// `Σ_k β_k B_k`.
    pub fn combine(&self, ring: &TateRing, coeffs: &[FieldElement]) -> Cocycle {
        let m = &self.cocycles[0].module;
        linear_combination(ring, m, coeffs, &self.cocycles)
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.cocycles.len()
    }

    /// Whether the basis is empty.
    pub fn is_empty(&self) -> bool {
        self.cocycles.is_empty()
    }
}

/// `[B_0, …, B_{f−1}]`, extended by `B_tr` for the cyclotomic module; the
/// trivial module uses [`build_trivial_basis`].
pub fn basis(ring: &TateRing, m: &RankOneModule) -> Result<Basis> {
    if m.is_trivial() {
        return Ok(Basis {
            cocycles: build_trivial_basis(ring, m)?,
        });
    }
    let mut cocycles = (0..m.f()).map(|i| build_bi(ring, m, i)).collect::<Result<Vec<_>>>()?;
    if m.is_cyclotomic() {
        cocycles.push(build_btr(ring, m)?.cocycle);
    }
    Ok(Basis { cocycles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::verify_cocycle;
    use crate::tate::Precision;

    fn setup(p: u32, f: u32) -> (Field, TateRing) {
        let field = Field::with_degrees(p, f, f).unwrap();
        let ring = TateRing::new(&field, Precision::default_for(p, f as usize)).unwrap();
        (field, ring)
    }

    #[test]
    fn generic_bi_verifies() {
        let (field, ring) = setup(3, 2);
        let m = RankOneModule::new(&field, field.primitive(), &[1, 0]).unwrap();
        for i in 0..2 {
            let b = build_bi(&ring, &m, i).unwrap();
            assert_eq!(b.mu_phi.comp(i).val(), Some(-2));
            let rep = verify_cocycle(&ring, &b, ring.order()).unwrap();
            assert!(rep.pass, "{:?}", rep.failures);
        }
    }

    #[test]
    fn trick_bi_verifies() {
        let (field, ring) = setup(5, 2);
        let m = RankOneModule::new(&field, field.one(), &[4, 1]).unwrap();
        let b = build_bi(&ring, &m, 0).unwrap();
        assert_eq!(b.mu_phi.comp(0).val(), Some(1 - 25));
        assert!(verify_cocycle(&ring, &b, ring.order()).unwrap().pass);
        let bp = build_bi_prime(&ring, &m, 0).unwrap();
        assert!(!bp.chain);
        let m3 = RankOneModule::new(&field, field.one(), &[4, 3]).unwrap();
        let b3 = build_bi(&ring, &m3, 0).unwrap();
        assert_eq!(b3.mu_phi.comp(0).val(), Some(1 - 125));
        assert!(build_bi_prime(&ring, &m3, 0).unwrap().chain);
    }

    #[test]
    fn p2_principal_part() {
        let (field, ring) = setup(2, 2);
        let m = RankOneModule::new(&field, field.one(), &[1, 0]).unwrap();
        let h = h_series(&ring, &m, 0).unwrap();
        let terms: Vec<i64> = h.h.terms().map(|t| t.0).collect();
        assert_eq!(terms, vec![-7, -5]);
        let b = build_bi(&ring, &m, 0).unwrap();
        assert!(verify_cocycle(&ring, &b, ring.order()).unwrap().pass);
    }

    #[test]
    fn exceptional_bases_verify() {
        let (field, ring) = setup(3, 2);
        let triv = RankOneModule::new(&field, field.one(), &[0, 0]).unwrap();
        let basis = build_trivial_basis(&ring, &triv).unwrap();
        assert_eq!(basis.len(), 3);
        for c in &basis {
            assert!(verify_cocycle(&ring, c, ring.order()).unwrap().pass, "{}", c.label);
        }
        let cyc = build_bcyc(&ring, &triv).unwrap();
        assert!(cyc.mu_phi.is_zero());
        let cyclo = RankOneModule::new(&field, field.one(), &[1, 1]).unwrap();
        let tr = build_btr(&ring, &cyclo).unwrap();
        assert!(verify_cocycle(&ring, &tr.cocycle, ring.order()).unwrap().pass);
        assert_eq!(tr.cocycle.mu_phi.comp(0).val(), Some(3 - 3 * 3));
        assert_eq!(tr.alpha, field.neg(ring.z()));
        assert_eq!(tr.beta, ring.z());
        let (f5, r5) = setup(5, 1);
        let cyc5 = RankOneModule::new(&f5, f5.one(), &[3]).unwrap();
        let tr5 = build_btr(&r5, &cyc5).unwrap();
        assert_eq!((tr5.alpha, tr5.beta), (f5.neg(r5.z()), r5.z()));
        assert!(verify_cocycle(&r5, &tr5.cocycle, r5.order()).unwrap().pass);
    }
}
