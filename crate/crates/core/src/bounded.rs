//! Bounded extensions and the subspaces `V_J`, `V_J^±` of `Ext¹(M_0, M)`.
//!
//! An extension class lies in `V_J` when its image under the twist `ι` for a
//! weight profile of `J` admits a representative whose `μ_φ` is integral and
//! whose `μ_γ`, for `γ` in the first congruence subgroup, vanish mod `π`. Since
//! `ι` multiplies every `μ` by a monomial in each component (up to units that
//! are `1 mod π` on the `Γ` side) and carries coboundaries to coboundaries, the
//! test is run on the untwisted cocycle with shifted valuation thresholds.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::cocycle::{basis, mu_xi, tail_solve, Basis, CoboundaryStatus, Cocycle, TailColumn, TailProblem};
use crate::error::Result;
use crate::field::FieldElement;
use crate::linalg::{same_span, Matrix};
use crate::rankone::{
    all_subsets, kappa_gamma_for, kappa_phi_for, twist_exponents, twist_factor, weight_profiles, RankOneModule, Sign,
    WeightProfile,
};
use crate::tate::{GammaElement, TateElement, TateRing};

/// Options of the boundedness test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundedOptions {
    /// For `p = 2`, additionally require `μ_ξ ∈ π²F[[π]]^S` (`ξ` generates `Γ_2`).
    pub strict_p2: bool,
}

/// Valuation thresholds of the boundedness test for one weight profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// The `Γ` generators whose `μ` is constrained.
    pub gammas: Vec<GammaElement>,
    /// `μ_φ` must have no terms below `phi[j]` in component `j`.
    pub phi: Vec<i64>,
    /// `μ_γ` must have no terms below `gamma[k][j]` in component `j`.
    pub gamma: Vec<Vec<i64>>,
}

/// The generators constrained by the boundedness test: `ξ` for odd `p`, `η` and `ξ` for `p = 2`.
pub fn bounded_generators(ring: &TateRing) -> Vec<GammaElement> {
    if ring.p() == 2 {
        vec![ring.eta(), ring.xi()]
    } else {
        vec![ring.xi()]
    }
}

/// Thresholds on the untwisted cocycle equivalent to boundedness of its `ι`-image.
pub fn thresholds(
    ring: &TateRing,
    m: &RankOneModule,
    prof: &WeightProfile,
    opts: BoundedOptions,
) -> Result<Thresholds> {
    let p = ring.p() as i64;
    let eps = twist_exponents(m, prof)?;
    let gammas = bounded_generators(ring);
    let phi = eps.iter().zip(&prof.a).map(|(&e, &a)| -(p - 1) * (a + e)).collect();
    let gamma = gammas
        .iter()
        .map(|g| {
            let extra = i64::from(opts.strict_p2 && p == 2 && *g == ring.xi());
            eps.iter().map(|&e| 1 + extra - (p - 1) * e).collect()
        })
        .collect();
    Ok(Thresholds { gammas, phi, gamma })
}

/// A cocycle together with its image under `ι`.
#[derive(Clone, Debug)]
pub struct TwistedCocycle {
    /// The untwisted cocycle.
    pub source: Cocycle,
    /// The weight profile defining `ι`.
    pub profile: WeightProfile,
    /// `ε_j` with `⟨c⃗⟩_J = (π^{(p−1)ε_j})_j`.
    pub eps: Vec<i64>,
    /// `κ_φ(1, a⃗)⟨c⃗⟩_J μ_φ`.
    pub mu_phi: TateElement,
    /// `κ_γ(1, a⃗)⟨c⃗⟩_J μ_γ` at the constrained generators.
    pub mu_gamma: Vec<(GammaElement, TateElement)>,
}

/// `ι(c)` for the profile `prof`, with `A = 1`.
pub fn iota_twist(ring: &TateRing, c: &Cocycle, prof: &WeightProfile) -> Result<TwistedCocycle> {
    let m = &c.module;
    let p = ring.p() as i64;
    let order = c.order();
    let eps = twist_exponents(m, prof)?;
    let shift = (p - 1) * eps.iter().map(|e| e.abs()).max().unwrap_or(0);
    let exps_a: Vec<i64> = prof.a.iter().map(|&a| (p - 1) * a).collect();
    let factor = twist_factor(m, prof, order + shift - c.floor().min(0))?;
    let kp = kappa_phi_for(
        ring.field(),
        ring.field().one(),
        &exps_a,
        order + shift - c.floor().min(0),
    );
    let mu_phi = factor.mul(&kp).mul(&c.mu_phi);
    let sig_a: Vec<i64> = (0..ring.f())
        .map(|l| crate::rankone::twisted_digit_sum(&prof.a, ring.p(), l))
        .collect();
    let mut mu_gamma = Vec::new();
    for g in bounded_generators(ring) {
        let mu = match c.mu(&g) {
            Some(mu) => mu.clone(),
            None => mu_xi(ring, c, order)?,
        };
        let kg = kappa_gamma_for(ring, &g, &sig_a, order - mu.floor().min(0) + shift)?;
        mu_gamma.push((g, factor.mul(&kg).mul(&mu)));
    }
    Ok(TwistedCocycle {
        source: c.clone(),
        profile: prof.clone(),
        eps,
        mu_phi,
        mu_gamma,
    })
}

fn tail_column(ring: &TateRing, c: &Cocycle, gammas: &[GammaElement], order: i64) -> Result<TailColumn> {
    let mut mu_gamma = Vec::with_capacity(gammas.len());
    for g in gammas {
        let mu = match c.mu(g) {
            Some(mu) => mu.truncate(order),
            None => mu_xi(ring, c, order)?,
        };
        mu_gamma.push(mu);
    }
    Ok(TailColumn {
        mu_phi: c.mu_phi.truncate(order),
        mu_gamma,
    })
}

fn bounded_problem(m: &RankOneModule, th: &Thresholds, floor: i64) -> TailProblem {
    TailProblem {
        module: m.clone(),
        gammas: th.gammas.clone(),
        phi_thresholds: th.phi.clone(),
        gamma_thresholds: th.gamma.clone(),
        floor,
    }
}

fn window_top(th: &Thresholds) -> i64 {
    th.phi
        .iter()
        .chain(th.gamma.iter().flatten())
        .copied()
        .max()
        .unwrap_or(0)
        .max(0)
        + 1
}

/// Whether the twisted class is bounded, with coboundaries supported above `floor`.
pub fn is_bounded_class(ring: &TateRing, t: &TwistedCocycle, floor: i64, opts: BoundedOptions) -> CoboundaryStatus {
    let run = |floor: i64| -> Result<bool> {
        let m = &t.source.module;
        let th = thresholds(ring, m, &t.profile, opts)?;
        let col = tail_column(ring, &t.source, &th.gammas, window_top(&th))?;
        let sol = tail_solve(ring, &bounded_problem(m, &th, floor), &[col])?;
        Ok(sol.dim() == 1)
    };
    match run(floor) {
        Ok(true) => CoboundaryStatus::Yes(crate::cocycle::Witness {
            b: TateElement::zero(ring.field(), ring.f(), 0),
            checked_order: 0,
        }),
        Ok(false) => match run(2 * floor) {
            Ok(false) => CoboundaryStatus::No,
            Ok(true) => CoboundaryStatus::Inconclusive("bounded only with the doubled window".into()),
            Err(e) => CoboundaryStatus::Inconclusive(e.to_string()),
        },
        Err(e) => CoboundaryStatus::Inconclusive(e.to_string()),
    }
}

/// `V_J` (or `V_J^±`) with a basis in coordinates of the constructed `Ext¹` basis.
#[derive(Clone, Debug)]
pub struct SubspaceReport {
    /// The module `M`.
    pub module: RankOneModule,
    /// The subset `J`.
    pub j: BTreeSet<usize>,
    /// Which weight profile was used.
    pub sign: Sign,
    /// The weight profile itself.
    pub profile: WeightProfile,
    /// Dimension.
    pub dim: usize,
    /// Reduced row echelon basis, in coordinates of `basis_labels`.
    pub basis: Vec<Vec<FieldElement>>,
    /// Labels of the `Ext¹` basis.
    pub basis_labels: Vec<String>,
    /// `(L, M)`: coboundary floor and series order.
    pub window: (i64, i64),
    /// Whether the floor `2L` gives the same subspace.
    pub stable: bool,
}

fn subspace_at(ring: &TateRing, bas: &Basis, th: &Thresholds, floor: i64) -> Result<Vec<Vec<FieldElement>>> {
    let m = &bas.cocycles[0].module;
    let top = window_top(th);
    let cols = bas
        .cocycles
        .iter()
        .map(|c| tail_column(ring, c, &th.gammas, top))
        .collect::<Result<Vec<_>>>()?;
    let sol = tail_solve(ring, &bounded_problem(m, th, floor), &cols)?;
    let mut mat = Matrix::from_rows(bas.len(), sol.space);
    mat.rref(ring.field());
    Ok(mat.rows().to_vec())
}

/// Computes `V_J` for one weight profile.
pub fn compute_vj(
    ring: &TateRing,
    bas: &Basis,
    prof: &WeightProfile,
    floor: i64,
    opts: BoundedOptions,
) -> Result<SubspaceReport> {
    let m = &bas.cocycles[0].module;
    let th = thresholds(ring, m, prof, opts)?;
    let space = subspace_at(ring, bas, &th, floor)?;
    let doubled = subspace_at(ring, bas, &th, 2 * floor)?;
    let stable = same_span(ring.field(), &space, &doubled);
    Ok(SubspaceReport {
        module: m.clone(),
        j: prof.j.clone(),
        sign: prof.sign,
        profile: prof.clone(),
        dim: space.len(),
        basis: space,
        basis_labels: bas.labels(),
        window: (floor, ring.order()),
        stable,
    })
}

/// Reports for every subset and sign, plus coincidences among singleton spaces.
#[derive(Clone, Debug)]
pub struct VjTable {
    /// The module `M`.
    pub module: RankOneModule,
    /// Labels of the `Ext¹` basis.
    pub basis_labels: Vec<String>,
    /// One report per `(J, sign)`, subsets ordered by size.
    pub reports: Vec<SubspaceReport>,
    /// `(i, sign_i, k, sign_k)` for distinct singleton reports spanning the same space.
    pub coincidences: Vec<(usize, Sign, usize, Sign)>,
}

impl VjTable {
    /// The report for `J` and `sign`.
    pub fn get(&self, j: &BTreeSet<usize>, sign: Sign) -> Option<&SubspaceReport> {
        self.reports.iter().find(|r| &r.j == j && r.sign == sign)
    }

    /// Whether `V_{i}` and `V_{k}` coincide for some choice of signs.
    pub fn singletons_coincide(&self, i: usize, k: usize) -> bool {
        self.coincidences
            .iter()
            .any(|&(a, _, b, _)| (a, b) == (i, k) || (a, b) == (k, i))
    }
}

/// The full table of `V_J` for `m`, with the constructed basis.
pub fn vj_table(ring: &TateRing, m: &RankOneModule, floor: i64, opts: BoundedOptions) -> Result<VjTable> {
    let bas = basis(ring, m)?;
    vj_table_with(ring, &bas, floor, opts)
}

/// The full table of `V_J` for an already constructed basis.
pub fn vj_table_with(ring: &TateRing, bas: &Basis, floor: i64, opts: BoundedOptions) -> Result<VjTable> {
    let m = bas.cocycles[0].module.clone();
    let mut jobs = Vec::new();
    for j in all_subsets(ring.f()) {
        jobs.extend(weight_profiles(&m, &j)?);
    }
    let reports = jobs
        .par_iter()
        .map(|prof| compute_vj(ring, bas, prof, floor, opts))
        .collect::<Result<Vec<_>>>()?;
    let singles: Vec<&SubspaceReport> = reports.iter().filter(|r| r.j.len() == 1).collect();
    let mut coincidences = Vec::new();
    for (x, a) in singles.iter().enumerate() {
        for b in &singles[x + 1..] {
            let (i, k) = (
                *a.j.iter().next().expect("singleton"),
                *b.j.iter().next().expect("singleton"),
            );
            if i != k && same_span(ring.field(), &a.basis, &b.basis) {
                coincidences.push((i, a.sign, k, b.sign));
            }
        }
    }
    Ok(VjTable {
        module: m,
        basis_labels: bas.labels(),
        reports,
        coincidences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::tate::Precision;

    #[test]
    fn generic_singletons() {
        let field = Field::with_degrees(5, 2, 2).unwrap();
        let ring = TateRing::new(&field, Precision::default_for(5, 2)).unwrap();
        let m = RankOneModule::new(&field, field.primitive(), &[1, 2]).unwrap();
        let table = vj_table(&ring, &m, ring.precision().tail_floor, BoundedOptions::default()).unwrap();
        for i in 0..2 {
            let r = table.get(&BTreeSet::from([i]), Sign::Unique).unwrap();
            assert_eq!(r.dim, 1);
            let mut e = vec![field.zero(); 2];
            e[(i + 1) % 2] = field.one();
            assert_eq!(r.basis, vec![e]);
            assert!(r.stable);
        }
        assert_eq!(table.get(&BTreeSet::new(), Sign::Unique).unwrap().dim, 0);
        assert_eq!(table.get(&BTreeSet::from([0, 1]), Sign::Unique).unwrap().dim, 2);
        let b1 = build_twist_check(&ring, &m);
        assert!(b1);
    }

    fn build_twist_check(ring: &TateRing, m: &RankOneModule) -> bool {
        let bas = basis(ring, m).unwrap();
        let prof = weight_profiles(m, &BTreeSet::from([0])).unwrap().remove(0);
        let t = iota_twist(ring, &bas.cocycles[1], &prof).unwrap();
        t.mu_phi.floor() >= 0
            && is_bounded_class(ring, &t, ring.precision().tail_floor, BoundedOptions::default()).is_yes()
    }
}
