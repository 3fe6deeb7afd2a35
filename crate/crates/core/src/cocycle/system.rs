//! Finite linear systems deciding which combinations of cocycles can be made
//! small by adding a coboundary.
//!
//! Given cocycles `c_1, …, c_n` and thresholds, the unknowns are `β ∈ F^n` and
//! the coefficients `y_j[s]` of an element `y` with support in `[L, U)`. The
//! conditions ask that `(Σ β_k c_k + ∂y)_φ` have no terms below `T^φ_j` in
//! component `j`, and `(Σ β_k c_k + ∂y)_γ` no terms below `T^γ_j`. The Frobenius
//! conditions express each `y_j[t]` through a single coefficient of `y_{j+1}`,
//! so they are solved by following that chain; the remaining conditions form a
//! small dense system whose projection onto `β` is the answer.

use std::collections::HashMap;

use crate::cocycle::{coboundary, Basis, Cocycle};
use crate::error::{internal, invalid, Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;
use crate::rankone::RankOneModule;
use crate::series::LaurentSeries;
use crate::tate::{GammaElement, TateElement, TateRing};

/// Thresholds and generators of one tail system.
#[derive(Clone, Debug)]
pub struct TailProblem {
    /// The module whose coboundaries are added.
    pub module: RankOneModule,
    /// Generators whose `μ_γ` are constrained.
    pub gammas: Vec<GammaElement>,
    /// `T^φ_j`: exponents below which `μ_φ` must vanish.
    pub phi_thresholds: Vec<i64>,
    /// `T^γ_j` for each entry of `gammas`.
    pub gamma_thresholds: Vec<Vec<i64>>,
    /// Requested lowest exponent `L` for `y`; lowered automatically to the data's support.
    pub floor: i64,
}

/// The data of one cocycle as seen by a tail system.
#[derive(Clone, Debug)]
pub struct TailColumn {
    /// `μ_φ`.
    pub mu_phi: TateElement,
    /// `μ_γ` for each generator of the problem, in order.
    pub mu_gamma: Vec<TateElement>,
}

/// Solution of a tail system.
#[derive(Clone, Debug)]
pub struct TailSolution {
    /// Basis of the subspace of admissible `β`.
    pub space: Vec<Vec<FieldElement>>,
    /// The window `[L, U)` used for `y`.
    pub window: (i64, i64),
    n: usize,
    n_free: usize,
    exprs: Vec<Vec<Vec<FieldElement>>>,
    rows: Vec<Vec<FieldElement>>,
}

fn axpy(field: &Field, acc: &mut Vec<FieldElement>, a: FieldElement, x: &[FieldElement]) {
    if a.is_zero() {
        return;
    }
    if acc.len() < x.len() {
        acc.resize(x.len(), FieldElement::ZERO);
    }
    for (s, &v) in acc.iter_mut().zip(x) {
        if !v.is_zero() {
            *s = field.mul_add(*s, a, v);
        }
    }
}

impl TailSolution {
    /// Dimension of the admissible subspace.
    pub fn dim(&self) -> usize {
        self.space.len()
    }

    /// An element `y` realizing the conditions for the given `β`, if one exists.
    pub fn witness(&self, field: &Field, beta: &[FieldElement]) -> Option<TateElement> {
        assert_eq!(beta.len(), self.n, "coordinate count");
        let k = self.n_free;
        let mut a = Matrix::new(k);
        let mut rhs = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut r = vec![FieldElement::ZERO; k];
            let mut c = FieldElement::ZERO;
            for (idx, &v) in row.iter().enumerate() {
                if idx < self.n {
                    c = field.mul_add(c, v, beta[idx]);
                } else {
                    r[idx - self.n] = v;
                }
            }
            a.push_row(r);
            rhs.push(field.neg(c));
        }
        let x = if k == 0 {
            if rhs.iter().any(|v| !v.is_zero()) {
                return None;
            }
            Vec::new()
        } else {
            a.solve(field, &rhs)?
        };
        let (lo, hi) = self.window;
        let order = hi;
        let comps = self
            .exprs
            .iter()
            .map(|ej| {
                let coeffs = ej
                    .iter()
                    .map(|e| {
                        e.iter().enumerate().fold(FieldElement::ZERO, |acc, (idx, &v)| {
                            let w = if idx < self.n { beta[idx] } else { x[idx - self.n] };
                            field.mul_add(acc, v, w)
                        })
                    })
                    .collect();
                LaurentSeries::from_coeffs(field, lo, order, coeffs)
            })
            .collect();
        Some(TateElement::new(comps))
    }
}

enum Node {
    Unseen,
    Done(Vec<FieldElement>),
}

/// Solves a tail system for the given columns.
pub fn tail_solve(ring: &TateRing, problem: &TailProblem, columns: &[TailColumn]) -> Result<TailSolution> {
    let field = ring.field();
    let f = ring.f();
    let p = ring.p() as i64;
    let n = columns.len();
    let m = &problem.module;
    if problem.phi_thresholds.len() != f || problem.gamma_thresholds.len() != problem.gammas.len() {
        return Err(invalid("threshold vectors have the wrong length"));
    }
    let max_t = problem
        .phi_thresholds
        .iter()
        .chain(problem.gamma_thresholds.iter().flatten())
        .copied()
        .max()
        .unwrap_or(0);
    let hi = max_t.max(0);
    let mut lo = problem.floor.min(-1);
    for c in columns {
        lo = lo.min(c.mu_phi.floor() - 1);
        for g in &c.mu_gamma {
            lo = lo.min(g.floor() - 1);
        }
    }
    for c in columns {
        if c.mu_phi.order() < hi || c.mu_gamma.iter().any(|g| g.order() < hi) {
            return Err(Error::Precision(format!(
                "cocycle data shorter than the tail window: {} {:?} < {hi}",
                c.mu_phi.order(),
                c.mu_gamma.iter().map(|g| g.order()).collect::<Vec<_>>()
            )));
        }
    }
    let width = (hi - lo) as usize;
    let exps = m.phi_exponents();
    let consts: Vec<FieldElement> = (0..f).map(|j| if j == 0 { m.c_const() } else { field.one() }).collect();

    let mu_phi_vec =
        |j: usize, t: i64| -> Vec<FieldElement> { columns.iter().map(|c| c.mu_phi.comp(j).coeff(t)).collect() };

    let mut n_free = 0usize;
    let new_free = |n_free: &mut usize| -> Vec<FieldElement> {
        let mut v = vec![FieldElement::ZERO; n + *n_free + 1];
        v[n + *n_free] = FieldElement::ONE;
        *n_free += 1;
        v
    };
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let mut nodes: Vec<Vec<Node>> = (0..f).map(|_| (0..width).map(|_| Node::Unseen).collect()).collect();
    let succ = |j: usize, t: i64| -> Option<(usize, i64)> {
        let d = t - exps[j];
        if d.rem_euclid(p) != 0 {
            return None;
        }
        let tp = d / p;
        (tp >= lo).then_some(((j + 1) % f, tp))
    };

    for j0 in 0..f {
        for t0 in lo..hi {
            if matches!(nodes[j0][(t0 - lo) as usize], Node::Done(_)) {
                continue;
            }
            let mut path: Vec<(usize, i64)> = Vec::new();
            let mut pos: HashMap<(usize, i64), usize> = HashMap::new();
            let mut cur = (j0, t0);
            loop {
                let (j, t) = cur;
                let idx = (t - lo) as usize;
                if let Node::Done(_) = nodes[j][idx] {
                    break;
                }
                if let Some(&k) = pos.get(&cur) {
                    let cycle = &path[k..];
                    let mut a = vec![FieldElement::ZERO; n];
                    let mut prod = FieldElement::ONE;
                    for &(cj, ct) in cycle {
                        axpy(field, &mut a, prod, &mu_phi_vec(cj, ct));
                        prod = field.mul(prod, consts[cj]);
                    }
                    let one_minus = field.sub(field.one(), prod);
                    let value = match field.inv(one_minus) {
                        Some(inv) => a.iter().map(|&v| field.mul(v, inv)).collect(),
                        None => {
                            rows.push(a);
                            new_free(&mut n_free)
                        }
                    };
                    let (ej, et) = path[k];
                    nodes[ej][(et - lo) as usize] = Node::Done(value);
                    let cyc = path[k + 1..].to_vec();
                    path.truncate(k);
                    for &(cj, ct) in cyc.iter().rev() {
                        let (sj, st) = succ(cj, ct).expect("cycle nodes have successors");
                        let Node::Done(next) = &nodes[sj][(st - lo) as usize] else {
                            return Err(internal("cycle resolution out of order"));
                        };
                        let mut v = mu_phi_vec(cj, ct);
                        axpy(field, &mut v, consts[cj], &next.clone());
                        nodes[cj][(ct - lo) as usize] = Node::Done(v);
                    }
                    break;
                }
                if t >= problem.phi_thresholds[j] {
                    nodes[j][idx] = Node::Done(new_free(&mut n_free));
                    break;
                }
                match succ(j, t) {
                    Some(next) if next.1 < hi => {
                        pos.insert(cur, path.len());
                        path.push(cur);
                        cur = next;
                    }
                    Some(_) => return Err(internal("Frobenius chain left the window")),
                    None => {
                        nodes[j][idx] = Node::Done(mu_phi_vec(j, t));
                        break;
                    }
                }
            }
            for &(j, t) in path.iter().rev() {
                if matches!(nodes[j][(t - lo) as usize], Node::Done(_)) {
                    continue;
                }
                let (sj, st) = succ(j, t).expect("path nodes have successors");
                let Node::Done(next) = &nodes[sj][(st - lo) as usize] else {
                    return Err(internal("chain resolution out of order"));
                };
                let next = next.clone();
                let mut v = mu_phi_vec(j, t);
                axpy(field, &mut v, consts[j], &next);
                nodes[j][(t - lo) as usize] = Node::Done(v);
            }
        }
    }
    let exprs: Vec<Vec<Vec<FieldElement>>> = nodes
        .into_iter()
        .map(|nj| {
            nj.into_iter()
                .map(|nd| match nd {
                    Node::Done(v) => v,
                    Node::Unseen => unreachable!("every node is resolved"),
                })
                .collect()
        })
        .collect();

    // Frobenius conditions below the window: 0 = μ_j[t] + C_j y_{j+1}[t′].
    for j in 0..f {
        let t_min = p * lo + exps[j];
        for t in t_min..lo.min(problem.phi_thresholds[j]) {
            if let Some((sj, st)) = succ(j, t) {
                if st < hi {
                    let mut v = mu_phi_vec(j, t);
                    axpy(field, &mut v, consts[j], &exprs[sj][(st - lo) as usize]);
                    rows.push(v);
                }
            }
        }
    }

    // Γ conditions.
    for (gi, g) in problem.gammas.iter().enumerate() {
        let thresholds = &problem.gamma_thresholds[gi];
        let top = thresholds.iter().copied().max().unwrap_or(lo).max(lo);
        if top <= lo {
            continue;
        }
        let cols = ring.gamma_columns(g, lo, top, top)?;
        let lam = ring.lambda(g, top - lo + 1)?;
        for j in 0..f {
            let tj = thresholds[j];
            if tj <= lo {
                continue;
            }
            let lam_j = lam.pow(m.sigma(j))?;
            let span = (tj - lo) as usize;
            let mut acc: Vec<Vec<FieldElement>> = vec![Vec::new(); span];
            for t in lo..tj {
                let v: Vec<FieldElement> = columns.iter().map(|c| c.mu_gamma[gi].comp(j).coeff(t)).collect();
                acc[(t - lo) as usize] = v;
            }
            for s in lo..tj {
                let e = &exprs[j][(s - lo) as usize];
                if e.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let w = cols[(s - lo) as usize].mul_series(&lam_j.truncate(tj - s));
                for (t, c) in w.terms() {
                    if t >= tj {
                        break;
                    }
                    axpy(field, &mut acc[(t - lo) as usize], c, e);
                }
                axpy(field, &mut acc[(s - lo) as usize], field.neg(field.one()), e);
            }
            rows.extend(acc);
        }
    }

    let k = n + n_free;
    let mut reordered = Matrix::new(k);
    let mut raw = Vec::with_capacity(rows.len());
    for mut r in rows {
        r.resize(k, FieldElement::ZERO);
        let mut o = r[n..].to_vec();
        o.extend_from_slice(&r[..n]);
        reordered.push_row(o);
        raw.push(r);
    }
    let pivots = reordered.rref(field);
    let mut constraints = Matrix::new(n);
    for (row, &pc) in reordered.rows().iter().zip(&pivots) {
        if pc >= n_free {
            constraints.push_row(row[n_free..].to_vec());
        }
    }
    let space = if n == 0 {
        Vec::new()
    } else {
        constraints.nullspace(field)
    };
    Ok(TailSolution {
        space,
        window: (lo, hi),
        n,
        n_free,
        exprs,
        rows: raw,
    })
}

/// A certificate that a cocycle is a coboundary: `c = ∂b` on the checked window.
#[derive(Clone, Debug)]
pub struct Witness {
    /// The element `b` with `c + ∂(−b) = 0`, i.e. `c = ∂b`.
    pub b: TateElement,
    /// Exclusive exponent bound of the verification.
    pub checked_order: i64,
}

/// Three-valued answer of [`coboundary_witness`].
#[derive(Clone, Debug)]
pub enum CoboundaryStatus {
    /// A verified witness.
    Yes(Witness),
    /// No witness with support above the floor, at both the floor and twice the floor.
    No,
    /// The window could not settle the question.
    Inconclusive(String),
}

impl CoboundaryStatus {
    /// Whether the answer is `Yes`.
    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Yes(_))
    }

    /// Whether the answer is `No`.
    pub fn is_no(&self) -> bool {
        matches!(self, Self::No)
    }
}

fn coboundary_problem(ring: &TateRing, m: &RankOneModule, floor: i64) -> TailProblem {
    let f = ring.f();
    let tphi = if m.is_trivial() { 1 } else { 0 };
    let gammas = ring.generators();
    TailProblem {
        module: m.clone(),
        phi_thresholds: vec![tphi; f],
        gamma_thresholds: vec![vec![1; f]; gammas.len()],
        gammas,
        floor,
    }
}

fn column_of(c: &Cocycle, gammas: &[GammaElement], order: i64) -> Result<TailColumn> {
    let mu_gamma = gammas
        .iter()
        .map(|g| {
            c.mu(g)
                .map(|m| m.truncate(order))
                .ok_or_else(|| invalid("generator not stored"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailColumn {
        mu_phi: c.mu_phi.truncate(order),
        mu_gamma,
    })
}

/// `c + ∂y` for an element `y`.
fn add_coboundary(ring: &TateRing, c: &Cocycle, y: &TateElement) -> Result<Cocycle> {
    let order = c.order();
    let yy = TateElement::new(
        y.comps()
            .iter()
            .map(|s| LaurentSeries::from_coeffs(s.field(), s.floor(), order, s.coeff_slice().to_vec()))
            .collect(),
    );
    Ok(c.add(&coboundary(ring, &c.module, &yy)?))
}

fn try_witness(ring: &TateRing, c: &Cocycle, floor: i64) -> Result<Option<Witness>> {
    let m = &c.module;
    let problem = coboundary_problem(ring, m, floor);
    let col = column_of(c, &problem.gammas, 2)?;
    let sol = tail_solve(ring, &problem, &[col])?;
    let Some(y) = sol.witness(ring.field(), &[FieldElement::ONE]) else {
        return Ok(None);
    };
    let c1 = add_coboundary(ring, c, &y)?;
    let order = c1.order();
    if c1.mu_phi.floor() < problem.phi_thresholds[0] {
        return Err(internal("tail solution does not clear μ_φ"));
    }
    let exps = m.phi_exponents();
    let rhs = (-&c1.mu_phi).truncate(order);
    let b_pos = ring.solve_twisted_phi(m.phi_twist(&exps), &rhs, m.is_trivial())?;
    let c2 = add_coboundary(ring, &c1, &b_pos)?;
    let checked = c2.order();
    if !c2.mu_phi.is_zero() || c2.mu_gen.iter().any(|(_, g)| !g.is_zero()) {
        return Err(internal("coboundary witness fails verification"));
    }
    let b = &(-&y.truncate(checked)) - &b_pos.truncate(checked);
    Ok(Some(Witness {
        b,
        checked_order: checked,
    }))
}

/// Decides whether `c` is a coboundary, with witnesses supported above `floor`.
pub fn coboundary_witness(ring: &TateRing, c: &Cocycle, floor: i64) -> CoboundaryStatus {
    match try_witness(ring, c, floor) {
        Ok(Some(w)) => CoboundaryStatus::Yes(w),
        Ok(None) => match try_witness(ring, c, 2 * floor) {
            Ok(Some(w)) => CoboundaryStatus::Yes(w),
            Ok(None) => CoboundaryStatus::No,
            Err(e) => CoboundaryStatus::Inconclusive(e.to_string()),
        },
        Err(e) => CoboundaryStatus::Inconclusive(e.to_string()),
    }
}

/// Outcome of [`span_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeResult {
    /// Coordinates in the basis.
    Coords(Vec<FieldElement>),
    /// The class is not in the span of the basis.
    NotInSpan,
}

/// Coordinates of several cocycles in the basis, from one joint tail system.
///
/// Also returns the rank defect of the basis: zero when the basis classes are
/// linearly independent.
pub fn span_decompose_many(
    ring: &TateRing,
    basis: &Basis,
    targets: &[Cocycle],
    floor: i64,
) -> Result<(Vec<DecomposeResult>, usize)> {
    let field = ring.field();
    let m = &basis.cocycles[0].module;
    let problem = coboundary_problem(ring, m, floor);
    let nb = basis.len();
    let cols = basis
        .cocycles
        .iter()
        .chain(targets)
        .map(|c| column_of(c, &problem.gammas, 2))
        .collect::<Result<Vec<_>>>()?;
    let sol = tail_solve(ring, &problem, &cols)?;
    let mut reordered = Matrix::new(nb + targets.len());
    for r in &sol.space {
        let mut o = r[nb..].to_vec();
        o.extend_from_slice(&r[..nb]);
        reordered.push_row(o);
    }
    let pivots = reordered.rref(field);
    let defect = pivots.iter().filter(|&&pc| pc >= targets.len()).count();
    let mut out = vec![DecomposeResult::NotInSpan; targets.len()];
    for (row, &pc) in reordered.rows().iter().zip(&pivots) {
        if pc < targets.len()
            && row[..targets.len()]
                .iter()
                .enumerate()
                .all(|(k, v)| k == pc || v.is_zero())
        {
            let coords = row[targets.len()..].iter().map(|&v| field.neg(v)).collect();
            out[pc] = DecomposeResult::Coords(coords);
        }
    }
    Ok((out, defect))
}

/// Coordinates of `c` in the basis, or `NotInSpan`.
pub fn span_decompose(ring: &TateRing, basis: &Basis, c: &Cocycle, floor: i64) -> Result<DecomposeResult> {
    let (mut r, _) = span_decompose_many(ring, basis, std::slice::from_ref(c), floor)?;
    Ok(r.pop().expect("one target"))
}

/// `Σ β_k B_k + ∂b`: a cocycle whose coordinates are known to be `β`.
pub fn random_cocycle(ring: &TateRing, basis: &Basis, coeffs: &[FieldElement], b: &TateElement) -> Result<Cocycle> {
    let m = &basis.cocycles[0].module;
    let comb = basis.combine(ring, coeffs);
    let mut c = comb.add(&coboundary(ring, m, b)?);
    c.label = "combination + coboundary".into();
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::basis;
    use crate::tate::Precision;

    #[test]
    fn coboundaries_are_recognized() {
        let field = Field::with_degrees(3, 2, 2).unwrap();
        let ring = TateRing::new(&field, Precision::default_for(3, 2)).unwrap();
        let m = RankOneModule::new(&field, field.primitive(), &[1, 0]).unwrap();
        let order = ring.order();
        let b = TateElement::new(vec![
            LaurentSeries::from_ints(&field, -5, order, &[1, 0, 2, 1]),
            LaurentSeries::from_ints(&field, -3, order, &[2, 1, 1]),
        ]);
        let cb = coboundary(&ring, &m, &b).unwrap();
        assert!(coboundary_witness(&ring, &cb, -20).is_yes());
        let bas = basis(&ring, &m).unwrap();
        assert!(coboundary_witness(&ring, &bas.cocycles[0], -20).is_no());
        let coeffs = vec![field.from_int(2), field.primitive()];
        let c = random_cocycle(&ring, &bas, &coeffs, &b).unwrap();
        assert_eq!(
            span_decompose(&ring, &bas, &c, -20).unwrap(),
            DecomposeResult::Coords(coeffs)
        );
    }
}
