//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line; the
//! run fails if any criterion fails.

use std::time::Instant;

use phigamma::bounded::{vj_table_with, BoundedOptions, VjTable};
use phigamma::cocycle::mu_xi;
use phigamma::cocycle::{basis, random_cocycle, span_decompose_many, twisted_gamma};
use phigamma::linalg::{rank_of, same_span, Matrix};
use phigamma::oracle::{default_grid, sweep, Lemma, LemmaParams};
use phigamma::wach::{reduce_mod_p, saturation_check, ExtensionLattice, SaturationReport, WachContext, WittRing};
use phigamma::Cocycle;
use phigamma::Sign;
use phigamma::{DecomposeResult, Field, FieldElement, LaurentSeries, Precision, RankOneModule, TateElement, TateRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

type Outcome = Result<String, String>;

fn ring_for(p: u32, f: usize, scale: u32) -> (Field, TateRing) {
    let field = Field::with_degrees(p, f as u32, f as u32).expect("field");
    let ring = TateRing::new(&field, Precision::default_for(p, f).scaled(scale)).expect("ring");
    (field, ring)
}

fn random_element(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    let k = rng.gen_range(0..field.q() as u64);
    if k == 0 {
        field.zero()
    } else {
        field.from_log(k)
    }
}

fn random_b(field: &Field, f: usize, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> TateElement {
    TateElement::new(
        (0..f)
            .map(|_| {
                let coeffs = (lo..hi).map(|_| random_element(field, rng)).collect();
                LaurentSeries::from_coeffs(field, lo, hi, coeffs)
            })
            .collect(),
    )
}

/// Random cocycles produced without reference to any basis.
///
/// The polar parts of `μ_φ` and `μ_η` in `[lo, 0)` are drawn from the kernel of
/// the map sending them to the polar part of `(κ_φ φ − 1)(μ_η) − (κ_η η − 1)(μ_φ)`;
/// a random integral part is added to `μ_φ` and the integral part of `μ_η` is solved for.
fn admissible_cocycles(
    ring: &TateRing,
    m: &RankOneModule,
    lo: i64,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Cocycle>, String> {
    let field = ring.field();
    let f = ring.f();
    let p = ring.p() as i64;
    let eta = ring.eta();
    let order = 3;
    let err = |e: phigamma::Error| e.to_string();
    let kp = m.kappa_phi(order - p * lo);
    let defect = |mu_phi: &TateElement, mu_eta: &TateElement| -> Result<TateElement, String> {
        let a = &kp.mul(&ring.phi_act(mu_eta)) - mu_eta;
        let b = &twisted_gamma(ring, m, &eta, mu_phi).map_err(err)? - mu_phi;
        Ok((&a - &b).truncate(order))
    };
    let zero = TateElement::zero(field, f, order);
    let slots: Vec<(usize, i64)> = (0..f).flat_map(|j| (lo..0).map(move |s| (j, s))).collect();
    let mut images = Vec::new();
    for which in 0..2 {
        for &(j, s) in &slots {
            let e = TateElement::unit_vector(f, j, LaurentSeries::monomial(field, field.one(), s, order));
            let img = if which == 0 {
                defect(&e, &zero)?
            } else {
                defect(&zero, &e)?
            };
            let mut col: Vec<FieldElement> = (0..f)
                .flat_map(|jj| (p * lo..0).map(move |t| (jj, t)))
                .map(|(jj, t)| img.comp(jj).coeff(t))
                .collect();
            if m.is_trivial() {
                col.push((0..f).fold(field.zero(), |acc, jj| field.add(acc, img.comp(jj).coeff(0))));
            }
            images.push(col);
        }
    }
    let mut map = Matrix::new(images.len());
    for r in 0..images[0].len() {
        map.push_row(images.iter().map(|c| c[r]).collect());
    }
    let kernel = map.nullspace(field);
    let exps = m.phi_exponents();
    let n = slots.len();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let width = (order - lo) as usize;
        let mut phi_c = vec![vec![field.zero(); width]; f];
        let mut eta_c = vec![vec![field.zero(); width]; f];
        for v in &kernel {
            let a = random_element(field, rng);
            for (k, &x) in v.iter().enumerate() {
                let (j, s) = slots[k % n];
                let target = if k < n { &mut phi_c } else { &mut eta_c };
                let slot = &mut target[j][(s - lo) as usize];
                *slot = field.mul_add(*slot, a, x);
            }
        }
        for comp in phi_c.iter_mut() {
            for t in 0..order {
                comp[(t - lo) as usize] = random_element(field, rng);
            }
        }
        let build = |c: Vec<Vec<FieldElement>>| {
            TateElement::new(
                c.into_iter()
                    .map(|c| LaurentSeries::from_coeffs(field, lo, order, c))
                    .collect(),
            )
        };
        let mu_phi = build(phi_c);
        let eta_polar = build(eta_c);
        let rhs = -&defect(&mu_phi, &eta_polar)?;
        let rest = ring
            .solve_twisted_phi(m.phi_twist(&exps), &rhs, m.is_trivial())
            .map_err(err)?;
        let mu_eta = &eta_polar + &rest;
        out.push(Cocycle {
            module: m.clone(),
            mu_phi,
            mu_gen: vec![(eta, mu_eta)],
            label: "admissible".into(),
        });
    }
    Ok(out)
}

/// Parameter cells for the Ext¹ dimension sweep.
fn ext_cells(p: u32, f: usize) -> Vec<(bool, Vec<u32>)> {
    let mut cells = Vec::new();
    let mut push = |c: Vec<u32>| {
        cells.push((true, c.clone()));
        cells.push((false, c));
    };
    push(vec![0; f]);
    push(vec![p - 2; f]);
    push((0..f as u32).map(|i| (i + 1) % p).collect());
    let mut mixed = vec![1; f];
    mixed[0] = p - 1;
    push(mixed);
    if f >= 2 {
        let mut two = vec![0; f];
        two[0] = p - 1;
        two[1] = p - 2;
        push(two);
    }
    cells.retain(|(_, c)| c.iter().any(|&d| d != p - 1));
    cells.sort();
    cells.dedup();
    cells
}

fn criterion_1(scale: u32) -> Outcome {
    let mut summary = Vec::new();
    for p in [3u32, 5] {
        for f in 1..=3usize {
            let start = Instant::now();
            let (field, ring) = ring_for(p, f, scale);
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * p as u64 + f as u64);
            for (unit, c) in ext_cells(p, f) {
                let cc = if unit { field.one() } else { field.primitive() };
                let m = RankOneModule::new(&field, cc, &c).map_err(|e| e.to_string())?;
                let bas = basis(&ring, &m).map_err(|e| format!("{m:?}: {e}"))?;
                let expected = m.ext1_dimension();
                if bas.len() != expected {
                    return Err(format!("{m:?}: basis has {} elements, expected {expected}", bas.len()));
                }
                let mut targets = Vec::new();
                let mut coords = Vec::new();
                for _ in 0..200 {
                    let beta: Vec<FieldElement> = (0..bas.len()).map(|_| random_element(&field, &mut rng)).collect();
                    let b = random_b(&field, f, -(p as i64).pow(f as u32), 4, &mut rng);
                    targets.push(random_cocycle(&ring, &bas, &beta, &b).map_err(|e| e.to_string())?);
                    coords.push(beta);
                }
                let (res, defect) = span_decompose_many(&ring, &bas, &targets, ring.precision().tail_floor)
                    .map_err(|e| e.to_string())?;
                if defect != 0 {
                    return Err(format!("{m:?}: basis classes are dependent (defect {defect})"));
                }
                for (r, beta) in res.iter().zip(&coords) {
                    if *r != DecomposeResult::Coords(beta.clone()) {
                        return Err(format!("{m:?}: random cocycle decomposed as {r:?}, expected {beta:?}"));
                    }
                }
                let free = admissible_cocycles(&ring, &m, -(p as i64).pow(2), 200, &mut rng)?;
                let (res, _) =
                    span_decompose_many(&ring, &bas, &free, ring.precision().tail_floor).map_err(|e| e.to_string())?;
                let mut found = Vec::new();
                for r in res {
                    match r {
                        DecomposeResult::Coords(v) => found.push(v),
                        DecomposeResult::NotInSpan => {
                            return Err(format!("{m:?}: admissible cocycle outside the span"))
                        }
                    }
                }
                if rank_of(&field, &found) != expected {
                    return Err(format!(
                        "{m:?}: admissible cocycles span only {} dimensions",
                        rank_of(&field, &found)
                    ));
                }
                summary.push(format!(
                    "p={p} f={f} C={} c={c:?} dim={}",
                    if unit { "1" } else { "g" },
                    bas.len()
                ));
            }
            eprintln!("  ext1 p={p} f={f}: {:.1}s", start.elapsed().as_secs_f64());
        }
    }
    Ok(summary.join("\n"))
}

fn unit(field: &Field, n: usize, k: usize) -> Vec<FieldElement> {
    let mut v = vec![field.zero(); n];
    v[k] = field.one();
    v
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn fmt_space(field: &Field, rows: &[Vec<FieldElement>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(|&x| field.display(x)).collect::<Vec<_>>().join(" "))
        .collect();
    format!("⟨{}⟩", rows.join("; "))
}

/// Checks that the report for `(J, sign)` spans exactly `expected`.
fn expect(
    field: &Field,
    table: &VjTable,
    j: &[usize],
    sign: Sign,
    expected: &[Vec<FieldElement>],
) -> Result<(), String> {
    let r = table
        .get(&set(j), sign)
        .ok_or_else(|| format!("{:?}: no report for J={j:?} {sign:?}", table.module))?;
    if !r.stable {
        return Err(format!(
            "{:?}: J={j:?} {sign:?} changes with the doubled floor",
            table.module
        ));
    }
    let expected: Vec<Vec<FieldElement>> = expected
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if r.dim != rank_of(field, &expected) || !same_span(field, &r.basis, &expected) {
        return Err(format!(
            "{:?}: V_{j:?} {sign:?} = {} (dim {}), expected {}",
            table.module,
            fmt_space(field, &r.basis),
            r.dim,
            fmt_space(field, &expected)
        ));
    }
    Ok(())
}

/// Signs present for `J`.
fn signs(table: &VjTable, j: &[usize]) -> Vec<Sign> {
    table.reports.iter().filter(|r| r.j == set(j)).map(|r| r.sign).collect()
}

fn table_summary(field: &Field, t: &VjTable) -> String {
    let mut lines = Vec::new();
    for r in &t.reports {
        lines.push(format!(
            "{:?} J={:?} {:?} dim={} {}",
            t.module,
            r.j,
            r.sign,
            r.dim,
            fmt_space(field, &r.basis)
        ));
    }
    lines.push(format!("{:?} coincidences {:?}", t.module, t.coincidences));
    lines.join("\n")
}

fn table_for(ring: &TateRing, m: &RankOneModule, opts: BoundedOptions) -> Result<VjTable, String> {
    let bas = basis(ring, m).map_err(|e| format!("{m:?}: {e}"))?;
    vj_table_with(ring, &bas, ring.precision().tail_floor, opts).map_err(|e| format!("{m:?}: {e}"))
}

fn criterion_2(scale: u32) -> Outcome {
    let (field, ring) = ring_for(5, 3, scale);
    let mut out = Vec::new();
    for cc in [field.one(), field.primitive()] {
        let m = RankOneModule::new(&field, cc, &[1, 2, 3]).map_err(|e| e.to_string())?;
        let t = table_for(&ring, &m, BoundedOptions::default())?;
        for j in phigamma::rankone::all_subsets(3) {
            let js: Vec<usize> = j.iter().copied().collect();
            let expected: Vec<Vec<FieldElement>> = js.iter().map(|&i| unit(&field, 3, (i + 1) % 3)).collect();
            for sign in signs(&t, &js) {
                expect(&field, &t, &js, sign, &expected)?;
            }
        }
        out.push(table_summary(&field, &t));
    }
    let m = RankOneModule::new(&field, field.primitive(), &[3, 3, 3]).map_err(|e| e.to_string())?;
    let t = table_for(&ring, &m, BoundedOptions::default())?;
    let full: Vec<Vec<FieldElement>> = (0..3).map(|k| unit(&field, 3, k)).collect();
    for sign in [Sign::Plus, Sign::Minus] {
        expect(&field, &t, &[0, 1, 2], sign, &full)?;
    }
    out.push(table_summary(&field, &t));
    Ok(out.join("\n"))
}

/// `α_i`: the constant term of `e_i μ_ξ(B_i)`.
fn alphas(ring: &TateRing, m: &RankOneModule) -> Result<Vec<FieldElement>, String> {
    let bas = basis(ring, m).map_err(|e| e.to_string())?;
    (0..ring.f())
        .map(|i| {
            Ok(mu_xi(ring, &bas.cocycles[i], 1)
                .map_err(|e| e.to_string())?
                .comp(i)
                .coeff(0))
        })
        .collect()
}

fn criterion_3(scale: u32) -> Outcome {
    let mut out = Vec::new();
    for p in [3u32, 5] {
        let (field, ring) = ring_for(p, 2, scale);
        let p1 = p - 1;
        for c0 in 0..p {
            for c1 in 0..p {
                if c0 == p1 && c1 == p1 {
                    continue;
                }
                let exceptional = (c0 == 0 && c1 == 0) || (c0 == p - 2 && c1 == p - 2);
                let consts: Vec<FieldElement> = if exceptional {
                    vec![field.primitive()]
                } else {
                    vec![field.one(), field.primitive()]
                };
                for cc in consts {
                    let m = RankOneModule::new(&field, cc, &[c0, c1]).map_err(|e| e.to_string())?;
                    let t = table_for(&ring, &m, BoundedOptions::default())?;
                    let al = alphas(&ring, &m)?;
                    for (i, &ci) in [c0, c1].iter().enumerate() {
                        if ci == p1 {
                            continue;
                        }
                        let s0z = field.mul(field.from_int(ci as i64 + 1), ring.z());
                        let want = if c0 == 0 && c1 == 0 {
                            field.div(s0z, field.sub(cc, field.one())).expect("C ≠ 1")
                        } else {
                            field.neg(s0z)
                        };
                        if al[i] != want {
                            return Err(format!(
                                "{m:?}: α_{i} = {}, expected {}",
                                field.display(al[i]),
                                field.display(want)
                            ));
                        }
                    }
                    let e0 = unit(&field, 2, 0);
                    let e1 = unit(&field, 2, 1);
                    let full = vec![e0.clone(), e1.clone()];
                    let comb1 = || vec![al[1], field.neg(al[0])];
                    let comb0 = || vec![field.mul(cc, al[1]), field.neg(al[0])];
                    for sign in signs(&t, &[0, 1]) {
                        expect(&field, &t, &[0, 1], sign, &full)?;
                    }
                    for sign in signs(&t, &[]) {
                        expect(&field, &t, &[], sign, &[])?;
                    }
                    let zero = c0 == 0 && c1 == 0;
                    let v1 = if zero {
                        None
                    } else if c0 == p1 {
                        Some(e1.clone())
                    } else if c0 > 0 && c1 == 0 {
                        Some(comb1())
                    } else {
                        Some(e0.clone())
                    };
                    let v0 = if zero {
                        None
                    } else if c1 == p1 {
                        Some(e0.clone())
                    } else if c0 == 0 && c1 > 0 {
                        Some(comb0())
                    } else {
                        Some(e1.clone())
                    };
                    match (v1, v0) {
                        (Some(v1), Some(v0)) => {
                            expect(&field, &t, &[1], Sign::Unique, &[v1])?;
                            expect(&field, &t, &[0], Sign::Unique, &[v0])?;
                        }
                        _ => {
                            expect(&field, &t, &[1], Sign::Plus, &[comb1()])?;
                            expect(&field, &t, &[0], Sign::Plus, &[comb0()])?;
                            expect(&field, &t, &[1], Sign::Minus, &[])?;
                            expect(&field, &t, &[0], Sign::Minus, &[])?;
                        }
                    }
                    let coincide = c0 == p1 || c1 == p1;
                    let found = t
                        .coincidences
                        .iter()
                        .any(|&(a, sa, b, sb)| a != b && sa == Sign::Unique && sb == Sign::Unique);
                    if coincide != found {
                        return Err(format!("{m:?}: coincidence V_0 = V_1 is {found}, expected {coincide}"));
                    }
                    out.push(table_summary(&field, &t));
                }
            }
        }
    }
    Ok(out.join("\n"))
}

fn criterion_4(scale: u32) -> Outcome {
    let mut out = Vec::new();
    for p in [3u32, 5] {
        for f in [1usize, 2] {
            let (field, ring) = ring_for(p, f, scale);
            let m = RankOneModule::new(&field, field.one(), &vec![p - 2; f]).map_err(|e| e.to_string())?;
            let t = table_for(&ring, &m, BoundedOptions::default())?;
            let n = f + 1;
            let all: Vec<usize> = (0..f).collect();
            let full: Vec<Vec<FieldElement>> = (0..n).map(|k| unit(&field, n, k)).collect();
            let bis: Vec<Vec<FieldElement>> = (0..f).map(|k| unit(&field, n, k)).collect();
            expect(&field, &t, &all, Sign::Plus, &full)?;
            expect(&field, &t, &all, Sign::Minus, &bis)?;
            for j in phigamma::rankone::all_subsets(f) {
                if j.len() == f {
                    continue;
                }
                let js: Vec<usize> = j.iter().copied().collect();
                let expected: Vec<Vec<FieldElement>> = js.iter().map(|&i| unit(&field, n, (i + 1) % f)).collect();
                for sign in signs(&t, &js) {
                    expect(&field, &t, &js, sign, &expected)?;
                }
            }
            out.push(table_summary(&field, &t));
        }
    }
    Ok(out.join("\n"))
}

fn criterion_5(scale: u32) -> Outcome {
    let mut out = Vec::new();
    for p in [3u32, 5] {
        let (field, ring) = ring_for(p, 2, scale);
        let m = RankOneModule::new(&field, field.one(), &[0, 0]).map_err(|e| e.to_string())?;
        let t = table_for(&ring, &m, BoundedOptions::default())?;
        let u = |k| unit(&field, 3, k);
        for sign in signs(&t, &[0, 1]) {
            expect(&field, &t, &[0, 1], sign, &[u(0), u(1), u(2)])?;
        }
        for i in 0..2 {
            expect(&field, &t, &[i], Sign::Plus, &[u(0), u(1 + i)])?;
            expect(&field, &t, &[i], Sign::Minus, &[u(0)])?;
        }
        for sign in signs(&t, &[]) {
            expect(&field, &t, &[], sign, &[])?;
        }
        out.push(table_summary(&field, &t));
    }
    Ok(out.join("\n"))
}

fn criterion_6(scale: u32) -> Outcome {
    let (field, ring) = ring_for(2, 2, scale);
    let mut out = Vec::new();
    let opts = BoundedOptions::default();
    for c in [[0u32, 1], [1, 0]] {
        for cc in [field.one(), field.primitive()] {
            let m = RankOneModule::new(&field, cc, &c).map_err(|e| e.to_string())?;
            let t = table_for(&ring, &m, opts)?;
            let b = if c == [0, 1] {
                unit(&field, 2, 0)
            } else {
                unit(&field, 2, 1)
            };
            for sign in signs(&t, &[0, 1]) {
                expect(&field, &t, &[0, 1], sign, &[unit(&field, 2, 0), unit(&field, 2, 1)])?;
            }
            for i in 0..2 {
                for sign in signs(&t, &[i]) {
                    expect(&field, &t, &[i], sign, std::slice::from_ref(&b))?;
                }
            }
            for sign in signs(&t, &[]) {
                expect(&field, &t, &[], sign, &[])?;
            }
            out.push(table_summary(&field, &t));
        }
    }
    for cc in [field.primitive(), field.mul(field.primitive(), field.primitive())] {
        let m = RankOneModule::new(&field, cc, &[0, 0]).map_err(|e| e.to_string())?;
        let t = table_for(&ring, &m, opts)?;
        let full = [unit(&field, 2, 0), unit(&field, 2, 1)];
        expect(&field, &t, &[0, 1], Sign::Plus, &full)?;
        expect(&field, &t, &[0, 1], Sign::Minus, &full)?;
        expect(&field, &t, &[1], Sign::Plus, &[vec![field.one(), field.one()]])?;
        expect(&field, &t, &[0], Sign::Plus, &[vec![cc, field.one()]])?;
        for (j, sign) in [
            (vec![1], Sign::Minus),
            (vec![0], Sign::Minus),
            (vec![], Sign::Plus),
            (vec![], Sign::Minus),
        ] {
            expect(&field, &t, &j, sign, &[])?;
        }
        out.push(table_summary(&field, &t));
    }
    let m = RankOneModule::new(&field, field.one(), &[0, 0]).map_err(|e| e.to_string())?;
    let t = table_for(&ring, &m, opts)?;
    let u = |k| unit(&field, 4, k);
    let full = [u(0), u(1), u(2), u(3)];
    expect(&field, &t, &[0, 1], Sign::Plus, &full)?;
    expect(&field, &t, &[0, 1], Sign::Minus, &full)?;
    for i in 0..2 {
        expect(&field, &t, &[i], Sign::Plus, &[u(0), u(1 + i)])?;
        expect(&field, &t, &[i], Sign::Minus, &[u(0)])?;
    }
    expect(&field, &t, &[], Sign::Plus, &[])?;
    expect(&field, &t, &[], Sign::Minus, &[])?;
    out.push(table_summary(&field, &t));
    Ok(out.join("\n"))
}

fn criterion_7(scale: u32) -> Outcome {
    let mut out = Vec::new();
    for lemma in Lemma::ALL {
        let grid: Vec<LemmaParams> = default_grid(lemma)
            .into_iter()
            .map(|p| LemmaParams {
                scale: Some(scale),
                ..p
            })
            .collect();
        let rep = sweep(lemma, &grid).map_err(|e| format!("{lemma}: {e}"))?;
        if rep.failures != 0 {
            let first = &rep.failed[0];
            return Err(format!(
                "{lemma}: {} of {} cases fail, first {:?}",
                rep.failures, rep.cases, first.params
            ));
        }
        out.push(format!("{lemma}: {} cases, 0 failures", rep.cases));
    }
    Ok(out.join("\n"))
}

fn wach_setup(p: u32, f: usize, scale: u32) -> (Field, TateRing, WachContext) {
    let (field, tate) = ring_for(p, f, scale);
    let ring = WittRing::new(&field, tate.precision().padic_depth).expect("witt ring");
    let ctx = WachContext::new(&ring, f, tate.order()).expect("context");
    (field, tate, ctx)
}

fn all_digit_vectors(p: u32, f: usize) -> Vec<Vec<u32>> {
    let mut cs = vec![vec![]];
    for _ in 0..f {
        cs = cs
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..p).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    cs
}

fn criterion_8(scale: u32) -> Outcome {
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        for f in [1usize, 2] {
            let (field, tate, ctx) = wach_setup(p, f, scale);
            let ring = ctx.ring().clone();
            let units = [
                ("1", ring.one()),
                ("1+p", ring.from_int(1 + p as i64)),
                ("teichmuller", ring.teichmuller(field.primitive())),
            ];
            let mut cells = 0;
            for c in all_digit_vectors(p, f) {
                for (name, ct) in &units {
                    let n = ctx
                        .build_rank1(ct, &c, &tate.generators())
                        .map_err(|e| format!("p={p} c={c:?} C̃={name}: {e}"))?;
                    let rep = reduce_mod_p(&n, &tate).map_err(|e| format!("p={p} c={c:?} C̃={name}: {e}"))?;
                    if !rep.matched {
                        return Err(format!(
                            "p={p} f={f} c={c:?} C̃={name}: reduction does not match: {rep:?}"
                        ));
                    }
                    cells += 1;
                }
            }
            out.push(format!("p={p} f={f}: {cells} cells MATCH"));
        }
    }
    Ok(out.join("\n"))
}

fn check_instance(ctx: &WachContext, lat: &ExtensionLattice, exact: bool) -> Result<SaturationReport, String> {
    let st = lat.module.check(ctx).map_err(|e| format!("{}: {e}", lat.label))?;
    if !(st.commutes && st.gamma_trivial_mod_pi && st.finite_height) {
        return Err(format!("{}: not a Wach lattice: {st:?}", lat.label));
    }
    let rep = saturation_check(&lat.reduce().map_err(|e| e.to_string())?).map_err(|e| format!("{}: {e}", lat.label))?;
    if !rep.identities_hold {
        let bad: Vec<_> = rep
            .identities
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name.clone())
            .collect();
        return Err(format!("{}: identities fail: {bad:?}", lat.label));
    }
    if rep.exact != exact {
        return Err(format!("{}: exact = {}, expected {exact}", lat.label, rep.exact));
    }
    Ok(rep)
}

fn criterion_9(scale: u32) -> Outcome {
    let mut out = Vec::new();
    for p in [2u32, 3, 5] {
        for f in [1usize, 2] {
            let (field, tate, _) = wach_setup(p, f, scale);
            let depth = tate.precision().padic_depth;
            // Each division by q costs depth·(p−1) terms; twisted determinants reach q^{4p+2}.
            let order = tate.order().max((depth * (p - 1) * (4 * p + 2)) as i64);
            let ring = WittRing::new(&field, depth).expect("witt ring");
            let ctx = WachContext::new(&ring, f, order).expect("context");
            let gens = tate.generators();
            let tw_unit = ring.teichmuller(field.primitive());
            let twists: Vec<Vec<u32>> = all_digit_vectors(p, f)
                .into_iter()
                .filter(|c| c.iter().any(|&d| d > 0))
                .take(4)
                .collect();
            let mut count = 0;
            for s in [1u32, 2] {
                let lat = ExtensionLattice::nonsplit_example(&ctx, s, &gens).map_err(|e| e.to_string())?;
                let rep = check_instance(&ctx, &lat, false)?;
                let gap = (p as i64 - 1) * s as i64;
                if rep.gap_exponents != vec![gap; f] || rep.t != vec![s as i64; f] {
                    return Err(format!("{}: gap {:?}, t {:?}", lat.label, rep.gap_exponents, rep.t));
                }
                if s == 1 {
                    out.push(format!(
                        "p={p} f={f} nonsplit: exact=false gap={:?} t={:?} b'={:?} a'={:?}",
                        rep.gap_exponents, rep.t, rep.b_prime, rep.a_prime
                    ));
                }
                count += 1;
                for c in &twists {
                    let n = ctx.build_rank1(&tw_unit, c, &gens).map_err(|e| e.to_string())?;
                    let tw = lat.twist(&n).map_err(|e| e.to_string())?;
                    check_instance(&ctx, &tw, false)?;
                    count += 1;
                }
            }
            let cs = all_digit_vectors(p, f);
            for (k, c1) in cs.iter().enumerate().step_by(2) {
                let c2 = &cs[(k * 7 + 3) % cs.len()];
                let n1 = ctx.build_rank1(&ring.one(), c1, &gens).map_err(|e| e.to_string())?;
                let n2 = ctx.build_rank1(&tw_unit, c2, &gens).map_err(|e| e.to_string())?;
                let lat = ExtensionLattice::split(&n1, &n2).map_err(|e| e.to_string())?;
                let rep = check_instance(&ctx, &lat, true)?;
                if rep.t.iter().any(|&t| t != 0) {
                    return Err(format!("{}: nonzero t {:?}", lat.label, rep.t));
                }
                count += 1;
                if let Some(c) = twists.first() {
                    let n = ctx.build_rank1(&ring.one(), c, &gens).map_err(|e| e.to_string())?;
                    check_instance(&ctx, &lat.twist(&n).map_err(|e| e.to_string())?, true)?;
                    count += 1;
                }
            }
            out.push(format!("p={p} f={f}: {count} rank-two instances checked"));
        }
    }
    Ok(out.join("\n"))
}

fn main() {
    let criteria: Vec<(&str, fn(u32) -> Outcome)> = vec![
        ("1 Ext1 dimensions", criterion_1),
        ("2 generic V_J", criterion_2),
        ("3 f=2 tables", criterion_3),
        ("4 cyclotomic case", criterion_4),
        ("5 trivial case", criterion_5),
        ("6 p=2 tables", criterion_6),
        ("7 lemma oracle sweeps", criterion_7),
        ("8 Wach reduction", criterion_8),
        ("9 saturation and rank-two identities", criterion_9),
    ];
    let mut failed = false;
    let mut summaries = Vec::new();
    for (name, run) in &criteria {
        let start = Instant::now();
        match run(1) {
            Ok(summary) => {
                println!("PASS criterion {name} ({:.1}s)", start.elapsed().as_secs_f64());
                summaries.push(Some(summary));
            }
            Err(e) => {
                failed = true;
                println!("FAIL criterion {name}: {e}");
                summaries.push(None);
            }
        }
    }
    let start = Instant::now();
    let mut unstable = Vec::new();
    for ((name, run), base) in criteria.iter().zip(&summaries) {
        let t = Instant::now();
        let rerun = run(2);
        eprintln!("  scale 2 {name}: {:.1}s", t.elapsed().as_secs_f64());
        match (base, rerun) {
            (Some(a), Ok(b)) if *a == b => {}
            (Some(_), Ok(_)) => unstable.push(format!("{name}: results differ at scale 2")),
            (Some(_), Err(e)) => unstable.push(format!("{name}: fails at scale 2: {e}")),
            (None, _) => unstable.push(format!("{name}: failed at scale 1")),
        }
    }
    if unstable.is_empty() {
        println!(
            "PASS criterion 10 stability at scale 2 ({:.1}s)",
            start.elapsed().as_secs_f64()
        );
    } else {
        failed = true;
        println!("FAIL criterion 10 stability at scale 2: {}", unstable.join("; "));
    }
    if failed {
        std::process::exit(1);
    }
}
