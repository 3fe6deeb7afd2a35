//! Command-line front end: classify rank-one modules, tabulate `V_J`, run the
//! Wach-module diagnostics and the lemma oracles, emitting JSON.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{IsTerminal, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use phigamma::bounded::{vj_table, BoundedOptions, SubspaceReport, VjTable};
use phigamma::oracle::{default_grid, sweep, Lemma, LemmaParams};
use phigamma::tate::default_chi_eta;
use phigamma::wach::{
    lift_is_open, reduce_mod_p, saturation_check, ExtensionLattice, Mat2, PadicSeries, WachContext, WachRankTwo,
    WittRing,
};
use phigamma::{
    Error, Field, FieldElement, FieldSpec, GammaElement, PadicInteger, Precision, RankOneModule, Sign, TateRing,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "phigamma",
    version,
    about = "Rank-one and rank-two (φ, Γ)-module computations"
)]
struct Cli {
    /// JSON job configuration; read from stdin when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Multiply every precision window by this factor.
    #[arg(long, global = true, default_value_t = 1)]
    precision_scale: u32,
    /// For p = 2, also require μ_ξ ∈ π²F[[π]] in the boundedness test.
    #[arg(long, global = true)]
    strict_p2: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form, Σ values, inertial exponents and dim Ext¹ of M_{Cc}.
    Classify,
    /// The bounded subspaces V_J (and V_J^±) with bases and coincidences.
    VjTable,
    /// Wach-module diagnostics.
    Wach {
        #[command(subcommand)]
        action: WachAction,
    },
    /// Run the lemma oracles over their default or a narrowed grid.
    Verify,
}

#[derive(Subcommand)]
enum WachAction {
    /// Reduce rank-one Wach modules mod p and compare with M_{Cc}.
    Reduce,
    /// Saturation report for the non-split lattice f_1 = p^{-1}(e_1 − π^{(p−1)s}e_2).
    #[command(alias = "nonsplit")]
    Example71,
    /// Saturation report for a rank-two lattice read from a JSON file.
    Saturate {
        /// Path to the lattice description.
        file: PathBuf,
    },
}

/// A field element: an integer, a coordinate vector, or `"g"` / `"g^k"` for
/// powers of the primitive element.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Literal {
    Int(i64),
    Coords(Vec<i64>),
    Text(String),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u32>>,
    #[serde(default, rename = "C", skip_serializing_if = "Option::is_none")]
    c_const: Option<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chi_eta: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    precision: Option<Precision>,
    #[serde(default)]
    strict_p2: bool,
    #[serde(default)]
    stability_rerun: bool,
    /// Wach: coordinates of C̃ over W(F)/p^N.
    #[serde(default, rename = "Ctilde", skip_serializing_if = "Option::is_none")]
    ctilde: Option<Vec<i64>>,
    /// Wach example: the exponent is (p−1)s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<u32>,
    /// Verify: lemma names (default: all).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lemmas: Option<Vec<String>>,
    /// Verify: explicit parameter points replacing the default grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<LemmaParams>>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) => 2,
            Error::Precision(_) => 4,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

type Outcome = Result<(Value, bool, Value), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_config(cli: &Cli) -> Result<JobConfig, Failure> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?,
        None if std::io::stdin().is_terminal() => String::new(),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| config_error(e.to_string()))?;
            s
        }
    };
    if text.trim().is_empty() {
        return Ok(JobConfig::default());
    }
    let mut cfg: JobConfig = serde_json::from_str(&text).map_err(|e| config_error(format!("config: {e}")))?;
    cfg.strict_p2 |= cli.strict_p2;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = read_config(cli)?;
    let scale = cli.precision_scale.max(1);
    let start = Instant::now();
    let (name, (result, stable, window)) = match &cli.command {
        Command::Classify => ("classify", classify(&cfg, scale)?),
        Command::VjTable => ("vj-table", vj(&cfg, scale)?),
        Command::Wach {
            action: WachAction::Reduce,
        } => ("wach reduce", wach_reduce(&cfg, scale)?),
        Command::Wach {
            action: WachAction::Example71,
        } => ("wach example71", wach_example(&cfg, scale)?),
        Command::Wach {
            action: WachAction::Saturate { file },
        } => ("wach saturate", wach_saturate(file)?),
        Command::Verify => ("verify", verify(&cfg, scale)?),
    };
    let mut echo = serde_json::to_value(&cfg).expect("config serializes");
    if let (Some(p), Value::Object(map)) = (cfg.p, &mut echo) {
        map.entry("chi_eta").or_insert(json!(default_chi_eta(p) as i64));
    }
    let out = json!({
        "schema_version": SCHEMA_VERSION,
        "command": name,
        "config_echo": echo,
        "precision_scale": scale,
        "window": window,
        "stable": stable,
        "result": result,
        "runtime_ms": start.elapsed().as_millis() as u64,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("JSON output"));
    Ok(if stable { 0 } else { 3 })
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| config_error(format!("config needs {name}")))
}

fn build_field(cfg: &JobConfig) -> Result<Field, Failure> {
    let p = need(&cfg.p, "p")?;
    let f = match (cfg.f, &cfg.c) {
        (Some(f), _) => f as u32,
        (None, Some(c)) => c.len() as u32,
        (None, None) => return Err(config_error("config needs f")),
    };
    let m = cfg.m.unwrap_or(f);
    let field = match &cfg.modulus {
        Some(modulus) => Field::new(FieldSpec {
            p,
            f,
            m,
            modulus: modulus.clone(),
        })?,
        None => Field::with_degrees(p, f, m)?,
    };
    Ok(field)
}

fn precision_for(cfg: &JobConfig, field: &Field, scale: u32) -> Precision {
    cfg.precision
        .unwrap_or_else(|| Precision::default_for(field.p(), field.f()))
        .scaled(scale)
}

fn build_ring(cfg: &JobConfig, field: &Field, scale: u32) -> Result<TateRing, Failure> {
    let chi = cfg.chi_eta.map(|c| PadicInteger::from_int(field.p() as u64, c as i128));
    Ok(TateRing::with_chi_eta(field, precision_for(cfg, field, scale), chi)?)
}

fn parse_literal(field: &Field, lit: &Literal) -> Result<FieldElement, Failure> {
    match lit {
        Literal::Int(n) => Ok(field.from_int(*n)),
        Literal::Coords(v) => Ok(field.from_coeffs(v)?),
        Literal::Text(t) => {
            let k = match t.trim() {
                "g" => 1,
                s => s
                    .strip_prefix("g^")
                    .and_then(|e| e.parse::<i64>().ok())
                    .ok_or_else(|| config_error(format!("cannot read field element {t:?}")))?,
            };
            field
                .pow(field.primitive(), k)
                .ok_or_else(|| config_error("power of the primitive element"))
        }
    }
}

fn build_module(cfg: &JobConfig, field: &Field) -> Result<RankOneModule, Failure> {
    let c = need(&cfg.c, "c")?;
    if c.len() != field.f() {
        return Err(config_error(format!("c must have f = {} entries", field.f())));
    }
    let cc = match &cfg.c_const {
        Some(lit) => parse_literal(field, lit)?,
        None => field.one(),
    };
    if cc.is_zero() {
        return Err(config_error("C must be nonzero"));
    }
    let n = phigamma::rankone::twisted_digit_sum(&c, field.p(), 0);
    Ok(RankOneModule::normal_form(field, cc, n)?)
}

fn coords(field: &Field, x: FieldElement) -> Vec<u32> {
    field.coeffs(x)
}

fn window_of(p: &Precision) -> Value {
    json!({ "pi_order": p.pi_order, "tail_floor": p.tail_floor, "padic_depth": p.padic_depth })
}

fn classify(cfg: &JobConfig, scale: u32) -> Outcome {
    let field = build_field(cfg)?;
    let m = build_module(cfg, &field)?;
    let f = m.f();
    let result = json!({
        "normal_form": { "C": coords(&field, m.c_const()), "c": m.digits() },
        "sigma": (0..f).map(|l| m.sigma(l)).collect::<Vec<_>>(),
        "omega_exponents": m.fundamental_character_exponents(),
        "dim_ext1": m.ext1_dimension(),
        "trivial": m.is_trivial(),
        "cyclotomic": m.is_cyclotomic(),
    });
    Ok((result, true, window_of(&precision_for(cfg, &field, scale))))
}

fn j_label(j: &BTreeSet<usize>, f: usize) -> String {
    if j.len() == f {
        "S".into()
    } else if j.is_empty() {
        "∅".into()
    } else {
        format!("{{{}}}", j.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn sign_suffix(s: Sign) -> &'static str {
    match s {
        Sign::Unique => "",
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}

fn report_json(field: &Field, r: &SubspaceReport) -> Value {
    json!({
        "J": r.j.iter().collect::<Vec<_>>(),
        "sign": format!("{:?}", r.sign).to_lowercase(),
        "a": r.profile.a,
        "b": r.profile.b,
        "dim": r.dim,
        "basis": r.basis.iter().map(|row| row.iter().map(|&x| coords(field, x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "window": { "tail_floor": r.window.0, "pi_order": r.window.1 },
        "stable": r.stable,
    })
}

fn same_table(a: &VjTable, b: &VjTable) -> bool {
    a.reports.len() == b.reports.len()
        && a.reports
            .iter()
            .zip(&b.reports)
            .all(|(x, y)| x.j == y.j && x.sign == y.sign && x.basis == y.basis)
}

fn vj(cfg: &JobConfig, scale: u32) -> Outcome {
    let field = build_field(cfg)?;
    let m = build_module(cfg, &field)?;
    let opts = BoundedOptions {
        strict_p2: cfg.strict_p2,
    };
    let mut ring = build_ring(cfg, &field, scale)?;
    let mut table = vj_table(&ring, &m, ring.precision().tail_floor, opts)?;
    let mut stable = table.reports.iter().all(|r| r.stable);
    let mut rerun = Value::Null;
    if !stable || cfg.stability_rerun {
        let doubled = build_ring(cfg, &field, 2 * scale)?;
        let t2 = vj_table(&doubled, &m, doubled.precision().tail_floor, opts)?;
        let agree = same_table(&table, &t2);
        rerun = json!({ "scale": 2 * scale, "agrees": agree });
        if !stable {
            stable = t2.reports.iter().all(|r| r.stable);
            ring = doubled;
            table = t2;
        } else {
            stable = agree;
        }
    }
    let f = m.f();
    let mut dims = BTreeMap::new();
    for r in &table.reports {
        dims.insert(format!("{}{}", j_label(&r.j, f), sign_suffix(r.sign)), r.dim);
    }
    let mut matrix = vec![vec![false; f]; f];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, _, k, _) in &table.coincidences {
        matrix[i][k] = true;
        matrix[k][i] = true;
    }
    let result = json!({
        "module": { "C": coords(&field, m.c_const()), "c": m.digits() },
        "basis_labels": table.basis_labels,
        "dims": dims,
        "records": table.reports.iter().map(|r| report_json(&field, r)).collect::<Vec<_>>(),
        "coincidences": table.coincidences.iter().map(|&(i, si, k, sk)| json!({
            "i": i, "sign_i": format!("{si:?}").to_lowercase(), "k": k, "sign_k": format!("{sk:?}").to_lowercase()
        })).collect::<Vec<_>>(),
        "coincidence_matrix": matrix,
        "rerun": rerun,
    });
    Ok((result, stable, window_of(&ring.precision())))
}

fn digit_vectors(p: u32, f: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..f {
        out = out
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
    out
}

fn wach_setup(p: u32, f: usize, cfg: &JobConfig, scale: u32) -> Result<(Field, TateRing, WachContext), Failure> {
    let sub = JobConfig {
        p: Some(p),
        f: Some(f),
        ..cfg.clone()
    };
    let field = build_field(&sub)?;
    let tate = build_ring(&sub, &field, scale)?;
    let ring = WittRing::new(&field, tate.precision().padic_depth)?;
    let ctx = WachContext::new(&ring, f, tate.order())?;
    Ok((field, tate, ctx))
}

fn wach_reduce(cfg: &JobConfig, scale: u32) -> Outcome {
    let grid: Vec<(u32, usize)> = match (cfg.p, cfg.f) {
        (Some(p), Some(f)) => vec![(p, f)],
        (Some(p), None) => vec![(p, 1), (p, 2)],
        (None, _) => [2, 3, 5].into_iter().flat_map(|p| [(p, 1), (p, 2)]).collect(),
    };
    let mut cells = Vec::new();
    let mut all = true;
    let mut window = Value::Null;
    for (p, f) in grid {
        let (field, tate, ctx) = wach_setup(p, f, cfg, scale)?;
        window = window_of(&tate.precision());
        let ring = ctx.ring().clone();
        let units: Vec<(String, _)> = match &cfg.ctilde {
            Some(v) => vec![(format!("{v:?}"), ring.from_coords(v)?)],
            None => vec![
                ("1".into(), ring.one()),
                ("1+p".into(), ring.from_int(1 + p as i64)),
                ("teichmuller".into(), ring.teichmuller(field.primitive())),
            ],
        };
        let cs: Vec<Vec<u32>> = match &cfg.c {
            Some(c) => vec![c
                .iter()
                .map(|&d| u32::try_from(d).ok().filter(|&d| d < p))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| config_error("Wach digits must lie in [0, p−1]"))?],
            None => digit_vectors(p, f),
        };
        for c in &cs {
            for (name, ct) in &units {
                let n = ctx.build_rank1(ct, c, &tate.generators())?;
                let rep = reduce_mod_p(&n, &tate)?;
                all &= rep.matched;
                cells.push(json!({
                    "p": p, "f": f, "c": c, "Ctilde": name,
                    "verdict": if rep.matched { "MATCH" } else { "MISMATCH" },
                    "report": rep,
                }));
            }
        }
    }
    Ok((json!({ "cells": cells, "all_match": all }), true, window))
}

fn saturation_json(lat: &ExtensionLattice, p: u32, ctx: Option<&WachContext>) -> Result<Value, Failure> {
    let structure = match ctx {
        Some(ctx) => Some(lat.module.check(ctx)?),
        None => None,
    };
    let rep = saturation_check(&lat.reduce()?)?;
    let mut v = json!({
        "label": lat.label,
        "exact": rep.exact,
        "t": rep.t,
        "gap_exponents": rep.gap_exponents,
        "a": rep.a,
        "b": rep.b,
        "a_prime": rep.a_prime,
        "b_prime": rep.b_prime,
        "identities": rep.identities,
        "identities_hold": rep.identities_hold,
        "structure": structure,
    });
    if lift_is_open(p, &rep.a, &rep.b) {
        v["b_nr_lift"] = json!("open (unresolved)");
    }
    Ok(v)
}

fn wach_example(cfg: &JobConfig, scale: u32) -> Outcome {
    let p = cfg.p.unwrap_or(3);
    let f = cfg.f.unwrap_or(1);
    let s = cfg.s.unwrap_or(1);
    let (_, tate, ctx) = wach_setup(p, f, cfg, scale)?;
    let lat = ExtensionLattice::nonsplit_example(&ctx, s, &tate.generators())?;
    let mut v = saturation_json(&lat, p, Some(&ctx))?;
    let gap = v["gap_exponents"][0].clone();
    v["N1prime_gap_exponent"] = gap;
    Ok((v, true, window_of(&tate.precision())))
}

/// `{exponent: coordinates}` for one power series.
type SeriesSpec = BTreeMap<String, Vec<i64>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GammaSpec {
    chi: i64,
    matrices: Vec<[[SeriesSpec; 2]; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    p: u32,
    f: usize,
    #[serde(default)]
    m: Option<u32>,
    #[serde(default)]
    modulus: Option<Vec<u32>>,
    depth: u32,
    order: i64,
    phi: Vec<[[SeriesSpec; 2]; 2]>,
    #[serde(default)]
    gamma: Vec<GammaSpec>,
    sub: Vec<[SeriesSpec; 2]>,
    a: Vec<i64>,
    b: Vec<i64>,
    #[serde(default)]
    weight_bound: Option<u32>,
}

fn series_from(ring: &WittRing, input: &SeriesSpec, order: i64) -> Result<PadicSeries, Failure> {
    let mut terms = Vec::new();
    for (k, v) in input {
        let e: i64 = k
            .trim()
            .parse()
            .map_err(|_| config_error(format!("bad exponent {k:?}")))?;
        if e < 0 {
            return Err(config_error("lattice entries must be power series"));
        }
        terms.push((e, ring.from_coords(v)?));
    }
    Ok(PadicSeries::from_terms(ring, &terms, order))
}

fn matrix_from(ring: &WittRing, m: &[[SeriesSpec; 2]; 2], order: i64) -> Result<Mat2, Failure> {
    let e = |r: usize, c: usize| series_from(ring, &m[r][c], order);
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

fn wach_saturate(path: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    let input: LatticeFile = serde_json::from_str(&text).map_err(|e| config_error(format!("lattice file: {e}")))?;
    let f = input.f;
    if input.phi.len() != f || input.sub.len() != f || input.a.len() != f || input.b.len() != f {
        return Err(config_error("phi, sub, a and b need one entry per embedding"));
    }
    let cfg = JobConfig {
        p: Some(input.p),
        f: Some(f),
        m: input.m,
        modulus: input.modulus.clone(),
        ..Default::default()
    };
    let field = build_field(&cfg)?;
    let ring = WittRing::new(&field, input.depth)?;
    let order = input.order;
    let phi = input
        .phi
        .iter()
        .map(|m| matrix_from(&ring, m, order))
        .collect::<Result<Vec<_>, _>>()?;
    let mut gamma = Vec::new();
    for g in &input.gamma {
        if g.matrices.len() != f {
            return Err(config_error("each gamma entry needs one matrix per embedding"));
        }
        let mats = g
            .matrices
            .iter()
            .map(|m| matrix_from(&ring, m, order))
            .collect::<Result<Vec<_>, _>>()?;
        gamma.push((GammaElement::from_int(input.p, g.chi as i128)?, mats));
    }
    let sub = input
        .sub
        .iter()
        .map(|v| Ok([series_from(&ring, &v[0], order)?, series_from(&ring, &v[1], order)?]))
        .collect::<Result<Vec<_>, Failure>>()?;
    let weight_bound = input
        .weight_bound
        .unwrap_or_else(|| input.a.iter().chain(&input.b).copied().max().unwrap_or(0).max(0) as u32);
    let lat = ExtensionLattice {
        label: path.display().to_string(),
        module: WachRankTwo {
            labels: ["e1".into(), "e2".into()],
            phi,
            gamma,
            weight_bound,
        },
        sub,
        a: input.a.clone(),
        b: input.b.clone(),
    };
    let ctx = WachContext::new(&ring, f, order)?;
    let v = saturation_json(&lat, input.p, Some(&ctx))?;
    if !v["structure"]["finite_height"].as_bool().unwrap_or(false) {
        return Err(config_error(
            "input lattice is not of finite height for the given weight bound",
        ));
    }
    let window = json!({ "pi_order": order, "padic_depth": input.depth });
    Ok((v, true, window))
}

fn verify(cfg: &JobConfig, scale: u32) -> Outcome {
    let lemmas: Vec<Lemma> = match &cfg.lemmas {
        Some(names) => names.iter().map(|n| n.parse::<Lemma>()).collect::<Result<_, _>>()?,
        None => Lemma::ALL.to_vec(),
    };
    let mut out = BTreeMap::new();
    let mut total = 0;
    for lemma in lemmas {
        let grid: Vec<LemmaParams> = match &cfg.params {
            Some(ps) => ps.clone(),
            None => default_grid(lemma)
                .into_iter()
                .filter(|g| cfg.p.map_or(true, |p| g.p == p) && cfg.f.map_or(true, |f| g.f == f))
                .collect(),
        };
        let grid: Vec<LemmaParams> = grid
            .into_iter()
            .map(|g| LemmaParams {
                scale: Some(g.scale.unwrap_or(1) * scale),
                ..g
            })
            .collect();
        let rep = sweep(lemma, &grid)?;
        total += rep.failures;
        out.insert(
            lemma.name().to_string(),
            serde_json::to_value(&rep).expect("report serializes"),
        );
    }
    Ok((
        json!({ "lemmas": out, "failures": total }),
        true,
        json!({ "scale": scale }),
    ))
}
