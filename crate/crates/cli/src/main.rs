use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use verlinde_core::cluster::{
    build_initial_seed, principal_components, quiver_to_dot, registry_to_json, relations_to_text, HeightChoice, Limits,
};
use verlinde_core::data::branching_for;
use verlinde_core::fusion::{qdim_finite, FusionRing, VerlindeElement, S_MATRIX_GATE};
use verlinde_core::repring::{RepRing, RepRingElement};
use verlinde_core::verifier::{self, cluster_context, SeedSource, VerifyOptions};
use verlinde_core::weyl::{alcove_project, check_dominant, lift_to_level, AlcoveResult};
use verlinde_core::{CartanDatum, CartanType, Error};

#[derive(Parser)]
#[command(name = "verlinde", version, about = "Verlinde rings, alcove projection and cluster images of KR modules")]
struct Cli {
    /// machine-readable output where a text form also exists
    #[arg(long, global = true)]
    json: bool,
    /// write the output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// worker threads (computations currently run on one)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan data of a simple Lie algebra
    Cartan {
        #[command(subcommand)]
        cmd: CartanCmd,
    },
    /// Signed projection of L(w) into the level-k alcove
    Project {
        #[arg(value_name = "TYPE")]
        ty: String,
        k: i64,
        /// comma-separated fundamental-weight coordinates, e.g. 4,4
        #[arg(allow_hyphen_values = true)]
        weight: String,
    },
    /// The level-k Verlinde ring
    Fusion {
        #[command(subcommand)]
        cmd: FusionCmd,
    },
    /// The finite representation ring
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// Kirillov-Reshetikhin modules
    Kr {
        #[command(subcommand)]
        cmd: KrCmd,
    },
    /// Initial seeds and finite-type enumeration of C_l
    Cluster {
        #[command(subcommand)]
        cmd: ClusterCmd,
    },
    /// Compute and certify the level-k images of every cluster variable of C_{k-1}
    Verify {
        #[arg(value_name = "TYPE")]
        ty: String,
        k: i64,
        #[arg(long, value_enum, default_value = "pipeline")]
        seed_source: Source,
        #[arg(long, value_enum, default_value = "md")]
        report: ReportFormat,
        #[arg(long, allow_hyphen_values = true, value_name = "A,B,...")]
        height: Option<String>,
    },
    /// Worked examples and closed-form families
    Examples {
        #[command(subcommand)]
        cmd: ExampleCmd,
    },
}

#[derive(Subcommand)]
enum CartanCmd {
    /// Marks, comarks, Coxeter numbers, d_i and t_i
    Info {
        #[arg(value_name = "TYPE")]
        ty: String,
    },
}

#[derive(Subcommand)]
enum FusionCmd {
    /// P_k^+ in basis order
    Basis {
        #[arg(value_name = "TYPE")]
        ty: String,
        k: i64,
    },
    /// Fusion product of two basis classes
    Mul {
        #[arg(value_name = "TYPE")]
        ty: String,
        k: i64,
        w1: String,
        w2: String,
    },
    /// Quantum dimension of a finite or affine weight
    Qdim {
        #[arg(value_name = "TYPE")]
        ty: String,
        k: i64,
        #[arg(allow_hyphen_values = true)]
        w: String,
    },
    /// Numeric modular S-matrix
    Smatrix {
        #[arg(value_name = "TYPE")]
        ty: String,
        k: i64,
        /// ignore the Weyl-group size gate
        #[arg(long)]
        force: bool,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Dimension of L(w)
    Dim {
        #[arg(value_name = "TYPE")]
        ty: String,
        w: String,
    },
    /// Dominant weight multiplicities of L(w)
    Char {
        #[arg(value_name = "TYPE")]
        ty: String,
        w: String,
    },
    /// Decomposition of L(w1) (x) L(w2)
    Tensor {
        #[arg(value_name = "TYPE")]
        ty: String,
        w1: String,
        w2: String,
    },
}

#[derive(Subcommand)]
enum KrCmd {
    /// Classical decomposition of W^(i)_m
    Restrict {
        #[arg(value_name = "TYPE")]
        ty: String,
        i: usize,
        m: i64,
    },
}

#[derive(Subcommand)]
enum ClusterCmd {
    /// Vertices, frozen set and arrows of the initial seed
    Init {
        #[arg(value_name = "TYPE")]
        ty: String,
        ell: i64,
        #[arg(long, allow_hyphen_values = true, value_name = "A,B,...")]
        height: Option<String>,
    },
    /// All cluster variables, clusters and exchange relations
    Enumerate {
        #[arg(value_name = "TYPE")]
        ty: String,
        ell: i64,
        #[arg(long, allow_hyphen_values = true, value_name = "A,B,...")]
        height: Option<String>,
    },
    /// Initial quiver as DOT, variables as JSON, or relations as text
    Export {
        #[arg(value_name = "TYPE")]
        ty: String,
        ell: i64,
        #[arg(long, value_enum, default_value = "txt")]
        format: ExportFormat,
        #[arg(long, allow_hyphen_values = true, value_name = "A,B,...")]
        height: Option<String>,
    },
}

#[derive(Subcommand)]
enum ExampleCmd {
    /// The A2 module at level 6
    A2,
    /// The B3 module at level 3
    B3,
    /// Closed-form images for D_n at level 2
    Dn { n: usize },
    /// Both worked examples
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Pipeline,
    Data,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
    Txt,
}

enum Failure {
    /// bad arguments: exit 2
    Usage(String),
    /// a computation or data error: exit 1
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedType(_)
            | Error::Parse { .. }
            | Error::WeightLength { .. }
            | Error::NotDominant(_)
            | Error::Level { .. }
            | Error::LevelMismatch { .. }
            | Error::Height(_)
            | Error::NotExchangeable(_)
            | Error::SMatrixGate { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// What a command produced: the text to emit and whether its certifications hold.
struct Output {
    body: String,
    passed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, passed: true }
    }
}

/// Compact JSON unless a text form was asked for and exists.
fn emit(json: bool, value: Value, text: Option<String>) -> Output {
    match text {
        Some(t) if !json => Output::ok(t),
        _ => Output::ok(value.to_string()),
    }
}

fn datum(ty: &str) -> Result<Arc<CartanDatum>, Failure> {
    let t: CartanType = ty.parse()?;
    Ok(Arc::new(CartanDatum::build(t)?))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("not a weight: {s:?}"))))
        .collect()
}

fn height(s: &Option<String>) -> Result<HeightChoice, Failure> {
    Ok(match s {
        Some(h) => HeightChoice::Explicit(parse_ints(h)?),
        None => HeightChoice::Default,
    })
}

/// A basis index of P_k^+ from finite (lifted to level k) or affine coordinates.
fn basis_index(d: &CartanDatum, f: &FusionRing, k: i64, s: &str) -> Result<usize, Failure> {
    let w = parse_ints(s)?;
    let lam = if w.len() == d.rank() { lift_to_level(d, &w, k) } else { w };
    Ok(f.index_of(&lam)?)
}

fn terms_json(f: &FusionRing, v: &VerlindeElement) -> Value {
    let terms: Vec<Value> = v
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| json!({"coeff": c, "weight": f.basis[i]}))
        .collect();
    Value::Array(terms)
}

fn rep_terms_json(r: &RepRingElement) -> Value {
    Value::Array(r.terms.iter().rev().map(|(w, m)| json!({"weight": w, "mult": m})).collect())
}

fn rep_terms_text(r: &RepRingElement) -> String {
    let parts: Vec<String> = r
        .terms
        .iter()
        .rev()
        .map(|(w, m)| if *m == 1 { format!("L{w:?}") } else { format!("{m} L{w:?}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn cartan_info(json: bool, ty: &str) -> Result<Output, Failure> {
    let d = datum(ty)?;
    let v = json!({
        "type": d.ty.to_string(),
        "rank": d.rank(),
        "cartan": d.cartan,
        "marks": d.marks,
        "comarks": d.comarks,
        "h": d.coxeter_h,
        "h_vee": d.dual_coxeter_hvee,
        "d": d.d,
        "d_i": d.fold_degree,
        "t": d.t,
        "positive_roots": d.positive_roots.len(),
        "weyl_order": d.weyl_order().to_string(),
    });
    let mut text = format!("type       {}\nrank       {}\n", d.ty, d.rank());
    text.push_str(&format!("marks      {:?}\ncomarks    {:?}\n", d.marks, d.comarks));
    text.push_str(&format!("h          {}\nh_vee      {}\n", d.coxeter_h, d.dual_coxeter_hvee));
    text.push_str(&format!("d          {}\nd_i        {:?}\nt_i        {:?}\n", d.d, d.fold_degree, d.t));
    text.push_str(&format!("|W|        {}\n", d.weyl_order()));
    Ok(emit(json, v, Some(text)))
}

fn project(ty: &str, k: i64, w: &str) -> Result<Output, Failure> {
    let d = datum(ty)?;
    let w = parse_ints(w)?;
    let v = match alcove_project(&d, &w, k)? {
        AlcoveResult::Null => json!({"status": "null"}),
        AlcoveResult::Signed { sign, weight } => json!({"status": "signed", "sign": sign, "weight": weight}),
    };
    Ok(Output::ok(v.to_string()))
}

fn fusion(json: bool, cmd: &FusionCmd) -> Result<Output, Failure> {
    match cmd {
        FusionCmd::Basis { ty, k } => {
            let f = FusionRing::new(datum(ty)?, *k)?;
            let text = f.basis.iter().enumerate().map(|(i, w)| format!("V_{i}  {w:?}\n")).collect();
            Ok(emit(json, json!({"type": ty, "k": k, "basis": f.basis}), Some(text)))
        }
        FusionCmd::Mul { ty, k, w1, w2 } => {
            let d = datum(ty)?;
            let f = FusionRing::new(d.clone(), *k)?;
            let (a, b) = (basis_index(&d, &f, *k, w1)?, basis_index(&d, &f, *k, w2)?);
            let n = f.size();
            let p = f.multiply(&VerlindeElement::basis(n, a), &VerlindeElement::basis(n, b))?;
            let v = json!({"product": terms_json(&f, &p), "v": p.to_v_string()});
            Ok(emit(json, v, Some(format!("{}\n", p.to_v_string()))))
        }
        FusionCmd::Qdim { ty, k, w } => {
            let d = datum(ty)?;
            if *k < 1 {
                return Err(Error::Level { min: 1, got: *k }.into());
            }
            let w = parse_ints(w)?;
            let q = if w.len() == d.rank() + 1 {
                qdim_finite(&d, *k, &w[1..])
            } else if w.len() == d.rank() {
                qdim_finite(&d, *k, &w)
            } else {
                return Err(Error::WeightLength { weight: w.clone(), got: w.len(), expected: d.rank() }.into());
            };
            Ok(emit(json, json!({"weight": w, "qdim": q}), Some(format!("{q}\n"))))
        }
        FusionCmd::Smatrix { ty, k, force } => {
            let f = FusionRing::new(datum(ty)?, *k)?;
            let s = f.s_matrix(if *force { u128::MAX } else { S_MATRIX_GATE })?;
            let re: Vec<Vec<f64>> = s.entries.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
            let im: Vec<Vec<f64>> = s.entries.iter().map(|r| r.iter().map(|z| z.im).collect()).collect();
            let v = json!({
                "basis": f.basis,
                "re": re,
                "im": im,
                "symmetry_defect": s.max_symmetry_defect(),
                "unitarity_defect": s.max_unitarity_defect(),
            });
            Ok(Output::ok(v.to_string()))
        }
    }
}

fn rep(json: bool, cmd: &RepCmd) -> Result<Output, Failure> {
    match cmd {
        RepCmd::Dim { ty, w } => {
            let rep = RepRing::new(datum(ty)?);
            let w = parse_ints(w)?;
            check_dominant(rep.datum(), &w)?;
            let dim = rep.dim(&w);
            Ok(emit(json, json!({"weight": w, "dim": dim.to_string()}), Some(format!("{dim}\n"))))
        }
        RepCmd::Char { ty, w } => {
            let rep = RepRing::new(datum(ty)?);
            let w = parse_ints(w)?;
            check_dominant(rep.datum(), &w)?;
            let mults = rep.dominant_multiplicities(&w)?;
            let list: Vec<Value> = mults.iter().map(|(mu, m)| json!({"weight": mu, "mult": m})).collect();
            let text = mults.iter().map(|(mu, m)| format!("{mu:?}  {m}\n")).collect();
            Ok(emit(json, json!({"weight": w, "dominant": list}), Some(text)))
        }
        RepCmd::Tensor { ty, w1, w2 } => {
            let rep = RepRing::new(datum(ty)?);
            let (w1, w2) = (parse_ints(w1)?, parse_ints(w2)?);
            check_dominant(rep.datum(), &w1)?;
            check_dominant(rep.datum(), &w2)?;
            let (a, b) = (RepRingElement::basis(w1), RepRingElement::basis(w2));
            let p = rep.tensor(&a, &b)?;
            Ok(emit(json, json!({"terms": rep_terms_json(&p)}), Some(rep_terms_text(&p) + "\n")))
        }
    }
}

fn kr(json: bool, cmd: &KrCmd) -> Result<Output, Failure> {
    let KrCmd::Restrict { ty, i, m } = cmd;
    let d = datum(ty)?;
    if *i == 0 || *i > d.rank() || *m < 0 {
        return Err(Failure::Usage(format!("need 1 <= i <= {} and m >= 0", d.rank())));
    }
    let rep = RepRing::new(d.clone());
    let b = branching_for(&d)?;
    let r = rep.kr_restriction(&b, *i, *m)?;
    let v = json!({"type": ty, "i": i, "m": m, "terms": rep_terms_json(&r), "dim": rep.dim_of(&r).to_string()});
    Ok(emit(json, v, Some(rep_terms_text(&r) + "\n")))
}

fn cluster(json: bool, cmd: &ClusterCmd) -> Result<Output, Failure> {
    match cmd {
        ClusterCmd::Init { ty, ell, height: h } => {
            let d = datum(ty)?;
            let (seed, grid, _) = build_initial_seed(&d, *ell, &height(h)?)?;
            let vertices: Vec<Value> = grid
                .points
                .iter()
                .zip(&grid.frozen)
                .zip(&grid.labels)
                .map(|((&(node, p), fr), lab)| json!({"node": node, "p": p, "frozen": fr, "label": lab.to_string()}))
                .collect();
            let names = grid.vertex_names();
            let arrows: Vec<Value> = seed
                .matrix
                .arrows(false)
                .into_iter()
                .map(|(a, b, m)| json!({"from": names[a], "to": names[b], "mult": m}))
                .collect();
            let mut text = format!("{} l={} height {:?}\n", d.ty, ell, grid.height);
            for ((name, fr), lab) in names.iter().zip(&grid.frozen).zip(&grid.labels) {
                text.push_str(&format!("{name}{}  {lab}\n", if *fr { " (frozen)" } else { "" }));
            }
            for (a, b, m) in seed.matrix.arrows(false) {
                let mult = if m > 1 { format!(" x{m}") } else { String::new() };
                text.push_str(&format!("{} -> {}{mult}\n", names[a], names[b]));
            }
            let v = json!({"type": ty, "ell": ell, "height": grid.height, "vertices": vertices, "arrows": arrows});
            Ok(emit(json, v, Some(text)))
        }
        ClusterCmd::Enumerate { ty, ell, height: h } => {
            let ctx = cluster_context(datum(ty)?, *ell, &height(h)?, Limits::default())?;
            let e = &ctx.enumeration;
            let components = principal_components(&e.initial.matrix).unwrap_or_default();
            let v = json!({
                "type": ty,
                "ell": ell,
                "cluster_type": components,
                "variables": e.registry.len(),
                "exchangeable": e.n_exchangeable(),
                "frozen": e.n_frozen(),
                "clusters": e.clusters.len(),
                "relations": e.relations.len(),
                "kr": ctx.kr.len(),
            });
            let text = format!(
                "{} l={}: cluster type {}, {} variables ({} exchangeable, {} frozen), {} clusters, {} relations, {} KR\n",
                ty,
                ell,
                components.join(" x "),
                e.registry.len(),
                e.n_exchangeable(),
                e.n_frozen(),
                e.clusters.len(),
                e.relations.len(),
                ctx.kr.len()
            );
            Ok(emit(json, v, Some(text)))
        }
        ClusterCmd::Export { ty, ell, format, height: h } => {
            let ctx = cluster_context(datum(ty)?, *ell, &height(h)?, Limits::default())?;
            let e = &ctx.enumeration;
            let body = match format {
                ExportFormat::Dot => quiver_to_dot(&e.initial.matrix, &ctx.grid.vertex_names()),
                ExportFormat::Json => registry_to_json(&e.registry),
                ExportFormat::Txt => relations_to_text(&e.relations),
            };
            Ok(Output::ok(body))
        }
    }
}

fn verify(ty: &str, k: i64, source: Source, report: ReportFormat, h: &Option<String>) -> Result<Output, Failure> {
    let opts = VerifyOptions {
        source: match source {
            Source::Pipeline => SeedSource::Pipeline,
            Source::Data => SeedSource::Data,
            Source::Both => SeedSource::Both,
        },
        height: height(h)?,
        ..VerifyOptions::default()
    };
    let (r, _, _) = verifier::verify_type(datum(ty)?, k, &opts)?;
    let passed = r.passed();
    let body = match report {
        ReportFormat::Json => serde_json::to_string_pretty(&r).expect("reports serialize"),
        ReportFormat::Md => {
            let verdict = if r.positivity { "all positive" } else { "not all positive" };
            format!("{}\n{} variables, {verdict}\n", r.to_markdown(), r.counts.variables)
        }
    };
    Ok(Output { body, passed })
}

fn examples(json: bool, cmd: &ExampleCmd) -> Result<Output, Failure> {
    let reports = match cmd {
        ExampleCmd::A2 => vec![verifier::check_example_a2()?],
        ExampleCmd::B3 => vec![verifier::check_example_b3()?],
        ExampleCmd::All => vec![verifier::check_example_a2()?, verifier::check_example_b3()?],
        ExampleCmd::Dn { n } => {
            let r = verifier::check_dn(*n)?;
            let passed = r.consistent();
            let body = if json {
                serde_json::to_string_pretty(&r).expect("reports serialize")
            } else {
                let mut s = format!(
                    "D{}: {} exchangeable, census {:?} (expected {:?}), relations hold {}, positive {}, agrees with propagation {}\n",
                    r.n, r.exchangeable, r.census, r.expected_census, r.relations_hold, r.positive, r.agrees_with_propagation
                );
                if !r.uniform_deviations.is_empty() {
                    s.push_str(&format!(
                        "leading class 2L1 replaced by 2L0 at {}; with 2L1 the relations {}\n",
                        r.uniform_deviations.join(", "),
                        if r.uniform_relations_hold { "still hold" } else { "fail" }
                    ));
                }
                s.push_str(if passed { "consistent\n" } else { "inconsistent\n" });
                s
            };
            return Ok(Output { body, passed });
        }
    };
    let passed = reports.iter().all(|r| r.passed());
    let body = if json {
        serde_json::to_string_pretty(&reports).expect("reports serialize")
    } else {
        let mut s = String::new();
        for r in &reports {
            let ok_rows = r.rows.iter().filter(|x| x.passed()).count();
            s.push_str(&format!("{}: {}/{} rows, dimension {}, image {}\n", r.name, ok_rows, r.rows.len(), r.dimension, r.final_image));
            for c in r.checks.iter().chain(&r.observations) {
                s.push_str(&format!("  {} {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name));
            }
            s.push_str(if r.passed() { "  passed\n" } else { "  failed\n" });
        }
        s
    };
    Ok(Output { body, passed })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Command::Cartan { cmd: CartanCmd::Info { ty } } => cartan_info(cli.json, ty),
        Command::Project { ty, k, weight } => project(ty, *k, weight),
        Command::Fusion { cmd } => fusion(cli.json, cmd),
        Command::Rep { cmd } => rep(cli.json, cmd),
        Command::Kr { cmd } => kr(cli.json, cmd),
        Command::Cluster { cmd } => cluster(cli.json, cmd),
        Command::Verify { ty, k, seed_source, report, height } => {
            let report = if cli.json { ReportFormat::Json } else { *report };
            verify(ty, *k, *seed_source, report, height)
        }
        Command::Examples { cmd } => examples(cli.json, cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut body = out.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{body}"),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("certification failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `verlinde --help` for usage.");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
