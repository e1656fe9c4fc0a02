use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lie_prederiv::affine::{is_affine, lemma25_check, theta_product};
use lie_prederiv::algebra::render_vector;
use lie_prederiv::catalog::{self, Params};
use lie_prederiv::classify::{classify_batch, classify_spaces, ClassificationReport, DEFAULT_SEED};
use lie_prederiv::deriv::{derivation_space, is_prederivation, prederivation_space, SolutionSpace};
use lie_prederiv::filiform::{build_filiform, jacobi_constraints_dim11, AlphaVector};
use lie_prederiv::io::{algebra_from_json, algebra_to_value, matrix_from_json, matrix_to_value, vector_to_value};
use lie_prederiv::rational::{format_rational, int, zero};
use lie_prederiv::{Error, LieAlgebra};
use serde_json::{json, Value};

/// Exact derivations and prederivations of Lie algebras.
///
/// Inputs are algebra JSON files, `-` for stdin, or `catalog:NAME` for a
/// built-in algebra (family parameters via `--param k=v`).
#[derive(Parser)]
#[command(name = "lie", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the random witness search.
    #[arg(long, global = true, env = "LIE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Algebra file, `-` for stdin, or `catalog:NAME`.
    input: String,
    /// Catalog family parameter, e.g. `n=7`.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi identity and Lie triple system axioms.
    Check(Input),
    /// Lower central and derived series.
    Series(Input),
    /// The derivation algebra.
    Der {
        #[command(flatten)]
        input: Input,
        /// Also print the generic element.
        #[arg(long)]
        generic: bool,
    },
    /// The prederivation algebra.
    Pder {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        generic: bool,
    },
    /// Non-singular and nilpotency predicates for Der and Pder.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Include the certificates backing each answer.
        #[arg(long)]
        certificates: bool,
        /// Treat INPUT as a manifest with one input per line.
        #[arg(long)]
        batch: bool,
        /// Worker threads for --batch.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// The product induced by a non-singular prederivation.
    Affine {
        #[command(flatten)]
        input: Input,
        /// Row-major JSON matrix of rationals.
        #[arg(long)]
        prederivation: PathBuf,
    },
    /// Filiform laws in adapted bases.
    Filiform {
        #[command(subcommand)]
        command: FiliformCommand,
    },
    /// Built-in algebras.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// The dimension-7 table for the algebras with known brackets.
    Table7,
}

#[derive(Subcommand)]
enum FiliformCommand {
    /// Build the bracket table for an α-vector.
    Gen {
        #[arg(long)]
        n: usize,
        /// Ordered values `"0,1,..."` or pairs `"(2,5)=1,(3,7)=1/2"`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Also run the Jacobi check.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    Get {
        name: String,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
}

/// Outcome of a command: printed output plus whether the answer was a
/// mathematical negative.
struct Outcome {
    text: String,
    value: Value,
    negative: bool,
}

impl Outcome {
    fn new(text: String, value: Value) -> Self {
        Self {
            text,
            value,
            negative: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.value).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if out.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": error_kind(&e), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::UnknownAlgebra(_) => "unknown_algebra",
        Error::Parameter(_) => "parameter",
        Error::InvalidBracket { .. } => "invalid_bracket",
        Error::InvalidAlpha(_) => "invalid_alpha",
        Error::DimensionMismatch { .. } | Error::NotSquare { .. } => "dimension",
        Error::Singular => "singular",
        Error::Hypothesis(_) | Error::NotNilpotent => "hypothesis",
        Error::Inconsistent(_) => "inconsistent",
        _ => "error",
    }
}

fn read_text(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn load(spec: &str, params: &[String]) -> Result<LieAlgebra, Error> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        let params: Params = catalog::parse_params(params.iter().map(String::as_str))?;
        return catalog::get(name, &params);
    }
    if !params.is_empty() {
        return Err(Error::Parameter("--param only applies to catalog: inputs".into()));
    }
    algebra_from_json(&read_text(spec)?)
}

fn load_input(input: &Input) -> Result<LieAlgebra, Error> {
    load(&input.input, &input.params)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Check(input) => check(&load_input(input)?),
        Command::Series(input) => series(&load_input(input)?),
        Command::Der { input, generic } => space(derivation_space(&load_input(input)?), *generic),
        Command::Pder { input, generic } => space(prederivation_space(&load_input(input)?), *generic),
        Command::Classify {
            input,
            certificates,
            batch,
            jobs,
        } => {
            if *batch {
                classify_manifest(&input.input, *certificates, *jobs, cli.seed)
            } else {
                let g = load_input(input)?;
                require_lie(&g)?;
                let report = classify_spaces(&derivation_space(&g), &prederivation_space(&g), cli.seed)?;
                Ok(Outcome::new(report_text(&report), report_value(&report, *certificates)))
            }
        }
        Command::Affine { input, prederivation } => {
            let g = load_input(input)?;
            let p = matrix_from_json(&read_text(&prederivation.to_string_lossy())?)?;
            affine(&g, &p)
        }
        Command::Filiform {
            command: FiliformCommand::Gen { n, alpha, check },
        } => filiform_gen(*n, alpha, *check),
        Command::Catalog { command } => match command {
            CatalogCommand::List => Ok(catalog_list()),
            CatalogCommand::Get { name, params } => {
                let params = catalog::parse_params(params.iter().map(String::as_str))?;
                let inst = catalog::instance(name, &params)?;
                let mut text = brackets_text(&inst.algebra);
                if inst.convention_dependent {
                    text.push_str("note: encoding depends on the deformation-cocycle convention\n");
                }
                Ok(Outcome::new(text, algebra_to_value(&inst.algebra)))
            }
        },
        Command::Table7 => table7(cli.seed),
    }
}

fn require_lie(g: &LieAlgebra) -> Result<(), Error> {
    match g.jacobi_check().first() {
        None => Ok(()),
        Some(v) => Err(Error::Hypothesis(format!(
            "not a Lie algebra: Jacobi fails on (e{}, e{}, e{})",
            v.triple[0], v.triple[1], v.triple[2]
        ))),
    }
}

fn brackets_text(g: &LieAlgebra) -> String {
    let mut s = format!("{} (dim {})\n", g.name(), g.dim());
    for ((i, j), v) in g.brackets() {
        s.push_str(&format!("[e{},e{}] = {}\n", i + 1, j + 1, render_vector(v)));
    }
    s
}

fn check(g: &LieAlgebra) -> Result<Outcome, Error> {
    let jacobi = g.jacobi_check();
    let lts = g.lts_check();
    let mut text = String::new();
    if jacobi.is_empty() {
        text.push_str("jacobi: ok\n");
    } else {
        text.push_str(&format!("jacobi: {} violations\n", jacobi.len()));
        for v in jacobi.iter().take(10) {
            text.push_str(&format!(
                "  (e{}, e{}, e{}): {}\n",
                v.triple[0],
                v.triple[1],
                v.triple[2],
                render_vector(&v.residual)
            ));
        }
    }
    text.push_str(&if lts.is_empty() {
        "lts axioms: ok\n".to_string()
    } else {
        format!("lts axioms: {} violations\n", lts.len())
    });
    let value = json!({
        "algebra": g.name(),
        "dim": g.dim(),
        "jacobi_ok": jacobi.is_empty(),
        "jacobi_violations": jacobi.iter().map(|v| json!({
            "triple": v.triple,
            "residual": vector_to_value(&v.residual),
        })).collect::<Vec<_>>(),
        "lts_ok": lts.is_empty(),
        "lts_violations": lts,
    });
    Ok(Outcome {
        negative: !(jacobi.is_empty() && lts.is_empty()),
        ..Outcome::new(text, value)
    })
}

fn series(g: &LieAlgebra) -> Result<Outcome, Error> {
    require_lie(g)?;
    let lower = g.lower_central_dims();
    let derived: Vec<usize> = g.derived_series().iter().map(Vec::len).collect();
    let nilindex = g.nilindex();
    let text = format!(
        "lower central series dims: {lower:?}\nderived series dims: {derived:?}\nnilindex: {}\nfiliform: {}\n",
        nilindex.map_or("not nilpotent".to_string(), |p| p.to_string()),
        g.is_filiform()
    );
    let value = json!({
        "algebra": g.name(),
        "lower_central_dims": lower,
        "derived_dims": derived,
        "nilpotent": nilindex.is_some(),
        "nilindex": nilindex,
        "filiform": g.is_filiform(),
    });
    Ok(Outcome::new(text, value))
}

fn space(s: SolutionSpace, generic: bool) -> Result<Outcome, Error> {
    let mut text = format!("dim {}({}) = {}\n", s.kind(), s.algebra().name(), s.dim());
    let mut value = json!({
        "algebra": s.algebra().name(),
        "kind": s.kind(),
        "dim": s.dim(),
        "basis": s.basis().iter().map(matrix_to_value).collect::<Vec<_>>(),
    });
    if generic {
        let g = s.generic();
        let n = g.size();
        let rows: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| g.entry(i, j).to_string()).collect())
            .collect();
        text.push_str("generic element:\n");
        for row in &rows {
            text.push_str(&format!("  [{}]\n", row.join(", ")));
        }
        value["generic"] = json!(rows);
    }
    Ok(Outcome::new(text, value))
}

fn report_value(r: &ClassificationReport, certificates: bool) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if !certificates {
        for key in [
            "admits_nonsingular_derivation",
            "admits_nonsingular_prederivation",
            "characteristically_nilpotent",
            "strongly_nilpotent",
        ] {
            let holds = v[key]["holds"].clone();
            v[key] = holds;
        }
    }
    v
}

fn report_text(r: &ClassificationReport) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    format!(
        "{} (dim {})\n  dim Der  = {}\n  dim Pder = {}\n  non-singular derivation:   {}\n  non-singular prederivation: {}\n  characteristically nilpotent: {}\n  strongly nilpotent: {}\n",
        r.algebra,
        r.dim,
        r.dim_der,
        r.dim_pder,
        yn(r.admits_nonsingular_derivation.holds),
        yn(r.admits_nonsingular_prederivation.holds),
        yn(r.characteristically_nilpotent.holds),
        yn(r.strongly_nilpotent.holds),
    )
}

fn classify_manifest(path: &str, certificates: bool, jobs: Option<usize>, seed: u64) -> Result<Outcome, Error> {
    let manifest = read_text(path)?;
    let mut algebras = Vec::new();
    for line in manifest.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut parts = line.split_whitespace();
        let spec = parts.next().expect("non-empty line");
        let params: Vec<String> = parts.map(str::to_string).collect();
        algebras.push(load(spec, &params)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Parameter(format!("--jobs: {e}")))?;
    let results = pool.install(|| classify_batch(&algebras, seed));
    let mut text = String::new();
    let mut values = Vec::new();
    for (g, r) in algebras.iter().zip(results) {
        match r {
            Ok(report) => {
                text.push_str(&report_text(&report));
                values.push(report_value(&report, certificates));
            }
            Err(e) => {
                text.push_str(&format!("{}: error: {e}\n", g.name()));
                values.push(json!({ "algebra": g.name(), "error": e.to_string() }));
            }
        }
    }
    Ok(Outcome::new(text, Value::Array(values)))
}

fn affine(g: &LieAlgebra, p: &lie_prederiv::RatMatrix) -> Result<Outcome, Error> {
    require_lie(g)?;
    if p.rows() != g.dim() || p.cols() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: p.rows(),
        });
    }
    let pder = is_prederivation(g, p);
    let det = p.det()?;
    let mut value = json!({
        "algebra": g.name(),
        "is_prederivation": pder,
        "det": format_rational(&det),
        "lemma_violations": lemma25_check(g, p)?,
    });
    let mut text = format!("prederivation: {pder}\ndet: {}\n", format_rational(&det));
    let affine = if pder && det != zero() {
        let check = is_affine(&theta_product(g, p)?)?;
        value["is_affine"] = json!(check.is_affine());
        value["left_symmetric"] = json!(check.left_symmetric);
        value["commutator_identity"] = json!(check.commutator_identity);
        value["violations"] = json!(check.violations);
        text.push_str(&format!("affine: {}\n", check.is_affine()));
        for [i, j] in check.violations.iter().take(10) {
            text.push_str(&format!("  θ([e{i},e{j}]) != [θ(e{i}),θ(e{j})]\n"));
        }
        check.is_affine()
    } else {
        value["is_affine"] = json!(false);
        value["violations"] = json!([]);
        text.push_str("affine: false (needs a non-singular prederivation)\n");
        false
    };
    Ok(Outcome {
        negative: !affine,
        ..Outcome::new(text, value)
    })
}

fn filiform_gen(n: usize, alpha: &str, check: bool) -> Result<Outcome, Error> {
    let alpha = AlphaVector::parse(n, alpha)?;
    let g = build_filiform(n, &alpha)?;
    let algebra = algebra_to_value(&g);
    if !check {
        return Ok(Outcome::new(brackets_text(&g), algebra));
    }
    let violations = g.jacobi_check();
    let mut text = brackets_text(&g);
    text.push_str(&if violations.is_empty() {
        "jacobi: ok\n".to_string()
    } else {
        format!("jacobi: {} violations\n", violations.len())
    });
    let mut value = json!({
        "algebra": algebra,
        "jacobi_ok": violations.is_empty(),
        "jacobi_violations": violations.iter().map(|v| json!({
            "triple": v.triple,
            "residual": vector_to_value(&v.residual),
        })).collect::<Vec<_>>(),
    });
    if n == 11 {
        let residuals = jacobi_constraints_dim11(&alpha)?;
        text.push_str(&format!(
            "printed constraints: [{}]\n",
            residuals.iter().map(format_rational).collect::<Vec<_>>().join(", ")
        ));
        value["constraint_residuals"] = vector_to_value(&residuals);
    }
    Ok(Outcome {
        negative: !violations.is_empty(),
        ..Outcome::new(text, value)
    })
}

fn catalog_list() -> Outcome {
    let mut text = String::new();
    for e in catalog::list() {
        let params: Vec<String> = e.params.iter().map(|p| format!("{} ({})", p.name, p.rule)).collect();
        text.push_str(&format!("{:28} {}", e.name, e.summary));
        if !params.is_empty() {
            text.push_str(&format!(" [params: {}]", params.join(", ")));
        }
        text.push('\n');
    }
    Outcome::new(text, serde_json::to_value(catalog::list()).expect("entries serialize"))
}

fn table7(seed: u64) -> Result<Outcome, Error> {
    let rows: [(&str, Option<i64>); 6] = [
        ("g_7_1", None),
        ("g_7_4", Some(0)),
        ("g_7_4", Some(1)),
        ("g_7_4", Some(2)),
        ("g_7_5", None),
        ("g_7_7", None),
    ];
    let mut text = format!("{:10} {:>7} {:>8} {:>5}  {}\n", "algebra", "dim Der", "dim Pder", "P^-1", "expected");
    let mut values = Vec::new();
    for (name, lambda) in rows {
        let mut params = Params::new();
        if let Some(l) = lambda {
            params.insert("lambda".into(), int(l));
        }
        let inst = catalog::instance(name, &params)?;
        let g = &inst.algebra;
        let report = classify_spaces(&derivation_space(g), &prederivation_space(g), seed)?;
        let e = &inst.expected;
        let expected = (e.dim_der, e.dim_pder, e.p_inv_exists);
        let got = (
            report.dim_der,
            report.dim_pder,
            report.admits_nonsingular_prederivation.holds,
        );
        let matches = expected == (Some(got.0), Some(got.1), Some(got.2));
        let mark = |b: bool| if b { "yes" } else { "no" };
        text.push_str(&format!(
            "{:10} {:>7} {:>8} {:>5}  {}\n",
            g.name(),
            got.0,
            got.1,
            mark(got.2),
            if matches {
                "matches".to_string()
            } else {
                format!(
                    "differs (table: {}, {}, {})",
                    e.dim_der.unwrap_or(0),
                    e.dim_pder.unwrap_or(0),
                    mark(e.p_inv_exists.unwrap_or(false))
                )
            }
        ));
        values.push(json!({
            "algebra": g.name(),
            "dim_der": got.0,
            "dim_pder": got.1,
            "p_inv_exists": got.2,
            "expected": e,
            "matches": matches,
        }));
    }
    Ok(Outcome::new(text, Value::Array(values)))
}
