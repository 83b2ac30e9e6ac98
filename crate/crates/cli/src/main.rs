//! `altfta`: command-line driver.
//!
//! Exit codes: 0 success, 1 domain failure (a precondition or an expected
//! identity profile not met), 2 usage or I/O error. Errors go to stderr as a
//! JSON object.

mod render;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use altfta::algebra::io::{algebra_to_value, element_to_value, load_algebra, parse_element};
use altfta::algebra::{builtin_names, builtin_with_profile, center, find_complex_copy, nucleus, CopySearch, Profile};
use altfta::eigen::{default_tol, left_eigenpairs, right_eigenpairs, AlgebraMatrix};
use altfta::fta::{find_singular_comm_all, find_singular_nc_all, landscape, SearchOptions, Target};
use altfta::identities::{verify_all, CheckConfig};
use altfta::norms::{
    check_norm_properties, circle_invariant_norm, scale_to_algebra_norm, unitalize_norm, CircleSide, NormSpec,
};
use altfta::poly::{parse_comm, parse_nc};
use altfta::{Algebra, ComplexCopy, Error, Field, Subspace};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "altfta", version, about = "Nonassociative algebra toolkit: identities, norms, singular elements, eigenvalues")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "ALTFTA_SEED", default_value_t = 42)]
    seed: u64,
    /// Output format. Defaults to json (csv for `poly landscape`).
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    /// Tolerance override `key=value`; keys: identity, certify, eig.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in algebras with their expected identity profiles.
    Catalog,
    /// Print an algebra definition as canonical JSON.
    Show(AlgebraArg),
    /// Run every identity check and compare with the expected profile.
    Verify(AlgebraArg),
    /// Center of the algebra.
    Center(AlgebraArg),
    /// Nucleus of the algebra.
    Nucleus(AlgebraArg),
    /// Algebra norm constructions.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Singular elements of polynomials along a copy of C.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Eigenvalues of matrices over the algebra.
    #[command(subcommand)]
    Matrix(MatrixCmd),
}

#[derive(Args, Debug)]
struct AlgebraArg {
    /// Built-in name (R, C, H, O, S16, mat2r, mat2c, upper2) or a JSON file.
    #[arg(long)]
    algebra: String,
}

#[derive(Args, Debug)]
struct CopyArg {
    /// Element I with I^2 = -1. Defaults to i*1 on complex algebras and a
    /// seeded search otherwise.
    #[arg(long)]
    copy: Option<String>,
}

#[derive(Subcommand, Debug)]
enum NormCmd {
    /// Build a norm and check its properties on samples.
    Build {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// l1, l2, linf or weighted_l1:w1,w2,...
        #[arg(long, default_value = "l2")]
        spec: String,
        #[arg(long, value_enum, default_value_t = Mode::Scaled)]
        mode: Mode,
        /// Circle side for `--mode circle`: both, left or right.
        #[arg(long, default_value = "both")]
        side: String,
        #[command(flatten)]
        copy: CopyArg,
        /// Torus grid for `--mode circle`.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Samples per property check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Elements to evaluate the norm at.
        #[arg(long = "at")]
        at: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Scaled,
    Unitalized,
    Circle,
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    /// Polynomial text, or `@file`. Commutative form unless `--nc`.
    #[arg(long)]
    poly: String,
    /// Parse `--poly` as a noncommutative S-expression evaluated at `z A0`.
    #[arg(long)]
    nc: bool,
    /// A0 for `--nc`.
    #[arg(long, default_value = "1")]
    a0: String,
    #[command(flatten)]
    copy: CopyArg,
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    /// Search for singular elements; prints every certified witness.
    Singular {
        #[command(flatten)]
        args: PolyArgs,
        /// Grid points per axis.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Sample the singularity measure over a rectangle.
    Landscape {
        #[command(flatten)]
        args: PolyArgs,
        /// x0,x1,y0,y1
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        region: String,
        #[arg(long, default_value_t = 65)]
        resolution: usize,
    },
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[command(flatten)]
    algebra: AlgebraArg,
    /// Inline JSON (n x n array of coordinate arrays) or a file path.
    #[arg(long)]
    matrix: String,
    #[command(flatten)]
    copy: CopyArg,
}

#[derive(Subcommand, Debug)]
enum MatrixCmd {
    /// Left eigenpairs MX = lambda X (nuclear copy).
    Eig(MatrixArgs),
    /// Right eigenpairs MX = X lambda (associative algebras).
    RightEig(MatrixArgs),
}

struct Ctx {
    seed: u64,
    tol: BTreeMap<String, f64>,
}

impl Ctx {
    fn run_info(&self, extra: Value) -> Value {
        let mut tol = json!(self.tol);
        if let (Some(t), Some(e)) = (tol.as_object_mut(), extra.as_object()) {
            for (k, v) in e {
                t.entry(k.clone()).or_insert(v.clone());
            }
        }
        json!({"seed": self.seed, "version": env!("CARGO_PKG_VERSION"), "tolerances": tol})
    }

    fn check_config(&self) -> CheckConfig {
        let mut cfg = CheckConfig {
            seed: self.seed,
            ..CheckConfig::default()
        };
        if let Some(t) = self.tol.get("identity") {
            cfg.tol = *t;
        }
        cfg
    }
}

/// A command's result: the document to print and whether it is a domain failure.
struct Report {
    doc: Value,
    csv: Option<String>,
    ok: bool,
}

fn report(doc: Value) -> Report {
    Report { doc, csv: None, ok: true }
}

fn load(spec: &str) -> Result<(Algebra, Option<Profile>), Error> {
    let known = builtin_names().iter().any(|b| b.eq_ignore_ascii_case(spec));
    if known && !Path::new(spec).exists() {
        let (a, p) = builtin_with_profile(spec)?;
        return Ok((a, Some(p)));
    }
    load_algebra(&PathBuf::from(spec))
}

fn read_arg(text: &str) -> Result<String, Error> {
    match text.strip_prefix('@') {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))
        }
        None => Ok(text.to_string()),
    }
}

fn copy_for(a: &Algebra, arg: &CopyArg, seed: u64) -> Result<ComplexCopy, Error> {
    match &arg.copy {
        Some(t) => ComplexCopy::verify(parse_element(a, t)?),
        None if a.field() == Field::Complex => {
            let d = a.dim();
            let mut v = vec![0.0; 2 * d];
            v[d..].copy_from_slice(&a.unit_coords()[..d]);
            ComplexCopy::verify(a.element(v)?)
        }
        None => find_complex_copy(
            a,
            None,
            &CopySearch {
                seed,
                ..CopySearch::default()
            },
        ),
    }
}

fn subspace_value(s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "exact": s.is_exact(),
        "basis": s.basis().iter().map(element_to_value).collect::<Vec<_>>(),
    })
}

fn cmd_catalog() -> Result<Report, Error> {
    let mut rows = Vec::new();
    for name in builtin_names() {
        let (a, p) = builtin_with_profile(name)?;
        rows.push(json!({"name": name, "field": a.field().to_string(), "dim": a.dim(), "profile": p.0}));
    }
    Ok(report(Value::Array(rows)))
}

fn cmd_verify(ctx: &Ctx, arg: &AlgebraArg) -> Result<Report, Error> {
    let (a, profile) = load(&arg.algebra)?;
    let cfg = ctx.check_config();
    let reports = verify_all(&a, &cfg);
    let mut mismatches = Vec::new();
    if let Some(p) = &profile {
        for r in &reports {
            if let Some(want) = p.expect(&r.identity_name) {
                if want != r.holds() {
                    mismatches.push(json!({"identity": r.identity_name, "expected": want, "holds": r.holds()}));
                }
            }
        }
    }
    let ok = mismatches.is_empty();
    Ok(Report {
        doc: json!({
            "run": ctx.run_info(json!({"identity": cfg.tol})),
            "algebra": a.name(),
            "profile_checked": profile.is_some(),
            "matches_profile": ok,
            "mismatches": mismatches,
            "reports": reports,
        }),
        csv: None,
        ok,
    })
}

fn cmd_norm(ctx: &Ctx, cmd: &NormCmd) -> Result<Report, Error> {
    let NormCmd::Build {
        algebra,
        spec,
        mode,
        side,
        copy,
        grid,
        samples,
        at,
    } = cmd;
    let (a, _) = load(&algebra.algebra)?;
    let spec: NormSpec = spec.parse()?;
    let mut doc = json!({"algebra": a.name(), "spec": spec.to_string()});
    let norm = match mode {
        Mode::Scaled => scale_to_algebra_norm(&a, &spec)?,
        Mode::Unitalized => unitalize_norm(&a, &scale_to_algebra_norm(&a, &spec)?)?,
        Mode::Circle => {
            let side: CircleSide = side.parse()?;
            let c = copy_for(&a, copy, ctx.seed)?;
            doc["copy"] = serde_json::to_value(&c).expect("serializable");
            circle_invariant_norm(&a, &c, &spec, side, *grid)?
        }
    };
    let checks = check_norm_properties(&norm, *samples, ctx.seed);
    let ok = checks.iter().all(|c| c.passed);
    let values = at
        .iter()
        .map(|t| {
            let x = parse_element(&a, t)?;
            Ok(json!({"element": element_to_value(&x), "norm": norm.eval(&x)?}))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    doc["run"] = ctx.run_info(json!({}));
    doc["mode"] = json!(format!("{mode:?}").to_lowercase());
    doc["provenance"] = serde_json::to_value(norm.provenance()).expect("serializable");
    doc["meta"] = serde_json::to_value(norm.meta()).expect("serializable");
    doc["checks"] = serde_json::to_value(&checks).expect("serializable");
    doc["values"] = Value::Array(values);
    Ok(Report { doc, csv: None, ok })
}

fn search_options(ctx: &Ctx, grid: usize) -> SearchOptions {
    let mut o = SearchOptions {
        grid,
        ..SearchOptions::default()
    };
    if let Some(t) = ctx.tol.get("certify") {
        o.certify_tol = *t;
    }
    o
}

fn cmd_poly(ctx: &Ctx, cmd: &PolyCmd) -> Result<Report, Error> {
    let args = match cmd {
        PolyCmd::Singular { args, .. } | PolyCmd::Landscape { args, .. } => args,
    };
    let (a, _) = load(&args.algebra.algebra)?;
    let text = read_arg(&args.poly)?;
    let c = copy_for(&a, &args.copy, ctx.seed)?;
    let copy_doc = serde_json::to_value(&c).expect("serializable");
    enum P {
        Comm(altfta::poly::CommPoly),
        Nc(altfta::poly::NCPoly, altfta::Element),
    }
    let p = if args.nc {
        P::Nc(parse_nc(&a, text.trim())?, parse_element(&a, &args.a0)?)
    } else {
        P::Comm(parse_comm(&a, text.trim())?)
    };
    let poly_str = match &p {
        P::Comm(f) => f.to_string(),
        P::Nc(f, _) => f.to_string(),
    };
    match cmd {
        PolyCmd::Singular { grid, .. } => {
            let opts = search_options(ctx, *grid);
            let ws = match &p {
                P::Comm(f) => find_singular_comm_all(f, &c, &opts)?,
                P::Nc(f, a0) => find_singular_nc_all(f, a0, &c, &opts)?,
            };
            let ok = ws.iter().any(|w| w.certified);
            Ok(Report {
                doc: json!({
                    "run": ctx.run_info(json!({"certify": opts.certify_tol})),
                    "algebra": a.name(),
                    "poly": poly_str,
                    "copy": copy_doc,
                    "witnesses": ws,
                }),
                csv: None,
                ok,
            })
        }
        PolyCmd::Landscape { region, resolution, .. } => {
            let r: Vec<f64> = region
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::InvalidArgument(format!("bad region `{region}`")))?;
            let [x0, x1, y0, y1] = r[..] else {
                return Err(Error::InvalidArgument("region needs x0,x1,y0,y1".into()));
            };
            let target = match &p {
                P::Comm(f) => Target::Comm(f),
                P::Nc(f, a0) => Target::Nc(f, a0),
            };
            let l = landscape(target, &c, (x0, x1, y0, y1), *resolution)?;
            Ok(Report {
                doc: json!({"run": ctx.run_info(json!({})), "copy": copy_doc, "landscape": l}),
                csv: Some(l.to_csv()),
                ok: true,
            })
        }
    }
}

fn cmd_matrix(ctx: &Ctx, cmd: &MatrixCmd) -> Result<Report, Error> {
    let (args, right) = match cmd {
        MatrixCmd::Eig(a) => (a, false),
        MatrixCmd::RightEig(a) => (a, true),
    };
    let (a, _) = load(&args.algebra.algebra)?;
    let text = if args.matrix.trim_start().starts_with('[') {
        args.matrix.clone()
    } else {
        std::fs::read_to_string(&args.matrix)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", args.matrix)))?
    };
    let m = AlgebraMatrix::parse_json(&a, &text)?;
    let c = copy_for(&a, &args.copy, ctx.seed)?;
    let tol = ctx.tol.get("eig").copied().unwrap_or_else(|| default_tol(&m));
    let pairs = if right {
        right_eigenpairs(&m, &c, tol)?
    } else {
        left_eigenpairs(&m, &c, tol)?
    };
    Ok(report(json!({
        "run": ctx.run_info(json!({"eig": tol})),
        "algebra": a.name(),
        "matrix": m.to_value(),
        "copy": c,
        "kind": if right { "right" } else { "left" },
        "pairs": pairs,
    })))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let mut tol = BTreeMap::new();
    for t in &cli.tol {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected KEY=VALUE, got `{t}`")))?;
        if !["identity", "certify", "eig"].contains(&k) {
            return Err(Error::InvalidArgument(format!("unknown tolerance `{k}`")));
        }
        let v: f64 = v
            .parse()
            .ok()
            .filter(|v: &f64| *v > 0.0)
            .ok_or_else(|| Error::InvalidArgument(format!("bad tolerance `{v}`")))?;
        tol.insert(k.to_string(), v);
    }
    let ctx = Ctx { seed: cli.seed, tol };
    match &cli.command {
        Command::Catalog => cmd_catalog(),
        Command::Show(arg) => {
            let (a, p) = load(&arg.algebra)?;
            Ok(report(algebra_to_value(&a, p.as_ref())))
        }
        Command::Verify(arg) => cmd_verify(&ctx, arg),
        Command::Center(arg) => {
            let (a, _) = load(&arg.algebra)?;
            Ok(report(json!({"algebra": a.name(), "center": subspace_value(&center(&a))})))
        }
        Command::Nucleus(arg) => {
            let (a, _) = load(&arg.algebra)?;
            Ok(report(json!({"algebra": a.name(), "nucleus": subspace_value(&nucleus(&a))})))
        }
        Command::Norm(cmd) => cmd_norm(&ctx, cmd),
        Command::Poly(cmd) => cmd_poly(&ctx, cmd),
        Command::Matrix(cmd) => cmd_matrix(&ctx, cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            let landscape = matches!(cli.command, Command::Poly(PolyCmd::Landscape { .. }));
            let format = cli.output.unwrap_or(if landscape { Format::Csv } else { Format::Json });
            let body = match (format, &r.csv) {
                (Format::Csv, Some(csv)) => csv.clone(),
                (Format::Text, _) => render::text(&r.doc),
                _ => serde_json::to_string_pretty(&r.doc).expect("serializable") + "\n",
            };
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let doc = json!({"error": e.kind(), "message": e.to_string()});
            eprintln!("{doc}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
