//! `saito`: build pre-Saito structures, run the checkers, emit tables.

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use saito_core::algebra::rational::{format_rational, parse_rational, to_i64};
use saito_core::algebra::{Matrix, QLaurent, Rational, SeriesRing, TruncatedSeries};
use saito_core::grassmann::{alt_metric, alt_structure_constants, rimhook_oracle, BialternantClass, QLRTable};
use saito_core::hm::{gw_pn2, hm_extend, wdvv_oracle, DeformationProblem};
use saito_core::mirror::{compare_quantum_gm, gm_wedge, jacobian_algebra, mult_f_matrix, BrieskornPoint, LaurentPoly};
use saito_core::presaito::{check_metric, check_pre_saito, PreSaitoFamily};
use saito_core::projective::pn_small_family;
use saito_core::Report;

use config::{Config, Format};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input: exit 2.
    Usage(String),
    /// Computation or output failure: exit 1.
    Failure(String),
}

impl From<saito_core::Error> for CliError {
    fn from(e: saito_core::Error) -> Self {
        use saito_core::Error as E;
        match e {
            E::Parse(_) | E::Input(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "saito", version, about = "Exact pre-Saito structures, quantum products and mirror data")]
struct Cli {
    /// Configuration file (default: ./saito.toml when present)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized spot checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print every individual check
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Small quantum family of projective n-space over the q-line
    Pn {
        #[arg(long)]
        n: usize,
        /// Run the relation and metric checkers instead of emitting the family
        #[arg(long)]
        check: bool,
    },
    /// Quantum structure constants of G(r, n+1) from the r-th alternate product
    Grassmann {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Compare with the rim-hook oracle
        #[arg(long)]
        oracle: bool,
        /// Include the alternate metric
        #[arg(long)]
        metric: bool,
    },
    /// Plane rational curve counts from the big quantum potential
    Gw {
        #[arg(long)]
        dmax: u32,
        /// Truncation order of the universal deformation (default 3 dmax)
        #[arg(long)]
        order: Option<u32>,
    },
    /// Jacobian algebra and Brieskorn data of the mirror of projective n-space
    Mirror {
        #[arg(long)]
        n: usize,
        /// Restrict to the r-th alternate power
        #[arg(long)]
        wedge: Option<usize>,
        /// Compare with the alternate product of the quantum side
        #[arg(long)]
        compare: bool,
    },
    /// Extend a family to new variables by the Hertling-Manin recursion
    Hm {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Check the flatness and metric relations of a family
    Verify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        order: Option<u32>,
    },
}

/// What a command produced: the artifact and a one-line summary.
struct Outcome {
    artifact: String,
    summary: Option<String>,
    /// Individual checks, shown with `--verbose`.
    detail: String,
    ok: bool,
}

impl Outcome {
    fn ok(artifact: String) -> Self {
        Self {
            artifact,
            summary: None,
            detail: String::new(),
            ok: true,
        }
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn no_csv(fmt: Format, what: &str) -> CliResult<()> {
    if fmt == Format::Csv {
        return Err(CliError::Usage(format!("csv output is only available for grassmann, not {what}")));
    }
    Ok(())
}

fn int_json(r: &Rational) -> Value {
    match to_i64(r) {
        Some(k) => json!(k),
        None => json!(format_rational(r)),
    }
}

fn laurent_matrix_json(m: &Matrix<QLaurent>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| m.get(i, j).to_json()).collect()))
            .collect(),
    )
}

fn report_artifact(report: &Report, fmt: Format) -> String {
    match fmt {
        Format::Pretty => report.to_string(),
        _ => render_json(&report.to_json()),
    }
}

fn report_summary(report: &Report) -> String {
    match report.first_failure() {
        None => format!("all {} checks pass", report.checks.len()),
        Some(c) => format!("check failed: {}: {}", c.name, c.witness.as_deref().unwrap_or("")),
    }
}

fn cmd_pn(n: usize, check: bool, cfg: &Config) -> CliResult<Outcome> {
    no_csv(cfg.format, "pn")?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let fam = pn_small_family(n);
    if !check {
        let artifact = match cfg.format {
            Format::Pretty => pretty_family(&fam),
            _ => render_json(&fam.to_json()),
        };
        return Ok(Outcome::ok(artifact));
    }
    let mut report = check_pre_saito(&fam, fam.order())?;
    report.extend(check_metric(&fam)?);
    Ok(Outcome {
        artifact: report_artifact(&report, cfg.format),
        summary: Some(report_summary(&report)),
        detail: report.to_string(),
        ok: report.passed(),
    })
}

fn pretty_family(f: &PreSaitoFamily) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rank {} over {:?}, order {}", f.rank(), f.vars(), f.order());
    let _ = writeln!(s, "Binf =\n{}", f.binf);
    let _ = writeln!(s, "B0 =\n{}", f.b0);
    for (v, c) in f.vars().iter().zip(&f.c) {
        let _ = writeln!(s, "C({v}) =\n{c}");
    }
    if let Some(g) = &f.g {
        let _ = writeln!(s, "G =\n{g}");
    }
    s
}

fn pretty_class(c: &BialternantClass) -> String {
    if c.is_empty() {
        return "0".into();
    }
    c.iter()
        .map(|(nu, v)| format!("({v}) s{nu}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn pretty_table(t: &QLRTable) -> String {
    let mut s = String::new();
    for ((i, j), c) in &t.products {
        let _ = writeln!(s, "s{} * s{} = {}", t.basis[*i], t.basis[*j], pretty_class(c));
    }
    s
}

fn associativity_spot_check(t: &QLRTable, seed: u64, trials: usize) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = t.basis.len();
    for _ in 0..trials {
        let mut pick = || {
            let b = t.basis[rng.random_range(0..m)].clone();
            BialternantClass::from([(b, QLaurent::one())])
        };
        let (a, b, c) = (pick(), pick(), pick());
        if t.multiply(&t.multiply(&a, &b), &c) != t.multiply(&a, &t.multiply(&b, &c)) {
            let name = |x: &BialternantClass| x.keys().next().map(|p| p.to_string()).unwrap_or_default();
            return Some(format!("(s{} s{}) s{}", name(&a), name(&b), name(&c)));
        }
    }
    None
}

fn cmd_grassmann(r: usize, n: usize, oracle: bool, metric: bool, seed: u64, cfg: &Config) -> CliResult<Outcome> {
    if r == 0 || r > n {
        return Err(CliError::Usage(format!("need 1 <= r <= n, got r={r} n={n}")));
    }
    if metric && cfg.format == Format::Csv {
        return Err(CliError::Usage("--metric needs json or pretty output".into()));
    }
    let table = alt_structure_constants(r, n);
    let g = metric.then(|| alt_metric(r, n));
    let artifact = match cfg.format {
        Format::Csv => table.to_csv()?,
        Format::Pretty => {
            let mut s = pretty_table(&table);
            if let Some(g) = &g {
                let _ = writeln!(s, "metric =\n{g}");
            }
            s
        }
        Format::Json => {
            let mut v = table.to_json();
            if let Some(g) = &g {
                v["metric"] = Value::Array(
                    (0..g.rows())
                        .map(|i| Value::Array((0..g.cols()).map(|j| int_json(g.get(i, j))).collect()))
                        .collect(),
                );
            }
            render_json(&v)
        }
    };
    if !oracle {
        return Ok(Outcome::ok(artifact));
    }
    let other = rimhook_oracle(r, n);
    let (summary, ok) = match table.first_difference(&other) {
        Some(d) => (format!("tables differ: {d}"), false),
        None => match associativity_spot_check(&table, seed, 100) {
            Some(w) => (format!("tables agree but associativity fails at {w}"), false),
            None => (format!("tables agree ({} products)", table.products.len()), true),
        },
    };
    Ok(Outcome {
        artifact,
        summary: Some(summary),
        detail: String::new(),
        ok,
    })
}

fn cmd_gw(dmax: u32, order: Option<u32>, cfg: &Config) -> CliResult<Outcome> {
    no_csv(cfg.format, "gw")?;
    if dmax == 0 {
        return Err(CliError::Usage("--dmax must be at least 1".into()));
    }
    let n = gw_pn2(dmax, order)?;
    let oracle = wdvv_oracle(dmax);
    let ok = n == oracle;
    let list = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let artifact = match cfg.format {
        Format::Pretty => format!("N=[{}]\n", list(&n)),
        _ => render_json(&json!({
            "dmax": dmax,
            "N": n.iter().map(int_json).collect::<Vec<_>>(),
            "wdvv": oracle.iter().map(int_json).collect::<Vec<_>>(),
            "agree": ok,
        })),
    };
    let summary = if ok {
        format!("N=[{}] agrees with the WDVV recursion", list(&n))
    } else {
        format!("N=[{}] but WDVV gives [{}]", list(&n), list(&oracle))
    };
    Ok(Outcome {
        artifact,
        summary: Some(summary),
        detail: String::new(),
        ok,
    })
}

fn point_json(b: &BrieskornPoint) -> Value {
    json!({
        "rank": b.rank(),
        "labels": b.labels,
        "R0": laurent_matrix_json(&b.r0),
        "Rinf": b.rinf_spectrum(),
        "charpoly": b.r0.charpoly().iter().map(QLaurent::to_json).collect::<Vec<_>>(),
    })
}

fn cmd_mirror(n: usize, wedge: Option<usize>, compare: bool, cfg: &Config) -> CliResult<Outcome> {
    no_csv(cfg.format, "mirror")?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if let Some(r) = wedge {
        if r == 0 || r > n {
            return Err(CliError::Usage(format!("--wedge must lie in 1..={n}")));
        }
    }
    let f = LaurentPoly::mirror_pn(n);
    let j = jacobian_algebra(&f, cfg.b_max)?;
    let r0 = mult_f_matrix(&j, &f)?;
    let rinf = Matrix::from_fn(j.dim(), j.dim(), |i, k| {
        if i == k {
            Rational::from_integer((-(i as i64)).into())
        } else {
            Rational::from_integer(0.into())
        }
    });
    let labels = j
        .basis
        .iter()
        .map(|(e, c)| format!("({c}) u^{e:?}"))
        .collect();
    let point = BrieskornPoint::new(r0, rinf, labels)?;
    let shown = match wedge {
        Some(r) => gm_wedge(&point, r)?,
        None => point.clone(),
    };
    let mut report = Report::new();
    if compare {
        for r in wedge.map_or(1..=n, |r| r..=r) {
            report.extend(compare_quantum_gm(r, n)?);
        }
    }
    let artifact = match cfg.format {
        Format::Pretty => {
            let mut s = format!("R0 =\n{}Rinf = {:?}\n", shown.r0, shown.rinf_spectrum());
            if compare {
                s.push_str(&report.to_string());
            }
            s
        }
        _ => {
            let mut v = json!({
                "n": n,
                "f": f.to_json(),
                "certificate": j.certificate,
                "wedge": wedge.unwrap_or(1),
                "point": point_json(&shown),
            });
            if compare {
                v["comparison"] = report.to_json();
            }
            render_json(&v)
        }
    };
    Ok(Outcome {
        artifact,
        summary: compare.then(|| report_summary(&report)),
        detail: report.to_string(),
        ok: report.passed(),
    })
}

fn parse_omega(v: &Value) -> CliResult<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| CliError::Usage("omega must be a list".into()))?
        .iter()
        .map(|x| match x {
            Value::String(s) => Ok(parse_rational(s)?),
            Value::Number(k) => Ok(parse_rational(&k.to_string())?),
            _ => Err(CliError::Usage(format!("bad omega entry {x}"))),
        })
        .collect()
}

fn cmd_hm(family: &Path, psi: &Path, order: Option<u32>, cfg: &Config) -> CliResult<Outcome> {
    no_csv(cfg.format, "hm")?;
    let initial = PreSaitoFamily::from_json(&read_json(family)?)?;
    let input = read_json(psi)?;
    let order = order.unwrap_or(cfg.order);
    let new_vars: Vec<String> = input
        .get("new_vars")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Usage("Psi file needs new_vars".into()))?
        .iter()
        .map(|v| v.as_str().map(str::to_string).ok_or_else(|| CliError::Usage("variable names must be strings".into())))
        .collect::<CliResult<_>>()?;
    let omega = parse_omega(input.get("omega").ok_or_else(|| CliError::Usage("Psi file needs omega".into()))?)?;
    let mut vars = initial.ring.vars().to_vec();
    vars.extend(new_vars.iter().cloned());
    let ring = SeriesRing::new(vars, order);
    let psi: Vec<TruncatedSeries> = input
        .get("psi")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Usage("Psi file needs a psi list".into()))?
        .iter()
        .map(|s| TruncatedSeries::from_json(&ring, s))
        .collect::<Result<_, _>>()?;
    let out = hm_extend(&DeformationProblem {
        initial,
        new_vars,
        psi,
        omega,
        order,
    })?;
    let mut report = check_pre_saito(&out, out.order())?;
    if out.g.is_some() {
        report.extend(check_metric(&out)?);
    }
    let artifact = match cfg.format {
        Format::Pretty => pretty_family(&out),
        _ => render_json(&out.to_json()),
    };
    Ok(Outcome {
        artifact,
        summary: Some(report_summary(&report)),
        detail: report.to_string(),
        ok: report.passed(),
    })
}

fn cmd_verify(family: &Path, order: Option<u32>, cfg: &Config) -> CliResult<Outcome> {
    no_csv(cfg.format, "verify")?;
    let fam = PreSaitoFamily::from_json(&read_json(family)?)?;
    let order = order.unwrap_or(if fam.ring.nvars() == 0 { cfg.order } else { cfg.order.min(fam.order()) });
    let mut report = check_pre_saito(&fam, order)?;
    if fam.g.is_some() {
        report.extend(check_metric(&fam)?);
    }
    Ok(Outcome {
        artifact: report_artifact(&report, cfg.format),
        summary: Some(report_summary(&report)),
        detail: report.to_string(),
        ok: report.passed(),
    })
}

fn run(cli: Cli) -> CliResult<bool> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.verbose |= cli.verbose;
    cfg.validate()?;
    let outcome = match &cli.command {
        Command::Pn { n, check } => cmd_pn(*n, *check, &cfg)?,
        Command::Grassmann { r, n, oracle, metric } => cmd_grassmann(*r, *n, *oracle, *metric, cli.seed, &cfg)?,
        Command::Gw { dmax, order } => cmd_gw(*dmax, *order, &cfg)?,
        Command::Mirror { n, wedge, compare } => cmd_mirror(*n, *wedge, *compare, &cfg)?,
        Command::Hm { family, psi, order } => cmd_hm(family, psi, *order, &cfg)?,
        Command::Verify { family, order } => cmd_verify(family, *order, &cfg)?,
    };
    if cfg.verbose {
        eprint!("{}", outcome.detail);
    }
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &outcome.artifact)
                .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
            if let Some(s) = &outcome.summary {
                println!("{s}");
            }
        }
        None => {
            print!("{}", outcome.artifact);
            if let Some(s) = &outcome.summary {
                eprintln!("{s}");
            }
        }
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
