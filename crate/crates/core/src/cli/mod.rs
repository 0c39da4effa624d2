//! Command-line frontend.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::alexander::alexander_report;
use crate::covers::{homology, sigma_prime_rank, HomologyMethod, HomologySummary};
use crate::growth::{comparison, estimate_rate, run_family, write_records, EmitFormat, FamilySpec, GrowthError};
use crate::lattices::Lattice;
use crate::laurent::LaurentPoly;
use crate::linkio::{builtin_link, builtin_polynomial, lookup, parse_pd, table, wirtinger, LinkDiagram, LinkSource};
use crate::mahler::{mahler, MahlerOptions, DEFAULT_SEED, DEFAULT_TOL};

/// The JSON schema every `--format json` output validates against.
pub const OUTPUT_SCHEMA: &str = include_str!("../../schema/output.schema.json");

#[derive(Debug, Parser)]
#[command(
    name = "linkgrowth",
    version,
    about = "Alexander polynomials, Mahler measures and branched-cover homology of links"
)]
pub struct Cli {
    /// Quadrature tolerance on log M.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for growth sweeps and quadrature (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for the root finder's starting points.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct LinkArgs {
    /// Built-in link name or alias (see `table`).
    #[arg(long)]
    pub link: Option<String>,
    /// PD code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]".
    #[arg(long)]
    pub pd: Option<String>,
    /// File holding a diagram as JSON.
    #[arg(long)]
    pub diagram_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Relative,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in links.
    Table,
    /// Alexander polynomial of a link.
    Alex {
        #[command(flatten)]
        link: LinkArgs,
    },
    /// Mahler measure of a polynomial or of a link's Alexander polynomial.
    Mahler {
        #[arg(long, conflicts_with = "link", required_unless_present = "link")]
        poly: Option<String>,
        #[arg(long)]
        link: Option<String>,
    },
    /// First homology of a finite abelian branched cover.
    Cover {
        #[command(flatten)]
        link: LinkArgs,
        /// Lattice, e.g. "cyclic:7", "diag:3,2", "cols:2,1;-1,2".
        #[arg(long)]
        lattice: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Relative)]
        method: MethodArg,
    },
    /// Growth series of torsion over a family of lattices.
    Growth {
        #[command(flatten)]
        link: LinkArgs,
        /// "cyclic:R", "diag:N" or "list:SPEC|SPEC|..." (default cyclic:60 for
        /// knots, diag:12 otherwise).
        #[arg(long)]
        family: Option<String>,
        /// Records in the tail window (default 10, capped at the family size).
        #[arg(long)]
        tail: Option<usize>,
        /// Write the series here (CSV, or JSON with --format json).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Relative)]
        method: MethodArg,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn compute(e: impl ToString) -> CliError {
    CliError::Compute(e.to_string())
}

type CliResult = Result<(), CliError>;

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Compute(msg)) = &e;
            let _ = writeln!(err, "error: {msg}");
            e.code()
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(usage(format!("--tol must be positive, got {tol}")));
    }
    let opts = MahlerOptions { tol, seed: cli.seed.unwrap_or(DEFAULT_SEED) };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be positive"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(compute)?;
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let out = &mut buf;
        match &cli.command {
            Command::Table => cmd_table(cli.format, out),
            Command::Alex { link } => cmd_alex(cli.format, link, out),
            Command::Mahler { poly, link } => cmd_mahler(cli.format, poly.as_deref(), link.as_deref(), &opts, out),
            Command::Cover { link, lattice, method } => cmd_cover(cli.format, link, lattice, *method, out),
            Command::Growth { link, family, tail, out: path, method } => {
                cmd_growth(cli.format, link, family.as_deref(), *tail, path.as_ref(), *method, &opts, out)
            }
        }
    });
    out.write_all(&buf).map_err(io)?;
    result
}

fn io(e: std::io::Error) -> CliError {
    compute(e)
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(compute)?;
    writeln!(out, "{text}").map_err(io)
}

fn no_csv(command: &str) -> CliError {
    usage(format!("--format csv is available for `table` and `growth`, not `{command}`"))
}

fn link_label(args: &LinkArgs) -> String {
    if let Some(name) = &args.link {
        name.clone()
    } else if let Some(path) = &args.diagram_json {
        path.display().to_string()
    } else {
        "pd".to_string()
    }
}

fn load_diagram(args: &LinkArgs) -> Result<LinkDiagram, CliError> {
    if let Some(name) = &args.link {
        lookup(name).ok_or_else(|| usage(format!("unknown link {name:?}; run `table` for the list")))?;
        builtin_link(name).map_err(usage)
    } else if let Some(text) = &args.pd {
        parse_pd(text).and_then(|pd| pd.to_diagram()).map_err(usage)
    } else if let Some(path) = &args.diagram_json {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        LinkDiagram::from_json(&text).map_err(usage)
    } else {
        Err(usage("one of --link, --pd, --diagram-json is required"))
    }
}

#[derive(Serialize)]
struct TableRow {
    name: &'static str,
    aliases: Vec<&'static str>,
    components: usize,
    known_delta: &'static str,
    has_diagram: bool,
}

#[derive(Serialize)]
struct TableOutput {
    command: &'static str,
    links: Vec<TableRow>,
}

fn cmd_table(format: Format, out: &mut dyn Write) -> CliResult {
    let rows: Vec<TableRow> = table()
        .iter()
        .map(|e| TableRow {
            name: e.name,
            aliases: e.aliases.to_vec(),
            components: e.components,
            known_delta: e.known_delta,
            has_diagram: !matches!(e.source, LinkSource::PolynomialOnly(_)),
        })
        .collect();
    match format {
        Format::Json => print_json(out, &TableOutput { command: "table", links: rows }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["name", "aliases", "components", "known_delta", "has_diagram"]).map_err(compute)?;
            for r in &rows {
                w.write_record([
                    r.name.to_string(),
                    r.aliases.join(" "),
                    r.components.to_string(),
                    r.known_delta.to_string(),
                    r.has_diagram.to_string(),
                ])
                .map_err(compute)?;
            }
            w.flush().map_err(io)
        }
        Format::Text => {
            writeln!(out, "{:<12} {:<22} {:>4}  delta", "name", "aliases", "d").map_err(io)?;
            for r in &rows {
                let note = if r.has_diagram { "" } else { "  (polynomial only)" };
                writeln!(
                    out,
                    "{:<12} {:<22} {:>4}  {}{note}",
                    r.name,
                    r.aliases.join(","),
                    r.components,
                    r.known_delta
                )
                .map_err(io)?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct AlexOutput {
    command: &'static str,
    link: String,
    components: usize,
    delta: String,
    #[serde(rename = "det_R")]
    det_r: String,
    convention_note: String,
}

fn cmd_alex(format: Format, args: &LinkArgs, out: &mut dyn Write) -> CliResult {
    if format == Format::Csv {
        return Err(no_csv("alex"));
    }
    let pres = wirtinger(&load_diagram(args)?).map_err(usage)?;
    let rep = alexander_report(&pres).map_err(compute)?;
    let record = AlexOutput {
        command: "alex",
        link: link_label(args),
        components: pres.num_components,
        delta: rep.delta.to_string(),
        det_r: rep.det_r.to_string(),
        convention_note: rep.convention_note(),
    };
    if format == Format::Json {
        return print_json(out, &record);
    }
    writeln!(out, "{}", record.delta).map_err(io)?;
    writeln!(out, "{}", serde_json::to_string(&record).map_err(compute)?).map_err(io)
}

#[derive(Serialize)]
struct MahlerOutput {
    command: &'static str,
    polynomial: String,
    value: f64,
    log_value: f64,
    method: &'static str,
    error_bound: f64,
    converged: bool,
}

fn cmd_mahler(
    format: Format,
    poly: Option<&str>,
    link: Option<&str>,
    opts: &MahlerOptions,
    out: &mut dyn Write,
) -> CliResult {
    if format == Format::Csv {
        return Err(no_csv("mahler"));
    }
    let f: LaurentPoly = match (poly, link) {
        (Some(text), _) => text.parse().map_err(|e| usage(format!("polynomial {text:?}: {e}")))?,
        (None, Some(name)) => {
            let entry =
                lookup(name).ok_or_else(|| usage(format!("unknown link {name:?}; run `table` for the list")))?;
            if let LinkSource::PolynomialOnly(_) = entry.source {
                builtin_polynomial(name).map_err(usage)?
            } else {
                let pres = wirtinger(&builtin_link(name).map_err(usage)?).map_err(usage)?;
                alexander_report(&pres).map_err(compute)?.delta
            }
        }
        (None, None) => return Err(usage("one of --poly, --link is required")),
    };
    let r = mahler(&f, opts).map_err(compute)?;
    let record = MahlerOutput {
        command: "mahler",
        polynomial: f.to_string(),
        value: r.value,
        log_value: r.log_value,
        method: r.method.as_str(),
        error_bound: r.error_bound,
        converged: r.diagnostics.converged,
    };
    if format == Format::Json {
        return print_json(out, &record);
    }
    writeln!(out, "M({}) = {}", record.polynomial, record.value).map_err(io)?;
    writeln!(out, "log M = {}  (method {}, error bound {:e})", record.log_value, record.method, record.error_bound)
        .map_err(io)?;
    if !record.converged {
        writeln!(out, "warning: quadrature did not reach the requested tolerance").map_err(io)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CoverOutput {
    command: &'static str,
    link: String,
    lattice: String,
    index: u64,
    method: &'static str,
    betti: usize,
    #[serde(serialize_with = "crate::serde_big::vec")]
    invariant_factors: Vec<BigInt>,
    #[serde(serialize_with = "crate::serde_big::one")]
    torsion_order: BigInt,
    sfix_dim: Option<usize>,
    sigma_prime_rank: u64,
    shortest_vector: Option<f64>,
    /// Whether the two paths agree (`both` only).
    paths_agree: Option<bool>,
}

fn group_text(s: &HomologySummary) -> String {
    let mut parts = Vec::new();
    if s.betti > 0 {
        parts.push(if s.betti == 1 { "Z".to_string() } else { format!("Z^{}", s.betti) });
    }
    parts.extend(s.invariant_factors.iter().map(|f| format!("Z/{f}")));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn cmd_cover(format: Format, args: &LinkArgs, lattice: &str, method: MethodArg, out: &mut dyn Write) -> CliResult {
    if format == Format::Csv {
        return Err(no_csv("cover"));
    }
    let lam: Lattice = lattice.parse().map_err(usage)?;
    let pres = wirtinger(&load_diagram(args)?).map_err(usage)?;
    if lam.dim() != pres.num_components {
        return Err(usage(format!(
            "lattice {lam} has dimension {} but the link has {} components",
            lam.dim(),
            pres.num_components
        )));
    }
    let (summary, agree) = match method {
        MethodArg::Direct => (homology(&pres, &lam, HomologyMethod::Direct).map_err(compute)?, None),
        MethodArg::Relative => (homology(&pres, &lam, HomologyMethod::Relative).map_err(compute)?, None),
        MethodArg::Both => {
            let direct = homology(&pres, &lam, HomologyMethod::Direct).map_err(compute)?;
            let relative = homology(&pres, &lam, HomologyMethod::Relative).map_err(compute)?;
            let agree = direct.same_group(&relative);
            (relative, Some(agree))
        }
    };
    let record = CoverOutput {
        command: "cover",
        link: link_label(args),
        lattice: summary.lattice.clone(),
        index: summary.index,
        method: match method {
            MethodArg::Direct => "direct",
            MethodArg::Relative => "relative",
            MethodArg::Both => "both",
        },
        betti: summary.betti,
        invariant_factors: summary.invariant_factors.clone(),
        torsion_order: summary.torsion_order.clone(),
        sfix_dim: summary.sfix_dim,
        sigma_prime_rank: sigma_prime_rank(&pres, &lam).map_err(compute)?,
        shortest_vector: summary.shortest_vector,
        paths_agree: agree,
    };
    if format == Format::Json {
        print_json(out, &record)?;
    } else {
        writeln!(out, "H1 = {}", group_text(&summary)).map_err(io)?;
        writeln!(
            out,
            "lattice {}  index {}  betti {}  torsion order {}",
            record.lattice, record.index, record.betti, record.torsion_order
        )
        .map_err(io)?;
        if let Some(d) = record.sfix_dim {
            writeln!(out, "sfix_dim {d}  sigma_prime_rank {}", record.sigma_prime_rank).map_err(io)?;
        }
        if let Some(a) = agree {
            writeln!(out, "direct and relative paths {}", if a { "agree" } else { "DISAGREE" }).map_err(io)?;
        }
    }
    match agree {
        Some(false) => Err(compute("direct and relative homology differ")),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct GrowthOutput<'a> {
    command: &'static str,
    link: String,
    family: String,
    method: &'static str,
    records: &'a [crate::growth::GrowthRecord],
    failures: &'a [crate::growth::LatticeFailure],
    comparison: crate::growth::Comparison,
    rate: Option<crate::growth::RateEstimate>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_growth(
    format: Format,
    args: &LinkArgs,
    family: Option<&str>,
    tail: Option<usize>,
    path: Option<&PathBuf>,
    method: MethodArg,
    opts: &MahlerOptions,
    out: &mut dyn Write,
) -> CliResult {
    let pres = wirtinger(&load_diagram(args)?).map_err(usage)?;
    let d = pres.num_components;
    let fam = match family {
        Some(text) => text.parse::<FamilySpec>().map_err(usage)?,
        None => FamilySpec::default_for(d, if d == 1 { 60 } else { 12 }),
    };
    let lattices = fam.lattices(d).map_err(usage)?;
    let tail = tail.unwrap_or(lattices.len().min(10));
    if tail == 0 || tail > lattices.len() {
        return Err(usage(format!("--tail must be between 1 and the family size {}", lattices.len())));
    }
    let hm = match method {
        MethodArg::Direct => HomologyMethod::Direct,
        MethodArg::Relative => HomologyMethod::Relative,
        MethodArg::Both => return Err(usage("growth takes --method direct or relative")),
    };
    let run = run_family(&pres, &fam, hm).map_err(compute)?;
    let cmp = comparison(&pres, opts).map_err(compute)?;
    let rate = match estimate_rate(&run.records, tail.min(run.records.len()), cmp.log_mahler) {
        Ok(r) => Some(r),
        Err(GrowthError::EmptySeries) => None,
        Err(e) => return Err(compute(e)),
    };
    let report = GrowthOutput {
        command: "growth",
        link: link_label(args),
        family: fam.to_string(),
        method: if hm == HomologyMethod::Direct { "direct" } else { "relative" },
        records: &run.records,
        failures: &run.failures,
        comparison: cmp,
        rate,
    };
    if let Some(p) = path {
        let ef = if format == Format::Json { EmitFormat::Json } else { EmitFormat::Csv };
        crate::growth::emit(&run.records, ef, p).map_err(compute)?;
    }
    match (format, path) {
        (Format::Json, _) => print_json(out, &report)?,
        (Format::Csv, None) => write_records(&run.records, EmitFormat::Csv, &mut *out).map_err(compute)?,
        (Format::Text, None) => {
            writeln!(
                out,
                "{:<16} {:>6} {:>8} {:>5} {:>12}  torsion_order",
                "lattice", "m", "min_vec", "betti", "norm_log"
            )
            .map_err(io)?;
            for r in &run.records {
                let mv = r.min_vec.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
                writeln!(
                    out,
                    "{:<16} {:>6} {:>8} {:>5} {:>12.6}  {}",
                    r.lattice, r.m, mv, r.betti, r.normalized_log, r.b
                )
                .map_err(io)?;
            }
            growth_summary(&report, out)?;
        }
        (_, Some(p)) => {
            writeln!(out, "wrote {} records to {}", run.records.len(), p.display()).map_err(io)?;
            growth_summary(&report, out)?;
        }
    }
    if run.failures.is_empty() {
        Ok(())
    } else {
        let list: Vec<String> = run.failures.iter().map(|f| format!("{}: {}", f.lattice, f.error)).collect();
        Err(compute(format!("{} lattice(s) failed: {}", run.failures.len(), list.join("; "))))
    }
}

fn growth_summary(report: &GrowthOutput<'_>, out: &mut dyn Write) -> CliResult {
    let c = &report.comparison;
    match (&c.polynomial, c.log_mahler) {
        (Some(p), Some(l)) => writeln!(out, "reference: log M({p}) = {l}  ({})", c.note),
        _ => writeln!(out, "reference: none ({})", c.note),
    }
    .map_err(io)?;
    if let Some(r) = &report.rate {
        write!(out, "last {}  tail_max({}) {}", r.last, r.tail, r.tail_max).map_err(io)?;
        if let Some(g) = r.abs_gap {
            write!(out, "  abs_gap {g}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    Ok(())
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = dispatch(argv, &mut out, &mut err);
    let _ = out.flush();
    code
}
