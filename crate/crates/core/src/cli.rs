//! Command-line front end. `main` only calls [`run`].

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{bound_comparison, scaling_error_table, SCALING_SAMPLE};
use crate::cutmodel::CutSpec;
use crate::enumerate::{classify_cut, max_cut_exhaustive, phase_diagram, Grid};
use crate::error::Error;
use crate::poly::{
    poly_from_cuts, threshold_polynomial, threshold_polynomial_recursive, Precision,
    SignedExponentPoly,
};
use crate::rootfind::{threshold_table_with, RootFinder, ThresholdTable};
use crate::verify::{
    small_n_counterexamples, verify_exhaustive_with, verify_near_isolated,
    verify_near_isolated_diagnostic, ExhaustiveOptions, VerificationReport,
    DEFAULT_POINTS_PER_INTERVAL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Instances compared when `bounds` gets no `--n`/`--r`.
const STANDARD_BOUND_INSTANCES: [(usize, f64); 4] = [(8, 1.05), (8, 1.10), (8, 1.50), (10, 1.20)];

#[derive(Debug, Parser)]
#[command(
    name = "geocut",
    version,
    about = "Max-Cut on complete graphs with lexicographic geometric edge weights"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write results here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, env = "GEOCUT_THREADS", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Arithmetic for polynomial sign decisions; `extended` evaluates exactly everywhere.
    #[arg(long, value_enum, default_value_t = PrecisionArg::Double, global = true)]
    pub precision: PrecisionArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    Extended,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the threshold polynomial P^{n,k} = W(C_k) - W(C_{k+1}).
    Poly(PolyArgs),
    /// Threshold values r_k(n) for a range of n.
    Thresholds(ThresholdArgs),
    /// Globally optimal cut along a grid of r, by exhaustive enumeration.
    Phase(PhaseArgs),
    /// Maximum cut at a single (n, r).
    Enumerate(EnumerateArgs),
    /// Check that isolated cuts are globally optimal.
    Verify(VerifyArgs),
    /// Thresholds against the averaging approximation.
    Scaling(ScalingArgs),
    /// Generic Max-Cut lower bounds against the optimal isolated cut.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Closed-form exponent lists.
    Explicit,
    /// P^{n,k} = r^{N-k} + P^{n-1,k-1}.
    Recursive,
    /// Difference of the two cut vectors.
    Cuts,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Construction used.
    #[arg(long, value_enum, default_value_t = Route::Explicit)]
    pub route: Route,
    /// Also report the sign and log-magnitude at this r.
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    /// One row per n, one column per k ("--" where undefined).
    Wide,
    /// k / r_k column pairs for a single n.
    Blocks,
    /// One (n, k, r_k) row per threshold.
    Long,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 6)]
    pub n_min: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = Layout::Wide)]
    pub layout: Layout,
    /// Column pairs per row for the blocks layout.
    #[arg(long, default_value_t = 4)]
    pub columns: usize,
    /// Bisection stopping width.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Lower end of the search bracket.
    #[arg(long, default_value_t = 1.0 + 1e-9)]
    pub bracket_low: f64,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct GridArgs {
    #[arg(long, default_value_t = 1.001)]
    pub low: f64,
    #[arg(long, default_value_t = 1.999)]
    pub high: f64,
    #[arg(long, default_value_t = 0.001)]
    pub mesh: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<Grid, Error> {
        Grid::uniform(self.low, self.high, self.mesh)
    }
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Emit every grid point instead of merged segments.
    #[arg(long)]
    pub points: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyModeArg {
    Exhaustive,
    NearIsolated,
    SmallN,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = VerifyModeArg::NearIsolated)]
    pub mode: VerifyModeArg,
    #[arg(long, default_value_t = 7)]
    pub n_min: usize,
    /// Defaults to 16 (exhaustive) or 100 (near-isolated).
    #[arg(long)]
    pub n_max: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Add every threshold-interval midpoint to the exhaustive grid.
    #[arg(long)]
    pub midpoints: bool,
    #[arg(long, default_value_t = DEFAULT_POINTS_PER_INTERVAL)]
    pub points_per_interval: usize,
    /// Allow n below 7, where violations are expected.
    #[arg(long)]
    pub diagnostic: bool,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Comma-separated n:k pairs (default: the standard 12 pairs).
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Vertex count (default: the four standard instances).
    #[arg(long, requires = "r")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub r: Option<f64>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected n:k, got {s:?}"))?;
    let n = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let k = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((n, k))
}

/// Plain rows for CSV plus a JSON document for the same result.
struct Output {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    json: serde_json::Value,
}

impl Output {
    fn new<S: Into<String>>(header: impl IntoIterator<Item = S>, json: serde_json::Value) -> Self {
        Output {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            json,
        }
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
                if !self.header.is_empty() {
                    w.write_record(&self.header)?;
                }
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("result types serialize")
}

/// Six decimals, as used for thresholds.
pub fn fmt_threshold(r: f64) -> String {
    format!("{r:.6}")
}

/// Four significant figures in scientific notation from 10^4 up, two
/// decimals below.
pub fn fmt_weight(w: f64) -> String {
    if w.abs() >= 1e4 {
        format!("{w:.3e}")
    } else {
        format!("{w:.2}")
    }
}

/// Grid point without float noise, e.g. `1.241` rather than `1.2409999999999999`.
fn fmt_r(r: f64) -> String {
    let s = format!("{r:.9}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn fmt_cut(c: &CutSpec) -> String {
    c.to_string()
}

/// Parses `args` and runs the selected pipeline; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    run_config(&config)
}

/// Runs an already parsed configuration.
pub fn run_config(config: &RunConfig) -> i32 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(config));
    let (output, code) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &config.output {
        Some(path) => File::create(path).and_then(|mut f| output.write(config.format, &mut f)),
        None => output.write(config.format, &mut io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return EXIT_USAGE;
    }
    code
}

fn dispatch(config: &RunConfig) -> Result<(Output, i32), Error> {
    let precision: Precision = config.precision.into();
    match &config.command {
        Command::Poly(a) => poly_cmd(a, precision).map(|o| (o, EXIT_OK)),
        Command::Thresholds(a) => thresholds_cmd(a, precision).map(|o| (o, EXIT_OK)),
        Command::Phase(a) => phase_cmd(a).map(|o| (o, EXIT_OK)),
        Command::Enumerate(a) => enumerate_cmd(a).map(|o| (o, EXIT_OK)),
        Command::Verify(a) => verify_cmd(a),
        Command::Scaling(a) => scaling_cmd(a).map(|o| (o, EXIT_OK)),
        Command::Bounds(a) => bounds_cmd(a).map(|o| (o, EXIT_OK)),
    }
}

fn build_poly(n: usize, k: usize, route: Route) -> Result<SignedExponentPoly, Error> {
    match route {
        Route::Explicit => threshold_polynomial(n, k),
        Route::Recursive => threshold_polynomial_recursive(n, k),
        Route::Cuts => poly_from_cuts(n, k),
    }
}

fn poly_cmd(a: &PolyArgs, precision: Precision) -> Result<Output, Error> {
    let p = build_poly(a.n, a.k, a.route)?;
    let eval = a.r.map(|r| (r, p.eval_log(r, precision)));
    let mut json = json!({
        "n": a.n,
        "k": a.k,
        "polynomial": p.to_string(),
        "positive": p.pos(),
        "negative": p.neg(),
        "value_at_one": p.value_at_one(),
        "sign_changes": p.sign_changes(),
    });
    let mut header = vec!["n", "k", "polynomial", "value_at_one", "sign_changes"];
    let mut row = vec![
        a.n.to_string(),
        a.k.to_string(),
        p.to_string(),
        p.value_at_one().to_string(),
        p.sign_changes().to_string(),
    ];
    if let Some((r, v)) = eval {
        let sign = match v.sign {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        };
        json["r"] = json!(r);
        json["sign"] = json!(sign);
        json["log_abs"] = json!(v.log_abs);
        header.extend(["r", "sign", "log_abs"]);
        row.extend([r.to_string(), sign.to_string(), v.log_abs.to_string()]);
    }
    let mut out = Output::new(header, json);
    out.rows.push(row);
    Ok(out)
}

fn thresholds_cmd(a: &ThresholdArgs, precision: Precision) -> Result<Output, Error> {
    if a.n_min > a.n_max {
        return Err(Error::InvalidGrid(format!("empty n range {}..={}", a.n_min, a.n_max)));
    }
    let finder = RootFinder {
        tol: a.tol,
        low: a.bracket_low,
        precision,
        ..RootFinder::default()
    };
    let tables: Vec<ThresholdTable> = (a.n_min..=a.n_max)
        .map(|n| threshold_table_with(n, &finder))
        .collect::<Result<_, _>>()?;
    let json = to_json(&tables);
    match a.layout {
        Layout::Wide => {
            let kmax = tables.iter().map(|t| t.max_k()).max().unwrap_or(0);
            let header = std::iter::once("n".to_string()).chain((1..=kmax).map(|k| format!("k={k}")));
            let mut out = Output::new(header, json);
            for t in &tables {
                let mut row = vec![t.n.to_string()];
                row.extend((1..=kmax).map(|k| t.r(k).map_or("--".into(), fmt_threshold)));
                out.rows.push(row);
            }
            Ok(out)
        }
        Layout::Long => {
            let mut out = Output::new(["n", "k", "r_k"], json);
            for t in &tables {
                for (k, r) in t.thresholds() {
                    out.rows.push(vec![t.n.to_string(), k.to_string(), fmt_threshold(r)]);
                }
            }
            Ok(out)
        }
        Layout::Blocks => {
            if tables.len() != 1 || a.columns == 0 {
                return Err(Error::InvalidGrid(
                    "blocks layout needs a single n and at least one column".into(),
                ));
            }
            let t = &tables[0];
            let values: Vec<(usize, f64)> = t.thresholds().collect();
            let rows = values.len().div_ceil(a.columns);
            let header = (0..a.columns).flat_map(|_| ["k".to_string(), "r_k".to_string()]);
            let mut out = Output::new(header, json);
            for i in 0..rows {
                let mut row = Vec::new();
                for c in 0..a.columns {
                    if let Some(&(k, r)) = values.get(c * rows + i) {
                        row.push(k.to_string());
                        row.push(fmt_threshold(r));
                    }
                }
                out.rows.push(row);
            }
            Ok(out)
        }
    }
}

fn phase_cmd(a: &PhaseArgs) -> Result<Output, Error> {
    let pd = phase_diagram(a.n, &a.grid.grid()?)?;
    if a.points {
        let mut out = Output::new(["r", "winner", "class", "log_weight", "margin", "tied"], to_json(&pd));
        for p in &pd.points {
            out.rows.push(vec![
                fmt_r(p.r),
                fmt_cut(&p.winner),
                p.class.to_string(),
                p.weight_log.to_string(),
                p.margin.to_string(),
                p.tied.to_string(),
            ]);
        }
        Ok(out)
    } else {
        let mut out = Output::new(["r_first", "r_last", "points", "winner", "class"], to_json(&pd));
        for s in &pd.segments {
            out.rows.push(vec![
                fmt_r(s.r_first),
                fmt_r(s.r_last),
                (s.end - s.start).to_string(),
                fmt_cut(&s.winner),
                s.class.to_string(),
            ]);
        }
        Ok(out)
    }
}

fn enumerate_cmd(a: &EnumerateArgs) -> Result<Output, Error> {
    if !(a.r > 1.0 && a.r < 2.0) {
        eprintln!("warning: r = {} lies outside (1, 2)", a.r);
    }
    let res = max_cut_exhaustive(a.n, a.r)?;
    let mut out = Output::new(
        ["n", "r", "best", "class", "weight", "runner_up", "margin", "ties"],
        to_json(&res),
    );
    out.rows.push(vec![
        a.n.to_string(),
        a.r.to_string(),
        fmt_cut(&res.best),
        classify_cut(&res.best).to_string(),
        fmt_weight(res.best_weight.value()),
        fmt_cut(&res.runner_up),
        res.margin.to_string(),
        res.ties.iter().map(fmt_cut).collect::<Vec<_>>().join(" "),
    ]);
    Ok(out)
}

fn report_output(rep: &VerificationReport) -> Output {
    let mut out = Output::new(
        ["n", "r", "winner", "class", "expected_k", "margin"],
        to_json(rep),
    );
    for v in &rep.violations {
        out.rows.push(vec![
            v.n.to_string(),
            v.r.to_string(),
            fmt_cut(&v.winner),
            v.winner_class.to_string(),
            v.expected_isolated.to_string(),
            v.margin.to_string(),
        ]);
    }
    out
}

fn verify_cmd(a: &VerifyArgs) -> Result<(Output, i32), Error> {
    match a.mode {
        VerifyModeArg::SmallN => {
            let structures = small_n_counterexamples()?;
            let mut out = Output::new(["n", "r_low", "r_high", "winner", "class"], to_json(&structures));
            for s in &structures {
                for (i, w) in s.winners.iter().enumerate() {
                    let lo = if i == 0 { 1.0 } else { s.boundaries[i - 1] };
                    let hi = s.boundaries.get(i).copied().unwrap_or(2.0);
                    out.rows.push(vec![
                        s.n.to_string(),
                        fmt_threshold(lo),
                        fmt_threshold(hi),
                        fmt_cut(w),
                        s.classes[i].to_string(),
                    ]);
                }
            }
            Ok((out, EXIT_OK))
        }
        VerifyModeArg::Exhaustive => {
            let opts = ExhaustiveOptions {
                grid: a.grid.grid()?,
                interval_midpoints: a.midpoints,
                diagnostic: a.diagnostic,
            };
            let rep = verify_exhaustive_with(a.n_min, a.n_max.unwrap_or(16), &opts)?;
            Ok(finish_report(&rep))
        }
        VerifyModeArg::NearIsolated => {
            let n_max = a.n_max.unwrap_or(100);
            let rep = if a.diagnostic {
                verify_near_isolated_diagnostic(a.n_min, n_max, a.points_per_interval)?
            } else {
                verify_near_isolated(a.n_min, n_max, a.points_per_interval)?
            };
            Ok(finish_report(&rep))
        }
    }
}

fn finish_report(rep: &VerificationReport) -> (Output, i32) {
    eprintln!(
        "checked {} ({} settled exactly, {} indeterminate), {} violations, {:.2?}",
        rep.checked_count,
        rep.resolved_exactly,
        rep.indeterminate.len(),
        rep.violations.len(),
        rep.elapsed
    );
    let code = if rep.upheld() { EXIT_OK } else { EXIT_VIOLATIONS };
    (report_output(rep), code)
}

fn scaling_cmd(a: &ScalingArgs) -> Result<Output, Error> {
    let pairs = if a.pairs.is_empty() {
        SCALING_SAMPLE.to_vec()
    } else {
        a.pairs.clone()
    };
    let rows = scaling_error_table(&pairs)?;
    let mut out = Output::new(["n", "k", "actual", "predicted", "error_percent"], to_json(&rows));
    for r in &rows {
        out.rows.push(vec![
            r.n.to_string(),
            r.k.to_string(),
            format!("{:.4}", r.actual),
            format!("{:.4}", r.predicted),
            format!("{:+.1}", r.error_percent),
        ]);
    }
    Ok(out)
}

fn bounds_cmd(a: &BoundsArgs) -> Result<Output, Error> {
    let instances = match (a.n, a.r) {
        (Some(n), Some(r)) => vec![(n, r)],
        _ => STANDARD_BOUND_INSTANCES.to_vec(),
    };
    let rows = instances
        .iter()
        .map(|&(n, r)| bound_comparison(n, r))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Output::new(
        ["n", "r", "k", "optimum", "gy_bound", "gap_percent", "pt_bound"],
        to_json(&rows),
    );
    for b in &rows {
        out.rows.push(vec![
            b.n.to_string(),
            format!("{:.2}", b.r),
            b.optimal_k.to_string(),
            fmt_weight(b.optimum),
            fmt_weight(b.gy_bound),
            format!("{:.1}", b.gap_gy),
            fmt_weight(b.pt_bound),
        ]);
    }
    Ok(out)
}
