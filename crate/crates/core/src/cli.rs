//! Command-line front end. Every report is CSV; exit status is 0 on
//! success, 1 when a tolerance check fails and 2 on input or schema errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::composite::{
    calibrate_cross_section, composite, generalized_composite, mean_alpha, round_half_away,
    ShareRatio, Weight,
};
use crate::error::Error;
use crate::micro::{
    bottom_share, gini, lorenz_curve, palma_ratio, ratio_b_over_t, top_share, IncomeSample,
};
use crate::panel::{parse_panel, ratio_of, Panel, SchemaConfig, Source, Unit};
use crate::ranking::{compare_rankings, rank, series, write_series_csv, Indicator};
use crate::welfare::{atkinson, ge_index, ge_zero, theil, AversionParam, EntropyOrder};

const QUANTILE_PERCENTS: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];
/// Slack for comparing values rounded to 3 decimals against printed ones.
const ROUNDING_SLACK: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "ineq", version, about = "Inequality measures and composite inequality index")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gini, T/B, H, composite index and alternative index for every record.
    Compute {
        #[command(flatten)]
        panel: PanelArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Measures computed from micro-data, one non-negative number per line.
    Micro {
        #[arg(long)]
        input: PathBuf,
        /// Atkinson inequality aversion.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Generalized-entropy order.
        #[arg(long, default_value_t = 2.0)]
        ge_alpha: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Calibrated weight per (year, source) cross-section and their mean.
    Calibrate {
        #[command(flatten)]
        panel: PanelArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Competition ranking of one cross-section under an indicator.
    Rank {
        #[command(flatten)]
        panel: PanelArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, default_value = "index_i")]
        indicator: Indicator,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Per-country rank under a baseline indicator versus another indicator.
    Compare {
        #[command(flatten)]
        panel: PanelArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, default_value = "gini")]
        baseline: Indicator,
        #[arg(long, default_value = "index_i")]
        indicator: Indicator,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Year-ascending series of gini, T/B and composite index for a country.
    Series {
        #[command(flatten)]
        panel: PanelArgs,
        #[arg(long)]
        country: String,
        #[arg(long)]
        source: Option<Source>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recompute H and the composite index for a printed table and diff them.
    Replicate {
        #[command(flatten)]
        panel: PanelArgs,
        /// CSV with `country`, `h`, `index_i` and optionally `rank` columns.
        /// Defaults to the input file.
        #[arg(long)]
        expected: Option<PathBuf>,
        #[arg(long, default_value_t = 0.001)]
        tolerance: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct PanelArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Column overrides, `field=column,...`.
    #[arg(long)]
    pub schema: Option<String>,
    #[arg(long, default_value = "decimal")]
    pub gini_unit: Unit,
    #[arg(long, default_value = "decimal")]
    pub share_unit: Unit,
    /// Source for rows without a source column.
    #[arg(long, default_value = "OTHER")]
    pub default_source: Source,
    /// Treat any skipped row as a fatal input error.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long)]
    pub year: Option<i32>,
    #[arg(long)]
    pub source: Option<Source>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0.25)]
    pub weight: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable input, bad schema or bad arguments; exit 2.
    Input(String),
    /// A tolerance or acceptance check did not hold; exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(format!("writing output: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn weight(w: f64) -> CliResult<Weight> {
    Weight::new(w).map_err(|_| CliError::Input(format!("--weight {w} must lie in (0, 1]")))
}

fn load_panel(args: &PanelArgs, err: &mut dyn Write) -> CliResult<Panel> {
    let text = read(&args.input)?;
    let mut schema = SchemaConfig {
        gini_unit: args.gini_unit,
        share_unit: args.share_unit,
        default_source: args.default_source,
        ..Default::default()
    };
    if let Some(spec) = &args.schema {
        schema = schema.with_overrides(spec)?;
    }
    let (mut panel, diagnostics) = parse_panel(&text, &schema)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    for d in &diagnostics {
        writeln!(err, "{}: skipped {d}", args.input.display())?;
    }
    if args.strict && !diagnostics.is_empty() {
        return Err(CliError::Input(format!(
            "{} row(s) rejected in strict mode",
            diagnostics.len()
        )));
    }
    panel.label = args.input.display().to_string();
    Ok(panel)
}

fn emit(output: &Option<PathBuf>, bytes: &[u8], out: &mut dyn Write) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => Ok(out.write_all(bytes)?),
    }
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn fmt3(v: f64) -> String {
    format!("{:.3}", round_half_away(v, 3))
}

/// Parses arguments and runs, returning the process exit code.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Compute { panel, filter, common } => run_compute(&panel, &filter, &common, out, err),
        Command::Micro { input, epsilon, ge_alpha, common } => {
            run_micro(&input, epsilon, ge_alpha, &common, out)
        }
        Command::Calibrate { panel, filter, output } => run_calibrate(&panel, &filter, &output, out, err),
        Command::Rank { panel, filter, indicator, common } => {
            let p = load_panel(&panel, err)?.select(filter.year, filter.source);
            let table = rank(&p, indicator, weight(common.weight)?)?;
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            emit(&common.output, &buf, out)
        }
        Command::Compare { panel, filter, baseline, indicator, common } => {
            let p = load_panel(&panel, err)?.select(filter.year, filter.source);
            let w = weight(common.weight)?;
            let cmp = compare_rankings(&rank(&p, baseline, w)?, &rank(&p, indicator, w)?)?;
            let mut buf = Vec::new();
            cmp.write_csv(&mut buf)?;
            writeln!(err, "changed={} unchanged={}", cmp.changed, cmp.unchanged)?;
            emit(&common.output, &buf, out)
        }
        Command::Series { panel, country, source, common } => {
            let p = load_panel(&panel, err)?.select(None, source);
            let points = series(&p, &country, weight(common.weight)?)?;
            let mut buf = Vec::new();
            write_series_csv(&points, &mut buf)?;
            emit(&common.output, &buf, out)
        }
        Command::Replicate { panel, expected, tolerance, common } => {
            run_replicate(&panel, expected.as_deref(), tolerance, &common, out, err)
        }
    }
}

pub fn run_compute(
    panel: &PanelArgs,
    filter: &FilterArgs,
    common: &CommonArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let w = weight(common.weight)?;
    let p = load_panel(panel, err)?.select(filter.year, filter.source);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["country", "year", "gini", "t_over_b", "h", "index_i", "alt_index"])?;
    for r in p.records() {
        let c = composite(r.gini, ratio_of(r), w)?;
        writer.write_record([
            r.country.clone(),
            r.year.to_string(),
            fmt6(c.gini),
            fmt6(c.ratio.t_over_b()),
            fmt6(c.h),
            fmt6(c.index_i),
            fmt6(c.alt_index),
        ])?;
    }
    let buf = writer.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    emit(&common.output, &buf, out)
}

fn parse_values(text: &str, path: &Path) -> CliResult<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            CliError::Input(format!("{}:{}: not a number: '{line}'", path.display(), i + 1))
        })?;
        values.push(v);
    }
    Ok(values)
}

pub fn run_micro(
    input: &Path,
    epsilon: f64,
    ge_alpha: f64,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> CliResult<()> {
    let w = weight(common.weight)?;
    let eps = AversionParam::new(epsilon)?;
    let order = EntropyOrder::new(ge_alpha)?;
    let sample = IncomeSample::new(parse_values(&read(input)?, input)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;

    let mut rows: Vec<(String, String, String)> = Vec::new();
    let mut push = |measure: &str, param: String, value: Result<f64, Error>| {
        let value = value.map_or_else(|_| "undefined".to_string(), fmt6);
        rows.push((measure.to_string(), param, value));
    };

    push("n", String::new(), Ok(sample.len() as f64));
    push("mean", String::new(), Ok(sample.mean()));
    let g = gini(&sample);
    push("gini", String::new(), Ok(g));

    let lorenz = lorenz_curve(&sample);
    for k in 1..=10 {
        let share = lorenz.eval(k as f64 / 10.0) - lorenz.eval((k - 1) as f64 / 10.0);
        push("decile_share", k.to_string(), Ok(share));
    }
    let mut ratios = Vec::new();
    for x in QUANTILE_PERCENTS {
        let p = format!("{x}");
        push("bottom_share", p.clone(), bottom_share(&sample, x));
        push("top_share", p.clone(), top_share(&sample, x));
        let r = ratio_b_over_t(&sample, x)?;
        push("b_over_t", p.clone(), Ok(r.value()));
        push("t_over_b", p, Ok(r.t_over_b()));
        ratios.push((x, r));
    }
    push("palma", String::new(), palma_ratio(&sample));
    push("atkinson", format!("{epsilon}"), Ok(atkinson(&sample, eps)));
    push("ge", format!("{ge_alpha}"), ge_index(&sample, order));
    push("theil", String::new(), Ok(theil(&sample)));
    push("mld", String::new(), ge_zero(&sample));

    let c = composite(g, ratios[0].1, w)?;
    push("h", format!("{}", w.value()), Ok(c.h));
    push("index_i", format!("{}", w.value()), Ok(c.index_i));
    push("alt_index", String::new(), Ok(c.alt_index));
    push(
        "generalized_index",
        format!("{}", w.value()),
        generalized_composite(g, &ratios, &vec![w; ratios.len()]),
    );

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["measure", "parameter", "value"])?;
    for (m, p, v) in rows {
        writer.write_record([m, p, v])?;
    }
    let buf = writer.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    emit(&common.output, &buf, out)
}

pub fn run_calibrate(
    panel: &PanelArgs,
    filter: &FilterArgs,
    output: &Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let p = load_panel(panel, err)?.select(filter.year, filter.source);
    let mut groups: BTreeMap<(i32, Source), Vec<(f64, ShareRatio)>> = BTreeMap::new();
    for r in p.records() {
        groups.entry((r.year, r.source)).or_default().push((r.gini, ratio_of(r)));
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["year", "source", "countries", "avg_gini", "avg_b_over_t", "alpha"])?;
    let mut alphas = Vec::new();
    for ((year, source), obs) in &groups {
        let n = obs.len() as f64;
        let avg_gini = obs.iter().map(|o| o.0).sum::<f64>() / n;
        let avg_ratio = obs.iter().map(|o| o.1.value()).sum::<f64>() / n;
        let alpha = calibrate_cross_section(obs)?;
        alphas.push(alpha);
        writer.write_record([
            year.to_string(),
            source.to_string(),
            obs.len().to_string(),
            fmt6(avg_gini),
            fmt6(avg_ratio),
            fmt6(alpha.value()),
        ])?;
    }
    let mean = mean_alpha(&alphas)?;
    writer.write_record([
        "mean".to_string(),
        String::new(),
        alphas.len().to_string(),
        String::new(),
        String::new(),
        fmt6(mean.value()),
    ])?;
    let buf = writer.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    emit(output, &buf, out)
}

/// Printed values for one table row.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedRow {
    pub h: f64,
    pub index_i: f64,
    pub rank: Option<usize>,
}

pub fn parse_expected(text: &str) -> std::result::Result<BTreeMap<String, ExpectedRow>, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| header.iter().position(|h| h.eq_ignore_ascii_case(name));
    let country = col("country").ok_or("expected table lacks a 'country' column")?;
    let h = col("h").ok_or("expected table lacks an 'h' column")?;
    let index_i = col("index_i").ok_or("expected table lacks an 'index_i' column")?;
    let rank = col("rank");

    let mut rows = BTreeMap::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num = |idx: usize| {
            rec.get(idx)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|_| format!("expected table row {}: bad number", i + 2))
        };
        let rank = match rank {
            Some(idx) => Some(
                rec.get(idx)
                    .unwrap_or("")
                    .parse::<usize>()
                    .map_err(|_| format!("expected table row {}: bad rank", i + 2))?,
            ),
            None => None,
        };
        let name = rec.get(country).unwrap_or("").to_string();
        let row = ExpectedRow { h: num(h)?, index_i: num(index_i)?, rank };
        if rows.insert(name.clone(), row).is_some() {
            return Err(format!("expected table lists '{name}' twice"));
        }
    }
    Ok(rows)
}

/// Summary of a replication run.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub max_h_diff: f64,
    pub max_i_diff: f64,
    pub changed: usize,
    pub unchanged: usize,
    /// Countries whose H or I differs by more than the tolerance, or whose
    /// Gini rank disagrees with the printed rank.
    pub offending: Vec<String>,
}

pub fn run_replicate(
    panel_args: &PanelArgs,
    expected: Option<&Path>,
    tolerance: f64,
    common: &CommonArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let w = weight(common.weight)?;
    let panel = load_panel(panel_args, err)?;
    let expected_path = expected.unwrap_or(&panel_args.input);
    let printed = parse_expected(&read(expected_path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", expected_path.display())))?;

    let ours: BTreeSet<&str> = panel.countries();
    let theirs: BTreeSet<&str> = printed.keys().map(String::as_str).collect();
    if ours != theirs || panel.len() != ours.len() {
        let missing: Vec<_> = theirs.difference(&ours).collect();
        let extra: Vec<_> = ours.difference(&theirs).collect();
        return Err(CliError::Input(format!(
            "country sets differ (missing from input: {missing:?}; not in expected: {extra:?})"
        )));
    }

    let gini_ranks = rank(&panel, Indicator::Gini, w)?;
    let index_ranks = rank(&panel, Indicator::IndexI, w)?;
    let cmp = compare_rankings(&gini_ranks, &index_ranks)?;

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "country", "gini", "t_over_b", "h", "h_printed", "h_diff", "index_i", "index_i_printed",
        "index_i_diff", "gini_rank", "index_i_rank",
    ])?;
    let mut summary = Replication {
        max_h_diff: 0.0,
        max_i_diff: 0.0,
        changed: cmp.changed,
        unchanged: cmp.unchanged,
        offending: Vec::new(),
    };
    let mut records: Vec<_> = panel.records().iter().collect();
    records.sort_by(|a, b| a.country.cmp(&b.country));
    for r in records {
        let c = composite(r.gini, ratio_of(r), w)?;
        let exp = &printed[&r.country];
        let h_diff = (round_half_away(c.h, 3) - exp.h).abs();
        let i_diff = (round_half_away(c.index_i, 3) - exp.index_i).abs();
        summary.max_h_diff = summary.max_h_diff.max(h_diff);
        summary.max_i_diff = summary.max_i_diff.max(i_diff);
        let (g_rank, i_rank) = cmp.per_country[&r.country];
        let rank_ok = exp.rank.is_none_or(|printed_rank| printed_rank == g_rank);
        if h_diff > tolerance + ROUNDING_SLACK || i_diff > tolerance + ROUNDING_SLACK || !rank_ok {
            summary.offending.push(r.country.clone());
        }
        writer.write_record([
            r.country.clone(),
            fmt3(r.gini),
            format!("{:.2}", c.ratio.t_over_b()),
            fmt3(c.h),
            format!("{:.3}", exp.h),
            format!("{h_diff:.3}"),
            fmt3(c.index_i),
            format!("{:.3}", exp.index_i),
            format!("{i_diff:.3}"),
            g_rank.to_string(),
            i_rank.to_string(),
        ])?;
    }
    let buf = writer.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    emit(&common.output, &buf, out)?;

    writeln!(
        err,
        "rows={} max_h_diff={:.3} max_index_i_diff={:.3} tolerance={} changed={} unchanged={}",
        panel.len(),
        summary.max_h_diff,
        summary.max_i_diff,
        tolerance,
        summary.changed,
        summary.unchanged
    )?;
    if summary.offending.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "replication failed for: {}",
            summary.offending.join(", ")
        )))
    }
}
