//! Command-line surface: argument parsing and command dispatch.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use star_sampling::estimators::{
    ssc_linear_er, ssc_linear_er_expected, ssc_unit_bounds_er, ssc_unit_exact, sss_linear_er,
    sss_schedule, ssr_linear_er, ssr_linear_exact, ssr_unit_bounds_er, ssr_unit_exact,
    EstimatorInput,
};
use star_sampling::graph::{degree_stats, extended_neighborhood, TargetSet};
use star_sampling::montecarlo::{
    log_spaced, run_experiment, sweep, table_experiment, CostSummary, ExperimentSpec, GraphSource,
};
use star_sampling::rng::stream_rng;
use star_sampling::{Estimate, ErParams, Variant};

use crate::edge_list::load_edge_list;
use crate::report::{estimate_row, summary_rows, write_rows, Format, Row, StatsRow};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "STAR_SAMPLING_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "star-sampling",
    version,
    about = "Star sampling on graphs: statistics, closed-form cost estimates, and Monte Carlo experiments"
)]
pub struct Cli {
    /// Worker threads for trial execution (overrides STAR_SAMPLING_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Ssr,
    Ssc,
    Sss,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Ssr => Variant::Ssr,
            VariantArg::Ssc => Variant::Ssc,
            VariantArg::Sss => Variant::Sss,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graph statistics (n, m, edge density, assortativity, max degree).
    Stats {
        /// Edge-list file: whitespace-separated id pairs, '#' comments.
        graph: PathBuf,
        /// Also write the original-id -> vertex-id remap table here.
        #[arg(long)]
        dump_remap: Option<PathBuf>,
    },
    /// Closed-form expected-cost values and bounds, no simulation.
    #[command(group(ArgGroup::new("esource").required(true).args(["n", "graph"])))]
    Estimate {
        /// ER graph order (requires --s).
        #[arg(long, requires = "s")]
        n: Option<usize>,
        /// ER edge probability.
        #[arg(long)]
        s: Option<f64>,
        /// Use a loaded graph (measured density and per-target quantities).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Target-set cardinality.
        #[arg(long)]
        n0: usize,
        /// Restrict to one variant (default: all three).
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Seed for the target draw on loaded graphs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo simulation of one experiment.
    #[command(group(ArgGroup::new("source").required(true).args(["er", "graph"])))]
    Simulate {
        /// ER source: order and edge probability.
        #[arg(long, num_args = 2, value_names = ["N", "S"])]
        er: Option<Vec<String>>,
        /// Fixed-graph source: edge-list file.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Target-set cardinality.
        #[arg(long)]
        n0: usize,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generate one ER graph and reuse it across trials.
        #[arg(long)]
        fixed_graph: bool,
        /// Draw one target and reuse it across trials.
        #[arg(long)]
        fixed_target: bool,
    },
    /// Sweep the ER edge density over a log-spaced grid.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        n0: usize,
        #[arg(long, default_value_t = 1e-4)]
        s_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        s_max: f64,
        #[arg(long, default_value_t = 12)]
        points: usize,
        /// Variants to run (comma-separated).
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![VariantArg::Ssr, VariantArg::Ssc, VariantArg::Sss])]
        variants: Vec<VariantArg>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Per-variant estimate-vs-simulation rows on a loaded graph.
    Table {
        graph: PathBuf,
        #[arg(long)]
        n0: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs a parsed invocation. Usage errors never reach here (clap exits 2);
/// anything returned as `Err` is a runtime failure (exit 1).
pub fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads(cli.threads)?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    match cli.command {
        Command::Stats { graph, dump_remap } => cmd_stats(&graph, dump_remap, cli.format, &mut out),
        Command::Estimate {
            n,
            s,
            graph,
            n0,
            variant,
            seed,
        } => cmd_estimate(n, s, graph, n0, variant, seed, cli.format, &mut out),
        Command::Simulate {
            er,
            graph,
            n0,
            variant,
            trials,
            seed,
            fixed_graph,
            fixed_target,
        } => cmd_simulate(
            er,
            graph,
            n0,
            variant,
            trials,
            seed,
            fixed_graph,
            fixed_target,
            cli.format,
            &mut out,
        ),
        Command::Sweep {
            n,
            n0,
            s_min,
            s_max,
            points,
            variants,
            trials,
            seed,
        } => cmd_sweep(
            n, n0, s_min, s_max, points, &variants, trials, seed, cli.format, &mut out,
        ),
        Command::Table {
            graph,
            n0,
            trials,
            seed,
        } => cmd_table(&graph, n0, trials, seed, cli.format, &mut out),
    }
}

fn configure_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let threads = match flag {
        Some(t) => Some(t),
        None => std::env::var(THREADS_ENV)
            .ok()
            .map(|v| v.parse::<usize>())
            .transpose()
            .context("parsing STAR_SAMPLING_THREADS")?,
    };
    if let Some(t) = threads {
        if t == 0 {
            bail!("thread count must be at least 1");
        }
        // Ignore the error if a pool already exists (e.g. under tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

fn graph_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn er_label(n: usize, s: f64) -> String {
    format!("er(n={n},s={s})")
}

fn cmd_stats(
    path: &Path,
    dump_remap: Option<PathBuf>,
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let loaded = load_edge_list(path)?;
    if let Some(remap_path) = dump_remap {
        let file = File::create(&remap_path)
            .with_context(|| format!("creating {}", remap_path.display()))?;
        loaded.dump_remap(BufWriter::new(file))?;
    }
    let stats = degree_stats(&loaded.graph);
    let row = StatsRow {
        graph: graph_label(path),
        n: loaded.graph.n(),
        m: loaded.graph.m(),
        s: loaded.graph.edge_density(),
        assortativity: stats.assortativity(),
        d_max: stats.d_max(),
    };
    write_rows(out, format, &[row])
}

/// Closed-form (unit, linear) estimates for an ER parameterization.
fn er_closed_forms(input: &EstimatorInput, variant: Variant) -> anyhow::Result<(Estimate, Estimate)> {
    Ok(match variant {
        Variant::Ssr => (
            Estimate::Bracket(ssr_unit_bounds_er(input)),
            Estimate::Bracket(ssr_linear_er(input)),
        ),
        Variant::Ssc => (
            Estimate::Bracket(ssc_unit_bounds_er(input)),
            Estimate::Point(ssc_linear_er_expected(input)),
        ),
        Variant::Sss => (
            Estimate::Point(sss_schedule(input)?.expected_unit_cost),
            Estimate::Point(sss_linear_er(input)?),
        ),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_estimate(
    n: Option<usize>,
    s: Option<f64>,
    graph: Option<PathBuf>,
    n0: usize,
    variant: Option<VariantArg>,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let variants: Vec<Variant> = match variant {
        Some(v) => vec![v.into()],
        None => Variant::ALL.to_vec(),
    };
    let mut rows: Vec<Row> = Vec::new();
    match (n, graph) {
        (Some(n), None) => {
            let s = s.expect("clap enforces --s with --n");
            let input = EstimatorInput::new(n, n0, s)?;
            let label = er_label(n, s);
            for v in &variants {
                let config = format!("estimate --n {n} --s {s} --n0 {n0} --variant {v}");
                let (unit, linear) = er_closed_forms(&input, *v)?;
                rows.push(estimate_row(label.clone(), v.name(), "unit", seed, &unit, &config));
                rows.push(estimate_row(
                    label.clone(),
                    v.name(),
                    "linear",
                    seed,
                    &linear,
                    &config,
                ));
            }
        }
        (None, Some(path)) => {
            let loaded = load_edge_list(&path)?;
            let g = &loaded.graph;
            let mut rng = stream_rng(seed, 0);
            let target = TargetSet::sample_uniform(g.n(), n0, &mut rng)?;
            let ext = extended_neighborhood(g, &target)?;
            let (n, ne, s_meas) = (g.n(), ext.n_e_star(), g.edge_density());
            let label = graph_label(&path);
            for v in &variants {
                let config = format!(
                    "estimate --graph {} --n0 {n0} --variant {} --seed {seed}",
                    path.display(),
                    v
                );
                let (unit, linear) = match v {
                    Variant::Ssr => (
                        Estimate::Point(ssr_unit_exact(n, ne)?),
                        Estimate::Point(ssr_linear_exact(&ext, n)),
                    ),
                    Variant::Ssc => (
                        Estimate::Point(ssc_unit_exact(n, ne)?),
                        Estimate::Point(ssc_linear_er(n, ne, s_meas)?),
                    ),
                    Variant::Sss => {
                        let input = EstimatorInput::new(n, n0, s_meas)?;
                        (
                            Estimate::Point(sss_schedule(&input)?.expected_unit_cost),
                            Estimate::Point(sss_linear_er(&input)?),
                        )
                    }
                };
                rows.push(estimate_row(label.clone(), v.name(), "unit", seed, &unit, &config));
                rows.push(estimate_row(
                    label.clone(),
                    v.name(),
                    "linear",
                    seed,
                    &linear,
                    &config,
                ));
            }
        }
        _ => unreachable!("clap group enforces exactly one source"),
    }
    write_rows(out, format, &rows)
}

fn parse_er(values: &[String]) -> anyhow::Result<ErParams> {
    let n: usize = values[0]
        .parse()
        .with_context(|| format!("--er order {:?}", values[0]))?;
    let s: f64 = values[1]
        .parse()
        .with_context(|| format!("--er edge probability {:?}", values[1]))?;
    Ok(ErParams::new(n, s)?)
}

fn outside_flags(summary: &star_sampling::TrialSummary) -> (Option<bool>, Option<bool>) {
    let flag = |c: &CostSummary| c.estimate.as_ref().map(|e| e.outside_ci(c.ci.0, c.ci.1));
    (flag(&summary.unit), flag(&summary.linear))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    er: Option<Vec<String>>,
    graph: Option<PathBuf>,
    n0: usize,
    variant: VariantArg,
    trials: usize,
    seed: u64,
    fixed_graph: bool,
    fixed_target: bool,
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let (source, label, source_config) = match (er, graph) {
        (Some(values), None) => {
            let params = parse_er(&values)?;
            (
                GraphSource::Er(params),
                er_label(params.n(), params.s()),
                format!("--er {} {}", params.n(), params.s()),
            )
        }
        (None, Some(path)) => {
            let loaded = load_edge_list(&path)?;
            (
                GraphSource::Fixed(Arc::new(loaded.graph)),
                graph_label(&path),
                format!("--graph {}", path.display()),
            )
        }
        _ => unreachable!("clap group enforces exactly one source"),
    };
    let variant: Variant = variant.into();
    let mut spec = ExperimentSpec::new(source, variant, n0, trials, seed);
    spec.fresh_graph_per_trial = !fixed_graph;
    spec.fresh_target_per_trial = !fixed_target;
    let summary = run_experiment(&spec)?;
    let mut config = format!(
        "simulate {source_config} --n0 {n0} --variant {variant} --trials {trials} --seed {seed}"
    );
    if fixed_graph {
        config.push_str(" --fixed-graph");
    }
    if fixed_target {
        config.push_str(" --fixed-target");
    }
    let rows = summary_rows(
        label,
        variant.name(),
        seed,
        &summary,
        outside_flags(&summary),
        &config,
    );
    write_rows(out, format, &rows)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    n: usize,
    n0: usize,
    s_min: f64,
    s_max: f64,
    points: usize,
    variants: &[VariantArg],
    trials: usize,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    if points < 2 || s_min <= 0.0 || s_max <= s_min {
        bail!("sweep needs points >= 2 and 0 < s_min < s_max");
    }
    let grid = log_spaced(s_min, s_max, points);
    let mut rows: Vec<Row> = Vec::new();
    for v in variants {
        let variant: Variant = (*v).into();
        let template = ExperimentSpec::new(
            GraphSource::Er(ErParams::new(n, grid[0])?),
            variant,
            n0,
            trials,
            seed,
        );
        for (s, summary) in sweep(&template, &grid)? {
            // each row reproduces independently as a single-point simulation
            let config = format!(
                "simulate --er {n} {s} --n0 {n0} --variant {variant} --trials {trials} --seed {seed}"
            );
            rows.extend(summary_rows(
                er_label(n, s),
                variant.name(),
                seed,
                &summary,
                outside_flags(&summary),
                &config,
            ));
        }
    }
    write_rows(out, format, &rows)
}

fn cmd_table(
    path: &Path,
    n0: usize,
    trials: usize,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let loaded = load_edge_list(path)?;
    let graph = Arc::new(loaded.graph);
    let label = graph_label(path);
    let config = format!(
        "table {} --n0 {n0} --trials {trials} --seed {seed}",
        path.display()
    );
    let mut rows: Vec<Row> = Vec::new();
    for row in table_experiment(graph, n0, trials, seed)? {
        rows.extend(summary_rows(
            label.clone(),
            row.variant.name(),
            seed,
            &row.summary,
            (
                Some(row.unit_estimate_outside_ci),
                Some(row.linear_estimate_outside_ci),
            ),
            &config,
        ));
    }
    write_rows(out, format, &rows)
}
