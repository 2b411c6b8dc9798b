//! Trial orchestration: repeated sampler runs, confidence intervals, sweeps
//! over the edge density, and estimate-vs-simulation comparison.
//!
//! Each trial draws from its own RNG stream derived from
//! `(master_seed, trial_index)`, so a given spec reproduces bit-identical
//! per-trial costs no matter how many workers run it.

use std::sync::Arc;

use rayon::prelude::*;

use crate::er::ErParams;
use crate::error::{Error, Result};
use crate::estimators::{
    ssc_linear_er, ssc_unit_bounds_er, ssc_unit_exact, sss_linear_er, sss_schedule,
    ssr_linear_er, ssr_linear_exact, ssr_unit_bounds_er, ssr_unit_exact,
    urn_mean_without_replacement, Bounds, EstimatorInput,
};
use crate::graph::{extended_neighborhood, Graph, TargetSet};
use crate::rng::{stream_rng, SHARED_GRAPH_STREAM, SHARED_TARGET_STREAM};
use crate::sampler::{run, SamplerOptions, Variant};
use crate::stats::mean_sd_ci95;

/// Where each trial's graph comes from.
#[derive(Clone, Debug)]
pub enum GraphSource {
    /// Fresh or shared Erdős–Rényi draws.
    Er(ErParams),
    /// A loaded, fixed graph.
    Fixed(Arc<Graph>),
}

impl GraphSource {
    pub fn n(&self) -> usize {
        match self {
            GraphSource::Er(p) => p.n(),
            GraphSource::Fixed(g) => g.n(),
        }
    }
}

/// A complete experiment description; everything downstream is a pure
/// function of this value.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub source: GraphSource,
    pub variant: Variant,
    pub n0_star: usize,
    pub trials: usize,
    pub master_seed: u64,
    /// Regenerate the ER graph every trial (expectations over the graph
    /// distribution). Ignored for fixed graphs.
    pub fresh_graph_per_trial: bool,
    /// Draw a fresh uniform target every trial.
    pub fresh_target_per_trial: bool,
}

impl ExperimentSpec {
    /// Defaults follow the analysis setting: fresh graph and fresh target
    /// per trial.
    pub fn new(
        source: GraphSource,
        variant: Variant,
        n0_star: usize,
        trials: usize,
        master_seed: u64,
    ) -> Self {
        ExperimentSpec {
            source,
            variant,
            n0_star,
            trials,
            master_seed,
            fresh_graph_per_trial: true,
            fresh_target_per_trial: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::NoTrials);
        }
        if self.n0_star == 0 {
            return Err(Error::EmptyTarget);
        }
        let n = self.source.n();
        if self.n0_star > n {
            return Err(Error::TargetTooLarge {
                n0_star: self.n0_star,
                n,
            });
        }
        Ok(())
    }
}

/// A point estimate or a lower/upper bracket attached to a simulated mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Estimate {
    Point(f64),
    Bracket(Bounds),
}

impl Estimate {
    pub fn lo(&self) -> f64 {
        match self {
            Estimate::Point(p) => *p,
            Estimate::Bracket(b) => b.lower,
        }
    }

    pub fn hi(&self) -> f64 {
        match self {
            Estimate::Point(p) => *p,
            Estimate::Bracket(b) => b.upper,
        }
    }

    pub fn point(&self) -> Option<f64> {
        match self {
            Estimate::Point(p) => Some(*p),
            Estimate::Bracket(_) => None,
        }
    }

    /// True when the estimate lies entirely outside `[ci_lo, ci_hi]`
    /// (the tables' bold convention).
    pub fn outside_ci(&self, ci_lo: f64, ci_hi: f64) -> bool {
        self.hi() < ci_lo || self.lo() > ci_hi
    }
}

/// Simulation summary for one cost model.
#[derive(Clone, Debug)]
pub struct CostSummary {
    pub mean: f64,
    pub sd: f64,
    /// 95% interval `mean ± 1.96 sd / sqrt(trials)`.
    pub ci: (f64, f64),
    pub estimate: Option<Estimate>,
    /// `100 |mean - estimate| / mean`, only for point estimates.
    pub rel_err_pct: Option<f64>,
}

impl CostSummary {
    pub fn ci_half_width(&self) -> f64 {
        (self.ci.1 - self.ci.0) / 2.0
    }

    fn from_samples(samples: &[f64], estimate: Option<Estimate>) -> Self {
        let (mean, sd, hw) = mean_sd_ci95(samples);
        let rel_err_pct = estimate
            .as_ref()
            .and_then(Estimate::point)
            .map(|p| 100.0 * (mean - p).abs() / mean);
        CostSummary {
            mean,
            sd,
            ci: (mean - hw, mean + hw),
            estimate,
            rel_err_pct,
        }
    }
}

/// Unit- and linear-cost summaries of one experiment.
#[derive(Clone, Debug)]
pub struct TrialSummary {
    pub trials: usize,
    pub unit: CostSummary,
    pub linear: CostSummary,
}

struct TrialData {
    unit: f64,
    linear: f64,
    est_unit: Option<f64>,
    est_linear: Option<f64>,
}

fn run_trial(spec: &ExperimentSpec, trial: u64, shared: &SharedInputs) -> Result<TrialData> {
    let mut rng = stream_rng(spec.master_seed, trial);
    let graph: Arc<Graph> = match (&spec.source, &shared.graph) {
        (_, Some(g)) => g.clone(),
        (GraphSource::Er(params), None) => Arc::new(params.generate(&mut rng)),
        (GraphSource::Fixed(g), None) => g.clone(),
    };
    let target = match &shared.target {
        Some(t) => t.clone(),
        None => TargetSet::sample_uniform(graph.n(), spec.n0_star, &mut rng)?,
    };
    let outcome = run(
        spec.variant,
        &graph,
        &target,
        &mut rng,
        &SamplerOptions::default(),
    )?;

    let (est_unit, est_linear) = if matches!(spec.source, GraphSource::Fixed(_)) {
        per_target_estimates(spec.variant, &graph, &target)?
    } else {
        (None, None)
    };
    Ok(TrialData {
        unit: outcome.unit_cost as f64,
        linear: outcome.linear_cost as f64,
        est_unit,
        est_linear,
    })
}

/// Measured-target estimates for fixed graphs ("assuming n_0^{e,*} is
/// known"): exact SSR/SSC unit costs and the SSR-exact / SSC-approximate
/// linear costs, all from the drawn target's extended neighborhood. SSS has
/// no per-target form; its ER approximation is attached at summary level.
fn per_target_estimates(
    variant: Variant,
    graph: &Graph,
    target: &TargetSet,
) -> Result<(Option<f64>, Option<f64>)> {
    let ext = extended_neighborhood(graph, target)?;
    let n = graph.n();
    let ne = ext.n_e_star();
    Ok(match variant {
        Variant::Ssr => (
            Some(ssr_unit_exact(n, ne)?),
            Some(ssr_linear_exact(&ext, n)),
        ),
        Variant::Ssc => (
            Some(ssc_unit_exact(n, ne)?),
            Some(ssc_linear_er(n, ne, graph.edge_density())?),
        ),
        Variant::Sss => (None, None),
    })
}

struct SharedInputs {
    graph: Option<Arc<Graph>>,
    target: Option<TargetSet>,
}

fn shared_inputs(spec: &ExperimentSpec) -> Result<SharedInputs> {
    let graph = match &spec.source {
        GraphSource::Fixed(g) => Some(g.clone()),
        GraphSource::Er(params) if !spec.fresh_graph_per_trial => {
            let mut rng = stream_rng(spec.master_seed, SHARED_GRAPH_STREAM);
            Some(Arc::new(params.generate(&mut rng)))
        }
        GraphSource::Er(_) => None,
    };
    let target = if spec.fresh_target_per_trial {
        None
    } else {
        let n = graph.as_ref().map(|g| g.n()).unwrap_or(spec.source.n());
        let mut rng = stream_rng(spec.master_seed, SHARED_TARGET_STREAM);
        Some(TargetSet::sample_uniform(n, spec.n0_star, &mut rng)?)
    };
    Ok(SharedInputs { graph, target })
}

/// Per-trial `(unit, linear)` costs, in trial order. Deterministic in the
/// spec alone, regardless of worker count.
pub fn collect_costs(spec: &ExperimentSpec) -> Result<Vec<(u64, u64)>> {
    spec.validate()?;
    let shared = shared_inputs(spec)?;
    (0..spec.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(spec, i, &shared).map(|d| (d.unit as u64, d.linear as u64)))
        .collect()
}

/// Runs the experiment and attaches the matching analytical estimates.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<TrialSummary> {
    spec.validate()?;
    let shared = shared_inputs(spec)?;
    let data: Vec<TrialData> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(spec, i, &shared))
        .collect::<Result<_>>()?;

    let unit_samples: Vec<f64> = data.iter().map(|d| d.unit).collect();
    let linear_samples: Vec<f64> = data.iter().map(|d| d.linear).collect();

    let (est_unit, est_linear) = match &spec.source {
        GraphSource::Er(params) => er_estimates(params, spec.n0_star)[&spec.variant],
        GraphSource::Fixed(g) => {
            let mean_opt = |xs: Vec<f64>| {
                (xs.len() == data.len()).then(|| {
                    Estimate::Point(mean_sd_ci95(&xs).0)
                })
            };
            match spec.variant {
                Variant::Sss => {
                    let (u, l) = sss_estimates_for_density(g.n(), spec.n0_star, g.edge_density());
                    (Some(u), Some(l))
                }
                _ => {
                    let units: Vec<f64> = data.iter().filter_map(|d| d.est_unit).collect();
                    let linears: Vec<f64> = data.iter().filter_map(|d| d.est_linear).collect();
                    (mean_opt(units), mean_opt(linears))
                }
            }
        }
    };

    Ok(TrialSummary {
        trials: spec.trials,
        unit: CostSummary::from_samples(&unit_samples, est_unit),
        linear: CostSummary::from_samples(&linear_samples, est_linear),
    })
}

struct ErEstimates {
    ssr: (Option<Estimate>, Option<Estimate>),
    ssc: (Option<Estimate>, Option<Estimate>),
    sss: (Option<Estimate>, Option<Estimate>),
}

impl std::ops::Index<&Variant> for ErEstimates {
    type Output = (Option<Estimate>, Option<Estimate>);
    fn index(&self, v: &Variant) -> &Self::Output {
        match v {
            Variant::Ssr => &self.ssr,
            Variant::Ssc => &self.ssc,
            Variant::Sss => &self.sss,
        }
    }
}

/// `(unit, linear)` estimates per variant for an ER source: unit-cost
/// bounds for SSR, bounds plus pmf-averaged linear approximation for SSC,
/// and the schedule approximations for SSS.
fn er_estimates(params: &ErParams, n0_star: usize) -> ErEstimates {
    let input = EstimatorInput::new(params.n(), n0_star, params.s())
        .expect("spec validated before estimates");
    let ssc_linear = crate::estimators::ssc_linear_er_expected(&input);
    let (sss_unit, sss_linear) = sss_estimates_for_density(params.n(), n0_star, params.s());
    ErEstimates {
        ssr: (
            Some(Estimate::Bracket(ssr_unit_bounds_er(&input))),
            Some(Estimate::Bracket(ssr_linear_er(&input))),
        ),
        ssc: (
            Some(Estimate::Bracket(ssc_unit_bounds_er(&input))),
            Some(Estimate::Point(ssc_linear)),
        ),
        sss: (Some(sss_unit), Some(sss_linear)),
    }
}

/// SSS `(unit, linear)` estimates with the degenerate densities routed to
/// their exact substitutes: at `s = 0` SSS coincides with SSC on an
/// edgeless graph (the urn mean, unit extended degrees), at `s = 1` the
/// first star covers everything.
fn sss_estimates_for_density(n: usize, n0_star: usize, s: f64) -> (Estimate, Estimate) {
    if s <= 0.0 {
        let urn = urn_mean_without_replacement(n, n0_star).expect("validated");
        (Estimate::Point(urn), Estimate::Point(urn))
    } else if s >= 1.0 {
        (Estimate::Point(1.0), Estimate::Point(n as f64))
    } else {
        let input = EstimatorInput::new(n, n0_star, s).expect("validated");
        let schedule = sss_schedule(&input).expect("interior density");
        let linear = sss_linear_er(&input).expect("interior density");
        (
            Estimate::Point(schedule.expected_unit_cost),
            Estimate::Point(linear),
        )
    }
}

/// Runs one experiment per edge density, reusing the template spec.
/// The source must be Erdős–Rényi.
pub fn sweep(template: &ExperimentSpec, s_values: &[f64]) -> Result<Vec<(f64, TrialSummary)>> {
    let params = match &template.source {
        GraphSource::Er(p) => *p,
        GraphSource::Fixed(_) => {
            return Err(Error::CountOutOfRange {
                name: "sweep source (requires an ER source)",
                value: 0,
            })
        }
    };
    s_values
        .iter()
        .map(|&s| {
            let mut spec = template.clone();
            spec.source = GraphSource::Er(ErParams::new(params.n(), s)?);
            Ok((s, run_experiment(&spec)?))
        })
        .collect()
}

/// `points` log-spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// One summary row per variant on a fixed graph, with a fresh uniform
/// target per trial and the tables' outside-CI flags.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub variant: Variant,
    pub summary: TrialSummary,
    pub unit_estimate_outside_ci: bool,
    pub linear_estimate_outside_ci: bool,
}

/// Reproduces the real-graph table mechanics for all three variants.
pub fn table_experiment(
    graph: Arc<Graph>,
    n0_star: usize,
    trials: usize,
    master_seed: u64,
) -> Result<Vec<TableRow>> {
    Variant::ALL
        .iter()
        .map(|&variant| {
            let spec = ExperimentSpec::new(
                GraphSource::Fixed(graph.clone()),
                variant,
                n0_star,
                trials,
                master_seed,
            );
            let summary = run_experiment(&spec)?;
            let flag = |c: &CostSummary| {
                c.estimate
                    .as_ref()
                    .map(|e| e.outside_ci(c.ci.0, c.ci.1))
                    .unwrap_or(false)
            };
            Ok(TableRow {
                variant,
                unit_estimate_outside_ci: flag(&summary.unit),
                linear_estimate_outside_ci: flag(&summary.linear),
                summary,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;

    fn complete(n: usize) -> Arc<Graph> {
        let mut edges = Vec::new();
        for u in 0..n as VertexId {
            for v in (u + 1)..n as VertexId {
                edges.push((u, v));
            }
        }
        Arc::new(Graph::from_edges(n, edges).unwrap())
    }

    #[test]
    fn complete_graph_costs_are_degenerate() {
        for variant in Variant::ALL {
            let spec = ExperimentSpec::new(
                GraphSource::Fixed(complete(10)),
                variant,
                2,
                100,
                7,
            );
            let s = run_experiment(&spec).unwrap();
            assert_eq!(s.unit.mean, 1.0);
            assert_eq!(s.unit.ci_half_width(), 0.0);
            assert_eq!(s.linear.mean, 10.0);
        }
    }

    #[test]
    fn edgeless_ssc_matches_urn_mean() {
        let g = Arc::new(Graph::from_edges(1000, []).unwrap());
        let spec = ExperimentSpec::new(GraphSource::Fixed(g), Variant::Ssc, 2, 20_000, 11);
        let s = run_experiment(&spec).unwrap();
        let truth = 1001.0 / 3.0;
        assert!(s.unit.ci.0 <= truth && truth <= s.unit.ci.1, "{:?}", s.unit.ci);
        // per-target exact estimate on an edgeless graph is the urn mean
        match s.unit.estimate {
            Some(Estimate::Point(p)) => assert!((p - truth).abs() < 1e-9),
            other => panic!("expected point estimate, got {other:?}"),
        }
    }

    #[test]
    fn per_trial_costs_are_scheduling_independent() {
        let spec = ExperimentSpec::new(
            GraphSource::Er(ErParams::new(300, 0.02).unwrap()),
            Variant::Sss,
            2,
            400,
            1234,
        );
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = pool1.install(|| collect_costs(&spec)).unwrap();
        let b = pool4.install(|| collect_costs(&spec)).unwrap();
        assert_eq!(a, b);
        let c = pool4.install(|| collect_costs(&spec)).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn single_point_sweep_equals_run_experiment() {
        let template = ExperimentSpec::new(
            GraphSource::Er(ErParams::new(200, 0.01).unwrap()),
            Variant::Ssc,
            2,
            300,
            99,
        );
        let swept = sweep(&template, &[0.01]).unwrap();
        let direct = run_experiment(&template).unwrap();
        assert_eq!(swept.len(), 1);
        assert_eq!(swept[0].1.unit.mean, direct.unit.mean);
        assert_eq!(swept[0].1.linear.mean, direct.linear.mean);
    }

    #[test]
    fn unit_never_exceeds_linear() {
        let spec = ExperimentSpec::new(
            GraphSource::Er(ErParams::new(150, 0.05).unwrap()),
            Variant::Ssr,
            3,
            500,
            5,
        );
        for (u, l) in collect_costs(&spec).unwrap() {
            assert!(u <= l);
        }
    }

    #[test]
    fn ci_coverage_is_nominal_on_known_mean() {
        // Edgeless SSC has the exact urn mean; the 95% interval should cover
        // it about 95% of the time over repeated experiments.
        let g = Arc::new(Graph::from_edges(100, []).unwrap());
        let truth = 101.0 / 3.0;
        let experiments = 250;
        let mut covered = 0;
        for seed in 0..experiments {
            let spec = ExperimentSpec::new(
                GraphSource::Fixed(g.clone()),
                Variant::Ssc,
                2,
                400,
                1_000_000 + seed,
            );
            let s = run_experiment(&spec).unwrap();
            if s.unit.ci.0 <= truth && truth <= s.unit.ci.1 {
                covered += 1;
            }
        }
        let coverage = covered as f64 / experiments as f64;
        assert!(
            (0.90..=0.99).contains(&coverage),
            "coverage {coverage} outside the acceptance band"
        );
    }

    #[test]
    fn shared_graph_and_target_are_honored() {
        let mut spec = ExperimentSpec::new(
            GraphSource::Er(ErParams::new(120, 0.03).unwrap()),
            Variant::Ssc,
            2,
            50,
            42,
        );
        spec.fresh_graph_per_trial = false;
        spec.fresh_target_per_trial = false;
        // Deterministic repeat of the whole experiment.
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a.unit.mean, b.unit.mean);
        assert_eq!(a.linear.mean, b.linear.mean);
    }

    #[test]
    fn table_rows_cover_all_variants() {
        let rows = table_experiment(complete(10), 10, 50, 3).unwrap();
        assert_eq!(rows.len(), 3);
        for row in rows {
            assert_eq!(row.summary.unit.mean, 1.0);
            assert!(!row.unit_estimate_outside_ci);
        }
    }

    #[test]
    fn log_spaced_grid_endpoints() {
        let g = log_spaced(1e-4, 1e-1, 12);
        assert_eq!(g.len(), 12);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert!((g[11] - 1e-1).abs() < 1e-12);
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}
