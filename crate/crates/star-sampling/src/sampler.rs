//! The three star-sampling procedures: with replacement (SSR), without
//! center replacement (SSC), and without star replacement (SSS).
//!
//! Each run draws uniform star centers until a star (center plus one-hop
//! neighbors) intersects the target set, recording the unit cost (number of
//! samples) and linear cost (sum of extended degrees at selection time).
//! A sample hits exactly when its center lies in the extended neighborhood
//! of the target restricted to surviving vertices, so the shared graph is
//! never mutated: deletions live in a per-run alive mask.

use std::fmt;

use rand::Rng;

use crate::error::Result;
use crate::graph::{extended_mask, Graph, TargetSet, VertexId};

/// Star-sampling variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Ssr,
    Ssc,
    Sss,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Ssr, Variant::Ssc, Variant::Sss];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Ssr => "ssr",
            Variant::Ssc => "ssc",
            Variant::Sss => "sss",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One star sample within a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    /// 1-based sample index.
    pub index: u64,
    pub center: VertexId,
    /// Extended degree of the center at selection time.
    pub ext_degree: u32,
    /// True only on the final, hitting sample.
    pub hit: bool,
}

/// Costs of one sampling run.
#[derive(Clone, Debug, PartialEq)]
pub struct CostResult {
    /// Number of samples taken.
    pub unit_cost: u64,
    /// Sum of extended degrees over all samples taken.
    pub linear_cost: u64,
    /// False only when an SSR run was cut off by the sample cap.
    pub hit: bool,
    /// Per-sample records, kept only when requested.
    pub trace: Option<Vec<SampleRecord>>,
}

/// Run options; the defaults retain no trace and use the standard SSR cap.
#[derive(Clone, Copy, Debug, Default)]
pub struct SamplerOptions {
    pub retain_trace: bool,
    /// Maximum number of SSR samples. `None` selects `100 n / n^{e,*}`,
    /// which cannot plausibly truncate (miss probability below e^-100) but
    /// keeps pathological loops impossible. Ignored by SSC/SSS, which
    /// terminate on their own.
    pub ssr_cap: Option<u64>,
}

struct RunState {
    linear: u64,
    trace: Option<Vec<SampleRecord>>,
}

impl RunState {
    fn new(retain: bool) -> Self {
        RunState {
            linear: 0,
            trace: retain.then(Vec::new),
        }
    }

    fn record(&mut self, index: u64, center: VertexId, ext_degree: usize, hit: bool) {
        self.linear += ext_degree as u64;
        if let Some(trace) = &mut self.trace {
            trace.push(SampleRecord {
                index,
                center,
                ext_degree: ext_degree as u32,
                hit,
            });
        }
    }

    fn finish(self, unit_cost: u64, hit: bool) -> CostResult {
        CostResult {
            unit_cost,
            linear_cost: self.linear,
            hit,
            trace: self.trace,
        }
    }
}

/// Surviving-vertex set with O(1) uniform selection and O(1) removal.
///
/// Removal swap-pops the compact list, which permutes enumeration order but
/// not the uniform selection law.
struct AliveSet {
    list: Vec<VertexId>,
    pos: Vec<u32>,
}

const GONE: u32 = u32::MAX;

impl AliveSet {
    fn full(n: usize) -> Self {
        AliveSet {
            list: (0..n as VertexId).collect(),
            pos: (0..n as u32).collect(),
        }
    }

    fn contains(&self, v: VertexId) -> bool {
        self.pos[v as usize] != GONE
    }

    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> VertexId {
        self.list[rng.random_range(0..self.list.len())]
    }

    fn remove(&mut self, v: VertexId) {
        let at = self.pos[v as usize];
        debug_assert_ne!(at, GONE);
        let last = *self.list.last().expect("remove from empty alive set");
        self.list.swap_remove(at as usize);
        if last != v {
            self.pos[last as usize] = at;
        }
        self.pos[v as usize] = GONE;
    }
}

/// SSR: i.i.d. uniform centers over the full vertex set; the graph is
/// never altered. Returns `hit = false` if the cap is exhausted first.
pub fn run_ssr<R: Rng + ?Sized>(
    g: &Graph,
    target: &TargetSet,
    rng: &mut R,
    opts: &SamplerOptions,
) -> Result<CostResult> {
    let (mask, n_e_star) = extended_mask(g, target)?;
    let n = g.n();
    let cap = opts
        .ssr_cap
        .unwrap_or_else(|| (100 * n as u64) / (n_e_star.max(1) as u64))
        .max(1);
    let mut state = RunState::new(opts.retain_trace);
    for t in 1..=cap {
        let v = rng.random_range(0..n) as VertexId;
        let hit = mask[v as usize];
        state.record(t, v, g.extended_degree(v), hit);
        if hit {
            return Ok(state.finish(t, true));
        }
    }
    Ok(state.finish(cap, false))
}

/// SSC: uniform centers over survivors; each miss removes the center and
/// its incident edges. Always terminates within `n - n^{e,*} + 1` samples.
pub fn run_ssc<R: Rng + ?Sized>(
    g: &Graph,
    target: &TargetSet,
    rng: &mut R,
    opts: &SamplerOptions,
) -> Result<CostResult> {
    let (mask, _) = extended_mask(g, target)?;
    let mut alive = AliveSet::full(g.n());
    let mut degree: Vec<u32> = g.vertices().map(|v| g.degree(v) as u32).collect();
    let mut state = RunState::new(opts.retain_trace);
    for t in 1..=(g.n() as u64) {
        debug_assert!(target.members().iter().all(|&v| alive.contains(v)));
        let v = alive.pick(rng);
        let hit = mask[v as usize];
        state.record(t, v, degree[v as usize] as usize + 1, hit);
        if hit {
            return Ok(state.finish(t, true));
        }
        alive.remove(v);
        for &u in g.neighbors(v) {
            if alive.contains(u) {
                degree[u as usize] -= 1;
            }
        }
    }
    unreachable!("target vertices survive every miss, so SSC must hit within n samples")
}

/// SSS: uniform centers over survivors; each miss removes the entire star
/// and every edge touching it. Terminates within `n` samples.
pub fn run_sss<R: Rng + ?Sized>(
    g: &Graph,
    target: &TargetSet,
    rng: &mut R,
    opts: &SamplerOptions,
) -> Result<CostResult> {
    let (mask, _) = extended_mask(g, target)?;
    let mut alive = AliveSet::full(g.n());
    let mut degree: Vec<u32> = g.vertices().map(|v| g.degree(v) as u32).collect();
    let mut state = RunState::new(opts.retain_trace);
    let mut star: Vec<VertexId> = Vec::new();
    for t in 1..=(g.n() as u64) {
        debug_assert!(target.members().iter().all(|&v| alive.contains(v)));
        let v = alive.pick(rng);
        let hit = mask[v as usize];
        let ext_degree = degree[v as usize] as usize + 1;
        state.record(t, v, ext_degree, hit);
        if hit {
            return Ok(state.finish(t, true));
        }
        // Snapshot the surviving star before any removal.
        star.clear();
        star.push(v);
        star.extend(g.neighbors(v).iter().copied().filter(|&u| alive.contains(u)));
        debug_assert_eq!(star.len(), ext_degree);
        for &r in &star {
            alive.remove(r);
        }
        for &r in &star {
            for &w in g.neighbors(r) {
                if alive.contains(w) {
                    degree[w as usize] -= 1;
                }
            }
        }
    }
    unreachable!("target vertices survive every miss, so SSS must hit within n samples")
}

/// Dispatches on the sampling variant.
pub fn run<R: Rng + ?Sized>(
    variant: Variant,
    g: &Graph,
    target: &TargetSet,
    rng: &mut R,
    opts: &SamplerOptions,
) -> Result<CostResult> {
    match variant {
        Variant::Ssr => run_ssr(g, target, rng, opts),
        Variant::Ssc => run_ssc(g, target, rng, opts),
        Variant::Sss => run_sss(g, target, rng, opts),
    }
}
