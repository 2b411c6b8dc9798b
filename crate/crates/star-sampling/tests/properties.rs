//! Structural invariants and distribution-law checks, driven by property
//! tests, trace replay against a plain reference implementation, and
//! exhaustive enumeration on small graphs.

use std::collections::BTreeSet;

use proptest::prelude::*;

use star_sampling::graph::{degree_stats, extended_neighborhood, Graph, TargetSet, VertexId};
use star_sampling::rng::stream_rng;
use star_sampling::sampler::{run_ssc, run_sss, SampleRecord, SamplerOptions, Variant};
use star_sampling::stats::mean_sd_ci95;
use star_sampling::ErParams;

use rand::Rng;

fn arb_graph_input() -> impl Strategy<Value = (usize, Vec<(VertexId, VertexId)>)> {
    (1usize..=9).prop_flat_map(|n| {
        let pair = (0..n as VertexId, 0..n as VertexId);
        (Just(n), proptest::collection::vec(pair, 0..=30))
    })
}

proptest! {
    #[test]
    fn build_yields_simple_symmetric_graphs((n, raw) in arb_graph_input()) {
        let g = Graph::from_edges(n, raw.clone()).unwrap();
        let mut degree_total = 0usize;
        for v in g.vertices() {
            let row = g.neighbors(v);
            degree_total += row.len();
            prop_assert!(row.windows(2).all(|w| w[0] < w[1]), "sorted, deduplicated");
            prop_assert!(!row.contains(&v), "no self-loops");
            for &u in row {
                prop_assert!(g.neighbors(u).contains(&v), "symmetry");
            }
        }
        prop_assert_eq!(degree_total, 2 * g.m());
        // exactly the normalized input edges survive
        let expected: BTreeSet<(VertexId, VertexId)> = raw
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let got: BTreeSet<(VertexId, VertexId)> = g.edges().collect();
        prop_assert_eq!(expected, got);
    }

    #[test]
    fn degree_census_sums_are_exact((n, raw) in arb_graph_input()) {
        let g = Graph::from_edges(n, raw).unwrap();
        let stats = degree_stats(&g);
        let vertices: usize = stats.degree_counts().values().sum();
        let degrees: usize = stats.degree_counts().iter().map(|(k, c)| k * c).sum();
        prop_assert_eq!(vertices, g.n());
        prop_assert_eq!(degrees, 2 * g.m());
        let total_fraction: f64 = stats
            .degree_counts()
            .keys()
            .map(|&k| stats.fraction(k))
            .sum();
        prop_assert!((total_fraction - 1.0).abs() < 1e-12);
        prop_assert!((stats.d_avg() - 2.0 * g.m() as f64 / g.n() as f64).abs() < 1e-12);
    }

    #[test]
    fn extended_neighborhood_is_monotone(
        (n, raw) in arb_graph_input(),
        picks in proptest::collection::vec(proptest::bool::ANY, 9),
        extra in proptest::collection::vec(proptest::bool::ANY, 9),
    ) {
        let g = Graph::from_edges(n, raw).unwrap();
        let small: Vec<VertexId> = (0..n)
            .filter(|&v| picks[v])
            .map(|v| v as VertexId)
            .collect();
        prop_assume!(!small.is_empty());
        let mut large = small.clone();
        large.extend((0..n).filter(|&v| extra[v]).map(|v| v as VertexId));
        let t_small = TargetSet::new(small).unwrap();
        let t_large = TargetSet::new(large).unwrap();
        let e_small = extended_neighborhood(&g, &t_small).unwrap();
        let e_large = extended_neighborhood(&g, &t_large).unwrap();
        for &v in e_small.vertices() {
            prop_assert!(e_large.contains(v));
        }
    }

    #[test]
    fn membership_matches_star_intersection(
        (n, raw) in arb_graph_input(),
        picks in proptest::collection::vec(proptest::bool::ANY, 9),
    ) {
        // v ∈ N^e(T)  ⇔  the star of v intersects T, for every vertex.
        let g = Graph::from_edges(n, raw).unwrap();
        let members: Vec<VertexId> = (0..n)
            .filter(|&v| picks[v])
            .map(|v| v as VertexId)
            .collect();
        prop_assume!(!members.is_empty());
        let target = TargetSet::new(members).unwrap();
        let ext = extended_neighborhood(&g, &target).unwrap();
        for v in g.vertices() {
            let star_hits =
                target.contains(v) || g.neighbors(v).iter().any(|&u| target.contains(u));
            prop_assert_eq!(ext.contains(v), star_hits);
        }
    }
}

/// Replays a retained trace through a plain bool-mask implementation,
/// independently re-deriving aliveness, degrees, hit flags, and (for SSS)
/// the order recursion, then cross-checks the hit flag against
/// `extended_neighborhood` on the explicitly induced surviving subgraph.
fn replay_trace(g: &Graph, target: &TargetSet, variant: Variant, trace: &[SampleRecord]) {
    let mut alive = vec![true; g.n()];
    let mut alive_count = g.n();
    for (step, rec) in trace.iter().enumerate() {
        assert_eq!(rec.index, step as u64 + 1);
        let c = rec.center;
        assert!(alive[c as usize], "center drawn among survivors");
        for &t in target.members() {
            assert!(alive[t as usize], "targets persist until the hit");
        }
        let surviving_neighbors: Vec<VertexId> = g
            .neighbors(c)
            .iter()
            .copied()
            .filter(|&u| alive[u as usize])
            .collect();
        assert_eq!(rec.ext_degree as usize, surviving_neighbors.len() + 1);

        // Hit flag against graph_core on the induced surviving subgraph.
        let surviving_edges = g
            .edges()
            .filter(|&(u, v)| alive[u as usize] && alive[v as usize]);
        let induced = Graph::from_edges(g.n(), surviving_edges).unwrap();
        let ext = extended_neighborhood(&induced, target).unwrap();
        assert_eq!(rec.hit, ext.contains(c));
        assert_eq!(rec.hit, step == trace.len() - 1);

        if !rec.hit {
            match variant {
                Variant::Ssc => {
                    alive[c as usize] = false;
                    alive_count -= 1;
                }
                Variant::Sss => {
                    alive[c as usize] = false;
                    for &u in &surviving_neighbors {
                        alive[u as usize] = false;
                    }
                    let removed = surviving_neighbors.len() + 1;
                    // order recursion: n_t = n_{t-1} - d^e_t
                    assert_eq!(removed, rec.ext_degree as usize);
                    alive_count -= removed;
                }
                Variant::Ssr => unreachable!(),
            }
            assert!(alive_count > 0);
        }
    }
}

#[test]
fn ssc_and_sss_traces_replay_exactly() {
    let opts = SamplerOptions {
        retain_trace: true,
        ..Default::default()
    };
    for seed in 0..40u64 {
        let mut rng = stream_rng(1000 + seed, 0);
        let n = rng.random_range(2..=40);
        let s = rng.random_range(0.0..0.3);
        let g = ErParams::new(n, s).unwrap().generate(&mut rng);
        let target = TargetSet::sample_uniform(n, rng.random_range(1..=2), &mut rng).unwrap();
        for _ in 0..8 {
            let r = run_ssc(&g, &target, &mut rng, &opts).unwrap();
            replay_trace(&g, &target, Variant::Ssc, r.trace.as_ref().unwrap());
            let r = run_sss(&g, &target, &mut rng, &opts).unwrap();
            replay_trace(&g, &target, Variant::Sss, r.trace.as_ref().unwrap());
        }
    }
}

/// Exhaustive SSC first-hit law by walking every removal sequence.
fn enumerate_ssc_first_hit(g: &Graph, target: &TargetSet) -> Vec<f64> {
    let ext = extended_neighborhood(g, target).unwrap();
    let n = g.n();
    let mut q = vec![0.0; n + 1];
    // depth-first over which miss vertex is removed at each step
    fn recurse(
        n: usize,
        ext: &star_sampling::graph::ExtendedTarget,
        removed: &mut Vec<VertexId>,
        prob: f64,
        t: usize,
        q: &mut [f64],
    ) {
        let alive = n - removed.len();
        let hit_prob = ext.n_e_star() as f64 / alive as f64;
        q[t] += prob * hit_prob;
        for v in 0..n as VertexId {
            if ext.contains(v) || removed.contains(&v) {
                continue;
            }
            removed.push(v);
            recurse(n, ext, removed, prob / alive as f64, t + 1, q);
            removed.pop();
        }
    }
    recurse(n, &ext, &mut Vec::new(), 1.0, 1, &mut q);
    q
}

#[test]
#[allow(clippy::needless_range_loop)]
fn ssc_per_step_hit_probability_is_hypergeometric() {
    // On any graph, conditioned on missing so far, sample t hits with
    // probability n^{e,*} / (n - t + 1); checked exhaustively on n <= 8.
    for seed in 0..12u64 {
        let mut rng = stream_rng(2000 + seed, 0);
        let n = rng.random_range(2..=8);
        let g = ErParams::new(n, rng.random_range(0.0..0.8))
            .unwrap()
            .generate(&mut rng);
        let target = TargetSet::sample_uniform(n, 1, &mut rng).unwrap();
        let ne = extended_neighborhood(&g, &target).unwrap().n_e_star();
        let q = enumerate_ssc_first_hit(&g, &target);
        let total: f64 = q.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mut survival = 1.0;
        for t in 1..=(n - ne + 1) {
            let p_t = ne as f64 / (n - t + 1) as f64;
            assert!(
                (q[t] - p_t * survival).abs() < 1e-12,
                "n={n} ne={ne} t={t}: {} vs {}",
                q[t],
                p_t * survival
            );
            survival *= 1.0 - p_t;
        }
    }
}

#[test]
fn er_graphs_stay_er_after_one_removal_step() {
    // Closure check: after one SSC or SSS step on ER(n, s), a uniformly
    // chosen survivor has degree ~ bin(n_t - 1, s) in the surviving graph.
    // First two conditional centered moments vanish within 3 SE.
    let (n, s) = (30usize, 0.2);
    let params = ErParams::new(n, s).unwrap();
    let reps = 6000u64;
    for remove_star in [false, true] {
        let mut first = Vec::with_capacity(reps as usize);
        let mut second = Vec::with_capacity(reps as usize);
        for seed in 0..reps {
            let mut rng = stream_rng(3000 + seed, u64::from(remove_star));
            let g = params.generate(&mut rng);
            let mut alive = vec![true; n];
            let center = rng.random_range(0..n);
            alive[center] = false;
            if remove_star {
                for &u in g.neighbors(center as VertexId) {
                    alive[u as usize] = false;
                }
            }
            let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
            if survivors.len() < 2 {
                continue;
            }
            let w = survivors[rng.random_range(0..survivors.len())];
            let degree = g
                .neighbors(w as VertexId)
                .iter()
                .filter(|&&u| alive[u as usize])
                .count() as f64;
            let trials = (survivors.len() - 1) as f64;
            first.push(degree - trials * s);
            second.push((degree - trials * s).powi(2) - trials * s * (1.0 - s));
        }
        for (label, sample) in [("mean", &first), ("variance", &second)] {
            let (m, sd, _) = mean_sd_ci95(sample);
            let se = sd / (sample.len() as f64).sqrt();
            assert!(
                m.abs() <= 3.0 * se,
                "{label} moment off after step (star={remove_star}): {m} vs se {se}"
            );
        }
    }
}

#[test]
fn star_edge_count_is_conditionally_binomial() {
    // Conditioned on the center's degree d, the removed-edge count minus d
    // is bin(C(d,2) + d(n-d-1), s); per-degree mean check at small n.
    let (n, s) = (6usize, 0.4);
    let params = ErParams::new(n, s).unwrap();
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut rng = stream_rng(4000, 0);
    for _ in 0..200_000 {
        let g = params.generate(&mut rng);
        let v = rng.random_range(0..n) as VertexId;
        let neighbors: BTreeSet<VertexId> = g.neighbors(v).iter().copied().collect();
        let d = neighbors.len();
        let incident: usize = neighbors
            .iter()
            .map(|&u| g.degree(u))
            .sum::<usize>();
        let inside = g
            .edges()
            .filter(|(a, b)| neighbors.contains(a) && neighbors.contains(b))
            .count();
        let star_edges = incident - inside;
        buckets[d].push(star_edges as f64 - d as f64);
    }
    for (d, sample) in buckets.iter().enumerate() {
        if sample.len() < 2000 {
            continue;
        }
        let trials = d * d.saturating_sub(1) / 2 + d * (n - d - 1);
        let (mean, sd, _) = mean_sd_ci95(sample);
        let se = sd / (sample.len() as f64).sqrt();
        assert!(
            (mean - trials as f64 * s).abs() <= 3.0 * se,
            "degree {d}: mean {mean} vs {} (se {se})",
            trials as f64 * s
        );
    }
}

#[test]
fn unit_cost_bounds_are_ordered_and_at_least_one() {
    use star_sampling::estimators::{ssc_unit_bounds_er, ssr_unit_bounds_er, EstimatorInput};
    let mut rng = stream_rng(6000, 0);
    for _ in 0..500 {
        let n = rng.random_range(1..=5000);
        let n0 = rng.random_range(1..=n);
        let s = rng.random_range(0.0..=1.0);
        let input = EstimatorInput::new(n, n0, s).unwrap();
        for b in [ssr_unit_bounds_er(&input), ssc_unit_bounds_er(&input)] {
            assert!(b.lower >= 1.0 - 1e-12, "n={n} n0={n0} s={s}: {b:?}");
            assert!(b.lower <= b.upper + 1e-12, "n={n} n0={n0} s={s}: {b:?}");
        }
    }
}

#[test]
fn schedule_invariants_hold_across_parameters() {
    use star_sampling::estimators::{sss_schedule, EstimatorInput};
    let mut rng = stream_rng(5000, 0);
    for _ in 0..400 {
        let n = rng.random_range(2..=3000);
        let n0 = rng.random_range(1..=n);
        let s = 10f64.powf(rng.random_range(-5.0..-0.31));
        let input = EstimatorInput::new(n, n0, s).unwrap();
        let schedule = sss_schedule(&input).unwrap();
        let total: f64 = schedule.q_tilde.iter().sum();
        assert!(
            (total - 1.0).abs() < 1e-9,
            "n={n} n0={n0} s={s}: sum {total}"
        );
        assert!(schedule.expected_unit_cost >= 1.0 - 1e-12);
        assert!(schedule.t1 < schedule.t2);
        assert!(schedule.p_tilde.iter().all(|&p| (0.0..=1.0).contains(&p)));
        for w in schedule.p_tilde.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }
}
