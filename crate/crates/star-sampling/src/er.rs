//! Erdős–Rényi graph generation and closed-form ER structural quantities.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Geometric};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::stats::one_minus_sbar_pow;

/// Parameters `(n, s)` of the Erdős–Rényi model: order and edge probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErParams {
    n: usize,
    s: f64,
}

impl ErParams {
    /// Requires `n >= 1` and `s` in `[0, 1]`. The endpoints are legal here;
    /// only the SSS estimators exclude them.
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidProbability { value: s });
        }
        Ok(ErParams { n, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge probability `s`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Miss probability `s̄ = 1 - s`.
    pub fn s_bar(&self) -> f64 {
        1.0 - self.s
    }

    /// Samples one ER graph by geometric gap-skipping over the ordered pair
    /// index, so the work is O(n + m) rather than O(n^2).
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Graph {
        let n = self.n;
        let total_pairs = (n as u64) * (n as u64 - 1) / 2;
        if self.s <= 0.0 || total_pairs == 0 {
            return Graph::from_normalized_pairs(n, &[]);
        }
        let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
        if self.s >= 1.0 {
            pairs.reserve(total_pairs as usize);
            for u in 0..n as VertexId {
                for v in (u + 1)..n as VertexId {
                    pairs.push((u, v));
                }
            }
            return Graph::from_normalized_pairs(n, &pairs);
        }

        let gaps = Geometric::new(self.s).expect("s validated in (0, 1)");
        // Decode the linear pair index incrementally: row u covers indices
        // [row_start, row_start + n - 1 - u).
        let mut row = 0u64;
        let mut row_start = 0u64;
        let mut row_len = n as u64 - 1;
        let mut next: u64 = 0;
        loop {
            let skip = gaps.sample(rng);
            next = match next.checked_add(skip) {
                Some(x) => x,
                None => break,
            };
            if next >= total_pairs {
                break;
            }
            while next >= row_start + row_len {
                row_start += row_len;
                row += 1;
                row_len -= 1;
            }
            let u = row as VertexId;
            let v = (row + 1 + (next - row_start)) as VertexId;
            pairs.push((u, v));
            next = match next.checked_add(1) {
                Some(x) => x,
                None => break,
            };
        }
        Graph::from_normalized_pairs(n, &pairs)
    }

    /// Expected number of edges removed by one star sample,
    /// `E[g] = (n-1)s(1 + (n/2 - 1)(2-s)s)`.
    pub fn expected_star_edges(&self) -> f64 {
        let n = self.n as f64;
        let s = self.s;
        (n - 1.0) * s * (1.0 + (n / 2.0 - 1.0) * (2.0 - s) * s)
    }

    /// Moments of the extended-target order `n_0^{e,*}` for a target of
    /// `n0_star` vertices: `n0* + bin(n - n0*, 1 - s̄^{n0*})`.
    pub fn ext_target_moments(&self, n0_star: usize) -> Result<ExtTargetMoments> {
        let p = self.ext_attach_probability(n0_star)?;
        let rest = (self.n - n0_star) as f64;
        Ok(ExtTargetMoments {
            mean: n0_star as f64 + rest * p,
            variance: rest * (1.0 - p) * p,
        })
    }

    /// One draw of the extended-target order from its binomial-shifted law.
    pub fn sample_ext_target_order<R: Rng + ?Sized>(
        &self,
        n0_star: usize,
        rng: &mut R,
    ) -> Result<usize> {
        let p = self.ext_attach_probability(n0_star)?;
        let bin = Binomial::new((self.n - n0_star) as u64, p).expect("p validated");
        Ok(n0_star + bin.sample(rng) as usize)
    }

    /// Probability that a fixed non-target vertex attaches to the target:
    /// `1 - s̄^{n0*}`.
    fn ext_attach_probability(&self, n0_star: usize) -> Result<f64> {
        if n0_star == 0 {
            return Err(Error::EmptyTarget);
        }
        if n0_star > self.n {
            return Err(Error::TargetTooLarge {
                n0_star,
                n: self.n,
            });
        }
        Ok(one_minus_sbar_pow(self.s, n0_star as f64))
    }
}

/// Mean and variance of the extended-target order `n_0^{e,*}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtTargetMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Limit of the expected star-sample edge fraction, `(2 - s)s`.
pub fn asymptotic_star_edge_fraction(s: f64) -> f64 {
    (2.0 - s) * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn degenerate_densities_generate_extreme_graphs() {
        let mut rng = stream_rng(11, 0);
        let g = ErParams::new(10, 0.0).unwrap().generate(&mut rng);
        assert_eq!(g.m(), 0);
        let g = ErParams::new(10, 1.0).unwrap().generate(&mut rng);
        assert_eq!(g.m(), 45);
        let g = ErParams::new(1, 0.7).unwrap().generate(&mut rng);
        assert_eq!((g.n(), g.m()), (1, 0));
    }

    #[test]
    fn edge_count_mean_matches_binomial() {
        // E[m] = C(1000, 2) * 0.01 = 4995, checked over 200 seeds.
        let params = ErParams::new(1000, 0.01).unwrap();
        let trials = 200;
        let counts: Vec<f64> = (0..trials)
            .map(|i| {
                let mut rng = stream_rng(42, i);
                params.generate(&mut rng).m() as f64
            })
            .collect();
        let (mean, sd, _) = crate::stats::mean_sd_ci95(&counts);
        let se = sd / (trials as f64).sqrt();
        assert!(
            (mean - 4995.0).abs() <= 3.0 * se,
            "mean {mean} too far from 4995 (se {se})"
        );
    }

    #[test]
    fn generated_graphs_are_valid_and_seeded() {
        let params = ErParams::new(200, 0.05).unwrap();
        let g1 = params.generate(&mut stream_rng(5, 1));
        let g2 = params.generate(&mut stream_rng(5, 1));
        assert_eq!(g1.m(), g2.m());
        assert!(g1.edges().eq(g2.edges()));
        for (u, v) in g1.edges() {
            assert!(u < v);
            assert!(g1.has_edge(v, u));
        }
    }

    #[test]
    fn expected_star_edges_examples() {
        assert!((ErParams::new(5, 0.5).unwrap().expected_star_edges() - 4.25).abs() < 1e-12);
        assert_eq!(ErParams::new(7, 0.0).unwrap().expected_star_edges(), 0.0);
        assert_eq!(ErParams::new(2, 1.0).unwrap().expected_star_edges(), 1.0);
    }

    #[test]
    fn asymptotic_fraction_examples() {
        assert_eq!(asymptotic_star_edge_fraction(1.0), 1.0);
        assert_eq!(asymptotic_star_edge_fraction(0.0), 0.0);
        assert_eq!(asymptotic_star_edge_fraction(0.5), 0.75);
        // finite-n ratio at n = 1000 sits within 1% of the limit
        let p = ErParams::new(1000, 0.5).unwrap();
        let ratio = p.expected_star_edges() / (1000.0 * 999.0 / 2.0 * 0.5);
        assert!((ratio - 0.75).abs() / 0.75 < 0.01);
    }

    #[test]
    fn ext_target_moment_examples() {
        let m = ErParams::new(100, 0.0)
            .unwrap()
            .ext_target_moments(1)
            .unwrap();
        assert_eq!((m.mean, m.variance), (1.0, 0.0));
        let m = ErParams::new(100, 1.0)
            .unwrap()
            .ext_target_moments(1)
            .unwrap();
        assert_eq!((m.mean, m.variance), (100.0, 0.0));
        let m = ErParams::new(100, 0.01)
            .unwrap()
            .ext_target_moments(2)
            .unwrap();
        assert!((m.mean - 3.9502).abs() < 1e-12);
    }

    #[test]
    fn ext_target_order_draws_match_moments() {
        let params = ErParams::new(100, 0.01).unwrap();
        let mut rng = stream_rng(9, 0);
        assert_eq!(
            ErParams::new(20, 0.0)
                .unwrap()
                .sample_ext_target_order(3, &mut rng)
                .unwrap(),
            3
        );
        assert_eq!(
            ErParams::new(20, 1.0)
                .unwrap()
                .sample_ext_target_order(3, &mut rng)
                .unwrap(),
            20
        );

        let draws = 100_000;
        let samples: Vec<f64> = (0..draws)
            .map(|_| params.sample_ext_target_order(2, &mut rng).unwrap() as f64)
            .collect();
        let (mean, sd, _) = crate::stats::mean_sd_ci95(&samples);
        let se = sd / (draws as f64).sqrt();
        assert!((mean - 3.9502).abs() <= 3.0 * se);
    }

    #[test]
    fn ext_target_moments_match_generated_graphs() {
        // Empirical extended-neighborhood size over fresh graphs and fixed
        // targets agrees with the closed-form moments.
        use crate::graph::{extended_neighborhood, TargetSet};
        let params = ErParams::new(60, 0.05).unwrap();
        let target = TargetSet::new([0, 1, 2]).unwrap();
        let reps = 4000;
        let sizes: Vec<f64> = (0..reps)
            .map(|i| {
                let g = params.generate(&mut stream_rng(77, i));
                extended_neighborhood(&g, &target).unwrap().n_e_star() as f64
            })
            .collect();
        let (mean, sd, _) = crate::stats::mean_sd_ci95(&sizes);
        let moments = params.ext_target_moments(3).unwrap();
        let se = sd / (reps as f64).sqrt();
        assert!((mean - moments.mean).abs() <= 3.0 * se);
        let var_emp = sd * sd;
        // variance of the sample variance, normal-ish approximation
        let se_var = var_emp * (2.0 / (reps as f64 - 1.0)).sqrt();
        assert!((var_emp - moments.variance).abs() <= 4.0 * se_var);
    }
}
