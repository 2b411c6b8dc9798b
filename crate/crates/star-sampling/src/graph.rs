//! Simple undirected graphs plus the target-set and degree machinery the
//! samplers and estimators are built on.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};

/// Vertex identifier; graphs are labeled `0..n-1`.
pub type VertexId = u32;

/// Immutable simple undirected graph stored in compressed sparse rows.
///
/// Construction drops self-loops and collapses parallel/reversed duplicates,
/// so adjacency is always symmetric and duplicate-free, and `m` equals half
/// the sum of all degrees. The structure is read-only after construction and
/// safe to share across threads; samplers track deletions in their own masks.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    m: usize,
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph of order `n` from unordered vertex pairs.
    ///
    /// Self-loops are dropped, duplicate and reversed duplicate pairs are
    /// collapsed into one undirected edge, and neighbor lists end up sorted.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in edges {
            if u as usize >= n {
                return Err(Error::VertexOutOfRange { id: u, n });
            }
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { id: v, n });
            }
            if u == v {
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_normalized_pairs(n, &pairs))
    }

    /// `pairs` must be sorted, deduplicated, with `u < v < n`.
    pub(crate) fn from_normalized_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Self {
        let m = pairs.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut neighbors = vec![0 as VertexId; 2 * m];
        // Scanning pairs in (min, max) order leaves every row sorted:
        // entries below a vertex arrive before entries above it.
        for &(u, v) in pairs {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        Graph {
            n,
            m,
            offsets,
            neighbors,
        }
    }

    /// Graph order `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Graph size `m` (number of undirected edges).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Extended degree `d^e(v) = d(v) + 1` (the star center plus its points).
    pub fn extended_degree(&self, v: VertexId) -> usize {
        self.degree(v) + 1
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edge density `s = m / C(n, 2)`; zero for graphs of order < 2.
    pub fn edge_density(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            let pairs = self.n as f64 * (self.n as f64 - 1.0) / 2.0;
            self.m as f64 / pairs
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.n as VertexId
    }

    /// Iterates each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }
}

/// The target set `V*`: the vertices being searched for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSet {
    members: Vec<VertexId>,
}

impl TargetSet {
    /// Builds a target set from arbitrary vertex ids (deduplicated, sorted).
    pub fn new<I>(members: I) -> Result<Self>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut members: Vec<VertexId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptyTarget);
        }
        Ok(TargetSet { members })
    }

    /// Draws a uniform random target of `n0_star` distinct vertices from `0..n`.
    pub fn sample_uniform<R: Rng + ?Sized>(n: usize, n0_star: usize, rng: &mut R) -> Result<Self> {
        if n0_star == 0 {
            return Err(Error::EmptyTarget);
        }
        if n0_star > n {
            return Err(Error::TargetTooLarge { n0_star, n });
        }
        let picked = rand::seq::index::sample(rng, n, n0_star);
        TargetSet::new(picked.into_iter().map(|i| i as VertexId))
    }

    pub fn n0_star(&self) -> usize {
        self.members.len()
    }

    /// Sorted member list.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Checks all members are vertices of `g`.
    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        match self.members.last() {
            Some(&max) if (max as usize) >= g.n() => {
                Err(Error::VertexOutOfRange { id: max, n: g.n() })
            }
            _ => Ok(()),
        }
    }
}

/// The extended neighborhood `N^e(V*)`: the target set together with all of
/// its neighbors, plus the average degrees inside it and in its complement.
#[derive(Clone, Debug)]
pub struct ExtendedTarget {
    vertices: Vec<VertexId>,
    d_in: f64,
    d_out: Option<f64>,
}

impl ExtendedTarget {
    /// Sorted vertices of `N^e(V*)`.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// `n^{e,*} = |N^e(V*)|`.
    pub fn n_e_star(&self) -> usize {
        self.vertices.len()
    }

    /// Average degree over `N^e(V*)`.
    pub fn d_in(&self) -> f64 {
        self.d_in
    }

    /// Average degree over the complement of `N^e(V*)`, or `None` when the
    /// complement is empty.
    pub fn d_out(&self) -> Option<f64> {
        self.d_out
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Membership mask of `N^e(V*)` over all vertices, plus its cardinality.
///
/// A star sample hits `V*` exactly when its center lies in this set, which is
/// what the samplers test on every draw.
pub(crate) fn extended_mask(g: &Graph, target: &TargetSet) -> Result<(Vec<bool>, usize)> {
    target.validate_for(g)?;
    let mut mask = vec![false; g.n()];
    let mut count = 0usize;
    for &v in target.members() {
        if !mask[v as usize] {
            mask[v as usize] = true;
            count += 1;
        }
        for &u in g.neighbors(v) {
            if !mask[u as usize] {
                mask[u as usize] = true;
                count += 1;
            }
        }
    }
    Ok((mask, count))
}

/// Computes `N^e(V*)` with its order and inside/outside average degrees.
pub fn extended_neighborhood(g: &Graph, target: &TargetSet) -> Result<ExtendedTarget> {
    let (mask, count) = extended_mask(g, target)?;
    let mut vertices = Vec::with_capacity(count);
    let mut deg_in = 0u64;
    let mut deg_out = 0u64;
    for v in g.vertices() {
        if mask[v as usize] {
            vertices.push(v);
            deg_in += g.degree(v) as u64;
        } else {
            deg_out += g.degree(v) as u64;
        }
    }
    let d_in = deg_in as f64 / count as f64;
    let outside = g.n() - count;
    let d_out = (outside > 0).then(|| deg_out as f64 / outside as f64);
    Ok(ExtendedTarget {
        vertices,
        d_in,
        d_out,
    })
}

/// Degree census of a graph: counts per degree, the degree distribution,
/// average and maximum degree, and edge-endpoint degree assortativity.
#[derive(Clone, Debug)]
pub struct DegreeStats {
    n: usize,
    degree_counts: BTreeMap<usize, usize>,
    d_avg: f64,
    d_max: usize,
    assortativity: Option<f64>,
}

impl DegreeStats {
    /// Number of vertices of each degree, ascending by degree.
    pub fn degree_counts(&self) -> &BTreeMap<usize, usize> {
        &self.degree_counts
    }

    /// Fraction of vertices with degree `k`.
    pub fn fraction(&self, k: usize) -> f64 {
        *self.degree_counts.get(&k).unwrap_or(&0) as f64 / self.n as f64
    }

    /// Mean degree `2m / n`.
    pub fn d_avg(&self) -> f64 {
        self.d_avg
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Pearson correlation of endpoint degrees over the (ordered) edges, or
    /// `None` when the endpoint-degree variance vanishes.
    pub fn assortativity(&self) -> Option<f64> {
        self.assortativity
    }
}

/// Computes the degree census of `g`.
pub fn degree_stats(g: &Graph) -> DegreeStats {
    let mut degree_counts = BTreeMap::new();
    let mut d_max = 0usize;
    let mut total = 0u64;
    for v in g.vertices() {
        let d = g.degree(v);
        *degree_counts.entry(d).or_insert(0usize) += 1;
        d_max = d_max.max(d);
        total += d as u64;
    }
    let d_avg = total as f64 / g.n() as f64;

    // Assortativity over both orientations of each edge; integer sums keep
    // this exact well past the sizes we load.
    let mut sum_x = 0u128;
    let mut sum_x2 = 0u128;
    let mut sum_xy = 0u128;
    for (u, v) in g.edges() {
        let du = g.degree(u) as u128;
        let dv = g.degree(v) as u128;
        sum_x += du + dv;
        sum_x2 += du * du + dv * dv;
        sum_xy += 2 * du * dv;
    }
    let assortativity = if g.m() == 0 {
        None
    } else {
        let points = (2 * g.m()) as f64;
        let mean = sum_x as f64 / points;
        let var = sum_x2 as f64 / points - mean * mean;
        let cov = sum_xy as f64 / points - mean * mean;
        if var <= f64::EPSILON * mean * mean {
            None
        } else {
            Some(cov / var)
        }
    };

    DegreeStats {
        n: g.n(),
        degree_counts,
        d_avg,
        d_max,
        assortativity,
    }
}
