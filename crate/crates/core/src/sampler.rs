//! Heat-bath Glauber dynamics for the edge-triangle model on bit-set graphs.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::logistic;
use crate::phase::ModelParams;

/// Simple undirected graph with adjacency rows stored as 64-bit words and
/// cached edge and triangle counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphState {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: u64,
    triangles: u64,
}

impl GraphState {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            rows: vec![0; n * words],
            edges: 0,
            triangles: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.set_bit(u, v, true);
                }
            }
        }
        let nn = n as u64;
        g.edges = nn * nn.saturating_sub(1) / 2;
        g.triangles = if n < 3 { 0 } else { nn * (nn - 1) * (nn - 2) / 6 };
        g
    }

    /// Graph with the given edges; counts are recomputed.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.set_bit(u, v, true);
            g.set_bit(v, u, true);
        }
        (g.edges, g.triangles) = g.full_recount();
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    pub fn triangle_count(&self) -> u64 {
        self.triangles
    }

    /// `2E/n²`.
    pub fn edge_density(&self) -> f64 {
        2.0 * self.edges as f64 / (self.n * self.n) as f64
    }

    /// `6T/n³`.
    pub fn triangle_density(&self) -> f64 {
        6.0 * self.triangles as f64 / (self.n as f64).powi(3)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Domain {
                what: "vertex",
                value: u.max(v) as f64,
                domain: "0 ≤ vertex < n",
            });
        }
        if u == v {
            return Err(Error::Domain {
                what: "vertex pair",
                value: u as f64,
                domain: "distinct vertices",
            });
        }
        Ok(())
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    fn set_bit(&mut self, u: usize, v: usize, on: bool) {
        let w = &mut self.rows[u * self.words + v / 64];
        let mask = 1u64 << (v % 64);
        if on {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    fn common_unchecked(&self, u: usize, v: usize) -> u32 {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// `|N(u) ∩ N(v)|`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Result<u32> {
        self.check_pair(u, v)?;
        Ok(self.common_unchecked(u, v))
    }

    /// Plain vertex loop; reference for [`GraphState::common_neighbors`].
    pub fn common_neighbors_naive(&self, u: usize, v: usize) -> u32 {
        (0..self.n)
            .filter(|&w| w != u && w != v && self.has_edge(u, w) && self.has_edge(v, w))
            .count() as u32
    }

    /// `(α/n) T + h E` from the cached counts.
    pub fn hamiltonian(&self, params: ModelParams) -> f64 {
        params.alpha / self.n as f64 * self.triangles as f64 + params.h * self.edges as f64
    }

    /// Edge and triangle counts recomputed from the adjacency rows.
    pub fn full_recount(&self) -> (u64, u64) {
        let mut edges = 0u64;
        let mut wedges = 0u64;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    edges += 1;
                    wedges += self.common_unchecked(u, v) as u64;
                }
            }
        }
        (edges, wedges / 3)
    }

    /// Whether the cached counts agree with a full recount.
    pub fn is_consistent(&self) -> bool {
        self.full_recount() == (self.edges, self.triangles)
    }

    /// Set edge `{u, v}` to `on`, maintaining the cached counts. Returns
    /// whether the state changed.
    #[inline]
    fn assign(&mut self, u: usize, v: usize, on: bool, common: u32) -> bool {
        if self.has_edge(u, v) == on {
            return false;
        }
        self.set_bit(u, v, on);
        self.set_bit(v, u, on);
        if on {
            self.edges += 1;
            self.triangles += common as u64;
        } else {
            self.edges -= 1;
            self.triangles -= common as u64;
        }
        true
    }

    /// Flip edge `{u, v}`, maintaining the cached counts.
    pub fn toggle_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        let c = self.common_unchecked(u, v);
        let on = !self.has_edge(u, v);
        self.assign(u, v, on, c);
        Ok(())
    }

    /// Heat-bath update of edge `{u, v}`: the edge is present afterwards iff
    /// `draw < σ((α/n)·c + h)` with `c` the common-neighbour count. Returns
    /// whether the edge changed.
    pub fn glauber_update(&mut self, u: usize, v: usize, draw: f64, params: ModelParams) -> Result<bool> {
        self.check_pair(u, v)?;
        let c = self.common_unchecked(u, v);
        let p = inclusion_probability(params, self.n, c);
        Ok(self.assign(u, v, draw < p, c))
    }

    /// Relabel vertices: vertex `i` becomes `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Config {
                field: "perm",
                reason: format!("expected {} entries, got {}", self.n, perm.len()),
            });
        }
        let mut g = Self::empty(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if self.has_edge(u, v) {
                    g.set_bit(perm[u], perm[v], true);
                }
            }
        }
        g.edges = self.edges;
        g.triangles = self.triangles;
        Ok(g)
    }
}

/// `σ((α/n)·c + h)`, the conditional probability that an edge with `c`
/// common neighbours is present.
pub fn inclusion_probability(params: ModelParams, n: usize, common: u32) -> f64 {
    logistic(params.alpha / n as f64 * common as f64 + params.h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Empty,
    Complete,
    /// Independent edges with probability `p`.
    ErdosRenyi(f64),
    /// Exactly `round(u·N̄)` edges placed uniformly at random.
    FromDensity(f64),
}

fn default_init() -> InitialState {
    InitialState::Empty
}

fn default_burn_in() -> u64 {
    100
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub n: usize,
    pub params: ModelParams,
    pub seed: u64,
    /// Independent ChaCha stream for this chain.
    #[serde(default)]
    pub stream: u64,
    #[serde(default = "default_init")]
    pub init: InitialState,
    #[serde(default = "default_burn_in")]
    pub burn_in_sweeps: u64,
    pub sweeps: u64,
    /// Sweeps between recorded samples.
    #[serde(default = "one")]
    pub thinning: u64,
}

impl ChainConfig {
    pub fn new(n: usize, params: ModelParams, seed: u64, sweeps: u64) -> Self {
        Self {
            n,
            params,
            seed,
            stream: 0,
            init: InitialState::Empty,
            burn_in_sweeps: default_burn_in(),
            sweeps,
            thinning: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: &str| {
            Err(Error::Config {
                field,
                reason: reason.to_string(),
            })
        };
        if self.n < 2 {
            return bad("n", "at least two vertices are required");
        }
        if self.sweeps < 1 {
            return bad("sweeps", "must be at least 1");
        }
        if self.thinning < 1 {
            return bad("thinning", "must be at least 1");
        }
        if !(self.params.alpha.is_finite() && self.params.h.is_finite()) {
            return bad("params", "alpha and h must be finite");
        }
        match self.init {
            InitialState::ErdosRenyi(p) | InitialState::FromDensity(p) if !(0.0..=1.0).contains(&p) => {
                bad("init", "probability or density must lie in [0, 1]")
            }
            _ => Ok(()),
        }
    }

    /// `k` copies on streams `0..k`.
    pub fn replicas(&self, k: u64) -> Vec<ChainConfig> {
        (0..k)
            .map(|s| ChainConfig {
                stream: s,
                ..self.clone()
            })
            .collect()
    }

    pub fn pairs(&self) -> u64 {
        (self.n * (self.n - 1) / 2) as u64
    }
}

/// A graph together with its random stream and update table.
pub struct Sampler {
    pub state: GraphState,
    params: ModelParams,
    rng: ChaCha8Rng,
    table: Vec<f64>,
    pub updates: u64,
    pub flips: u64,
}

impl Sampler {
    pub fn new(config: &ChainConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(config.stream);
        let n = config.n;
        let state = match config.init {
            InitialState::Empty => GraphState::empty(n),
            InitialState::Complete => GraphState::complete(n),
            InitialState::ErdosRenyi(p) => {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
                GraphState::from_edges(n, &edges)?
            }
            InitialState::FromDensity(x) => {
                let pairs = config.pairs() as usize;
                let k = ((x * pairs as f64).round() as usize).min(pairs);
                let chosen = rand::seq::index::sample(&mut rng, pairs, k);
                let all: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect();
                let edges: Vec<(usize, usize)> = chosen.iter().map(|i| all[i]).collect();
                GraphState::from_edges(n, &edges)?
            }
        };
        let table = (0..n.max(2) - 1)
            .map(|c| inclusion_probability(config.params, n, c as u32))
            .collect();
        Ok(Self {
            state,
            params: config.params,
            rng,
            table,
            updates: 0,
            flips: 0,
        })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    /// One heat-bath update at a uniformly random pair.
    #[inline]
    pub fn step(&mut self) {
        let n = self.state.n;
        let u = self.rng.random_range(0..n);
        let mut v = self.rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let draw: f64 = self.rng.random();
        let c = self.state.common_unchecked(u, v);
        let on = draw < self.table[c as usize];
        self.updates += 1;
        if self.state.assign(u, v, on, c) {
            self.flips += 1;
        }
    }

    /// `N̄` updates.
    pub fn sweep(&mut self) {
        let n = self.state.n;
        for _ in 0..n * (n - 1) / 2 {
            self.step();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSample {
    pub sweep: u64,
    pub edges: u64,
    pub triangles: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipStats {
    pub updates: u64,
    pub flips: u64,
}

impl FlipStats {
    pub fn flip_rate(&self) -> f64 {
        self.flips as f64 / self.updates.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTrace {
    pub config: ChainConfig,
    pub samples: Vec<TraceSample>,
    pub stats: FlipStats,
}

impl ChainTrace {
    /// `2E/n²` per recorded sample.
    pub fn edge_densities(&self) -> Vec<f64> {
        let nn = (self.config.n * self.config.n) as f64;
        self.samples.iter().map(|s| 2.0 * s.edges as f64 / nn).collect()
    }

    /// `6T/n³` per recorded sample.
    pub fn triangle_densities(&self) -> Vec<f64> {
        let n3 = (self.config.n as f64).powi(3);
        self.samples.iter().map(|s| 6.0 * s.triangles as f64 / n3).collect()
    }

    /// `E/N̄` per recorded sample.
    pub fn pair_densities(&self) -> Vec<f64> {
        let pairs = self.config.pairs() as f64;
        self.samples.iter().map(|s| s.edges as f64 / pairs).collect()
    }

    /// CSV with a leading `# {json}` metadata line, then
    /// `sweep, edge_density, triangle_density`.
    pub fn write_csv<W: Write>(&self, mut writer: W, metadata: &serde_json::Value) -> Result<()> {
        writeln!(writer, "# {}", serde_json::to_string(metadata)?)?;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["sweep", "edge_density", "triangle_density"])?;
        for (s, (e, t)) in self
            .samples
            .iter()
            .zip(self.edge_densities().into_iter().zip(self.triangle_densities()))
        {
            w.serialize((s.sweep, e, t))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Burn in, then record every `thinning` sweeps. Deterministic in
/// `(seed, stream)`.
pub fn run_chain(config: &ChainConfig) -> Result<ChainTrace> {
    let mut sampler = Sampler::new(config)?;
    for _ in 0..config.burn_in_sweeps {
        sampler.sweep();
    }
    let mut samples = Vec::with_capacity((config.sweeps / config.thinning) as usize);
    for s in 1..=config.sweeps {
        sampler.sweep();
        if s % config.thinning == 0 {
            samples.push(TraceSample {
                sweep: s,
                edges: sampler.state.edge_count(),
                triangles: sampler.state.triangle_count(),
            });
        }
    }
    debug_assert!(sampler.state.is_consistent());
    Ok(ChainTrace {
        config: config.clone(),
        samples,
        stats: FlipStats {
            updates: sampler.updates,
            flips: sampler.flips,
        },
    })
}

/// Run chains in parallel; results are in input order.
pub fn run_chains(configs: &[ChainConfig]) -> Result<Vec<ChainTrace>> {
    configs.par_iter().map(run_chain).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_empty_counts() {
        let k = GraphState::complete(7);
        assert_eq!(k.common_neighbors(0, 1).unwrap(), 5);
        assert_eq!((k.edge_count(), k.triangle_count()), (21, 35));
        assert!(k.is_consistent());
        let e = GraphState::empty(7);
        assert_eq!(e.common_neighbors(2, 5).unwrap(), 0);
        assert_eq!(e.full_recount(), (0, 0));
        assert_eq!(GraphState::complete(4).full_recount(), (6, 4));
    }

    #[test]
    fn vertex_errors() {
        let g = GraphState::empty(4);
        assert!(g.common_neighbors(1, 1).is_err());
        assert!(g.common_neighbors(0, 4).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let p = ModelParams::new(1.7, -0.3);
        assert_eq!(GraphState::empty(5).hamiltonian(p), 0.0);
        let k3 = GraphState::complete(3);
        assert!((k3.hamiltonian(p) - (1.7 / 3.0 + 3.0 * -0.3)).abs() < 1e-15);
    }

    #[test]
    fn inclusion_probability_example() {
        let p = inclusion_probability(ModelParams::new(2.0, -1.0), 10, 3);
        assert!((p - logistic(-0.4)).abs() < 1e-15);
        assert!((p - 0.401_312_339_887_548).abs() < 1e-12);
    }

    #[test]
    fn toggle_is_an_involution() {
        let mut g = GraphState::from_edges(6, &[(0, 2), (1, 2), (0, 3), (1, 3)]).unwrap();
        let before = g.clone();
        g.toggle_edge(0, 1).unwrap();
        assert_eq!(g.triangle_count(), before.triangle_count() + 2);
        g.toggle_edge(0, 1).unwrap();
        assert_eq!(g, before);
    }

    #[test]
    fn wide_rows_span_several_words() {
        let mut g = GraphState::empty(130);
        for w in [1, 63, 64, 100, 129] {
            g.toggle_edge(0, w).unwrap();
            g.toggle_edge(2, w).unwrap();
        }
        assert_eq!(g.common_neighbors(0, 2).unwrap(), 5);
        assert_eq!(g.common_neighbors_naive(0, 2), 5);
    }

    #[test]
    fn config_validation() {
        let mut c = ChainConfig::new(5, ModelParams::new(0.0, 0.0), 1, 0);
        assert!(matches!(c.validate(), Err(Error::Config { field: "sweeps", .. })));
        c.sweeps = 1;
        c.thinning = 0;
        assert!(c.validate().is_err());
        c.thinning = 1;
        c.init = InitialState::ErdosRenyi(1.5);
        assert!(c.validate().is_err());
        c.init = InitialState::FromDensity(0.5);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn from_density_places_exact_edge_count() {
        let mut c = ChainConfig::new(20, ModelParams::new(0.0, 0.0), 3, 1);
        c.init = InitialState::FromDensity(0.25);
        let s = Sampler::new(&c).unwrap();
        assert_eq!(s.state.edge_count(), 48); // round(0.25 · 190)
        assert!(s.state.is_consistent());
    }

    #[test]
    fn trace_shape() {
        let mut c = ChainConfig::new(8, ModelParams::new(1.0, -0.5), 9, 10);
        c.thinning = 3;
        c.burn_in_sweeps = 2;
        let t = run_chain(&c).unwrap();
        assert_eq!(t.samples.len(), 3);
        assert_eq!(t.samples[0].sweep, 3);
        assert_eq!(t.stats.updates, 12 * 28);
        for d in t.edge_densities() {
            assert!((0.0..=1.0 - 1.0 / 8.0).contains(&d));
        }
    }
}
