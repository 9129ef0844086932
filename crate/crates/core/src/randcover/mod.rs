//! Randomized covers of the complement by independent sets.
//!
//! Both algorithms repeat the same trial: sample `W` by keeping every vertex
//! independently with probability `p`, shrink it to an independent set `I`,
//! and credit `I` with every complement k-set it contains.
//!
//! * [`balanced_cover`] (for d-balanced G): `p = 1 / (2k d^(1/(k-1)))`,
//!   `I = W` minus every vertex of every edge induced by `W`.
//! * [`general_cover`] (for `Delta(G) <= d`): `p = delta / sqrt(d)` with
//!   `delta = 1 / ((k-1) 2^(k+2))`, `I = clean(W)` guided by the auxiliary
//!   graph of high-degree (k-1)-sets.
//!
//! # Reproducibility
//!
//! Trial indices are split into fixed-length blocks. Block `b` draws from
//! stream `b` of a ChaCha8 generator seeded with the master seed, so every
//! block is a pure function of `(seed, b)` and blocks may be evaluated in
//! parallel; results are merged in trial order. Within a block the sampler
//! jumps straight to trials whose sample has at least k vertices (see
//! [`SubsetSampler`]), since smaller samples cannot contain a complement k-set.
//!
//! Only sets that cover at least one not-yet-covered complement k-set are
//! kept in the certificate. `trials` reports the number of trials drawn.

mod cleaning;
mod sampler;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use cleaning::{build_aux_graph, clean, AuxGraph};
pub use sampler::SubsetSampler;

use cleaning::Cleaner;

use crate::combinatorics::for_each_subset;
use crate::cover::CoverCertificate;
use crate::coverage::CoverageMap;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};

/// Blocks evaluated per parallel round.
const BLOCKS_PER_ROUND: u64 = 64;
/// Target number of relevant trials per block.
const RELEVANT_PER_BLOCK: f64 = 64.0;
/// Without an explicit cap, adaptive runs stop after this many times the fixed trial count.
const DEFAULT_CAP_FACTOR: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Draw trials until every complement k-set is covered.
    #[default]
    Adaptive,
    /// Draw exactly the trial count from the upper-bound argument.
    FixedT,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Adaptive => "adaptive",
            Mode::FixedT => "fixed-t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalancedConfig {
    pub d: u64,
    pub seed: u64,
    /// Maximum number of trials; defaults to four times [`BalancedConfig::trial_bound`].
    pub t_cap: Option<u64>,
    pub mode: Mode,
}

impl BalancedConfig {
    pub fn new(d: u64, seed: u64) -> Self {
        BalancedConfig {
            d,
            seed,
            t_cap: None,
            mode: Mode::Adaptive,
        }
    }

    /// `1 / (2k d^(1/(k-1)))`
    pub fn probability(&self, k: usize) -> f64 {
        1.0 / (2.0 * k as f64 * (self.d as f64).powf(1.0 / (k as f64 - 1.0)))
    }

    /// `2^(k+2) k^(k+1)`
    pub fn constant(k: usize) -> f64 {
        2f64.powi(k as i32 + 2) * (k as f64).powi(k as i32 + 1)
    }

    /// `ceil(c d^(k/(k-1)) ln n)`
    pub fn trial_bound(&self, n: usize, k: usize) -> u64 {
        let kf = k as f64;
        ceil_to_u64(Self::constant(k) * (self.d as f64).powf(kf / (kf - 1.0)) * (n as f64).ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneralConfig {
    pub d: u64,
    pub seed: u64,
    /// Maximum number of trials; defaults to four times [`GeneralConfig::trial_bound`].
    pub t_cap: Option<u64>,
    pub mode: Mode,
}

impl GeneralConfig {
    pub fn new(d: u64, seed: u64) -> Self {
        GeneralConfig {
            d,
            seed,
            t_cap: None,
            mode: Mode::Adaptive,
        }
    }

    /// `1 / ((k-1) 2^(k+2))`
    pub fn delta(k: usize) -> f64 {
        1.0 / ((k as f64 - 1.0) * 2f64.powi(k as i32 + 2))
    }

    /// `1 / 2^(k+2)`
    pub fn epsilon(k: usize) -> f64 {
        1.0 / 2f64.powi(k as i32 + 2)
    }

    /// `2k / delta^k`
    pub fn constant(k: usize) -> f64 {
        2.0 * k as f64 / Self::delta(k).powi(k as i32)
    }

    /// `delta / sqrt(d)`
    pub fn probability(&self, k: usize) -> f64 {
        Self::delta(k) / (self.d as f64).sqrt()
    }

    /// `ceil(c d^(k/2) ln n)`
    pub fn trial_bound(&self, n: usize, k: usize) -> u64 {
        ceil_to_u64(Self::constant(k) * (self.d as f64).powf(k as f64 / 2.0) * (n as f64).ln())
    }
}

fn ceil_to_u64(x: f64) -> u64 {
    if x.is_finite() {
        x.ceil().clamp(0.0, u64::MAX as f64) as u64
    } else {
        u64::MAX
    }
}

/// Outcome of a randomized cover run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRun {
    pub certificate: CoverCertificate,
    /// Trials drawn (the achieved t in adaptive mode).
    pub trials: u64,
    pub complete: bool,
    /// Complement k-sets left uncovered.
    pub uncovered: u64,
    /// The fixed trial count from the upper-bound argument.
    pub trial_bound: u64,
}

enum Shrink<'h> {
    DeleteInduced,
    Clean(&'h AuxGraph),
}

struct Engine<'a> {
    g: &'a Hypergraph,
    sampler: SubsetSampler,
    shrink: Shrink<'a>,
    seed: u64,
    block_len: u64,
}

impl<'a> Engine<'a> {
    fn new(g: &'a Hypergraph, p: f64, shrink: Shrink<'a>, seed: u64) -> Self {
        let sampler = SubsetSampler::new(g.n(), p, g.k());
        let q = sampler.relevant_probability();
        let block_len = if q > 0.0 {
            let raw = (RELEVANT_PER_BLOCK / q).ceil().clamp(1.0, (1u64 << 40) as f64) as u64;
            raw.next_power_of_two()
        } else {
            1 << 40
        };
        Engine {
            g,
            sampler,
            shrink,
            seed,
            block_len,
        }
    }

    /// Independent sets (of at least k vertices) from the trials of block `b`
    /// with index below `limit`, tagged with their trial index.
    fn block(&self, b: u64, limit: u64) -> Vec<(u64, Vec<Vertex>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(b);
        let start = b * self.block_len;
        let end = start.saturating_add(self.block_len).min(limit);
        let mut cleaner = Cleaner::new(self.g);
        let mut out = Vec::new();
        let mut next = start;
        while let Some((gap, w)) = self.sampler.skip_to_relevant(&mut rng) {
            next = next.saturating_add(gap);
            if next >= end {
                break;
            }
            let set = match self.shrink {
                Shrink::DeleteInduced => cleaner.delete_induced(&w),
                Shrink::Clean(h) => cleaner.clean(&w, h),
            };
            if set.len() >= self.g.k() {
                out.push((next, set));
            }
            next += 1;
        }
        out
    }

    fn run(&self, limit: u64, adaptive: bool) -> (Vec<VertexSet>, u64, u64) {
        let k = self.g.k();
        let mut uncovered = self.g.num_complement_edges().expect("complement size fits in u64");
        if uncovered == 0 {
            return (Vec::new(), if adaptive { 0 } else { limit }, 0);
        }
        let mut coverage = CoverageMap::new(self.g.n(), k);
        let mut kept = Vec::new();
        let blocks = limit.div_ceil(self.block_len);
        let mut first = 0;
        while first < blocks {
            let last = (first + BLOCKS_PER_ROUND).min(blocks);
            let round: Vec<Vec<(u64, Vec<Vertex>)>> =
                (first..last).into_par_iter().map(|b| self.block(b, limit)).collect();
            for (trial, set) in round.into_iter().flatten() {
                let mut fresh = 0u64;
                for_each_subset(&set, k, |sub| {
                    fresh += u64::from(coverage.insert(sub));
                    true
                });
                if fresh > 0 {
                    uncovered -= fresh;
                    kept.push(VertexSet::from_sorted_unchecked(set));
                    if adaptive && uncovered == 0 {
                        return (kept, trial + 1, 0);
                    }
                }
            }
            first = last;
        }
        (kept, limit, uncovered)
    }
}

struct RunParams {
    algorithm: &'static str,
    d: u64,
    seed: u64,
    mode: Mode,
    t_cap: Option<u64>,
    trial_bound: u64,
}

fn finish(g: &Hypergraph, engine: &Engine<'_>, params: RunParams) -> CoverRun {
    let RunParams {
        algorithm,
        d,
        seed,
        mode,
        t_cap,
        trial_bound,
    } = params;
    let limit = match mode {
        Mode::Adaptive => t_cap.unwrap_or(trial_bound.saturating_mul(DEFAULT_CAP_FACTOR)),
        Mode::FixedT => t_cap.map_or(trial_bound, |cap| cap.min(trial_bound)),
    };
    let (sets, trials, uncovered) = engine.run(limit, mode == Mode::Adaptive);
    let mut certificate = CoverCertificate::new(sets, g.fingerprint());
    for (key, value) in [
        ("algorithm", algorithm.to_string()),
        ("d", d.to_string()),
        ("mode", mode.as_str().to_string()),
        ("p", format!("{:e}", engine.sampler.probability())),
        ("seed", seed.to_string()),
        ("trials", trials.to_string()),
    ] {
        certificate.provenance.insert(key.to_string(), value);
    }
    CoverRun {
        certificate,
        trials,
        complete: uncovered == 0,
        uncovered,
        trial_bound,
    }
}

/// Covering algorithm for d-balanced hypergraphs.
pub fn balanced_cover(g: &Hypergraph, cfg: &BalancedConfig) -> Result<CoverRun> {
    if cfg.d < 2 {
        return Err(Error::Input(format!("balanced cover needs d >= 2, got {}", cfg.d)));
    }
    if g.n() < 2 {
        return Err(Error::Input("balanced cover needs n >= 2".into()));
    }
    if let Some((level, max_degree)) = g.balance_violation(cfg.d) {
        return Err(Error::NotBalanced {
            level,
            max_degree,
            d: cfg.d,
            k: g.k(),
        });
    }
    let engine = Engine::new(g, cfg.probability(g.k()), Shrink::DeleteInduced, cfg.seed);
    let params = RunParams {
        algorithm: "balanced",
        d: cfg.d,
        seed: cfg.seed,
        mode: cfg.mode,
        t_cap: cfg.t_cap,
        trial_bound: cfg.trial_bound(g.n(), g.k()),
    };
    Ok(finish(g, &engine, params))
}

/// Covering algorithm for hypergraphs of maximum degree at most d.
pub fn general_cover(g: &Hypergraph, cfg: &GeneralConfig) -> Result<CoverRun> {
    if cfg.d < 3 {
        return Err(Error::Input(format!("general cover needs d >= 3, got {}", cfg.d)));
    }
    if g.n() < 2 {
        return Err(Error::Input("general cover needs n >= 2".into()));
    }
    let max_degree = g.degree_profile().max_vertex_degree();
    if max_degree > cfg.d {
        return Err(Error::DegreeExceeded { max_degree, d: cfg.d });
    }
    let h = build_aux_graph(g, cfg.d)?;
    let engine = Engine::new(g, cfg.probability(g.k()), Shrink::Clean(&h), cfg.seed);
    let params = RunParams {
        algorithm: "general",
        d: cfg.d,
        seed: cfg.seed,
        mode: cfg.mode,
        t_cap: cfg.t_cap,
        trial_bound: cfg.trial_bound(g.n(), g.k()),
    };
    Ok(finish(g, &engine, params))
}
