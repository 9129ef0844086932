//! Random vertex subsets where each vertex is kept independently with probability `p`.

use rand::seq::index;
use rand::Rng;

use crate::hypergraph::Vertex;

/// Draws `W ⊆ 0..n` with independent inclusion probability `p`.
///
/// Besides plain per-vertex draws, the sampler can jump directly to the next
/// trial whose sample has at least `k` vertices: the number of skipped trials
/// is geometric with success probability `P(Bin(n, p) >= k)`, and the accepted
/// sample is a uniform subset whose size follows the binomial law truncated to
/// `>= k`. The joint law of (skipped trials, sample) equals that of drawing
/// trials one at a time and discarding those with fewer than `k` vertices.
#[derive(Debug, Clone)]
pub struct SubsetSampler {
    n: usize,
    p: f64,
    min_size: usize,
    /// `P(Bin(n, p) >= min_size)`
    tail: f64,
    /// Cumulative truncated size distribution over `min_size..=n`.
    size_cdf: Vec<f64>,
}

impl SubsetSampler {
    pub fn new(n: usize, p: f64, min_size: usize) -> Self {
        assert!((0.0..=1.0).contains(&p), "probability {p} outside [0, 1]");
        let pmf = binomial_pmf(n, p);
        let tail: f64 = pmf.iter().skip(min_size).sum();
        let mut acc = 0.0;
        let size_cdf = pmf
            .iter()
            .skip(min_size)
            .map(|&x| {
                acc += x;
                if tail > 0.0 {
                    acc / tail
                } else {
                    0.0
                }
            })
            .collect();
        SubsetSampler {
            n,
            p,
            min_size,
            tail: tail.min(1.0),
            size_cdf,
        }
    }

    pub fn probability(&self) -> f64 {
        self.p
    }

    /// Probability that a single trial yields at least `min_size` vertices.
    pub fn relevant_probability(&self) -> f64 {
        self.tail
    }

    /// One trial, vertex by vertex.
    pub fn bernoulli<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vertex> {
        (0..self.n as Vertex).filter(|_| rng.gen_bool(self.p)).collect()
    }

    /// Number of trials with fewer than `min_size` vertices before the next
    /// one with at least `min_size`, and that trial's sample (sorted).
    /// Returns `None` if no trial can ever reach `min_size`.
    pub fn skip_to_relevant<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(u64, Vec<Vertex>)> {
        if self.tail <= 0.0 {
            return None;
        }
        let gap = if self.tail >= 1.0 {
            0
        } else {
            let u: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
            (u.ln() / (-self.tail).ln_1p()).floor().min(u64::MAX as f64) as u64
        };
        let u: f64 = rng.gen();
        let offset = self
            .size_cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.size_cdf.len() - 1);
        let size = self.min_size + offset;
        let mut w: Vec<Vertex> = index::sample(rng, self.n, size)
            .into_iter()
            .map(|i| i as Vertex)
            .collect();
        w.sort_unstable();
        Some((gap, w))
    }
}

/// `P(Bin(n, p) = s)` for `s = 0..=n`.
fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        return v;
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mut ln_choose = 0.0f64;
    (0..=n)
        .map(|s| {
            if s > 0 {
                ln_choose += ((n - s + 1) as f64).ln() - (s as f64).ln();
            }
            (ln_choose + s as f64 * lp + (n - s) as f64 * lq).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pmf_sums_to_one() {
        for (n, p) in [(10, 0.3), (60, 0.002), (200, 0.04)] {
            let total: f64 = binomial_pmf(n, p).iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bernoulli_mean_is_np() {
        let sampler = SubsetSampler::new(40, 0.15, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 10_000;
        let total: usize = (0..trials).map(|_| sampler.bernoulli(&mut rng).len()).sum();
        let mean = total as f64 / trials as f64;
        let expected = 40.0 * 0.15;
        let sigma = (40.0 * 0.15 * 0.85 / trials as f64).sqrt();
        assert!((mean - expected).abs() < 5.0 * sigma, "mean {mean}");
    }

    #[test]
    fn skipping_matches_per_trial_law() {
        // Rate of relevant trials and their mean size agree with direct simulation.
        let (n, p, k) = (12, 0.2, 3);
        let sampler = SubsetSampler::new(n, p, k);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 20_000;
        let mut trials = 0u64;
        let mut size_sum = 0usize;
        for _ in 0..draws {
            let (gap, w) = sampler.skip_to_relevant(&mut rng).unwrap();
            assert!(w.len() >= k);
            assert!(w.windows(2).all(|x| x[0] < x[1]));
            trials += gap + 1;
            size_sum += w.len();
        }
        let q = sampler.relevant_probability();
        let rate = draws as f64 / trials as f64;
        assert!((rate - q).abs() < 0.02 * q, "rate {rate} vs {q}");

        let mut direct_rng = ChaCha8Rng::seed_from_u64(12);
        let mut hits = 0usize;
        let mut direct_sum = 0usize;
        for _ in 0..200_000 {
            let w = sampler.bernoulli(&mut direct_rng);
            if w.len() >= k {
                hits += 1;
                direct_sum += w.len();
            }
        }
        let skip_mean = size_sum as f64 / draws as f64;
        let direct_mean = direct_sum as f64 / hits as f64;
        assert!((skip_mean - direct_mean).abs() < 0.03, "{skip_mean} vs {direct_mean}");
        assert!((hits as f64 / 200_000.0 - q).abs() < 0.01);
    }

    #[test]
    fn impossible_sizes_yield_none() {
        let sampler = SubsetSampler::new(2, 0.5, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sampler.skip_to_relevant(&mut rng).is_none());
    }
}
