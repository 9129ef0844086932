//! Binomial coefficients, lexicographic k-subset enumeration and colex ranking.

/// `C(n, k)` or `None` on u64 overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Natural log of `C(n, k)`, accurate for large arguments.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

/// Advance `idx` (strictly increasing, values in `0..n`) to the next k-combination in
/// lexicographic order. Returns `false` once the last combination has been passed.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lexicographic iterator over the k-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    exhausted: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            started: false,
            exhausted: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.exhausted {
            return None;
        }
        if self.started {
            if !next_combination(&mut self.idx, self.n) {
                self.exhausted = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(self.idx.iter().map(|&i| i as u32).collect())
    }
}

/// Calls `f` on every k-subset of `items` (lexicographic in positions).
/// Stops early when `f` returns `false`.
pub fn for_each_subset<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T]) -> bool) {
    if k > items.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        if !f(&buf) {
            return;
        }
        if !next_combination(&mut idx, items.len()) {
            return;
        }
        for (slot, &i) in buf.iter_mut().zip(&idx) {
            *slot = items[i];
        }
    }
}

/// Pascal table `C(a, b)` for `a <= n`, `b <= k`, saturating at `u64::MAX`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    k: usize,
    rows: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let width = k + 1;
        let mut rows = vec![0u64; (n + 1) * width];
        for a in 0..=n {
            rows[a * width] = 1;
            for b in 1..=k.min(a) {
                let left = rows[(a - 1) * width + b - 1];
                let up = if b < a { rows[(a - 1) * width + b] } else { 0 };
                rows[a * width + b] = left.saturating_add(up);
            }
        }
        BinomialTable { k, rows }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.rows[a * (self.k + 1) + b]
    }

    /// Colex rank of a strictly increasing k-set: `sum_i C(s_i, i + 1)`.
    #[inline]
    pub fn rank(&self, set: &[u32]) -> u64 {
        set.iter().enumerate().map(|(i, &v)| self.get(v as usize, i + 1)).sum()
    }
}
