use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TailModel;

const INITIAL_TABLE: usize = 1024;
const TABLE_CAP: usize = 1 << 16;

/// Exact inverse-transform sampler over a cached survival table.
///
/// The table holds `P(X >= x0 + i)` and doubles on demand up to a fixed
/// cap; quantiles beyond the cap are located by a doubling bracket and a
/// binary search on the model's survival function.
pub struct Sampler<'a, M: TailModel + ?Sized> {
    model: &'a M,
    table: Vec<f64>,
}

impl<'a, M: TailModel + ?Sized> Sampler<'a, M> {
    pub fn new(model: &'a M) -> Self {
        let mut s = Self {
            model,
            table: Vec::new(),
        };
        s.extend_to(INITIAL_TABLE);
        s
    }

    fn extend_to(&mut self, len: usize) {
        let from = self.model.x0() + self.table.len() as u64;
        let run = self.model.ccdf_run(from, len - self.table.len());
        let mut floor = self.table.last().copied().unwrap_or(1.0);
        for v in run {
            // Keep the table non-increasing despite rounding.
            floor = floor.min(if v.is_nan() { 0.0 } else { v });
            self.table.push(floor);
        }
        self.table[0] = 1.0;
    }

    /// Draws one value from a uniform `u` in `(0, 1]`: the largest `x` with
    /// `P(X >= x) >= u`.
    pub fn quantile(&mut self, u: f64) -> u64 {
        while *self.table.last().expect("table is non-empty") >= u {
            if self.table.len() >= TABLE_CAP {
                return self.search_beyond(u);
            }
            let doubled = (self.table.len() * 2).min(TABLE_CAP);
            self.extend_to(doubled);
        }
        let first_below = self.table.partition_point(|&c| c >= u);
        self.model.x0() + first_below as u64 - 1
    }

    fn search_beyond(&self, u: f64) -> u64 {
        let ccdf = |x: u64| self.model.ccdf_unchecked(x);
        let mut lo = self.model.x0() + self.table.len() as u64 - 1;
        let mut hi = lo.saturating_mul(2);
        while ccdf(hi) >= u {
            lo = hi;
            if hi == u64::MAX {
                return hi;
            }
            hi = hi.saturating_mul(2);
        }
        // ccdf(lo) >= u > ccdf(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ccdf(mid) >= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u64 {
        let u = 1.0 - rng.random::<f64>();
        self.quantile(u)
    }
}

/// `n` i.i.d. draws from `model`, a deterministic function of `seed`.
pub fn sample<M: TailModel + ?Sized>(model: &M, n: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = Sampler::new(model);
    (0..n).map(|_| sampler.draw(&mut rng)).collect()
}
