//! Seeded random markets whose choice functions are unions of linear
//! orders, hence path-independent.
//!
//! The random stream is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`, consumed only through `next_u64`:
//!
//! * `below(n)`: draw `x`; retry while `x >= n * floor(2^64 / n)`; return `x % n`.
//! * `unit()`: `(x >> 11) / 2^53`.
//! * `shuffle(v)`: for `i` from `len - 1` down to `1`, swap `v[i]` with `v[below(i + 1)]`.
//!
//! Draws happen in this order. For each firm: one `unit() < density` test
//! per worker picks the acceptable set (if it comes out empty, worker
//! `below(k)` is used alone); `J = 1 + below(jmax)`; then for each of the
//! `J` orders the acceptable workers (ascending index) are shuffled and
//! truncated to length `1 + below(len)`. For each worker: one
//! `unit() < density` test per firm, then a shuffle of the accepted firms.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::ids::{FirmId, WorkerId};
use crate::io::LoadedMarket;
use crate::market::ManyToOneMarket;
use crate::prefs::{LinearOrder, WorkerPreference};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub workers: usize,
    pub firms: usize,
    pub jmax: usize,
    pub density: f64,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 || self.firms == 0 || self.jmax == 0 {
            return Err(Error::validation("workers, firms and jmax must be at least 1"));
        }
        if self.workers > crate::limits::MAX_WORKERS {
            return Err(Error::validation("too many workers"));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::validation("density must lie in (0, 1]"));
        }
        Ok(())
    }
}

struct Stream(ChaCha8Rng);

impl Stream {
    fn below(&mut self, n: usize) -> usize {
        let n = n as u64;
        let zone = n * (u64::MAX / n);
        loop {
            let x = self.0.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.below(i + 1);
            v.swap(i, j);
        }
    }
}

pub fn gen_random_market(p: &GenParams) -> Result<ManyToOneMarket> {
    p.validate()?;
    let mut rng = Stream(ChaCha8Rng::seed_from_u64(p.seed));
    let k = p.workers;

    let mut choices = Vec::with_capacity(p.firms);
    for _ in 0..p.firms {
        let mut acceptable: Vec<usize> = (0..k).filter(|_| rng.unit() < p.density).collect();
        if acceptable.is_empty() {
            acceptable.push(rng.below(k));
        }
        let copies = 1 + rng.below(p.jmax);
        let mut orders = Vec::with_capacity(copies);
        for _ in 0..copies {
            let mut seq = acceptable.clone();
            rng.shuffle(&mut seq);
            let len = 1 + rng.below(seq.len());
            seq.truncate(len);
            orders.push(LinearOrder::new(seq.into_iter().map(WorkerId).collect())?);
        }
        choices.push(ChoiceFunction::from_orders(k, orders)?);
    }

    let mut prefs = Vec::with_capacity(k);
    for _ in 0..k {
        let mut firms: Vec<FirmId> = (0..p.firms)
            .filter(|_| rng.unit() < p.density)
            .map(FirmId)
            .collect();
        rng.shuffle(&mut firms);
        prefs.push(WorkerPreference::new(firms)?);
    }

    ManyToOneMarket::new(
        (1..=k).map(|i| format!("w{i}")).collect(),
        (1..=p.firms).map(|i| format!("f{i}")).collect(),
        choices,
        prefs,
    )
}

/// The generated market wrapped for serialization, without copy indexing.
pub fn gen_loaded(p: &GenParams) -> Result<LoadedMarket> {
    let market = gen_random_market(p)?;
    Ok(LoadedMarket {
        copy_indexing: vec![None; market.firm_count()],
        market,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::MarketFile;

    #[test]
    fn same_seed_same_market() {
        let p = GenParams {
            workers: 5,
            firms: 3,
            jmax: 4,
            density: 0.7,
            seed: 99,
        };
        let a = MarketFile::from_market(&gen_loaded(&p).unwrap()).to_json();
        let b = MarketFile::from_market(&gen_loaded(&p).unwrap()).to_json();
        assert_eq!(a, b);
        let c = MarketFile::from_market(&gen_loaded(&GenParams { seed: 100, ..p }).unwrap()).to_json();
        assert_ne!(a, c);
    }

    #[test]
    fn trivial_market() {
        let m = gen_random_market(&GenParams {
            workers: 1,
            firms: 1,
            jmax: 1,
            density: 1.0,
            seed: 3,
        })
        .unwrap();
        assert_eq!(m.worker_count(), 1);
        assert_eq!(m.firm_count(), 1);
        assert_eq!(m.pref(WorkerId(0)).firms(), &[FirmId(0)]);
    }

    #[test]
    fn bad_params() {
        let p = GenParams {
            workers: 0,
            firms: 1,
            jmax: 1,
            density: 1.0,
            seed: 0,
        };
        assert!(gen_random_market(&p).is_err());
        assert!(gen_random_market(&GenParams { workers: 1, density: 0.0, ..p }).is_err());
    }
}
