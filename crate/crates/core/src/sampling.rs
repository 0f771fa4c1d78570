//! Seeded random subsets: Bernoulli sampling, uniform fixed-size sampling and
//! symmetrized generating sets.
//!
//! # Generator
//!
//! [`SeededRng`] is SplitMix64: the state advances by the constant
//! `0x9e3779b97f4a7c15` and each output is the state passed through the
//! SplitMix64 finalizer. The output stream depends only on the 64-bit seed,
//! never on the platform. Independent sub-streams are keyed by
//! [`SeededRng::substream`], which folds a list of labels (for experiments:
//! group order and trial index) into the base seed with the same finalizer.
//! Trial `i` therefore draws the same numbers no matter which thread runs it
//! or in what order.

use crate::error::{Result, VcError};
use crate::group::FiniteGroup;
use crate::subset::Subset;

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededRng {
    seed: u64,
    state: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { seed, state: seed }
    }

    /// Generator keyed by `base` and an ordered list of labels.
    pub fn substream(base: u64, labels: &[u64]) -> Self {
        let key = labels
            .iter()
            .fold(mix64(base ^ GAMMA), |k, &l| mix64(k ^ mix64(l.wrapping_add(GAMMA))));
        SeededRng::new(key)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[0, bound)` by rejection; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(VcError::Domain(format!("probability {p} outside [0, 1]")))
    }
}

/// Includes each element independently with probability `p`, drawing once
/// per element in ascending index order.
pub fn bernoulli_subset(g: &FiniteGroup, p: f64, rng: &mut SeededRng) -> Result<Subset> {
    check_probability(p)?;
    let mut a = Subset::empty(g.order());
    for x in g.elements() {
        if rng.next_f64() < p {
            a.insert(x);
        }
    }
    Ok(a)
}

/// Uniformly random subset of cardinality exactly `d` (Floyd's algorithm).
pub fn uniform_fixed_size(g: &FiniteGroup, d: usize, rng: &mut SeededRng) -> Result<Subset> {
    let n = g.order();
    if d > n {
        return Err(VcError::Domain(format!(
            "subset size {d} exceeds group order {n}"
        )));
    }
    let mut a = Subset::empty(n);
    for j in n - d..n {
        let t = rng.below(j as u64 + 1) as usize;
        if a.contains(t) {
            a.insert(j);
        } else {
            a.insert(t);
        }
    }
    Ok(a)
}

/// `A ∪ A⁻¹`.
pub fn symmetrize(g: &FiniteGroup, a: &Subset) -> Result<Subset> {
    VcError::check_len(g.order(), a.universe())?;
    let mut s = a.clone();
    for x in a.iter() {
        s.insert(g.inv(x));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // SplitMix64 seeded with 0; first outputs of the reference generator.
        let mut rng = SeededRng::new(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
        assert_eq!(rng.next_u64(), 0x06c45d188009454f);
    }

    #[test]
    fn substreams_differ_and_repeat() {
        let a = SeededRng::substream(7, &[64, 0]).next_u64();
        let b = SeededRng::substream(7, &[64, 1]).next_u64();
        let c = SeededRng::substream(7, &[64, 0]).next_u64();
        assert_ne!(a, b);
        assert_eq!(a, c);
        assert_ne!(
            SeededRng::substream(7, &[64, 1]).next_u64(),
            SeededRng::substream(7, &[1, 64]).next_u64()
        );
    }

    #[test]
    fn bernoulli_extremes() {
        let g = FiniteGroup::cyclic(37).unwrap();
        let mut rng = SeededRng::new(3);
        for _ in 0..20 {
            assert!(bernoulli_subset(&g, 0.0, &mut rng).unwrap().is_empty());
            assert!(bernoulli_subset(&g, 1.0, &mut rng).unwrap().is_full());
        }
        assert!(bernoulli_subset(&g, 1.5, &mut rng).is_err());
        assert!(bernoulli_subset(&g, -0.1, &mut rng).is_err());
        assert!(bernoulli_subset(&g, f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn bernoulli_mean_size() {
        // N = 4096, p = 1/2: per-trial sd is sqrt(Np(1-p)) = 32, so the mean
        // over 1000 trials has standard error 32 / sqrt(1000).
        let g = FiniteGroup::cyclic(4096).unwrap();
        let trials = 1000;
        let total: usize = (0..trials)
            .map(|i| {
                let mut rng = SeededRng::substream(11, &[i]);
                bernoulli_subset(&g, 0.5, &mut rng).unwrap().count()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        let se = 32.0 / (trials as f64).sqrt();
        assert!((mean - 2048.0).abs() <= 4.0 * se, "mean {mean}");
    }

    #[test]
    fn bernoulli_is_reproducible() {
        let g = FiniteGroup::cyclic(300).unwrap();
        let a = bernoulli_subset(&g, 0.3, &mut SeededRng::new(99)).unwrap();
        let b = bernoulli_subset(&g, 0.3, &mut SeededRng::new(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn per_element_frequency() {
        let g = FiniteGroup::cyclic(64).unwrap();
        let p = 0.3;
        let trials = 10_000;
        let mut hits = [0usize; 64];
        let mut rng = SeededRng::new(5);
        for _ in 0..trials {
            for x in bernoulli_subset(&g, p, &mut rng).unwrap().iter() {
                hits[x] += 1;
            }
        }
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        for (x, &h) in hits.iter().enumerate() {
            let f = h as f64 / trials as f64;
            assert!((f - p).abs() <= 5.0 * se, "element {x}: {f}");
        }
    }

    #[test]
    fn fixed_size_extremes() {
        let g = FiniteGroup::cyclic(9).unwrap();
        let mut rng = SeededRng::new(1);
        assert!(uniform_fixed_size(&g, 0, &mut rng).unwrap().is_empty());
        assert!(uniform_fixed_size(&g, 9, &mut rng).unwrap().is_full());
        assert_eq!(uniform_fixed_size(&g, 4, &mut rng).unwrap().count(), 4);
        assert!(uniform_fixed_size(&g, 10, &mut rng).is_err());
    }

    #[test]
    fn fixed_size_pairs_are_uniform() {
        // All 15 pairs of a 6-set: counts are multinomial(15000, 1/15).
        let g = FiniteGroup::cyclic(6).unwrap();
        let trials = 15_000usize;
        let mut counts = std::collections::HashMap::new();
        let mut rng = SeededRng::new(2024);
        for _ in 0..trials {
            let s = uniform_fixed_size(&g, 2, &mut rng).unwrap();
            *counts.entry(s.to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 15);
        let q = 1.0 / 15.0;
        let sd = (trials as f64 * q * (1.0 - q)).sqrt();
        for (pair, &c) in &counts {
            assert!((c as f64 - trials as f64 * q).abs() <= 5.0 * sd, "{pair:?}: {c}");
        }
    }

    #[test]
    fn symmetrize_examples() {
        let c5 = FiniteGroup::cyclic(5).unwrap();
        let a = Subset::from_indices(5, [1]).unwrap();
        assert_eq!(symmetrize(&c5, &a).unwrap().to_vec(), vec![1, 4]);
        let sym = Subset::from_indices(5, [0, 2, 3]).unwrap();
        assert_eq!(symmetrize(&c5, &sym).unwrap(), sym);
        let d3 = FiniteGroup::dihedral(3).unwrap();
        let refl = Subset::from_indices(6, [4]).unwrap();
        assert_eq!(symmetrize(&d3, &refl).unwrap(), refl);
    }
}
