//! Oracles around the maximal percolation time: exhaustive subset
//! enumeration at tiny `d`, the `(4r+2)·2^d/d` upper-bound check, and
//! seeded Monte Carlo percolation-time statistics.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine;
use crate::hypercube::{Dimension, WordSet};
use crate::{Error, Result};

/// Without an override, subsets are only enumerated for d up to this.
const BRUTE_FORCE_GUARD: u32 = 4;

/// Maximal time over all percolating subsets, with the witness attaining it.
#[derive(Clone, Debug)]
pub struct MaxTimeResult {
    pub d: Dimension,
    pub r: u32,
    pub max_time: u32,
    /// Lexicographically smallest percolating initial set attaining
    /// `max_time` (by the numeric value of its characteristic word).
    pub witness: WordSet,
    pub exhaustive: bool,
}

impl MaxTimeResult {
    pub fn to_report(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.d.get(),
            "r": self.r,
            "max_time": self.max_time,
            "witness": self.witness.vertices().map(|v| v.to_string()).collect::<Vec<_>>(),
            "exhaustive": self.exhaustive,
        })
    }
}

fn subset_from_mask(d: u32, mask: u64) -> WordSet {
    WordSet::from_words(d, (0..1u64 << d).filter(|&w| (mask >> w) & 1 != 0))
        .expect("words fit dimension")
}

/// Enumerates every subset of `{0,1}^d` in ascending characteristic-word
/// order, runs the process on each, and returns the maximum total time over
/// percolating subsets. The parallel reduction takes max time first, then
/// the smallest characteristic word, so the result is independent of the
/// worker count.
pub fn brute_force_max_time(d: Dimension, r: u32, allow_large: bool) -> Result<MaxTimeResult> {
    let dd = d.get();
    if dd > BRUTE_FORCE_GUARD && !allow_large {
        return Err(Error::BruteForceGuard(dd));
    }
    if dd > 5 {
        // 2^(2^d) characteristic words no longer fit a u64.
        return Err(Error::BruteForceGuard(dd));
    }
    let n_vertices = 1u64 << dd;
    let total: u64 = if n_vertices >= 64 { u64::MAX } else { (1u64 << n_vertices) - 1 };
    let best = (1..=total)
        .into_par_iter()
        .filter_map(|mask| {
            let initial = subset_from_mask(dd, mask);
            let out = engine::run(d, r, &initial, false).expect("valid run");
            out.percolated.then_some((out.total_time, mask))
        })
        .reduce(
            || (0, u64::MAX),
            |a, b| {
                if a.1 == u64::MAX {
                    b
                } else if b.1 == u64::MAX {
                    a
                } else {
                    match a.0.cmp(&b.0) {
                        std::cmp::Ordering::Greater => a,
                        std::cmp::Ordering::Less => b,
                        std::cmp::Ordering::Equal => {
                            if a.1 <= b.1 {
                                a
                            } else {
                                b
                            }
                        }
                    }
                }
            },
        );
    if best.1 == u64::MAX {
        // With r >= 1 the full set always percolates, so this is unreachable.
        return Err(Error::Precondition("no percolating subset found".into()));
    }
    Ok(MaxTimeResult {
        d,
        r,
        max_time: best.0,
        witness: subset_from_mask(dd, best.1),
        exhaustive: true,
    })
}

/// True iff `t <= (4r+2)·2^d/d`, compared exactly over the integers.
pub fn check_upper_bound(d: Dimension, r: u32, t: u64) -> Result<bool> {
    if r < 3 {
        return Err(Error::Precondition(format!(
            "upper bound needs r >= 3, got {r}"
        )));
    }
    if d.get() < r {
        return Err(Error::Precondition(format!(
            "upper bound needs d >= r, got d={} r={r}",
            d.get()
        )));
    }
    let lhs = t as u128 * d.get() as u128;
    let rhs = (4 * r as u128 + 2) << d.get();
    Ok(lhs <= rhs)
}

/// Conditional-on-percolation time statistics for Bernoulli(p) initial sets.
#[derive(Clone, Debug, Serialize)]
pub struct McStats {
    pub d: u32,
    pub r: u32,
    pub p: f64,
    pub samples: u64,
    pub seed: u64,
    pub percolated_count: u64,
    /// total_time -> count, over percolating samples only.
    pub histogram: BTreeMap<u32, u64>,
    pub mean_time: Option<f64>,
    pub max_time: Option<u32>,
}

/// Draws each vertex independently with probability `p` from a ChaCha stream
/// seeded with `seed ^ sample_index`.
pub fn random_initial_set(d: Dimension, p: f64, rng: &mut impl Rng) -> WordSet {
    WordSet::from_words(d.get(), (0..d.vertex_count()).filter(|_| rng.gen_bool(p)))
        .expect("words fit dimension")
}

/// Runs `samples` independent Bernoulli(p) initial sets and aggregates
/// conditional-on-percolation statistics. Bit-reproducible for a fixed seed
/// and independent of the worker count.
pub fn mc_percolation_time(
    d: Dimension,
    r: u32,
    p: f64,
    samples: u64,
    seed: u64,
    allow_large: bool,
) -> Result<McStats> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("probability {p} outside [0, 1]")));
    }
    d.check_dense(allow_large)?;
    let per_sample: Vec<Option<u32>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i);
            let initial = random_initial_set(d, p, &mut rng);
            let out = engine::run(d, r, &initial, allow_large).expect("valid run");
            out.percolated.then_some(out.total_time)
        })
        .collect();
    let mut histogram = BTreeMap::new();
    let mut percolated_count = 0u64;
    let mut sum = 0u64;
    let mut max_time = None;
    for t in per_sample.into_iter().flatten() {
        *histogram.entry(t).or_insert(0u64) += 1;
        percolated_count += 1;
        sum += t as u64;
        max_time = Some(max_time.map_or(t, |m: u32| m.max(t)));
    }
    Ok(McStats {
        d: d.get(),
        r,
        p,
        samples,
        seed,
        percolated_count,
        histogram,
        mean_time: (percolated_count > 0).then(|| sum as f64 / percolated_count as f64),
        max_time,
    })
}

impl McStats {
    /// CSV export: `time,count` rows in ascending time order.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("time,count\n");
        for (t, c) in &self.histogram {
            out.push_str(&format!("{t},{c}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn brute_force_small_cases() {
        // r=2 values agree with floor(d^2/3).
        let res = brute_force_max_time(dim(2), 2, false).unwrap();
        assert_eq!(res.max_time, 1);
        assert!(res.exhaustive);
        let res = brute_force_max_time(dim(3), 2, false).unwrap();
        assert_eq!(res.max_time, 3);

        // r > d forces the full initial set.
        let res = brute_force_max_time(dim(2), 3, false).unwrap();
        assert_eq!(res.max_time, 0);
        assert_eq!(res.witness, WordSet::full(2).unwrap());

        assert!(matches!(
            brute_force_max_time(dim(5), 2, false),
            Err(Error::BruteForceGuard(5))
        ));
    }

    #[test]
    fn witness_reruns_to_max_time() {
        for (d, r) in [(2u32, 2u32), (3, 2), (3, 3)] {
            let res = brute_force_max_time(dim(d), r, false).unwrap();
            let out = engine::run(dim(d), r, &res.witness, false).unwrap();
            assert!(out.percolated);
            assert_eq!(out.total_time, res.max_time);
        }
    }

    #[test]
    fn r1_max_time_is_eccentricity() {
        // For r=1 a single seed takes exactly d rounds and nothing is slower.
        for d in 1..=4u32 {
            let res = brute_force_max_time(dim(d), 1, false).unwrap();
            assert_eq!(res.max_time, d);
        }
    }

    #[test]
    fn upper_bound_exact_comparison() {
        assert!(check_upper_bound(dim(15), 3, 30583).unwrap());
        assert!(!check_upper_bound(dim(15), 3, 30584).unwrap());
        assert!(check_upper_bound(dim(3), 3, 8).unwrap());
        assert!(check_upper_bound(dim(3), 3, 2).is_ok());
        assert!(check_upper_bound(dim(3), 2, 1).is_err());
        assert!(check_upper_bound(dim(3), 4, 1).is_err());
    }

    #[test]
    fn exhaustive_values_respect_upper_bound() {
        for (d, r) in [(3u32, 3u32), (4, 3), (4, 4)] {
            let res = brute_force_max_time(dim(d), r, false).unwrap();
            assert!(check_upper_bound(dim(d), r, res.max_time as u64).unwrap());
        }
    }

    #[test]
    fn mc_edge_probabilities() {
        let stats = mc_percolation_time(dim(4), 2, 1.0, 20, 1, false).unwrap();
        assert_eq!(stats.percolated_count, 20);
        assert_eq!(stats.max_time, Some(0));
        let stats = mc_percolation_time(dim(4), 2, 0.0, 20, 1, false).unwrap();
        assert_eq!(stats.percolated_count, 0);
        assert!(stats.histogram.is_empty());
        assert!(mc_percolation_time(dim(4), 2, 1.5, 1, 1, false).is_err());
    }

    #[test]
    fn mc_deterministic_for_fixed_seed() {
        let a = mc_percolation_time(dim(10), 3, 0.5, 100, 42, false).unwrap();
        let b = mc_percolation_time(dim(10), 3, 0.5, 100, 42, false).unwrap();
        assert_eq!(a.percolated_count, b.percolated_count);
        assert_eq!(a.histogram, b.histogram);
        assert_eq!(a.mean_time, b.mean_time);
        // Histogram mass equals the percolating count.
        assert_eq!(a.histogram.values().sum::<u64>(), a.percolated_count);
    }
}
