//! Synchronous r-neighbour bootstrap percolation on `{0,1}^d`.
//!
//! State is a dense bit array over all `2^d` sites with a frontier-driven
//! candidate scan: only uninfected neighbours of last round's infections can
//! cross the threshold this round.

use serde::Serialize;

use crate::hypercube::{Dimension, Vertex, WordSet};
use crate::{Error, Result};

/// Marker for "never infected" in the per-vertex time table.
pub const TIME_UNSET: u32 = u32::MAX;

struct DenseBits {
    words: Vec<u64>,
}

impl DenseBits {
    fn new(len: u64) -> Self {
        DenseBits {
            words: vec![0u64; len.div_ceil(64) as usize],
        }
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        (self.words[(i >> 6) as usize] >> (i & 63)) & 1 != 0
    }

    #[inline]
    fn set(&mut self, i: u64) {
        self.words[(i >> 6) as usize] |= 1u64 << (i & 63);
    }
}

/// The evolving infected set with per-vertex infection times.
pub struct InfectionState {
    d: Dimension,
    r: u32,
    infected: DenseBits,
    time_of: Vec<u32>,
    clock: u32,
    frontier: Vec<u64>,
    infected_count: u64,
    initial: WordSet,
}

/// Final verdict of a run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub d: Dimension,
    pub r: u32,
    pub percolated: bool,
    /// Round of the last infection. The percolated flag gates its use as a
    /// maximal-time witness; non-percolating runs still report it.
    pub total_time: u32,
    /// Indexed by vertex word; `TIME_UNSET` means never infected.
    pub times: Vec<u32>,
    pub final_infected: WordSet,
    pub initial: WordSet,
}

impl InfectionState {
    /// Exactly the initial sites infected at time 0.
    pub fn init(d: Dimension, r: u32, initial: &WordSet, allow_large: bool) -> Result<Self> {
        if r < 1 {
            return Err(Error::Precondition("threshold r must be at least 1".into()));
        }
        if initial.dim() != d.get() {
            return Err(Error::DimensionMismatch {
                left: d.get(),
                right: initial.dim(),
            });
        }
        d.check_dense(allow_large)?;
        let n = d.vertex_count();
        let mut infected = DenseBits::new(n);
        let mut time_of = vec![TIME_UNSET; n as usize];
        let mut frontier = Vec::with_capacity(initial.len());
        for w in initial.words() {
            infected.set(w);
            time_of[w as usize] = 0;
            frontier.push(w);
        }
        Ok(InfectionState {
            d,
            r,
            infected,
            time_of,
            clock: 0,
            frontier,
            infected_count: initial.len() as u64,
            initial: initial.clone(),
        })
    }

    pub fn d(&self) -> Dimension {
        self.d
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn clock(&self) -> u32 {
        self.clock
    }

    pub fn infected_count(&self) -> u64 {
        self.infected_count
    }

    pub fn is_infected(&self, w: u64) -> bool {
        self.infected.get(w)
    }

    pub fn time_of(&self, w: u64) -> Option<u32> {
        match self.time_of[w as usize] {
            TIME_UNSET => None,
            t => Some(t),
        }
    }

    pub fn infected_set(&self) -> WordSet {
        WordSet::from_words(
            self.d.get(),
            (0..self.d.vertex_count()).filter(|&w| self.infected.get(w)),
        )
        .expect("words fit dimension")
    }

    /// One synchronous round. Every currently uninfected vertex with at
    /// least `r` infected neighbours becomes infected simultaneously; the
    /// returned set is exactly those vertices. Empty means fixpoint (the
    /// clock does not advance).
    pub fn step(&mut self) -> WordSet {
        let d = self.d.get();
        let mut candidates: Vec<u64> = Vec::new();
        for &f in &self.frontier {
            for i in 0..d {
                let nb = f ^ (1u64 << i);
                if !self.infected.get(nb) {
                    candidates.push(nb);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        let mut newly: Vec<u64> = Vec::new();
        for &c in &candidates {
            let mut count = 0u32;
            for i in 0..d {
                if self.infected.get(c ^ (1u64 << i)) {
                    count += 1;
                    if count >= self.r {
                        break;
                    }
                }
            }
            if count >= self.r {
                newly.push(c);
            }
        }
        if newly.is_empty() {
            self.frontier.clear();
            return WordSet::empty(d);
        }
        self.clock += 1;
        for &w in &newly {
            self.infected.set(w);
            self.time_of[w as usize] = self.clock;
        }
        self.infected_count += newly.len() as u64;
        self.frontier = newly.clone();
        WordSet::from_words(d, newly).expect("words fit dimension")
    }

    /// Iterates to the fixpoint.
    pub fn run(mut self) -> Outcome {
        while !self.step().is_empty() {}
        self.into_outcome()
    }

    pub fn into_outcome(self) -> Outcome {
        let percolated = self.infected_count == self.d.vertex_count();
        Outcome {
            d: self.d,
            r: self.r,
            percolated,
            total_time: self.clock,
            times: self.time_of,
            final_infected: WordSet::from_words(
                self.d.get(),
                (0..self.d.vertex_count()).filter(|&w| self.infected.get(w)),
            )
            .expect("words fit dimension"),
            initial: self.initial,
        }
    }
}

/// True iff one round from this set infects nothing.
pub fn is_stable(d: Dimension, r: u32, set: &WordSet, allow_large: bool) -> Result<bool> {
    let mut state = InfectionState::init(d, r, set, allow_large)?;
    Ok(state.step().is_empty())
}

/// Convenience: init + run.
pub fn run(d: Dimension, r: u32, initial: &WordSet, allow_large: bool) -> Result<Outcome> {
    Ok(InfectionState::init(d, r, initial, allow_large)?.run())
}

impl Outcome {
    pub fn time_of(&self, w: u64) -> Option<u32> {
        match self.times[w as usize] {
            TIME_UNSET => None,
            t => Some(t),
        }
    }

    /// Report view with the contractual fields; per-vertex times optional.
    pub fn to_report(&self, with_times: bool) -> serde_json::Value {
        let mut report = serde_json::json!({
            "d": self.d.get(),
            "r": self.r,
            "percolated": self.percolated,
            "total_time": self.total_time,
            "infected_count": self.final_infected.len(),
        });
        if with_times {
            let times: Vec<serde_json::Value> = self
                .final_infected
                .vertices()
                .map(|v| serde_json::json!([v.to_string(), self.times[v.bits() as usize]]))
                .collect();
            report["times"] = serde_json::Value::Array(times);
        }
        report
    }
}

/// One vertex that breaks the early-neighbour bound.
#[derive(Clone, Debug, Serialize)]
pub struct EarlyNeighbourViolation {
    pub vertex: String,
    pub early_neighbours: u32,
}

/// Checks, for every vertex not initially infected, that at most `r-1`
/// neighbours were infected more than one round earlier.
pub fn early_neighbour_violations(out: &Outcome) -> Vec<EarlyNeighbourViolation> {
    let d = out.d.get();
    let mut violations = Vec::new();
    for w in 0..out.d.vertex_count() {
        let tv = out.times[w as usize];
        if tv == TIME_UNSET || out.initial.contains(w) {
            continue;
        }
        let mut early = 0u32;
        for i in 0..d {
            let tu = out.times[(w ^ (1u64 << i)) as usize];
            if tu != TIME_UNSET && tv > tu && tv - tu > 1 {
                early += 1;
            }
        }
        if early > out.r - 1 {
            violations.push(EarlyNeighbourViolation {
                vertex: Vertex::new(d, w).expect("word fits").to_string(),
                early_neighbours: early,
            });
        }
    }
    violations
}
