//! Spread-k snakes: paths `(S_t)` in the hypercube such that sites at path
//! distance at least `k` are also at Hamming distance at least `k`.
//! Validation, local-isometry checking, normalization, and longest-snake
//! search with symmetry breaking under coordinate permutations.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::hypercube::{CoordPermutation, Dimension, Vertex};
use crate::{Error, Result};

/// An ordered vertex sequence with its spread parameter. The length is the
/// number of steps, i.e. one less than the number of sites.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SnakePath {
    k: u32,
    dim: u32,
    sites: Vec<u64>,
}

/// First violation found when checking a candidate snake, in scan order:
/// path property first, then spread pairs by increasing `t` then `t'`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SnakeViolation {
    Empty,
    Duplicate { t: usize, t_prime: usize },
    NotAdjacent { t: usize, distance: u32 },
    Spread { t: usize, t_prime: usize, distance: u32 },
}

impl fmt::Display for SnakeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnakeViolation::Empty => write!(f, "empty site sequence"),
            SnakeViolation::Duplicate { t, t_prime } => {
                write!(f, "sites {t} and {t_prime} coincide")
            }
            SnakeViolation::NotAdjacent { t, distance } => write!(
                f,
                "sites {t} and {} are at distance {distance}, not 1",
                t + 1
            ),
            SnakeViolation::Spread { t, t_prime, distance } => write!(
                f,
                "spread violated at pair ({t}, {t_prime}): distance {distance} < k"
            ),
        }
    }
}

/// Checks the three snake invariants over raw words of one dimension.
pub fn verify_words(sites: &[u64], k: u32) -> std::result::Result<(), SnakeViolation> {
    if sites.is_empty() {
        return Err(SnakeViolation::Empty);
    }
    for t in 0..sites.len() - 1 {
        let distance = (sites[t] ^ sites[t + 1]).count_ones();
        if distance != 1 {
            return Err(SnakeViolation::NotAdjacent { t, distance });
        }
    }
    for t in 0..sites.len() {
        for t_prime in t + 1..sites.len() {
            if sites[t] == sites[t_prime] {
                return Err(SnakeViolation::Duplicate { t, t_prime });
            }
        }
    }
    for t in 0..sites.len() {
        for t_prime in t + k as usize..sites.len() {
            let distance = (sites[t] ^ sites[t_prime]).count_ones();
            if distance < k {
                return Err(SnakeViolation::Spread { t, t_prime, distance });
            }
        }
    }
    Ok(())
}

/// Checks a vertex sequence; mixed dimensions are an error.
pub fn verify(sites: &[Vertex], k: u32) -> Result<std::result::Result<(), SnakeViolation>> {
    if sites.is_empty() {
        return Ok(Err(SnakeViolation::Empty));
    }
    let dim = sites[0].dim();
    for v in sites {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: v.dim(),
            });
        }
    }
    let words: Vec<u64> = sites.iter().map(|v| v.bits()).collect();
    Ok(verify_words(&words, k))
}

impl SnakePath {
    pub fn new(k: u32, dim: u32, sites: Vec<u64>) -> Result<Self> {
        if k < 1 {
            return Err(Error::Precondition("spread k must be at least 1".into()));
        }
        if dim > crate::hypercube::MAX_DIM {
            return Err(Error::DimensionRange(dim));
        }
        for &w in &sites {
            if dim < 64 && w >> dim != 0 {
                return Err(Error::Snake(format!("site {w:#b} outside dimension {dim}")));
            }
        }
        verify_words(&sites, k).map_err(|v| Error::Snake(v.to_string()))?;
        Ok(SnakePath { k, dim, sites })
    }

    pub fn from_vertices(k: u32, sites: Vec<Vertex>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Snake(SnakeViolation::Empty.to_string()));
        }
        let dim = sites[0].dim();
        for v in &sites {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                });
            }
        }
        SnakePath::new(k, dim, sites.iter().map(|v| v.bits()).collect())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Number of steps T.
    pub fn length(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn sites(&self) -> &[u64] {
        &self.sites
    }

    pub fn site(&self, t: usize) -> Vertex {
        Vertex::new(self.dim, self.sites[t]).expect("site fits dimension")
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let dim = self.dim;
        self.sites
            .iter()
            .map(move |&w| Vertex::new(dim, w).expect("site fits dimension"))
    }

    pub fn xor_translate(&self, mask: Vertex) -> Result<SnakePath> {
        if mask.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: mask.dim(),
            });
        }
        Ok(SnakePath {
            k: self.k,
            dim: self.dim,
            sites: self.sites.iter().map(|w| w ^ mask.bits()).collect(),
        })
    }

    pub fn permute_coords(&self, p: &CoordPermutation) -> Result<SnakePath> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: p.dim(),
            });
        }
        Ok(SnakePath {
            k: self.k,
            dim: self.dim,
            sites: self.sites.iter().map(|&w| p.apply_word(w)).collect(),
        })
    }

    /// XOR-translates by the last site so the path ends at the all-zero
    /// vertex. Distances, and hence the snake property, are preserved.
    pub fn normalize_end_to_zero(&self) -> SnakePath {
        let last = *self.sites.last().expect("nonempty");
        SnakePath {
            k: self.k,
            dim: self.dim,
            sites: self.sites.iter().map(|w| w ^ last).collect(),
        }
    }

    /// For all `|t - t'| <= k` the distance must equal `|t - t'|`.
    /// Requires length at least k.
    pub fn check_local_isometry(&self) -> Result<std::result::Result<(), (usize, usize)>> {
        if self.length() < self.k as usize {
            return Err(Error::Precondition(format!(
                "local isometry check needs length >= k (length {}, k {})",
                self.length(),
                self.k
            )));
        }
        for t in 0..self.sites.len() {
            for t_prime in t..(t + self.k as usize + 1).min(self.sites.len()) {
                let dist = (self.sites[t] ^ self.sites[t_prime]).count_ones();
                if dist as usize != t_prime - t {
                    return Ok(Err((t, t_prime)));
                }
            }
        }
        Ok(Ok(()))
    }

    /// Snake file format: header `k=<int> d=<int>`, then one vertex text per
    /// line in path order.
    pub fn to_file_text(&self) -> String {
        let mut out = format!("k={} d={}\n", self.k, self.dim);
        for v in self.vertices() {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_file_text(text: &str) -> Result<SnakePath> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Snake("missing snake file header".into()))?;
        let mut k = None;
        let mut d = None;
        for field in header.split_whitespace() {
            if let Some(v) = field.strip_prefix("k=") {
                k = Some(v.parse::<u32>().map_err(|e| Error::Snake(format!("bad k: {e}")))?);
            } else if let Some(v) = field.strip_prefix("d=") {
                d = Some(v.parse::<u32>().map_err(|e| Error::Snake(format!("bad d: {e}")))?);
            } else {
                return Err(Error::Snake(format!("unexpected header field {field:?}")));
            }
        }
        let (k, d) = match (k, d) {
            (Some(k), Some(d)) => (k, d),
            _ => return Err(Error::Snake("header must carry k=<int> d=<int>".into())),
        };
        let mut sites = Vec::new();
        for line in lines {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v = Vertex::parse_text(line)?;
            if v.dim() != d {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: v.dim(),
                });
            }
            sites.push(v.bits());
        }
        SnakePath::new(k, d, sites)
    }

    pub fn from_file(path: &Path) -> Result<SnakePath> {
        SnakePath::parse_file_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_text())?;
        Ok(())
    }
}

/// Search mode for [`search_longest`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    Exhaustive,
    /// Plain DFS in the same canonical order; `node_limit` counts extension
    /// attempts.
    Budget { node_limit: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub snake: SnakePath,
    /// True when the whole canonical tree was explored, so the length is
    /// provably maximal.
    pub exhaustive: bool,
    /// Extension attempts made.
    pub nodes: u64,
}

fn exhaustive_guard(k: u32) -> u32 {
    // Defaults chosen so an exhaustive run finishes in seconds.
    match k {
        1 => 4,
        2 => 5,
        _ => 7,
    }
}

struct Dfs {
    d: u32,
    k: u32,
    path: Vec<u64>,
    visited: HashSet<u64>,
    best: Vec<u64>,
    nodes: u64,
    node_limit: Option<u64>,
    aborted: bool,
}

impl Dfs {
    fn spread_ok(&self, w: u64) -> bool {
        let t_new = self.path.len();
        if t_new < self.k as usize {
            return true;
        }
        for j in 0..=t_new - self.k as usize {
            if (self.path[j] ^ w).count_ones() < self.k {
                return false;
            }
        }
        true
    }

    // max_used = number of coordinates already used along the path; the only
    // fresh coordinate allowed is the smallest unused one, which makes the
    // search canonical under coordinate permutation. XOR translation is
    // already fixed by rooting at the all-zero vertex.
    fn extend(&mut self, max_used: u32) {
        if self.path.len() - 1 > self.best.len() - 1 {
            self.best = self.path.clone();
        }
        let v = *self.path.last().expect("nonempty path");
        let mut candidates: Vec<(u64, u32)> = (0..self.d.min(max_used + 1))
            .map(|c| (v ^ (1u64 << c), c))
            .collect();
        // Ascending numeric order makes the first maximum found the
        // lexicographically smallest site sequence.
        candidates.sort_unstable();
        for (w, c) in candidates {
            if self.aborted {
                return;
            }
            if let Some(limit) = self.node_limit {
                if self.nodes >= limit {
                    self.aborted = true;
                    return;
                }
            }
            self.nodes += 1;
            if self.visited.contains(&w) || !self.spread_ok(w) {
                continue;
            }
            self.path.push(w);
            self.visited.insert(w);
            self.extend(if c == max_used { max_used + 1 } else { max_used });
            self.visited.remove(&w);
            self.path.pop();
        }
    }
}

/// Depth-first longest-snake search rooted at the all-zero vertex with
/// coordinate-permutation symmetry breaking: along the path, coordinates must
/// be first used in increasing order.
pub fn search_longest(
    d: Dimension,
    k: u32,
    mode: SearchMode,
    allow_large: bool,
) -> Result<SearchResult> {
    if k < 1 {
        return Err(Error::Precondition("spread k must be at least 1".into()));
    }
    let dd = d.get();
    if mode == SearchMode::Exhaustive && dd > exhaustive_guard(k) && !allow_large {
        return Err(Error::SearchGuard { d: dd, k });
    }
    let mut dfs = Dfs {
        d: dd,
        k,
        path: vec![0],
        visited: [0u64].into_iter().collect(),
        best: vec![0],
        nodes: 0,
        node_limit: match mode {
            SearchMode::Exhaustive => None,
            SearchMode::Budget { node_limit } => Some(node_limit),
        },
        aborted: false,
    };
    dfs.extend(0);
    let snake = SnakePath::new(k, dd, dfs.best.clone())?;
    Ok(SearchResult {
        snake,
        exhaustive: !dfs.aborted,
        nodes: dfs.nodes,
    })
}

/// Reference value `2^d / (d (log2 d)^2)`; the logarithm base is a display
/// convention.
pub fn reference_lower_bound(d: Dimension) -> Result<f64> {
    let dd = d.get();
    if dd < 3 {
        return Err(Error::Precondition(format!(
            "reference lower bound needs d >= 3, got {dd}"
        )));
    }
    let df = dd as f64;
    Ok((2f64).powi(dd as i32) / (df * df.log2().powi(2)))
}
