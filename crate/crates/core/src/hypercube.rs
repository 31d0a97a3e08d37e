//! Vertices of `{0,1}^d`, Hamming geometry, and the hypercube automorphisms
//! used throughout the crate (coordinate permutation and XOR translation).
//!
//! Bit order convention, fixed once for the whole crate: coordinate 1 (the
//! leftmost character of the textual form) is bit 0 of the internal word.
//! All file formats and reports use the same convention.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::{Error, Result};

/// Largest dimension supported for pure vertex operations.
pub const MAX_DIM: u32 = 63;
/// Largest dimension for which a full `2^d` state table may be allocated
/// without an explicit override.
pub const DENSE_CAP: u32 = 28;

/// A validated hypercube dimension, `1..=63`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
#[serde(transparent)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        if (1..=MAX_DIM).contains(&d) {
            Ok(Dimension(d))
        } else {
            Err(Error::DimensionRange(d))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of vertices, `2^d`.
    pub fn vertex_count(self) -> u64 {
        1u64 << self.0
    }

    /// Fails fast before any `2^d` table is allocated, unless overridden.
    pub fn check_dense(self, allow_large: bool) -> Result<()> {
        if self.0 > DENSE_CAP && !allow_large {
            Err(Error::DenseCap {
                d: self.0,
                cap: DENSE_CAP,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One site of the hypercube: a `dim`-bit word.
///
/// Dimension 0 (the empty word) is permitted so that zeroth powers in the
/// subcube DSL are lawful; the [`Dimension`] type itself starts at 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex {
    dim: u32,
    bits: u64,
}

impl Vertex {
    pub fn new(dim: u32, bits: u64) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionRange(dim));
        }
        if dim < 64 && bits >> dim != 0 {
            return Err(Error::VertexText {
                text: format!("{bits:#b}"),
                reason: format!("bits above position {} set", dim.saturating_sub(1)),
            });
        }
        Ok(Vertex { dim, bits })
    }

    pub fn zero(dim: u32) -> Self {
        Vertex { dim, bits: 0 }
    }

    pub fn dim(self) -> u32 {
        self.dim
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Number of 1-coordinates.
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    /// Hamming distance: the number of coordinates where the two words differ.
    pub fn distance(self, other: Vertex) -> Result<u32> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok((self.bits ^ other.bits).count_ones())
    }

    /// The `d` vertices at distance 1, in increasing coordinate order.
    pub fn neighbors(self) -> Vec<Vertex> {
        (0..self.dim)
            .map(|i| Vertex {
                dim: self.dim,
                bits: self.bits ^ (1u64 << i),
            })
            .collect()
    }

    pub fn xor(self, mask: Vertex) -> Result<Vertex> {
        if self.dim != mask.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: mask.dim,
            });
        }
        Ok(Vertex {
            dim: self.dim,
            bits: self.bits ^ mask.bits,
        })
    }

    /// Parses the textual form: exactly `d` characters over `{0,1}`,
    /// leftmost character = coordinate 1.
    pub fn parse_text(s: &str) -> Result<Vertex> {
        if s.is_empty() {
            return Err(Error::VertexText {
                text: s.to_string(),
                reason: "empty".into(),
            });
        }
        if s.len() as u32 > MAX_DIM {
            return Err(Error::DimensionRange(s.len() as u32));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1u64 << i,
                '0' => {}
                other => {
                    return Err(Error::VertexText {
                        text: s.to_string(),
                        reason: format!("character {other:?} at position {}", i + 1),
                    })
                }
            }
        }
        Ok(Vertex {
            dim: s.len() as u32,
            bits,
        })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "{}", (self.bits >> i) & 1)?;
        }
        Ok(())
    }
}

/// A bijection on the coordinate set `{1..d}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordPermutation {
    // map[i] = p(i+1) - 1, i.e. 0-based image of 0-based coordinate i.
    map: Vec<u32>,
}

impl CoordPermutation {
    /// Builds from a 1-based mapping: `mapping[i]` is the image of
    /// coordinate `i+1`.
    pub fn new(mapping: Vec<u32>) -> Result<Self> {
        let d = mapping.len() as u32;
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m < 1 || m > d || seen[(m - 1) as usize] {
                return Err(Error::Precondition(format!(
                    "mapping is not a bijection on 1..={d}"
                )));
            }
            seen[(m - 1) as usize] = true;
        }
        Ok(CoordPermutation {
            map: mapping.into_iter().map(|m| m - 1).collect(),
        })
    }

    pub fn identity(d: u32) -> Self {
        CoordPermutation {
            map: (0..d).collect(),
        }
    }

    /// Swaps coordinates `a` and `b` (1-based), fixing everything else.
    pub fn transposition(d: u32, a: u32, b: u32) -> Result<Self> {
        if a < 1 || a > d || b < 1 || b > d {
            return Err(Error::Precondition(format!(
                "transposition ({a} {b}) outside 1..={d}"
            )));
        }
        let mut map: Vec<u32> = (0..d).collect();
        map.swap((a - 1) as usize, (b - 1) as usize);
        Ok(CoordPermutation { map })
    }

    /// `self` after `other`: applies `other` first.
    pub fn compose(&self, other: &CoordPermutation) -> Result<CoordPermutation> {
        if self.map.len() != other.map.len() {
            return Err(Error::DimensionMismatch {
                left: self.map.len() as u32,
                right: other.map.len() as u32,
            });
        }
        Ok(CoordPermutation {
            map: other.map.iter().map(|&m| self.map[m as usize]).collect(),
        })
    }

    pub fn dim(&self) -> u32 {
        self.map.len() as u32
    }

    /// Output coordinate `p(i)` receives input coordinate `i`.
    pub fn apply_word(&self, w: u64) -> u64 {
        let mut out = 0u64;
        for (i, &m) in self.map.iter().enumerate() {
            out |= ((w >> i) & 1) << m;
        }
        out
    }
}

/// A finite set of equal-dimension binary words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordSet {
    dim: u32,
    words: BTreeSet<u64>,
}

impl WordSet {
    pub fn empty(dim: u32) -> Self {
        WordSet {
            dim,
            words: BTreeSet::new(),
        }
    }

    /// The dimension-0 singleton holding the empty word.
    pub fn empty_word_singleton() -> Self {
        WordSet {
            dim: 0,
            words: [0u64].into_iter().collect(),
        }
    }

    pub fn from_words(dim: u32, words: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = WordSet::empty(dim);
        for w in words {
            set.insert_word(w)?;
        }
        Ok(set)
    }

    pub fn from_vertices(dim: u32, vs: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut set = WordSet::empty(dim);
        for v in vs {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                });
            }
            set.words.insert(v.bits());
        }
        Ok(set)
    }

    /// The full hypercube `[*]^d`. Caller is responsible for keeping `dim`
    /// small enough to enumerate.
    pub fn full(dim: u32) -> Result<Self> {
        if dim > DENSE_CAP {
            return Err(Error::DenseCap { d: dim, cap: DENSE_CAP });
        }
        Ok(WordSet {
            dim,
            words: (0..1u64 << dim).collect(),
        })
    }

    pub fn insert_word(&mut self, w: u64) -> Result<bool> {
        if self.dim < 64 && w >> self.dim != 0 {
            return Err(Error::VertexText {
                text: format!("{w:#b}"),
                reason: format!("word does not fit in dimension {}", self.dim),
            });
        }
        Ok(self.words.insert(w))
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: u64) -> bool {
        self.words.contains(&w)
    }

    /// Words in ascending numeric order.
    pub fn words(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let dim = self.dim;
        self.words.iter().map(move |&w| Vertex { dim, bits: w })
    }

    pub fn union(&self, other: &WordSet) -> Result<WordSet> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(WordSet {
            dim: self.dim,
            words: self.words.union(&other.words).copied().collect(),
        })
    }

    pub fn is_disjoint(&self, other: &WordSet) -> bool {
        self.words.is_disjoint(&other.words)
    }

    /// Elementwise concatenation (Cartesian product); `other`'s coordinates
    /// follow this set's.
    pub fn concat(&self, other: &WordSet) -> Result<WordSet> {
        let dim = self.dim + other.dim;
        if dim > MAX_DIM {
            return Err(Error::DimensionRange(dim));
        }
        let mut words = BTreeSet::new();
        for a in &self.words {
            for b in &other.words {
                words.insert(a | (b << self.dim));
            }
        }
        Ok(WordSet { dim, words })
    }

    pub fn xor_translate(&self, mask: Vertex) -> Result<WordSet> {
        if mask.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: mask.dim(),
            });
        }
        Ok(WordSet {
            dim: self.dim,
            words: self.words.iter().map(|w| w ^ mask.bits()).collect(),
        })
    }

    pub fn permute_coords(&self, p: &CoordPermutation) -> Result<WordSet> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: p.dim(),
            });
        }
        Ok(WordSet {
            dim: self.dim,
            words: self.words.iter().map(|&w| p.apply_word(w)).collect(),
        })
    }

    /// All vertices at distance exactly 1 from some element.
    pub fn neighborhood(&self) -> WordSet {
        let mut words = BTreeSet::new();
        for &w in &self.words {
            for i in 0..self.dim {
                words.insert(w ^ (1u64 << i));
            }
        }
        WordSet {
            dim: self.dim,
            words,
        }
    }

    /// Parses the vertex-set text format: one vertex per line, `#` starts a
    /// comment, blank lines ignored. The dimension is inferred from the first
    /// vertex unless given.
    pub fn parse_lines(text: &str, expected_dim: Option<u32>) -> Result<WordSet> {
        let mut dim = expected_dim;
        let mut words = BTreeSet::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v = Vertex::parse_text(line)?;
            match dim {
                None => dim = Some(v.dim()),
                Some(d) if d != v.dim() => {
                    return Err(Error::DimensionMismatch {
                        left: d,
                        right: v.dim(),
                    })
                }
                _ => {}
            }
            words.insert(v.bits());
        }
        let dim = dim.ok_or_else(|| {
            Error::Precondition("empty vertex-set file and no dimension given".into())
        })?;
        Ok(WordSet { dim, words })
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for v in self.vertices() {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_file(path: &Path, expected_dim: Option<u32>) -> Result<WordSet> {
        let text = std::fs::read_to_string(path)?;
        WordSet::parse_lines(&text, expected_dim)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_lines())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_text(s).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(v("000").distance(v("111")).unwrap(), 3);
        assert_eq!(v("10100").distance(v("10100")).unwrap(), 0);
        assert_eq!(v("10100").distance(v("00110")).unwrap(), 2);
        assert!(v("00").distance(v("000")).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(v("00000").weight(), 0);
        assert_eq!(v("11111").weight(), 5);
        assert_eq!(v("101110").weight(), 4);
    }

    #[test]
    fn neighbors_in_coordinate_order() {
        let ns: Vec<String> = v("00").neighbors().iter().map(|n| n.to_string()).collect();
        assert_eq!(ns, ["10", "01"]);
        let ns: Vec<String> = v("0").neighbors().iter().map(|n| n.to_string()).collect();
        assert_eq!(ns, ["1"]);
        let ns: Vec<String> = v("101").neighbors().iter().map(|n| n.to_string()).collect();
        assert_eq!(ns, ["001", "111", "100"]);
    }

    #[test]
    fn text_roundtrip_and_bit_order() {
        // Leftmost character is coordinate 1, which is bit 0 internally.
        assert_eq!(v("10100").bits(), 0b00101);
        assert_eq!(v("10100").to_string(), "10100");
        assert!(Vertex::parse_text("0120").is_err());
        assert!(Vertex::parse_text("").is_err());
    }

    #[test]
    fn xor_translate_examples() {
        let s = WordSet::from_vertices(3, [v("000"), v("001")]).unwrap();
        let id = s.xor_translate(v("000")).unwrap();
        assert_eq!(id, s);
        let t = s.xor_translate(v("001")).unwrap();
        assert_eq!(t, s); // {000,001} is closed under flipping coordinate 3
        assert!(s.xor_translate(v("00")).is_err());
    }

    #[test]
    fn permute_coords_examples() {
        let s = WordSet::from_vertices(5, [v("00110")]).unwrap();
        let p = CoordPermutation::transposition(5, 2, 3).unwrap();
        let out = s.permute_coords(&p).unwrap();
        assert_eq!(out.vertices().next().unwrap().to_string(), "01010");

        let id = CoordPermutation::identity(5);
        assert_eq!(s.permute_coords(&id).unwrap(), s);

        assert!(CoordPermutation::new(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn vertex_set_file_format() {
        let text = "# comment\n000\n101 # trailing\n\n011\n";
        let set = WordSet::parse_lines(text, None).unwrap();
        assert_eq!(set.len(), 3);
        assert!(set.contains(v("101").bits()));
        let roundtrip = WordSet::parse_lines(&set.to_lines(), Some(3)).unwrap();
        assert_eq!(roundtrip, set);
    }

    #[test]
    fn dimension_caps() {
        assert!(Dimension::new(0).is_err());
        assert!(Dimension::new(64).is_err());
        let d = Dimension::new(29).unwrap();
        assert!(d.check_dense(false).is_err());
        assert!(d.check_dense(true).is_ok());
    }
}
