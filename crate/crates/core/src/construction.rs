//! The slow-percolation witness for the 3-neighbour process: a modified
//! 3-snake with pinned tail sites, the initial configuration built around it
//! (seed, I0, J1, J2, J3), the structural audits and the two trajectory
//! checks that certify its percolation time, plus the two dimension-lifting
//! reductions (doubling into an even dimension and padding for r > 3).

use std::path::PathBuf;

use serde::Serialize;

use crate::dsl::{self, Env};
use crate::engine::{self, InfectionState, Outcome};
use crate::hypercube::{CoordPermutation, Dimension, Vertex, WordSet};
use crate::snake::{self, SearchMode, SnakePath};
use crate::{Error, Result};

/// Derived dimensions for one witness build: `d` odd and at least 15,
/// `d' = d - 3`, `d'' = d - 9`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConstructionParams {
    d: Dimension,
}

impl ConstructionParams {
    pub fn new(d: Dimension) -> Result<Self> {
        let dd = d.get();
        if dd.is_multiple_of(2) {
            return Err(Error::Precondition(format!("d must be odd, got {dd}")));
        }
        if dd < 15 {
            return Err(Error::Precondition(format!("d must be at least 15, got {dd}")));
        }
        Ok(ConstructionParams { d })
    }

    pub fn d(&self) -> Dimension {
        self.d
    }

    pub fn d_prime(&self) -> u32 {
        self.d.get() - 3
    }

    pub fn d_dprime(&self) -> u32 {
        self.d.get() - 9
    }
}

/// The decomposed initial set: seed vertex, the two-neighbours-per-site set
/// I0, the two full subcubes J1, and the small sets J2 and J3, together with
/// the snake and its residue classes.
#[derive(Clone, Debug)]
pub struct ConstructionParts {
    pub params: ConstructionParams,
    /// The modified snake, dimension `d''`.
    pub snake: SnakePath,
    /// `[0]^9 S_0`, dimension `d`.
    pub seed: Vertex,
    pub i0: WordSet,
    pub j1: WordSet,
    pub j2: WordSet,
    pub j3: WordSet,
    /// Snake sites by time residue: class i holds `S_{T-i-3j}`.
    pub residue_classes: [WordSet; 3],
}

impl ConstructionParts {
    /// The full initial set `I = seed ∪ I0 ∪ J1 ∪ J2 ∪ J3`.
    pub fn initial_set(&self) -> WordSet {
        let d = self.params.d().get();
        let mut set = WordSet::from_vertices(d, [self.seed]).expect("seed dimension");
        for part in [&self.i0, &self.j1, &self.j2, &self.j3] {
            set = set.union(part).expect("equal dimensions");
        }
        set
    }

    /// Snake site `S_t` lifted into dimension `d` as `[0]^9 S_t`.
    pub fn lifted_site(&self, t: usize) -> u64 {
        self.snake.sites()[t] << 9
    }
}

/// Result of checking the six pinned-tail conditions on a modified snake.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionCheck {
    pub condition: u8,
    pub description: String,
    pub pass: bool,
}

/// Mechanically checks conditions 1-5 on a candidate modified snake
/// (the tail site patterns and the weight bound). Condition 6 relates the
/// length to the input snake and is checked by [`build_modified_snake`]
/// itself.
pub fn check_modified_conditions(s: &SnakePath) -> Vec<ConditionCheck> {
    let m = s.dim();
    let t_end = s.length();
    let sites = s.sites();
    let mut checks = Vec::new();
    // Tail patterns: S_{T-3} = 10101 0..., S_{T-2} = 101 0..., S_{T-1} = 1 0..., S_T = 0.
    let want: [(u8, &str, u64); 4] = [
        (1, "S_{T-3} = [1,0,1,0,1][0]^(d''-5)", 0b10101),
        (2, "S_{T-2} = [1,0,1][0]^(d''-3)", 0b101),
        (3, "S_{T-1} = [1][0]^(d''-1)", 0b1),
        (4, "S_T = [0]^d''", 0),
    ];
    for (id, desc, bits) in want {
        let offset = 4 - id as usize;
        let pass = t_end >= offset && sites[t_end - offset] == bits;
        checks.push(ConditionCheck {
            condition: id,
            description: desc.to_string(),
            pass,
        });
    }
    let weight_ok = (0..t_end.saturating_sub(3))
        .all(|t| sites[t].count_ones() > 3);
    checks.push(ConditionCheck {
        condition: 5,
        description: format!("weight of S_t exceeds 3 for every t < T-3 (dimension {m})"),
        pass: weight_ok,
    });
    checks
}

/// Builds the modified snake: translate the input to end at the all-zero
/// vertex, permute coordinates so the last two pre-terminal sites sit on
/// coordinates {2} and {2,4}, then prefix every site with a 1-coordinate and
/// append the all-zero terminal. Output dimension is input + 1, output
/// length is input + 1.
pub fn build_modified_snake(s_prime: &SnakePath) -> Result<SnakePath> {
    if s_prime.k() != 3 {
        return Err(Error::Precondition(format!(
            "input must be a 3-snake, got k={}",
            s_prime.k()
        )));
    }
    if s_prime.length() < 2 {
        return Err(Error::Precondition(format!(
            "input snake length must be at least 2, got {}",
            s_prime.length()
        )));
    }
    let m = s_prime.dim();
    if m < 5 {
        return Err(Error::Precondition(format!(
            "input snake dimension must be at least 5, got {m}"
        )));
    }
    let normalized = s_prime.normalize_end_to_zero();
    let t_end = normalized.length();
    let sites = normalized.sites();
    // After normalization the pre-terminal site is a single coordinate and
    // the one before shares it plus one more (local isometry to the end).
    let shared = sites[t_end - 1].trailing_zeros() + 1; // 1-based
    let pair = sites[t_end - 2];
    if pair.count_ones() != 2 || pair & sites[t_end - 1] == 0 {
        return Err(Error::Snake(format!(
            "unexpected tail shape: S'_{{T-1}}={:#b}, S'_{{T-2}}={pair:#b}",
            sites[t_end - 1]
        )));
    }
    let other = (pair & !sites[t_end - 1]).trailing_zeros() + 1; // 1-based
    // Route shared -> 2 and other -> 4 with at most two transpositions.
    let first = CoordPermutation::transposition(m, shared, 2)?;
    let other_now = if other == 2 { shared } else { other };
    let second = CoordPermutation::transposition(m, other_now, 4)?;
    let perm = second.compose(&first)?;
    let permuted = normalized.permute_coords(&perm)?;

    let mut out_sites: Vec<u64> = permuted.sites().iter().map(|&w| (w << 1) | 1).collect();
    out_sites.push(0);
    let out = SnakePath::new(3, m + 1, out_sites)?;

    debug_assert!(check_modified_conditions(&out).iter().all(|c| c.pass));
    debug_assert_eq!(out.length(), s_prime.length() + 1);
    Ok(out)
}

const I0_EXPR: &str = "[0]^3~([0][1])[0]^4 S1CLASS | [0]^5~([0][1])[0]^2 S2CLASS | [0]^7~([0][1]) S3CLASS";
const J1_EXPR: &str = "[1,1][*]^(d-2)";
const J2_EXPR: &str = "~([0][1])[1][0]^(d-3)";
const J3_EXPR: &str = "~([0][1])[0]~([1,1][0,0]^((d-5)/2))";

/// DSL environment for one build: the dimension plus the snake-derived
/// named sets.
pub fn build_env(snake: &SnakePath, params: &ConstructionParams) -> (Env, [WordSet; 3]) {
    let d_dprime = params.d_dprime();
    let t_end = snake.length();
    let mut classes = [
        WordSet::empty(d_dprime),
        WordSet::empty(d_dprime),
        WordSet::empty(d_dprime),
    ];
    for (i, class) in classes.iter_mut().enumerate() {
        let i = i + 1;
        let mut idx = t_end as i64 - i as i64;
        while idx >= 0 {
            class.insert_word(snake.sites()[idx as usize]).expect("site fits");
            idx -= 3;
        }
    }
    let mut env = Env::new();
    env.bind_int("d", params.d().get() as i64);
    env.bind_int("T", t_end as i64);
    env.bind_set("S0", WordSet::from_words(d_dprime, [snake.sites()[0]]).unwrap());
    env.bind_set(
        "S_T1",
        WordSet::from_words(d_dprime, [snake.sites()[t_end - 1]]).unwrap(),
    );
    env.bind_set("S1CLASS", classes[0].clone());
    env.bind_set("S2CLASS", classes[1].clone());
    env.bind_set("S3CLASS", classes[2].clone());
    (env, classes)
}

/// Builds seed, I0, J1, J2, J3 from a snake satisfying the modified-snake
/// conditions in dimension `d - 9`. All parts are produced by the DSL
/// evaluator so the displayed expressions are what actually runs.
pub fn build_initial_config(snake: &SnakePath, params: &ConstructionParams) -> Result<ConstructionParts> {
    let d = params.d().get();
    if snake.dim() != params.d_dprime() {
        return Err(Error::DimensionMismatch {
            left: params.d_dprime(),
            right: snake.dim(),
        });
    }
    if snake.k() != 3 {
        return Err(Error::Precondition(format!(
            "construction snake must have spread 3, got {}",
            snake.k()
        )));
    }
    let failed: Vec<u8> = check_modified_conditions(snake)
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.condition)
        .collect();
    if !failed.is_empty() {
        return Err(Error::Precondition(format!(
            "snake does not satisfy modified-snake conditions {failed:?}"
        )));
    }

    let (env, residue_classes) = build_env(snake, params);
    let i0 = dsl::eval_str(I0_EXPR, &env)?;
    let j1 = dsl::eval_str(J1_EXPR, &env)?;
    let j2 = dsl::eval_str(J2_EXPR, &env)?;
    let j3 = dsl::eval_str(J3_EXPR, &env)?;
    let seed = Vertex::new(d, snake.sites()[0] << 9)?;

    let t_end = snake.length();
    let parts = ConstructionParts {
        params: *params,
        snake: snake.clone(),
        seed,
        i0,
        j1,
        j2,
        j3,
        residue_classes,
    };
    // Cardinality and disjointness invariants of the decomposition.
    let sizes_ok = parts.i0.len() == 2 * t_end
        && parts.j1.len() == 1usize << (d - 2)
        && parts.j2.len() == 2
        && parts.j3.len() == params.d_prime() as usize;
    let seed_set = WordSet::from_vertices(d, [seed]).expect("seed fits");
    let all = [&seed_set, &parts.i0, &parts.j1, &parts.j2, &parts.j3];
    let mut disjoint = true;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            disjoint &= a.is_disjoint(b);
        }
    }
    let mut class_union = WordSet::empty(snake.dim());
    for c in &parts.residue_classes {
        class_union = class_union.union(c)?;
    }
    let expected_union =
        WordSet::from_words(snake.dim(), snake.sites()[..t_end].iter().copied())?;
    if !sizes_ok || !disjoint || class_union != expected_union {
        return Err(Error::Precondition(
            "construction invariants violated (sizes, disjointness, or residue classes)".into(),
        ));
    }
    Ok(parts)
}

/// One audited structural fact about the configuration.
#[derive(Clone, Debug, Serialize)]
pub struct BulletResult {
    pub bullet: u8,
    pub description: String,
    pub pass: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub bullets: Vec<BulletResult>,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.bullets.iter().all(|b| b.pass)
    }
}

fn vertex_text(d: u32, w: u64) -> String {
    Vertex::new(d, w).expect("word fits").to_string()
}

/// Mechanically checks the five structural bullets the trajectory argument
/// rests on, by direct pairwise neighbour scans.
pub fn audit_structure(parts: &ConstructionParts) -> StructureReport {
    let d = parts.params.d().get();
    let mut bullets = Vec::new();

    // (1) I0, J2, J3 pairwise have no common neighbours.
    {
        let named = [("I0", &parts.i0), ("J2", &parts.j2), ("J3", &parts.j3)];
        let mut pass = true;
        let mut counterexample = None;
        'outer: for (i, (name_a, a)) in named.iter().enumerate() {
            for (name_b, b) in &named[i + 1..] {
                let na = a.neighborhood();
                let nb = b.neighborhood();
                for w in na.words() {
                    if nb.contains(w) {
                        pass = false;
                        counterexample = Some(format!(
                            "{} is a common neighbour of {name_a} and {name_b}",
                            vertex_text(d, w)
                        ));
                        break 'outer;
                    }
                }
            }
        }
        bullets.push(BulletResult {
            bullet: 1,
            description: "I0, J2 and J3 pairwise have no common neighbours".into(),
            pass,
            counterexample,
        });
    }

    // (2) The only pairs in J3 at distance <= 2 are ([1,0,0]x, [0,1,0]x).
    {
        let mut pass = true;
        let mut counterexample = None;
        let words: Vec<u64> = parts.j3.words().collect();
        'outer2: for (i, &a) in words.iter().enumerate() {
            for &b in &words[i + 1..] {
                let dist = (a ^ b).count_ones();
                if dist == 0 || dist > 2 {
                    continue;
                }
                // First three coordinates must be 100 vs 010 and the rest equal.
                let (lo_a, lo_b) = (a & 0b111, b & 0b111);
                let swap_form = (lo_a == 0b001 && lo_b == 0b010) || (lo_a == 0b010 && lo_b == 0b001);
                if !(swap_form && (a >> 3) == (b >> 3)) {
                    pass = false;
                    counterexample = Some(format!(
                        "({}, {}) at distance {dist}",
                        vertex_text(d, a),
                        vertex_text(d, b)
                    ));
                    break 'outer2;
                }
            }
        }
        bullets.push(BulletResult {
            bullet: 2,
            description: "pairs in J3 at distance <= 2 all have the form ([1,0,0]x, [0,1,0]x)"
                .into(),
            pass,
            counterexample,
        });
    }

    // (3) Every i1 in I0 has exactly one other i2 in I0 at distance <= 2.
    {
        let mut pass = true;
        let mut counterexample = None;
        let words: Vec<u64> = parts.i0.words().collect();
        for &a in &words {
            let close = words
                .iter()
                .filter(|&&b| b != a && (a ^ b).count_ones() <= 2)
                .count();
            if close != 1 {
                pass = false;
                counterexample = Some(format!(
                    "{} has {close} close partners in I0",
                    vertex_text(d, a)
                ));
                break;
            }
        }
        bullets.push(BulletResult {
            bullet: 3,
            description: "every site of I0 has exactly one other I0 site at distance <= 2".into(),
            pass,
            counterexample,
        });
    }

    // (4) [0]^9 S_t shares neighbours with J3 only at t = T-1,
    // (5) with J2 only at t = T.
    let t_end = parts.snake.length();
    for (bullet, set, name, only_at) in [
        (4u8, &parts.j3, "J3", t_end - 1),
        (5u8, &parts.j2, "J2", t_end),
    ] {
        let nb_set = set.neighborhood();
        let mut pass = true;
        let mut counterexample = None;
        for t in 0..=t_end {
            let site = WordSet::from_words(d, [parts.lifted_site(t)]).expect("site fits");
            let shares = site
                .neighborhood()
                .words()
                .any(|w| nb_set.contains(w));
            if shares != (t == only_at) {
                pass = false;
                counterexample = Some(format!(
                    "t={t}: common neighbour with {name} is {shares}, expected {}",
                    t == only_at
                ));
                break;
            }
        }
        bullets.push(BulletResult {
            bullet,
            description: format!(
                "[0]^9 S_t has common neighbours with {name} only for t = {}",
                if bullet == 4 { "T-1" } else { "T" }
            ),
            pass,
            counterexample,
        });
    }

    StructureReport { bullets }
}

/// Verdict of the round-by-round trajectory check.
#[derive(Clone, Debug, Serialize)]
pub struct Claim1Verdict {
    pub pass: bool,
    pub rounds_checked: u32,
    pub deviation: Option<Claim1Deviation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim1Deviation {
    pub round: u32,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

/// Runs the 3-neighbour process from the full initial set and asserts that
/// for every round `t < T` the infected set is exactly the initial set plus
/// the first `t+1` lifted snake sites: one new site per round, the next
/// snake site, no parasite infections. Full set equality per round.
pub fn verify_claim1(parts: &ConstructionParts, allow_large: bool) -> Result<Claim1Verdict> {
    let d = parts.params.d();
    let initial = parts.initial_set();
    let mut state = InfectionState::init(d, 3, &initial, allow_large)?;
    let t_end = parts.snake.length();
    for t in 1..t_end {
        let newly = state.step();
        let expected = WordSet::from_words(d.get(), [parts.lifted_site(t)])?;
        if newly != expected {
            let missing = expected
                .words()
                .filter(|&w| !newly.contains(w))
                .map(|w| vertex_text(d.get(), w))
                .collect();
            let extra = newly
                .words()
                .filter(|&w| !expected.contains(w))
                .map(|w| vertex_text(d.get(), w))
                .collect();
            return Ok(Claim1Verdict {
                pass: false,
                rounds_checked: t as u32,
                deviation: Some(Claim1Deviation {
                    round: t as u32,
                    missing,
                    extra,
                }),
            });
        }
    }
    Ok(Claim1Verdict {
        pass: true,
        rounds_checked: t_end.saturating_sub(1) as u32,
        deviation: None,
    })
}

/// Runs the 3-neighbour process from `J1 ∪ J2 ∪ J3 ∪ {[0]^9 S_{T-1}}` and
/// reports the outcome; the set must percolate.
pub fn verify_claim2(parts: &ConstructionParts, allow_large: bool) -> Result<Outcome> {
    let d = parts.params.d();
    let t_end = parts.snake.length();
    let mut set = parts.j1.union(&parts.j2)?.union(&parts.j3)?;
    set.insert_word(parts.lifted_site(t_end - 1))?;
    engine::run(d, 3, &set, allow_large)
}

/// Where the construction gets its snake from.
#[derive(Clone, Debug)]
pub enum SnakeSource {
    File(PathBuf),
    Search(SearchMode),
}

#[derive(Clone, Debug)]
pub struct WitnessResult {
    pub parts: ConstructionParts,
    pub outcome: Outcome,
    /// Length of the modified snake (a lower-bound target for the time).
    pub target_time: u32,
    /// Whether the snake used came from an exhaustive search.
    pub snake_exhaustive: bool,
}

impl WitnessResult {
    /// True when the run percolates no faster than the snake length, which
    /// is what the construction certifies.
    pub fn meets_bound(&self) -> bool {
        self.outcome.percolated && self.outcome.total_time >= self.target_time
    }
}

/// End-to-end pipeline: obtain a 3-snake in dimension `d - 10`, build the
/// modified snake and the initial configuration, and run the process.
pub fn lower_bound_witness(
    d: Dimension,
    source: &SnakeSource,
    allow_large: bool,
) -> Result<WitnessResult> {
    let params = ConstructionParams::new(d)?;
    let (raw, snake_exhaustive) = match source {
        SnakeSource::File(path) => (SnakePath::from_file(path)?, false),
        SnakeSource::Search(mode) => {
            let base = Dimension::new(d.get() - 10)?;
            let found = snake::search_longest(base, 3, *mode, allow_large)?;
            (found.snake, found.exhaustive)
        }
    };
    if raw.dim() != d.get() - 10 {
        return Err(Error::DimensionMismatch {
            left: d.get() - 10,
            right: raw.dim(),
        });
    }
    let modified = build_modified_snake(&raw)?;
    let parts = build_initial_config(&modified, &params)?;
    let outcome = engine::run(d, 3, &parts.initial_set(), allow_large)?;
    Ok(WitnessResult {
        target_time: parts.snake.length() as u32,
        parts,
        outcome,
        snake_exhaustive,
    })
}

/// Doubling into one higher dimension: `[*]A`, both extensions
/// of every site along a new first coordinate. Percolation time is
/// preserved exactly.
pub fn double_config(a: &WordSet) -> Result<WordSet> {
    let dim = a.dim() + 1;
    if dim > crate::hypercube::MAX_DIM {
        return Err(Error::DimensionRange(dim));
    }
    WordSet::from_words(
        dim,
        a.words().flat_map(|w| [w << 1, (w << 1) | 1]),
    )
}

/// Embeds a 3-neighbour configuration of dimension `m` into dimension
/// `m + r - 3` by fixing the new trailing coordinates to 1 and infecting the
/// entire complement of that subcube. Under r-neighbour dynamics the subcube
/// then follows the 3-neighbour process on the original configuration.
pub fn pad_for_r(cfg: &WordSet, r: u32) -> Result<WordSet> {
    if r < 3 {
        return Err(Error::Precondition(format!("padding needs r >= 3, got {r}")));
    }
    let m = cfg.dim();
    let extra = r - 3;
    let dim = m + extra;
    if dim > crate::hypercube::MAX_DIM {
        return Err(Error::DimensionRange(dim));
    }
    if extra == 0 {
        return Ok(cfg.clone());
    }
    if dim > crate::hypercube::DENSE_CAP {
        return Err(Error::DenseCap {
            d: dim,
            cap: crate::hypercube::DENSE_CAP,
        });
    }
    let ones = ((1u64 << extra) - 1) << m;
    let mut out = WordSet::empty(dim);
    for w in 0..1u64 << dim {
        if w & ones != ones {
            out.insert_word(w)?;
        }
    }
    for w in cfg.words() {
        out.insert_word(w | ones)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run;

    fn v(s: &str) -> Vertex {
        Vertex::parse_text(s).unwrap()
    }

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn spec_input_snake() -> SnakePath {
        SnakePath::from_vertices(3, vec![v("01110"), v("00110"), v("00100"), v("00000")]).unwrap()
    }

    #[test]
    fn modified_snake_worked_example() {
        let out = build_modified_snake(&spec_input_snake()).unwrap();
        let texts: Vec<String> = out.vertices().map(|x| x.to_string()).collect();
        assert_eq!(texts, ["101110", "101010", "101000", "100000", "000000"]);
        assert!(check_modified_conditions(&out).iter().all(|c| c.pass));
        assert_eq!(out.length(), spec_input_snake().length() + 1);
    }

    #[test]
    fn modified_snake_rejects_bad_input() {
        let not_snake = SnakePath::from_vertices(2, vec![v("00000"), v("00001")]).unwrap();
        assert!(build_modified_snake(&not_snake).is_err()); // k != 3
        let short = SnakePath::from_vertices(3, vec![v("00000"), v("00001")]).unwrap();
        assert!(build_modified_snake(&short).is_err()); // length < 2
    }

    #[test]
    fn modified_snake_from_search() {
        for d in 5..=6u32 {
            let found =
                snake::search_longest(dim(d), 3, SearchMode::Exhaustive, false).unwrap();
            let out = build_modified_snake(&found.snake).unwrap();
            assert_eq!(out.dim(), d + 1);
            assert_eq!(out.length(), found.snake.length() + 1);
            assert_eq!(*out.sites().last().unwrap(), 0);
            assert!(check_modified_conditions(&out).iter().all(|c| c.pass));
        }
    }

    fn canonical_parts() -> ConstructionParts {
        let found = snake::search_longest(dim(5), 3, SearchMode::Exhaustive, false).unwrap();
        let modified = build_modified_snake(&found.snake).unwrap();
        let params = ConstructionParams::new(dim(15)).unwrap();
        build_initial_config(&modified, &params).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ConstructionParams::new(dim(14)).is_err());
        assert!(ConstructionParams::new(dim(13)).is_err());
        let p = ConstructionParams::new(dim(15)).unwrap();
        assert_eq!(p.d_prime(), 12);
        assert_eq!(p.d_dprime(), 6);
    }

    #[test]
    fn part_sizes_at_d15() {
        let parts = canonical_parts();
        let t_end = parts.snake.length();
        assert_eq!(parts.j1.len(), 1 << 13);
        assert_eq!(parts.j2.len(), 2);
        assert_eq!(parts.j3.len(), 12);
        assert_eq!(parts.i0.len(), 2 * t_end);
        // The end of the snake has no neighbours in I0.
        let end = WordSet::from_words(15, [parts.lifted_site(t_end)]).unwrap();
        assert!(end.neighborhood().is_disjoint(&parts.i0));
    }

    #[test]
    fn audit_passes_on_canonical_build() {
        let parts = canonical_parts();
        let report = audit_structure(&parts);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn audit_catches_injected_vertex() {
        let mut parts = canonical_parts();
        // A second site in the same three-coordinate slice at distance 2
        // breaks the J3 pair-shape bullet.
        let x = parts.j3.words().next().unwrap();
        parts.j3.insert_word(x ^ (1 << 10) ^ (1 << 11)).unwrap();
        let report = audit_structure(&parts);
        let bullet2 = &report.bullets[1];
        assert!(!bullet2.pass);
        assert!(bullet2.counterexample.is_some());
    }

    #[test]
    fn claim1_holds_and_detects_tampering() {
        let parts = canonical_parts();
        let verdict = verify_claim1(&parts, false).unwrap();
        assert!(verdict.pass, "{verdict:?}");

        // Deleting an I0 neighbour of S_1 leaves it with only two infected
        // neighbours at round 1, so the snake stalls.
        let mut tampered = parts.clone();
        let s1 = tampered.lifted_site(1);
        let drop = tampered
            .i0
            .words()
            .find(|&w| (w ^ s1).count_ones() == 1)
            .unwrap();
        tampered.i0 =
            WordSet::from_words(15, tampered.i0.words().filter(|&w| w != drop)).unwrap();
        let verdict = verify_claim1(&tampered, false).unwrap();
        assert!(!verdict.pass);
        assert!(verdict.deviation.is_some());

        // Giving the common neighbour of an I0 pair a third infected
        // neighbour produces a parasite infection at round 1.
        let mut tampered = parts.clone();
        let mid = tampered.lifted_site(tampered.snake.length() / 2);
        let pair: Vec<u64> = tampered
            .i0
            .words()
            .filter(|&w| (w ^ mid).count_ones() == 1)
            .collect();
        assert_eq!(pair.len(), 2);
        let u = mid ^ (pair[0] ^ mid) ^ (pair[1] ^ mid);
        tampered.i0.insert_word(u ^ 1).unwrap();
        let verdict = verify_claim1(&tampered, false).unwrap();
        assert!(!verdict.pass);
    }

    #[test]
    fn claim2_percolates() {
        let parts = canonical_parts();
        let out = verify_claim2(&parts, false).unwrap();
        assert!(out.percolated);

        // Informative regression observation: without J2 the same set does
        // not percolate.
        let t_end = parts.snake.length();
        let mut set = parts.j1.union(&parts.j3).unwrap();
        set.insert_word(parts.lifted_site(t_end - 1)).unwrap();
        let out = run(dim(15), 3, &set, false).unwrap();
        assert!(!out.percolated);
    }

    #[test]
    fn witness_pipeline_at_d15() {
        let res = lower_bound_witness(
            dim(15),
            &SnakeSource::Search(SearchMode::Exhaustive),
            false,
        )
        .unwrap();
        assert!(res.snake_exhaustive);
        assert!(res.meets_bound(), "time {} < {}", res.outcome.total_time, res.target_time);
        assert!(lower_bound_witness(
            dim(13),
            &SnakeSource::Search(SearchMode::Exhaustive),
            false
        )
        .is_err());
    }

    #[test]
    fn double_examples() {
        let a = WordSet::from_vertices(2, [v("00")]).unwrap();
        let doubled = double_config(&a).unwrap();
        let texts: Vec<String> = doubled.vertices().map(|x| x.to_string()).collect();
        assert_eq!(texts, ["000", "100"]);
        assert!(double_config(&WordSet::empty(4)).unwrap().is_empty());
    }

    #[test]
    fn double_preserves_time_on_random_sets() {
        use rand::prelude::*;
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 20 {
            let initial =
                WordSet::from_words(6, (0..64u64).filter(|_| rng.gen_bool(0.5))).unwrap();
            let base = run(dim(6), 3, &initial, false).unwrap();
            if !base.percolated {
                continue;
            }
            let doubled = double_config(&initial).unwrap();
            let lifted = run(dim(7), 3, &doubled, false).unwrap();
            assert!(lifted.percolated);
            assert_eq!(lifted.total_time, base.total_time);
            // Per-vertex equality in both halves, every round.
            for w in 0..64u64 {
                assert_eq!(base.time_of(w), lifted.time_of(w << 1));
                assert_eq!(base.time_of(w), lifted.time_of((w << 1) | 1));
            }
            checked += 1;
        }
    }

    #[test]
    fn pad_examples_and_time_preservation() {
        use rand::prelude::*;
        let cfg = WordSet::from_words(4, [0b0011]).unwrap();
        assert_eq!(pad_for_r(&cfg, 3).unwrap(), cfg);
        let padded = pad_for_r(&cfg, 4).unwrap();
        assert_eq!(padded.dim(), 5);
        assert_eq!(padded.len(), 16 + 1);

        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 10 {
            let initial =
                WordSet::from_words(5, (0..32u64).filter(|_| rng.gen_bool(0.55))).unwrap();
            let base = run(dim(5), 3, &initial, false).unwrap();
            if !base.percolated {
                continue;
            }
            for r in [4u32, 5] {
                let padded = pad_for_r(&initial, r).unwrap();
                let out = run(dim(5 + r - 3), r, &padded, false).unwrap();
                assert!(out.percolated);
                assert_eq!(out.total_time, base.total_time, "r={r}");
            }
            checked += 1;
        }
    }
}
