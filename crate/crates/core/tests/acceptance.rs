//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use rand::SeedableRng;

use percube::construction::{
    self, audit_structure, build_modified_snake, check_modified_conditions, double_config,
    pad_for_r, SnakeSource,
};
use percube::dsl::{self, Env};
use percube::engine::{self, early_neighbour_violations};
use percube::extremal::{self, random_initial_set};
use percube::hypercube::{Dimension, Vertex, WordSet};
use percube::snake::{self, SearchMode};

fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

fn report(criterion: u32, name: &str, pass: bool) {
    println!(
        "criterion {criterion} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed");
}

fn set_of(texts: &[&str]) -> WordSet {
    let d = texts[0].len() as u32;
    WordSet::from_vertices(d, texts.iter().map(|t| Vertex::parse_text(t).unwrap())).unwrap()
}

#[test]
fn criterion_1_dsl_golden_examples() {
    let start = Instant::now();
    let env = Env::new();
    let a = dsl::eval_str("[1,0,1][0]^2", &env).unwrap() == set_of(&["10100"]);
    let b = dsl::eval_str("[0]~([0]^2[1,0])[*]", &env).unwrap()
        == set_of(&["000100", "000101", "001000", "001001", "010000", "010001"]);
    let c = dsl::eval_str("~([1]^2[0]^2)", &env).unwrap().len() == 6
        && dsl::eval_str("~([1,1][0,0])", &env).unwrap().len() == 2
        && dsl::eval_str("~([1,0]^2)", &env).unwrap().len() == 1;
    let fast = start.elapsed().as_secs_f64() < 1.0;
    report(1, "DSL golden examples, exact, < 1 s", a && b && c && fast);
}

#[test]
fn criterion_2_brute_force_oracle_r2() {
    let start = Instant::now();
    let mut pass = true;
    for (d, expected) in [(2u32, 1u32), (3, 3), (4, 5)] {
        let res = extremal::brute_force_max_time(dim(d), 2, false).unwrap();
        pass &= res.exhaustive && res.max_time == expected && expected == (d * d) / 3;
        // The witness must reproduce the value when rerun.
        let rerun = engine::run(dim(d), 2, &res.witness, false).unwrap();
        pass &= rerun.percolated && rerun.total_time == res.max_time;
    }
    pass &= start.elapsed().as_secs() < 300;
    report(2, "brute-force M_2(2..4) = floor(d^2/3)", pass);
}

#[test]
fn criterion_3_witness_pipeline_at_d15() {
    let start = Instant::now();
    let s5 = snake::search_longest(dim(5), 3, SearchMode::Exhaustive, false).unwrap();
    assert!(s5.exhaustive);
    let res = construction::lower_bound_witness(
        dim(15),
        &SnakeSource::Search(SearchMode::Exhaustive),
        false,
    )
    .unwrap();
    let audit = audit_structure(&res.parts);
    let claim1 = construction::verify_claim1(&res.parts, false).unwrap();
    let claim2 = construction::verify_claim2(&res.parts, false).unwrap();
    let time_ok = res.outcome.percolated
        && res.outcome.total_time > s5.snake.length() as u32;
    let fast = start.elapsed().as_secs() < 60;
    report(
        3,
        "d=15 witness: audits, claim 1 every round, claim 2, time >= s(5)+1, < 1 min",
        audit.all_pass() && claim1.pass && claim2.percolated && time_ok && fast,
    );
}

#[test]
fn criterion_4_modified_snake_conditions() {
    let mut pass = true;
    for d in [5u32, 6] {
        let found = snake::search_longest(dim(d), 3, SearchMode::Exhaustive, false).unwrap();
        assert!(found.exhaustive);
        let out = build_modified_snake(&found.snake).unwrap();
        pass &= check_modified_conditions(&out).iter().all(|c| c.pass);
        // Condition 6, relative form: output length is input length + 1.
        pass &= out.length() == found.snake.length() + 1;
    }
    report(4, "modified-snake conditions for exhaustive d=5, d=6 inputs", pass);
}

#[test]
fn criterion_5_upper_bound() {
    let mut pass = true;
    for (d, r) in [(3u32, 3u32), (4, 3), (4, 4)] {
        let res = extremal::brute_force_max_time(dim(d), r, false).unwrap();
        pass &= extremal::check_upper_bound(dim(d), r, res.max_time as u64).unwrap();
    }
    let witness = construction::lower_bound_witness(
        dim(15),
        &SnakeSource::Search(SearchMode::Exhaustive),
        false,
    )
    .unwrap();
    pass &= extremal::check_upper_bound(dim(15), 3, witness.outcome.total_time as u64).unwrap();
    report(5, "exhaustive M_r and d=15 witness within (4r+2)2^d/d", pass);
}

#[test]
fn criterion_6_early_neighbour_invariant() {
    let p_for = |r: u32| match r {
        2 => 0.10,
        3 => 0.45,
        _ => 0.65,
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6e65_6967);
    let mut collected = 0u32;
    let mut attempts = 0u32;
    let mut violations = 0usize;
    'outer: loop {
        for d in 6..=12u32 {
            for r in [2u32, 3, 4] {
                if collected >= 200 {
                    break 'outer;
                }
                attempts += 1;
                assert!(attempts < 5000, "could not collect 200 percolating runs");
                let initial = random_initial_set(dim(d), p_for(r), &mut rng);
                let out = engine::run(dim(d), r, &initial, false).unwrap();
                if !out.percolated {
                    continue;
                }
                violations += early_neighbour_violations(&out).len();
                collected += 1;
            }
        }
    }
    report(
        6,
        "early-neighbour bound on 200 random percolating runs",
        collected == 200 && violations == 0,
    );
}

#[test]
fn criterion_7_reductions_preserve_time() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6475_706c);
    let mut mismatches = 0usize;
    let mut collected = 0u32;
    while collected < 200 {
        let initial = random_initial_set(dim(6), 0.5, &mut rng);
        let base = engine::run(dim(6), 3, &initial, false).unwrap();
        if !base.percolated {
            continue;
        }
        let doubled = double_config(&initial).unwrap();
        let lifted = engine::run(dim(7), 3, &doubled, false).unwrap();
        if !lifted.percolated || lifted.total_time != base.total_time {
            mismatches += 1;
        }
        collected += 1;
    }

    let mut pad_checked = 0u32;
    while pad_checked < 50 {
        let initial = random_initial_set(dim(5), 0.55, &mut rng);
        let base = engine::run(dim(5), 3, &initial, false).unwrap();
        if !base.percolated {
            continue;
        }
        for r in [4u32, 5] {
            let padded = pad_for_r(&initial, r).unwrap();
            let out = engine::run(dim(5 + r - 3), r, &padded, false).unwrap();
            if !out.percolated || out.total_time != base.total_time {
                mismatches += 1;
            }
        }
        pad_checked += 1;
    }
    report(
        7,
        "doubling (200 runs) and r=4,5 padding (50 runs) preserve time exactly",
        mismatches == 0,
    );
}

// Independent oracle: enumerate every path from every start vertex with
// direct pairwise distance checks, no symmetry breaking, no pruning order
// shared with the search.
fn oracle_longest(d: u32, k: u32) -> usize {
    fn extend(d: u32, k: u32, path: &mut Vec<u64>, best: &mut usize) {
        *best = (*best).max(path.len() - 1);
        let v = *path.last().unwrap();
        for c in 0..d {
            let w = v ^ (1u64 << c);
            if path.contains(&w) {
                continue;
            }
            let ok = (0..path.len()).all(|j| {
                let gap = path.len() - j;
                gap < k as usize || (path[j] ^ w).count_ones() >= k
            });
            if ok {
                path.push(w);
                extend(d, k, path, best);
                path.pop();
            }
        }
    }
    let mut best = 0;
    for start in 0..1u64 << d {
        extend(d, k, &mut vec![start], &mut best);
    }
    best
}

#[test]
fn criterion_8_snake_search_properties() {
    let mut pass = true;
    let mut prev = 0usize;
    for d in 1..=6u32 {
        let res = snake::search_longest(dim(d), 3, SearchMode::Exhaustive, false).unwrap();
        pass &= res.exhaustive;
        pass &= snake::verify_words(res.snake.sites(), 3).is_ok();
        if res.snake.length() >= 3 {
            pass &= res.snake.check_local_isometry().unwrap().is_ok();
        }
        pass &= res.snake.length() >= prev;
        prev = res.snake.length();
    }
    // Frozen oracle values at d=3: s(3)=3 for k=3 and length 4 for k=2.
    pass &= oracle_longest(3, 3) == 3;
    pass &= snake::search_longest(dim(3), 3, SearchMode::Exhaustive, false)
        .unwrap()
        .snake
        .length()
        == 3;
    pass &= oracle_longest(3, 2) == 4;
    pass &= snake::search_longest(dim(3), 2, SearchMode::Exhaustive, false)
        .unwrap()
        .snake
        .length()
        == 4;
    report(8, "snake search: verified, isometric, oracle-matched, monotone", pass);
}
