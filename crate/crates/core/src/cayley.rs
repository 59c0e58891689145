//! Brute-force Cayley graph search. Group elements are identified by the
//! images of the six test curves, so two words name the same element iff
//! their keys agree. New elements are produced by left multiplication,
//! which only needs the images of the current element.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::curve::test_family;
use crate::dynnikov::{self as dk, Dyn};
use crate::words::{length_lower_bound, Gen, Word};

pub const KEY_LEN: usize = 24;
pub type Key = [i32; KEY_LEN];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("node budget of {budget} exceeded at radius {radius}; partial results are unusable")]
    MemoryBudgetExceeded { budget: usize, radius: u32 },
    #[error("coordinates left the 32-bit key range")]
    KeyOverflow,
}

/// A generator letter `g^{+-1}` with its half-twist spelling (rightmost
/// acts first).
#[derive(Clone, Debug)]
pub struct Letter {
    pub gen: Gen,
    pub sign: i8,
    pub h: i64,
    braid: Vec<i8>,
}

impl Letter {
    pub fn word(&self) -> Word {
        Word::letter(self.gen, self.sign as i64)
    }
}

fn twist_letters(j: u8, e: i64) -> Vec<i8> {
    let w = dk::twist_braid(j);
    let one: Vec<i8> = if e > 0 { w.iter().map(|&g| g as i8).collect() } else { w.iter().rev().map(|&g| -(g as i8)).collect() };
    one.repeat(e.unsigned_abs() as usize)
}

/// The 30 letters in a fixed order: each generator of [`Gen::all`] followed
/// by its inverse.
pub fn letters(n: u32) -> Vec<Letter> {
    let mut out = Vec::new();
    for g in Gen::all() {
        for sign in [1i8, -1] {
            let runs: Vec<(u8, i64)> = match g {
                Gen::Twist(i) => vec![(i, sign as i64)],
                Gen::Pair(i, j) if sign > 0 => vec![(i, n as i64), (j, -1)],
                Gen::Pair(i, j) => vec![(j, 1), (i, -(n as i64))],
            };
            let mut braid = Vec::new();
            for (j, e) in runs {
                braid.extend(twist_letters(j, e));
            }
            out.push(Letter { gen: g, sign, h: g.h(n) * sign as i64, braid });
        }
    }
    out
}

fn identity_key() -> Key {
    let mut k = [0i32; KEY_LEN];
    for (t, c) in test_family().iter().enumerate() {
        for s in 0..4 {
            k[4 * t + s] = c.coords()[s].to_i32().unwrap();
        }
    }
    k
}

/// `letter * element`, acting on the stored images.
fn left_mul(key: &Key, letter: &Letter) -> Result<Key, OracleError> {
    let mut out = [0i32; KEY_LEN];
    for t in 0..6 {
        let mut x: Dyn<i64> = std::array::from_fn(|s| key[4 * t + s] as i64);
        dk::apply_braid(&mut x, &letter.braid);
        for s in 0..4 {
            out[4 * t + s] = i32::try_from(x[s]).map_err(|_| OracleError::KeyOverflow)?;
        }
    }
    Ok(out)
}

pub fn key_of(w: &Word, n: u32) -> Result<Key, OracleError> {
    let ls = letters(n);
    let mut key = identity_key();
    // Rightmost letter acts first, so multiply on the left from the right end.
    for (g, e) in w.runs().iter().rev() {
        let reps = e.magnitude().to_u64().ok_or(OracleError::KeyOverflow)?;
        let sign: i8 = if e.sign() == num_bigint::Sign::Minus { -1 } else { 1 };
        let l = ls.iter().find(|l| l.gen == *g && l.sign == sign).unwrap();
        for _ in 0..reps {
            key = left_mul(&key, l)?;
        }
    }
    Ok(key)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Node {
    pub dist: u32,
    pub h: i64,
    /// Number of geodesic letter sequences from the root.
    pub count: u64,
    /// Index of the first letter of one geodesic, `u8::MAX` at the root.
    pub first: u8,
}

/// Breadth-first layers from a root element.
pub struct Search {
    n: u32,
    letters: Vec<Letter>,
    pub nodes: HashMap<Key, Node>,
    pub frontier: Vec<Key>,
    pub radius: u32,
    budget: usize,
}

impl Search {
    pub fn new(n: u32, root: Key, root_h: i64, budget: usize) -> Search {
        let mut nodes = HashMap::new();
        nodes.insert(root, Node { dist: 0, h: root_h, count: 1, first: u8::MAX });
        Search { n, letters: letters(n), nodes, frontier: vec![root], radius: 0, budget }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn expand(&mut self) -> Result<(), OracleError> {
        let mut next: Vec<Key> = Vec::new();
        let d = self.radius + 1;
        for key in std::mem::take(&mut self.frontier) {
            let node = self.nodes[&key];
            for (li, l) in self.letters.iter().enumerate() {
                let child = left_mul(&key, l)?;
                match self.nodes.get_mut(&child) {
                    Some(c) if c.dist == d => c.count += node.count,
                    Some(_) => {}
                    None => {
                        self.nodes.insert(child, Node { dist: d, h: node.h + l.h, count: node.count, first: li as u8 });
                        next.push(child);
                    }
                }
            }
            if self.nodes.len() > self.budget {
                return Err(OracleError::MemoryBudgetExceeded { budget: self.budget, radius: d });
            }
        }
        // Deterministic frontier order regardless of hash iteration.
        next.sort_unstable();
        self.frontier = next;
        self.radius = d;
        Ok(())
    }

    /// One geodesic word from the root to `key`, leftmost letter first.
    pub fn sample_word(&self, key: &Key) -> Option<Word> {
        let mut w = Word::identity();
        let mut cur = *key;
        loop {
            let node = self.nodes.get(&cur)?;
            if node.first == u8::MAX {
                return Some(w);
            }
            let l = &self.letters[node.first as usize];
            w.append(&l.word());
            let inv = self.letters.iter().find(|m| m.gen == l.gen && m.sign == -l.sign).unwrap();
            cur = left_mul(&cur, inv).ok()?;
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallSummary {
    pub n: u32,
    pub radius: u32,
    pub layer_sizes: Vec<usize>,
    /// Elements whose length is below the h-value lower bound (must be empty).
    pub bound_violations: usize,
    /// Elements whose length equals the h-value lower bound.
    pub bound_tight: usize,
}

pub fn ball(radius: u32, n: u32, budget: usize) -> Result<Search, OracleError> {
    let mut s = Search::new(n, identity_key(), 0, budget);
    for _ in 0..radius {
        s.expand()?;
    }
    Ok(s)
}

pub fn summarize(s: &Search) -> BallSummary {
    let mut layer_sizes = vec![0usize; s.radius as usize + 1];
    let (mut bad, mut tight) = (0, 0);
    for node in s.nodes.values() {
        layer_sizes[node.dist as usize] += 1;
        let b = length_lower_bound(&num_bigint::BigInt::from(node.h), s.n).bound.to_i64().unwrap();
        if (node.dist as i64) < b {
            bad += 1;
        } else if node.dist as i64 == b {
            tight += 1;
        }
    }
    BallSummary { n: s.n, radius: s.radius, layer_sizes, bound_violations: bad, bound_tight: tight }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Length {
    Exact { length: u32, geodesics: u64, sample: String },
    Unknown { at_least: u32 },
}

/// Bidirectional search: layers around the identity and around the target
/// are grown alternately. After both are complete to radii `rf`, `rb`,
/// every path of length at most `rf + rb` has a vertex seen from both sides.
pub fn exact_length(w: &Word, n: u32, max_total: u32, budget: usize) -> Result<Length, OracleError> {
    let target = key_of(w, n)?;
    let mut fwd = Search::new(n, identity_key(), 0, budget);
    let mut bwd = Search::new(n, target, 0, budget);
    loop {
        let covered = fwd.radius + bwd.radius;
        // Shortest length through a common vertex, and the number of
        // geodesics split at forward distance min(rf, L).
        let mut best: Option<u32> = None;
        for (k, a) in &fwd.nodes {
            if let Some(b) = bwd.nodes.get(k) {
                let l = a.dist + b.dist;
                best = Some(best.map_or(l, |x| x.min(l)));
            }
        }
        if let Some(l) = best {
            if l <= covered {
                let split = fwd.radius.min(l);
                let mut count = 0u64;
                let mut sample = None;
                let mut meets: Vec<(&Key, &Node)> = fwd.nodes.iter().filter(|(_, a)| a.dist == split).collect();
                meets.sort_unstable_by_key(|(k, _)| **k);
                for (k, a) in meets {
                    if let Some(b) = bwd.nodes.get(k) {
                        if b.dist == l - split {
                            count += a.count * b.count;
                            if sample.is_none() {
                                // fwd word spells the meeting element m; bwd word u has
                                // u * target = m, so target = u^-1 m.
                                let m = fwd.sample_word(k).unwrap();
                                let u = bwd.sample_word(k).unwrap();
                                sample = Some(u.inverse().concat(&m));
                            }
                        }
                    }
                }
                return Ok(Length::Exact { length: l, geodesics: count, sample: sample.unwrap().to_string() });
            }
        }
        if covered >= max_total {
            return Ok(Length::Unknown { at_least: covered + 1 });
        }
        if fwd.frontier.len() <= bwd.frontier.len() {
            fwd.expand()?;
        } else {
            bwd.expand()?;
        }
    }
}

pub fn count_geodesics(w: &Word, n: u32, max_total: u32, budget: usize) -> Result<Option<u64>, OracleError> {
    Ok(match exact_length(w, n, max_total, budget)? {
        Length::Exact { geodesics, .. } => Some(geodesics),
        Length::Unknown { .. } => None,
    })
}

/// Content-addressed result store: one JSON file per query, named by the
/// SHA-256 of the query text. The query text starts with a format version.
pub struct Cache {
    dir: PathBuf,
}

pub const CACHE_VERSION: &str = "sphere5-oracle-v1";

impl Cache {
    pub fn new(dir: impl AsRef<Path>) -> Cache {
        Cache { dir: dir.as_ref().to_path_buf() }
    }

    fn path(&self, query: &str) -> PathBuf {
        let digest = Sha256::digest(format!("{CACHE_VERSION}\n{query}").as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{hex}.json"))
    }

    pub fn get<T: for<'de> Deserialize<'de>>(&self, query: &str) -> Option<T> {
        let text = fs::read_to_string(self.path(query)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put<T: Serialize>(&self, query: &str, value: &T) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        fs::write(self.path(query), serde_json::to_string_pretty(value)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: usize = 2_000_000;

    fn exact(w: &str, n: u32) -> (u32, u64) {
        match exact_length(&Word::parse(w).unwrap(), n, 8, BUDGET).unwrap() {
            Length::Exact { length, geodesics, .. } => (length, geodesics),
            Length::Unknown { .. } => panic!("unknown"),
        }
    }

    #[test]
    fn small_balls() {
        let b0 = ball(0, 3, BUDGET).unwrap();
        assert_eq!(b0.nodes.len(), 1);
        let b1 = ball(1, 3, BUDGET).unwrap();
        assert!(b1.nodes.len() <= 31);
        let s = summarize(&ball(2, 3, BUDGET).unwrap());
        assert_eq!(s.bound_violations, 0);
    }

    #[test]
    fn known_lengths() {
        assert_eq!(exact("id", 3), (0, 1));
        assert_eq!(exact("T1^8", 3).0, 4);
        assert!(exact("T1^8", 3).1 >= 2);
        assert_eq!(exact("T1^13 T1^-1 T2^-1 T3^-1", 3).0, 5);
        assert_eq!(exact("T1^2", 3).0, 2);
        assert_eq!(exact("S12", 3), (1, 1));
    }

    #[test]
    fn sample_word_spells_the_target() {
        let w = Word::parse("T3 S45^-1 T1").unwrap();
        let Length::Exact { sample, .. } = exact_length(&w, 3, 6, BUDGET).unwrap() else { panic!() };
        let s = Word::parse(&sample).unwrap();
        assert_eq!(key_of(&s, 3).unwrap(), key_of(&w, 3).unwrap());
    }

    #[test]
    fn keys_match_the_curve_action() {
        use crate::curve::{apply_moves, word_moves_plain};
        let w = Word::parse("S12 T4^-2 S51^-1 T3").unwrap();
        let key = key_of(&w, 4).unwrap();
        let m = word_moves_plain(&w, 4);
        for (t, c) in test_family().iter().enumerate() {
            let img = apply_moves(&m, c.coords());
            for s in 0..4 {
                assert_eq!(img[s].to_i32().unwrap(), key[4 * t + s]);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(ball(3, 3, 100), Err(OracleError::MemoryBudgetExceeded { .. })));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::certificate::length_status;
    use num_bigint::BigInt;
    use crate::words::strategies::word;
    use crate::words::word_lower_bound;
    use proptest::prelude::*;

    fn len(w: &Word) -> Option<u32> {
        match exact_length(w, 3, 6, 1_000_000).unwrap() {
            Length::Exact { length, .. } => Some(length),
            Length::Unknown { .. } => None,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn oracle_is_symmetric_and_bounded(w in word(3, 1)) {
            let l = len(&w).unwrap();
            prop_assert_eq!(Some(l), len(&w.inverse()));
            prop_assert!(BigInt::from(l) <= w.length());
            prop_assert!(BigInt::from(l) >= word_lower_bound(&w, 3).bound);
        }
    }

    #[test]
    fn ball_is_symmetric() {
        let b = ball(2, 3, 100_000).unwrap();
        for (key, node) in &b.nodes {
            let w = b.sample_word(key).unwrap();
            assert_eq!(key_of(&w, 3).unwrap(), *key);
            let inv = b.nodes.get(&key_of(&w.inverse(), 3).unwrap()).expect("inverse enumerated");
            assert_eq!(inv.dist, node.dist);
        }
    }

    #[test]
    fn oracle_agrees_with_certificates() {
        use crate::words::*;
        for k in 1..=2u32 {
            let cases = [
                (target_w_phi(3, k), vec![geodesic_w_phi(3, k)]),
                (target_phi_u(3, k), vec![geodesic_phi_u(3, k).unwrap()]),
                (target_twist_power(3, k), crate::certificate::twist_power_candidates(3, k)),
            ];
            for (t, c) in cases {
                let st = length_status(&t, &c, 3, 1 << 20);
                if let Some(x) = st.exact() {
                    assert_eq!(BigInt::from(len(&t).unwrap()), *x, "{t}");
                }
            }
        }
    }
}
