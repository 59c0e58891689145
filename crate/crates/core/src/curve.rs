//! Curves on the five-punctured sphere as exact Dynnikov coordinate vectors,
//! together with the mapping class that produced them.
//!
//! Every [`Curve`] remembers a base curve `alpha_j` and a move list `M` with
//! `coords = M(alpha_j)`. Intersection numbers are then computed in the frame
//! where the first curve is standard: `i(a, b) = i(alpha_j, M^-1 b)`.
//! Equality and hashing look at coordinates only.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynnikov::{self as dk, Dyn};
use crate::words::{wrap, Word};

pub type Coords = Dyn<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve index {0} outside 1..=5")]
    BadIndex(i64),
    #[error("coordinates {0} do not describe a single essential curve")]
    NotACurve(String),
    #[error("cannot parse curve text: {0}")]
    Parse(String),
    #[error("lantern configuration invalid: {0}")]
    ConfigInvalid(String),
}

/// A generator of the move language: a power of the twist about `alpha_j`
/// or a power of the half-twist `sigma_i` swapping disk punctures i, i+1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Twist(u8, BigInt),
    Half(u8, BigInt),
}

impl Move {
    pub fn inverse(&self) -> Move {
        match self {
            Move::Twist(j, e) => Move::Twist(*j, -e),
            Move::Half(i, e) => Move::Half(*i, -e),
        }
    }

    fn exponent(&self) -> &BigInt {
        match self {
            Move::Twist(_, e) | Move::Half(_, e) => e,
        }
    }

    fn with_exponent(&self, e: BigInt) -> Move {
        match self {
            Move::Twist(j, _) => Move::Twist(*j, e),
            Move::Half(i, _) => Move::Half(*i, e),
        }
    }

    fn same_generator(&self, other: &Move) -> bool {
        matches!((self, other), (Move::Twist(a, _), Move::Twist(b, _)) | (Move::Half(a, _), Move::Half(b, _)) if a == b)
    }

    pub fn apply(&self, x: &Coords) -> Coords {
        match self {
            Move::Twist(j, e) => twist_power(x, *j, e),
            Move::Half(i, e) => half_power(x, *i, e),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Twist(j, e) => write!(f, "T{j}^{e}"),
            Move::Half(i, e) => write!(f, "H{i}^{e}"),
        }
    }
}

/// Append `m` on the left end of the list (it acts last), merging with the
/// neighbouring move and dropping zero exponents.
fn push_front(out: &mut Vec<Move>, m: Move) {
    if m.exponent().is_zero() {
        return;
    }
    // Lists are stored leftmost first; we build reversed and flip at the end.
    if let Some(last) = out.last_mut() {
        if last.same_generator(&m) {
            let e = last.exponent() + m.exponent();
            if e.is_zero() {
                out.pop();
            } else {
                *last = last.with_exponent(e);
            }
            return;
        }
    }
    out.push(m);
}

/// Moves for `outer` applied after `inner`, freely reduced at the junction.
pub fn compose(outer: &[Move], inner: &[Move]) -> Vec<Move> {
    let mut rev: Vec<Move> = Vec::with_capacity(outer.len() + inner.len());
    for m in inner.iter().rev().chain(outer.iter().rev()) {
        push_front(&mut rev, m.clone());
    }
    rev.reverse();
    rev
}

pub fn invert(moves: &[Move]) -> Vec<Move> {
    moves.iter().rev().map(Move::inverse).collect()
}

/// Apply a move list; the rightmost move acts first.
pub fn apply_moves(moves: &[Move], x: &Coords) -> Coords {
    let mut y = x.clone();
    for m in moves.iter().rev() {
        y = m.apply(&y);
    }
    y
}

/// Exact power of `sigma_1` on the pair `(a, b)`. On each level set of
/// `N = max(-b, 0) + |a|` the half-twist is a translation by `N` in a
/// one-parameter coordinate `u`.
fn sigma1_power(a: &BigInt, b: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let level = (-b).max(BigInt::zero()) + a.abs();
    if level.is_zero() {
        return (a.clone(), b.clone());
    }
    let u = if b.is_negative() {
        &level - a
    } else if *a == level {
        -b
    } else {
        &level * 2 + b
    };
    let u = u + m * &level;
    let twice = &level * 2;
    if !u.is_positive() {
        (level, -u)
    } else if u < twice {
        let a = &level - &u;
        let b = a.abs() - &level;
        (a, b)
    } else {
        (-level, u - twice)
    }
}

pub fn half_power(x: &Coords, i: u8, m: &BigInt) -> Coords {
    let mut y = x.clone();
    match i {
        1 => {
            let (a, b) = sigma1_power(&x[0], &x[2], m);
            y[0] = a;
            y[2] = b;
        }
        // sigma_3 is sigma_1 conjugated by negation of the coordinates.
        3 => {
            let (a, b) = sigma1_power(&-&x[1], &-&x[3], m);
            y[1] = -a;
            y[3] = -b;
        }
        // sigma_2 = (sigma_1 sigma_2) sigma_1 (sigma_1 sigma_2)^-1.
        2 => {
            dk::apply_braid(&mut y, &[-2, -1]);
            y = half_power(&y, 1, m);
            dk::apply_braid(&mut y, &[1, 2]);
        }
        _ => panic!("half-twist index {i} outside 1..=3"),
    }
    y
}

/// Exponents at most this large are applied letter by letter.
const DIRECT: u32 = 64;

/// The value `c + s t` at integer steps `t >= 0`, together with the last
/// step `lim` up to which every sign decision that produced it stays valid.
#[derive(Clone, Debug)]
struct Aff {
    c: BigInt,
    s: BigInt,
    lim: Option<BigInt>,
}

fn min_lim(a: Option<BigInt>, b: Option<BigInt>) -> Option<BigInt> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl std::ops::Add for Aff {
    type Output = Aff;
    fn add(self, o: Aff) -> Aff {
        Aff { c: self.c + o.c, s: self.s + o.s, lim: min_lim(self.lim, o.lim) }
    }
}

impl std::ops::Sub for Aff {
    type Output = Aff;
    fn sub(self, o: Aff) -> Aff {
        Aff { c: self.c - o.c, s: self.s - o.s, lim: min_lim(self.lim, o.lim) }
    }
}

impl std::ops::Neg for Aff {
    type Output = Aff;
    fn neg(self) -> Aff {
        Aff { c: -self.c, s: -self.s, lim: self.lim }
    }
}

impl Aff {
    /// Keep `self` while it has sign `keep_sign` (or is zero), else zero.
    /// Returns the chosen branch and the last step where it is still right.
    fn part(self, keep_sign: i8) -> Aff {
        let (c, s) = (&self.c * keep_sign, &self.s * keep_sign);
        let keep = c.is_positive() || (c.is_zero() && !s.is_negative());
        // Branch flips once c + s t changes sign.
        let until = if keep && s.is_negative() {
            Some(c.div_floor(&-&s))
        } else if !keep && s.is_positive() {
            Some((-&c).div_floor(&s))
        } else {
            None
        };
        let lim = min_lim(self.lim.clone(), until);
        if keep {
            Aff { lim, ..self }
        } else {
            Aff { c: BigInt::zero(), s: BigInt::zero(), lim }
        }
    }
}

impl dk::Pl for Aff {
    fn pos(self) -> Aff {
        self.part(1)
    }

    fn neg_part(self) -> Aff {
        self.part(-1)
    }
}

fn step(x: &Coords, j: u8, sign: i8) -> Coords {
    let mut y = x.clone();
    dk::twist_once(&mut y, j, sign < 0);
    y
}

/// Number of further steps that provably continue `x + t d`: the twist is
/// run symbolically along that line, and if it maps `x + t d` to
/// `x + (t+1) d` for every `t` up to some bound, the bound plus one is
/// returned (`None` when unbounded). Zero when the line is not invariant.
fn affine_run(x: &Coords, d: &Coords, j: u8, sign: i8) -> Option<BigInt> {
    let mut line: Dyn<Aff> = std::array::from_fn(|t| Aff { c: x[t].clone(), s: d[t].clone(), lim: None });
    dk::twist_once(&mut line, j, sign < 0);
    let mut lim: Option<BigInt> = None;
    for t in 0..4 {
        if line[t].s != d[t] || line[t].c != &x[t] + &d[t] {
            return Some(BigInt::zero());
        }
        lim = min_lim(lim, line[t].lim.clone());
    }
    lim.map(|l| l + 1)
}

/// Twist power about the j-th standard curve. Curves enclosing two disk
/// punctures use the exact half-twist formula. For the other two the orbit
/// is followed through its affine stretches: after each step the twist is
/// evaluated symbolically on the line through the last displacement, which
/// certifies exactly how many steps stay on that line.
pub fn twist_power(x: &Coords, j: u8, m: &BigInt) -> Coords {
    match j {
        1 => return half_power(x, 2, &(m * 2)),
        3 => return half_power(x, 1, &(m * 2)),
        4 => return half_power(x, 3, &(m * 2)),
        2 | 5 => {}
        _ => panic!("curve index {j} outside 1..=5"),
    }
    let sign: i8 = if m.is_negative() { -1 } else { 1 };
    let mut rem = m.abs();
    let mut cur = x.clone();
    if rem <= BigInt::from(DIRECT) {
        for _ in 0..rem.to_u32().unwrap() {
            cur = step(&cur, j, sign);
        }
        return cur;
    }
    while rem.is_positive() {
        let next = step(&cur, j, sign);
        let d: Coords = std::array::from_fn(|t| &next[t] - &cur[t]);
        cur = next;
        rem -= 1;
        if d.iter().all(|v| v.is_zero()) {
            break;
        }
        let run = match affine_run(&cur, &d, j, sign) {
            None => rem.clone(),
            Some(r) => r.min(rem.clone()),
        };
        if run.is_positive() {
            cur = std::array::from_fn(|t| &cur[t] + &run * &d[t]);
            rem -= run;
        }
    }
    cur
}

/// Twist runs of a word as moves, after the exact commutation-aware merge.
pub fn word_moves(w: &Word, n: u32) -> Vec<Move> {
    w.merged_twists(n).into_iter().map(|(i, e)| Move::Twist(i, e)).collect()
}

/// Unreduced twist runs of a word, one move per run.
pub fn word_moves_plain(w: &Word, n: u32) -> Vec<Move> {
    w.expand_pairs(n)
        .runs()
        .iter()
        .map(|(g, e)| match g {
            crate::words::Gen::Twist(i) => Move::Twist(*i, e.clone()),
            crate::words::Gen::Pair(..) => unreachable!(),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Curve {
    coords: Coords,
    base: u8,
    moves: Vec<Move>,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Curve) -> bool {
        self.coords == other.coords
    }
}
impl Eq for Curve {}

impl Hash for Curve {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

/// Serialized as the versioned coordinate text plus the enclosed pair;
/// provenance is recomputed on load.
impl Serialize for Curve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Curve", 2)?;
        st.serialize_field("coords", &self.to_text())?;
        let (p, q) = enclosed_pair(self);
        st.serialize_field("pair", &[p, q])?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Curve, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coords: String,
        }
        let raw = Raw::deserialize(d)?;
        Curve::parse(&raw.coords).map_err(serde::de::Error::custom)
    }
}

impl Curve {
    pub fn alpha(j: u8) -> Curve {
        assert!((1..=5).contains(&j), "curve index {j} outside 1..=5");
        Curve { coords: dk::std_coords(j), base: j, moves: Vec::new() }
    }

    pub fn try_alpha(j: i64) -> Result<Curve, CurveError> {
        if !(1..=5).contains(&j) {
            return Err(CurveError::BadIndex(j));
        }
        Ok(Curve::alpha(j as u8))
    }

    pub fn from_moves(base: u8, moves: Vec<Move>) -> Curve {
        let coords = apply_moves(&moves, &dk::std_coords(base));
        Curve { coords, base, moves }
    }

    /// Recover a provenance for bare coordinates by descending the
    /// complexity with half-twist powers.
    pub fn from_coords(coords: Coords) -> Result<Curve, CurveError> {
        let (base, moves) = straighten(&coords)?;
        Ok(Curve { coords, base, moves })
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Index j when this is `alpha_j` itself.
    pub fn standard_index(&self) -> Option<u8> {
        (1..=5).find(|&j| self.coords == dk::std_coords(j))
    }

    pub fn transform(&self, moves: &[Move]) -> Curve {
        Curve {
            coords: apply_moves(moves, &self.coords),
            base: self.base,
            moves: compose(moves, &self.moves),
        }
    }

    pub fn apply_word(&self, w: &Word, n: u32) -> Curve {
        self.transform(&word_moves(w, n))
    }

    /// Moves for the twist about this curve: `M T_base^e M^-1`.
    pub fn twist_moves(&self, e: impl Into<BigInt>) -> Vec<Move> {
        let mid = compose(&[Move::Twist(self.base, e.into())], &invert(&self.moves));
        compose(&self.moves, &mid)
    }

    pub fn complexity(&self) -> BigInt {
        dk::complexity(&self.coords)
    }

    pub fn to_text(&self) -> String {
        let c = &self.coords;
        format!("dyn4 v1 {} {} {} {}", c[0], c[1], c[2], c[3])
    }

    pub fn parse(text: &str) -> Result<Curve, CurveError> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let bad = || CurveError::Parse(text.to_string());
        if toks.len() != 6 || toks[0] != "dyn4" || toks[1] != "v1" {
            return Err(bad());
        }
        let mut c: Coords = Default::default();
        for t in 0..4 {
            c[t] = toks[2 + t].parse().map_err(|_| bad())?;
        }
        Curve::from_coords(c)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn straighten(x: &Coords) -> Result<(u8, Vec<Move>), CurveError> {
    let fail = || CurveError::NotACurve(format!("{:?}", x.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
    if x.iter().all(|v| v.is_zero()) {
        return Err(fail());
    }
    // `reduce` accumulates R with R(x) = current.
    let mut reduce: Vec<Move> = Vec::new();
    let mut cur = x.clone();
    loop {
        if let Some(j) = (1..=5).find(|&j| cur == dk::std_coords(j)) {
            return Ok((j, invert(&reduce)));
        }
        let k = dk::complexity(&cur);
        let mut best: Option<(BigInt, Move, Coords)> = None;
        for i in 1..=3u8 {
            for s in [1i64, -1] {
                let (m, y) = gallop(&cur, i, s);
                let ky = dk::complexity(&y);
                if ky < k && best.as_ref().is_none_or(|b| ky < b.0) {
                    best = Some((ky, Move::Half(i, m), y));
                }
            }
        }
        if best.is_none() {
            best = short_descent(&cur, &k);
        }
        let Some((_, mv, y)) = best else {
            return Err(fail());
        };
        reduce = compose(&[mv], &reduce);
        cur = y;
    }
}

/// Largest-descent exponent of `sigma_i^s` found by doubling then bisecting.
fn gallop(x: &Coords, i: u8, s: i64) -> (BigInt, Coords) {
    let at = |m: &BigInt| {
        let y = half_power(x, i, &(m * s));
        let k = dk::complexity(&y);
        (y, k)
    };
    let mut m = BigInt::one();
    let (mut y, mut k) = at(&m);
    loop {
        let m2 = &m * 2;
        let (y2, k2) = at(&m2);
        if k2 < k {
            m = m2;
            y = y2;
            k = k2;
        } else {
            break;
        }
    }
    let mut stride: BigInt = &m / 2;
    while stride.is_positive() {
        let m2 = &m + &stride;
        let (y2, k2) = at(&m2);
        if k2 < k {
            m = m2;
            y = y2;
            k = k2;
        }
        stride /= 2;
    }
    (m * s, y)
}

/// Fallback when no single half-twist power descends: breadth-first over
/// half-twist words of length at most 3.
fn short_descent(x: &Coords, k: &BigInt) -> Option<(BigInt, Move, Coords)> {
    let gens: [(u8, i64); 6] = [(1, 1), (1, -1), (2, 1), (2, -1), (3, 1), (3, -1)];
    let mut layer: Vec<(Vec<Move>, Coords)> = vec![(Vec::new(), x.clone())];
    for _ in 0..3 {
        let mut next = Vec::new();
        for (mv, y) in &layer {
            for (i, s) in gens {
                let z = half_power(y, i, &BigInt::from(s));
                let mv2 = compose(&[Move::Half(i, BigInt::from(s))], mv);
                let kz = dk::complexity(&z);
                if &kz < k || (1..=5).any(|j| z == dk::std_coords(j)) {
                    // Return the first move; the outer loop handles the rest.
                    let first = mv2.last().cloned()?;
                    let z1 = first.apply(x);
                    return Some((dk::complexity(&z1), first, z1));
                }
                next.push((mv2, z));
            }
        }
        layer = next;
    }
    None
}

/// Geometric intersection number.
pub fn intersection(a: &Curve, b: &Curve) -> BigInt {
    let y = apply_moves(&invert(&a.moves), &b.coords);
    dk::intersection_std(&y, a.base)
}

/// The two punctures (labels 1..=5) on the twice-punctured side.
pub fn enclosed_pair(c: &Curve) -> (u8, u8) {
    let u = dk::upper_counts(&c.coords);
    let inside: Vec<u8> = (0..4).filter(|&p| u[p].is_odd()).map(|p| p as u8 + 1).collect();
    let pair: Vec<u8> = match inside.len() {
        2 => inside,
        3 => {
            let out = (1..=4).find(|p| !inside.contains(p)).unwrap();
            vec![out, 5]
        }
        _ => panic!("curve encloses {} disk punctures", inside.len()),
    };
    (pair[0].min(pair[1]), pair[0].max(pair[1]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveType {
    pub pair: (u8, u8),
    pub consecutive: bool,
}

pub fn curve_type(c: &Curve) -> CurveType {
    let (p, q) = enclosed_pair(c);
    CurveType { pair: (p, q), consecutive: wrap(p as i64 + 1) == q || wrap(q as i64 + 1) == p }
}

/// h-value of the twist about the curve: +1 when the enclosed punctures are
/// cyclically consecutive, -1 otherwise (forced by the lantern relation).
pub fn twist_h_sign(c: &Curve) -> i32 {
    if curve_type(c).consecutive {
        1
    } else {
        -1
    }
}

pub fn alpha(i: u8) -> Curve {
    Curve::alpha(i)
}

pub fn apply_twist(c: &Curve, i: u8, e: impl Into<BigInt>) -> Curve {
    c.transform(&[Move::Twist(i, e.into())])
}

pub fn apply_word(w: &Word, c: &Curve, n: u32) -> Curve {
    c.apply_word(w, n)
}

/// The five standard curves and `T3 T4 (alpha_1)`. A pure mapping class that
/// fixes all six is trivial.
pub fn test_family() -> Vec<Curve> {
    let mut fam: Vec<Curve> = (1..=5).map(Curve::alpha).collect();
    fam.push(Curve::alpha(1).transform(&[Move::Twist(3, BigInt::one()), Move::Twist(4, BigInt::one())]));
    fam
}

pub fn acts_trivially(moves: &[Move]) -> bool {
    test_family().iter().all(|c| apply_moves(moves, c.coords()) == *c.coords())
}

pub fn is_identity(w: &Word, n: u32) -> bool {
    acts_trivially(&word_moves_plain(w, n))
}

/// Whether two words act identically on the test family.
pub fn same_action(a: &Word, b: &Word, n: u32) -> bool {
    let (ma, mb) = (word_moves(a, n), word_moves(b, n));
    test_family().iter().all(|c| apply_moves(&ma, c.coords()) == apply_moves(&mb, c.coords()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LanternInstance {
    /// The three interior curves in the order for which the relation holds.
    pub inner: [Curve; 3],
    pub outer: Curve,
    pub h_signs: [i32; 4],
}

/// Checks the configuration (inner curves pairwise meeting twice, all
/// disjoint from the outer one) and finds an order of the inner curves for
/// which `D1 D2 D3 D4^-1` acts trivially.
pub fn verify_lantern(inner: [Curve; 3], outer: Curve) -> Result<LanternInstance, CurveError> {
    let two = BigInt::from(2);
    for a in 0..3 {
        if !intersection(&inner[a], &outer).is_zero() {
            return Err(CurveError::ConfigInvalid(format!("inner curve {a} meets the outer curve")));
        }
        for b in a + 1..3 {
            if intersection(&inner[a], &inner[b]) != two {
                return Err(CurveError::ConfigInvalid(format!("inner curves {a},{b} do not meet twice")));
            }
        }
    }
    const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for ord in ORDERS {
        let mut mv = outer.twist_moves(-1);
        for &t in ord.iter().rev() {
            mv = compose(&inner[t].twist_moves(1), &mv);
        }
        if acts_trivially(&mv) {
            let inner = ord.map(|t| inner[t].clone());
            let h_signs = [twist_h_sign(&inner[0]), twist_h_sign(&inner[1]), twist_h_sign(&inner[2]), twist_h_sign(&outer)];
            return Ok(LanternInstance { inner, outer, h_signs });
        }
    }
    Err(CurveError::ConfigInvalid("no order of the inner curves satisfies the relation".into()))
}

/// A curve inside the complement of `alpha_j` meeting both neighbours of
/// `alpha_j` twice; with those neighbours it spans a triangle of curves in
/// the four-holed sphere cut off by `alpha_j`.
pub fn third_curve(j: u8) -> Curve {
    let h = |i: u8, e: i64| Move::Half(i, BigInt::from(e));
    match j {
        1 => Curve::from_moves(1, vec![h(1, 1), h(3, -1)]),
        2 => Curve::from_moves(1, vec![h(1, 1)]),
        3 => Curve::from_moves(2, vec![h(3, 1)]),
        4 => Curve::from_moves(2, vec![h(2, 1), h(3, 1)]),
        5 => Curve::from_moves(1, vec![h(3, 1)]),
        _ => panic!("curve index {j} outside 1..=5"),
    }
}

/// Lantern instances around each standard curve, in index order.
pub fn find_lantern() -> Option<LanternInstance> {
    (1..=5u8).find_map(|j| {
        let inner = [Curve::alpha(wrap(j as i64 - 1)), Curve::alpha(wrap(j as i64 + 1)), third_curve(j)];
        verify_lantern(inner, Curve::alpha(j)).ok()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn c4(v: [i64; 4]) -> Coords {
        v.map(BigInt::from)
    }

    fn stepped_half(x: &Coords, i: u8, m: i64) -> Coords {
        let mut y = x.clone();
        for _ in 0..m.abs() {
            dk::sigma(&mut y, i, m < 0);
        }
        y
    }

    fn stepped_twist(x: &Coords, j: u8, m: i64) -> Coords {
        let mut y = x.clone();
        for _ in 0..m.abs() {
            dk::twist_once(&mut y, j, m < 0);
        }
        y
    }

    #[test]
    fn half_powers_match_stepping() {
        let pts = [[3, -2, 5, -1], [0, 0, -1, 1], [7, 4, -3, 2], [-4, 9, 0, -6], [0, 5, 2, 0]];
        for p in pts {
            let x = c4(p);
            for i in 1..=3 {
                for m in -9..=9 {
                    assert_eq!(half_power(&x, i, &b(m)), stepped_half(&x, i, m), "i={i} m={m} x={p:?}");
                }
            }
        }
    }

    #[test]
    fn twist_powers_match_stepping() {
        let x = Curve::alpha(1).transform(&[Move::Twist(3, b(2)), Move::Twist(5, b(-1)), Move::Twist(2, b(3))]);
        for j in 1..=5 {
            for m in [-200i64, -97, -65, 65, 100, 203] {
                assert_eq!(twist_power(x.coords(), j, &b(m)), stepped_twist(x.coords(), j, m), "j={j} m={m}");
            }
        }
    }

    #[test]
    fn labels_of_standard_curves() {
        let want = [(2, 3), (4, 5), (1, 2), (3, 4), (1, 5)];
        for j in 1..=5u8 {
            assert_eq!(enclosed_pair(&Curve::alpha(j)), want[j as usize - 1]);
            assert_eq!(twist_h_sign(&Curve::alpha(j)), 1);
        }
    }

    #[test]
    fn third_curves_span_triangles() {
        for j in 1..=5u8 {
            let t = third_curve(j);
            assert_eq!(intersection(&t, &Curve::alpha(j)), b(0));
            assert_eq!(intersection(&t, &Curve::alpha(wrap(j as i64 - 1))), b(2));
            assert_eq!(intersection(&t, &Curve::alpha(wrap(j as i64 + 1))), b(2));
            assert_eq!(twist_h_sign(&t), -1);
        }
    }

    #[test]
    fn lantern_found() {
        let inst = find_lantern().expect("lantern instance");
        let [a, b2, c, d] = inst.h_signs;
        assert_eq!(a + b2 + c, d);
    }

    #[test]
    fn disjoint_twists_commute() {
        let t = |j: u8, e: i64| Move::Twist(j, b(e));
        assert!(acts_trivially(&[t(1, 1), t(2, 1), t(1, -1), t(2, -1)]));
        assert!(!acts_trivially(&[t(1, 1), t(3, 1), t(1, -1), t(3, -1)]));
        assert!(!acts_trivially(&[t(2, 1)]));
    }

    #[test]
    fn straighten_recovers_provenance() {
        let moves = vec![Move::Twist(3, b(5)), Move::Twist(5, b(-2)), Move::Twist(2, b(7)), Move::Twist(4, b(-1))];
        let c = Curve::from_moves(1, moves);
        let d = Curve::from_coords(c.coords().clone()).unwrap();
        assert_eq!(c, d);
        assert_eq!(apply_moves(d.moves(), &dk::std_coords(d.base())), *c.coords());
        assert!(Curve::from_coords(c4([0, 0, 0, 0])).is_err());
        assert!(Curve::from_coords(c4([0, 0, 2, 0])).is_err());
        assert_eq!(Curve::parse(&c.to_text()).unwrap(), c);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::words::strategies::word;
    use crate::words::twists_commute;
    use proptest::prelude::*;

    fn image(w: &Word, j: u8) -> Curve {
        Curve::alpha(j).apply_word(w, 3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn intersection_is_symmetric(u in word(4, 3), v in word(4, 3), i in 1u8..=5, j in 1u8..=5) {
            let (a, b) = (image(&u, i), image(&v, j));
            prop_assert_eq!(intersection(&a, &b), intersection(&b, &a));
            prop_assert!(intersection(&a, &a).is_zero());
        }

        #[test]
        fn disjoint_twists_commute(i in 1u8..=5, j in 1u8..=5, a in -5i64..=5, b in -5i64..=5, w in word(3, 3)) {
            prop_assume!(twists_commute(i, j));
            let x = Word::twist_power(i, a).concat(&Word::twist_power(j, b));
            let y = Word::twist_power(j, b).concat(&Word::twist_power(i, a));
            let c = image(&w, 3);
            prop_assert_eq!(c.apply_word(&x, 3), c.apply_word(&y, 3));
        }

        #[test]
        fn conjugation_covariance(f in word(3, 3), i in 1u8..=5, e in -3i64..=3) {
            let twisted = image(&f, i);
            let by_word = word_moves_plain(&f.concat(&Word::twist_power(i, e)).concat(&f.inverse()), 3);
            let by_curve = twisted.twist_moves(e);
            for c in test_family() {
                prop_assert_eq!(apply_moves(&by_word, c.coords()), apply_moves(&by_curve, c.coords()));
            }
        }

        #[test]
        fn type_is_preserved(f in word(4, 4), i in 1u8..=5) {
            let c = image(&f, i);
            prop_assert_eq!(twist_h_sign(&c), 1);
            let t = third_curve(i).apply_word(&f, 3);
            prop_assert_eq!(twist_h_sign(&t), twist_h_sign(&third_curve(i)));
        }

        #[test]
        fn twist_then_inverse(w in word(3, 3), j in 1u8..=5, m in -100i64..100) {
            let c = image(&w, 1);
            let m = BigInt::from(m);
            prop_assert_eq!(&twist_power(&twist_power(c.coords(), j, &m), j, &-&m), c.coords());
        }

        #[test]
        fn far_twists_match_stepping(w in word(3, 4), j in prop::sample::select(vec![2u8, 5]), m in 65i64..200, neg in any::<bool>()) {
            let x = image(&w, 1 + (m % 5) as u8).coords().clone();
            let m = if neg { -m } else { m };
            let mut y = x.clone();
            for _ in 0..m.abs() {
                dk::twist_once(&mut y, j, m < 0);
            }
            prop_assert_eq!(twist_power(&x, j, &BigInt::from(m)), y);
        }

        #[test]
        fn curves_roundtrip_through_text(w in word(4, 4), j in 1u8..=5) {
            let c = image(&w, j);
            let back = Curve::parse(&c.to_text()).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(enclosed_pair(&back), enclosed_pair(&c));
        }
    }
}

#[cfg(test)]
mod examples {
    use super::*;
    use crate::words::{geodesic_example_a, phi_prefix, pow};

    #[test]
    fn reference_curves_and_twists() {
        assert_eq!(curve_type(&alpha(1)), CurveType { pair: (2, 3), consecutive: true });
        assert_eq!(intersection(&alpha(1), &alpha(2)), BigInt::zero());
        assert_eq!(intersection(&alpha(1), &alpha(3)), BigInt::from(2));
        for m in [-7i64, 1, 1000] {
            assert_eq!(apply_twist(&alpha(1), 1, m), alpha(1));
            assert_eq!(apply_twist(&alpha(2), 1, m), alpha(2));
        }
        let c = apply_word(&Word::parse("S23 T5^-2").unwrap(), &alpha(4), 3);
        assert_eq!(apply_twist(&apply_twist(&c, 3, 1), 3, -1), c);
        assert_eq!(apply_word(&Word::identity(), &c, 3), c);
        assert!(intersection(&apply_word(&phi_prefix(5), &alpha(1), 3), &alpha(1)).is_positive());
        assert_eq!(apply_word(&Word::parse("S12").unwrap(), &alpha(1), 3), alpha(1));
    }

    #[test]
    fn identity_test_examples() {
        assert!(is_identity(&Word::identity(), 3));
        assert!(!is_identity(&Word::parse("T1").unwrap(), 3));
        assert!(is_identity(&Word::parse("T1 T2 T1^-1 T2^-1").unwrap(), 3));
        for (n, k) in [(3u32, 2u32), (4, 4), (7, 2)] {
            let w = geodesic_example_a(n, k).unwrap().concat(&Word::twist_power(1, BigInt::one() - pow(n, k)));
            assert!(is_identity(&w, n));
        }
    }

    #[test]
    fn non_consecutive_curves_have_negative_sign() {
        let odd: Vec<Curve> = (1..=5u8).map(third_curve).filter(|c| !curve_type(c).consecutive).collect();
        assert!(!odd.is_empty());
        for c in odd {
            assert_eq!(twist_h_sign(&c), -1);
            let moved = apply_word(&Word::parse("S34^2 T1^-3").unwrap(), &c, 3);
            assert_eq!(curve_type(&moved), curve_type(&c));
        }
    }
}
