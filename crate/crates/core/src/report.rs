//! Experiment drivers behind the `xp` subcommands. Each returns plain rows
//! or a report struct plus a pass flag; formatting lives in [`emit`].
//! Big integers are carried as decimal strings so CSV and JSON agree.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axis::{self, AxisRow, AxisVerdict, ProjectionParams};
use crate::cayley::{self, BallSummary, Cache, Length, OracleError};
use crate::certificate::{exact_length_certificate, length_status, twist_power_candidates, LengthStatus};
use crate::curve::{acts_trivially, apply_moves, enclosed_pair, find_lantern, test_family, twist_h_sign, word_moves_plain, Curve};
use crate::curve_graph::{fills, qg_refutation, shadow, Kind, QgCell, Rational};
use crate::train_track as tt;
use crate::words::*;

pub const FLOW_BUDGET: u64 = 1 << 26;

fn status_length(st: &LengthStatus) -> String {
    match st {
        LengthStatus::Certified { length } => length.to_string(),
        LengthStatus::Refuted { lower, upper, .. } | LengthStatus::Open { lower, upper } => {
            if lower == upper {
                lower.to_string()
            } else {
                format!("{lower}..{upper}")
            }
        }
        LengthStatus::Mismatch => String::new(),
    }
}

/// One family entry of the geodesic table.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub expected: String,
    pub status: &'static str,
    pub length: String,
    pub matches: bool,
}

fn entry(target: &Word, candidates: &[Word], expected: &BigInt, n: u32) -> Entry {
    let st = length_status(target, candidates, n, FLOW_BUDGET);
    let matches = st.is_certified() && st.exact() == Some(expected);
    Entry { expected: expected.to_string(), status: st.label(), length: status_length(&st), matches }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicRow {
    pub n: u32,
    pub k: u32,
    pub twist_power: Entry,
    pub w_phi: Entry,
    pub w_v: Option<Entry>,
    pub phi_u: Entry,
    /// `||T1^(n^k)||` certified by the concatenated spelling.
    pub full_twist: Entry,
    /// `||w_(k-1) phi^(-k/5)|| + ||phi^(k/5) u_k||`.
    pub split_sum: String,
    pub sum_identity: bool,
}

impl GeodesicRow {
    pub fn families_pass(&self) -> bool {
        self.twist_power.matches && self.w_phi.matches && self.phi_u.matches && self.w_v.as_ref().is_none_or(|e| e.matches)
    }

    pub fn all_pass(&self) -> bool {
        self.families_pass() && self.sum_identity
    }
}

/// Spelling of `T1^(n^k)` through the midpoint `w_(k-1) phi^(-k/5)`.
pub fn full_twist_geodesic(n: u32, k: u32) -> Word {
    geodesic_w_phi(n, k - 1).concat(&geodesic_phi_u(n, k).expect("k >= 1"))
}

pub fn geodesic_row(n: u32, k: u32) -> GeodesicRow {
    let twist_power = entry(&target_twist_power(n, k), &twist_power_candidates(n, k), &build_mk(n, k as i64 - 1), n);
    let w_phi = entry(&target_w_phi(n, k), &[geodesic_w_phi(n, k)], &closed_w_phi(n, k), n);
    let w_v = (k % 2 == 1).then(|| entry(&target_w_v(n, k).unwrap(), &[geodesic_w_v(n, k).unwrap()], &closed_w_phi(n, k), n));
    let phi_u = entry(&target_phi_u(n, k), &[geodesic_phi_u(n, k).unwrap()], &closed_phi_u(n, k), n);

    let left = exact_length_certificate(&target_w_phi(n, k - 1), &geodesic_w_phi(n, k - 1), n).ok();
    let right = exact_length_certificate(&target_phi_u(n, k), &geodesic_phi_u(n, k).unwrap(), n).ok();
    let split = match (&left, &right) {
        (Some(a), Some(b)) => Some(&a.length + &b.length),
        _ => None,
    };
    let full_target = Word::twist_power(1, pow(n, k));
    let full_twist = entry(&full_target, &[full_twist_geodesic(n, k)], split.as_ref().unwrap_or(&BigInt::from(-1)), n);
    GeodesicRow {
        n,
        k,
        twist_power,
        w_phi,
        w_v,
        phi_u,
        sum_identity: full_twist.matches,
        full_twist,
        split_sum: split.map(|s| s.to_string()).unwrap_or_default(),
    }
}

pub fn geodesic_table(ns: &[u32], ks: &[u32]) -> Vec<GeodesicRow> {
    ns.iter().flat_map(|&n| ks.iter().map(move |&k| geodesic_row(n, k))).collect()
}

/// Flat CSV view of a geodesic row.
#[derive(Serialize)]
pub struct GeodesicCsv {
    pub n: u32,
    pub k: u32,
    pub twist_power_expected: String,
    pub twist_power_status: &'static str,
    pub twist_power_length: String,
    pub w_phi_expected: String,
    pub w_phi_status: &'static str,
    pub w_phi_length: String,
    pub w_v_expected: String,
    pub w_v_status: &'static str,
    pub w_v_length: String,
    pub phi_u_expected: String,
    pub phi_u_status: &'static str,
    pub phi_u_length: String,
    pub full_twist_status: &'static str,
    pub full_twist_length: String,
    pub split_sum: String,
    pub sum_identity: bool,
}

impl From<&GeodesicRow> for GeodesicCsv {
    fn from(r: &GeodesicRow) -> Self {
        let blank = Entry { expected: String::new(), status: "n/a", length: String::new(), matches: true };
        let wv = r.w_v.clone().unwrap_or(blank);
        GeodesicCsv {
            n: r.n,
            k: r.k,
            twist_power_expected: r.twist_power.expected.clone(),
            twist_power_status: r.twist_power.status,
            twist_power_length: r.twist_power.length.clone(),
            w_phi_expected: r.w_phi.expected.clone(),
            w_phi_status: r.w_phi.status,
            w_phi_length: r.w_phi.length.clone(),
            w_v_expected: wv.expected,
            w_v_status: wv.status,
            w_v_length: wv.length,
            phi_u_expected: r.phi_u.expected.clone(),
            phi_u_status: r.phi_u.status,
            phi_u_length: r.phi_u.length.clone(),
            full_twist_status: r.full_twist.status,
            full_twist_length: r.full_twist.length.clone(),
            split_sum: r.split_sum.clone(),
            sum_identity: r.sum_identity,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowReport {
    pub n: u32,
    pub k: u32,
    pub geodesic: String,
    pub geodesic_length: String,
    pub geodesic_certified: bool,
    pub start_shadow: Curve,
    pub end_shadow: Curve,
    pub endpoints_equal: bool,
    /// The vertex `w_(k-1) phi^(-k/5)` on the geodesic and its shadow.
    pub midpoint: String,
    pub midpoint_shadow: Curve,
    pub midpoint_intersection: String,
    pub midpoint_kind: Kind,
    /// Shadow of `phi^(k/5) u_k` agrees with that of `phi^(k/5)`.
    pub phi_u_shadow_matches: bool,
    pub excursion_lower: u32,
    pub refuted: Vec<QgCell>,
}

impl ShadowReport {
    pub fn pass(&self) -> bool {
        self.geodesic_certified && self.endpoints_equal && self.phi_u_shadow_matches && self.excursion_lower >= 3
    }
}

pub fn shadow_qg(n: u32, k: u32, ks: &[Rational], cs: &[Rational]) -> ShadowReport {
    let geo = full_twist_geodesic(n, k);
    let full = Word::twist_power(1, pow(n, k));
    let cert = exact_length_certificate(&full, &geo, n);
    let start = shadow(&Word::identity(), n);
    let end = shadow(&full, n);
    let mid_word = target_w_phi(n, k - 1);
    let mid = shadow(&mid_word, n);
    let a1 = Curve::alpha(1);
    let fc = fills(&a1, &mid);
    let phi_u_ok = shadow(&target_phi_u(n, k), n) == shadow(&phi_prefix(k as i64), n);
    let endpoints_equal = start == end && start == a1;
    ShadowReport {
        n,
        k,
        geodesic: geo.to_string(),
        geodesic_length: geo.length().to_string(),
        geodesic_certified: cert.is_ok(),
        endpoints_equal,
        start_shadow: start,
        end_shadow: end,
        midpoint: mid_word.to_string(),
        midpoint_intersection: crate::curve::intersection(&a1, &mid).to_string(),
        midpoint_kind: fc.kind,
        midpoint_shadow: mid,
        phi_u_shadow_matches: phi_u_ok,
        excursion_lower: fc.lower,
        refuted: qg_refutation(fc.lower, endpoints_equal, ks, cs),
    }
}

/// Smallest `k <= kmax` whose midpoint shadow fills with `alpha_1`.
pub fn first_filling_k(n: u32, kmax: u32) -> Option<u32> {
    (1..=kmax).find(|&k| fills(&Curve::alpha(1), &shadow(&target_w_phi(n, k - 1), n)).kind == Kind::Filling)
}

#[derive(Clone, Debug, Serialize)]
pub struct TrainTrackReport {
    pub matrix: tt::Matrix,
    pub invariant_subspace: bool,
    pub constraint_eigenvalue: Option<i64>,
    pub square_positive: bool,
    pub char_poly: Vec<String>,
    pub power_iteration: f64,
    pub power_residual: f64,
    pub sturm_lo: String,
    pub sturm_hi: String,
    pub closed_form: f64,
    pub closed_form_text: &'static str,
    pub eigen_error: f64,
    pub tol: f64,
    pub closed_form_in_bracket: bool,
    pub growth: Vec<tt::GrowthRow>,
    pub growth_k: u32,
    pub growth_rel_error: f64,
}

impl TrainTrackReport {
    pub fn pass(&self) -> bool {
        self.invariant_subspace
            && self.square_positive
            && self.eigen_error <= self.tol
            && self.closed_form_in_bracket
            && self.growth_rel_error <= 0.01
    }
}

pub fn traintrack_verify(tol: f64, growth_k: u32) -> TrainTrackReport {
    let a = tt::phi_matrix();
    let eig = tt::dominant_eigenvalue(&a, 1e-13);
    let (power, residual) = eig.as_ref().map(|e| (e.value, e.residual)).unwrap_or((f64::NAN, f64::NAN));
    let quartic = tt::restricted_char_poly(&a).unwrap_or_default();
    let bracket = tt::largest_root(&quartic, 35, 60);
    let closed = tt::closed_form_lambda();
    let (lo, hi) = bracket.as_ref().map(|b| (b.lo.clone(), b.hi.clone())).unzip();
    let in_bracket = bracket.as_ref().is_some_and(|b| b.lo.to_f64().unwrap() - 1e-12 <= closed && closed <= b.hi.to_f64().unwrap() + 1e-12);
    let growth = tt::stretch_from_intersections(growth_k);
    let g = growth.last().map(|r| r.ratio).unwrap_or(f64::NAN);
    TrainTrackReport {
        invariant_subspace: tt::check_invariant_subspace(&a),
        constraint_eigenvalue: tt::constraint_eigenvalue(&a),
        square_positive: tt::perron_frobenius_check(&a),
        char_poly: tt::char_poly(&a).iter().map(|c| c.to_string()).collect(),
        power_iteration: power,
        power_residual: residual,
        sturm_lo: lo.map(|x| x.to_string()).unwrap_or_default(),
        sturm_hi: hi.map(|x| x.to_string()).unwrap_or_default(),
        closed_form: closed,
        closed_form_text: tt::CLOSED_FORM_TEXT,
        eigen_error: (power - closed).abs(),
        tol,
        closed_form_in_bracket: in_bracket,
        growth_rel_error: (g - closed).abs() / closed,
        growth,
        growth_k,
        matrix: a,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityWord {
    pub kind: &'static str,
    pub word: String,
    pub h: String,
    pub acts_trivially: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceCase {
    pub conjugator: String,
    pub index: u8,
    pub image: Curve,
    pub matches: bool,
    pub type_preserved: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    pub seed: u64,
    pub n: u32,
    pub identities: Vec<IdentityWord>,
    pub h_zero: usize,
    pub trivial: usize,
    pub covariance: Vec<CovarianceCase>,
    pub lantern_found: bool,
    pub lantern_h_balanced: bool,
    pub lantern: Option<crate::curve::LanternInstance>,
}

impl RelationsReport {
    pub fn pass(&self) -> bool {
        self.h_zero == self.identities.len()
            && self.trivial == self.identities.len()
            && self.covariance.iter().all(|c| c.matches && c.type_preserved)
            && self.lantern_found
            && self.lantern_h_balanced
    }
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let gens = Gen::all();
    let mut w = Word::identity();
    for _ in 0..len {
        let g = gens[rng.gen_range(0..gens.len())];
        let e: i64 = if rng.gen_bool(0.5) { rng.gen_range(1..=3) } else { -rng.gen_range(1..=3) };
        w.push(g, e.into());
    }
    w
}

fn random_twist(rng: &mut ChaCha8Rng) -> (u8, i64) {
    let e: i64 = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    (rng.gen_range(1..=5u8), e)
}

fn conj(f: &Word, x: &Word) -> Word {
    f.concat(x).concat(&f.inverse())
}

/// Identity words from four recipes, cycled in order: commutators of
/// disjoint twists, a word against the inverse of its twist expansion,
/// conjugated commutators, and single pair letters against their spelling.
pub fn identity_words(seed: u64, count: usize, n: u32) -> Vec<(&'static str, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for t in 0..count {
        let w = match t % 4 {
            0 => {
                let (i, a) = random_twist(&mut rng);
                let j = wrap(i as i64 + if rng.gen_bool(0.5) { 1 } else { -1 });
                let b: i64 = rng.gen_range(1..=4);
                let x = Word::twist_power(i, a);
                let y = Word::twist_power(j, b);
                ("commutator", x.concat(&y).concat(&x.inverse()).concat(&y.inverse()))
            }
            1 => {
                // Pair letters do not cancel against twist letters formally.
                let len = rng.gen_range(1..=6);
                let w = random_word(&mut rng, len);
                ("expansion-cancellation", w.concat(&w.expand_pairs(n).inverse()))
            }
            2 => {
                let len = rng.gen_range(1..=3);
                let f = random_word(&mut rng, len);
                let (i, a) = random_twist(&mut rng);
                let j = wrap(i as i64 + 1);
                let x = conj(&f, &Word::twist_power(i, a));
                let y = conj(&f, &Word::twist_power(j, 1));
                ("conjugated-commutator", x.concat(&y).concat(&x.inverse()).concat(&y.inverse()))
            }
            _ => {
                let pairs: Vec<Gen> = Gen::all().into_iter().filter(|g| matches!(g, Gen::Pair(..))).collect();
                let g = pairs[rng.gen_range(0..pairs.len())];
                let Gen::Pair(i, j) = g else { unreachable!() };
                let e: i64 = rng.gen_range(1..=3);
                // s_ij^e (T_i^n T_j^-1)^-e, spelled letter by letter.
                let mut w = Word::letter(g, e);
                for _ in 0..e {
                    w.append(&Word::twist_power(j, 1).concat(&Word::twist_power(i, -(n as i64))));
                }
                ("pair-expansion", w)
            }
        };
        out.push(w);
    }
    out
}

pub fn relations_check(seed: u64, count: usize, n: u32, covariance_cases: usize) -> RelationsReport {
    let words = identity_words(seed, count, n);
    let identities: Vec<IdentityWord> = words
        .iter()
        .map(|(kind, w)| IdentityWord {
            kind,
            word: w.to_string(),
            h: w.h_value(n).to_string(),
            acts_trivially: acts_trivially(&word_moves_plain(w, n)),
        })
        .collect();
    let h_zero = identities.iter().filter(|r| r.h == "0").count();
    let trivial = identities.iter().filter(|r| r.acts_trivially).count();

    // f T_i f^-1 must act as the twist about f(alpha_i).
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut covariance = Vec::new();
    for _ in 0..covariance_cases {
        let len = rng.gen_range(1..=4);
        let f = random_word(&mut rng, len);
        let i = rng.gen_range(1..=5u8);
        let image = Curve::alpha(i).apply_word(&f, n);
        let by_word = word_moves_plain(&conj(&f, &Word::twist_power(i, 1)), n);
        let by_curve = image.twist_moves(1);
        let matches = test_family().iter().all(|c| apply_moves(&by_word, c.coords()) == apply_moves(&by_curve, c.coords()));
        let (p, q) = enclosed_pair(&image);
        let gap = (q as i64 - p as i64).rem_euclid(5);
        let type_preserved = twist_h_sign(&image) == 1 && (gap == 1 || gap == 4);
        covariance.push(CovarianceCase { conjugator: f.to_string(), index: i, image, matches, type_preserved });
    }

    let lantern = find_lantern();
    let lantern_h_balanced = lantern.as_ref().is_some_and(|l| l.h_signs[0] + l.h_signs[1] + l.h_signs[2] == l.h_signs[3]);
    RelationsReport {
        seed,
        n,
        identities,
        h_zero,
        trivial,
        covariance,
        lantern_found: lantern.is_some(),
        lantern_h_balanced,
        lantern,
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct OracleRow {
    pub n: u32,
    pub label: String,
    pub word: String,
    pub h_bound: String,
    pub result: Length,
    /// Exact value from the certificate layer, when it determines one.
    pub certified: Option<String>,
    pub agrees: Option<bool>,
}

/// Words the oracle checks by default: the table families for `k <= kmax`
/// plus one full period of the pseudo-Anosov.
pub fn oracle_targets(n: u32, kmax: u32) -> Vec<(String, Word, Vec<Word>)> {
    let mut out = Vec::new();
    for k in 1..=kmax {
        out.push((format!("twist_power k={k}"), target_twist_power(n, k), twist_power_candidates(n, k)));
        out.push((format!("w_phi k={k}"), target_w_phi(n, k), vec![geodesic_w_phi(n, k)]));
        if k % 2 == 1 {
            out.push((format!("w_v k={k}"), target_w_v(n, k).unwrap(), vec![geodesic_w_v(n, k).unwrap()]));
        }
        out.push((format!("phi_u k={k}"), target_phi_u(n, k), vec![geodesic_phi_u(n, k).unwrap()]));
    }
    out.push(("phi".into(), build_phi(1), vec![]));
    out
}

pub fn oracle_row(n: u32, label: &str, w: &Word, candidates: &[Word], max_total: u32, budget: usize, cache: Option<&Cache>) -> Result<OracleRow, OracleError> {
    let query = format!("exact_length n={n} max_total={max_total} budget={budget} word={w}");
    let result = match cache.and_then(|c| c.get::<Length>(&query)) {
        Some(r) => r,
        None => {
            let r = cayley::exact_length(w, n, max_total, budget)?;
            if let Some(c) = cache {
                // A cache write failure only costs a recomputation next time.
                let _ = c.put(&query, &r);
            }
            r
        }
    };
    let certified = if candidates.is_empty() {
        None
    } else {
        length_status(w, candidates, n, FLOW_BUDGET).exact().map(|x| x.to_string())
    };
    let agrees = match (&result, &certified) {
        (Length::Exact { length, .. }, Some(c)) => Some(length.to_string() == *c),
        _ => None,
    };
    Ok(OracleRow { n, label: label.into(), word: w.to_string(), h_bound: word_lower_bound(w, n).bound.to_string(), result, certified, agrees })
}

#[derive(Serialize)]
pub struct OracleCsv {
    pub n: u32,
    pub label: String,
    pub word: String,
    pub h_bound: String,
    pub oracle_length: String,
    pub geodesics: String,
    pub sample: String,
    pub certified: String,
    pub agrees: String,
}

impl From<&OracleRow> for OracleCsv {
    fn from(r: &OracleRow) -> Self {
        let (oracle_length, geodesics, sample) = match &r.result {
            Length::Exact { length, geodesics, sample } => (length.to_string(), geodesics.to_string(), sample.clone()),
            Length::Unknown { at_least } => (format!(">={at_least}"), String::new(), String::new()),
        };
        OracleCsv {
            n: r.n,
            label: r.label.clone(),
            word: r.word.clone(),
            h_bound: r.h_bound.clone(),
            oracle_length,
            geodesics,
            sample,
            certified: r.certified.clone().unwrap_or_default(),
            agrees: r.agrees.map(|a| a.to_string()).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub ball: Option<BallSummary>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.agrees != Some(false)) && self.ball.as_ref().is_none_or(|b| b.bound_violations == 0)
    }
}

pub fn bfs_oracle(n: u32, kmax: u32, radius: Option<u32>, max_total: u32, budget: usize, cache: Option<&Cache>) -> Result<OracleReport, OracleError> {
    let mut rows = Vec::new();
    for (label, w, cands) in oracle_targets(n, kmax) {
        rows.push(oracle_row(n, &label, &w, &cands, max_total, budget, cache)?);
    }
    let ball = match radius {
        Some(r) => Some(cayley::summarize(&cayley::ball(r, n, budget)?)),
        None => None,
    };
    Ok(OracleReport { rows, ball })
}

/// Flat CSV view of an axis row; rationals as `a/b`, floats with a
/// tolerance-free decimal rendering in columns marked `_approx`.
#[derive(Serialize)]
pub struct AxisCsv {
    pub i: u32,
    pub k: String,
    pub v_norm: String,
    pub v_certified: bool,
    pub p_lower: String,
    pub p_upper: String,
    pub lemma_min_excess: i64,
    pub r_lower_minus_delta: i64,
    pub gap_allowance: String,
    pub r_minus_delta: String,
    pub ln_r_approx: String,
    pub a_p: String,
    pub a_p_literal: String,
    pub a_q: String,
    pub bound: String,
    pub bound_expanded_equal: bool,
    pub ratio_approx: String,
}

impl From<&AxisRow> for AxisCsv {
    fn from(r: &AxisRow) -> Self {
        AxisCsv {
            i: r.i,
            k: r.k.to_string(),
            v_norm: r.v_norm.to_string(),
            v_certified: r.v_certified,
            p_lower: r.p_lower.to_string(),
            p_upper: r.p_upper.to_string(),
            lemma_min_excess: r.lemma_min_excess,
            r_lower_minus_delta: r.r_lower_offset,
            gap_allowance: r.gap_allowance.to_string(),
            r_minus_delta: r.r_offset.to_string(),
            ln_r_approx: format!("{:.6}", r.ln_r),
            a_p: r.a_p.to_string(),
            a_p_literal: r.a_p_literal.to_string(),
            a_q: r.a_q.to_string(),
            bound: r.bound.to_string(),
            bound_expanded_equal: r.bound == r.bound_expanded,
            ratio_approx: format!("{:.9}", r.ratio),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisReport {
    pub params: ProjectionParams,
    pub rows: Vec<AxisRow>,
    pub verdict: AxisVerdict,
    /// First index with a positive bound, scanning a little further.
    pub first_positive: Option<u32>,
}

pub fn axis_projection(p: &ProjectionParams, is: &[u32]) -> Result<AxisReport, axis::AxisError> {
    let rows = axis::axis_table(p, is.iter().copied())?;
    let verdict = axis::verdict(&rows);
    let last = is.iter().copied().max().unwrap_or(0);
    Ok(AxisReport { params: p.clone(), rows, verdict, first_positive: axis::first_positive(p, last.max(8)) })
}

pub mod emit {
    //! CSV and JSON writers. CSV columns follow struct field order.

    use serde::Serialize;

    pub fn csv<T: Serialize>(rows: &[T]) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
        let mut s = serde_json::to_string_pretty(value).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Parse `1,2,5..8` style lists.
pub fn parse_list(s: &str) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u32, u32) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            if a > b {
                return None;
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().ok()?);
        }
    }
    (!out.is_empty()).then_some(out)
}

/// Exact length reported by the oracle, if any.
pub fn oracle_length(r: &OracleRow) -> Option<u32> {
    match r.result {
        Length::Exact { length, .. } => Some(length),
        Length::Unknown { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_row_small() {
        let r = geodesic_row(3, 2);
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.w_phi.length, "5");
        assert_eq!(r.phi_u.length, "4");
        assert_eq!(r.twist_power.length, "4");
        let r = geodesic_row(3, 1);
        assert_eq!(r.w_phi.length, "1");
        assert!(r.sum_identity);
        assert!(!r.twist_power.matches);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("1,3..5"), Some(vec![1, 3, 4, 5]));
        assert_eq!(parse_list("5..3"), None);
        assert_eq!(parse_list(""), None);
    }

    #[test]
    fn identity_words_are_identities() {
        let r = relations_check(7, 20, 3, 5);
        assert!(r.pass(), "{:?}", r.identities.iter().find(|x| !x.acts_trivially));
    }
}
