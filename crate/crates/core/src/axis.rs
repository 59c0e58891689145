//! Certified inequality chain for the projection of balls around
//! `w_k = T1^(m_k)` onto the quasi-axis of the pseudo-Anosov.
//!
//! Axis points are prefixes `phi^(j/5)`, so positions are tracked by the
//! letter count `j` and reported as the rational `j/5`. The distance
//! `Delta_k = ||w_k phi^(-(k+1)/5)||` has `n^(k+1)` digits for the default
//! sequence, so every length here is stored as an offset from `Delta_k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::exact_length_certificate;
use crate::words::{build_mk, pow, Gen, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxisError {
    #[error("need sigma > 5 d1 / (n - 1); got sigma = {sigma}, threshold = {threshold}")]
    ParamsInvalid { sigma: String, threshold: String },
    #[error("n must be at least 3 for the pair generators to lower the h-bound")]
    BadN,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionParams {
    pub n: u32,
    pub d1: BigRational,
    pub d2: BigRational,
    pub sigma: BigRational,
    pub delta: BigRational,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

impl Default for ProjectionParams {
    fn default() -> Self {
        ProjectionParams { n: 12, d1: q(2), d2: q(1), sigma: q(1), delta: q(10) }
    }
}

impl ProjectionParams {
    pub fn threshold(&self) -> BigRational {
        q(5) * &self.d1 / q(self.n as i64 - 1)
    }

    pub fn validate(&self) -> Result<(), AxisError> {
        if self.n < 3 {
            return Err(AxisError::BadN);
        }
        let t = self.threshold();
        if self.sigma <= t {
            return Err(AxisError::ParamsInvalid { sigma: self.sigma.to_string(), threshold: t.to_string() });
        }
        Ok(())
    }
}

/// `k_i = 2 n^i - 3`.
pub fn sequence_k(n: u32, i: u32) -> BigInt {
    BigInt::from(2) * pow(n, i) - 3
}

/// Smallest value of `t + |e - t(n-1)|` over integers `t`. A word with
/// `h = (n-1) Delta + e` has h-bound `Delta + excess(e)` once `Delta` is
/// large enough that the optimal quotient stays positive.
pub fn excess(e: i64, n: u32) -> i64 {
    let d = n as i64 - 1;
    let t0 = Integer::div_floor(&e, &d);
    (t0 - 1..=t0 + 2).map(|t| t + (e - t * d).abs()).min().unwrap()
}

/// Bounds for `||w_k phi^(-j/5)||`, as offsets from `Delta_k`. The lower
/// offset is the h-bound; the upper offset is known only at `j = k + 1`,
/// where an explicit spelling meets it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisBracket {
    pub j: i64,
    pub lower_offset: i64,
    pub upper_offset: Option<i64>,
}

pub fn bracket(k: i64, j: i64, n: u32) -> AxisBracket {
    AxisBracket { j, lower_offset: excess(k + 1 - j, n), upper_offset: (j == k + 1).then_some(0) }
}

/// Smallest h-excess over every axis point strictly before `phi^(k/5)`.
/// Positive means all of them are strictly farther than `Delta_k`, so the
/// nearest point satisfies `p >= k/5`.
pub fn lemma_scan(k: i64, n: u32) -> i64 {
    (0..k).map(|j| excess(k + 1 - j, n)).min().unwrap_or(i64::MAX)
}

/// `Delta_k = sum_{j<k} m_j = (n^(k+1) - (k+1) n + k) / (n-1)^2`.
pub fn delta_exact(n: u32, k: u32) -> BigInt {
    let nn = BigInt::from(n);
    (pow(n, k + 1) - BigInt::from(k + 1) * &nn + k) / ((&nn - 1) * (&nn - 1))
}

/// Natural log of `Delta_k + offset` without forming `n^(k+1)` when it
/// would not fit a double.
pub fn ln_delta_plus(n: u32, k: &BigInt, offset: &BigRational) -> f64 {
    if let Some(small) = k.to_u32().filter(|&k| k < 200) {
        let v = BigRational::from_integer(delta_exact(n, small)) + offset;
        return v.to_f64().unwrap().ln();
    }
    // Relative corrections are below n^(-k), far under double precision.
    let kf = k.to_f64().unwrap();
    (kf + 1.0) * (n as f64).ln() - 2.0 * ((n - 1) as f64).ln()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisRow {
    pub i: u32,
    pub k: BigInt,
    /// `||v_k||` and whether an explicit spelling met the h-bound.
    pub v_norm: BigInt,
    pub v_certified: bool,
    pub p_lower: BigRational,
    pub p_upper: BigRational,
    pub lemma_min_excess: i64,
    /// `R_lower - Delta_k`, minimised over the bracket.
    pub r_lower_offset: i64,
    /// `(5 p_upper - k) / (n - 1)`, the allowed gap `Delta_k - R`.
    pub gap_allowance: BigRational,
    /// `r_i - Delta_k` with `r_i = R_lower - delta - 1`.
    pub r_offset: BigRational,
    pub ln_r: f64,
    pub dist_p_x0: BigRational,
    pub a_p: BigRational,
    /// Constant obtained when the first step uses `d(p, x0)` in place of
    /// `d(id, x0)`; that reading also carries an extra `5p/(n-1)`.
    pub a_p_literal: BigRational,
    pub a_q: BigRational,
    pub bound: BigRational,
    /// `p (sigma - 5 d1/(n-1)) - A_p - A_q`, which must equal `bound`.
    pub bound_expanded: BigRational,
    pub ratio: f64,
}

/// `||v_k||` for `k = 2n^i - 3`: `v_k^-1 = T1^a T2^a` with `a = n^i - 1`
/// equals `s12^m s21^m` for `m = a/(n-1) = m_(i-1)`, which meets the
/// h-bound `2m`.
pub fn v_norm(n: u32, i: u32) -> (BigInt, bool) {
    let a: BigInt = pow(n, i) - 1;
    let m = build_mk(n, i as i64 - 1);
    let target = Word::twist_power(1, -a.clone()).concat(&Word::twist_power(2, -a));
    let spelled = Word::from_runs([(Gen::Pair(1, 2), m.clone()), (Gen::Pair(2, 1), m.clone())]).inverse();
    let ok = exact_length_certificate(&target, &spelled, n).is_ok();
    (BigInt::from(2) * m, ok)
}

pub fn axis_row(p: &ProjectionParams, i: u32) -> AxisRow {
    let n = p.n;
    let k_big = sequence_k(n, i);
    let k = k_big.to_i64().expect("k_i beyond 64 bits");
    let nm1 = q(n as i64 - 1);
    let (v_norm, v_certified) = v_norm(n, i);

    let p_lower = BigRational::new(k.into(), 5.into());
    let p_upper = BigRational::new((k + 1).into(), 5.into());
    let r_lower_offset = [k, k + 1].iter().map(|&j| bracket(k, j, n).lower_offset).min().unwrap();
    let gap_allowance = (q(5) * &p_upper - q(k)) / &nm1;
    let r_offset = q(r_lower_offset) - &p.delta - q(1);
    let ln_r = ln_delta_plus(n, &k_big, &r_offset);

    // Point p sits on the geodesic from w_k to v_k at distance r from w_k.
    let five = q(5);
    let d_p_v = q(-r_lower_offset) + &p.delta + q(1);
    let d_id_p = BigRational::from_integer(v_norm.clone()) + d_p_v;
    let dist_p_x0 = &d_id_p + &p.delta;
    // d(id, Pr(p)) <= d(id, x0) + d1 d(x0, p) + d2.
    let d_id_proj_p = &p.delta + &p.d1 * &dist_p_x0 + &p.d2;
    let slope = &five * &p.d1 / &nm1;
    let a_p = &d_id_proj_p - &slope * &p_lower;
    let a_p_literal = &dist_p_x0 + &p.d1 * &dist_p_x0 + &p.d2 - &five * (&p.d1 + q(1)) * &p_lower / &nm1;
    // d(phi^p, Pr(q)) <= d(phi^p, x1) + d1 d(x1, q) + d2 with d(q, x1) <= 2 delta + 1.
    let a_q = &p.delta + &p.d1 * (q(2) * &p.delta + q(1)) + &p.d2;
    let bound = &p.sigma * &p_lower - &d_id_proj_p - &a_q;
    let bound_expanded = &p_lower * (&p.sigma - &slope) - &a_p - &a_q;
    let ratio = bound.to_f64().unwrap() / ln_r;

    AxisRow {
        i,
        k: k_big,
        v_norm,
        v_certified,
        p_lower,
        p_upper,
        lemma_min_excess: lemma_scan(k, n),
        r_lower_offset,
        gap_allowance,
        r_offset,
        ln_r,
        dist_p_x0,
        a_p,
        a_p_literal,
        a_q,
        bound,
        bound_expanded,
        ratio,
    }
}

pub fn axis_table(p: &ProjectionParams, is: impl IntoIterator<Item = u32>) -> Result<Vec<AxisRow>, AxisError> {
    p.validate()?;
    Ok(is.into_iter().map(|i| axis_row(p, i)).collect())
}

/// Whether the rows satisfy the shape the chain predicts: the p-bracket
/// sits at or past `k/5`, bounds are positive and strictly increasing, and
/// bound over `ln r` stays between positive constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisVerdict {
    pub lemma_holds: bool,
    pub gap_within_allowance: bool,
    pub expansion_matches: bool,
    pub v_certified: bool,
    pub positive: bool,
    pub increasing: bool,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

impl AxisVerdict {
    pub fn all_pass(&self) -> bool {
        self.lemma_holds
            && self.gap_within_allowance
            && self.expansion_matches
            && self.v_certified
            && self.positive
            && self.increasing
            && self.ratio_min > 0.0
    }
}

pub fn verdict(rows: &[AxisRow]) -> AxisVerdict {
    let zero = BigRational::zero();
    AxisVerdict {
        lemma_holds: rows.iter().all(|r| r.lemma_min_excess > 0 && &r.p_lower * q(5) >= BigRational::from_integer(r.k.clone())),
        gap_within_allowance: rows.iter().all(|r| q(-r.r_lower_offset) <= r.gap_allowance),
        expansion_matches: rows.iter().all(|r| r.bound == r.bound_expanded),
        v_certified: rows.iter().all(|r| r.v_certified && r.v_norm.is_positive()),
        positive: rows.iter().all(|r| r.bound > zero),
        increasing: rows.windows(2).all(|w| w[0].bound < w[1].bound),
        ratio_min: rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min),
        ratio_max: rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Smallest `i` whose bound is positive under `p`, scanning up to `imax`.
pub fn first_positive(p: &ProjectionParams, imax: u32) -> Option<u32> {
    (1..=imax).find(|&i| axis_row(p, i).bound > BigRational::zero())
}

/// Rational from `a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(a.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{length_lower_bound, phi_prefix, target_w_phi};

    #[test]
    fn excess_matches_the_h_bound() {
        // Delta large enough that the quotient stays positive.
        for n in [3u32, 4, 12] {
            let delta = 1000i64;
            for e in -40..40 {
                let h = BigInt::from((n as i64 - 1) * delta + e);
                let b = length_lower_bound(&h, n).bound.to_i64().unwrap();
                assert_eq!(b - delta, excess(e, n), "n={n} e={e}");
            }
        }
    }

    #[test]
    fn delta_closed_form() {
        for n in [3u32, 5, 12] {
            for k in 1..8u32 {
                let direct: BigInt = (0..k as i64).map(|j| build_mk(n, j)).sum();
                assert_eq!(delta_exact(n, k), direct);
                let h = target_w_phi(n, k).h_value(n);
                assert_eq!(h, BigInt::from(n - 1) * direct);
            }
        }
    }

    #[test]
    fn bracket_against_words() {
        // Small k: compare offsets with the h-bound of the actual word.
        let (n, k) = (4u32, 6i64);
        let delta = delta_exact(n, k as u32);
        let w = Word::twist_power(1, build_mk(n, k));
        for j in 0..=k + 3 {
            let h = w.concat(&phi_prefix(-j)).h_value(n);
            let b = length_lower_bound(&h, n).bound;
            assert_eq!(b - &delta, BigInt::from(bracket(k, j, n).lower_offset), "j={j}");
        }
    }

    #[test]
    fn v_norm_is_certified() {
        for i in 1..=4 {
            let (v, ok) = v_norm(12, i);
            assert!(ok);
            assert_eq!(v, (sequence_k(12, i) + 1) / 11);
        }
    }

    #[test]
    fn default_table_shape() {
        let rows = axis_table(&ProjectionParams::default(), 1..=6).unwrap();
        let v = verdict(&rows);
        assert!(v.lemma_holds && v.gap_within_allowance && v.expansion_matches && v.v_certified);
        assert!(v.increasing);
        assert_eq!(first_positive(&ProjectionParams::default(), 6), Some(4));
    }

    #[test]
    fn rejects_small_sigma() {
        let p = ProjectionParams { sigma: BigRational::new(10.into(), 11.into()), ..Default::default() };
        assert!(matches!(p.validate(), Err(AxisError::ParamsInvalid { .. })));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/6"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_rational("-4"), Some(q(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
