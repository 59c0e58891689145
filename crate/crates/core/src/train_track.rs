//! The carrying matrix of the pseudo-Anosov on its invariant train track,
//! with exact checks of the weight constraint and primitivity and a
//! certified bracket for the stretch factor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{intersection, Curve};
use crate::words::phi_prefix;

pub type Matrix = Vec<Vec<i64>>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainTrackError {
    #[error("power iteration did not reach residual {tol} within {iters} steps (last {residual})")]
    NoConvergence { tol: f64, iters: usize, residual: f64 },
    #[error("matrix is not square or is empty")]
    BadShape,
}

/// Weights ordered (a, b, c, d, e).
pub fn phi_matrix() -> Matrix {
    vec![
        vec![3, 2, 0, 0, 2],
        vec![6, 3, 6, 4, 0],
        vec![4, 2, 3, 2, 0],
        vec![12, 8, 6, 3, 6],
        vec![6, 4, 4, 2, 3],
    ]
}

/// Switch condition `a + b + e = c + d` as a row functional.
pub const CONSTRAINT: [i64; 5] = [1, 1, -1, -1, 1];

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

/// The kernel of the constraint is invariant iff `f A` is a multiple of `f`.
/// Returns that multiple when it exists.
pub fn constraint_eigenvalue(a: &Matrix) -> Option<i64> {
    let f = CONSTRAINT;
    let fa: Vec<i64> = (0..5).map(|j| (0..5).map(|i| f[i] * a[i][j]).sum()).collect();
    let c = fa[0] * f[0];
    (fa.iter().zip(f).all(|(x, y)| *x == c * y)).then_some(c)
}

pub fn check_invariant_subspace(a: &Matrix) -> bool {
    a.len() == 5 && a.iter().all(|r| r.len() == 5) && constraint_eigenvalue(a).is_some()
}

/// Every entry of `A^2` is positive.
pub fn perron_frobenius_check(a: &Matrix) -> bool {
    a.iter().flatten().all(|&x| x >= 0) && mat_mul(a, a).iter().flatten().all(|&x| x > 0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Eigen {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `|A v - value v| / |v|`.
    pub residual: f64,
    pub iterations: usize,
}

pub fn dominant_eigenvalue(a: &Matrix, tol: f64) -> Result<Eigen, TrainTrackError> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(TrainTrackError::BadShape);
    }
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let apply = |v: &[f64]| -> Vec<f64> { (0..n).map(|i| (0..n).map(|j| a[i][j] as f64 * v[j]).sum()).collect() };
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut residual = f64::INFINITY;
    const CAP: usize = 10_000;
    for it in 1..=CAP {
        let av = apply(&v);
        let lambda: f64 = av.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
        let r: Vec<f64> = av.iter().zip(&v).map(|(x, y)| x - lambda * y).collect();
        residual = norm(&r) / norm(&v);
        if residual <= tol {
            return Ok(Eigen { value: lambda, vector: v, residual, iterations: it });
        }
        let s = norm(&av);
        v = av.into_iter().map(|x| x / s).collect();
    }
    Err(TrainTrackError::NoConvergence { tol, iters: CAP, residual })
}

/// Integer polynomial, coefficients from the constant term up.
pub type Poly = Vec<BigInt>;

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier.
pub fn char_poly(a: &Matrix) -> Poly {
    let n = a.len();
    let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|t| &x[i][t] * &y[t][j]).sum()).collect()).collect()
    };
    // M_0 = 0, c_n = 1; M_k = A M_(k-1) + c_(n-k+1) I; c_(n-k) = -tr(A M_k)/k.
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(&big, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mul(&big, &m);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / BigInt::from(k);
    }
    coeffs
}

/// Divide by the monic linear factor `x - root`; the remainder must vanish.
pub fn deflate(p: &Poly, root: i64) -> Option<Poly> {
    let deg = p.len() - 1;
    let mut q = vec![BigInt::zero(); deg];
    let mut carry = BigInt::zero();
    for i in (1..=deg).rev() {
        carry = &p[i] + carry * root;
        q[i - 1] = carry.clone();
    }
    let rem = &p[0] + carry * root;
    rem.is_zero().then_some(q)
}

type RPoly = Vec<BigRational>;

fn trim(mut p: RPoly) -> RPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rem(a: &RPoly, b: &RPoly) -> RPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let f = &r[dr] / &lead;
        for i in 0..=db {
            let t = &f * &b[i];
            r[dr - db + i] -= t;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
    }
    trim(r)
}

fn eval(p: &RPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sturm_chain(p: &Poly) -> Vec<RPoly> {
    let p: RPoly = p.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let dp: RPoly = (1..p.len()).map(|i| &p[i] * BigRational::from_integer(BigInt::from(i))).collect();
    let mut chain = vec![trim(p), trim(dp)];
    loop {
        let n = chain.len();
        let r = rem(&chain[n - 2], &chain[n - 1]);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[RPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn roots_in(p: &Poly, lo: &BigRational, hi: &BigRational) -> usize {
    let chain = sturm_chain(p);
    sign_changes(&chain, lo) - sign_changes(&chain, hi)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootBracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootBracket {
    pub fn mid_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }
}

/// Bisect the largest real root of `p` below `upper` to width `2^-bits`,
/// certifying by Sturm counts that it is isolated.
pub fn largest_root(p: &Poly, upper: i64, bits: u32) -> Option<RootBracket> {
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut hi = r(upper);
    let mut lo = r(upper);
    let chain = sturm_chain(p);
    let total_above = sign_changes(&chain, &hi);
    // Walk down in unit steps until a root appears in (lo, hi].
    let mut found = false;
    for _ in 0..(2 * upper + 2) {
        let next = &lo - r(1);
        if sign_changes(&chain, &next) > total_above {
            hi = lo.clone();
            lo = next;
            found = true;
            break;
        }
        lo = next;
    }
    if !found {
        return None;
    }
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / r(2);
        if sign_changes(&chain, &mid) > sign_changes(&chain, &hi) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(RootBracket { lo, hi })
}

/// `sqrt(13) + 2 sqrt(2 sqrt(13) + 7) + 4`.
pub fn closed_form_lambda() -> f64 {
    let s = 13f64.sqrt();
    s + 2.0 * (2.0 * s + 7.0).sqrt() + 4.0
}

pub const CLOSED_FORM_TEXT: &str = "sqrt(13) + 2*sqrt(2*sqrt(13) + 7) + 4";

/// The quartic factor of the characteristic polynomial that governs the
/// action on the constraint subspace.
pub fn restricted_char_poly(a: &Matrix) -> Option<Poly> {
    let c = constraint_eigenvalue(a)?;
    deflate(&char_poly(a), c)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthRow {
    pub k: u32,
    pub i_k: BigInt,
    pub i_next: BigInt,
    pub ratio: f64,
}

/// Ratios `i(phi^(k+1) a1, a1) / i(phi^k a1, a1)` for `k = 1..=kmax`; the
/// k = 0 term is skipped since `i(a1, a1) = 0`.
pub fn stretch_from_intersections(kmax: u32) -> Vec<GrowthRow> {
    let phi = phi_prefix(5);
    let a1 = Curve::alpha(1);
    let mut cur = a1.apply_word(&phi, 2);
    let mut prev = intersection(&a1, &cur);
    let mut out = Vec::new();
    for k in 1..=kmax {
        cur = cur.apply_word(&phi, 2);
        let next = intersection(&a1, &cur);
        let ratio = BigRational::new(next.clone(), prev.clone()).to_f64().unwrap_or(f64::NAN);
        out.push(GrowthRow { k, i_k: prev.clone(), i_next: next.clone(), ratio });
        prev = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> Matrix {
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    }

    #[test]
    fn matrix_rows_and_column_sums() {
        let a = phi_matrix();
        assert_eq!(a[0], vec![3, 2, 0, 0, 2]);
        assert_eq!(a[3], vec![12, 8, 6, 3, 6]);
        let cols: Vec<i64> = (0..5).map(|j| a.iter().map(|r| r[j]).sum()).collect();
        assert_eq!(cols, vec![31, 19, 19, 11, 11]);
    }

    #[test]
    fn constraint_checks() {
        assert!(check_invariant_subspace(&phi_matrix()));
        assert_eq!(constraint_eigenvalue(&phi_matrix()), Some(-1));
        assert!(check_invariant_subspace(&identity(5)));
        let mut bad = phi_matrix();
        bad[0][0] += 1;
        assert!(!check_invariant_subspace(&bad));
        assert!(perron_frobenius_check(&phi_matrix()));
        assert!(!perron_frobenius_check(&identity(5)));
        assert!(perron_frobenius_check(&vec![vec![1; 3]; 3]));
    }

    #[test]
    fn characteristic_polynomial_factors() {
        let p = char_poly(&phi_matrix());
        let want: Vec<BigInt> = [1, -15, -2, -2, -15, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(p, want);
        let q = restricted_char_poly(&phi_matrix()).unwrap();
        let want: Vec<BigInt> = [1, -16, 14, -16, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(q, want);
    }

    #[test]
    fn eigenvalue_agrees_with_closed_form() {
        let e = dominant_eigenvalue(&phi_matrix(), 1e-12).unwrap();
        assert!((e.value - closed_form_lambda()).abs() < 1e-9);
        let br = largest_root(&char_poly(&phi_matrix()), 35, 60).unwrap();
        assert!(br.lo <= BigRational::new(BigInt::from(151450745), BigInt::from(10_000_000)));
        assert!((br.mid_f64() - closed_form_lambda()).abs() < 1e-12);
        let g = dominant_eigenvalue(&vec![vec![2, 1], vec![1, 1]], 1e-12).unwrap();
        assert!((g.value - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
        let twice: Matrix = phi_matrix().iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
        let e2 = dominant_eigenvalue(&twice, 1e-12).unwrap();
        assert!((e2.value - 2.0 * e.value).abs() < 1e-9);
    }

    #[test]
    fn growth_ratio_approaches_lambda() {
        let rows = stretch_from_intersections(10);
        let last = rows.last().unwrap();
        assert!((last.ratio / closed_form_lambda() - 1.0).abs() < 0.01);
        assert!(rows.iter().all(|r| r.ratio > 0.0 && r.ratio.is_finite()));
    }
}
