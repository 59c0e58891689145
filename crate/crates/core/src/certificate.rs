//! Exact word-length certificates: an h-value lower bound met by an explicit
//! spelling, with the spelling checked against the target on the curve model.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{apply_moves, test_family, word_moves_plain};
use crate::words::{self, word_lower_bound, LowerBound, TightFlow, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("candidate and target act differently on the test curves")]
    IdentityMismatch,
    #[error("lower bound {lower} is below the candidate length {upper}")]
    GapRemains { lower: BigInt, upper: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthCertificate {
    pub n: u32,
    pub length: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub identity_checked: bool,
}

/// Both words are applied run by run, without the commutation merge, so the
/// identity check really exercises the curve action.
pub fn same_element(a: &Word, b: &Word, n: u32) -> bool {
    let (ma, mb) = (word_moves_plain(a, n), word_moves_plain(b, n));
    test_family().iter().all(|c| apply_moves(&ma, c.coords()) == apply_moves(&mb, c.coords()))
}

pub fn exact_length_certificate(target: &Word, candidate: &Word, n: u32) -> Result<LengthCertificate, CertError> {
    if !same_element(target, candidate, n) {
        return Err(CertError::IdentityMismatch);
    }
    let LowerBound { q, r, bound } = word_lower_bound(target, n);
    let len = candidate.length();
    if len != bound {
        return Err(CertError::GapRemains { lower: bound, upper: len });
    }
    Ok(LengthCertificate { n, length: len, q, r, identity_checked: true })
}

/// What is known about a word length after trying to certify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LengthStatus {
    Certified { length: BigInt },
    /// The h-bound is unattainable (abelian obstruction); the true length
    /// lies in `[lower, upper]`.
    Refuted { h_bound: BigInt, lower: BigInt, upper: BigInt },
    Open { lower: BigInt, upper: BigInt },
    Mismatch,
}

impl LengthStatus {
    pub fn is_certified(&self) -> bool {
        matches!(self, LengthStatus::Certified { .. })
    }

    pub fn exact(&self) -> Option<&BigInt> {
        match self {
            LengthStatus::Certified { length } => Some(length),
            LengthStatus::Refuted { lower, upper, .. } | LengthStatus::Open { lower, upper } if lower == upper => Some(lower),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            LengthStatus::Certified { .. } => "certified",
            LengthStatus::Refuted { .. } => "h-bound-refuted",
            LengthStatus::Open { .. } => "gap",
            LengthStatus::Mismatch => "identity-mismatch",
        }
    }
}

/// Certify with the candidate, and when that leaves a gap try the abelian
/// obstruction to show the h-bound itself cannot be met.
pub fn length_status(target: &Word, candidates: &[Word], n: u32, flow_budget: u64) -> LengthStatus {
    let lb = word_lower_bound(target, n).bound;
    let mut best: Option<BigInt> = None;
    for c in candidates {
        match exact_length_certificate(target, c, n) {
            Ok(cert) => return LengthStatus::Certified { length: cert.length },
            Err(CertError::IdentityMismatch) => return LengthStatus::Mismatch,
            Err(CertError::GapRemains { upper, .. }) => {
                if best.as_ref().is_none_or(|b| upper < *b) {
                    best = Some(upper);
                }
            }
        }
    }
    let upper = best.unwrap_or_else(|| target.length());
    match words::tight_pair_flow(target, n, flow_budget) {
        TightFlow::Impossible => LengthStatus::Refuted { lower: &lb + BigInt::one(), h_bound: lb, upper },
        _ => LengthStatus::Open { lower: lb, upper },
    }
}

/// Spellings of `T1^(n^k - 1)`: the closed-walk construction when one
/// exists, otherwise an alternating walk ending at 2 followed by `T2 T1^-1`,
/// plus the trivial spelling.
pub fn twist_power_candidates(n: u32, k: u32) -> Vec<Word> {
    let mut out = Vec::new();
    if let Some(w) = words::twist_power_candidate(n, k) {
        out.push(w);
    }
    if k >= 1 {
        let walk: Vec<u8> = (0..=k).map(|s| if s % 2 == 0 { 1 } else { 2 }).collect();
        let mut w = words::walk_product(n, &walk);
        if walk[k as usize] == 2 {
            w.append(&Word::parse("T2 T1^-1").unwrap());
        } else {
            w.append(&Word::parse("T1^-1").unwrap());
        }
        out.push(w);
    }
    out.push(words::target_twist_power(n, k));
    out
}
