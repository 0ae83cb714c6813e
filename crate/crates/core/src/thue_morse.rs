//! The Thue-Morse sequence over `{-1, +1}` with `t_0 = -1`, its block and
//! balance identities, and comparison against duel sequences.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::duel::{self, DuelParams, FiringSequence};
use crate::error::{Error, Result};
use crate::numerics::rational::{serde_string, to_f64, ExactRational};
use crate::numerics::{IntPoly, SignPolynomial};
use crate::sign::PlayerSign;

/// `t_n`: Alice (`-1`) when `n` has an even number of one bits.
pub fn tm_term(n: u64) -> PlayerSign {
    if n.count_ones().is_multiple_of(2) {
        PlayerSign::Alice
    } else {
        PlayerSign::Bob
    }
}

/// A finite prefix `t_0..t_(N-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMSequence {
    terms: Vec<PlayerSign>,
}

impl TMSequence {
    pub fn new(length: usize) -> Self {
        TMSequence {
            terms: (0..length as u64).map(tm_term).collect(),
        }
    }

    pub fn terms(&self) -> &[PlayerSign] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Pairs `(t_2i, t_2i+1)`; every pair is `(-1, +1)` or `(+1, -1)`.
pub fn block_view(seq: &TMSequence) -> Result<Vec<(PlayerSign, PlayerSign)>> {
    if !seq.len().is_multiple_of(2) {
        return Err(Error::OddLength(seq.len()));
    }
    Ok(seq.terms.chunks_exact(2).map(|c| (c[0], c[1])).collect())
}

/// Maps `(-1, +1)` to `-1` and `(+1, -1)` to `+1`; `None` for a pair of
/// equal signs.
pub fn collapse_blocks(pairs: &[(PlayerSign, PlayerSign)]) -> Option<Vec<PlayerSign>> {
    pairs
        .iter()
        .map(|&(first, second)| (first != second).then_some(first))
        .collect()
}

/// `sum_{i=0}^{m} t_i`, computed by counting odd-weight integers in
/// `[0, m]`.
pub fn balanced_prefix_sum(m: u64) -> i64 {
    let total = m as i128 + 1;
    let odd = odd_weight_count(m) as i128;
    (odd - (total - odd)) as i64
}

/// Number of `k` in `[0, m]` with an odd number of one bits.
fn odd_weight_count(m: u64) -> u64 {
    // Walk the set bits of m + 1 from the top: each set bit at position b
    // opens a full block of 2^b numbers, half of them odd-weight once
    // b >= 1; for b = 0 the single number's parity is decided by the
    // prefix.
    let limit = m as u128 + 1;
    let mut count: u128 = 0;
    let mut prefix_parity = 0u32;
    for bit in (0..=64u32).rev() {
        if limit >> bit & 1 == 1 {
            count += if bit == 0 {
                u128::from(prefix_parity == 1)
            } else {
                1u128 << (bit - 1)
            };
            prefix_parity ^= 1;
        }
    }
    count as u64
}

/// Length of the longest common prefix of `signs` and Thue-Morse.
pub fn agreement_length_of(signs: &[PlayerSign]) -> usize {
    signs
        .iter()
        .enumerate()
        .take_while(|&(i, &s)| s == tm_term(i as u64))
        .count()
}

/// Agreement of a generated duel with Thue-Morse. When it equals the
/// sequence length the value is censored: no mismatch was seen inside the
/// generated window.
pub fn agreement_length(seq: &FiringSequence) -> usize {
    agreement_length_of(seq.signs())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub window: usize,
    pub agreement_length: usize,
    /// `None` when the whole window agrees.
    pub first_mismatch: Option<usize>,
}

/// Runs the duel for `window` rounds and compares it with Thue-Morse.
pub fn compare(params: DuelParams, window: usize) -> Comparison {
    let seq = duel::generate(params, window.max(1));
    let signs = &seq.signs()[..window.min(seq.len())];
    let agreement = agreement_length_of(signs);
    Comparison {
        window,
        agreement_length: agreement,
        first_mismatch: (agreement < signs.len()).then_some(agreement),
    }
}

/// `f_n` with Thue-Morse coefficients `t_n t_0, ..., t_n t_n`.
pub fn tm_f_polynomial(n: usize) -> SignPolynomial {
    let lead = tm_term(n as u64);
    SignPolynomial::new((0..=n as u64).map(|j| lead * tm_term(j)).collect()).expect("n + 1 terms")
}

/// Truncated generating function value `|sum_{i<N} t_i q^i|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Magnitude {
    #[serde(with = "serde_string")]
    pub q: ExactRational,
    #[serde(with = "serde_string")]
    pub value: ExactRational,
    /// Number of terms summed; the omitted tail is at most
    /// `q^N / (1 - q)` in absolute value.
    pub terms: usize,
}

/// `|sum_{i<N} t_i q^i|` with the smallest `N` such that
/// `q^N / (1 - q) <= tail_bound`.
pub fn tm_generating_magnitude(q: &ExactRational, tail_bound: &ExactRational) -> Result<Magnitude> {
    if !q.is_positive() || q >= &ExactRational::one() {
        return Err(Error::Domain(format!("need 0 < q < 1, got {q}")));
    }
    if !tail_bound.is_positive() {
        return Err(Error::Domain(format!("tail bound must be positive, got {tail_bound}")));
    }
    let (a, b) = (q.numer(), q.denom());
    let (tn, td) = (tail_bound.numer(), tail_bound.denom());
    // q^N / (1 - q) <= t  <=>  a^N · b · td <= tn · (b - a) · b^N
    let lhs_scale = b * td;
    let rhs_scale = tn * (b - a);
    let mut a_pow = BigInt::one();
    let mut b_pow = BigInt::one();
    let mut terms = 0usize;
    while &a_pow * &lhs_scale > &rhs_scale * &b_pow {
        a_pow *= a;
        b_pow *= b;
        terms += 1;
    }
    let coeffs = (0..terms as u64).map(|i| BigInt::from(tm_term(i).value())).collect();
    let value = IntPoly::new(coeffs).eval(q).abs();
    Ok(Magnitude { q: q.clone(), value, terms })
}

/// Least-squares fit of `ln |G(q)| = intercept - c (ln p)^2`, `p = 1 - q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub c: f64,
    pub intercept: f64,
    pub points: usize,
}

/// `None` with fewer than two usable points (zero magnitudes are skipped).
pub fn fit_log_squared_decay(samples: &[Magnitude]) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|m| !m.value.is_zero())
        .map(|m| {
            let p = to_f64(&(ExactRational::one() - &m.q));
            (p.ln().powi(2), log_abs(&m.value))
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(DecayFit {
        c: -slope,
        intercept: mean_y - slope * mean_x,
        points: pts.len(),
    })
}

/// Natural log of a positive rational without going through a possibly
/// underflowing `f64`.
pub fn log_abs(value: &ExactRational) -> f64 {
    let ln_big = |x: &BigInt| {
        let bits = x.bits();
        let shift = bits.saturating_sub(60);
        let top = (x.abs() >> shift as usize).to_f64().unwrap_or(f64::NAN);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln_big(value.numer()) - ln_big(value.denom())
}
