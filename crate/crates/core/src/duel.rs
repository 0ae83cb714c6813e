//! The greedy firing sequence and its exact win-probability table.
//!
//! Round `n` is fired by `a_n` (Alice `-1`, Bob `+1`); Alice fires round 0.
//! With `f_n(q) = a_n · sum_{j<=n} a_j q^j`, the next shooter switches
//! exactly when `f_n(q) >= 0`, i.e. when the current shooter's cumulative
//! win probability has caught up with the opponent's.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::rational::{format_rational, serde_string, ExactRational};
use crate::numerics::{Sign, SignPolynomial};
pub use crate::sign::PlayerSign;

/// Hit probability `p` and miss probability `q = 1 - p`, both in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DuelParams {
    p: ExactRational,
    q: ExactRational,
}

impl DuelParams {
    pub fn from_p(p: ExactRational) -> Result<Self> {
        if !p.is_positive() || p >= ExactRational::one() {
            return Err(Error::Domain(format!(
                "hit probability must satisfy 0 < p < 1, got p = {}",
                format_rational(&p)
            )));
        }
        let q = ExactRational::one() - &p;
        Ok(DuelParams { p, q })
    }

    pub fn from_q(q: ExactRational) -> Result<Self> {
        if !q.is_positive() || q >= ExactRational::one() {
            return Err(Error::Domain(format!(
                "miss probability must satisfy 0 < q < 1, got q = {}",
                format_rational(&q)
            )));
        }
        Self::from_p(ExactRational::one() - q)
    }

    pub fn p(&self) -> &ExactRational {
        &self.p
    }

    pub fn q(&self) -> &ExactRational {
        &self.q
    }
}

/// A prefix `a_0..a_n` of the firing sequence with the cumulative win
/// probabilities `P(A_i)`, `P(B_i)` at the end of every round.
///
/// Internally, for `q = a/b`, the sums `sum_{i in S_X} a^i b^(n-i)` are kept
/// as integers so each extension costs a constant number of big-integer
/// multiply-adds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiringSequence {
    params: DuelParams,
    signs: Vec<PlayerSign>,
    alice_win_prob: Vec<ExactRational>,
    bob_win_prob: Vec<ExactRational>,
    q_numer: BigInt,
    q_denom: BigInt,
    numer_pow: BigInt,
    denom_pow: BigInt,
    alice_scaled: BigInt,
    bob_scaled: BigInt,
}

/// Starts a duel: Alice fires round 0 and has won with probability `p`.
pub fn new_duel(params: DuelParams) -> FiringSequence {
    let q_numer = params.q.numer().clone();
    let q_denom = params.q.denom().clone();
    FiringSequence {
        signs: vec![PlayerSign::Alice],
        alice_win_prob: vec![params.p.clone()],
        bob_win_prob: vec![ExactRational::zero()],
        q_numer,
        q_denom,
        numer_pow: BigInt::one(),
        denom_pow: BigInt::one(),
        alice_scaled: BigInt::one(),
        bob_scaled: BigInt::zero(),
        params,
    }
}

/// The first `rounds` rounds of the duel (at least one).
pub fn generate(params: DuelParams, rounds: usize) -> FiringSequence {
    let mut seq = new_duel(params);
    while seq.len() < rounds {
        seq.extend();
    }
    seq
}

impl FiringSequence {
    pub fn params(&self) -> &DuelParams {
        &self.params
    }

    pub fn signs(&self) -> &[PlayerSign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn last(&self) -> PlayerSign {
        *self.signs.last().expect("a duel always has round 0")
    }

    pub fn alice_win_prob(&self) -> &[ExactRational] {
        &self.alice_win_prob
    }

    pub fn bob_win_prob(&self) -> &[ExactRational] {
        &self.bob_win_prob
    }

    /// Exact sign of `f_n(q)` for the last round `n`.
    pub fn decision_sign(&self) -> Sign {
        let running = Sign::of(&(&self.bob_scaled - &self.alice_scaled));
        match self.last() {
            PlayerSign::Bob => running,
            PlayerSign::Alice => running.flipped(),
        }
    }

    /// Appends the next round and returns its shooter.
    pub fn extend(&mut self) -> PlayerSign {
        let current = self.last();
        let next = if self.decision_sign().is_nonnegative() { -current } else { current };

        self.numer_pow *= &self.q_numer;
        self.denom_pow *= &self.q_denom;
        self.alice_scaled *= &self.q_denom;
        self.bob_scaled *= &self.q_denom;
        match next {
            PlayerSign::Alice => self.alice_scaled += &self.numer_pow,
            PlayerSign::Bob => self.bob_scaled += &self.numer_pow,
        }
        // P(X_n) = p · S_X / b^n with p = (b - a) / b
        let hit_numer = &self.q_denom - &self.q_numer;
        let full_denom = &self.denom_pow * &self.q_denom;
        match next {
            PlayerSign::Alice => {
                let prob = ExactRational::new(&hit_numer * &self.alice_scaled, full_denom);
                self.alice_win_prob.push(prob);
                self.bob_win_prob.push(self.bob_win_prob.last().unwrap().clone());
            }
            PlayerSign::Bob => {
                let prob = ExactRational::new(&hit_numer * &self.bob_scaled, full_denom);
                self.bob_win_prob.push(prob);
                self.alice_win_prob.push(self.alice_win_prob.last().unwrap().clone());
            }
        }
        self.signs.push(next);
        next
    }

    /// A copy extended by one round; `self` is untouched.
    pub fn extended(&self) -> FiringSequence {
        let mut next = self.clone();
        next.extend();
        next
    }

    /// `f_n` with coefficients `a_n a_0, ..., a_n a_n`.
    pub fn f_polynomial(&self, n: usize) -> Result<SignPolynomial> {
        let last = *self.signs.get(n).ok_or(Error::IndexOutOfRange { index: n, len: self.len() })?;
        let coeffs = self.signs[..=n].iter().map(|&a| last * a).collect();
        Ok(SignPolynomial::new(coeffs).expect("prefix is nonempty"))
    }

    pub fn table(&self) -> Vec<TableRow> {
        self.signs
            .iter()
            .enumerate()
            .map(|(round, &shooter)| TableRow {
                round,
                p_a: self.alice_win_prob[round].clone(),
                p_b: self.bob_win_prob[round].clone(),
                shooter,
            })
            .collect()
    }
}

/// One row of the probability table: state at the end of `round`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub round: usize,
    #[serde(rename = "pA", with = "serde_string")]
    pub p_a: ExactRational,
    #[serde(rename = "pB", with = "serde_string")]
    pub p_b: ExactRational,
    #[serde(serialize_with = "serialize_letter")]
    pub shooter: PlayerSign,
}

fn serialize_letter<S: serde::Serializer>(sign: &PlayerSign, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_char(sign.letter())
}

/// Rows for rounds `0..rounds`.
pub fn probability_table(params: DuelParams, rounds: usize) -> Result<Vec<TableRow>> {
    if rounds == 0 {
        return Err(Error::Domain("a probability table needs at least one round".into()));
    }
    Ok(generate(params, rounds).table())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eval_sign;
    use crate::numerics::rational::{int, rat};
    use crate::sign::{render_word, Alphabet};
    use num_traits::Pow;
    use proptest::prelude::*;
    use PlayerSign::{Alice, Bob};

    fn third() -> DuelParams {
        DuelParams::from_p(rat(1, 3)).unwrap()
    }

    #[test]
    fn table_for_one_third() {
        let expected = [
            (rat(1, 3), rat(0, 1), 'A'),
            (rat(1, 3), rat(2, 9), 'B'),
            (rat(1, 3), rat(10, 27), 'B'),
            (rat(35, 81), rat(10, 27), 'A'),
            (rat(35, 81), rat(106, 243), 'B'),
            (rat(347, 729), rat(106, 243), 'A'),
            (rat(347, 729), rat(1018, 2187), 'B'),
            (rat(347, 729), rat(3182, 6561), 'B'),
            (rat(9625, 19683), rat(3182, 6561), 'A'),
            (rat(9625, 19683), rat(29150, 59049), 'B'),
            (rat(87649, 177147), rat(29150, 59049), 'A'),
        ];
        let rows = probability_table(third(), 11).unwrap();
        assert_eq!(rows.len(), 11);
        for (row, (pa, pb, who)) in rows.iter().zip(expected) {
            assert_eq!((&row.p_a, &row.p_b, row.shooter.letter()), (&pa, &pb, who), "round {}", row.round);
        }
    }

    #[test]
    fn round_three_goes_to_alice() {
        let mut seq = generate(third(), 3);
        assert_eq!(seq.f_polynomial(2).unwrap().to_int_poly().eval(seq.params().q()), rat(1, 9));
        assert_eq!(seq.extend(), Alice);
        assert_eq!(seq.alice_win_prob()[3], rat(35, 81));
    }

    #[test]
    fn f_zero_is_one() {
        let seq = new_duel(third());
        assert_eq!(seq.f_polynomial(0).unwrap().to_int_poly().coeffs(), &[BigInt::from(1)]);
        assert_eq!(seq.extended().signs(), &[Alice, Bob]);
        assert_eq!(seq.len(), 1);
    }

    #[test]
    fn f_two_is_golden_polynomial() {
        let seq = generate(third(), 3);
        assert_eq!(format!("{}", seq.f_polynomial(2).unwrap()), "q^2 + q - 1");
        assert!(matches!(seq.f_polynomial(3), Err(Error::IndexOutOfRange { index: 3, len: 3 })));
    }

    #[test]
    fn f_six_equals_scaled_probability_gap() {
        let seq = generate(third(), 7);
        let f6 = seq.f_polynomial(6).unwrap().to_int_poly().eval(&rat(2, 3));
        // a_6 = B = +1; table values from the published rows
        let oracle = (rat(1018, 2187) - rat(347, 729)) * int(3);
        assert_eq!(f6, oracle);
    }

    #[test]
    fn new_duel_rows() {
        let rows = probability_table(DuelParams::from_p(rat(1, 2)).unwrap(), 1).unwrap();
        assert_eq!(rows, vec![TableRow { round: 0, p_a: rat(1, 2), p_b: int(0), shooter: Alice }]);
        assert!(probability_table(third(), 0).is_err());
    }

    #[test]
    fn domain_errors() {
        for p in [int(1), int(0), rat(-1, 2), rat(3, 2)] {
            assert!(matches!(DuelParams::from_p(p), Err(Error::Domain(_))));
        }
        assert!(DuelParams::from_q(int(1)).is_err());
        assert_eq!(DuelParams::from_q(rat(9, 10)).unwrap().p(), &rat(1, 10));
    }

    #[test]
    fn nine_tenths_turn_string() {
        let seq = generate(DuelParams::from_q(rat(9, 10)).unwrap(), 21);
        assert_eq!(render_word(seq.signs(), Alphabet::Letters), "ABBABAABBAABABBABAABB");
    }

    /// Plays the verbal rule directly on probabilities: the current
    /// shooter keeps firing until their total meets or exceeds the
    /// opponent's.
    fn verbal_rule(p: &ExactRational, rounds: usize) -> Vec<PlayerSign> {
        let q = ExactRational::one() - p;
        let (mut alice, mut bob) = (ExactRational::zero(), ExactRational::zero());
        let mut shooter = Alice;
        let mut out = Vec::new();
        for round in 0..rounds {
            out.push(shooter);
            let gain = p * Pow::pow(&q, round as u32);
            let (mine, theirs) = match shooter {
                Alice => {
                    alice += gain;
                    (&alice, &bob)
                }
                Bob => {
                    bob += gain;
                    (&bob, &alice)
                }
            };
            if mine >= theirs {
                shooter = -shooter;
            }
        }
        out
    }

    #[test]
    fn matches_verbal_rule_oracle() {
        let p = rat(1, 10);
        let seq = generate(DuelParams::from_p(p.clone()).unwrap(), 31);
        assert_eq!(seq.signs(), verbal_rule(&p, 31).as_slice());
    }

    #[test]
    fn golden_threshold_decides_round_three() {
        let golden = SignPolynomial::from_values(&[-1, 1, 1]).unwrap();
        for q in [rat(5, 8), rat(2, 3), rat(99, 100), rat(1, 2), rat(3, 5)] {
            let seq = generate(DuelParams::from_q(q.clone()).unwrap(), 4);
            let expected = if eval_sign(&golden, &q).is_nonnegative() { Alice } else { Bob };
            assert_eq!(seq.signs()[3], expected, "q = {q}");
        }
    }

    #[test]
    fn json_row_shape() {
        let rows = probability_table(third(), 2).unwrap();
        let json = serde_json::to_string(&rows[1]).unwrap();
        assert_eq!(json, r#"{"round":1,"pA":"1/3","pB":"2/9","shooter":"B"}"#);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn conservation_and_switch_rule(num in 1i64..1000, extra in 1i64..1000, len in 3usize..120) {
            let q = rat(num, num + extra);
            let seq = generate(DuelParams::from_q(q.clone()).unwrap(), len);
            let signs = seq.signs();
            prop_assert_eq!(&signs[..3], &[Alice, Bob, Bob]);
            for i in 0..len {
                let (pa, pb) = (&seq.alice_win_prob()[i], &seq.bob_win_prob()[i]);
                prop_assert_eq!(pa + pb, ExactRational::one() - Pow::pow(&q, (i + 1) as u32));
                if i + 1 < len {
                    prop_assert!(&seq.alice_win_prob()[i + 1] >= pa);
                    prop_assert!(&seq.bob_win_prob()[i + 1] >= pb);
                    let (mine, theirs) = match signs[i] { Alice => (pa, pb), Bob => (pb, pa) };
                    prop_assert_eq!(signs[i + 1] != signs[i], mine >= theirs);
                }
            }
        }
    }
}
