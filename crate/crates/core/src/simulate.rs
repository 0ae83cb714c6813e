//! Seeded Monte Carlo duels along the greedy firing sequence.
//!
//! # Generator
//!
//! Each trial gets its own stream. The stream for trial `t` under seed `s`
//! starts from `splitmix64(s + (t + 1) · 0x9E3779B97F4A7C15)` (zero is
//! replaced by `0x9E3779B97F4A7C15`) and then advances with xorshift64*:
//!
//! ```text
//! x ^= x >> 12; x ^= x << 25; x ^= x >> 27;
//! output = x · 0x2545F4914F6CDD1D  (mod 2^64)
//! ```
//!
//! A shot hits when the 64-bit output `u` satisfies
//! `u < floor(p · 2^64)`, so the hit probability is `p` rounded down to a
//! multiple of `2^-64`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::duel::{self, DuelParams};
use crate::error::{Error, Result};
use crate::numerics::rational::{serde_string, to_f64, ExactRational};
use crate::sign::PlayerSign;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xorshift64* generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    /// A zero state would be stuck; it is replaced by a fixed constant.
    pub fn new(state: u64) -> Self {
        XorShift64Star {
            state: if state == 0 { GOLDEN_GAMMA } else { state },
        }
    }

    /// Stream for one trial, independent of how trials are scheduled.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let mixed = seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        Self::new(splitmix64(mixed))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub params: DuelParams,
    /// Rounds played before a trial is recorded as undecided.
    pub max_rounds: usize,
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(params: DuelParams, max_rounds: usize, trials: u64, seed: u64) -> Result<Self> {
        if max_rounds == 0 || trials == 0 {
            return Err(Error::Domain("simulation needs at least one round and one trial".into()));
        }
        Ok(SimConfig { params, max_rounds, trials, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimResult {
    #[serde(with = "serde_string")]
    pub p: ExactRational,
    pub max_rounds: usize,
    pub trials: u64,
    pub seed: u64,
    pub alice_wins: u64,
    pub bob_wins: u64,
    pub no_decision: u64,
    #[serde(rename = "empirical_pA", with = "serde_string")]
    pub empirical_pa: ExactRational,
    #[serde(rename = "empirical_pB", with = "serde_string")]
    pub empirical_pb: ExactRational,
    /// `P(A_(max_rounds - 1))`.
    #[serde(rename = "analytic_pA", with = "serde_string")]
    pub analytic_pa: ExactRational,
    #[serde(rename = "analytic_pB", with = "serde_string")]
    pub analytic_pb: ExactRational,
    /// `q^max_rounds`.
    #[serde(with = "serde_string")]
    pub analytic_no_decision: ExactRational,
}

/// Empirical frequency against its expected probability, in binomial
/// standard deviations.
pub fn z_score(count: u64, trials: u64, expected: &ExactRational) -> f64 {
    let p = to_f64(expected);
    let n = trials as f64;
    let sigma = (n * p * (1.0 - p)).sqrt();
    let diff = count as f64 - n * p;
    if sigma == 0.0 {
        return if diff == 0.0 { 0.0 } else { f64::INFINITY };
    }
    diff / sigma
}

impl SimResult {
    /// z-scores for Alice wins, Bob wins and undecided trials.
    pub fn z_scores(&self) -> [f64; 3] {
        [
            z_score(self.alice_wins, self.trials, &self.analytic_pa),
            z_score(self.bob_wins, self.trials, &self.analytic_pb),
            z_score(self.no_decision, self.trials, &self.analytic_no_decision),
        ]
    }
}

/// `floor(p · 2^64)`.
fn hit_threshold(p: &ExactRational) -> u128 {
    let scaled: BigInt = (p.numer() << 64usize) / p.denom();
    scaled.to_u128().unwrap_or(u128::MAX)
}

pub fn run_sim(config: &SimConfig) -> SimResult {
    let seq = duel::generate(config.params.clone(), config.max_rounds);
    let shooters = seq.signs();
    let threshold = hit_threshold(config.params.p());
    let (mut alice, mut bob) = (0u64, 0u64);
    for trial in 0..config.trials {
        let mut rng = XorShift64Star::for_trial(config.seed, trial);
        if let Some(winner) = shooters.iter().find(|_| u128::from(rng.next_u64()) < threshold) {
            match winner {
                PlayerSign::Alice => alice += 1,
                PlayerSign::Bob => bob += 1,
            }
        }
    }
    let undecided = config.trials - alice - bob;
    let last = seq.len() - 1;
    let analytic_pa = seq.alice_win_prob()[last].clone();
    let analytic_pb = seq.bob_win_prob()[last].clone();
    let frac = |k: u64| ExactRational::new(k.into(), config.trials.into());
    SimResult {
        p: config.params.p().clone(),
        max_rounds: config.max_rounds,
        trials: config.trials,
        seed: config.seed,
        alice_wins: alice,
        bob_wins: bob,
        no_decision: undecided,
        empirical_pa: frac(alice),
        empirical_pb: frac(bob),
        analytic_no_decision: ExactRational::from_integer(1.into()) - &analytic_pa - &analytic_pb,
        analytic_pa,
        analytic_pb,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;
    use num_traits::Pow;

    #[test]
    fn generator_test_vectors() {
        // Reference values from an independent Python implementation.
        let mut rng = XorShift64Star::new(1);
        let got: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        assert_eq!(got, vec![5180492295206395165, 12380297144915551517, 13389498078930870103]);
        assert_eq!(splitmix64(0), 0xE220A8397B1DCDAF);
        let mut t = XorShift64Star::for_trial(7, 0);
        assert_eq!(t.next_u64(), 8823771489796233695);
    }

    #[test]
    fn threshold_rounding() {
        assert_eq!(hit_threshold(&rat(1, 2)), 1u128 << 63);
        assert_eq!(hit_threshold(&rat(1, 3)), 6148914691236517205);
        assert_eq!(hit_threshold(&rat(1, 1)), 1u128 << 64);
    }

    #[test]
    fn deterministic() {
        let cfg = SimConfig::new(DuelParams::from_p(rat(1, 3)).unwrap(), 16, 2000, 42).unwrap();
        let a = serde_json::to_string(&run_sim(&cfg)).unwrap();
        let b = serde_json::to_string(&run_sim(&cfg)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn counts_add_up_and_single_round() {
        let cfg = SimConfig::new(DuelParams::from_p(rat(999, 1000)).unwrap(), 1, 100_000, 3).unwrap();
        let r = run_sim(&cfg);
        assert_eq!(r.alice_wins + r.bob_wins + r.no_decision, r.trials);
        assert_eq!(r.bob_wins, 0);
        assert_eq!(r.analytic_pa, rat(999, 1000));
        assert!(r.z_scores()[0].abs() <= 4.0);
        assert!((to_f64(&r.empirical_pa) - 0.999).abs() < 0.001);
    }

    #[test]
    fn config_validation() {
        let params = DuelParams::from_p(rat(1, 3)).unwrap();
        assert!(SimConfig::new(params.clone(), 0, 1, 0).is_err());
        assert!(SimConfig::new(params, 1, 0, 0).is_err());
    }

    #[test]
    fn statistical_consistency_suite() {
        let settings = [(rat(1, 3), 64), (rat(1, 10), 20), (rat(1, 2), 8), (rat(1, 20), 100), (rat(2, 7), 5)];
        let mut exceed = 0;
        for (i, (p, horizon)) in settings.into_iter().enumerate() {
            let cfg = SimConfig::new(DuelParams::from_p(p.clone()).unwrap(), horizon, 20_000, 100 + i as u64).unwrap();
            let r = run_sim(&cfg);
            assert_eq!(r.analytic_no_decision, Pow::pow(ExactRational::from_integer(1.into()) - &p, horizon as u32));
            let z = r.z_scores();
            assert!(z.iter().all(|v| v.abs() <= 4.0), "{z:?}");
            exceed += z.iter().filter(|v| v.abs() > 3.0).count();
        }
        assert!(exceed <= 1);
    }
}
