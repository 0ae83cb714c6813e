//! Expansions in a fractional base `beta > 1`: the greedy construction,
//! the expansion read off a duel at `q = n / (n + 1)`, and a validity check
//! for arbitrary digit strings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::duel::{self, DuelParams};
use crate::error::{Error, Result};
use crate::numerics::rational::{format_rational, serde_string, ExactRational};
use crate::sign::PlayerSign;

/// Digits `c_(k-1) .. c_0 . c_(-1) c_(-2) ..` in base `base`, each in
/// `0..=floor(base)`, together with the number `x` they expand and the
/// exact remainder `x - value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaExpansion {
    #[serde(with = "serde_string")]
    pub base: ExactRational,
    #[serde(with = "serde_string")]
    pub x: ExactRational,
    /// Most significant first; empty for fractional-only expansions.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub integer_digits: Vec<u32>,
    #[serde(rename = "digits")]
    pub fractional_digits: Vec<u32>,
    #[serde(with = "serde_string")]
    pub remainder: ExactRational,
}

impl BetaExpansion {
    /// Builds an expansion of `x` from given digits; the remainder is
    /// computed exactly.
    pub fn from_digits(
        x: ExactRational,
        base: ExactRational,
        integer_digits: Vec<u32>,
        fractional_digits: Vec<u32>,
    ) -> Result<Self> {
        check_base(&base)?;
        let max = max_digit(&base);
        if let Some(&bad) = integer_digits.iter().chain(&fractional_digits).find(|&&d| d > max) {
            return Err(Error::Domain(format!(
                "digit {bad} exceeds floor(base) = {max} for base {}",
                format_rational(&base)
            )));
        }
        let mut exp = BetaExpansion {
            base,
            x,
            integer_digits,
            fractional_digits,
            remainder: ExactRational::zero(),
        };
        exp.remainder = &exp.x - exp.value();
        Ok(exp)
    }

    pub fn max_digit(&self) -> u32 {
        max_digit(&self.base)
    }

    /// Exact value of all digits.
    pub fn value(&self) -> ExactRational {
        self.partial_sums().pop().unwrap_or_default()
    }

    /// Value of the integer part followed by the value after each
    /// fractional digit; always `1 + fractional_digits.len()` entries.
    pub fn partial_sums(&self) -> Vec<ExactRational> {
        let mut whole = ExactRational::zero();
        for &d in &self.integer_digits {
            whole = whole * &self.base + ExactRational::from_integer(d.into());
        }
        let inv = self.base.recip();
        let mut weight = ExactRational::one();
        let mut sums = Vec::with_capacity(self.fractional_digits.len() + 1);
        sums.push(whole.clone());
        for &d in &self.fractional_digits {
            weight *= &inv;
            whole += &weight * ExactRational::from_integer(d.into());
            sums.push(whole.clone());
        }
        sums
    }

    /// `0.d1d2...`, with integer digits before the point when present.
    /// Digits above 9 are written in brackets.
    pub fn render(&self) -> String {
        let digit = |d: &u32| if *d < 10 { d.to_string() } else { format!("[{d}]") };
        let int_part: String = if self.integer_digits.is_empty() {
            "0".into()
        } else {
            self.integer_digits.iter().map(digit).collect()
        };
        let frac: String = self.fractional_digits.iter().map(digit).collect();
        format!("{int_part}.{frac}")
    }

    /// Swaps 0 and 1; only meaningful for bases below 2.
    pub fn complement(&self) -> Result<BetaExpansion> {
        if self.max_digit() != 1 {
            return Err(Error::Domain("0/1 complement needs a base in (1, 2)".into()));
        }
        let flip = |ds: &[u32]| ds.iter().map(|d| 1 - d).collect();
        BetaExpansion::from_digits(
            self.x.clone(),
            self.base.clone(),
            flip(&self.integer_digits),
            flip(&self.fractional_digits),
        )
    }
}

fn check_base(base: &ExactRational) -> Result<()> {
    if base <= &ExactRational::one() {
        return Err(Error::Domain(format!("base must exceed 1, got {}", format_rational(base))));
    }
    Ok(())
}

/// `floor(beta)`.
pub fn max_digit(base: &ExactRational) -> u32 {
    base.numer().div_floor(base.denom()).to_u32().unwrap_or(u32::MAX)
}

/// Greedy expansion with all digits right of the radix point.
pub fn greedy_expansion(x: &ExactRational, base: &ExactRational, digits: usize) -> Result<BetaExpansion> {
    greedy_expansion_with_integer_places(x, base, 0, digits)
}

/// Greedy expansion using `integer_places` positions left of the point and
/// `digits` to the right: every digit is the largest one that keeps the
/// running sum at most `x`.
pub fn greedy_expansion_with_integer_places(
    x: &ExactRational,
    base: &ExactRational,
    integer_places: usize,
    digits: usize,
) -> Result<BetaExpansion> {
    check_base(base)?;
    if x.is_negative() {
        return Err(Error::Domain(format!("cannot expand negative {}", format_rational(x))));
    }
    let max = max_digit(base);
    let max_rat = ExactRational::from_integer(max.into());
    // x <= floor(beta) beta^k / (beta - 1)
    let reach = &max_rat * Pow::pow(base, integer_places as u32) / (base - ExactRational::one());
    if x > &reach {
        return Err(Error::NotRepresentable {
            x: format_rational(x),
            base: format_rational(base),
            integer_places,
        });
    }

    let mut remainder = x.clone();
    let mut next_digit = |weight: &ExactRational| -> u32 {
        let fits = (&remainder / weight).floor().to_integer();
        let d = fits.min(BigInt::from(max)).to_u32().unwrap_or(max);
        remainder -= weight * ExactRational::from_integer(d.into());
        d
    };
    let mut weight = Pow::pow(base, integer_places as u32);
    let mut integer_digits = Vec::with_capacity(integer_places);
    for _ in 0..integer_places {
        weight /= base;
        integer_digits.push(next_digit(&weight));
    }
    let mut fractional_digits = Vec::with_capacity(digits);
    for _ in 0..digits {
        weight /= base;
        fractional_digits.push(next_digit(&weight));
    }
    Ok(BetaExpansion {
        base: base.clone(),
        x: x.clone(),
        integer_digits,
        fractional_digits,
        remainder,
    })
}

/// The firing sequence at `q = n / (n + 1)` as an expansion of `n / 2` in
/// base `1 + 1/n`: the shooter of round `i` gives fractional digit `i + 1`,
/// 1 for Alice and 0 for Bob.
pub fn duel_expansion(n: u64, digits: usize) -> Result<BetaExpansion> {
    if n < 2 {
        return Err(Error::Domain(format!("duel expansions need n >= 2, got {n}")));
    }
    if digits == 0 {
        return Err(Error::Domain("at least one digit is required".into()));
    }
    let n_big = BigInt::from(n);
    let q = ExactRational::new(n_big.clone(), &n_big + 1);
    let seq = duel::generate(DuelParams::from_q(q)?, digits);
    let fractional = seq
        .signs()
        .iter()
        .map(|s| u32::from(*s == PlayerSign::Alice))
        .collect();
    BetaExpansion::from_digits(
        ExactRational::new(n_big.clone(), BigInt::from(2)),
        ExactRational::new(&n_big + 1, n_big),
        Vec::new(),
        fractional,
    )
}

/// First position (0-based over integer then fractional digits) where two
/// digit strings differ, comparing up to the shorter one.
pub fn first_disagreement(a: &BetaExpansion, b: &BetaExpansion) -> Option<usize> {
    let lhs = a.integer_digits.iter().chain(&a.fractional_digits);
    let rhs = b.integer_digits.iter().chain(&b.fractional_digits);
    lhs.zip(rhs).position(|(x, y)| x != y)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validity {
    /// Number of fractional digits checked.
    pub checked: usize,
    /// First prefix length `m` (fractional digits included) at which the
    /// sum overshoots `x` or the remaining tail can no longer reach it.
    pub first_violation: Option<usize>,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// For each prefix of `m` fractional digits checks
/// `0 <= x - S_m <= floor(beta) beta^(-m) / (beta - 1)`.
pub fn validate_expansion(x: &ExactRational, exp: &BetaExpansion) -> Validity {
    let max = ExactRational::from_integer(exp.max_digit().into());
    let inv = exp.base.recip();
    let mut tail = &max / (&exp.base - ExactRational::one());
    let mut first_violation = None;
    for (m, sum) in exp.partial_sums().iter().enumerate() {
        if m > 0 {
            tail *= &inv;
        }
        let deficit = x - sum;
        if deficit.is_negative() || deficit > tail {
            first_violation = Some(m);
            break;
        }
    }
    Validity {
        checked: exp.fractional_digits.len(),
        first_violation,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfLimit {
    pub rounds: usize,
    /// `|sum_{i in S_A, i < rounds} q^i - 1/(2p)|`.
    #[serde(with = "serde_string")]
    pub gap_a: ExactRational,
    #[serde(with = "serde_string")]
    pub gap_b: ExactRational,
    /// `q^rounds / (1 - q)`.
    #[serde(with = "serde_string")]
    pub bound: ExactRational,
}

impl HalfLimit {
    pub fn within_bound(&self) -> bool {
        self.gap_a <= self.bound && self.gap_b <= self.bound
    }
}

/// Distance of each player's `sum q^i` after `rounds` rounds from the
/// common limit `1/(2p)`.
pub fn half_limit_check(params: &DuelParams, rounds: usize) -> HalfLimit {
    let q = params.q().clone();
    let half = (params.p() * ExactRational::from_integer(2.into())).recip();
    let (mut alice, mut bob) = (ExactRational::zero(), ExactRational::zero());
    if rounds > 0 {
        let seq = duel::generate(params.clone(), rounds);
        let mut power = ExactRational::one();
        for s in seq.signs() {
            match s {
                PlayerSign::Alice => alice += &power,
                PlayerSign::Bob => bob += &power,
            }
            power *= &q;
        }
    }
    HalfLimit {
        rounds,
        gap_a: (alice - &half).abs(),
        gap_b: (bob - &half).abs(),
        bound: Pow::pow(&q, rounds as u32) / params.p(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn digits(s: &str) -> Vec<u32> {
        s.bytes().map(|b| u32::from(b - b'0')).collect()
    }

    #[test]
    fn greedy_one_in_three_halves() {
        let exp = greedy_expansion(&int(1), &rat(3, 2), 6).unwrap();
        assert_eq!(&exp.fractional_digits[..3], &[1, 0, 1]);
        assert_eq!(exp.x.clone() - exp.value(), exp.remainder);
        assert!(!exp.remainder.is_negative());
    }

    #[test]
    fn greedy_simple_cases() {
        let zero = greedy_expansion(&int(0), &rat(3, 2), 5).unwrap();
        assert_eq!(zero.fractional_digits, vec![0; 5]);
        assert!(zero.remainder.is_zero());
        let half = greedy_expansion(&rat(1, 2), &int(2), 4).unwrap();
        assert_eq!(half.render(), "0.1000");
        let ten = greedy_expansion_with_integer_places(&int(10), &int(10), 2, 1).unwrap();
        assert_eq!(ten.render(), "10.0");
    }

    #[test]
    fn greedy_representability() {
        // floor(3/2) / (3/2 - 1) = 2
        assert!(greedy_expansion(&int(2), &rat(3, 2), 3).is_ok());
        assert!(matches!(
            greedy_expansion(&rat(201, 100), &rat(3, 2), 3),
            Err(Error::NotRepresentable { .. })
        ));
        assert!(greedy_expansion(&int(1), &int(1), 3).is_err());
    }

    #[test]
    fn greedy_digits_are_maximal() {
        for (x, base) in [(int(1), rat(3, 2)), (rat(5, 2), rat(6, 5)), (rat(6, 5), rat(5, 2)), (rat(1, 3), int(10))] {
            let exp = greedy_expansion(&x, &base, 30).unwrap();
            let sums = exp.partial_sums();
            let mut weight = ExactRational::one();
            for (i, &d) in exp.fractional_digits.iter().enumerate() {
                weight /= &base;
                assert!(sums[i + 1] <= x);
                if d < exp.max_digit() {
                    assert!(&sums[i + 1] + &weight > x, "digit {i} of {} not maximal", exp.render());
                }
            }
        }
    }

    #[test]
    fn duel_expansion_of_one() {
        let exp = duel_expansion(2, 11).unwrap();
        assert_eq!(exp.render(), "0.10010100101");
        assert_eq!(exp.base, rat(3, 2));
        assert_eq!(exp.x, int(1));
        assert!(validate_expansion(&int(1), &exp).is_valid());
        let comp = exp.complement().unwrap();
        assert_eq!(comp.render(), "0.01101011010");
        assert!(validate_expansion(&int(1), &comp).is_valid());
        assert_eq!(duel_expansion(2, 1).unwrap().render(), "0.1");
    }

    #[test]
    fn greedy_and_duel_differ_at_third_digit() {
        let greedy = greedy_expansion(&int(1), &rat(3, 2), 11).unwrap();
        let duel = duel_expansion(2, 11).unwrap();
        assert_eq!(first_disagreement(&greedy, &duel), Some(2));
    }

    #[test]
    fn overshoot_is_invalid() {
        let exp = BetaExpansion::from_digits(int(1), rat(3, 2), vec![], digits("11")).unwrap();
        let v = validate_expansion(&int(1), &exp);
        assert_eq!(v.first_violation, Some(2));
        assert!(BetaExpansion::from_digits(int(1), rat(3, 2), vec![], digits("12")).is_err());
    }

    #[test]
    fn undershoot_is_invalid() {
        // 0.000 in base 3/2 can never reach 1 once the tail 2·(2/3)^3 < 1
        let exp = BetaExpansion::from_digits(int(1), rat(3, 2), vec![], digits("000")).unwrap();
        assert_eq!(validate_expansion(&int(1), &exp).first_violation, Some(2));
    }

    #[test]
    fn duel_expansions_validate() {
        for n in 2..=12u64 {
            let exp = duel_expansion(n, 64).unwrap();
            let x = ExactRational::new(n.into(), 2.into());
            assert!(validate_expansion(&x, &exp).is_valid(), "n = {n}");
            assert!(validate_expansion(&x, &exp.complement().unwrap()).is_valid(), "complement n = {n}");
        }
    }

    #[test]
    fn conservation_over_digits() {
        let n = 5u64;
        let exp = duel_expansion(n, 40).unwrap();
        let q = rat(5, 6);
        let p = rat(1, 6);
        let mut power = ExactRational::one();
        let (mut ones, mut zeros) = (ExactRational::zero(), ExactRational::zero());
        for (m, &d) in exp.fractional_digits.iter().enumerate() {
            if d == 1 { ones += &power } else { zeros += &power }
            power *= &q;
            let total = (&ones + &zeros) * &p;
            assert_eq!(total, ExactRational::one() - Pow::pow(&q, (m + 1) as u32));
        }
    }

    #[test]
    fn half_limit() {
        let third = DuelParams::from_p(rat(1, 3)).unwrap();
        let empty = half_limit_check(&third, 0);
        assert_eq!((empty.gap_a.clone(), empty.gap_b.clone()), (rat(3, 2), rat(3, 2)));
        let h = half_limit_check(&third, 64);
        assert!(h.within_bound());
        assert_eq!(h.bound, Pow::pow(rat(2, 3), 64u32) * int(3));
        let tenth = DuelParams::from_p(rat(1, 10)).unwrap();
        let h = half_limit_check(&tenth, 512);
        assert!(h.within_bound());
        assert!(h.gap_a < Pow::pow(rat(1, 10), 20u32) && h.gap_b < Pow::pow(rat(1, 10), 20u32));
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_value(duel_expansion(2, 3).unwrap()).unwrap();
        assert_eq!(json["base"], "3/2");
        assert_eq!(json["x"], "1");
        assert_eq!(json["digits"], serde_json::json!([1, 0, 0]));
        assert_eq!(json["remainder"], "1/3");
    }
}
