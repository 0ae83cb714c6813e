//! Integer and ±1 polynomials with exact evaluation, division and gcd.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::ExactRational;
use crate::sign::PlayerSign;

/// Exact sign of a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: &BigInt) -> Sign {
        if value.is_zero() {
            Sign::Zero
        } else if value.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn of_rational(value: &ExactRational) -> Sign {
        Sign::of(value.numer())
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self != Sign::Negative
    }
}

/// Dense polynomial over the integers, coefficients from the constant term
/// upward. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    /// `q - 1`.
    pub fn q_minus_one() -> Self {
        Self::from_i64s(&[-1, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Sign of `p(a/b)`, computed as the sign of `b^d p(a/b)` with a
    /// homogeneous Horner scheme so no fraction is ever reduced.
    pub fn sign_at(&self, x: &ExactRational) -> Sign {
        Sign::of(&self.scaled_value_at(x))
    }

    /// `b^d · p(a/b)` for `x = a/b`, `d` the degree.
    pub fn scaled_value_at(&self, x: &ExactRational) -> BigInt {
        let (a, b) = (x.numer(), x.denom());
        let mut iter = self.coeffs.iter().rev();
        let Some(lead) = iter.next() else {
            return BigInt::zero();
        };
        let mut acc = lead.clone();
        let mut b_pow = BigInt::one();
        for c in iter {
            b_pow *= b;
            acc = acc * a + c * &b_pow;
        }
        acc
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let degree = self.degree().unwrap_or(0) as u32;
        let denom = num_traits::Pow::pow(x.denom(), degree);
        ExactRational::new(self.scaled_value_at(x), denom)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, factor: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// `p(x^2)`.
    pub fn compose_square(&self) -> IntPoly {
        let mut out = Vec::with_capacity(2 * self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(BigInt::zero());
            }
            out.push(c.clone());
        }
        IntPoly::new(out)
    }

    /// Greatest common divisor of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut content = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            content = -content;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &content).collect())
    }

    /// Pseudo-remainder `prem(self, divisor)`: the remainder of
    /// `lc(divisor)^(deg self - deg divisor + 1) · self` by `divisor`.
    pub fn pseudo_remainder(&self, divisor: &IntPoly) -> IntPoly {
        let dd = divisor.degree().expect("pseudo-division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let factor = rem[top].clone();
            for c in rem.iter_mut() {
                *c *= lead;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[top - dd + i] -= &factor * d;
            }
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        IntPoly::new(rem)
    }

    /// Primitive gcd with positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_remainder(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// `p / gcd(p, p')`, primitive: same real roots, all simple.
    pub fn square_free_part(&self) -> IntPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        exact_divide(&self.primitive_part(), &g).expect("gcd divides its argument")
    }

    /// Number of sign changes in the coefficient list, zeros skipped.
    pub fn sign_variations(&self) -> usize {
        let mut last: Option<bool> = None;
        let mut count = 0;
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            let neg = c.is_negative();
            if last.is_some_and(|l| l != neg) {
                count += 1;
            }
            last = Some(neg);
        }
        count
    }

    /// `p(x + 1)`.
    pub fn taylor_shift_one(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let next = c[j + 1].clone();
                c[j] += next;
            }
        }
        IntPoly::new(c)
    }

    /// `x^d p(1/x)` for `d = deg p`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// `2^d p(x/2)`.
    pub fn halve_argument(&self) -> IntPoly {
        let d = self.coeffs.len().saturating_sub(1);
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (d - i))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            match (show_mag, i) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}q")?,
                (false, 1) => write!(f, "q")?,
                (true, _) => write!(f, "{mag}q^{i}")?,
                (false, _) => write!(f, "q^{i}")?,
            }
        }
        Ok(())
    }
}

/// Exact quotient `dividend / divisor` in `Z[q]`, or `None` when the
/// remainder is nonzero (or the quotient would need fractions, or the
/// divisor is zero).
pub fn exact_divide(dividend: &IntPoly, divisor: &IntPoly) -> Option<IntPoly> {
    let dd = divisor.degree()?;
    let lead = divisor.leading().unwrap();
    let Some(nd) = dividend.degree() else {
        return Some(IntPoly::zero());
    };
    if nd < dd {
        return None;
    }
    let mut rem = dividend.coeffs.clone();
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let top = &rem[k + dd];
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (i, d) in divisor.coeffs.iter().enumerate() {
            rem[k + i] -= &q * d;
        }
        quot[k] = q;
    }
    if rem.iter().all(Zero::is_zero) {
        Some(IntPoly::new(quot))
    } else {
        None
    }
}

/// Polynomial whose coefficients are all `-1` or `+1`; never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPolynomial {
    coeffs: Vec<PlayerSign>,
}

impl SignPolynomial {
    /// `None` for an empty coefficient list.
    pub fn new(coeffs: Vec<PlayerSign>) -> Option<Self> {
        (!coeffs.is_empty()).then_some(SignPolynomial { coeffs })
    }

    pub fn from_values(values: &[i32]) -> Option<Self> {
        let coeffs = values
            .iter()
            .map(|&v| PlayerSign::from_value(v))
            .collect::<Option<Vec<_>>>()?;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[PlayerSign] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|s| BigInt::from(s.value())).collect())
    }

    pub fn negated(&self) -> SignPolynomial {
        SignPolynomial {
            coeffs: self.coeffs.iter().map(|&s| -s).collect(),
        }
    }
}

impl fmt::Display for SignPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_int_poly().fmt(f)
    }
}

/// Exact sign of `poly(q)`.
pub fn eval_sign(poly: &SignPolynomial, q: &ExactRational) -> Sign {
    let mut eval = SignEvaluator::new(q.clone());
    let mut sign = Sign::Zero;
    for &c in poly.coeffs() {
        sign = eval.push(c);
    }
    sign
}

/// Evaluates a polynomial one coefficient at a time at a fixed point
/// `q = a/b`.
///
/// Keeps `S_n = sum_j c_j a^j b^(n-j)` and `a^n`, `b^n`, so appending
/// `c_(n+1)` costs `S_(n+1) = b S_n + c a^(n+1)`.
#[derive(Debug, Clone)]
pub struct SignEvaluator {
    a: BigInt,
    b: BigInt,
    a_pow: BigInt,
    b_pow: BigInt,
    scaled: BigInt,
    len: usize,
}

impl SignEvaluator {
    pub fn new(q: ExactRational) -> Self {
        let (a, b) = (q.numer().clone(), q.denom().clone());
        SignEvaluator {
            a,
            b,
            a_pow: BigInt::one(),
            b_pow: BigInt::one(),
            scaled: BigInt::zero(),
            len: 0,
        }
    }

    /// Appends the next coefficient and returns the sign of the extended
    /// polynomial.
    pub fn push(&mut self, coeff: PlayerSign) -> Sign {
        if self.len > 0 {
            self.a_pow *= &self.a;
            self.b_pow *= &self.b;
            self.scaled *= &self.b;
        }
        match coeff {
            PlayerSign::Alice => self.scaled -= &self.a_pow,
            PlayerSign::Bob => self.scaled += &self.a_pow,
        }
        self.len += 1;
        self.sign()
    }

    pub fn sign(&self) -> Sign {
        Sign::of(&self.scaled)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Exact value of the polynomial built so far.
    pub fn value(&self) -> ExactRational {
        ExactRational::new(self.scaled.clone(), self.b_pow.clone())
    }

    /// `q^n` for `n` the current degree.
    pub fn power(&self) -> ExactRational {
        ExactRational::new(self.a_pow.clone(), self.b_pow.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;
    use proptest::prelude::*;
    use PlayerSign::{Alice as M, Bob as P};

    fn golden() -> SignPolynomial {
        SignPolynomial::from_values(&[-1, 1, 1]).unwrap()
    }

    #[test]
    fn golden_polynomial_signs() {
        assert_eq!(eval_sign(&golden(), &rat(2, 3)), Sign::Positive);
        assert_eq!(golden().to_int_poly().eval(&rat(2, 3)), rat(1, 9));
        assert_eq!(eval_sign(&golden(), &rat(1, 2)), Sign::Negative);
        assert_eq!(golden().to_int_poly().eval(&rat(1, 2)), rat(-1, 4));
    }

    #[test]
    fn zero_is_reachable() {
        // q - 1/2 scaled: 2q - 1 has an exact rational root
        let p = IntPoly::from_i64s(&[-1, 2]);
        assert_eq!(p.sign_at(&rat(1, 2)), Sign::Zero);
        let s = SignPolynomial::from_values(&[-1, 1]).unwrap();
        assert_eq!(eval_sign(&s, &rat(1, 1)), Sign::Zero);
    }

    #[test]
    fn rejects_empty_and_non_unit_coefficients() {
        assert!(SignPolynomial::new(vec![]).is_none());
        assert!(SignPolynomial::from_values(&[1, 0, -1]).is_none());
        assert_eq!(SignPolynomial::new(vec![P]).unwrap().degree(), 0);
    }

    #[test]
    fn division_by_q_minus_one() {
        // (q^2 + q - 1) has f(1) = 1, so q - 1 does not divide it
        assert_eq!(exact_divide(&golden().to_int_poly(), &IntPoly::q_minus_one()), None);
        let p = IntPoly::from_i64s(&[-1, 1, 1, -1]);
        let quot = exact_divide(&p, &IntPoly::q_minus_one()).unwrap();
        assert_eq!(quot, IntPoly::from_i64s(&[1, 0, -1]));
        assert_eq!(exact_divide(&p, &IntPoly::zero()), None);
        assert_eq!(exact_divide(&IntPoly::zero(), &p), Some(IntPoly::zero()));
    }

    #[test]
    fn non_integral_quotient_is_non_divisible() {
        assert_eq!(exact_divide(&IntPoly::from_i64s(&[1, 1]), &IntPoly::from_i64s(&[2, 2])), None);
        assert_eq!(
            exact_divide(&IntPoly::from_i64s(&[2, 2]), &IntPoly::from_i64s(&[1, 1])),
            Some(IntPoly::from_i64s(&[2]))
        );
    }

    #[test]
    fn gcd_and_square_free() {
        // (q-1)^2 (q+2)
        let p = IntPoly::from_i64s(&[2, -3, 0, 1]);
        assert_eq!(p.gcd(&p.derivative()), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(p.square_free_part(), IntPoly::from_i64s(&[-2, 1, 1]));
        let coprime = IntPoly::from_i64s(&[1, 1]).gcd(&IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(coprime.degree(), Some(0));
    }

    #[test]
    fn transforms() {
        let p = IntPoly::from_i64s(&[1, 2, 3]);
        assert_eq!(p.taylor_shift_one(), IntPoly::from_i64s(&[6, 8, 3]));
        assert_eq!(p.reversed(), IntPoly::from_i64s(&[3, 2, 1]));
        assert_eq!(p.halve_argument(), IntPoly::from_i64s(&[4, 4, 3]));
        assert_eq!(p.compose_square(), IntPoly::from_i64s(&[1, 0, 2, 0, 3]));
        assert_eq!(IntPoly::from_i64s(&[1, -1, -1, 1]).sign_variations(), 2);
        assert_eq!(format!("{}", golden()), "q^2 + q - 1");
    }

    #[test]
    fn incremental_matches_whole() {
        let coeffs = [M, P, P, M, P, M, M, P];
        let q = rat(9, 10);
        let mut ev = SignEvaluator::new(q.clone());
        for n in 0..coeffs.len() {
            let s = ev.push(coeffs[n]);
            let poly = SignPolynomial::new(coeffs[..=n].to_vec()).unwrap();
            assert_eq!(s, eval_sign(&poly, &q));
            assert_eq!(ev.value(), poly.to_int_poly().eval(&q));
        }
    }

    fn naive_horner(coeffs: &[PlayerSign], q: &ExactRational) -> ExactRational {
        coeffs.iter().rev().fold(ExactRational::zero(), |acc, c| {
            acc * q + ExactRational::from_integer(BigInt::from(c.value()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn eval_sign_matches_horner(
            coeffs in prop::collection::vec(prop::bool::ANY, 1..=257),
            num in -2000i64..2000, den in 1i64..2000,
        ) {
            let coeffs: Vec<_> = coeffs.into_iter().map(|b| if b { P } else { M }).collect();
            let q = rat(num, den);
            let poly = SignPolynomial::new(coeffs.clone()).unwrap();
            prop_assert_eq!(eval_sign(&poly, &q), Sign::of_rational(&naive_horner(&coeffs, &q)));
        }

        #[test]
        fn product_divides_back(a in prop::collection::vec(-5i64..5, 1..8),
                                b in prop::collection::vec(-5i64..5, 1..6)) {
            let a = IntPoly::from_i64s(&a);
            let b = IntPoly::from_i64s(&b);
            prop_assume!(!b.is_zero());
            prop_assert_eq!(exact_divide(&a.mul(&b), &b), Some(a));
        }
    }
}
