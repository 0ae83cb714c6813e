//! Real-root isolation by Descartes' rule of signs with bisection.
//!
//! The input is reduced to its square-free part, then the window is
//! subdivided. For an interval `(lo, hi)` we keep an integer polynomial
//! `Q(t)` proportional to `p(lo + (hi - lo) t)`; the sign variations of
//! `(1 + t)^d Q(1 / (1 + t))` bound the number of roots in `(lo, hi)` from
//! above and agree with it in parity, so a count of 0 or 1 is exact.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use super::poly::{IntPoly, Sign, SignPolynomial};
use super::rational::{serde_string, ExactRational};
use crate::error::{Error, Result};

/// An interval with exact endpoints holding exactly one real root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolationInterval {
    #[serde(with = "serde_string")]
    pub lo: ExactRational,
    #[serde(with = "serde_string")]
    pub hi: ExactRational,
    /// The square-free part takes opposite nonzero signs at `lo` and `hi`.
    pub certified_sign_change: bool,
}

impl IsolationInterval {
    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / ExactRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo < x && x < &self.hi
    }

    /// Open intervals intersect.
    pub fn overlaps(&self, other: &IsolationInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Roots of `poly` in the open interval `(lo, hi)`, each isolated in an
/// interval of width at most `width`. Results are sorted and pairwise
/// disjoint. Multiple roots are reported once.
pub fn isolate_roots(
    poly: &IntPoly,
    lo: &ExactRational,
    hi: &ExactRational,
    width: &ExactRational,
) -> Result<Vec<IsolationInterval>> {
    if !width.is_positive() {
        return Err(Error::Domain(format!("isolation width must be positive, got {width}")));
    }
    if lo >= hi {
        return Err(Error::Domain(format!("empty window ({lo}, {hi})")));
    }
    if poly.is_zero() {
        return Err(Error::Domain("the zero polynomial has no isolated roots".into()));
    }
    let sqf = poly.square_free_part();
    if sqf.degree() == Some(0) {
        return Ok(Vec::new());
    }

    let mut brackets = Vec::new();
    let mut exact_roots = Vec::new();
    let mut stack = vec![(substitute_interval(&sqf, lo, hi), lo.clone(), hi.clone())];
    while let Some((q, a, b)) = stack.pop() {
        match descartes_bound(&q) {
            0 => {}
            1 => brackets.push((q, a, b)),
            _ => {
                let mid = midpoint(&a, &b);
                let left = q.halve_argument();
                if left.coeffs().iter().sum::<BigInt>().is_zero() {
                    exact_roots.push(mid.clone());
                }
                let right = left.taylor_shift_one();
                stack.push((right, mid.clone(), b));
                stack.push((left, a, mid));
            }
        }
    }

    let mut out: Vec<IsolationInterval> = Vec::new();
    for (q, a, b) in brackets {
        match refine(&sqf, q, a, b, width) {
            Refined::Bracket(interval) => out.push(interval),
            Refined::Exact(root) => exact_roots.push(root),
        }
    }
    for root in exact_roots {
        let interval = around_exact_root(&sqf, &root, lo, hi, width, &out);
        out.push(interval);
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// [`isolate_roots`] for a ±1 polynomial.
pub fn isolate_sign_poly_roots(
    poly: &SignPolynomial,
    lo: &ExactRational,
    hi: &ExactRational,
    width: &ExactRational,
) -> Result<Vec<IsolationInterval>> {
    isolate_roots(&poly.to_int_poly(), lo, hi, width)
}

/// Upper bound on the number of roots of `poly` in `(lo, hi)`.
pub fn count_roots_bound(poly: &IntPoly, lo: &ExactRational, hi: &ExactRational) -> usize {
    descartes_bound(&substitute_interval(poly, lo, hi))
}

fn descartes_bound(q: &IntPoly) -> usize {
    q.reversed().taylor_shift_one().sign_variations()
}

fn midpoint(a: &ExactRational, b: &ExactRational) -> ExactRational {
    (a + b) / ExactRational::from_integer(BigInt::from(2))
}

/// Integer polynomial proportional to `p(lo + (hi - lo) t)`.
fn substitute_interval(p: &IntPoly, lo: &ExactRational, hi: &ExactRational) -> IntPoly {
    let span = hi - lo;
    let denom = lo.denom() * span.denom();
    let shift = lo.numer() * span.denom();
    let slope = span.numer() * lo.denom();
    let linear = IntPoly::new(vec![shift, slope]);
    let mut coeffs = p.coeffs().iter().rev();
    let Some(lead) = coeffs.next() else {
        return IntPoly::zero();
    };
    let mut acc = IntPoly::new(vec![lead.clone()]);
    let mut denom_pow = BigInt::one();
    for c in coeffs {
        denom_pow *= &denom;
        let mut next = acc.mul(&linear).coeffs().to_vec();
        if next.is_empty() {
            next.push(BigInt::zero());
        }
        next[0] += c * &denom_pow;
        acc = IntPoly::new(next);
    }
    acc.primitive_part()
}

enum Refined {
    Bracket(IsolationInterval),
    Exact(ExactRational),
}

/// Shrinks a one-root bracket until it is at most `width` wide and the
/// square-free part is nonzero at both ends.
fn refine(sqf: &IntPoly, mut q: IntPoly, mut a: ExactRational, mut b: ExactRational, width: &ExactRational) -> Refined {
    // Descartes steps while an endpoint is itself a root.
    while sqf.sign_at(&a) == Sign::Zero || sqf.sign_at(&b) == Sign::Zero {
        let mid = midpoint(&a, &b);
        let left = q.halve_argument();
        if left.coeffs().iter().sum::<BigInt>().is_zero() {
            return Refined::Exact(mid);
        }
        if descartes_bound(&left) == 1 {
            q = left;
            b = mid;
        } else {
            q = left.taylor_shift_one();
            a = mid;
        }
    }
    let sign_lo = sqf.sign_at(&a);
    while &(&b - &a) > width {
        let mid = midpoint(&a, &b);
        match sqf.sign_at(&mid) {
            Sign::Zero => return Refined::Exact(mid),
            s if s == sign_lo => a = mid,
            _ => b = mid,
        }
    }
    let certified = sign_lo != Sign::Zero && sqf.sign_at(&b) == sign_lo.flipped();
    Refined::Bracket(IsolationInterval { lo: a, hi: b, certified_sign_change: certified })
}

/// A symmetric bracket around a rational root, inside the window, away
/// from the other brackets and certified to hold only that root.
fn around_exact_root(
    sqf: &IntPoly,
    root: &ExactRational,
    lo: &ExactRational,
    hi: &ExactRational,
    width: &ExactRational,
    others: &[IsolationInterval],
) -> IsolationInterval {
    let two = ExactRational::from_integer(BigInt::from(2));
    let mut delta = width / &two;
    for bound in [root - lo, hi - root] {
        if bound < delta {
            delta = bound / &two;
        }
    }
    for other in others {
        let gap = if &other.hi <= root { root - &other.hi } else { &other.lo - root };
        if gap.is_positive() && gap < delta {
            delta = gap / &two;
        }
    }
    loop {
        let a = root - &delta;
        let b = root + &delta;
        let (sa, sb) = (sqf.sign_at(&a), sqf.sign_at(&b));
        if sa != Sign::Zero && sb == sa.flipped() && count_roots_bound(sqf, &a, &b) == 1 {
            return IsolationInterval { lo: a, hi: b, certified_sign_change: true };
        }
        delta /= &two;
    }
}

/// Width `2^-bits`, the usual way widths are requested.
pub fn dyadic_width(bits: u32) -> ExactRational {
    ExactRational::new(BigInt::one(), Pow::pow(BigInt::from(2), bits))
}
