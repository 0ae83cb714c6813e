//! Roots in `(0, 1)` of the Thue-Morse-coefficient polynomials `f_n`.
//!
//! Above every such root of `f_2..f_n` the first `n + 2` turns of the duel
//! coincide with Thue-Morse, so these roots are the candidate
//! stabilization thresholds `alpha_k`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::duel::{self, DuelParams};
use crate::error::{Error, Result};
use crate::numerics::isolate::count_roots_bound;
use crate::numerics::rational::{format_rational, serde_string, to_f64, ExactRational};
use crate::numerics::{isolate_roots, IntPoly, IsolationInterval, SignPolynomial};
use crate::thue_morse::tm_f_polynomial;

/// `f_2, ..., f_max_n` with Thue-Morse coefficients.
pub fn stabilized_prefix_polynomials(max_n: usize) -> Result<Vec<SignPolynomial>> {
    if max_n < 2 {
        return Err(Error::Domain(format!("max_n must be at least 2, got {max_n}")));
    }
    Ok((2..=max_n).map(tm_f_polynomial).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdRecord {
    /// Index of the polynomial `f_n` the root belongs to (smallest such
    /// `n` when several share the root).
    pub n: usize,
    pub root: IsolationInterval,
    /// Upper bracket end of the largest root seen so far in ascending
    /// order together with all roots of `f_2..f_n`: a rational above which
    /// the turns `a_0..a_(n+1)` no longer change.
    #[serde(with = "serde_string")]
    pub running_lower_bound: ExactRational,
    /// Other `n` whose polynomial has the same root.
    pub duplicate_of: Vec<usize>,
}

/// All roots in `(0, 1)` of the stabilized `f_n`, `2 <= n <= max_n`, each
/// bracketed to at most `width`, sorted by midpoint.
pub fn alpha_sequence(max_n: usize, width: &ExactRational) -> Result<Vec<ThresholdRecord>> {
    let polys = stabilized_prefix_polynomials(max_n)?;
    let (zero, one) = (ExactRational::zero(), ExactRational::one());

    let mut found: Vec<(usize, IntPoly, IsolationInterval)> = Vec::new();
    for (offset, poly) in polys.iter().enumerate() {
        let n = offset + 2;
        let int_poly = poly.to_int_poly();
        for root in isolate_roots(&int_poly, &zero, &one, width)? {
            found.push((n, int_poly.clone(), root));
        }
    }

    // Highest root per polynomial index, then its running maximum over n.
    let mut stable_above = vec![zero.clone(); max_n + 1];
    for (n, _, root) in &found {
        if root.hi > stable_above[*n] {
            stable_above[*n] = root.hi.clone();
        }
    }
    for n in 1..=max_n {
        if stable_above[n - 1] > stable_above[n] {
            stable_above[n] = stable_above[n - 1].clone();
        }
    }

    found.sort_by(|x, y| x.2.midpoint().cmp(&y.2.midpoint()).then(x.0.cmp(&y.0)));
    let mut records: Vec<ThresholdRecord> = Vec::new();
    let mut kept_polys: Vec<IntPoly> = Vec::new();
    for (n, poly, root) in found {
        if let Some(idx) = records
            .iter()
            .zip(&kept_polys)
            .position(|(rec, kept)| rec.root.overlaps(&root) && same_root(kept, &poly, &rec.root, &root))
        {
            let rec = &mut records[idx];
            if n < rec.n {
                rec.duplicate_of.push(rec.n);
                rec.n = n;
                kept_polys[idx] = poly;
            } else {
                rec.duplicate_of.push(n);
            }
            continue;
        }
        records.push(ThresholdRecord {
            n,
            root,
            running_lower_bound: zero.clone(),
            duplicate_of: Vec::new(),
        });
        kept_polys.push(poly);
    }

    let mut running = zero;
    for rec in &mut records {
        let bound = &stable_above[rec.n];
        if bound > &running {
            running = bound.clone();
        }
        if rec.root.hi > running {
            running = rec.root.hi.clone();
        }
        rec.running_lower_bound = running.clone();
    }
    Ok(records)
}

/// Whether two overlapping brackets hold a common root: the gcd of the
/// polynomials must vanish somewhere in their union.
fn same_root(p: &IntPoly, q: &IntPoly, a: &IsolationInterval, b: &IsolationInterval) -> bool {
    let g = p.gcd(q);
    if g.degree().unwrap_or(0) == 0 {
        return false;
    }
    let lo = a.lo.clone().min(b.lo.clone());
    let hi = a.hi.clone().max(b.hi.clone());
    count_roots_bound(&g.square_free_part(), &lo, &hi) > 0
}

/// Whether the turn `a_(n+1)` actually changes when `q` crosses the root:
/// the duel run just below the bracket and just above it differ within the
/// first `n + 2` rounds.
pub fn is_switching_root(record: &ThresholdRecord) -> bool {
    let rounds = record.n + 2;
    let below = DuelParams::from_q(record.root.lo.clone()).map(|p| duel::generate(p, rounds));
    let above = DuelParams::from_q(record.root.hi.clone()).map(|p| duel::generate(p, rounds));
    match (below, above) {
        (Ok(b), Ok(a)) => b.signs() != a.signs(),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub k: usize,
    pub n: usize,
    #[serde(with = "serde_string")]
    pub alpha_lo: ExactRational,
    #[serde(with = "serde_string")]
    pub alpha_hi: ExactRational,
    /// Midpoint, approximate.
    pub alpha_mid: f64,
    /// `(1 - alpha_k) · sqrt(k)`, approximate.
    pub scaled_gap: f64,
    /// `alpha_k < alpha_(k-1)` against the conjectured monotone order.
    pub non_monotone: bool,
    pub switching: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub rows: Vec<ReportRow>,
    /// `k` values where `alpha_k` is below `alpha_(k-1)`.
    pub monotonicity_violations: Vec<usize>,
    /// Smallest and largest scaled gap, when there are rows.
    pub scaled_gap_range: Option<(f64, f64)>,
}

/// The scaled gaps `(1 - alpha_k) sqrt(k)`; ordering problems are flagged
/// in the rows, never raised as errors.
pub fn conjecture_report(records: &[ThresholdRecord]) -> ConjectureReport {
    let mut rows = Vec::with_capacity(records.len());
    let mut violations = Vec::new();
    let mut previous_mid: Option<ExactRational> = None;
    for (i, rec) in records.iter().enumerate() {
        let k = i + 1;
        let mid = rec.root.midpoint();
        let non_monotone = previous_mid.as_ref().is_some_and(|p| rec.root.hi <= *p);
        if non_monotone {
            violations.push(k);
        }
        let mid_f = to_f64(&mid);
        rows.push(ReportRow {
            k,
            n: rec.n,
            alpha_lo: rec.root.lo.clone(),
            alpha_hi: rec.root.hi.clone(),
            alpha_mid: mid_f,
            scaled_gap: (1.0 - mid_f) * (k as f64).sqrt(),
            non_monotone,
            switching: is_switching_root(rec),
        });
        previous_mid = Some(mid);
    }
    let scaled_gap_range = rows.iter().map(|r| r.scaled_gap).fold(None, |acc, g| match acc {
        None => Some((g, g)),
        Some((lo, hi)) => Some((f64::min(lo, g), f64::max(hi, g))),
    });
    ConjectureReport { rows, monotonicity_violations: violations, scaled_gap_range }
}

/// CSV with header `k,n,alpha_lo,alpha_hi,scaled_gap`.
pub fn report_csv(report: &ConjectureReport) -> String {
    let mut out = String::from("k,n,alpha_lo,alpha_hi,scaled_gap\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{:.12}\n",
            row.k,
            row.n,
            format_rational(&row.alpha_lo),
            format_rational(&row.alpha_hi),
            row.scaled_gap
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::isolate::dyadic_width;
    use crate::numerics::rational::rat;
    use crate::numerics::Sign;

    #[test]
    fn polynomial_family() {
        assert!(stabilized_prefix_polynomials(1).is_err());
        let polys = stabilized_prefix_polynomials(9).unwrap();
        assert_eq!(format!("{}", polys[0]), "q^2 + q - 1");
        let f3 = polys[1].to_int_poly();
        let f1_sq = tm_f_polynomial(1).to_int_poly().compose_square();
        assert_eq!(f3, IntPoly::q_minus_one().mul(&f1_sq));
        // f_9: t_9 = -1 (binary 1001), coefficients -t_j
        let expected: Vec<i32> = (0..=9u64).map(|j| -crate::thue_morse::tm_term(j).value()).collect();
        let got: Vec<i32> = polys[7].coeffs().iter().map(|s| s.value()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn first_alpha_is_inverse_golden_ratio() {
        let w = dyadic_width(40);
        let records = alpha_sequence(2, &w).unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0].root;
        assert!(r.width() <= w);
        let f2 = tm_f_polynomial(2).to_int_poly();
        assert_eq!(f2.sign_at(&r.lo), Sign::Negative);
        assert_eq!(f2.sign_at(&r.hi), Sign::Positive);
        let report = conjecture_report(&records);
        assert!((report.rows[0].scaled_gap - 0.381966).abs() < 1e-5);
        assert!(report.rows[0].switching);
    }

    /// Dense exact grid scan plus bisection, independent of Descartes.
    fn grid_scan_roots(poly: &IntPoly, steps: i64) -> Vec<ExactRational> {
        let mut roots = Vec::new();
        let mut prev = poly.sign_at(&rat(1, steps));
        let mut prev_x = rat(1, steps);
        for i in 2..steps {
            let x = rat(i, steps);
            let s = poly.sign_at(&x);
            if s == Sign::Zero {
                roots.push(x.clone());
            } else if prev != Sign::Zero && s != prev {
                roots.push((&prev_x + &x) / ExactRational::from_integer(2.into()));
            }
            prev = s;
            prev_x = x;
        }
        roots
    }

    #[test]
    fn f3_roots_match_grid_scan() {
        let records = alpha_sequence(3, &rat(1, 1_000_000)).unwrap();
        let f3 = tm_f_polynomial(3).to_int_poly();
        let scan = grid_scan_roots(&f3, 10_000);
        let from_f3: Vec<_> = records.iter().filter(|r| r.n == 3).collect();
        assert_eq!(from_f3.len(), scan.len());
        for (rec, x) in from_f3.iter().zip(&scan) {
            assert!(num_traits::Signed::abs(&(rec.root.midpoint() - x)) <= rat(1, 10_000));
        }
    }

    #[test]
    fn records_are_sorted_and_inside_unit_interval() {
        let records = alpha_sequence(12, &rat(1, 1 << 20)).unwrap();
        let (zero, one) = (ExactRational::zero(), ExactRational::one());
        for pair in records.windows(2) {
            assert!(pair[0].root.midpoint() <= pair[1].root.midpoint());
            assert!(pair[0].running_lower_bound <= pair[1].running_lower_bound);
        }
        for rec in &records {
            assert!(rec.root.lo > zero && rec.root.hi < one);
        }
    }

    #[test]
    fn empty_report() {
        let report = conjecture_report(&[]);
        assert!(report.rows.is_empty());
        assert_eq!(report.scaled_gap_range, None);
        assert_eq!(report_csv(&report), "k,n,alpha_lo,alpha_hi,scaled_gap\n");
    }
}
