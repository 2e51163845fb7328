//! # Normalized gaps and the inequality chain
//!
//! g_n = (t_{n+1} − t_n) log(t_n)/2π and g'_n = (t_{n+1} − t_n) log(t_n/2πe)/2π,
//! the bound g'_n < 1 − (a(t_{n+1}) − a(t_n))/π (gpb1), g'_n ≤ 3 + Δb (gpb2)
//! and b_{n+1} − b_n ≤ 1 (bup), plus the running summary of a sweep.

use crate::arg_tracker::{arg_limit_at_zero, ArgRecord};
use crate::error::{Error, Result};
use crate::zeta_engine::ZeroRecord;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI, TAU};

pub const HIST_BINS: usize = 120;
pub const HIST_WIDTH: f64 = 0.05;
// fixed-point scale of the g' accumulator
const SUM_SCALE: f64 = 4_503_599_627_370_496.0; // 2^52

pub const CSV_HEADER: &str = "n,t_n,t_next,g,g_prime,a_n,a_next,b_n,b_next,db,slack_gpb1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub n: u64,
    pub t_n: f64,
    pub t_next: f64,
    pub g: f64,
    pub g_prime: f64,
    pub a_n: f64,
    pub a_next: f64,
    pub b_n: i64,
    pub b_next: i64,
    /// b_{n+1} − b_n
    pub db: i64,
    pub slack_gpb1: f64,
}

/// g and g' for one pair of ordinates.
pub fn normalized_pair(t_n: f64, t_next: f64) -> (f64, f64) {
    let d = t_next - t_n;
    (d * t_n.ln() / TAU, d * (t_n / (TAU * E)).ln() / TAU)
}

/// Gap record from two consecutive zeros and their argument records.
pub fn gap_from_args(z_lo: &ZeroRecord, a_lo: &ArgRecord, z_hi: &ZeroRecord, a_hi: &ArgRecord) -> Result<GapRecord> {
    if z_hi.n != z_lo.n + 1 {
        return Err(Error::Precondition(format!("gap needs consecutive zeros, got {} and {}", z_lo.n, z_hi.n)));
    }
    if !(z_hi.t > z_lo.t) {
        return Err(Error::Precondition(format!(
            "zero ordinates not strictly increasing at n = {}: {} then {}",
            z_lo.n, z_lo.t, z_hi.t
        )));
    }
    if !(z_lo.t > TAU * E) {
        return Err(Error::NonpositiveNorm { t: z_lo.t });
    }
    let (g, g_prime) = normalized_pair(z_lo.t, z_hi.t);
    Ok(GapRecord {
        n: z_lo.n,
        t_n: z_lo.t,
        t_next: z_hi.t,
        g,
        g_prime,
        a_n: a_lo.a,
        a_next: a_hi.a,
        b_n: a_lo.b,
        b_next: a_hi.b,
        db: a_hi.b - a_lo.b,
        slack_gpb1: 1.0 - (a_hi.a - a_lo.a) / PI - g_prime,
    })
}

/// Gap record, computing a(t) at both zeros.
pub fn gap(z_lo: &ZeroRecord, z_hi: &ZeroRecord) -> Result<GapRecord> {
    if z_hi.n != z_lo.n + 1 || !(z_hi.t > z_lo.t) {
        return Err(Error::Precondition(format!("gap needs consecutive, increasing zeros; got n = {} and {}", z_lo.n, z_hi.n)));
    }
    let a_lo = arg_limit_at_zero(z_lo)?;
    let a_hi = arg_limit_at_zero(z_hi)?;
    gap_from_args(z_lo, &a_lo, z_hi, &a_hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub pass: bool,
    pub slack: f64,
}

/// Outcome of the three inequalities for one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// g' < 1 − (a_next − a_n)/π, strict
    pub gpb1: Check,
    /// g' ≤ 3 + (b_n − b_next)
    pub gpb2: Check,
    /// b_next − b_n ≤ 1
    pub bup: Check,
}

impl Verdict {
    pub fn all_pass(&self) -> bool {
        self.gpb1.pass && self.gpb2.pass && self.bup.pass
    }
}

pub fn verify_chain(rec: &GapRecord) -> Verdict {
    let s1 = 1.0 - (rec.a_next - rec.a_n) / PI - rec.g_prime;
    let s2 = 3.0 + (rec.b_n - rec.b_next) as f64 - rec.g_prime;
    let s3 = (1 - (rec.b_next - rec.b_n)) as f64;
    Verdict {
        gpb1: Check { pass: s1 > 0.0, slack: s1 },
        gpb2: Check { pass: s2 >= 0.0, slack: s2 },
        bup: Check { pass: s3 >= 0.0, slack: s3 },
    }
}

/// Aggregates over a contiguous index range. Merging is exactly associative:
/// the g' total is kept as a fixed-point integer, so no summation order
/// enters the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    /// [n_lo, n_hi] of the gap indices seen, None while empty
    pub range: Option<(u64, u64)>,
    pub count: u64,
    pub max_g_prime: f64,
    pub argmax_n: u64,
    pub max_g: f64,
    /// Σ g' scaled by 2^52
    pub sum_g_prime_fixed: i128,
    /// max of b_n − b_{n+1}
    pub db_max: Option<i64>,
    pub min_slack_gpb1: f64,
    pub count_gpb1_violations: u64,
    pub count_gpb2_violations: u64,
    pub count_bup_violations: u64,
    pub count_bound3_violations: u64,
    pub count_hyp2_violations: u64,
    /// 120 bins of width 0.05 on [0, 6], then one overflow bin
    pub histogram: Vec<u64>,
}

impl Default for SweepSummary {
    fn default() -> Self {
        SweepSummary {
            range: None,
            count: 0,
            max_g_prime: f64::NEG_INFINITY,
            argmax_n: 0,
            max_g: f64::NEG_INFINITY,
            sum_g_prime_fixed: 0,
            db_max: None,
            min_slack_gpb1: f64::INFINITY,
            count_gpb1_violations: 0,
            count_gpb2_violations: 0,
            count_bup_violations: 0,
            count_bound3_violations: 0,
            count_hyp2_violations: 0,
            histogram: vec![0; HIST_BINS + 1],
        }
    }
}

fn hist_bin(g_prime: f64) -> usize {
    if g_prime >= HIST_BINS as f64 * HIST_WIDTH {
        HIST_BINS
    } else {
        ((g_prime / HIST_WIDTH).floor().max(0.0) as usize).min(HIST_BINS - 1)
    }
}

impl SweepSummary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mean_g_prime(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.sum_g_prime_fixed as f64 / SUM_SCALE / self.count as f64
        }
    }

    /// Adds the next record; n must continue the range.
    pub fn push(&mut self, rec: &GapRecord) -> Result<()> {
        if let Some((_, hi)) = self.range {
            if rec.n != hi + 1 {
                return Err(Error::GapInIndices { expected: hi + 1, got: rec.n });
            }
        }
        self.absorb(rec)
    }

    /// [`SweepSummary::push`] without the contiguity check, for reports over
    /// damaged files. The range becomes the hull of the indices seen.
    pub fn absorb(&mut self, rec: &GapRecord) -> Result<()> {
        let finite = [rec.t_n, rec.t_next, rec.g, rec.g_prime, rec.a_n, rec.a_next, rec.slack_gpb1];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition(format!("non-finite field in gap record n = {}", rec.n)));
        }
        self.range = Some(match self.range {
            None => (rec.n, rec.n),
            Some((lo, hi)) => (lo.min(rec.n), hi.max(rec.n)),
        });
        self.count += 1;
        if rec.g_prime > self.max_g_prime {
            self.max_g_prime = rec.g_prime;
            self.argmax_n = rec.n;
        }
        self.max_g = self.max_g.max(rec.g);
        self.sum_g_prime_fixed += (rec.g_prime * SUM_SCALE).round() as i128;
        let drop = -rec.db;
        self.db_max = Some(self.db_max.map_or(drop, |d| d.max(drop)));
        let v = verify_chain(rec);
        self.min_slack_gpb1 = self.min_slack_gpb1.min(v.gpb1.slack);
        self.count_gpb1_violations += u64::from(!v.gpb1.pass);
        self.count_gpb2_violations += u64::from(!v.gpb2.pass);
        self.count_bup_violations += u64::from(!v.bup.pass);
        self.count_bound3_violations += u64::from(rec.g_prime >= 3.0);
        self.count_hyp2_violations += u64::from(rec.db.abs() > 1);
        self.histogram[hist_bin(rec.g_prime)] += 1;
        Ok(())
    }

    /// Summary of `self` followed by `next`. The ranges must be adjacent.
    pub fn merge(&self, next: &SweepSummary) -> Result<SweepSummary> {
        let range = match (self.range, next.range) {
            (None, _) => return Ok(next.clone()),
            (_, None) => return Ok(self.clone()),
            (Some((a, b)), Some((c, d))) => {
                if c != b + 1 {
                    return Err(Error::GapInIndices { expected: b + 1, got: c });
                }
                (a, d)
            }
        };
        let (max_g_prime, argmax_n) = if next.max_g_prime > self.max_g_prime {
            (next.max_g_prime, next.argmax_n)
        } else {
            (self.max_g_prime, self.argmax_n)
        };
        let db_max = match (self.db_max, next.db_max) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
        Ok(SweepSummary {
            range: Some(range),
            count: self.count + next.count,
            max_g_prime,
            argmax_n,
            max_g: self.max_g.max(next.max_g),
            sum_g_prime_fixed: self.sum_g_prime_fixed + next.sum_g_prime_fixed,
            db_max,
            min_slack_gpb1: self.min_slack_gpb1.min(next.min_slack_gpb1),
            count_gpb1_violations: self.count_gpb1_violations + next.count_gpb1_violations,
            count_gpb2_violations: self.count_gpb2_violations + next.count_gpb2_violations,
            count_bup_violations: self.count_bup_violations + next.count_bup_violations,
            count_bound3_violations: self.count_bound3_violations + next.count_bound3_violations,
            count_hyp2_violations: self.count_hyp2_violations + next.count_hyp2_violations,
            histogram: self.histogram.iter().zip(&next.histogram).map(|(a, b)| a + b).collect(),
        })
    }
}

/// One pass over an ordered stream of records.
pub fn summarize<'a, I: IntoIterator<Item = &'a GapRecord>>(records: I) -> Result<SweepSummary> {
    let mut s = SweepSummary::new();
    for r in records {
        s.push(r)?;
    }
    Ok(s)
}

/// Decimal with 15 significant digits, '.' radix, trailing zeros dropped.
pub fn fmt_sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.14e}", x);
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp >= 14 {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', (exp - 14) as usize));
        return out;
    }
    if exp >= 0 {
        let k = exp as usize + 1;
        out.push_str(&digits[..k]);
        out.push('.');
        out.push_str(&digits[k..]);
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    }
    let trimmed = out.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

impl GapRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            fmt_sig15(self.t_n),
            fmt_sig15(self.t_next),
            fmt_sig15(self.g),
            fmt_sig15(self.g_prime),
            fmt_sig15(self.a_n),
            fmt_sig15(self.a_next),
            self.b_n,
            self.b_next,
            self.db,
            fmt_sig15(self.slack_gpb1)
        )
    }

    /// Parses a row produced by [`GapRecord::to_csv_row`]. `line` is only
    /// used for error messages.
    pub fn from_csv_row(row: &str, line: usize) -> Result<GapRecord> {
        let bad = || Error::MalformedLine { line, content: row.to_string() };
        let f: Vec<&str> = row.trim().split(',').collect();
        if f.len() != 11 {
            return Err(bad());
        }
        let fl = |i: usize| f[i].parse::<f64>().map_err(|_| bad());
        let int = |i: usize| f[i].parse::<i64>().map_err(|_| bad());
        Ok(GapRecord {
            n: f[0].parse().map_err(|_| bad())?,
            t_n: fl(1)?,
            t_next: fl(2)?,
            g: fl(3)?,
            g_prime: fl(4)?,
            a_n: fl(5)?,
            a_next: fl(6)?,
            b_n: int(7)?,
            b_next: int(8)?,
            db: int(9)?,
            slack_gpb1: fl(10)?,
        })
    }

    /// The record as it reads back from CSV.
    pub fn canonical(&self) -> GapRecord {
        GapRecord::from_csv_row(&self.to_csv_row(), 0).expect("own output parses")
    }

    /// Fields that are derived from the others, recomputed; returns the
    /// names of those that disagree with the stored values.
    pub fn inconsistencies(&self) -> Vec<&'static str> {
        let mut bad = Vec::new();
        // 15 significant digits leave each ordinate uncertain by up to
        // 5e-14 t (half a unit in the 15th digit when it leads with 1)
        let dt_err = 5e-14 * (self.t_n.abs() + self.t_next.abs());
        let within = |a: f64, b: f64, extra: f64| (a - b).abs() <= extra + 1e-12 * a.abs().max(b.abs()).max(1.0);
        let (g, gp) = normalized_pair(self.t_n, self.t_next);
        if !within(g, self.g, dt_err * self.t_n.ln().abs() / TAU) {
            bad.push("g");
        }
        let gp_err = dt_err * (self.t_n / (TAU * E)).ln().abs() / TAU;
        if !within(gp, self.g_prime, gp_err) {
            bad.push("g_prime");
        }
        if self.db != self.b_next - self.b_n {
            bad.push("db");
        }
        let slack = 1.0 - (self.a_next - self.a_n) / PI - self.g_prime;
        if !within(slack, self.slack_gpb1, 0.0) {
            bad.push("slack_gpb1");
        }
        if !(self.t_next > self.t_n) {
            bad.push("t_next");
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta_engine::Method;

    fn zr(n: u64, t: f64) -> ZeroRecord {
        ZeroRecord { n, t, method: Method::SignScan, residual_trans: None, bracket_width: 0.0 }
    }

    fn arg(a: f64) -> ArgRecord {
        ArgRecord::from_unreduced(0.0, 1e-6, a).unwrap()
    }

    #[test]
    fn unit_gap() {
        let t = TAU * E * E;
        let next = t + TAU / (t / (TAU * E)).ln();
        let r = gap_from_args(&zr(5, t), &arg(0.1), &zr(6, next), &arg(-0.2)).unwrap();
        assert!((r.g_prime - 1.0).abs() < 1e-15);
        assert!(r.g > r.g_prime);
    }

    #[test]
    fn degenerate_pair_rejected() {
        assert!(gap_from_args(&zr(5, 30.0), &arg(0.0), &zr(6, 30.0), &arg(0.0)).is_err());
        assert!(gap_from_args(&zr(5, 30.0), &arg(0.0), &zr(7, 31.0), &arg(0.0)).is_err());
        assert!(matches!(
            gap_from_args(&zr(1, 14.13), &arg(0.0), &zr(2, 21.0), &arg(0.0)),
            Err(Error::NonpositiveNorm { .. })
        ));
    }

    #[test]
    fn verdicts() {
        let mut r = gap_from_args(&zr(5, 40.0), &arg(0.3), &zr(6, 41.0), &arg(-0.4)).unwrap();
        assert!(verify_chain(&r).all_pass());
        r.a_next = r.a_n + PI * 2.0;
        let v = verify_chain(&r);
        assert!(!v.gpb1.pass && v.gpb2.pass && v.bup.pass);
    }

    #[test]
    fn fmt_examples() {
        assert_eq!(fmt_sig15(1.0), "1");
        assert_eq!(fmt_sig15(-0.5), "-0.5");
        assert_eq!(fmt_sig15(4992381.014003178), "4992381.01400318");
        assert_eq!(fmt_sig15(1.234e-7), "0.0000001234");
        assert_eq!(fmt_sig15(1e20), "100000000000000000000");
        assert_eq!(fmt_sig15(0.1 + 0.2), "0.3");
    }

    #[test]
    fn gap_in_indices() {
        let a = gap_from_args(&zr(5, 40.0), &arg(0.0), &zr(6, 41.0), &arg(0.0)).unwrap();
        let b = gap_from_args(&zr(7, 42.0), &arg(0.0), &zr(8, 43.0), &arg(0.0)).unwrap();
        assert_eq!(summarize([&a, &b]), Err(Error::GapInIndices { expected: 6, got: 7 }));
    }
}
