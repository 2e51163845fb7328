//! Zero scanning by sign changes of Z, checked against the zero count.

use super::{average_gap, hardy_z_unchecked, Method, ZeroRecord};
use crate::arg_tracker::arg_on_line;
use crate::error::{Error, Result};
use crate::special_fn::theta_exact;
use std::f64::consts::{PI, TAU};

/// Grid halvings tried before giving up.
pub const MAX_GRID_HALVINGS: u32 = 6;
/// Grid points per average gap before any halving.
pub const GRID_PER_GAP: f64 = 8.0;
/// Bisection stops at this bracket width.
pub const BISECT_WIDTH: f64 = 1e-9;
/// Allowed distance of the counting value from an integer.
pub const COUNT_TOL: f64 = 1e-3;

/// θ(T)/π + 1 + S(T) before rounding.
pub fn count_zeros_value(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("count_zeros needs T > 0, got {t}")));
    }
    let a = arg_on_line(t)?;
    Ok(theta_exact(t) / PI + 1.0 + a / PI)
}

/// N(T), the number of zeros with ordinate in (0, T].
pub fn count_zeros(t: f64) -> Result<u64> {
    let v = count_zeros_value(t)?;
    let r = v.round();
    if (v - r).abs() > COUNT_TOL || r < 0.0 {
        return Err(Error::NonInteger { t, value: v });
    }
    Ok(r as u64)
}

/// A scanned window with its counting data.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanWindow {
    pub t_lo: f64,
    pub t_hi: f64,
    /// N(t_lo)
    pub n_before: u64,
    pub zeros: Vec<ZeroRecord>,
    pub halvings: u32,
}

fn sign_brackets(t_lo: f64, t_hi: f64, halving: u32) -> Vec<(f64, f64, f64, f64)> {
    let scale = GRID_PER_GAP * f64::from(1u32 << halving);
    let mut out = Vec::new();
    let mut t = t_lo;
    let mut z = hardy_z_unchecked(t);
    while t < t_hi {
        let next = (t + average_gap(t) / scale).min(t_hi);
        let zn = hardy_z_unchecked(next);
        if (z < 0.0) != (zn < 0.0) {
            out.push((t, next, z, zn));
        }
        t = next;
        z = zn;
    }
    out
}

// lattice cell for the final refinement, 2^-20
const CELL: f64 = 1.0 / 1_048_576.0;

/// Root of `f` inside a sign-change bracket, refined so that the answer
/// does not depend on the bracket: the bracket is first narrowed to the
/// lattice cell of width 2⁻²⁰ holding the sign change, which is then
/// bisected at dyadic points down to 2⁻³⁰ < [`BISECT_WIDTH`]. Returns the
/// midpoint and the final width.
pub(crate) fn refine_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> (f64, f64) {
    let neg = f_lo < 0.0;
    while hi - lo > CELL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return (0.5 * (lo + hi), hi - lo);
        }
        if (f(mid) < 0.0) == neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let base = (0.5 * (lo + hi) / CELL).floor() * CELL;
    let mut cell = None;
    for k in [0.0, -1.0, 1.0] {
        let a = base + k * CELL;
        let (fa, fb) = (f(a), f(a + CELL));
        if (fa < 0.0) != (fb < 0.0) {
            cell = Some((a, a + CELL, fa < 0.0));
            break;
        }
    }
    let Some((mut a, mut b, neg_a)) = cell else {
        return (0.5 * (lo + hi), hi - lo);
    };
    while b - a > BISECT_WIDTH {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (f(mid) < 0.0) == neg_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    (0.5 * (a + b), b - a)
}

/// [`refine_root`] on Z.
pub(crate) fn bisect_z(lo: f64, hi: f64, z_lo: f64) -> (f64, f64) {
    refine_root(hardy_z_unchecked, lo, hi, z_lo)
}

/// All zeros in [t_lo, t_hi] with indices, the count cross-checked by N(T)
/// at both ends.
pub fn scan_window(t_lo: f64, t_hi: f64) -> Result<ScanWindow> {
    if !(t_lo > TAU && t_hi > t_lo) || !t_hi.is_finite() {
        return Err(Error::Domain(format!("scan needs 2π < t_lo < t_hi, got [{t_lo}, {t_hi}]")));
    }
    let n0 = count_zeros(t_lo)?;
    let n1 = count_zeros(t_hi)?;
    let expected = n1 as i64 - n0 as i64;
    for halving in 0..=MAX_GRID_HALVINGS {
        let br = sign_brackets(t_lo, t_hi, halving);
        if br.len() as i64 > expected {
            return Err(Error::CountMismatch { t_lo, t_hi, found: br.len(), expected });
        }
        if br.len() as i64 == expected {
            let zeros = br
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi, zl, _))| {
                    let (t, w) = bisect_z(lo, hi, zl);
                    ZeroRecord { n: n0 + 1 + i as u64, t, method: Method::SignScan, residual_trans: None, bracket_width: w }
                })
                .collect();
            return Ok(ScanWindow { t_lo, t_hi, n_before: n0, zeros, halvings: halving });
        }
    }
    Err(Error::Unresolved { t_lo, t_hi, halvings: MAX_GRID_HALVINGS })
}

/// Zeros in [t_lo, t_hi] found by sign changes of Z.
pub fn scan_zeros(t_lo: f64, t_hi: f64) -> Result<Vec<ZeroRecord>> {
    Ok(scan_window(t_lo, t_hi)?.zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(count_zeros(14.0).unwrap(), 0);
        assert_eq!(count_zeros(100.0).unwrap(), 29);
        assert_eq!(count_zeros(1000.0).unwrap(), 649);
        assert_eq!(count_zeros(1e4).unwrap(), 10142);
        assert_eq!(count_zeros(0.5).unwrap(), 0);
    }

    #[test]
    fn first_window() {
        let z = scan_zeros(10.0, 50.0).unwrap();
        assert_eq!(z.len(), 10);
        assert!((z[0].t - 14.134_725_141_734_693).abs() < 1e-8);
        assert!(z.iter().all(|r| r.bracket_width <= 1e-9));
        assert!(scan_zeros(10.0, 14.0).unwrap().is_empty());
    }

    #[test]
    fn indices_to_hundred() {
        let z = scan_zeros(10.0, 100.0).unwrap();
        let idx: Vec<u64> = z.iter().map(|r| r.n).collect();
        assert_eq!(idx, (1..=29).collect::<Vec<_>>());
    }
}
