//! # Zeta evaluation
//!
//! Hardy's Z(t) by Riemann-Siegel (Euler-Maclaurin below t = 1000), ζ(σ + it)
//! off the line, zero scanning by sign changes of Z, and the zero count
//! N(T) = θ(T)/π + 1 + S(T).

mod em;
mod rs;
mod scan;

pub use em::{em_terms, zeta_em, EM_BERNOULLI_TERMS};
pub use scan::{count_zeros, count_zeros_value, scan_window, scan_zeros, ScanWindow};

pub(crate) use em::EmHeight;
pub(crate) use scan::refine_root;
pub(crate) use rs::AfeHeight;

use crate::error::{Error, Result};
use crate::special_fn::theta_exact;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Below this Z comes from Euler-Maclaurin. It matches the off-line switch
/// so that Z and the σ-path evaluator agree near the line; the δ-ladder
/// depends on that.
pub const RS_MIN_T: f64 = 1000.0;
/// Below this the off-line evaluator is Euler-Maclaurin, above it the
/// approximate functional equation.
pub const AFE_MIN_T: f64 = 1000.0;

/// ζ at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPoint {
    pub sigma: f64,
    pub t: f64,
    pub value: Complex64,
}

/// How a zero was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    SignScan,
    Transcendental,
    Ingested,
}

/// One zero 1/2 + it on the critical line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub n: u64,
    pub t: f64,
    pub method: Method,
    /// θ(t) + a(t) − (n − 3/2)π once a(t) has been computed.
    pub residual_trans: Option<f64>,
    pub bracket_width: f64,
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it).
pub fn hardy_z(t: f64) -> Result<f64> {
    if !(t > TAU) || !t.is_finite() {
        return Err(Error::Domain(format!("hardy_z needs t > 2π, got {t}")));
    }
    Ok(hardy_z_unchecked(t))
}

pub(crate) fn hardy_z_unchecked(t: f64) -> f64 {
    if t >= RS_MIN_T {
        rs::rs_z(t).0
    } else {
        z_em(t)
    }
}

fn z_em(t: f64) -> f64 {
    let z = zeta_em(Complex64::new(0.5, t), em_terms(t), EM_BERNOULLI_TERMS);
    (Complex64::from_polar(1.0, theta_exact(t)) * z).re
}

/// Z(t) by Riemann-Siegel at any t > 2π (inaccurate below a few hundred).
pub fn hardy_z_rs(t: f64) -> Result<f64> {
    if !(t > TAU) {
        return Err(Error::Domain(format!("hardy_z_rs needs t > 2π, got {t}")));
    }
    Ok(rs::rs_z(t).0)
}

/// Z(t) from ζ by Euler-Maclaurin, e^{iθ}ζ(1/2 + it) kept complex so the
/// imaginary part can be checked.
pub fn hardy_z_em(t: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("hardy_z_em needs t > 0, got {t}")));
    }
    let z = zeta_em(Complex64::new(0.5, t), em_terms(t), EM_BERNOULLI_TERMS);
    Ok(Complex64::from_polar(1.0, theta_exact(t)) * z)
}

/// Z(t) and Z'(t).
pub fn hardy_z_with_derivative(t: f64) -> Result<(f64, f64)> {
    if !(t > TAU) {
        return Err(Error::Domain(format!("hardy_z needs t > 2π, got {t}")));
    }
    if t >= RS_MIN_T {
        Ok(rs::rs_z(t))
    } else {
        let h = 1e-5;
        Ok((z_em(t), (z_em(t + h) - z_em(t - h)) / (2.0 * h)))
    }
}

/// ζ(σ + it) by Euler-Maclaurin with max(10, ⌈2|t|⌉) terms and 8 Bernoulli
/// corrections.
pub fn zeta_off_line(sigma: f64, t: f64) -> Result<Complex64> {
    zeta_off_line_with(sigma, t, em_terms(t), EM_BERNOULLI_TERMS)
}

/// Same with explicit truncation.
pub fn zeta_off_line_with(sigma: f64, t: f64, n_terms: usize, bernoulli_terms: usize) -> Result<Complex64> {
    if !(0.5..=10.0).contains(&sigma) || !t.is_finite() {
        return Err(Error::Domain(format!("zeta_off_line needs sigma in [1/2, 10], got {sigma}")));
    }
    if sigma == 1.0 && t == 0.0 {
        return Err(Error::Pole);
    }
    if bernoulli_terms > 20 || n_terms < 2 {
        return Err(Error::Domain("truncation out of range".into()));
    }
    Ok(zeta_em(Complex64::new(sigma, t), n_terms, bernoulli_terms))
}

/// [`zeta_off_line`] packaged as a point.
pub fn zeta_point(sigma: f64, t: f64) -> Result<ZetaPoint> {
    Ok(ZetaPoint { sigma, t, value: zeta_off_line(sigma, t)? })
}

/// ζ(σ + it) at fixed t, for argument tracking.
pub(crate) enum ZetaAtHeight {
    Em(EmHeight),
    Afe(AfeHeight),
}

impl ZetaAtHeight {
    pub fn new(t: f64) -> Self {
        if t.abs() < AFE_MIN_T {
            ZetaAtHeight::Em(EmHeight::new(t))
        } else {
            ZetaAtHeight::Afe(AfeHeight::new(t))
        }
    }

    pub fn eval(&self, sigma: f64) -> Complex64 {
        match self {
            ZetaAtHeight::Em(h) => h.eval(sigma),
            ZetaAtHeight::Afe(h) => h.eval(sigma),
        }
    }
}

/// Mean spacing of zeros near t, 2π/log(t/2π), clamped for small t.
pub fn average_gap(t: f64) -> f64 {
    TAU / (t.max(TAU * std::f64::consts::E) / TAU).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const T1: f64 = 14.134_725_141_734_693_790_457_251_983_562;

    #[test]
    fn first_zero() {
        assert!(hardy_z(T1).unwrap().abs() < 1e-6);
        let a = hardy_z(14.0).unwrap();
        let b = hardy_z(15.0).unwrap();
        assert!(a.signum() != b.signum());
        assert!(zeta_off_line(0.5, T1).unwrap().norm() < 1e-6);
    }

    #[test]
    fn zeta_two() {
        let v = zeta_off_line(2.0, 0.0).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-10 && v.im.abs() < 1e-15);
        assert_eq!(zeta_off_line(1.0, 0.0), Err(Error::Pole));
    }

    #[test]
    fn zeta_reference_values() {
        let cases = [
            (0.5, 20.0, Complex64::new(0.429_913_860_437_843_4, -1.064_291_443_080_589_1)),
            (0.75, 100.5, Complex64::new(1.501_767_408_085_029_2, -0.832_893_221_740_650_0)),
            (2.0, 30.0, Complex64::new(0.825_879_824_315_826_4, -0.269_033_827_497_306_3)),
            (1.5, 1e4, Complex64::new(0.800_665_107_414_076_6, -0.389_382_748_900_381_3)),
        ];
        for (s, t, r) in cases {
            let v = zeta_off_line(s, t).unwrap();
            assert!((v - r).norm() < 1e-8 * r.norm(), "({s},{t}): {v}");
        }
    }

    #[test]
    fn sigma_ten_is_near_one() {
        for &t in &[0.0, 3.0, 77.7, 5000.0] {
            let v = zeta_off_line(10.0, t).unwrap();
            assert!((v - 1.0).norm() < 2f64.powi(-9));
        }
    }

    #[test]
    fn evaluators_agree_at_switch() {
        let t = AFE_MIN_T + 0.37;
        let em = EmHeight::new(t);
        let afe = AfeHeight::new(t);
        for &s in &[0.5, 0.5 + 1e-4, 0.6, 0.8, 1.3, 3.0, 10.0] {
            let d = (em.eval(s) - afe.eval(s)).norm();
            assert!(d < 2e-4, "sigma {s}: {d}");
        }
    }

    #[test]
    fn rs_and_em_agree_below_switch() {
        for &t in &[200.0, 350.3, 999.0] {
            let a = hardy_z_rs(t).unwrap();
            let b = hardy_z_em(t).unwrap();
            assert!((a - b.re).abs() < 1e-6, "t={t}");
            assert!(b.im.abs() < 1e-9);
        }
    }
}
