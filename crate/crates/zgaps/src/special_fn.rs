//! # Special functions
//!
//! The Riemann-Siegel theta function in two flavours, its derivative, and the
//! principal branch of Lambert W. Complex log-gamma and digamma live here too
//! since theta is built on them for small ordinates and the functional
//! equation of zeta and L needs them elsewhere.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{E, LN_2, PI, TAU};

/// Bernoulli numbers B_2, B_4, ..., B_40.
pub(crate) const BERNOULLI_EVEN: [f64; 20] = [
    1.666_666_666_666_666_6e-1,
    -3.333_333_333_333_333e-2,
    2.380_952_380_952_381e-2,
    -3.333_333_333_333_333e-2,
    7.575_757_575_757_576e-2,
    -2.531_135_531_135_531e-1,
    1.166_666_666_666_666_7,
    -7.092_156_862_745_098,
    5.497_117_794_486_216e1,
    -5.291_242_424_242_424e2,
    6.192_123_188_405_797e3,
    -8.658_025_311_355_312e4,
    1.425_517_166_666_666_7e6,
    -2.729_823_106_781_609_4e7,
    6.015_808_739_006_424e8,
    -1.511_631_576_709_215_7e10,
    4.296_146_430_611_667e11,
    -1.371_165_520_508_833_2e13,
    4.883_323_189_735_932e14,
    -1.929_657_934_194_006_8e16,
];

/// Which formula `theta` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ThetaMode {
    /// Im log Γ(1/4 + it/2) − (t/2) log π, to double precision.
    Exact,
    /// Leading Stirling term (t/2) log(t/2πe) − π/8 only.
    StirlingLeading,
}

// Below this the asymptotic series is not used.
const SERIES_MIN_T: f64 = 10.0;

/// Coefficients c_k of the odd powers t^{-(2k-1)} in the theta expansion:
/// (1 − 2^{1−2k}) |B_2k| / (4k(2k−1)).
fn theta_series_coeff(k: usize) -> f64 {
    let kf = k as f64;
    let b = BERNOULLI_EVEN[k - 1].abs();
    (1.0 - (LN_2 * (1.0 - 2.0 * kf)).exp()) * b / (4.0 * kf * (2.0 * kf - 1.0))
}

const THETA_TERMS: usize = 7;

/// Riemann-Siegel theta.
pub fn theta(t: f64, mode: ThetaMode) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("theta needs t > 0, got {t}")));
    }
    Ok(match mode {
        ThetaMode::StirlingLeading => 0.5 * t * (t / (TAU * E)).ln() - PI / 8.0,
        ThetaMode::Exact => theta_exact(t),
    })
}

pub(crate) fn theta_exact(t: f64) -> f64 {
    if t >= SERIES_MIN_T {
        let lead = 0.5 * t * (t / TAU).ln() - 0.5 * t - PI / 8.0;
        let inv = 1.0 / t;
        let inv2 = inv * inv;
        // small terms first
        let mut corr = 0.0;
        for k in (1..=THETA_TERMS).rev() {
            corr = corr * inv2 + theta_series_coeff(k);
        }
        lead + corr * inv
    } else {
        let z = Complex64::new(0.25, 0.5 * t);
        ln_gamma(z).im - 0.5 * t * PI.ln()
    }
}

/// dθ/dt.
pub fn theta_derivative(t: f64) -> Result<f64> {
    if !(t > TAU) || !t.is_finite() {
        return Err(Error::Domain(format!("theta_derivative needs t > 2π, got {t}")));
    }
    Ok(theta_derivative_unchecked(t))
}

pub(crate) fn theta_derivative_unchecked(t: f64) -> f64 {
    if t >= SERIES_MIN_T {
        let inv2 = 1.0 / (t * t);
        let mut corr = 0.0;
        for k in (1..=THETA_TERMS).rev() {
            corr = corr * inv2 + (2.0 * k as f64 - 1.0) * theta_series_coeff(k);
        }
        0.5 * (t / TAU).ln() - corr * inv2
    } else {
        0.5 * digamma(Complex64::new(0.25, 0.5 * t)).re - 0.5 * PI.ln()
    }
}

/// Principal branch W₀ by Halley iteration.
pub fn lambert_w(x: f64) -> Result<f64> {
    let branch_pt = -1.0 / E;
    if x.is_nan() || x < branch_pt {
        return Err(Error::Domain(format!("lambert_w needs x >= -1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == branch_pt {
        return Ok(-1.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if x < -0.25 {
        // expansion about the branch point
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < E {
        // log1p keeps the guess sane near zero
        let l = x.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// log Γ(z) on the branch continuous from the positive real axis, for
/// Re z > 0. Stirling series after shifting |z| past 15.
pub(crate) fn ln_gamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for k in (1..=10).rev() {
        let kf = k as f64;
        series = series * inv2 + BERNOULLI_EVEN[k - 1] / (2.0 * kf * (2.0 * kf - 1.0));
    }
    (w - 0.5) * w.ln() - w + 0.5 * TAU.ln() + series * inv - shift
}

/// ψ(z) = Γ'(z)/Γ(z), same domain as `ln_gamma`.
pub(crate) fn digamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 {
        shift += 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut series = Complex64::new(0.0, 0.0);
    for k in (1..=10).rev() {
        series = series * inv2 + BERNOULLI_EVEN[k - 1] / (2.0 * k as f64);
    }
    w.ln() - 0.5 / w - series * inv2 - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit reference values
    const THETA_100: f64 = 87.972_165_231_787_219_625_483_129_113_748_69;
    const THETA_14: f64 = -1.782_948_700_416_149_906_440_585_159_330_676;
    const THETA_1E5: f64 = 433_752.027_229_170_781_435_644_630_811_217_5;
    const THETA_5E6: f64 = 31_467_678.117_273_494_955_812_633_330_148_8;
    const THETA_PRIME_2PIE: f64 = 0.499_928_538_686_277_358_223_281_755_495_128_7;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn theta_reference_values() {
        assert!(rel(theta(100.0, ThetaMode::Exact).unwrap(), THETA_100) < 1e-13);
        assert!(rel(theta(14.0, ThetaMode::Exact).unwrap(), THETA_14) < 1e-12);
        assert!(rel(theta(1e5, ThetaMode::Exact).unwrap(), THETA_1E5) < 1e-14);
        assert!(rel(theta(5e6, ThetaMode::Exact).unwrap(), THETA_5E6) < 1e-14);
    }

    #[test]
    fn series_and_gamma_branches_meet() {
        for &t in &[9.99, 10.0, 10.01, 12.5] {
            let z = Complex64::new(0.25, 0.5 * t);
            let g = ln_gamma(z).im - 0.5 * t * PI.ln();
            assert!((g - theta_exact(t)).abs() < 1e-12, "t={t}");
            let d = 0.5 * digamma(z).re - 0.5 * PI.ln();
            assert!((d - theta_derivative_unchecked(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn stirling_at_two_pi_e() {
        let v = theta(TAU * E, ThetaMode::StirlingLeading).unwrap();
        assert!((v + PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn theta_domain() {
        assert!(theta(0.0, ThetaMode::Exact).is_err());
        assert!(theta(-1.0, ThetaMode::StirlingLeading).is_err());
        assert!(theta_derivative(TAU).is_err());
    }

    #[test]
    fn theta_derivative_at_two_pi_e() {
        let d = theta_derivative(TAU * E).unwrap();
        assert!(rel(d, THETA_PRIME_2PIE) < 1e-12);
        assert!((d - 0.5).abs() < 1e-4);
    }

    #[test]
    fn lambert_w_fixed_points() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w(-1.0 / E).unwrap(), -1.0);
        assert!(lambert_w(-0.5).is_err());
        let w = lambert_w(-0.3).unwrap();
        assert!((w * w.exp() + 0.3).abs() < 1e-14);
    }

    #[test]
    fn ln_gamma_real_axis() {
        // Γ(5) = 24, Γ(1/2) = √π
        assert!((ln_gamma(Complex64::new(5.0, 0.0)).re - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(Complex64::new(0.5, 0.0)).re - 0.5 * PI.ln()).abs() < 1e-13);
    }
}
