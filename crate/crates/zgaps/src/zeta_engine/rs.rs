//! Riemann-Siegel formula: Z(t) with corrections C0..C3, and the
//! general-σ leading-order approximate functional equation used off the line.

use crate::extended::{f_series, psi_series};
use crate::special_fn::{ln_gamma, theta_derivative_unchecked, theta_exact};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::f64::consts::{PI, TAU};

const PSI_TERMS: usize = 64;
const F_TERMS: usize = 44;
const MAX_DERIV: usize = 10;

struct Tables {
    // psi_deriv[j][k]: coefficient of x^k in the j-th derivative of Ψ(1/2 + x)
    psi_deriv: Vec<Vec<f64>>,
    // coefficients of F in powers of z²
    f: Vec<Complex64>,
}

static TABLES: Lazy<Tables> = Lazy::new(|| {
    let even = psi_series(PSI_TERMS);
    let mut p = vec![0.0; 2 * PSI_TERMS];
    for (m, c) in even.iter().enumerate() {
        p[2 * m] = *c;
    }
    let mut psi_deriv = vec![p];
    for _ in 0..MAX_DERIV {
        let prev: &Vec<f64> = psi_deriv.last().expect("nonempty");
        let d: Vec<f64> = (1..prev.len()).map(|k| prev[k] * k as f64).collect();
        psi_deriv.push(d);
    }
    Tables { psi_deriv, f: f_series(F_TERMS) }
});

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// j-th derivative of Ψ at p = 1/2 + x.
fn psi(j: usize, x: f64) -> f64 {
    horner(&TABLES.psi_deriv[j], x)
}

/// F(z) for |z| ≤ 1.
pub(crate) fn f_fn(z: f64) -> Complex64 {
    let y = z * z;
    TABLES.f.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * y + v)
}

/// Correction coefficients C0..C3 at x = p − 1/2, and their p-derivatives.
fn corrections(x: f64) -> ([f64; 4], [f64; 4]) {
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let c = |o: usize| -> [f64; 4] {
        [
            psi(o, x),
            -psi(3 + o, x) / (96.0 * pi2),
            psi(2 + o, x) / (64.0 * pi2) + psi(6 + o, x) / (18432.0 * pi4),
            -psi(1 + o, x) / (64.0 * pi2)
                - psi(5 + o, x) / (3840.0 * pi4)
                - psi(9 + o, x) / (5_308_416.0 * pi6),
        ]
    };
    (c(0), c(1))
}

/// Z(t) and Z'(t) by Riemann-Siegel. Meant for t ≥ 200 or so.
pub(crate) fn rs_z(t: f64) -> (f64, f64) {
    let a = (t / TAU).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let th = theta_exact(t);
    let thp = theta_derivative_unchecked(t);
    let mut main = 0.0;
    let mut dmain = 0.0;
    for k in 1..=n {
        let l = (k as f64).ln();
        let w = 1.0 / (k as f64).sqrt();
        let (s, c) = (th - t * l).sin_cos();
        main += w * c;
        dmain -= w * s * (thp - l);
    }
    let (cs, dcs) = corrections(p - 0.5);
    let inv_a = 1.0 / a;
    let da = inv_a / (4.0 * PI);
    let mut r = 0.0;
    let mut dr = 0.0;
    let mut pw = inv_a.sqrt();
    for k in 0..4 {
        r += cs[k] * pw;
        dr += dcs[k] * pw * da + cs[k] * (-0.5 - k as f64) * pw * inv_a * da;
        pw *= inv_a;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    (2.0 * main + sign * r, 2.0 * dmain + sign * dr)
}

/// χ(s) = π^{s−1/2} Γ((1−s)/2)/Γ(s/2).
pub(crate) fn chi(s: Complex64) -> Complex64 {
    ((s - 0.5) * PI.ln() + ln_gamma((1.0 - s) * 0.5) - ln_gamma(s * 0.5)).exp()
}

/// lnΓ(z + h) − lnΓ(z) for |z| ≥ 500 and |h| ≤ 5, without forming either
/// logarithm (both are ~|z| log|z| and would lose the difference to rounding).
fn ln_gamma_step(z: Complex64, h: Complex64) -> Complex64 {
    let w = h / z;
    // (z − 1/2) log(1 + w), series since |w| ≤ 1/100
    let mut l1p = Complex64::new(0.0, 0.0);
    let mut p = w;
    for k in 1..=12 {
        let term = p / k as f64;
        l1p += if k % 2 == 1 { term } else { -term };
        p *= w;
    }
    let mut d = (z - 0.5) * l1p + h * (z + h).ln() - h;
    // Stirling corrections B_2k/(2k(2k−1)) z^{1−2k}
    let zh = z + h;
    for (k, b) in [(1, 1.0 / 6.0), (2, -1.0 / 30.0), (3, 1.0 / 42.0)] {
        let e = 1 - 2 * k;
        d += b / (2 * k * (2 * k - 1)) as f64 * (zh.powi(e) - z.powi(e));
    }
    d
}

// width of the σ-band above 1/2 in which the line correction is blended in
const PATCH_BAND: f64 = 0.25;

/// ζ(σ + it) at one fixed large t (≥ 1000) for many σ.
///
/// Leading-order Riemann-Siegel approximation valid for every σ:
/// Σ n^{−s} + χ(s) Σ n^{s−1} + (−1)^{N−1}[U a^{−σ} F(P) + χ(s) Ū a^{σ−1} F̄(P)].
/// Its error near σ = 1/2 is larger than that of Z with four corrections,
/// so the difference at σ = 1/2 is added back and tapered off linearly
/// over the band 1/2 ≤ σ ≤ 3/4.
pub(crate) struct AfeHeight {
    t: f64,
    a: f64,
    logs: Vec<f64>,
    phases: Vec<Complex64>,
    u: Complex64,
    f_p: Complex64,
    sign: f64,
    patch: Complex64,
    chi_half: Complex64,
}

impl AfeHeight {
    pub fn new(t: f64) -> Self {
        let a = (t / TAU).sqrt();
        let n = a.floor() as usize;
        let logs: Vec<f64> = (1..=n).map(|k| (k as f64).ln()).collect();
        let phases = logs
            .iter()
            .map(|&l| {
                let (s, c) = (t * l).sin_cos();
                Complex64::new(c, -s)
            })
            .collect();
        let lead = 0.5 * t * (t / TAU).ln() - 0.5 * t - PI / 8.0;
        let u = Complex64::from_polar(1.0, -lead);
        let p = 1.0 - 2.0 * (a - n as f64);
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let mut h = AfeHeight { t, a, logs, phases, u, f_p: f_fn(p), sign, patch: Complex64::new(0.0, 0.0), chi_half: chi(Complex64::new(0.5, t)) };
        let (z, _) = rs_z(t);
        let on_line = Complex64::from_polar(1.0, -theta_exact(t)) * z;
        h.patch = on_line - h.leading(0.5);
        h
    }

    /// χ(σ + it) = χ(1/2 + it)·exp(Δ), smooth in σ at the fixed height.
    fn chi(&self, sigma: f64) -> Complex64 {
        let d = sigma - 0.5;
        if d == 0.0 {
            return self.chi_half;
        }
        let a = Complex64::new(0.25, -0.5 * self.t);
        let b = Complex64::new(0.25, 0.5 * self.t);
        let h = Complex64::new(0.5 * d, 0.0);
        let delta = d * PI.ln() + ln_gamma_step(a, -h) - ln_gamma_step(b, h);
        self.chi_half * delta.exp()
    }

    fn leading(&self, sigma: f64) -> Complex64 {
        let (mut r1, mut i1, mut r2, mut i2) = (0.0, 0.0, 0.0, 0.0);
        for (l, ph) in self.logs.iter().zip(&self.phases) {
            let m1 = (-sigma * l).exp();
            let m2 = ((sigma - 1.0) * l).exp();
            r1 += m1 * ph.re;
            i1 += m1 * ph.im;
            r2 += m2 * ph.re;
            i2 -= m2 * ph.im;
        }
        let x = self.chi(sigma);
        let rem = self.sign
            * (self.u * self.a.powf(-sigma) * self.f_p
                + x * self.u.conj() * self.a.powf(sigma - 1.0) * self.f_p.conj());
        Complex64::new(r1, i1) + x * Complex64::new(r2, i2) + rem
    }

    pub fn eval(&self, sigma: f64) -> Complex64 {
        let w = 1.0 - (sigma - 0.5) / PATCH_BAND;
        let base = self.leading(sigma);
        if w > 0.0 {
            base + self.patch * w.min(1.0)
        } else {
            base
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_height_chi_matches_direct() {
        for t in [1000.0, 54_321.5] {
            let h = AfeHeight::new(t);
            for sigma in [0.5, 0.500001, 0.75, 2.0, 10.0] {
                let direct = chi(Complex64::new(sigma, t));
                assert!((h.chi(sigma) / direct - 1.0).norm() < 1e-10, "t={t} sigma={sigma}");
            }
        }
    }

    #[test]
    fn z_reference_values() {
        // 40-digit reference values of Z(t)
        let cases = [
            (200.5, 3.578_675_925_068_839_156_225_606),
            (1000.25, 2.041_033_000_695_968_607_517_41),
            (10000.125, 0.240_026_757_720_237_113_404_003_4),
            (100000.5, 4.634_042_594_998_132_402_058_704),
            (1000000.3, -3.412_709_505_710_782_429_594_776),
        ];
        for (t, z) in cases {
            let (got, _) = rs_z(t);
            // truncation after C3 leaves about 2e-7 at t = 200
            let tol = if t < 1000.0 { 1e-6 } else { 1e-8 };
            assert!((got - z).abs() < tol, "t={t}: {got} vs {z}");
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for &t in &[250.0, 3000.7, 54321.0] {
            let h = 1e-4;
            let fd = (rs_z(t + h).0 - rs_z(t - h).0) / (2.0 * h);
            let (_, d) = rs_z(t);
            assert!((fd - d).abs() < 1e-5 * (1.0 + d.abs()), "t={t}: {fd} vs {d}");
        }
    }

    #[test]
    fn f_is_finite_at_removable_points() {
        for &z in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            assert!(f_fn(z).norm().is_finite());
        }
        // closed form away from the singular points
        let z: f64 = 0.3;
        let num = Complex64::from_polar(1.0, PI * (z * z / 2.0 + 0.375))
            - Complex64::new(0.0, 2f64.sqrt() * (PI * z / 2.0).cos());
        let direct = num / (2.0 * (PI * z).cos());
        assert!((f_fn(z) - direct).norm() < 1e-14);
    }

    #[test]
    fn off_line_reference() {
        // ζ(1.5 + 10000i)
        let h = AfeHeight::new(1e4);
        let v = h.eval(1.5);
        let r = Complex64::new(0.800_665_107_414_076_6, -0.389_382_748_900_381_3);
        // leading order only, about a^{-σ-1} off
        assert!((v - r).norm() < 5e-5, "{v}");
    }
}
