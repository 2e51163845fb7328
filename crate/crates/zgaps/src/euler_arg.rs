//! # a(t) from the Euler product
//!
//! a(t) ≈ −Im Σ_{p ≤ p_N} log(1 − χ(p) p^{−(1/2+δ+it)}), with N ∼ t² for the
//! zeta case. Every factor has |χ(p) p^{−1/2−δ}| < 1, so each logarithm is
//! principal and the sum needs no branch tracking.

use crate::error::{Error, Result};
use crate::lfunc::DirichletCharacter;
use crate::primes::{load_or_build, primes_up_to};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_MAX_PRIMES: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CutoffRule {
    FixedN(usize),
    /// ⌈c·t²⌉ primes at ordinate t
    GonekTSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerArgConfig {
    pub cutoff_rule: CutoffRule,
    pub delta: f64,
    /// constant c in the Gonek rule
    pub gonek_constant: f64,
    pub max_primes: usize,
}

impl Default for EulerArgConfig {
    fn default() -> Self {
        EulerArgConfig {
            cutoff_rule: CutoffRule::GonekTSquared,
            delta: 1e-6,
            gonek_constant: 1.0,
            max_primes: DEFAULT_MAX_PRIMES,
        }
    }
}

impl EulerArgConfig {
    /// Number of primes kept at ordinate t.
    pub fn cutoff(&self, t: f64) -> Result<usize> {
        let n = match self.cutoff_rule {
            CutoffRule::FixedN(n) => n,
            CutoffRule::GonekTSquared => {
                let x = (self.gonek_constant * t * t).ceil();
                if !(x <= self.max_primes as f64) {
                    return Err(Error::CutoffExceeded { required: x.min(u64::MAX as f64) as u64, cap: self.max_primes as u64 });
                }
                x.max(1.0) as usize
            }
        };
        if n > self.max_primes {
            return Err(Error::CutoffExceeded { required: n as u64, cap: self.max_primes as u64 });
        }
        Ok(n)
    }
}

// Neumaier summation
#[derive(Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// −Σ arg(1 − χ(p) p^{−σ−it}) over the given primes.
fn partial_sum(t: f64, sigma: f64, chi: Option<&DirichletCharacter>, primes: &[u64]) -> f64 {
    let mut acc = Compensated::default();
    for &p in primes {
        let c = chi.map_or(Complex64::new(1.0, 0.0), |x| x.value(p));
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        let l = (p as f64).ln();
        let w = c * Complex64::from_polar((-sigma * l).exp(), -t * l);
        debug_assert!(w.norm() < 1.0);
        acc.add(-(-w.im).atan2(1.0 - w.re));
    }
    acc.value()
}

/// Truncated Euler-product argument at 1/2 + δ + it; `chi = None` is ζ.
/// `primes` must hold at least the configured cutoff.
pub fn euler_arg(t: f64, chi: Option<&DirichletCharacter>, cfg: &EulerArgConfig, primes: &[u64]) -> Result<f64> {
    if !t.is_finite() || t == 0.0 {
        return Err(Error::Domain(format!("euler_arg needs t != 0, got {t}")));
    }
    if !(cfg.delta >= 0.0) {
        return Err(Error::Domain(format!("delta must be >= 0, got {}", cfg.delta)));
    }
    let n = cfg.cutoff(t.abs())?;
    if primes.len() < n {
        return Err(Error::Precondition(format!("{n} primes needed, {} supplied", primes.len())));
    }
    Ok(partial_sum(t, 0.5 + cfg.delta, chi, &primes[..n]))
}

/// [`euler_arg`] with primes from the cache (built on first use).
pub fn euler_arg_cached(t: f64, chi: Option<&DirichletCharacter>, cfg: &EulerArgConfig, cache: Option<&Path>) -> Result<f64> {
    let n = cfg.cutoff(t.abs())?;
    let primes = load_or_build(cache, n)?;
    euler_arg(t, chi, cfg, &primes)
}

/// The same sum at real part σ > 1 over all of `primes`.
pub fn euler_arg_sigma(t: f64, sigma: f64, chi: Option<&DirichletCharacter>, primes: &[u64]) -> Result<f64> {
    if !(sigma > 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!("euler_arg_sigma needs sigma > 1, got {sigma}")));
    }
    Ok(partial_sum(t, sigma, chi, primes))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharWalk {
    pub x: f64,
    /// Σ_{p ≤ x} χ(p)
    pub c: Complex64,
    /// C/(√x log² x)
    pub normalized: Complex64,
}

/// C(x) = Σ_{p ≤ x} χ(p) for a non-principal character.
pub fn char_walk(chi: &DirichletCharacter, x: f64) -> Result<CharWalk> {
    if chi.is_principal() {
        return Err(Error::Character("char_walk needs a non-principal character".into()));
    }
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::Domain(format!("char_walk needs x >= 2, got {x}")));
    }
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    for p in primes_up_to(x.floor() as u64) {
        let v = chi.value(p);
        re.add(v.re);
        im.add(v.im);
    }
    let c = Complex64::new(re.value(), im.value());
    let l = x.ln();
    Ok(CharWalk { x, c, normalized: c / (x.sqrt() * l * l) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::first_primes;
    use crate::zeta_engine::zeta_off_line;

    #[test]
    fn walk_mod_three() {
        let chi = DirichletCharacter::new(3, 1).unwrap();
        let w = char_walk(&chi, 7.0).unwrap();
        assert_eq!(w.c, Complex64::new(-1.0, 0.0));
        assert!(char_walk(&DirichletCharacter::new(3, 0).unwrap(), 7.0).is_err());
    }

    #[test]
    fn sigma_two_matches_zeta() {
        let primes = first_primes(1_000_000);
        for t in [3.3, 50.0, 123.4, 480.0] {
            let a = euler_arg_sigma(t, 2.0, None, &primes).unwrap();
            let z = zeta_off_line(2.0, t).unwrap().arg();
            assert!((a - z).abs() < 1e-8, "t={t}: {a} vs {z}");
        }
    }

    #[test]
    fn odd_in_t() {
        let primes = first_primes(10_000);
        let cfg = EulerArgConfig { cutoff_rule: CutoffRule::FixedN(10_000), ..Default::default() };
        let chi = DirichletCharacter::new(4, 1).unwrap();
        for t in [17.5, 60.25] {
            let a = euler_arg(t, None, &cfg, &primes).unwrap();
            assert!((a + euler_arg(-t, None, &cfg, &primes).unwrap()).abs() < 1e-12);
            let b = euler_arg(t, Some(&chi), &cfg, &primes).unwrap();
            assert!((b + euler_arg(-t, Some(&chi), &cfg, &primes).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn cutoff_cap() {
        let cfg = EulerArgConfig { max_primes: 1000, ..Default::default() };
        assert_eq!(cfg.cutoff(31.0).unwrap(), 961);
        assert!(matches!(cfg.cutoff(32.0), Err(Error::CutoffExceeded { required: 1024, cap: 1000 })));
    }
}
