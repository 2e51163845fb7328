//! # Zeros from the transcendental equation
//!
//! t_n solves θ(t) + a(t) = (n − 3/2)π. Away from zeros the left side minus
//! the right is the step function π(N(t) − n + 1/2), so the method is a
//! short quasi-Newton walk from the Lambert W seed (derivative θ' only) until
//! the sign flips, then bisection on the sign.

use crate::arg_tracker::{arg_at_with_retry, arg_limit_report, ArgRecord, LadderConfig};
use crate::error::{Error, Result};
use crate::special_fn::{lambert_w, theta_derivative_unchecked, theta_exact};
use crate::zeta_engine::{average_gap, scan_window, Method, ZeroRecord};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI, TAU};

pub const RESIDUAL_TOL: f64 = 1e-6;
pub const MAX_ITERATIONS: u32 = 50;
const NEWTON_STEPS: u32 = 8;
const BISECT_WIDTH: f64 = 1e-9;
/// Route agreement required when cross-validating.
pub const AGREEMENT_TOL: f64 = 1e-8;

/// t₀ = 2π(n − 11/8)/W((n − 11/8)/e).
pub fn seed_ordinate(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("seed_ordinate needs n >= 2, got {n}")));
    }
    let m = n as f64 - 11.0 / 8.0;
    Ok(TAU * m / lambert_w(m / E)?)
}

/// (t₀/2) log(t₀/2πe) − π/8 − (n − 3/2)π at the seed.
pub fn seed_residual(n: u64) -> Result<f64> {
    let t = seed_ordinate(n)?;
    Ok(0.5 * t * (t / (TAU * E)).ln() - PI / 8.0 - (n as f64 - 1.5) * PI)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub ladder: LadderConfig,
    /// Compare against the sign-scan zeros in [t − 2π/log t, t + 2π/log t].
    pub cross_validate: bool,
}


#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: u64,
    pub seed: f64,
    pub t: f64,
    pub iterations: u32,
    pub residual: f64,
    /// None when cross-validation was not requested.
    pub agreed_with_scan: Option<bool>,
    pub bracket_width: f64,
    /// a(t_n) at the solution.
    pub arg: ArgRecord,
}

impl SolveReport {
    pub fn zero_record(&self) -> ZeroRecord {
        ZeroRecord {
            n: self.n,
            t: self.t,
            method: Method::Transcendental,
            residual_trans: Some(self.residual),
            bracket_width: self.bracket_width,
        }
    }
}

fn target(n: u64) -> f64 {
    (n as f64 - 1.5) * PI
}

/// F(t) = θ(t) + a_δ(t) − (n − 3/2)π.
fn f_value(t: f64, n: u64, delta: f64) -> Result<f64> {
    Ok(theta_exact(t) + arg_at_with_retry(t, delta)?.a - target(n))
}

/// Solves for t_n, default settings.
pub fn solve_transcendental(n: u64) -> Result<SolveReport> {
    solve_transcendental_with(n, &SolveConfig::default())
}

pub fn solve_transcendental_with(n: u64, cfg: &SolveConfig) -> Result<SolveReport> {
    if n < 2 {
        return Err(Error::Domain("solve_transcendental needs n >= 2; n = 1 comes from the scan".into()));
    }
    cfg.ladder.validate()?;
    let delta = cfg.ladder.smallest();
    let seed = seed_ordinate(n)?;
    let gap = average_gap(seed);
    let mut iterations = 0u32;
    let mut lo: Option<f64> = None;
    let mut hi: Option<f64> = None;
    let note = |t: f64, f: f64, lo: &mut Option<f64>, hi: &mut Option<f64>| {
        if f < 0.0 {
            if lo.is_none_or(|l| t > l) {
                *lo = Some(t);
            }
        } else if hi.is_none_or(|h| t < h) {
            *hi = Some(t);
        }
    };

    let mut t = seed;
    for _ in 0..NEWTON_STEPS {
        let f = f_value(t, n, delta)?;
        iterations += 1;
        note(t, f, &mut lo, &mut hi);
        if lo.is_some() && hi.is_some() {
            break;
        }
        let step = (-f / theta_derivative_unchecked(t)).clamp(-2.0 * gap, 2.0 * gap);
        t += step;
    }

    let (mut a, mut b) = match (lo, hi) {
        (Some(l), Some(h)) if l < h => (l, h),
        _ => {
            // Newton did not bracket: fixed bracket around the seed, widened once
            let mut found = None;
            for width in [4.0 * gap, 8.0 * gap] {
                let l = (seed - width).max(TAU + 1e-3);
                let h = seed + width;
                let fl = f_value(l, n, delta)?;
                let fh = f_value(h, n, delta)?;
                iterations += 2;
                if fl < 0.0 && fh >= 0.0 {
                    found = Some((l, h));
                    break;
                }
            }
            found.ok_or(Error::Oscillation { n })?
        }
    };

    while b - a > BISECT_WIDTH && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let f = f_value(mid, n, delta)?;
        iterations += 1;
        if f < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    if b - a > BISECT_WIDTH && iterations >= MAX_ITERATIONS {
        return Err(Error::NoConvergence { t: 0.5 * (a + b), detail: format!("iteration cap hit for n = {n}") });
    }
    let t = 0.5 * (a + b);
    let rep = arg_limit_report(t, &cfg.ladder)?;
    let residual = theta_exact(t) + rep.record.a - target(n);
    if !(residual.abs() < RESIDUAL_TOL) {
        return Err(Error::NoConvergence { t, detail: format!("residual {residual} for n = {n}") });
    }
    let agreed_with_scan = if cfg.cross_validate { Some(cross_validate(n, t, &cfg.ladder)?) } else { None };
    Ok(SolveReport { n, seed, t, iterations, residual, agreed_with_scan, bracket_width: b - a, arg: rep.record })
}

/// Residual of the equation for index `n` at a zero with ordinate `t`.
pub fn transcendental_residual(n: u64, t: f64, arg: &ArgRecord) -> f64 {
    theta_exact(t) + arg.a - target(n)
}

/// Scan zeros in [t − 2π/log t, t + 2π/log t] satisfying the equation for
/// index n. Exactly one is expected; returns whether it matches t.
fn cross_validate(n: u64, t: f64, ladder: &LadderConfig) -> Result<bool> {
    let half = TAU / t.ln();
    let window = scan_window((t - half).max(TAU + 1e-3), t + half)?;
    let mut matches = Vec::new();
    for z in &window.zeros {
        let rec = arg_limit_report(z.t, ladder)?.record;
        if transcendental_residual(n, z.t, &rec).abs() < RESIDUAL_TOL {
            matches.push(z.t);
        }
    }
    if matches.len() != 1 {
        return Err(Error::MultipleCandidates { n, t, count: matches.len() });
    }
    Ok((matches[0] - t).abs() < AGREEMENT_TOL)
}
