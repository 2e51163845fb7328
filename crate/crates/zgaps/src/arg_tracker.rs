//! # Argument tracking
//!
//! a(t) = lim_{δ→0⁺} arg ζ(1/2 + δ + it), continued horizontally from σ = 10
//! where |ζ − 1| < 2⁻⁹ pins the branch. The σ-path shrinks the distance to
//! the line geometrically and bisects any step whose phase change reaches
//! π/2.
//!
//! At a zero the δ → 0 limit is arg ζ'(ρ). Since ζ'(ρ) = −i e^{−iθ(t)} Z'(t)
//! on the line, its principal value is known in closed form; the δ-ladder
//! only has to select the branch, which it does to within a few hundredths
//! of a radian even where a double precision ordinate sits 10⁻⁹ away from
//! the true zero.

use crate::error::{Error, Result};
use crate::special_fn::theta_exact;
use crate::zeta_engine::{hardy_z_with_derivative, ZeroRecord, ZetaAtHeight};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

pub const SIGMA_START: f64 = 10.0;
pub const MAX_HALVINGS: u32 = 20;
pub const DEFAULT_LADDER: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];
pub const LADDER_TOL: f64 = 1e-4;
/// How far the extrapolated ladder value may sit from the closed-form
/// limit before the branch is considered unreliable.
pub const BRANCH_TOL: f64 = 0.05;
/// Doublings of δ tried after a STEP_FAIL.
pub const STEP_FAIL_RETRIES: u32 = 3;

// ratio by which the distance to the line shrinks per step
const PATH_RATIO: f64 = 0.5;
// below this distance a path ending on the line jumps straight to it
const LINE_SNAP: f64 = 1e-9;

/// a(t) with its decomposition a = A + 2πb.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgRecord {
    pub t: f64,
    pub delta: f64,
    pub a: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    pub b: i64,
}

impl ArgRecord {
    /// Splits an unreduced argument. The stored `a` is rebuilt as A + 2πb so
    /// the identity holds bit for bit.
    pub fn from_unreduced(t: f64, delta: f64, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NoConvergence { t, detail: "non-finite argument".into() });
        }
        let b = (a / TAU).round();
        let big_a = a - TAU * b;
        if !(big_a > -PI && big_a < PI) {
            return Err(Error::NoConvergence { t, detail: format!("principal part {big_a} on the branch cut") });
        }
        Ok(ArgRecord { t, delta, a: big_a + TAU * b, big_a, b: b as i64 })
    }
}

/// Continuous argument along a horizontal path approaching σ = 1/2.
pub(crate) struct Tracker<F: Fn(f64) -> Complex64> {
    f: F,
    t: f64,
    sigma: f64,
    value: Complex64,
    arg: f64,
    ratio: f64,
}

impl<F: Fn(f64) -> Complex64> Tracker<F> {
    pub fn new(f: F, t: f64) -> Self {
        Self::with_ratio(f, t, PATH_RATIO)
    }

    pub fn with_ratio(f: F, t: f64, ratio: f64) -> Self {
        let value = f(SIGMA_START);
        let arg = value.arg();
        Tracker { f, t, sigma: SIGMA_START, value, arg, ratio }
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    /// Moves the path end to `target` ≥ 1/2 (must not increase σ).
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        let end = target - 0.5;
        while self.sigma > target {
            let d = self.sigma - 0.5;
            let mut nd = d * self.ratio;
            if nd <= end || (end == 0.0 && nd < LINE_SNAP) {
                nd = end;
            }
            let mut next = 0.5 + nd;
            let mut halvings = 0;
            loop {
                let w = (self.f)(next);
                let step = (w / self.value).arg();
                if step.abs() < FRAC_PI_2 && w.norm() > 0.0 {
                    self.arg += step;
                    self.value = w;
                    self.sigma = next;
                    break;
                }
                halvings += 1;
                if halvings > MAX_HALVINGS {
                    return Err(Error::StepFail { t: self.t, sigma: next });
                }
                next = 0.5 * (self.sigma + next);
            }
        }
        Ok(())
    }
}

fn zeta_tracker(t: f64) -> Tracker<impl Fn(f64) -> Complex64> {
    let h = ZetaAtHeight::new(t);
    Tracker::new(move |s| h.eval(s), t)
}

fn check_delta(t: f64, delta: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("arg_at needs t > 0, got {t}")));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain(format!("delta must lie in (0, 1/2], got {delta}")));
    }
    Ok(())
}

/// arg ζ(1/2 + δ + it) continued from σ = 10.
pub fn arg_at(t: f64, delta: f64) -> Result<ArgRecord> {
    check_delta(t, delta)?;
    let mut tr = zeta_tracker(t);
    tr.advance_to(0.5 + delta)?;
    ArgRecord::from_unreduced(t, delta, tr.arg())
}

/// [`arg_at`], doubling δ after each STEP_FAIL up to three times.
pub fn arg_at_with_retry(t: f64, delta: f64) -> Result<ArgRecord> {
    let mut d = delta;
    let mut last = None;
    for _ in 0..=STEP_FAIL_RETRIES {
        match arg_at(t, d) {
            Err(e @ Error::StepFail { .. }) => {
                last = Some(e);
                d = (2.0 * d).min(0.5);
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Continuous arg ζ(1/2 + it), the line value itself. Requires ζ(1/2 + it) ≠ 0.
pub(crate) fn arg_on_line(t: f64) -> Result<f64> {
    let mut tr = zeta_tracker(t);
    tr.advance_to(0.5)?;
    Ok(tr.arg())
}

/// Ladder settings for [`arg_limit_at_zero_with`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    /// Strictly decreasing offsets.
    pub deltas: Vec<f64>,
    /// Agreement required between successive rungs.
    pub tol: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig { deltas: DEFAULT_LADDER.to_vec(), tol: LADDER_TOL }
    }
}

impl LadderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.deltas.len() < 2 {
            return Err(Error::Precondition("delta ladder needs at least two rungs".into()));
        }
        if self.deltas.iter().any(|&d| !(d > 0.0 && d <= 0.5)) {
            return Err(Error::Precondition("ladder offsets must lie in (0, 1/2]".into()));
        }
        if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Precondition("ladder offsets must decrease".into()));
        }
        Ok(())
    }

    pub fn smallest(&self) -> f64 {
        *self.deltas.last().expect("validated ladder")
    }
}

/// Principal value of arg ζ'(1/2 + it) at a zero, from θ and the sign of Z'.
pub fn limit_principal(t: f64, dz: f64) -> f64 {
    let raw = -FRAC_PI_2 - theta_exact(t) + if dz < 0.0 { PI } else { 0.0 };
    raw - TAU * (raw / TAU).round()
}

/// One rung of the ladder as observed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    pub delta: f64,
    /// tracked arg minus the offset correction atan2(ε, δ)
    pub value: f64,
}

/// a(t_n) with the ladder that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub record: ArgRecord,
    pub rungs: Vec<Rung>,
    pub extrapolated: f64,
}

/// a(t_n) for a refined zero, default ladder.
pub fn arg_limit_at_zero(zr: &ZeroRecord) -> Result<ArgRecord> {
    Ok(arg_limit_report(zr.t, &LadderConfig::default())?.record)
}

/// a(t_n) for a refined zero.
pub fn arg_limit_at_zero_with(zr: &ZeroRecord, cfg: &LadderConfig) -> Result<ArgRecord> {
    Ok(arg_limit_report(zr.t, cfg)?.record)
}

/// Full ladder report at the ordinate `t` of a refined zero.
///
/// The path is tracked once and extended rung by rung. Each rung is corrected
/// for the zero's offset ε ≈ Z/Z' from `t`, then successive rungs are
/// Richardson-extrapolated (the residual is linear in δ). The ladder has
/// settled once two successive rungs, or two successive extrapolants, agree
/// to within the tolerance.
pub fn arg_limit_report(t: f64, cfg: &LadderConfig) -> Result<LadderReport> {
    cfg.validate()?;
    let (z, dz) = hardy_z_with_derivative(t)?;
    if dz == 0.0 || !dz.is_finite() {
        return Err(Error::NoConvergence { t, detail: "Z' vanishes at the zero".into() });
    }
    let eps = z / dz;
    let mut rungs: Vec<Rung> = Vec::new();
    let mut extrapolated = None;
    let mut last_extrapolant = None;
    let mut tr = zeta_tracker(t);
    let mut broken = false;
    for &delta in &cfg.deltas {
        let raw = if broken {
            arg_at_with_retry(t, delta).map(|r| (r.a, r.delta))
        } else {
            match tr.advance_to(0.5 + delta) {
                Ok(()) => Ok((tr.arg(), delta)),
                Err(Error::StepFail { .. }) => {
                    broken = true;
                    arg_at_with_retry(t, delta).map(|r| (r.a, r.delta))
                }
                Err(e) => Err(e),
            }
        };
        let (a, used) = match raw {
            Ok(v) => v,
            Err(Error::StepFail { .. }) => continue,
            Err(e) => return Err(e),
        };
        let value = a - eps.atan2(used);
        if let Some(prev) = rungs.last().copied() {
            if used < prev.delta {
                let e = value + (value - prev.value) * used / (prev.delta - used);
                // raw rungs settle, or (close pairs, steep linear term) the extrapolants do
                let settled = (value - prev.value).abs() < cfg.tol
                    || last_extrapolant.is_some_and(|p: f64| (e - p).abs() < cfg.tol);
                if settled {
                    extrapolated = Some(e);
                    rungs.push(Rung { delta: used, value });
                    break;
                }
                last_extrapolant = Some(e);
            }
        }
        rungs.push(Rung { delta: used, value });
    }
    let Some(e) = extrapolated else {
        return Err(Error::NoConvergence { t, detail: format!("ladder did not stabilize: {rungs:?}") });
    };
    let principal = limit_principal(t, dz);
    let b = ((e - principal) / TAU).round();
    let a = principal + TAU * b;
    if (e - a).abs() > BRANCH_TOL {
        return Err(Error::NoConvergence {
            t,
            detail: format!("ladder limit {e} is {} from the closed-form value {a}", (e - a).abs()),
        });
    }
    let smallest = rungs.last().expect("converged ladder has rungs").delta;
    let record = ArgRecord::from_unreduced(t, smallest, a)?;
    Ok(LadderReport { record, rungs, extrapolated: e })
}

/// b(z_hi) − b(z_lo) for consecutive zeros.
pub fn branch_delta(z_lo: &ZeroRecord, z_hi: &ZeroRecord) -> Result<i64> {
    if z_hi.n != z_lo.n + 1 {
        return Err(Error::Precondition(format!(
            "branch_delta needs consecutive zeros, got n = {} and {}",
            z_lo.n, z_hi.n
        )));
    }
    let lo = arg_limit_at_zero(z_lo)?;
    let hi = arg_limit_at_zero(z_hi)?;
    Ok(hi.b - lo.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta_engine::Method;

    const T1: f64 = 14.134_725_141_734_693_790_457_251_983_562;

    fn zero(n: u64, t: f64) -> ZeroRecord {
        ZeroRecord { n, t, method: Method::SignScan, residual_trans: None, bracket_width: 0.0 }
    }

    #[test]
    fn below_first_zero() {
        for &t in &[1.0, 5.0, 10.0, 14.0] {
            for &d in &[0.5, 1e-2, 1e-5] {
                let r = arg_at(t, d).unwrap();
                assert!(r.a.abs() < PI && r.b == 0, "t={t} d={d}: {r:?}");
            }
        }
    }

    #[test]
    fn at_first_zero() {
        let r = arg_at(T1, 1e-5).unwrap();
        assert_eq!(r.b, 0);
        assert_eq!(r.a, r.big_a);
        let lim = arg_limit_at_zero(&zero(1, T1)).unwrap();
        let res = theta_exact(T1) + lim.a + FRAC_PI_2;
        assert!(res.abs() < 1e-6, "residual {res}");
    }

    #[test]
    fn domain_checks() {
        assert!(arg_at(0.0, 0.1).is_err());
        assert!(arg_at(10.0, 0.0).is_err());
        assert!(arg_at(10.0, 0.6).is_err());
    }

    #[test]
    fn decomposition_is_exact() {
        for &a in &[0.0, 3.0, -3.1, 7.0, -20.5, 1e3] {
            let r = ArgRecord::from_unreduced(1.0, 1e-3, a).unwrap();
            assert_eq!(r.a - r.big_a - TAU * r.b as f64, 0.0);
            assert!(r.big_a > -PI && r.big_a < PI);
            assert!((r.a - a).abs() < 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn branch_delta_needs_neighbours() {
        assert!(branch_delta(&zero(1, T1), &zero(3, 25.0)).is_err());
    }

    // halving the σ-step everywhere leaves the tracked argument unchanged
    #[test]
    fn path_independent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let t: f64 = rng.gen_range(15.0..5000.0);
            let delta: f64 = 10f64.powf(rng.gen_range(-6.0..-1.0));
            let h = ZetaAtHeight::new(t);
            let mut coarse = Tracker::with_ratio(|s| h.eval(s), t, PATH_RATIO);
            let mut fine = Tracker::with_ratio(|s| h.eval(s), t, PATH_RATIO.sqrt());
            coarse.advance_to(0.5 + delta).unwrap();
            fine.advance_to(0.5 + delta).unwrap();
            assert!((coarse.arg() - fine.arg()).abs() < 1e-6, "t={t} delta={delta}");
        }
    }
}
