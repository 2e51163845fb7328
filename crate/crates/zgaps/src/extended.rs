//! Extended-precision evaluators (128-bit mantissa by default, about 38
//! significant digits) built on `astro-float`.
//!
//! These are slow and only meant for verification subsets at small heights:
//! theta, zeta by Euler-Maclaurin, Hardy Z, zero refinement and the literal
//! δ-ladder of arg ζ(1/2 + δ + it). The Taylor coefficients used by the
//! double-precision Riemann-Siegel code are also computed here, because the
//! series division that produces them is unstable in binary64.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in bits.
pub const EXT_BITS: usize = 128;

/// Largest ordinate the extended evaluators accept. Cost grows linearly in t.
pub const EXT_MAX_T: f64 = 2_000.0;

/// Rounds to the nearest binary64.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    let Some((m, _n, sign, e, _)) = x.as_raw_parts() else {
        return if x.is_inf_neg() { f64::NEG_INFINITY } else { f64::INFINITY };
    };
    // value = 0.m * 2^e, most significant word last
    let top = m[m.len() - 1] as f64;
    let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
    let mant = top + next / 18_446_744_073_709_551_616.0;
    let v = mant * 2f64.powi(-64) * 2f64.powi(e);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Working context: precision plus the constants cache astro-float needs.
pub struct Ext {
    pub p: usize,
    cc: Consts,
    bernoulli: Vec<BigFloat>,
}

#[derive(Clone, Debug)]
pub struct ExtComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Ext {
    pub fn new(p: usize) -> Self {
        let cc = Consts::new().expect("astro-float constants cache");
        Ext { p, cc, bernoulli: Vec::new() }
    }

    pub fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn int(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.p)
    }

    pub fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, astro_float::Radix::Dec, self.p, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }
    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }
    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }
    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }
    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }
    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }
    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.p, RM, &mut self.cc)
    }
    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.p, RM, &mut self.cc)
    }
    pub fn atan(&mut self, a: &BigFloat) -> BigFloat {
        a.atan(self.p, RM, &mut self.cc)
    }

    /// atan2 for x > 0 or y ≠ 0.
    pub fn atan2(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let pi = self.pi();
        if x.is_zero() {
            let half = self.div(&pi, &self.int(2));
            return if y.is_negative() { half.neg() } else { half };
        }
        let r = self.div(y, x);
        let base = self.atan(&r);
        if x.is_positive() {
            base
        } else if y.is_negative() {
            self.sub(&base, &pi)
        } else {
            self.add(&base, &pi)
        }
    }

    // ---- complex helpers ----

    pub fn c(&self, re: BigFloat, im: BigFloat) -> ExtComplex {
        ExtComplex { re, im }
    }
    pub fn c_from(&self, z: Complex64) -> ExtComplex {
        ExtComplex { re: self.num(z.re), im: self.num(z.im) }
    }
    pub fn c_add(&self, a: &ExtComplex, b: &ExtComplex) -> ExtComplex {
        ExtComplex { re: self.add(&a.re, &b.re), im: self.add(&a.im, &b.im) }
    }
    pub fn c_sub(&self, a: &ExtComplex, b: &ExtComplex) -> ExtComplex {
        ExtComplex { re: self.sub(&a.re, &b.re), im: self.sub(&a.im, &b.im) }
    }
    pub fn c_mul(&self, a: &ExtComplex, b: &ExtComplex) -> ExtComplex {
        let re = self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re));
        ExtComplex { re, im }
    }
    pub fn c_scale(&self, a: &ExtComplex, k: &BigFloat) -> ExtComplex {
        ExtComplex { re: self.mul(&a.re, k), im: self.mul(&a.im, k) }
    }
    pub fn c_div(&self, a: &ExtComplex, b: &ExtComplex) -> ExtComplex {
        let d = self.add(&self.mul(&b.re, &b.re), &self.mul(&b.im, &b.im));
        let re = self.add(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.sub(&self.mul(&a.im, &b.re), &self.mul(&a.re, &b.im));
        ExtComplex { re: self.div(&re, &d), im: self.div(&im, &d) }
    }
    pub fn c_exp(&mut self, a: &ExtComplex) -> ExtComplex {
        let m = self.exp(&a.re);
        let c = self.cos(&a.im);
        let s = self.sin(&a.im);
        ExtComplex { re: self.mul(&m, &c), im: self.mul(&m, &s) }
    }
    /// Principal log; only used with Re a > 0 or away from the negative axis.
    pub fn c_ln(&mut self, a: &ExtComplex) -> ExtComplex {
        let n2 = self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im));
        let half = self.num(0.5);
        let l = self.ln(&n2);
        let re = self.mul(&half, &l);
        let im = self.atan2(&a.im, &a.re);
        ExtComplex { re, im }
    }
    pub fn c_to(&self, a: &ExtComplex) -> Complex64 {
        Complex64::new(to_f64(&a.re), to_f64(&a.im))
    }

    /// B_2, B_4, ..., B_2k from the standard recurrence.
    fn bernoulli_even(&mut self, k: usize) -> Vec<BigFloat> {
        if self.bernoulli.len() >= k {
            return self.bernoulli[..k].to_vec();
        }
        // the recurrence loses bits, so run it at double the working precision
        let wp = 2 * self.p + 64;
        let m_max = 2 * k;
        let mut b: Vec<BigFloat> = vec![BigFloat::from_i64(1, wp)];
        for m in 1..=m_max {
            // B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
            let mut acc = BigFloat::from_i64(0, wp);
            let mut binom = BigFloat::from_i64(1, wp);
            for (j, bj) in b.iter().enumerate() {
                acc = acc.add(&binom.mul(bj, wp, RM), wp, RM);
                // C(m+1, j+1) = C(m+1, j) (m+1-j)/(j+1)
                binom = binom
                    .mul(&BigFloat::from_i64((m + 1 - j) as i64, wp), wp, RM)
                    .div(&BigFloat::from_i64((j + 1) as i64, wp), wp, RM);
            }
            let bm = acc.div(&BigFloat::from_i64((m + 1) as i64, wp), wp, RM).neg();
            b.push(bm);
        }
        self.bernoulli = (1..=k)
            .map(|j| {
                let mut v = b[2 * j].clone();
                v.set_precision(self.p, RM).ok();
                v
            })
            .collect();
        self.bernoulli.clone()
    }

    /// log Γ(z) for Re z > 0, continuous branch.
    pub fn ln_gamma(&mut self, z: &ExtComplex) -> ExtComplex {
        let mut w = z.clone();
        let mut shift = self.c(self.int(0), self.int(0));
        let one = self.int(1);
        let min_abs = 40.0 + self.p as f64 / 8.0;
        loop {
            let re = to_f64(&w.re);
            let im = to_f64(&w.im);
            if re.hypot(im) >= min_abs {
                break;
            }
            let l = self.c_ln(&w);
            shift = self.c_add(&shift, &l);
            w.re = self.add(&w.re, &one);
        }
        let terms = 30;
        let bern = self.bernoulli_even(terms);
        let inv = self.c_div(&self.c(one.clone(), self.int(0)), &w);
        let inv2 = self.c_mul(&inv, &inv);
        let mut series = self.c(self.int(0), self.int(0));
        for k in (1..=terms).rev() {
            let coef = self.div(&bern[k - 1], &self.int((2 * k * (2 * k - 1)) as i64));
            series = self.c_mul(&series, &inv2);
            series.re = self.add(&series.re, &coef);
        }
        series = self.c_mul(&series, &inv);
        let lw = self.c_ln(&w);
        let wm = self.c(self.sub(&w.re, &self.num(0.5)), w.im.clone());
        let mut out = self.c_mul(&wm, &lw);
        out = self.c_sub(&out, &w);
        let pi = self.pi();
        let two_pi = self.mul(&pi, &self.int(2));
        let l2p = self.ln(&two_pi);
        let half_ln = self.mul(&self.num(0.5), &l2p);
        out.re = self.add(&out.re, &half_ln);
        out = self.c_add(&out, &series);
        self.c_sub(&out, &shift)
    }

    /// θ(t) = Im log Γ(1/4 + it/2) − (t/2) log π.
    pub fn theta(&mut self, t: &BigFloat) -> BigFloat {
        let half = self.num(0.5);
        let z = self.c(self.num(0.25), self.mul(&half, t));
        let lg = self.ln_gamma(&z);
        let pi = self.pi();
        let lp = self.ln(&pi);
        let tail = self.mul(&self.mul(&half, t), &lp);
        self.sub(&lg.im, &tail)
    }

    /// ζ(σ + it) by Euler-Maclaurin with about t terms and 25 Bernoulli
    /// corrections.
    pub fn zeta(&mut self, sigma: &BigFloat, t: &BigFloat) -> ExtComplex {
        let tf = to_f64(t).abs();
        let n_terms = (tf.ceil() as usize).max(30);
        let m_terms = 25;
        let zero = self.int(0);
        let mut sum = self.c(zero.clone(), zero.clone());
        for n in 1..n_terms {
            let ln_n = self.ln(&self.int(n as i64));
            let mag = self.exp(&self.mul(&sigma.neg(), &ln_n));
            let ph = self.mul(t, &ln_n);
            let c = self.cos(&ph);
            let s = self.sin(&ph);
            sum.re = self.add(&sum.re, &self.mul(&mag, &c));
            sum.im = self.sub(&sum.im, &self.mul(&mag, &s));
        }
        let nn = self.int(n_terms as i64);
        let ln_nn = self.ln(&nn);
        let s = self.c(sigma.clone(), t.clone());
        // N^{-s}
        let neg_s_ln = self.c(self.mul(&sigma.neg(), &ln_nn), self.mul(&t.neg(), &ln_nn));
        let n_pow = self.c_exp(&neg_s_ln);
        // N^{1-s}/(s-1)
        let s_minus_1 = self.c(self.sub(sigma, &self.int(1)), t.clone());
        let head = self.c_div(&self.c_scale(&n_pow, &nn), &s_minus_1);
        sum = self.c_add(&sum, &head);
        sum = self.c_add(&sum, &self.c_scale(&n_pow, &self.num(0.5)));
        let bern = self.bernoulli_even(m_terms);
        // running factor (s)(s+1)...(s+2k-2) N^{-s-2k+1} / (2k)!
        let inv_n = self.div(&self.int(1), &nn);
        let mut fac = self.c_scale(&n_pow, &inv_n);
        fac = self.c_mul(&fac, &s);
        for k in 1..=m_terms {
            if k > 1 {
                // multiply by (s+2k-3)(s+2k-2)/(N^2 (2k-1)(2k))
                let a = self.c(self.add(&s.re, &self.int(2 * k as i64 - 3)), s.im.clone());
                let b = self.c(self.add(&s.re, &self.int(2 * k as i64 - 2)), s.im.clone());
                fac = self.c_mul(&self.c_mul(&fac, &a), &b);
                let d = self.mul(
                    &self.mul(&nn, &nn),
                    &self.int(((2 * k - 1) * (2 * k)) as i64),
                );
                fac = self.c_scale(&fac, &self.div(&self.int(1), &d));
            } else {
                fac = self.c_scale(&fac, &self.div(&self.int(1), &self.int(2)));
            }
            sum = self.c_add(&sum, &self.c_scale(&fac, &bern[k - 1]));
        }
        sum
    }

    /// Z(t) = Re(e^{iθ(t)} ζ(1/2 + it)).
    pub fn hardy_z(&mut self, t: &BigFloat) -> BigFloat {
        let th = self.theta(t);
        let z = self.zeta(&self.num(0.5), t);
        let c = self.cos(&th);
        let s = self.sin(&th);
        self.sub(&self.mul(&c, &z.re), &self.mul(&s, &z.im))
    }

    /// Illinois-modified regula falsi on Z inside a sign-change bracket.
    /// Returns the refined ordinate.
    pub fn refine_zero(&mut self, lo: f64, hi: f64) -> BigFloat {
        let mut a = self.num(lo);
        let mut b = self.num(hi);
        let mut fa = self.hardy_z(&a);
        let mut fb = self.hardy_z(&b);
        let tol = self.mul(&self.num(hi.abs()), &self.num(2f64.powi(-(self.p as i32) + 12)));
        let mut side = 0i32;
        for _ in 0..100 {
            let w = self.sub(&b, &a);
            if w.abs().cmp(&tol).map(|c| c <= 0).unwrap_or(true) {
                break;
            }
            // c = b - fb (b - a)/(fb - fa)
            let num = self.mul(&fb, &w);
            let den = self.sub(&fb, &fa);
            let mut c = self.sub(&b, &self.div(&num, &den));
            let inside = c.cmp(&a).map(|o| o > 0).unwrap_or(false)
                && c.cmp(&b).map(|o| o < 0).unwrap_or(false);
            if !inside {
                c = self.mul(&self.add(&a, &b), &self.num(0.5));
            }
            let fc = self.hardy_z(&c);
            if fc.is_zero() {
                return c;
            }
            if fc.is_negative() == fb.is_negative() {
                b = c;
                fb = fc;
                if side == -1 {
                    fa = self.mul(&fa, &self.num(0.5));
                }
                side = -1;
            } else {
                a = c;
                fa = fc;
                if side == 1 {
                    fb = self.mul(&fb, &self.num(0.5));
                }
                side = 1;
            }
        }
        let fa_abs = fa.abs();
        let fb_abs = fb.abs();
        if fa_abs.cmp(&fb_abs).map(|o| o < 0).unwrap_or(true) {
            a
        } else {
            b
        }
    }

    /// Principal arg ζ(1/2 + δ + it) for each δ.
    pub fn arg_ladder(&mut self, t: &BigFloat, deltas: &[f64]) -> Vec<f64> {
        deltas
            .iter()
            .map(|&d| {
                let sigma = self.add(&self.num(0.5), &self.num(d));
                let z = self.zeta(&sigma, t);
                let r = self.atan2(&z.im, &z.re);
                to_f64(&r)
            })
            .collect()
    }

    /// Coefficients q_0..q_{m-1} of the power series num/den, with both
    /// given as complex coefficient lists.
    pub fn series_div(&self, num: &[ExtComplex], den: &[ExtComplex]) -> Vec<ExtComplex> {
        let m = num.len();
        let mut q: Vec<ExtComplex> = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = num[k].clone();
            for j in 1..=k.min(den.len() - 1) {
                acc = self.c_sub(&acc, &self.c_mul(&den[j], &q[k - j]));
            }
            q.push(self.c_div(&acc, &den[0]));
        }
        q
    }
}

/// Taylor coefficients in y = x² of Ψ(1/2 + x) = cos(2π(p² − p − 1/16))/cos(2πp)
/// at p = 1/2 + x, i.e. −cos(2πx² − 5π/8)/cos(2πx). `m` coefficients.
pub(crate) fn psi_series(m: usize) -> Vec<f64> {
    let mut e = Ext::new(448);
    let pi = e.pi();
    let two_pi = e.mul(&pi, &e.int(2));
    let five_pi_8 = e.div(&e.mul(&pi, &e.int(5)), &e.int(8));
    let c5 = e.cos(&five_pi_8);
    let s5 = e.sin(&five_pi_8);
    let zero = e.int(0);
    let mut num = Vec::with_capacity(m);
    let mut den = Vec::with_capacity(m);
    // (2π)^j / j! running
    let mut pw = e.int(1);
    // (2π)^{2j}/(2j)! running
    let mut pw2 = e.int(1);
    for j in 0..m {
        if j > 0 {
            pw = e.div(&e.mul(&pw, &two_pi), &e.int(j as i64));
            let d = e.int(((2 * j - 1) * (2 * j)) as i64);
            pw2 = e.div(&e.mul(&e.mul(&pw2, &two_pi), &two_pi), &d);
        }
        // cos(2πy − 5π/8) = cos(5π/8)cos(2πy) + sin(5π/8)sin(2πy)
        let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
        let base = if j % 2 == 0 { &c5 } else { &s5 };
        let mut v = e.mul(base, &pw);
        if sign < 0 {
            v = v.neg();
        }
        num.push(e.c(v.neg(), zero.clone()));
        let mut dv = pw2.clone();
        if j % 2 == 1 {
            dv = dv.neg();
        }
        den.push(e.c(dv, zero.clone()));
    }
    e.series_div(&num, &den).iter().map(|c| to_f64(&c.re)).collect()
}

/// Taylor coefficients in y = z² of
/// F(z) = (e^{iπ(z²/2 + 3/8)} − i√2 cos(πz/2)) / (2 cos(πz)).
pub(crate) fn f_series(m: usize) -> Vec<Complex64> {
    let mut e = Ext::new(448);
    let pi = e.pi();
    let half_pi = e.div(&pi, &e.int(2));
    let three_pi_8 = e.div(&e.mul(&pi, &e.int(3)), &e.int(8));
    let c3 = e.cos(&three_pi_8);
    let s3 = e.sin(&three_pi_8);
    let sqrt2 = e.sqrt(&e.int(2));
    let zero = e.int(0);
    let mut num = Vec::with_capacity(m);
    let mut den = Vec::with_capacity(m);
    let mut pw = e.int(1); // (π/2)^j / j!
    let mut pw_half2 = e.int(1); // (π/2)^{2j}/(2j)!
    let mut pw_full2 = e.int(1); // π^{2j}/(2j)!
    for j in 0..m {
        if j > 0 {
            pw = e.div(&e.mul(&pw, &half_pi), &e.int(j as i64));
            let d = e.int(((2 * j - 1) * (2 * j)) as i64);
            pw_half2 = e.div(&e.mul(&e.mul(&pw_half2, &half_pi), &half_pi), &d);
            pw_full2 = e.div(&e.mul(&e.mul(&pw_full2, &pi), &pi), &d);
        }
        // e^{i3π/8} (i)^j (π/2)^j/j!
        let (ire, iim) = match j % 4 {
            0 => (e.int(1), e.int(0)),
            1 => (e.int(0), e.int(1)),
            2 => (e.int(-1), e.int(0)),
            _ => (e.int(0), e.int(-1)),
        };
        let phase = e.c_mul(&e.c(c3.clone(), s3.clone()), &e.c(ire, iim));
        let mut term = e.c_scale(&phase, &pw);
        // − i √2 (−1)^j (π/2)^{2j}/(2j)!
        let mut cosc = e.mul(&sqrt2, &pw_half2);
        if j % 2 == 1 {
            cosc = cosc.neg();
        }
        term.im = e.sub(&term.im, &cosc);
        num.push(term);
        let mut dv = e.mul(&e.int(2), &pw_full2);
        if j % 2 == 1 {
            dv = dv.neg();
        }
        den.push(e.c(dv, zero.clone()));
    }
    e.series_div(&num, &den).iter().map(|c| e.c_to(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_f64_round_trip() {
        for &x in &[1.0, -2.5, 0.1, 1e-300, 6.02e23, -7.25e-5] {
            assert_eq!(to_f64(&BigFloat::from_f64(x, 128)), x);
        }
        assert_eq!(to_f64(&BigFloat::from_f64(0.0, 128)), 0.0);
    }

    #[test]
    fn theta_matches_reference_to_30_digits() {
        let mut e = Ext::new(EXT_BITS);
        let t = e.int(100);
        let th = e.theta(&t);
        let reference = e.parse("87.97216523178721962548312911374869086857");
        let diff = to_f64(&e.sub(&th, &reference)).abs();
        assert!(diff < 1e-30, "diff {diff:e}");
    }

    #[test]
    fn first_zero_to_30_digits() {
        let mut e = Ext::new(EXT_BITS);
        let z = e.refine_zero(14.0, 14.3);
        let reference = e.parse("14.13472514173469379045725198356247027078");
        let diff = to_f64(&e.sub(&z, &reference)).abs();
        assert!(diff < 1e-30, "diff {diff:e}");
    }

    #[test]
    fn zeta_two() {
        let mut e = Ext::new(EXT_BITS);
        let z = e.zeta(&e.int(2), &e.int(0));
        let pi = e.pi();
        let exact = e.div(&e.mul(&pi, &pi), &e.int(6));
        assert!(to_f64(&e.sub(&z.re, &exact)).abs() < 1e-33);
        assert!(to_f64(&z.im).abs() < 1e-33);
    }

    #[test]
    fn psi_series_reproduces_closed_form() {
        let c = psi_series(60);
        for &x in &[-0.5f64, -0.31, 0.0, 0.2, 0.49] {
            let y = x * x;
            let mut s = 0.0;
            for k in (0..c.len()).rev() {
                s = s * y + c[k];
            }
            let p = 0.5 + x;
            let pi2 = std::f64::consts::TAU;
            let direct = (pi2 * (p * p - p - 1.0 / 16.0)).cos() / (pi2 * p).cos();
            if (pi2 * p).cos().abs() > 0.1 {
                assert!((s - direct).abs() < 1e-13, "x={x}: {s} vs {direct}");
            }
        }
    }
}
