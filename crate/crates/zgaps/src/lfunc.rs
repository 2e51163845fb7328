//! # Other L-families
//!
//! Dirichlet characters of small modulus, L(s, χ) by Hurwitz
//! Euler-Maclaurin, zero scanning through the real function
//! Z_χ(t) = e^{iθ_χ(t)} L(1/2 + it, χ)/√ε, ingestion of externally computed
//! ordinates, and the gap normalization of each family.

use crate::arg_tracker::Tracker;
use crate::error::{Error, Result};
use crate::special_fn::{ln_gamma, BERNOULLI_EVEN};
use crate::zeta_engine::{refine_root, Method, ZeroRecord};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI, TAU};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub const MAX_MODULUS: u32 = 13;
/// Highest supported |Im s| for Dirichlet L-values.
pub const MAX_HEIGHT: f64 = 1e4;
const HURWITZ_BERNOULLI_TERMS: usize = 12;
const SCAN_WINDOW: f64 = 100.0;
const GRID_PER_GAP: f64 = 8.0;
const MAX_GRID_HALVINGS: u32 = 6;
const COUNT_TOL: f64 = 1e-3;

/// Which L-function a zero list belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LFamily {
    Zeta,
    /// Character `index` mod q in the labeling of [`DirichletCharacter`].
    Dirichlet { q: u32, index: u32 },
    /// Weight k; the critical line is Re s = k/2.
    CuspForm { k: u32 },
}

impl LFamily {
    /// Factor turning an ordinate difference into a normalized gap, at the
    /// lower ordinate t.
    pub fn normalization(&self, t: f64) -> Result<f64> {
        let (x, denom) = match *self {
            LFamily::Zeta => (t, TAU),
            LFamily::Dirichlet { q, .. } => (f64::from(q) * t, TAU),
            LFamily::CuspForm { .. } => (t, PI),
        };
        let l = (x / (TAU * E)).ln();
        if !(l > 0.0) {
            return Err(Error::NonpositiveNorm { t });
        }
        Ok(l / denom)
    }

    /// Real part of the critical line.
    pub fn critical_line(&self) -> f64 {
        match *self {
            LFamily::CuspForm { k } => f64::from(k) / 2.0,
            _ => 0.5,
        }
    }
}

impl fmt::Display for LFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LFamily::Zeta => write!(f, "zeta"),
            LFamily::Dirichlet { q, index } => write!(f, "dirichlet:{q}:{index}"),
            LFamily::CuspForm { k } => write!(f, "cusp:{k}"),
        }
    }
}

impl FromStr for LFamily {
    type Err = Error;

    /// `zeta`, `dirichlet:<q>:<index>` or `cusp:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unknown family '{s}', expected zeta | dirichlet:<q>:<index> | cusp:<k>"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["zeta"] => Ok(LFamily::Zeta),
            ["dirichlet", q, i] => {
                let q: u32 = q.parse().map_err(|_| bad())?;
                let index: u32 = i.parse().map_err(|_| bad())?;
                DirichletCharacter::new(q, index)?;
                Ok(LFamily::Dirichlet { q, index })
            }
            ["cusp", k] => {
                let k: u32 = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(LFamily::CuspForm { k })
            }
            _ => Err(bad()),
        }
    }
}

/// (t_hi − t_lo) times the family's normalization at t_lo.
pub fn normalized_gap(family: LFamily, t_lo: f64, t_hi: f64) -> Result<f64> {
    if !(t_hi > t_lo && t_lo > 0.0) || !t_hi.is_finite() {
        return Err(Error::Precondition(format!("normalized_gap needs 0 < t_lo < t_hi, got {t_lo}, {t_hi}")));
    }
    Ok((t_hi - t_lo) * family.normalization(t_lo)?)
}

/// Normalized gaps of an ordered zero list.
pub fn family_gaps(family: LFamily, zeros: &[ZeroRecord]) -> Result<Vec<f64>> {
    zeros.windows(2).map(|w| normalized_gap(family, w[0].t, w[1].t)).collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn snap(z: Complex64) -> Complex64 {
    let f = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    Complex64::new(f(z.re), f(z.im))
}

/// Generators of (Z/qZ)* with their orders: greedily the smallest element
/// of largest order whose cyclic group meets the span so far trivially.
pub fn generators(q: u32) -> Vec<(u32, u32)> {
    let units: Vec<u32> = (1..q).filter(|&a| gcd(a, q) == 1).collect();
    let order = |a: u32| {
        let mut x = a % q;
        let mut k = 1;
        while x != 1 % q {
            x = x * a % q;
            k += 1;
        }
        k
    };
    let mut span = vec![1 % q];
    let mut gens = Vec::new();
    while span.len() < units.len() {
        let mut best: Option<(u32, u32)> = None;
        for &a in &units {
            if span.contains(&a) {
                continue;
            }
            let o = order(a);
            let mut x = a;
            let mut disjoint = true;
            for _ in 1..o {
                if span.contains(&x) {
                    disjoint = false;
                    break;
                }
                x = x * a % q;
            }
            if disjoint && best.is_none_or(|(_, bo)| o > bo) {
                best = Some((a, o));
            }
        }
        let (g, o) = best.expect("finite abelian group has a complement step");
        let mut next = Vec::with_capacity(span.len() * o as usize);
        let mut p = 1 % q;
        for _ in 0..o {
            next.extend(span.iter().map(|&s| s * p % q));
            p = p * g % q;
        }
        span = next;
        gens.push((g, o));
    }
    gens
}

/// A Dirichlet character mod q ≤ 13.
///
/// Characters are labeled by their values on [`generators`]: with χ(g_j) =
/// e^{2πi e_j/m_j}, the index is the mixed-radix number Σ e_j Π_{i<j} m_i.
/// Index 0 is the principal character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    pub q: u32,
    pub index: u32,
    /// χ(a) for a = 0..q−1
    pub values: Vec<Complex64>,
}

impl DirichletCharacter {
    pub fn new(q: u32, index: u32) -> Result<Self> {
        if q == 0 || q > MAX_MODULUS {
            return Err(Error::Character(format!("modulus {q} outside 1..={MAX_MODULUS}")));
        }
        let gens = generators(q);
        let total: u32 = gens.iter().map(|g| g.1).product();
        if index >= total {
            return Err(Error::Character(format!("index {index} out of range, there are {total} characters mod {q}")));
        }
        let mut exps = Vec::with_capacity(gens.len());
        let mut rest = index;
        for &(_, m) in &gens {
            exps.push(rest % m);
            rest /= m;
        }
        let mut values = vec![Complex64::new(0.0, 0.0); q as usize];
        // walk every product Π g_j^{k_j}
        let mut ks = vec![0u32; gens.len()];
        loop {
            let mut a = 1 % q;
            let mut phase = 0.0;
            for (j, &(g, m)) in gens.iter().enumerate() {
                for _ in 0..ks[j] {
                    a = a * g % q;
                }
                phase += f64::from(exps[j] * ks[j] % m) / f64::from(m);
            }
            values[a as usize] = snap(Complex64::from_polar(1.0, TAU * phase.fract()));
            let mut j = 0;
            while j < gens.len() {
                ks[j] += 1;
                if ks[j] < gens[j].1 {
                    break;
                }
                ks[j] = 0;
                j += 1;
            }
            if j == gens.len() {
                break;
            }
        }
        if q == 1 {
            values[0] = Complex64::new(1.0, 0.0);
        }
        Ok(DirichletCharacter { q, index, values })
    }

    /// All φ(q) characters mod q.
    pub fn all(q: u32) -> Result<Vec<Self>> {
        if q == 0 || q > MAX_MODULUS {
            return Err(Error::Character(format!("modulus {q} outside 1..={MAX_MODULUS}")));
        }
        let total: u32 = generators(q).iter().map(|g| g.1).product();
        (0..total).map(|i| Self::new(q, i)).collect()
    }

    pub fn primitive_characters(q: u32) -> Result<Vec<Self>> {
        Ok(Self::all(q)?.into_iter().filter(|c| c.is_primitive()).collect())
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % u64::from(self.q)) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Not induced from any proper divisor of q.
    pub fn is_primitive(&self) -> bool {
        let q = self.q;
        (1..q).filter(|&d| q.is_multiple_of(d)).all(|d| {
            (1..q).any(|a| gcd(a, q) == 1 && a % d == 1 % d && (self.values[a as usize] - 1.0).norm() > 1e-9)
        })
    }

    /// 0 for even characters, 1 for odd.
    pub fn parity(&self) -> u32 {
        if self.q > 2 && self.values[(self.q - 1) as usize].re < 0.0 {
            1
        } else {
            0
        }
    }

    pub fn conj(&self) -> Self {
        let gens = generators(self.q);
        let mut rest = self.index;
        let mut idx = 0;
        let mut radix = 1;
        for &(_, m) in &gens {
            let e = rest % m;
            rest /= m;
            idx += (m - e) % m * radix;
            radix *= m;
        }
        Self::new(self.q, idx).expect("conjugate index is in range")
    }

    /// τ(χ) = Σ χ(a) e^{2πia/q}.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = f64::from(self.q);
        (0..self.q).map(|a| self.values[a as usize] * Complex64::from_polar(1.0, TAU * f64::from(a) / q)).sum()
    }

    /// ε = τ(χ)/(i^κ √q), |ε| = 1 for primitive χ.
    pub fn root_number(&self) -> Complex64 {
        self.gauss_sum() / (Complex64::i().powu(self.parity()) * f64::from(self.q).sqrt())
    }

    fn require_primitive(&self) -> Result<()> {
        if !self.is_primitive() {
            return Err(Error::Character(format!("character {} mod {} is not primitive", self.index, self.q)));
        }
        Ok(())
    }
}

/// Hurwitz tail Σ_{j≥0} (w + j)^{−s} by Euler-Maclaurin, for w large
/// compared with |s|/2π.
fn hurwitz_em(s: Complex64, w: f64) -> Complex64 {
    let w_pow = (-s * w.ln()).exp();
    let mut sum = w_pow * w / (s - 1.0) + w_pow * 0.5;
    let inv_w2 = 1.0 / (w * w);
    let mut fac = s * w_pow / w * 0.5;
    for k in 1..=HURWITZ_BERNOULLI_TERMS {
        if k > 1 {
            let kf = k as f64;
            fac = fac * (s + (2.0 * kf - 3.0)) * (s + (2.0 * kf - 2.0)) * inv_w2 / ((2.0 * kf - 1.0) * 2.0 * kf);
        }
        sum += fac * BERNOULLI_EVEN[k - 1];
    }
    sum
}

/// L(s, χ) for any s with |Im s| ≤ 10⁴ away from s = 1; no domain checks.
fn l_value(s: Complex64, chi: &DirichletCharacter) -> Complex64 {
    let q = chi.q as usize;
    let blocks = ((0.5 * s.im.abs()).ceil() as usize).max(12);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=blocks * q {
        let c = chi.values[n % q];
        if c.re != 0.0 || c.im != 0.0 {
            sum += c * (-s * (n as f64).ln()).exp();
        }
    }
    let qs = (-s * (q as f64).ln()).exp();
    for a in 1..=q {
        let c = chi.values[a % q];
        if c.re != 0.0 || c.im != 0.0 {
            sum += c * qs * hurwitz_em(s, blocks as f64 + a as f64 / q as f64);
        }
    }
    sum
}

/// L(s, χ) for primitive χ, 1/2 ≤ Re s ≤ 10 and |Im s| ≤ 10⁴.
pub fn dirichlet_l(s: Complex64, chi: &DirichletCharacter) -> Result<Complex64> {
    chi.require_primitive()?;
    if !(0.5..=10.0).contains(&s.re) {
        return Err(Error::Domain(format!("dirichlet_l needs 1/2 <= Re s <= 10, got {}", s.re)));
    }
    if !(s.im.abs() <= MAX_HEIGHT) {
        return Err(Error::HeightExceeded { t: s.im, max: MAX_HEIGHT });
    }
    if chi.q == 1 && s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    Ok(l_value(s, chi))
}

/// log of the gamma factor (q/π)^{(s+κ)/2} Γ((s+κ)/2).
fn ln_gamma_factor(s: Complex64, chi: &DirichletCharacter) -> Complex64 {
    let w = (s + f64::from(chi.parity())) * 0.5;
    w * (f64::from(chi.q) / PI).ln() + ln_gamma(w)
}

/// |Λ(s, χ) − ε Λ(1 − s, χ̄)| relative to the larger side, for 0 ≤ Re s ≤ 1.
pub fn functional_equation_residual(s: Complex64, chi: &DirichletCharacter) -> Result<f64> {
    chi.require_primitive()?;
    if !(0.0..=1.0).contains(&s.re) || !(s.im.abs() <= MAX_HEIGHT) || s.im == 0.0 {
        return Err(Error::Domain(format!("functional_equation_residual needs 0 <= Re s <= 1, 0 < |Im s| <= 1e4, got {s}")));
    }
    let cb = chi.conj();
    let s1 = Complex64::new(1.0, 0.0) - s;
    // divided through by the Γ factor at s, which underflows for large |t|
    let lhs = l_value(s, chi);
    let rhs = chi.root_number() * (ln_gamma_factor(s1, &cb) - ln_gamma_factor(s, chi)).exp() * l_value(s1, &cb);
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()))
}

/// θ_χ(t) = (t/2) log(q/π) + Im log Γ((1/2 + κ + it)/2).
pub fn theta_chi(t: f64, chi: &DirichletCharacter) -> f64 {
    0.5 * t * (f64::from(chi.q) / PI).ln() + ln_gamma(Complex64::new(0.25 + 0.5 * f64::from(chi.parity()), 0.5 * t)).im
}

/// Z_χ(t), real on the critical line; vanishes exactly at the zeros.
pub fn z_chi(t: f64, chi: &DirichletCharacter) -> Result<f64> {
    chi.require_primitive()?;
    if !(t.abs() <= MAX_HEIGHT) {
        return Err(Error::HeightExceeded { t, max: MAX_HEIGHT });
    }
    Ok(z_chi_complex(t, chi, chi.root_number().sqrt()).re)
}

fn z_chi_complex(t: f64, chi: &DirichletCharacter, sqrt_eps: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, theta_chi(t, chi)) * l_value(Complex64::new(0.5, t), chi) / sqrt_eps
}

/// arg L(1/2 + it, χ), continued from σ = 10.
fn arg_l_on_line(t: f64, chi: &DirichletCharacter) -> Result<f64> {
    let mut tr = Tracker::new(|sigma| l_value(Complex64::new(sigma, t), chi), t);
    tr.advance_to(0.5)?;
    Ok(tr.arg())
}

/// (θ_χ(T) + arg L(1/2 + iT) − arg L(1/2))/π before rounding.
pub fn count_zeros_chi_value(t: f64, chi: &DirichletCharacter) -> Result<f64> {
    chi.require_primitive()?;
    if !(0.0..=MAX_HEIGHT).contains(&t) {
        return Err(Error::HeightExceeded { t, max: MAX_HEIGHT });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok((theta_chi(t, chi) + arg_l_on_line(t, chi)? - arg_l_on_line(0.0, chi)?) / PI)
}

/// Number of zeros 1/2 + iγ with 0 < γ ≤ T.
pub fn count_zeros_chi(t: f64, chi: &DirichletCharacter) -> Result<u64> {
    let v = count_zeros_chi_value(t, chi)?;
    let r = v.round();
    if (v - r).abs() > COUNT_TOL || r < 0.0 {
        return Err(Error::NonInteger { t, value: v });
    }
    Ok(r as u64)
}

fn chi_gap(q: u32, t: f64) -> f64 {
    TAU / (f64::from(q) * t.max(TAU * E) / TAU).ln()
}

fn scan_chi_window(chi: &DirichletCharacter, t_lo: f64, t_hi: f64, expected: i64) -> Result<Vec<(f64, f64)>> {
    let sq = chi.root_number().sqrt();
    let z = |t: f64| z_chi_complex(t, chi, sq).re;
    for halving in 0..=MAX_GRID_HALVINGS {
        let scale = GRID_PER_GAP * f64::from(1u32 << halving);
        let mut found = Vec::new();
        let mut t = t_lo;
        let mut zt = z(t);
        while t < t_hi {
            let next = (t + chi_gap(chi.q, t) / scale).min(t_hi);
            let zn = z(next);
            if (zt < 0.0) != (zn < 0.0) {
                found.push((t, next, zt));
            }
            t = next;
            zt = zn;
        }
        if found.len() as i64 > expected {
            return Err(Error::CountMismatch { t_lo, t_hi, found: found.len(), expected });
        }
        if found.len() as i64 == expected {
            return Ok(found
                .into_iter()
                .map(|(lo, hi, zl)| refine_root(z, lo, hi, zl))
                .collect());
        }
    }
    Err(Error::Unresolved { t_lo, t_hi, halvings: MAX_GRID_HALVINGS })
}

/// Zeros of L(s, χ) on the critical line with t_lo ≤ γ ≤ t_hi, indexed from
/// 1 at the lowest positive ordinate. Windows are scanned in parallel and
/// each is checked against the counting formula.
pub fn dirichlet_scan(chi: &DirichletCharacter, t_lo: f64, t_hi: f64) -> Result<Vec<ZeroRecord>> {
    chi.require_primitive()?;
    if !(t_lo >= 0.0 && t_hi > t_lo) {
        return Err(Error::Domain(format!("dirichlet_scan needs 0 <= t_lo < t_hi, got [{t_lo}, {t_hi}]")));
    }
    if t_hi > MAX_HEIGHT {
        return Err(Error::HeightExceeded { t: t_hi, max: MAX_HEIGHT });
    }
    let pieces = ((t_hi - t_lo) / SCAN_WINDOW).ceil().max(1.0) as usize;
    let edges: Vec<f64> = (0..=pieces)
        .map(|i| if i == pieces { t_hi } else { t_lo + (t_hi - t_lo) * i as f64 / pieces as f64 })
        .collect();
    let counts: Vec<u64> = edges.par_iter().map(|&t| count_zeros_chi(t, chi)).collect::<Result<_>>()?;
    let windows: Vec<Vec<(f64, f64)>> = (0..pieces)
        .into_par_iter()
        .map(|i| scan_chi_window(chi, edges[i], edges[i + 1], counts[i + 1] as i64 - counts[i] as i64))
        .collect::<Result<_>>()?;
    let out = windows
        .into_iter()
        .flatten()
        .zip(counts[0] + 1..)
        .map(|((t, w), n)| ZeroRecord { n, t, method: Method::SignScan, residual_trans: None, bracket_width: w })
        .collect::<Vec<_>>();
    Ok(out)
}

/// Parses an ordinate list: one decimal per line, '#' comments and blank
/// lines skipped, optional `start_index=<n>` before the first ordinate.
pub fn parse_zeros(text: &str, _family: LFamily) -> Result<Vec<ZeroRecord>> {
    let mut start: Option<u64> = None;
    let mut out: Vec<ZeroRecord> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let bad = || Error::MalformedLine { line, content: raw.to_string() };
        if let Some(v) = s.strip_prefix("start_index=") {
            if start.is_some() || !out.is_empty() {
                return Err(bad());
            }
            start = Some(v.trim().parse().map_err(|_| bad())?);
            continue;
        }
        let t: f64 = s.parse().map_err(|_| bad())?;
        if !t.is_finite() || s.contains(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
            return Err(bad());
        }
        if let Some(prev) = out.last() {
            if !(t > prev.t) {
                return Err(Error::NonMonotone { line, prev: prev.t, next: t });
            }
        }
        let n = start.unwrap_or(1) + out.len() as u64;
        out.push(ZeroRecord { n, t, method: Method::Ingested, residual_trans: None, bracket_width: 0.0 });
    }
    Ok(out)
}

/// [`parse_zeros`] on a file.
pub fn ingest_zeros(source: &Path, family: LFamily) -> Result<Vec<ZeroRecord>> {
    let text = std::fs::read_to_string(source)?;
    parse_zeros(&text, family)
}

#[cfg(test)]
mod tests {
    use super::*;

    // first zeros of the odd character mod 3 and mod 4
    const Q3: [f64; 4] = [8.039_737_155_681_467, 11.249_206_207_772_935, 15.704_619_176_721_626, 18.261_997_495_693_128];
    const Q4: [f64; 4] = [6.020_948_904_697_597, 10.243_770_304_166_555, 12.988_098_012_312_423, 16.342_607_104_587_222];

    #[test]
    fn generator_orders() {
        let orders = |q| generators(q).iter().map(|g| g.1).collect::<Vec<_>>();
        assert_eq!(orders(13), vec![12]);
        assert_eq!(orders(8), vec![2, 2]);
        assert_eq!(orders(12), vec![2, 2]);
        assert_eq!(generators(7)[0].0, 3);
        assert!(generators(1).is_empty());
        assert!(generators(2).is_empty());
    }

    #[test]
    fn character_tables() {
        for q in 1..=MAX_MODULUS {
            let all = DirichletCharacter::all(q).unwrap();
            let phi = (1..=q).filter(|&a| gcd(a, q) == 1).count();
            assert_eq!(all.len(), phi, "q={q}");
            for c in &all {
                for a in 0..q as u64 {
                    for b in 0..q as u64 {
                        assert!((c.value(a * b) - c.value(a) * c.value(b)).norm() < 1e-12);
                    }
                }
                if !c.is_principal() {
                    assert!(c.values.iter().sum::<Complex64>().norm() < 1e-12);
                }
                if c.is_primitive() {
                    assert!((c.root_number().norm() - 1.0).abs() < 1e-12);
                }
            }
        }
        assert_eq!(DirichletCharacter::primitive_characters(3).unwrap().len(), 1);
        assert_eq!(DirichletCharacter::primitive_characters(8).unwrap().len(), 2);
        assert_eq!(DirichletCharacter::primitive_characters(6).unwrap().len(), 0);
        assert!(DirichletCharacter::new(14, 0).is_err());
    }

    #[test]
    fn catalan() {
        let chi = DirichletCharacter::new(4, 1).unwrap();
        let v = dirichlet_l(Complex64::new(2.0, 0.0), &chi).unwrap();
        assert!((v.re - 0.915_965_594_177_219_015).abs() < 1e-12 && v.im.abs() < 1e-15);
    }

    #[test]
    fn known_zeros() {
        for (q, zs) in [(3, Q3), (4, Q4)] {
            let chi = DirichletCharacter::new(q, 1).unwrap();
            let found = dirichlet_scan(&chi, 0.0, 18.5).unwrap();
            assert_eq!(found.len(), 4 + usize::from(q == 4));
            for (r, z) in found.iter().zip(zs) {
                assert!((r.t - z).abs() < 1e-8, "q={q}: {} vs {z}", r.t);
            }
            assert_eq!(found.iter().map(|r| r.n).collect::<Vec<_>>(), (1..=found.len() as u64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn functional_equation() {
        for q in [3, 4, 5, 7, 8, 11, 13] {
            for chi in DirichletCharacter::primitive_characters(q).unwrap() {
                for s in [Complex64::new(0.3, 17.0), Complex64::new(0.5, 250.5), Complex64::new(0.9, -40.0)] {
                    let r = functional_equation_residual(s, &chi).unwrap();
                    assert!(r < 1e-10, "q={q} idx={} s={s}: {r}", chi.index);
                }
            }
        }
    }

    #[test]
    fn z_chi_is_real() {
        for chi in DirichletCharacter::primitive_characters(5).unwrap() {
            let sq = chi.root_number().sqrt();
            for t in [3.0, 44.4, 987.6] {
                let z = z_chi_complex(t, &chi, sq);
                assert!(z.im.abs() < 1e-10 * (1.0 + z.re.abs()), "idx={} t={t}: {z}", chi.index);
            }
        }
    }

    #[test]
    fn family_normalizations() {
        let (a, b) = (100.0, 101.3);
        let z = normalized_gap(LFamily::Zeta, a, b).unwrap();
        let d1 = normalized_gap(LFamily::Dirichlet { q: 1, index: 0 }, a, b).unwrap();
        let c = normalized_gap(LFamily::CuspForm { k: 12 }, a, b).unwrap();
        assert_eq!(z, d1);
        assert!((c - 2.0 * z).abs() <= 1e-12 * c);
        assert!(matches!(normalized_gap(LFamily::Dirichlet { q: 3, index: 1 }, 5.0, 6.0), Err(Error::NonpositiveNorm { .. })));
        assert_eq!("dirichlet:3:1".parse::<LFamily>().unwrap(), LFamily::Dirichlet { q: 3, index: 1 });
        assert_eq!("cusp:12".parse::<LFamily>().unwrap().to_string(), "cusp:12");
        assert!("dirichlet:3:5".parse::<LFamily>().is_err());
    }

    #[test]
    fn ingestion() {
        let z = parse_zeros("14.134725\n21.022040\n25.010858\n", LFamily::Zeta).unwrap();
        assert_eq!(z.iter().map(|r| r.n).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(z[1].t, 21.022040);
        assert!(parse_zeros("", LFamily::Zeta).unwrap().is_empty());
        let z = parse_zeros("# header\nstart_index=7\n\n 3.5 \n4.5\n", LFamily::CuspForm { k: 12 }).unwrap();
        assert_eq!((z[0].n, z[1].n), (7, 8));
        assert!(matches!(parse_zeros("1.0\n0.5\n", LFamily::Zeta), Err(Error::NonMonotone { line: 2, .. })));
        assert!(matches!(parse_zeros("1.0\nabc\n", LFamily::Zeta), Err(Error::MalformedLine { line: 2, .. })));
        assert!(matches!(parse_zeros("1.0\ninf\n", LFamily::Zeta), Err(Error::MalformedLine { line: 2, .. })));
        assert!(matches!(parse_zeros("1,5\n", LFamily::Zeta), Err(Error::MalformedLine { line: 1, .. })));
    }
}
