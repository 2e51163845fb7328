use crate::config::sibling;
use crate::error::CliError;
use crate::sweep::{num15, summary_json};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fs;
use std::path::Path;
use zgaps::arg_tracker::arg_at_with_retry;
use zgaps::euler_arg::{euler_arg_cached, CutoffRule, EulerArgConfig};
use zgaps::gap_stats::{fmt_sig15, verify_chain, GapRecord, SweepSummary, CSV_HEADER};
use zgaps::lfunc::{dirichlet_scan, family_gaps, functional_equation_residual, ingest_zeros, DirichletCharacter, LFamily};
use zgaps::primes::{load_or_build, read_cache};
use zgaps::zeta_engine::{scan_zeros, ZeroRecord};

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

/// Gap rows of a sweep CSV with their 1-based line numbers.
pub fn read_rows(path: &Path) -> Result<Vec<(usize, GapRecord)>, CliError> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || (i == 0 && line.trim() == CSV_HEADER) {
            continue;
        }
        out.push((i + 1, GapRecord::from_csv_row(line, i + 1)?));
    }
    Ok(out)
}

/// Summary recomputed from the rows of a CSV.
pub fn summarize_csv(path: &Path) -> Result<SweepSummary, CliError> {
    let rows = read_rows(path)?;
    Ok(zgaps::gap_stats::summarize(rows.iter().map(|(_, r)| r))?)
}

/// Verification report for the rows with n in [from, to] (all rows when
/// unset). Each row is re-derived from its primary fields; rows whose
/// stored values disagree, that break an inequality, or that skip an index
/// are listed with their line number.
pub fn verify(csv: &Path, from: Option<u64>, to: Option<u64>) -> Result<Value, CliError> {
    let rows: Vec<(usize, GapRecord)> = read_rows(csv)?
        .into_iter()
        .filter(|(_, r)| from.is_none_or(|f| r.n >= f) && to.is_none_or(|t| r.n <= t))
        .collect();
    let mut summary = SweepSummary::new();
    let mut flagged = Vec::new();
    let mut hyp2 = Vec::new();
    let mut running = Vec::new();
    let mut prev: Option<&GapRecord> = None;
    for (line, r) in &rows {
        let mut reasons: Vec<String> = r.inconsistencies().iter().map(|f| format!("inconsistent {f}")).collect();
        let v = verify_chain(r);
        if !v.gpb1.pass {
            reasons.push(format!("gpb1 fails, slack {}", fmt_sig15(v.gpb1.slack)));
        }
        if !v.gpb2.pass {
            reasons.push(format!("gpb2 fails, slack {}", fmt_sig15(v.gpb2.slack)));
        }
        if !v.bup.pass {
            reasons.push("bup fails".into());
        }
        if let Some(p) = prev {
            if r.n != p.n + 1 {
                reasons.push(format!("index gap after n = {}", p.n));
            } else if r.t_n != p.t_next || r.a_n != p.a_next || r.b_n != p.b_next {
                reasons.push("does not continue the previous row".into());
            }
        }
        if r.db.abs() > 1 || r.db < 0 {
            hyp2.push(json!({ "n": r.n, "t_n": num15(r.t_n), "db": r.db }));
        }
        if summary.absorb(r).is_err() {
            reasons.push("non-finite field".into());
        }
        if running.last().is_none_or(|&(_, m): &(u64, f64)| r.g_prime > m) {
            running.push((r.n, r.g_prime));
        }
        if !reasons.is_empty() {
            flagged.push(json!({ "line": line, "n": r.n, "reasons": reasons }));
        }
        prev = Some(r);
    }
    let hyp1 = fs::read_to_string(sibling(csv, "summary.json"))
        .ok()
        .and_then(|t| serde_json::from_str::<Value>(&t).ok())
        .and_then(|v| v.get("monitor").cloned())
        .map(|m| json!({ "multiple_candidates": m["multiple_candidates"], "route_disagreements": m["route_disagreements"] }));
    Ok(json!({
        "rows": rows.len(),
        "summary": summary_json(&summary, None),
        "violations": {
            "gpb1": summary.count_gpb1_violations,
            "gpb2": summary.count_gpb2_violations,
            "bup": summary.count_bup_violations,
            "bound3": summary.count_bound3_violations,
            "hyp2": summary.count_hyp2_violations,
        },
        "db_max": summary.db_max,
        "min_slack_gpb1": num15(summary.min_slack_gpb1),
        "running_max_g_prime": running.iter().map(|&(n, g)| json!([n, num15(g)])).collect::<Vec<_>>(),
        "reference_lines": [3.0, 5.0],
        "max_g_prime_below": { "3": summary.max_g_prime < 3.0, "5": summary.max_g_prime < 5.0 },
        "hyp1_events": hyp1,
        "hyp2_events": hyp2,
        "flagged": flagged,
    }))
}

/// Which figure: 1 plots g'_n, 2 plots g_n.
pub fn figure(csv: &Path, which: u8, out: &Path) -> Result<Value, CliError> {
    let (name, line) = match which {
        1 => ("g_prime", 3.0),
        2 => ("g", 3.18),
        _ => return Err(CliError::config("--which must be 1 or 2")),
    };
    let rows = read_rows(csv)?;
    let mut text = format!("# n {name}\n");
    let mut max = f64::NEG_INFINITY;
    for (_, r) in &rows {
        let v = if which == 1 { r.g_prime } else { r.g };
        max = max.max(v);
        text.push_str(&format!("{} {}\n", r.n, fmt_sig15(v)));
    }
    write_text(out, &text)?;
    let side = json!({ "figure": which, "column": name, "reference_lines": [line] });
    write_text(&sibling(out, "lines.json"), &serde_json::to_string_pretty(&side)?)?;
    Ok(json!({ "rows": rows.len(), "max": num15(max), "data": out, "reference_lines": [line] }))
}

/// Figure data rows (n, value) as written by [`figure`].
pub fn read_figure(path: &Path) -> Result<Vec<(u64, f64)>, CliError> {
    let text = read_text(path)?;
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            let mut it = l.split_whitespace();
            let bad = || CliError::io(format!("{}: bad line {}", path.display(), i + 2));
            let n = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            let v = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
            Ok((n, v))
        })
        .collect()
}

/// Gap statistics for a non-zeta family (or zeta by scan/ingest).
#[derive(Debug, Clone, PartialEq)]
pub struct LGapReport {
    pub family: LFamily,
    pub zeros: Vec<ZeroRecord>,
    pub gaps: Vec<f64>,
    pub fe_residual_max: Option<f64>,
}

impl LGapReport {
    pub fn mean(&self) -> f64 {
        self.gaps.iter().sum::<f64>() / self.gaps.len() as f64
    }

    pub fn max(&self) -> (u64, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, &g) in self.gaps.iter().enumerate() {
            if g > best.1 {
                best = (self.zeros[i].n, g);
            }
        }
        best
    }

    pub fn to_json(&self) -> Value {
        let (arg, max) = self.max();
        json!({
            "family": self.family.to_string(),
            "zeros": self.zeros.len(),
            "gaps": self.gaps.len(),
            "range": self.zeros.first().map(|z| vec![z.n, self.zeros.last().expect("nonempty").n]),
            "mean_gap": num15(self.mean()),
            "max_gap": num15(max),
            "argmax_n": arg,
            "count_ge_3": self.gaps.iter().filter(|&&g| g >= 3.0).count(),
            "count_ge_5": self.gaps.iter().filter(|&&g| g >= 5.0).count(),
            "reference_lines": [3.0, 5.0],
            "fe_residual_max": self.fe_residual_max.map(num15),
        })
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("n,t_n,t_next,gap\n");
        for (i, g) in self.gaps.iter().enumerate() {
            let (a, b) = (&self.zeros[i], &self.zeros[i + 1]);
            s.push_str(&format!("{},{},{},{}\n", a.n, fmt_sig15(a.t), fmt_sig15(b.t), fmt_sig15(*g)));
        }
        s
    }
}

// sample points for the functional-equation check
const FE_SAMPLES: usize = 16;

/// Zeros from a scan (zeta, Dirichlet) or a file, then normalized gaps.
/// Gaps whose lower ordinate sits below the normalization threshold are
/// skipped.
pub fn lgaps(family: LFamily, t_lo: f64, t_hi: f64, ingest: Option<&Path>) -> Result<LGapReport, CliError> {
    let mut fe = None;
    let zeros = match (ingest, family) {
        (Some(p), _) => ingest_zeros(p, family)?,
        (None, LFamily::Zeta) => scan_zeros(t_lo.max(10.0), t_hi)?,
        (None, LFamily::Dirichlet { q, index }) => {
            let chi = DirichletCharacter::new(q, index)?;
            let worst = (0..FE_SAMPLES)
                .into_par_iter()
                .map(|k| {
                    let t = t_lo + 1.0 + (t_hi - t_lo - 1.0) * (k as f64 + 0.5) / FE_SAMPLES as f64;
                    functional_equation_residual(Complex64::new(0.5, t), &chi)
                })
                .collect::<zgaps::Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, |m: f64, x| if m.is_nan() || x.is_nan() { f64::NAN } else { m.max(x) });
            fe = Some(worst);
            dirichlet_scan(&chi, t_lo, t_hi)?
        }
        (None, LFamily::CuspForm { .. }) => {
            return Err(CliError::config("cusp-form zeros must come from --ingest"));
        }
    };
    let start = zeros.iter().position(|z| family.normalization(z.t).is_ok()).unwrap_or(zeros.len());
    let zeros = zeros[start..].to_vec();
    let gaps = family_gaps(family, &zeros)?;
    Ok(LGapReport { family, zeros, gaps, fe_residual_max: fe })
}

/// Point queries of the Euler-product argument, with the path-continued
/// value alongside for the zeta family.
pub fn euler_points(ts: &[f64], family: LFamily, cfg: &EulerArgConfig, cache: Option<&Path>) -> Result<Vec<Value>, CliError> {
    let chi = match family {
        LFamily::Zeta => None,
        LFamily::Dirichlet { q, index } => Some(DirichletCharacter::new(q, index)?),
        LFamily::CuspForm { .. } => return Err(CliError::config("euler-arg supports zeta and dirichlet families")),
    };
    ts.iter()
        .map(|&t| {
            let e = euler_arg_cached(t, chi.as_ref(), cfg, cache)?;
            let mut v = json!({ "t": t, "cutoff": cfg.cutoff(t.abs())?, "delta": cfg.delta, "euler_arg": num15(e) });
            if chi.is_none() {
                let a = arg_at_with_retry(t, cfg.delta.max(1e-12))?.a;
                v["arg_at"] = num15(a);
                v["difference"] = num15(e - a);
            }
            Ok(v)
        })
        .collect()
}

pub fn parse_cutoff(s: &str) -> Result<CutoffRule, CliError> {
    if s == "gonek" {
        return Ok(CutoffRule::GonekTSquared);
    }
    s.parse::<usize>()
        .map(CutoffRule::FixedN)
        .map_err(|_| CliError::config(format!("--cutoff takes 'gonek' or a prime count, got '{s}'")))
}

/// Builds or extends the prime cache and describes it.
pub fn primes(cache: &Path, count: usize) -> Result<Value, CliError> {
    let p = load_or_build(Some(cache), count)?;
    let stored = read_cache(cache)?.len();
    Ok(json!({ "path": cache, "requested": count, "stored": stored, "largest": p.last() }))
}
