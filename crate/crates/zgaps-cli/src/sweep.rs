use crate::config::{Format, Precision, Route, SweepConfig};
use crate::error::CliError;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use zgaps::arg_tracker::{arg_limit_at_zero_with, ArgRecord};
use zgaps::extended::{to_f64, Ext, EXT_BITS};
use zgaps::gap_stats::{fmt_sig15, gap_from_args, GapRecord, SweepSummary, CSV_HEADER};
use zgaps::zero_solver::{
    seed_ordinate, solve_transcendental_with, transcendental_residual, SolveConfig, AGREEMENT_TOL, RESIDUAL_TOL,
};
use zgaps::zeta_engine::{average_gap, scan_window, ZeroRecord};

/// Gap records per shard. Shards start at n_lo + k·SHARD.
pub const SHARD: u64 = 64;
pub const CHECKPOINT_VERSION: u32 = 1;
// extra zeros scanned on each side for the candidate check
const MARGIN: u64 = 3;

/// Something worth recording that does not stop the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Event {
    /// number of scanned zeros near t_n satisfying the equation for n is not one
    MultipleCandidates { n: u64, t: f64, count: usize },
    RouteDisagreement { n: u64, t_scan: f64, t_trans: f64 },
    /// b changed between consecutive zeros
    BranchChange { n: u64, t_n: f64, a_n: f64, a_next: f64, db: i64 },
}

/// Monitors that ride along with the summary. Merging is associative.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Monitor {
    pub zeros: u64,
    pub max_residual: f64,
    pub residual_failures: u64,
    pub nonzero_b: u64,
    /// rows with g > 3 but g' < 3
    pub g_above_3_only: u64,
    pub g_above_318: u64,
    pub route_checks: u64,
    pub route_disagreements: u64,
    pub max_route_difference: f64,
    pub multiple_candidates: u64,
    pub events: Vec<Event>,
}

impl Monitor {
    pub fn merge(&mut self, o: &Monitor) {
        self.zeros += o.zeros;
        self.max_residual = self.max_residual.max(o.max_residual);
        self.residual_failures += o.residual_failures;
        self.nonzero_b += o.nonzero_b;
        self.g_above_3_only += o.g_above_3_only;
        self.g_above_318 += o.g_above_318;
        self.route_checks += o.route_checks;
        self.route_disagreements += o.route_disagreements;
        self.max_route_difference = self.max_route_difference.max(o.max_route_difference);
        self.multiple_candidates += o.multiple_candidates;
        self.events.extend(o.events.iter().cloned());
    }

    fn note_zero(&mut self, n: u64, t: f64, arg: &ArgRecord) {
        let r = transcendental_residual(n, t, arg).abs();
        self.zeros += 1;
        self.max_residual = self.max_residual.max(r);
        self.residual_failures += u64::from(!(r < RESIDUAL_TOL));
    }
}

pub struct ShardOutput {
    pub first: u64,
    pub records: Vec<GapRecord>,
    pub monitor: Monitor,
}

/// Zeros with indices lo..=hi from a sign scan.
fn scan_indices(lo: u64, hi: u64) -> zgaps::Result<Vec<ZeroRecord>> {
    let start = |n: u64| if n <= 2 { Ok(10.0) } else { seed_ordinate(n).map(|t| t - 3.0 * average_gap(t)) };
    let mut t_a = start(lo)?;
    let t_end = seed_ordinate(hi.max(2))?;
    let mut t_b = t_end + 3.0 * average_gap(t_end);
    for attempt in 0..8 {
        match scan_window(t_a.max(10.0), t_b) {
            Ok(w) => {
                let first = w.zeros.first().map_or(u64::MAX, |z| z.n);
                let last = w.zeros.last().map_or(0, |z| z.n);
                if first <= lo && last >= hi {
                    return Ok(w.zeros.into_iter().filter(|z| z.n >= lo && z.n <= hi).collect());
                }
                if first > lo {
                    t_a -= 2.0 * average_gap(t_a);
                }
                if last < hi {
                    t_b += 2.0 * average_gap(t_b);
                }
            }
            // an endpoint too close to a zero spoils the count there; nudge it
            Err(zgaps::Error::NonInteger { .. } | zgaps::Error::StepFail { .. }) if attempt < 7 => {
                t_a -= 0.1 * average_gap(t_a);
                t_b += 0.1 * average_gap(t_b);
            }
            Err(e) => return Err(e),
        }
    }
    Err(zgaps::Error::Unresolved { t_lo: t_a, t_hi: t_b, halvings: 0 })
}

fn refine_extended(ext: &mut Ext, z: &mut ZeroRecord) {
    for w in [1e-8, 1e-6] {
        let lo = z.t - w;
        let hi = z.t + w;
        let a = ext.hardy_z(&ext.num(lo));
        let b = ext.hardy_z(&ext.num(hi));
        if a.is_negative() != b.is_negative() {
            let r = ext.refine_zero(lo, hi);
            z.t = to_f64(&r);
            z.bracket_width = 0.0;
            return;
        }
    }
}

/// Computes the gap records first..=last.
pub fn compute_shard(cfg: &SweepConfig, first: u64, last: u64) -> zgaps::Result<ShardOutput> {
    let mut mon = Monitor::default();
    // zeros first..=owned are this shard's; the next shard owns last + 1
    let owned = if last + 1 == cfg.n_hi { last + 1 } else { last };
    let solve_cfg = SolveConfig { ladder: cfg.ladder.clone(), cross_validate: false };
    let (zeros, args): (Vec<ZeroRecord>, Vec<ArgRecord>) = match cfg.route {
        Route::Transcendental => {
            let mut zs = Vec::new();
            let mut ars = Vec::new();
            for n in first..=last + 1 {
                let rep = solve_transcendental_with(n, &solve_cfg)?;
                zs.push(rep.zero_record());
                ars.push(rep.arg);
            }
            (zs, ars)
        }
        Route::Scan | Route::Both => {
            let lo = if cfg.route == Route::Both { first.saturating_sub(MARGIN).max(1) } else { first };
            let hi = if cfg.route == Route::Both { last + 1 + MARGIN } else { last + 1 };
            let mut zs = scan_indices(lo, hi)?;
            if cfg.precision == Precision::Extended {
                let mut ext = Ext::new(EXT_BITS);
                for z in zs.iter_mut() {
                    refine_extended(&mut ext, z);
                }
            }
            let ars = zs.iter().map(|z| arg_limit_at_zero_with(z, &cfg.ladder)).collect::<zgaps::Result<Vec<_>>>()?;
            if cfg.route == Route::Both {
                for n in first..=owned {
                    let i = zs.iter().position(|z| z.n == n).expect("scanned range covers the shard");
                    let t = zs[i].t;
                    let half = std::f64::consts::TAU / t.ln();
                    let count = zs
                        .iter()
                        .zip(&ars)
                        .filter(|(z, a)| (z.t - t).abs() <= half && transcendental_residual(n, z.t, a).abs() < RESIDUAL_TOL)
                        .count();
                    if count != 1 {
                        mon.multiple_candidates += 1;
                        mon.events.push(Event::MultipleCandidates { n, t, count });
                    }
                    let t_trans = solve_transcendental_with(n, &solve_cfg)?.t;
                    let d = (t_trans - t).abs();
                    mon.route_checks += 1;
                    mon.max_route_difference = mon.max_route_difference.max(d);
                    if !(d < AGREEMENT_TOL) {
                        mon.route_disagreements += 1;
                        mon.events.push(Event::RouteDisagreement { n, t_scan: t, t_trans });
                    }
                }
            }
            let keep: Vec<usize> = (0..zs.len()).filter(|&i| zs[i].n >= first && zs[i].n <= last + 1).collect();
            (keep.iter().map(|&i| zs[i]).collect(), keep.iter().map(|&i| ars[i]).collect())
        }
    };
    for (i, z) in zeros.iter().enumerate() {
        if z.n <= owned {
            mon.note_zero(z.n, z.t, &args[i]);
        }
    }
    let mut records = Vec::with_capacity((last - first + 1) as usize);
    for i in 0..zeros.len() - 1 {
        let rec = gap_from_args(&zeros[i], &args[i], &zeros[i + 1], &args[i + 1])?.canonical();
        mon.nonzero_b += u64::from(rec.b_n != 0);
        mon.g_above_3_only += u64::from(rec.g > 3.0 && rec.g_prime < 3.0);
        mon.g_above_318 += u64::from(rec.g > 3.18);
        if rec.db != 0 {
            mon.events.push(Event::BranchChange { n: rec.n, t_n: rec.t_n, a_n: rec.a_n, a_next: rec.a_next, db: rec.db });
        }
        records.push(rec);
    }
    Ok(ShardOutput { first, records, monitor: mon })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub config_digest: String,
    /// last gap index written, None before the first shard
    pub last_index: Option<u64>,
    /// length of the record file at that point
    pub output_bytes: u64,
    pub summary: SweepSummary,
    pub monitor: Monitor,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = crate::config::sibling(path, "tmp");
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let ck: Checkpoint = serde_json::from_str(&text)?;
    if ck.format_version != CHECKPOINT_VERSION {
        return Err(CliError::config(format!("checkpoint format {} is not supported", ck.format_version)));
    }
    Ok(ck)
}

/// How a sweep ended.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Complete { summary: SweepSummary, monitor: Monitor },
    /// stopped by the halt hook after a checkpoint
    Halted { last_index: u64 },
}

fn row_text(format: Format, rec: &GapRecord) -> Result<String, CliError> {
    Ok(match format {
        Format::Csv => rec.to_csv_row(),
        Format::Json => serde_json::to_string(rec)?,
    })
}

fn header(format: Format) -> String {
    match format {
        Format::Csv => format!("{CSV_HEADER}\n"),
        Format::Json => String::new(),
    }
}

/// Runs or resumes a sweep. `halt_after` stops the run at the first
/// checkpoint at or beyond that many records in total (a test hook
/// standing in for an interruption).
pub fn run_sweep(cfg: &SweepConfig, halt_after: Option<u64>) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let digest = cfg.digest();
    let ck_path = cfg.checkpoint_path();
    let io = |p: &Path, e: std::io::Error| CliError::io(format!("{}: {e}", p.display()));

    let mut ck = if ck_path.exists() {
        let ck = read_checkpoint(&ck_path)?;
        if ck.config_digest != digest {
            return Err(CliError::config(format!(
                "checkpoint {} was written by a different configuration; remove it or choose another --out",
                ck_path.display()
            )));
        }
        let f = OpenOptions::new().write(true).open(&cfg.out).map_err(|e| io(&cfg.out, e))?;
        f.set_len(ck.output_bytes).map_err(|e| io(&cfg.out, e))?;
        ck
    } else {
        let head = header(cfg.format);
        fs::write(&cfg.out, &head).map_err(|e| io(&cfg.out, e))?;
        Checkpoint {
            format_version: CHECKPOINT_VERSION,
            config_digest: digest,
            last_index: None,
            output_bytes: head.len() as u64,
            summary: SweepSummary::new(),
            monitor: Monitor::default(),
        }
    };

    let last_gap = cfg.n_hi - 1;
    let mut next = ck.last_index.map_or(cfg.n_lo, |i| i + 1);
    let per_ck = cfg.checkpoint_every.div_ceil(SHARD) * SHARD;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    let file = OpenOptions::new().append(true).open(&cfg.out).map_err(|e| io(&cfg.out, e))?;
    let mut w = BufWriter::new(file);

    while next <= last_gap {
        let shards: Vec<(u64, u64)> = (0..cfg.parallelism as u64)
            .map(|k| next + k * SHARD)
            .filter(|&s| s <= last_gap)
            .map(|s| (s, (s + SHARD - 1).min(last_gap)))
            .collect();
        let outs: Vec<zgaps::Result<ShardOutput>> = pool.install(|| {
            use rayon::prelude::*;
            shards.par_iter().map(|&(a, b)| compute_shard(cfg, a, b)).collect()
        });
        for out in outs {
            let out = out?;
            let mut text = String::new();
            for r in &out.records {
                text.push_str(&row_text(cfg.format, r)?);
                text.push('\n');
            }
            w.write_all(text.as_bytes()).map_err(|e| io(&cfg.out, e))?;
            let part = zgaps::gap_stats::summarize(&out.records)?;
            ck.summary = ck.summary.merge(&part)?;
            ck.monitor.merge(&out.monitor);
            ck.output_bytes += text.len() as u64;
            let last = out.records.last().map_or(out.first, |r| r.n);
            ck.last_index = Some(last);
            next = last + 1;
            let done = last + 1 - cfg.n_lo;
            if done.is_multiple_of(per_ck) || last == last_gap || halt_after.is_some_and(|h| done >= h) {
                w.flush().map_err(|e| io(&cfg.out, e))?;
                w.get_ref().sync_all().map_err(|e| io(&cfg.out, e))?;
                write_atomic(&ck_path, serde_json::to_string_pretty(&ck)?.as_bytes()).map_err(|e| io(&ck_path, e))?;
                if halt_after.is_some_and(|h| done >= h) && last < last_gap {
                    return Ok(Outcome::Halted { last_index: last });
                }
            }
        }
    }
    w.flush().map_err(|e| io(&cfg.out, e))?;
    let doc = summary_json(&ck.summary, Some(&ck.monitor));
    write_atomic(&cfg.summary_path(), serde_json::to_string_pretty(&doc)?.as_bytes())
        .map_err(|e| io(&cfg.summary_path(), e))?;
    Ok(Outcome::Complete { summary: ck.summary, monitor: ck.monitor })
}

/// x rounded to 15 significant digits, as a JSON number.
pub fn num15(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    json!(fmt_sig15(x).parse::<f64>().expect("formatted number parses"))
}

/// The summary document: range, maxima, mean, Δb_max, violation counts,
/// histogram, plus running-maximum annotations and the monitors.
pub fn summary_json(s: &SweepSummary, monitor: Option<&Monitor>) -> Value {
    let mut doc = json!({
        "range": s.range.map(|(a, b)| vec![a, b]),
        "count": s.count,
        "max_g_prime": num15(s.max_g_prime),
        "argmax_n": s.argmax_n,
        "max_g": num15(s.max_g),
        "mean_g_prime": num15(s.mean_g_prime()),
        "db_max": s.db_max,
        "min_slack_gpb1": num15(s.min_slack_gpb1),
        "violations": {
            "gpb1": s.count_gpb1_violations,
            "gpb2": s.count_gpb2_violations,
            "bup": s.count_bup_violations,
            "bound3": s.count_bound3_violations,
            "hyp2": s.count_hyp2_violations,
        },
        "histogram": s.histogram,
        "histogram_bin_width": 0.05,
        "reference_lines": [3.0, 5.0],
        "running_max_g_prime_below": { "3": s.max_g_prime < 3.0, "5": s.max_g_prime < 5.0 },
    });
    if let Some(m) = monitor {
        doc["monitor"] = json!({
            "zeros": m.zeros,
            "max_residual": num15(m.max_residual),
            "residual_failures": m.residual_failures,
            "nonzero_b": m.nonzero_b,
            "g_above_3_with_g_prime_below_3": m.g_above_3_only,
            "g_above_3_18": m.g_above_318,
            "route_checks": m.route_checks,
            "route_disagreements": m.route_disagreements,
            "max_route_difference": num15(m.max_route_difference),
            "multiple_candidates": m.multiple_candidates,
            "events": m.events,
        });
    }
    doc
}
