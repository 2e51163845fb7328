use crate::error::CliError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use zgaps::arg_tracker::LadderConfig;
use zgaps::extended::EXT_MAX_T;
use zgaps::lfunc::LFamily;
use zgaps::zero_solver::seed_ordinate;

/// How zeros are located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// sign changes of Z
    Scan,
    /// the transcendental equation θ + a = (n − 3/2)π
    Transcendental,
    /// both, cross-checked on every zero; rows use the scan ordinates
    Both,
}

impl std::str::FromStr for Route {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "scan" => Ok(Route::Scan),
            "trans" => Ok(Route::Transcendental),
            "both" => Ok(Route::Both),
            _ => Err(CliError::config(format!("unknown route '{s}', expected scan | trans | both"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    /// one JSON object per line
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::config(format!("unknown format '{s}', expected csv | json"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precision {
    Double,
    /// ordinates refined at 128 bits; heights up to 2000 only
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            _ => Err(CliError::config(format!("unknown precision '{s}', expected double | extended"))),
        }
    }
}

/// Parses "1e-3,1e-4,...".
pub fn parse_ladder(s: &str) -> Result<LadderConfig, CliError> {
    let deltas = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::config(format!("bad ladder entry '{x}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = LadderConfig { deltas, ..LadderConfig::default() };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: LFamily,
    /// first gap index; the sweep writes gaps n_lo..n_hi−1
    pub n_lo: u64,
    /// last zero index used
    pub n_hi: u64,
    pub route: Route,
    pub ladder: LadderConfig,
    pub parallelism: usize,
    /// records between checkpoints, rounded up to whole shards
    pub checkpoint_every: u64,
    pub out: PathBuf,
    pub format: Format,
    pub precision: Precision,
}

impl SweepConfig {
    pub fn new(n_lo: u64, n_hi: u64, route: Route, out: impl Into<PathBuf>) -> Self {
        SweepConfig {
            family: LFamily::Zeta,
            n_lo,
            n_hi,
            route,
            ladder: LadderConfig::default(),
            parallelism: 1,
            checkpoint_every: 1024,
            out: out.into(),
            format: Format::Csv,
            precision: Precision::Double,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.family != LFamily::Zeta {
            return Err(CliError::config("sweep handles the zeta family; use lgaps for the others"));
        }
        // g'_1 is undefined: t_1 < 2πe makes log(t/2πe) negative
        if self.n_lo < 2 {
            return Err(CliError::config("--from-n must be at least 2 (the first gap has a nonpositive normalization)"));
        }
        if self.n_hi <= self.n_lo {
            return Err(CliError::config("--to-n must exceed --from-n"));
        }
        if self.parallelism == 0 {
            return Err(CliError::config("--parallelism must be positive"));
        }
        if self.checkpoint_every == 0 {
            return Err(CliError::config("--checkpoint-every must be positive"));
        }
        self.ladder.validate()?;
        if self.precision == Precision::Extended && seed_ordinate(self.n_hi.max(2))? > EXT_MAX_T {
            return Err(CliError::config(format!("extended precision is limited to ordinates below {EXT_MAX_T}")));
        }
        Ok(())
    }

    /// SHA-256 of the settings that affect output. Parallelism and the
    /// output location are left out.
    pub fn digest(&self) -> String {
        let key = serde_json::json!({
            "family": self.family.to_string(),
            "n_lo": self.n_lo,
            "n_hi": self.n_hi,
            "route": self.route,
            "ladder": self.ladder,
            "checkpoint_every": self.checkpoint_every,
            "format": self.format,
            "precision": self.precision,
        });
        let h = Sha256::digest(key.to_string().as_bytes());
        h.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn summary_path(&self) -> PathBuf {
        sibling(&self.out, "summary.json")
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        sibling(&self.out, "ckpt.json")
    }
}

/// `<path>.<suffix>`
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}
