use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use serde_json::json;

use super::{read_json, Outcome, RunConfig};
use crate::counting::{
    count_with_mode, growth_fit, read_csv, write_csv, CountMode, CountOptions, DefinableSample, EnumerationLimits,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Full,
    Isolated,
    #[value(name = "pi2-image")]
    Pi2Image,
}

impl From<ModeArg> for CountMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => CountMode::Full,
            ModeArg::Isolated => CountMode::Isolated,
            ModeArg::Pi2Image => CountMode::Pi2Image,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum CountCmd {
    /// Counts N(Z(k, T)) for T = tmin, tmin + step, ..., tmax.
    Run {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        tmin: u64,
        #[arg(long)]
        tmax: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        /// Also write the counts as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        /// Keep the counted points in the JSON output.
        #[arg(long)]
        witnesses: bool,
    },
    /// Least-squares fit of log count against log T from a CSV of counts.
    Fit { csv: PathBuf },
}

impl CountCmd {
    pub fn name(&self) -> &'static str {
        match self {
            CountCmd::Run { .. } => "run",
            CountCmd::Fit { .. } => "fit",
        }
    }
}

pub fn run(cmd: &CountCmd, config: &mut RunConfig) -> Result<Outcome> {
    match cmd {
        CountCmd::Run { set, k, tmin, tmax, step, csv, mode, witnesses } => {
            let z: DefinableSample = read_json(set)?;
            z.check()?;
            config.tolerance("membership", z.tolerance)?;
            config.bound("k", *k as u64)?;
            config.bound("tmin", *tmin)?;
            config.bound("tmax", *tmax)?;
            config.bound("step", *step)?;
            if tmin > tmax {
                return Err(Error::Usage("--tmin exceeds --tmax".into()));
            }
            let limits = EnumerationLimits::default();
            config.bound("max_vectors", limits.max_vectors)?;
            let opts = CountOptions { keep_witnesses: *witnesses, limits };
            let ts: Vec<u64> = (*tmin..=*tmax).step_by(*step as usize).collect();
            let rows = ts
                .iter()
                .map(|&t| count_with_mode(&z, *k, t, (*mode).into(), &opts))
                .collect::<Result<Vec<_>>>()?;
            let mut text = Vec::new();
            write_csv(&mut text, &rows)?;
            let text = String::from_utf8(text).expect("ascii");
            if let Some(p) = csv {
                let header = format!("# {}\n", serde_json::to_string(config)?);
                std::fs::write(p, header + &text)?;
            }
            let pairs: Vec<(u64, u64)> = rows.iter().map(|r| (r.t, r.count as u64)).collect();
            let fit = growth_fit(&pairs).ok();
            Ok(Outcome {
                json: json!({ "set": z, "k": k, "mode": CountMode::from(*mode), "rows": rows, "fit": fit }),
                csv: Some(text),
                failed: false,
            })
        }
        CountCmd::Fit { csv } => {
            let f = std::fs::File::open(csv)?;
            let pairs = read_csv(std::io::BufReader::new(f))?;
            let fit = growth_fit(&pairs)?;
            Ok(Outcome::json(json!({ "points": pairs, "fit": fit })))
        }
    }
}
