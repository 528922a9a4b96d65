use std::fs;
use std::path::PathBuf;

use bdom_core::lattice::{
    excess_profile, excess_report, promote_check, verify_periodic, window_excess, LatticeVerdict, Orientation,
};
use bdom_core::ratio::fmt_ratio;
use bdom_core::{LatticeConfig, Point, SignalParams};
use clap::{Args, Subcommand};
use serde_json::json;

use crate::report::{CliError, CliResult, Report, EXIT_FAIL};

/// Which periodic configuration to load.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ConfigSource {
    /// The (t,3) construction with basis (t-1,t-2), (t-2,1-t).
    #[arg(long, value_name = "T")]
    t0: Option<i64>,
    /// The perfect (t,1) tiling with basis (t-1,t), (t,1-t).
    #[arg(long, value_name = "T")]
    perfect: Option<i64>,
    /// The mirrored perfect (t,1) tiling with basis (t,t-1), (1-t,t).
    #[arg(long, value_name = "T")]
    square: Option<i64>,
    /// JSON file `{"a":[x,y],"b":[x,y],"offsets":[[x,y],...]}`.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

impl ConfigSource {
    fn load(&self) -> CliResult<(String, LatticeConfig)> {
        Ok(match (self.t0, self.perfect, self.square, &self.config) {
            (Some(t), ..) => (format!("t0={t}"), LatticeConfig::t0(t)?),
            (_, Some(t), ..) => (format!("perfect={t}"), LatticeConfig::perfect_t1(t)?),
            (_, _, Some(t), _) => (format!("square={t}"), LatticeConfig::square_t1(t)?),
            (_, _, _, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::bad_input(format!("cannot read {}: {e}", path.display())))?;
                let config = LatticeConfig::from_json(&text)?;
                (format!("config={}", config.to_json()?), config)
            }
            _ => unreachable!("clap requires one source"),
        })
    }
}

#[derive(Debug, Args)]
pub struct Params {
    #[arg(short, value_name = "T")]
    t: u64,
    #[arg(short, value_name = "R")]
    r: u64,
}

impl Params {
    fn get(&self) -> CliResult<SignalParams> {
        Ok(SignalParams::new(self.t, self.r)?)
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y (got {s:?})"))?;
    let num = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("bad coordinate {v:?}: {e}"));
    Ok(Point(num(x)?, num(y)?))
}

#[derive(Debug, Subcommand)]
pub enum LatticeCommand {
    /// Towers per fundamental domain over the lattice index.
    Density {
        #[command(flatten)]
        source: ConfigSource,
    },
    /// Check the broadcasting condition on every residue class.
    Verify {
        #[command(flatten)]
        source: ConfigSource,
        #[command(flatten)]
        params: Params,
    },
    /// Per-residue signal and excess totals.
    Excess {
        #[command(flatten)]
        source: ConfigSource,
        #[command(flatten)]
        params: Params,
    },
    /// Total excess in the 7x9 window beside a tower; below 4 exits 1.
    Window {
        #[command(flatten)]
        source: ConfigSource,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_parser = parse_point, default_value = "0,0", allow_hyphen_values = true)]
        tower: Point,
        #[arg(long, default_value = "E")]
        orientation: Orientation,
    },
    /// Check that a (t,1)- or (t,2)-broadcasting configuration also broadcasts at (t+k, r+2k).
    Promote {
        #[command(flatten)]
        source: ConfigSource,
        #[arg(short, value_name = "T")]
        t: u64,
        #[arg(long, value_name = "R")]
        base_r: u64,
        #[arg(short, value_name = "K")]
        k: u64,
    },
    /// Excess profile of the mirrored perfect (t,1) tiling at (t+k, 2k+1).
    Lemma34 {
        #[arg(short, value_name = "T")]
        t: u64,
        #[arg(short, value_name = "K")]
        k: u64,
    },
}

pub fn run(cmd: &LatticeCommand) -> CliResult<Report> {
    match cmd {
        LatticeCommand::Density { source } => {
            let (name, config) = source.load()?;
            let density = fmt_ratio(&config.density());
            let body = json!({
                "index": config.index(),
                "towers_per_domain": config.offsets().len(),
                "density": density,
                "axis_periods": config.axis_periods(),
            });
            Report::new(vec![name], density, body)
        }
        LatticeCommand::Verify { source, params } => {
            let (name, config) = source.load()?;
            let p = params.get()?;
            let verdict = verify_periodic(&config, p);
            let inputs = vec![name, format!("t={}", p.t), format!("r={}", p.r)];
            match verdict {
                LatticeVerdict::Broadcasting => Report::new(inputs, "OK", verdict),
                LatticeVerdict::Deficient { vertex, raw_signal, shortfall } => {
                    eprintln!("not {p}-broadcasting: {vertex} hears {raw_signal}");
                    let text = format!("FAIL vertex {vertex} signal {raw_signal} shortfall {shortfall}");
                    Ok(Report::new(inputs, text, verdict)?.with_code(EXIT_FAIL))
                }
            }
        }
        LatticeCommand::Excess { source, params } => {
            let (name, config) = source.load()?;
            let p = params.get()?;
            let rep = excess_report(&config, p);
            eprintln!(
                "index {}, {} tower(s) per domain, total excess {}, {} per tower",
                rep.index,
                rep.towers_per_domain,
                rep.total_excess,
                fmt_ratio(&rep.avg_excess_per_tower)
            );
            let code = if rep.broadcasting {
                0
            } else {
                eprintln!("not {p}-broadcasting: {} deficient residue(s)", rep.deficient_count);
                EXIT_FAIL
            };
            let text = format!("total {}", rep.total_excess);
            Ok(Report::new(vec![name, format!("t={}", p.t), format!("r={}", p.r)], text, &rep)?.with_code(code))
        }
        LatticeCommand::Window { source, params, tower, orientation } => {
            let (name, config) = source.load()?;
            let p = params.get()?;
            let excess = window_excess(&config, p, *tower, *orientation)?;
            let inputs = vec![
                name,
                format!("t={}", p.t),
                format!("r={}", p.r),
                format!("tower={tower}"),
                format!("orientation={orientation}"),
            ];
            let body =
                json!({ "tower": tower, "orientation": orientation, "excess": excess, "at_least_four": excess >= 4 });
            let report = Report::new(inputs, excess.to_string(), body)?;
            if excess < 4 {
                eprintln!("finding: window excess {excess} < 4 beside tower {tower} ({orientation})");
                Ok(report.with_code(EXIT_FAIL))
            } else {
                Ok(report)
            }
        }
        LatticeCommand::Promote { source, t, base_r, k } => {
            let (name, config) = source.load()?;
            let holds = promote_check(&config, *t, *base_r, *k)?;
            let inputs = vec![name, format!("t={t}"), format!("base_r={base_r}"), format!("k={k}")];
            let body = json!({ "t": t, "base_r": base_r, "k": k, "promoted": [t + k, base_r + 2 * k], "holds": holds });
            let report = Report::new(inputs, holds.to_string(), body)?;
            Ok(if holds { report } else { report.with_code(EXIT_FAIL) })
        }
        LatticeCommand::Lemma34 { t, k } => {
            let profile = excess_profile(*t, *k)?;
            let total = fmt_ratio(&profile.total_per_tower);
            let closed = fmt_ratio(&profile.closed_form);
            if !profile.closed_form_matches {
                eprintln!(
                    "discrepancy: observed total excess per tower {total} differs from k(k+1)(2k+1)/6 = {closed}"
                );
            }
            if !profile.diagonal_values_match {
                eprintln!("discrepancy: some diagonal values differ from 2k-2i-1");
            }
            if !profile.excess_confined_to_inner_square() {
                eprintln!(
                    "discrepancy: {} residue(s) with excess outside the inner square",
                    profile.excess_outside_inner_square.len()
                );
            }
            let text = format!(
                "total_per_tower {total} closed_form {closed} {}",
                if profile.closed_form_matches { "match" } else { "mismatch" }
            );
            Report::new(vec![format!("t={t}"), format!("k={k}")], text, &profile)
        }
    }
}
