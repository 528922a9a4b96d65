use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{LatticeConfig, Point};
use crate::error::{invalid, Error, Result};
use crate::ratio::{self, Rational};
use crate::signal::{usable_cap_2d, SignalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointAudit {
    pub vertex: Point,
    pub raw_signal: u64,
    pub capped_signal: u64,
    pub excess: i64,
}

/// Signal at `p` from every tower of the configuration.
///
/// Only towers in the box `p + [-(t-1), t-1]^2` can reach `p`, so those lattice
/// translates of each offset are enumerated directly.
pub fn audit_point(config: &LatticeConfig, params: SignalParams, p: Point) -> PointAudit {
    let lattice = config.lattice();
    let reach = params.t as i64 - 1;
    let (mut raw, mut capped) = (0u64, 0u64);
    for &offset in config.offsets() {
        lattice.for_each_in_box(p - offset, reach, |shift| {
            let d = (offset + shift - p).l1();
            if d <= reach {
                raw += params.tower_signal(d as u64);
                capped += params.capped(d as u64);
            }
        });
    }
    PointAudit { vertex: p, raw_signal: raw, capped_signal: capped, excess: capped as i64 - params.r as i64 }
}

/// Audits of all canonical representatives, in canonical order.
pub fn audit_domain(config: &LatticeConfig, params: SignalParams) -> Vec<PointAudit> {
    let reps: Vec<Point> = config.lattice().representatives().collect();
    reps.into_par_iter().map(|p| audit_point(config, params, p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LatticeVerdict {
    Broadcasting,
    /// The first deficient canonical representative.
    Deficient {
        vertex: Point,
        raw_signal: u64,
        shortfall: u64,
    },
}

impl LatticeVerdict {
    pub fn is_broadcasting(&self) -> bool {
        matches!(self, LatticeVerdict::Broadcasting)
    }
}

/// Checks the broadcasting condition on every residue class, which by
/// periodicity certifies it on all of Z^2.
pub fn verify_periodic(config: &LatticeConfig, params: SignalParams) -> LatticeVerdict {
    let reps: Vec<Point> = config.lattice().representatives().collect();
    let first_bad =
        reps.into_par_iter().map(|p| audit_point(config, params, p)).find_first(|a| a.raw_signal < params.r);
    match first_bad {
        None => LatticeVerdict::Broadcasting,
        Some(a) => {
            LatticeVerdict::Deficient { vertex: a.vertex, raw_signal: a.raw_signal, shortfall: params.r - a.raw_signal }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcessReport {
    pub params: SignalParams,
    pub index: i64,
    pub period: (i64, i64),
    pub towers_per_domain: usize,
    pub broadcasting: bool,
    pub deficient_count: usize,
    pub total_capped: u64,
    pub total_excess: i64,
    #[serde(serialize_with = "ratio::serialize")]
    pub avg_excess_per_tower: Rational,
    /// Capped transmission of a single tower (`None` when `t < r`).
    pub usable_cap_per_tower: Option<u64>,
    /// `usable_cap_per_tower` minus the average excess: what each tower
    /// contributes towards the demand.
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub effective_per_tower: Option<Rational>,
    pub per_vertex: Vec<PointAudit>,
}

fn serialize_opt_ratio<S: serde::Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => ratio::serialize(q, s),
        None => s.serialize_none(),
    }
}

impl ExcessReport {
    /// Representatives with positive excess.
    pub fn excess_vertices(&self) -> impl Iterator<Item = &PointAudit> {
        self.per_vertex.iter().filter(|a| a.excess > 0)
    }
}

pub fn excess_report(config: &LatticeConfig, params: SignalParams) -> ExcessReport {
    let per_vertex = audit_domain(config, params);
    let deficient_count = per_vertex.iter().filter(|a| a.raw_signal < params.r).count();
    let total_excess: i64 = per_vertex.iter().map(|a| a.excess).sum();
    let total_capped: u64 = per_vertex.iter().map(|a| a.capped_signal).sum();
    let towers = config.offsets().len();
    let avg_excess_per_tower = Rational::new(total_excess, towers as i64);
    let usable_cap_per_tower = usable_cap_2d(params).ok();
    ExcessReport {
        params,
        index: config.index(),
        period: config.axis_periods(),
        towers_per_domain: towers,
        broadcasting: deficient_count == 0,
        deficient_count,
        total_capped,
        total_excess,
        avg_excess_per_tower,
        usable_cap_per_tower,
        effective_per_tower: usable_cap_per_tower.map(|cap| Rational::from_integer(cap as i64) - avg_excess_per_tower),
        per_vertex,
    }
}

/// Which side of the tower the excess window sits on.
///
/// `E` is `tower + [t-4, t+2] x [-4, 4]`; `N`, `W` and `S` are its successive
/// quarter turns counter-clockwise about the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub enum Orientation {
    #[default]
    E,
    N,
    W,
    S,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [Orientation::E, Orientation::N, Orientation::W, Orientation::S];

    /// Inclusive `(x range, y range)` relative to the tower.
    pub fn window(self, t: i64) -> ((i64, i64), (i64, i64)) {
        let along = (t - 4, t + 2);
        let across = (-4, 4);
        let back = (-(t + 2), -(t - 4));
        match self {
            Orientation::E => (along, across),
            Orientation::N => (across, along),
            Orientation::W => (back, across),
            Orientation::S => (across, back),
        }
    }
}

impl FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "E" => Ok(Orientation::E),
            "N" => Ok(Orientation::N),
            "W" => Ok(Orientation::W),
            "S" => Ok(Orientation::S),
            other => Err(invalid(format!("orientation must be one of E, N, W, S (got {other:?})"))),
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Total excess in the 7 x 9 window beside `tower`.
///
/// Fails if `t < 5`, if `tower` is not a tower of the configuration, or if a
/// window vertex is deficient (excess is only meaningful on broadcasting sets).
pub fn window_excess(
    config: &LatticeConfig,
    params: SignalParams,
    tower: Point,
    orientation: Orientation,
) -> Result<i64> {
    if params.t < 5 {
        return Err(invalid(format!("the excess window needs t >= 5 (got t={})", params.t)));
    }
    if !config.is_tower(tower) {
        return Err(Error::Precondition(format!("{tower} is not a tower of the configuration")));
    }
    let ((x0, x1), (y0, y1)) = orientation.window(params.t as i64);
    let mut total = 0;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let audit = audit_point(config, params, tower + Point(x, y));
            if audit.raw_signal < params.r {
                return Err(Error::Precondition(format!(
                    "{} hears {} < {}: the configuration is not {params}-broadcasting",
                    audit.vertex, audit.raw_signal, params.r
                )));
            }
            total += audit.excess;
        }
    }
    Ok(total)
}

/// Checks that a `(t, base_r)`-broadcasting configuration also broadcasts at
/// `(t + k, base_r + 2k)` for `base_r` in `{1, 2}`.
///
/// The implication is known to hold, so `Ok(false)` is a counterexample and is
/// logged at error level.
pub fn promote_check(config: &LatticeConfig, t: u64, base_r: u64, k: u64) -> Result<bool> {
    if !matches!(base_r, 1 | 2) {
        return Err(invalid(format!("base r must be 1 or 2 (got {base_r})")));
    }
    let base = SignalParams::new(t, base_r)?;
    if let LatticeVerdict::Deficient { vertex, .. } = verify_periodic(config, base) {
        return Err(Error::Precondition(format!("configuration is not {base}-broadcasting (deficient at {vertex})")));
    }
    if k == 0 {
        return Ok(true);
    }
    let promoted = SignalParams::new(t + k, base_r + 2 * k)?;
    let verdict = verify_periodic(config, promoted);
    if let LatticeVerdict::Deficient { vertex, raw_signal, .. } = verdict {
        log::error!(
            "promotion counterexample: {base}-broadcasting configuration fails {promoted} at {vertex} (signal {raw_signal})"
        );
    }
    Ok(verdict.is_broadcasting())
}
