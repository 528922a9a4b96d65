//! Closed forms and explicit tower placements for powers of paths and cycles.
//!
//! With `P = (2t - r - 1)k + 1` (the usable transmission of one tower divided
//! by `r`):
//!
//! - path power: `ceil((n + k(r-1)) / P)`,
//! - cycle power: `1` if `n <= 2(t-r)k + 1`, `2` if `n <= P`, else `ceil(n / P)`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::GraphSpec;
use crate::signal::{check_broadcast, SignalParams, TowerSet, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FormulaInput {
    pub n: u64,
    pub k: u64,
    pub t: u64,
    pub r: u64,
}

impl FormulaInput {
    pub fn new(n: u64, k: u64, t: u64, r: u64) -> Result<Self> {
        if n == 0 || k == 0 || r == 0 {
            return Err(invalid(format!("n, k and r must be positive (got n={n}, k={k}, r={r})")));
        }
        if t < r {
            return Err(invalid(format!("t >= r required (got t={t}, r={r})")));
        }
        Ok(Self { n, k, t, r })
    }

    pub fn params(&self) -> SignalParams {
        SignalParams { t: self.t, r: self.r }
    }

    /// `(2t - r - 1)k + 1`: vertices one tower can fully serve in the interior.
    pub fn period(&self) -> u64 {
        (2 * self.t - self.r - 1) * self.k + 1
    }

    /// `(t - r)k`: how far (in index) a tower reaches with at least `r`.
    pub fn full_reach(&self) -> u64 {
        (self.t - self.r) * self.k
    }

    pub fn path_spec(&self) -> GraphSpec {
        GraphSpec::PathPower { n: self.n as usize, k: self.k as usize }
    }

    pub fn cycle_spec(&self) -> GraphSpec {
        GraphSpec::CyclePower { n: self.n as usize, k: self.k as usize }
    }
}

pub fn gamma_path_power(input: &FormulaInput) -> u64 {
    (input.n + input.k * (input.r - 1)).div_ceil(2 * input.k * input.t - input.k * (input.r + 1) + 1)
}

/// Which of the three regimes of the cycle formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleCase {
    SingleTower,
    TwoTowers,
    Periodic,
}

pub fn cycle_case(input: &FormulaInput) -> CycleCase {
    if input.n <= 2 * input.full_reach() + 1 {
        CycleCase::SingleTower
    } else if input.n <= input.period() {
        CycleCase::TwoTowers
    } else {
        CycleCase::Periodic
    }
}

pub fn gamma_cycle_power(input: &FormulaInput) -> u64 {
    match cycle_case(input) {
        CycleCase::SingleTower => 1,
        CycleCase::TwoTowers => 2,
        CycleCase::Periodic => input.n.div_ceil(input.period()),
    }
}

/// The counting bound `ceil((nr + kr(r-1)) / (((2t-r-1)k+1) r))`: total demand
/// plus the transmission wasted past both ends, over one tower's usable
/// transmission.
pub fn path_lower_bound(input: &FormulaInput) -> u64 {
    let needed = input.n * input.r + input.k * input.r * (input.r - 1);
    needed.div_ceil(input.period() * input.r)
}

/// A placement together with whether the tail rule had to be adjusted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub towers: TowerSet,
    pub tail_repaired: bool,
}

/// Towers at every `i = (t-r)k (mod P)`, plus `n - 1` unless
/// `(n-1) mod P` lies in `[(t-r)k, 2(t-r)k + 1]`.
pub fn literal_path_towers(input: &FormulaInput) -> Vec<usize> {
    let period = input.period();
    let start = input.full_reach();
    let mut towers: Vec<usize> = (start..input.n).step_by(period as usize).map(|i| i as usize).collect();
    let tail = (input.n - 1) % period;
    if !(start..=2 * start + 1).contains(&tail) && towers.last() != Some(&(input.n as usize - 1)) {
        towers.push(input.n as usize - 1);
    }
    towers
}

/// Path-power placement of size [`gamma_path_power`].
///
/// Applies [`literal_path_towers`] and audits the result. When the last vertex
/// is left short (it happens exactly when `(n-1) mod P = 2(t-r)k + 1`) a tower
/// is appended at `n - 1` and the repair is logged.
pub fn construct_path_towers(input: &FormulaInput) -> Result<Construction> {
    let spec = input.path_spec();
    let params = input.params();
    let mut towers = TowerSet::new(spec, literal_path_towers(input))?;
    let target = gamma_path_power(input) as usize;
    if check_broadcast(&towers, params).is_broadcasting() && towers.len() == target {
        return Ok(Construction { towers, tail_repaired: false });
    }

    let last = input.n as usize - 1;
    towers.insert(last)?;
    log::warn!(
        "tail rule adjusted for n={} k={} t={} r={}: appended tower {last} ((n-1) mod {} = {})",
        input.n,
        input.k,
        input.t,
        input.r,
        input.period(),
        (input.n - 1) % input.period()
    );
    match check_broadcast(&towers, params) {
        Verdict::Broadcasting if towers.len() <= target => Ok(Construction { towers, tail_repaired: true }),
        Verdict::Broadcasting => Err(invalid(format!(
            "path construction for {input:?} needs {} towers, formula gives {target}",
            towers.len()
        ))),
        Verdict::Deficient(d) => {
            Err(invalid(format!("path construction for {input:?} leaves vertex {} short", d.vertex)))
        }
    }
}

/// Cycle-power placement of size [`gamma_cycle_power`]: `{0}`,
/// `{0, floor(n/2)}` or every multiple of `P`, depending on the regime.
pub fn construct_cycle_towers(input: &FormulaInput) -> Result<TowerSet> {
    let n = input.n as usize;
    let vertices = match cycle_case(input) {
        CycleCase::SingleTower => vec![0],
        CycleCase::TwoTowers => vec![0, n / 2],
        CycleCase::Periodic => (0..n).step_by(input.period() as usize).collect(),
    };
    TowerSet::new(input.cycle_spec(), vertices)
}
