//! Excess of the optimal `(t,1)` tiling when it is run at `(t+k, 2k+1)`.
//!
//! With towers at `(t-1, 0)`, `(0, t)`, `(-t, 1)` and `(-1, 1-t)` around the
//! origin, excess is expected to be confined to the inner square with corners
//! `(k-1, 1-k)`, `(-k, 1-k)`, `(-k, k)` and `(k-1, k)`, with value `2k - 2i - 1`
//! on the diagonal `x + y = i` for `0 <= i < k`, and to total
//! `k(k+1)(2k+1)/6` per tower. The profile records what the configuration
//! actually does next to those expectations; it does not assert them.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{audit_domain, LatticeConfig, Point};
use crate::error::{invalid, Result};
use crate::ratio::{self, Rational};
use crate::signal::SignalParams;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalProfile {
    /// `i` in `x + y = i`.
    pub diagonal: i64,
    /// `2k - 2i - 1` for `0 <= i < k`, otherwise no expectation.
    pub expected: Option<i64>,
    /// Excess at each inner-square vertex on the diagonal, ascending.
    pub observed: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcessProfile {
    pub t: u64,
    pub k: u64,
    pub params: SignalParams,
    pub broadcasting: bool,
    /// Inner-square vertices with their excess, ordered by `x` then `y`.
    pub inner_square: Vec<(Point, i64)>,
    pub per_diagonal: Vec<DiagonalProfile>,
    /// Every vertex on a diagonal with an expectation matches it.
    pub diagonal_values_match: bool,
    /// Canonical representatives with positive excess whose class misses the
    /// inner square. Empty when all excess lives in the inner square.
    pub excess_outside_inner_square: Vec<Point>,
    pub inner_square_excess: i64,
    pub total_excess_per_domain: i64,
    pub towers_per_domain: usize,
    #[serde(serialize_with = "ratio::serialize")]
    pub total_per_tower: Rational,
    /// `k(k+1)(2k+1)/6`.
    #[serde(serialize_with = "ratio::serialize")]
    pub closed_form: Rational,
    pub closed_form_matches: bool,
}

impl ExcessProfile {
    pub fn excess_confined_to_inner_square(&self) -> bool {
        self.excess_outside_inner_square.is_empty()
    }
}

/// Builds [`LatticeConfig::square_t1`] and audits it at `(t+k, 2k+1)`.
pub fn excess_profile(t: u64, k: u64) -> Result<ExcessProfile> {
    if k == 0 || t <= k {
        return Err(invalid(format!("need 1 <= k < t (got t={t}, k={k})")));
    }
    let config = LatticeConfig::square_t1(t as i64)?;
    let params = SignalParams::new(t + k, 2 * k + 1)?;
    let lattice = config.lattice();
    let domain = audit_domain(&config, params);
    let excess_at = |p: Point| domain[lattice.slot(lattice.reduce(p))].excess;

    let k = k as i64;
    let mut inner_square = Vec::new();
    for x in -k..=k - 1 {
        for y in -(k - 1)..=k {
            inner_square.push((Point(x, y), excess_at(Point(x, y))));
        }
    }

    let mut per_diagonal = Vec::new();
    for i in -(2 * k - 1)..=2 * k - 1 {
        let mut observed: Vec<i64> = inner_square.iter().filter(|(p, _)| p.0 + p.1 == i).map(|&(_, e)| e).collect();
        if observed.is_empty() {
            continue;
        }
        observed.sort_unstable();
        let expected = (0..k).contains(&i).then(|| 2 * k - 2 * i - 1);
        per_diagonal.push(DiagonalProfile { diagonal: i, expected, observed });
    }
    let diagonal_values_match =
        per_diagonal.iter().all(|d| d.expected.is_none_or(|e| d.observed.iter().all(|&o| o == e)));

    let inner_classes: BTreeSet<Point> = inner_square.iter().map(|&(p, _)| lattice.reduce(p)).collect();
    let excess_outside_inner_square =
        domain.iter().filter(|a| a.excess > 0 && !inner_classes.contains(&a.vertex)).map(|a| a.vertex).collect();

    let total: i64 = domain.iter().map(|a| a.excess).sum();
    let towers = config.offsets().len();
    let total_per_tower = Rational::new(total, towers as i64);
    let closed_form = Rational::new(k * (k + 1) * (2 * k + 1), 6);

    Ok(ExcessProfile {
        t,
        k: k as u64,
        params,
        broadcasting: domain.iter().all(|a| a.raw_signal >= params.r),
        inner_square_excess: inner_square.iter().map(|&(_, e)| e).sum(),
        inner_square,
        per_diagonal,
        diagonal_values_match,
        excess_outside_inner_square,
        total_excess_per_domain: total,
        towers_per_domain: towers,
        total_per_tower,
        closed_form,
        closed_form_matches: total_per_tower == closed_form,
    })
}
