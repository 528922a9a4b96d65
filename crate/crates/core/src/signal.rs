//! Signal, capped signal and excess on finite graphs.
//!
//! A tower at distance `d` contributes `max(0, t - d)`. The *capped* signal of a
//! vertex caps every single contribution at `r` before summing, and the excess is
//! capped signal minus `r`. Summed over all vertices, the capped contributions of
//! one tower are its usable transmission; the per-tower bounds
//! [`usable_cap_1d`] and [`usable_cap_2d`] drive the counting lower bounds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Family, GraphSpec};

/// Transmission strength `t` and demand `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignalParams {
    pub t: u64,
    pub r: u64,
}

impl SignalParams {
    pub fn new(t: u64, r: u64) -> Result<Self> {
        if t == 0 || r == 0 {
            return Err(invalid(format!("t and r must be positive (got t={t}, r={r})")));
        }
        Ok(Self { t, r })
    }

    /// As [`SignalParams::new`], additionally requiring `t >= r`.
    pub fn new_strict(t: u64, r: u64) -> Result<Self> {
        let params = Self::new(t, r)?;
        params.require_t_ge_r()?;
        Ok(params)
    }

    pub fn require_t_ge_r(&self) -> Result<()> {
        if self.t < self.r {
            Err(invalid(format!("t >= r required (got t={}, r={})", self.t, self.r)))
        } else {
            Ok(())
        }
    }

    /// `max(0, t - d)`.
    pub fn tower_signal(&self, d: u64) -> u64 {
        self.t.saturating_sub(d)
    }

    /// A single tower's contribution after capping at `r`.
    pub fn capped(&self, d: u64) -> u64 {
        self.tower_signal(d).min(self.r)
    }
}

impl fmt::Display for SignalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t, self.r)
    }
}

/// A set of tower vertices on a finite graph, kept sorted and duplicate free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TowerSetFile", into = "TowerSetFile")]
pub struct TowerSet {
    spec: GraphSpec,
    vertices: Vec<usize>,
}

/// On-disk form: `{"spec": "path:n=10,k=1", "towers": [1, 5, 9]}`.
#[derive(Serialize, Deserialize)]
struct TowerSetFile {
    spec: GraphSpec,
    towers: Vec<usize>,
}

impl TryFrom<TowerSetFile> for TowerSet {
    type Error = Error;

    fn try_from(file: TowerSetFile) -> Result<Self> {
        TowerSet::new(file.spec, file.towers)
    }
}

impl From<TowerSet> for TowerSetFile {
    fn from(set: TowerSet) -> Self {
        TowerSetFile { spec: set.spec, towers: set.vertices }
    }
}

impl TowerSet {
    /// Sorts `vertices`; rejects duplicates and out-of-range indices.
    pub fn new(spec: GraphSpec, mut vertices: Vec<usize>) -> Result<Self> {
        for &v in &vertices {
            spec.check_vertex(v)?;
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("tower {} listed twice", w[0])));
        }
        Ok(Self { spec, vertices })
    }

    pub fn empty(spec: GraphSpec) -> Self {
        Self { spec, vertices: Vec::new() }
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Adds a tower; returns `false` if it was already present.
    pub fn insert(&mut self, v: usize) -> Result<bool> {
        self.spec.check_vertex(v)?;
        match self.vertices.binary_search(&v) {
            Ok(_) => Ok(false),
            Err(at) => {
                self.vertices.insert(at, v);
                Ok(true)
            }
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        match self.vertices.binary_search(&v) {
            Ok(at) => {
                self.vertices.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexAudit {
    pub vertex: usize,
    pub raw_signal: u64,
    pub capped_signal: u64,
    /// `capped_signal - r`; negative when the vertex is deficient.
    pub excess: i64,
}

/// A vertex that hears less than `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Deficiency {
    pub vertex: usize,
    pub raw_signal: u64,
    pub shortfall: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Broadcasting,
    /// Carries the least-index deficient vertex.
    Deficient(Deficiency),
}

impl Verdict {
    pub fn is_broadcasting(&self) -> bool {
        matches!(self, Verdict::Broadcasting)
    }
}

pub fn audit_vertex(towers: &TowerSet, params: SignalParams, v: usize) -> Result<VertexAudit> {
    towers.spec.check_vertex(v)?;
    Ok(audit_unchecked(towers, params, v))
}

fn audit_unchecked(towers: &TowerSet, params: SignalParams, v: usize) -> VertexAudit {
    let (mut raw, mut capped) = (0u64, 0u64);
    for &u in &towers.vertices {
        let d = towers.spec.dist(u, v) as u64;
        raw += params.tower_signal(d);
        capped += params.capped(d);
    }
    VertexAudit { vertex: v, raw_signal: raw, capped_signal: capped, excess: capped as i64 - params.r as i64 }
}

/// Audits of every vertex, in index order.
pub fn audit_all(towers: &TowerSet, params: SignalParams) -> Vec<VertexAudit> {
    (0..towers.spec.order()).map(|v| audit_unchecked(towers, params, v)).collect()
}

pub fn check_broadcast(towers: &TowerSet, params: SignalParams) -> Verdict {
    for v in 0..towers.spec.order() {
        let audit = audit_unchecked(towers, params, v);
        if audit.raw_signal < params.r {
            return Verdict::Deficient(Deficiency {
                vertex: v,
                raw_signal: audit.raw_signal,
                shortfall: params.r - audit.raw_signal,
            });
        }
    }
    Verdict::Broadcasting
}

pub fn is_broadcasting(towers: &TowerSet, params: SignalParams) -> bool {
    check_broadcast(towers, params).is_broadcasting()
}

/// Sum over distances `0..t` of `ring(d) * min(r, t - d)`.
pub(crate) fn ring_capped_sum(params: SignalParams, ring: impl Fn(u64) -> u64) -> u64 {
    (0..params.t).map(|d| ring(d) * params.capped(d)).sum()
}

/// Usable transmission of one tower in a path or cycle power with power `k`:
/// `((2t - r - 1)k + 1) r`.
pub fn usable_cap_1d(params: SignalParams, k: u64) -> Result<u64> {
    params.require_t_ge_r()?;
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    Ok(((2 * params.t - params.r - 1) * k + 1) * params.r)
}

/// Usable transmission of one tower in the plane, summed ring by ring over
/// the l1 spheres (`1` vertex at distance 0, `4d` at distance `d`).
pub fn usable_cap_2d(params: SignalParams) -> Result<u64> {
    params.require_t_ge_r()?;
    Ok(ring_capped_sum(params, |d| if d == 0 { 1 } else { 4 * d }))
}

/// Upper bound on the usable transmission of any single tower of `spec`.
/// Valid for any `t` and `r` (no `t >= r` requirement).
pub(crate) fn family_cap(spec: &GraphSpec, params: SignalParams) -> u64 {
    match spec.family() {
        Family::PathPower | Family::CyclePower => {
            let k = spec.power().unwrap_or(1) as u64;
            ring_capped_sum(params, |d| if d == 0 { 1 } else { 2 * k })
        }
        Family::Grid | Family::Torus => ring_capped_sum(params, |d| if d == 0 { 1 } else { 4 * d }),
    }
}

/// Total demand `r |V|`.
pub fn total_demand(spec: &GraphSpec, params: SignalParams) -> u64 {
    params.r * spec.order() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn towers(spec: &str, v: &[usize]) -> TowerSet {
        TowerSet::new(spec.parse().unwrap(), v.to_vec()).unwrap()
    }

    #[test]
    fn tower_signal_examples() {
        let p = SignalParams::new(5, 1).unwrap();
        assert_eq!(p.tower_signal(2), 3);
        assert_eq!(p.tower_signal(5), 0);
        assert_eq!(p.tower_signal(0), 5);
        assert_eq!(p.tower_signal(9), 0);
    }

    #[test]
    fn params_validation() {
        assert!(SignalParams::new(0, 1).is_err());
        assert!(SignalParams::new(1, 0).is_err());
        assert!(SignalParams::new(2, 3).is_ok());
        assert!(SignalParams::new_strict(2, 3).is_err());
    }

    #[test]
    fn audit_examples() {
        let a = audit_vertex(&towers("path:n=5,k=1", &[2]), SignalParams::new(3, 1).unwrap(), 0).unwrap();
        assert_eq!((a.raw_signal, a.capped_signal, a.excess), (1, 1, 0));

        let a = audit_vertex(&towers("path:n=3,k=1", &[0, 2]), SignalParams::new(2, 2).unwrap(), 1).unwrap();
        assert_eq!((a.raw_signal, a.capped_signal, a.excess), (2, 2, 0));

        // contributions 2, 3, 2 capped at 2
        let a = audit_vertex(&towers("path:n=3,k=1", &[0, 1, 2]), SignalParams::new(3, 2).unwrap(), 1).unwrap();
        assert_eq!((a.raw_signal, a.capped_signal, a.excess), (7, 6, 4));

        let a = audit_vertex(&towers("path:n=4,k=1", &[0]), SignalParams::new(2, 1).unwrap(), 3).unwrap();
        assert_eq!(a.excess, -1);
        assert!(audit_vertex(&towers("path:n=4,k=1", &[0]), SignalParams::new(2, 1).unwrap(), 4).is_err());
    }

    #[test]
    fn broadcast_examples() {
        assert!(is_broadcasting(&towers("cycle:n=5,k=1", &[0]), SignalParams::new(3, 1).unwrap()));
        assert_eq!(
            check_broadcast(&towers("path:n=4,k=1", &[0]), SignalParams::new(2, 1).unwrap()),
            Verdict::Deficient(Deficiency { vertex: 2, raw_signal: 0, shortfall: 1 })
        );
        assert!(is_broadcasting(&towers("cycle:n=7,k=2", &[0]), SignalParams::new(3, 1).unwrap()));
        let empty = TowerSet::empty("grid:2x2".parse().unwrap());
        assert!(!is_broadcasting(&empty, SignalParams::new(3, 1).unwrap()));
    }

    #[test]
    fn usable_caps() {
        assert_eq!(usable_cap_1d(SignalParams::new(3, 2).unwrap(), 1).unwrap(), 8);
        assert_eq!(usable_cap_1d(SignalParams::new(1, 1).unwrap(), 1).unwrap(), 1);
        assert!(usable_cap_1d(SignalParams::new(2, 3).unwrap(), 1).is_err());
        assert!(usable_cap_1d(SignalParams::new(3, 3).unwrap(), 0).is_err());
        // distances 0,1,1,2,2 around a central tower: 2+2+2+1+1
        let p = SignalParams::new(3, 2).unwrap();
        let centre = towers("path:n=9,k=1", &[4]);
        let direct: u64 = audit_all(&centre, p).iter().map(|a| a.capped_signal).sum();
        assert_eq!(direct, 8);

        // 3*13 + 2*12 + 1*16
        assert_eq!(usable_cap_2d(SignalParams::new(5, 3).unwrap()).unwrap(), 79);
        assert_eq!(usable_cap_2d(SignalParams::new(2, 1).unwrap()).unwrap(), 5);
        assert!(usable_cap_2d(SignalParams::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn usable_cap_1d_matches_enumeration() {
        for k in 1..=3usize {
            for t in 1..=6u64 {
                for r in 1..=t {
                    let params = SignalParams::new(t, r).unwrap();
                    let n = 4 * k * t as usize;
                    let set = TowerSet::new(GraphSpec::path_power(n, k).unwrap(), vec![n / 2]).unwrap();
                    let direct: u64 = audit_all(&set, params).iter().map(|a| a.capped_signal).sum();
                    assert_eq!(usable_cap_1d(params, k as u64).unwrap(), direct, "k={k} {params}");
                }
            }
        }
    }

    #[test]
    fn usable_cap_2d_identity_for_r3() {
        for t in 4..=12u64 {
            let p = SignalParams::new(t, 3).unwrap();
            let mut by_loop = 0;
            for x in -(t as i64)..=t as i64 {
                for y in -(t as i64)..=t as i64 {
                    by_loop += p.capped(x.unsigned_abs() + y.unsigned_abs());
                }
            }
            assert_eq!(usable_cap_2d(p).unwrap(), by_loop);
            assert_eq!(usable_cap_2d(p).unwrap(), 3 * (2 * t * t - 6 * t + 5) + 4);
        }
    }

    #[test]
    fn total_demand_examples() {
        let p3 = SignalParams::new(5, 3).unwrap();
        assert_eq!(total_demand(&"grid:3x3".parse().unwrap(), p3), 27);
        assert_eq!(total_demand(&"torus:41x41".parse().unwrap(), p3), 5043);
        assert_eq!(total_demand(&"path:n=17,k=2".parse().unwrap(), SignalParams::new(2, 1).unwrap()), 17);
    }

    #[test]
    fn tower_set_construction() {
        let spec: GraphSpec = "path:n=5,k=1".parse().unwrap();
        assert_eq!(TowerSet::new(spec, vec![3, 1]).unwrap().vertices(), &[1, 3]);
        assert!(TowerSet::new(spec, vec![1, 1]).is_err());
        assert!(TowerSet::new(spec, vec![5]).is_err());

        let set = TowerSet::from_json(r#"{"spec":"path:n=10,k=1","towers":[9,1,5]}"#).unwrap();
        assert_eq!(set.vertices(), &[1, 5, 9]);
        assert_eq!(set.to_json().unwrap(), r#"{"spec":"path:n=10,k=1","towers":[1,5,9]}"#);
        assert!(TowerSet::from_json(r#"{"spec":"path:n=3,k=1","towers":[3]}"#).is_err());
        assert!(TowerSet::from_json(r#"{"spec":"grid:3x3,k=2","towers":[]}"#).is_err());
    }
}
