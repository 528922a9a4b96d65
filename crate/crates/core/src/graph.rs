//! Finite graph families with closed-form distances.
//!
//! Vertices are dense `0..order()`. For path and cycle powers vertex `i` is the
//! `i`-th vertex along the path; grids and tori are row-major (`row * cols + col`).
//! [`bfs_distance`] materializes the edge set and exists as an independent oracle
//! for [`GraphSpec::distance`].

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    PathPower,
    CyclePower,
    Grid,
    Torus,
}

impl Family {
    pub fn keyword(self) -> &'static str {
        match self {
            Family::PathPower => "path",
            Family::CyclePower => "cycle",
            Family::Grid => "grid",
            Family::Torus => "torus",
        }
    }
}

/// A member of one of the supported graph families.
///
/// Construct through [`GraphSpec::path_power`] and friends or by parsing the
/// textual form (`path:n=10,k=2`, `cycle:n=12,k=3`, `grid:4x6`, `torus:41x41`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphSpec {
    /// `P_n^(k)`: vertices `0..n`, `i ~ j` iff `|i - j| <= k`.
    PathPower {
        n: usize,
        k: usize,
    },
    /// `C_n^(k)`: as above with cyclic index difference.
    CyclePower {
        n: usize,
        k: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    Torus {
        rows: usize,
        cols: usize,
    },
}

impl GraphSpec {
    pub fn path_power(n: usize, k: usize) -> Result<Self> {
        Self::PathPower { n, k }.validated()
    }

    pub fn cycle_power(n: usize, k: usize) -> Result<Self> {
        Self::CyclePower { n, k }.validated()
    }

    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        Self::Grid { rows, cols }.validated()
    }

    pub fn torus(rows: usize, cols: usize) -> Result<Self> {
        Self::Torus { rows, cols }.validated()
    }

    /// Checks the size invariants. Needed after building a variant literally.
    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            GraphSpec::PathPower { n, k } | GraphSpec::CyclePower { n, k } => n >= 1 && k >= 1,
            GraphSpec::Grid { rows, cols } | GraphSpec::Torus { rows, cols } => rows >= 1 && cols >= 1,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidInput(format!("{self}: all size parameters must be at least 1")))
        }
    }

    pub fn family(&self) -> Family {
        match self {
            GraphSpec::PathPower { .. } => Family::PathPower,
            GraphSpec::CyclePower { .. } => Family::CyclePower,
            GraphSpec::Grid { .. } => Family::Grid,
            GraphSpec::Torus { .. } => Family::Torus,
        }
    }

    /// The power parameter; `None` for grids and tori.
    pub fn power(&self) -> Option<usize> {
        match *self {
            GraphSpec::PathPower { k, .. } | GraphSpec::CyclePower { k, .. } => Some(k),
            _ => None,
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        match *self {
            GraphSpec::PathPower { n, .. } | GraphSpec::CyclePower { n, .. } => n,
            GraphSpec::Grid { rows, cols } | GraphSpec::Torus { rows, cols } => rows * cols,
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, order: self.order() })
        }
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.dist(u, v))
    }

    /// Closed-form distance without bounds checks.
    pub(crate) fn dist(&self, u: usize, v: usize) -> usize {
        match *self {
            GraphSpec::PathPower { k, .. } => u.abs_diff(v).div_ceil(k),
            GraphSpec::CyclePower { n, k } => {
                let d = u.abs_diff(v);
                d.min(n - d).div_ceil(k)
            }
            GraphSpec::Grid { cols, .. } => {
                let (ur, uc) = (u / cols, u % cols);
                let (vr, vc) = (v / cols, v % cols);
                ur.abs_diff(vr) + uc.abs_diff(vc)
            }
            GraphSpec::Torus { rows, cols } => {
                let dr = (u / cols).abs_diff(v / cols);
                let dc = (u % cols).abs_diff(v % cols);
                dr.min(rows - dr) + dc.min(cols - dc)
            }
        }
    }

    /// All vertices within `radius` of `v`, in increasing order.
    pub fn ball(&self, v: usize, radius: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self.ball_unchecked(v, radius))
    }

    pub(crate) fn ball_unchecked(&self, v: usize, radius: usize) -> Vec<usize> {
        match *self {
            GraphSpec::PathPower { n, k } => {
                let reach = radius.saturating_mul(k);
                (v.saturating_sub(reach)..=v.saturating_add(reach).min(n - 1)).collect()
            }
            _ => (0..self.order()).filter(|&u| self.dist(u, v) <= radius).collect(),
        }
    }

    /// Row and column of a grid or torus vertex.
    pub fn coords(&self, v: usize) -> Option<(usize, usize)> {
        match *self {
            GraphSpec::Grid { cols, .. } | GraphSpec::Torus { cols, .. } => Some((v / cols, v % cols)),
            _ => None,
        }
    }

    /// Neighbour lists of the explicit edge set, without self loops or duplicates.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let order = self.order();
        let mut adj = vec![Vec::new(); order];
        match *self {
            GraphSpec::PathPower { n, k } => {
                for i in 0..n {
                    for j in i + 1..n.min(i.saturating_add(k).saturating_add(1)) {
                        adj[i].push(j);
                        adj[j].push(i);
                    }
                }
            }
            GraphSpec::CyclePower { n, k } => {
                for i in 0..n {
                    for step in 1..=k.min(n) {
                        let j = (i + step) % n;
                        if j != i {
                            adj[i].push(j);
                            adj[j].push(i);
                        }
                    }
                }
            }
            GraphSpec::Grid { rows, cols } => {
                for r in 0..rows {
                    for c in 0..cols {
                        let v = r * cols + c;
                        if c + 1 < cols {
                            adj[v].push(v + 1);
                            adj[v + 1].push(v);
                        }
                        if r + 1 < rows {
                            adj[v].push(v + cols);
                            adj[v + cols].push(v);
                        }
                    }
                }
            }
            GraphSpec::Torus { rows, cols } => {
                for r in 0..rows {
                    for c in 0..cols {
                        let v = r * cols + c;
                        let right = r * cols + (c + 1) % cols;
                        let down = ((r + 1) % rows) * cols + c;
                        for w in [right, down] {
                            if w != v {
                                adj[v].push(w);
                                adj[w].push(v);
                            }
                        }
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

/// Breadth-first distances from `source` over the explicit edge set.
pub fn bfs_distances_from(adj: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices are labelled");
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Distance by breadth-first search on the materialized graph.
pub fn bfs_distance(spec: &GraphSpec, u: usize, v: usize) -> Result<usize> {
    spec.check_vertex(u)?;
    spec.check_vertex(v)?;
    let adj = spec.adjacency();
    Ok(bfs_distances_from(&adj, u)[v].expect("all families are connected"))
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphSpec::PathPower { n, k } => write!(f, "path:n={n},k={k}"),
            GraphSpec::CyclePower { n, k } => write!(f, "cycle:n={n},k={k}"),
            GraphSpec::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            GraphSpec::Torus { rows, cols } => write!(f, "torus:{rows}x{cols}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::SpecParse { input: input.to_string(), reason: reason.to_string() };
        let (family, body) = input.trim().split_once(':').ok_or_else(|| fail("expected <family>:<params>"))?;
        let number =
            |s: &str| s.trim().parse::<usize>().map_err(|_| fail(&format!("{s:?} is not a non-negative integer")));

        match family.trim() {
            "path" | "cycle" => {
                let (mut n, mut k) = (None, None);
                for item in body.split(',') {
                    let (key, value) = item.split_once('=').ok_or_else(|| fail("expected key=value"))?;
                    let slot = match key.trim() {
                        "n" => &mut n,
                        "k" => &mut k,
                        other => return Err(fail(&format!("unknown key {other:?}"))),
                    };
                    if slot.replace(number(value)?).is_some() {
                        return Err(fail(&format!("duplicate key {:?}", key.trim())));
                    }
                }
                let n = n.ok_or_else(|| fail("missing n"))?;
                let k = k.unwrap_or(1);
                if family.trim() == "path" {
                    GraphSpec::path_power(n, k)
                } else {
                    GraphSpec::cycle_power(n, k)
                }
            }
            "grid" | "torus" => {
                if body.contains('=') || body.contains(',') {
                    return Err(fail("grids and tori take only WxH (no power parameter)"));
                }
                let (rows, cols) = body.split_once('x').ok_or_else(|| fail("expected WxH"))?;
                let (rows, cols) = (number(rows)?, number(cols)?);
                if family.trim() == "grid" {
                    GraphSpec::grid(rows, cols)
                } else {
                    GraphSpec::torus(rows, cols)
                }
            }
            other => Err(fail(&format!("unknown family {other:?}"))),
        }
    }
}

impl Serialize for GraphSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GraphSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
