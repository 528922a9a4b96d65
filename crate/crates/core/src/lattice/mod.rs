//! Periodic tower configurations of the integer plane.
//!
//! A [`LatticeConfig`] places towers at `offsets + L` where `L = {m a + n b}`.
//! Everything about such a configuration is decided on one fundamental domain:
//! we reduce the basis to the triangular form `(h11, h12), (0, h22)` and use the
//! box `[0, h11) x [0, h22)` as the canonical set of `N = |det|` residues. Each
//! residue's representative is the lexicographically least point of its class in
//! the non-negative quadrant.

mod audit;
mod profile;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ratio::Rational;

pub use audit::{
    audit_domain, audit_point, excess_report, promote_check, verify_periodic, window_excess, ExcessReport,
    LatticeVerdict, Orientation, PointAudit,
};
pub use profile::{excess_profile, DiagonalProfile, ExcessProfile};

/// A point of the integer plane; serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Point(pub i64, pub i64);

impl Point {
    pub fn l1(self) -> i64 {
        self.0.abs() + self.1.abs()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point(self.0 + o.0, self.1 + o.1)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point(self.0 - o.0, self.1 - o.1)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// A full-rank sublattice of Z^2 in triangular form: rows `(h11, h12)` and
/// `(0, h22)` with `h11, h22 > 0` and `0 <= h12 < h22`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    h11: i64,
    h12: i64,
    h22: i64,
}

impl Lattice {
    pub fn from_basis(a: Point, b: Point) -> Result<Self> {
        let det = a.0 * b.1 - a.1 * b.0;
        if det == 0 {
            return Err(Error::DegenerateLattice);
        }
        // Combine the rows so the first coordinates become (g, 0), g = gcd(a.x, b.x).
        let eg = a.0.extended_gcd(&b.0);
        let (mut g, mut s, mut u) = (eg.gcd, eg.x, eg.y);
        if g < 0 {
            (g, s, u) = (-g, -s, -u);
        }
        let first = Point(s * a.0 + u * b.0, s * a.1 + u * b.1);
        debug_assert_eq!(first.0, g);
        let second_y = (b.0 / g) * a.1 - (a.0 / g) * b.1;
        let h22 = second_y.abs();
        debug_assert_eq!(g * h22, det.abs());
        Ok(Self { h11: g, h12: first.1.rem_euclid(h22), h22 })
    }

    /// The index `N = [Z^2 : L]`.
    pub fn index(&self) -> i64 {
        self.h11 * self.h22
    }

    /// Triangular basis rows `(h11, h12)` and `(0, h22)`.
    pub fn triangular_basis(&self) -> (Point, Point) {
        (Point(self.h11, self.h12), Point(0, self.h22))
    }

    /// Canonical representative of `p + L`, inside `[0, h11) x [0, h22)`.
    pub fn reduce(&self, p: Point) -> Point {
        let m = p.0.div_euclid(self.h11);
        let y = p.1 - m * self.h12;
        Point(p.0 - m * self.h11, y.rem_euclid(self.h22))
    }

    pub fn contains(&self, p: Point) -> bool {
        self.reduce(p) == Point(0, 0)
    }

    /// Dense index of a canonical representative (`x * h22 + y`).
    pub(crate) fn slot(&self, rep: Point) -> usize {
        (rep.0 * self.h22 + rep.1) as usize
    }

    /// Canonical representatives, ordered by `x` then `y`.
    pub fn representatives(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.h11).flat_map(move |x| (0..self.h22).map(move |y| Point(x, y)))
    }

    /// Smallest `p1, p2 > 0` with `(p1, 0)` and `(0, p2)` in the lattice.
    pub fn axis_periods(&self) -> (i64, i64) {
        (self.h11 * (self.h22 / self.h12.gcd(&self.h22)), self.h22)
    }

    /// Calls `f` on every lattice point in `centre + [-radius, radius]^2`.
    pub(crate) fn for_each_in_box(&self, centre: Point, radius: i64, mut f: impl FnMut(Point)) {
        let m_lo = Integer::div_ceil(&(centre.0 - radius), &self.h11);
        let m_hi = Integer::div_floor(&(centre.0 + radius), &self.h11);
        for m in m_lo..=m_hi {
            let y0 = m * self.h12;
            let n_lo = Integer::div_ceil(&(centre.1 - radius - y0), &self.h22);
            let n_hi = Integer::div_floor(&(centre.1 + radius - y0), &self.h22);
            for n in n_lo..=n_hi {
                f(Point(m * self.h11, y0 + n * self.h22));
            }
        }
    }
}

/// Towers at `offsets + {m a + n b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigFile", into = "ConfigFile")]
pub struct LatticeConfig {
    a: Point,
    b: Point,
    offsets: Vec<Point>,
    lattice: Lattice,
}

#[derive(Serialize, Deserialize)]
struct ConfigFile {
    a: Point,
    b: Point,
    #[serde(default = "origin_only")]
    offsets: Vec<Point>,
}

fn origin_only() -> Vec<Point> {
    vec![Point(0, 0)]
}

impl TryFrom<ConfigFile> for LatticeConfig {
    type Error = Error;
    fn try_from(f: ConfigFile) -> Result<Self> {
        LatticeConfig::new(f.a, f.b, f.offsets)
    }
}

impl From<LatticeConfig> for ConfigFile {
    fn from(c: LatticeConfig) -> Self {
        ConfigFile { a: c.a, b: c.b, offsets: c.offsets }
    }
}

impl LatticeConfig {
    /// Rejects a singular basis, an empty offset list and offsets that coincide
    /// modulo the lattice.
    pub fn new(a: Point, b: Point, offsets: Vec<Point>) -> Result<Self> {
        let lattice = Lattice::from_basis(a, b)?;
        if offsets.is_empty() {
            return Err(invalid("a lattice configuration needs at least one offset"));
        }
        let mut reps: Vec<Point> = offsets.iter().map(|&o| lattice.reduce(o)).collect();
        reps.sort_unstable();
        if let Some(w) = reps.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("two offsets are congruent modulo the lattice (residue {})", w[0])));
        }
        Ok(Self { a, b, offsets, lattice })
    }

    /// Single-tower configuration `{m a + n b}`.
    pub fn from_basis(a: Point, b: Point) -> Result<Self> {
        Self::new(a, b, vec![Point(0, 0)])
    }

    /// Basis `(t-1, t-2), (t-2, 1-t)`: the perfect tiling by l1 balls of radius
    /// `t - 2`, index `(t-1)^2 + (t-2)^2`. It is `(t,3)`-broadcasting.
    pub fn t0(t: i64) -> Result<Self> {
        if t < 3 {
            return Err(invalid(format!("t0 needs t >= 3 (got {t})")));
        }
        Self::from_basis(Point(t - 1, t - 2), Point(t - 2, 1 - t))
    }

    /// Basis `(t-1, t), (t, 1-t)`: the perfect tiling by l1 balls of radius
    /// `t - 1`, index `2t^2 - 2t + 1`, the optimal `(t,1)` configuration.
    pub fn perfect_t1(t: i64) -> Result<Self> {
        if t < 2 {
            return Err(invalid(format!("perfect_t1 needs t >= 2 (got {t})")));
        }
        Self::from_basis(Point(t - 1, t), Point(t, 1 - t))
    }

    /// The perfect `(t,1)` tiling reflected in the x-axis and translated so that
    /// towers sit at `(t-1, 0)`, `(0, t)`, `(-t, 1)` and `(-1, 1-t)` around the
    /// origin. This is the placement used by [`excess_profile`].
    pub fn square_t1(t: i64) -> Result<Self> {
        if t < 2 {
            return Err(invalid(format!("square_t1 needs t >= 2 (got {t})")));
        }
        Self::new(Point(t, t - 1), Point(1 - t, t), vec![Point(t - 1, 0)])
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn offsets(&self) -> &[Point] {
        &self.offsets
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn determinant(&self) -> i64 {
        self.a.0 * self.b.1 - self.a.1 * self.b.0
    }

    pub fn index(&self) -> i64 {
        self.determinant().abs()
    }

    /// Towers per fundamental domain over its size, exactly.
    pub fn density(&self) -> Rational {
        Rational::new(self.offsets.len() as i64, self.index())
    }

    pub fn axis_periods(&self) -> (i64, i64) {
        self.lattice().axis_periods()
    }

    /// Whether `p` is a tower.
    pub fn is_tower(&self, p: Point) -> bool {
        let lattice = self.lattice();
        let rep = lattice.reduce(p);
        self.offsets.iter().any(|&o| lattice.reduce(o) == rep)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
