//! Placement of the transmitter, receiver and unit cells.
//!
//! The surface occupies the x-y plane with its centre at the origin and the
//! reflecting side facing `+z`. Elevation angles are measured from `+z`,
//! azimuths counter-clockwise from `+x` and reported in `[0, 2π)`.

use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Error, Result};
use crate::math::{acos, atan2, cos, deg, sin, sqrt, wrap_phase};
use crate::ris::RisConfig;

/// A point (or displacement) in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    /// x coordinate.
    pub x: f64,
    /// y coordinate.
    pub y: f64,
    /// z coordinate.
    pub z: f64,
}

impl Point3 {
    /// The surface centre.
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    /// Creates a point.
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Dot product.
    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Euclidean length.
    pub fn norm(self) -> f64 {
        sqrt(self.dot(self))
    }

    /// `true` if every component is finite.
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Spherical placement of this point relative to the origin.
    pub fn to_placement(self) -> Result<SphericalPlacement> {
        let d = self.norm();
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::DegenerateGeometry("point coincides with the surface centre"));
        }
        let (elevation, azimuth) = angles_of(self, d);
        SphericalPlacement::new(d, elevation, azimuth)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// An elevation/azimuth pair in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Direction {
    /// Angle from the surface normal.
    pub elevation: f64,
    /// Angle in the surface plane, from `+x`.
    pub azimuth: f64,
}

impl Direction {
    /// Creates a direction from radians.
    pub const fn new(elevation: f64, azimuth: f64) -> Self {
        Self { elevation, azimuth }
    }

    /// Creates a direction from degrees.
    pub fn from_degrees(elevation: f64, azimuth: f64) -> Self {
        Self::new(deg(elevation), deg(azimuth))
    }

    /// Unit vector pointing along this direction.
    pub fn unit_vector(self) -> Point3 {
        let s = sin(self.elevation);
        Point3::new(s * cos(self.azimuth), s * sin(self.azimuth), cos(self.elevation))
    }

    /// The specular partner of an incidence direction: same elevation,
    /// azimuth rotated by π.
    pub fn specular(self) -> Self {
        Self::new(self.elevation, wrap_phase(self.azimuth + PI))
    }
}

/// A terminal position relative to the surface centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPlacement {
    distance: f64,
    elevation: f64,
    azimuth: f64,
}

impl SphericalPlacement {
    /// Validates and creates a placement. The azimuth is wrapped into
    /// `[0, 2π)`; the elevation must keep the terminal on the reflecting side.
    pub fn new(distance: f64, elevation: f64, azimuth: f64) -> Result<Self> {
        if !distance.is_finite() || distance <= 0.0 {
            return Err(invalid("distance", "must be positive and finite"));
        }
        if !(0.0..=FRAC_PI_2).contains(&elevation) {
            return Err(Error::AngleOutOfRange { angle: elevation, min: 0.0, max: FRAC_PI_2 });
        }
        if !azimuth.is_finite() {
            return Err(invalid("azimuth", "must be finite"));
        }
        Ok(Self { distance, elevation, azimuth: wrap_phase(azimuth) })
    }

    /// Same as [`SphericalPlacement::new`] with angles in degrees.
    pub fn from_degrees(distance: f64, elevation: f64, azimuth: f64) -> Result<Self> {
        Self::new(distance, deg(elevation), deg(azimuth))
    }

    /// Distance to the surface centre (m).
    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// Elevation from the surface normal.
    pub fn elevation(&self) -> f64 {
        self.elevation
    }

    /// Azimuth in `[0, 2π)`.
    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    /// Direction from the surface centre towards the terminal.
    pub fn direction(&self) -> Direction {
        Direction::new(self.elevation, self.azimuth)
    }

    /// Same direction, different distance.
    pub fn with_distance(&self, distance: f64) -> Result<Self> {
        Self::new(distance, self.elevation, self.azimuth)
    }

    /// Cartesian position: `d (sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn to_point(&self) -> Point3 {
        self.direction().unit_vector() * self.distance
    }
}

/// Row `n` and column `m` of a unit cell, `n ∈ [1−N/2, N/2]`,
/// `m ∈ [1−M/2, M/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellIndex {
    /// Row, along y.
    pub n: i32,
    /// Column, along x.
    pub m: i32,
}

impl CellIndex {
    /// Creates an index.
    pub const fn new(n: i32, m: i32) -> Self {
        Self { n, m }
    }
}

/// Centre of cell `idx`: `((m − ½) d_x, (n − ½) d_y, 0)`.
pub fn cell_center(cfg: &RisConfig, idx: CellIndex) -> Result<Point3> {
    if !cfg.contains(idx) {
        return Err(Error::IndexOutOfRange { n: idx.n, m: idx.m, rows: cfg.rows(), cols: cfg.cols() });
    }
    Ok(cfg.cell_center_unchecked(idx))
}

/// Euclidean distance between a terminal and a cell.
pub fn cell_distance(terminal: Point3, cell: Point3) -> f64 {
    (terminal - cell).norm()
}

fn angles_of(v: Point3, r: f64) -> (f64, f64) {
    let elevation = acos((v.z / r).clamp(-1.0, 1.0));
    // Azimuth is undefined on the normal; pin it to zero.
    let azimuth = if v.x == 0.0 && v.y == 0.0 { 0.0 } else { wrap_phase(atan2(v.y, v.x)) };
    (elevation, azimuth)
}

/// Elevation and azimuth of `terminal` as seen from `cell`.
pub fn cell_to_terminal_angles(cell: Point3, terminal: Point3) -> Result<(f64, f64)> {
    let v = terminal - cell;
    let r = v.norm();
    if r == 0.0 {
        return Err(Error::DegenerateGeometry("terminal coincides with cell"));
    }
    Ok(angles_of(v, r))
}

/// Angle between the antenna boresight (towards `boresight_target`) and the
/// line from the antenna to `cell`, in `[0, π]`.
pub fn antenna_offboresight_angle(antenna_pos: Point3, boresight_target: Point3, cell: Point3) -> Result<f64> {
    let b = boresight_target - antenna_pos;
    let c = cell - antenna_pos;
    let (nb, nc) = (b.norm(), c.norm());
    if nb == 0.0 {
        return Err(Error::DegenerateGeometry("antenna coincides with its boresight target"));
    }
    if nc == 0.0 {
        return Err(Error::DegenerateGeometry("antenna coincides with cell"));
    }
    Ok(acos((b.dot(c) / (nb * nc)).clamp(-1.0, 1.0)))
}

/// Reflection of `p` through the surface plane.
pub fn mirror_image(p: Point3) -> Point3 {
    Point3::new(p.x, p.y, -p.z)
}

/// Position of the virtual transmitter that would make a specular surface
/// broadcast towards `desired`:
/// `(−d₁ sinθ cosφ, −d₁ sinθ sinφ, d₁ cosθ)`.
pub fn virtual_transmitter(d1: f64, desired: Direction) -> Point3 {
    let u = desired.unit_vector();
    Point3::new(-u.x, -u.y, u.z) * d1
}
