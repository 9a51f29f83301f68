//! Pair-distance averages over uniformly filled circular (2D) and spherical (3D)
//! atomic ensembles.
//!
//! The continuum averages ⟨|rⱼ−rₖ|ᵖ⟩ reduce to one-dimensional quadrature through
//! the in-region kernels `kernel_s` (arc length of a circle inside the disk) and
//! `kernel_a` (area of a sphere inside the ball). A discrete lattice-sum oracle
//! validates the continuum approximation on actual lattice fillings.

use crate::quad::{adaptive_simpson, QuadError};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

const INNER_TOL: f64 = 1e-6;
const OUTER_TOL: f64 = 1e-5;
/// Below this fraction of R the kernels switch to their analytic r→0 limit.
const CENTER_EPS: f64 = 1e-9;
/// Hard cap on lattice enumeration (2e4 atoms → 2e8 pairs).
const LATTICE_CAP: u32 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dim {
    TwoD,
    ThreeD,
}

impl Dim {
    pub fn label(self) -> &'static str {
        match self {
            Dim::TwoD => "2d",
            Dim::ThreeD => "3d",
        }
    }
}

impl std::str::FromStr for Dim {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "2d" | "2" => Ok(Dim::TwoD),
            "3d" | "3" => Ok(Dim::ThreeD),
            other => Err(format!("unknown dimensionality {other:?}, expected 2d or 3d")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("pair average needs at least 2 atoms, got {0}")]
    TooFewAtoms(u32),
    #[error("offset r={r} outside the region radius R={radius}")]
    OffsetOutsideRegion { r: f64, radius: f64 },
    #[error("lattice enumeration capped at {LATTICE_CAP} atoms, got {0}")]
    LatticeTooLarge(u32),
    #[error("unsupported pair-distance exponent {0}, expected 6 or 12")]
    BadExponent(u32),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// A filled lattice region: n sites of a square (cubic) lattice with constant `a`
/// inside a disk (ball) of the radius fixed by uniform density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGeometry {
    pub dim: Dim,
    pub n: u32,
    pub a: f64,
    pub radius: f64,
}

impl LatticeGeometry {
    /// Radius follows from density 1/a^d: πR² = n a² (2D), (4π/3)R³ = n a³ (3D).
    pub fn new(dim: Dim, n: u32, a: f64) -> Result<Self, GeometryError> {
        if n < 2 {
            return Err(GeometryError::TooFewAtoms(n));
        }
        let radius = match dim {
            Dim::TwoD => (n as f64 * a * a / PI).sqrt(),
            Dim::ThreeD => (3.0 * n as f64 * a.powi(3) / (4.0 * PI)).cbrt(),
        };
        Ok(Self { dim, n, a, radius })
    }
}

/// Arc length of the circle of radius `x` centered `r` from the origin that lies
/// inside the disk of radius `radius`. Continuous across both branch seams.
pub fn kernel_s(r: f64, x: f64, radius: f64) -> Result<f64, GeometryError> {
    if r < 0.0 || r > radius {
        return Err(GeometryError::OffsetOutsideRegion { r, radius });
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if r < CENTER_EPS * radius {
        // concentric limit: fully inside or fully outside
        return Ok(if x < radius { 2.0 * PI * x } else { 0.0 });
    }
    Ok(if x < radius - r {
        2.0 * PI * x
    } else if x > radius + r {
        0.0
    } else {
        let cos_arg = (x * x + r * r - radius * radius) / (2.0 * x * r);
        2.0 * x * cos_arg.clamp(-1.0, 1.0).acos()
    })
}

/// Area of the sphere of radius `x` centered `r` from the origin that lies inside
/// the ball of radius `radius`. The r→0 limit is handled analytically.
pub fn kernel_a(r: f64, x: f64, radius: f64) -> Result<f64, GeometryError> {
    if r < 0.0 || r > radius {
        return Err(GeometryError::OffsetOutsideRegion { r, radius });
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if r < CENTER_EPS * radius {
        return Ok(if x < radius { 4.0 * PI * x * x } else { 0.0 });
    }
    Ok(if x < radius - r {
        4.0 * PI * x * x
    } else if x > radius + r {
        0.0
    } else {
        PI * (x / r) * (radius * radius - (x - r) * (x - r))
    })
}

/// Continuum pair-distance moment ⟨|rⱼ−rₖ|ᵖ⟩ over the uniformly filled region of
/// radius `radius` (dimensionful, units of lengthᵖ).
pub fn continuum_pair_moment(dim: Dim, radius: f64, exponent: u32) -> Result<f64, GeometryError> {
    let volume = match dim {
        Dim::TwoD => PI * radius * radius,
        Dim::ThreeD => 4.0 * PI * radius.powi(3) / 3.0,
    };
    let p = exponent as i32;
    let outer = |r: f64| -> f64 {
        let measure = match dim {
            Dim::TwoD => 2.0 * PI * r,
            Dim::ThreeD => 4.0 * PI * r * r,
        };
        // split the inner integral at the kernel seams to keep Simpson happy
        let kernel = |x: f64| match dim {
            Dim::TwoD => kernel_s(r, x, radius).unwrap_or(0.0),
            Dim::ThreeD => kernel_a(r, x, radius).unwrap_or(0.0),
        };
        let f = |x: f64| kernel(x) * x.powi(p);
        let seam = (radius - r).max(0.0);
        let (inner1, _) = adaptive_simpson(&f, 0.0, seam, INNER_TOL).unwrap_or((0.0, 0.0));
        let (inner2, _) = adaptive_simpson(&f, seam, radius + r, INNER_TOL).unwrap_or((0.0, 0.0));
        measure * (inner1 + inner2)
    };
    let (value, _) = adaptive_simpson(&outer, 0.0, radius, OUTER_TOL * volume * volume * radius.powi(p))?;
    Ok(value / (volume * volume))
}

/// Dimensionless x⁶ pair-moment integral: ⟨|rⱼ−rₖ|⁶⟩/R⁶ for a unit-radius region.
pub fn integral_i(dim: Dim) -> Result<f64, GeometryError> {
    continuum_pair_moment(dim, 1.0, 6)
}

/// Dimensionless x¹² pair-moment integral: ⟨|rⱼ−rₖ|¹²⟩/R¹² for a unit-radius region.
pub fn integral_j(dim: Dim) -> Result<f64, GeometryError> {
    continuum_pair_moment(dim, 1.0, 12)
}

/// All four dimensionless integrals in one bundle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeometryIntegrals {
    pub i_2d: f64,
    pub i_3d: f64,
    pub j_2d: f64,
    pub j_3d: f64,
}

impl GeometryIntegrals {
    pub fn compute() -> Result<Self, GeometryError> {
        Ok(Self {
            i_2d: integral_i(Dim::TwoD)?,
            i_3d: integral_i(Dim::ThreeD)?,
            j_2d: integral_j(Dim::TwoD)?,
            j_3d: integral_j(Dim::ThreeD)?,
        })
    }
}

/// The n lattice sites filling the region: sites of the square/cubic lattice
/// sorted by distance from a plaquette-center origin, ties broken by
/// lexicographic index order. Deterministic and center-site free.
pub fn lattice_sites(geom: &LatticeGeometry) -> Vec<[f64; 3]> {
    let a = geom.a;
    let m = (geom.radius / a).ceil() as i64 + 2;
    let mut sites: Vec<(f64, [i64; 3])> = Vec::new();
    match geom.dim {
        Dim::TwoD => {
            for i in -m..=m {
                for j in -m..=m {
                    let (x, y) = (i as f64 * a - 0.5 * a, j as f64 * a - 0.5 * a);
                    sites.push((x * x + y * y, [i, j, 0]));
                }
            }
        }
        Dim::ThreeD => {
            for i in -m..=m {
                for j in -m..=m {
                    for k in -m..=m {
                        let (x, y, z) = (i as f64 * a - 0.5 * a, j as f64 * a - 0.5 * a, k as f64 * a - 0.5 * a);
                        sites.push((x * x + y * y + z * z, [i, j, k]));
                    }
                }
            }
        }
    }
    sites.sort_by(|(da, ia), (db, ib)| da.partial_cmp(db).unwrap().then(ia.cmp(ib)));
    sites
        .into_iter()
        .take(geom.n as usize)
        .map(|(_, [i, j, k])| {
            [
                i as f64 * a - 0.5 * a,
                j as f64 * a - 0.5 * a,
                if geom.dim == Dim::ThreeD { k as f64 * a - 0.5 * a } else { 0.0 },
            ]
        })
        .collect()
}

/// Exact pair average of |rⱼ−rₖ|^exponent over the discrete lattice filling.
/// This is the brute-force oracle for the continuum approximation.
pub fn lattice_sum_average(geom: &LatticeGeometry, exponent: u32) -> Result<f64, GeometryError> {
    if exponent != 6 && exponent != 12 {
        return Err(GeometryError::BadExponent(exponent));
    }
    if geom.n > LATTICE_CAP {
        return Err(GeometryError::LatticeTooLarge(geom.n));
    }
    let sites = lattice_sites(geom);
    let p = (exponent / 2) as i32;
    let mut sum = 0.0;
    for (idx, sj) in sites.iter().enumerate() {
        for sk in sites.iter().skip(idx + 1) {
            let d2 = (sj[0] - sk[0]).powi(2) + (sj[1] - sk[1]).powi(2) + (sj[2] - sk[2]).powi(2);
            sum += d2.powi(p);
        }
    }
    let pairs = geom.n as f64 * (geom.n as f64 - 1.0) / 2.0;
    Ok(sum / pairs)
}
