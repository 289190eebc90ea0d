//! Bias-line fields and mutual inductances from the Biot–Savart law.
//!
//! The flux-bias line is a T of thin filaments in the circuit plane:
//!
//! * part A runs along the y-axis from −∞ up to the origin and carries `I`,
//! * parts B and C run from the origin along the x-axis to `+x_a` and `−x_a`
//!   and carry `I/2` each.
//!
//! For `y ≥ 0` the field magnitudes are
//!
//! ```text
//! A:  μ₀I/4π · (1/x − y/(x·r))
//! B:  μ₀I/8π · (x/(y·r) − (x−x_a)/(y·r₊))
//! C:  μ₀I/8π · ((x+x_a)/(y·r₋) − x/(y·r))
//! ```
//!
//! with `r = √(x²+y²)` and `r± = √((x∓x_a)²+y²)`. Their out-of-plane
//! components add as `B_z = −B_A + B_B − B_C`. Fluxes are areal integrals of
//! `B_z` over axis-aligned rectangles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{MU_0, PHI_0};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d, Tolerance};

/// One straight part of the bias line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Segment {
    A,
    B,
    C,
}

impl Segment {
    pub const ALL: [Segment; 3] = [Segment::A, Segment::B, Segment::C];
}

/// Axis-aligned rectangle `[x1, x2] × [y1, y2]` in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

impl Rect {
    pub fn new(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<Self> {
        let r = Rect { x1, x2, y1, y2 };
        r.validate()?;
        Ok(r)
    }

    /// Rectangle from micrometre coordinates.
    pub fn from_um(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<Self> {
        Rect::new(x1 * 1e-6, x2 * 1e-6, y1 * 1e-6, y2 * 1e-6)
    }

    pub fn area(&self) -> f64 {
        (self.x2 - self.x1) * (self.y2 - self.y1)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x1, self.x2, self.y1, self.y2]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.x2 > self.x1 && self.y2 > self.y1) {
            return Err(Error::invalid(
                "rectangle",
                format!("degenerate rectangle {self:?}"),
            ));
        }
        if self.y1 <= 0.0 {
            return Err(Error::invalid(
                "rectangle",
                format!("must lie strictly above the bias line (y1 > 0), got {self:?}"),
            ));
        }
        Ok(())
    }
}

/// T-shaped bias line plus the loop areas it couples to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasLineGeometry {
    /// Length of each arm, B and C (m).
    pub x_a: f64,
    /// Width of part A (m). Not used by the filament model.
    pub width_a: f64,
    /// Width of parts B and C (m). Not used by the filament model.
    pub width_bc: f64,
    /// Rectangles tiling the SQUID loop.
    pub squid_loop: Vec<Rect>,
    /// Rectangles tiling the electrode-to-ground gap.
    pub gap: Vec<Rect>,
}

impl Default for BiasLineGeometry {
    /// Loop of 125 µm² + 241.5 µm² next to the line, and a gap pair offset
    /// 4 µm from the line axis.
    fn default() -> Self {
        let um = |x1, x2, y1, y2| Rect {
            x1: x1 * 1e-6,
            x2: x2 * 1e-6,
            y1: y1 * 1e-6,
            y2: y2 * 1e-6,
        };
        let xc = 4.0;
        BiasLineGeometry {
            x_a: 24e-6,
            width_a: 5e-6,
            width_bc: 2e-6,
            squid_loop: vec![um(2.0, 27.0, 2.3, 7.3), um(2.0, 25.0, 7.3, 17.8)],
            gap: vec![
                um(xc - 36.0, xc - 12.0, 18.0, 148.0),
                um(xc + 12.0, xc + 36.0, 18.0, 148.0),
            ],
        }
    }
}

impl BiasLineGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_a > 0.0 && self.x_a.is_finite()) {
            return Err(Error::invalid(
                "x_a",
                format!("must be positive, got {}", self.x_a),
            ));
        }
        for (name, w) in [("width_a", self.width_a), ("width_bc", self.width_bc)] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("must be non-negative, got {w}"),
                ));
            }
        }
        if self.squid_loop.is_empty() {
            return Err(Error::invalid("squid_loop", "needs at least one rectangle"));
        }
        self.squid_loop
            .iter()
            .chain(&self.gap)
            .try_for_each(Rect::validate)
    }
}

/// `x/r` split as `s − s·y²/(r(r+|x|))`, `s = sign(x)`, returning both parts.
fn direction_cosine(x: f64, y: f64) -> (f64, f64) {
    let r = x.hypot(y);
    let s = if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    };
    (
        s,
        if r == 0.0 {
            0.0
        } else {
            s * y * y / (r * (r + x.abs()))
        },
    )
}

/// `(x₁/r₁ − x₂/r₂)/y` for a filament on the x-axis from `−x₁` to `−x₂`
/// relative to the field point.
fn finite_segment_term(x1: f64, x2: f64, y: f64) -> Option<f64> {
    let (s1, c1) = direction_cosine(x1, y);
    let (s2, c2) = direction_cosine(x2, y);
    let jump = if s1 == s2 {
        0.0
    } else if y == 0.0 {
        return None;
    } else {
        (s1 - s2) / y
    };
    let smooth = if y == 0.0 { 0.0 } else { -(c1 - c2) / y };
    Some(jump + smooth)
}

/// Field magnitude of one segment at `(x, y)`, with `current` the current in
/// part A (T).
pub fn field_at(
    segment: Segment,
    x: f64,
    y: f64,
    current: f64,
    geometry: &BiasLineGeometry,
) -> Result<f64> {
    let k = MU_0 * current / (4.0 * PI);
    let on_conductor = || Error::OnConductor { segment, x, y };
    match segment {
        Segment::A => {
            if x == 0.0 {
                return if y > 0.0 {
                    Ok(0.0)
                } else {
                    Err(on_conductor())
                };
            }
            let r = x.hypot(y);
            let shape = if y >= 0.0 {
                x / (r * (r + y))
            } else {
                (r - y) / (x * r)
            };
            Ok(k * shape)
        }
        Segment::B => finite_segment_term(x, x - geometry.x_a, y)
            .map(|t| 0.5 * k * t)
            .ok_or_else(on_conductor),
        Segment::C => finite_segment_term(x + geometry.x_a, x, y)
            .map(|t| 0.5 * k * t)
            .ok_or_else(on_conductor),
    }
}

/// Out-of-plane field of the whole line, `−B_A + B_B − B_C` (T).
pub fn field_z(x: f64, y: f64, current: f64, geometry: &BiasLineGeometry) -> Result<f64> {
    Ok(-field_at(Segment::A, x, y, current, geometry)?
        + field_at(Segment::B, x, y, current, geometry)?
        - field_at(Segment::C, x, y, current, geometry)?)
}

/// Relative tolerance of flux integrals.
pub const FLUX_REL_TOL: f64 = 1e-9;

/// Flux estimate in Wb with its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flux {
    pub value: f64,
    pub error: f64,
}

/// Flux of `B_z` through `rect` for bias current `current`.
pub fn flux_through_rectangle(
    rect: &Rect,
    current: f64,
    geometry: &BiasLineGeometry,
) -> Result<Flux> {
    flux_with_tolerance(rect, current, geometry, FLUX_REL_TOL)
}

pub fn flux_with_tolerance(
    rect: &Rect,
    current: f64,
    geometry: &BiasLineGeometry,
    rel_tol: f64,
) -> Result<Flux> {
    rect.validate()?;
    if current == 0.0 {
        return Ok(Flux {
            value: 0.0,
            error: 0.0,
        });
    }
    let e = integrate_2d(
        |x, y| field_z(x, y, current, geometry),
        rect.x1,
        rect.x2,
        rect.y1,
        rect.y2,
        Tolerance::relative(rel_tol),
    )?;
    Ok(Flux {
        value: e.value,
        error: e.error,
    })
}

/// Summed flux through a set of rectangles.
pub fn flux_through(
    rects: &[Rect],
    current: f64,
    geometry: &BiasLineGeometry,
    rel_tol: f64,
) -> Result<Flux> {
    let mut total = Flux {
        value: 0.0,
        error: 0.0,
    };
    for r in rects {
        let f = flux_with_tolerance(r, current, geometry, rel_tol)?;
        total.value += f.value;
        total.error += f.error;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutualInductances {
    /// Line to SQUID loop (H).
    pub m: f64,
    /// Line to the electrode gap (H).
    pub m_parasitic: f64,
    /// Summed quadrature error bound of both (H).
    pub error: f64,
}

impl MutualInductances {
    /// Bias current for one flux quantum through the SQUID loop (A).
    pub fn periodicity(&self) -> f64 {
        PHI_0 / self.m
    }
}

/// `M = |Φ_loop|/I` and `M′ = |Φ_gap|/I`, evaluated at unit current.
pub fn mutual_inductances(geometry: &BiasLineGeometry) -> Result<MutualInductances> {
    mutual_inductances_with_tolerance(geometry, FLUX_REL_TOL)
}

pub fn mutual_inductances_with_tolerance(
    geometry: &BiasLineGeometry,
    rel_tol: f64,
) -> Result<MutualInductances> {
    geometry.validate()?;
    let loop_flux = flux_through(&geometry.squid_loop, 1.0, geometry, rel_tol)?;
    let gap_flux = flux_through(&geometry.gap, 1.0, geometry, rel_tol)?;
    Ok(MutualInductances {
        m: loop_flux.value.abs(),
        m_parasitic: gap_flux.value.abs(),
        error: loop_flux.error + gap_flux.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> BiasLineGeometry {
        BiasLineGeometry::default()
    }

    #[test]
    fn default_areas() {
        let areas: Vec<f64> = g().squid_loop.iter().map(|r| r.area() * 1e12).collect();
        assert!((areas[0] - 125.0).abs() < 1e-9);
        assert!((areas[1] - 241.5).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite_end_value() {
        for x in [1e-6, 7e-6, 3e-5] {
            let b = field_at(Segment::A, x, 0.0, 1e-3, &g()).unwrap();
            let expect = MU_0 * 1e-3 / (4.0 * PI * x);
            assert!(((b - expect) / expect).abs() < 1e-14);
        }
    }

    #[test]
    fn arms_mirror() {
        for (x, y) in [(3e-6, 2e-6), (-40e-6, 9e-6), (10e-6, -5e-6), (30e-6, 1e-7)] {
            let b = field_at(Segment::B, x, y, 1.0, &g()).unwrap();
            let c = field_at(Segment::C, -x, y, 1.0, &g()).unwrap();
            assert!((b - c).abs() <= 1e-14 * b.abs());
        }
    }

    #[test]
    fn stable_forms_match_naive() {
        let geom = g();
        let k = MU_0 / (4.0 * PI);
        for (x, y) in [(5e-6, 3e-6), (-12e-6, 40e-6), (33e-6, 8e-6)] {
            let r = f64::hypot(x, y);
            let rp = f64::hypot(x - geom.x_a, y);
            let rm = f64::hypot(x + geom.x_a, y);
            let a = k * (1.0 / x - y / (x * r));
            let b = 0.5 * k * (x / (y * r) - (x - geom.x_a) / (y * rp));
            let c = 0.5 * k * ((x + geom.x_a) / (y * rm) - x / (y * r));
            for (seg, naive) in [(Segment::A, a), (Segment::B, b), (Segment::C, c)] {
                let v = field_at(seg, x, y, 1.0, &geom).unwrap();
                assert!(((v - naive) / naive).abs() < 1e-12, "{seg:?} {v} {naive}");
            }
        }
    }

    #[test]
    fn conductor_points_are_rejected() {
        let geom = g();
        assert!(matches!(
            field_at(Segment::A, 0.0, -1e-6, 1.0, &geom),
            Err(Error::OnConductor {
                segment: Segment::A,
                ..
            })
        ));
        assert!(field_at(Segment::B, 5e-6, 0.0, 1.0, &geom).is_err());
        assert!(field_at(Segment::C, -5e-6, 0.0, 1.0, &geom).is_err());
        assert_eq!(field_at(Segment::B, 30e-6, 0.0, 1.0, &geom).unwrap(), 0.0);
        assert_eq!(field_at(Segment::A, 0.0, 1e-6, 1.0, &geom).unwrap(), 0.0);
    }

    #[test]
    fn linear_in_current() {
        let geom = g();
        let r = geom.squid_loop[0];
        assert_eq!(flux_through_rectangle(&r, 0.0, &geom).unwrap().value, 0.0);
        let f1 = flux_through_rectangle(&r, 1e-3, &geom).unwrap().value;
        let f2 = flux_through_rectangle(&r, 2e-3, &geom).unwrap().value;
        assert!((f2 - 2.0 * f1).abs() <= 1e-12 * f2.abs());
    }

    #[test]
    fn default_inductances() {
        let m = mutual_inductances(&g()).unwrap();
        assert!((m.m / 2.08e-12 - 1.0).abs() < 0.05, "{}", m.m);
        assert!(
            (m.m_parasitic / 0.22e-12 - 1.0).abs() < 0.15,
            "{}",
            m.m_parasitic
        );
        assert!((0.99e-3..=1.01e-3).contains(&m.periodicity()));
    }

    #[test]
    fn centred_gap_cancels() {
        let mut geom = g();
        geom.gap = vec![
            Rect::from_um(-36.0, -12.0, 18.0, 148.0).unwrap(),
            Rect::from_um(12.0, 36.0, 18.0, 148.0).unwrap(),
        ];
        let m = mutual_inductances(&geom).unwrap();
        assert!(m.m_parasitic < 1e-6 * m.m);
    }

    #[test]
    fn geometry_validation() {
        assert!(Rect::from_um(1.0, 1.0, 2.0, 3.0).is_err());
        assert!(Rect::from_um(1.0, 2.0, -1.0, 3.0).is_err());
        let mut geom = g();
        geom.squid_loop.clear();
        assert!(mutual_inductances(&geom).is_err());
    }
}
