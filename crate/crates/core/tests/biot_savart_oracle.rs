//! Closed-form segment fields against direct numerical line integrals of the
//! Biot–Savart law along each current path.

use std::f64::consts::PI;

use fluxsense::constants::MU_0;
use fluxsense::magnetostatics::{
    field_at, field_z, flux_through_rectangle, mutual_inductances,
    mutual_inductances_with_tolerance, BiasLineGeometry, Rect, Segment,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Recursive adaptive Simpson with a fixed per-panel tolerance.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// |B| of one part from integrating `I dl × r′ / |r′|³` along its path.
fn line_integral(segment: Segment, x: f64, y: f64, current: f64, x_a: f64) -> f64 {
    let k = MU_0 / (4.0 * PI);
    match segment {
        Segment::A => {
            // Current +ŷ on x = 0 from y′ = −∞ to 0; map y′ = −u/(1−u).
            let f = |u: f64| {
                if u >= 1.0 {
                    return 0.0;
                }
                let yp = -u / (1.0 - u);
                let jac = 1.0 / (1.0 - u).powi(2);
                x / (x * x + (y - yp).powi(2)).powf(1.5) * jac
            };
            k * current * integrate_peaked(&f, 0.0, 1.0, None)
        }
        Segment::B | Segment::C => {
            let (lo, hi) = if segment == Segment::B {
                (0.0, x_a)
            } else {
                (-x_a, 0.0)
            };
            let f = |xp: f64| y / ((x - xp).powi(2) + y * y).powf(1.5);
            k * 0.5 * current * integrate_peaked(&f, lo, hi, Some(x))
        }
    }
}

/// Splits at the peak, if inside, so the recursion sees it.
fn integrate_peaked<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, peak: Option<f64>) -> f64 {
    let scale = simpson(f, a, b, 1e-6).abs().max(1e-300);
    let tol = 1e-14 * scale;
    match peak {
        Some(p) if a < p && p < b => simpson(f, a, p, tol) + simpson(f, p, b, tol),
        _ => simpson(f, a, b, tol),
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let x = rng.random_range(-80e-6f64..80e-6);
        let y = rng.random_range(-60e-6f64..160e-6);
        // Keep at least 0.5 µm from every filament.
        let near_a = x.abs() < 0.5e-6 && y < 0.5e-6;
        let near_bc = y.abs() < 0.5e-6 && x.abs() < 24.5e-6;
        if !near_a && !near_bc && y.abs() > 0.5e-6 && x.abs() > 0.5e-6 {
            return (x, y);
        }
    }
}

#[test]
fn closed_forms_match_line_integrals() {
    let geom = BiasLineGeometry::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (x, y) = random_point(&mut rng);
        for seg in Segment::ALL {
            let closed = field_at(seg, x, y, 1e-3, &geom).unwrap();
            let oracle = line_integral(seg, x, y, 1e-3, geom.x_a);
            let err = ((closed - oracle) / oracle).abs();
            assert!(
                err < 1e-6,
                "{seg:?} at ({x:e}, {y:e}): {closed:e} vs {oracle:e}"
            );
        }
    }
}

#[test]
fn tolerance_refinement_stays_within_error_bound() {
    let geom = BiasLineGeometry::default();
    let coarse = mutual_inductances_with_tolerance(&geom, 1e-6).unwrap();
    let fine = mutual_inductances_with_tolerance(&geom, 5e-7).unwrap();
    assert!((coarse.m - fine.m).abs() <= coarse.error);
    assert!((coarse.m_parasitic - fine.m_parasitic).abs() <= coarse.error);
}

#[test]
fn loop_flux_at_one_milliamp() {
    let geom = BiasLineGeometry::default();
    let total: f64 = geom
        .squid_loop
        .iter()
        .map(|r| flux_through_rectangle(r, 1e-3, &geom).unwrap().value)
        .sum();
    assert!((total.abs() / 2.08e-15 - 1.0).abs() < 0.05, "{total:e}");
    let m = mutual_inductances(&geom).unwrap();
    assert!((total.abs() - m.m * 1e-3).abs() < 1e-9 * total.abs());
}

proptest! {
    #[test]
    fn superposition_and_linearity(x in -70e-6..70e-6f64, y in 1e-6..150e-6f64, i1 in -5e-3..5e-3f64, i2 in -5e-3..5e-3f64) {
        let geom = BiasLineGeometry::default();
        let sum: f64 = -field_at(Segment::A, x, y, i1, &geom).unwrap()
            + field_at(Segment::B, x, y, i1, &geom).unwrap()
            - field_at(Segment::C, x, y, i1, &geom).unwrap();
        let total = field_z(x, y, i1, &geom).unwrap();
        prop_assert!((sum - total).abs() <= 1e-14 * total.abs().max(1e-30));
        let both = field_z(x, y, i1 + i2, &geom).unwrap();
        let parts = field_z(x, y, i1, &geom).unwrap() + field_z(x, y, i2, &geom).unwrap();
        let scale = field_z(x, y, i1.abs() + i2.abs(), &geom).unwrap().abs();
        prop_assert!((both - parts).abs() <= 1e-12 * scale.max(1e-30));
    }

    #[test]
    fn rectangle_flux_is_linear(cur in 1e-4..1e-2f64, x1 in -50.0..40.0f64, w in 1.0..20.0f64, y1 in 1.0..100.0f64, h in 1.0..40.0f64) {
        let geom = BiasLineGeometry::default();
        let r = Rect::from_um(x1, x1 + w, y1, y1 + h).unwrap();
        let one = flux_through_rectangle(&r, cur, &geom).unwrap().value;
        let two = flux_through_rectangle(&r, 2.0 * cur, &geom).unwrap().value;
        prop_assert!((two - 2.0 * one).abs() <= 1e-12 * two.abs());
    }
}
