//! Globally adaptive Gauss–Kronrod (7/15) quadrature in one and two
//! dimensions.
//!
//! Intervals are bisected in order of decreasing error estimate, with ties
//! broken by position, and partial sums are always added in interval order,
//! so results are bit-reproducible.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], ...`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Subdivision cap per integral.
pub const MAX_INTERVALS: usize = 4000;

/// An integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Requested accuracy: the estimate is accepted once
/// `error ≤ max(abs, rel·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Piece>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx)? + f(center + dx)?;
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    Ok(Piece {
        a,
        b,
        value: k * half,
        error: ((k - g) * half).abs(),
    })
}

/// Integrates a fallible integrand over `[a, b]`.
pub fn integrate_with<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut pieces = vec![kronrod(&mut f, a, b)?];
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                achieved: f64::INFINITY,
                requested: tol.target(0.0),
            });
        }
        if error <= tol.target(value) {
            return Ok(Estimate { value, error });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                achieved: error,
                requested: tol.target(value),
            });
        }
        let worst = (0..pieces.len()).fold(0, |w, i| {
            if pieces[i].error > pieces[w].error {
                i
            } else {
                w
            }
        });
        let Piece { a, b, .. } = pieces[worst];
        let mid = 0.5 * (a + b);
        if !(a < mid && mid < b) {
            return Err(Error::Quadrature {
                achieved: error,
                requested: tol.target(value),
            });
        }
        let left = kronrod(&mut f, a, mid)?;
        let right = kronrod(&mut f, mid, b)?;
        pieces[worst] = left;
        pieces.insert(worst + 1, right);
    }
}

/// Integrates a plain integrand over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    integrate_with(|x| Ok(f(x)), a, b, tol)
}

/// Iterated integral of `f(x, y)` over `[x1, x2] × [y1, y2]`, inner in `y`.
///
/// Inner integrals run at a tenth of the outer tolerance; the reported error
/// adds the outer estimate and the worst inner error times the `x` width.
pub fn integrate_2d<F>(f: F, x1: f64, x2: f64, y1: f64, y2: f64, tol: Tolerance) -> Result<Estimate>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let inner_tol = Tolerance {
        abs: 0.1 * tol.abs / (y2 - y1).abs().max(f64::MIN_POSITIVE),
        rel: 0.1 * tol.rel,
    };
    let mut worst_inner = 0.0f64;
    let outer = integrate_with(
        |x| {
            let inner = integrate_with(|y| f(x, y), y1, y2, inner_tol)?;
            worst_inner = worst_inner.max(inner.error);
            Ok(inner.value)
        },
        x1,
        x2,
        tol,
    )?;
    Ok(Estimate {
        value: outer.value,
        error: outer.error + worst_inner * (x2 - x1).abs(),
    })
}
