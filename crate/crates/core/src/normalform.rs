//! Hopf-type classification for the single modified FHN neuron.
//!
//! On the Hopf locus `c = a` (with `b > a^2`) the change of variables
//!
//! ```text
//!   x~ = y / sqrt(b - a^2) - a x / sqrt(b - a^2),    y~ = x
//! ```
//!
//! brings the neuron equations to the rotation normal form
//!
//! ```text
//!   dx~/dt = -phi y~ + f(x~, y~)
//!   dy~/dt =  phi x~ + g(x~, y~)
//! ```
//!
//! with `phi = -sqrt(b - a^2)`, `f = a y~^3 / sqrt(b - a^2)` and
//! `g = -y~^3`. The sign of
//!
//! ```text
//!   16 s* = f_xxx + f_xyy + g_xxy + g_yyy
//!         + (1/phi) [ f_xy (f_xx + f_yy) - g_xy (g_xx + g_yy)
//!                     - f_xx g_xx + f_yy g_yy ]
//! ```
//!
//! (all partials at the origin) separates supercritical (`s* < 0`) from
//! subcritical (`s* > 0`) bifurcations. For these cubic nonlinearities
//! only `g_yyy = -6` survives, so `16 s* = -6` independent of the
//! parameters: the bifurcation is always supercritical.

use crate::error::{Error, Result};
use crate::model::NeuronParams;

/// Hopf bifurcation type by the sign of `16 s*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfClass {
    Supercritical,
    Subcritical,
    Degenerate,
}

impl HopfClass {
    pub fn from_sixteen_s_star(v: f64) -> Self {
        if v < 0.0 {
            HopfClass::Supercritical
        } else if v > 0.0 {
            HopfClass::Subcritical
        } else {
            HopfClass::Degenerate
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            HopfClass::Supercritical => "supercritical",
            HopfClass::Subcritical => "subcritical",
            HopfClass::Degenerate => "degenerate",
        }
    }
}

/// Result of the first-Lyapunov-sign computation.
#[derive(Debug, Clone, Copy)]
pub struct NormalFormData {
    /// Rotation rate of the normal form, `phi = -sqrt(b - a^2)`.
    pub varphi: f64,
    /// The quantity `16 s*`.
    pub s_star_times_16: f64,
    pub classification: HopfClass,
}

/// Coefficients of a purely cubic polynomial
/// `c_xxx x^3 + c_xxy x^2 y + c_xyy x y^2 + c_yyy y^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub xxx: f64,
    pub xxy: f64,
    pub xyy: f64,
    pub yyy: f64,
}

impl CubicCoefficients {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.xxx * x * x * x + self.xxy * x * x * y + self.xyy * x * y * y + self.yyy * y * y * y
    }
}

fn require_hopf_locus(p: &NeuronParams) -> Result<()> {
    if p.c != p.a {
        return Err(Error::NotAtHopf { a: p.a, c: p.c });
    }
    if p.b <= p.a * p.a {
        return Err(Error::TransformUndefined { a: p.a, b: p.b });
    }
    Ok(())
}

/// Normal-form transform at the Hopf locus: rotation rate `phi` and the
/// cubic coefficient records of the transformed nonlinearities `f`, `g`.
///
/// Inputs off the locus are refused rather than projected onto it.
pub fn normal_form_transform(p: &NeuronParams) -> Result<(f64, CubicCoefficients, CubicCoefficients)> {
    require_hopf_locus(p)?;
    let root = (p.b - p.a * p.a).sqrt();
    let varphi = -root;
    let f = CubicCoefficients { xxx: 0.0, xxy: 0.0, xyy: 0.0, yyy: p.a / root };
    let g = CubicCoefficients { xxx: 0.0, xxy: 0.0, xyy: 0.0, yyy: -1.0 };
    Ok((varphi, f, g))
}

/// `16 s*` from analytic partials of cubic coefficient records.
///
/// For a purely cubic polynomial all second partials vanish at the
/// origin, so only the third-derivative row survives.
fn sixteen_s_star_analytic(varphi: f64, f: &CubicCoefficients, g: &CubicCoefficients) -> f64 {
    let f_xxx = 6.0 * f.xxx;
    let f_xyy = 2.0 * f.xyy;
    let g_xxy = 2.0 * g.xxy;
    let g_yyy = 6.0 * g.yyy;
    // Second partials of cubics at the origin are identically zero.
    let bracket = 0.0;
    f_xxx + f_xyy + g_xxy + g_yyy + bracket / varphi
}

/// First-Lyapunov-sign computation: returns `phi`, `16 s*` and the Hopf
/// classification. For the modified FHN cubic this is exactly `-6`.
pub fn first_lyapunov_sign(p: &NeuronParams) -> Result<NormalFormData> {
    let (varphi, f, g) = normal_form_transform(p)?;
    let s16 = sixteen_s_star_analytic(varphi, &f, &g);
    Ok(NormalFormData {
        varphi,
        s_star_times_16: s16,
        classification: HopfClass::from_sixteen_s_star(s16),
    })
}

/// `16 s*` with every partial derivative taken by central finite
/// differences of the transformed nonlinearities. Cross-check for the
/// analytic path; the analytic route is the production one because the
/// formula needs third derivatives, where finite differences are noisy.
pub fn sixteen_s_star_finite_difference(p: &NeuronParams, h: f64) -> Result<f64> {
    let (varphi, fc, gc) = normal_form_transform(p)?;
    let f = |x: f64, y: f64| fc.eval(x, y);
    let g = |x: f64, y: f64| gc.eval(x, y);

    let dxx = |f: &dyn Fn(f64, f64) -> f64| (f(h, 0.0) - 2.0 * f(0.0, 0.0) + f(-h, 0.0)) / (h * h);
    let dyy = |f: &dyn Fn(f64, f64) -> f64| (f(0.0, h) - 2.0 * f(0.0, 0.0) + f(0.0, -h)) / (h * h);
    let dxy = |f: &dyn Fn(f64, f64) -> f64| {
        (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h)
    };
    let dxxx = |f: &dyn Fn(f64, f64) -> f64| {
        (f(2.0 * h, 0.0) - 2.0 * f(h, 0.0) + 2.0 * f(-h, 0.0) - f(-2.0 * h, 0.0)) / (2.0 * h * h * h)
    };
    let dyyy = |f: &dyn Fn(f64, f64) -> f64| {
        (f(0.0, 2.0 * h) - 2.0 * f(0.0, h) + 2.0 * f(0.0, -h) - f(0.0, -2.0 * h)) / (2.0 * h * h * h)
    };
    // d/dx of d^2/dy^2 by a central x-difference of the yy stencil.
    let dxyy = |f: &dyn Fn(f64, f64) -> f64| {
        let yy = |x: f64| (f(x, h) - 2.0 * f(x, 0.0) + f(x, -h)) / (h * h);
        (yy(h) - yy(-h)) / (2.0 * h)
    };
    let dxxy = |f: &dyn Fn(f64, f64) -> f64| {
        let xx = |y: f64| (f(h, y) - 2.0 * f(0.0, y) + f(-h, y)) / (h * h);
        (xx(h) - xx(-h)) / (2.0 * h)
    };

    let s16 = dxxx(&f)
        + dxyy(&f)
        + dxxy(&g)
        + dyyy(&g)
        + (dxy(&f) * (dxx(&f) + dyy(&f)) - dxy(&g) * (dxx(&g) + dyy(&g))
            - dxx(&f) * dxx(&g)
            + dyy(&f) * dyy(&g))
            / varphi;
    Ok(s16)
}
