use serde::{Deserialize, Serialize};

use crate::bundle::vectors::{horizontal_lift_with, BundlePoint, LiftedVector};
use crate::calculus::real::Real;
use crate::error::{Error, Result};
use crate::geometry::linalg::{add, scale};
use crate::paperlib::prims::BasePrims;

/// Which lift a vector argument carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    H,
    V,
}

/// `∇_{A}B` with `A`, `B` lifts of the given kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConnCase {
    HH,
    HV,
    VH,
    VV,
}

impl ConnCase {
    pub const ALL: [ConnCase; 4] = [ConnCase::HH, ConnCase::HV, ConnCase::VH, ConnCase::VV];

    pub fn kinds(self) -> (Kind, Kind) {
        match self {
            ConnCase::HH => (Kind::H, Kind::H),
            ConnCase::HV => (Kind::H, Kind::V),
            ConnCase::VH => (Kind::V, Kind::H),
            ConnCase::VV => (Kind::V, Kind::V),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConnCase::HH => "HH",
            ConnCase::HV => "HV",
            ConnCase::VH => "VH",
            ConnCase::VV => "VV",
        }
    }
}

/// `R(A,B)C` with `A`, `B`, `C` lifts of the given kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurvCase {
    VVV,
    VVH,
    HVV,
    HVH,
    HHV,
    HHH,
    VHH,
}

impl CurvCase {
    /// The six cases with a closed form for the Sasaki metric.
    pub const SASAKI: [CurvCase; 6] = [
        CurvCase::VVV,
        CurvCase::VVH,
        CurvCase::HVV,
        CurvCase::HVH,
        CurvCase::HHV,
        CurvCase::HHH,
    ];

    /// The four flat-base cases of the Mus-Gradient metric, taken at `(X,Y,Y)`.
    pub const MUSGRAD_FLAT: [CurvCase; 4] = [CurvCase::HHH, CurvCase::HVV, CurvCase::VHH, CurvCase::VVV];

    pub fn kinds(self) -> (Kind, Kind, Kind) {
        use Kind::{H, V};
        match self {
            CurvCase::VVV => (V, V, V),
            CurvCase::VVH => (V, V, H),
            CurvCase::HVV => (H, V, V),
            CurvCase::HVH => (H, V, H),
            CurvCase::HHV => (H, H, V),
            CurvCase::HHH => (H, H, H),
            CurvCase::VHH => (V, H, H),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CurvCase::VVV => "VVV",
            CurvCase::VVH => "VVH",
            CurvCase::HVV => "HVV",
            CurvCase::HVH => "HVH",
            CurvCase::HHV => "HHV",
            CurvCase::HHH => "HHH",
            CurvCase::VHH => "VHH",
        }
    }
}

/// A tangent vector to `TM` split as `h^H + v^V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Split<R> {
    pub h: Vec<R>,
    pub v: Vec<R>,
}

impl<R: Real> Split<R> {
    pub fn zero(m: usize) -> Self {
        Split {
            h: vec![R::zero(); m],
            v: vec![R::zero(); m],
        }
    }

    pub fn horizontal(h: Vec<R>) -> Self {
        let m = h.len();
        Split { h, v: vec![R::zero(); m] }
    }

    pub fn vertical(v: Vec<R>) -> Self {
        let m = v.len();
        Split { h: vec![R::zero(); m], v }
    }

    /// Induced components at `p`.
    pub fn lift(&self, b: &BasePrims<R>, p: &BundlePoint<R>) -> LiftedVector<R> {
        let mut lv = horizontal_lift_with(&self.h, &b.gamma, p);
        let m = p.dim();
        for k in 0..m {
            lv.components[m + k] = lv.components[m + k] + self.v[k];
        }
        lv
    }
}

/// Accumulates `Σ cᵢvᵢ`.
struct Acc<R>(Vec<R>);

impl<R: Real> Acc<R> {
    fn new(m: usize) -> Self {
        Acc(vec![R::zero(); m])
    }

    fn add(mut self, c: f64, v: &[R]) -> Self {
        self.0 = add(&self.0, &scale(R::lit(c), v));
        self
    }

    fn add_r(mut self, c: R, v: &[R]) -> Self {
        self.0 = add(&self.0, &scale(c, v));
        self
    }

    fn done(self) -> Vec<R> {
        self.0
    }
}

fn check_dims<R: Real>(b: &BasePrims<R>, p: &BundlePoint<R>, vs: &[&[R]]) -> Result<()> {
    let m = b.dim();
    for v in vs.iter().copied().chain([p.u.as_slice(), p.x.as_slice()]) {
        if v.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: v.len(),
            });
        }
    }
    Ok(())
}

/// Levi-Civita connection of the Sasaki metric between lifts of fields with
/// constant components.
pub fn sasaki_connection_closed<R: Real>(
    case: ConnCase,
    b: &BasePrims<R>,
    p: &BundlePoint<R>,
    x: &[R],
    y: &[R],
) -> Result<Split<R>> {
    check_dims(b, p, &[x, y])?;
    let m = b.dim();
    let u = &p.u;
    Ok(match case {
        ConnCase::HH => Split {
            h: b.nabla(x, y),
            v: scale(R::lit(-0.5), &b.r(x, y, u)),
        },
        ConnCase::HV => Split {
            h: scale(R::lit(0.5), &b.r(u, y, x)),
            v: b.nabla(x, y),
        },
        ConnCase::VH => Split::horizontal(scale(R::lit(0.5), &b.r(u, x, y))),
        ConnCase::VV => Split::zero(m),
    })
}

/// Curvature of the Sasaki metric, `R̂(A,B)C`.
pub fn sasaki_curvature_closed<R: Real>(
    case: CurvCase,
    b: &BasePrims<R>,
    p: &BundlePoint<R>,
    x: &[R],
    y: &[R],
    z: &[R],
) -> Result<Split<R>> {
    check_dims(b, p, &[x, y, z])?;
    let m = b.dim();
    let u = &p.u;
    Ok(match case {
        CurvCase::VVV => Split::zero(m),
        CurvCase::VVH => Split::horizontal(
            Acc::new(m)
                .add(1.0, &b.r(x, y, z))
                .add(0.25, &b.r(u, x, &b.r(u, y, z)))
                .add(-0.25, &b.r(u, y, &b.r(u, x, z)))
                .done(),
        ),
        CurvCase::HVV => Split::horizontal(
            Acc::new(m)
                .add(-0.5, &b.r(y, z, x))
                .add(-0.25, &b.r(u, y, &b.r(u, z, x)))
                .done(),
        ),
        CurvCase::HVH => Split {
            h: scale(R::lit(0.5), &b.nabla_r(x, u, y, z)),
            v: Acc::new(m)
                .add(0.25, &b.r(&b.r(u, y, z), x, u))
                .add(0.5, &b.r(x, z, y))
                .done(),
        },
        CurvCase::HHV => Split {
            h: Acc::new(m)
                .add(0.5, &b.nabla_r(x, u, z, y))
                .add(-0.5, &b.nabla_r(y, u, z, x))
                .done(),
            v: Acc::new(m)
                .add(1.0, &b.r(x, y, z))
                .add(0.25, &b.r(&b.r(u, z, y), x, u))
                .add(-0.25, &b.r(&b.r(u, z, x), y, u))
                .done(),
        },
        CurvCase::HHH => Split {
            h: Acc::new(m)
                .add(1.0, &b.r(x, y, z))
                .add(0.25, &b.r(u, &b.r(z, y, u), x))
                .add(0.25, &b.r(u, &b.r(x, z, u), y))
                .add(0.5, &b.r(u, &b.r(x, y, u), z))
                .done(),
            v: scale(R::lit(0.5), &b.nabla_r(z, x, y, u)),
        },
        CurvCase::VHH => {
            return Err(Error::Hypothesis(
                "no closed Sasaki curvature form for the V-H-H case".into(),
            ))
        }
    })
}

/// The two readings of the flat-base Mus-Sasaki formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MusSasakiVariant {
    /// Coefficients exactly as printed: `½X(f)`, `½Y(f)` and `‖Y‖` in the
    /// curvature term.
    Printed,
    /// Coefficients `X(f)/2f`, `Y(f)/2f` and `‖Y‖²`.
    Rescaled,
}

impl MusSasakiVariant {
    pub fn name(self) -> &'static str {
        match self {
            MusSasakiVariant::Printed => "printed",
            MusSasakiVariant::Rescaled => "rescaled",
        }
    }
}

fn f_value<R: Real>(b: &BasePrims<R>) -> Result<R> {
    b.field().value.ok_or(Error::GradientOnly)
}

/// Levi-Civita connection of the Mus-Sasaki metric over a flat base.
pub fn mus_sasaki_connection_flat_closed<R: Real>(
    case: ConnCase,
    variant: MusSasakiVariant,
    b: &BasePrims<R>,
    p: &BundlePoint<R>,
    x: &[R],
    y: &[R],
) -> Result<Split<R>> {
    check_dims(b, p, &[x, y])?;
    let fv = f_value(b)?;
    let c = match variant {
        MusSasakiVariant::Printed => R::lit(0.5),
        MusSasakiVariant::Rescaled => R::lit(0.5) / fv,
    };
    let fp = b.field();
    Ok(match case {
        ConnCase::HH => Split::horizontal(b.nabla(x, y)),
        ConnCase::HV => Split::vertical(add(&b.nabla(x, y), &scale(c * b.xf(x), y))),
        ConnCase::VH => Split::vertical(scale(c * b.xf(y), x)),
        ConnCase::VV => Split::horizontal(scale(R::lit(-0.5) * b.inner(x, y), &fp.grad)),
    })
}

/// Curvature of the Mus-Sasaki metric over a flat base: `R̃(X^H,Y^H)Y^H`
/// for [`CurvCase::HHH`] and `R̃(X^H,Y^V)Y^V` for [`CurvCase::HVV`].
pub fn mus_sasaki_curvature_flat_closed<R: Real>(
    case: CurvCase,
    variant: MusSasakiVariant,
    b: &BasePrims<R>,
    p: &BundlePoint<R>,
    x: &[R],
    y: &[R],
) -> Result<Split<R>> {
    check_dims(b, p, &[x, y])?;
    let m = b.dim();
    let fv = f_value(b)?;
    let fp = b.field();
    match case {
        CurvCase::HHH => Ok(Split::zero(m)),
        CurvCase::HVV => {
            let ny2 = b.norm_sq(y);
            let ny = match variant {
                MusSasakiVariant::Printed => ny2.sqrt(),
                MusSasakiVariant::Rescaled => ny2,
            };
            Ok(Split::horizontal(
                Acc::new(m)
                    .add_r(R::lit(-0.5) * ny2, &b.hess_f(x))
                    .add_r(ny * b.xf(x) / (R::lit(4.0) * fv), &fp.grad)
                    .done(),
            ))
        }
        _ => Err(Error::Hypothesis(format!(
            "no flat Mus-Sasaki curvature form for the {} case",
            case.name()
        ))),
    }
}

/// Levi-Civita connection of the Mus-Gradient metric `g^f` on any base.
pub fn musgrad_connection_closed<R: Real>(
    case: ConnCase,
    b: &BasePrims<R>,
    p: &BundlePoint<R>,
    x: &[R],
    y: &[R],
) -> Result<Split<R>> {
    check_dims(b, p, &[x, y])?;
    let m = b.dim();
    let u = &p.u;
    let fp = b.field();
    let g = &fp.grad;
    let al = fp.alpha;
    let half = R::lit(0.5);
    Ok(match case {
        ConnCase::HH => Split {
            h: b.nabla(x, y),
            v: scale(-half, &b.r(x, y, u)),
        },
        ConnCase::HV => {
            let hx = b.hess_f(x);
            let yf = b.xf(y);
            let coef = (b.inner(y, &hx) - half * b.xalpha(x) * yf) / (R::lit(2.0) * al);
            Split {
                h: Acc::new(m)
                    .add(0.5, &b.r(u, y, x))
                    .add_r(half * yf, &b.r(u, g, x))
                    .done(),
                v: Acc::new(m)
                    .add_r(half * yf, &hx)
                    .add(1.0, &b.nabla(x, y))
                    .add_r(coef, g)
                    .done(),
            }
        }
        ConnCase::VH => {
            let hy = b.hess_f(y);
            let xf = b.xf(x);
            let coef = (b.inner(x, &hy) - half * b.xalpha(y) * xf) / (R::lit(2.0) * al);
            Split {
                h: Acc::new(m)
                    .add(0.5, &b.r(u, x, y))
                    .add_r(half * xf, &b.r(u, g, y))
                    .done(),
                v: Acc::new(m).add_r(half * xf, &hy).add_r(coef, g).done(),
            }
        }
        ConnCase::VV => Split::horizontal(
            Acc::new(m)
                .add_r(-half * b.xf(x), &b.hess_f(y))
                .add_r(-half * b.xf(y), &b.hess_f(x))
                .done(),
        ),
    })
}

/// Readings of the `R(X^V,Y^H)Y^H` flat-base formula for `g^f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MusGradVariant {
    Printed,
    /// The `X(f)Y(α)²/8α²` term with a positive sign.
    SignCorrected,
}

impl MusGradVariant {
    pub fn name(self) -> &'static str {
        match self {
            MusGradVariant::Printed => "printed",
            MusGradVariant::SignCorrected => "sign_corrected",
        }
    }
}

/// Curvature of `g^f` over a flat base, each case taken at `(X,Y,Y)` with
/// parallel `X`, `Y`: `R(X^H,Y^H)Y^H`, `R(X^H,Y^V)Y^V`, `R(X^V,Y^H)Y^H`,
/// `R(X^V,Y^V)Y^V`.
pub fn musgrad_curvature_flat_closed<R: Real>(
    case: CurvCase,
    b: &BasePrims<R>,
    p: &BundlePoint<R>,
    x: &[R],
    y: &[R],
) -> Result<Split<R>> {
    musgrad_curvature_flat_variant(case, MusGradVariant::Printed, b, p, x, y)
}

pub fn musgrad_curvature_flat_variant<R: Real>(
    case: CurvCase,
    variant: MusGradVariant,
    b: &BasePrims<R>,
    p: &BundlePoint<R>,
    x: &[R],
    y: &[R],
) -> Result<Split<R>> {
    check_dims(b, p, &[x, y])?;
    let m = b.dim();
    let fp = b.field();
    let g = &fp.grad;
    let al = fp.alpha;
    let one = R::one();
    let lit = R::lit;
    let xf = b.xf(x);
    let yf = b.xf(y);
    let xa = b.xalpha(x);
    let ya = b.xalpha(y);
    let hx = b.hess_f(x);
    let hy = b.hess_f(y);
    match case {
        CurvCase::HHH => Ok(Split::zero(m)),
        CurvCase::HVV => {
            let inner_arg = Acc::new(m).add(1.0, &hx).add_r(lit(-0.5) * xa, g).done();
            Ok(Split::horizontal(
                Acc::new(m)
                    .add_r(-yf, &b.hess2_f(x, y))
                    .add_r(lit(0.25) * yf * yf, &b.hess_f(&hx))
                    .add_r(yf / (lit(8.0) * al) * b.inner(y, &inner_arg), &fp.grad_alpha)
                    .add_r(
                        xa * yf / (lit(8.0) * al) - (one + lit(3.0) * al) / (lit(4.0) * al) * b.inner(y, &hx),
                        &hy,
                    )
                    .done(),
            ))
        }
        CurvCase::VHH => {
            let sign = match variant {
                MusGradVariant::Printed => -one,
                MusGradVariant::SignCorrected => one,
            };
            let h2 = b.hess2_f(y, y);
            let scalar = xf * b.norm_sq(&hy) / (lit(4.0) * al) + b.inner(&h2, x) / (lit(2.0) * al)
                - xf / (lit(4.0) * al) * b.inner(y, &b.hess_alpha(y))
                + sign * xf * ya * ya / (lit(8.0) * al * al)
                - (lit(3.0) * al + lit(2.0)) / (lit(8.0) * al * al) * ya * b.inner(x, &hy);
            let neg = Acc::new(m)
                .add_r(lit(0.5) * xf, &h2)
                .add_r(
                    (lit(3.0) * al + one) / (lit(4.0) * al) * b.inner(x, &hy) - xf * ya / (lit(8.0) * al),
                    &hy,
                )
                .add_r(scalar, g)
                .done();
            Ok(Split::vertical(scale(-one, &neg)))
        }
        CurvCase::VVV => {
            let w1 = Acc::new(m).add_r(xf, y).add_r(-yf, x).done();
            let w2 = scale(-one, &w1);
            let arg = Acc::new(m).add_r(yf, &fp.grad_alpha).add(2.0, &hy).done();
            Ok(Split::vertical(
                Acc::new(m)
                    .add_r(b.inner(&b.hess_f(&w1), &arg) / (lit(8.0) * al), g)
                    .add_r(lit(0.25) * yf, &b.hess_f(&b.hess_f(&w2)))
                    .done(),
            ))
        }
        _ => Err(Error::Hypothesis(format!(
            "no flat Mus-Gradient curvature form for the {} case",
            case.name()
        ))),
    }
}
