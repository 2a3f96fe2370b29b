//! Supergeodesics of the super hyperbolic plane.
//!
//! A geodesic is stored as its origin `u` (on IH) and unit direction `v`
//! (on H, orthogonal to `u`); the curve is `x(t) = u cosh t + v sinh t` and
//! its asymptote representatives are `e = u + v`, `f = u - v` on the
//! positive light cone with `<e,f> = 2`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grassmann::Supernumber;
use crate::minkowski::{
    classify, inner, norm_sq, require_ih, require_lplus, ConicTag, SuperVector,
};
use crate::scalar::Scalar;
use crate::superlinalg::OspElement;

/// Below this margin over the arccosh branch point the length is left
/// unevaluated (the nilpotent Taylor lift degenerates there).
pub const BRANCH_EPS: f64 = 1e-9;

/// Parametrized supergeodesic with origin.
#[derive(Clone, PartialEq, Debug)]
pub struct Geodesic<S: Scalar> {
    u: SuperVector<S>,
    v: SuperVector<S>,
}

impl<S: Scalar> Geodesic<S> {
    /// Validate `u` on IH, `v` on H, and `<u,v> = 0` within `tol`.
    pub fn new(u: SuperVector<S>, v: SuperVector<S>, tol: f64) -> Result<Self> {
        require_ih(&u, tol)?;
        let gens = u.gens();
        let vv = norm_sq(&v).residual_vs(&Supernumber::from_i64(gens, -1));
        if vv > tol {
            return Err(Error::InvariantViolation(format!(
                "direction norm residual {vv:e} (expected <v,v> = -1)"
            )));
        }
        let uv = inner(&u, &v).residual();
        if uv > tol {
            return Err(Error::InvariantViolation(format!(
                "origin/direction orthogonality residual {uv:e}"
            )));
        }
        Ok(Self { u, v })
    }

    pub fn origin(&self) -> &SuperVector<S> {
        &self.u
    }

    pub fn direction(&self) -> &SuperVector<S> {
        &self.v
    }

    pub fn gens(&self) -> u8 {
        self.u.gens()
    }

    /// Asymptote representatives `(e, f) = (u + v, u - v)`.
    pub fn asymptotes(&self) -> (SuperVector<S>, SuperVector<S>) {
        (self.u.add(&self.v), self.u.sub(&self.v))
    }

    /// Reverse the orientation (swaps the asymptotes).
    pub fn reversed(&self) -> Self {
        Self {
            u: self.u.clone(),
            v: self.v.neg(),
        }
    }

    /// `x(t) = u cosh t + v sinh t` for an even supernumber parameter.
    pub fn point_at(&self, t: &Supernumber<S>) -> Result<SuperVector<S>> {
        if !t.is_even() {
            return Err(Error::ParityViolation(
                "geodesic parameter must be even".into(),
            ));
        }
        let c = t.cosh()?;
        let s = t.sinh()?;
        Ok(self.u.scale(&c).add(&self.v.scale(&s)))
    }

    /// Projectivized span point `(x e + y f) / (2 sqrt(x y))` for positive
    /// even weights; exact in rational mode when `x y` is a perfect square.
    pub fn span_point(
        &self,
        x: &Supernumber<S>,
        y: &Supernumber<S>,
    ) -> Result<SuperVector<S>> {
        if !x.is_even() || !y.is_even() {
            return Err(Error::ParityViolation("span weights must be even".into()));
        }
        let (e, f) = self.asymptotes();
        let xy = x * y;
        if xy.body_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::DomainError {
                tag: "span_point",
                reason: "weights must have positive product body".into(),
            });
        }
        let denom = xy.sqrt()?.scale_i64(2).invert()?;
        Ok(e.scale(x).add(&f.scale(y)).scale(&denom))
    }

    /// Unit tangent at a point `p` of the geodesic, computed from the
    /// asymptote data as `(<p,f> e - <p,e> f) / 2`.
    pub fn tangent_at(&self, p: &SuperVector<S>) -> SuperVector<S> {
        let (e, f) = self.asymptotes();
        let pe = inner(p, &e);
        let pf = inner(p, &f);
        e.scale(&pf).sub(&f.scale(&pe)).scale(&Supernumber::from_ratio(
            p.gens(),
            1,
            2,
        ))
    }

    /// Whether `<p,e><p,f> = 1` within `tol`; `p` must lie on IH.
    pub fn contains(&self, p: &SuperVector<S>, tol: f64) -> Result<bool> {
        Ok(self.membership_residual(p, tol)? <= tol)
    }

    /// Residual of the membership identity `<p,e><p,f> = 1`.
    pub fn membership_residual(&self, p: &SuperVector<S>, tol: f64) -> Result<f64> {
        require_ih(p, tol)?;
        let (e, f) = self.asymptotes();
        let prod = &inner(p, &e) * &inner(p, &f);
        Ok(prod.residual_vs(&Supernumber::one(p.gens())))
    }

    /// Shift the origin: `u' = cosh t0 u + sinh t0 v`, `v' = sinh t0 u + cosh t0 v`.
    pub fn shift_origin(&self, t0: &Supernumber<S>) -> Result<Self> {
        let c = t0.cosh()?;
        let s = t0.sinh()?;
        Ok(Self {
            u: self.u.scale(&c).add(&self.v.scale(&s)),
            v: self.u.scale(&s).add(&self.v.scale(&c)),
        })
    }

    /// Reciprocal rescaling of the asymptotes, `e -> s e`, `f -> f / s`;
    /// the exact-mode counterpart of [`Self::shift_origin`] (shift by `ln s`).
    pub fn rescale(&self, s: &Supernumber<S>) -> Result<Self> {
        if !s.is_even() {
            return Err(Error::ParityViolation("rescale factor must be even".into()));
        }
        if s.body_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::ScaleMismatch(
                "rescale factor must have positive body".into(),
            ));
        }
        let (e, f) = self.asymptotes();
        let e2 = e.scale(s);
        let f2 = f.scale(&s.invert()?);
        let half = Supernumber::from_ratio(self.gens(), 1, 2);
        Ok(Self {
            u: e2.add(&f2).scale(&half),
            v: e2.sub(&f2).scale(&half),
        })
    }

    /// Transport by an isometry, componentwise on `u` and `v`.
    pub fn transform(&self, g: &OspElement<S>) -> Result<Self> {
        Ok(Self {
            u: crate::minkowski::act(g, &self.u)?,
            v: crate::minkowski::act(g, &self.v)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "u": self.u.to_json(), "v": self.v.to_json() })
    }

    /// Accepts `{"u":…,"v":…}` or `{"e":…,"f":…,"normalize":bool}`.
    pub fn from_json(gens: u8, v: &Value, tol: f64) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonError(format!("expected a geodesic object, got {v}")))?;
        if obj.contains_key("u") {
            let u = SuperVector::from_json(gens, &obj["u"])?;
            let dir = obj
                .get("v")
                .ok_or_else(|| Error::JsonError("missing `v`".into()))?;
            let dir = SuperVector::from_json(gens, dir)?;
            Self::new(u, dir, tol)
        } else if obj.contains_key("e") {
            let e = SuperVector::from_json(gens, &obj["e"])?;
            let f = obj
                .get("f")
                .ok_or_else(|| Error::JsonError("missing `f`".into()))?;
            let f = SuperVector::from_json(gens, f)?;
            let normalize = obj.get("normalize").and_then(Value::as_bool).unwrap_or(false);
            let mode = if normalize {
                EndpointMode::Normalize
            } else {
                EndpointMode::Strict
            };
            from_endpoints(&e, &f, mode, tol)
        } else {
            Err(Error::JsonError(
                "geodesic JSON needs either u/v or e/f".into(),
            ))
        }
    }
}

/// How [`from_endpoints`] treats a pairing `<e,f>` different from 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointMode {
    /// Error unless `<e,f> = 2` within tolerance.
    Strict,
    /// Rescale `f` by `2/<e,f>` (the rays, not the vectors, are the data).
    Normalize,
}

/// Build the geodesic determined by light-cone representatives of its
/// asymptotes: `u = (e+f)/2`, `v = (e-f)/2`.
pub fn from_endpoints<S: Scalar>(
    e: &SuperVector<S>,
    f: &SuperVector<S>,
    mode: EndpointMode,
    tol: f64,
) -> Result<Geodesic<S>> {
    require_lplus(e, tol)?;
    require_lplus(f, tol)?;
    let gens = e.gens();
    let pairing = inner(e, f);
    if pairing.body_sign() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::ScaleMismatch(format!(
            "<e,f> body {} is not positive (proportional rays?)",
            pairing.body_f64()
        )));
    }
    let two = Supernumber::from_i64(gens, 2);
    let f = if pairing.residual_vs(&two) <= tol {
        f.clone()
    } else {
        match mode {
            EndpointMode::Strict => {
                return Err(Error::ScaleMismatch(format!(
                    "<e,f> = {} but strict mode requires 2",
                    pairing.to_text()
                )))
            }
            EndpointMode::Normalize => f.scale(&(&two * &pairing.invert()?)),
        }
    };
    let half = Supernumber::from_ratio(gens, 1, 2);
    Geodesic::new(e.add(&f).scale(&half), e.sub(&f).scale(&half), tol)
}

/// Distance data between two points of IH: the cosh is always defined, the
/// length only away from the arccosh branch point (and only for float
/// scalars; exact mode reports the cosh alone).
#[derive(Clone, Debug)]
pub struct DistanceResult<S: Scalar> {
    pub cosh_d: Supernumber<S>,
    pub d: Option<Supernumber<S>>,
}

impl<S: Scalar> DistanceResult<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "cosh_d": self.cosh_d.to_json(),
            "d": self.d.as_ref().map(|d| d.to_json()),
        })
    }
}

/// `cosh d(p,q) = <p,q>`.
pub fn distance<S: Scalar>(
    p: &SuperVector<S>,
    q: &SuperVector<S>,
    tol: f64,
) -> Result<DistanceResult<S>> {
    require_ih(p, tol)?;
    require_ih(q, tol)?;
    let cosh_d = inner(p, q);
    let d = if cosh_d.body_f64() > 1.0 + BRANCH_EPS {
        match cosh_d.arccosh() {
            Ok(d) => Some(d),
            Err(Error::AnalyticUnsupported { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(DistanceResult { cosh_d, d })
}

/// The unique geodesic through two body-distinct points of IH, with origin
/// at `p`: `v = (q - p <p,q>) / sqrt(<p,q>^2 - 1)`.
pub fn through<S: Scalar>(
    p: &SuperVector<S>,
    q: &SuperVector<S>,
    tol: f64,
) -> Result<Geodesic<S>> {
    require_ih(p, tol)?;
    require_ih(q, tol)?;
    let pq = inner(p, q);
    if pq.body_f64() <= 1.0 + BRANCH_EPS {
        return Err(Error::CoincidentBodies);
    }
    let gens = p.gens();
    let norm_sq = &(&pq * &pq) - &Supernumber::one(gens);
    let v = q.sub(&p.scale(&pq)).scale(&norm_sq.sqrt()?.invert()?);
    Geodesic::new(p.clone(), v, tol)
}

/// Foot of the perpendicular from a point to a geodesic.
#[derive(Clone, Debug)]
pub struct FootResult<S: Scalar> {
    /// Orthogonal projection of the point on the geodesic.
    pub foot: SuperVector<S>,
    /// The perpendicular geodesic through the point, with origin there.
    pub perp: Geodesic<S>,
    /// Distance from the point to the foot.
    pub dist: DistanceResult<S>,
    /// `tanh` of the foot parameter, `-<P,v>/<P,u>`.
    pub tanh_param: Supernumber<S>,
}

/// Orthogonal projection `Q = (<P,u> u - <P,v> v) / sqrt(<P,u>^2 - <P,v>^2)`
/// together with the perpendicular through `P`.
pub fn foot<S: Scalar>(
    p: &SuperVector<S>,
    line: &Geodesic<S>,
    tol: f64,
) -> Result<FootResult<S>> {
    require_ih(p, tol)?;
    if line.contains(p, tol)? {
        return Err(Error::PointOnLine);
    }
    let pu = inner(p, &line.u);
    let pv = inner(p, &line.v);
    let denom_sq = &(&pu * &pu) - &(&pv * &pv);
    if denom_sq.body_sign() != Some(std::cmp::Ordering::Greater) {
        return Err(Error::IllConditioned(
            "projection normalizer has non-positive body".into(),
        ));
    }
    let denom_inv = denom_sq.sqrt()?.invert()?;
    let foot = line
        .u
        .scale(&pu)
        .sub(&line.v.scale(&pv))
        .scale(&denom_inv);
    let tanh_param = &pv.neg() * &pu.invert()?;
    let perp = through(p, &foot, tol)?;
    let dist = distance(p, &foot, tol)?;
    Ok(FootResult {
        foot,
        perp,
        dist,
        tanh_param,
    })
}

/// True when the vector bodies span the same ray (positive proportionality).
pub fn same_body_ray<S: Scalar>(a: &SuperVector<S>, b: &SuperVector<S>, tol: f64) -> bool {
    let av = [a.x1.body_f64(), a.x2.body_f64(), a.y.body_f64()];
    let bv = [b.x1.body_f64(), b.x2.body_f64(), b.y.body_f64()];
    let cross = [
        av[1] * bv[2] - av[2] * bv[1],
        av[2] * bv[0] - av[0] * bv[2],
        av[0] * bv[1] - av[1] * bv[0],
    ];
    let dot = av[0] * bv[0] + av[1] * bv[1] + av[2] * bv[2];
    let scale = (av.iter().map(|x| x * x).sum::<f64>()
        * bv.iter().map(|x| x * x).sum::<f64>())
    .sqrt()
    .max(f64::MIN_POSITIVE);
    cross.iter().all(|c| c.abs() <= tol.max(1e-12) * scale) && dot > 0.0
}

/// Sanity check used by tests: membership of a light-like vector in the
/// closure of the cone spanned by a geodesic's asymptotes.
pub fn classify_endpoint<S: Scalar>(e: &SuperVector<S>, tol: f64) -> ConicTag {
    classify(e, tol).tag
}
