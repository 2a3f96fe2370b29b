//! Analysis of supergeodesic pairs: normalization frames, intersection
//! conditions, angles, classification, and the common perpendicular.
//!
//! The frame machinery puts the first geodesic's asymptotes into the odd
//! shape `e = (*,*,*|phi,0)`, `f = (*,*,*|0,psi)`, completes them with a
//! bosonic light-cone vector `d` pairing to 2 against both, and expands the
//! second geodesic in that frame. The scalars `I = 2a + alpha psi + phi beta`
//! and `J = -(2x + xi psi + phi eta)` read off the frame components of the
//! second geodesic's origin and direction; their squares satisfy
//! `I^2 = (A^2-B^2-1) + 2 alpha beta (4 + phi psi)` and the analogue for `J`
//! identically, so no square root (and no branch ambiguity) is involved.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geodesic::{same_body_ray, through, Geodesic};
use crate::grassmann::{default_tol, Supernumber};
use crate::minkowski::{act, inner, norm_sq, SuperVector};
use crate::scalar::{AnalyticTag, Scalar};
use crate::superlinalg::{embed_sl2, u_gen, OspElement};

/// Light-cone frame `(d, e, f)` with pairwise inner products 2; `e` carries
/// the odd part `(phi, 0)` and `f` carries `(0, psi)`, `d` is bosonic.
#[derive(Clone, Debug)]
pub struct Frame<S: Scalar> {
    pub d: SuperVector<S>,
    pub e: SuperVector<S>,
    pub f: SuperVector<S>,
    pub phi: Supernumber<S>,
    pub psi: Supernumber<S>,
}

impl<S: Scalar> Frame<S> {
    pub fn new(d: SuperVector<S>, e: SuperVector<S>, f: SuperVector<S>, tol: f64) -> Result<Self> {
        let gens = d.gens();
        let two = Supernumber::from_i64(gens, 2);
        let shape = d
            .odd_residual()
            .max(e.psi.residual())
            .max(f.phi.residual());
        if shape > tol {
            return Err(Error::DegenerateFrame(format!(
                "odd-shape residual {shape:e}"
            )));
        }
        let iso = norm_sq(&d)
            .residual()
            .max(norm_sq(&e).residual())
            .max(norm_sq(&f).residual());
        if iso > tol {
            return Err(Error::DegenerateFrame(format!("isotropy residual {iso:e}")));
        }
        let pair = inner(&d, &e)
            .residual_vs(&two)
            .max(inner(&e, &f).residual_vs(&two))
            .max(inner(&f, &d).residual_vs(&two));
        if pair > tol {
            return Err(Error::DegenerateFrame(format!("pairing residual {pair:e}")));
        }
        let phi = e.phi.clone();
        let psi = f.psi.clone();
        Ok(Self { d, e, f, phi, psi })
    }
}

/// Find `g` in OSp(1|2) moving a light-cone pair with `<e,f> = 2` into the
/// frame odd shape. Solves for a fermionic `u(alpha, beta)` exactly; when
/// the pair is non-generic for the direct solve, a fixed list of bosonic
/// rotations is tried first.
pub fn normalize_general<S: Scalar>(
    e: &SuperVector<S>,
    f: &SuperVector<S>,
    tol: f64,
) -> Result<OspElement<S>> {
    let gens = e.gens();
    let shape_res = e.psi.residual().max(f.phi.residual());
    if shape_res <= tol {
        return Ok(OspElement::identity(gens));
    }
    let mut attempts: Vec<(String, OspElement<S>)> =
        vec![("identity".into(), OspElement::identity(gens))];
    if S::EXACT {
        // exact rotations from Pythagorean triples
        for (c, s, h) in [(3i64, 4i64, 5i64), (5, 12, 13), (0, 1, 1)] {
            let cos = Supernumber::from_ratio(gens, c, h);
            let sin = Supernumber::from_ratio(gens, s, h);
            let r = embed_sl2(&cos, &sin, &sin.neg(), &cos)?;
            attempts.push((format!("rational rotation {c}/{h}"), r));
        }
    } else {
        for angle in [std::f64::consts::PI / 7.0, std::f64::consts::PI / 3.0, std::f64::consts::PI / 2.0] {
            let cos = Supernumber::scalar(gens, S::from_ratio(0, 1));
            let _ = cos; // angles only exist in float mode
            let c = S::parse(&angle.cos().to_string()).map_err(|_| Error::NonGeneric(
                "float rotation unavailable for this scalar".into(),
            ))?;
            let s = S::parse(&angle.sin().to_string()).map_err(|_| Error::NonGeneric(
                "float rotation unavailable for this scalar".into(),
            ))?;
            let c = Supernumber::scalar(gens, c);
            let s = Supernumber::scalar(gens, s);
            let r = embed_sl2(&c, &s, &s.neg(), &c)?;
            attempts.push((format!("rotation by {angle:.4}"), r));
        }
    }
    let generic_eps = if S::EXACT { 0.0 } else { 1e-6 };
    // evaluate every candidate rotation and keep the best-conditioned pivot
    type Candidate<S> = (f64, SuperVector<S>, SuperVector<S>, OspElement<S>);
    let mut best: Option<Candidate<S>> = None;
    for (_, r) in attempts {
        let er = act(&r, e)?;
        let fr = act(&r, f)?;
        // pivot of [e.y e.x2 / f.x1 f.y] (alpha, beta)^T = (-e.psi, -f.phi)^T
        let det = &(&er.y * &fr.y) - &(&er.x2 * &fr.x1);
        let pivot = det.body_f64().abs();
        if pivot > generic_eps && best.as_ref().map(|(p, ..)| pivot > *p).unwrap_or(true) {
            best = Some((pivot, er, fr, r));
        }
    }
    let (_, er, fr, r) = best.ok_or_else(|| {
        Error::NonGeneric("no rotation produced an invertible normalization pivot".into())
    })?;
    let det = &(&er.y * &fr.y) - &(&er.x2 * &fr.x1);
    let det_inv = det.invert()?;
    let alpha = &(&(&er.x2 * &fr.phi) - &(&fr.y * &er.psi)) * &det_inv;
    let beta = &(&(&fr.x1 * &er.psi) - &(&er.y * &fr.phi)) * &det_inv;
    let g = r.compose(&u_gen(&alpha, &beta)?);
    // postcondition check, not trusted blindly
    let eg = act(&g, e)?;
    let fg = act(&g, f)?;
    let post = eg.psi.residual().max(fg.phi.residual());
    if post > tol.max(default_tol::<S>()) {
        return Err(Error::NonGeneric(format!(
            "normalization postcondition residual {post:e}"
        )));
    }
    Ok(g)
}

/// Solve for the bosonic isotropic `d` with `<d,e> = <d,f> = 2`; of the two
/// solutions the one with the larger `y` body wins (lexicographic body
/// comparison on ties).
pub fn complete_frame<S: Scalar>(
    e: &SuperVector<S>,
    f: &SuperVector<S>,
    tol: f64,
) -> Result<Frame<S>> {
    let gens = e.gens();
    let two = Supernumber::from_i64(gens, 2);
    let half = Supernumber::from_ratio(gens, 1, 2);
    // linear system in (d1, d2) with the height w as parameter:
    // (e.x2 d1 + e.x1 d2)/2 = 2 + w e.y ; (f.x2 d1 + f.x1 d2)/2 = 2 + w f.y
    let m11 = &e.x2 * &half;
    let m12 = &e.x1 * &half;
    let m21 = &f.x2 * &half;
    let m22 = &f.x1 * &half;
    let det = &(&m11 * &m22) - &(&m12 * &m21);
    if det.body_f64().abs() <= tol.max(1e-12) {
        return Err(Error::DegenerateFrame(
            "asymptote bodies span a degenerate plane".into(),
        ));
    }
    let det_inv = det.invert()?;
    // d1 = a1 + b1 w, d2 = a2 + b2 w
    let a1 = &(&(&two * &m22) - &(&two * &m12)) * &det_inv;
    let b1 = &(&(&e.y * &m22) - &(&f.y * &m12)) * &det_inv;
    let a2 = &(&(&two * &m11) - &(&two * &m21)) * &det_inv;
    let b2 = &(&(&f.y * &m11) - &(&e.y * &m21)) * &det_inv;
    // isotropy d1 d2 = w^2: (b1 b2 - 1) w^2 + (a1 b2 + a2 b1) w + a1 a2 = 0
    let p = &(&b1 * &b2) - &Supernumber::one(gens);
    let q = &(&a1 * &b2) + &(&a2 * &b1);
    let r = &a1 * &a2;
    if p.body_f64().abs() <= 1e-12 {
        return Err(Error::DegenerateFrame(
            "height quadratic degenerates".into(),
        ));
    }
    let disc = &(&q * &q) - &(&p * &r).scale_i64(4);
    if disc.body_f64() <= 0.0 {
        return Err(Error::DegenerateFrame(format!(
            "height discriminant body {:.3e} is not positive",
            disc.body_f64()
        )));
    }
    let root = disc.sqrt()?;
    let scale = p.scale_i64(2).invert()?;
    // cancellation-free pairing: take the large-magnitude root directly and
    // recover the other from the product r/p
    let (w_far, w_near);
    if q.body_f64() >= 0.0 {
        w_far = (&q + &root).neg() * &scale;
    } else {
        w_far = &(&root - &q) * &scale;
    }
    if w_far.body_f64().abs() > 1e-9 {
        w_near = &(&r * &p.invert()?) * &w_far.invert()?;
    } else {
        w_near = match q.body_f64() >= 0.0 {
            true => &(&root - &q) * &scale,
            false => (&q + &root).neg() * &scale,
        };
    }
    let mut candidates = Vec::new();
    for w in [w_far, w_near] {
        // Newton polish: the sqrt lift can lose digits in the soul; two
        // steps push the root defect to machine precision (no-op when exact)
        let mut w = w;
        if !S::EXACT {
            for _ in 0..2 {
                let f_val = &(&(&p * &w) + &q) * &w + &r;
                let f_der = &(&p * &w).scale_i64(2) + &q;
                if f_der.body_f64().abs() < 1e-12 {
                    break;
                }
                w = &w - &(&f_val * &f_der.invert()?);
            }
        }
        let d1 = &a1 + &(&b1 * &w);
        let d2 = &a2 + &(&b2 * &w);
        let d = SuperVector::new(
            d1,
            d2,
            w,
            Supernumber::zero(gens),
            Supernumber::zero(gens),
        )?;
        if d.height().body_f64() > 0.0 {
            candidates.push(d);
        }
    }
    // larger y body wins; lexicographic body triple on a tie
    candidates.sort_by(|a, b| {
        let ka = (a.y.body_f64(), a.x1.body_f64(), a.x2.body_f64());
        let kb = (b.y.body_f64(), b.x1.body_f64(), b.x2.body_f64());
        kb.partial_cmp(&ka).unwrap_or(std::cmp::Ordering::Equal)
    });
    let d = candidates
        .into_iter()
        .next()
        .ok_or_else(|| Error::DegenerateFrame("both height solutions leave L+".into()))?;
    Frame::new(d, e.clone(), f.clone(), tol.max(default_tol::<S>()))
}

/// Coefficients of `w = a d + b e + c f + (0,0,0 | alpha, beta)`.
#[derive(Clone, Debug)]
pub struct Decomposition<S: Scalar> {
    pub a: Supernumber<S>,
    pub b: Supernumber<S>,
    pub c: Supernumber<S>,
    pub alpha: Supernumber<S>,
    pub beta: Supernumber<S>,
}

/// Expand a vector in the frame; unique, and exact in rational mode.
pub fn decompose_in_frame<S: Scalar>(
    w: &SuperVector<S>,
    frame: &Frame<S>,
    tol: f64,
) -> Result<Decomposition<S>> {
    let gens = w.gens();
    let two = Supernumber::from_i64(gens, 2);
    let half = Supernumber::from_ratio(gens, 1, 2);
    let phi = &frame.phi;
    let psi = &frame.psi;
    let wd = inner(w, &frame.d);
    let we = inner(w, &frame.e);
    let wf = inner(w, &frame.f);
    // b + c, and (c - b)(2 - phi psi) = <w,e> - <w,f> - phi w.psi + w.phi psi
    let b_plus_c = &wd * &half;
    let phipsi = phi * psi;
    let two_minus = &two - &phipsi;
    let rhs = &(&(&we - &wf) - &(phi * &w.psi)) + &(&w.phi * psi);
    let c_minus_b = &rhs * &two_minus.invert()?;
    let c = &(&b_plus_c + &c_minus_b) * &half;
    let b = &(&b_plus_c - &c_minus_b) * &half;
    // 2a + c(2 - phi psi) = <w,e> - phi w.psi
    let a = &(&(&we - &(phi * &w.psi)) - &(&c * &two_minus)) * &half;
    let alpha = &w.phi - &(&b * phi);
    let beta = &w.psi - &(&c * psi);
    let dec = Decomposition { a, b, c, alpha, beta };
    // reassemble and verify
    let rebuilt = reassemble(&dec, frame);
    let residual = rebuilt.residual_vs(w);
    if residual > tol.max(default_tol::<S>()) {
        return Err(Error::ResidualTooLarge(residual));
    }
    Ok(dec)
}

/// Rebuild `a d + b e + c f + (0,0,0 | alpha, beta)`.
pub fn reassemble<S: Scalar>(dec: &Decomposition<S>, frame: &Frame<S>) -> SuperVector<S> {
    let gens = frame.d.gens();
    let odd = SuperVector::new(
        Supernumber::zero(gens),
        Supernumber::zero(gens),
        Supernumber::zero(gens),
        dec.alpha.clone(),
        dec.beta.clone(),
    )
    .expect("odd remainder");
    frame
        .d
        .scale(&dec.a)
        .add(&frame.e.scale(&dec.b))
        .add(&frame.f.scale(&dec.c))
        .add(&odd)
}

/// Residual report for the five intersection conditions.
#[derive(Clone, Debug)]
pub struct ConditionsReport {
    /// Body of `A^2 - B^2 - 1` (must be nonnegative).
    pub x_body: f64,
    /// Body of `Y - X` (strictly positive for a transverse intersection).
    pub transversality_body: f64,
    /// Residual of `AC - BD + IJ = (eta alpha + beta xi)(4 + phi psi)`.
    pub r2: f64,
    /// Residual of `-2IJ(AC-BD) = J^2 X + I^2 Y`.
    pub r3: f64,
    /// Residual of the fermionic alignment `J alpha + I xi = 0`.
    pub r4: f64,
    /// Residual of the fermionic alignment `J beta + I eta = 0`.
    pub r5: f64,
    pub pass: bool,
    pub ambiguous: bool,
}

impl ConditionsReport {
    pub fn to_json(&self) -> Value {
        json!({
            "x_body": self.x_body,
            "transversality_body": self.transversality_body,
            "r2": self.r2,
            "r3": self.r3,
            "r4": self.r4,
            "r5": self.r5,
            "pass": self.pass,
            "ambiguous": self.ambiguous,
        })
    }
}

/// Frame data and invariants for an ordered pair of supergeodesics.
#[derive(Clone, Debug)]
pub struct PairCoefficients<S: Scalar> {
    /// Transport moving the first geodesic into frame shape.
    pub transport: OspElement<S>,
    pub frame: Frame<S>,
    /// Transported copies of the pair.
    pub first: Geodesic<S>,
    pub second: Geodesic<S>,
    /// Frame components of the second geodesic's origin and direction.
    pub a_coeff: Supernumber<S>,
    pub x_coeff: Supernumber<S>,
    pub alpha: Supernumber<S>,
    pub beta: Supernumber<S>,
    pub xi: Supernumber<S>,
    pub eta: Supernumber<S>,
    /// Invariant inner products `A = <u,u'>, B = <v,u'>, C = <u,v'>, D = <v,v'>`.
    pub big_a: Supernumber<S>,
    pub big_b: Supernumber<S>,
    pub big_c: Supernumber<S>,
    pub big_d: Supernumber<S>,
    /// `X = A^2 - B^2 - 1`, `Y = C^2 - D^2 + 1`.
    pub x_form: Supernumber<S>,
    pub y_form: Supernumber<S>,
    /// Signed frame scalars with `I^2 = X + 2 alpha beta (4 + phi psi)` and
    /// `J^2 = Y + 2 xi eta (4 + phi psi)`.
    pub i: Supernumber<S>,
    pub j: Supernumber<S>,
    /// Relative residual of the two closed-form square identities above
    /// (normalized by the largest coefficient magnitude involved).
    pub square_identity_residual: f64,
    pub conditions: ConditionsReport,
}

impl<S: Scalar> PairCoefficients<S> {
    pub fn gens(&self) -> u8 {
        self.frame.d.gens()
    }
}

/// Verdict tags for a geodesic pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    Intersecting,
    Parallel,
    Ultraparallel,
}

impl PairClass {
    pub fn name(self) -> &'static str {
        match self {
            PairClass::Intersecting => "intersecting",
            PairClass::Parallel => "parallel",
            PairClass::Ultraparallel => "ultraparallel",
        }
    }
}

/// Common perpendicular data for a parallel pair.
///
/// The tanh parameters and the cosh distance are always computed (exactly in
/// rational mode). The feet, the leg, and the arctanh parameter lifts need
/// square roots that may leave the rational field; they are populated
/// whenever representable, which in float mode is always.
#[derive(Clone, Debug)]
pub struct Perpendicular<S: Scalar> {
    pub p1: Option<Supernumber<S>>,
    pub p2: Option<Supernumber<S>>,
    pub tanh_p1: Supernumber<S>,
    pub tanh_p2: Supernumber<S>,
    pub foot1: Option<SuperVector<S>>,
    pub foot2: Option<SuperVector<S>>,
    pub leg: Option<Geodesic<S>>,
    pub cosh_dist: Supernumber<S>,
}

/// Bosonic dual-vector cross check `<h1,h2>^2` against `cosh^2 d`/`cos^2 a`.
#[derive(Clone, Debug)]
pub struct DualCheck {
    pub h_inner_sq: f64,
    pub target: f64,
    pub residual: f64,
}

/// Full pair verdict; exactly the fields implied by the tag are populated.
#[derive(Clone, Debug)]
pub struct PairVerdict<S: Scalar> {
    pub tag: PairClass,
    /// The two geodesics coincide as point sets (ultraparallel on both ends).
    pub same_geodesic: bool,
    pub point: Option<SuperVector<S>>,
    /// Geometric cosine from the frame route `BC - AD`.
    pub cos_angle: Option<Supernumber<S>>,
    /// Independent tangent-route cosine at the recovered point.
    pub cos_angle_tangent: Option<Supernumber<S>>,
    /// Residual between the two displayed intersection-point formulas.
    pub point_formula_residual: Option<f64>,
    pub perpendicular: Option<Perpendicular<S>>,
    pub conditions: Option<ConditionsReport>,
    pub dual_check: Option<DualCheck>,
}

impl<S: Scalar> PairVerdict<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.tag.name(),
            "same_geodesic": self.same_geodesic,
            "point": self.point.as_ref().map(|p| p.to_json()),
            "cos_angle": self.cos_angle.as_ref().map(|c| c.to_json()),
            "cos_angle_tangent": self.cos_angle_tangent.as_ref().map(|c| c.to_json()),
            "point_formula_residual": self.point_formula_residual,
            "perpendicular": self.perpendicular.as_ref().map(|p| json!({
                "p1": p.p1.as_ref().map(|v| v.to_json()),
                "p2": p.p2.as_ref().map(|v| v.to_json()),
                "tanh_p1": p.tanh_p1.to_json(),
                "tanh_p2": p.tanh_p2.to_json(),
                "foot1": p.foot1.as_ref().map(|v| v.to_json()),
                "foot2": p.foot2.as_ref().map(|v| v.to_json()),
                "leg": p.leg.as_ref().map(|l| l.to_json()),
                "cosh_dist": p.cosh_dist.to_json(),
            })),
            "conditions": self.conditions.as_ref().map(|c| c.to_json()),
            "dual_check": self.dual_check.as_ref().map(|d| json!({
                "h_inner_sq": d.h_inner_sq,
                "target": d.target,
                "residual": d.residual,
            })),
        })
    }
}

/// Ray relations between the asymptotes of two geodesics.
fn ray_relation<S: Scalar>(l1: &Geodesic<S>, l2: &Geodesic<S>, tol: f64) -> (bool, bool) {
    let (e1, f1) = l1.asymptotes();
    let (e2, f2) = l2.asymptotes();
    let shares = |a: &SuperVector<S>, b: &SuperVector<S>| same_body_ray(a, b, tol);
    let direct = shares(&e1, &e2) && shares(&f1, &f2);
    let reversed = shares(&e1, &f2) && shares(&f1, &e2);
    let any = shares(&e1, &e2) || shares(&e1, &f2) || shares(&f1, &e2) || shares(&f1, &f2);
    (any, direct || reversed)
}

/// Compute the frame analysis for an ordered pair.
pub fn pair_coefficients<S: Scalar>(
    l1: &Geodesic<S>,
    l2: &Geodesic<S>,
    tol: f64,
) -> Result<PairCoefficients<S>> {
    let gens = l1.gens();
    let (e0, f0) = l1.asymptotes();
    let transport = normalize_general(&e0, &f0, tol)?;
    let lt = l1.transform(&transport)?;
    let lpt = l2.transform(&transport)?;
    let (e, f) = lt.asymptotes();
    let frame = complete_frame(&e, &f, tol)?;
    let dec_u = decompose_in_frame(lpt.origin(), &frame, tol)?;
    let dec_v = decompose_in_frame(lpt.direction(), &frame, tol)?;
    let half = Supernumber::from_ratio(gens, 1, 2);
    let alpha = &dec_u.alpha * &half;
    let beta = &dec_u.beta * &half;
    let xi = &dec_v.alpha * &half;
    let eta = &dec_v.beta * &half;
    let phi = &frame.phi;
    let psi = &frame.psi;

    let big_a = inner(lt.origin(), lpt.origin());
    let big_b = inner(lt.direction(), lpt.origin());
    let big_c = inner(lt.origin(), lpt.direction());
    let big_d = inner(lt.direction(), lpt.direction());
    let one = Supernumber::one(gens);
    let x_form = &(&(&big_a * &big_a) - &(&big_b * &big_b)) - &one;
    let y_form = &(&(&big_c * &big_c) - &(&big_d * &big_d)) + &one;
    if x_form.body_f64() < -(10.0 * tol).max(1e-9) {
        return Err(Error::IllConditioned(format!(
            "A^2 - B^2 - 1 has negative body {:.3e}; inputs are not a valid pair",
            x_form.body_f64()
        )));
    }

    // signed frame scalars from the decomposition
    let i = &(&dec_u.a.scale_i64(2) + &(&alpha * psi)) + &(phi * &beta);
    let j = (&(&dec_v.a.scale_i64(2) + &(&xi * psi)) + &(phi * &eta)).neg();

    // closed-form squares hold identically; report the residual
    let corr = |ab: &Supernumber<S>| {
        let four = Supernumber::from_i64(gens, 4);
        ab.scale_i64(2) * (&four + &(phi * psi))
    };
    let i_sq_closed = &x_form + &corr(&(&alpha * &beta));
    let j_sq_closed = &y_form + &corr(&(&xi * &eta));
    // relative residual: the identity's terms grow with the frame scale
    let identity_scale = (&i * &i)
        .residual()
        .max(i_sq_closed.residual())
        .max((&j * &j).residual())
        .max(j_sq_closed.residual())
        .max(1.0);
    let square_identity_residual = (&i * &i)
        .residual_vs(&i_sq_closed)
        .max((&j * &j).residual_vs(&j_sq_closed))
        / identity_scale;

    // the five conditions
    let four_plus = &Supernumber::from_i64(gens, 4) + &(phi * psi);
    let ac_bd = &(&big_a * &big_c) - &(&big_b * &big_d);
    let ij = &i * &j;
    let r2 = (&(&ac_bd + &ij) - &(&(&(&eta * &alpha) + &(&beta * &xi)) * &four_plus)).residual();
    let lhs3 = (&ij * &ac_bd).scale_i64(-2);
    let rhs3 = &(&(&j * &j) * &x_form) + &(&(&i * &i) * &y_form);
    let r3 = lhs3.residual_vs(&rhs3);
    let r4 = (&(&j * &alpha) + &(&i * &xi)).residual();
    let r5 = (&(&j * &beta) + &(&i * &eta)).residual();

    let x_body = x_form.body_f64();
    let transversality_body = y_form.body_f64() - x_form.body_f64();
    let eq_tol = tol.max(default_tol::<S>());
    let band = 10.0 * eq_tol.max(1e-12);
    let strict_ok = x_body >= -band && transversality_body > band;
    let eqs = [r2, r3, r4, r5];
    let eq_pass = eqs.iter().all(|r| *r <= eq_tol);
    let eq_ambiguous = eqs.iter().any(|r| *r > eq_tol && *r <= band);
    let boundary_ambiguous = transversality_body.abs() <= band;
    let pass = strict_ok && eq_pass;
    let ambiguous = boundary_ambiguous || (eq_ambiguous && !pass);

    Ok(PairCoefficients {
        transport,
        frame,
        first: lt,
        second: lpt,
        a_coeff: dec_u.a,
        x_coeff: dec_v.a,
        alpha,
        beta,
        xi,
        eta,
        big_a,
        big_b,
        big_c,
        big_d,
        x_form,
        y_form,
        i,
        j,
        square_identity_residual,
        conditions: ConditionsReport {
            x_body,
            transversality_body,
            r2,
            r3,
            r4,
            r5,
            pass,
            ambiguous,
        },
    })
}

/// Geometric angle cosine from the frame invariants: `BC - AD`.
pub fn angle_cos_pair<S: Scalar>(pc: &PairCoefficients<S>) -> Result<Supernumber<S>> {
    if !pc.conditions.pass {
        return Err(Error::NotIntersecting);
    }
    Ok(&(&pc.big_b * &pc.big_c) - &(&pc.big_a * &pc.big_d))
}

/// Recover the intersection point in the transported frame and map it back;
/// also evaluates the second displayed formula and reports the mismatch.
fn intersection_point<S: Scalar>(
    pc: &PairCoefficients<S>,
) -> Result<(SuperVector<S>, f64)> {
    let (mut i, mut j) = (pc.i.clone(), pc.j.clone());
    if j.body_f64() < 0.0 {
        i = i.neg();
        j = j.neg();
    }
    let k = &(&j * &j) - &(&i * &i);
    if k.body_f64() <= 0.0 {
        return Err(Error::NotIntersecting);
    }
    let inv_root = k.sqrt()?.invert()?;
    let up = pc.second.origin();
    let vp = pc.second.direction();
    let p_frame = up.scale(&j).add(&vp.scale(&i)).scale(&inv_root);
    // second displayed formula, with the direction coefficient negated:
    // ((AJ + CI) u - (BJ + DI) v) / sqrt(J^2 - I^2)
    let cu = &(&pc.big_a * &j) + &(&pc.big_c * &i);
    let cv = &(&pc.big_b * &j) + &(&pc.big_d * &i);
    let p_alt = pc
        .first
        .origin()
        .scale(&cu)
        .sub(&pc.first.direction().scale(&cv))
        .scale(&inv_root);
    let formula_residual = p_frame.residual_vs(&p_alt);
    let back = act(&pc.transport.inverse(), &p_frame)?;
    Ok((back, formula_residual))
}

/// Test the intersection conditions and, when they pass, produce the point
/// and both angle routes.
pub fn intersect<S: Scalar>(
    l1: &Geodesic<S>,
    l2: &Geodesic<S>,
    tol: f64,
) -> Result<PairVerdict<S>> {
    let (any_ray, same) = ray_relation(l1, l2, tol);
    if any_ray {
        return Ok(PairVerdict {
            tag: PairClass::Ultraparallel,
            same_geodesic: same,
            point: None,
            cos_angle: None,
            cos_angle_tangent: None,
            point_formula_residual: None,
            perpendicular: None,
            conditions: None,
            dual_check: None,
        });
    }
    let pc = pair_coefficients(l1, l2, tol)?;
    if pc.conditions.ambiguous {
        return Err(Error::ConditionResidualAmbiguous(format!(
            "transversality body {:.3e}, equality residuals {:.3e}/{:.3e}/{:.3e}/{:.3e}",
            pc.conditions.transversality_body,
            pc.conditions.r2,
            pc.conditions.r3,
            pc.conditions.r4,
            pc.conditions.r5
        )));
    }
    if !pc.conditions.pass {
        return Ok(PairVerdict {
            tag: PairClass::Parallel,
            same_geodesic: false,
            point: None,
            cos_angle: None,
            cos_angle_tangent: None,
            point_formula_residual: None,
            perpendicular: None,
            conditions: Some(pc.conditions),
            dual_check: None,
        });
    }
    let (point, formula_residual) = intersection_point(&pc)?;
    let cos_frame = angle_cos_pair(&pc)?;
    let t1 = l1.tangent_at(&point);
    let t2 = l2.tangent_at(&point);
    let cos_tangent = inner(&t1, &t2).neg();
    Ok(PairVerdict {
        tag: PairClass::Intersecting,
        same_geodesic: false,
        point: Some(point),
        cos_angle: Some(cos_frame),
        cos_angle_tangent: Some(cos_tangent),
        point_formula_residual: Some(formula_residual),
        perpendicular: None,
        conditions: Some(pc.conditions),
        dual_check: None,
    })
}

/// Classical dual vector of a geodesic's bodies: `h = (e + f - d)/2` with
/// `d` completing the body frame. Satisfies `<h,h> = -1`, `<h,u> = <h,v> = 0`.
pub fn classical_dual<S: Scalar>(l: &Geodesic<S>, tol: f64) -> Result<SuperVector<S>> {
    let gens = l.gens();
    let (e, f) = l.asymptotes();
    let body = |v: &SuperVector<S>| {
        SuperVector::new(
            v.x1.body_sn(),
            v.x2.body_sn(),
            v.y.body_sn(),
            Supernumber::zero(gens),
            Supernumber::zero(gens),
        )
    };
    let eb = body(&e)?;
    let fb = body(&f)?;
    let frame = complete_frame(&eb, &fb, tol.max(1e-9))?;
    let half = Supernumber::from_ratio(gens, 1, 2);
    Ok(eb.add(&fb).sub(&frame.d).scale(&half))
}

/// Full classification with the bosonic dual cross-check; a verdict is
/// always produced for valid inputs, with ambiguity flagged on the report.
pub fn classify_pair<S: Scalar>(
    l1: &Geodesic<S>,
    l2: &Geodesic<S>,
    tol: f64,
) -> Result<PairVerdict<S>> {
    let (any_ray, same) = ray_relation(l1, l2, tol);
    if any_ray {
        return Ok(PairVerdict {
            tag: PairClass::Ultraparallel,
            same_geodesic: same,
            point: None,
            cos_angle: None,
            cos_angle_tangent: None,
            point_formula_residual: None,
            perpendicular: None,
            conditions: None,
            dual_check: None,
        });
    }
    let pc = pair_coefficients(l1, l2, tol)?;
    let bosonic = [l1, l2].iter().all(|l| {
        l.origin().odd_residual().max(l.direction().odd_residual()) <= tol
    });
    let mut verdict = if pc.conditions.pass {
        let (point, formula_residual) = intersection_point(&pc)?;
        let cos_frame = angle_cos_pair(&pc)?;
        let t1 = l1.tangent_at(&point);
        let t2 = l2.tangent_at(&point);
        let cos_tangent = inner(&t1, &t2).neg();
        PairVerdict {
            tag: PairClass::Intersecting,
            same_geodesic: false,
            point: Some(point),
            cos_angle: Some(cos_frame),
            cos_angle_tangent: Some(cos_tangent),
            point_formula_residual: Some(formula_residual),
            perpendicular: None,
            conditions: Some(pc.conditions),
            dual_check: None,
        }
    } else {
        let perpendicular = common_perpendicular_data(l1, l2, tol).ok();
        PairVerdict {
            tag: PairClass::Parallel,
            same_geodesic: false,
            point: None,
            cos_angle: None,
            cos_angle_tangent: None,
            point_formula_residual: None,
            perpendicular,
            conditions: Some(pc.conditions),
            dual_check: None,
        }
    };
    if bosonic {
        if let (Ok(h1), Ok(h2)) = (classical_dual(l1, tol), classical_dual(l2, tol)) {
            let pairing = inner(&h1, &h2).body_f64();
            let h_inner_sq = pairing * pairing;
            let target = match verdict.tag {
                PairClass::Intersecting => verdict
                    .cos_angle
                    .as_ref()
                    .map(|c| c.body_f64().powi(2))
                    .unwrap_or(f64::NAN),
                _ => verdict
                    .perpendicular
                    .as_ref()
                    .map(|p| p.cosh_dist.body_f64().powi(2))
                    .unwrap_or(f64::NAN),
            };
            if target.is_finite() {
                verdict.dual_check = Some(DualCheck {
                    h_inner_sq,
                    target,
                    residual: (h_inner_sq - target).abs(),
                });
            }
        }
    }
    Ok(verdict)
}

/// Solve the common-perpendicular critical-point system for a parallel pair.
fn common_perpendicular_data<S: Scalar>(
    l1: &Geodesic<S>,
    l2: &Geodesic<S>,
    tol: f64,
) -> Result<Perpendicular<S>> {
    let gens = l1.gens();
    let one = Supernumber::one(gens);
    let a = inner(l1.origin(), l2.origin());
    let b = inner(l1.direction(), l2.origin());
    let c = inner(l1.origin(), l2.direction());
    let d = inner(l1.direction(), l2.direction());
    // the four linear combinations are positive exactly when the asymptote
    // rays are pairwise distinct
    let factors = [
        &(&(&a - &b) - &c) + &d,
        &(&(&a - &b) + &c) - &d,
        &(&(&a + &b) - &c) - &d,
        &(&(&a + &b) + &c) + &d,
    ];
    for fct in &factors {
        if fct.body_f64() <= 0.0 {
            return Err(Error::UltraparallelNoPerpendicular(format!(
                "asymptote combination body {:.3e} is not positive",
                fct.body_f64()
            )));
        }
    }
    let disc = &(&(&factors[0] * &factors[1]) * &factors[2]) * &factors[3];
    if disc.body_f64() <= 0.0 {
        return Err(Error::UltraparallelNoPerpendicular(format!(
            "discriminant body {:.3e} is not positive",
            disc.body_f64()
        )));
    }
    // quadratic p T^2 + q T + p = 0 in T = tanh p1, with
    // p = ab - cd and q = a^2 + b^2 - c^2 - d^2; the in-range root is
    // T = -2p / (q + sqrt(disc)), avoiding the cancellation-prone form.
    let p = &(&a * &b) - &(&c * &d);
    let q = &(&(&(&a * &a) + &(&b * &b)) - &(&c * &c)) - &(&d * &d);
    let root = disc.sqrt()?;
    let t1 = p.scale_i64(-2) * (&q + &root).invert()?;
    // tanh p2 = -(d T + c)/(b T + a)
    let t2 = (&(&d * &t1) + &c).neg() * (&(&b * &t1) + &a).invert()?;

    // cosh distance through the joint normalizer, which stays rational even
    // when the individual cosh factors do not:
    // cosh d = (a + b T1 + c T2 + d T1 T2) / sqrt((1 - T1^2)(1 - T2^2))
    let n1 = &one - &(&t1 * &t1);
    let n2 = &one - &(&t2 * &t2);
    let numer = &(&(&a + &(&b * &t1)) + &(&c * &t2)) + &(&d * &(&t1 * &t2));
    let cosh_dist = &numer * &(&n1 * &n2).sqrt()?.invert()?;

    let foot_of = |l: &Geodesic<S>, t: &Supernumber<S>, n: &Supernumber<S>| {
        n.sqrt()
            .and_then(|r| r.invert())
            .map(|cosh| l.origin().add(&l.direction().scale(t)).scale(&cosh))
            .ok()
    };
    let foot1 = foot_of(l1, &t1, &n1);
    let foot2 = foot_of(l2, &t2, &n2);
    let leg = match (&foot1, &foot2) {
        (Some(f1), Some(f2)) => Some(through(f1, f2, tol.max(1e-9))?),
        _ => None,
    };
    let lift = |t: &Supernumber<S>| t.apply(AnalyticTag::Arctanh).ok();
    Ok(Perpendicular {
        p1: lift(&t1),
        p2: lift(&t2),
        tanh_p1: t1,
        tanh_p2: t2,
        foot1,
        foot2,
        leg,
        cosh_dist,
    })
}

/// Unique common perpendicular of a parallel, non-ultraparallel pair.
pub fn common_perpendicular<S: Scalar>(
    l1: &Geodesic<S>,
    l2: &Geodesic<S>,
    tol: f64,
) -> Result<PairVerdict<S>> {
    let (any_ray, _) = ray_relation(l1, l2, tol);
    if any_ray {
        return Err(Error::UltraparallelNoPerpendicular(
            "the pair shares an asymptotic ray".into(),
        ));
    }
    let pc = pair_coefficients(l1, l2, tol)?;
    if pc.conditions.pass {
        return Err(Error::NotParallel("the pair intersects".into()));
    }
    let perpendicular = common_perpendicular_data(l1, l2, tol)?;
    Ok(PairVerdict {
        tag: PairClass::Parallel,
        same_geodesic: false,
        point: None,
        cos_angle: None,
        cos_angle_tangent: None,
        point_formula_residual: None,
        perpendicular: Some(perpendicular),
        conditions: Some(pc.conditions),
        dual_check: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{from_endpoints, EndpointMode, Geodesic};
    use num_rational::BigRational;

    type Q = BigRational;

    fn qi(n: i64) -> Supernumber<Q> {
        Supernumber::from_i64(6, n)
    }

    fn e(i: u8) -> Supernumber<Q> {
        Supernumber::generator(6, i).unwrap()
    }

    fn standard_q() -> Geodesic<Q> {
        Geodesic::new(
            SuperVector::bosonic(6, 1, 1, 0),
            SuperVector::bosonic(6, 1, -1, 0),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn complete_frame_standard() {
        let ev = SuperVector::<Q>::bosonic(6, 2, 0, 0);
        let fv = SuperVector::<Q>::bosonic(6, 0, 2, 0);
        let frame = complete_frame(&ev, &fv, 0.0).unwrap();
        assert_eq!(frame.d, SuperVector::bosonic(6, 2, 2, 2));
    }

    #[test]
    fn complete_frame_shifted_pair() {
        let s = 3f64;
        let ev = SuperVector::<f64>::new(
            Supernumber::scalar(6, 2.0 * s),
            Supernumber::zero(6),
            Supernumber::zero(6),
            Supernumber::zero(6),
            Supernumber::zero(6),
        )
        .unwrap();
        let fv = SuperVector::<f64>::new(
            Supernumber::zero(6),
            Supernumber::scalar(6, 2.0 / s),
            Supernumber::zero(6),
            Supernumber::zero(6),
            Supernumber::zero(6),
        )
        .unwrap();
        let frame = complete_frame(&ev, &fv, 1e-12).unwrap();
        assert!(norm_sq(&frame.d).residual() < 1e-12);
        assert!(inner(&frame.d, &ev).residual_vs(&Supernumber::from_i64(6, 2)) < 1e-12);
        assert!(inner(&frame.d, &fv).residual_vs(&Supernumber::from_i64(6, 2)) < 1e-12);
    }

    #[test]
    fn complete_frame_degenerate_ray() {
        let ev = SuperVector::<Q>::bosonic(6, 2, 0, 0);
        let fv = SuperVector::<Q>::bosonic(6, 4, 0, 0);
        assert!(matches!(
            complete_frame(&ev, &fv, 0.0),
            Err(Error::DegenerateFrame(_))
        ));
    }

    #[test]
    fn decompose_round_trip_exact() {
        let fv = SuperVector::new(qi(0), qi(2), qi(0), Supernumber::zero(6), e(2)).unwrap();
        // the pairing picks up phi_e psi_f = e1 e2; absorb it into e.x1 so
        // that <e,f> = 2 exactly
        let correction = &(&e(1) * &e(2)).neg();
        let ex1 = &qi(2) + correction;
        let ev = SuperVector::new(ex1, qi(0), qi(0), e(1), Supernumber::zero(6)).unwrap();
        assert_eq!(inner(&ev, &fv), qi(2));
        // isotropy of ev: x1 x2 - y^2 + 2 phi psi = 0 since x2 = 0, psi = 0
        assert!(norm_sq(&ev).is_zero());
        let frame = complete_frame(&ev, &fv, 0.0).unwrap();
        let dec = Decomposition {
            a: &qi(1) + &(&e(3) * &e(4)),
            b: Supernumber::from_ratio(6, -2, 3),
            c: qi(2),
            alpha: &e(3) + &e(5),
            beta: e(4).scale_i64(2),
        };
        let w = reassemble(&dec, &frame);
        let back = decompose_in_frame(&w, &frame, 0.0).unwrap();
        assert_eq!(back.a, dec.a);
        assert_eq!(back.b, dec.b);
        assert_eq!(back.c, dec.c);
        assert_eq!(back.alpha, dec.alpha);
        assert_eq!(back.beta, dec.beta);
        // midpoint: w = (e+f)/2 has (a,b,c) = (0, 1/2, 1/2), odd zero
        let w = ev.add(&fv).scale(&Supernumber::from_ratio(6, 1, 2));
        let back = decompose_in_frame(&w, &frame, 0.0).unwrap();
        assert!(back.a.is_zero());
        assert_eq!(back.b, Supernumber::from_ratio(6, 1, 2));
        assert_eq!(back.c, Supernumber::from_ratio(6, 1, 2));
        assert!(back.alpha.is_zero() && back.beta.is_zero());
        // w = d
        let back = decompose_in_frame(&frame.d, &frame, 0.0).unwrap();
        assert_eq!(back.a, qi(1));
        assert!(back.b.is_zero() && back.c.is_zero());
    }

    #[test]
    fn normalize_identity_on_shaped_input() {
        let ev = SuperVector::new(qi(2), qi(0), qi(0), e(1), Supernumber::zero(6)).unwrap();
        let fv = SuperVector::new(qi(0), qi(2), qi(0), Supernumber::zero(6), e(2)).unwrap();
        let g = normalize_general(&ev, &fv, 0.0).unwrap();
        assert_eq!(g, OspElement::identity(6));
        // purely bosonic pairs are already in shape
        let eb = SuperVector::<Q>::bosonic(6, 2, 0, 0);
        let fb = SuperVector::<Q>::bosonic(6, 0, 2, 0);
        assert_eq!(normalize_general(&eb, &fb, 0.0).unwrap(), OspElement::identity(6));
    }

    #[test]
    fn normalize_random_fermionic_pair() {
        let mut rng = crate::sample::rng(17);
        for _ in 0..16 {
            let l = crate::sample::random_geodesic(5, 0.5, &mut rng).unwrap();
            let (ev, fv) = l.asymptotes();
            let g = normalize_general(&ev, &fv, 1e-10).unwrap();
            let eg = act(&g, &ev).unwrap();
            let fg = act(&g, &fv).unwrap();
            assert!(eg.psi.residual() <= 1e-10, "{:e}", eg.psi.residual());
            assert!(fg.phi.residual() <= 1e-10, "{:e}", fg.phi.residual());
            // the transport is a genuine isometry
            assert!(g.check().passes(1e-11));
            assert!(inner(&eg, &fg).residual_vs(&inner(&ev, &fv)) <= 1e-12);
        }
    }

    #[test]
    fn base_intersection_example() {
        // L standard; L' with u' = (1,1,0), v' = (0,0,1):
        // A = 1, B = C = D = 0, I = 0, |J| = 1, point = u', angle 0
        let l1 = standard_q();
        let l2 = Geodesic::new(
            SuperVector::bosonic(6, 1, 1, 0),
            SuperVector::bosonic(6, 0, 0, 1),
            0.0,
        )
        .unwrap();
        let pc = pair_coefficients(&l1, &l2, 0.0).unwrap();
        assert_eq!(pc.big_a, qi(1));
        assert!(pc.big_b.is_zero() && pc.big_c.is_zero() && pc.big_d.is_zero());
        assert!(pc.i.is_zero());
        assert_eq!(&pc.j * &pc.j, qi(1));
        assert_eq!(pc.square_identity_residual, 0.0);
        assert!(pc.conditions.pass, "{:?}", pc.conditions);
        let verdict = intersect(&l1, &l2, 0.0).unwrap();
        assert_eq!(verdict.tag, PairClass::Intersecting);
        assert_eq!(verdict.point.unwrap(), SuperVector::bosonic(6, 1, 1, 0));
        assert!(verdict.cos_angle.unwrap().is_zero());
        assert!(verdict.cos_angle_tangent.unwrap().is_zero());
        assert_eq!(verdict.point_formula_residual.unwrap(), 0.0);
    }

    #[test]
    fn exact_fermionic_intersection() {
        // normalized fermionic pair meeting at the common origin; everything
        // stays rational
        let theta = e(1);
        let omega = e(2);
        let rho = e(3);
        let to = &theta * &omega;
        let half = Supernumber::from_ratio(6, 1, 2);
        let u = SuperVector::new(
            &qi(1) - &(&to * &half),
            qi(1),
            qi(0),
            &theta * &half,
            &omega * &half,
        )
        .unwrap();
        let v = SuperVector::new(
            &qi(1) - &(&to * &half),
            qi(-1),
            qi(0),
            &theta * &half,
            (&omega * &half).neg(),
        )
        .unwrap();
        let l1 = Geodesic::new(u.clone(), v, 0.0).unwrap();
        let vp = SuperVector::new(
            (&(&rho * &omega) * &half).neg(),
            qi(0),
            qi(1),
            &rho * &half,
            Supernumber::zero(6),
        )
        .unwrap();
        let l2 = Geodesic::new(u.clone(), vp, 0.0).unwrap();
        let verdict = intersect(&l1, &l2, 0.0).unwrap();
        assert_eq!(verdict.tag, PairClass::Intersecting);
        assert_eq!(verdict.point.unwrap(), u);
        assert_eq!(verdict.point_formula_residual.unwrap(), 0.0);
        // both angle routes agree exactly
        let cf = verdict.cos_angle.unwrap();
        let ct = verdict.cos_angle_tangent.unwrap();
        assert_eq!(cf, ct);
        // the six-fold fermion product vanishes on passing configurations
        let pc = pair_coefficients(&l1, &l2, 0.0).unwrap();
        let product = &(&(&pc.alpha * &pc.beta) * &(&pc.xi * &pc.eta))
            * &(&pc.frame.phi * &pc.frame.psi);
        assert!(product.is_zero());
    }

    #[test]
    fn worked_parallel_pair() {
        // a,b,c,d = 3,2,2,2; T = -1/2; tanh p2 = -1/2; cosh distance 2
        let l1 = standard_q();
        let l2 = Geodesic::new(
            SuperVector::bosonic(6, 1, 5, 2),
            SuperVector::bosonic(6, 0, 4, 1),
            0.0,
        )
        .unwrap();
        let verdict = classify_pair(&l1, &l2, 0.0).unwrap();
        assert_eq!(verdict.tag, PairClass::Parallel);
        let perp = verdict.perpendicular.as_ref().unwrap();
        assert_eq!(perp.tanh_p1, Supernumber::from_ratio(6, -1, 2));
        assert_eq!(perp.tanh_p2, Supernumber::from_ratio(6, -1, 2));
        assert_eq!(perp.cosh_dist, qi(2));
        // dual-vector cross-check: <h1,h2>^2 = 4 = cosh^2 d
        let dual = verdict.dual_check.as_ref().unwrap();
        assert!((dual.h_inner_sq - 4.0).abs() < 1e-12);
        assert!(dual.residual < 1e-12);
        // the intersection machinery reports non-intersecting conditions
        let conds = verdict.conditions.as_ref().unwrap();
        assert!(!conds.pass);
        assert!(conds.transversality_body < 0.0);
        // bosonic reduction: the frame scalars square to X and Y exactly
        let pc = pair_coefficients(&l1, &l2, 0.0).unwrap();
        assert!(pc.alpha.is_zero() && pc.beta.is_zero());
        assert!(pc.xi.is_zero() && pc.eta.is_zero());
        assert_eq!(&pc.i * &pc.i, pc.x_form);
        assert_eq!(&pc.j * &pc.j, pc.y_form);
        // cross-check the dual vectors themselves
        let h1 = classical_dual(&l1, 0.0).unwrap();
        let h2 = classical_dual(&l2, 0.0).unwrap();
        assert_eq!(inner(&h1, &h1), qi(-1));
        assert_eq!(inner(&h2, &h2), qi(-1));
        assert_eq!(inner(&h1, &h2).body_f64().abs(), 2.0);
    }

    #[test]
    fn worked_parallel_feet() {
        let l1 = Geodesic::<f64>::new(
            SuperVector::bosonic(6, 1, 1, 0),
            SuperVector::bosonic(6, 1, -1, 0),
            1e-12,
        )
        .unwrap();
        let l2 = Geodesic::<f64>::new(
            SuperVector::bosonic(6, 1, 5, 2),
            SuperVector::bosonic(6, 0, 4, 1),
            1e-12,
        )
        .unwrap();
        let verdict = common_perpendicular(&l1, &l2, 1e-9).unwrap();
        let perp = verdict.perpendicular.unwrap();
        let foot1 = perp.foot1.as_ref().unwrap();
        let foot2 = perp.foot2.as_ref().unwrap();
        let leg = perp.leg.as_ref().unwrap();
        let s3 = 3f64.sqrt();
        assert!((foot1.x1.body() - 1.0 / s3).abs() < 1e-14);
        assert!((foot1.x2.body() - s3).abs() < 1e-14);
        assert!(foot1.y.body().abs() < 1e-14);
        assert!((foot2.x1.body() - 2.0 / s3).abs() < 1e-14);
        assert!((foot2.x2.body() - 2.0 * s3).abs() < 1e-14);
        assert!((foot2.y.body() - s3).abs() < 1e-14);
        assert!((perp.cosh_dist.body() - 2.0).abs() < 1e-14);
        // leg orthogonality at both feet
        let t_leg1 = leg.tangent_at(foot1);
        let t_l1 = l1.tangent_at(foot1);
        assert!(inner(&t_leg1, &t_l1).residual() < 1e-12);
        let t_leg2 = leg.tangent_at(foot2);
        let t_l2 = l2.tangent_at(foot2);
        assert!(inner(&t_leg2, &t_l2).residual() < 1e-12);
        // parameters lift to arctanh values in float mode
        assert!((perp.p1.unwrap().body() - (-0.5f64).atanh()).abs() < 1e-14);
        // errors on the wrong classes
        let crossing = Geodesic::<f64>::new(
            SuperVector::bosonic(6, 1, 1, 0),
            SuperVector::bosonic(6, 0, 0, 1),
            1e-12,
        )
        .unwrap();
        assert!(matches!(
            common_perpendicular(&l1, &crossing, 1e-9),
            Err(Error::NotParallel(_))
        ));
        let shifted = l1.shift_origin(&Supernumber::scalar(6, 0.8)).unwrap();
        assert!(matches!(
            common_perpendicular(&l1, &shifted, 1e-9),
            Err(Error::UltraparallelNoPerpendicular(_))
        ));
    }

    #[test]
    fn soul_misalignment_blocks_intersection() {
        // bodies cross, but the odd parts are independent: the fermionic
        // alignment conditions must fail and the pair is non-intersecting
        let mut rng = crate::sample::rng(29);
        let mut checked = 0;
        for _ in 0..12 {
            let (l1, l2, _) =
                crate::sample::random_intersecting_pair(4, 0.0, &mut rng).unwrap();
            // fermionic perturbation keeps the bodies, replaces the souls
            let l2p = match crate::sample::perturb_geodesic_fermionic(&l2, 0.4, &mut rng) {
                Ok(l) => l,
                Err(_) => continue,
            };
            let pc = pair_coefficients(&l1, &l2p, 1e-9).unwrap();
            // the body geometry still crosses
            assert!(pc.conditions.transversality_body > 0.0);
            // but the odd alignments are broken
            assert!(
                pc.conditions.r4.max(pc.conditions.r5) > 1e-3,
                "souls unexpectedly aligned: r4 {:e} r5 {:e}",
                pc.conditions.r4,
                pc.conditions.r5
            );
            assert!(!pc.conditions.pass);
            let verdict = classify_pair(&l1, &l2p, 1e-9).unwrap();
            assert_eq!(verdict.tag, PairClass::Parallel);
            // no common perpendicular exists either: the distance infimum
            // sits at the body crossing and is not attained, which surfaces
            // as coincident feet
            assert!(matches!(
                common_perpendicular(&l1, &l2p, 1e-9),
                Err(Error::CoincidentBodies) | Err(Error::UltraparallelNoPerpendicular(_))
            ));
            checked += 1;
        }
        assert!(checked >= 8, "too few perturbed pairs sampled");
    }

    #[test]
    fn ultraparallel_detection() {
        let l1 = standard_q();
        // same geodesic, shifted origin (rescale keeps it exact)
        let l2 = l1.rescale(&qi(3)).unwrap();
        let verdict = classify_pair(&l1, &l2, 0.0).unwrap();
        assert_eq!(verdict.tag, PairClass::Ultraparallel);
        assert!(verdict.same_geodesic);
        // sharing only the e-ray
        let e_shared = SuperVector::<Q>::bosonic(6, 2, 0, 0);
        let f_other = SuperVector::<Q>::bosonic(6, 1, 1, 1);
        // <e, f_other> = (2*1)/2 = 1, so normalize
        let l3 = from_endpoints(&e_shared, &f_other, EndpointMode::Normalize, 0.0).unwrap();
        let verdict = classify_pair(&l1, &l3, 0.0).unwrap();
        assert_eq!(verdict.tag, PairClass::Ultraparallel);
        assert!(!verdict.same_geodesic);
    }
}
