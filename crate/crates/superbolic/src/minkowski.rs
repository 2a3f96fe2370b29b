//! Super Minkowski space R^{2,1|2} and its conics.
//!
//! Points are `(x1, x2, y | phi, psi)` with the boson-valued pairing
//! `<p,q> = (x1 x2' + x1' x2)/2 - y y' + phi psi' + phi' psi` and quadratic
//! form `x1 x2 - y^2 + 2 phi psi`. OSp(1|2) acts isometrically through the
//! quadratic-form coordinatization `A = (x1 y phi / y x2 psi / -phi -psi 0)`
//! by `A -> g^st A g`; note this composes as a right action.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grassmann::{default_tol, Supernumber};
use crate::scalar::Scalar;
use crate::superlinalg::{OspElement, SuperMatrix};

/// Point of R^{2,1|2}: even coordinates `x1, x2, y`, odd `phi, psi`.
#[derive(Clone, PartialEq, Debug)]
pub struct SuperVector<S: Scalar> {
    pub x1: Supernumber<S>,
    pub x2: Supernumber<S>,
    pub y: Supernumber<S>,
    pub phi: Supernumber<S>,
    pub psi: Supernumber<S>,
}

impl<S: Scalar> SuperVector<S> {
    pub fn new(
        x1: Supernumber<S>,
        x2: Supernumber<S>,
        y: Supernumber<S>,
        phi: Supernumber<S>,
        psi: Supernumber<S>,
    ) -> Result<Self> {
        for even in [&x1, &x2, &y] {
            if !even.is_even() {
                return Err(Error::ParityViolation(
                    "x1, x2, y must be even supernumbers".into(),
                ));
            }
        }
        for odd in [&phi, &psi] {
            if !odd.is_odd() {
                return Err(Error::ParityViolation(
                    "phi, psi must be odd supernumbers".into(),
                ));
            }
        }
        // shared context
        let _ = x1.checked_add(&x2)?.checked_add(&y)?;
        let _ = x1.checked_add(&phi)?.checked_add(&psi)?;
        Ok(Self { x1, x2, y, phi, psi })
    }

    /// A purely bosonic vector from integer coordinates.
    pub fn bosonic(gens: u8, x1: i64, x2: i64, y: i64) -> Self {
        Self {
            x1: Supernumber::from_i64(gens, x1),
            x2: Supernumber::from_i64(gens, x2),
            y: Supernumber::from_i64(gens, y),
            phi: Supernumber::zero(gens),
            psi: Supernumber::zero(gens),
        }
    }

    pub fn zero(gens: u8) -> Self {
        Self::bosonic(gens, 0, 0, 0)
    }

    pub fn gens(&self) -> u8 {
        self.x1.gens()
    }

    pub fn components(&self) -> [&Supernumber<S>; 5] {
        [&self.x1, &self.x2, &self.y, &self.phi, &self.psi]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self {
            x1: &self.x1 + &rhs.x1,
            x2: &self.x2 + &rhs.x2,
            y: &self.y + &rhs.y,
            phi: &self.phi + &rhs.phi,
            psi: &self.psi + &rhs.psi,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            x1: &self.x1 - &rhs.x1,
            x2: &self.x2 - &rhs.x2,
            y: &self.y - &rhs.y,
            phi: &self.phi - &rhs.phi,
            psi: &self.psi - &rhs.psi,
        }
    }

    /// Multiply every coordinate by an even supernumber.
    pub fn scale(&self, factor: &Supernumber<S>) -> Self {
        Self {
            x1: &self.x1 * factor,
            x2: &self.x2 * factor,
            y: &self.y * factor,
            phi: &self.phi * factor,
            psi: &self.psi * factor,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            x1: self.x1.neg(),
            x2: self.x2.neg(),
            y: self.y.neg(),
            phi: self.phi.neg(),
            psi: self.psi.neg(),
        }
    }

    /// Max coefficient magnitude of the componentwise difference.
    pub fn residual_vs(&self, rhs: &Self) -> f64 {
        self.components()
            .iter()
            .zip(rhs.components().iter())
            .map(|(a, b)| a.residual_vs(b))
            .fold(0.0f64, f64::max)
    }

    pub fn odd_residual(&self) -> f64 {
        self.phi.residual().max(self.psi.residual())
    }

    /// Height `x1 + x2` whose body sign separates the two hyperboloid sheets.
    pub fn height(&self) -> Supernumber<S> {
        &self.x1 + &self.x2
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x1": self.x1.to_json(),
            "x2": self.x2.to_json(),
            "y": self.y.to_json(),
            "phi": self.phi.to_json(),
            "psi": self.psi.to_json(),
        })
    }

    pub fn from_json(gens: u8, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonError(format!("expected a vector object, got {v}")))?;
        let get = |key: &str| -> Result<Supernumber<S>> {
            let entry = obj
                .get(key)
                .ok_or_else(|| Error::JsonError(format!("missing coordinate `{key}`")))?;
            Supernumber::from_json(gens, entry)
        };
        Self::new(get("x1")?, get("x2")?, get("y")?, get("phi")?, get("psi")?)
    }
}

/// The symmetric bilinear pairing of R^{2,1|2}.
pub fn inner<S: Scalar>(p: &SuperVector<S>, q: &SuperVector<S>) -> Supernumber<S> {
    let cross = &(&p.x1 * &q.x2) + &(&q.x1 * &p.x2);
    &(&cross.scale_ratio(1, 2) - &(&p.y * &q.y)) + &(&(&p.phi * &q.psi) + &(&q.phi * &p.psi))
}

/// The quadratic form `<p,p>`.
pub fn norm_sq<S: Scalar>(p: &SuperVector<S>) -> Supernumber<S> {
    inner(p, p)
}

/// Conic membership tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicTag {
    /// Unit-norm positive-height sheet (the super hyperbolic plane).
    Ih,
    /// Norm -1 hyperboloid of one sheet.
    H,
    /// Positive light cone, on the special orbit `x1 psi = y phi`.
    LplusSpecial,
    /// Positive light cone, generic orbit.
    Lplus,
    /// Isotropic but not of positive height.
    Lother,
    /// None of the conics.
    None,
}

impl ConicTag {
    pub fn name(self) -> &'static str {
        match self {
            ConicTag::Ih => "IH",
            ConicTag::H => "H",
            ConicTag::LplusSpecial => "L+special",
            ConicTag::Lplus => "L+",
            ConicTag::Lother => "Lother",
            ConicTag::None => "none",
        }
    }
}

/// Classification result with the defining residual and, for light-cone
/// vectors, the residual of the special-orbit condition.
#[derive(Debug, Clone)]
pub struct ConicClass {
    pub tag: ConicTag,
    pub residual: f64,
    pub special_residual: Option<f64>,
}

impl ConicClass {
    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.tag.name(),
            "residual": self.residual,
            "special_residual": self.special_residual,
        })
    }
}

/// Classify a point against the conics of R^{2,1|2}.
pub fn classify<S: Scalar>(p: &SuperVector<S>, tol: f64) -> ConicClass {
    let n = norm_sq(p);
    let gens = p.gens();
    let r_ih = n.residual_vs(&Supernumber::one(gens));
    let r_h = n.residual_vs(&Supernumber::from_i64(gens, -1));
    let r_l = n.residual();
    let positive_height = p.height().body_sign() == Some(std::cmp::Ordering::Greater);
    if r_ih <= tol && positive_height {
        return ConicClass {
            tag: ConicTag::Ih,
            residual: r_ih,
            special_residual: None,
        };
    }
    if r_h <= tol {
        return ConicClass {
            tag: ConicTag::H,
            residual: r_h,
            special_residual: None,
        };
    }
    if r_l <= tol {
        if positive_height {
            let special = (&(&p.x1 * &p.psi) - &(&p.y * &p.phi)).residual();
            let tag = if special <= tol {
                ConicTag::LplusSpecial
            } else {
                ConicTag::Lplus
            };
            return ConicClass {
                tag,
                residual: r_l,
                special_residual: Some(special),
            };
        }
        return ConicClass {
            tag: ConicTag::Lother,
            residual: r_l,
            special_residual: None,
        };
    }
    ConicClass {
        tag: ConicTag::None,
        residual: r_ih.min(r_h).min(r_l),
        special_residual: None,
    }
}

/// Require membership in IH within `tol`.
pub fn require_ih<S: Scalar>(p: &SuperVector<S>, tol: f64) -> Result<()> {
    let c = classify(p, tol);
    if c.tag == ConicTag::Ih {
        Ok(())
    } else {
        Err(Error::NotOnIh {
            residual: c.residual,
        })
    }
}

/// Require membership in the positive light cone within `tol`.
pub fn require_lplus<S: Scalar>(p: &SuperVector<S>, tol: f64) -> Result<()> {
    match classify(p, tol).tag {
        ConicTag::Lplus | ConicTag::LplusSpecial => Ok(()),
        _ => Err(Error::NotLightlike {
            residual: norm_sq(p).residual(),
        }),
    }
}

/// Quadratic-form coordinatization `A = (x1 y phi / y x2 psi / -phi -psi 0)`.
pub fn to_form_matrix<S: Scalar>(p: &SuperVector<S>) -> SuperMatrix<S> {
    SuperMatrix {
        a: p.x1.clone(),
        b: p.y.clone(),
        alpha: p.phi.clone(),
        c: p.y.clone(),
        d: p.x2.clone(),
        beta: p.psi.clone(),
        gamma: p.phi.neg(),
        delta: p.psi.neg(),
        f: Supernumber::zero(p.gens()),
    }
}

/// Inverse of [`to_form_matrix`] with a shape check at tolerance `tol`.
pub fn from_form_matrix<S: Scalar>(m: &SuperMatrix<S>, tol: f64) -> Result<SuperVector<S>> {
    let sym = m.b.residual_vs(&m.c);
    let anti_phi = m.gamma.residual_vs(&m.alpha.neg());
    let anti_psi = m.delta.residual_vs(&m.beta.neg());
    let corner = m.f.residual();
    let worst = sym.max(anti_phi).max(anti_psi).max(corner);
    if worst > tol {
        return Err(Error::ShapeError(format!(
            "form-matrix residuals: b-c {sym:e}, gamma+alpha {anti_phi:e}, delta+beta {anti_psi:e}, f {corner:e}"
        )));
    }
    SuperVector::new(
        m.a.clone(),
        m.d.clone(),
        (&m.b + &m.c).scale_ratio(1, 2),
        (&m.alpha - &m.gamma).scale_ratio(1, 2),
        (&m.beta - &m.delta).scale_ratio(1, 2),
    )
}

/// Adjoint action `A -> g^st A g` pulled back to coordinates.
///
/// Composition order: `act(g.compose(h), p) = act(h, act(g, p))`.
pub fn act<S: Scalar>(g: &OspElement<S>, p: &SuperVector<S>) -> Result<SuperVector<S>> {
    let a = to_form_matrix(p);
    let m = g.matrix();
    let moved = m.supertranspose().smul(&a).smul(m);
    // The grading preserves the form shape exactly; the tolerance only
    // absorbs float roundoff.
    from_form_matrix(&moved, default_tol::<S>().max(1e-9 * vector_scale(p)))
}

fn vector_scale<S: Scalar>(p: &SuperVector<S>) -> f64 {
    p.components()
        .iter()
        .map(|c| c.residual())
        .fold(0.0f64, f64::max)
        .max(1.0)
}

/// Discriminant `b^2 - 4ac + 8 phi psi` of the quadratic superform
/// `a x^2 + b x y + c y^2` decorated with fermions.
pub fn super_discriminant<S: Scalar>(
    a: &Supernumber<S>,
    b: &Supernumber<S>,
    c: &Supernumber<S>,
    phi: &Supernumber<S>,
    psi: &Supernumber<S>,
) -> Result<Supernumber<S>> {
    for even in [a, b, c] {
        if !even.is_even() {
            return Err(Error::ParityViolation(
                "form coefficients must be even".into(),
            ));
        }
    }
    for odd in [phi, psi] {
        if !odd.is_odd() {
            return Err(Error::ParityViolation("form fermions must be odd".into()));
        }
    }
    Ok(&(&(b * b) - &(a * c).scale_i64(4)) + &(phi * psi).scale_i64(8))
}

/// The discriminant of the form attached to a point, under the dictionary
/// `a = x1, b = 2y, c = x2, (phi, psi) -> (phi, -psi)`.
///
/// The fermion sign makes `D = -4 <p,p>` hold identically, so invariance
/// under the isometric action is exact; it also reduces to the classical
/// `b^2 - 4ac` on bodies.
pub fn vector_discriminant<S: Scalar>(p: &SuperVector<S>) -> Supernumber<S> {
    super_discriminant(&p.x1, &p.y.scale_i64(2), &p.x2, &p.phi, &p.psi.neg())
        .expect("vector parities are validated")
}

/// Image of a point of IH in the super upper half-plane:
/// `z = (i - y - i phi psi)/x2`, `theta = (psi/x2)(1 + i y) - i phi`.
pub fn to_upper_half_plane(
    p: &SuperVector<f64>,
    tol: f64,
) -> Result<(Supernumber<Complex64>, Supernumber<Complex64>)> {
    require_ih(p, tol)?;
    let gens = p.gens();
    if p.x2.body() == 0.0 {
        return Err(Error::NonInvertible);
    }
    let i = Supernumber::scalar(gens, Complex64::new(0.0, 1.0));
    let x2 = p.x2.complexify();
    let y = p.y.complexify();
    let phi = p.phi.complexify();
    let psi = p.psi.complexify();
    let x2_inv = x2.invert()?;
    let z = &(&(&i - &y) - &(&i * &(&phi * &psi))) * &x2_inv;
    let theta = &(&(&psi * &x2_inv) * &(&Supernumber::one(gens) + &(&i * &y))) - &(&i * &phi);
    Ok((z, theta))
}
