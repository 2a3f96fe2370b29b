//! (2|1)x(2|1) supermatrices and the orthosymplectic group OSp(1|2).
//!
//! The entrywise product implemented here carries the sign convention in
//! which plain matrix multiplication is recovered by negating the odd
//! entries of the third row; all downstream formulas (supertranspose,
//! inverse, constraint system) assume it.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grassmann::{default_tol, Supernumber};
use crate::scalar::Scalar;

/// Graded (2|1)x(2|1) matrix laid out as rows `(a b alpha / c d beta / gamma delta f)`.
///
/// The corner blocks `a,b,c,d,f` are even, the remaining entries odd.
#[derive(Clone, PartialEq, Debug)]
pub struct SuperMatrix<S: Scalar> {
    pub a: Supernumber<S>,
    pub b: Supernumber<S>,
    pub alpha: Supernumber<S>,
    pub c: Supernumber<S>,
    pub d: Supernumber<S>,
    pub beta: Supernumber<S>,
    pub gamma: Supernumber<S>,
    pub delta: Supernumber<S>,
    pub f: Supernumber<S>,
}

impl<S: Scalar> SuperMatrix<S> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: Supernumber<S>,
        b: Supernumber<S>,
        alpha: Supernumber<S>,
        c: Supernumber<S>,
        d: Supernumber<S>,
        beta: Supernumber<S>,
        gamma: Supernumber<S>,
        delta: Supernumber<S>,
        f: Supernumber<S>,
    ) -> Result<Self> {
        let m = Self {
            a,
            b,
            alpha,
            c,
            d,
            beta,
            gamma,
            delta,
            f,
        };
        m.check_grading()?;
        Ok(m)
    }

    pub fn gens(&self) -> u8 {
        self.a.gens()
    }

    pub fn identity(gens: u8) -> Self {
        let one = || Supernumber::one(gens);
        let zero = || Supernumber::zero(gens);
        Self {
            a: one(),
            b: zero(),
            alpha: zero(),
            c: zero(),
            d: one(),
            beta: zero(),
            gamma: zero(),
            delta: zero(),
            f: one(),
        }
    }

    /// The fixed form matrix `J = (0 1 0 / -1 0 0 / 0 0 -1)`.
    pub fn j_matrix(gens: u8) -> Self {
        let mut m = Self::identity(gens);
        m.a = Supernumber::zero(gens);
        m.b = Supernumber::one(gens);
        m.c = Supernumber::from_i64(gens, -1);
        m.d = Supernumber::zero(gens);
        m.f = Supernumber::from_i64(gens, -1);
        m
    }

    pub fn entries(&self) -> [&Supernumber<S>; 9] {
        [
            &self.a,
            &self.b,
            &self.alpha,
            &self.c,
            &self.d,
            &self.beta,
            &self.gamma,
            &self.delta,
            &self.f,
        ]
    }

    pub fn check_grading(&self) -> Result<()> {
        let r = self.grading_residual();
        if r > 0.0 {
            return Err(Error::GradingViolation(format!(
                "even/odd pattern violated with residual {r:e}"
            )));
        }
        Ok(())
    }

    /// Largest coefficient magnitude sitting in a wrong-parity slot.
    pub fn grading_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for even in [&self.a, &self.b, &self.c, &self.d, &self.f] {
            r = r.max(even.parity_residual(true));
        }
        for odd in [&self.alpha, &self.beta, &self.gamma, &self.delta] {
            r = r.max(odd.parity_residual(false));
        }
        r
    }

    /// Entrywise product with the displayed sign convention.
    pub fn smul(&self, rhs: &Self) -> Self {
        let (g, h) = (self, rhs);
        Self {
            a: &(&(&g.a * &h.a) + &(&g.b * &h.c)) - &(&g.alpha * &h.gamma),
            b: &(&(&g.a * &h.b) + &(&g.b * &h.d)) - &(&g.alpha * &h.delta),
            alpha: &(&(&g.a * &h.alpha) + &(&g.b * &h.beta)) + &(&g.alpha * &h.f),
            c: &(&(&g.c * &h.a) + &(&g.d * &h.c)) - &(&g.beta * &h.gamma),
            d: &(&(&g.c * &h.b) + &(&g.d * &h.d)) - &(&g.beta * &h.delta),
            beta: &(&(&g.c * &h.alpha) + &(&g.d * &h.beta)) + &(&g.beta * &h.f),
            gamma: &(&(&g.gamma * &h.a) + &(&g.delta * &h.c)) + &(&g.f * &h.gamma),
            delta: &(&(&g.gamma * &h.b) + &(&g.delta * &h.d)) + &(&g.f * &h.delta),
            f: &(&(&g.f * &h.f) - &(&g.gamma * &h.alpha)) - &(&g.delta * &h.beta),
        }
    }

    /// Supertranspose `(a c gamma / b d delta / -alpha -beta f)`.
    pub fn supertranspose(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: self.c.clone(),
            alpha: self.gamma.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
            beta: self.delta.clone(),
            gamma: self.alpha.neg(),
            delta: self.beta.neg(),
            f: self.f.clone(),
        }
    }

    /// Berezinian `f^-1 det[(a b / c d) + f^-1 (alpha gamma, alpha delta / beta gamma, beta delta)]`.
    pub fn berezinian(&self) -> Result<Supernumber<S>> {
        let f_inv = self.f.invert()?;
        let m11 = &self.a + &(&f_inv * &(&self.alpha * &self.gamma));
        let m12 = &self.b + &(&f_inv * &(&self.alpha * &self.delta));
        let m21 = &self.c + &(&f_inv * &(&self.beta * &self.gamma));
        let m22 = &self.d + &(&f_inv * &(&self.beta * &self.delta));
        let det = &(&m11 * &m22) - &(&m12 * &m21);
        Ok(&f_inv * &det)
    }

    /// `J^-1 g^st J` written out entrywise: `(d -b delta / -c a -gamma / -beta alpha f)`.
    pub fn osp_inverse_matrix(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: self.b.neg(),
            alpha: self.delta.clone(),
            c: self.c.neg(),
            d: self.a.clone(),
            beta: self.gamma.neg(),
            gamma: self.beta.neg(),
            delta: self.alpha.clone(),
            f: self.f.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "alpha": self.alpha.to_json(),
            "c": self.c.to_json(),
            "d": self.d.to_json(),
            "beta": self.beta.to_json(),
            "gamma": self.gamma.to_json(),
            "delta": self.delta.to_json(),
            "f": self.f.to_json(),
        })
    }

    pub fn from_json(gens: u8, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonError(format!("expected a supermatrix object, got {v}")))?;
        let get = |key: &str| -> Result<Supernumber<S>> {
            let entry = obj
                .get(key)
                .ok_or_else(|| Error::JsonError(format!("missing entry `{key}`")))?;
            Supernumber::from_json(gens, entry)
        };
        Self::new(
            get("a")?,
            get("b")?,
            get("alpha")?,
            get("c")?,
            get("d")?,
            get("beta")?,
            get("gamma")?,
            get("delta")?,
            get("f")?,
        )
    }
}

/// Diagnostic residuals for the OSp(1|2) membership invariants.
#[derive(Debug, Clone)]
pub struct OspCheckReport {
    /// Max defect of `g^st J g = J` over the nine entries.
    pub j_relation: f64,
    /// Defect of `sdet g = 1`.
    pub sdet: f64,
    /// Max defect over the six entry constraints.
    pub constraints: f64,
    /// Wrong-parity mass over the nine entries.
    pub grading: f64,
}

impl OspCheckReport {
    pub fn max_residual(&self) -> f64 {
        self.j_relation
            .max(self.sdet)
            .max(self.constraints)
            .max(self.grading)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }

    pub fn to_json(&self) -> Value {
        json!({
            "j_relation": self.j_relation,
            "sdet": self.sdet,
            "constraints": self.constraints,
            "grading": self.grading,
            "max_residual": self.max_residual(),
        })
    }
}

/// Residuals of every OSp(1|2) membership invariant of `m`.
pub fn osp_check<S: Scalar>(m: &SuperMatrix<S>) -> OspCheckReport {
    let gens = m.gens();
    let j = SuperMatrix::j_matrix(gens);
    let lhs = m.supertranspose().smul(&j).smul(m);
    let j_relation = lhs
        .entries()
        .iter()
        .zip(j.entries().iter())
        .map(|(x, y)| x.residual_vs(y))
        .fold(0.0f64, f64::max);

    let sdet = match m.berezinian() {
        Ok(b) => b.residual_vs(&Supernumber::one(gens)),
        Err(_) => f64::INFINITY,
    };

    // alpha = b gamma - a delta, beta = d gamma - c delta, f = 1 + alpha beta,
    // gamma = a beta - c alpha, delta = b beta - d alpha, f^-1 = ad - bc
    let mut constraints = [
        m.alpha
            .residual_vs(&(&(&m.b * &m.gamma) - &(&m.a * &m.delta))),
        m.beta
            .residual_vs(&(&(&m.d * &m.gamma) - &(&m.c * &m.delta))),
        m.f.residual_vs(&(&Supernumber::one(gens) + &(&m.alpha * &m.beta))),
        m.gamma
            .residual_vs(&(&(&m.a * &m.beta) - &(&m.c * &m.alpha))),
        m.delta
            .residual_vs(&(&(&m.b * &m.beta) - &(&m.d * &m.alpha))),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    match m.f.invert() {
        Ok(f_inv) => {
            constraints = constraints.max(f_inv.residual_vs(&(&(&m.a * &m.d) - &(&m.b * &m.c))));
        }
        Err(_) => constraints = f64::INFINITY,
    }

    OspCheckReport {
        j_relation,
        sdet,
        constraints,
        grading: m.grading_residual(),
    }
}

/// A supermatrix validated (or closed by construction) against the OSp(1|2)
/// membership invariants.
#[derive(Clone, PartialEq, Debug)]
pub struct OspElement<S: Scalar> {
    m: SuperMatrix<S>,
}

impl<S: Scalar> OspElement<S> {
    /// Validate `m` against the OSp invariants at the given tolerance.
    pub fn new(m: SuperMatrix<S>, tol: f64) -> Result<Self> {
        let report = osp_check(&m);
        if !report.passes(tol) {
            return Err(Error::InvariantViolation(format!(
                "osp_check residual {:e} exceeds tolerance {:e}",
                report.max_residual(),
                tol
            )));
        }
        Ok(Self { m })
    }

    pub fn identity(gens: u8) -> Self {
        Self {
            m: SuperMatrix::identity(gens),
        }
    }

    pub fn gens(&self) -> u8 {
        self.m.gens()
    }

    pub fn matrix(&self) -> &SuperMatrix<S> {
        &self.m
    }

    pub fn into_matrix(self) -> SuperMatrix<S> {
        self.m
    }

    /// Group product; OSp(1|2) is closed under `smul`.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            m: self.m.smul(&rhs.m),
        }
    }

    /// Group inverse via `J^-1 g^st J`.
    pub fn inverse(&self) -> Self {
        Self {
            m: self.m.osp_inverse_matrix(),
        }
    }

    pub fn check(&self) -> OspCheckReport {
        osp_check(&self.m)
    }
}

/// The fermionic generator `u(alpha, beta)`.
pub fn u_gen<S: Scalar>(alpha: &Supernumber<S>, beta: &Supernumber<S>) -> Result<OspElement<S>> {
    if !alpha.is_odd() || !beta.is_odd() {
        return Err(Error::ParityViolation(
            "u(alpha, beta) requires odd arguments".into(),
        ));
    }
    alpha.checked_add(beta)?; // shared context
    let gens = alpha.gens();
    let one = Supernumber::one(gens);
    let ab = alpha * beta;
    let diag = &one - &ab.scale_ratio(1, 2);
    let m = SuperMatrix {
        a: diag.clone(),
        b: Supernumber::zero(gens),
        alpha: alpha.clone(),
        c: Supernumber::zero(gens),
        d: diag,
        beta: beta.clone(),
        gamma: beta.clone(),
        delta: alpha.neg(),
        f: &one + &ab,
    };
    Ok(OspElement { m })
}

/// The canonical inclusion of SL(2) as the bosonic block.
pub fn embed_sl2<S: Scalar>(
    a: &Supernumber<S>,
    b: &Supernumber<S>,
    c: &Supernumber<S>,
    d: &Supernumber<S>,
) -> Result<OspElement<S>> {
    for x in [a, b, c, d] {
        if !x.is_even() {
            return Err(Error::ParityViolation(
                "embed_sl2 requires even entries".into(),
            ));
        }
    }
    let gens = a.gens();
    let det = &(a * d) - &(b * c);
    let residual = det.residual_vs(&Supernumber::one(gens));
    if residual > default_tol::<S>() {
        return Err(Error::DeterminantNotOne { residual });
    }
    let zero = || Supernumber::zero(gens);
    let m = SuperMatrix {
        a: a.clone(),
        b: b.clone(),
        alpha: zero(),
        c: c.clone(),
        d: d.clone(),
        beta: zero(),
        gamma: zero(),
        delta: zero(),
        f: Supernumber::one(gens),
    };
    Ok(OspElement { m })
}

/// Unique factorization `g = s * u(alpha, beta) = u(alpha', beta') * s`
/// with `s` the bosonic SL(2) embedding.
#[derive(Clone, Debug)]
pub struct OspFactorization<S: Scalar> {
    /// Bosonic factor `s`.
    pub sl2: OspElement<S>,
    /// Fermionic factor for the left-ordered form `g = sl2 * fermion`.
    pub fermion: OspElement<S>,
    /// Fermionic factor for the right-ordered form `g = fermion_right * sl2`,
    /// namely `u(a alpha + b beta, c alpha + d beta)`.
    pub fermion_right: OspElement<S>,
}

/// Factor an OSp element per the unique `sl2 * u` decomposition: the third
/// row of `g` reads off `(beta, -alpha, f)`, after which the bosonic part is
/// peeled by one group multiplication and verified.
pub fn osp_factor<S: Scalar>(g: &OspElement<S>, tol: f64) -> Result<OspFactorization<S>> {
    let m = g.matrix();
    let alpha = m.delta.neg();
    let beta = m.gamma.clone();
    let fermion = u_gen(&alpha, &beta)?;
    let s = g.compose(&fermion.inverse());
    let sm = s.matrix();
    let odd_residual = sm
        .alpha
        .residual()
        .max(sm.beta.residual())
        .max(sm.gamma.residual())
        .max(sm.delta.residual());
    let f_residual = sm.f.residual_vs(&Supernumber::one(m.gens()));
    if odd_residual > tol || f_residual > tol {
        return Err(Error::InvariantViolation(format!(
            "factor remainder is not bosonic (odd {odd_residual:e}, f {f_residual:e})"
        )));
    }
    let (a, b, c, d) = (&sm.a, &sm.b, &sm.c, &sm.d);
    let alpha_right = &(a * &alpha) + &(b * &beta);
    let beta_right = &(c * &alpha) + &(d * &beta);
    let fermion_right = u_gen(&alpha_right, &beta_right)?;

    let recomposed = s.compose(&fermion);
    let residual = matrix_residual(recomposed.matrix(), m);
    if residual > tol {
        return Err(Error::InvariantViolation(format!(
            "left factorization residual {residual:e}"
        )));
    }
    let recomposed_right = fermion_right.compose(&s);
    let residual_right = matrix_residual(recomposed_right.matrix(), m);
    if residual_right > tol {
        return Err(Error::InvariantViolation(format!(
            "right factorization residual {residual_right:e}"
        )));
    }
    Ok(OspFactorization {
        sl2: s,
        fermion,
        fermion_right,
    })
}

/// Max entrywise residual between two supermatrices.
pub fn matrix_residual<S: Scalar>(a: &SuperMatrix<S>, b: &SuperMatrix<S>) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries().iter())
        .map(|(x, y)| x.residual_vs(y))
        .fold(0.0f64, f64::max)
}
