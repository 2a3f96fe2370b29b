//! Supertriangles and the hyperbolic Laws of Cosines and Sines.
//!
//! Angles use the geometric convention: unit tangents on IH have norm -1, so
//! the cosine of the angle between two tangents is the negated inner
//! product (this makes a zero angle report cosine one).

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geodesic::{through, BRANCH_EPS};
use crate::grassmann::Supernumber;
use crate::minkowski::{inner, require_ih, SuperVector};
use crate::sample;
use crate::scalar::Scalar;

/// Unit tangent at `x` toward `y`: `(y - x <x,y>) / sqrt(<x,y>^2 - 1)`.
pub fn unit_tangent<S: Scalar>(
    x: &SuperVector<S>,
    y: &SuperVector<S>,
    tol: f64,
) -> Result<SuperVector<S>> {
    require_ih(x, tol)?;
    require_ih(y, tol)?;
    let xy = inner(x, y);
    if xy.body_f64() <= 1.0 + BRANCH_EPS {
        return Err(Error::CoincidentBodies);
    }
    let gens = x.gens();
    let norm = &(&xy * &xy) - &Supernumber::one(gens);
    Ok(y.sub(&x.scale(&xy)).scale(&norm.sqrt()?.invert()?))
}

/// Geometric cosine of the angle at `vertex` between the geodesics toward
/// `p` and `q`.
pub fn angle_cos<S: Scalar>(
    vertex: &SuperVector<S>,
    p: &SuperVector<S>,
    q: &SuperVector<S>,
    tol: f64,
) -> Result<Supernumber<S>> {
    let tp = unit_tangent(vertex, p, tol)?;
    let tq = unit_tangent(vertex, q, tol)?;
    Ok(inner(&tp, &tq).neg())
}

/// Three non-collinear, pairwise body-distinct points of IH.
#[derive(Clone, Debug)]
pub struct Triangle<S: Scalar> {
    pub a: SuperVector<S>,
    pub b: SuperVector<S>,
    pub c: SuperVector<S>,
}

impl<S: Scalar> Triangle<S> {
    pub fn new(a: SuperVector<S>, b: SuperVector<S>, c: SuperVector<S>, tol: f64) -> Result<Self> {
        for v in [&a, &b, &c] {
            require_ih(v, tol)?;
        }
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            if inner(x, y).body_f64() <= 1.0 + BRANCH_EPS {
                return Err(Error::DegenerateTriangle(
                    "two vertices share a body".into(),
                ));
            }
        }
        let side_ab = through(&a, &b, tol)?;
        if side_ab.contains(&c, tol)? {
            return Err(Error::DegenerateTriangle(
                "vertices lie on a common supergeodesic".into(),
            ));
        }
        Ok(Self { a, b, c })
    }

    pub fn gens(&self) -> u8 {
        self.a.gens()
    }

    pub fn vertices(&self) -> [&SuperVector<S>; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "A": self.a.to_json(),
            "B": self.b.to_json(),
            "C": self.c.to_json(),
        })
    }

    pub fn from_json(gens: u8, v: &Value, tol: f64) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonError(format!("expected a triangle object, got {v}")))?;
        let get = |key: &str| -> Result<SuperVector<S>> {
            let entry = obj
                .get(key)
                .ok_or_else(|| Error::JsonError(format!("missing vertex `{key}`")))?;
            SuperVector::from_json(gens, entry)
        };
        Self::new(get("A")?, get("B")?, get("C")?, tol)
    }
}

/// Sides, angles, and the residuals of the three trigonometric identities.
///
/// `cosh_sides[i]` is the side opposite vertex `i` (cosh of its length) and
/// `cos_angles[i]` the angle at vertex `i`, ordered `A, B, C`.
#[derive(Clone, Debug)]
pub struct TriangleReport<S: Scalar> {
    pub cosh_sides: [Supernumber<S>; 3],
    pub cos_angles: [Supernumber<S>; 3],
    pub sinh_sides: [Supernumber<S>; 3],
    pub sin_angles: [Supernumber<S>; 3],
    /// Max residual of `cosh A = cosh B cosh C - sinh B sinh C cos a` over
    /// the three sides.
    pub residual_cosines: f64,
    /// Max residual of `cos a = -cos b cos c + sin b sin c cosh A`.
    pub residual_dual: f64,
    /// Max residual among pairwise differences of `sin x / sinh X`.
    pub residual_sines: f64,
}

impl<S: Scalar> TriangleReport<S> {
    pub fn max_residual(&self) -> f64 {
        self.residual_cosines
            .max(self.residual_dual)
            .max(self.residual_sines)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cosh_sides": self.cosh_sides.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "cos_angles": self.cos_angles.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "residual_cosines": self.residual_cosines,
            "residual_dual": self.residual_dual,
            "residual_sines": self.residual_sines,
            "max_residual": self.max_residual(),
        })
    }
}

/// Compute sides, angles, and verify the Laws of Cosines and Sines.
pub fn triangle_report<S: Scalar>(t: &Triangle<S>, tol: f64) -> Result<TriangleReport<S>> {
    let gens = t.gens();
    let one = Supernumber::one(gens);
    let [a, b, c] = t.vertices();

    // side opposite a vertex pairs the other two vertices
    let cosh_sides = [inner(b, c), inner(a, c), inner(a, b)];
    let cos_angles = [
        angle_cos(a, b, c, tol)?,
        angle_cos(b, a, c, tol)?,
        angle_cos(c, a, b, tol)?,
    ];

    let mut sinh_sides = Vec::with_capacity(3);
    for side in &cosh_sides {
        let s2 = &(side * side) - &one;
        if s2.body_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::DegenerateTriangle("zero-length side".into()));
        }
        sinh_sides.push(s2.sqrt()?);
    }
    let mut sin_angles = Vec::with_capacity(3);
    for cos in &cos_angles {
        let s2 = &one - &(cos * cos);
        if s2.body_sign() != Some(std::cmp::Ordering::Greater) {
            return Err(Error::DegenerateTriangle("vanishing angle".into()));
        }
        sin_angles.push(s2.sqrt()?);
    }

    // law of cosines: cosh A = cosh B cosh C - sinh B sinh C cos a (cyclic)
    let mut residual_cosines = 0.0f64;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let rhs = &(&cosh_sides[j] * &cosh_sides[k])
            - &(&(&sinh_sides[j] * &sinh_sides[k]) * &cos_angles[i]);
        residual_cosines = residual_cosines.max(cosh_sides[i].residual_vs(&rhs));
    }

    // dual law: cos a = -cos b cos c + sin b sin c cosh A (cyclic)
    let mut residual_dual = 0.0f64;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let rhs = &(&(&sin_angles[j] * &sin_angles[k]) * &cosh_sides[i])
            - &(&cos_angles[j] * &cos_angles[k]);
        residual_dual = residual_dual.max(cos_angles[i].residual_vs(&rhs));
    }

    // law of sines: the three ratios sin x / sinh X agree
    let mut ratios = Vec::with_capacity(3);
    for i in 0..3 {
        ratios.push(&sin_angles[i] * &sinh_sides[i].invert()?);
    }
    let residual_sines = ratios[0]
        .residual_vs(&ratios[1])
        .max(ratios[1].residual_vs(&ratios[2]))
        .max(ratios[0].residual_vs(&ratios[2]));

    Ok(TriangleReport {
        cosh_sides,
        cos_angles,
        sinh_sides: sinh_sides.try_into().expect("three sides"),
        sin_angles: sin_angles.try_into().expect("three angles"),
        residual_cosines,
        residual_dual,
        residual_sines,
    })
}

/// Deterministic random supertriangle on IH; `fermionic_scale` controls the
/// odd-coordinate magnitudes (0 gives a bosonic triangle). Nearly collinear
/// or nearly coincident samples are rejected and redrawn.
pub fn random_triangle(gens: u8, seed: u64, fermionic_scale: f64) -> Result<Triangle<f64>> {
    let mut rng = sample::rng(seed);
    const ATTEMPTS: u32 = 64;
    for _ in 0..ATTEMPTS {
        let a = sample::random_ih_point(gens, fermionic_scale, &mut rng);
        let b = sample::random_ih_point(gens, fermionic_scale, &mut rng);
        let c = sample::random_ih_point(gens, fermionic_scale, &mut rng);
        let separated = [(&a, &b), (&b, &c), (&a, &c)]
            .iter()
            .all(|(x, y)| inner(*x, *y).body_f64() > 1.02);
        if !separated {
            continue;
        }
        let side = match through(&a, &b, 1e-9) {
            Ok(l) => l,
            Err(_) => continue,
        };
        if side.membership_residual(&c, 1e-9)? < 0.02 {
            continue;
        }
        // also keep angles away from 0 and pi for well-conditioned sqrt lifts
        let well_opened = |v: &SuperVector<f64>, p: &SuperVector<f64>, q: &SuperVector<f64>| {
            angle_cos(v, p, q, 1e-9)
                .map(|c| c.body_f64().abs() < 0.995)
                .unwrap_or(false)
        };
        if !(well_opened(&a, &b, &c) && well_opened(&b, &a, &c) && well_opened(&c, &a, &b)) {
            continue;
        }
        return Triangle::new(a, b, c, 1e-9);
    }
    Err(Error::SamplerExhausted(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SuperVector<f64> {
        SuperVector::bosonic(6, 1, 1, 0)
    }

    fn exp_point() -> SuperVector<f64> {
        SuperVector::new(
            Supernumber::scalar(6, 1f64.exp()),
            Supernumber::scalar(6, (-1f64).exp()),
            Supernumber::zero(6),
            Supernumber::zero(6),
            Supernumber::zero(6),
        )
        .unwrap()
    }

    fn up_point() -> SuperVector<f64> {
        SuperVector::new(
            Supernumber::scalar(6, 1f64.cosh()),
            Supernumber::scalar(6, 1f64.cosh()),
            Supernumber::scalar(6, 1f64.sinh()),
            Supernumber::zero(6),
            Supernumber::zero(6),
        )
        .unwrap()
    }

    #[test]
    fn unit_tangent_example() {
        let t = unit_tangent(&base(), &exp_point(), 1e-12).unwrap();
        assert!(t.residual_vs(&SuperVector::bosonic(6, 1, -1, 0)) < 1e-14);
        assert!(inner(&t, &t).residual_vs(&Supernumber::from_i64(6, -1)) < 1e-13);
        assert!(inner(&t, &base()).residual() < 1e-15);
        assert!(matches!(
            unit_tangent(&base(), &base(), 1e-12),
            Err(Error::CoincidentBodies)
        ));
    }

    #[test]
    fn angle_examples() {
        // right angle between the x-direction and y-direction geodesics
        let cos = angle_cos(&base(), &exp_point(), &up_point(), 1e-12).unwrap();
        assert!(cos.residual() < 1e-13);
        // zero angle gives cosine one
        let cos = angle_cos(&base(), &exp_point(), &exp_point(), 1e-12).unwrap();
        assert!(cos.residual_vs(&Supernumber::one(6)) < 1e-13);
    }

    #[test]
    fn right_triangle_pythagoras() {
        let t = Triangle::new(base(), exp_point(), up_point(), 1e-9).unwrap();
        let report = triangle_report(&t, 1e-9).unwrap();
        // side opposite the right-angle vertex A has cosh = cosh^2(1)
        let expected = 1f64.cosh().powi(2);
        assert!((report.cosh_sides[0].body() - expected).abs() < 1e-13);
        assert!((report.cos_angles[0].body()).abs() < 1e-13);
        assert!(report.max_residual() < 1e-12, "{report:?}");
    }

    #[test]
    fn classical_angle_oracle_bosonic() {
        // compare against the classical hyperboloid-model angle formula
        let t = random_triangle(4, 9, 0.0).unwrap();
        let report = triangle_report(&t, 1e-9).unwrap();
        let [a, b, c] = t.vertices();
        let (ab, ac, bc) = (
            inner(a, b).body(),
            inner(a, c).body(),
            inner(b, c).body(),
        );
        let classical =
            (ab * ac - bc) / ((ab * ab - 1.0).sqrt() * (ac * ac - 1.0).sqrt());
        assert!((report.cos_angles[0].body() - classical).abs() < 1e-12);
        assert!(report.max_residual() < 1e-10);
    }

    #[test]
    fn fermionic_triangle_laws_hold_with_material_corrections() {
        let t = random_triangle(4, 42, 0.5).unwrap();
        let report = triangle_report(&t, 1e-9).unwrap();
        assert!(report.max_residual() < 1e-9, "{report:?}");
        // sides and angles carry genuine fermionic parts
        assert!(report.cosh_sides.iter().any(|s| !s.soul().is_zero()));
        assert!(report.cos_angles.iter().any(|s| !s.soul().is_zero()));
        // replacing the angle cosines by their bodies breaks the law
        let one = Supernumber::one(4);
        let mut body_residual = 0.0f64;
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let s_j = (&(&report.cosh_sides[j] * &report.cosh_sides[j]) - &one)
                .sqrt()
                .unwrap();
            let s_k = (&(&report.cosh_sides[k] * &report.cosh_sides[k]) - &one)
                .sqrt()
                .unwrap();
            let rhs = &(&report.cosh_sides[j] * &report.cosh_sides[k])
                - &(&(&s_j * &s_k) * &report.cos_angles[i].body_sn());
            body_residual = body_residual.max(report.cosh_sides[i].residual_vs(&rhs));
        }
        assert!(body_residual > 1e-3, "correction only {body_residual:e}");
    }

    #[test]
    fn sampler_regression_anchor() {
        // fixed seed 42 reproduces the same triangle every run
        let t1 = random_triangle(4, 42, 0.5).unwrap();
        let t2 = random_triangle(4, 42, 0.5).unwrap();
        assert_eq!(t1.a, t2.a);
        assert_eq!(t1.b, t2.b);
        assert_eq!(t1.c, t2.c);
        // frozen values recorded from this sampler
        assert_eq!(t1.a.x1.body(), 1.05578303483458535);
        assert_eq!(t1.a.x2.body(), 1.43877547122153349);
        assert_eq!(t1.a.y.body(), 0.720440652275974314);
        assert_eq!(t1.a.phi.coeff(&[1]).unwrap(), -7.24835971434802939e-2);
        assert_eq!(t1.c.psi.coeff(&[4]).unwrap(), 0.182122106593242350);
        let t0 = random_triangle(4, 42, 0.0).unwrap();
        assert!(t0.a.odd_residual() == 0.0);
    }

    #[test]
    fn degenerate_triangles_rejected() {
        let p = base();
        let l = through(&base(), &exp_point(), 1e-9).unwrap();
        let on_line = l.point_at(&Supernumber::scalar(6, 2.0)).unwrap();
        assert!(matches!(
            Triangle::new(p.clone(), exp_point(), on_line, 1e-9),
            Err(Error::DegenerateTriangle(_))
        ));
        assert!(matches!(
            Triangle::new(p.clone(), p.clone(), up_point(), 1e-9),
            Err(Error::DegenerateTriangle(_))
        ));
    }
}
