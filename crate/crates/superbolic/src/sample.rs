//! Deterministic samplers for tests and the self-test suites.
//!
//! Everything here is seeded ChaCha8, so a fixed seed reproduces the same
//! values on every platform.

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geodesic::Geodesic;
use crate::grassmann::Supernumber;
use crate::minkowski::{inner, norm_sq, SuperVector};
use crate::scalar::Scalar;
use crate::superlinalg::{embed_sl2, u_gen, OspElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random odd supernumber supported on the single generators, coefficients
/// uniform in `[-scale, scale]`.
pub fn random_odd(gens: u8, scale: f64, rng: &mut ChaCha8Rng) -> Supernumber<f64> {
    let mut acc = Supernumber::zero(gens);
    for i in 1..=gens {
        let c: f64 = rng.gen_range(-1.0..1.0) * scale;
        acc = &acc + &Supernumber::monomial(gens, &[i], c).unwrap();
    }
    acc
}

/// Random even supernumber: body in `[-bound, bound]` plus grade-two soul.
pub fn random_even(gens: u8, bound: f64, soul_scale: f64, rng: &mut ChaCha8Rng) -> Supernumber<f64> {
    let mut acc = Supernumber::scalar(gens, rng.gen_range(-1.0..1.0) * bound);
    for i in 1..gens {
        for j in (i + 1)..=gens {
            let c: f64 = rng.gen_range(-1.0..1.0) * soul_scale;
            acc = &acc + &Supernumber::monomial(gens, &[i, j], c).unwrap();
        }
    }
    acc
}

/// Random rational supernumber with up to `max_terms` monomials over all
/// grades; coefficients are small fractions.
pub fn random_supernumber_rational(
    gens: u8,
    max_terms: usize,
    rng: &mut ChaCha8Rng,
) -> Supernumber<BigRational> {
    let mut acc = Supernumber::zero(gens);
    let n_terms = rng.gen_range(0..=max_terms);
    for _ in 0..n_terms {
        let mask: u32 = rng.gen_range(0..(1u32 << gens));
        let idx: Vec<u8> = (0..gens).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        let num: i64 = rng.gen_range(-6..=6);
        let den: i64 = rng.gen_range(1..=4);
        let term = Supernumber::monomial(gens, &idx, BigRational::from_ratio(num, den)).unwrap();
        acc = &acc + &term;
    }
    acc
}

/// Random rational odd supernumber on single generators.
pub fn random_odd_rational(
    gens: u8,
    rng: &mut ChaCha8Rng,
) -> Supernumber<BigRational> {
    let mut acc = Supernumber::zero(gens);
    for i in 1..=gens {
        let num: i64 = rng.gen_range(-3..=3);
        let den: i64 = rng.gen_range(1..=3);
        acc = &acc
            + &Supernumber::monomial(gens, &[i], BigRational::from_ratio(num, den)).unwrap();
    }
    acc
}

/// Random point of IH: bodies from bounded boosts, odd parts scaled by
/// `fermionic_scale`, and `x1` resolved as `(1 + y^2 - 2 phi psi)/x2` so the
/// unit-norm constraint holds exactly.
pub fn random_ih_point(gens: u8, fermionic_scale: f64, rng: &mut ChaCha8Rng) -> SuperVector<f64> {
    let x2 = Supernumber::scalar(gens, rng.gen_range(-1.0..1.0f64).exp());
    let y = Supernumber::scalar(gens, rng.gen_range(-0.8..0.8));
    let phi = random_odd(gens, fermionic_scale, rng);
    let psi = random_odd(gens, fermionic_scale, rng);
    let one = Supernumber::one(gens);
    let num = &(&one + &(&y * &y)) - &(&phi * &psi).scale_i64(2);
    let x1 = &num * &x2.invert().expect("positive body");
    SuperVector::new(x1, x2, y, phi, psi).expect("parities by construction")
}

/// Random direction on H orthogonal to `p`, via projection and exact
/// renormalization of a random even-soul seed vector.
pub fn random_h_direction(
    p: &SuperVector<f64>,
    fermionic_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<SuperVector<f64>> {
    let gens = p.gens();
    for _ in 0..32 {
        let w = SuperVector::new(
            Supernumber::scalar(gens, rng.gen_range(-1.0..1.0)),
            Supernumber::scalar(gens, rng.gen_range(-1.0..1.0)),
            Supernumber::scalar(gens, rng.gen_range(-1.0..1.0)),
            random_odd(gens, fermionic_scale, rng),
            random_odd(gens, fermionic_scale, rng),
        )?;
        // project out the p component
        let w = w.sub(&p.scale(&inner(p, &w)));
        let n = norm_sq(&w).neg();
        if n.body_f64() < 0.05 {
            continue;
        }
        let v = w.scale(&n.sqrt()?.invert()?);
        return Ok(v);
    }
    Err(Error::SamplerExhausted(32))
}

/// Random supergeodesic with a fermionic scale.
pub fn random_geodesic(
    gens: u8,
    fermionic_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Geodesic<f64>> {
    let u = random_ih_point(gens, fermionic_scale, rng);
    let v = random_h_direction(&u, fermionic_scale, rng)?;
    Geodesic::new(u, v, 1e-10)
}

/// Random OSp(1|2) element: a chain of bosonic boosts/rotations (with even
/// nilpotent perturbations renormalized to determinant one) interleaved with
/// fermionic `u(alpha, beta)` factors.
pub fn random_osp(gens: u8, fermionic_scale: f64, rng: &mut ChaCha8Rng) -> OspElement<f64> {
    let mut g = OspElement::identity(gens);
    let links = rng.gen_range(2..=4);
    for _ in 0..links {
        if rng.gen_bool(0.5) {
            // bosonic factor with even soul, renormalized to det 1
            let (a, b, c, d) = loop {
                let which: u8 = rng.gen_range(0..3);
                let t: f64 = rng.gen_range(-0.9..0.9);
                let (mut a, mut b, c, d) = match which {
                    0 => (t.cosh(), t.sinh(), t.sinh(), t.cosh()),
                    1 => (t.cos(), t.sin(), -t.sin(), t.cos()),
                    _ => (t.exp(), 0.0, 0.0, (-t).exp()),
                };
                // small body shear for variety
                let s: f64 = rng.gen_range(-0.5..0.5);
                a += s * c;
                b += s * d;
                let soul_scale = 0.2 * fermionic_scale;
                let mk = |body: f64, rng: &mut ChaCha8Rng| {
                    &Supernumber::scalar(gens, body) + &random_even(gens, 0.0, soul_scale, rng).soul()
                };
                let (sa, sb, sc, sd) = (mk(a, rng), mk(b, rng), mk(c, rng), mk(d, rng));
                let det = &(&sa * &sd) - &(&sb * &sc);
                if det.body_f64() <= 0.1 {
                    continue;
                }
                let corr = det.sqrt().unwrap().invert().unwrap();
                break (&sa * &corr, &sb * &corr, &sc * &corr, &sd * &corr);
            };
            g = g.compose(&embed_sl2(&a, &b, &c, &d).expect("det renormalized"));
        } else {
            let alpha = random_odd(gens, fermionic_scale, rng);
            let beta = random_odd(gens, fermionic_scale, rng);
            g = g.compose(&u_gen(&alpha, &beta).expect("odd by construction"));
        }
    }
    g
}

/// Random exact-rational OSp(1|2) element: shear chains (determinant one by
/// construction) interleaved with rational fermionic factors.
pub fn random_osp_rational(gens: u8, rng: &mut ChaCha8Rng) -> OspElement<BigRational> {
    let one = Supernumber::<BigRational>::one(gens);
    let zero = Supernumber::<BigRational>::zero(gens);
    let mut g = OspElement::identity(gens);
    let links = rng.gen_range(2..=4);
    for _ in 0..links {
        match rng.gen_range(0..3) {
            0 => {
                let t = Supernumber::from_ratio(gens, rng.gen_range(-4..=4), rng.gen_range(1..=3));
                g = g.compose(&embed_sl2(&one, &t, &zero, &one).unwrap());
            }
            1 => {
                let t = Supernumber::from_ratio(gens, rng.gen_range(-4..=4), rng.gen_range(1..=3));
                g = g.compose(&embed_sl2(&one, &zero, &t, &one).unwrap());
            }
            _ => {
                let alpha = random_odd_rational(gens, rng);
                let beta = random_odd_rational(gens, rng);
                g = g.compose(&u_gen(&alpha, &beta).unwrap());
            }
        }
    }
    g
}

/// Random rational point of IH (exact unit norm).
pub fn random_ih_point_rational(gens: u8, rng: &mut ChaCha8Rng) -> SuperVector<BigRational> {
    let x2 = Supernumber::from_ratio(gens, rng.gen_range(1..=5), rng.gen_range(1..=3));
    let y = Supernumber::from_ratio(gens, rng.gen_range(-4..=4), rng.gen_range(1..=3));
    let phi = random_odd_rational(gens, rng);
    let psi = random_odd_rational(gens, rng);
    let one = Supernumber::one(gens);
    let num = &(&one + &(&y * &y)) - &(&phi * &psi).scale_i64(2);
    let x1 = &num * &x2.invert().expect("positive body");
    SuperVector::new(x1, x2, y, phi, psi).expect("parities by construction")
}

/// Fermionic perturbation of a geodesic: inject odd parts scaled by `scale`
/// into `u` and `v`, then re-project to IH/H exactly as the samplers do.
pub fn perturb_geodesic_fermionic(
    line: &Geodesic<f64>,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Geodesic<f64>> {
    let gens = line.gens();
    let u0 = line.origin();
    // rebuild u with fresh odd parts, solving x1 from the constraint
    let phi = random_odd(gens, scale, rng);
    let psi = random_odd(gens, scale, rng);
    let one = Supernumber::one(gens);
    let num = &(&one + &(&u0.y * &u0.y)) - &(&phi * &psi).scale_i64(2);
    let u = SuperVector::new(
        &num * &u0.x2.invert()?,
        u0.x2.clone(),
        u0.y.clone(),
        phi,
        psi,
    )?;
    // perturb v by odd parts, then Gram-Schmidt against u and renormalize
    let v0 = line.direction();
    let w = SuperVector::new(
        v0.x1.body_sn(),
        v0.x2.body_sn(),
        v0.y.body_sn(),
        &v0.phi + &random_odd(gens, scale, rng),
        &v0.psi + &random_odd(gens, scale, rng),
    )?;
    let w = w.sub(&u.scale(&inner(&u, &w)));
    let n = norm_sq(&w).neg();
    if n.body_f64() <= 0.05 {
        return Err(Error::SamplerExhausted(1));
    }
    let v = w.scale(&n.sqrt()?.invert()?);
    Geodesic::new(u, v, 1e-9)
}

/// A pair of geodesics through a common point, with shifted origins and a
/// random second direction; returns the construction point as well.
pub fn random_intersecting_pair(
    gens: u8,
    fermionic_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(Geodesic<f64>, Geodesic<f64>, SuperVector<f64>)> {
    for _ in 0..48 {
        let p = random_ih_point(gens, fermionic_scale, rng);
        let v1 = random_h_direction(&p, fermionic_scale, rng)?;
        let v2 = random_h_direction(&p, fermionic_scale, rng)?;
        // keep the crossing well away from tangency
        let cosang = inner(&v1, &v2).neg();
        if cosang.body_f64().abs() > 0.9 {
            continue;
        }
        let l1 = Geodesic::new(p.clone(), v1, 1e-9)?;
        let l2 = Geodesic::new(p.clone(), v2, 1e-9)?;
        let s1 = Supernumber::scalar(gens, rng.gen_range(-0.9..0.9));
        let s2 = Supernumber::scalar(gens, rng.gen_range(-0.9..0.9));
        let l1 = l1.shift_origin(&s1)?;
        let mut l2 = l2.shift_origin(&s2)?;
        if rng.gen_bool(0.5) {
            l2 = l2.reversed();
        }
        // keep the frame machinery well conditioned: the normalization pivot
        // of the first geodesic must be bounded away from zero
        let (e0, f0) = l1.asymptotes();
        let pivot = (&(&e0.y * &f0.y) - &(&e0.x2 * &f0.x1)).body_f64().abs();
        let scale = e0.height().body_f64() * f0.height().body_f64();
        if pivot < 0.15 * scale.max(1.0) {
            continue;
        }
        return Ok((l1, l2, p));
    }
    Err(Error::SamplerExhausted(48))
}

/// A bosonic parallel, non-ultraparallel pair (rejection sampled on the
/// classical dual-vector criterion `<h1,h2>^2 > 1`).
pub fn random_parallel_pair_bosonic(
    gens: u8,
    rng: &mut ChaCha8Rng,
) -> Result<(Geodesic<f64>, Geodesic<f64>)> {
    for _ in 0..256 {
        let l1 = random_geodesic(gens, 0.0, rng)?;
        let l2 = random_geodesic(gens, 0.0, rng)?;
        let a = inner(l1.origin(), l2.origin()).body_f64();
        let b = inner(l1.direction(), l2.origin()).body_f64();
        let c = inner(l1.origin(), l2.direction()).body_f64();
        let d = inner(l1.direction(), l2.direction()).body_f64();
        let factors = [
            a - b - c + d,
            a - b + c - d,
            a + b - c - d,
            a + b + c + d,
        ];
        // all four positive and bounded away from zero: parallel, not
        // ultraparallel, and numerically comfortable
        if factors.iter().all(|v| *v > 0.05) {
            // exclude intersecting pairs: they have Y - X > 0 in the
            // normalized frame, equivalently the dual pairing below 1
            let x_form = a * a - b * b - 1.0;
            let y_form = c * c - d * d + 1.0;
            if y_form <= x_form + 0.05 {
                return Ok((l1, l2));
            }
        }
    }
    Err(Error::SamplerExhausted(256))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::{classify, ConicTag};

    #[test]
    fn ih_sampler_is_exact_and_deterministic() {
        let mut r1 = rng(42);
        let mut r2 = rng(42);
        for _ in 0..32 {
            let p = random_ih_point(6, 0.5, &mut r1);
            let q = random_ih_point(6, 0.5, &mut r2);
            assert_eq!(p, q);
            assert_eq!(classify(&p, 1e-12).tag, ConicTag::Ih);
        }
    }

    #[test]
    fn osp_sampler_passes_check() {
        let mut r = rng(7);
        for _ in 0..16 {
            let g = random_osp(6, 0.5, &mut r);
            assert!(g.check().passes(1e-11), "{:?}", g.check());
        }
        let mut r = rng(11);
        for _ in 0..8 {
            let g = random_osp_rational(5, &mut r);
            assert_eq!(g.check().max_residual(), 0.0);
        }
    }

    #[test]
    fn geodesic_sampler_valid() {
        let mut r = rng(3);
        for _ in 0..8 {
            let l = random_geodesic(6, 0.4, &mut r).unwrap();
            let p = l.point_at(&Supernumber::scalar(6, 0.3)).unwrap();
            assert!(l.contains(&p, 1e-9).unwrap());
        }
    }

    #[test]
    fn intersecting_pair_sampler() {
        let mut r = rng(5);
        let (l1, l2, p) = random_intersecting_pair(4, 0.3, &mut r).unwrap();
        assert!(l1.contains(&p, 1e-9).unwrap());
        assert!(l2.contains(&p, 1e-9).unwrap());
    }
}
