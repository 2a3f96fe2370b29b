//! Truncated real Taylor coefficients for the analytic lifts.
//!
//! Every function here returns the coefficients `c_k = f^(k)(b) / k!` for
//! `k = 0..=order`, so that `f(b + s) = sum c_k s^k` holds exactly once `s`
//! is nilpotent of order `order + 1`.

use crate::error::{Error, Result};
use crate::scalar::AnalyticTag;

/// Convolution product of two coefficient slices, truncated at `order`.
fn mul(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if *ai == 0.0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `(1 + z)^alpha` for a series `z` with zero constant term.
fn binomial(alpha: f64, z: &[f64], order: usize) -> Vec<f64> {
    debug_assert!(z[0] == 0.0);
    let mut out = vec![0.0; order + 1];
    out[0] = 1.0;
    let mut zpow = vec![0.0; order + 1];
    zpow[0] = 1.0;
    let mut coeff = 1.0;
    for m in 1..=order {
        coeff *= (alpha - (m as f64 - 1.0)) / m as f64;
        zpow = mul(&zpow, z, order);
        for k in m..=order {
            out[k] += coeff * zpow[k];
        }
    }
    out
}

/// Coefficients of `g((b + t)^2 + c)` split as `s0 * (1 + z)`; returns `(s0, z)`.
fn quadratic_shift(b: f64, c: f64, order: usize) -> (f64, Vec<f64>) {
    let s0 = b * b + c;
    let mut z = vec![0.0; order + 1];
    if order >= 1 {
        z[1] = 2.0 * b / s0;
    }
    if order >= 2 {
        z[2] = 1.0 / s0;
    }
    (s0, z)
}

/// Antiderivative lift: given `w = y'(b + t)` coefficients and `y0 = y(b)`.
fn integrate(y0: f64, w: &[f64], order: usize) -> Vec<f64> {
    let mut y = vec![0.0; order + 1];
    y[0] = y0;
    for k in 0..order {
        y[k + 1] = w[k] / (k + 1) as f64;
    }
    y
}

fn domain(tag: &'static str, reason: impl Into<String>) -> Error {
    Error::DomainError {
        tag,
        reason: reason.into(),
    }
}

pub fn taylor_f64(tag: AnalyticTag, b: f64, order: usize) -> Result<Vec<f64>> {
    use AnalyticTag::*;
    if !b.is_finite() {
        return Err(domain(tag.name(), format!("body {b} is not finite")));
    }
    let n = order;
    let coeffs = match tag {
        Sqrt => {
            if b <= 0.0 {
                return Err(domain("sqrt", format!("body {b} is not positive")));
            }
            // sqrt(b) * (1 + t/b)^(1/2)
            let mut z = vec![0.0; n + 1];
            if n >= 1 {
                z[1] = 1.0 / b;
            }
            let mut out = binomial(0.5, &z, n);
            let r = b.sqrt();
            out.iter_mut().for_each(|c| *c *= r);
            out
        }
        Exp => {
            let eb = b.exp();
            let mut out = vec![0.0; n + 1];
            let mut fact = 1.0;
            for (k, o) in out.iter_mut().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                *o = eb / fact;
            }
            out
        }
        Ln => {
            if b <= 0.0 {
                return Err(domain("ln", format!("body {b} is not positive")));
            }
            let mut out = vec![0.0; n + 1];
            out[0] = b.ln();
            let mut sign = 1.0;
            for (k, o) in out.iter_mut().enumerate().skip(1) {
                *o = sign / (k as f64 * b.powi(k as i32));
                sign = -sign;
            }
            out
        }
        Cosh | Sinh => {
            let (c0, s0) = (b.cosh(), b.sinh());
            let mut out = vec![0.0; n + 1];
            let mut fact = 1.0;
            for (k, o) in out.iter_mut().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                let even = k % 2 == 0;
                let v = match tag {
                    Cosh => {
                        if even {
                            c0
                        } else {
                            s0
                        }
                    }
                    _ => {
                        if even {
                            s0
                        } else {
                            c0
                        }
                    }
                };
                *o = v / fact;
            }
            out
        }
        Cos | Sin => {
            let (c0, s0) = (b.cos(), b.sin());
            // cos cycle: cos, -sin, -cos, sin; sin cycle: sin, cos, -sin, -cos
            let cycle = match tag {
                Cos => [c0, -s0, -c0, s0],
                _ => [s0, c0, -s0, -c0],
            };
            let mut out = vec![0.0; n + 1];
            let mut fact = 1.0;
            for (k, o) in out.iter_mut().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                *o = cycle[k % 4] / fact;
            }
            out
        }
        Tanh => {
            // u' = 1 - u^2
            let mut u = vec![0.0; n + 1];
            u[0] = b.tanh();
            for k in 0..n {
                let mut conv = 0.0;
                for i in 0..=k {
                    conv += u[i] * u[k - i];
                }
                let drv = if k == 0 { 1.0 - conv } else { -conv };
                u[k + 1] = drv / (k + 1) as f64;
            }
            u
        }
        Arccosh => {
            if b <= 1.0 {
                return Err(domain(
                    "arccosh",
                    format!("body {b} is not above the branch point 1"),
                ));
            }
            // y' = ((b+t)^2 - 1)^(-1/2)
            let (s0, z) = quadratic_shift(b, -1.0, n);
            let mut w = binomial(-0.5, &z, n);
            let scale = s0.powf(-0.5);
            w.iter_mut().for_each(|c| *c *= scale);
            integrate(b.acosh(), &w, n)
        }
        Arcsinh => {
            let (s0, z) = quadratic_shift(b, 1.0, n);
            let mut w = binomial(-0.5, &z, n);
            let scale = s0.powf(-0.5);
            w.iter_mut().for_each(|c| *c *= scale);
            integrate(b.asinh(), &w, n)
        }
        Arctanh => {
            if b.abs() >= 1.0 {
                return Err(domain("arctanh", format!("|body| = {} is not below 1", b.abs())));
            }
            // y' = 1/(1 - x^2); write 1 - (b+t)^2 = s0 (1 + z)
            let s0 = 1.0 - b * b;
            let mut z = vec![0.0; n + 1];
            if n >= 1 {
                z[1] = -2.0 * b / s0;
            }
            if n >= 2 {
                z[2] = -1.0 / s0;
            }
            let mut w = binomial(-1.0, &z, n);
            w.iter_mut().for_each(|c| *c /= s0);
            integrate(b.atanh(), &w, n)
        }
        Arccos => {
            if b.abs() >= 1.0 {
                return Err(domain("arccos", format!("|body| = {} is not below 1", b.abs())));
            }
            let s0 = 1.0 - b * b;
            let mut z = vec![0.0; n + 1];
            if n >= 1 {
                z[1] = -2.0 * b / s0;
            }
            if n >= 2 {
                z[2] = -1.0 / s0;
            }
            let mut w = binomial(-0.5, &z, n);
            let scale = -s0.powf(-0.5);
            w.iter_mut().for_each(|c| *c *= scale);
            integrate(b.acos(), &w, n)
        }
    };
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_derivative(tag: AnalyticTag, x: f64) -> f64 {
        let h = 1e-6;
        let f = |x: f64| taylor_f64(tag, x, 0).unwrap()[0];
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn first_coefficient_is_derivative() {
        use AnalyticTag::*;
        let cases = [
            (Sqrt, 2.3),
            (Exp, 0.4),
            (Ln, 1.7),
            (Cosh, 0.9),
            (Sinh, 0.9),
            (Tanh, 0.3),
            (Cos, 0.5),
            (Sin, 0.5),
            (Arccosh, 1.8),
            (Arcsinh, 0.6),
            (Arctanh, 0.4),
            (Arccos, 0.2),
        ];
        for (tag, x) in cases {
            let c = taylor_f64(tag, x, 3).unwrap();
            let fd = fd_derivative(tag, x);
            assert!(
                (c[1] - fd).abs() <= 1e-6 * (1.0 + fd.abs()),
                "{tag:?}: c1 = {} vs fd = {fd}",
                c[1]
            );
        }
    }

    #[test]
    fn sqrt_against_binomial_closed_form() {
        let c = taylor_f64(AnalyticTag::Sqrt, 4.0, 2).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-15);
        assert!((c[1] - 0.25).abs() < 1e-15);
        assert!((c[2] + 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(taylor_f64(AnalyticTag::Sqrt, -1.0, 4).is_err());
        assert!(taylor_f64(AnalyticTag::Arccosh, 1.0, 4).is_err());
        assert!(taylor_f64(AnalyticTag::Arctanh, 1.0, 4).is_err());
        assert!(taylor_f64(AnalyticTag::Ln, 0.0, 4).is_err());
    }
}
