//! Command-line front end.
//!
//! Every command reads vectors/geodesics as JSON (inline), supernumbers as
//! JSON or the text form `2.5 + 1*e[1,2] - 0.5*e[3]`, and writes results to
//! stdout. Errors go to stderr as one structured JSON object. Exit codes:
//! 0 success, 1 domain error, 2 parse or option error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geodesic::{distance, foot, through, Geodesic};
use crate::grassmann::Supernumber;
use crate::minkowski::{classify, to_upper_half_plane, SuperVector};
use crate::pairs::{classify_pair, common_perpendicular, intersect};
use crate::scalar::{AnalyticTag, Scalar};
use crate::selftest::{run_all, SelftestConfig};
use crate::trig::{triangle_report, Triangle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalarKind {
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputKind {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "superbolic",
    about = "Supernumber arithmetic and super hyperbolic plane geometry",
    version
)]
pub struct Cli {
    /// Number of Grassmann generators in the algebra context.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u8).range(1..=16))]
    pub gens: u8,
    /// Scalar backend: float (f64) or exact rational.
    #[arg(long, global = true, value_enum, default_value_t = ScalarKind::Float)]
    pub scalar: ScalarKind,
    /// Coefficientwise tolerance for residual checks (float mode).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputKind>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// First geodesic as JSON `{"u":...,"v":...}` or `{"e":...,"f":...,"normalize":bool}`.
    #[arg(long)]
    pub l1: String,
    /// Second geodesic, same forms.
    #[arg(long)]
    pub l2: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a supernumber and optionally apply one operation.
    Eval {
        /// Input supernumber (text form or JSON).
        #[arg(long)]
        a: String,
        /// Multiply by a second supernumber.
        #[arg(long, conflicts_with_all = ["add", "sub", "invert", "apply"])]
        mul: Option<String>,
        /// Add a second supernumber.
        #[arg(long, conflicts_with_all = ["sub", "invert", "apply"])]
        add: Option<String>,
        /// Subtract a second supernumber.
        #[arg(long, conflicts_with_all = ["invert", "apply"])]
        sub: Option<String>,
        /// Invert.
        #[arg(long, conflicts_with = "apply")]
        invert: bool,
        /// Apply an analytic lift (sqrt, exp, ln, cosh, sinh, tanh, cos,
        /// sin, arccosh, arcsinh, arctanh, arccos).
        #[arg(long)]
        apply: Option<String>,
    },
    /// Classify a point of super Minkowski space against the conics.
    Classify {
        #[arg(long)]
        p: String,
    },
    /// Distance data between two points of IH.
    Distance {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// The unique supergeodesic through two points (origin at the first).
    Through {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Orthogonal projection of a point onto a geodesic.
    Foot {
        #[arg(long)]
        p: String,
        #[arg(long)]
        line: String,
    },
    /// Sides, angles, and law residuals of a supertriangle.
    Triangle {
        /// Triangle JSON `{"A":...,"B":...,"C":...}`.
        #[arg(long)]
        json: Option<String>,
        #[arg(long, requires = "b", requires = "c")]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
    },
    /// Intersection conditions, point, and angle for a geodesic pair.
    Intersect(PairArgs),
    /// Common perpendicular of a parallel, non-ultraparallel pair.
    Perpendicular(PairArgs),
    /// Full pair classification with the bosonic dual cross-check.
    ClassifyPair(PairArgs),
    /// Map a point of IH to the super upper half-plane.
    MapUhp {
        #[arg(long)]
        p: String,
    },
    /// Sample a geodesic's body curve as Poincare-disk CSV rows.
    PlotBody {
        #[arg(long)]
        line: String,
        #[arg(long, default_value_t = 101)]
        samples: u32,
        #[arg(long, default_value_t = -2.0)]
        t_min: f64,
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
    },
    /// Run the property suites and print a residual summary.
    Selftest {
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 0.5)]
        fermionic_scale: f64,
    },
}

/// Poincare-disk image of a body point of IH'.
#[derive(Debug, Clone, Copy)]
pub struct DiskPoint {
    pub px: f64,
    pub py: f64,
}

/// Stereographic body projection: with `X = (x1-x2)/2`, `Z = (x1+x2)/2`,
/// `Y = y`, the disk point is `(X/(1+Z), Y/(1+Z))`.
pub fn body_to_disk<S: Scalar>(p: &SuperVector<S>, tol: f64) -> Result<DiskPoint> {
    let (x1, x2, y) = (p.x1.body_f64(), p.x2.body_f64(), p.y.body_f64());
    let norm = x1 * x2 - y * y;
    if (norm - 1.0).abs() > tol.max(1e-9) || x1 + x2 <= 0.0 {
        return Err(Error::NotOnIh {
            residual: (norm - 1.0).abs(),
        });
    }
    let x = (x1 - x2) / 2.0;
    let z = (x1 + x2) / 2.0;
    Ok(DiskPoint {
        px: x / (1.0 + z),
        py: y / (1.0 + z),
    })
}

/// Uniform parameter samples of a geodesic's body curve in the disk.
pub fn plot_body<S: Scalar>(
    line: &Geodesic<S>,
    samples: u32,
    t_min: f64,
    t_max: f64,
    tol: f64,
) -> Result<Vec<(f64, DiskPoint)>> {
    if samples < 2 || t_max <= t_min {
        return Err(Error::OptionError(
            "need samples >= 2 and t_max > t_min".into(),
        ));
    }
    let (u, v) = (line.origin(), line.direction());
    let mut rows = Vec::with_capacity(samples as usize);
    for k in 0..samples {
        let t = t_min + (t_max - t_min) * k as f64 / (samples - 1) as f64;
        // body curve only: cosh/sinh on f64 bodies
        let (ch, sh) = (t.cosh(), t.sinh());
        let x1 = u.x1.body_f64() * ch + v.x1.body_f64() * sh;
        let x2 = u.x2.body_f64() * ch + v.x2.body_f64() * sh;
        let y = u.y.body_f64() * ch + v.y.body_f64() * sh;
        let p = SuperVector::<f64>::new(
            Supernumber::scalar(1, x1),
            Supernumber::scalar(1, x2),
            Supernumber::scalar(1, y),
            Supernumber::zero(1),
            Supernumber::zero(1),
        )?;
        rows.push((t, body_to_disk(&p, tol)?));
    }
    Ok(rows)
}

fn parse_supernumber_arg<S: Scalar>(gens: u8, text: &str) -> Result<Supernumber<S>> {
    match serde_json::from_str::<Value>(text) {
        Ok(v) => Supernumber::from_json(gens, &v),
        Err(_) => Supernumber::parse(gens, text),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::JsonError(format!("invalid JSON: {e}")))
}

fn parse_vector_arg<S: Scalar>(gens: u8, text: &str) -> Result<SuperVector<S>> {
    SuperVector::from_json(gens, &parse_json(text)?)
}

fn parse_geodesic_arg<S: Scalar>(gens: u8, text: &str, tol: f64) -> Result<Geodesic<S>> {
    Geodesic::from_json(gens, &parse_json(text)?, tol)
}

struct Rendered {
    json: Value,
    text: String,
}

fn run_typed<S: Scalar>(cli: &Cli) -> Result<Rendered> {
    let gens = cli.gens;
    let tol = if S::EXACT { 0.0 } else { cli.tol };
    match &cli.command {
        Command::Eval {
            a,
            mul,
            add,
            sub,
            invert,
            apply,
        } => {
            let a: Supernumber<S> = parse_supernumber_arg(gens, a)?;
            let result = if let Some(b) = mul {
                a.checked_mul(&parse_supernumber_arg(gens, b)?)?
            } else if let Some(b) = add {
                a.checked_add(&parse_supernumber_arg(gens, b)?)?
            } else if let Some(b) = sub {
                a.checked_sub(&parse_supernumber_arg(gens, b)?)?
            } else if *invert {
                a.invert()?
            } else if let Some(tag) = apply {
                a.apply(tag.parse::<AnalyticTag>()?)?
            } else {
                a
            };
            Ok(Rendered {
                json: json!({ "result": result.to_json(), "text": result.to_text() }),
                text: result.to_text(),
            })
        }
        Command::Classify { p } => {
            let p: SuperVector<S> = parse_vector_arg(gens, p)?;
            let c = classify(&p, tol);
            Ok(Rendered {
                text: format!("{} (residual {:e})", c.tag.name(), c.residual),
                json: c.to_json(),
            })
        }
        Command::Distance { p, q } => {
            let p: SuperVector<S> = parse_vector_arg(gens, p)?;
            let q = parse_vector_arg(gens, q)?;
            let d = distance(&p, &q, tol)?;
            Ok(Rendered {
                text: match &d.d {
                    Some(len) => format!("cosh_d = {}\nd = {}", d.cosh_d.to_text(), len.to_text()),
                    None => format!("cosh_d = {}\nd omitted (branch point)", d.cosh_d.to_text()),
                },
                json: d.to_json(),
            })
        }
        Command::Through { p, q } => {
            let p: SuperVector<S> = parse_vector_arg(gens, p)?;
            let q = parse_vector_arg(gens, q)?;
            let l = through(&p, &q, tol)?;
            Ok(Rendered {
                text: format!(
                    "u = {}\nv = {}",
                    l.origin().to_json(),
                    l.direction().to_json()
                ),
                json: l.to_json(),
            })
        }
        Command::Foot { p, line } => {
            let p: SuperVector<S> = parse_vector_arg(gens, p)?;
            let l = parse_geodesic_arg(gens, line, tol)?;
            let r = foot(&p, &l, tol)?;
            Ok(Rendered {
                text: format!(
                    "foot = {}\ncosh_dist = {}",
                    r.foot.to_json(),
                    r.dist.cosh_d.to_text()
                ),
                json: json!({
                    "foot": r.foot.to_json(),
                    "perp": r.perp.to_json(),
                    "dist": r.dist.to_json(),
                    "tanh_param": r.tanh_param.to_json(),
                }),
            })
        }
        Command::Triangle { json: tj, a, b, c } => {
            let t: Triangle<S> = if let Some(tj) = tj {
                Triangle::from_json(gens, &parse_json(tj)?, tol)?
            } else {
                match (a, b, c) {
                    (Some(a), Some(b), Some(c)) => Triangle::new(
                        parse_vector_arg(gens, a)?,
                        parse_vector_arg(gens, b)?,
                        parse_vector_arg(gens, c)?,
                        tol,
                    )?,
                    _ => {
                        return Err(Error::OptionError(
                            "triangle needs --json or all of --a/--b/--c".into(),
                        ))
                    }
                }
            };
            let report = triangle_report(&t, tol)?;
            Ok(Rendered {
                text: format!(
                    "residuals: cosines {:e}, dual {:e}, sines {:e}",
                    report.residual_cosines, report.residual_dual, report.residual_sines
                ),
                json: report.to_json(),
            })
        }
        Command::Intersect(pair) => {
            let l1 = parse_geodesic_arg::<S>(gens, &pair.l1, tol)?;
            let l2 = parse_geodesic_arg(gens, &pair.l2, tol)?;
            let v = intersect(&l1, &l2, tol)?;
            Ok(Rendered {
                text: v.tag.name().to_string(),
                json: v.to_json(),
            })
        }
        Command::Perpendicular(pair) => {
            let l1 = parse_geodesic_arg::<S>(gens, &pair.l1, tol)?;
            let l2 = parse_geodesic_arg(gens, &pair.l2, tol)?;
            let v = common_perpendicular(&l1, &l2, tol)?;
            let dist = v
                .perpendicular
                .as_ref()
                .map(|p| p.cosh_dist.to_text())
                .unwrap_or_default();
            Ok(Rendered {
                text: format!("parallel; cosh_dist = {dist}"),
                json: v.to_json(),
            })
        }
        Command::ClassifyPair(pair) => {
            let l1 = parse_geodesic_arg::<S>(gens, &pair.l1, tol)?;
            let l2 = parse_geodesic_arg(gens, &pair.l2, tol)?;
            let v = classify_pair(&l1, &l2, tol)?;
            Ok(Rendered {
                text: v.tag.name().to_string(),
                json: v.to_json(),
            })
        }
        Command::MapUhp { .. } | Command::PlotBody { .. } | Command::Selftest { .. } => {
            unreachable!("handled by the float-only dispatcher")
        }
    }
}

fn run_float_only(cli: &Cli) -> Result<Rendered> {
    let gens = cli.gens;
    let tol = cli.tol;
    match &cli.command {
        Command::MapUhp { p } => {
            if cli.scalar == ScalarKind::Rational {
                return Err(Error::OptionError(
                    "map-uhp needs the complex context; run with --scalar float".into(),
                ));
            }
            let p: SuperVector<f64> = parse_vector_arg(gens, p)?;
            let (z, theta) = to_upper_half_plane(&p, tol)?;
            Ok(Rendered {
                text: format!("z = {}\ntheta = {}", z.to_text(), theta.to_text()),
                json: json!({ "z": z.to_json(), "theta": theta.to_json() }),
            })
        }
        Command::PlotBody {
            line,
            samples,
            t_min,
            t_max,
        } => {
            let rows = match cli.scalar {
                ScalarKind::Float => {
                    let l = parse_geodesic_arg::<f64>(gens, line, tol)?;
                    plot_body(&l, *samples, *t_min, *t_max, tol)?
                }
                ScalarKind::Rational => {
                    let l = parse_geodesic_arg::<BigRational>(gens, line, 0.0)?;
                    plot_body(&l, *samples, *t_min, *t_max, tol)?
                }
            };
            let mut csv = String::from("t,px,py\n");
            for (t, d) in &rows {
                csv.push_str(&format!("{t},{},{}\n", d.px, d.py));
            }
            Ok(Rendered {
                json: json!({
                    "rows": rows
                        .iter()
                        .map(|(t, d)| json!({ "t": t, "px": d.px, "py": d.py }))
                        .collect::<Vec<_>>(),
                }),
                text: csv,
            })
        }
        Command::Selftest {
            trials,
            fermionic_scale,
        } => {
            let cfg = SelftestConfig {
                gens,
                trials: *trials,
                seed: cli.seed,
                fermionic_scale: *fermionic_scale,
            };
            let results = run_all(&cfg);
            let mut text = String::new();
            let mut all_ok = true;
            for r in &results {
                all_ok &= r.passed;
                text.push_str(&format!(
                    "{} {:<28} trials {:>5}  residual {:>10.3e}  tol {:>8.1e}{}\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.trials,
                    r.max_residual,
                    r.tolerance,
                    if r.note.is_empty() {
                        String::new()
                    } else {
                        format!("  ({})", r.note)
                    }
                ));
            }
            text.push_str(if all_ok {
                "all suites passed\n"
            } else {
                "FAILURES PRESENT\n"
            });
            if !all_ok {
                // reported through the error channel so the exit code is 1
                return Err(Error::InvariantViolation(format!(
                    "self-test failures:\n{text}"
                )));
            }
            Ok(Rendered {
                json: json!(results.iter().map(|r| r.to_json()).collect::<Vec<_>>()),
                text,
            })
        }
        _ => unreachable!("typed commands handled earlier"),
    }
}

/// Execute a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let is_float_only = matches!(
        cli.command,
        Command::MapUhp { .. } | Command::PlotBody { .. } | Command::Selftest { .. }
    );
    let outcome = if is_float_only {
        run_float_only(cli)
    } else {
        match cli.scalar {
            ScalarKind::Float => run_typed::<f64>(cli),
            ScalarKind::Rational => run_typed::<BigRational>(cli),
        }
    };
    match outcome {
        Ok(rendered) => {
            let output = cli.output.unwrap_or(match cli.command {
                Command::PlotBody { .. } => OutputKind::Csv,
                _ => OutputKind::Json,
            });
            match output {
                OutputKind::Json => println!("{}", rendered.json),
                OutputKind::Text | OutputKind::Csv => print!(
                    "{}{}",
                    rendered.text,
                    if rendered.text.ends_with('\n') { "" } else { "\n" }
                ),
            }
            0
        }
        Err(err) => {
            let payload = json!({
                "error": { "code": err.code(), "message": err.to_string() }
            });
            eprintln!("{payload}");
            match err {
                Error::ParseError { .. } | Error::JsonError(_) | Error::OptionError(_) => 2,
                _ => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, Value) {
        let cli = Cli::try_parse_from(args).expect("argv parses");
        // capture by re-running the internals rather than stdout
        let is_float_only = matches!(
            cli.command,
            Command::MapUhp { .. } | Command::PlotBody { .. } | Command::Selftest { .. }
        );
        let outcome = if is_float_only {
            run_float_only(&cli)
        } else {
            match cli.scalar {
                ScalarKind::Float => run_typed::<f64>(&cli),
                ScalarKind::Rational => run_typed::<BigRational>(&cli),
            }
        };
        match outcome {
            Ok(r) => (0, r.json),
            Err(e) => (
                match e {
                    Error::ParseError { .. } | Error::JsonError(_) | Error::OptionError(_) => 2,
                    _ => 1,
                },
                json!({ "error": e.to_string() }),
            ),
        }
    }

    #[test]
    fn eval_round_trip() {
        let (code, v) = run_args(&["superbolic", "eval", "--a", "2.5 + 1*e[1,2]"]);
        assert_eq!(code, 0);
        assert_eq!(v["text"], "2.5 + 1*e[1,2]");
        let (code, _) = run_args(&["superbolic", "eval", "--a", "1*e[2,1]"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn eval_rational_sqrt() {
        let (code, v) = run_args(&[
            "superbolic",
            "--scalar",
            "rational",
            "eval",
            "--a",
            "4 + 1*e[1,2]",
            "--apply",
            "sqrt",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["text"], "2 + 1/4*e[1,2]");
        // transcendental tags are rejected in rational mode
        let (code, _) = run_args(&[
            "superbolic",
            "--scalar",
            "rational",
            "eval",
            "--a",
            "1",
            "--apply",
            "exp",
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn distance_command() {
        let p = r#"{"x1":1,"x2":1,"y":0,"phi":0,"psi":0}"#;
        let e1 = 1f64.exp();
        let q = format!(
            r#"{{"x1":{e1},"x2":{},"y":0,"phi":0,"psi":0}}"#,
            (-1f64).exp()
        );
        let (code, v) = run_args(&["superbolic", "distance", "--p", p, "--q", &q]);
        assert_eq!(code, 0);
        let cosh_d = v["cosh_d"]["terms"][0]["c"].as_f64().unwrap();
        assert!((cosh_d - 1f64.cosh()).abs() < 1e-12);
        let d = v["d"]["terms"][0]["c"].as_f64().unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plot_body_rows_inside_disk() {
        let line = r#"{"u":{"x1":1,"x2":1,"y":0,"phi":0,"psi":0},
                       "v":{"x1":1,"x2":-1,"y":0,"phi":0,"psi":0}}"#;
        let (code, v) = run_args(&[
            "superbolic",
            "plot-body",
            "--line",
            line,
            "--samples",
            "11",
        ]);
        assert_eq!(code, 0);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 11);
        for row in rows {
            let (px, py) = (
                row["px"].as_f64().unwrap(),
                row["py"].as_f64().unwrap(),
            );
            assert!(px * px + py * py < 1.0);
        }
    }

    #[test]
    fn disk_map_examples() {
        let base = SuperVector::<f64>::bosonic(4, 1, 1, 0);
        let d = body_to_disk(&base, 1e-9).unwrap();
        assert_eq!((d.px, d.py), (0.0, 0.0));
        let p = SuperVector::<f64>::new(
            Supernumber::scalar(4, 1f64.exp()),
            Supernumber::scalar(4, (-1f64).exp()),
            Supernumber::zero(4),
            Supernumber::zero(4),
            Supernumber::zero(4),
        )
        .unwrap();
        let d = body_to_disk(&p, 1e-9).unwrap();
        assert!((d.px - 0.5f64.tanh()).abs() < 1e-15);
        assert_eq!(d.py, 0.0);
        let off = SuperVector::<f64>::bosonic(4, 2, 1, 0);
        assert!(body_to_disk(&off, 1e-9).is_err());
    }

    #[test]
    fn intersect_base_example() {
        let l1 = r#"{"u":{"x1":1,"x2":1,"y":0,"phi":0,"psi":0},
                     "v":{"x1":1,"x2":-1,"y":0,"phi":0,"psi":0}}"#;
        let l2 = r#"{"u":{"x1":1,"x2":1,"y":0,"phi":0,"psi":0},
                     "v":{"x1":0,"x2":0,"y":1,"phi":0,"psi":0}}"#;
        let (code, v) = run_args(&["superbolic", "intersect", "--l1", l1, "--l2", l2]);
        assert_eq!(code, 0);
        assert_eq!(v["tag"], "intersecting");
        assert_eq!(v["point"]["x1"]["terms"][0]["c"].as_f64().unwrap(), 1.0);
        // rational mode gives the same verdict exactly
        let (code, v) = run_args(&[
            "superbolic",
            "--scalar",
            "rational",
            "intersect",
            "--l1",
            l1,
            "--l2",
            l2,
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["tag"], "intersecting");
    }

    #[test]
    fn perpendicular_worked_example() {
        let l1 = r#"{"u":{"x1":1,"x2":1,"y":0,"phi":0,"psi":0},
                     "v":{"x1":1,"x2":-1,"y":0,"phi":0,"psi":0}}"#;
        let l2 = r#"{"u":{"x1":1,"x2":5,"y":2,"phi":0,"psi":0},
                     "v":{"x1":0,"x2":4,"y":1,"phi":0,"psi":0}}"#;
        let (code, v) = run_args(&["superbolic", "perpendicular", "--l1", l1, "--l2", l2]);
        assert_eq!(code, 0);
        assert_eq!(v["tag"], "parallel");
        let cosh = v["perpendicular"]["cosh_dist"]["terms"][0]["c"]
            .as_f64()
            .unwrap();
        assert!((cosh - 2.0).abs() < 1e-12);
    }

    #[test]
    fn map_uhp_base() {
        let p = r#"{"x1":1,"x2":1,"y":0,"phi":0,"psi":0}"#;
        let (code, v) = run_args(&["superbolic", "map-uhp", "--p", p]);
        assert_eq!(code, 0);
        assert_eq!(v["z"]["terms"][0]["c"]["im"].as_f64().unwrap(), 1.0);
        let (code, _) = run_args(&[
            "superbolic",
            "--scalar",
            "rational",
            "map-uhp",
            "--p",
            p,
        ]);
        assert_eq!(code, 2);
    }
}
