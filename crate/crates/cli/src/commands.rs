use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use rigidconvex::bezout::{
    interlace_check, pencil_from_param, rigid_at_origin, verify_pencil_det, DetCheck, Parametrization,
};
use rigidconvex::check::check_rigid;
use rigidconvex::circlepsd::{build_sdp, scale_congruence, verify_spectral_factor, CircleOptions, MatrixPoly};
use rigidconvex::cubicrepr::cubic_representations;
use rigidconvex::fixtures::{verify_fixture, Fixture, NAMES};
use rigidconvex::hermite::hermite_matrix;
use rigidconvex::locate::find_interior_point;
use rigidconvex::polycore::{parse_poly, parse_unipoly, BivarPoly, Pencil, TrigMatrix};
use rigidconvex::scalar::rational_to_string;
use rigidconvex::{Error, Rational, Scalar};

use crate::{Command, Failure, Outcome, ParamArgs};

type Run = Result<Option<Outcome>, Failure>;

fn input(message: impl Into<String>) -> Failure {
    Failure { code: 1, kind: "input", message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn poly(s: &str) -> Result<BivarPoly, Failure> {
    Ok(parse_poly(s)?)
}

fn param(args: &ParamArgs) -> Result<Parametrization, Failure> {
    let get = |q: &Option<String>, name: &str| -> Result<_, Failure> {
        let s = q.as_deref().ok_or_else(|| input(format!("--{name} is required")))?;
        Ok(parse_unipoly(s)?)
    };
    Ok(Parametrization::new(get(&args.q0, "q0")?, get(&args.q1, "q1")?, get(&args.q2, "q2")?)?)
}

fn hermite_json(h: &TrigMatrix<Rational>) -> Value {
    let m = h.size();
    let text: Vec<Vec<String>> = (0..m).map(|i| (0..m).map(|j| h.get(i, j).to_string()).collect()).collect();
    let coeffs = |f: fn(&rigidconvex::polycore::TrigPoly<Rational>) -> &[Rational]| -> Vec<Vec<Vec<String>>> {
        (0..m).map(|i| (0..m).map(|j| f(h.get(i, j)).iter().map(rational_to_string).collect()).collect()).collect()
    };
    json!({
        "m": m,
        "entries": text,
        "cos": coeffs(|t| t.cos_coeffs()),
        "sin": coeffs(|t| t.sin_coeffs()),
    })
}

fn det_json(r: &Result<DetCheck, Error>) -> Result<Value, Failure> {
    match r {
        Ok(d) => Ok(json!({"proportional": true, "c": rational_to_string(&d.c_exact), "c_float": d.c, "max_rel_err": d.max_rel_err})),
        Err(Error::Mismatch { monomial, expected, found }) => Ok(json!({
            "proportional": false,
            "mismatch": {"monomial": monomial, "expected": expected, "found": found},
        })),
        Err(e) => Err(e.clone().into()),
    }
}

fn det_text(v: &Value) -> String {
    if v["proportional"] == json!(true) {
        format!("det F = c p with c = {} (max relative error {:.3e})", v["c"].as_str().unwrap_or("?"), v["max_rel_err"].as_f64().unwrap_or(0.0))
    } else {
        format!(
            "det F is not proportional to p: coefficient of {} is {}, expected {}",
            v["mismatch"]["monomial"].as_str().unwrap_or("?"),
            v["mismatch"]["found"],
            v["mismatch"]["expected"]
        )
    }
}

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::CheckRigid { poly: p, emit_hermite, tol } => {
            let pp = poly(p)?;
            let mut opts = CircleOptions::from_env();
            if tol.is_some() {
                opts.tol = *tol;
            }
            let r = check_rigid(&pp, &opts)?;
            let mut result = json!({
                "verdict": r.verdict.as_str(),
                "base_point": r.base_point,
                "base_point_exact": r.base_point_exact,
                "circle": r.circle,
            });
            let mut text = format!("verdict: {}\n", r.verdict.as_str());
            if r.base_point != [0.0, 0.0] {
                let _ = writeln!(text, "lines through ({}, {})", r.base_point_exact[0], r.base_point_exact[1]);
            }
            let _ = writeln!(text, "min eigenvalue on the circle: {:.6e} at theta = {:.6}", r.circle.min_eig, r.circle.witness_theta);
            if r.circle.shortcut {
                text.push_str("decided by a zero diagonal entry with a nonzero off-diagonal entry\n");
            }
            if *emit_hermite {
                result["hermite"] = hermite_json(&r.hermite);
                let _ = writeln!(text, "H(z) =\n{}", r.hermite);
            }
            Ok(Some(Outcome { inputs: json!({"poly": p, "tol": tol}), result, text }))
        }
        Command::Hermite { poly: p } => {
            let h = hermite_matrix(&poly(p)?)?;
            Ok(Some(Outcome { inputs: json!({"poly": p}), result: hermite_json(&h), text: format!("{h}\n") }))
        }
        Command::BezoutPencil { param: args, poly: p, out } => {
            let par = param(args)?;
            let built = pencil_from_param(&par)?;
            let mut pencil = built.pencil;
            let origin = rigid_at_origin(&pencil);
            let interlacing = interlace_check(&par.q1, &par.q2).ok();
            let mut text = String::new();
            let det = match p {
                Some(s) => {
                    let check = verify_pencil_det(&pencil, &poly(s)?);
                    if let Ok(d) = &check {
                        pencil.scale = Some(d.c_exact.clone());
                    }
                    let v = det_json(&check)?;
                    let _ = writeln!(text, "{}", det_text(&v));
                    v
                }
                None => {
                    let d = pencil.det_poly::<2>()?;
                    let _ = writeln!(text, "det F = {d}");
                    json!({"det": d.to_string()})
                }
            };
            let pj = pencil.to_json();
            if let Some(path) = out {
                write(path, &serde_json::to_string_pretty(&pj).expect("serializable"))?;
            }
            let _ = writeln!(text, "rigid at origin: {:?}", origin.verdict);
            let _ = writeln!(text, "F0 eigenvalues: {:?}", origin.eigenvalues);
            for (k, f) in pencil.mats().iter().enumerate() {
                let _ = writeln!(text, "F{k} = {:?}", f.to_rows().iter().map(|r| r.iter().map(Scalar::to_text).collect::<Vec<_>>()).collect::<Vec<_>>());
            }
            let result = json!({
                "pencil": pj,
                "sign": built.sign,
                "rigid_at_origin": origin,
                "interlacing": interlacing,
                "det_check": det,
            });
            let inputs = json!({"q0": args.q0, "q1": args.q1, "q2": args.q2, "poly": p});
            Ok(Some(Outcome { inputs, result, text }))
        }
        Command::FindComponent { pencil, param: args, poly: p } => {
            let f = match pencil {
                Some(path) => Pencil::<Rational>::from_json_str(&read(path)?)?,
                None => pencil_from_param(&param(args)?)?.pencil,
            };
            if f.num_vars() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: f.num_vars() }.into());
            }
            let det = match p {
                Some(s) => poly(s)?,
                None => f.det_poly::<2>()?,
            };
            let report = find_interior_point(&f, &det)?;
            let text = match &report.found {
                Some(c) if !c.degenerate => format!("positive definite at ({}, {})\n", c.point.x[0], c.point.x[1]),
                Some(c) => format!(
                    "only semidefinite at ({}, {}){}\n",
                    c.point.x[0],
                    c.point.x[1],
                    if c.single_point { "; the LMI set is a single point" } else { "" }
                ),
                None => "no point with F(x) positive semidefinite among the candidates\n".to_string(),
            };
            let inputs = json!({"pencil": pencil, "q0": args.q0, "q1": args.q1, "q2": args.q2, "poly": p});
            Ok(Some(Outcome { inputs, result: serde_json::to_value(&report).expect("serializable"), text }))
        }
        Command::CubicRepr { poly: p } => {
            let reps = cubic_representations(&poly(p)?)?;
            let mut text = String::new();
            for r in &reps {
                let _ = writeln!(text, "t = {}, c = {}, mu = {}, det F = {} p", r.t, r.c, r.mu, r.check.c);
                for (k, f) in r.pencil.mats().iter().enumerate() {
                    let _ = writeln!(text, "  F{k} = {:?}", f.to_rows());
                }
            }
            Ok(Some(Outcome { inputs: json!({"poly": p}), result: json!({"representations": reps}), text }))
        }
        Command::ExportSdp { poly: p, out, scale_at } => {
            let h = hermite_matrix(&poly(p)?)?;
            let (sdpa, block, vars, round_trip) = match scale_at {
                Some(theta) => {
                    let s = scale_congruence(&h, *theta);
                    let sdp = build_sdp(&s.h0)?;
                    let ok = sdp.reconstruct().map(|r| r == s.h0).unwrap_or(false);
                    (sdp.to_sdpa(), sdp.block_size, sdp.num_vars, ok)
                }
                None => {
                    let sdp = build_sdp(&h)?;
                    let ok = sdp.reconstruct().map(|r| r == h).unwrap_or(false);
                    (sdp.to_sdpa(), sdp.block_size, sdp.num_vars, ok)
                }
            };
            write(out, &sdpa)?;
            let text = format!("wrote {}: block size {block}, {vars} variables, round trip {}\n", out.display(), if round_trip { "exact" } else { "FAILED" });
            let result = json!({"path": out, "block_size": block, "num_vars": vars, "round_trip_exact": round_trip});
            Ok(Some(Outcome { inputs: json!({"poly": p, "scale_at": scale_at}), result, text }))
        }
        Command::VerifyFactor { poly: p, factor, tol } => {
            let h = hermite_matrix(&poly(p)?)?;
            let v: Value = serde_json::from_str(&read(factor)?).map_err(|e| input(format!("factor JSON: {e}")))?;
            let r = verify_spectral_factor(&h, &MatrixPoly::from_json(&v)?, *tol)?;
            let text = format!(
                "{}: relative residual {:.3e} (tolerance {tol:e})\n",
                if r.pass { "pass" } else { "fail" },
                r.relative_residual
            );
            Ok(Some(Outcome { inputs: json!({"poly": p, "factor": factor, "tol": tol}), result: json!(r), text }))
        }
        Command::VerifyDet { pencil, poly: p } => {
            let f = Pencil::<Rational>::from_json_str(&read(pencil)?)?;
            let v = det_json(&verify_pencil_det(&f, &poly(p)?))?;
            let text = format!("{}\n", det_text(&v));
            Ok(Some(Outcome { inputs: json!({"pencil": pencil, "poly": p}), result: v, text }))
        }
        Command::Fixture { name, list } => {
            if *list {
                let mut text = String::new();
                let mut items = Vec::new();
                for n in NAMES {
                    let fx = Fixture::load(n)?;
                    let _ = writeln!(text, "{n}: {}", fx.description);
                    items.push(json!({"name": n, "description": fx.description}));
                }
                return Ok(Some(Outcome { inputs: json!({"list": true}), result: json!(items), text }));
            }
            let name = name.as_deref().unwrap_or_default();
            let r = verify_fixture(name)?;
            let mut text = format!("fixture {}: {}\n", r.name, if r.pass { "pass" } else { "FAIL" });
            for c in &r.checks {
                let first = c.detail.lines().next().unwrap_or("");
                let _ = writeln!(text, "  [{}] {} ({}): {first}", if c.pass { "ok" } else { "FAIL" }, c.name, c.provenance);
            }
            for n in &r.notes {
                let _ = writeln!(text, "  note: {n}");
            }
            Ok(Some(Outcome { inputs: json!({"name": name}), result: json!(r), text }))
        }
        Command::PlotData { poly: p, range, steps, curve, out } => {
            let pp = poly(p)?;
            let bounds: Vec<f64> = range
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| input(format!("--range: {e}")))?;
            let [a0, a1, b0, b1] = <[f64; 4]>::try_from(bounds).map_err(|_| input("--range needs four numbers"))?;
            if !(a0 < a1 && b0 < b1) || *steps < 1 {
                return Err(input("--range must be increasing and --steps positive"));
            }
            let rows = if *curve { curve_samples(&pp, [a0, a1, b0, b1], *steps) } else { grid_samples(&pp, [a0, a1, b0, b1], *steps) };
            let mut csv = String::from("x1,x2,p\n");
            for [x, y, v] in &rows {
                let _ = writeln!(csv, "{x},{y},{v}");
            }
            match out {
                None => {
                    crate::emit(&csv);
                    Ok(None)
                }
                Some(path) => {
                    write(path, &csv)?;
                    let text = format!("wrote {} samples to {}\n", rows.len(), path.display());
                    let inputs = json!({"poly": p, "range": range, "steps": steps, "curve": curve});
                    Ok(Some(Outcome { inputs, result: json!({"path": path, "samples": rows.len()}), text }))
                }
            }
        }
    }
}

fn grid_samples(p: &BivarPoly, r: [f64; 4], n: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        let y = r[2] + (r[3] - r[2]) * j as f64 / n as f64;
        for i in 0..=n {
            let x = r[0] + (r[1] - r[0]) * i as f64 / n as f64;
            out.push([x, y, p.eval_f64(&[x, y])]);
        }
    }
    out
}

/// Sign changes of `p` along grid rows and columns, refined by bisection.
fn curve_samples(p: &BivarPoly, r: [f64; 4], n: usize) -> Vec<[f64; 3]> {
    let at = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * k as f64 / n as f64;
    let mut out = Vec::new();
    let mut scan = |point: &dyn Fn(f64) -> [f64; 2], lo: f64, hi: f64| {
        for k in 0..n {
            let (mut a, mut b) = (at(k, lo, hi), at(k + 1, lo, hi));
            let (mut fa, fb) = (p.eval_f64(&point(a)), p.eval_f64(&point(b)));
            if fa == 0.0 {
                let x = point(a);
                out.push([x[0], x[1], 0.0]);
                continue;
            }
            if fb == 0.0 {
                // recorded as the left end of the next interval, or here at the last one
                if k + 1 == n {
                    let x = point(b);
                    out.push([x[0], x[1], 0.0]);
                }
                continue;
            }
            if fa * fb > 0.0 {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                let fm = p.eval_f64(&point(mid));
                if fm == 0.0 {
                    (a, b) = (mid, mid);
                    break;
                }
                if (fa < 0.0) == (fm < 0.0) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            let x = point(0.5 * (a + b));
            out.push([x[0], x[1], p.eval_f64(&x)]);
        }
    };
    for j in 0..=n {
        let y = at(j, r[2], r[3]);
        scan(&|x| [x, y], r[0], r[1]);
    }
    for i in 0..=n {
        let x = at(i, r[0], r[1]);
        scan(&|y| [x, y], r[2], r[3]);
    }
    out
}
