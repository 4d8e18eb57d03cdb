use std::f64::consts::PI;

use hyperlap::chains::{make_inverse_chain, InverseChain, Profile};
use hyperlap::expr::AnalyticFunction;
use hyperlap::geometry::{dot, fan, support_function, ClosedConicSet, Direction, ExtReal, PolyhedralCone};
use hyperlap::hyperfun::{pairing, GaussFactor, Hyperfunction, TestDensity};
use hyperlap::laplace::{axis_supports, forward_batch, growth_certificate, inverse, support_estimate, ForwardOptions, TransformResult};
use hyperlap::literal::{from_json, parse_complex, parse_hyperfunction, to_json};
use hyperlap::opcalc::{char_infinity, check_solvable, solve, DiffOp, SolvableOptions, SolveOptions};
use hyperlap::{verify, Error, C64};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{JobConfig, OneOrMany, ProfileConfig};
use crate::output::Outcome;
use crate::CliError;

const DEFAULT_PROFILE: ProfileConfig = ProfileConfig { c0: 1.0, c1: 1.0, p: 0.5 };
const DEFAULT_MESH: f64 = 0.05;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn need<'a, T>(v: &'a Option<T>, name: &str, cmd: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| config_err(format!("{cmd} needs `{name}`")))
}

pub fn run(mut cfg: JobConfig) -> Result<Outcome, CliError> {
    let cmd = cfg.command.clone().ok_or_else(|| config_err("no command given (use a subcommand or `command` in the config)"))?;
    let (body, csv, code) = match cmd.as_str() {
        "transform" => transform(&mut cfg)?,
        "inverse" => cmd_inverse(&mut cfg)?,
        "roundtrip" => roundtrip(&mut cfg)?,
        "solve" => cmd_solve(&mut cfg)?,
        "char" => cmd_char(&mut cfg)?,
        "pair" => pair(&mut cfg)?,
        "verify" => cmd_verify(&mut cfg)?,
        other => return Err(config_err(format!("unknown command `{other}`"))),
    };
    let mut json = json!({ "command": cmd, "config": cfg });
    json.as_object_mut().unwrap().extend(body.as_object().cloned().unwrap_or_default());
    Ok(Outcome { json, csv, out: cfg.out.clone(), csv_path: cfg.csv.clone(), code })
}

type Body = (Value, Option<String>, u8);

/// A string in builtin notation, `@file`, or a literal object. A file may
/// also hold the output of another command, whose `u` is taken.
fn hyperfunction(v: &Value) -> Result<Hyperfunction, CliError> {
    Ok(match v {
        Value::String(s) if s.starts_with('@') => {
            let path = &s[1..];
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(doc) if doc.get("command").is_some() => from_json(need(&doc.get("u").cloned(), "u", path)?)?,
                _ => parse_hyperfunction(s)?,
            }
        }
        Value::String(s) => parse_hyperfunction(s)?,
        Value::Object(_) => from_json(v)?,
        _ => return Err(config_err("a hyperfunction is a string or a literal object")),
    })
}

fn function_text(v: &Value) -> Result<&str, CliError> {
    v.as_str().ok_or_else(|| config_err("`f` must be an expression string in zeta"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeLiteral {
    vertex: Vec<f64>,
    generators: Vec<Vec<f64>>,
}

fn support_set(v: &Value) -> Result<ClosedConicSet, CliError> {
    let obj = match v {
        Value::String(s) if s.trim_start().starts_with('{') => serde_json::from_str(s).map_err(|e| config_err(format!("K: {e}")))?,
        Value::String(s) => return Ok(ClosedConicSet::from_interval_str(s)?),
        other => other.clone(),
    };
    let c: ConeLiteral = serde_json::from_value(obj).map_err(|e| config_err(format!("K: {e}")))?;
    let n = c.vertex.len();
    Ok(ClosedConicSet::new(c.vertex, PolyhedralCone::new(n, c.generators)?)?)
}

fn zeta_point(s: &str) -> Result<Vec<C64>, CliError> {
    s.split(',').map(|x| parse_complex(x.trim()).map_err(CliError::from)).collect()
}

fn zeta_points(cfg: &JobConfig, n: usize) -> Result<Option<Vec<Vec<C64>>>, CliError> {
    let Some(list) = &cfg.zeta else { return Ok(None) };
    let pts: Vec<Vec<C64>> = list.iter().map(|s| zeta_point(s)).collect::<Result<_, _>>()?;
    for p in &pts {
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.len() }.into());
        }
    }
    Ok(Some(pts))
}

fn profile(cfg: &mut JobConfig, default: ProfileConfig) -> Result<Profile, CliError> {
    let p = *cfg.psi.get_or_insert(default);
    Ok(Profile::new(p.c0, p.c1, p.p)?)
}

/// ξ₀ defaults to the axis direction of K in one variable and to an
/// interior direction of the dual cone in two.
fn default_xi0(k: &ClosedConicSet) -> Result<Vec<f64>, CliError> {
    if k.dim() == 1 {
        let (_, d) = axis_supports(k)?[0];
        return Ok(vec![if d < 0.0 { -1.0 } else { 1.0 }]);
    }
    if k.cone.generators.is_empty() {
        return Ok(vec![1.0 / (k.dim() as f64).sqrt(); k.dim()]);
    }
    k.cone.interior_dual_direction().ok_or(CliError::Lib(Error::EmptyHpc))
}

fn chain(cfg: &mut JobConfig, k: &ClosedConicSet, default: ProfileConfig) -> Result<InverseChain, CliError> {
    let psi = profile(cfg, default)?;
    let xi0 = match &cfg.xi0 {
        Some(x) => x.clone(),
        None => default_xi0(k)?,
    };
    let ch = make_inverse_chain(&xi0, psi, &[], 0.0)?;
    cfg.xi0 = Some(ch.xi0.clone());
    Ok(ch)
}

fn batteries(n: usize) -> Result<Vec<TestDensity>, CliError> {
    match n {
        1 => Ok(TestDensity::battery_1d()),
        2 => Ok(TestDensity::battery_2d()),
        _ => Err(Error::Unsupported(format!("test densities in dimension {n}")).into()),
    }
}

fn density_spec(s: &str) -> Result<TestDensity, CliError> {
    let factors = s
        .split(';')
        .map(|f| {
            let v: Vec<f64> = f
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| config_err(format!("density `{s}`: `{x}` is not a number"))))
                .collect::<Result<_, _>>()?;
            match v[..] {
                [c, w] if w > 0.0 => Ok(GaussFactor::gaussian(c, w)),
                _ => Err(config_err(format!("density `{s}`: expected center,width with width > 0"))),
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(TestDensity::new(factors))
}

/// Pairings with the densities as JSON rows and as CSV with columns
/// density, center, width, re, im (per-coordinate values joined by `;`).
fn pairing_table(u: &Hyperfunction, phis: &[TestDensity]) -> Result<(Value, String), CliError> {
    let mut rows = vec![];
    let mut wr = csv::Writer::from_writer(vec![]);
    let csv_err = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    wr.write_record(["density", "center", "width", "re", "im"]).map_err(csv_err)?;
    for (j, phi) in phis.iter().enumerate() {
        let v = pairing(u, phi)?;
        let centers: Vec<f64> = phi.factors.iter().map(|f| f.center).collect();
        let widths: Vec<f64> = phi.factors.iter().map(|f| f.width).collect();
        let poly: Vec<Vec<C64>> = phi.factors.iter().map(|f| f.poly.clone()).collect();
        rows.push(json!({ "density": j, "center": centers, "width": widths, "poly": poly, "value": v }));
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        wr.write_record([j.to_string(), join(&centers), join(&widths), format!("{:e}", v.re), format!("{:e}", v.im)]).map_err(csv_err)?;
    }
    let bytes = wr.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?;
    Ok((Value::Array(rows), String::from_utf8(bytes).expect("csv is utf-8")))
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("").to_string()
}

/// Rays ζ₀ for the growth certificate: the inner dual direction turned by
/// a few angles in the first coordinate.
fn growth_rays(u: &Hyperfunction) -> Result<Vec<Vec<C64>>, CliError> {
    let xi = default_xi0(&u.support)?;
    Ok([-0.8, -0.4, 0.0, 0.4, 0.8]
        .iter()
        .map(|&th| {
            let mut z: Vec<C64> = xi.iter().map(|&x| C64::new(x, 0.0)).collect();
            z[0] *= C64::from_polar(1.0, th);
            z
        })
        .collect())
}

fn transform(cfg: &mut JobConfig) -> Result<Body, CliError> {
    let u = hyperfunction(need(&cfg.u, "u", "transform")?)?;
    let zetas = zeta_points(cfg, u.dim)?.ok_or_else(|| config_err("transform needs at least one `zeta`"))?;
    let opts = ForwardOptions { eps: *cfg.eps.get_or_insert(ForwardOptions::default().eps), ..Default::default() };
    let growth_on = *cfg.growth.get_or_insert(u.dim == 1);
    let results = forward_batch(&u, &zetas, &opts);
    let mut values = vec![];
    let mut errors = vec![];
    for (j, (z, r)) in zetas.iter().zip(results).enumerate() {
        match r {
            Ok(v) => values.push(json!({ "zeta": z, "value": v })),
            Err(e) => {
                values.push(json!({ "zeta": z, "value": null }));
                errors.push(json!({ "index": j, "zeta": z, "kind": error_kind(&e), "message": e.to_string() }));
            }
        }
    }
    let mut code = if errors.is_empty() { 0 } else { 3 };
    let growth = if growth_on && !u.is_zero_literal() {
        let t = TransformResult::new(&u).with_options(opts);
        let ts: Vec<f64> = (1..=48).map(|j| 0.5 * j as f64).collect();
        let rep = growth_certificate(&t, &growth_rays(&u)?, &ts, 0.1)?;
        if !rep.passed {
            code = 3;
        }
        serde_json::to_value(rep).unwrap()
    } else {
        Value::Null
    };
    Ok((json!({ "values": values, "errors": errors, "growth": growth }), None, code))
}

/// I𝓛(f) on K with the configured chain; a constant-zero f gives the zero
/// literal.
fn invert(cfg: &mut JobConfig) -> Result<(Hyperfunction, AnalyticFunction, ClosedConicSet, InverseChain), CliError> {
    let text = function_text(need(&cfg.f, "f", "inverse")?)?.to_string();
    let k = match &cfg.k {
        Some(v) => support_set(v)?,
        None => {
            let k = if text.contains("zeta2") { json!({ "vertex": [0, 0], "generators": [[1, 0], [0, 1]] }) } else { json!("[0,inf)") };
            cfg.k = Some(k.clone());
            support_set(&k)?
        }
    };
    let f = AnalyticFunction::parse_zeta(&text, k.dim())?;
    let ch = chain(cfg, &k, DEFAULT_PROFILE)?;
    let is_zero = hyperlap::expr::parse(&text)?.eval_with(&|_| None).map_or(false, |v| v == C64::new(0.0, 0.0));
    let u = if is_zero { Hyperfunction::zero(k.dim()).with_support(k.clone()) } else { inverse(&f, &k, &ch)? };
    Ok((u, f, k, ch))
}

/// Half-spaces {⟨x, ξ⟩ ≥ h_K(ξ)} over directions inside the dual cone.
fn support_polygon(f: &AnalyticFunction, k: &ClosedConicSet, ch: &InverseChain) -> Result<Value, CliError> {
    let dirs = if k.dim() == 1 {
        vec![Direction::new(&[ch.xi0[0].signum()])?]
    } else {
        fan(0.0, 2.0 * PI, 72).into_iter().filter(|d| k.cone.generators.iter().all(|g| dot(g, &d.unit) > 0.0)).collect()
    };
    let h = |d: &Direction| match support_function(k, d) {
        ExtReal::Finite(h) => h,
        _ => f64::NEG_INFINITY,
    };
    Ok(serde_json::to_value(support_estimate(f, &h, &dirs)?).unwrap())
}

fn cmd_inverse(cfg: &mut JobConfig) -> Result<Body, CliError> {
    let (u, f, k, ch) = invert(cfg)?;
    let (pairings, csv) = pairing_table(&u, &batteries(k.dim())?)?;
    let body = json!({
        "u": to_json(&u)?,
        "chain": ch,
        "support": support_polygon(&f, &k, &ch)?,
        "pairings": pairings,
    });
    Ok((body, Some(csv), 0))
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn roundtrip(cfg: &mut JobConfig) -> Result<Body, CliError> {
    let tol = cfg.tol();
    match (&cfg.f, &cfg.u) {
        (Some(_), None) => {
            let (u, f, _, ch) = invert(cfg)?;
            let zetas = match zeta_points(cfg, u.dim)? {
                Some(z) => z,
                None if u.dim == 1 => {
                    let re = ch.xi0[0] * (ch.psi.psi(0.0) + 2.0);
                    let pts: Vec<Vec<C64>> = [-2.0, 0.0, 2.0].iter().map(|&y| vec![C64::new(re, y)]).collect();
                    cfg.zeta = Some(pts.iter().map(|p| format!("{}", p[0])).collect());
                    pts
                }
                None => return Err(config_err("two-variable roundtrip needs explicit `zeta` points")),
            };
            let mut rows = vec![];
            let mut worst = 0.0f64;
            for (z, r) in zetas.iter().zip(forward_batch(&u, &zetas, &ForwardOptions::default())) {
                let got = r?;
                let want = f.eval(z);
                let d = rel(got, want);
                worst = worst.max(d);
                rows.push(json!({ "zeta": z, "transform": got, "f": want, "delta": d }));
            }
            let passed = worst < tol;
            let body = json!({ "mode": "transform_of_inverse", "u": to_json(&u)?, "chain": ch, "points": rows, "max_delta": worst, "passed": passed });
            Ok((body, None, if passed { 0 } else { 3 }))
        }
        (None, Some(uv)) => {
            let u = hyperfunction(uv)?;
            let k = u.support.clone();
            let shift = u.growth_type().max(0.0);
            let ch = chain(cfg, &k, ProfileConfig { c0: DEFAULT_PROFILE.c0.max(shift + 0.5), ..DEFAULT_PROFILE })?;
            let f = TransformResult::new(&u).as_function();
            let v = inverse(&f, &k, &ch)?;
            let mut rows = vec![];
            let mut worst = 0.0f64;
            for (j, phi) in batteries(u.dim)?.iter().enumerate() {
                let (a, b) = (pairing(&v, phi)?, pairing(&u, phi)?);
                let d = rel(a, b);
                worst = worst.max(d);
                rows.push(json!({ "density": j, "inverse": a, "u": b, "delta": d }));
            }
            let passed = worst < tol;
            let body = json!({ "mode": "inverse_of_transform", "chain": ch, "pairings": rows, "max_delta": worst, "passed": passed });
            Ok((body, None, if passed { 0 } else { 3 }))
        }
        _ => Err(config_err("roundtrip needs exactly one of `f` and `u`")),
    }
}

fn operators(cfg: &JobConfig) -> Result<Vec<DiffOp>, CliError> {
    let list = cfg.p.clone().map(OneOrMany::into_vec).unwrap_or_default();
    if list.is_empty() {
        return Err(config_err("`P` is required"));
    }
    list.iter().map(|s| DiffOp::parse(s, None).map_err(CliError::from)).collect()
}

fn cmd_solve(cfg: &mut JobConfig) -> Result<Body, CliError> {
    let ops = operators(cfg)?;
    let [p] = &ops[..] else { return Err(config_err("solve takes a single operator")) };
    let f = hyperfunction(need(&cfg.f, "f", "solve")?)?;
    let k = match &cfg.k {
        Some(v) => support_set(v)?,
        None => {
            let (lo, _) = f.support.interval()?;
            if !lo.is_finite() {
                return Err(config_err("support of f is unbounded below; give `K`"));
            }
            let s = format!("[{lo},inf)");
            cfg.k = Some(Value::String(s.clone()));
            ClosedConicSet::from_interval_str(&s)?
        }
    };
    let prof = cfg.psi.map(|p| Profile::new(p.c0, p.c1, p.p)).transpose()?;
    let sol = solve(p, &f, &k, &SolveOptions { profile: prof, ..Default::default() })?;
    let worst = sol.max_residual();
    let passed = worst < cfg.tol();
    let (pairings, csv) = pairing_table(&sol.u, &batteries(sol.u.dim)?)?;
    let body = json!({
        "u": to_json(&sol.u)?,
        "roots": sol.roots,
        "chain": sol.chain,
        "solvability": sol.solvability,
        "residuals": sol.residuals,
        "max_residual": worst,
        "passed": passed,
        "pairings": pairings,
    });
    Ok((body, Some(csv), if passed { 0 } else { 3 }))
}

fn cmd_char(cfg: &mut JobConfig) -> Result<Body, CliError> {
    let ops = operators(cfg)?;
    let mesh = *cfg.mesh.get_or_insert(DEFAULT_MESH);
    let rep = char_infinity(&ops, mesh, cfg.char_tol)?;
    cfg.char_tol = Some(rep.tol);
    let mut buf = vec![];
    rep.write_csv(&mut buf)?;
    let flagged: Vec<&Vec<C64>> = rep.flagged().map(|s| &s.zeta).collect();
    let mut code = 0;
    let solvability = match &cfg.k {
        Some(v) => {
            let [p] = &ops[..] else { return Err(config_err("solvability check takes a single operator")) };
            let r = check_solvable(p, &support_set(v)?, &SolvableOptions { mesh, ..Default::default() })?;
            if !r.solvable {
                code = 4;
            }
            serde_json::to_value(r).unwrap()
        }
        None => Value::Null,
    };
    let body = json!({
        "n": rep.n,
        "samples": rep.samples.len(),
        "flagged_count": flagged.len(),
        "flagged": flagged,
        "solvability": solvability,
    });
    Ok((body, Some(String::from_utf8(buf).expect("csv is utf-8")), code))
}

fn pair(cfg: &mut JobConfig) -> Result<Body, CliError> {
    let u = hyperfunction(need(&cfg.u, "u", "pair")?)?;
    let phis = match &cfg.densities {
        Some(list) => list.iter().map(|s| density_spec(s)).collect::<Result<Vec<_>, _>>()?,
        None => batteries(u.dim)?,
    };
    for phi in &phis {
        if phi.dim() != u.dim {
            return Err(Error::DimensionMismatch { expected: u.dim, got: phi.dim() }.into());
        }
    }
    let (pairings, csv) = pairing_table(&u, &phis)?;
    Ok((json!({ "pairings": pairings }), Some(csv), 0))
}

fn cmd_verify(cfg: &mut JobConfig) -> Result<Body, CliError> {
    let suites: Vec<&verify::Suite> = match &cfg.suites {
        Some(names) => names.iter().map(|n| verify::find_suite(n)).collect::<Result<_, _>>()?,
        None => verify::SUITES.iter().collect(),
    };
    let reports: Vec<verify::SuiteReport> = suites.into_iter().map(verify::run).collect();
    for r in &reports {
        eprintln!("{:<13} criterion {:>2}  {}  {:.1}s", r.suite, r.criterion, if r.passed { "PASS" } else { "FAIL" }, r.seconds);
    }
    let passed = reports.iter().all(|r| r.passed);
    let mut buf = csv::Writer::from_writer(vec![]);
    let csv_err = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    buf.write_record(["suite", "check", "value", "tol", "passed"]).map_err(csv_err)?;
    for r in &reports {
        for c in &r.checks {
            buf.write_record([r.suite.clone(), c.name.clone(), format!("{:e}", c.value), format!("{:e}", c.tol), c.passed.to_string()]).map_err(csv_err)?;
        }
    }
    let csv = String::from_utf8(buf.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?).expect("csv is utf-8");
    Ok((json!({ "suites": reports, "passed": passed }), Some(csv), if passed { 0 } else { 1 }))
}
