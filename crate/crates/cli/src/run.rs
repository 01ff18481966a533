//! Task execution. Every task returns the JSON report and a text rendering;
//! work fans out over indices but results are assembled in index order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use mopuc_core::descriptor::{parse_system, System};
use mopuc_core::hermite_pade::{certify_all, default_depth};
use mopuc_core::relations::{christoffel_darboux, enumerate_paths, random_point_pairs, verify_all_at, verify_reversal};
use mopuc_core::report::Tally;
use mopuc_core::{IndexPair, LaurentMop, Scalar, Status, SzegoBridge, VerificationReport};

use crate::job::{InputError, JobSpec, Task};

pub const REPORT_VERSION: u32 = 1;

/// Monotone paths checked per Christoffel-Darboux target, at most.
const MAX_PATHS: usize = 24;

pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub failed: bool,
}

type Run<T> = Result<T, InputError>;

pub fn run<S: Scalar>(job: &JobSpec) -> Run<Outcome> {
    let system = parse_system::<S>(&job.system, "job.system")?;
    let (body, text, failed) = match job.task {
        Task::Compute => compute(job, &system)?,
        Task::Verify => verify(job, &system)?,
        Task::HermitePade => hermite_pade(job, &system)?,
        Task::SzegoBridge => szego_bridge(job, &system)?,
    };
    let mut report = json!({
        "report_version": REPORT_VERSION,
        "task": job.task.label(),
        "field": job.field.label(),
        "r": system.circle().r(),
        "seed": job.seed,
    });
    if let (Value::Object(head), Value::Object(rest)) = (&mut report, body) {
        head.extend(rest);
    }
    Ok(Outcome { report, text, failed })
}

fn scalar_or_null<S: Scalar>(v: mopuc_core::Result<S>) -> Run<Value> {
    match v {
        Ok(c) => Ok(c.to_json()),
        Err(e) if e.is_prerequisite() || matches!(e, mopuc_core::Error::IndexClash(_)) => Ok(Value::Null),
        Err(e) => Err(e.into()),
    }
}

fn compute<S: Scalar>(job: &JobSpec, system: &System<S>) -> Run<(Value, String, bool)> {
    let mop = LaurentMop::new(system.circle().clone());
    let r = mop.r();
    let indices = job.index_pairs(r)?;
    let rows: Vec<Value> = indices
        .par_iter()
        .map(|idx| -> Run<Value> {
            let mut v = mop.solve(idx)?.to_json();
            let mut rho = Vec::new();
            let mut sigma = Vec::new();
            let mut gamma = serde_json::Map::new();
            let mut eta = serde_json::Map::new();
            for j in 0..r {
                rho.push(if mop.rho_defined(idx, j) { scalar_or_null(mop.rho(idx, j))? } else { Value::Null });
                sigma.push(if mop.sigma_defined(idx, j) { scalar_or_null(mop.sigma(idx, j))? } else { Value::Null });
                for l in 0..r {
                    if l != j {
                        gamma.insert(format!("{}{}", j + 1, l + 1), scalar_or_null(mop.gamma(idx, j, l))?);
                        eta.insert(format!("{}{}", j + 1, l + 1), scalar_or_null(mop.eta(idx, j, l))?);
                    }
                }
            }
            v["rho"] = Value::Array(rho);
            v["sigma"] = Value::Array(sigma);
            v["gamma"] = Value::Object(gamma);
            v["eta"] = Value::Object(eta);
            Ok(v)
        })
        .collect::<Run<_>>()?;
    let mut text = format!("{:<20} {:<7} {:<24} {:<24} {}\n", "index", "normal", "det T", "alpha", "beta");
    for (idx, row) in indices.iter().zip(&rows) {
        let show = |k: &str| if row[k].is_null() { "-".to_string() } else { render_scalar(&row[k]) };
        text.push_str(&format!(
            "{:<20} {:<7} {:<24} {:<24} {}\n",
            idx.to_string(),
            row["normal"],
            show("det_T"),
            show("alpha"),
            show("beta")
        ));
    }
    Ok((json!({ "results": rows }), text, false))
}

/// Compact text for a serialized scalar: `3/2`, `-1`, `1/2 + (1/3)i`.
fn render_scalar(v: &Value) -> String {
    let part = |x: &Value| -> (String, bool) {
        match x {
            Value::String(s) => {
                let s = s.strip_suffix("/1").unwrap_or(s).to_string();
                let zero = s == "0";
                (s, zero)
            }
            Value::Number(n) => (n.to_string(), n.as_f64() == Some(0.0)),
            other => (other.to_string(), false),
        }
    };
    let ((re, _), (im, im_zero)) = (part(&v["re"]), part(&v["im"]));
    if im_zero {
        re
    } else {
        format!("{re} + ({im})i")
    }
}

fn verify_one<S: Scalar>(
    mop: &LaurentMop<S>,
    reversed: &LaurentMop<S>,
    idx: &IndexPair,
    points: &[(S, S)],
) -> Run<Vec<VerificationReport>> {
    let mut out = verify_all_at(mop, idx)?;
    out.extend(verify_reversal(mop, reversed, idx)?);
    for path in enumerate_paths(&idx.m, &idx.n)?.into_iter().take(MAX_PATHS) {
        for (z, xi) in points {
            out.extend(christoffel_darboux(mop, &path, z, xi)?);
        }
    }
    Ok(out)
}

fn verify<S: Scalar>(job: &JobSpec, system: &System<S>) -> Run<(Value, String, bool)> {
    let mop = LaurentMop::new(system.circle().clone());
    let reversed = LaurentMop::new(system.circle().sharp());
    let indices = job.index_pairs(mop.r())?;
    let points = random_point_pairs::<S>(job.seed, job.cd_points);
    let reports: Vec<VerificationReport> = indices
        .par_iter()
        .map(|idx| verify_one(&mop, &reversed, idx, &points))
        .collect::<Run<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(report_body(&reports, json!({})))
}

/// Counts per identity, then every failure verbatim.
fn render_reports(reports: &[VerificationReport]) -> String {
    let mut counts: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
    for rep in reports {
        let slot = match rep.status {
            Status::Pass => 0,
            Status::Skip => 1,
            Status::Fail => 2,
        };
        counts.entry(rep.identity.as_str()).or_default()[slot] += 1;
    }
    let mut text = format!("{:<52} {:>6} {:>6} {:>6}\n", "identity", "pass", "skip", "fail");
    for (identity, [p, s, f]) in &counts {
        text.push_str(&format!("{identity:<52} {p:>6} {s:>6} {f:>6}\n"));
    }
    let failures: Vec<_> = reports.iter().filter(|r| r.failed()).collect();
    if !failures.is_empty() {
        text.push_str("\nfailures:\n");
        for rep in failures {
            text.push_str(&rep.summary_line());
            text.push('\n');
        }
    }
    text
}

fn report_body(reports: &[VerificationReport], extra: Value) -> (Value, String, bool) {
    let tally = Tally::of(reports);
    let failed = reports.iter().any(VerificationReport::failed);
    let mut body = json!({
        "summary": { "pass": tally.pass, "skip": tally.skip, "fail": tally.fail },
        "reports": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
    });
    if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
        b.extend(e);
    }
    (body, render_reports(reports), failed)
}

fn hermite_pade<S: Scalar>(job: &JobSpec, system: &System<S>) -> Run<(Value, String, bool)> {
    let mop = LaurentMop::new(system.circle().clone());
    let indices = job.index_pairs(mop.r())?;
    for idx in &indices {
        if !idx.n_nonnegative() || !idx.m_nonnegative() {
            return Err(InputError(format!("job.indices: Hermite-Pade problems need n, m >= 0, got {idx}")));
        }
        if let Some(d) = job.depth {
            let need = idx.n.iter().chain(&idx.m).map(|&x| x + 1).max().unwrap_or(1) as usize;
            if d < need {
                return Err(InputError(format!("job.depth: {d} is below the minimum {need} required by {idx}")));
            }
        }
    }
    let rows: Vec<(Value, String, bool)> = indices
        .par_iter()
        .map(|idx| -> Run<(Value, String, bool)> {
            let depth = job.depth.unwrap_or_else(|| default_depth(idx));
            if !mop.is_normal(idx)? {
                let v = json!({ "index": idx.to_string(), "normal": false, "status": "skip" });
                return Ok((v, format!("{:<20} skip (not normal)\n", idx.to_string()), false));
            }
            let certs = certify_all(&mop, idx, depth)?;
            let pass = certs.iter().all(|c| c.pass());
            let mut line = format!("{:<20} depth {depth:<3}", idx.to_string());
            for c in &certs {
                line.push_str(&format!(" {}:{}", c.kind.label(), if c.pass() { "pass" } else { "FAIL" }));
            }
            line.push('\n');
            let v = json!({
                "index": idx.to_string(),
                "normal": true,
                "status": if pass { "pass" } else { "fail" },
                "certificates": certs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            });
            Ok((v, line, !pass))
        })
        .collect::<Run<_>>()?;
    let failed = rows.iter().any(|r| r.2);
    let text = rows.iter().map(|r| r.1.as_str()).collect();
    Ok((json!({ "results": rows.into_iter().map(|r| r.0).collect::<Vec<_>>() }), text, failed))
}

fn szego_bridge<S: Scalar>(job: &JobSpec, system: &System<S>) -> Run<(Value, String, bool)> {
    let circle = system.circle().clone();
    if !circle.symmetric() {
        return Err(InputError("job.system: the Szego bridge needs every functional symmetric (c_k = c_-k)".into()));
    }
    let r = circle.r();
    let bridge = SzegoBridge::new(circle)?;
    let ns = job.multi_indices(r)?;
    let per_n: Vec<(Vec<Value>, Vec<VerificationReport>)> = ns
        .par_iter()
        .map(|n| -> Run<(Vec<Value>, Vec<VerificationReport>)> {
            let mut coeffs = Vec::new();
            let mut reports = bridge.polynomial_relations(n)?;
            for j in 0..r {
                let (a, b) = match bridge.real().nn_coefficients(n, j) {
                    Ok(c) => (c.a.to_json(), c.b.to_json()),
                    Err(e) if e.is_prerequisite() => (Value::Null, Value::Null),
                    Err(e) => return Err(e.into()),
                };
                coeffs.push(json!({ "n": n, "j": j + 1, "a": a, "b": b }));
                reports.extend(bridge.geronimus(n, j)?);
            }
            Ok((coeffs, reports))
        })
        .collect::<Run<_>>()?;
    let mut coefficients = Vec::new();
    let mut reports = Vec::new();
    for (c, rep) in per_n {
        coefficients.extend(c);
        reports.extend(rep);
    }
    if r == 1 {
        let depth = job.depth.unwrap_or_else(|| ns.iter().map(|n| n[0]).max().unwrap_or(0) as usize);
        reports.extend(bridge.classical_geronimus(depth)?);
    }
    let mut table = format!("{:<14} {:>2}  {:<22} {}\n", "n", "j", "a", "b");
    for c in &coefficients {
        let show = |v: &Value| if v.is_null() { "-".to_string() } else { render_scalar(v) };
        let n: Vec<String> = c["n"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
        table.push_str(&format!(
            "{:<14} {:>2}  {:<22} {}\n",
            format!("({})", n.join(",")),
            c["j"],
            show(&c["a"]),
            show(&c["b"])
        ));
    }
    let (body, text, failed) = report_body(&reports, json!({ "nn_coefficients": coefficients }));
    Ok((body, format!("{table}\n{text}"), failed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::parse_job;
    use mopuc_core::GaussianRational;

    #[test]
    fn failure_sets_flag() {
        let pass = VerificationReport::skip("x", None, "", "r".into());
        let mut fail = pass.clone();
        fail.status = Status::Fail;
        assert!(!report_body(&[pass.clone()], json!({})).2);
        assert!(report_body(&[pass, fail], json!({})).2);
    }

    #[test]
    fn compute_geometric_row() {
        let job = parse_job(
            r#"{"system": {"bundled": "geometric(1/2)"}, "task": "compute",
                "indices": {"list": [{"n": [0], "m": [1]}]}}"#,
        )
        .unwrap();
        let out = run::<GaussianRational>(&job).unwrap();
        let row = &out.report["results"][0];
        assert_eq!(row["alpha"], json!({"re": "-1/2", "im": "0/1"}));
        assert_eq!(row["normal"], json!(true));
        assert!(out.text.contains("-1/2"));
    }

    #[test]
    fn scalar_rendering() {
        assert_eq!(render_scalar(&json!({"re": "3/1", "im": "0/1"})), "3");
        assert_eq!(render_scalar(&json!({"re": "1/2", "im": "-1/3"})), "1/2 + (-1/3)i");
        assert_eq!(render_scalar(&json!({"re": 0.5, "im": 0.0})), "0.5");
    }
}
