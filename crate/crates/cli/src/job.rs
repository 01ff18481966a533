//! Job files: parsing and validation.
//!
//! ```json
//! {
//!   "system": {"bundled": "lebesgue"} | {"functionals": [...]} | [...],
//!   "field": "exact" | "float",
//!   "task": "compute" | "verify" | "hermite-pade" | "szego-bridge",
//!   "indices": {"box": {"n_max": 3, "m_max": 3}} | {"list": [{"n": [1], "m": [0]}]},
//!   "depth": 8,
//!   "output": "out",
//!   "seed": 7,
//!   "cd_points": 4
//! }
//! ```

use std::fmt;
use std::path::PathBuf;

use serde_json::{Map, Value};

use mopuc_core::index::{enumerate_box, enumerate_multi};
use mopuc_core::IndexPair;

/// Malformed or inconsistent input; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<mopuc_core::Error> for InputError {
    fn from(e: mopuc_core::Error) -> Self {
        InputError(e.to_string())
    }
}

fn bad(path: &str, msg: impl fmt::Display) -> InputError {
    InputError(format!("{path}: {msg}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Exact,
    Float,
}

impl Field {
    pub fn label(self) -> &'static str {
        match self {
            Field::Exact => "exact",
            Field::Float => "float",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Compute,
    Verify,
    HermitePade,
    SzegoBridge,
}

impl Task {
    pub fn label(self) -> &'static str {
        match self {
            Task::Compute => "compute",
            Task::Verify => "verify",
            Task::HermitePade => "hermite-pade",
            Task::SzegoBridge => "szego-bridge",
        }
    }
}

/// Index set as written in the job. Box bounds apply componentwise; the
/// lower bounds default to 0.
#[derive(Clone, Debug, PartialEq)]
pub enum IndexSpec {
    Box { n_min: i64, n_max: i64, m_min: i64, m_max: i64, max_size: Option<i64> },
    List(Vec<(Vec<i64>, Option<Vec<i64>>)>),
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub system: Value,
    pub field: Field,
    pub task: Task,
    pub indices: IndexSpec,
    pub depth: Option<usize>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    /// Random point pairs per Christoffel-Darboux path.
    pub cd_points: usize,
}

const FIELDS: [&str; 8] = ["system", "field", "task", "indices", "depth", "output", "seed", "cd_points"];

fn int(v: &Value, path: &str) -> Result<i64, InputError> {
    v.as_i64().ok_or_else(|| bad(path, "expected an integer"))
}

fn nonneg(v: &Value, path: &str) -> Result<u64, InputError> {
    v.as_u64().ok_or_else(|| bad(path, "expected a nonnegative integer"))
}

fn int_list(v: &Value, path: &str) -> Result<Vec<i64>, InputError> {
    let a = v.as_array().ok_or_else(|| bad(path, "expected an array of integers"))?;
    a.iter().enumerate().map(|(i, x)| int(x, &format!("{path}[{i}]"))).collect()
}

fn parse_indices(v: &Value) -> Result<IndexSpec, InputError> {
    let path = "job.indices";
    let obj = v.as_object().ok_or_else(|| bad(path, "expected {\"box\": ...} or {\"list\": [...]}"))?;
    match (obj.get("box"), obj.get("list")) {
        (Some(b), None) => {
            let bp = "job.indices.box";
            let b = b.as_object().ok_or_else(|| bad(bp, "expected an object"))?;
            for k in b.keys() {
                if !["n_min", "n_max", "m_min", "m_max", "max_size"].contains(&k.as_str()) {
                    return Err(bad(bp, format!("unknown field `{k}`")));
                }
            }
            let get = |k: &str, default: Option<i64>| -> Result<i64, InputError> {
                match b.get(k) {
                    Some(v) => int(v, &format!("{bp}.{k}")),
                    None => default.ok_or_else(|| bad(bp, format!("missing field `{k}`"))),
                }
            };
            let n_max = get("n_max", None)?;
            let spec = IndexSpec::Box {
                n_min: get("n_min", Some(0))?,
                n_max,
                m_min: get("m_min", Some(0))?,
                m_max: get("m_max", Some(0))?,
                max_size: b.get("max_size").map(|v| int(v, &format!("{bp}.max_size"))).transpose()?,
            };
            Ok(spec)
        }
        (None, Some(l)) => {
            let lp = "job.indices.list";
            let items = l.as_array().ok_or_else(|| bad(lp, "expected an array"))?;
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let ip = format!("{lp}[{i}]");
                let o = item.as_object().ok_or_else(|| bad(&ip, "expected {\"n\": [...], \"m\": [...]}"))?;
                let n = int_list(o.get("n").ok_or_else(|| bad(&ip, "missing field `n`"))?, &format!("{ip}.n"))?;
                let m = o.get("m").map(|m| int_list(m, &format!("{ip}.m"))).transpose()?;
                out.push((n, m));
            }
            Ok(IndexSpec::List(out))
        }
        _ => Err(bad(path, "expected exactly one of `box` or `list`")),
    }
}

/// Parses a job from its JSON text. Syntax errors report line and column.
pub fn parse_job(text: &str) -> Result<JobSpec, InputError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| InputError(format!("job file is not valid JSON (line {}, column {}): {e}", e.line(), e.column())))?;
    let obj: &Map<String, Value> = v.as_object().ok_or_else(|| bad("job", "expected an object"))?;
    for k in obj.keys() {
        if !FIELDS.contains(&k.as_str()) {
            return Err(bad("job", format!("unknown field `{k}`")));
        }
    }
    let system = obj.get("system").cloned().ok_or_else(|| bad("job", "missing field `system`"))?;
    let field = match obj.get("field").map(|f| f.as_str()) {
        None | Some(Some("exact")) => Field::Exact,
        Some(Some("float")) => Field::Float,
        _ => return Err(bad("job.field", "expected \"exact\" or \"float\"")),
    };
    let task = match obj.get("task").and_then(Value::as_str) {
        Some("compute") => Task::Compute,
        Some("verify") => Task::Verify,
        Some("hermite-pade") => Task::HermitePade,
        Some("szego-bridge") => Task::SzegoBridge,
        Some(other) => return Err(bad("job.task", format!("unknown task `{other}`"))),
        None => return Err(bad("job", "missing string field `task`")),
    };
    let indices = parse_indices(obj.get("indices").ok_or_else(|| bad("job", "missing field `indices`"))?)?;
    let depth = obj.get("depth").map(|d| nonneg(d, "job.depth").map(|d| d as usize)).transpose()?;
    let output = match obj.get("output") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => return Err(bad("job.output", "expected a path string")),
    };
    let seed = obj.get("seed").map(|s| nonneg(s, "job.seed")).transpose()?.unwrap_or(0);
    let cd_points = obj.get("cd_points").map(|c| nonneg(c, "job.cd_points")).transpose()?.unwrap_or(4) as usize;
    Ok(JobSpec { system, field, task, indices, depth, output, seed, cd_points })
}

impl JobSpec {
    /// The `(n; m)` pairs of the job for a system of `r` functionals, sorted.
    pub fn index_pairs(&self, r: usize) -> Result<Vec<IndexPair>, InputError> {
        let out = match &self.indices {
            IndexSpec::Box { n_min, n_max, m_min, m_max, max_size } => {
                let (lo, hi) = ((*n_min).min(*m_min), (*n_max).max(*m_max));
                let size = max_size.unwrap_or(i64::MAX / 4);
                enumerate_box(r, lo, hi, size)
                    .into_iter()
                    .filter(|idx| {
                        idx.n.iter().all(|x| (n_min..=n_max).contains(&x))
                            && idx.m.iter().all(|x| (m_min..=m_max).contains(&x))
                    })
                    .collect()
            }
            IndexSpec::List(items) => {
                let mut out = Vec::with_capacity(items.len());
                for (i, (n, m)) in items.iter().enumerate() {
                    let path = format!("job.indices.list[{i}]");
                    let m = m.clone().ok_or_else(|| bad(&path, "missing field `m`"))?;
                    if n.len() != r || m.len() != r {
                        return Err(bad(&path, format!("expected {r} components in n and m")));
                    }
                    out.push(IndexPair::new(n.clone(), m).map_err(|e| bad(&path, e))?);
                }
                out
            }
        };
        if out.is_empty() {
            return Err(bad("job.indices", "the index set is empty"));
        }
        Ok(out)
    }

    /// Real-line multi-indices `n >= 0` for the bridge task; a box reads as
    /// `0 <= n_j <= n_max` with `|n| <= max_size` (default `n_max`).
    pub fn multi_indices(&self, r: usize) -> Result<Vec<Vec<i64>>, InputError> {
        let out = match &self.indices {
            IndexSpec::Box { n_max, max_size, .. } => {
                if *n_max < 0 {
                    return Err(bad("job.indices.box.n_max", "must be nonnegative"));
                }
                enumerate_multi(r, *n_max, max_size.unwrap_or(*n_max))
            }
            IndexSpec::List(items) => {
                let mut out = Vec::with_capacity(items.len());
                for (i, (n, _)) in items.iter().enumerate() {
                    let path = format!("job.indices.list[{i}].n");
                    if n.len() != r || n.iter().any(|&x| x < 0) {
                        return Err(bad(&path, format!("expected {r} nonnegative components")));
                    }
                    out.push(n.clone());
                }
                out
            }
        };
        if out.is_empty() {
            return Err(bad("job.indices", "the index set is empty"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(extra: &str) -> String {
        format!(r#"{{"system": {{"bundled": "lebesgue"}}, "task": "verify", "indices": {{"box": {{"n_max": 2, "m_max": 1}}}}{extra}}}"#)
    }

    #[test]
    fn defaults() {
        let j = parse_job(&job("")).unwrap();
        assert_eq!((j.field, j.task, j.seed, j.cd_points, j.depth), (Field::Exact, Task::Verify, 0, 4, None));
        let idx = j.index_pairs(1).unwrap();
        assert_eq!(idx.len(), 6);
        assert!(idx.iter().all(|i| i.n[0] >= 0 && i.m[0] <= 1));
    }

    #[test]
    fn diagnostics() {
        let e = parse_job("{\n  \"task\": \n}").unwrap_err();
        assert!(e.0.contains("line 3"), "{e}");
        assert!(parse_job(&job(r#", "depth": -1"#)).unwrap_err().0.contains("job.depth"));
        assert!(parse_job(&job(r#", "colour": 1"#)).unwrap_err().0.contains("colour"));
        assert!(parse_job(&job(r#", "field": "modular""#)).unwrap_err().0.contains("job.field"));
        let list = r#"{"system": [], "task": "compute", "indices": {"list": [{"n": [0, -1], "m": [0, 0]}]}}"#;
        let e = parse_job(list).unwrap().index_pairs(2).unwrap_err();
        assert!(e.0.contains("job.indices.list[0]"), "{e}");
    }

    #[test]
    fn empty_box_is_rejected() {
        let j = parse_job(r#"{"system": [], "task": "compute", "indices": {"box": {"n_min": 2, "n_max": 1}}}"#).unwrap();
        assert!(j.index_pairs(1).is_err());
    }

    #[test]
    fn bridge_multi_indices() {
        let j = parse_job(r#"{"system": [], "task": "szego-bridge", "indices": {"box": {"n_max": 3}}}"#).unwrap();
        assert_eq!(j.multi_indices(1).unwrap(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(j.multi_indices(2).unwrap().len(), 10);
    }
}
