//! JSON descriptors for functionals and systems.
//!
//! Circle functionals: `{"kind":"atoms","atoms":[{"t":"p/q"|"minus_one","weight":s}]}`,
//! `{"kind":"moments","table":{"k":s,...},"default":"zero"|{"geometric":"p/q"}|"error"}`
//! and `{"kind":"lebesgue"}`. Real functionals:
//! `{"kind":"real_atoms","atoms":[{"x":"p/q","weight":s}]}`.
//!
//! A moment table may also declare `"hermitian": true` or `"symmetric": true`;
//! a declaration the table does not satisfy is rejected.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::moments::{
    szego_map, CircleAtom, CirclePoint, FunctionalSystem, LaurentFunctional, RealFunctional, RealSystem,
    TableDefault,
};
use crate::scalar::{parse_rational, scalar_from_json, GaussianRational, Scalar};
use crate::systems;

/// A parsed functional, on the circle or on the line.
#[derive(Clone, Debug)]
pub enum Functional<S> {
    Circle(LaurentFunctional<S>),
    Real(RealFunctional<S>),
}

/// A parsed system. Real systems also carry their Szego image, which is what
/// the circle-side machinery runs on.
#[derive(Clone, Debug)]
pub enum System<S> {
    Circle(FunctionalSystem<S>),
    Real { real: RealSystem<S>, circle: FunctionalSystem<S> },
}

impl<S: Scalar> System<S> {
    pub fn circle(&self) -> &FunctionalSystem<S> {
        match self {
            System::Circle(s) => s,
            System::Real { circle, .. } => circle,
        }
    }

    pub fn real(&self) -> Option<&RealSystem<S>> {
        match self {
            System::Circle(_) => None,
            System::Real { real, .. } => Some(real),
        }
    }
}

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("{path}: {msg}"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(path, format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn rational_str(v: &Value, path: &str) -> Result<GaussianRational> {
    let s = v.as_str().ok_or_else(|| bad(path, "expected a \"p/q\" string"))?;
    parse_rational(s).map(GaussianRational::real).map_err(|e| bad(path, e))
}

fn scalar<S: Scalar>(v: &Value, path: &str) -> Result<S> {
    scalar_from_json(v).map_err(|e| bad(path, e))
}

fn flag(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<bool>> {
    match obj.get(key) {
        None => Ok(None),
        Some(Value::Bool(b)) => Ok(Some(*b)),
        Some(_) => Err(bad(&format!("{path}.{key}"), "expected a boolean")),
    }
}

fn circle_atoms<S: Scalar>(obj: &Map<String, Value>, path: &str) -> Result<LaurentFunctional<S>> {
    let list = array(field(obj, "atoms", path)?, &format!("{path}.atoms"))?;
    let mut atoms = Vec::with_capacity(list.len());
    for (i, a) in list.iter().enumerate() {
        let p = format!("{path}.atoms[{i}]");
        let ao = object(a, &p)?;
        let point = match field(ao, "t", &p)? {
            Value::String(s) if s == "minus_one" => CirclePoint::MinusOne,
            t @ Value::String(_) => CirclePoint::Rational(rational_str(t, &format!("{p}.t"))?.re),
            Value::Object(o) if o.contains_key("angle") => {
                let theta = o["angle"].as_f64().ok_or_else(|| bad(&format!("{p}.t.angle"), "expected a number"))?;
                CirclePoint::Angle(theta)
            }
            _ => return Err(bad(&format!("{p}.t"), "expected \"p/q\", \"minus_one\" or {\"angle\": x}")),
        };
        let weight = scalar(field(ao, "weight", &p)?, &format!("{p}.weight"))?;
        atoms.push(CircleAtom::new(point, weight));
    }
    LaurentFunctional::from_atoms(&atoms).map_err(|e| bad(path, e))
}

fn moment_table<S: Scalar>(obj: &Map<String, Value>, path: &str) -> Result<LaurentFunctional<S>> {
    let tp = format!("{path}.table");
    let mut table = BTreeMap::new();
    for (k, v) in object(field(obj, "table", path)?, &tp)? {
        let idx: i64 = k.trim().parse().map_err(|_| bad(&tp, format!("key `{k}` is not an integer")))?;
        table.insert(idx, scalar(v, &format!("{tp}.{k}"))?);
    }
    let dp = format!("{path}.default");
    let default = match obj.get("default") {
        None => TableDefault::Error,
        Some(Value::String(s)) if s == "zero" => TableDefault::Zero,
        Some(Value::String(s)) if s == "error" => TableDefault::Error,
        Some(Value::Object(o)) if o.contains_key("geometric") => {
            TableDefault::Geometric(scalar(&o["geometric"], &format!("{dp}.geometric"))?)
        }
        Some(_) => return Err(bad(&dp, "expected \"zero\", \"error\" or {\"geometric\": \"p/q\"}")),
    };
    let l = LaurentFunctional::from_moment_table(table, default);
    if flag(obj, "hermitian", path)? == Some(true) && !l.hermitian() {
        return Err(bad(path, "table is declared hermitian but some c_{-k} != conj(c_k)"));
    }
    if flag(obj, "symmetric", path)? == Some(true) && !l.symmetric() {
        return Err(bad(path, "table is declared symmetric but some c_{-k} != c_k"));
    }
    Ok(l)
}

fn real_atoms<S: Scalar>(obj: &Map<String, Value>, path: &str) -> Result<RealFunctional<S>> {
    let list = array(field(obj, "atoms", path)?, &format!("{path}.atoms"))?;
    let mut atoms = Vec::with_capacity(list.len());
    for (i, a) in list.iter().enumerate() {
        let p = format!("{path}.atoms[{i}]");
        let ao = object(a, &p)?;
        let x = S::from_exact(&rational_str(field(ao, "x", &p)?, &format!("{p}.x"))?);
        let weight = scalar(field(ao, "weight", &p)?, &format!("{p}.weight"))?;
        atoms.push((x, weight));
    }
    RealFunctional::from_atoms(atoms).map_err(|e| bad(path, e))
}

/// Parses one functional descriptor; `path` prefixes error messages.
pub fn parse_functional<S: Scalar>(v: &Value, path: &str) -> Result<Functional<S>> {
    let obj = object(v, path)?;
    let kind = field(obj, "kind", path)?.as_str().ok_or_else(|| bad(&format!("{path}.kind"), "expected a string"))?;
    match kind {
        "atoms" => circle_atoms(obj, path).map(Functional::Circle),
        "moments" => moment_table(obj, path).map(Functional::Circle),
        "lebesgue" => Ok(Functional::Circle(LaurentFunctional::lebesgue())),
        "real_atoms" => real_atoms(obj, path).map(Functional::Real),
        other => Err(bad(&format!("{path}.kind"), format!("unknown kind `{other}`"))),
    }
}

/// Parses a system: `{"bundled": name}`, `{"functionals": [...]}` or a bare
/// array of functional descriptors. Circle and real functionals cannot mix.
pub fn parse_system<S: Scalar>(v: &Value, path: &str) -> Result<System<S>> {
    let list = match v {
        Value::Array(list) => list,
        Value::Object(obj) => {
            if let Some(name) = obj.get("bundled") {
                let name = name.as_str().ok_or_else(|| bad(&format!("{path}.bundled"), "expected a string"))?;
                return systems::by_name(name)?
                    .map(System::Circle)
                    .ok_or_else(|| bad(&format!("{path}.bundled"), format!("no bundled system named `{name}`")));
            }
            array(field(obj, "functionals", path)?, &format!("{path}.functionals"))?
        }
        _ => return Err(bad(path, "expected an object or an array")),
    };
    if list.is_empty() {
        return Err(bad(path, "a system needs at least one functional"));
    }
    let mut circle = Vec::new();
    let mut real = Vec::new();
    for (i, f) in list.iter().enumerate() {
        match parse_functional::<S>(f, &format!("{path}[{i}]"))? {
            Functional::Circle(l) => circle.push(l),
            Functional::Real(m) => real.push(m),
        }
    }
    match (circle.is_empty(), real.is_empty()) {
        (false, true) => Ok(System::Circle(FunctionalSystem::new(circle)?)),
        (true, false) => {
            let image = FunctionalSystem::new(real.iter().map(szego_map).collect())?;
            Ok(System::Real { real: RealSystem::new(real)?, circle: image })
        }
        _ => Err(bad(path, "circle and real functionals cannot be mixed in one system")),
    }
}
