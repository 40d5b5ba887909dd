//! JSON formats. Numbers travel as strings (`"p/q"` for rationals) so files
//! stay exact; objects are keyed by variable name.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};
use serde_json::{json, Map, Value};

use crate::certificate::{Certificate, ConvexCombination};
use crate::envelope::{BooleanTerm, GraphFunction, GraphHull, HullReport, TruthTable, WitnessValue};
use crate::error::{Error, Result};
use crate::model::{Constraint, ConstraintSystem, Sense, VarKind};
use crate::rect::{Base, Rect, RectSet};
use crate::scalar::{Scalar, Q};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn num<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => T::parse_text(s).map_err(|e| parse_err(e.to_string())),
        Value::Number(n) => T::parse_text(&n.to_string()).map_err(|e| parse_err(e.to_string())),
        other => Err(parse_err(format!("expected a number, found {other}"))),
    }
}

pub fn nums<T: Scalar>(v: &Value) -> Result<Vec<T>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("expected an array of numbers, found {v}")))?
        .iter()
        .map(num)
        .collect()
}

pub fn text<T: Scalar>(v: &T) -> Value {
    Value::String(v.to_text())
}

pub fn texts<T: Scalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(text).collect())
}

/// Parses `"0.5,0.7,1/5"` (commas and/or whitespace).
pub fn parse_point<T: Scalar>(s: &str) -> Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| T::parse_text(p).map_err(|e| parse_err(e.to_string())))
        .collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?
        .as_str()
        .ok_or_else(|| parse_err(format!("field {key:?} must be a string")))
}

// ------------------------------------------------------------------- System

pub fn system_to_json<T: Scalar>(sys: &ConstraintSystem<T>) -> Value {
    let names = sys.names();
    let mut integrality = Map::new();
    let mut bounds = Map::new();
    for v in &sys.vars {
        integrality.insert(v.name.clone(), Value::String(v.kind.name().into()));
        let b = |x: &Option<T>| x.as_ref().map_or(Value::Null, text);
        bounds.insert(v.name.clone(), json!([b(&v.lower), b(&v.upper)]));
    }
    let constraints: Vec<Value> = sys
        .constraints
        .iter()
        .map(|c| match c {
            Constraint::Linear { coeffs, sense, rhs } => {
                let mut m = Map::new();
                for (v, a) in coeffs {
                    m.insert(names[*v].clone(), text(a));
                }
                json!({"kind": "linear", "coeffs": m, "sense": sense.symbol(), "rhs": text(rhs)})
            }
            Constraint::Product { i, j, k } => {
                json!({"kind": "product", "i": names[*i], "j": names[*j], "k": names[*k]})
            }
            Constraint::Ball {
                vars,
                center,
                radius,
                sense,
            } => json!({
                "kind": "ball",
                "vars": vars.iter().map(|&v| names[v].clone()).collect::<Vec<_>>(),
                "center": texts(center),
                "radius": text(radius),
                "sense": sense.symbol(),
            }),
        })
        .collect();
    json!({
        "variables": names,
        "integrality": integrality,
        "bounds": bounds,
        "constraints": constraints,
    })
}

pub fn system_from_json<T: Scalar>(v: &Value) -> Result<ConstraintSystem<T>> {
    let names = field(v, "variables")?
        .as_array()
        .ok_or_else(|| parse_err("\"variables\" must be an array"))?;
    let mut sys = ConstraintSystem::new();
    for n in names {
        let name = n.as_str().ok_or_else(|| parse_err("variable names must be strings"))?;
        if sys.var_index(name).is_some() {
            return Err(parse_err(format!("variable {name:?} declared twice")));
        }
        let kind = match v.get("integrality").and_then(|m| m.get(name)) {
            None => VarKind::Continuous,
            Some(k) => k
                .as_str()
                .and_then(VarKind::from_name)
                .ok_or_else(|| parse_err(format!("bad integrality for {name:?}: {k}")))?,
        };
        let idx = sys.add_var(name, kind);
        if let Some(b) = v.get("bounds").and_then(|m| m.get(name)) {
            let pair = b
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| parse_err(format!("bounds of {name:?} must be [lower, upper]")))?;
            let opt = |x: &Value| if x.is_null() { Ok(None) } else { num(x).map(Some) };
            sys.set_bounds(idx, opt(&pair[0])?, opt(&pair[1])?);
        }
    }
    if let Some(Value::Object(m)) = v.get("integrality") {
        if let Some(k) = m.keys().find(|k| sys.var_index(k).is_none()) {
            return Err(Error::UnknownVariable(k.clone()));
        }
    }
    let var = |name: &Value| -> Result<usize> {
        let s = name
            .as_str()
            .ok_or_else(|| parse_err("variable references must be strings"))?;
        sys.var_index(s).ok_or_else(|| Error::UnknownVariable(s.to_string()))
    };
    let sense = |c: &Value| -> Result<Sense> {
        let s = str_field(c, "sense")?;
        Sense::from_symbol(s).ok_or_else(|| parse_err(format!("unknown sense {s:?}")))
    };
    let mut constraints = Vec::new();
    for c in field(v, "constraints")?
        .as_array()
        .ok_or_else(|| parse_err("\"constraints\" must be an array"))?
    {
        let parsed = match str_field(c, "kind")? {
            "linear" => {
                let mut coeffs = field(c, "coeffs")?
                    .as_object()
                    .ok_or_else(|| parse_err("\"coeffs\" must be an object"))?
                    .iter()
                    .map(|(k, a)| Ok((var(&Value::String(k.clone()))?, num(a)?)))
                    .collect::<Result<Vec<_>>>()?;
                coeffs.sort_by_key(|(v, _)| *v);
                Constraint::Linear {
                    coeffs,
                    sense: sense(c)?,
                    rhs: num(field(c, "rhs")?)?,
                }
            }
            "product" => Constraint::Product {
                i: var(field(c, "i")?)?,
                j: var(field(c, "j")?)?,
                k: var(field(c, "k")?)?,
            },
            "ball" => Constraint::Ball {
                vars: field(c, "vars")?
                    .as_array()
                    .ok_or_else(|| parse_err("\"vars\" must be an array"))?
                    .iter()
                    .map(var)
                    .collect::<Result<_>>()?,
                center: nums(field(c, "center")?)?,
                radius: num(field(c, "radius")?)?,
                sense: sense(c)?,
            },
            other => return Err(parse_err(format!("unknown constraint kind {other:?}"))),
        };
        constraints.push(parsed);
    }
    for c in constraints {
        sys.add(c)?;
    }
    Ok(sys)
}

// -------------------------------------------------------------- Certificate

fn rects_to_json<T: Scalar>(s: &RectSet<T>) -> Value {
    Value::Array(
        s.rects()
            .iter()
            .map(|r| json!([text(&r.a), text(&r.b), text(&r.c)]))
            .collect(),
    )
}

fn family_to_json<T: Scalar>(names: &[String], sets: &[RectSet<T>]) -> Value {
    let mut m = Map::new();
    for (n, s) in names.iter().zip(sets) {
        m.insert(n.clone(), rects_to_json(s));
    }
    Value::Object(m)
}

fn family_from_json<T: Scalar>(names: &[String], base: Base, v: &Value) -> Result<Vec<RectSet<T>>> {
    let m = v
        .as_object()
        .ok_or_else(|| parse_err("set family must be an object keyed by variable"))?;
    if let Some(k) = m.keys().find(|k| !names.contains(k)) {
        return Err(Error::UnknownVariable(k.clone()));
    }
    names
        .iter()
        .map(|n| match m.get(n) {
            None => Ok(RectSet::empty(base)),
            Some(list) => {
                let rects = list
                    .as_array()
                    .ok_or_else(|| parse_err(format!("sets of {n:?} must be an array")))?
                    .iter()
                    .map(|r| {
                        let t: Vec<T> = nums(r)?;
                        match t.as_slice() {
                            [a, b, c] => Ok(Rect::new(a.clone(), b.clone(), c.clone())),
                            _ => Err(parse_err(format!("rectangle of {n:?} must be [a, b, height]"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                RectSet::new(base, rects)
            }
        })
        .collect()
}

pub fn certificate_to_json<T: Scalar>(cert: &Certificate<T>) -> Value {
    let names = cert.system.names();
    let mut out = Map::new();
    out.insert("system".into(), system_to_json(&cert.system));
    out.insert("target".into(), texts(&cert.target));
    out.insert("convex".into(), family_to_json(&names, &cert.convex));
    if let Some(conic) = &cert.conic {
        out.insert("conic".into(), family_to_json(&names, conic));
        out.insert(
            "rays".into(),
            Value::Array(cert.rays.iter().map(|r| texts(r)).collect()),
        );
    }
    if !cert.metadata.is_empty() {
        let meta: Map<String, Value> = cert
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        out.insert("metadata".into(), Value::Object(meta));
    }
    Value::Object(out)
}

pub fn certificate_from_json<T: Scalar>(v: &Value) -> Result<Certificate<T>> {
    let system: ConstraintSystem<T> = system_from_json(field(v, "system")?)?;
    let names = system.names();
    let target = nums(field(v, "target")?)?;
    let convex = family_from_json(&names, Base::Unit, field(v, "convex")?)?;
    let mut cert = Certificate::new(system, convex, target);
    if let Some(c) = v.get("conic") {
        let conic = family_from_json(&names, Base::Ray, c)?;
        let rays = match v.get("rays") {
            Some(r) => r
                .as_array()
                .ok_or_else(|| parse_err("\"rays\" must be an array"))?
                .iter()
                .map(nums)
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        cert = cert.with_conic(conic, rays);
    }
    if let Some(Value::Object(m)) = v.get("metadata") {
        for (k, val) in m {
            let s = val
                .as_str()
                .ok_or_else(|| parse_err("metadata values must be strings"))?;
            cert = cert.with_meta(k, s);
        }
    }
    Ok(cert)
}

pub fn combination_to_json<T: Scalar>(c: &ConvexCombination<T>) -> Value {
    let list = |items: &[(Vec<T>, T)]| -> Value {
        Value::Array(
            items
                .iter()
                .map(|(p, w)| json!({"point": texts(p), "weight": text(w)}))
                .collect(),
        )
    };
    json!({"support": list(&c.support), "rays": list(&c.rays)})
}

pub fn combination_from_json<T: Scalar>(v: &Value) -> Result<ConvexCombination<T>> {
    let list = |key: &str| -> Result<Vec<(Vec<T>, T)>> {
        match v.get(key) {
            None => Ok(Vec::new()),
            Some(items) => items
                .as_array()
                .ok_or_else(|| parse_err(format!("{key:?} must be an array")))?
                .iter()
                .map(|it| Ok((nums(field(it, "point")?)?, num(field(it, "weight")?)?)))
                .collect(),
        }
    };
    Ok(ConvexCombination {
        support: list("support")?,
        rays: list("rays")?,
    })
}

// -------------------------------------------------------------------- Hulls

/// `{"hull": "product-over-cover" | "max" | "bilinear-box" | "custom", …}`;
/// `"drop_row": k` removes candidate row `k` (0-based).
pub fn hull_from_json(v: &Value) -> Result<GraphHull<Q>> {
    let hull = match str_field(v, "hull")? {
        "product-over-cover" => GraphHull::product_over_cover(),
        "max" => {
            let n = field(v, "n")?
                .as_u64()
                .ok_or_else(|| parse_err("\"n\" must be a count"))?;
            GraphHull::max_function(n as usize)?
        }
        "bilinear-box" => match nums::<Q>(field(v, "u")?)?.as_slice() {
            [u1, u2] => GraphHull::bilinear_box(u1.clone(), u2.clone())?,
            _ => return Err(parse_err("\"u\" must hold two bounds")),
        },
        "custom" => {
            let points = field(v, "points")?
                .as_array()
                .ok_or_else(|| parse_err("\"points\" must be an array"))?
                .iter()
                .map(nums)
                .collect::<Result<Vec<_>>>()?;
            let candidate: ConstraintSystem<Q> = system_from_json(field(v, "candidate")?)?;
            let value = field(v, "value")?
                .as_object()
                .ok_or_else(|| parse_err("\"value\" must map candidate variables to coefficients"))?
                .iter()
                .map(|(k, a)| {
                    let idx = candidate
                        .var_index(k)
                        .ok_or_else(|| Error::UnknownVariable(k.clone()))?;
                    Ok((idx, num(a)?))
                })
                .collect::<Result<Vec<_>>>()?;
            GraphHull::new(points, function_from_json(field(v, "function")?)?, candidate, value)?
        }
        other => return Err(parse_err(format!("unknown hull {other:?}"))),
    };
    match v.get("drop_row") {
        None => Ok(hull),
        Some(k) => {
            let k = k.as_u64().ok_or_else(|| parse_err("\"drop_row\" must be an index"))?;
            hull.without_candidate_row(k as usize)
        }
    }
}

/// `{"boolean": [{"coeff", "vars", "table": [bool; 2^k]}]}` or
/// `{"bilinear": [[i, j, "a"]]}`.
fn function_from_json(v: &Value) -> Result<GraphFunction<Q>> {
    if let Some(terms) = v.get("boolean") {
        let terms = terms
            .as_array()
            .ok_or_else(|| parse_err("\"boolean\" must be an array"))?
            .iter()
            .map(|t| {
                let vars = field(t, "vars")?
                    .as_array()
                    .ok_or_else(|| parse_err("\"vars\" must be an array"))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|x| x as usize)
                            .ok_or_else(|| parse_err("variable indices must be counts"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let rows = field(t, "table")?
                    .as_array()
                    .ok_or_else(|| parse_err("\"table\" must be an array"))?
                    .iter()
                    .map(|b| {
                        b.as_bool()
                            .ok_or_else(|| parse_err("truth-table rows must be booleans"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(BooleanTerm {
                    coeff: num(field(t, "coeff")?)?,
                    table: TruthTable::new(vars.len(), rows)?,
                    vars,
                })
            })
            .collect::<Result<_>>()?;
        return Ok(GraphFunction::Boolean(terms));
    }
    if let Some(terms) = v.get("bilinear") {
        let terms = terms
            .as_array()
            .ok_or_else(|| parse_err("\"bilinear\" must be an array"))?
            .iter()
            .map(|t| match t.as_array().map(Vec::as_slice) {
                Some([i, j, a]) => {
                    let idx = |x: &Value| x.as_u64().map(|x| x as usize).ok_or_else(|| parse_err("bad index"));
                    Ok((idx(i)?, idx(j)?, num(a)?))
                }
                _ => Err(parse_err("bilinear terms are [i, j, coefficient]")),
            })
            .collect::<Result<_>>()?;
        return Ok(GraphFunction::Bilinear(terms));
    }
    Err(parse_err("function must have a \"boolean\" or \"bilinear\" field"))
}

pub fn hull_report_to_json(report: &HullReport<Q>) -> Value {
    let witness = |w: &Option<WitnessValue<Q>>| {
        w.as_ref()
            .map(|w| json!({"value": text(&w.value), "admissible": w.admissible}))
    };
    let samples: Vec<Value> = report
        .samples
        .iter()
        .map(|s| {
            json!({
                "x": texts(&s.x),
                "vex": text(&s.vex),
                "cav": text(&s.cav),
                "lb": s.bounds.as_ref().map(|b| text(&b.0)),
                "ub": s.bounds.as_ref().map(|b| text(&b.1)),
                "witness_min": witness(&s.witness_min),
                "witness_max": witness(&s.witness_max),
                "passed": s.passed(),
            })
        })
        .collect();
    json!({"passed": report.passed(), "findings": report.findings(), "samples": samples})
}

/// Pretty JSON with a trailing newline; key order is deterministic.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| parse_err(e.to_string()))
}

// ------------------------------------------------------ serde field helpers

/// `#[serde(with = "...")]` adaptor: a rational as a `"p/q"` string.
pub mod q_text {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_text())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = Value::deserialize(d)?;
        num(&v).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "...")]` adaptor: a list of rationals as strings.
pub mod q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Scalar::to_text))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Value::deserialize(d)?;
        nums(&v).map_err(D::Error::custom)
    }
}

/// Name → value map helper for reports.
pub fn named<T: Scalar>(names: &[String], values: &[T]) -> Value {
    let m: BTreeMap<&String, Value> = names.iter().zip(values).map(|(n, v)| (n, text(v))).collect();
    json!(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::mccormick;
    use crate::extended::conv_cone;
    use crate::scalar::{q, qi};

    #[test]
    fn system_round_trip() {
        let mut sys = ConstraintSystem::<Q>::new();
        let x = sys.add_var("x", VarKind::Binary);
        let y = sys.add_var("y", VarKind::Integer);
        let z = sys.add_var("z", VarKind::Continuous);
        sys.set_bounds(z, None, Some(q("5/2")));
        sys.add_linear(vec![(x, qi(1)), (y, q("-1/3"))], Sense::Ge, qi(0));
        sys.add(Constraint::Product { i: x, j: y, k: z }).unwrap();
        sys.add(Constraint::Ball {
            vars: vec![x, z],
            center: vec![qi(1), qi(1)],
            radius: qi(1),
            sense: Sense::Le,
        })
        .unwrap();
        let back: ConstraintSystem<Q> = system_from_json(&system_to_json(&sys)).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn system_errors() {
        let bad = json!({"variables": ["x"], "constraints": [{"kind": "linear", "coeffs": {"y": "1"}, "sense": "<=", "rhs": "1"}]});
        assert_eq!(
            system_from_json::<Q>(&bad).unwrap_err(),
            Error::UnknownVariable("y".into())
        );
        let bad = json!({"variables": ["x"], "constraints": [{"kind": "cubic"}]});
        assert!(matches!(system_from_json::<Q>(&bad), Err(Error::Parse(_))));
    }

    fn sorted(mut cert: Certificate<Q>) -> Certificate<Q> {
        for c in &mut cert.system.constraints {
            if let Constraint::Linear { coeffs, .. } = c {
                coeffs.sort_by_key(|(v, _)| *v);
            }
        }
        cert
    }

    #[test]
    fn certificate_round_trip() {
        let cert = sorted(mccormick(&[q("0.5"), q("0.7"), q("0.2")]).unwrap());
        let v = certificate_to_json(&cert);
        assert_eq!(v["convex"]["z"], json!([["3/10", "1/2", "1"]]));
        assert_eq!(certificate_from_json::<Q>(&v).unwrap(), cert);

        let cone = sorted(conv_cone(&[qi(2), qi(0)], 1).unwrap());
        assert_eq!(certificate_from_json::<Q>(&certificate_to_json(&cone)).unwrap(), cone);

        let comb = cert.extract().unwrap();
        assert_eq!(combination_from_json::<Q>(&combination_to_json(&comb)).unwrap(), comb);
    }

    #[test]
    fn hulls() {
        let h = hull_from_json(&json!({"hull": "bilinear-box", "u": ["3", "2"]})).unwrap();
        assert_eq!(h, GraphHull::bilinear_box(qi(3), qi(2)).unwrap());
        let weak = hull_from_json(&json!({"hull": "product-over-cover", "drop_row": 2})).unwrap();
        assert_eq!(weak.candidate.constraints.len(), 3);
        let custom = json!({
            "hull": "custom",
            "points": [["0", "1"], ["1", "0"], ["1", "1"]],
            "function": {"boolean": [{"coeff": "1", "vars": [0, 1], "table": [false, false, false, true]}]},
            "candidate": system_to_json(&GraphHull::<Q>::product_over_cover().candidate),
            "value": {"z": "1"},
        });
        let parsed = hull_from_json(&custom).unwrap();
        assert_eq!(parsed.function, GraphHull::<Q>::product_over_cover().function);
        assert!(hull_from_json(&json!({"hull": "max"})).is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point::<Q>("0.5, 1/3 2").unwrap(), vec![q("1/2"), q("1/3"), qi(2)]);
        assert!(parse_point::<Q>("0.5,x").is_err());
    }
}
