//! JSON values with numbers printed to 17 significant digits.

use emcurve_core::sweep::{fmt_17, EpsilonField};
use emcurve_core::tracing::{Branch, IntersectionSet};
use emcurve_core::Point;
use serde_json::{json, Map, Number, Value};

/// A JSON number carrying `v` at full precision; non-finite values become
/// `null`.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let text = fmt_17(v);
    match text.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

pub fn point(p: Point) -> Value {
    Value::Array(vec![num(p.x), num(p.y)])
}

pub fn branches(bs: &[Branch]) -> Value {
    bs.iter()
        .map(|b| {
            json!({
                "label": b.label,
                "closed": b.closed,
                "points": b.points.iter().copied().map(point).collect::<Vec<_>>(),
            })
        })
        .collect()
}

pub fn intersections(set: &IntersectionSet) -> Value {
    set.labelled()
        .map(|(label, p)| json!({ "label": label, "x": num(p.x), "y": num(p.y) }))
        .collect()
}

pub fn field(f: &EpsilonField) -> Value {
    let records: Vec<Value> = f
        .records
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("u".into(), num(r.u));
            m.insert("v".into(), num(r.v));
            m.insert("closed".into(), Value::Bool(r.closed));
            m.insert("epsilon".into(), r.epsilon.map_or(Value::Null, num));
            Value::Object(m)
        })
        .collect();
    json!({
        "count": f.len(),
        "u_values": f.u_values().into_iter().map(num).collect::<Vec<_>>(),
        "v_values": f.v_values().into_iter().map(num).collect::<Vec<_>>(),
        "records": records,
    })
}
