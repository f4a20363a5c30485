//! JSON encoding of certificates and reports.
//!
//! Rationals are `"num/den"` strings, orders are numbers or `"inf"`, jets
//! are lists of `{"x1", "x2", "c"}` terms sorted by exponent. Objects use
//! `serde_json`'s sorted map, so output is byte-stable.

use ejet_core::classify::{Certificate, Verdict};
use ejet_core::normal_form::Reduction;
use ejet_core::order::Order;
use ejet_core::rational::{parse_exact, to_exact_string, Rational};
use ejet_core::series::{Decomposition, PowerSeries1};
use ejet_core::{LinearForm, PolyJet, PolyMap2, StepKind, TransformStep, VerifyReport};
use serde_json::{json, Map, Value};

pub fn rational(q: &Rational) -> Value {
    Value::String(to_exact_string(q))
}

pub fn order(o: Order) -> Value {
    match o {
        Order::Finite(n) => json!(n),
        Order::Infinite => json!("inf"),
    }
}

fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else if x < 0.0 {
        json!("-inf")
    } else {
        json!("nan")
    }
}

pub fn jet(j: &PolyJet) -> Value {
    json!({
        "order": j.order(),
        "terms": j.terms().map(|(i, k, c)| json!({"x1": i, "x2": k, "c": rational(c)})).collect::<Vec<_>>(),
    })
}

pub fn series(s: &PowerSeries1) -> Value {
    json!({
        "order": s.order(),
        "coeffs": s.coeffs().iter().map(rational).collect::<Vec<_>>(),
    })
}

fn linear_form(l: &LinearForm) -> Value {
    json!({"a": rational(l.a()), "b": rational(l.b())})
}

pub fn step(s: &TransformStep) -> Value {
    json!({
        "kind": s.kind.as_str(),
        "parameters": s.parameters.iter().map(|(n, v)| json!({"name": n, "value": rational(v)})).collect::<Vec<_>>(),
        "map": {"x1": jet(s.map.comp1()), "x2": jet(s.map.comp2())},
    })
}

pub fn chain(steps: &[TransformStep]) -> Value {
    Value::Array(steps.iter().map(step).collect())
}

fn opt<T>(v: &Option<T>, f: impl Fn(&T) -> Value) -> Value {
    v.as_ref().map(f).unwrap_or(Value::Null)
}

pub fn certificate(c: &Certificate) -> Value {
    json!({
        "m_s1_p3": order(c.m_s1_p3),
        "cube_root_form": opt(&c.cube_root_form, linear_form),
        "cube_coefficient": opt(&c.cube_coefficient, rational),
        "res_p3_p4": opt(&c.res_p3_p4, rational),
        "common_mult_in_p4": opt(&c.common_mult_in_p4, |o| order(*o)),
        "res_p3_p5": opt(&c.res_p3_p5, rational),
        "transform_chain": chain(&c.transform_chain),
        "normalized_jet": jet(&c.normalized_jet),
    })
}

/// `verdict`, plus `sign` for E6 and `reason` for the two negative verdicts.
pub fn verdict_fields(v: &Verdict, out: &mut Map<String, Value>) {
    out.insert("verdict".into(), json!(v.name()));
    if let Verdict::E6(s) = v {
        out.insert("sign".into(), json!(s.as_str()));
    }
    if let Some(r) = v.reason() {
        out.insert("reason".into(), json!({"code": r.code(), "message": r.message()}));
    }
}

/// The index of the first nonzero coefficient of `ψ`, or `">=W"` when all
/// computed coefficients vanish.
fn psi_order(d: &Decomposition) -> Value {
    match d.ord_psi {
        Order::Finite(n) => json!(n),
        Order::Infinite => json!(format!(">={}", d.order)),
    }
}

pub fn decomposition(d: &Decomposition) -> Value {
    json!({
        "series_order": d.order,
        "psi": series(&d.psi),
        "b0": series(&d.b0),
        "b1": series(&d.b1),
        "B": jet(&d.b),
        "ord_psi": psi_order(d),
        "ord_b0": order(d.ord_b0),
        "ord_b1": order(d.ord_b1),
        "B_at_origin": rational(&d.b_at_origin),
    })
}

pub fn reduction(r: &Reduction) -> Value {
    json!({
        "series_order": r.series_order,
        "transform_chain": chain(&r.steps),
        "prenormal_jet": jet(&r.prenormal),
        "reduced_jet": jet(&r.jet),
        "psi": opt(&r.psi, series),
        "zero_branch": opt(&r.zero_branch, series),
    })
}

pub fn report(r: &VerifyReport) -> Value {
    json!({
        "samples": r.samples,
        "radius": float(r.radius),
        "max_residual": float(r.max_residual),
        "max_residual_half": float(r.max_residual_half),
        "residual_order_estimate": float(r.residual_order_estimate),
        "expected_order": r.expected_order,
        "skipped": r.skipped,
        "jacobian": opt(&r.jacobian, |x| float(*x)),
        "jacobian_closed_form": opt(&r.jacobian_closed_form, |x| float(*x)),
        "pass": r.pass,
    })
}

// decoding, for chain replay

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, String> {
    v.get(k).ok_or_else(|| format!("missing field '{k}'"))
}

fn decode_rational(v: &Value) -> Result<Rational, String> {
    let s = v.as_str().ok_or("rational must be a \"num/den\" string")?;
    parse_exact(s).ok_or_else(|| format!("bad rational '{s}'"))
}

fn decode_u32(v: &Value) -> Result<u32, String> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| "expected a small nonnegative integer".to_string())
}

pub fn decode_jet(v: &Value) -> Result<PolyJet, String> {
    let order = decode_u32(field(v, "order")?)?;
    let terms = field(v, "terms")?.as_array().ok_or("'terms' must be a list")?;
    let mut out = Vec::new();
    for t in terms {
        out.push((
            decode_u32(field(t, "x1")?)?,
            decode_u32(field(t, "x2")?)?,
            decode_rational(field(t, "c")?)?,
        ));
    }
    PolyJet::from_terms(order, out).map_err(|e| e.to_string())
}

pub fn decode_step(v: &Value) -> Result<TransformStep, String> {
    let kind = field(v, "kind")?.as_str().ok_or("'kind' must be a string")?;
    let kind = StepKind::parse(kind).ok_or_else(|| format!("unknown step kind '{kind}'"))?;
    let map = field(v, "map")?;
    let map = PolyMap2::new(decode_jet(field(map, "x1")?)?, decode_jet(field(map, "x2")?)?)
        .map_err(|e| e.to_string())?;
    let mut parameters = Vec::new();
    for p in field(v, "parameters")?.as_array().ok_or("'parameters' must be a list")? {
        let name = field(p, "name")?.as_str().ok_or("parameter name must be a string")?;
        parameters.push((name.to_string(), decode_rational(field(p, "value")?)?));
    }
    Ok(TransformStep { kind, map, parameters })
}

/// Accepts a bare list of steps, or any output object carrying
/// `transform_chain` at the top level or under `certificate`.
pub fn decode_chain(v: &Value) -> Result<Vec<TransformStep>, String> {
    let list = if let Some(a) = v.as_array() {
        a
    } else if let Some(a) = v.get("transform_chain").and_then(Value::as_array) {
        a
    } else if let Some(a) = v.pointer("/certificate/transform_chain").and_then(Value::as_array) {
        a
    } else {
        return Err("no transform_chain found".into());
    };
    list.iter()
        .enumerate()
        .map(|(n, s)| decode_step(s).map_err(|e| format!("step {n}: {e}")))
        .collect()
}
