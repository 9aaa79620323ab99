//! JSON encoding of inputs (presentations, diagram term lists, wedge
//! triples) and outputs (invariant reports, diagram elements). Exact
//! rationals travel as `"p/q"` strings so round trips are lossless.

use anyhow::{anyhow, bail, Context, Result};
use homcyl_core::diagrams::{Color, DiagElem, DiagTerm, Shape};
use homcyl_core::invariants::{InvariantReport, Presentation};
use homcyl_core::multilinear::{Sym2, SymPair, W3};
use homcyl_core::spin::BoolPoly;
use homcyl_core::symplectic::{HClass, LpmLabel};
use homcyl_core::{qi, Q};
use serde_json::{json, Map, Value};

pub fn parse_q(v: &Value) -> Result<Q> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| anyhow!("coefficient {n} is not an integer"))?;
            Ok(qi(i))
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a, b),
                None => (s.as_str(), "1"),
            };
            let num: i64 = num.trim().parse().with_context(|| format!("bad numerator in {s:?}"))?;
            let den: i64 =
                den.trim().parse().with_context(|| format!("bad denominator in {s:?}"))?;
            if den == 0 {
                bail!("zero denominator in {s:?}");
            }
            Ok(Q::new(num, den))
        }
        _ => bail!("expected a rational as integer or \"p/q\" string, got {v}"),
    }
}

pub fn render_q(x: Q) -> Value {
    if x.is_integer() {
        json!(x.to_integer())
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

fn idx_key(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

pub fn w3_json(x: &W3) -> Value {
    Value::Object(x.0.iter().map(|(k, &c)| (idx_key(k), render_q(c))).collect())
}

pub fn sym2_json(x: &Sym2) -> Value {
    Value::Object(x.0.iter().map(|(&(i, j), &c)| (idx_key(&[i, j]), render_q(c))).collect())
}

pub fn sympair_json(x: &SymPair) -> Value {
    Value::Object(
        x.0.iter()
            .map(|(&((a, b), (c, d)), &co)| {
                (format!("{a},{b}|{c},{d}"), render_q(co))
            })
            .collect(),
    )
}

pub fn boolpoly_json(x: &BoolPoly) -> Value {
    Value::Array(x.0.iter().map(|m| json!(m)).collect())
}

pub fn diag_json(x: &DiagElem) -> Value {
    let yy: Map<String, Value> = x
        .yy
        .iter()
        .map(|(&(a, b), &c)| (format!("{}|{}", idx_key(&a), idx_key(&b)), render_q(c)))
        .collect();
    json!({
        "genus": x.g,
        "c0": render_q(x.c0),
        "y": w3_json(&x.y),
        "h": sympair_json(&x.h),
        "phi": sym2_json(&x.phi),
        "theta": render_q(x.theta),
        "yy": yy,
    })
}

pub fn report_json(r: &InvariantReport) -> Value {
    let core = r.core.as_ref().map(|c| {
        json!({
            "dprime": render_q(c.dprime),
            "dsecond": render_q(c.dsecond),
            "d": render_q(c.d),
            "lambda": render_q(c.lambda),
        })
    });
    json!({
        "tau1": w3_json(&r.tau1),
        "beta": r.beta.as_ref().map(boolpoly_json),
        "tau2": r.tau2.as_ref().map(sympair_json),
        "alpha": r.alpha.as_ref().map(sym2_json),
        "z2": r.z2.as_ref().map(diag_json),
        "core": core,
        "kc_reason": r.kc_reason,
    })
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    serde_json::from_str(text).context("malformed presentation JSON")
}

pub fn parse_hclass(v: &Value, g: usize) -> Result<HClass> {
    let arr = v.as_array().ok_or_else(|| anyhow!("homology class must be an array, got {v}"))?;
    if arr.len() != 2 * g {
        bail!("homology class needs {} coordinates, got {}", 2 * g, arr.len());
    }
    let coords: Result<Vec<i64>> = arr
        .iter()
        .map(|c| c.as_i64().ok_or_else(|| anyhow!("non-integer coordinate {c}")))
        .collect();
    Ok(HClass(coords?))
}

fn parse_color(v: &Value, g: usize) -> Result<Color> {
    let obj = v.as_object().ok_or_else(|| anyhow!("leg must be an object, got {v}"))?;
    if let Some(h) = obj.get("h") {
        return Ok(Color::H(parse_hclass(h, g)?));
    }
    if let Some(l) = obj.get("lpm") {
        let s = l.as_str().ok_or_else(|| anyhow!("label must be a string, got {l}"))?;
        let label =
            LpmLabel::parse(s).ok_or_else(|| anyhow!("bad label {s:?}, expected e.g. \"2+\""))?;
        if label.index == 0 || label.index > g {
            bail!("label index {} out of range for genus {g}", label.index);
        }
        return Ok(Color::Lpm(label));
    }
    bail!("leg needs an \"h\" class or an \"lpm\" label, got {v}")
}

fn parse_shape(s: &str) -> Result<Shape> {
    match s {
        "Y" => Ok(Shape::Y),
        "H" | "Hgraph" => Ok(Shape::Hgraph),
        "Phi" => Ok(Shape::Phi),
        "Theta" => Ok(Shape::Theta),
        _ => bail!("unknown shape {s:?}, expected Y | H | Phi | Theta"),
    }
}

/// `{genus, terms: [{shape, legs, coeff?}]}` for the normalize command.
pub fn parse_diag_input(text: &str) -> Result<(usize, Vec<DiagTerm>)> {
    let v: Value = serde_json::from_str(text).context("malformed JSON")?;
    let g = v
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("missing or bad \"genus\""))? as usize;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("missing \"terms\" array"))?;
    let mut out = Vec::new();
    for t in terms {
        let shape = parse_shape(
            t.get("shape")
                .and_then(Value::as_str)
                .ok_or_else(|| anyhow!("term missing \"shape\""))?,
        )?;
        let legs = t
            .get("legs")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("term missing \"legs\" array"))?
            .iter()
            .map(|l| parse_color(l, g))
            .collect::<Result<Vec<_>>>()?;
        let coeff = match t.get("coeff") {
            Some(c) => parse_q(c)?,
            None => qi(1),
        };
        out.push(DiagTerm { shape, legs, coeff });
    }
    Ok((g, out))
}

/// A `Λ³` element as a list of `{legs: [class, class, class], coeff?}`.
pub fn parse_w3(v: &Value, g: usize) -> Result<W3> {
    let arr = v.as_array().ok_or_else(|| anyhow!("expected an array of wedge terms"))?;
    let mut out = W3::new();
    for t in arr {
        let legs = t
            .get("legs")
            .and_then(Value::as_array)
            .ok_or_else(|| anyhow!("wedge term missing \"legs\""))?;
        if legs.len() != 3 {
            bail!("wedge term needs 3 legs, got {}", legs.len());
        }
        let a = parse_hclass(&legs[0], g)?;
        let b = parse_hclass(&legs[1], g)?;
        let c = parse_hclass(&legs[2], g)?;
        let coeff = match t.get("coeff") {
            Some(c) => parse_q(c)?,
            None => qi(1),
        };
        out = out.add(&homcyl_core::multilinear::wedge3(&a, &b, &c).scale(coeff));
    }
    Ok(out)
}

/// `{genus, x: [...], y: [...]}` for the bracket command.
pub fn parse_bracket_input(text: &str) -> Result<(usize, W3, W3)> {
    let v: Value = serde_json::from_str(text).context("malformed JSON")?;
    let g = v
        .get("genus")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("missing or bad \"genus\""))? as usize;
    let x = parse_w3(v.get("x").ok_or_else(|| anyhow!("missing \"x\""))?, g)?;
    let y = parse_w3(v.get("y").ok_or_else(|| anyhow!("missing \"y\""))?, g)?;
    Ok((g, x, y))
}
