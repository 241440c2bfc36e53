//! JSON channel documents and result serializers.
//!
//! Complex numbers are `[re, im]`, matrices are row-major nested arrays.
//! A channel document is `{"kind": "kraus"|"choi"|"pauli"|"bloch", "data": …}`.

use serde_json::{json, Map, Value};

use crate::bloch::BlochScaling;
use crate::canonical::{Canonicalization, Equivalence};
use crate::channel::{
    BlochAffineForm, ChoiForm, ChoiSpectrum, KrausForm, PauliMixingForm, QubitChannel,
    MAX_KRAUS_OPERATORS,
};
use crate::error::{Error, Result};
use crate::linalg::{c, Complex, ComplexMatrix2, ComplexMatrix4, RealMatrix3};
use crate::mixed_unitary::UnitaryDecomposition;

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn array<'a>(v: &'a Value, path: &str, len: Option<usize>) -> Result<&'a Vec<Value>> {
    let items = v
        .as_array()
        .ok_or_else(|| parse_err(path, format!("expected an array, found {}", type_name(v))))?;
    if let Some(n) = len {
        if items.len() != n {
            return Err(parse_err(
                path,
                format!("expected {n} entries, found {}", items.len()),
            ));
        }
    }
    Ok(items)
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn real(v: &Value, path: &str) -> Result<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| parse_err(path, format!("expected a number, found {}", type_name(v))))?;
    if !x.is_finite() {
        return Err(parse_err(path, "non-finite number"));
    }
    Ok(x)
}

fn complex(v: &Value, path: &str) -> Result<Complex> {
    let parts = array(v, path, Some(2))?;
    Ok(c(
        real(&parts[0], &format!("{path}[0]"))?,
        real(&parts[1], &format!("{path}[1]"))?,
    ))
}

fn complex_rows<const N: usize>(v: &Value, path: &str) -> Result<[[Complex; N]; N]> {
    let rows = array(v, path, Some(N))?;
    let mut out = [[Complex::new(0.0, 0.0); N]; N];
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        for (j, x) in array(row, &rp, Some(N))?.iter().enumerate() {
            out[i][j] = complex(x, &format!("{rp}[{j}]"))?;
        }
    }
    Ok(out)
}

fn real_vec<const N: usize>(v: &Value, path: &str) -> Result<[f64; N]> {
    let items = array(v, path, Some(N))?;
    let mut out = [0.0; N];
    for (k, x) in items.iter().enumerate() {
        out[k] = real(x, &format!("{path}[{k}]"))?;
    }
    Ok(out)
}

pub fn parse_matrix2(v: &Value, path: &str) -> Result<ComplexMatrix2> {
    complex_rows::<2>(v, path).map(ComplexMatrix2)
}

pub fn parse_matrix4(v: &Value, path: &str) -> Result<ComplexMatrix4> {
    complex_rows::<4>(v, path).map(ComplexMatrix4)
}

/// Parses a channel document value.
pub fn channel_from_value(doc: &Value) -> Result<QubitChannel> {
    let obj = doc
        .as_object()
        .ok_or_else(|| parse_err("$", format!("expected an object, found {}", type_name(doc))))?;
    let kind = obj
        .get("kind")
        .ok_or_else(|| parse_err("kind", "missing field"))?;
    let kind = kind
        .as_str()
        .ok_or_else(|| parse_err("kind", format!("expected a string, found {}", type_name(kind))))?;
    let data = obj
        .get("data")
        .ok_or_else(|| parse_err("data", "missing field"))?;
    match kind {
        "kraus" => {
            let ops = array(data, "data", None)?;
            if ops.is_empty() || ops.len() > MAX_KRAUS_OPERATORS {
                return Err(parse_err(
                    "data",
                    format!(
                        "expected 1 to {MAX_KRAUS_OPERATORS} Kraus operators, found {}",
                        ops.len()
                    ),
                ));
            }
            let operators = ops
                .iter()
                .enumerate()
                .map(|(k, m)| parse_matrix2(m, &format!("data[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(QubitChannel::Kraus(KrausForm::new(operators)?))
        }
        "choi" => Ok(QubitChannel::Choi(ChoiForm {
            matrix: parse_matrix4(data, "data")?,
        })),
        "pauli" => Ok(QubitChannel::Pauli(PauliMixingForm {
            coefficients: real_vec::<4>(data, "data")?,
        })),
        "bloch" => {
            let fields = data.as_object().ok_or_else(|| {
                parse_err("data", format!("expected an object, found {}", type_name(data)))
            })?;
            let linear = fields
                .get("linear")
                .ok_or_else(|| parse_err("data.linear", "missing field"))?;
            let offset = fields
                .get("offset")
                .ok_or_else(|| parse_err("data.offset", "missing field"))?;
            let rows = array(linear, "data.linear", Some(3))?;
            let mut m = RealMatrix3::zeros();
            for (i, row) in rows.iter().enumerate() {
                m.0[i] = real_vec::<3>(row, &format!("data.linear[{i}]"))?;
            }
            Ok(QubitChannel::Bloch(BlochAffineForm {
                linear: m,
                offset: real_vec::<3>(offset, "data.offset")?,
            }))
        }
        other => Err(parse_err(
            "kind",
            format!("unknown kind {other:?}; expected kraus, choi, pauli or bloch"),
        )),
    }
}

/// Parses channel document text.
pub fn parse_channel(text: &str) -> Result<QubitChannel> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        parse_err(
            &format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    channel_from_value(&doc)
}

fn num(x: f64) -> Value {
    // serde_json maps non-finite floats to null
    json!(x)
}

pub fn complex_value(z: Complex) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn matrix2_value(m: &ComplexMatrix2) -> Value {
    Value::Array(
        m.0.iter()
            .map(|row| Value::Array(row.iter().map(|z| complex_value(*z)).collect()))
            .collect(),
    )
}

pub fn matrix4_value(m: &ComplexMatrix4) -> Value {
    Value::Array(
        m.0.iter()
            .map(|row| Value::Array(row.iter().map(|z| complex_value(*z)).collect()))
            .collect(),
    )
}

pub fn real_matrix3_value(m: &RealMatrix3) -> Value {
    Value::Array(
        m.0.iter()
            .map(|row| Value::Array(row.iter().map(|x| num(*x)).collect()))
            .collect(),
    )
}

pub fn channel_value(ch: &QubitChannel) -> Value {
    let data = match ch {
        QubitChannel::Kraus(k) => Value::Array(k.operators.iter().map(matrix2_value).collect()),
        QubitChannel::Choi(c) => matrix4_value(&c.matrix),
        QubitChannel::Pauli(p) => json!(p.coefficients),
        QubitChannel::Bloch(b) => json!({
            "linear": real_matrix3_value(&b.linear),
            "offset": b.offset,
        }),
    };
    json!({ "kind": ch.kind(), "data": data })
}

pub fn spectrum_value(s: &ChoiSpectrum) -> Value {
    json!(s.lambdas)
}

pub fn scaling_value(s: &BlochScaling) -> Value {
    json!(s.d)
}

pub fn canonicalization_value(can: &Canonicalization) -> Value {
    json!({
        "u": matrix2_value(&can.u),
        "v": matrix2_value(&can.v),
        "spectrum": spectrum_value(&can.spectrum),
        "canonical": channel_value(&can.canonical),
        "scaling": scaling_value(&can.scaling),
        "residual": num(can.residual),
    })
}

pub fn equivalence_value(eq: &Equivalence) -> Value {
    match eq {
        Equivalence::Equivalent {
            u,
            v,
            residual,
            spectrum,
        } => json!({
            "equivalent": true,
            "u": matrix2_value(u),
            "v": matrix2_value(v),
            "residual": num(*residual),
            "spectrum": spectrum_value(spectrum),
        }),
        Equivalence::NotEquivalent {
            gap,
            spectrum_a,
            spectrum_b,
        } => json!({
            "equivalent": false,
            "gap": num(*gap),
            "spectrum_a": spectrum_value(spectrum_a),
            "spectrum_b": spectrum_value(spectrum_b),
        }),
    }
}

pub fn decomposition_value(dec: &UnitaryDecomposition, residual: f64) -> Value {
    json!({
        "weights": dec.weights.weights,
        "unitaries": Value::Array(dec.unitaries.iter().map(matrix2_value).collect()),
        "residual": num(residual),
    })
}

/// Parses `{"weights": […], "unitaries": […]}`.
pub fn decomposition_from_value(doc: &Value) -> Result<UnitaryDecomposition> {
    let obj: &Map<String, Value> = doc
        .as_object()
        .ok_or_else(|| parse_err("$", format!("expected an object, found {}", type_name(doc))))?;
    let w = obj
        .get("weights")
        .ok_or_else(|| parse_err("weights", "missing field"))?;
    let u = obj
        .get("unitaries")
        .ok_or_else(|| parse_err("unitaries", "missing field"))?;
    let w = array(w, "weights", None)?;
    let u = array(u, "unitaries", Some(w.len()))?;
    let weights = w
        .iter()
        .enumerate()
        .map(|(k, x)| real(x, &format!("weights[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let unitaries = u
        .iter()
        .enumerate()
        .map(|(k, m)| parse_matrix2(m, &format!("unitaries[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnitaryDecomposition::new(weights, unitaries))
}
