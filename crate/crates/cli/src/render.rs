//! Human-readable rendering of result documents.

use serde_json::Value;

/// Six significant digits, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp).max(0) as usize, x);
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

fn as_complex(v: &Value) -> Option<(f64, f64)> {
    match v.as_array()?.as_slice() {
        [re, im] => Some((re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

fn complex_str((re, im): (f64, f64)) -> String {
    if im == 0.0 {
        sig6(re)
    } else if re == 0.0 {
        format!("{}i", sig6(im))
    } else {
        let sign = if im < 0.0 { '-' } else { '+' };
        format!("{}{}{}i", sig6(re), sign, sig6(im.abs()))
    }
}

/// Rows of a numeric or complex matrix, if `v` is one.
fn matrix_cells(v: &Value) -> Option<Vec<Vec<String>>> {
    let rows = v.as_array()?;
    if rows.is_empty() {
        return None;
    }
    let width = rows[0].as_array()?.len();
    rows.iter()
        .map(|row| {
            let row = row.as_array()?;
            if row.len() != width || width < 2 {
                return None;
            }
            row.iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_f64().map(sig6),
                    _ => as_complex(x).map(complex_str),
                })
                .collect()
        })
        .collect()
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => n.as_f64().map(sig6),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| x.is_number()) => Some(format!(
            "({})",
            items
                .iter()
                .filter_map(|x| x.as_f64().map(sig6))
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn write_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    if let Some(cells) = matrix_cells(v) {
        out.push_str(&format!("{pad}{key}:\n"));
        let width = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(0);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(&format!("{pad}  [ {} ]\n", line.join("  ")));
        }
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                write_value(out, k, x, indent + 1);
            }
        }
        Value::Array(items) => {
            for (k, x) in items.iter().enumerate() {
                write_value(out, &format!("[{k}]"), x, indent + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

pub fn human(doc: &Value) -> String {
    let mut out = String::new();
    match doc {
        Value::Object(map) => {
            for (k, v) in map {
                write_value(&mut out, k, v, 0);
            }
        }
        other => write_value(&mut out, "value", other, 0),
    }
    out
}
