use std::fmt::Write as _;

use serde_json::Value;

fn number(n: &serde_json::Number, out: &mut String) {
    if n.is_i64() || n.is_u64() {
        let _ = write!(out, "{n}");
    } else {
        let x = n.as_f64().unwrap_or(0.0);
        let x = if x == 0.0 { 0.0 } else { x };
        let _ = write!(out, "{x:.16e}");
    }
}

fn scalar(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => number(n, out),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        _ => unreachable!("containers are handled by the caller"),
    }
}

fn is_flat(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    })
}

fn inline(v: &Value, out: &mut String) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                inline(x, out);
            }
            out.push(']');
        }
        _ => scalar(v, out),
    }
}

fn write(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| out.push_str(&"  ".repeat(d));
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push_str(": ");
                write(&map[*k], depth + 1, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(depth, out);
            out.push('}');
        }
        // Vectors and matrices of scalars stay compact, one row per line.
        Value::Array(items) if items.is_empty() || items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            inline(v, out)
        }
        Value::Array(items) if is_flat(items) && items.iter().all(|x| x.as_array().is_some_and(|a| a.len() <= 2)) => {
            inline(v, out)
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(depth + 1, out);
                write(x, depth + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(depth, out);
            out.push(']');
        }
        _ => scalar(v, out),
    }
}

/// Canonical JSON text: sorted keys, two-space indentation, floats in
/// `{:.16e}` form, trailing newline.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out.push('\n');
    out
}

fn text_scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format!("{:.10}", n.as_f64().unwrap_or(0.0)),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.len() == 2 && a.iter().all(|x| x.is_f64()) => {
            let (re, im) = (a[0].as_f64().unwrap_or(0.0), a[1].as_f64().unwrap_or(0.0));
            format!("{re:.10}{}{:.10}i", if im < 0.0 { '-' } else { '+' }, im.abs())
        }
        Value::Array(a) => format!("[{}]", a.iter().map(text_scalar).collect::<Vec<_>>().join(", ")),
        other => {
            let mut s = String::new();
            scalar(other, &mut s);
            s
        }
    }
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for k in keys {
                match &map[k] {
                    Value::Object(m) if !m.is_empty() => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text(&map[k], depth + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|x| x.is_object()) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text(&map[k], depth + 1, out);
                    }
                    other => {
                        let _ = writeln!(out, "{pad}{k}: {}", text_scalar(other));
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                let _ = writeln!(out, "{pad}- [{i}]");
                text(x, depth + 1, out);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", text_scalar(other));
        }
    }
}

/// Indented `key: value` rendering for terminals; complex numbers as `a+bi`.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    text(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_round_trip_is_byte_stable() {
        let v = json!({
            "b": [1.0, -0.0, 0.1],
            "a": {"z": [[0.5, 1e-300], [2.0, 3.0]], "n": 3, "s": "χ"},
            "m": [[[1.0, 0.0], [0.0, 1.0]], [[0.25, 0.0], [1.0 / 3.0, 0.0]]],
            "e": [],
            "o": {}
        });
        let once = to_canonical_json(&v);
        let parsed: Value = serde_json::from_str(&once).unwrap();
        assert_eq!(to_canonical_json(&parsed), once);
        assert!(once.find("\"a\"").unwrap() < once.find("\"b\"").unwrap());
        assert!(once.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn text_renders_complex() {
        let s = to_text(&json!({"value": [0.5, -0.25]}));
        assert_eq!(s, "value: 0.5000000000-0.2500000000i\n");
    }
}
