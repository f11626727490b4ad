//! Plain-text rendering of a JSON report: one `key: value` line per
//! scalar, nested objects indented, so text and JSON carry the same facts.

use serde_json::Value;

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(xs) if xs.iter().all(|x| scalar(x).is_some() && !x.is_array()) => {
            Some(format!("[{}]", xs.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(xs) if xs.iter().all(|x| x.as_array().is_some_and(|a| a.iter().all(|y| !y.is_array() && !y.is_object()))) => {
            Some(format!("[{}]", xs.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
