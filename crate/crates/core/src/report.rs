//! Command reports: one JSON document per invocation and a text rendering
//! produced from that same document, so both carry the same numbers.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::verify::Status;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub status: Status,
    pub result: Value,
    pub warnings: Vec<String>,
    /// Wall-clock seconds; the only field that may differ between runs.
    pub wall_seconds: f64,
}

impl Report {
    pub fn new(command: &str, status: Status, result: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            status,
            result,
            warnings: Vec::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn failed(&self) -> bool {
        self.status.is_failure()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without its timing field, for equality checks.
    pub fn content(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("wall_seconds");
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}]", self.command, self.status);
        render(&mut out, &self.result, 1);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        let _ = writeln!(out, "wall_seconds: {}", Value::from(self.wall_seconds));
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")
        )),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Array(_))) && a.iter().all(|x| scalar(x).is_some()) => {
            Some(format!(
                "[{}]",
                a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")
            ))
        }
        _ => None,
    }
}

fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(out, x, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn numbers(s: &str) -> Vec<String> {
        s.split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    }

    #[test]
    fn text_carries_the_json_numbers() {
        let r = Report::new(
            "piy",
            Status::Pass,
            json!({"dims": [1, 2], "nested": {"rank": 7, "rows": [{"a": 3}, {"a": 11}]}, "pairs": [[4, 5]]}),
        );
        let text = r.to_text();
        let json_nums = numbers(&serde_json::to_string(&r.result).unwrap());
        let text_nums = numbers(&text);
        for n in json_nums {
            assert!(text_nums.contains(&n), "{n} missing from\n{text}");
        }
        assert!(text.contains("dims: [1, 2]"));
        assert!(r.content().get("wall_seconds").is_none());
        assert!(r.to_json().contains("\"schema_version\": 1"));
    }
}
