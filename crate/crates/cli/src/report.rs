use mfres::poly::format_rational;
use mfres::Rational;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// Output of one command. Field order is fixed by construction.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub results: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Report {
    pub fn ok(command: &str, results: Map<String, Value>) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Ok,
            results,
            message: None,
        }
    }

    pub fn error(command: &str, message: String) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Error,
            results: Map::new(),
            message: Some(message),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(match self.status {
            Status::Ok => "status: ok\n",
            Status::Error => "status: error\n",
        });
        for (k, v) in &self.results {
            write_text(&mut out, k, v);
        }
        if let Some(m) = &self.message {
            out.push_str(&format!("message: {m}\n"));
        }
        out
    }
}

fn write_text(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                write_text(out, &format!("{key}.{k}"), inner);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, inner) in items.iter().enumerate() {
                write_text(out, &format!("{key}[{i}]"), inner);
            }
        }
        Value::String(s) => out.push_str(&format!("{key}: {s}\n")),
        other => out.push_str(&format!("{key}: {other}\n")),
    }
}

/// Exact rational as `"p/q"` (or `"p"`).
pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rational_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn rational_rows(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| rational_vec(r)).collect())
}
