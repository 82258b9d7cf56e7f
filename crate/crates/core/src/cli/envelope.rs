use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    CapExceeded,
    Error,
}

impl Status {
    /// 0 ok, 1 usage or domain error, 2 cap exceeded.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::CapExceeded => 2,
        }
    }
}

/// The single object emitted per invocation in `object` format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputEnvelope {
    pub command: String,
    pub version: String,
    pub parameters: Value,
    pub status: Status,
    pub result: Value,
    pub telemetry: Value,
    pub message: Option<String>,
}

impl OutputEnvelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope is plain JSON")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Minimal CSV writer: quotes a field only when it needs quoting.
pub fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn roundtrip() {
        let env = OutputEnvelope {
            command: "approximate".into(),
            version: "0.1.0".into(),
            parameters: json!({"t": "1/3"}),
            status: Status::CapExceeded,
            result: json!({"p": 47, "q": 23}),
            telemetry: json!({}),
            message: None,
        };
        assert_eq!(OutputEnvelope::from_json(&env.to_json()).unwrap(), env);
        let extra = env.to_json().replacen('{', "{\"extra\": 1,", 1);
        assert!(OutputEnvelope::from_json(&extra).is_err());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(
            csv_line(&["a".into(), "b,c".into(), "d\"e".into()]),
            "a,\"b,c\",\"d\"\"e\""
        );
    }
}
