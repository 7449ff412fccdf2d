use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

/// Process exit status: 0 for a true verdict, 1 for false with a witness,
/// 2 for unusable input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    True,
    False,
    InputError,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::True => 0,
            Status::False => 1,
            Status::InputError => 2,
        }
    }

    pub fn from_verdict(v: bool) -> Status {
        if v {
            Status::True
        } else {
            Status::False
        }
    }
}

/// Outcome of one command. Everything except `timestamp` is a function of
/// the inputs, so reports for the same input differ only there.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub status: Status,
    pub summary: String,
    pub lines: Vec<String>,
    pub details: Map<String, Value>,
    pub witness: Option<Value>,
}

impl Report {
    pub fn new(command: &'static str, inputs: &[String]) -> Report {
        Report {
            command,
            inputs: inputs.to_vec(),
            status: Status::True,
            summary: String::new(),
            lines: Vec::new(),
            details: Map::new(),
            witness: None,
        }
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "exit_code": self.status.code(),
            "verdict": match self.status {
                Status::True => Value::Bool(true),
                Status::False => Value::Bool(false),
                Status::InputError => Value::Null,
            },
            "summary": self.summary,
            "details": self.details,
            "witness": self.witness,
            "timestamp": timestamp,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = self.summary.clone();
        for l in &self.lines {
            out.push_str("\n  ");
            out.push_str(l);
        }
        out
    }
}
