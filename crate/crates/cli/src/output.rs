use std::io::IsTerminal;
use std::process::ExitCode;

use serde_json::{json, Value};

/// The result of a query: a verdict, a JSON body and a human rendering.
pub struct Outcome {
    pub verdict: bool,
    pub body: Value,
    pub text: String,
}

impl Outcome {
    pub fn new(verdict: bool, body: Value, text: impl Into<String>) -> Self {
        Self { verdict, body, text: text.into() }
    }

    /// A successful command whose output is data rather than a yes/no answer.
    pub fn data(body: Value, text: impl Into<String>) -> Self {
        Self::new(true, body, text)
    }

    pub fn emit(self, json: bool) -> ExitCode {
        if json {
            let mut body = match self.body {
                Value::Object(map) => Value::Object(map),
                other => json!({ "result": other }),
            };
            body["verdict"] = Value::Bool(self.verdict);
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
        } else if !self.text.is_empty() {
            println!("{}", paint(&self.text, self.verdict));
        }
        ExitCode::from(if self.verdict { 0 } else { 1 })
    }
}

pub fn fail(msg: &str, json: bool) -> ExitCode {
    eprintln!("nv: {msg}");
    if json {
        println!("{}", json!({ "verdict": Value::Null, "error": msg }));
    }
    ExitCode::from(2)
}

fn color_enabled() -> bool {
    match std::env::var("NV_COLOR").as_deref() {
        Ok("always") | Ok("1") => true,
        Ok("never") | Ok("0") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

/// Colors the first line green or red when color is enabled.
fn paint(text: &str, ok: bool) -> String {
    if !color_enabled() {
        return text.to_string();
    }
    let (first, rest) = text.split_once('\n').map_or((text, None), |(a, b)| (a, Some(b)));
    let code = if ok { "32" } else { "31" };
    match rest {
        Some(rest) => format!("\x1b[{code}m{first}\x1b[0m\n{rest}"),
        None => format!("\x1b[{code}m{first}\x1b[0m"),
    }
}
