//! Command-line front end for the `laplaza` library.

pub mod args;
pub mod commands;
pub mod oracle;
pub mod schema;
pub mod selftest;

use clap::Parser;
use serde_json::Value;

use crate::args::{Cli, Format};

/// Exit status for malformed input, unreadable files and internal errors.
pub const EXIT_ERROR: i32 = 3;

/// Runs one invocation and returns its exit code, standard output and
/// standard error.
pub fn run<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (code, String::new(), text)
            };
        }
    };
    let mut log = String::new();
    match commands::dispatch(&cli, &mut log) {
        Ok(out) => (out.code, render(&out.body, cli.format), log),
        Err(commands::Failure(message)) => {
            log.push_str(&format!("error: {message}\n"));
            (EXIT_ERROR, String::new(), log)
        }
    }
}

/// Pretty JSON, or one `key: value` line per top-level field.
pub fn render(body: &Value, format: Format) -> String {
    match (format, body) {
        (Format::Text, Value::Object(map)) => {
            let mut out = String::new();
            for (k, v) in map {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}: {v}\n"));
            }
            out
        }
        _ => {
            let mut s = serde_json::to_string_pretty(body).expect("values always serialize");
            s.push('\n');
            s
        }
    }
}
