//! Output assembly. Every command renders both a text body and a JSON value;
//! the selected format decides what reaches stdout. JSON objects serialize
//! with sorted keys, so output is deterministic byte for byte.

use serde_json::Value;

use crate::{CmdOutput, Format};

pub fn finish(format: Format, text: String, json: Value, finding: bool) -> CmdOutput {
    let stdout = match format {
        Format::Text => text,
        Format::Json => {
            let mut body = serde_json::to_string_pretty(&json).expect("serializable value");
            body.push('\n');
            body
        }
    };
    CmdOutput { stdout, finding }
}

/// Renders `ok=.. fail=.. unknown=..` summaries consistently.
pub fn status_summary(ok: usize, fail: usize, unknown: usize) -> String {
    format!("summary ok={ok} fail={fail} unknown={unknown}")
}
