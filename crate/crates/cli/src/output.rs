//! JSON shapes shared by the subcommands and the two output modes.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use apalg::rational::{render_coeff, render_rational};
use apalg::torus::ExtremumReport;
use apalg::{Coeff, Frequency, GeneratorTable};

pub fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn coeff_json(c: &Coeff) -> Value {
    json!({ "exact": render_coeff(c), "re": render_rational(&c.re), "im": render_rational(&c.im) })
}

pub fn freq_json(table: &Arc<GeneratorTable>, f: &Frequency) -> Value {
    json!({ "text": table.render(f), "shadow": f.shadow() })
}

pub fn extremum_json(r: &ExtremumReport, certified: bool) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["certified"] = json!(certified);
    v
}

/// Writes `v` to stdout: pretty JSON with sorted keys, or one `key: value`
/// line per top-level field. A closed pipe is not an error.
pub fn emit(v: &Value, as_json: bool) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    let res = if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(v).expect("value serializes"))
    } else {
        match v {
            Value::Object(map) => map.iter().try_for_each(|(k, x)| match x {
                Value::String(s) => writeln!(out, "{k}: {s}"),
                other => writeln!(out, "{k}: {other}"),
            }),
            other => writeln!(out, "{other}"),
        }
    };
    match res {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}
