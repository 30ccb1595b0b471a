//! JSONL and CSV emission. Every JSONL stream starts with a header line; its
//! `meta` member carries timing and cache status and is the only part that
//! may differ between runs.

use std::io::{self, BufWriter, Write};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use scatterlab::field::FieldHeader;

pub const SCHEMA: &str = "scatterlab/1";

pub struct Header<'a, C: Serialize> {
    pub command: &'a str,
    pub argv: &'a [String],
    pub config: &'a C,
    pub field: Option<FieldHeader>,
}

impl<C: Serialize> Header<'_, C> {
    fn json(&self, started: Instant, cache: &str) -> Value {
        json!({
            "kind": "header",
            "schema": SCHEMA,
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "field": self.field,
            "meta": {
                "elapsed_ns": started.elapsed().as_nanos() as u64,
                "cache": cache,
            },
        })
    }

    /// Config echo for CSV output, as comment lines.
    fn csv_comment(&self) -> String {
        let v = json!({"schema": SCHEMA, "command": self.command, "config": self.config, "field": self.field});
        format!("# {v}\n")
    }
}

pub fn jsonl<C: Serialize>(h: &Header<C>, started: Instant, cache: &str, lines: &[Value]) -> io::Result<()> {
    let out = io::stdout();
    let mut w = BufWriter::new(out.lock());
    writeln!(w, "{}", h.json(started, cache))?;
    for l in lines {
        writeln!(w, "{l}")?;
    }
    w.flush()
}

/// Rows from the given columns of each value; strings unquoted unless they need it.
pub fn csv<C: Serialize>(h: &Header<C>, columns: &[&str], rows: &[Value]) -> io::Result<()> {
    let out = io::stdout();
    let mut w = BufWriter::new(out.lock());
    w.write_all(h.csv_comment().as_bytes())?;
    writeln!(w, "{}", columns.join(","))?;
    for r in rows {
        let cells: Vec<String> = columns.iter().map(|c| cell(&r[*c])).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

fn cell(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}
