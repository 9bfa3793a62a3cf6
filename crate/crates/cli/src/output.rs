use crate::args::Format;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const OUT_DIR_ENV: &str = "ETAUE_OUT_DIR";

/// Provenance written at the top of every output.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub artifact: String,
    pub version: String,
    /// Command line without `--workers` and `--out`, which never change results.
    pub command_line: String,
    pub params: Map<String, Value>,
}

impl Meta {
    pub fn new(args: &[String], params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        Meta {
            artifact: env!("CARGO_BIN_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command_line: recorded_command_line(args),
            params,
        }
    }

    fn header_lines(&self) -> Vec<String> {
        let mut v = vec![format!("# {} {}", self.artifact, self.version), format!("# command: {}", self.command_line)];
        for (k, val) in &self.params {
            let shown = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            v.push(format!("# {k} = {shown}"));
        }
        v
    }
}

pub fn recorded_command_line(args: &[String]) -> String {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--workers" || a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--workers=") || a.starts_with("--out=") {
            continue;
        }
        out.push(a.clone());
    }
    if let Some(first) = out.first_mut() {
        // the binary path depends on the install, not on the run
        if let Some(name) = Path::new(first.as_str()).file_name() {
            *first = name.to_string_lossy().into_owned();
        }
    }
    out.join(" ")
}

/// Round-trip formatting with 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// A table of named numeric columns.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn render(&self, meta: &Meta, format: Format, extra: &[(&str, Value)]) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                for l in meta.header_lines() {
                    s.push_str(&l);
                    s.push('\n');
                }
                for (k, v) in extra {
                    s.push_str(&format!("# {k} = {v}\n"));
                }
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|&v| num(v)).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("meta".into(), serde_json::to_value(meta).expect("meta serializes"));
                for (k, v) in extra {
                    obj.insert((*k).into(), v.clone());
                }
                obj.insert("columns".into(), json!(self.columns));
                obj.insert("rows".into(), json!(self.rows));
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Where a command's main output goes.
#[derive(Debug, Clone, PartialEq)]
pub enum Sink {
    File(PathBuf),
    Stdout,
}

pub fn resolve_sink(out: &Option<PathBuf>, default_name: &str) -> Sink {
    if let Some(p) = out {
        return Sink::File(p.clone());
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => Sink::File(PathBuf::from(dir).join(default_name)),
        _ => Sink::Stdout,
    }
}

/// Write via a temporary sibling and rename, so a failed run leaves no partial file.
pub fn write_atomic(path: &Path, content: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("partial");
    let res = fs::write(&tmp, content).and_then(|_| fs::rename(&tmp, path));
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

pub fn emit(sink: &Sink, content: &str) -> io::Result<()> {
    match sink {
        Sink::File(p) => write_atomic(p, content.as_bytes()),
        Sink::Stdout => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()
        }
    }
}
