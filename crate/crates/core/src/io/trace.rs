//! Alarm trace export: CSV rows per `Q_a` and a JSON mirror of [`AlarmTrace`].

use std::fmt::Write as _;
use std::path::Path;

use crate::alarm::AlarmTrace;
use crate::error::Result;

/// One row per slice: `q_a`, then `lo_a,hi_a,lo_b,hi_b` per classifier, then
/// `safe_exists` as 0/1. Empty intervals are written as `lo > hi`.
pub fn trace_to_csv(trace: &AlarmTrace) -> String {
    let mut out = String::from("q_a");
    for id in &trace.classifiers {
        write!(out, ",{id}_lo_a,{id}_hi_a,{id}_lo_b,{id}_hi_b").unwrap();
    }
    out.push_str(",safe_exists\n");
    for s in &trace.slices {
        write!(out, "{}", s.q_a).unwrap();
        for c in &s.classifiers {
            write!(
                out,
                ",{},{},{},{}",
                c.interval_a.lo, c.interval_a.hi, c.interval_b.lo, c.interval_b.hi
            )
            .unwrap();
        }
        writeln!(out, ",{}", u8::from(s.safe_exists)).unwrap();
    }
    out
}

pub fn trace_to_json(trace: &AlarmTrace) -> String {
    let mut s = serde_json::to_string_pretty(trace).expect("trace serialization cannot fail");
    s.push('\n');
    s
}

pub fn trace_from_json(text: &str) -> Result<AlarmTrace> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_trace_json(path: &Path) -> Result<AlarmTrace> {
    trace_from_json(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Csv,
    Json,
    Svg,
}

impl TraceFormat {
    /// By extension; anything other than `.json` or `.svg` is CSV.
    pub fn from_path(path: &Path) -> TraceFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => TraceFormat::Json,
            Some("svg") => TraceFormat::Svg,
            _ => TraceFormat::Csv,
        }
    }
}

pub fn emit_trace(trace: &AlarmTrace, format: TraceFormat, path: &Path) -> Result<()> {
    let text = match format {
        TraceFormat::Csv => trace_to_csv(trace),
        TraceFormat::Json => trace_to_json(trace),
        TraceFormat::Svg => super::svg::render_traces(std::slice::from_ref(trace)),
    };
    super::write_atomic(path, text.as_bytes())
}
