//! Flow-line CSV: `line_id,t,x,xi,C,escaped`, one row per sample.

use std::io;
use std::path::Path;

use sclg::flow::FlowLine;

use crate::bundle::{format_value, write_atomic};
use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 6] = ["line_id", "t", "x", "xi", "C", "escaped"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowRow {
    pub line_id: usize,
    pub t: f64,
    pub x: f64,
    pub xi: f64,
    pub c: f64,
    pub escaped: bool,
}

fn encode(lines: &[FlowLine]) -> io::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(HEADER)?;
    for line in lines {
        let (id, c, escaped) = (line.id.to_string(), format_value(line.c), if line.escaped() { "1" } else { "0" });
        for p in &line.points {
            w.write_record([id.as_str(), &format_value(p[0]), &format_value(p[1]), &format_value(p[2]), &c, escaped])?;
        }
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// The C column holds each line's conserved value, taken at its seed.
pub fn write_flow_lines(path: &Path, lines: &[FlowLine]) -> CliResult<()> {
    let bytes = encode(lines).map_err(|e| CliError::io(path, e))?;
    write_atomic(path, &bytes)
}

pub fn read_flow_lines(path: &Path) -> CliResult<Vec<FlowRow>> {
    let bad = |msg: String| CliError::io(path, io::Error::new(io::ErrorKind::InvalidData, msg));
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = r.headers().map_err(|e| bad(e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |k: usize| rec[k].parse::<f64>().map_err(|_| bad(format!("bad number `{}`", &rec[k])));
        rows.push(FlowRow {
            line_id: rec[0].parse().map_err(|_| bad(format!("bad line id `{}`", &rec[0])))?,
            t: num(1)?,
            x: num(2)?,
            xi: num(3)?,
            c: num(4)?,
            escaped: match &rec[5] {
                "0" => false,
                "1" => true,
                other => return Err(bad(format!("bad escaped flag `{other}`"))),
            },
        });
    }
    Ok(rows)
}

/// Reads seed points from a CSV with columns x and xi. A header row and
/// `#` comment lines are skipped.
pub fn read_seeds(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let bad = |msg: String| CliError::io(path, io::Error::new(io::ErrorKind::InvalidData, msg));
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let mut seeds = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if rec.len() != 2 {
            return Err(bad(format!("seed rows need two columns, got {}", rec.len())));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(x), Ok(xi)) => seeds.push((x, xi)),
            _ if k == 0 => continue,
            _ => return Err(bad(format!("bad seed row {:?}", rec))),
        }
    }
    Ok(seeds)
}
