use std::io::{BufReader, BufWriter, Read, Write};
use std::str::FromStr;

use super::{to_canonical_vec, ReadError};
use crate::simulate::DiffusionResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    /// One `source,vertex,metric,value` row per label.
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

fn csv_field(s: &str) -> std::borrow::Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\"")).into()
    } else {
        s.into()
    }
}

pub fn write_results<W: Write>(result: &DiffusionResult, format: OutputFormat, mut w: W) -> std::io::Result<()> {
    match format {
        OutputFormat::Json => write_json(result, w),
        OutputFormat::Csv => {
            writeln!(w, "source,vertex,metric,value")?;
            for (source, rec) in &result.sources {
                for (metric, labels) in &rec.metrics {
                    for (vertex, value) in &labels.values {
                        writeln!(w, "{},{},{},{}", csv_field(source), csv_field(vertex), metric, value)?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn canonical_fragment<T: serde::Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut bytes = to_canonical_vec(value);
    bytes.pop();
    bytes
}

/// Same bytes as `write_canonical(result)`, built one source at a time.
fn write_json<W: Write>(result: &DiffusionResult, w: W) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    w.write_all(b"{\"provenance\":")?;
    w.write_all(&canonical_fragment(&result.provenance))?;
    write!(w, ",\"schema\":{},\"sources\":{{", result.schema)?;
    for (i, (source, rec)) in result.sources.iter().enumerate() {
        if i > 0 {
            w.write_all(b",")?;
        }
        serde_json::to_writer(&mut w, source)?;
        w.write_all(b":")?;
        w.write_all(&canonical_fragment(rec))?;
    }
    w.write_all(b"},\"summary\":")?;
    w.write_all(&canonical_fragment(&result.summary))?;
    writeln!(w, ",\"vertex_count\":{}}}", result.vertex_count)?;
    w.flush()
}

pub fn read_results<R: Read>(reader: R) -> Result<DiffusionResult, ReadError> {
    Ok(serde_json::from_reader(BufReader::new(reader))?)
}
