use std::fmt;
use std::io::{BufReader, Read, Write};

use chrono::DateTime;
use serde::de::{self, DeserializeSeed, MapAccess, SeqAccess, Visitor};
use serde::Serialize;
use serde_json::Value;

use super::{sha256_hex, to_canonical_vec, ReadError};
use crate::graph::{TemporalHyperedge, Tick, TimeVaryingHypergraph};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IngestMode {
    /// Abort on the first invalid record.
    Strict,
    /// Skip invalid records, reporting each.
    Lenient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeEncoding {
    Ticks,
    /// ISO-8601 timestamps, converted to milliseconds since the epoch.
    Calendar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkDocument {
    pub name: String,
    pub time_unit: Option<String>,
    pub edges: Vec<TemporalHyperedge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedRecord {
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadOutcome {
    pub document: NetworkDocument,
    /// `None` when the document has no edges.
    pub encoding: Option<TimeEncoding>,
    /// Always empty in strict mode.
    pub skipped: Vec<SkippedRecord>,
}

struct State {
    mode: IngestMode,
    encoding: Option<TimeEncoding>,
    edges: Vec<TemporalHyperedge>,
    skipped: Vec<SkippedRecord>,
    // the real error behind a serde `custom` abort
    failure: Option<ReadError>,
}

impl State {
    fn record(&mut self, index: usize, value: Value) -> Result<(), ReadError> {
        match parse_record(index, value, &mut self.encoding) {
            Ok(edge) => self.edges.push(edge),
            Err(ReadError::RecordInvalid { index, reason }) if self.mode == IngestMode::Lenient => {
                self.skipped.push(SkippedRecord { index, reason })
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

enum Time {
    Tick(i64),
    Calendar(Result<i64, String>),
}

fn time_field(v: Option<&Value>, field: &str) -> Result<Time, String> {
    match v {
        None => Err(format!("missing {field:?}")),
        Some(Value::Number(n)) => n.as_i64().map(Time::Tick).ok_or_else(|| format!("{field:?} must be an integer tick")),
        Some(Value::String(s)) => Ok(Time::Calendar(
            DateTime::parse_from_rfc3339(s)
                .map(|t| t.timestamp_millis())
                .map_err(|e| format!("{field:?}: bad ISO-8601 timestamp {s:?}: {e}")),
        )),
        Some(_) => Err(format!("{field:?} must be an integer tick or an ISO-8601 timestamp")),
    }
}

fn parse_record(index: usize, value: Value, encoding: &mut Option<TimeEncoding>) -> Result<TemporalHyperedge, ReadError> {
    let invalid = |reason: String| ReadError::RecordInvalid { index, reason };
    let Value::Object(mut obj) = value else {
        return Err(invalid("record is not an object".into()));
    };
    let start = time_field(obj.get("start"), "start").map_err(invalid)?;
    let end = time_field(obj.get("end"), "end").map_err(invalid)?;

    let kind = |t: &Time| match t {
        Time::Tick(_) => TimeEncoding::Ticks,
        Time::Calendar(_) => TimeEncoding::Calendar,
    };
    let here = kind(&start);
    if kind(&end) != here || encoding.is_some_and(|e| e != here) {
        return Err(ReadError::MixedTimeEncodings { index });
    }
    *encoding = Some(here);
    let tick = |t: Time| match t {
        Time::Tick(x) => Ok(Tick(x)),
        Time::Calendar(r) => r.map(Tick),
    };
    let start = tick(start).map_err(invalid)?;
    let end = tick(end).map_err(invalid)?;

    let id = match obj.remove("id") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(invalid("\"id\" must be a string".into())),
        None => return Err(invalid("missing \"id\"".into())),
    };
    let participants = match obj.remove("participants") {
        Some(Value::Array(items)) => items
            .into_iter()
            .map(|p| match p {
                Value::String(s) => Ok(s),
                _ => Err(invalid("participants must be strings".into())),
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(invalid("\"participants\" must be an array".into())),
        None => return Err(invalid("missing \"participants\"".into())),
    };
    TemporalHyperedge::new(id, participants, start, end).map_err(|e| invalid(e.to_string()))
}

struct EdgesSeed<'a>(&'a mut State);

impl<'de> DeserializeSeed<'de> for EdgesSeed<'_> {
    type Value = ();

    fn deserialize<D: de::Deserializer<'de>>(self, d: D) -> Result<(), D::Error> {
        d.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for EdgesSeed<'_> {
    type Value = ();

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an array of edge records")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<(), A::Error> {
        let mut index = 0;
        // one record in memory at a time
        while let Some(value) = seq.next_element::<Value>()? {
            if let Err(e) = self.0.record(index, value) {
                self.0.failure = Some(e);
                return Err(de::Error::custom("record rejected"));
            }
            index += 1;
        }
        Ok(())
    }
}

struct DocumentVisitor<'a>(&'a mut State);

#[derive(Default)]
struct Header {
    name: Option<String>,
    time_unit: Option<String>,
}

impl<'de> Visitor<'de> for DocumentVisitor<'_> {
    type Value = Header;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a network document object")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Header, A::Error> {
        let mut header = Header::default();
        let (mut seen_edges, mut seen_schema) = (false, false);
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "edges" => {
                    if std::mem::replace(&mut seen_edges, true) {
                        return Err(de::Error::custom("duplicate key \"edges\""));
                    }
                    map.next_value_seed(EdgesSeed(&mut *self.0))?;
                }
                "name" => {
                    if header.name.is_some() {
                        return Err(de::Error::custom("duplicate key \"name\""));
                    }
                    header.name = Some(map.next_value()?);
                }
                "time_unit" => {
                    if header.time_unit.is_some() {
                        return Err(de::Error::custom("duplicate key \"time_unit\""));
                    }
                    header.time_unit = Some(map.next_value()?);
                }
                "schema" => {
                    if std::mem::replace(&mut seen_schema, true) {
                        return Err(de::Error::custom("duplicate key \"schema\""));
                    }
                    let v: Value = map.next_value()?;
                    if v.as_u64() != Some(SCHEMA_VERSION) {
                        self.0.failure = Some(ReadError::UnsupportedSchema(v.to_string()));
                        return Err(de::Error::custom("unsupported schema"));
                    }
                }
                _ => {
                    map.next_value::<de::IgnoredAny>()?;
                }
            }
        }
        if !seen_edges {
            return Err(de::Error::missing_field("edges"));
        }
        Ok(header)
    }
}

/// Parses a network document from `reader`.
pub fn read_network<R: Read>(reader: R, mode: IngestMode) -> Result<ReadOutcome, ReadError> {
    let mut state = State { mode, encoding: None, edges: Vec::new(), skipped: Vec::new(), failure: None };
    let mut de = serde_json::Deserializer::from_reader(BufReader::new(reader));
    let parsed = de::Deserializer::deserialize_map(&mut de, DocumentVisitor(&mut state)).and_then(|h| {
        de.end()?;
        Ok(h)
    });
    let header = match parsed {
        Ok(h) => h,
        Err(e) => return Err(state.failure.take().unwrap_or_else(|| e.into())),
    };
    Ok(ReadOutcome {
        document: NetworkDocument {
            name: header.name.unwrap_or_default(),
            time_unit: header.time_unit,
            edges: state.edges,
        },
        encoding: state.encoding,
        skipped: state.skipped,
    })
}

#[derive(Serialize)]
struct EdgeOut<'a> {
    id: &'a str,
    participants: &'a [String],
    start: i64,
    end: i64,
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    schema: u64,
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_unit: Option<&'a str>,
    edges: Vec<EdgeOut<'a>>,
}

fn edges_out(edges: &[TemporalHyperedge]) -> Vec<EdgeOut<'_>> {
    edges
        .iter()
        .map(|e| EdgeOut { id: e.id(), participants: e.participants(), start: e.start().get(), end: e.end().get() })
        .collect()
}

/// Writes `doc` as canonical JSON with integer ticks.
pub fn write_network<W: Write>(doc: &NetworkDocument, w: W) -> std::io::Result<()> {
    let out = DocumentOut {
        schema: SCHEMA_VERSION,
        name: &doc.name,
        time_unit: doc.time_unit.as_deref(),
        edges: edges_out(&doc.edges),
    };
    super::write_canonical(&out, w)
}

/// SHA-256 over the canonical edge list (input order, participants sorted).
/// Independent of document name and of the file's formatting.
pub fn network_digest(h: &TimeVaryingHypergraph) -> String {
    let records = h.to_records();
    sha256_hex(&to_canonical_vec(&edges_out(&records)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::g1;

    fn read(s: &str, mode: IngestMode) -> Result<ReadOutcome, ReadError> {
        read_network(s.as_bytes(), mode)
    }

    #[test]
    fn empty_document() {
        let r = read(r#"{"name":"g","edges":[]}"#, IngestMode::Strict).unwrap();
        assert_eq!(r.document.name, "g");
        assert!(r.document.edges.is_empty());
        assert_eq!(r.encoding, None);
    }

    #[test]
    fn g1_round_trip() {
        let h = g1();
        let doc = NetworkDocument { name: "G1".into(), time_unit: Some("ticks".into()), edges: h.to_records() };
        let mut buf = Vec::new();
        write_network(&doc, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            concat!(
                r#"{"edges":[{"end":3,"id":"e1","participants":["a","b"],"start":1},"#,
                r#"{"end":5,"id":"e2","participants":["b","c"],"start":2},"#,
                r#"{"end":4,"id":"e3","participants":["a","c","d"],"start":4}],"#,
                r#""name":"G1","schema":1,"time_unit":"ticks"}"#,
                "\n"
            )
        );
        let back = read_network(buf.as_slice(), IngestMode::Strict).unwrap();
        assert_eq!(back.document, doc);
        assert_eq!(TimeVaryingHypergraph::build(back.document.edges).unwrap(), h);
    }

    #[test]
    fn calendar_times_become_millis() {
        let r = read(
            r#"{"edges":[{"id":"x","participants":["a","b"],"start":"2023-04-01T00:00:00Z","end":"2023-04-01T00:00:01.5+00:00"}]}"#,
            IngestMode::Strict,
        )
        .unwrap();
        let e = &r.document.edges[0];
        assert_eq!(e.start(), Tick(1_680_307_200_000));
        assert_eq!(e.end(), Tick(1_680_307_201_500));
        assert_eq!(r.encoding, Some(TimeEncoding::Calendar));
    }

    #[test]
    fn mixed_encodings_rejected_in_both_modes() {
        let doc = r#"{"edges":[
            {"id":"x","participants":["a","b"],"start":"2023-04-01T00:00:00Z","end":"2023-04-02T00:00:00Z"},
            {"id":"y","participants":["a","b"],"start":5,"end":6}]}"#;
        for mode in [IngestMode::Strict, IngestMode::Lenient] {
            assert!(matches!(read(doc, mode), Err(ReadError::MixedTimeEncodings { index: 1 })));
        }
        let within = r#"{"edges":[{"id":"x","participants":["a","b"],"start":1,"end":"2023-04-02T00:00:00Z"}]}"#;
        assert!(matches!(read(within, IngestMode::Strict), Err(ReadError::MixedTimeEncodings { index: 0 })));
    }

    #[test]
    fn strict_aborts_lenient_skips() {
        let doc = r#"{"name":"g","edges":[
            {"id":"ok","participants":["a","b"],"start":1,"end":2},
            {"id":"backwards","participants":["a","b"],"start":3,"end":2},
            {"id":"lonely","participants":["a"],"start":1,"end":2},
            7,
            {"id":"ok2","participants":["b","c"],"start":1,"end":2}]}"#;
        match read(doc, IngestMode::Strict) {
            Err(ReadError::RecordInvalid { index: 1, reason }) => assert!(reason.contains("after end"), "{reason}"),
            other => panic!("{other:?}"),
        }
        let r = read(doc, IngestMode::Lenient).unwrap();
        assert_eq!(r.document.edges.len(), 2);
        assert_eq!(r.skipped.iter().map(|s| s.index).collect::<Vec<_>>(), [1, 2, 3]);
    }

    #[test]
    fn structural_errors() {
        for bad in ["", "[]", "{", r#"{"name":"g"}"#, r#"{"edges":[],"edges":[]}"#, r#"{"edges":[]} x"#, "\u{0}"] {
            assert!(matches!(read(bad, IngestMode::Lenient), Err(ReadError::MalformedJson(_))), "{bad:?}");
        }
        assert!(matches!(
            read(r#"{"schema":2,"edges":[]}"#, IngestMode::Strict),
            Err(ReadError::UnsupportedSchema(_))
        ));
        assert!(read(r#"{"schema":1,"edges":[],"extra":{"x":[1,2]}}"#, IngestMode::Strict).is_ok());
    }

    #[test]
    fn non_integer_ticks_are_invalid_records() {
        for t in ["1.5", "1e3", "18446744073709551615", "null", "true"] {
            let doc = format!(r#"{{"edges":[{{"id":"x","participants":["a","b"],"start":{t},"end":2}}]}}"#);
            assert!(matches!(read(&doc, IngestMode::Strict), Err(ReadError::RecordInvalid { index: 0, .. })), "{t}");
        }
    }

    #[test]
    fn digest_ignores_name_and_layout() {
        let h = g1();
        let shuffled = r#"{ "name" : "other", "edges" : [
            {"start":1,"end":3,"id":"e1","participants":["b","a"]},
            {"id":"e2","participants":["b","c"],"start":2,"end":5},
            {"id":"e3","participants":["d","c","a"],"start":4,"end":4} ] }"#;
        let r = read(shuffled, IngestMode::Strict).unwrap();
        let h2 = TimeVaryingHypergraph::build(r.document.edges).unwrap();
        assert_eq!(network_digest(&h), network_digest(&h2));
        assert_ne!(network_digest(&h), network_digest(&crate::graph::fixtures::g2()));
    }
}
