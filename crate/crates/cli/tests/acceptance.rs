//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p thd-cli --test acceptance`; pass criterion numbers
//! after `--` to run a subset (`-- 1 3`).

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode, Stdio};
use std::sync::OnceLock;
use std::thread;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

use thd_core::gen::gen_small;
use thd_core::graph::TICK_LIMIT;
use thd_core::io::{read_network, write_network, IngestMode, NetworkDocument};
use thd_core::oracle::{differential_all, oracle_distances, DifferentialReport};
use thd_core::paths::{
    earliest_arrival_layers, fastest, fastest_within, foremost, foremost_within, reconstruct_walk, shortest,
    shortest_within,
};
use thd_core::{DistanceLabels, Metric, TemporalHyperedge, Tick, TimeVaryingHypergraph, VertexIdx};

const GIB: u64 = 1 << 30;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn thd() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_thd"));
    c.env_remove("THD_THREADS");
    c
}

fn run_ok(cmd: &mut Command) -> Result<String, String> {
    let o = cmd.output().map_err(|e| e.to_string())?;
    if o.status.success() {
        Ok(String::from_utf8_lossy(&o.stdout).into_owned())
    } else {
        Err(format!("{:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr).trim()))
    }
}

// criteria 1 and 2 share one differential run
struct Differential {
    report: DifferentialReport,
    networks: usize,
    elapsed: Duration,
}

fn differential_run() -> &'static Differential {
    static RUN: OnceLock<Differential> = OnceLock::new();
    RUN.get_or_init(|| {
        let clock = Instant::now();
        let mut report = DifferentialReport::default();
        for seed in 0..1000 {
            report.absorb(differential_all(&gen_small(seed), Tick(0)));
        }
        Differential { report, networks: 1000, elapsed: clock.elapsed() }
    })
}

fn oracle_equivalence() -> Verdict {
    let d = differential_run();
    let pass = d.report.mismatches.is_empty() && d.elapsed < Duration::from_secs(60);
    let mut detail = format!(
        "{} networks, {} labels over 3 metrics, {} mismatches in {:.1} s (limit 60 s)",
        d.networks,
        d.report.labels_compared,
        d.report.mismatches.len(),
        d.elapsed.as_secs_f64()
    );
    if let Some(m) = d.report.mismatches.first() {
        detail.push_str(&format!("; first: {m:?}"));
    }
    verdict(pass, detail)
}

fn witness_soundness() -> Verdict {
    let d = differential_run();
    let r = &d.report;
    let mut detail = format!("{} witness walks validated, {} violations", r.walks_checked, r.witness_failures.len());
    if let Some(w) = r.witness_failures.first() {
        detail.push_str(&format!("; first: {w:?}"));
    }
    verdict(r.walks_checked > 0 && r.witness_failures.is_empty(), detail)
}

fn edge(id: &str, vs: &[&str], start: i64, end: i64) -> TemporalHyperedge {
    TemporalHyperedge::new(id, vs.iter().map(|s| s.to_string()).collect(), Tick(start), Tick(end)).unwrap()
}

type Row = (&'static str, Metric, &'static [(&'static str, i64)]);

const G1_MATRIX: &[Row] = &[
    ("a", Metric::Foremost, &[("a", 0), ("b", 1), ("c", 2), ("d", 4)]),
    ("a", Metric::Shortest, &[("a", 0), ("b", 1), ("c", 1), ("d", 1)]),
    ("a", Metric::Fastest, &[("a", 0), ("b", 0), ("c", 0), ("d", 0)]),
    ("b", Metric::Foremost, &[("a", 1), ("b", 0), ("c", 2), ("d", 4)]),
    ("b", Metric::Shortest, &[("a", 1), ("b", 0), ("c", 1), ("d", 2)]),
    ("b", Metric::Fastest, &[("a", 0), ("b", 0), ("c", 0), ("d", 0)]),
    ("c", Metric::Foremost, &[("a", 2), ("b", 2), ("c", 0), ("d", 4)]),
    ("c", Metric::Shortest, &[("a", 1), ("b", 1), ("c", 0), ("d", 1)]),
    ("c", Metric::Fastest, &[("a", 0), ("b", 0), ("c", 0), ("d", 0)]),
    ("d", Metric::Foremost, &[("a", 4), ("b", 4), ("c", 4), ("d", 0)]),
    ("d", Metric::Shortest, &[("a", 1), ("b", 2), ("c", 1), ("d", 0)]),
    ("d", Metric::Fastest, &[("a", 0), ("b", 0), ("c", 0), ("d", 0)]),
];

const G2_MATRIX: &[Row] = &[
    ("a", Metric::Foremost, &[("a", 0), ("b", 0), ("d", 5)]),
    ("a", Metric::Shortest, &[("a", 0), ("b", 1), ("d", 2)]),
    ("a", Metric::Fastest, &[("a", 0), ("b", 0), ("d", 5)]),
    ("b", Metric::Foremost, &[("a", 0), ("b", 0), ("d", 5)]),
    ("b", Metric::Shortest, &[("a", 1), ("b", 0), ("d", 1)]),
    ("b", Metric::Fastest, &[("a", 0), ("b", 0), ("d", 0)]),
    ("d", Metric::Foremost, &[("b", 5), ("d", 0)]),
    ("d", Metric::Shortest, &[("b", 1), ("d", 0)]),
    ("d", Metric::Fastest, &[("b", 0), ("d", 0)]),
];

fn fixture_matrix() -> Verdict {
    let g1 = TimeVaryingHypergraph::build([
        edge("e1", &["a", "b"], 1, 3),
        edge("e2", &["b", "c"], 2, 5),
        edge("e3", &["a", "c", "d"], 4, 4),
    ])
    .unwrap();
    let g2 = TimeVaryingHypergraph::build([edge("e4", &["a", "b"], 0, 0), edge("e5", &["b", "d"], 5, 5)]).unwrap();

    let named = |h: &TimeVaryingHypergraph, m: &BTreeMap<VertexIdx, i64>| -> BTreeMap<String, i64> {
        m.iter().map(|(v, x)| (h.vertex_name(*v).to_owned(), *x)).collect()
    };
    let (mut cells, mut wrong) = (0, Vec::new());
    for (label, h, matrix) in [("G1", &g1, G1_MATRIX), ("G2", &g2, G2_MATRIX)] {
        for &(source, metric, row) in matrix {
            let want: BTreeMap<String, i64> = row.iter().map(|(v, x)| (v.to_string(), *x)).collect();
            let labels = match metric {
                Metric::Foremost => foremost(h, source, Tick(0)),
                Metric::Shortest => shortest(h, source, Tick(0), h.vertex_count()),
                Metric::Fastest => fastest(h, source, Tick(0)),
            }
            .unwrap();
            let oracle = oracle_distances(h, source, Tick(0), h.vertex_count()).unwrap();
            cells += h.vertex_count();
            for (who, got) in [("paths", named(h, labels.values())), ("oracle", named(h, &oracle.values(metric)))] {
                if got != want {
                    wrong.push(format!("{label} {who} {metric} from {source}: {got:?}"));
                }
            }
        }
    }
    let detail = match wrong.first() {
        None => format!("{cells} cells on G1 and G2 match paths and oracle"),
        Some(w) => format!("{} rows differ; first: {w}", wrong.len()),
    };
    verdict(wrong.is_empty(), detail)
}

fn determinism() -> Verdict {
    match determinism_inner() {
        Ok(detail) => verdict(true, detail),
        Err(e) => verdict(false, e),
    }
}

fn determinism_inner() -> Result<String, String> {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name);
    let net = p("net.json");
    let s = |path: &Path| path.to_str().unwrap().to_owned();
    run_ok(thd().args(["gen", "--vertices", "2000", "--edges", "10000", "--seed", "2024"]).args([
        "--span",
        "20000",
        "--max-interval",
        "400",
        "-o",
        &s(&net),
    ]))?;
    let simulate = |out: &Path, extra: &[&str]| {
        let mut c = thd();
        c.args(["simulate", &s(&net), "-o", &s(out), "--sample", "240", "--seed", "7"])
            .args(["--metric", "foremost,shortest,fastest", "--checkpoint-every", "16"])
            .args(extra);
        c
    };

    // witness walks are large, so they are compared on a smaller sample
    let mut witnessed = Vec::new();
    for threads in ["1", "8"] {
        let out = p(&format!("w{threads}.json"));
        run_ok(
            thd()
                .args(["simulate", &s(&net), "-o", &s(&out), "--sample", "40", "--seed", "7", "--keep-witnesses"])
                .args(["--metric", "foremost,shortest,fastest", "--parallelism", threads]),
        )?;
        witnessed.push(fs::read(&out).map_err(|e| e.to_string())?);
    }
    if witnessed[0] != witnessed[1] {
        return Err("results with witnesses differ between parallelism 1 and 8".into());
    }

    let mut digests = Vec::new();
    for threads in ["1", "2", "8"] {
        let out = p(&format!("t{threads}.json"));
        run_ok(simulate(&out, &[]).env("THD_THREADS", threads))?;
        digests.push(fs::read(&out).map_err(|e| e.to_string())?);
    }
    let reference = &digests[0];
    if digests.iter().any(|d| d != reference) {
        return Err("result bytes differ between parallelism 1, 2 and 8".into());
    }

    // clean halt, then resume on a different thread count
    let ck = p("halt.ck");
    let out = p("halted.json");
    run_ok(&mut simulate(&out, &["--checkpoint", &s(&ck), "--halt-after", "100", "--parallelism", "2"]))?;
    if out.exists() {
        return Err("halted run wrote a result file".into());
    }
    run_ok(&mut simulate(&out, &["--checkpoint", &s(&ck), "--parallelism", "8"]))?;
    if &fs::read(&out).map_err(|e| e.to_string())? != reference {
        return Err("halt-and-resume result differs".into());
    }

    // hard kill once a checkpoint exists, then resume
    let ck = p("kill.ck");
    let out = p("killed.json");
    let mut child = simulate(&out, &["--checkpoint", &s(&ck), "--parallelism", "1"])
        .stdout(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    let clock = Instant::now();
    let sealed = |ck: &Path| fs::read(ck).is_ok_and(|b| b.windows(9).any(|w| w == b"\"digest\":"));
    while !sealed(&ck) && clock.elapsed() < Duration::from_secs(120) {
        thread::sleep(Duration::from_millis(5));
    }
    let killed = child.try_wait().map_err(|e| e.to_string())?.is_none();
    let _ = child.kill();
    let _ = child.wait();
    let _ = fs::remove_file(&out);
    run_ok(&mut simulate(&out, &["--checkpoint", &s(&ck), "--parallelism", "8"]))?;
    if &fs::read(&out).map_err(|e| e.to_string())? != reference {
        return Err("kill-and-resume result differs".into());
    }
    Ok(format!(
        "10^4-edge network, 240 sources x 3 metrics: {} identical bytes at parallelism 1/2/8, after halt+resume and \
         after {}; 40 sources with witnesses: {} identical bytes at parallelism 1/8",
        reference.len(),
        if killed { "SIGKILL+resume" } else { "a run that finished before the kill (resume from complete checkpoint)" },
        witnessed[0].len()
    ))
}

fn scale_smoke() -> Verdict {
    let limit = Duration::from_secs(600);
    let clock = Instant::now();
    let child = thd()
        .args(["--json", "bench", "--vertices", "37103", "--edges", "309740", "--sources", "100", "--seed", "0"])
        .args(["--metric", "foremost"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(e) => return verdict(false, e.to_string()),
    };
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) if clock.elapsed() > limit => {
                let _ = child.kill();
                return verdict(false, "bench exceeded 10 minutes");
            }
            Ok(None) => thread::sleep(Duration::from_millis(50)),
            Err(e) => return verdict(false, e.to_string()),
        }
    }
    let wall = clock.elapsed();
    let o = child.wait_with_output().unwrap();
    if !o.status.success() {
        return verdict(false, format!("bench failed: {}", String::from_utf8_lossy(&o.stderr)));
    }
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let peak = r["peak_memory_bytes"].as_u64();
    let counts = (r["vertices"].as_u64(), r["edges"].as_u64(), r["sources"].as_u64());
    let pass = counts == (Some(37_103), Some(309_740), Some(100)) && wall < limit && peak.is_some_and(|p| p < 4 * GIB);
    verdict(
        pass,
        format!(
            "{} vertices, {} edges built and validated; foremost for {} sources in {:.1} s; total {:.1} s (limit 600 s); \
             peak memory {} (limit 4 GiB)",
            r["vertices"],
            r["edges"],
            r["sources"],
            r["query_seconds"].as_f64().unwrap_or(f64::NAN),
            wall.as_secs_f64(),
            peak.map_or("unmeasured".into(), |b| format!("{:.0} MiB", b as f64 / (1 << 20) as f64)),
        ),
    )
}

// ---- fuzzing ----

const TOKENS: &[&str] = &[
    "{", "}", "[", "]", ",", ":", "\"", "\\", "null", "true", "-", "0", "-0", "1e400", "9223372036854775807",
    "-9223372036854775808", "4611686018427387904", "18446744073709551616", "1.5", "\"edges\"", "\"schema\"",
    "\"participants\"", "\"start\"", "\"end\"", "\"id\"", "\"2021-03-04T05:06:07Z\"", "\"2021-13-40T99:00:00Z\"",
    "\"\\u0000\"", "\"\\ud800\"", "\u{00e9}", "\u{1F600}", "[]", "{}", "[[[[[[[[", "]]]]]]]]",
];

fn corpus() -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for seed in 0..32 {
        let doc = NetworkDocument {
            name: format!("seed {seed}"),
            time_unit: (seed % 3 == 0).then(|| "s".to_owned()),
            edges: gen_small(seed).to_records(),
        };
        let mut bytes = Vec::new();
        write_network(&doc, &mut bytes).unwrap();
        out.push(bytes);
    }
    out.push(
        br#"{"schema":1,"name":"cal","edges":[{"id":"r1","participants":["x","y"],"start":"2021-03-04T05:06:07Z","end":"2021-03-04T06:00:00+01:00"},{"id":"r2","participants":["y","z","w"],"start":"2021-03-04T05:06:07.250Z","end":"2021-03-05T00:00:00Z"}]}"#
            .to_vec(),
    );
    out.push(br#"{"edges":[],"extra":{"nested":[1,2,{"k":null}]}}"#.to_vec());
    out
}

const JSON_BYTES: &[u8] = b"{}[]\":,-0123456789eE.tfnu\\ \n";

fn mutate(rng: &mut ChaCha8Rng, base: &[u8], corpus: &[Vec<u8>]) -> Vec<u8> {
    let mut b = base.to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        let pos = if b.is_empty() { 0 } else { rng.gen_range(0..b.len()) };
        match rng.gen_range(0..8) {
            0 if !b.is_empty() => b[pos] ^= 1 << rng.gen_range(0..8),
            1 if !b.is_empty() => b[pos] = *JSON_BYTES.choose(rng).unwrap(),
            2 => {
                let t = TOKENS[rng.gen_range(0..TOKENS.len())].as_bytes();
                b.splice(pos..pos, t.iter().copied());
            }
            3 => {
                let end = (pos + rng.gen_range(1..16)).min(b.len());
                b.drain(pos..end);
            }
            4 => b.truncate(pos),
            5 => {
                let other = &corpus[rng.gen_range(0..corpus.len())];
                let cut = rng.gen_range(0..=other.len());
                b.truncate(pos);
                b.extend_from_slice(&other[cut..]);
            }
            6 if !b.is_empty() => {
                let end = (pos + rng.gen_range(1..64)).min(b.len());
                let chunk = b[pos..end].to_vec();
                b.splice(pos..pos, chunk);
            }
            _ => {
                // make a digit run huge
                if let Some(d) = b.iter().skip(pos).position(u8::is_ascii_digit) {
                    b.splice(pos + d..pos + d, b"99999999999999999999".iter().copied());
                }
            }
        }
    }
    b
}

fn panic_message(e: Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "non-string panic".into())
}

/// Checks one parsed document; `Err` describes a violated invariant.
fn check_document(bytes: &[u8], mode: IngestMode) -> Result<bool, String> {
    let outcome = match read_network(bytes, mode) {
        Ok(o) => o,
        Err(e) => {
            let _ = e.to_string();
            return Ok(false);
        }
    };
    if mode == IngestMode::Strict && !outcome.skipped.is_empty() {
        return Err("strict read skipped records".into());
    }
    if !outcome.skipped.windows(2).all(|w| w[0].index < w[1].index) {
        return Err("skipped record indices are not increasing".into());
    }
    for e in &outcome.document.edges {
        let ok = e.start() <= e.end()
            && e.participants().len() >= 2
            && e.start().get().abs() <= TICK_LIMIT
            && e.end().get().abs() <= TICK_LIMIT;
        if !ok {
            return Err(format!("accepted an invalid edge {:?}", e.id()));
        }
    }
    let mut again = Vec::new();
    write_network(&outcome.document, &mut again).map_err(|e| e.to_string())?;
    let back = read_network(again.as_slice(), IngestMode::Strict).map_err(|e| format!("re-read failed: {e}"))?;
    if back.document != outcome.document {
        return Err("write/read round trip changed the document".into());
    }
    if let Ok(h) = TimeVaryingHypergraph::build(outcome.document.edges) {
        if h.edge_count() != back.document.edges.len() {
            return Err("build dropped edges".into());
        }
    }
    Ok(true)
}

/// Runs `f` on every input, converting panics and slow inputs into failures.
fn fuzz_loop<F>(runs: u64, seed: u64, mut f: F) -> (u64, Duration, Vec<String>)
where
    F: FnMut(&mut ChaCha8Rng) -> Result<bool, String>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut accepted, mut slowest, mut failures) = (0, Duration::ZERO, Vec::new());
    for i in 0..runs {
        let clock = Instant::now();
        match panic::catch_unwind(AssertUnwindSafe(|| f(&mut rng))) {
            Ok(Ok(true)) => accepted += 1,
            Ok(Ok(false)) => {}
            Ok(Err(v)) => failures.push(format!("input {i}: {v}")),
            Err(p) => failures.push(format!("input {i}: panic: {}", panic_message(p))),
        }
        let took = clock.elapsed();
        slowest = slowest.max(took);
        if took > Duration::from_secs(10) {
            failures.push(format!("input {i}: took {:.1} s", took.as_secs_f64()));
        }
    }
    (accepted, slowest, failures)
}

fn random_tick(rng: &mut ChaCha8Rng) -> i64 {
    match rng.gen_range(0..10) {
        0 => [-TICK_LIMIT, TICK_LIMIT, -TICK_LIMIT - 1, TICK_LIMIT + 1, i64::MIN, i64::MAX][rng.gen_range(0..6)],
        1 => rng.gen_range(-TICK_LIMIT..=TICK_LIMIT),
        _ => rng.gen_range(-3..24),
    }
}

/// A generator output with a few records corrupted or pushed to extremes.
fn mutated_records(rng: &mut ChaCha8Rng) -> Vec<(String, Vec<String>, i64, i64)> {
    let mut recs: Vec<(String, Vec<String>, i64, i64)> = gen_small(rng.gen())
        .to_records()
        .into_iter()
        .map(|e| (e.id().to_owned(), e.participants().to_vec(), e.start().get(), e.end().get()))
        .collect();
    for _ in 0..rng.gen_range(0..4) {
        let i = rng.gen_range(0..recs.len());
        let j = rng.gen_range(0..recs.len());
        match rng.gen_range(0..9) {
            0 => recs[i].2 = random_tick(rng),
            1 => recs[i].3 = random_tick(rng),
            2 => (recs[i].2, recs[i].3) = (recs[i].3, recs[i].2),
            3 => recs[i].0 = recs[j].0.clone(),
            4 => {
                let p = recs[i].1[0].clone();
                recs[i].1.push(p);
            }
            5 => recs[i].1.truncate(1),
            6 => recs[i].1[0] = String::new(),
            7 => recs[i].1.push(format!("new{}", rng.gen_range(0..3))),
            _ => recs[i].0 = String::new(),
        }
    }
    recs
}

fn check_paths(rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let recs = mutated_records(rng);
    let edges: Result<Vec<_>, _> =
        recs.into_iter().map(|(id, ps, s, e)| TemporalHyperedge::new(id, ps, Tick(s), Tick(e))).collect();
    let Ok(edges) = edges else { return Ok(false) };
    let Ok(h) = TimeVaryingHypergraph::build(edges) else { return Ok(false) };
    let source = VertexIdx(rng.gen_range(0..h.vertex_count() as u32));
    let t0 = Tick(if rng.gen_bool(0.9) { rng.gen_range(-3..24) } else { random_tick(rng) });
    let f = foremost_within(&h, source, t0, None);
    let fa = fastest_within(&h, source, t0, None);
    let sh = shortest_within(&h, source, t0, h.vertex_count(), None).map_err(|e| e.to_string())?;
    if f.get(source) != Some(t0.get()) {
        return Err("source label is not t0".into());
    }
    let keys = |l: &DistanceLabels| l.values().keys().copied().collect::<BTreeSet<_>>();
    if keys(&f) != keys(&fa) || keys(&f) != keys(&sh) {
        return Err("metrics reach different vertex sets".into());
    }
    for labels in [&f, &fa, &sh] {
        for (&v, &value) in labels.values() {
            let walk = reconstruct_walk(&h, labels, v).map_err(|e| e.to_string())?;
            walk.validate(&h).map_err(|e| format!("{} witness: {e}", labels.metric()))?;
            if walk.metric_value(labels.metric()) != value || walk.departure < t0 {
                return Err(format!("{} witness does not attain its label", labels.metric()));
            }
        }
    }
    for (&v, &d) in fa.values() {
        if (d as i128) > f.get(v).unwrap() as i128 - t0.get() as i128 {
            return Err("fastest exceeds foremost elapsed time".into());
        }
    }
    Ok(true)
}

fn fuzz() -> Verdict {
    let corpus = corpus();
    let quiet = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let (parsed, slow_read, mut failures) = fuzz_loop(1_000_000, 0xF0F0, |rng| {
        let base = &corpus[rng.gen_range(0..corpus.len())];
        let input = mutate(rng, base, &corpus);
        let mode = if rng.gen_bool(0.5) { IngestMode::Strict } else { IngestMode::Lenient };
        check_document(&input, mode)
    });
    let (built, slow_paths, more) = fuzz_loop(100_000, 0x0F0F, check_paths);
    panic::set_hook(quiet);
    failures.extend(more);
    let mut detail = format!(
        "read_network: 10^6 inputs ({parsed} accepted, slowest {:.1} ms); build+paths: 10^5 inputs ({built} built, \
         slowest {:.1} ms); {} crashes/hangs/violations",
        slow_read.as_secs_f64() * 1e3,
        slow_paths.as_secs_f64() * 1e3,
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    verdict(failures.is_empty(), detail)
}

// ---- invariants ----

fn invariants() -> Verdict {
    const INSTANCES: u64 = 500;
    let mut counts = BTreeMap::new();
    let mut first = None;
    let mut note = |name: &'static str, ok: bool, what: String| {
        let c = counts.entry(name).or_insert((0u64, 0u64));
        c.0 += 1;
        if !ok {
            c.1 += 1;
            first.get_or_insert(format!("{name}: {what}"));
        }
    };
    let keys = |l: &DistanceLabels| l.values().keys().copied().collect::<BTreeSet<_>>();

    for i in 0..INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(70_000 + i);
        let h = gen_small(1_000_000 + i);
        let t0 = Tick(rng.gen_range(0..=20));
        let later = Tick(t0.get() + rng.gen_range(0..=10));
        let n = h.vertex_count();
        let (mut reach, mut mono, mut bound, mut layers) = (true, true, true, true);
        for s in h.vertices() {
            let f = foremost_within(&h, s, t0, None);
            let sh = shortest_within(&h, s, t0, n, None).unwrap();
            let fa = fastest_within(&h, s, t0, None);
            reach &= keys(&f) == keys(&sh) && keys(&f) == keys(&fa);

            let f_later = foremost_within(&h, s, later, None);
            mono &= f_later.values().iter().all(|(v, &a)| f.get(*v).is_some_and(|e| e <= a));

            bound &= fa.values().iter().all(|(v, &d)| d <= f.get(*v).unwrap() - t0.get());

            let profile = earliest_arrival_layers(&h, s, t0, n);
            let last = profile.last().unwrap();
            layers &= profile.len() <= n
                && profile.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a.is_none() || b.is_some_and(|b| b <= a.unwrap())))
                && h.vertices().all(|v| last[v.index()].map(Tick::get) == f.get(v))
                && sh.values().iter().all(|(v, &k)| profile.iter().position(|l| l[v.index()].is_some()) == Some(k as usize));
        }
        let tag = format!("instance {i} (t0 {t0})");
        note("reachability consistency", reach, tag.clone());
        note("foremost monotone in t0", mono, tag.clone());
        note("fastest <= foremost - t0", bound, tag.clone());
        note("layered DP stabilizes at foremost", layers, tag);
    }
    let parts: Vec<String> = counts.iter().map(|(k, (n, bad))| format!("{k}: {bad}/{n}")).collect();
    let pass = counts.values().all(|&(n, bad)| n == INSTANCES && bad == 0);
    let mut detail = format!("violations per property over seeded instances: {}", parts.join(", "));
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    verdict(pass, detail)
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "witness soundness", witness_soundness),
        (3, "fixture matrix", fixture_matrix),
        (4, "determinism", determinism),
        (5, "scale smoke test", scale_smoke),
        (6, "fuzz robustness", fuzz),
        (7, "invariant suite", invariants),
    ];
    let selected: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, check) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let clock = Instant::now();
        let v = check();
        ran += 1;
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} criterion {id} ({name}): {} [{:.1} s]",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            clock.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
