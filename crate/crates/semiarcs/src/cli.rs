//! Command-line front end.
//!
//! Every subcommand emits exactly one JSON document — canonical form, sorted
//! keys, no floats — on standard output (or to `--out`).  Exit codes follow a
//! strict contract:
//!
//! - `0`: the command succeeded and any checked claim verified true;
//! - `1`: the command ran but the claim verified false (a set that is not a
//!   semiarc, a failed theorem check, inequivalent point sets);
//! - `2`: usage or input error, with a one-line diagnostic on stderr.

use crate::cert::{canonical_json, plane_label, resolve_plane_ref, CertStore, STORE_ENV};
use crate::constructions::{documented_grid, Family};
use crate::plane::{are_equivalent, Plane};
use crate::search::theorems::{verify_theorem, TheoremId};
use crate::search::{
    census, replay_matches, run_search, SearchCertificate, SearchMode, SearchOptions,
};
use crate::semiarc::{PointSet, Verdict};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "semiarcs",
    version,
    about = "Construct, verify, classify and exhaustively search t-semiarcs \
             with long secants in finite projective planes",
    disable_help_subcommand = true
)]
struct Cli {
    /// Cap the number of worker threads used by searches.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Certificate store root; defaults to $SEMIARCS_STORE or ./certificates.
    #[arg(long, global = true, value_name = "DIR")]
    store: Option<PathBuf>,
    /// Write the JSON output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a documented family and emit its certificate.
    Construct(ConstructArgs),
    /// Check a certificate: a construction's semiarc claim, or a search
    /// certificate's counts by replaying it.
    Verify(VerifyArgs),
    /// Classify a point set: tangent counts, verdict, secant spectrum.
    Classify(ClassifyArgs),
    /// Exhaustive anchored search for t-semiarcs with a (q+1−t)-secant.
    Search(SearchArgs),
    /// Run the searches for every admissible t of one plane.
    Census(CensusArgs),
    /// Check a named structural result over a range of orders.
    Check(CheckArgs),
    /// Decide projective equivalence of two point sets.
    Equiv(EquivArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Family id (`projective-triangle`, `vt-config`, `thm-I-i`, `thm-I-ii`,
    /// `thm-I-iii`, `thm-II-ii`, `thm-II-iii`, `suetake`, `km-1`..`km-4`,
    /// `conic-1`, `conic-2`, `qm2-quadrangle`, `qm2-quadrilateral`,
    /// `qm2-fano`).
    family: Option<String>,
    /// Full family description as JSON (overrides the flags below).
    #[arg(long, value_name = "JSON")]
    spec: Option<String>,
    /// List every documented (family, parameters) pair instead of building.
    #[arg(long)]
    grid: bool,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, value_name = "LINE")]
    l1: Option<u32>,
    #[arg(long, value_name = "LINE")]
    l2: Option<u32>,
    #[arg(long, value_name = "LINE")]
    line: Option<u32>,
    #[arg(long)]
    sub_order: Option<u32>,
    #[arg(long)]
    x_size: Option<u32>,
    #[arg(long)]
    z_size: Option<u32>,
    /// Field elements or point indices, comma-separated where a family takes
    /// a list (`--a 1,4` for suetake; `--z` is a single point for the conic
    /// families and a list for the chain families).
    #[arg(long, value_name = "CSV")]
    a: Option<String>,
    #[arg(long, value_name = "CSV")]
    basis: Option<String>,
    #[arg(long, value_name = "CSV")]
    orbits: Option<String>,
    #[arg(long, value_name = "CSV")]
    x: Option<String>,
    #[arg(long, value_name = "CSV")]
    chain: Option<String>,
    #[arg(long, value_name = "CSV")]
    levels: Option<String>,
    #[arg(long, value_name = "CSV")]
    z: Option<String>,
    #[arg(long, value_name = "CSV")]
    removed1: Option<String>,
    #[arg(long, value_name = "CSV")]
    removed2: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file; standard input when omitted.
    #[arg(long, value_name = "FILE")]
    cert: Option<PathBuf>,
    /// Override or supply the plane reference (`pg:<q>` or `file:<path>`).
    #[arg(long, value_name = "REF")]
    plane: Option<String>,
    /// Point list file (JSON array or object with a `points` field); used
    /// instead of --cert for bare sets.
    #[arg(long, value_name = "FILE")]
    points: Option<PathBuf>,
    /// Expected tangent count; defaults to the certificate's claim.
    #[arg(long)]
    t: Option<u32>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_name = "REF")]
    plane: String,
    /// JSON array of point indices, or an object with a `points` field.
    #[arg(long, value_name = "FILE")]
    points: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_name = "REF")]
    plane: String,
    #[arg(long)]
    t: u32,
    /// count | witnesses | classes
    #[arg(long, default_value = "witnesses")]
    mode: String,
    /// Disable feasibility pruning (exhaustive bitmask audit, small planes).
    #[arg(long)]
    no_prune: bool,
    /// Disable the anchor-line stabilizer reduction.
    #[arg(long)]
    no_reduce: bool,
    /// Keep at most this many witnesses in the certificate.
    #[arg(long, value_name = "N")]
    witness_cap: Option<usize>,
    /// Continue from the stored frontier of an interrupted run.
    #[arg(long)]
    resume: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, value_name = "REF")]
    plane: String,
    /// count | witnesses | classes
    #[arg(long, default_value = "witnesses")]
    mode: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Result id: hosszu | i0 | ii1 | j1 | dovv | le2 | t1 | notes | thm |
    /// gcd | blok | corollary-triangle.
    id: String,
    /// Orders to check: `5`, `4,5,7`, or `4..8` (inclusive; orders that are
    /// not prime powers are skipped in range form).
    #[arg(long, value_name = "RANGE")]
    q: String,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long, value_name = "REF")]
    plane: String,
    #[arg(long, value_name = "FILE")]
    a: PathBuf,
    #[arg(long, value_name = "FILE")]
    b: PathBuf,
}

/// Parses and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let line = e
                .to_string()
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .to_string();
            eprintln!("{line} (run with --help for usage)");
            return 2;
        }
    };

    if let Some(n) = cli.jobs {
        // First caller wins; a pool already built (e.g. in tests) is fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    match execute(&cli) {
        Ok((value, code)) => match emit(&value, cli.out.as_deref()) {
            Ok(()) => code,
            Err(msg) => {
                eprintln!("{msg}");
                2
            }
        },
        Err(msg) => {
            eprintln!("{msg}");
            2
        }
    }
}

/// Runs one parsed command; `Ok` carries the JSON output and the exit code
/// (0 or 1), `Err` is a one-line usage/input diagnostic (exit 2).
fn execute(cli: &Cli) -> Result<(Value, i32), String> {
    match &cli.cmd {
        Cmd::Construct(a) => cmd_construct(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Search(a) => cmd_search(a, cli.store.as_deref()),
        Cmd::Census(a) => cmd_census(a, cli.store.as_deref()),
        Cmd::Check(a) => cmd_check(a, cli.store.as_deref()),
        Cmd::Equiv(a) => cmd_equiv(a),
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<(), String> {
    let body = canonical_json(value).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, format!("{body}\n"))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn open_store(flag: Option<&Path>) -> Result<CertStore, String> {
    let store = match flag {
        Some(dir) => CertStore::open(dir),
        None => match std::env::var(STORE_ENV) {
            Ok(dir) => CertStore::open(dir),
            Err(_) => CertStore::open("certificates"),
        },
    };
    store.map_err(|e| e.to_string())
}

fn load_plane(reference: &str) -> Result<Arc<Plane>, String> {
    resolve_plane_ref(reference).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    s.parse::<SearchMode>()
        .map_err(|_| format!("unknown mode {s:?}: expected count, witnesses or classes"))
}

/// Reads a JSON document from a file, or standard input when no path is
/// given.
fn read_json(path: Option<&Path>) -> Result<Value, String> {
    let body = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| format!("cannot read {}: {e}", p.display()))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            s
        }
    };
    serde_json::from_str(&body).map_err(|e| format!("invalid JSON: {e}"))
}

/// Extracts a point list from a JSON array, an object with a `points` field,
/// or a store envelope whose payload has one.
fn points_of(value: &Value) -> Result<Vec<u32>, String> {
    let arr = if value.is_array() {
        value
    } else if let Some(p) = value.get("points") {
        p
    } else if let Some(p) = value.get("payload").and_then(|v| v.get("points")) {
        p
    } else {
        return Err("no point list: expected a JSON array or a `points` field".into());
    };
    arr.as_array()
        .ok_or_else(|| "`points` is not an array".to_string())?
        .iter()
        .map(|v| {
            v.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| format!("bad point index {v}"))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

/// Family fields that take a list of numbers; `z` is a list only for the
/// chain families (the conic families use it as a single point index).
const LIST_FIELDS: [&str; 8] = ["a", "basis", "orbits", "x", "chain", "levels", "removed1", "removed2"];

fn cmd_construct(a: &ConstructArgs) -> Result<(Value, i32), String> {
    if a.grid {
        let mut entries = Vec::new();
        for spec in documented_grid() {
            let mut v = serde_json::to_value(&spec.family).map_err(|e| e.to_string())?;
            v.as_object_mut()
                .expect("families serialize to objects")
                .insert("claimed_t".into(), json!(spec.claimed_t));
            entries.push(v);
        }
        return Ok((json!({ "kind": "grid", "count": entries.len(), "entries": entries }), 0));
    }

    let family: Family = if let Some(spec) = &a.spec {
        serde_json::from_str(spec).map_err(|e| format!("bad --spec: {e}"))?
    } else {
        let Some(id) = &a.family else {
            return Err("give a family id, --spec, or --grid".into());
        };
        family_from_flags(id, a)?
    };

    let built = family.build().map_err(|e| format!("construction failed: {e}"))?;
    let plane = built.points.plane();
    let field = plane.field().expect("constructions build generated planes");
    let spectrum: Map<String, Value> = built
        .points
        .secant_spectrum()
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let value = json!({
        "kind": "construction",
        "family": serde_json::to_value(&built.spec.family).map_err(|e| e.to_string())?,
        "claimed_t": built.spec.claimed_t,
        "verified_t": built.verified_t,
        "type_claim": serde_json::to_value(built.type_claim).map_err(|e| e.to_string())?,
        "plane": format!("pg:{}", plane.q()),
        "q": plane.q(),
        "field": { "p": field.p(), "r": field.r(), "modulus": field.modulus() },
        "size": built.points.len(),
        "points": built.points.points(),
        "witness": built
            .witness
            .as_ref()
            .map(|w| serde_json::to_value(w).unwrap_or(Value::Null)),
        "secant_spectrum": spectrum,
    });
    Ok((value, 0))
}

fn family_from_flags(id: &str, a: &ConstructArgs) -> Result<Family, String> {
    let mut obj = Map::new();
    obj.insert("family".into(), json!(id));
    let mut put = |key: &str, v: Option<u32>| {
        if let Some(v) = v {
            obj.insert(key.into(), json!(v));
        }
    };
    put("q", a.q);
    put("t", a.t);
    put("n", a.n);
    put("d", a.d);
    put("s", a.s);
    put("l1", a.l1);
    put("l2", a.l2);
    put("line", a.line);
    put("sub_order", a.sub_order);
    put("x_size", a.x_size);
    put("z_size", a.z_size);
    let lists: [(&str, &Option<String>); 8] = [
        ("a", &a.a),
        ("basis", &a.basis),
        ("orbits", &a.orbits),
        ("x", &a.x),
        ("chain", &a.chain),
        ("levels", &a.levels),
        ("removed1", &a.removed1),
        ("removed2", &a.removed2),
    ];
    for (key, flag) in lists {
        debug_assert!(LIST_FIELDS.contains(&key));
        if let Some(csv) = flag {
            obj.insert(key.into(), json!(parse_csv(csv)?));
        }
    }
    if let Some(csv) = &a.z {
        // Chain families take a point list, conic families a single point.
        if id.starts_with("km-") {
            obj.insert("z".into(), json!(parse_csv(csv)?));
        } else {
            let v: u32 = csv.trim().parse().map_err(|_| format!("bad --z value {csv:?}"))?;
            obj.insert("z".into(), json!(v));
        }
    }
    serde_json::from_value(Value::Object(obj)).map_err(|e| format!("bad parameters for {id}: {e}"))
}

fn parse_csv(csv: &str) -> Result<Vec<u32>, String> {
    csv.split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| format!("bad list entry {s:?}")))
        .collect()
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(a: &VerifyArgs) -> Result<(Value, i32), String> {
    let value = read_json(a.cert.as_deref().or(a.points.as_deref()))?;

    // A search certificate (bare or enveloped) is verified by replay.
    let payload = value.get("payload").unwrap_or(&value);
    let is_search = payload.get("units").is_some() && payload.get("solutions_total").is_some();
    if is_search && a.points.is_none() {
        let cert: SearchCertificate =
            serde_json::from_value(payload.clone()).map_err(|e| format!("bad certificate: {e}"))?;
        let reference = a.plane.clone().unwrap_or_else(|| cert.plane.clone());
        let plane = load_plane(&reference)?;
        let ok = replay_matches(&plane, &cert).map_err(|e| e.to_string())?;
        let out = json!({
            "kind": "replay",
            "plane": reference,
            "t": cert.t,
            "verified": ok,
            "solutions_total": cert.solutions_total,
        });
        return Ok((out, if ok { 0 } else { 1 }));
    }

    let points = points_of(&value)?;
    let reference = a
        .plane
        .clone()
        .or_else(|| value.get("plane").and_then(|v| v.as_str()).map(str::to_string))
        .ok_or("no plane reference: give --plane or a certificate with a `plane` field")?;
    let expected_t = a
        .t
        .or_else(|| value.get("claimed_t").and_then(Value::as_u64).map(|v| v as u32))
        .or_else(|| value.get("verified_t").and_then(Value::as_u64).map(|v| v as u32))
        .or_else(|| value.get("t").and_then(Value::as_u64).map(|v| v as u32))
        .ok_or("no tangent count to verify: give --t or a certificate with a claim")?;

    let plane = load_plane(&reference)?;
    let set = PointSet::new(plane, points.iter().copied()).map_err(|e| e.to_string())?;
    let report = set.classify_semiarc();
    let verified = report.t() == Some(expected_t);
    let out = json!({
        "kind": "verification",
        "plane": reference,
        "size": points.len(),
        "claimed_t": expected_t,
        "actual_t": report.t(),
        "verified": verified,
    });
    Ok((out, if verified { 0 } else { 1 }))
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(a: &ClassifyArgs) -> Result<(Value, i32), String> {
    let plane = load_plane(&a.plane)?;
    let points = points_of(&read_json(Some(&a.points))?)?;
    let set = PointSet::new(plane, points.iter().copied()).map_err(|e| e.to_string())?;
    let report = set.classify_semiarc();
    let spectrum: Map<String, Value> =
        set.secant_spectrum().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let is_semiarc = matches!(report.verdict, Verdict::Semiarc { .. });
    let out = json!({
        "kind": "classification",
        "plane": a.plane,
        "size": set.len(),
        "report": serde_json::to_value(&report).map_err(|e| e.to_string())?,
        "t": report.t(),
        "secant_spectrum": spectrum,
    });
    Ok((out, if is_semiarc { 0 } else { 1 }))
}

// ---------------------------------------------------------------------------
// search / census
// ---------------------------------------------------------------------------

fn cmd_search(a: &SearchArgs, store_flag: Option<&Path>) -> Result<(Value, i32), String> {
    let plane = load_plane(&a.plane)?;
    let mode = parse_mode(&a.mode)?;
    let store = open_store(store_flag)?;
    let options = SearchOptions {
        mode,
        prune: !a.no_prune,
        reduce: !a.no_reduce,
        witness_cap: a.witness_cap,
    };
    let label = format!("{}-t{}", plane_label(&a.plane), a.t);
    let resume_from: Option<SearchCertificate> = if a.resume {
        store.load_frontier("search", &label).map_err(|e| e.to_string())?
    } else {
        None
    };
    let mut checkpoint = |c: &SearchCertificate| {
        let _ = store.save_frontier("search", &label, c);
    };
    let cert = run_search(
        &plane,
        Some(&a.plane),
        a.t,
        &options,
        resume_from.as_ref(),
        &mut checkpoint,
    )
    .map_err(|e| e.to_string())?;
    let stored = store
        .put("search", &label, &cert, Some(cert.wall_time_ms))
        .map_err(|e| e.to_string())?;
    store.clear_frontier("search", &label).map_err(|e| e.to_string())?;
    let mut value = serde_json::to_value(&cert).map_err(|e| e.to_string())?;
    value
        .as_object_mut()
        .expect("certificates serialize to objects")
        .insert("stored".into(), json!(stored.path.display().to_string()));
    Ok((value, 0))
}

fn cmd_census(a: &CensusArgs, store_flag: Option<&Path>) -> Result<(Value, i32), String> {
    let plane = load_plane(&a.plane)?;
    let mode = parse_mode(&a.mode)?;
    let store = open_store(store_flag)?;
    let certs =
        census(&plane, Some(&a.plane), mode, Some(&store)).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = certs
        .iter()
        .map(|c| {
            json!({
                "t": c.t,
                "long_secant_size": c.long_secant_size,
                "solutions_total": c.solutions_total,
                "solutions_mod_stabilizer": c.solutions_mod_stabilizer,
                "witnesses": c.witnesses.len(),
                "classes": c.classes.as_ref().map(Vec::len),
                "complete": c.complete,
            })
        })
        .collect();
    let out = json!({
        "kind": "census",
        "plane": a.plane,
        "q": plane.q(),
        "rows": rows,
    });
    Ok((out, 0))
}

// ---------------------------------------------------------------------------
// check / equiv
// ---------------------------------------------------------------------------

fn parse_orders(spec: &str) -> Result<Vec<u32>, String> {
    let is_order = |q: u32| crate::field::FiniteField::for_order(q).is_ok();
    if let Some((lo, hi)) = spec.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u32 = lo.trim().parse().map_err(|_| format!("bad range start {lo:?}"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| format!("bad range end {hi:?}"))?;
        if lo > hi {
            return Err(format!("empty range {spec:?}"));
        }
        let qs: Vec<u32> = (lo..=hi).filter(|&q| is_order(q)).collect();
        if qs.is_empty() {
            return Err(format!("no prime-power orders in {spec:?}"));
        }
        return Ok(qs);
    }
    let qs: Vec<u32> = spec
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| format!("bad order {s:?}")))
        .collect::<Result<_, _>>()?;
    for &q in &qs {
        if !is_order(q) {
            return Err(format!("{q} is not a prime power"));
        }
    }
    Ok(qs)
}

fn cmd_check(a: &CheckArgs, store_flag: Option<&Path>) -> Result<(Value, i32), String> {
    let id: TheoremId = a.id.parse()?;
    let qs = parse_orders(&a.q)?;
    let store = open_store(store_flag)?;
    let report = verify_theorem(id, &qs, Some(&store)).map_err(|e| e.to_string())?;
    let code = if report.pass { 0 } else { 1 };
    let value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    Ok((value, code))
}

fn cmd_equiv(a: &EquivArgs) -> Result<(Value, i32), String> {
    let plane = load_plane(&a.plane)?;
    let pa = points_of(&read_json(Some(&a.a))?)?;
    let pb = points_of(&read_json(Some(&a.b))?)?;
    let result = are_equivalent(&plane, &pa, &pb).map_err(|e| e.to_string())?;
    let out = json!({
        "kind": "equivalence",
        "plane": a.plane,
        "equivalent": result.is_some(),
        "collineation": result.as_ref().map(|c| {
            json!({ "matrix": c.matrix, "frob_exp": c.frob_exp })
        }),
    });
    let code = if result.is_some() { 0 } else { 1 };
    Ok((out, code))
}
