//! Batch commands. Each returns the JSON document for stdout and whether a
//! checking command's check held.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use snakegraph::characterize::{classify, ClassifyError, Verdict};
use snakegraph::game::Role;
use snakegraph::graph::{enumerate_connected_graphs, io, Graph, GraphError, Limits, MAX_ENUMERATION_ORDER};
use snakegraph::reduction::{reduce, verify_gadget, Reduction, ReductionError};
use snakegraph::solver::{SolveError, Solver};
use snakegraph::strategies::{validate_placer_policy_with, validate_snake_policy_with, PolicyError};

use crate::cache::{content_hash, CacheEntry, SolveCache, CACHE_FORMAT, CACHE_VERSION};
use crate::engine::{named_placer_policy, named_snake_policy, policy_role, EngineError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CEILING: u8 = 3;
pub const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Ceiling(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Ceiling(_) => EXIT_CEILING,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::CeilingExceeded { .. } => CliError::Ceiling(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::TooLarge(_) | SolveError::CeilingExceeded { .. } => CliError::Ceiling(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Graph(g) => g.into(),
            ClassifyError::Precondition(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Graph(g) => g.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub json: Value,
    pub passed: bool,
}

impl Output {
    fn ok(json: Value) -> Self {
        Output { json, passed: true }
    }
}

pub fn load_graph(path: &Path) -> Result<(Graph, Vec<u8>), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let text =
        std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let g = io::parse_any(text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        .graph;
    Ok((g, bytes))
}

fn witness_json(w: Option<(usize, usize)>) -> Value {
    w.map_or(Value::Null, |(a0, a1)| json!({"spawn": a0, "first_apple": a1}))
}

pub fn solve(path: &Path, ceiling: usize, cache: Option<&SolveCache>) -> Result<Output, CliError> {
    let start = Instant::now();
    let (g, bytes) = load_graph(path)?;
    let hash = content_hash(&bytes);
    let elapsed = |start: Instant| start.elapsed().as_millis() as u64;
    if let Some(hit) = cache.and_then(|c| c.get(&hash)) {
        return Ok(Output::ok(json!({
            "winnable": hit.winnable,
            "witness": witness_json(hit.witness),
            "nodes": hit.nodes,
            "elapsed_ms": elapsed(start),
            "cached": true,
            "sha256": hash,
        })));
    }
    let w = Solver::with_ceiling(&g, ceiling)?.winnable()?;
    if let Some(c) = cache {
        let entry = CacheEntry {
            format: CACHE_FORMAT.into(),
            version: CACHE_VERSION,
            sha256: hash.clone(),
            winnable: w.winnable,
            witness: w.witness,
            nodes: w.node_count,
        };
        c.put(&entry)
            .map_err(|e| CliError::Input(format!("cache {}: {e}", c.dir().display())))?;
    }
    Ok(Output::ok(json!({
        "winnable": w.winnable,
        "witness": witness_json(w.witness),
        "nodes": w.node_count,
        "elapsed_ms": elapsed(start),
        "cached": false,
        "sha256": hash,
    })))
}

pub fn classify_file(path: &Path) -> Result<Output, CliError> {
    let (g, _) = load_graph(path)?;
    let c = classify(&g)?;
    Ok(Output::ok(
        serde_json::to_value(c).expect("classifications serialize"),
    ))
}

pub fn reduce_file(input: &Path, out: &Path, report: Option<&Path>) -> Result<Output, CliError> {
    let (g, _) = load_graph(input)?;
    let write = |path: &Path, text: String| {
        fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    };
    match reduce(&g)? {
        Reduction::NotHamiltonian { v } => {
            let doc = json!({"result": "not_hamiltonian", "v": v});
            if let Some(p) = report {
                write(p, pretty(&doc))?;
            }
            Ok(Output::ok(doc))
        }
        Reduction::Reduced { graph, attachment } => {
            write(out, io::to_json(&graph))?;
            let mut doc = json!({
                "result": "reduced",
                "vertices": g.n(),
                "reduced_vertices": graph.n(),
                "attachment": attachment,
            });
            let mut passed = true;
            if let Some(p) = report {
                let r = verify_gadget(&g, &graph, &attachment, Limits::default())?;
                passed = r.holds();
                let mut rj = serde_json::to_value(&r).expect("reports serialize");
                rj["holds"] = passed.into();
                write(p, pretty(&rj))?;
                doc["gadget_holds"] = passed.into();
            }
            Ok(Output { json: doc, passed })
        }
    }
}

pub fn strategy_check(path: &Path, policy: &str, ceiling: u64) -> Result<Output, CliError> {
    let (g, _) = load_graph(path)?;
    let role = policy_role(policy).ok_or_else(|| EngineError::UnknownPolicy(policy.into()))?;
    let result = match role {
        Role::Snake => validate_snake_policy_with(&g, named_snake_policy(&g, policy)?.as_ref(), ceiling),
        Role::Placer => validate_placer_policy_with(&g, named_placer_policy(&g, policy)?.as_ref(), ceiling),
    };
    let report = result.map_err(|e| match e {
        PolicyError::CeilingExceeded { .. } | PolicyError::Inapplicable(_) => {
            CliError::Ceiling(e.to_string())
        }
        _ => CliError::Input(e.to_string()),
    })?;
    let mut doc = json!({"policy": policy, "role": role});
    for (k, v) in serde_json::to_value(&report)
        .expect("reports serialize")
        .as_object()
        .expect("reports are objects")
    {
        doc[k] = v.clone();
    }
    Ok(Output {
        json: doc,
        passed: report.valid,
    })
}

/// Classifies every connected graph on `n` vertices; with `cross_check`
/// also solves each one and lists disagreements.
pub fn enumerate(n: usize, cross_check: bool, ceiling: usize) -> Result<Output, CliError> {
    if !(3..=MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(CliError::Input(format!(
            "--n must be between 3 and {MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    let graphs = enumerate_connected_graphs(n)?;
    let mut verdicts: BTreeMap<String, usize> = BTreeMap::new();
    let mut reasons: BTreeMap<String, usize> = BTreeMap::new();
    let mut solved_winnable = 0usize;
    let mut unknown_winnable = 0usize;
    let mut nodes = 0u64;
    let mut disagreements = Vec::new();
    for g in &graphs {
        let c = classify(g)?;
        *verdicts.entry(format!("{:?}", c.verdict)).or_default() += 1;
        if let Some(r) = c.reason {
            *reasons.entry(format!("{r:?}")).or_default() += 1;
        }
        if !cross_check {
            continue;
        }
        let w = Solver::with_ceiling(g, ceiling)?.winnable()?;
        nodes += w.node_count;
        solved_winnable += usize::from(w.winnable);
        if c.verdict == Verdict::Unknown {
            unknown_winnable += usize::from(w.winnable);
        }
        if c.decision().is_some_and(|d| d != w.winnable) {
            disagreements.push(json!({
                "edges": g.edges(),
                "verdict": c.verdict,
                "reason": c.reason,
                "solver_winnable": w.winnable,
            }));
        }
    }
    let mut doc = json!({
        "n": n,
        "graphs": graphs.len(),
        "verdicts": verdicts,
        "reasons": reasons,
    });
    let passed = disagreements.is_empty();
    if cross_check {
        doc["cross_check"] = json!({
            "solved": graphs.len(),
            "winnable": solved_winnable,
            "unknown_winnable": unknown_winnable,
            "unknown_not_winnable": verdicts.get("Unknown").copied().unwrap_or(0) - unknown_winnable,
            "nodes": nodes,
            "disagreements": disagreements,
        });
    }
    Ok(Output { json: doc, passed })
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}
