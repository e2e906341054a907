//! Solver-free decision procedures built from the structural theorems.
//!
//! [`classify`] tries its rules in this order and stops at the first one
//! that decides:
//!
//! 1. a degree-1 vertex: not winnable;
//! 2. bipartite with parts differing by more than one: not winnable;
//! 3. a cut vertex: decided exactly by [`decide_cut_vertex`];
//! 4. bipartite with an odd vertex count: decided exactly by
//!    [`decide_odd_bipartite`];
//! 5. a Hamiltonian cycle: winnable;
//! 6. girth at least 7 without a Hamiltonian cycle: not winnable;
//! 7. no Hamiltonian path: not winnable;
//! 8. a spanning `Θ(n-3, 2, 2)`: winnable;
//! 9. otherwise unknown.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{
    bipartition, components_after_removal, cut_vertices, find_theta_n322, girth, hamiltonian_cycle,
    has_hamiltonian_path, Graph, GraphError, Limits, ThetaCertificate, VertexSet,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Winnable,
    NotWinnable,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reason {
    DegreeOne,
    BipartiteImbalance,
    ThreePlusComponents,
    CutVertexComplete,
    CutVertexObstruction,
    ThetaOddBipartite,
    OddBipartiteNoTheta,
    GirthGT6NonHam,
    HamiltonianCycle,
    NoHamPath,
    ThetaSpanning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutObstruction {
    SizeMismatch,
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    DegreeOne {
        vertex: usize,
    },
    Bipartition {
        x: Vec<usize>,
        y: Vec<usize>,
    },
    CutVertex {
        vertex: usize,
        components: Vec<Vec<usize>>,
        obstruction: Option<CutObstruction>,
    },
    Theta {
        theta: ThetaCertificate,
    },
    /// Negative results of an exhaustive search carry the searched facts.
    Exhaustive {
        girth: Option<usize>,
        hamiltonian_cycle: bool,
        hamiltonian_path: bool,
    },
    HamiltonianCycle {
        cycle: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub reason: Option<Reason>,
    pub certificate: Option<Certificate>,
}

impl Classification {
    fn decided(verdict: Verdict, reason: Reason, certificate: Certificate) -> Self {
        Classification {
            verdict,
            reason: Some(reason),
            certificate: Some(certificate),
        }
    }

    pub fn unknown() -> Self {
        Classification {
            verdict: Verdict::Unknown,
            reason: None,
            certificate: None,
        }
    }

    /// `Some(winnable)` when decisive.
    pub fn decision(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Winnable => Some(true),
            Verdict::NotWinnable => Some(false),
            Verdict::Unknown => None,
        }
    }
}

fn sorted(set: VertexSet) -> Vec<usize> {
    set.iter().collect()
}

pub fn classify(g: &Graph) -> Result<Classification, ClassifyError> {
    classify_with(g, Limits::default())
}

pub fn classify_with(g: &Graph, limits: Limits) -> Result<Classification, ClassifyError> {
    if g.n() < 3 {
        return Err(ClassifyError::Precondition(format!(
            "graph has {} vertices, at least 3 are needed",
            g.n()
        )));
    }
    if !g.is_connected() {
        return Err(ClassifyError::Precondition("graph is disconnected".into()));
    }
    use Verdict::*;

    if let Some(v) = g.vertices().find(|&v| g.degree(v) == 1) {
        return Ok(Classification::decided(
            NotWinnable,
            Reason::DegreeOne,
            Certificate::DegreeOne { vertex: v },
        ));
    }
    let parts = bipartition(g);
    if let Some((x, y)) = parts {
        if x.len().abs_diff(y.len()) > 1 {
            return Ok(Classification::decided(
                NotWinnable,
                Reason::BipartiteImbalance,
                Certificate::Bipartition {
                    x: sorted(x),
                    y: sorted(y),
                },
            ));
        }
    }
    if !cut_vertices(g).is_empty() {
        return decide_cut_vertex(g);
    }
    if parts.is_some() && g.n() % 2 == 1 {
        return decide_odd_bipartite_with(g, limits);
    }

    let gi = girth(g);
    let cycle = hamiltonian_cycle(g, limits)?;
    if let Some(cycle) = cycle.clone() {
        return Ok(Classification::decided(
            Winnable,
            Reason::HamiltonianCycle,
            Certificate::HamiltonianCycle { cycle },
        ));
    }
    if gi.is_some_and(|k| k >= 7) {
        return Ok(Classification::decided(
            NotWinnable,
            Reason::GirthGT6NonHam,
            Certificate::Exhaustive {
                girth: gi,
                hamiltonian_cycle: false,
                hamiltonian_path: has_hamiltonian_path(g, limits)?,
            },
        ));
    }
    if !has_hamiltonian_path(g, limits)? {
        return Ok(Classification::decided(
            NotWinnable,
            Reason::NoHamPath,
            Certificate::Exhaustive {
                girth: gi,
                hamiltonian_cycle: false,
                hamiltonian_path: false,
            },
        ));
    }
    if let Some(theta) = find_theta_n322(g, limits)? {
        return Ok(Classification::decided(
            Winnable,
            Reason::ThetaSpanning,
            Certificate::Theta { theta },
        ));
    }
    Ok(Classification::unknown())
}

/// Exact decision for bipartite graphs with an odd number of vertices.
pub fn decide_odd_bipartite(g: &Graph) -> Result<Classification, ClassifyError> {
    decide_odd_bipartite_with(g, Limits::default())
}

pub fn decide_odd_bipartite_with(g: &Graph, limits: Limits) -> Result<Classification, ClassifyError> {
    let Some((x, y)) = bipartition(g) else {
        return Err(ClassifyError::Precondition("graph is not bipartite".into()));
    };
    if g.n().is_multiple_of(2) {
        return Err(ClassifyError::Precondition(
            "graph has an even number of vertices".into(),
        ));
    }
    Ok(match find_theta_n322(g, limits)? {
        Some(theta) => Classification::decided(
            Verdict::Winnable,
            Reason::ThetaOddBipartite,
            Certificate::Theta { theta },
        ),
        None => Classification::decided(
            Verdict::NotWinnable,
            Reason::OddBipartiteNoTheta,
            Certificate::Bipartition {
                x: sorted(x),
                y: sorted(y),
            },
        ),
    })
}

/// Exact decision for graphs with a cut vertex.
///
/// Winnable iff some cut vertex splits the graph into exactly two parts of
/// equal size at least 2 that each form a clique together with it. Every
/// other cut-vertex graph is reported with its first obstruction.
pub fn decide_cut_vertex(g: &Graph) -> Result<Classification, ClassifyError> {
    let cuts = cut_vertices(g);
    if cuts.is_empty() {
        return Err(ClassifyError::Precondition("graph has no cut vertex".into()));
    }
    use Verdict::*;
    let cert = |v: usize, comps: &[VertexSet], obstruction| Certificate::CutVertex {
        vertex: v,
        components: comps.iter().map(|&c| sorted(c)).collect(),
        obstruction,
    };
    let split: Vec<(usize, Vec<VertexSet>)> =
        cuts.iter().map(|v| (v, components_after_removal(g, v))).collect();
    if let Some((v, comps)) = split.iter().find(|(_, c)| c.len() >= 3) {
        return Ok(Classification::decided(
            NotWinnable,
            Reason::ThreePlusComponents,
            cert(*v, comps, None),
        ));
    }
    if let Some(v) = g.vertices().find(|&v| g.degree(v) == 1) {
        return Ok(Classification::decided(
            NotWinnable,
            Reason::DegreeOne,
            Certificate::DegreeOne { vertex: v },
        ));
    }
    let (v, comps) = &split[0];
    let (a, b) = (comps[0], comps[1]);
    if a.len() != b.len() {
        return Ok(Classification::decided(
            NotWinnable,
            Reason::CutVertexObstruction,
            cert(*v, comps, Some(CutObstruction::SizeMismatch)),
        ));
    }
    if !g.is_clique(a.with(*v)) || !g.is_clique(b.with(*v)) {
        return Ok(Classification::decided(
            NotWinnable,
            Reason::CutVertexObstruction,
            cert(*v, comps, Some(CutObstruction::Incomplete)),
        ));
    }
    Ok(Classification::decided(
        Winnable,
        Reason::CutVertexComplete,
        cert(*v, comps, None),
    ))
}

/// Re-checks a classification's certificate against `g` without trusting
/// the code that produced it.
pub fn verify_classification(g: &Graph, c: &Classification) -> Result<(), String> {
    let (Some(reason), Some(cert)) = (c.reason, &c.certificate) else {
        return if c.verdict == Verdict::Unknown {
            Ok(())
        } else {
            Err("decisive verdict without a certificate".into())
        };
    };
    let expect = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
    let limits = Limits::unbounded();
    match (reason, cert) {
        (Reason::DegreeOne, Certificate::DegreeOne { vertex }) => {
            expect(g.degree(*vertex) == 1, "vertex does not have degree 1")
        }
        (Reason::BipartiteImbalance | Reason::OddBipartiteNoTheta, Certificate::Bipartition { x, y }) => {
            let xs: VertexSet = x.iter().copied().collect();
            let ys: VertexSet = y.iter().copied().collect();
            expect(
                xs.intersection(ys).is_empty() && xs.union(ys) == g.vertex_set(),
                "parts do not partition the vertices",
            )?;
            expect(
                g.edges().iter().all(|&(a, b)| xs.contains(a) != xs.contains(b)),
                "an edge lies inside a part",
            )?;
            if reason == Reason::BipartiteImbalance {
                expect(x.len().abs_diff(y.len()) > 1, "parts are balanced")
            } else {
                expect(
                    g.n() % 2 == 1 && find_theta_n322(g, limits).map_err(|e| e.to_string())?.is_none(),
                    "a spanning theta exists",
                )
            }
        }
        (
            Reason::ThreePlusComponents | Reason::CutVertexObstruction | Reason::CutVertexComplete,
            Certificate::CutVertex {
                vertex,
                components,
                obstruction,
            },
        ) => {
            let sets: Vec<VertexSet> = components.iter().map(|c| c.iter().copied().collect()).collect();
            let rest = g.vertex_set().without(*vertex);
            expect(
                sets.iter().fold(VertexSet::EMPTY, |a, &s| a.union(s)) == rest
                    && sets.iter().map(|s| s.len()).sum::<usize>() == rest.len(),
                "components do not partition the other vertices",
            )?;
            for (i, &s) in sets.iter().enumerate() {
                expect(g.is_connected_within(s), "a component is disconnected")?;
                for &t in &sets[i + 1..] {
                    expect(
                        s.iter().all(|a| g.neighbor_set(a).intersection(t).is_empty()),
                        "components are joined by an edge",
                    )?;
                }
            }
            match (reason, obstruction) {
                (Reason::ThreePlusComponents, _) => expect(sets.len() >= 3, "fewer than 3 components"),
                (Reason::CutVertexComplete, None) => expect(
                    sets.len() == 2
                        && sets[0].len() == sets[1].len()
                        && sets[0].len() >= 2
                        && sets.iter().all(|s| g.is_clique(s.with(*vertex))),
                    "blocks are not two equal cliques",
                ),
                (Reason::CutVertexObstruction, Some(CutObstruction::SizeMismatch)) => {
                    expect(sets.len() == 2 && sets[0].len() != sets[1].len(), "sizes match")
                }
                (Reason::CutVertexObstruction, Some(CutObstruction::Incomplete)) => expect(
                    sets.len() == 2 && sets.iter().any(|s| !g.is_clique(s.with(*vertex))),
                    "both blocks are complete",
                ),
                _ => Err("obstruction does not match the reason".into()),
            }
        }
        (Reason::ThetaOddBipartite | Reason::ThetaSpanning, Certificate::Theta { theta }) => theta.verify(g),
        (Reason::HamiltonianCycle, Certificate::HamiltonianCycle { cycle }) => expect(
            cycle.len() == g.n() && g.is_cycle(cycle),
            "not a Hamiltonian cycle",
        ),
        (Reason::GirthGT6NonHam, Certificate::Exhaustive { girth: gi, .. }) => {
            expect(*gi == girth(g) && gi.is_some_and(|k| k >= 7), "girth below 7")?;
            expect(
                hamiltonian_cycle(g, limits).map_err(|e| e.to_string())?.is_none(),
                "graph is Hamiltonian",
            )
        }
        (Reason::NoHamPath, Certificate::Exhaustive { .. }) => expect(
            !has_hamiltonian_path(g, limits).map_err(|e| e.to_string())?,
            "graph has a Hamiltonian path",
        ),
        _ => Err("certificate kind does not match the reason".into()),
    }
}
