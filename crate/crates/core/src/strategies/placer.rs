use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::characterize::{decide_cut_vertex, Certificate, CutObstruction, Reason, Verdict};
use crate::game::{legal_moves, MoveKind, SnakeState};
use crate::graph::{
    bipartition, cut_vertices, find_theta_n322, girth, hamiltonian_cycle, Graph, Limits, VertexSet,
};

use super::{farthest_from_head, PlacerPolicy, PolicyError};

/// Places the apple as far from the head as possible, smallest id on ties.
/// An apple at distance two or more is never adjacent to the head.
#[derive(Clone, Copy, Debug, Default)]
pub struct FarthestPlacer;

impl PlacerPolicy for FarthestPlacer {
    fn name(&self) -> &'static str {
        "farthest"
    }

    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        farthest_from_head(g, s, s.unoccupied(g)).ok_or_else(|| PolicyError::OffScript {
            policy: "farthest",
            detail: "no unoccupied vertex".into(),
        })
    }
}

fn default_choice(g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
    FarthestPlacer.choose(g, s)
}

/// Odd bipartite graphs without a spanning `Θ(n-3, 2, 2)`.
#[derive(Clone, Debug)]
pub struct OddBipartitePlacer {
    /// Larger side.
    x: VertexSet,
    y: VertexSet,
}

pub fn odd_bipartite_placer_policy(g: &Graph) -> Result<OddBipartitePlacer, PolicyError> {
    let (a, b) = bipartition(g).ok_or_else(|| PolicyError::Inapplicable("graph is not bipartite".into()))?;
    if g.n().is_multiple_of(2) {
        return Err(PolicyError::Inapplicable(
            "graph has an even number of vertices".into(),
        ));
    }
    if let Some(theta) = find_theta_n322(g, Limits::default())? {
        return Err(PolicyError::Inapplicable(format!(
            "graph has a spanning theta with junctions {} and {}",
            theta.u, theta.v
        )));
    }
    let (x, y) = if a.len() > b.len() { (a, b) } else { (b, a) };
    Ok(OddBipartitePlacer { x, y })
}

impl PlacerPolicy for OddBipartitePlacer {
    fn name(&self) -> &'static str {
        "odd-bipartite"
    }

    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        let n = g.n();
        let free = s.unoccupied(g);
        let broken = |detail: String| PolicyError::CaseAnalysis {
            policy: "odd-bipartite",
            detail,
        };
        // with unbalanced sides the snake cannot even fill the graph
        if self.x.len() != self.y.len() + 1 {
            return default_choice(g, s);
        }
        if s.len() + 3 == n {
            let ys = free.intersection(self.y);
            if ys.len() != 1 {
                return Err(broken(format!(
                    "{} unoccupied vertices on the smaller side",
                    ys.len()
                )));
            }
            return Ok(ys.first().unwrap());
        }
        if s.len() + 2 == n {
            let (head, tail) = (s.head(), s.tail());
            return free
                .intersection(self.x)
                .iter()
                .find(|&w| !(g.has_edge(w, head) && g.has_edge(w, tail)))
                .ok_or_else(|| broken("every unoccupied vertex touches both head and tail".into()));
        }
        default_choice(g, s)
    }
}

#[derive(Clone, Debug)]
enum CutPlan {
    /// Spawn away from a degree-1 vertex and put the first apple on it.
    DegreeOne {
        leaf: usize,
    },
    /// The snake cannot fill the graph at all.
    Unrestricted,
    SizeMismatch {
        small: VertexSet,
        large: VertexSet,
    },
    Incomplete {
        v: usize,
        complete: VertexSet,
        incomplete: VertexSet,
    },
}

/// Graphs with a cut vertex that fail the two-equal-cliques shape.
#[derive(Clone, Debug)]
pub struct ConnectivityPlacer {
    plan: CutPlan,
}

pub fn connectivity_placer_policy(g: &Graph) -> Result<ConnectivityPlacer, PolicyError> {
    if cut_vertices(g).is_empty() {
        return Err(PolicyError::Inapplicable("graph has no cut vertex".into()));
    }
    let c = decide_cut_vertex(g).map_err(|e| PolicyError::Inapplicable(e.to_string()))?;
    if c.verdict != Verdict::NotWinnable {
        return Err(PolicyError::Inapplicable("graph is snake-winnable".into()));
    }
    if let Some(leaf) = g.vertices().find(|&v| g.degree(v) == 1) {
        return Ok(ConnectivityPlacer {
            plan: CutPlan::DegreeOne { leaf },
        });
    }
    let plan = match (c.reason, c.certificate) {
        (
            Some(Reason::CutVertexObstruction),
            Some(Certificate::CutVertex {
                vertex,
                components,
                obstruction: Some(kind),
            }),
        ) => {
            let parts: Vec<VertexSet> = components.iter().map(|c| c.iter().copied().collect()).collect();
            let (a, b) = (parts[0], parts[1]);
            match kind {
                CutObstruction::SizeMismatch => {
                    let (small, large) = if a.len() < b.len() { (a, b) } else { (b, a) };
                    CutPlan::SizeMismatch { small, large }
                }
                CutObstruction::Incomplete => {
                    let (complete, incomplete) = if g.is_clique(b.with(vertex)) {
                        (b, a)
                    } else {
                        (a, b)
                    };
                    CutPlan::Incomplete {
                        v: vertex,
                        complete,
                        incomplete,
                    }
                }
            }
        }
        _ => CutPlan::Unrestricted,
    };
    Ok(ConnectivityPlacer { plan })
}

impl PlacerPolicy for ConnectivityPlacer {
    fn name(&self) -> &'static str {
        "connectivity"
    }

    fn spawn(&self, _g: &Graph) -> usize {
        match self.plan {
            CutPlan::DegreeOne { leaf } => usize::from(leaf == 0),
            _ => 0,
        }
    }

    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        let free = s.unoccupied(g);
        let len = s.len();
        let pick = |within: VertexSet, what: &str| {
            farthest_from_head(g, s, free.intersection(within)).ok_or_else(|| PolicyError::CaseAnalysis {
                policy: "connectivity",
                detail: format!("no unoccupied vertex in {what} at length {len}"),
            })
        };
        match self.plan {
            CutPlan::DegreeOne { leaf } if free.contains(leaf) => Ok(leaf),
            CutPlan::SizeMismatch { small, large } => {
                let m1 = small.len();
                if len + 1 == m1 || len == m1 + 1 {
                    pick(small, "the smaller part")
                } else if len == m1 {
                    pick(large, "the larger part")
                } else {
                    default_choice(g, s)
                }
            }
            CutPlan::Incomplete {
                v,
                complete,
                incomplete,
            } => {
                let m = complete.len();
                if len + 1 == m {
                    pick(incomplete, "the incomplete part")
                } else if len == m {
                    pick(complete, "the complete part")
                } else if len == m + 1 {
                    if !free.intersection(complete).is_empty() {
                        pick(complete, "the complete part")
                    } else {
                        let far = incomplete.difference(g.neighbor_set(v));
                        if free.intersection(far).is_empty() {
                            default_choice(g, s)
                        } else {
                            pick(far, "the incomplete part away from the cut vertex")
                        }
                    }
                } else {
                    default_choice(g, s)
                }
            }
            _ => default_choice(g, s),
        }
    }
}

/// Non-Hamiltonian graphs of girth at least 7.
#[derive(Clone, Debug)]
pub struct GirthPlacer;

pub fn girth_placer_policy(g: &Graph) -> Result<GirthPlacer, PolicyError> {
    match girth(g) {
        Some(k) if k > 6 => {}
        Some(k) => return Err(PolicyError::Inapplicable(format!("girth {k} is at most 6"))),
        None => return Err(PolicyError::Inapplicable("graph is acyclic; no girth".into())),
    }
    if hamiltonian_cycle(g, Limits::default())?.is_some() {
        return Err(PolicyError::Inapplicable("graph is Hamiltonian".into()));
    }
    Ok(GirthPlacer)
}

/// Unoccupied vertices closing the body into a cycle, shortest gap first,
/// trying gaps of up to `max_gap` vertices.
fn containing_cycle_gap(g: &Graph, s: &SnakeState, max_gap: usize) -> Option<Vec<usize>> {
    let (head, tail) = (s.head(), s.tail());
    let free = s.unoccupied(g);
    if s.len() >= 3 && g.has_edge(head, tail) {
        return Some(Vec::new());
    }
    if max_gap >= 1 {
        if let Some(a) = free.iter().find(|&a| g.has_edge(head, a) && g.has_edge(a, tail)) {
            return Some(vec![a]);
        }
    }
    if max_gap >= 2 {
        for a in free.intersection(g.neighbor_set(head)).iter() {
            for b in free.without(a).intersection(g.neighbor_set(a)).iter() {
                if g.has_edge(b, tail) {
                    return Some(vec![a, b]);
                }
            }
        }
    }
    None
}

/// Whether the snake could still fill the graph if the placer helped.
struct Cooperative<'g> {
    g: &'g Graph,
    memo: FxHashMap<Vec<usize>, bool>,
}

impl Cooperative<'_> {
    fn wins_after_placement(&mut self, body: &[usize]) -> bool {
        if body.len() == self.g.n() {
            return true;
        }
        if let Some(&w) = self.memo.get(body) {
            return w;
        }
        let occupied: VertexSet = body.iter().copied().collect();
        let free = self.g.vertex_set().difference(occupied);
        let won = free.iter().any(|a| self.wins_epoch(body.to_vec(), a));
        self.memo.insert(body.to_vec(), won);
        won
    }

    fn wins_epoch(&mut self, body: Vec<usize>, apple: usize) -> bool {
        let g = self.g;
        let mut seen = FxHashSet::default();
        let mut queue = VecDeque::from([body.clone()]);
        seen.insert(body);
        while let Some(b) = queue.pop_front() {
            let s = SnakeState::new(g, b.clone(), Some(apple)).expect("closure keeps states valid");
            for (t, kind) in legal_moves(g, &s) {
                if kind == MoveKind::Alpha {
                    let mut grown = Vec::with_capacity(b.len() + 1);
                    grown.push(t);
                    grown.extend_from_slice(&b);
                    if self.wins_after_placement(&grown) {
                        return true;
                    }
                } else {
                    let mut next = Vec::with_capacity(b.len());
                    next.push(t);
                    next.extend_from_slice(&b[..b.len() - 1]);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        false
    }

    /// First moves from a placement-pending state after which some apple
    /// sequence still lets the snake win.
    fn viable_first_moves(&mut self, s: &SnakeState) -> Vec<usize> {
        let g = self.g;
        let free = s.unoccupied(g);
        let body = s.body();
        free.intersection(g.neighbor_set(s.head()))
            .iter()
            .filter(|&u| {
                let mut grown = vec![u];
                grown.extend_from_slice(body);
                if self.wins_after_placement(&grown) {
                    return true;
                }
                let mut moved = vec![u];
                moved.extend_from_slice(&body[..body.len() - 1]);
                free.without(u).iter().any(|a| self.wins_epoch(moved.clone(), a))
            })
            .collect()
    }
}

impl GirthPlacer {
    fn broken(detail: String) -> PolicyError {
        PolicyError::CaseAnalysis {
            policy: "girth",
            detail,
        }
    }

    /// The unique head neighbour the snake can still win through, if any.
    fn forced_move(g: &Graph, s: &SnakeState) -> Result<Option<usize>, PolicyError> {
        let mut coop = Cooperative {
            g,
            memo: FxHashMap::default(),
        };
        match coop.viable_first_moves(s).as_slice() {
            [] => Ok(None),
            &[u] => Ok(Some(u)),
            many => Err(Self::broken(format!(
                "body {:?}: several viable first moves {many:?}",
                s.body()
            ))),
        }
    }
}

impl PlacerPolicy for GirthPlacer {
    fn name(&self) -> &'static str {
        "girth"
    }

    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        let n = g.n();
        let free = s.unoccupied(g);
        if s.len() + 3 == n {
            return match containing_cycle_gap(g, s, 2) {
                Some(gap) if !gap.is_empty() => {
                    let off: VertexSet = gap.iter().fold(free, |f, &w| f.without(w));
                    Ok(off.first().expect("some vertex lies off the containing cycle"))
                }
                Some(_) => {
                    // every unoccupied vertex is off the cycle; take the one
                    // adjacent to the other two, if any
                    let hub = free
                        .iter()
                        .find(|&a| free.without(a).is_subset(g.neighbor_set(a)));
                    match hub {
                        Some(a) => Ok(a),
                        None => default_choice(g, s),
                    }
                }
                None => {
                    let Some(u) = Self::forced_move(g, s)? else {
                        return default_choice(g, s);
                    };
                    let rest = free.without(u);
                    let second = rest
                        .iter()
                        .find(|&v| g.has_edge(u, v) && rest.without(v).iter().all(|w| g.has_edge(v, w)));
                    Ok(second.unwrap_or(u))
                }
            };
        }
        if s.len() + 2 == n {
            return match containing_cycle_gap(g, s, 1) {
                Some(gap) if !gap.is_empty() => Ok(free.without(gap[0]).first().expect("two unoccupied")),
                Some(_) => default_choice(g, s),
                None => match Self::forced_move(g, s)? {
                    Some(u) => Ok(u),
                    None => default_choice(g, s),
                },
            };
        }
        default_choice(g, s)
    }
}
