//! Policies for both players taken from the constructive proofs, plus
//! exhaustive harnesses that check a policy against every adversary reply.
//!
//! All policies are memoryless: each decision depends only on the graph and
//! the current state, so validation can memoize on states.

mod placer;
mod snake;
mod validate;

use std::collections::VecDeque;

use thiserror::Error;

use crate::game::{legal_moves, GameError, MoveKind, SnakeState};
use crate::graph::{Graph, GraphError, VertexSet};

pub use placer::{
    connectivity_placer_policy, girth_placer_policy, odd_bipartite_placer_policy, ConnectivityPlacer,
    FarthestPlacer, GirthPlacer, OddBipartitePlacer,
};
pub use snake::{
    cut_vertex_snake_policy, hamiltonian_snake_policy, theta_snake_policy, CutVertexSnake, GreedySnake,
    HamiltonianSnake, ThetaSnake,
};
pub use validate::{
    validate_placer_policy, validate_placer_policy_with, validate_snake_policy, validate_snake_policy_with,
    ValidationReport, DEFAULT_STATE_CEILING,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("policy not applicable: {0}")]
    Inapplicable(String),
    #[error("{policy}: state outside the policy's plan: {detail}")]
    OffScript { policy: &'static str, detail: String },
    #[error("{policy}: case analysis violated: {detail}")]
    CaseAnalysis { policy: &'static str, detail: String },
    #[error("invariant violated: {0}")]
    Assertion(String),
    #[error("validation ceiling of {limit} states exceeded")]
    CeilingExceeded { limit: u64 },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub trait SnakePolicy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Target vertex for the snake's next move. `s` has an apple.
    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError>;
}

pub trait PlacerPolicy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Vertex the snake spawns on.
    fn spawn(&self, _g: &Graph) -> usize {
        0
    }
    /// Next apple. `s` has no apple and is not full.
    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError>;
}

/// Breadth-first distances from `from` inside `within`; `usize::MAX` if unreachable.
pub(crate) fn bfs_distances(g: &Graph, from: usize, within: VertexSet) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if within.contains(w) && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// The vertex of `candidates` farthest from the head in `g`, smallest id on
/// ties.
pub(crate) fn farthest_from_head(g: &Graph, s: &SnakeState, candidates: VertexSet) -> Option<usize> {
    let dist = bfs_distances(g, s.head(), g.vertex_set());
    candidates.iter().max_by_key(|&v| (dist[v], std::cmp::Reverse(v)))
}

/// Smallest legal non-eating target of `s` inside `within`.
pub(crate) fn smallest_step_in(g: &Graph, s: &SnakeState, within: VertexSet) -> Option<usize> {
    legal_moves(g, s)
        .into_iter()
        .find(|&(t, k)| k != MoveKind::Alpha && within.contains(t))
        .map(|(t, _)| t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{apply_move, new_game, place_apple};
    use crate::graph::{
        bipartition, bowtie, build_theta, clique_pair, complete_bipartite, cycle, cycles_sharing_vertex,
        enumerate_connected_graphs, find_theta_n322, path, rectangular_grid, Limits,
    };
    use crate::solver::winnable;

    fn theta_cert(g: &Graph) -> crate::graph::ThetaCertificate {
        find_theta_n322(g, Limits::default()).unwrap().expect("theta")
    }

    fn snake_valid(g: &Graph, p: &dyn SnakePolicy) -> bool {
        let r = validate_snake_policy(g, p).unwrap();
        assert!(r.valid, "{}: {:?}", p.name(), r.failure);
        r.valid
    }

    fn placer_valid(g: &Graph, p: &dyn PlacerPolicy) -> bool {
        let r = validate_placer_policy(g, p).unwrap();
        assert!(r.valid, "{}: {:?}", p.name(), r.failure);
        r.valid
    }

    #[test]
    fn theta_policy_wins_on_every_small_theta() {
        for n in 5..=11 {
            let g = build_theta(n - 3, 2, 2).unwrap();
            let p = theta_snake_policy(&g, theta_cert(&g)).unwrap();
            let r = validate_snake_policy(&g, &p).unwrap();
            assert!(r.valid, "n={n}: {:?}", r.failure);
            assert_eq!(r.depth, n);
            if n <= 8 {
                assert!(winnable(&g).unwrap().winnable);
            }
        }
    }

    #[test]
    fn theta_policy_switches_cycles_when_pushed() {
        let g = build_theta(4, 2, 2).unwrap();
        let cert = theta_cert(&g);
        let p = theta_snake_policy(&g, cert.clone()).unwrap();
        let mut s = new_game(&g, cert.u).unwrap();
        let mut switches = 0;
        let mut last_middle = None;
        while s.len() < g.n() {
            // keep the apple on the middle vertex the snake is not using
            let free = s.unoccupied(&g);
            let a = [cert.x, cert.y]
                .into_iter()
                .find(|&m| free.contains(m) && Some(m) != last_middle)
                .or_else(|| free.first())
                .unwrap();
            s = place_apple(&g, &s, a).unwrap();
            while s.apple().is_some() {
                let t = p.choose(&g, &s).unwrap();
                if t == cert.x || t == cert.y {
                    if last_middle.is_some_and(|m| m != t) {
                        switches += 1;
                    }
                    last_middle = Some(t);
                }
                s = apply_move(&g, &s, t).unwrap();
            }
        }
        assert_eq!(s.len(), 7);
        assert!(switches >= 2, "only {switches} switches");
    }

    #[test]
    fn theta_policy_rejects_bad_certificates() {
        let g = cycle(6);
        assert!(find_theta_n322(&g, Limits::default()).unwrap().is_none());
        let bogus = crate::graph::ThetaCertificate {
            u: 0,
            v: 2,
            x: 1,
            y: 3,
            long_path: vec![0, 5, 4, 2],
        };
        assert!(matches!(
            theta_snake_policy(&g, bogus),
            Err(PolicyError::Inapplicable(_))
        ));
    }

    #[test]
    fn hamiltonian_policy() {
        assert!(snake_valid(
            &cycle(5),
            &hamiltonian_snake_policy(&cycle(5), None).unwrap()
        ));
        assert!(snake_valid(
            &cycle(6),
            &hamiltonian_snake_policy(&cycle(6), None).unwrap()
        ));
        let grid = rectangular_grid(2, 4).unwrap();
        let ring = vec![0, 1, 3, 5, 7, 6, 4, 2];
        assert!(snake_valid(
            &grid,
            &hamiltonian_snake_policy(&grid, Some(ring)).unwrap()
        ));
        assert!(hamiltonian_snake_policy(&path(4), None).is_err());
        assert!(hamiltonian_snake_policy(&cycle(5), Some(vec![0, 2, 1, 3, 4])).is_err());
    }

    #[test]
    fn cut_vertex_policy_on_double_cliques() {
        for m in 2..=4 {
            let g = clique_pair(m, m);
            let p = cut_vertex_snake_policy(&g, 0).unwrap();
            let r = validate_snake_policy(&g, &p).unwrap();
            assert!(r.valid, "m={m}: {:?}", r.failure);
        }
        assert!(winnable(&bowtie()).unwrap().winnable);
        assert!(cut_vertex_snake_policy(&clique_pair(2, 3), 0).is_err());
        assert!(cut_vertex_snake_policy(&cycles_sharing_vertex(4, 4), 0).is_err());
        assert!(cut_vertex_snake_policy(&bowtie(), 1).is_err());
    }

    #[test]
    fn odd_bipartite_placer() {
        let g = Graph::from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3)]).unwrap();
        assert!(placer_valid(&g, &odd_bipartite_placer_policy(&g).unwrap()));
        assert!(!winnable(&g).unwrap().winnable);
        assert!(odd_bipartite_placer_policy(&rectangular_grid(3, 3).unwrap()).is_err());
        assert!(odd_bipartite_placer_policy(&cycle(5)).is_err());
        assert!(odd_bipartite_placer_policy(&complete_bipartite(2, 2)).is_err());
    }

    #[test]
    fn connectivity_placer() {
        for g in [
            clique_pair(2, 3),
            cycles_sharing_vertex(4, 4),
            path(5),
            clique_pair(3, 5),
        ] {
            assert!(placer_valid(&g, &connectivity_placer_policy(&g).unwrap()));
            assert!(!winnable(&g).unwrap().winnable);
        }
        assert!(connectivity_placer_policy(&bowtie()).is_err());
        assert!(connectivity_placer_policy(&cycle(5)).is_err());
    }

    #[test]
    fn girth_placer() {
        let g = build_theta(3, 4, 4).unwrap();
        assert!(placer_valid(&g, &girth_placer_policy(&g).unwrap()));
        assert!(!winnable(&g).unwrap().winnable);
        assert!(girth_placer_policy(&cycle(7)).is_err());
        assert!(girth_placer_policy(&build_theta(4, 2, 2).unwrap()).is_err());
    }

    #[test]
    fn illegal_choices_fail_validation() {
        struct Stubborn;
        impl SnakePolicy for Stubborn {
            fn name(&self) -> &'static str {
                "stubborn"
            }
            fn choose(&self, _g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
                Ok(s.head())
            }
        }
        let r = validate_snake_policy(&cycle(4), &Stubborn).unwrap();
        assert!(!r.valid);
        assert!(r.failure.unwrap().contains("stubborn chose"));

        struct OnBody;
        impl PlacerPolicy for OnBody {
            fn name(&self) -> &'static str {
                "on-body"
            }
            fn choose(&self, _g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
                Ok(s.tail())
            }
        }
        assert!(!validate_placer_policy(&cycle(4), &OnBody).unwrap().valid);
    }

    #[test]
    fn placers_lose_on_hamiltonian_graphs() {
        let r = validate_placer_policy(&cycle(6), &FarthestPlacer).unwrap();
        assert!(!r.valid);
        assert!(r.failure.unwrap().contains("fills the graph"));
    }

    #[test]
    fn validation_ceiling() {
        let g = build_theta(6, 2, 2).unwrap();
        let p = theta_snake_policy(&g, theta_cert(&g)).unwrap();
        assert_eq!(
            validate_snake_policy_with(&g, &p, 10),
            Err(PolicyError::CeilingExceeded { limit: 10 })
        );
    }

    #[test]
    fn greedy_snake_moves_legally() {
        let g = rectangular_grid(3, 3).unwrap();
        let mut s = new_game(&g, 4).unwrap();
        for round in 0..30 {
            if s.len() == g.n() {
                break;
            }
            let a = FarthestPlacer.choose(&g, &s).unwrap();
            s = place_apple(&g, &s, a).unwrap();
            for _ in 0..100 {
                if s.apple().is_none() || legal_moves(&g, &s).is_empty() {
                    break;
                }
                let t = GreedySnake.choose(&g, &s).unwrap();
                s = apply_move(&g, &s, t).unwrap_or_else(|e| panic!("round {round}: {e}"));
            }
            if s.apple().is_some() {
                break;
            }
        }
        assert!(s.len() >= 3);
    }

    /// Every applicable policy on every connected graph with 4 to 6 vertices
    /// validates, and agrees with the solver.
    #[test]
    fn policies_agree_with_solver_on_small_graphs() {
        for n in 4..=6 {
            for g in enumerate_connected_graphs(n).unwrap() {
                let win = winnable(&g).unwrap().winnable;
                if let Ok(p) = connectivity_placer_policy(&g) {
                    assert!(placer_valid(&g, &p) && !win, "{:?}", g.edges());
                }
                if let Ok(p) = odd_bipartite_placer_policy(&g) {
                    if bipartition(&g).is_some_and(|(a, b)| a.len().abs_diff(b.len()) == 1) {
                        assert!(placer_valid(&g, &p) && !win, "{:?}", g.edges());
                    }
                }
                if let Some(cert) = find_theta_n322(&g, Limits::default()).unwrap() {
                    let p = theta_snake_policy(&g, cert).unwrap();
                    assert!(snake_valid(&g, &p) && win, "{:?}", g.edges());
                }
                if let Ok(p) = hamiltonian_snake_policy(&g, None) {
                    assert!(snake_valid(&g, &p) && win);
                }
                if let Some(v) = crate::graph::cut_vertices(&g)
                    .iter()
                    .find(|&v| cut_vertex_snake_policy(&g, v).is_ok())
                {
                    let p = cut_vertex_snake_policy(&g, v).unwrap();
                    assert!(snake_valid(&g, &p) && win);
                }
            }
        }
    }
}
