use crate::game::{head_graph_is_complete, legal_moves, MoveKind, SnakeState};
use crate::graph::{components_after_removal, hamiltonian_cycle, Graph, Limits, ThetaCertificate, VertexSet};

use super::{bfs_distances, smallest_step_in, PolicyError, SnakePolicy};

/// Walks one of the two `(n-1)`-cycles of a spanning `Θ(n-3, 2, 2)` and
/// switches cycles at `u` when the apple sits on the other middle vertex.
#[derive(Clone, Debug)]
pub struct ThetaSnake {
    cert: ThetaCertificate,
    /// Successor maps of the cycles through `x` and through `y`.
    next: [Vec<usize>; 2],
}

pub fn theta_snake_policy(g: &Graph, cert: ThetaCertificate) -> Result<ThetaSnake, PolicyError> {
    cert.verify(g).map_err(PolicyError::Inapplicable)?;
    let n = g.n();
    let next = cert.cycles().map(|mut c| {
        // the cycle from `cycles` is u, l1, .., v, m; walk it backwards so
        // the snake leaves u through the middle vertex
        c.reverse();
        let mut next = vec![usize::MAX; n];
        for i in 0..c.len() {
            next[c[i]] = c[(i + 1) % c.len()];
        }
        next
    });
    Ok(ThetaSnake { cert, next })
}

impl ThetaSnake {
    fn cycle_index(&self, s: &SnakeState) -> usize {
        let ThetaCertificate { x, y, .. } = self.cert;
        let pos = |m| s.body().iter().position(|&b| b == m);
        match (pos(x), pos(y)) {
            (Some(i), Some(j)) => usize::from(j < i),
            (Some(_), None) => 0,
            (None, Some(_)) => 1,
            (None, None) if s.apple() == Some(y) => 1,
            (None, None) if s.apple() == Some(x) => 0,
            (None, None) => usize::from(y < x),
        }
    }
}

impl SnakePolicy for ThetaSnake {
    fn name(&self) -> &'static str {
        "theta"
    }

    fn choose(&self, _g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        let i = self.cycle_index(s);
        let middles = [self.cert.x, self.cert.y];
        let head = s.head();
        if head == self.cert.u && s.apple() == Some(middles[1 - i]) {
            return Ok(middles[1 - i]);
        }
        Ok(self.next[i][head])
    }
}

/// Follows a Hamiltonian cycle forever.
#[derive(Clone, Debug)]
pub struct HamiltonianSnake {
    next: Vec<usize>,
}

/// Uses `cycle` if given, else searches for one.
pub fn hamiltonian_snake_policy(
    g: &Graph,
    cycle: Option<Vec<usize>>,
) -> Result<HamiltonianSnake, PolicyError> {
    let cycle = match cycle {
        Some(c) => c,
        None => hamiltonian_cycle(g, Limits::default())?
            .ok_or_else(|| PolicyError::Inapplicable("graph has no Hamiltonian cycle".into()))?,
    };
    if cycle.len() != g.n() || !g.is_cycle(&cycle) {
        return Err(PolicyError::Inapplicable(
            "not a Hamiltonian cycle of the graph".into(),
        ));
    }
    let mut next = vec![0; g.n()];
    for i in 0..cycle.len() {
        next[cycle[i]] = cycle[(i + 1) % cycle.len()];
    }
    Ok(HamiltonianSnake { next })
}

impl SnakePolicy for HamiltonianSnake {
    fn name(&self) -> &'static str {
        "hamiltonian"
    }

    fn choose(&self, _g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        Ok(self.next[s.head()])
    }
}

/// Schedule for two cliques of size `m` glued at a cut vertex `v`.
#[derive(Clone, Debug)]
pub struct CutVertexSnake {
    v: usize,
    parts: [VertexSet; 2],
    m: usize,
}

pub fn cut_vertex_snake_policy(g: &Graph, v: usize) -> Result<CutVertexSnake, PolicyError> {
    if v >= g.n() {
        return Err(PolicyError::Inapplicable(format!("vertex {v} out of range")));
    }
    let comps = components_after_removal(g, v);
    let &[a, b] = comps.as_slice() else {
        return Err(PolicyError::Inapplicable(format!(
            "removing {v} leaves {} components, need 2",
            comps.len()
        )));
    };
    if a.len() != b.len() || a.len() < 2 {
        return Err(PolicyError::Inapplicable(format!(
            "parts of size {} and {} are not equal and at least 2",
            a.len(),
            b.len()
        )));
    }
    if !g.is_clique(a.with(v)) || !g.is_clique(b.with(v)) {
        return Err(PolicyError::Inapplicable(
            "a part plus the cut vertex is not complete".into(),
        ));
    }
    Ok(CutVertexSnake {
        v,
        parts: [a, b],
        m: a.len(),
    })
}

impl CutVertexSnake {
    fn part(&self, w: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(w))
    }

    fn off_script(&self, s: &SnakeState) -> PolicyError {
        PolicyError::OffScript {
            policy: "cut-vertex",
            detail: format!("body {:?} apple {:?}", s.body(), s.apple()),
        }
    }
}

impl SnakePolicy for CutVertexSnake {
    fn name(&self) -> &'static str {
        "cut-vertex"
    }

    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        let apple = s.apple().ok_or_else(|| self.off_script(s))?;
        let (head, len, v, m) = (s.head(), s.len(), self.v, self.m);
        let legal = |t: usize| legal_moves(g, s).iter().any(|&(w, _)| w == t);
        let step_in = |p: usize| smallest_step_in(g, s, self.parts[p]);

        if len < m {
            if g.has_edge(head, apple) {
                return Ok(apple);
            }
            if legal(v) {
                return Ok(v);
            }
            let p = self.part(head).ok_or_else(|| self.off_script(s))?;
            return step_in(p).ok_or_else(|| self.off_script(s));
        }

        if len == m {
            // fill the apple's part, leaving the apple for last
            if apple == v {
                return Ok(v);
            }
            let a = self.part(apple).expect("apple is not v");
            let choice = match self.part(head) {
                Some(p) if p == a => {
                    if s.tail() == v {
                        Some(apple)
                    } else {
                        step_in(a)
                    }
                }
                Some(p) => {
                    if legal(v) {
                        Some(v)
                    } else {
                        step_in(p)
                    }
                }
                None => {
                    let neck = s.body()[1];
                    if self.part(neck) == Some(a) {
                        step_in(1 - a)
                    } else {
                        step_in(a)
                    }
                }
            };
            return choice.ok_or_else(|| self.off_script(s));
        }

        if head_graph_is_complete(g, s) {
            return Ok(apple);
        }
        if len == m + 1 && s.tail() == v && g.has_edge(head, v) {
            return Ok(v);
        }
        Err(self.off_script(s))
    }
}

/// Heads for the apple along a shortest path through unoccupied vertices,
/// skipping moves that leave no legal move afterwards.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedySnake;

impl SnakePolicy for GreedySnake {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn choose(&self, g: &Graph, s: &SnakeState) -> Result<usize, PolicyError> {
        let apple = s.apple().ok_or_else(|| PolicyError::OffScript {
            policy: "greedy",
            detail: "no apple on the board".into(),
        })?;
        let moves = legal_moves(g, s);
        let dist = bfs_distances(g, apple, s.unoccupied(g));
        let mut ranked: Vec<(usize, MoveKind)> = moves.clone();
        ranked.sort_by_key(|&(t, _)| (dist[t], t));
        let safe = |t: usize, k: MoveKind| {
            k == MoveKind::Alpha
                || crate::game::apply_move(g, s, t)
                    .map(|next| !legal_moves(g, &next).is_empty())
                    .unwrap_or(false)
        };
        ranked
            .iter()
            .find(|&&(t, k)| safe(t, k))
            .or(ranked.first())
            .map(|&(t, _)| t)
            .ok_or_else(|| PolicyError::OffScript {
                policy: "greedy",
                detail: "the snake is stuck".into(),
            })
    }
}
