use std::collections::VecDeque;

use super::{Graph, GraphError, VertexSet};

/// Ceiling for the exhaustive searches. Exceeding it is an error, never an
/// approximation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vertices: 20 }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            max_vertices: usize::MAX,
        }
    }

    pub(crate) fn check(self, op: &'static str, n: usize) -> Result<(), GraphError> {
        if n > self.max_vertices {
            Err(GraphError::CeilingExceeded {
                op,
                n,
                limit: self.max_vertices,
            })
        } else {
            Ok(())
        }
    }
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                // cycles closed from here on have length at least 2 * dist[u]
                if 2 * dist[u] >= b {
                    break;
                }
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Length of a longest simple cycle, 0 for forests.
pub fn circumference(g: &Graph, limits: Limits) -> Result<usize, GraphError> {
    limits.check("circumference", g.n())?;
    let n = g.n();
    let mut best = 0;
    for start in 0..n {
        // cycles whose smallest vertex is `start`
        let allowed = VertexSet::from_bits(!((1u64 << start) - 1)).intersection(g.vertex_set());
        longest_cycle_from(g, start, start, allowed.without(start), 1, &mut best);
        if best == n {
            break;
        }
    }
    Ok(best)
}

fn longest_cycle_from(g: &Graph, start: usize, head: usize, free: VertexSet, len: usize, best: &mut usize) {
    if len >= 3 && g.has_edge(head, start) {
        *best = (*best).max(len);
    }
    if len + g.reachable_within_from(head, free) <= *best {
        return;
    }
    for w in g.neighbor_set(head).intersection(free) {
        longest_cycle_from(g, start, w, free.without(w), len + 1, best);
    }
}

impl Graph {
    /// Number of vertices of `free` reachable from a neighbour of `head`
    /// inside `free`.
    fn reachable_within_from(&self, head: usize, free: VertexSet) -> usize {
        let mut seen = VertexSet::EMPTY;
        for w in self.neighbor_set(head).intersection(free) {
            if !seen.contains(w) {
                seen = seen.union(self.reachable_within(w, free));
            }
        }
        seen.len()
    }
}

/// Articulation points.
pub fn cut_vertices(g: &Graph) -> VertexSet {
    struct Dfs<'a> {
        g: &'a Graph,
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        cuts: VertexSet,
    }
    impl Dfs<'_> {
        fn visit(&mut self, u: usize, parent: Option<usize>) {
            self.time += 1;
            self.disc[u] = self.time;
            self.low[u] = self.time;
            let mut children = 0;
            for &w in self.g.neighbors(u) {
                if self.disc[w] == 0 {
                    children += 1;
                    self.visit(w, Some(u));
                    self.low[u] = self.low[u].min(self.low[w]);
                    if parent.is_some() && self.low[w] >= self.disc[u] {
                        self.cuts.insert(u);
                    }
                } else if Some(w) != parent {
                    self.low[u] = self.low[u].min(self.disc[w]);
                }
            }
            if parent.is_none() && children > 1 {
                self.cuts.insert(u);
            }
        }
    }
    let n = g.n();
    let mut dfs = Dfs {
        g,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        cuts: VertexSet::EMPTY,
    };
    for v in 0..n {
        if dfs.disc[v] == 0 {
            dfs.visit(v, None);
        }
    }
    dfs.cuts
}

/// Connected components of `G - v`, ordered by smallest member.
pub fn components_after_removal(g: &Graph, v: usize) -> Vec<VertexSet> {
    let mut rest = g.vertex_set().without(v);
    let mut out = Vec::new();
    while let Some(s) = rest.first() {
        let comp = g.reachable_within(s, rest);
        rest = rest.difference(comp);
        out.push(comp);
    }
    out
}

/// A proper 2-colouring `(X, Y)` if the graph is bipartite. In every
/// component the smallest vertex is placed in `X`.
pub fn bipartition(g: &Graph) -> Option<(VertexSet, VertexSet)> {
    let n = g.n();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &w in g.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let x = (0..n).filter(|&v| color[v] == Some(false)).collect();
    let y = (0..n).filter(|&v| color[v] == Some(true)).collect();
    Some((x, y))
}

#[derive(Clone, Copy)]
enum End {
    Any,
    At(usize),
    /// Close a cycle back to the start vertex.
    Cycle(usize),
}

/// Backtracking search for a Hamiltonian path of the subgraph induced by
/// `allowed`, starting at `start`.
fn ham_search(g: &Graph, start: usize, end: End, allowed: VertexSet) -> Option<Vec<usize>> {
    if !allowed.contains(start) {
        return None;
    }
    if let End::At(t) = end {
        if !allowed.contains(t) || (t == start && allowed.len() > 1) {
            return None;
        }
    }
    let mut path = Vec::with_capacity(allowed.len());
    path.push(start);
    if extend(g, end, allowed.without(start), &mut path) {
        Some(path)
    } else {
        None
    }
}

fn extend(g: &Graph, end: End, remaining: VertexSet, path: &mut Vec<usize>) -> bool {
    let head = *path.last().unwrap();
    if remaining.is_empty() {
        return match end {
            End::Any => true,
            End::At(t) => head == t,
            End::Cycle(s) => path.len() >= 3 && g.has_edge(head, s),
        };
    }
    if !g.is_connected_within(remaining.with(head)) {
        return false;
    }
    // Every vertex still to be visited needs two path neighbours unless it
    // can be the final endpoint.
    let extra = match end {
        End::Cycle(s) => VertexSet::singleton(s),
        _ => VertexSet::EMPTY,
    };
    let available = remaining.with(head).union(extra);
    let mut loose_ends = 0;
    for w in remaining {
        let deg = g.neighbor_set(w).intersection(available).len();
        let may_end = match end {
            End::Any => true,
            End::At(t) => w == t,
            End::Cycle(_) => false,
        };
        if deg == 0 || (deg == 1 && !may_end) {
            return false;
        }
        if deg == 1 {
            loose_ends += 1;
        }
    }
    if loose_ends > 1 {
        return false;
    }
    for w in g.neighbor_set(head).intersection(remaining) {
        if let End::At(t) = end {
            if w == t && remaining.len() > 1 {
                continue;
            }
        }
        path.push(w);
        if extend(g, end, remaining.without(w), path) {
            return true;
        }
        path.pop();
    }
    false
}

/// A Hamiltonian path from `u` to `v`, if one exists.
pub fn hamiltonian_path_between(
    g: &Graph,
    u: usize,
    v: usize,
    limits: Limits,
) -> Result<Option<Vec<usize>>, GraphError> {
    limits.check("hamiltonian_path_between", g.n())?;
    Ok(ham_search(g, u, End::At(v), g.vertex_set()))
}

/// Hamiltonian path from `u` to `v` in the subgraph induced by `allowed`.
pub(crate) fn hamiltonian_path_within(
    g: &Graph,
    u: usize,
    v: usize,
    allowed: VertexSet,
) -> Option<Vec<usize>> {
    ham_search(g, u, End::At(v), allowed)
}

pub fn has_hamiltonian_path(g: &Graph, limits: Limits) -> Result<bool, GraphError> {
    limits.check("has_hamiltonian_path", g.n())?;
    let all = g.vertex_set();
    if !g.is_connected() {
        return Ok(false);
    }
    // a degree-1 vertex must be an endpoint; starting there is enough
    let starts: Vec<usize> = match g.vertices().find(|&v| g.degree(v) <= 1) {
        Some(v) => vec![v],
        None => g.vertices().collect(),
    };
    Ok(starts
        .into_iter()
        .any(|s| ham_search(g, s, End::Any, all).is_some()))
}

/// A Hamiltonian cycle starting at vertex 0, if one exists.
pub fn hamiltonian_cycle(g: &Graph, limits: Limits) -> Result<Option<Vec<usize>>, GraphError> {
    limits.check("hamiltonian_cycle", g.n())?;
    if g.n() < 3 || g.min_degree() < 2 {
        return Ok(None);
    }
    Ok(ham_search(g, 0, End::Cycle(0), g.vertex_set()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    /// Shortest cycle by exhaustive enumeration of simple cycles.
    fn girth_oracle(g: &Graph) -> Option<usize> {
        fn walk(g: &Graph, s: usize, head: usize, used: VertexSet, len: usize, best: &mut Option<usize>) {
            for &w in g.neighbors(head) {
                if w == s && len >= 3 {
                    *best = Some(best.map_or(len, |b: usize| b.min(len)));
                } else if w > s && !used.contains(w) {
                    walk(g, s, w, used.with(w), len + 1, best);
                }
            }
        }
        let mut best = None;
        for s in g.vertices() {
            walk(g, s, s, VertexSet::singleton(s), 1, &mut best);
        }
        best
    }

    #[test]
    fn girth_matches_cycle_enumeration() {
        for g in [
            cycle(5),
            build_theta(3, 4, 4).unwrap(),
            build_theta(2, 2, 2).unwrap(),
            bowtie(),
            rectangular_grid(3, 3).unwrap(),
            path(5),
            complete(5),
        ] {
            assert_eq!(girth(&g), girth_oracle(&g), "{g:?}");
        }
        assert_eq!(girth(&cycle(5)), Some(5));
        assert_eq!(girth(&build_theta(3, 4, 4).unwrap()), Some(7));
        assert_eq!(girth(&rectangular_grid(3, 2).unwrap()), Some(4));
        assert_eq!(girth(&star(3)), None);
    }

    #[test]
    fn circumference_examples() {
        let l = Limits::default();
        assert_eq!(circumference(&cycle(6), l), Ok(6));
        assert_eq!(circumference(&bowtie(), l), Ok(3));
        assert_eq!(circumference(&build_theta(4, 2, 2).unwrap(), l), Ok(6));
        assert_eq!(circumference(&path(4), l), Ok(0));
        assert_eq!(circumference(&complete(6), l), Ok(6));
        assert!(matches!(
            circumference(&cycle(30), l),
            Err(GraphError::CeilingExceeded { .. })
        ));
    }

    #[test]
    fn cut_vertex_examples() {
        let b = bowtie();
        assert_eq!(cut_vertices(&b), VertexSet::singleton(0));
        let comps = components_after_removal(&b, 0);
        assert_eq!(comps.iter().map(|c| c.len()).collect::<Vec<_>>(), vec![2, 2]);
        assert!(cut_vertices(&cycle(5)).is_empty());
        let s = star(3);
        assert_eq!(cut_vertices(&s), VertexSet::singleton(0));
        assert_eq!(components_after_removal(&s, 0).len(), 3);
        assert_eq!(cut_vertices(&path(4)).len(), 2);
    }

    /// Articulation points by deleting each vertex and testing connectivity.
    #[test]
    fn cut_vertices_match_deletion_oracle() {
        for n in 3..=6 {
            for g in enumerate_connected_graphs(n).unwrap() {
                let oracle: VertexSet = g
                    .vertices()
                    .filter(|&v| !g.is_connected_within(g.vertex_set().without(v)))
                    .collect();
                assert_eq!(cut_vertices(&g), oracle, "{g:?}");
            }
        }
    }

    #[test]
    fn bipartition_examples() {
        let (x, y) = bipartition(&cycle(6)).unwrap();
        assert_eq!((x.len(), y.len()), (3, 3));
        let (x, y) = bipartition(&complete_bipartite(2, 3)).unwrap();
        let mut sizes = [x.len(), y.len()];
        sizes.sort();
        assert_eq!(sizes, [2, 3]);
        assert_eq!(bipartition(&bowtie()), None);
    }

    #[test]
    fn hamiltonian_examples() {
        let l = Limits::default();
        let g23 = rectangular_grid(2, 3).unwrap();
        let c = hamiltonian_cycle(&g23, l).unwrap().unwrap();
        assert_eq!(c.len(), 6);
        assert!(g23.is_cycle(&c));
        assert_eq!(hamiltonian_cycle(&rectangular_grid(3, 3).unwrap(), l), Ok(None));
        assert_eq!(hamiltonian_cycle(&build_theta(3, 4, 4).unwrap(), l), Ok(None));
        assert!(has_hamiltonian_path(&path(6), l).unwrap());
        assert!(!has_hamiltonian_path(&star(3), l).unwrap());
        let p = hamiltonian_path_between(&cycle(5), 0, 1, l).unwrap().unwrap();
        assert_eq!(p, vec![0, 4, 3, 2, 1]);
        assert_eq!(hamiltonian_path_between(&path(4), 1, 3, l), Ok(None));
    }

    /// Hamiltonicity by trying every vertex ordering.
    fn ham_oracle(g: &Graph) -> (bool, bool) {
        fn perms(k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, g: &Graph, out: &mut (bool, bool)) {
            if cur.len() == k {
                if g.is_simple_path(cur) {
                    out.0 = true;
                    if k >= 3 && g.has_edge(cur[0], cur[k - 1]) {
                        out.1 = true;
                    }
                }
                return;
            }
            for v in 0..k {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    perms(k, cur, used, g, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = (false, false);
        perms(g.n(), &mut Vec::new(), &mut vec![false; g.n()], g, &mut out);
        out
    }

    #[test]
    fn hamiltonicity_matches_permutation_oracle() {
        let l = Limits::default();
        for n in 3..=6 {
            for g in enumerate_connected_graphs(n).unwrap() {
                let (path_exists, cycle_exists) = ham_oracle(&g);
                assert_eq!(has_hamiltonian_path(&g, l).unwrap(), path_exists, "{g:?}");
                let c = hamiltonian_cycle(&g, l).unwrap();
                assert_eq!(c.is_some(), cycle_exists, "{g:?}");
                if let Some(c) = c {
                    assert!(g.is_cycle(&c) && c.len() == g.n());
                }
            }
        }
    }
}
