use std::collections::HashMap;

use super::{Coord, Graph, GraphError, VertexSet, MAX_VERTICES};

fn from_edge_iter(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
    let mut masks = vec![VertexSet::EMPTY; n];
    for (a, b) in edges {
        masks[a].insert(b);
        masks[b].insert(a);
    }
    Graph::from_masks(masks)
}

/// The cycle `C_n`, vertices in cyclic order.
pub fn cycle(n: usize) -> Graph {
    assert!((3..=MAX_VERTICES).contains(&n), "cycle needs 3..=64 vertices");
    from_edge_iter(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// The path `P_n` on `n` vertices.
pub fn path(n: usize) -> Graph {
    assert!((1..=MAX_VERTICES).contains(&n));
    from_edge_iter(n, (1..n).map(|i| (i - 1, i)))
}

pub fn complete(n: usize) -> Graph {
    assert!((1..=MAX_VERTICES).contains(&n));
    from_edge_iter(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    assert!(a + b <= MAX_VERTICES);
    from_edge_iter(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y))))
}

/// `K_{1,k}` with centre 0.
pub fn star(k: usize) -> Graph {
    complete_bipartite(1, k)
}

/// A clique on `{0} ∪ part1` and a clique on `{0} ∪ part2`, sharing only
/// vertex 0; the parts have `m1` and `m2` vertices.
pub fn clique_pair(m1: usize, m2: usize) -> Graph {
    assert!(m1 + m2 < MAX_VERTICES);
    let n = 1 + m1 + m2;
    let block = |lo: usize, hi: usize| {
        let members: Vec<usize> = std::iter::once(0).chain(lo..hi).collect();
        let mut edges = Vec::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                edges.push((members[i], members[j]));
            }
        }
        edges
    };
    let mut edges = block(1, 1 + m1);
    edges.extend(block(1 + m1, n));
    from_edge_iter(n, edges)
}

/// Two triangles sharing vertex 0.
pub fn bowtie() -> Graph {
    clique_pair(2, 2)
}

/// A cycle of length `a` and a cycle of length `b` sharing vertex 0.
pub fn cycles_sharing_vertex(a: usize, b: usize) -> Graph {
    assert!(a >= 3 && b >= 3 && a + b - 1 <= MAX_VERTICES);
    let n = a + b - 1;
    let mut edges = Vec::new();
    let first: Vec<usize> = std::iter::once(0).chain(1..a).collect();
    let second: Vec<usize> = std::iter::once(0).chain(a..n).collect();
    for cyc in [first, second] {
        for i in 0..cyc.len() {
            edges.push((cyc[i], cyc[(i + 1) % cyc.len()]));
        }
    }
    from_edge_iter(n, edges)
}

/// The theta graph: junctions 0 and 1 joined by internally disjoint paths
/// of lengths `p`, `q` and `r`. Internal vertices are numbered path by path,
/// each path listed from junction 0 towards junction 1.
///
/// Zero lengths (which would merge the junctions) and two unit lengths
/// (a parallel edge) are rejected.
pub fn build_theta(p: usize, q: usize, r: usize) -> Result<Graph, GraphError> {
    let invalid = |rule| GraphError::InvalidTheta { p, q, r, rule };
    let lengths = [p, q, r];
    if lengths.contains(&0) {
        return Err(invalid("zero-length path merges the junctions"));
    }
    if lengths.iter().filter(|&&l| l == 1).count() > 1 {
        return Err(invalid("two unit-length paths form a parallel edge"));
    }
    let n = 2 + lengths.iter().map(|l| l - 1).sum::<usize>();
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let mut edges = Vec::new();
    let mut next = 2;
    for len in lengths {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    Ok(from_edge_iter(n, edges))
}

/// The rectangular grid `[m] × [n]`; vertex `(x, y)` gets id `y * m + x`.
pub fn rectangular_grid(m: usize, n: usize) -> Result<Graph, GraphError> {
    let coords: Vec<Coord> = (0..n as i32)
        .flat_map(|y| (0..m as i32).map(move |x| (x, y)))
        .collect();
    grid_from_coords(&coords)
}

/// The grid graph induced by `coords`: vertex `i` sits at `coords[i]` and
/// two vertices are adjacent iff their coordinates are at unit distance.
/// Duplicate coordinates and disconnected cell sets are rejected.
pub fn grid_from_coords(coords: &[Coord]) -> Result<Graph, GraphError> {
    if coords.is_empty() {
        return Err(GraphError::Empty);
    }
    if coords.len() > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(coords.len()));
    }
    let mut index = HashMap::with_capacity(coords.len());
    for (i, &c) in coords.iter().enumerate() {
        if index.insert(c, i).is_some() {
            return Err(GraphError::DuplicateCoord(c.0, c.1));
        }
    }
    let mut edges = Vec::new();
    for (i, &(x, y)) in coords.iter().enumerate() {
        for nb in [(x + 1, y), (x, y + 1)] {
            if let Some(&j) = index.get(&nb) {
                edges.push((i, j));
            }
        }
    }
    let g = from_edge_iter(coords.len(), edges).with_coords(coords.to_vec());
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(g)
}
