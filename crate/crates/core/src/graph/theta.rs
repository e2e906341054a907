use serde::{Deserialize, Serialize};

use super::search::hamiltonian_path_within;
use super::{Graph, GraphError, Limits, VertexSet};

/// Witness that `Θ(n-3, 2, 2)` is a spanning subgraph: junctions `u`, `v`,
/// the middle vertices `x`, `y` of the two 2-paths, and the long `u`-`v`
/// path through every other vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaCertificate {
    pub u: usize,
    pub v: usize,
    pub x: usize,
    pub y: usize,
    pub long_path: Vec<usize>,
}

impl ThetaCertificate {
    /// Independent edge-by-edge check against `g`.
    pub fn verify(&self, g: &Graph) -> Result<(), String> {
        let n = g.n();
        let &ThetaCertificate { u, v, x, y, .. } = self;
        if [u, v, x, y].iter().any(|&w| w >= n) {
            return Err("vertex out of range".into());
        }
        if x == y || u == v {
            return Err("junctions and middles must be distinct".into());
        }
        for m in [x, y] {
            if !g.has_edge(u, m) || !g.has_edge(m, v) {
                return Err(format!("middle {m} is not adjacent to both junctions"));
            }
        }
        let p = &self.long_path;
        if p.first() != Some(&u) || p.last() != Some(&v) {
            return Err("long path must run from u to v".into());
        }
        if p.len() + 2 != n {
            return Err(format!("long path has {} vertices, expected {}", p.len(), n - 2));
        }
        if p.contains(&x) || p.contains(&y) {
            return Err("long path meets a middle vertex".into());
        }
        if !g.is_simple_path(p) {
            return Err("long path is not a simple path of the graph".into());
        }
        Ok(())
    }

    /// The two cycles of length `n - 1`: the long path closed through `x`,
    /// respectively through `y`. Both start at `u` and walk the long path.
    pub fn cycles(&self) -> [Vec<usize>; 2] {
        [self.x, self.y].map(|m| {
            let mut c = self.long_path.clone();
            c.push(m);
            c
        })
    }
}

/// Searches for a spanning `Θ(n-3, 2, 2)`.
///
/// For each junction pair and each pair of common neighbours, looks for a
/// Hamiltonian junction-to-junction path avoiding the two middles. Exact.
pub fn find_theta_n322(g: &Graph, limits: Limits) -> Result<Option<ThetaCertificate>, GraphError> {
    limits.check("find_theta_n322", g.n())?;
    let n = g.n();
    if n < 5 {
        return Ok(None);
    }
    let all = g.vertex_set();
    for u in 0..n {
        for v in u + 1..n {
            let common: Vec<usize> = g.neighbor_set(u).intersection(g.neighbor_set(v)).iter().collect();
            for (i, &x) in common.iter().enumerate() {
                for &y in &common[i + 1..] {
                    let allowed = all.difference(VertexSet::from_iter([x, y]));
                    if let Some(long_path) = hamiltonian_path_within(g, u, v, allowed) {
                        return Ok(Some(ThetaCertificate {
                            u,
                            v,
                            x,
                            y,
                            long_path,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}
