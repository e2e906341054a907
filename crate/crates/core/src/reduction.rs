//! Hamiltonian cycle on even grid graphs reduces to snake-winnability on
//! odd grid graphs.
//!
//! The gadget is a 3×3 block of cells stacked on the attachment pair
//! `u = (x-1, y)`, `v = (x, y)`, where `v` is the rightmost vertex of the top
//! row. In coordinates relative to `u`:
//!
//! ```text
//!   y=3   g g g
//!   y=2   g m j
//!   y=1   g j m
//!   y=0   u v
//! ```
//!
//! The junctions `j` are `(1,1)` and `(2,2)`, the middles `m` are `(2,1)` and
//! `(1,2)`. A Hamiltonian `v`-`u` path of `G` closes up with the left and top
//! columns of the block into the long path of a spanning `Θ(n'-3, 2, 2)`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{find_theta_n322, grid_from_coords, hamiltonian_cycle, Coord, Graph, GraphError, Limits};

/// Gadget cells relative to `u`.
pub const GADGET: [Coord; 9] = [
    (0, 1),
    (1, 1),
    (2, 1),
    (0, 2),
    (1, 2),
    (2, 2),
    (0, 3),
    (1, 3),
    (2, 3),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("grid graph has {0} vertices; the reduction needs an even count of at least 4")]
    BadSize(usize),
    #[error("graph has no grid coordinates")]
    MissingCoords,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Where the gadget sits in `G'`. Vertices of `G` keep their ids in `G'`;
/// gadget cells follow in [`GADGET`] order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetAttachment {
    pub u: usize,
    pub v: usize,
    pub gadget_coords: Vec<Coord>,
    /// Junction, middle, junction, middle: `(v1, v2, v3)` and `(v1, v4, v3)`
    /// are the two 2-paths.
    pub v1: usize,
    pub v2: usize,
    pub v3: usize,
    pub v4: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Reduced {
        graph: Graph,
        attachment: GadgetAttachment,
    },
    /// `v` has no left neighbour, so it has degree at most 1 and `G` has no
    /// Hamiltonian cycle.
    NotHamiltonian { v: usize },
}

pub fn reduce(g: &Graph) -> Result<Reduction, ReductionError> {
    let n = g.n();
    if n % 2 == 1 || n < 4 {
        return Err(ReductionError::BadSize(n));
    }
    let coords = g.coords().ok_or(ReductionError::MissingCoords)?;
    let v = (0..n)
        .max_by_key(|&i| (coords[i].1, coords[i].0))
        .expect("graph is non-empty");
    let (vx, vy) = coords[v];
    let Some(u) = g.vertex_at((vx - 1, vy)) else {
        return Ok(Reduction::NotHamiltonian { v });
    };
    let (ux, uy) = coords[u];
    let gadget_coords: Vec<Coord> = GADGET.iter().map(|&(dx, dy)| (ux + dx, uy + dy)).collect();
    let mut all = coords.to_vec();
    all.extend_from_slice(&gadget_coords);
    let graph = grid_from_coords(&all)?;
    let id = |i: usize| n + i;
    let attachment = GadgetAttachment {
        u,
        v,
        gadget_coords,
        v1: id(1),
        v2: id(2),
        v3: id(5),
        v4: id(4),
    };
    Ok(Reduction::Reduced { graph, attachment })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetReport {
    /// Parity, attachment only at `u` and `v`, `G` embedded unchanged.
    pub p1_attachment: bool,
    /// Both 2-paths exist.
    pub p2_two_paths: bool,
    /// No cycle of length `|V'| - 1` passes through both middles.
    pub p3_no_long_cycle_through_middles: bool,
    /// A spanning `Θ(|V'|-3, 2, 2)` exists in `G'` iff `G` is Hamiltonian.
    pub p4_biconditional: bool,
    pub theta_in_reduced: bool,
    pub hamiltonian: bool,
    pub details: Vec<String>,
}

impl GadgetReport {
    pub fn holds(&self) -> bool {
        self.p1_attachment && self.p2_two_paths && self.p4_biconditional
    }
}

/// Checks a reduction instance by exhaustive search.
pub fn verify_gadget(
    g: &Graph,
    reduced: &Graph,
    att: &GadgetAttachment,
    limits: Limits,
) -> Result<GadgetReport, ReductionError> {
    let n = g.n();
    let mut details = Vec::new();
    let mut note = |ok: bool, msg: String| {
        if !ok {
            details.push(msg);
        }
        ok
    };

    let mut p1 = note(n.is_multiple_of(2), format!("G has odd size {n}"));
    p1 &= note(reduced.n() % 2 == 1, format!("G' has even size {}", reduced.n()));
    p1 &= note(
        reduced.n() == n + att.gadget_coords.len(),
        "G' is not G plus the gadget".into(),
    );
    p1 &= note(
        reduced.coords().is_some() && g.coords().is_some(),
        "missing coordinates".into(),
    );
    // v has no neighbour above or to the right, so any Hamiltonian cycle uses uv
    p1 &= note(
        att.u < n && att.v < n && g.degree(att.v) <= 2 && g.has_edge(att.u, att.v),
        format!("v = {} is not a degree-2 end of the edge uv", att.v),
    );
    if p1 {
        let same = (0..n).all(|i| {
            reduced.coord(i) == g.coord(i)
                && reduced.neighbor_set(i).intersection(g.vertex_set()) == g.neighbor_set(i)
        });
        p1 &= note(same, "G is not embedded unchanged in G'".into());
        for w in n..reduced.n() {
            let touches = reduced.neighbor_set(w).intersection(g.vertex_set());
            let ok = touches.iter().all(|x| x == att.u || x == att.v);
            p1 &= note(ok, format!("gadget vertex {w} touches G outside u and v"));
        }
        p1 &= note(
            reduced.vertex_at(att.gadget_coords[0]) == Some(n),
            "gadget ids out of order".into(),
        );
    }

    let in_range = [att.v1, att.v2, att.v3, att.v4].iter().all(|&w| w < reduced.n());
    let p2 = note(
        in_range
            && reduced.is_simple_path(&[att.v1, att.v2, att.v3])
            && reduced.is_simple_path(&[att.v1, att.v4, att.v3]),
        "a 2-path between the junctions is missing".into(),
    );

    let mut p3 = true;
    if in_range {
        for w in reduced.vertices().filter(|&w| w != att.v2 && w != att.v4) {
            let keep: Vec<usize> = reduced.vertices().filter(|&x| x != w).collect();
            if hamiltonian_cycle(&reduced.induced_subgraph(&keep), limits)?.is_some() {
                p3 = note(
                    false,
                    format!("a cycle avoiding only vertex {w} passes through both middles"),
                );
                break;
            }
        }
    }

    let theta = find_theta_n322(reduced, limits)?.is_some();
    let ham = hamiltonian_cycle(g, limits)?.is_some();
    let p4 = note(
        theta == ham,
        format!("spanning theta in G' is {theta} but G Hamiltonian is {ham}"),
    );

    Ok(GadgetReport {
        p1_attachment: p1,
        p2_two_paths: p2,
        p3_no_long_cycle_through_middles: p3,
        p4_biconditional: p4,
        theta_in_reduced: theta,
        hamiltonian: ham,
        details,
    })
}

/// All fixed polyominoes (connected cell sets up to translation) with
/// `cells` cells, each normalized to minimum coordinate 0 and sorted.
pub fn fixed_polyominoes(cells: usize) -> Vec<Vec<Coord>> {
    use std::collections::BTreeSet;
    if cells == 0 {
        return Vec::new();
    }
    let normalize = |mut p: Vec<Coord>| {
        let mx = p.iter().map(|c| c.0).min().unwrap();
        let my = p.iter().map(|c| c.1).min().unwrap();
        for c in &mut p {
            *c = (c.0 - mx, c.1 - my);
        }
        p.sort_unstable();
        p
    };
    let mut level: BTreeSet<Vec<Coord>> = BTreeSet::from([vec![(0, 0)]]);
    for _ in 1..cells {
        let mut next = BTreeSet::new();
        for p in &level {
            for &(x, y) in p {
                for c in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                    if !p.contains(&c) {
                        let mut q = p.clone();
                        q.push(c);
                        next.insert(normalize(q));
                    }
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

/// Every connected grid graph with an even number of cells in `4..=max_cells`.
pub fn even_grid_corpus(max_cells: usize) -> Vec<Graph> {
    (4..=max_cells)
        .step_by(2)
        .flat_map(fixed_polyominoes)
        .map(|cells| grid_from_coords(&cells).expect("polyominoes are connected"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::rectangular_grid;
    use crate::solver::winnable;

    fn reduced(g: &Graph) -> (Graph, GadgetAttachment) {
        match reduce(g).unwrap() {
            Reduction::Reduced { graph, attachment } => (graph, attachment),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn polyomino_counts() {
        let counts: Vec<usize> = (1..=8).map(|k| fixed_polyominoes(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 6, 19, 63, 216, 760, 2725]);
    }

    #[test]
    fn square_reduces_to_a_theta_graph() {
        let g = rectangular_grid(2, 2).unwrap();
        let (gp, att) = reduced(&g);
        assert_eq!(gp.n(), 13);
        assert!(gp.is_grid());
        let theta = find_theta_n322(&gp, Limits::default()).unwrap().unwrap();
        theta.verify(&gp).unwrap();
        let report = verify_gadget(&g, &gp, &att, Limits::default()).unwrap();
        assert!(report.holds(), "{report:?}");
        assert!(report.theta_in_reduced && report.hamiltonian);
    }

    #[test]
    fn straight_tetromino_is_rejected_both_ways() {
        let g = rectangular_grid(4, 1).unwrap();
        let (gp, att) = reduced(&g);
        assert_eq!((att.u, att.v), (2, 3));
        assert!(find_theta_n322(&gp, Limits::default()).unwrap().is_none());
        let report = verify_gadget(&g, &gp, &att, Limits::default()).unwrap();
        assert!(report.holds());
        assert!(!report.theta_in_reduced && !report.hamiltonian);
        assert!(!winnable(&gp).unwrap().winnable);
    }

    #[test]
    fn two_by_three_grid() {
        let g = rectangular_grid(2, 3).unwrap();
        let (gp, att) = reduced(&g);
        assert_eq!(gp.n(), 15);
        let report = verify_gadget(&g, &gp, &att, Limits::default()).unwrap();
        assert!(report.holds() && report.theta_in_reduced);
    }

    #[test]
    fn missing_left_neighbour_short_circuits() {
        // an L tetromino whose top row is a single cell
        let g = grid_from_coords(&[(0, 0), (1, 0), (2, 0), (0, 1)]).unwrap();
        assert_eq!(reduce(&g).unwrap(), Reduction::NotHamiltonian { v: 3 });
    }

    #[test]
    fn input_errors() {
        assert_eq!(
            reduce(&rectangular_grid(3, 1).unwrap()),
            Err(ReductionError::BadSize(3))
        );
        assert_eq!(
            reduce(&rectangular_grid(2, 1).unwrap()),
            Err(ReductionError::BadSize(2))
        );
        assert_eq!(
            reduce(&crate::graph::cycle(4)),
            Err(ReductionError::MissingCoords)
        );
    }

    #[test]
    fn corrupted_gadget_is_caught() {
        let g = rectangular_grid(2, 2).unwrap();
        let (gp, mut att) = reduced(&g);
        let mut cells = gp.coords().unwrap().to_vec();
        cells.pop();
        att.gadget_coords.pop();
        let broken = grid_from_coords(&cells).unwrap();
        let report = verify_gadget(&g, &broken, &att, Limits::default()).unwrap();
        assert!(!report.p1_attachment);
        assert!(!report.holds());
    }

    #[test]
    fn biconditional_on_six_cell_corpus() {
        for g in even_grid_corpus(6) {
            match reduce(&g).unwrap() {
                Reduction::Reduced { graph, attachment } => {
                    let r = verify_gadget(&g, &graph, &attachment, Limits::default()).unwrap();
                    assert!(r.holds(), "{:?}: {:?}", g.coords(), r.details);
                }
                Reduction::NotHamiltonian { .. } => {
                    assert!(hamiltonian_cycle(&g, Limits::default()).unwrap().is_none());
                }
            }
        }
    }
}
