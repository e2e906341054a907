//! Connected graphs up to isomorphism, via vertex augmentation and a
//! canonical form computed by colour refinement plus individualisation.

use std::collections::HashSet;

use super::{Graph, GraphError, VertexSet};

/// Largest order accepted by [`enumerate_connected_graphs`].
pub const MAX_ENUMERATION_ORDER: usize = 8;

/// Isomorphism-invariant code: adjacency rows under the canonical labelling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u64>);

pub fn canonical_code(g: &Graph) -> CanonicalCode {
    canonical_form(g).0
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_code(a) == canonical_code(b)
}

/// The canonical code and a labelling `perm` (vertex `v` becomes `perm[v]`)
/// that realises it.
fn canonical_form(g: &Graph) -> (CanonicalCode, Vec<usize>) {
    let colors = refine(g, vec![0; g.n()]);
    let mut best: Option<(CanonicalCode, Vec<usize>)> = None;
    search(g, colors, &mut best);
    best.expect("search visits at least one leaf")
}

fn search(g: &Graph, colors: Vec<u32>, best: &mut Option<(CanonicalCode, Vec<usize>)>) {
    let n = g.n();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let target = (0..n).find(|&c| counts[c] > 1);
    let Some(cell) = target else {
        let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let code = code_under(g, &perm);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, perm));
        }
        return;
    };
    for v in 0..n {
        if colors[v] as usize != cell {
            continue;
        }
        let split: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| 2 * c + u32::from(c as usize == cell && w != v))
            .collect();
        search(g, refine(g, split), best);
    }
}

/// Colour refinement to the coarsest equitable partition finer than
/// `colors`. Colours are re-ranked by sorted signature, so the result does
/// not depend on vertex names.
fn refine(g: &Graph, mut colors: Vec<u32>) -> Vec<u32> {
    let n = g.n();
    let mut classes = rank(&mut colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut next = vec![0; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut c = 0;
        for (i, &v) in order.iter().enumerate() {
            if i > 0 && sigs[v] != sigs[order[i - 1]] {
                c += 1;
            }
            next[v] = c;
        }
        let count = c as usize + 1;
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// Re-ranks colours to `0..k` preserving order; returns `k`.
fn rank(colors: &mut [u32]) -> usize {
    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for c in colors.iter_mut() {
        *c = distinct.binary_search(c).unwrap() as u32;
    }
    distinct.len()
}

fn code_under(g: &Graph, perm: &[usize]) -> CanonicalCode {
    let mut rows = vec![0u64; g.n()];
    for (u, v) in g.edges() {
        rows[perm[u]] |= 1 << perm[v];
        rows[perm[v]] |= 1 << perm[u];
    }
    CanonicalCode(rows)
}

/// Every connected simple graph on `n` vertices, exactly once up to
/// isomorphism, in canonical labelling and sorted by canonical code.
///
/// Each connected graph on `n` vertices has a vertex whose removal leaves
/// it connected, so augmenting the connected graphs on `n - 1` vertices by
/// one vertex reaches all of them.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(GraphError::CeilingExceeded {
            op: "enumerate_connected_graphs",
            n,
            limit: MAX_ENUMERATION_ORDER,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![Graph::from_masks(vec![VertexSet::EMPTY])];
    for k in 1..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for bits in 1u64..(1 << k) {
                let attach = VertexSet::from_bits(bits);
                let mut masks: Vec<VertexSet> = (0..k)
                    .map(|v| {
                        let m = g.neighbor_set(v);
                        if attach.contains(v) {
                            m.with(k)
                        } else {
                            m
                        }
                    })
                    .collect();
                masks.push(attach);
                let h = Graph::from_masks(masks);
                let (code, perm) = canonical_form(&h);
                if seen.insert(code.clone()) {
                    next.push((code, h.permuted(&perm)));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};

    /// Minimum adjacency code over all n! relabellings.
    fn brute_code(g: &Graph) -> Vec<u64> {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for i in 0..k {
                    let mut q = p.clone();
                    q.insert(i, k - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(g.n())
            .into_iter()
            .map(|p| code_under(g, &p).0)
            .min()
            .unwrap()
    }

    fn brute_connected_count(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut seen = HashSet::new();
        for bits in 0u64..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            if g.is_connected() {
                seen.insert(brute_code(&g));
            }
        }
        seen.len()
    }

    #[test]
    fn counts_match_brute_force() {
        for n in 1..=5 {
            let fast = enumerate_connected_graphs(n).unwrap().len();
            assert_eq!(fast, brute_connected_count(n), "n={n}");
        }
        assert_eq!(enumerate_connected_graphs(3).unwrap().len(), 2);
        assert_eq!(enumerate_connected_graphs(4).unwrap().len(), 6);
    }

    #[test]
    fn known_counts() {
        // OEIS A001349
        assert_eq!(enumerate_connected_graphs(6).unwrap().len(), 112);
        assert_eq!(enumerate_connected_graphs(7).unwrap().len(), 853);
    }

    #[test]
    fn canonical_code_is_labelling_invariant() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)]).unwrap();
        let h = g.permuted(&[5, 3, 0, 2, 4, 1]);
        assert_eq!(canonical_code(&g), canonical_code(&h));
        assert!(is_isomorphic(&g, &h));
        assert!(!is_isomorphic(&cycle(6), &path(6)));
    }

    #[test]
    fn stream_contains_c5_and_k5() {
        let all = enumerate_connected_graphs(5).unwrap();
        assert!(all.iter().any(|g| is_isomorphic(g, &cycle(5))));
        assert!(all.iter().any(|g| is_isomorphic(g, &complete(5))));
        assert!(all.iter().all(Graph::is_connected));
    }

    #[test]
    fn order_ceiling() {
        assert!(matches!(
            enumerate_connected_graphs(9),
            Err(GraphError::CeilingExceeded { .. })
        ));
    }
}
