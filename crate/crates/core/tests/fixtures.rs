use snakegraph::characterize::{classify, Reason, Verdict};
use snakegraph::graph::{build_theta, find_theta_n322, girth, hamiltonian_cycle, Graph, Limits};
use snakegraph::solver::winnable;

/// Girth 6 is tight: a non-Hamiltonian, snake-winnable graph of girth 6.
/// Found by a solver search over girth-6 graphs; it is `Θ(3, 3, 3)`.
#[test]
fn girth_six_winnable_non_hamiltonian() {
    let g = Graph::from_edges(
        8,
        &[
            (0, 1),
            (0, 3),
            (1, 2),
            (1, 7),
            (2, 4),
            (3, 5),
            (4, 5),
            (5, 6),
            (6, 7),
        ],
    )
    .unwrap();
    assert!(snakegraph::graph::is_isomorphic(
        &g,
        &build_theta(3, 3, 3).unwrap()
    ));
    assert_eq!(girth(&g), Some(6));
    assert!(hamiltonian_cycle(&g, Limits::default()).unwrap().is_none());
    assert!(find_theta_n322(&g, Limits::default()).unwrap().is_none());
    let w = winnable(&g).unwrap();
    assert!(w.winnable);
    assert_eq!(classify(&g).unwrap().verdict, Verdict::Unknown);
}

#[test]
fn girth_seven_theta_is_lost() {
    let g = build_theta(3, 4, 4).unwrap();
    let c = classify(&g).unwrap();
    assert_eq!(c.reason, Some(Reason::GirthGT6NonHam));
    assert!(!winnable(&g).unwrap().winnable);
}
