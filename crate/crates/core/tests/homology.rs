use std::time::Instant;

use hamsub::complex::parse_facet_list;
use hamsub::homology::{certify_tight, homology, Coefficients, Field, TightMode};
use hamsub::polytope::cross_polytope;

fn orbit_manifold() -> hamsub::complex::SimplicialComplex {
    parse_facet_list(include_str!("../fixtures/theorem2_facets.txt")).unwrap().0
}

#[test]
fn orbit_manifold_is_tight_under_halfspaces() {
    let k = orbit_manifold();
    let pairs = (0..8).map(|i| (2 * i, 2 * i + 1)).collect();
    let t = Instant::now();
    let r = certify_tight(&k, Field::Z2, TightMode::Halfspaces(pairs)).unwrap();
    eprintln!("halfspace sweep ({} sets) in {:?}", r.subsets_checked, t.elapsed());
    assert!(r.passed, "{:?}", r.violation);
    assert_eq!(r.subsets_checked, 2 * 6561 - 256 - 1);
}

#[test]
fn antipodal_pair_spans_two_points() {
    // not every vertex set is cut out by a halfspace: a non-edge spans a disconnected set
    let k = orbit_manifold();
    let r = certify_tight(&k, Field::Z2, TightMode::AllSubsets).unwrap();
    assert!(!r.passed);
    let v = r.violation.unwrap();
    assert_eq!((v.subset, v.dim), (vec![1, 2], 0));
}

#[test]
fn cross_polytope_homology_over_all_rings() {
    let (k, _) = cross_polytope(6);
    for c in [Coefficients::Z, Coefficients::Z2, Coefficients::Q] {
        assert_eq!(homology(&k, c).betti, vec![1, 0, 0, 0, 0, 1]);
    }
}

#[test]
fn orbit_manifold_betti_over_fields() {
    let k = orbit_manifold();
    assert_eq!(homology(&k, Coefficients::Z2).betti, vec![1, 0, 14, 0, 1]);
    assert_eq!(homology(&k, Coefficients::Q).betti, vec![1, 0, 14, 0, 1]);
}
