mod common;

use std::time::Duration;

use hamsub::complex::classify_closed;
use hamsub::polytope::{build_regular_4_polytope, Regular4};
use hamsub::search::{
    expected_surface_census, search_hamiltonian_surfaces, solution_complex, Budget, SearchMode, SearchOutcome,
    SearchProblem, SearchStatus,
};

fn cell24(symmetry: bool) -> SearchOutcome {
    let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
    let mut p = SearchProblem::new(m.complex.clone(), SearchMode::Pinched);
    if symmetry {
        p.symmetry = Some(m.symmetry_group().clone());
    }
    search_hamiltonian_surfaces(&p).unwrap()
}

#[test]
fn symmetry_reduction_loses_no_class() {
    common::symmetry_reduction_loses_no_class();
}

#[test]
fn solutions_are_closed_pinched_surfaces() {
    let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
    let census = expected_surface_census(&m.complex).unwrap();
    let out = cell24(true);
    for s in &out.solutions {
        assert_eq!(s.len(), census.f2);
        let k = solution_complex(&m.complex, s);
        let edges = k.faces(1).len();
        assert_eq!(edges, 96, "every edge of the 24-cell is used");
        classify_closed(&k).unwrap();
    }
}

#[test]
fn search_is_deterministic() {
    let (a, b) = (cell24(true), cell24(true));
    assert_eq!(a.solutions, b.solutions);
    let fa: Vec<_> = a.classes.iter().map(|c| c.faces.clone()).collect();
    let fb: Vec<_> = b.classes.iter().map(|c| c.faces.clone()).collect();
    assert_eq!(fa, fb);
}

#[test]
fn checkpoint_resumes() {
    let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
    let dir = std::env::temp_dir().join(format!("hamsub-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("state.json");
    let _ = std::fs::remove_file(&path);
    let mut p = SearchProblem::new(m.complex.clone(), SearchMode::Pinched);
    p.checkpoint = Some(path.clone());
    p.budget = Budget { max_nodes: Some(2000), max_time: None };
    let first = search_hamiltonian_surfaces(&p).unwrap();
    assert_eq!(first.status, SearchStatus::BudgetExceeded);
    assert!(path.exists());
    p.budget = Budget { max_nodes: None, max_time: Some(Duration::from_secs(600)) };
    let resumed = search_hamiltonian_surfaces(&p).unwrap();
    assert!(resumed.exhausted());
    assert_eq!(resumed.subtrees_completed, resumed.subtrees_total);
    let fresh = cell24(false);
    assert_eq!(resumed.solutions.len(), fresh.solutions.len());
    assert_eq!(resumed.classes.len(), 6);
    let _ = std::fs::remove_dir_all(&dir);
}
