//! Property checks shared by the property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hamsub::bistellar::{apply_flip, valid_flips, FlipMove};
use hamsub::complex::{are_isomorphic, Simplex, SimplicialComplex, VertexId};
use hamsub::homology::{coboundaries, homology, intersection_form, Coefficients};
use hamsub::pipelines::fixtures;
use hamsub::polytope::{build_regular_4_polytope, cross_polytope, Regular4};
use hamsub::search::{search_hamiltonian_surfaces, SearchMode, SearchProblem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_complex(rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let n = rng.gen_range(3..=9);
    let m = rng.gen_range(1..=8);
    let facets = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=5.min(n));
            let mut vs: Vec<VertexId> = (0..n as VertexId).collect();
            vs.shuffle(rng);
            Simplex::new(vs[..size].to_vec()).unwrap()
        })
        .collect();
    SimplicialComplex::from_facets(n, facets)
}

fn relabel(k: &SimplicialComplex, rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let mut images: Vec<VertexId> = (0..k.n_vertices() as VertexId).collect();
    images.shuffle(rng);
    let facets = k.facets().iter().map(|f| f.map(&images)).collect();
    SimplicialComplex::from_facets(k.n_vertices(), facets)
}

pub fn boundary_squares_to_zero_and_euler_poincare() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let k = random_complex(&mut rng);
        let cob = coboundaries(&k);
        for w in cob.windows(2) {
            assert!(w[1].product_is_zero(&w[0]));
        }
        for c in [Coefficients::Z, Coefficients::Z2, Coefficients::Q] {
            let h = homology(&k, c);
            let alt: i64 = h.betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            assert_eq!(alt, k.euler_characteristic());
        }
    }
}

fn labeled(k: &SimplicialComplex) -> BTreeSet<Vec<u32>> {
    k.labeled_facets()
        .into_iter()
        .map(|mut f| {
            f.sort_unstable();
            f
        })
        .collect()
}

/// The inverse of `m` (ids of `before`) in the ids of `after`.
fn inverse_in(before: &SimplicialComplex, after: &SimplicialComplex, m: &FlipMove) -> FlipMove {
    let new_label = after.labels().iter().copied().find(|l| before.vertex_of_label(*l).is_none());
    let to_after = |v: &VertexId| -> VertexId {
        let l = if (*v as usize) < before.n_vertices() { before.label(*v) } else { new_label.unwrap() };
        after.vertex_of_label(l).unwrap()
    };
    let face: Vec<VertexId> = m.coface.iter().map(to_after).collect();
    let coface: Vec<VertexId> = if m.face.len() == 1 {
        vec![after.n_vertices() as VertexId]
    } else {
        m.face.iter().map(to_after).collect()
    };
    let mut inv = FlipMove { face, coface };
    inv.face.sort_unstable();
    inv.coface.sort_unstable();
    inv
}

pub fn flips_are_reversible_and_preserve_homology() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut k, _) = cross_polytope(4);
    let want = homology(&k, Coefficients::Z);
    for step in 0..1000 {
        let moves: Vec<FlipMove> =
            valid_flips(&k).unwrap().into_iter().filter(|m| m.coface.len() > 1 || k.n_vertices() < 12).collect();
        let m = moves.choose(&mut rng).unwrap().clone();
        let next = apply_flip(&k, &m).unwrap();
        let back = apply_flip(&next, &inverse_in(&k, &next, &m)).unwrap();
        if m.face.len() == 1 {
            // the removed vertex comes back under a fresh label
            assert!(are_isomorphic(&back, &k).is_some(), "step {step}");
        } else {
            assert_eq!(labeled(&back), labeled(&k), "step {step}: {m:?}");
        }
        let h = homology(&next, Coefficients::Z);
        assert_eq!((h.betti, h.torsion), (want.betti.clone(), want.torsion.clone()), "step {step}");
        k = next;
    }
}

pub fn intersection_form_is_invariant_under_reordering() {
    let k = fixtures::theorem2_complex();
    let base = intersection_form(&k, true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let f = intersection_form(&relabel(&k, &mut rng), true).unwrap();
        assert_eq!((f.rank, f.parity, f.signature), (base.rank, base.parity, base.signature));
    }
}

pub fn classification_sees_through_relabeling() {
    let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
    let mut p = SearchProblem::new(m.complex.clone(), SearchMode::Pinched);
    p.symmetry = Some(m.symmetry_group().clone());
    let out = search_hamiltonian_surfaces(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (i, c) in out.classes.iter().enumerate() {
        let dup = relabel(&c.representative, &mut rng);
        for (j, d) in out.classes.iter().enumerate() {
            assert_eq!(are_isomorphic(&dup, &d.representative).is_some(), i == j, "classes {i} and {j}");
        }
    }
}

fn cell24_pinched(symmetry: bool) -> hamsub::search::SearchOutcome {
    let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
    let mut p = SearchProblem::new(m.complex.clone(), SearchMode::Pinched);
    if symmetry {
        p.symmetry = Some(m.symmetry_group().clone());
    }
    search_hamiltonian_surfaces(&p).unwrap()
}

/// The unreduced 24-cell search finds no class missing from the reduced one.
pub fn symmetry_reduction_loses_no_class() {
    let (reduced, full) = (cell24_pinched(true), cell24_pinched(false));
    assert!(reduced.exhausted() && full.exhausted());
    assert!(full.solutions.len() > reduced.solutions.len());
    assert_eq!(full.classes.len(), reduced.classes.len());
    for c in &full.classes {
        assert!(reduced.classes.iter().any(|r| are_isomorphic(&c.representative, &r.representative).is_some()));
    }
}
