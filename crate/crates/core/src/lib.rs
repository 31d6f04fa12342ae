//! Hamiltonian subcomplexes of regular polytopes: simplicial complexes,
//! permutation groups, exact polytope construction, homology, bistellar flips
//! and exhaustive surface search.

pub mod bistellar;
pub mod complex;
pub mod homology;
pub mod perm;
pub mod pipelines;
pub mod polytope;
pub mod search;
