//! Exact simplicial homology, induced maps and the cup-product form.
//!
//! Chains are oriented by the sorted vertex order: the boundary of
//! `[v0 … vd]` is `Σ (−1)^i [v0 … v̂i … vd]`.

mod form;
mod smith;
mod sparse;
mod tight;
pub mod z2;

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::complex::SimplicialComplex;

pub use form::{boundary_chain, cycle_pairing, fundamental_class, intersection_form, FundamentalClass, IntersectionForm, Parity};
pub use smith::{IntegerMatrix, SmithForm, Transforms};
pub use sparse::SparseMatrix;
pub use tight::{certify_tight, induced_map_injective, Field, TightMode, TightnessReport, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("complex is not orientable")]
    NotOrientable,
    #[error("complex is not a closed pseudomanifold")]
    NotClosed,
    #[error("expected a complex of dimension {expected}, found {found}")]
    WrongDimension { expected: isize, found: isize },
    #[error("vertex links have not been certified as spheres")]
    NotAManifoldCertificate,
    #[error("cup-product form is not symmetric")]
    Asymmetric,
    #[error("cup-product form has determinant {0}, expected ±1")]
    NotUnimodular(BigInt),
    #[error("all-subsets sweep over {n} vertices exceeds the bound {bound}")]
    BudgetExceeded { n: usize, bound: usize },
    #[error("{0} is not a subcomplex of the ambient complex")]
    NotASubcomplex(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coefficients {
    Z,
    Z2,
    Q,
}

impl std::str::FromStr for Coefficients {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Z" | "z" => Ok(Coefficients::Z),
            "Z2" | "z2" => Ok(Coefficients::Z2),
            "Q" | "q" => Ok(Coefficients::Q),
            _ => Err(format!("unknown coefficients {s:?} (use Z, Z2 or Q)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub coefficients: Coefficients,
    pub reduced: bool,
    pub betti: Vec<usize>,
    #[serde(serialize_with = "serialize_nested_big")]
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyProfile {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(|t| t.is_empty())
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = match self.coefficients {
            Coefficients::Z => "Z",
            Coefficients::Z2 => "Z2",
            Coefficients::Q => "Q",
        };
        for (i, b) in self.betti.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let mut parts = Vec::new();
            if *b > 0 {
                parts.push(if *b == 1 { ring.to_string() } else { format!("{ring}^{b}") });
            }
            parts.extend(self.torsion[i].iter().map(|t| format!("Z/{t}")));
            write!(f, "H{i} = {}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })?;
        }
        Ok(())
    }
}

pub(crate) fn serialize_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn serialize_nested_big<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Row<'a>(&'a [BigInt]);
    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(self.0.len()))?;
            for x in self.0 {
                seq.serialize_element(&Big(x))?;
            }
            seq.end()
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&Row(r))?;
    }
    seq.end()
}

pub(crate) struct Big<'a>(pub &'a BigInt);

impl Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_big(self.0, s)
    }
}

/// The coboundary `δ: C^{d-1} → C^d` as a matrix with one row per d-face
/// (the transpose of `∂_d`).
pub fn coboundary_matrix(k: &SimplicialComplex, d: usize) -> SparseMatrix {
    assert!(d >= 1);
    let rows = k.faces(d);
    let mut m = SparseMatrix::new(rows.len(), k.faces(d - 1).len());
    for (r, s) in rows.iter().enumerate() {
        for i in 0..s.len() {
            let c = k.face_index(&s.without_index(i)).expect("faces are closed under taking subfaces");
            m.push(r, c, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m.finish();
    m
}

/// All coboundary matrices `δ_1 … δ_dim`, with `∂∘∂ = 0` asserted.
pub fn coboundaries(k: &SimplicialComplex) -> Vec<SparseMatrix> {
    let dim = k.dim().max(0) as usize;
    let cob: Vec<SparseMatrix> = (1..=dim).into_par_iter().map(|d| coboundary_matrix(k, d)).collect();
    for w in cob.windows(2) {
        assert!(w[1].product_is_zero(&w[0]), "boundary of a boundary must vanish");
    }
    cob
}

pub fn homology(k: &SimplicialComplex, coefficients: Coefficients) -> HomologyProfile {
    homology_with(k, coefficients, false)
}

pub fn homology_with(k: &SimplicialComplex, coefficients: Coefficients, reduced: bool) -> HomologyProfile {
    if k.dim() < 0 {
        return HomologyProfile { coefficients, reduced, betti: Vec::new(), torsion: Vec::new() };
    }
    let dim = k.dim() as usize;
    let f = k.f_vector();
    let cob = coboundaries(k);
    // ranks[d] = rank ∂_d for d = 1..=dim; torsion of ∂_d lands in H_{d-1}
    let per_dim: Vec<(usize, Vec<BigInt>)> = cob
        .par_iter()
        .map(|m| match coefficients {
            Coefficients::Z => sparse::rank_and_torsion(m),
            Coefficients::Q => (sparse::rank_and_torsion(m).0, Vec::new()),
            Coefficients::Z2 => (z2_rank(m), Vec::new()),
        })
        .collect();
    let rank = |d: usize| -> usize {
        match d {
            0 => usize::from(reduced && f[0] > 0),
            d if d > dim => 0,
            d => per_dim[d - 1].0,
        }
    };
    let betti: Vec<usize> = (0..=dim).map(|i| f[i] - rank(i) - rank(i + 1)).collect();
    let torsion: Vec<Vec<BigInt>> = (0..=dim).map(|i| if i < dim { per_dim[i].1.clone() } else { Vec::new() }).collect();
    let alt: i64 = betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    assert_eq!(alt, k.euler_characteristic() - i64::from(reduced), "Euler–Poincaré");
    HomologyProfile { coefficients, reduced, betti, torsion }
}

fn z2_rank(m: &SparseMatrix) -> usize {
    z2::rank(m.rows.iter().map(|row| {
        let mut v = z2::BitVec::zeros(m.ncols);
        for &(c, x) in row {
            if x % 2 != 0 {
                v.flip(c as usize);
            }
        }
        v
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complex_from_lists, parse_facet_list};
    use crate::polytope::{cross_polytope, simplex_boundary};

    fn rp2() -> SimplicialComplex {
        complex_from_lists(
            6,
            &[
                &[0, 1, 3],
                &[0, 1, 5],
                &[0, 2, 4],
                &[0, 2, 5],
                &[0, 3, 4],
                &[1, 2, 3],
                &[1, 2, 4],
                &[1, 4, 5],
                &[2, 3, 5],
                &[3, 4, 5],
            ],
        )
    }

    #[test]
    fn spheres() {
        for d in 1..=6 {
            let h = homology(&simplex_boundary(d), Coefficients::Z);
            let mut want = vec![0; d];
            want[0] += 1;
            want[d - 1] += 1;
            assert_eq!(h.betti, want, "∂Δ^{d}");
            assert!(h.is_torsion_free());
            let r = homology_with(&simplex_boundary(d), Coefficients::Z, true);
            assert_eq!(r.betti[0], usize::from(d == 1));
        }
        assert_eq!(homology(&cross_polytope(5).0, Coefficients::Z2).betti, vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn projective_plane_depends_on_coefficients() {
        let k = rp2();
        let z = homology(&k, Coefficients::Z);
        assert_eq!(z.betti, vec![1, 0, 0]);
        assert_eq!(z.torsion[1], vec![BigInt::from(2)]);
        assert_eq!(homology(&k, Coefficients::Z2).betti, vec![1, 1, 1]);
        assert_eq!(homology(&k, Coefficients::Q).betti, vec![1, 0, 0]);
        assert_eq!(z.to_string(), "H0 = Z, H1 = Z/2, H2 = 0");
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let (k, _) = parse_facet_list(include_str!("../../fixtures/theorem2_facets.txt")).unwrap();
        let cob = coboundaries(&k);
        assert_eq!(cob.len(), 4);
        for w in cob.windows(2) {
            assert!(w[1].product_is_zero(&w[0]));
        }
    }

    #[test]
    fn orbit_manifold_homology() {
        let (k, _) = parse_facet_list(include_str!("../../fixtures/theorem2_facets.txt")).unwrap();
        let h = homology(&k, Coefficients::Z);
        assert_eq!(h.betti, vec![1, 0, 14, 0, 1]);
        assert!(h.is_torsion_free());
        let json = serde_json::to_value(&h).unwrap();
        assert_eq!(json["betti"][2], 14);
    }
}
