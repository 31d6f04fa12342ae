//! Injectivity of induced maps in homology, and tightness sweeps over
//! spanned subcomplexes.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sparse::{self, SparseMatrix};
use super::z2::{self, BitVec, Echelon};
use super::{coboundary_matrix, HomologyError};
use crate::complex::{SimplicialComplex, VertexId};

/// Largest vertex count for an exhaustive subset sweep.
pub const ALL_SUBSETS_BOUND: usize = 20;
const MASK_BITS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Field {
    Z2,
    Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TightMode {
    /// Every vertex subset, every dimension.
    AllSubsets,
    /// Every vertex subset, dimensions `0..=k`.
    KTight(usize),
    /// Uniformly random subsets from a seeded generator, every dimension.
    Sampled { samples: usize, seed: u64 },
    /// Vertex sets cut out by open or closed halfspaces when the complex sits
    /// in a cross polytope with the given antipodal pairs: at most one vertex
    /// of every pair, or the complement of such a set.
    Halfspaces(Vec<(VertexId, VertexId)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Vertex labels of the spanning set.
    pub subset: Vec<u32>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub field: Field,
    pub mode: TightMode,
    pub subsets_checked: u64,
    pub passed: bool,
    pub violation: Option<Violation>,
}

/// Precomputed data of the ambient complex `K` over one field.
struct Ambient<'k> {
    k: &'k SimplicialComplex,
    field: Field,
    dim: usize,
    /// `cob[d]` has one row per d-face (`cob[0]` is empty).
    cob: Vec<SparseMatrix>,
    /// Z₂ boundaries `bits[d][σ]` over the (d−1)-faces.
    bits: Vec<Vec<BitVec>>,
    /// Reduced echelon basis of the Z₂ boundaries `B_d(K)`.
    bounds_z2: Vec<Echelon>,
    /// Rank of `B_d(K)` over ℚ.
    bounds_q: Vec<usize>,
    masks: Vec<Vec<u128>>,
}

impl<'k> Ambient<'k> {
    fn new(k: &'k SimplicialComplex, field: Field) -> Self {
        let dim = k.dim().max(0) as usize;
        let mut cob = vec![SparseMatrix::new(0, 0)];
        cob.extend((1..=dim).map(|d| coboundary_matrix(k, d)));
        let bits: Vec<Vec<BitVec>> = cob
            .iter()
            .map(|m| {
                m.rows
                    .iter()
                    .map(|r| {
                        let mut v = BitVec::zeros(m.ncols);
                        for &(c, _) in r {
                            v.flip(c as usize);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut bounds_z2 = Vec::new();
        let mut bounds_q = Vec::new();
        for d in 0..=dim {
            match field {
                Field::Z2 => {
                    let mut e = Echelon::new();
                    if d < dim {
                        for v in &bits[d + 1] {
                            e.insert(v.clone());
                        }
                    }
                    bounds_z2.push(e);
                }
                Field::Q => bounds_q.push(if d < dim { sparse::rank_and_torsion(&cob[d + 1]).0 } else { 0 }),
            }
        }
        let masks = if k.n_vertices() <= MASK_BITS {
            (0..=dim)
                .map(|d| k.faces(d).iter().map(|s| s.vertices().iter().fold(0u128, |m, &v| m | 1 << v)).collect())
                .collect()
        } else {
            Vec::new()
        };
        Ambient { k, field, dim, cob, bits, bounds_z2, bounds_q, masks }
    }

    fn faces_in(&self, d: usize, w: u128) -> Vec<usize> {
        self.masks[d].iter().enumerate().filter(|(_, &m)| m & !w == 0).map(|(i, _)| i).collect()
    }

    /// Whether `H_i(A) → H_i(K)` is injective, `A` given by its i- and (i+1)-faces (indices into `K`).
    fn injective(&self, i: usize, fi: &[usize], fi1: &[usize]) -> bool {
        match self.field {
            Field::Z2 => self.injective_z2(i, fi, fi1),
            Field::Q => self.injective_q(i, fi, fi1),
        }
    }

    fn injective_z2(&self, i: usize, fi: &[usize], fi1: &[usize]) -> bool {
        let width = self.k.faces(i).len();
        let embed = |idx: &[usize]| {
            let mut v = BitVec::zeros(width);
            for &j in idx {
                v.flip(fi[j]);
            }
            v
        };
        let cycles: Vec<BitVec> = if i == 0 {
            (0..fi.len()).map(|j| embed(&[j])).collect()
        } else {
            let vs: Vec<BitVec> = fi.iter().map(|&s| self.bits[i][s].clone()).collect();
            z2::kernel(&vs).iter().map(|c| embed(c)).collect()
        };
        let bounded_in_a = if i < self.dim { z2::rank(fi1.iter().map(|&t| self.bits[i + 1][t].clone())) } else { 0 };
        let betti_a = cycles.len() - bounded_in_a;
        let mut residues = Echelon::new();
        for mut c in cycles {
            self.bounds_z2[i].reduce(&mut c);
            residues.insert(c);
        }
        residues.rank() == betti_a
    }

    fn injective_q(&self, i: usize, fi: &[usize], fi1: &[usize]) -> bool {
        // ∂_i restricted to A, columns indexed locally
        let cycles: Vec<Vec<(usize, BigInt)>> = if i == 0 {
            fi.iter().map(|&s| vec![(s, BigInt::from(1))]).collect()
        } else {
            let mut m = SparseMatrix::new(self.k.faces(i - 1).len(), fi.len());
            for (j, &s) in fi.iter().enumerate() {
                for &(c, x) in &self.cob[i].rows[s] {
                    m.push(c as usize, j, x);
                }
            }
            m.finish();
            sparse::kernel_basis(&m)
                .into_iter()
                .map(|x| x.into_iter().enumerate().filter(|(_, v)| v != &BigInt::from(0)).map(|(j, v)| (fi[j], v)).collect())
                .collect()
        };
        let bounded_in_a = if i < self.dim {
            let mut m = SparseMatrix::new(fi1.len(), self.k.faces(i).len());
            for (r, &t) in fi1.iter().enumerate() {
                m.rows[r] = self.cob[i + 1].rows[t].clone();
            }
            sparse::rank_and_torsion(&m).0
        } else {
            0
        };
        let betti_a = cycles.len() - bounded_in_a;
        // rank [B_i(K); Z_i(A)] − rank B_i(K)
        let n_bounds = if i < self.dim { self.cob[i + 1].nrows } else { 0 };
        let width = self.k.faces(i).len();
        let stacked_rank = match small_rows(&cycles) {
            Some(rows) => {
                let mut m = SparseMatrix::new(n_bounds + rows.len(), width);
                for r in 0..n_bounds {
                    m.rows[r] = self.cob[i + 1].rows[r].clone();
                }
                for (r, row) in rows.into_iter().enumerate() {
                    m.rows[n_bounds + r] = row;
                }
                m.finish();
                sparse::rank_and_torsion(&m).0
            }
            None => {
                let mut m = super::IntegerMatrix::zeros(n_bounds + cycles.len(), width);
                for r in 0..n_bounds {
                    for &(c, x) in &self.cob[i + 1].rows[r] {
                        m.set(r, c as usize, BigInt::from(x));
                    }
                }
                for (r, row) in cycles.iter().enumerate() {
                    for (c, x) in row {
                        m.set(n_bounds + r, *c, x.clone());
                    }
                }
                m.smith_form().rank
            }
        };
        stacked_rank - self.bounds_q[i] == betti_a
    }

    /// First dimension in `dims` where the span of `w` fails injectivity.
    fn violation(&self, w: u128, dims: usize) -> Option<usize> {
        let top = dims.min(self.dim);
        let mut lower = self.faces_in(0, w);
        for i in 0..=top {
            let upper = if i < self.dim { self.faces_in(i + 1, w) } else { Vec::new() };
            if !self.injective(i, &lower, &upper) {
                return Some(i);
            }
            lower = upper;
        }
        None
    }
}

fn small_rows(rows: &[Vec<(usize, BigInt)>]) -> Option<Vec<Vec<(u32, i64)>>> {
    rows.iter().map(|r| r.iter().map(|(c, v)| v.to_i64().map(|x| (*c as u32, x))).collect()).collect()
}

/// Whether `H_dim(A) → H_dim(K)` is injective. `A` is matched to `K` by vertex labels.
pub fn induced_map_injective(
    a: &SimplicialComplex,
    k: &SimplicialComplex,
    dim: usize,
    field: Field,
) -> Result<bool, HomologyError> {
    for f in a.facets() {
        let labels = a.labels_of(f);
        if !k.simplex_from_labels(&labels).is_some_and(|t| k.contains_face(&t)) {
            return Err(HomologyError::NotASubcomplex(format!("{labels:?}")));
        }
    }
    if dim as isize > k.dim() {
        return Ok(true);
    }
    let to_k = |d: usize| -> Vec<usize> {
        let mut idx: Vec<usize> = a
            .faces(d)
            .iter()
            .map(|s| k.simplex_from_labels(&a.labels_of(s)).and_then(|t| k.face_index(&t)).expect("checked above"))
            .collect();
        idx.sort_unstable();
        idx
    };
    let amb = Ambient::new(k, field);
    let fi = to_k(dim);
    let fi1 = if dim < amb.dim { to_k(dim + 1) } else { Vec::new() };
    Ok(amb.injective(dim, &fi, &fi1))
}

/// Checks the induced maps of every spanned subcomplex in scope.
pub fn certify_tight(k: &SimplicialComplex, field: Field, mode: TightMode) -> Result<TightnessReport, HomologyError> {
    let n = k.n_vertices();
    if n > MASK_BITS {
        return Err(HomologyError::BudgetExceeded { n, bound: MASK_BITS });
    }
    let full: u128 = if n == MASK_BITS { u128::MAX } else { (1u128 << n) - 1 };
    let subsets: Vec<u128> = match &mode {
        TightMode::AllSubsets | TightMode::KTight(_) => {
            if n > ALL_SUBSETS_BOUND {
                return Err(HomologyError::BudgetExceeded { n, bound: ALL_SUBSETS_BOUND });
            }
            (1..=full).collect()
        }
        TightMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*samples).map(|_| rng.gen::<u128>() & full).collect()
        }
        TightMode::Halfspaces(pairs) => {
            if pairs.len() > ALL_SUBSETS_BOUND {
                return Err(HomologyError::BudgetExceeded { n: pairs.len(), bound: ALL_SUBSETS_BOUND });
            }
            let mut out = vec![0u128];
            for &(a, b) in pairs {
                out = out.into_iter().flat_map(|w| [w, w | 1 << a, w | 1 << b]).collect();
            }
            let complements: Vec<u128> = out.iter().map(|&w| full & !w).collect();
            let mut both: Vec<u128> = out.into_iter().chain(complements).filter(|&w| w != 0).collect();
            both.sort_unstable();
            both.dedup();
            both
        }
    };
    let amb = Ambient::new(k, field);
    let dims = match mode {
        TightMode::KTight(j) => j,
        _ => amb.dim,
    };
    let first = subsets.par_iter().map(|&w| amb.violation(w, dims).map(|d| (w, d))).find_first(|r| r.is_some()).flatten();
    let violation = first.map(|(w, dim)| Violation {
        subset: (0..n as VertexId).filter(|&v| w >> v & 1 == 1).map(|v| k.label(v)).collect(),
        dim,
    });
    Ok(TightnessReport { field, mode, subsets_checked: subsets.len() as u64, passed: violation.is_none(), violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complex_from_lists, parse_facet_list};
    use crate::polytope::simplex_boundary;

    #[test]
    fn simplex_boundaries_are_tight() {
        for d in 2..=5 {
            for field in [Field::Z2, Field::Q] {
                let r = certify_tight(&simplex_boundary(d), field, TightMode::AllSubsets).unwrap();
                assert!(r.passed, "∂Δ^{d} over {field:?}");
                assert_eq!(r.subsets_checked, (1 << (d + 1)) - 1);
            }
        }
    }

    #[test]
    fn disconnected_span_fails_in_degree_zero() {
        let k = complex_from_lists(7, &[&[0, 1, 2], &[3, 4, 5], &[2, 6], &[3, 6]]);
        let r = certify_tight(&k, Field::Z2, TightMode::AllSubsets).unwrap();
        assert!(!r.passed);
        assert_eq!(r.violation.as_ref().unwrap().dim, 0);
        let two = k.spanned_subcomplex(&[0, 1, 2, 3, 4, 5]);
        assert!(!induced_map_injective(&two, &k, 0, Field::Q).unwrap());
    }

    #[test]
    fn vertices_and_filled_cycles() {
        let k = simplex_boundary(3);
        let v = k.spanned_subcomplex(&[0]);
        assert!(induced_map_injective(&v, &k, 0, Field::Z2).unwrap());
        // the bare boundary of a filled triangle
        let cycle = complex_from_lists(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(!induced_map_injective(&cycle, &k, 1, Field::Q).unwrap());
        assert!(!induced_map_injective(&cycle, &k, 1, Field::Z2).unwrap());
        let foreign = complex_from_lists(5, &[&[0, 4]]);
        assert!(induced_map_injective(&foreign, &k, 1, Field::Z2).is_err());
    }

    #[test]
    fn budget_and_sampling() {
        let big = simplex_boundary(21);
        assert!(matches!(
            certify_tight(&big, Field::Z2, TightMode::AllSubsets),
            Err(HomologyError::BudgetExceeded { n: 22, .. })
        ));
        let r = certify_tight(&simplex_boundary(4), Field::Z2, TightMode::Sampled { samples: 50, seed: 7 }).unwrap();
        assert!(r.passed);
        assert_eq!(r.subsets_checked, 50);
    }

    #[test]
    fn missing_tetrahedron_is_a_nonzero_class() {
        let (k, _) = parse_facet_list(include_str!("../../fixtures/theorem2_facets.txt")).unwrap();
        let tet = k.simplex_from_labels(&[7, 10, 11, 16]).unwrap();
        assert!(!k.contains_face(&tet));
        let a = SimplicialComplex::with_labels(tet.subfaces(3).collect(), k.labels().to_vec());
        for field in [Field::Q, Field::Z2] {
            assert!(induced_map_injective(&a, &k, 2, field).unwrap());
        }
    }
}
