//! Fundamental classes and the cup-product form on H² of a closed oriented
//! 4-manifold.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::sparse::{kernel_lattice, quotient_free_basis_big};
use super::{coboundaries, serialize_big, Big, HomologyError, IntegerMatrix};
use crate::complex::{coherent_orientation, Simplex, SimplicialComplex};

/// A signed facet chain with vanishing boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalClass {
    pub facets: Vec<Simplex>,
    pub signs: Vec<i8>,
}

/// Coherent orientation propagated from the least facet, with `∂[K] = 0` checked.
pub fn fundamental_class(k: &SimplicialComplex) -> Result<FundamentalClass, HomologyError> {
    if k.dim() < 1 || !k.is_pure() {
        return Err(HomologyError::NotClosed);
    }
    let mut ridges: HashMap<Simplex, u32> = HashMap::new();
    for f in k.facets() {
        for i in 0..f.len() {
            *ridges.entry(f.without_index(i)).or_insert(0) += 1;
        }
    }
    if ridges.values().any(|&c| c > 2) {
        return Err(HomologyError::NotClosed);
    }
    let signs = coherent_orientation(k).ok_or(HomologyError::NotOrientable)?;
    if ridges.values().any(|&c| c != 2) || !k.is_strongly_connected() {
        return Err(HomologyError::NotClosed);
    }
    let fc = FundamentalClass { facets: k.facets().to_vec(), signs };
    assert!(fc.boundary().is_empty(), "a coherent orientation is a cycle");
    Ok(fc)
}

impl FundamentalClass {
    /// Nonzero coefficients of the boundary chain.
    pub fn boundary(&self) -> HashMap<Simplex, i64> {
        let mut acc: HashMap<Simplex, i64> = HashMap::new();
        for (f, &s) in self.facets.iter().zip(&self.signs) {
            for i in 0..f.len() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                *acc.entry(f.without_index(i)).or_insert(0) += sign * s as i64;
            }
        }
        acc.retain(|_, v| *v != 0);
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionForm {
    pub rank: usize,
    #[serde(serialize_with = "serialize_matrix")]
    pub gram: IntegerMatrix,
    pub parity: Parity,
    pub signature: i64,
    #[serde(serialize_with = "serialize_big")]
    pub determinant: BigInt,
    /// Torsion of H²; excluded from the form.
    #[serde(serialize_with = "serialize_list")]
    pub h2_torsion: Vec<BigInt>,
    /// Integral cocycle representatives of the basis, as values on the sorted 2-faces.
    #[serde(skip)]
    pub cocycles: Vec<Vec<BigInt>>,
}

fn serialize_matrix<S: Serializer>(m: &IntegerMatrix, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for i in 0..m.rows() {
        let row: Vec<Big> = m.row(i).iter().map(Big).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

fn serialize_list<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Big(x))?;
    }
    seq.end()
}

/// The cup-product pairing on the free part of H², evaluated on the
/// fundamental class. `links_certified` must attest that every vertex link
/// has been recognised as a 3-sphere.
pub fn intersection_form(k: &SimplicialComplex, links_certified: bool) -> Result<IntersectionForm, HomologyError> {
    if !links_certified {
        return Err(HomologyError::NotAManifoldCertificate);
    }
    if k.dim() != 4 {
        return Err(HomologyError::WrongDimension { expected: 4, found: k.dim() });
    }
    let fc = fundamental_class(k)?;
    let cob = coboundaries(k);
    let n2 = k.faces(2).len();
    // Z² = ker δ on 2-cochains
    let z = kernel_lattice(&cob[2]);
    // B² = δ(C¹): the image of each edge's dual cochain, in Z² coordinates
    let by_edge = cob[1].transpose();
    let gens: Vec<Vec<BigInt>> = by_edge
        .rows
        .iter()
        .map(|r| {
            let x: Vec<(usize, BigInt)> = r.iter().map(|&(c, v)| (c as usize, BigInt::from(v))).collect();
            z.coordinates_sparse(&x, n2)
        })
        .collect();
    let (free, h2_torsion) = quotient_free_basis_big(z.basis.len(), &gens);
    let cocycles: Vec<Vec<BigInt>> = free
        .iter()
        .map(|y| {
            let mut phi = vec![BigInt::zero(); n2];
            for (c, b) in y.iter().zip(&z.basis) {
                if !c.is_zero() {
                    for (p, v) in phi.iter_mut().zip(b) {
                        *p += c * v;
                    }
                }
            }
            phi
        })
        .collect();
    let r = cocycles.len();
    // front 2-face and back 2-face of each facet
    let split: Vec<(usize, usize, i64)> = fc
        .facets
        .iter()
        .zip(&fc.signs)
        .map(|(f, &s)| {
            let v = f.vertices();
            let front = k.face_index(&Simplex::new(v[0..3].to_vec()).expect("distinct")).expect("face");
            let back = k.face_index(&Simplex::new(v[2..5].to_vec()).expect("distinct")).expect("face");
            (front, back, s as i64)
        })
        .collect();
    let mut gram = IntegerMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let mut acc = BigInt::zero();
            for &(a, b, s) in &split {
                let (x, y) = (&cocycles[i][a], &cocycles[j][b]);
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y * s;
                }
            }
            gram.set(i, j, acc);
        }
    }
    if gram != gram.transpose() {
        return Err(HomologyError::Asymmetric);
    }
    let determinant = determinant(&gram);
    if r > 0 && !determinant.abs().is_one() {
        return Err(HomologyError::NotUnimodular(determinant));
    }
    let parity = if (0..r).all(|i| gram.get(i, i).is_even()) { Parity::Even } else { Parity::Odd };
    let signature = signature(&gram);
    Ok(IntersectionForm { rank: r, gram, parity, signature, determinant, h2_torsion, cocycles })
}

/// Exact determinant by fraction-free elimination.
pub(crate) fn determinant(m: &IntegerMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Signature by congruence diagonalization over ℚ.
pub(crate) fn signature(m: &IntegerMatrix) -> i64 {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut sig = 0i64;
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // e_i ↦ e_i + e_j makes the diagonal entry 2·a_ij
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
            } else {
                continue;
            }
        }
        let p = a[i][i].clone();
        sig += if p.is_positive() { 1 } else { -1 };
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &p;
            for c in i..n {
                let v = &f * &a[i][c];
                a[j][c] -= v;
            }
            for row in a.iter_mut().skip(i) {
                let v = &f * &row[i];
                row[j] -= v;
            }
        }
    }
    sig
}

/// The boundary of a simplex as a chain on its codimension-one faces.
pub fn boundary_chain(s: &Simplex) -> Vec<(Simplex, i64)> {
    (0..s.len()).map(|i| (s.without_index(i), if i % 2 == 0 { 1 } else { -1 })).collect()
}

/// Intersection numbers of integral 2-cycles: `E·M⁻¹·Eᵀ`, where `E` evaluates
/// the basis cocycles on the cycles and `M` is the Gram matrix.
pub fn cycle_pairing(
    k: &SimplicialComplex,
    form: &IntersectionForm,
    cycles: &[Vec<(Simplex, i64)>],
) -> Result<Vec<Vec<BigInt>>, HomologyError> {
    let r = form.rank;
    let e: Vec<Vec<BigRational>> = cycles
        .iter()
        .map(|z| {
            (0..r)
                .map(|i| {
                    let mut acc = BigInt::zero();
                    for (s, c) in z {
                        let idx = k
                            .face_index(s)
                            .ok_or_else(|| HomologyError::NotASubcomplex(format!("{:?}", k.labels_of(s))))?;
                        acc += &form.cocycles[i][idx] * c;
                    }
                    Ok(BigRational::from_integer(acc))
                })
                .collect::<Result<Vec<_>, HomologyError>>()
        })
        .collect::<Result<_, _>>()?;
    let inv = inverse(&form.gram);
    let out = e
        .iter()
        .map(|ea| {
            e.iter()
                .map(|eb| {
                    let mut acc = BigRational::zero();
                    for i in 0..r {
                        for j in 0..r {
                            acc += &ea[i] * &inv[i][j] * &eb[j];
                        }
                    }
                    assert!(acc.is_integer(), "a unimodular form pairs integral classes integrally");
                    acc.to_integer()
                })
                .collect()
        })
        .collect();
    Ok(out)
}

fn inverse(m: &IntegerMatrix) -> Vec<Vec<BigRational>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("invertible");
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let v = &f * &a[c][j];
                    a[r][j] -= v;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complex_from_lists, parse_facet_list, product};
    use crate::polytope::simplex_boundary;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orbit_manifold() -> SimplicialComplex {
        parse_facet_list(include_str!("../../fixtures/theorem2_facets.txt")).unwrap().0
    }

    fn s2xs2() -> SimplicialComplex {
        product(&simplex_boundary(3), &simplex_boundary(3))
    }

    #[test]
    fn sphere_orientation_alternates() {
        let k = simplex_boundary(5);
        let fc = fundamental_class(&k).unwrap();
        // facet i omits vertex 5 − i; its sign is (−1)^i relative to the first
        let want: Vec<i8> = (0..6).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        assert_eq!(fc.signs, want);
    }

    #[test]
    fn non_orientable_and_open() {
        let mobius = complex_from_lists(5, &[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[0, 3, 4], &[0, 1, 4]]);
        assert_eq!(fundamental_class(&mobius), Err(HomologyError::NotOrientable));
        let disc = complex_from_lists(3, &[&[0, 1, 2]]);
        assert_eq!(fundamental_class(&disc), Err(HomologyError::NotClosed));
    }

    #[test]
    fn orbit_manifold_fundamental_class() {
        let fc = fundamental_class(&orbit_manifold()).unwrap();
        assert_eq!(fc.signs.len(), 224);
        assert!(fc.boundary().is_empty());
    }

    #[test]
    fn orbit_manifold_form_is_even_with_zero_signature() {
        let k = orbit_manifold();
        let q = intersection_form(&k, true).unwrap();
        assert_eq!((q.rank, q.parity, q.signature), (14, Parity::Even, 0));
        assert!(q.determinant.abs().is_one());
        assert!(q.h2_torsion.is_empty());
        assert_eq!(intersection_form(&k, false).unwrap_err(), HomologyError::NotAManifoldCertificate);
    }

    #[test]
    fn empty_tetrahedra_are_linked_once() {
        let k = orbit_manifold();
        let q = intersection_form(&k, true).unwrap();
        let cyc = |l: [u32; 4]| boundary_chain(&k.simplex_from_labels(&l).unwrap());
        let p = cycle_pairing(&k, &q, &[cyc([7, 10, 11, 16]), cyc([8, 12, 13, 16])]).unwrap();
        assert!(p[0][1].abs().is_one(), "{p:?}");
        assert_eq!(p[0][1], p[1][0]);
    }

    #[test]
    fn product_of_spheres() {
        let k = s2xs2();
        assert_eq!(k.f_vector()[4], 96);
        let q = intersection_form(&k, true).unwrap();
        assert_eq!((q.rank, q.parity, q.signature), (2, Parity::Even, 0));
    }

    #[test]
    fn invariants_do_not_depend_on_vertex_order() {
        let k = orbit_manifold();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let mut images: Vec<u32> = (0..k.n_vertices() as u32).collect();
            images.shuffle(&mut rng);
            let q = intersection_form(&k.permuted(&images), true).unwrap();
            assert_eq!((q.rank, q.parity, q.signature), (14, Parity::Even, 0));
        }
    }

    #[test]
    fn known_signatures_and_determinants() {
        let h = IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(signature(&h), 0);
        assert_eq!(determinant(&h), BigInt::from(-1));
        let d = IntegerMatrix::from_rows(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]);
        assert_eq!(signature(&d), 1);
        let e = IntegerMatrix::from_rows(&[vec![2, 1], vec![1, 2]]);
        assert_eq!((signature(&e), determinant(&e)), (2, BigInt::from(3)));
    }

    #[test]
    fn parity_holds_on_random_combinations() {
        // Q(x+y, x+y) ≡ Q(x,x) + Q(y,y) mod 2, so an even basis gives an even form
        let q = intersection_form(&orbit_manifold(), true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x: Vec<BigInt> = (0..q.rank).map(|_| BigInt::from(rng.gen_range(-6i64..7))).collect();
            let mut qxx = BigInt::zero();
            for i in 0..q.rank {
                for j in 0..q.rank {
                    qxx += &x[i] * q.gram.get(i, j) * &x[j];
                }
            }
            assert!(qxx.is_even());
        }
    }
}
