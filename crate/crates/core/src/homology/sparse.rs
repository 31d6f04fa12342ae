//! Sparse Gauss–Jordan elimination with unit pivots.
//!
//! Boundary and coboundary matrices of the complexes handled here are almost
//! entirely reducible with ±1 pivots; whatever survives is handed to the
//! dense Smith form. Elimination runs in `i64` with checked arithmetic and is
//! repeated over `BigInt` if anything overflows.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::smith::IntegerMatrix;

/// Row-major sparse integer matrix; each row sorted by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn push(&mut self, r: usize, c: usize, v: i64) {
        if v != 0 {
            self.rows[r].push((c as u32, v));
        }
    }

    pub fn finish(&mut self) {
        for r in &mut self.rows {
            r.sort_unstable_by_key(|e| e.0);
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::new(self.ncols, self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                t.rows[j as usize].push((i as u32, v));
            }
        }
        t
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// `self · other` is the zero matrix.
    pub fn product_is_zero(&self, other: &SparseMatrix) -> bool {
        assert_eq!(self.ncols, other.nrows);
        let mut acc: Vec<i128> = vec![0; other.ncols];
        for row in &self.rows {
            let mut touched = Vec::new();
            for &(k, a) in row {
                for &(j, b) in &other.rows[k as usize] {
                    acc[j as usize] += a as i128 * b as i128;
                    touched.push(j);
                }
            }
            for j in touched {
                if acc[j as usize] != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.nrows, self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m.set(i, j as usize, BigInt::from(v));
            }
        }
        m
    }
}

pub(crate) trait Entry: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - f * b`, `None` on overflow.
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.is_one() || (-self).is_one()
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        Some(a - f * b)
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Outcome of Gauss–Jordan elimination with unit pivots.
#[derive(Debug, Clone)]
pub(crate) struct Reduced {
    pub ncols: usize,
    /// `(pivot column, pivot sign, reduced row)`; each row has the pivot
    /// entry and otherwise only non-pivot columns.
    pub pivots: Vec<(usize, i64, Vec<(u32, BigInt)>)>,
    pub is_pivot: Vec<bool>,
    /// Remaining rows, supported on non-pivot columns, with no unit entries.
    pub residual: Vec<Vec<(u32, BigInt)>>,
}

impl Reduced {
    pub fn non_pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot[c]).collect()
    }

    /// Residual rows as a dense matrix over the non-pivot columns.
    pub fn residual_dense(&self) -> (IntegerMatrix, Vec<usize>) {
        let cols = self.non_pivot_columns();
        let mut pos = vec![usize::MAX; self.ncols];
        for (i, &c) in cols.iter().enumerate() {
            pos[c] = i;
        }
        let mut m = IntegerMatrix::zeros(self.residual.len(), cols.len());
        for (i, row) in self.residual.iter().enumerate() {
            for (c, v) in row {
                m.set(i, pos[*c as usize], v.clone());
            }
        }
        (m, cols)
    }
}

/// Reduces the rows of `m`; row operations only, so the row space is preserved.
pub(crate) fn reduce(m: &SparseMatrix) -> Reduced {
    match reduce_with::<i64>(m) {
        Some(r) => r,
        None => reduce_with::<BigInt>(m).expect("BigInt arithmetic cannot overflow"),
    }
}

fn reduce_with<T: Entry>(m: &SparseMatrix) -> Option<Reduced> {
    let mut rows: Vec<Option<Vec<(u32, T)>>> = m
        .rows
        .iter()
        .map(|r| {
            let v: Vec<(u32, T)> = r.iter().map(|&(c, x)| (c, T::from_i64(x))).collect();
            (!v.is_empty()).then_some(v)
        })
        .collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.ncols];
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for (c, _) in r {
                col_rows[*c as usize].push(i);
            }
        }
    }
    let mut is_pivot = vec![false; m.ncols];
    let mut pivot_rows: Vec<(usize, usize, T)> = Vec::new(); // (row, col, sign)
    let mut done = vec![false; m.nrows];
    loop {
        // Markowitz-style choice among unit entries of active rows
        let mut best: Option<(usize, usize, usize)> = None; // (cost, row, col)
        for (i, r) in rows.iter().enumerate() {
            if done[i] {
                continue;
            }
            let Some(r) = r else { continue };
            for (c, v) in r {
                if v.is_unit() {
                    let cost = (r.len() - 1) * col_rows[*c as usize].len();
                    if best.map_or(true, |b| cost < b.0) {
                        best = Some((cost, i, *c as usize));
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let prow = rows[pr].clone().expect("active");
        let psign = prow.iter().find(|e| e.0 as usize == pc).expect("pivot").1.clone();
        let targets: Vec<usize> = std::mem::take(&mut col_rows[pc]);
        let mut keep = Vec::new();
        for i in targets {
            if i == pr {
                keep.push(i);
                continue;
            }
            let Some(row) = &rows[i] else { continue };
            let Some(a) = row.iter().find(|e| e.0 as usize == pc).map(|e| e.1.clone()) else { continue };
            // row -= (a / psign) * prow, and 1/psign = psign
            let f = T::mul(&a, &psign)?;
            let (new_row, added) = axpy(row, &f, &prow)?;
            for c in added {
                col_rows[c as usize].push(i);
            }
            rows[i] = (!new_row.is_empty()).then_some(new_row);
        }
        col_rows[pc] = keep;
        is_pivot[pc] = true;
        done[pr] = true;
        pivot_rows.push((pr, pc, psign));
    }
    let pivots = pivot_rows
        .into_iter()
        .map(|(r, c, s)| {
            let row = rows[r].take().expect("pivot row").into_iter().map(|(c, v)| (c, v.to_big())).collect();
            (c, s.to_big().to_i64().expect("unit"), row)
        })
        .collect();
    let residual = rows
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !done[*i])
        .filter_map(|(_, r)| r)
        .map(|r| r.into_iter().map(|(c, v)| (c, v.to_big())).collect())
        .collect();
    Some(Reduced { ncols: m.ncols, pivots, is_pivot, residual })
}

/// `row - f * p` for sorted sparse rows; also returns the newly created columns.
fn axpy<T: Entry>(row: &[(u32, T)], f: &T, p: &[(u32, T)]) -> Option<(Vec<(u32, T)>, Vec<u32>)> {
    let mut out = Vec::with_capacity(row.len() + p.len());
    let mut added = Vec::new();
    let (mut i, mut j) = (0, 0);
    let zero = T::from_i64(0);
    while i < row.len() || j < p.len() {
        let ci = row.get(i).map_or(u32::MAX, |e| e.0);
        let cj = p.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            let v = T::sub_mul(&zero, f, &p[j].1)?;
            if !v.is_zero() {
                out.push((cj, v));
                added.push(cj);
            }
            j += 1;
        } else {
            let v = T::sub_mul(&row[i].1, f, &p[j].1)?;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some((out, added))
}

/// Rank and invariant factors (all of them, units included) of `m`.
pub(crate) fn rank_and_torsion(m: &SparseMatrix) -> (usize, Vec<BigInt>) {
    let red = reduce(m);
    let unit_rank = red.pivots.len();
    if red.residual.is_empty() {
        return (unit_rank, Vec::new());
    }
    let (dense, _) = red.residual_dense();
    let sf = dense.smith_form();
    (unit_rank + sf.rank, sf.torsion())
}

/// The kernel lattice `{x ∈ Zⁿ : m·x = 0}` with a basis and a coordinate map.
#[derive(Debug, Clone)]
pub(crate) struct KernelLattice {
    pub basis: Vec<Vec<BigInt>>,
    free_cols: Vec<usize>,
    /// `V⁻¹` of the residual Smith form and its rank, when there was a residual.
    residual: Option<(IntegerMatrix, usize)>,
}

impl KernelLattice {
    /// Coordinates of a kernel vector in `basis`.
    pub fn coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y: Vec<BigInt> = self.free_cols.iter().map(|&c| x[c].clone()).collect();
        match &self.residual {
            None => y,
            Some((vinv, rank)) => (*rank..y.len())
                .map(|i| vinv.row(i).iter().zip(&y).map(|(a, b)| a * b).sum())
                .collect(),
        }
    }

    /// Sparse variant of [`coordinates`](Self::coordinates).
    pub fn coordinates_sparse(&self, x: &[(usize, BigInt)], n: usize) -> Vec<BigInt> {
        let mut dense = vec![BigInt::zero(); n];
        for (c, v) in x {
            dense[*c] += v;
        }
        self.coordinates(&dense)
    }
}

pub(crate) fn kernel_lattice(m: &SparseMatrix) -> KernelLattice {
    let red = reduce(m);
    let (dense, free_cols) = red.residual_dense();
    let (free_basis, residual): (Vec<Vec<BigInt>>, _) = if dense.rows() == 0 {
        let basis = (0..free_cols.len())
            .map(|i| {
                let mut e = vec![BigInt::zero(); free_cols.len()];
                e[i] = BigInt::one();
                e
            })
            .collect();
        (basis, None)
    } else {
        let sf = dense.smith_form_with_transforms();
        let t = sf.transforms.expect("requested");
        ((sf.rank..free_cols.len()).map(|j| t.v.column(j)).collect(), Some((t.v_inv, sf.rank)))
    };
    let basis = free_basis
        .into_iter()
        .map(|y| {
            let mut x = vec![BigInt::zero(); m.ncols];
            for (i, &c) in free_cols.iter().enumerate() {
                x[c] = y[i].clone();
            }
            for (pc, sign, row) in &red.pivots {
                // sign * x_pc + Σ a_j x_j = 0
                let mut s = BigInt::zero();
                for (c, a) in row {
                    if *c as usize != *pc {
                        s += a * &x[*c as usize];
                    }
                }
                x[*pc] = -s * sign;
            }
            x
        })
        .collect();
    KernelLattice { basis, free_cols, residual }
}

/// A lattice basis of `{x ∈ Zⁿ : m·x = 0}`.
pub(crate) fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<BigInt>> {
    kernel_lattice(m).basis
}

/// [`quotient_free_basis`] for generators with arbitrary-precision entries.
pub(crate) fn quotient_free_basis_big(ncols: usize, rows: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let small: Option<Vec<Vec<i64>>> = rows.iter().map(|r| r.iter().map(|v| v.to_i64()).collect()).collect();
    if let Some(small) = small {
        let mut g = SparseMatrix::new(rows.len(), ncols);
        for (i, r) in small.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                g.push(i, j, v);
            }
        }
        return quotient_free_basis(&g);
    }
    let dense = IntegerMatrix::from_rows(rows);
    let sf = dense.smith_form_with_transforms();
    let vinv = &sf.transforms.as_ref().expect("requested").v_inv;
    ((sf.rank..ncols).map(|i| vinv.row(i).to_vec()).collect(), sf.torsion())
}

/// Given generators (the rows of `g`) of a sublattice `L ⊆ Zⁿ`, returns
/// vectors whose classes form a basis of the free part of `Zⁿ / L`, and the
/// torsion coefficients of the quotient.
pub(crate) fn quotient_free_basis(g: &SparseMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let red = reduce(g);
    let (dense, free_cols) = red.residual_dense();
    let n = g.ncols;
    let embed = |y: &[BigInt]| {
        let mut x = vec![BigInt::zero(); n];
        for (i, &c) in free_cols.iter().enumerate() {
            x[c] = y[i].clone();
        }
        x
    };
    if dense.rows() == 0 || dense.is_zero() {
        let basis = (0..free_cols.len())
            .map(|i| {
                let mut e = vec![BigInt::zero(); free_cols.len()];
                e[i] = BigInt::one();
                embed(&e)
            })
            .collect();
        return (basis, Vec::new());
    }
    // rowspan(R) = rowspan(S · V⁻¹): the rows of V⁻¹ past the rank span a complement
    let sf = dense.smith_form_with_transforms();
    let vinv = &sf.transforms.as_ref().expect("requested").v_inv;
    let basis = (sf.rank..free_cols.len()).map(|i| embed(vinv.row(i))).collect();
    (basis, sf.torsion())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(rows: &[&[i64]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.push(i, j, v);
            }
        }
        m.finish();
        m
    }

    #[test]
    fn rank_with_torsion_residual() {
        let m = sparse(&[&[1, 1, 0], &[0, 2, 2], &[0, 2, -2]]);
        let (r, t) = rank_and_torsion(&m);
        assert_eq!(r, 3);
        assert_eq!(t, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = sparse(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[2, 0, 0, -2]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let dense = m.to_dense();
        for x in &k {
            for i in 0..dense.rows() {
                let s: BigInt = (0..4).map(|j| dense.get(i, j) * &x[j]).sum();
                assert!(Zero::is_zero(&s));
            }
        }
    }

    #[test]
    fn quotient_of_cyclic_lattice() {
        // Z² / <(2, 0)> = Z/2 ⊕ Z
        let g = sparse(&[&[2, 0]]);
        let (basis, torsion) = quotient_free_basis(&g);
        assert_eq!(torsion, vec![BigInt::from(2)]);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0][0], BigInt::zero());
    }
}
