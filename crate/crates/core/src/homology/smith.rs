//! Dense integer matrices and Smith normal form with transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntegerMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn smith_form(&self) -> SmithForm {
        smith(self, false)
    }

    /// Smith form together with unimodular `U`, `V` (and inverses) such that `U·A·V = S`.
    pub fn smith_form_with_transforms(&self) -> SmithForm {
        smith(self, true)
    }
}

/// `U·A·V = S` with `S` diagonal, `d₁ | d₂ | …` positive.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<Transforms>,
}

#[derive(Debug, Clone)]
pub struct Transforms {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct Work {
    a: IntegerMatrix,
    t: Option<Transforms>,
}

impl Work {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(x, y);
            t.u_inv.swap_cols(x, y);
        }
    }
    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(x, y);
            t.v_inv.swap_rows(x, y);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        if let Some(t) = &mut self.t {
            t.u.add_row(dst, src, k);
            t.u_inv.add_col(src, dst, &-k);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col(dst, src, k);
        if let Some(t) = &mut self.t {
            t.v.add_col(dst, src, k);
            t.v_inv.add_row(src, dst, &-k);
        }
    }
    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(t) = &mut self.t {
            t.u.negate_row(i);
            // the inverse of a row negation negates the matching column
            for r in 0..t.u_inv.rows {
                let v = -t.u_inv.get(r, i);
                t.u_inv.set(r, i, v);
            }
        }
    }
}

fn smith(m: &IntegerMatrix, with_transforms: bool) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let t = with_transforms.then(|| Transforms {
        u: IntegerMatrix::identity(r),
        u_inv: IntegerMatrix::identity(r),
        v: IntegerMatrix::identity(c),
        v_inv: IntegerMatrix::identity(c),
    });
    let mut w = Work { a: m.clone(), t };
    let mut factors = Vec::new();
    let mut s = 0;
    while s < r.min(c) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in s..r {
            for j in s..c {
                let v = w.a.get(i, j);
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < w.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(s, pi);
        w.swap_cols(s, pj);
        loop {
            let p = w.a.get(s, s).clone();
            let mut changed = false;
            for i in s + 1..r {
                let q = w.a.get(i, s).div_floor(&p);
                if !q.is_zero() {
                    w.add_row(i, s, &-q);
                }
                if !w.a.get(i, s).is_zero() {
                    changed = true;
                }
            }
            for j in s + 1..c {
                let q = w.a.get(s, j).div_floor(&p);
                if !q.is_zero() {
                    w.add_col(j, s, &-q);
                }
                if !w.a.get(s, j).is_zero() {
                    changed = true;
                }
            }
            if changed {
                // a remainder smaller than the pivot survived: move it to the pivot
                let mut best = (s, s);
                for i in s..r {
                    if !w.a.get(i, s).is_zero() && w.a.get(i, s).abs() < w.a.get(best.0, best.1).abs() {
                        best = (i, s);
                    }
                }
                for j in s..c {
                    if !w.a.get(s, j).is_zero() && w.a.get(s, j).abs() < w.a.get(best.0, best.1).abs() {
                        best = (s, j);
                    }
                }
                w.swap_rows(s, best.0);
                w.swap_cols(s, best.1);
                continue;
            }
            // divisibility of the trailing block
            let p = w.a.get(s, s).clone();
            let bad = (s + 1..r).find(|&i| (s + 1..c).any(|j| !w.a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(s, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(s, s).is_negative() {
            w.negate_row(s);
        }
        factors.push(w.a.get(s, s).clone());
        s += 1;
    }
    SmithForm { rank: factors.len(), invariant_factors: factors, transforms: w.t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntegerMatrix) {
        let sf = m.smith_form_with_transforms();
        let t = sf.transforms.as_ref().unwrap();
        let s = t.u.mul(m).mul(&t.v);
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                let want = if i == j && i < sf.rank { sf.invariant_factors[i].clone() } else { BigInt::zero() };
                assert_eq!(s.get(i, j), &want);
            }
        }
        assert_eq!(t.u.mul(&t.u_inv), IntegerMatrix::identity(m.rows()));
        assert_eq!(t.v.mul(&t.v_inv), IntegerMatrix::identity(m.cols()));
        for w in sf.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn known_smith_forms() {
        let m = IntegerMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let sf = m.smith_form();
        assert_eq!(sf.invariant_factors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        check(&m);
        // boundary of the projective plane's 2-chains gives Z/2 torsion
        let z = IntegerMatrix::from_rows(&[vec![2]]);
        assert_eq!(z.smith_form().torsion(), vec![BigInt::from(2)]);
        assert_eq!(IntegerMatrix::zeros(2, 3).smith_form().rank, 0);
    }

    proptest! {
        #[test]
        fn transforms_reproduce_diagonal(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 25)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            check(&IntegerMatrix::from_rows(&data));
        }
    }
}
