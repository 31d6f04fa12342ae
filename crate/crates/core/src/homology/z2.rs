//! Linear algebra over ℤ₂ on packed bit rows.

/// A vector over ℤ₂ packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)] }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor(&mut self, o: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn lowest(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    i * 64 + b
                })
            })
        })
    }
}

/// Fully reduced row echelon basis, grown incrementally.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(usize, BitVec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` modulo the span.
    pub fn reduce(&self, v: &mut BitVec) {
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.xor(r);
            }
        }
    }

    /// Adds `v` to the span; `false` if it was already contained.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.lowest() else { return false };
        for (_, r) in &mut self.rows {
            if r.get(p) {
                r.xor(&v);
            }
        }
        self.rows.push((p, v));
        true
    }
}

pub fn rank(rows: impl IntoIterator<Item = BitVec>) -> usize {
    let mut e = Echelon::new();
    rows.into_iter().filter(|r| e.insert(r.clone())).count()
}

/// Basis of the relations `Σ xᵢ vᵢ = 0`, each returned as the set of indices `i` with `xᵢ = 1`.
pub fn kernel(vectors: &[BitVec]) -> Vec<Vec<usize>> {
    // rows carry their combination alongside
    let mut rows: Vec<(usize, BitVec, BitVec)> = Vec::new();
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut v = v.clone();
        let mut comb = BitVec::zeros(vectors.len());
        comb.flip(i);
        for (p, r, c) in &rows {
            if v.get(*p) {
                v.xor(r);
                comb.xor(c);
            }
        }
        match v.lowest() {
            None => out.push(comb.ones().collect()),
            Some(p) => {
                for (_, r, c) in &mut rows {
                    if r.get(p) {
                        r.xor(&v);
                        c.xor(&comb);
                    }
                }
                rows.push((p, v, comb));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[usize], len: usize) -> BitVec {
        let mut v = BitVec::zeros(len);
        for &b in bits {
            v.flip(b);
        }
        v
    }

    #[test]
    fn rank_and_kernel_of_triangle_boundary() {
        // edges 01, 02, 12 as vectors over three vertices
        let e = [bv(&[0, 1], 3), bv(&[0, 2], 3), bv(&[1, 2], 3)];
        assert_eq!(rank(e.iter().cloned()), 2);
        assert_eq!(kernel(&e), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn wide_vectors() {
        let a = bv(&[3, 130], 200);
        let b = bv(&[130, 199], 200);
        let c = bv(&[3, 199], 200);
        assert_eq!(rank([a.clone(), b.clone(), c]), 2);
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![3, 130]);
        let mut e = Echelon::new();
        assert!(e.insert(a));
        let mut v = bv(&[3, 130], 200);
        e.reduce(&mut v);
        assert!(v.is_zero());
        assert!(!e.insert(bv(&[], 200)));
        assert!(e.insert(b));
    }
}
