use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense vertex index, `0..n` inside a complex.
pub type VertexId = u32;

/// A simplex given by its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Builds a simplex from vertices in any order. Returns `None` on a repeated vertex.
    pub fn new(mut vertices: Vec<VertexId>) -> Option<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Simplex(vertices))
    }

    /// Caller guarantees the vertices are strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<VertexId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension; the empty simplex has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<VertexId> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    /// Vertices of `self` not in `other`.
    pub fn minus(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn with_vertex(&self, v: VertexId) -> Simplex {
        let mut w = self.0.clone();
        match w.binary_search(&v) {
            Ok(_) => {}
            Err(pos) => w.insert(pos, v),
        }
        Simplex(w)
    }

    pub fn without_index(&self, i: usize) -> Simplex {
        let mut w = self.0.clone();
        w.remove(i);
        Simplex(w)
    }

    /// All faces with exactly `k` vertices, in lexicographic order.
    pub fn subfaces(&self, k: usize) -> impl Iterator<Item = Simplex> + '_ {
        use itertools::Itertools;
        self.0.iter().copied().combinations(k).map(Simplex)
    }

    /// Image under a vertex map, re-sorted.
    pub fn map(&self, images: &[VertexId]) -> Simplex {
        let mut w: Vec<VertexId> = self.0.iter().map(|&v| images[v as usize]).collect();
        w.sort_unstable();
        Simplex(w)
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ">")
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

pub(crate) fn is_sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_repeated_vertices() {
        assert!(Simplex::new(vec![1, 2, 1]).is_none());
        assert_eq!(Simplex::new(vec![3, 1, 2]).unwrap().vertices(), &[1, 2, 3]);
    }

    #[test]
    fn set_operations() {
        let a = Simplex::new(vec![0, 2, 4]).unwrap();
        let b = Simplex::new(vec![2, 3]).unwrap();
        assert_eq!(a.union(&b).vertices(), &[0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).vertices(), &[2]);
        assert_eq!(a.minus(&b).vertices(), &[0, 4]);
        assert!(!a.is_disjoint(&b));
        assert!(Simplex::new(vec![0, 4]).unwrap().is_face_of(&a));
        assert_eq!(a.subfaces(2).count(), 3);
        assert_eq!(Simplex::empty().dim(), -1);
    }
}
