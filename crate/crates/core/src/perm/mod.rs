//! Permutation groups on vertex labels.

mod auto;
mod chain;
mod group;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::complex::VertexId;

pub use auto::{automorphism_group, automorphism_group_of_polytope, is_fixed_point_free};
pub use chain::StabChain;
pub use group::{OrbitComplex, PermGroup, DEFAULT_DEGREE_BOUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("cycle notation: {0}")]
    Parse(String),
    #[error("degree {degree} exceeds the configured bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("permutation is not an automorphism of the complex")]
    NotAnAutomorphism,
    #[error("permutation degree {0} does not match {1}")]
    DegreeMismatch(usize, usize),
}

/// A bijection of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<VertexId>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as VertexId).collect())
    }

    /// Checks bijectivity.
    pub fn from_images(images: Vec<VertexId>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[VertexId] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: VertexId) -> VertexId {
        self.0[x as usize]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as VertexId;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as VertexId == x)
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut r = Permutation::identity(self.degree());
        for _ in 0..k {
            r = r.then(self);
        }
        r
    }

    pub fn order(&self) -> usize {
        let mut lcm = 1usize;
        for c in self.cycles() {
            lcm = num_integer::lcm(lcm, c.len());
        }
        lcm
    }

    /// Smallest point moved, if any.
    pub fn first_moved(&self) -> Option<VertexId> {
        self.0.iter().enumerate().find(|(i, &x)| *i as VertexId != x).map(|(i, _)| i as VertexId)
    }

    pub fn fixed_points(&self) -> Vec<VertexId> {
        (0..self.0.len() as VertexId).filter(|&i| self.apply(i) == i).collect()
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s as VertexId];
            seen[s] = true;
            let mut x = self.0[s];
            while x as usize != s {
                seen[x as usize] = true;
                c.push(x);
                x = self.0[x as usize];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// Parses 1-based cycle notation such as `(1 12 16 18)(2 17 23 7)` on `degree` points.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
        let mut images: Vec<VertexId> = (0..degree as VertexId).collect();
        let mut touched = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| PermError::Parse(format!("expected '(' at {rest:?}")))?;
            let close = open.find(')').ok_or_else(|| PermError::Parse("unclosed cycle".into()))?;
            let body = &open[..close];
            let pts: Result<Vec<usize>, _> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect();
            let pts = pts.map_err(|e| PermError::Parse(e.to_string()))?;
            for &p in &pts {
                if p == 0 || p > degree {
                    return Err(PermError::Parse(format!("point {p} outside 1..={degree}")));
                }
                if touched[p - 1] {
                    return Err(PermError::Parse(format!("point {p} appears twice")));
                }
                touched[p - 1] = true;
            }
            for i in 0..pts.len() {
                images[pts[i] - 1] = (pts[(i + 1) % pts.len()] - 1) as VertexId;
            }
            rest = open[close + 1..].trim_start();
        }
        Ok(Permutation(images))
    }

    /// 1-based cycle notation; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let cs = self.cycles();
        if cs.is_empty() {
            return "()".into();
        }
        cs.iter()
            .map(|c| format!("({})", c.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")))
            .collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::parse_cycles("(1 12 16 18)(2 17 23 7)", 24).unwrap();
        assert_eq!(p.to_cycle_string(), "(1 12 16 18)(2 17 23 7)");
        assert_eq!(p.apply(0), 11);
        assert_eq!(p.order(), 4);
        assert_eq!(Permutation::identity(3).to_cycle_string(), "()");
        assert_eq!(Permutation::parse_cycles("  ( 1  2 ) (3 4)", 4).unwrap().to_cycle_string(), "(1 2)(3 4)");
    }

    #[test]
    fn printed_beta_is_rejected() {
        // vertex 2 occurs in two cycles
        let err = Permutation::parse_cycles("(1 6 2 5)(7 9 2 14)(8 10 11 13)(15 16)", 16).unwrap_err();
        assert!(matches!(err, PermError::Parse(_)));
    }

    proptest! {
        #[test]
        fn inverse_and_composition(v in Just((0u32..9).collect::<Vec<_>>()).prop_shuffle(),
                                   w in Just((0u32..9).collect::<Vec<_>>()).prop_shuffle()) {
            let p = Permutation::from_images(v).unwrap();
            let q = Permutation::from_images(w).unwrap();
            prop_assert!(p.then(&p.inverse()).is_identity());
            let pq = p.then(&q);
            for x in 0..9 {
                prop_assert_eq!(pq.apply(x), q.apply(p.apply(x)));
            }
            let s = p.to_cycle_string();
            prop_assert_eq!(Permutation::parse_cycles(&s, 9).unwrap(), p);
        }
    }
}
