//! Backtracking search for structure-preserving vertex bijections.
//!
//! Both isomorphism testing and automorphism groups run on a [`Hypergraph`]:
//! a vertex set with a family of blocks (facets, or polytope edges and
//! 2-faces) plus a graph whose distance matrix prunes candidates.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use super::{SimplicialComplex, VertexId};

const FAR: u16 = u16::MAX;

pub(crate) struct Hypergraph {
    pub n: usize,
    pub blocks: Vec<Vec<VertexId>>,
    block_set: HashSet<Vec<VertexId>>,
    pub adj: Vec<Vec<VertexId>>,
    dist: Vec<u16>,
    pub color: Vec<u64>,
}

impl Hypergraph {
    pub fn new(n: usize, mut blocks: Vec<Vec<VertexId>>, adj: Vec<Vec<VertexId>>, color: Vec<u64>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        let block_set = blocks.iter().cloned().collect();
        let dist = all_pairs_distances(&adj);
        Hypergraph { n, blocks, block_set, adj, dist, color }
    }

    /// Blocks are facets; the pruning graph is the 1-skeleton; vertex colors
    /// combine degree, star size and the link's f-vector and component count.
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        let adj = k.edge_graph();
        let mut color = vec![0u64; k.n_vertices()];
        let mut stars = vec![Vec::new(); k.n_vertices()];
        for f in k.facets() {
            for &v in f.vertices() {
                stars[v as usize].push(f.minus(&super::Simplex::from_sorted(vec![v])));
            }
        }
        for v in 0..k.n_vertices() {
            let link = SimplicialComplex::with_labels(stars[v].clone(), (0..k.n_vertices() as u32).collect());
            let mut h = DefaultHasher::new();
            adj[v].len().hash(&mut h);
            stars[v].len().hash(&mut h);
            link.f_vector().hash(&mut h);
            link.connected_components().hash(&mut h);
            color[v] = h.finish();
        }
        let blocks = k.facets().iter().map(|f| f.vertices().to_vec()).collect();
        Hypergraph::new(k.n_vertices(), blocks, adj, color)
    }

    pub fn dist(&self, a: VertexId, b: VertexId) -> u16 {
        self.dist[a as usize * self.n + b as usize]
    }

    pub fn has_block(&self, b: &[VertexId]) -> bool {
        self.block_set.contains(b)
    }

    /// Sorted color multiset plus block-size profile.
    pub fn fingerprint(&self) -> (Vec<u64>, Vec<usize>) {
        let mut c = self.color.clone();
        c.sort_unstable();
        let mut s: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        s.sort_unstable();
        (c, s)
    }

    /// Whether `images` maps the block family onto itself.
    pub fn preserves(&self, images: &[VertexId]) -> bool {
        self.blocks.iter().all(|b| {
            let mut m: Vec<VertexId> = b.iter().map(|&v| images[v as usize]).collect();
            m.sort_unstable();
            self.has_block(&m)
        })
    }
}

fn all_pairs_distances(adj: &[Vec<VertexId>]) -> Vec<u16> {
    let n = adj.len();
    let mut dist = vec![FAR; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &w in &adj[u] {
                if row[w as usize] == FAR {
                    row[w as usize] = du + 1;
                    queue.push_back(w as usize);
                }
            }
        }
    }
    dist
}

/// Finds a bijection `a -> b` extending a prescribed partial map and mapping
/// blocks onto blocks.
pub(crate) struct MatchSearch<'g> {
    a: &'g Hypergraph,
    b: &'g Hypergraph,
    pub nodes: u64,
}

impl<'g> MatchSearch<'g> {
    pub fn new(a: &'g Hypergraph, b: &'g Hypergraph) -> Self {
        MatchSearch { a, b, nodes: 0 }
    }

    pub fn find(&mut self, prefix: &[(VertexId, VertexId)]) -> Option<Vec<VertexId>> {
        let (a, b) = (self.a, self.b);
        if a.n != b.n || a.blocks.len() != b.blocks.len() {
            return None;
        }
        let n = a.n;
        if n == 0 {
            return Some(Vec::new());
        }
        // Visit order: prefix first, then breadth-first over the pruning graph.
        let mut order: Vec<VertexId> = Vec::with_capacity(n);
        let mut parent: Vec<Option<VertexId>> = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &(x, _) in prefix {
            if !seen[x as usize] {
                seen[x as usize] = true;
                order.push(x);
                parent.push(None);
                queue.push_back(x);
            }
        }
        let mut next_root = 0usize;
        while order.len() < n {
            if queue.is_empty() {
                while seen[next_root] {
                    next_root += 1;
                }
                seen[next_root] = true;
                order.push(next_root as VertexId);
                parent.push(None);
                queue.push_back(next_root as VertexId);
            }
            while let Some(u) = queue.pop_front() {
                for &w in &a.adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        order.push(w);
                        parent.push(Some(u));
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut pos_of = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos_of[v as usize] = i;
        }
        let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (bi, blk) in a.blocks.iter().enumerate() {
            let last = blk.iter().map(|&v| pos_of[v as usize]).max().unwrap_or(0);
            closing[last].push(bi);
        }
        let mut fixed: Vec<Option<VertexId>> = vec![None; n];
        for &(x, y) in prefix {
            if let Some(prev) = fixed[x as usize] {
                if prev != y {
                    return None;
                }
            }
            fixed[x as usize] = Some(y);
        }
        let mut st = State {
            order: &order,
            parent: &parent,
            closing: &closing,
            fixed: &fixed,
            map: vec![FAR as VertexId; n],
            used: vec![false; n],
            scratch: Vec::new(),
        };
        if self.dfs(&mut st, 0) {
            Some(st.map)
        } else {
            None
        }
    }

    fn dfs(&mut self, st: &mut State<'_>, pos: usize) -> bool {
        let (a, b) = (self.a, self.b);
        if pos == st.order.len() {
            return true;
        }
        self.nodes += 1;
        let x = st.order[pos];
        let candidates: Vec<VertexId> = if let Some(y) = st.fixed[x as usize] {
            vec![y]
        } else if let Some(p) = st.parent[pos] {
            b.adj[st.map[p as usize] as usize].clone()
        } else {
            (0..b.n as VertexId).collect()
        };
        'cand: for y in candidates {
            if st.used[y as usize] || a.color[x as usize] != b.color[y as usize] {
                continue;
            }
            for &q in &st.order[..pos] {
                if a.dist(x, q) != b.dist(y, st.map[q as usize]) {
                    continue 'cand;
                }
            }
            st.map[x as usize] = y;
            for &bi in &st.closing[pos] {
                st.scratch.clear();
                st.scratch.extend(a.blocks[bi].iter().map(|&v| st.map[v as usize]));
                st.scratch.sort_unstable();
                if !b.has_block(&st.scratch) {
                    continue 'cand;
                }
            }
            st.used[y as usize] = true;
            if self.dfs(st, pos + 1) {
                return true;
            }
            st.used[y as usize] = false;
        }
        st.map[x as usize] = FAR as VertexId;
        false
    }
}

struct State<'s> {
    order: &'s [VertexId],
    parent: &'s [Option<VertexId>],
    closing: &'s [Vec<usize>],
    fixed: &'s [Option<VertexId>],
    map: Vec<VertexId>,
    used: Vec<bool>,
    scratch: Vec<VertexId>,
}

/// A vertex bijection `k1 -> k2` (dense ids) mapping facets onto facets, if one exists.
pub fn are_isomorphic(k1: &SimplicialComplex, k2: &SimplicialComplex) -> Option<Vec<VertexId>> {
    if k1.n_vertices() != k2.n_vertices() || k1.f_vector() != k2.f_vector() {
        return None;
    }
    let h1 = Hypergraph::from_complex(k1);
    let h2 = Hypergraph::from_complex(k2);
    if h1.fingerprint() != h2.fingerprint() {
        return None;
    }
    MatchSearch::new(&h1, &h2).find(&[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cross_polytope, simplex_boundary};

    #[test]
    fn finds_relabeling() {
        let (k, _) = cross_polytope(4);
        let p: Vec<VertexId> = vec![3, 7, 0, 5, 1, 6, 2, 4];
        let q = k.permuted(&p);
        let m = are_isomorphic(&k, &q).unwrap();
        assert!(k.permuted(&m).facets() == q.facets());
    }

    #[test]
    fn rejects_different_f_vectors() {
        let (b3, _) = cross_polytope(3);
        assert!(are_isomorphic(&simplex_boundary(3), &b3).is_none());
    }
}
