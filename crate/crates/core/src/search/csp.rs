//! Constraint search over vertex-link choices.
//!
//! Each vertex chooses a 2-factor of its link graph (the faces through it,
//! seen as edges between its neighbours); a face is selected iff every one of
//! its vertices selects it. Domains are bitsets over the precomputed choices,
//! propagation is generalized arc consistency on the per-face agreement
//! constraints, and branching picks the vertex with the fewest remaining
//! choices.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{PolytopalComplex, UnionFind, VertexId};
use crate::perm::{PermGroup, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Every vertex link is a single cycle.
    Surface,
    /// Vertex links are disjoint unions of cycles.
    Pinched,
}

#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Exhausted,
    BudgetExceeded,
}

/// Raw result of a run; classification happens in the caller.
#[derive(Debug, Clone)]
pub(crate) struct RawOutcome {
    pub status: SearchStatus,
    pub solutions: Vec<Vec<usize>>,
    pub nodes: u64,
    pub tasks_total: usize,
    pub tasks_completed: usize,
}

/// Resumable progress of a run, rewritten after every finished subtree.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct Checkpoint {
    fingerprint: String,
    tasks_total: usize,
    completed: Vec<usize>,
    solutions: Vec<Vec<usize>>,
    nodes: u64,
}

/// Subtrees are split off until there are at least this many (or the depth cap is hit).
const TARGET_TASKS: usize = 1024;
const MAX_SPLIT_DEPTH: usize = 6;

pub(crate) struct Engine {
    faces: Vec<Vec<VertexId>>,
    /// Faces through each vertex; the position is the local bit.
    vfaces: Vec<Vec<usize>>,
    /// Link choices of each vertex as local face masks, sorted.
    values: Vec<Vec<u64>>,
    /// Offset and word count of each vertex's domain in the flat bitset.
    off: Vec<usize>,
    words: Vec<usize>,
    /// Edges at each vertex: `(other end, local index of this edge there)`.
    vedges: Vec<Vec<(usize, usize)>>,
    /// `pair_support[v][k][p]`: the choices of `v` that put the `p`-th face pair
    /// on its `k`-th edge. Pairs are indexed per edge, so both ends agree on `p`.
    pair_support: Vec<Vec<Vec<Vec<u64>>>>,
}

#[derive(Clone)]
struct State {
    dom: Vec<u64>,
    size: Vec<u32>,
}

struct Shared<'a> {
    budget: &'a Budget,
    start: Instant,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

impl Shared<'_> {
    fn tick(&self) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.budget.max_nodes.is_some_and(|m| n > m);
        let over_time = n % 256 == 0 && self.budget.max_time.is_some_and(|t| self.start.elapsed() > t);
        if over_nodes || over_time {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &x)| {
        let mut x = x;
        std::iter::from_fn(move || {
            (x != 0).then(|| {
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                64 * w + b
            })
        })
    })
}

impl Engine {
    pub fn new(p: &PolytopalComplex, mode: SearchMode) -> Self {
        let vfaces = p.faces_of_vertices();
        for (v, fs) in vfaces.iter().enumerate() {
            assert!(fs.len() <= 64, "vertex {v} lies in more than 64 faces");
        }
        let values: Vec<Vec<u64>> =
            (0..p.n_vertices).map(|v| link_two_factors(p, v as VertexId, &vfaces[v], mode)).collect();
        let words: Vec<usize> = values.iter().map(|d| d.len().div_ceil(64).max(1)).collect();
        let off = words
            .iter()
            .scan(0, |acc, &w| {
                let o = *acc;
                *acc += w;
                Some(o)
            })
            .collect();
        let efaces = p.faces_of_edges();
        let mut vedges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p.n_vertices];
        let mut vedge_ids: Vec<Vec<usize>> = vec![Vec::new(); p.n_vertices];
        for (e, &(a, b)) in p.edges.iter().enumerate() {
            let (a, b) = (a as usize, b as usize);
            let (ka, kb) = (vedges[a].len(), vedges[b].len());
            vedges[a].push((b, kb));
            vedges[b].push((a, ka));
            vedge_ids[a].push(e);
            vedge_ids[b].push(e);
        }
        let pair_support = (0..p.n_vertices)
            .map(|v| {
                let local: HashMap<usize, usize> = vfaces[v].iter().enumerate().map(|(i, &f)| (f, i)).collect();
                vedge_ids[v]
                    .iter()
                    .map(|&e| {
                        let fs = &efaces[e];
                        let pairs: Vec<u64> = (0..fs.len())
                            .flat_map(|i| (i + 1..fs.len()).map(move |j| (i, j)))
                            .map(|(i, j)| 1 << local[&fs[i]] | 1 << local[&fs[j]])
                            .collect();
                        let mask = pairs.iter().fold(0, |m, &x| m | x);
                        pairs
                            .iter()
                            .map(|&pm| {
                                let mut s = vec![0u64; words[v]];
                                for (j, &x) in values[v].iter().enumerate() {
                                    if x & mask == pm {
                                        s[j / 64] |= 1 << (j % 64);
                                    }
                                }
                                s
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Engine { faces: p.faces2.clone(), vfaces, values, off, words, vedges, pair_support }
    }

    pub fn domain_sizes(&self) -> Vec<usize> {
        self.values.iter().map(|d| d.len()).collect()
    }

    fn root(&self) -> State {
        let mut dom = vec![0u64; self.off.last().map_or(0, |o| o + self.words[self.words.len() - 1])];
        for (v, vals) in self.values.iter().enumerate() {
            for j in 0..vals.len() {
                dom[self.off[v] + j / 64] |= 1 << (j % 64);
            }
        }
        State { dom, size: self.values.iter().map(|d| d.len() as u32).collect() }
    }

    fn dom<'s>(&self, s: &'s State, v: usize) -> &'s [u64] {
        &s.dom[self.off[v]..self.off[v] + self.words[v]]
    }

    /// Revises the far ends of `v`'s edges against the face pairs `v` still allows.
    fn propagate(&self, s: &mut State, mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; s.size.len()];
        for &v in &queue {
            queued[v] = true;
        }
        let mut allowed = Vec::new();
        while let Some(v) = queue.pop() {
            queued[v] = false;
            for (k, &(u, ku)) in self.vedges[v].iter().enumerate() {
                let d = self.dom(s, v);
                allowed.clear();
                allowed.extend(
                    self.pair_support[v][k].iter().enumerate().filter(|(_, sup)| d.iter().zip(sup.iter()).any(|(x, m)| x & m != 0)).map(|(p, _)| p),
                );
                let sup_u = &self.pair_support[u][ku];
                let du = &mut s.dom[self.off[u]..self.off[u] + self.words[u]];
                let (mut changed, mut size) = (false, 0);
                for (w, x) in du.iter_mut().enumerate() {
                    let keep = allowed.iter().fold(0, |m, &p| m | sup_u[p][w]);
                    let y = *x & keep;
                    changed |= y != *x;
                    *x = y;
                    size += y.count_ones();
                }
                if changed {
                    s.size[u] = size;
                    if size == 0 {
                        return false;
                    }
                    if !queued[u] {
                        queued[u] = true;
                        queue.push(u);
                    }
                }
            }
        }
        true
    }

    fn assign(&self, s: &State, v: usize, j: usize) -> Option<State> {
        let mut t = s.clone();
        let d = &mut t.dom[self.off[v]..self.off[v] + self.words[v]];
        d.fill(0);
        d[j / 64] |= 1 << (j % 64);
        t.size[v] = 1;
        self.propagate(&mut t, vec![v]).then_some(t)
    }

    fn branch_vertex(s: &State) -> Option<usize> {
        (0..s.size.len()).filter(|&v| s.size[v] > 1).min_by_key(|&v| (s.size[v], v))
    }

    fn solution(&self, s: &State) -> Vec<usize> {
        let mut faces = std::collections::BTreeSet::new();
        for v in 0..s.size.len() {
            let j = bits(self.dom(s, v)).next().expect("singleton domain");
            let x = self.values[v][j];
            faces.extend(self.vfaces[v].iter().enumerate().filter(|(i, _)| x >> i & 1 == 1).map(|(_, &f)| f));
        }
        faces.into_iter().collect()
    }

    fn dfs(&self, s: State, shared: &Shared, out: &mut Vec<Vec<usize>>) -> bool {
        if !shared.tick() {
            return false;
        }
        let Some(v) = Self::branch_vertex(&s) else {
            out.push(self.solution(&s));
            return true;
        };
        for j in bits(self.dom(&s, v)) {
            if let Some(t) = self.assign(&s, v, j) {
                if !self.dfs(t, shared, out) {
                    return false;
                }
            }
        }
        true
    }

    /// Choices at `v` up to the stabilizer of `v` in `group`: the least local mask of each orbit.
    fn representatives(&self, v: usize, group: &PermGroup) -> Vec<usize> {
        let index: HashMap<Vec<VertexId>, usize> = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut k = f.clone();
                k.sort_unstable();
                (k, i)
            })
            .collect();
        let local: HashMap<usize, usize> = self.vfaces[v].iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let stab: Vec<Permutation> =
            group.elements().into_iter().filter(|g| g.apply(v as VertexId) == v as VertexId).collect();
        let image = |x: u64, g: &Permutation| -> u64 {
            let mut y = 0u64;
            for (i, &f) in self.vfaces[v].iter().enumerate() {
                if x >> i & 1 == 1 {
                    let mut k: Vec<VertexId> = self.faces[f].iter().map(|&w| g.apply(w)).collect();
                    k.sort_unstable();
                    let gf = index.get(&k).expect("the group acts on the faces");
                    y |= 1 << local[gf];
                }
            }
            y
        };
        (0..self.values[v].len()).filter(|&j| stab.iter().all(|g| image(self.values[v][j], g) >= self.values[v][j])).collect()
    }

    /// Decision paths `(vertex, choice)` from the root, cut at a fixed depth.
    fn split(&self, s: &State, depth: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let v = match Self::branch_vertex(s) {
            Some(v) if depth > 0 => v,
            _ => {
                out.push(path.clone());
                return;
            }
        };
        for j in bits(self.dom(s, v)) {
            if let Some(t) = self.assign(s, v, j) {
                path.push((v, j));
                self.split(&t, depth - 1, path, out);
                path.pop();
            }
        }
    }

    fn replay(&self, root: &State, path: &[(usize, usize)]) -> State {
        path.iter().fold(root.clone(), |s, &(v, j)| self.assign(&s, v, j).expect("replayed paths are consistent"))
    }

    pub fn run(
        &self,
        group: Option<&PermGroup>,
        budget: &Budget,
        checkpoint: Option<&PathBuf>,
        fingerprint: &str,
    ) -> RawOutcome {
        let shared = Shared { budget, start: Instant::now(), nodes: AtomicU64::new(0), aborted: AtomicBool::new(false) };
        let mut root = self.root();
        if let Some(g) = group {
            let reps = self.representatives(0, g);
            info!("symmetry: {} of {} choices at vertex 0", reps.len(), self.values[0].len());
            let d = &mut root.dom[self.off[0]..self.off[0] + self.words[0]];
            d.fill(0);
            for &j in &reps {
                d[j / 64] |= 1 << (j % 64);
            }
            root.size[0] = reps.len() as u32;
        }
        let all: Vec<usize> = (0..root.size.len()).collect();
        let mut tasks: Vec<Vec<(usize, usize)>> = Vec::new();
        if root.size.iter().all(|&z| z > 0) && self.propagate(&mut root, all) {
            for depth in 1..=MAX_SPLIT_DEPTH {
                tasks.clear();
                self.split(&root, depth, &mut Vec::new(), &mut tasks);
                if tasks.len() >= TARGET_TASKS || tasks.iter().all(|t| t.len() < depth) {
                    break;
                }
            }
        }
        let total = tasks.len();
        let mut ck = Checkpoint { fingerprint: fingerprint.to_string(), tasks_total: total, completed: Vec::new(), solutions: Vec::new(), nodes: 0 };
        if let Some(path) = checkpoint {
            if let Some(old) = std::fs::read_to_string(path).ok().and_then(|s| serde_json::from_str::<Checkpoint>(&s).ok()) {
                if old.fingerprint == ck.fingerprint && old.tasks_total == total {
                    info!("resuming: {} of {} subtrees already done", old.completed.len(), total);
                    ck = old;
                }
            }
        }
        shared.nodes.store(ck.nodes, Ordering::Relaxed);
        let done: Vec<bool> = (0..total).map(|i| ck.completed.contains(&i)).collect();
        let ck = Mutex::new(ck);
        info!("{total} subtrees");
        tasks.into_par_iter().enumerate().filter(|(i, _)| !done[*i]).for_each(|(i, path)| {
            let mut found = Vec::new();
            if self.dfs(self.replay(&root, &path), &shared, &mut found) {
                let mut c = ck.lock().expect("checkpoint lock");
                c.completed.push(i);
                c.solutions.extend(found);
                c.nodes = shared.nodes.load(Ordering::Relaxed);
                info!(
                    "subtree {i} done ({}/{} complete, {} nodes, {} solutions, {:.1}s)",
                    c.completed.len(),
                    total,
                    c.nodes,
                    c.solutions.len(),
                    shared.start.elapsed().as_secs_f64()
                );
                if let Some(path) = checkpoint {
                    let text = serde_json::to_string(&*c).expect("serializable");
                    let tmp = path.with_extension("tmp");
                    if std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, path)).is_err() {
                        log::warn!("could not write checkpoint {}", path.display());
                    }
                }
            }
        });
        let mut ck = ck.into_inner().expect("checkpoint lock");
        ck.solutions.sort();
        let finished = ck.completed.len() == total;
        RawOutcome {
            status: if finished { SearchStatus::Exhausted } else { SearchStatus::BudgetExceeded },
            solutions: ck.solutions,
            nodes: shared.nodes.load(Ordering::Relaxed),
            tasks_total: total,
            tasks_completed: ck.completed.len(),
        }
    }
}

/// The 2-factors of the link graph at `v` as bit masks over `faces`
/// (single cycles only in surface mode).
fn link_two_factors(p: &PolytopalComplex, v: VertexId, faces: &[usize], mode: SearchMode) -> Vec<u64> {
    let mut nbrs: Vec<VertexId> = Vec::new();
    let mut ends: Vec<(usize, usize)> = Vec::new();
    for &f in faces {
        let (a, b) = p.face_neighbors(f, v);
        let mut idx = |x: VertexId| match nbrs.iter().position(|&y| y == x) {
            Some(i) => i,
            None => {
                nbrs.push(x);
                nbrs.len() - 1
            }
        };
        let (ia, ib) = (idx(a), idx(b));
        ends.push((ia, ib));
    }
    let m = nbrs.len();
    let mut incident = vec![Vec::new(); m];
    for (e, &(a, b)) in ends.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    // -1 undecided, 0 out, 1 in
    let mut state = vec![-1i8; ends.len()];
    let mut out = Vec::new();
    two_factors(&ends, &incident, &mut state, &mut out);
    out.retain(|&x| mode == SearchMode::Pinched || cycle_count(&ends, x, m) == 1);
    out.sort_unstable();
    out
}

fn two_factors(ends: &[(usize, usize)], incident: &[Vec<usize>], state: &mut [i8], out: &mut Vec<u64>) {
    let deg = |u: usize, st: &[i8]| incident[u].iter().filter(|&&e| st[e] == 1).count();
    let Some(u) = (0..incident.len()).find(|&u| deg(u, state) < 2) else {
        out.push(state.iter().enumerate().filter(|(_, &s)| s == 1).fold(0u64, |m, (e, _)| m | 1 << e));
        return;
    };
    let need = 2 - deg(u, state);
    let free: Vec<usize> = incident[u]
        .iter()
        .copied()
        .filter(|&e| state[e] == -1 && {
            let (a, b) = ends[e];
            deg(if a == u { b } else { a }, state) < 2
        })
        .collect();
    if free.len() < need {
        return;
    }
    let undecided: Vec<usize> = incident[u].iter().copied().filter(|&e| state[e] == -1).collect();
    let picks: Vec<Vec<usize>> = if need == 1 {
        free.iter().map(|&e| vec![e]).collect()
    } else {
        let mut v = Vec::new();
        for i in 0..free.len() {
            for j in i + 1..free.len() {
                v.push(vec![free[i], free[j]]);
            }
        }
        v
    };
    for pick in picks {
        for &e in &undecided {
            state[e] = 0;
        }
        for &e in &pick {
            state[e] = 1;
        }
        two_factors(ends, incident, state, out);
        for &e in &undecided {
            state[e] = -1;
        }
    }
}

fn cycle_count(ends: &[(usize, usize)], mask: u64, m: usize) -> usize {
    let mut uf = UnionFind::new(m);
    let mut comps = m;
    for (e, &(a, b)) in ends.iter().enumerate() {
        if mask >> e & 1 == 1 && uf.union(a, b) {
            comps -= 1;
        }
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{build_regular_4_polytope, Platonic, Regular4};

    #[test]
    fn link_choices() {
        // a vertex of the 24-cell has a cube as link: six Hamiltonian cycles, three pairs of squares
        let m = build_regular_4_polytope(Regular4::Cell24).unwrap();
        let vf = m.complex.faces_of_vertices();
        assert_eq!(link_two_factors(&m.complex, 0, &vf[0], SearchMode::Surface).len(), 6);
        assert_eq!(link_two_factors(&m.complex, 0, &vf[0], SearchMode::Pinched).len(), 9);
        // the 120-cell's tetrahedral links hold three 4-cycles and nothing else
        let m = build_regular_4_polytope(Regular4::Cell120).unwrap();
        let vf = m.complex.faces_of_vertices();
        assert_eq!(link_two_factors(&m.complex, 0, &vf[0], SearchMode::Pinched).len(), 3);
    }

    #[test]
    fn octahedron_surfaces() {
        // 2-factors of the square links of the octahedron: each is the whole square,
        // so the only "surface" is the octahedron itself
        let p = Platonic::Octahedron.complex();
        let e = Engine::new(&p, SearchMode::Surface);
        let r = e.run(None, &Budget::default(), None, "octahedron");
        assert_eq!(r.status, SearchStatus::Exhausted);
        assert_eq!(r.solutions, vec![(0..8).collect::<Vec<_>>()]);
    }
}
