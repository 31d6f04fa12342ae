//! Deterministic Schreier–Sims.

use super::Permutation;
use crate::complex::VertexId;

#[derive(Debug, Clone)]
struct Level {
    base: VertexId,
    /// `trans[p]` maps the base point to `p`.
    trans: Vec<Option<Permutation>>,
    orbit: Vec<VertexId>,
}

/// Base and strong generating set with orbit transversals.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    strong: Vec<Permutation>,
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabChain { degree, levels: Vec::new(), strong: Vec::new() };
        for g in generators.iter().filter(|g| !g.is_identity()) {
            chain.insert(g.clone());
        }
        chain.complete();
        chain
    }

    pub fn base(&self) -> Vec<VertexId> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g, 0).0.is_identity()
    }

    /// All elements, as products of transversal representatives.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for h in &out {
                for &p in &level.orbit {
                    let u = level.trans[p as usize].as_ref().expect("orbit point has a representative");
                    next.push(h.then(u));
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    fn fixes_prefix(g: &Permutation, base: &[VertexId]) -> bool {
        base.iter().all(|&b| g.apply(b) == b)
    }

    fn level_gens(&self, i: usize) -> Vec<&Permutation> {
        let prefix: Vec<VertexId> = self.levels[..i].iter().map(|l| l.base).collect();
        self.strong.iter().filter(|g| Self::fixes_prefix(g, &prefix)).collect()
    }

    /// Strips `g` through levels `start..`; returns the residue and the level it stopped at.
    fn sift(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut g = g.clone();
        for j in start..self.levels.len() {
            let lvl = &self.levels[j];
            let p = g.apply(lvl.base);
            match lvl.trans.get(p as usize).and_then(|u| u.as_ref()) {
                None => return (g, j),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        (g, self.levels.len())
    }

    fn insert(&mut self, r: Permutation) {
        let base = self.base();
        if Self::fixes_prefix(&r, &base) {
            let b = r.first_moved().expect("residue is not the identity");
            self.levels.push(Level { base: b, trans: Vec::new(), orbit: Vec::new() });
        }
        self.strong.push(r);
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let gens: Vec<Permutation> = self.level_gens(i).into_iter().cloned().collect();
        let b = self.levels[i].base;
        let mut trans: Vec<Option<Permutation>> = vec![None; self.degree];
        trans[b as usize] = Some(Permutation::identity(self.degree));
        let mut orbit = vec![b];
        let mut k = 0;
        while k < orbit.len() {
            let p = orbit[k];
            let u = trans[p as usize].clone().expect("visited");
            for s in &gens {
                let q = s.apply(p);
                if trans[q as usize].is_none() {
                    trans[q as usize] = Some(u.then(s));
                    orbit.push(q);
                }
            }
            k += 1;
        }
        let lvl = &mut self.levels[i];
        lvl.trans = trans;
        lvl.orbit = orbit;
    }

    /// Repeats Schreier-generator sifting from the deepest level up until every
    /// Schreier generator sifts to the identity.
    fn complete(&mut self) {
        'outer: loop {
            for i in 0..self.levels.len() {
                self.rebuild_orbit(i);
            }
            for i in (0..self.levels.len()).rev() {
                let gens: Vec<Permutation> = self.level_gens(i).into_iter().cloned().collect();
                let orbit = self.levels[i].orbit.clone();
                for &p in &orbit {
                    let up = self.levels[i].trans[p as usize].clone().expect("orbit point");
                    for s in &gens {
                        let q = s.apply(p);
                        let uq = self.levels[i].trans[q as usize].as_ref().expect("orbit closed");
                        let h = up.then(s).then(&uq.inverse());
                        let (r, _) = self.sift(&h, i + 1);
                        if !r.is_identity() {
                            self.insert(r);
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn symmetric_and_cyclic_orders() {
        let s5 = StabChain::new(5, &[cyc("(1 2)", 5), cyc("(1 2 3 4 5)", 5)]);
        assert_eq!(s5.order(), 120);
        let c7 = StabChain::new(7, &[cyc("(1 2 3 4 5 6 7)", 7)]);
        assert_eq!(c7.order(), 7);
        assert!(c7.contains(&cyc("(1 3 5 7 2 4 6)", 7)));
        assert!(!c7.contains(&cyc("(1 2)", 7)));
        assert_eq!(StabChain::new(4, &[]).order(), 1);
    }

    #[test]
    fn elements_match_order() {
        let g = StabChain::new(6, &[cyc("(1 2 3)(4 5 6)", 6), cyc("(1 4)(2 5)(3 6)", 6), cyc("(2 3)(5 6)", 6)]);
        let els = g.elements();
        assert_eq!(els.len() as u128, g.order());
        assert!(els.iter().all(|e| g.contains(e)));
    }
}
