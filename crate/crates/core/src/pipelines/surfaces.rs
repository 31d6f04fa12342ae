//! Pipelines for Hamiltonian (pinched) surfaces in the regular 4-polytopes.

use std::path::PathBuf;
use std::time::Duration;

use super::fixtures::{self, PinchedType};
use super::{check, on_ids, PipelineReport, Runner};
use crate::complex::{are_isomorphic, SimplicialComplex};
use crate::perm::{automorphism_group, automorphism_group_of_polytope, PermGroup};
use crate::polytope::{build_regular_4_polytope, edge_graph, Platonic, PolytopeModel, Regular4};
use crate::search::{
    expected_surface_census, hamiltonian_cycles, search_hamiltonian_surfaces, Budget, SearchMode, SearchOutcome,
    SearchProblem, SearchStatus,
};

#[derive(Debug, Clone)]
pub struct SurfaceOptions {
    /// Budget for the 600-cell search; the smaller polytopes run unbounded.
    pub budget: Budget,
    /// Resumable state file for the 600-cell search.
    pub checkpoint: Option<PathBuf>,
    /// Accept an unfinished 600-cell search as a pass.
    pub allow_budget_exceeded: bool,
    /// Break symmetry with the polytope's symmetry group.
    pub use_symmetry: bool,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        SurfaceOptions {
            budget: Budget { max_nodes: None, max_time: Some(Duration::from_secs(600)) },
            checkpoint: None,
            allow_budget_exceeded: false,
            use_symmetry: true,
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn model(name: Regular4) -> Result<PolytopeModel, String> {
    build_regular_4_polytope(name).map_err(err)
}

fn run(m: &PolytopeModel, mode: SearchMode, opts: &SurfaceOptions, budget: Budget, ckpt: Option<PathBuf>) -> Result<SearchOutcome, String> {
    let mut p = SearchProblem::new(m.complex.clone(), mode);
    if opts.use_symmetry {
        p.symmetry = Some(m.symmetry_group().clone());
    }
    p.budget = budget;
    p.checkpoint = ckpt;
    search_hamiltonian_surfaces(&p).map_err(err)
}

fn summary(o: &SearchOutcome) -> String {
    format!(
        "{:?}: {} solutions, {} classes (+{} disconnected), {} nodes, {}/{} subtrees, {:.1}s",
        o.status,
        o.solutions.len(),
        o.classes.len(),
        o.disconnected.len(),
        o.nodes,
        o.subtrees_completed,
        o.subtrees_total,
        o.wall_secs
    )
}

/// The complex spanned by the printed triangle orbits of one table type.
pub fn table_type_complex(t: &PinchedType) -> SimplicialComplex {
    let seeds: Vec<_> = t.orbits.iter().map(|o| o.simplex()).collect();
    t.group().orbit_complex(&seeds).complex
}

fn prop1_stages(r: &mut Runner, opts: &SurfaceOptions) {
    let m = match model(Regular4::Cell24) {
        Ok(m) => m,
        Err(e) => {
            r.stage("24-cell", || Err(e));
            return;
        }
    };
    let mut pinched = None;
    r.stage("24-cell pinched search", || {
        let o = run(&m, SearchMode::Pinched, opts, Budget::default(), None)?;
        let mut pinch: Vec<usize> = o.classes.iter().map(|c| c.profile.pinch_count()).collect();
        pinch.sort_unstable_by(|a, b| b.cmp(a));
        let ok = o.exhausted() && o.classes.len() == 6 && pinch == [10, 10, 8, 8, 6, 4];
        let detail = format!("{}; pinch points {:?}", summary(&o), pinch);
        pinched = Some(o);
        check(ok, detail)
    });
    r.stage("24-cell surfaces", || {
        let o = run(&m, SearchMode::Surface, opts, Budget::default(), None)?;
        check(o.exhausted() && o.solutions.is_empty(), summary(&o))
    });
    r.stage("table types", || {
        let o = pinched.as_ref().ok_or("no search outcome")?;
        let types = fixtures::cell24_types().map_err(err)?;
        let mut used = vec![false; o.classes.len()];
        let mut lines = Vec::new();
        for t in &types {
            let k = table_type_complex(t);
            if k.facets().len() != 64 {
                return Err(format!("type {}: printed orbits give {} triangles", t.id, k.facets().len()));
            }
            let hit = o.classes.iter().enumerate().find(|(i, c)| !used[*i] && are_isomorphic(&k, &c.representative).is_some());
            let Some((i, c)) = hit else {
                return Err(format!("type {} matches no search class", t.id));
            };
            used[i] = true;
            let same = c.automorphism_order == t.group_order
                && c.profile.pinch_count() == t.pinch_points
                && c.profile.normalized_genus == t.genus.into();
            if !same {
                return Err(format!(
                    "type {}: class has |Aut| {}, {} pinch points, genus {}; printed {}, {}, {}",
                    t.id,
                    c.automorphism_order,
                    c.profile.pinch_count(),
                    c.profile.normalized_genus,
                    t.group_order,
                    t.pinch_points,
                    t.genus
                ));
            }
            lines.push(format!("type {} (|Aut| {}, {} pinch, genus {})", t.id, t.group_order, t.pinch_points, t.genus));
        }
        Ok(lines.join("; "))
    });
    r.stage("type 6 group", || {
        let k = fixtures::cell24_type6();
        let types = fixtures::cell24_types().map_err(err)?;
        let t6 = types.iter().find(|t| t.id == 6).ok_or("type 6 missing")?;
        if !are_isomorphic(&k, &table_type_complex(t6)).is_some() {
            return Err("printed facet list differs from the type-6 orbits".into());
        }
        let aut = automorphism_group(&k);
        let gens = t6.generators.iter().map(|g| on_ids(g, &k)).collect::<Option<Vec<_>>>().ok_or("generators")?;
        let (z, a, b) = (&gens[0], &gens[1], &gens[2]);
        let contained = gens.iter().all(|g| aut.contains(g));
        let ab = PermGroup::new(k.n_vertices(), vec![a.clone(), b.clone()]).map_err(err)?.order();
        let zab = PermGroup::new(k.n_vertices(), gens.clone()).map_err(err)?.order();
        let commute = z.then(a) == a.then(z) && z.then(b) == b.then(z);
        let nonabelian = a.then(b) != b.then(a);
        check(
            contained && aut.order() == 16 && zab == 16 && ab == 8 && commute && nonabelian && z.order() == 2,
            format!("|Aut| = {}, |<Z,A,B>| = {zab}, |<A,B>| = {ab} (non-abelian: {nonabelian}), Z central: {commute}", aut.order()),
        )
    });
}

fn prop2_stages(r: &mut Runner, opts: &SurfaceOptions) {
    let m = match model(Regular4::Cell120) {
        Ok(m) => m,
        Err(e) => {
            r.stage("120-cell", || Err(e));
            return;
        }
    };
    for (name, mode) in [("120-cell surfaces", SearchMode::Surface), ("120-cell pinched", SearchMode::Pinched)] {
        r.stage(name, || {
            let o = run(&m, mode, opts, Budget::default(), None)?;
            check(o.exhausted() && o.solutions.is_empty(), summary(&o))
        });
    }
}

fn prop3_stages(r: &mut Runner, opts: &SurfaceOptions) {
    r.stage("platonic cycles", || {
        let want = [1, 1, 2, 1, 17];
        let got: Vec<usize> = Platonic::ALL
            .iter()
            .map(|p| {
                let c = p.complex();
                hamiltonian_cycles(&edge_graph(&c), Some(&automorphism_group_of_polytope(&c))).count()
            })
            .collect();
        check(got == want, format!("cycles up to symmetry {got:?}"))
    });
    let m = match model(Regular4::Cell600) {
        Ok(m) => m,
        Err(e) => {
            r.stage("600-cell", || Err(e));
            return;
        }
    };
    r.stage("600-cell census", || {
        let c = expected_surface_census(&m.complex).map_err(err)?;
        check(c.f2 == 480 && c.euler_char == -120, format!("{c:?}"))
    });
    r.stage("600-cell surfaces", || {
        let o = run(&m, SearchMode::Surface, opts, opts.budget.clone(), opts.checkpoint.clone())?;
        let detail = summary(&o);
        match o.status {
            SearchStatus::Exhausted => check(o.solutions.is_empty(), detail),
            SearchStatus::BudgetExceeded if opts.allow_budget_exceeded => Ok(format!("{detail} (unfinished, allowed)")),
            SearchStatus::BudgetExceeded => Err(detail),
        }
    });
}

pub fn verify_prop1(opts: &SurfaceOptions) -> PipelineReport {
    let mut r = Runner::new("prop1");
    prop1_stages(&mut r, opts);
    r.finish()
}

pub fn verify_prop2(opts: &SurfaceOptions) -> PipelineReport {
    let mut r = Runner::new("prop2");
    prop2_stages(&mut r, opts);
    r.finish()
}

pub fn verify_prop3(opts: &SurfaceOptions) -> PipelineReport {
    let mut r = Runner::new("prop3");
    prop3_stages(&mut r, opts);
    r.finish()
}

pub fn verify_prop123(opts: &SurfaceOptions) -> PipelineReport {
    let mut r = Runner::new("prop123");
    prop1_stages(&mut r, opts);
    prop2_stages(&mut r, opts);
    prop3_stages(&mut r, opts);
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop1_passes() {
        let rep = verify_prop1(&SurfaceOptions::default());
        assert!(rep.passed, "{rep:#?}");
    }

    #[test]
    fn table_types_are_closed() {
        for t in fixtures::cell24_types().unwrap() {
            let k = table_type_complex(&t);
            assert_eq!(k.f_vector(), [24, 96, 64], "type {}", t.id);
            assert!(k.is_pseudomanifold());
        }
    }
}
