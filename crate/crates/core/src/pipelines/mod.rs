//! End-to-end verification pipelines over the embedded reference data.

mod cross;
pub mod fixtures;
mod formulas;
mod surfaces;

use std::time::Instant;

use num_rational::Ratio;
use serde::Serialize;

use crate::complex::{SimplicialComplex, VertexId};
use crate::homology::{homology, Coefficients};
use crate::perm::Permutation;

pub use cross::{
    build_minimal_bundle, build_prop4, verify_remark2, verify_theorem2, verify_theorem2_on, BundleReport, Theorem2Options,
    TightnessChoice,
};
pub use formulas::{
    factored_text_consistent, genus_formula, printed_fourfold_table, printed_surface_table, regular_case_table,
    sparla_product_form, Existence, Family, FormulaError, Genus, PrintedRow, RegularCaseRow,
};
pub use surfaces::{table_type_complex, verify_prop1, verify_prop123, verify_prop2, verify_prop3, SurfaceOptions};

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub secs: f64,
}

/// Outcome of a pipeline; stages run in order and the first failure stops the run.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub name: String,
    pub passed: bool,
    pub failed_stage: Option<String>,
    pub stages: Vec<Stage>,
}

impl PipelineReport {
    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }
}

pub(crate) struct Runner {
    report: PipelineReport,
}

impl Runner {
    pub fn new(name: &str) -> Self {
        Runner { report: PipelineReport { name: name.into(), passed: true, failed_stage: None, stages: Vec::new() } }
    }

    /// Runs `f` unless an earlier stage failed; `Ok`/`Err` carry the detail line.
    pub fn stage(&mut self, name: &str, f: impl FnOnce() -> Result<String, String>) -> &mut Self {
        if self.report.failed_stage.is_some() {
            return self;
        }
        let t = Instant::now();
        let (passed, detail) = match f() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        log::info!("{}: {name} {} ({detail})", self.report.name, if passed { "ok" } else { "FAILED" });
        if !passed {
            self.report.passed = false;
            self.report.failed_stage = Some(name.into());
        }
        self.report.stages.push(Stage { name: name.into(), passed, detail, secs: t.elapsed().as_secs_f64() });
        self
    }

    pub fn failed(&self) -> bool {
        self.report.failed_stage.is_some()
    }

    pub fn finish(self) -> PipelineReport {
        self.report
    }
}

pub(crate) fn check(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// A permutation of external labels (`1..=n`) as a permutation of the dense ids of `k`.
pub(crate) fn on_ids(p: &Permutation, k: &SimplicialComplex) -> Option<Permutation> {
    let images = (0..k.n_vertices() as VertexId)
        .map(|v| {
            let l = k.label(v);
            let img = p.apply(l.checked_sub(1)? as VertexId) + 1;
            k.vertex_of_label(img)
        })
        .collect::<Option<Vec<_>>>()?;
    Permutation::from_images(images)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equal,
    Above,
    Below,
}

/// Comparison of the "genus" `(χ − 2)/2` of a 4-manifold with `2d` vertices
/// against `(d−1)(d−3)(d−5)/15`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparlaReport {
    pub d: i64,
    pub euler_char: i64,
    pub genus: Ratio<i64>,
    pub bound: Ratio<i64>,
    pub relation: Relation,
}

pub fn sparla_equality_check(k: &SimplicialComplex, d: i64) -> Result<SparlaReport, FormulaError> {
    let betti = homology(k, Coefficients::Q).betti;
    let euler_char: i64 = betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    let genus = Ratio::new(euler_char - 2, 2);
    let bound = genus_formula(Family::CrossPolytope, 2, d)?.genus;
    let relation = match genus.cmp(&bound) {
        std::cmp::Ordering::Equal => Relation::Equal,
        std::cmp::Ordering::Greater => Relation::Above,
        std::cmp::Ordering::Less => Relation::Below,
    };
    Ok(SparlaReport { d, euler_char, genus, bound, relation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::cross_polytope;

    #[test]
    fn sparla_on_spheres_and_fixture() {
        let (b5, _) = cross_polytope(5);
        let r = sparla_equality_check(&b5, 5).unwrap();
        assert_eq!((r.relation, r.genus), (Relation::Equal, Ratio::from_integer(0)));
        let r = sparla_equality_check(&fixtures::theorem2_complex(), 8).unwrap();
        assert_eq!((r.relation, r.genus, r.euler_char), (Relation::Equal, Ratio::from_integer(7), 16));
    }

    #[test]
    fn runner_stops_at_first_failure() {
        let mut r = Runner::new("demo");
        r.stage("a", || Ok("fine".into())).stage("b", || Err("broken".into())).stage("c", || Ok("skipped".into()));
        let rep = r.finish();
        assert!(!rep.passed);
        assert_eq!(rep.failed_stage.as_deref(), Some("b"));
        assert_eq!(rep.stages.len(), 2);
    }
}
