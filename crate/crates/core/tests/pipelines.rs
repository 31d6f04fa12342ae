use hamsub::complex::{Simplex, SimplicialComplex, VertexId};
use hamsub::pipelines::{
    build_prop4, fixtures, verify_remark2, verify_theorem2, verify_theorem2_on, PipelineReport, Theorem2Options,
    TightnessChoice,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn verdicts(r: &PipelineReport) -> Vec<(String, bool)> {
    r.stages.iter().map(|s| (s.name.clone(), s.passed)).collect()
}

#[test]
fn theorem2_passes() {
    let r = verify_theorem2();
    assert!(r.passed, "{r:#?}");
    assert!(r.stage("tightness").unwrap().detail.contains("halfspaces"));
}

#[test]
fn theorem2_is_relabeling_invariant() {
    let k = fixtures::theorem2_complex();
    let opts = Theorem2Options { label_checks: false, tightness: TightnessChoice::Skip, ..Default::default() };
    let base = verdicts(&verify_theorem2_on(&k, &opts));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2 {
        let mut images: Vec<VertexId> = (0..16).collect();
        images.shuffle(&mut rng);
        let labels: Vec<u32> = (1..=16).collect();
        let facets: Vec<Simplex> = k.facets().iter().map(|f| f.map(&images)).collect();
        let relabeled = SimplicialComplex::with_labels(facets, labels);
        assert_eq!(verdicts(&verify_theorem2_on(&relabeled, &opts)), base);
    }
    assert!(base.iter().all(|(_, ok)| *ok), "{base:?}");
}

#[test]
fn theorem2_missing_facet_fails_at_pseudomanifold() {
    let k = fixtures::theorem2_complex();
    let broken = SimplicialComplex::with_labels(k.facets()[1..].to_vec(), k.labels().to_vec());
    let r = verify_theorem2_on(&broken, &Theorem2Options::default());
    assert_eq!(r.failed_stage.as_deref(), Some("pseudomanifold"));
}

#[test]
fn remark2_passes() {
    let r = verify_remark2();
    assert!(r.passed, "{r:#?}");
    assert!(r.stage("orbits").unwrap().detail.contains("group order 110"));
}

#[test]
fn prop4_series() {
    for k in 1..=5 {
        let (c, r) = build_prop4(k);
        assert!(r.passed, "{r:#?}");
        assert_eq!(c.n_vertices(), 2 * k + 6);
    }
    let (_, r) = build_prop4(1);
    assert!(r.stage("symmetry").unwrap().detail.contains("order 32"));
}
