//! Pipelines for the centrally-symmetric manifolds inside cross polytopes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::fixtures::{self, OrbitSeed};
use super::{check, on_ids, sparla_equality_check, PipelineReport, Relation, Runner};
use crate::bistellar::{certify_combinatorial_manifold, FlipConfig, ManifoldReport};
use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::homology::{
    boundary_chain, certify_tight, cycle_pairing, fundamental_class, homology, intersection_form, Coefficients, Field,
    HomologyProfile, Parity, TightMode, TightnessReport,
};
use crate::perm::{automorphism_group, is_fixed_point_free, PermGroup, Permutation};
use crate::search::{cross_polytope_diagonals, is_k_hamiltonian, Ambient};

/// Which tightness certificate the Theorem-2 pipeline requires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TightnessChoice {
    /// Vertex sets cut out by halfspaces of the ambient cross polytope.
    Halfspaces,
    /// Every vertex subset.
    AllSubsets,
    Sampled { samples: usize, seed: u64 },
    Skip,
}

#[derive(Debug, Clone)]
pub struct Theorem2Options {
    /// Run the checks that refer to the printed vertex labels.
    pub label_checks: bool,
    pub tightness: TightnessChoice,
    pub flips: FlipConfig,
}

impl Default for Theorem2Options {
    fn default() -> Self {
        Theorem2Options { label_checks: true, tightness: TightnessChoice::Halfspaces, flips: FlipConfig::default() }
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn seeds_on(k: &SimplicialComplex, seeds: &[OrbitSeed]) -> Result<Vec<Simplex>, String> {
    seeds
        .iter()
        .map(|s| k.simplex_from_labels(&s.labels).ok_or_else(|| format!("seed {:?} uses unknown labels", s.labels)))
        .collect()
}

fn facet_set(k: &SimplicialComplex) -> BTreeSet<Simplex> {
    k.facets().iter().cloned().collect()
}

fn manifold_stage(m: &ManifoldReport, n: usize) -> Result<String, String> {
    let detail = format!(
        "{} vertex links certified, {} faces checked, {} failures",
        m.vertex_links.len(),
        m.faces_checked,
        m.failures.len()
    );
    check(m.certified && m.vertex_links.len() == n, detail)
}

fn tightness(k: &SimplicialComplex, choice: &TightnessChoice) -> Option<Result<TightnessReport, String>> {
    let mode = match choice {
        TightnessChoice::Skip => return None,
        TightnessChoice::AllSubsets => TightMode::AllSubsets,
        TightnessChoice::Sampled { samples, seed } => TightMode::Sampled { samples: *samples, seed: *seed },
        TightnessChoice::Halfspaces => match cross_polytope_diagonals(k) {
            Ok(d) => TightMode::Halfspaces(d),
            Err(e) => return Some(Err(err(e))),
        },
    };
    Some(certify_tight(k, Field::Z2, mode).map_err(err))
}

fn tightness_stage(t: Option<Result<TightnessReport, String>>) -> Result<String, String> {
    match t {
        None => Ok("skipped".into()),
        Some(Err(e)) => Err(e),
        Some(Ok(r)) => {
            let detail = match &r.violation {
                None => format!("{} over Z2: {} vertex sets, no violation", r.mode_name(), r.subsets_checked),
                Some(v) => format!("violation on span{:?} in dimension {}", v.subset, v.dim),
            };
            check(r.passed, detail)
        }
    }
}

trait ModeName {
    fn mode_name(&self) -> &'static str;
}

impl ModeName for TightnessReport {
    fn mode_name(&self) -> &'static str {
        match self.mode {
            TightMode::AllSubsets => "all subsets",
            TightMode::KTight(_) => "k-tight",
            TightMode::Sampled { .. } => "sampled",
            TightMode::Halfspaces(_) => "halfspaces",
        }
    }
}

pub fn verify_theorem2() -> PipelineReport {
    verify_theorem2_on(&fixtures::theorem2_complex(), &Theorem2Options::default())
}

/// Runs the Theorem-2 stages on `k`; with `label_checks` off only
/// relabeling-invariant stages run.
pub fn verify_theorem2_on(k: &SimplicialComplex, opts: &Theorem2Options) -> PipelineReport {
    let mut r = Runner::new("theorem2");
    let n = k.n_vertices();
    r.stage("fixtures", || fixtures::verify_checksums().map(|_| format!("{} checksums", fixtures::FIXTURES.len())).map_err(err));
    r.stage("pseudomanifold", || {
        check(k.is_pseudomanifold() && k.is_strongly_connected(), format!("{} facets", k.facets().len()))
    });
    let aut = automorphism_group(k);
    if opts.label_checks {
        r.stage("orbits", || {
            let d = fixtures::theorem2_data().map_err(err)?;
            let (alpha, gamma) = match (on_ids(&d.alpha, k), on_ids(&d.gamma, k)) {
                (Some(a), Some(g)) => (a, g),
                _ => return Err("alpha or gamma does not act on the vertex labels".into()),
            };
            let small = PermGroup::new(n, vec![alpha.clone(), gamma.clone()]).map_err(err)?;
            let mut gens = vec![alpha, gamma];
            gens.extend(aut.generators().iter().cloned());
            let g = PermGroup::new(n, gens).map_err(err)?;
            let oc = g.orbit_complex(&seeds_on(k, &d.orbits)?);
            let want: Vec<usize> = d.orbits.iter().map(|o| o.length).collect();
            let same = facet_set(&oc.complex) == facet_set(k);
            check(
                oc.orbit_lengths == want && same,
                format!(
                    "<alpha, gamma> has order {}; with the automorphism generators (order {}) orbits {:?} {} the facet list; beta as printed is {}",
                    small.order(),
                    g.order(),
                    oc.orbit_lengths,
                    if same { "reproduce" } else { "do not reproduce" },
                    if d.beta.is_ok() { "a permutation" } else { "not a permutation" },
                ),
            )
        });
    }
    r.stage("f-vector", || {
        let f = k.f_vector();
        check(f == [16, 112, 448, 560, 224], format!("{f:?}"))
    });
    let mut diagonals = Vec::new();
    r.stage("2-hamiltonian", || {
        let h = is_k_hamiltonian(k, Ambient::CrossPolytope, 2).map_err(err)?;
        let m = h.matching.clone().unwrap_or_default();
        let mut ok = h.hamiltonian && m.len() == 8;
        if opts.label_checks {
            ok &= m == (0..8).map(|i| (2 * i + 1, 2 * i + 2)).collect::<Vec<_>>();
        }
        diagonals = m;
        check(ok, format!("hamiltonian = {}, diagonals {:?}", h.hamiltonian, diagonals))
    });
    r.stage("central symmetry", || {
        let mut images: Vec<VertexId> = (0..n as VertexId).collect();
        for &(a, b) in &diagonals {
            let (a, b) = (k.vertex_of_label(a).ok_or("label")?, k.vertex_of_label(b).ok_or("label")?);
            images[a as usize] = b;
            images[b as usize] = a;
        }
        let zeta = Permutation::from_images(images).ok_or("diagonals do not form a permutation")?;
        let free = is_fixed_point_free(&zeta, k).map_err(err)?;
        let mut ok = free && aut.contains(&zeta);
        if opts.label_checks {
            let d = fixtures::theorem2_data().map_err(err)?;
            ok &= on_ids(&d.zeta, k).as_ref() == Some(&zeta);
        }
        check(ok, format!("antipodal map is an automorphism without fixed faces: {free}"))
    });
    r.stage("automorphism group", || check(aut.order() == 128, format!("order {}", aut.order())));
    if r.failed() {
        return r.finish();
    }

    let ((manifold, z), tight) = rayon::join(
        || rayon::join(|| certify_combinatorial_manifold(k, &opts.flips), || homology(k, Coefficients::Z)),
        || tightness(k, &opts.tightness),
    );
    r.stage("manifold", || {
        let mut detail = manifold_stage(&manifold, n)?;
        if opts.label_checks {
            let v16 = k.simplex_from_labels(&[16]).ok_or("no vertex 16")?;
            let link: BTreeSet<Vec<u32>> = k.link(&v16).map_err(err)?.labeled_facets().into_iter().collect();
            let want: BTreeSet<Vec<u32>> = fixtures::theorem2_link16().labeled_facets().into_iter().collect();
            if link != want {
                return Err(format!("link of 16 differs from the printed link ({} vs {} facets)", link.len(), want.len()));
            }
            detail += &format!("; link of 16 equals the printed {} tetrahedra", want.len());
        }
        Ok(detail)
    });
    r.stage("homology", || check(z.betti == [1, 0, 14, 0, 1] && z.is_torsion_free(), z.to_string()));
    r.stage("intersection form", || {
        let f = intersection_form(k, manifold.certified).map_err(err)?;
        let mut ok = f.rank == 14 && f.parity == Parity::Even && f.signature == 0;
        let mut detail = format!("rank {}, {:?}, signature {}, det {}", f.rank, f.parity, f.signature, f.determinant);
        if opts.label_checks {
            let d = fixtures::theorem2_data().map_err(err)?;
            let cycles = d
                .cycles
                .iter()
                .map(|c| k.simplex_from_labels(c).map(|s| boundary_chain(&s)).ok_or("cycle labels"))
                .collect::<Result<Vec<_>, _>>()?;
            let p = cycle_pairing(k, &f, &cycles).map_err(err)?;
            let zero = BigInt::from(0);
            ok &= p[0][0] == zero && p[1][1] == zero && p[0][1].abs() == BigInt::from(1);
            detail += &format!("; empty-tetrahedron cycles pair as {:?}", p);
        }
        check(ok, detail)
    });
    r.stage("tightness", || tightness_stage(tight));
    r.stage("genus", || {
        let s = sparla_equality_check(k, 8).map_err(err)?;
        check(s.relation == Relation::Equal && s.genus == 7.into(), format!("chi {}, genus {} = bound {}", s.euler_char, s.genus, s.bound))
    });
    r.finish()
}

/// The 22-vertex example: orbits, f-vector, homology, central involution,
/// position in the 11-dimensional cross polytope and manifold certificate.
pub fn verify_remark2() -> PipelineReport {
    let mut r = Runner::new("remark2");
    r.stage("fixtures", || fixtures::verify_checksums().map(|_| "checksums".into()).map_err(err));
    let mut k = SimplicialComplex::empty();
    let mut data = None;
    r.stage("orbits", || {
        let d = fixtures::remark2_data().map_err(err)?;
        let g = PermGroup::new(22, d.generators.clone()).map_err(err)?;
        let seeds: Vec<Simplex> = d.orbits.iter().map(OrbitSeed::simplex).collect();
        let oc = g.orbit_complex(&seeds);
        let want: Vec<usize> = d.orbits.iter().map(|o| o.length).collect();
        k = oc.complex;
        let detail = format!("group order {}, orbits {:?}, {} facets", g.order(), oc.orbit_lengths, k.facets().len());
        let ok = g.order() == 110 && oc.orbit_lengths == want && k.facets().len() == 572;
        data = Some(d);
        check(ok, detail)
    });
    r.stage("f-vector", || {
        let f = k.f_vector();
        check(f == [22, 220, 1100, 1430, 572], format!("{f:?}"))
    });
    r.stage("pseudomanifold", || check(k.is_pseudomanifold() && k.is_strongly_connected(), "closed, strongly connected".into()));
    r.stage("central symmetry", || {
        let inv = &data.as_ref().ok_or("no data")?.involution;
        let free = is_fixed_point_free(inv, &k).map_err(err)?;
        check(free && inv.order() == 2, format!("involution fixes no face: {free}"))
    });
    r.stage("cross polytope", || {
        let inv = &data.as_ref().ok_or("no data")?.involution;
        let h1 = is_k_hamiltonian(&k, Ambient::CrossPolytope, 1).map_err(err)?;
        let h2 = is_k_hamiltonian(&k, Ambient::CrossPolytope, 2).map_err(err)?;
        let pairs: Vec<(u32, u32)> = (0..22u32)
            .filter(|&v| v < inv.apply(v))
            .map(|v| (k.label(v), k.label(inv.apply(v))))
            .collect();
        let ok = h1.hamiltonian && h1.matching.as_ref() == Some(&pairs) && !h2.hamiltonian;
        check(
            ok,
            format!("1-hamiltonian {} with the involution as diagonals; 2-hamiltonian {} (f2 = 1100 < 1320)", h1.hamiltonian, h2.hamiltonian),
        )
    });
    if r.failed() {
        return r.finish();
    }
    let (manifold, q): (ManifoldReport, HomologyProfile) =
        rayon::join(|| certify_combinatorial_manifold(&k, &FlipConfig::default()), || homology(&k, Coefficients::Q));
    r.stage("homology", || check(q.betti == [1, 0, 42, 0, 1], q.to_string()));
    r.stage("manifold", || manifold_stage(&manifold, 22));
    r.stage("genus", || {
        let at10 = sparla_equality_check(&k, 10).map_err(err)?;
        let at11 = sparla_equality_check(&k, 11).map_err(err)?;
        check(
            at10.genus == 21.into() && at10.relation == Relation::Equal && at11.relation == Relation::Below,
            format!("genus {}; bound {} for d = 10, {} for d = 11", at10.genus, at10.bound, at11.bound),
        )
    });
    r.finish()
}

/// Boundary of the `Z_n`-orbit of `⟨0 1 … k+2⟩`; vertex ids and labels are residues mod `n`.
fn zn_handle_boundary(k: usize, n: usize) -> SimplicialComplex {
    let shift = Permutation::from_images((0..n as VertexId).map(|x| (x + 1) % n as VertexId).collect()).expect("shift");
    let g = PermGroup::new(n, vec![shift]).expect("degree n");
    let seed = Simplex::new((0..k as VertexId + 3).collect()).expect("simplex");
    let solid = g.orbit_complex(&[seed]).complex;
    let b = solid.boundary();
    let facets = b.facets().iter().map(|f| Simplex::new(f.vertices().iter().map(|&v| b.label(v) - 1).collect()).expect("simplex")).collect();
    SimplicialComplex::with_labels(facets, (0..n as u32).collect())
}

fn map_perm(n: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::from_images((0..n).map(|x| f(x) as VertexId).collect()).expect("bijection")
}

/// The series of centrally-symmetric `S^k × S^1` with `2k+6` vertices.
pub fn build_prop4(k: usize) -> (SimplicialComplex, PipelineReport) {
    assert!(k >= 1, "k ≥ 1");
    let n = 2 * k + 6;
    let c = zn_handle_boundary(k, n);
    let mut r = Runner::new(&format!("prop4 k={k}"));
    r.stage("vertices", || {
        check(c.n_vertices() == n && c.dim() == k as isize + 1 && c.is_pseudomanifold(), format!("{} vertices, dimension {}", c.n_vertices(), c.dim()))
    });
    r.stage("1-hamiltonian", || {
        let h = is_k_hamiltonian(&c, Ambient::CrossPolytope, 1).map_err(err)?;
        let want: Vec<(u32, u32)> = (0..(k + 3) as u32).map(|x| (x, x + k as u32 + 3)).collect();
        check(h.hamiltonian && h.matching.as_ref() == Some(&want), format!("diagonals {:?}", h.matching.unwrap_or_default()))
    });
    r.stage("homology", || {
        let q = homology(&c, Coefficients::Q);
        let mut want = vec![0; k + 2];
        for i in [0, 1, k, k + 1] {
            want[i] += 1;
        }
        check(q.betti == want, q.to_string())
    });
    r.stage("manifold", || manifold_stage(&certify_combinatorial_manifold(&c, &FlipConfig::default()), n));
    r.stage("symmetry", || {
        let shift = map_perm(n, |x| (x + 1) % n);
        let reflect = map_perm(n, |x| (n - x) % n);
        let central = shift.pow(k + 3);
        let dihedral = c.is_automorphism(shift.images()) && c.is_automorphism(reflect.images());
        let free = is_fixed_point_free(&central, &c).unwrap_or(false);
        let mut detail = format!("x+1 and -x automorphisms: {dihedral}; x+{} fixed-point-free: {free}", k + 3);
        let mut ok = dihedral && free;
        if k == 1 {
            let order = automorphism_group(&c).order();
            ok &= order == 32;
            detail += &format!("; automorphism group order {order}");
        }
        check(ok, detail)
    });
    r.stage("tightness", || {
        let d: Vec<(VertexId, VertexId)> = (0..(k + 3) as VertexId).map(|x| (x, x + k as VertexId + 3)).collect();
        tightness_stage(Some(certify_tight(&c, Field::Z2, TightMode::Halfspaces(d)).map_err(err)))
    });
    (c, r.finish())
}

#[derive(Debug, Clone, Serialize)]
pub struct BundleReport {
    pub k: usize,
    pub n_vertices: usize,
    pub betti_z2: Vec<usize>,
    pub orientable: bool,
    /// Untwisted product for odd `k`, twisted bundle for even `k`.
    pub expected_orientable: bool,
    pub passed: bool,
}

/// The `Z_{2k+5}`-orbit construction of the minimal `S^k`-bundle over `S^1`.
pub fn build_minimal_bundle(k: usize) -> (SimplicialComplex, BundleReport) {
    assert!(k >= 1, "k ≥ 1");
    let m = 2 * k + 5;
    let c = zn_handle_boundary(k, m);
    let betti_z2 = homology(&c, Coefficients::Z2).betti;
    let mut want = vec![0; k + 2];
    for i in [0, 1, k, k + 1] {
        want[i] += 1;
    }
    let orientable = fundamental_class(&c).is_ok();
    let expected_orientable = k % 2 == 1;
    let passed = c.n_vertices() == m && betti_z2 == want && orientable == expected_orientable;
    (c.clone(), BundleReport { k, n_vertices: c.n_vertices(), betti_z2, orientable, expected_orientable, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prop4_small_cases() {
        for k in 1..=3 {
            let (c, rep) = build_prop4(k);
            assert!(rep.passed, "{rep:?}");
            assert_eq!(c.n_vertices(), 2 * k + 6);
        }
    }

    #[test]
    fn minimal_bundles() {
        for k in 1..=4 {
            let (_, rep) = build_minimal_bundle(k);
            assert!(rep.passed, "{rep:?}");
        }
    }
}
