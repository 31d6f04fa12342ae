//! Embedded reference data with integrity checksums.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{parse_facet_list, Simplex, SimplicialComplex, VertexId};
use crate::perm::{PermError, PermGroup, Permutation};

pub const THEOREM2_FACETS: &str = include_str!("../../fixtures/theorem2_facets.txt");
pub const THEOREM2_LINK16: &str = include_str!("../../fixtures/theorem2_link16.txt");
pub const THEOREM2_GROUP: &str = include_str!("../../fixtures/theorem2_group.txt");
pub const CELL24_TYPES: &str = include_str!("../../fixtures/cell24_types.txt");
pub const CELL24_TYPE6: &str = include_str!("../../fixtures/cell24_type6.txt");
pub const REMARK2: &str = include_str!("../../fixtures/remark2.txt");

/// `(name, contents, sha256)` of every embedded fixture.
pub const FIXTURES: [(&str, &str, &str); 6] = [
    ("theorem2_facets", THEOREM2_FACETS, "5281bf3b77e530ad4ebe227a2df061b7bdfd8b110ba1e65a18516bd235dca894"),
    ("theorem2_link16", THEOREM2_LINK16, "2ce516c98c194e8f951f3e706187be68fe55ba8840f11ae2290386d402b3b0d6"),
    ("theorem2_group", THEOREM2_GROUP, "1867cf5990643bc3fc50a73f9d809e84c20c03cedfec348a0950b047127b597f"),
    ("cell24_types", CELL24_TYPES, "a903da36c91833c6c9e3b8a2ff2a0d9a6ec1733d596b297182f2a3167d164311"),
    ("cell24_type6", CELL24_TYPE6, "cd1d8f2a93f973e90ba969a13f17add85707145c2145385be6b2cbb46d4aac93"),
    ("remark2", REMARK2, "4b33f6d6f45d6f9f2003d6ad6ddd4cee2426abab7ab6fc31b5803fccda4ad0f9"),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("fixture {name}: checksum {found} does not match {expected}")]
    Checksum { name: String, expected: String, found: String },
    #[error("fixture {0}: {1}")]
    Malformed(String, String),
    #[error("fixture {0}: {1}")]
    Perm(String, PermError),
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn verify_checksums() -> Result<(), FixtureError> {
    for (name, text, expected) in FIXTURES {
        let found = sha256_hex(text);
        if found != expected {
            return Err(FixtureError::Checksum { name: name.into(), expected: expected.into(), found });
        }
    }
    Ok(())
}

fn malformed(name: &str, msg: impl Into<String>) -> FixtureError {
    FixtureError::Malformed(name.into(), msg.into())
}

fn lines(text: &str) -> impl Iterator<Item = (&str, &str)> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_once(' ').unwrap_or((l, "")))
}

fn numbers(name: &str, s: &str) -> Result<Vec<u32>, FixtureError> {
    s.split_whitespace().map(|t| t.parse().map_err(|_| malformed(name, format!("bad number {t:?}")))).collect()
}

/// A simplex seed (1-based labels) and its expected orbit length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSeed {
    pub labels: Vec<u32>,
    pub length: usize,
}

impl OrbitSeed {
    pub fn simplex(&self) -> Simplex {
        Simplex::new(self.labels.iter().map(|&l| l as VertexId - 1).collect()).expect("distinct labels")
    }
}

fn seed(name: &str, rest: &str) -> Result<OrbitSeed, FixtureError> {
    let mut n = numbers(name, rest)?;
    let length = n.pop().ok_or_else(|| malformed(name, "empty orbit line"))? as usize;
    Ok(OrbitSeed { labels: n, length })
}

/// The 16-vertex complex, labels 1–16.
pub fn theorem2_complex() -> SimplicialComplex {
    parse_facet_list(THEOREM2_FACETS).expect("embedded fixture parses").0
}

pub fn theorem2_link16() -> SimplicialComplex {
    parse_facet_list(THEOREM2_LINK16).expect("embedded fixture parses").0
}

pub fn cell24_type6() -> SimplicialComplex {
    parse_facet_list(CELL24_TYPE6).expect("embedded fixture parses").0
}

#[derive(Debug, Clone)]
pub struct Theorem2Data {
    pub alpha: Permutation,
    /// As given; `Err` because it is not a permutation.
    pub beta: Result<Permutation, PermError>,
    pub gamma: Permutation,
    pub zeta: Permutation,
    pub delta: Permutation,
    pub orbits: Vec<OrbitSeed>,
    pub cycles: Vec<Vec<u32>>,
}

pub fn theorem2_data() -> Result<Theorem2Data, FixtureError> {
    const NAME: &str = "theorem2_group";
    let mut perms = std::collections::HashMap::new();
    let (mut orbits, mut cycles) = (Vec::new(), Vec::new());
    for (key, rest) in lines(THEOREM2_GROUP) {
        match key {
            "orbit" => orbits.push(seed(NAME, rest)?),
            "cycle" => cycles.push(numbers(NAME, rest)?),
            _ => {
                perms.insert(key.to_string(), Permutation::parse_cycles(rest, 16));
            }
        }
    }
    let mut take = |k: &str| perms.remove(k).ok_or_else(|| malformed(NAME, format!("missing {k}")));
    let ok = |r: Result<Permutation, PermError>| r.map_err(|e| FixtureError::Perm(NAME.into(), e));
    Ok(Theorem2Data {
        alpha: ok(take("alpha")?)?,
        beta: take("beta")?,
        gamma: ok(take("gamma")?)?,
        zeta: ok(take("zeta")?)?,
        delta: ok(take("delta")?)?,
        orbits,
        cycles,
    })
}

#[derive(Debug, Clone)]
pub struct PinchedType {
    pub id: usize,
    pub group_order: u128,
    pub pinch_points: usize,
    pub genus: i64,
    pub generators: Vec<Permutation>,
    pub orbits: Vec<OrbitSeed>,
}

impl PinchedType {
    pub fn group(&self) -> PermGroup {
        PermGroup::new(24, self.generators.clone()).expect("degree 24")
    }
}

pub fn cell24_types() -> Result<Vec<PinchedType>, FixtureError> {
    const NAME: &str = "cell24_types";
    let mut out: Vec<PinchedType> = Vec::new();
    for (key, rest) in lines(CELL24_TYPES) {
        match key {
            "type" => {
                let f: Vec<&str> = rest.split_whitespace().collect();
                let field = |k: &str| -> Result<i64, FixtureError> {
                    let i = f.iter().position(|&t| t == k).ok_or_else(|| malformed(NAME, format!("missing {k}")))?;
                    f.get(i + 1).and_then(|t| t.parse().ok()).ok_or_else(|| malformed(NAME, format!("bad {k}")))
                };
                out.push(PinchedType {
                    id: f.first().and_then(|t| t.parse().ok()).ok_or_else(|| malformed(NAME, "bad type id"))?,
                    group_order: field("order")? as u128,
                    pinch_points: field("pinch")? as usize,
                    genus: field("genus")?,
                    generators: Vec::new(),
                    orbits: Vec::new(),
                });
            }
            "gen" => {
                let t = out.last_mut().ok_or_else(|| malformed(NAME, "gen before type"))?;
                t.generators.push(Permutation::parse_cycles(rest, 24).map_err(|e| FixtureError::Perm(NAME.into(), e))?);
            }
            "orbit" => {
                let t = out.last_mut().ok_or_else(|| malformed(NAME, "orbit before type"))?;
                t.orbits.push(seed(NAME, rest)?);
            }
            other => return Err(malformed(NAME, format!("unknown key {other:?}"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Remark2Data {
    pub generators: Vec<Permutation>,
    pub involution: Permutation,
    pub orbits: Vec<OrbitSeed>,
}

pub fn remark2_data() -> Result<Remark2Data, FixtureError> {
    const NAME: &str = "remark2";
    let perm = |s: &str| Permutation::parse_cycles(s, 22).map_err(|e| FixtureError::Perm(NAME.into(), e));
    let (mut generators, mut involution, mut orbits) = (Vec::new(), None, Vec::new());
    for (key, rest) in lines(REMARK2) {
        match key {
            "gen" => generators.push(perm(rest)?),
            "involution" => involution = Some(perm(rest)?),
            "orbit" => orbits.push(seed(NAME, rest)?),
            other => return Err(malformed(NAME, format!("unknown key {other:?}"))),
        }
    }
    Ok(Remark2Data { generators, involution: involution.ok_or_else(|| malformed(NAME, "missing involution"))?, orbits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksums_hold() {
        verify_checksums().unwrap();
    }

    #[test]
    fn facet_list_integrity() {
        let k = theorem2_complex();
        assert_eq!(k.facets().len(), 224);
        let mut labels = k.labels().to_vec();
        labels.sort_unstable();
        assert_eq!(labels, (1..=16).collect::<Vec<_>>());
        let raw = THEOREM2_FACETS.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).count();
        assert_eq!(raw, 224, "no duplicate facets");
    }

    #[test]
    fn parsed_data() {
        let t = theorem2_data().unwrap();
        assert!(t.beta.is_err());
        assert_eq!(t.orbits.iter().map(|o| o.length).sum::<usize>(), 224);
        let types = cell24_types().unwrap();
        assert_eq!(types.len(), 6);
        for t in &types {
            assert_eq!(t.orbits.iter().map(|o| o.length).sum::<usize>(), 64, "type {}", t.id);
        }
        let r = remark2_data().unwrap();
        assert_eq!(r.orbits.iter().map(|o| o.length).sum::<usize>(), 572);
    }
}
