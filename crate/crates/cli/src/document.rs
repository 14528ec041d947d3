//! The JSON instance format: lattice rank, affine generators, vertices, an
//! optional character table override and optional irreducible labels.
//! Integers are JSON numbers or decimal strings; values beyond 2^53 are
//! always written as strings so no reader loses precision.

use std::str::FromStr;

use num::{BigInt, One, Signed};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use eqehrhart::lattice_group::{CharacterTable, ClassFunction};
use eqehrhart::linalg::{Int, Rat};
use eqehrhart::{AffineLatticeAutomorphism, FiniteMatrixGroup, RationalPolytope};

/// Largest magnitude serialized as a bare JSON number.
const SAFE: i64 = (1i64 << 53) - 1;

/// An integer scalar: JSON number when it fits in the double-exact range,
/// decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntScalar(pub Int);

impl Serialize for IntScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) if v.abs() <= SAFE => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for IntScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        match raw {
            serde_json::Value::Number(n) => {
                let v = n
                    .as_i64()
                    .ok_or_else(|| D::Error::custom(format!("integer expected, got {n}")))?;
                Ok(IntScalar(Int::from(v)))
            }
            serde_json::Value::String(st) => BigInt::from_str(st.trim())
                .map(IntScalar)
                .map_err(|e| D::Error::custom(format!("bad integer string {st:?}: {e}"))),
            other => Err(D::Error::custom(format!(
                "integer expected, got {other}"
            ))),
        }
    }
}

/// A rational scalar: integer form when the denominator is one, the string
/// "p/q" otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatScalar(pub Rat);

impl Serialize for RatScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            IntScalar(self.0.to_integer()).serialize(s)
        } else {
            s.serialize_str(&render_rat(&self.0))
        }
    }
}

impl<'de> Deserialize<'de> for RatScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = serde_json::Value::deserialize(d)?;
        match raw {
            serde_json::Value::Number(n) => {
                let v = n
                    .as_i64()
                    .ok_or_else(|| D::Error::custom(format!("rational expected, got {n}")))?;
                Ok(RatScalar(Rat::from_integer(Int::from(v))))
            }
            serde_json::Value::String(st) => parse_rat(&st)
                .map(RatScalar)
                .map_err(|e| D::Error::custom(format!("bad rational string {st:?}: {e}"))),
            other => Err(D::Error::custom(format!("rational expected, got {other}"))),
        }
    }
}

/// Canonical rendering "p/q" with a reduced positive denominator.
pub fn render_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| e.to_string())?;
        let q = BigInt::from_str(q.trim()).map_err(|e| e.to_string())?;
        if q == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        Ok(Rat::new(p, q))
    } else {
        BigInt::from_str(s)
            .map(Rat::from_integer)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeneratorDoc {
    pub matrix: Vec<Vec<IntScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<IntScalar>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceDocument {
    pub lattice_rank: usize,
    pub generators: Vec<GeneratorDoc>,
    pub vertices: Vec<Vec<RatScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character_table: Option<Vec<Vec<RatScalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl InstanceDocument {
    pub fn from_parts(
        polytope: &RationalPolytope,
        group: &FiniteMatrixGroup,
        labels: Option<Vec<String>>,
    ) -> Self {
        let generators = group
            .elements()
            .iter()
            .filter(|g| **g != AffineLatticeAutomorphism::identity(group.dim()))
            .map(|g| GeneratorDoc {
                matrix: g
                    .linear
                    .iter()
                    .map(|row| row.iter().cloned().map(IntScalar).collect())
                    .collect(),
                translation: if g.translation.iter().all(|w| *w == Int::from(0)) {
                    None
                } else {
                    Some(g.translation.iter().cloned().map(IntScalar).collect())
                },
            })
            .collect();
        let vertices = polytope
            .vertices()
            .iter()
            .map(|v| v.iter().cloned().map(RatScalar).collect())
            .collect();
        InstanceDocument {
            lattice_rank: polytope.ambient(),
            generators,
            vertices,
            character_table: None,
            labels,
        }
    }

    /// Build the polytope and group, with field-level diagnostics.
    pub fn to_parts(&self, cap: usize) -> Result<(RationalPolytope, FiniteMatrixGroup), String> {
        let d = self.lattice_rank;
        if d == 0 {
            return Err("lattice_rank must be positive".into());
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if g.matrix.len() != d || g.matrix.iter().any(|row| row.len() != d) {
                return Err(format!(
                    "generators[{i}].matrix is not {d}x{d}"
                ));
            }
            let linear: Vec<Vec<Int>> = g
                .matrix
                .iter()
                .map(|row| row.iter().map(|x| x.0.clone()).collect())
                .collect();
            let translation: Vec<Int> = match &g.translation {
                Some(w) => {
                    if w.len() != d {
                        return Err(format!(
                            "generators[{i}].translation has length {}, expected {d}",
                            w.len()
                        ));
                    }
                    w.iter().map(|x| x.0.clone()).collect()
                }
                None => vec![Int::from(0); d],
            };
            let det = {
                let a = AffineLatticeAutomorphism::new(linear.clone(), translation.clone());
                a.det()
            };
            if !det.clone().abs().is_one() {
                return Err(format!(
                    "generators[{i}].matrix has determinant {det}, not a lattice automorphism"
                ));
            }
            gens.push(AffineLatticeAutomorphism::new(linear, translation));
        }
        let group = FiniteMatrixGroup::generate(&gens, d, cap)
            .map_err(|e| format!("generators: {e}"))?;
        if self.vertices.is_empty() {
            return Err("vertices must be nonempty".into());
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != d {
                return Err(format!("vertices[{i}] has length {}, expected {d}", v.len()));
            }
        }
        let points: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.0.clone()).collect())
            .collect();
        let polytope = RationalPolytope::from_points(d, &points);
        Ok((polytope, group))
    }

    /// The embedded character table override, rows in the group's class
    /// order.
    pub fn table_override(&self, group: &FiniteMatrixGroup) -> Result<Option<CharacterTable>, String> {
        let Some(rows) = &self.character_table else {
            return Ok(None);
        };
        build_table(rows, group).map(Some)
    }
}

/// A rational-valued character table from rows of class values.
pub fn build_table(
    rows: &[Vec<RatScalar>],
    group: &FiniteMatrixGroup,
) -> Result<CharacterTable, String> {
    let nc = group.num_classes();
    if rows.len() != nc {
        return Err(format!(
            "character_table has {} rows, expected one per class ({nc})",
            rows.len()
        ));
    }
    let mut irreducibles = Vec::with_capacity(nc);
    let mut degrees = Vec::with_capacity(nc);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != nc {
            return Err(format!(
                "character_table[{i}] has {} entries, expected {nc}",
                row.len()
            ));
        }
        let f = ClassFunction::from_rationals(group, row.iter().map(|x| x.0.clone()).collect());
        let deg = f
            .value_at_identity()
            .as_rational()
            .filter(|r| r.is_integer())
            .ok_or_else(|| format!("character_table[{i}] has a non-integral degree"))?;
        degrees.push(
            usize::try_from(deg.to_integer())
                .map_err(|_| format!("character_table[{i}] has a negative degree"))?,
        );
        irreducibles.push(f);
    }
    let table = CharacterTable {
        irreducibles,
        class_sizes: group.class_sizes(),
        degrees,
    };
    if !table.verify_orthonormality() {
        return Err("character_table rows are not orthonormal".into());
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use eqehrhart::gallery;

    fn round_trip(name: &str) {
        let inst = gallery::instance_by_name(name).unwrap();
        let doc = InstanceDocument::from_parts(&inst.polytope, &inst.group, None);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let parsed: InstanceDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, doc, "{name}: document survives the JSON round trip");
        let (p, g) = parsed.to_parts(10_000).unwrap();
        assert_eq!(p.vertices(), inst.polytope.vertices(), "{name}: vertices");
        assert_eq!(g.order(), inst.group.order(), "{name}: group order");
        for e in inst.group.elements() {
            assert!(g.element_index(e).is_some(), "{name}: elements coincide");
        }
    }

    #[test]
    fn gallery_documents_round_trip() {
        for name in [
            "hexagon-z6",
            "bad-square-z2",
            "bad-reflexive-z2",
            "hypercube-sym-3",
            "hypercube-b-2",
            "cross-2-2",
            "simplex-2",
            "simplex-orbit-3",
            "pip-2",
        ] {
            round_trip(name);
        }
    }

    #[test]
    fn large_integers_become_strings() {
        let big = IntScalar(Int::from(1i64 << 60));
        let text = serde_json::to_string(&big).unwrap();
        assert_eq!(text, "\"1152921504606846976\"");
        let back: IntScalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, big);
        let small: IntScalar = serde_json::from_str("-7").unwrap();
        assert_eq!(small.0, Int::from(-7));
    }

    #[test]
    fn rationals_render_canonically() {
        let r = RatScalar(Rat::new(Int::from(3), Int::from(-6)));
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, "\"-1/2\"");
        let back: RatScalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn diagnostics_name_the_bad_field() {
        let doc: InstanceDocument = serde_json::from_str(
            r#"{"lattice_rank": 2, "generators": [{"matrix": [[1, 0]]}], "vertices": [[0, 0]]}"#,
        )
        .unwrap();
        let err = doc.to_parts(100).unwrap_err();
        assert!(err.contains("generators[0]"), "{err}");
    }
}
