//! Input documents: one algebra given by structure constants and any number
//! of named endomorphisms of it.
//!
//! Indices are 1-based. A bracket entry `{i, j, terms}` lists the terms
//! `c e_k` of `[e_i, e_j]` and needs `i < j`; entries with `i == j` are
//! dropped with a warning. Matrices use the columns-as-images convention:
//! `matrix[i][j]` is the coefficient of `e_i` in `phi(e_j)`.

use std::collections::BTreeMap;
use std::fmt;

use nilqi_core::endomorphism::{carnot_complete, Endomorphism};
use nilqi_core::lie_algebra::{GradedAlgebra, StructureConstants};
use nilqi_core::matrix::Matrix;
use nilqi_core::scalar::{format_rational, parse_rational};
use nilqi_core::Rational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// A rational written as `"p"`, `"p/q"` or a bare JSON integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDoc(pub Rational);

impl Serialize for RationalDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalDoc;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p\" or \"p/q\", or an integer")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<RationalDoc, E> {
                parse_rational(s).map(RationalDoc).ok_or_else(|| E::custom(format!("invalid rational {:?}", s)))
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> Result<RationalDoc, E> {
                Ok(RationalDoc(Rational::from_integer(n.into())))
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> Result<RationalDoc, E> {
                Ok(RationalDoc(Rational::from_integer(n.into())))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub algebra: AlgebraDoc,
    #[serde(default)]
    pub endomorphisms: BTreeMap<String, EndomorphismDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub k: usize,
    pub c: RationalDoc,
}

/// Exactly one of `matrix` (full map) or `base_action` (action on the degree
/// one generators, extended to a homomorphism).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndomorphismDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<RationalDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_action: Option<Vec<Vec<RationalDoc>>>,
}

pub fn parse_document(text: &str) -> Result<InputDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

/// A parsed document whose bracket table has been built but not yet
/// checked for nilpotency or triangularity.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub sc: StructureConstants,
    pub basis_names: Vec<String>,
    pub declared_weights: Option<Vec<u32>>,
    pub warnings: Vec<String>,
    pub endomorphisms: BTreeMap<String, EndomorphismDoc>,
}

pub fn load(doc: InputDocument) -> Result<Loaded, CliError> {
    let a = doc.algebra;
    let n = a.dim;
    let index = |what: &str, v: usize| {
        if v == 0 || v > n {
            Err(CliError::Parse(format!("{} index {} outside 1..={}", what, v, n)))
        } else {
            Ok(v - 1)
        }
    };
    let mut sc = StructureConstants::new(n);
    let mut warnings = Vec::new();
    for b in &a.brackets {
        let (i, j) = (index("bracket", b.i)?, index("bracket", b.j)?);
        if i == j {
            warnings.push(format!("ignoring [e{0}, e{0}]: zero by antisymmetry", b.i));
            continue;
        }
        if i > j {
            return Err(CliError::Parse(format!("bracket entry ({}, {}) must have i < j", b.i, b.j)));
        }
        for t in &b.terms {
            let k = index("term", t.k)?;
            sc.add_term(i, j, k, t.c.0.clone())?;
        }
    }
    if let Some(w) = &a.weights {
        if w.len() != n {
            return Err(CliError::Parse(format!("{} weights given for dimension {}", w.len(), n)));
        }
    }
    let basis_names = match a.basis_names {
        Some(names) if names.len() != n => {
            return Err(CliError::Parse(format!("{} basis names given for dimension {}", names.len(), n)));
        }
        Some(names) => names,
        None => (1..=n).map(|k| format!("e{}", k)).collect(),
    };
    Ok(Loaded {
        name: a.name,
        sc,
        basis_names,
        declared_weights: a.weights,
        warnings,
        endomorphisms: doc.endomorphisms,
    })
}

fn to_matrix(rows: &[Vec<RationalDoc>], n: usize, what: &str) -> Result<Matrix, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse(format!("{} must be {}x{}", what, n, n)));
    }
    Ok(Matrix::from_rows(rows.iter().map(|r| r.iter().map(|c| c.0.clone()).collect()).collect())?)
}

impl Loaded {
    pub fn algebra(&self) -> Result<GradedAlgebra, CliError> {
        let g = match &self.declared_weights {
            Some(w) => GradedAlgebra::with_declared_weights(self.sc.clone(), w)?,
            None => GradedAlgebra::new(self.sc.clone())?,
        };
        Ok(g)
    }

    pub fn endomorphism(&self, name: &str) -> Result<Endomorphism, CliError> {
        let doc = self.endomorphisms.get(name).ok_or_else(|| CliError::UnknownEndomorphism {
            name: name.to_string(),
            available: self.endomorphisms.keys().cloned().collect::<Vec<_>>().join(", "),
        })?;
        let g = self.algebra()?;
        match (&doc.matrix, &doc.base_action) {
            (Some(m), None) => Ok(Endomorphism::new(g.clone(), to_matrix(m, g.dim(), "matrix")?)?),
            (None, Some(b)) => {
                let b = to_matrix(b, g.grade(1).len(), "base_action")?;
                Ok(carnot_complete(&g, &b)?)
            }
            _ => Err(CliError::Parse(format!("endomorphism {:?} needs exactly one of matrix or base_action", name))),
        }
    }
}
