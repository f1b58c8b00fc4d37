//! The JSON instance format: a prime `q`, a poset given by labels and cover
//! pairs, a rational weight and a block dimension per label.
//!
//! ```json
//! {
//!   "q": 2,
//!   "poset": { "elements": ["a", "b", "c"], "covers": [["a", "b"]] },
//!   "omega": { "a": "1", "b": "3/2", "c": "1" },
//!   "dims": { "a": 1, "b": 2, "c": 1 }
//! }
//! ```
//!
//! Missing `omega` entries default to `1`, missing `dims` entries to `1`.
//! Weights are strings so they parse exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poset::{Poset, WeightFunction};
use crate::space::AmbientSpace;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

/// The instance as written in the file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub q: u32,
    pub poset: PosetSpec,
    #[serde(default)]
    pub omega: BTreeMap<String, String>,
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
}

/// A validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub poset: Poset,
    pub omega: WeightFunction,
    pub space: AmbientSpace,
    /// The normalized file: every label has an explicit weight and
    /// dimension, weights in lowest terms.
    pub normalized: InstanceFile,
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i64 = n.parse().map_err(|_| Error::Parse(format!("`{text}` is not a rational of the form n/d")))?;
    let d: i64 = d.parse().map_err(|_| Error::Parse(format!("`{text}` is not a rational of the form n/d")))?;
    if d == 0 {
        return Err(Error::Parse(format!("`{text}` has a zero denominator")));
    }
    Ok(Rational::new(n, d))
}

fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Instance::from_file(file)
    }

    pub fn from_file(file: InstanceFile) -> Result<Instance> {
        let poset = Poset::from_cover_labels(file.poset.elements.clone(), &file.poset.covers)?;
        for label in file.omega.keys().chain(file.dims.keys()) {
            poset.index_of(label)?;
        }
        let values = poset
            .labels()
            .iter()
            .map(|l| file.omega.get(l).map_or(Ok(Rational::from_integer(1)), |s| parse_rational(s)))
            .collect::<Result<Vec<_>>>()?;
        let omega = WeightFunction::new(values)?;
        let dims: Vec<usize> = poset.labels().iter().map(|l| file.dims.get(l).copied().unwrap_or(1)).collect();
        let space = AmbientSpace::new(file.q, dims)?;
        let mut covers = file.poset.covers.clone();
        covers.sort();
        covers.dedup();
        let normalized = InstanceFile {
            q: file.q,
            poset: PosetSpec {
                elements: file.poset.elements.clone(),
                covers,
            },
            omega: poset
                .labels()
                .iter()
                .zip(omega.values())
                .map(|(l, v)| (l.clone(), format_rational(v)))
                .collect(),
            dims: poset.labels().iter().cloned().zip(space.dims().iter().copied()).collect(),
        };
        Ok(Instance {
            poset,
            omega,
            space,
            normalized,
        })
    }

    /// Builds an instance from library values, labelling as the poset does.
    pub fn from_parts(q: u32, poset: Poset, omega: WeightFunction, dims: Vec<usize>) -> Result<Instance> {
        let labels = poset.labels().to_vec();
        if omega.len() != labels.len() || dims.len() != labels.len() {
            return Err(Error::Validation("weights and dimensions must cover every element".into()));
        }
        let file = InstanceFile {
            q,
            poset: PosetSpec {
                elements: labels.clone(),
                covers: poset
                    .covers()
                    .into_iter()
                    .map(|(a, b)| (labels[a].clone(), labels[b].clone()))
                    .collect(),
            },
            omega: labels.iter().cloned().zip(omega.values().iter().map(format_rational)).collect(),
            dims: labels.iter().cloned().zip(dims).collect(),
        };
        Instance::from_file(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.normalized).expect("instance serializes")
    }

    /// SHA-256 of the normalized instance, so equivalent files share it.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(&self.normalized).expect("instance serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
