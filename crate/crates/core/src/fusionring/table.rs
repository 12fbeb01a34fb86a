//! Finite rings given by an explicit multiplication table.
//!
//! ```json
//! {"unit":"1",
//!  "irreps":[{"id":"g","dim":1,"qdim":1,"conj":"g2"},{"id":"g2","dim":1,"conj":"g"}],
//!  "tensor":{"g*g":{"g2":1},"g*g2":{"1":1},"g2*g":{"1":1},"g2*g2":{"g":1}}}
//! ```
//!
//! The unit is added if it is not listed, and products with the unit may be
//! omitted. Any other product that is needed must be present.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Label, RingError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrrepFile {
    pub id: String,
    pub dim: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qdim: Option<f64>,
    /// Defaults to the label itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conj: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingFile {
    pub unit: String,
    pub irreps: Vec<IrrepFile>,
    #[serde(default)]
    pub tensor: BTreeMap<String, BTreeMap<String, u64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub(super) struct Table {
    names: Vec<String>,
    index: HashMap<String, u32>,
    conj: Vec<u32>,
    dim: Vec<f64>,
    qdim: Vec<f64>,
    products: HashMap<(u32, u32), Vec<(Label, u64)>>,
}

impl Table {
    pub(super) fn from_file(file: &RingFile) -> Result<Self, RingError> {
        let schema = |m: String| RingError::Schema(m);
        let mut irreps: Vec<IrrepFile> = Vec::with_capacity(file.irreps.len() + 1);
        match file.irreps.iter().find(|i| i.id == file.unit) {
            Some(u) => irreps.push(u.clone()),
            None => irreps.push(IrrepFile { id: file.unit.clone(), dim: 1.0, qdim: Some(1.0), conj: None }),
        }
        irreps.extend(file.irreps.iter().filter(|i| i.id != file.unit).cloned());

        let mut index = HashMap::new();
        for (i, irr) in irreps.iter().enumerate() {
            if irr.id.is_empty() || irr.id.contains(['*', ',']) {
                return Err(schema(format!("label {:?} must be nonempty without '*' or ','", irr.id)));
            }
            if !(irr.dim.is_finite() && irr.dim > 0.0) {
                return Err(schema(format!("dim of {:?} must be positive", irr.id)));
            }
            if index.insert(irr.id.clone(), i as u32).is_some() {
                return Err(schema(format!("label {:?} listed twice", irr.id)));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| schema(format!("unknown label {s:?}")));
        let conj = irreps
            .iter()
            .enumerate()
            .map(|(i, irr)| irr.conj.as_deref().map_or(Ok(i as u32), lookup))
            .collect::<Result<Vec<_>, _>>()?;
        let dim: Vec<f64> = irreps.iter().map(|i| i.dim).collect();
        let qdim = irreps.iter().map(|i| i.qdim.unwrap_or(i.dim)).collect();

        let mut products = HashMap::new();
        for (key, out) in &file.tensor {
            let (a, b) =
                key.split_once('*').ok_or_else(|| schema(format!("tensor key {key:?} is not of the form a*b")))?;
            let (a, b) = (lookup(a.trim())?, lookup(b.trim())?);
            let mut dec = Vec::new();
            for (c, &m) in out {
                if m > 0 {
                    dec.push((Label(lookup(c.trim())?), m));
                }
            }
            dec.sort_unstable();
            if products.insert((a, b), dec).is_some() {
                return Err(schema(format!("product {key:?} given twice")));
            }
        }
        Ok(Self { names: irreps.into_iter().map(|i| i.id).collect(), index, conj, dim, qdim, products })
    }

    pub(super) fn len(&self) -> usize {
        self.names.len()
    }

    pub(super) fn name(&self, a: Label) -> &str {
        &self.names[a.0 as usize]
    }

    pub(super) fn find(&self, s: &str) -> Option<Label> {
        self.index.get(s).map(|&i| Label(i))
    }

    pub(super) fn conj(&self, a: Label) -> Label {
        Label(self.conj[a.0 as usize])
    }

    pub(super) fn dim(&self, a: Label) -> f64 {
        self.dim[a.0 as usize]
    }

    pub(super) fn qdim(&self, a: Label) -> f64 {
        self.qdim[a.0 as usize]
    }

    pub(super) fn tensor(&self, a: Label, b: Label) -> Option<Vec<(Label, u64)>> {
        if let Some(d) = self.products.get(&(a.0, b.0)) {
            return Some(d.clone());
        }
        if a == Label::UNIT {
            Some(vec![(b, 1)])
        } else if b == Label::UNIT {
            Some(vec![(a, 1)])
        } else {
            None
        }
    }
}
