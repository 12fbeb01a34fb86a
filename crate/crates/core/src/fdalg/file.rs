//! JSON form of algebra and quantum graph descriptions.
//!
//! ```json
//! {"blocks":[{"size":2,"q":["1/2","1/2"]}],"normalize":false}
//! ```
//!
//! A quantum graph adds `"d"`, a row-major matrix in the matrix-unit basis.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlgebraSpec, FdAlgError, MatrixBlock, QuantumGraph};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockFile {
    pub size: usize,
    pub q: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub blocks: Vec<BlockFile>,
    #[serde(default)]
    pub normalize: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<f64>>>,
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational, FdAlgError> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| FdAlgError::Parse(format!("bad rational {s:?}")))
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self, FdAlgError> {
        serde_json::from_str(text).map_err(|e| FdAlgError::Parse(e.to_string()))
    }

    pub fn to_spec(&self) -> Result<AlgebraSpec, FdAlgError> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let q = b.q.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>()?;
                Ok(MatrixBlock::new(b.size, q))
            })
            .collect::<Result<Vec<_>, FdAlgError>>()?;
        AlgebraSpec::new(blocks, self.normalize)
    }

    /// The quantum graph, if `d` is present.
    pub fn to_graph(&self) -> Result<Option<QuantumGraph>, FdAlgError> {
        let Some(rows) = &self.d else { return Ok(None) };
        let spec = self.to_spec()?;
        QuantumGraph::from_matrix_units(spec, rows).map(Some)
    }

    pub fn from_spec(a: &AlgebraSpec) -> Self {
        let blocks = a
            .blocks()
            .iter()
            .map(|b| BlockFile { size: b.size, q: b.q.iter().map(|x| x.to_string()).collect() })
            .collect();
        Self { blocks, normalize: false, d: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdalg::rat;

    #[test]
    fn parses_m2() {
        let f = AlgebraFile::from_json(r#"{"blocks":[{"size":2,"q":["1/2","1/2"]}],"normalize":false}"#).unwrap();
        let a = f.to_spec().unwrap();
        assert_eq!(a.delta(), Some(&rat(4, 1)));
        assert!(f.to_graph().unwrap().is_none());
        assert_eq!(AlgebraFile::from_spec(&a).to_spec().unwrap(), a);
    }

    #[test]
    fn normalize_defaults_off() {
        let f = AlgebraFile::from_json(r#"{"blocks":[{"size":1,"q":["1"]},{"size":1,"q":["1"]}]}"#).unwrap();
        assert!(matches!(f.to_spec(), Err(FdAlgError::NotAState(_))));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(AlgebraFile::from_json("{").is_err());
        assert_eq!(parse_rational(" 3/6 ").unwrap(), rat(1, 2));
    }
}
