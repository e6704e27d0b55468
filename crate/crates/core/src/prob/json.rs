//! JSON form of a joint table:
//! `{"axes": [{"name": "X", "symbols": ["0","1"]}, ...], "table": [[...], ...]}`
//! with `table` nested in axis order.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

use super::{Axis, JointPmf};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AxisJson {
    name: String,
    symbols: super::Alphabet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PmfJson {
    axes: Vec<AxisJson>,
    table: Value,
}

fn flatten(v: &Value, shape: &[usize], out: &mut Vec<f64>) -> Result<()> {
    match shape.split_first() {
        None => {
            let x = v
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("expected a number, found {v}")))?;
            out.push(x);
            Ok(())
        }
        Some((&k, rest)) => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::Parse(format!("expected an array of length {k}")))?;
            if arr.len() != k {
                return Err(Error::ShapeMismatch {
                    expected: k,
                    got: arr.len(),
                });
            }
            arr.iter().try_for_each(|e| flatten(e, rest, out))
        }
    }
}

fn nest(flat: &[f64], shape: &[usize]) -> Value {
    match shape.split_first() {
        None => serde_json::json!(flat[0]),
        Some((&k, rest)) => {
            let stride = flat.len() / k;
            Value::Array(
                (0..k)
                    .map(|i| nest(&flat[i * stride..(i + 1) * stride], rest))
                    .collect(),
            )
        }
    }
}

impl PmfJson {
    pub fn into_pmf(self) -> Result<JointPmf<f64>> {
        let axes: Vec<Axis> = self
            .axes
            .into_iter()
            .map(|a| Axis::new(a.name, a.symbols))
            .collect();
        let shape: Vec<usize> = axes.iter().map(Axis::size).collect();
        let mut flat = Vec::new();
        flatten(&self.table, &shape, &mut flat)?;
        JointPmf::new(axes, flat)
    }

    pub fn from_pmf(p: &JointPmf<f64>) -> Self {
        PmfJson {
            axes: p
                .axes()
                .iter()
                .map(|a| AxisJson {
                    name: a.name.clone(),
                    symbols: a.alphabet.clone(),
                })
                .collect(),
            table: nest(p.table(), &p.shape()),
        }
    }
}

pub fn pmf_from_value(v: Value) -> Result<JointPmf<f64>> {
    serde_json::from_value::<PmfJson>(v)?.into_pmf()
}

pub fn pmf_from_str(s: &str) -> Result<JointPmf<f64>> {
    serde_json::from_str::<PmfJson>(s)?.into_pmf()
}

pub fn pmf_to_value(p: &JointPmf<f64>) -> Value {
    serde_json::to_value(PmfJson::from_pmf(p)).expect("pmf serializes")
}

pub fn pmf_to_string(p: &JointPmf<f64>) -> String {
    serde_json::to_string_pretty(&PmfJson::from_pmf(p)).expect("pmf serializes")
}
