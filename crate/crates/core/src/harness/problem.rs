//! Problem files: a target table plus optional auxiliary channel.
//!
//! Point-to-point:
//! `{"target": <pmf over X,Y,Z>, "aux": {"w_symbols", "p_w_given_x", "p_y_given_zw"}, "search": {...}}`
//!
//! Distributed:
//! `{"target": <pmf over X1,X2,Y>, "aux": {"q_symbols", "p_q", "w1_symbols", "w2_symbols",
//! "p_w1_given_qx1", "p_w2_given_qx2", "p_y_given_qw1w2", "w_within_x", "q_cap"}}`

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::prob::json::{pmf_from_value, pmf_to_value};
use crate::prob::{Alphabet, JointPmf};
use crate::region::dist::{AuxChannelDist, DistLimits, DEFAULT_Q_CAP};
use crate::region::frontier::{aux_from_json, aux_to_json, SearchConfig};
use crate::region::ptp::{canonical_target, AuxChannelPtp};

#[derive(Debug, Clone)]
pub struct PtpProblem {
    pub target: JointPmf<f64>,
    pub aux: Option<AuxChannelPtp<f64>>,
    pub search: SearchConfig,
}

impl PtpProblem {
    pub fn from_value(v: &Value) -> Result<Self> {
        let target = canonical_target(&pmf_from_value(field(v, "target")?.clone())?)?;
        let aux = match v.get("aux") {
            Some(a) if !a.is_null() => Some(aux_from_json(&target, a)?),
            _ => None,
        };
        let search = match v.get("search") {
            Some(s) => serde_json::from_value(s.clone())?,
            None => SearchConfig::default(),
        };
        Ok(PtpProblem {
            target,
            aux,
            search,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut v = serde_json::json!({ "target": pmf_to_value(&self.target) });
        if let Some(a) = &self.aux {
            v["aux"] = aux_to_json(a);
        }
        v["search"] = serde_json::to_value(&self.search).expect("search config serializes");
        v
    }

    /// The auxiliary channel, required by the codec.
    pub fn require_aux(&self) -> Result<&AuxChannelPtp<f64>> {
        self.aux
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("problem has no `aux` channel".into()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DistAuxJson {
    #[serde(default = "single")]
    q_symbols: Vec<String>,
    #[serde(default = "unit")]
    p_q: Vec<f64>,
    w1_symbols: Vec<String>,
    w2_symbols: Vec<String>,
    p_w1_given_qx1: Vec<Vec<f64>>,
    p_w2_given_qx2: Vec<Vec<f64>>,
    p_y_given_qw1w2: Vec<Vec<f64>>,
    #[serde(default = "yes")]
    w_within_x: bool,
    #[serde(default = "q_cap")]
    q_cap: usize,
}

fn single() -> Vec<String> {
    vec!["0".into()]
}

fn unit() -> Vec<f64> {
    vec![1.0]
}

fn yes() -> bool {
    true
}

fn q_cap() -> usize {
    DEFAULT_Q_CAP
}

#[derive(Debug, Clone)]
pub struct DistProblem {
    pub target: JointPmf<f64>,
    pub aux: Option<AuxChannelDist<f64>>,
}

impl DistProblem {
    pub fn from_value(v: &Value) -> Result<Self> {
        let target = pmf_from_value(field(v, "target")?.clone())?.reorder(&["X1", "X2", "Y"])?;
        let aux = match v.get("aux") {
            Some(a) if !a.is_null() => Some(dist_aux_from_json(&target, a)?),
            _ => None,
        };
        Ok(DistProblem { target, aux })
    }

    pub fn to_value(&self) -> Value {
        let mut v = serde_json::json!({ "target": pmf_to_value(&self.target) });
        if let Some(a) = &self.aux {
            v["aux"] = dist_aux_to_json(a);
        }
        v
    }

    pub fn require_aux(&self) -> Result<&AuxChannelDist<f64>> {
        self.aux
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("problem has no `aux` channel".into()))
    }
}

pub fn dist_aux_from_json(target: &JointPmf<f64>, v: &Value) -> Result<AuxChannelDist<f64>> {
    let raw: DistAuxJson = serde_json::from_value(v.clone())?;
    AuxChannelDist::new(
        target,
        Alphabet::new(raw.q_symbols)?,
        raw.p_q,
        Alphabet::new(raw.w1_symbols)?,
        Alphabet::new(raw.w2_symbols)?,
        raw.p_w1_given_qx1,
        raw.p_w2_given_qx2,
        raw.p_y_given_qw1w2,
        DistLimits {
            w_within_x: raw.w_within_x,
            q_cap: raw.q_cap,
        },
    )
}

pub fn dist_aux_to_json(aux: &AuxChannelDist<f64>) -> Value {
    let rows = |c: &crate::prob::CondPmf<f64>| -> Vec<Vec<f64>> {
        (0..c.given_len())
            .map(|g| c.row(g).map(|r| r.to_vec()).unwrap_or_default())
            .collect()
    };
    let raw = DistAuxJson {
        q_symbols: aux.q_alphabet().symbols().to_vec(),
        p_q: aux.p_q().to_vec(),
        w1_symbols: aux.w1_axis().alphabet.symbols().to_vec(),
        w2_symbols: aux.w2_axis().alphabet.symbols().to_vec(),
        p_w1_given_qx1: rows(aux.p_w1_given_qx1()),
        p_w2_given_qx2: rows(aux.p_w2_given_qx2()),
        p_y_given_qw1w2: rows(aux.p_y_given_qw1w2()),
        w_within_x: false,
        q_cap: aux.q_size().max(DEFAULT_Q_CAP),
    };
    serde_json::to_value(raw).expect("aux serializes")
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field `{name}`")))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
