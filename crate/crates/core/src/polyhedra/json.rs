//! JSON form of a linear system; every number is a rational string such as
//! `"3/4"` or `"-2"`, so round trips are bit-exact.
//!
//! ```json
//! {"variables": ["R", "C", "Rt"], "constants": ["I_XW"], "defaults": {},
//!  "rows": [{"coeffs": ["0","0","1"], "consts": ["1"], "offset": "0", "label": ""}]}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Exact;

use super::{LinIneqSystem, Projection, Row, Step};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RowJson {
    coeffs: Vec<String>,
    consts: Vec<String>,
    offset: String,
    #[serde(default)]
    label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemJson {
    variables: Vec<String>,
    constants: Vec<String>,
    #[serde(default)]
    defaults: BTreeMap<String, String>,
    rows: Vec<RowJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StepJson {
    variable: String,
    rows_in: usize,
    positive: usize,
    negative: usize,
    passed: usize,
    rows_out: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProjectionJson {
    eliminated: Vec<String>,
    steps: Vec<StepJson>,
    contradictions: Vec<usize>,
    system: SystemJson,
}

fn parse<T: Exact>(s: &str) -> Result<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("not a rational number: `{s}`")))
}

fn show<T: Exact>(v: &T) -> String {
    v.to_string()
}

impl SystemJson {
    pub fn from_system<T: Exact>(s: &LinIneqSystem<T>) -> Self {
        SystemJson {
            variables: s.variables.clone(),
            constants: s.constants.clone(),
            defaults: s
                .defaults
                .iter()
                .map(|(k, v)| (k.clone(), show(v)))
                .collect(),
            rows: s
                .rows
                .iter()
                .zip(&s.labels)
                .map(|(r, l)| RowJson {
                    coeffs: r.coeffs.iter().map(show).collect(),
                    consts: r.consts.iter().map(show).collect(),
                    offset: show(&r.offset),
                    label: l.clone(),
                })
                .collect(),
        }
    }

    pub fn into_system<T: Exact>(self) -> Result<LinIneqSystem<T>> {
        let mut s = LinIneqSystem::new(self.variables, self.constants)?;
        for (k, v) in &self.defaults {
            s.set_default(k, parse(v)?)?;
        }
        for r in self.rows {
            let row = Row {
                coeffs: r.coeffs.iter().map(|v| parse(v)).collect::<Result<_>>()?,
                consts: r.consts.iter().map(|v| parse(v)).collect::<Result<_>>()?,
                offset: parse(&r.offset)?,
            };
            s.push_row(row, r.label)?;
        }
        Ok(s)
    }
}

pub fn system_from_str<T: Exact>(text: &str) -> Result<LinIneqSystem<T>> {
    serde_json::from_str::<SystemJson>(text)?.into_system()
}

pub fn system_to_string<T: Exact>(s: &LinIneqSystem<T>) -> String {
    serde_json::to_string_pretty(&SystemJson::from_system(s)).expect("system serializes")
}

pub fn projection_to_string<T: Exact>(p: &Projection<T>) -> String {
    let j = ProjectionJson {
        eliminated: p.eliminated.clone(),
        steps: p
            .steps
            .iter()
            .map(|s: &Step| StepJson {
                variable: s.variable.clone(),
                rows_in: s.rows_in,
                positive: s.positive,
                negative: s.negative,
                passed: s.passed,
                rows_out: s.rows_out,
            })
            .collect(),
        contradictions: p.system.contradictions(),
        system: SystemJson::from_system(&p.system),
    };
    serde_json::to_string_pretty(&j).expect("projection serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::systems;
    use num_rational::BigRational;

    #[test]
    fn roundtrip_exact() {
        let mut s = systems::dist_system::<BigRational>(true).unwrap();
        s.add_ge(
            &[("R1", 3)],
            &[("I_W1W2", -7)],
            "-22/7".parse().unwrap(),
            "odd",
        )
        .unwrap();
        let text = system_to_string(&s);
        let back: LinIneqSystem<BigRational> = system_from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(system_to_string(&back), text);
        assert!(text.contains("\"-22/7\""));
    }

    #[test]
    fn bad_numbers_rejected() {
        let text = r#"{"variables":["x"],"constants":[],"rows":[{"coeffs":["0.5"],"consts":[],"offset":"0"}]}"#;
        assert!(system_from_str::<BigRational>(text).is_err());
        let text = r#"{"variables":["x"],"constants":[],"rows":[{"coeffs":["1","2"],"consts":[],"offset":"0"}]}"#;
        assert!(system_from_str::<BigRational>(text).is_err());
    }
}
