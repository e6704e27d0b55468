//! Parameter grids `name=start:stop:step` (inclusive of `stop` up to rounding).

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub values: Vec<f64>,
}

impl std::str::FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "sweep `{s}` is not of the form name=start:stop:step"
            ))
        };
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if name.trim().is_empty()
            || !start.is_finite()
            || !stop.is_finite()
            || !(step > 0.0)
            || stop < start
        {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(Error::InvalidParameter(format!(
                "sweep `{s}` has {count} points"
            )));
        }
        let values = (0..count).map(|i| start + i as f64 * step).collect();
        Ok(Sweep {
            name: name.trim().to_string(),
            values,
        })
    }
}

/// Cartesian product of the sweeps applied to `base`, first sweep slowest.
pub fn expand(base: &Value, sweeps: &[Sweep]) -> Result<Vec<Value>> {
    let mut out = vec![base.clone()];
    for s in sweeps {
        let mut next = Vec::with_capacity(out.len() * s.values.len());
        for v in &out {
            for &x in &s.values {
                let mut v = v.clone();
                let obj = v
                    .as_object_mut()
                    .ok_or_else(|| Error::Parse("swept parameters must be a JSON object".into()))?;
                obj.insert(s.name.clone(), number(&s.name, x)?);
                next.push(v);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Integer fields are written as integers.
fn number(name: &str, x: f64) -> Result<Value> {
    if matches!(name, "n" | "seed") {
        let r = x.round();
        if (r - x).abs() > 1e-9 || r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "`{name}` must be a nonnegative integer, got {x}"
            )));
        }
        Ok(Value::from(r as u64))
    } else {
        serde_json::Number::from_f64(x)
            .map(Value::Number)
            .ok_or_else(|| Error::InvalidParameter(format!("`{name}` = {x} is not finite")))
    }
}
