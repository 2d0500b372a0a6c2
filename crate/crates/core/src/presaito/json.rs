use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::{AxisKind, LaurentAxis, PreSaitoFamily, SeriesMatrix};
use crate::algebra::rational::{format_rational, parse_rational};
use crate::algebra::{Matrix, Rational, SeriesRing, TruncatedSeries};
use crate::error::{Error, Result};

fn rational_matrix_json(m: &Matrix<Rational>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(format_rational(m.get(i, j))))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn series_matrix_json(m: &SeriesMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| m.get(i, j).to_json()).collect()))
            .collect(),
    )
}

fn rows(v: &Value, what: &str) -> Result<Vec<Vec<Value>>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a list of rows")))?
        .iter()
        .map(|r| {
            r.as_array()
                .cloned()
                .ok_or_else(|| Error::Parse(format!("{what} row must be a list")))
        })
        .collect()
}

fn parse_rational_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

fn rational_matrix_from(v: &Value, what: &str) -> Result<Matrix<Rational>> {
    let r = rows(v, what)?
        .iter()
        .map(|row| row.iter().map(parse_rational_value).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(r)
}

fn series_matrix_from(v: &Value, ring: &Arc<SeriesRing>, what: &str) -> Result<SeriesMatrix> {
    let r = rows(v, what)?
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| TruncatedSeries::from_json(ring, x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(r)
}

impl PreSaitoFamily {
    pub fn to_json(&self) -> Value {
        let mut c = Map::new();
        for (name, m) in self.vars().iter().zip(&self.c) {
            c.insert(name.clone(), series_matrix_json(m));
        }
        json!({
            "rank": self.rank(),
            "vars": self.vars(),
            "laurent": self.laurent.as_ref().map(|a| match a.kind {
                AxisKind::Exp => "exp",
                AxisKind::Plain => "plain",
            }),
            "order": self.order(),
            "Binf": rational_matrix_json(&self.binf),
            "B0": series_matrix_json(&self.b0),
            "C": Value::Object(c),
            "G": self.g.as_ref().map(rational_matrix_json),
            "w": self.w.as_ref().map(format_rational),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("family without field {k:?}")))
        };
        let vars: Vec<String> = field("vars")?
            .as_array()
            .ok_or_else(|| Error::Parse("vars must be a list".into()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse("variable names must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let laurent = match v.get("laurent") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => {
                let kind = match s.as_str() {
                    "exp" => AxisKind::Exp,
                    "plain" => AxisKind::Plain,
                    other => return Err(Error::Parse(format!("unknown Laurent axis {other:?}"))),
                };
                let name = vars
                    .first()
                    .cloned()
                    .ok_or_else(|| Error::Parse("Laurent axis without a variable".into()))?;
                Some(LaurentAxis { name, kind })
            }
            Some(other) => return Err(Error::Parse(format!("bad laurent field {other}"))),
        };
        let order = field("order")?
            .as_u64()
            .ok_or_else(|| Error::Parse("order must be a nonnegative integer".into()))?
            as u32;
        let series_vars = vars[usize::from(laurent.is_some())..].to_vec();
        let ring = SeriesRing::new(series_vars, order);
        let binf = rational_matrix_from(field("Binf")?, "Binf")?;
        let b0 = series_matrix_from(field("B0")?, &ring, "B0")?;
        let cobj = field("C")?
            .as_object()
            .ok_or_else(|| Error::Parse("C must map variable names to matrices".into()))?;
        if cobj.len() != vars.len() {
            return Err(Error::Input(format!(
                "{} Higgs matrices for {} variables",
                cobj.len(),
                vars.len()
            )));
        }
        let c = vars
            .iter()
            .map(|name| {
                let m = cobj
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("no Higgs matrix for {name:?}")))?;
                series_matrix_from(m, &ring, name)
            })
            .collect::<Result<Vec<_>>>()?;
        let g = match v.get("G") {
            None | Some(Value::Null) => None,
            Some(x) => Some(rational_matrix_from(x, "G")?),
        };
        let w = match v.get("w") {
            None | Some(Value::Null) => None,
            Some(x) => Some(parse_rational_value(x)?),
        };
        let fam = Self::new(ring, laurent, binf, b0, c, g, w)?;
        if let Some(r) = v.get("rank").and_then(Value::as_u64) {
            if r as usize != fam.rank() {
                return Err(Error::Input(format!(
                    "declared rank {r} but matrices have rank {}",
                    fam.rank()
                )));
            }
        }
        Ok(fam)
    }
}
