//! Wire format for series literals. Rationals travel as strings.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Series, VarSpec};
use crate::coeff::{fmt_rational, parse_rational, Coefficient};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<i32>,
    pub re: String,
    #[serde(default = "zero_str")]
    pub im: String,
}

fn zero_str() -> String {
    "0".into()
}

/// `vars` lists graded variables followed by the loop variable, if any;
/// `loop` names the latter.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    #[serde(rename = "loop", default, skip_serializing_if = "Option::is_none")]
    pub loop_var: Option<String>,
    #[serde(rename = "T")]
    pub total_order: u32,
    #[serde(rename = "U", default)]
    pub loop_order: u32,
    #[serde(default)]
    pub hbar_floor: i32,
    pub terms: Vec<TermJson>,
}

impl Series {
    pub fn to_json(&self) -> SeriesJson {
        let spec = self.spec();
        let mut vars = spec.graded_vars().to_vec();
        if let Some(l) = spec.loop_var() {
            vars.push(l.to_string());
        }
        SeriesJson {
            vars,
            loop_var: spec.loop_var().map(str::to_string),
            total_order: spec.total_order(),
            loop_order: spec.loop_order(),
            hbar_floor: spec.hbar_floor(),
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.iter().map(|&e| e.into()).collect(),
                    re: fmt_rational(&c.re),
                    im: fmt_rational(&c.im),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Series> {
        let mut graded = j.vars.clone();
        if let Some(l) = &j.loop_var {
            if graded.last() != Some(l) {
                return Err(Error::Parse(format!("loop variable `{l}` must be listed last")));
            }
            graded.pop();
        }
        let spec: Arc<VarSpec> = VarSpec::build(
            graded,
            j.total_order,
            j.loop_var.clone(),
            j.loop_order,
            j.hbar_floor,
        )?;
        let mut out = Series::zero(&spec);
        for t in &j.terms {
            let exp: Vec<i16> = t
                .exp
                .iter()
                .map(|&e| i16::try_from(e).map_err(|_| Error::Parse(format!("exponent {e}"))))
                .collect::<Result<_>>()?;
            let c = Coefficient::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            if !c.is_zero() {
                out.add_term(&exp, c)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let spec = VarSpec::graded(&["hbar", "v"], 4)
            .unwrap()
            .with_hbar_floor(-1)
            .unwrap()
            .with_loop("uinv", 2)
            .unwrap();
        let f = Series::from_terms(
            &spec,
            vec![
                (vec![-1, 1, 0], Coefficient::from_frac(-3, 7)),
                (vec![0, 0, 2], Coefficient::i()),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        assert!(text.contains("\"-3/7\""));
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Series::from_json(&back).unwrap(), f);
    }

    #[test]
    fn malformed_literal_rejected() {
        let j: SeriesJson = serde_json::from_str(
            r#"{"vars":["v"],"T":3,"terms":[{"exp":[1],"re":"1/0"}]}"#,
        )
        .unwrap();
        assert!(Series::from_json(&j).is_err());
    }
}
