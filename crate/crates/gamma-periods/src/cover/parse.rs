//! Text and JSON forms of branch data.
//!
//! Text format: `d = 3; points = 0, 1, inf; mults = 1, 1, 1` with
//! rational coordinates written `num/den` and the point at infinity as
//! `inf` (or `infinity`).

use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{BranchData, BranchPoint, CoverError};

fn parse_point(s: &str) -> Result<BranchPoint, CoverError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(BranchPoint::Infinity);
    }
    Rational::from_str(t)
        .map(BranchPoint::Finite)
        .map_err(|e| CoverError::InvalidDivisor(format!("bad point {t:?}: {e}")))
}

impl FromStr for BranchData {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self, CoverError> {
        let mut d: Option<i64> = None;
        let mut points: Option<Vec<BranchPoint>> = None;
        let mut mults: Option<Vec<i64>> = None;
        for field in s.split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field.split_once('=').ok_or_else(|| {
                CoverError::InvalidDivisor(format!("expected `key = value`, got {field:?}"))
            })?;
            match key.trim() {
                "d" => {
                    d = Some(value.trim().parse().map_err(|e| {
                        CoverError::InvalidDivisor(format!("bad d {:?}: {e}", value.trim()))
                    })?)
                }
                "points" => {
                    points = Some(
                        value
                            .split(',')
                            .map(parse_point)
                            .collect::<Result<_, _>>()?,
                    )
                }
                "mults" => {
                    mults = Some(
                        value
                            .split(',')
                            .map(|t| {
                                t.trim().parse().map_err(|e| {
                                    CoverError::InvalidDivisor(format!(
                                        "bad multiplicity {:?}: {e}",
                                        t.trim()
                                    ))
                                })
                            })
                            .collect::<Result<_, _>>()?,
                    )
                }
                other => {
                    return Err(CoverError::InvalidDivisor(format!(
                        "unknown field {other:?}"
                    )))
                }
            }
        }
        let d = d.ok_or_else(|| CoverError::InvalidDivisor("missing `d`".into()))?;
        let points = points.ok_or_else(|| CoverError::InvalidDivisor("missing `points`".into()))?;
        let mults = mults.ok_or_else(|| CoverError::InvalidDivisor("missing `mults`".into()))?;
        BranchData::new(d, points, mults)
    }
}

/// Serde mirror of [`BranchData`]; points are strings (`"num/den"` or
/// `"inf"`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchDataJson {
    pub d: i64,
    pub points: Vec<String>,
    pub mults: Vec<i64>,
}

impl From<&BranchData> for BranchDataJson {
    fn from(b: &BranchData) -> Self {
        Self {
            d: b.d(),
            points: b.points().iter().map(|p| p.to_string()).collect(),
            mults: b.mults().to_vec(),
        }
    }
}

impl TryFrom<&BranchDataJson> for BranchData {
    type Error = CoverError;

    fn try_from(j: &BranchDataJson) -> Result<Self, CoverError> {
        let points = j
            .points
            .iter()
            .map(|s| parse_point(s))
            .collect::<Result<_, _>>()?;
        BranchData::new(j.d, points, j.mults.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_text_format() {
        let b: BranchData = "d = 3; points = 0, 1, inf; mults = 1, 1, 1"
            .parse()
            .unwrap();
        assert_eq!(b.d(), 3);
        assert_eq!(b.points()[2], BranchPoint::Infinity);
        assert_eq!(b.mults(), &[1, 1, 1]);

        let b: BranchData = "d=2;points=-1/2,infinity;mults=1,1".parse().unwrap();
        assert_eq!(
            b.points()[0],
            BranchPoint::Finite(Rational::from((-1, 2)))
        );
    }

    #[test]
    fn parse_errors() {
        assert!("points = 0, 1; mults = 1, 1".parse::<BranchData>().is_err());
        assert!("d = 2; points = 0, 0; mults = 1, 1"
            .parse::<BranchData>()
            .is_err());
        assert!("d = 2; points = x; mults = 1".parse::<BranchData>().is_err());
        assert!(matches!(
            "d = 2; points = 0; mults = 1".parse::<BranchData>(),
            Err(CoverError::NoLineBundle { d: 2, total: 1 })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let b: BranchData = "d = 3; points = 0, 1, inf; mults = 1, 1, 1"
            .parse()
            .unwrap();
        let j = BranchDataJson::from(&b);
        let text = serde_json::to_string(&j).unwrap();
        let back: BranchDataJson = serde_json::from_str(&text).unwrap();
        assert_eq!(BranchData::try_from(&back).unwrap(), b);
    }
}
