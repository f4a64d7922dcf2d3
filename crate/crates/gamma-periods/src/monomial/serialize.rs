//! JSON forms of exponent functions and gamma monomials, with exact
//! rationals carried as `"num/den"` strings.

use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{ExponentFunction, GammaMonomial, MonomialError};

pub(crate) fn rational_to_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational_from_string(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim())
        .map_err(|e| format!("bad rational {s:?}: {e}"))
}

/// Serde mirror of [`ExponentFunction`]: values indexed `0..d-1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExponentFunctionJson {
    pub modulus: i64,
    pub values: Vec<String>,
}

impl From<&ExponentFunction> for ExponentFunctionJson {
    fn from(eps: &ExponentFunction) -> Self {
        Self {
            modulus: eps.modulus(),
            values: (0..eps.modulus())
                .map(|a| rational_to_string(eps.value(a)))
                .collect(),
        }
    }
}

impl TryFrom<&ExponentFunctionJson> for ExponentFunction {
    type Error = MonomialError;

    fn try_from(j: &ExponentFunctionJson) -> Result<Self, MonomialError> {
        let values = j
            .values
            .iter()
            .map(|s| rational_from_string(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(crate::exact::ExactError::ShapeError)?;
        ExponentFunction::from_values(j.modulus, values)
    }
}

/// Serde mirror of [`GammaMonomial`]: `gamma_exponents[i]` is the
/// exponent of `Gamma((i+1)/d)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaMonomialJson {
    pub modulus: i64,
    pub two_pi_i_power: String,
    pub gamma_exponents: Vec<String>,
}

impl From<&GammaMonomial> for GammaMonomialJson {
    fn from(m: &GammaMonomial) -> Self {
        Self {
            modulus: m.modulus(),
            two_pi_i_power: rational_to_string(m.two_pi_i_power()),
            gamma_exponents: (1..m.modulus())
                .map(|a| rational_to_string(m.exponent(a)))
                .collect(),
        }
    }
}

impl TryFrom<&GammaMonomialJson> for GammaMonomial {
    type Error = MonomialError;

    fn try_from(j: &GammaMonomialJson) -> Result<Self, MonomialError> {
        let err = crate::exact::ExactError::ShapeError;
        let r = rational_from_string(&j.two_pi_i_power).map_err(err)?;
        let exps = j
            .gamma_exponents
            .iter()
            .enumerate()
            .map(|(i, s)| Ok((i as i64 + 1, rational_from_string(s)?)))
            .collect::<Result<Vec<_>, String>>()
            .map_err(crate::exact::ExactError::ShapeError)?;
        GammaMonomial::new(j.modulus, r, exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_function_roundtrip() {
        let eps = ExponentFunction::from_values(
            3,
            vec![
                Rational::new(),
                Rational::from((-1, 2)),
                Rational::from(2),
            ],
        )
        .unwrap();
        let j = ExponentFunctionJson::from(&eps);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"-1/2\""));
        let back: ExponentFunctionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ExponentFunction::try_from(&back).unwrap(), eps);
    }

    #[test]
    fn monomial_roundtrip() {
        let m = GammaMonomial::new(
            5,
            Rational::from((3, 2)),
            vec![(1, Rational::from(1)), (4, Rational::from((-2, 3)))],
        )
        .unwrap();
        let j = GammaMonomialJson::from(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: GammaMonomialJson = serde_json::from_str(&text).unwrap();
        assert_eq!(GammaMonomial::try_from(&back).unwrap(), m);
    }

    #[test]
    fn bad_fraction_is_an_error() {
        let j = ExponentFunctionJson {
            modulus: 2,
            values: vec!["0".into(), "x/y".into()],
        };
        assert!(ExponentFunction::try_from(&j).is_err());
    }
}
