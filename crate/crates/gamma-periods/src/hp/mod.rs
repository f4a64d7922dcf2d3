//! Arbitrary-precision numerics: gamma evaluation, singular-endpoint
//! quadrature, twisted period matrices, AGM and PSLQ integer-relation
//! detection.
//!
//! Precision is explicit everywhere: each operation takes a decimal
//! digit count and works internally with guard bits on top of it.
//! Complex values are MPC-backed [`rug::Complex`] numbers.

mod agm;
mod gamma;
mod period;
mod pslq;
mod quad;

pub use agm::agm;
pub use gamma::gamma_hp;
pub use period::{determinant, twisted_period_matrix, PeriodMatrix};
pub use pslq::{min_poly, pslq, IntegerRelation, MinPoly};
pub use quad::integrate_singular;

use rug::float::Special;
use rug::{Complex, Float, Rational};
use thiserror::Error;

/// Numeric carrier for periods and gamma values.
pub type BigComplex = Complex;

#[derive(Debug, Error, PartialEq)]
pub enum HpError {
    #[error("gamma pole at non-positive integer {0}")]
    Pole(i64),
    #[error("quadrature did not converge: achieved error estimate {0}")]
    QuadratureFailure(String),
    #[error("residue {0} outside the open interval (0, 1)")]
    UnsupportedResidue(String),
    #[error("period matrix numerically degenerate after basis retries")]
    DegenerateBasis,
    #[error("insufficient working precision for relation detection")]
    PrecisionExhausted,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Working bits for a decimal digit target, with guard bits included.
pub fn prec_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

pub fn float_from_rational(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

pub fn complex_from_rational(q: &Rational, prec: u32) -> Complex {
    Complex::with_val(prec, q)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// `10^(-digits)`, the absolute tolerance used throughout.
pub fn tolerance(digits: u32, prec: u32) -> Float {
    Float::with_val(prec, 10).pow(-(digits as i32))
}

/// Decimal rendering of a complex value as (real, imaginary) strings.
pub fn complex_to_strings(z: &Complex, digits: u32) -> (String, String) {
    let fmt = |f: &Float| -> String {
        if f.is_finite() {
            f.to_string_radix(10, Some(digits as usize))
        } else {
            Float::with_val(f.prec(), Special::Nan).to_string()
        }
    };
    (fmt(z.real()), fmt(z.imag()))
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_plumbing() {
        assert!(prec_bits(50) > 166);
        let q = Rational::from((1, 3));
        let f = float_from_rational(&q, 128);
        assert_eq!(f.prec(), 128);
        let (re, im) = complex_to_strings(&Complex::with_val(64, (1.5, -2.0)), 10);
        assert!(re.starts_with("1.5"));
        assert!(im.starts_with("-2.0"));
    }
}
