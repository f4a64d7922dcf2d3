//! Arithmetic-geometric mean with the right-half-plane square-root
//! convention, quadratically convergent.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::{prec_bits, HpError};

/// Principal square root nudged into the right half-plane (boundary:
/// non-negative imaginary part on the imaginary axis).
fn sqrt_rhp(z: Complex) -> Complex {
    let s = z.sqrt();
    if *s.real() < 0 || (s.real().is_zero() && *s.imag() < 0) {
        -s
    } else {
        s
    }
}

pub fn agm(a: &Complex, b: &Complex, digits: u32) -> Result<Complex, HpError> {
    let prec = prec_bits(digits) + 32;
    if a.clone().abs().real().is_zero() || b.clone().abs().real().is_zero() {
        return Err(HpError::InvalidInput("agm of zero".into()));
    }
    let mut x = Complex::with_val(prec, a);
    let mut y = Complex::with_val(prec, b);
    let eps = Float::with_val(prec, 10).pow(-(digits as i32) - 5);
    for _ in 0..(64 + digits) {
        let diff: Float = (x.clone() - &y).abs().real().clone();
        let scale: Float = x.clone().abs().real().clone();
        if diff <= scale * &eps {
            return Ok(x);
        }
        let arith = (x.clone() + &y) / 2u32;
        let geom = sqrt_rhp(x * y);
        x = arith;
        y = geom;
    }
    Err(HpError::PrecisionExhausted)
}
