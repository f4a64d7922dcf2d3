//! Complex gamma function to arbitrary precision: argument shift into
//! the Stirling region, asymptotic series with Bernoulli-number
//! coefficients, and the reflection formula for the left half-plane.

use once_cell::sync::Lazy;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use std::sync::Mutex;

use super::{pi, prec_bits, HpError};

/// Cache of Bernoulli numbers B_0, B_1, B_2, ... by the standard
/// recurrence; only even indices matter for the Stirling series.
static BERNOULLI: Lazy<Mutex<Vec<Rational>>> =
    Lazy::new(|| Mutex::new(vec![Rational::from(1), Rational::from((-1, 2))]));

fn bernoulli(n: usize) -> Rational {
    let mut cache = BERNOULLI.lock().expect("bernoulli cache");
    while cache.len() <= n {
        let m = cache.len();
        // B_m from sum_{k=0}^{m} C(m+1, k) B_k = 0.
        let mut acc = Rational::new();
        let mut binom = rug::Integer::from(1); // C(m+1, 0)
        for (k, b) in cache.iter().enumerate() {
            acc += Rational::from(b * &Rational::from(binom.clone()));
            binom = binom * (m as u32 + 1 - k as u32) / (k as u32 + 1);
        }
        // binom is now C(m+1, m).
        let bm = -acc / Rational::from(binom);
        cache.push(bm);
    }
    cache[n].clone()
}

/// Stirling series for ln Gamma(w), valid for w well inside the right
/// half-plane. Returns `None` when the asymptotic tail cannot reach the
/// target accuracy at this |w|.
fn ln_gamma_stirling(w: &Complex, prec: u32, eps: &Float) -> Option<Complex> {
    let two_pi = pi(prec) * 2u32;
    let half = Float::with_val(prec, 0.5);
    let mut acc = (w.clone() - &half) * w.clone().ln() - w.clone()
        + (Complex::with_val(prec, &two_pi).ln() / 2u32);
    let w2 = w.clone().square();
    let mut wpow = w.clone(); // w^(2j-1)
    let mut last_mag = Float::with_val(prec, rug::float::Special::Infinity);
    for j in 1..100_000usize {
        let b = bernoulli(2 * j);
        let denom = Rational::from(((2 * j) * (2 * j - 1), 1));
        let coeff = b / denom;
        let term = Complex::with_val(prec, &coeff) / wpow.clone();
        let mag: Float = term.clone().abs().real().clone();
        if mag < *eps {
            acc += term;
            return Some(acc);
        }
        if mag > last_mag {
            // Divergent tail reached before the target: need a larger
            // shift.
            return None;
        }
        last_mag = mag;
        acc += term;
        wpow *= &w2;
    }
    None
}

/// Gamma function with relative error below `10^-digits`.
///
/// Arguments with real part below 1/2 go through the reflection
/// formula; the rest are shifted up by the functional equation until
/// the Stirling series converges to the target.
pub fn gamma_hp(z: &Complex, digits: u32) -> Result<Complex, HpError> {
    let prec = prec_bits(digits) + 32;
    let z = Complex::with_val(prec, z);
    if z.imag().is_zero() {
        let re = z.real();
        if *re <= 0 && re.is_integer() {
            return Err(HpError::Pole(re.to_f64() as i64));
        }
    }
    if *z.real() < 0.5 {
        // Gamma(z) = pi / (sin(pi z) * Gamma(1 - z)).
        let one_minus = Complex::with_val(prec, 1) - &z;
        let g = gamma_right(&one_minus, digits, prec)?;
        let pi_c = Complex::with_val(prec, &pi(prec));
        let s = (pi_c.clone() * &z).sin();
        return Ok(pi_c / (s * g));
    }
    gamma_right(&z, digits, prec)
}

fn gamma_right(z: &Complex, digits: u32, prec: u32) -> Result<Complex, HpError> {
    // Relative target with guard digits.
    let eps = Float::with_val(prec, 10).pow(-(digits as i32) - 10);
    // Shift until |z + n| is large enough for the series; the radius
    // needed scales like 0.367 * digits (where the minimal Stirling
    // term bottoms out at the target accuracy).
    let mut shift_target = 0.367 * (digits as f64 + 10.0) + 4.0;
    for _ in 0..8 {
        let n = (shift_target - z.real().to_f64()).ceil().max(0.0) as u32;
        let w = z.clone() + n;
        if let Some(lg) = ln_gamma_stirling(&w, prec, &eps) {
            let mut g = lg.exp();
            for i in 0..n {
                g /= z.clone() + i;
            }
            return Ok(g);
        }
        shift_target *= 1.5;
    }
    Err(HpError::PrecisionExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex, b: &Complex, digits: u32) -> bool {
        let prec = a.prec().0;
        let diff: Float = (a.clone() - b).abs().real().clone();
        let scale: Float = b.clone().abs().real().clone();
        diff < scale * Float::with_val(prec, 10).pow(-(digits as i32))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(3), Rational::new());
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn gamma_small_integers() {
        let prec = prec_bits(50);
        for (n, fact) in [(1, 1u64), (2, 1), (3, 2), (4, 6), (5, 24), (8, 5040)] {
            let g = gamma_hp(&Complex::with_val(prec, n), 50).unwrap();
            assert!(close(&g, &Complex::with_val(prec, fact), 48), "n={n}");
        }
    }

    #[test]
    fn gamma_poles() {
        let prec = prec_bits(30);
        assert_eq!(
            gamma_hp(&Complex::with_val(prec, 0), 30),
            Err(HpError::Pole(0))
        );
        assert_eq!(
            gamma_hp(&Complex::with_val(prec, -3), 30),
            Err(HpError::Pole(-3))
        );
    }

    #[test]
    fn gamma_half_squared_is_pi() {
        let digits = 60;
        let prec = prec_bits(digits);
        let g = gamma_hp(&Complex::with_val(prec, 0.5), digits).unwrap();
        let sq = g.square();
        assert!(close(&sq, &Complex::with_val(prec, &pi(prec)), 58));
    }

    #[test]
    fn gamma_reflection_third() {
        let digits = 60;
        let prec = prec_bits(digits);
        let a = gamma_hp(&Complex::with_val(prec, &Rational::from((1, 3))), digits).unwrap();
        let b = gamma_hp(&Complex::with_val(prec, &Rational::from((2, 3))), digits).unwrap();
        let sqrt3 = Float::with_val(prec, 3).sqrt();
        let lhs = a * b * &sqrt3 / (pi(prec) * 2u32);
        assert!(close(&lhs, &Complex::with_val(prec, 1), 58));
    }

    #[test]
    fn gamma_matches_mpfr_on_reals() {
        // Independent implementation check against MPFR's gamma.
        let digits = 50;
        let prec = prec_bits(digits);
        for num in [1i64, 2, 5, 7, 12, 29, 95, -3, -14] {
            for den in [7i64, 10, 3] {
                let q = Rational::from((num, den));
                if q.is_integer() && q <= 0 {
                    continue;
                }
                let ours = gamma_hp(&Complex::with_val(prec, &q), digits).unwrap();
                let mpfr = Float::with_val(prec, &q).gamma();
                assert!(
                    close(&ours, &Complex::with_val(prec, &mpfr), 48),
                    "q={q}"
                );
            }
        }
    }

    #[test]
    fn gamma_functional_equation_complex() {
        use rand::{Rng, SeedableRng};
        let digits = 40;
        let prec = prec_bits(digits);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..12 {
            let re = rng.gen_range(-4.0..6.0);
            let im = rng.gen_range(-5.0..5.0);
            let z = Complex::with_val(prec, (re, im));
            if z.imag().is_zero() {
                continue;
            }
            let g = gamma_hp(&z, digits).unwrap();
            let g1 = gamma_hp(&(z.clone() + 1u32), digits).unwrap();
            assert!(close(&(g * &z), &g1, 38), "z={z}");
        }
    }

    #[test]
    fn gamma_distribution_property() {
        use rand::{Rng, SeedableRng};
        let digits = 45;
        let prec = prec_bits(digits);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for d in 2u32..=10 {
            let s = Rational::from((rng.gen_range(1..50i64), 50));
            let lhs = gamma_hp(&Complex::with_val(prec, &s), digits).unwrap();
            let two_pi = pi(prec) * 2u32;
            let sf = Float::with_val(prec, &s);
            let mut rhs = Complex::with_val(prec, two_pi.pow(-((d as i32) - 1) as f64 / 2.0))
                * Float::with_val(prec, d).pow(sf - 0.5);
            for a in 0..d {
                let arg = (Rational::from(&s) + a) / Rational::from(d);
                rhs *= gamma_hp(&Complex::with_val(prec, &arg), digits).unwrap();
            }
            assert!(close(&lhs, &rhs, 42), "d={d} s={s}");
        }
    }
}
