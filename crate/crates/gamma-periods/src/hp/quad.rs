//! Tanh-sinh (double-exponential) quadrature for integrands with
//! algebraic endpoint singularities.
//!
//! The integrand is split as `(t-lo)^mu_lo * (hi-t)^mu_hi * g(t)`: the
//! endpoint powers are applied to stably computed endpoint distances
//! (never by cancellation `t - lo`), so exponents down to -1 pose no
//! problem. Levels double until two successive approximations agree.

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use super::{float_from_rational, pi, prec_bits, HpError};

/// One abscissa of the transformed rule: distances to both endpoints of
/// `[-1, 1]` and the weight, all positive.
struct Node {
    /// 1 + x, distance to the left endpoint.
    dist_lo: Float,
    /// 1 - x, distance to the right endpoint.
    dist_hi: Float,
    weight: Float,
}

/// Nodes of level `level` (spacing `2^-level`) that are new relative to
/// the previous level; `u >= 0` half only, mirrored by the caller.
fn nodes(level: u32, prec: u32, cutoff: &Float) -> Vec<Node> {
    let h = Float::with_val(prec, 1) >> level;
    let half_pi = pi(prec) / 2u32;
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        // At level 0 take every node; at deeper levels only odd
        // multiples are new.
        if level > 0 && k.is_multiple_of(2) {
            k += 1;
            continue;
        }
        let u = Float::with_val(prec, k) * &h;
        let s = half_pi.clone() * u.clone().sinh();
        // 1 -+ tanh(s) = 2 / (e^(+-2s) + 1), computed without
        // cancellation.
        let e2s = (s.clone() * 2u32).exp();
        let dist_hi = Float::with_val(prec, 2) / (e2s.clone() + 1u32);
        let dist_lo = Float::with_val(prec, 2) / (Float::with_val(prec, 1) / e2s + 1u32);
        // Weight without the level spacing h; the caller applies h to
        // the accumulated sum (nodes are reused across levels).
        let cosh_s = s.clone().cosh();
        let weight: Float = half_pi.clone() * u.cosh() / cosh_s.square();
        let done = weight < *cutoff || !weight.is_finite();
        if done && k > 0 {
            break;
        }
        out.push(Node {
            dist_lo,
            dist_hi,
            weight,
        });
        k += 1;
        if k > 1u64 << 26 {
            break;
        }
    }
    out
}

/// Integrate `(t-lo)^mu_lo * (hi-t)^mu_hi * g(t)` over `[lo, hi]`.
///
/// `g` receives the abscissa together with the exact distances to both
/// endpoints so it can evaluate singular-adjacent factors stably.
/// Exponents must be > -1 for convergence (integrable singularities).
pub fn integrate_singular(
    g: &dyn Fn(&Float, &Float, &Float) -> Complex,
    lo: &Float,
    hi: &Float,
    mu_lo: &Rational,
    mu_hi: &Rational,
    digits: u32,
) -> Result<Complex, HpError> {
    let prec = prec_bits(digits) + 32;
    if *mu_lo <= -1 || *mu_hi <= -1 {
        return Err(HpError::InvalidInput(format!(
            "endpoint exponents ({mu_lo}, {mu_hi}) must exceed -1"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(HpError::InvalidInput("empty interval".into()));
    }
    let half_len = Float::with_val(prec, hi - lo) / 2u32;
    let mid = Float::with_val(prec, lo + hi) / 2u32;
    let eps = Float::with_val(prec, 10).pow(-(digits as i32) - 6);
    // Node cutoff: near the endpoints the summand behaves like
    // weight^(1+mu), so the weight must be pushed down to the target
    // raised to 1/(1+mu) for the strongest singularity present.
    let p = (1.0 + mu_lo.to_f64().min(mu_hi.to_f64())).min(1.0);
    let cutoff_exp = (-((digits as f64) + 20.0) / p).floor() as i32;
    let cutoff = Float::with_val(prec, 10).pow(cutoff_exp);
    let ml = float_from_rational(mu_lo, prec);
    let mh = float_from_rational(mu_hi, prec);

    let eval_side = |dist_near: &Float, dist_far: &Float, flip: bool| -> Complex {
        // Map [-1,1] node to [lo,hi]: distances scale by half_len.
        let d_lo = half_len.clone() * if flip { dist_far } else { dist_near };
        let d_hi = half_len.clone() * if flip { dist_near } else { dist_far };
        let t = if flip {
            mid.clone() + (half_len.clone() - &d_hi)
        } else {
            mid.clone() - (half_len.clone() - &d_lo)
        };
        let sing = d_lo.clone().pow(&ml) * d_hi.clone().pow(&mh);
        g(&t, &d_lo, &d_hi) * sing
    };

    let mut total = Complex::with_val(prec, 0);
    let mut previous: Option<Complex> = None;
    let mut achieved = Float::with_val(prec, rug::float::Special::Infinity);
    for level in 0..=14u32 {
        for node in nodes(level, prec, &cutoff) {
            let center = node.dist_lo == node.dist_hi;
            let mut v = eval_side(&node.dist_lo, &node.dist_hi, false);
            if !center {
                v += eval_side(&node.dist_lo, &node.dist_hi, true);
            }
            total += v * &node.weight;
        }
        // The running sum uses spacing 2^-level: scale accordingly.
        let estimate = Complex::with_val(prec, &total) * &half_len / (1u64 << level);
        if let Some(prev) = previous {
            let diff: Float = (estimate.clone() - &prev).abs().real().clone();
            let scale: Float = estimate
                .clone()
                .abs()
                .real()
                .clone()
                .max(&Float::with_val(prec, 1));
            achieved = diff.clone() / scale;
            if achieved < eps {
                return Ok(estimate);
            }
        }
        previous = Some(estimate);
    }
    Err(HpError::QuadratureFailure(format!("{:.3e}", achieved.to_f64())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::gamma_hp;

    fn one(_t: &Float, _dl: &Float, _dh: &Float) -> Complex {
        Complex::with_val(_t.prec(), 1)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn check_close(a: &Complex, b: &Complex, digits: u32) {
        let prec = a.prec().0;
        let diff: Float = (a.clone() - b).abs().real().clone();
        let scale: Float = b.clone().abs().real().clone().max(&Float::with_val(prec, 1));
        assert!(
            diff < scale * Float::with_val(prec, 10).pow(-(digits as i32)),
            "difference {diff}"
        );
    }

    #[test]
    fn unit_interval() {
        let prec = prec_bits(50);
        let lo = Float::with_val(prec, 0);
        let hi = Float::with_val(prec, 1);
        let v = integrate_singular(&one, &lo, &hi, &q(0, 1), &q(0, 1), 50).unwrap();
        check_close(&v, &Complex::with_val(prec, 1), 48);
    }

    #[test]
    fn beta_half_half_is_pi() {
        let digits = 50;
        let prec = prec_bits(digits);
        let lo = Float::with_val(prec, 0);
        let hi = Float::with_val(prec, 1);
        let v = integrate_singular(&one, &lo, &hi, &q(-1, 2), &q(-1, 2), digits).unwrap();
        check_close(&v, &Complex::with_val(prec, &pi(prec)), 48);
    }

    #[test]
    fn beta_third_third_matches_gamma() {
        let digits = 50;
        let prec = prec_bits(digits);
        let lo = Float::with_val(prec, 0);
        let hi = Float::with_val(prec, 1);
        let v = integrate_singular(&one, &lo, &hi, &q(-2, 3), &q(-2, 3), digits).unwrap();
        // B(1/3, 1/3) = Gamma(1/3)^2 / Gamma(2/3).
        let g13 = gamma_hp(&Complex::with_val(prec, &q(1, 3)), digits).unwrap();
        let g23 = gamma_hp(&Complex::with_val(prec, &q(2, 3)), digits).unwrap();
        let expected = g13.square() / g23;
        check_close(&v, &expected, 47);
    }

    #[test]
    fn shifted_interval_with_analytic_factor() {
        // int_1^3 (t-1)^(-1/2) * t dt = [2/3 (t-1)^(3/2) + 2 (t-1)^(1/2)]_1^3
        let digits = 45;
        let prec = prec_bits(digits);
        let lo = Float::with_val(prec, 1);
        let hi = Float::with_val(prec, 3);
        let f = |t: &Float, _dl: &Float, _dh: &Float| Complex::with_val(t.prec(), t);
        let v = integrate_singular(&f, &lo, &hi, &q(-1, 2), &q(0, 1), digits).unwrap();
        let sqrt2 = Float::with_val(prec, 2).sqrt();
        let expected = Complex::with_val(
            prec,
            Float::with_val(prec, 2) / 3u32 * sqrt2.clone() * 2u32 + sqrt2 * 2u32,
        );
        check_close(&v, &expected, 43);
    }

    #[test]
    fn positive_exponents_are_fine() {
        // int_0^1 t^(1/2) dt = 2/3.
        let digits = 45;
        let prec = prec_bits(digits);
        let lo = Float::with_val(prec, 0);
        let hi = Float::with_val(prec, 1);
        let v = integrate_singular(&one, &lo, &hi, &q(1, 2), &q(0, 1), digits).unwrap();
        check_close(&v, &Complex::with_val(prec, &q(2, 3)), 43);
    }

    #[test]
    fn rejects_nonintegrable() {
        let prec = prec_bits(30);
        let lo = Float::with_val(prec, 0);
        let hi = Float::with_val(prec, 1);
        assert!(matches!(
            integrate_singular(&one, &lo, &hi, &q(-1, 1), &q(0, 1), 30),
            Err(HpError::InvalidInput(_))
        ));
        assert!(matches!(
            integrate_singular(&one, &hi, &lo, &q(0, 1), &q(0, 1), 30),
            Err(HpError::InvalidInput(_))
        ));
    }

    #[test]
    fn beta_random_against_gamma_oracle() {
        use rand::{Rng, SeedableRng};
        let digits = 45;
        let prec = prec_bits(digits);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let lo = Float::with_val(prec, 0);
        let hi = Float::with_val(prec, 1);
        for _ in 0..6 {
            let a = q(rng.gen_range(1..12), 12);
            let b = q(rng.gen_range(1..12), 12);
            let mu_lo = Rational::from(&a) - 1u32;
            let mu_hi = Rational::from(&b) - 1u32;
            let v = integrate_singular(&one, &lo, &hi, &mu_lo, &mu_hi, digits).unwrap();
            let ga = gamma_hp(&Complex::with_val(prec, &a), digits).unwrap();
            let gb = gamma_hp(&Complex::with_val(prec, &b), digits).unwrap();
            let gab =
                gamma_hp(&Complex::with_val(prec, Rational::from(&a) + &b), digits).unwrap();
            check_close(&v, &(ga * gb / gab), 42);
        }
    }
}
