//! PSLQ integer-relation detection and bounded-degree minimal
//! polynomial recovery.
//!
//! The PSLQ loop follows the standard formulation (Ferguson-Bailey,
//! as popularized by the mpmath implementation): Hermite reduction of
//! the H matrix, gamma-weighted row selection, and a corner rotation,
//! with exact integer bookkeeping in the A/B matrices.

use rug::ops::Pow;
use rug::{Complex, Float, Integer};

use super::{prec_bits, HpError};

/// A detected relation `sum_k coefficients[k] * x[k] ~ 0`.
#[derive(Debug, Clone)]
pub struct IntegerRelation {
    pub coefficients: Vec<Integer>,
    pub residual: Float,
}

fn round_to_integer(f: &Float) -> Result<Integer, HpError> {
    f.clone()
        .round()
        .to_integer()
        .ok_or(HpError::PrecisionExhausted)
}

/// Search for an integer relation among real values.
///
/// Returns `Ok(None)` when the norm bound proves that no relation with
/// coefficients up to `max_coeff` exists at this precision; an
/// `Err(PrecisionExhausted)` means the search stalled inconclusively.
pub fn pslq(
    x: &[Float],
    digits: u32,
    max_coeff: &Integer,
) -> Result<Option<IntegerRelation>, HpError> {
    let n = x.len();
    if n < 2 {
        return Err(HpError::InvalidInput("need at least two values".into()));
    }
    let prec = prec_bits(digits) + 64;
    let x: Vec<Float> = x.iter().map(|v| Float::with_val(prec, v)).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(HpError::InvalidInput("non-finite input".into()));
    }
    if x.iter().any(|v| v.is_zero()) {
        // A zero entry is a trivial relation.
        let mut coeffs = vec![Integer::new(); n];
        let idx = x.iter().position(|v| v.is_zero()).unwrap();
        coeffs[idx] = Integer::from(1);
        return Ok(Some(IntegerRelation {
            coefficients: coeffs,
            residual: Float::with_val(prec, 0),
        }));
    }
    let detect_tol = Float::with_val(prec, 10).pow(-((digits as i32 * 3) / 4));
    let gamma = Float::with_val(prec, Float::with_val(prec, 4) / 3u32).sqrt();

    // Partial norms s_k = sqrt(sum_{j >= k} x_j^2).
    let mut s = vec![Float::with_val(prec, 0); n];
    {
        let mut acc = Float::with_val(prec, 0);
        for k in (0..n).rev() {
            acc += x[k].clone().square();
            s[k] = acc.clone().sqrt();
        }
    }
    let t0 = s[0].clone();
    let mut y: Vec<Float> = x.iter().map(|v| Float::with_val(prec, v / &t0)).collect();
    for v in &mut s {
        *v /= &t0;
    }

    let mut a: Vec<Vec<Integer>> = (0..n)
        .map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect())
        .collect();
    let mut b = a.clone();
    // H is n x (n-1).
    let mut h: Vec<Vec<Float>> = vec![vec![Float::with_val(prec, 0); n - 1]; n];
    for i in 0..n {
        if i < n - 1 {
            h[i][i] = Float::with_val(prec, &s[i + 1] / &s[i]);
        }
        for j in 0..i.min(n - 1) {
            h[i][j] = Float::with_val(prec, -(y[i].clone() * &y[j]) / (s[j].clone() * &s[j + 1]));
        }
    }

    // Full initial Hermite reduction.
    for i in 1..n {
        for j in (0..i.min(n - 1)).rev() {
            if h[j][j].is_zero() {
                continue;
            }
            let t = round_to_integer(&(h[i][j].clone() / &h[j][j]))?;
            if t.is_zero() {
                continue;
            }
            let tf = Float::with_val(prec, &t);
            let yi = y[i].clone();
            y[j] += yi * &tf;
            for k in 0..=j {
                let delta = h[j][k].clone() * &tf;
                h[i][k] -= delta;
            }
            for k in 0..n {
                let delta = Integer::from(&t * &a[j][k]);
                a[i][k] -= delta;
                let delta = Integer::from(&t * &b[k][i]);
                b[k][j] += delta;
            }
        }
    }

    let max_steps = 512 * n * n + 4096;
    for _ in 0..max_steps {
        // Detection: a vanishing y component exposes a relation in the
        // matching column of B. Checked before the exchange step so an
        // approximate relation is read off before further reductions
        // inflate the coefficients past any bound.
        let mut best_idx = 0usize;
        for j in 1..n {
            if y[j].clone().abs() < y[best_idx].clone().abs() {
                best_idx = j;
            }
        }
        if y[best_idx].clone().abs() < detect_tol {
            let coeffs: Vec<Integer> = (0..n).map(|k| b[k][best_idx].clone()).collect();
            if coeffs.iter().all(|c| c.is_zero()) {
                return Err(HpError::PrecisionExhausted);
            }
            if coeffs.iter().any(|c| c.clone().abs() > *max_coeff) {
                return Ok(None);
            }
            let mut residual = Float::with_val(prec, 0);
            for (c, v) in coeffs.iter().zip(&x) {
                residual += Float::with_val(prec, c) * v;
            }
            return Ok(Some(IntegerRelation {
                coefficients: coeffs,
                residual: residual.abs(),
            }));
        }

        // Row selection: maximize gamma^(i+1) * |H[i][i]|.
        let mut m = 0usize;
        let mut best = Float::with_val(prec, -1);
        let mut weight = gamma.clone();
        for i in 0..n - 1 {
            let v = h[i][i].clone().abs() * &weight;
            if v > best {
                best = v;
                m = i;
            }
            weight *= &gamma;
        }

        y.swap(m, m + 1);
        h.swap(m, m + 1);
        a.swap(m, m + 1);
        for row in &mut b {
            row.swap(m, m + 1);
        }

        // Corner rotation to restore lower-trapezoidal shape.
        if m < n - 2 && !h[m][m + 1].is_zero() {
            let t0 = Float::with_val(
                prec,
                (h[m][m].clone().square() + h[m][m + 1].clone().square()).sqrt(),
            );
            let t1 = Float::with_val(prec, &h[m][m] / &t0);
            let t2 = Float::with_val(prec, &h[m][m + 1] / &t0);
            for i in m..n {
                let t3 = h[i][m].clone();
                let t4 = h[i][m + 1].clone();
                h[i][m] = t1.clone() * &t3 + t2.clone() * &t4;
                h[i][m + 1] = t1.clone() * &t4 - t2.clone() * &t3;
            }
        }

        // Hermite reduction limited to the disturbed rows.
        for i in m + 1..n {
            for j in (0..i.min(m + 2).min(n - 1)).rev() {
                if h[j][j].is_zero() {
                    break;
                }
                let t = round_to_integer(&(h[i][j].clone() / &h[j][j]))?;
                if t.is_zero() {
                    continue;
                }
                let tf = Float::with_val(prec, &t);
                let yi = y[i].clone();
                y[j] += yi * &tf;
                for k in 0..=j {
                    let delta = h[j][k].clone() * &tf;
                    h[i][k] -= delta;
                }
                for k in 0..n {
                    let delta = Integer::from(&t * &a[j][k]);
                    a[i][k] -= delta;
                    let delta = Integer::from(&t * &b[k][i]);
                    b[k][j] += delta;
                }
            }
        }


        // Norm bound: any relation has norm at least 1/max|H[i][i]|.
        let mut hmax = Float::with_val(prec, 0);
        for (i, row) in h.iter().enumerate().take(n - 1) {
            let v = row[i].clone().abs();
            if v > hmax {
                hmax = v;
            }
        }
        if hmax.is_zero() {
            return Err(HpError::PrecisionExhausted);
        }
        let bound = hmax.recip();
        if bound > Float::with_val(prec, max_coeff) {
            return Ok(None);
        }
    }
    Err(HpError::PrecisionExhausted)
}

/// A minimal-polynomial certificate: integer coefficients from the
/// constant term up, with a verified small residual at the input point.
#[derive(Debug, Clone)]
pub struct MinPoly {
    pub coefficients: Vec<Integer>,
    pub residual: Float,
    /// Whether the documented precision heuristic
    /// `digits >= 4 * degree * height_digits` held for this search.
    pub precision_rule_met: bool,
}

impl MinPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Human-readable polynomial, constant term last.
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.clone().abs();
            let body = match k {
                0 => format!("{mag}"),
                1 if mag == 1 => "x".to_string(),
                1 => format!("{mag}*x"),
                _ if mag == 1 => format!("x^{k}"),
                _ => format!("{mag}*x^{k}"),
            };
            if parts.is_empty() {
                parts.push(if *c < 0 { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {body}", if *c < 0 { "-" } else { "+" }));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ")
        }
    }
}

fn evaluate_poly(coeffs: &[Integer], z: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::with_val(prec, 0);
    for c in coeffs.iter().rev() {
        acc = acc * z + Float::with_val(prec, c);
    }
    acc
}

fn normalize_poly(mut coeffs: Vec<Integer>) -> Vec<Integer> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.last().is_some_and(|c| *c < 0) {
        for c in &mut coeffs {
            *c = -c.clone();
        }
    }
    let mut content = Integer::new();
    for c in &coeffs {
        content = content.gcd(c);
    }
    if content > 1 {
        for c in &mut coeffs {
            *c /= &content;
        }
    }
    coeffs
}

/// Lowest-degree integer polynomial (degree <= `max_deg`, coefficient
/// height <= `10^height_digits`) vanishing at `z` to working accuracy,
/// or `None`. Every candidate is re-verified by direct evaluation, so
/// spurious projections of complex inputs are rejected.
pub fn min_poly(
    z: &Complex,
    max_deg: u32,
    height_digits: u32,
    digits: u32,
) -> Result<Option<MinPoly>, HpError> {
    if max_deg == 0 {
        return Err(HpError::InvalidInput("max_deg must be positive".into()));
    }
    let prec = prec_bits(digits) + 64;
    let z = Complex::with_val(prec, z);
    let max_coeff = Integer::from(10).pow(height_digits);
    let verify_tol = Float::with_val(prec, 10).pow(-(digits as i32) / 2);
    let real_tol = Float::with_val(prec, 10).pow(-(digits as i32) * 3 / 4);
    let is_real = z.imag().clone().abs() < real_tol;
    // Mixing constants for projecting complex inputs to real PSLQ
    // vectors: any genuine relation survives every projection, while a
    // spurious one is caught by the verification step (and retried with
    // the next constant).
    let projections: Vec<Float> = if is_real {
        vec![Float::with_val(prec, 0)]
    } else {
        vec![
            Float::with_val(prec, 2).sqrt(),
            Float::with_val(prec, 3).sqrt() + 1u32,
        ]
    };

    let mut powers = vec![Complex::with_val(prec, 1)];
    for _ in 0..max_deg {
        let next = powers.last().unwrap().clone() * &z;
        powers.push(next);
    }
    let mut scale = Float::with_val(prec, 1);
    for p in &powers {
        let m: Float = p.clone().abs().real().clone();
        if m > scale {
            scale = m;
        }
    }

    let mut saw_error = false;
    for deg in 1..=max_deg as usize {
        for t in &projections {
            let v: Vec<Float> = powers[..=deg]
                .iter()
                .map(|p| Float::with_val(prec, p.real() + t.clone() * p.imag()))
                .collect();
            let rel = match pslq(&v, digits, &max_coeff) {
                Ok(Some(r)) => r,
                Ok(None) => continue,
                Err(_) => {
                    saw_error = true;
                    continue;
                }
            };
            let coeffs = normalize_poly(rel.coefficients);
            if coeffs.len() < 2 {
                continue;
            }
            let residual: Float = evaluate_poly(&coeffs, &z, prec).abs().real().clone();
            if residual < verify_tol.clone() * &scale {
                let rule = digits as u64 >= 4 * (coeffs.len() as u64 - 1) * height_digits as u64;
                return Ok(Some(MinPoly {
                    coefficients: coeffs,
                    residual,
                    precision_rule_met: rule,
                }));
            }
        }
    }
    if saw_error {
        return Err(HpError::PrecisionExhausted);
    }
    Ok(None)
}
