//! Period matrices of rank-one local systems on the punctured line:
//! integrals of a multivalued twist against logarithmic one-forms over
//! the bounded intervals between branch points.
//!
//! Branch bookkeeping is interval-by-interval: the twist is taken
//! real-positive on each interval and the relative phase between
//! intervals is the accumulated half-monodromy factor `exp(i*pi*res)`
//! of the points to the right. This keeps every integral a real-axis
//! tanh-sinh integral with algebraic endpoint singularities.

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use super::{float_from_rational, integrate_singular, pi, prec_bits, HpError};

#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub size: usize,
    /// Row-major entries; row = cycle (interval), column = form.
    pub entries: Vec<Complex>,
    /// Interval endpoints of each cycle.
    pub cycle_labels: Vec<(Rational, Rational)>,
    /// De Rham basis forms, one label per column.
    pub form_labels: Vec<String>,
}

impl PeriodMatrix {
    pub fn at(&self, i: usize, j: usize) -> &Complex {
        &self.entries[i * self.size + j]
    }
}

/// LU determinant with partial pivoting.
pub fn determinant(entries: &[Complex], size: usize, prec: u32) -> Complex {
    let mut m: Vec<Complex> = entries
        .iter()
        .map(|z| Complex::with_val(prec, z))
        .collect();
    let mut det = Complex::with_val(prec, 1);
    for col in 0..size {
        let mut pivot = col;
        let mut best: Float = m[col * size + col].clone().abs().real().clone();
        for row in col + 1..size {
            let mag: Float = m[row * size + col].clone().abs().real().clone();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best.is_zero() {
            return Complex::with_val(prec, 0);
        }
        if pivot != col {
            for j in 0..size {
                m.swap(col * size + j, pivot * size + j);
            }
            det = -det;
        }
        let p = m[col * size + col].clone();
        det *= &p;
        for row in col + 1..size {
            let factor = m[row * size + col].clone() / &p;
            for j in col..size {
                let delta = factor.clone() * &m[col * size + j];
                m[row * size + j] -= delta;
            }
        }
    }
    det
}

/// One entry: integral over `(x[c], x[c+1])` of the twist against the
/// form with log poles at `x[j]`, `x[j+1]`.
fn entry(
    points_f: &[Float],
    residues: &[Rational],
    c: usize,
    j: usize,
    digits: u32,
    prec: u32,
) -> Result<Complex, HpError> {
    let n = points_f.len();
    // Exponent at each finite point: residue, minus 1 at the two log
    // poles of the form.
    let betas: Vec<Rational> = (0..n)
        .map(|i| {
            let mut b = residues[i].clone();
            if i == j || i == j + 1 {
                b -= 1u32;
            }
            b
        })
        .collect();
    let lo = points_f[c].clone();
    let hi = points_f[c + 1].clone();
    let g = |t: &Float, d_lo: &Float, d_hi: &Float| -> Complex {
        let p = t.prec();
        let mut acc = Float::with_val(p, 1);
        for (i, beta) in betas.iter().enumerate() {
            if i == c || i == c + 1 {
                continue;
            }
            // Distances to the two interval ends come in exactly; the
            // other points are well separated from t.
            let _ = (d_lo, d_hi);
            let dist: Float = Float::with_val(p, t - &points_f[i]).abs();
            acc *= dist.pow(&float_from_rational(beta, p));
        }
        Complex::with_val(p, acc)
    };
    let base = integrate_singular(&g, &lo, &hi, &betas[c], &betas[c + 1], digits)?;
    // Orientation signs of the two form denominators on this interval.
    let mut sign = 1i32;
    for i in [j, j + 1] {
        if i > c {
            sign = -sign;
        }
    }
    // Scale of the form: x[j+1] - x[j].
    let scale = Float::with_val(prec, &points_f[j + 1] - &points_f[j]);
    // Branch phase: exp(i*pi*sum of residues to the right).
    let mut rsum = Rational::new();
    for r in residues.iter().skip(c + 1) {
        rsum += r;
    }
    let angle = pi(prec) * float_from_rational(&rsum, prec);
    let phase = Complex::with_val(prec, (angle.clone().cos(), angle.sin()));
    Ok(base * phase * scale * sign)
}

/// Build the twisted period matrix for sorted finite branch points with
/// residues in (0,1), optionally twisted at infinity as well.
///
/// The matrix is `k x k` with `k = m - 2`, `m` the total number of
/// twisted points. If the default interval/form choice is numerically
/// degenerate the basis is shifted deterministically and retried.
pub fn twisted_period_matrix(
    points: &[Rational],
    residues: &[Rational],
    infinity_residue: Option<&Rational>,
    digits: u32,
) -> Result<PeriodMatrix, HpError> {
    let prec = prec_bits(digits) + 32;
    if points.len() != residues.len() {
        return Err(HpError::InvalidInput(
            "one residue per finite point required".into(),
        ));
    }
    for w in points.windows(2) {
        if w[0] >= w[1] {
            return Err(HpError::InvalidInput(
                "points must be strictly increasing".into(),
            ));
        }
    }
    for r in residues.iter().chain(infinity_residue) {
        if *r <= 0 || *r >= 1 {
            return Err(HpError::UnsupportedResidue(r.to_string()));
        }
    }
    let m = points.len() + usize::from(infinity_residue.is_some());
    if m < 3 {
        return Err(HpError::InvalidInput(format!(
            "need at least 3 twisted points for a nontrivial matrix, got {m}"
        )));
    }
    let k = m - 2;
    let intervals = points.len() - 1;
    let points_f: Vec<Float> = points.iter().map(|q| float_from_rational(q, prec)).collect();

    let threshold = Float::with_val(prec, 10).pow(-(digits as i32) / 2);
    let mut tried_any = false;
    for cycle_off in 0..=1usize {
        if cycle_off + k > intervals {
            continue;
        }
        for form_off in 0..=1usize {
            if form_off + k > intervals {
                continue;
            }
            tried_any = true;
            let mut entries = Vec::with_capacity(k * k);
            for c in 0..k {
                for j in 0..k {
                    entries.push(entry(
                        &points_f,
                        residues,
                        c + cycle_off,
                        j + form_off,
                        digits,
                        prec,
                    )?);
                }
            }
            let det = determinant(&entries, k, prec);
            let mut scale = Float::with_val(prec, 1);
            for e in &entries {
                let mag: Float = e.clone().abs().real().clone();
                if mag > scale {
                    scale = mag;
                }
            }
            let det_mag: Float = det.abs().real().clone();
            if det_mag > threshold.clone() * scale.pow(k as u32) {
                let cycle_labels = (0..k)
                    .map(|c| {
                        (
                            points[c + cycle_off].clone(),
                            points[c + cycle_off + 1].clone(),
                        )
                    })
                    .collect();
                let form_labels = (0..k)
                    .map(|j| {
                        format!(
                            "dt*({}-{})/((t-{})*(t-{}))",
                            points[j + form_off + 1],
                            points[j + form_off],
                            points[j + form_off],
                            points[j + form_off + 1]
                        )
                    })
                    .collect();
                return Ok(PeriodMatrix {
                    size: k,
                    entries,
                    cycle_labels,
                    form_labels,
                });
            }
        }
    }
    if tried_any {
        Err(HpError::DegenerateBasis)
    } else {
        Err(HpError::InvalidInput(
            "not enough bounded intervals for the requested rank".into(),
        ))
    }
}
