//! Exact rational linear algebra: solving `A x = b` with an explicit
//! kernel basis, all in arbitrary-precision rationals.

use rug::Rational;

use super::ExactError;

/// A dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Outcome of [`RationalMatrix::solve`]: a particular solution together
/// with a basis of the null space, or `None` when the system is
/// inconsistent.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::new(); rows * cols],
        }
    }

    pub fn from_rows(rows_in: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let rows = rows_in.len();
        let cols = rows_in.first().map_or(0, |r| r.len());
        if rows_in.iter().any(|r| r.len() != cols) {
            return Err(ExactError::ShapeError("ragged rows".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries: rows_in.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::from(1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::new();
                for k in 0..self.cols {
                    acc += Rational::from(self.at(i, k) * other.at(k, j));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::ShapeError(format!(
                "vector length {} vs {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::new();
                for (j, x) in v.iter().enumerate() {
                    acc += Rational::from(self.at(i, j) * x);
                }
                acc
            })
            .collect())
    }

    /// Solve `A x = b` exactly. Returns a particular solution and a basis
    /// of the kernel, or `None` if the system is inconsistent.
    ///
    /// Elimination pivots on the first nonzero entry of each column, so
    /// the reduced form (and hence the kernel basis) is deterministic.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<LinearSolution>, ExactError> {
        if b.len() != self.rows {
            return Err(ExactError::ShapeError(format!(
                "rhs length {} vs {} rows",
                b.len(),
                self.rows
            )));
        }
        // Augmented matrix [A | b], reduced to RREF.
        let mut m = self.clone();
        let mut rhs: Vec<Rational> = b.to_vec();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&r| *m.at(r, col) != 0) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    let tmp = m.at(p, j).clone();
                    *m.at_mut(p, j) = m.at(row, j).clone();
                    *m.at_mut(row, j) = tmp;
                }
                rhs.swap(p, row);
            }
            let inv = Rational::from(m.at(row, col).clone().recip_ref());
            for j in col..self.cols {
                let v = Rational::from(m.at(row, j) * &inv);
                *m.at_mut(row, j) = v;
            }
            rhs[row] *= &inv;
            for r in 0..self.rows {
                if r != row && *m.at(r, col) != 0 {
                    let factor = m.at(r, col).clone();
                    for j in col..self.cols {
                        let delta = Rational::from(m.at(row, j) * &factor);
                        *m.at_mut(r, j) -= delta;
                    }
                    let delta = Rational::from(&rhs[row] * &factor);
                    rhs[r] -= delta;
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        // Inconsistent when a zero row of A meets a nonzero rhs.
        for r in row..self.rows {
            if rhs[r] != 0 {
                return Ok(None);
            }
        }
        let mut particular = vec![Rational::new(); self.cols];
        for (r, &col) in pivot_cols.iter().enumerate() {
            particular[col] = rhs[r].clone();
        }
        let mut kernel = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::new(); self.cols];
            v[free] = Rational::from(1);
            for (r, &col) in pivot_cols.iter().enumerate() {
                v[col] = -Rational::from(m.at(r, free));
            }
            kernel.push(v);
        }
        Ok(Some(LinearSolution { particular, kernel }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn solve_1x1() {
        let a = RationalMatrix::from_rows(vec![vec![q(1, 1)]]).unwrap();
        let sol = a.solve(&[q(2, 1)]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![q(2, 1)]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn solve_underdetermined() {
        let a = RationalMatrix::from_rows(vec![vec![q(1, 1), q(1, 1)]]).unwrap();
        let sol = a.solve(&[q(0, 1)]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![q(0, 1), q(0, 1)]);
        assert_eq!(sol.kernel, vec![vec![q(-1, 1), q(1, 1)]]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = RationalMatrix::from_rows(vec![vec![q(1, 1)], vec![q(2, 1)]]).unwrap();
        assert_eq!(a.solve(&[q(1, 1), q(3, 1)]).unwrap(), None);
    }

    #[test]
    fn shape_errors() {
        let a = RationalMatrix::from_rows(vec![vec![q(1, 1)]]).unwrap();
        assert!(a.solve(&[q(1, 1), q(1, 1)]).is_err());
        assert!(RationalMatrix::from_rows(vec![vec![q(1, 1)], vec![]]).is_err());
    }

    #[test]
    fn solution_and_kernel_are_exact() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..6);
            let a = RationalMatrix::from_rows(
                (0..rows)
                    .map(|_| {
                        (0..cols)
                            .map(|_| q(rng.gen_range(-4..5), rng.gen_range(1..4)))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            // Build a consistent rhs from a random exact solution.
            let x: Vec<Rational> = (0..cols).map(|_| q(rng.gen_range(-3..4), 1)).collect();
            let b = a.mul_vec(&x).unwrap();
            let sol = a.solve(&b).unwrap().unwrap();
            assert_eq!(a.mul_vec(&sol.particular).unwrap(), b);
            for v in &sol.kernel {
                let av = a.mul_vec(v).unwrap();
                assert!(av.iter().all(|e| *e == 0));
            }
        }
    }
}
