//! Exact arithmetic substrate: residue representatives, unit groups,
//! rational linear algebra and quadratic characters.

mod linalg;

pub use linalg::{LinearSolution, RationalMatrix};

use rug::ops::RemRounding;
use rug::{Integer, Rational};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("invalid modulus {0}: must be >= 2")]
    InvalidModulus(i64),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
}

/// Canonical representative of `x` modulo `d`, in `[0, d-1]`.
pub fn rep(x: i64, d: i64) -> Result<i64, ExactError> {
    if d < 2 {
        return Err(ExactError::InvalidModulus(d));
    }
    Ok(x.rem_euclid(d))
}

/// Like [`rep`] but for arbitrary-precision arguments.
pub fn rep_big(x: &Integer, d: i64) -> Result<Integer, ExactError> {
    if d < 2 {
        return Err(ExactError::InvalidModulus(d));
    }
    Ok(x.clone().rem_euc(Integer::from(d)))
}

/// A residue class modulo `d >= 2`, stored by its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    modulus: i64,
    value: i64,
}

impl ResidueClass {
    pub fn new(value: i64, modulus: i64) -> Result<Self, ExactError> {
        Ok(Self {
            modulus,
            value: rep(value, modulus)?,
        })
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn add(&self, other: i64) -> Self {
        Self {
            modulus: self.modulus,
            value: (self.value + other.rem_euclid(self.modulus)).rem_euclid(self.modulus),
        }
    }

    pub fn mul(&self, other: i64) -> Self {
        let v = (self.value as i128 * (other.rem_euclid(self.modulus)) as i128)
            .rem_euclid(self.modulus as i128) as i64;
        Self {
            modulus: self.modulus,
            value: v,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            modulus: self.modulus,
            value: (self.modulus - self.value) % self.modulus,
        }
    }

    /// Multiplicative inverse, if this class is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let inv = mod_inverse(self.value, self.modulus)?;
        Some(Self {
            modulus: self.modulus,
            value: inv,
        })
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Modular inverse of `a` mod `d`, when `gcd(a, d) = 1`.
pub fn mod_inverse(a: i64, d: i64) -> Option<i64> {
    let (mut old_r, mut r) = (a.rem_euclid(d), d);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(d))
}

/// Ascending list of units of `Z/d`, i.e. all `a` in `[1, d-1]` with
/// `gcd(a, d) = 1`.
pub fn unit_group(d: i64) -> Result<Vec<i64>, ExactError> {
    if d < 2 {
        return Err(ExactError::InvalidModulus(d));
    }
    Ok((1..d).filter(|&a| gcd(a, d) == 1).collect())
}

/// Euler totient of `d`.
pub fn totient(d: i64) -> Result<i64, ExactError> {
    Ok(unit_group(d)?.len() as i64)
}

/// Full Kronecker symbol `(D | n)`, extended to all integers.
pub fn kronecker_symbol(d: i64, n: i64) -> i64 {
    // (D | 0) is 1 for D = +-1 and 0 otherwise.
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    if d % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = d;
    let mut b = n;
    let mut k = 1i64;
    // Strip the sign of n: (D | -1) = -1 iff D < 0.
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // Strip twos from n using (D | 2) = 0, +-1 by D mod 8.
    let two_sym = |x: i64| -> i64 {
        match x.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    };
    while b % 2 == 0 {
        b /= 2;
        k *= two_sym(a);
    }
    // Now b is odd and positive: Jacobi-style reciprocity loop.
    loop {
        if b == 1 {
            return k;
        }
        a = a.rem_euclid(b);
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        while a % 2 == 0 {
            a /= 2;
            k *= two_sym(b);
        }
        if a == 1 {
            return k;
        }
        // Both a and b odd: quadratic reciprocity.
        if a % 4 == 3 && b % 4 == 3 {
            k = -k;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Exact rational helper: `n/m` in lowest terms.
pub fn rational(n: i64, m: i64) -> Rational {
    Rational::from((n, m))
}
