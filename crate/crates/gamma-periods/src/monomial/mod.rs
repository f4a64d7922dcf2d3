//! The formal calculus of gamma monomials.
//!
//! A gamma monomial is a class `(2*pi*i)^r * prod_{a=1}^{d-1} Gamma(a/d)^{e(a)}`
//! modulo nonzero algebraic factors. This module solves the defining
//! moment equations for exponent functions, builds predicted monomials,
//! and certifies algebraicity through the vanishing-moment criterion.

mod serialize;

pub use serialize::{ExponentFunctionJson, GammaMonomialJson};

use std::collections::BTreeMap;

use rug::Rational;
use thiserror::Error;

use crate::exact::{self, ExactError, RationalMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum MonomialError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("{0} is not a unit modulo {1}")]
    InvalidUnit(i64, i64),
    #[error("Hodge symmetry violated: p({0}) + p({1}) != weight")]
    AsymmetricHodge(i64, i64),
    #[error("Hodge function must assign a value to every unit (missing {0})")]
    MissingUnit(i64),
    #[error("moment system is inconsistent: no exponent function exists")]
    NoEpsilon,
    #[error("incompatible moduli {0} and {1}")]
    IncompatibleModuli(i64, i64),
}

/// Hodge data: an integer `p(lambda)` for each unit `lambda` of `Z/d`,
/// subject to the symmetry `p(lambda) + p(-lambda) = weight`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeFunction {
    modulus: i64,
    weight: i64,
    values: BTreeMap<i64, i64>,
}

impl HodgeFunction {
    pub fn new(
        modulus: i64,
        weight: i64,
        values: BTreeMap<i64, i64>,
    ) -> Result<Self, MonomialError> {
        let units = exact::unit_group(modulus)?;
        for &u in &units {
            if !values.contains_key(&u) {
                return Err(MonomialError::MissingUnit(u));
            }
        }
        for &u in &units {
            let neg = (modulus - u) % modulus;
            if values[&u] + values[&neg] != weight {
                return Err(MonomialError::AsymmetricHodge(u, neg));
            }
        }
        Ok(Self {
            modulus,
            weight,
            values,
        })
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn value(&self, unit: i64) -> i64 {
        self.values[&unit]
    }
}

/// A rational-valued function on `Z/d`, stored on `0..d-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentFunction {
    modulus: i64,
    values: Vec<Rational>,
}

impl ExponentFunction {
    pub fn zero(modulus: i64) -> Result<Self, MonomialError> {
        if modulus < 2 {
            return Err(ExactError::InvalidModulus(modulus).into());
        }
        Ok(Self {
            modulus,
            values: vec![Rational::new(); modulus as usize],
        })
    }

    pub fn from_values(modulus: i64, values: Vec<Rational>) -> Result<Self, MonomialError> {
        if modulus < 2 {
            return Err(ExactError::InvalidModulus(modulus).into());
        }
        assert_eq!(values.len(), modulus as usize, "need one value per residue");
        Ok(Self { modulus, values })
    }

    pub fn from_integers(modulus: i64, values: &[i64]) -> Result<Self, MonomialError> {
        Self::from_values(modulus, values.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn value(&self, a: i64) -> &Rational {
        &self.values[a.rem_euclid(self.modulus) as usize]
    }

    pub fn value_mut(&mut self, a: i64) -> &mut Rational {
        &mut self.values[a.rem_euclid(self.modulus) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0)
    }

    /// Pointwise difference (same modulus).
    pub fn sub(&self, other: &Self) -> Result<Self, MonomialError> {
        if self.modulus != other.modulus {
            return Err(MonomialError::IncompatibleModuli(
                self.modulus,
                other.modulus,
            ));
        }
        Ok(Self {
            modulus: self.modulus,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        })
    }
}

/// The moment `(1/d) * sum_a eps(a) <a*lambda>` of an exponent function
/// at a unit `lambda`.
pub fn moment(eps: &ExponentFunction, lambda: i64) -> Result<Rational, MonomialError> {
    let d = eps.modulus;
    let l = lambda.rem_euclid(d);
    if exact::gcd(l, d) != 1 {
        return Err(MonomialError::InvalidUnit(lambda, d));
    }
    let mut acc = Rational::new();
    for a in 0..d {
        let r = exact::rep(a * l, d)?;
        acc += Rational::from(eps.value(a) * &Rational::from(r));
    }
    Ok(acc / Rational::from(d))
}

/// True iff every moment of `eps` vanishes; this certifies that the
/// associated gamma monomials are algebraic for every unit twist.
pub fn koblitz_ogus_trivial(eps: &ExponentFunction) -> bool {
    exact::unit_group(eps.modulus)
        .expect("valid modulus")
        .into_iter()
        .all(|l| moment(eps, l).expect("unit") == 0)
}

/// Canonical solution of the moment equations, plus the kernel of the
/// system so callers can re-gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSolution {
    pub canonical: ExponentFunction,
    pub kernel: Vec<ExponentFunction>,
}

/// Solve `(1/d) * sum_a eps(a) <a*lambda> = p(lambda)` for all units.
///
/// The system is underdetermined; the canonical representative is the
/// exact least-norm solution (normal equations in rational arithmetic)
/// with `eps(0) = 0`. Returns the kernel basis alongside.
pub fn solve_epsilon(p: &HodgeFunction) -> Result<EpsilonSolution, MonomialError> {
    let d = p.modulus;
    let units = exact::unit_group(d)?;
    // Row per unit lambda, column per residue a in 1..d-1, entry <a*lambda>.
    let a_mat = RationalMatrix::from_rows(
        units
            .iter()
            .map(|&l| {
                (1..d)
                    .map(|a| Rational::from(exact::rep(a * l, d).expect("valid")))
                    .collect()
            })
            .collect(),
    )?;
    let b: Vec<Rational> = units
        .iter()
        .map(|&l| Rational::from(d * p.value(l)))
        .collect();
    // Least-norm solution: x = A^T y with (A A^T) y = b. The Gram system
    // is solvable exactly when A x = b is.
    let at = a_mat.transpose();
    let gram = a_mat.mul(&at)?;
    let Some(gram_sol) = gram.solve(&b)? else {
        return Err(MonomialError::NoEpsilon);
    };
    let x = at.mul_vec(&gram_sol.particular)?;
    // The moment equations must reproduce p exactly.
    let check = a_mat.mul_vec(&x)?;
    if check != b {
        return Err(MonomialError::NoEpsilon);
    }
    let mut values = vec![Rational::new()];
    values.extend(x);
    let canonical = ExponentFunction::from_values(d, values)?;
    let full_sol = a_mat.solve(&b)?.expect("consistent by the Gram check");
    let kernel = full_sol
        .kernel
        .into_iter()
        .map(|v| {
            let mut vals = vec![Rational::new()];
            vals.extend(v);
            ExponentFunction::from_values(d, vals)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EpsilonSolution { canonical, kernel })
}

/// A formal product `(2*pi*i)^r * prod_{a=1}^{d-1} Gamma(a/d)^{e(a)}`,
/// considered modulo nonzero algebraic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMonomial {
    modulus: i64,
    two_pi_i_power: Rational,
    /// Exponent of Gamma(a/d) at index a; slot 0 is unused and kept zero.
    exponents: Vec<Rational>,
}

/// One rewriting step recorded by [`GammaMonomial::reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    /// Removed `weight` from both `e(a)` and `e(d-a)` and added it to the
    /// power of `2*pi*i` (reflection formula at `a/d`).
    Reflection { a: i64, weight: Rational },
    /// Removed the constant `weight` from every `e(a)` and added
    /// `weight * (d-1)/2` to the power of `2*pi*i` (distribution at s=1).
    Distribution { weight: Rational },
}

impl GammaMonomial {
    pub fn identity(modulus: i64) -> Result<Self, MonomialError> {
        if modulus < 2 {
            return Err(ExactError::InvalidModulus(modulus).into());
        }
        Ok(Self {
            modulus,
            two_pi_i_power: Rational::new(),
            exponents: vec![Rational::new(); modulus as usize],
        })
    }

    pub fn new(
        modulus: i64,
        two_pi_i_power: Rational,
        exponents: Vec<(i64, Rational)>,
    ) -> Result<Self, MonomialError> {
        let mut m = Self::identity(modulus)?;
        m.two_pi_i_power = two_pi_i_power;
        for (a, e) in exponents {
            assert!((1..modulus).contains(&a), "exponent index out of range");
            m.exponents[a as usize] += e;
        }
        Ok(m)
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn two_pi_i_power(&self) -> &Rational {
        &self.two_pi_i_power
    }

    pub fn exponent(&self, a: i64) -> &Rational {
        &self.exponents[a.rem_euclid(self.modulus) as usize]
    }

    pub fn exponent_mut(&mut self, a: i64) -> &mut Rational {
        &mut self.exponents[a.rem_euclid(self.modulus) as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.two_pi_i_power == 0 && self.exponents.iter().all(|e| *e == 0)
    }

    /// Group law: `self * other^k`, componentwise on the exponents.
    pub fn combine(&self, other: &Self, k: &Rational) -> Result<Self, MonomialError> {
        if self.modulus != other.modulus {
            return Err(MonomialError::IncompatibleModuli(
                self.modulus,
                other.modulus,
            ));
        }
        let mut out = self.clone();
        out.two_pi_i_power += Rational::from(&other.two_pi_i_power * k);
        for a in 1..self.modulus {
            *out.exponent_mut(a) += Rational::from(other.exponent(a) * k);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Self {
        let mut out = self.clone();
        out.two_pi_i_power = -out.two_pi_i_power.clone();
        for e in &mut out.exponents {
            *e = -e.clone();
        }
        out
    }

    /// Normalize by the reflection and distribution relations.
    ///
    /// Reflection first: for each pair `(a, d-a)` the matched weight
    /// `e(d-a)` moves into the `2*pi*i` power (one unit of `2*pi*i` per
    /// matched unit, since `Gamma(a/d)*Gamma(1-a/d)` is an algebraic
    /// multiple of `2*pi*i`). When `d` is even the self-paired `e(d/2)`
    /// reduces at half weight. Then distribution at `s = 1`: a constant
    /// residual vector `c` becomes `c*(d-1)/2` units of `2*pi*i`.
    pub fn reduce(&self) -> (Self, Vec<ReductionStep>) {
        let d = self.modulus;
        let mut out = self.clone();
        let mut cert = Vec::new();
        for a in 1..=(d / 2) {
            let partner = d - a;
            let w = if partner == a {
                out.exponent(a) / Rational::from(2)
            } else {
                out.exponent(partner).clone()
            };
            if w == 0 {
                continue;
            }
            *out.exponent_mut(a) -= &w;
            *out.exponent_mut(partner) -= &w;
            out.two_pi_i_power += &w;
            cert.push(ReductionStep::Reflection { a, weight: w });
        }
        let c = out.exponent(1).clone();
        if c != 0 && (1..d).all(|a| *out.exponent(a) == c) {
            for a in 1..d {
                *out.exponent_mut(a) -= &c;
            }
            out.two_pi_i_power += Rational::from(&c * &Rational::from((d - 1, 2)));
            cert.push(ReductionStep::Distribution { weight: c });
        }
        (out, cert)
    }

    /// Read the exponent vector back as an exponent function via
    /// `eps(a) = e(d - a)`, matching `Gamma(1 - a/d) = Gamma((d-a)/d)`.
    pub fn as_exponent_function(&self) -> ExponentFunction {
        let d = self.modulus;
        let mut eps = ExponentFunction::zero(d).expect("valid modulus");
        for a in 1..d {
            *eps.value_mut(a) = self.exponent(d - a).clone();
        }
        eps
    }

    /// Sufficient certificate of algebraicity.
    ///
    /// The monomial is certified algebraic when the moments of
    /// `eps(a) = e(d-a)` all equal `-r`: reflection steps can then trade
    /// the `2*pi*i` power away exactly, leaving a Koblitz-Ogus-trivial
    /// residual. A `false` return means "not certified", not
    /// "transcendental".
    pub fn is_algebraic(&self) -> bool {
        let eps = self.as_exponent_function();
        let target = -self.two_pi_i_power.clone();
        exact::unit_group(self.modulus)
            .expect("valid modulus")
            .into_iter()
            .all(|l| moment(&eps, l).expect("unit") == target)
    }
}

/// The monomial predicted for a twist `lambda` from an exponent
/// function: exponent `eps(a / lambda)` on `Gamma(1 - a/d)`.
pub fn gd_prediction(
    eps: &ExponentFunction,
    lambda: i64,
) -> Result<GammaMonomial, MonomialError> {
    let d = eps.modulus();
    let l = lambda.rem_euclid(d);
    let linv = exact::mod_inverse(l, d).ok_or(MonomialError::InvalidUnit(lambda, d))?;
    let mut m = GammaMonomial::identity(d)?;
    for a in 1..d {
        let idx = exact::rep(a * linv, d)?;
        *m.exponent_mut(d - a) += eps.value(idx);
    }
    Ok(m)
}
