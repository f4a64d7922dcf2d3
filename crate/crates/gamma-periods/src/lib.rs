//! Exact and high-precision tools for verifying period identities built
//! from gamma values at rational arguments.
//!
//! The crate is organized in layers:
//!
//! * [`exact`] — residue arithmetic, unit groups, exact rational linear
//!   algebra and the Kronecker symbol.
//! * [`monomial`] — the formal calculus of gamma monomials
//!   `(2*pi*i)^r * prod Gamma(a/d)^e(a)` with rational exponents, the
//!   exponent-function solver and algebraicity certificates.
//! * [`cover`] — eigensheaf degrees, residues and Hodge numbers for
//!   d-fold cyclic covers of the projective line, plus the exact
//!   Riemann-Roch and duality cross-checks.
//! * [`hp`] — arbitrary-precision numerics: gamma evaluation, tanh-sinh
//!   quadrature with endpoint singularities, twisted period matrices,
//!   AGM and PSLQ integer-relation detection.
//! * [`verify`] — end-to-end identity verifications producing
//!   machine-readable reports.

pub mod cover;
pub mod exact;
pub mod hp;
pub mod monomial;
pub mod verify;
