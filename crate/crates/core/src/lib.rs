//! Exact algebraic numbers from decimal approximations.
//!
//! Given a decimal approximation of an unknown algebraic number together with
//! a degree bound `n` and a height bound `N` on its minimal polynomial, this
//! crate reconstructs the exact minimal polynomial (and, for quadratics, the
//! exact closed form) using a parameterized integer relation search with
//! rigorous error control. The same machinery factors univariate integer
//! polynomials through their approximate real roots.
//!
//! The main entry points are:
//! - [`minpoly::reconstruct_minpoly`]: minimal polynomial from an
//!   `⟨approximation, degree, height⟩` triple,
//! - [`minpoly::recover_quadratic`]: exact closed form `(p + q·√d)/r` for
//!   quadratic and rational inputs,
//! - [`pslq::find_relation`]: the underlying integer relation engine with a
//!   norm lower-bound certificate on failure,
//! - [`factorizer::factor_over_integers`]: factorization of `Z[x]` polynomials
//!   by minimal-polynomial reconstruction of their approximate roots,
//! - [`minpoly::required_digits`]: how many correct decimal digits of the
//!   approximation guarantee exact reconstruction.

pub mod factorizer;
pub mod minpoly;
pub mod numerics;
pub mod polyarith;
pub mod pslq;

pub use factorizer::{factor_over_integers, FactorJob, FactorList};
pub use minpoly::{
    recover_quadratic, reconstruct_minpoly, required_digits, AlgebraicTriple,
    QuadraticClosedForm, ReconstructionReport,
};
pub use numerics::{Int, NumericContext, Rational, Real};
pub use polyarith::IntPolynomial;
pub use pslq::{find_relation, PslqState, RelationResult};
