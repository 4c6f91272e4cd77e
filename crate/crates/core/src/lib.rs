//! Truncated Fock-space representations of the quantum matrix ball `Pol(Mat_2)_q`.
//!
//! The crate builds the irreducible representations of the quantized polynomial
//! algebra on the 2x2 matrix ball, together with the `C[SU_n]_q` representations
//! they are assembled from, as symbolic tensor-leg expressions over the Toeplitz
//! atoms `S`, `S*`, `C_q`, `d_q`, `P = I - SS*` and the circle coordinate `z`.
//! Expressions are applied matrix-free to truncated tensor states, which is what
//! every relation check, norm estimate and `q -> 0` sweep runs on.
//!
//! The numeric layer is generic over the real scalar (`f32`/`f64`); symbolic
//! coefficients are exact Laurent polynomials in `q` over the rationals. The
//! aliases below fix the concrete choices used by the CLI and the reports.

pub mod error;
pub mod expr;
pub mod laurent;
pub mod limitlab;
pub mod norm;
pub mod permutations;
pub mod polmat;
pub mod qsu;
pub mod repcat;
pub mod runner;
pub mod scalar;
pub mod series;
pub mod state;

pub use error::{Error, Result};
pub use expr::{Atom, Coeff, EvalAt, Expr, FactorKind, LegWord};
pub use laurent::LaurentPoly;
pub use scalar::Real;
pub use state::{Binding, State};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;
/// Exact Laurent polynomial in `q` with rational coefficients.
pub type Laurent = LaurentPoly<Rational>;
/// Double-precision complex scalar.
pub type Complex64 = num_complex::Complex<f64>;

/// Symbolic expression with exact Laurent coefficients.
pub type ExactExpr = Expr<Laurent>;
/// Expression with double-precision complex coefficients.
pub type NumExpr = Expr<Complex64>;
/// Truncated tensor state in double precision.
pub type State64 = State<f64>;
/// Truncated tensor state in single precision.
pub type State32 = State<f32>;
