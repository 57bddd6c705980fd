//! Carathéodory-type interpolation for J-Potapov functions.
//!
//! Given a signature matrix `J` and coefficients `A_0..A_n`, the library
//! decides whether some J-Potapov function on the unit disk has these Taylor
//! coefficients, parametrizes all such functions by a linear-fractional
//! transformation, and describes the set of their values at a point as a
//! matrix ball (Weyl ball).

pub mod error;
pub mod io;
pub mod matkernel;
pub mod polynomials;
pub mod sequence;
pub mod solve;
pub mod suite;
pub mod weyl;

pub use error::{Error, Result};
pub use matkernel::{c, CMatrix, Contractivity, SignatureMatrix, Tolerances};
pub use polynomials::{FourPolys, MatrixPoly};
pub use sequence::{BallParams, Classification, PotapovSeq};
pub use solve::{Orientation, RationalMatrixFn, SchurParam};
pub use weyl::{LimitTable, WeylBall};
