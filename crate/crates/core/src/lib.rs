//! q-disk polynomials in the quantum disk algebra: exact construction, linearization
//! coefficients, instances of the addition formula and the discrete hypergroup on `Z_+^2`.
//!
//! Everything is computed through a [`Kernel`], which fixes the coefficient backend
//! ([`Exact`] rational functions of `q`, or [`Numeric`] floats at a fixed `q`) and
//! caches polynomials and rows across calls.

pub mod addition;
pub mod haar;
pub mod hypergroup;
pub mod kernel;
pub mod linearize;
pub mod ncalg;
pub mod qpoly;
pub mod scalar;

pub use addition::{OmegaPair, TensorIdentityReport, ThreeVar, ThreeVarPoly};
pub use hypergroup::{convolution_power, AxiomCheck, AxiomReport, Measure, Point};
pub use kernel::{DiskCopy, Kernel, KernelError};
pub use linearize::{LinIndex, LinTable, PositivityReport, SosForm};
pub use ncalg::{Algebra, AlgebraError, NcElement, TensorElement};
pub use scalar::{AlphaParam, Coeff, Exact, Numeric, QBase, QExp, QLabel, Scalar, ScalarError};
