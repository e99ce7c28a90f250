//! Exact computation in higher-order Fourier analysis over finite abelian
//! groups: Gowers uniformity norms, discrete-derivative polynomial calculus,
//! symmetric multilinear forms and their universal systems, degree-k cube
//! spaces, and finite skew-product dynamics with exact cocycle algebra.
//!
//! Everything that can be exact is exact: values on the circle R/Z are
//! reduced rationals with arbitrary-precision integers, and the floating
//! kernels (norms, correlation search) use compensated summation in a fixed
//! reduction order so results are bit-identical across thread counts.

pub mod cubes;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod gowers;
pub mod group;
pub mod multilinear;
pub mod parallel;
pub mod polycalc;
pub mod rational;
pub mod rng;
pub mod suites;
pub mod table;

pub use error::Error;
pub use group::{Character, GroupElement, GroupSpec, SylowDecomposition};
pub use polycalc::PolynomialPhase;
pub use rational::UnitRational;
pub use table::{Complex, ComplexTable, ExactTable, FunctionTable};

/// Tool version reported in every machine-readable output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
