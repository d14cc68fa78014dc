//! Exact symbolic computation for the affine Lie algebra `sl2^` and the
//! twisted de Rham complex on the punctured line.
//!
//! The crate is organized bottom-up:
//!
//! * [`coeffs`]: arbitrary-precision rationals, sparse multivariate
//!   polynomials and canonical rational functions; the scalar field for
//!   everything else.
//! * [`loop_algebra`]: the affine Lie algebra: basis symbols `x*T^j` plus
//!   the central element, the bracket, and the maps `pi`, `rho`, `theta`.
//! * [`verma`]: Verma modules `V(m, k-m)`: PBW basis enumeration and the
//!   normal-ordering action engine.
//! * [`contragradient`]: dual-basis covectors, the pairing, the coaction,
//!   and the exhaustive verifier for the two main covector identities.
//! * [`shapovalov`]: Gram matrices, resonance lines, singular-vector
//!   kernels and the continued vectors `X_a`, `Y_a`.
//! * [`derham`]: the twisted de Rham complex: basis, differential,
//!   truncated cohomology ranks, resonances and relation primitives.
//! * [`chain`]: the Lie algebra of `sl2`-valued functions, its action on
//!   tensor products of contragradient modules, and the chain map `eta`.
//! * [`linalg`]: exact dense linear algebra used by the modules above.

pub mod chain;
pub mod coeffs;
pub mod contragradient;
pub mod derham;
pub mod linalg;
pub mod loop_algebra;
pub mod shapovalov;
pub mod verma;

pub use coeffs::{CoeffError, Polynomial, RationalFunction, VarPool};
pub use loop_algebra::{bracket, Degree, Letter, LoopElement, LoopSymbol};
pub use verma::{ModuleVector, Orientation, PBWKey, Verma};
