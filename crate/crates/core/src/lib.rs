//! η-calculus of nilpotent commuting variables and polynomial entanglement
//! invariants of four-qubit states.
//!
//! * [`eta`]: η-functions, their products, series (cos, sin, exp), inner
//!   product and Hodge dual, and the binary-basis amplitude view.
//! * [`states`]: the named states as η-functions.
//! * [`invariants`]: Cayley's H, the flattening determinants L, M, N, the
//!   sextic D, the Schläfli basis and the monotones |F₃| and |F₂′|.
//! * [`verify`]: seeded random states, invariance checks and closed-form sweeps.
//! * [`expr`] and [`cli`]: the expression language and the `etaqubit` binary.
//!
//! Everything is generic over [`Scalar`]: [`Exact`] for Gaussian rationals,
//! [`Float`] for `Complex64`.
//!
//! ```
//! use etaqubit::{EtaFunction, Exact, Scalar};
//!
//! let eta = |i| EtaFunction::<Exact>::variable(2, i).unwrap();
//! let f = eta(1).sub(&eta(2)).unwrap();
//! let c = f.cos().unwrap();
//! // cos(η₁ − η₂) = 1 + η₁η₂
//! assert_eq!(c.coeff(0b11), Exact::from_i64(1));
//! ```

pub mod cli;
pub mod error;
pub mod eta;
pub mod expr;
pub mod invariants;
pub mod scalar;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use eta::{AmplitudeVector, EtaFunction, SeriesKind};
pub use scalar::{Backend, Exact, Float, Magnitude, Scalar};
