//! Exact arithmetic for genus-zero Gromov-Witten, Gopakumar-Vafa and quantum
//! K invariant tables on semi-positive targets.
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the
//! command-line tool live in the companion `gvint` crate.
//!
//! * [`arith`]: Möbius function, totient, divisors, root-of-unity probes.
//! * [`lattice`]: curve classes, the geometry context and degree truncation.
//! * [`novikov`]: truncated Novikov series and Adams operations on them.
//! * [`ring`]: graded cohomology models, Todd classes, the K-pairing and
//!   integral Chern character lifts.
//! * [`transforms`]: the GW/GV/QK divisor-sum transforms and their checks.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod lattice;
pub mod novikov;
pub mod ring;
pub mod transforms;

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;

pub use arith::PositiveInt;
pub use error::{ArithError, LatticeError, RingError, SeriesError, TransformError};
pub use lattice::{CurveClass, GeometryModel, Truncation};
pub use novikov::NovikovSeries;
pub use ring::{GradedRing, KClassModel, RingElement};
pub use transforms::{Direction, InvariantKind, InvariantTable, TransformReport};
