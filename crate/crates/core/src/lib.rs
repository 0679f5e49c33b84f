//! Local invariants, mod-p congruences and parity identities for pairs of
//! elliptic curves over Q or a quadratic field.
//!
//! The usual entry point is [`report::run_job`], which takes two curves from a
//! [`io::Corpus`], checks that they are congruent mod p, builds the table of
//! places where their local behaviour differs, and compares the resulting
//! parity predictions with supplied Selmer data and with root numbers.
//!
//! ```
//! use ecparity::{EllipticCurve, local_reduction::tate_algorithm};
//!
//! let e = EllipticCurve::from_i64([0, -1, 1, -10, -20]).unwrap();
//! let red = tate_algorithm(&e, 11).unwrap();
//! assert_eq!(red.kodaira.to_string(), "I5");
//! assert_eq!(red.f_v, 1);
//! ```

pub mod arith;
pub mod cache;
pub mod congruence;
pub mod error;
pub mod io;
pub mod local_reduction;
pub mod parity;
pub mod places;
pub mod poly;
pub mod report;
pub mod root_numbers;
pub mod selftest;
pub mod weierstrass;

pub use cache::LocalCache;
pub use error::{Error, Result};
pub use local_reduction::{Kodaira, LocalReductionData, ReductionClass};
pub use places::{BaseField, Place};
pub use report::{run_job, ParityReport};
pub use weierstrass::EllipticCurve;
