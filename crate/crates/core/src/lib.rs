//! Exact computer algebra for quadratic Gorenstein rings.
//!
//! Engines for Gröbner bases, graded free resolutions and Betti tables,
//! Hilbert series, Macaulay inverse systems, Pfaffian and linkage
//! constructions, and Koszul certificates, all over `Q` or `GF(p)`.

pub mod error;
pub mod field;
pub mod graded;
pub mod groebner;
pub mod hilbert;
pub mod inverse;
pub mod koszul;
pub mod linalg;
pub mod parse_io;
pub mod quotient;
pub mod resolution;
pub mod ring;
pub mod construct;

pub use error::{Error, Result};
pub use parse_io::{parse_polynomial, render_betti, BettiTable};
pub use field::{Field, FieldDescriptor, PrimeField, Rationals, Scalar};
pub use ring::{AlternatingMatrix, GradedFreeModule, ModuleElement, Monomial, MonomialOrder, PolyRing, Polynomial};

/// Engine version recorded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
