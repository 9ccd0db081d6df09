//! Exact arithmetic substrate: fields, polynomials, matrices, real roots.

pub mod field;
pub mod linalg;
pub mod mpoly;
pub mod roots;
pub mod upoly;

pub use field::{format_rational, parse_rational, random_prime, Field, Integers, PrimeField, Rationals, Ring};
pub use linalg::IntMat;
pub use mpoly::{MPoly, MPolyRing};
pub use roots::{isolate_max_real_root, max_root_modulus, MaxRealRoot, RealInterval};
pub use upoly::{tuple_content_reduce, UPoly, UPolyRing};
