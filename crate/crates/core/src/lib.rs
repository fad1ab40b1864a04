//! Intersection distributions of polynomials over GF(q) and of (q+1)-sets in PG(2,q).

pub mod arith;
pub mod constructions;
pub mod distribution;
pub mod equivalence;
pub mod error;
pub mod ff;
pub mod geometry;
pub mod monomial;
pub mod poly;
pub mod spectrum;
pub mod text;

pub use distribution::{IntersectionDistribution, Kind};
pub use error::{Error, Result};
pub use ff::{build_field, parse_field_spec, Elem, Field};
pub use geometry::{Homography, PointSet, ProjLine, ProjPoint, Triple};
pub use poly::Poly;
