//! Generalized power series k((t^G)) over towers of fields, with explicit
//! truncation tracking.

mod domain;
mod elem;
mod laurent;
mod quadratic;
mod roots;
mod text;
mod value_group;

pub use domain::{Domain, QuadraticDomain, SeriesDomain, DEFAULT_PRECISION};
pub use elem::Elem;
pub use laurent::Series;
pub use quadratic::QuadraticElement;
pub use roots::is_square_in_tower;
pub use value_group::{Exponent, Precision, ValueGroup};

#[cfg(test)]
mod tests;
