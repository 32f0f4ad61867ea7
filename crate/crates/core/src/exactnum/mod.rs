//! Exact scalars: rationals, quadratic and tower field elements, and dyadic
//! interval enclosures for transcendental constants.

pub mod expr;
pub mod interval;
pub mod quad;
pub mod rational;
pub mod tower;

pub use expr::{eval_enclosure, evaluation_count, ConstExpr, Refiner};
pub use interval::{ComplexInterval, Dyadic, DyadicInterval};
pub use num_rational::BigRational;
pub use quad::{quad_arith, QuadElem, QuadElemDoc, QuadOp};
pub use tower::{Automorphism, Tower, TowerElem, TowerKind};
