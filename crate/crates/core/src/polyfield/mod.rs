//! Polynomial algebra over Z, Q and tower fields.

pub mod cyclotomic;
pub mod multipoly;
pub mod poly;
pub mod roots;
pub mod towerroots;

pub use cyclotomic::{cyclotomic, cyclotomic_index};
pub use multipoly::{galois_norm_poly, MultiPoly};
pub use poly::{cauchy_bound_q, poly_ops, IntPoly, PolyOp, QPoly};
pub use roots::{
    integer_roots, isolate_roots, quadratic_factors, roots_quadratic, IsolatedRoot, QuadSplit,
    Root, RootMultiset,
};
pub use towerroots::{eval_in_tower, root_in_tower, tower_roots};
