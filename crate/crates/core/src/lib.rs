//! Decision procedures for the membership and threshold problems of
//! hypergeometric sequences `p(n) u_{n+1} = q(n) u_n`.

pub mod certificate;
pub mod config;
pub mod corpus;
pub mod decide;
pub mod document;
pub mod equality;
pub mod error;
pub mod exactnum;
pub mod gammacanon;
pub mod polyfield;
pub mod recognizers;
pub mod schanuel;
pub mod sequence;
pub mod strategy;

pub use error::{Error, Result};
