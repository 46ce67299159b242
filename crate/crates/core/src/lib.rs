//! Formal affine Demazure algebras, small-torus GKM duals and the Peterson
//! subalgebra, with exact integer arithmetic.

pub mod a1hat;
pub mod certify;
pub mod connective;
pub mod dual;
pub mod error;
pub mod fada;
pub mod fga;
pub mod formal_group;
pub mod loc;
pub mod peterson;
pub mod poly;
pub mod root_system;

pub use error::{Error, Result};
