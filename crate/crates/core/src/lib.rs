//! Homological algebra over finite-dimensional quiver algebras with
//! certified answers.
//!
//! Everything is computed exactly over a prime field. Decision procedures
//! return three-valued verdicts: a positive answer carries a witness, a
//! negative answer carries an obstruction, and anything the bounded search
//! could not settle is reported as unknown together with the bound used.

pub mod exactfield;
pub mod modcat;
pub mod quivalg;
pub mod gproj;
pub mod homalg;
pub mod schur;
pub mod trimat;
