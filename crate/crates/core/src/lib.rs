//! Alexander polynomials of links, their Mahler measures, and the homology
//! of finite abelian branched covers.

pub mod alexander;
pub mod cli;
pub mod covers;
pub mod growth;
pub mod lattices;
pub mod laurent;
pub mod linkio;
pub mod mahler;
mod serde_big;
