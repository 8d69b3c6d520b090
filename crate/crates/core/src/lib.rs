//! Free theories and operads, Laplaza-set coherence, strictification of
//! finite symmetric monoidal categories, and the 2-operad of commutative
//! monoids with cancellation evaluated on combinatorial worldsheets.

pub mod coherence;
pub mod error;
pub mod finmap;
pub mod gen;
pub mod laws;
pub mod nf;
pub mod strictify;
pub mod term;
pub mod two_theory;

pub use error::{Error, Result};
