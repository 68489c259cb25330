pub mod cli;
pub mod ctm;
pub mod deciders;
pub mod definition;
pub mod error;
pub mod grammar;
pub mod machine;
pub mod regexp;
pub mod rng;
pub mod sexpr;
pub mod symbol;
pub mod testers;
pub mod transform;

pub use error::{Error, Result};
