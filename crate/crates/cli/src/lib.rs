//! File formats, seeded perturbations and the command-line front end for
//! [`fibrewise_core`].

pub mod cli;
pub mod document;
pub mod perturb;

pub use cli::run;
