pub mod cli;
pub mod harness;
pub mod kernel;
pub mod logic;
pub mod prop;
pub mod realisability;
pub mod surface;
