//! Herbrand skeletons, quasitautology checking, SREU conversion and the
//! arithmetic encoding used to show that skeleton solvability is undecidable.

pub mod arith;
pub mod models;
pub mod qcheck;
pub mod skeleton;
pub mod sreu;
pub mod syntax;
