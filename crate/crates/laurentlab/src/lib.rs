//! laurentlab: an exact symbolic verification toolkit for coprimeness-
//! preserving extensions of the Somos-4 recurrence and the two-dimensional
//! discrete Toda lattice equation.
//!
//! The `ring` module provides the ambient Laurent-polynomial algebra; `somos`
//! and `toda` implement the two recurrence engines together with their
//! birational changes of variables, closed forms and integer/root-of-unity
//! specializations; `checks` is the shared verification harness that turns
//! Laurent-membership, coprimeness, and round-trip properties into
//! structured pass/fail reports.

pub mod checks;
pub mod cli;
pub mod ring;
pub mod somos;
pub mod toda;
