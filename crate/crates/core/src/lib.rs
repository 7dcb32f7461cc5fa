//! Operator algebra, state/effect cones and distinguishability games for
//! two-qubit generalized probabilistic theories with separable effects.

pub mod cones;
pub mod distinguish;
pub mod error;
pub mod game;
pub mod operator;
pub mod packing;
pub mod report;
pub mod squarebit;
pub mod suites;
pub mod table1;

pub use cones::TheoryTag;
pub use error::{Error, Result};
pub use report::{Check, SuiteReport};
pub use suites::{run_all, run_suite, Suite, SuiteOptions};
