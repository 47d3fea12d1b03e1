//! Exact cohomology of line bundles on `P^n` and `P^n x P^n`, asymptotic
//! cohomological functions on bidegree `(k, k)` hypersurfaces, and two
//! independent engines for the multiplication map on the special fiber:
//! a Pieri-rule prediction and a brute-force rank computation.

pub mod asymptotics;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod oracle;
pub mod par;
pub mod proj_cohomology;
pub mod rep_theory;

pub use error::{Error, Result};
