//! Functional quermassintegrals of quasi-concave functions.
//!
//! The crate is organised around exact convex bodies ([`geometry`]), the
//! α-mean algebra ([`means`]), quasi-concave function representations
//! ([`qcfun`]), their layer-cake functionals ([`quermass`]), a harness of
//! inequality checks ([`inequalities`]) and the cap-body counterexample
//! ([`counterexample`]).

pub mod counterexample;
pub mod error;
pub mod ext;
pub mod geometry;
pub mod inequalities;
pub mod means;
pub mod numeric;
pub mod qcfun;
pub mod quermass;
pub mod report;

pub use error::{Error, Result};
pub use ext::{Alpha, Ext};
pub use geometry::{ConvexBody, ParallelBody, QuermassVector, SubspaceSpec};
pub use means::Weights;
pub use qcfun::QCFunction;
pub use report::{Outcome, Report, Route};
