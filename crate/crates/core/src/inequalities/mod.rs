//! Identity and inequality checks, each returning a [`Report`](crate::Report),
//! plus the seeded corpora that drive them.

pub mod corpus;
mod functional;
mod gradient;
mod integral;
mod isoperimetric;
mod pl;

pub use functional::{
    check_brascamp_lieb, check_generalized_pl, check_hyperbolic, check_quermass_pl, hypothesis_defect, FunctionalId,
};
pub use gradient::{check_gradient_pl, gradient_integral_grid, radial_supconv};
pub use integral::{calibrate_c, check_cauchy_kubota, check_valuation, projected_index};
pub use isoperimetric::{
    check_entropy, check_isoperimetric, check_rearrangement, check_urysohn, check_wk_norm, check_wk_wi,
};
pub use pl::{check_pl_1d, minimal_h, HalfLine, HalfLineH};
