//! The cofactor map, the reciprocal-numerator map and their reduced composition.

pub mod matrix;
pub mod pointwise;
pub mod symbolic;
pub mod tuple;

pub use matrix::{chi_scale, outer, parse_matrix_literal, permute, proj_eq, Matrix, ProjPoint, RandomElem, Swap};
pub use pointwise::{eval_ihat, eval_jhat, eval_khat, ihat_matrix, jhat_matrix, khat_matrix, EvalOutcome};
pub use symbolic::{build_ihat, build_jhat, build_khat, common_factor_identity, eval_map, MapLabel, ProjMapRep};
