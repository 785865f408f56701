//! Exact computation of the equivariant transversal index of lifted
//! Dolbeault operators on the circle bundles `S^{2n+1} -> CP^n`.
//!
//! Characters live in `R(T^{n+1} x S^1) = Z[t_1^{±1}, ..., t_{n+1}^{±1}, t^{±1}]`
//! and are represented by [`LaurentPoly`]. Index distributions are formal
//! Fourier series in `t`, stored on finite windows as [`WindowedSeries`].

pub mod characters;
pub mod error;
pub mod index;
pub mod laurent;
pub mod lefschetz;
pub mod series;
pub mod verify;

pub use characters::{chi, chi_via_shift, cohomology_character, dimension, CharacterTable};
pub use error::{Error, Result};
pub use index::{a_poly, b_poly, b_poly_alt, half_series, index_series_direct, index_series_formula};
pub use index::{Half, IndexSeriesReport};
pub use laurent::{elementary_symmetric, lambda_poly, Exponent, LaurentPoly, TorusPoint};
pub use lefschetz::{euler_characteristic, fixed_point_eval, lefschetz_residue, random_torus_point};
pub use lefschetz::{KClassRep, LefschetzReport};
pub use series::{j0, j_delta, j_inf, module_action, ExpansionPoint, Window, WindowedSeries};
pub use verify::{Fault, SuiteResult, VerifyConfig, VerifyReport};
