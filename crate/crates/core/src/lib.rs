//! Simple closed geodesics, equal-length loci and trace identities on
//! one-holed tori and four-holed spheres.
//!
//! The one-holed torus is modelled in Fricke trace coordinates
//! ([`space::FrickePoint`]); simple closed curves are primitive slopes
//! ([`curves::Slope`]) whose traces follow the Farey recursion. On top of this
//! sit the length-spectrum tools ([`spectrum`]), equal-length loci
//! ([`locus`]), exact Markoff triples ([`markoff`]), the Euclidean analogue
//! ([`flat`]) and the four-holed sphere trace algebra ([`fhs`]).
//!
//! ```
//! use teich_core::{spectrum, FrickePoint};
//!
//! let classes = spectrum::multiplicity_histogram_by_trace(&FrickePoint::MODULAR, 20.0, 1e-9).unwrap();
//! let sizes: Vec<usize> = classes.iter().map(|c| c.multiplicity()).collect();
//! assert_eq!(sizes, [3, 3, 6]);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod error;
pub mod fhs;
pub mod flat;
pub mod fricke;
pub mod locus;
pub mod markoff;
pub mod parse;
pub mod roots;
pub mod space;
pub mod spectrum;

pub use curves::Slope;
pub use error::{Error, Result};
pub use fricke::{Length, Trace};
pub use space::{FrickePoint, TeichSlice};
