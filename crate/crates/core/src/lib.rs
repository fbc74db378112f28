//! Numerical laboratory for conformal iterated function systems (IFS) and
//! graph directed Markov systems (GDMS).
//!
//! The crate is organized around a geometric core ([`gdms`]) of uniformly
//! contracting conformal maps on compact seed regions, with analysis layers
//! on top:
//!
//! * [`symbolic`] — alphabets, incidence matrices, admissible words, and
//!   finite irreducibility / primitivity checks;
//! * [`gdms`] — conformal maps, seed regions, cylinders, the coding map,
//!   open-set-condition evidence, and limit-set sampling;
//! * [`pressure`] — topological pressure with two-sided bounds and the
//!   dimension of a system as the zero of its pressure function;
//! * [`ba`] — badly-approximable quality scans and continued-fraction
//!   certificates;
//! * [`diffuse`] — hyperplane diffuseness, Ahlfors regularity, doubling and
//!   absolute-decay estimation on empirical measures;
//! * [`julia`] — inverse-branch systems of quadratic polynomials and
//!   dimension estimates for their radial Julia sets;
//! * [`config`] / [`report`] — the on-disk system schema and deterministic
//!   report/CSV emission.

pub mod ba;
pub mod config;
pub mod diffuse;
pub mod error;
pub mod fit;
pub mod gdms;
pub mod julia;
pub mod maps;
pub mod measure;
pub mod pressure;
pub mod region;
pub mod report;
pub mod symbolic;
pub mod util;

pub use error::{Error, Result};
pub use gdms::{Cylinder, GDMSystem, PointSample};
pub use maps::ConformalMap;
pub use pressure::{DimensionEstimate, PressureEstimate};
pub use region::{Point, Region};
pub use symbolic::{Alphabet, IncidenceMatrix, SymbolStream, Word};
