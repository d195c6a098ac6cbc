//! Sheaves on the plane, convolution by ball kernels, directional Radon
//! barcodes, and convolution distances between them.

pub mod cohomc;
pub mod convex;
pub mod error;
pub mod fieldla;
pub mod numeric;
pub mod persdist;
pub mod plancx;
pub mod radon;
pub mod region;
pub mod scene;
pub mod sheafobj;
pub mod suite;

pub use error::{Error, Result};
pub use fieldla::{FieldPrime, FpMatrix};
pub use numeric::{Point, Quad, Q};
