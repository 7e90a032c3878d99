pub mod benzecri;
pub mod body;
pub mod charfn;
pub mod cusps;
pub mod cone;
pub mod error;
pub mod io;
mod hull;
pub mod linalg;
pub mod minnorm;
pub mod sampling;
pub mod smoothing;

pub use error::{Error, Result};
