pub mod error;
pub mod cochain;
pub mod cohomology;
pub mod delta;
pub mod field;
pub mod group;
pub mod hochschild;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod verify;

pub use error::{BvhError, Result};
pub use field::Fp;
pub use group::{Group, Subgroup};
