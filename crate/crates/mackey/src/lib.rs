//! Mackey functors for cyclic p-groups over the integers.

pub mod intlin;
pub mod mackey;
pub mod burnside;
pub mod boxhom;
pub mod homalg;
pub mod spheres;
pub mod verify;

pub use intlin::{IntMatrix, Matrix, Scalar};
pub use mackey::{GradedMackey, MackeyFunctor, Shape};
pub use spheres::RepLabel;
