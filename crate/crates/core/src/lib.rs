//! Hamburger-cheeseburger words, their inventory walks, and the bijection
//! with planar maps carrying a distinguished edge subset.

pub mod error;
pub mod fk_sampler;
pub mod matching;
pub mod rng;
pub mod semigroup;
pub mod statistics;
pub mod planar_map;
pub mod stack_sim;
pub mod verify;

pub use error::{Error, Result};
