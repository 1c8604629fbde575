//! Color fault-tolerant graph spanners built from parks.

pub mod baselines;
pub mod cli;
pub mod colorset;
pub mod distsim;
pub mod ecft;
pub mod engine;
pub mod error;
pub mod ftgame;
pub mod graph;
pub mod params;
pub mod park;
pub mod result;
pub mod rng;
pub mod sampler;
pub mod score;
pub mod toolbox;
pub mod vcft;
pub mod verifier;

pub use error::{Error, Result};
