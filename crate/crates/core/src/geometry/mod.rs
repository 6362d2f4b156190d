//! Drums, distances and tube volumes.

pub mod catalog;
pub mod drum;
pub mod samples;
pub mod string;
pub mod tube;

pub use drum::{DrumKind, RatioList, RelativeFractalDrum, TubeMethod};
pub use samples::{TubeSample, TubeSamples};
pub use string::{FractalString, StringGenerator};
pub use tube::DistanceProfile;
