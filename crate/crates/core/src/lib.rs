//! Uniform random generation, exact counting and verification of Wheeler
//! DFAs over fixed state count, transition count and alphabet size.
//!
//! The sampler draws an automaton from the family in expected linear time
//! and constant extra memory, streaming transitions to a [`stream::Sink`].
//!
//! ```
//! use wdfa::{Params, stream::sample_stream_seeded, automaton::check_wheeler, Automaton};
//!
//! let p = Params::new(5, 6, 2);
//! let mut edges = Vec::new();
//! sample_stream_seeded(p, 42, &mut edges).unwrap();
//! let a = Automaton::new(5, 2, edges).unwrap();
//! assert!(check_wheeler(&a).is_ok());
//! ```

pub mod automaton;
pub mod bench;
pub mod bits;
pub mod census;
pub mod cli;
pub mod codec;
pub mod format;
pub mod num;
pub mod oracle;
pub mod shuffle;
pub mod stats;
pub mod stream;

pub use automaton::{check_wheeler, Automaton, Params, Transition, Violation, WheelerDfa};
pub use census::{count_wdfa, BigCount};
pub use num::Float;
pub use shuffle::{DefaultRng, HiddenShuffle, SubsetSampler};
pub use stream::{sample_stream, Sink};

/// Hidden Shuffle in double precision.
pub type Shuffler = HiddenShuffle<f64, DefaultRng>;
/// Hidden Shuffle in single precision.
pub type Shuffler32 = HiddenShuffle<f32, DefaultRng>;
pub type ChiSquare = stats::ChiSquareReport<f64>;
pub type EntropyBounds = census::Bounds<f64>;
