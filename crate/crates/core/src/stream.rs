//! Constant-space streaming sampler.
//!
//! Each attempt walks the set cells of a random out-matrix in column-major
//! order (from one sequential subset sampler) and the set wildcards of the
//! in-vector mask (from a second one), emitting every transition as soon as
//! its destination is known. An empty column is detected on the fly and
//! restarts the attempt. Working state is a few counters plus the two
//! sampler states, independent of `n`, `m` and `sigma`.

use std::io;

use thiserror::Error;

use crate::automaton::{Automaton, ParamError, Params, Transition, WheelerDfa};
use crate::shuffle::{DefaultRng, Role, RngSource, SamplerSource, ShuffleError, SubsetSampler};

#[derive(Debug, Error)]
pub enum StreamError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error("sink error: {0}")]
    Sink(#[from] io::Error),
    #[error("position {t} outside 1..={cells}")]
    OutOfRange { t: u64, cells: u64 },
    #[error("n * sigma does not fit in 64 bits")]
    TooLarge,
    #[error("gave up after {limit} rejected attempts")]
    AttemptsExceeded { limit: u64 },
}

/// Destination of a streamed automaton.
pub trait Sink {
    fn emit(&mut self, t: Transition) -> io::Result<()>;

    /// Discards everything emitted since the start of the current attempt.
    fn restart(&mut self) -> io::Result<()>;

    /// Finalises the accepted attempt.
    fn commit(&mut self) -> io::Result<()>;
}

impl<S: Sink + ?Sized> Sink for &mut S {
    fn emit(&mut self, t: Transition) -> io::Result<()> {
        (**self).emit(t)
    }

    fn restart(&mut self) -> io::Result<()> {
        (**self).restart()
    }

    fn commit(&mut self) -> io::Result<()> {
        (**self).commit()
    }
}

/// In-memory sink.
impl Sink for Vec<Transition> {
    fn emit(&mut self, t: Transition) -> io::Result<()> {
        self.push(t);
        Ok(())
    }

    fn restart(&mut self) -> io::Result<()> {
        self.clear();
        Ok(())
    }

    fn commit(&mut self) -> io::Result<()> {
        Ok(())
    }
}

/// Discards transitions, keeping only counts.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct NullSink {
    pub emitted: u64,
    pub restarts: u64,
    pub committed: bool,
}

impl Sink for NullSink {
    fn emit(&mut self, _: Transition) -> io::Result<()> {
        self.emitted += 1;
        Ok(())
    }

    fn restart(&mut self) -> io::Result<()> {
        self.emitted = 0;
        self.restarts += 1;
        Ok(())
    }

    fn commit(&mut self) -> io::Result<()> {
        self.committed = true;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamStats {
    /// Attempts made, including the accepted one.
    pub attempts: u64,
    /// Transitions emitted by the accepted attempt.
    pub edges_emitted: u64,
    /// Seed of the run, when randomness came from a seeded generator.
    pub seed: Option<u64>,
}

/// Outcome of one pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attempt {
    Accepted { emitted: u64 },
    /// `column` was found empty.
    Rejected { column: u64 },
}

/// Cell `t` of the column-major linearisation as `(row, column)`.
pub fn map_t(t: u64, n: u64, sigma: u64) -> Result<(u64, u64), StreamError> {
    let cells = n.saturating_mul(sigma);
    if t == 0 || t > cells {
        return Err(StreamError::OutOfRange { t, cells });
    }
    Ok(((t - 1) % n + 1, (t - 1) / n + 1))
}

/// Default cap on attempts: `floor(64 ln m + 64)`.
pub fn default_attempt_limit(m: u64) -> u64 {
    (64.0 * (m.max(1) as f64).ln() + 64.0).floor() as u64
}

/// One pass of the streaming sampler over pre-opened samplers.
///
/// `cells` draws the `m` set cells out of `n * sigma`; `ones` draws which of
/// the `m - sigma` mask wildcards become one-bits. Transitions go to `sink`
/// as they are produced; on rejection the caller is responsible for
/// restarting the sink.
pub fn stream_attempt<C, O, K>(p: Params, cells: &mut C, ones: &mut O, sink: &mut K) -> Result<Attempt, StreamError>
where
    C: SubsetSampler + ?Sized,
    O: SubsetSampler + ?Sized,
    K: Sink + ?Sized,
{
    // Past the last wildcard: installed once `ones` runs dry.
    let sentinel = p.m - p.sigma + 1;
    let mut next_one = || if ones.is_empty() { Ok(sentinel) } else { ones.pop() };

    let mut wildcard = 1;
    let mut dest = 1;
    let mut set_wildcard = next_one()?;
    let mut column = 0;
    let mut prev_column = 0;
    let mut emitted = 0;

    while !cells.is_empty() {
        let (source, j) = map_t(cells.pop()?, p.n, p.sigma)?;
        column = j;
        if column > prev_column + 1 {
            return Ok(Attempt::Rejected { column: prev_column + 1 });
        }
        if column == prev_column + 1 {
            dest += 1;
            prev_column = column;
        } else {
            if wildcard == set_wildcard {
                dest += 1;
                set_wildcard = next_one()?;
            }
            wildcard += 1;
        }
        sink.emit(Transition::new(source, column, dest))?;
        emitted += 1;
    }

    if column != p.sigma {
        return Ok(Attempt::Rejected { column: p.sigma });
    }
    debug_assert_eq!(dest, p.n, "accepted attempt must reach the last state");
    Ok(Attempt::Accepted { emitted })
}

/// Streams a uniform Wheeler DFA with parameters `p` into `sink`, in
/// ascending `(label, source)` order.
///
/// Every attempt opens a fresh pair of samplers from `source`. Rejected
/// attempts call [`Sink::restart`]; the accepted one ends with
/// [`Sink::commit`]. Gives up after `limit` attempts (default
/// [`default_attempt_limit`]).
pub fn sample_stream<S, K>(p: Params, source: &mut S, sink: &mut K, limit: Option<u64>) -> Result<StreamStats, StreamError>
where
    S: SamplerSource + ?Sized,
    K: Sink + ?Sized,
{
    p.validate()?;
    p.n.checked_mul(p.sigma).ok_or(StreamError::TooLarge)?;
    let limit = limit.unwrap_or_else(|| default_attempt_limit(p.m));
    for attempt in 1..=limit {
        let mut cells = source.open(Role::Out, p.cells(), p.m)?;
        let mut ones = source.open(Role::In, p.m - p.sigma, p.n - p.sigma - 1)?;
        match stream_attempt(p, &mut cells, &mut ones, sink)? {
            Attempt::Accepted { emitted } => {
                sink.commit()?;
                return Ok(StreamStats { attempts: attempt, edges_emitted: emitted, seed: None });
            }
            Attempt::Rejected { .. } => sink.restart()?,
        }
    }
    Err(StreamError::AttemptsExceeded { limit })
}

/// Collects one streamed sample into memory.
pub fn sample_wheeler<S: SamplerSource + ?Sized>(p: Params, source: &mut S) -> Result<(WheelerDfa, StreamStats), StreamError> {
    let mut edges = Vec::with_capacity(p.m as usize);
    let stats = sample_stream(p, source, &mut edges, None)?;
    let automaton = Automaton::new(p.n, p.sigma, edges).expect("sampled transitions are in range");
    Ok((WheelerDfa::from_trusted(automaton), stats))
}

/// [`sample_stream`] driven by a seeded [`DefaultRng`].
pub fn sample_stream_seeded<K: Sink + ?Sized>(p: Params, seed: u64, sink: &mut K) -> Result<StreamStats, StreamError> {
    let mut source = RngSource::<f64, DefaultRng>::seeded(seed);
    let stats = sample_stream(p, &mut source, sink, None)?;
    Ok(StreamStats { seed: Some(seed), ..stats })
}
