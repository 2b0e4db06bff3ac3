//! Sequential sampling of a uniform `k`-subset of `1..=N` in ascending order.
//!
//! [`HiddenShuffle`] follows the Hidden Shuffle method of Shekelyan and
//! Cormode: it simulates the last `k` swaps of a Fisher-Yates shuffle without
//! materialising the array. Stage one counts the swaps whose partner lies in
//! the "high" region `k..N` (geometric skipping with thinning), stage two
//! draws those partners as sorted uniforms (collisions turn into low items),
//! and stage three picks the remaining items from the `k` low positions by a
//! sequential scan. State is a handful of words regardless of `N` and `k`.
//!
//! Downstream code consumes randomness only through [`SubsetSampler`] and
//! [`SamplerSource`], so fixed scripts can stand in for random draws.

use std::marker::PhantomData;

use rand::{Rng, RngCore, SeedableRng};
use thiserror::Error;

use crate::num::Float;

/// Generator behind every seeded run.
pub type DefaultRng = rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("cannot draw {size} distinct values from 1..={universe}")]
    BadRange { universe: u64, size: u64 },
    #[error("sampler exhausted")]
    Exhausted,
    #[error("bad script for a {size}-subset of 1..={universe}: {reason}")]
    BadScript { universe: u64, size: u64, reason: &'static str },
}

/// Iterator over a subset of `1..=N`, yielding strictly ascending values.
pub trait SubsetSampler {
    /// Next value of the subset; `Exhausted` once all values were returned.
    fn pop(&mut self) -> Result<u64, ShuffleError>;

    /// Number of values not yet returned.
    fn remaining(&self) -> u64;

    fn is_empty(&self) -> bool {
        self.remaining() == 0
    }
}

fn check_range(universe: u64, size: u64) -> Result<(), ShuffleError> {
    if size > universe {
        return Err(ShuffleError::BadRange { universe, size });
    }
    Ok(())
}

/// Constant-space sequential sampler (Hidden Shuffle), generic over the
/// floating-point type used for its continuous draws.
#[derive(Debug, Clone)]
pub struct HiddenShuffle<F, R> {
    rng: R,
    universe: u64,
    size: u64,
    remaining: u64,
    /// Partner draws from the high region still pending (stage two).
    high: u64,
    /// Items still to pick from the low region (stage three).
    low: u64,
    /// Low positions not yet scanned.
    low_span: u64,
    /// Running maximum of the pending high draws, in `(0, 1]`.
    scale: F,
    /// Last high position returned; high positions are visited top-down.
    last_high: u64,
}

impl<F: Float, R: RngCore> HiddenShuffle<F, R> {
    pub fn new(universe: u64, size: u64, mut rng: R) -> Result<Self, ShuffleError> {
        check_range(universe, size)?;
        let high = if universe > size { count_high_swaps::<F, R>(universe, size, &mut rng) } else { 0 };
        Ok(HiddenShuffle {
            rng,
            universe,
            size,
            remaining: size,
            high,
            low: size - high,
            low_span: size,
            scale: F::one(),
            last_high: universe,
        })
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn into_rng(self) -> R {
        self.rng
    }
}

/// Number of swaps (out of `size`) whose partner falls in the high region.
///
/// Swap `i` (0-based) picks a low partner with probability
/// `(size - i) / (universe - i)`, which decreases in `i`; low picks are
/// generated by geometric skipping at the current rate and thinned to the
/// exact rate.
fn count_high_swaps<F: Float, R: RngCore>(universe: u64, size: u64, rng: &mut R) -> u64 {
    let mut high = size;
    let mut i = 0u64;
    while i < size {
        let q = F::from_u64(size - i) / F::from_u64(universe - i);
        let u = F::one() - F::unit(rng);
        let skip = u.ln() / (-q).ln_1p();
        if skip.is_nan() || skip >= F::from_u64(size - i) {
            break;
        }
        i += skip.floor_u64();
        if i >= size {
            break;
        }
        let p = F::from_u64(size - i) / F::from_u64(universe - i);
        if F::unit(rng) < p / q {
            high -= 1;
        }
        i += 1;
    }
    high
}

impl<F: Float, R: RngCore> SubsetSampler for HiddenShuffle<F, R> {
    fn pop(&mut self) -> Result<u64, ShuffleError> {
        if self.remaining == 0 {
            return Err(ShuffleError::Exhausted);
        }
        let size = self.size;
        while self.high > 0 {
            let pending = self.high;
            self.high -= 1;
            let u = F::one() - F::unit(&mut self.rng);
            self.scale = self.scale * u.powf(F::one() / F::from_u64(pending));
            let span = self.universe - size;
            let pos = size + (self.scale * F::from_u64(span)).floor_u64().min(span - 1);
            if pos < self.last_high {
                self.last_high = pos;
                self.remaining -= 1;
                return Ok(self.universe - pos);
            }
            // Same high position drawn twice: the second pick is a low item.
            self.low += 1;
        }
        debug_assert!(self.low > 0 && self.low <= self.low_span);
        let u = F::unit(&mut self.rng);
        let low = self.low;
        let mut skip = 0u64;
        let mut cdf = F::from_u64(low) / F::from_u64(self.low_span);
        while cdf < u && skip < self.low_span - low {
            let keep = F::one() - F::from_u64(low) / F::from_u64(self.low_span - skip - 1);
            cdf = F::one() - keep * (F::one() - cdf);
            skip += 1;
        }
        self.low -= 1;
        self.low_span -= skip + 1;
        self.remaining -= 1;
        Ok(self.universe - self.low_span)
    }

    fn remaining(&self) -> u64 {
        self.remaining
    }
}

impl<F: Float, R: RngCore> Iterator for HiddenShuffle<F, R> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.pop().ok()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

/// Starts a sequential sampler of a uniform `size`-subset of `1..=universe`.
pub fn init_sequential_shuffler<R: RngCore>(
    universe: u64,
    size: u64,
    rng: R,
) -> Result<HiddenShuffle<f64, R>, ShuffleError> {
    HiddenShuffle::new(universe, size, rng)
}

/// Exact `O(N)` reference sampler: scans `1..=N` and keeps each value with
/// probability `still_needed / still_available`, decided by one exact
/// integer draw.
pub fn reference_subset_sampler<R: Rng + ?Sized>(
    universe: u64,
    size: u64,
    rng: &mut R,
) -> Result<Vec<u64>, ShuffleError> {
    check_range(universe, size)?;
    let mut out = Vec::with_capacity(size as usize);
    let mut needed = size;
    for value in 1..=universe {
        if needed == 0 {
            break;
        }
        let available = universe - value + 1;
        if rng.gen_range(0..available) < needed {
            out.push(value);
            needed -= 1;
        }
    }
    Ok(out)
}

/// A fixed, pre-validated ascending sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scripted {
    values: Vec<u64>,
    next: usize,
}

impl Scripted {
    pub fn new(universe: u64, size: u64, values: Vec<u64>) -> Result<Self, ShuffleError> {
        check_range(universe, size)?;
        let bad = |reason| Err(ShuffleError::BadScript { universe, size, reason });
        if values.len() as u64 != size {
            return bad("wrong length");
        }
        if values.iter().any(|v| !(1..=universe).contains(v)) {
            return bad("value out of range");
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("not strictly ascending");
        }
        Ok(Scripted { values, next: 0 })
    }
}

impl SubsetSampler for Scripted {
    fn pop(&mut self) -> Result<u64, ShuffleError> {
        let v = *self.values.get(self.next).ok_or(ShuffleError::Exhausted)?;
        self.next += 1;
        Ok(v)
    }

    fn remaining(&self) -> u64 {
        (self.values.len() - self.next) as u64
    }
}

/// Which of the two subset draws of a sampling attempt is being opened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Set cells of the out-matrix: a `m`-subset of `1..=n*sigma`.
    Out,
    /// Wildcards of the in-vector mask set to one: a `(n-sigma-1)`-subset of `1..=m-sigma`.
    In,
}

/// Factory of subset samplers, one per draw.
pub trait SamplerSource {
    type Sampler: SubsetSampler;

    fn open(&mut self, role: Role, universe: u64, size: u64) -> Result<Self::Sampler, ShuffleError>;
}

impl<S: SamplerSource + ?Sized> SamplerSource for &mut S {
    type Sampler = S::Sampler;

    fn open(&mut self, role: Role, universe: u64, size: u64) -> Result<Self::Sampler, ShuffleError> {
        (**self).open(role, universe, size)
    }
}

/// Random source: every opened sampler gets a fresh generator seeded from
/// one master stream, so the master seed fixes the whole run.
#[derive(Debug, Clone)]
pub struct RngSource<F = f64, R = DefaultRng> {
    master: R,
    _scalar: PhantomData<F>,
}

impl<F: Float, R: RngCore + SeedableRng> RngSource<F, R> {
    pub fn new(master: R) -> Self {
        RngSource { master, _scalar: PhantomData }
    }

    pub fn seeded(seed: u64) -> Self {
        Self::new(R::seed_from_u64(seed))
    }
}

impl<F: Float, R: RngCore + SeedableRng> SamplerSource for RngSource<F, R> {
    type Sampler = HiddenShuffle<F, R>;

    fn open(&mut self, _role: Role, universe: u64, size: u64) -> Result<Self::Sampler, ShuffleError> {
        let rng = R::from_rng(&mut self.master).expect("seeding from an in-memory generator");
        HiddenShuffle::new(universe, size, rng)
    }
}

/// Replays fixed scripts per role, in order; once a role's scripts run out
/// the last one is replayed.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    out: Vec<Vec<u64>>,
    into: Vec<Vec<u64>>,
    opened_out: usize,
    opened_in: usize,
}

impl ScriptedSource {
    pub fn new(out: Vec<Vec<u64>>, into: Vec<Vec<u64>>) -> Self {
        ScriptedSource { out, into, opened_out: 0, opened_in: 0 }
    }

    /// One script per role.
    pub fn single(out: Vec<u64>, into: Vec<u64>) -> Self {
        Self::new(vec![out], vec![into])
    }

    /// Number of samplers opened for `role` so far.
    pub fn opened(&self, role: Role) -> usize {
        match role {
            Role::Out => self.opened_out,
            Role::In => self.opened_in,
        }
    }
}

impl SamplerSource for ScriptedSource {
    type Sampler = Scripted;

    fn open(&mut self, role: Role, universe: u64, size: u64) -> Result<Scripted, ShuffleError> {
        let (scripts, opened) = match role {
            Role::Out => (&self.out, &mut self.opened_out),
            Role::In => (&self.into, &mut self.opened_in),
        };
        let script = scripts
            .get(*opened)
            .or(scripts.last())
            .ok_or(ShuffleError::BadScript { universe, size, reason: "no script supplied" })?;
        *opened += 1;
        Scripted::new(universe, size, script.clone())
    }
}
