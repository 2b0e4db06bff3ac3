//! Ground truth for small parameters: two independent exhaustive
//! enumerations of a family, a chi-square uniformity test for samplers, and
//! rejection-rate measurement for the streaming sampler.

use std::collections::HashMap;

use thiserror::Error;

use crate::automaton::{check_wheeler, Automaton, ParamError, Params, Transition, WheelerDfa};
use crate::bits::BitSeq;
use crate::codec::{decode, fill, CodecError, Mask, OutMatrix};
use crate::num::Float;
use crate::shuffle::{DefaultRng, RngSource};
use crate::stats::ChiSquareReport;
use crate::stream::{sample_stream, NullSink, StreamError};

/// Largest `n * sigma` accepted by [`enumerate_via_r`].
pub const MAX_ENUM_CELLS: u64 = 24;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    EmptyFamily(#[from] ParamError),
    #[error("parameters {0} exceed the enumeration guard")]
    TooLarge(Params),
    #[error("sampled automaton is not in the enumerated family: {0:?}")]
    UnknownOutcome(Vec<u64>),
    #[error("{draws} draws is fewer than 100 per outcome ({outcomes} outcomes)")]
    TooFewDraws { draws: u64, outcomes: u64 },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Stream(#[from] StreamError),
}

/// All `size`-subsets of `1..=universe` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Subsets {
    universe: u64,
    current: Option<Vec<u64>>,
}

impl Subsets {
    pub fn new(universe: u64, size: u64) -> Self {
        let current = (size <= universe).then(|| (1..=size).collect());
        Subsets { universe, current }
    }
}

impl Iterator for Subsets {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let k = next.len();
        // Rightmost position that can still move up.
        if let Some(p) = (0..k).rev().find(|&p| next[p] < self.universe - (k - 1 - p) as u64) {
            next[p] += 1;
            for q in p + 1..k {
                next[q] = next[q - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Every member of the family, obtained by decoding every valid
/// (out-matrix, in-vector) pair.
pub fn enumerate_via_r(n: u64, m: u64, sigma: u64) -> Result<Vec<WheelerDfa>, OracleError> {
    let p = Params::new(n, m, sigma);
    p.validate()?;
    if p.cells() > MAX_ENUM_CELLS {
        return Err(OracleError::TooLarge(p));
    }
    let in_choices: Vec<Vec<u64>> = Subsets::new(m - sigma, n - sigma - 1).collect();
    let mut out = Vec::new();
    for cells in Subsets::new(p.cells(), m) {
        let o = OutMatrix::from_cells(n, sigma, cells)?;
        if o.first_empty_column().is_some() {
            continue;
        }
        let mask = Mask::for_matrix(&o)?;
        for ones in &in_choices {
            let mut bits = BitSeq::zeros(m - sigma);
            ones.iter().for_each(|&b| bits.set(b));
            let i = crate::codec::InVector::new(fill(&mask, &bits)?);
            out.push(decode(&o, &i)?);
        }
    }
    Ok(out)
}

/// Guard of [`enumerate_direct`].
pub fn direct_guard(p: Params) -> bool {
    p.n <= 4 && p.sigma <= 2 && p.m <= 6
}

/// Every member of the family, found by brute force: every choice of `m`
/// distinct `(source, label)` pairs and every assignment of destinations,
/// filtered by [`check_wheeler`]. Shares no code with the codec.
pub fn enumerate_direct(n: u64, m: u64, sigma: u64) -> Result<Vec<WheelerDfa>, OracleError> {
    let p = Params::new(n, m, sigma);
    if !direct_guard(p) {
        return Err(OracleError::TooLarge(p));
    }
    let pairs: Vec<(u64, u64)> = (1..=sigma).flat_map(|j| (1..=n).map(move |u| (u, j))).collect();
    let mut out = Vec::new();
    for chosen in Subsets::new(pairs.len() as u64, m) {
        let mut dests = vec![1u64; m as usize];
        loop {
            let ts = chosen
                .iter()
                .zip(&dests)
                .map(|(&c, &v)| {
                    let (u, j) = pairs[c as usize - 1];
                    Transition::new(u, j, v)
                })
                .collect();
            let a = Automaton::new(n, sigma, ts).expect("in range");
            if check_wheeler(&a).is_ok() {
                out.push(WheelerDfa::from_trusted(a));
            }
            // Odometer over [n]^m.
            let Some(pos) = dests.iter().rposition(|&v| v < n) else { break };
            dests[pos] += 1;
            dests[pos + 1..].iter_mut().for_each(|v| *v = 1);
        }
    }
    Ok(out)
}

/// Chi-square test of `draws` outputs of `generator` against the uniform
/// distribution over the enumerated family of `p`.
pub fn uniformity_test<F, G, E>(mut generator: G, p: Params, draws: u64) -> Result<ChiSquareReport<F>, OracleError>
where
    F: Float,
    G: FnMut() -> Result<WheelerDfa, E>,
    OracleError: From<E>,
{
    let family = enumerate_via_r(p.n, p.m, p.sigma)?;
    let outcomes = family.len() as u64;
    if draws < 100 * outcomes {
        return Err(OracleError::TooFewDraws { draws, outcomes });
    }
    let index: HashMap<Vec<u64>, usize> = family.iter().enumerate().map(|(i, d)| (d.key(), i)).collect();
    let mut counts = vec![0u64; family.len()];
    for _ in 0..draws {
        let key = generator()?.key();
        match index.get(&key) {
            Some(&i) => counts[i] += 1,
            None => return Err(OracleError::UnknownOutcome(key)),
        }
    }
    Ok(ChiSquareReport::uniform(&counts))
}

/// [`uniformity_test`] with one free retry: `make` builds a generator from
/// a seed, the second seed is only used if the first run fails.
pub fn uniformity_test_with_retry<F, M, G, E>(
    mut make: M,
    p: Params,
    draws: u64,
    seeds: [u64; 2],
) -> Result<(ChiSquareReport<F>, u32), OracleError>
where
    F: Float,
    M: FnMut(u64) -> G,
    G: FnMut() -> Result<WheelerDfa, E>,
    OracleError: From<E>,
{
    let first = uniformity_test(make(seeds[0]), p, draws)?;
    if first.pass {
        return Ok((first, 0));
    }
    Ok((uniformity_test(make(seeds[1]), p, draws)?, 1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionStats {
    pub runs: u64,
    pub mean_attempts: f64,
    pub max_attempts: u64,
}

/// Runs the streaming sampler `runs` times into a null sink and summarises
/// the attempt counts. All runs draw from one generator seeded with `seed`.
pub fn rejection_stats(p: Params, runs: u64, seed: u64) -> Result<RejectionStats, OracleError> {
    p.validate()?;
    let mut source = RngSource::<f64, DefaultRng>::seeded(seed);
    let mut total = 0u64;
    let mut max = 0u64;
    for _ in 0..runs {
        let stats = sample_stream(p, &mut source, &mut NullSink::default(), None)?;
        total += stats.attempts;
        max = max.max(stats.attempts);
    }
    Ok(RejectionStats { runs, mean_attempts: total as f64 / runs.max(1) as f64, max_attempts: max })
}
