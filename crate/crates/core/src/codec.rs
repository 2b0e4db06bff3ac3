//! Explicit encoding of a Wheeler DFA as an out-matrix and an in-vector.
//!
//! The out-matrix `O` has `O[u][j] = 1` iff state `u` has an out-transition
//! labelled `j`; it is stored column-major so the matrix rank is one prefix
//! count. The in-vector `I` lists, for states `2..=n` in order, a one-bit
//! followed by `in_degree - 1` zero-bits. A pair is valid when every column
//! of `O` is non-empty, `|O| = |I| = m`, `‖I‖ = n - 1`, and `I` has a one-bit
//! at the first edge of every label block.
//!
//! Randomness enters only through [`SamplerSource`], which lets the basic
//! sampler here be checked step for step against the streaming sampler.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automaton::{check_wheeler, Automaton, ParamError, Params, Transition, Violation, WheelerDfa};
use crate::bits::{BitSeq, BitsError};
use crate::shuffle::{Role, SamplerSource, ShuffleError, SubsetSampler};

/// Largest matrix (in cells) this module stores explicitly.
pub const MAX_CELLS: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("n * sigma = {cells} exceeds the explicit codec limit of {MAX_CELLS} cells")]
    TooLarge { cells: u64 },
    #[error("not a Wheeler DFA: {0}")]
    NotWheeler(#[from] Violation),
    #[error("invalid (O, I) pair: {0}")]
    BadPair(&'static str),
    #[error("invalid out-matrix: column {column} is empty")]
    EmptyColumn { column: u64 },
    #[error("mask has {wildcards} wildcards but {bits} fill bits were given")]
    LengthMismatch { wildcards: u64, bits: u64 },
    #[error("cell ({row}, {column}) outside a {n}x{sigma} matrix")]
    OutOfRange { row: u64, column: u64, n: u64, sigma: u64 },
    #[error(transparent)]
    Bits(#[from] BitsError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
}

/// `n x sigma` bit matrix, column-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OutMatrix {
    n: u64,
    sigma: u64,
    bits: BitSeq,
}

impl OutMatrix {
    /// Matrix with the given 1-based column-major cells set (`t -> (u, j)` as in [`crate::stream::map_t`]).
    pub fn from_cells(n: u64, sigma: u64, cells: impl IntoIterator<Item = u64>) -> Result<Self, CodecError> {
        let total = n.checked_mul(sigma).filter(|&c| c <= MAX_CELLS).ok_or(CodecError::TooLarge {
            cells: n.saturating_mul(sigma),
        })?;
        let mut bits = BitSeq::zeros(total);
        for t in cells {
            if t == 0 || t > total {
                return Err(CodecError::OutOfRange {
                    row: t.saturating_sub(1) % n.max(1) + 1,
                    column: t.saturating_sub(1) / n.max(1) + 1,
                    n,
                    sigma,
                });
            }
            bits.set(t);
        }
        Ok(OutMatrix { n, sigma, bits })
    }

    /// Matrix from row-major 0/1 rows, e.g. `[[0, 1], [1, 0]]`.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, CodecError> {
        let n = rows.len() as u64;
        let sigma = rows.first().map_or(0, |r| r.as_ref().len()) as u64;
        let mut cells = Vec::new();
        for (u, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() as u64 != sigma {
                return Err(CodecError::BadPair("ragged rows"));
            }
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    cells.push(j as u64 * n + u as u64 + 1);
                }
            }
        }
        Self::from_cells(n, sigma, cells)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn get(&self, row: u64, column: u64) -> bool {
        self.bits.get((column - 1) * self.n + row)
    }

    /// `‖O‖`, the number of set cells.
    pub fn norm(&self) -> u64 {
        self.bits.count_ones()
    }

    /// `‖O_j‖` for every column, in order.
    pub fn column_norms(&self) -> Vec<u64> {
        let mut norms = vec![0; self.sigma as usize];
        for t in self.bits.ones() {
            norms[((t - 1) / self.n) as usize] += 1;
        }
        norms
    }

    /// First column with no set cell, if any.
    pub fn first_empty_column(&self) -> Option<u64> {
        self.column_norms().iter().position(|&c| c == 0).map(|j| j as u64 + 1)
    }

    /// Set cells as `(row, column)`, column by column.
    pub fn set_cells(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.bits.ones().map(|t| ((t - 1) % self.n + 1, (t - 1) / self.n + 1))
    }

    /// The column-major linearisation.
    pub fn as_bits(&self) -> &BitSeq {
        &self.bits
    }
}

impl fmt::Debug for OutMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OutMatrix[")?;
        for u in 1..=self.n {
            if u > 1 {
                f.write_str(" ")?;
            }
            for j in 1..=self.sigma {
                f.write_str(if self.get(u, j) { "1" } else { "0" })?;
            }
        }
        f.write_str("]")
    }
}

/// `rank(A, (i, j))`: set cells in columns `1..j` plus the first `i` cells of
/// column `j`.
pub fn rank_mat(a: &OutMatrix, (row, column): (u64, u64)) -> Result<u64, CodecError> {
    if row > a.n || column == 0 || column > a.sigma {
        return Err(CodecError::OutOfRange { row, column, n: a.n, sigma: a.sigma });
    }
    Ok(a.bits.rank((column - 1) * a.n + row)?)
}

/// In-degree vector `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InVector(BitSeq);

impl InVector {
    pub fn new(bits: BitSeq) -> Self {
        InVector(bits)
    }

    pub fn bits(&self) -> &BitSeq {
        &self.0
    }

    /// True iff this vector is in `I_O`: length `‖O‖`, `n - 1` ones, and a
    /// one at the first edge of each label block.
    pub fn is_compatible(&self, o: &OutMatrix) -> bool {
        compatibility(o, self).is_ok()
    }
}

impl fmt::Display for InVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for InVector {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, BitsError> {
        s.parse().map(InVector)
    }
}

fn compatibility(o: &OutMatrix, i: &InVector) -> Result<(), CodecError> {
    if let Some(column) = o.first_empty_column() {
        return Err(CodecError::EmptyColumn { column });
    }
    if i.0.len() != o.norm() {
        return Err(CodecError::BadPair("|I| differs from ‖O‖"));
    }
    if i.0.count_ones() != o.n - 1 {
        return Err(CodecError::BadPair("‖I‖ differs from n - 1"));
    }
    let mut block_start = 1;
    for norm in o.column_norms() {
        if !i.0.get(block_start) {
            return Err(CodecError::BadPair("I has a zero at the first edge of a label"));
        }
        block_start += norm;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskSymbol {
    One,
    Wild,
}

/// Sequence over `{1, #}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask(pub Vec<MaskSymbol>);

impl Mask {
    /// `1 #^(‖O_1‖-1) 1 #^(‖O_2‖-1) ... 1 #^(‖O_sigma‖-1)`.
    pub fn for_matrix(o: &OutMatrix) -> Result<Self, CodecError> {
        let mut symbols = Vec::with_capacity(o.norm() as usize);
        for (j, norm) in o.column_norms().into_iter().enumerate() {
            if norm == 0 {
                return Err(CodecError::EmptyColumn { column: j as u64 + 1 });
            }
            symbols.push(MaskSymbol::One);
            symbols.extend(std::iter::repeat_n(MaskSymbol::Wild, norm as usize - 1));
        }
        Ok(Mask(symbols))
    }

    pub fn wildcards(&self) -> u64 {
        self.0.iter().filter(|&&s| s == MaskSymbol::Wild).count() as u64
    }
}

impl FromStr for Mask {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, BitsError> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(MaskSymbol::One),
                '#' => Ok(MaskSymbol::Wild),
                other => Err(BitsError::BadChar(other)),
            })
            .collect::<Result<_, _>>()
            .map(Mask)
    }
}

/// Replaces the wildcards of `mask`, in order, with `bits`.
pub fn fill(mask: &Mask, bits: &BitSeq) -> Result<BitSeq, CodecError> {
    let wildcards = mask.wildcards();
    if wildcards != bits.len() {
        return Err(CodecError::LengthMismatch { wildcards, bits: bits.len() });
    }
    let mut next = bits.iter();
    Ok(mask
        .0
        .iter()
        .map(|s| match s {
            MaskSymbol::One => true,
            MaskSymbol::Wild => next.next().expect("wildcard count checked"),
        })
        .collect())
}

/// One draw of the out-matrix: `None` if some column came out empty.
pub fn try_sample_out_matrix<S: SamplerSource>(p: Params, source: &mut S) -> Result<Option<OutMatrix>, CodecError> {
    p.validate()?;
    let mut cells = source.open(Role::Out, p.cells(), p.m)?;
    let mut picked = Vec::with_capacity(p.m as usize);
    while !cells.is_empty() {
        picked.push(cells.pop()?);
    }
    let o = OutMatrix::from_cells(p.n, p.sigma, picked)?;
    Ok(o.first_empty_column().is_none().then_some(o))
}

/// Uniform out-matrix with `m` set cells and no empty column, by rejection.
/// Returns the matrix and the number of draws it took.
pub fn sample_out_matrix<S: SamplerSource>(p: Params, source: &mut S) -> Result<(OutMatrix, u64), CodecError> {
    let mut attempts = 0;
    loop {
        attempts += 1;
        if let Some(o) = try_sample_out_matrix(p, source)? {
            return Ok((o, attempts));
        }
    }
}

/// Uniform member of `I_O`: the mask of `O` with its wildcards filled by a
/// uniform arrangement of `n - sigma - 1` ones among `m - sigma` slots.
pub fn sample_in_vector<S: SamplerSource>(o: &OutMatrix, source: &mut S) -> Result<InVector, CodecError> {
    let mask = Mask::for_matrix(o)?;
    let slots = mask.wildcards();
    let ones = o.n - o.sigma - 1;
    let mut picks = source.open(Role::In, slots, ones)?;
    let mut bits = BitSeq::zeros(slots);
    while !picks.is_empty() {
        bits.set(picks.pop()?);
    }
    Ok(InVector(fill(&mask, &bits)?))
}

/// Image of a Wheeler DFA under the encoding.
pub fn encode(d: &Automaton) -> Result<(OutMatrix, InVector), CodecError> {
    check_wheeler(d)?;
    let n = d.n();
    let o = OutMatrix::from_cells(n, d.sigma(), d.transitions().iter().map(|t| (t.label - 1) * n + t.source))?;
    let mut in_degree = vec![0u64; n as usize + 1];
    for t in d.transitions() {
        in_degree[t.dest as usize] += 1;
    }
    let i = in_degree[2..]
        .iter()
        .flat_map(|&deg| std::iter::once(true).chain(std::iter::repeat_n(false, deg as usize - 1)))
        .collect();
    Ok((o, InVector(i)))
}

/// Inverse of [`encode`]: the `i`-th set cell `(u, j)` of `O` (column-major)
/// becomes the transition `((u, j), rank(I, i) + 1)`.
pub fn decode(o: &OutMatrix, i: &InVector) -> Result<WheelerDfa, CodecError> {
    compatibility(o, i)?;
    let mut v = 1;
    let transitions = o
        .set_cells()
        .zip(i.0.iter())
        .map(|((u, j), bit)| {
            v += u64::from(bit);
            Transition::new(u, j, v)
        })
        .collect();
    let a = Automaton::new(o.n, o.sigma, transitions).expect("decoded transitions are in range");
    Ok(WheelerDfa::from_trusted(a))
}

/// Basic sampler: out-matrix by rejection, then in-vector, then decode.
/// Returns the automaton and the number of out-matrix draws.
pub fn sample_basic<S: SamplerSource>(p: Params, source: &mut S) -> Result<(WheelerDfa, u64), CodecError> {
    let (o, attempts) = sample_out_matrix(p, source)?;
    let i = sample_in_vector(&o, source)?;
    Ok((decode(&o, &i)?, attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shuffle::ScriptedSource;

    fn five_state_out() -> OutMatrix {
        OutMatrix::from_rows(&[[0, 1], [1, 0], [0, 1], [0, 1], [1, 1]]).unwrap()
    }

    fn five_state() -> Automaton {
        Automaton::new(
            5,
            2,
            vec![
                Transition::new(1, 2, 3),
                Transition::new(2, 1, 2),
                Transition::new(3, 2, 4),
                Transition::new(4, 2, 4),
                Transition::new(5, 1, 2),
                Transition::new(5, 2, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rank_mat_examples() {
        let o = five_state_out();
        assert_eq!(rank_mat(&o, (2, 1)).unwrap(), 1);
        assert_eq!(rank_mat(&o, (1, 2)).unwrap(), 3);
        assert_eq!(rank_mat(&o, (0, 1)).unwrap(), 0);
        assert_eq!(rank_mat(&o, (5, 2)).unwrap(), 6);
        assert!(rank_mat(&o, (6, 1)).is_err());
        assert!(rank_mat(&o, (1, 3)).is_err());
    }

    #[test]
    fn out_matrix_from_running_subset() {
        let mut src = ScriptedSource::single(vec![2, 5, 6, 8, 9, 10], vec![2, 4]);
        let (o, attempts) = sample_out_matrix(Params::new(5, 6, 2), &mut src).unwrap();
        assert_eq!(o, five_state_out());
        assert_eq!(attempts, 1);
        assert_eq!(o.as_bits().to_string(), "0100110111");
    }

    #[test]
    fn full_matrix_never_rejects() {
        let mut src = ScriptedSource::single((1..=6).collect(), vec![]);
        let (o, attempts) = sample_out_matrix(Params::new(3, 6, 2), &mut src).unwrap();
        assert_eq!(attempts, 1);
        assert_eq!(o.norm(), 6);
        assert!(o.column_norms().iter().all(|&c| c == 3));
    }

    #[test]
    fn empty_column_rejected_then_accepted() {
        let mut src = ScriptedSource::new(vec![vec![1, 2], vec![1, 4]], vec![vec![]]);
        let p = Params::new(3, 2, 2);
        let (o, attempts) = sample_out_matrix(p, &mut src).unwrap();
        assert_eq!(attempts, 2);
        assert_eq!(o, OutMatrix::from_rows(&[[1, 1], [0, 0], [0, 0]]).unwrap());
    }

    #[test]
    fn in_vector_five_state_example() {
        let mut src = ScriptedSource::single(vec![], vec![2, 4]);
        let i = sample_in_vector(&five_state_out(), &mut src).unwrap();
        assert_eq!(i.to_string(), "101101");
    }

    #[test]
    fn in_vector_without_free_ones() {
        // n - sigma - 1 = 0: every wildcard becomes zero.
        let o = OutMatrix::from_rows(&[[1, 1], [1, 0], [0, 1]]).unwrap();
        let mut src = ScriptedSource::single(vec![], vec![]);
        let i = sample_in_vector(&o, &mut src).unwrap();
        assert_eq!(i.to_string(), "1010");
    }

    #[test]
    fn in_vector_needs_full_columns() {
        let o = OutMatrix::from_rows(&[[1, 0], [1, 0], [0, 0]]).unwrap();
        let mut src = ScriptedSource::single(vec![], vec![]);
        assert_eq!(sample_in_vector(&o, &mut src), Err(CodecError::EmptyColumn { column: 2 }));
    }

    #[test]
    fn fill_examples() {
        let mask: Mask = "1#1###".parse().unwrap();
        assert_eq!(fill(&mask, &"0101".parse().unwrap()).unwrap().to_string(), "101101");
        let mask: Mask = "###".parse().unwrap();
        assert_eq!(fill(&mask, &"111".parse().unwrap()).unwrap().to_string(), "111");
        let mask: Mask = "1#1".parse().unwrap();
        assert_eq!(
            fill(&mask, &"10".parse().unwrap()),
            Err(CodecError::LengthMismatch { wildcards: 1, bits: 2 })
        );
    }

    #[test]
    fn mask_of_five_state_example() {
        assert_eq!(Mask::for_matrix(&five_state_out()).unwrap(), "1#1###".parse().unwrap());
    }

    #[test]
    fn encode_five_state_example() {
        let (o, i) = encode(&five_state()).unwrap();
        assert_eq!(o, five_state_out());
        assert_eq!(i.to_string(), "101101");
        assert!(i.is_compatible(&o));
    }

    #[test]
    fn encode_smallest() {
        let a = Automaton::new(2, 1, vec![Transition::new(1, 1, 2)]).unwrap();
        let (o, i) = encode(&a).unwrap();
        assert_eq!(o, OutMatrix::from_rows(&[[1], [0]]).unwrap());
        assert_eq!(i.to_string(), "1");
    }

    #[test]
    fn encode_rejects_non_wheeler() {
        let mut ts = five_state().transitions().to_vec();
        ts.push(Transition::new(1, 1, 3));
        let a = Automaton::new(5, 2, ts).unwrap();
        assert!(matches!(encode(&a), Err(CodecError::NotWheeler(Violation::InputInconsistent { .. }))));
    }

    #[test]
    fn decode_five_state_example() {
        let d = decode(&five_state_out(), &"101101".parse().unwrap()).unwrap();
        assert_eq!(*d, five_state());
        // Cell (5,1) is the 2nd set cell and rank(I, 2) + 1 = 2.
        assert_eq!(rank_mat(&five_state_out(), (5, 1)).unwrap(), 2);
        assert!(d.transitions().contains(&Transition::new(5, 1, 2)));
    }

    #[test]
    fn decode_smallest() {
        let o = OutMatrix::from_rows(&[[1], [0]]).unwrap();
        let d = decode(&o, &"1".parse().unwrap()).unwrap();
        assert_eq!(d.transitions(), &[Transition::new(1, 1, 2)]);
    }

    #[test]
    fn decode_rejects_bad_pairs() {
        let o = five_state_out();
        // Zero at the first edge of label 2.
        assert!(matches!(decode(&o, &"110101".parse().unwrap()), Err(CodecError::BadPair(_))));
        assert!(matches!(decode(&o, &"10110".parse().unwrap()), Err(CodecError::BadPair(_))));
        assert!(matches!(decode(&o, &"101111".parse().unwrap()), Err(CodecError::BadPair(_))));
        let hollow = OutMatrix::from_rows(&[[1, 0], [1, 0], [1, 0]]).unwrap();
        assert_eq!(decode(&hollow, &"101".parse().unwrap()), Err(CodecError::EmptyColumn { column: 2 }));
    }

    #[test]
    fn basic_five_state_example() {
        let mut src = ScriptedSource::single(vec![2, 5, 6, 8, 9, 10], vec![2, 4]);
        let (d, attempts) = sample_basic(Params::new(5, 6, 2), &mut src).unwrap();
        assert_eq!(*d, five_state());
        assert_eq!(attempts, 1);
    }
}
