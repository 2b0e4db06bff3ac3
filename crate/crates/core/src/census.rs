//! Exact sizes of Wheeler DFA families and bit-count bounds.
//!
//! Binomials follow the convention `C(a, b) = 0` whenever `b < 0`, `b > a`
//! or `a < 0`; the alternating sums below depend on it.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::automaton::{ParamError, Params};
use crate::num::Float;

/// Arbitrary-precision family size.
pub type BigCount = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    EmptyFamily(#[from] ParamError),
    #[error("family is empty for n={n} m={m} sigma={sigma}")]
    NoEffectiveSubset { n: u64, m: u64, sigma: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

/// `C(a, b)`, zero outside `0 <= b <= a`.
pub fn binom(a: i64, b: i64) -> BigCount {
    if a < 0 || b < 0 || b > a {
        return BigCount::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigCount::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

fn signed(v: u64) -> i64 {
    i64::try_from(v).expect("parameter fits in i64")
}

/// Out-matrices with `m` set cells and no empty column:
/// `sum_{j=0}^{sigma} (-1)^j C(sigma, j) C(n (sigma - j), m)`.
fn out_matrices(n: u64, m: u64, sigma: u64) -> BigCount {
    let (n, m, sigma) = (signed(n), signed(m), signed(sigma));
    let mut sum = BigInt::zero();
    for j in 0..=sigma {
        let term = BigInt::from_biguint(Sign::Plus, binom(sigma, j) * binom(n * (sigma - j), m));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_biguint().expect("inclusion-exclusion count is non-negative")
}

/// In-vectors compatible with any fixed out-matrix: `C(m - sigma, n - sigma - 1)`.
fn in_vectors(n: u64, m: u64, sigma: u64) -> BigCount {
    binom(signed(m) - signed(sigma), signed(n) - signed(sigma) - 1)
}

/// Number of valid out-matrices, `|O_{n,sigma,m}|`.
pub fn count_o(n: u64, m: u64, sigma: u64) -> Result<BigCount, CensusError> {
    Params::new(n, m, sigma).validate()?;
    Ok(out_matrices(n, m, sigma))
}

/// Size of `I_O` for any valid out-matrix `O`.
pub fn count_i(n: u64, m: u64, sigma: u64) -> Result<BigCount, CensusError> {
    Params::new(n, m, sigma).validate()?;
    Ok(in_vectors(n, m, sigma))
}

/// `|D_{n,m,sigma}|`: Wheeler DFAs over the effective alphabet `1..=sigma`.
pub fn count_wdfa(n: u64, m: u64, sigma: u64) -> Result<BigCount, CensusError> {
    Params::new(n, m, sigma).validate()?;
    Ok(in_vectors(n, m, sigma) * out_matrices(n, m, sigma))
}

/// [`count_wdfa`] extended by zero to parameters describing an empty family.
pub fn count_wdfa_or_zero(n: u64, m: u64, sigma: u64) -> BigCount {
    count_wdfa(n, m, sigma).unwrap_or_default()
}

/// Wheeler DFAs over a fixed alphabet of size `sigma` whose labels need not
/// all be used: sums over the number `k` of labels actually used.
pub fn count_wdfa_noneffective(n: u64, m: u64, sigma: u64) -> Result<BigCount, CensusError> {
    if n < 2 || m < n - 1 {
        return Err(CensusError::PreconditionViolated("requires n >= 2 and m >= n - 1"));
    }
    let mut total = BigCount::zero();
    for k in 1..=sigma {
        let ways = in_vectors(n, m, k);
        if ways.is_zero() {
            continue;
        }
        total += binom(signed(sigma), signed(k)) * ways * out_matrices(n, m, k);
    }
    if total.is_zero() {
        return Err(CensusError::NoEffectiveSubset { n, m, sigma });
    }
    Ok(total)
}

/// `|D_{n,sigma}|`, the family summed over every feasible `m`.
pub fn count_all_m(n: u64, sigma: u64) -> Result<BigCount, CensusError> {
    Params::new(n, n.saturating_sub(1), sigma).validate()?;
    Ok((n - 1..=n * sigma).map(|m| count_wdfa_or_zero(n, m, sigma)).sum())
}

/// Base-2 logarithm of a positive big integer, from its top 64 bits.
pub fn log2_big<F: Float>(x: &BigCount) -> F {
    if x.is_zero() {
        return F::neg_infinity();
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits after shift");
    F::from_u64(top).log2() + F::from_u64(shift)
}

/// Lower and upper bounds, in bits, on `log2 |D_{n,sigma}|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds<F> {
    pub lower_bits: F,
    pub upper_bits: F,
}

/// `n sigma + (n - sigma) log2 sigma - (n + log2 sigma)`; needs `1 <= sigma <= n - 1`.
pub fn lower_bound_bits<F: Float>(n: u64, sigma: u64) -> Result<F, CensusError> {
    if sigma == 0 || sigma + 1 > n {
        return Err(CensusError::PreconditionViolated("lower bound requires 1 <= sigma <= n - 1"));
    }
    let (nf, sf) = (F::from_u64(n), F::from_u64(sigma));
    Ok(nf * sf + (nf - sf) * sf.log2() - (nf + sf.log2()))
}

/// `n sigma + (n - sigma) log2(e sigma n / (n - sigma - 1))`; needs
/// `eps` in `(0, 1/2]`, `sigma <= (1 - eps) n` and `n >= 2 / eps`.
pub fn upper_bound_bits<F: Float>(n: u64, sigma: u64, eps: F) -> Result<F, CensusError> {
    let (nf, sf) = (F::from_u64(n), F::from_u64(sigma));
    let half = F::from_f64(0.5);
    if !(eps > F::zero() && eps <= half) {
        return Err(CensusError::PreconditionViolated("upper bound requires 0 < eps <= 1/2"));
    }
    if sigma == 0 || sf > (F::one() - eps) * nf {
        return Err(CensusError::PreconditionViolated("upper bound requires 1 <= sigma <= (1 - eps) n"));
    }
    if nf < F::from_u64(2) / eps {
        return Err(CensusError::PreconditionViolated("upper bound requires n >= 2 / eps"));
    }
    let slack = F::from_u64(n - sigma - 1);
    Ok(nf * sf + (nf - sf) * (F::E() * sf * nf / slack).log2())
}

pub fn bounds<F: Float>(n: u64, sigma: u64, eps: F) -> Result<Bounds<F>, CensusError> {
    Ok(Bounds { lower_bits: lower_bound_bits(n, sigma)?, upper_bits: upper_bound_bits(n, sigma, eps)? })
}
