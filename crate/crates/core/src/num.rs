use std::fmt::Debug;

use rand::Rng;

/// Floating-point scalar usable by the samplers and statistics.
///
/// Implemented for `f32` and `f64`. Precision only affects distributional
/// quality, never the hard invariants of the samplers.
pub trait Float: num_traits::Float + num_traits::FloatConst + Debug + Default + Send + Sync + 'static {
    /// Uniform draw from `[0, 1)` at this type's native precision.
    fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn from_u64(v: u64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("u64 is representable as a float")
    }

    fn from_f64(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("f64 is representable as a float")
    }

    /// Floor as an integer, saturating at `u64::MAX` (and `0` for NaN or negatives).
    fn floor_u64(self) -> u64 {
        let f = self.floor();
        if f.is_nan() || f <= Self::zero() {
            0
        } else {
            f.to_u64().unwrap_or(u64::MAX)
        }
    }
}

impl Float for f32 {
    fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
}

impl Float for f64 {
    fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_saturates() {
        assert_eq!(2.7f64.floor_u64(), 2);
        assert_eq!((-1.5f64).floor_u64(), 0);
        assert_eq!(f64::NAN.floor_u64(), 0);
        assert_eq!(f64::INFINITY.floor_u64(), u64::MAX);
        assert_eq!(1e30f32.floor_u64(), u64::MAX);
    }
}
