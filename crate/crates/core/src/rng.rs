//! Per-sample random streams.
//!
//! Each sample index gets its own ChaCha8 stream keyed by an avalanche hash
//! of the campaign seed, so sample `i` is reproducible on its own and
//! samples can be sharded across threads in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct SampleRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SampleRng {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(mix64(seed));
        inner.set_stream(index);
        Self { inner, spare: None }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Standard normal variate (Marsaglia polar method).
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn normals<const N: usize>(&mut self) -> [f64; N] {
        std::array::from_fn(|_| self.normal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = (0..8).map({ let mut r = SampleRng::new(7, 3); move |_| r.normal() }).collect();
        let b: Vec<f64> = (0..8).map({ let mut r = SampleRng::new(7, 3); move |_| r.normal() }).collect();
        let c: Vec<f64> = (0..8).map({ let mut r = SampleRng::new(7, 4); move |_| r.normal() }).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn normal_moments() {
        let mut r = SampleRng::new(1, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| r.normal()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}
