use super::SamplerError;

/// splitmix64: the state advances by the golden-ratio increment and each
/// output is the standard finalizer of the new state. Identical seeds give
/// identical streams on every platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prng {
    state: u64,
    draws: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Prng { state: seed, draws: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..k`. Draws at or above `⌊2^64 / k⌋ · k` are
    /// rejected so the result is unbiased.
    pub fn uniform_below(&mut self, k: u64) -> Result<u64, SamplerError> {
        if k == 0 {
            return Err(SamplerError::EmptyRange);
        }
        let zone = ((1u128 << 64) / k as u128) * k as u128;
        loop {
            let x = self.next_u64();
            if (x as u128) < zone {
                return Ok(x % k);
            }
        }
    }

    /// Number of 64-bit outputs consumed so far, rejected ones included.
    pub fn draws(&self) -> u64 {
        self.draws
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream() {
        // published splitmix64 outputs for seed 0
        let mut r = Prng::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
        assert_eq!(r.draws(), 3);
    }

    #[test]
    fn k_one_is_always_zero() {
        let mut r = Prng::new(9);
        assert!((0..100).all(|_| r.uniform_below(1).unwrap() == 0));
        assert_eq!(r.uniform_below(0), Err(SamplerError::EmptyRange));
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = Prng::new(1234);
        let mut b = Prng::new(1234);
        for k in 1..200u64 {
            assert_eq!(a.uniform_below(k).unwrap(), b.uniform_below(k).unwrap());
        }
    }

    #[test]
    fn fair_coin() {
        let mut r = Prng::new(20240601);
        let zeros = (0..1_000_000).filter(|_| r.uniform_below(2).unwrap() == 0).count();
        let freq = zeros as f64 / 1e6;
        assert!((0.498..=0.502).contains(&freq), "{freq}");
    }

    #[test]
    fn rejection_zone() {
        // k just above 2^63 rejects nearly half of all draws
        let k = (1u64 << 63) + 1;
        let mut r = Prng::new(5);
        for _ in 0..1000 {
            assert!(r.uniform_below(k).unwrap() < k);
        }
        assert!(r.draws() > 1500);
    }
}
