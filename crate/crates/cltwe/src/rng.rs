//! Seedable big-integer randomness on top of ChaCha20 streams.
//!
//! Every piece of secret material in this crate is drawn from a
//! [`StreamRng`]: a ChaCha20 generator keyed by a SHA-256 digest of the
//! caller's seed, with one independent stream per prime slot so that
//! per-slot work can proceed in parallel while staying reproducible.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// A single deterministic randomness stream.
pub struct StreamRng {
    inner: ChaCha20Rng,
}

impl StreamRng {
    /// Derive stream `stream` from `seed`. Distinct streams from the same
    /// seed are independent.
    pub fn from_seed(seed: &[u8], stream: u64) -> Self {
        let digest = Sha256::digest(seed);
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(stream);
        StreamRng { inner }
    }

    pub fn fill_bytes(&mut self, buf: &mut [u8]) {
        self.inner.fill_bytes(buf);
    }

    /// Uniform integer in `[0, 2^bits)`.
    pub fn random_bits(&mut self, bits: u64) -> BigUint {
        if bits == 0 {
            return BigUint::zero();
        }
        let nbytes = bits.div_ceil(8) as usize;
        let mut buf = vec![0u8; nbytes];
        self.inner.fill_bytes(&mut buf);
        let excess = (nbytes as u64) * 8 - bits;
        buf[0] &= 0xffu8 >> excess;
        BigUint::from_bytes_be(&buf)
    }

    /// Uniform integer in `[0, bound)` by rejection.
    pub fn random_below(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "random_below: zero bound");
        let bits = bound.bits();
        loop {
            let candidate = self.random_bits(bits);
            if &candidate < bound {
                return candidate;
            }
        }
    }

    /// Uniform signed integer in `(-2^bits, 2^bits)`.
    pub fn random_signed(&mut self, bits: u64) -> BigInt {
        loop {
            let magnitude = self.random_bits(bits);
            let negative = self.inner.next_u32() & 1 == 1;
            // resample -0 so 0 is not twice as likely
            if magnitude.is_zero() && negative {
                continue;
            }
            let sign = if negative { Sign::Minus } else { Sign::Plus };
            return BigInt::from_biguint(sign, magnitude);
        }
    }

    /// Random prime of exactly `bits` bits.
    pub fn random_prime(&mut self, bits: u64) -> BigUint {
        assert!(bits >= 2, "random_prime: need at least 2 bits");
        loop {
            let mut candidate = self.random_bits(bits);
            candidate.set_bit(bits - 1, true);
            candidate.set_bit(0, true);
            if is_prime(&candidate, self) {
                return candidate;
            }
        }
    }
}

const SMALL_PRIME_LIMIT: u32 = 2000;

fn small_primes() -> Vec<u32> {
    let limit = SMALL_PRIME_LIMIT as usize;
    let mut sieve = vec![true; limit];
    let mut primes = Vec::new();
    for p in 2..limit {
        if sieve[p] {
            primes.push(p as u32);
            let mut q = p * p;
            while q < limit {
                sieve[q] = false;
                q += p;
            }
        }
    }
    primes
}

/// Miller-Rabin with 32 random bases, preceded by trial division.
pub fn is_prime(n: &BigUint, rng: &mut StreamRng) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &p in small_primes().iter() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let span = n - BigUint::from(3u32); // bases in [2, n-2]
    'witness: for _ in 0..32 {
        let base = rng.random_below(&span) + &two;
        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic() {
        let mut a = StreamRng::from_seed(b"seed", 0);
        let mut b = StreamRng::from_seed(b"seed", 0);
        assert_eq!(a.random_bits(256), b.random_bits(256));
    }

    #[test]
    fn streams_are_independent() {
        let mut a = StreamRng::from_seed(b"seed", 0);
        let mut b = StreamRng::from_seed(b"seed", 1);
        assert_ne!(a.random_bits(256), b.random_bits(256));
    }

    #[test]
    fn random_below_in_range() {
        let mut rng = StreamRng::from_seed(b"range", 0);
        let bound = BigUint::from(1000u32);
        for _ in 0..200 {
            assert!(rng.random_below(&bound) < bound);
        }
    }

    #[test]
    fn random_prime_has_exact_bit_length() {
        let mut rng = StreamRng::from_seed(b"prime", 0);
        for bits in [16u64, 32, 64] {
            let p = rng.random_prime(bits);
            assert_eq!(p.bits(), bits);
        }
    }

    #[test]
    fn primality_matches_known_values() {
        let mut rng = StreamRng::from_seed(b"mr", 0);
        for (n, expect) in [
            (2u64, true),
            (2003, true),
            (2001, false),
            (7919, true),
            (7917, false),
            (104729, true),
            (104730, false),
            (2147483647, true),
        ] {
            assert_eq!(is_prime(&BigUint::from(n), &mut rng), expect, "n={n}");
        }
    }
}
