//! Parameter derivation for the graded encoding.
//!
//! The sizes are desk-scale demonstration choices, not a security claim:
//! the slot count grows like `lambda / 4` instead of the superlinear
//! growth a real deployment would need, so every instance produced here
//! is insecure by construction.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("security parameter must be at least 8 bits, got {0}")]
    LambdaTooSmall(u64),
    #[error("level-universe size must be at least 1, got {0}")]
    UniverseTooSmall(usize),
}

/// Sizes governing one graded-encoding instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemParams {
    /// Security parameter (bits).
    pub lambda: u64,
    /// Level-universe size: number of distinct level coordinates.
    pub universe: usize,
    /// Number of secret primes (slots).
    pub n_slots: usize,
    /// Bit length of each secret prime.
    pub eta: u64,
    /// Bit length of each plaintext modulus.
    pub alpha: u64,
    /// Bit length of per-encoding randomness.
    pub rho: u64,
    /// Bit length of the zero-test coefficients.
    pub beta: u64,
    /// Zero-test most-significant-bit gap.
    pub nu: u64,
    /// Maximum multiplicative degree: the number of encodings that may be
    /// multiplied together, plus one for the final subtraction.
    pub degree: u64,
    /// Published level-0 encodings (symmetric mode only).
    pub ell: usize,
    /// Published level-1 zero encodings (symmetric mode only).
    pub tau: usize,
    /// Whether all level coordinates share a single denominator.
    pub symmetric: bool,
}

fn log2_ceil(n: usize) -> u64 {
    (n.next_power_of_two().trailing_zeros()) as u64
}

impl SystemParams {
    /// Noise budget in bits for a single fresh encoding's numerator.
    pub fn fresh_noise_bits(&self) -> u64 {
        self.rho + self.alpha + 1
    }

    /// Noise budget in bits after a full-degree product.
    pub fn max_noise_bits(&self) -> u64 {
        self.degree * self.fresh_noise_bits()
    }

    /// Estimated size of one encoding in bits (the size of x0).
    pub fn encoding_bits(&self) -> u64 {
        self.n_slots as u64 * self.eta
    }

    fn check_invariants(&self) {
        let slack = self.max_noise_bits()
            + self.beta
            + self.nu
            + log2_ceil(self.n_slots)
            + 8;
        debug_assert!(self.eta >= slack, "eta too small for honest zero-test");
        debug_assert!(self.nu >= self.lambda);
        debug_assert!(self.degree as usize >= self.universe + 1);
    }
}

/// Derive all sizes from the security parameter and the level-universe
/// size. Symmetric mode additionally sizes the published encoding sets
/// consumed by the zeroizing attack demo.
pub fn derive_params(lambda: u64, universe: usize, symmetric: bool) -> Result<SystemParams, ParamError> {
    if lambda < 8 {
        return Err(ParamError::LambdaTooSmall(lambda));
    }
    if universe < 1 {
        return Err(ParamError::UniverseTooSmall(universe));
    }
    let n_slots = usize::max(4, lambda.div_ceil(4) as usize);
    let rho = lambda;
    let alpha = lambda;
    let beta = lambda;
    let nu = lambda + log2_ceil(n_slots) + 2;
    let degree = universe as u64 + 1;
    let eta = degree * (rho + alpha + 1) + beta + nu + log2_ceil(n_slots) + 8;
    let (ell, tau) = if symmetric { (n_slots + 1, n_slots) } else { (0, 0) };
    let params = SystemParams {
        lambda,
        universe,
        n_slots,
        eta,
        alpha,
        rho,
        beta,
        nu,
        degree,
        ell,
        tau,
        symmetric,
    };
    params.check_invariants();
    Ok(params)
}

/// Parameter profile for symmetric instances fed to the zeroizing attack.
///
/// The attack multiplies `kappa + 2` published encodings before the
/// zero-test lemma is applied, so eta is sized for that degree rather
/// than the honest-scheme degree. Noise sizes are small fixed values so
/// attack runs complete in seconds.
pub fn attack_demo_params(n_slots: usize, kappa: usize) -> SystemParams {
    assert!(n_slots >= 1 && kappa >= 1);
    let rho = 8;
    let alpha = 8;
    let beta = 8;
    let nu = 16;
    let degree = kappa as u64 + 2;
    let eta = degree * (rho + alpha + 1) + beta + nu + log2_ceil(n_slots) + 8;
    SystemParams {
        lambda: 8,
        universe: kappa,
        n_slots,
        eta,
        alpha,
        rho,
        beta,
        nu,
        degree,
        ell: n_slots + 1,
        tau: n_slots,
        symmetric: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derives_documented_example() {
        let p = derive_params(12, 4, false).unwrap();
        assert_eq!(p.n_slots, 4);
        assert_eq!(p.rho, 12);
        assert_eq!(p.alpha, 12);
        assert_eq!(p.beta, 12);
        assert_eq!(p.nu, 16);
        assert_eq!(p.degree, 5);
        assert_eq!(p.eta, 5 * 25 + 12 + 16 + 2 + 8);
        assert_eq!(p.ell, 0);
        assert_eq!(p.tau, 0);
    }

    #[test]
    fn derives_single_coordinate_universe() {
        let p = derive_params(12, 1, false).unwrap();
        assert_eq!(p.degree, 2);
        assert_eq!(p.eta, 2 * 25 + 12 + 16 + 2 + 8);
    }

    #[test]
    fn rejects_lambda_below_floor() {
        assert_eq!(derive_params(7, 1, false), Err(ParamError::LambdaTooSmall(7)));
        assert_eq!(derive_params(8, 0, false), Err(ParamError::UniverseTooSmall(0)));
    }

    #[test]
    fn symmetric_mode_sizes_published_sets() {
        let p = derive_params(12, 3, true).unwrap();
        assert_eq!(p.ell, p.n_slots + 1);
        assert_eq!(p.tau, p.n_slots);
    }

    #[test]
    fn eta_inequality_holds_across_range() {
        for lambda in [8u64, 12, 16, 20, 32] {
            for universe in [1usize, 4, 12, 64] {
                let p = derive_params(lambda, universe, false).unwrap();
                let needed = p.max_noise_bits() + p.beta + p.nu + 8;
                assert!(p.eta >= needed, "lambda={lambda} universe={universe}");
                assert!(p.nu >= lambda);
            }
        }
    }

    #[test]
    fn attack_profile_satisfies_lemma_margin() {
        let p = attack_demo_params(4, 3);
        // degree-many factors, each below 2^(rho+alpha+1), plus the
        // zero-test coefficient and slot count must fit under eta.
        assert!(p.degree * (p.rho + p.alpha + 1) + p.beta + 2 + 1 < p.eta);
    }
}
