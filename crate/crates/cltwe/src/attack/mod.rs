//! Zeroizing attack against the graded encoding: given public
//! zero-tested products, eigenvalue analysis of two quotient matrices
//! recovers every secret prime factor of the modulus in polynomial
//! time. The same machinery is exercised against a bare CRT-ACD
//! (approximate common divisor) instance, where it is easiest to see,
//! and against real symmetric public encodings.

pub mod linalg;

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::clt::{centered, PublicParams, SymmetricPublicEncodings};
use crate::rng::StreamRng;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("moduli {i} and {j} share a factor")]
    NonCoprimeModuli { i: usize, j: usize },
    #[error("residue count {residues} does not match modulus count {moduli}")]
    LengthMismatch { residues: usize, moduli: usize },
}

/// Combine residues into the centered representative mod the product
/// of the moduli. Moduli must be pairwise coprime.
pub fn crt_combine(moduli: &[BigUint], residues: &[BigInt]) -> Result<BigInt, AttackError> {
    if moduli.len() != residues.len() {
        return Err(AttackError::LengthMismatch { residues: residues.len(), moduli: moduli.len() });
    }
    for i in 0..moduli.len() {
        for j in i + 1..moduli.len() {
            if !moduli[i].gcd(&moduli[j]).is_one() {
                return Err(AttackError::NonCoprimeModuli { i, j });
            }
        }
    }
    let x0: BigUint = moduli.iter().product();
    let x0_int = BigInt::from(x0.clone());
    let mut acc = BigInt::zero();
    for (p, r) in moduli.iter().zip(residues) {
        let q = BigInt::from(&x0 / p);
        let p_int = BigInt::from(p.clone());
        let q_inv = q.extended_gcd(&p_int).x.mod_floor(&p_int);
        acc += r.mod_floor(&p_int) * q * q_inv;
    }
    Ok(centered(&acc.mod_floor(&x0_int).to_biguint().unwrap(), &x0))
}

/// The centered value of `a * p_hat mod x0`. When `a` has small CRT
/// residues r_i this equals `sum_i r_i * (x0 / p_i)` exactly, which is
/// the identity the attack rests on.
pub fn lemma_product(a: &BigInt, p_hat: &BigInt, x0: &BigUint) -> BigInt {
    let x0_int = BigInt::from(x0.clone());
    centered(&(a * p_hat).mod_floor(&x0_int).to_biguint().unwrap(), x0)
}

/// A CRT-ACD instance: n planted eta-bit primes and a sampler that
/// returns integers whose residue mod each prime is a signed eps-bit
/// value. `p_hat` is the published auxiliary element congruent to
/// `x0 / p_i` mod each `p_i`.
pub struct CrtAcdInstance {
    pub n: usize,
    pub eta: u64,
    pub eps: u64,
    pub x0: BigUint,
    pub p_hat: BigInt,
    primes: Vec<BigUint>,
    rng: StreamRng,
}

impl CrtAcdInstance {
    pub fn generate(n: usize, eta: u64, eps: u64, seed: &[u8]) -> Self {
        assert!(n >= 1);
        let log_n = usize::BITS as u64 - (n as u64 - 1).leading_zeros() as u64;
        // a product of three samples must still satisfy the exact-
        // reduction bound, or the recovered matrices are garbage
        assert!(
            3 * eps + log_n + 1 < eta,
            "parameters leave no room for degree-3 products: 3*{eps} + {log_n} + 1 >= {eta}"
        );
        let mut rng = StreamRng::from_seed(seed, 0);
        let mut primes: Vec<BigUint> = Vec::with_capacity(n);
        while primes.len() < n {
            let p = rng.random_prime(eta);
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        let x0: BigUint = primes.iter().product();
        let hat_residues: Vec<BigInt> = primes.iter().map(|p| BigInt::from(&x0 / p)).collect();
        let p_hat = crt_combine(&primes, &hat_residues).expect("primes are coprime");
        CrtAcdInstance { n, eta, eps, x0, p_hat, primes, rng }
    }

    /// Draw one sample together with its secret residue vector (the
    /// latter is only for verification; the attack never sees it).
    pub fn sample_with_residues(&mut self) -> (BigUint, Vec<BigInt>) {
        let residues: Vec<BigInt> = (0..self.n).map(|_| self.rng.random_signed(self.eps)).collect();
        let combined = crt_combine(&self.primes, &residues).expect("primes are coprime");
        let x0_int = BigInt::from(self.x0.clone());
        (combined.mod_floor(&x0_int).to_biguint().unwrap(), residues)
    }

    pub fn sample(&mut self) -> BigUint {
        self.sample_with_residues().0
    }

    /// The planted primes, for checking an attack's output.
    pub fn planted_primes(&self) -> &[BigUint] {
        &self.primes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackStatus {
    /// Every prime factor recovered; their product is x0.
    Success,
    /// Each trial produced a singular quotient matrix.
    SingularRetryExhausted,
    /// Matrices were invertible but no trial yielded n distinct small
    /// eigenvalues with consistent factors.
    NoDistinctEigenvalues,
}

#[derive(Debug, Clone)]
pub struct AttackResult {
    pub primes: Vec<BigUint>,
    pub trials_used: u32,
    pub status: AttackStatus,
}

impl AttackResult {
    pub fn succeeded(&self) -> bool {
        self.status == AttackStatus::Success
    }

    /// Human-readable report: one hex prime per line plus trial count.
    pub fn report(&self) -> String {
        let mut out = String::new();
        match self.status {
            AttackStatus::Success => {
                let _ = writeln!(out, "recovered {} prime factor(s):", self.primes.len());
                for (i, p) in self.primes.iter().enumerate() {
                    let _ = writeln!(out, "  p[{i}] = {}", crate::format::to_hex(p));
                }
            }
            AttackStatus::SingularRetryExhausted => {
                let _ = writeln!(out, "attack failed: quotient matrix singular in every trial");
            }
            AttackStatus::NoDistinctEigenvalues => {
                let _ = writeln!(out, "attack failed: no trial gave a full set of distinct eigenvalues");
            }
        }
        let _ = writeln!(out, "trials used: {}", self.trials_used);
        out
    }
}

/// Validate a candidate factor set: pairwise distinct, nontrivial, and
/// multiplying back to x0.
fn confirm_factors(mut factors: Vec<BigUint>, x0: &BigUint) -> Option<Vec<BigUint>> {
    factors.sort();
    if factors.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    if factors.iter().any(|f| f.is_one()) {
        return None;
    }
    let product: BigUint = factors.iter().product();
    (&product == x0).then_some(factors)
}

/// Shared eigenvalue step: given the numerator matrix W (entries
/// include one extra factor of the pivot element) and denominator
/// matrix W', recover the pivot's residues as the eigenvalues of
/// W * W'^-1 and read off factors as gcd(pivot - eigenvalue, x0).
fn factors_from_matrices(
    w: &[Vec<BigInt>],
    w_prime: &[Vec<BigInt>],
    pivot: &BigInt,
    x0: &BigUint,
    scan_bits: u64,
) -> Result<Option<Vec<BigUint>>, Singular> {
    let n = w.len();
    let w_prime_rat = linalg::from_integers(w_prime);
    let inv = linalg::invert(&w_prime_rat).ok_or(Singular)?;
    let v = linalg::multiply(&linalg::from_integers(w), &inv);
    let Some(coeffs) = linalg::charpoly_integer(&v) else {
        // non-integer characteristic polynomial means the noise bound
        // was violated somewhere; treat like a bad eigenvalue draw
        return Ok(None);
    };
    let roots = linalg::integer_roots_in_range(&coeffs, scan_bits);
    if roots.len() != n {
        return Ok(None);
    }
    let x0_int = BigInt::from(x0.clone());
    let factors: Vec<BigUint> = roots
        .iter()
        .map(|root| (pivot - root).gcd(&x0_int).to_biguint().unwrap())
        .collect();
    Ok(confirm_factors(factors, x0))
}

struct Singular;

/// Recover the planted primes of a CRT-ACD instance from 2n+1 fresh
/// samples per trial.
pub fn attack_crt_acd(instance: &mut CrtAcdInstance, max_retries: u32) -> AttackResult {
    let n = instance.n;
    let x0 = instance.x0.clone();
    let p_hat_mod = {
        let x0_int = BigInt::from(x0.clone());
        instance.p_hat.mod_floor(&x0_int).to_biguint().unwrap()
    };
    let entry = |prod: &BigUint| -> BigInt { centered(&((prod * &p_hat_mod) % &x0), &x0) };

    let mut saw_invertible = false;
    for trial in 1..=max_retries {
        let a: Vec<BigUint> = (0..n).map(|_| instance.sample()).collect();
        let b = instance.sample();
        let c: Vec<BigUint> = (0..n).map(|_| instance.sample()).collect();

        let w: Vec<Vec<BigInt>> = a
            .iter()
            .map(|ai| c.iter().map(|cj| entry(&((ai * &b) % &x0 * cj % &x0))).collect())
            .collect();
        let w_prime: Vec<Vec<BigInt>> =
            a.iter().map(|ai| c.iter().map(|cj| entry(&(ai * cj % &x0))).collect()).collect();

        let pivot = BigInt::from(b.clone());
        match factors_from_matrices(&w, &w_prime, &pivot, &x0, instance.eps) {
            Err(Singular) => continue,
            Ok(None) => {
                saw_invertible = true;
                continue;
            }
            Ok(Some(primes)) => {
                return AttackResult { primes, trials_used: trial, status: AttackStatus::Success };
            }
        }
    }
    let status = if saw_invertible {
        AttackStatus::NoDistinctEigenvalues
    } else {
        AttackStatus::SingularRetryExhausted
    };
    AttackResult { primes: Vec::new(), trials_used: max_retries, status }
}

/// Run the attack against real symmetric public encodings. `scan_bits`
/// bounds the magnitude of a level-0 residue (noise-bits + plaintext
/// modulus bits + 2 covers it). Each trial uses a different subset of
/// the published level-0 encodings as matrix rows.
pub fn attack_clt(
    pp: &PublicParams,
    publics: &SymmetricPublicEncodings,
    scan_bits: u64,
) -> AttackResult {
    let n = publics.zero_encodings.len();
    let ell = publics.level0_encodings.len();
    assert!(ell > n, "need more level-0 encodings than primes");
    assert!(publics.kappa >= 1);
    let x0 = &pp.x0;
    let y_pow = publics.one_encoding.modpow(&BigUint::from(publics.kappa as u64 - 1), x0);
    let entry = |xp: &BigUint, extra: Option<&BigUint>, xk: &BigUint| -> BigInt {
        let mut prod = xp * xk % x0;
        if let Some(e) = extra {
            prod = prod * e % x0;
        }
        prod = prod * &y_pow % x0 * &pp.pzt % x0;
        centered(&prod, x0)
    };

    let max_trials = (ell - n + 1) as u32;
    let mut saw_invertible = false;
    for trial in 0..max_trials {
        // rows: a window of n level-0 encodings; pivot: the first row
        let rows = &publics.level0_encodings[trial as usize..trial as usize + n];
        let pivot_enc = &rows[0];
        let w: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|xp| publics.zero_encodings.iter().map(|xk| entry(xp, Some(pivot_enc), xk)).collect())
            .collect();
        let w_prime: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|xp| publics.zero_encodings.iter().map(|xk| entry(xp, None, xk)).collect())
            .collect();

        let pivot = BigInt::from(pivot_enc.clone());
        match factors_from_matrices(&w, &w_prime, &pivot, x0, scan_bits) {
            Err(Singular) => continue,
            Ok(None) => {
                saw_invertible = true;
                continue;
            }
            Ok(Some(primes)) => {
                return AttackResult { primes, trials_used: trial + 1, status: AttackStatus::Success };
            }
        }
    }
    let status = if saw_invertible {
        AttackStatus::NoDistinctEigenvalues
    } else {
        AttackStatus::SingularRetryExhausted
    };
    AttackResult { primes: Vec::new(), trials_used: max_trials, status }
}
