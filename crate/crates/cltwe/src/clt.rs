//! Asymmetric CLT13-style graded encoding over the integers.
//!
//! Plaintexts are vectors over `Z_{g_1} x ... x Z_{g_n}`, carried as CRT
//! residues modulo secret primes `p_i`, masked with noise `r_i * g_i`
//! and divided by level denominators `z_j`. Levels are {0,1} vectors of
//! length `universe`; the top level is all-ones, and only there does the
//! published zero-test element reveal anything.

use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::format::{from_hex, parse_u64, parse_usize, to_hex, FormatError, LineReader};
use crate::params::SystemParams;
use crate::rng::StreamRng;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CltError {
    #[error("level vectors differ: {0:?} vs {1:?}")]
    LevelMismatch(Vec<u8>, Vec<u8>),
    #[error("level overflow at coordinate {0}")]
    LevelOverflow(usize),
    #[error("level components must be 0 or 1")]
    LevelNotBinary,
    #[error("level vector has length {got}, expected {expected}")]
    LevelLength { got: usize, expected: usize },
    #[error("operation requires a top-level encoding")]
    NotTopLevel,
    #[error("plaintext has {got} slots, expected {expected}")]
    SlotCount { got: usize, expected: usize },
    #[error("decode unreliable: noise overflow in slot {0}")]
    DecodeUnreliable(usize),
}

/// A plaintext: one residue per slot, component `i` reduced mod `g_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaintextVector {
    pub slots: Vec<BigUint>,
}

impl PlaintextVector {
    pub fn zero(n_slots: usize) -> Self {
        PlaintextVector { slots: vec![BigUint::zero(); n_slots] }
    }

    pub fn one(n_slots: usize) -> Self {
        PlaintextVector { slots: vec![BigUint::one(); n_slots] }
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(|s| s.is_zero())
    }

    /// Componentwise product mod the plaintext moduli.
    pub fn mul_mod(&self, other: &PlaintextVector, moduli: &[BigUint]) -> PlaintextVector {
        let slots = self
            .slots
            .iter()
            .zip(&other.slots)
            .zip(moduli)
            .map(|((a, b), g)| (a * b) % g)
            .collect();
        PlaintextVector { slots }
    }
}

/// Per-coordinate record of the level denominators an encoding carries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelVector {
    pub v: Vec<u8>,
}

impl LevelVector {
    pub fn zeros(universe: usize) -> Self {
        LevelVector { v: vec![0; universe] }
    }

    pub fn ones(universe: usize) -> Self {
        LevelVector { v: vec![1; universe] }
    }

    /// Indicator vector of a subset of the universe.
    pub fn indicator(universe: usize, members: &[usize]) -> Self {
        let mut v = vec![0u8; universe];
        for &j in members {
            assert!(j < universe, "indicator member out of range");
            v[j] = 1;
        }
        LevelVector { v }
    }

    pub fn is_binary(&self) -> bool {
        self.v.iter().all(|&c| c <= 1)
    }

    pub fn is_ones(&self) -> bool {
        self.v.iter().all(|&c| c == 1)
    }

    fn checked_add(&self, other: &LevelVector) -> Result<LevelVector, CltError> {
        let mut v = Vec::with_capacity(self.v.len());
        for (j, (&a, &b)) in self.v.iter().zip(&other.v).enumerate() {
            let sum = a + b;
            if sum > 1 {
                return Err(CltError::LevelOverflow(j));
            }
            v.push(sum);
        }
        Ok(LevelVector { v })
    }
}

/// A ciphertext component: an integer in `[0, x0)` plus its level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub elem: BigUint,
    pub level: LevelVector,
}

/// The published triple sufficient for zero-testing, plus the universe
/// size so level arithmetic can be checked without secrets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams {
    pub x0: BigUint,
    pub pzt: BigUint,
    pub nu: u64,
    pub universe: usize,
}

/// Published encodings for a symmetric instance. Only the zeroizing
/// attack demo consumes these; the witness-encryption path never
/// publishes them.
#[derive(Debug, Clone)]
pub struct SymmetricPublicEncodings {
    /// tau level-1 encodings of zero.
    pub zero_encodings: Vec<BigUint>,
    /// ell level-0 encodings of random plaintexts.
    pub level0_encodings: Vec<BigUint>,
    /// Level-1 encoding of the all-ones plaintext.
    pub one_encoding: BigUint,
    /// Scalar multilinearity (equals the universe size).
    pub kappa: usize,
}

/// Full trapdoor for one instance.
pub struct SecretState {
    pub params: SystemParams,
    pub primes: Vec<BigUint>,
    pub x0: BigUint,
    pub plaintext_moduli: Vec<BigUint>,
    pub z: Vec<BigUint>,
    pub z_inv: Vec<BigUint>,
    pub h: Vec<BigUint>,
    crt_coeffs: Vec<BigUint>,
    pub pzt: BigUint,
    /// One randomness stream per slot; stream `n_slots` is reserved for
    /// the shared material drawn during instance generation.
    rngs: Vec<Mutex<StreamRng>>,
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(&m).to_biguint().unwrap())
}

/// Map into the centered interval `(-m/2, m/2]`.
pub fn centered(x: &BigUint, m: &BigUint) -> BigInt {
    if &(x << 1) > m {
        BigInt::from(x.clone()) - BigInt::from(m.clone())
    } else {
        BigInt::from(x.clone())
    }
}

/// Instance generation: derive the full trapdoor (and, in symmetric
/// mode, the published encodings) deterministically from `seed`.
pub fn instance_gen(
    params: &SystemParams,
    seed: &[u8],
) -> (SecretState, PublicParams, Option<SymmetricPublicEncodings>) {
    assert!(!seed.is_empty(), "instance_gen: empty seed");
    let n = params.n_slots;
    let mut slot_rngs: Vec<StreamRng> = (0..n).map(|i| StreamRng::from_seed(seed, i as u64)).collect();
    let mut shared_rng = StreamRng::from_seed(seed, n as u64);

    // eta-bit ciphertext moduli, pairwise distinct.
    let mut primes: Vec<BigUint> = Vec::with_capacity(n);
    for rng in slot_rngs.iter_mut() {
        loop {
            let p = rng.random_prime(params.eta);
            if !primes.contains(&p) {
                primes.push(p);
                break;
            }
        }
    }
    let x0: BigUint = primes.iter().product();

    // alpha-bit plaintext moduli.
    let plaintext_moduli: Vec<BigUint> = slot_rngs
        .iter_mut()
        .map(|rng| rng.random_prime(params.alpha))
        .collect();

    // Level denominators. Symmetric mode shares a single z across all
    // coordinates so products of k encodings sit at "level k" in the
    // scalar sense.
    let draw_z = |rng: &mut StreamRng| loop {
        let z = rng.random_below(&x0);
        if z.gcd(&x0).is_one() {
            let inv = mod_inverse(&z, &x0).unwrap();
            return (z, inv);
        }
    };
    let (z, z_inv): (Vec<BigUint>, Vec<BigUint>) = if params.symmetric {
        let (z0, z0_inv) = draw_z(&mut shared_rng);
        (vec![z0; params.universe], vec![z0_inv; params.universe])
    } else {
        (0..params.universe).map(|_| draw_z(&mut shared_rng)).unzip()
    };

    // Zero-test coefficients in [1, 2^beta).
    let h: Vec<BigUint> = (0..n)
        .map(|_| loop {
            let c = shared_rng.random_bits(params.beta);
            if !c.is_zero() {
                break c;
            }
        })
        .collect();

    // Precomputed CRT reconstruction constants.
    let crt_coeffs: Vec<BigUint> = primes
        .iter()
        .map(|p| {
            let q = &x0 / p;
            let q_inv = mod_inverse(&(&q % p), p).unwrap();
            (&q * q_inv) % &x0
        })
        .collect();

    // pzt = sum_i h_i * ((prod_j z_j) * g_i^{-1} mod p_i) * (x0 / p_i).
    let z_prod_all = z.iter().fold(BigUint::one(), |acc, zj| (acc * zj) % &x0);
    let mut pzt = BigUint::zero();
    for i in 0..n {
        let p = &primes[i];
        let g_inv = mod_inverse(&(&plaintext_moduli[i] % p), p).unwrap();
        let t = ((&z_prod_all % p) * g_inv) % p;
        pzt = (pzt + &h[i] * t * (&x0 / p)) % &x0;
    }

    let pp = PublicParams {
        x0: x0.clone(),
        pzt: pzt.clone(),
        nu: params.nu,
        universe: params.universe,
    };

    let state = SecretState {
        params: params.clone(),
        primes,
        x0,
        plaintext_moduli,
        z,
        z_inv,
        h,
        crt_coeffs,
        pzt,
        rngs: slot_rngs.into_iter().map(Mutex::new).collect(),
    };

    let sym = params.symmetric.then(|| gen_symmetric_encodings(&state, &mut shared_rng));
    (state, pp, sym)
}

fn gen_symmetric_encodings(state: &SecretState, rng: &mut StreamRng) -> SymmetricPublicEncodings {
    let params = &state.params;
    let n = params.n_slots;
    let z_inv = state.z_inv[0].clone();

    // y: level-1 encoding of the all-ones plaintext.
    let y_nums: Vec<BigInt> = (0..n)
        .map(|i| rng.random_signed(params.rho) * BigInt::from(state.plaintext_moduli[i].clone()) + BigInt::one())
        .collect();
    let one_encoding = (state.crt_compose(&y_nums) * &z_inv) % &state.x0;

    // x_j: level-1 encodings of zero.
    let zero_encodings: Vec<BigUint> = (0..params.tau)
        .map(|_| {
            let nums: Vec<BigInt> = (0..n)
                .map(|i| rng.random_signed(params.rho) * BigInt::from(state.plaintext_moduli[i].clone()))
                .collect();
            (state.crt_compose(&nums) * &z_inv) % &state.x0
        })
        .collect();

    // x'_j: level-0 encodings of uniform plaintexts.
    let level0_encodings: Vec<BigUint> = (0..params.ell)
        .map(|_| {
            let nums: Vec<BigInt> = (0..n)
                .map(|i| {
                    let a = rng.random_below(&state.plaintext_moduli[i]);
                    rng.random_signed(params.rho) * BigInt::from(state.plaintext_moduli[i].clone())
                        + BigInt::from(a)
                })
                .collect();
            state.crt_compose(&nums)
        })
        .collect();

    SymmetricPublicEncodings {
        zero_encodings,
        level0_encodings,
        one_encoding,
        kappa: params.universe,
    }
}

impl SecretState {
    /// CRT-compose per-slot values into an integer mod x0.
    fn crt_compose(&self, slot_values: &[BigInt]) -> BigUint {
        let x0_int = BigInt::from(self.x0.clone());
        let mut acc = BigInt::zero();
        for (i, val) in slot_values.iter().enumerate() {
            let p = BigInt::from(self.primes[i].clone());
            let residue = val.mod_floor(&p);
            acc += residue * BigInt::from(self.crt_coeffs[i].clone());
        }
        acc.mod_floor(&x0_int).to_biguint().unwrap()
    }

    fn z_inv_product(&self, level: &LevelVector) -> BigUint {
        level
            .v
            .iter()
            .zip(&self.z_inv)
            .filter(|(&c, _)| c == 1)
            .fold(BigUint::one(), |acc, (_, zi)| (acc * zi) % &self.x0)
    }

    fn z_product(&self, level: &LevelVector) -> BigUint {
        level
            .v
            .iter()
            .zip(&self.z)
            .filter(|(&c, _)| c == 1)
            .fold(BigUint::one(), |acc, (_, zj)| (acc * zj) % &self.x0)
    }

    fn check_level(&self, level: &LevelVector) -> Result<(), CltError> {
        if level.v.len() != self.params.universe {
            return Err(CltError::LevelLength { got: level.v.len(), expected: self.params.universe });
        }
        if !level.is_binary() {
            return Err(CltError::LevelNotBinary);
        }
        Ok(())
    }

    /// Uniform plaintext: component `i` uniform on `[0, g_i)`.
    pub fn sample_plaintext(&self) -> PlaintextVector {
        let slots = self
            .plaintext_moduli
            .iter()
            .enumerate()
            .map(|(i, g)| self.rngs[i].lock().unwrap().random_below(g))
            .collect();
        PlaintextVector { slots }
    }

    /// Encode a plaintext at a binary level vector with fresh noise.
    pub fn encode(&self, m: &PlaintextVector, level: &LevelVector) -> Result<Encoding, CltError> {
        self.check_level(level)?;
        if m.slots.len() != self.params.n_slots {
            return Err(CltError::SlotCount { got: m.slots.len(), expected: self.params.n_slots });
        }
        let numerators: Vec<BigInt> = (0..self.params.n_slots)
            .map(|i| {
                let r = self.rngs[i].lock().unwrap().random_signed(self.params.rho);
                r * BigInt::from(self.plaintext_moduli[i].clone()) + BigInt::from(m.slots[i].clone())
            })
            .collect();
        let elem = (self.crt_compose(&numerators) * self.z_inv_product(level)) % &self.x0;
        Ok(Encoding { elem, level: level.clone() })
    }

    /// Test oracle: strip the level denominators and recover the
    /// plaintext, failing loudly if the noise heuristics are violated.
    pub fn decode_debug(&self, e: &Encoding) -> Result<PlaintextVector, CltError> {
        self.check_level(&e.level)?;
        let lifted = (&e.elem * self.z_product(&e.level)) % &self.x0;
        let budget = BigInt::one() << (self.params.max_noise_bits() + 1);
        let slots = (0..self.params.n_slots)
            .map(|i| {
                let residue = centered(&(&lifted % &self.primes[i]), &self.primes[i]);
                if residue.abs() > budget {
                    return Err(CltError::DecodeUnreliable(i));
                }
                let g = BigInt::from(self.plaintext_moduli[i].clone());
                Ok(residue.mod_floor(&g).to_biguint().unwrap())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PlaintextVector { slots })
    }

    pub fn public_params(&self) -> PublicParams {
        PublicParams {
            x0: self.x0.clone(),
            pzt: self.pzt.clone(),
            nu: self.params.nu,
            universe: self.params.universe,
        }
    }
}

pub fn add(pp: &PublicParams, e1: &Encoding, e2: &Encoding) -> Result<Encoding, CltError> {
    if e1.level != e2.level {
        return Err(CltError::LevelMismatch(e1.level.v.clone(), e2.level.v.clone()));
    }
    Ok(Encoding {
        elem: (&e1.elem + &e2.elem) % &pp.x0,
        level: e1.level.clone(),
    })
}

pub fn neg(pp: &PublicParams, e: &Encoding) -> Encoding {
    let elem = if e.elem.is_zero() {
        BigUint::zero()
    } else {
        &pp.x0 - &e.elem
    };
    Encoding { elem, level: e.level.clone() }
}

pub fn mul(pp: &PublicParams, e1: &Encoding, e2: &Encoding) -> Result<Encoding, CltError> {
    let level = e1.level.checked_add(&e2.level)?;
    Ok(Encoding {
        elem: (&e1.elem * &e2.elem) % &pp.x0,
        level,
    })
}

impl PublicParams {
    /// Zero-test for a raw top-level element (used by the symmetric
    /// attack path, where levels are tracked outside the type system).
    pub fn raw_zero_test(&self, elem: &BigUint) -> bool {
        let omega = centered(&((elem * &self.pzt) % &self.x0), &self.x0);
        let threshold = BigInt::from(&self.x0 >> self.nu);
        omega.abs() < threshold
    }
}

/// Top-level zero test: `|centered(elem * pzt mod x0)| < x0 * 2^-nu`.
pub fn is_zero(pp: &PublicParams, e: &Encoding) -> Result<bool, CltError> {
    if e.level.v.len() != pp.universe {
        return Err(CltError::LevelLength { got: e.level.v.len(), expected: pp.universe });
    }
    if !e.level.is_ones() {
        return Err(CltError::NotTopLevel);
    }
    Ok(pp.raw_zero_test(&e.elem))
}

pub const PP_MAGIC: &str = "CLTPP1";

impl PublicParams {
    pub fn to_text(&self) -> String {
        format!(
            "{}\nx0={}\npzt={}\nnu={}\nU={}\n",
            PP_MAGIC,
            to_hex(&self.x0),
            to_hex(&self.pzt),
            self.nu,
            self.universe
        )
    }

    pub fn from_text(text: &str) -> Result<PublicParams, FormatError> {
        let mut reader = LineReader::new(text);
        let pp = Self::parse_block(&mut reader)?;
        Ok(pp)
    }

    /// Parse a public-parameter block from an open reader, so the block
    /// can be embedded inside larger files.
    pub fn parse_block(reader: &mut LineReader) -> Result<PublicParams, FormatError> {
        let magic = reader.expect_line("public-parameter magic")?;
        if magic != PP_MAGIC {
            return Err(reader.error(format!("bad magic {magic:?}, expected {PP_MAGIC:?}")));
        }
        let field = |name: &str, reader: &mut LineReader| -> Result<String, FormatError> {
            let line = reader.expect_line(name)?;
            let prefix = format!("{name}=");
            line.strip_prefix(&prefix)
                .map(str::to_owned)
                .ok_or_else(|| reader.error(format!("expected `{name}=...`, got {line:?}")))
        };
        let x0 = field("x0", reader)?;
        let x0 = from_hex(&x0, reader.line(), reader.offset())?;
        let pzt = field("pzt", reader)?;
        let pzt = from_hex(&pzt, reader.line(), reader.offset())?;
        let nu_tok = field("nu", reader)?;
        let nu = parse_u64(&nu_tok, reader, "nu")?;
        let u_tok = field("U", reader)?;
        let universe = parse_usize(&u_tok, reader, "U")?;
        Ok(PublicParams { x0, pzt, nu, universe })
    }
}

pub const SYM_MAGIC: &str = "CLTSYM1";

impl SymmetricPublicEncodings {
    /// Serialize the attack target: public parameters plus the
    /// published encodings and the eigenvalue scan width in bits.
    pub fn to_text(&self, pp: &PublicParams, scan_bits: u64) -> String {
        let mut out = format!("{}\n{}scan={}\ny={}\n", SYM_MAGIC, pp.to_text(), scan_bits, to_hex(&self.one_encoding));
        out.push_str(&format!("NX {}\n", self.zero_encodings.len()));
        for (i, x) in self.zero_encodings.iter().enumerate() {
            out.push_str(&format!("X {i} {}\n", to_hex(x)));
        }
        out.push_str(&format!("NXP {}\n", self.level0_encodings.len()));
        for (i, x) in self.level0_encodings.iter().enumerate() {
            out.push_str(&format!("XP {i} {}\n", to_hex(x)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<(PublicParams, SymmetricPublicEncodings, u64), FormatError> {
        let mut reader = LineReader::new(text);
        let magic = reader.expect_line("symmetric-encodings magic")?;
        if magic != SYM_MAGIC {
            return Err(reader.error(format!("bad magic {magic:?}, expected {SYM_MAGIC:?}")));
        }
        let pp = PublicParams::parse_block(&mut reader)?;
        let scan_line = reader.expect_line("scan width")?;
        let scan_tok = scan_line
            .strip_prefix("scan=")
            .ok_or_else(|| reader.error(format!("expected `scan=...`, got {scan_line:?}")))?;
        let scan_bits = parse_u64(scan_tok, &reader, "scan")?;
        let y_line = reader.expect_line("one-encoding")?;
        let y_tok = y_line
            .strip_prefix("y=")
            .ok_or_else(|| reader.error(format!("expected `y=...`, got {y_line:?}")))?;
        let one_encoding = from_hex(y_tok, reader.line(), reader.offset())?;

        let parse_list = |tag: &str, count_tag: &str, reader: &mut LineReader| -> Result<Vec<BigUint>, FormatError> {
            let header = reader.expect_line(count_tag)?;
            let count_tok = header
                .strip_prefix(count_tag)
                .and_then(|s| s.strip_prefix(' '))
                .ok_or_else(|| reader.error(format!("expected `{count_tag} <n>`, got {header:?}")))?;
            let count = parse_usize(count_tok, reader, count_tag)?;
            let mut out = Vec::with_capacity(count);
            for i in 0..count {
                let line = reader.expect_line(tag)?;
                let mut toks = line.split_whitespace();
                let (t, idx, hex) = (toks.next(), toks.next(), toks.next());
                match (t, idx, hex, toks.next()) {
                    (Some(t), Some(idx), Some(hex), None) if t == tag => {
                        let idx = parse_usize(idx, reader, "index")?;
                        if idx != i {
                            return Err(reader.error(format!("{tag} entries out of order: expected {i}, got {idx}")));
                        }
                        out.push(from_hex(hex, reader.line(), reader.offset())?);
                    }
                    _ => return Err(reader.error(format!("expected `{tag} {i} <hex>`, got {line:?}"))),
                }
            }
            Ok(out)
        };
        let zero_encodings = parse_list("X", "NX", &mut reader)?;
        let level0_encodings = parse_list("XP", "NXP", &mut reader)?;
        let sym = SymmetricPublicEncodings { zero_encodings, level0_encodings, one_encoding, kappa: pp.universe };
        Ok((pp, sym, scan_bits))
    }
}
