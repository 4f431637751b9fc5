//! Witness encryption for Exact Cover over the asymmetric graded
//! encoding.
//!
//! Encryption builds a fresh encoding instance, publishes one encoding
//! `c_i` per subset at that subset's indicator level, and one top-level
//! element `d` per message bit: an encoding of the product of all slot
//! values for a 1 bit, a fresh random element for a 0 bit. A valid
//! cover multiplies the `c_i` up to the top level, where the zero-test
//! separates the two cases. The trapdoor is dropped after encryption
//! unless explicitly retained for debugging.
//!
//! All message bits share one instance and one set of `c_i`. The
//! encodings are randomized, but indistinguishability across bits of a
//! solvable instance is not something the scheme guarantees.

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::clt::{
    add, instance_gen, is_zero, mul, neg, CltError, Encoding, LevelVector, PlaintextVector,
    PublicParams, SecretState,
};
use crate::exact_cover::{CoverError, ExactCoverInstance, Witness};
use crate::format::{from_hex, parse_u64, parse_usize, to_hex, FormatError, LineReader};
use crate::params::{derive_params, ParamError};

#[derive(Debug, Error)]
pub enum WeError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Clt(#[from] CltError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("message must contain at least one bit")]
    EmptyMessage,
    #[error("message bits must be 0 or 1")]
    BadBit,
    #[error("bit count {0} is not a whole number of bytes")]
    NotByteAligned(usize),
}

/// A message as an explicit bit sequence, most significant bit first
/// within each byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageBits {
    bits: Vec<u8>,
}

impl MessageBits {
    pub fn new(bits: Vec<u8>) -> Result<Self, WeError> {
        if bits.is_empty() {
            return Err(WeError::EmptyMessage);
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(WeError::BadBit);
        }
        Ok(MessageBits { bits })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WeError> {
        let bits = bytes
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1))
            .collect();
        MessageBits::new(bits)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, WeError> {
        if self.bits.len() % 8 != 0 {
            return Err(WeError::NotByteAligned(self.bits.len()));
        }
        Ok(self
            .bits
            .chunks(8)
            .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b))
            .collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Everything the decryptor receives. Contains no secret material: the
/// trapdoor behind `pp` is destroyed (or handed back separately) at the
/// end of encryption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub pp: PublicParams,
    pub instance: ExactCoverInstance,
    /// One encoding per subset, at that subset's indicator level.
    pub c: Vec<Encoding>,
    /// One top-level element per message bit.
    pub d: Vec<Encoding>,
    pub lambda: u64,
    /// SHA-256 of the encryption seed, for audit only.
    pub seed_commitment: [u8; 32],
}

/// Encrypt, retaining the trapdoor for tests and debugging.
pub fn encrypt_with_secrets(
    instance: &ExactCoverInstance,
    message: &MessageBits,
    lambda: u64,
    seed: &[u8],
) -> Result<(Ciphertext, SecretState), WeError> {
    let universe = instance.universe_size();
    let params = derive_params(lambda, universe, false)?;
    let (state, pp, _) = instance_gen(&params, seed);

    // One uniform plaintext vector per universe element.
    let slot_values: Vec<PlaintextVector> = (0..universe).map(|_| state.sample_plaintext()).collect();
    let all_product = slot_values
        .iter()
        .fold(PlaintextVector::one(params.n_slots), |acc, a| {
            acc.mul_mod(a, &state.plaintext_moduli)
        });

    let c = instance
        .sets()
        .iter()
        .map(|set| {
            let value = set.iter().fold(PlaintextVector::one(params.n_slots), |acc, &j| {
                acc.mul_mod(&slot_values[j], &state.plaintext_moduli)
            });
            state.encode(&value, &LevelVector::indicator(universe, set))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let top = LevelVector::ones(universe);
    let d = message
        .bits()
        .iter()
        .map(|&bit| {
            if bit == 1 {
                state.encode(&all_product, &top)
            } else {
                // resample on the (negligible) collision with the true
                // product so a 0 bit is a guaranteed zero-test failure
                let decoy = loop {
                    let r = state.sample_plaintext();
                    if r != all_product {
                        break r;
                    }
                };
                state.encode(&decoy, &top)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut seed_commitment = [0u8; 32];
    seed_commitment.copy_from_slice(&Sha256::digest(seed));

    let ct = Ciphertext {
        pp,
        instance: instance.clone(),
        c,
        d,
        lambda,
        seed_commitment,
    };
    Ok((ct, state))
}

/// Encrypt a message against an Exact Cover instance. The trapdoor is
/// dropped before this returns.
pub fn encrypt(
    instance: &ExactCoverInstance,
    message: &MessageBits,
    lambda: u64,
    seed: &[u8],
) -> Result<Ciphertext, WeError> {
    let (ct, _state) = encrypt_with_secrets(instance, message, lambda, seed)?;
    Ok(ct)
}

/// Decrypt with a claimed cover. Returns `None` (bottom) when the
/// witness is not an exact cover; a witness is never turned into a bit
/// guess unless its indicator sum is exactly the all-ones vector.
pub fn decrypt(ct: &Ciphertext, witness: &Witness) -> Result<Option<MessageBits>, WeError> {
    let universe = ct.instance.universe_size();
    for &i in witness.indices() {
        if i >= ct.c.len() {
            return Err(WeError::Cover(CoverError::WitnessOutOfRange(i, ct.c.len())));
        }
    }
    // structural check: the selected indicator vectors must sum to the
    // all-ones vector, i.e. the selection is pairwise disjoint and full
    let mut coverage = vec![0u32; universe];
    for &i in witness.indices() {
        for &e in &ct.instance.sets()[i] {
            coverage[e] += 1;
        }
    }
    if coverage.iter().any(|&c| c != 1) {
        return Ok(None);
    }

    let mut iter = witness.indices().iter();
    let first = *iter.next().expect("all-ones sum implies a nonempty witness");
    let mut cover_product = ct.c[first].clone();
    for &i in iter {
        cover_product = mul(&ct.pp, &cover_product, &ct.c[i])?;
    }

    let bits = ct
        .d
        .iter()
        .map(|d| {
            let diff = add(&ct.pp, d, &neg(&ct.pp, &cover_product))?;
            Ok(u8::from(is_zero(&ct.pp, &diff)?))
        })
        .collect::<Result<Vec<_>, WeError>>()?;
    Ok(Some(MessageBits::new(bits)?))
}

pub const CT_MAGIC: &str = "CLTWE1";

impl Ciphertext {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(CT_MAGIC);
        out.push('\n');
        out.push_str(&format!("lambda={}\n", self.lambda));
        out.push_str(&self.pp.to_text());
        out.push_str(&self.instance.to_text());
        out.push_str(&format!("NC {}\n", self.c.len()));
        for (i, e) in self.c.iter().enumerate() {
            out.push_str(&format!("C {} {}\n", i, to_hex(&e.elem)));
        }
        out.push_str(&format!("ND {}\n", self.d.len()));
        for (k, e) in self.d.iter().enumerate() {
            out.push_str(&format!("D {} {}\n", k, to_hex(&e.elem)));
        }
        out.push_str(&format!("SEEDH {}\n", hex::encode(self.seed_commitment)));
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        let mut reader = LineReader::new(text);
        let magic = reader.expect_line("ciphertext magic")?;
        if magic != CT_MAGIC {
            return Err(reader.error(format!("bad magic {magic:?}, expected {CT_MAGIC:?}")));
        }
        let lambda_line = reader.expect_line("lambda")?;
        let lambda_tok = lambda_line
            .strip_prefix("lambda=")
            .ok_or_else(|| reader.error(format!("expected `lambda=...`, got {lambda_line:?}")))?;
        let lambda = parse_u64(lambda_tok, &reader, "lambda")?;
        let pp = PublicParams::parse_block(&mut reader)?;
        let instance = ExactCoverInstance::parse_block(&mut reader)?;
        if pp.universe != instance.universe_size() {
            return Err(reader.error(format!(
                "universe mismatch: public parameters say {}, instance says {}",
                pp.universe,
                instance.universe_size()
            )));
        }

        let nc_line = reader.expect_line("set-encoding count `NC`")?;
        let nc = parse_counted(nc_line, "NC", &reader)?;
        if nc != instance.num_sets() {
            return Err(reader.error(format!(
                "NC is {nc} but the instance has {} sets",
                instance.num_sets()
            )));
        }
        let mut c = Vec::with_capacity(nc);
        for i in 0..nc {
            let elem = parse_indexed_hex(&mut reader, "C", i)?;
            let level = LevelVector::indicator(pp.universe, &instance.sets()[i]);
            c.push(Encoding { elem, level });
        }

        let nd_line = reader.expect_line("bit-encoding count `ND`")?;
        let nd = parse_counted(nd_line, "ND", &reader)?;
        if nd == 0 {
            return Err(reader.error("ND must be at least 1"));
        }
        let mut d = Vec::with_capacity(nd);
        for k in 0..nd {
            let elem = parse_indexed_hex(&mut reader, "D", k)?;
            d.push(Encoding { elem, level: LevelVector::ones(pp.universe) });
        }

        let seed_line = reader.expect_line("seed commitment `SEEDH`")?;
        let seed_hex = seed_line
            .strip_prefix("SEEDH ")
            .ok_or_else(|| reader.error(format!("expected `SEEDH <hex>`, got {seed_line:?}")))?;
        let seed_bytes = hex::decode(seed_hex)
            .map_err(|e| reader.error(format!("invalid SEEDH hex: {e}")))?;
        let seed_commitment: [u8; 32] = seed_bytes
            .try_into()
            .map_err(|_| reader.error("SEEDH must be 32 bytes"))?;

        Ok(Ciphertext { pp, instance, c, d, lambda, seed_commitment })
    }
}

fn parse_counted(line: &str, tag: &str, reader: &LineReader) -> Result<usize, FormatError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != tag {
        return Err(reader.error(format!("expected `{tag} <count>`, got {line:?}")));
    }
    parse_usize(toks[1], reader, "count")
}

fn parse_indexed_hex(reader: &mut LineReader, tag: &str, expect_idx: usize) -> Result<num_bigint::BigUint, FormatError> {
    let line = reader.expect_line(&format!("`{tag} {expect_idx} <hex>`"))?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != tag {
        return Err(reader.error(format!("expected `{tag} <i> <hex>`, got {line:?}")));
    }
    let idx = parse_usize(toks[1], reader, "index")?;
    if idx != expect_idx {
        return Err(reader.error(format!("{tag} entries out of order: got {idx}, expected {expect_idx}")));
    }
    from_hex(toks[2], reader.line(), reader.offset())
}
