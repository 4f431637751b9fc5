//! Encrypt a byte against a small Exact Cover instance and decrypt it
//! with a witness; show that a non-cover "witness" yields bottom.
//!
//!     cargo run --example we_roundtrip

use cltwe::exact_cover::{ExactCoverInstance, Witness};
use cltwe::witness_enc::{decrypt, encrypt, MessageBits};

fn main() {
    // universe {0..5}; sets 0 and 2 form the only exact cover
    let sets = vec![
        vec![0, 1, 2],
        vec![0, 3],
        vec![3, 4, 5],
        vec![2, 4],
        vec![1, 5],
    ];
    let (instance, _) = ExactCoverInstance::new(6, sets).expect("well-formed sets");
    println!("instance:\n{}", instance.to_text());

    let message = MessageBits::from_bytes(&[0b1100_0101]).unwrap();
    let ct = encrypt(&instance, &message, 12, b"roundtrip-example-seed").expect("encrypt");
    println!("ciphertext: {} set encodings, {} bit encodings", ct.c.len(), ct.d.len());

    let witness = Witness::new(vec![0, 2]).unwrap();
    assert!(instance.verify(&witness).unwrap());
    let recovered = decrypt(&ct, &witness).expect("well-formed ciphertext");
    println!("valid witness {:?} -> {:?}", witness.indices(), recovered.as_ref().map(|m| m.to_bytes().unwrap()));
    assert_eq!(recovered, Some(message));

    // sets 1 and 3 overlap nothing but miss element 1: structurally
    // rejected before any zero test runs
    let bogus = Witness::new(vec![1, 3]).unwrap();
    let rejected = decrypt(&ct, &bogus).expect("well-formed ciphertext");
    println!("invalid witness {:?} -> {rejected:?}", bogus.indices());
    assert_eq!(rejected, None);
}
