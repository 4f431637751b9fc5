//! The zeroizing attack, twice: first against a bare CRT-ACD instance
//! where the mechanism is easiest to see, then against real symmetric
//! public encodings, factoring the modulus completely.
//!
//!     cargo run --example zeroizing_attack

use cltwe::attack::{attack_clt, attack_crt_acd, CrtAcdInstance};
use cltwe::clt::instance_gen;
use cltwe::params::attack_demo_params;

fn main() {
    println!("=== CRT-ACD with auxiliary input ===");
    let mut instance = CrtAcdInstance::generate(4, 64, 16, b"zeroizing-example");
    println!("planted 4 primes of 64 bits; samples have 16-bit residues");
    let result = attack_crt_acd(&mut instance, 10);
    print!("{}", result.report());
    let mut expected = instance.planted_primes().to_vec();
    expected.sort();
    assert_eq!(result.primes, expected, "recovered exactly the planted primes");
    println!("matches the planted primes: yes\n");

    println!("=== symmetric graded encoding ===");
    let params = attack_demo_params(4, 3);
    let (state, pp, sym) = instance_gen(&params, b"zeroizing-example-clt");
    let sym = sym.expect("symmetric instances publish encodings");
    println!(
        "published: x0, pzt, {} zero encodings, {} level-0 encodings, y (kappa = {})",
        sym.zero_encodings.len(),
        sym.level0_encodings.len(),
        sym.kappa
    );
    let result = attack_clt(&pp, &sym, params.rho + params.alpha + 2);
    print!("{}", result.report());
    let mut expected = state.primes.clone();
    expected.sort();
    assert_eq!(result.primes, expected);
    println!("matches the secret state: yes");
    println!("\nmoral: never publish low-level encodings of zero alongside a zero test.");
}
