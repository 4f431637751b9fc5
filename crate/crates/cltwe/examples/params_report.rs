//! Print the derived system parameters across a range of security
//! levels and universe sizes, including the scale the headline
//! instances would need.
//!
//!     cargo run --example params_report

use cltwe::params::derive_params;

fn main() {
    println!(
        "{:>7} {:>9} {:>5} {:>6} {:>6} {:>4} {:>7} {:>14}",
        "lambda", "universe", "n_p", "eta", "nu", "deg", "enc b", "est ct size"
    );
    for (lambda, universe) in [(12u64, 1usize), (12, 4), (12, 64), (16, 16), (20, 64), (20, 248)] {
        let p = derive_params(lambda, universe, false).expect("parameters in range");
        let enc_bits = p.n_slots as u64 * p.eta;
        // rough ciphertext size: one encoding per set (assume 2 per
        // universe element) plus one per message bit (assume 8)
        let est_bits = (2 * universe + 8) as u64 * enc_bits;
        let human = if est_bits > 8 * 1024 * 1024 {
            format!("{:.1} MiB *", est_bits as f64 / (8.0 * 1024.0 * 1024.0))
        } else {
            format!("{:.1} KiB", est_bits as f64 / 8192.0)
        };
        println!(
            "{:>7} {:>9} {:>5} {:>6} {:>6} {:>4} {:>7} {:>14}",
            lambda, universe, p.n_slots, p.eta, p.nu, p.degree, enc_bits, human
        );
    }
    println!("\n* stretch scale: expect minutes of work and multi-megabyte files");
}
