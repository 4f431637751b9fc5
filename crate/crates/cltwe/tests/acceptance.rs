//! End-to-end acceptance suite. Each test prints a single PASS/FAIL
//! line for its criterion (visible with `--nocapture` or on failure)
//! and then asserts, so the suite is both a report and a gate.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use cltwe::attack::{attack_clt, attack_crt_acd, crt_combine, lemma_product, CrtAcdInstance};
use cltwe::clt::{add, centered, instance_gen, is_zero, mul, Encoding, LevelVector, PlaintextVector};
use cltwe::exact_cover::{ExactCoverInstance, Witness, DEFAULT_NODE_LIMIT};
use cltwe::params::{attack_demo_params, derive_params};
use cltwe::reductions::{parse_pentomino, pentomino_to_cover, sudoku_to_cover, SudokuPuzzle};
use cltwe::rng::StreamRng;
use cltwe::witness_enc::{decrypt, encrypt, Ciphertext, MessageBits};

fn verdict(criterion: u32, what: &str, ok: bool) {
    println!("criterion {criterion}: {} - {what}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {what}");
}

fn rng_usize(rng: &mut StreamRng, bound: usize) -> usize {
    use num_traits::ToPrimitive;
    rng.random_below(&BigUint::from(bound as u64)).to_u64().unwrap().to_usize().unwrap()
}

/// Shuffle 0..universe and chop it into random blocks: a planted cover.
fn random_partition(rng: &mut StreamRng, universe: usize) -> Vec<Vec<usize>> {
    let mut elements: Vec<usize> = (0..universe).collect();
    for i in (1..elements.len()).rev() {
        elements.swap(i, rng_usize(rng, i + 1));
    }
    let mut blocks = Vec::new();
    let mut rest = &elements[..];
    while !rest.is_empty() {
        let take = (1 + rng_usize(rng, 3)).min(rest.len());
        blocks.push(rest[..take].to_vec());
        rest = &rest[take..];
    }
    blocks
}

#[test]
fn criterion_1_graded_encoding_oracle_suite() {
    let mut checked_ops = 0usize;
    let mut failures = 0usize;
    let mut universe = 2usize;
    let mut round = 0u64;
    while checked_ops < 500 {
        let params = derive_params(12, universe, false).unwrap();
        let seed = format!("acceptance-c1-{round}");
        let (state, pp, _) = instance_gen(&params, seed.as_bytes());
        let mut rng = StreamRng::from_seed(seed.as_bytes(), 999);

        // additions at a random level
        let members: Vec<usize> = (0..universe).filter(|_| rng_usize(&mut rng, 2) == 1).collect();
        let level = LevelVector::indicator(universe, &members);
        let m1 = state.sample_plaintext();
        let m2 = state.sample_plaintext();
        let sum = add(&pp, &state.encode(&m1, &level).unwrap(), &state.encode(&m2, &level).unwrap()).unwrap();
        let expect: Vec<BigUint> = m1
            .slots
            .iter()
            .zip(&m2.slots)
            .zip(&state.plaintext_moduli)
            .map(|((a, b), g)| (a + b) % g)
            .collect();
        if state.decode_debug(&sum).unwrap().slots != expect {
            failures += 1;
        }
        checked_ops += 1;

        // a full multiplication chain up to the top level
        let blocks = random_partition(&mut rng, universe);
        let mut acc: Option<Encoding> = None;
        let mut expect = PlaintextVector::one(params.n_slots);
        for block in &blocks {
            let m = state.sample_plaintext();
            let e = state.encode(&m, &LevelVector::indicator(universe, block)).unwrap();
            expect = expect.mul_mod(&m, &state.plaintext_moduli);
            acc = Some(match acc {
                None => e,
                Some(prev) => {
                    checked_ops += 1;
                    mul(&pp, &prev, &e).unwrap()
                }
            });
        }
        let product = acc.unwrap();
        if state.decode_debug(&product).unwrap() != expect {
            failures += 1;
        }

        universe = if universe == 6 { 2 } else { universe + 1 };
        round += 1;
    }

    let params = derive_params(12, 4, false).unwrap();
    let (state, pp, _) = instance_gen(&params, b"acceptance-c1-zeros");
    let top = LevelVector::ones(4);
    let mut zero_failures = 0usize;
    for _ in 0..500 {
        let e = state.encode(&PlaintextVector::zero(params.n_slots), &top).unwrap();
        if !is_zero(&pp, &e).unwrap() {
            zero_failures += 1;
        }
    }
    let mut rng = StreamRng::from_seed(b"acceptance-c1-random", 0);
    let mut false_zeros = 0usize;
    for _ in 0..1000 {
        let e = Encoding { elem: rng.random_below(&pp.x0), level: top.clone() };
        if is_zero(&pp, &e).unwrap() {
            false_zeros += 1;
        }
    }
    verdict(
        1,
        "graded-encoding oracle suite (500 ops decode, 500 honest zeros, 0/1000 random zeros)",
        failures == 0 && zero_failures == 0 && false_zeros == 0,
    );
}

/// A solvable instance with planted witness, plus overlapping decoys.
fn random_solvable_instance(rng: &mut StreamRng, universe: usize, max_sets: usize) -> (ExactCoverInstance, Witness) {
    let planted = random_partition(rng, universe);
    let planted_count = planted.len();
    let mut sets = planted;
    while sets.len() < max_sets {
        let size = 1 + rng_usize(rng, 4);
        let mut set: Vec<usize> = Vec::new();
        while set.len() < size {
            let e = rng_usize(rng, universe);
            if !set.contains(&e) {
                set.push(e);
            }
        }
        sets.push(set);
    }
    let (instance, dropped) = ExactCoverInstance::new(universe, sets).unwrap();
    assert_eq!(dropped, 0);
    let witness = Witness::new((0..planted_count).collect()).unwrap();
    assert!(instance.verify(&witness).unwrap());
    (instance, witness)
}

#[test]
fn criterion_2_witness_encryption_round_trip() {
    let mut ok = true;
    for trial in 0..100u64 {
        let seed = format!("acceptance-c2-{trial}");
        let mut rng = StreamRng::from_seed(seed.as_bytes(), 0);
        let universe = 4 + (trial as usize % 9); // 4..=12
        let (instance, witness) = random_solvable_instance(&mut rng, universe, 20.min(universe + 8));
        let byte = [trial as u8 ^ 0x5a];
        let message = MessageBits::from_bytes(&byte).unwrap();
        let ct = encrypt(&instance, &message, 12, seed.as_bytes()).unwrap();
        match decrypt(&ct, &witness).unwrap() {
            Some(recovered) if recovered == message => {}
            _ => {
                ok = false;
                break;
            }
        }
    }
    verdict(2, "witness-encryption round trip, 100/100 seeded trials with 8-bit messages", ok);
}

#[test]
fn criterion_3_structural_rejection() {
    let mut rng = StreamRng::from_seed(b"acceptance-c3", 0);
    let (instance, witness) = random_solvable_instance(&mut rng, 9, 16);
    let message = MessageBits::from_bytes(&[0b1011_0010]).unwrap();
    let ct = encrypt(&instance, &message, 12, b"acceptance-c3-seed").unwrap();

    let mut rejected = 0usize;
    let mut produced = 0usize;
    while rejected + produced < 100 {
        let candidate = match (rejected + produced) % 3 {
            // incomplete: drop one selected set
            0 => {
                let mut idx = witness.indices().to_vec();
                idx.remove(rng_usize(&mut rng, idx.len()));
                Witness::new(idx).unwrap()
            }
            // overlapping: add a random extra set
            1 => {
                let mut idx = witness.indices().to_vec();
                let extra = rng_usize(&mut rng, instance.num_sets());
                if idx.contains(&extra) {
                    continue;
                }
                idx.push(extra);
                Witness::new(idx).unwrap()
            }
            // empty
            _ => Witness::new(Vec::new()).unwrap(),
        };
        if instance.verify(&candidate).unwrap() {
            continue; // perturbation accidentally found another cover
        }
        match decrypt(&ct, &candidate).unwrap() {
            None => rejected += 1,
            Some(_) => produced += 1,
        }
    }
    verdict(3, "100 invalid witnesses all map to bottom, never a bit value", produced == 0);
}

#[test]
fn criterion_4_sudoku_reduction_identities() {
    let blank9 = SudokuPuzzle::blank(9).unwrap();
    let (cover9, _) = sudoku_to_cover(&blank9);
    let blank9_ok = cover9.universe_size() == 324 && cover9.num_sets() == 729;

    // a 19-clue puzzle sampled from a cyclically shifted solved grid
    let solved = |r: usize, c: usize| (r * 3 + r / 3 + c) % 9;
    let mut grid = vec![None; 81];
    let clue_cells = [
        (0, 0), (0, 4), (1, 2), (1, 7), (2, 5), (3, 1), (3, 6), (4, 3), (4, 8), (5, 0),
        (5, 5), (6, 2), (6, 7), (7, 4), (8, 1), (8, 6), (2, 8), (7, 0), (6, 4),
    ];
    for &(r, c) in &clue_cells {
        grid[r * 9 + c] = Some(solved(r, c));
    }
    let puzzle19 = SudokuPuzzle::new(9, grid).unwrap();
    assert_eq!(puzzle19.clue_count(), 19);
    let (cover19, _) = sudoku_to_cover(&puzzle19);
    let clue19_ok = cover19.universe_size() == 248;

    let blank4 = SudokuPuzzle::blank(4).unwrap();
    let (cover4, _) = sudoku_to_cover(&blank4);
    let shape4_ok = cover4.universe_size() == 64 && cover4.num_sets() == 64;
    let witness4 = cover4.solve(DEFAULT_NODE_LIMIT).unwrap().expect("blank 4x4 is solvable");
    let solve4_ok = witness4.len() == 16 && cover4.verify(&witness4).unwrap();

    let message = MessageBits::from_bytes(&[0x4d]).unwrap();
    let ct = encrypt(&cover4, &message, 12, b"acceptance-c4").unwrap();
    let e2e_ok = decrypt(&ct, &witness4).unwrap() == Some(message);

    verdict(
        4,
        "sudoku identities (9x9: 729 sets/324 elements; 19 clues: universe 248; 4x4 end-to-end)",
        blank9_ok && clue19_ok && shape4_ok && solve4_ok && e2e_ok,
    );
}

#[test]
fn criterion_5_pentomino_reduction() {
    // all sets have 6 elements, across several boards
    let boards = [
        "pentomino 3 5\n#####\n#####\n#####\npieces U:2 X:1\n",
        "pentomino 2 5\n#####\n#####\npieces O:2\n",
        "pentomino 4 5\n#####\n#####\n#####\n#####\npieces P:2 T:1 V:1\n",
    ];
    let six_ok = boards.iter().all(|text| {
        let board = parse_pentomino(text).unwrap();
        let (instance, _) = pentomino_to_cover(&board);
        instance.num_sets() > 0 && instance.sets().iter().all(|s| s.len() == 6)
    });

    let strip = parse_pentomino("pentomino 1 5\n#####\npieces O:1\n").unwrap();
    let (strip_cover, _) = pentomino_to_cover(&strip);
    let strip_witness = strip_cover.solve(DEFAULT_NODE_LIMIT).unwrap();
    let strip_ok = strip_cover.num_sets() == 1
        && strip_witness.as_ref().map(|w| strip_cover.verify(w).unwrap()) == Some(true);

    // 6 coverable cells cannot be tiled by one 5-cell piece
    let infeasible = parse_pentomino("pentomino 1 6\n######\npieces O:1\n").unwrap();
    assert!(!infeasible.is_count_feasible());
    let (bad_cover, _) = pentomino_to_cover(&infeasible);
    let infeasible_ok = bad_cover.solve(DEFAULT_NODE_LIMIT).unwrap().is_none();

    verdict(5, "pentomino reduction (6-element sets, 1x5 cover, infeasible board refuted)", six_ok && strip_ok && infeasible_ok);
}

#[test]
fn criterion_6_zeroizing_attack() {
    let mut successes = 0usize;
    for seed in 0..20u64 {
        let tag = format!("acceptance-c6-{seed}");
        let mut instance = CrtAcdInstance::generate(4, 64, 16, tag.as_bytes());
        let mut expected = instance.planted_primes().to_vec();
        expected.sort();
        let result = attack_crt_acd(&mut instance, 3);
        if result.succeeded() && result.primes == expected {
            successes += 1;
        }
    }

    let params = attack_demo_params(4, 3);
    let (state, pp, sym) = instance_gen(&params, b"acceptance-c6-clt");
    let sym = sym.unwrap();
    let result = attack_clt(&pp, &sym, params.rho + params.alpha + 2);
    let mut expected = state.primes.clone();
    expected.sort();
    let product: BigUint = result.primes.iter().product();
    let clt_ok = result.succeeded() && result.primes == expected && product == pp.x0;

    verdict(
        6,
        "zeroizing attack (>= 18/20 CRT-ACD seeds within 3 retries; full CLT factorization)",
        successes >= 18 && clt_ok,
    );
}

#[test]
fn criterion_7_small_residue_product_identity() {
    let mut instance = CrtAcdInstance::generate(3, 32, 6, b"acceptance-c7");
    let hats: Vec<BigInt> = instance.planted_primes().iter().map(|p| BigInt::from(&instance.x0 / p)).collect();
    let mut violations = 0usize;
    for _ in 0..1000 {
        let (sample, residues) = instance.sample_with_residues();
        let expected: BigInt = residues.iter().zip(&hats).map(|(r, h)| r * h).sum();
        let a = centered(&sample, &instance.x0);
        if lemma_product(&a, &instance.p_hat, &instance.x0) != expected {
            violations += 1;
        }
    }

    // boundary: moduli (3,5), residues (1,1) have weighted sum 8 > 15/2,
    // so the centered product cannot equal it
    let moduli = [BigUint::from(3u32), BigUint::from(5u32)];
    let x0 = BigUint::from(15u32);
    let p_hat = crt_combine(&moduli, &[BigInt::from(5), BigInt::from(3)]).unwrap();
    let a = crt_combine(&moduli, &[BigInt::one(), BigInt::one()]).unwrap();
    let boundary_breaks = lemma_product(&a, &p_hat, &x0) != BigInt::from(8);

    verdict(7, "residue-product identity (0/1000 violations in range; boundary case breaks)", violations == 0 && boundary_breaks);
}

#[test]
fn criterion_8_serialization_round_trips() {
    let mut rng = StreamRng::from_seed(b"acceptance-c8", 0);
    let (instance, witness) = random_solvable_instance(&mut rng, 6, 9);
    let cover_text = instance.to_text();
    let cover_ok = ExactCoverInstance::from_text(&cover_text).unwrap() == instance
        && ExactCoverInstance::from_text(&cover_text).unwrap().to_text() == cover_text;

    let message = MessageBits::from_bytes(&[0xc8]).unwrap();
    let ct = encrypt(&instance, &message, 12, b"acceptance-c8-seed").unwrap();
    let ct_text = ct.to_text();
    let parsed = Ciphertext::from_text(&ct_text).unwrap();
    let ct_ok = parsed == ct
        && parsed.to_text() == ct_text
        && decrypt(&parsed, &witness).unwrap() == Some(message);

    // corruption by truncation. Every ciphertext prefix must either be
    // a format error or parse to the identical ciphertext (dropping only
    // the final newline); nothing may panic or change the plaintext.
    let mut truncation_ok = true;
    for cut in 0..ct_text.len() {
        if let Ok(parsed) = Ciphertext::from_text(&ct_text[..cut]) {
            if parsed != ct {
                truncation_ok = false;
            }
        }
    }
    // cover lines are variable-length, so truncation inside the last
    // line is undetectable by design; check every line boundary instead
    let mut cut = 0usize;
    for line in cover_text.split_inclusive('\n') {
        if cut > 0 && cut < cover_text.len() && ExactCoverInstance::from_text(&cover_text[..cut]).is_ok() {
            truncation_ok = false;
        }
        cut += line.len();
    }

    verdict(8, "ciphertext and cover files round-trip bit-exactly; truncations are format errors", cover_ok && ct_ok && truncation_ok);
}
