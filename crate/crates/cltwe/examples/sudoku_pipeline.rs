//! The full pipeline on a 4x4 sudoku: parse the puzzle, reduce it to
//! Exact Cover, encrypt a message against the instance, then decrypt
//! using a solved grid converted to a witness.
//!
//!     cargo run --example sudoku_pipeline

use cltwe::exact_cover::DEFAULT_NODE_LIMIT;
use cltwe::reductions::{parse_sudoku, sudoku_to_cover, sudoku_witness};
use cltwe::witness_enc::{decrypt, encrypt, MessageBits};

fn main() {
    let puzzle = parse_sudoku("sudoku 4\n1 . . .\n. . 2 .\n. 4 . .\n. . . 2\n").expect("valid puzzle");
    println!("puzzle:\n{}", puzzle.to_text());

    let (instance, cmap) = sudoku_to_cover(&puzzle);
    println!(
        "reduced to exact cover: universe {}, {} candidate sets",
        instance.universe_size(),
        instance.num_sets()
    );

    let message = MessageBits::from_bytes(&[0xde, 0xad]).unwrap();
    let ct = encrypt(&instance, &message, 12, b"sudoku-pipeline-seed").expect("encrypt");

    // route A: solve the cover instance directly
    let solved_cover = instance.solve(DEFAULT_NODE_LIMIT).unwrap().expect("puzzle is solvable");
    let via_solver = decrypt(&ct, &solved_cover).unwrap();
    println!("decrypt via Algorithm X witness: {:02x?}", via_solver.as_ref().map(|m| m.to_bytes().unwrap()));

    // route B: a human supplies the solved grid (0-based values here)
    let grid: Vec<Vec<usize>> = [
        [1usize, 2, 3, 4],
        [4, 3, 2, 1],
        [2, 4, 1, 3],
        [3, 1, 4, 2],
    ]
    .iter()
    .map(|row| row.iter().map(|v| v - 1).collect())
    .collect();
    let witness = sudoku_witness(&puzzle, &grid, &cmap).expect("grid solves the puzzle");
    let via_grid = decrypt(&ct, &witness).unwrap();
    println!("decrypt via solved grid:          {:02x?}", via_grid.as_ref().map(|m| m.to_bytes().unwrap()));

    assert_eq!(via_solver, Some(message.clone()));
    assert_eq!(via_grid, Some(message));
}
