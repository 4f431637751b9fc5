//! Reductions from human puzzles to Exact Cover, with maps back from
//! covers to puzzle moves.

pub mod pentomino;
pub mod sudoku;

pub use pentomino::{parse_pentomino, pentomino_to_cover, render_cover, PentominoBoard, Piece, Placement};
pub use sudoku::{parse_sudoku, sudoku_to_cover, sudoku_witness, CandidateMap, SudokuPuzzle};
