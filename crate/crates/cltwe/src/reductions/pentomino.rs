//! Pentomino tiling reduced to Exact Cover.
//!
//! The universe is one element per coverable cell plus one element per
//! piece instance, so every generated set has exactly six elements:
//! five cell labels and the piece-instance label. Orientations include
//! rotations and reflections, deduplicated per piece.

use thiserror::Error;

use crate::exact_cover::{ExactCoverInstance, Witness};
use crate::format::{parse_usize, FormatError, LineReader};

/// The twelve pentominoes under the Conway labeling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Piece {
    O,
    P,
    Q,
    R,
    S,
    T,
    U,
    V,
    W,
    X,
    Y,
    Z,
}

pub const ALL_PIECES: [Piece; 12] = [
    Piece::O,
    Piece::P,
    Piece::Q,
    Piece::R,
    Piece::S,
    Piece::T,
    Piece::U,
    Piece::V,
    Piece::W,
    Piece::X,
    Piece::Y,
    Piece::Z,
];

impl Piece {
    pub fn letter(self) -> char {
        match self {
            Piece::O => 'O',
            Piece::P => 'P',
            Piece::Q => 'Q',
            Piece::R => 'R',
            Piece::S => 'S',
            Piece::T => 'T',
            Piece::U => 'U',
            Piece::V => 'V',
            Piece::W => 'W',
            Piece::X => 'X',
            Piece::Y => 'Y',
            Piece::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Piece> {
        ALL_PIECES.iter().copied().find(|p| p.letter() == c)
    }

    fn index(self) -> usize {
        ALL_PIECES.iter().position(|&p| p == self).unwrap()
    }

    /// Base shape as (row, col) offsets.
    fn base_cells(self) -> [(i32, i32); 5] {
        match self {
            // O is the straight pentomino
            Piece::O => [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)],
            Piece::P => [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)],
            // Q is the L-shape
            Piece::Q => [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1)],
            // R is the F-shape
            Piece::R => [(0, 1), (0, 2), (1, 0), (1, 1), (2, 1)],
            // S is the N-shape
            Piece::S => [(0, 1), (1, 1), (2, 0), (2, 1), (3, 0)],
            Piece::T => [(0, 0), (0, 1), (0, 2), (1, 1), (2, 1)],
            Piece::U => [(0, 0), (0, 2), (1, 0), (1, 1), (1, 2)],
            Piece::V => [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)],
            Piece::W => [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)],
            Piece::X => [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)],
            Piece::Y => [(0, 1), (1, 0), (1, 1), (2, 1), (3, 1)],
            Piece::Z => [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)],
        }
    }

    /// All distinct orientations under rotation and reflection, each
    /// normalized to nonnegative offsets with sorted cells.
    pub fn orientations(self) -> Vec<Vec<(usize, usize)>> {
        let mut seen: Vec<Vec<(i32, i32)>> = Vec::new();
        let mut cells: Vec<(i32, i32)> = self.base_cells().to_vec();
        for flip in 0..2 {
            if flip == 1 {
                cells = cells.iter().map(|&(r, c)| (r, -c)).collect();
            }
            for _ in 0..4 {
                cells = cells.iter().map(|&(r, c)| (c, -r)).collect();
                let normalized = normalize(&cells);
                if !seen.contains(&normalized) {
                    seen.push(normalized);
                }
            }
        }
        seen.into_iter()
            .map(|cells| cells.into_iter().map(|(r, c)| (r as usize, c as usize)).collect())
            .collect()
    }
}

fn normalize(cells: &[(i32, i32)]) -> Vec<(i32, i32)> {
    let min_r = cells.iter().map(|&(r, _)| r).min().unwrap();
    let min_c = cells.iter().map(|&(_, c)| c).min().unwrap();
    let mut out: Vec<(i32, i32)> = cells.iter().map(|&(r, c)| (r - min_r, c - min_c)).collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PentominoError {
    #[error("unknown piece letter {0:?}")]
    UnknownPiece(char),
}

/// A board of coverable cells plus the multiset of available pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentominoBoard {
    rows: usize,
    cols: usize,
    /// true = must be covered.
    cells: Vec<bool>,
    /// Count per piece, indexed in Conway label order.
    pieces: [usize; 12],
}

impl PentominoBoard {
    pub fn new(rows: usize, cols: usize, cells: Vec<bool>, pieces: [usize; 12]) -> Self {
        assert_eq!(cells.len(), rows * cols);
        PentominoBoard { rows, cols, cells, pieces }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, r: usize, c: usize) -> bool {
        self.cells[r * self.cols + c]
    }

    pub fn coverable_cells(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn piece_count(&self, piece: Piece) -> usize {
        self.pieces[piece.index()]
    }

    pub fn total_pieces(&self) -> usize {
        self.pieces.iter().sum()
    }

    /// Counting feasibility: a cover needs exactly 5 cells per piece.
    /// Infeasible boards still reduce; their instances simply have no
    /// cover.
    pub fn is_count_feasible(&self) -> bool {
        self.coverable_cells() == 5 * self.total_pieces()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("pentomino {} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(if self.cell(r, c) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out.push_str("pieces");
        for piece in ALL_PIECES {
            let count = self.piece_count(piece);
            if count > 0 {
                out.push_str(&format!(" {}:{}", piece.letter(), count));
            }
        }
        out.push('\n');
        out
    }
}

/// Pentomino file: `pentomino rows cols`, the grid as `#` (cover) and
/// `.` (hole), then `pieces O:<k> P:<k> ...` with only nonzero counts.
pub fn parse_pentomino(text: &str) -> Result<PentominoBoard, FormatError> {
    let mut reader = LineReader::new(text);
    let header = reader.expect_line("`pentomino rows cols` header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "pentomino" {
        return Err(reader.error(format!("expected `pentomino rows cols`, got {header:?}")));
    }
    let rows = parse_usize(toks[1], &reader, "row count")?;
    let cols = parse_usize(toks[2], &reader, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(reader.error("board dimensions must be positive"));
    }
    let mut cells = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = reader.expect_line_verbatim(&format!("grid row {r}"))?;
        if line.len() != cols {
            return Err(reader.error(format!("row {r} has {} cells, expected {cols}", line.len())));
        }
        for ch in line.chars() {
            match ch {
                '#' => cells.push(true),
                '.' => cells.push(false),
                other => return Err(reader.error(format!("unexpected grid character {other:?}"))),
            }
        }
    }
    let pieces_line = reader.expect_line("`pieces ...` line")?;
    let mut toks = pieces_line.split_whitespace();
    if toks.next() != Some("pieces") {
        return Err(reader.error(format!("expected `pieces ...`, got {pieces_line:?}")));
    }
    let mut pieces = [0usize; 12];
    for tok in toks {
        let (letter, count) = tok
            .split_once(':')
            .ok_or_else(|| reader.error(format!("expected `<letter>:<count>`, got {tok:?}")))?;
        let mut chars = letter.chars();
        let (Some(ch), None) = (chars.next(), chars.next()) else {
            return Err(reader.error(format!("piece label must be a single letter, got {letter:?}")));
        };
        let piece = Piece::from_letter(ch)
            .ok_or_else(|| reader.error(PentominoError::UnknownPiece(ch).to_string()))?;
        let count = parse_usize(count, &reader, "piece count")?;
        pieces[piece.index()] += count;
    }
    Ok(PentominoBoard::new(rows, cols, cells, pieces))
}

/// One set of the instance: which piece instance covers which cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub piece: Piece,
    /// Which copy of the piece (0-based across all piece instances).
    pub instance_label: usize,
    pub cells: Vec<(usize, usize)>,
}

/// Reduce a board to Exact Cover: universe = coverable cells (row-major
/// labels) followed by piece-instance labels; one set per legal
/// placement of each piece instance.
pub fn pentomino_to_cover(board: &PentominoBoard) -> (ExactCoverInstance, Vec<Placement>) {
    let mut cell_label = vec![None; board.rows * board.cols];
    let mut next = 0usize;
    for r in 0..board.rows {
        for c in 0..board.cols {
            if board.cell(r, c) {
                cell_label[r * board.cols + c] = Some(next);
                next += 1;
            }
        }
    }
    let num_cells = next;

    let mut sets = Vec::new();
    let mut placements = Vec::new();
    let mut instance_ctr = 0usize;
    for piece in ALL_PIECES {
        // placements shared by all copies of this piece
        let mut template: Vec<Vec<(usize, usize)>> = Vec::new();
        for orientation in piece.orientations() {
            let max_r = orientation.iter().map(|&(r, _)| r).max().unwrap();
            let max_c = orientation.iter().map(|&(_, c)| c).max().unwrap();
            if max_r >= board.rows || max_c >= board.cols {
                continue;
            }
            for base_r in 0..board.rows - max_r {
                for base_c in 0..board.cols - max_c {
                    let spots: Vec<(usize, usize)> =
                        orientation.iter().map(|&(r, c)| (base_r + r, base_c + c)).collect();
                    if spots.iter().all(|&(r, c)| board.cell(r, c)) {
                        template.push(spots);
                    }
                }
            }
        }
        for _copy in 0..board.piece_count(piece) {
            for spots in &template {
                let mut set: Vec<usize> = spots
                    .iter()
                    .map(|&(r, c)| cell_label[r * board.cols + c].unwrap())
                    .collect();
                set.push(num_cells + instance_ctr);
                sets.push(set);
                placements.push(Placement {
                    piece,
                    instance_label: instance_ctr,
                    cells: spots.clone(),
                });
            }
            instance_ctr += 1;
        }
    }

    let universe = num_cells + board.total_pieces();
    let (instance, dropped) = ExactCoverInstance::new(universe, sets).expect("placement sets are valid");
    debug_assert_eq!(dropped, 0);
    (instance, placements)
}

/// Render a cover as piece letters on the board grid.
pub fn render_cover(board: &PentominoBoard, placements: &[Placement], witness: &Witness) -> String {
    let mut grid = vec!['.'; board.rows * board.cols];
    for &i in witness.indices() {
        let placement = &placements[i];
        for &(r, c) in &placement.cells {
            grid[r * board.cols + c] = placement.piece.letter();
        }
    }
    let mut out = String::new();
    for r in 0..board.rows {
        for c in 0..board.cols {
            out.push(grid[r * board.cols + c]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_cover::DEFAULT_NODE_LIMIT;

    /// Independent orbit computation: render each transform onto a
    /// bitmask grid and count distinct canonical bitmasks.
    fn orbit_size(piece: Piece) -> usize {
        let base = piece.base_cells();
        let mut masks = std::collections::HashSet::new();
        for flip in [false, true] {
            for rot in 0..4 {
                let cells: Vec<(i32, i32)> = base
                    .iter()
                    .map(|&(r, c)| if flip { (r, -c) } else { (r, c) })
                    .map(|(mut r, mut c)| {
                        for _ in 0..rot {
                            let (nr, nc) = (c, -r);
                            r = nr;
                            c = nc;
                        }
                        (r, c)
                    })
                    .collect();
                let min_r = cells.iter().map(|&(r, _)| r).min().unwrap();
                let min_c = cells.iter().map(|&(_, c)| c).min().unwrap();
                let mut mask = 0u64;
                for &(r, c) in &cells {
                    mask |= 1 << ((r - min_r) * 8 + (c - min_c));
                }
                masks.insert(mask);
            }
        }
        masks.len()
    }

    #[test]
    fn orientation_counts_match_symmetry_orbits() {
        let expected = [
            (Piece::O, 2),
            (Piece::P, 8),
            (Piece::Q, 8),
            (Piece::R, 8),
            (Piece::S, 8),
            (Piece::T, 4),
            (Piece::U, 4),
            (Piece::V, 4),
            (Piece::W, 4),
            (Piece::X, 1),
            (Piece::Y, 8),
            (Piece::Z, 4),
        ];
        for (piece, count) in expected {
            assert_eq!(piece.orientations().len(), count, "{:?}", piece);
            assert_eq!(orbit_size(piece), count, "{:?} orbit", piece);
        }
    }

    #[test]
    fn orientations_have_five_distinct_cells() {
        for piece in ALL_PIECES {
            for orientation in piece.orientations() {
                assert_eq!(orientation.len(), 5);
                let mut sorted = orientation.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), 5);
            }
        }
    }

    #[test]
    fn straight_piece_on_1x5_board_has_one_placement() {
        let mut pieces = [0usize; 12];
        pieces[0] = 1; // one O
        let board = PentominoBoard::new(1, 5, vec![true; 5], pieces);
        assert!(board.is_count_feasible());
        let (inst, placements) = pentomino_to_cover(&board);
        assert_eq!(inst.num_sets(), 1);
        assert_eq!(inst.sets()[0], vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(placements.len(), 1);
        let w = inst.solve(DEFAULT_NODE_LIMIT).unwrap().unwrap();
        assert!(inst.verify(&w).unwrap());
    }

    #[test]
    fn every_set_has_six_elements() {
        let mut pieces = [0usize; 12];
        pieces[1] = 1; // P
        pieces[9] = 1; // X
        let board = PentominoBoard::new(4, 4, vec![true; 16], pieces);
        let (inst, _) = pentomino_to_cover(&board);
        assert!(inst.num_sets() > 0);
        for set in inst.sets() {
            assert_eq!(set.len(), 6);
        }
    }

    #[test]
    fn count_infeasible_board_has_no_cover() {
        let mut pieces = [0usize; 12];
        pieces[1] = 1; // one P covers 5 of 10 cells
        let board = PentominoBoard::new(2, 5, vec![true; 10], pieces);
        assert!(!board.is_count_feasible());
        let (inst, _) = pentomino_to_cover(&board);
        assert_eq!(inst.solve(DEFAULT_NODE_LIMIT).unwrap(), None);
    }

    #[test]
    fn piece_multiplicity_gets_distinct_labels() {
        let mut pieces = [0usize; 12];
        pieces[0] = 2; // two O pieces
        let board = PentominoBoard::new(2, 5, vec![true; 10], pieces);
        let (inst, placements) = pentomino_to_cover(&board);
        // each copy can go in row 0 or row 1
        assert_eq!(inst.num_sets(), 4);
        assert_eq!(placements[0].instance_label, 0);
        assert_eq!(placements[2].instance_label, 1);
        let w = inst.solve(DEFAULT_NODE_LIMIT).unwrap().unwrap();
        assert!(inst.verify(&w).unwrap());
        assert_eq!(w.len(), board.total_pieces());
    }

    #[test]
    fn holes_block_placements() {
        let mut pieces = [0usize; 12];
        pieces[0] = 1;
        let mut cells = vec![true; 10];
        cells[2] = false; // hole splits row 0
        let board = PentominoBoard::new(2, 5, cells, pieces);
        let (inst, _) = pentomino_to_cover(&board);
        // only row 1 admits the straight piece, and the board has 9
        // coverable cells so no cover exists
        assert_eq!(inst.num_sets(), 1);
        assert_eq!(inst.solve(DEFAULT_NODE_LIMIT).unwrap(), None);
    }

    #[test]
    fn parse_and_print_round_trip() {
        let text = "pentomino 2 5\n#####\n##.##\npieces O:1 X:2\n";
        let board = parse_pentomino(text).unwrap();
        assert_eq!(board.rows(), 2);
        assert_eq!(board.cols(), 5);
        assert_eq!(board.piece_count(Piece::O), 1);
        assert_eq!(board.piece_count(Piece::X), 2);
        assert_eq!(board.piece_count(Piece::P), 0);
        assert!(!board.cell(1, 2));
        assert_eq!(board.to_text(), text);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_pentomino("pentomino 2\n").is_err());
        assert!(parse_pentomino("pentomino 1 5\n####\npieces O:1\n").is_err()); // short row
        assert!(parse_pentomino("pentomino 1 5\n#####\npieces A:1\n").is_err()); // unknown piece
        assert!(parse_pentomino("pentomino 1 5\n#####\n").is_err()); // missing pieces line
    }

    #[test]
    fn classic_3x5_rectangle_tiles() {
        // two U pieces flanking an X tile a 3x5 rectangle
        let mut pieces = [0usize; 12];
        pieces[Piece::U.index()] = 2;
        pieces[Piece::X.index()] = 1;
        let board = PentominoBoard::new(3, 5, vec![true; 15], pieces);
        let (inst, placements) = pentomino_to_cover(&board);
        let w = inst.solve(DEFAULT_NODE_LIMIT).unwrap().unwrap();
        assert!(inst.verify(&w).unwrap());
        let rendered = render_cover(&board, &placements, &w);
        assert_eq!(rendered.matches('U').count(), 10);
        assert_eq!(rendered.matches('X').count(), 5);
    }
}
