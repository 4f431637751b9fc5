//! Sudoku (generalized to n^2 x n^2 grids) reduced to Exact Cover.
//!
//! Each candidate assignment (row, col, value) becomes a 4-element set
//! hitting one constraint from each family: cell occupancy, row-value,
//! column-value, and box-value. Clues trim away conflicting candidates
//! and their own satisfied constraints, and the surviving constraints
//! are compacted, so a conflict-free puzzle with k clues reduces to a
//! universe of exactly `4n^2 - 4k` elements.

use thiserror::Error;

use crate::exact_cover::{ExactCoverInstance, Witness};
use crate::format::{parse_usize, FormatError, LineReader};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SudokuError {
    #[error("side length {0} is not a perfect square of at least 4")]
    BadSideLength(usize),
    #[error("clues at ({r1},{c1}) and ({r2},{c2}) both place value {v} in the same {family}")]
    ConflictingClues { r1: usize, c1: usize, r2: usize, c2: usize, v: usize, family: &'static str },
    #[error("solution cell ({r},{c}) is empty or out of range")]
    SolutionIncomplete { r: usize, c: usize },
    #[error("solution contradicts the clue at ({r},{c})")]
    SolutionContradictsClue { r: usize, c: usize },
    #[error("solution violates the {family} rule at ({r},{c})")]
    SolutionRuleViolation { r: usize, c: usize, family: &'static str },
}

/// An n x n grid (n a perfect square); cells hold 0-based values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SudokuPuzzle {
    n: usize,
    box_side: usize,
    grid: Vec<Option<usize>>,
}

impl SudokuPuzzle {
    pub fn new(n: usize, grid: Vec<Option<usize>>) -> Result<Self, SudokuError> {
        let box_side = (n as f64).sqrt().round() as usize;
        if n < 4 || box_side * box_side != n {
            return Err(SudokuError::BadSideLength(n));
        }
        assert_eq!(grid.len(), n * n, "grid must have n^2 cells");
        let puzzle = SudokuPuzzle { n, box_side, grid };
        puzzle.check_clue_conflicts()?;
        Ok(puzzle)
    }

    pub fn blank(n: usize) -> Result<Self, SudokuError> {
        Self::new(n, vec![None; n * n])
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn clue(&self, r: usize, c: usize) -> Option<usize> {
        self.grid[r * self.n + c]
    }

    pub fn clue_count(&self) -> usize {
        self.grid.iter().filter(|c| c.is_some()).count()
    }

    pub fn box_of(&self, r: usize, c: usize) -> usize {
        (r / self.box_side) * self.box_side + c / self.box_side
    }

    /// Candidate index of the triple (r, c, v): `r*n^2 + c*n + v`.
    pub fn to_index(&self, r: usize, c: usize, v: usize) -> usize {
        r * self.n * self.n + c * self.n + v
    }

    fn check_clue_conflicts(&self) -> Result<(), SudokuError> {
        let clues: Vec<(usize, usize, usize)> = (0..self.n)
            .flat_map(|r| (0..self.n).map(move |c| (r, c)))
            .filter_map(|(r, c)| self.clue(r, c).map(|v| (r, c, v)))
            .collect();
        for (a, &(r1, c1, v1)) in clues.iter().enumerate() {
            for &(r2, c2, v2) in &clues[a + 1..] {
                if v1 != v2 {
                    continue;
                }
                let family = if r1 == r2 {
                    Some("row")
                } else if c1 == c2 {
                    Some("column")
                } else if self.box_of(r1, c1) == self.box_of(r2, c2) {
                    Some("box")
                } else {
                    None
                };
                if let Some(family) = family {
                    return Err(SudokuError::ConflictingClues { r1, c1, r2, c2, v: v1, family });
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sudoku {}\n", self.n);
        for r in 0..self.n {
            let toks: Vec<String> = (0..self.n)
                .map(|c| match self.clue(r, c) {
                    Some(v) => (v + 1).to_string(),
                    None => ".".to_string(),
                })
                .collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Sudoku file: `sudoku n`, then n lines of n tokens, each `.` or a
/// value in 1..=n.
pub fn parse_sudoku(text: &str) -> Result<SudokuPuzzle, FormatError> {
    let mut reader = LineReader::new(text);
    let header = reader.expect_line("`sudoku n` header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != "sudoku" {
        return Err(reader.error(format!("expected `sudoku n`, got {header:?}")));
    }
    let n = parse_usize(toks[1], &reader, "side length")?;
    let box_side = (n as f64).sqrt().round() as usize;
    if n < 4 || box_side * box_side != n {
        return Err(reader.error(format!("side length {n} is not a perfect square of at least 4")));
    }
    let mut grid = Vec::with_capacity(n * n);
    for r in 0..n {
        let line = reader.expect_line(&format!("grid row {r}"))?;
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != n {
            return Err(reader.error(format!("row {r} has {} tokens, expected {n}", cells.len())));
        }
        for tok in cells {
            if tok == "." {
                grid.push(None);
            } else {
                let v = parse_usize(tok, &reader, "cell value")?;
                if v < 1 || v > n {
                    return Err(reader.error(format!("cell value {v} outside 1..={n}")));
                }
                grid.push(Some(v - 1));
            }
        }
    }
    SudokuPuzzle::new(n, grid).map_err(|e| reader.error(e.to_string()))
}

/// Maps between puzzle triples and the trimmed, compacted instance.
#[derive(Debug, Clone)]
pub struct CandidateMap {
    n: usize,
    /// Triple index -> set index in the trimmed instance.
    forward: Vec<Option<usize>>,
    /// Original constraint index (0..4n^2) -> compacted universe index.
    element_map: Vec<Option<usize>>,
    /// Set index -> originating triple.
    triples: Vec<(usize, usize, usize)>,
}

impl CandidateMap {
    pub fn set_index(&self, r: usize, c: usize, v: usize) -> Option<usize> {
        self.forward[r * self.n * self.n + c * self.n + v]
    }

    pub fn element_index(&self, original_constraint: usize) -> Option<usize> {
        self.element_map[original_constraint]
    }

    /// The (row, col, value) triple behind a set of the instance.
    pub fn triple(&self, set_index: usize) -> (usize, usize, usize) {
        self.triples[set_index]
    }
}

/// Reduce a puzzle to an Exact Cover instance over the surviving
/// constraints.
pub fn sudoku_to_cover(puzzle: &SudokuPuzzle) -> (ExactCoverInstance, CandidateMap) {
    let n = puzzle.side();
    let nn = n * n;
    let constraints_of = |r: usize, c: usize, v: usize| {
        [
            n * r + c,
            nn + r * n + v,
            2 * nn + c * n + v,
            3 * nn + puzzle.box_of(r, c) * n + v,
        ]
    };

    // candidates conflicting with a clue, plus the clue's own candidate
    let mut dead_triple = vec![false; n * nn];
    let mut dead_constraint = vec![false; 4 * nn];
    for r in 0..n {
        for c in 0..n {
            let Some(v0) = puzzle.clue(r, c) else { continue };
            for v in 0..n {
                dead_triple[puzzle.to_index(r, c, v)] = true;
            }
            for c2 in 0..n {
                dead_triple[puzzle.to_index(r, c2, v0)] = true;
            }
            for r2 in 0..n {
                dead_triple[puzzle.to_index(r2, c, v0)] = true;
            }
            let (br, bc) = ((r / puzzle.box_side) * puzzle.box_side, (c / puzzle.box_side) * puzzle.box_side);
            for r2 in br..br + puzzle.box_side {
                for c2 in bc..bc + puzzle.box_side {
                    dead_triple[puzzle.to_index(r2, c2, v0)] = true;
                }
            }
            for e in constraints_of(r, c, v0) {
                dead_constraint[e] = true;
            }
        }
    }

    let mut element_map = vec![None; 4 * nn];
    let mut next = 0usize;
    for (e, slot) in element_map.iter_mut().enumerate() {
        if !dead_constraint[e] {
            *slot = Some(next);
            next += 1;
        }
    }

    let mut sets = Vec::new();
    let mut forward = vec![None; n * nn];
    let mut triples = Vec::new();
    for r in 0..n {
        for c in 0..n {
            for v in 0..n {
                let t = puzzle.to_index(r, c, v);
                if dead_triple[t] {
                    continue;
                }
                let set: Vec<usize> = constraints_of(r, c, v)
                    .iter()
                    .map(|&e| element_map[e].expect("surviving candidate references a dead constraint"))
                    .collect();
                forward[t] = Some(sets.len());
                triples.push((r, c, v));
                sets.push(set);
            }
        }
    }

    let (instance, dropped) = ExactCoverInstance::new(next, sets).expect("reduction produces valid sets");
    debug_assert_eq!(dropped, 0);
    let cmap = CandidateMap { n, forward, element_map, triples };
    (instance, cmap)
}

/// Build a witness from a solved grid: the set indices of every
/// non-clue cell's triple.
pub fn sudoku_witness(
    puzzle: &SudokuPuzzle,
    solution: &[Vec<usize>],
    cmap: &CandidateMap,
) -> Result<Witness, SudokuError> {
    let n = puzzle.side();
    // completeness and clue agreement
    for r in 0..n {
        for c in 0..n {
            let v = *solution
                .get(r)
                .and_then(|row| row.get(c))
                .ok_or(SudokuError::SolutionIncomplete { r, c })?;
            if v >= n {
                return Err(SudokuError::SolutionIncomplete { r, c });
            }
            if let Some(clue) = puzzle.clue(r, c) {
                if clue != v {
                    return Err(SudokuError::SolutionContradictsClue { r, c });
                }
            }
        }
    }
    // rule families
    for r in 0..n {
        let mut seen = vec![false; n];
        for c in 0..n {
            let v = solution[r][c];
            if seen[v] {
                return Err(SudokuError::SolutionRuleViolation { r, c, family: "row" });
            }
            seen[v] = true;
        }
    }
    for c in 0..n {
        let mut seen = vec![false; n];
        for r in 0..n {
            let v = solution[r][c];
            if seen[v] {
                return Err(SudokuError::SolutionRuleViolation { r, c, family: "column" });
            }
            seen[v] = true;
        }
    }
    let b = (n as f64).sqrt().round() as usize;
    for bi in 0..n {
        let (br, bc) = ((bi / b) * b, (bi % b) * b);
        let mut seen = vec![false; n];
        for r in br..br + b {
            for c in bc..bc + b {
                let v = solution[r][c];
                if seen[v] {
                    return Err(SudokuError::SolutionRuleViolation { r, c, family: "box" });
                }
                seen[v] = true;
            }
        }
    }

    let mut indices = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if puzzle.clue(r, c).is_some() {
                continue;
            }
            let idx = cmap
                .set_index(r, c, solution[r][c])
                .expect("non-clue cell of a rule-respecting solution survives trimming");
            indices.push(idx);
        }
    }
    Ok(Witness::new(indices).expect("set indices are distinct"))
}
