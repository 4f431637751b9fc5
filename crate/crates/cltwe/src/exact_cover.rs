//! Exact Cover instances, witness verification, and an Algorithm X
//! solver with the min-branching-column heuristic.
//!
//! The solver is exhaustive and deterministic: columns are chosen by
//! fewest remaining candidate rows (ties broken by lowest column index)
//! and rows are tried in ascending index order, so a given instance
//! always yields the same witness.

use thiserror::Error;

use crate::format::{parse_usize, FormatError, LineReader};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("set {set} contains element {element}, outside universe of size {universe}")]
    ElementOutOfRange { set: usize, element: usize, universe: usize },
    #[error("set {set} contains duplicate element {element}")]
    DuplicateElement { set: usize, element: usize },
    #[error("witness index {0} out of range for {1} sets")]
    WitnessOutOfRange(usize, usize),
    #[error("witness contains duplicate index {0}")]
    WitnessDuplicate(usize),
}

/// Search budget exhausted before the space was covered. Distinct from
/// "no solution exists".
#[derive(Debug, Error, PartialEq, Eq)]
#[error("node limit of {limit} exhausted after {nodes} nodes")]
pub struct NodeLimitExceeded {
    pub limit: u64,
    pub nodes: u64,
}

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// A universe `{0, ..., universe_size - 1}` plus an ordered family of
/// subsets. Sets are stored sorted and duplicate-free; empty sets are
/// dropped at construction (an empty set would carry a zero level
/// vector, and so encode the empty product) and reported back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCoverInstance {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
}

impl ExactCoverInstance {
    /// Build an instance, returning it together with the number of
    /// empty sets that were dropped.
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>) -> Result<(Self, usize), CoverError> {
        let mut kept = Vec::with_capacity(sets.len());
        let mut dropped = 0usize;
        for (idx, mut set) in sets.into_iter().enumerate() {
            if set.is_empty() {
                dropped += 1;
                continue;
            }
            set.sort_unstable();
            for win in set.windows(2) {
                if win[0] == win[1] {
                    return Err(CoverError::DuplicateElement { set: idx, element: win[0] });
                }
            }
            if let Some(&max) = set.last() {
                if max >= universe_size {
                    return Err(CoverError::ElementOutOfRange { set: idx, element: max, universe: universe_size });
                }
            }
            kept.push(set);
        }
        Ok((ExactCoverInstance { universe_size, sets: kept }, dropped))
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// True iff the selected sets are pairwise disjoint and their union
    /// is the full universe.
    pub fn verify(&self, witness: &Witness) -> Result<bool, CoverError> {
        for &i in &witness.indices {
            if i >= self.sets.len() {
                return Err(CoverError::WitnessOutOfRange(i, self.sets.len()));
            }
        }
        let mut covered = vec![false; self.universe_size];
        let mut count = 0usize;
        for &i in &witness.indices {
            for &e in &self.sets[i] {
                if covered[e] {
                    return Ok(false);
                }
                covered[e] = true;
                count += 1;
            }
        }
        Ok(count == self.universe_size)
    }

    /// Exhaustive Algorithm X search. Returns the first witness found
    /// in the deterministic search order, `None` if no cover exists.
    pub fn solve(&self, node_limit: u64) -> Result<Option<Witness>, NodeLimitExceeded> {
        let mut search = Search::new(self, node_limit);
        let found = search.run()?;
        Ok(found.map(|mut indices| {
            indices.sort_unstable();
            Witness { indices }
        }))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.universe_size, self.sets.len());
        for set in &self.sets {
            let toks: Vec<String> = set.iter().map(usize::to_string).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        let mut reader = LineReader::new(text);
        Self::parse_block(&mut reader)
    }

    pub fn parse_block(reader: &mut LineReader) -> Result<Self, FormatError> {
        let header = reader.expect_line("exact-cover header `U L`")?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(reader.error(format!("expected `U L` header, got {header:?}")));
        }
        let universe = parse_usize(toks[0], reader, "universe size")?;
        let num_sets = parse_usize(toks[1], reader, "set count")?;
        let mut sets = Vec::with_capacity(num_sets);
        for k in 0..num_sets {
            let line = reader.expect_line(&format!("set {k} of {num_sets}"))?;
            let set = line
                .split_whitespace()
                .map(|t| parse_usize(t, reader, "set element"))
                .collect::<Result<Vec<_>, _>>()?;
            sets.push(set);
        }
        let (instance, _) = ExactCoverInstance::new(universe, sets)
            .map_err(|e| reader.error(e.to_string()))?;
        Ok(instance)
    }
}

/// A claimed solution: sorted, duplicate-free subset indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    indices: Vec<usize>,
}

impl Witness {
    pub fn new(mut indices: Vec<usize>) -> Result<Self, CoverError> {
        indices.sort_unstable();
        for win in indices.windows(2) {
            if win[0] == win[1] {
                return Err(CoverError::WitnessDuplicate(win[0]));
            }
        }
        Ok(Witness { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// One line of space-separated set indices.
    pub fn to_text(&self) -> String {
        let toks: Vec<String> = self.indices.iter().map(usize::to_string).collect();
        format!("{}\n", toks.join(" "))
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        let mut reader = LineReader::new(text);
        let line = reader.expect_line("witness indices")?;
        let indices = line
            .split_whitespace()
            .map(|t| parse_usize(t, &reader, "witness index"))
            .collect::<Result<Vec<_>, _>>()?;
        Witness::new(indices).map_err(|e| reader.error(e.to_string()))
    }
}

struct Search<'a> {
    instance: &'a ExactCoverInstance,
    /// For each element, the rows containing it.
    columns: Vec<Vec<usize>>,
    row_active: Vec<bool>,
    col_covered: Vec<bool>,
    /// Active rows remaining per column.
    col_count: Vec<usize>,
    uncovered: usize,
    selected: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl<'a> Search<'a> {
    fn new(instance: &'a ExactCoverInstance, limit: u64) -> Self {
        let mut columns = vec![Vec::new(); instance.universe_size];
        for (r, set) in instance.sets.iter().enumerate() {
            for &e in set {
                columns[e].push(r);
            }
        }
        let col_count = columns.iter().map(Vec::len).collect();
        Search {
            instance,
            columns,
            row_active: vec![true; instance.sets.len()],
            col_covered: vec![false; instance.universe_size],
            col_count,
            uncovered: instance.universe_size,
            selected: Vec::new(),
            nodes: 0,
            limit,
        }
    }

    fn run(&mut self) -> Result<Option<Vec<usize>>, NodeLimitExceeded> {
        if self.uncovered == 0 {
            return Ok(Some(self.selected.clone()));
        }
        // min-branching column, lowest index on ties
        let col = (0..self.instance.universe_size)
            .filter(|&c| !self.col_covered[c])
            .min_by_key(|&c| (self.col_count[c], c))
            .expect("uncovered > 0 implies an uncovered column exists");
        if self.col_count[col] == 0 {
            return Ok(None);
        }
        let candidates: Vec<usize> = self.columns[col]
            .iter()
            .copied()
            .filter(|&r| self.row_active[r])
            .collect();
        for row in candidates {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(NodeLimitExceeded { limit: self.limit, nodes: self.nodes });
            }
            let undo = self.select(row);
            self.selected.push(row);
            if let Some(solution) = self.run()? {
                return Ok(Some(solution));
            }
            self.selected.pop();
            self.unselect(undo);
        }
        Ok(None)
    }

    /// Cover every column of `row` and deactivate every row that shares
    /// one of those columns. Returns what is needed to undo.
    fn select(&mut self, row: usize) -> (Vec<usize>, Vec<usize>) {
        let mut covered_cols = Vec::new();
        let mut deactivated = Vec::new();
        for &e in &self.instance.sets[row] {
            self.col_covered[e] = true;
            self.uncovered -= 1;
            covered_cols.push(e);
            for idx in 0..self.columns[e].len() {
                let r2 = self.columns[e][idx];
                if self.row_active[r2] {
                    self.row_active[r2] = false;
                    deactivated.push(r2);
                    for &e2 in &self.instance.sets[r2] {
                        self.col_count[e2] -= 1;
                    }
                }
            }
        }
        (covered_cols, deactivated)
    }

    fn unselect(&mut self, undo: (Vec<usize>, Vec<usize>)) {
        let (covered_cols, deactivated) = undo;
        for &r2 in deactivated.iter().rev() {
            self.row_active[r2] = true;
            for &e2 in &self.instance.sets[r2] {
                self.col_count[e2] += 1;
            }
        }
        for &e in covered_cols.iter().rev() {
            self.col_covered[e] = false;
            self.uncovered += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamRng;

    fn toy() -> ExactCoverInstance {
        ExactCoverInstance::new(3, vec![vec![0, 1], vec![2], vec![0, 2]]).unwrap().0
    }

    #[test]
    fn verify_by_inspection() {
        let inst = toy();
        assert!(inst.verify(&Witness::new(vec![0, 1]).unwrap()).unwrap());
        assert!(!inst.verify(&Witness::new(vec![1, 2]).unwrap()).unwrap());
        assert!(!inst.verify(&Witness::new(vec![]).unwrap()).unwrap());
    }

    #[test]
    fn verify_rejects_out_of_range() {
        let inst = toy();
        let w = Witness::new(vec![7]).unwrap();
        assert_eq!(inst.verify(&w), Err(CoverError::WitnessOutOfRange(7, 3)));
    }

    #[test]
    fn verified_witness_has_counting_identity() {
        let inst = toy();
        let w = Witness::new(vec![0, 1]).unwrap();
        assert!(inst.verify(&w).unwrap());
        let total: usize = w.indices().iter().map(|&i| inst.sets()[i].len()).sum();
        assert_eq!(total, inst.universe_size());
    }

    #[test]
    fn solve_finds_toy_cover() {
        let inst = toy();
        let w = inst.solve(DEFAULT_NODE_LIMIT).unwrap().unwrap();
        assert_eq!(w.indices(), &[0, 1]);
    }

    #[test]
    fn solve_detects_uncoverable_element() {
        let (inst, _) = ExactCoverInstance::new(2, vec![vec![0], vec![0]]).unwrap();
        assert_eq!(inst.solve(DEFAULT_NODE_LIMIT).unwrap(), None);
    }

    #[test]
    fn solve_reports_limit_exhaustion() {
        // twelve columns, so any search path selects twelve rows
        let sets: Vec<Vec<usize>> = (0..12).flat_map(|e| vec![vec![e], vec![e]]).collect();
        let (inst, _) = ExactCoverInstance::new(12, sets).unwrap();
        let err = inst.solve(3).unwrap_err();
        assert_eq!(err.limit, 3);
        assert!(inst.solve(DEFAULT_NODE_LIMIT).unwrap().is_some());
    }

    #[test]
    fn empty_sets_are_dropped_and_counted() {
        let (inst, dropped) = ExactCoverInstance::new(2, vec![vec![], vec![0], vec![], vec![1]]).unwrap();
        assert_eq!(dropped, 2);
        assert_eq!(inst.num_sets(), 2);
        assert!(inst.solve(1000).unwrap().is_some());
    }

    #[test]
    fn constructor_rejects_bad_sets() {
        assert!(matches!(
            ExactCoverInstance::new(2, vec![vec![0, 2]]),
            Err(CoverError::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            ExactCoverInstance::new(2, vec![vec![1, 1]]),
            Err(CoverError::DuplicateElement { .. })
        ));
    }

    /// Brute-force oracle: try all 2^L index subsets.
    fn brute_force(inst: &ExactCoverInstance) -> Option<usize> {
        let l = inst.num_sets();
        let mut best: Option<usize> = None;
        for mask in 0u32..(1 << l) {
            let indices: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
            let w = Witness::new(indices).unwrap();
            if inst.verify(&w).unwrap() {
                best = Some(best.map_or(w.len(), |b: usize| b.min(w.len())));
            }
        }
        best
    }

    #[test]
    fn solver_agrees_with_brute_force_on_random_instances() {
        let mut rng = StreamRng::from_seed(b"cover-oracle", 0);
        let mut solvable = 0;
        for trial in 0..120 {
            let universe = 1 + (rng.random_bits(8).to_u32_digits().first().copied().unwrap_or(0) as usize % 6);
            let num_sets = 1 + (rng.random_bits(8).to_u32_digits().first().copied().unwrap_or(0) as usize % 10);
            let mut sets = Vec::new();
            for _ in 0..num_sets {
                let mask = rng.random_bits(universe as u64);
                let set: Vec<usize> = (0..universe).filter(|&e| mask.bit(e as u64)).collect();
                sets.push(set);
            }
            let (inst, _) = ExactCoverInstance::new(universe, sets).unwrap();
            let oracle = brute_force(&inst);
            let solved = inst.solve(DEFAULT_NODE_LIMIT).unwrap();
            assert_eq!(oracle.is_some(), solved.is_some(), "trial {trial}");
            if let Some(w) = solved {
                assert!(inst.verify(&w).unwrap());
                solvable += 1;
            }
        }
        assert!(solvable > 10, "want a healthy mix of solvable instances, got {solvable}");
    }

    #[test]
    fn text_round_trip() {
        let inst = toy();
        let text = inst.to_text();
        assert_eq!(text, "3 3\n0 1\n2\n0 2\n");
        assert_eq!(ExactCoverInstance::from_text(&text).unwrap(), inst);
    }

    #[test]
    fn text_format_errors() {
        assert!(ExactCoverInstance::from_text("").is_err());
        assert!(ExactCoverInstance::from_text("3\n").is_err());
        assert!(ExactCoverInstance::from_text("3 2\n0 1\n").is_err()); // truncated
        assert!(ExactCoverInstance::from_text("3 1\n0 x\n").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let text = "# a comment\n3 1\n# another\n0 1 2\n";
        let inst = ExactCoverInstance::from_text(text).unwrap();
        assert_eq!(inst.num_sets(), 1);
    }
}
