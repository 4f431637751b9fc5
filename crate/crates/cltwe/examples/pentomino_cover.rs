//! Reduce a pentomino tiling problem to Exact Cover, solve it, and
//! draw the tiling.
//!
//!     cargo run --example pentomino_cover

use cltwe::exact_cover::DEFAULT_NODE_LIMIT;
use cltwe::reductions::{parse_pentomino, pentomino_to_cover, render_cover};

fn main() {
    let board = parse_pentomino("pentomino 3 5\n#####\n#####\n#####\npieces U:2 X:1\n").expect("valid board");
    println!("board:\n{}", board.to_text());

    let (instance, placements) = pentomino_to_cover(&board);
    println!(
        "universe: {} cells + {} piece labels = {} elements, {} placements",
        board.coverable_cells(),
        board.total_pieces(),
        instance.universe_size(),
        instance.num_sets()
    );

    let witness = instance.solve(DEFAULT_NODE_LIMIT).unwrap().expect("this board tiles");
    println!("cover uses sets {:?}", witness.indices());
    println!("{}", render_cover(&board, &placements, &witness));
}
