//! Shared fixtures for the criterion benches.

use polycheck_core::lang::{compile, Expanded};
use polycheck_core::{build_poset, synth, CellPoset};

/// The maze query script, compiled with the prelude.
pub fn maze_queries() -> Expanded {
    compile(include_str!("../../../scripts/maze.imgql"), true).expect("shipped script compiles")
}

pub fn maze_poset(rooms: usize, room_size: usize) -> CellPoset {
    build_poset(&synth::maze_model(rooms, room_size)).expect("generated maze is a complex")
}
