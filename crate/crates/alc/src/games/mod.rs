//! Networks over a finite algebra and the two representation games: the
//! element-labelled game solved by backward induction, and the atom-labelled
//! game on a bounded node supply solved by greatest-fixpoint value
//! iteration. Both produce replayable certificates.

mod atomic_game;
mod element_game;
mod network;
pub mod trace;

pub use atomic_game::{
    atomic_game_on_ra, replay_atomic, solve_atomic_game, AtomicGameOptions, AtomicMove,
    AtomicNetwork, AtomicSolution,
};
pub use element_game::{
    replay_element, solve_element_game, ElementGameOptions, ElementMove, ElementSolution,
    MoveTree, TreeNode,
};
pub use network::{initial_network, validate_network, NetClause, NetworkReport, PreNetwork};
pub(crate) use network::element_words;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Winner {
    Exists,
    Forall,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rounds {
    Finite(usize),
    Fixpoint,
}

/// Final outcome of a solved game. `restricted_forall` marks element games
/// where the opponent's element choices were cut down to the
/// join-irreducible candidates; such verdicts are sound for
/// "Exists wins" claims only.
#[derive(Clone, Debug, Serialize)]
pub struct GameVerdict {
    pub winner: Winner,
    pub rounds: Rounds,
    pub restricted_forall: bool,
    pub note: Option<String>,
}

pub(crate) fn rank(tuple: &[usize], v: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * v + x)
}

pub(crate) fn unrank(mut r: usize, v: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for i in (0..d).rev() {
        out[i] = r % v;
        r /= v;
    }
    out
}
