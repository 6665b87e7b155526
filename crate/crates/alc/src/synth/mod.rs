//! Recursive axiom synthesis: term networks, the In/Out surgery for the two
//! response kinds, the network formula, the recursive game formulas, the
//! closed sentences, and the discriminator translation to equations. A
//! separate semantic evaluator runs the recursion without materializing the
//! formulas, which grow very quickly with depth.

mod discriminator;
mod eval_psi;
mod formula;
mod term_network;

pub use discriminator::to_equation;
pub use eval_psi::{eval_psi, PsiEvaluator};
pub use formula::{
    cnet_formula, eval_formula, phi_sentence, print_sexpr, psi_formula, Formula,
};
pub use term_network::{in_out, j_x, moves_of, Move, TermNetwork};
