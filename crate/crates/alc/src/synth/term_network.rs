//! Term networks: complete labellings of node tuples by terms, the move
//! inventory of the game, and the In/Out response surgery.

use crate::games::{rank, unrank};
use crate::termlang::TermAst;

/// A complete labelling of the `dim`-tuples over nodes `0..nodes` by terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermNetwork {
    pub dim: usize,
    pub nodes: usize,
    labels: Vec<TermAst>,
}

impl TermNetwork {
    pub fn label(&self, tuple: &[usize]) -> &TermAst {
        &self.labels[rank(tuple, self.nodes)]
    }

    pub fn set_label(&mut self, tuple: &[usize], t: TermAst) {
        let r = rank(tuple, self.nodes);
        self.labels[r] = t;
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.labels.len()).map(|r| unrank(r, self.nodes, self.dim))
    }
}

/// Product of `d_jk` over the equal coordinate pairs, as a term.
fn diagonal_product_term(tuple: &[usize]) -> TermAst {
    let mut out = TermAst::One;
    for j in 0..tuple.len() {
        for k in 0..tuple.len() {
            if j != k && tuple[j] == tuple[k] {
                out = TermAst::meet(out, TermAst::Diag(j, k));
            }
        }
    }
    out
}

/// The term network `J_x`: nodes `0..d`, the main tuple labelled by the
/// variable, every other tuple by its diagonal product.
pub fn j_x(d: usize, var: &str) -> TermNetwork {
    let mut labels = Vec::with_capacity(d.pow(d as u32));
    for r in 0..d.pow(d as u32) {
        labels.push(diagonal_product_term(&unrank(r, d, d)));
    }
    let mut n = TermNetwork {
        dim: d,
        nodes: d,
        labels,
    };
    let main: Vec<usize> = (0..d).collect();
    n.set_label(&main, TermAst::var(var));
    n
}

/// One opponent move kind, without the chosen term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Cyl { index: usize, tuple: Vec<usize> },
    Poly { i: usize, j: usize, tuple: Vec<usize> },
}

/// All moves on a network of dimension `d`: cylindrifier moves for every
/// tuple and every index up to and including `d`, polyadic moves for every
/// tuple and transposition.
pub fn moves_of(n: &TermNetwork, include_poly: bool) -> Vec<Move> {
    let d = n.dim;
    let mut out = Vec::new();
    for tuple in n.tuples() {
        for index in 0..=d {
            out.push(Move::Cyl {
                index,
                tuple: tuple.clone(),
            });
        }
    }
    if include_poly {
        for tuple in n.tuples() {
            for i in 0..d {
                for j in i + 1..d {
                    out.push(Move::Poly {
                        i,
                        j,
                        tuple: tuple.clone(),
                    });
                }
            }
        }
    }
    out
}

/// The two response networks to a move with chosen term `tau`.
///
/// For a cylindrifier move below the dimension, In gains one node `z` and
/// labels the moved tuple with `c_i tau` meet the old label, the `z`-tuple
/// with `tau` meet its diagonal product, and the remaining fresh tuples with
/// their diagonal products; Out meets the moved tuple with the complement.
/// At the top index and for polyadic moves the responses meet the tuple with
/// `tau` (resp. `p_ij tau`) or its complement.
pub fn in_out(n: &TermNetwork, mv: &Move, tau: &TermAst) -> (TermNetwork, TermNetwork) {
    let d = n.dim;
    match mv {
        Move::Cyl { index, tuple } => {
            if *index == d {
                let mut inn = n.clone();
                inn.set_label(tuple, TermAst::meet(n.label(tuple).clone(), tau.clone()));
                let mut out = n.clone();
                out.set_label(
                    tuple,
                    TermAst::meet(n.label(tuple).clone(), TermAst::compl(tau.clone())),
                );
                return (inn, out);
            }
            let i = *index;
            let z = n.nodes;
            let nodes = n.nodes + 1;
            let mut labels = Vec::with_capacity(nodes.pow(d as u32));
            for r in 0..nodes.pow(d as u32) {
                let t = unrank(r, nodes, d);
                if t.iter().all(|&x| x < n.nodes) {
                    labels.push(n.label(&t).clone());
                } else {
                    labels.push(diagonal_product_term(&t));
                }
            }
            let mut inn = TermNetwork {
                dim: d,
                nodes,
                labels,
            };
            inn.set_label(
                tuple,
                TermAst::meet(n.label(tuple).clone(), TermAst::cyl(i, tau.clone())),
            );
            let mut z_tuple = tuple.clone();
            z_tuple[i] = z;
            inn.set_label(
                &z_tuple,
                TermAst::meet(tau.clone(), diagonal_product_term(&z_tuple)),
            );
            let mut out = n.clone();
            out.set_label(
                tuple,
                TermAst::meet(
                    n.label(tuple).clone(),
                    TermAst::compl(TermAst::cyl(i, tau.clone())),
                ),
            );
            (inn, out)
        }
        Move::Poly { i, j, tuple } => {
            let p = TermAst::transp(*i, *j, tau.clone());
            let mut inn = n.clone();
            inn.set_label(tuple, TermAst::meet(n.label(tuple).clone(), p.clone()));
            let mut out = n.clone();
            out.set_label(
                tuple,
                TermAst::meet(n.label(tuple).clone(), TermAst::compl(p)),
            );
            (inn, out)
        }
    }
}
