//! The element-labelled game on prenetworks, solved exactly by backward
//! induction with memoization on positions up to node renaming.
//!
//! A round offers the opponent a cylindrifier move (an index up to the
//! dimension, a tuple, an element) or — on algebras with transpositions — a
//! polyadic move (a transposition, a tuple, an element); the responder picks
//! the accept or reject update. The position wins for the responder at depth
//! zero exactly when it is a network.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::games::network::{diagonal_product, is_network, validate_network, PreNetwork};
use crate::games::{GameVerdict, Rounds, Winner};

/// One opponent move, with the chosen element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ElementMove {
    Cyl {
        index: usize,
        tuple: Vec<usize>,
        element: Vec<usize>,
    },
    Poly {
        i: usize,
        j: usize,
        tuple: Vec<usize>,
        element: Vec<usize>,
    },
}

/// Winning move tree for the opponent: at each node both responses lose for
/// the responder within the remaining rounds.
#[derive(Clone, Debug, Serialize)]
pub struct MoveTree {
    pub mv: ElementMove,
    pub accept: Box<TreeNode>,
    pub reject: Box<TreeNode>,
}

#[derive(Clone, Debug, Serialize)]
pub enum TreeNode {
    Inner(MoveTree),
    /// depth exhausted: the position fails the network clauses
    Broken,
}

#[derive(Clone, Copy, Debug)]
pub struct ElementGameOptions {
    /// full opponent sweep over all elements while `2^atoms` stays within
    /// this bound; beyond it the sweep is restricted to atoms and
    /// complements of cylindrified atoms, and the verdict is tagged
    pub element_sweep_bound: u64,
    /// hard cap on distinct memoized positions
    pub position_budget: usize,
}

impl Default for ElementGameOptions {
    fn default() -> Self {
        ElementGameOptions {
            element_sweep_bound: 64,
            position_budget: 2_000_000,
        }
    }
}

pub struct ElementSolution {
    pub verdict: GameVerdict,
    pub start: PreNetwork,
    pub rounds: usize,
    pub certificate: Option<MoveTree>,
}

struct Solver<'a> {
    alg: &'a FiniteAlgebra,
    dim: usize,
    poly: bool,
    candidates: Vec<Element>,
    restricted: bool,
    memo: HashMap<(Vec<u64>, usize), bool>,
    leaf_memo: HashMap<PreNetwork, bool>,
    budget_hit: bool,
    budget: usize,
}

fn element_candidates(alg: &FiniteAlgebra, opts: &ElementGameOptions) -> (Vec<Element>, bool) {
    let n = alg.atom_count();
    if n <= 63 && (1u64 << n) <= opts.element_sweep_bound {
        return ((0..1u128 << n).map(|i| Element::from_index(n, i)).collect(), false);
    }
    // join-irreducible-generated candidates: atoms and complements of
    // cylindrified atoms
    let mut out: Vec<Element> = vec![alg.zero(), alg.one()];
    for a in 0..n {
        out.push(alg.atom(a));
        for i in 0..alg.dim() {
            out.push(alg.cyl(i, &alg.atom(a)).complement());
        }
    }
    out.sort();
    out.dedup();
    (out, true)
}

/// Accept / reject updates for the cylindrifier move with `index < dim`:
/// accept adds a fresh node `z`, labels the moved tuple with the old label
/// meet `c_i a`, the `z`-tuple with `a` meet its diagonal product, and all
/// other fresh tuples with their diagonal products.
pub(crate) fn cyl_updates(
    alg: &FiniteAlgebra,
    n: &PreNetwork,
    index: usize,
    tuple: &[usize],
    a: &Element,
) -> (PreNetwork, PreNetwork) {
    let d = n.dim;
    if index == d {
        let mut accept = n.clone();
        accept.set_label(tuple, n.label(tuple).meet(a));
        let mut reject = n.clone();
        reject.set_label(tuple, n.label(tuple).meet(&a.complement()));
        return (accept, reject);
    }
    let ci = alg.cyl(index, a);
    let mut accept = n.with_fresh_node(alg);
    let z = n.nodes;
    accept.set_label(tuple, n.label(tuple).meet(&ci));
    let mut z_tuple = tuple.to_vec();
    z_tuple[index] = z;
    accept.set_label(&z_tuple, a.meet(&diagonal_product(alg, &z_tuple)));
    let mut reject = n.clone();
    reject.set_label(tuple, n.label(tuple).meet(&ci.complement()));
    (accept, reject)
}

/// Accept / reject updates for the polyadic move: the tuple's label meets
/// `p_ij a` or its complement. The polyadic network clause ties the swapped
/// tuples together; the update itself is the same dichotomy as the
/// top-index cylindrifier move, applied to `p_ij a`.
pub(crate) fn poly_updates(
    alg: &FiniteAlgebra,
    n: &PreNetwork,
    i: usize,
    j: usize,
    tuple: &[usize],
    a: &Element,
) -> Result<(PreNetwork, PreNetwork)> {
    let p = alg.transp_el(i, j, a)?;
    let mut accept = n.clone();
    accept.set_label(tuple, n.label(tuple).meet(&p));
    let mut reject = n.clone();
    reject.set_label(tuple, n.label(tuple).meet(&p.complement()));
    Ok((accept, reject))
}

impl<'a> Solver<'a> {
    fn wins(&mut self, n: &PreNetwork, rounds: usize) -> Result<bool> {
        if rounds == 0 {
            if let Some(&v) = self.leaf_memo.get(n) {
                return Ok(v);
            }
            let v = is_network(self.alg, n);
            if self.leaf_memo.len() < self.budget {
                self.leaf_memo.insert(n.clone(), v);
            }
            return Ok(v);
        }
        let key = (n.canonical_key(), rounds);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        if self.memo.len() >= self.budget {
            self.budget_hit = true;
            return Err(AlcError::Budget("element game position budget".into()));
        }
        let result = self.find_refutation(n, rounds)?.is_none();
        self.memo.insert(key, result);
        Ok(result)
    }

    /// A move both of whose responses lose for the responder, if any.
    fn find_refutation(
        &mut self,
        n: &PreNetwork,
        rounds: usize,
    ) -> Result<Option<(ElementMove, PreNetwork, PreNetwork)>> {
        let tuples: Vec<Vec<usize>> = n.tuples().collect();
        let candidates = self.candidates.clone();
        for a in &candidates {
            for tuple in &tuples {
                for index in 0..=self.dim {
                    let (accept, reject) = cyl_updates(self.alg, n, index, tuple, a);
                    if !self.wins(&accept, rounds - 1)? && !self.wins(&reject, rounds - 1)? {
                        let mv = ElementMove::Cyl {
                            index,
                            tuple: tuple.clone(),
                            element: a.iter().collect(),
                        };
                        return Ok(Some((mv, accept, reject)));
                    }
                }
                if self.poly {
                    for i in 0..self.dim {
                        for j in i + 1..self.dim {
                            let (accept, reject) = poly_updates(self.alg, n, i, j, tuple, a)?;
                            if !self.wins(&accept, rounds - 1)? && !self.wins(&reject, rounds - 1)? {
                                let mv = ElementMove::Poly {
                                    i,
                                    j,
                                    tuple: tuple.clone(),
                                    element: a.iter().collect(),
                                };
                                return Ok(Some((mv, accept, reject)));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn certificate(&mut self, n: &PreNetwork, rounds: usize) -> Result<TreeNode> {
        if rounds == 0 {
            return Ok(TreeNode::Broken);
        }
        match self.find_refutation(n, rounds)? {
            Some((mv, accept, reject)) => Ok(TreeNode::Inner(MoveTree {
                mv,
                accept: Box::new(self.certificate(&accept, rounds - 1)?),
                reject: Box::new(self.certificate(&reject, rounds - 1)?),
            })),
            None => Err(AlcError::InvalidParameter(
                "certificate requested for a winning position".into(),
            )),
        }
    }
}

/// Solve the length-`rounds` game started at `I_a`. The responder wins the
/// zero-round game exactly when `I_a` is a network; each further round lets
/// the opponent pick any move and the responder pick a side of the update.
pub fn solve_element_game(
    alg: &FiniteAlgebra,
    a: &Element,
    rounds: usize,
    opts: ElementGameOptions,
) -> Result<ElementSolution> {
    let d = alg.dim();
    let start = crate::games::network::initial_network(alg, a, d)?;
    let (candidates, restricted) = element_candidates(alg, &opts);
    let mut solver = Solver {
        alg,
        dim: d,
        poly: alg.signature().has_transpositions(),
        candidates,
        restricted,
        memo: HashMap::new(),
        leaf_memo: HashMap::new(),
        budget_hit: false,
        budget: opts.position_budget,
    };
    let outcome = solver.wins(&start, rounds);
    match outcome {
        Ok(true) => Ok(ElementSolution {
            verdict: GameVerdict {
                winner: Winner::Exists,
                rounds: Rounds::Finite(rounds),
                restricted_forall: solver.restricted,
                note: None,
            },
            start,
            rounds,
            certificate: None,
        }),
        Ok(false) => {
            let cert = match solver.certificate(&start, rounds)? {
                TreeNode::Inner(t) => Some(t),
                TreeNode::Broken => None,
            };
            Ok(ElementSolution {
                verdict: GameVerdict {
                    winner: Winner::Forall,
                    rounds: Rounds::Finite(rounds),
                    restricted_forall: solver.restricted,
                    note: None,
                },
                start,
                rounds,
                certificate: cert,
            })
        }
        Err(AlcError::Budget(msg)) => Ok(ElementSolution {
            verdict: GameVerdict {
                winner: Winner::Unknown,
                rounds: Rounds::Finite(rounds),
                restricted_forall: solver.restricted,
                note: Some(format!("unknown (budget): {msg}")),
            },
            start,
            rounds,
            certificate: None,
        }),
        Err(e) => Err(e),
    }
}

/// Replay an opponent certificate: every leaf must fail the network clauses
/// and every inner node must carry a move whose two responses are refuted by
/// the sub-certificates.
pub fn replay_element(
    alg: &FiniteAlgebra,
    start: &PreNetwork,
    rounds: usize,
    cert: &MoveTree,
) -> Result<bool> {
    fn node_ok(
        alg: &FiniteAlgebra,
        n: &PreNetwork,
        rounds: usize,
        node: &TreeNode,
    ) -> Result<bool> {
        match node {
            TreeNode::Broken => {
                if rounds != 0 {
                    return Ok(false);
                }
                Ok(!validate_network(alg, n)?.is_network())
            }
            TreeNode::Inner(tree) => {
                if rounds == 0 {
                    return Ok(false);
                }
                let element_of = |bits: &[usize]| {
                    Element::from_bits(alg.atom_count(), bits.iter().copied())
                };
                let (accept, reject) = match &tree.mv {
                    ElementMove::Cyl {
                        index,
                        tuple,
                        element,
                    } => cyl_updates(alg, n, *index, tuple, &element_of(element)),
                    ElementMove::Poly {
                        i,
                        j,
                        tuple,
                        element,
                    } => poly_updates(alg, n, *i, *j, tuple, &element_of(element))?,
                };
                Ok(node_ok(alg, &accept, rounds - 1, &tree.accept)?
                    && node_ok(alg, &reject, rounds - 1, &tree.reject)?)
            }
        }
    }
    node_ok(alg, start, rounds, &TreeNode::Inner(cert.clone()))
}
