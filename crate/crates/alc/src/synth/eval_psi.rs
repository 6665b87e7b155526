//! Semantic evaluation of the recursive game formulas without materializing
//! them: labels are evaluated per network, the quantifier sweeps the algebra
//! elements, and results are memoized on the ground labelled network (no
//! node renaming — the game solver's canonicalization stays independent).

use std::collections::{BTreeMap, HashMap};

use crate::algebra::FiniteAlgebra;
use crate::element::Element;
use crate::error::Result;
use crate::games::unrank;
use crate::synth::term_network::{in_out, moves_of, TermNetwork};
use crate::termlang::eval_term;

#[derive(Clone, PartialEq, Eq, Hash)]
struct GroundNet {
    dim: usize,
    nodes: usize,
    labels: Vec<Element>,
}

impl GroundNet {
    fn label(&self, tuple: &[usize]) -> &Element {
        &self.labels[crate::games::rank(tuple, self.nodes)]
    }

    fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.labels.len()).map(|r| unrank(r, self.nodes, self.dim))
    }
}

fn ground(
    alg: &FiniteAlgebra,
    n: &TermNetwork,
    env: &BTreeMap<String, Element>,
) -> Result<GroundNet> {
    let mut labels = Vec::with_capacity(n.nodes.pow(n.dim as u32));
    for tuple in n.tuples() {
        labels.push(eval_term(alg, n.label(&tuple), env)?);
    }
    Ok(GroundNet {
        dim: n.dim,
        nodes: n.nodes,
        labels,
    })
}

/// Evaluate the four clause families of the network formula on a ground
/// network, with short-circuiting. This mirrors the formula construction
/// conjunct by conjunct.
fn cnet_holds(alg: &FiniteAlgebra, g: &GroundNet) -> Result<bool> {
    let d = g.dim;
    let v = g.nodes;
    for tuple in g.tuples() {
        for i in 0..d {
            for j in 0..d {
                if i != j && tuple[i] == tuple[j] && !g.label(&tuple).le(&alg.diagonal(i, j)?) {
                    return Ok(false);
                }
            }
        }
    }
    for tuple in g.tuples() {
        for i in 0..d {
            let mut other = tuple.clone();
            for x in 0..v {
                other[i] = x;
                if !g.label(&tuple).meets(&alg.cyl(i, g.label(&other))) {
                    return Ok(false);
                }
            }
        }
    }
    for tuple in g.tuples() {
        for i in 0..d {
            for j in i + 1..d {
                let mut swapped = tuple.clone();
                swapped.swap(i, j);
                if !g
                    .label(&tuple)
                    .meets(&alg.transp_el(i, j, g.label(&swapped))?)
                {
                    return Ok(false);
                }
            }
        }
    }
    for tuple in g.tuples() {
        for i in 0..d {
            let mut other = tuple.clone();
            for yi in 0..v {
                other[i] = yi;
                if g.label(&tuple).meets(g.label(&other)) {
                    continue;
                }
                for j in 0..d {
                    for k in 0..d {
                        if j == k && tuple[i] != yi {
                            continue;
                        }
                        let djk = alg.diagonal(j, k)?;
                        let free: Vec<usize> = (0..d).filter(|&p| p != j && p != k).collect();
                        for c in 0..v.pow(free.len() as u32) {
                            let values = unrank(c, v, free.len());
                            let mut z = vec![0usize; d];
                            z[j] = tuple[i];
                            z[k] = yi;
                            for (slot, &p) in free.iter().enumerate() {
                                z[p] = values[slot];
                            }
                            if g.label(&z).le(&djk) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Semantic evaluator for the game formulas with a memo shared across
/// queries on one algebra. Results are keyed on the ground labelled network
/// and the remaining depth.
pub struct PsiEvaluator<'a> {
    alg: &'a FiniteAlgebra,
    memo: HashMap<(Vec<u64>, usize), bool>,
}

impl<'a> PsiEvaluator<'a> {
    pub fn new(alg: &'a FiniteAlgebra) -> Self {
        PsiEvaluator {
            alg,
            memo: HashMap::new(),
        }
    }

    pub fn eval(
        &mut self,
        n: &TermNetwork,
        depth: usize,
        env: &BTreeMap<String, Element>,
    ) -> Result<bool> {
        eval_rec(self.alg, n, depth, &mut env.clone(), &mut self.memo)
    }
}

/// Semantic value of the depth-`n` game formula of a term network under an
/// assignment. Equals evaluating the materialized formula, without paying
/// for its size.
pub fn eval_psi(
    alg: &FiniteAlgebra,
    n: &TermNetwork,
    depth: usize,
    env: &BTreeMap<String, Element>,
) -> Result<bool> {
    PsiEvaluator::new(alg).eval(n, depth, env)
}

fn ground_key(g: &GroundNet) -> Vec<u64> {
    let mut key = vec![g.nodes as u64, g.dim as u64];
    for e in &g.labels {
        key.extend(crate::games::element_words(e));
    }
    key
}

fn eval_rec(
    alg: &FiniteAlgebra,
    n: &TermNetwork,
    depth: usize,
    env: &mut BTreeMap<String, Element>,
    memo: &mut HashMap<(Vec<u64>, usize), bool>,
) -> Result<bool> {
    let g = ground(alg, n, env)?;
    let key = (ground_key(&g), depth);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let result = if depth == 0 {
        cnet_holds(alg, &g)?
    } else {
        let var = format!("y{depth}");
        let tau = crate::termlang::TermAst::var(&var);
        let saved = env.get(&var).cloned();
        let mut all = true;
        'outer: for b in alg.elements() {
            env.insert(var.clone(), b);
            for mv in moves_of(n, alg.signature().has_transpositions()) {
                let (inn, out) = in_out(n, &mv, &tau);
                if !eval_rec(alg, &inn, depth - 1, env, memo)?
                    && !eval_rec(alg, &out, depth - 1, env, memo)?
                {
                    all = false;
                    break 'outer;
                }
            }
        }
        match saved {
            Some(x) => {
                env.insert(var, x);
            }
            None => {
                env.remove(&var);
            }
        }
        all
    };
    memo.insert(key, result);
    Ok(result)
}
