//! First-order formulas over term (in)equations, the network formula, the
//! recursive game formulas and the closed sentences, with budget-guarded
//! construction and evaluation.

use std::collections::BTreeMap;

use crate::algebra::FiniteAlgebra;
use crate::element::Element;
use crate::error::{AlcError, Result};
use crate::synth::term_network::{in_out, j_x, moves_of, TermNetwork};
use crate::termlang::{eval_term, print_term, TermAst};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Eq(TermAst, TermAst),
    Neq(TermAst, TermAst),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    /// `l <= r` encoded as the equation `l + r = r`.
    pub fn le(l: TermAst, r: TermAst) -> Formula {
        Formula::Eq(TermAst::join(l, r.clone()), r)
    }

    pub fn nonzero_meet(l: TermAst, r: TermAst) -> Formula {
        Formula::Neq(TermAst::meet(l, r), TermAst::Zero)
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Neq(..) => 1,
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Not(f) => 1 + f.size(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
        }
    }

    pub fn free_vars(&self) -> std::collections::BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut std::collections::BTreeSet<String>) {
            match f {
                Formula::Eq(l, r) | Formula::Neq(l, r) => {
                    for v in l.free_vars().union(&r.free_vars()) {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
                Formula::And(fs) | Formula::Or(fs) => {
                    for g in fs {
                        walk(g, bound, out);
                    }
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Forall(v, g) | Formula::Exists(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = std::collections::BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Atomic subformula count, the regression measure for generated
    /// formulas.
    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Neq(..) => 1,
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::atom_count).sum(),
            Formula::Not(f) => f.atom_count(),
            Formula::Implies(a, b) => a.atom_count() + b.atom_count(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.atom_count(),
        }
    }
}

/// The conjunction of the four network clause families instantiated over
/// the tuples of `n`: diagonal bounds on repeating tuples, cylindrifier
/// compatibility, polyadic compatibility, and the diagonal-merge
/// implication.
pub fn cnet_formula(n: &TermNetwork, d: usize) -> Formula {
    assert_eq!(n.dim, d);
    let v = n.nodes;
    let mut conjuncts = Vec::new();
    for tuple in n.tuples() {
        for i in 0..d {
            for j in 0..d {
                if i != j && tuple[i] == tuple[j] {
                    conjuncts.push(Formula::le(n.label(&tuple).clone(), TermAst::Diag(i, j)));
                }
            }
        }
    }
    for tuple in n.tuples() {
        for i in 0..d {
            let mut other = tuple.clone();
            for x in 0..v {
                other[i] = x;
                conjuncts.push(Formula::nonzero_meet(
                    n.label(&tuple).clone(),
                    TermAst::cyl(i, n.label(&other).clone()),
                ));
            }
        }
    }
    for tuple in n.tuples() {
        for i in 0..d {
            for j in i + 1..d {
                let mut swapped = tuple.clone();
                swapped.swap(i, j);
                conjuncts.push(Formula::nonzero_meet(
                    n.label(&tuple).clone(),
                    TermAst::transp(i, j, n.label(&swapped).clone()),
                ));
            }
        }
    }
    for tuple in n.tuples() {
        for i in 0..d {
            let mut other = tuple.clone();
            for yi in 0..v {
                other[i] = yi;
                for j in 0..d {
                    for k in 0..d {
                        if j == k && tuple[i] != yi {
                            continue;
                        }
                        let free: Vec<usize> = (0..d).filter(|&p| p != j && p != k).collect();
                        for c in 0..v.pow(free.len() as u32) {
                            let values = crate::games::unrank(c, v, free.len());
                            let mut z = vec![0usize; d];
                            z[j] = tuple[i];
                            z[k] = yi;
                            for (slot, &p) in free.iter().enumerate() {
                                z[p] = values[slot];
                            }
                            conjuncts.push(Formula::Implies(
                                Box::new(Formula::le(n.label(&z).clone(), TermAst::Diag(j, k))),
                                Box::new(Formula::nonzero_meet(
                                    n.label(&tuple).clone(),
                                    n.label(&other).clone(),
                                )),
                            ));
                        }
                    }
                }
            }
        }
    }
    Formula::And(conjuncts)
}

/// The recursive game formula: depth zero is the network formula; each
/// further level universally quantifies one fresh variable over the
/// conjunction, across all moves, of the disjunction of the formulas of the
/// two responses. Construction fails once the node budget is exceeded.
pub fn psi_formula(n: &TermNetwork, depth: usize, d: usize, node_budget: usize) -> Result<Formula> {
    let mut used = 0usize;
    build_psi(n, depth, d, node_budget, &mut used)
}

fn build_psi(
    n: &TermNetwork,
    depth: usize,
    d: usize,
    budget: usize,
    used: &mut usize,
) -> Result<Formula> {
    if depth == 0 {
        let f = cnet_formula(n, d);
        *used += f.size();
        if *used > budget {
            return Err(AlcError::Budget(format!(
                "formula exceeds the {budget}-node budget"
            )));
        }
        return Ok(f);
    }
    let var = format!("y{depth}");
    let tau = TermAst::var(&var);
    let mut conjuncts = Vec::new();
    for mv in moves_of(n, true) {
        let (inn, out) = in_out(n, &mv, &tau);
        let fi = build_psi(&inn, depth - 1, d, budget, used)?;
        let fo = build_psi(&out, depth - 1, d, budget, used)?;
        conjuncts.push(Formula::Or(vec![fi, fo]));
        *used += 1;
    }
    Ok(Formula::Forall(var, Box::new(Formula::And(conjuncts))))
}

/// The closed sentence: every non-zero element heads a winning start.
pub fn phi_sentence(depth: usize, d: usize, node_budget: usize) -> Result<Formula> {
    let psi = psi_formula(&j_x(d, "x"), depth, d, node_budget)?;
    Ok(Formula::Forall(
        "x".into(),
        Box::new(Formula::Implies(
            Box::new(Formula::Neq(TermAst::var("x"), TermAst::Zero)),
            Box::new(psi),
        )),
    ))
}

/// Plain first-order evaluation: quantifiers sweep every element of the
/// algebra; the step budget turns runaway evaluations into an explicit
/// error.
pub fn eval_formula(
    alg: &FiniteAlgebra,
    f: &Formula,
    env: &BTreeMap<String, Element>,
    step_budget: u64,
) -> Result<bool> {
    let mut steps = step_budget;
    eval_rec(alg, f, &mut env.clone(), &mut steps)
}

fn eval_rec(
    alg: &FiniteAlgebra,
    f: &Formula,
    env: &mut BTreeMap<String, Element>,
    steps: &mut u64,
) -> Result<bool> {
    if *steps == 0 {
        return Err(AlcError::Budget("formula evaluation step budget".into()));
    }
    *steps -= 1;
    match f {
        Formula::Eq(l, r) => Ok(eval_term(alg, l, env)? == eval_term(alg, r, env)?),
        Formula::Neq(l, r) => Ok(eval_term(alg, l, env)? != eval_term(alg, r, env)?),
        Formula::And(fs) => {
            for g in fs {
                if !eval_rec(alg, g, env, steps)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_rec(alg, g, env, steps)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Not(g) => Ok(!eval_rec(alg, g, env, steps)?),
        Formula::Implies(a, b) => {
            Ok(!eval_rec(alg, a, env, steps)? || eval_rec(alg, b, env, steps)?)
        }
        Formula::Forall(v, g) => {
            if alg.atom_count() > 20 {
                return Err(AlcError::Budget(
                    "quantifier sweep needs a small algebra".into(),
                ));
            }
            let saved = env.get(v).cloned();
            for x in alg.elements() {
                env.insert(v.clone(), x);
                let ok = eval_rec(alg, g, env, steps)?;
                if !ok {
                    restore(env, v, saved);
                    return Ok(false);
                }
            }
            restore(env, v, saved);
            Ok(true)
        }
        Formula::Exists(v, g) => {
            if alg.atom_count() > 20 {
                return Err(AlcError::Budget(
                    "quantifier sweep needs a small algebra".into(),
                ));
            }
            let saved = env.get(v).cloned();
            for x in alg.elements() {
                env.insert(v.clone(), x);
                let ok = eval_rec(alg, g, env, steps)?;
                if ok {
                    restore(env, v, saved);
                    return Ok(true);
                }
            }
            restore(env, v, saved);
            Ok(false)
        }
    }
}

fn restore(env: &mut BTreeMap<String, Element>, v: &str, saved: Option<Element>) {
    match saved {
        Some(x) => {
            env.insert(v.to_string(), x);
        }
        None => {
            env.remove(v);
        }
    }
}

/// Canonical s-expression text of a formula; terms appear in term-language
/// syntax.
pub fn print_sexpr(f: &Formula) -> String {
    let mut out = String::new();
    write_sexpr(f, &mut out);
    out
}

fn write_sexpr(f: &Formula, out: &mut String) {
    match f {
        Formula::Eq(l, r) => {
            out.push_str("(= ");
            out.push_str(&print_term(l));
            out.push(' ');
            out.push_str(&print_term(r));
            out.push(')');
        }
        Formula::Neq(l, r) => {
            out.push_str("(!= ");
            out.push_str(&print_term(l));
            out.push(' ');
            out.push_str(&print_term(r));
            out.push(')');
        }
        Formula::And(fs) => {
            out.push_str("(and");
            for g in fs {
                out.push(' ');
                write_sexpr(g, out);
            }
            out.push(')');
        }
        Formula::Or(fs) => {
            out.push_str("(or");
            for g in fs {
                out.push(' ');
                write_sexpr(g, out);
            }
            out.push(')');
        }
        Formula::Not(g) => {
            out.push_str("(not ");
            write_sexpr(g, out);
            out.push(')');
        }
        Formula::Implies(a, b) => {
            out.push_str("(=> ");
            write_sexpr(a, out);
            out.push(' ');
            write_sexpr(b, out);
            out.push(')');
        }
        Formula::Forall(v, g) => {
            out.push_str("(forall ");
            out.push_str(v);
            out.push(' ');
            write_sexpr(g, out);
            out.push(')');
        }
        Formula::Exists(v, g) => {
            out.push_str("(exists ");
            out.push_str(v);
            out.push(' ');
            write_sexpr(g, out);
            out.push(')');
        }
    }
}
