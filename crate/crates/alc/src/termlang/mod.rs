//! The term and equation language: parser, printer, evaluator, equation
//! checking with exhaustive/sampled verdicts, and the named axiom suites.

mod ast;
mod check;
mod parser;
mod printer;
pub mod suites;

pub use ast::{Equation, TermAst};
pub use check::{check_equation, CheckOptions, Verdict};
pub use parser::{parse_equation, parse_term};
pub use printer::print_term;

use crate::algebra::{FiniteAlgebra, OperatorSymbol};
use crate::element::Element;
use crate::error::{AlcError, Result};
use std::collections::BTreeMap;

/// Compositional term evaluation over a finite algebra.
pub fn eval_term(
    alg: &FiniteAlgebra,
    ast: &TermAst,
    assignment: &BTreeMap<String, Element>,
) -> Result<Element> {
    match ast {
        TermAst::Var(v) => assignment
            .get(v)
            .cloned()
            .ok_or_else(|| AlcError::UnboundVariable(v.clone())),
        TermAst::Zero => Ok(alg.zero()),
        TermAst::One => Ok(alg.one()),
        TermAst::Ident => alg.apply_operator(&OperatorSymbol::Ident, &[]),
        TermAst::Diag(i, j) => alg.apply_operator(&OperatorSymbol::Diag(*i, *j), &[]),
        TermAst::Join(l, r) => Ok(eval_term(alg, l, assignment)?.join(&eval_term(alg, r, assignment)?)),
        TermAst::Meet(l, r) => Ok(eval_term(alg, l, assignment)?.meet(&eval_term(alg, r, assignment)?)),
        TermAst::Compl(t) => Ok(eval_term(alg, t, assignment)?.complement()),
        TermAst::Cyl(i, t) => {
            let x = eval_term(alg, t, assignment)?;
            alg.apply_operator(&OperatorSymbol::Cyl(*i), &[x])
        }
        TermAst::Sub(i, j, t) => {
            let x = eval_term(alg, t, assignment)?;
            alg.apply_operator(&OperatorSymbol::Sub(*i, *j), &[x])
        }
        TermAst::Transp(i, j, t) => {
            let x = eval_term(alg, t, assignment)?;
            alg.apply_operator(&OperatorSymbol::Transp(*i, *j), &[x])
        }
        TermAst::Comp(l, r) => {
            let x = eval_term(alg, l, assignment)?;
            let y = eval_term(alg, r, assignment)?;
            alg.apply_operator(&OperatorSymbol::Comp, &[x, y])
        }
        TermAst::Conv(t) => {
            let x = eval_term(alg, t, assignment)?;
            alg.apply_operator(&OperatorSymbol::Conv, &[x])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::structures::{named, AtomStructure};

    #[test]
    fn eval_diagonal_and_substitution() {
        let alg =
            make_algebra(&AtomStructure::Pea(named::full_pea_set_structure(2, 3))).unwrap();
        let env = BTreeMap::new();
        let d01 = eval_term(&alg, &parse_term("d01").unwrap(), &env).unwrap();
        assert_eq!(d01, alg.diagonal(0, 1).unwrap());
        // s01(c0(x)) = c0(x)
        let mut env = BTreeMap::new();
        for x in alg.elements() {
            env.insert("x".to_string(), x.clone());
            let lhs = eval_term(&alg, &parse_term("s01(c0(x))").unwrap(), &env).unwrap();
            assert_eq!(lhs, alg.cyl(0, &x));
            let back = eval_term(&alg, &parse_term("p01(p01(x))").unwrap(), &env).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn substitution_definition_matches_table() {
        let alg = make_algebra(&AtomStructure::Ca(named::full_ca_set_structure(2, 3))).unwrap();
        let mut env = BTreeMap::new();
        for x in alg.elements() {
            env.insert("x".to_string(), x);
            for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 1)] {
                let tabled = eval_term(
                    &alg,
                    &TermAst::Sub(i, j, Box::new(TermAst::Var("x".into()))),
                    &env,
                )
                .unwrap();
                let derived = eval_term(
                    &alg,
                    &TermAst::Cyl(
                        i,
                        Box::new(TermAst::Meet(
                            Box::new(TermAst::Diag(i, j)),
                            Box::new(TermAst::Var("x".into())),
                        )),
                    ),
                    &env,
                )
                .unwrap();
                assert_eq!(tabled, derived);
            }
        }
    }

    #[test]
    fn unbound_variable_errors() {
        let alg = make_algebra(&AtomStructure::Ca(named::full_ca_set_structure(2, 3))).unwrap();
        let env = BTreeMap::new();
        assert!(matches!(
            eval_term(&alg, &parse_term("x + 1").unwrap(), &env),
            Err(AlcError::UnboundVariable(_))
        ));
    }

    #[test]
    fn index_overflow_errors() {
        let alg = make_algebra(&AtomStructure::Ca(named::full_ca_set_structure(2, 3))).unwrap();
        let env = BTreeMap::new();
        assert!(eval_term(&alg, &parse_term("c(7)(1)").unwrap(), &env).is_err());
    }
}
