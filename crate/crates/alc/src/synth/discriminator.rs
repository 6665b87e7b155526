//! Translation of universal sentences into equations through the unary
//! discriminator `c0 c1 ... c(d-1) x`, which collapses every non-zero
//! element to the unit in a simple algebra. A universal prenex Boolean
//! combination of equations becomes the single equation `T(matrix) = 1`,
//! where `T` maps an equation `s = t` to the complemented discriminator of
//! the symmetric difference and commutes Boolean connectives onto terms.

use crate::error::{AlcError, Result};
use crate::synth::formula::Formula;
use crate::termlang::{Equation, TermAst};

fn discriminator(d: usize, t: TermAst) -> TermAst {
    let mut out = t;
    for i in (0..d).rev() {
        out = TermAst::cyl(i, out);
    }
    out
}

fn symmetric_difference(s: &TermAst, t: &TermAst) -> TermAst {
    TermAst::join(
        TermAst::meet(s.clone(), TermAst::compl(t.clone())),
        TermAst::meet(t.clone(), TermAst::compl(s.clone())),
    )
}

/// Truth-value term of a quantifier-free formula: `1` in a simple algebra
/// exactly when the formula holds under the assignment.
fn truth_term(f: &Formula, d: usize) -> Result<TermAst> {
    Ok(match f {
        Formula::Eq(s, t) => TermAst::compl(discriminator(d, symmetric_difference(s, t))),
        Formula::Neq(s, t) => discriminator(d, symmetric_difference(s, t)),
        Formula::And(fs) => {
            let mut out = TermAst::One;
            for g in fs {
                out = TermAst::meet(out, truth_term(g, d)?);
            }
            out
        }
        Formula::Or(fs) => {
            let mut out = TermAst::Zero;
            for g in fs {
                out = TermAst::join(out, truth_term(g, d)?);
            }
            out
        }
        Formula::Not(g) => TermAst::compl(truth_term(g, d)?),
        Formula::Implies(a, b) => TermAst::join(
            TermAst::compl(truth_term(a, d)?),
            truth_term(b, d)?,
        ),
        Formula::Forall(..) | Formula::Exists(..) => {
            return Err(AlcError::InvalidParameter(
                "quantifier inside the matrix".into(),
            ))
        }
    })
}

/// Strip a universal prefix closed under the positive connectives,
/// renaming bound variables apart. Existential quantification — and
/// universal quantification under negation — is rejected.
fn strip_universals(f: &Formula, counter: &mut usize, positive: bool) -> Result<Formula> {
    Ok(match f {
        Formula::Forall(v, g) => {
            if !positive {
                return Err(AlcError::InvalidParameter(
                    "universal quantifier in a negative position".into(),
                ));
            }
            *counter += 1;
            let fresh = format!("q{counter}");
            let renamed = rename_formula(g, v, &fresh);
            strip_universals(&renamed, counter, positive)?
        }
        Formula::Exists(..) => {
            return Err(AlcError::InvalidParameter(
                "existential quantifier is not universal-prenexable".into(),
            ))
        }
        Formula::And(fs) => Formula::And(
            fs.iter()
                .map(|g| strip_universals(g, counter, positive))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(fs) => Formula::Or(
            fs.iter()
                .map(|g| strip_universals(g, counter, positive))
                .collect::<Result<_>>()?,
        ),
        Formula::Not(g) => Formula::Not(Box::new(strip_universals(g, counter, !positive)?)),
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(strip_universals(a, counter, !positive)?),
            Box::new(strip_universals(b, counter, positive)?),
        ),
        atomic => atomic.clone(),
    })
}

fn rename_term(t: &TermAst, from: &str, to: &str) -> TermAst {
    match t {
        TermAst::Var(v) if v == from => TermAst::var(to),
        TermAst::Join(l, r) => TermAst::join(rename_term(l, from, to), rename_term(r, from, to)),
        TermAst::Meet(l, r) => TermAst::meet(rename_term(l, from, to), rename_term(r, from, to)),
        TermAst::Comp(l, r) => TermAst::comp(rename_term(l, from, to), rename_term(r, from, to)),
        TermAst::Compl(x) => TermAst::compl(rename_term(x, from, to)),
        TermAst::Cyl(i, x) => TermAst::cyl(*i, rename_term(x, from, to)),
        TermAst::Sub(i, j, x) => TermAst::sub(*i, *j, rename_term(x, from, to)),
        TermAst::Transp(i, j, x) => TermAst::transp(*i, *j, rename_term(x, from, to)),
        TermAst::Conv(x) => TermAst::conv(rename_term(x, from, to)),
        other => other.clone(),
    }
}

fn rename_formula(f: &Formula, from: &str, to: &str) -> Formula {
    match f {
        Formula::Eq(l, r) => Formula::Eq(rename_term(l, from, to), rename_term(r, from, to)),
        Formula::Neq(l, r) => Formula::Neq(rename_term(l, from, to), rename_term(r, from, to)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| rename_formula(g, from, to)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| rename_formula(g, from, to)).collect()),
        Formula::Not(g) => Formula::Not(Box::new(rename_formula(g, from, to))),
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(rename_formula(a, from, to)),
            Box::new(rename_formula(b, from, to)),
        ),
        Formula::Forall(v, g) if v != from => {
            Formula::Forall(v.clone(), Box::new(rename_formula(g, from, to)))
        }
        Formula::Exists(v, g) if v != from => {
            Formula::Exists(v.clone(), Box::new(rename_formula(g, from, to)))
        }
        shadowing => shadowing.clone(),
    }
}

/// Convert a universal sentence over dimension `d` into equations that hold
/// in an algebra exactly when the sentence holds in all its simple factors.
pub fn to_equation(sentence: &Formula, d: usize) -> Result<Vec<Equation>> {
    let mut counter = 0;
    let matrix = strip_universals(sentence, &mut counter, true)?;
    let lhs = truth_term(&matrix, d)?;
    Ok(vec![Equation::new(lhs, TermAst::One)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::structures::{named, AtomStructure};
    use crate::termlang::{check_equation, CheckOptions, Verdict};

    #[test]
    fn tautology_translates_to_valid_equation() {
        let f = Formula::Forall(
            "x".into(),
            Box::new(Formula::Eq(TermAst::var("x"), TermAst::var("x"))),
        );
        let eqs = to_equation(&f, 3).unwrap();
        assert_eq!(eqs.len(), 1);
        let alg = make_algebra(&AtomStructure::Pea(named::full_pea_set_structure(2, 3))).unwrap();
        assert_eq!(
            check_equation(&alg, &eqs[0], CheckOptions::default()).unwrap(),
            Verdict::HoldsExhaustive
        );
    }

    #[test]
    fn rejects_existentials() {
        let f = Formula::Exists(
            "x".into(),
            Box::new(Formula::Eq(TermAst::var("x"), TermAst::Zero)),
        );
        assert!(to_equation(&f, 3).is_err());
    }

    #[test]
    fn nested_universals_renamed_apart() {
        let inner = Formula::Forall(
            "y".into(),
            Box::new(Formula::Eq(
                TermAst::meet(TermAst::var("x"), TermAst::var("y")),
                TermAst::meet(TermAst::var("y"), TermAst::var("x")),
            )),
        );
        let f = Formula::Forall("x".into(), Box::new(Formula::And(vec![inner])));
        let eqs = to_equation(&f, 3).unwrap();
        let alg = make_algebra(&AtomStructure::Pea(named::full_pea_set_structure(2, 3))).unwrap();
        assert!(check_equation(&alg, &eqs[0], CheckOptions::default())
            .unwrap()
            .holds());
    }
}
