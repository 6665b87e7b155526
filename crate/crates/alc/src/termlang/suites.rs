//! Named axiom suites: the cylindric axioms C1-C7, the quasipolyadic
//! equality axioms 1-12, a standard relation-algebra base, and the
//! merry-go-round identities.
//!
//! Substitution is everywhere the derived operator `s(i,j)x = c_i(d_ij . x)`
//! (identity when `i = j`); the merry-go-round cycle is
//! `ks(k,i,j) = s(k,i) s(i,j) s(j,k)`.

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{AlcError, Result};
use crate::termlang::ast::{Equation, TermAst};
use crate::termlang::check::{check_equation, CheckOptions, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Ca,
    Qpea,
    Ra,
    Mgr,
}

impl std::str::FromStr for SuiteKind {
    type Err = AlcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ca" => Ok(SuiteKind::Ca),
            "qpea" => Ok(SuiteKind::Qpea),
            "ra" => Ok(SuiteKind::Ra),
            "mgr" => Ok(SuiteKind::Mgr),
            other => Err(AlcError::InvalidParameter(format!("unknown suite {other}"))),
        }
    }
}

/// One axiom instance with its verdict. `note` carries provenance caveats:
/// the relation-algebra base is standard background, and the four-index
/// merry-go-round schema is recorded as ambiguous.
#[derive(Clone, Debug)]
pub struct SuiteItem {
    pub name: String,
    pub equation: Equation,
    pub note: Option<&'static str>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub items: Vec<SuiteItem>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.verdict.holds())
    }

    pub fn first_failure(&self) -> Option<&SuiteItem> {
        self.items.iter().find(|i| !i.verdict.holds())
    }
}

fn x() -> TermAst {
    TermAst::var("x")
}

fn y() -> TermAst {
    TermAst::var("y")
}

fn le(l: TermAst, r: TermAst) -> Equation {
    Equation::new(TermAst::join(l, r.clone()), r)
}

/// C1-C7 instantiated over all index tuples below the dimension.
pub fn ca_axioms(dim: usize) -> Vec<(String, Equation)> {
    let mut out = Vec::new();
    for i in 0..dim {
        out.push((
            format!("C1({i})"),
            Equation::new(TermAst::cyl(i, TermAst::Zero), TermAst::Zero),
        ));
        out.push((format!("C2({i})"), le(x(), TermAst::cyl(i, x()))));
        out.push((
            format!("C3({i})"),
            Equation::new(
                TermAst::cyl(i, TermAst::meet(x(), TermAst::cyl(i, y()))),
                TermAst::meet(TermAst::cyl(i, x()), TermAst::cyl(i, y())),
            ),
        ));
    }
    for i in 0..dim {
        for j in i + 1..dim {
            out.push((
                format!("C4({i},{j})"),
                Equation::new(
                    TermAst::cyl(i, TermAst::cyl(j, x())),
                    TermAst::cyl(j, TermAst::cyl(i, x())),
                ),
            ));
        }
    }
    for i in 0..dim {
        out.push((
            format!("C5({i})"),
            Equation::new(TermAst::Diag(i, i), TermAst::One),
        ));
    }
    for i in 0..dim {
        for j in 0..dim {
            for mu in 0..dim {
                if i != j && i != mu {
                    out.push((
                        format!("C6({i},{j},{mu})"),
                        Equation::new(
                            TermAst::Diag(j, mu),
                            TermAst::cyl(i, TermAst::meet(TermAst::Diag(j, i), TermAst::Diag(i, mu))),
                        ),
                    ));
                }
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                out.push((
                    format!("C7({i},{j})"),
                    Equation::new(
                        TermAst::meet(
                            TermAst::cyl(i, TermAst::meet(TermAst::Diag(i, j), x())),
                            TermAst::cyl(i, TermAst::meet(TermAst::Diag(i, j), TermAst::compl(x()))),
                        ),
                        TermAst::Zero,
                    ),
                ));
            }
        }
    }
    out
}

/// The quasipolyadic equality axioms 1-12 over the derived substitutions.
pub fn qpea_axioms(dim: usize) -> Vec<(String, Equation)> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            out.push((
                format!("Q1({i},{j})"),
                Equation::new(TermAst::transp(i, j, x()), TermAst::transp(j, i, x())),
            ));
        }
        out.push((
            format!("Q1({i},{i})"),
            Equation::new(TermAst::transp(i, i, x()), x()),
        ));
    }
    for i in 0..dim {
        out.push((format!("Q2({i})"), le(x(), TermAst::cyl(i, x()))));
        out.push((
            format!("Q3({i})"),
            Equation::new(
                TermAst::cyl(i, TermAst::join(x(), y())),
                TermAst::join(TermAst::cyl(i, x()), TermAst::cyl(i, y())),
            ),
        ));
    }
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            out.push((
                format!("Q4({i},{j})"),
                Equation::new(TermAst::sub(i, j, TermAst::cyl(i, x())), TermAst::cyl(i, x())),
            ));
            out.push((
                format!("Q5({i},{j})"),
                Equation::new(
                    TermAst::cyl(i, TermAst::sub(i, j, x())),
                    TermAst::sub(i, j, x()),
                ),
            ));
            for k in 0..dim {
                if k != i && k != j {
                    out.push((
                        format!("Q6({i},{j},{k})"),
                        Equation::new(
                            TermAst::sub(i, j, TermAst::cyl(k, x())),
                            TermAst::cyl(k, TermAst::sub(i, j, x())),
                        ),
                    ));
                }
            }
            out.push((
                format!("Q7s({i},{j})"),
                Equation::new(
                    TermAst::sub(i, j, TermAst::compl(x())),
                    TermAst::compl(TermAst::sub(i, j, x())),
                ),
            ));
            out.push((
                format!("Q11({i},{j})"),
                Equation::new(TermAst::sub(i, j, TermAst::Diag(i, j)), TermAst::One),
            ));
            out.push((
                format!("Q12({i},{j})"),
                le(TermAst::meet(x(), TermAst::Diag(i, j)), TermAst::sub(i, j, x())),
            ));
            out.push((
                format!("Q10({i},{j})"),
                Equation::new(
                    TermAst::transp(i, j, TermAst::sub(j, i, x())),
                    TermAst::sub(i, j, x()),
                ),
            ));
        }
    }
    for i in 0..dim {
        for j in i + 1..dim {
            out.push((
                format!("Q7p({i},{j})"),
                Equation::new(
                    TermAst::transp(i, j, TermAst::compl(x())),
                    TermAst::compl(TermAst::transp(i, j, x())),
                ),
            ));
            out.push((
                format!("Q8({i},{j})"),
                Equation::new(TermAst::transp(i, j, TermAst::transp(i, j, x())), x()),
            ));
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                if i != j && j != k && i != k {
                    out.push((
                        format!("Q9({i},{j},{k})"),
                        Equation::new(
                            TermAst::transp(i, j, TermAst::transp(i, k, x())),
                            TermAst::transp(j, k, TermAst::transp(i, j, x())),
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// Standard relation-algebra equational base: associativity, additivity,
/// identity, converse laws and the triangle law.
pub fn ra_axioms() -> Vec<(String, Equation)> {
    let z = TermAst::var("z");
    vec![
        (
            "R1-assoc".into(),
            Equation::new(
                TermAst::comp(x(), TermAst::comp(y(), z.clone())),
                TermAst::comp(TermAst::comp(x(), y()), z.clone()),
            ),
        ),
        (
            "R2-additive".into(),
            Equation::new(
                TermAst::comp(TermAst::join(x(), y()), z.clone()),
                TermAst::join(TermAst::comp(x(), z.clone()), TermAst::comp(y(), z.clone())),
            ),
        ),
        (
            "R3-identity-right".into(),
            Equation::new(TermAst::comp(x(), TermAst::Ident), x()),
        ),
        (
            "R3-identity-left".into(),
            Equation::new(TermAst::comp(TermAst::Ident, x()), x()),
        ),
        (
            "R4-conv-involution".into(),
            Equation::new(TermAst::conv(TermAst::conv(x())), x()),
        ),
        (
            "R5-conv-additive".into(),
            Equation::new(
                TermAst::conv(TermAst::join(x(), y())),
                TermAst::join(TermAst::conv(x()), TermAst::conv(y())),
            ),
        ),
        (
            "R6-conv-comp".into(),
            Equation::new(
                TermAst::conv(TermAst::comp(x(), y())),
                TermAst::comp(TermAst::conv(y()), TermAst::conv(x())),
            ),
        ),
        (
            "R7-triangle".into(),
            Equation::new(
                TermAst::meet(
                    TermAst::comp(TermAst::conv(x()), TermAst::compl(TermAst::comp(x(), y()))),
                    y(),
                ),
                TermAst::Zero,
            ),
        ),
    ]
}

/// The merry-go-round equations. For each `k < 3` (with `{l,m}` the other
/// two indices) the suite carries the swap form and the idempotence form;
/// dimensions above 3 add the four-index schema, marked ambiguous.
pub fn mgr_axioms(dim: usize) -> Vec<(String, Equation, Option<&'static str>)> {
    let mut out = Vec::new();
    let ck = |k: usize| TermAst::cyl(k, x());
    for k in 0..3 {
        let rest: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        let (l, m) = (rest[0], rest[1]);
        out.push((
            format!("MGR{k}"),
            Equation::new(
                TermAst::cycle_sub(k, l, m, ck(k)),
                TermAst::cycle_sub(k, m, l, ck(k)),
            ),
            None,
        ));
        out.push((
            format!("MGR{k}-idem"),
            Equation::new(
                TermAst::cycle_sub(k, l, m, TermAst::cycle_sub(k, l, m, ck(k))),
                ck(k),
            ),
            None,
        ));
    }
    if dim >= 4 {
        for k in 0..dim {
            for l in 0..dim {
                for m in 0..dim {
                    for n in 0..dim {
                        let distinct: std::collections::BTreeSet<usize> =
                            [k, l, m, n].into_iter().collect();
                        if distinct.len() != 4 {
                            continue;
                        }
                        out.push((
                            format!("MGR4({k};{l},{m},{n})"),
                            Equation::new(
                                TermAst::cycle_sub(k, l, m, TermAst::cycle_sub(k, m, n, ck(k))),
                                TermAst::cycle_sub(k, n, l, TermAst::cycle_sub(k, l, m, ck(k))),
                            ),
                            Some("paper-ambiguous"),
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Run a named suite. Signature compatibility is checked up front; each
/// axiom instance gets its own verdict.
pub fn axiom_suite(alg: &FiniteAlgebra, suite: SuiteKind, opts: CheckOptions) -> Result<SuiteReport> {
    let dim = alg.dim();
    let items: Vec<(String, Equation, Option<&'static str>)> = match suite {
        SuiteKind::Ca => {
            if !alg.signature().has_diagonals() {
                return Err(AlcError::SignatureMismatch {
                    op: "CA suite".into(),
                    sig: alg.signature().name(),
                });
            }
            ca_axioms(dim).into_iter().map(|(n, e)| (n, e, None)).collect()
        }
        SuiteKind::Qpea => {
            if !matches!(alg.signature(), Signature::Qpea(_)) {
                return Err(AlcError::SignatureMismatch {
                    op: "QPEA suite".into(),
                    sig: alg.signature().name(),
                });
            }
            qpea_axioms(dim).into_iter().map(|(n, e)| (n, e, None)).collect()
        }
        SuiteKind::Ra => {
            if alg.signature() != Signature::Ra {
                return Err(AlcError::SignatureMismatch {
                    op: "RA suite".into(),
                    sig: alg.signature().name(),
                });
            }
            ra_axioms()
                .into_iter()
                .map(|(n, e)| (n, e, Some("standard")))
                .collect()
        }
        SuiteKind::Mgr => {
            if !alg.signature().has_diagonals() || dim < 3 {
                return Err(AlcError::SignatureMismatch {
                    op: "MGR suite".into(),
                    sig: alg.signature().name(),
                });
            }
            mgr_axioms(dim)
        }
    };
    let mut report = SuiteReport {
        suite,
        items: Vec::new(),
    };
    for (name, equation, note) in items {
        let verdict = check_equation(alg, &equation, opts)?;
        report.items.push(SuiteItem {
            name,
            equation,
            note,
            verdict,
        });
    }
    Ok(report)
}
