use std::collections::BTreeSet;

/// Abstract syntax of the term language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermAst {
    Var(String),
    Zero,
    One,
    Ident,
    Diag(usize, usize),
    Join(Box<TermAst>, Box<TermAst>),
    Meet(Box<TermAst>, Box<TermAst>),
    Compl(Box<TermAst>),
    Cyl(usize, Box<TermAst>),
    Sub(usize, usize, Box<TermAst>),
    Transp(usize, usize, Box<TermAst>),
    Comp(Box<TermAst>, Box<TermAst>),
    Conv(Box<TermAst>),
}

impl TermAst {
    pub fn join(l: TermAst, r: TermAst) -> TermAst {
        TermAst::Join(Box::new(l), Box::new(r))
    }

    pub fn meet(l: TermAst, r: TermAst) -> TermAst {
        TermAst::Meet(Box::new(l), Box::new(r))
    }

    pub fn compl(t: TermAst) -> TermAst {
        TermAst::Compl(Box::new(t))
    }

    pub fn cyl(i: usize, t: TermAst) -> TermAst {
        TermAst::Cyl(i, Box::new(t))
    }

    pub fn sub(i: usize, j: usize, t: TermAst) -> TermAst {
        TermAst::Sub(i, j, Box::new(t))
    }

    pub fn transp(i: usize, j: usize, t: TermAst) -> TermAst {
        TermAst::Transp(i, j, Box::new(t))
    }

    pub fn comp(l: TermAst, r: TermAst) -> TermAst {
        TermAst::Comp(Box::new(l), Box::new(r))
    }

    pub fn conv(t: TermAst) -> TermAst {
        TermAst::Conv(Box::new(t))
    }

    pub fn var(name: impl Into<String>) -> TermAst {
        TermAst::Var(name.into())
    }

    /// The three-step substitution cycle `s(k,i) s(i,j) s(j,k) x` used for
    /// converse and the merry-go-round equations.
    pub fn cycle_sub(k: usize, i: usize, j: usize, x: TermAst) -> TermAst {
        TermAst::sub(k, i, TermAst::sub(i, j, TermAst::sub(j, k, x)))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            TermAst::Var(v) => {
                out.insert(v.clone());
            }
            TermAst::Join(l, r) | TermAst::Meet(l, r) | TermAst::Comp(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            TermAst::Compl(t)
            | TermAst::Cyl(_, t)
            | TermAst::Sub(_, _, t)
            | TermAst::Transp(_, _, t)
            | TermAst::Conv(t) => t.collect_vars(out),
            _ => {}
        }
    }

    /// Number of occurrences of a variable.
    pub fn occurrences(&self, var: &str) -> usize {
        match self {
            TermAst::Var(v) => usize::from(v == var),
            TermAst::Join(l, r) | TermAst::Meet(l, r) | TermAst::Comp(l, r) => {
                l.occurrences(var) + r.occurrences(var)
            }
            TermAst::Compl(t)
            | TermAst::Cyl(_, t)
            | TermAst::Sub(_, _, t)
            | TermAst::Transp(_, _, t)
            | TermAst::Conv(t) => t.occurrences(var),
            _ => 0,
        }
    }

    /// True when the term, seen as a function of `var`, is completely
    /// additive: the variable occurs exactly once and only below additive
    /// formers (join, meet-with-constant, the tabled unary operators, and
    /// composition). A complement above the occurrence destroys the
    /// property.
    pub fn additive_in(&self, var: &str) -> bool {
        if self.occurrences(var) != 1 {
            return false;
        }
        fn path_additive(t: &TermAst, var: &str) -> bool {
            match t {
                TermAst::Var(v) => v == var,
                TermAst::Join(l, r) | TermAst::Comp(l, r) | TermAst::Meet(l, r) => {
                    if l.occurrences(var) == 1 {
                        path_additive(l, var)
                    } else {
                        path_additive(r, var)
                    }
                }
                TermAst::Cyl(_, t)
                | TermAst::Sub(_, _, t)
                | TermAst::Transp(_, _, t)
                | TermAst::Conv(t) => path_additive(t, var),
                TermAst::Compl(_) => false,
                _ => false,
            }
        }
        path_additive(self, var)
    }

    pub fn size(&self) -> usize {
        match self {
            TermAst::Join(l, r) | TermAst::Meet(l, r) | TermAst::Comp(l, r) => {
                1 + l.size() + r.size()
            }
            TermAst::Compl(t)
            | TermAst::Cyl(_, t)
            | TermAst::Sub(_, _, t)
            | TermAst::Transp(_, _, t)
            | TermAst::Conv(t) => 1 + t.size(),
            _ => 1,
        }
    }
}

/// An equation between two terms with an ordered free-variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: TermAst,
    pub rhs: TermAst,
    pub variables: Vec<String>,
}

impl Equation {
    pub fn new(lhs: TermAst, rhs: TermAst) -> Equation {
        let mut vars: BTreeSet<String> = lhs.free_vars();
        vars.extend(rhs.free_vars());
        Equation {
            lhs,
            rhs,
            variables: vars.into_iter().collect(),
        }
    }
}
