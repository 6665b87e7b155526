//! Canonical printer: single-digit shorthands, single spaces around binary
//! operators, parentheses exactly where re-parsing needs them. Printing then
//! parsing reproduces the tree, and printing is idempotent on parsed text.

use crate::termlang::ast::TermAst;

fn precedence(t: &TermAst) -> u8 {
    match t {
        TermAst::Join(..) => 1,
        TermAst::Meet(..) => 2,
        TermAst::Comp(..) => 3,
        _ => 4,
    }
}

pub fn print_term(t: &TermAst) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_child(child: &TermAst, parent_prec: u8, is_right: bool, out: &mut String) {
    let cp = precedence(child);
    // binary operators associate to the left: a right child at equal
    // precedence needs parentheses to survive the round trip
    let need = cp < parent_prec || (is_right && cp == parent_prec);
    if need {
        out.push('(');
        write_term(child, out);
        out.push(')');
    } else {
        write_term(child, out);
    }
}

fn index_pair(i: usize, j: usize) -> String {
    if i <= 9 && j <= 9 {
        format!("{i}{j}")
    } else {
        format!("({i},{j})")
    }
}

fn write_term(t: &TermAst, out: &mut String) {
    match t {
        TermAst::Var(v) => out.push_str(v),
        TermAst::Zero => out.push('0'),
        TermAst::One => out.push('1'),
        TermAst::Ident => out.push_str("id"),
        TermAst::Diag(i, j) => {
            out.push('d');
            out.push_str(&index_pair(*i, *j));
        }
        TermAst::Join(l, r) => {
            write_child(l, 1, false, out);
            out.push_str(" + ");
            write_child(r, 1, true, out);
        }
        TermAst::Meet(l, r) => {
            write_child(l, 2, false, out);
            out.push_str(" . ");
            write_child(r, 2, true, out);
        }
        TermAst::Comp(l, r) => {
            write_child(l, 3, false, out);
            out.push_str(" ; ");
            write_child(r, 3, true, out);
        }
        TermAst::Compl(inner) => {
            out.push('-');
            write_child(inner, 4, false, out);
        }
        TermAst::Cyl(i, inner) => {
            if *i <= 9 {
                out.push_str(&format!("c{i}("));
            } else {
                out.push_str(&format!("c({i})("));
            }
            write_term(inner, out);
            out.push(')');
        }
        TermAst::Sub(i, j, inner) => {
            out.push('s');
            out.push_str(&index_pair(*i, *j));
            out.push('(');
            write_term(inner, out);
            out.push(')');
        }
        TermAst::Transp(i, j, inner) => {
            out.push('p');
            out.push_str(&index_pair(*i, *j));
            out.push('(');
            write_term(inner, out);
            out.push(')');
        }
        TermAst::Conv(inner) => {
            out.push_str("conv(");
            write_term(inner, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termlang::parser::parse_term;

    #[test]
    fn roundtrip_samples() {
        for text in [
            "x + y . z",
            "(x + y) . z",
            "x ; (y ; z)",
            "-(x + y)",
            "-x + y",
            "c0(d01 . x)",
            "s01(c0(x))",
            "conv(x ; y)",
            "p01(x) . d(10,11)",
            "x + (y + z)",
        ] {
            let t = parse_term(text).unwrap();
            let printed = print_term(&t);
            let back = parse_term(&printed).unwrap();
            assert_eq!(t, back, "{text} -> {printed}");
            assert_eq!(print_term(&back), printed);
        }
    }
}
