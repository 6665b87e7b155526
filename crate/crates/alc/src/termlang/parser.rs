//! Recursive-descent parser for the ASCII term grammar.
//!
//! Precedence, loosest first: `+`, then `.`, then `;`, with complement `-`
//! and the prefix operators binding tightest. Prefix operators take a
//! parenthesized argument: `c(10)(x)`, `s(0,1)(x)`, `p(0,1)(x)`, `d(0,1)`,
//! `conv(x)`; single-digit shorthands `c0`, `s01`, `p01`, `d01` are
//! accepted. Identifiers are variables; names shaped like a shorthand are
//! reserved.

use crate::error::{AlcError, Result};
use crate::termlang::ast::{Equation, TermAst};

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

pub fn parse_term(text: &str) -> Result<TermAst> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let t = p.parse_join()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}

pub fn parse_equation(text: &str) -> Result<Equation> {
    let eq_pos = find_top_level_eq(text.as_bytes())
        .ok_or_else(|| AlcError::Syntax {
            offset: text.len(),
            message: "expected '=' between two terms".into(),
        })?;
    let lhs = parse_term(&text[..eq_pos])?;
    let rhs = parse_term(&text[eq_pos + 1..]).map_err(|e| shift_error(e, eq_pos + 1))?;
    Ok(Equation::new(lhs, rhs))
}

fn find_top_level_eq(text: &[u8]) -> Option<usize> {
    let mut depth = 0usize;
    for (i, &b) in text.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'=' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn shift_error(e: AlcError, by: usize) -> AlcError {
    match e {
        AlcError::Syntax { offset, message } => AlcError::Syntax {
            offset: offset + by,
            message,
        },
        other => other,
    }
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> AlcError {
        AlcError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    fn parse_join(&mut self) -> Result<TermAst> {
        let mut left = self.parse_meet()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let right = self.parse_meet()?;
            left = TermAst::join(left, right);
        }
        Ok(left)
    }

    fn parse_meet(&mut self) -> Result<TermAst> {
        let mut left = self.parse_comp()?;
        while self.peek() == Some(b'.') {
            self.pos += 1;
            let right = self.parse_comp()?;
            left = TermAst::meet(left, right);
        }
        Ok(left)
    }

    fn parse_comp(&mut self) -> Result<TermAst> {
        let mut left = self.parse_unary()?;
        while self.peek() == Some(b';') {
            self.pos += 1;
            let right = self.parse_unary()?;
            left = TermAst::comp(left, right);
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> Result<TermAst> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(TermAst::compl(self.parse_unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.parse_join()?;
                self.eat(b')')?;
                Ok(t)
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(TermAst::Zero)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(TermAst::One)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.parse_word(),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn parse_word(&mut self) -> Result<TermAst> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii");
        match word {
            "id" => return Ok(TermAst::Ident),
            "conv" => {
                self.eat(b'(')?;
                let t = self.parse_join()?;
                self.eat(b')')?;
                return Ok(TermAst::conv(t));
            }
            _ => {}
        }
        // shorthands: c<digit>, d|s|p<digit><digit>, or the long forms
        // c(n)(t), d(i,j), s(i,j)(t), p(i,j)(t)
        let bytes = word.as_bytes();
        if bytes.len() == 1 && matches!(bytes[0], b'c' | b'd' | b's' | b'p') && self.peek() == Some(b'(')
        {
            return self.parse_long_operator(bytes[0], start);
        }
        if bytes.len() == 2 && bytes[0] == b'c' && bytes[1].is_ascii_digit() {
            let i = (bytes[1] - b'0') as usize;
            self.eat(b'(')?;
            let t = self.parse_join()?;
            self.eat(b')')?;
            return Ok(TermAst::cyl(i, t));
        }
        if bytes.len() == 3
            && matches!(bytes[0], b'd' | b's' | b'p')
            && bytes[1].is_ascii_digit()
            && bytes[2].is_ascii_digit()
        {
            let i = (bytes[1] - b'0') as usize;
            let j = (bytes[2] - b'0') as usize;
            match bytes[0] {
                b'd' => return Ok(TermAst::Diag(i, j)),
                b's' => {
                    self.eat(b'(')?;
                    let t = self.parse_join()?;
                    self.eat(b')')?;
                    return Ok(TermAst::sub(i, j, t));
                }
                _ => {
                    self.eat(b'(')?;
                    let t = self.parse_join()?;
                    self.eat(b')')?;
                    return Ok(TermAst::transp(i, j, t));
                }
            }
        }
        if word.is_empty() {
            return Err(self.error("expected a term"));
        }
        Ok(TermAst::var(word))
    }

    fn parse_long_operator(&mut self, kind: u8, _start: usize) -> Result<TermAst> {
        self.eat(b'(')?;
        let i = self.parse_nat()?;
        if kind == b'c' {
            self.eat(b')')?;
            self.eat(b'(')?;
            let t = self.parse_join()?;
            self.eat(b')')?;
            return Ok(TermAst::cyl(i, t));
        }
        self.eat(b',')?;
        let j = self.parse_nat()?;
        self.eat(b')')?;
        match kind {
            b'd' => Ok(TermAst::Diag(i, j)),
            b's' => {
                self.eat(b'(')?;
                let t = self.parse_join()?;
                self.eat(b')')?;
                Ok(TermAst::sub(i, j, t))
            }
            _ => {
                self.eat(b'(')?;
                let t = self.parse_join()?;
                self.eat(b')')?;
                Ok(TermAst::transp(i, j, t))
            }
        }
    }

    fn parse_nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.error("number too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_substitution_definition() {
        let t = parse_term("c0(d01 . x)").unwrap();
        assert_eq!(
            t,
            TermAst::cyl(
                0,
                TermAst::meet(TermAst::Diag(0, 1), TermAst::var("x"))
            )
        );
    }

    #[test]
    fn precedence() {
        let t = parse_term("x + y . z").unwrap();
        assert_eq!(
            t,
            TermAst::join(TermAst::var("x"), TermAst::meet(TermAst::var("y"), TermAst::var("z")))
        );
        let t = parse_term("-x ; y").unwrap();
        assert_eq!(
            t,
            TermAst::comp(TermAst::compl(TermAst::var("x")), TermAst::var("y"))
        );
        let t = parse_term("x . y ; z").unwrap();
        assert_eq!(
            t,
            TermAst::meet(TermAst::var("x"), TermAst::comp(TermAst::var("y"), TermAst::var("z")))
        );
    }

    #[test]
    fn long_forms() {
        assert_eq!(parse_term("c(10)(x)").unwrap(), TermAst::cyl(10, TermAst::var("x")));
        assert_eq!(parse_term("d(0,1)").unwrap(), TermAst::Diag(0, 1));
        assert_eq!(
            parse_term("s(2,1)(x)").unwrap(),
            TermAst::sub(2, 1, TermAst::var("x"))
        );
        assert_eq!(parse_term("conv(x;y)").unwrap(), TermAst::conv(TermAst::comp(TermAst::var("x"), TermAst::var("y"))));
    }

    #[test]
    fn syntax_error_offset() {
        let err = parse_term("c0(").unwrap_err();
        match err {
            AlcError::Syntax { offset, .. } => assert_eq!(offset, 3),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn equation_parsing() {
        let eq = parse_equation("x + x = x").unwrap();
        assert_eq!(eq.variables, vec!["x".to_string()]);
        assert!(parse_equation("x + x").is_err());
    }
}
