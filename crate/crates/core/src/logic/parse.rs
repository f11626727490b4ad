//! Recursive-descent parser for the ASCII formula grammar:
//!
//! ```text
//! imp  := or ( "->" imp )?
//! or   := and ( "|" and )*
//! and  := un ( "&" un )*
//! un   := "~" un | atom | "top" | "bot" | "(" imp ")"
//! atom := "p" [1-9][0-9]*
//! ```

use super::formula::Formula;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.imp()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("an operator or end of input"));
    }
    Ok(f)
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> Error {
        Error::SyntaxError { position: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat("|") {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat("&") {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("(") {
            let f = self.imp()?;
            if !self.eat(")") {
                return Err(self.error("`)`"));
            }
            return Ok(f);
        }
        let word_end = self.src[self.pos..]
            .iter()
            .position(|c| !c.is_ascii_alphanumeric())
            .map_or(self.src.len(), |k| self.pos + k);
        let word = std::str::from_utf8(&self.src[self.pos..word_end]).expect("ascii");
        let f = match word {
            "top" => Formula::Top,
            "bot" => Formula::Bot,
            w if w.len() > 1 && w.starts_with('p') && !w[1..].starts_with('0') => match w[1..].parse::<usize>() {
                Ok(k) => Formula::Atom(k - 1),
                Err(_) => return Err(self.error("an atom p1, p2, ...")),
            },
            _ => return Err(self.error("an atom, `top`, `bot`, `~` or `(`")),
        };
        self.pos = word_end;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as F;

    #[test]
    fn examples() {
        assert_eq!(parse("p1 -> p1").unwrap(), F::imp(F::Atom(0), F::Atom(0)));
        assert_eq!(parse("~p1 | ~~p1").unwrap(), F::or(F::not(F::Atom(0)), F::not(F::not(F::Atom(0)))));
        assert_eq!(parse("p1 -> p2 -> p1").unwrap(), F::imp(F::Atom(0), F::imp(F::Atom(1), F::Atom(0))));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("(p1 | p2) -> p1 & p2").unwrap(),
            F::imp(F::or(F::Atom(0), F::Atom(1)), F::and(F::Atom(0), F::Atom(1)))
        );
        assert_eq!(parse("p1 & p2 | p3").unwrap(), F::or(F::and(F::Atom(0), F::Atom(1)), F::Atom(2)));
        assert_eq!(parse("~p1 & p2").unwrap(), F::and(F::not(F::Atom(0)), F::Atom(1)));
        assert_eq!(parse("p1 | p2 | p3").unwrap(), F::or(F::or(F::Atom(0), F::Atom(1)), F::Atom(2)));
        assert_eq!(parse("top -> bot").unwrap(), F::imp(F::Top, F::Bot));
        assert_eq!(parse("p12").unwrap(), F::Atom(11));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("p1 ->"), Err(Error::SyntaxError { position: 5, expected: "an atom, `top`, `bot`, `~` or `(`".into() }));
        assert!(matches!(parse("(p1"), Err(Error::SyntaxError { position: 3, .. })));
        assert!(matches!(parse("p0"), Err(Error::SyntaxError { position: 0, .. })));
        assert!(matches!(parse("p1 p2"), Err(Error::SyntaxError { position: 3, .. })));
        assert!(matches!(parse("q"), Err(Error::SyntaxError { .. })));
        assert!(matches!(parse(""), Err(Error::SyntaxError { position: 0, .. })));
    }

    #[test]
    fn printing_reparses() {
        for s in ["p1 -> p2 -> p1", "(p1 -> p2) -> p1", "~(p1 & p2) | ~~p3", "p1 & (p2 & p3)", "(p1 | p2) | p3", "~~top"] {
            let f = parse(s).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f, "{s} printed as {f}");
        }
        assert_eq!(parse("(p1 -> p2) -> p1").unwrap().to_string(), "(p1 -> p2) -> p1");
        assert_eq!(parse("p1 -> (p2 -> p1)").unwrap().to_string(), "p1 -> p2 -> p1");
    }
}
