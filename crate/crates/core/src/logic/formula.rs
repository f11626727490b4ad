use std::fmt;

use crate::error::{Error, Result};

/// Propositional formula. `Atom(0)` is written `p1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(usize),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(i: usize) -> Self {
        Atom(i)
    }

    pub fn not(a: Formula) -> Self {
        Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Imp(Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<Self> {
        super::parse::parse(text)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Atom(_) | Top | Bot => 1,
            Not(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// One more than the largest atom index, or 0 without atoms.
    pub fn atom_count(&self) -> usize {
        match self {
            Atom(i) => i + 1,
            Top | Bot => 0,
            Not(a) => a.atom_count(),
            And(a, b) | Or(a, b) | Imp(a, b) => a.atom_count().max(b.atom_count()),
        }
    }

    /// Sorted indices of the atoms that occur.
    pub fn atoms(&self) -> Vec<usize> {
        fn walk(f: &Formula, out: &mut Vec<usize>) {
            match f {
                Atom(i) => out.push(*i),
                Top | Bot => {}
                Not(a) => walk(a, out),
                And(a, b) | Or(a, b) | Imp(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// No negation and no `bot`. Both denote the algebra's top, which an
    /// added top element would move.
    pub fn is_positive(&self) -> bool {
        match self {
            Atom(_) | Top => true,
            Bot | Not(_) => false,
            And(a, b) | Or(a, b) | Imp(a, b) => a.is_positive() && b.is_positive(),
        }
    }

    /// Truth-table value under a classical assignment.
    pub fn classical(&self, v: &[bool]) -> bool {
        match self {
            Atom(i) => v[*i],
            Top => true,
            Bot => false,
            Not(a) => !a.classical(v),
            And(a, b) => a.classical(v) && b.classical(v),
            Or(a, b) => a.classical(v) || b.classical(v),
            Imp(a, b) => !a.classical(v) || b.classical(v),
        }
    }

    /// Classical tautology by truth tables.
    pub fn is_tautology(&self) -> Result<bool> {
        let n = self.atom_count();
        crate::error::cap_check("atoms for truth table", n as u128, 24)?;
        Ok((0..1u32 << n).all(|m| {
            let v: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            self.classical(&v)
        }))
    }

    fn precedence(&self) -> u8 {
        match self {
            Imp(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            Not(_) => 4,
            Atom(_) | Top | Bot => 5,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({})", self)
        } else {
            write!(f, "{}", self)
        }
    }
}

/// Prints with the fewest parentheses the grammar needs: `~` binds
/// tightest, then `&`, `|`, and right-associative `->`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom(i) => write!(f, "p{}", i + 1),
            Top => f.write_str("top"),
            Bot => f.write_str("bot"),
            Not(a) => {
                f.write_str("~")?;
                a.write_child(f, 4)
            }
            And(a, b) => {
                a.write_child(f, 3)?;
                f.write_str(" & ")?;
                b.write_child(f, 4)
            }
            Or(a, b) => {
                a.write_child(f, 2)?;
                f.write_str(" | ")?;
                b.write_child(f, 3)
            }
            Imp(a, b) => {
                a.write_child(f, 2)?;
                f.write_str(" -> ")?;
                b.write_child(f, 1)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::parse(s)
    }
}
