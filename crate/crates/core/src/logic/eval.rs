//! Formulas evaluated in a Brouwer algebra. Validity means the value is the
//! least element 0, so the connectives are read dually: `|` is the lattice
//! meet, `&` the join, `->` the arrow and `~a` is `a -> 1`. The constants
//! follow suit: `top` denotes 0 and `bot` denotes 1.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::formula::Formula;
use crate::brouwer::BrouwerAlgebra;
use crate::error::{cap_check, Error, Result};

/// Largest number of valuations [`is_identity`] will enumerate.
pub const VALUATION_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug)]
enum Op {
    Atom(usize),
    Const(usize),
    Not,
    Meet,
    Join,
    Arrow,
}

/// Postfix program for one formula in one algebra.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    atoms: usize,
    depth: usize,
}

impl Compiled {
    pub fn new(b: &BrouwerAlgebra, f: &Formula) -> Self {
        fn go(b: &BrouwerAlgebra, f: &Formula, ops: &mut Vec<Op>) {
            match f {
                Formula::Atom(i) => ops.push(Op::Atom(*i)),
                Formula::Top => ops.push(Op::Const(b.bottom())),
                Formula::Bot => ops.push(Op::Const(b.top())),
                Formula::Not(a) => {
                    go(b, a, ops);
                    ops.push(Op::Not);
                }
                Formula::Or(x, y) | Formula::And(x, y) | Formula::Imp(x, y) => {
                    go(b, x, ops);
                    go(b, y, ops);
                    ops.push(match f {
                        Formula::Or(..) => Op::Meet,
                        Formula::And(..) => Op::Join,
                        _ => Op::Arrow,
                    });
                }
            }
        }
        let mut ops = Vec::with_capacity(f.size());
        go(b, f, &mut ops);
        let (mut d, mut depth) = (0usize, 0usize);
        for op in &ops {
            match op {
                Op::Atom(_) | Op::Const(_) => d += 1,
                Op::Not => {}
                _ => d -= 1,
            }
            depth = depth.max(d);
        }
        Compiled { ops, atoms: f.atom_count(), depth }
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// Assumes `v` covers every atom.
    pub fn run(&self, b: &BrouwerAlgebra, v: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        stack.reserve(self.depth);
        for op in &self.ops {
            match *op {
                Op::Atom(i) => stack.push(v[i]),
                Op::Const(c) => stack.push(c),
                Op::Not => {
                    let a = stack.pop().expect("operand");
                    stack.push(b.neg(a));
                }
                Op::Meet | Op::Join | Op::Arrow => {
                    let y = stack.pop().expect("operand");
                    let x = stack.pop().expect("operand");
                    stack.push(match op {
                        Op::Meet => b.meet(x, y),
                        Op::Join => b.join(x, y),
                        _ => b.arrow(x, y),
                    });
                }
            }
        }
        stack.pop().expect("result")
    }
}

fn check_valuation(b: &BrouwerAlgebra, f: &Formula, v: &[usize]) -> Result<()> {
    if let Some(i) = f.atoms().into_iter().find(|&i| i >= v.len()) {
        return Err(Error::UnassignedAtom(i));
    }
    if let Some(&e) = v.iter().find(|&&e| e >= b.size()) {
        return Err(Error::IndexOutOfRange { index: e, size: b.size() });
    }
    Ok(())
}

/// Value of `f` under `v`, where `v[i]` is the element assigned to atom `i`.
pub fn eval_algebra(b: &BrouwerAlgebra, f: &Formula, v: &[usize]) -> Result<usize> {
    check_valuation(b, f, v)?;
    Ok(Compiled::new(b, f).run(b, v, &mut Vec::new()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub holds: bool,
    /// Lexicographically least refuting valuation, atom 0 most significant.
    pub witness: Option<Vec<usize>>,
    /// Value of the formula under the witness.
    pub value: Option<usize>,
    pub valuations: u64,
}

pub fn is_identity(b: &BrouwerAlgebra, f: &Formula) -> Result<IdentityResult> {
    is_identity_capped(b, f, VALUATION_CAP)
}

pub fn is_identity_capped(b: &BrouwerAlgebra, f: &Formula, cap: u128) -> Result<IdentityResult> {
    let domain: Vec<usize> = (0..b.size()).collect();
    identity_over(b, f, &domain, cap)
}

/// Like [`is_identity`] but each atom ranges only over `domain`, in the
/// given order. The witness is least with respect to positions in `domain`.
pub fn identity_over(b: &BrouwerAlgebra, f: &Formula, domain: &[usize], cap: u128) -> Result<IdentityResult> {
    if let Some(&e) = domain.iter().find(|&&e| e >= b.size()) {
        return Err(Error::IndexOutOfRange { index: e, size: b.size() });
    }
    let prog = Compiled::new(b, f);
    let n = prog.atoms();
    let radix = domain.len() as u128;
    let total = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(radix)).unwrap_or(u128::MAX);
    cap_check("valuations", total, cap)?;
    let total = total as u64;
    let decode = |mut k: u64, v: &mut [usize]| {
        for slot in v.iter_mut().rev() {
            *slot = domain[(k % radix as u64) as usize];
            k /= radix as u64;
        }
    };
    let zero = b.bottom();
    let found = (0..total).into_par_iter().find_first(|&k| {
        let mut v = vec![0; n];
        decode(k, &mut v);
        prog.run(b, &v, &mut Vec::with_capacity(prog.depth)) != zero
    });
    Ok(match found {
        None => IdentityResult { holds: true, witness: None, value: None, valuations: total },
        Some(k) => {
            let mut v = vec![0; n];
            decode(k, &mut v);
            let value = prog.run(b, &v, &mut Vec::new());
            IdentityResult { holds: false, witness: Some(v), value: Some(value), valuations: total }
        }
    })
}

/// Expected relation between the identities of two algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inclusion {
    /// Every identity of the first algebra holds in the second.
    FirstInSecond,
    SecondInFirst,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub name: String,
    pub formula: String,
    pub first: bool,
    pub second: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub rows: Vec<TheoryRow>,
    pub expected: Option<Inclusion>,
    /// Names of the formulas that break the expected inclusion.
    pub violations: Vec<String>,
}

impl TheoryReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn theory_compare(
    b1: &BrouwerAlgebra,
    b2: &BrouwerAlgebra,
    corpus: &[(String, Formula)],
    expected: Option<Inclusion>,
    cap: u128,
) -> Result<TheoryReport> {
    let mut rows = Vec::with_capacity(corpus.len());
    let mut violations = Vec::new();
    for (name, f) in corpus {
        let first = is_identity_capped(b1, f, cap)?.holds;
        let second = is_identity_capped(b2, f, cap)?.holds;
        let bad = match expected {
            Some(Inclusion::FirstInSecond) => first && !second,
            Some(Inclusion::SecondInFirst) => second && !first,
            Some(Inclusion::Equal) => first != second,
            None => false,
        };
        if bad {
            violations.push(name.clone());
        }
        rows.push(TheoryRow { name: name.clone(), formula: f.to_string(), first, second });
    }
    Ok(TheoryReport { rows, expected, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brouwer::from_upsets;
    use crate::order::{chain, fork};

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn spec_values() {
        let c3 = from_upsets(&chain(2).unwrap()).unwrap();
        let (top, m, zero) = (0, 1, 2);
        assert_eq!(eval_algebra(&c3, &p("p1 -> p1"), &[m]).unwrap(), zero);
        assert_eq!(eval_algebra(&c3, &p("((p1->p2)->p1)->p1"), &[m, top]).unwrap(), m);

        let fk = from_upsets(&fork()).unwrap();
        let l0 = fk.find_label("{l0}").unwrap();
        let l1 = fk.find_label("{l1}").unwrap();
        assert_eq!(eval_algebra(&fk, &p("~p1"), &[l0]).unwrap(), l1);
    }

    #[test]
    fn constants_are_dual() {
        let c3 = from_upsets(&chain(2).unwrap()).unwrap();
        assert_eq!(eval_algebra(&c3, &p("top"), &[]).unwrap(), c3.bottom());
        assert_eq!(eval_algebra(&c3, &p("bot"), &[]).unwrap(), c3.top());
        assert_eq!(eval_algebra(&c3, &p("~p1"), &[1]).unwrap(), eval_algebra(&c3, &p("p1 -> bot"), &[1]).unwrap());
    }

    #[test]
    fn unassigned_atoms() {
        let c3 = from_upsets(&chain(2).unwrap()).unwrap();
        assert_eq!(eval_algebra(&c3, &p("p1 & p3"), &[0, 0]), Err(Error::UnassignedAtom(2)));
        assert!(matches!(eval_algebra(&c3, &p("p1"), &[7]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn identities() {
        let c3 = from_upsets(&chain(2).unwrap()).unwrap();
        let fk = from_upsets(&fork()).unwrap();
        assert!(is_identity(&fk, &p("p1 -> p1")).unwrap().holds);
        assert!(is_identity(&c3, &p("~p1 | ~~p1")).unwrap().holds);
        let r = is_identity(&fk, &p("~p1 | ~~p1")).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![fk.find_label("{l0}").unwrap()]));
        assert_eq!(r.value, fk.find_label("{l0,l1}"));
        assert_eq!(r.valuations, 5);
        assert!(!is_identity(&c3, &p("p1 | ~p1")).unwrap().holds);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let fk = from_upsets(&fork()).unwrap();
        let f = p("(p1 -> p2) | (p2 -> p1)");
        let r = is_identity(&fk, &f).unwrap();
        let w = r.witness.unwrap();
        let mut first = None;
        'outer: for a in 0..5 {
            for b in 0..5 {
                if eval_algebra(&fk, &f, &[a, b]).unwrap() != fk.bottom() {
                    first = Some(vec![a, b]);
                    break 'outer;
                }
            }
        }
        assert_eq!(Some(w), first);
    }

    #[test]
    fn caps() {
        let fk = from_upsets(&fork()).unwrap();
        let f = p("p1 & p2 & p3");
        assert!(matches!(is_identity_capped(&fk, &f, 124), Err(Error::CapExceeded { .. })));
        assert!(is_identity_capped(&fk, &f, 125).is_ok());
    }

    #[test]
    fn theory_comparison() {
        let c3 = from_upsets(&chain(2).unwrap()).unwrap();
        let fk = from_upsets(&fork()).unwrap();
        let corpus = vec![("id".to_string(), p("p1 -> p1")), ("wlem".to_string(), p("~p1 | ~~p1"))];
        let r = theory_compare(&c3, &fk, &corpus, Some(Inclusion::SecondInFirst), VALUATION_CAP).unwrap();
        assert!(r.passes());
        assert_eq!((r.rows[1].first, r.rows[1].second), (true, false));
        let r = theory_compare(&c3, &fk, &corpus, Some(Inclusion::FirstInSecond), VALUATION_CAP).unwrap();
        assert_eq!(r.violations, vec!["wlem".to_string()]);
    }
}
