//! Decision procedure for intuitionistic propositional logic using the
//! contraction-free sequent calculus G4ip. Every rule premise is smaller
//! in a multiset ordering, so the search terminates without loop checks.
//! This is independent of the algebra and Kripke code and serves as an
//! oracle for them.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::formula::Formula;
use crate::error::{cap_check, Result};

/// Largest formula size (node count) accepted by [`ipc_prove`].
pub const IPC_SIZE_CAP: u128 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum P {
    Bot,
    Atom(usize),
    And(Rc<P>, Rc<P>),
    Or(Rc<P>, Rc<P>),
    Imp(Rc<P>, Rc<P>),
}

fn lower(f: &Formula) -> Rc<P> {
    Rc::new(match f {
        Formula::Atom(i) => P::Atom(*i),
        Formula::Bot => P::Bot,
        Formula::Top => P::Imp(Rc::new(P::Bot), Rc::new(P::Bot)),
        Formula::Not(a) => P::Imp(lower(a), Rc::new(P::Bot)),
        Formula::And(a, b) => P::And(lower(a), lower(b)),
        Formula::Or(a, b) => P::Or(lower(a), lower(b)),
        Formula::Imp(a, b) => P::Imp(lower(a), lower(b)),
    })
}

type Ctx = BTreeSet<Rc<P>>;

struct Prover {
    memo: HashMap<(Ctx, Rc<P>), bool>,
}

fn with(ctx: &Ctx, add: &[Rc<P>]) -> Ctx {
    let mut c = ctx.clone();
    c.extend(add.iter().cloned());
    c
}

fn without(ctx: &Ctx, drop: &Rc<P>, add: &[Rc<P>]) -> Ctx {
    let mut c = ctx.clone();
    c.remove(drop);
    c.extend(add.iter().cloned());
    c
}

impl Prover {
    fn prove(&mut self, ctx: Ctx, goal: Rc<P>) -> bool {
        let key = (ctx, goal);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = self.search(&key.0, &key.1);
        self.memo.insert(key, r);
        r
    }

    fn search(&mut self, ctx: &Ctx, goal: &Rc<P>) -> bool {
        if ctx.contains(&P::Bot) || ctx.contains(goal) {
            return true;
        }
        // invertible left rules
        for h in ctx {
            match &**h {
                P::And(a, b) => return self.prove(without(ctx, h, &[a.clone(), b.clone()]), goal.clone()),
                P::Or(a, b) => {
                    return self.prove(without(ctx, h, std::slice::from_ref(a)), goal.clone())
                        && self.prove(without(ctx, h, std::slice::from_ref(b)), goal.clone())
                }
                P::Imp(a, b) => match &**a {
                    P::Bot => return self.prove(without(ctx, h, &[]), goal.clone()),
                    P::Atom(_) if ctx.contains(a) => return self.prove(without(ctx, h, std::slice::from_ref(b)), goal.clone()),
                    P::And(c, d) => {
                        let curried = Rc::new(P::Imp(c.clone(), Rc::new(P::Imp(d.clone(), b.clone()))));
                        return self.prove(without(ctx, h, &[curried]), goal.clone());
                    }
                    P::Or(c, d) => {
                        let l = Rc::new(P::Imp(c.clone(), b.clone()));
                        let r = Rc::new(P::Imp(d.clone(), b.clone()));
                        return self.prove(without(ctx, h, &[l, r]), goal.clone());
                    }
                    _ => {}
                },
                _ => {}
            }
        }
        // invertible right rules
        match &**goal {
            P::Imp(a, b) => return self.prove(with(ctx, std::slice::from_ref(a)), b.clone()),
            P::And(a, b) => return self.prove(ctx.clone(), a.clone()) && self.prove(ctx.clone(), b.clone()),
            _ => {}
        }
        // choices
        if let P::Or(a, b) = &**goal {
            if self.prove(ctx.clone(), a.clone()) || self.prove(ctx.clone(), b.clone()) {
                return true;
            }
        }
        for h in ctx {
            if let P::Imp(cd, b) = &**h {
                if let P::Imp(_, d) = &**cd {
                    let rest = without(ctx, h, &[]);
                    let left = with(&rest, &[Rc::new(P::Imp(d.clone(), b.clone()))]);
                    if self.prove(left, cd.clone()) && self.prove(with(&rest, std::slice::from_ref(b)), goal.clone()) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Whether `f` is a theorem of intuitionistic propositional logic.
pub fn ipc_prove(f: &Formula) -> Result<bool> {
    cap_check("formula size", f.size() as u128, IPC_SIZE_CAP)?;
    let mut p = Prover { memo: HashMap::new() };
    Ok(p.prove(Ctx::new(), lower(f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prove(s: &str) -> bool {
        ipc_prove(&Formula::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn theorems() {
        for s in [
            "p1 -> p1",
            "p1 -> p2 -> p1",
            "(p1 -> p2 -> p3) -> (p1 -> p2) -> p1 -> p3",
            "p1 & p2 -> p2 & p1",
            "p1 | p2 -> p2 | p1",
            "p1 -> ~~p1",
            "~~~p1 -> ~p1",
            "~~(p1 | ~p1)",
            "bot -> p1",
            "top",
            "~(p1 | p2) -> ~p1 & ~p2",
            "((p1 -> p2) -> p1) -> ~~p1",
            "~~(((p1 -> p2) -> p1) -> p1)",
        ] {
            assert!(prove(s), "{s}");
        }
    }

    #[test]
    fn non_theorems() {
        for s in [
            "p1 | ~p1",
            "~p1 | ~~p1",
            "((p1->p2)->p1)->p1",
            "~~p1 -> p1",
            "(p1 -> p2) | (p2 -> p1)",
            "~(p1 & p2) -> ~p1 | ~p2",
            "p1",
            "bot",
            "(~p1 -> p2 | p3) -> (~p1 -> p2) | (~p1 -> p3)",
        ] {
            assert!(!prove(s), "{s}");
        }
    }

    #[test]
    fn size_cap() {
        let mut f = Formula::Atom(0);
        for _ in 0..200 {
            f = Formula::imp(f, Formula::Atom(1));
        }
        assert!(ipc_prove(&f).is_err());
    }
}
