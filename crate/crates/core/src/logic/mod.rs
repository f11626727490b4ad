//! Propositional formulas and their Brouwer-algebra semantics.

pub mod corpus;
pub mod eval;
pub mod formula;
pub mod ipc;
pub mod parse;
pub mod random;

pub use corpus::{run_corpus, Corpus, CorpusEntry, CorpusRow, Expect};
pub use eval::{
    eval_algebra, identity_over, is_identity, is_identity_capped, theory_compare, Compiled, IdentityResult, Inclusion,
    TheoryReport, TheoryRow, VALUATION_CAP,
};
pub use formula::Formula;
pub use ipc::{ipc_prove, IPC_SIZE_CAP};
pub use random::{random_formula, random_formulas};

/// True when `f` has no negation. `bot` is excluded as well, since it
/// denotes the top element just as `~` does.
pub fn classify_positive(f: &Formula) -> bool {
    f.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_examples() {
        assert!(classify_positive(&Formula::parse("p1 -> p2").unwrap()));
        assert!(!classify_positive(&Formula::parse("~p1").unwrap()));
        assert!(classify_positive(&Formula::parse("(p1 | p2) -> p1 & p2").unwrap()));
        assert!(!classify_positive(&Formula::parse("p1 -> bot").unwrap()));
    }
}
