//! The splitting-class condition on a down-set `A` of a finite upper
//! semilattice: for every `a ∈ A` and finite `B ⊆ {b ∈ A : b ≰ a}` there is
//! `c ∈ A` with `c > a` and `b + c ∉ A` for all `b ∈ B`.
//!
//! Taking `B = ∅` demands some `c > a` inside `A`, which a maximal element
//! of a finite `A` never has. So [`is_splitting_class_finite`] is false on
//! every finite instance; that is the definition, not a bug. Positive
//! behaviour is visible through [`splitting_witness`] and the truncated
//! check [`splitting_upto_depth`].

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::brouwer::{homomorphism_report, interval_between, BrouwerAlgebra, HomReport};
use crate::error::{Error, Result};
use crate::kripke::{find_pmorphism, pmorphism_theory_transfer, TransferReport};
use crate::logic::Formula;
use crate::order::{binary_tree, boolean, compute_join_table, UpperSemilattice};
use crate::upset::{DownSet, UPSET_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingInstance {
    usl: UpperSemilattice,
    a: Mask,
}

impl SplittingInstance {
    pub fn new(usl: UpperSemilattice, a: Mask) -> Result<Self> {
        DownSet::new(usl.poset(), a)?;
        if !bits::has(a, usl.bottom()) {
            return Err(Error::PreconditionFailed("the class must contain the bottom".into()));
        }
        Ok(SplittingInstance { usl, a })
    }

    pub fn usl(&self) -> &UpperSemilattice {
        &self.usl
    }

    pub fn class(&self) -> Mask {
        self.a
    }

    pub fn contains(&self, x: usize) -> bool {
        bits::has(self.a, x)
    }

    /// Members of `A` not below `a`.
    pub fn candidates(&self, a: usize) -> Mask {
        bits::from_indices(bits::iter(self.a).filter(|&b| !self.usl.leq(b, a)))
    }
}

/// Subsets of `{1,2,3}` under inclusion, with `A` the empty set and the
/// singletons.
pub fn powerset_splitting_instance() -> SplittingInstance {
    let usl = compute_join_table(&boolean(3).expect("boolean(3)")).expect("a lattice");
    SplittingInstance::new(usl, 0b1_0111).expect("down-set with bottom")
}

fn find_c(inst: &SplittingInstance, a: usize, b: Mask) -> Option<usize> {
    bits::iter(inst.a)
        .filter(|&c| c != a && inst.usl.leq(a, c))
        .find(|&c| bits::iter(b).all(|x| !inst.contains(inst.usl.join(x, c))))
}

/// Least-index `c ∈ A` above `a` whose join with every member of `B`
/// leaves `A`.
pub fn splitting_witness(inst: &SplittingInstance, a: usize, b: &[usize]) -> Result<Option<usize>> {
    let n = inst.usl.size();
    if let Some(&x) = std::iter::once(&a).chain(b).find(|&&x| x >= n) {
        return Err(Error::IndexOutOfRange { index: x, size: n });
    }
    if !inst.contains(a) {
        return Err(Error::PreconditionFailed(format!("a = {a} is not in the class")));
    }
    if let Some(&x) = b.iter().find(|&&x| !inst.contains(x) || inst.usl.leq(x, a)) {
        return Err(Error::PreconditionFailed(format!("b = {x} must lie in the class and not below a")));
    }
    Ok(find_c(inst, a, bits::from_indices(b.iter().copied())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementCheck {
    pub a: usize,
    /// `{b ∈ A : b ≰ a}`; a `c` for this set serves every subset.
    pub candidates: Vec<usize>,
    /// Least `c` for the full candidate set.
    pub c: Option<usize>,
    /// Whether anything in `A` lies strictly above `a`.
    pub has_successor: bool,
}

impl ElementCheck {
    pub fn holds(&self) -> bool {
        self.c.is_some()
    }
}

fn check_element(inst: &SplittingInstance, a: usize) -> ElementCheck {
    let cands = inst.candidates(a);
    ElementCheck {
        a,
        candidates: bits::iter(cands).collect(),
        c: find_c(inst, a, cands),
        has_successor: bits::iter(inst.a).any(|c| c != a && inst.usl.leq(a, c)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub holds: bool,
    pub elements: Vec<ElementCheck>,
    /// Least-index maximal member of `A`, which fails already for `B = ∅`.
    pub maximal_witness: Option<usize>,
}

/// The full definition. For a finite `A` the set `{b ∈ A : b ≰ a}` is
/// itself an admissible `B`, and any `c` for it works for all subsets, so
/// each `a` needs one check.
pub fn is_splitting_class_finite(inst: &SplittingInstance) -> SplittingReport {
    let elements: Vec<ElementCheck> = bits::iter(inst.a).map(|a| check_element(inst, a)).collect();
    let maximal_witness = elements.iter().find(|e| !e.has_successor).map(|e| e.a);
    SplittingReport { holds: elements.iter().all(ElementCheck::holds), elements, maximal_witness }
}

/// The same check restricted to members of height below `depth`.
pub fn splitting_upto_depth(inst: &SplittingInstance, depth: usize) -> Result<SplittingReport> {
    if depth == 0 {
        return Err(Error::PreconditionFailed("depth must be at least 1".into()));
    }
    let p = inst.usl.poset();
    let elements: Vec<ElementCheck> =
        bits::iter(inst.a).filter(|&a| p.height(a) < depth).map(|a| check_element(inst, a)).collect();
    let maximal_witness = elements.iter().find(|e| !e.has_successor).map(|e| e.a);
    Ok(SplittingReport { holds: elements.iter().all(ElementCheck::holds), elements, maximal_witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismReport {
    /// `map[e]` is the interval index of `B ∪ Aᶜ` for up-set `e` of `A`.
    pub map: Vec<usize>,
    pub source_size: usize,
    pub interval_size: usize,
    pub laws: HomReport,
}

impl IsomorphismReport {
    pub fn passes(&self) -> bool {
        self.laws.is_embedding() && self.laws.holds("surjective")
    }
}

/// `up(⟨A, ≤⟩) ≅ [U, Aᶜ]` inside `up(U)` via `B ↦ B ∪ Aᶜ`.
pub fn interval_isomorphism_check(inst: &SplittingInstance) -> Result<IsomorphismReport> {
    let p = inst.usl.poset();
    let (sub, old) = p.induced(inst.a)?;
    let (src, src_masks) = BrouwerAlgebra::from_upsets_with_masks(&sub, UPSET_CAP)?;
    let (big, big_masks) = BrouwerAlgebra::from_upsets_with_masks(p, UPSET_CAP)?;
    let idx = |m: Mask| big_masks.binary_search(&m).expect("an up-set");
    let ac = p.carrier() & !inst.a;
    let iv = interval_between(&big, idx(p.carrier()), idx(ac))?;
    let map: Vec<usize> = src_masks
        .iter()
        .map(|&m| {
            let lifted = bits::iter(m).fold(ac, |acc, i| acc | bits::bit(old[i]));
            iv.index_of(idx(lifted)).expect("inside the interval")
        })
        .collect();
    let laws = homomorphism_report(&src, &iv.algebra, &map);
    Ok(IsomorphismReport { map, source_size: src.size(), interval_size: iv.algebra.size(), laws })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub depth: usize,
    /// Onto p-morphism from `⟨A, ≤⟩` to the tree, in induced indices.
    pub pmorphism: Vec<usize>,
    pub transfer: TransferReport,
    pub isomorphism: IsomorphismReport,
}

impl PipelineReport {
    pub fn passes(&self) -> bool {
        self.transfer.passes() && self.isomorphism.passes()
    }
}

pub fn tree_pipeline(inst: &SplittingInstance, depth: usize, corpus: &[(String, Formula)], cap: u128) -> Result<PipelineReport> {
    let (sub, _) = inst.usl.poset().induced(inst.a)?;
    let tree = binary_tree(depth)?;
    let f = find_pmorphism(&sub, &tree, true)?.ok_or(Error::NoPMorphismFound)?;
    let transfer = pmorphism_theory_transfer(&f, corpus, cap)?;
    let isomorphism = interval_isomorphism_check(inst)?;
    Ok(PipelineReport { depth, pmorphism: f.map, transfer, isomorphism })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Corpus, VALUATION_CAP};
    use crate::order::chain;

    #[test]
    fn witness_examples() {
        let inst = powerset_splitting_instance();
        assert_eq!(splitting_witness(&inst, 0, &[1]).unwrap(), Some(2));
        assert_eq!(splitting_witness(&inst, 1, &[2]).unwrap(), None);
        assert_eq!(splitting_witness(&inst, 0, &[]).unwrap(), Some(1));
        assert!(splitting_witness(&inst, 3, &[]).is_err());
        assert!(splitting_witness(&inst, 1, &[0]).is_err());
    }

    #[test]
    fn finite_classes_never_split() {
        let inst = powerset_splitting_instance();
        let r = is_splitting_class_finite(&inst);
        assert!(!r.holds);
        assert_eq!(r.maximal_witness, Some(1));

        let c = compute_join_table(&chain(3).unwrap()).unwrap();
        let r = is_splitting_class_finite(&SplittingInstance::new(c, 0b111).unwrap());
        assert!(!r.holds);
        assert_eq!(r.maximal_witness, Some(2));
    }

    #[test]
    fn truncation() {
        let inst = powerset_splitting_instance();
        let r = splitting_upto_depth(&inst, 1).unwrap();
        assert_eq!(r.elements.len(), 1);
        assert_eq!(r.elements[0].candidates, vec![1, 2, 4]);
        assert!(!r.holds);
        assert!(splitting_upto_depth(&inst, 0).is_err());
    }

    #[test]
    fn instance_validation() {
        let u = compute_join_table(&boolean(2).unwrap()).unwrap();
        assert!(matches!(SplittingInstance::new(u.clone(), 0b0110), Err(Error::NotDownwardClosed(..))));
        assert!(matches!(SplittingInstance::new(u, 0), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn pipeline_on_a_fork() {
        let u = compute_join_table(&boolean(2).unwrap()).unwrap();
        let inst = SplittingInstance::new(u, 0b0111).unwrap();
        let r = tree_pipeline(&inst, 1, &Corpus::standard().named(), VALUATION_CAP).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.pmorphism, vec![0, 1, 2]);
        assert_eq!(r.isomorphism.source_size, 5);
        assert_eq!(r.isomorphism.interval_size, 5);
    }

    #[test]
    fn chains_do_not_map_onto_forks() {
        let c = compute_join_table(&chain(3).unwrap()).unwrap();
        let inst = SplittingInstance::new(c, 0b111).unwrap();
        assert_eq!(tree_pipeline(&inst, 1, &[], VALUATION_CAP), Err(Error::NoPMorphismFound));
        assert!(interval_isomorphism_check(&inst).unwrap().passes());
    }
}
