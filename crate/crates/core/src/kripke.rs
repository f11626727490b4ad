//! Intuitionistic Kripke semantics on finite posets and p-morphisms.
//!
//! Forcing is computed world by world straight from the frame order. It
//! shares no code with the algebra evaluator, which is what makes
//! [`dejongh_agreement`] a real cross-check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::brouwer::from_upsets_capped;
use crate::error::{cap_check, Error, Result};
use crate::logic::{is_identity_capped, Formula, VALUATION_CAP};
use crate::order::Poset;
use crate::upset::{enumerate_upset_masks, UPSET_CAP};

/// A frame with a monotone truth set for each atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    frame: Poset,
    truth: Vec<Mask>,
}

impl KripkeModel {
    pub fn new(frame: Poset, truth: Vec<Mask>) -> Result<Self> {
        for &t in &truth {
            if t & !frame.carrier() != 0 {
                return Err(Error::IndexOutOfRange { index: 63 - t.leading_zeros() as usize, size: frame.size() });
            }
            for x in bits::iter(t) {
                if let Some(y) = bits::iter(frame.up(x) & !t).next() {
                    return Err(Error::NotUpwardClosed(x, y));
                }
            }
        }
        Ok(KripkeModel { frame, truth })
    }

    pub fn frame(&self) -> &Poset {
        &self.frame
    }

    /// Truth set of each atom.
    pub fn valuation(&self) -> &[Mask] {
        &self.truth
    }

    /// `out[w]` says whether world `w` forces `f`.
    pub fn forcing(&self, f: &Formula) -> Result<Vec<bool>> {
        let m = self.forcing_mask(f)?;
        Ok((0..self.frame.size()).map(|w| bits::has(m, w)).collect())
    }

    /// The set of worlds forcing `f`.
    pub fn forcing_mask(&self, f: &Formula) -> Result<Mask> {
        if let Some(i) = f.atoms().into_iter().find(|&i| i >= self.truth.len()) {
            return Err(Error::UnassignedAtom(i));
        }
        Ok(self.force_set(f))
    }

    fn force_set(&self, f: &Formula) -> Mask {
        force_set(&self.frame, &self.truth, f)
    }
}

// Each clause is the textbook forcing condition at a single world,
// quantifying over the worlds above it where needed.
fn force_set(p: &Poset, truth: &[Mask], f: &Formula) -> Mask {
    let worlds = |cond: &dyn Fn(usize) -> bool| bits::from_indices((0..p.size()).filter(|&w| cond(w)));
    match f {
        Formula::Atom(i) => truth[*i],
        Formula::Top => p.carrier(),
        Formula::Bot => 0,
        Formula::Not(a) => {
            let a = force_set(p, truth, a);
            worlds(&|w| bits::iter(p.up(w)).all(|u| !bits::has(a, u)))
        }
        Formula::And(a, b) => {
            let (a, b) = (force_set(p, truth, a), force_set(p, truth, b));
            worlds(&|w| bits::has(a, w) && bits::has(b, w))
        }
        Formula::Or(a, b) => {
            let (a, b) = (force_set(p, truth, a), force_set(p, truth, b));
            worlds(&|w| bits::has(a, w) || bits::has(b, w))
        }
        Formula::Imp(a, b) => {
            let (a, b) = (force_set(p, truth, a), force_set(p, truth, b));
            worlds(&|w| bits::iter(p.up(w)).all(|u| !bits::has(a, u) || bits::has(b, u)))
        }
    }
}

pub fn forces(m: &KripkeModel, w: usize, f: &Formula) -> Result<bool> {
    if w >= m.frame.size() {
        return Err(Error::IndexOutOfRange { index: w, size: m.frame.size() });
    }
    Ok(m.forcing(f)?[w])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterModel {
    /// Truth set of each atom, as a bit mask over worlds.
    pub valuation: Vec<Mask>,
    pub world: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameValidity {
    pub holds: bool,
    pub counter: Option<CounterModel>,
}

pub fn frame_valid(p: &Poset, f: &Formula) -> Result<FrameValidity> {
    frame_valid_capped(p, f, VALUATION_CAP)
}

/// Tries every monotone valuation. The counter-model is the first failing
/// one in mixed-radix order over ascending up-set masks, atom 0 most
/// significant, with the least failing world.
pub fn frame_valid_capped(p: &Poset, f: &Formula, cap: u128) -> Result<FrameValidity> {
    let upsets = enumerate_upset_masks(p, UPSET_CAP)?;
    let n = f.atom_count();
    let radix = upsets.len() as u64;
    let total = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(radix as u128)).unwrap_or(u128::MAX);
    cap_check("valuations", total, cap)?;
    let decode = |mut k: u64| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = upsets[(k % radix) as usize];
            k /= radix;
        }
        v
    };
    let found = (0..total as u64)
        .into_par_iter()
        .find_map_first(|k| bits::iter(p.carrier() & !force_set(p, &decode(k), f)).next().map(|w| (k, w)));
    Ok(match found {
        None => FrameValidity { holds: true, counter: None },
        Some((k, world)) => FrameValidity { holds: false, counter: Some(CounterModel { valuation: decode(k), world }) },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementRow {
    pub name: String,
    pub formula: String,
    pub kripke: bool,
    pub algebra: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub rows: Vec<AgreementRow>,
    pub disagreements: Vec<String>,
}

impl AgreementReport {
    pub fn passes(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Frame validity against identity in the up-set algebra, formula by
/// formula. Any disagreement is a bug in one of the two evaluators.
pub fn dejongh_agreement(p: &Poset, corpus: &[(String, Formula)], cap: u128) -> Result<AgreementReport> {
    let b = from_upsets_capped(p, UPSET_CAP)?;
    let mut rows = Vec::with_capacity(corpus.len());
    let mut disagreements = Vec::new();
    for (name, f) in corpus {
        let kripke = frame_valid_capped(p, f, cap)?.holds;
        let algebra = is_identity_capped(&b, f, cap)?.holds;
        if kripke != algebra {
            disagreements.push(name.clone());
        }
        rows.push(AgreementRow { name: name.clone(), formula: f.to_string(), kripke, algebra });
    }
    Ok(AgreementReport { rows, disagreements })
}

/// A map between the carriers of two frames, not yet known to be a
/// p-morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    pub source: Poset,
    pub target: Poset,
    pub map: Vec<usize>,
}

impl PMorphism {
    pub fn new(source: Poset, target: Poset, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::PreconditionFailed(format!("map has {} entries, source has {}", map.len(), source.size())));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= target.size()) {
            return Err(Error::IndexOutOfRange { index: y, size: target.size() });
        }
        Ok(PMorphism { source, target, map })
    }

    pub fn identity(p: Poset) -> Self {
        let map = (0..p.size()).collect();
        PMorphism { source: p.clone(), target: p, map }
    }

    pub fn image(&self) -> Mask {
        bits::from_indices(self.map.iter().copied())
    }

    /// Least target world missed by the map.
    pub fn uncovered(&self) -> Option<usize> {
        bits::iter(self.target.carrier() & !self.image()).next()
    }

    /// Preimage of a set of target worlds.
    pub fn preimage(&self, s: Mask) -> Mask {
        bits::from_indices((0..self.map.len()).filter(|&x| bits::has(s, self.map[x])))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Forth,
    Back,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PMorphismCheck {
    pub holds: bool,
    /// For forth: source worlds `x <= y` whose images are not ordered. For
    /// back: source `x` and target `y >= f(x)` with no `z >= x` over `y`.
    pub failure: Option<(Condition, usize, usize)>,
}

fn back_fails(f: &PMorphism, x: usize) -> Option<usize> {
    let image = bits::from_indices(bits::iter(f.source.up(x)).map(|z| f.map[z]));
    bits::iter(f.target.up(f.map[x]) & !image).next()
}

pub fn is_pmorphism(f: &PMorphism) -> PMorphismCheck {
    let (s, t) = (&f.source, &f.target);
    let n = s.size();
    let forth = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| s.leq(x, y) && !t.leq(f.map[x], f.map[y]));
    let failure = match forth {
        Some((x, y)) => Some((Condition::Forth, x, y)),
        None => (0..n).find_map(|x| back_fails(f, x).map(|y| (Condition::Back, x, y))),
    };
    PMorphismCheck { holds: failure.is_none(), failure }
}

/// Upper bound on search nodes visited by [`find_pmorphism`].
pub const PMORPHISM_NODE_CAP: u128 = 50_000_000;

/// Length of the longest chain starting at each element.
fn depths(p: &Poset) -> Vec<usize> {
    let n = p.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| bits::iter(p.up(x)).count());
    let mut d = vec![0; n];
    for &x in &order {
        d[x] = bits::iter(p.up(x)).filter(|&u| u != x).map(|u| d[u] + 1).max().unwrap_or(0);
    }
    d
}

struct Search<'a> {
    s: &'a Poset,
    t: &'a Poset,
    onto: bool,
    candidates: Vec<Vec<usize>>,
    /// Source worlds whose back condition can be checked once `x` is set.
    ready: Vec<Vec<usize>>,
    map: Vec<usize>,
    nodes: u128,
    cap: u128,
    /// When set, every solution is recorded and the search continues.
    all: Option<Vec<Vec<usize>>>,
}

impl Search<'_> {
    fn go(&mut self, x: usize) -> Result<bool> {
        let n = self.s.size();
        if x == n {
            let ok = !self.onto || bits::from_indices(self.map.iter().copied()) == self.t.carrier();
            return Ok(match &mut self.all {
                Some(found) => {
                    if ok {
                        found.push(self.map.clone());
                    }
                    false
                }
                None => ok,
            });
        }
        for ci in 0..self.candidates[x].len() {
            let y = self.candidates[x][ci];
            self.nodes += 1;
            cap_check("p-morphism search nodes", self.nodes, self.cap)?;
            let forth_ok = (0..x).all(|z| {
                (!self.s.leq(z, x) || self.t.leq(self.map[z], y)) && (!self.s.leq(x, z) || self.t.leq(y, self.map[z]))
            });
            if !forth_ok {
                continue;
            }
            self.map[x] = y;
            let back_ok = self.ready[x].iter().all(|&w| {
                let image = bits::from_indices(bits::iter(self.s.up(w)).map(|z| self.map[z]));
                self.t.up(self.map[w]) & !image == 0
            });
            if back_ok && self.go(x + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Lexicographically least p-morphism from `source` to `target`, onto when
/// `require_onto` is set. A world is only sent where the target's up-set
/// is no larger and no deeper than its own, since back lifts every chain.
pub fn find_pmorphism(source: &Poset, target: &Poset, require_onto: bool) -> Result<Option<PMorphism>> {
    find_pmorphism_capped(source, target, require_onto, PMORPHISM_NODE_CAP)
}

pub fn find_pmorphism_capped(source: &Poset, target: &Poset, require_onto: bool, cap: u128) -> Result<Option<PMorphism>> {
    let mut search = Search::new(source, target, require_onto, cap, false);
    Ok(if search.go(0)? {
        Some(PMorphism { source: source.clone(), target: target.clone(), map: search.map })
    } else {
        None
    })
}

/// Every p-morphism from `source` to `target` (onto ones only when
/// `require_onto`), in lexicographic order.
pub fn all_pmorphisms(source: &Poset, target: &Poset, require_onto: bool, cap: u128) -> Result<Vec<PMorphism>> {
    let mut search = Search::new(source, target, require_onto, cap, true);
    search.go(0)?;
    let found = search.all.take().expect("collecting");
    Ok(found.into_iter().map(|map| PMorphism { source: source.clone(), target: target.clone(), map }).collect())
}

impl<'a> Search<'a> {
    fn new(source: &'a Poset, target: &'a Poset, onto: bool, cap: u128, collect: bool) -> Self {
        let (ds, dt) = (depths(source), depths(target));
        let ups = |p: &Poset, x: usize| bits::iter(p.up(x)).count();
        let candidates = (0..source.size())
            .map(|x| (0..target.size()).filter(|&y| dt[y] <= ds[x] && ups(target, y) <= ups(source, x)).collect())
            .collect();
        let mut ready = vec![Vec::new(); source.size()];
        for w in 0..source.size() {
            let last = bits::iter(source.up(w)).max().expect("reflexive");
            ready[last].push(w);
        }
        Search {
            s: source,
            t: target,
            onto,
            candidates,
            ready,
            map: vec![0; source.size()],
            nodes: 0,
            cap,
            all: collect.then(Vec::new),
        }
    }
}

/// The model on the source whose atoms hold at `x` iff they hold at `f(x)`.
pub fn pullback(f: &PMorphism, m: &KripkeModel) -> Result<KripkeModel> {
    if m.frame != f.target {
        return Err(Error::HostMismatch);
    }
    KripkeModel::new(f.source.clone(), m.truth.iter().map(|&t| f.preimage(t)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferRow {
    pub name: String,
    pub formula: String,
    pub source_valid: bool,
    pub target_valid: bool,
    /// When the target refutes the formula: whether the pulled-back
    /// counter-model refutes it in the source.
    pub pullback_refutes: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub rows: Vec<TransferRow>,
    pub violations: Vec<String>,
}

impl TransferReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Confirms `Th_K(source) ⊆ Th_K(target)` over the corpus by pulling each
/// target counter-model back to the source.
pub fn pmorphism_theory_transfer(f: &PMorphism, corpus: &[(String, Formula)], cap: u128) -> Result<TransferReport> {
    let check = is_pmorphism(f);
    if let Some((cond, x, y)) = check.failure {
        return Err(Error::NotAPMorphism(format!("{cond:?} fails at ({x}, {y})").to_lowercase()));
    }
    if let Some(y) = f.uncovered() {
        return Err(Error::NotOnto(y));
    }
    let mut rows = Vec::with_capacity(corpus.len());
    let mut violations = Vec::new();
    for (name, phi) in corpus {
        let source_valid = frame_valid_capped(&f.source, phi, cap)?.holds;
        let target = frame_valid_capped(&f.target, phi, cap)?;
        let pullback_refutes = match &target.counter {
            None => None,
            Some(c) => {
                let m = KripkeModel::new(f.target.clone(), c.valuation.clone())?;
                let pm = pullback(f, &m)?;
                Some(pm.forcing_mask(phi)? != f.source.carrier())
            }
        };
        if (source_valid && !target.holds) || pullback_refutes == Some(false) {
            violations.push(name.clone());
        }
        rows.push(TransferRow {
            name: name.clone(),
            formula: phi.to_string(),
            source_valid,
            target_valid: target.holds,
            pullback_refutes,
        });
    }
    Ok(TransferReport { rows, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Corpus;
    use crate::order::{antichain, binary_tree, chain, fork};

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn forcing_examples() {
        let m = KripkeModel::new(chain(2).unwrap(), vec![0b10]).unwrap();
        assert!(!forces(&m, 0, &p("p1 | ~p1")).unwrap());
        assert!(forces(&m, 1, &p("p1 | ~p1")).unwrap());
        assert!(forces(&m, 0, &p("p1 -> p1")).unwrap());
        let m = KripkeModel::new(fork(), vec![0b010]).unwrap();
        assert!(!forces(&m, 0, &p("~p1 | ~~p1")).unwrap());
        assert_eq!(forces(&m, 0, &p("p2")), Err(Error::UnassignedAtom(1)));
    }

    #[test]
    fn models_need_monotone_truth() {
        assert_eq!(KripkeModel::new(chain(2).unwrap(), vec![0b01]), Err(Error::NotUpwardClosed(0, 1)));
    }

    #[test]
    fn frame_validity() {
        assert!(frame_valid(&fork(), &p("p1 -> p1")).unwrap().holds);
        let r = frame_valid(&chain(2).unwrap(), &p("p1 | ~p1")).unwrap();
        assert_eq!(r.counter, Some(CounterModel { valuation: vec![0b10], world: 0 }));
        assert!(!frame_valid(&binary_tree(1).unwrap(), &p("~p1 | ~~p1")).unwrap().holds);
        assert!(frame_valid(&chain(3).unwrap(), &p("~p1 | ~~p1")).unwrap().holds);
    }

    #[test]
    fn agreement_examples() {
        let corpus = Corpus::standard().named();
        let r = dejongh_agreement(&chain(2).unwrap(), &corpus, VALUATION_CAP).unwrap();
        assert!(r.passes(), "{:?}", r.disagreements);
        let wlem = vec![("wlem".to_string(), p("~p1 | ~~p1"))];
        let r = dejongh_agreement(&fork(), &wlem, VALUATION_CAP).unwrap();
        assert_eq!((r.rows[0].kripke, r.rows[0].algebra), (false, false));
        let lem = vec![("lem".to_string(), p("p1 | ~p1"))];
        let r = dejongh_agreement(&antichain(1).unwrap(), &lem, VALUATION_CAP).unwrap();
        assert_eq!((r.rows[0].kripke, r.rows[0].algebra), (true, true));
    }

    #[test]
    fn pmorphism_examples() {
        assert!(is_pmorphism(&PMorphism::identity(fork())).holds);
        let f = PMorphism::new(fork(), chain(2).unwrap(), vec![0, 1, 1]).unwrap();
        assert!(is_pmorphism(&f).holds);
        let g = PMorphism::new(chain(2).unwrap(), fork(), vec![0, 1]).unwrap();
        assert_eq!(is_pmorphism(&g).failure, Some((Condition::Back, 0, 2)));
        let h = PMorphism::new(chain(2).unwrap(), chain(2).unwrap(), vec![1, 0]).unwrap();
        assert_eq!(is_pmorphism(&h).failure, Some((Condition::Forth, 0, 1)));
    }

    #[test]
    fn search_examples() {
        let f = find_pmorphism(&fork(), &chain(2).unwrap(), true).unwrap().unwrap();
        assert_eq!(f.map, vec![0, 1, 1]);
        assert!(find_pmorphism(&chain(2).unwrap(), &fork(), true).unwrap().is_none());
        let t = find_pmorphism(&binary_tree(2).unwrap(), &binary_tree(1).unwrap(), true).unwrap().unwrap();
        assert!(is_pmorphism(&t).holds);
        assert_eq!(t.uncovered(), None);
    }

    #[test]
    fn search_matches_brute_force() {
        let posets = [fork(), chain(2).unwrap(), chain(3).unwrap(), antichain(2).unwrap(), crate::order::diamond()];
        for s in &posets {
            for t in &posets {
                for onto in [false, true] {
                    let mut brute = Vec::new();
                    let total = t.size().pow(s.size() as u32);
                    for k in 0..total {
                        let mut map = vec![0; s.size()];
                        let mut r = k;
                        for slot in map.iter_mut().rev() {
                            *slot = r % t.size();
                            r /= t.size();
                        }
                        let f = PMorphism::new(s.clone(), t.clone(), map).unwrap();
                        if is_pmorphism(&f).holds && (!onto || f.uncovered().is_none()) {
                            brute.push(f.map);
                        }
                    }
                    let found = find_pmorphism(s, t, onto).unwrap().map(|f| f.map);
                    assert_eq!(found.as_ref(), brute.first());
                    let all: Vec<_> = all_pmorphisms(s, t, onto, PMORPHISM_NODE_CAP).unwrap().into_iter().map(|f| f.map).collect();
                    assert_eq!(all, brute);
                }
            }
        }
    }

    #[test]
    fn transfer_examples() {
        let lem = vec![("lem".to_string(), p("p1 | ~p1"))];
        let f = PMorphism::new(fork(), chain(2).unwrap(), vec![0, 1, 1]).unwrap();
        let r = pmorphism_theory_transfer(&f, &lem, VALUATION_CAP).unwrap();
        assert_eq!(r.rows[0].pullback_refutes, Some(true));
        assert!(r.passes());

        let corpus = Corpus::standard().named();
        let r = pmorphism_theory_transfer(&PMorphism::identity(fork()), &corpus, VALUATION_CAP).unwrap();
        assert!(r.rows.iter().all(|row| row.source_valid == row.target_valid));

        let t = find_pmorphism(&binary_tree(2).unwrap(), &binary_tree(1).unwrap(), true).unwrap().unwrap();
        let wlem = vec![("wlem".to_string(), p("~p1 | ~~p1"))];
        let r = pmorphism_theory_transfer(&t, &wlem, VALUATION_CAP).unwrap();
        assert_eq!((r.rows[0].source_valid, r.rows[0].target_valid, r.rows[0].pullback_refutes), (false, false, Some(true)));
    }

    #[test]
    fn transfer_preconditions() {
        let g = PMorphism::new(chain(2).unwrap(), fork(), vec![0, 1]).unwrap();
        assert!(matches!(pmorphism_theory_transfer(&g, &[], 10), Err(Error::NotAPMorphism(_))));
        let into = PMorphism::new(chain(1).unwrap(), chain(2).unwrap(), vec![1]).unwrap();
        assert!(is_pmorphism(&into).holds);
        assert_eq!(pmorphism_theory_transfer(&into, &[], 10), Err(Error::NotOnto(0)));
    }
}
