//! Strong u-antichains and the map `α(X) = Aᶜ ∪ ⋃_{i∈X} [x_i)` from the
//! reverse-inclusion powerset of the index set into an interval of
//! `up(U)`, together with its extension `γ` to the free lattice `B_n`.

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::brouwer::{homomorphism_report, interval_between, BrouwerAlgebra, HomReport, Interval, LawCheck};
use crate::error::{cap_check, Error, Result};
use crate::free::{medvedev_algebra, universal_extend, FreeLattice};
use crate::logic::{theory_compare, Formula, Inclusion, TheoryReport};
use crate::order::{boolean, boolean_reverse_usl, ImplicativeUsl};
use crate::upset::{DownSet, UPSET_CAP};

/// Largest index set accepted by [`AlphaMap`].
pub const ANTICHAIN_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntichainReport {
    /// Witness: an index `i` with `x_i ∉ A`.
    pub members: LawCheck,
    /// Witness: indices `i, j` with `x_i + x_j ∈ A`.
    pub joins_escape: LawCheck,
}

impl AntichainReport {
    pub fn passes(&self) -> bool {
        self.members.holds && self.joins_escape.holds
    }
}

pub fn check_strong_u_antichain(u: &ImplicativeUsl, a: Mask, xs: &[usize]) -> Result<AntichainReport> {
    let down = DownSet::new(u.poset(), a)?;
    if let Some(&x) = xs.iter().find(|&&x| x >= u.size()) {
        return Err(Error::IndexOutOfRange { index: x, size: u.size() });
    }
    let outside = xs.iter().position(|&x| !down.contains(x)).map(|i| vec![i]);
    let n = xs.len();
    let joined = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| down.contains(u.join(xs[i], xs[j])))
        .map(|(i, j)| vec![i, j]);
    Ok(AntichainReport {
        members: LawCheck::from_witness("members_in_a", outside),
        joins_escape: LawCheck::from_witness("joins_escape_a", joined),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongUAntichain {
    host: ImplicativeUsl,
    down_set: Mask,
    elements: Vec<usize>,
}

impl StrongUAntichain {
    pub fn new(host: ImplicativeUsl, down_set: Mask, elements: Vec<usize>) -> Result<Self> {
        let report = check_strong_u_antichain(&host, down_set, &elements)?;
        if !report.passes() {
            let bad = if report.members.holds { &report.joins_escape } else { &report.members };
            return Err(Error::PreconditionFailed(format!("{} fails at {:?}", bad.law, bad.witness)));
        }
        Ok(StrongUAntichain { host, down_set, elements })
    }

    /// Skips the antichain conditions but still requires `A` to be a
    /// down-set. Meant for showing what breaks without them.
    pub fn new_unchecked(host: ImplicativeUsl, down_set: Mask, elements: Vec<usize>) -> Result<Self> {
        DownSet::new(host.poset(), down_set)?;
        Ok(StrongUAntichain { host, down_set, elements })
    }

    pub fn host(&self) -> &ImplicativeUsl {
        &self.host
    }

    pub fn down_set(&self) -> Mask {
        self.down_set
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }
}

/// Boolean lattice of subsets of `{1..n}` under inclusion with join `∪`,
/// `A` the sets of size at most one and `x_i = {i}`.
pub fn powerset_instance(n: usize) -> Result<StrongUAntichain> {
    let u = ImplicativeUsl::from_poset(&boolean(n)?)?;
    let a = bits::from_indices((0..1usize << n).filter(|s| s.count_ones() <= 1));
    StrongUAntichain::new(u, a, (0..n).map(|i| 1 << i).collect())
}

/// `α(X)` for every `X ⊆ I`, indexed by the bit mask of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaMap {
    antichain: StrongUAntichain,
    values: Vec<Mask>,
}

impl AlphaMap {
    pub fn new(antichain: StrongUAntichain) -> Result<Self> {
        let n = antichain.elements.len();
        cap_check("antichain length", n as u128, ANTICHAIN_CAP as u128)?;
        let p = antichain.host.poset();
        let ac = p.carrier() & !antichain.down_set;
        let values = (0..1usize << n)
            .map(|x| bits::iter(x as Mask).fold(ac, |m, i| m | p.up(antichain.elements[i])))
            .collect();
        Ok(AlphaMap { antichain, values })
    }

    pub fn antichain(&self) -> &StrongUAntichain {
        &self.antichain
    }

    pub fn len(&self) -> usize {
        self.antichain.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antichain.elements.is_empty()
    }

    /// Mask of the whole index set.
    pub fn full(&self) -> Mask {
        bits::full(self.len())
    }

    pub fn alpha(&self, x: Mask) -> Mask {
        self.values[(x & self.full()) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub laws: Vec<LawCheck>,
}

impl AlphaReport {
    pub fn passes(&self) -> bool {
        self.laws.iter().all(|l| l.holds)
    }

    pub fn law(&self, name: &str) -> Option<&LawCheck> {
        self.laws.iter().find(|l| l.law == name)
    }
}

/// `up(U)` and the interval `[α(I), α(∅)]` in it.
pub fn alpha_interval(am: &AlphaMap) -> Result<(BrouwerAlgebra, Vec<Mask>, Interval)> {
    let (b, masks) = BrouwerAlgebra::from_upsets_with_masks(am.antichain.host.poset(), UPSET_CAP)?;
    let idx = |m: Mask| masks.binary_search(&m).expect("α values are up-sets");
    let iv = interval_between(&b, idx(am.alpha(am.full())), idx(am.alpha(0)))?;
    Ok((b, masks, iv))
}

/// Exhaustive check that `α` is an order embedding of `⟨P(I), ⊇⟩` into
/// `[α(I), α(∅)]` preserving joins, the arrow and both bounds.
pub fn verify_alpha_embedding(am: &AlphaMap) -> Result<AlphaReport> {
    let p = am.antichain.host.poset();
    let xs = &am.antichain.elements;
    let ac = p.carrier() & !am.antichain.down_set;
    let n = am.len();
    let full = am.full();
    let subsets: Vec<Mask> = (0..=full).collect();
    let pairs = || subsets.iter().flat_map(|&x| subsets.iter().map(move |&y| (x, y)));

    let mut laws = Vec::new();
    let closed = subsets.iter().find(|&&x| !p.is_up_closed(am.alpha(x))).map(|&x| vec![x as usize]);
    laws.push(LawCheck::from_witness("upward_closed", closed));

    let cones = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| p.up(xs[i]) & p.up(xs[j]) & !ac != 0)
        .map(|(i, j)| vec![i, j]);
    laws.push(LawCheck::from_witness("cones_meet_outside_a", cones));

    let bounds_ok = am.alpha(0) == ac
        && subsets.iter().all(|&x| {
            let v = am.alpha(x);
            v & am.alpha(full) == v && v & am.alpha(0) == am.alpha(0)
        });
    laws.push(LawCheck::from_witness("bounds", if bounds_ok { None } else { Some(vec![]) }));

    // X ⊇ Y iff α(X) ⊇ α(Y)
    let order = pairs()
        .find(|&(x, y)| (x & y == y) != (am.alpha(x) & am.alpha(y) == am.alpha(y)))
        .map(|(x, y)| vec![x as usize, y as usize]);
    laws.push(LawCheck::from_witness("order_embedding", order));

    let joins = pairs()
        .find(|&(x, y)| am.alpha(x & y) != am.alpha(x) & am.alpha(y))
        .map(|(x, y)| vec![x as usize, y as usize]);
    laws.push(LawCheck::from_witness("joins", joins));

    let (_, masks, iv) = alpha_interval(am)?;
    let idx = |m: Mask| iv.index_of(masks.binary_search(&m).expect("up-set")).expect("inside the interval");
    let u = boolean_reverse_usl(n)?;
    let arrow = pairs()
        .find(|&(x, y)| idx(am.alpha(u.arrow(x as usize, y as usize) as Mask)) != iv.algebra.arrow(idx(am.alpha(x)), idx(am.alpha(y))))
        .map(|(x, y)| vec![x as usize, y as usize]);
    laws.push(LawCheck::from_witness("arrow", arrow));
    Ok(AlphaReport { laws })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub n: usize,
    /// `map[e]` is the interval index of `γ(e)` for each element `e` of `B_n`.
    pub map: Vec<usize>,
    pub laws: HomReport,
    pub agrees_with_extension: LawCheck,
}

impl GammaReport {
    /// A Brouwer-algebra embedding: every operation, both bounds,
    /// injective and order reflecting.
    pub fn passes(&self) -> bool {
        self.laws.is_embedding() && self.agrees_with_extension.holds
    }
}

/// `γ(⋀_{x∈X} [x)) = ⋀_{x∈X} α(x)` computed directly, where the meet of
/// up-sets is their union and the empty meet is `α(∅)`. Checked against
/// the free-lattice extension of `α` and for every embedding law.
pub fn gamma_embedding(am: &AlphaMap) -> Result<(GammaReport, FreeLattice, Interval)> {
    let alpha_report = verify_alpha_embedding(am)?;
    if !alpha_report.passes() {
        let bad = alpha_report.laws.iter().find(|l| !l.holds).expect("a failing law");
        return Err(Error::PreconditionFailed(format!("alpha embedding fails {} at {:?}", bad.law, bad.witness)));
    }
    let n = am.len();
    let bn = medvedev_algebra(n, n == 5)?;
    let (_, masks, iv) = alpha_interval(am)?;
    let idx = |m: Mask| iv.index_of(masks.binary_search(&m).expect("up-set")).expect("inside the interval");
    let map: Vec<usize> = (0..bn.algebra().size())
        .map(|e| idx(bits::iter(bn.upset_of(e)).fold(am.alpha(0), |m, x| m | am.alpha(x as Mask))))
        .collect();
    let laws = homomorphism_report(bn.algebra(), &iv.algebra, &map);
    let g: Vec<usize> = (0..1usize << n).map(|x| idx(am.alpha(x as Mask))).collect();
    let ext = universal_extend(&bn, &g, &iv.algebra)?;
    let differs = (0..map.len()).find(|&e| ext.map[e] != map[e]).map(|e| vec![e]);
    let report = GammaReport { n, map, laws, agrees_with_extension: LawCheck::from_witness("matches_universal_extension", differs) };
    Ok((report, bn, iv))
}

/// Identities of `[α(I), α(∅)]` against identities of `B_n` over a corpus.
/// An embedding forces every interval identity to hold in `B_n`.
pub fn embedding_theory_check(am: &AlphaMap, corpus: &[(String, Formula)], cap: u128) -> Result<TheoryReport> {
    let (_, bn, iv) = gamma_embedding(am)?;
    theory_compare(&iv.algebra, bn.algebra(), corpus, Some(Inclusion::FirstInSecond), cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> AlphaMap {
        AlphaMap::new(powerset_instance(2).unwrap()).unwrap()
    }

    #[test]
    fn antichain_examples() {
        let u = ImplicativeUsl::from_poset(&boolean(2).unwrap()).unwrap();
        let a = 0b0111;
        assert!(check_strong_u_antichain(&u, a, &[1]).unwrap().passes());
        assert!(check_strong_u_antichain(&u, a, &[1, 2]).unwrap().passes());
        let r = check_strong_u_antichain(&u, a, &[0, 1]).unwrap();
        assert_eq!(r.joins_escape.witness, Some(vec![0, 1]));
        assert!(r.members.holds);
        assert_eq!(check_strong_u_antichain(&u, 0b0110, &[1]).unwrap_err(), Error::NotDownwardClosed(1, 0));
        assert_eq!(powerset_instance(2).unwrap().down_set(), a);
    }

    #[test]
    fn alpha_values() {
        let am = two();
        assert_eq!(am.alpha(0), 0b1000);
        assert_eq!(am.alpha(0b01), 0b1010);
        assert_eq!(am.alpha(0b11), 0b1110);
    }

    #[test]
    fn alpha_embedding_passes() {
        for n in 1..=3 {
            let r = verify_alpha_embedding(&AlphaMap::new(powerset_instance(n).unwrap()).unwrap()).unwrap();
            assert!(r.passes(), "n = {n}: {r:?}");
        }
    }

    #[test]
    fn broken_instance_loses_joins() {
        let u = ImplicativeUsl::from_poset(&boolean(2).unwrap()).unwrap();
        let am = AlphaMap::new(StrongUAntichain::new_unchecked(u.clone(), 0b0111, vec![0, 1]).unwrap()).unwrap();
        assert!(StrongUAntichain::new(u, 0b0111, vec![0, 1]).is_err());
        let r = verify_alpha_embedding(&am).unwrap();
        assert_eq!(r.law("joins").unwrap().witness, Some(vec![1, 2]));
        assert!(gamma_embedding(&am).is_err());
    }

    #[test]
    fn gamma_is_a_lattice_map_matching_the_extension() {
        for n in 1..=2 {
            let (r, bn, iv) = gamma_embedding(&AlphaMap::new(powerset_instance(n).unwrap()).unwrap()).unwrap();
            assert!(r.agrees_with_extension.holds);
            for law in ["meet", "join", "bottom", "top"] {
                assert!(r.laws.holds(law), "n = {n}, {law}");
            }
            assert_eq!(r.map[bn.algebra().bottom()], iv.algebra.bottom());
            assert_eq!(r.map[bn.algebra().top()], iv.algebra.top());
        }
    }
}
