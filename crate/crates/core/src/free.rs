//! The free distributive lattice over a finite implicative upper
//! semilattice `U`.
//!
//! An element is a formal meet `⋀_{x∈X} [x)` of principal up-sets for a
//! finite `X ⊆ U`, and two formal meets are identified when they generate
//! the same up-set. For finite `U` every up-set arises this way, so the
//! lattice is `up(U)` itself; `X = ∅` gives the empty up-set, the top.
//! The generator map is `ι(x) = [x)`.

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::brouwer::{self, homomorphism_report, BrouwerAlgebra, HomReport, LawCheck, Provenance};
use crate::error::{cap_check, Error, Result};
use crate::order::{boolean_reverse_usl, ImplicativeUsl};
use crate::upset::UPSET_CAP;

/// A formal meet of generators, identified by the up-set it generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeElement {
    upset: Mask,
}

impl FreeElement {
    pub fn from_generators(u: &ImplicativeUsl, generators: Mask) -> Self {
        FreeElement { upset: u.poset().up_closure(generators) }
    }

    pub fn upset(&self) -> Mask {
        self.upset
    }
}

#[derive(Clone, Debug)]
pub struct FreeLattice {
    base: ImplicativeUsl,
    algebra: BrouwerAlgebra,
    upsets: Vec<Mask>,
    iota: Vec<usize>,
}

pub fn free_over(u: &ImplicativeUsl) -> Result<FreeLattice> {
    free_over_capped(u, UPSET_CAP)
}

pub fn free_over_capped(u: &ImplicativeUsl, cap: usize) -> Result<FreeLattice> {
    let (algebra, upsets) = BrouwerAlgebra::from_upsets_with_masks(u.poset(), cap)?;
    let algebra = algebra.with_provenance(Provenance::FreeOver);
    let iota = (0..u.size())
        .map(|x| upsets.binary_search(&u.poset().up(x)).expect("principal up-set is enumerated"))
        .collect();
    let f = FreeLattice { base: u.clone(), algebra, upsets, iota };
    let gens = f.generator_image();
    if brouwer::meet_irreducibles(&f.algebra) != gens {
        return Err(Error::MalformedAlgebra("generator image differs from the meet-irreducibles".into()));
    }
    Ok(f)
}

impl FreeLattice {
    pub fn base(&self) -> &ImplicativeUsl {
        &self.base
    }

    pub fn algebra(&self) -> &BrouwerAlgebra {
        &self.algebra
    }

    /// `ι(x)` as an algebra index.
    pub fn iota(&self, x: usize) -> usize {
        self.iota[x]
    }

    pub fn iota_map(&self) -> &[usize] {
        &self.iota
    }

    /// Sorted, deduplicated image of `ι`.
    pub fn generator_image(&self) -> Vec<usize> {
        let mut g = self.iota.clone();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The up-set of base elements behind algebra element `e`.
    pub fn upset_of(&self, e: usize) -> Mask {
        self.upsets[e]
    }

    pub fn element(&self, x: FreeElement) -> usize {
        self.upsets.binary_search(&x.upset).expect("every up-set is an element")
    }

    /// Algebra index of `⋀_{x∈X} [x)`.
    pub fn meet_of_generators(&self, generators: Mask) -> usize {
        self.element(FreeElement::from_generators(&self.base, generators))
    }
}

/// `⋀_X [x) <= ⋀_Y [y)` iff every `y` is above some `x`.
pub fn free_leq(u: &ImplicativeUsl, x: Mask, y: Mask) -> bool {
    bits::iter(y).all(|b| bits::iter(x).any(|a| u.leq(a, b)))
}

/// Default largest `n` for [`medvedev_algebra`]; `n = 5` needs
/// `allow_large`.
pub const MEDVEDEV_CAP: usize = 4;

/// The free lattice over subsets of `{1..n}` under reverse inclusion.
pub fn medvedev_algebra(n: usize, allow_large: bool) -> Result<FreeLattice> {
    let cap = if allow_large { 5 } else { MEDVEDEV_CAP };
    cap_check("medvedev n", n as u128, cap as u128)?;
    free_over(&boolean_reverse_usl(n)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    /// `map[e]` is the image of free-lattice element `e`.
    pub map: Vec<usize>,
    pub laws: HomReport,
    pub agrees_on_generators: LawCheck,
    pub meet_generated: LawCheck,
}

impl Extension {
    /// A bounded-lattice homomorphism extending `g`, determined by it.
    pub fn passes(&self) -> bool {
        ["meet", "join", "bottom", "top"].iter().all(|l| self.laws.holds(l))
            && self.agrees_on_generators.holds
            && self.meet_generated.holds
    }
}

/// Extends a join-preserving `g: U -> target` to `g'(⋀_X [x)) = ⋀ g(x)`.
/// The empty meet goes to the target's top.
pub fn universal_extend(f: &FreeLattice, g: &[usize], target: &BrouwerAlgebra) -> Result<Extension> {
    let u = &f.base;
    let n = u.size();
    if g.len() != n {
        return Err(Error::PreconditionFailed(format!("map has {} entries, base has {}", g.len(), n)));
    }
    if let Some(&v) = g.iter().find(|&&v| v >= target.size()) {
        return Err(Error::IndexOutOfRange { index: v, size: target.size() });
    }
    for a in 0..n {
        for b in 0..n {
            if g[u.join(a, b)] != target.join(g[a], g[b]) {
                return Err(Error::NotAUslHom(a, b));
            }
        }
    }
    let map: Vec<usize> = f.upsets.iter().map(|&m| target.meet_all(bits::iter(m).map(|x| g[x]))).collect();
    let laws = homomorphism_report(&f.algebra, target, &map);
    let agrees = (0..n).find(|&x| map[f.iota[x]] != g[x]).map(|x| vec![x]);
    // every element is the meet of the generators it contains
    let alg = &f.algebra;
    let generated = (0..alg.size())
        .find(|&e| alg.meet_all(bits::iter(f.upsets[e]).map(|x| f.iota[x])) != e)
        .map(|e| vec![e]);
    Ok(Extension {
        map,
        laws,
        agrees_on_generators: LawCheck::from_witness("extends_g", agrees),
        meet_generated: LawCheck::from_witness("meet_generated", generated),
    })
}

/// `ι(x →ᵤ y) = ι(x) → ι(y)` for all base pairs.
pub fn iota_arrow_check(f: &FreeLattice) -> LawCheck {
    let u = &f.base;
    let n = u.size();
    let w = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| f.iota[u.arrow(x, y)] != f.algebra.arrow(f.iota[x], f.iota[y]))
        .map(|(x, y)| vec![x, y]);
    LawCheck::from_witness("iota_preserves_arrow", w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brouwer::{from_upsets, meet_irreducibles};
    use crate::order::{chain, ImplicativeUsl};

    #[test]
    fn small_free_lattices() {
        let b1 = free_over(&boolean_reverse_usl(1).unwrap()).unwrap();
        assert_eq!(b1.algebra().size(), 3);
        assert_eq!(b1.generator_image().len(), 2);
        let b2 = free_over(&boolean_reverse_usl(2).unwrap()).unwrap();
        assert_eq!(b2.algebra().size(), 6);
        assert_eq!(b2.generator_image().len(), 4);
        assert_eq!(meet_irreducibles(b2.algebra()).len(), 4);
    }

    #[test]
    fn chain_usl() {
        let u = ImplicativeUsl::from_poset(&chain(2).unwrap()).unwrap();
        let f = free_over(&u).unwrap();
        assert_eq!(f.algebra().size(), 3);
        let top = f.algebra().top();
        assert!(f.iota_map().iter().all(|&e| e != top));
        assert_eq!(f.generator_image().len(), 2);
    }

    #[test]
    fn free_leq_examples() {
        let u = boolean_reverse_usl(2).unwrap();
        for x in 0..16u64 {
            assert!(free_leq(&u, x, x));
            assert_eq!(free_leq(&u, 0, x), x == 0);
        }
        // X = {{1},{2}}, Y = {∅}: {1} ⊇ ∅
        let x = bits::from_indices([0b01, 0b10]);
        let y = bits::from_indices([0b00]);
        assert!(free_leq(&u, x, y));
        assert!(!free_leq(&u, y, x));
    }

    #[test]
    fn medvedev_caps() {
        assert!(matches!(medvedev_algebra(5, false), Err(Error::CapExceeded { .. })));
        assert_eq!(medvedev_algebra(3, false).unwrap().algebra().size(), 20);
    }

    #[test]
    fn extension_of_iota_is_identity() {
        let f = medvedev_algebra(2, false).unwrap();
        let ext = universal_extend(&f, f.iota_map(), f.algebra()).unwrap();
        assert_eq!(ext.map, (0..6).collect::<Vec<_>>());
        assert!(ext.passes());
    }

    #[test]
    fn extension_of_constant_zero() {
        let f = medvedev_algebra(2, false).unwrap();
        let target = from_upsets(&chain(2).unwrap()).unwrap();
        let g = vec![target.bottom(); 4];
        let ext = universal_extend(&f, &g, &target).unwrap();
        for e in 0..f.algebra().size() {
            let want = if e == f.algebra().top() { target.top() } else { target.bottom() };
            assert_eq!(ext.map[e], want);
        }
        assert!(ext.passes());
    }

    #[test]
    fn extension_onto_three_chain() {
        let f = medvedev_algebra(2, false).unwrap();
        let target = from_upsets(&chain(2).unwrap()).unwrap();
        let (top, m, zero) = (0, 1, 2);
        // ∅ ↦ m, {1} ↦ m, {2} ↦ m, {1,2} ↦ 0
        let g = vec![m, m, m, zero];
        let ext = universal_extend(&f, &g, &target).unwrap();
        assert!(ext.passes(), "{ext:?}");
        assert_eq!(ext.map[f.algebra().top()], top);

        let not_hom = vec![zero, m, m, zero];
        assert_eq!(universal_extend(&f, &not_hom, &target).unwrap_err(), Error::NotAUslHom(0, 1));
    }

    #[test]
    fn iota_preserves_arrow() {
        let f = medvedev_algebra(2, false).unwrap();
        assert!(iota_arrow_check(&f).holds);
        let u = f.base();
        assert_eq!(f.iota(u.arrow(0b01, 0b10)), f.iota(0b10));
        for x in 0..4 {
            assert_eq!(f.algebra().arrow(f.iota(x), f.iota(x)), f.iota(u.bottom()));
        }
    }
}
