//! Finite Brouwer algebras as explicit operation tables.
//!
//! A Brouwer algebra is a bounded distributive lattice in which every pair
//! `a, b` has a least `c` with `a ∨ c >= b`, written `a → b`. Validity of a
//! formula means evaluating to the least element `0`, and `¬a = a → 1`.
//!
//! Meet- and join-irreducibility exclude the top and the bottom
//! respectively: `x != 1` is meet-irreducible when it is not `y ∧ z` for
//! some `y, z > x`, and dually.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::Poset;
use crate::upset::{self, UPSET_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromUpsets,
    FreeOver,
    AddTop,
    Interval,
    Raw,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrouwerAlgebra {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<u32>,
    join: Vec<u32>,
    arrow: Vec<u32>,
    bottom: usize,
    top: usize,
    provenance: Provenance,
    labels: Option<Vec<String>>,
}

/// Result of checking one law; `witness` is the first failing tuple in scan
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl LawCheck {
    pub fn from_witness(law: &str, witness: Option<Vec<usize>>) -> Self {
        LawCheck { law: law.to_string(), holds: witness.is_none(), witness }
    }
}

/// Scans `0..n` for the first `a` yielding a witness.
fn first_witness<F>(n: usize, f: F) -> Option<Vec<usize>>
where
    F: Fn(usize) -> Option<Vec<usize>> + Sync + Send,
{
    (0..n).into_par_iter().find_map_first(f)
}

impl BrouwerAlgebra {
    /// Wraps raw tables after shape checks only; use [`validate_brouwer`]
    /// for the algebraic laws.
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        size: usize,
        leq: Vec<bool>,
        meet: Vec<u32>,
        join: Vec<u32>,
        arrow: Vec<u32>,
        bottom: usize,
        top: usize,
        provenance: Provenance,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        let n2 = size * size;
        for (name, len) in [("leq", leq.len()), ("meet", meet.len()), ("join", join.len()), ("arrow", arrow.len())] {
            if len != n2 {
                return Err(Error::MalformedAlgebra(format!("{name} table has {len} entries, expected {n2}")));
            }
        }
        for (name, t) in [("meet", &meet), ("join", &join), ("arrow", &arrow)] {
            if let Some(&v) = t.iter().find(|&&v| v as usize >= size) {
                return Err(Error::MalformedAlgebra(format!("{name} table value {v} out of range")));
            }
        }
        if bottom >= size || top >= size {
            return Err(Error::MalformedAlgebra("bottom or top out of range".into()));
        }
        Ok(BrouwerAlgebra { size, leq, meet, join, arrow, bottom, top, provenance, labels: None })
    }

    /// Builds meet and join from a lattice order given as a row-major
    /// matrix. The arrow is the least residual where one exists and the
    /// top otherwise, so non-distributive lattices load and then fail
    /// validation.
    pub fn from_lattice_order(size: usize, leq: Vec<bool>, provenance: Provenance) -> Result<Self> {
        if leq.len() != size * size || size == 0 {
            return Err(Error::MalformedAlgebra("order matrix has the wrong shape".into()));
        }
        let le = |a: usize, b: usize| leq[a * size + b];
        let least = |cands: &[usize]| cands.iter().copied().find(|&c| cands.iter().all(|&d| le(c, d)));
        let greatest = |cands: &[usize]| cands.iter().copied().find(|&c| cands.iter().all(|&d| le(d, c)));
        let all: Vec<usize> = (0..size).collect();
        let bottom = least(&all).ok_or_else(|| Error::MalformedAlgebra("no least element".into()))?;
        let top = greatest(&all).ok_or_else(|| Error::MalformedAlgebra("no greatest element".into()))?;
        let mut meet = vec![0u32; size * size];
        let mut join = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                let ub: Vec<usize> = (0..size).filter(|&c| le(a, c) && le(b, c)).collect();
                let lb: Vec<usize> = (0..size).filter(|&c| le(c, a) && le(c, b)).collect();
                join[a * size + b] =
                    least(&ub).ok_or_else(|| Error::MalformedAlgebra(format!("no join for ({a}, {b})")))? as u32;
                meet[a * size + b] =
                    greatest(&lb).ok_or_else(|| Error::MalformedAlgebra(format!("no meet for ({a}, {b})")))? as u32;
            }
        }
        let mut arrow = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                let res: Vec<usize> = (0..size).filter(|&c| le(b, join[a * size + c] as usize)).collect();
                arrow[a * size + b] = least(&res).unwrap_or(top) as u32;
            }
        }
        Self::from_tables(size, leq, meet, join, arrow, bottom, top, provenance)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::MalformedAlgebra("label count does not match size".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    /// Index of the element carrying `label`, if labels are present.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b] as usize
    }

    #[inline]
    pub fn arrow(&self, a: usize, b: usize) -> usize {
        self.arrow[a * self.size + b] as usize
    }

    /// `a → 1`
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.arrow(a, self.top)
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.top, |m, x| self.meet(m, x))
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.bottom, |m, x| self.join(m, x))
    }

    /// The algebra `up(P)` of up-sets ordered by reverse inclusion, with
    /// element indices following ascending masks. Returns it with the mask
    /// of each element.
    pub fn from_upsets_with_masks(p: &Poset, cap: usize) -> Result<(Self, Vec<u64>)> {
        let masks = upset::enumerate_upset_masks(p, cap)?;
        let n = masks.len();
        let index = |m: u64| masks.binary_search(&m).expect("operation result is an up-set") as u32;
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        let mut arrow = vec![0u32; n * n];
        let mut leq = vec![false; n * n];
        meet.par_chunks_mut(n)
            .zip(join.par_chunks_mut(n))
            .zip(arrow.par_chunks_mut(n))
            .zip(leq.par_chunks_mut(n))
            .enumerate()
            .for_each(|(a, (((mr, jr), ar), lr))| {
                let x = masks[a];
                for (b, &y) in masks.iter().enumerate() {
                    mr[b] = index(x | y);
                    jr[b] = index(x & y);
                    ar[b] = index(upset::arrow_mask(p, x, y));
                    lr[b] = x & y == y;
                }
            });
        let bottom = n - 1;
        let labels = masks.iter().map(|&m| upset::UpSet::new_unchecked(p, m).describe()).collect();
        let alg = Self::from_tables(n, leq, meet, join, arrow, bottom, 0, Provenance::FromUpsets)?.with_labels(labels)?;
        Ok((alg, masks))
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

pub fn from_upsets(p: &Poset) -> Result<BrouwerAlgebra> {
    from_upsets_capped(p, UPSET_CAP)
}

pub fn from_upsets_capped(p: &Poset, cap: usize) -> Result<BrouwerAlgebra> {
    Ok(BrouwerAlgebra::from_upsets_with_masks(p, cap)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub laws: Vec<LawCheck>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.laws.iter().all(|l| l.holds)
    }

    pub fn law(&self, name: &str) -> Option<&LawCheck> {
        self.laws.iter().find(|l| l.law == name)
    }
}

/// Checks the order, lattice, boundedness, distributivity and residuation
/// laws exhaustively, reporting the first counterexample of each.
pub fn validate_brouwer(b: &BrouwerAlgebra) -> ValidationReport {
    let n = b.size;
    let mut laws = Vec::new();

    let order = first_witness(n, |a| {
        if !b.leq(a, a) {
            return Some(vec![a]);
        }
        for c in 0..n {
            if c != a && b.leq(a, c) && b.leq(c, a) {
                return Some(vec![a, c]);
            }
            for d in 0..n {
                if b.leq(a, c) && b.leq(c, d) && !b.leq(a, d) {
                    return Some(vec![a, c, d]);
                }
            }
        }
        None
    });
    laws.push(LawCheck::from_witness("partial_order", order));

    let glb = first_witness(n, |a| {
        (0..n).find_map(|c| {
            let m = b.meet(a, c);
            if !b.leq(m, a) || !b.leq(m, c) {
                return Some(vec![a, c]);
            }
            (0..n).find(|&d| b.leq(d, a) && b.leq(d, c) && !b.leq(d, m)).map(|d| vec![a, c, d])
        })
    });
    laws.push(LawCheck::from_witness("meet_is_glb", glb));

    let lub = first_witness(n, |a| {
        (0..n).find_map(|c| {
            let j = b.join(a, c);
            if !b.leq(a, j) || !b.leq(c, j) {
                return Some(vec![a, c]);
            }
            (0..n).find(|&d| b.leq(a, d) && b.leq(c, d) && !b.leq(j, d)).map(|d| vec![a, c, d])
        })
    });
    laws.push(LawCheck::from_witness("join_is_lub", lub));

    let bounds = (0..n).find(|&a| !b.leq(b.bottom, a) || !b.leq(a, b.top)).map(|a| vec![a]);
    laws.push(LawCheck::from_witness("bounds", bounds));
    laws.push(LawCheck::from_witness("nontrivial", (b.bottom == b.top).then(|| vec![b.bottom])));

    let dist = first_witness(n, |a| {
        for c in 0..n {
            for d in 0..n {
                if b.meet(a, b.join(c, d)) != b.join(b.meet(a, c), b.meet(a, d)) {
                    return Some(vec![a, c, d]);
                }
            }
        }
        None
    });
    laws.push(LawCheck::from_witness("distributivity", dist));
    laws.push(residuation(b));
    ValidationReport { laws }
}

/// `b <= a ∨ c` iff `a → b <= c`, for all triples.
pub fn residuation(b: &BrouwerAlgebra) -> LawCheck {
    let n = b.size;
    let w = first_witness(n, |a| {
        for x in 0..n {
            let r = b.arrow(a, x);
            for c in 0..n {
                if b.leq(x, b.join(a, c)) != b.leq(r, c) {
                    return Some(vec![a, x, c]);
                }
            }
        }
        None
    });
    LawCheck::from_witness("residuation", w)
}

/// `a ∧ b → c = (a → c) ∨ (b → c)` for all triples.
pub fn meet_arrow_law(b: &BrouwerAlgebra) -> LawCheck {
    let n = b.size;
    let w = first_witness(n, |a| {
        for x in 0..n {
            let m = b.meet(a, x);
            for c in 0..n {
                if b.arrow(m, c) != b.join(b.arrow(a, c), b.arrow(x, c)) {
                    return Some(vec![a, x, c]);
                }
            }
        }
        None
    });
    LawCheck::from_witness("meet_arrow", w)
}

/// `a → b <= b` for all pairs.
pub fn arrow_below_law(b: &BrouwerAlgebra) -> LawCheck {
    let n = b.size;
    let w = first_witness(n, |a| (0..n).find(|&x| !b.leq(b.arrow(a, x), x)).map(|x| vec![a, x]));
    LawCheck::from_witness("arrow_below", w)
}

/// Meet-irreducible elements (top excluded), ascending.
///
/// In a finite lattice `x` is `y ∧ z` for some `y, z > x` exactly when `x`
/// is the meet of everything strictly above it.
pub fn meet_irreducibles(b: &BrouwerAlgebra) -> Vec<usize> {
    (0..b.size)
        .filter(|&x| x != b.top && b.meet_all((0..b.size).filter(|&y| b.lt(x, y))) != x)
        .collect()
}

/// Join-irreducible elements (bottom excluded), ascending.
pub fn join_irreducibles(b: &BrouwerAlgebra) -> Vec<usize> {
    (0..b.size)
        .filter(|&x| x != b.bottom && b.join_all((0..b.size).filter(|&y| b.lt(y, x))) != x)
        .collect()
}

/// `0` is meet-irreducible and `1` is join-irreducible, tested on the
/// extremes directly.
pub fn embeddable_shape(b: &BrouwerAlgebra) -> bool {
    let n = b.size;
    let zero_split = (0..n).any(|y| b.lt(b.bottom, y) && (0..n).any(|z| b.lt(b.bottom, z) && b.meet(y, z) == b.bottom));
    let one_split = (0..n).any(|y| b.lt(y, b.top) && (0..n).any(|z| b.lt(z, b.top) && b.join(y, z) == b.top));
    !zero_split && !one_split
}

/// A sub-interval `[lo, hi]` as an algebra of its own, with `members[i]`
/// the parent index of interval element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub algebra: BrouwerAlgebra,
    pub members: Vec<usize>,
}

impl Interval {
    pub fn index_of(&self, parent: usize) -> Option<usize> {
        self.members.binary_search(&parent).ok()
    }
}

/// `[0, a]` with the operations restricted.
pub fn interval(b: &BrouwerAlgebra, a: usize) -> Result<Interval> {
    if a >= b.size {
        return Err(Error::IndexOutOfRange { index: a, size: b.size });
    }
    if a == b.bottom {
        return Err(Error::BottomTop);
    }
    interval_between(b, b.bottom, a)
}

/// `[lo, hi]` for `lo < hi`. The arrow of the interval is `lo ∨ (x → y)`,
/// which is the plain restriction when `lo = 0`.
pub fn interval_between(b: &BrouwerAlgebra, lo: usize, hi: usize) -> Result<Interval> {
    for x in [lo, hi] {
        if x >= b.size {
            return Err(Error::IndexOutOfRange { index: x, size: b.size });
        }
    }
    if !b.lt(lo, hi) {
        return Err(Error::PreconditionFailed(format!("interval needs {lo} < {hi}")));
    }
    let members: Vec<usize> = (0..b.size).filter(|&x| b.leq(lo, x) && b.leq(x, hi)).collect();
    let m = members.len();
    let pos = |x: usize| -> Result<u32> {
        members
            .binary_search(&x)
            .map(|i| i as u32)
            .map_err(|_| Error::MalformedAlgebra(format!("operation leaves the interval at {x}")))
    };
    let mut leq = vec![false; m * m];
    let mut meet = vec![0u32; m * m];
    let mut join = vec![0u32; m * m];
    let mut arrow = vec![0u32; m * m];
    for (i, &x) in members.iter().enumerate() {
        for (j, &y) in members.iter().enumerate() {
            leq[i * m + j] = b.leq(x, y);
            meet[i * m + j] = pos(b.meet(x, y))?;
            join[i * m + j] = pos(b.join(x, y))?;
            arrow[i * m + j] = pos(b.join(lo, b.arrow(x, y)))?;
        }
    }
    let algebra = BrouwerAlgebra::from_tables(m, leq, meet, join, arrow, pos(lo)? as usize, pos(hi)? as usize, Provenance::Interval)?;
    let algebra = match &b.labels {
        Some(l) => algebra.with_labels(members.iter().map(|&x| l[x].clone()).collect())?,
        None => algebra,
    };
    Ok(Interval { algebra, members })
}

/// Which laws a map between two algebras satisfies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    pub laws: Vec<LawCheck>,
}

impl HomReport {
    pub fn law(&self, name: &str) -> &LawCheck {
        self.laws.iter().find(|l| l.law == name).expect("law is always reported")
    }

    pub fn holds(&self, name: &str) -> bool {
        self.law(name).holds
    }

    /// Preserves meet, join, arrow and both bounds.
    pub fn is_homomorphism(&self) -> bool {
        ["meet", "join", "arrow", "bottom", "top"].iter().all(|l| self.holds(l))
    }

    pub fn is_embedding(&self) -> bool {
        self.is_homomorphism() && self.holds("injective") && self.holds("order_embedding")
    }
}

/// Checks every structural law of `map: src -> dst` exhaustively.
pub fn homomorphism_report(src: &BrouwerAlgebra, dst: &BrouwerAlgebra, map: &[usize]) -> HomReport {
    let n = src.size;
    let f = |x: usize| map[x];
    let pairwise = |law: &str, g: &(dyn Fn(usize, usize) -> bool + Sync)| {
        LawCheck::from_witness(law, first_witness(n, |a| (0..n).find(|&c| !g(a, c)).map(|c| vec![a, c])))
    };
    let mut laws = vec![
        pairwise("meet", &|a, c| f(src.meet(a, c)) == dst.meet(f(a), f(c))),
        pairwise("join", &|a, c| f(src.join(a, c)) == dst.join(f(a), f(c))),
        pairwise("arrow", &|a, c| f(src.arrow(a, c)) == dst.arrow(f(a), f(c))),
        LawCheck::from_witness("bottom", (f(src.bottom) != dst.bottom).then(|| vec![src.bottom])),
        LawCheck::from_witness("top", (f(src.top) != dst.top).then(|| vec![src.top])),
        pairwise("injective", &|a, c| a == c || f(a) != f(c)),
        pairwise("order_embedding", &|a, c| src.leq(a, c) == dst.leq(f(a), f(c))),
    ];
    let mut hit = vec![false; dst.size];
    for &y in map {
        hit[y] = true;
    }
    laws.push(LawCheck::from_witness("surjective", hit.iter().position(|&h| !h).map(|y| vec![y])));
    HomReport { laws }
}

/// Checks that `u ↦ x ∨ u` maps `[0, z]` onto `[x, y]` as a Brouwer
/// homomorphism, given `x < y = z ∨ x`.
pub fn interval_homomorphism_check(b: &BrouwerAlgebra, x: usize, y: usize, z: usize) -> Result<HomReport> {
    for e in [x, y, z] {
        if e >= b.size {
            return Err(Error::IndexOutOfRange { index: e, size: b.size });
        }
    }
    if !b.lt(x, y) || b.join(z, x) != y {
        return Err(Error::PreconditionFailed(format!("need {x} < {y} and {y} = {z} ∨ {x}")));
    }
    let target = interval_between(b, x, y)?;
    let source = if z == b.bottom {
        // [0, 0] is trivial; only reachable when x = 0 would force y = 0
        return Err(Error::PreconditionFailed("z must not be 0".into()));
    } else {
        interval(b, z)?
    };
    let map: Vec<usize> = source
        .members
        .iter()
        .map(|&u| target.index_of(b.join(x, u)).expect("x ∨ u lies in [x, y]"))
        .collect();
    Ok(homomorphism_report(&source.algebra, &target.algebra, &map))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub arrow_distributes: LawCheck,
    pub meet_irreducible: LawCheck,
    pub sub_implicative_usl: LawCheck,
}

impl CanonicalReport {
    pub fn passes(&self) -> bool {
        self.arrow_distributes.holds && self.meet_irreducible.holds && self.sub_implicative_usl.holds
    }
}

/// Checks the three conditions for `c` to be a canonical set:
/// `a → (x ∧ y) = (a → x) ∧ (a → y)` for `a` in `c`; every member is
/// meet-irreducible; `c` is closed under `∨` and `→`.
pub fn canonical_set_check(b: &BrouwerAlgebra, c: &[usize]) -> Result<CanonicalReport> {
    if c.is_empty() {
        return Err(Error::PreconditionFailed("canonical set candidate is empty".into()));
    }
    if let Some(&e) = c.iter().find(|&&e| e >= b.size) {
        return Err(Error::IndexOutOfRange { index: e, size: b.size });
    }
    let n = b.size;
    let dist = c.par_iter().find_map_first(|&a| {
        for x in 0..n {
            for y in 0..n {
                if b.arrow(a, b.meet(x, y)) != b.meet(b.arrow(a, x), b.arrow(a, y)) {
                    return Some(vec![a, x, y]);
                }
            }
        }
        None
    });
    let irreducible = meet_irreducibles(b);
    let reducible: Vec<usize> = c.iter().copied().filter(|e| irreducible.binary_search(e).is_err()).collect();
    let reducible = (!reducible.is_empty()).then_some(reducible);
    let mut closed = None;
    'outer: for &a in c {
        for &x in c {
            for v in [b.join(a, x), b.arrow(a, x)] {
                if !c.contains(&v) {
                    closed = Some(vec![a, x, v]);
                    break 'outer;
                }
            }
        }
    }
    Ok(CanonicalReport {
        arrow_distributes: LawCheck::from_witness("arrow_distributes_over_meet", dist),
        meet_irreducible: LawCheck::from_witness("members_meet_irreducible", reducible),
        sub_implicative_usl: LawCheck::from_witness("closed_under_join_and_arrow", closed),
    })
}

/// Default bound on family sizes in [`canonical_laws_check`].
pub const FAMILY_CAP: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalLawsReport {
    pub families_checked: usize,
    pub meet_order: LawCheck,
    pub arrow_expansion: LawCheck,
    pub meet_arrow: LawCheck,
}

impl CanonicalLawsReport {
    pub fn passes(&self) -> bool {
        self.meet_order.holds && self.arrow_expansion.holds && self.meet_arrow.holds
    }
}

fn families(c: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(c: &[usize], start: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..c.len() {
            cur.push(c[i]);
            rec(c, i + 1, max, cur, out);
            cur.pop();
        }
    }
    rec(c, 0, max, &mut cur, &mut out);
    out
}

/// For nonempty families `{a_i}`, `{b_j}` drawn from a canonical set (at
/// most `max_family` each): `⋀a_i <= ⋀b_j` iff every `b_j` is above some
/// `a_i`, and `⋀a_i → ⋀b_j = ⋁_i ⋀_j (a_i → b_j)`. Also checks
/// `a ∧ b → c = (a → c) ∨ (b → c)` over the whole algebra.
pub fn canonical_laws_check(b: &BrouwerAlgebra, c: &[usize], max_family: usize) -> Result<CanonicalLawsReport> {
    let canonical = canonical_set_check(b, c)?;
    if !canonical.passes() {
        return Err(Error::PreconditionFailed("set is not canonical".into()));
    }
    let fams = families(c, max_family.max(1));
    let metas: Vec<usize> = fams.iter().map(|f| b.meet_all(f.iter().copied())).collect();
    let order = (0..fams.len()).into_par_iter().find_map_first(|i| {
        (0..fams.len()).find_map(|j| {
            let pointwise = fams[j].iter().all(|&bj| fams[i].iter().any(|&ai| b.leq(ai, bj)));
            (b.leq(metas[i], metas[j]) != pointwise).then(|| [fams[i].clone(), vec![usize::MAX], fams[j].clone()].concat())
        })
    });
    let expansion = (0..fams.len()).into_par_iter().find_map_first(|i| {
        (0..fams.len()).find_map(|j| {
            let lhs = b.arrow(metas[i], metas[j]);
            let rhs = b.join_all(fams[i].iter().map(|&ai| b.meet_all(fams[j].iter().map(|&bj| b.arrow(ai, bj)))));
            (lhs != rhs).then(|| [fams[i].clone(), vec![usize::MAX], fams[j].clone()].concat())
        })
    });
    Ok(CanonicalLawsReport {
        families_checked: fams.len(),
        meet_order: LawCheck::from_witness("meet_order_pointwise", order),
        arrow_expansion: LawCheck::from_witness("arrow_expansion", expansion),
        meet_arrow: meet_arrow_law(b),
    })
}

/// Adjoins a new element strictly above everything. Old arrows are kept;
/// `a → 1' = 1'` for old `a` and `1' → b = 0` for all `b`.
pub fn add_top(b: &BrouwerAlgebra) -> Result<BrouwerAlgebra> {
    let n = b.size;
    let m = n + 1;
    let t = n;
    let mut leq = vec![false; m * m];
    let mut meet = vec![0u32; m * m];
    let mut join = vec![0u32; m * m];
    let mut arrow = vec![0u32; m * m];
    for x in 0..m {
        for y in 0..m {
            let k = x * m + y;
            if x < n && y < n {
                leq[k] = b.leq(x, y);
                meet[k] = b.meet(x, y) as u32;
                join[k] = b.join(x, y) as u32;
                arrow[k] = b.arrow(x, y) as u32;
            } else {
                leq[k] = y == t;
                meet[k] = if x == t { y as u32 } else { x as u32 };
                join[k] = t as u32;
                arrow[k] = if x == t { b.bottom as u32 } else { t as u32 };
            }
        }
    }
    let mut out = BrouwerAlgebra::from_tables(m, leq, meet, join, arrow, b.bottom, t, Provenance::AddTop)?;
    if let Some(l) = &b.labels {
        let mut l = l.clone();
        l.push("1'".into());
        out = out.with_labels(l)?;
    }
    let report = validate_brouwer(&out);
    if !report.passes() {
        return Err(Error::MalformedAlgebra(format!("add_top result fails validation: {:?}", report.laws)));
    }
    Ok(out)
}

/// JSON dump format; tables are flat row-major arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub size: usize,
    pub leq: Vec<bool>,
    pub meet: Vec<u32>,
    pub join: Vec<u32>,
    pub arrow: Vec<u32>,
    pub bottom: usize,
    pub top: usize,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&BrouwerAlgebra> for AlgebraFile {
    fn from(b: &BrouwerAlgebra) -> Self {
        AlgebraFile {
            size: b.size,
            leq: b.leq.clone(),
            meet: b.meet.clone(),
            join: b.join.clone(),
            arrow: b.arrow.clone(),
            bottom: b.bottom,
            top: b.top,
            provenance: b.provenance,
            labels: b.labels.clone(),
        }
    }
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<BrouwerAlgebra> {
        let b = BrouwerAlgebra::from_tables(
            self.size,
            self.leq,
            self.meet,
            self.join,
            self.arrow,
            self.bottom,
            self.top,
            self.provenance,
        )?;
        match self.labels {
            Some(l) => b.with_labels(l),
            None => Ok(b),
        }
    }
}

impl BrouwerAlgebra {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&AlgebraFile::from(self)).expect("algebra serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<AlgebraFile>(text)?.into_algebra()
    }

    /// Hasse diagram of the algebra's order.
    pub fn to_dot(&self, highlight: &[usize]) -> String {
        let mut s = String::from("digraph algebra {\n  rankdir=BT;\n  node [shape=box];\n");
        for a in 0..self.size {
            let style = if highlight.contains(&a) { ", style=filled, fillcolor=lightblue" } else { "" };
            s.push_str(&format!("  n{} [label=\"{}\"{}];\n", a, self.label(a).replace('"', "\\\""), style));
        }
        for a in 0..self.size {
            for c in 0..self.size {
                if self.lt(a, c) && !(0..self.size).any(|d| self.lt(a, d) && self.lt(d, c)) {
                    s.push_str(&format!("  n{a} -> n{c};\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}
