//! Finite preorders, posets and (implicative) upper semilattices.
//!
//! Elements are dense indices `0..size`. Order relations are stored as
//! bit-packed rows: `up[i]` is the set of `j` with `i <= j`. Carriers are
//! limited to [`CARRIER_CAP`] elements so that every subset fits in a `u64`.
//!
//! Nothing here repairs its input: a relation that is not reflexive or not
//! transitive is rejected with a witness.

use std::fmt::Write as _;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::error::{cap_check, Error, Result};

/// Hard limit on carrier size (one `u64` mask per row).
pub const CARRIER_CAP: usize = 64;

/// Default limit for `boolean_reverse_usl`.
pub const BOOLEAN_USL_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    size: usize,
    up: Vec<Mask>,
    down: Vec<Mask>,
    labels: Option<Vec<String>>,
}

impl Preorder {
    /// Validates a full membership matrix: `rows[i][j]` means `i <= j`.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let size = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::NotSquare { row: i, len: row.len(), size });
            }
        }
        Self::check_size(size)?;
        let up = rows
            .iter()
            .map(|row| bits::from_indices(row.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j)))
            .collect();
        Self::from_up_rows(size, up)
    }

    /// Builds the relation from the listed pairs `(i, j)` meaning `i <= j`.
    /// Reflexive pairs are implied.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::check_size(size)?;
        let mut up: Vec<Mask> = (0..size).map(bits::bit).collect();
        for &(i, j) in pairs {
            for x in [i, j] {
                if x >= size {
                    return Err(Error::IndexOutOfRange { index: x, size });
                }
            }
            up[i] |= bits::bit(j);
        }
        Self::from_up_rows(size, up)
    }

    fn check_size(size: usize) -> Result<()> {
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        cap_check("carrier size", size as u128, CARRIER_CAP as u128)
    }

    pub(crate) fn from_up_rows(size: usize, up: Vec<Mask>) -> Result<Self> {
        Self::check_size(size)?;
        let all = bits::full(size);
        for (i, &row) in up.iter().enumerate() {
            if row & !all != 0 {
                return Err(Error::IndexOutOfRange { index: 63 - (row & !all).leading_zeros() as usize, size });
            }
            if !bits::has(row, i) {
                return Err(Error::NotReflexive(i));
            }
        }
        for i in 0..size {
            for j in bits::iter(up[i] & !bits::bit(i)) {
                let missing = up[j] & !up[i];
                if missing != 0 {
                    return Err(Error::NotTransitive(i, j, missing.trailing_zeros() as usize));
                }
            }
        }
        let mut down = vec![0; size];
        for i in 0..size {
            for j in bits::iter(up[i]) {
                down[j] |= bits::bit(i);
            }
        }
        Ok(Self { size, up, down, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::IndexOutOfRange { index: labels.len(), size: self.size });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn carrier(&self) -> Mask {
        bits::full(self.size)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        bits::has(self.up[i], j)
    }

    /// `{j : i <= j}`
    #[inline]
    pub fn up(&self, i: usize) -> Mask {
        self.up[i]
    }

    /// `{j : j <= i}`
    #[inline]
    pub fn down(&self, i: usize) -> Mask {
        self.down[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && self.leq(j, i)
    }

    /// Upward closure of an arbitrary subset.
    pub fn up_closure(&self, s: Mask) -> Mask {
        bits::iter(s).fold(0, |m, i| m | self.up[i])
    }

    pub fn down_closure(&self, s: Mask) -> Mask {
        bits::iter(s).fold(0, |m, i| m | self.down[i])
    }

    pub fn is_up_closed(&self, s: Mask) -> bool {
        self.up_closure(s) == s
    }

    pub fn is_down_closed(&self, s: Mask) -> bool {
        self.down_closure(s) == s
    }

    /// Non-reflexive pairs of the relation, in row-major order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| bits::iter(self.up[i] & !bits::bit(i)).map(move |j| (i, j)))
            .collect()
    }
}

/// A preorder that is also antisymmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset(Preorder);

impl Deref for Poset {
    type Target = Preorder;

    fn deref(&self) -> &Preorder {
        &self.0
    }
}

impl Poset {
    pub fn new(p: Preorder) -> Result<Self> {
        for i in 0..p.size {
            let both = p.up[i] & p.down[i] & !bits::bit(i);
            if both != 0 {
                return Err(Error::NotAntisymmetric(i, both.trailing_zeros() as usize));
            }
        }
        Ok(Poset(p))
    }

    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(Preorder::from_pairs(size, pairs)?)
    }

    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        Self::new(Preorder::from_matrix(rows)?)
    }

    pub fn with_labels(self, labels: Vec<String>) -> Result<Self> {
        Ok(Poset(self.0.with_labels(labels)?))
    }

    pub fn as_preorder(&self) -> &Preorder {
        &self.0
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn minimal(&self) -> Mask {
        (0..self.size).filter(|&i| self.down(i) == bits::bit(i)).fold(0, |m, i| m | bits::bit(i))
    }

    pub fn maximal(&self) -> Mask {
        (0..self.size).filter(|&i| self.up(i) == bits::bit(i)).fold(0, |m, i| m | bits::bit(i))
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.size).find(|&i| self.up(i) == self.carrier())
    }

    pub fn greatest(&self) -> Option<usize> {
        (0..self.size).find(|&i| self.down(i) == self.carrier())
    }

    /// Covering pairs `(i, j)` with `i < j` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            let above = self.up(i) & !bits::bit(i);
            for j in bits::iter(above) {
                let between = above & self.down(j) & !bits::bit(j);
                if between == 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Length of the longest chain ending at `i` (minimal elements have height 0).
    pub fn height(&self, i: usize) -> usize {
        let below = self.down(i) & !bits::bit(i);
        bits::iter(below).map(|j| self.height(j) + 1).max().unwrap_or(0)
    }

    /// The sub-poset induced on `members`; returns it with the map from new
    /// indices to old ones.
    pub fn induced(&self, members: Mask) -> Result<(Poset, Vec<usize>)> {
        let old: Vec<usize> = bits::iter(members & self.carrier()).collect();
        let pairs: Vec<(usize, usize)> = old
            .iter()
            .enumerate()
            .flat_map(|(a, &x)| {
                old.iter().enumerate().filter(move |&(b, &y)| a != b && self.leq(x, y)).map(move |(b, _)| (a, b))
            })
            .collect();
        let mut p = Poset::from_pairs(old.len(), &pairs)?;
        if self.labels.is_some() {
            p = p.with_labels(old.iter().map(|&x| self.label(x)).collect())?;
        }
        Ok((p, old))
    }

    /// Graphviz rendering of the Hasse diagram, bottom to top. Elements in
    /// `highlight` are filled.
    pub fn to_dot(&self, highlight: Mask) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
        for i in 0..self.size {
            let style = if bits::has(highlight, i) { ", style=filled, fillcolor=lightblue" } else { "" };
            let _ = writeln!(s, "  n{} [label=\"{}\"{}];", i, escape(&self.label(i)), style);
        }
        for (i, j) in self.covers() {
            let _ = writeln!(s, "  n{} -> n{};", i, j);
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Collapses mutually related elements. Classes are numbered by their
/// smallest member; `class_map[x]` is the class of `x`.
pub fn quotient_to_poset(p: &Preorder) -> (Poset, Vec<usize>) {
    let mut class_map = vec![usize::MAX; p.size];
    let mut reps = Vec::new();
    for i in 0..p.size {
        if class_map[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for j in bits::iter(p.up[i] & p.down[i]) {
            class_map[j] = c;
        }
    }
    let n = reps.len();
    let up: Vec<Mask> = reps
        .iter()
        .map(|&r| bits::iter(p.up[r]).fold(0, |m, j| m | bits::bit(class_map[j])))
        .collect();
    let mut pre = Preorder::from_up_rows(n, up).expect("quotient of a valid preorder is a preorder");
    if p.labels.is_some() {
        let labels = reps
            .iter()
            .map(|&r| {
                let members: Vec<String> = bits::iter(p.up[r] & p.down[r]).map(|j| p.label(j)).collect();
                if members.len() == 1 {
                    members[0].clone()
                } else {
                    format!("[{}]", members.join("~"))
                }
            })
            .collect();
        pre.labels = Some(labels);
    }
    (Poset::new(pre).expect("quotient is antisymmetric"), class_map)
}

/// A finite upper semilattice with least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperSemilattice {
    poset: Poset,
    join: Vec<u8>,
    bottom: usize,
}

fn least_of(p: &Poset, candidates: Mask) -> Option<usize> {
    bits::iter(candidates).find(|&c| p.up(c) & candidates == candidates)
}

/// Computes joins by scanning for least upper bounds.
pub fn compute_join_table(p: &Poset) -> Result<UpperSemilattice> {
    let n = p.size();
    let mut join = vec![0u8; n * n];
    for a in 0..n {
        for b in a..n {
            let c = least_of(p, p.up(a) & p.up(b)).ok_or(Error::NoLub(a, b))?;
            join[a * n + b] = c as u8;
            join[b * n + a] = c as u8;
        }
    }
    let bottom = p.least().ok_or(Error::NoBottom)?;
    Ok(UpperSemilattice { poset: p.clone(), join, bottom })
}

impl UpperSemilattice {
    /// Checks a supplied join table against the order. Listed triples
    /// `(a, b, c)` mean `a + b = c`; the symmetric entry and `a + a = a`
    /// are filled in when missing.
    pub fn from_triples(p: Poset, triples: &[(usize, usize, usize)]) -> Result<Self> {
        let n = p.size();
        let mut table: Vec<Option<usize>> = vec![None; n * n];
        for &(a, b, c) in triples {
            for x in [a, b, c] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, size: n });
                }
            }
            for (x, y) in [(a, b), (b, a)] {
                match table[x * n + y] {
                    Some(old) if old != c => return Err(Error::InvalidJoin(x, y)),
                    _ => table[x * n + y] = Some(c),
                }
            }
        }
        for a in 0..n {
            table[a * n + a].get_or_insert(a);
        }
        let derived = compute_join_table(&p)?;
        for a in 0..n {
            for b in 0..n {
                match table[a * n + b] {
                    None => return Err(Error::MissingJoin(a, b)),
                    Some(c) if c != derived.join(a, b) => return Err(Error::InvalidJoin(a, b)),
                    _ => {}
                }
            }
        }
        Ok(derived)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.poset.size() + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }
}

/// Upper semilattice with `a -> b = least {c : b <= a + c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicativeUsl {
    usl: UpperSemilattice,
    arrow: Vec<u8>,
}

impl Deref for ImplicativeUsl {
    type Target = UpperSemilattice;

    fn deref(&self) -> &UpperSemilattice {
        &self.usl
    }
}

pub fn compute_implication_table(u: &UpperSemilattice) -> Result<ImplicativeUsl> {
    let n = u.size();
    let mut arrow = vec![0u8; n * n];
    for a in 0..n {
        for b in 0..n {
            let candidates = (0..n).filter(|&c| u.leq(b, u.join(a, c))).fold(0, |m, c| m | bits::bit(c));
            let c = least_of(u.poset(), candidates).ok_or(Error::NoLeastResidual(a, b))?;
            arrow[a * n + b] = c as u8;
        }
    }
    Ok(ImplicativeUsl { usl: u.clone(), arrow })
}

impl ImplicativeUsl {
    pub fn usl(&self) -> &UpperSemilattice {
        &self.usl
    }

    #[inline]
    pub fn arrow(&self, a: usize, b: usize) -> usize {
        self.arrow[a * self.usl.size() + b] as usize
    }

    /// Derives the join and arrow tables from the order alone.
    pub fn from_poset(p: &Poset) -> Result<Self> {
        compute_implication_table(&compute_join_table(p)?)
    }
}

fn subset_label(mask: Mask) -> String {
    let inner: Vec<String> = bits::iter(mask).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// All subsets of `{1..n}` ordered by reverse inclusion. Element `i` is the
/// subset whose bitmask is `i` (bit `k` stands for `k + 1`).
pub fn boolean_reverse_usl(n: usize) -> Result<ImplicativeUsl> {
    boolean_reverse_usl_capped(n, BOOLEAN_USL_CAP)
}

pub fn boolean_reverse_usl_capped(n: usize, cap: usize) -> Result<ImplicativeUsl> {
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    cap_check("boolean usl exponent", n as u128, cap.min(BOOLEAN_USL_CAP) as u128)?;
    let size = 1usize << n;
    let all = size - 1;
    // a <= b iff a is a superset of b
    let up: Vec<Mask> = (0..size).map(|a| (0..size).filter(|&b| b & a == b).fold(0, |m, b| m | bits::bit(b))).collect();
    let pre = Preorder::from_up_rows(size, up)?.with_labels((0..size).map(|a| subset_label(a as Mask)).collect())?;
    let poset = Poset::new(pre)?;
    let mut join = vec![0u8; size * size];
    let mut arrow = vec![0u8; size * size];
    for a in 0..size {
        for b in 0..size {
            join[a * size + b] = (a & b) as u8;
            arrow[a * size + b] = (b | (all & !a)) as u8;
        }
    }
    Ok(ImplicativeUsl { usl: UpperSemilattice { poset, join, bottom: all }, arrow })
}

pub fn chain(k: usize) -> Result<Poset> {
    let pairs: Vec<_> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    Poset::from_pairs(k, &pairs)
}

pub fn antichain(k: usize) -> Result<Poset> {
    Poset::from_pairs(k, &[])
}

/// Root `r` below two incomparable leaves `l0`, `l1`.
pub fn fork() -> Poset {
    Poset::from_pairs(3, &[(0, 1), (0, 2)])
        .and_then(|p| p.with_labels(vec!["r".into(), "l0".into(), "l1".into()]))
        .expect("fork is a poset")
}

pub fn diamond() -> Poset {
    Poset::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]).expect("diamond is a poset")
}

/// 0/1-strings of length at most `k` under the prefix order, listed by
/// length and then lexicographically.
pub fn binary_tree(k: usize) -> Result<Poset> {
    let size = (1u128 << (k + 1).min(100)) - 1;
    cap_check("binary tree size", size, CARRIER_CAP as u128)?;
    let mut words: Vec<String> = vec![String::new()];
    for len in 1..=k {
        for v in 0..(1usize << len) {
            words.push((0..len).rev().map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect());
        }
    }
    let pairs: Vec<_> = (0..words.len())
        .flat_map(|i| {
            let words = &words;
            (0..words.len()).filter(move |&j| i != j && words[j].starts_with(words[i].as_str())).map(move |j| (i, j))
        })
        .collect();
    let labels = words.into_iter().map(|w| if w.is_empty() { "ε".to_string() } else { w }).collect();
    Poset::from_pairs(size as usize, &pairs)?.with_labels(labels)
}

/// Subsets of `{1..k}` under inclusion.
pub fn boolean(k: usize) -> Result<Poset> {
    cap_check("boolean exponent", k as u128, 6)?;
    let size = 1usize << k;
    let up = (0..size).map(|a| (0..size).filter(|&b| a & b == a).fold(0, |m, b| m | bits::bit(b))).collect();
    Poset::new(Preorder::from_up_rows(size, up)?.with_labels((0..size).map(|a| subset_label(a as Mask)).collect())?)
}

/// Looks up a canned poset by name: `chain(k)`, `antichain(k)`, `fork`,
/// `diamond`, `binary_tree(k)`, `boolean(k)`.
pub fn canned_poset(name: &str) -> Result<Poset> {
    let name = name.trim();
    let (head, arg) = match name.find('(') {
        Some(open) if name.ends_with(')') => {
            let arg = name[open + 1..name.len() - 1]
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::UnknownName(name.to_string()))?;
            (&name[..open], Some(arg))
        }
        _ => (name, None),
    };
    match (head, arg) {
        ("chain", Some(k)) => chain(k),
        ("antichain", Some(k)) => antichain(k),
        ("fork", None) => Ok(fork()),
        ("diamond", None) => Ok(diamond()),
        ("binary_tree", Some(k)) => binary_tree(k),
        ("boolean", Some(k)) => boolean(k),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// JSON poset file: only non-reflexive pairs are listed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetFile {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub leq: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<(usize, usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derive_join: Option<bool>,
}

impl PosetFile {
    pub fn from_preorder(p: &Preorder) -> Self {
        PosetFile {
            size: p.size(),
            labels: p.labels().map(<[String]>::to_vec),
            leq: p.strict_pairs(),
            join: None,
            derive_join: None,
        }
    }

    pub fn from_usl(u: &UpperSemilattice) -> Self {
        let n = u.size();
        let mut f = Self::from_preorder(u.poset());
        f.join = Some((0..n).flat_map(|a| (a..n).map(move |b| (a, b, u.join(a, b)))).collect());
        f
    }

    pub fn to_preorder(&self) -> Result<Preorder> {
        let p = Preorder::from_pairs(self.size, &self.leq)?;
        match &self.labels {
            Some(l) => p.with_labels(l.clone()),
            None => Ok(p),
        }
    }

    pub fn to_poset(&self) -> Result<Poset> {
        Poset::new(self.to_preorder()?)
    }

    /// Reads the file as an upper semilattice. Without a `join` table the
    /// joins are derived from the order.
    pub fn to_usl(&self) -> Result<UpperSemilattice> {
        let p = self.to_poset()?;
        match (&self.join, self.derive_join) {
            (Some(t), _) => UpperSemilattice::from_triples(p, t),
            (None, _) => compute_join_table(&p),
        }
    }

    pub fn to_implicative_usl(&self) -> Result<ImplicativeUsl> {
        compute_implication_table(&self.to_usl()?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_relation_is_an_antichain() {
        let p = Preorder::from_pairs(3, &[]).unwrap();
        assert_eq!(p.strict_pairs(), vec![]);
        let p = Poset::new(p).unwrap();
        assert_eq!(p.minimal(), 0b111);
        assert_eq!(p.maximal(), 0b111);
    }

    #[test]
    fn symmetric_pair_is_one_class() {
        let p = Preorder::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(p.equivalent(0, 1));
        assert_eq!(Poset::new(p.clone()), Err(Error::NotAntisymmetric(0, 1)));
        let (q, map) = quotient_to_poset(&p);
        assert_eq!(q.size(), 1);
        assert_eq!(map, vec![0, 0]);
    }

    #[test]
    fn missing_transitive_pair_is_reported() {
        assert_eq!(Preorder::from_pairs(3, &[(0, 1), (1, 2)]), Err(Error::NotTransitive(0, 1, 2)));
    }

    #[test]
    fn matrix_errors() {
        assert_eq!(Preorder::from_matrix(&[vec![true, false], vec![false, false]]), Err(Error::NotReflexive(1)));
        assert!(matches!(Preorder::from_matrix(&[vec![true], vec![true, true]]), Err(Error::NotSquare { .. })));
        assert_eq!(Preorder::from_pairs(0, &[]), Err(Error::EmptyCarrier));
        assert!(matches!(Preorder::from_pairs(65, &[]), Err(Error::CapExceeded { .. })));
        assert!(matches!(Preorder::from_pairs(2, &[(0, 2)]), Err(Error::IndexOutOfRange { index: 2, .. })));
    }

    #[test]
    fn antisymmetric_preorder_quotients_to_itself() {
        let p = diamond();
        let (q, map) = quotient_to_poset(p.as_preorder());
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(&q, &p);
    }

    #[test]
    fn two_pairs_quotient_to_a_chain() {
        // {0,1} and {2,3} are classes; everything in the first is below the second.
        let mut pairs = vec![(0, 1), (1, 0), (2, 3), (3, 2)];
        for a in 0..2 {
            for b in 2..4 {
                pairs.push((a, b));
            }
        }
        let p = Preorder::from_pairs(4, &pairs).unwrap();
        let (q, map) = quotient_to_poset(&p);
        assert_eq!(map, vec![0, 0, 1, 1]);
        assert_eq!(q, chain(2).unwrap());
    }

    #[test]
    fn join_tables() {
        let u = compute_join_table(&chain(2).unwrap()).unwrap();
        assert_eq!(u.join(0, 1), 1);
        assert_eq!(u.bottom(), 0);

        assert_eq!(compute_join_table(&antichain(2).unwrap()), Err(Error::NoLub(0, 1)));
        assert_eq!(compute_join_table(&antichain(1).unwrap()).unwrap().bottom(), 0);

        let u = compute_join_table(&boolean(2).unwrap()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(u.join(a, b), a | b);
            }
        }
        assert_eq!(u.bottom(), 0);
    }

    #[test]
    fn no_bottom_is_reported() {
        // two minimal elements below a common top
        let p = Poset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(compute_join_table(&p), Err(Error::NoBottom));
    }

    #[test]
    fn implication_in_powerset() {
        let u = ImplicativeUsl::from_poset(&boolean(2).unwrap()).unwrap();
        // arrow({1}, {1,2}) = {2}
        assert_eq!(u.arrow(0b01, 0b11), 0b10);
        for a in 0..4 {
            assert_eq!(u.arrow(a, a), u.bottom());
            assert_eq!(u.arrow(0, a), a);
        }
    }

    #[test]
    fn boolean_reverse_small_cases() {
        let u = boolean_reverse_usl(2).unwrap();
        assert_eq!(u.size(), 4);
        assert_eq!(u.join(0b01, 0b10), 0);
        assert_eq!(u.arrow(0b01, 0b10), 0b10);
        assert_eq!(u.bottom(), 0b11);
        let u1 = boolean_reverse_usl(1).unwrap();
        assert_eq!(u1.size(), 2);
        assert_eq!(u1.bottom(), 1);
        assert!(u1.leq(1, 0));
        assert!(matches!(boolean_reverse_usl(7), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn boolean_reverse_matches_residual_scan() {
        for n in 1..=4 {
            let u = boolean_reverse_usl(n).unwrap();
            let scanned = ImplicativeUsl::from_poset(u.poset()).unwrap();
            assert_eq!(u, scanned, "n = {n}");
        }
    }

    #[test]
    fn canned_shapes() {
        let t1 = binary_tree(1).unwrap();
        assert_eq!(t1.size(), 3);
        assert_eq!(t1.least(), Some(0));
        assert!(!t1.leq(1, 2) && !t1.leq(2, 1));
        assert_eq!(binary_tree(2).unwrap().size(), 7);
        assert_eq!(canned_poset("chain(2)").unwrap(), chain(2).unwrap());
        assert_eq!(canned_poset("fork").unwrap(), fork());
        assert_eq!(canned_poset("binary_tree(5)").unwrap().size(), 63);
        assert!(matches!(canned_poset("binary_tree(6)"), Err(Error::CapExceeded { .. })));
        assert!(matches!(canned_poset("pentagon"), Err(Error::UnknownName(_))));
        assert_eq!(boolean(2).unwrap().covers().len(), 4);
    }

    #[test]
    fn heights() {
        let t = binary_tree(2).unwrap();
        assert_eq!((0..7).map(|i| t.height(i)).collect::<Vec<_>>(), vec![0, 1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn json_round_trip_and_usl_file() {
        let u = boolean_reverse_usl(2).unwrap();
        let f = PosetFile::from_usl(u.usl());
        let text = serde_json::to_string(&f).unwrap();
        let back = PosetFile::parse(&text).unwrap();
        assert_eq!(back.to_implicative_usl().unwrap(), u);

        let derived = PosetFile::parse(r#"{"size": 2, "leq": [[0, 1]], "derive_join": true}"#).unwrap();
        assert_eq!(derived.to_usl().unwrap().join(0, 1), 1);

        let bad = PosetFile::parse(r#"{"size": 2, "leq": [[0, 1]], "join": [[0, 1, 0]]}"#).unwrap();
        assert_eq!(bad.to_usl(), Err(Error::InvalidJoin(0, 1)));
        assert!(matches!(PosetFile::parse("{\"size\": 2,"), Err(Error::Json(_))));
    }

    #[test]
    fn dot_has_hasse_edges_only() {
        let dot = chain(3).unwrap().to_dot(0b1);
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("n1 -> n2;"));
        assert!(!dot.contains("n0 -> n2;"));
        assert!(dot.contains("fillcolor"));
    }
}
