//! Up-sets and down-sets of a finite poset, and the Brouwer operations on
//! up-sets: meet is union, join is intersection, the order is reverse
//! inclusion.

use crate::bits::{self, Mask};
use crate::error::{Error, Result};
use crate::order::{ImplicativeUsl, Poset};

/// Default limit on the number of up-sets enumerated.
pub const UPSET_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct UpSet<'p> {
    host: &'p Poset,
    mask: Mask,
}

impl PartialEq for UpSet<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && same_host(self.host, other.host)
    }
}

impl Eq for UpSet<'_> {}

fn same_host(a: &Poset, b: &Poset) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl<'p> UpSet<'p> {
    pub fn new(host: &'p Poset, mask: Mask) -> Result<Self> {
        let mask_ok = mask & !host.carrier() == 0;
        if !mask_ok {
            return Err(Error::IndexOutOfRange { index: 63 - mask.leading_zeros() as usize, size: host.size() });
        }
        for x in bits::iter(mask) {
            let missing = host.up(x) & !mask;
            if missing != 0 {
                return Err(Error::NotUpwardClosed(x, missing.trailing_zeros() as usize));
            }
        }
        Ok(UpSet { host, mask })
    }

    pub(crate) fn new_unchecked(host: &'p Poset, mask: Mask) -> Self {
        debug_assert!(host.is_up_closed(mask));
        UpSet { host, mask }
    }

    pub fn empty(host: &'p Poset) -> Self {
        UpSet { host, mask: 0 }
    }

    pub fn full(host: &'p Poset) -> Self {
        UpSet { host, mask: host.carrier() }
    }

    pub fn host(&self) -> &'p Poset {
        self.host
    }

    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn contains(&self, x: usize) -> bool {
        bits::has(self.mask, x)
    }

    /// Minimal members; the up-set is the closure of these.
    pub fn generators(&self) -> Vec<usize> {
        bits::iter(self.mask).filter(|&x| self.host.down(x) & self.mask == bits::bit(x)).collect()
    }

    pub fn describe(&self) -> String {
        let members: Vec<String> = bits::iter(self.mask).map(|x| self.host.label(x)).collect();
        format!("{{{}}}", members.join(","))
    }

    fn check(&self, other: &UpSet<'_>) -> Result<()> {
        if same_host(self.host, other.host) {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DownSet<'p> {
    host: &'p Poset,
    mask: Mask,
}

impl<'p> DownSet<'p> {
    pub fn new(host: &'p Poset, mask: Mask) -> Result<Self> {
        if mask & !host.carrier() != 0 {
            return Err(Error::IndexOutOfRange { index: 63 - mask.leading_zeros() as usize, size: host.size() });
        }
        for x in bits::iter(mask) {
            let missing = host.down(x) & !mask;
            if missing != 0 {
                return Err(Error::NotDownwardClosed(x, missing.trailing_zeros() as usize));
            }
        }
        Ok(DownSet { host, mask })
    }

    pub fn host(&self) -> &'p Poset {
        self.host
    }

    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn contains(&self, x: usize) -> bool {
        bits::has(self.mask, x)
    }

    pub fn complement(&self) -> UpSet<'p> {
        UpSet::new_unchecked(self.host, self.host.carrier() & !self.mask)
    }
}

pub fn upward_closure(p: &Poset, s: Mask) -> UpSet<'_> {
    UpSet::new_unchecked(p, p.up_closure(s & p.carrier()))
}

/// All up-set masks of `p` in ascending numeric order.
pub fn enumerate_upset_masks(p: &Poset, cap: usize) -> Result<Vec<Mask>> {
    // larger elements first, so every strict successor is decided before x
    let mut order: Vec<usize> = (0..p.size()).collect();
    order.sort_by_key(|&x| (p.up(x).count_ones(), x));
    let mut out = Vec::new();
    walk(p, &order, 0, 0, cap, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

fn walk(p: &Poset, order: &[usize], k: usize, mask: Mask, cap: usize, out: &mut Vec<Mask>) -> Result<()> {
    if k == order.len() {
        if out.len() == cap {
            return Err(Error::CapExceeded { what: "up-set count", value: cap as u128 + 1, cap: cap as u128 });
        }
        out.push(mask);
        return Ok(());
    }
    let x = order[k];
    walk(p, order, k + 1, mask, cap, out)?;
    let above = p.up(x) & !bits::bit(x);
    if above & !mask == 0 {
        walk(p, order, k + 1, mask | bits::bit(x), cap, out)?;
    }
    Ok(())
}

pub fn enumerate_upsets(p: &Poset, cap: usize) -> Result<Vec<UpSet<'_>>> {
    Ok(enumerate_upset_masks(p, cap)?.into_iter().map(|m| UpSet::new_unchecked(p, m)).collect())
}

/// Greatest lower bound in `up(P)`: union.
pub fn upset_meet<'p>(x: &UpSet<'p>, y: &UpSet<'_>) -> Result<UpSet<'p>> {
    x.check(y)?;
    Ok(UpSet::new_unchecked(x.host, x.mask | y.mask))
}

/// Least upper bound in `up(P)`: intersection.
pub fn upset_join<'p>(x: &UpSet<'p>, y: &UpSet<'_>) -> Result<UpSet<'p>> {
    x.check(y)?;
    Ok(UpSet::new_unchecked(x.host, x.mask & y.mask))
}

/// `{z : every w >= z in x is in y}`, the largest up-set whose
/// intersection with `x` lies inside `y`.
pub(crate) fn arrow_mask(p: &Poset, x: Mask, y: Mask) -> Mask {
    let bad = x & !y;
    (0..p.size()).filter(|&z| p.up(z) & bad == 0).fold(0, |m, z| m | bits::bit(z))
}

pub fn upset_arrow<'p>(x: &UpSet<'p>, y: &UpSet<'_>) -> Result<UpSet<'p>> {
    x.check(y)?;
    Ok(UpSet::new_unchecked(x.host, arrow_mask(x.host, x.mask, y.mask)))
}

fn usl_check(u: &ImplicativeUsl, x: &UpSet<'_>, y: &UpSet<'_>) -> Result<()> {
    if same_host(u.poset(), x.host) && same_host(u.poset(), y.host) {
        Ok(())
    } else {
        Err(Error::HostMismatch)
    }
}

/// Join through the semilattice: `{a + b : a in x, b in y}`.
pub fn usl_upset_join<'p>(u: &ImplicativeUsl, x: &UpSet<'p>, y: &UpSet<'_>) -> Result<UpSet<'p>> {
    usl_check(u, x, y)?;
    let mut m = 0;
    for a in bits::iter(x.mask) {
        for b in bits::iter(y.mask) {
            m |= bits::bit(u.join(a, b));
        }
    }
    Ok(UpSet::new_unchecked(x.host, m))
}

/// Arrow through the semilattice: `{z : z + a in y for every a in x}`.
pub fn usl_upset_arrow<'p>(u: &ImplicativeUsl, x: &UpSet<'p>, y: &UpSet<'_>) -> Result<UpSet<'p>> {
    usl_check(u, x, y)?;
    let m = (0..u.size())
        .filter(|&z| bits::iter(x.mask).all(|a| bits::has(y.mask, u.join(z, a))))
        .fold(0, |m, z| m | bits::bit(z));
    Ok(UpSet::new_unchecked(x.host, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{antichain, boolean, chain, diamond, fork, ImplicativeUsl, Preorder};

    fn filter_oracle(p: &Preorder) -> Vec<Mask> {
        (0..1u64 << p.size()).filter(|&s| (0..p.size()).all(|x| !bits::has(s, x) || p.up(x) & !s == 0)).collect()
    }

    #[test]
    fn closures() {
        let c = chain(2).unwrap();
        assert_eq!(upward_closure(&c, 0).mask(), 0);
        assert_eq!(upward_closure(&c, 0b01).mask(), 0b11);
        let f = fork();
        assert_eq!(upward_closure(&f, 0b010).mask(), 0b010);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_upset_masks(&chain(2).unwrap(), UPSET_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_upset_masks(&antichain(2).unwrap(), UPSET_CAP).unwrap().len(), 4);
        assert_eq!(enumerate_upset_masks(&boolean(2).unwrap(), UPSET_CAP).unwrap().len(), 6);
        assert_eq!(enumerate_upset_masks(&fork(), UPSET_CAP).unwrap(), vec![0, 0b010, 0b100, 0b110, 0b111]);
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        for p in [chain(5).unwrap(), antichain(5).unwrap(), diamond(), boolean(3).unwrap(), fork()] {
            assert_eq!(enumerate_upset_masks(&p, UPSET_CAP).unwrap(), filter_oracle(&p));
        }
    }

    #[test]
    fn enumeration_cap() {
        let p = antichain(10).unwrap();
        assert!(matches!(enumerate_upset_masks(&p, 1023), Err(Error::CapExceeded { .. })));
        assert_eq!(enumerate_upset_masks(&p, 1024).unwrap().len(), 1024);
    }

    #[test]
    fn meet_join_examples() {
        let f = fork();
        let l0 = UpSet::new(&f, 0b010).unwrap();
        let l1 = UpSet::new(&f, 0b100).unwrap();
        assert_eq!(upset_meet(&l0, &UpSet::empty(&f)).unwrap(), l0);
        assert_eq!(upset_join(&l0, &UpSet::full(&f)).unwrap(), l0);
        assert_eq!(upset_meet(&l0, &l1).unwrap().mask(), 0b110);
        assert!(matches!(UpSet::new(&f, 0b001), Err(Error::NotUpwardClosed(0, 1))));
    }

    #[test]
    fn arrow_examples() {
        let c = chain(2).unwrap();
        let top = UpSet::new(&c, 0b10).unwrap();
        assert_eq!(upset_arrow(&top, &UpSet::empty(&c)).unwrap().mask(), 0);
        for m in enumerate_upsets(&c, UPSET_CAP).unwrap() {
            assert_eq!(upset_arrow(&m, &m).unwrap(), UpSet::full(&c));
        }
        let f = fork();
        let l0 = UpSet::new(&f, 0b010).unwrap();
        assert_eq!(upset_arrow(&l0, &UpSet::empty(&f)).unwrap().mask(), 0b100);
    }

    #[test]
    fn host_mismatch() {
        let a = chain(2).unwrap();
        let b = fork();
        let x = UpSet::full(&a);
        let y = UpSet::full(&b);
        assert_eq!(upset_meet(&x, &y), Err(Error::HostMismatch));
        assert_eq!(upset_arrow(&x, &y), Err(Error::HostMismatch));
        // structurally equal hosts are accepted
        let a2 = chain(2).unwrap();
        assert!(upset_join(&x, &UpSet::full(&a2)).is_ok());
    }

    #[test]
    fn usl_operations() {
        let u = ImplicativeUsl::from_poset(&boolean(2).unwrap()).unwrap();
        let p = u.poset();
        let x1 = upward_closure(p, 0b0010); // up-closure of {1}
        let x2 = upward_closure(p, 0b0100); // up-closure of {2}
        assert_eq!(usl_upset_join(&u, &x1, &x2).unwrap().mask(), 0b1000);
        assert_eq!(usl_upset_join(&u, &x1, &UpSet::full(p)).unwrap(), x1);
        let full = UpSet::full(p);
        assert_eq!(usl_upset_arrow(&u, &full, &full).unwrap(), full);
        let other = chain(4).unwrap();
        assert_eq!(usl_upset_join(&u, &UpSet::full(&other), &full), Err(Error::HostMismatch));
    }

    #[test]
    fn downsets() {
        let p = boolean(2).unwrap();
        let a = DownSet::new(&p, 0b0111).unwrap();
        assert_eq!(a.complement().mask(), 0b1000);
        assert!(matches!(DownSet::new(&p, 0b0110), Err(Error::NotDownwardClosed(1, 0))));
    }

    #[test]
    fn generators_view() {
        let p = boolean(2).unwrap();
        assert_eq!(UpSet::new(&p, 0b1110).unwrap().generators(), vec![1, 2]);
        assert_eq!(UpSet::full(&p).generators(), vec![0]);
    }
}
