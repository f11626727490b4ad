//! Reading posets, semilattices, algebras and element references from
//! files or canned names.

use std::path::Path;

use brouwerlab::bits::{self, Mask};
use brouwerlab::brouwer::{from_upsets_capped, AlgebraFile, BrouwerAlgebra};
use brouwerlab::free::medvedev_algebra;
use brouwerlab::order::{
    boolean_reverse_usl, canned_poset, compute_implication_table, compute_join_table, ImplicativeUsl, Poset, PosetFile,
};
use brouwerlab::{Error, Result};
use serde_json::Value;

pub fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::PreconditionFailed(format!("cannot read {path}: {e}")))
}

fn is_file(s: &str) -> bool {
    Path::new(s).is_file()
}

/// `chain(3)`-style names resolve to canned posets; anything that exists
/// on disk is read as a poset file.
pub fn poset_file(s: &str) -> Result<PosetFile> {
    if is_file(s) {
        Ok(serde_json::from_str(&read(s)?)?)
    } else {
        Ok(PosetFile::from_preorder(canned_poset(s)?.as_preorder()))
    }
}

pub fn poset(s: &str) -> Result<Poset> {
    poset_file(s)?.to_poset()
}

/// Accepts a usl file, a canned poset name, or `boolean_reverse(n)`.
pub fn usl(s: &str) -> Result<ImplicativeUsl> {
    if let Some(n) = call_arg(s, "boolean_reverse") {
        return boolean_reverse_usl(n);
    }
    let u = if is_file(s) { poset_file(s)?.to_usl()? } else { compute_join_table(&canned_poset(s)?)? };
    compute_implication_table(&u)
}

fn call_arg(s: &str, head: &str) -> Option<usize> {
    s.trim().strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
}

/// An algebra dump, a poset file (read as its up-set algebra), a canned
/// poset name, or `B(n)` for the free lattice on `n` generators.
pub fn algebra(s: &str, upset_cap: usize, allow_large: bool) -> Result<BrouwerAlgebra> {
    if let Some(n) = call_arg(s, "B") {
        return Ok(medvedev_algebra(n, allow_large)?.algebra().clone());
    }
    if is_file(s) {
        let v: Value = serde_json::from_str(&read(s)?)?;
        if v.get("meet").is_some() {
            return serde_json::from_value::<AlgebraFile>(v)?.into_algebra();
        }
        let f: PosetFile = serde_json::from_value(v)?;
        return from_upsets_capped(&f.to_poset()?, upset_cap);
    }
    from_upsets_capped(&canned_poset(s)?, upset_cap)
}

/// An element given by index or by label.
pub fn element(b: &BrouwerAlgebra, s: &str) -> Result<usize> {
    let s = s.trim();
    if let Ok(i) = s.parse::<usize>() {
        return if i < b.size() { Ok(i) } else { Err(Error::IndexOutOfRange { index: i, size: b.size() }) };
    }
    b.find_label(s).ok_or_else(|| Error::UnknownName(s.to_string()))
}

/// Comma-separated indices.
pub fn indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::PreconditionFailed(format!("`{t}` is not an index"))))
        .collect()
}

/// A down-set: a JSON file holding an array of indices, or the indices
/// inline.
pub fn members(s: &str, size: usize) -> Result<Mask> {
    let list: Vec<usize> = if is_file(s) { serde_json::from_str(&read(s)?)? } else { indices(s)? };
    if let Some(&i) = list.iter().find(|&&i| i >= size) {
        return Err(Error::IndexOutOfRange { index: i, size });
    }
    Ok(bits::from_indices(list))
}
