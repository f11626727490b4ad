//! The verification battery: each check runs exhaustively over a fixed
//! family of algebras, frames or instances and yields a pass/fail line with
//! supporting details. Reports carry no timings, so equal seeds and caps
//! give byte-identical JSON regardless of thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bits::{self, Mask};
use crate::brouwer::{
    add_top, from_upsets_capped, interval, join_irreducibles, meet_arrow_law, meet_irreducibles, validate_brouwer,
    BrouwerAlgebra,
};
use crate::embedding::{gamma_embedding, powerset_instance, verify_alpha_embedding, AlphaMap};
use crate::error::{Error, Result};
use crate::free::{iota_arrow_check, medvedev_algebra};
use crate::kripke::{
    all_pmorphisms, dejongh_agreement, find_pmorphism, is_pmorphism, pmorphism_theory_transfer, PMorphism,
    PMORPHISM_NODE_CAP,
};
use crate::logic::{ipc_prove, is_identity_capped, random_formulas, Compiled, Corpus, Formula};
use crate::order::{antichain, binary_tree, boolean, boolean_reverse_usl, chain, compute_join_table, diamond, fork, Poset};
use crate::splitting::{
    interval_isomorphism_check, is_splitting_class_finite, powerset_splitting_instance, splitting_witness,
    SplittingInstance,
};
use crate::upset::enumerate_upset_masks;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub upset_cap: usize,
    pub valuation_cap: u64,
    pub random_count: usize,
    pub random_depth: usize,
    pub random_atoms: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            upset_cap: crate::upset::UPSET_CAP,
            valuation_cap: crate::logic::VALUATION_CAP as u64,
            random_count: 200,
            random_depth: 4,
            random_atoms: 2,
        }
    }
}

impl SuiteConfig {
    fn vcap(&self) -> u128 {
        self.valuation_cap as u128
    }

    /// The bundled corpus followed by the seeded random formulas.
    pub fn formulas(&self) -> Vec<(String, Formula)> {
        let mut out = Corpus::standard().named();
        let random = random_formulas(self.seed, self.random_count, self.random_depth, self.random_atoms);
        out.extend(random.into_iter().enumerate().map(|(i, f)| (format!("random_{i:03}"), f)));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "free lattice sizes"),
    (2, "brouwer laws"),
    (3, "generators are the meet-irreducibles"),
    (4, "kripke and algebra semantics agree"),
    (5, "ipc within identities within classical"),
    (6, "weak excluded middle and irreducible top"),
    (7, "positive formulas under an added top"),
    (8, "alpha and gamma embeddings"),
    (9, "p-morphisms and pullbacks"),
    (10, "splitting classes"),
];

pub fn run_suite(cfg: &SuiteConfig, only: Option<&[u32]>) -> SuiteReport {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .filter(|(id, _)| only.is_none_or(|o| o.contains(id)))
        .map(|&(id, _)| run_criterion(id, cfg))
        .collect();
    SuiteReport { config: cfg.clone(), passed: criteria.iter().all(|c| c.passed), criteria }
}

/// Runs one check. Errors become a failed line carrying the message.
pub fn run_criterion(id: u32, cfg: &SuiteConfig) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1).to_string();
    let outcome = match id {
        1 => free_sizes(cfg),
        2 => brouwer_laws(cfg),
        3 => generators(cfg),
        4 => semantics_agree(cfg),
        5 => ipc_sandwich(cfg),
        6 => jankov(cfg),
        7 => positive_fragment(cfg),
        8 => embeddings(cfg),
        9 => pmorphisms(cfg),
        10 => splitting(cfg),
        _ => Err(Error::UnknownName(format!("criterion {id}"))),
    };
    match outcome {
        Ok((passed, details)) => CriterionResult { id, name, passed, details },
        Err(e) => CriterionResult { id, name, passed: false, details: json!({ "error": e.to_string() }) },
    }
}

type Outcome = Result<(bool, Value)>;

/// Free lattice sizes against counting up-closed subsets of the cube.
pub const FREE_SIZES: [usize; 4] = [3, 6, 20, 168];

fn free_sizes(_cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 1..=4 {
        let size = medvedev_algebra(n, false)?.algebra().size();
        let u = boolean_reverse_usl(n)?;
        let cube = u.poset();
        let oracle = (0..1u64 << cube.size()).into_par_iter().filter(|&s| cube.is_up_closed(s)).count();
        ok &= size == oracle && size == FREE_SIZES[n - 1];
        rows.push(json!({ "n": n, "size": size, "oracle": oracle, "expected": FREE_SIZES[n - 1] }));
    }
    Ok((ok, json!({ "sizes": rows })))
}

fn small_posets() -> Vec<(String, Poset)> {
    let mut out = Vec::new();
    for k in 1..=5 {
        out.push((format!("chain({k})"), chain(k).expect("chain")));
    }
    for k in 2..=4 {
        out.push((format!("antichain({k})"), antichain(k).expect("antichain")));
    }
    out.push(("fork".into(), fork()));
    out.push(("diamond".into(), diamond()));
    out.push(("binary_tree(2)".into(), binary_tree(2).expect("tree")));
    out.push(("boolean(3)".into(), boolean(3).expect("boolean")));
    out
}

/// Every algebra the battery evaluates: up-set algebras of small posets,
/// `B_1..B_4`, added tops, and the intervals `[0, x]` of `B_2`.
pub fn algebra_family(cfg: &SuiteConfig) -> Result<Vec<(String, BrouwerAlgebra)>> {
    let mut out = Vec::new();
    for (name, p) in small_posets() {
        out.push((format!("up({name})"), from_upsets_capped(&p, cfg.upset_cap)?));
    }
    for n in 1..=4 {
        out.push((format!("B{n}"), medvedev_algebra(n, false)?.algebra().clone()));
    }
    for (name, p) in [("chain(2)", chain(2)?), ("fork", fork()), ("diamond", diamond())] {
        out.push((format!("add_top(up({name}))"), add_top(&from_upsets_capped(&p, cfg.upset_cap)?)?));
    }
    let b2 = medvedev_algebra(2, false)?;
    let b2 = b2.algebra();
    for x in (0..b2.size()).filter(|&x| x != b2.bottom()) {
        out.push((format!("B2[0,{}]", b2.label(x)), interval(b2, x)?.algebra));
    }
    Ok(out)
}

fn poset_from_covers(n: usize, covers: &[(usize, usize)]) -> Poset {
    let mut up: Vec<Mask> = (0..n).map(bits::bit).collect();
    for _ in 0..n {
        for &(a, b) in covers {
            up[a] |= up[b];
        }
    }
    let pairs: Vec<_> = (0..n).flat_map(|a| bits::iter(up[a]).map(move |b| (a, b))).collect();
    Poset::from_pairs(n, &pairs).expect("covers of a poset")
}

/// Frames with at most six worlds: the canned shapes plus a few others.
pub fn frame_family() -> Vec<(String, Poset)> {
    let mut out = Vec::new();
    for k in 1..=6 {
        out.push((format!("chain({k})"), chain(k).expect("chain")));
    }
    for k in 2..=6 {
        out.push((format!("antichain({k})"), antichain(k).expect("antichain")));
    }
    out.push(("fork".into(), fork()));
    out.push(("diamond".into(), diamond()));
    out.push(("inverted_fork".into(), poset_from_covers(3, &[(0, 2), (1, 2)])));
    out.push(("n".into(), poset_from_covers(4, &[(0, 2), (1, 2), (1, 3)])));
    out.push(("y".into(), poset_from_covers(4, &[(0, 1), (1, 2), (1, 3)])));
    out.push(("tree5".into(), poset_from_covers(5, &[(0, 1), (0, 2), (1, 3), (1, 4)])));
    out.push(("diamond_tail".into(), poset_from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])));
    out.push(("three_leaves".into(), poset_from_covers(4, &[(0, 1), (0, 2), (0, 3)])));
    out.push(("crown".into(), poset_from_covers(6, &[(0, 3), (0, 4), (1, 4), (1, 5), (2, 5), (2, 3)])));
    out.push(("fork_of_chains".into(), poset_from_covers(5, &[(0, 1), (1, 2), (0, 3), (3, 4)])));
    out
}

fn brouwer_laws(cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut failures = Vec::new();
    let family = algebra_family(cfg)?;
    for (name, b) in &family {
        let report = validate_brouwer(b);
        let mut laws: Vec<_> = report.laws.iter().filter(|l| !l.holds).cloned().collect();
        let ma = meet_arrow_law(b);
        if !ma.holds {
            laws.push(ma);
        }
        if !laws.is_empty() {
            ok = false;
            failures.push(json!({ "algebra": name, "failed": laws }));
        }
    }
    let largest = family.iter().map(|(_, b)| b.size()).max().unwrap_or(0);
    Ok((ok, json!({ "algebras": family.len(), "largest": largest, "failures": failures })))
}

fn generators(_cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 1..=4 {
        let f = medvedev_algebra(n, false)?;
        let irreducible = meet_irreducibles(f.algebra());
        let image = f.generator_image();
        let arrow = iota_arrow_check(&f);
        let row_ok = irreducible == image && image.len() == 1 << n && arrow.holds;
        ok &= row_ok;
        rows.push(json!({
            "n": n,
            "meet_irreducibles": irreducible.len(),
            "generators": image.len(),
            "equal": irreducible == image,
            "iota_preserves_arrow": arrow,
        }));
    }
    Ok((ok, json!({ "rows": rows })))
}

fn semantics_agree(cfg: &SuiteConfig) -> Outcome {
    let formulas = cfg.formulas();
    let frames = frame_family();
    let mut disagreements = Vec::new();
    for (name, p) in &frames {
        let report = dejongh_agreement(p, &formulas, cfg.vcap())?;
        for d in report.disagreements {
            disagreements.push(json!({ "frame": name, "formula": d }));
        }
    }
    let ok = disagreements.is_empty();
    Ok((ok, json!({ "frames": frames.len(), "formulas": formulas.len(), "disagreements": disagreements })))
}

fn ipc_sandwich(cfg: &SuiteConfig) -> Outcome {
    let formulas = cfg.formulas();
    let two = from_upsets_capped(&chain(1)?, cfg.upset_cap)?;
    let family = algebra_family(cfg)?;
    let mut violations = Vec::new();
    let mut theorems = 0;
    for (fname, f) in &formulas {
        let ipc = ipc_prove(f)?;
        let classical = is_identity_capped(&two, f, cfg.vcap())?.holds;
        theorems += ipc as usize;
        for (aname, b) in &family {
            let id = is_identity_capped(b, f, cfg.vcap())?.holds;
            if (ipc && !id) || (id && !classical) {
                violations.push(json!({ "formula": fname, "algebra": aname, "ipc": ipc, "identity": id, "classical": classical }));
            }
        }
    }
    let ok = violations.is_empty();
    Ok((ok, json!({ "formulas": formulas.len(), "ipc_theorems": theorems, "algebras": family.len(), "violations": violations })))
}

fn jankov(cfg: &SuiteConfig) -> Outcome {
    let wlem = Formula::parse("~p1 | ~~p1")?;
    let mut ok = true;
    let mut rows = Vec::new();
    for (name, b) in algebra_family(cfg)? {
        let irreducible_top = join_irreducibles(&b).contains(&b.top());
        let identity = is_identity_capped(&b, &wlem, cfg.vcap())?.holds;
        if irreducible_top && !identity {
            ok = false;
        }
        rows.push(json!({ "algebra": name, "irreducible_top": irreducible_top, "identity": identity }));
    }
    let fk = from_upsets_capped(&fork(), cfg.upset_cap)?;
    let r = is_identity_capped(&fk, &wlem, cfg.vcap())?;
    let leaf0 = fk.find_label("{l0}");
    let witness = r.witness.as_ref().map(|w| w.iter().map(|&e| fk.label(e)).collect::<Vec<_>>());
    let pinned = !r.holds && leaf0.is_some() && r.witness == leaf0.map(|l| vec![l]);
    ok &= pinned;
    Ok((ok, json!({ "algebras": rows, "fork_witness": witness, "fork_witness_pinned": pinned })))
}

/// Largest algebra used for the added-top comparison.
pub const ADD_TOP_LIMIT: usize = 20;

fn positive_fragment(cfg: &SuiteConfig) -> Outcome {
    let positive: Vec<_> = cfg.formulas().into_iter().filter(|(_, f)| f.is_positive()).collect();
    let family: Vec<_> = algebra_family(cfg)?.into_iter().filter(|(_, b)| b.size() <= ADD_TOP_LIMIT).collect();
    let mut violations = Vec::new();
    let mut valuations = 0u64;
    for (aname, b) in &family {
        let bt = add_top(b)?;
        let n = b.size();
        for (fname, f) in &positive {
            let (pb, pt) = (Compiled::new(b, f), Compiled::new(&bt, f));
            let k = f.atom_count();
            let total = (n as u64).pow(k as u32);
            valuations += total;
            let mismatch = (0..total).into_par_iter().find_first(|&code| {
                let mut v = vec![0; k];
                let mut c = code;
                for slot in v.iter_mut().rev() {
                    *slot = (c % n as u64) as usize;
                    c /= n as u64;
                }
                pb.run(b, &v, &mut Vec::new()) != pt.run(&bt, &v, &mut Vec::new())
            });
            if let Some(code) = mismatch {
                violations.push(json!({ "algebra": aname, "formula": fname, "valuation_code": code }));
            }
            let in_top = is_identity_capped(&bt, f, cfg.vcap())?.holds;
            let in_b = is_identity_capped(b, f, cfg.vcap())?.holds;
            if in_top && !in_b {
                violations.push(json!({ "algebra": aname, "formula": fname, "transfer": false }));
            }
        }
    }
    let ok = violations.is_empty();
    Ok((ok, json!({ "algebras": family.len(), "positive_formulas": positive.len(), "valuations": valuations, "violations": violations })))
}

fn embeddings(_cfg: &SuiteConfig) -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 1..=2 {
        let am = AlphaMap::new(powerset_instance(n)?)?;
        let alpha = verify_alpha_embedding(&am)?;
        let (gamma, bn, iv) = gamma_embedding(&am)?;
        let failed: Vec<_> = gamma.laws.laws.iter().filter(|l| !l.holds).cloned().collect();
        let collapsed = gamma.laws.law("injective").witness.as_ref().map(|w| w.iter().map(|&e| bn.algebra().label(e)).collect::<Vec<_>>());
        ok &= alpha.passes() && gamma.passes();
        let mut image = gamma.map.clone();
        image.sort_unstable();
        image.dedup();
        let image_size = image.len();
        rows.push(json!({
            "n": n,
            "alpha_passes": alpha.passes(),
            "alpha_failed": alpha.laws.iter().filter(|l| !l.holds).collect::<Vec<_>>(),
            "gamma_passes": gamma.passes(),
            "gamma_matches_extension": gamma.agrees_with_extension.holds,
            "gamma_failed": failed,
            "gamma_collapses": collapsed,
            "source_size": bn.algebra().size(),
            "interval_size": iv.algebra.size(),
            "image_size": image_size,
        }));
    }
    Ok((ok, json!({ "instances": rows })))
}

/// Frames whose onto p-morphisms are all enumerated for the pullback
/// check: [`frame_family`] without the antichains of five or six points,
/// whose surjections onto the other frames number in the thousands. Pairs
/// involving those two still get their lex-least onto p-morphism checked.
pub fn pullback_family() -> Vec<(String, Poset)> {
    frame_family()
        .into_iter()
        .filter(|(name, p)| !(name.starts_with("antichain") && p.size() >= 5))
        .collect()
}

/// Checks `w ⊩ φ` in the pulled-back model iff `f(w) ⊩ φ`, for every
/// monotone valuation on the target.
pub fn pullback_lemma(f: &PMorphism, formulas: &[(String, Formula)], cap: u128) -> Result<(u64, Option<String>)> {
    let upsets = enumerate_upset_masks(&f.target, crate::upset::UPSET_CAP)?;
    let mut checks = 0u64;
    for (name, phi) in formulas {
        let k = phi.atom_count();
        let radix = upsets.len() as u64;
        let total = (0..k).try_fold(1u128, |a, _| a.checked_mul(radix as u128)).unwrap_or(u128::MAX);
        crate::error::cap_check("valuations", total, cap)?;
        let bad = (0..total as u64).into_par_iter().find_first(|&code| {
            let mut v = vec![0; k];
            let mut c = code;
            for slot in v.iter_mut().rev() {
                *slot = upsets[(c % radix) as usize];
                c /= radix;
            }
            let target = crate::kripke::KripkeModel::new(f.target.clone(), v).expect("monotone");
            let source = crate::kripke::pullback(f, &target).expect("same frame");
            let t = target.forcing_mask(phi).expect("assigned");
            source.forcing_mask(phi).expect("assigned") != f.preimage(t)
        });
        checks += total as u64;
        if bad.is_some() {
            return Ok((checks, Some(name.clone())));
        }
    }
    Ok((checks, None))
}

fn pmorphisms(cfg: &SuiteConfig) -> Outcome {
    let corpus = Corpus::standard().named();
    let accept = is_pmorphism(&PMorphism::new(fork(), chain(2)?, vec![0, 1, 1])?).holds;
    let reject = !is_pmorphism(&PMorphism::new(chain(2)?, fork(), vec![0, 1])?).holds;
    let tree = find_pmorphism(&binary_tree(2)?, &binary_tree(1)?, true)?;
    let tree_ok = tree.as_ref().is_some_and(|t| is_pmorphism(t).holds && t.uncovered().is_none());

    let frames = frame_family();
    let exhaustive: Vec<String> = pullback_family().into_iter().map(|(n, _)| n).collect();
    let mut maps = 0usize;
    let mut checks = 0u64;
    let mut pullback_failures = Vec::new();
    let mut transfer_failures = Vec::new();
    let mut transfers = 0usize;
    for (sname, s) in &frames {
        for (tname, t) in &frames {
            let fs = if exhaustive.contains(sname) && exhaustive.contains(tname) {
                all_pmorphisms(s, t, true, PMORPHISM_NODE_CAP)?
            } else {
                find_pmorphism(s, t, true)?.into_iter().collect()
            };
            maps += fs.len();
            for f in &fs {
                let (c, bad) = pullback_lemma(f, &corpus, cfg.vcap())?;
                checks += c;
                if let Some(name) = bad {
                    pullback_failures.push(json!({ "source": sname, "target": tname, "map": f.map, "formula": name }));
                }
            }
            if let Some(f) = fs.first() {
                transfers += 1;
                let r = pmorphism_theory_transfer(f, &corpus, cfg.vcap())?;
                if !r.passes() {
                    transfer_failures.push(json!({ "source": sname, "target": tname, "formulas": r.violations }));
                }
            }
        }
    }
    let ok = accept && reject && tree_ok && pullback_failures.is_empty() && transfer_failures.is_empty();
    Ok((
        ok,
        json!({
            "fork_to_chain_accepted": accept,
            "chain_to_fork_rejected": reject,
            "tree_map": tree.map(|t| t.map),
            "frames": frames.len(),
            "frames_with_all_maps": exhaustive.len(),
            "onto_pmorphisms": maps,
            "pullback_checks": checks,
            "pullback_failures": pullback_failures,
            "transfers": transfers,
            "transfer_failures": transfer_failures,
        }),
    ))
}

fn grid(w: usize, h: usize) -> Poset {
    let n = w * h;
    let mut covers = Vec::new();
    for i in 0..w {
        for j in 0..h {
            if i + 1 < w {
                covers.push((i * h + j, (i + 1) * h + j));
            }
            if j + 1 < h {
                covers.push((i * h + j, i * h + j + 1));
            }
        }
    }
    poset_from_covers(n, &covers)
}

/// Every down-set containing the bottom, over a handful of lattices with
/// at most twelve elements.
pub fn splitting_family() -> Result<Vec<(String, SplittingInstance)>> {
    let lattices = [
        ("chain(3)".to_string(), chain(3)?),
        ("diamond".to_string(), diamond()),
        ("boolean(2)".to_string(), boolean(2)?),
        ("boolean(3)".to_string(), boolean(3)?),
        ("grid(3,4)".to_string(), grid(3, 4)),
        ("chain(12)".to_string(), chain(12)?),
    ];
    let mut out = Vec::new();
    for (name, p) in lattices {
        let usl = compute_join_table(&p)?;
        for up in enumerate_upset_masks(&p, crate::upset::UPSET_CAP)? {
            let a = p.carrier() & !up;
            if bits::has(a, usl.bottom()) {
                out.push((format!("{name}/{a:#x}"), SplittingInstance::new(usl.clone(), a)?));
            }
        }
    }
    Ok(out)
}

fn splitting(_cfg: &SuiteConfig) -> Outcome {
    let pinned = powerset_splitting_instance();
    let witness = splitting_witness(&pinned, 0, &[1])?;
    let witness_ok = witness == Some(2);
    let family = splitting_family()?;
    let mut finite_failures = Vec::new();
    let mut iso_failures = Vec::new();
    for (name, inst) in &family {
        let r = is_splitting_class_finite(inst);
        let maximal = r.maximal_witness.is_some_and(|a| {
            bits::iter(inst.class()).all(|c| c == a || !inst.usl().leq(a, c))
        });
        if r.holds || !maximal {
            finite_failures.push(json!(name));
        }
        if !interval_isomorphism_check(inst)?.passes() {
            iso_failures.push(json!(name));
        }
    }
    let ok = witness_ok && finite_failures.is_empty() && iso_failures.is_empty();
    Ok((
        ok,
        json!({
            "witness": witness.map(|c| pinned.usl().poset().label(c)),
            "instances": family.len(),
            "finite_failures": finite_failures,
            "isomorphism_failures": iso_failures,
        }),
    ))
}
