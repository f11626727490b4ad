use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use brouwerlab::bits;
use brouwerlab::brouwer::{
    add_top, from_upsets_capped, interval_between, join_irreducibles, meet_arrow_law, meet_irreducibles,
    validate_brouwer, AlgebraFile, BrouwerAlgebra,
};
use brouwerlab::embedding::{gamma_embedding, powerset_instance, verify_alpha_embedding, AlphaMap, StrongUAntichain};
use brouwerlab::free::{medvedev_algebra, MEDVEDEV_CAP};
use brouwerlab::kripke::{
    dejongh_agreement, find_pmorphism_capped, frame_valid_capped, is_pmorphism, PMorphism, PMORPHISM_NODE_CAP,
};
use brouwerlab::logic::{
    eval_algebra, ipc_prove, is_identity_capped, run_corpus, Corpus, Formula, VALUATION_CAP,
};
use brouwerlab::order::PosetFile;
use brouwerlab::splitting::{
    is_splitting_class_finite, splitting_upto_depth, splitting_witness, tree_pipeline, SplittingInstance,
};
use brouwerlab::suite::{run_suite, SuiteConfig};
use brouwerlab::upset::UPSET_CAP;
use brouwerlab::{Error, Result};

mod input;
mod render;

#[derive(Parser)]
#[command(name = "brouwerlab", version, about = "Finite Brouwer algebras, Kripke frames and p-morphisms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Largest up-set enumeration allowed.
    #[arg(long, global = true, default_value_t = UPSET_CAP)]
    cap_upsets: usize,
    /// Largest valuation space searched.
    #[arg(long, global = true, default_value_t = VALUATION_CAP as u64)]
    cap_valuations: u64,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "BROUWERLAB_JOBS")]
    jobs: Option<usize>,
    /// Seed for the random part of the formula corpus.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Formula corpus file; the bundled corpus otherwise.
    #[arg(long, global = true)]
    corpus: Option<String>,
    /// Lift the size guard on free lattices.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Report formula values in the reversed order, where valid means top.
    #[arg(long, global = true)]
    heyting: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Posets: files or canned names such as `chain(3)` and `fork`.
    Poset {
        #[command(subcommand)]
        op: PosetOp,
    },
    /// Finite Brouwer algebras.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// The free distributive lattice on n generators.
    FreeLattice {
        #[arg(long)]
        n: usize,
        /// Write the algebra as JSON to this path.
        #[arg(long)]
        dump: Option<String>,
    },
    Formula {
        #[command(subcommand)]
        op: FormulaOp,
    },
    Kripke {
        #[command(subcommand)]
        op: KripkeOp,
    },
    Pmorphism {
        #[command(subcommand)]
        op: PmorphismOp,
    },
    Embedding {
        #[command(subcommand)]
        op: EmbeddingOp,
    },
    Splitting {
        #[command(subcommand)]
        op: SplittingOp,
    },
    Corpus {
        #[command(subcommand)]
        op: CorpusOp,
    },
    /// Runs the full verification battery.
    Suite {
        /// Only these criteria, comma separated.
        #[arg(long)]
        criteria: Option<String>,
    },
}

#[derive(Subcommand)]
enum PosetOp {
    Validate { poset: String },
    Show {
        poset: String,
        #[arg(long)]
        dump: Option<String>,
    },
}

#[derive(Subcommand)]
enum AlgebraOp {
    /// Up-sets of a poset under reverse inclusion.
    Build {
        #[arg(long)]
        poset: String,
        /// Adjoin a new top element.
        #[arg(long)]
        add_top: bool,
        #[arg(long)]
        dump: Option<String>,
    },
    Validate {
        #[arg(long)]
        algebra: String,
    },
    Irreducibles {
        #[arg(long)]
        algebra: String,
    },
    /// The interval `[lower, upper]`, by index or label.
    Interval {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        upper: String,
        #[arg(long)]
        lower: Option<String>,
        #[arg(long)]
        dump: Option<String>,
    },
}

#[derive(Subcommand)]
enum FormulaOp {
    /// Value under a valuation; one `--valuation` per atom, in order.
    Eval {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        valuation: Vec<String>,
    },
    Valid {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        formula: String,
    },
    Classify {
        #[arg(long)]
        formula: String,
    },
}

#[derive(Subcommand)]
enum KripkeOp {
    Valid {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        formula: String,
    },
    /// Frame validity against identities of the up-set algebra.
    Agree {
        #[arg(long)]
        frame: String,
    },
}

#[derive(Subcommand)]
enum PmorphismOp {
    Check {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Image of each source point, comma separated.
        #[arg(long)]
        map: String,
    },
    Find {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        onto: bool,
    },
}

#[derive(Subcommand)]
enum EmbeddingOp {
    /// Checks the alpha and gamma maps for an antichain; `--n k` uses the
    /// subsets of `{1..k}`.
    Verify {
        #[arg(long, required_unless_present = "n")]
        usl: Option<String>,
        #[arg(long, requires = "usl")]
        downset: Option<String>,
        #[arg(long, requires = "usl")]
        antichain: Option<String>,
        #[arg(long, conflicts_with = "usl")]
        n: Option<usize>,
    },
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    usl: String,
    #[arg(long)]
    downset: String,
}

#[derive(Subcommand)]
enum SplittingOp {
    Witness {
        #[command(flatten)]
        inst: SplitArgs,
        #[arg(long)]
        a: usize,
        /// Members of the class not below `a`, comma separated.
        #[arg(long, default_value = "")]
        b: String,
    },
    Check {
        #[command(flatten)]
        inst: SplitArgs,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// P-morphism onto the binary tree of this depth, theory transfer and
    /// the interval isomorphism.
    Pipeline {
        #[command(flatten)]
        inst: SplitArgs,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum CorpusOp {
    Run,
}

/// What a command produced: the JSON facts, whether the check passed, and
/// optionally a DOT drawing or a hand-written text form.
struct Outcome {
    report: Value,
    ok: bool,
    dot: Option<String>,
    text: Option<String>,
}

impl Outcome {
    fn new(report: Value, ok: bool) -> Self {
        Outcome { report, ok, dot: None, text: None }
    }

    fn dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let g = cli.global.clone();
    if let Some(j) = g.jobs {
        if j == 0 || rayon::ThreadPoolBuilder::new().num_threads(j).build_global().is_err() {
            eprintln!("error: cannot start {j} worker threads");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, &g) {
        Ok(out) => {
            let printed = match g.format {
                Format::Json => serde_json::to_string_pretty(&out.report).expect("serializable"),
                Format::Text => out.text.unwrap_or_else(|| render::text(&out.report)),
                Format::Dot => match out.dot {
                    Some(d) => d,
                    None => {
                        eprintln!("error: this command has no DOT rendering");
                        return ExitCode::from(2);
                    }
                },
            };
            let _ = writeln!(std::io::stdout(), "{}", printed.trim_end());
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn vcap(g: &Global) -> u128 {
    g.cap_valuations as u128
}

fn corpus(g: &Global) -> Result<Corpus> {
    match &g.corpus {
        Some(path) => Corpus::from_json(&input::read(path)?),
        None => Ok(Corpus::standard()),
    }
}

fn dump(path: &Option<String>, text: String) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| Error::PreconditionFailed(format!("cannot write {p}: {e}")))?;
    }
    Ok(())
}

fn labels(b: &BrouwerAlgebra, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| b.label(x)).collect()
}

fn run(cmd: Command, g: &Global) -> Result<Outcome> {
    match cmd {
        Command::Poset { op } => poset(op),
        Command::Algebra { op } => algebra(op, g),
        Command::FreeLattice { n, dump: path } => {
            let f = medvedev_algebra(n, g.allow_large).map_err(|e| match e {
                Error::CapExceeded { .. } => {
                    Error::PreconditionFailed(format!("n > {MEDVEDEV_CAP} needs --allow-large"))
                }
                e => e,
            })?;
            let b = f.algebra();
            dump(&path, b.to_json())?;
            let gens = f.generator_image();
            let report = json!({
                "command": "free-lattice",
                "n": n,
                "size": b.size(),
                "generators": gens.len(),
                "generator_labels": labels(b, &gens),
            });
            Ok(Outcome::new(report, true).dot(b.to_dot(&gens)))
        }
        Command::Formula { op } => formula(op, g),
        Command::Kripke { op } => kripke(op, g),
        Command::Pmorphism { op } => pmorphism(op),
        Command::Embedding { op } => embedding(op),
        Command::Splitting { op } => splitting(op, g),
        Command::Corpus { op: CorpusOp::Run } => {
            let rows = run_corpus(&corpus(g)?)?;
            let bad: Vec<&str> = rows.iter().filter(|r| !r.consistent).map(|r| r.name.as_str()).collect();
            let ok = bad.is_empty();
            Ok(Outcome::new(json!({ "command": "corpus run", "rows": rows, "inconsistent": bad }), ok))
        }
        Command::Suite { criteria } => {
            let only = criteria.as_deref().map(input::indices).transpose()?;
            let only: Option<Vec<u32>> = only.map(|v| v.into_iter().map(|i| i as u32).collect());
            let cfg = SuiteConfig {
                seed: g.seed,
                upset_cap: g.cap_upsets,
                valuation_cap: g.cap_valuations,
                ..SuiteConfig::default()
            };
            let r = run_suite(&cfg, only.as_deref());
            let mut text = String::new();
            for c in &r.criteria {
                text.push_str(&format!("{} criterion {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name));
                if !c.passed {
                    text.push_str(&format!("    details: {}\n", c.details));
                }
            }
            let ok = r.passed;
            let mut out = Outcome::new(serde_json::to_value(&r)?, ok);
            out.text = Some(text);
            Ok(out)
        }
    }
}

fn poset(op: PosetOp) -> Result<Outcome> {
    match op {
        PosetOp::Validate { poset } => {
            let file = input::poset_file(&poset)?;
            Ok(match file.to_poset() {
                Ok(p) => Outcome::new(
                    json!({
                        "command": "poset validate",
                        "valid": true,
                        "size": p.size(),
                        "minimal": bits::iter(p.minimal()).collect::<Vec<_>>(),
                        "maximal": bits::iter(p.maximal()).collect::<Vec<_>>(),
                    }),
                    true,
                ),
                Err(e) => Outcome::new(json!({ "command": "poset validate", "valid": false, "reason": e.to_string() }), false),
            })
        }
        PosetOp::Show { poset, dump: path } => {
            let p = input::poset(&poset)?;
            let file = PosetFile::from_preorder(p.as_preorder());
            dump(&path, serde_json::to_string(&file)?)?;
            let covers: Vec<(String, String)> = p.covers().into_iter().map(|(a, b)| (p.label(a), p.label(b))).collect();
            let report = json!({
                "command": "poset show",
                "size": p.size(),
                "labels": (0..p.size()).map(|i| p.label(i)).collect::<Vec<_>>(),
                "covers": covers,
                "file": file,
            });
            Ok(Outcome::new(report, true).dot(p.to_dot(0)))
        }
    }
}

fn algebra(op: AlgebraOp, g: &Global) -> Result<Outcome> {
    let load = |s: &str| input::algebra(s, g.cap_upsets, g.allow_large);
    match op {
        AlgebraOp::Build { poset, add_top: extend, dump: path } => {
            let p = input::poset(&poset)?;
            let mut b = from_upsets_capped(&p, g.cap_upsets)?;
            if extend {
                b = add_top(&b)?;
            }
            dump(&path, b.to_json())?;
            let report = json!({
                "command": "algebra build",
                "size": b.size(),
                "bottom": b.label(b.bottom()),
                "top": b.label(b.top()),
                "elements": labels(&b, &(0..b.size()).collect::<Vec<_>>()),
            });
            Ok(Outcome::new(report, true).dot(b.to_dot(&[])))
        }
        AlgebraOp::Validate { algebra } => {
            let b = if std::path::Path::new(&algebra).is_file() {
                let file: AlgebraFile = serde_json::from_str(&input::read(&algebra)?)?;
                match file.into_algebra() {
                    Ok(b) => b,
                    Err(e) => {
                        let r = json!({ "command": "algebra validate", "valid": false, "reason": e.to_string() });
                        return Ok(Outcome::new(r, false));
                    }
                }
            } else {
                load(&algebra)?
            };
            let mut laws = validate_brouwer(&b).laws;
            laws.push(meet_arrow_law(&b));
            let ok = laws.iter().all(|l| l.holds);
            Ok(Outcome::new(json!({ "command": "algebra validate", "valid": ok, "size": b.size(), "laws": laws }), ok))
        }
        AlgebraOp::Irreducibles { algebra } => {
            let b = load(&algebra)?;
            let mi = meet_irreducibles(&b);
            let ji = join_irreducibles(&b);
            let report = json!({
                "command": "algebra irreducibles",
                "size": b.size(),
                "meet_irreducible": labels(&b, &mi),
                "join_irreducible": labels(&b, &ji),
            });
            Ok(Outcome::new(report, true).dot(b.to_dot(&mi)))
        }
        AlgebraOp::Interval { algebra, upper, lower, dump: path } => {
            let b = load(&algebra)?;
            let hi = input::element(&b, &upper)?;
            let lo = lower.as_deref().map_or(Ok(b.bottom()), |s| input::element(&b, s))?;
            let iv = interval_between(&b, lo, hi)?;
            dump(&path, iv.algebra.to_json())?;
            let report = json!({
                "command": "algebra interval",
                "lower": b.label(lo),
                "upper": b.label(hi),
                "size": iv.algebra.size(),
                "members": labels(&b, &iv.members),
            });
            Ok(Outcome::new(report, true).dot(b.to_dot(&iv.members)))
        }
    }
}

fn valuation_json(b: &BrouwerAlgebra, v: &[usize]) -> Value {
    Value::Object(v.iter().enumerate().map(|(i, &e)| (format!("p{}", i + 1), json!(b.label(e)))).collect())
}

/// Rank of `e` in the reversed order: the number of elements strictly
/// below it there, so the designated value is the maximum.
fn heyting_view(b: &BrouwerAlgebra, e: usize) -> Value {
    json!({
        "designated": "top of the reversed order",
        "value_is_top": e == b.bottom(),
        "elements_below": (0..b.size()).filter(|&x| b.lt(e, x)).count(),
    })
}

fn formula(op: FormulaOp, g: &Global) -> Result<Outcome> {
    match op {
        FormulaOp::Eval { algebra, formula, valuation } => {
            let b = input::algebra(&algebra, g.cap_upsets, g.allow_large)?;
            let f = Formula::parse(&formula)?;
            let v = valuation.iter().map(|s| input::element(&b, s)).collect::<Result<Vec<_>>>()?;
            let e = eval_algebra(&b, &f, &v)?;
            let mut report = json!({
                "command": "formula eval",
                "formula": f.to_string(),
                "valuation": valuation_json(&b, &v),
                "value": b.label(e),
                "designated": e == b.bottom(),
            });
            if g.heyting {
                report["heyting"] = heyting_view(&b, e);
            }
            Ok(Outcome::new(report, true))
        }
        FormulaOp::Valid { algebra, formula } => {
            let b = input::algebra(&algebra, g.cap_upsets, g.allow_large)?;
            let f = Formula::parse(&formula)?;
            let r = is_identity_capped(&b, &f, vcap(g))?;
            let mut report = json!({
                "command": "formula valid",
                "formula": f.to_string(),
                "valid": r.holds,
                "valuations": r.valuations,
            });
            if let (Some(w), Some(e)) = (&r.witness, r.value) {
                report["witness"] = valuation_json(&b, w);
                report["value"] = json!(b.label(e));
                if g.heyting {
                    report["heyting"] = heyting_view(&b, e);
                }
            }
            Ok(Outcome::new(report, r.holds))
        }
        FormulaOp::Classify { formula } => {
            let f = Formula::parse(&formula)?;
            let report = json!({
                "command": "formula classify",
                "formula": f.to_string(),
                "ipc_theorem": ipc_prove(&f)?,
                "classical_tautology": f.is_tautology()?,
                "positive": f.is_positive(),
            });
            Ok(Outcome::new(report, true))
        }
    }
}

fn kripke(op: KripkeOp, g: &Global) -> Result<Outcome> {
    match op {
        KripkeOp::Valid { frame, formula } => {
            let p = input::poset(&frame)?;
            let f = Formula::parse(&formula)?;
            let r = frame_valid_capped(&p, &f, vcap(g))?;
            let mut report = json!({ "command": "kripke valid", "formula": f.to_string(), "valid": r.holds });
            let mut highlight = 0;
            if let Some(c) = &r.counter {
                let val: serde_json::Map<String, Value> = c
                    .valuation
                    .iter()
                    .enumerate()
                    .map(|(i, &m)| (format!("p{}", i + 1), json!(bits::iter(m).map(|w| p.label(w)).collect::<Vec<_>>())))
                    .collect();
                report["counter_valuation"] = Value::Object(val);
                report["refuting_world"] = json!(p.label(c.world));
                highlight = bits::bit(c.world);
            }
            Ok(Outcome::new(report, r.holds).dot(p.to_dot(highlight)))
        }
        KripkeOp::Agree { frame } => {
            let p = input::poset(&frame)?;
            let r = dejongh_agreement(&p, &corpus(g)?.named(), vcap(g))?;
            let ok = r.passes();
            Ok(Outcome::new(json!({ "command": "kripke agree", "rows": r.rows, "disagreements": r.disagreements }), ok))
        }
    }
}

fn pmorphism(op: PmorphismOp) -> Result<Outcome> {
    match op {
        PmorphismOp::Check { from, to, map } => {
            let f = PMorphism::new(input::poset(&from)?, input::poset(&to)?, input::indices(&map)?)?;
            let c = is_pmorphism(&f);
            let report = json!({
                "command": "pmorphism check",
                "map": f.map,
                "pmorphism": c.holds,
                "failure": c.failure,
                "onto": f.uncovered().is_none(),
                "uncovered": f.uncovered(),
            });
            Ok(Outcome::new(report, c.holds))
        }
        PmorphismOp::Find { from, to, onto } => {
            let f = find_pmorphism_capped(&input::poset(&from)?, &input::poset(&to)?, onto, PMORPHISM_NODE_CAP)?;
            let report = json!({ "command": "pmorphism find", "onto": onto, "found": f.is_some(), "map": f.as_ref().map(|f| &f.map) });
            Ok(Outcome::new(report, f.is_some()))
        }
    }
}

fn embedding(op: EmbeddingOp) -> Result<Outcome> {
    let EmbeddingOp::Verify { usl, downset, antichain, n } = op;
    let inst = match (n, usl) {
        (Some(n), _) => powerset_instance(n)?,
        (None, Some(u)) => {
            let u = input::usl(&u)?;
            let size = u.usl().size();
            let a = match downset {
                Some(d) => input::members(&d, size)?,
                None => return Err(Error::PreconditionFailed("--downset is required with --usl".into())),
            };
            let xs = input::indices(antichain.as_deref().unwrap_or(""))?;
            StrongUAntichain::new(u, a, xs)?
        }
        (None, None) => return Err(Error::PreconditionFailed("give --usl or --n".into())),
    };
    let am = AlphaMap::new(inst)?;
    let alpha = verify_alpha_embedding(&am)?;
    let mut report = json!({ "command": "embedding verify", "alpha": alpha });
    let mut ok = alpha.passes();
    let mut dot = None;
    if ok {
        let (gamma, _, iv) = gamma_embedding(&am)?;
        ok = gamma.passes();
        dot = Some(iv.algebra.to_dot(&gamma.map));
        report["gamma"] = serde_json::to_value(&gamma)?;
        report["gamma_passes"] = json!(ok);
    }
    report["passes"] = json!(ok);
    let mut out = Outcome::new(report, ok);
    out.dot = dot;
    Ok(out)
}

fn split_instance(a: &SplitArgs) -> Result<SplittingInstance> {
    let u = input::usl(&a.usl)?;
    let mask = input::members(&a.downset, u.usl().size())?;
    SplittingInstance::new(u.usl().clone(), mask)
}

fn splitting(op: SplittingOp, g: &Global) -> Result<Outcome> {
    match op {
        SplittingOp::Witness { inst, a, b } => {
            let s = split_instance(&inst)?;
            let bs = input::indices(&b)?;
            let c = splitting_witness(&s, a, &bs)?;
            let p = s.usl().poset();
            let report = json!({
                "command": "splitting witness",
                "a": a,
                "b": bs,
                "c": c,
                "c_label": c.map(|c| p.label(c)),
            });
            Ok(Outcome::new(report, c.is_some()))
        }
        SplittingOp::Check { inst, depth } => {
            let s = split_instance(&inst)?;
            let r = match depth {
                Some(d) => splitting_upto_depth(&s, d)?,
                None => is_splitting_class_finite(&s),
            };
            let ok = r.holds;
            Ok(Outcome::new(json!({ "command": "splitting check", "depth": depth, "report": r }), ok))
        }
        SplittingOp::Pipeline { inst, depth } => {
            let s = split_instance(&inst)?;
            match tree_pipeline(&s, depth, &corpus(g)?.named(), vcap(g)) {
                Ok(r) => {
                    let ok = r.passes();
                    Ok(Outcome::new(json!({ "command": "splitting pipeline", "report": r, "passes": ok }), ok))
                }
                Err(Error::NoPMorphismFound) => Ok(Outcome::new(
                    json!({ "command": "splitting pipeline", "depth": depth, "passes": false, "reason": Error::NoPMorphismFound.to_string() }),
                    false,
                )),
                Err(e) => Err(e),
            }
        }
    }
}
