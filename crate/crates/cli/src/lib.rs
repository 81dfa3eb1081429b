//! Command-line front end: load a substitution system, recode it, and run
//! one query, emission or verification per invocation.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfg_core::group::{parse_generator_word, render_generator_word, GeneratorSymbol};
use tfg_core::presentation::{
    alt_presentation_check, enumerate_relators, export_presentation, verify_relators, Bounds,
    GeneratorTable, TietzeExpander,
};
use tfg_core::subshift::{aperiodicity_check, index_list, satisfies_distinct_five};
use tfg_core::towers::{
    factor_product, kr_partition, return_words, verify_factorization, RecodedPoint, SeedPoint,
    TwoSidedPoint, DEFAULT_LEVEL_CEILING, DEFAULT_RECURRENCE_CEILING,
};
use tfg_core::{
    ClopenAlgebra, Cylinder, Error, FullGroup, LanguageOracle, RecodedSubshift, Substitution,
    SubstitutionSubshift,
};

#[derive(Debug, Parser)]
#[command(name = "tfg", version, about = "Topological full groups of substitution subshifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON system file: {"alphabet": [...], "rules": {"a": "ab", ...}}
    #[arg(long, global = true)]
    pub system: Option<PathBuf>,

    /// Maximum cylinder word length for relator emission.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_word_len: usize,

    /// Refinement depth for partition relators.
    #[arg(long, global = true, default_value_t = 1)]
    pub depth: usize,

    /// Offset range `a..b` (inclusive), intersected with 1..|w|-1.
    #[arg(long, global = true)]
    pub offsets: Option<String>,

    /// Seed point `b.a:p`; repeat for commands that need two points.
    #[arg(long = "seed-point", global = true)]
    pub seed_points: Vec<String>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// RNG seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Search ceiling for n0, recurrence and level searches.
    #[arg(long, global = true)]
    pub ceiling: Option<usize>,

    /// Word argument; see the command help for its syntax.
    #[arg(long, global = true)]
    pub word: Option<String>,

    /// Read the word argument from a file.
    #[arg(long, global = true)]
    pub word_file: Option<PathBuf>,

    /// Word length for `factors` and random sweeps.
    #[arg(long, global = true)]
    pub length: Option<usize>,

    /// Interpret words in the recoded system (dash-separated indices).
    #[arg(long, global = true)]
    pub recoded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Primitivity, two-blocks, aperiodicity and the distinct-five condition.
    CheckSystem,
    /// Block length n0 and the recoded alphabet.
    Recode,
    /// All factors of `--length`.
    Factors,
    /// Language membership of `--word`.
    Member,
    /// Return words to `--word u.v`.
    Returns,
    /// Tower table of the partition around `--seed-point` at `--level`.
    Kr {
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Cocycle of a generator word in the recoded system.
    SigmaEval,
    /// Identity test of a generator word, or a random membership sweep.
    Wordproblem {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Emit the truncated presentation.
    Relators,
    /// Emit and evaluate every relator.
    VerifyRelators,
    /// Rewrite x_(w,k) into base generators; `--word` is the B-word.
    Tietze {
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        offset: i64,
    },
    /// Split a generator word into tower-interior and near-base parts.
    Factorize,
    /// Alternating group presentation check.
    AltCheck {
        #[arg(long, default_value_t = 5)]
        degree: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Domain(Error),
    /// A check ran and reported failures; carries the report.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) | CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Failed(report) => write!(f, "{report}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

struct Loaded {
    name: String,
    substitution: Substitution,
    base: Arc<SubstitutionSubshift>,
}

impl Cli {
    fn ceiling(&self, default: usize) -> usize {
        self.ceiling.unwrap_or(default)
    }

    fn load_substitution(&self) -> CliResult<(String, Substitution)> {
        let path = self.system.as_ref().ok_or_else(|| config("--system is required"))?;
        let text = fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
        let sub = Substitution::from_json(&text).map_err(|e| config(e.to_string()))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((name, sub))
    }

    fn load(&self) -> CliResult<Loaded> {
        let (name, substitution) = self.load_substitution()?;
        let base = Arc::new(SubstitutionSubshift::new(substitution.clone())?);
        Ok(Loaded {
            name,
            substitution,
            base,
        })
    }

    fn recoded(&self, l: &Loaded) -> CliResult<Arc<RecodedSubshift>> {
        let ceiling = self.ceiling(tfg_core::recoder::DEFAULT_N0_CEILING);
        Ok(Arc::new(RecodedSubshift::new(l.base.clone(), ceiling)?))
    }

    fn word_text(&self) -> CliResult<String> {
        match (&self.word, &self.word_file) {
            (Some(w), None) => Ok(w.clone()),
            (None, Some(p)) => fs::read_to_string(p)
                .map(|t| t.trim().to_string())
                .map_err(|e| config(format!("cannot read {}: {e}", p.display()))),
            (Some(_), Some(_)) => Err(config("give only one of --word and --word-file")),
            (None, None) => Err(config("--word or --word-file is required")),
        }
    }

    /// Generator words may be given as a presentation line `rel R1: ...`.
    fn generator_word(&self) -> CliResult<Vec<GeneratorSymbol>> {
        let text = self.word_text()?;
        let body = match text.split_once(':') {
            Some((head, rest)) if head.trim_start().starts_with("rel") => rest,
            _ => text.as_str(),
        };
        Ok(parse_generator_word(body)?)
    }

    fn bounds(&self) -> CliResult<Bounds> {
        if self.max_word_len == 0 {
            return Err(config("--max-word-len must be positive"));
        }
        let mut b = Bounds::new(self.max_word_len, self.depth);
        if let Some(text) = &self.offsets {
            let (lo, hi) = parse_range(text)?;
            b.min_offset = lo;
            b.max_offset = hi;
        }
        Ok(b)
    }

    fn seed_points(&self, sub: &Substitution, needed: usize) -> CliResult<Vec<SeedPoint>> {
        if self.seed_points.len() < needed {
            return Err(config(format!("need {needed} --seed-point value(s)")));
        }
        self.seed_points
            .iter()
            .map(|s| SeedPoint::parse(sub.clone(), s).map_err(|e| config(e.to_string())))
            .collect()
    }
}

fn parse_range(text: &str) -> CliResult<(i64, i64)> {
    let bad = || config(format!("expected a..b, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse::<i64>().map_err(|_| bad())?;
    let hi = hi.trim().parse::<i64>().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Executes the command and returns its text output.
pub fn run(cli: &Cli) -> CliResult<String> {
    let out = match cli.command {
        Command::AltCheck { degree } => alt_check(degree)?,
        Command::CheckSystem => check_system(cli)?,
        Command::Recode => recode(cli)?,
        Command::Factors => factors(cli)?,
        Command::Member => member(cli)?,
        Command::Returns => returns(cli)?,
        Command::Kr { level } => kr(cli, level)?,
        Command::SigmaEval => sigma_eval(cli)?,
        Command::Wordproblem { samples } => wordproblem(cli, samples)?,
        Command::Relators => relators(cli)?,
        Command::VerifyRelators => verify(cli)?,
        Command::Tietze { offset } => tietze(cli, offset)?,
        Command::Factorize => factorize(cli)?,
    };
    if let Some(path) = &cli.out {
        fs::write(path, &out).map_err(|e| config(format!("cannot write {}: {e}", path.display())))?;
        return Ok(String::new());
    }
    Ok(out)
}

fn alt_check(degree: usize) -> CliResult<String> {
    if !(5..=10).contains(&degree) {
        return Err(config("--degree must be in 5..=10"));
    }
    let r = alt_presentation_check(degree);
    let out = format!(
        "n={degree} relations={} order={} expected={}\n",
        if r.relations_hold { "ok" } else { "fail" },
        r.order,
        r.expected_order
    );
    if !r.passed() {
        return Err(CliError::Failed(out));
    }
    Ok(out)
}

fn check_system(cli: &Cli) -> CliResult<String> {
    let (name, sub) = cli.load_substitution()?;
    let names = sub.alphabet().clone();
    let mut out = format!("system={name}\n");
    for s in names.symbols() {
        let _ = writeln!(out, "rule {} -> {}", names.name(s), names.render(sub.rule(s)));
    }
    let primitive = sub.is_primitive();
    let _ = writeln!(out, "primitive={primitive}");
    if !primitive {
        return Err(CliError::Domain(Error::NotPrimitive));
    }
    let base = SubstitutionSubshift::new(sub)?;
    let blocks: Vec<String> = base.two_blocks().iter().map(|w| names.render(w)).collect();
    let _ = writeln!(out, "two-blocks={}", blocks.join(","));
    let depth = tfg_core::group::DEFAULT_APERIODICITY_DEPTH;
    let _ = writeln!(out, "aperiodic(depth {depth})={}", aperiodicity_check(&base, depth));
    let _ = writeln!(out, "distinct-five={}", satisfies_distinct_five(&base));
    Ok(out)
}

fn recode(cli: &Cli) -> CliResult<String> {
    let l = cli.load()?;
    let rec = cli.recoded(&l)?;
    let names = l.substitution.alphabet();
    let mut out = format!("n0={}\n", rec.n0());
    for (k, w) in rec.blocks().iter().enumerate() {
        let _ = writeln!(out, "{k}: {}", names.render(w));
    }
    Ok(out)
}

fn oracle_and_render(cli: &Cli, l: &Loaded) -> CliResult<(Arc<dyn LanguageOracle>, bool)> {
    if cli.recoded {
        Ok((cli.recoded(l)?, true))
    } else {
        Ok((l.base.clone(), false))
    }
}

fn render(oracle: &dyn LanguageOracle, indices: bool, w: &[tfg_core::Symbol]) -> String {
    if indices {
        index_list(w)
    } else {
        oracle.alphabet().render(w)
    }
}

fn factors(cli: &Cli) -> CliResult<String> {
    let l = cli.load()?;
    let m = cli.length.ok_or_else(|| config("--length is required"))?;
    let (oracle, indices) = oracle_and_render(cli, &l)?;
    let mut out = String::new();
    for w in oracle.factors(m).iter() {
        let _ = writeln!(out, "{}", render(oracle.as_ref(), indices, w));
    }
    Ok(out)
}

fn member(cli: &Cli) -> CliResult<String> {
    let l = cli.load()?;
    let (oracle, _) = oracle_and_render(cli, &l)?;
    let w = oracle.alphabet().parse_word(&cli.word_text()?)?;
    Ok(format!("{}\n", oracle.contains(&w)))
}

fn returns(cli: &Cli) -> CliResult<String> {
    let l = cli.load()?;
    let (oracle, indices) = oracle_and_render(cli, &l)?;
    let text = cli.word_text()?;
    let (u, v) = text
        .split_once('.')
        .ok_or_else(|| config("--word must have the form u.v"))?;
    let names = oracle.alphabet();
    let (u, v) = (names.parse_word(u)?, names.parse_word(v)?);
    let ceiling = cli.ceiling(DEFAULT_RECURRENCE_CEILING);
    let mut out = String::new();
    for r in return_words(oracle.as_ref(), &u, &v, ceiling)? {
        let _ = writeln!(out, "{} {}", r.len(), render(oracle.as_ref(), indices, &r));
    }
    Ok(out)
}

fn kr(cli: &Cli, level: usize) -> CliResult<String> {
    let l = cli.load()?;
    let seed = cli.seed_points(&l.substitution, 1)?.remove(0);
    let (oracle, indices): (Arc<dyn LanguageOracle>, bool) = if cli.recoded {
        (cli.recoded(&l)?, true)
    } else {
        (l.base.clone(), false)
    };
    let point: Box<dyn TwoSidedPoint> = if cli.recoded {
        Box::new(RecodedPoint::new(seed, cli.recoded(&l)?))
    } else {
        Box::new(seed)
    };
    let ceiling = cli.ceiling(DEFAULT_RECURRENCE_CEILING);
    let p = kr_partition(oracle.as_ref(), point.as_ref(), level, ceiling)?;
    let alg = ClopenAlgebra::new(oracle.clone());
    let radius = (0..p.tower_count())
        .map(|t| p.tower_base(t).min_radius())
        .max()
        .unwrap_or(0);
    let r = |w: &[tfg_core::Symbol]| render(oracle.as_ref(), indices, w);
    let mut out = format!("level={} u={} v={} radius={radius}\n", level, r(p.u()), r(p.v()));
    let _ = writeln!(out, "return_word\theight\tbase_members");
    for t in 0..p.tower_count() {
        let members = alg.to_clopen(&p.tower_base(t), radius)?.len();
        let _ = writeln!(out, "{}\t{}\t{members}", r(&p.return_words()[t]), p.height(t));
    }
    Ok(out)
}

fn recoded_group(cli: &Cli) -> CliResult<(Loaded, Arc<RecodedSubshift>, FullGroup)> {
    let l = cli.load()?;
    let rec = cli.recoded(&l)?;
    let group = FullGroup::new(rec.clone())?;
    Ok((l, rec, group))
}

fn sigma_eval(cli: &Cli) -> CliResult<String> {
    let (_, _, group) = recoded_group(cli)?;
    let g = group.evaluate_word(&cli.generator_word()?)?;
    let mut out = format!("radius={}\n", g.radius());
    let support: Vec<_> = g.cocycle().iter().filter(|(_, &k)| k != 0).collect();
    let _ = writeln!(out, "support={}/{}", support.len(), g.cocycle().len());
    for (z, k) in support {
        let _ = writeln!(out, "{} {k:+}", index_list(z));
    }
    Ok(out)
}

fn wordproblem(cli: &Cli, samples: usize) -> CliResult<String> {
    let (_, rec, group) = recoded_group(cli)?;
    if cli.word.is_some() || cli.word_file.is_some() {
        let g = group.evaluate_word(&cli.generator_word()?)?;
        let verdict = if group.is_identity(&g) { "identity" } else { "not identity" };
        return Ok(format!("{verdict}\n"));
    }
    // random sweep: membership by group identity against the language
    // oracle, half the samples drawn from the language itself
    let len = cli.length.unwrap_or(5);
    if len < 4 {
        return Err(config("--length must be at least 4"));
    }
    let k = rec.blocks().len() as tfg_core::Symbol;
    let language = rec.factors(len);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let (mut members, mut disagreements) = (0, 0);
    for _ in 0..samples {
        let w: Vec<_> = if rng.gen_bool(0.5) {
            language.words()[rng.gen_range(0..language.len())].clone()
        } else {
            (0..len).map(|_| rng.gen_range(0..k)).collect()
        };
        let via_group = group.membership_via_identity(&w)?;
        members += usize::from(via_group);
        disagreements += usize::from(via_group != rec.contains(&w));
    }
    Ok(format!(
        "seed={} samples={samples} length={len} members={members} disagreements={disagreements}\n",
        cli.seed
    ))
}

fn presentation(cli: &Cli) -> CliResult<(Loaded, Arc<RecodedSubshift>, FullGroup, tfg_core::presentation::Presentation)> {
    let (l, rec, group) = recoded_group(cli)?;
    let p = enumerate_relators(&group, &cli.bounds()?)?;
    Ok((l, rec, group, p))
}

fn relators(cli: &Cli) -> CliResult<String> {
    let (l, rec, _, p) = presentation(cli)?;
    Ok(export_presentation(&p, &l.name, rec.n0()))
}

fn verify(cli: &Cli) -> CliResult<String> {
    let (_, _, group, p) = presentation(cli)?;
    let report = verify_relators(&group, &p)?;
    let mut out = format!("checked={} failures={}\n", report.checked, report.failures.len());
    for &k in &report.failures {
        let r = &p.relators[k];
        let _ = writeln!(out, "fail {}: {}", r.tag, render_generator_word(&r.schema));
    }
    if !report.passed() {
        return Err(CliError::Failed(out));
    }
    Ok(out)
}

fn tietze(cli: &Cli, offset: i64) -> CliResult<String> {
    let (_, rec, group) = recoded_group(cli)?;
    let w = rec.alphabet().parse_word(&cli.word_text()?)?;
    let table = GeneratorTable::new(rec.as_ref());
    let word = TietzeExpander::new(group.algebra(), &table).expand(&Cylinder::new(w, offset))?;
    Ok(format!("{}\n", render_generator_word(&table.to_symbols(&word))))
}

fn factorize(cli: &Cli) -> CliResult<String> {
    let (l, rec, group) = recoded_group(cli)?;
    let mut seeds = cli.seed_points(&l.substitution, 2)?;
    let omega2 = RecodedPoint::new(seeds.remove(1), rec.clone());
    let omega = RecodedPoint::new(seeds.remove(0), rec);
    let word = cli.generator_word()?;
    let f = factor_product(&group, &word, &omega, &omega2, cli.ceiling(DEFAULT_LEVEL_CEILING))?;
    let check = verify_factorization(&group, &word, &f)?;
    let mut out = format!("level={} min_height={}\n", f.partition.level(), f.partition.min_height());
    let _ = writeln!(out, "P: {}", render_generator_word(&f.p_word));
    let _ = writeln!(out, "Q: {}", render_generator_word(&f.q_word));
    let _ = writeln!(
        out,
        "product={} p_tower_interior={} q_inside_base={}",
        check.product, check.p_tower_interior, check.q_inside_base
    );
    Ok(out)
}
