//! Primitive substitution subshifts and their factor languages.
//!
//! A [`SubstitutionSubshift`] answers membership queries for the language
//! `L(Ω)` of the minimal subshift generated by a primitive substitution.
//! Factors of length `m` are read off `σ^t(xy)` for the admissible two-blocks
//! `xy`, where `t` is the least power with every image of length at least `m`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Deserialize;

use crate::error::{Error, Result};

pub type Symbol = u16;
pub type Word = Vec<Symbol>;

/// Ordered finite set of named symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least two symbols, got {}",
                names.len()
            )));
        }
        if names.len() > Symbol::MAX as usize {
            return Err(Error::InvalidAlphabet("too many symbols".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(Error::InvalidAlphabet("empty symbol name".into()));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {n:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Symbols named by their index: `"0"`, `"1"`, ...
    pub fn indexed(size: usize) -> Result<Self> {
        Alphabet::new((0..size).map(|k| k.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name).map(|k| k as Symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.names.len() as Symbol
    }

    fn single_char_names(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word written as concatenated symbol names. Separators
    /// (whitespace, `-`) are accepted between symbols; multi-character names
    /// are matched greedily, longest first.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for chunk in text.split(|c: char| c.is_whitespace() || c == '-') {
            if chunk.is_empty() {
                continue;
            }
            if let Some(s) = self.index_of(chunk) {
                out.push(s);
                continue;
            }
            let mut rest = chunk;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((k, n)) => {
                        out.push(k as Symbol);
                        rest = &rest[n.len()..];
                    }
                    None => {
                        return Err(Error::Parse(format!(
                            "unknown symbol at {rest:?} in {text:?}"
                        )))
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn render(&self, w: &[Symbol]) -> String {
        let sep = if self.single_char_names() { "" } else { " " };
        w.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Renders a word as a dash-separated list of symbol indices, e.g. `0-2-3`.
pub fn index_list(w: &[Symbol]) -> String {
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

/// The finite description of a substitution subshift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    rules: Vec<Word>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RuleImage {
    Text(String),
    Symbols(Vec<String>),
}

#[derive(Deserialize)]
struct SystemFile {
    alphabet: Vec<String>,
    rules: BTreeMap<String, RuleImage>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, rules: Vec<Word>) -> Result<Self> {
        if rules.len() != alphabet.len() {
            return Err(Error::InvalidSubstitution(format!(
                "{} rules for {} symbols",
                rules.len(),
                alphabet.len()
            )));
        }
        for (s, image) in rules.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::InvalidSubstitution(format!(
                    "empty image for {}",
                    alphabet.name(s as Symbol)
                )));
            }
            if image.iter().any(|&t| t as usize >= alphabet.len()) {
                return Err(Error::InvalidSubstitution(format!(
                    "image of {} uses a symbol outside the alphabet",
                    alphabet.name(s as Symbol)
                )));
            }
        }
        Ok(Substitution { alphabet, rules })
    }

    /// Builds a substitution from symbol names and one image string per symbol.
    pub fn from_strings(names: &[&str], images: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(names.iter().copied())?;
        let rules = images
            .iter()
            .map(|t| alphabet.parse_word(t))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(alphabet, rules)
    }

    /// Parses the JSON system file `{"alphabet": [...], "rules": {...}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let alphabet = Alphabet::new(file.alphabet)?;
        let mut rules = vec![None; alphabet.len()];
        for (name, image) in file.rules {
            let s = alphabet
                .index_of(&name)
                .ok_or_else(|| Error::InvalidSubstitution(format!("rule for unknown {name:?}")))?;
            let word = match image {
                RuleImage::Text(t) => alphabet.parse_word(&t)?,
                RuleImage::Symbols(v) => v
                    .iter()
                    .map(|n| {
                        alphabet
                            .index_of(n)
                            .ok_or_else(|| Error::Parse(format!("unknown symbol {n:?}")))
                    })
                    .collect::<Result<Word>>()?,
            };
            rules[s as usize] = Some(word);
        }
        let rules = rules
            .into_iter()
            .enumerate()
            .map(|(s, r)| {
                r.ok_or_else(|| {
                    Error::InvalidSubstitution(format!(
                        "missing rule for {}",
                        alphabet.name(s as Symbol)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(alphabet, rules)
    }

    /// `a → ab, b → a`
    pub fn fibonacci() -> Self {
        Substitution::from_strings(&["a", "b"], &["ab", "a"]).expect("valid")
    }

    /// `a → ab, b → ba`
    pub fn thue_morse() -> Self {
        Substitution::from_strings(&["a", "b"], &["ab", "ba"]).expect("valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rule(&self, s: Symbol) -> &[Symbol] {
        &self.rules[s as usize]
    }

    pub fn apply(&self, w: &[Symbol]) -> Word {
        w.iter().flat_map(|&s| self.rule(s).iter().copied()).collect()
    }

    pub fn iterate(&self, w: &[Symbol], k: usize) -> Word {
        let mut cur = w.to_vec();
        for _ in 0..k {
            cur = self.apply(&cur);
        }
        cur
    }

    /// `m[i][j]` counts occurrences of symbol `i` in the image of `j`.
    pub fn incidence_matrix(&self) -> Vec<Vec<u64>> {
        let d = self.alphabet.len();
        let mut m = vec![vec![0u64; d]; d];
        for (j, image) in self.rules.iter().enumerate() {
            for &i in image {
                m[i as usize][j] += 1;
            }
        }
        m
    }

    /// True iff some power `k ≤ (d-1)^2 + 1` of the incidence matrix is positive.
    pub fn is_primitive(&self) -> bool {
        let d = self.alphabet.len();
        let base: Vec<Vec<bool>> = self
            .incidence_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|x| x > 0).collect())
            .collect();
        let mut power = base.clone();
        let bound = (d - 1) * (d - 1) + 1;
        for _ in 0..bound {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; d]; d];
            for i in 0..d {
                for j in 0..d {
                    next[i][j] = (0..d).any(|k| power[i][k] && base[k][j]);
                }
            }
            power = next;
        }
        false
    }

    /// Least fixpoint of the two-block closure, seeded from the first iterate
    /// of the first symbol that contains the whole alphabet.
    pub fn admissible_two_blocks(&self) -> Result<BTreeSet<Word>> {
        if !self.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let d = self.alphabet.len();
        let mut seed = vec![0 as Symbol];
        loop {
            let present: BTreeSet<Symbol> = seed.iter().copied().collect();
            if present.len() == d && seed.len() >= 2 {
                break;
            }
            seed = self.apply(&seed);
        }
        let mut blocks: BTreeSet<Word> = seed.windows(2).map(|w| w.to_vec()).collect();
        loop {
            let mut next = blocks.clone();
            for xy in &blocks {
                let image = self.apply(xy);
                next.extend(image.windows(2).map(|w| w.to_vec()));
            }
            if next.len() == blocks.len() {
                return Ok(blocks);
            }
            blocks = next;
        }
    }
}

/// Sorted set of words of one length, with O(1) membership.
#[derive(Debug, Clone)]
pub struct FactorSet {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl FactorSet {
    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let set: BTreeSet<Word> = words.into_iter().collect();
        let words: Vec<Word> = set.into_iter().collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), k))
            .collect();
        FactorSet { words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.words.iter()
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.index.contains_key(w)
    }

    pub fn position(&self, w: &[Symbol]) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// Decidable language of a minimal subshift.
///
/// `factors(m)` must equal `{ w : |w| = m, contains(w) }` and be closed under
/// taking factors.
pub trait LanguageOracle: Send + Sync + fmt::Debug {
    fn alphabet(&self) -> &Alphabet;

    fn factors(&self, m: usize) -> Arc<FactorSet>;

    fn contains(&self, w: &[Symbol]) -> bool {
        w.is_empty() || self.factors(w.len()).contains(w)
    }
}

#[derive(Debug, Default)]
pub(crate) struct FactorCache {
    map: Mutex<HashMap<usize, Arc<FactorSet>>>,
}

impl FactorCache {
    pub(crate) fn get_or_insert_with(
        &self,
        m: usize,
        build: impl FnOnce() -> FactorSet,
    ) -> Arc<FactorSet> {
        if let Some(f) = self.map.lock().expect("factor cache poisoned").get(&m) {
            return Arc::clone(f);
        }
        let built = Arc::new(build());
        let mut map = self.map.lock().expect("factor cache poisoned");
        Arc::clone(map.entry(m).or_insert(built))
    }
}

/// The minimal subshift of a primitive substitution.
#[derive(Debug)]
pub struct SubstitutionSubshift {
    substitution: Substitution,
    two_blocks: Vec<Word>,
    cache: FactorCache,
}

impl SubstitutionSubshift {
    pub fn new(substitution: Substitution) -> Result<Self> {
        let two_blocks = substitution.admissible_two_blocks()?.into_iter().collect();
        Ok(SubstitutionSubshift {
            substitution,
            two_blocks,
            cache: FactorCache::default(),
        })
    }

    pub fn substitution(&self) -> &Substitution {
        &self.substitution
    }

    pub fn two_blocks(&self) -> &[Word] {
        &self.two_blocks
    }

    fn compute_factors(&self, m: usize) -> FactorSet {
        if m == 0 {
            return FactorSet::from_words([Vec::new()]);
        }
        let sub = &self.substitution;
        let mut images: Vec<Word> = sub.alphabet().symbols().map(|s| vec![s]).collect();
        while images.iter().map(Vec::len).min().unwrap_or(0) < m {
            images = images.iter().map(|w| sub.apply(w)).collect();
        }
        let mut out = BTreeSet::new();
        for xy in &self.two_blocks {
            let mut text = images[xy[0] as usize].clone();
            text.extend_from_slice(&images[xy[1] as usize]);
            for w in text.windows(m) {
                if !out.contains(w) {
                    out.insert(w.to_vec());
                }
            }
        }
        FactorSet::from_words(out)
    }
}

impl LanguageOracle for SubstitutionSubshift {
    fn alphabet(&self) -> &Alphabet {
        self.substitution.alphabet()
    }

    fn factors(&self, m: usize) -> Arc<FactorSet> {
        self.cache.get_or_insert_with(m, || self.compute_factors(m))
    }
}

pub fn is_primitive(sub: &Substitution) -> bool {
    sub.is_primitive()
}

pub fn admissible_two_blocks(sub: &Substitution) -> Result<BTreeSet<Word>> {
    sub.admissible_two_blocks()
}

/// `L_m` of the substitution subshift.
pub fn factors(sub: &Substitution, m: usize) -> Result<Vec<Word>> {
    let shift = SubstitutionSubshift::new(sub.clone())?;
    Ok(shift.factors(m).words().to_vec())
}

pub fn contains(oracle: &dyn LanguageOracle, w: &[Symbol]) -> bool {
    oracle.contains(w)
}

/// Morse–Hedlund witness: `|L_n| ≥ n + 1` for every `n ≤ depth`.
pub fn aperiodicity_check(oracle: &dyn LanguageOracle, depth: usize) -> bool {
    (1..=depth).all(|n| oracle.factors(n).len() > n)
}

/// Condition (†): no word of length five has a repeated symbol.
pub fn satisfies_distinct_five(oracle: &dyn LanguageOracle) -> bool {
    oracle.factors(5).iter().all(|w| {
        let set: BTreeSet<Symbol> = w.iter().copied().collect();
        set.len() == w.len()
    })
}
