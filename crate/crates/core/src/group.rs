//! Exact arithmetic in the topological full group.
//!
//! An element `S` is stored by its orbit cocycle: a radius `M` and, for every
//! admissible centered word of length `2M`, the shift `f` with
//! `S(x) = T^{f(x)} x`. Elements are kept at the least radius on which the
//! cocycle is defined, which makes the stored form canonical. Identity is
//! `f ≡ 0`; this requires an aperiodic system, so [`FullGroup::new`] refuses
//! systems that fail the aperiodicity check.
//!
//! Products act on the left: `g·h` applies `h` first.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::clopen::{core, ClopenAlgebra, ClopenSet, Cylinder};
use crate::error::{Error, Result};
use crate::subshift::{
    aperiodicity_check, index_list, satisfies_distinct_five, LanguageOracle, Symbol, Word,
};

pub const DEFAULT_APERIODICITY_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    radius: usize,
    cocycle: BTreeMap<Word, i64>,
}

impl GroupElement {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn cocycle(&self) -> &BTreeMap<Word, i64> {
        &self.cocycle
    }

    /// Shift at the point whose centered window of radius `outer` is `z`.
    pub fn shift_at(&self, z: &[Symbol], outer: usize) -> i64 {
        self.cocycle[core(z, outer, self.radius)]
    }

    pub fn max_shift(&self) -> usize {
        self.cocycle
            .values()
            .map(|k| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// `σ_{(w,i)}` or its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    pub cylinder: Cylinder,
    pub exponent: i8,
}

impl GeneratorSymbol {
    pub fn new(cylinder: Cylinder, exponent: i8) -> Self {
        debug_assert!(exponent == 1 || exponent == -1);
        GeneratorSymbol { cylinder, exponent }
    }

    pub fn sigma(word: Word, offset: i64) -> Self {
        GeneratorSymbol::new(Cylinder::new(word, offset), 1)
    }

    pub fn inverse(&self) -> Self {
        GeneratorSymbol::new(self.cylinder.clone(), -self.exponent)
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s[({}),{}]",
            index_list(&self.cylinder.word),
            self.cylinder.offset
        )?;
        if self.exponent < 0 {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorSymbol {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator token {tok:?}"));
        let (body, exponent) = match tok.strip_suffix("^-1") {
            Some(b) => (b, -1),
            None => (tok.strip_suffix("^1").unwrap_or(tok), 1),
        };
        let inner = body
            .strip_prefix("s[(")
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (word, offset) = inner.split_once("),").ok_or_else(bad)?;
        let word = if word.is_empty() {
            Vec::new()
        } else {
            word.split('-')
                .map(|s| s.parse::<Symbol>().map_err(|_| bad()))
                .collect::<Result<Word>>()?
        };
        let offset = offset.trim().parse::<i64>().map_err(|_| bad())?;
        Ok(GeneratorSymbol::new(Cylinder::new(word, offset), exponent))
    }
}

/// Parses whitespace-separated generator tokens. A lone `1` denotes the
/// empty word.
pub fn parse_generator_word(text: &str) -> Result<Vec<GeneratorSymbol>> {
    text.split_whitespace()
        .filter(|t| *t != "1")
        .map(str::parse)
        .collect()
}

pub fn render_generator_word(word: &[GeneratorSymbol]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Relation families checked by [`FullGroup::check_relation_schema`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationFamily {
    OrderThree,
    BraidSquare,
    StarShift,
    Partition,
    Commutation,
}

#[derive(Debug, Clone)]
pub struct RelationInstance {
    pub family: RelationFamily,
    pub description: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RelationReport {
    pub instances: Vec<RelationInstance>,
}

impl RelationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RelationInstance> {
        self.instances.iter().filter(|r| !r.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.instances.iter().all(|r| r.holds)
    }

    pub fn count(&self, family: RelationFamily) -> usize {
        self.instances.iter().filter(|r| r.family == family).count()
    }
}

/// Bounds for the relation sweep: word lengths `1..=max_word_len` and
/// offsets `min_offset..=max_offset`.
#[derive(Debug, Clone, Copy)]
pub struct SchemaBounds {
    pub max_word_len: usize,
    pub min_offset: i64,
    pub max_offset: i64,
}

#[derive(Debug, Clone)]
pub struct FullGroup {
    algebra: ClopenAlgebra,
    distinct_five: bool,
}

impl FullGroup {
    pub fn new(oracle: Arc<dyn LanguageOracle>) -> Result<Self> {
        Self::with_aperiodicity_depth(oracle, DEFAULT_APERIODICITY_DEPTH)
    }

    pub fn with_aperiodicity_depth(oracle: Arc<dyn LanguageOracle>, depth: usize) -> Result<Self> {
        if !aperiodicity_check(oracle.as_ref(), depth) {
            return Err(Error::NotAperiodic { depth });
        }
        let distinct_five = satisfies_distinct_five(oracle.as_ref());
        Ok(FullGroup {
            algebra: ClopenAlgebra::new(oracle),
            distinct_five,
        })
    }

    pub fn algebra(&self) -> &ClopenAlgebra {
        &self.algebra
    }

    pub fn oracle(&self) -> &Arc<dyn LanguageOracle> {
        self.algebra.oracle()
    }

    /// Whether the system satisfies condition (†).
    pub fn satisfies_distinct_five(&self) -> bool {
        self.distinct_five
    }

    fn words(&self, radius: usize) -> Arc<crate::subshift::FactorSet> {
        self.oracle().factors(2 * radius)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            radius: 0,
            cocycle: [(Vec::new(), 0)].into_iter().collect(),
        }
    }

    /// The shift `T` itself.
    pub fn shift_map(&self) -> GroupElement {
        GroupElement {
            radius: 0,
            cocycle: [(Vec::new(), 1)].into_iter().collect(),
        }
    }

    /// Rewrites the cocycle at the least radius it factors through.
    fn reduce(&self, radius: usize, cocycle: BTreeMap<Word, i64>) -> GroupElement {
        let factors_through = |r: usize| {
            let mut seen: HashMap<&[Symbol], i64> = HashMap::with_capacity(cocycle.len());
            cocycle.iter().all(|(z, &k)| {
                let c = core(z, radius, r);
                *seen.entry(c).or_insert(k) == k
            })
        };
        let (mut lo, mut hi) = (0, radius);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if factors_through(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if lo == radius {
            return GroupElement { radius, cocycle };
        }
        let mut reduced = BTreeMap::new();
        for (z, k) in &cocycle {
            reduced.entry(core(z, radius, lo).to_vec()).or_insert(*k);
        }
        GroupElement {
            radius: lo,
            cocycle: reduced,
        }
    }

    /// The same element written at a larger radius (not reduced).
    pub fn refine(&self, g: &GroupElement, radius: usize) -> GroupElement {
        assert!(radius >= g.radius);
        let cocycle = self
            .words(radius)
            .iter()
            .map(|z| (z.clone(), g.shift_at(z, radius)))
            .collect();
        GroupElement { radius, cocycle }
    }

    /// Builds an element from clopen pieces and their shifts, checking that
    /// the pieces partition Ω and that their images do too.
    pub fn from_cocycle(&self, pieces: &[(ClopenSet, i64)]) -> Result<GroupElement> {
        let radius = pieces.iter().map(|(s, _)| s.radius()).max().unwrap_or(0);
        let mut cocycle = BTreeMap::new();
        for z in self.words(radius).iter() {
            let mut hit = pieces
                .iter()
                .filter(|(s, _)| s.contains_window(z, radius))
                .map(|(_, k)| *k);
            match (hit.next(), hit.next()) {
                (Some(k), None) => {
                    cocycle.insert(z.clone(), k);
                }
                _ => return Err(Error::NotAPartition),
            }
        }
        let g = GroupElement { radius, cocycle };
        if !self.is_bijective(&g) {
            return Err(Error::NotBijective);
        }
        Ok(self.reduce(g.radius, g.cocycle))
    }

    /// For each `y`, exactly one piece `T^k[z]` with `f(z) = k` contains it.
    fn is_bijective(&self, g: &GroupElement) -> bool {
        let m = g.radius;
        let shifts: Vec<i64> = {
            let mut v: Vec<i64> = g.cocycle.values().copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let r = m + g.max_shift();
        self.words(r).iter().all(|y| {
            shifts
                .iter()
                .filter(|&&k| {
                    let start = (r as i64 - m as i64 - k) as usize;
                    g.cocycle.get(&y[start..start + 2 * m]) == Some(&k)
                })
                .count()
                == 1
        })
    }

    /// `σ_U`: `T` on `U ∪ TU`, `T^{-2}` on `T²U`, identity elsewhere.
    pub fn sigma(&self, u: &ClopenSet) -> Result<GroupElement> {
        let m = u.radius();
        let r = m + 2;
        let mut cocycle = BTreeMap::new();
        for z in self.words(r).iter() {
            // window start 2 - k tests membership in T^k U
            let in_u = u.members().contains(&z[2..2 + 2 * m]);
            let in_tu = u.members().contains(&z[1..1 + 2 * m]);
            let in_t2u = u.members().contains(&z[..2 * m]);
            let k = match (in_u, in_tu, in_t2u) {
                (false, false, false) => 0,
                (true, false, false) | (false, true, false) => 1,
                (false, false, true) => -2,
                _ => return Err(Error::OverlapViolation),
            };
            cocycle.insert(z.clone(), k);
        }
        Ok(self.reduce(r, cocycle))
    }

    pub fn sigma_cylinder(&self, c: &Cylinder) -> Result<GroupElement> {
        self.sigma(&self.algebra.cylinder_set(c))
    }

    /// `η_U`: swaps `U` and `TU` along the orbit.
    pub fn transposition(&self, u: &ClopenSet) -> Result<GroupElement> {
        let tu = self.algebra.shift_clopen(u, 1);
        if !self.algebra.disjoint(u, &tu) {
            return Err(Error::OverlapViolation);
        }
        let rest = self.algebra.complement(&self.algebra.union(u, &tu));
        self.from_cocycle(&[(u.clone(), 1), (tu, -1), (rest, 0)])
    }

    /// `g·h`, with `f_{gh}(x) = f_g(h(x)) + f_h(x)`.
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let (mg, mh) = (g.radius, h.radius);
        let r = mh.max(mg + h.max_shift());
        let mut cocycle = BTreeMap::new();
        for z in self.words(r).iter() {
            let fh = h.shift_at(z, r);
            let start = (r as i64 - mg as i64 + fh) as usize;
            let fg = g.cocycle[&z[start..start + 2 * mg]];
            cocycle.insert(z.clone(), fg + fh);
        }
        self.reduce(r, cocycle)
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let m = g.radius;
        let r = m + g.max_shift();
        let mut shifts: Vec<i64> = g.cocycle.values().copied().collect();
        shifts.sort_unstable();
        shifts.dedup();
        let mut cocycle = BTreeMap::new();
        for y in self.words(r).iter() {
            let k = shifts
                .iter()
                .copied()
                .find(|&k| {
                    let start = (r as i64 - m as i64 - k) as usize;
                    g.cocycle.get(&y[start..start + 2 * m]) == Some(&k)
                })
                .expect("group elements are bijective");
            cocycle.insert(y.clone(), -k);
        }
        self.reduce(r, cocycle)
    }

    pub fn pow(&self, g: &GroupElement, n: i64) -> GroupElement {
        let base = if n < 0 { self.inverse(g) } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.compose(&acc, &base);
        }
        acc
    }

    pub fn equals(&self, g: &GroupElement, h: &GroupElement) -> bool {
        let r = g.radius.max(h.radius);
        self.words(r)
            .iter()
            .all(|z| g.shift_at(z, r) == h.shift_at(z, r))
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        g.cocycle.values().all(|&k| k == 0)
    }

    /// `r * s = s·r⁻¹·s⁻¹·r`.
    pub fn star(&self, r: &GroupElement, s: &GroupElement) -> GroupElement {
        let r_inv = self.inverse(r);
        let s_inv = self.inverse(s);
        let left = self.compose(&self.compose(s, &r_inv), &s_inv);
        self.compose(&left, r)
    }

    /// `[g,h] = g⁻¹·h⁻¹·g·h`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        let left = self.compose(&self.compose(&gi, &hi), g);
        self.compose(&left, h)
    }

    /// Centered words where the cocycle is nonzero.
    pub fn support(&self, g: &GroupElement) -> ClopenSet {
        self.algebra
            .from_predicate(g.radius, |z| g.cocycle.get(z).copied().unwrap_or(0) != 0)
    }

    pub fn symbol_element(&self, sym: &GeneratorSymbol) -> Result<GroupElement> {
        let s = self.sigma_cylinder(&sym.cylinder)?;
        Ok(if sym.exponent < 0 { self.inverse(&s) } else { s })
    }

    /// Evaluates `s_1 s_2 ⋯ s_n` (so `s_n` acts first).
    pub fn evaluate_word(&self, word: &[GeneratorSymbol]) -> Result<GroupElement> {
        let mut cache: HashMap<&GeneratorSymbol, GroupElement> = HashMap::new();
        let mut acc = self.identity();
        for sym in word {
            if !cache.contains_key(sym) {
                cache.insert(sym, self.symbol_element(sym)?);
            }
            acc = self.compose(&acc, &cache[sym]);
        }
        Ok(acc)
    }

    /// The nested star product
    /// `σ_{[.w0w1]} * (σ_{[.w1w2]} * ⋯ * (σ_{[.w_{n-4}w_{n-3}]} * σ_{[w_{n-3}.w_{n-2}w_{n-1}]}))`.
    pub fn nested_star_element(&self, w: &[Symbol]) -> Result<GroupElement> {
        let n = w.len();
        if n < 4 {
            return Err(Error::TooShort { len: n, min: 4 });
        }
        let mut acc = self.sigma_cylinder(&Cylinder::new(w[n - 3..].to_vec(), 1))?;
        for j in (0..=n - 4).rev() {
            let r = self.sigma_cylinder(&Cylinder::new(w[j..j + 2].to_vec(), 0))?;
            acc = self.star(&r, &acc);
        }
        Ok(acc)
    }

    /// Decides `w ∈ L(Ω)` as "the nested star product is not the identity".
    pub fn membership_via_identity(&self, w: &[Symbol]) -> Result<bool> {
        if !self.distinct_five {
            return Err(Error::DaggerViolated);
        }
        Ok(!self.is_identity(&self.nested_star_element(w)?))
    }

    /// Sweeps the relation families over all cylinders `(w, i)` within the
    /// bounds: order three, the braid square and star shift when three
    /// consecutive cylinders are disjoint, both one-symbol refinement
    /// partitions, and commutation of 3-disjoint pairs.
    pub fn check_relation_schema(&self, bounds: &SchemaBounds) -> Result<RelationReport> {
        let alg = &self.algebra;
        let mut cylinders = Vec::new();
        for m in 1..=bounds.max_word_len {
            for w in self.oracle().factors(m).iter() {
                for i in bounds.min_offset..=bounds.max_offset {
                    cylinders.push(Cylinder::new(w.clone(), i));
                }
            }
        }
        let mut memo: HashMap<Cylinder, GroupElement> = HashMap::new();
        let mut sigma = |c: &Cylinder| -> Result<GroupElement> {
            if let Some(g) = memo.get(c) {
                return Ok(g.clone());
            }
            let g = self.sigma_cylinder(c)?;
            memo.insert(c.clone(), g.clone());
            Ok(g)
        };
        let mut report = RelationReport::default();
        let mut push = |family, description: String, holds| {
            report.instances.push(RelationInstance {
                family,
                description,
                holds,
            })
        };
        for c in &cylinders {
            let s0 = sigma(c)?;
            push(
                RelationFamily::OrderThree,
                format!("{c}^3"),
                self.is_identity(&self.pow(&s0, 3)),
            );
            let (c1, c2) = (c.shifted(1), c.shifted(2));
            let consecutive_disjoint =
                alg.are_disjoint(c, &c1) && alg.are_disjoint(c, &c2) && alg.are_disjoint(&c1, &c2);
            if consecutive_disjoint {
                let s1 = sigma(&c1)?;
                let s2 = sigma(&c2)?;
                let sq = self.pow(&self.compose(&s0, &s1), 2);
                push(
                    RelationFamily::BraidSquare,
                    format!("({c} {c1})^2"),
                    self.is_identity(&sq),
                );
                push(
                    RelationFamily::StarShift,
                    format!("{c1} = {c} * {c2}"),
                    self.equals(&s1, &self.star(&s0, &s2)),
                );
            }
            let (left, right) = alg.canonical_refinements(c)?;
            for (name, parts) in [("left", left), ("right", right)] {
                let mut prod = self.identity();
                for p in &parts {
                    prod = self.compose(&prod, &sigma(p)?);
                }
                push(
                    RelationFamily::Partition,
                    format!("{c} = {name} refinement"),
                    self.equals(&s0, &prod),
                );
            }
        }
        for (a, ca) in cylinders.iter().enumerate() {
            for cb in &cylinders[a + 1..] {
                if alg.are_3disjoint(ca, cb) {
                    let comm = self.commutator(&sigma(ca)?, &sigma(cb)?);
                    push(
                        RelationFamily::Commutation,
                        format!("[{ca}, {cb}]"),
                        self.is_identity(&comm),
                    );
                }
            }
        }
        Ok(report)
    }
}
