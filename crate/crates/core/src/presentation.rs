//! Truncated presentation over the generators `x_{(w,1)}`, `w ∈ L_3`.
//!
//! Every other `x_{(w,k)}` is rewritten into these generators: short words
//! and out-of-range offsets through one-symbol refinements, longer words
//! through the two star-product convolutions. Relators are emitted for all
//! cylinders within explicit bounds and verified by evaluation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::clopen::{ClopenAlgebra, Cylinder};
use crate::error::{Error, Result};
use crate::group::{render_generator_word, FullGroup, GeneratorSymbol, GroupElement};
use crate::subshift::{index_list, LanguageOracle, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

impl Letter {
    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            exponent: -self.exponent,
        }
    }
}

/// A word in the free group on the generator table.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(pub Vec<Letter>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn letter(generator: usize) -> Self {
        FreeWord(vec![Letter {
            generator,
            exponent: 1,
        }])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> Self {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        FreeWord(out)
    }

    /// `r * s = s r⁻¹ s⁻¹ r`.
    pub fn star(r: &FreeWord, s: &FreeWord) -> Self {
        s.concat(&r.inverse()).concat(&s.inverse()).concat(r)
    }
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &FreeWord) -> FreeWord {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    FreeWord(out)
}

/// The base generators `x_{(w,1)}`, `w ∈ L_3`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl GeneratorTable {
    pub fn new(oracle: &dyn LanguageOracle) -> Self {
        let words = oracle.factors(3).words().to_vec();
        let index = words
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), k))
            .collect();
        GeneratorTable { words, index }
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

    pub fn index_of(&self, w: &[crate::subshift::Symbol]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn cylinder(&self, generator: usize) -> Cylinder {
        Cylinder::new(self.words[generator].clone(), 1)
    }

    pub fn symbol(&self, l: Letter) -> GeneratorSymbol {
        GeneratorSymbol::new(self.cylinder(l.generator), l.exponent)
    }

    pub fn to_symbols(&self, w: &FreeWord) -> Vec<GeneratorSymbol> {
        w.0.iter().map(|&l| self.symbol(l)).collect()
    }

    /// Reads a word whose symbols are all base generators.
    pub fn from_symbols(&self, symbols: &[GeneratorSymbol]) -> Result<FreeWord> {
        symbols
            .iter()
            .map(|s| {
                if s.cylinder.offset != 1 {
                    return Err(Error::UnsupportedOffset(s.cylinder.to_string()));
                }
                let generator = self
                    .index_of(&s.cylinder.word)
                    .ok_or_else(|| Error::NotInLanguage(index_list(&s.cylinder.word)))?;
                Ok(Letter {
                    generator,
                    exponent: s.exponent,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(FreeWord)
    }
}

/// Rewrites arbitrary `x_{(w,k)}` into base generators, memoizing
/// intermediate cylinders.
#[derive(Debug)]
pub struct TietzeExpander<'a> {
    alg: &'a ClopenAlgebra,
    table: &'a GeneratorTable,
    memo: HashMap<Cylinder, FreeWord>,
}

impl<'a> TietzeExpander<'a> {
    pub fn new(alg: &'a ClopenAlgebra, table: &'a GeneratorTable) -> Self {
        TietzeExpander {
            alg,
            table,
            memo: HashMap::new(),
        }
    }

    fn product(&mut self, parts: &[Cylinder]) -> Result<FreeWord> {
        let mut out = FreeWord::empty();
        for p in parts {
            out = out.concat(&self.expand(p)?);
        }
        Ok(out)
    }

    pub fn expand(&mut self, c: &Cylinder) -> Result<FreeWord> {
        if let Some(w) = self.memo.get(c) {
            return Ok(w.clone());
        }
        let w = self.expand_uncached(c)?;
        self.memo.insert(c.clone(), w.clone());
        Ok(w)
    }

    fn expand_uncached(&mut self, c: &Cylinder) -> Result<FreeWord> {
        let (w, k, n) = (&c.word, c.offset, c.len() as i64);
        if w.is_empty() {
            return Err(Error::UnsupportedOffset(c.to_string()));
        }
        if !self.alg.oracle().contains(w) {
            return Ok(FreeWord::empty());
        }
        if k <= 0 {
            let parts = self.alg.left_refinement(c);
            return self.product(&parts);
        }
        if k >= n || n < 3 || (n == 3 && k == 2) {
            let parts = self.alg.right_refinement(c);
            return self.product(&parts);
        }
        if n == 3 {
            let g = self.table.index_of(w).expect("admissible 3-word");
            return Ok(FreeWord::letter(g));
        }
        if k == 1 {
            // x_{[.w0w1]} * (x_{[.w1w2]} * ( ⋯ * x_{(w_{n-3}w_{n-2}w_{n-1},1)}))
            let n = w.len();
            let mut acc = self.expand(&Cylinder::new(w[n - 3..].to_vec(), 1))?;
            for j in (0..=n - 4).rev() {
                let r = self.expand(&Cylinder::new(w[j..j + 2].to_vec(), 0))?;
                acc = FreeWord::star(&r, &acc);
            }
            return Ok(acc);
        }
        // ((x_{(w,1)} * x_{[w2.]}) * x_{[w3.]}) ⋯ * x_{[wk.]}
        let mut acc = self.expand(&Cylinder::new(w.clone(), 1))?;
        for &letter in &w[2..=k as usize] {
            let s = self.expand(&Cylinder::new(vec![letter], 1))?;
            acc = FreeWord::star(&acc, &s);
        }
        Ok(acc)
    }
}

/// Rewrites `x_{(w,k)}` into base generators.
pub fn tietze_expand(
    alg: &ClopenAlgebra,
    table: &GeneratorTable,
    w: &[crate::subshift::Symbol],
    k: i64,
) -> Result<FreeWord> {
    TietzeExpander::new(alg, table).expand(&Cylinder::new(w.to_vec(), k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelatorTag {
    /// `x³ = 1`
    R1,
    /// `(x_{(w,i)} x_{(w,i+1)})² = 1`
    R2,
    /// `x_{(w,i+1)} = x_{(w,i)} * x_{(w,i+2)}`
    R3,
    /// `x_{(w,i)} = ∏ x_{(s,k)}` over a refinement partition
    R4,
    /// `[x_{(w,i)}, x_{(v,j)}] = 1` for 3-disjoint pairs
    R5,
}

impl fmt::Display for RelatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub tag: RelatorTag,
    /// Cylinders the relator is about, primary first.
    pub cylinders: Vec<Cylinder>,
    /// The relator over `σ_{(w,i)}` symbols.
    pub schema: Vec<GeneratorSymbol>,
    /// The relator rewritten into base generators and freely reduced.
    pub expanded: FreeWord,
}

impl Relator {
    fn sort_key(&self) -> (Vec<(usize, &Word, i64)>, RelatorTag) {
        let cyl = self
            .cylinders
            .iter()
            .map(|c| (c.len(), &c.word, c.offset))
            .collect();
        (cyl, self.tag)
    }
}

/// Truncation bounds: words of length at most `max_word_len`, offsets in
/// `min_offset..=max_offset` intersected with `1..=|w|-1`, refinement
/// partitions iterated up to `depth` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_word_len: usize,
    pub min_offset: i64,
    pub max_offset: i64,
    pub depth: usize,
}

impl Bounds {
    pub fn new(max_word_len: usize, depth: usize) -> Self {
        Bounds {
            max_word_len,
            min_offset: 1,
            max_offset: i64::MAX,
            depth,
        }
    }

    pub fn offsets(&self, len: usize) -> impl Iterator<Item = i64> {
        self.min_offset.max(1)..=self.max_offset.min(len as i64 - 1)
    }
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: GeneratorTable,
    pub relators: Vec<Relator>,
    pub bounds: Bounds,
}

impl Presentation {
    pub fn count(&self, tag: RelatorTag) -> usize {
        self.relators.iter().filter(|r| r.tag == tag).count()
    }
}

fn sym(c: &Cylinder, exponent: i8) -> GeneratorSymbol {
    GeneratorSymbol::new(c.clone(), exponent)
}

/// Distinct partitions of `c` reachable by applying left or right one-symbol
/// refinement to every part, between 1 and `depth` times.
pub fn refinement_partitions(alg: &ClopenAlgebra, c: &Cylinder, depth: usize) -> Vec<Vec<Cylinder>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut layer = vec![vec![c.clone()]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for parts in &layer {
            for left in [true, false] {
                let refined: Vec<Cylinder> = parts
                    .iter()
                    .flat_map(|p| {
                        if left {
                            alg.left_refinement(p)
                        } else {
                            alg.right_refinement(p)
                        }
                    })
                    .collect();
                let mut key = refined.clone();
                key.sort();
                if seen.insert(key) {
                    out.push(refined.clone());
                    next.push(refined);
                }
            }
        }
        layer = next;
    }
    out
}

/// All relator instances within `bounds`, in `(|w|, w, i, tag)` order.
pub fn enumerate_relators(group: &FullGroup, bounds: &Bounds) -> Result<Presentation> {
    if !group.satisfies_distinct_five() {
        return Err(Error::DaggerViolated);
    }
    let alg = group.algebra();
    let oracle = group.oracle();
    let table = GeneratorTable::new(oracle.as_ref());
    let mut cylinders = Vec::new();
    for m in 1..=bounds.max_word_len {
        for w in oracle.factors(m).iter() {
            for i in bounds.offsets(m) {
                cylinders.push(Cylinder::new(w.clone(), i));
            }
        }
    }
    let mut schemas: Vec<(RelatorTag, Vec<Cylinder>, Vec<GeneratorSymbol>)> = Vec::new();
    for c in &cylinders {
        schemas.push((RelatorTag::R1, vec![c.clone()], vec![sym(c, 1); 3]));
        if c.offset + 2 < c.len() as i64 {
            let (c1, c2) = (c.shifted(1), c.shifted(2));
            if alg.are_disjoint(c, &c1) && alg.are_disjoint(c, &c2) && alg.are_disjoint(&c1, &c2) {
                schemas.push((
                    RelatorTag::R2,
                    vec![c.clone()],
                    vec![sym(c, 1), sym(&c1, 1), sym(c, 1), sym(&c1, 1)],
                ));
                // x_{i+1} (x_i * x_{i+2})⁻¹ = x_{i+1} x_i⁻¹ x_{i+2} x_i x_{i+2}⁻¹
                schemas.push((
                    RelatorTag::R3,
                    vec![c.clone()],
                    vec![sym(&c1, 1), sym(c, -1), sym(&c2, 1), sym(c, 1), sym(&c2, -1)],
                ));
            }
        }
        for parts in refinement_partitions(alg, c, bounds.depth) {
            let mut word = vec![sym(c, 1)];
            word.extend(parts.iter().rev().map(|p| sym(p, -1)));
            let mut cyls = vec![c.clone()];
            cyls.extend(parts);
            schemas.push((RelatorTag::R4, cyls, word));
        }
    }
    for (a, ca) in cylinders.iter().enumerate() {
        for cb in &cylinders[a + 1..] {
            if alg.are_3disjoint(ca, cb) {
                schemas.push((
                    RelatorTag::R5,
                    vec![ca.clone(), cb.clone()],
                    vec![sym(ca, -1), sym(cb, -1), sym(ca, 1), sym(cb, 1)],
                ));
            }
        }
    }
    let mut expander = TietzeExpander::new(alg, &table);
    let mut relators = Vec::with_capacity(schemas.len());
    for (tag, cylinders, schema) in schemas {
        let mut expanded = FreeWord::empty();
        for s in &schema {
            let w = expander.expand(&s.cylinder)?;
            expanded = expanded.concat(&if s.exponent < 0 { w.inverse() } else { w });
        }
        relators.push(Relator {
            tag,
            cylinders,
            schema,
            expanded: free_reduce(&expanded),
        });
    }
    relators.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(Presentation {
        generators: table,
        relators,
        bounds: *bounds,
    })
}

/// Base generator elements and their inverses, indexed by generator.
pub fn generator_elements(group: &FullGroup, table: &GeneratorTable) -> Result<Vec<[GroupElement; 2]>> {
    (0..table.len())
        .map(|g| {
            let s = group.sigma_cylinder(&table.cylinder(g))?;
            let inv = group.inverse(&s);
            Ok([s, inv])
        })
        .collect()
}

pub fn evaluate_free(group: &FullGroup, elements: &[[GroupElement; 2]], w: &FreeWord) -> GroupElement {
    w.0.iter().fold(group.identity(), |acc, l| {
        let e = &elements[l.generator][usize::from(l.exponent < 0)];
        group.compose(&acc, e)
    })
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub checked: usize,
    /// Indices of relators that did not evaluate to the identity.
    pub failures: Vec<usize>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates every relator in base generators; the result does not depend
/// on thread scheduling.
pub fn verify_relators(group: &FullGroup, p: &Presentation) -> Result<VerificationReport> {
    let elements = generator_elements(group, &p.generators)?;
    let failures: Vec<usize> = p
        .relators
        .par_iter()
        .enumerate()
        .filter(|(_, r)| !group.is_identity(&evaluate_free(group, &elements, &r.expanded)))
        .map(|(k, _)| k)
        .collect();
    Ok(VerificationReport {
        checked: p.relators.len(),
        failures,
    })
}

pub fn export_presentation(p: &Presentation, system: &str, n0: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# system={system} n0={n0} W={} depth={}",
        p.bounds.max_word_len, p.bounds.depth
    );
    let hi = if p.bounds.max_offset == i64::MAX {
        "|w|-1".to_string()
    } else {
        p.bounds.max_offset.to_string()
    };
    let _ = writeln!(out, "# offsets={}..{hi}", p.bounds.min_offset.max(1));
    for (k, w) in p.generators.words().iter().enumerate() {
        let _ = writeln!(out, "gen {k}: x[({}),1]", index_list(w));
    }
    for r in &p.relators {
        let tokens = render_generator_word(&p.generators.to_symbols(&r.expanded));
        let _ = writeln!(out, "rel {}: {tokens}", r.tag);
    }
    out
}

type Perm = Vec<u8>;

/// `(p ∘ q)(x) = p(q(x))`.
fn perm_compose(p: &Perm, q: &Perm) -> Perm {
    q.iter().map(|&x| p[x as usize]).collect()
}

fn perm_inverse(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        out[y as usize] = x as u8;
    }
    out
}

fn perm_product(ps: &[&Perm]) -> Perm {
    let id: Perm = (0..ps[0].len() as u8).collect();
    ps.iter().fold(id, |acc, p| perm_compose(&acc, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AltReport {
    pub relations_hold: bool,
    pub order: usize,
    pub expected_order: usize,
}

impl AltReport {
    pub fn passed(&self) -> bool {
        self.relations_hold && self.order == self.expected_order
    }
}

/// Checks that the 3-cycles `y_i = (i, i+1, i+2)` on `n` points satisfy the
/// order-three, braid-square, far-commutation and star-shift relations and
/// generate a group of order `n!/2`.
pub fn alt_presentation_check(n: usize) -> AltReport {
    assert!((5..=12).contains(&n), "n must be in 5..=12");
    let id: Perm = (0..n as u8).collect();
    let y: Vec<Perm> = (0..n - 2)
        .map(|i| {
            let mut p = id.clone();
            p[i] = (i + 1) as u8;
            p[i + 1] = (i + 2) as u8;
            p[i + 2] = i as u8;
            p
        })
        .collect();
    let inv: Vec<Perm> = y.iter().map(perm_inverse).collect();
    let mut ok = true;
    for i in 0..n - 2 {
        ok &= perm_product(&[&y[i], &y[i], &y[i]]) == id;
        if i + 1 < n - 2 {
            ok &= perm_product(&[&y[i], &y[i + 1], &y[i], &y[i + 1]]) == id;
        }
        if i + 2 < n - 2 {
            // r * s = s r⁻¹ s⁻¹ r
            let star = perm_product(&[&y[i + 2], &inv[i], &inv[i + 2], &y[i]]);
            ok &= star == y[i + 1];
        }
        for j in i + 3..n - 2 {
            ok &= perm_product(&[&inv[i], &inv[j], &y[i], &y[j]]) == id;
        }
    }
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    while let Some(p) = queue.pop_front() {
        for g in &y {
            let q = perm_compose(g, &p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let expected_order = (3..=n).product();
    AltReport {
        relations_hold: ok,
        order: seen.len(),
        expected_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recoder::recode;
    use crate::subshift::{Substitution, SubstitutionSubshift};
    use std::sync::Arc;

    fn group(sub: Substitution) -> FullGroup {
        let base = Arc::new(SubstitutionSubshift::new(sub).unwrap());
        FullGroup::new(Arc::new(recode(base).unwrap())).unwrap()
    }

    fn l(generator: usize, exponent: i8) -> Letter {
        Letter {
            generator,
            exponent,
        }
    }

    #[test]
    fn reduction() {
        let w = FreeWord(vec![l(0, 1), l(1, 1), l(1, -1), l(0, -1)]);
        assert!(free_reduce(&w).is_empty());
        let r = FreeWord(vec![l(0, 1), l(1, -1), l(0, 1)]);
        assert_eq!(free_reduce(&r), r);
        assert_eq!(free_reduce(&r.concat(&r.inverse())), FreeWord::empty());
        let s = FreeWord::star(&FreeWord::letter(0), &FreeWord::letter(1));
        assert_eq!(s.0, vec![l(1, 1), l(0, -1), l(1, -1), l(0, 1)]);
    }

    #[test]
    fn expansion_shapes() {
        let g = group(Substitution::fibonacci());
        let table = GeneratorTable::new(g.oracle().as_ref());
        let alg = g.algebra();
        let w3 = table.words()[0].clone();
        assert_eq!(tietze_expand(alg, &table, &w3, 1).unwrap().len(), 1);
        // a 4-word whose leading two-block has a single left extension
        let w4 = g
            .oracle()
            .factors(4)
            .iter()
            .find(|w| alg.left_refinement(&Cylinder::new(w[..2].to_vec(), 0)).len() == 1)
            .unwrap()
            .clone();
        assert_eq!(tietze_expand(alg, &table, &w4, 1).unwrap().len(), 4);
        assert!(tietze_expand(alg, &table, &[0, 0, 0], 1).unwrap().is_empty());
        assert!(matches!(
            tietze_expand(alg, &table, &[], 1),
            Err(Error::UnsupportedOffset(_))
        ));
    }

    #[test]
    fn expansion_evaluates_to_sigma() {
        let g = group(Substitution::fibonacci());
        let table = GeneratorTable::new(g.oracle().as_ref());
        let elements = generator_elements(&g, &table).unwrap();
        let mut ex = TietzeExpander::new(g.algebra(), &table);
        for m in 1..=4 {
            for w in g.oracle().factors(m).iter() {
                for k in -1..=m as i64 + 1 {
                    let c = Cylinder::new(w.clone(), k);
                    let lhs = evaluate_free(&g, &elements, &ex.expand(&c).unwrap());
                    assert!(g.equals(&lhs, &g.sigma_cylinder(&c).unwrap()), "{c}");
                }
            }
        }
    }

    #[test]
    fn golden_counts_small_bounds() {
        let g = group(Substitution::fibonacci());
        let p = enumerate_relators(&g, &Bounds::new(3, 0)).unwrap();
        let r1 = g.oracle().factors(2).len() + 2 * g.oracle().factors(3).len();
        assert_eq!(p.count(RelatorTag::R1), r1);
        assert_eq!(p.count(RelatorTag::R2), 0);
        assert_eq!(p.count(RelatorTag::R3), 0);
        assert_eq!(p.count(RelatorTag::R4), 0);
        assert_eq!(p.relators.len(), r1 + p.count(RelatorTag::R5));
        assert_eq!(p.count(RelatorTag::R5), 174);
        assert_eq!(p.relators.len(), 203);
    }

    #[test]
    fn relators_hold_and_mutation_fails() {
        let g = group(Substitution::fibonacci());
        let p = enumerate_relators(&g, &Bounds::new(4, 1)).unwrap();
        for t in [RelatorTag::R1, RelatorTag::R2, RelatorTag::R3, RelatorTag::R4, RelatorTag::R5] {
            assert!(p.count(t) > 0, "{t}");
        }
        for r in p.relators.iter().filter(|r| r.tag == RelatorTag::R4) {
            assert!(g
                .algebra()
                .verify_cylinder_partition(&r.cylinders[0], &r.cylinders[1..]));
        }
        let report = verify_relators(&g, &p).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        let mut bad = p.clone();
        let k = bad.relators.iter().position(|r| r.tag == RelatorTag::R3).unwrap();
        let letters = &mut bad.relators[k].expanded.0;
        letters[0] = letters[0].inverse();
        let report = verify_relators(&g, &bad).unwrap();
        assert_eq!(report.failures, vec![k]);
    }

    #[test]
    fn thue_morse_relators_hold() {
        let g = group(Substitution::thue_morse());
        let p = enumerate_relators(&g, &Bounds::new(4, 1)).unwrap();
        assert!(verify_relators(&g, &p).unwrap().passed());
    }

    #[test]
    fn export_is_deterministic() {
        let g = group(Substitution::fibonacci());
        let bounds = Bounds {
            max_word_len: 3,
            min_offset: 1,
            max_offset: 2,
            depth: 1,
        };
        let a = export_presentation(&enumerate_relators(&g, &bounds).unwrap(), "fib.json", 7);
        let b = export_presentation(&enumerate_relators(&g, &bounds).unwrap(), "fib.json", 7);
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(lines.next(), Some("# system=fib.json n0=7 W=3 depth=1"));
        assert_eq!(lines.next(), Some("# offsets=1..2"));
        assert!(a.contains("gen 0: x[("));
        assert!(a.lines().any(|l| l.starts_with("rel R4: ")));
    }

    #[test]
    fn alternating_groups() {
        for (n, order) in [(5, 60), (6, 360)] {
            let r = alt_presentation_check(n);
            assert!(r.relations_hold);
            assert_eq!(r.order, order);
            assert!(r.passed());
        }
    }
}
