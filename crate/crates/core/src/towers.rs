//! Return words, Kakutani-Rokhlin partitions and tower permutations.
//!
//! A level-`n` partition around a point `ω` takes `u = ω[-n..-1]` and
//! `v = ω[0..n]`. Each return word `r` to `u.v` gives a tower with base
//! `[u.rv]` and atoms `T^i[u.rv] = (urv, |u| + i)` for `0 ≤ i < |r|`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::clopen::{ClopenAlgebra, ClopenSet, Cylinder};
use crate::error::{Error, Result};
use crate::group::{FullGroup, GeneratorSymbol, GroupElement};
use crate::recoder::RecodedSubshift;
use crate::subshift::{index_list, LanguageOracle, Substitution, Symbol, Word};

pub const DEFAULT_RECURRENCE_CEILING: usize = 4096;
pub const DEFAULT_ORBIT_DEPTH: usize = 64;
pub const DEFAULT_LEVEL_CEILING: usize = 64;

/// A two-sided sequence known through its central windows.
pub trait TwoSidedPoint: Send + Sync + fmt::Debug {
    /// `ω[-n..=n]`, of length `2n + 1`.
    fn window(&self, n: usize) -> Result<Word>;
}

/// The two-sided fixed point `⋯σ^{kp}(b).σ^{kp}(a)⋯` of a substitution.
#[derive(Debug, Clone)]
pub struct SeedPoint {
    substitution: Substitution,
    left: Symbol,
    right: Symbol,
    power: usize,
}

impl SeedPoint {
    pub fn new(substitution: Substitution, left: Symbol, right: Symbol, power: usize) -> Result<Self> {
        let names = substitution.alphabet();
        let label = format!("{}.{}:{}", names.name(left), names.name(right), power);
        if power == 0 {
            return Err(Error::InvalidSeed(format!("{label}: power must be positive")));
        }
        if !substitution.admissible_two_blocks()?.contains(&vec![left, right]) {
            return Err(Error::InvalidSeed(format!("{label}: two-block not admissible")));
        }
        let a = substitution.iterate(&[right], power);
        let b = substitution.iterate(&[left], power);
        if a.first() != Some(&right) || b.last() != Some(&left) {
            return Err(Error::InvalidSeed(format!("{label}: not a fixed point")));
        }
        Ok(SeedPoint {
            substitution,
            left,
            right,
            power,
        })
    }

    /// Parses `b.a:p` with `b`, `a` symbol names.
    pub fn parse(substitution: Substitution, text: &str) -> Result<Self> {
        let bad = || Error::InvalidSeed(format!("expected b.a:p, got {text:?}"));
        let (pair, power) = text.split_once(':').ok_or_else(bad)?;
        let (b, a) = pair.split_once('.').ok_or_else(bad)?;
        let power = power.trim().parse::<usize>().map_err(|_| bad())?;
        let names = substitution.alphabet();
        let lookup = |s: &str| {
            names
                .index_of(s.trim())
                .ok_or_else(|| Error::InvalidSeed(format!("unknown symbol {s:?}")))
        };
        let (left, right) = (lookup(b)?, lookup(a)?);
        Self::new(substitution, left, right, power)
    }

    pub fn substitution(&self) -> &Substitution {
        &self.substitution
    }

    pub fn left(&self) -> Symbol {
        self.left
    }

    pub fn right(&self) -> Symbol {
        self.right
    }

    pub fn power(&self) -> usize {
        self.power
    }
}

impl TwoSidedPoint for SeedPoint {
    fn window(&self, n: usize) -> Result<Word> {
        let mut left = vec![self.left];
        let mut right = vec![self.right];
        while left.len() < n || right.len() < n + 1 {
            let l2 = self.substitution.iterate(&left, self.power);
            let r2 = self.substitution.iterate(&right, self.power);
            if l2.len() == left.len() && r2.len() == right.len() {
                return Err(Error::InvalidSeed("images do not grow".into()));
            }
            left = l2;
            right = r2;
        }
        let mut out = left[left.len() - n..].to_vec();
        out.extend_from_slice(&right[..n + 1]);
        Ok(out)
    }
}

/// The image of a seed point in a recoded system.
#[derive(Debug, Clone)]
pub struct RecodedPoint {
    seed: SeedPoint,
    recoded: Arc<RecodedSubshift>,
}

impl RecodedPoint {
    pub fn new(seed: SeedPoint, recoded: Arc<RecodedSubshift>) -> Self {
        RecodedPoint { seed, recoded }
    }

    pub fn seed(&self) -> &SeedPoint {
        &self.seed
    }
}

impl TwoSidedPoint for RecodedPoint {
    fn window(&self, n: usize) -> Result<Word> {
        let n0 = self.recoded.n0();
        let x = self.seed.window(n + n0 - 1)?;
        self.recoded.encode_word(&x[n0 - 1..])
    }
}

/// Least `ℓ` such that every word of `L_ℓ` contains `w`.
pub fn recurrence_bound(oracle: &dyn LanguageOracle, w: &[Symbol], ceiling: usize) -> Result<usize> {
    if !oracle.contains(w) {
        return Err(Error::NotInLanguage(index_list(w)));
    }
    let covers = |len: usize| {
        oracle
            .factors(len)
            .iter()
            .all(|x| w.is_empty() || x.windows(w.len()).any(|y| y == w))
    };
    let start = w.len().max(1);
    if covers(start) {
        return Ok(start);
    }
    let exceeded = Error::SearchCeilingExceeded {
        what: "recurrence bound",
        ceiling,
    };
    let (mut lo, mut hi) = (start, start * 2);
    loop {
        if lo >= ceiling {
            return Err(exceeded);
        }
        hi = hi.min(ceiling);
        if covers(hi) {
            break;
        }
        lo = hi;
        hi *= 2;
    }
    // covers(lo) is false, covers(hi) is true
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if covers(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// All `w` with `uwv ∈ L`, `uv` a prefix and a suffix of `uwv`, and no
/// other occurrence of `uv` in between. Sorted lexicographically.
pub fn return_words(
    oracle: &dyn LanguageOracle,
    u: &[Symbol],
    v: &[Symbol],
    ceiling: usize,
) -> Result<Vec<Word>> {
    let mut uv = u.to_vec();
    uv.extend_from_slice(v);
    if !oracle.contains(&uv) {
        return Err(Error::NotInLanguage(index_list(&uv)));
    }
    let bound = u.len() + recurrence_bound(oracle, &uv, ceiling)? + v.len();
    let mut found = BTreeSet::new();
    let mut stack = vec![uv.clone()];
    while let Some(x) = stack.pop() {
        if x.len() >= bound {
            return Err(Error::SearchCeilingExceeded {
                what: "return word length",
                ceiling: bound,
            });
        }
        for s in oracle.alphabet().symbols() {
            let mut y = x.clone();
            y.push(s);
            if !oracle.contains(&y) {
                continue;
            }
            if y.ends_with(&uv) {
                found.insert(y[u.len()..y.len() - v.len()].to_vec());
            } else {
                stack.push(y);
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRPartition {
    level: usize,
    u: Word,
    v: Word,
    returns: Vec<Word>,
}

impl KRPartition {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn u(&self) -> &[Symbol] {
        &self.u
    }

    pub fn v(&self) -> &[Symbol] {
        &self.v
    }

    pub fn return_words(&self) -> &[Word] {
        &self.returns
    }

    pub fn tower_count(&self) -> usize {
        self.returns.len()
    }

    pub fn height(&self, tower: usize) -> usize {
        self.returns[tower].len()
    }

    pub fn min_height(&self) -> usize {
        self.returns.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// `[u.v]`.
    pub fn base(&self) -> Cylinder {
        Cylinder::bracket(&self.u, &self.v)
    }

    /// `[u.rv]`.
    pub fn tower_base(&self, tower: usize) -> Cylinder {
        let mut rv = self.returns[tower].clone();
        rv.extend_from_slice(&self.v);
        Cylinder::bracket(&self.u, &rv)
    }

    /// `T^i[u.rv]`.
    pub fn atom(&self, tower: usize, i: usize) -> Cylinder {
        self.tower_base(tower).shifted(i as i64)
    }

    /// `(tower, height index, cylinder)` for every atom.
    pub fn atoms(&self) -> Vec<(usize, usize, Cylinder)> {
        (0..self.tower_count())
            .flat_map(|t| (0..self.height(t)).map(move |i| (t, i)))
            .map(|(t, i)| (t, i, self.atom(t, i)))
            .collect()
    }
}

pub fn kr_partition(
    oracle: &dyn LanguageOracle,
    point: &dyn TwoSidedPoint,
    n: usize,
    ceiling: usize,
) -> Result<KRPartition> {
    if n == 0 {
        return Err(Error::TooShort { len: 0, min: 1 });
    }
    let w = point.window(n)?;
    let (u, v) = (w[..n].to_vec(), w[n..].to_vec());
    let returns = return_words(oracle, &u, &v, ceiling)?;
    Ok(KRPartition {
        level: n,
        u,
        v,
        returns,
    })
}

/// First level at or above 1 whose towers all have height at least
/// `min_height`.
pub fn first_level_with_min_height(
    oracle: &dyn LanguageOracle,
    point: &dyn TwoSidedPoint,
    min_height: usize,
    ceiling: usize,
) -> Result<KRPartition> {
    for n in 1..=ceiling {
        let p = kr_partition(oracle, point, n, DEFAULT_RECURRENCE_CEILING)?;
        if p.min_height() >= min_height {
            return Ok(p);
        }
    }
    Err(Error::SearchCeilingExceeded {
        what: "tower height level",
        ceiling,
    })
}

/// Atoms partition Ω, tower bases partition `[u.v]`, and the top of every
/// tower returns into `[u.v]`.
pub fn verify_kr(alg: &ClopenAlgebra, p: &KRPartition) -> bool {
    let atoms: Vec<Cylinder> = p.atoms().into_iter().map(|(_, _, c)| c).collect();
    let bases: Vec<Cylinder> = (0..p.tower_count()).map(|t| p.tower_base(t)).collect();
    let base = p.base();
    !p.returns.is_empty()
        && alg.verify_cylinder_partition(&Cylinder::new(Vec::new(), 0), &atoms)
        && alg.verify_cylinder_partition(&base, &bases)
        && (0..p.tower_count()).all(|t| alg.is_subset(&p.atom(t, p.height(t) - 1).shifted(1), &base))
}

/// Every atom of `fine` lies in some atom of `coarse`.
pub fn refines(alg: &ClopenAlgebra, fine: &KRPartition, coarse: &KRPartition) -> bool {
    let coarse_atoms = coarse.atoms();
    fine.atoms()
        .iter()
        .all(|(_, _, a)| coarse_atoms.iter().any(|(_, _, b)| alg.is_subset(a, b)))
}

pub fn base_nested(alg: &ClopenAlgebra, fine: &KRPartition, coarse: &KRPartition) -> bool {
    alg.is_subset(&fine.base(), &coarse.base())
}

/// Whether every word of `fine` parses in exactly one way as a
/// concatenation of words of `coarse`.
pub fn unique_decomposition(fine: &[Word], coarse: &[Word]) -> bool {
    fine.iter().all(|r| {
        let mut parses = vec![0u64; r.len() + 1];
        parses[0] = 1;
        for end in 1..=r.len() {
            parses[end] = coarse
                .iter()
                .filter(|c| !c.is_empty() && c.len() <= end && r[end - c.len()..end] == c[..])
                .map(|c| parses[end - c.len()])
                .fold(0u64, u64::saturating_add);
        }
        parses[r.len()] == 1
    })
}

fn require_height(p: &KRPartition) -> Result<()> {
    if p.min_height() < 3 {
        return Err(Error::TowerTooShort {
            level: p.level,
            height: p.min_height(),
        });
    }
    Ok(())
}

/// `σ` of atoms `i`, `i+1`, `i+2` for every tower and `0 ≤ i ≤ |r| - 3`,
/// tower by tower.
pub fn tower_3cycles(group: &FullGroup, p: &KRPartition) -> Result<Vec<Vec<GroupElement>>> {
    require_height(p)?;
    (0..p.tower_count())
        .map(|t| {
            (0..=p.height(t) - 3)
                .map(|i| group.sigma_cylinder(&p.atom(t, i)))
                .collect()
        })
        .collect()
}

/// For each coarse cylinder `(u.rv, i)`, `i ≤ |r| - 3`, the fine cylinders
/// `(u'.r'v', j)`, `j ≤ |r'| - 3`, that it contains.
pub fn level_embedding_terms(
    alg: &ClopenAlgebra,
    coarse: &KRPartition,
    fine: &KRPartition,
) -> Result<Vec<(Cylinder, Vec<Cylinder>)>> {
    require_height(coarse)?;
    require_height(fine)?;
    let fine_atoms: Vec<Cylinder> = fine
        .atoms()
        .into_iter()
        .filter(|(t, j, _)| j + 3 <= fine.height(*t))
        .map(|(_, _, c)| c)
        .collect();
    Ok(coarse
        .atoms()
        .into_iter()
        .filter(|(t, i, _)| i + 3 <= coarse.height(*t))
        .map(|(_, _, c)| {
            let inside = fine_atoms
                .iter()
                .filter(|a| alg.is_subset(a, &c))
                .cloned()
                .collect();
            (c, inside)
        })
        .collect())
}

pub fn embedding_holds(group: &FullGroup, terms: &[(Cylinder, Vec<Cylinder>)]) -> Result<bool> {
    for (coarse, parts) in terms {
        let lhs = group.sigma_cylinder(coarse)?;
        let mut rhs = group.identity();
        for c in parts {
            rhs = group.compose(&rhs, &group.sigma_cylinder(c)?);
        }
        if !group.equals(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Each level-`n` tower 3-cycle is the product of the level-`n+1` tower
/// 3-cycles it contains.
pub fn level_embedding_check(
    group: &FullGroup,
    point: &dyn TwoSidedPoint,
    n: usize,
) -> Result<bool> {
    let oracle = group.oracle().as_ref();
    let coarse = kr_partition(oracle, point, n, DEFAULT_RECURRENCE_CEILING)?;
    let fine = kr_partition(oracle, point, n + 1, DEFAULT_RECURRENCE_CEILING)?;
    let terms = level_embedding_terms(group.algebra(), &coarse, &fine)?;
    embedding_holds(group, &terms)
}

/// Finite-depth heuristic: no shift `|k| ≤ depth` aligns the windows of
/// radius `2 * depth` of the two points. Cannot certify distinct orbits.
///
/// The window is wider than the shift range because points in distinct
/// orbits may differ in only a few coordinates.
pub fn orbits_separated(a: &dyn TwoSidedPoint, b: &dyn TwoSidedPoint, depth: usize) -> Result<bool> {
    let wa = a.window(3 * depth)?;
    let wb = b.window(3 * depth)?;
    let centre = &wa[depth..5 * depth + 1];
    Ok((0..=2 * depth).all(|s| wb[s..s + 4 * depth + 1] != *centre))
}

/// Whether `g` maps every atom onto an atom of the same tower.
pub fn is_tower_permutation(group: &FullGroup, g: &GroupElement, p: &KRPartition) -> bool {
    let atoms = p.atoms();
    let radius = atoms
        .iter()
        .map(|(_, _, c)| c.min_radius())
        .max()
        .unwrap_or(0)
        .max(g.radius());
    let mut shift: HashMap<usize, i64> = HashMap::new();
    group.oracle().factors(2 * radius).iter().all(|z| {
        let f = g.shift_at(z, radius);
        let Some(k) = atoms.iter().position(|(_, _, c)| c.matches(z, radius)) else {
            return false;
        };
        let (t, i, _) = atoms[k];
        let target = i as i64 + f;
        (0..p.height(t) as i64).contains(&target) && *shift.entry(k).or_insert(f) == f
    })
}

/// `g = P·Q` with `P` permuting tower interiors around `ω` and `Q`
/// supported near the base `[u.v]`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub partition: KRPartition,
    pub factors: usize,
    pub p_word: Vec<GeneratorSymbol>,
    pub q_word: Vec<GeneratorSymbol>,
}

impl Factorization {
    /// `B = ⋃ T^i[u.v]` over `-3k ≤ i ≤ 3k + 2`.
    pub fn base_cylinders(&self) -> Vec<Cylinder> {
        base_cylinders(&self.partition, self.factors)
    }
}

fn base_cylinders(p: &KRPartition, k: usize) -> Vec<Cylinder> {
    let k = k as i64;
    (-3 * k..=3 * k + 2).map(|i| p.base().shifted(i)).collect()
}

fn inside_or_disjoint(alg: &ClopenAlgebra, a: &Cylinder, b: &Cylinder) -> bool {
    alg.is_subset(a, b) || alg.are_disjoint(a, b)
}

/// Chooses the least level at which the tower partition around `omega`
/// resolves every generator of `word`, with `omega_prime` outside `B`, and
/// splits each generator into tower-interior and near-base parts.
pub fn factor_product(
    group: &FullGroup,
    word: &[GeneratorSymbol],
    omega: &dyn TwoSidedPoint,
    omega_prime: &dyn TwoSidedPoint,
    ceiling: usize,
) -> Result<Factorization> {
    if !orbits_separated(omega, omega_prime, DEFAULT_ORBIT_DEPTH)? {
        return Err(Error::SeedOrbitNotSeparated {
            depth: DEFAULT_ORBIT_DEPTH,
        });
    }
    let alg = group.algebra();
    let k = word.len().max(1);
    let ki = k as i64;
    for n in 1..=ceiling {
        let p = kr_partition(group.oracle().as_ref(), omega, n, DEFAULT_RECURRENCE_CEILING)?;
        if p.min_height() < 6 * k + 3 {
            continue;
        }
        let atoms = p.atoms();
        let resolves = word.iter().all(|s| {
            atoms
                .iter()
                .all(|(_, _, a)| inside_or_disjoint(alg, a, &s.cylinder))
                && (-3 * ki..=3 * ki)
                    .all(|i| inside_or_disjoint(alg, &p.base().shifted(i), &s.cylinder))
        });
        if !resolves {
            continue;
        }
        let radius = n + 3 * k + 3;
        let z = omega_prime.window(radius)?;
        let centred = &z[..2 * radius];
        if base_cylinders(&p, k).iter().any(|c| c.matches(centred, radius)) {
            continue;
        }
        let mut p_word = Vec::new();
        let mut q_word = Vec::new();
        for (idx, s) in word.iter().enumerate() {
            let m = idx + 1;
            for (t, i, a) in &atoms {
                if 3 * m <= *i && i + 3 * m < p.height(*t) && alg.is_subset(a, &s.cylinder) {
                    p_word.push(GeneratorSymbol::new(a.clone(), s.exponent));
                }
            }
            let mi = m as i64;
            for i in -3 * mi..3 * mi {
                let c = p.base().shifted(i);
                if alg.is_subset(&c, &s.cylinder) {
                    q_word.push(GeneratorSymbol::new(c, s.exponent));
                }
            }
        }
        return Ok(Factorization {
            partition: p,
            factors: k,
            p_word,
            q_word,
        });
    }
    Err(Error::SearchCeilingExceeded {
        what: "factorization level",
        ceiling,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorizationCheck {
    pub product: bool,
    pub p_tower_interior: bool,
    pub q_inside_base: bool,
}

impl FactorizationCheck {
    pub fn passed(&self) -> bool {
        self.product && self.p_tower_interior && self.q_inside_base
    }
}

pub fn verify_factorization(
    group: &FullGroup,
    word: &[GeneratorSymbol],
    f: &Factorization,
) -> Result<FactorizationCheck> {
    let alg = group.algebra();
    let p = group.evaluate_word(&f.p_word)?;
    let q = group.evaluate_word(&f.q_word)?;
    let target = group.evaluate_word(word)?;
    let bases = f.base_cylinders();
    let radius = bases.iter().map(Cylinder::min_radius).max().unwrap_or(0);
    let b: ClopenSet = alg.from_predicate(radius, |z| bases.iter().any(|c| c.matches(z, radius)));
    Ok(FactorizationCheck {
        product: group.equals(&group.compose(&p, &q), &target),
        p_tower_interior: is_tower_permutation(group, &p, &f.partition),
        q_inside_base: alg.subset(&group.support(&q), &b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recoder::recode;
    use crate::subshift::SubstitutionSubshift;

    fn fib() -> Arc<dyn LanguageOracle> {
        Arc::new(SubstitutionSubshift::new(Substitution::fibonacci()).unwrap())
    }

    fn seed(text: &str) -> SeedPoint {
        SeedPoint::parse(Substitution::fibonacci(), text).unwrap()
    }

    fn contains_word(x: &[Symbol], w: &[Symbol]) -> bool {
        x.windows(w.len()).any(|y| y == w)
    }

    #[test]
    fn seed_windows() {
        let oracle = fib();
        let p = seed("a.a:2");
        assert_eq!(p.window(1).unwrap(), vec![0, 0, 1]);
        for n in 0..=8 {
            let w = p.window(n).unwrap();
            assert_eq!(w.len(), 2 * n + 1);
            assert!(oracle.contains(&w));
            assert_eq!(p.window(n + 1).unwrap()[1..2 * n + 2], w[..]);
        }
        assert_eq!(seed("b.a:2").window(1).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn invalid_seeds() {
        let sub = Substitution::fibonacci;
        assert!(matches!(SeedPoint::parse(sub(), "b.b:2"), Err(Error::InvalidSeed(_))));
        assert!(matches!(SeedPoint::parse(sub(), "b.a:1"), Err(Error::InvalidSeed(_))));
        assert!(matches!(SeedPoint::parse(sub(), "a.a"), Err(Error::InvalidSeed(_))));
        assert!(matches!(SeedPoint::parse(sub(), "a.c:2"), Err(Error::InvalidSeed(_))));
        assert!(matches!(SeedPoint::parse(sub(), "a.a:0"), Err(Error::InvalidSeed(_))));
    }

    #[test]
    fn recurrence_bounds() {
        let oracle = fib();
        assert_eq!(recurrence_bound(oracle.as_ref(), &[0, 0], 64).unwrap(), 6);
        assert_eq!(recurrence_bound(oracle.as_ref(), &[0], 64).unwrap(), 2);
        // brute-force cross-check
        for m in 1..=5 {
            for w in oracle.factors(m).iter() {
                let l = recurrence_bound(oracle.as_ref(), w, 256).unwrap();
                assert!(oracle.factors(l).iter().all(|x| contains_word(x, w)));
                assert!(!oracle.factors(l - 1).iter().all(|x| contains_word(x, w)) || l == m);
                let mut ext = w.clone();
                ext.push(0);
                if oracle.contains(&ext) {
                    assert!(l <= recurrence_bound(oracle.as_ref(), &ext, 256).unwrap());
                }
            }
        }
        assert!(matches!(
            recurrence_bound(oracle.as_ref(), &[1, 1], 64),
            Err(Error::NotInLanguage(_))
        ));
        assert!(matches!(
            recurrence_bound(oracle.as_ref(), &[0, 1, 0, 0, 1, 0, 1, 0], 10),
            Err(Error::SearchCeilingExceeded { .. })
        ));
    }

    #[test]
    fn fibonacci_return_words() {
        let oracle = fib();
        let r = return_words(oracle.as_ref(), &[0], &[0], 64).unwrap();
        assert_eq!(r, vec![vec![0, 1, 0], vec![0, 1, 0, 1, 0]]);
        // gaps between consecutive occurrences of aa in a long prefix
        let text = Substitution::fibonacci().iterate(&[0], 16);
        let pos: Vec<usize> = (0..text.len() - 1)
            .filter(|&i| text[i..i + 2] == [0, 0])
            .collect();
        let gaps: BTreeSet<usize> = pos.windows(2).map(|p| p[1] - p[0]).collect();
        let lens: BTreeSet<usize> = r.iter().map(Vec::len).collect();
        assert_eq!(gaps, lens);
        // occurrences of aba may overlap
        let short = return_words(oracle.as_ref(), &[0], &[1, 0], 64).unwrap();
        assert!(short.contains(&vec![1, 0]));
        assert!(matches!(
            return_words(oracle.as_ref(), &[1], &[1], 64),
            Err(Error::NotInLanguage(_))
        ));
    }

    #[test]
    fn kr_partitions_on_fibonacci() {
        let oracle = fib();
        let alg = ClopenAlgebra::new(oracle.clone());
        let p = seed("a.a:2");
        let parts: Vec<KRPartition> = (1..=5)
            .map(|n| kr_partition(oracle.as_ref(), &p, n, 256).unwrap())
            .collect();
        for w in parts.windows(2) {
            assert!(verify_kr(&alg, &w[0]));
            assert!(refines(&alg, &w[1], &w[0]));
            assert!(base_nested(&alg, &w[1], &w[0]));
            assert!(unique_decomposition(w[1].return_words(), w[0].return_words()));
            assert!(w[0].min_height() <= w[1].min_height());
        }
        // each tower covers |r| atoms; total count matches at a common radius
        let kr = &parts[1];
        let radius = kr.atoms().iter().map(|(_, _, c)| c.min_radius()).max().unwrap();
        let total: usize = kr
            .atoms()
            .iter()
            .map(|(_, _, c)| alg.to_clopen(c, radius).unwrap().len())
            .sum();
        assert_eq!(total, oracle.factors(2 * radius).len());
    }

    #[test]
    fn unique_decomposition_detects_ambiguity() {
        assert!(unique_decomposition(&[vec![0, 1, 0]], &[vec![0], vec![1, 0]]));
        assert!(!unique_decomposition(&[vec![0, 1, 0]], &[vec![0, 1], vec![0], vec![1, 0]]));
        assert!(!unique_decomposition(&[vec![0, 1]], &[vec![0]]));
    }

    fn recoded() -> (FullGroup, Arc<RecodedSubshift>) {
        let rec = Arc::new(recode(fib()).unwrap());
        (FullGroup::new(rec.clone()).unwrap(), rec)
    }

    #[test]
    fn tower_cycles() {
        let oracle = fib();
        let group = FullGroup::new(oracle.clone()).unwrap();
        let kr = kr_partition(oracle.as_ref(), &seed("a.a:2"), 1, 256).unwrap();
        let cycles = tower_3cycles(&group, &kr).unwrap();
        for (t, tower) in cycles.iter().enumerate() {
            assert_eq!(tower.len(), kr.height(t) - 2);
            for g in tower {
                assert!(group.is_identity(&group.pow(g, 3)));
                assert!(is_tower_permutation(&group, g, &kr));
            }
        }
        for x in &cycles[0] {
            for y in &cycles[1] {
                assert!(group.equals(&group.compose(x, y), &group.compose(y, x)));
            }
        }
        // closure inside one tower has order h!/2
        for (t, tower) in cycles.iter().enumerate() {
            let h = kr.height(t);
            let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
            let mut frontier = vec![group.identity()];
            seen.insert(group.identity());
            while let Some(x) = frontier.pop() {
                for g in tower {
                    let y = group.compose(g, &x);
                    if seen.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            let order: usize = (3..=h).product();
            assert_eq!(seen.len(), order, "height {h}");
        }
        let short = kr_partition(oracle.as_ref(), &seed("a.a:2"), 1, 256).unwrap();
        let stub = KRPartition {
            returns: vec![vec![0, 1]],
            ..short
        };
        assert!(matches!(
            tower_3cycles(&group, &stub),
            Err(Error::TowerTooShort { .. })
        ));
    }

    #[test]
    fn level_embedding_and_mutation() {
        let (group, rec) = recoded();
        let point = RecodedPoint::new(seed("a.a:2"), rec.clone());
        assert!(level_embedding_check(&group, &point, 1).unwrap());
        let coarse = kr_partition(rec.as_ref(), &point, 1, 256).unwrap();
        let fine = kr_partition(rec.as_ref(), &point, 2, 256).unwrap();
        let mut terms = level_embedding_terms(group.algebra(), &coarse, &fine).unwrap();
        assert!(terms.iter().all(|(_, parts)| !parts.is_empty()));
        let idx = terms.iter().position(|(_, p)| p.len() > 1).unwrap_or(0);
        terms[idx].1.pop();
        assert!(!embedding_holds(&group, &terms).unwrap());
    }

    #[test]
    fn orbit_separation() {
        let (_, rec) = recoded();
        let a = seed("a.a:2");
        let b = seed("b.a:2");
        assert!(orbits_separated(&a, &b, DEFAULT_ORBIT_DEPTH).unwrap());
        assert!(!orbits_separated(&a, &a, 8).unwrap());
        let ra = RecodedPoint::new(a, rec.clone());
        let rb = RecodedPoint::new(b, rec);
        assert!(orbits_separated(&ra, &rb, DEFAULT_ORBIT_DEPTH).unwrap());
    }

    #[test]
    fn factorization_of_tower_interior_generator() {
        let (group, rec) = recoded();
        let omega = RecodedPoint::new(seed("a.a:2"), rec.clone());
        let omega2 = RecodedPoint::new(seed("b.a:2"), rec.clone());
        let kr = first_level_with_min_height(rec.as_ref(), &omega, 12, 32).unwrap();
        let mid = kr.height(0) / 2;
        let word = vec![GeneratorSymbol::new(kr.atom(0, mid), 1)];
        let f = factor_product(&group, &word, &omega, &omega2, 64).unwrap();
        assert!(f.q_word.is_empty());
        assert!(verify_factorization(&group, &word, &f).unwrap().passed());
    }

    #[test]
    fn factorization_of_short_products() {
        let (group, rec) = recoded();
        let omega = RecodedPoint::new(seed("a.a:2"), rec.clone());
        let omega2 = RecodedPoint::new(seed("b.a:2"), rec.clone());
        let words = rec.factors(2);
        let word = vec![
            GeneratorSymbol::new(Cylinder::new(words.words()[0].clone(), 1), 1),
            GeneratorSymbol::new(Cylinder::new(words.words()[3].clone(), 0), -1),
        ];
        let f = factor_product(&group, &word, &omega, &omega2, 64).unwrap();
        assert!(f.partition.min_height() >= 15);
        assert!(!f.q_word.is_empty() || !f.p_word.is_empty());
        assert!(verify_factorization(&group, &word, &f).unwrap().passed());
        assert!(matches!(
            factor_product(&group, &word, &omega, &omega, 64),
            Err(Error::SeedOrbitNotSeparated { .. })
        ));
    }
}
