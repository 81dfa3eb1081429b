//! Clopen subsets of Ω in centered-word normal form.
//!
//! A [`ClopenSet`] of radius `M` is a set of admissible words `z` of length
//! `2M`, read as `ω_{-M} ⋯ ω_{M-1} = z`. Two sets denote the same subset of Ω
//! iff their member sets agree after refining both to the larger radius.
//!
//! Cylinders use `(w, i) = T^i[.w] = { ω : ω_{j-i} = w_j }` with
//! `(Tω)_n = ω_{n+1}`, so `[u.v] = (uv, |u|)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::subshift::{LanguageOracle, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub word: Word,
    pub offset: i64,
}

impl Cylinder {
    pub fn new(word: Word, offset: i64) -> Self {
        Cylinder { word, offset }
    }

    /// `[u.v]`: `u` just left of the origin, `v` from the origin on.
    pub fn bracket(u: &[Symbol], v: &[Symbol]) -> Self {
        let mut word = u.to_vec();
        word.extend_from_slice(v);
        Cylinder::new(word, u.len() as i64)
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Smallest radius whose window covers the fixed coordinates.
    pub fn min_radius(&self) -> usize {
        let len = self.word.len() as i64;
        self.offset.max(len - self.offset).max(0) as usize
    }

    /// `T^k` applied to the cylinder.
    pub fn shifted(&self, k: i64) -> Self {
        Cylinder::new(self.word.clone(), self.offset + k)
    }

    /// Whether the centered word `z` of radius `radius` lies in the cylinder.
    pub fn matches(&self, z: &[Symbol], radius: usize) -> bool {
        let start = radius as i64 - self.offset;
        start >= 0
            && (start as usize + self.word.len()) <= z.len()
            && z[start as usize..start as usize + self.word.len()] == self.word[..]
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.word.iter().map(|s| s.to_string()).collect();
        write!(f, "({}, {})", w.join(" "), self.offset)
    }
}

#[derive(Debug, Clone)]
pub struct ClopenSet {
    radius: usize,
    members: BTreeSet<Word>,
}

impl ClopenSet {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn members(&self) -> &BTreeSet<Word> {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of centered words at the stored radius.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Membership of a centered window of radius `outer ≥ radius`.
    pub fn contains_window(&self, z: &[Symbol], outer: usize) -> bool {
        self.members.contains(core(z, outer, self.radius))
    }
}

/// Central sub-window of radius `inner` inside a centered word of radius `outer`.
pub(crate) fn core(z: &[Symbol], outer: usize, inner: usize) -> &[Symbol] {
    &z[outer - inner..outer + inner]
}

/// Boolean algebra of clopen sets over a fixed language.
#[derive(Debug, Clone)]
pub struct ClopenAlgebra {
    oracle: Arc<dyn LanguageOracle>,
}

impl ClopenAlgebra {
    pub fn new(oracle: Arc<dyn LanguageOracle>) -> Self {
        ClopenAlgebra { oracle }
    }

    pub fn oracle(&self) -> &Arc<dyn LanguageOracle> {
        &self.oracle
    }

    pub fn whole(&self, radius: usize) -> ClopenSet {
        ClopenSet {
            radius,
            members: self.oracle.factors(2 * radius).words().iter().cloned().collect(),
        }
    }

    pub fn empty(&self, radius: usize) -> ClopenSet {
        ClopenSet {
            radius,
            members: BTreeSet::new(),
        }
    }

    /// Collects the centered words of radius `radius` satisfying `pred`.
    pub fn from_predicate(&self, radius: usize, pred: impl Fn(&[Symbol]) -> bool) -> ClopenSet {
        let members = self
            .oracle
            .factors(2 * radius)
            .iter()
            .filter(|z| pred(z))
            .cloned()
            .collect();
        ClopenSet { radius, members }
    }

    pub fn to_clopen(&self, c: &Cylinder, radius: usize) -> Result<ClopenSet> {
        if radius < c.min_radius() {
            return Err(Error::RadiusTooSmall {
                radius,
                cylinder: c.to_string(),
            });
        }
        Ok(self.from_predicate(radius, |z| c.matches(z, radius)))
    }

    /// The cylinder at its minimal radius.
    pub fn cylinder_set(&self, c: &Cylinder) -> ClopenSet {
        self.to_clopen(c, c.min_radius()).expect("minimal radius suffices")
    }

    pub fn refine(&self, s: &ClopenSet, radius: usize) -> ClopenSet {
        assert!(radius >= s.radius, "refine cannot lower the radius");
        if radius == s.radius {
            return s.clone();
        }
        self.from_predicate(radius, |z| s.contains_window(z, radius))
    }

    fn common(&self, a: &ClopenSet, b: &ClopenSet) -> (ClopenSet, ClopenSet) {
        let r = a.radius.max(b.radius);
        (self.refine(a, r), self.refine(b, r))
    }

    pub fn union(&self, a: &ClopenSet, b: &ClopenSet) -> ClopenSet {
        let (a, b) = self.common(a, b);
        ClopenSet {
            radius: a.radius,
            members: a.members.union(&b.members).cloned().collect(),
        }
    }

    pub fn intersection(&self, a: &ClopenSet, b: &ClopenSet) -> ClopenSet {
        let (a, b) = self.common(a, b);
        ClopenSet {
            radius: a.radius,
            members: a.members.intersection(&b.members).cloned().collect(),
        }
    }

    pub fn difference(&self, a: &ClopenSet, b: &ClopenSet) -> ClopenSet {
        let (a, b) = self.common(a, b);
        ClopenSet {
            radius: a.radius,
            members: a.members.difference(&b.members).cloned().collect(),
        }
    }

    pub fn complement(&self, a: &ClopenSet) -> ClopenSet {
        self.from_predicate(a.radius, |z| !a.members.contains(z))
    }

    pub fn equal(&self, a: &ClopenSet, b: &ClopenSet) -> bool {
        let (a, b) = self.common(a, b);
        a.members == b.members
    }

    pub fn subset(&self, a: &ClopenSet, b: &ClopenSet) -> bool {
        let (a, b) = self.common(a, b);
        a.members.is_subset(&b.members)
    }

    pub fn disjoint(&self, a: &ClopenSet, b: &ClopenSet) -> bool {
        let (a, b) = self.common(a, b);
        a.members.is_disjoint(&b.members)
    }

    /// `T^k(s)`, at radius `radius(s) + |k|`.
    pub fn shift_clopen(&self, s: &ClopenSet, k: i64) -> ClopenSet {
        let m = s.radius;
        let r = m + k.unsigned_abs() as usize;
        // ω ∈ T^k S iff (T^{-k}ω)_{-M..M-1} = ω_{-M-k..M-1-k} ∈ S.
        let start = (r as i64 - m as i64 - k) as usize;
        self.from_predicate(r, |z| s.members.contains(&z[start..start + 2 * m]))
    }

    /// `U ∪ TU ∪ T²U`.
    pub fn dilate3(&self, s: &ClopenSet) -> ClopenSet {
        let m = s.radius;
        let r = m + 2;
        self.from_predicate(r, |z| {
            (0..3).any(|start| s.members.contains(&z[start..start + 2 * m]))
        })
    }

    /// Inclusion of cylinder sets, decided at radius
    /// `max(|w|,|v|) + |i - j| + 1` after translating by `-j`.
    pub fn is_subset(&self, c1: &Cylinder, c2: &Cylinder) -> bool {
        let j = c1.offset;
        let a = c1.shifted(-j);
        let b = c2.shifted(-j);
        let radius = a.len().max(b.len()) + (c2.offset - j).unsigned_abs() as usize + 1;
        let sa = self.to_clopen(&a, radius).expect("radius bound");
        let sb = self.to_clopen(&b, radius).expect("radius bound");
        sa.members.is_subset(&sb.members)
    }

    pub fn are_disjoint(&self, c1: &Cylinder, c2: &Cylinder) -> bool {
        let sa = self.cylinder_set(c1);
        let sb = self.cylinder_set(c2);
        self.disjoint(&sa, &sb)
    }

    /// `(U ∪ TU ∪ T²U) ∩ (V ∪ TV ∪ T²V) = ∅`.
    pub fn are_3disjoint(&self, c1: &Cylinder, c2: &Cylinder) -> bool {
        let j = c2.offset;
        let a = c1.shifted(-j);
        let b = c2.shifted(-j);
        let radius = a.len().max(b.len()) + (c1.offset - j).unsigned_abs() as usize + 1;
        let sa = self.dilate3(&self.to_clopen(&a, radius).expect("radius bound"));
        let sb = self.dilate3(&self.to_clopen(&b, radius).expect("radius bound"));
        sa.members.is_disjoint(&sb.members)
    }

    pub fn sets_3disjoint(&self, a: &ClopenSet, b: &ClopenSet) -> bool {
        self.disjoint(&self.dilate3(a), &self.dilate3(b))
    }

    /// Parts pairwise disjoint, each inside `target`, union equal to `target`.
    pub fn verify_cylinder_partition(&self, target: &Cylinder, parts: &[Cylinder]) -> bool {
        let spread = parts
            .iter()
            .map(|c| c.len() + c.offset.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let radius = spread + target.len() + target.offset.unsigned_abs() as usize + 1;
        self.oracle.factors(2 * radius).iter().all(|z| {
            let hits = parts.iter().filter(|c| c.matches(z, radius)).count();
            if target.matches(z, radius) {
                hits == 1
            } else {
                hits == 0
            }
        })
    }

    /// `(left, right)` one-symbol refinements `{(a·w, i+1)}` and `{(w·b, i)}`.
    pub fn canonical_refinements(&self, c: &Cylinder) -> Result<(Vec<Cylinder>, Vec<Cylinder>)> {
        if !self.oracle.contains(&c.word) {
            return Err(Error::NotInLanguage(crate::subshift::index_list(&c.word)));
        }
        Ok((self.left_refinement(c), self.right_refinement(c)))
    }

    pub fn left_refinement(&self, c: &Cylinder) -> Vec<Cylinder> {
        self.oracle
            .alphabet()
            .symbols()
            .map(|a| {
                let mut w = vec![a];
                w.extend_from_slice(&c.word);
                w
            })
            .filter(|w| self.oracle.contains(w))
            .map(|w| Cylinder::new(w, c.offset + 1))
            .collect()
    }

    pub fn right_refinement(&self, c: &Cylinder) -> Vec<Cylinder> {
        self.oracle
            .alphabet()
            .symbols()
            .map(|b| {
                let mut w = c.word.clone();
                w.push(b);
                w
            })
            .filter(|w| self.oracle.contains(w))
            .map(|w| Cylinder::new(w, c.offset))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::{Substitution, SubstitutionSubshift};

    fn fib() -> ClopenAlgebra {
        ClopenAlgebra::new(Arc::new(
            SubstitutionSubshift::new(Substitution::fibonacci()).unwrap(),
        ))
    }

    fn cyl(alg: &ClopenAlgebra, w: &str, i: i64) -> Cylinder {
        Cylinder::new(alg.oracle().alphabet().parse_word(w).unwrap(), i)
    }

    #[test]
    fn to_clopen_examples() {
        let alg = fib();
        let s = alg.to_clopen(&cyl(&alg, "a", 0), 1).unwrap();
        let expect: BTreeSet<Word> = [vec![0, 0], vec![1, 0]].into_iter().collect();
        assert_eq!(s.members(), &expect);
        assert!(alg.to_clopen(&cyl(&alg, "bb", 0), 2).unwrap().is_empty());
        assert!(matches!(
            alg.to_clopen(&cyl(&alg, "abc".get(..2).unwrap(), 0), 1),
            Err(Error::RadiusTooSmall { .. })
        ));
        let fine = alg.refine(&s, 3);
        assert!(alg.equal(&fine, &s));
        assert_eq!(fine.radius(), 3);
    }

    #[test]
    fn subset_examples() {
        let alg = fib();
        let c = cyl(&alg, "aba", 2);
        assert!(alg.is_subset(&c, &c));
        assert!(alg.is_subset(&cyl(&alg, "ab", 0), &cyl(&alg, "a", 0)));
        assert!(!alg.is_subset(&cyl(&alg, "aa", 0), &cyl(&alg, "ab", 0)));
        // b at the origin forces a on both sides.
        assert!(alg.is_subset(&cyl(&alg, "b", 0), &cyl(&alg, "a", 1)));
        assert!(alg.is_subset(&cyl(&alg, "b", 3), &cyl(&alg, "a", 2)));
    }

    #[test]
    fn three_disjointness_examples() {
        let alg = fib();
        let c = cyl(&alg, "ab", 0);
        assert!(!alg.are_3disjoint(&c, &c));
        let empty = cyl(&alg, "bb", 0);
        assert!(alg.are_3disjoint(&empty, &c));
        assert!(alg.are_3disjoint(&c, &empty));
    }

    #[test]
    fn refinements() {
        let alg = fib();
        let (l, r) = alg.canonical_refinements(&cyl(&alg, "a", 0)).unwrap();
        assert_eq!(r, vec![cyl(&alg, "aa", 0), cyl(&alg, "ab", 0)]);
        assert_eq!(l, vec![cyl(&alg, "aa", 1), cyl(&alg, "ba", 1)]);
        let (_, r) = alg.canonical_refinements(&cyl(&alg, "b", 0)).unwrap();
        assert_eq!(r, vec![cyl(&alg, "ba", 0)]);
        assert!(alg.canonical_refinements(&cyl(&alg, "bb", 0)).is_err());
    }

    #[test]
    fn partitions() {
        let alg = fib();
        let target = cyl(&alg, "ab", -2);
        assert!(alg.verify_cylinder_partition(&target, std::slice::from_ref(&target)));
        let (l, r) = alg.canonical_refinements(&target).unwrap();
        assert!(alg.verify_cylinder_partition(&target, &l));
        assert!(alg.verify_cylinder_partition(&target, &r));
        let mut missing = l.clone();
        missing.pop();
        assert!(!alg.verify_cylinder_partition(&target, &missing));
        let mut doubled = r.clone();
        doubled.push(r[0].clone());
        assert!(!alg.verify_cylinder_partition(&target, &doubled));
        let mut outside = r.clone();
        outside.push(cyl(&alg, "b", 5));
        assert!(!alg.verify_cylinder_partition(&target, &outside));
    }

    #[test]
    fn shifting() {
        let alg = fib();
        let c = cyl(&alg, "aab", 1);
        let s = alg.cylinder_set(&c);
        assert!(alg.equal(&alg.shift_clopen(&s, 0), &s));
        for k in -3..=3 {
            let back = alg.shift_clopen(&alg.shift_clopen(&s, k), -k);
            assert!(alg.equal(&back, &s));
            assert!(alg.equal(&alg.shift_clopen(&s, k), &alg.cylinder_set(&c.shifted(k))));
        }
    }

    #[test]
    fn display() {
        assert_eq!(Cylinder::new(vec![0, 2, 3], 1).to_string(), "(0 2 3, 1)");
        assert_eq!(Cylinder::bracket(&[1], &[2, 3]), Cylinder::new(vec![1, 2, 3], 1));
    }
}
