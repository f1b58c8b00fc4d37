//! Finite posets on the coordinate set, and positive weights on them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::{Limits, Rational, Witnessed};

/// A subset of the coordinate set, stored as a bit mask over element indices.
///
/// Sets order lexicographically on their sorted index lists, so `∅ < {0} <
/// {0,1} < {0,1,2} < {0,2} < {1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet(u32);

pub const MAX_ELEMENTS: usize = 32;

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn from_bits(bits: u32) -> Self {
        LabelSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        LabelSet(1 << i)
    }

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            LabelSet(u32::MAX)
        } else {
            LabelSet((1u32 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        LabelSet(it.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        LabelSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for LabelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for LabelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for LabelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// A permutation of element indices, `perm[i]` being the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Fails unless `images` is a bijection of `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply_set(&self, set: LabelSet) -> LabelSet {
        LabelSet::from_indices(set.iter().map(|i| self.0[i]))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

/// A finite partial order on labelled elements.
///
/// Element `i` of the order is `labels[i]`; every set and permutation in the
/// crate refers to elements by that index.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    // leq[u] = {v : u ≼ v} as a mask (the principal filter of u)
    above: Vec<LabelSet>,
    // below[v] = {u : u ≼ v} (the principal ideal of v)
    below: Vec<LabelSet>,
    level: Vec<usize>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<(&str, &str)> = self
            .covers()
            .into_iter()
            .map(|(a, b)| (self.labels[a].as_str(), self.labels[b].as_str()))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

impl Poset {
    /// Builds a poset from a full relation matrix, `leq[u][v]` meaning
    /// `u ≼ v`. The matrix must be reflexive, antisymmetric and transitive.
    pub fn from_relation(labels: Vec<String>, leq: &[Vec<bool>]) -> Result<Self> {
        let n = labels.len();
        check_labels(&labels)?;
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::Validation(format!(
                "relation matrix must be {n}×{n}"
            )));
        }
        for u in 0..n {
            if !leq[u][u] {
                return Err(Error::Validation(format!(
                    "relation is not reflexive at `{}`",
                    labels[u]
                )));
            }
            for v in 0..n {
                if u != v && leq[u][v] && leq[v][u] {
                    return Err(Error::Cycle(vec![labels[u].clone(), labels[v].clone(), labels[u].clone()]));
                }
                for w in 0..n {
                    if leq[u][v] && leq[v][w] && !leq[u][w] {
                        return Err(Error::Validation(format!(
                            "relation is not transitive: {} ≼ {} ≼ {}",
                            labels[u], labels[v], labels[w]
                        )));
                    }
                }
            }
        }
        let above: Vec<LabelSet> = (0..n)
            .map(|u| LabelSet::from_indices((0..n).filter(|&v| leq[u][v])))
            .collect();
        Ok(Self::from_filters(labels, above))
    }

    /// Builds a poset from cover (or any generating) relations `lower ≺ upper`
    /// by reflexive-transitive closure. A cycle is rejected with the labels
    /// along it.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        check_labels(&labels)?;
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Domain(format!("cover ({a}, {b}) out of range")));
            }
            succ[a].push(b);
        }
        let mut above = vec![LabelSet::EMPTY; n];
        for (u, up) in above.iter_mut().enumerate() {
            // breadth-first search from u, remembering parents for a cycle witness
            let mut parent = vec![usize::MAX; n];
            let mut seen = LabelSet::singleton(u);
            let mut queue = VecDeque::from([u]);
            while let Some(x) = queue.pop_front() {
                for &y in &succ[x] {
                    if y == u {
                        let mut path = vec![x];
                        let mut cur = x;
                        while cur != u {
                            cur = parent[cur];
                            path.push(cur);
                        }
                        path.reverse();
                        path.push(u);
                        return Err(Error::Cycle(
                            path.into_iter().map(|i| labels[i].clone()).collect(),
                        ));
                    }
                    if !seen.contains(y) {
                        seen.insert(y);
                        parent[y] = x;
                        queue.push_back(y);
                    }
                }
            }
            *up = seen;
        }
        Ok(Self::from_filters(labels, above))
    }

    /// Same as [`Poset::from_covers`] with relations given by label.
    pub fn from_cover_labels(labels: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let index = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::UnknownLabel(s.to_string()))
        };
        let pairs = covers
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_covers(labels, &pairs)
    }

    fn from_filters(labels: Vec<String>, above: Vec<LabelSet>) -> Self {
        let n = labels.len();
        let below: Vec<LabelSet> = (0..n)
            .map(|v| LabelSet::from_indices((0..n).filter(|&u| above[u].contains(v))))
            .collect();
        // longest chain ending at v; a strictly smaller element has a strictly
        // smaller principal ideal, so processing by ideal size is topological
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| below[v].len());
        let mut level = vec![1; n];
        for &v in &order {
            for u in below[v].iter().filter(|&u| u != v) {
                level[v] = level[v].max(level[u] + 1);
            }
        }
        Poset {
            labels,
            above,
            below,
            level,
        }
    }

    fn numbered(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    /// The chain `1 ≺ 2 ≺ … ≺ n`.
    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(Self::numbered(n), &covers).expect("chain is a poset")
    }

    /// The discrete order on `1, …, n`.
    pub fn antichain(n: usize) -> Self {
        Self::from_covers(Self::numbered(n), &[]).expect("antichain is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn set_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<LabelSet> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(LabelSet::from_indices)
    }

    pub fn set_labels(&self, set: LabelSet) -> Vec<&str> {
        set.iter().map(|i| self.labels[i].as_str()).collect()
    }

    pub fn full(&self) -> LabelSet {
        LabelSet::full(self.len())
    }

    /// `u ≼ v`.
    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.above[u].contains(v)
    }

    /// `u ≺ v`, i.e. `u ≼ v` and `u ≠ v`.
    pub fn lt(&self, u: usize, v: usize) -> bool {
        u != v && self.leq(u, v)
    }

    /// The principal ideal `⟨{v}⟩`.
    pub fn principal_ideal(&self, v: usize) -> LabelSet {
        self.below[v]
    }

    /// Cover pairs `(u, v)`: `u ≺ v` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if self.lt(u, v) && !(0..n).any(|w| self.lt(u, w) && self.lt(w, v)) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Closure without range checking; used on sets produced internally.
    pub fn close(&self, set: LabelSet) -> LabelSet {
        set.iter()
            .fold(LabelSet::EMPTY, |acc, b| acc.union(self.below[b]))
    }

    /// `⟨B⟩`: every element lying below some member of `B`.
    pub fn ideal_closure(&self, set: LabelSet) -> Result<LabelSet> {
        if !set.is_subset(self.full()) {
            return Err(Error::Domain(format!(
                "set {set:?} is not contained in the {} elements",
                self.len()
            )));
        }
        Ok(self.close(set))
    }

    pub fn is_ideal(&self, set: LabelSet) -> bool {
        self.close(set) == set
    }

    /// All order ideals in canonical (lexicographic) order.
    pub fn all_ideals(&self) -> Vec<LabelSet> {
        let mut ideals = Vec::new();
        self.grow_ideals(&self.linear_extension(), 0, LabelSet::EMPTY, &mut ideals);
        ideals.sort();
        ideals
    }

    // Decide membership element by element along a linear extension; an
    // element may join only when everything below it already has.
    fn grow_ideals(&self, ext: &[usize], pos: usize, current: LabelSet, out: &mut Vec<LabelSet>) {
        if pos == ext.len() {
            out.push(current);
            return;
        }
        let v = ext[pos];
        self.grow_ideals(ext, pos + 1, current, out);
        let strictly_below = LabelSet::from_bits(self.below[v].bits() & !(1 << v));
        if strictly_below.is_subset(current) {
            let mut with = current;
            with.insert(v);
            self.grow_ideals(ext, pos + 1, with, out);
        }
    }

    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (self.level[v], v));
        order
    }

    /// `len(y)`: the size of a longest chain with greatest element `y`.
    pub fn level(&self, y: usize) -> Result<usize> {
        self.level
            .get(y)
            .copied()
            .ok_or_else(|| Error::Domain(format!("element {y} out of range")))
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    /// Length of a longest chain (0 for the empty poset).
    pub fn height(&self) -> usize {
        self.level.iter().copied().max().unwrap_or(0)
    }

    /// `(W_1, …, W_m)` with `W_r = {u : len(u) = r}`.
    pub fn level_sets(&self) -> Vec<LabelSet> {
        (1..=self.height())
            .map(|r| LabelSet::from_indices((0..self.len()).filter(|&u| self.level[u] == r)))
            .collect()
    }

    /// Hierarchical: `len(u) + 1 ≤ len(v)` forces `u ≼ v`. On failure the
    /// first violating pair `(u, v)` in index order is returned.
    pub fn is_hierarchical(&self) -> Witnessed<(usize, usize)> {
        let n = self.len();
        for (u, v) in (0..n).cartesian_product(0..n) {
            if self.level[u] < self.level[v] && !self.leq(u, v) {
                return Witnessed::no((u, v));
            }
        }
        Witnessed::yes()
    }

    /// The dual order, `u ≼' v ⟺ v ≼ u`.
    pub fn dual(&self) -> Poset {
        Self::from_filters(self.labels.clone(), self.below.clone())
    }

    /// Whether `perm` is an order automorphism.
    pub fn is_automorphism(&self, perm: &Permutation) -> bool {
        let n = self.len();
        perm.len() == n
            && (0..n)
                .cartesian_product(0..n)
                .all(|(u, v)| self.leq(u, v) == self.leq(perm.apply(u), perm.apply(v)))
    }

    /// All order automorphisms, in lexicographic order of their image lists.
    pub fn automorphisms(&self, limits: &Limits) -> Result<Vec<Permutation>> {
        let n = self.len();
        if n > limits.max_aut_elements {
            return Err(Error::BoundExceeded {
                what: "automorphism search (poset size)",
                needed: n as u128,
                limit: limits.max_aut_elements as u128,
            });
        }
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.extend_automorphism(&mut images, &mut used, &mut out);
        Ok(out)
    }

    // Depth-first over partial maps, pruning as soon as an order relation
    // among the assigned elements is broken. Levels and principal-ideal sizes
    // are automorphism invariants, which prunes most branches early.
    fn extend_automorphism(&self, images: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        let n = self.len();
        let u = images.len();
        if u == n {
            out.push(Permutation(images.clone()));
            return;
        }
        for cand in 0..n {
            if used[cand]
                || self.level[cand] != self.level[u]
                || self.below[cand].len() != self.below[u].len()
                || self.above[cand].len() != self.above[u].len()
            {
                continue;
            }
            let consistent = (0..u).all(|w| {
                self.leq(w, u) == self.leq(images[w], cand) && self.leq(u, w) == self.leq(cand, images[w])
            });
            if consistent {
                used[cand] = true;
                images.push(cand);
                self.extend_automorphism(images, used, out);
                images.pop();
                used[cand] = false;
            }
        }
    }

    /// The unique decomposition property of `(P, ω)`: ideals of equal weight
    /// are carried onto each other by a weight-preserving automorphism.
    ///
    /// Returns the first offending pair of ideals `(I, J)` in canonical order.
    pub fn udp_check(&self, omega: &WeightFunction, limits: &Limits) -> Result<Witnessed<(LabelSet, LabelSet)>> {
        omega.check_domain(self)?;
        let auts: Vec<Permutation> = self
            .automorphisms(limits)?
            .into_iter()
            .filter(|a| omega.is_invariant_under(a))
            .collect();
        let ideals = self.all_ideals();
        let mut by_weight: BTreeMap<Rational, Vec<LabelSet>> = BTreeMap::new();
        for &i in &ideals {
            by_weight.entry(omega.sum(i)).or_default().push(i);
        }
        let mut failure: Option<(LabelSet, LabelSet)> = None;
        for &i in &ideals {
            for &j in &by_weight[&omega.sum(i)] {
                if !auts.iter().any(|a| a.apply_set(i) == j) {
                    let cand = (i, j);
                    if failure.is_none_or(|f| cand < f) {
                        failure = Some(cand);
                    }
                }
            }
        }
        Ok(match failure {
            Some(w) => Witnessed::no(w),
            None => Witnessed::yes(),
        })
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_ELEMENTS {
        return Err(Error::Validation(format!(
            "at most {MAX_ELEMENTS} elements are supported, got {}",
            labels.len()
        )));
    }
    if let Some(dup) = labels.iter().duplicates().next() {
        return Err(Error::Validation(format!("duplicate label `{dup}`")));
    }
    Ok(())
}

/// Every labelled poset on `{0, …, n-1}`, one per transitively closed
/// antisymmetric relation. Elements are labelled `1..=n`.
pub fn all_labeled_posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut above = (0..n).map(LabelSet::singleton).collect::<Vec<_>>();
        for &(a, b) in &pairs {
            match c % 3 {
                1 => above[a].insert(b),
                2 => above[b].insert(a),
                _ => {}
            }
            c /= 3;
        }
        let transitive = (0..n).all(|u| above[u].iter().all(|v| above[v].is_subset(above[u])));
        if transitive {
            out.push(Poset::from_filters(Poset::numbered(n), above));
        }
    }
    out
}

/// A strictly positive rational weight per element.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct WeightFunction {
    values: Vec<Rational>,
}

impl WeightFunction {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| **v <= Rational::zero()) {
            return Err(Error::Validation(format!("weights must be positive, got {v}")));
        }
        Ok(WeightFunction { values })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    /// `ω ≡ 1`.
    pub fn ones(n: usize) -> Self {
        WeightFunction {
            values: vec![Rational::one(); n],
        }
    }

    /// `ω(i) = 2^i`: all subset sums distinct, so equal weight means equal
    /// ideal.
    pub fn powers_of_two(poset: &Poset) -> Self {
        WeightFunction {
            values: (0..poset.len()).map(|i| Rational::from_integer(1 << i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Rational {
        self.values[i]
    }

    /// `Σ_{a ∈ A} ω(a)`.
    pub fn sum(&self, set: LabelSet) -> Rational {
        set.iter().map(|i| self.values[i]).sum()
    }

    pub fn is_identically_one(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all_equal()
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// `ω ∘ λ = ω`.
    pub fn is_invariant_under(&self, perm: &Permutation) -> bool {
        (0..self.len()).all(|i| self.values[perm.apply(i)] == self.values[i])
    }

    pub(crate) fn check_domain(&self, poset: &Poset) -> Result<()> {
        if self.len() != poset.len() {
            return Err(Error::Validation(format!(
                "weight function has {} values for {} elements",
                self.len(),
                poset.len()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    /// a ≺ b, c isolated.
    fn ab_c() -> Poset {
        Poset::from_cover_labels(labels(&["a", "b", "c"]), &[("a".into(), "b".into())]).unwrap()
    }

    fn brute_force_closure(p: &Poset, b: LabelSet) -> LabelSet {
        let n = p.len();
        LabelSet::from_indices((0..n).filter(|&a| b.iter().any(|x| p.leq(a, x))))
    }

    #[test]
    fn closure_examples() {
        let chain = Poset::chain(3);
        assert_eq!(chain.ideal_closure(LabelSet::singleton(2)).unwrap(), LabelSet::full(3));
        assert_eq!(chain.ideal_closure(LabelSet::EMPTY).unwrap(), LabelSet::EMPTY);
        let p = ab_c();
        let b = p.set_from_labels(&["b", "c"]).unwrap();
        assert_eq!(p.ideal_closure(b).unwrap(), p.set_from_labels(&["a", "b", "c"]).unwrap());
        assert!(matches!(p.ideal_closure(LabelSet::singleton(5)), Err(Error::Domain(_))));
        assert!(matches!(p.set_from_labels(&["z"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn ideal_examples() {
        let anti = Poset::antichain(2);
        assert_eq!(
            anti.all_ideals(),
            vec![
                LabelSet::EMPTY,
                LabelSet::from_indices([0]),
                LabelSet::from_indices([0, 1]),
                LabelSet::from_indices([1])
            ]
        );
        assert_eq!(
            Poset::chain(3).all_ideals(),
            vec![
                LabelSet::EMPTY,
                LabelSet::from_indices([0]),
                LabelSet::from_indices([0, 1]),
                LabelSet::from_indices([0, 1, 2])
            ]
        );
        assert_eq!(ab_c().all_ideals().len(), 6);
    }

    #[test]
    fn ideals_match_brute_force_filter() {
        for n in 0..=4 {
            for p in all_labeled_posets(n) {
                let brute: Vec<LabelSet> = (0..1u32 << n)
                    .map(LabelSet::from_bits)
                    .filter(|&s| brute_force_closure(&p, s) == s)
                    .sorted()
                    .collect();
                assert_eq!(p.all_ideals(), brute, "{p:?}");
                for bits in 0..1u32 << n {
                    let s = LabelSet::from_bits(bits);
                    let c = p.close(s);
                    assert_eq!(c, brute_force_closure(&p, s));
                    assert_eq!(p.close(c), c);
                    // smallest ideal containing s
                    let smallest = brute.iter().filter(|i| s.is_subset(**i)).min_by_key(|i| i.len()).unwrap();
                    assert_eq!(*smallest, c);
                }
            }
        }
    }

    #[test]
    fn levels_examples() {
        let anti = Poset::antichain(3);
        assert_eq!(anti.levels(), &[1, 1, 1]);
        assert_eq!(anti.level_sets().len(), 1);
        let chain = Poset::chain(3);
        assert_eq!(chain.levels(), &[1, 2, 3]);
        let p = ab_c();
        assert_eq!(
            p.level_sets(),
            vec![p.set_from_labels(&["a", "c"]).unwrap(), p.set_from_labels(&["b"]).unwrap()]
        );
        assert!(p.level(7).is_err());
    }

    #[test]
    fn hierarchy_examples() {
        assert!(Poset::chain(4).is_hierarchical().holds);
        assert!(Poset::antichain(4).is_hierarchical().holds);
        let p = ab_c();
        let w = p.is_hierarchical();
        assert!(!w.holds);
        assert_eq!(w.witness, Some((p.index_of("c").unwrap(), p.index_of("b").unwrap())));
    }

    #[test]
    fn hierarchy_matches_level_formulation() {
        for n in 0..=4 {
            for p in all_labeled_posets(n) {
                let levels = p.level_sets();
                let alt = (0..levels.len()).all(|r| {
                    (r + 1..levels.len())
                        .all(|s| levels[r].iter().all(|u| levels[s].iter().all(|v| p.leq(u, v))))
                });
                assert_eq!(p.is_hierarchical().holds, alt, "{p:?}");
            }
        }
    }

    #[test]
    fn dual_examples() {
        let anti = Poset::antichain(3);
        assert_eq!(anti.dual(), anti);
        let d = Poset::chain(2).dual();
        assert!(d.leq(1, 0) && !d.leq(0, 1));
        for p in all_labeled_posets(3) {
            assert_eq!(p.dual().dual(), p);
        }
    }

    #[test]
    fn automorphism_examples() {
        let limits = Limits::default();
        assert_eq!(Poset::chain(5).automorphisms(&limits).unwrap(), vec![Permutation::identity(5)]);
        assert_eq!(Poset::antichain(4).automorphisms(&limits).unwrap().len(), 24);
        assert_eq!(ab_c().automorphisms(&limits).unwrap(), vec![Permutation::identity(3)]);
        assert!(matches!(
            Poset::antichain(9).automorphisms(&limits),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn automorphisms_match_brute_force_and_form_a_group() {
        let limits = Limits::default();
        for n in 0..=4 {
            for p in all_labeled_posets(n) {
                let auts = p.automorphisms(&limits).unwrap();
                let brute: Vec<Permutation> = (0..n)
                    .permutations(n)
                    .map(|v| Permutation::new(v).unwrap())
                    .filter(|perm| p.is_automorphism(perm))
                    .collect();
                assert_eq!(auts, brute);
                assert!(auts.contains(&Permutation::identity(n)));
                for a in &auts {
                    assert!(auts.contains(&a.inverse()));
                    for b in &auts {
                        assert!(auts.contains(&a.compose(b)));
                    }
                    for u in 0..n {
                        assert_eq!(p.levels()[a.apply(u)], p.levels()[u]);
                    }
                }
            }
        }
    }

    #[test]
    fn udp_examples() {
        let limits = Limits::default();
        let anti = Poset::antichain(2);
        let w = WeightFunction::from_integers(&[1, 2]).unwrap();
        assert!(anti.udp_check(&w, &limits).unwrap().holds);

        // a ≺ b with c isolated: {a} and {c} already have equal weight and
        // no non-trivial automorphism exists; {a,b} vs {a,c} also fails.
        let p = ab_c();
        let ones = WeightFunction::ones(3);
        let res = p.udp_check(&ones, &limits).unwrap();
        assert!(!res.holds);
        let (i, j) = res.witness.unwrap();
        assert_eq!((i, j), (p.set_from_labels(&["a"]).unwrap(), p.set_from_labels(&["c"]).unwrap()));
        let ac = p.set_from_labels(&["a", "c"]).unwrap();
        let ab = p.set_from_labels(&["a", "b"]).unwrap();
        assert_eq!(ones.sum(ac), ones.sum(ab));
    }

    #[test]
    fn udp_with_unit_weights_is_hierarchy() {
        let limits = Limits::default();
        for n in 0..=4 {
            for p in all_labeled_posets(n) {
                let udp = p.udp_check(&WeightFunction::ones(n), &limits).unwrap();
                assert_eq!(udp.holds, p.is_hierarchical().holds, "{p:?}");
            }
        }
    }

    #[test]
    fn powers_of_two_examples() {
        let w = WeightFunction::powers_of_two(&Poset::antichain(1));
        assert_eq!(w.values(), &[Rational::from_integer(1)]);
        let w = WeightFunction::powers_of_two(&Poset::chain(3));
        assert_eq!(w.values(), &[1, 2, 4].map(Rational::from_integer));
        // distinct subset sums
        let sums: Vec<Rational> = (0..8).map(|b| w.sum(LabelSet::from_bits(b))).collect();
        assert!(sums.iter().all_unique());
    }

    #[test]
    fn labeled_poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_labeled_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn cycles_are_rejected_with_witness() {
        let err = Poset::from_cover_labels(
            labels(&["x", "y", "z"]),
            &[("x".into(), "y".into()), ("y".into(), "z".into()), ("z".into(), "x".into())],
        )
        .unwrap_err();
        match err {
            Error::Cycle(path) => {
                assert_eq!(path.first(), path.last());
                assert_eq!(path.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(WeightFunction::from_integers(&[1, 0]).is_err());
        assert!(Poset::from_covers(labels(&["a", "a"]), &[]).is_err());
    }

    #[test]
    fn relation_matrix_validation() {
        let l = labels(&["a", "b"]);
        let ok = Poset::from_relation(l.clone(), &[vec![true, true], vec![false, true]]).unwrap();
        assert_eq!(ok, Poset::chain(2).relabel_for_test(&l));
        assert!(Poset::from_relation(l.clone(), &[vec![true, true], vec![true, true]]).is_err());
        assert!(Poset::from_relation(l, &[vec![false, false], vec![false, true]]).is_err());
    }

    impl Poset {
        fn relabel_for_test(&self, labels: &[String]) -> Poset {
            Poset::from_filters(labels.to_vec(), self.above.clone())
        }
    }
}
