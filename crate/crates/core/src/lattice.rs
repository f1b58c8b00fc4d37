//! Finite intersection-closed set families, their Möbius functions, and
//! solutions of the isometry equation `Σ 1_{A_i} = Σ 1_{B_j}`.
//!
//! Submodule lattices of the matrix module `Mat_{e,k}(F_q)` are built
//! through the Morita correspondence: a left submodule is the set of `e×k`
//! matrices whose rows lie in a fixed subspace of `F_q^k`, and it is cyclic
//! exactly when that subspace has dimension at most `e`.

use std::cmp::Ordering;
use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{check_bound, Error, Result};
use crate::field::Field;
use crate::space::{codes_of_dimension, gaussian_binomial, AmbientSpace, CodeMap, LinearCode};
use crate::Limits;

/// A subset of the ground set `0..ground`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet(FixedBitSet);

impl PointSet {
    pub fn empty(ground: usize) -> Self {
        PointSet(FixedBitSet::with_capacity(ground))
    }

    pub fn full(ground: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(ground);
        s.insert_range(..);
        PointSet(s)
    }

    pub fn from_points(ground: usize, points: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = FixedBitSet::with_capacity(ground);
        for p in points {
            if p >= ground {
                return Err(Error::Domain(format!("point {p} outside a ground set of size {ground}")));
            }
            s.insert(p);
        }
        Ok(PointSet(s))
    }

    pub fn ground(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet(&self.0 & &other.0)
    }

    pub fn points(&self) -> Vec<usize> {
        self.0.ones().collect()
    }
}

/// By size, then lexicographically on the sorted point lists.
impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.ones().cmp(other.0.ones()))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.ones())
    }
}

/// A family `Γ ⊆ 2^X` containing `X` and closed under intersection, its
/// members sorted by size then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteLattice {
    ground: usize,
    members: Vec<PointSet>,
    #[serde(skip)]
    index: HashMap<PointSet, usize>,
    #[serde(skip)]
    point_closures: Vec<usize>,
}

impl FiniteLattice {
    /// Validates that `X ∈ Γ` and that `Γ` is intersection-closed.
    pub fn new(ground: usize, members: Vec<PointSet>) -> Result<Self> {
        if let Some(bad) = members.iter().find(|m| m.ground() != ground) {
            return Err(Error::Validation(format!(
                "member {:?} is over a ground set of size {}, expected {ground}",
                bad.points(),
                bad.ground()
            )));
        }
        let lattice = Self::from_members(ground, members);
        if !lattice.index.contains_key(&PointSet::full(ground)) {
            return Err(Error::Validation("the whole ground set is not a member".into()));
        }
        for (a, b) in lattice.members.iter().tuple_combinations() {
            let meet = a.intersection(b);
            if !lattice.index.contains_key(&meet) {
                return Err(Error::Validation(format!(
                    "{:?} ∩ {:?} = {:?} is not a member",
                    a.points(),
                    b.points(),
                    meet.points()
                )));
            }
        }
        Ok(lattice)
    }

    /// The smallest lattice containing `sets` and `X`.
    pub fn from_family(ground: usize, sets: impl IntoIterator<Item = PointSet>) -> Self {
        let mut members: Vec<PointSet> = vec![PointSet::full(ground)];
        members.extend(sets);
        members.sort();
        members.dedup();
        loop {
            let mut fresh: Vec<PointSet> = members
                .iter()
                .tuple_combinations()
                .map(|(a, b)| a.intersection(b))
                .filter(|m| members.binary_search(m).is_err())
                .collect();
            if fresh.is_empty() {
                break;
            }
            members.append(&mut fresh);
            members.sort();
            members.dedup();
        }
        Self::from_members(ground, members)
    }

    fn from_members(ground: usize, mut members: Vec<PointSet>) -> Self {
        members.sort();
        members.dedup();
        let index = members.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        // the first member in size order holding x is the smallest one
        let point_closures = (0..ground)
            .map(|x| members.iter().position(|m| m.contains(x)).unwrap_or(usize::MAX))
            .collect();
        FiniteLattice {
            ground,
            members,
            index,
            point_closures,
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &PointSet {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, set: &PointSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn top(&self) -> usize {
        self.members.len() - 1
    }

    /// `⋂ Γ`, which is itself a member.
    pub fn bottom(&self) -> usize {
        0
    }

    pub fn contains_empty(&self) -> bool {
        self.members[0].is_empty()
    }

    /// `⟨A⟩_Γ`: the intersection of all members containing `a`, which is
    /// the first member in size order that contains it.
    pub fn closure(&self, a: &PointSet) -> usize {
        self.members
            .iter()
            .position(|m| a.is_subset(m))
            .expect("the ground set contains everything")
    }

    pub fn point_closure(&self, x: usize) -> usize {
        self.point_closures[x]
    }

    /// Members equal to `⟨{x}⟩_Γ` for no point `x`.
    pub fn non_principal(&self) -> Vec<usize> {
        let mut principal = vec![false; self.len()];
        for x in 0..self.ground {
            principal[self.point_closure(x)] = true;
        }
        (0..self.len()).filter(|&i| !principal[i]).collect()
    }

    /// Indices of the members contained in member `y`, ascending.
    pub fn below(&self, y: usize) -> Vec<usize> {
        let top = &self.members[y];
        (0..=y).filter(|&u| self.members[u].is_subset(top)).collect()
    }
}

/// `μ(u, y)` for every pair `u ⊆ y`; all other pairs are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoebiusTable {
    columns: Vec<Vec<(usize, i64)>>,
}

impl MoebiusTable {
    pub fn get(&self, u: usize, y: usize) -> i64 {
        let col = &self.columns[y];
        col.binary_search_by_key(&u, |&(v, _)| v).map_or(0, |k| col[k].1)
    }

    /// The nonzero and zero entries `(u, μ(u, y))` for `u ⊆ y`.
    pub fn column(&self, y: usize) -> &[(usize, i64)] {
        &self.columns[y]
    }

    /// `½ Σ_{u ⊆ y} |μ(u, y)|`.
    pub fn half_mass(&self, y: usize) -> u64 {
        self.columns[y].iter().map(|&(_, m)| m.unsigned_abs()).sum::<u64>() / 2
    }
}

/// Computes each column `μ(·, y)` on the interval below `y` from
/// `μ(y, y) = 1` and `Σ_{c ⊆ u ⊆ y} μ(u, y) = 0`, larger members first.
pub fn moebius(lattice: &FiniteLattice) -> MoebiusTable {
    let columns = (0..lattice.len())
        .map(|y| {
            let down = lattice.below(y);
            let mut mu = vec![0i64; down.len()];
            for a in (0..down.len()).rev() {
                if down[a] == y {
                    mu[a] = 1;
                    continue;
                }
                let low = lattice.member(down[a]);
                let above: i64 = (a + 1..down.len())
                    .filter(|&b| low.is_subset(lattice.member(down[b])))
                    .map(|b| mu[b])
                    .sum();
                mu[a] = -above;
            }
            down.into_iter().zip(mu).collect()
        })
        .collect();
    MoebiusTable { columns }
}

/// Outcome of checking `Σ_{u ⊆ y} μ(u, y)·1_u = 1_E` with
/// `E = {x : ⟨{x}⟩ = y}`, and of the split form that balances negative
/// against positive coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorIdentity {
    pub identity: bool,
    pub principal_points: PointSet,
    pub split: bool,
}

impl IndicatorIdentity {
    /// The identity holds and the split form holds exactly when no point
    /// generates `y`.
    pub fn consistent(&self) -> bool {
        self.identity && self.split == self.principal_points.is_empty()
    }
}

pub fn moebius_indicator_identity(lattice: &FiniteLattice, mu: &MoebiusTable, y: usize) -> IndicatorIdentity {
    let ground = lattice.ground();
    let e = PointSet::from_points(ground, (0..ground).filter(|&x| lattice.point_closure(x) == y))
        .expect("points are in range");
    let mut signed = vec![0i64; ground];
    let mut negative = vec![0i64; ground];
    let mut positive = vec![0i64; ground];
    for &(u, m) in mu.column(y) {
        for x in lattice.member(u).points() {
            signed[x] += m;
            if m < 0 {
                negative[x] -= m;
            } else {
                positive[x] += m;
            }
        }
    }
    let identity = (0..ground).all(|x| signed[x] == i64::from(e.contains(x)));
    IndicatorIdentity {
        identity,
        principal_points: e,
        split: negative == positive,
    }
}

/// Two multisets of sets, kept sorted so multiset equality is `==`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub left: Vec<PointSet>,
    pub right: Vec<PointSet>,
}

impl Solution {
    pub fn new(mut left: Vec<PointSet>, mut right: Vec<PointSet>) -> Self {
        left.sort();
        right.sort();
        Solution { left, right }
    }

    /// Pointwise equality of the two indicator sums.
    pub fn is_solution(&self) -> bool {
        let ground = self
            .left
            .iter()
            .chain(&self.right)
            .map(PointSet::ground)
            .max()
            .unwrap_or(0);
        let mut balance = vec![0i64; ground];
        for s in &self.left {
            for x in s.points() {
                balance[x] += 1;
            }
        }
        for s in &self.right {
            for x in s.points() {
                balance[x] -= 1;
            }
        }
        balance.iter().all(|&b| b == 0)
    }

    /// Some bijection matches equal sets.
    pub fn is_trivial(&self) -> bool {
        self.left == self.right
    }

    /// `max(|left|, |right|)`.
    pub fn length(&self) -> usize {
        self.left.len().max(self.right.len())
    }

    /// `((A_i ∩ c), (B_j ∩ c))`.
    pub fn restrict(&self, c: &PointSet) -> Solution {
        Solution::new(
            self.left.iter().map(|a| a.intersection(c)).collect(),
            self.right.iter().map(|b| b.intersection(c)).collect(),
        )
    }
}

fn require_no_empty_member(lattice: &FiniteLattice) -> Result<()> {
    if lattice.contains_empty() {
        Err(Error::Validation(
            "the empty set is a member, so 1_∅ = 0 gives trivially unbalanced solutions".into(),
        ))
    } else {
        Ok(())
    }
}

/// Members with `μ(·, y) ≤ −1` on the left with multiplicity `−μ`, members
/// with `μ(·, y) ≥ 1` on the right with multiplicity `μ`.
pub fn construct_minimal_solution(lattice: &FiniteLattice, mu: &MoebiusTable, y: usize) -> Result<Solution> {
    require_no_empty_member(lattice)?;
    if let Some(x) = (0..lattice.ground()).find(|&x| lattice.point_closure(x) == y) {
        return Err(Error::Validation(format!("member {y} is generated by the point {x}")));
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &(u, m) in mu.column(y) {
        let side = if m < 0 { &mut left } else { &mut right };
        side.extend(std::iter::repeat_n(lattice.member(u).clone(), m.unsigned_abs() as usize));
    }
    Ok(Solution::new(left, right))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalLength {
    pub length: u64,
    /// A non-principal member attaining the minimum (the first one).
    pub top: usize,
}

/// `min_{W ∈ Λ} ½ Σ_{U ⊆ W} |μ(U, W)|` over the non-principal members.
pub fn minimal_nontrivial_length(lattice: &FiniteLattice, mu: &MoebiusTable) -> Result<MinimalLength> {
    require_no_empty_member(lattice)?;
    lattice
        .non_principal()
        .into_iter()
        .map(|w| MinimalLength {
            length: mu.half_mass(w),
            top: w,
        })
        .min_by_key(|m| m.length)
        .ok_or(Error::AllSolutionsTrivial)
}

/// The largest family and length the exhaustive solution search accepts.
pub const SEARCH_MAX_MEMBERS: usize = 8;
pub const SEARCH_MAX_LENGTH: usize = 6;

/// The shortest nontrivial solution made of members with both sides of
/// length at most `max_len`, found as the first collision of indicator
/// sums among multisets listed by size; common sets are cancelled.
pub fn shortest_nontrivial_solution(lattice: &FiniteLattice, max_len: usize) -> Result<Option<Solution>> {
    check_bound("lattice members for exhaustive search", lattice.len() as u128, SEARCH_MAX_MEMBERS as u128)?;
    check_bound("solution length for exhaustive search", max_len as u128, SEARCH_MAX_LENGTH as u128)?;
    let ground = lattice.ground();
    let key = |multiset: &[usize]| {
        let mut counts = vec![0u8; ground];
        for &m in multiset {
            for x in lattice.member(m).points() {
                counts[x] += 1;
            }
        }
        counts
    };
    let mut seen: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    seen.insert(vec![0; ground], Vec::new());
    for size in 1..=max_len {
        for multiset in (0..lattice.len()).combinations_with_replacement(size) {
            let k = key(&multiset);
            if let Some(other) = seen.get(&k) {
                let mut left: Vec<usize> = multiset.clone();
                let mut right: Vec<usize> = Vec::new();
                for &m in other {
                    match left.iter().position(|&l| l == m) {
                        Some(p) => {
                            left.remove(p);
                        }
                        None => right.push(m),
                    }
                }
                let sets = |v: Vec<usize>| v.into_iter().map(|m| lattice.member(m).clone()).collect();
                return Ok(Some(Solution::new(sets(left), sets(right))));
            }
            seen.insert(k, multiset);
        }
    }
    Ok(None)
}

/// All subsets of `n` points. Contains `∅`, so it is only useful for
/// Möbius computations.
pub fn boolean_lattice(n: usize) -> FiniteLattice {
    let members = (0..1usize << n)
        .map(|bits| PointSet::from_points(n, (0..n).filter(|i| bits >> i & 1 == 1)).expect("in range"))
        .collect();
    FiniteLattice::from_members(n, members)
}

/// The Boolean lattice on `1..=n` with an extra point `0` in every member,
/// so that `∅` is not a member and the point closures are `{0}` and
/// `{0, i}`.
pub fn pointed_boolean_lattice(n: usize) -> FiniteLattice {
    let members = (0..1usize << n)
        .map(|bits| {
            PointSet::from_points(n + 1, std::iter::once(0).chain((0..n).filter(|i| bits >> i & 1 == 1).map(|i| i + 1)))
                .expect("in range")
        })
        .collect();
    FiniteLattice::from_members(n + 1, members)
}

/// The lattice of left submodules of `Mat_{e,k}(F_q)`: points are the
/// `e×k` matrices, listed as flat row-major vectors, and each member is
/// the set of matrices with rows in one subspace of `F_q^k`.
pub fn morita_lattice(q: u32, e: usize, k: usize, limits: &Limits) -> Result<FiniteLattice> {
    if e == 0 || k == 0 {
        return Err(Error::Domain("matrix shapes must be positive".into()));
    }
    let field = Field::new(q)?;
    let points = (q as u128).checked_pow((e * k) as u32).unwrap_or(u128::MAX);
    check_bound("lattice points", points, limits.max_lattice_points as u128)?;
    let subspaces: u128 = (0..=k).map(|d| gaussian_binomial(k, d, q)).sum();
    check_bound("lattice members", subspaces, limits.max_codes)?;
    let flat = AmbientSpace::with_field(field, vec![e * k])?;
    let ground = points as usize;
    let mut members = Vec::new();
    for d in 0..=k {
        for v in codes_of_dimension(field, k, d) {
            let rows: Vec<Vec<u32>> = v.codewords().collect();
            let set = std::iter::repeat_n(rows.iter(), e)
                .multi_cartesian_product()
                .map(|m| flat.index_of(&m.into_iter().flatten().copied().collect::<Vec<u32>>()));
            members.push(PointSet::from_points(ground, set)?);
        }
    }
    Ok(FiniteLattice::from_members(ground, members))
}

/// The subspace lattice of `F_q^k` with the vectors as points.
pub fn subspace_lattice(q: u32, k: usize, limits: &Limits) -> Result<FiniteLattice> {
    morita_lattice(q, 1, k, limits)
}

/// Closes `count` uniformly random subsets of `ground` points under
/// intersection.
pub fn random_family(ground: usize, count: usize, rng: &mut impl Rng) -> FiniteLattice {
    let sets: Vec<PointSet> = (0..count)
        .map(|_| PointSet::from_points(ground, (0..ground).filter(|_| rng.gen_bool(0.5))).expect("in range"))
        .collect();
    FiniteLattice::from_family(ground, sets)
}

/// `∏_{i=1}^{e} (q^i + 1)`.
pub fn zeta_formula(q: u32, e: usize) -> u128 {
    (1..=e as u32).map(|i| (q as u128).pow(i) + 1).product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaValue {
    pub value: u64,
    /// Dimension of the subspace behind the minimizing submodule.
    pub top_dimension: usize,
    pub solution: Solution,
}

/// Minimal nontrivial solution length over the submodule lattice of
/// `Mat_{e,k}(F_q)`, minimized over the non-cyclic submodules.
pub fn zeta(q: u32, e: usize, k: usize, limits: &Limits) -> Result<ZetaValue> {
    if k <= e {
        return Err(Error::Domain(format!("Mat_{{{e},{k}}} has no non-cyclic submodule (needs k > e)")));
    }
    let lattice = morita_lattice(q, e, k, limits)?;
    let mu = moebius(&lattice);
    let min = minimal_nontrivial_length(&lattice, &mu)?;
    // |member| = q^{e·d}
    let size = lattice.member(min.top).len();
    let top_dimension = (0..=k).find(|&d| (q as usize).pow((e * d) as u32) == size).expect("member size is a power");
    if top_dimension <= e {
        return Err(Error::Contract("a cyclic submodule is not generated by any single matrix".into()));
    }
    let solution = construct_minimal_solution(&lattice, &mu, min.top)?;
    Ok(ZetaValue {
        value: min.length,
        top_dimension,
        solution,
    })
}

/// Builds a lattice from a generator description: `subspace q k`,
/// `morita q e k`, `boolean n` (the pointed form) or `boolean-plain n`.
pub fn generate(spec: &str, limits: &Limits) -> Result<FiniteLattice> {
    let words: Vec<&str> = spec.split_whitespace().collect();
    let nums = |from: usize, count: usize| -> Result<Vec<usize>> {
        if words.len() != from + count {
            return Err(Error::Parse(format!("`{spec}` expects {count} numeric arguments")));
        }
        words[from..]
            .iter()
            .map(|w| w.parse::<usize>().map_err(|_| Error::Parse(format!("`{w}` is not a number"))))
            .collect()
    };
    match words.first().copied() {
        Some("subspace" | "subspace-lattice") => {
            let a = nums(1, 2)?;
            subspace_lattice(a[0] as u32, a[1], limits)
        }
        Some("morita") => {
            let a = nums(1, 3)?;
            morita_lattice(a[0] as u32, a[1], a[2], limits)
        }
        Some("boolean") => {
            let a = nums(1, 1)?;
            check_bound("lattice points", a[0] as u128 + 1, 20)?;
            Ok(pointed_boolean_lattice(a[0]))
        }
        Some("boolean-plain") => {
            let a = nums(1, 1)?;
            check_bound("lattice points", a[0] as u128, 20)?;
            Ok(boolean_lattice(a[0]))
        }
        _ => Err(Error::Parse(format!("unknown lattice generator `{spec}`"))),
    }
}

/// The three statements about subgroups `A, B, C, D`: `{A, B} = {C, D}`,
/// `1_A + 1_B = 1_C + 1_D`, and `A ∪ B = C ∪ D` with `A ∩ B = C ∩ D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupStatements {
    pub pairs_match: bool,
    pub indicators_match: bool,
    pub union_and_meet_match: bool,
}

impl SubgroupStatements {
    pub fn consistent(&self) -> bool {
        self.pairs_match == self.indicators_match && self.indicators_match == self.union_and_meet_match
    }
}

pub fn subgroup_indicator_equivalence(
    space: &AmbientSpace,
    [a, b, c, d]: [&LinearCode; 4],
    limits: &Limits,
) -> Result<SubgroupStatements> {
    let vectors = space.all_vectors(limits)?;
    let pairs_match = (a == c && b == d) || (a == d && b == c);
    let mut indicators_match = true;
    let mut union_and_meet_match = true;
    for v in &vectors {
        let v = v.as_slice();
        let [ia, ib, ic, id] = [a, b, c, d].map(|s| s.contains(v));
        indicators_match &= u8::from(ia) + u8::from(ib) == u8::from(ic) + u8::from(id);
        union_and_meet_match &= (ia || ib) == (ic || id) && (ia && ib) == (ic && id);
    }
    Ok(SubgroupStatements {
        pairs_match,
        indicators_match,
        union_and_meet_match,
    })
}

/// The solution `((ker ε_i ∩ C), (ker(ε_i ∘ f)))` attached to a map on a
/// code over equal coordinates, with the codewords as points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HammingEquation {
    pub solution: Solution,
    /// Equivalent to `f` preserving Hamming weight.
    pub is_solution: bool,
    /// Equivalent to `f` extending to a Hamming isometry.
    pub is_trivial: bool,
}

pub fn hamming_extension_via_solutions(space: &AmbientSpace, code: &LinearCode, f: &CodeMap) -> Result<HammingEquation> {
    if space.dims().windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Domain(format!("coordinates must share one dimension, got {:?}", space.dims())));
    }
    if code.len() != space.len() {
        return Err(Error::Validation("code does not live in this space".into()));
    }
    let words: Vec<(Vec<u32>, Vec<u32>)> = code.codewords().map(|c| (f.apply(code, &c), c)).collect();
    let ground = words.len();
    let kernel = |i: usize, image: bool| {
        PointSet::from_points(
            ground,
            (0..ground).filter(|&t| {
                let v = if image { &words[t].0 } else { &words[t].1 };
                space.block(v, i).iter().all(|&x| x == 0)
            }),
        )
        .expect("in range")
    };
    let n = space.coordinates();
    let solution = Solution::new(
        (0..n).map(|i| kernel(i, false)).collect(),
        (0..n).map(|i| kernel(i, true)).collect(),
    );
    Ok(HammingEquation {
        is_solution: solution.is_solution(),
        is_trivial: solution.is_trivial(),
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mep::{extend_to_isometry, mep_brute_force, preserves_weight, MepMode};
    use crate::poset::{Poset, WeightFunction};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn limits() -> Limits {
        Limits::default()
    }

    fn set(ground: usize, pts: &[usize]) -> PointSet {
        PointSet::from_points(ground, pts.iter().copied()).unwrap()
    }

    /// μ straight from the defining recursion on pairs, memo-free.
    fn mu_oracle(l: &FiniteLattice, c: usize, d: usize) -> i64 {
        if !l.member(c).is_subset(l.member(d)) {
            return 0;
        }
        if c == d {
            return 1;
        }
        -(0..l.len())
            .filter(|&u| u != c && l.member(c).is_subset(l.member(u)) && l.member(u).is_subset(l.member(d)))
            .map(|u| mu_oracle(l, u, d))
            .sum::<i64>()
    }

    #[test]
    fn validation() {
        assert!(FiniteLattice::new(2, vec![set(2, &[0])]).is_err());
        assert!(FiniteLattice::new(3, vec![set(3, &[0, 1]), set(3, &[1, 2]), set(3, &[0, 1, 2])]).is_err());
        let ok = FiniteLattice::new(3, vec![set(3, &[0, 1, 2]), set(3, &[1]), set(3, &[0, 1])]).unwrap();
        assert_eq!(ok.members()[0], set(3, &[1]));
        assert_eq!(FiniteLattice::new(3, ok.members().to_vec()).unwrap(), ok);
    }

    #[test]
    fn closures() {
        let l = subspace_lattice(2, 2, &limits()).unwrap();
        assert_eq!(l.len(), 5);
        // the point (0,1) has index 1, its line is {0, 1}
        assert_eq!(l.member(l.point_closure(1)), &set(4, &[0, 1]));
        assert_eq!(l.closure(&PointSet::empty(4)), l.bottom());
        for m in 0..l.len() {
            assert_eq!(l.closure(l.member(m)), m);
        }
        assert_eq!(l.non_principal(), vec![l.top()]);
    }

    #[test]
    fn moebius_examples() {
        let chain = FiniteLattice::new(2, vec![set(2, &[0]), set(2, &[0, 1])]).unwrap();
        assert_eq!(moebius(&chain).get(0, 1), -1);
        let b = boolean_lattice(3);
        let mu = moebius(&b);
        for a in 0..b.len() {
            for c in 0..b.len() {
                let expected = if b.member(a).is_subset(b.member(c)) {
                    if (b.member(c).len() - b.member(a).len()).is_multiple_of(2) { 1 } else { -1 }
                } else {
                    0
                };
                assert_eq!(mu.get(a, c), expected);
                assert_eq!(mu.get(a, c), mu_oracle(&b, a, c));
            }
        }
        for q in [2, 3, 5] {
            let l = subspace_lattice(q, 2, &limits()).unwrap();
            assert_eq!(moebius(&l).get(l.bottom(), l.top()), q as i64);
        }
    }

    #[test]
    fn moebius_matches_oracle_on_subspaces() {
        let l = subspace_lattice(2, 3, &limits()).unwrap();
        let mu = moebius(&l);
        for a in 0..l.len() {
            for c in 0..l.len() {
                assert_eq!(mu.get(a, c), mu_oracle(&l, a, c));
            }
        }
    }

    #[test]
    fn indicator_identity_examples() {
        let l = subspace_lattice(2, 2, &limits()).unwrap();
        let mu = moebius(&l);
        let plane = moebius_indicator_identity(&l, &mu, l.top());
        assert!(plane.principal_points.is_empty() && plane.split && plane.consistent());
        let line = moebius_indicator_identity(&l, &mu, l.point_closure(1));
        assert!(!line.principal_points.is_empty() && !line.split && line.consistent());
    }

    #[test]
    fn solution_basics() {
        let a = set(3, &[0, 1]);
        let b = set(3, &[1, 2]);
        let s = Solution::new(vec![a.clone()], vec![a.clone()]);
        assert!(s.is_solution() && s.is_trivial());
        let s = Solution::new(vec![a.clone(), b.clone()], vec![b, a]);
        assert!(s.is_solution() && s.is_trivial());
    }

    #[test]
    fn construction_over_small_subspace_lattices() {
        let l = subspace_lattice(2, 2, &limits()).unwrap();
        let mu = moebius(&l);
        let s = construct_minimal_solution(&l, &mu, l.top()).unwrap();
        // the three lines against the zero space twice plus the plane
        assert_eq!(s.left.len(), 3);
        assert!(s.left.iter().all(|m| m.len() == 2));
        assert_eq!(s.right, vec![set(4, &[0]), set(4, &[0]), PointSet::full(4)]);
        assert!(s.is_solution() && !s.is_trivial());
        let l3 = subspace_lattice(3, 2, &limits()).unwrap();
        let s3 = construct_minimal_solution(&l3, &moebius(&l3), l3.top()).unwrap();
        assert_eq!(s3.length(), 4);
        assert!(s3.is_solution() && !s3.is_trivial());
        assert!(construct_minimal_solution(&l, &mu, l.point_closure(1)).is_err());
    }

    #[test]
    fn minimal_lengths() {
        for (q, n) in [(2, 3), (3, 4), (5, 6)] {
            let l = subspace_lattice(q, 2, &limits()).unwrap();
            assert_eq!(minimal_nontrivial_length(&l, &moebius(&l)).unwrap().length, n);
        }
        let b = pointed_boolean_lattice(2);
        let m = minimal_nontrivial_length(&b, &moebius(&b)).unwrap();
        assert_eq!((m.length, m.top), (2, b.top()));
        let chain = FiniteLattice::new(2, vec![set(2, &[0]), set(2, &[0, 1])]).unwrap();
        assert_eq!(minimal_nontrivial_length(&chain, &moebius(&chain)), Err(Error::AllSolutionsTrivial));
        assert!(minimal_nontrivial_length(&boolean_lattice(2), &moebius(&boolean_lattice(2))).is_err());
    }

    #[test]
    fn exhaustive_search_confirms_minimality() {
        for l in [subspace_lattice(2, 2, &limits()).unwrap(), pointed_boolean_lattice(2)] {
            let n = minimal_nontrivial_length(&l, &moebius(&l)).unwrap().length as usize;
            let found = shortest_nontrivial_solution(&l, SEARCH_MAX_LENGTH).unwrap().unwrap();
            assert_eq!(found.length(), n);
            assert!(found.is_solution() && !found.is_trivial());
            assert!(shortest_nontrivial_solution(&l, n - 1).unwrap().is_none());
        }
        let chain = FiniteLattice::new(2, vec![set(2, &[0]), set(2, &[0, 1])]).unwrap();
        assert_eq!(shortest_nontrivial_solution(&chain, 6).unwrap(), None);
        assert!(shortest_nontrivial_solution(&subspace_lattice(2, 3, &limits()).unwrap(), 3).is_err());
    }

    #[test]
    fn zeta_values() {
        for (q, e, k, z) in [(2, 1, 2, 3), (3, 1, 2, 4), (5, 1, 2, 6), (2, 2, 3, 15), (2, 1, 3, 3)] {
            let v = zeta(q, e, k, &limits()).unwrap();
            assert_eq!(v.value as u128, z);
            assert_eq!(zeta_formula(q, e), z);
            assert_eq!(v.top_dimension, e + 1);
            assert!(v.solution.is_solution() && !v.solution.is_trivial());
            assert_eq!(v.solution.length() as u64, v.value);
        }
        assert!(zeta(2, 2, 2, &limits()).is_err());
    }

    #[test]
    fn morita_cyclic_members_are_point_closures() {
        let l = morita_lattice(2, 2, 3, &limits()).unwrap();
        let lambda = l.non_principal();
        for m in 0..l.len() {
            // |member| = 4^d, so d > 2 exactly when |member| > 16
            assert_eq!(lambda.contains(&m), l.member(m).len() > 16);
        }
    }

    #[test]
    fn generator_specs() {
        assert_eq!(generate("subspace 2 2", &limits()).unwrap().len(), 5);
        assert_eq!(generate("boolean 3", &limits()).unwrap().len(), 8);
        assert!(!generate("boolean 3", &limits()).unwrap().contains_empty());
        assert_eq!(generate("morita 2 2 3", &limits()).unwrap().ground(), 64);
        assert!(matches!(generate("subspace 2", &limits()), Err(Error::Parse(_))));
        assert!(matches!(generate("subspace 2 13", &limits()), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn subgroup_statements_agree_on_the_plane() {
        let s = AmbientSpace::new(2, vec![2]).unwrap();
        let subs: Vec<LinearCode> = (0..=2).flat_map(|d| codes_of_dimension(s.field(), 2, d)).collect();
        let mut some_false = false;
        for quad in itertools::iproduct!(&subs, &subs, &subs, &subs) {
            let st = subgroup_indicator_equivalence(&s, [quad.0, quad.1, quad.2, quad.3], &limits()).unwrap();
            assert!(st.consistent(), "{quad:?}");
            some_false |= !st.pairs_match;
        }
        assert!(some_false);
    }

    #[test]
    fn hamming_equation_matches_extension_search() {
        let anti = Poset::antichain(2);
        let ones = WeightFunction::ones(2);
        for dims in [vec![1, 1], vec![2, 2]] {
            let s = AmbientSpace::new(2, dims).unwrap();
            for code in s.enumerate_codes(&limits()).unwrap() {
                for f in s.hom_enumerate(&code, &limits()).unwrap() {
                    let h = hamming_extension_via_solutions(&s, &code, &f).unwrap();
                    let preserves = preserves_weight(&s, &anti, &ones, &code, &f);
                    assert_eq!(h.is_solution, preserves);
                    if preserves {
                        let extends = extend_to_isometry(&s, &anti, &ones, MepMode::Weight, &code, &f, &limits())
                            .unwrap()
                            .is_some();
                        assert_eq!(h.is_trivial, extends);
                        // two coordinates always give a trivial solution
                        assert!(h.is_trivial);
                    }
                }
            }
        }
        let mixed = AmbientSpace::new(2, vec![1, 2]).unwrap();
        let c = LinearCode::zero(mixed.field(), 3);
        assert!(hamming_extension_via_solutions(&mixed, &c, &CodeMap::identity(&c)).is_err());
    }

    #[test]
    fn three_planes_counterexample_gives_length_three() {
        let s = AmbientSpace::new(2, vec![2, 2, 2]).unwrap();
        let anti = Poset::antichain(3);
        let v = mep_brute_force(&s, &anti, &WeightFunction::ones(3), MepMode::Weight, &limits()).unwrap();
        let cx = v.counterexample.unwrap();
        let h = hamming_extension_via_solutions(&s, &cx.code, &cx.map).unwrap();
        assert!(h.is_solution && !h.is_trivial);
        assert_eq!(h.solution.length(), 3);
    }

    #[test]
    fn random_families_satisfy_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let ground = rng.gen_range(1..=6);
            let count = rng.gen_range(0..6);
            let l = random_family(ground, count, &mut rng);
            assert!(FiniteLattice::new(ground, l.members().to_vec()).is_ok());
            let mu = moebius(&l);
            for y in 0..l.len() {
                assert!(moebius_indicator_identity(&l, &mu, y).consistent());
            }
        }
    }

    fn family() -> impl Strategy<Value = FiniteLattice> {
        (1usize..=5, proptest::collection::vec(any::<u8>(), 0..6)).prop_map(|(ground, raw)| {
            let sets = raw
                .into_iter()
                .map(|bits| PointSet::from_points(ground, (0..ground).filter(|i| bits >> i & 1 == 1)).unwrap());
            FiniteLattice::from_family(ground, sets)
        })
    }

    proptest! {
        #[test]
        fn moebius_inverts_the_zeta_transform(l in family(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g: Vec<i64> = (0..l.len()).map(|_| rng.gen_range(-5..=5)).collect();
            let mu = moebius(&l);
            let l = &l;
            let up = |d: usize| (0..l.len()).filter(move |&e| l.member(d).is_subset(l.member(e)));
            let big: Vec<i64> = (0..l.len()).map(|d| up(d).map(|e| g[e]).sum()).collect();
            for d in 0..l.len() {
                prop_assert_eq!(up(d).map(|e| mu.get(d, e) * big[e]).sum::<i64>(), g[d]);
            }
        }

        #[test]
        fn column_sums_and_mass_split(l in family()) {
            let mu = moebius(&l);
            for c in 1..l.len() {
                let col = mu.column(c);
                prop_assert_eq!(col.iter().map(|&(_, m)| m).sum::<i64>(), 0);
                let pos: i64 = col.iter().filter(|p| p.1 > 0).map(|p| p.1).sum();
                prop_assert_eq!(pos as u64, mu.half_mass(c));
            }
        }

        #[test]
        fn member_solutions_are_balanced(l in family(), picks in proptest::collection::vec(any::<u8>(), 0..6)) {
            prop_assume!(!l.contains_empty());
            if let Some(s) = shortest_nontrivial_solution(&l, 4).ok().flatten() {
                prop_assert_eq!(s.left.len(), s.right.len());
                for m in &picks {
                    let c = l.member(*m as usize % l.len());
                    prop_assert!(s.restrict(c).is_solution());
                }
            }
        }
    }
}
