//! Linear isometries of `H` for a support functional, in block form.
//!
//! A structured isometry is a poset automorphism `λ` together with block
//! maps `B_{i→j} : F_q^{k_i} → F_q^{k_j}`. The block `i → λ(i)` is
//! invertible, blocks `i → j` with `j ≺ λ(i)` are arbitrary, and every other
//! block vanishes. Block `i → j` is stored as a `k_j × k_i` matrix acting on
//! column vectors, so `φ(β)_j = Σ_i B_{i→j} β_i`.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{check_bound, Error, Result};
use crate::field::{gl_order, Matrix};
use crate::poset::{LabelSet, Permutation, Poset, WeightFunction};
use crate::space::AmbientSpace;
use crate::{Limits, Rational, Witnessed};

/// A map `ϖ : 2^Ω → Y` into a set with an anti-symmetric relation `≼`.
pub trait SupportFunctional {
    type Value: Clone + Eq + Hash + std::fmt::Debug;

    fn evaluate(&self, set: LabelSet) -> Self::Value;

    /// The relation `a ≼ b` on values.
    fn precedes(&self, a: &Self::Value, b: &Self::Value) -> bool;
}

/// `B ↦ Σ_{i ∈ ⟨B⟩} ω(i)`, ordered by `≤`.
#[derive(Clone, Copy, Debug)]
pub struct WeightSum<'a> {
    pub poset: &'a Poset,
    pub omega: &'a WeightFunction,
}

impl SupportFunctional for WeightSum<'_> {
    type Value = Rational;

    fn evaluate(&self, set: LabelSet) -> Rational {
        self.omega.sum(self.poset.close(set))
    }

    fn precedes(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }
}

/// `B ↦ ⟨B⟩`, ordered by inclusion.
#[derive(Clone, Copy, Debug)]
pub struct PSupport<'a> {
    pub poset: &'a Poset,
}

impl SupportFunctional for PSupport<'_> {
    type Value = LabelSet;

    fn evaluate(&self, set: LabelSet) -> LabelSet {
        self.poset.close(set)
    }

    fn precedes(&self, a: &LabelSet, b: &LabelSet) -> bool {
        a.is_subset(*b)
    }
}

/// The first condition a support functional breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FunctionalViolation {
    /// `ϖ(B) ≠ ϖ(⟨B⟩)`.
    ClosureInvariance { set: LabelSet },
    /// Ideals `I ⊆ J` with `ϖ(I) ⋠ ϖ(J)`.
    Monotonicity { smaller: LabelSet, larger: LabelSet },
    /// An ideal `I ∋ u` with `ϖ(I) = ϖ({u})` but `I ≠ ⟨u⟩`.
    PrincipalDetection { ideal: LabelSet, element: usize },
}

fn tabulate<F: SupportFunctional>(sf: &F, n: usize, limits: &Limits) -> Result<Vec<F::Value>> {
    check_bound(
        "support functional table (ground set size)",
        n as u128,
        limits.max_functional_elements as u128,
    )?;
    Ok((0u32..1 << n).map(|bits| sf.evaluate(LabelSet::from_bits(bits))).collect())
}

/// Replaces each value by a small id, equal ids meaning equal values.
fn class_ids<V: Eq + Hash + Clone>(values: impl IntoIterator<Item = V>) -> Vec<u32> {
    let mut ids: HashMap<V, u32> = HashMap::new();
    values
        .into_iter()
        .map(|v| {
            let next = ids.len() as u32;
            *ids.entry(v).or_insert(next)
        })
        .collect()
}

/// Checks closure invariance, monotonicity on ideals and detection of
/// principal ideals, exhaustively over `2^Ω`.
pub fn check_support_functional<F: SupportFunctional>(
    sf: &F,
    poset: &Poset,
    limits: &Limits,
) -> Result<Witnessed<FunctionalViolation>> {
    let table = tabulate(sf, poset.len(), limits)?;
    let at = |s: LabelSet| &table[s.bits() as usize];
    for bits in 0u32..1 << poset.len() {
        let set = LabelSet::from_bits(bits);
        if at(set) != at(poset.close(set)) {
            return Ok(Witnessed::no(FunctionalViolation::ClosureInvariance { set }));
        }
    }
    let ideals = poset.all_ideals();
    for &i in &ideals {
        for &j in &ideals {
            if i.is_subset(j) && !sf.precedes(at(i), at(j)) {
                return Ok(Witnessed::no(FunctionalViolation::Monotonicity { smaller: i, larger: j }));
            }
        }
    }
    for &ideal in &ideals {
        for u in ideal.iter() {
            if at(ideal) == at(LabelSet::singleton(u)) && ideal != poset.principal_ideal(u) {
                return Ok(Witnessed::no(FunctionalViolation::PrincipalDetection { ideal, element: u }));
            }
        }
    }
    Ok(Witnessed::yes())
}

/// The automorphisms `μ` of `P` with `ϖ(μ[I]) = ϖ(I)` for every `I ⊆ Ω` and
/// `k_{μ(i)} = k_i` for every `i`. Over a field, equal dimension is exactly
/// isomorphism of the coordinate modules.
pub fn admissible_automorphisms<F: SupportFunctional>(
    space: &AmbientSpace,
    poset: &Poset,
    sf: &F,
    limits: &Limits,
) -> Result<Vec<Permutation>> {
    space.check_poset(poset)?;
    let classes = class_ids(tabulate(sf, poset.len(), limits)?);
    let dims = space.dims();
    Ok(poset
        .automorphisms(limits)?
        .into_iter()
        .filter(|mu| (0..dims.len()).all(|i| dims[mu.apply(i)] == dims[i]))
        .filter(|mu| {
            (0u32..1 << poset.len()).all(|bits| {
                let set = LabelSet::from_bits(bits);
                classes[mu.apply_set(set).bits() as usize] == classes[bits as usize]
            })
        })
        .collect())
}

/// Admissible automorphisms for the `(P, ω)`-weight.
pub fn weight_automorphisms(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    limits: &Limits,
) -> Result<Vec<Permutation>> {
    omega.check_domain(poset)?;
    admissible_automorphisms(space, poset, &WeightSum { poset, omega }, limits)
}

/// One block map of a structured isometry.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Block {
    pub source: usize,
    pub target: usize,
    pub matrix: Matrix,
}

/// An automorphism of `H` in block form. Zero strict blocks are not stored,
/// so two values are equal exactly when they are the same map.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Isometry {
    lambda: Permutation,
    blocks: Vec<Block>,
    #[serde(skip)]
    matrix: Matrix,
}

impl Isometry {
    /// Builds an isometry from `λ` and its nonzero blocks keyed by
    /// `(source, target)`. Missing strict blocks are zero.
    pub fn new(
        space: &AmbientSpace,
        poset: &Poset,
        lambda: Permutation,
        blocks: impl IntoIterator<Item = ((usize, usize), Matrix)>,
    ) -> Result<Isometry> {
        space.check_poset(poset)?;
        if !poset.is_automorphism(&lambda) {
            return Err(Error::Validation(format!("{:?} is not an automorphism of the poset", lambda.images())));
        }
        let dims = space.dims();
        let mut map = BTreeMap::new();
        for ((i, j), m) in blocks {
            if i >= dims.len() || j >= dims.len() {
                return Err(Error::Validation(format!("block {i} → {j} is out of range")));
            }
            if m.rows() != dims[j] || m.cols() != dims[i] {
                return Err(Error::Validation(format!(
                    "block {i} → {j} must be {}×{}, got {}×{}",
                    dims[j],
                    dims[i],
                    m.rows(),
                    m.cols()
                )));
            }
            if !poset.leq(j, lambda.apply(i)) && !m.is_zero() {
                return Err(Error::Validation(format!(
                    "block {i} → {j} must vanish since {} is not below {}",
                    poset.label(j),
                    poset.label(lambda.apply(i))
                )));
            }
            if map.insert((i, j), m).is_some() {
                return Err(Error::Validation(format!("block {i} → {j} given twice")));
            }
        }
        for i in 0..dims.len() {
            match map.get(&(i, lambda.apply(i))) {
                Some(m) if m.is_invertible() => {}
                _ => {
                    return Err(Error::Validation(format!(
                        "diagonal block {i} → {} is missing or not invertible",
                        lambda.apply(i)
                    )))
                }
            }
        }
        Ok(Self::assemble(space, lambda, map))
    }

    fn assemble(space: &AmbientSpace, lambda: Permutation, map: BTreeMap<(usize, usize), Matrix>) -> Isometry {
        let n = space.len();
        let mut matrix = Matrix::zeros(space.field(), n, n);
        let mut blocks = Vec::new();
        for ((i, j), m) in map {
            if m.is_zero() && lambda.apply(i) != j {
                continue;
            }
            let (ri, rj) = (space.offset(i), space.offset(j));
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    matrix.set(rj + r, ri + c, m.get(r, c));
                }
            }
            blocks.push(Block {
                source: i,
                target: j,
                matrix: m,
            });
        }
        Isometry { lambda, blocks, matrix }
    }

    pub fn identity(space: &AmbientSpace) -> Isometry {
        let map = (0..space.coordinates())
            .map(|i| ((i, i), Matrix::identity(space.field(), space.dims()[i])))
            .collect();
        Self::assemble(space, Permutation::identity(space.coordinates()), map)
    }

    /// Reads the block form off an `N×N` matrix: `λ(i)` is the top of the
    /// principal ideal generated by the support of the image of `e_{i,1}`.
    pub fn from_matrix(space: &AmbientSpace, poset: &Poset, matrix: &Matrix) -> Result<Isometry> {
        space.check_poset(poset)?;
        let n = space.coordinates();
        if matrix.rows() != space.len() || matrix.cols() != space.len() {
            return Err(Error::Validation("matrix does not act on this space".into()));
        }
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut unit = vec![0; space.dims()[i]];
            unit[0] = 1;
            let e = space.embed(i, &unit).into_vec();
            let closure = space.p_support(&matrix.mul_vec(&e), poset);
            match closure.iter().find(|&v| poset.principal_ideal(v) == closure) {
                Some(v) => images.push(v),
                None => {
                    return Err(Error::NotInGroup {
                        reason: format!("the image of a unit vector of coordinate {} has non-principal support closure", poset.label(i)),
                        witness: e,
                    })
                }
            }
        }
        let lambda = Permutation::new(images).map_err(|_| Error::NotInGroup {
            reason: "unit vectors of two coordinates are sent to the same principal ideal".into(),
            witness: Vec::new(),
        })?;
        let mut map = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let mut m = Matrix::zeros(space.field(), space.dims()[j], space.dims()[i]);
                for (r, row) in space.block_range(j).enumerate() {
                    for (c, col) in space.block_range(i).enumerate() {
                        m.set(r, c, matrix.get(row, col));
                    }
                }
                if m.is_zero() && j != lambda.apply(i) {
                    continue;
                }
                map.insert((i, j), m);
            }
        }
        Isometry::new(space, poset, lambda, map).map_err(|e| Error::NotInGroup {
            reason: format!("block structure fails: {e}"),
            witness: Vec::new(),
        })
    }

    /// The automorphism `ζ(φ)` of the poset.
    pub fn lambda(&self) -> &Permutation {
        &self.lambda
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, source: usize, target: usize) -> Option<&Matrix> {
        self.blocks
            .iter()
            .find(|b| b.source == source && b.target == target)
            .map(|b| &b.matrix)
    }

    /// The `N×N` matrix acting on column vectors.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry, space: &AmbientSpace, poset: &Poset) -> Result<Isometry> {
        Isometry::from_matrix(space, poset, &self.matrix.mul(&other.matrix))
    }

    pub fn inverse(&self, space: &AmbientSpace, poset: &Poset) -> Result<Isometry> {
        let inv = self.matrix.inverse().expect("isometries are invertible");
        Isometry::from_matrix(space, poset, &inv)
    }
}

/// Size of the structured group over the given admissible automorphisms:
/// each `λ` contributes `∏ |GL_{k_i}| · ∏_{j ≺ λ(i)} q^{k_i k_j}`.
pub fn group_order(space: &AmbientSpace, poset: &Poset, group: &[Permutation]) -> u128 {
    let q = space.q() as u128;
    let dims = space.dims();
    group
        .iter()
        .filter(|l| (0..dims.len()).all(|i| dims[l.apply(i)] == dims[i]))
        .map(|l| {
            let diag: u128 = dims.iter().map(|&k| gl_order(space.q(), k)).product();
            let strict: u32 = (0..dims.len())
                .flat_map(|i| (0..dims.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| poset.lt(j, l.apply(i)))
                .map(|(i, j)| (dims[i] * dims[j]) as u32)
                .sum();
            diag.saturating_mul(q.saturating_pow(strict))
        })
        .fold(0u128, u128::saturating_add)
}

/// Every isometry with `λ` in `group`, ordered by `λ`, then the diagonal
/// blocks, then the strict blocks.
pub fn enumerate_isometry_group(
    space: &AmbientSpace,
    poset: &Poset,
    group: &[Permutation],
    limits: &Limits,
) -> Result<Vec<Isometry>> {
    space.check_poset(poset)?;
    check_bound("isometry group", group_order(space, poset, group), limits.max_group)?;
    let field = space.field();
    let dims = space.dims();
    let n = dims.len();
    let mut gl: HashMap<usize, Vec<Matrix>> = HashMap::new();
    for &k in dims {
        gl.entry(k).or_insert_with(|| Matrix::invertible(field, k));
    }
    let mut lambdas = group.to_vec();
    lambdas.sort();
    let mut out = Vec::new();
    for lambda in lambdas {
        if (0..n).any(|i| dims[lambda.apply(i)] != dims[i]) {
            continue;
        }
        let mut slots: Vec<((usize, usize), Vec<Matrix>)> =
            (0..n).map(|i| ((i, lambda.apply(i)), gl[&dims[i]].clone())).collect();
        for i in 0..n {
            for j in 0..n {
                if poset.lt(j, lambda.apply(i)) {
                    slots.push(((i, j), Matrix::all(field, dims[j], dims[i]).collect()));
                }
            }
        }
        let mut choice = vec![0usize; slots.len()];
        'odometer: loop {
            let map = slots
                .iter()
                .zip(&choice)
                .map(|((key, options), &c)| (*key, options[c].clone()))
                .collect();
            out.push(Isometry::assemble(space, lambda.clone(), map));
            // last slot turns fastest
            for pos in (0..slots.len()).rev() {
                choice[pos] += 1;
                if choice[pos] < slots[pos].1.len() {
                    continue 'odometer;
                }
                choice[pos] = 0;
            }
            break;
        }
    }
    Ok(out)
}

/// The weight isometry group `GL_(P,ω)(H)`.
pub fn weight_isometry_group(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    limits: &Limits,
) -> Result<Vec<Isometry>> {
    let group = weight_automorphisms(space, poset, omega, limits)?;
    enumerate_isometry_group(space, poset, &group, limits)
}

/// The P-support group `GL_P(H)`: the elements with `λ = id`.
pub fn p_support_isometry_group(space: &AmbientSpace, poset: &Poset, limits: &Limits) -> Result<Vec<Isometry>> {
    enumerate_isometry_group(space, poset, &[Permutation::identity(poset.len())], limits)
}

/// Class id of `ϖ(supp v)` for every vector of `H`, indexed as in
/// [`AmbientSpace::vector_at`].
pub fn vector_classes<F: SupportFunctional>(space: &AmbientSpace, sf: &F, limits: &Limits) -> Result<Vec<u32>> {
    check_bound("vectors of H", space.size(), limits.max_vectors)?;
    let table = tabulate(sf, space.coordinates(), limits)?;
    let size = space.size() as usize;
    Ok(class_ids(
        (0..size).map(|idx| table[space.support(space.vector_at(idx).as_slice()).bits() as usize].clone()),
    ))
}

/// Every invertible `N×N` matrix preserving `ϖ ∘ supp`, by scanning all
/// `q^{N²}` matrices. Only meant as an oracle for small spaces.
pub fn brute_force_isometry_group<F: SupportFunctional>(
    space: &AmbientSpace,
    sf: &F,
    limits: &Limits,
) -> Result<Vec<Matrix>> {
    let n = space.len();
    let count = (space.q() as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    check_bound("N×N matrices", count, limits.max_matrices)?;
    let classes = vector_classes(space, sf, limits)?;
    let vectors: Vec<Vec<u32>> = (0..classes.len()).map(|i| space.vector_at(i).into_vec()).collect();
    let units: Vec<usize> = (0..n)
        .map(|t| {
            let mut e = vec![0; n];
            e[t] = 1;
            space.index_of(&e)
        })
        .collect();
    let mut out: Vec<Matrix> = Matrix::all(space.field(), n, n)
        .filter(|m| {
            // cheap rejection on the columns before the full scan
            (0..n).all(|t| {
                let col: Vec<u32> = (0..n).map(|r| m.get(r, t)).collect();
                classes[space.index_of(&col)] == classes[units[t]]
            })
        })
        .filter(|m| m.is_invertible())
        .filter(|m| {
            vectors
                .iter()
                .enumerate()
                .all(|(idx, v)| classes[space.index_of(&m.mul_vec(v))] == classes[idx])
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Splits a matrix known only to be linear into `ζ(φ)` and its blocks,
/// after checking that it lies in the group `G` of `ϖ`. Failing checks
/// return [`Error::NotInGroup`] with a witness vector when one exists.
pub fn decompose<F: SupportFunctional>(
    space: &AmbientSpace,
    poset: &Poset,
    sf: &F,
    matrix: &Matrix,
    limits: &Limits,
) -> Result<Isometry> {
    space.check_poset(poset)?;
    if matrix.rows() != space.len() || matrix.cols() != space.len() {
        return Err(Error::Validation("matrix does not act on this space".into()));
    }
    if !matrix.is_invertible() {
        let kernel = matrix.right_kernel();
        return Err(Error::NotInGroup {
            reason: "the map is not injective".into(),
            witness: kernel.row(0).to_vec(),
        });
    }
    let classes = vector_classes(space, sf, limits)?;
    for (idx, &class) in classes.iter().enumerate() {
        let v = space.vector_at(idx).into_vec();
        if classes[space.index_of(&matrix.mul_vec(&v))] != class {
            return Err(Error::NotInGroup {
                reason: "the map changes the support functional".into(),
                witness: v,
            });
        }
    }
    let iso = Isometry::from_matrix(space, poset, matrix)?;
    let admissible = admissible_automorphisms(space, poset, sf, limits)?;
    if !admissible.contains(iso.lambda()) {
        return Err(Error::Contract(format!(
            "recovered automorphism {:?} is not admissible",
            iso.lambda().images()
        )));
    }
    Ok(iso)
}

/// The three equivalent descriptions of "`φ` is an automorphism of `H`
/// transporting ideals along `λ`", evaluated independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransportStatements {
    /// `φ` invertible and `⟨supp φ(α)⟩ = λ[⟨supp α⟩]` for every `α`.
    pub closures_transported: bool,
    /// `φ` invertible and every nonzero `η_i(a)` goes to a vector whose
    /// support closure is `⟨λ(i)⟩`.
    pub units_principal: bool,
    /// Blocks `i → j` vanish unless `j ≼ λ(i)`, and `i → λ(i)` is invertible.
    pub block_triangular: bool,
}

pub fn transport_statements(
    space: &AmbientSpace,
    poset: &Poset,
    matrix: &Matrix,
    lambda: &Permutation,
    limits: &Limits,
) -> Result<TransportStatements> {
    space.check_poset(poset)?;
    let invertible = matrix.is_invertible();
    let vectors = space.all_vectors(limits)?;
    let closures_transported = invertible
        && vectors.iter().all(|v| {
            space.p_support(&matrix.mul_vec(v.as_slice()), poset) == lambda.apply_set(space.p_support(v.as_slice(), poset))
        });
    let units_principal = invertible
        && vectors.iter().all(|v| {
            let s = space.support(v.as_slice());
            s.len() != 1 || {
                let i = s.iter().next().unwrap();
                space.p_support(&matrix.mul_vec(v.as_slice()), poset) == poset.principal_ideal(lambda.apply(i))
            }
        });
    let dims = space.dims();
    let block = |i: usize, j: usize| {
        let mut m = Matrix::zeros(space.field(), dims[j], dims[i]);
        for (r, row) in space.block_range(j).enumerate() {
            for (c, col) in space.block_range(i).enumerate() {
                m.set(r, c, matrix.get(row, col));
            }
        }
        m
    };
    let n = dims.len();
    let block_triangular = (0..n).all(|i| {
        (0..n).all(|j| poset.leq(j, lambda.apply(i)) || block(i, j).is_zero())
            && dims[i] == dims[lambda.apply(i)]
            && block(i, lambda.apply(i)).is_invertible()
    });
    Ok(TransportStatements {
        closures_transported,
        units_principal,
        block_triangular,
    })
}
