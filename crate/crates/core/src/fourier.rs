//! Weight partitions of `H`, exact character sums over `Z[ζ_p]`, the dual
//! partition map `l`, Fourier-reflexivity and MacWilliams identities.
//!
//! The character is `x ↦ ζ_p^x`; twisting it by a nonzero scalar is
//! available to audit that verdicts do not depend on that choice.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{check_bound, Result};
use crate::isometry::{vector_classes, WeightSum};
use crate::mep::{condition_report, level_class_bound, mep_brute_force, single_orbit_check, MepMode};
use crate::poset::{Poset, WeightFunction};
use crate::space::{AmbientSpace, LinearCode};
use crate::{Limits, Witnessed};

/// An element of `Z[ζ_p]` in the basis `1, ζ, …, ζ^{p−2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclotomicInteger {
    coeffs: Vec<i64>,
}

impl CyclotomicInteger {
    pub fn zero(p: u32) -> Self {
        CyclotomicInteger {
            coeffs: vec![0; p as usize - 1],
        }
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = n;
        z
    }

    /// `Σ_j counts[j]·ζ^j`, reduced with `ζ^{p−1} = −(1 + … + ζ^{p−2})`.
    pub fn from_power_counts(counts: &[i64]) -> Self {
        let top = counts[counts.len() - 1];
        CyclotomicInteger {
            coeffs: counts[..counts.len() - 1].iter().map(|&c| c - top).collect(),
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        CyclotomicInteger {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }
}

/// Blocks of vector indices, each block sorted and the blocks ordered by
/// their first element, so equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    #[serde(skip)]
    block_of: Vec<usize>,
}

impl Partition {
    /// Groups indices `0..labels.len()` by equal label.
    pub fn from_labels<K: Hash + Eq>(labels: &[K]) -> Self {
        let mut seen: HashMap<&K, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for (i, k) in labels.iter().enumerate() {
            let b = *seen.entry(k).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i);
            block_of.push(b);
        }
        Partition { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index]
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&i| other.block_of[i] == other.block_of[b[0]]))
    }

    /// `(|D ∩ B| : B)` in block order.
    pub fn distribution(&self, space: &AmbientSpace, code: &LinearCode) -> Vec<usize> {
        let mut counts = vec![0; self.blocks.len()];
        for c in code.codewords() {
            counts[self.block_of[space.index_of(&c)]] += 1;
        }
        counts
    }
}

fn check_table(space: &AmbientSpace, limits: &Limits) -> Result<u128> {
    let size = space.size();
    check_bound("vectors", size, limits.max_vectors)?;
    check_bound("character table entries", size * size, limits.max_matrices * 16)?;
    Ok(size)
}

/// `Q(H, P, ω)`: vectors grouped by exact weight.
pub fn weight_partition(space: &AmbientSpace, poset: &Poset, omega: &WeightFunction, limits: &Limits) -> Result<Partition> {
    space.check_poset(poset)?;
    omega.check_domain(poset)?;
    Ok(Partition::from_labels(&vector_classes(space, &WeightSum { poset, omega }, limits)?))
}

/// `Q(H, P̄, ω)`, the weight partition of the dual poset.
pub fn dual_weight_partition(space: &AmbientSpace, poset: &Poset, omega: &WeightFunction, limits: &Limits) -> Result<Partition> {
    weight_partition(space, &poset.dual(), omega, limits)
}

/// `Σ_{β ∈ block} χ(s·⟨α, β⟩)` with `χ(x) = ζ_p^x`.
pub fn character_sum(space: &AmbientSpace, block: &[usize], alpha: &[u32], scalar: u32) -> CyclotomicInteger {
    let field = space.field();
    let mut counts = vec![0i64; field.order() as usize];
    for &b in block {
        let beta = space.vector_at(b);
        counts[field.mul(scalar, space.inner_product(alpha, beta.as_slice())) as usize] += 1;
    }
    CyclotomicInteger::from_power_counts(&counts)
}

/// `l(Γ)` for the character twisted by `scalar`: vectors grouped by their
/// character sums over every block of `Γ`.
pub fn dual_partition_with(space: &AmbientSpace, partition: &Partition, scalar: u32, limits: &Limits) -> Result<Partition> {
    let size = check_table(space, limits)? as usize;
    let labels: Vec<Vec<CyclotomicInteger>> = (0..size)
        .map(|a| {
            let alpha = space.vector_at(a);
            partition
                .blocks()
                .iter()
                .map(|b| character_sum(space, b, alpha.as_slice(), scalar))
                .collect()
        })
        .collect();
    Ok(Partition::from_labels(&labels))
}

pub fn dual_partition(space: &AmbientSpace, partition: &Partition, limits: &Limits) -> Result<Partition> {
    dual_partition_with(space, partition, 1, limits)
}

/// `l(l(Γ)) = Γ`.
pub fn is_fourier_reflexive(space: &AmbientSpace, partition: &Partition, limits: &Limits) -> Result<bool> {
    let once = dual_partition(space, partition, limits)?;
    Ok(&dual_partition(space, &once, limits)? == partition)
}

/// Compares the reflexivity verdict under every twist `x ↦ ζ^{s·x}`;
/// a witness is a scalar whose verdict differs from the untwisted one.
pub fn character_independence(space: &AmbientSpace, partition: &Partition, limits: &Limits) -> Result<Witnessed<u32>> {
    let reference = is_fourier_reflexive(space, partition, limits)?;
    for s in space.field().nonzero().skip(1) {
        let once = dual_partition_with(space, partition, s, limits)?;
        let twice = dual_partition_with(space, &once, s, limits)?;
        if (&twice == partition) != reference {
            return Ok(Witnessed::no(s));
        }
    }
    Ok(Witnessed::yes())
}

/// Every two codes with equal `Q(H, P̄, ω)`-distribution have duals with
/// equal `Q(H, P, ω)`-distribution. Codes are grouped by distribution
/// first; a witness is the first pair in enumeration order that breaks it.
pub fn macwilliams_identity_check(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    limits: &Limits,
) -> Result<Witnessed<(LinearCode, LinearCode)>> {
    let primal = weight_partition(space, poset, omega, limits)?;
    let dual = dual_weight_partition(space, poset, omega, limits)?;
    let mut groups: BTreeMap<Vec<usize>, Vec<(LinearCode, Vec<usize>)>> = BTreeMap::new();
    for code in space.enumerate_codes(limits)? {
        let key = dual.distribution(space, &code);
        let dual_dist = primal.distribution(space, &code.dual());
        groups.entry(key).or_default().push((code, dual_dist));
    }
    let mut witness: Option<(LinearCode, LinearCode)> = None;
    for members in groups.values() {
        let (first, first_dist) = &members[0];
        if let Some((other, _)) = members.iter().find(|(_, d)| d != first_dist) {
            let candidate = (first.clone(), other.clone());
            if witness.as_ref().is_none_or(|w| candidate < *w) {
                witness = Some(candidate);
            }
        }
    }
    Ok(witness.map_or_else(Witnessed::yes, Witnessed::no))
}

/// The seven properties compared for a weighted poset over `F_q`, named by
/// what they state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyAudit {
    /// The extension property for the weight.
    pub mep: bool,
    /// The weight isometry group is transitive on each weight class.
    pub transitive: bool,
    /// Condition D.
    pub condition_d: bool,
    /// `Q(H, P̄, ω) = l(Q(H, P, ω))`.
    pub dual_partition_matches: bool,
    pub macwilliams: bool,
    /// `Q(H, P, ω)` is Fourier-reflexive.
    pub reflexive: bool,
    /// Each level-and-weight class has `k ≡ 1` or at most `q` members.
    pub level_class_bound: bool,
    pub hierarchical: bool,
    pub integer_weights: bool,
    /// `|Q(H, P̄, ω)| = |Q(H, P, ω)|`.
    pub block_counts_match: bool,
    /// Names of the implications or equivalences that failed.
    pub violations: Vec<&'static str>,
}

impl PropertyAudit {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates all seven properties independently and checks the chain
/// mep ⟹ transitive ⟺ condition_d ⟹ dual_partition_matches ⟺ macwilliams
/// ⟹ reflexive, the characterization mep ⟺ condition_d ∧ bound on
/// hierarchical posets, and full equivalence of the middle five when the
/// poset is hierarchical with integer weights or the weight is constant.
pub fn property_audit(space: &AmbientSpace, poset: &Poset, omega: &WeightFunction, limits: &Limits) -> Result<PropertyAudit> {
    let mep = mep_brute_force(space, poset, omega, MepMode::Weight, limits)?.holds;
    let transitive = single_orbit_check(space, poset, omega, limits)?.holds;
    let condition_d = condition_report(space, poset, omega, limits)?.d.holds;
    let primal = weight_partition(space, poset, omega, limits)?;
    let dual = dual_weight_partition(space, poset, omega, limits)?;
    let dual_partition_matches = dual == dual_partition(space, &primal, limits)?;
    let macwilliams = macwilliams_identity_check(space, poset, omega, limits)?.holds;
    let reflexive = is_fourier_reflexive(space, &primal, limits)?;
    let bound = level_class_bound(space, poset, omega);
    let hierarchical = poset.is_hierarchical().holds;
    let integer_weights = omega.is_integer_valued();

    let mut violations = Vec::new();
    let mut require = |ok: bool, name: &'static str| {
        if !ok {
            violations.push(name);
        }
    };
    require(!mep || transitive, "mep => transitive");
    require(transitive == condition_d, "transitive <=> condition_d");
    require(!condition_d || dual_partition_matches, "condition_d => dual_partition_matches");
    require(dual_partition_matches == macwilliams, "dual_partition_matches <=> macwilliams");
    require(!macwilliams || reflexive, "macwilliams => reflexive");
    if hierarchical {
        require(mep == (condition_d && bound), "hierarchical: mep <=> condition_d and bound");
    }
    if (hierarchical && integer_weights) || omega.is_constant() {
        let middle = [transitive, condition_d, dual_partition_matches, macwilliams, reflexive];
        require(middle.iter().all(|&b| b == middle[0]), "middle five are equivalent");
    }
    if omega.is_constant() {
        require(mep == (condition_d && bound), "constant weight: mep <=> condition_d and bound");
    }
    Ok(PropertyAudit {
        mep,
        transitive,
        condition_d,
        dual_partition_matches,
        macwilliams,
        reflexive,
        level_class_bound: bound,
        hierarchical,
        integer_weights,
        block_counts_match: primal.len() == dual.len(),
        violations,
    })
}
