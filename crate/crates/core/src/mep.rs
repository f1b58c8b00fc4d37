//! The MacWilliams extension property: exhaustive verdicts, closed-form
//! predicates, the structural conditions behind them, and the level-wise
//! canonical form of codes over hierarchical posets.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Matrix;
use crate::isometry::{
    p_support_isometry_group, vector_classes, weight_isometry_group, Isometry, PSupport, WeightSum,
};
use crate::poset::{LabelSet, Poset, WeightFunction};
use crate::space::{AmbientSpace, CodeMap, CodeVector, LinearCode};
use crate::{Limits, Witnessed};

/// Which invariant maps must preserve, and which group must extend them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MepMode {
    /// `(P, ω)`-weight, extended by `GL_(P,ω)(H)`.
    Weight,
    /// P-support, extended by `GL_P(H)`.
    PSupport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictSource {
    BruteForce,
    Predicate,
}

/// A code with an invariant-preserving map that no group element extends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub code: LinearCode,
    pub map: CodeMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MepVerdict {
    pub holds: bool,
    pub source: VerdictSource,
    /// Present exactly when a brute-force verdict fails.
    pub counterexample: Option<Counterexample>,
    pub trace: Vec<TraceEntry>,
    pub codes_checked: usize,
    pub maps_checked: usize,
}

impl MepVerdict {
    fn predicate(trace: Vec<TraceEntry>) -> Self {
        MepVerdict {
            holds: trace.iter().all(|t| t.holds),
            source: VerdictSource::Predicate,
            counterexample: None,
            trace,
            codes_checked: 0,
            maps_checked: 0,
        }
    }
}

fn trace(name: &'static str, holds: bool) -> TraceEntry {
    TraceEntry { name, holds }
}

fn mode_classes(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    mode: MepMode,
    limits: &Limits,
) -> Result<Vec<u32>> {
    space.check_poset(poset)?;
    omega.check_domain(poset)?;
    match mode {
        MepMode::Weight => vector_classes(space, &WeightSum { poset, omega }, limits),
        MepMode::PSupport => vector_classes(space, &PSupport { poset }, limits),
    }
}

fn mode_group(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    mode: MepMode,
    limits: &Limits,
) -> Result<Vec<Isometry>> {
    match mode {
        MepMode::Weight => weight_isometry_group(space, poset, omega, limits),
        MepMode::PSupport => p_support_isometry_group(space, poset, limits),
    }
}

pub fn preserves_weight(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    code: &LinearCode,
    f: &CodeMap,
) -> bool {
    code.codewords().all(|c| {
        let img = f.apply(code, &c);
        omega.sum(space.p_support(&img, poset)) == omega.sum(space.p_support(&c, poset))
    })
}

pub fn preserves_p_support(space: &AmbientSpace, poset: &Poset, code: &LinearCode, f: &CodeMap) -> bool {
    code.codewords()
        .all(|c| space.p_support(&f.apply(code, &c), poset) == space.p_support(&c, poset))
}

/// Searches the group of the mode for an element agreeing with `f` on the
/// basis of `code`; the element found is replayed on every codeword.
pub fn extend_to_isometry(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    mode: MepMode,
    code: &LinearCode,
    f: &CodeMap,
    limits: &Limits,
) -> Result<Option<Isometry>> {
    let group = mode_group(space, poset, omega, mode, limits)?;
    let found = group
        .into_iter()
        .find(|g| code.basis_rows().zip(f.images.row_iter()).all(|(c, y)| g.apply(c) == y));
    if let Some(g) = &found {
        if !code.codewords().all(|c| g.apply(&c) == f.apply(code, &c)) {
            return Err(Error::Contract("extension disagrees with the map off the basis".into()));
        }
    }
    Ok(found)
}

/// Enumerates the invariant-preserving maps on one code, basis image by
/// basis image, pruning on every new combination of the chosen images.
struct MapSearch<'a> {
    space: &'a AmbientSpace,
    classes: &'a [u32],
    basis: Vec<Vec<u32>>,
}

impl MapSearch<'_> {
    /// Calls `visit` with each preserving map's basis image indices, in
    /// lexicographic order; stops early when `visit` returns `false`.
    fn run(&self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let n = self.space.len();
        let zero = vec![0u32; n];
        let mut chosen = Vec::with_capacity(self.basis.len());
        self.extend(&mut chosen, vec![(zero.clone(), zero)], visit);
    }

    fn extend(
        &self,
        chosen: &mut Vec<usize>,
        spans: Vec<(Vec<u32>, Vec<u32>)>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let t = chosen.len();
        if t == self.basis.len() {
            return visit(chosen);
        }
        let field = self.space.field();
        let size = self.classes.len();
        let c = &self.basis[t];
        for y_idx in 0..size {
            let y = self.space.vector_at(y_idx).into_vec();
            let mut next = Vec::with_capacity(spans.len() * field.order() as usize);
            let ok = field.nonzero().all(|a| {
                spans.iter().all(|(s, i)| {
                    let s2 = field.axpy(s, a, c);
                    let i2 = field.axpy(i, a, &y);
                    let same = self.classes[self.space.index_of(&s2)] == self.classes[self.space.index_of(&i2)];
                    if same {
                        next.push((s2, i2));
                    }
                    same
                })
            });
            if !ok {
                continue;
            }
            let mut grown = spans.clone();
            grown.extend(next);
            chosen.push(y_idx);
            let keep_going = self.extend(chosen, grown, visit);
            chosen.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Decides the extension property by checking every code and every
/// preserving map, codes by dimension then RREF. The first failure is the
/// minimal counterexample in that order.
pub fn mep_brute_force(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    mode: MepMode,
    limits: &Limits,
) -> Result<MepVerdict> {
    let classes = mode_classes(space, poset, omega, mode, limits)?;
    let group: Vec<Matrix> = mode_group(space, poset, omega, mode, limits)?
        .into_iter()
        .map(|g| g.matrix().clone())
        .collect();
    let codes = space.enumerate_codes(limits)?;
    let mut maps_checked = 0usize;
    let mut codes_checked = 0usize;
    for code in codes {
        codes_checked += 1;
        let basis: Vec<Vec<u32>> = code.basis_rows().map(<[u32]>::to_vec).collect();
        let extendable: HashSet<Vec<usize>> = group
            .iter()
            .map(|g| basis.iter().map(|c| space.index_of(&g.mul_vec(c))).collect())
            .collect();
        let search = MapSearch {
            space,
            classes: &classes,
            basis,
        };
        let mut failure: Option<Vec<usize>> = None;
        search.run(&mut |images| {
            maps_checked += 1;
            if !extendable.contains(images) {
                failure = Some(images.to_vec());
                return false;
            }
            true
        });
        if let Some(images) = failure {
            let rows: Vec<Vec<u32>> = images.iter().map(|&i| space.vector_at(i).into_vec()).collect();
            let map = CodeMap::from_images(&code, &rows)?;
            if !map.is_injective() {
                return Err(Error::Contract("a preserving map is not injective".into()));
            }
            return Ok(MepVerdict {
                holds: false,
                source: VerdictSource::BruteForce,
                counterexample: Some(Counterexample { code, map }),
                trace: vec![trace("every preserving map extends", false)],
                codes_checked,
                maps_checked,
            });
        }
    }
    Ok(MepVerdict {
        holds: true,
        source: VerdictSource::BruteForce,
        counterexample: None,
        trace: vec![trace("every preserving map extends", true)],
        codes_checked,
        maps_checked,
    })
}

/// Replays a counterexample: the map preserves the invariant and no group
/// element restricts to it.
pub fn replay_counterexample(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    mode: MepMode,
    cx: &Counterexample,
    limits: &Limits,
) -> Result<bool> {
    let preserves = match mode {
        MepMode::Weight => preserves_weight(space, poset, omega, &cx.code, &cx.map),
        MepMode::PSupport => preserves_p_support(space, poset, &cx.code, &cx.map),
    };
    Ok(preserves && extend_to_isometry(space, poset, omega, mode, &cx.code, &cx.map, limits)?.is_none())
}

/// For each level and each weight value on it, the coordinates carrying
/// that value: the classes the level-wise bound is stated over.
fn level_weight_classes(poset: &Poset, omega: &WeightFunction) -> Vec<LabelSet> {
    let mut out = Vec::new();
    for level in poset.level_sets() {
        let mut by_value: BTreeMap<crate::Rational, LabelSet> = BTreeMap::new();
        for i in level.iter() {
            by_value.entry(omega.get(i)).or_default().insert(i);
        }
        out.extend(by_value.into_values());
    }
    out
}

/// Each level-and-weight class either has all `k_i = 1` or has at most `q`
/// coordinates.
pub fn level_class_bound(space: &AmbientSpace, poset: &Poset, omega: &WeightFunction) -> bool {
    level_weight_classes(poset, omega)
        .iter()
        .all(|class| class.iter().all(|i| space.dims()[i] == 1) || class.len() as u32 <= space.q())
}

/// The closed-form verdict. Hierarchical posets use Condition D with the
/// level-class bound; constant weights reduce to the P-weight and use
/// Condition E with the same bound; anything else has no closed form.
pub fn mep_predicate(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    limits: &Limits,
) -> Result<MepVerdict> {
    space.check_poset(poset)?;
    omega.check_domain(poset)?;
    let hierarchical = poset.is_hierarchical().holds;
    let bound = level_class_bound(space, poset, omega);
    if hierarchical {
        let report = condition_report(space, poset, omega, limits)?;
        Ok(MepVerdict::predicate(vec![
            trace("hierarchical", true),
            trace("condition_d", report.d.holds),
            trace("level_class_bound", bound),
        ]))
    } else if omega.is_constant() {
        let report = condition_report(space, poset, omega, limits)?;
        Ok(MepVerdict::predicate(vec![
            trace("condition_e", report.e.holds),
            trace("level_class_bound", bound),
        ]))
    } else {
        Err(Error::PredicateUnavailable(
            "no closed form for non-hierarchical posets with non-constant weights".into(),
        ))
    }
}

/// Over a field every coordinate module is injective and every injective
/// partial map of a coordinate extends, so the P-support property always
/// holds.
pub fn mep_p_support_predicate(space: &AmbientSpace, poset: &Poset) -> Result<MepVerdict> {
    space.check_poset(poset)?;
    Ok(MepVerdict::predicate(vec![
        trace("condition_a", true),
        trace("condition_b", true),
    ]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionWitness {
    /// Ideals of equal weight not related by an admissible automorphism.
    Udp { first: LabelSet, second: LabelSet },
    /// `lower` sits on a lower level than `upper` without lying below it.
    NotHierarchical { lower: usize, upper: usize },
    /// Coordinates that should carry isomorphic modules but do not.
    Dimensions { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionEntry {
    pub holds: bool,
    /// True when the value follows from working over a field and is not
    /// computed from the instance.
    pub by_instantiation: bool,
    pub witness: Option<ConditionWitness>,
}

impl ConditionEntry {
    fn computed(holds: bool, witness: Option<ConditionWitness>) -> Self {
        ConditionEntry {
            holds,
            by_instantiation: false,
            witness,
        }
    }

    fn instantiated() -> Self {
        ConditionEntry {
            holds: true,
            by_instantiation: true,
            witness: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// Coordinate modules are strong pseudo-injective.
    pub a: ConditionEntry,
    /// `H_k` is `H_l`-injective for `k ≺ l`.
    pub b: ConditionEntry,
    /// A common nonzero submodule exists in every coordinate.
    pub c: ConditionEntry,
    /// UDP, and equal level with equal weight forces equal dimension.
    pub d: ConditionEntry,
    /// Hierarchical, and equal level forces equal dimension.
    pub e: ConditionEntry,
}

fn dimension_clash(space: &AmbientSpace, poset: &Poset, same_class: impl Fn(usize, usize) -> bool) -> Option<ConditionWitness> {
    let n = poset.len();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .find(|&(u, v)| poset.levels()[u] == poset.levels()[v] && same_class(u, v) && space.dims()[u] != space.dims()[v])
        .map(|(first, second)| ConditionWitness::Dimensions { first, second })
}

pub fn condition_report(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    limits: &Limits,
) -> Result<ConditionReport> {
    space.check_poset(poset)?;
    omega.check_domain(poset)?;
    let udp = poset.udp_check(omega, limits)?;
    let d = match udp.witness {
        Some((first, second)) => ConditionEntry::computed(false, Some(ConditionWitness::Udp { first, second })),
        None => {
            let clash = dimension_clash(space, poset, |u, v| omega.get(u) == omega.get(v));
            ConditionEntry::computed(clash.is_none(), clash)
        }
    };
    let e = match poset.is_hierarchical().witness {
        Some((lower, upper)) => ConditionEntry::computed(false, Some(ConditionWitness::NotHierarchical { lower, upper })),
        None => {
            let clash = dimension_clash(space, poset, |_, _| true);
            ConditionEntry::computed(clash.is_none(), clash)
        }
    };
    Ok(ConditionReport {
        a: ConditionEntry::instantiated(),
        b: ConditionEntry::instantiated(),
        c: ConditionEntry::computed(space.dims().iter().all(|&k| k >= 1), None),
        d,
        e,
    })
}

/// Whether the weight isometry group is transitive on every weight class.
/// Over a field `wt(aγ) = wt(γ)` for `a ≠ 0`, so this is also the version
/// quantified over the cyclic codes `F_q γ`.
pub fn single_orbit_check(
    space: &AmbientSpace,
    poset: &Poset,
    omega: &WeightFunction,
    limits: &Limits,
) -> Result<Witnessed<(CodeVector, CodeVector)>> {
    let classes = mode_classes(space, poset, omega, MepMode::Weight, limits)?;
    let group = weight_isometry_group(space, poset, omega, limits)?;
    let size = classes.len();
    let mut orbit = vec![usize::MAX; size];
    for start in 0..size {
        if orbit[start] != usize::MAX {
            continue;
        }
        let v = space.vector_at(start).into_vec();
        for g in &group {
            orbit[space.index_of(&g.apply(&v))] = start;
        }
    }
    let mut first_of_class: BTreeMap<u32, usize> = BTreeMap::new();
    for idx in 0..size {
        let rep = *first_of_class.entry(classes[idx]).or_insert(idx);
        if orbit[idx] != orbit[rep] {
            return Ok(Witnessed::no((space.vector_at(rep), space.vector_at(idx))));
        }
    }
    Ok(Witnessed::yes())
}

/// `φ ∈ GL_P(H)` with `φ[C] = B_1 ⊕ … ⊕ B_m`, `B_j ⊆ δ(W_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub phi: Isometry,
    /// One code per level, lowest level first.
    pub levels: Vec<LinearCode>,
}

/// Flat positions of the coordinates in `set`.
fn positions(space: &AmbientSpace, set: LabelSet) -> Vec<usize> {
    set.iter().flat_map(|i| space.block_range(i)).collect()
}

fn restrict(v: &[u32], keep: &[usize]) -> Vec<u32> {
    let mut out = vec![0; v.len()];
    for &t in keep {
        out[t] = v[t];
    }
    out
}

/// Builds the canonical form level by level from the top: split `C` into
/// `D = C ∩ δ(W_{<r})` and a complement `L`, then shear the top-level part
/// of `L` free of its lower part with an element of `GL_P(H)` that fixes
/// `D` pointwise, and recurse on `D`.
pub fn canonical_decomposition(space: &AmbientSpace, poset: &Poset, code: &LinearCode) -> Result<CanonicalForm> {
    space.check_poset(poset)?;
    if let Some((u, v)) = poset.is_hierarchical().witness {
        return Err(Error::Validation(format!(
            "canonical form needs a hierarchical poset; {} and {} violate it",
            poset.label(u),
            poset.label(v)
        )));
    }
    if code.len() != space.len() {
        return Err(Error::Validation("code does not live in this space".into()));
    }
    let field = space.field();
    let n = space.len();
    let levels = poset.level_sets();
    let mut phi = Matrix::identity(field, n);
    let mut current = code.clone();
    let mut parts = vec![LinearCode::zero(field, n); levels.len()];
    for r in (0..levels.len()).rev() {
        let below = levels[..r].iter().fold(LabelSet::EMPTY, |acc, &w| acc.union(w));
        let lower = space.delta_subspace(below);
        let d = current.intersection(&lower);
        // complement of D inside the current code
        let mut span = d.clone();
        let mut complement = Vec::new();
        for row in current.basis_rows() {
            let grown = span.sum(&LinearCode::from_generators(field, n, &[row.to_vec()]));
            if grown.dim() > span.dim() {
                complement.push(row.to_vec());
                span = grown;
            }
        }
        let top = positions(space, levels[r]);
        let low = positions(space, below);
        let tops: Vec<Vec<u32>> = complement.iter().map(|b| restrict(b, &top)).collect();
        let lows: Vec<Vec<u32>> = complement.iter().map(|b| restrict(b, &low)).collect();
        parts[r] = LinearCode::from_generators(field, n, &tops);
        // σ = I − Λ with Λ(β|top) = β|low on the complement, zero on the
        // unit vectors completing a basis of δ(W_r)
        let mut domain = tops.clone();
        let mut targets = lows;
        let mut rank_span = LinearCode::from_generators(field, n, &domain);
        for &t in &top {
            let mut e = vec![0; n];
            e[t] = 1;
            let grown = rank_span.sum(&LinearCode::from_generators(field, n, &[e.clone()]));
            if grown.dim() > rank_span.dim() {
                rank_span = grown;
                domain.push(e);
                targets.push(vec![0; n]);
            }
        }
        let k = top.len();
        let mut a = Matrix::zeros(field, k, k);
        let mut b = Matrix::zeros(field, n, k);
        for (col, (dv, tv)) in domain.iter().zip(&targets).enumerate() {
            for (row, &t) in top.iter().enumerate() {
                a.set(row, col, dv[t]);
            }
            for (row, &x) in tv.iter().enumerate() {
                b.set(row, col, x);
            }
        }
        let lambda = b.mul(&a.inverse().expect("completed basis is invertible"));
        let mut sigma = Matrix::identity(field, n);
        for (c, &t) in top.iter().enumerate() {
            for row in 0..n {
                sigma.set(row, t, field.sub(sigma.get(row, t), lambda.get(row, c)));
            }
        }
        phi = sigma.mul(&phi);
        current = d;
    }
    let phi = Isometry::from_matrix(space, poset, &phi)?;
    if !phi.lambda().is_identity() {
        return Err(Error::Contract("canonical form left GL_P(H)".into()));
    }
    Ok(CanonicalForm { phi, levels: parts })
}

/// Independent replay of a canonical form: `φ` preserves P-support on all
/// of `H`, every `B_j` lives on level `j`, the sum is direct, and it equals
/// `φ[C]`.
pub fn verify_canonical_form(
    space: &AmbientSpace,
    poset: &Poset,
    code: &LinearCode,
    form: &CanonicalForm,
    limits: &Limits,
) -> Result<bool> {
    let in_group = space
        .all_vectors(limits)?
        .iter()
        .all(|v| space.p_support(&form.phi.apply(v.as_slice()), poset) == space.p_support(v.as_slice(), poset));
    let levels = poset.level_sets();
    let placed = form
        .levels
        .iter()
        .zip(&levels)
        .all(|(b, &w)| b.support(space).is_subset(w));
    let total = form
        .levels
        .iter()
        .fold(LinearCode::zero(space.field(), space.len()), |acc, b| acc.sum(b));
    let direct = total.dim() == form.levels.iter().map(LinearCode::dim).sum::<usize>();
    let image = code.image(form.phi.matrix());
    Ok(in_group && placed && direct && total == image && total.dim() == code.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::all_labeled_posets;
    use crate::Rational;

    fn limits() -> Limits {
        Limits::default()
    }

    fn v_poset() -> Poset {
        // a < b, c isolated
        Poset::from_covers(vec!["a".into(), "b".into(), "c".into()], &[(0, 1)]).unwrap()
    }

    #[test]
    fn preservation_examples() {
        let s = AmbientSpace::new(2, vec![1, 1]).unwrap();
        let p = Poset::antichain(2);
        let ones = WeightFunction::ones(2);
        let code = LinearCode::from_generators(s.field(), 2, &[vec![1, 0]]);
        let id = CodeMap::identity(&code);
        assert!(preserves_weight(&s, &p, &ones, &code, &id));
        assert!(preserves_p_support(&s, &p, &code, &id));
        let zero = CodeMap::from_images(&code, &[vec![0, 0]]).unwrap();
        assert!(!preserves_weight(&s, &p, &ones, &code, &zero));
        let ext = extend_to_isometry(&s, &p, &ones, MepMode::Weight, &code, &id, &limits()).unwrap().unwrap();
        assert_eq!(ext, Isometry::identity(&s));
    }

    #[test]
    fn powers_of_two_preservation_is_p_support_preservation() {
        for p in all_labeled_posets(3) {
            let s = AmbientSpace::new(2, vec![1, 1, 1]).unwrap();
            let omega = WeightFunction::powers_of_two(&p);
            for code in s.enumerate_codes(&limits()).unwrap().iter().filter(|c| c.dim() <= 1) {
                for f in s.hom_enumerate(code, &limits()).unwrap() {
                    assert_eq!(
                        preserves_weight(&s, &p, &omega, code, &f),
                        preserves_p_support(&s, &p, code, &f)
                    );
                }
            }
        }
    }

    /// Every map of every code, filtered by the definition; the pruned
    /// search must list exactly these.
    #[test]
    fn pruned_search_matches_hom_filter() {
        let s = AmbientSpace::new(2, vec![1, 2]).unwrap();
        let p = Poset::chain(2);
        let ones = WeightFunction::ones(2);
        let classes = mode_classes(&s, &p, &ones, MepMode::Weight, &limits()).unwrap();
        for code in s.enumerate_codes(&limits()).unwrap() {
            let expected: Vec<Vec<usize>> = s
                .hom_enumerate(&code, &limits())
                .unwrap()
                .filter(|f| preserves_weight(&s, &p, &ones, &code, f))
                .map(|f| f.images.row_iter().map(|r| s.index_of(r)).collect())
                .collect();
            let search = MapSearch {
                space: &s,
                classes: &classes,
                basis: code.basis_rows().map(<[u32]>::to_vec).collect(),
            };
            let mut found = Vec::new();
            search.run(&mut |imgs| {
                found.push(imgs.to_vec());
                true
            });
            assert_eq!(found, expected);
        }
    }

    #[test]
    fn brute_force_examples() {
        let one = AmbientSpace::new(3, vec![2]).unwrap();
        let v = mep_brute_force(&one, &Poset::chain(1), &WeightFunction::ones(1), MepMode::Weight, &limits()).unwrap();
        assert!(v.holds);
        for p in all_labeled_posets(2) {
            for dims in [vec![1, 1], vec![1, 2], vec![2, 2]] {
                let s = AmbientSpace::new(2, dims).unwrap();
                let v = mep_brute_force(&s, &p, &WeightFunction::ones(2), MepMode::Weight, &limits()).unwrap();
                let shape_ok = p.is_hierarchical().holds
                    && condition_report(&s, &p, &WeightFunction::ones(2), &limits()).unwrap().e.holds;
                assert_eq!(v.holds, shape_ok, "{p:?} {:?}", s.dims());
            }
        }
    }

    #[test]
    fn counterexample_replays() {
        let s = AmbientSpace::new(2, vec![1, 1, 1]).unwrap();
        let p = v_poset();
        let ones = WeightFunction::ones(3);
        let v = mep_brute_force(&s, &p, &ones, MepMode::Weight, &limits()).unwrap();
        assert!(!v.holds);
        let cx = v.counterexample.unwrap();
        assert!(cx.map.is_injective());
        assert!(replay_counterexample(&s, &p, &ones, MepMode::Weight, &cx, &limits()).unwrap());
    }

    #[test]
    fn p_support_property_always_holds() {
        for n in 1..=3 {
            for p in all_labeled_posets(n) {
                let s = AmbientSpace::new(2, vec![1; n]).unwrap();
                let v = mep_brute_force(&s, &p, &WeightFunction::ones(n), MepMode::PSupport, &limits()).unwrap();
                assert!(v.holds);
                assert!(mep_p_support_predicate(&s, &p).unwrap().holds);
            }
        }
        let s = AmbientSpace::new(3, vec![1, 2]).unwrap();
        assert!(mep_brute_force(&s, &Poset::chain(2), &WeightFunction::ones(2), MepMode::PSupport, &limits()).unwrap().holds);
    }

    #[test]
    fn predicate_examples() {
        let anti = Poset::antichain(3);
        let s = AmbientSpace::new(2, vec![2, 2, 2]).unwrap();
        let v = mep_predicate(&s, &anti, &WeightFunction::ones(3), &limits()).unwrap();
        assert!(!v.holds);
        assert!(v.trace.iter().any(|t| t.name == "level_class_bound" && !t.holds));
        let s2 = AmbientSpace::new(2, vec![2, 2]).unwrap();
        assert!(mep_predicate(&s2, &Poset::antichain(2), &WeightFunction::ones(2), &limits()).unwrap().holds);
        let chain = Poset::chain(3);
        let mixed = AmbientSpace::new(2, vec![1, 3, 2]).unwrap();
        assert!(mep_predicate(&mixed, &chain, &WeightFunction::from_integers(&[1, 5, 2]).unwrap(), &limits()).unwrap().holds);
        let omega = WeightFunction::from_integers(&[1, 2, 3]).unwrap();
        assert!(matches!(
            mep_predicate(&AmbientSpace::new(2, vec![1, 1, 1]).unwrap(), &v_poset(), &omega, &limits()),
            Err(Error::PredicateUnavailable(_))
        ));
    }

    #[test]
    fn brute_force_agrees_with_predicate() {
        let weights = |p: &Poset, n: usize| {
            let mut w = vec![WeightFunction::ones(n), WeightFunction::powers_of_two(p)];
            if n == 3 {
                w.push(WeightFunction::new(vec![1.into(), Rational::new(3, 2), 1.into()]).unwrap());
                w.push(WeightFunction::from_integers(&[2, 1, 1]).unwrap());
            }
            w
        };
        for n in 1..=3 {
            for p in all_labeled_posets(n) {
                for dims in [vec![1; n], (0..n).map(|i| 1 + i % 2).collect::<Vec<_>>()] {
                    if dims.iter().sum::<usize>() > 4 {
                        continue;
                    }
                    let s = AmbientSpace::new(2, dims).unwrap();
                    for omega in weights(&p, n) {
                        let brute = mep_brute_force(&s, &p, &omega, MepMode::Weight, &limits()).unwrap();
                        match mep_predicate(&s, &p, &omega, &limits()) {
                            Ok(pred) => assert_eq!(brute.holds, pred.holds, "{p:?} {omega:?} {:?}", s.dims()),
                            Err(Error::PredicateUnavailable(_)) => {}
                            Err(e) => panic!("{e}"),
                        }
                        // necessary conditions, as implications only
                        let orbit = single_orbit_check(&s, &p, &omega, &limits()).unwrap().holds;
                        let d = condition_report(&s, &p, &omega, &limits()).unwrap().d.holds;
                        assert!(!brute.holds || orbit);
                        assert!(!orbit || d);
                        if let Some(cx) = &brute.counterexample {
                            assert!(replay_counterexample(&s, &p, &omega, MepMode::Weight, cx, &limits()).unwrap());
                        }
                    }
                }
            }
        }
    }

    /// For an antichain, the property splits into the UDP plus the Hamming
    /// property on each class of equal weight, the latter decided here by
    /// brute force on the class alone.
    #[test]
    fn antichain_splits_by_weight_class() {
        let omegas = [vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 3], vec![2, 1, 1]];
        for dims in [vec![1, 1, 1], vec![1, 1, 2], vec![2, 1, 1], vec![1, 2, 1]] {
            let s = AmbientSpace::new(2, dims.clone()).unwrap();
            let anti = Poset::antichain(3);
            for w in &omegas {
                let omega = WeightFunction::from_integers(w).unwrap();
                let whole = mep_brute_force(&s, &anti, &omega, MepMode::Weight, &limits()).unwrap().holds;
                let udp = anti.udp_check(&omega, &limits()).unwrap().holds;
                let mut per_class = true;
                let mut values: Vec<i64> = w.clone();
                values.sort();
                values.dedup();
                for b in values {
                    let members: Vec<usize> = (0..3).filter(|&i| w[i] == b).collect();
                    let sub = AmbientSpace::new(2, members.iter().map(|&i| dims[i]).collect()).unwrap();
                    let m = members.len();
                    per_class &= mep_brute_force(&sub, &Poset::antichain(m), &WeightFunction::ones(m), MepMode::Weight, &limits())
                        .unwrap()
                        .holds;
                }
                assert_eq!(whole, udp && per_class, "dims {dims:?} omega {w:?}");
            }
        }
    }

    #[test]
    fn condition_report_examples() {
        let chain = Poset::chain(3);
        let s = AmbientSpace::new(2, vec![1, 2, 3]).unwrap();
        let r = condition_report(&s, &chain, &WeightFunction::ones(3), &limits()).unwrap();
        assert!(r.a.by_instantiation && r.b.by_instantiation);
        assert!(r.c.holds && r.d.holds && r.e.holds);
        let anti = Poset::antichain(2);
        let s12 = AmbientSpace::new(2, vec![1, 2]).unwrap();
        let r = condition_report(&s12, &anti, &WeightFunction::ones(2), &limits()).unwrap();
        assert!(!r.e.holds);
        assert_eq!(r.e.witness, Some(ConditionWitness::Dimensions { first: 0, second: 1 }));
        for n in 1..=4 {
            for p in all_labeled_posets(n) {
                let s = AmbientSpace::new(2, vec![1; n]).unwrap();
                let r = condition_report(&s, &p, &WeightFunction::ones(n), &limits()).unwrap();
                assert_eq!(r.d.holds, r.e.holds);
            }
        }
    }

    #[test]
    fn single_orbit_examples() {
        let s = AmbientSpace::new(5, vec![1]).unwrap();
        assert!(single_orbit_check(&s, &Poset::chain(1), &WeightFunction::ones(1), &limits()).unwrap().holds);
        let s12 = AmbientSpace::new(2, vec![1, 2]).unwrap();
        let w = single_orbit_check(&s12, &Poset::antichain(2), &WeightFunction::ones(2), &limits()).unwrap();
        assert!(!w.holds);
        let (a, b) = w.witness.unwrap();
        let anti = Poset::antichain(2);
        let ones = WeightFunction::ones(2);
        assert_eq!(s12.weight(&a, &anti, &ones), s12.weight(&b, &anti, &ones));
    }

    #[test]
    fn canonical_form_example() {
        let s = AmbientSpace::new(2, vec![1, 1]).unwrap();
        let chain = Poset::chain(2);
        let code = LinearCode::from_generators(s.field(), 2, &[vec![1, 1]]);
        let form = canonical_decomposition(&s, &chain, &code).unwrap();
        assert_eq!(form.levels[0].dim(), 0);
        assert_eq!(form.levels[1], LinearCode::from_generators(s.field(), 2, &[vec![0, 1]]));
        assert_eq!(code.image(form.phi.matrix()), form.levels[1]);
        // a level-supported code needs no shearing
        let flat = LinearCode::from_generators(s.field(), 2, &[vec![1, 0]]);
        assert_eq!(canonical_decomposition(&s, &chain, &flat).unwrap().phi, Isometry::identity(&s));
        assert!(canonical_decomposition(&AmbientSpace::new(2, vec![1, 1, 1]).unwrap(), &v_poset(), &flat.sum(&flat)).is_err());
    }

    #[test]
    fn canonical_form_replays_on_every_code() {
        let posets = [
            Poset::chain(3),
            Poset::antichain(3),
            Poset::from_covers(vec!["a".into(), "b".into(), "c".into()], &[(0, 2), (1, 2)]).unwrap(),
            Poset::from_covers(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (0, 2)]).unwrap(),
        ];
        for p in &posets {
            for (q, dims) in [(2, vec![1, 1, 1]), (3, vec![1, 1, 1]), (2, vec![1, 2, 1])] {
                let s = AmbientSpace::new(q, dims).unwrap();
                for code in s.enumerate_codes(&limits()).unwrap() {
                    let form = canonical_decomposition(&s, p, &code).unwrap();
                    assert!(verify_canonical_form(&s, p, &code, &form, &limits()).unwrap(), "{p:?} {code:?}");
                }
            }
        }
    }
}
