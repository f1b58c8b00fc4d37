//! Command reports: a typed result rendered as JSON, a pass flag, and a
//! digest over everything except timing.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::Matrix;
use crate::fourier::{dual_weight_partition, macwilliams_identity_check, property_audit, weight_partition};
use crate::instance::Instance;
use crate::isometry::{brute_force_isometry_group, group_order, weight_automorphisms, weight_isometry_group, WeightSum};
use crate::lattice::{
    construct_minimal_solution, generate, minimal_nontrivial_length, moebius, zeta_formula,
};
use crate::mep::{
    condition_report, mep_brute_force, mep_p_support_predicate, mep_predicate, replay_counterexample, MepMode,
    MepVerdict,
};
use crate::poset::{LabelSet, Permutation, Poset};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub instance_digest: Option<String>,
    pub passed: bool,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    fn new(command: &str, instance: Option<&Instance>, passed: bool, result: Value) -> Report {
        Report {
            command: command.into(),
            instance_digest: instance.map(Instance::digest),
            passed,
            result,
            elapsed_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// SHA-256 of the JSON form with timing removed.
    pub fn digest(&self) -> String {
        let untimed = Report {
            elapsed_ms: None,
            ..self.clone()
        };
        hex::encode(Sha256::digest(serde_json::to_string(&untimed).expect("reports serialize").as_bytes()))
    }

    /// `key: value` lines for the top level of the result.
    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\npassed: {}\n", self.command, self.passed);
        if let Some(d) = &self.instance_digest {
            out.push_str(&format!("instance: {d}\n"));
        }
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed_ms: {ms}\n"));
        }
        out
    }
}

fn labels(poset: &Poset, set: LabelSet) -> Vec<&str> {
    poset.set_labels(set)
}

fn perm_labels<'a>(poset: &'a Poset, p: &Permutation) -> BTreeMap<&'a str, &'a str> {
    (0..poset.len()).map(|i| (poset.label(i), poset.label(p.apply(i)))).collect()
}

/// Ideals, levels, hierarchy, automorphisms and the UDP.
pub fn poset_report(inst: &Instance, limits: &Limits) -> Result<Report> {
    let p = &inst.poset;
    let hier = p.is_hierarchical();
    let auts = p.automorphisms(limits)?;
    let udp = p.udp_check(&inst.omega, limits)?;
    let result = json!({
        "elements": p.labels(),
        "ideals": p.all_ideals().into_iter().map(|i| labels(p, i)).collect::<Vec<_>>(),
        "levels": (0..p.len()).map(|i| (p.label(i), p.levels()[i])).collect::<BTreeMap<_, _>>(),
        "height": p.height(),
        "hierarchical": hier.holds,
        "hierarchy_witness": hier.witness.map(|(a, b)| [p.label(a), p.label(b)]),
        "automorphism_count": auts.len(),
        "automorphisms": auts.iter().map(|a| perm_labels(p, a)).collect::<Vec<_>>(),
        "udp": udp.holds,
        "udp_witness": udp.witness.map(|(a, b)| [labels(p, a), labels(p, b)]),
    });
    Ok(Report::new("poset", Some(inst), true, result))
}

/// Group order, the image table of `λ`, the kernel, a homomorphism check
/// on a deterministic sample of pairs, and optionally the brute-force
/// comparison.
pub fn isometries_report(inst: &Instance, brute_force: bool, limits: &Limits) -> Result<Report> {
    let (s, p, w) = (&inst.space, &inst.poset, &inst.omega);
    let admissible = weight_automorphisms(s, p, w, limits)?;
    let order = group_order(s, p, &admissible);
    let group = weight_isometry_group(s, p, w, limits)?;
    let mut image: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for g in &group {
        *image.entry(g.lambda().images().to_vec()).or_default() += 1;
    }
    let kernel = image.get(Permutation::identity(p.len()).images()).copied().unwrap_or(0);
    let image_matches = image.len() == admissible.len();

    // every pair when small, else a fixed-seed sample of 4096 pairs
    let n = group.len();
    let pairs: Vec<(usize, usize)> = if n * n <= 4096 {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        sample(&mut rng, n * n, 4096).into_iter().map(|x| (x / n, x % n)).collect()
    };
    let mut homomorphism = true;
    for (a, b) in pairs {
        let prod = group[a].compose(&group[b], s, p)?;
        homomorphism &= prod.lambda() == &group[a].lambda().compose(group[b].lambda());
    }
    for g in group.iter().take(256) {
        homomorphism &= g.inverse(s, p)?.lambda() == &g.lambda().inverse();
    }

    let oracle = if brute_force {
        let brute: BTreeSet<Matrix> = brute_force_isometry_group(s, &WeightSum { poset: p, omega: w }, limits)?
            .into_iter()
            .collect();
        let structured: BTreeSet<Matrix> = group.iter().map(|g| g.matrix().clone()).collect();
        Some(brute == structured)
    } else {
        None
    };
    let passed = homomorphism && image_matches && group.len() as u128 == order && oracle != Some(false);
    let result = json!({
        "order": order.to_string(),
        "enumerated": group.len(),
        "kernel_order": kernel,
        "image": image.iter().map(|(l, c)| json!({
            "lambda": (0..p.len()).map(|i| (p.label(i), p.label(l[i]))).collect::<BTreeMap<_, _>>(),
            "count": c,
        })).collect::<Vec<_>>(),
        "image_is_admissible_group": image_matches,
        "homomorphism": homomorphism,
        "sample": group.iter().filter(|g| !g.matrix().eq(&Matrix::identity(s.field(), s.len()))).take(3).collect::<Vec<_>>(),
        "brute_force_matches": oracle,
    });
    Ok(Report::new("isometries", Some(inst), passed, result))
}

/// The verdict, the condition report and, when both sides ran, whether
/// the predicate and the exhaustive search agree.
pub fn mep_report(inst: &Instance, mode: MepMode, brute_force: bool, limits: &Limits) -> Result<Report> {
    let (s, p, w) = (&inst.space, &inst.poset, &inst.omega);
    let predicate: Option<MepVerdict> = match mode {
        MepMode::PSupport => Some(mep_p_support_predicate(s, p)?),
        MepMode::Weight => match mep_predicate(s, p, w, limits) {
            Ok(v) => Some(v),
            Err(Error::PredicateUnavailable(_)) if brute_force => None,
            Err(e) => return Err(e),
        },
    };
    let brute = if brute_force {
        Some(mep_brute_force(s, p, w, mode, limits)?)
    } else {
        None
    };
    let replayed = match brute.as_ref().and_then(|b| b.counterexample.as_ref()) {
        Some(cx) => Some(replay_counterexample(s, p, w, mode, cx, limits)?),
        None => None,
    };
    let agreement = match (&predicate, &brute) {
        (Some(a), Some(b)) => Some(a.holds == b.holds),
        _ => None,
    };
    let verdict = brute.as_ref().or(predicate.as_ref()).expect("one side ran");
    let passed = verdict.holds && agreement != Some(false) && replayed != Some(false);
    let result = json!({
        "mode": mode,
        "holds": verdict.holds,
        "predicate": predicate,
        "brute_force": brute,
        "agreement": agreement,
        "counterexample_replays": replayed,
        "conditions": condition_report(s, p, w, limits)?,
    });
    Ok(Report::new("mep", Some(inst), passed, result))
}

/// Möbius digest, minimal nontrivial length, and the constructed solution
/// replayed; generated submodule lattices also report the product formula.
pub fn lattice_report(spec: &str, limits: &Limits) -> Result<Report> {
    let lattice = generate(spec, limits)?;
    let mu = moebius(&lattice);
    let min = minimal_nontrivial_length(&lattice, &mu)?;
    let solution = construct_minimal_solution(&lattice, &mu, min.top)?;
    let valid = solution.is_solution() && !solution.is_trivial() && solution.length() as u64 == min.length;
    let words: Vec<&str> = spec.split_whitespace().collect();
    let formula = match words.as_slice() {
        [kind, q, k] if kind.starts_with("subspace") => Some(zeta_formula(q.parse().unwrap_or(0), 1)),
        ["morita", q, e, _] => Some(zeta_formula(q.parse().unwrap_or(0), e.parse().unwrap_or(0))),
        _ => None,
    };
    let mu_digest = hex::encode(Sha256::digest(serde_json::to_string(&mu).expect("tables serialize").as_bytes()));
    let passed = valid && formula.is_none_or(|f| f == min.length as u128);
    let result = json!({
        "spec": spec,
        "ground": lattice.ground(),
        "members": lattice.len(),
        "non_principal": lattice.non_principal().len(),
        "moebius_digest": mu_digest,
        "minimal_length": min.length,
        "zeta_formula": formula.map(|f| f.to_string()),
        "solution_valid": valid,
        "solution": {
            "left": solution.left.iter().map(|m| m.points()).collect::<Vec<_>>(),
            "right": solution.right.iter().map(|m| m.points()).collect::<Vec<_>>(),
        },
    });
    Ok(Report::new("lattice", None, passed, result))
}

/// The MacWilliams verdict, with the witness codes and the distributions
/// that make them a witness.
pub fn macwilliams_report(inst: &Instance, limits: &Limits) -> Result<Report> {
    let (s, p, w) = (&inst.space, &inst.poset, &inst.omega);
    let verdict = macwilliams_identity_check(s, p, w, limits)?;
    let witness = match &verdict.witness {
        Some((a, b)) => {
            let primal = weight_partition(s, p, w, limits)?;
            let dual = dual_weight_partition(s, p, w, limits)?;
            Some(json!({
                "first": a,
                "second": b,
                "dual_poset_distribution": dual.distribution(s, a),
                "first_dual_code_distribution": primal.distribution(s, &a.dual()),
                "second_dual_code_distribution": primal.distribution(s, &b.dual()),
                "replays": dual.distribution(s, a) == dual.distribution(s, b)
                    && primal.distribution(s, &a.dual()) != primal.distribution(s, &b.dual()),
            }))
        }
        None => None,
    };
    let result = json!({ "holds": verdict.holds, "witness": witness });
    Ok(Report::new("macwilliams", Some(inst), verdict.holds, result))
}

/// The seven-property table with its implication check.
pub fn audit_report(inst: &Instance, limits: &Limits) -> Result<Report> {
    let audit = property_audit(&inst.space, &inst.poset, &inst.omega, limits)?;
    let passed = audit.consistent();
    Ok(Report::new("audit", Some(inst), passed, serde_json::to_value(audit).expect("audit serializes")))
}
