//! Canonical labels and counts for graded-simple modules.
//!
//! Up to isomorphism and degree shift, the graded-simple modules of a
//! graded simple Lie algebra are labeled by an orbit of dominant
//! weights under the induced diagram action together with a coset of
//! the label stabilizer `G_lambda` (the preimage in `G` of the support
//! of `Br(lambda)`).  This module produces those labels, counts them up
//! to a weight bound, and decides when a finite-dimensional module
//! given by weight multiplicities admits a compatible grading.

use crate::abelian::{subgroup_from_elements, GroupElem, Subgroup};
use crate::gradings::{GradingError, GradingSpec, Weight};
use crate::invariants::{brauer_invariant, InvariantError};
use std::collections::BTreeMap;

/// The canonical label of a graded-simple module: a weight orbit and a
/// coset of the label stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSimpleLabel {
    /// The weight orbit, sorted, with its lex-least member first.
    pub orbit: Vec<Weight>,
    /// The least representative of the degree-shift coset.
    pub coset_rep: GroupElem,
    /// The label stabilizer `G_lambda <= G`.
    pub g_lambda: Subgroup,
}

impl PartialOrd for GradedSimpleLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GradedSimpleLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.orbit, &self.coset_rep).cmp(&(&other.orbit, &other.coset_rep))
    }
}

/// The label stabilizer: preimage in `G` of the support of the Brauer
/// class of the lex-least orbit member.
fn label_stabilizer(spec: &GradingSpec, orbit_rep: &Weight) -> Result<Subgroup, InvariantError> {
    let report = brauer_invariant(spec, orbit_rep)?;
    let group = spec.group();
    let members: Vec<GroupElem> = group
        .elements()
        .into_iter()
        .filter(|g| report.support.contains(&report.quotient_map.project(g)))
        .collect();
    Ok(subgroup_from_elements(group, &members)?)
}

/// The canonical label of the graded-simple module attached to the
/// weight `lambda` and the degree shift `g`.
pub fn graded_simple_label(
    spec: &GradingSpec,
    lambda: &Weight,
    shift: &GroupElem,
) -> Result<GradedSimpleLabel, InvariantError> {
    if shift.group() != spec.group() {
        return Err(GradingError::Invalid(
            "degree shift must lie in the grading group".into(),
        )
        .into());
    }
    let (orbit, _) = spec.weight_orbit(lambda)?;
    let g_lambda = label_stabilizer(spec, &orbit[0])?;
    let coset_rep = g_lambda
        .elements()
        .iter()
        .map(|x| shift.add(x))
        .min()
        .expect("stabilizer is nonempty");
    Ok(GradedSimpleLabel {
        orbit,
        coset_rep,
        g_lambda,
    })
}

/// Counts the distinct graded-simple labels with weight coefficient sum
/// at most `bound`, returning the count and the duplicate-free sorted
/// enumeration.
pub fn count_graded_simples(
    spec: &GradingSpec,
    bound: u64,
) -> Result<(u64, Vec<GradedSimpleLabel>), InvariantError> {
    spec.validated()?;
    let group = spec.group();
    let mut labels: Vec<GradedSimpleLabel> = Vec::new();
    let mut seen_orbits: Vec<Vec<Weight>> = Vec::new();
    for lambda in weights_up_to(spec.rank(), bound) {
        let (orbit, _) = spec.weight_orbit(&lambda)?;
        if seen_orbits.contains(&orbit) {
            continue;
        }
        let g_lambda = label_stabilizer(spec, &orbit[0])?;
        // One label per coset of the stabilizer.
        let mut coset_reps: Vec<GroupElem> = Vec::new();
        for g in group.elements() {
            let rep = g_lambda
                .elements()
                .iter()
                .map(|x| g.add(x))
                .min()
                .expect("stabilizer is nonempty");
            if !coset_reps.contains(&rep) {
                coset_reps.push(rep);
            }
        }
        for rep in coset_reps {
            labels.push(GradedSimpleLabel {
                orbit: orbit.clone(),
                coset_rep: rep,
                g_lambda: g_lambda.clone(),
            });
        }
        seen_orbits.push(orbit);
    }
    labels.sort();
    labels.dedup();
    Ok((labels.len() as u64, labels))
}

/// Whether the finite-dimensional module with the given simple-factor
/// multiplicities admits a compatible `G`-grading: within every diagram
/// orbit the multiplicities must agree, and each must be divisible by
/// the graded Schur index of the orbit.
pub fn module_admits_grading(
    spec: &GradingSpec,
    multiplicities: &[(Weight, u64)],
) -> Result<bool, InvariantError> {
    spec.validated()?;
    let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
    for (w, n) in multiplicities {
        if w.len() != spec.rank() {
            return Err(GradingError::RankMismatch {
                expected: spec.rank(),
                got: w.len(),
            }
            .into());
        }
        *mult.entry(w.clone()).or_insert(0) += n;
    }
    let weights: Vec<Weight> = mult.keys().cloned().collect();
    let mut handled: Vec<Weight> = Vec::new();
    for w in weights {
        if handled.contains(&w) {
            continue;
        }
        let (orbit, _) = spec.weight_orbit(&w)?;
        let counts: Vec<u64> = orbit
            .iter()
            .map(|u| mult.get(u).copied().unwrap_or(0))
            .collect();
        if counts.iter().any(|&c| c != counts[0]) {
            return Ok(false);
        }
        if counts[0] > 0 {
            let index = brauer_invariant(spec, &orbit[0])?.schur_index;
            if counts[0] % index != 0 {
                return Ok(false);
            }
        }
        handled.extend(orbit);
    }
    Ok(true)
}

/// All weights of the given rank with coefficient sum at most `bound`,
/// in lexicographic order.
pub fn weights_up_to(rank: usize, bound: u64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; rank];
    fn rec(cur: &mut Vec<u64>, i: usize, left: u64, out: &mut Vec<Weight>) {
        if i == cur.len() {
            out.push(Weight::new(cur.clone()));
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(cur, i + 1, left - v, out);
        }
        cur[i] = 0;
    }
    rec(&mut cur, 0, bound, &mut out);
    out.sort();
    out
}
