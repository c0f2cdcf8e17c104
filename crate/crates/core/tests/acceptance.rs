//! End-to-end acceptance suite: each test exercises one observable
//! guarantee of the library, from the Pauli example on sl_2 through the
//! Clifford-algebra oracles and the CLI golden outputs.

mod common;

use common::*;
use graded_brauer::abelian::GroupElem;
use graded_brauer::bichar::{
    brauer_mul, brauer_pow, commutation_factor_from_pair, pair_from_commutation_factor,
    BrauerClass,
};
use graded_brauer::cli;
use graded_brauer::gradings::{GradingSpec, Weight};
use graded_brauer::invariants::{
    brauer_invariant, corollary_admits, gamma_hat_0_d_outer, gamma_hat_b, gamma_hat_plus_d,
};
use graded_brauer::oracle::clifford::{
    b_spin_factor, d_outer_cross_terms_match, d_outer_quotient_factor_pair,
    half_spin_factor_pair,
};
use graded_brauer::oracle::monomial::{
    factor_from_action, standard_division_algebra, wedge_commutation_factor,
};
use rand::Rng;

/// Whether two Brauer classes on the same ambient group coincide.
fn same_class(a: &BrauerClass, b: &BrauerClass) -> bool {
    a.ambient() == b.ambient()
        && a.support().elements() == b.support().elements()
        && a.support().elements().iter().all(|s| {
            a.support()
                .elements()
                .iter()
                .all(|t| a.beta().eval(s, t) == b.beta().eval(s, t))
        })
}

/// The fundamental weight `omega_i` (1-based) at the given rank.
fn omega(rank: usize, i: usize) -> Weight {
    let mut m = vec![0u64; rank];
    m[i - 1] = 1;
    Weight::new(m)
}

/// All weights of the given rank with coefficient sum at most `bound`.
fn small_weights(rank: usize, bound: u64) -> Vec<Weight> {
    graded_brauer::classify::weights_up_to(rank, bound)
}

/// Criterion: the Pauli grading on sl_2 has graded Schur index 2 in
/// every odd weight and 1 in every even weight up to 10.
#[test]
fn c01_pauli_sl2_schur_index_parity() {
    let g = z(&[2, 2]);
    let spec = GradingSpec::AInner {
        rank: 1,
        class: pauli_class(&g),
        xi: vec![g.identity()],
    };
    for m in 0..=10u64 {
        let rep = brauer_invariant(&spec, &Weight::new(vec![m])).unwrap();
        if m % 2 == 0 {
            assert_eq!(rep.schur_index, 1, "m = {}", m);
            assert!(rep.admits_grading, "m = {}", m);
        } else {
            assert_eq!(rep.schur_index, 2, "m = {}", m);
            assert!(!rep.admits_grading, "m = {}", m);
        }
    }
}

/// Criterion: pair -> commutation factor -> pair is the identity on
/// every nondegenerate alternating class over a family of small
/// ambient groups, and factor -> pair -> factor likewise.
#[test]
fn c02_pair_factor_round_trip() {
    let ambients: Vec<Vec<u64>> = vec![
        vec![2, 2],
        vec![2, 2, 2],
        vec![2, 2, 2, 2],
        vec![4, 4],
        vec![3, 3],
        vec![6, 6],
    ];
    let mut checked = 0usize;
    for orders in ambients {
        let g = z(&orders);
        for class in nondegenerate_classes(&g) {
            let factor = commutation_factor_from_pair(&class);
            let back = pair_from_commutation_factor(&factor).unwrap();
            assert!(
                same_class(&class, &back),
                "round trip failed over {:?}, |T| = {}",
                orders,
                class.support().order()
            );
            let factor_back = commutation_factor_from_pair(&back);
            assert!(same_factor(&factor, &factor_back));
            checked += 1;
        }
    }
    assert_eq!(checked, 87, "unexpected class count");
}

/// Criterion: the group law on classes agrees with the Kronecker
/// tensor oracle on standard monomial realizations, for all pairs of
/// classes with square support order over small ambient groups.
#[test]
fn c03_product_law_matches_tensor_oracle() {
    let ambients: Vec<Vec<u64>> = vec![
        vec![2, 2],
        vec![2, 2, 2, 2],
        vec![4, 4],
        vec![3, 3],
        vec![6, 6],
    ];
    let mut pairs = 0usize;
    for orders in ambients {
        let g = z(&orders);
        let classes: Vec<BrauerClass> = nondegenerate_classes(&g)
            .into_iter()
            .filter(|c| matches!(c.support().order(), 1 | 4 | 9 | 16))
            .collect();
        let reps: Vec<_> = classes
            .iter()
            .map(|c| standard_division_algebra(c).unwrap())
            .collect();
        for (i, c1) in classes.iter().enumerate() {
            for (j, c2) in classes.iter().enumerate() {
                let product = brauer_mul(c1, c2).unwrap();
                let (r1, r2) = (&reps[i], &reps[j]);
                let factor = factor_from_action(&g, |chi| {
                    r1.mat(&r1.t_of(chi)).kron(r2.mat(&r2.t_of(chi)))
                })
                .unwrap();
                let oracle = pair_from_commutation_factor(&factor).unwrap();
                assert!(
                    same_class(&product, &oracle),
                    "tensor oracle disagrees over {:?} (pair {}, {})",
                    orders,
                    i,
                    j
                );
                pairs += 1;
            }
        }
    }
    assert!(pairs > 1000, "only {} pairs checked", pairs);
}

/// Criterion: the inner series A invariant of every fundamental weight
/// equals the commutation factor of the exterior power of the
/// monomial realization, on randomized specs of dimension 2, 3, 4, 6.
#[test]
fn c04_a_series_wedge_oracle() {
    let g = z(&[6, 6]);
    let classes = nondegenerate_classes(&g);
    for n in [2usize, 3, 4, 6] {
        let pool: Vec<&BrauerClass> = classes
            .iter()
            .filter(|c| n % (c.schur_index() as usize) == 0)
            .collect();
        let mut rng = rng(40 + n as u64);
        for trial in 0..10 {
            let class = pool[rng.gen_range(0..pool.len())].clone();
            let k = n / class.schur_index() as usize;
            let xi: Vec<GroupElem> = (0..k).map(|_| random_elem(&g, &mut rng)).collect();
            let spec = GradingSpec::AInner {
                rank: n - 1,
                class: class.clone(),
                xi: xi.clone(),
            };
            assert!(spec.validate().is_empty(), "{:?}", spec.validate());
            for i in 1..n {
                let rep = brauer_invariant(&spec, &omega(n - 1, i)).unwrap();
                let formula = commutation_factor_from_pair(&rep.brauer);
                let oracle = wedge_commutation_factor(&g, &class, &xi, i).unwrap();
                assert!(
                    same_factor(&formula, &oracle),
                    "n = {}, i = {}, trial = {}",
                    n,
                    i,
                    trial
                );
            }
        }
    }
}

/// Criterion: the series B spin factor formula agrees with the exact
/// Clifford-algebra oracle on randomized degree multisets of ranks 2
/// and 3 over elementary abelian 2-groups.
#[test]
fn c05_b_series_clifford_oracle() {
    let cases: [(&[u64], usize, usize); 4] = [
        (&[2, 2], 2, 6),
        (&[2, 2], 3, 5),
        (&[2, 2, 2], 2, 5),
        (&[2, 2, 2], 3, 6),
    ];
    let mut total = 0usize;
    for (case_idx, (orders, r, trials)) in cases.iter().enumerate() {
        let g = z(orders);
        let mut rng = rng(500 + case_idx as u64);
        for trial in 0..*trials {
            let xi: Vec<GroupElem> = (0..2 * r + 1).map(|_| random_elem(&g, &mut rng)).collect();
            let spec = GradingSpec::B {
                group: g.clone(),
                rank: *r,
                g0: g.identity(),
                xi,
            };
            assert!(spec.validate().is_empty(), "{:?}", spec.validate());
            let formula = gamma_hat_b(&spec).unwrap();
            let oracle = b_spin_factor(&spec, 10).unwrap();
            assert!(
                same_factor(&formula, &oracle),
                "case {:?} rank {} trial {}",
                orders,
                r,
                trial
            );
            total += 1;
        }
    }
    assert!(total >= 20);
}

/// Criterion: for every inner series D corpus spec the formula pair
/// {gamma_plus, gamma_minus} equals the Clifford oracle's unordered
/// pair, and the half-spin product/square relations and the equality
/// criterion hold.
#[test]
fn c06_d_inner_half_spin_oracle_and_relations() {
    let mut seen = 0usize;
    for (name, spec) in corpus() {
        let GradingSpec::DInner { rank, class, .. } = &spec else {
            continue;
        };
        seen += 1;
        let (gp, gm) = gamma_hat_plus_d(&spec).unwrap();
        let (op, om) = half_spin_factor_pair(&spec, 10).unwrap();
        let direct = same_factor(&gp, &op) && same_factor(&gm, &om);
        let crossed = same_factor(&gp, &om) && same_factor(&gm, &op);
        assert!(direct || crossed, "{}: oracle pair mismatch", name);
        let beta_hat = commutation_factor_from_pair(class);
        if rank % 2 == 1 {
            assert!(gp.add(&gm).is_trivial(), "{}: product relation", name);
            assert!(same_factor(&gp.scale(2), &beta_hat), "{}: square relation", name);
        } else {
            assert!(same_factor(&gp.add(&gm), &beta_hat), "{}: product relation", name);
            assert!(gp.scale(2).is_trivial(), "{}: square relation", name);
        }
        assert_eq!(
            same_factor(&gp, &gm),
            beta_hat.is_trivial(),
            "{}: equality criterion",
            name
        );
        if class.support().order() > 1 {
            assert!(!same_factor(&gp, &beta_hat), "{}: gamma_plus = beta_hat", name);
        }
    }
    assert_eq!(seen, 5, "corpus should cover five inner D specs");
}

/// Criterion: for the rank-4 outer series D corpus specs, the Clifford
/// oracle reproduces both the quotient-level factor of the
/// opposite-parity weights and the cross-commutator reading of the
/// support bicharacter.
#[test]
fn c07_d_outer_clifford_oracle() {
    let mut seen = 0usize;
    for (name, spec) in corpus() {
        let GradingSpec::DOuter { rank: 4, .. } = &spec else {
            continue;
        };
        seen += 1;
        let (fp, fm) = d_outer_quotient_factor_pair(&spec, 10).unwrap();
        let gamma0 = gamma_hat_0_d_outer(&spec).unwrap();
        assert!(
            same_factor(&fp, &gamma0) || same_factor(&fm, &gamma0),
            "{}: quotient factor mismatch",
            name
        );
        assert_eq!(
            d_outer_cross_terms_match(&spec, 10).unwrap(),
            Some(true),
            "{}: cross-commutator rule",
            name
        );
    }
    assert_eq!(seen, 2, "corpus should cover both rank-4 outer D supports");
}

/// The diagram orbits of the fundamental-weight indices (0-based).
fn fundamental_orbits(spec: &GradingSpec) -> Vec<Vec<usize>> {
    let r = spec.rank();
    let mut orbits = Vec::new();
    let mut seen = vec![false; r];
    for i in 0..r {
        if seen[i] {
            continue;
        }
        let (orbit, _) = spec.weight_orbit(&omega(r, i + 1)).unwrap();
        let members: Vec<usize> = orbit
            .iter()
            .map(|w| w.coeffs().iter().position(|&c| c == 1).unwrap())
            .collect();
        for &j in &members {
            seen[j] = true;
        }
        orbits.push(members);
    }
    orbits
}

/// Criterion: the orbit-product reduction, the dual-pair triviality
/// and the exterior-power law hold as identities of computed classes
/// over the whole corpus for small weights.
#[test]
fn c08_reduction_laws() {
    for (name, spec) in corpus() {
        let r = spec.rank();
        // Exterior-power law and the order bound for inner series A.
        if let GradingSpec::AInner { .. } = &spec {
            let br1 = brauer_invariant(&spec, &omega(r, 1)).unwrap().brauer;
            for i in 1..=r {
                let bri = brauer_invariant(&spec, &omega(r, i)).unwrap().brauer;
                assert!(
                    same_class(&bri, &brauer_pow(&br1, i as i64)),
                    "{}: wedge law at i = {}",
                    name,
                    i
                );
            }
            for lambda in small_weights(r, 3) {
                let br = brauer_invariant(&spec, &lambda).unwrap().brauer;
                assert!(
                    brauer_pow(&br, (r + 1) as i64).is_trivial(),
                    "{}: order bound at {:?}",
                    name,
                    lambda
                );
            }
        }
        // Dual-pair triviality.
        if let GradingSpec::AOuter { .. } = &spec {
            for i in 1..=r {
                let mut m = vec![0u64; r];
                m[i - 1] += 1;
                m[r - i] += 1;
                let rep = brauer_invariant(&spec, &Weight::new(m)).unwrap();
                assert!(rep.brauer.is_trivial(), "{}: dual pair at i = {}", name, i);
            }
        }
        if matches!(&spec, GradingSpec::DOuter { .. }) && r % 2 == 1 {
            let mut m = vec![0u64; r];
            m[r - 2] = 1;
            m[r - 1] = 1;
            let rep = brauer_invariant(&spec, &Weight::new(m)).unwrap();
            assert!(rep.brauer.is_trivial(), "{}: half-spin dual pair", name);
        }
        // Orbit-product reduction.
        let orbits = fundamental_orbits(&spec);
        for lambda in small_weights(r, 3) {
            if lambda.is_zero() {
                continue;
            }
            let parts: Vec<Weight> = orbits
                .iter()
                .map(|o| {
                    let mut m = vec![0u64; r];
                    for &j in o {
                        m[j] = lambda.coeffs()[j];
                    }
                    Weight::new(m)
                })
                .filter(|w| !w.is_zero())
                .collect();
            if parts.len() < 2 {
                continue;
            }
            let rep = brauer_invariant(&spec, &lambda).unwrap();
            let part_reps: Vec<_> = parts
                .iter()
                .map(|w| brauer_invariant(&spec, w).unwrap())
                .collect();
            if part_reps
                .iter()
                .any(|p| p.h_lambda.elements() != rep.h_lambda.elements())
            {
                continue;
            }
            let mut acc = part_reps[0].brauer.clone();
            for p in &part_reps[1..] {
                acc = brauer_mul(&acc, &p.brauer).unwrap();
            }
            assert!(
                same_class(&rep.brauer, &acc),
                "{}: orbit product at {:?}",
                name,
                lambda
            );
        }
    }
}

/// Criterion: on every corpus spec and small weight, the per-series
/// admissibility criterion agrees with "trivial inertia and Schur
/// index one".
#[test]
fn c09_admissibility_criterion() {
    for (name, spec) in corpus() {
        for lambda in small_weights(spec.rank(), 3) {
            let rep = brauer_invariant(&spec, &lambda).unwrap();
            let expected = rep.h_lambda.is_trivial() && rep.schur_index == 1;
            assert_eq!(
                corollary_admits(&spec, &lambda).unwrap(),
                expected,
                "{} at {:?}",
                name,
                lambda
            );
            assert_eq!(rep.admits_grading, expected, "{} at {:?}", name, lambda);
        }
    }
}

/// Criterion: the CLI output is byte-identical to the committed golden
/// files for four verbs on six reference documents.
#[test]
fn c10_cli_golden_outputs() {
    let base = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let specs = ["a_inner", "a_outer", "b", "c", "d_inner", "d_outer"];
    let verbs = ["validate", "invariant", "sweep", "check"];
    for name in specs {
        let doc = base.join("fixtures").join(format!("{}.json", name));
        let doc_arg = doc.to_str().unwrap().to_string();
        for verb in verbs {
            let args = vec![
                verb.to_string(),
                doc_arg.clone(),
                "--format".to_string(),
                "json".to_string(),
            ];
            let (code, out) = cli::run(&args);
            assert_eq!(code, 0, "{} {} exited {}: {}", verb, name, code, out);
            let golden_path = base.join("golden").join(format!("{}.{}.json", name, verb));
            let golden = std::fs::read_to_string(&golden_path)
                .unwrap_or_else(|e| panic!("missing golden {:?}: {}", golden_path, e));
            assert_eq!(out, golden, "golden mismatch for {} {}", verb, name);
        }
    }
}
