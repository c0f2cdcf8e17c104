//! Shared fixtures for the integration tests: a corpus of grading
//! specs covering every series variant, exhaustive enumeration of
//! subgroups and alternating bicharacters on small groups, and seeded
//! random spec generators.

#![allow(dead_code)]

use graded_brauer::abelian::{
    subgroup_generated, Character, FinAbGroup, GroupElem, QmodZ, Subgroup,
};
use graded_brauer::bichar::{
    quadratic_refinement, BrauerClass, CommutationFactor, SubgroupBicharacter,
};
use graded_brauer::gradings::{t4_elements, GradingSpec, Orientation};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn z(orders: &[u64]) -> FinAbGroup {
    FinAbGroup::new(orders.to_vec()).unwrap()
}

pub fn dual_char(g: &FinAbGroup, coords: &[i64]) -> Character {
    Character::from_dual_elem(g.elem(coords).unwrap())
}

/// The Pauli class on `Z2 x Z2`: full support with the hyperbolic
/// pairing `beta(a, b) = -1`.
pub fn pauli_class(g: &FinAbGroup) -> BrauerClass {
    let gens = vec![g.elem(&[1, 0]).unwrap(), g.elem(&[0, 1]).unwrap()];
    let beta = SubgroupBicharacter::from_generator_values(
        g,
        &gens,
        vec![vec![QmodZ::ZERO, QmodZ::HALF], vec![QmodZ::HALF, QmodZ::ZERO]],
    )
    .unwrap();
    BrauerClass::new(g.clone(), beta).unwrap()
}

/// Full support on `Z2^4`: two hyperbolic planes.
pub fn pauli16(g: &FinAbGroup) -> BrauerClass {
    let gens: Vec<GroupElem> = (0..4)
        .map(|i| {
            let mut c = vec![0i64; 4];
            c[i] = 1;
            g.elem(&c).unwrap()
        })
        .collect();
    let h = QmodZ::HALF;
    let o = QmodZ::ZERO;
    let beta = SubgroupBicharacter::from_generator_values(
        g,
        &gens,
        vec![
            vec![o, h, o, o],
            vec![h, o, o, o],
            vec![o, o, o, h],
            vec![o, o, h, o],
        ],
    )
    .unwrap();
    BrauerClass::new(g.clone(), beta).unwrap()
}

/// Whether two commutation factors on the same group coincide.
pub fn same_factor(a: &CommutationFactor, b: &CommutationFactor) -> bool {
    a.group() == b.group() && a.add(&b.neg()).is_trivial()
}

/// A named list of valid specs covering every series variant, every
/// support order appearing in the classification, and both inner and
/// outer cases.
pub fn corpus() -> Vec<(String, GradingSpec)> {
    let mut out: Vec<(String, GradingSpec)> = Vec::new();

    // Series A, inner, rank 1: the Pauli grading on sl_2.
    let g22 = z(&[2, 2]);
    out.push((
        "a_inner_pauli".into(),
        GradingSpec::AInner {
            rank: 1,
            class: pauli_class(&g22),
            xi: vec![g22.identity()],
        },
    ));

    // Series A, inner, rank 3: two degrees over the Pauli division
    // algebra.
    out.push((
        "a_inner_rank3".into(),
        GradingSpec::AInner {
            rank: 3,
            class: pauli_class(&g22),
            xi: vec![g22.identity(), g22.elem(&[1, 0]).unwrap()],
        },
    ));

    // Series A, outer, rank 3 over Z2 x Z2 with a nontrivial shifted
    // distinguished element.
    {
        let g = g22.clone();
        let e = g.identity();
        let v = g.elem(&[0, 1]).unwrap();
        out.push((
            "a_outer_sym".into(),
            GradingSpec::AOuter {
                group: g.clone(),
                rank: 3,
                h: g.elem(&[1, 0]).unwrap(),
                chi: dual_char(&g, &[1, 0]),
                t_gens: vec![],
                t_beta: vec![],
                g0: e.clone(),
                xi: vec![v.clone(), v.clone(), v.clone(), e.clone()],
                ti: vec![e.clone(); 4],
                mu0: None,
            },
        ));
    }

    // Series A, outer, rank 3 over Z2 with everything trivial upstairs.
    {
        let g = z(&[2]);
        let e = g.identity();
        out.push((
            "a_outer_z2".into(),
            GradingSpec::AOuter {
                group: g.clone(),
                rank: 3,
                h: g.elem(&[1]).unwrap(),
                chi: dual_char(&g, &[1]),
                t_gens: vec![],
                t_beta: vec![],
                g0: e.clone(),
                xi: vec![e.clone(); 4],
                ti: vec![e.clone(); 4],
                mu0: None,
            },
        ));
    }

    // Series B, rank 2 over Z2 x Z2 with a full-support spin factor.
    {
        let g = g22.clone();
        let e = g.identity();
        let a = g.elem(&[1, 0]).unwrap();
        let b = g.elem(&[0, 1]).unwrap();
        out.push((
            "b_full_support".into(),
            GradingSpec::B {
                group: g.clone(),
                rank: 2,
                g0: e.clone(),
                xi: vec![e.clone(), e.clone(), a.clone(), b.clone(), a.add(&b)],
            },
        ));
    }

    // Series B, rank 3 over Z2^3.
    {
        let g = z(&[2, 2, 2]);
        let e = g.identity();
        let e1 = g.elem(&[1, 0, 0]).unwrap();
        let e2 = g.elem(&[0, 1, 0]).unwrap();
        let e3 = g.elem(&[0, 0, 1]).unwrap();
        out.push((
            "b_z2_cubed".into(),
            GradingSpec::B {
                group: g.clone(),
                rank: 3,
                g0: e.clone(),
                xi: vec![
                    e.clone(),
                    e1.clone(),
                    e2.clone(),
                    e3.clone(),
                    e1.add(&e2),
                    e1.add(&e3),
                    e2.add(&e3),
                ],
            },
        ));
    }

    // Series C, rank 2 and rank 3 with the Pauli class.
    out.push((
        "c_pauli_rank2".into(),
        GradingSpec::C {
            rank: 2,
            class: pauli_class(&g22),
        },
    ));
    out.push((
        "c_pauli_rank3".into(),
        GradingSpec::C {
            rank: 3,
            class: pauli_class(&g22),
        },
    ));

    // Series D, inner, trivial support, ranks 3 and 4.
    {
        let g = g22.clone();
        let e = g.identity();
        let a = g.elem(&[1, 0]).unwrap();
        let b = g.elem(&[0, 1]).unwrap();
        let ab = a.add(&b);
        out.push((
            "d_inner_t1_r3".into(),
            GradingSpec::DInner {
                rank: 3,
                class: BrauerClass::trivial(&g),
                g0: e.clone(),
                xi: vec![e.clone(), e.clone(), e.clone(), a.clone(), b.clone(), ab.clone()],
                ti: vec![e.clone(); 6],
                orientation: Orientation::Plus,
            },
        ));
        out.push((
            "d_inner_t1_r4".into(),
            GradingSpec::DInner {
                rank: 4,
                class: BrauerClass::trivial(&g),
                g0: e.clone(),
                xi: vec![
                    e.clone(),
                    e.clone(),
                    a.clone(),
                    a.clone(),
                    b.clone(),
                    b.clone(),
                    ab.clone(),
                    ab.clone(),
                ],
                ti: vec![e.clone(); 8],
                orientation: Orientation::Plus,
            },
        ));
    }

    // Series D, inner, |T| = 4, rank 3 over Z4 x Z4.
    {
        let g = z(&[4, 4]);
        let a2 = g.elem(&[2, 0]).unwrap();
        let b2 = g.elem(&[0, 2]).unwrap();
        let beta = SubgroupBicharacter::from_generator_values(
            &g,
            &[a2.clone(), b2.clone()],
            vec![vec![QmodZ::ZERO, QmodZ::HALF], vec![QmodZ::HALF, QmodZ::ZERO]],
        )
        .unwrap();
        let class = BrauerClass::new(g.clone(), beta).unwrap();
        out.push((
            "d_inner_t4_r3".into(),
            GradingSpec::DInner {
                rank: 3,
                class,
                g0: g.identity(),
                xi: vec![g.elem(&[1, 0]).unwrap(), g.elem(&[0, 1]).unwrap(), g.identity()],
                ti: vec![a2.clone(), b2.clone(), g.identity()],
                orientation: Orientation::Plus,
            },
        ));
    }

    // Series D, inner, |T| = 4, rank 4 over Z2^3.
    {
        let g = z(&[2, 2, 2]);
        let e1 = g.elem(&[1, 0, 0]).unwrap();
        let e2 = g.elem(&[0, 1, 0]).unwrap();
        let e3 = g.elem(&[0, 0, 1]).unwrap();
        let beta = SubgroupBicharacter::from_generator_values(
            &g,
            &[e1.clone(), e2.clone()],
            vec![vec![QmodZ::ZERO, QmodZ::HALF], vec![QmodZ::HALF, QmodZ::ZERO]],
        )
        .unwrap();
        let class = BrauerClass::new(g.clone(), beta).unwrap();
        out.push((
            "d_inner_t4_r4".into(),
            GradingSpec::DInner {
                rank: 4,
                class,
                g0: e1.clone(),
                xi: vec![g.identity(), e3.clone(), e3.clone(), e1.add(&e3)],
                ti: vec![e1.clone(), e1.clone()],
                orientation: Orientation::Plus,
            },
        ));
    }

    // Series D, inner, |T| = 16, rank 4 over Z2^4.
    {
        let g = z(&[2, 2, 2, 2]);
        let class = pauli16(&g);
        let qf = quadratic_refinement(class.beta()).unwrap();
        let g0 = g
            .elements()
            .into_iter()
            .find(|t| !t.is_identity() && qf.value(t).is_zero())
            .unwrap();
        out.push((
            "d_inner_t16_r4".into(),
            GradingSpec::DInner {
                rank: 4,
                class,
                g0: g0.clone(),
                xi: vec![g.identity(), g.identity()],
                ti: vec![g0.clone(), g0],
                orientation: Orientation::Plus,
            },
        ));
    }

    // Series D, outer, trivial support, ranks 3 and 4 over Z2 x Z2.
    {
        let g = g22.clone();
        let e = g.identity();
        let a = g.elem(&[1, 0]).unwrap();
        let ab = g.elem(&[1, 1]).unwrap();
        out.push((
            "d_outer_t1_r3".into(),
            GradingSpec::DOuter {
                rank: 3,
                class: BrauerClass::trivial(&g),
                g0: e.clone(),
                xi: vec![e.clone(), e.clone(), e.clone(), e.clone(), e.clone(), ab.clone()],
                ti: vec![e.clone(); 6],
            },
        ));
        out.push((
            "d_outer_t1_r4".into(),
            GradingSpec::DOuter {
                rank: 4,
                class: BrauerClass::trivial(&g),
                g0: e.clone(),
                xi: vec![
                    e.clone(),
                    e.clone(),
                    e.clone(),
                    e.clone(),
                    e.clone(),
                    e.clone(),
                    e.clone(),
                    a.clone(),
                ],
                ti: vec![e.clone(); 8],
            },
        ));
    }

    // Series D, outer, |T| = 4, rank 3 over Z2 x Z2.
    {
        let g = g22.clone();
        let class = pauli_class(&g);
        let (a, _, _) = t4_elements(&class).unwrap();
        let e = g.identity();
        out.push((
            "d_outer_t4_r3".into(),
            GradingSpec::DOuter {
                rank: 3,
                class,
                g0: a.clone(),
                xi: vec![e.clone(), e.clone(), e.clone()],
                ti: vec![a.clone(), a.clone(), a.clone()],
            },
        ));
    }

    // Series D, outer, |T| = 4, rank 4 over Z4 x Z4: the support is the
    // 2-torsion and the distinguished element is a nontrivial diagonal
    // sum.
    {
        let g = z(&[4, 4]);
        let a2 = g.elem(&[2, 0]).unwrap();
        let b2 = g.elem(&[0, 2]).unwrap();
        let beta = SubgroupBicharacter::from_generator_values(
            &g,
            &[a2.clone(), b2.clone()],
            vec![vec![QmodZ::ZERO, QmodZ::HALF], vec![QmodZ::HALF, QmodZ::ZERO]],
        )
        .unwrap();
        let class = BrauerClass::new(g.clone(), beta).unwrap();
        out.push((
            "d_outer_t4_r4".into(),
            GradingSpec::DOuter {
                rank: 4,
                class,
                g0: g.identity(),
                xi: vec![
                    g.elem(&[1, 0]).unwrap(),
                    g.elem(&[2, 0]).unwrap(),
                    g.elem(&[1, 1]).unwrap(),
                    g.elem(&[3, 3]).unwrap(),
                ],
                ti: vec![a2.clone(), g.identity()],
            },
        ));
    }

    for (name, spec) in &out {
        let violations = spec.validate();
        assert!(violations.is_empty(), "{}: {:?}", name, violations);
    }
    out
}

/// All subgroups of a small group, by breadth-first generator
/// extension.
pub fn all_subgroups(g: &FinAbGroup) -> Vec<Subgroup> {
    let elements = g.elements();
    let mut found: Vec<Subgroup> = vec![subgroup_generated(g, &[]).unwrap()];
    let mut keys: Vec<Vec<GroupElem>> = vec![found[0].elements().to_vec()];
    let mut queue: Vec<usize> = vec![0];
    while let Some(idx) = queue.pop() {
        let gens = found[idx].generators().to_vec();
        for x in &elements {
            if found[idx].contains(x) {
                continue;
            }
            let mut bigger = gens.clone();
            bigger.push(x.clone());
            let s = subgroup_generated(g, &bigger).unwrap();
            let key: Vec<GroupElem> = s.elements().to_vec();
            if !keys.contains(&key) {
                keys.push(key);
                found.push(s);
                queue.push(found.len() - 1);
            }
        }
    }
    found
}

/// Every alternating bicharacter on the given subgroup, enumerated
/// entry by entry on a basis.
pub fn alternating_forms_on(
    g: &FinAbGroup,
    s: &Subgroup,
) -> Vec<SubgroupBicharacter> {
    let basis = s.basis().to_vec();
    let orders = s.basis_orders().to_vec();
    let k = basis.len();
    let slots: Vec<(usize, usize, u64)> = (0..k)
        .flat_map(|i| {
            let orders = &orders;
            ((i + 1)..k).map(move |j| (i, j, num_integer::gcd(orders[i], orders[j])))
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0u64; slots.len()];
    loop {
        let mut matrix = vec![vec![QmodZ::ZERO; k]; k];
        for (s_idx, &(i, j, m)) in slots.iter().enumerate() {
            let v = QmodZ::new(choice[s_idx] as i64, m as i64);
            matrix[i][j] = v;
            matrix[j][i] = v.neg();
        }
        out.push(
            SubgroupBicharacter::from_generator_values(g, &basis, matrix).unwrap(),
        );
        // Odometer step over the mixed-radix choice vector.
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < slots[pos].2 {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Every nondegenerate alternating class on the given ambient group,
/// over every subgroup as support.
pub fn nondegenerate_classes(g: &FinAbGroup) -> Vec<BrauerClass> {
    let mut out = Vec::new();
    for s in all_subgroups(g) {
        for beta in alternating_forms_on(g, &s) {
            if beta.is_nondegenerate() {
                out.push(BrauerClass::new(g.clone(), beta).unwrap());
            }
        }
    }
    out
}

/// A deterministic test RNG.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random element of a group.
pub fn random_elem(g: &FinAbGroup, rng: &mut ChaCha8Rng) -> GroupElem {
    let coords: Vec<u64> = g.orders().iter().map(|&o| rng.gen_range(0..o)).collect();
    g.elem_u(&coords).unwrap()
}
