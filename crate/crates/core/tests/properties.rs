mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ka_conformance::checker::{analyze, check_condition1, check_condition2, check_ka, check_m};
use ka_conformance::fault::{
    member, sample_mutant, sample_ua_mutant, search_counterexample, FaultDomain, SamplerConfig,
};
use ka_conformance::format::{parse_machine, serialize_machine};
use ka_conformance::generators::{generate, GenConfig, Method};
use ka_conformance::mealy::{eccentricity, equivalent, passes, separating_family, Eccentricity};
use ka_conformance::obs::{basis_from_cover, check_functional_simulation};
use ka_conformance::random::{random_spec, random_spec_in};
use ka_conformance::{build_testing_tree, Input, TestSuite};

use common::*;

fn spec_strategy() -> impl Strategy<Value = ka_conformance::MealyMachine> {
    (1usize..=4, 1usize..=3, 2usize..=3, any::<u64>()).prop_map(|(s, i, o, seed)| random_spec(s, i, o, seed))
}

fn accepted_instance(seed: u64, k: usize) -> (ka_conformance::MealyMachine, ka_conformance::StateCover, TestSuite) {
    let spec = random_spec_in(2..=4, 2..=3, 2, seed);
    let cover = spec.minimal_state_cover().unwrap();
    let method = if seed.is_multiple_of(2) {
        Method::Wp
    } else {
        Method::Hsi
    };
    let suite = generate(&spec, &GenConfig::new(method, k, cover.clone())).unwrap();
    (spec, cover, suite)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifted_run_identities(m in spec_strategy(), seed in any::<u64>(), len in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = random_word(&mut rng, m.num_inputs(), len);
        let i = Input(rng.gen_range(0..m.num_inputs()) as u16);
        for q in m.states() {
            let (mid, mut out) = m.run(q, &sigma).unwrap();
            let (end, tail) = m.run(mid, &[i]).unwrap();
            out.extend(tail);
            prop_assert_eq!(m.run(q, &sigma.appended(i)), Some((end, out)));
            prop_assert_eq!(m.reach(q, &sigma.appended(i)), m.successor(mid, i));
        }
    }

    #[test]
    fn equivalence_matches_exhaustive_words(
        s in 1usize..=3, seed in any::<u64>(), edits in 0usize..3,
    ) {
        let spec = random_spec(s, 2, 2, seed);
        let cover = spec.minimal_state_cover().unwrap();
        let cfg = SamplerConfig { max_edits: edits, ..SamplerConfig::default() };
        let other = sample_mutant(&spec, &cover, 1, seed, &cfg).unwrap().machine;
        let bound = spec.num_states() * other.num_states();
        let differs = (1..=bound).any(|len| {
            words_of_len(2, len).iter().any(|w| spec.output_names(w) != other.output_names(w))
        });
        let eq = equivalent(&spec, &other).unwrap();
        prop_assert_eq!(eq.is_equivalent(), !differs);
        if let Some(w) = eq.counterexample() {
            prop_assert_ne!(spec.output_names(w), other.output_names(w));
        }
    }

    #[test]
    fn harmonized_family_shares_separators(m in spec_strategy()) {
        let fam = separating_family(&m, true).unwrap();
        for q in m.states() {
            for r in m.states().filter(|&r| r != q) {
                let sep = fam.get(q).intersection(fam.get(r)).any(|w| {
                    m.run(q, w).map(|x| x.1) != m.run(r, w).map(|x| x.1)
                });
                prop_assert!(sep, "no shared separator for {} and {}", q, r);
            }
        }
    }

    #[test]
    fn minimal_cover_is_canonical(m in spec_strategy()) {
        let cover = m.minimal_state_cover().unwrap();
        prop_assert!(cover.is_prefix_closed());
        prop_assert!(cover.is_minimal_for(&m));
        let mut reached: Vec<usize> = cover.entries().iter().map(|(_, q)| *q).collect();
        reached.sort_unstable();
        prop_assert_eq!(reached, m.states().collect::<Vec<_>>());
        prop_assert_eq!(m.minimal_state_cover().unwrap(), cover);
    }

    #[test]
    fn contraction_eccentricity_matches_per_source(
        s in 1usize..=6, i in 1usize..=3, seed in any::<u64>(), picks in prop::collection::vec(any::<usize>(), 1..4),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table: Vec<(usize, u16)> = (0..s * i).map(|_| (rng.gen_range(0..s), 0)).collect();
        let alphabet = |n: usize, p: &str| ka_conformance::Alphabet::new((0..n).map(|x| format!("{p}{x}"))).unwrap();
        let m = ka_conformance::MealyMachine::from_table(alphabet(i, "i"), alphabet(1, "o"), &table, 0);
        let sources: Vec<usize> = picks.iter().map(|p| p % s).collect();
        let fast = eccentricity(&m, &sources).unwrap();
        let expected = match naive_eccentricity(&m, &sources) {
            Some(d) => Eccentricity::Finite(d),
            None => Eccentricity::Unreachable,
        };
        prop_assert_eq!(fast, expected);
    }

    #[test]
    fn passing_iff_simulation(seed in any::<u64>(), edits in 0usize..4, tests in 1usize..6) {
        let spec = random_spec_in(1..=4, 1..=3, 2, seed);
        let cover = spec.minimal_state_cover().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let suite = random_suite(&mut rng, &spec, tests, 6);
        let cfg = SamplerConfig { max_edits: edits, ..SamplerConfig::default() };
        let imp = sample_mutant(&spec, &cover, 1, seed, &cfg).unwrap().machine;
        let tree = build_testing_tree(&spec, &suite).unwrap();
        prop_assert_eq!(passes(&imp, &spec, &suite).unwrap().is_pass(), check_functional_simulation(&tree, &imp));
    }

    #[test]
    fn apartness_matches_oracle(seed in any::<u64>()) {
        let (_, _, tree) = random_tree(seed, 80);
        let fast = tree.apartness();
        let slow = naive_matrix(&tree);
        for q in tree.nodes() {
            prop_assert!(!fast.is_apart(q, q));
            for r in tree.nodes() {
                prop_assert_eq!(fast.is_apart(q, r), fast.is_apart(r, q));
                prop_assert_eq!(fast.is_apart(q, r), slow[q][r], "pair ({}, {})", q, r);
            }
        }
    }

    #[test]
    fn witnesses_and_weak_cotransitivity(seed in any::<u64>()) {
        let (_, _, tree) = random_tree(seed, 60);
        let m = tree.apartness();
        for r in tree.nodes() {
            for r2 in tree.nodes().filter(|&x| x < r && m.is_apart(r, x)) {
                let w = m.witness(&tree, r, r2).unwrap();
                prop_assert!(witness_separates(&tree, r, r2, &w));
                for q in tree.nodes() {
                    if w.iter().try_fold(q, |n, &i| tree.child(n, i)).is_some() {
                        prop_assert!(m.is_apart(r, q) || m.is_apart(r2, q), "{} {} {}", r, r2, q);
                    }
                }
            }
        }
    }

    #[test]
    fn apartness_maps_to_inequivalent_states(seed in any::<u64>(), edits in 0usize..4) {
        let (spec, suite, tree) = random_tree(seed, 60);
        let cover = spec.minimal_state_cover().unwrap();
        let cfg = SamplerConfig { max_edits: edits, ..SamplerConfig::default() };
        let imp = sample_mutant(&spec, &cover, 1, seed, &cfg).unwrap().machine;
        prop_assume!(passes(&imp, &spec, &suite).unwrap().is_pass());
        prop_assert!(check_functional_simulation(&tree, &imp));
        let m = tree.apartness();
        let state = |q: usize| imp.reach(imp.initial(), &tree.access(q)).unwrap();
        for q in tree.nodes() {
            for r in tree.nodes().filter(|&r| r < q && m.is_apart(q, r)) {
                let same = ka_conformance::mealy::state_equivalent(&imp, state(q), &imp, state(r)).unwrap();
                prop_assert!(!same);
            }
        }
    }

    #[test]
    fn strata_partition_by_distance(seed in any::<u64>(), k in 0usize..3) {
        let (spec, cover, suite) = accepted_instance(seed, k);
        let tree = build_testing_tree(&spec, &suite).unwrap();
        let strat = basis_from_cover(&tree, &cover, &tree.apartness()).unwrap();
        for q in tree.nodes() {
            let mut d = 0;
            let mut n = q;
            while !strat.is_basis(n) {
                n = tree.parent(n).unwrap();
                d += 1;
            }
            match strat.level(q) {
                None => prop_assert!(strat.is_basis(q)),
                Some(j) => {
                    prop_assert_eq!(j + 1, d);
                    prop_assert!(strat.stratum(j).contains(&q));
                }
            }
        }
        let total = strat.basis().len() + (0..strat.num_strata()).map(|j| strat.stratum(j).len()).sum::<usize>();
        prop_assert_eq!(total, tree.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn accepted_implies_identified_and_layer_pairs(seed in any::<u64>(), k in 0usize..3) {
        let (spec, cover, suite) = accepted_instance(seed, k);
        prop_assert!(check_ka(&spec, &suite, &cover, k).unwrap().is_accepted());
        let a = analyze(&spec, &suite, &cover).unwrap();
        let strat = a.strat.unwrap();
        let naive_c = |q: usize| -> Vec<usize> {
            strat.basis().iter().copied().filter(|&b| !naive_apart(&a.tree, q, b)).collect()
        };
        for q in strat.below(k) {
            prop_assert_eq!(naive_c(q).len(), 1, "F^<k node {} not identified", q);
        }
        for i in 0..=k {
            for j in i + 1..=k {
                for &q in strat.stratum(i) {
                    for &r in strat.stratum(j) {
                        prop_assert!(naive_c(q) == naive_c(r) || naive_apart(&a.tree, q, r));
                    }
                }
            }
        }
    }

    #[test]
    fn condition1_iff_condition2_when_identified(seed in any::<u64>(), k in 1usize..3, tests in 1usize..40) {
        let spec = random_spec_in(2..=4, 2..=3, 2, seed);
        let cover = spec.minimal_state_cover().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut suite = random_suite(&mut rng, &spec, tests, 7);
        suite.extend(cover.words().filter(|&w| !w.is_empty()).cloned());
        let a = analyze(&spec, &suite, &cover).unwrap();
        let Ok(strat) = a.strat else { return Ok(()) };
        prop_assume!(strat.stratum(k).iter().all(|&q| strat.is_identified(q)));
        let c1 = check_condition1(&strat, &a.matrix, k);
        let c2 = check_condition2(&strat, &a.matrix, k);
        prop_assert_eq!(c1.is_empty(), c2.is_empty());
    }

    #[test]
    fn extending_accepted_suite_stays_accepted(seed in any::<u64>(), k in 0usize..2, extra in 1usize..10) {
        let (spec, cover, suite) = accepted_instance(seed, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut bigger = suite.clone();
        bigger.extend(random_suite(&mut rng, &spec, extra, 8).maximal().cloned());
        prop_assert!(check_ka(&spec, &bigger, &cover, k).unwrap().is_accepted());
    }

    #[test]
    fn accepted_suite_kills_sampled_mutants(seed in any::<u64>(), k in 0usize..2) {
        let (spec, cover, suite) = accepted_instance(seed, k);
        for s in 0..50 {
            let mu = sample_mutant(&spec, &cover, k, seed.wrapping_add(s), &SamplerConfig::default()).unwrap();
            prop_assert!(mu.machine.is_complete());
            let domain = FaultDomain::UkA { k, cover: cover.words().cloned().collect() };
            prop_assert!(member(&mu.machine, &domain).unwrap());
            if passes(&mu.machine, &spec, &suite).unwrap().is_pass() {
                prop_assert!(equivalent(&spec, &mu.machine).unwrap().is_equivalent());
            }
            let ua = sample_ua_mutant(&spec, &cover, seed.wrapping_add(s), &SamplerConfig::default()).unwrap();
            let ua_domain = FaultDomain::UA { cover: cover.words().cloned().collect() };
            prop_assert!(member(&ua.machine, &ua_domain).unwrap());
            prop_assert!(!passes(&ua.machine, &spec, &suite).unwrap().is_pass());
        }
    }

    #[test]
    fn generated_suites_are_monotone_and_defined(seed in any::<u64>(), k in 0usize..2) {
        let spec = random_spec_in(2..=5, 2..=3, 2, seed);
        let cover = spec.minimal_state_cover().unwrap();
        for method in [Method::Wp, Method::Hsi, Method::W] {
            let a = generate(&spec, &GenConfig::new(method, k, cover.clone())).unwrap();
            let b = generate(&spec, &GenConfig::new(method, k + 1, cover.clone())).unwrap();
            prop_assert!(a.is_covered_by(&b));
            for t in a.tests() {
                prop_assert!(spec.run(spec.initial(), t).is_some());
            }
            if method != Method::W {
                prop_assert!(check_ka(&spec, &a, &cover, k).unwrap().is_accepted());
            }
        }
        let h = generate(&spec, &GenConfig::new(Method::Hsi, k, cover.clone())).unwrap();
        prop_assert!(check_m(&spec, &h, &cover, k).unwrap().is_accepted());
    }

    #[test]
    fn search_hits_pass_and_differ(seed in any::<u64>()) {
        let spec = random_spec_in(2..=3, 2..=2, 2, seed);
        let cover = spec.minimal_state_cover().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let suite = random_suite(&mut rng, &spec, 3, 4);
        let domain = FaultDomain::ka_union(1, &cover);
        if let Some(c) = search_counterexample(&spec, &suite, &domain, 2_000, seed).unwrap() {
            prop_assert!(passes(&c.mutant.machine, &spec, &suite).unwrap().is_pass());
            prop_assert!(member(&c.mutant.machine, &domain).unwrap());
            prop_assert_ne!(spec.output_names(&c.distinguishing), c.mutant.machine.output_names(&c.distinguishing));
        }
    }

    #[test]
    fn machine_and_suite_round_trip(m in spec_strategy(), seed in any::<u64>(), tests in 0usize..8) {
        prop_assert_eq!(parse_machine(&serialize_machine(&m)).unwrap(), m.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let suite = random_suite(&mut rng, &m, tests, 5);
        let back = TestSuite::parse(m.inputs(), &suite.serialize(m.inputs())).unwrap();
        prop_assert_eq!(back, suite.normalized());
    }
}

#[test]
fn cover_words_reach_their_states() {
    let spec = random_spec(4, 2, 2, 9);
    let cover = spec.minimal_state_cover().unwrap();
    for (w, q) in cover.entries() {
        assert_eq!(spec.reach(spec.initial(), w), Some(*q));
    }
    assert!(cover.words().any(|w| w.is_empty()));
}
