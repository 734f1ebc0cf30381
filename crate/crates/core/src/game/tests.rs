use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::netcore::{link_difference, Connectivity};
use Side::{A, B};

fn net(n: usize, edges: &[(usize, usize)]) -> Network {
    Network::new(n, edges, Connectivity::Required).unwrap()
}

fn path3() -> Network {
    net(3, &[(0, 1), (1, 2)])
}

fn complete(n: usize) -> Network {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    net(n, &e)
}

fn star(leaves: usize) -> Network {
    let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    net(leaves + 1, &e)
}

/// Cliques {0..5} and {5..10} joined by the edge 4-5.
fn two_cliques() -> Network {
    let mut e = Vec::new();
    for base in [0, 5] {
        for i in 0..5 {
            for j in i + 1..5 {
                e.push((base + i, base + j));
            }
        }
    }
    e.push((4, 5));
    net(10, &e)
}

/// A 5-clique with a triangle hanging off node 0 and a two-node tail on node 1.
fn stepwise_chain() -> Network {
    let mut e = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            e.push((i, j));
        }
    }
    e.extend([(0, 5), (5, 6), (5, 7), (6, 7), (1, 9), (8, 9)]);
    net(10, &e)
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Network {
    let mut e = Vec::new();
    for i in 1..n {
        e.push((rng.random_range(0..i), i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(extra) {
                e.push((i, j));
            }
        }
    }
    net(n, &e)
}

fn homogeneous_society(net: Network, w: f64, alpha: f64, beta: f64, gamma: f64, a: (f64, f64), b: (f64, f64)) -> Society {
    let n = net.n();
    let ids = IdentitySet::new(vec![IdentitySpec::new("A", a.0, a.1), IdentitySpec::new("B", b.0, b.1)]).unwrap();
    Society::new(net, ids, Population::homogeneous(n, w, alpha, beta, gamma).unwrap()).unwrap()
}

#[test]
fn relative_cost_examples() {
    let pop = Population::homogeneous(2, 1.0, 0.5, 1.0, 1.0).unwrap();
    let rc = relative_cost(&IdentitySpec::new("A", 1.0, 1.5), &IdentitySpec::new("B", 0.8, 0.5), &pop).unwrap();
    assert!((rc.c + 0.2).abs() < 1e-12);
    assert!(rc.a_favored());

    let same = relative_cost(&IdentitySpec::new("A", 0.3, 0.7), &IdentitySpec::new("B", 0.3, 0.7), &pop).unwrap();
    assert_eq!(same.c, 0.0);

    let low = relative_cost(&IdentitySpec::new("A", 0.1, 1.0), &IdentitySpec::new("B", 0.0, 2.0), &pop).unwrap();
    let high = relative_cost(&IdentitySpec::new("A", 0.4, 1.0), &IdentitySpec::new("B", 0.0, 2.0), &pop).unwrap();
    assert!(high.c < low.c);
}

#[test]
fn relative_cost_orientation_swaps_sides() {
    let pop = Population::homogeneous(2, 1.0, 0.0, 2.0, 1.0).unwrap();
    let rc = relative_cost(&IdentitySpec::new("L", 0.0, 0.5), &IdentitySpec::new("H", 1.0, 0.5), &pop).unwrap();
    assert!((rc.c - 0.5).abs() < 1e-12);
    let o = rc.oriented();
    assert_eq!((o.a.as_str(), o.b.as_str()), ("H", "L"));
    assert!((o.c + 0.5).abs() < 1e-12);
}

#[test]
fn relative_cost_rejects_zero_beta_and_heterogeneity() {
    let a = IdentitySpec::new("A", 1.0, 1.0);
    let b = IdentitySpec::new("B", 0.0, 1.0);
    let err = relative_cost(&a, &b, &Population::homogeneous(2, 1.0, 0.0, 0.0, 1.0).unwrap()).unwrap_err();
    assert!(err.to_string().contains("neighbor term absent"), "{err}");
    let het = Population::new(vec![1.0, 2.0], 0.0, 1.0, 1.0).unwrap();
    assert!(relative_cost(&a, &b, &het).is_err());
}

#[test]
fn best_response_examples() {
    let st3 = star(3);
    assert_eq!(best_response_identity(&st3, &[B, A, B, B], 0, -2.0), A);
    assert_eq!(best_response_identity(&st3, &[A, B, B, B], 0, -2.0), B);
    assert_eq!(best_response_identity(&path3(), &[A, B, B], 1, 0.0), A);
}

#[test]
fn equilibrium_check_examples() {
    let p = path3();
    for c in [0.0, -0.5, -3.0] {
        assert!(is_identity_equilibrium(&p, &[A; 3], c).is_equilibrium);
    }
    assert!(is_identity_equilibrium(&complete(4), &[B; 4], -2.0).is_equilibrium);
    let chk = is_identity_equilibrium(&p, &[A, B, A], -0.5);
    assert!(!chk.is_equilibrium);
    assert!(chk.violators.contains(&1));
}

#[test]
fn all_low_examples() {
    assert!(all_low_equilibrium_exists(&complete(4), -2.0).unwrap());
    assert!(!all_low_equilibrium_exists(&star(3), -1.5).unwrap());
    assert!(all_low_equilibrium_exists(&path3(), 0.0).unwrap());
    assert!(all_low_equilibrium_exists(&path3(), 0.5).is_err());
}

#[test]
fn threshold_examples() {
    let t = threshold_for(6, -2.0);
    assert_eq!(t.absolute, 2.0);
    assert!((t.fraction.unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(t.kind, ThresholdKind::Conditional);
    for d in 1..8 {
        assert_eq!(threshold_for(d, 0.0).fraction, Some(0.5));
    }
    let u = threshold_for(1, -2.0);
    assert_eq!(u.absolute, -0.5);
    assert_eq!(u.kind, ThresholdKind::Unconditional);
    assert!(u.adopts(0));
    assert_eq!(threshold_for(0, -1.0).kind, ThresholdKind::Isolated);
    assert!(thresholds(&path3(), 1.0).is_err());
}

#[test]
fn two_cliques_enumeration_contains_split() {
    let tc = two_cliques();
    let eqs = enumerate_equilibria(&tc, -2.0, DEFAULT_ENUMERATION_LIMIT).unwrap();
    let split: Vec<Side> = (0..10).map(|i| if i < 5 { A } else { B }).collect();
    assert!(eqs.contains(&split));
    assert!(eqs.contains(&vec![A; 10]));
    // no mixed equilibrium once the clique cohesion 3 is below |c|;
    // all-B survives until |c| reaches the minimum degree
    let eqs = enumerate_equilibria(&tc, -3.5, DEFAULT_ENUMERATION_LIMIT).unwrap();
    assert_eq!(eqs, vec![vec![B; 10], vec![A; 10]]);
    let eqs = enumerate_equilibria(&tc, -4.0, DEFAULT_ENUMERATION_LIMIT).unwrap();
    assert_eq!(eqs, vec![vec![A; 10]]);
}

#[test]
fn path_cascade_two_rounds() {
    let tr = cascade(&path3(), &[B; 3], &[-1.5], CascadeMode::Monotone).unwrap();
    assert_eq!(tr.rounds.len(), 2);
    assert_eq!(tr.rounds[0].switchers, vec![0, 2]);
    assert_eq!(tr.rounds[1].switchers, vec![1]);
    assert_eq!(tr.a_fraction(), 1.0);
    assert!(tr.converged);
}

#[test]
fn no_trigger_no_flips() {
    let tr = cascade(&complete(4), &[B; 4], &[-0.5], CascadeMode::Monotone).unwrap();
    assert!(tr.rounds.is_empty());
    assert_eq!(tr.a_fraction(), 0.0);
    let tr = cascade(&complete(4), &[B; 4], &[-2.0], CascadeMode::Monotone).unwrap();
    assert!(tr.rounds.is_empty());
}

#[test]
fn two_cliques_cascade() {
    let tc = two_cliques();
    let split: Vec<Side> = (0..10).map(|i| if i < 5 { A } else { B }).collect();
    let b_clique = [5, 6, 7, 8, 9];

    // seeded by one A clique: the bridge end flips first, then its clique
    let tr = cascade(&tc, &split, &[-3.5], CascadeMode::Monotone).unwrap();
    assert_eq!(tr.a_fraction(), 1.0);
    assert_eq!(tr.rounds[0].switchers, vec![5]);
    assert!(find_blocking_set(&tc, -3.5, Some(&b_clique)).unwrap().is_empty());

    let tr = cascade(&tc, &split, &[-2.5], CascadeMode::Monotone).unwrap();
    assert!(tr.rounds.is_empty());
    assert_eq!(tr.stall_set(), find_blocking_set(&tc, -2.5, Some(&b_clique)).unwrap());

    // from all-B nobody has degree <= 3.5, so nothing starts
    let tr = cascade(&tc, &[B; 10], &[-3.5], CascadeMode::Monotone).unwrap();
    assert!(tr.rounds.is_empty());
    assert_eq!(tr.stall_set(), find_blocking_set(&tc, -3.5, None).unwrap());
    let tr = cascade(&tc, &[B; 10], &[-4.0], CascadeMode::Monotone).unwrap();
    assert_eq!(tr.a_fraction(), 1.0);
}

#[test]
fn chain_diffuses_stepwise() {
    let g = stepwise_chain();
    let tr = cascade(&g, &[B; 10], &[-0.5, -1.0, -2.0, -3.0], CascadeMode::Monotone).unwrap();
    assert_eq!(tr.rounds_in_phase(0), 0);
    let phase1: Vec<usize> = tr.rounds.iter().filter(|r| r.phase == 1).flat_map(|r| r.switchers.clone()).collect();
    assert_eq!(phase1, vec![8, 9]);
    let phase2: Vec<usize> = tr.rounds.iter().filter(|r| r.phase == 2).flat_map(|r| r.switchers.clone()).collect();
    assert_eq!(phase2, vec![6, 7, 5]);
    let after2 = tr.rounds.iter().rfind(|r| r.phase == 2).unwrap();
    assert_eq!(after2.assignment[..5], [B; 5]);
    assert_eq!(tr.a_fraction(), 1.0);
}

#[test]
fn monotone_mode_rejects_rising_schedule() {
    assert!(cascade(&path3(), &[B; 3], &[-1.0, -0.5], CascadeMode::Monotone).is_err());
    assert!(cascade(&path3(), &[B; 3], &[], CascadeMode::Monotone).is_err());
    assert!(cascade(&path3(), &[B; 2], &[-1.0], CascadeMode::Monotone).is_err());
}

#[test]
fn general_mode_falls_back_on_cycles() {
    let pair = net(2, &[(0, 1)]);
    let tr = cascade(&pair, &[A, B], &[0.0], CascadeMode::General).unwrap();
    assert_eq!(tr.cycles.len(), 1);
    assert_eq!(tr.cycles[0].period, 2);
    assert!(tr.rounds.iter().all(|r| r.sequential));
    assert!(tr.converged);
    assert!(is_identity_equilibrium(&pair, tr.final_assignment(), 0.0).is_equilibrium);
}

#[test]
fn general_mode_allows_a_to_b() {
    // all-A with B intrinsically better and thin ties: everyone leaves A
    let tr = cascade(&path3(), &[A; 3], &[2.5], CascadeMode::General).unwrap();
    assert!(tr.converged);
    assert_eq!(tr.final_assignment(), &[B; 3]);
}

#[test]
fn diffusion_condition_examples() {
    let r = full_diffusion_conditions(&path3(), -1.5).unwrap();
    assert!(r.necessary_min_degree && r.necessary_no_blocking_set && r.sufficient_max_degree);
    assert!(r.predicts_full_diffusion && r.cascade_full_diffusion);

    let r = full_diffusion_conditions(&complete(4), -2.0).unwrap();
    assert!(!r.necessary_min_degree);
    assert_eq!(r.cascade_switches, 0);

    let r = full_diffusion_conditions(&two_cliques(), -2.5).unwrap();
    assert!(!r.necessary_no_blocking_set);
    assert!(!r.cascade_full_diffusion);
    assert_eq!(r.cascade_stall_set, r.blocking_set);
}

#[test]
fn value_functions_reproduce_c_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let g = random_connected(&mut rng, 9, 0.3);
        let beta = rng.random_range(0.2..2.0);
        let soc = homogeneous_society(
            g,
            rng.random_range(0.5..2.0),
            rng.random_range(0.0..2.0),
            beta,
            rng.random_range(0.0..2.0),
            (rng.random_range(0.0..2.0), rng.random_range(0.0..3.0)),
            (rng.random_range(0.0..2.0), rng.random_range(0.0..3.0)),
        );
        let ids = soc.identities();
        let rc = relative_cost(&ids.specs()[0], &ids.specs()[1], soc.pop()).unwrap();
        let sides: Vec<Side> = (0..soc.n()).map(|_| if rng.random_bool(0.5) { A } else { B }).collect();
        let orient = Orientation::new(IdentityId(0), IdentityId(1)).unwrap();
        let assign = orient.to_assignment(&sides, ids).unwrap();
        let profile = action::solve_actions(&soc, &assign).unwrap();
        for i in 0..soc.n() {
            let (da, db) = side_degrees(soc.net(), &sides, i);
            if (da as f64 - db as f64 - rc.c).abs() * beta < 1e-6 {
                continue;
            }
            let general = best_response_general(&soc, &assign, &profile, i, DeviationMode::FixedProfile).unwrap();
            assert_eq!(general, orient.id(best_response_identity(soc.net(), &sides, i, rc.c)));
        }
    }
}

#[test]
fn general_equilibrium_check_on_consensus() {
    let soc = homogeneous_society(two_cliques(), 1.0, 0.5, 1.0, 1.0, (1.0, 1.0), (0.5, 1.0));
    let all_a = IdentityAssignment::uniform(10, IdentityId(0), soc.identities()).unwrap();
    assert!(is_identity_equilibrium_general(&soc, &all_a, DeviationMode::FixedProfile).unwrap().is_equilibrium);
    let (_, table) = values_at_equilibrium(&soc, &all_a, DeviationMode::FixedProfile).unwrap();
    assert!((table.intrinsic[0][0] - table.intrinsic[0][1] - 0.5).abs() < 1e-12);
}

#[test]
fn intrinsic_gap_matches_cost() {
    let pop = Population::homogeneous(3, 1.3, 0.4, 0.7, 0.9).unwrap();
    let a = IdentitySpec::new("A", 0.2, 1.1);
    let b = IdentitySpec::new("B", 0.5, 0.4);
    let rc = relative_cost(&a, &b, &pop).unwrap();
    assert!((rc.c - (rc.intrinsic_b - rc.intrinsic_a) / 0.7).abs() < 1e-12);
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Network> {
    (2..=max_n, any::<u64>(), 0.0..0.8f64).prop_map(|(n, seed, p)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_connected(&mut rng, n, p)
    })
}

proptest! {
    #[test]
    fn threshold_matches_best_response(c in -12.0..0.0f64, da in 0usize..12, db in 0usize..12) {
        let d = da + db;
        let t = threshold_for(d, c);
        let br = prefers_a(da, db, c);
        prop_assert_eq!(br == A, t.adopts(da));
        // integer-valued costs exercise the tie
        let ci = c.round();
        prop_assert_eq!(prefers_a(da, db, ci) == A, threshold_for(d, ci).adopts(da));
    }

    #[test]
    fn threshold_fraction_increases_with_degree(c in -5.0..-1e-3f64, d in 1usize..40) {
        let lo = threshold_for(d, c).fraction.unwrap();
        let hi = threshold_for(d + 1, c).fraction.unwrap();
        prop_assert!(hi > lo);
    }

    #[test]
    fn all_b_equilibrium_iff_min_degree(g in arb_graph(9), c in -6.0..0.0f64) {
        let eqs = enumerate_equilibria(&g, c, 12).unwrap();
        prop_assert!(eqs.contains(&vec![A; g.n()]));
        prop_assert_eq!(eqs.contains(&vec![B; g.n()]), all_low_equilibrium_exists(&g, c).unwrap());
    }

    #[test]
    fn blocking_set_is_sound_and_maximal(g in arb_graph(9), c in -5.0..0.0f64) {
        let s = find_blocking_set(&g, c, None).unwrap();
        let mut sides = vec![A; g.n()];
        for &i in &s {
            sides[i] = B;
        }
        prop_assert!(is_identity_equilibrium(&g, &sides, c).is_equilibrium);
        if !s.is_empty() {
            let view = link_difference(&g, &s).unwrap();
            prop_assert!(view.min_k().unwrap() as f64 > c.abs());
        }
        for eq in enumerate_equilibria(&g, c, 12).unwrap() {
            for (i, side) in eq.iter().enumerate() {
                if *side == B {
                    prop_assert!(s.contains(&i));
                }
            }
        }
    }

    #[test]
    fn monotone_cascade_grows_with_attractiveness(g in arb_graph(12), c1 in -6.0..0.0f64, gap in 0.0..4.0f64) {
        let c2 = c1 - gap;
        let weak = cascade(&g, &vec![B; g.n()], &[c1], CascadeMode::Monotone).unwrap();
        let strong = cascade(&g, &vec![B; g.n()], &[c2], CascadeMode::Monotone).unwrap();
        for i in 0..g.n() {
            if weak.final_assignment()[i] == A {
                prop_assert_eq!(strong.final_assignment()[i], A);
            }
        }
        prop_assert_eq!(strong.stall_set(), find_blocking_set(&g, c2, None).unwrap());
        for w in strong.rounds.windows(2) {
            for i in 0..g.n() {
                if w[0].assignment[i] == A {
                    prop_assert_eq!(w[1].assignment[i], A);
                }
            }
        }
    }

    #[test]
    fn general_cascade_ends_in_equilibrium(g in arb_graph(10), c in -4.0..4.0f64, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let init: Vec<Side> = (0..g.n()).map(|_| if rng.random_bool(0.5) { A } else { B }).collect();
        let tr = cascade(&g, &init, &[c], CascadeMode::General).unwrap();
        prop_assert!(tr.converged);
        prop_assert!(is_identity_equilibrium(&g, tr.final_assignment(), c).is_equilibrium);
    }
}
