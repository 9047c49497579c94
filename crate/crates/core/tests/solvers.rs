mod common;

use proptest::prelude::*;
use sched_reduce::generators::{gen_random_umps, gen_random_umps_with_lengths};
use sched_reduce::model::{
    validate_commdelay, validate_related, validate_umps, CommDelayInstance, Machines, PrecedenceDag, RelatedInstance,
};
use sched_reduce::rational::{int, Rational};
use sched_reduce::reductions::umps_to_commdelay;
use sched_reduce::solvers::{
    greedy_umps, list_schedule_commdelay, solve_commdelay_exact, solve_related_exact, solve_umps_exact, SolveLimits,
};

fn prob(num: i128) -> Rational {
    Rational::new(num, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn umps_exact_matches_time_indexed(n in 1usize..=6, m in 1usize..=3, p in 0i128..=4, len in 1u64..=3, seed: u64) {
        let inst = gen_random_umps_with_lengths(n, m, prob(p), len, seed).unwrap();
        let r = solve_umps_exact(&inst, &SolveLimits::default()).unwrap();
        let (oracle, oracle_sched) = common::umps_oracle(&inst);
        prop_assert!(r.proven_optimal);
        prop_assert_eq!(r.optimum, oracle);
        prop_assert!(validate_umps(&inst, &r.schedule).unwrap().feasible());
        prop_assert!(validate_umps(&inst, &oracle_sched).unwrap().feasible());
        prop_assert_eq!(r.schedule.makespan().unwrap(), r.optimum);
        let order = inst.dag().topological_order().unwrap();
        prop_assert!(greedy_umps(&inst, &order).unwrap().makespan().unwrap() >= r.optimum);
    }

    #[test]
    fn commdelay_exact_matches_time_indexed(
        n in 1usize..=5,
        p in 0i128..=4,
        c in 0u64..=3,
        bound in prop::option::of(1usize..=3),
        seed: u64,
    ) {
        let base = gen_random_umps_with_lengths(n, 1, prob(p), 2, seed).unwrap();
        let machines = bound.map_or(Machines::Unbounded, Machines::Bounded);
        let inst = CommDelayInstance::uniform(base.lengths().to_vec(), base.dag().clone(), c, machines).unwrap();
        let r = solve_commdelay_exact(&inst, &SolveLimits::default()).unwrap();
        let (oracle, _) = common::commdelay_oracle(&inst);
        prop_assert!(r.proven_optimal);
        prop_assert_eq!(r.optimum, oracle);
        prop_assert!(validate_commdelay(&inst, &r.schedule).unwrap().feasible());
        let m = bound.unwrap_or(n);
        let order = inst.dag().topological_order().unwrap();
        prop_assert!(list_schedule_commdelay(&inst, m, &order).unwrap().makespan().unwrap() >= r.optimum);
    }

    #[test]
    fn reduced_commdelay_matches_oracle(n in 2usize..=4, m in 1usize..=2, p in 0i128..=4, seed: u64) {
        let inst = gen_random_umps(n, m, prob(p), seed).unwrap();
        let art = umps_to_commdelay(&inst).unwrap();
        let r = solve_commdelay_exact(&art.output, &SolveLimits::default()).unwrap();
        prop_assert_eq!(r.optimum, common::commdelay_oracle(&art.output).0);
    }

    #[test]
    fn related_exact_matches_time_indexed(
        lengths in prop::collection::vec(1u64..=3, 1..=4),
        speeds in prop::collection::vec(1u64..=3, 1..=3),
        p in 0i128..=4,
        seed: u64,
    ) {
        let n = lengths.len();
        let dag = gen_random_umps(n, 1, prob(p), seed).unwrap().dag().clone();
        let inst = RelatedInstance::new(speeds, lengths, dag).unwrap();
        let r = solve_related_exact(&inst, &SolveLimits::default()).unwrap();
        prop_assert_eq!(r.optimum, common::related_oracle(&inst));
        prop_assert!(validate_related(&inst, &r.schedule).unwrap().feasible());
    }
}

#[test]
fn budget_exhaustion_returns_best_so_far() {
    let inst = (0..100)
        .map(|seed| gen_random_umps(10, 3, prob(1), seed).unwrap())
        .find(|i| solve_umps_exact(i, &SolveLimits::default()).unwrap().states_explored > 3)
        .expect("some instance needs more than three nodes");
    let lim = SolveLimits { max_states: 3, ..SolveLimits::default() };
    let r = solve_umps_exact(&inst, &lim).unwrap();
    assert!(!r.proven_optimal);
    assert!(validate_umps(&inst, &r.schedule).unwrap().feasible());
    assert_eq!(r.schedule.makespan().unwrap(), r.optimum);
}

#[test]
fn edgeless_and_chain_optima() {
    let free = gen_random_umps(6, 3, int(0), 2).unwrap();
    let load = (0..3).map(|i| free.jobs_on(i).len()).max().unwrap();
    assert_eq!(solve_umps_exact(&free, &SolveLimits::default()).unwrap().optimum, int(load as i128));
    let chain = gen_random_umps(6, 3, int(1), 2).unwrap();
    assert_eq!(solve_umps_exact(&chain, &SolveLimits::default()).unwrap().optimum, int(6));
}

#[test]
fn unbounded_identical_machines_run_everything_in_parallel() {
    let inst = CommDelayInstance::uniform(vec![2; 5], PrecedenceDag::empty(5), 1, Machines::Unbounded).unwrap();
    assert_eq!(solve_commdelay_exact(&inst, &SolveLimits::default()).unwrap().optimum, int(2));
}
