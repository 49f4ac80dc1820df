use proptest::prelude::*;
use tstkit_core::compliance::{
    check_async_deadlock_bounded, check_sync_compliance, check_sync_compliance_with, is_a_deadlock, is_s_deadlock,
    sync_reachability, Verdict,
};
use tstkit_core::harness::{discretized_oracle, generate_pair, replay, GenConfig};
use tstkit_core::rational::{frac, int};
use tstkit_core::semantics::{Mode, SystemConfig};

fn config() -> GenConfig {
    GenConfig { max_depth: 4, clocks: 2, max_constant: 3, recursion: 0.3, ..GenConfig::default() }
}

fn flat(strict: bool) -> GenConfig {
    GenConfig { max_depth: 3, clocks: 1, max_constant: 3, recursion: 0.0, strict_guards: strict, ..GenConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn counterexamples_replay_to_deadlocks(seed in any::<u64>()) {
        let (p, q) = generate_pair(&config(), seed);
        if let Verdict::NotCompliant(t) = check_sync_compliance(&p, &q).unwrap() {
            prop_assert!(is_s_deadlock(&replay(&t, Mode::Sync).unwrap()));
        }
        if let Verdict::Deadlock(t) = check_async_deadlock_bounded(&p, &q, 3, 2000).unwrap() {
            prop_assert!(is_a_deadlock(&replay(&t, Mode::Async).unwrap()));
        }
    }

    #[test]
    fn sync_compliance_rules_out_async_deadlock(seed in any::<u64>()) {
        let (p, q) = generate_pair(&config(), seed);
        if check_sync_compliance(&p, &q).unwrap() == Verdict::Compliant {
            let v = check_async_deadlock_bounded(&p, &q, 3, 2000).unwrap();
            prop_assert!(matches!(v, Verdict::NoDeadlockFoundUpTo { .. }), "{}", v);
        }
    }

    #[test]
    fn extrapolation_keeps_the_verdict(seed in any::<u64>()) {
        let (p, q) = generate_pair(&flat(seed % 2 == 0), seed);
        let a = check_sync_compliance_with(&p, &q, true).unwrap();
        let b = check_sync_compliance_with(&p, &q, false).unwrap();
        prop_assert_eq!(a.name(), b.name());
    }

    #[test]
    fn checker_agrees_with_sampled_search(seed in any::<u64>(), strict in any::<bool>()) {
        let (p, q) = generate_pair(&flat(strict), seed);
        let s = SystemConfig::initial(p.clone(), q.clone());
        let oracle = discretized_oracle(&s, frac(1, 4), int(5), Mode::Sync, 200_000).unwrap();
        prop_assert!(!oracle.capped);
        let compliant = check_sync_compliance(&p, &q).unwrap() == Verdict::Compliant;
        prop_assert_eq!(compliant, !oracle.deadlock_reachable);
        let reach = sync_reachability(&p, &q).unwrap();
        prop_assert_eq!(reach.success, oracle.success_reachable);
        prop_assert_eq!(reach.deadlock, oracle.deadlock_reachable);
    }
}
