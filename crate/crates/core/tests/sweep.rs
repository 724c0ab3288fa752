use divisor_spectra::verify::{parse_checks, run_sweep, SweepConfig};
use proptest::prelude::*;

fn config(lo: u64, hi: u64, jobs: Option<usize>) -> SweepConfig {
    SweepConfig {
        lo,
        hi,
        tau_cap: 24,
        checks: parse_checks("all").unwrap(),
        jobs,
        ..SweepConfig::default()
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let one = run_sweep(&config(1, 400, Some(1))).unwrap();
    let four = run_sweep(&config(1, 400, Some(4))).unwrap();
    let default = run_sweep(&config(1, 400, None)).unwrap();
    assert_eq!(one, four);
    assert_eq!(one, default);
    let ns: Vec<u64> = one.per_n.iter().map(|r| r.n).collect();
    assert!(ns.windows(2).all(|w| w[0] < w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn every_n_is_accounted_for(lo in 1u64..3000, len in 1u64..60, cap in 2usize..40) {
        let mut cfg = config(lo, lo + len - 1, None);
        cfg.tau_cap = cap;
        let r = run_sweep(&cfg).unwrap();
        prop_assert_eq!((r.per_n.len() + r.skipped.len()) as u64, len);
        prop_assert!(r.all_passed());
    }
}
