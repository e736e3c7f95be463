use polarkit::construction::{
    construct_polar, construct_polar_with, construct_rm, monte_carlo_profile, polar_info_set, reliability_profile,
    rm_info_set, rm_pathology_check, threshold_set, ProfileMethod, Rule,
};
use polarkit::simulate::{
    polarization_stats, point_at_rate, rate_reliability_curve, rm_vs_polar, run_bler, scaling_probe,
};
use polarkit::synthesis::{bec_profile, brute_force_split};
use polarkit::channels::DmcTable;
use polarkit::{Channel, CodeSpec, Exec, Method, ReliabilityProfile};
use proptest::prelude::*;

fn one_based(set: &[usize]) -> Vec<usize> {
    set.iter().map(|i| i + 1).collect()
}

#[test]
fn polar_rule_examples() {
    let ch = Channel::Bec(0.5);
    let code = construct_polar(&ch, 3, 4, Method::ExactBec).unwrap();
    assert_eq!(one_based(code.info_set()), [4, 6, 7, 8]);
    assert_eq!(construct_polar(&Channel::Bsc(0.2), 3, 8, Method::ExactTable).unwrap().k(), 8);
    assert_eq!(construct_polar(&ch, 3, 0, Method::ExactBec).unwrap().k(), 0);
    assert!(construct_polar(&Channel::Bsc(0.2), 4, 8, Method::ExactTable).is_err());
    assert!(construct_polar(&Channel::Bsc(0.2), 3, 8, Method::ExactBec).is_err());
    assert!(construct_polar(&ch, 3, 9, Method::ExactBec).is_err());
}

#[test]
fn polar_set_minimizes_sum_over_all_subsets() {
    for ch in [Channel::Bec(0.4), Channel::Bsc(0.07)] {
        let code = construct_polar(&ch, 3, 4, Method::ExactTable).unwrap();
        let z = &code.profile().unwrap().z_hat;
        let best = code.bound_sum().unwrap();
        let mut subsets = 0;
        for mask in 0u32..256 {
            if mask.count_ones() == 4 {
                let s: f64 = (0..8).filter(|j| (mask >> j) & 1 == 1).map(|j| z[j]).sum();
                assert!(best <= s + 1e-15);
                subsets += 1;
            }
        }
        assert_eq!(subsets, 70);
    }
}

#[test]
fn threshold_sets() {
    let profile = reliability_profile(&Channel::Bec(0.5), 3, Method::ExactBec, Exec::Sequential).unwrap();
    assert_eq!(one_based(&threshold_set(&profile, 0.2)), [6, 7, 8]);
    assert!(threshold_set(&profile, 0.0).is_empty());
    assert_eq!(threshold_set(&profile, 1.0).len(), 8);
    let big = reliability_profile(&Channel::Bec(0.3), 10, Method::ExactBec, Exec::Sequential).unwrap();
    let sizes: Vec<usize> = (0..=100).map(|k| threshold_set(&big, k as f64 / 100.0).len()).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn rm_rule_examples() {
    assert_eq!(one_based(&rm_info_set(2, 2).unwrap()), [2, 4]);
    assert_eq!(one_based(&rm_info_set(3, 4).unwrap()), [4, 6, 7, 8]);
    assert_eq!(rm_info_set(4, 16).unwrap().len(), 16);
    assert!(rm_info_set(3, 0).unwrap().is_empty());
    let code = construct_rm(&Channel::Bsc(0.1), 3, 4).unwrap();
    assert_eq!(code.rule(), Rule::ReedMuller);
    assert_eq!(code.frozen_values().count_ones(), 0);
    // every size is reachable and sets are nested in K
    for k in 0..=32 {
        let a = rm_info_set(5, k).unwrap();
        assert_eq!(a.len(), k);
        if k > 0 {
            let prev = rm_info_set(5, k - 1).unwrap();
            let r = polarkit::construction::rm_threshold(5, k);
            assert!(a.iter().all(|i| i.count_ones() + 1 >= r));
            assert!(prev.iter().filter(|i| i.count_ones() >= r).all(|i| a.contains(i)));
        }
    }
}

#[test]
fn rm_pathology_grid() {
    for n in 0..=20u32 {
        for r in 0..=n {
            for eps in [0.1, 0.5, 0.9] {
                let (exact, bound) = rm_pathology_check(eps, n, r).unwrap();
                assert!(exact <= bound, "eps={eps} n={n} r={r}");
            }
        }
    }
}

#[test]
fn monte_carlo_matches_exact_bsc_n4() {
    let ch = Channel::Bsc(0.1);
    let mc = monte_carlo_profile(&ch, 2, 100_000, 21, Exec::default()).unwrap();
    let se = mc.stderr.as_ref().unwrap();
    for i in 0..4 {
        let exact = brute_force_split(&DmcTable::bsc(0.1), 2, i + 1).unwrap().bhattacharyya();
        assert!((mc.z_hat[i] - exact).abs() <= 3.0 * se[i], "i={i}: {} vs {exact}", mc.z_hat[i]);
    }
}

#[test]
fn monte_carlo_matches_bec_dyadic_n8() {
    let mc = monte_carlo_profile(&Channel::Bec(0.5), 3, 100_000, 23, Exec::default()).unwrap();
    let z = bec_profile(0.5, 3).unwrap().z;
    // eight simultaneous comparisons, so a familywise 4 sigma band
    for (i, (a, b)) in mc.z_hat.iter().zip(&z).enumerate() {
        let se = mc.stderr.as_ref().unwrap()[i];
        assert!((a - b).abs() <= 4.0 * se, "i={i}: {a} vs {b}, se {se}");
    }
    let perfect = monte_carlo_profile(&Channel::Bec(0.0), 4, 500, 1, Exec::Sequential).unwrap();
    assert!(perfect.z_hat.iter().all(|&z| z == 0.0));
}

#[test]
fn monte_carlo_reproducible_across_executors() {
    let ch = Channel::Bsc(0.15);
    let seq = monte_carlo_profile(&ch, 5, 3000, 9, Exec::Sequential).unwrap();
    let par = monte_carlo_profile(&ch, 5, 3000, 9, Exec::with_threads(Some(3))).unwrap();
    let again = monte_carlo_profile(&ch, 5, 3000, 9, Exec::default()).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq, again);
    assert_eq!(seq.method, ProfileMethod::MonteCarlo);
}

#[test]
fn bler_reproducible_across_executors() {
    let ch = Channel::Bsc(0.06);
    let code = construct_polar_with(&ch, 6, 30, Method::MonteCarlo { samples: 2000, seed: 1 }, Exec::Sequential)
        .unwrap();
    let seq = run_bler(&code, 2000, 4, Exec::Sequential).unwrap();
    let par = run_bler(&code, 2000, 4, Exec::with_threads(Some(4))).unwrap();
    assert_eq!(seq, par);
    assert!(seq.block_errors > 0);
    assert_eq!(seq.bler, seq.block_errors as f64 / 2000.0);
    assert_eq!(seq.stderr, (seq.bler * (1.0 - seq.bler) / 2000.0).sqrt());
}

/// `P(X >= k)` for `X ~ Poisson(lambda)`.
fn poisson_upper_tail(lambda: f64, k: u64) -> f64 {
    let mut term = (-lambda).exp();
    let mut below = 0.0;
    for j in 0..k {
        below += term;
        term *= lambda / (j + 1) as f64;
    }
    (1.0 - below).max(0.0)
}

#[test]
fn bler_respects_union_bound_on_bec() {
    let code = construct_polar(&Channel::Bec(0.4), 8, 96, Method::ExactBec).unwrap();
    let r = run_bler(&code, 4000, 8, Exec::default()).unwrap();
    assert!(r.bler <= r.bound_sum.unwrap() + 3.0 * r.stderr);
    let z = &code.profile().unwrap().z_hat;
    // first errors at i are rarer than erasures of W^(i), so the count is
    // stochastically below Poisson(T z_i); test the upper tail exactly
    for &i in code.info_set() {
        let count = r.first_error_hist[i];
        let tail = poisson_upper_tail(4000.0 * z[i], count);
        assert!(tail >= 1e-6, "i={i}: {count} first errors vs z {}, tail {tail}", z[i]);
    }
    assert!(code.info_set().len() == 96);
}

#[test]
fn polarization_examples() {
    let s = polarization_stats(0.5, 3, 0.1).unwrap();
    assert_eq!((s.frac_high, s.frac_low), (0.125, 0.125));
    let s = polarization_stats(0.0, 6, 0.1).unwrap();
    assert_eq!((s.frac_high, s.frac_low), (1.0, 0.0));
    let s10 = polarization_stats(0.5, 10, 0.1).unwrap();
    let s20 = polarization_stats(0.5, 20, 0.1).unwrap();
    assert!(s20.frac_high > s10.frac_high);
    assert!(s20.frac_high + s20.frac_low <= 1.0);
    assert!(s20.frac_high <= 0.5 + 0.05);
}

#[test]
fn curve_edges_and_monotonicity() {
    let z = bec_profile(0.5, 10).unwrap().z;
    let profile = ReliabilityProfile::exact(z.clone(), ProfileMethod::ExactBec);
    let min = z.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = z.iter().cloned().fold(0.0, f64::max);
    let grid: Vec<f64> = [min / 2.0, 1e-9, 1e-6, 1e-3, 0.1, 0.5, 0.9, max * 1.0001].to_vec();
    let c = rate_reliability_curve(&profile, &grid);
    let first = c.points[0];
    assert_eq!((first.rate, first.bound, first.max_z), (0.0, 0.0, 0.0));
    let last = c.points.last().unwrap();
    assert_eq!(last.rate, 1.0);
    assert_eq!(last.max_z, max);
    assert!((last.bound - z.iter().sum::<f64>()).abs() < 1e-9);
    for w in c.points.windows(2) {
        assert!(w[0].rate <= w[1].rate && w[0].bound <= w[1].bound && w[0].max_z <= w[1].max_z);
    }
    let quarter = point_at_rate(&profile, 0.25);
    assert_eq!(quarter.rate, 0.25);
    assert!(quarter.bound < 1e-2);
    let big = point_at_rate(&ReliabilityProfile::exact(bec_profile(0.5, 20).unwrap().z, ProfileMethod::ExactBec), 0.25);
    assert!(big.bound < quarter.bound);
}

#[test]
fn rm_versus_polar_reports() {
    let small = rm_vs_polar(0.5, 2, 2, 500, 3, Exec::default()).unwrap();
    assert_eq!(one_based(small.polar.info_set()), [3, 4]);
    assert_eq!(one_based(small.rm.info_set()), [2, 4]);
    let same = rm_vs_polar(0.5, 3, 4, 500, 3, Exec::default()).unwrap();
    assert_eq!(same.polar.info_set(), same.rm.info_set());
    assert_eq!(same.polar_report, same.rm_report);
    let full = rm_vs_polar(0.3, 4, 16, 300, 3, Exec::default()).unwrap();
    assert_eq!(full.polar_report, full.rm_report);
    let big = rm_vs_polar(0.5, 8, 128, 2000, 3, Exec::default()).unwrap();
    assert!(big.rm_report.bound_sum.unwrap() > big.polar_report.bound_sum.unwrap());
    assert!(big.rm_report.bler >= big.polar_report.bler);
}

#[test]
fn scaling_probe_rows() {
    let rows = scaling_probe(&Channel::Bsc(0.1), &[4], 3, 1).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].evaluations, 16 * 5);
    assert!(scaling_probe(&Channel::Bsc(0.1), &[6, 4], 3, 1).is_err());
}

fn code_strategy() -> impl Strategy<Value = CodeSpec> {
    (1u32..=6, any::<u64>(), 0.0f64..=1.0, any::<bool>(), any::<u64>()).prop_map(|(n, mask_seed, eps, mc, fseed)| {
        let len = 1usize << n;
        let info: Vec<usize> = (0..len).filter(|i| (mask_seed >> (i % 64)) & 1 == 1).collect();
        let ch = Channel::Bec(eps);
        let method = if mc { Method::MonteCarlo { samples: 20, seed: mask_seed } } else { Method::ExactBec };
        let profile = reliability_profile(&ch, n, method, Exec::Sequential).unwrap();
        CodeSpec::from_info_set(&ch, n, info)
            .unwrap()
            .with_profile(profile)
            .unwrap()
            .with_random_frozen(fseed)
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_spec_json_round_trip(code in code_strategy()) {
        let json = code.to_json();
        let back = CodeSpec::from_json(&json).unwrap();
        prop_assert_eq!(&back, &code);
        prop_assert_eq!(back.to_json(), json);
    }

    #[test]
    fn polar_info_set_picks_smallest(z in proptest::collection::vec(0.0f64..1.0, 1..64), k_frac in 0.0f64..=1.0) {
        let k = (k_frac * z.len() as f64) as usize;
        let set = polar_info_set(&z, k);
        prop_assert_eq!(set.len(), k);
        let worst_in = set.iter().map(|&i| z[i]).fold(f64::NEG_INFINITY, f64::max);
        for (i, &v) in z.iter().enumerate() {
            if !set.contains(&i) {
                prop_assert!(v >= worst_in);
            }
        }
    }
}

#[test]
fn from_json_rejects_bad_input() {
    let good = construct_polar(&Channel::Bec(0.5), 3, 4, Method::ExactBec).unwrap().to_json();
    assert!(CodeSpec::from_json(&good.replace("\"version\":1", "\"version\":2")).is_err());
    assert!(CodeSpec::from_json(&good.replace("[4,6,7,8]", "[4,6,8,7]")).is_err());
    assert!(CodeSpec::from_json(&good.replace("\"N\":8", "\"N\":6")).is_err());
    assert!(CodeSpec::from_json(&good.replace("\"version\":1", "\"version\":1,\"extra\":0")).is_err());
    assert!(CodeSpec::from_json(&good.replace("\"0000\"", "\"000\"")).is_err());
}
