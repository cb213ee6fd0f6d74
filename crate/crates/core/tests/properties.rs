use proptest::prelude::*;
use rand::Rng;
use windowed_bandit::bounds::{classify_regime, lb_large, lb_small, ub_large, ub_small, BoundReport, Regime};
use windowed_bandit::instance::{BanditInstance, MeanRewardMatrix, RewardFamily};
use windowed_bandit::instance_gen::{generate_lb_instance, plan_batches_case1, plan_batches_case2};
use windowed_bandit::oracle::{dynamic_oracle, measure_variation, pseudo_regret, static_oracle, windowed_oracle};
use windowed_bandit::policy::{exp3_run, we3_gamma, we3_plan, we3_run};
use windowed_bandit::rng::stream;
use windowed_bandit::{PolicyTrace, TraceStep, WindowPartition};

fn matrix() -> impl Strategy<Value = MeanRewardMatrix> {
    (1usize..=8, 2usize..=3).prop_flat_map(|(t, k)| {
        proptest::collection::vec(0.0f64..=1.0, t * k).prop_map(move |d| MeanRewardMatrix::new(t, k, d).unwrap())
    })
}

fn partition_of(horizon: usize, cuts: &[bool]) -> WindowPartition {
    let mut sizes = Vec::new();
    let mut open = 0;
    for t in 0..horizon {
        open += 1;
        if t + 1 == horizon || cuts.get(t).copied().unwrap_or(false) {
            sizes.push(open);
            open = 0;
        }
    }
    WindowPartition::new(sizes, horizon).unwrap()
}

proptest! {
    #[test]
    fn oracle_ordering(m in matrix(), cuts in proptest::collection::vec(any::<bool>(), 8)) {
        let p = partition_of(m.horizon(), &cuts);
        let w = windowed_oracle(&m, &p).unwrap().value;
        prop_assert!(dynamic_oracle(&m) + 1e-9 >= w);
        prop_assert!(w + 1e-9 >= static_oracle(&m));
        let unit = windowed_oracle(&m, &WindowPartition::unit(m.horizon()).unwrap()).unwrap().value;
        let single = windowed_oracle(&m, &WindowPartition::single(m.horizon()).unwrap()).unwrap().value;
        prop_assert_eq!(unit, dynamic_oracle(&m));
        prop_assert_eq!(single, static_oracle(&m));
    }

    #[test]
    fn oracle_arms_are_lowest_argmax(m in matrix(), cuts in proptest::collection::vec(any::<bool>(), 8)) {
        let p = partition_of(m.horizon(), &cuts);
        let o = windowed_oracle(&m, &p).unwrap();
        for (j, window) in p.windows().enumerate() {
            let totals: Vec<f64> = (0..m.arms()).map(|k| window.clone().map(|t| m.get(t, k)).sum()).collect();
            let best = totals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let first = totals.iter().position(|&x| x == best).unwrap();
            prop_assert_eq!(o.arms[j], first);
        }
    }

    #[test]
    fn variation_ignores_duplicate_last_row(m in matrix()) {
        let mut rows: Vec<Vec<f64>> = m.rows().map(|r| r.to_vec()).collect();
        rows.push(rows.last().unwrap().clone());
        let longer = MeanRewardMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(measure_variation(&longer), measure_variation(&m));
    }

    #[test]
    fn regret_against_dynamic_oracle_is_nonnegative(m in matrix(), picks in proptest::collection::vec(0usize..3, 8)) {
        let steps = (0..m.horizon())
            .map(|t| {
                let arm = picks[t] % m.arms();
                TraceStep { arm, prob: 1.0, reward: 0.0, mean: m.get(t, arm) }
            })
            .collect();
        let trace = PolicyTrace::new(steps, 0);
        let unit = WindowPartition::unit(m.horizon()).unwrap();
        prop_assert!(pseudo_regret(&[trace], &m, &unit).unwrap() >= -1e-12);
    }

    #[test]
    fn bounds_are_ordered_and_monotone(
        horizon in 1000usize..200_000,
        arms in 2usize..50,
        frac in 0.001f64..1.0,
    ) {
        let budget = frac * horizon as f64 / arms as f64;
        let ub = ub_small(horizon, arms, budget).unwrap();
        prop_assert!(ub >= lb_small(horizon, arms, budget).unwrap());
        prop_assert!(ub_small(horizon + 1, arms, budget).unwrap() >= ub);
        prop_assert!(ub_small(horizon, arms, budget * 0.5).unwrap() <= ub);
        if (arms as f64 + 1.0) * budget <= horizon as f64 {
            prop_assert!(ub_small(horizon, arms + 1, budget).unwrap() >= ub);
        }
        let p = WindowPartition::uniform((horizon / 4).max(1), horizon).unwrap();
        prop_assert!(ub_large(&p, arms).unwrap() >= lb_large(&p, arms).unwrap());
        prop_assert!(ub_large(&p, arms + 1).unwrap() >= ub_large(&p, arms).unwrap());
    }

    #[test]
    fn classify_agrees_with_plan(horizon in 100usize..20_000, arms in 2usize..20, budget in 0.0f64..50.0, width in 1usize..2000) {
        let p = WindowPartition::uniform(width.min(horizon), horizon).unwrap();
        let regime = classify_regime(&p, arms, budget, horizon);
        match we3_plan(&p, arms, budget, horizon) {
            Ok(plan) => prop_assert_eq!(plan.regime, regime),
            Err(_) => prop_assert_eq!(regime, Regime::Mixed),
        }
    }

    #[test]
    fn case1_batches_are_unions_of_windows(seed in any::<u64>()) {
        let mut rng = stream(seed);
        let arms = rng.random_range(2..=10usize);
        let horizon = rng.random_range(200..=5000usize);
        let budget = rng.random_range(1.0..=(horizon as f64 / arms as f64));
        let threshold = windowed_bandit::bounds::window_threshold(horizon, arms, budget);
        prop_assume!(threshold >= 1.0 && threshold <= horizon as f64);
        let sizes: Vec<usize> = {
            let mut left = horizon;
            let mut v = Vec::new();
            let max_w = (threshold.floor() as usize).max(1);
            while left > 0 {
                let w = rng.random_range(1..=max_w.min(left));
                v.push(w);
                left -= w;
            }
            v
        };
        let p = WindowPartition::new(sizes, horizon).unwrap();
        let plan = plan_batches_case1(&p, arms, budget, horizon);
        prop_assume!(plan.is_ok());
        let plan = plan.unwrap();
        let mut boundaries: Vec<usize> = p.windows().map(|w| w.end).collect();
        boundaries.push(0);
        for b in &plan.batches {
            prop_assert!(boundaries.contains(&b.start));
            prop_assert!(boundaries.contains(&(b.start + b.length)));
            prop_assert!(b.epsilon <= 0.25);
        }
        let inst = generate_lb_instance(&plan, &mut rng).unwrap();
        prop_assert!(measure_variation(inst.means()) <= budget);
    }
}

#[test]
fn raised_arm_is_uniform() {
    let p = WindowPartition::uniform(400, 20_000).unwrap();
    let plan = plan_batches_case2(&p, 5, 50.0, 20_000).unwrap();
    let mut counts = [0usize; 5];
    for seed in 0..40 {
        for k in plan.draw_arms(&mut stream(seed)) {
            counts[k] += 1;
        }
    }
    let n: usize = counts.iter().sum();
    let p0 = 0.2;
    let sigma = (n as f64 * p0 * (1.0 - p0)).sqrt();
    for &c in &counts {
        assert!((c as f64 - n as f64 * p0).abs() <= 3.0 * sigma, "counts {counts:?}");
    }
}

#[test]
fn exp3_stays_within_static_bound_on_deterministic_rewards() {
    let len = 2000;
    let m = MeanRewardMatrix::constant(len, &[0.9, 0.1]).unwrap();
    let inst = BanditInstance::new(m, RewardFamily::Deterministic, 0.0).unwrap();
    let gamma = we3_gamma(len, 2);
    let bound = 2.0 * (std::f64::consts::E - 1.0).sqrt() * (len as f64 * 2.0 * 2f64.ln()).sqrt();
    assert!((bound - 138.0).abs() < 0.1);
    let single = WindowPartition::single(len).unwrap();
    for seed in 0..10 {
        let steps = exp3_run(&inst, 0, len, gamma, &mut stream(seed)).unwrap();
        let regret = pseudo_regret(&[PolicyTrace::new(steps, seed)], inst.means(), &single).unwrap();
        assert!(regret <= bound, "seed {seed}: {regret}");
    }
}

#[test]
fn we3_small_regime_example_under_bound() {
    let p = WindowPartition::uniform(20, 50_000).unwrap();
    let plan = plan_batches_case1(&p, 10, 50.0, 50_000).unwrap();
    let mut total = 0.0;
    for seed in 0..10 {
        let inst = generate_lb_instance(&plan, &mut stream(seed)).unwrap();
        let trace = we3_run(&inst, &p, seed + 100).unwrap();
        total += pseudo_regret(&[trace], inst.means(), &p).unwrap();
    }
    let mean = total / 10.0;
    let report = BoundReport::evaluate(&p, 10, 50.0).unwrap();
    assert!(mean <= report.ub);
    assert!(mean >= 0.0);
}

#[test]
fn trace_records_true_means() {
    let p = WindowPartition::uniform(400, 20_000).unwrap();
    let plan = plan_batches_case2(&p, 10, 50.0, 20_000).unwrap();
    let inst = generate_lb_instance(&plan, &mut stream(1)).unwrap();
    let trace = we3_run(&inst, &p, 2).unwrap();
    assert_eq!(trace.len(), 20_000);
    assert_eq!(trace.seed(), 2);
    for (t, s) in trace.steps().iter().enumerate() {
        assert_eq!(s.mean, inst.means().get(t, s.arm));
        assert!(s.prob > 0.0 && s.prob <= 1.0);
        assert!(s.reward == 0.0 || s.reward == 1.0);
    }
}
