mod common;

use common::gen::{dec, free_plan, random_plan};
use common::oracle::expected_total;
use common::{blank, fixture};
use dmcc::model::extract_service;
use dmcc::pricing::{cheapest_plan, money, quote, LineKind, PricingError, UsageRequest};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

fn random_usage(rng: &mut impl Rng) -> UsageRequest {
    let mut u = UsageRequest::new();
    if rng.gen_bool(0.8) {
        u = u.with(dec(rng.gen_range(0..100_000), 2), "HRS");
    }
    if rng.gen_bool(0.5) {
        u = u.with(dec(rng.gen_range(0..5_000), 1), "E34");
    }
    if rng.gen_bool(0.5) {
        u = u.on_instance(blank("i0"));
    }
    if rng.gen_bool(0.5) {
        u = u.in_region("eu");
    }
    u
}

fn rf_plans() -> Vec<dmcc::model::PricingPlan> {
    let g = fixture("full.ttl");
    extract_service(&g, &blank("MLServiceDicitsRF")).unwrap().pricing
}

#[test]
fn free_plan_within_allowance_costs_nothing() {
    let plans = rf_plans();
    let free = plans.iter().find(|p| p.name == "Free").unwrap();
    let usage = UsageRequest::hours(dec(100, 0)).on_instance(blank("InstanceFree")).in_region("ugr-granada");
    let cost = quote(free, &usage).unwrap();
    assert_eq!(cost.total, Decimal::ZERO);
    assert_eq!(cost.allowance_applied.len(), 1);
    assert_eq!(cost.allowance_applied[0].amount, dec(100, 0));
}

#[test]
fn free_plan_overflow_is_rejected() {
    let plans = rf_plans();
    let free = plans.iter().find(|p| p.name == "Free").unwrap();
    let usage = UsageRequest::hours(dec(300, 0)).on_instance(blank("InstanceFree")).in_region("ugr-granada");
    match quote(free, &usage) {
        Err(PricingError::AllowanceExceeded { requested, included, .. }) => {
            assert_eq!(requested, dec(300, 0));
            assert_eq!(included, dec(250, 0));
        }
        other => panic!("expected AllowanceExceeded, got {other:?}"),
    }
}

#[test]
fn paid_plan_bills_hours_beyond_allowance() {
    let plans = rf_plans();
    let paid = plans.iter().find(|p| p.name == "Pay per use").unwrap();
    let usage = UsageRequest::hours(dec(300, 0)).on_instance(blank("InstanceFree")).in_region("ugr-granada");
    let cost = quote(paid, &usage).unwrap();
    // (300 - 250) h at 0.10
    assert_eq!(cost.total, dec(50, 0) * dec(10, 2));
    assert_eq!(money(cost.total), "5.00");
    let (best, _) = cheapest_plan(&plans, &usage).unwrap();
    assert_eq!(best.name, "Pay per use");
}

#[test]
fn paid_plan_is_out_of_scope_elsewhere() {
    let plans = rf_plans();
    let paid = plans.iter().find(|p| p.name == "Pay per use").unwrap();
    let usage = UsageRequest::hours(dec(300, 0)).on_instance(blank("InstanceFree")).in_region("us-east-1");
    assert!(matches!(quote(paid, &usage), Err(PricingError::NoApplicableCompound { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn quote_agrees_with_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = random_plan(&mut rng);
        let usage = random_usage(&mut rng);
        let got = quote(&plan, &usage);
        let want = expected_total(&plan, &usage);
        match (&got, want) {
            (Ok(c), Some(t)) => prop_assert_eq!(c.total, t),
            (Err(_), None) => {}
            _ => prop_assert!(false, "quote {:?} vs oracle {:?}", got, want),
        }
    }

    #[test]
    fn breakdown_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = random_plan(&mut rng);
        let usage = random_usage(&mut rng);
        if let Ok(c) = quote(&plan, &usage) {
            prop_assert!(c.total >= Decimal::ZERO);
            prop_assert_eq!(c.total, c.items.iter().map(|i| i.subtotal).sum::<Decimal>());
            for i in c.items.iter().filter(|i| i.kind == LineKind::Usage) {
                prop_assert!(i.subtotal >= Decimal::ZERO);
                prop_assert_eq!(i.subtotal, i.billed_quantity * i.unit_price);
            }
            if let Some(max) = plan.max_price {
                prop_assert!(c.total <= max);
            }
            let caps = c.items.iter().filter(|i| i.kind == LineKind::Cap).count();
            prop_assert!(caps <= 1);
        }
    }

    #[test]
    fn more_usage_never_costs_less(seed in any::<u64>(), extra in 0i64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plan = random_plan(&mut rng);
        let usage = random_usage(&mut rng);
        let mut more = usage.clone();
        for q in &mut more.quantities {
            q.amount += dec(extra, 2);
        }
        if let (Ok(a), Ok(b)) = (quote(&plan, &usage), quote(&plan, &more)) {
            prop_assert!(b.total >= a.total, "{} then {}", a.total, b.total);
        }
    }

    #[test]
    fn free_plan_overflow_always_errors(allow in 0i64..1000, over in 1i64..100_000) {
        let plan = free_plan(dec(allow, 0));
        let within = UsageRequest::hours(dec(allow, 0));
        prop_assert_eq!(quote(&plan, &within).unwrap().total, Decimal::ZERO);
        let beyond = UsageRequest::hours(dec(allow, 0) + dec(over, 2));
        let is_exceeded = matches!(quote(&plan, &beyond), Err(PricingError::AllowanceExceeded { .. }));
        prop_assert!(is_exceeded);
    }
}
