mod common;

use lobkit_core::event_study::{detect_market_orders, partition_by_size};
use lobkit_core::market_data::MessageType;
use lobkit_core::zi_sim::{simulate_day, ZiConfig};
use lobkit_core::NANOS_PER_SEC;

use common::{mixed_config, replay_all, simulate};

#[test]
fn market_order_count_is_poisson() {
    // Over 20 days the count per day should have mean 2 mu T and
    // variance equal to the mean.
    let config = ZiConfig {
        horizon_secs: 500.0,
        ..mixed_config(0, 0.0)
    };
    let expected = 2.0 * config.market_rate * config.horizon_secs;
    let counts: Vec<f64> = (0..20)
        .map(|seed| {
            let c = ZiConfig { seed, ..config.clone() };
            simulate_day(&c).unwrap().counts.market as f64
        })
        .collect();
    let mean = lobkit_oracles::mean(&counts);
    // Standard error of the mean is sqrt(expected / 20).
    assert!(
        (mean - expected).abs() < 4.0 * (expected / 20.0).sqrt(),
        "mean {mean} vs {expected}"
    );
    let var = lobkit_oracles::sample_std(&counts).powi(2);
    assert!(
        var > expected * 0.3 && var < expected * 2.5,
        "variance {var} vs {expected}"
    );
}

#[test]
fn event_mix_follows_configured_proportions() {
    let (out, _) = simulate(&mixed_config(21, 20_000.0));
    let c = &out.counts;
    let n = (c.limit + c.market + c.cancel) as f64;
    let pct = |x: u64| 100.0 * x as f64 / n;
    assert!((pct(c.market) - 2.0).abs() < 1.0);
    assert!((pct(c.limit) - 53.0).abs() < 1.0);
    assert!((pct(c.cancel) - 45.0).abs() < 1.0);
}

#[test]
fn latency_floor_bounds_inter_event_times() {
    let floor = 1_000;
    let config = ZiConfig {
        latency_floor_ns: floor,
        limit_rate: 200.0,
        market_rate: 40.0,
        cancel_rate: 5.0,
        horizon_secs: 20.0,
        ..mixed_config(31, 0.0)
    };
    let (out, msgs) = simulate(&config);
    let mut distinct: Vec<u64> = out.messages.iter().map(|m| m.time.nanos()).collect();
    distinct.dedup();
    let min_gap = distinct.windows(2).map(|w| w[1] - w[0]).min().unwrap();
    assert!(min_gap >= floor);
    // Without the floor, some gaps are shorter.
    let (raw, _) = simulate(&ZiConfig {
        latency_floor_ns: 0,
        ..config.clone()
    });
    let mut raw_t: Vec<u64> = raw.messages.iter().map(|m| m.time.nanos()).collect();
    raw_t.dedup();
    assert!(raw_t.windows(2).any(|w| w[1] - w[0] < floor));
    // Every fill of one market order keeps a single timestamp.
    let detected = detect_market_orders(&replay_all(&msgs, config.tick));
    assert_eq!(detected.len(), out.market_orders.len());
}

#[test]
fn simulation_is_deterministic_per_seed() {
    let c = mixed_config(41, 200.0);
    let a = simulate_day(&c).unwrap();
    let b = simulate_day(&c).unwrap();
    assert_eq!(a.messages, b.messages);
    assert_eq!(a.snapshots, b.snapshots);
    let d = simulate_day(&ZiConfig { seed: 42, ..c }).unwrap();
    assert_ne!(a.messages, d.messages);
}

#[test]
fn zero_rates_leave_the_initial_book() {
    let c = ZiConfig {
        limit_rate: 0.0,
        market_rate: 0.0,
        cancel_rate: 0.0,
        ..mixed_config(1, 100.0)
    };
    let out = simulate_day(&c).unwrap();
    assert!(out.messages.is_empty());
    assert_eq!(out.initial_book, out.final_book);
    assert!(out.seed_messages.iter().all(|m| m.msg_type == MessageType::NewLimit));
}

#[test]
fn uniform_market_sizes_split_into_even_quintiles() {
    let config = ZiConfig {
        market_sizes: Some("uniform:1:100000:1".parse().unwrap()),
        horizon_secs: 5_000.0,
        initial_depth: 400,
        ..mixed_config(51, 0.0)
    };
    let (_, msgs) = simulate(&config);
    let events = detect_market_orders(&replay_all(&msgs, config.tick));
    let n = events.len();
    assert!(n > 1000);
    let p = partition_by_size(&events, 5).unwrap();
    assert!(!p.degenerate);
    for bin in &p.members {
        assert!(
            (bin.len() as f64 - n as f64 / 5.0).abs() <= 1.0,
            "{} vs {}",
            bin.len(),
            n as f64 / 5.0
        );
    }
    let _ = NANOS_PER_SEC;
}
