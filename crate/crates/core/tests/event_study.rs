mod common;

use lobkit_core::event_study::*;
use lobkit_core::market_data::{MessageType, RawMessage};
use lobkit_core::zi_sim::ZiConfig;
use lobkit_core::{Side, Timestamp, NANOS_PER_SEC};
use lobkit_oracles::{best_levels_at_prefixes, prefix_at_time, relaxed_contributions, trapezoid, BestLevel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{mixed_config, replay_all, simulate, study_day};

fn busy_config(seed: u64) -> ZiConfig {
    ZiConfig {
        limit_rate: 20.0,
        market_rate: 4.0,
        cancel_rate: 1.0,
        horizon_secs: 200.0,
        ..mixed_config(seed, 0.0)
    }
}

fn vol(level: BestLevel) -> i64 {
    level.map_or(0, |l| l.1 as i64)
}

fn side_level(pair: &(BestLevel, BestLevel), side: Side) -> BestLevel {
    match side {
        Side::Buy => pair.0,
        Side::Sell => pair.1,
    }
}

#[test]
fn forward_flow_equals_volume_change_recomputed_from_scratch() {
    let config = busy_config(3);
    let (_, msgs) = simulate(&config);
    let day = study_day(&msgs, config.tick);
    let grid = LagGrid::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for _ in 0..300 {
        let ev = &day.market_orders[rng.random_range(0..day.market_orders.len())];
        let t = ev.time.nanos();
        for mode in [Mode::Strict, Mode::Relaxed] {
            let pair = trajectory_after(ev, &day, &grid, mode);
            let mut prefixes = vec![prefix_at_time(&msgs, t)];
            let lags = &grid.lags_ns()[..pair[0].values.len()];
            prefixes.extend(lags.iter().map(|&l| prefix_at_time(&msgs, t + l)));
            let levels = best_levels_at_prefixes(&msgs, &prefixes);
            let base = &levels[0];
            let first_change = day.records[ev.last_index + 1..]
                .iter()
                .find(|r| r.time > t && r.quotes_changed)
                .map(|r| r.time);
            for traj in &pair {
                let side = traj.side.resolve(ev.direction);
                let base_level = side_level(base, side);
                for (j, &w) in traj.values.iter().enumerate() {
                    let now = side_level(&levels[j + 1], side);
                    // Relaxed flow equals the volume change until a price moves.
                    if mode == Mode::Relaxed && first_change.is_some_and(|fc| fc <= t + lags[j]) {
                        break;
                    }
                    assert_eq!(w, vol(now) - vol(base_level), "lag {j} mode {mode}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 5_000);
}

#[test]
fn backward_flow_equals_volume_change_recomputed_from_scratch() {
    let config = busy_config(4);
    let (_, msgs) = simulate(&config);
    let day = study_day(&msgs, config.tick);
    let grid = LagGrid::standard();
    for ev in day.market_orders.iter().step_by(7).take(200) {
        let t = ev.time.nanos();
        let pair = trajectory_before(ev, &day, &grid, Mode::Strict);
        let mut prefixes: Vec<usize> = grid.lags_ns()[..pair[0].values.len()]
            .iter()
            .rev()
            .map(|&l| prefix_at_time(&msgs, t - l))
            .collect();
        prefixes.push(ev.first_index);
        let levels = best_levels_at_prefixes(&msgs, &prefixes);
        let now = levels.last().unwrap();
        for traj in &pair {
            let side = traj.side.resolve(ev.direction);
            let n = traj.values.len();
            for (j, &w) in traj.values.iter().enumerate() {
                let then = side_level(&levels[n - 1 - j], side);
                assert_eq!(w, vol(side_level(now, side)) - vol(then));
            }
        }
    }
}

#[test]
fn relaxed_flow_matches_level_based_formulation() {
    let config = busy_config(5);
    let (_, msgs) = simulate(&config);
    let day = study_day(&msgs, config.tick);
    for side in [Side::Buy, Side::Sell] {
        let oracle = relaxed_contributions(&msgs, side);
        for (rec, &o) in day.records.iter().zip(&oracle) {
            assert_eq!(rec.flow(side), o);
        }
    }
}

/// Every 5-message continuation of a small book after a price-maintaining
/// sell market order, drawn from a fixed alphabet of bid-side actions.
#[test]
fn micro_scenarios_strict_and_relaxed() {
    let ms = 1_000_000u64;
    let base = [
        (MessageType::NewLimit, 1, 300, 10_000, Side::Buy),
        (MessageType::NewLimit, 2, 200, 9_900, Side::Buy),
        (MessageType::NewLimit, 3, 500, 10_200, Side::Sell),
        (MessageType::ExecuteVisible, 1, 100, 10_000, Side::Buy),
    ];
    // Actions: arrival at bid, arrival in spread, cancel part of the
    // front bid order, delete whatever is best, arrival below.
    let alphabet = 5usize;
    let grid = LagGrid::from_nanos((1..=6).map(|k| k * 10 * ms + 5 * ms).collect());
    let mut scenarios = 0;
    for code in 0..alphabet.pow(5) {
        let mut msgs: Vec<RawMessage> = base
            .iter()
            .enumerate()
            .map(|(i, &(kind, id, shares, price, side))| RawMessage {
                time: Timestamp(if i < 3 { 1 } else { 10 * ms }),
                msg_type: kind,
                order_id: id,
                shares,
                price,
                direction: side,
            })
            .collect();
        let mut naive = lobkit_oracles::NaiveBook::new();
        for m in &msgs {
            naive.apply(m);
        }
        let mut c = code;
        let mut valid = true;
        for (next_id, k) in (10u64..).zip(0..5) {
            let action = c % alphabet;
            c /= alphabet;
            let time = Timestamp((20 + 10 * k as u64) * ms);
            let best = naive.best(Side::Buy);
            let m = match (action, best) {
                (0, Some((p, _))) => RawMessage {
                    time,
                    msg_type: MessageType::NewLimit,
                    order_id: next_id,
                    shares: 50,
                    price: p,
                    direction: Side::Buy,
                },
                (1, Some((p, _))) if p + 50 < 10_200 => RawMessage {
                    time,
                    msg_type: MessageType::NewLimit,
                    order_id: next_id,
                    shares: 70,
                    price: p + 50,
                    direction: Side::Buy,
                },
                (2, _) => RawMessage {
                    time,
                    msg_type: MessageType::NewLimit,
                    order_id: next_id,
                    shares: 30,
                    price: 9_800,
                    direction: Side::Buy,
                },
                (3, Some(_)) | (4, Some(_)) => {
                    // Oldest order at the best bid: the lowest live id there.
                    let (id, price, left) = (1..next_id)
                        .filter_map(|id| naive_order(&msgs, id).map(|o| (id, o.0, o.1)))
                        .filter(|o| Some(o.1) == best.map(|b| b.0))
                        .min_by_key(|o| o.0)
                        .unwrap();
                    if action == 3 && left > 10 {
                        RawMessage {
                            time,
                            msg_type: MessageType::PartialCancel,
                            order_id: id,
                            shares: 10,
                            price,
                            direction: Side::Buy,
                        }
                    } else {
                        RawMessage {
                            time,
                            msg_type: MessageType::Delete,
                            order_id: id,
                            shares: left,
                            price,
                            direction: Side::Buy,
                        }
                    }
                }
                _ => {
                    valid = false;
                    break;
                }
            };
            naive.apply(&m);
            msgs.push(m);
        }
        if !valid {
            continue;
        }
        scenarios += 1;
        let day = study_day(&msgs, 50);
        let ev = &day.market_orders[0];
        assert!(ev.price_maintaining);
        let [strict, _] = trajectory_after(ev, &day, &grid, Mode::Strict);
        let [relaxed, _] = trajectory_after(ev, &day, &grid, Mode::Relaxed);
        let contrib = relaxed_contributions(&msgs, Side::Buy);
        let t = ev.time.nanos();
        let levels: Vec<_> = grid.lags_ns().iter().map(|&l| prefix_at_time(&msgs, t + l)).collect();
        let base_prefix = prefix_at_time(&msgs, t);
        let at = best_levels_at_prefixes(&msgs, &[&[base_prefix][..], &levels[..]].concat());
        let first_change = msgs[base_prefix..]
            .iter()
            .enumerate()
            .find(|(i, _)| {
                let before = best_levels_at_prefixes(&msgs, &[base_prefix + i, base_prefix + i + 1]);
                before[0].0.map(|b| b.0) != before[1].0.map(|b| b.0)
            })
            .map(|(_, m)| m.time.nanos());
        for (j, &p) in levels.iter().enumerate() {
            let expected_relaxed: i64 = contrib[base_prefix..p].iter().sum();
            assert_eq!(relaxed.values[j], expected_relaxed, "scenario {code} lag {j}");
            let spans_change = first_change.is_some_and(|fc| fc <= t + grid.lags_ns()[j]);
            if spans_change {
                assert!(j >= strict.values.len());
            } else {
                assert_eq!(strict.values[j], vol(at[j + 1].0) - vol(at[0].0));
                assert_eq!(strict.values[j], relaxed.values[j]);
            }
        }
    }
    assert!(scenarios > 1000, "{scenarios}");
}

fn naive_order(msgs: &[RawMessage], id: u64) -> Option<(i64, u64)> {
    let mut state: Option<(i64, u64)> = None;
    for m in msgs.iter().filter(|m| m.order_id == id) {
        state = match m.msg_type {
            MessageType::NewLimit => Some((m.price, m.shares)),
            MessageType::Delete => None,
            _ => state.map(|(p, s)| (p, s - m.shares)).filter(|o| o.1 > 0),
        };
    }
    state
}

fn mirror(msgs: &[RawMessage], pivot: i64) -> Vec<RawMessage> {
    msgs.iter()
        .map(|m| RawMessage {
            direction: m.direction.opposite(),
            price: if m.msg_type == MessageType::Halt {
                m.price
            } else {
                pivot - m.price
            },
            ..*m
        })
        .collect()
}

fn spec(mode: Mode) -> StudySpec {
    StudySpec {
        grid: LagGrid::standard(),
        mode,
        separation_ns: 0,
        maintaining_only: mode == Mode::Strict,
    }
}

#[test]
fn flipping_every_side_leaves_curves_unchanged() {
    let config = busy_config(6);
    let (_, msgs) = simulate(&config);
    let flipped = mirror(&msgs, 2 * config.initial_bid + config.tick);
    for mode in [Mode::Strict, Mode::Relaxed] {
        let a = run_study(&[study_day(&msgs, config.tick)], &spec(mode), 1, 50, 7, true).unwrap();
        let b = run_study(&[study_day(&flipped, config.tick)], &spec(mode), 1, 50, 7, true).unwrap();
        assert!(a.events_after > 100);
        assert_eq!(a, b);
    }
}

#[test]
fn aggregation_is_linear_over_disjoint_sets() {
    let config = busy_config(7);
    let (_, msgs) = simulate(&config);
    let day = study_day(&msgs, config.tick);
    let grid = LagGrid::standard();
    let trajs: Vec<NetFlowTrajectory> = day
        .market_orders
        .iter()
        .filter(|e| e.next_gap_ns.is_some())
        .map(|e| trajectory_after(e, &day, &grid, Mode::Relaxed)[0].clone())
        .collect();
    let (left, right) = trajs.split_at(trajs.len() / 3);
    let agg =
        |ts: &[NetFlowTrajectory]| aggregate(ts, &grid, QuoteSide::Same, Orientation::After, Mode::Relaxed, 10, 1);
    let (a, b, all) = (agg(left), agg(right), agg(&trajs));
    let mut acc_a = CurveAccumulator::new(&grid, QuoteSide::Same, Orientation::After, Mode::Relaxed);
    left.iter().for_each(|t| acc_a.add(t));
    let mut acc_b = CurveAccumulator::new(&grid, QuoteSide::Same, Orientation::After, Mode::Relaxed);
    right.iter().for_each(|t| acc_b.add(t));
    acc_a.merge(&acc_b);
    assert_eq!(acc_a.finish(&grid, 10, 1), all);
    for j in 0..grid.len() {
        let sums: Vec<i128> = [left, right, &trajs[..]]
            .iter()
            .map(|ts| ts.iter().filter_map(|t| t.values.get(j)).map(|&v| v as i128).sum())
            .collect();
        assert_eq!(sums[0] + sums[1], sums[2]);
        assert_eq!(a.n[j] + b.n[j], all.n[j]);
        if let Some(m) = all.mean[j] {
            assert_eq!(m, sums[2] as f64 / all.n[j] as f64);
        }
    }
}

#[test]
fn separation_matches_direct_scan() {
    let config = busy_config(8);
    let (_, msgs) = simulate(&config);
    let day = study_day(&msgs, config.tick);
    let times: Vec<u64> = lobkit_oracles::scan_market_orders(&msgs).iter().map(|m| m.0).collect();
    for t_secs in [0.0, 0.01, 0.1, 0.5] {
        let sep = (t_secs * NANOS_PER_SEC as f64) as u64;
        let selected = select_event_set(&day.market_orders, sep, false);
        let oracle = lobkit_oracles::separated_indices(&times, sep);
        assert_eq!(selected.len(), oracle.len());
        for (s, &i) in selected.iter().zip(&oracle) {
            assert_eq!(s.time.nanos(), times[i]);
        }
    }
}

#[test]
fn basis_matches_trapezoid_integral() {
    let config = busy_config(9);
    let (_, msgs) = simulate(&config);
    let steps = replay_all(&msgs, config.tick);
    let start = config.start_time.nanos() + 20 * NANOS_PER_SEC;
    let end = config.start_time.nanos() + 150 * NANOS_PER_SEC;
    let window = TimeWindow::new(Timestamp(start), Timestamp(end));
    let day = lobkit_core::event_study::StudyDay::from_steps(&steps, Some(window));
    let basis = day.basis.mean_best_volume().unwrap();

    // Sample both sides as step functions with duplicate points at jumps.
    let mut total = 0.0;
    for side in [Side::Buy, Side::Sell] {
        let v0 = steps
            .iter()
            .rev()
            .find(|s| s.message.time.nanos() <= start)
            .unwrap()
            .after
            .volume(side) as f64;
        let mut pts = vec![(start as f64, v0)];
        let mut last = v0;
        for s in steps
            .iter()
            .filter(|s| s.message.time.nanos() > start && s.message.time.nanos() < end)
        {
            let t = s.message.time.nanos() as f64;
            let v = s.after.volume(side) as f64;
            pts.push((t, last));
            pts.push((t, v));
            last = v;
        }
        pts.push((end as f64, last));
        total += trapezoid(&pts);
    }
    let oracle = total / (2.0 * (end - start) as f64);
    assert!((basis - oracle).abs() <= 1e-9 * oracle, "{basis} vs {oracle}");
}

#[test]
fn latency_floor_flattens_short_lags() {
    let floor = 1_000u64;
    let config = ZiConfig {
        latency_floor_ns: floor,
        ..busy_config(10)
    };
    let (_, msgs) = simulate(&config);
    let day = study_day(&msgs, config.tick);
    for mode in [Mode::Strict, Mode::Relaxed] {
        let r = run_study(std::slice::from_ref(&day), &spec(mode), 1, 20, 3, false).unwrap();
        for curve in &r.curves {
            for (j, &lag) in curve.lags_ns.iter().enumerate() {
                if lag < floor {
                    assert!(curve.n[j] > 0);
                    assert_eq!(
                        curve.mean[j],
                        Some(0.0),
                        "{:?} {:?} lag {lag}",
                        curve.side,
                        curve.orientation
                    );
                }
            }
        }
    }
}

#[test]
fn strict_and_relaxed_agree_before_the_first_quote_change() {
    let config = busy_config(12);
    let (_, msgs) = simulate(&config);
    let day = study_day(&msgs, config.tick);
    let grid = LagGrid::standard();
    for ev in day.market_orders.iter().filter(|e| e.price_maintaining) {
        let s = trajectory_after(ev, &day, &grid, Mode::Strict);
        let r = trajectory_after(ev, &day, &grid, Mode::Relaxed);
        for k in 0..2 {
            let n = s[k].values.len();
            assert_eq!(s[k].values[..], r[k].values[..n]);
            if !s[k].terminated_by_quote_change {
                assert_eq!(n, r[k].values.len());
            }
        }
    }
}
