#![allow(dead_code)]

use lobkit_core::event_study::StudyDay;
use lobkit_core::market_data::{replay, RawMessage, Step};
use lobkit_core::zi_sim::{simulate_day, SimOutput, ZiConfig};
use lobkit_core::Book;

/// Rates in the 2:53:45 market:limit:cancel mix.
pub fn mixed_config(seed: u64, horizon_secs: f64) -> ZiConfig {
    ZiConfig {
        limit_rate: 1.06,
        market_rate: 0.2,
        cancel_rate: 0.05,
        levels: 5,
        market_sizes: Some("uniform:1000:3400:100".parse().unwrap()),
        horizon_secs,
        seed,
        ..ZiConfig::default()
    }
}

pub fn simulate(config: &ZiConfig) -> (SimOutput, Vec<RawMessage>) {
    let out = simulate_day(config).unwrap();
    let msgs: Vec<RawMessage> = out.full_messages().copied().collect();
    (out, msgs)
}

pub fn replay_all(msgs: &[RawMessage], tick: i64) -> Vec<Step> {
    replay(msgs.iter().copied(), Book::new(tick))
        .collect::<Result<_, _>>()
        .unwrap()
}

pub fn study_day(msgs: &[RawMessage], tick: i64) -> StudyDay {
    StudyDay::from_steps(&replay_all(msgs, tick), None)
}
