use super::detect::MarketOrderEvent;

/// Market orders followed by at least `separation_ns` of calm: the next
/// market order arrives no sooner than `separation_ns` later. The last order
/// of the day has no successor and is dropped.
pub fn select_event_set(
    events: &[MarketOrderEvent],
    separation_ns: u64,
    maintaining_only: bool,
) -> Vec<MarketOrderEvent> {
    events
        .iter()
        .filter(|e| !maintaining_only || e.price_maintaining)
        .filter(|e| e.next_gap_ns.is_some_and(|g| g >= separation_ns))
        .cloned()
        .collect()
}

/// Mirror of [`select_event_set`] for backward-looking curves: keeps orders
/// preceded by at least `separation_ns` since the previous market order.
pub fn select_event_set_before(
    events: &[MarketOrderEvent],
    separation_ns: u64,
    maintaining_only: bool,
) -> Vec<MarketOrderEvent> {
    events
        .iter()
        .filter(|e| !maintaining_only || e.price_maintaining)
        .filter(|e| e.prev_gap_ns.is_some_and(|g| g >= separation_ns))
        .cloned()
        .collect()
}
