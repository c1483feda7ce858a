//! Primitive domain values shared by every module: prices, timestamps, sides.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of price units per currency unit (prices are stored in 10^-4).
pub const PRICE_SCALE: i64 = 10_000;

/// Nanoseconds per second.
pub const NANOS_PER_SEC: u64 = 1_000_000_000;

/// Identifier of a resting order, unique within a trading day.
pub type OrderId = u64;

/// A price in integer units of 10^-4 currency units.
///
/// A tick of $0.01 is therefore 100 units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Price(pub i64);

impl Price {
    pub const fn new(units: i64) -> Self {
        Price(units)
    }

    pub const fn units(self) -> i64 {
        self.0
    }

    /// Price in currency units, for reporting only.
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / PRICE_SCALE as f64
    }

    pub fn is_aligned(self, tick: i64) -> bool {
        tick > 0 && self.0 % tick == 0
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(
            f,
            "{}{}.{:04}",
            sign,
            abs / PRICE_SCALE as u64,
            abs % PRICE_SCALE as u64
        )
    }
}

/// Nanoseconds since midnight of the trading day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Timestamp(pub u64);

impl Timestamp {
    pub const fn from_nanos(ns: u64) -> Self {
        Timestamp(ns)
    }

    pub const fn from_secs(secs: u64) -> Self {
        Timestamp(secs * NANOS_PER_SEC)
    }

    pub const fn nanos(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / NANOS_PER_SEC as f64
    }

    pub fn saturating_add(self, ns: u64) -> Self {
        Timestamp(self.0.saturating_add(ns))
    }

    pub fn saturating_sub(self, ns: u64) -> Self {
        Timestamp(self.0.saturating_sub(ns))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:09}", self.0 / NANOS_PER_SEC, self.0 % NANOS_PER_SEC)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Buy => Side::Sell,
            Side::Sell => Side::Buy,
        }
    }

    /// +1 for buy, -1 for sell (the message-file direction convention).
    pub fn sign(self) -> i64 {
        match self {
            Side::Buy => 1,
            Side::Sell => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Option<Side> {
        match sign {
            1 => Some(Side::Buy),
            -1 => Some(Side::Sell),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Buy => "buy",
            Side::Sell => "sell",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn price_display_uses_four_decimals() {
        assert_eq!(Price(453_100).to_string(), "45.3100");
        assert_eq!(Price(100).to_string(), "0.0100");
        assert_eq!(Price(-9_999_999_999).to_string(), "-999999.9999");
    }

    #[test]
    fn timestamp_display_is_nine_digit_seconds() {
        assert_eq!(Timestamp(34_200_000_000_001).to_string(), "34200.000000001");
    }

    #[test]
    fn side_sign_round_trips() {
        for side in [Side::Buy, Side::Sell] {
            assert_eq!(Side::from_sign(side.sign()), Some(side));
            assert_eq!(side.opposite().opposite(), side);
        }
        assert_eq!(Side::from_sign(0), None);
    }
}
