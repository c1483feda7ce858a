use std::io::{self, Write};

use super::StatsError;

/// Empirical distribution function of a finite sample.
///
/// `eval(x)` is the fraction of sample values `<= x`, so the function is
/// right-continuous and reaches exactly 1 at the largest sample value.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: impl IntoIterator<Item = f64>) -> Result<Self, StatsError> {
        let mut sorted: Vec<f64> = samples.into_iter().collect();
        if sorted.is_empty() {
            return Err(StatsError::EmptySample);
        }
        if sorted.iter().any(|x| !x.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        sorted.sort_by(f64::total_cmp);
        Ok(Ecdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|v| *v <= x);
        count as f64 / self.sorted.len() as f64
    }

    /// Jump points `(x, F(x))`, one per distinct sample value.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = f,
                _ => out.push((x, f)),
            }
        }
        out
    }

    /// Kolmogorov-Smirnov distance to a continuous reference CDF.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Two-column CSV `x,F`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "x,F")?;
        for (x, f) in self.points() {
            writeln!(out, "{x},{f}")?;
        }
        Ok(())
    }

    /// Two-column CSV `x,1-F` for upper-tail plots.
    pub fn write_upper_tail_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "x,one_minus_F")?;
        for (x, f) in self.points() {
            writeln!(out, "{x},{}", 1.0 - f)?;
        }
        Ok(())
    }
}

/// ECDF of the sample after subtracting its minimum, so support starts at 0.
pub fn min_shifted_ecdf(samples: impl IntoIterator<Item = f64>) -> Result<Ecdf, StatsError> {
    let ecdf = Ecdf::new(samples)?;
    let min = ecdf.min();
    Ok(Ecdf {
        sorted: ecdf.sorted.into_iter().map(|x| x - min).collect(),
    })
}
