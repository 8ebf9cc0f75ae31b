//! Coordination scores against a random baseline and rank correlations between metrics.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::metrics::MetricLookup;
use crate::{Error, Result};

/// `(M_QL - M_rand) / (1 - M_rand)`; negative when the learned policy coordinates
/// worse than chance.
pub fn coordination_score(m_ql: f64, m_rand: f64) -> Result<f64> {
    if m_rand.is_nan() || m_rand >= 1.0 {
        return Err(Error::InvalidParameter("random baseline must be below 1"));
    }
    Ok((m_ql - m_rand) / (1.0 - m_rand))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinationComparison {
    pub metric: String,
    pub value_ql: f64,
    pub value_rand: f64,
    pub cs: f64,
}

impl CoordinationComparison {
    pub fn new(metric: impl Into<String>, value_ql: f64, value_rand: f64) -> Result<Self> {
        Ok(Self { metric: metric.into(), value_ql, value_rand, cs: coordination_score(value_ql, value_rand)? })
    }
}

/// Two-sided significance class of a correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PFlag {
    Below001,
    Below05,
    NotSignificant,
    /// Fewer than three paired samples, mismatched lengths, or a constant series.
    Degenerate,
}

impl PFlag {
    pub fn label(self) -> &'static str {
        match self {
            PFlag::Below001 => "p<0.001",
            PFlag::Below05 => "p<0.05",
            PFlag::NotSignificant => "ns",
            PFlag::Degenerate => "degenerate",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        [PFlag::Below001, PFlag::Below05, PFlag::NotSignificant, PFlag::Degenerate]
            .into_iter()
            .find(|f| f.label() == label)
    }

    fn from_p(p: f64) -> Self {
        if p < 0.001 {
            PFlag::Below001
        } else if p < 0.05 {
            PFlag::Below05
        } else {
            PFlag::NotSignificant
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationCell {
    /// `None` for degenerate inputs.
    pub rho: Option<f64>,
    pub n_samples: usize,
    /// `√((1 - ρ²) / (N - 2))`.
    pub ase: Option<f64>,
    /// Two-sided p-value from the t approximation.
    pub p_value: Option<f64>,
    pub p_flag: PFlag,
}

impl CorrelationCell {
    fn degenerate(n_samples: usize) -> Self {
        Self { rho: None, n_samples, ase: None, p_value: None, p_flag: PFlag::Degenerate }
    }

    /// Fills ASE and significance for a coefficient over `n_samples > 2` pairs.
    pub fn from_coefficient(rho: f64, n_samples: usize) -> Self {
        if n_samples < 3 || !rho.is_finite() {
            return Self::degenerate(n_samples);
        }
        let rho = rho.clamp(-1.0, 1.0);
        let df = (n_samples - 2) as f64;
        let one_minus = 1.0 - rho * rho;
        let ase = libm::sqrt(one_minus / df);
        let p = if one_minus <= 0.0 { 0.0 } else { student_t_two_sided(rho * libm::sqrt(df / one_minus), df) };
        Self { rho: Some(rho), n_samples, ase: Some(ase), p_value: Some(p), p_flag: PFlag::from_p(p) }
    }
}

/// Average (fractional) 1-based ranks; ties share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // ranks start+1 ..= end share their mean
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson coefficient; `None` for mismatched or short input, non-finite values, or
/// a constant series.
pub fn pearson_coefficient(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> CorrelationCell {
    if xs.len() != ys.len() {
        return CorrelationCell::degenerate(xs.len().min(ys.len()));
    }
    match pearson_coefficient(xs, ys) {
        Some(r) => CorrelationCell::from_coefficient(r, xs.len()),
        None => CorrelationCell::degenerate(xs.len()),
    }
}

/// Spearman rank correlation: Pearson on average ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> CorrelationCell {
    if xs.len() != ys.len() || xs.len() < 3 || xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return CorrelationCell::degenerate(xs.len().min(ys.len()));
    }
    match pearson_coefficient(&average_ranks(xs), &average_ranks(ys)) {
        Some(rho) => CorrelationCell::from_coefficient(rho, xs.len()),
        None => CorrelationCell::degenerate(xs.len()),
    }
}

/// One Spearman cell per `(row, col)` metric pair across `reports`.
pub fn correlation_table<T: MetricLookup>(
    reports: &[T],
    rows: &[&str],
    cols: &[&str],
) -> Result<Vec<Vec<CorrelationCell>>> {
    let series = |key: &str| -> Result<Vec<f64>> {
        reports.iter().map(|r| r.metric(key).ok_or_else(|| Error::UnknownMetric(key.into()))).collect()
    };
    let col_series = cols.iter().map(|c| series(c)).collect::<Result<Vec<_>>>()?;
    rows.iter()
        .map(|r| {
            let xs = series(r)?;
            Ok(col_series.iter().map(|ys| spearman(&xs, ys)).collect())
        })
        .collect()
}

/// Two-sided tail probability `P(|T| ≥ |t|)` of Student's t with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// `I_x(a, b)` by the continued fraction (modified Lentz).
fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b) + a * libm::log(x) + b * libm::log(1.0 - x);
    let front = libm::exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let clamp = |v: f64| if libm::fabs(v) < TINY { TINY } else { v };
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=500 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if libm::fabs(del - 1.0) < EPS {
            break;
        }
    }
    h
}
