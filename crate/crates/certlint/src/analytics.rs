//! Compliance-over-time analysis.
//!
//! Turns per-certificate failure counts into (issue date, failures)
//! points, fits an ordinary least-squares line, and buckets failures by
//! calendar year. The certificate's notBefore date stands in for its
//! issue date.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::der::{civil_from_days, DerTimestamp};
use crate::x509::Certificate;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error("no failure count for subject {0:?}")]
    MissingResult(String),
    #[error("fit is underdetermined: need at least two points with distinct t")]
    DegenerateFit,
}

/// One certificate's (issue date, failure count) observation.
#[derive(Debug, Clone, PartialEq)]
pub struct CompliancePoint {
    pub subject_id: String,
    /// Days since 1970-01-01 UTC of notBefore, including the time-of-day
    /// fraction.
    pub t_days: f64,
    pub failures: usize,
    pub not_before: DerTimestamp,
}

/// Least-squares line over compliance points.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    /// Failures per day.
    pub slope: f64,
    /// Failures at t = 0.
    pub intercept: f64,
    pub n: usize,
    pub residual_sum_squares: f64,
}

impl LinearFit {
    pub fn summary(&self) -> String {
        format!("slope_per_day={}, intercept={}, n={}", self.slope, self.intercept, self.n)
    }
}

/// Pair each certificate with its failure count, in input order.
/// `failure_counts` must cover every subject id.
pub fn compliance_points(
    certs: &[(String, &Certificate)],
    failure_counts: &BTreeMap<String, usize>,
) -> Result<Vec<CompliancePoint>, AnalyticsError> {
    certs
        .iter()
        .map(|(subject_id, cert)| {
            let failures = *failure_counts
                .get(subject_id)
                .ok_or_else(|| AnalyticsError::MissingResult(subject_id.clone()))?;
            Ok(CompliancePoint {
                subject_id: subject_id.clone(),
                t_days: cert.not_before.epoch_days_f64(),
                failures,
                not_before: cert.not_before,
            })
        })
        .collect()
}

/// Ordinary least squares over (t, failures).
pub fn linear_fit(points: &[CompliancePoint]) -> Result<LinearFit, AnalyticsError> {
    let n = points.len();
    if n < 2 {
        return Err(AnalyticsError::DegenerateFit);
    }
    let t_mean = points.iter().map(|p| p.t_days).sum::<f64>() / n as f64;
    let y_mean = points.iter().map(|p| p.failures as f64).sum::<f64>() / n as f64;
    let mut s_tt = 0.0;
    let mut s_ty = 0.0;
    for p in points {
        let dt = p.t_days - t_mean;
        s_tt += dt * dt;
        s_ty += dt * (p.failures as f64 - y_mean);
    }
    if s_tt == 0.0 {
        return Err(AnalyticsError::DegenerateFit);
    }
    let slope = s_ty / s_tt;
    let intercept = y_mean - slope * t_mean;
    let residual_sum_squares = points
        .iter()
        .map(|p| {
            let r = p.failures as f64 - (slope * p.t_days + intercept);
            r * r
        })
        .sum();
    Ok(LinearFit { slope, intercept, n, residual_sum_squares })
}

/// Mean failures per UTC calendar year of t.
#[derive(Debug, Clone, PartialEq)]
pub struct YearlyAverage {
    pub year: i32,
    pub mean_failures: f64,
    pub count: usize,
}

/// Bucket points by calendar year; years without points are omitted and
/// output is sorted by year ascending.
pub fn yearly_average(points: &[CompliancePoint]) -> Vec<YearlyAverage> {
    let mut buckets: BTreeMap<i32, (usize, usize)> = BTreeMap::new();
    for p in points {
        let (year, _, _) = civil_from_days(p.t_days.floor() as i64);
        let entry = buckets.entry(year).or_default();
        entry.0 += p.failures;
        entry.1 += 1;
    }
    buckets
        .into_iter()
        .map(|(year, (total, count))| YearlyAverage {
            year,
            mean_failures: total as f64 / count as f64,
            count,
        })
        .collect()
}

/// CSV export of compliance points. Time is in days since epoch so slope
/// magnitudes stay interpretable.
pub fn points_csv(points: &[CompliancePoint]) -> String {
    let mut out = String::from("subject_id,t_days,not_before_iso8601,failures\n");
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.subject_id, p.t_days, p.not_before, p.failures));
    }
    out
}
