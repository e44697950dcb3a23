//! Result rendering: TAP streams and failure-cause summaries.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::engine::{SeverityClass, SuiteResult, Verdict};

/// Escape characters that would corrupt a TAP line: '#' starts a
/// diagnostic, newlines end the test point.
fn sanitize_tap_text(text: &str) -> String {
    text.replace('\\', "\\\\").replace('#', "\\#").replace(['\r', '\n'], " ")
}

/// Render one suite result as a Test Anything Protocol document:
/// plan-first classic dialect, "ok K - message" / "not ok K - message"
/// lines, '#'-prefixed diagnostics after failures.
pub fn emit_tap(result: &SuiteResult) -> String {
    let mut out = format!("1..{}\n", result.verdicts.len());
    for (index, verdict) in result.verdicts.iter().enumerate() {
        let number = index + 1;
        let status = if verdict.passed { "ok" } else { "not ok" };
        let description = sanitize_tap_text(&format!(
            "{} {}: {}",
            verdict.rule_id, verdict.subject_id, verdict.message
        ));
        out.push_str(&format!("{status} {number} - {description}\n"));
        if !verdict.passed {
            for line in verdict.detail.lines() {
                out.push_str(&format!("# {line}\n"));
            }
        } else if verdict.informational {
            for line in verdict.detail.lines() {
                out.push_str(&format!("# informational: {line}\n"));
            }
        }
    }
    out
}

/// Verdicts regrouped per certificate, in first-appearance order.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectVerdicts {
    pub subject_id: String,
    pub verdicts: Vec<Verdict>,
}

/// Regroup suite results by subject id, preserving input order.
pub fn group_by_subject<'a>(
    results: impl IntoIterator<Item = &'a SuiteResult>,
) -> Vec<SubjectVerdicts> {
    let mut order: Vec<String> = Vec::new();
    let mut by_subject: BTreeMap<String, Vec<Verdict>> = BTreeMap::new();
    for result in results {
        for verdict in &result.verdicts {
            if !by_subject.contains_key(&verdict.subject_id) {
                order.push(verdict.subject_id.clone());
            }
            by_subject.entry(verdict.subject_id.clone()).or_default().push(verdict.clone());
        }
    }
    order
        .into_iter()
        .map(|subject_id| {
            let verdicts = by_subject.remove(&subject_id).unwrap_or_default();
            SubjectVerdicts { subject_id, verdicts }
        })
        .collect()
}

/// Maps rule ids to failure-cause categories. Unmapped ids fall into
/// "other".
pub type CauseMap = BTreeMap<String, String>;

/// The cause categories the shipped catalog reports under.
pub fn default_cause_map() -> CauseMap {
    let mut map = CauseMap::new();
    let mut add = |rule: &str, cause: &str| {
        map.insert(rule.to_string(), cause.to_string());
    };
    add("EXTRA-SERIAL", "Serial number");
    add("CORPUS-SERIAL-UNIQ", "Serial number");
    add("GCP-2.4.4", "nsCertType");
    add("GCP-2.3", "Subject Name");
    add("GCP-3.2", "Subject Name");
    add("ROBOT-CN", "Subject Name");
    add("CORPUS-SUBJECT-UNIQ", "Subject Name");
    add("GCP-2.1", "Version");
    add("GCP-2.2", "Signature digest");
    add("RAT-MD5", "Signature digest");
    add("CRL-MD5", "Signature digest");
    add("GCP-2.4.1", "basicConstraints");
    add("GCP-3.3.1", "keyUsage");
    add("GCP-3.3.2", "keyUsage");
    add("HOST-CN-SINGLE", "Host name");
    add("HOST-CN-FQDN", "Host name");
    add("HOST-SAN-DNS", "subjectAltName");
    add("HOST-EKU-SERVERAUTH", "extendedKeyUsage");
    add("RAT-RSA", "Key strength");
    add("RAT-DEBIAN", "Key strength");
    add(crate::engine::LOAD_RULE_ID, "Load failure");
    map
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerCertificateRow {
    pub subject_id: String,
    pub failed_must: usize,
    pub failed_should: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CauseCount {
    pub cause: String,
    /// Number of certificates failing at least one rule in this category;
    /// a certificate failing one category twice still counts once.
    pub certificates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummaryTotals {
    pub checked: usize,
    pub fully_passing: usize,
    /// Certificates with at least one MUST-class failure.
    pub failing_must: usize,
    /// Certificates failing only SHOULD-class rules.
    pub failing_should_only: usize,
}

/// Grouped failure summary over a corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummaryReport {
    pub per_certificate: Vec<PerCertificateRow>,
    /// Cause categories sorted by certificate count descending, ties
    /// broken alphabetically.
    pub by_cause: Vec<CauseCount>,
    pub totals: SummaryTotals,
}

/// Build the summary from per-certificate verdict lists. Categories come
/// from `cause_map`; rule ids it does not cover land in "other".
pub fn summarize(per_certificate: &[SubjectVerdicts], cause_map: &CauseMap) -> SummaryReport {
    let mut rows = Vec::with_capacity(per_certificate.len());
    let mut cause_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for subject in per_certificate {
        let mut failed_must = 0usize;
        let mut failed_should = 0usize;
        let mut causes_here: Vec<&str> = Vec::new();
        for verdict in &subject.verdicts {
            if verdict.passed {
                continue;
            }
            match verdict.level.severity_class() {
                SeverityClass::Mandatory => failed_must += 1,
                SeverityClass::Recommendation => failed_should += 1,
                SeverityClass::Optional => {}
            }
            let cause = cause_map.get(&verdict.rule_id).map(String::as_str).unwrap_or("other");
            if !causes_here.contains(&cause) {
                causes_here.push(cause);
            }
        }
        for cause in causes_here {
            *cause_counts.entry(cause).or_default() += 1;
        }
        rows.push(PerCertificateRow {
            subject_id: subject.subject_id.clone(),
            failed_must,
            failed_should,
            pass: failed_must + failed_should == 0,
        });
    }
    let mut by_cause: Vec<CauseCount> = cause_counts
        .into_iter()
        .map(|(cause, certificates)| CauseCount { cause: cause.to_string(), certificates })
        .collect();
    by_cause.sort_by(|a, b| b.certificates.cmp(&a.certificates).then(a.cause.cmp(&b.cause)));
    let checked = rows.len();
    let fully_passing = rows.iter().filter(|r| r.pass).count();
    let failing_must = rows.iter().filter(|r| r.failed_must > 0).count();
    let failing_should_only =
        rows.iter().filter(|r| r.failed_must == 0 && r.failed_should > 0).count();
    SummaryReport {
        per_certificate: rows,
        by_cause,
        totals: SummaryTotals { checked, fully_passing, failing_must, failing_should_only },
    }
}

impl SummaryReport {
    /// Human-readable table rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("certificates checked:  {}\n", self.totals.checked));
        out.push_str(&format!("fully passing:         {}\n", self.totals.fully_passing));
        out.push_str(&format!("failing MUST:          {}\n", self.totals.failing_must));
        out.push_str(&format!("failing SHOULD only:   {}\n", self.totals.failing_should_only));
        if !self.by_cause.is_empty() {
            out.push_str("\ncause                     certificates failing\n");
            for row in &self.by_cause {
                out.push_str(&format!("{:<25} {}\n", row.cause, row.certificates));
            }
        }
        out.push_str("\nsubject_id  failed_must  failed_should  pass\n");
        for row in &self.per_certificate {
            out.push_str(&format!(
                "{}  {}  {}  {}\n",
                row.subject_id, row.failed_must, row.failed_should, row.pass
            ));
        }
        out
    }

    /// Machine-readable JSON document, one per run.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    /// CSV export of the per-certificate rows.
    pub fn per_certificate_csv(&self) -> String {
        let mut out = String::from("subject_id,failed_must,failed_should,pass\n");
        for row in &self.per_certificate {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.subject_id, row.failed_must, row.failed_should, row.pass
            ));
        }
        out
    }
}
