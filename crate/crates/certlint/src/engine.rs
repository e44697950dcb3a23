//! Rule evaluation engine.
//!
//! A [`Rule`] pairs a predicate with an RFC 2119 requirement level; a
//! [`Suite`] is an ordered list of shared rules; [`run_suite`] walks a
//! list of subjects and produces one [`Verdict`] per (subject, rule),
//! preceded by a synthetic load verdict per subject. Outcomes are strictly
//! binary: every verdict either passed or failed, with no intermediate
//! degrees. Rules at MAY level can never fail; their observations are
//! reported as informational passes.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use crate::crl::Crl;
use crate::x509::Certificate;

/// RFC 2119 requirement level of a provision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Rfc2119Level {
    Must,
    MustNot,
    Should,
    ShouldNot,
    Recommended,
    May,
}

/// Coarse severity grouping used for counting and filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeverityClass {
    /// MAY: no obligation.
    Optional,
    /// SHOULD, SHOULD NOT, RECOMMENDED.
    Recommendation,
    /// MUST, MUST NOT.
    Mandatory,
}

impl Rfc2119Level {
    pub fn severity_class(self) -> SeverityClass {
        match self {
            Rfc2119Level::Must | Rfc2119Level::MustNot => SeverityClass::Mandatory,
            Rfc2119Level::Should | Rfc2119Level::ShouldNot | Rfc2119Level::Recommended => {
                SeverityClass::Recommendation
            }
            Rfc2119Level::May => SeverityClass::Optional,
        }
    }

    pub fn parse(s: &str) -> Option<Rfc2119Level> {
        match s.to_ascii_lowercase().replace([' ', '-'], "_").as_str() {
            "must" => Some(Rfc2119Level::Must),
            "must_not" => Some(Rfc2119Level::MustNot),
            "should" => Some(Rfc2119Level::Should),
            "should_not" => Some(Rfc2119Level::ShouldNot),
            "recommended" => Some(Rfc2119Level::Recommended),
            "may" => Some(Rfc2119Level::May),
            _ => None,
        }
    }
}

impl std::fmt::Display for Rfc2119Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Rfc2119Level::Must => "MUST",
            Rfc2119Level::MustNot => "MUST NOT",
            Rfc2119Level::Should => "SHOULD",
            Rfc2119Level::ShouldNot => "SHOULD NOT",
            Rfc2119Level::Recommended => "RECOMMENDED",
            Rfc2119Level::May => "MAY",
        };
        f.write_str(s)
    }
}

/// The certificate class (or CRL) a rule applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppliesTo {
    Ca,
    Host,
    Person,
    Robot,
    AnyEndEntity,
    Any,
    Crl,
}

/// Result of running one predicate against one subject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub detail: String,
    pub informational: bool,
}

impl CheckOutcome {
    pub fn pass(detail: impl Into<String>) -> CheckOutcome {
        CheckOutcome { passed: true, detail: detail.into(), informational: false }
    }

    pub fn fail(detail: impl Into<String>) -> CheckOutcome {
        CheckOutcome { passed: false, detail: detail.into(), informational: false }
    }

    /// A passing verdict that carries an observation rather than a check
    /// result (skipped checks, MAY-level notes). Never affects
    /// aggregation or exit status.
    pub fn informational(detail: impl Into<String>) -> CheckOutcome {
        CheckOutcome { passed: true, detail: detail.into(), informational: true }
    }

    pub fn from_bool(passed: bool, detail: impl Into<String>) -> CheckOutcome {
        CheckOutcome { passed, detail: detail.into(), informational: false }
    }
}

/// The predicate side of a rule: certificate rules and CRL rules are
/// distinct; feeding a subject of the wrong kind yields a failure, not a
/// crash, so class mix-ups surface as specific test failures.
pub enum RuleCheck {
    Cert(Box<dyn Fn(&Certificate) -> CheckOutcome + Send + Sync>),
    Crl(Box<dyn Fn(&Crl) -> CheckOutcome + Send + Sync>),
}

/// A provision check: identifier, reference, level, class, predicate and
/// the message printed on failure.
pub struct Rule {
    pub id: &'static str,
    pub provision: &'static str,
    pub level: Rfc2119Level,
    pub applies_to: AppliesTo,
    pub message: &'static str,
    pub check: RuleCheck,
}

impl Rule {
    pub fn cert(
        id: &'static str,
        provision: &'static str,
        level: Rfc2119Level,
        applies_to: AppliesTo,
        message: &'static str,
        check: impl Fn(&Certificate) -> CheckOutcome + Send + Sync + 'static,
    ) -> Arc<Rule> {
        Arc::new(Rule { id, provision, level, applies_to, message, check: RuleCheck::Cert(Box::new(check)) })
    }

    pub fn crl(
        id: &'static str,
        provision: &'static str,
        level: Rfc2119Level,
        message: &'static str,
        check: impl Fn(&Crl) -> CheckOutcome + Send + Sync + 'static,
    ) -> Arc<Rule> {
        Arc::new(Rule {
            id,
            provision,
            level,
            applies_to: AppliesTo::Crl,
            message,
            check: RuleCheck::Crl(Box::new(check)),
        })
    }
}

impl std::fmt::Debug for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rule")
            .field("id", &self.id)
            .field("level", &self.level)
            .field("applies_to", &self.applies_to)
            .finish_non_exhaustive()
    }
}

/// An ordered list of shared rules run as one unit.
#[derive(Debug, Clone)]
pub struct Suite {
    pub name: String,
    pub rules: Vec<Arc<Rule>>,
}

impl Suite {
    pub fn new(name: impl Into<String>, rules: Vec<Arc<Rule>>) -> Suite {
        Suite { name: name.into(), rules }
    }

    /// Keep only rules at the given level's strength or weaker, so SHOULD
    /// provisions can run as their own pass without duplicating catalogs.
    pub fn filter_by_max_level(&self, ceiling: Rfc2119Level) -> Suite {
        let rules = self
            .rules
            .iter()
            .filter(|r| r.level.severity_class() <= ceiling.severity_class())
            .cloned()
            .collect();
        Suite { name: self.name.clone(), rules }
    }
}

/// Pass/fail outcome of one rule against one subject.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub rule_id: String,
    /// Certificate file name plus index, as assigned by the caller.
    pub subject_id: String,
    pub passed: bool,
    /// Passing verdicts that only record an observation; these never count
    /// as failures anywhere.
    pub informational: bool,
    pub detail: String,
    pub message: String,
    pub level: Rfc2119Level,
}

/// Identifier used for the synthetic per-subject load verdict.
pub const LOAD_RULE_ID: &str = "LOAD";

/// A subject as handed to a suite: a parse result tagged with its id.
pub struct SubjectRecord {
    pub id: String,
    pub outcome: Result<ParsedSubject, String>,
}

pub enum ParsedSubject {
    Cert(Box<Certificate>),
    Crl(Crl),
}

impl SubjectRecord {
    pub fn cert(id: impl Into<String>, cert: Certificate) -> SubjectRecord {
        SubjectRecord { id: id.into(), outcome: Ok(ParsedSubject::Cert(Box::new(cert))) }
    }

    pub fn crl(id: impl Into<String>, crl: Crl) -> SubjectRecord {
        SubjectRecord { id: id.into(), outcome: Ok(ParsedSubject::Crl(crl)) }
    }

    pub fn unparsed(id: impl Into<String>, error: impl Into<String>) -> SubjectRecord {
        SubjectRecord { id: id.into(), outcome: Err(error.into()) }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Ok(ParsedSubject::Cert(c)) => Some(c),
            _ => None,
        }
    }
}

/// Evaluate one rule against one parsed subject.
///
/// A predicate that panics yields a failing verdict with a "rule error"
/// detail instead of aborting the run, so one bad certificate cannot mask
/// results for the others. MAY-level outcomes are downgraded to
/// informational passes: RFC 2119 MAY imposes no obligation.
pub fn evaluate(rule: &Rule, subject_id: &str, subject: &ParsedSubject) -> Verdict {
    let outcome = catch_unwind(AssertUnwindSafe(|| match (&rule.check, subject) {
        (RuleCheck::Cert(check), ParsedSubject::Cert(cert)) => check(cert),
        (RuleCheck::Crl(check), ParsedSubject::Crl(crl)) => check(crl),
        (RuleCheck::Cert(_), ParsedSubject::Crl(_)) => {
            CheckOutcome::fail("subject kind mismatch: certificate rule run against a CRL")
        }
        (RuleCheck::Crl(_), ParsedSubject::Cert(_)) => {
            CheckOutcome::fail("subject kind mismatch: CRL rule run against a certificate")
        }
    }))
    .unwrap_or_else(|panic| {
        let text = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        CheckOutcome::fail(format!("rule error: {text}"))
    });
    let outcome = if rule.level == Rfc2119Level::May && !outcome.passed {
        CheckOutcome::informational(format!("observation (MAY): {}", outcome.detail))
    } else {
        outcome
    };
    Verdict {
        rule_id: rule.id.to_string(),
        subject_id: subject_id.to_string(),
        passed: outcome.passed,
        informational: outcome.informational,
        detail: outcome.detail,
        message: rule.message.to_string(),
        level: rule.level,
    }
}

/// Aggregated outcome of one suite over a subject list.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SuiteResult {
    pub suite_name: String,
    pub verdicts: Vec<Verdict>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Failures of MUST / MUST NOT rules.
    pub failed_must: usize,
    /// Failures of SHOULD / SHOULD NOT / RECOMMENDED rules.
    pub failed_should: usize,
}

impl SuiteResult {
    pub fn from_verdicts(suite_name: impl Into<String>, verdicts: Vec<Verdict>) -> SuiteResult {
        let total = verdicts.len();
        let failed = verdicts.iter().filter(|v| !v.passed).count();
        let failed_must = verdicts
            .iter()
            .filter(|v| !v.passed && v.level.severity_class() == SeverityClass::Mandatory)
            .count();
        let failed_should = verdicts
            .iter()
            .filter(|v| !v.passed && v.level.severity_class() == SeverityClass::Recommendation)
            .count();
        SuiteResult {
            suite_name: suite_name.into(),
            total,
            passed: total - failed,
            failed,
            failed_must,
            failed_should,
            verdicts,
        }
    }
}

/// Run a suite over subjects in order. Each subject gets a synthetic load
/// verdict first (pass iff it parsed), then one verdict per rule in
/// catalog order; rules against an unloaded subject fail with detail
/// "not loaded".
pub fn run_suite(suite: &Suite, subjects: &[SubjectRecord]) -> SuiteResult {
    let mut verdicts = Vec::with_capacity(subjects.len() * (suite.rules.len() + 1));
    for subject in subjects {
        match &subject.outcome {
            Ok(parsed) => {
                verdicts.push(Verdict {
                    rule_id: LOAD_RULE_ID.to_string(),
                    subject_id: subject.id.clone(),
                    passed: true,
                    informational: false,
                    detail: "parsed".to_string(),
                    message: "subject loads and parses".to_string(),
                    level: Rfc2119Level::Must,
                });
                for rule in &suite.rules {
                    verdicts.push(evaluate(rule, &subject.id, parsed));
                }
            }
            Err(error) => {
                verdicts.push(Verdict {
                    rule_id: LOAD_RULE_ID.to_string(),
                    subject_id: subject.id.clone(),
                    passed: false,
                    informational: false,
                    detail: error.clone(),
                    message: "subject loads and parses".to_string(),
                    level: Rfc2119Level::Must,
                });
                for rule in &suite.rules {
                    verdicts.push(Verdict {
                        rule_id: rule.id.to_string(),
                        subject_id: subject.id.clone(),
                        passed: false,
                        informational: false,
                        detail: "not loaded".to_string(),
                        message: rule.message.to_string(),
                        level: rule.level,
                    });
                }
            }
        }
    }
    SuiteResult::from_verdicts(suite.name.clone(), verdicts)
}

/// A certificate referenced by a corpus-level rule.
#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry<'a> {
    pub id: &'a str,
    pub cert: &'a Certificate,
}

/// A corpus rule violation: the input index of the offending certificate
/// plus a detail string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusViolation {
    pub index: usize,
    pub detail: String,
}

/// Predicate of a corpus rule: violations over the whole certificate list.
pub type CorpusCheck = Box<dyn Fn(&[CorpusEntry]) -> Vec<CorpusViolation> + Send + Sync>;

/// A rule over the whole certificate list, e.g. uniqueness checks that
/// cannot be expressed per certificate.
pub struct CorpusRule {
    pub id: &'static str,
    pub provision: &'static str,
    pub level: Rfc2119Level,
    pub message: &'static str,
    pub check: CorpusCheck,
}

impl std::fmt::Debug for CorpusRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CorpusRule").field("id", &self.id).field("level", &self.level).finish_non_exhaustive()
    }
}

/// Run corpus rules over the certificate list. Only violations produce
/// verdicts: every member of a collision is reported, in input order,
/// and a fully distinct corpus yields an empty list.
pub fn run_corpus_checks(rules: &[CorpusRule], entries: &[CorpusEntry]) -> Vec<Verdict> {
    let mut verdicts = Vec::new();
    for rule in rules {
        let mut violations = (rule.check)(entries);
        violations.sort_by_key(|v| v.index);
        for violation in violations {
            verdicts.push(Verdict {
                rule_id: rule.id.to_string(),
                subject_id: entries[violation.index].id.to_string(),
                passed: false,
                informational: false,
                detail: violation.detail,
                message: rule.message.to_string(),
                level: rule.level,
            });
        }
    }
    verdicts
}

/// Combined outcome across suite results: PASS iff every verdict passed.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct OverallResult {
    pub passed: bool,
    pub total: usize,
    pub passed_count: usize,
    pub failed: usize,
    pub failed_must: usize,
    pub failed_should: usize,
    /// Set when no verdicts were produced at all, so callers can tell
    /// vacuous success from real success.
    pub no_tests_run: bool,
}

pub fn aggregate(results: &[SuiteResult]) -> OverallResult {
    let total: usize = results.iter().map(|r| r.total).sum();
    let failed: usize = results.iter().map(|r| r.failed).sum();
    OverallResult {
        passed: failed == 0,
        total,
        passed_count: total - failed,
        failed,
        failed_must: results.iter().map(|r| r.failed_must).sum(),
        failed_should: results.iter().map(|r| r.failed_should).sum(),
        no_tests_run: total == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::der::{DerTimestamp, TimeForm};
    use crate::oids;
    use crate::x509::{DistinguishedName, PublicKeyInfo};
    use num_bigint::BigInt;

    fn dummy_cert(version: i64, sig_alg_name: &str) -> Certificate {
        let ts = |year| DerTimestamp::new(year, 1, 1, 0, 0, 0, TimeForm::UtcTime).unwrap();
        Certificate {
            version,
            serial: BigInt::from(7),
            sig_alg_oid: oids::sha256_with_rsa(),
            sig_alg_name: sig_alg_name.to_string(),
            issuer: DistinguishedName { elements: vec![], canonical: String::new() },
            subject: DistinguishedName { elements: vec![], canonical: String::new() },
            not_before: ts(2010),
            not_after: ts(2020),
            public_key: PublicKeyInfo {
                algorithm: oids::rsa_encryption(),
                rsa: None,
                spki_der: vec![],
            },
            extensions: vec![],
            raw_der: vec![],
            warnings: vec![],
        }
    }

    fn version_rule() -> Arc<Rule> {
        Rule::cert(
            "T-VERSION",
            "test 1",
            Rfc2119Level::Must,
            AppliesTo::Any,
            "version must be 2 (X.509 v3)",
            |cert| {
                CheckOutcome::from_bool(cert.version == 2, format!("expected 2, got {}", cert.version))
            },
        )
    }

    fn md5_rule() -> Arc<Rule> {
        Rule::cert(
            "T-MD5",
            "test 2",
            Rfc2119Level::MustNot,
            AppliesTo::Any,
            "signature digest must not be MD5",
            |cert| {
                CheckOutcome::from_bool(
                    !cert.sig_alg_name.to_ascii_lowercase().contains("md5"),
                    format!("signature algorithm is {}", cert.sig_alg_name),
                )
            },
        )
    }

    #[test]
    fn version_rule_passes_v3_and_fails_v1() {
        let rule = version_rule();
        let v3 = ParsedSubject::Cert(Box::new(dummy_cert(2, "sha256WithRSAEncryption")));
        let verdict = evaluate(&rule, "a.pem#0", &v3);
        assert!(verdict.passed);
        let v1 = ParsedSubject::Cert(Box::new(dummy_cert(0, "sha256WithRSAEncryption")));
        let verdict = evaluate(&rule, "a.pem#0", &v1);
        assert!(!verdict.passed);
        assert_eq!(verdict.detail, "expected 2, got 0");
        assert_eq!(verdict.level, Rfc2119Level::Must);
    }

    #[test]
    fn md5_signature_fails_must_not_rule() {
        let rule = md5_rule();
        let cert = ParsedSubject::Cert(Box::new(dummy_cert(2, "md5WithRSAEncryption")));
        assert!(!evaluate(&rule, "x", &cert).passed);
    }

    #[test]
    fn panicking_rule_becomes_failing_verdict() {
        let rule = Rule::cert(
            "T-PANIC",
            "test",
            Rfc2119Level::Must,
            AppliesTo::Any,
            "does not crash",
            |_| panic!("boom"),
        );
        let cert = ParsedSubject::Cert(Box::new(dummy_cert(2, "sha256WithRSAEncryption")));
        let verdict = evaluate(&rule, "x", &cert);
        assert!(!verdict.passed);
        assert_eq!(verdict.detail, "rule error: boom");
    }

    #[test]
    fn may_level_rules_never_fail() {
        let rule = Rule::cert(
            "T-MAY",
            "test",
            Rfc2119Level::May,
            AppliesTo::Any,
            "optional property",
            |_| CheckOutcome::fail("absent"),
        );
        let cert = ParsedSubject::Cert(Box::new(dummy_cert(2, "sha256WithRSAEncryption")));
        let verdict = evaluate(&rule, "x", &cert);
        assert!(verdict.passed);
        assert!(verdict.informational);
        let result = SuiteResult::from_verdicts("t", vec![verdict]);
        assert_eq!(result.failed, 0);
        assert!(aggregate(&[result]).passed);
    }

    #[test]
    fn kind_mismatch_is_a_failure_not_a_crash() {
        let rule = md5_rule();
        let crl = ParsedSubject::Crl(crate::crl::Crl {
            issuer: DistinguishedName { elements: vec![], canonical: String::new() },
            sig_alg_oid: oids::sha256_with_rsa(),
            sig_alg_name: "sha256WithRSAEncryption".to_string(),
            this_update: DerTimestamp::new(2010, 1, 1, 0, 0, 0, TimeForm::UtcTime).unwrap(),
            next_update: None,
            revoked_count: 0,
            warnings: vec![],
        });
        let verdict = evaluate(&rule, "crl", &crl);
        assert!(!verdict.passed);
        assert!(verdict.detail.contains("kind mismatch"));
    }

    #[test]
    fn run_suite_emits_load_then_rules_per_subject() {
        let suite = Suite::new("t", vec![version_rule(), md5_rule(), version_rule_clone()]);
        let subjects = vec![
            SubjectRecord::cert("a#0", dummy_cert(2, "sha256WithRSAEncryption")),
            SubjectRecord::cert("b#0", dummy_cert(2, "sha256WithRSAEncryption")),
        ];
        let result = run_suite(&suite, &subjects);
        assert_eq!(result.total, 8);
        assert_eq!(result.failed, 0);
        assert_eq!(result.verdicts[0].rule_id, LOAD_RULE_ID);
        assert_eq!(result.verdicts[0].subject_id, "a#0");
        assert_eq!(result.verdicts[4].rule_id, LOAD_RULE_ID);
        assert_eq!(result.verdicts[4].subject_id, "b#0");
    }

    fn version_rule_clone() -> Arc<Rule> {
        Rule::cert(
            "T-VERSION-2",
            "test 3",
            Rfc2119Level::Should,
            AppliesTo::Any,
            "another check",
            |_| CheckOutcome::pass("ok"),
        )
    }

    #[test]
    fn unparseable_subject_fails_load_and_rules() {
        let suite = Suite::new("t", vec![version_rule()]);
        let subjects = vec![SubjectRecord::unparsed("bad.pem", "not DER")];
        let result = run_suite(&suite, &subjects);
        assert_eq!(result.total, 2);
        assert_eq!(result.failed, 2);
        assert_eq!(result.verdicts[0].rule_id, LOAD_RULE_ID);
        assert_eq!(result.verdicts[0].detail, "not DER");
        assert_eq!(result.verdicts[1].detail, "not loaded");
    }

    #[test]
    fn empty_subject_list_yields_empty_result() {
        let suite = Suite::new("t", vec![version_rule()]);
        let result = run_suite(&suite, &[]);
        assert_eq!(result.total, 0);
        assert!(result.verdicts.is_empty());
    }

    #[test]
    fn counts_are_invariant_under_subject_permutation() {
        let suite = Suite::new("t", vec![version_rule(), md5_rule()]);
        let a = || SubjectRecord::cert("a", dummy_cert(0, "sha256WithRSAEncryption"));
        let b = || SubjectRecord::cert("b", dummy_cert(2, "md5WithRSAEncryption"));
        let c = || SubjectRecord::cert("c", dummy_cert(2, "sha256WithRSAEncryption"));
        let forward = run_suite(&suite, &[a(), b(), c()]);
        let backward = run_suite(&suite, &[c(), b(), a()]);
        assert_eq!(forward.total, backward.total);
        assert_eq!(forward.failed, backward.failed);
        assert_eq!(forward.failed_must, backward.failed_must);
        assert_eq!(forward.failed_should, backward.failed_should);
        // Same inputs give identical verdict lists.
        let again = run_suite(&suite, &[a(), b(), c()]);
        assert_eq!(forward.verdicts, again.verdicts);
    }

    #[test]
    fn severity_partition_counts_by_level_class() {
        let must_fail = Rule::cert("M", "p", Rfc2119Level::MustNot, AppliesTo::Any, "m", |_| {
            CheckOutcome::fail("x")
        });
        let should_fail = Rule::cert("S", "p", Rfc2119Level::Should, AppliesTo::Any, "s", |_| {
            CheckOutcome::fail("x")
        });
        let suite = Suite::new("t", vec![must_fail, should_fail]);
        let result = run_suite(&suite, &[SubjectRecord::cert("a", dummy_cert(2, "x"))]);
        assert_eq!(result.failed, 2);
        assert_eq!(result.failed_must, 1);
        assert_eq!(result.failed_should, 1);
        assert!(result.failed_must + result.failed_should <= result.failed);
    }

    #[test]
    fn aggregate_is_pass_iff_every_verdict_passed() {
        let ok = SuiteResult::from_verdicts(
            "a",
            vec![Verdict {
                rule_id: "r".into(),
                subject_id: "s".into(),
                passed: true,
                informational: false,
                detail: String::new(),
                message: String::new(),
                level: Rfc2119Level::Must,
            }],
        );
        let bad = SuiteResult::from_verdicts(
            "b",
            vec![Verdict {
                rule_id: "r".into(),
                subject_id: "s".into(),
                passed: false,
                informational: false,
                detail: String::new(),
                message: String::new(),
                level: Rfc2119Level::Should,
            }],
        );
        assert!(aggregate(std::slice::from_ref(&ok)).passed);
        let combined = aggregate(&[ok, bad]);
        assert!(!combined.passed);
        assert_eq!(combined.total, 2);
        assert_eq!(combined.failed, 1);
    }

    #[test]
    fn empty_aggregation_is_vacuous_pass_with_flag() {
        let overall = aggregate(&[]);
        assert!(overall.passed);
        assert_eq!(overall.total, 0);
        assert!(overall.no_tests_run);
        let empty_suite = SuiteResult::from_verdicts("e", vec![]);
        assert!(aggregate(&[empty_suite]).no_tests_run);
    }

    #[test]
    fn level_filter_keeps_level_and_weaker() {
        let suite = Suite::new(
            "t",
            vec![
                version_rule(),       // MUST
                version_rule_clone(), // SHOULD
                Rule::cert("MAYR", "p", Rfc2119Level::May, AppliesTo::Any, "m", |_| {
                    CheckOutcome::pass("")
                }),
            ],
        );
        let should_only = suite.filter_by_max_level(Rfc2119Level::Should);
        let ids: Vec<_> = should_only.rules.iter().map(|r| r.id).collect();
        assert_eq!(ids, vec!["T-VERSION-2", "MAYR"]);
        assert_eq!(suite.filter_by_max_level(Rfc2119Level::Must).rules.len(), 3);
        assert_eq!(suite.filter_by_max_level(Rfc2119Level::May).rules.len(), 1);
    }
}
