//! The shipped rule catalogs.
//!
//! One suite per certificate class (CA, host, person, robot), a
//! vulnerability suite, a CRL suite, and corpus-level uniqueness rules.
//! Provisions shared between classes are a single [`Rule`] object
//! referenced by several suites. The provision ledger records what is
//! implemented and what is out of reach for an offline, single-certificate
//! tool, so coverage stays auditable.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigUint;
use regex::Regex;
use thiserror::Error;

use crate::engine::{
    AppliesTo, CheckOutcome, CorpusEntry, CorpusRule, CorpusViolation, Rfc2119Level, Rule, Suite,
};
use crate::oids;
use crate::x509::{
    Certificate, DistinguishedName, NsCertType, KeyUsage, ParsedExtension, PublicKeyInfo,
    StringEncoding,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read blacklist {path}: {reason}")]
    BlacklistUnreadable { path: String, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid pattern {pattern:?}: {reason}")]
    BadPattern { pattern: String, reason: String },
}

/// Tunable thresholds and patterns for the catalog.
#[derive(Debug, Clone)]
pub struct CatalogConfig {
    /// Hard floor for RSA modulus size, in bits.
    pub min_modulus_bits: usize,
    /// Advisory floor; moduli between the two produce a note, not a failure.
    pub recommended_modulus_bits: usize,
    /// Minimum RSA public exponent; must be odd.
    pub min_exponent: u64,
    pub blacklist_path: Option<PathBuf>,
    /// Pattern a robot certificate's CN must match.
    pub robot_cn_pattern: String,
    /// Pattern a host certificate's CN must match (after an optional
    /// "service/" prefix).
    pub host_fqdn_pattern: String,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        CatalogConfig {
            min_modulus_bits: 1024,
            recommended_modulus_bits: 2048,
            min_exponent: 65_537,
            blacklist_path: None,
            robot_cn_pattern: "^Robot".to_string(),
            host_fqdn_pattern: r"(?i)^([a-z0-9]([a-z0-9-]*[a-z0-9])?\.)+[a-z][a-z0-9-]*[a-z0-9]$"
                .to_string(),
        }
    }
}

impl CatalogConfig {
    fn validate(&self) -> Result<(), CatalogError> {
        if self.min_modulus_bits > self.recommended_modulus_bits {
            return Err(CatalogError::InvalidConfig(format!(
                "min_modulus_bits {} exceeds recommended_modulus_bits {}",
                self.min_modulus_bits, self.recommended_modulus_bits
            )));
        }
        if self.min_exponent.is_multiple_of(2) {
            return Err(CatalogError::InvalidConfig(format!(
                "min_exponent {} must be odd",
                self.min_exponent
            )));
        }
        Ok(())
    }
}

/// Which DN value encodings are acceptable where.
#[derive(Debug, Clone)]
pub struct EncodingPolicy {
    /// Encodings allowed for attributes without a specific requirement.
    pub general: Vec<StringEncoding>,
    /// Attributes that must use ia5String.
    pub ia5_only: Vec<crate::der::Oid>,
}

impl Default for EncodingPolicy {
    fn default() -> Self {
        EncodingPolicy {
            general: vec![StringEncoding::PrintableString, StringEncoding::Utf8String],
            ia5_only: vec![oids::domain_component(), oids::email_address()],
        }
    }
}

/// One finding per element whose encoding violates the policy; an empty
/// list means the name is compliant.
pub fn check_name_encoding(dn: &DistinguishedName, policy: &EncodingPolicy) -> Vec<String> {
    let mut findings = Vec::new();
    for element in &dn.elements {
        let label = if element.attr_name.is_empty() {
            element.attr_type.to_string()
        } else {
            element.attr_name.clone()
        };
        if policy.ia5_only.contains(&element.attr_type) {
            if element.encoding != StringEncoding::Ia5String {
                findings.push(format!(
                    "{label}={} encoded as {}, expected ia5String",
                    element.value, element.encoding
                ));
            }
        } else if !policy.general.contains(&element.encoding) {
            findings.push(format!(
                "{label}={} encoded as {}, expected one of {}",
                element.value,
                element.encoding,
                policy.general.iter().map(ToString::to_string).collect::<Vec<_>>().join("/")
            ));
        }
    }
    findings
}

/// Key usage bits each asserted nsCertType purpose requires.
const NSCERTTYPE_REQUIREMENTS: [(u8, &str, &[u16]); 6] = [
    (NsCertType::SSL_CA, "sslCA", &[KeyUsage::KEY_CERT_SIGN]),
    (NsCertType::SMIME_CA, "emailCA", &[KeyUsage::KEY_CERT_SIGN]),
    (NsCertType::OBJECT_SIGNING_CA, "objectSigningCA", &[KeyUsage::KEY_CERT_SIGN]),
    (NsCertType::SSL_CLIENT, "sslClient", &[KeyUsage::DIGITAL_SIGNATURE]),
    (
        NsCertType::SSL_SERVER,
        "sslServer",
        &[KeyUsage::KEY_ENCIPHERMENT, KeyUsage::DIGITAL_SIGNATURE],
    ),
    (NsCertType::SMIME, "email", &[KeyUsage::DIGITAL_SIGNATURE]),
];

/// Check that every asserted nsCertType purpose has its required keyUsage
/// bits. Returns whether the certificate is consistent plus a detail
/// string naming what failed (or passed).
pub fn check_nscerttype_consistency(cert: &Certificate) -> (bool, String) {
    let Some(ns_ext) = cert.extension("nsCertType") else {
        return (true, "no nsCertType extension present".to_string());
    };
    let Some(ParsedExtension::NsCertType(ns_bits)) = &ns_ext.parsed else {
        return (false, "nsCertType payload unreadable".to_string());
    };
    let key_usage = cert.extension("keyUsage").and_then(|e| match &e.parsed {
        Some(ParsedExtension::KeyUsage(ku)) => Some(*ku),
        _ => None,
    });
    let Some(key_usage) = key_usage else {
        return (false, "keyUsage missing".to_string());
    };
    let mut problems = Vec::new();
    for (ns_bit, ns_name, required) in NSCERTTYPE_REQUIREMENTS {
        if ns_bits.asserts(ns_bit) && !required.iter().any(|&bit| key_usage.asserts(bit)) {
            let wanted: Vec<&str> = KeyUsage(required.iter().copied().fold(0, |a, b| a | b))
                .bit_names();
            problems.push(format!("{ns_name} requires keyUsage {}", wanted.join(" or ")));
        }
    }
    if problems.is_empty() {
        (true, "nsCertType consistent with keyUsage".to_string())
    } else {
        (false, problems.join("; "))
    }
}

/// Outcome of the RSA parameter checks: hard findings plus an optional
/// informational note.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RsaFindings {
    pub findings: Vec<String>,
    pub note: Option<String>,
}

/// Check RSA parameters against the configured floors. Non-RSA keys
/// produce no findings, only a note.
pub fn check_rsa_parameters(key: &PublicKeyInfo, config: &CatalogConfig) -> RsaFindings {
    if !key.is_rsa() {
        return RsaFindings {
            findings: Vec::new(),
            note: Some(format!(
                "non-RSA key algorithm {}; RSA parameter checks not applicable",
                key.algorithm
            )),
        };
    }
    let Some(rsa) = &key.rsa else {
        return RsaFindings {
            findings: vec!["RSA public key could not be parsed".to_string()],
            note: None,
        };
    };
    let mut findings = Vec::new();
    let mut note = None;
    if rsa.modulus_bits < config.min_modulus_bits {
        findings.push(format!("modulus {} < {}", rsa.modulus_bits, config.min_modulus_bits));
    } else if rsa.modulus_bits < config.recommended_modulus_bits {
        note = Some(format!(
            "modulus {} below recommended {}",
            rsa.modulus_bits, config.recommended_modulus_bits
        ));
    }
    let exponent = &rsa.exponent;
    if exponent % 2u32 == BigUint::from(0u32) {
        findings.push(format!("exponent {exponent} is even"));
    }
    if exponent < &BigUint::from(config.min_exponent) {
        findings.push(format!("exponent {exponent} < {}", config.min_exponent));
    }
    RsaFindings { findings, note }
}

/// A loaded weak-key blacklist: one 40-character lowercase hex SHA-1 of a
/// DER SubjectPublicKeyInfo per line; '#' comments and blank lines are
/// ignored.
#[derive(Debug, Clone)]
pub struct KeyBlacklist {
    fingerprints: std::collections::HashSet<String>,
    pub source: String,
}

impl KeyBlacklist {
    pub fn load(path: &Path) -> Result<KeyBlacklist, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::BlacklistUnreadable {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<KeyBlacklist, CatalogError> {
        let mut fingerprints = std::collections::HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.len() != 40 || !line.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(CatalogError::BlacklistUnreadable {
                    path: source.to_string(),
                    reason: format!("line {} is not a 40-character hex fingerprint", lineno + 1),
                });
            }
            fingerprints.insert(line.to_ascii_lowercase());
        }
        Ok(KeyBlacklist { fingerprints, source: source.to_string() })
    }

    pub fn len(&self) -> usize {
        self.fingerprints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fingerprints.is_empty()
    }
}

/// Exact-match membership of a fingerprint in the blacklist.
pub fn check_blacklist(fingerprint: &str, blacklist: &KeyBlacklist) -> bool {
    blacklist.fingerprints.contains(fingerprint)
}

/// Implementation status of a known provision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProvisionStatus {
    Implemented,
    /// Needs the whole corpus, not a single certificate.
    NeedsCorpus,
    /// Needs network access.
    NeedsOnline,
    /// Needs human judgement.
    NeedsManual,
}

#[derive(Debug, Clone)]
pub struct ProvisionEntry {
    pub id: &'static str,
    pub status: ProvisionStatus,
    pub note: &'static str,
}

/// The shipped suites per certificate class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteKind {
    Ca,
    Host,
    Person,
    Robot,
    Rat,
    Crl,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 6] = [
        SuiteKind::Ca,
        SuiteKind::Host,
        SuiteKind::Person,
        SuiteKind::Robot,
        SuiteKind::Rat,
        SuiteKind::Crl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Ca => "ca",
            SuiteKind::Host => "host",
            SuiteKind::Person => "person",
            SuiteKind::Robot => "robot",
            SuiteKind::Rat => "rat",
            SuiteKind::Crl => "crl",
        }
    }

    pub fn parse(s: &str) -> Option<SuiteKind> {
        match s.to_ascii_lowercase().as_str() {
            "ca" => Some(SuiteKind::Ca),
            "host" => Some(SuiteKind::Host),
            "person" => Some(SuiteKind::Person),
            "robot" => Some(SuiteKind::Robot),
            "rat" => Some(SuiteKind::Rat),
            "crl" => Some(SuiteKind::Crl),
            _ => None,
        }
    }

    /// True when the suite runs over certificates (rather than CRLs).
    pub fn takes_certificates(self) -> bool {
        self != SuiteKind::Crl
    }
}

impl std::fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// All suites, corpus rules and the provision ledger.
#[derive(Debug)]
pub struct RuleCatalog {
    pub ca_suite: Suite,
    pub host_suite: Suite,
    pub person_suite: Suite,
    pub robot_suite: Suite,
    pub rat_suite: Suite,
    pub crl_suite: Suite,
    pub corpus_rules: Vec<CorpusRule>,
    pub provision_ledger: Vec<ProvisionEntry>,
    pub blacklist: Option<Arc<KeyBlacklist>>,
}

impl RuleCatalog {
    pub fn suite(&self, kind: SuiteKind) -> &Suite {
        match kind {
            SuiteKind::Ca => &self.ca_suite,
            SuiteKind::Host => &self.host_suite,
            SuiteKind::Person => &self.person_suite,
            SuiteKind::Robot => &self.robot_suite,
            SuiteKind::Rat => &self.rat_suite,
            SuiteKind::Crl => &self.crl_suite,
        }
    }

    /// Every distinct rule in the catalog, id-deduplicated, paired with
    /// the suite that owns it (first suite that lists it).
    pub fn rules_with_owner(&self) -> Vec<(SuiteKind, Arc<Rule>)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for kind in SuiteKind::ALL {
            for rule in &self.suite(kind).rules {
                if seen.insert(rule.id) {
                    out.push((kind, rule.clone()));
                }
            }
        }
        out
    }
}

fn md5_name_check(sig_alg_name: &str) -> bool {
    sig_alg_name.to_ascii_lowercase().contains("md5")
}

fn compile_pattern(pattern: &str) -> Result<Regex, CatalogError> {
    Regex::new(pattern).map_err(|e| CatalogError::BadPattern {
        pattern: pattern.to_string(),
        reason: e.to_string(),
    })
}

fn host_cn_ok(value: &str, fqdn: &Regex) -> bool {
    match value.split_once('/') {
        Some((service, host)) => !service.is_empty() && fqdn.is_match(host),
        None => fqdn.is_match(value),
    }
}

fn is_ns_extension(oid: &crate::der::Oid) -> bool {
    oid.arcs().starts_with(&[2, 16, 840, 1, 113_730, 1])
}

fn key_usage_of(cert: &Certificate) -> Option<KeyUsage> {
    cert.extension("keyUsage").and_then(|e| match &e.parsed {
        Some(ParsedExtension::KeyUsage(ku)) => Some(*ku),
        _ => None,
    })
}

fn name_policy_outcome(cert: &Certificate, policy: &EncodingPolicy, scope: NameScope) -> CheckOutcome {
    let mut findings = Vec::new();
    if scope == NameScope::IssuerAndSubject {
        findings.extend(
            check_name_encoding(&cert.issuer, policy).into_iter().map(|f| format!("issuer: {f}")),
        );
    }
    findings.extend(
        check_name_encoding(&cert.subject, policy).into_iter().map(|f| format!("subject: {f}")),
    );
    if cert.subject.query_oid(&oids::common_name()).is_empty() {
        findings.push("subject: no CN component".to_string());
    }
    if findings.is_empty() {
        CheckOutcome::pass("name encodings and components conform")
    } else {
        CheckOutcome::fail(findings.join("; "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NameScope {
    IssuerAndSubject,
    SubjectOnly,
}

/// Build the full catalog from a configuration.
pub fn build_catalog(config: &CatalogConfig) -> Result<RuleCatalog, CatalogError> {
    config.validate()?;
    let robot_pattern = Arc::new(compile_pattern(&config.robot_cn_pattern)?);
    let fqdn_pattern = Arc::new(compile_pattern(&config.host_fqdn_pattern)?);
    let blacklist = match &config.blacklist_path {
        Some(path) => Some(Arc::new(KeyBlacklist::load(path)?)),
        None => None,
    };
    let policy = Arc::new(EncodingPolicy::default());
    let config = Arc::new(config.clone());

    // Rules shared by every certificate class.
    let version = Rule::cert(
        "GCP-2.1",
        "GCP 2.1",
        Rfc2119Level::Must,
        AppliesTo::Any,
        "certificate version must be 2 (X.509 v3)",
        |cert| {
            if cert.version == 2 {
                CheckOutcome::pass("version 2")
            } else {
                CheckOutcome::fail(format!("expected 2, got {}", cert.version))
            }
        },
    );
    let serial_nonzero = Rule::cert(
        "EXTRA-SERIAL",
        "extra (beyond the profile)",
        Rfc2119Level::ShouldNot,
        AppliesTo::Any,
        "serial number must not be zero",
        |cert| {
            if cert.serial == num_bigint::BigInt::from(0) {
                CheckOutcome::fail("serial number is zero".to_string())
            } else {
                CheckOutcome::pass(format!("serial {}", cert.serial))
            }
        },
    );

    // CA-only rules.
    let ca_digest = Rule::cert(
        "GCP-2.2",
        "GCP 2.2",
        Rfc2119Level::MustNot,
        AppliesTo::Ca,
        "CA signature digest must not be MD5",
        |cert| {
            if md5_name_check(&cert.sig_alg_name) {
                CheckOutcome::fail(format!("signature algorithm is {}", cert.sig_alg_name))
            } else {
                CheckOutcome::pass(format!("signature algorithm is {}", cert.sig_alg_name))
            }
        },
    );
    let ca_names = {
        let policy = policy.clone();
        Rule::cert(
            "GCP-2.3",
            "GCP 2.3",
            Rfc2119Level::Should,
            AppliesTo::Ca,
            "CA issuer and subject names use conforming encodings and components",
            move |cert| name_policy_outcome(cert, &policy, NameScope::IssuerAndSubject),
        )
    };
    let ca_basic_constraints = Rule::cert(
        "GCP-2.4.1",
        "GCP 2.4.1",
        Rfc2119Level::Should,
        AppliesTo::Ca,
        "basicConstraints must be present, critical and CA-appropriate",
        |cert| {
            let Some(ext) = cert.extension("basicConstraints") else {
                return CheckOutcome::fail("basicConstraints extension missing");
            };
            let mut problems = Vec::new();
            if !ext.critical {
                problems.push("basicConstraints is not marked critical".to_string());
            }
            match &ext.parsed {
                Some(ParsedExtension::BasicConstraints { ca: true, .. }) => {}
                Some(ParsedExtension::BasicConstraints { ca: false, .. }) => {
                    problems.push(
                        "basicConstraints CA flag is false, not appropriate for a CA certificate"
                            .to_string(),
                    );
                }
                _ => problems.push("basicConstraints payload unreadable".to_string()),
            }
            if problems.is_empty() {
                CheckOutcome::pass("basicConstraints critical with CA flag set")
            } else {
                CheckOutcome::fail(problems.join("; "))
            }
        },
    );
    let ca_ns_extensions = Rule::cert(
        "GCP-2.4.4",
        "GCP 2.4.4",
        Rfc2119Level::ShouldNot,
        AppliesTo::Ca,
        "deprecated ns* extensions must not be present in new CA certificates",
        |cert| {
            let ns_names: Vec<&str> = cert
                .extensions
                .iter()
                .filter(|e| is_ns_extension(&e.oid))
                .map(|e| e.name.as_str())
                .collect();
            if ns_names.is_empty() {
                return CheckOutcome::pass("no ns* extensions");
            }
            let mut detail = format!("deprecated ns* extension(s) present: {}", ns_names.join(", "));
            if cert.extension("nsCertType").is_some() {
                let (consistent, explanation) = check_nscerttype_consistency(cert);
                if consistent {
                    detail.push_str(&format!("; {explanation}"));
                } else {
                    detail.push_str(&format!("; nsCertType inconsistent with keyUsage: {explanation}"));
                }
            }
            CheckOutcome::fail(detail)
        },
    );

    // Rules shared by all end-entity classes.
    let ee_names = {
        let policy = policy.clone();
        Rule::cert(
            "GCP-3.2",
            "GCP 3.2",
            Rfc2119Level::Should,
            AppliesTo::AnyEndEntity,
            "end-entity subject name uses conforming encodings and components",
            move |cert| name_policy_outcome(cert, &policy, NameScope::SubjectOnly),
        )
    };
    let ee_key_usage = Rule::cert(
        "GCP-3.3.1",
        "GCP 3.3",
        Rfc2119Level::Should,
        AppliesTo::AnyEndEntity,
        "keyUsage must be present and marked critical",
        |cert| {
            let Some(ext) = cert.extension("keyUsage") else {
                return CheckOutcome::fail("keyUsage extension missing");
            };
            if !ext.critical {
                return CheckOutcome::fail("keyUsage is not marked critical");
            }
            match key_usage_of(cert) {
                Some(ku) => CheckOutcome::pass(format!("keyUsage critical: {}", ku.bit_names().join(", "))),
                None => CheckOutcome::fail("keyUsage payload unreadable"),
            }
        },
    );
    let ee_no_ca_usage = Rule::cert(
        "GCP-3.3.2",
        "GCP 3.3",
        Rfc2119Level::MustNot,
        AppliesTo::AnyEndEntity,
        "end-entity keyUsage must not assert certificate or CRL signing",
        |cert| match key_usage_of(cert) {
            Some(ku) => {
                let offending: Vec<&str> = [
                    (KeyUsage::KEY_CERT_SIGN, "keyCertSign"),
                    (KeyUsage::CRL_SIGN, "cRLSign"),
                ]
                .iter()
                .filter(|(bit, _)| ku.asserts(*bit))
                .map(|(_, name)| *name)
                .collect();
                if offending.is_empty() {
                    CheckOutcome::pass("no CA-only keyUsage bits")
                } else {
                    CheckOutcome::fail(format!("keyUsage asserts {}", offending.join(", ")))
                }
            }
            None => CheckOutcome::pass("keyUsage absent, nothing asserted"),
        },
    );

    // Host-only rules (reconstructed; the profile text itself names four
    // host-specific provisions without reproducing them).
    let host_cn_single = Rule::cert(
        "HOST-CN-SINGLE",
        "extra (host-specific)",
        Rfc2119Level::Must,
        AppliesTo::Host,
        "host subject contains exactly one CN",
        |cert| {
            let count = cert.subject.query_oid(&oids::common_name()).len();
            if count == 1 {
                CheckOutcome::pass("one CN element")
            } else {
                CheckOutcome::fail(format!("found {count} CN elements, expected 1"))
            }
        },
    );
    let host_cn_fqdn = {
        let fqdn = fqdn_pattern.clone();
        Rule::cert(
            "HOST-CN-FQDN",
            "extra (host-specific)",
            Rfc2119Level::Must,
            AppliesTo::Host,
            "host CN is a fully-qualified domain name (optionally service/FQDN)",
            move |cert| {
                let bad: Vec<String> = cert
                    .subject
                    .query_oid(&oids::common_name())
                    .iter()
                    .filter(|e| !host_cn_ok(&e.value, &fqdn))
                    .map(|e| e.value.clone())
                    .collect();
                if bad.is_empty() {
                    CheckOutcome::pass("CN values are FQDN-shaped")
                } else {
                    CheckOutcome::fail(format!("CN not a FQDN: {}", bad.join(", ")))
                }
            },
        )
    };
    let host_san = Rule::cert(
        "HOST-SAN-DNS",
        "extra (host-specific)",
        Rfc2119Level::Should,
        AppliesTo::Host,
        "host certificate carries a subjectAltName with a dNSName",
        |cert| {
            let Some(ext) = cert.extension("subjectAltName") else {
                return CheckOutcome::fail("subjectAltName extension missing");
            };
            match &ext.parsed {
                Some(ParsedExtension::SubjectAltName(names)) => {
                    if names.iter().any(|n| matches!(n, crate::x509::GeneralName::Dns(_))) {
                        CheckOutcome::pass("subjectAltName has a dNSName")
                    } else {
                        CheckOutcome::fail("subjectAltName has no dNSName entries")
                    }
                }
                _ => CheckOutcome::fail("subjectAltName payload unreadable"),
            }
        },
    );
    let host_eku = Rule::cert(
        "HOST-EKU-SERVERAUTH",
        "extra (host-specific)",
        Rfc2119Level::Should,
        AppliesTo::Host,
        "host extendedKeyUsage includes serverAuth",
        |cert| {
            let Some(ext) = cert.extension("extendedKeyUsage") else {
                return CheckOutcome::fail("extendedKeyUsage extension missing");
            };
            match &ext.parsed {
                Some(ParsedExtension::ExtendedKeyUsage(purposes)) => {
                    if purposes.contains(&oids::eku_server_auth()) {
                        CheckOutcome::pass("extendedKeyUsage includes serverAuth")
                    } else {
                        CheckOutcome::fail("extendedKeyUsage lacks serverAuth")
                    }
                }
                _ => CheckOutcome::fail("extendedKeyUsage payload unreadable"),
            }
        },
    );

    let robot_cn = {
        let pattern = robot_pattern.clone();
        let pattern_text = config.robot_cn_pattern.clone();
        Rule::cert(
            "ROBOT-CN",
            "extra (robot identification)",
            Rfc2119Level::Must,
            AppliesTo::Robot,
            "robot subject CN matches the configured robot pattern",
            move |cert| {
                let cns = cert.subject.query_oid(&oids::common_name());
                if cns.iter().any(|e| pattern.is_match(&e.value)) {
                    CheckOutcome::pass("CN matches robot pattern")
                } else {
                    CheckOutcome::fail(format!("no CN matches pattern {pattern_text:?}"))
                }
            },
        )
    };

    // Vulnerability suite.
    let rat_md5 = Rule::cert(
        "RAT-MD5",
        "vulnerability: weak digest",
        Rfc2119Level::MustNot,
        AppliesTo::Any,
        "certificate must not be signed with the MD5 digest",
        |cert| {
            if md5_name_check(&cert.sig_alg_name) {
                CheckOutcome::fail(format!("signature algorithm is {}", cert.sig_alg_name))
            } else {
                CheckOutcome::pass(format!("signature algorithm is {}", cert.sig_alg_name))
            }
        },
    );
    let rat_rsa = {
        let config = config.clone();
        Rule::cert(
            "RAT-RSA",
            "vulnerability: weak RSA parameters",
            Rfc2119Level::Must,
            AppliesTo::Any,
            "RSA parameters meet the configured floors",
            move |cert| {
                let result = check_rsa_parameters(&cert.public_key, &config);
                if let Some(note) = &result.note {
                    if result.findings.is_empty() && !cert.public_key.is_rsa() {
                        return CheckOutcome::informational(note.clone());
                    }
                }
                if result.findings.is_empty() {
                    let mut detail = "RSA parameters acceptable".to_string();
                    if let Some(note) = result.note {
                        detail.push_str(&format!(" ({note})"));
                    }
                    CheckOutcome::pass(detail)
                } else {
                    CheckOutcome::fail(result.findings.join("; "))
                }
            },
        )
    };
    let rat_debian = {
        let blacklist = blacklist.clone();
        Rule::cert(
            "RAT-DEBIAN",
            "vulnerability: known-weak keys",
            Rfc2119Level::MustNot,
            AppliesTo::Any,
            "subject public key is not in the weak-key blacklist",
            move |cert| match &blacklist {
                None => CheckOutcome::informational(
                    "skipped: no weak-key blacklist configured".to_string(),
                ),
                Some(list) => {
                    let fingerprint = cert.spki_fingerprint();
                    if check_blacklist(&fingerprint, list) {
                        CheckOutcome::fail(format!(
                            "key fingerprint {fingerprint} is in the weak-key blacklist"
                        ))
                    } else {
                        CheckOutcome::pass(format!("key fingerprint {fingerprint} not listed"))
                    }
                }
            },
        )
    };

    let crl_md5 = Rule::crl(
        "CRL-MD5",
        "vulnerability: weak digest",
        Rfc2119Level::MustNot,
        "CRL must not be signed with the MD5 digest",
        |crl| {
            if md5_name_check(&crl.sig_alg_name) {
                CheckOutcome::fail(format!("signature algorithm is {}", crl.sig_alg_name))
            } else {
                CheckOutcome::pass(format!("signature algorithm is {}", crl.sig_alg_name))
            }
        },
    );

    let ca_suite = Suite::new(
        "ca",
        vec![
            version.clone(),
            ca_digest,
            ca_names,
            ca_basic_constraints,
            ca_ns_extensions,
            serial_nonzero.clone(),
        ],
    );
    let ee_common = vec![
        version.clone(),
        serial_nonzero.clone(),
        ee_names.clone(),
        ee_key_usage.clone(),
        ee_no_ca_usage.clone(),
    ];
    let mut host_rules = ee_common.clone();
    host_rules.extend([host_cn_single, host_cn_fqdn, host_san, host_eku]);
    let host_suite = Suite::new("host", host_rules);
    let person_suite = Suite::new("person", ee_common.clone());
    let mut robot_rules = ee_common;
    robot_rules.push(robot_cn);
    let robot_suite = Suite::new("robot", robot_rules);
    let rat_suite = Suite::new("rat", vec![rat_md5, rat_rsa, rat_debian]);
    let crl_suite = Suite::new("crl", vec![crl_md5]);

    let corpus_rules = vec![
        CorpusRule {
            id: "CORPUS-SERIAL-UNIQ",
            provision: "extra (corpus-level)",
            level: Rfc2119Level::Must,
            message: "serial numbers are unique per issuer",
            check: Box::new(serial_uniqueness),
        },
        CorpusRule {
            id: "CORPUS-SUBJECT-UNIQ",
            provision: "extra (corpus-level)",
            level: Rfc2119Level::Should,
            message: "subject names are unique across the corpus",
            check: Box::new(subject_uniqueness),
        },
    ];

    let provision_ledger = vec![
        ProvisionEntry { id: "GCP-2.1", status: ProvisionStatus::Implemented, note: "version check" },
        ProvisionEntry { id: "GCP-2.2", status: ProvisionStatus::Implemented, note: "CA digest check" },
        ProvisionEntry { id: "GCP-2.3", status: ProvisionStatus::Implemented, note: "CA name policy" },
        ProvisionEntry {
            id: "GCP-2.4.1",
            status: ProvisionStatus::Implemented,
            note: "basicConstraints criticality",
        },
        ProvisionEntry {
            id: "GCP-2.4.4",
            status: ProvisionStatus::Implemented,
            note: "deprecated ns* extensions",
        },
        ProvisionEntry { id: "GCP-3.2", status: ProvisionStatus::Implemented, note: "end-entity name policy" },
        ProvisionEntry {
            id: "GCP-3.3.1",
            status: ProvisionStatus::Implemented,
            note: "keyUsage presence and criticality",
        },
        ProvisionEntry {
            id: "GCP-3.3.2",
            status: ProvisionStatus::Implemented,
            note: "no CA key usage in end entities",
        },
        ProvisionEntry { id: "EXTRA-SERIAL", status: ProvisionStatus::Implemented, note: "nonzero serial" },
        ProvisionEntry { id: "HOST-CN-SINGLE", status: ProvisionStatus::Implemented, note: "host-only, reconstructed" },
        ProvisionEntry { id: "HOST-CN-FQDN", status: ProvisionStatus::Implemented, note: "host-only, reconstructed" },
        ProvisionEntry { id: "HOST-SAN-DNS", status: ProvisionStatus::Implemented, note: "host-only, reconstructed" },
        ProvisionEntry {
            id: "HOST-EKU-SERVERAUTH",
            status: ProvisionStatus::Implemented,
            note: "host-only, reconstructed",
        },
        ProvisionEntry { id: "ROBOT-CN", status: ProvisionStatus::Implemented, note: "robot identification" },
        ProvisionEntry { id: "RAT-MD5", status: ProvisionStatus::Implemented, note: "weak digest" },
        ProvisionEntry { id: "RAT-RSA", status: ProvisionStatus::Implemented, note: "weak RSA parameters" },
        ProvisionEntry { id: "RAT-DEBIAN", status: ProvisionStatus::Implemented, note: "weak-key blacklist" },
        ProvisionEntry { id: "CRL-MD5", status: ProvisionStatus::Implemented, note: "CRL weak digest" },
        ProvisionEntry {
            id: "CORPUS-SERIAL-UNIQ",
            status: ProvisionStatus::Implemented,
            note: "serial uniqueness per issuer",
        },
        ProvisionEntry {
            id: "CORPUS-SUBJECT-UNIQ",
            status: ProvisionStatus::Implemented,
            note: "subject uniqueness",
        },
        ProvisionEntry {
            id: "EXTRA-SKI-UNIQ",
            status: ProvisionStatus::NeedsCorpus,
            note: "subjectKeyIdentifier uniqueness needs the full issued set",
        },
        ProvisionEntry {
            id: "EXTRA-AKI-CHAIN",
            status: ProvisionStatus::NeedsCorpus,
            note: "authorityKeyIdentifier cross-references need the full issued set",
        },
        ProvisionEntry {
            id: "EXTRA-CDP-FETCH",
            status: ProvisionStatus::NeedsOnline,
            note: "verifying cRLDistributionPoint URIs serve DER CRLs needs network access",
        },
        ProvisionEntry {
            id: "GCP-3.3.13",
            status: ProvisionStatus::NeedsManual,
            note: "OCSP service quality needs human investigation",
        },
        ProvisionEntry {
            id: "EXTRA-CPS-CONSISTENCY",
            status: ProvisionStatus::NeedsManual,
            note: "certificate/practice-statement consistency is a document review",
        },
        ProvisionEntry {
            id: "EXTRA-ISSUANCE-JUDGEMENT",
            status: ProvisionStatus::NeedsManual,
            note: "issuing-practice appropriateness is a value judgement",
        },
    ];

    Ok(RuleCatalog {
        ca_suite,
        host_suite,
        person_suite,
        robot_suite,
        rat_suite,
        crl_suite,
        corpus_rules,
        provision_ledger,
        blacklist,
    })
}

fn collision_violations<K: std::hash::Hash + Eq>(
    entries: &[CorpusEntry],
    key_of: impl Fn(&CorpusEntry) -> K,
    describe: impl Fn(&CorpusEntry, &[usize]) -> String,
) -> Vec<CorpusViolation> {
    let mut groups: HashMap<K, Vec<usize>> = HashMap::new();
    for (index, entry) in entries.iter().enumerate() {
        groups.entry(key_of(entry)).or_default().push(index);
    }
    let mut violations = Vec::new();
    for indices in groups.values() {
        if indices.len() < 2 {
            continue;
        }
        for &index in indices {
            let others: Vec<usize> = indices.iter().copied().filter(|&i| i != index).collect();
            violations.push(CorpusViolation {
                index,
                detail: describe(&entries[index], &others),
            });
        }
    }
    violations
}

fn serial_uniqueness(entries: &[CorpusEntry]) -> Vec<CorpusViolation> {
    collision_violations(
        entries,
        |e| (e.cert.issuer.canonical.clone(), e.cert.serial.to_string()),
        |entry, others| {
            let names: Vec<&str> = others.iter().map(|&i| entries_name(entries, i)).collect();
            format!(
                "serial {} under issuer {:?} also used by: {}",
                entry.cert.serial,
                entry.cert.issuer.canonical,
                names.join(", ")
            )
        },
    )
}

fn subject_uniqueness(entries: &[CorpusEntry]) -> Vec<CorpusViolation> {
    collision_violations(
        entries,
        |e| e.cert.subject.canonical.clone(),
        |entry, others| {
            let names: Vec<&str> = others.iter().map(|&i| entries_name(entries, i)).collect();
            format!("subject {:?} also used by: {}", entry.cert.subject.canonical, names.join(", "))
        },
    )
}

fn entries_name<'a>(entries: &[CorpusEntry<'a>], index: usize) -> &'a str {
    entries[index].id
}
