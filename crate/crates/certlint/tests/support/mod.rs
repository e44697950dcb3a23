//! Shared test utilities: a minimal TAP reader and brute-force oracles.
//! Everything here is deliberately independent of the implementation
//! paths it checks.

#![allow(dead_code)]

use certlint::engine::{CorpusEntry, SubjectRecord};
use certlint::x509::{parse_certificate, Certificate};

/// A TAP document as recovered by the reader.
#[derive(Debug, PartialEq, Eq)]
pub struct TapDocument {
    pub plan: usize,
    /// Pass/fail per test point, in order.
    pub results: Vec<bool>,
    pub diagnostics: Vec<String>,
}

/// Minimal plan-first TAP reader: plan line "1..N", then "ok K" /
/// "not ok K" lines with optional descriptions, '#' lines as diagnostics.
pub fn read_tap(text: &str) -> Result<TapDocument, String> {
    let mut lines = text.lines();
    let plan_line = lines.next().ok_or("empty document")?;
    let plan: usize = plan_line
        .strip_prefix("1..")
        .ok_or_else(|| format!("missing plan line, got {plan_line:?}"))?
        .parse()
        .map_err(|e| format!("bad plan: {e}"))?;
    let mut results = Vec::new();
    let mut diagnostics = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("not ok ") {
            expect_number(rest, results.len() + 1)?;
            results.push(false);
        } else if let Some(rest) = line.strip_prefix("ok ") {
            expect_number(rest, results.len() + 1)?;
            results.push(true);
        } else if let Some(diag) = line.strip_prefix("# ") {
            diagnostics.push(diag.to_string());
        } else if line.starts_with('#') {
            diagnostics.push(line.trim_start_matches('#').trim().to_string());
        } else {
            return Err(format!("unrecognized line {line:?}"));
        }
    }
    if results.len() != plan {
        return Err(format!("plan says {plan}, found {} test points", results.len()));
    }
    Ok(TapDocument { plan, results, diagnostics })
}

fn expect_number(rest: &str, expected: usize) -> Result<(), String> {
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    let n: usize = digits.parse().map_err(|_| format!("missing test number in {rest:?}"))?;
    if n != expected {
        return Err(format!("test number {n} out of sequence, expected {expected}"));
    }
    Ok(())
}

/// O(n^2) uniqueness oracle: certificate i violates serial uniqueness iff
/// some other certificate shares its issuer and serial, and subject
/// uniqueness iff some other certificate shares its subject.
pub fn brute_force_uniqueness(certs: &[(String, Certificate)]) -> (Vec<String>, Vec<String>) {
    let mut serial_violators = Vec::new();
    let mut subject_violators = Vec::new();
    for (i, (id, cert)) in certs.iter().enumerate() {
        let serial_clash = certs.iter().enumerate().any(|(j, (_, other))| {
            j != i
                && other.issuer.canonical == cert.issuer.canonical
                && other.serial == cert.serial
        });
        let subject_clash = certs
            .iter()
            .enumerate()
            .any(|(j, (_, other))| j != i && other.subject.canonical == cert.subject.canonical);
        if serial_clash {
            serial_violators.push(id.clone());
        }
        if subject_clash {
            subject_violators.push(id.clone());
        }
    }
    (serial_violators, subject_violators)
}

/// Parse DER blobs into subject records the way the CLI would.
pub fn cert_subjects(ders: &[(String, Vec<u8>)]) -> Vec<SubjectRecord> {
    ders.iter()
        .map(|(id, der)| match parse_certificate(der) {
            Ok(cert) => SubjectRecord::cert(id.clone(), cert),
            Err(e) => SubjectRecord::unparsed(id.clone(), e.to_string()),
        })
        .collect()
}

/// Parse DER blobs into owned (id, certificate) pairs, panicking on
/// parse failures; corpus tests require clean input.
pub fn parsed_certs(ders: &[(String, Vec<u8>)]) -> Vec<(String, Certificate)> {
    ders.iter()
        .map(|(id, der)| (id.clone(), parse_certificate(der).expect("corpus cert parses")))
        .collect()
}

/// Borrow parsed certificates as corpus entries.
pub fn corpus_entries(certs: &[(String, Certificate)]) -> Vec<CorpusEntry<'_>> {
    certs.iter().map(|(id, cert)| CorpusEntry { id, cert }).collect()
}
