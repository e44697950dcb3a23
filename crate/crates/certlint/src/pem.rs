//! PEM decoding: BEGIN/END armored base64 blocks.

use base64::Engine;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PemError {
    #[error("PEM block opened as {begin:?} but closed as {end:?}")]
    MismatchedMarkers { begin: String, end: String },
    #[error("invalid base64 in {label:?} block: {reason}")]
    BadBase64 { label: String, reason: String },
    #[error("PEM block {0:?} has no END marker")]
    UnclosedBlock(String),
}

/// One decoded PEM block: its label ("CERTIFICATE", "X509 CRL", ...) and
/// the decoded DER bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PemBlock {
    pub label: String,
    pub der: Vec<u8>,
}

fn marker_label<'a>(line: &'a str, prefix: &str) -> Option<&'a str> {
    line.strip_prefix(prefix)?.strip_suffix("-----")
}

/// Decode every PEM block in `text`, in order. Text outside blocks is
/// ignored; whitespace inside the base64 body is tolerated at any line
/// width. Empty input yields an empty list.
pub fn decode_pem(text: &str) -> Result<Vec<PemBlock>, PemError> {
    let mut blocks = Vec::new();
    let mut current: Option<(String, String)> = None;
    for raw_line in text.lines() {
        let line = raw_line.trim();
        match &mut current {
            None => {
                if let Some(label) = marker_label(line, "-----BEGIN ") {
                    current = Some((label.to_string(), String::new()));
                }
            }
            Some((label, body)) => {
                if let Some(end_label) = marker_label(line, "-----END ") {
                    if end_label != label {
                        return Err(PemError::MismatchedMarkers {
                            begin: label.clone(),
                            end: end_label.to_string(),
                        });
                    }
                    let compact: String = body.split_whitespace().collect();
                    let der = base64::engine::general_purpose::STANDARD
                        .decode(compact.as_bytes())
                        .map_err(|e| PemError::BadBase64 {
                            label: label.clone(),
                            reason: e.to_string(),
                        })?;
                    blocks.push(PemBlock { label: label.clone(), der });
                    current = None;
                } else {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
    }
    if let Some((label, _)) = current {
        return Err(PemError::UnclosedBlock(label));
    }
    Ok(blocks)
}

/// Wrap DER bytes in a PEM block with 64-character body lines.
pub fn encode_pem(label: &str, der: &[u8]) -> String {
    let body = base64::engine::general_purpose::STANDARD.encode(der);
    let mut out = format!("-----BEGIN {label}-----\n");
    for chunk in body.as_bytes().chunks(64) {
        out.push_str(std::str::from_utf8(chunk).expect("base64 is ASCII"));
        out.push('\n');
    }
    out.push_str(&format!("-----END {label}-----\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_single_certificate_block() {
        let text = "-----BEGIN CERTIFICATE-----\nAgEA\n-----END CERTIFICATE-----\n";
        let blocks = decode_pem(text).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].label, "CERTIFICATE");
        assert_eq!(blocks[0].der, vec![0x02, 0x01, 0x00]);
    }

    #[test]
    fn empty_input_yields_empty_list() {
        assert_eq!(decode_pem("").unwrap(), vec![]);
        assert_eq!(decode_pem("no markers here\n").unwrap(), vec![]);
    }

    #[test]
    fn rejects_mismatched_markers() {
        let text = "-----BEGIN CERTIFICATE-----\nAgEA\n-----END CRL-----\n";
        assert_eq!(
            decode_pem(text).unwrap_err(),
            PemError::MismatchedMarkers { begin: "CERTIFICATE".into(), end: "CRL".into() }
        );
    }

    #[test]
    fn rejects_bad_base64() {
        let text = "-----BEGIN CERTIFICATE-----\n!!!!\n-----END CERTIFICATE-----\n";
        assert!(matches!(decode_pem(text).unwrap_err(), PemError::BadBase64 { .. }));
    }

    #[test]
    fn rejects_unclosed_block() {
        let text = "-----BEGIN CERTIFICATE-----\nAgEA\n";
        assert_eq!(decode_pem(text).unwrap_err(), PemError::UnclosedBlock("CERTIFICATE".into()));
    }

    #[test]
    fn tolerates_odd_line_widths_and_surrounding_noise() {
        let text = "garbage before\n-----BEGIN X509 CRL-----\nAg\n  EA  \n-----END X509 CRL-----\ntrailing\n";
        let blocks = decode_pem(text).unwrap();
        assert_eq!(blocks[0].label, "X509 CRL");
        assert_eq!(blocks[0].der, vec![0x02, 0x01, 0x00]);
    }

    #[test]
    fn multiple_blocks_keep_order() {
        let text = format!(
            "{}{}",
            encode_pem("CERTIFICATE", &[0x02, 0x01, 0x01]),
            encode_pem("X509 CRL", &[0x02, 0x01, 0x02])
        );
        let blocks = decode_pem(&text).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].label, "CERTIFICATE");
        assert_eq!(blocks[1].label, "X509 CRL");
        assert_eq!(blocks[1].der, vec![0x02, 0x01, 0x02]);
    }
}
