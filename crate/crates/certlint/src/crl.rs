//! Certificate revocation list model.

use crate::der::{self, DerNode, DerTimestamp, Oid, TagClass};
use crate::x509::{algorithm_display_name, DistinguishedName, X509Error};

/// A parsed CRL. Revoked entries are counted, not modeled individually.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crl {
    pub issuer: DistinguishedName,
    pub sig_alg_oid: Oid,
    pub sig_alg_name: String,
    pub this_update: DerTimestamp,
    /// Optional in the encoding.
    pub next_update: Option<DerTimestamp>,
    pub revoked_count: usize,
    pub warnings: Vec<String>,
}

fn is_time_node(node: &DerNode) -> bool {
    node.tag_class == TagClass::Universal
        && (node.tag_number == der::tag::UTC_TIME || node.tag_number == der::tag::GENERALIZED_TIME)
}

/// Parse a DER-encoded CertificateList.
pub fn parse_crl(der_bytes: &[u8]) -> Result<Crl, X509Error> {
    let root = der::parse_der_exact(der_bytes)?;
    let outer =
        root.as_sequence().map_err(|_| X509Error::NotACrl("top level is not a SEQUENCE".into()))?;
    if outer.len() != 3 {
        return Err(X509Error::NotACrl(format!(
            "expected 3 top-level elements, found {}",
            outer.len()
        )));
    }
    let mut warnings = Vec::new();
    let tbs = outer[0]
        .as_sequence()
        .map_err(|_| X509Error::NotACrl("tbsCertList is not a SEQUENCE".into()))?;
    let sig_alg_oid = algorithm_oid(&outer[1], "signatureAlgorithm")?;
    outer[2]
        .as_bit_string()
        .map_err(|_| X509Error::NotACrl("signatureValue is not a BIT STRING".into()))?;

    let mut index = 0usize;
    let mut take = |what: &str| -> Result<&DerNode, X509Error> {
        let node = tbs.get(index).ok_or_else(|| X509Error::NotACrl(format!("missing {what}")))?;
        index += 1;
        Ok(node)
    };

    // version INTEGER is optional; when present it precedes the algorithm.
    let mut first = take("signature algorithm")?;
    if first.is_universal(der::tag::INTEGER) {
        first = take("signature algorithm")?;
    }
    let inner_sig_oid = algorithm_oid(first, "tbs signature")?;
    if inner_sig_oid != sig_alg_oid {
        warnings.push(format!(
            "tbs signature algorithm {inner_sig_oid} differs from outer {sig_alg_oid}"
        ));
    }
    let issuer_node = take("issuer")?;
    if !issuer_node.is_universal(der::tag::SEQUENCE) {
        return Err(X509Error::NotACrl("issuer is not a SEQUENCE".into()));
    }
    let issuer = DistinguishedName::parse(issuer_node, &mut warnings)?;

    let this_update_node = take("thisUpdate")?;
    if !is_time_node(this_update_node) {
        return Err(X509Error::NotACrl("thisUpdate is not a time value".into()));
    }
    let this_update = der::decode_time(this_update_node)?;

    let mut next_update = None;
    let mut revoked_count = 0usize;
    while let Some(node) = tbs.get(index) {
        if is_time_node(node) && next_update.is_none() && revoked_count == 0 {
            next_update = Some(der::decode_time(node)?);
        } else if node.is_universal(der::tag::SEQUENCE) {
            revoked_count = node.children()?.len();
        } else if node.is_context(0) {
            // crlExtensions, not modeled.
        } else {
            warnings.push(format!("unrecognized tbsCertList element (tag {})", node.tag_number));
        }
        index += 1;
    }

    Ok(Crl {
        issuer,
        sig_alg_name: algorithm_display_name(&sig_alg_oid),
        sig_alg_oid,
        this_update,
        next_update,
        revoked_count,
        warnings,
    })
}

fn algorithm_oid(node: &DerNode, what: &str) -> Result<Oid, X509Error> {
    let parts =
        node.as_sequence().map_err(|_| X509Error::NotACrl(format!("{what} is not a SEQUENCE")))?;
    parts
        .first()
        .ok_or_else(|| X509Error::NotACrl(format!("{what} has no algorithm OID")))?
        .as_oid()
        .map_err(|_| X509Error::NotACrl(format!("{what} algorithm is not an OID")))
}
