//! Fixed OID-to-name tables.
//!
//! Covers the distinguished-name attribute types, signature algorithms and
//! extensions the rule catalogs need. Anything outside these tables is
//! carried through by its dotted-decimal form.

use crate::der::Oid;

/// Distinguished-name attribute types: (arcs, short name, lookup aliases).
/// Aliases are matched case-insensitively.
const DN_ATTRIBUTES: &[(&[u64], &str, &[&str])] = &[
    (&[2, 5, 4, 3], "CN", &["cn", "commonname"]),
    (&[2, 5, 4, 5], "serialNumber", &["serialnumber"]),
    (&[2, 5, 4, 6], "C", &["c", "countryname", "country"]),
    (&[2, 5, 4, 7], "L", &["l", "localityname", "locality"]),
    (&[2, 5, 4, 8], "ST", &["st", "stateorprovincename", "state"]),
    (&[2, 5, 4, 10], "O", &["o", "organizationname", "organization"]),
    (&[2, 5, 4, 11], "OU", &["ou", "organizationalunitname", "organizationalunit"]),
    (&[0, 9, 2342, 19200300, 100, 1, 25], "DC", &["dc", "domaincomponent"]),
    (&[1, 2, 840, 113549, 1, 9, 1], "emailAddress", &["emailaddress", "email", "e"]),
];

const SIGNATURE_ALGORITHMS: &[(&[u64], &str)] = &[
    (&[1, 2, 840, 113549, 1, 1, 4], "md5WithRSAEncryption"),
    (&[1, 2, 840, 113549, 1, 1, 5], "sha1WithRSAEncryption"),
    (&[1, 2, 840, 113549, 1, 1, 11], "sha256WithRSAEncryption"),
    (&[1, 2, 840, 113549, 1, 1, 12], "sha384WithRSAEncryption"),
    (&[1, 2, 840, 113549, 1, 1, 13], "sha512WithRSAEncryption"),
    (&[1, 2, 840, 10045, 4, 1], "ecdsa-with-SHA1"),
    (&[1, 2, 840, 10045, 4, 3, 2], "ecdsa-with-SHA256"),
    (&[1, 2, 840, 10045, 4, 3, 3], "ecdsa-with-SHA384"),
    (&[1, 2, 840, 10045, 4, 3, 4], "ecdsa-with-SHA512"),
];

const EXTENSIONS: &[(&[u64], &str)] = &[
    (&[2, 5, 29, 14], "subjectKeyIdentifier"),
    (&[2, 5, 29, 15], "keyUsage"),
    (&[2, 5, 29, 17], "subjectAltName"),
    (&[2, 5, 29, 19], "basicConstraints"),
    (&[2, 5, 29, 31], "cRLDistributionPoints"),
    (&[2, 5, 29, 32], "certificatePolicies"),
    (&[2, 5, 29, 35], "authorityKeyIdentifier"),
    (&[2, 5, 29, 37], "extendedKeyUsage"),
    (&[2, 16, 840, 1, 113730, 1, 1], "nsCertType"),
    (&[2, 16, 840, 1, 113730, 1, 13], "nsComment"),
    (&[1, 3, 6, 1, 5, 5, 7, 1, 1], "authorityInfoAccess"),
];

pub fn rsa_encryption() -> Oid {
    Oid::from_arcs(&[1, 2, 840, 113549, 1, 1, 1])
}

pub fn ec_public_key() -> Oid {
    Oid::from_arcs(&[1, 2, 840, 10045, 2, 1])
}

pub fn sha256_with_rsa() -> Oid {
    Oid::from_arcs(&[1, 2, 840, 113549, 1, 1, 11])
}

pub fn md5_with_rsa() -> Oid {
    Oid::from_arcs(&[1, 2, 840, 113549, 1, 1, 4])
}

pub fn common_name() -> Oid {
    Oid::from_arcs(&[2, 5, 4, 3])
}

pub fn domain_component() -> Oid {
    Oid::from_arcs(&[0, 9, 2342, 19200300, 100, 1, 25])
}

pub fn email_address() -> Oid {
    Oid::from_arcs(&[1, 2, 840, 113549, 1, 9, 1])
}

pub fn basic_constraints() -> Oid {
    Oid::from_arcs(&[2, 5, 29, 19])
}

pub fn key_usage() -> Oid {
    Oid::from_arcs(&[2, 5, 29, 15])
}

pub fn extended_key_usage() -> Oid {
    Oid::from_arcs(&[2, 5, 29, 37])
}

pub fn subject_alt_name() -> Oid {
    Oid::from_arcs(&[2, 5, 29, 17])
}

pub fn ns_cert_type() -> Oid {
    Oid::from_arcs(&[2, 16, 840, 1, 113730, 1, 1])
}

pub fn ns_comment() -> Oid {
    Oid::from_arcs(&[2, 16, 840, 1, 113730, 1, 13])
}

pub fn crl_distribution_points() -> Oid {
    Oid::from_arcs(&[2, 5, 29, 31])
}

/// Extended key usage purpose: TLS server authentication.
pub fn eku_server_auth() -> Oid {
    Oid::from_arcs(&[1, 3, 6, 1, 5, 5, 7, 3, 1])
}

/// Extended key usage purpose: TLS client authentication.
pub fn eku_client_auth() -> Oid {
    Oid::from_arcs(&[1, 3, 6, 1, 5, 5, 7, 3, 2])
}

/// Short name for a DN attribute type, or `None` if unknown.
pub fn dn_attribute_name(oid: &Oid) -> Option<&'static str> {
    DN_ATTRIBUTES.iter().find(|(arcs, _, _)| *arcs == oid.arcs()).map(|(_, name, _)| *name)
}

/// Resolve a DN attribute name or alias (case-insensitive) to its OID.
pub fn dn_attribute_oid(name: &str) -> Option<Oid> {
    let lowered = name.to_ascii_lowercase();
    DN_ATTRIBUTES
        .iter()
        .find(|(_, _, aliases)| aliases.contains(&lowered.as_str()))
        .map(|(arcs, _, _)| Oid::from_arcs(arcs))
}

/// Name of a signature algorithm, or `None` if unknown.
pub fn signature_algorithm_name(oid: &Oid) -> Option<&'static str> {
    SIGNATURE_ALGORITHMS.iter().find(|(arcs, _)| *arcs == oid.arcs()).map(|(_, name)| *name)
}

/// Name of an extension, or `None` if unknown.
pub fn extension_name(oid: &Oid) -> Option<&'static str> {
    EXTENSIONS.iter().find(|(arcs, _)| *arcs == oid.arcs()).map(|(_, name)| *name)
}
