//! Typed X.509 certificate model.
//!
//! Certificates are built from strict DER trees and stay loadable even
//! when they bend the rules: structural oddities that do not prevent
//! field extraction are collected as warnings on the certificate instead
//! of aborting the parse, so rule suites can report on broken input.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use sha1::{Digest, Sha1};
use thiserror::Error;

use crate::der::{self, DerError, DerNode, DerTimestamp, Oid};
use crate::oids;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum X509Error {
    #[error("not a certificate: {0}")]
    NotACertificate(String),
    #[error("not a CRL: {0}")]
    NotACrl(String),
    #[error("unknown attribute name {0:?}")]
    UnknownAttributeName(String),
    #[error(transparent)]
    Der(#[from] DerError),
}

/// The DER string type a name element was encoded with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StringEncoding {
    PrintableString,
    Ia5String,
    Utf8String,
    TeletexString,
    BmpString,
    UniversalString,
    /// Any other value tag, kept for reporting.
    Other(u32),
}

impl std::fmt::Display for StringEncoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StringEncoding::PrintableString => write!(f, "printableString"),
            StringEncoding::Ia5String => write!(f, "ia5String"),
            StringEncoding::Utf8String => write!(f, "utf8String"),
            StringEncoding::TeletexString => write!(f, "teletexString"),
            StringEncoding::BmpString => write!(f, "bmpString"),
            StringEncoding::UniversalString => write!(f, "universalString"),
            StringEncoding::Other(tag) => write!(f, "tag{tag}"),
        }
    }
}

/// One attribute-value assertion within a distinguished name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameElement {
    pub attr_type: Oid,
    /// Short attribute name ("CN", "O", ...) or empty if unknown.
    pub attr_name: String,
    pub value: String,
    pub encoding: StringEncoding,
    /// Index of the containing relative distinguished name, in DER order.
    pub rdn_index: usize,
}

/// An ordered distinguished name with a deterministic one-line rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishedName {
    pub elements: Vec<NameElement>,
    pub canonical: String,
}

fn escape_dn_value(value: &str) -> String {
    value.replace('\\', "\\\\").replace(',', "\\,").replace('+', "\\+")
}

impl DistinguishedName {
    /// Parse an RDNSequence node. Oddities are appended to `warnings`.
    pub fn parse(node: &DerNode, warnings: &mut Vec<String>) -> Result<DistinguishedName, X509Error> {
        let rdns = node
            .as_sequence()
            .map_err(|_| X509Error::NotACertificate("name is not a SEQUENCE".into()))?;
        let mut elements = Vec::new();
        for (rdn_index, rdn) in rdns.iter().enumerate() {
            let atvs = rdn
                .as_set()
                .map_err(|_| X509Error::NotACertificate("RDN is not a SET".into()))?;
            if atvs.is_empty() {
                warnings.push(format!("empty relative distinguished name at index {rdn_index}"));
            }
            for atv in atvs {
                let parts = atv.as_sequence().map_err(|_| {
                    X509Error::NotACertificate("attribute-value assertion is not a SEQUENCE".into())
                })?;
                if parts.len() != 2 {
                    return Err(X509Error::NotACertificate(
                        "attribute-value assertion does not have two elements".into(),
                    ));
                }
                let attr_type = parts[0].as_oid()?;
                let (value, encoding) = decode_directory_string(&parts[1], warnings);
                let attr_name =
                    oids::dn_attribute_name(&attr_type).map(str::to_string).unwrap_or_default();
                elements.push(NameElement { attr_type, attr_name, value, encoding, rdn_index });
            }
        }
        let canonical = render_canonical(&elements);
        Ok(DistinguishedName { elements, canonical })
    }

    /// All elements with the given attribute type, in DN order.
    pub fn query_oid(&self, oid: &Oid) -> Vec<&NameElement> {
        self.elements.iter().filter(|e| &e.attr_type == oid).collect()
    }

    /// All elements matching an attribute name ("CN", "commonName") or a
    /// dotted OID string. An empty result doubles as the existence query.
    pub fn query(&self, attr: &str) -> Result<Vec<&NameElement>, X509Error> {
        let oid = if attr.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            Oid::parse_dotted(attr)
                .map_err(|_| X509Error::UnknownAttributeName(attr.to_string()))?
        } else {
            oids::dn_attribute_oid(attr)
                .ok_or_else(|| X509Error::UnknownAttributeName(attr.to_string()))?
        };
        Ok(self.query_oid(&oid))
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl std::fmt::Display for DistinguishedName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical)
    }
}

fn render_canonical(elements: &[NameElement]) -> String {
    let mut out = String::new();
    let mut last_rdn = None;
    for element in elements {
        if last_rdn.is_some() {
            // '+' joins members of one multi-valued RDN.
            out.push_str(if last_rdn == Some(element.rdn_index) { "+" } else { ", " });
        }
        let label = if element.attr_name.is_empty() {
            element.attr_type.to_string()
        } else {
            element.attr_name.clone()
        };
        out.push_str(&label);
        out.push('=');
        out.push_str(&escape_dn_value(&element.value));
        last_rdn = Some(element.rdn_index);
    }
    out
}

fn decode_directory_string(node: &DerNode, warnings: &mut Vec<String>) -> (String, StringEncoding) {
    use der::tag;
    let bytes = match node.primitive_content() {
        Ok(b) => b,
        Err(_) => {
            warnings.push("constructed string value in name element".to_string());
            return (String::new(), StringEncoding::Other(node.tag_number));
        }
    };
    let decode_utf8 = |bytes: &[u8], warnings: &mut Vec<String>| match std::str::from_utf8(bytes) {
        Ok(s) => s.to_string(),
        Err(_) => {
            warnings.push("name element is not valid UTF-8; decoded lossily".to_string());
            String::from_utf8_lossy(bytes).into_owned()
        }
    };
    match node.tag_number {
        tag::PRINTABLE_STRING => (decode_utf8(bytes, warnings), StringEncoding::PrintableString),
        tag::IA5_STRING => (decode_utf8(bytes, warnings), StringEncoding::Ia5String),
        tag::UTF8_STRING => (decode_utf8(bytes, warnings), StringEncoding::Utf8String),
        tag::TELETEX_STRING => {
            // Decoded as Latin-1, the common practical interpretation.
            (bytes.iter().map(|&b| b as char).collect(), StringEncoding::TeletexString)
        }
        tag::BMP_STRING => {
            if bytes.len() % 2 != 0 {
                warnings.push("bmpString value has odd byte length".to_string());
            }
            let units: Vec<u16> =
                bytes.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect();
            (String::from_utf16_lossy(&units), StringEncoding::BmpString)
        }
        tag::UNIVERSAL_STRING => {
            if bytes.len() % 4 != 0 {
                warnings.push("universalString value has odd byte length".to_string());
            }
            let value = bytes
                .chunks_exact(4)
                .map(|c| {
                    char::from_u32(u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
                        .unwrap_or(char::REPLACEMENT_CHARACTER)
                })
                .collect();
            (value, StringEncoding::UniversalString)
        }
        other => (decode_utf8(bytes, warnings), StringEncoding::Other(other)),
    }
}

/// Key usage bit flags, in RFC 5280 bit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KeyUsage(pub u16);

impl KeyUsage {
    pub const DIGITAL_SIGNATURE: u16 = 1 << 0;
    pub const NON_REPUDIATION: u16 = 1 << 1;
    pub const KEY_ENCIPHERMENT: u16 = 1 << 2;
    pub const DATA_ENCIPHERMENT: u16 = 1 << 3;
    pub const KEY_AGREEMENT: u16 = 1 << 4;
    pub const KEY_CERT_SIGN: u16 = 1 << 5;
    pub const CRL_SIGN: u16 = 1 << 6;
    pub const ENCIPHER_ONLY: u16 = 1 << 7;
    pub const DECIPHER_ONLY: u16 = 1 << 8;

    pub fn asserts(self, bit: u16) -> bool {
        self.0 & bit != 0
    }

    pub fn bit_names(self) -> Vec<&'static str> {
        const NAMES: [(u16, &str); 9] = [
            (KeyUsage::DIGITAL_SIGNATURE, "digitalSignature"),
            (KeyUsage::NON_REPUDIATION, "nonRepudiation"),
            (KeyUsage::KEY_ENCIPHERMENT, "keyEncipherment"),
            (KeyUsage::DATA_ENCIPHERMENT, "dataEncipherment"),
            (KeyUsage::KEY_AGREEMENT, "keyAgreement"),
            (KeyUsage::KEY_CERT_SIGN, "keyCertSign"),
            (KeyUsage::CRL_SIGN, "cRLSign"),
            (KeyUsage::ENCIPHER_ONLY, "encipherOnly"),
            (KeyUsage::DECIPHER_ONLY, "decipherOnly"),
        ];
        NAMES.iter().filter(|(bit, _)| self.asserts(*bit)).map(|(_, n)| *n).collect()
    }
}

/// nsCertType bit flags, in their original bit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NsCertType(pub u8);

impl NsCertType {
    pub const SSL_CLIENT: u8 = 1 << 0;
    pub const SSL_SERVER: u8 = 1 << 1;
    pub const SMIME: u8 = 1 << 2;
    pub const OBJECT_SIGNING: u8 = 1 << 3;
    pub const SSL_CA: u8 = 1 << 5;
    pub const SMIME_CA: u8 = 1 << 6;
    pub const OBJECT_SIGNING_CA: u8 = 1 << 7;

    pub fn asserts(self, bit: u8) -> bool {
        self.0 & bit != 0
    }

    pub fn bit_names(self) -> Vec<&'static str> {
        const NAMES: [(u8, &str); 7] = [
            (NsCertType::SSL_CLIENT, "sslClient"),
            (NsCertType::SSL_SERVER, "sslServer"),
            (NsCertType::SMIME, "email"),
            (NsCertType::OBJECT_SIGNING, "objectSigning"),
            (NsCertType::SSL_CA, "sslCA"),
            (NsCertType::SMIME_CA, "emailCA"),
            (NsCertType::OBJECT_SIGNING_CA, "objectSigningCA"),
        ];
        NAMES.iter().filter(|(bit, _)| self.asserts(*bit)).map(|(_, n)| *n).collect()
    }
}

/// A subjectAltName entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralName {
    Email(String),
    Dns(String),
    Uri(String),
    Ip(Vec<u8>),
    Other(u32),
}

/// Decoded payload of an extension the model understands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedExtension {
    BasicConstraints { ca: bool, path_len: Option<u64> },
    KeyUsage(KeyUsage),
    ExtendedKeyUsage(Vec<Oid>),
    SubjectAltName(Vec<GeneralName>),
    NsCertType(NsCertType),
}

/// One certificate extension; unknown types carry only their raw bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionEntry {
    pub oid: Oid,
    /// Readable name, or the dotted OID when unknown.
    pub name: String,
    pub critical: bool,
    /// Contents of the extnValue OCTET STRING.
    pub raw_value: Vec<u8>,
    pub parsed: Option<ParsedExtension>,
}

/// RSA key material extracted from the subject public key info.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaComponents {
    pub modulus: BigUint,
    pub exponent: BigUint,
    pub modulus_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKeyInfo {
    pub algorithm: Oid,
    /// Present when the algorithm is rsaEncryption and the key parsed.
    pub rsa: Option<RsaComponents>,
    /// The full DER-encoded SubjectPublicKeyInfo.
    pub spki_der: Vec<u8>,
}

impl PublicKeyInfo {
    pub fn is_rsa(&self) -> bool {
        self.algorithm == oids::rsa_encryption()
    }
}

/// A parsed X.509 certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Raw DER version value: 0 for v1 (field omitted), 2 for v3.
    pub version: i64,
    pub serial: BigInt,
    pub sig_alg_oid: Oid,
    pub sig_alg_name: String,
    pub issuer: DistinguishedName,
    pub subject: DistinguishedName,
    pub not_before: DerTimestamp,
    pub not_after: DerTimestamp,
    pub public_key: PublicKeyInfo,
    pub extensions: Vec<ExtensionEntry>,
    pub raw_der: Vec<u8>,
    /// Structural oddities observed while parsing.
    pub warnings: Vec<String>,
}

impl Certificate {
    /// Extensions keyed by readable name (dotted OID when unknown).
    /// When an OID occurs twice the first occurrence wins; the duplicate
    /// is already recorded as a parse warning.
    pub fn extensions_by_name(&self) -> BTreeMap<&str, &ExtensionEntry> {
        let mut map = BTreeMap::new();
        for ext in &self.extensions {
            map.entry(ext.name.as_str()).or_insert(ext);
        }
        map
    }

    pub fn extension(&self, name: &str) -> Option<&ExtensionEntry> {
        self.extensions.iter().find(|e| e.name == name)
    }

    /// SHA-1 digest of the DER-encoded subject public key info, as 40
    /// lowercase hex characters. Two certificates sharing a key pair share
    /// a fingerprint.
    pub fn spki_fingerprint(&self) -> String {
        spki_fingerprint(&self.public_key.spki_der)
    }
}

/// SHA-1 of the given bytes as lowercase hex.
pub fn spki_fingerprint(spki_der: &[u8]) -> String {
    let digest = Sha1::digest(spki_der);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Display name for a signature or key algorithm: the table name when
/// known, the dotted OID otherwise. Certificates and CRLs share this
/// mapping.
pub fn algorithm_display_name(oid: &Oid) -> String {
    oids::signature_algorithm_name(oid).map(str::to_string).unwrap_or_else(|| oid.to_string())
}

struct FieldCursor<'a> {
    fields: &'a [DerNode],
    index: usize,
}

impl<'a> FieldCursor<'a> {
    fn new(fields: &'a [DerNode]) -> Self {
        FieldCursor { fields, index: 0 }
    }

    fn peek(&self) -> Option<&'a DerNode> {
        self.fields.get(self.index)
    }

    fn next(&mut self, what: &str) -> Result<&'a DerNode, X509Error> {
        let node = self
            .fields
            .get(self.index)
            .ok_or_else(|| X509Error::NotACertificate(format!("missing {what}")))?;
        self.index += 1;
        Ok(node)
    }

    fn remaining(&self) -> usize {
        self.fields.len() - self.index
    }
}

fn parse_algorithm_identifier(node: &DerNode, what: &str) -> Result<Oid, X509Error> {
    let parts = node
        .as_sequence()
        .map_err(|_| X509Error::NotACertificate(format!("{what} is not a SEQUENCE")))?;
    let oid_node = parts
        .first()
        .ok_or_else(|| X509Error::NotACertificate(format!("{what} has no algorithm OID")))?;
    oid_node
        .as_oid()
        .map_err(|_| X509Error::NotACertificate(format!("{what} algorithm is not an OID")))
}

/// Parse a DER-encoded certificate into the typed model.
pub fn parse_certificate(der_bytes: &[u8]) -> Result<Certificate, X509Error> {
    let root = der::parse_der_exact(der_bytes)?;
    let outer = root
        .as_sequence()
        .map_err(|_| X509Error::NotACertificate("top level is not a SEQUENCE".into()))?;
    if outer.len() != 3 {
        return Err(X509Error::NotACertificate(format!(
            "expected 3 top-level elements, found {}",
            outer.len()
        )));
    }
    let mut warnings = Vec::new();
    let tbs = outer[0]
        .as_sequence()
        .map_err(|_| X509Error::NotACertificate("tbsCertificate is not a SEQUENCE".into()))?;
    let sig_alg_oid = parse_algorithm_identifier(&outer[1], "signatureAlgorithm")?;
    outer[2]
        .as_bit_string()
        .map_err(|_| X509Error::NotACertificate("signatureValue is not a BIT STRING".into()))?;

    let mut cursor = FieldCursor::new(tbs);

    // version [0] EXPLICIT INTEGER DEFAULT v1
    let version = match cursor.peek() {
        Some(node) if node.is_context(0) && node.is_constructed() => {
            cursor.next("version")?;
            let inner = node.children()?;
            let value = inner
                .first()
                .ok_or_else(|| X509Error::NotACertificate("empty version wrapper".into()))?
                .as_integer()
                .map_err(|_| X509Error::NotACertificate("version is not an INTEGER".into()))?;
            i64::try_from(&value).unwrap_or_else(|_| {
                warnings.push(format!("version value {value} out of range"));
                -1
            })
        }
        _ => 0,
    };

    let serial_node = cursor.next("serialNumber")?;
    let serial = serial_node
        .as_integer()
        .map_err(|_| X509Error::NotACertificate("serialNumber is not an INTEGER".into()))?;
    if !der::integer_is_minimal(serial_node.primitive_content()?) {
        warnings.push("serialNumber uses a non-minimal INTEGER encoding".to_string());
    }
    if serial.sign() == Sign::Minus {
        warnings.push("serialNumber is negative".to_string());
    }

    let inner_sig_oid = parse_algorithm_identifier(cursor.next("signature")?, "tbs signature")?;
    if inner_sig_oid != sig_alg_oid {
        warnings.push(format!(
            "tbs signature algorithm {inner_sig_oid} differs from outer {sig_alg_oid}"
        ));
    }

    let issuer = DistinguishedName::parse(cursor.next("issuer")?, &mut warnings)?;

    let validity = cursor
        .next("validity")?
        .as_sequence()
        .map_err(|_| X509Error::NotACertificate("validity is not a SEQUENCE".into()))?;
    if validity.len() != 2 {
        return Err(X509Error::NotACertificate("validity does not have two times".into()));
    }
    let not_before = der::decode_time(&validity[0])?;
    let not_after = der::decode_time(&validity[1])?;
    if not_before > not_after {
        warnings.push(format!("validity is inverted: notBefore {not_before} > notAfter {not_after}"));
    }

    let subject = DistinguishedName::parse(cursor.next("subject")?, &mut warnings)?;
    let public_key = parse_spki(cursor.next("subjectPublicKeyInfo")?, &mut warnings)?;

    // issuerUniqueID [1], subjectUniqueID [2] are skipped if present.
    while let Some(node) = cursor.peek() {
        if node.is_context(1) || node.is_context(2) {
            cursor.next("uniqueID")?;
        } else {
            break;
        }
    }

    let mut extensions = Vec::new();
    if let Some(node) = cursor.peek() {
        if node.is_context(3) && node.is_constructed() {
            cursor.next("extensions")?;
            let inner = node.children()?;
            let list = inner
                .first()
                .ok_or_else(|| X509Error::NotACertificate("empty extensions wrapper".into()))?
                .as_sequence()
                .map_err(|_| X509Error::NotACertificate("extensions is not a SEQUENCE".into()))?;
            for ext_node in list {
                extensions.push(parse_extension(ext_node, &mut warnings)?);
            }
            if version != 2 {
                warnings.push(format!(
                    "extensions present but version is {version} (expected 2)"
                ));
            }
        }
    }
    if cursor.remaining() > 0 {
        warnings.push(format!(
            "{} unrecognized trailing element(s) in tbsCertificate",
            cursor.remaining()
        ));
    }

    for (i, ext) in extensions.iter().enumerate() {
        if extensions[..i].iter().any(|e| e.oid == ext.oid) {
            warnings.push(format!("duplicate extension {}", ext.name));
        }
    }

    Ok(Certificate {
        version,
        serial,
        sig_alg_name: algorithm_display_name(&sig_alg_oid),
        sig_alg_oid,
        issuer,
        subject,
        not_before,
        not_after,
        public_key,
        extensions,
        raw_der: der_bytes.to_vec(),
        warnings,
    })
}

fn parse_spki(node: &DerNode, warnings: &mut Vec<String>) -> Result<PublicKeyInfo, X509Error> {
    let parts = node
        .as_sequence()
        .map_err(|_| X509Error::NotACertificate("subjectPublicKeyInfo is not a SEQUENCE".into()))?;
    if parts.len() != 2 {
        return Err(X509Error::NotACertificate("subjectPublicKeyInfo malformed".into()));
    }
    let algorithm = parse_algorithm_identifier(&parts[0], "key algorithm")?;
    let (unused_bits, key_bytes) = parts[1]
        .as_bit_string()
        .map_err(|_| X509Error::NotACertificate("subjectPublicKey is not a BIT STRING".into()))?;
    if unused_bits != 0 {
        warnings.push("subjectPublicKey BIT STRING has unused bits".to_string());
    }
    let rsa = if algorithm == oids::rsa_encryption() {
        match parse_rsa_key(key_bytes) {
            Ok(rsa) => Some(rsa),
            Err(reason) => {
                warnings.push(format!("RSA public key could not be parsed: {reason}"));
                None
            }
        }
    } else {
        None
    };
    Ok(PublicKeyInfo { algorithm, rsa, spki_der: der::encode_der(node) })
}

fn parse_rsa_key(bytes: &[u8]) -> Result<RsaComponents, String> {
    let node = der::parse_der_exact(bytes).map_err(|e| e.to_string())?;
    let parts = node.as_sequence().map_err(|e| e.to_string())?;
    if parts.len() != 2 {
        return Err("RSAPublicKey does not have two INTEGERs".to_string());
    }
    let modulus_int = parts[0].as_integer().map_err(|e| e.to_string())?;
    let exponent_int = parts[1].as_integer().map_err(|e| e.to_string())?;
    let modulus = modulus_int.magnitude().clone();
    let exponent = exponent_int.magnitude().clone();
    let modulus_bits = modulus.bits() as usize;
    Ok(RsaComponents { modulus, exponent, modulus_bits })
}

fn parse_extension(node: &DerNode, warnings: &mut Vec<String>) -> Result<ExtensionEntry, X509Error> {
    let parts = node
        .as_sequence()
        .map_err(|_| X509Error::NotACertificate("extension is not a SEQUENCE".into()))?;
    let mut cursor = FieldCursor::new(parts);
    let oid = cursor
        .next("extension OID")?
        .as_oid()
        .map_err(|_| X509Error::NotACertificate("extension id is not an OID".into()))?;
    let critical = match cursor.peek() {
        Some(n) if n.is_universal(der::tag::BOOLEAN) => {
            let value = n.as_boolean()?;
            cursor.next("critical")?;
            if !value {
                warnings.push(format!(
                    "extension {oid} encodes critical=FALSE explicitly (DER default)"
                ));
            }
            value
        }
        _ => false,
    };
    let raw_value = cursor
        .next("extension value")?
        .as_octet_string()
        .map_err(|_| X509Error::NotACertificate("extension value is not an OCTET STRING".into()))?
        .to_vec();
    let name = oids::extension_name(&oid).map(str::to_string).unwrap_or_else(|| oid.to_string());
    let parsed = parse_known_extension(&oid, &raw_value).unwrap_or_else(|reason| {
        warnings.push(format!("extension {name} payload not understood: {reason}"));
        None
    });
    Ok(ExtensionEntry { oid, name, critical, raw_value, parsed })
}

fn parse_known_extension(oid: &Oid, raw: &[u8]) -> Result<Option<ParsedExtension>, String> {
    let known = oids::extension_name(oid);
    let Some(known) = known else { return Ok(None) };
    let parse_root = || der::parse_der_exact(raw).map_err(|e| e.to_string());
    match known {
        "basicConstraints" => {
            let root = parse_root()?;
            let parts = root.as_sequence().map_err(|e| e.to_string())?;
            let mut cursor = 0usize;
            let mut ca = false;
            if let Some(node) = parts.get(cursor) {
                if node.is_universal(der::tag::BOOLEAN) {
                    ca = node.as_boolean().map_err(|e| e.to_string())?;
                    cursor += 1;
                }
            }
            let mut path_len = None;
            if let Some(node) = parts.get(cursor) {
                let value = node.as_integer().map_err(|e| e.to_string())?;
                path_len = u64::try_from(&value).ok();
            }
            Ok(Some(ParsedExtension::BasicConstraints { ca, path_len }))
        }
        "keyUsage" => {
            let root = parse_root()?;
            let (_unused, bytes) = root.as_bit_string().map_err(|e| e.to_string())?;
            let mut bits: u16 = 0;
            for (byte_index, byte) in bytes.iter().take(2).enumerate() {
                for bit in 0..8 {
                    if byte & (0x80 >> bit) != 0 {
                        bits |= 1 << (byte_index * 8 + bit);
                    }
                }
            }
            Ok(Some(ParsedExtension::KeyUsage(KeyUsage(bits))))
        }
        "extendedKeyUsage" => {
            let root = parse_root()?;
            let parts = root.as_sequence().map_err(|e| e.to_string())?;
            let oids = parts
                .iter()
                .map(|n| n.as_oid().map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Some(ParsedExtension::ExtendedKeyUsage(oids)))
        }
        "subjectAltName" => {
            let root = parse_root()?;
            let parts = root.as_sequence().map_err(|e| e.to_string())?;
            let names = parts
                .iter()
                .map(|n| {
                    let text = || {
                        n.primitive_content()
                            .map(|b| String::from_utf8_lossy(b).into_owned())
                            .map_err(|e| e.to_string())
                    };
                    Ok(match n.tag_number {
                        1 => GeneralName::Email(text()?),
                        2 => GeneralName::Dns(text()?),
                        6 => GeneralName::Uri(text()?),
                        7 => GeneralName::Ip(
                            n.primitive_content().map_err(|e| e.to_string())?.to_vec(),
                        ),
                        other => GeneralName::Other(other),
                    })
                })
                .collect::<Result<Vec<_>, String>>()?;
            Ok(Some(ParsedExtension::SubjectAltName(names)))
        }
        "nsCertType" => {
            let root = parse_root()?;
            let (_unused, bytes) = root.as_bit_string().map_err(|e| e.to_string())?;
            let mut bits: u8 = 0;
            if let Some(byte) = bytes.first() {
                for bit in 0..8 {
                    if byte & (0x80 >> bit) != 0 {
                        bits |= 1 << bit;
                    }
                }
            }
            Ok(Some(ParsedExtension::NsCertType(NsCertType(bits))))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::der::DerNode;

    fn atv(oid: &Oid, value: DerNode) -> DerNode {
        DerNode::set(vec![DerNode::sequence(vec![DerNode::oid(oid), value])])
    }

    fn sample_dn() -> DistinguishedName {
        let name = DerNode::sequence(vec![
            atv(&Oid::from_arcs(&[2, 5, 4, 6]), DerNode::printable_string("IE")),
            atv(&Oid::from_arcs(&[2, 5, 4, 10]), DerNode::printable_string("Grid")),
            atv(&oids::common_name(), DerNode::printable_string("alice")),
        ]);
        let mut warnings = Vec::new();
        let dn = DistinguishedName::parse(&name, &mut warnings).unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
        dn
    }

    #[test]
    fn query_by_name_finds_element() {
        let dn = sample_dn();
        let hits = dn.query("CN").unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].value, "alice");
        assert_eq!(hits[0].encoding, StringEncoding::PrintableString);
        assert_eq!(hits[0].rdn_index, 2);
    }

    #[test]
    fn query_for_absent_attribute_is_empty() {
        let dn = sample_dn();
        assert!(dn.query("emailAddress").unwrap().is_empty());
    }

    #[test]
    fn query_by_oid_equals_query_by_name() {
        let dn = sample_dn();
        for (name, dotted) in [("CN", "2.5.4.3"), ("O", "2.5.4.10"), ("C", "2.5.4.6")] {
            assert_eq!(dn.query(name).unwrap(), dn.query(dotted).unwrap());
        }
    }

    #[test]
    fn unknown_attribute_name_is_an_error() {
        let dn = sample_dn();
        assert!(matches!(
            dn.query("flavor").unwrap_err(),
            X509Error::UnknownAttributeName(_)
        ));
    }

    #[test]
    fn canonical_rendering_is_in_der_order() {
        let dn = sample_dn();
        assert_eq!(dn.canonical, "C=IE, O=Grid, CN=alice");
    }

    #[test]
    fn canonical_escapes_separators() {
        let name = DerNode::sequence(vec![atv(
            &oids::common_name(),
            DerNode::utf8_string("a,b\\c"),
        )]);
        let mut warnings = Vec::new();
        let dn = DistinguishedName::parse(&name, &mut warnings).unwrap();
        assert_eq!(dn.canonical, "CN=a\\,b\\\\c");
    }

    #[test]
    fn multi_valued_rdn_renders_with_plus() {
        let rdn = DerNode::set(vec![
            DerNode::sequence(vec![
                DerNode::oid(&oids::common_name()),
                DerNode::printable_string("a"),
            ]),
            DerNode::sequence(vec![
                DerNode::oid(&Oid::from_arcs(&[2, 5, 4, 10])),
                DerNode::printable_string("b"),
            ]),
        ]);
        let name = DerNode::sequence(vec![rdn]);
        let mut warnings = Vec::new();
        let dn = DistinguishedName::parse(&name, &mut warnings).unwrap();
        assert_eq!(dn.canonical, "CN=a+O=b");
        assert_eq!(dn.elements[0].rdn_index, dn.elements[1].rdn_index);
    }

    #[test]
    fn encoding_fidelity_for_each_string_type() {
        let cases: Vec<(DerNode, StringEncoding)> = vec![
            (DerNode::printable_string("x"), StringEncoding::PrintableString),
            (DerNode::ia5_string("x"), StringEncoding::Ia5String),
            (DerNode::utf8_string("x"), StringEncoding::Utf8String),
            (DerNode::teletex_string("x"), StringEncoding::TeletexString),
            (DerNode::bmp_string("x"), StringEncoding::BmpString),
            (DerNode::universal_string("x"), StringEncoding::UniversalString),
        ];
        for (value, expected) in cases {
            let name = DerNode::sequence(vec![atv(&oids::common_name(), value)]);
            let mut warnings = Vec::new();
            let dn = DistinguishedName::parse(&name, &mut warnings).unwrap();
            assert_eq!(dn.elements[0].encoding, expected);
            assert_eq!(dn.elements[0].value, "x");
        }
    }

    #[test]
    fn unknown_attr_type_keeps_dotted_oid() {
        let odd = Oid::from_arcs(&[1, 3, 6, 1, 4, 1, 99999, 7]);
        let name = DerNode::sequence(vec![atv(&odd, DerNode::utf8_string("v"))]);
        let mut warnings = Vec::new();
        let dn = DistinguishedName::parse(&name, &mut warnings).unwrap();
        assert_eq!(dn.elements[0].attr_name, "");
        assert_eq!(dn.canonical, "1.3.6.1.4.1.99999.7=v");
        assert_eq!(dn.query("1.3.6.1.4.1.99999.7").unwrap().len(), 1);
    }

    #[test]
    fn fingerprint_of_empty_input_matches_sha1_test_vector() {
        assert_eq!(spki_fingerprint(&[]), "da39a3ee5e6b4b0d3255bfef95601890afd80709");
        assert_eq!(spki_fingerprint(b"abc").len(), 40);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_attr() -> impl Strategy<Value = (Oid, String, u8)> {
            let attr_oids = prop_oneof![
                Just(Oid::from_arcs(&[2, 5, 4, 3])),
                Just(Oid::from_arcs(&[2, 5, 4, 10])),
                Just(Oid::from_arcs(&[2, 5, 4, 11])),
                Just(Oid::from_arcs(&[2, 5, 4, 6])),
            ];
            (attr_oids, "[a-zA-Z0-9 .-]{1,12}", 0u8..3)
        }

        proptest! {
            // Construction order and per-element encodings survive the
            // DER round trip into the model.
            #[test]
            fn dn_order_and_encoding_preserved(attrs in proptest::collection::vec(arb_attr(), 1..8)) {
                let rdns: Vec<DerNode> = attrs
                    .iter()
                    .map(|(oid, value, enc)| {
                        let value_node = match enc {
                            0 => DerNode::printable_string(value),
                            1 => DerNode::utf8_string(value),
                            _ => DerNode::ia5_string(value),
                        };
                        DerNode::set(vec![DerNode::sequence(vec![DerNode::oid(oid), value_node])])
                    })
                    .collect();
                let mut warnings = Vec::new();
                let dn = DistinguishedName::parse(&DerNode::sequence(rdns), &mut warnings).unwrap();
                prop_assert_eq!(dn.elements.len(), attrs.len());
                for (element, (oid, value, enc)) in dn.elements.iter().zip(&attrs) {
                    prop_assert_eq!(&element.attr_type, oid);
                    prop_assert_eq!(&element.value, value);
                    let expected = match enc {
                        0 => StringEncoding::PrintableString,
                        1 => StringEncoding::Utf8String,
                        _ => StringEncoding::Ia5String,
                    };
                    prop_assert_eq!(element.encoding, expected);
                }
                // Query by each attribute type returns hits in DN order.
                for (oid, _, _) in &attrs {
                    let hits = dn.query_oid(oid);
                    let expected: Vec<&String> = attrs
                        .iter()
                        .filter(|(o, _, _)| o == oid)
                        .map(|(_, v, _)| v)
                        .collect();
                    prop_assert_eq!(hits.iter().map(|e| &e.value).collect::<Vec<_>>(), expected);
                }
            }
        }
    }

    #[test]
    fn unique_id_fields_are_skipped() {
        // v2-era issuerUniqueID/subjectUniqueID between the key and the
        // extensions: [1] and [2] IMPLICIT BIT STRING.
        let name = DerNode::sequence(vec![DerNode::set(vec![DerNode::sequence(vec![
            DerNode::oid(&oids::common_name()),
            DerNode::printable_string("x"),
        ])])]);
        let alg = DerNode::sequence(vec![DerNode::oid(&oids::sha256_with_rsa()), DerNode::null()]);
        let spki = DerNode::sequence(vec![
            DerNode::sequence(vec![DerNode::oid(&oids::rsa_encryption()), DerNode::null()]),
            DerNode::bit_string(0, vec![0x30, 0x00]),
        ]);
        let tbs = DerNode::sequence(vec![
            DerNode::context(0, vec![DerNode::integer_u64(1)]),
            DerNode::integer_u64(9),
            alg.clone(),
            name.clone(),
            DerNode::sequence(vec![
                DerNode::primitive(
                    crate::der::TagClass::Universal,
                    der::tag::UTC_TIME,
                    b"100101000000Z".to_vec(),
                ),
                DerNode::primitive(
                    crate::der::TagClass::Universal,
                    der::tag::UTC_TIME,
                    b"200101000000Z".to_vec(),
                ),
            ]),
            name,
            spki,
            DerNode::primitive(crate::der::TagClass::ContextSpecific, 1, vec![0x00, 0xAA]),
            DerNode::primitive(crate::der::TagClass::ContextSpecific, 2, vec![0x00, 0xBB]),
        ]);
        let cert_der = crate::der::encode_der(&DerNode::sequence(vec![
            tbs,
            alg,
            DerNode::bit_string(0, vec![0u8; 4]),
        ]));
        let cert = parse_certificate(&cert_der).unwrap();
        assert_eq!(cert.version, 1);
        assert_eq!(cert.serial, BigInt::from(9));
        assert!(cert.extensions.is_empty());
        // The unique IDs are tolerated, not misread as extensions.
        assert!(!cert.warnings.iter().any(|w| w.contains("trailing")), "{:?}", cert.warnings);
    }

    #[test]
    fn random_bytes_are_not_a_certificate() {
        assert!(parse_certificate(&[0x02, 0x01, 0x00]).is_err());
        assert!(parse_certificate(&[0xDE, 0xAD, 0xBE, 0xEF]).is_err());
        let err = parse_certificate(&crate::der::encode_der(&DerNode::sequence(vec![]))).unwrap_err();
        assert!(matches!(err, X509Error::NotACertificate(_)), "{err:?}");
    }
}
