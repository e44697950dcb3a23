//! Synthetic certificate and CRL construction.
//!
//! Builds syntactically valid DER certificates with precisely controlled
//! defects. Signatures are placeholder bytes: nothing here verifies them,
//! and the linter under test does not either.

use certlint::der::{self, DerNode, DerTimestamp, Oid, TagClass, TimeForm};
use certlint::oids;
use certlint::pem;
use certlint::x509::StringEncoding;
use num_bigint::{BigInt, BigUint};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ordered DN attribute list; each attribute becomes its own RDN.
#[derive(Debug, Clone, Default)]
pub struct NameSpec {
    attrs: Vec<(Oid, String, StringEncoding)>,
}

impl NameSpec {
    pub fn new() -> NameSpec {
        NameSpec::default()
    }

    /// Append an attribute by short name with printableString encoding.
    pub fn printable(self, attr: &str, value: &str) -> NameSpec {
        self.with_name(attr, value, StringEncoding::PrintableString)
    }

    pub fn with_name(mut self, attr: &str, value: &str, encoding: StringEncoding) -> NameSpec {
        let oid = oids::dn_attribute_oid(attr)
            .unwrap_or_else(|| panic!("unknown DN attribute {attr:?}"));
        self.attrs.push((oid, value.to_string(), encoding));
        self
    }

    pub fn with_oid(mut self, oid: Oid, value: &str, encoding: StringEncoding) -> NameSpec {
        self.attrs.push((oid, value.to_string(), encoding));
        self
    }

    /// Replace every occurrence of `attr` with a new value and encoding.
    pub fn replace(mut self, attr: &str, value: &str, encoding: StringEncoding) -> NameSpec {
        let oid = oids::dn_attribute_oid(attr).expect("known attribute");
        self.attrs.retain(|(o, _, _)| *o != oid);
        self.attrs.push((oid, value.to_string(), encoding));
        self
    }

    fn to_node(&self) -> DerNode {
        let rdns = self
            .attrs
            .iter()
            .map(|(oid, value, encoding)| {
                DerNode::set(vec![DerNode::sequence(vec![
                    DerNode::oid(oid),
                    string_node(value, *encoding),
                ])])
            })
            .collect();
        DerNode::sequence(rdns)
    }
}

fn string_node(value: &str, encoding: StringEncoding) -> DerNode {
    match encoding {
        StringEncoding::PrintableString => DerNode::printable_string(value),
        StringEncoding::Ia5String => DerNode::ia5_string(value),
        StringEncoding::Utf8String => DerNode::utf8_string(value),
        StringEncoding::TeletexString => DerNode::teletex_string(value),
        StringEncoding::BmpString => DerNode::bmp_string(value),
        StringEncoding::UniversalString => DerNode::universal_string(value),
        StringEncoding::Other(tag) => {
            DerNode::primitive(TagClass::Universal, tag, value.as_bytes().to_vec())
        }
    }
}

/// Extension payloads the builder knows how to encode.
#[derive(Debug, Clone)]
pub enum ExtensionSpec {
    BasicConstraints { critical: bool, ca: bool },
    KeyUsage { critical: bool, bits: u16 },
    ExtendedKeyUsage { critical: bool, purposes: Vec<Oid> },
    SubjectAltNameDns { critical: bool, names: Vec<String> },
    NsCertType { critical: bool, bits: u8 },
    NsComment { critical: bool, text: String },
    Raw { oid: Oid, critical: bool, payload: Vec<u8> },
}

impl ExtensionSpec {
    pub fn oid(&self) -> Oid {
        match self {
            ExtensionSpec::BasicConstraints { .. } => oids::basic_constraints(),
            ExtensionSpec::KeyUsage { .. } => oids::key_usage(),
            ExtensionSpec::ExtendedKeyUsage { .. } => oids::extended_key_usage(),
            ExtensionSpec::SubjectAltNameDns { .. } => oids::subject_alt_name(),
            ExtensionSpec::NsCertType { .. } => oids::ns_cert_type(),
            ExtensionSpec::NsComment { .. } => oids::ns_comment(),
            ExtensionSpec::Raw { oid, .. } => oid.clone(),
        }
    }

    fn critical(&self) -> bool {
        match self {
            ExtensionSpec::BasicConstraints { critical, .. }
            | ExtensionSpec::KeyUsage { critical, .. }
            | ExtensionSpec::ExtendedKeyUsage { critical, .. }
            | ExtensionSpec::SubjectAltNameDns { critical, .. }
            | ExtensionSpec::NsCertType { critical, .. }
            | ExtensionSpec::NsComment { critical, .. }
            | ExtensionSpec::Raw { critical, .. } => *critical,
        }
    }

    fn payload(&self) -> Vec<u8> {
        match self {
            ExtensionSpec::BasicConstraints { ca, .. } => {
                let children = if *ca { vec![DerNode::boolean(true)] } else { vec![] };
                der::encode_der(&DerNode::sequence(children))
            }
            ExtensionSpec::KeyUsage { bits, .. } => der::encode_der(&named_bits_u16(*bits)),
            ExtensionSpec::ExtendedKeyUsage { purposes, .. } => der::encode_der(
                &DerNode::sequence(purposes.iter().map(DerNode::oid).collect()),
            ),
            ExtensionSpec::SubjectAltNameDns { names, .. } => {
                let entries = names
                    .iter()
                    .map(|n| DerNode::primitive(TagClass::ContextSpecific, 2, n.as_bytes().to_vec()))
                    .collect();
                der::encode_der(&DerNode::sequence(entries))
            }
            ExtensionSpec::NsCertType { bits, .. } => {
                der::encode_der(&named_bits_u16(u16::from(*bits)))
            }
            ExtensionSpec::NsComment { text, .. } => der::encode_der(&DerNode::ia5_string(text)),
            ExtensionSpec::Raw { payload, .. } => payload.clone(),
        }
    }

    fn to_node(&self) -> DerNode {
        let mut children = vec![DerNode::oid(&self.oid())];
        if self.critical() {
            children.push(DerNode::boolean(true));
        }
        children.push(DerNode::octet_string(self.payload()));
        DerNode::sequence(children)
    }
}

/// Encode a named-bit-list BIT STRING: bit 0 is the high bit of the first
/// byte, trailing zero bits trimmed per DER.
fn named_bits_u16(bits: u16) -> DerNode {
    if bits == 0 {
        return DerNode::bit_string(0, vec![]);
    }
    let highest = (0..16usize).rev().find(|i| bits & (1 << i) != 0).unwrap();
    let nbits = highest + 1;
    let nbytes = nbits.div_ceil(8);
    let mut bytes = vec![0u8; nbytes];
    for i in 0..nbits {
        if bits & (1 << i) != 0 {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    DerNode::bit_string((nbytes * 8 - nbits) as u8, bytes)
}

#[derive(Debug, Clone)]
pub enum KeySpec {
    Rsa { bits: usize, exponent: u64 },
    /// An elliptic-curve key, for the non-RSA paths.
    Ec,
    /// A pre-built SubjectPublicKeyInfo node, for key reuse.
    RawSpki(Box<DerNode>),
}

#[derive(Debug, Clone)]
pub struct CertBuilder {
    version: Option<i64>,
    serial: BigInt,
    sig_alg: Oid,
    issuer: NameSpec,
    subject: NameSpec,
    not_before: DerTimestamp,
    not_after: DerTimestamp,
    key: KeySpec,
    key_seed: u64,
    extensions: Vec<ExtensionSpec>,
}

fn ts(year: i32, month: u32, day: u32) -> DerTimestamp {
    DerTimestamp::new(year, month, day, 0, 0, 0, TimeForm::UtcTime).expect("valid date")
}

impl Default for CertBuilder {
    fn default() -> Self {
        CertBuilder {
            version: Some(2),
            serial: BigInt::from(0x1001),
            sig_alg: oids::sha256_with_rsa(),
            issuer: NameSpec::new(),
            subject: NameSpec::new(),
            not_before: ts(2010, 6, 1),
            not_after: ts(2035, 6, 1),
            key: KeySpec::Rsa { bits: 2048, exponent: 65_537 },
            key_seed: 1,
            extensions: Vec::new(),
        }
    }
}

impl CertBuilder {
    pub fn new() -> CertBuilder {
        CertBuilder::default()
    }

    /// Omit the version field entirely, yielding a v1 certificate.
    pub fn version_absent(mut self) -> CertBuilder {
        self.version = None;
        self
    }

    pub fn version(mut self, v: i64) -> CertBuilder {
        self.version = Some(v);
        self
    }

    pub fn serial(mut self, v: i64) -> CertBuilder {
        self.serial = BigInt::from(v);
        self
    }

    pub fn sig_alg(mut self, oid: Oid) -> CertBuilder {
        self.sig_alg = oid;
        self
    }

    pub fn md5_signature(self) -> CertBuilder {
        self.sig_alg(oids::md5_with_rsa())
    }

    pub fn issuer(mut self, name: NameSpec) -> CertBuilder {
        self.issuer = name;
        self
    }

    pub fn subject(mut self, name: NameSpec) -> CertBuilder {
        self.subject = name;
        self
    }

    pub fn subject_mut(&mut self) -> &mut NameSpec {
        &mut self.subject
    }

    pub fn map_subject(mut self, f: impl FnOnce(NameSpec) -> NameSpec) -> CertBuilder {
        self.subject = f(self.subject);
        self
    }

    pub fn not_before(mut self, year: i32, month: u32, day: u32) -> CertBuilder {
        self.not_before = ts(year, month, day);
        self
    }

    pub fn not_after(mut self, year: i32, month: u32, day: u32) -> CertBuilder {
        self.not_after = ts(year, month, day);
        self
    }

    pub fn rsa_key(mut self, bits: usize, exponent: u64) -> CertBuilder {
        self.key = KeySpec::Rsa { bits, exponent };
        self
    }

    pub fn ec_key(mut self) -> CertBuilder {
        self.key = KeySpec::Ec;
        self
    }

    pub fn raw_spki(mut self, spki: DerNode) -> CertBuilder {
        self.key = KeySpec::RawSpki(Box::new(spki));
        self
    }

    /// Vary the synthesized key material deterministically.
    pub fn key_seed(mut self, seed: u64) -> CertBuilder {
        self.key_seed = seed;
        self
    }

    pub fn extension(mut self, spec: ExtensionSpec) -> CertBuilder {
        self.extensions.push(spec);
        self
    }

    /// Drop every extension with the given OID.
    pub fn without_extension(mut self, oid: &Oid) -> CertBuilder {
        self.extensions.retain(|e| &e.oid() != oid);
        self
    }

    /// Replace an extension in place, keeping catalog order.
    pub fn replace_extension(mut self, spec: ExtensionSpec) -> CertBuilder {
        let oid = spec.oid();
        let mut replaced = false;
        for slot in &mut self.extensions {
            if slot.oid() == oid {
                *slot = spec.clone();
                replaced = true;
            }
        }
        if !replaced {
            self.extensions.push(spec);
        }
        self
    }

    pub fn spki_node(&self) -> DerNode {
        match &self.key {
            KeySpec::Rsa { bits, exponent } => {
                let modulus = synth_modulus(*bits, self.key_seed);
                let rsa_key = DerNode::sequence(vec![
                    DerNode::integer(&BigInt::from(modulus)),
                    DerNode::integer(&BigInt::from(*exponent)),
                ]);
                DerNode::sequence(vec![
                    DerNode::sequence(vec![DerNode::oid(&oids::rsa_encryption()), DerNode::null()]),
                    DerNode::bit_string(0, der::encode_der(&rsa_key)),
                ])
            }
            KeySpec::Ec => {
                let mut point = vec![0x04];
                let mut rng = ChaCha8Rng::seed_from_u64(self.key_seed);
                let mut coords = vec![0u8; 64];
                rng.fill_bytes(&mut coords);
                point.extend_from_slice(&coords);
                DerNode::sequence(vec![
                    DerNode::sequence(vec![
                        DerNode::oid(&oids::ec_public_key()),
                        DerNode::oid(&Oid::from_arcs(&[1, 2, 840, 10045, 3, 1, 7])),
                    ]),
                    DerNode::bit_string(0, point),
                ])
            }
            KeySpec::RawSpki(node) => (**node).clone(),
        }
    }

    fn time_node(ts: &DerTimestamp) -> DerNode {
        if (1950..2050).contains(&ts.year) {
            DerNode::utc_time(ts)
        } else {
            DerNode::generalized_time(ts)
        }
    }

    pub fn build_der(&self) -> Vec<u8> {
        let alg_id =
            DerNode::sequence(vec![DerNode::oid(&self.sig_alg), DerNode::null()]);
        let mut tbs_children = Vec::new();
        if let Some(v) = self.version {
            tbs_children.push(DerNode::context(0, vec![DerNode::integer(&BigInt::from(v))]));
        }
        tbs_children.push(DerNode::integer(&self.serial));
        tbs_children.push(alg_id.clone());
        tbs_children.push(self.issuer.to_node());
        tbs_children.push(DerNode::sequence(vec![
            Self::time_node(&self.not_before),
            Self::time_node(&self.not_after),
        ]));
        tbs_children.push(self.subject.to_node());
        tbs_children.push(self.spki_node());
        if !self.extensions.is_empty() {
            let list = DerNode::sequence(self.extensions.iter().map(ExtensionSpec::to_node).collect());
            tbs_children.push(DerNode::context(3, vec![list]));
        }
        let tbs = DerNode::sequence(tbs_children);
        let mut signature = vec![0u8; 64];
        let mut rng = ChaCha8Rng::seed_from_u64(self.key_seed ^ 0x5163_4e41);
        rng.fill_bytes(&mut signature);
        let cert = DerNode::sequence(vec![tbs, alg_id, DerNode::bit_string(0, signature)]);
        der::encode_der(&cert)
    }

    pub fn build_pem(&self) -> String {
        pem::encode_pem("CERTIFICATE", &self.build_der())
    }
}

/// Deterministic odd integer with an exact bit length. Not a real RSA
/// modulus; suitable only for parsers and parameter checks.
pub fn synth_modulus(bits: usize, seed: u64) -> BigUint {
    assert!(bits >= 16, "modulus below 16 bits is not representable here");
    let nbytes = bits.div_ceil(8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut bytes = vec![0u8; nbytes];
    rng.fill_bytes(&mut bytes);
    let one = BigUint::from(1u32);
    let mut n = BigUint::from_bytes_be(&bytes);
    n &= (&one << bits) - &one;
    n |= &one << (bits - 1);
    n |= one;
    n
}

#[derive(Debug, Clone)]
pub struct CrlBuilder {
    issuer: NameSpec,
    sig_alg: Oid,
    this_update: DerTimestamp,
    next_update: Option<DerTimestamp>,
    revoked_serials: Vec<i64>,
}

impl Default for CrlBuilder {
    fn default() -> Self {
        CrlBuilder {
            issuer: NameSpec::new(),
            sig_alg: oids::sha256_with_rsa(),
            this_update: ts(2010, 6, 1),
            next_update: Some(ts(2010, 7, 1)),
            revoked_serials: Vec::new(),
        }
    }
}

impl CrlBuilder {
    pub fn new() -> CrlBuilder {
        CrlBuilder::default()
    }

    pub fn issuer(mut self, name: NameSpec) -> CrlBuilder {
        self.issuer = name;
        self
    }

    pub fn sig_alg(mut self, oid: Oid) -> CrlBuilder {
        self.sig_alg = oid;
        self
    }

    pub fn md5_signature(self) -> CrlBuilder {
        self.sig_alg(oids::md5_with_rsa())
    }

    pub fn no_next_update(mut self) -> CrlBuilder {
        self.next_update = None;
        self
    }

    pub fn revoke(mut self, serial: i64) -> CrlBuilder {
        self.revoked_serials.push(serial);
        self
    }

    pub fn build_der(&self) -> Vec<u8> {
        let alg_id = DerNode::sequence(vec![DerNode::oid(&self.sig_alg), DerNode::null()]);
        let mut tbs_children = vec![
            DerNode::integer_u64(1), // v2
            alg_id.clone(),
            self.issuer.to_node(),
            DerNode::utc_time(&self.this_update),
        ];
        if let Some(next) = &self.next_update {
            tbs_children.push(DerNode::utc_time(next));
        }
        if !self.revoked_serials.is_empty() {
            let entries = self
                .revoked_serials
                .iter()
                .map(|serial| {
                    DerNode::sequence(vec![
                        DerNode::integer(&BigInt::from(*serial)),
                        DerNode::utc_time(&self.this_update),
                    ])
                })
                .collect();
            tbs_children.push(DerNode::sequence(entries));
        }
        let tbs = DerNode::sequence(tbs_children);
        let crl = DerNode::sequence(vec![tbs, alg_id, DerNode::bit_string(0, vec![0xA5; 64])]);
        der::encode_der(&crl)
    }

    pub fn build_pem(&self) -> String {
        pem::encode_pem("X509 CRL", &self.build_der())
    }
}
