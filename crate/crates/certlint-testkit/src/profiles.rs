//! Compliant fixture presets and per-rule violation fixtures.

use certlint::oids;
use certlint::x509::{KeyUsage, NsCertType, StringEncoding};

use crate::build::{CertBuilder, CrlBuilder, ExtensionSpec, NameSpec};

fn ca_name(cn: &str) -> NameSpec {
    NameSpec::new().printable("C", "IE").printable("O", "Test Grid").printable("CN", cn)
}

/// A CA certificate that passes the whole ca and rat suites.
pub fn compliant_ca() -> CertBuilder {
    let name = ca_name("Test Grid CA");
    CertBuilder::new()
        .serial(0x2001)
        .issuer(name.clone())
        .subject(name)
        .extension(ExtensionSpec::BasicConstraints { critical: true, ca: true })
        .extension(ExtensionSpec::KeyUsage {
            critical: true,
            bits: KeyUsage::KEY_CERT_SIGN | KeyUsage::CRL_SIGN,
        })
}

fn end_entity_base(cn: &str) -> CertBuilder {
    CertBuilder::new()
        .serial(0x3001)
        .issuer(ca_name("Test Grid CA"))
        .subject(
            NameSpec::new().printable("C", "IE").printable("O", "Test Grid").printable("CN", cn),
        )
        .key_seed(7)
        .extension(ExtensionSpec::KeyUsage {
            critical: true,
            bits: KeyUsage::DIGITAL_SIGNATURE | KeyUsage::KEY_ENCIPHERMENT,
        })
}

/// A host certificate that passes the whole host suite.
pub fn compliant_host(fqdn: &str) -> CertBuilder {
    end_entity_base(fqdn)
        .extension(ExtensionSpec::SubjectAltNameDns { critical: false, names: vec![fqdn.to_string()] })
        .extension(ExtensionSpec::ExtendedKeyUsage {
            critical: false,
            purposes: vec![oids::eku_server_auth(), oids::eku_client_auth()],
        })
}

/// A personal certificate that passes the whole person suite.
pub fn compliant_person(name: &str) -> CertBuilder {
    end_entity_base(name).serial(0x3002).key_seed(8)
}

/// A robot certificate that passes the whole robot suite.
pub fn compliant_robot() -> CertBuilder {
    end_entity_base("Robot: Data Mover - Test Grid").serial(0x3003).key_seed(9)
}

/// A CRL that passes the crl suite.
pub fn compliant_crl() -> CrlBuilder {
    CrlBuilder::new().issuer(ca_name("Test Grid CA")).revoke(0x0101).revoke(0x0102)
}

/// The fixture payload for one rule violation.
#[derive(Debug, Clone)]
pub enum FixturePayload {
    Cert(Vec<u8>),
    Crl(Vec<u8>),
    /// A certificate plus the weak-key blacklist text that condemns it.
    CertWithBlacklist(Vec<u8>, String),
    /// A certificate set for corpus-level rules.
    Corpus(Vec<(String, Vec<u8>)>),
}

/// A certificate (or CRL, or corpus) violating exactly one catalog rule.
#[derive(Debug, Clone)]
pub struct ViolationFixture {
    pub rule_id: &'static str,
    /// The suite that owns the rule (first suite listing it).
    pub suite: &'static str,
    pub payload: FixturePayload,
}

fn cert(rule_id: &'static str, suite: &'static str, builder: &CertBuilder) -> ViolationFixture {
    ViolationFixture { rule_id, suite, payload: FixturePayload::Cert(builder.build_der()) }
}

/// One fixture per catalog rule, each violating exactly that rule's
/// condition against an otherwise compliant base.
pub fn violation_fixtures() -> Vec<ViolationFixture> {
    // Shared and CA rules, seeded against the CA base.
    let mut fixtures = vec![cert("GCP-2.1", "ca", &compliant_ca().version_absent())];
    fixtures.push(cert("GCP-2.2", "ca", &compliant_ca().md5_signature()));
    fixtures.push(cert(
        "GCP-2.3",
        "ca",
        &compliant_ca()
            .map_subject(|s| s.replace("CN", "Test Grid CA", StringEncoding::BmpString)),
    ));
    fixtures.push(cert(
        "GCP-2.4.1",
        "ca",
        &compliant_ca()
            .replace_extension(ExtensionSpec::BasicConstraints { critical: false, ca: true }),
    ));
    fixtures.push(cert(
        "GCP-2.4.4",
        "ca",
        &compliant_ca()
            .extension(ExtensionSpec::NsCertType { critical: false, bits: NsCertType::SSL_CA }),
    ));
    fixtures.push(cert("EXTRA-SERIAL", "ca", &compliant_ca().serial(0)));

    // End-entity rules, seeded against the host base (the host suite is
    // the first suite that lists them).
    let fqdn = "node01.test-grid.example";
    fixtures.push(cert(
        "GCP-3.2",
        "host",
        &compliant_host(fqdn).map_subject(|s| s.replace("CN", fqdn, StringEncoding::BmpString)),
    ));
    fixtures.push(cert(
        "GCP-3.3.1",
        "host",
        &compliant_host(fqdn).replace_extension(ExtensionSpec::KeyUsage {
            critical: false,
            bits: KeyUsage::DIGITAL_SIGNATURE | KeyUsage::KEY_ENCIPHERMENT,
        }),
    ));
    fixtures.push(cert(
        "GCP-3.3.2",
        "host",
        &compliant_host(fqdn).replace_extension(ExtensionSpec::KeyUsage {
            critical: true,
            bits: KeyUsage::DIGITAL_SIGNATURE | KeyUsage::KEY_ENCIPHERMENT | KeyUsage::KEY_CERT_SIGN,
        }),
    ));

    // Host-only rules.
    fixtures.push(cert(
        "HOST-CN-SINGLE",
        "host",
        &compliant_host(fqdn)
            .map_subject(|s| s.printable("CN", "node02.test-grid.example")),
    ));
    fixtures.push(cert(
        "HOST-CN-FQDN",
        "host",
        &compliant_host(fqdn).map_subject(|s| s.replace("CN", "localhost", StringEncoding::PrintableString)),
    ));
    fixtures.push(cert(
        "HOST-SAN-DNS",
        "host",
        &compliant_host(fqdn).without_extension(&oids::subject_alt_name()),
    ));
    fixtures.push(cert(
        "HOST-EKU-SERVERAUTH",
        "host",
        &compliant_host(fqdn).replace_extension(ExtensionSpec::ExtendedKeyUsage {
            critical: false,
            purposes: vec![oids::eku_client_auth()],
        }),
    ));

    fixtures.push(cert(
        "ROBOT-CN",
        "robot",
        &compliant_robot()
            .map_subject(|s| s.replace("CN", "Automated Agent 01", StringEncoding::PrintableString)),
    ));

    // Vulnerability suite.
    fixtures.push(cert("RAT-MD5", "rat", &compliant_ca().md5_signature()));
    fixtures.push(cert("RAT-RSA", "rat", &compliant_ca().rsa_key(512, 65_537)));
    let weak = compliant_ca().key_seed(0xDEB1A2).build_der();
    let fingerprint = certlint::x509::parse_certificate(&weak)
        .expect("fixture parses")
        .spki_fingerprint();
    let blacklist = format!(
        "# weak-key blacklist: one SHA-1 of the DER SubjectPublicKeyInfo per line, lowercase hex\n{fingerprint}\n"
    );
    fixtures.push(ViolationFixture {
        rule_id: "RAT-DEBIAN",
        suite: "rat",
        payload: FixturePayload::CertWithBlacklist(weak, blacklist),
    });

    fixtures.push(ViolationFixture {
        rule_id: "CRL-MD5",
        suite: "crl",
        payload: FixturePayload::Crl(compliant_crl().md5_signature().build_der()),
    });

    // Corpus rules: a pair violating exactly the one uniqueness property.
    let serial_twin_a = compliant_ca().serial(0x4242).key_seed(21);
    let serial_twin_b = compliant_ca()
        .serial(0x4242)
        .key_seed(22)
        .map_subject(|s| s.replace("CN", "Test Grid CA 2", StringEncoding::PrintableString));
    fixtures.push(ViolationFixture {
        rule_id: "CORPUS-SERIAL-UNIQ",
        suite: "corpus",
        payload: FixturePayload::Corpus(vec![
            ("twin-a".to_string(), serial_twin_a.build_der()),
            ("twin-b".to_string(), serial_twin_b.build_der()),
        ]),
    });
    let subject_twin_a = compliant_ca().serial(0x5001).key_seed(23);
    let subject_twin_b = compliant_ca().serial(0x5002).key_seed(24);
    fixtures.push(ViolationFixture {
        rule_id: "CORPUS-SUBJECT-UNIQ",
        suite: "corpus",
        payload: FixturePayload::Corpus(vec![
            ("twin-a".to_string(), subject_twin_a.build_der()),
            ("twin-b".to_string(), subject_twin_b.build_der()),
        ]),
    });

    fixtures
}

/// A 91-certificate CA corpus seeding the classic failure-cause shape:
/// indices 0..22 fully conform; 39 carry a zero serial, 32 carry an
/// nsCertType extension and 22 use a bmpString CN, with overlaps so the
/// failing set is exactly 69.
pub fn table1_corpus() -> Vec<(String, Vec<u8>)> {
    let mut corpus = Vec::with_capacity(91);
    for i in 0..91usize {
        let cn = format!("Synthetic Grid CA {i:02}");
        let mut builder = compliant_ca()
            .serial(1000 + i as i64)
            .key_seed(100 + i as u64)
            .issuer(ca_name(&cn))
            .subject(ca_name(&cn))
            .not_before(2000 + (i as i32 * 9) / 91, (i as u32 % 12) + 1, (i as u32 % 28) + 1);
        if (22..=60).contains(&i) {
            builder = builder.serial(0);
        }
        if (52..=83).contains(&i) {
            builder = builder
                .extension(ExtensionSpec::NsCertType { critical: false, bits: NsCertType::SSL_CA });
        }
        if (69..=90).contains(&i) {
            builder = builder.map_subject(|s| s.replace("CN", &cn, StringEncoding::BmpString));
        }
        corpus.push((format!("ca{i:03}"), builder.build_der()));
    }
    corpus
}

/// A CA corpus of `n` certificates with a sprinkling of defects, for
/// throughput checks.
pub fn synthetic_ca_corpus(n: usize) -> Vec<(String, Vec<u8>)> {
    (0..n)
        .map(|i| {
            let cn = format!("Bulk CA {i:04}");
            let mut builder = compliant_ca()
                .serial(10_000 + i as i64)
                .key_seed(1_000 + i as u64)
                .issuer(ca_name(&cn))
                .subject(ca_name(&cn));
            match i % 7 {
                1 => builder = builder.serial(0),
                3 => {
                    builder = builder.extension(ExtensionSpec::NsCertType {
                        critical: false,
                        bits: NsCertType::SSL_CA,
                    })
                }
                5 => builder = builder.md5_signature(),
                _ => {}
            }
            (format!("bulk{i:04}"), builder.build_der())
        })
        .collect()
}
