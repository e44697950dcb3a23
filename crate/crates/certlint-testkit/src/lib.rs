//! Fixture generation for certlint tests and benchmarks: synthetic
//! certificates and CRLs with precisely seeded defects, plus random DER
//! trees. Nothing here belongs in production paths.

pub mod build;
pub mod dergen;
pub mod profiles;

pub use build::{CertBuilder, CrlBuilder, ExtensionSpec, KeySpec, NameSpec};
pub use dergen::random_der_tree;
pub use profiles::{
    compliant_ca, compliant_crl, compliant_host, compliant_person, compliant_robot,
    synthetic_ca_corpus, table1_corpus, violation_fixtures, FixturePayload, ViolationFixture,
};
