//! Certificate compliance linting.
//!
//! `certlint` parses X.509 certificates and CRLs from DER or PEM, runs
//! them through declarative rule suites (certificate-profile checks per
//! certificate class, plus vulnerability checks), and renders the results
//! as TAP streams, grouped summaries and compliance-over-time analytics.
//!
//! The crate is organized bottom-up:
//!
//! - [`der`]: strict DER decoding/encoding as a TLV tree
//! - [`pem`]: BEGIN/END armored input handling
//! - [`x509`] and [`crl`]: typed certificate and CRL models
//! - [`engine`]: rules, verdicts, suite evaluation and aggregation
//! - [`catalog`]: the shipped rule catalogs and their configuration
//! - [`report`]: TAP output and failure-cause summaries
//! - [`analytics`]: failure-vs-issue-date points, least-squares fit

pub mod analytics;
pub mod catalog;
pub mod crl;
pub mod der;
pub mod engine;
pub mod oids;
pub mod pem;
pub mod report;
pub mod x509;

pub use crl::Crl;
pub use der::{DerNode, DerTimestamp, Oid};
pub use x509::{Certificate, DistinguishedName, X509Error};
