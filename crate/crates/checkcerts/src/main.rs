//! checkcerts: run certificate-profile and vulnerability suites over PEM
//! files and report the results as TAP, summaries and analytics exports.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, ValueEnum};

use certlint::analytics;
use certlint::catalog::{build_catalog, CatalogConfig, RuleCatalog, SuiteKind};
use certlint::crl::parse_crl;
use certlint::engine::{
    run_corpus_checks, run_suite, CorpusEntry, Rfc2119Level, SubjectRecord, Suite, SuiteResult,
    LOAD_RULE_ID,
};
use certlint::pem::decode_pem;
use certlint::report::{default_cause_map, emit_tap, group_by_subject, summarize};
use certlint::x509::{parse_certificate, Certificate, ParsedExtension};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Tap,
    Summary,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "checkcerts",
    about = "Lint X.509 certificates and CRLs against profile and vulnerability suites",
    group(ArgGroup::new("selection").args(["suite", "detect"]).required(true).multiple(false))
)]
struct Cli {
    /// Suite to run: ca, host, person, robot, rat, crl or corpus.
    /// Repeatable.
    #[arg(long = "suite", value_name = "NAME")]
    suite: Vec<String>,

    /// Route each certificate to a class suite automatically
    /// (basicConstraints CA flag selects the ca suite).
    #[arg(long)]
    detect: bool,

    /// Merge all suites into a single TAP run with one overall result.
    #[arg(long)]
    aggregate: bool,

    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = OutputMode::Tap)]
    output: OutputMode,

    /// Write the machine-readable summary document (JSON) here.
    #[arg(long, value_name = "PATH")]
    summary: Option<PathBuf>,

    /// Write the compliance-over-time points CSV here.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,

    /// key=value configuration file overriding catalog defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Weak-key blacklist file (overrides the config file's entry).
    #[arg(long, value_name = "PATH")]
    blacklist: Option<PathBuf>,

    /// Run only rules at this level or weaker: must, should or may.
    #[arg(long = "level-filter", value_name = "LEVEL")]
    level_filter: Option<String>,

    /// PEM files holding certificates and/or CRLs.
    #[arg(required = true, value_name = "PEM_FILE")]
    inputs: Vec<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("checkcerts: {message}");
            ExitCode::from(2)
        }
    }
}

/// All parsed material from the input files.
struct LoadedInputs {
    /// Certificate subjects, in input order; parse failures included.
    certs: Vec<SubjectRecord>,
    /// CRL subjects, in input order; parse failures included.
    crls: Vec<SubjectRecord>,
    /// Whole files that could not be read or PEM-decoded.
    unreadable: Vec<SubjectRecord>,
}

fn load_inputs(paths: &[PathBuf]) -> LoadedInputs {
    let mut loaded = LoadedInputs { certs: Vec::new(), crls: Vec::new(), unreadable: Vec::new() };
    for path in paths {
        let display = path.display().to_string();
        let text = match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => {
                loaded.unreadable.push(SubjectRecord::unparsed(display, e.to_string()));
                continue;
            }
        };
        let blocks = match decode_pem(&text) {
            Ok(blocks) => blocks,
            Err(e) => {
                loaded.unreadable.push(SubjectRecord::unparsed(display, e.to_string()));
                continue;
            }
        };
        for (index, block) in blocks.iter().enumerate() {
            let id = format!("{display}#{index}");
            match block.label.as_str() {
                "CERTIFICATE" => match parse_certificate(&block.der) {
                    Ok(cert) => loaded.certs.push(SubjectRecord::cert(id, cert)),
                    Err(e) => loaded.certs.push(SubjectRecord::unparsed(id, e.to_string())),
                },
                "X509 CRL" | "CRL" => match parse_crl(&block.der) {
                    Ok(crl) => loaded.crls.push(SubjectRecord::crl(id, crl)),
                    Err(e) => loaded.crls.push(SubjectRecord::unparsed(id, e.to_string())),
                },
                _ => {} // other PEM material (keys, requests) is not linted
            }
        }
    }
    loaded
}

fn parse_config_file(path: &Path) -> Result<CatalogConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut config = CatalogConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        let parse_usize = |what: &str| {
            value
                .parse::<usize>()
                .map_err(|_| format!("config line {}: {what} must be a number", lineno + 1))
        };
        match key {
            "min_modulus_bits" => config.min_modulus_bits = parse_usize("min_modulus_bits")?,
            "recommended_modulus_bits" => {
                config.recommended_modulus_bits = parse_usize("recommended_modulus_bits")?
            }
            "min_exponent" => {
                config.min_exponent = value.parse().map_err(|_| {
                    format!("config line {}: min_exponent must be a number", lineno + 1)
                })?
            }
            "blacklist" | "blacklist_path" => config.blacklist_path = Some(PathBuf::from(value)),
            "robot_cn_pattern" => config.robot_cn_pattern = value.to_string(),
            "host_fqdn_pattern" => config.host_fqdn_pattern = value.to_string(),
            other => return Err(format!("config line {}: unknown key {other:?}", lineno + 1)),
        }
    }
    Ok(config)
}

fn selected_suites(cli: &Cli) -> Result<(Vec<SuiteKind>, bool), String> {
    let mut kinds = Vec::new();
    let mut corpus = false;
    for name in &cli.suite {
        if name.eq_ignore_ascii_case("corpus") {
            corpus = true;
        } else {
            let kind = SuiteKind::parse(name).ok_or_else(|| {
                format!("unknown suite {name:?} (expected ca, host, person, robot, rat, crl or corpus)")
            })?;
            if !kinds.contains(&kind) {
                kinds.push(kind);
            }
        }
    }
    // Canonical execution order regardless of flag order.
    kinds.sort_by_key(|k| SuiteKind::ALL.iter().position(|x| x == k));
    Ok((kinds, corpus))
}

/// Route a certificate to a class suite: CA flag wins, then the robot CN
/// pattern, then a FQDN-shaped CN, otherwise person.
fn detect_class(cert: &Certificate, robot: &regex::Regex, fqdn: &regex::Regex) -> SuiteKind {
    let is_ca = cert.extension("basicConstraints").is_some_and(|e| {
        matches!(e.parsed, Some(ParsedExtension::BasicConstraints { ca: true, .. }))
    });
    if is_ca {
        return SuiteKind::Ca;
    }
    let cns = cert.subject.query_oid(&certlint::oids::common_name());
    if cns.iter().any(|e| robot.is_match(&e.value)) {
        return SuiteKind::Robot;
    }
    let host_part = |value: &str| value.split_once('/').map_or(value.to_string(), |(_, h)| h.to_string());
    if cns.iter().any(|e| fqdn.is_match(&host_part(&e.value))) {
        return SuiteKind::Host;
    }
    SuiteKind::Person
}

/// Run a suite over borrowed subject records, applying the level filter.
fn run_over_refs(
    suite: &Suite,
    subjects: &[&SubjectRecord],
    level_filter: Option<Rfc2119Level>,
) -> SuiteResult {
    let filtered;
    let suite = match level_filter {
        Some(level) => {
            filtered = suite.filter_by_max_level(level);
            &filtered
        }
        None => suite,
    };
    let mut verdicts = Vec::new();
    for subject in subjects {
        verdicts.extend(run_suite(suite, std::slice::from_ref(*subject)).verdicts);
    }
    SuiteResult::from_verdicts(suite.name.clone(), verdicts)
}

fn run(cli: &Cli) -> Result<bool, String> {
    let mut config = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => CatalogConfig::default(),
    };
    if let Some(path) = &cli.blacklist {
        config.blacklist_path = Some(path.clone());
    }
    let catalog: RuleCatalog = build_catalog(&config).map_err(|e| e.to_string())?;

    let level_filter = match &cli.level_filter {
        Some(raw) => Some(
            Rfc2119Level::parse(raw)
                .ok_or_else(|| format!("unknown level {raw:?} (expected must, should or may)"))?,
        ),
        None => None,
    };

    let loaded = load_inputs(&cli.inputs);

    // Plan: (suite, subjects) in canonical order, plus the corpus step.
    // Suites clone cheaply; their rules are shared.
    let mut plan: Vec<(Suite, Vec<&SubjectRecord>)> = Vec::new();
    let mut run_corpus = false;
    if cli.detect {
        let robot = regex::Regex::new(&config.robot_cn_pattern).map_err(|e| e.to_string())?;
        let fqdn = regex::Regex::new(&config.host_fqdn_pattern).map_err(|e| e.to_string())?;
        let mut routed: BTreeMap<&str, Vec<&SubjectRecord>> = BTreeMap::new();
        for record in &loaded.certs {
            let kind = match record.certificate() {
                Some(cert) => detect_class(cert, &robot, &fqdn),
                None => SuiteKind::Ca, // unparseable: surfaces in the first class suite
            };
            routed.entry(kind.name()).or_default().push(record);
        }
        for record in &loaded.unreadable {
            routed.entry(SuiteKind::Ca.name()).or_default().push(record);
        }
        for kind in [SuiteKind::Ca, SuiteKind::Host, SuiteKind::Person, SuiteKind::Robot] {
            if let Some(subjects) = routed.remove(kind.name()) {
                plan.push((catalog.suite(kind).clone(), subjects));
            }
        }
        if !loaded.crls.is_empty() {
            plan.push((catalog.crl_suite.clone(), loaded.crls.iter().collect()));
        }
    } else {
        let (kinds, corpus) = selected_suites(cli)?;
        run_corpus = corpus;
        let mut unreadable_pending = !loaded.unreadable.is_empty();
        for kind in kinds {
            let base = if kind.takes_certificates() { &loaded.certs } else { &loaded.crls };
            let mut subjects: Vec<&SubjectRecord> = base.iter().collect();
            if unreadable_pending {
                // Unreadable files surface once, in the first selected suite.
                subjects.extend(loaded.unreadable.iter());
                unreadable_pending = false;
            }
            plan.push((catalog.suite(kind).clone(), subjects));
        }
        if unreadable_pending && run_corpus {
            // corpus-only invocation still reports unreadable files
            plan.push((Suite::new("load", Vec::new()), loaded.unreadable.iter().collect()));
        }
    }

    let mut results: Vec<SuiteResult> = Vec::new();
    let mut cert_suite_names: BTreeSet<String> = BTreeSet::new();
    for (suite, subjects) in &plan {
        if suite.name != "crl" && suite.name != "load" {
            cert_suite_names.insert(suite.name.clone());
        }
        results.push(run_over_refs(suite, subjects, level_filter));
    }
    if run_corpus {
        let parsed: Vec<(&str, &Certificate)> = loaded
            .certs
            .iter()
            .filter_map(|r| r.certificate().map(|c| (r.id.as_str(), c)))
            .collect();
        let entries: Vec<CorpusEntry> =
            parsed.iter().map(|(id, cert)| CorpusEntry { id, cert }).collect();
        let verdicts = run_corpus_checks(&catalog.corpus_rules, &entries);
        results.push(SuiteResult::from_verdicts("corpus", verdicts));
    }

    // Failure counts per certificate over the class/vulnerability suites,
    // for the compliance-over-time points.
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut failure_counts: BTreeMap<String, usize> = BTreeMap::new();
    for result in &results {
        if !cert_suite_names.contains(&result.suite_name) {
            continue;
        }
        for verdict in &result.verdicts {
            if verdict.rule_id == LOAD_RULE_ID {
                seen.insert(verdict.subject_id.as_str());
                failure_counts.entry(verdict.subject_id.clone()).or_insert(0);
            } else if !verdict.passed {
                *failure_counts.entry(verdict.subject_id.clone()).or_insert(0) += 1;
            }
        }
    }
    let point_certs: Vec<(String, &Certificate)> = loaded
        .certs
        .iter()
        .filter(|r| seen.contains(r.id.as_str()))
        .filter_map(|r| r.certificate().map(|c| (r.id.clone(), c)))
        .collect();
    let points = analytics::compliance_points(&point_certs, &failure_counts)
        .map_err(|e| e.to_string())?;

    // stdout: TAP and/or summary.
    let mut stdout = String::new();
    if matches!(cli.output, OutputMode::Tap | OutputMode::Both) {
        if cli.aggregate {
            let merged: Vec<_> = results.iter().flat_map(|r| r.verdicts.iter().cloned()).collect();
            stdout.push_str(&emit_tap(&SuiteResult::from_verdicts("aggregate", merged)));
        } else {
            for result in &results {
                stdout.push_str(&format!("# suite: {}\n", result.suite_name));
                stdout.push_str(&emit_tap(result));
            }
        }
    }

    // The summary is certificate analytics; CRL runs stay TAP-only.
    let grouped = group_by_subject(results.iter().filter(|r| r.suite_name != "crl"));
    let report = summarize(&grouped, &default_cause_map());
    if matches!(cli.output, OutputMode::Summary | OutputMode::Both) {
        stdout.push_str(&report.render_text());
        if let Ok(fit) = analytics::linear_fit(&points) {
            stdout.push('\n');
            stdout.push_str(&fit.summary());
            stdout.push('\n');
            for row in analytics::yearly_average(&points) {
                stdout.push_str(&format!(
                    "year {}: mean failures {:.3} over {} certificate(s)\n",
                    row.year, row.mean_failures, row.count
                ));
            }
        }
    }
    print!("{stdout}");

    if let Some(path) = &cli.summary {
        std::fs::write(path, report.to_json())
            .map_err(|e| format!("cannot write summary {}: {e}", path.display()))?;
    }
    if let Some(path) = &cli.csv {
        std::fs::write(path, analytics::points_csv(&points))
            .map_err(|e| format!("cannot write csv {}: {e}", path.display()))?;
    }

    let any_failure = results.iter().any(|r| r.failed > 0);
    Ok(!any_failure)
}
