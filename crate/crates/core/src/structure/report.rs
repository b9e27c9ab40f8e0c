use std::fmt;

use super::constants::{compute_eta, compute_zeta, measure_kappa};
use super::departure::{DepartureRegistry, DepartureRequest};
use super::language::LanguageFsa;
use super::multiplier::{build_verified_multiplier, default_k};
use super::verify_language::verify_language;
use crate::error::Result;
use crate::gog::GraphOfGroups;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_len: usize,
    /// Longest words used to measure the fellow-traveller constant.
    pub kappa_len: usize,
    pub r_max: usize,
    pub escalations: usize,
    pub cap: usize,
}

impl VerifyOptions {
    pub fn new(max_len: usize) -> Self {
        VerifyOptions {
            max_len,
            kappa_len: max_len.clamp(1, 7),
            r_max: 3,
            escalations: 3,
            cap: 4_000_000,
        }
    }
}

/// Ordered `KEY=VALUE` records with `PASS`/`FAIL` clauses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub entries: Vec<(String, String)>,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn clause(&mut self, key: impl Into<String>, ok: bool) {
        let key = key.into();
        if !ok {
            self.failures.push(key.clone());
        }
        self.push(key, if ok { "PASS" } else { "FAIL" });
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Runs every check: the language, the constants, both departure methods
/// and a verified multiplier for every letter.
pub fn verify_structure(g: &GraphOfGroups, opts: &VerifyOptions) -> Result<StructureReport> {
    let mut rep = StructureReport::default();
    let a = g.alphabet();
    let lang = LanguageFsa::build(g);
    rep.push("MAX_LEN", opts.max_len);
    rep.push("LANGUAGE.STATES", lang.fsa.state_count());

    let lr = verify_language(g, &lang, opts.max_len, opts.cap)?;
    rep.push("LANGUAGE.ACCEPTED", lr.accepted);
    rep.push("LANGUAGE.ELEMENTS", lr.elements);
    if let Some(c) = lr.counterexample(g) {
        rep.push("LANGUAGE.COUNTEREXAMPLE", c);
    }
    rep.clause("LANGUAGE", lr.passed());

    let eta = compute_eta(g);
    let zeta = compute_zeta(g, eta, opts.cap)?;
    let kr = measure_kappa(g, &lang, opts.kappa_len, opts.cap)?;
    rep.push("ETA", eta);
    rep.push("ZETA", zeta);
    rep.push("KAPPA", kr.kappa());
    rep.push("KAPPA.CHECK_LENGTH", opts.kappa_len);
    rep.clause("KAPPA.STABLE", kr.stabilized());

    let req = DepartureRequest {
        gog: g,
        lang: &lang,
        r_max: opts.r_max,
        cap: opts.cap,
        max_len: opts.max_len,
    };
    let reg = DepartureRegistry::default();
    let exact = reg.compute("exact", &req)?;
    let emp = reg.compute("empirical", &req)?;
    for r in 0..=opts.r_max {
        rep.push(format!("DEPARTURE.{r}"), exact.values[r]);
    }
    for r in 0..=opts.r_max {
        rep.push(format!("DEPARTURE.EMPIRICAL.{r}"), emp.values[r]);
    }
    rep.clause(
        "DEPARTURE",
        exact.is_monotone() && exact.violations_by(&emp).is_empty(),
    );

    let mut all = true;
    for x in a.letters() {
        let k = default_k(g, kr.kappa(), eta, x);
        let (mult, mr) =
            build_verified_multiplier(g, &lang, x, k, opts.escalations, opts.max_len, opts.cap)?;
        let name = a.name(x);
        rep.push(format!("MULTIPLIER.{name}.K"), mr.k);
        rep.push(
            format!("MULTIPLIER.{name}.STATES"),
            mult.automaton.state_count(),
        );
        rep.push(
            format!("MULTIPLIER.{name}.FALSE_ACCEPTS"),
            mr.false_accepts.len(),
        );
        rep.push(
            format!("MULTIPLIER.{name}.FALSE_REJECTS"),
            mr.false_rejects.len(),
        );
        rep.clause(format!("MULTIPLIER.{name}.STATUS"), mr.passed());
        all &= mr.passed();
    }
    rep.clause("MULTIPLIERS", all);
    let ok = rep.passed();
    rep.push("STATUS", if ok { "PASS" } else { "FAIL" });
    Ok(rep)
}
