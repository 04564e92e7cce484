//! Shared verification harness: Laurent-membership predicates, pairwise
//! coprimeness sweeps, round-trip map testing, and structured reporting.
//!
//! Checks are pure; pair sweeps fan out over a rayon pool and are collected
//! back in index order, so reports are deterministic up to timing fields.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::ring::{gcd, LaurentPolynomial, RationalFunction, RingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// The named check suites both engines understand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Laurent,
    Coprime,
    ClosedForm,
    UEquation,
    Roundtrip,
    CSequence,
    Specializations,
    Divisibility,
}

impl SuiteName {
    pub const ALL: [SuiteName; 8] = [
        SuiteName::Laurent,
        SuiteName::Coprime,
        SuiteName::ClosedForm,
        SuiteName::UEquation,
        SuiteName::Roundtrip,
        SuiteName::CSequence,
        SuiteName::Specializations,
        SuiteName::Divisibility,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Laurent => "laurent",
            SuiteName::Coprime => "coprime",
            SuiteName::ClosedForm => "closed-form",
            SuiteName::UEquation => "u-equation",
            SuiteName::Roundtrip => "roundtrip",
            SuiteName::CSequence => "c-sequence",
            SuiteName::Specializations => "specializations",
            SuiteName::Divisibility => "divisibility",
        }
    }
}

impl std::str::FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteName::ALL
            .iter()
            .find(|n| n.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown check suite `{s}`"))
    }
}

/// One pass/fail record. Failing records always carry a witness in canonical
/// grammar (a remainder, a non-unit gcd, or the two mismatched sides).
#[derive(Debug, Clone, Serialize)]
pub struct VerificationRecord {
    #[serde(rename = "checkId")]
    pub check_id: String,
    pub subject: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(rename = "elapsedMs")]
    pub elapsed_ms: u128,
}

impl VerificationRecord {
    pub fn pass(check_id: impl Into<String>, subject: impl Into<String>, elapsed: Duration) -> Self {
        VerificationRecord {
            check_id: check_id.into(),
            subject: subject.into(),
            status: CheckStatus::Pass,
            witness: None,
            elapsed_ms: elapsed.as_millis(),
        }
    }

    pub fn fail(
        check_id: impl Into<String>,
        subject: impl Into<String>,
        witness: impl Into<String>,
        elapsed: Duration,
    ) -> Self {
        VerificationRecord {
            check_id: check_id.into(),
            subject: subject.into(),
            status: CheckStatus::Fail,
            witness: Some(witness.into()),
            elapsed_ms: elapsed.as_millis(),
        }
    }

    pub fn skipped(
        check_id: impl Into<String>,
        subject: impl Into<String>,
        reason: impl Into<String>,
    ) -> Self {
        VerificationRecord {
            check_id: check_id.into(),
            subject: subject.into(),
            status: CheckStatus::Skipped,
            witness: Some(reason.into()),
            elapsed_ms: 0,
        }
    }

    pub fn from_result(
        check_id: impl Into<String>,
        subject: impl Into<String>,
        outcome: Result<(), String>,
        elapsed: Duration,
    ) -> Self {
        match outcome {
            Ok(()) => Self::pass(check_id, subject, elapsed),
            Err(witness) => Self::fail(check_id, subject, witness, elapsed),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

/// A full suite run: config echo, the individual records, and tallies.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub engine: String,
    pub config: serde_json::Value,
    pub version: String,
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(
        engine: impl Into<String>,
        config: serde_json::Value,
        records: Vec<VerificationRecord>,
    ) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                CheckStatus::Pass => summary.pass += 1,
                CheckStatus::Fail => summary.fail += 1,
                CheckStatus::Skipped => summary.skipped += 1,
            }
        }
        SuiteReport {
            schema: 1,
            engine: engine.into(),
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            records,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {} verification report\n\n{} pass, {} fail, {} skipped\n\n",
            self.engine, self.summary.pass, self.summary.fail, self.summary.skipped
        ));
        out.push_str("| check | subject | status | witness | ms |\n");
        out.push_str("|---|---|---|---|---|\n");
        for r in &self.records {
            let status = match r.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "fail",
                CheckStatus::Skipped => "skipped",
            };
            let mut witness = r.witness.clone().unwrap_or_default();
            if witness.len() > 120 {
                witness.truncate(117);
                witness.push_str("...");
            }
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                r.check_id, r.subject, status, witness, r.elapsed_ms
            ));
        }
        out
    }
}

/// Divide `p` by each factor to exhaustion, in declared order. Returns the
/// fully stripped polynomial and the exponent removed for each factor. The
/// factors used by the engines are pairwise coprime non-units, so the result
/// does not depend on the order.
pub fn strip_factors(
    p: &LaurentPolynomial,
    factors: &[LaurentPolynomial],
) -> (LaurentPolynomial, Vec<u64>) {
    let mut current = p.clone();
    let mut exps = vec![0u64; factors.len()];
    if current.is_zero() {
        return (current, exps);
    }
    for (i, f) in factors.iter().enumerate() {
        loop {
            match current.exact_div(f) {
                Ok(q) => {
                    current = q;
                    exps[i] += 1;
                }
                Err(_) => break,
            }
        }
    }
    (current, exps)
}

/// Extended-Laurent membership: pass iff the reduced denominator is a unit
/// times a product of powers of the allowed factors.
pub fn check_monomial_denominator(
    check_id: &str,
    subject: &str,
    value: &RationalFunction,
    allowed: &[LaurentPolynomial],
) -> VerificationRecord {
    let start = Instant::now();
    let (residue, _) = strip_factors(value.denominator(), allowed);
    if residue.is_unit() {
        VerificationRecord::pass(check_id, subject, start.elapsed())
    } else {
        VerificationRecord::fail(
            check_id,
            subject,
            residue.to_canonical_string(),
            start.elapsed(),
        )
    }
}

fn unit_gcd(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
) -> Result<Option<LaurentPolynomial>, RingError> {
    if a.is_unit() || b.is_unit() || a.is_zero() || b.is_zero() {
        return Ok(None);
    }
    let g = gcd(a, b)?;
    Ok(if g.is_unit() { None } else { Some(g) })
}

/// Pairwise coprimeness sweep over an indexed family of rational functions.
///
/// For every unordered pair not excluded by the predicate, all four cross
/// gcds between {numerator, denominator} of the two values must be units.
/// The exclusion predicate encodes a theorem's distance condition at the
/// call site.
pub fn check_pairwise_coprime(
    check_id: &str,
    items: &[(String, RationalFunction)],
    exclude: impl Fn(&str, &str) -> bool + Sync,
) -> Vec<VerificationRecord> {
    let mut pairs = Vec::new();
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            if !exclude(&items[i].0, &items[j].0) {
                pairs.push((i, j));
            }
        }
    }
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let start = Instant::now();
            let (name_a, a) = &items[i];
            let (name_b, b) = &items[j];
            let subject = format!("{name_a} ~ {name_b}");
            let components = [
                (a.numerator(), b.numerator()),
                (a.numerator(), b.denominator()),
                (a.denominator(), b.numerator()),
                (a.denominator(), b.denominator()),
            ];
            for (p, q) in components {
                match unit_gcd(p, q) {
                    Ok(None) => {}
                    Ok(Some(g)) => {
                        return VerificationRecord::fail(
                            check_id,
                            subject,
                            g.to_canonical_string(),
                            start.elapsed(),
                        )
                    }
                    Err(e) => {
                        return VerificationRecord::fail(
                            check_id,
                            subject,
                            e.to_string(),
                            start.elapsed(),
                        )
                    }
                }
            }
            VerificationRecord::pass(check_id, subject, start.elapsed())
        })
        .collect()
}

/// Verify that two substitution maps are mutually inverse on the given
/// generators: `bwd(fwd(v)) = v` for every key of `fwd`. Call again with the
/// arguments swapped for the other direction. Generators whose image mentions
/// a variable the other map does not cover (window boundary) are skipped.
pub fn check_round_trip(
    check_id: &str,
    fwd: &BTreeMap<String, RationalFunction>,
    bwd: &BTreeMap<String, RationalFunction>,
) -> Vec<VerificationRecord> {
    let mut records = Vec::new();
    for (name, image) in fwd {
        let start = Instant::now();
        let covered = image
            .numerator()
            .vars_present()
            .iter()
            .chain(image.denominator().vars_present().iter())
            .all(|&i| bwd.contains_key(image.table().name(i)));
        if !covered {
            records.push(VerificationRecord::skipped(
                check_id,
                name,
                "image leaves the mapped window",
            ));
            continue;
        }
        let record = match image.substitute(bwd) {
            Ok(back) => {
                let expected = RationalFunction::from_poly(LaurentPolynomial::variable(
                    back.table(),
                    name,
                ));
                if back == expected {
                    VerificationRecord::pass(check_id, name, start.elapsed())
                } else {
                    VerificationRecord::fail(check_id, name, back.to_string(), start.elapsed())
                }
            }
            Err(e) => VerificationRecord::fail(check_id, name, e.to_string(), start.elapsed()),
        };
        records.push(record);
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_canonical, VariableTable};
    use std::sync::Arc;

    fn table() -> Arc<VariableTable> {
        VariableTable::new(["x4", "f0", "u2"]).unwrap()
    }

    fn poly(t: &Arc<VariableTable>, s: &str) -> LaurentPolynomial {
        parse_canonical(s, t).unwrap()
    }

    #[test]
    fn monomial_denominator_examples() {
        let t = table();
        let f0 = poly(&t, "f0 + 1"); // stand-in extension factor
        let allowed = [f0.clone()];
        let den = &poly(&t, "x4^2") * &f0.pow(3);
        let v = RationalFunction::new(poly(&t, "u2"), den).unwrap();
        let rec = check_monomial_denominator("laurent", "ok", &v, &allowed);
        assert!(rec.passed());
        let bad = RationalFunction::new(poly(&t, "u2"), poly(&t, "x4 + 1")).unwrap();
        let rec = check_monomial_denominator("laurent", "bad", &bad, &allowed);
        assert!(!rec.passed());
        assert_eq!(rec.witness.as_deref(), Some("x4 + 1"));
    }

    #[test]
    fn pairwise_coprime_catches_shared_factor() {
        let t = table();
        let p = poly(&t, "x4 + 1");
        let q = poly(&t, "f0 + 2");
        let items = vec![
            ("p".to_string(), RationalFunction::from_poly(p.clone())),
            ("pq".to_string(), RationalFunction::from_poly(&p * &q)),
            ("q".to_string(), RationalFunction::from_poly(q.clone())),
        ];
        let recs = check_pairwise_coprime("coprime", &items, |_, _| false);
        assert_eq!(recs.len(), 3);
        let failures: Vec<_> = recs.iter().filter(|r| !r.passed()).collect();
        assert_eq!(failures.len(), 2);
        assert_eq!(failures[0].witness.as_deref(), Some("x4 + 1"));
    }

    #[test]
    fn exclusion_predicate_is_honored() {
        let t = table();
        let p = poly(&t, "x4 + 1");
        let items = vec![
            ("a".to_string(), RationalFunction::from_poly(p.clone())),
            ("b".to_string(), RationalFunction::from_poly(p)),
        ];
        let recs = check_pairwise_coprime("coprime", &items, |x, y| x == "a" && y == "b");
        assert!(recs.is_empty());
    }

    #[test]
    fn identity_round_trip() {
        let t = table();
        let id: BTreeMap<String, RationalFunction> = t
            .names()
            .iter()
            .map(|n| {
                (
                    n.clone(),
                    RationalFunction::from_poly(LaurentPolynomial::variable(&t, n)),
                )
            })
            .collect();
        let recs = check_round_trip("roundtrip", &id, &id);
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.passed()));
    }

    #[test]
    fn strip_factors_reports_exponents() {
        let t = table();
        let f = poly(&t, "x4 + 1");
        let g = poly(&t, "f0 - 1");
        let p = &(&f.pow(2) * &g) * &poly(&t, "3*u2^-2");
        let (rest, exps) = strip_factors(&p, &[f, g]);
        assert_eq!(exps, vec![2, 1]);
        assert_eq!(rest.to_canonical_string(), "3*u2^-2");
    }

    #[test]
    fn reports_are_deterministic_and_counted() {
        let t = table();
        let items = vec![(
            "x".to_string(),
            RationalFunction::from_poly(poly(&t, "x4 + 1")),
        )];
        let run = || {
            let recs = check_pairwise_coprime("coprime", &items, |_, _| false);
            SuiteReport::new("somos", serde_json::json!({"k": 1}), recs)
        };
        let a = run();
        let b = run();
        assert_eq!(a.summary.pass, b.summary.pass);
        let strip = |s: &SuiteReport| {
            s.records
                .iter()
                .map(|r| (r.check_id.clone(), r.subject.clone(), r.status))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.summary.pass + a.summary.fail + a.summary.skipped, a.records.len());
    }
}
