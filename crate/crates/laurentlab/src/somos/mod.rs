//! Extended Somos-4 engine.
//!
//! The dynamical system is the pair of interleaved recurrences
//!
//! ```text
//! x[n] * x[n-4] = x[n-2]^k + F[n-4] * x[n-1]^m * x[n-3]^l
//! ```
//!
//! where `F[2i] = f1^a(i) / f0^a(i-1)` and `F[2i+1] = g1^a(i) / g0^a(i-1)`
//! are Laurent monomials in the four extension generators, with the integer
//! sequence `a(i+1) = k*a(i) - a(i-1)`, `a(-1) = -1`, `a(0) = 0`. All
//! arithmetic happens in the eight-generator ring
//! `R = Z[x4^±, x5^±, x6^±, x7^±, f0^±, f1^±, g0^±, g1^±]`; the division by
//! `x[n-4]` is performed exactly and a failure is a Laurent-property
//! violation, reported with the remainder as witness.

mod maps;
mod oracle;
mod verify;

pub use maps::TildeForm;
pub use oracle::SomosOracle;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::ring::{Exponents, LaurentPolynomial, RingError, VariableTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SomosParams {
    pub k: u32,
    pub l: u32,
    pub m: u32,
}

impl SomosParams {
    pub fn new(k: u32, l: u32, m: u32) -> Result<Self, String> {
        if k == 0 || l == 0 || m == 0 {
            return Err("exponents k, l, m must be positive".into());
        }
        Ok(SomosParams { k, l, m })
    }
}

#[derive(Debug, Clone, Error)]
pub enum SomosError {
    #[error("Laurent violation at {subject}: {source}")]
    LaurentViolation {
        subject: String,
        #[source]
        source: RingError,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Names of the ring generators, in canonical table order.
pub const RING_VARS: [&str; 8] = ["x4", "x5", "x6", "x7", "f0", "f1", "g0", "g1"];
/// Names of the initial-data chart used by the brute-force oracle.
pub const ORACLE_VARS: [&str; 8] = ["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"];

pub struct SomosEngine {
    params: SomosParams,
    ring_table: Arc<VariableTable>,
    oracle_table: Arc<VariableTable>,
    /// x[n] in R for n = 0.., where x[0..=3] are the inverse-map images and
    /// x[4..=7] are the generator monomials. Append-only.
    xs: Vec<LaurentPolynomial>,
    /// a(i) cached with offset 1: a_cache[0] = a(-1).
    a_cache: Vec<i64>,
    /// c[n] for n >= 4 cached at index n - 4.
    c_cache: Vec<BigInt>,
    /// Negative-control hook: doubles the F-term of the recurrence.
    mutated: bool,
}

impl SomosEngine {
    pub fn new(params: SomosParams) -> Self {
        Self::build(params, false)
    }

    /// Engine with one recurrence coefficient deliberately perturbed
    /// (the F-term is doubled); the Laurent property must then fail.
    pub fn with_mutation(params: SomosParams) -> Self {
        Self::build(params, true)
    }

    fn build(params: SomosParams, mutated: bool) -> Self {
        let ring_table = VariableTable::new(RING_VARS).expect("static table");
        let oracle_table = VariableTable::new(ORACLE_VARS).expect("static table");
        let mut engine = SomosEngine {
            params,
            ring_table,
            oracle_table,
            xs: Vec::new(),
            a_cache: vec![-1, 0],
            c_cache: Vec::new(),
            mutated,
        };
        engine.seed_initial_iterates();
        engine
    }

    pub fn params(&self) -> SomosParams {
        self.params
    }

    pub fn ring_table(&self) -> &Arc<VariableTable> {
        &self.ring_table
    }

    pub fn oracle_table(&self) -> &Arc<VariableTable> {
        &self.oracle_table
    }

    pub fn is_mutated(&self) -> bool {
        self.mutated
    }

    fn var(&self, name: &str) -> LaurentPolynomial {
        LaurentPolynomial::variable(&self.ring_table, name)
    }

    fn var_pow(&self, name: &str, e: i64) -> LaurentPolynomial {
        LaurentPolynomial::var_pow(&self.ring_table, name, e)
    }

    /// x0..x3 solved from the extension-generator definitions, in the order
    /// x3, x2, x1, x0; each is a Laurent polynomial of the generators because
    /// the divisor is a single variable.
    fn seed_initial_iterates(&mut self) {
        let (k, l, m) = (self.params.k as u64, self.params.l as u64, self.params.m as u64);
        let x4 = self.var("x4");
        let x5 = self.var("x5");
        // x3 = (x4^l x6^m g1 + x5^k) / x7
        let x3 = &(&(&self.var_pow("x4", l as i64) * &self.var_pow("x6", m as i64))
            * &self.var("g1"))
            .checked_add(&x5.pow(k))
            .expect("same table")
            * &self.var_pow("x7", -1);
        // x2 = (x5^m x3^l f1 + x4^k) / x6
        let x2 = &(&(&self.var_pow("x5", m as i64) * &x3.pow(l)) * &self.var("f1"))
            .checked_add(&x4.pow(k))
            .expect("same table")
            * &self.var_pow("x6", -1);
        // x1 = (x2^l x4^m g0 + x3^k) / x5
        let x1 = &(&(&x2.pow(l) * &self.var_pow("x4", m as i64)) * &self.var("g0"))
            .checked_add(&x3.pow(k))
            .expect("same table")
            * &self.var_pow("x5", -1);
        // x0 = (x3^m x1^l f0 + x2^k) / x4
        let x0 = &(&(&x3.pow(m) * &x1.pow(l)) * &self.var("f0"))
            .checked_add(&x2.pow(k))
            .expect("same table")
            * &self.var_pow("x4", -1);
        let x6 = self.var("x6");
        let x7 = self.var("x7");
        self.xs = vec![x0, x1, x2, x3, x4, x5, x6, x7];
    }

    /// a(i) for i >= -1.
    pub fn a(&mut self, i: i64) -> i64 {
        assert!(i >= -1, "a(i) defined for i >= -1");
        let idx = (i + 1) as usize;
        while self.a_cache.len() <= idx {
            let n = self.a_cache.len();
            let next = self.params.k as i64 * self.a_cache[n - 1] - self.a_cache[n - 2];
            self.a_cache.push(next);
        }
        self.a_cache[idx]
    }

    /// Closed-form monomial for F[n]: `f1^a(i)/f0^a(i-1)` when n = 2i, and
    /// the g-analogue when n = 2i + 1.
    pub fn f_closed_form(&mut self, n: i64) -> LaurentPolynomial {
        assert!(n >= 0);
        let i = n / 2;
        let (hi, lo) = if n % 2 == 0 { ("f1", "f0") } else { ("g1", "g0") };
        let ai = self.a(i);
        let ai1 = self.a(i - 1);
        &self.var_pow(hi, ai) * &self.var_pow(lo, -ai1)
    }

    /// Extend the iterate cache up to index `n` inclusive.
    pub fn ensure(&mut self, n: usize) -> Result<(), SomosError> {
        while self.xs.len() <= n {
            let next = self.xs.len();
            let p = self.step(next)?;
            self.xs.push(p);
        }
        Ok(())
    }

    fn step(&mut self, n: usize) -> Result<LaurentPolynomial, SomosError> {
        debug_assert!(n >= 8);
        let (k, l, m) = (self.params.k, self.params.l, self.params.m);
        let coeff = self.f_closed_form(n as i64 - 4);
        let a = self.xs[n - 2].pow(k as u64);
        let mut b = &coeff * &(&self.xs[n - 1].pow(m as u64) * &self.xs[n - 3].pow(l as u64));
        if self.mutated && n == 12 {
            // Corrupting the coefficient of one step (the first that divides
            // by a genuine polynomial) is guaranteed to break exactness: with
            // x8..x11 untouched, the numerator's residue modulo x8 becomes a
            // unit multiple of the F-term, never zero. A uniform rescaling
            // would be absorbed by the non-autonomous freedom instead.
            b = b.scale(&BigInt::from(2));
        }
        let numerator = a.checked_add(&b).expect("same table");
        numerator
            .exact_div(&self.xs[n - 4])
            .map_err(|source| SomosError::LaurentViolation {
                subject: format!("x{n}"),
                source,
            })
    }

    /// The cached iterate x[n]; call `ensure(n)` first.
    pub fn x(&self, n: usize) -> &LaurentPolynomial {
        &self.xs[n]
    }

    pub fn computed_up_to(&self) -> usize {
        self.xs.len() - 1
    }

    /// Value of x[n] when every generator is set to 1 (the c-sequence),
    /// computed by the integer recurrence
    /// `c[n+1] = (c[n-1]^k + c[n]^m * c[n-2]^l) / c[n-3]`, `c[4..=7] = 1`.
    /// The division must be exact over the integers.
    pub fn c(&mut self, n: usize) -> BigInt {
        assert!(n >= 4, "c(n) defined for n >= 4");
        let (k, l, m) = (self.params.k, self.params.l, self.params.m);
        while self.c_cache.len() <= n - 4 {
            let idx = self.c_cache.len();
            let value = if idx < 4 {
                BigInt::one()
            } else {
                let c_n2 = &self.c_cache[idx - 2]; // c[n-2]
                let c_n1 = &self.c_cache[idx - 1]; // c[n-1]
                let c_n3 = &self.c_cache[idx - 3]; // c[n-3]
                let c_n4 = &self.c_cache[idx - 4]; // c[n-4]
                let num = c_n2.pow(k) + c_n1.pow(m) * c_n3.pow(l);
                let (q, r) = num_integer::Integer::div_rem(&num, c_n4);
                assert!(
                    r == BigInt::from(0),
                    "non-integer c-sequence quotient at n = {}",
                    idx + 4
                );
                q
            };
            self.c_cache.push(value);
        }
        self.c_cache[n - 4].clone()
    }

    /// Evaluate a ring-chart polynomial at the all-ones point.
    pub fn eval_at_ones(&self, p: &LaurentPolynomial) -> Result<BigInt, RingError> {
        p.eval_integers(|_| Some(BigInt::one()))
    }

    /// Monomial over the ring table from (variable index, exponent) pairs.
    pub fn generator_monomial(&self, exps: &[(usize, i64)]) -> LaurentPolynomial {
        let mut e = Exponents::zeros(self.ring_table.arity());
        for &(i, x) in exps {
            e.0[i] = x;
        }
        LaurentPolynomial::monomial(&self.ring_table, e, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_canonical;

    fn engine(k: u32, l: u32, m: u32) -> SomosEngine {
        SomosEngine::new(SomosParams::new(k, l, m).unwrap())
    }

    #[test]
    fn rejects_zero_exponents() {
        assert!(SomosParams::new(0, 1, 1).is_err());
        assert!(SomosParams::new(1, 0, 1).is_err());
        assert!(SomosParams::new(1, 1, 0).is_err());
    }

    #[test]
    fn a_sequence_initial_terms() {
        let mut e = engine(2, 1, 1);
        assert_eq!(e.a(-1), -1);
        assert_eq!(e.a(0), 0);
        assert_eq!(e.a(1), 1);
        assert_eq!(e.a(2), 2); // k
        assert_eq!(e.a(3), 3); // k^2 - 1
        let mut e3 = engine(3, 1, 1);
        assert_eq!(e3.a(3), 8); // k^2 - 1
        assert_eq!(e3.a(4), 21); // k^3 - 2k
    }

    #[test]
    fn f_closed_form_small_indices() {
        let mut e = engine(2, 1, 1);
        // F[0] = f0 (a(0) = 0, a(-1) = -1)
        assert_eq!(e.f_closed_form(0).to_canonical_string(), "f0");
        // F[2] = f1
        assert_eq!(e.f_closed_form(2).to_canonical_string(), "f1");
        // F[4] = f1^k / f0 with k = 2, matching F[n+4] = F[n+2]^k / F[n]
        assert_eq!(e.f_closed_form(4).to_canonical_string(), "f0^-1*f1^2");
        // odd side: F[1] = g0, F[3] = g1
        assert_eq!(e.f_closed_form(1).to_canonical_string(), "g0");
        assert_eq!(e.f_closed_form(3).to_canonical_string(), "g1");
    }

    #[test]
    fn closed_form_satisfies_its_recurrence() {
        // F[n+4] * F[n] = F[n+2]^k as monomials, for both parities.
        for (k, l, m) in [(1, 1, 1), (2, 1, 1), (3, 2, 2)] {
            let mut e = engine(k, l, m);
            for n in 0..=12 {
                let lhs = &e.f_closed_form(n + 4) * &e.f_closed_form(n);
                let rhs = e.f_closed_form(n + 2).pow(k as u64);
                assert_eq!(lhs, rhs, "(k,l,m)=({k},{l},{m}) n={n}");
            }
        }
    }

    #[test]
    fn generators_are_their_own_iterates() {
        let e = engine(2, 1, 1);
        for (n, name) in (4..=7).zip(["x4", "x5", "x6", "x7"]) {
            assert_eq!(e.x(n).to_canonical_string(), name);
        }
    }

    #[test]
    fn x8_matches_the_displayed_formula() {
        let mut e = engine(2, 1, 1);
        e.ensure(8).unwrap();
        let expected =
            parse_canonical("x6^2*x4^-1 + x5*x7*x4^-1*f0^-1*f1^2", e.ring_table()).unwrap();
        assert_eq!(e.x(8), &expected);
    }

    #[test]
    fn x8_is_degree_one_in_inverse_f0_with_coprime_parts() {
        let mut e = engine(2, 1, 1);
        e.ensure(8).unwrap();
        let f0 = e.ring_table().index_of("f0").unwrap();
        let coeffs = e.x(8).coeffs_wrt(f0);
        let degrees: Vec<i64> = coeffs.keys().copied().collect();
        assert_eq!(degrees, vec![-1, 0]);
        let lo = &coeffs[&-1];
        let hi = &coeffs[&0];
        assert!(crate::ring::coprime(lo, hi).unwrap());
    }

    #[test]
    fn all_ones_chain_matches_c_sequence() {
        let mut e = engine(2, 1, 1);
        e.ensure(14).unwrap();
        let expected: Vec<i64> = vec![2, 3, 7, 23, 59, 314, 1529];
        for (n, want) in (8..=14).zip(expected) {
            let got = e.eval_at_ones(e.x(n)).unwrap();
            assert_eq!(got, BigInt::from(want), "x{n} at all-ones");
            assert_eq!(e.c(n), BigInt::from(want), "c({n})");
        }
    }

    #[test]
    fn c_sequence_golden_values() {
        let mut e = engine(1, 1, 1);
        assert_eq!(e.c(8), BigInt::from(2));
        assert_eq!(e.c(9), BigInt::from(3)); // 1 + 2^m
        assert_eq!(e.c(14), BigInt::from(111));
        assert_eq!(e.c(15), BigInt::from(191));
        for m in 1..=4u32 {
            let mut em = engine(1, 2, m);
            assert_eq!(em.c(8), BigInt::from(2));
            assert_eq!(em.c(9), BigInt::from(1 + 2i64.pow(m)));
        }
    }

    #[test]
    fn c_sequence_is_strictly_increasing() {
        for (k, l, m) in [(1, 1, 1), (2, 1, 1), (2, 2, 2), (3, 1, 2)] {
            let mut e = engine(k, l, m);
            let mut prev = e.c(8);
            for n in 9..=20 {
                let next = e.c(n);
                assert!(next > prev, "(k,l,m)=({k},{l},{m}) n={n}");
                prev = next;
            }
        }
    }

    #[test]
    fn recomputation_reproduces_cached_values() {
        let mut a = engine(2, 2, 2);
        a.ensure(12).unwrap();
        let mut b = engine(2, 2, 2);
        b.ensure(12).unwrap();
        for n in 0..=12 {
            assert_eq!(a.x(n), b.x(n));
        }
    }

    #[test]
    fn mutated_engine_violates_the_laurent_property() {
        let mut e = SomosEngine::with_mutation(SomosParams::new(2, 1, 1).unwrap());
        let err = e.ensure(14).unwrap_err();
        match err {
            SomosError::LaurentViolation { subject, source } => {
                assert_eq!(subject, "x12");
                assert!(matches!(source, RingError::NotDivisible { .. }));
            }
            other => panic!("expected LaurentViolation, got {other}"),
        }
    }

    #[test]
    fn laurent_property_holds_at_desk_scale() {
        for (k, l, m) in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)] {
            let mut e = engine(k, l, m);
            e.ensure(14).unwrap();
        }
    }
}
