use std::collections::{BTreeMap, HashMap};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::error::RingError;
use super::table::{same_table, VariableTable};

/// Exponent vector of a Laurent monomial; negative entries are allowed.
///
/// Ordered graded-lexicographically: first by total degree (sum of entries),
/// then entrywise in table order, with the larger exponent ranked higher.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponents(pub Vec<i64>);

impl Exponents {
    pub fn zeros(n: usize) -> Self {
        Exponents(vec![0; n])
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, rhs: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, rhs: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate Laurent polynomial with arbitrary-precision integer
/// coefficients.
///
/// Invariants: no stored coefficient is zero, and every exponent vector has
/// the table's arity. The term map is keyed by the graded-lex order, so the
/// last entry is the leading term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    table: Arc<VariableTable>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(table: &Arc<VariableTable>) -> Self {
        LaurentPolynomial { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(table: &Arc<VariableTable>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponents::zeros(table.arity()), c);
        }
        LaurentPolynomial { table: table.clone(), terms }
    }

    pub fn one(table: &Arc<VariableTable>) -> Self {
        Self::constant(table, 1)
    }

    pub fn monomial(table: &Arc<VariableTable>, exps: Exponents, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.0.len(), table.arity(), "exponent arity mismatch");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPolynomial { table: table.clone(), terms }
    }

    /// The variable `name` to the power `exp`.
    pub fn var_pow(table: &Arc<VariableTable>, name: &str, exp: i64) -> Self {
        let i = table
            .index_of(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in table"));
        let mut exps = Exponents::zeros(table.arity());
        exps.0[i] = exp;
        Self::monomial(table, exps, 1)
    }

    pub fn variable(table: &Arc<VariableTable>, name: &str) -> Self {
        Self::var_pow(table, name, 1)
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map_or(false, |(e, c)| e.is_zero() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.is_zero())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// A unit of Z[v^±] is a single term with coefficient ±1.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
            && self.terms.values().next().map_or(false, |c| c.abs().is_one())
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.leading().map(|(_, c)| c)
    }

    /// The constant-term coefficient (zero if absent).
    pub fn constant_coeff(&self) -> BigInt {
        self.terms
            .get(&Exponents::zeros(self.table.arity()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    fn from_terms(table: Arc<VariableTable>, terms: BTreeMap<Exponents, BigInt>) -> Self {
        LaurentPolynomial { table, terms }
    }

    fn check_table(&self, rhs: &Self) -> Result<(), RingError> {
        if same_table(&self.table, &rhs.table) {
            Ok(())
        } else {
            Err(RingError::TableMismatch)
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check_table(rhs)?;
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            match terms.get_mut(e) {
                Some(acc) => {
                    *acc += c;
                    if acc.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(Self::from_terms(self.table.clone(), terms))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.checked_add(&rhs.clone().neg())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check_table(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        // Single-term fast path: shift exponents and scale.
        if rhs.terms.len() == 1 {
            let (me, mc) = rhs.terms.iter().next().unwrap();
            let terms = self
                .terms
                .iter()
                .map(|(e, c)| (e.add(me), c * mc))
                .collect();
            return Ok(Self::from_terms(self.table.clone(), terms));
        }
        if self.terms.len() == 1 {
            return rhs.checked_mul(self);
        }
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc: HashMap<Exponents, BigInt> =
            HashMap::with_capacity(large.terms.len() * 2);
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                let e = ea.add(eb);
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self::from_terms(self.table.clone(), terms))
    }

    pub fn pow(&self, exp: u64) -> Self {
        if exp == 0 {
            return Self::one(&self.table);
        }
        // Monomial fast path.
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            let exps = Exponents(e.0.iter().map(|x| x * exp as i64).collect());
            return Self::monomial(&self.table, exps, c.pow(exp as u32));
        }
        let mut base = self.clone();
        let mut result = Self::one(&self.table);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect();
        Self::from_terms(self.table.clone(), terms)
    }

    /// Componentwise minimum exponent over all terms (the monomial content
    /// exponent). None for the zero polynomial.
    pub fn min_exponents(&self) -> Option<Exponents> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut min = first.0.clone();
        for e in it {
            for (m, &x) in min.iter_mut().zip(&e.0) {
                if x < *m {
                    *m = x;
                }
            }
        }
        Some(Exponents(min))
    }

    /// Multiply by the monomial v^shift (unit), shifting every exponent.
    pub fn shift_exponents(&self, shift: &Exponents) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.add(shift), c.clone()))
            .collect();
        Self::from_terms(self.table.clone(), terms)
    }

    /// Strip the monomial content: returns `(m, q)` with `self = v^m * q` and
    /// `q` an ordinary polynomial whose per-variable minimum degree is zero.
    pub fn strip_monomial_content(&self) -> (Exponents, Self) {
        match self.min_exponents() {
            None => (Exponents::zeros(self.table.arity()), self.clone()),
            Some(min) => {
                let neg = Exponents(min.0.iter().map(|x| -x).collect());
                (min, self.shift_exponents(&neg))
            }
        }
    }

    /// GCD of all coefficients, non-negative.
    pub fn int_content(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.terms.values() {
            acc = acc.gcd(c);
            if acc.is_one() {
                break;
            }
        }
        acc
    }

    pub fn div_int(&self, c: &BigInt) -> Self {
        assert!(!c.is_zero());
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| {
                let (q, r) = k.div_rem(c);
                assert!(r.is_zero(), "inexact integer division in div_int");
                (e.clone(), q)
            })
            .collect();
        Self::from_terms(self.table.clone(), terms)
    }

    /// Exact division in the Laurent ring: returns `q` with `self = rhs * q`,
    /// or `NotDivisible` carrying the nonzero remainder reached when the
    /// leading-term division first fails.
    pub fn exact_div(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check_table(rhs)?;
        if rhs.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        // Monomial divisor: division is always exact on exponents; only the
        // coefficients can obstruct.
        if rhs.terms.len() == 1 {
            let (me, mc) = rhs.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(mc);
                if !r.is_zero() {
                    return Err(RingError::NotDivisible { remainder: self.to_canonical_string() });
                }
                terms.insert(e.sub(me), q);
            }
            return Ok(Self::from_terms(self.table.clone(), terms));
        }
        // Normalize both to ordinary polynomials, divide, then shift back.
        let (sa, a) = self.strip_monomial_content();
        let (sb, b) = rhs.strip_monomial_content();
        let (ble, blc) = b.leading().expect("divisor nonzero");
        let mut rem = a.terms.clone();
        let mut quo: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        while let Some((re, rc)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe = re.sub(ble);
            if qe.0.iter().any(|&x| x < 0) {
                let witness = Self::from_terms(self.table.clone(), rem);
                return Err(RingError::NotDivisible { remainder: witness.to_canonical_string() });
            }
            let (qc, qr) = rc.div_rem(blc);
            if !qr.is_zero() {
                let witness = Self::from_terms(self.table.clone(), rem);
                return Err(RingError::NotDivisible { remainder: witness.to_canonical_string() });
            }
            // rem -= (qc * v^qe) * b
            for (be, bc) in &b.terms {
                let e = qe.add(be);
                let delta = &qc * bc;
                match rem.get_mut(&e) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&e);
                        }
                    }
                    None => {
                        rem.insert(e, -delta);
                    }
                }
            }
            quo.insert(qe, qc);
        }
        let q = Self::from_terms(self.table.clone(), quo);
        Ok(q.shift_exponents(&sa.sub(&sb)))
    }

    /// True when `rhs` divides `self` exactly.
    pub fn divisible_by(&self, rhs: &Self) -> bool {
        self.exact_div(rhs).is_ok()
    }

    /// Indices of variables that occur with nonzero exponent.
    pub fn vars_present(&self) -> Vec<usize> {
        let n = self.table.arity();
        let mut present = vec![false; n];
        for e in self.terms.keys() {
            for (i, &x) in e.0.iter().enumerate() {
                if x != 0 {
                    present[i] = true;
                }
            }
        }
        (0..n).filter(|&i| present[i]).collect()
    }

    pub fn degree_in(&self, var: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut lo = first.0[var];
        let mut hi = lo;
        for e in it {
            lo = lo.min(e.0[var]);
            hi = hi.max(e.0[var]);
        }
        Some((lo, hi))
    }

    /// Decompose as a polynomial in `var`: map from the `var`-exponent to the
    /// coefficient polynomial (with `var`-exponent zeroed out).
    pub fn coeffs_wrt(&self, var: usize) -> BTreeMap<i64, LaurentPolynomial> {
        let mut out: BTreeMap<i64, BTreeMap<Exponents, BigInt>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.0[var];
            let mut rest = e.clone();
            rest.0[var] = 0;
            out.entry(d).or_default().insert(rest, c.clone());
        }
        out.into_iter()
            .map(|(d, terms)| (d, Self::from_terms(self.table.clone(), terms)))
            .collect()
    }

    /// Rebuild from a `coeffs_wrt`-style decomposition.
    pub fn from_coeffs_wrt(
        table: &Arc<VariableTable>,
        var: usize,
        coeffs: &BTreeMap<i64, LaurentPolynomial>,
    ) -> Self {
        let mut terms = BTreeMap::new();
        for (&d, p) in coeffs {
            for (e, c) in &p.terms {
                let mut e = e.clone();
                e.0[var] += d;
                terms.insert(e, c.clone());
            }
        }
        Self::from_terms(table.clone(), terms)
    }

    /// Evaluate at an integer point. Negative exponents require the assigned
    /// value to be ±1 (the only integers invertible in Z), which covers the
    /// all-ones and sign-flip specializations used by the engines.
    pub fn eval_integers(
        &self,
        value_of: impl Fn(&str) -> Option<BigInt>,
    ) -> Result<BigInt, RingError> {
        let mut values: Vec<Option<BigInt>> = vec![None; self.table.arity()];
        for &i in &self.vars_present() {
            let name = self.table.name(i);
            let v = value_of(name).ok_or_else(|| RingError::MissingAssignment {
                var: name.to_string(),
            })?;
            values[i] = Some(v);
        }
        let mut acc = BigInt::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exps.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values[i].as_ref().expect("present variable evaluated");
                if e < 0 {
                    if v.is_zero() {
                        return Err(RingError::ZeroToNegativePower {
                            var: self.table.name(i).to_string(),
                        });
                    }
                    if !v.abs().is_one() {
                        return Err(RingError::NotDivisible {
                            remainder: format!(
                                "integer point is not invertible at {}",
                                self.table.name(i)
                            ),
                        });
                    }
                    // v = ±1: v^e = v^|e|
                    term *= v.pow(e.unsigned_abs() as u32);
                } else {
                    term *= v.pow(e as u32);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Transport this polynomial onto `target` by renaming variables;
    /// `rename` maps each variable name of `self` that actually occurs to the
    /// corresponding name in `target`.
    pub fn rename_variables(
        &self,
        target: &Arc<VariableTable>,
        rename: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, RingError> {
        let n = self.table.arity();
        let mut index_map: Vec<Option<usize>> = vec![None; n];
        let present = self.vars_present();
        for &i in &present {
            let old = self.table.name(i);
            let new = rename(old).ok_or_else(|| RingError::MissingAssignment { var: old.to_string() })?;
            let j = target
                .index_of(&new)
                .ok_or_else(|| RingError::MissingAssignment { var: new.clone() })?;
            index_map[i] = Some(j);
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut exps = vec![0i64; target.arity()];
            for (i, &x) in e.0.iter().enumerate() {
                if x != 0 {
                    exps[index_map[i].expect("present variable mapped")] += x;
                }
            }
            let prev = terms.insert(Exponents(exps), c.clone());
            assert!(prev.is_none(), "renaming collapsed distinct monomials");
        }
        Ok(Self::from_terms(target.clone(), terms))
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(e, c)| (e, -c)).collect();
        Self::from_terms(self.table, terms)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.clone().neg()
    }
}

// Operator forms panic on table mismatch; the fallible API is checked_*.
impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.checked_add(rhs).expect("table mismatch in +")
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.checked_sub(rhs).expect("table mismatch in -")
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.checked_mul(rhs).expect("table mismatch in *")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}
