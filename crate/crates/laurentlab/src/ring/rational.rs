use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use super::error::RingError;
use super::gcd::gcd;
use super::poly::{Exponents, LaurentPolynomial};
use super::table::VariableTable;

/// A reduced ratio of Laurent polynomials.
///
/// Canonical form: numerator and denominator share no non-unit factor, the
/// denominator is an ordinary polynomial with zero monomial content and
/// positive leading coefficient (any monomial part is folded into the
/// numerator, which may therefore carry negative exponents). Normalization is
/// idempotent, so equality of values is structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: LaurentPolynomial,
    den: LaurentPolynomial,
}

impl RationalFunction {
    pub fn new(num: LaurentPolynomial, den: LaurentPolynomial) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        if num.is_zero() {
            let table = num.table().clone();
            return Ok(RationalFunction {
                num,
                den: LaurentPolynomial::one(&table),
            });
        }
        let g = gcd(&num, &den)?;
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        // Fold the denominator's unit part into the numerator.
        let (shift, den_poly) = den.strip_monomial_content();
        den = den_poly;
        if !shift.is_zero() {
            let neg = Exponents(shift.0.iter().map(|x| -x).collect());
            num = num.shift_exponents(&neg);
        }
        if den.leading_coeff().map_or(false, |c| c.is_negative()) {
            num = -num;
            den = -den;
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: LaurentPolynomial) -> Self {
        let one = LaurentPolynomial::one(p.table());
        RationalFunction { num: p, den: one }
    }

    /// Assemble from parts already known to be coprime and canonical
    /// (denominator an ordinary polynomial, zero monomial content, positive
    /// leading coefficient). Used by engines that track factored forms.
    pub(crate) fn from_coprime_parts(num: LaurentPolynomial, den: LaurentPolynomial) -> Self {
        debug_assert!(!den.is_zero());
        debug_assert!(
            den.min_exponents().map_or(true, |m| m.is_zero()),
            "denominator must be monomial-content-free"
        );
        debug_assert!(den.leading_coeff().map_or(false, |c| !c.is_negative()));
        RationalFunction { num, den }
    }

    pub fn constant(table: &Arc<VariableTable>, c: impl Into<num_bigint::BigInt>) -> Self {
        Self::from_poly(LaurentPolynomial::constant(table, c))
    }

    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPolynomial {
        &self.den
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        self.num.table()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial (denominator 1 after
    /// normalization, which absorbs monomial denominators).
    pub fn is_laurent_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, RingError> {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Self::new(num, &self.den * &rhs.den)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, RingError> {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        Self::new(num, &self.den * &rhs.den)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, RingError> {
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, RingError> {
        if rhs.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn inverse(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, exp: i64) -> Result<Self, RingError> {
        if exp < 0 {
            return self.inverse()?.pow(-exp);
        }
        // Components are already coprime, so no reduction can occur.
        Ok(RationalFunction {
            num: self.num.pow(exp as u64),
            den: self.den.pow(exp as u64).canonical_positive(),
        })
    }

    /// Subtract 1; a frequent step when exclusion factors u - 1 are involved.
    pub fn minus_one(&self) -> Result<Self, RingError> {
        Self::new(&self.num - &self.den, self.den.clone())
    }
}

impl LaurentPolynomial {
    /// Positive-leading-coefficient associate without touching the monomial
    /// content; used to keep powers of canonical denominators canonical.
    fn canonical_positive(self) -> Self {
        if self.leading_coeff().map_or(false, |c| c.is_negative()) {
            -self
        } else {
            self
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::text::parse_canonical;

    fn table() -> Arc<VariableTable> {
        VariableTable::new(["x", "y"]).unwrap()
    }

    fn rf(t: &Arc<VariableTable>, num: &str, den: &str) -> RationalFunction {
        RationalFunction::new(
            parse_canonical(num, t).unwrap(),
            parse_canonical(den, t).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn reduces_on_construction() {
        let t = table();
        let v = rf(&t, "x^2 - 1", "x - 1");
        assert!(v.is_laurent_polynomial());
        assert_eq!(v.numerator().to_canonical_string(), "x + 1");
    }

    #[test]
    fn monomial_denominator_folds_into_numerator() {
        let t = table();
        let v = rf(&t, "x + 1", "x");
        assert!(v.is_laurent_polynomial());
        assert_eq!(v.numerator().to_canonical_string(), "1 + x^-1");
    }

    #[test]
    fn normalization_is_idempotent() {
        let t = table();
        let v = rf(&t, "2*x*y + 2*y", "4*y^2 - 4*x*y");
        let again = RationalFunction::new(v.numerator().clone(), v.denominator().clone()).unwrap();
        assert_eq!(v, again);
        assert!(v.denominator().leading_coeff().unwrap() > &0.into());
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let t = table();
        let z = LaurentPolynomial::zero(&t);
        let one = LaurentPolynomial::one(&t);
        assert!(matches!(
            RationalFunction::new(one, z),
            Err(RingError::ZeroDenominator)
        ));
    }

    #[test]
    fn field_arithmetic() {
        let t = table();
        let a = rf(&t, "x", "y");
        let b = rf(&t, "y", "x");
        let s = a.add(&b).unwrap();
        assert_eq!(s, rf(&t, "x^2 + y^2", "x*y"));
        let p = a.mul(&b).unwrap();
        assert!(p.is_one());
        let q = a.div(&a).unwrap();
        assert!(q.is_one());
        let inv = a.inverse().unwrap();
        assert_eq!(inv, b);
        assert_eq!(a.pow(-2).unwrap(), b.pow(2).unwrap());
    }
}
