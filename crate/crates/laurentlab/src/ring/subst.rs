//! Substitution homomorphisms: specializing variables to rational functions
//! over another table, and evaluation in Z[t]/(t^k + 1).

use std::collections::BTreeMap;
use std::collections::HashMap;

use super::error::RingError;
use super::poly::LaurentPolynomial;
use super::quotient::QuotientRingElement;
use super::rational::RationalFunction;

impl LaurentPolynomial {
    /// Homomorphic image of this polynomial under `assignment`, which must
    /// cover every variable that occurs. Negative exponents require the
    /// assigned value to be nonzero.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, RationalFunction>,
    ) -> Result<RationalFunction, RingError> {
        let target = assignment
            .values()
            .next()
            .map(|v| v.table().clone())
            .ok_or_else(|| RingError::MissingAssignment { var: "<any>".into() })?;
        if self.is_zero() {
            return Ok(RationalFunction::from_poly(LaurentPolynomial::zero(&target)));
        }
        let present = self.vars_present();
        let mut values: HashMap<usize, &RationalFunction> = HashMap::new();
        for &i in &present {
            let name = self.table().name(i);
            let value = assignment
                .get(name)
                .ok_or_else(|| RingError::MissingAssignment { var: name.to_string() })?;
            values.insert(i, value);
        }
        // Per-variable power cache; exponents repeat heavily across terms.
        let mut pow_cache: HashMap<(usize, i64), RationalFunction> = HashMap::new();
        let mut acc = RationalFunction::from_poly(LaurentPolynomial::zero(&target));
        for (exps, coeff) in self.terms() {
            let mut term = RationalFunction::from_poly(LaurentPolynomial::constant(
                &target,
                coeff.clone(),
            ));
            for (i, &e) in exps.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let value = values[&i];
                if e < 0 && value.is_zero() {
                    return Err(RingError::ZeroToNegativePower {
                        var: self.table().name(i).to_string(),
                    });
                }
                let powed = match pow_cache.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = value.pow(e)?;
                        pow_cache.insert((i, e), p.clone());
                        p
                    }
                };
                term = term.mul(&powed)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Image of this polynomial in Z[t]/(t^modulus + 1) under `assignment`.
    /// Negative exponents require the assigned value to be an invertible
    /// (signed monomial) element.
    pub fn eval_quotient(
        &self,
        assignment: &BTreeMap<String, QuotientRingElement>,
        modulus: usize,
    ) -> Result<QuotientRingElement, RingError> {
        let mut acc = QuotientRingElement::zero(modulus);
        for (exps, coeff) in self.terms() {
            let mut term = QuotientRingElement::constant(modulus, coeff.clone());
            for (i, &e) in exps.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.table().name(i);
                let value = assignment
                    .get(name)
                    .ok_or_else(|| RingError::MissingAssignment { var: name.to_string() })?;
                term = term.mul(&value.pow(e)?)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl RationalFunction {
    /// Substitute into numerator and denominator and divide; errors when the
    /// denominator specializes to zero.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, RationalFunction>,
    ) -> Result<RationalFunction, RingError> {
        let num = self.numerator().substitute(assignment)?;
        let den = self.denominator().substitute(assignment)?;
        num.div(&den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::table::VariableTable;
    use crate::ring::text::parse_canonical;
    use std::sync::Arc;

    fn ones_assignment(
        table: &Arc<VariableTable>,
        target: &Arc<VariableTable>,
    ) -> BTreeMap<String, RationalFunction> {
        table
            .names()
            .iter()
            .map(|n| (n.clone(), RationalFunction::constant(target, 1)))
            .collect()
    }

    #[test]
    fn all_ones_specialization() {
        let t = VariableTable::new(["x0", "x2", "x4"]).unwrap();
        let target = VariableTable::new(["c"]).unwrap();
        // x4*x0/x2^3 -> 1 at the all-ones point.
        let p = parse_canonical("x4*x0*x2^-3", &t).unwrap();
        let v = p.substitute(&ones_assignment(&t, &target)).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn identity_assignment_is_identity() {
        let t = VariableTable::new(["x", "y"]).unwrap();
        let p = parse_canonical("3*x^2*y^-1 + x - 7", &t).unwrap();
        let id: BTreeMap<String, RationalFunction> = t
            .names()
            .iter()
            .map(|n| (n.clone(), RationalFunction::from_poly(LaurentPolynomial::variable(&t, n))))
            .collect();
        let v = p.substitute(&id).unwrap();
        assert!(v.is_laurent_polynomial());
        assert_eq!(v.numerator(), &p);
    }

    #[test]
    fn zero_into_negative_power_is_an_error() {
        let t = VariableTable::new(["x"]).unwrap();
        let target = VariableTable::new(["c"]).unwrap();
        let p = parse_canonical("x^-1", &t).unwrap();
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), RationalFunction::constant(&target, 0));
        assert!(matches!(
            p.substitute(&a),
            Err(RingError::ZeroToNegativePower { .. })
        ));
    }

    #[test]
    fn missing_assignment_is_an_error() {
        let t = VariableTable::new(["x", "y"]).unwrap();
        let target = VariableTable::new(["c"]).unwrap();
        let p = parse_canonical("x*y", &t).unwrap();
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), RationalFunction::constant(&target, 1));
        assert!(matches!(
            p.substitute(&a),
            Err(RingError::MissingAssignment { .. })
        ));
    }

    #[test]
    fn quotient_evaluation_matches_integer_substitution_for_constants() {
        let t = VariableTable::new(["x", "y"]).unwrap();
        let p = parse_canonical("x^2*y + 3*y - 5", &t).unwrap();
        let k = 4;
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), QuotientRingElement::constant(k, 2));
        a.insert("y".to_string(), QuotientRingElement::constant(k, -3));
        let got = p.eval_quotient(&a, k).unwrap();
        // 4*(-3) + 3*(-3) - 5 = -26
        assert_eq!(got, QuotientRingElement::constant(k, -26));
    }
}
