//! Exact arithmetic in Z[t]/(t^k + 1), the ring of integers extended by a
//! primitive 2k-th root of unity. Reduction uses t^k = -1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::error::RingError;

/// An element of Z[t]/(t^k + 1) in reduced form: `coeffs[i]` multiplies t^i,
/// with exactly k coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientRingElement {
    modulus: usize,
    coeffs: Vec<BigInt>,
}

impl QuotientRingElement {
    pub fn zero(modulus: usize) -> Self {
        assert!(modulus >= 1, "modulus degree must be positive");
        QuotientRingElement { modulus, coeffs: vec![BigInt::zero(); modulus] }
    }

    pub fn constant(modulus: usize, c: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(modulus);
        e.coeffs[0] = c.into();
        e
    }

    pub fn one(modulus: usize) -> Self {
        Self::constant(modulus, 1)
    }

    /// The class of t itself (reduces to -1 when k = 1).
    pub fn t(modulus: usize) -> Self {
        Self::t_pow(modulus, 1)
    }

    /// The class of t^e for any integer exponent, using t^-1 = -t^(k-1).
    pub fn t_pow(modulus: usize, e: i64) -> Self {
        let k = modulus as i64;
        let period = 2 * k;
        let mut r = e.rem_euclid(period);
        let mut sign = BigInt::one();
        if r >= k {
            r -= k;
            sign = -sign;
        }
        let mut out = Self::zero(modulus);
        out.coeffs[r as usize] = sign;
        out
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check(&self, rhs: &Self) -> Result<(), RingError> {
        if self.modulus == rhs.modulus {
            Ok(())
        } else {
            Err(RingError::ModulusMismatch { left: self.modulus, right: rhs.modulus })
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(QuotientRingElement { modulus: self.modulus, coeffs })
    }

    pub fn neg(&self) -> Self {
        QuotientRingElement {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.check(rhs)?;
        let k = self.modulus;
        let mut acc = vec![BigInt::zero(); k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                let d = i + j;
                if d < k {
                    acc[d] += prod;
                } else {
                    acc[d - k] -= prod; // t^k = -1
                }
            }
        }
        Ok(QuotientRingElement { modulus: k, coeffs: acc })
    }

    /// Some(±t^j) decomposition when the element is a signed monomial.
    fn as_monomial(&self) -> Option<(bool, usize)> {
        let mut found = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if found.is_some() || !c.abs().is_one() {
                return None;
            }
            found = Some((c.is_negative(), i));
        }
        found
    }

    /// Inverse of a signed monomial ±t^j; general elements are rejected,
    /// which is all the root-of-unity evaluations require.
    pub fn try_inverse(&self) -> Result<Self, RingError> {
        match self.as_monomial() {
            Some((neg, j)) => {
                let mut inv = Self::t_pow(self.modulus, -(j as i64));
                if neg {
                    inv = inv.neg();
                }
                Ok(inv)
            }
            None => Err(RingError::NotInvertible {
                modulus: self.modulus,
                element: self.to_string(),
            }),
        }
    }

    pub fn pow(&self, exp: i64) -> Result<Self, RingError> {
        if exp < 0 {
            return self.try_inverse()?.pow(-exp);
        }
        let mut result = Self::one(self.modulus);
        let mut base = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }
}

impl fmt::Display for QuotientRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_to_the_k_is_minus_one() {
        for k in 1..6usize {
            let t = QuotientRingElement::t(k);
            let p = t.pow(k as i64).unwrap();
            assert_eq!(p, QuotientRingElement::constant(k, -1));
        }
    }

    #[test]
    fn one_plus_t_to_the_k_vanishes() {
        let k = 2;
        let x = QuotientRingElement::one(k)
            .add(&QuotientRingElement::t(k).pow(k as i64).unwrap())
            .unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn monomial_inverse() {
        let k = 4;
        let t = QuotientRingElement::t(k);
        let inv = t.try_inverse().unwrap();
        assert!(t.mul(&inv).unwrap().is_one());
        let e = QuotientRingElement::t_pow(k, 7).neg();
        assert!(e.mul(&e.try_inverse().unwrap()).unwrap().is_one());
        let bad = QuotientRingElement::one(k).add(&t).unwrap();
        assert!(bad.try_inverse().is_err());
    }

    #[test]
    fn negative_powers_via_monomial_inverse() {
        let k = 3;
        let t = QuotientRingElement::t(k);
        let m = t.pow(-5).unwrap();
        assert!(m.mul(&t.pow(5).unwrap()).unwrap().is_one());
    }
}
