//! Multivariate GCD over Z[v1^±, ..., vn^±].
//!
//! Monomial content is stripped first (units of the Laurent ring carry no
//! information), then the ordinary-polynomial GCD runs by integer-content and
//! primitive-part recursion over the variables, with a subresultant pseudo-
//! remainder sequence in the chosen main variable. The result is canonical:
//! zero monomial content and positive leading coefficient, so `gcd` is
//! deterministic rather than merely defined up to a unit.

use num_integer::Integer;
use num_traits::{One, Signed};

use super::error::RingError;
use super::poly::LaurentPolynomial;

impl LaurentPolynomial {
    /// Canonical associate: monomial content stripped, leading coefficient
    /// positive. The zero polynomial is its own canonical form.
    pub fn canonical_associate(&self) -> LaurentPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let (_, mut p) = self.strip_monomial_content();
        if p.leading_coeff().map_or(false, |c| c.is_negative()) {
            p = -p;
        }
        p
    }

    /// Content with respect to one variable: the GCD of the coefficient
    /// polynomials of its powers.
    fn content_wrt(&self, var: usize) -> LaurentPolynomial {
        let coeffs = self.coeffs_wrt(var);
        let mut acc: Option<LaurentPolynomial> = None;
        for (_, c) in coeffs {
            acc = Some(match acc {
                None => c.canonical_associate(),
                Some(g) => gcd_impl(&g, &c),
            });
            if let Some(g) = &acc {
                if g.is_constant() && g.constant_coeff().is_one() {
                    break;
                }
            }
        }
        acc.expect("content of nonzero polynomial")
    }

    fn leading_coeff_wrt(&self, var: usize) -> LaurentPolynomial {
        let coeffs = self.coeffs_wrt(var);
        coeffs.into_iter().next_back().expect("nonzero").1
    }

    fn degree_wrt(&self, var: usize) -> i64 {
        self.degree_in(var).map(|(_, hi)| hi).unwrap_or(0)
    }
}

/// Pseudo-remainder of `f` by `g` with respect to `var`:
/// `lc(g)^(deg f - deg g + 1) * f = q*g + r` with `deg_var r < deg_var g`.
fn pseudo_rem(f: &LaurentPolynomial, g: &LaurentPolynomial, var: usize) -> LaurentPolynomial {
    let table = f.table().clone();
    let dg = g.degree_wrt(var);
    let lc_g = g.leading_coeff_wrt(var);
    let mut r = f.clone();
    let mut scale_left = f.degree_wrt(var) - dg + 1;
    while !r.is_zero() && r.degree_wrt(var) >= dg {
        let dr = r.degree_wrt(var);
        let lc_r = r.leading_coeff_wrt(var);
        let shift = LaurentPolynomial::var_pow(&table, table.name(var), dr - dg);
        // r <- lc_g * r - lc_r * v^(dr-dg) * g
        r = &(&lc_g * &r) - &(&(&lc_r * &shift) * g);
        scale_left -= 1;
    }
    if scale_left > 0 {
        r = &r * &lc_g.pow(scale_left as u64);
    }
    r
}

/// Subresultant PRS GCD of two polynomials primitive with respect to `var`.
///
/// Brown's normalization: with `a` the leading coefficient of the previous
/// divisor and `c` the accumulated subresultant factor, each pseudo-remainder
/// is exactly divisible by `-a*(-c)^delta`.
fn prs_gcd(pa: &LaurentPolynomial, pb: &LaurentPolynomial, var: usize) -> LaurentPolynomial {
    let table = pa.table().clone();
    let (mut f, mut g) = if pa.degree_wrt(var) >= pb.degree_wrt(var) {
        (pa.clone(), pb.clone())
    } else {
        (pb.clone(), pa.clone())
    };
    let one = LaurentPolynomial::one(&table);
    let mut a = one.clone();
    let mut c = one.clone();
    loop {
        let delta = f.degree_wrt(var) - g.degree_wrt(var);
        let r = pseudo_rem(&f, &g, var);
        if r.is_zero() {
            return g;
        }
        let divisor = -(&a * &(-&c).pow(delta as u64));
        let r = r.exact_div(&divisor).expect("subresultant divisor is exact");
        if r.degree_wrt(var) == 0 {
            // A nonzero remainder free of `var` forces the gcd to be free of
            // `var`, and primitive inputs share no content beyond constants.
            return one;
        }
        a = g.leading_coeff_wrt(var);
        c = if delta == 0 {
            c
        } else {
            let num = a.pow(delta as u64);
            let den = c.pow((delta - 1) as u64);
            num.exact_div(&den).expect("subresultant factor update is exact")
        };
        f = g;
        g = r;
    }
}

/// GCD of nonzero ordinary polynomials (all exponents >= 0 assumed for the
/// variables that matter; Laurent stripping happens at the public entry).
fn gcd_impl(a: &LaurentPolynomial, b: &LaurentPolynomial) -> LaurentPolynomial {
    let table = a.table().clone();
    if a == b {
        return a.canonical_associate();
    }
    let ca = a.int_content();
    let cb = b.int_content();
    let c = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return LaurentPolynomial::constant(&table, c);
    }
    let a = a.div_int(&ca);
    let b = b.div_int(&cb);
    let pa_vars = a.vars_present();
    let pb_vars = b.vars_present();
    let common: Vec<usize> = pa_vars
        .iter()
        .copied()
        .filter(|v| pb_vars.contains(v))
        .collect();
    if common.is_empty() {
        // Any common divisor is free of all variables of either operand.
        return LaurentPolynomial::constant(&table, c);
    }
    // Main variable: smallest combined degree keeps the PRS short.
    let var = common
        .iter()
        .copied()
        .min_by_key(|&v| a.degree_wrt(v) + b.degree_wrt(v))
        .unwrap();
    let cont_a = a.content_wrt(var);
    let cont_b = b.content_wrt(var);
    let cont_g = gcd_impl(&cont_a, &cont_b);
    let pa = a.exact_div(&cont_a).expect("content divides");
    let pb = b.exact_div(&cont_b).expect("content divides");
    let g = prs_gcd(&pa, &pb, var);
    // The PRS result of primitive inputs may still carry content in `var`'s
    // coefficient ring; by Gauss's lemma the true gcd is its primitive part.
    let gp = if g.is_constant() {
        LaurentPolynomial::one(&table)
    } else {
        let cont = g.content_wrt(var);
        g.exact_div(&cont).expect("content divides")
    };
    let mut out = &(&gp * &cont_g).canonical_associate() * &LaurentPolynomial::constant(&table, c);
    if out.leading_coeff().map_or(false, |k| k.is_negative()) {
        out = -out;
    }
    out
}

/// Greatest common divisor in the Laurent ring, canonically normalized:
/// monomial content stripped and leading coefficient positive. Errors when
/// both inputs are zero.
pub fn gcd(a: &LaurentPolynomial, b: &LaurentPolynomial) -> Result<LaurentPolynomial, RingError> {
    if a.is_zero() && b.is_zero() {
        return Err(RingError::GcdOfZeros);
    }
    if a.is_zero() {
        return Ok(b.canonical_associate());
    }
    if b.is_zero() {
        return Ok(a.canonical_associate());
    }
    // Units divide everything: gcd is determined by integer contents.
    if a.is_monomial() || b.is_monomial() {
        let g = a.int_content().gcd(&b.int_content());
        return Ok(LaurentPolynomial::constant(a.table(), g));
    }
    let (_, a) = a.strip_monomial_content();
    let (_, b) = b.strip_monomial_content();
    Ok(gcd_impl(&a, &b).canonical_associate())
}

/// True when the canonical gcd is a unit, i.e. the inputs are coprime in the
/// Laurent ring.
pub fn coprime(a: &LaurentPolynomial, b: &LaurentPolynomial) -> Result<bool, RingError> {
    Ok(gcd(a, b)?.is_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::table::VariableTable;
    use std::sync::Arc;

    fn table() -> Arc<VariableTable> {
        VariableTable::new(["x", "y", "z"]).unwrap()
    }

    fn parse(t: &Arc<VariableTable>, s: &str) -> LaurentPolynomial {
        crate::ring::text::parse_canonical(s, t).unwrap()
    }

    #[test]
    fn univariate_gcd() {
        let t = table();
        let a = parse(&t, "x^2 - 1");
        let b = parse(&t, "x^2 - 2*x + 1");
        assert_eq!(gcd(&a, &b).unwrap().to_canonical_string(), "x - 1");
    }

    #[test]
    fn monomial_common_factor_is_a_unit() {
        let t = table();
        let a = parse(&t, "x*y");
        let b = parse(&t, "x*z");
        // x is a unit of the Laurent ring, so the canonical gcd is 1.
        assert_eq!(gcd(&a, &b).unwrap().to_canonical_string(), "1");
    }

    #[test]
    fn integer_content_is_kept() {
        let t = table();
        let a = parse(&t, "2*x + 2");
        let b = parse(&t, "4*x + 4");
        assert_eq!(gcd(&a, &b).unwrap().to_canonical_string(), "2*x + 2");
        let c = parse(&t, "6");
        let d = parse(&t, "4*x");
        assert_eq!(gcd(&c, &d).unwrap().to_canonical_string(), "2");
    }

    #[test]
    fn multivariate_product_factor() {
        let t = table();
        let f = parse(&t, "x + y + 1");
        let g = parse(&t, "x*y + 3");
        let h = parse(&t, "y^2 + x");
        let fg = &f * &g;
        let fh = &f * &h;
        let d = gcd(&fg, &fh).unwrap();
        assert_eq!(d, f.canonical_associate());
    }

    #[test]
    fn zero_handling() {
        let t = table();
        let a = parse(&t, "x + 1");
        let z = LaurentPolynomial::zero(&t);
        assert_eq!(gcd(&a, &z).unwrap(), a.canonical_associate());
        assert_eq!(gcd(&z, &a).unwrap(), a.canonical_associate());
        assert!(matches!(gcd(&z, &z), Err(RingError::GcdOfZeros)));
    }

    #[test]
    fn gcd_divides_both_and_cofactors_are_coprime() {
        let t = table();
        let f = parse(&t, "x^2*y - y - x + 2");
        let g = parse(&t, "x*y^2 + x + y");
        let h = parse(&t, "x - y + 3");
        let a = &f * &h;
        let b = &g * &h;
        let d = gcd(&a, &b).unwrap();
        let qa = a.exact_div(&d).unwrap();
        let qb = b.exact_div(&d).unwrap();
        assert!(coprime(&qa, &qb).unwrap());
        assert!(a.divisible_by(&d) && b.divisible_by(&d));
    }
}
