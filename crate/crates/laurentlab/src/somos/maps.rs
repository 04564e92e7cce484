//! Changes of variables for the extended Somos-4 system.
//!
//! Three charts are connected here:
//!  * the ring chart `{x4..x7, f0, f1, g0, g1}` used by the engine,
//!  * the initial-data chart `{x0..x7}` used by the oracle,
//!  * the nonlinear chart `{x0..x3, u2..u5}` in which iterates factor as a
//!    monomial in x0..x3 times an element of `Z[u_j^±, (u_j - 1)^±]`.
//!
//! The last factorization is computed by expressing u_n (n >= 6) through the
//! nonlinear recurrence and multiplying the resulting rational functions;
//! membership in the extended ring is then certified by stripping the
//! (u_j - 1) factors and demanding a trivial residue. Each (u_j - 1) is
//! tracked as a formal invertible variable w_j in the returned polynomial.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::checks::strip_factors;
use crate::ring::{
    Exponents, LaurentPolynomial, RationalFunction, RingError, VariableTable,
};

use super::{SomosEngine, SomosError};

/// Variables of the nonlinear chart.
pub const U_CHART_VARS: [&str; 8] = ["x0", "x1", "x2", "x3", "u2", "u3", "u4", "u5"];
/// Formal table for elements of Z[u^±, (u-1)^±]; w_j stands for u_j - 1.
pub const TILDE_VARS: [&str; 8] = ["u2", "u3", "u4", "u5", "w2", "w3", "w4", "w5"];

/// An element of Z[u_j^±, (u_j - 1)^±] in canonical split form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeForm {
    /// Full value over the tilde table (w_j = u_j - 1 as formal units).
    pub poly: LaurentPolynomial,
    /// The unit-free part: no monomial content, no w factors; coprimeness of
    /// two tilde forms is coprimeness of their cores.
    pub core: LaurentPolynomial,
}

impl SomosEngine {
    /// x0..x7 expressed over the ring chart (x4..x7 map to themselves,
    /// x0..x3 are the seeded inverse images).
    pub fn forward_map(&self) -> BTreeMap<String, RationalFunction> {
        (0..8)
            .map(|n| {
                (
                    format!("x{n}"),
                    RationalFunction::from_poly(self.x(n).clone()),
                )
            })
            .collect()
    }

    /// Ring generators expressed over the initial-data chart:
    /// x4..x7 map to themselves and
    ///
    /// ```text
    /// f0 = (x4*x0 - x2^k)/(x3^m*x1^l)    f1 = (x6*x2 - x4^k)/(x5^m*x3^l)
    /// g0 = (x5*x1 - x3^k)/(x4^m*x2^l)    g1 = (x7*x3 - x5^k)/(x6^m*x4^l)
    /// ```
    pub fn backward_map(&self) -> BTreeMap<String, RationalFunction> {
        let t = self.oracle_table();
        let (k, l, m) = (
            self.params().k as u64,
            self.params().l as i64,
            self.params().m as i64,
        );
        let v = |n: usize| LaurentPolynomial::variable(t, &format!("x{n}"));
        let vp = |n: usize, e: i64| LaurentPolynomial::var_pow(t, &format!("x{n}"), e);
        let entry = |hi: usize, lo: usize, mid: usize, dm: usize, dl: usize| {
            let num = (&v(hi) * &v(lo))
                .checked_sub(&v(mid).pow(k))
                .expect("same table");
            RationalFunction::from_poly(&num * &(&vp(dm, -m) * &vp(dl, -l)))
        };
        let mut map = BTreeMap::new();
        for n in 4..8 {
            map.insert(
                format!("x{n}"),
                RationalFunction::from_poly(v(n)),
            );
        }
        map.insert("f0".into(), entry(4, 0, 2, 3, 1));
        map.insert("g0".into(), entry(5, 1, 3, 4, 2));
        map.insert("f1".into(), entry(6, 2, 4, 5, 3));
        map.insert("g1".into(), entry(7, 3, 5, 6, 4));
        map
    }

    /// Ring generators over the nonlinear chart {x0..x3, u2..u5}; together
    /// with `forward_map` this factors every iterate through the u-variables.
    pub fn u_chart_map(&self) -> BTreeMap<String, RationalFunction> {
        let t = VariableTable::new(U_CHART_VARS).expect("static table");
        let (k, l, m) = (
            self.params().k as i64,
            self.params().l as i64,
            self.params().m as i64,
        );
        let vp = |name: &str, e: i64| LaurentPolynomial::var_pow(&t, name, e);
        let var = |name: &str| LaurentPolynomial::variable(&t, name);
        let minus_one =
            |name: &str| var(name).checked_sub(&LaurentPolynomial::one(&t)).unwrap();
        let mut map = BTreeMap::new();
        // x4 = x2^k u2 / x0, x5 = x3^k u3 / x1,
        // x6 = x2^(k^2-1) u2^k u4 / x0^k, x7 = x3^(k^2-1) u3^k u5 / x1^k.
        map.insert(
            "x4".into(),
            RationalFunction::from_poly(&(&vp("x2", k) * &var("u2")) * &vp("x0", -1)),
        );
        map.insert(
            "x5".into(),
            RationalFunction::from_poly(&(&vp("x3", k) * &var("u3")) * &vp("x1", -1)),
        );
        map.insert(
            "x6".into(),
            RationalFunction::from_poly(
                &(&(&vp("x2", k * k - 1) * &vp("u2", k)) * &var("u4")) * &vp("x0", -k),
            ),
        );
        map.insert(
            "x7".into(),
            RationalFunction::from_poly(
                &(&(&vp("x3", k * k - 1) * &vp("u3", k)) * &var("u5")) * &vp("x1", -k),
            ),
        );
        // f0 = x2^k (u2-1) / (x3^m x1^l)
        map.insert(
            "f0".into(),
            RationalFunction::from_poly(
                &(&vp("x2", k) * &minus_one("u2")) * &(&vp("x3", -m) * &vp("x1", -l)),
            ),
        );
        // f1 = x2^(k^2) x1^m u2^k (u4-1) / (u3^m x3^(km+l) x0^k)
        map.insert(
            "f1".into(),
            RationalFunction::new(
                &(&(&vp("x2", k * k) * &vp("x1", m)) * &vp("u2", k)) * &minus_one("u4"),
                &(&vp("u3", m) * &vp("x3", k * m + l)) * &vp("x0", k),
            )
            .expect("nonzero denominator"),
        );
        // g0 = x3^k x0^m (u3-1) / (x2^(mk+l) u2^m)
        map.insert(
            "g0".into(),
            RationalFunction::new(
                &(&vp("x3", k) * &vp("x0", m)) * &minus_one("u3"),
                &vp("x2", m * k + l) * &vp("u2", m),
            )
            .expect("nonzero denominator"),
        );
        // g1 = x3^(k^2) x2^m x0^(mk+l) u3^k (u5-1) / (x1^k x2^(k(mk+l)) u2^(mk+l) u4^m)
        map.insert(
            "g1".into(),
            RationalFunction::new(
                &(&(&(&vp("x3", k * k) * &vp("x2", m)) * &vp("x0", m * k + l)) * &vp("u3", k))
                    * &minus_one("u5"),
                &(&(&vp("x1", k) * &vp("x2", k * (m * k + l))) * &vp("u2", m * k + l))
                    * &vp("u4", m),
            )
            .expect("nonzero denominator"),
        );
        map
    }

    /// The nonlinear iterate u_n = x[n+2]*x[n-2]/x[n]^k over the ring chart.
    pub fn u_from_x(&mut self, n: usize) -> Result<RationalFunction, SomosError> {
        assert!(n >= 2, "u_n defined for n >= 2");
        self.ensure(n + 2)?;
        let num = &self.x(n + 2).clone() * &self.x(n - 2).clone();
        let den = self.x(n).pow(self.params().k as u64);
        Ok(RationalFunction::new(num, den)?)
    }
}


/// The nonlinear u-chart machinery: u-iterates as rational functions of
/// u2..u5, and the tilde factorization of x-iterates.
///
/// The factorization is computed by pushing each ring-chart iterate through
/// the generator images term by term. Every generator image is a Laurent
/// monomial of {x0..x3, u2..u5} times at most one factor (u_j - 1), so a
/// monomial of the ring chart maps to a monomial times a product of
/// (u_j - 1)-powers (of either sign) and no rational-function reduction is
/// ever needed. The x-dependence of the accumulated sum must collapse to a
/// single monomial prefactor; its failure to do so, or a residual
/// denominator after stripping the (u_j - 1) factors, is a violation of the
/// extended-ring membership.
pub struct USystem {
    k: i64,
    l: i64,
    m: i64,
    chart_table: Arc<VariableTable>,
    u_table: Arc<VariableTable>,
    tilde_table: Arc<VariableTable>,
    /// Route-b cache: u_n as reduced rational functions of u2..u5.
    us: Vec<RationalFunction>,
    /// (u_j - 1) over the u-table, j = 2..5.
    minus_ones: [LaurentPolynomial; 4],
    /// (u_j - 1) over the chart table.
    chart_minus_ones: [LaurentPolynomial; 4],
    /// Unit-form images of the eight ring generators over the chart table:
    /// exponent vector plus the (u_j - 1)-exponent quadruple.
    images: Vec<(Exponents, [i64; 4])>,
    /// Cache of expanded products of (u_j - 1)-powers over the chart table.
    expand_cache: std::collections::HashMap<[i64; 4], LaurentPolynomial>,
}

impl USystem {
    pub fn new(params: super::SomosParams) -> Self {
        let chart_table = VariableTable::new(U_CHART_VARS).expect("static table");
        let u_table = VariableTable::new(["u2", "u3", "u4", "u5"]).expect("static table");
        let tilde_table = VariableTable::new(TILDE_VARS).expect("static table");
        let us = (2..=5)
            .map(|j| {
                RationalFunction::from_poly(LaurentPolynomial::variable(
                    &u_table,
                    &format!("u{j}"),
                ))
            })
            .collect();
        let mk_minus = |t: &Arc<VariableTable>, j: usize| {
            LaurentPolynomial::variable(t, &format!("u{j}"))
                .checked_sub(&LaurentPolynomial::one(t))
                .unwrap()
        };
        let minus_ones = [
            mk_minus(&u_table, 2),
            mk_minus(&u_table, 3),
            mk_minus(&u_table, 4),
            mk_minus(&u_table, 5),
        ];
        let chart_minus_ones = [
            mk_minus(&chart_table, 2),
            mk_minus(&chart_table, 3),
            mk_minus(&chart_table, 4),
            mk_minus(&chart_table, 5),
        ];
        let (k, l, m) = (params.k as i64, params.l as i64, params.m as i64);
        let idx = |name: &str| chart_table.index_of(name).unwrap();
        let mono = |entries: &[(&str, i64)]| {
            let mut e = Exponents::zeros(chart_table.arity());
            for &(name, exp) in entries {
                e.0[idx(name)] += exp;
            }
            e
        };
        // Images of x4..x7, f0, f1, g0, g1 in ring-table order.
        let images = vec![
            // x4 = x2^k u2 / x0
            (mono(&[("x2", k), ("u2", 1), ("x0", -1)]), [0, 0, 0, 0]),
            // x5 = x3^k u3 / x1
            (mono(&[("x3", k), ("u3", 1), ("x1", -1)]), [0, 0, 0, 0]),
            // x6 = x2^(k^2-1) u2^k u4 / x0^k
            (
                mono(&[("x2", k * k - 1), ("u2", k), ("u4", 1), ("x0", -k)]),
                [0, 0, 0, 0],
            ),
            // x7 = x3^(k^2-1) u3^k u5 / x1^k
            (
                mono(&[("x3", k * k - 1), ("u3", k), ("u5", 1), ("x1", -k)]),
                [0, 0, 0, 0],
            ),
            // f0 = x2^k (u2-1) / (x3^m x1^l)
            (mono(&[("x2", k), ("x3", -m), ("x1", -l)]), [1, 0, 0, 0]),
            // f1 = x2^(k^2) x1^m u2^k (u4-1) / (u3^m x3^(km+l) x0^k)
            (
                mono(&[
                    ("x2", k * k),
                    ("x1", m),
                    ("u2", k),
                    ("u3", -m),
                    ("x3", -(k * m + l)),
                    ("x0", -k),
                ]),
                [0, 0, 1, 0],
            ),
            // g0 = x3^k x0^m (u3-1) / (x2^(mk+l) u2^m)
            (
                mono(&[("x3", k), ("x0", m), ("x2", -(m * k + l)), ("u2", -m)]),
                [0, 1, 0, 0],
            ),
            // g1 = x3^(k^2) x2^m x0^(mk+l) u3^k (u5-1)
            //      / (x1^k x2^(k(mk+l)) u2^(mk+l) u4^m)
            (
                mono(&[
                    ("x3", k * k),
                    ("x2", m - k * (m * k + l)),
                    ("x0", m * k + l),
                    ("u3", k),
                    ("x1", -k),
                    ("u2", -(m * k + l)),
                    ("u4", -m),
                ]),
                [0, 0, 0, 1],
            ),
        ];
        USystem {
            k: params.k as i64,
            l: params.l as i64,
            m: params.m as i64,
            chart_table,
            u_table,
            tilde_table,
            us,
            minus_ones,
            chart_minus_ones,
            images,
            expand_cache: std::collections::HashMap::new(),
        }
    }

    pub fn u_table(&self) -> &Arc<VariableTable> {
        &self.u_table
    }

    pub fn tilde_table(&self) -> &Arc<VariableTable> {
        &self.tilde_table
    }

    pub fn chart_table(&self) -> &Arc<VariableTable> {
        &self.chart_table
    }

    /// u_n as a reduced rational function of u2..u5 via the nonlinear
    /// recurrence
    ///
    /// ```text
    /// u[n] = 1 + (u[n-2]-1)^k u[n-1]^m u[n-3]^l / (u[n-2]^k (u[n-4]-1)),
    /// ```
    ///
    /// kept as the independent cross-check route; reduction cost grows
    /// quickly, so callers stay at small n.
    pub fn u(&mut self, n: usize) -> Result<RationalFunction, RingError> {
        assert!(n >= 2);
        while self.us.len() <= n - 2 {
            let next = self.us.len() + 2;
            let u2 = &self.us[next - 4]; // u[n-2]
            let u1 = &self.us[next - 3]; // u[n-1]
            let u3 = &self.us[next - 5]; // u[n-3]
            let u4 = &self.us[next - 6]; // u[n-4]
            let num = u2
                .minus_one()?
                .pow(self.k)?
                .mul(&u1.pow(self.m)?)?
                .mul(&u3.pow(self.l)?)?;
            let den = u2.pow(self.k)?.mul(&u4.minus_one()?)?;
            let one = RationalFunction::from_poly(LaurentPolynomial::one(&self.u_table));
            let value = one.add(&num.div(&den)?)?;
            self.us.push(value);
        }
        Ok(self.us[n - 2].clone())
    }

    /// Expanded `prod_j (u_j - 1)^w[j]` over the chart table, w >= 0.
    fn expand_minus_ones(&mut self, w: [i64; 4]) -> LaurentPolynomial {
        if let Some(p) = self.expand_cache.get(&w) {
            return p.clone();
        }
        let mut p = LaurentPolynomial::one(&self.chart_table);
        for (j, &e) in w.iter().enumerate() {
            debug_assert!(e >= 0);
            if e > 0 {
                p = &p * &self.chart_minus_ones[j].pow(e as u64);
            }
        }
        self.expand_cache.insert(w, p.clone());
        p
    }

    /// Factor x_n over the nonlinear chart: returns the monomial prefactor in
    /// x0..x3 together with the tilde form, certifying that the rest of the
    /// iterate lies in Z[u_j^±, (u_j - 1)^±].
    pub fn xi_tilde(
        &mut self,
        engine: &mut SomosEngine,
        n: usize,
    ) -> Result<XiFactorization, SomosError> {
        assert!(n >= 4);
        engine.ensure(n)?;
        let source = engine.x(n).clone();
        // Per-term image data: chart monomial and (u_j - 1)-exponents.
        let mut terms: Vec<(Exponents, [i64; 4], num_bigint::BigInt)> = Vec::new();
        let mut w_floor = [0i64; 4];
        for (exps, coeff) in source.terms() {
            let mut mono = Exponents::zeros(self.chart_table.arity());
            let mut w = [0i64; 4];
            for (g, &e) in exps.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (ref gm, gw) = self.images[g];
                for (slot, &x) in mono.0.iter_mut().zip(&gm.0) {
                    *slot += x * e;
                }
                for j in 0..4 {
                    w[j] += gw[j] * e;
                }
            }
            for j in 0..4 {
                w_floor[j] = w_floor[j].min(w[j]);
            }
            terms.push((mono, w, coeff.clone()));
        }
        // Common denominator: (u_j - 1)^(-w_floor); numerator accumulates
        // each term times the expanded surplus powers.
        let mut acc = LaurentPolynomial::zero(&self.chart_table);
        for (mono, w, coeff) in terms {
            let surplus = [
                w[0] - w_floor[0],
                w[1] - w_floor[1],
                w[2] - w_floor[2],
                w[3] - w_floor[3],
            ];
            let expanded = self.expand_minus_ones(surplus);
            let term = expanded
                .shift_exponents(&mono)
                .scale(&coeff);
            acc = acc.checked_add(&term).expect("same table");
        }
        // The x-dependence must collapse into the monomial content.
        let (mono, stripped) = acc.strip_monomial_content();
        let x_indices: Vec<usize> = (0..4)
            .map(|i| self.chart_table.index_of(&format!("x{i}")).unwrap())
            .collect();
        let residual_x: Vec<usize> = stripped
            .vars_present()
            .into_iter()
            .filter(|v| x_indices.contains(v))
            .collect();
        if !residual_x.is_empty() {
            return Err(SomosError::LaurentViolation {
                subject: format!("xi~{n} x-prefactor"),
                source: RingError::NotDivisible {
                    remainder: stripped.to_canonical_string(),
                },
            });
        }
        // Minimize the (u_j - 1)-denominator against the numerator.
        let (core_chart, wplus) = strip_factors(&stripped, &self.chart_minus_ones);
        let mut w_net = [0i64; 4];
        for j in 0..4 {
            w_net[j] = wplus[j] as i64 + w_floor[j];
        }
        let mut x_prefactor = [0i64; 4];
        let mut u_shift = [0i64; 4];
        for (i, &xi) in x_indices.iter().enumerate() {
            x_prefactor[i] = mono.0[xi];
        }
        for j in 0..4 {
            let ui = self.chart_table.index_of(&format!("u{}", j + 2)).unwrap();
            u_shift[j] = mono.0[ui];
        }
        // Embed into the tilde table.
        let embed = |p: &LaurentPolynomial, with_units: bool| -> LaurentPolynomial {
            let mut out = LaurentPolynomial::zero(&self.tilde_table);
            for (e, c) in p.terms() {
                let mut exps = vec![0i64; 8];
                for j in 0..4 {
                    let ui = self.chart_table.index_of(&format!("u{}", j + 2)).unwrap();
                    exps[j] = e.0[ui];
                    if with_units {
                        exps[j] += u_shift[j];
                        exps[4 + j] = w_net[j];
                    }
                }
                out = out
                    .checked_add(&LaurentPolynomial::monomial(
                        &self.tilde_table,
                        Exponents(exps),
                        c.clone(),
                    ))
                    .expect("same table");
            }
            out
        };
        let poly = embed(&core_chart, true);
        let core = embed(&core_chart, false).canonical_associate();
        Ok(XiFactorization {
            x_prefactor,
            tilde: TildeForm { poly, core },
        })
    }

    /// Route-b tilde form from the u-recurrence only: the product
    /// `prod_(j=1..i) u[n-2j]^a(j)` converted to the tilde table. Feasible at
    /// small n; the substitution route is the production path.
    pub fn xi_tilde_recursive(
        &mut self,
        engine: &mut SomosEngine,
        n: usize,
    ) -> Result<TildeForm, SomosError> {
        assert!(n >= 4);
        let i = if n % 2 == 0 { (n - 2) / 2 } else { (n - 3) / 2 };
        let mut acc = RationalFunction::from_poly(LaurentPolynomial::one(&self.u_table));
        for j in 1..=i {
            let exp = engine.a(j as i64);
            if exp == 0 {
                continue;
            }
            let factor = self.u(n - 2 * j).map_err(SomosError::Ring)?.pow(exp)?;
            acc = acc.mul(&factor)?;
        }
        self.to_tilde(&acc)
    }

    /// Convert a rational function of u2..u5 into the tilde representation,
    /// certifying membership in Z[u^±, (u-1)^±].
    pub fn to_tilde(&self, value: &RationalFunction) -> Result<TildeForm, SomosError> {
        let (num_res, num_w) = strip_factors(value.numerator(), &self.minus_ones);
        let (den_res, den_w) = strip_factors(value.denominator(), &self.minus_ones);
        let (num_mono, num_core) = num_res.strip_monomial_content();
        let (den_mono, den_unit) = den_res.strip_monomial_content();
        if !den_unit.is_unit() {
            return Err(SomosError::LaurentViolation {
                subject: "tilde membership".into(),
                source: RingError::NotDivisible {
                    remainder: den_unit.to_canonical_string(),
                },
            });
        }
        let sign_negative = den_unit
            .leading_coeff()
            .map_or(false, |c| c < &num_bigint::BigInt::from(0));
        let mut u_shift = vec![0i64; 8];
        for i in 0..4 {
            u_shift[i] = num_mono.0[i] - den_mono.0[i];
            u_shift[4 + i] = num_w[i] as i64 - den_w[i] as i64;
        }
        let embed = |p: &LaurentPolynomial, shift: &[i64]| -> LaurentPolynomial {
            let mut out = LaurentPolynomial::zero(&self.tilde_table);
            for (e, c) in p.terms() {
                let mut exps = vec![0i64; 8];
                for i in 0..4 {
                    exps[i] = e.0[i] + shift[i];
                }
                for i in 4..8 {
                    exps[i] = shift[i];
                }
                out = out
                    .checked_add(&LaurentPolynomial::monomial(
                        &self.tilde_table,
                        Exponents(exps),
                        c.clone(),
                    ))
                    .expect("same table");
            }
            out
        };
        let mut core_full = num_core;
        if sign_negative {
            core_full = -core_full;
        }
        let poly = embed(&core_full, &u_shift);
        let core = embed(&core_full, &[0; 8]).canonical_associate();
        Ok(TildeForm { poly, core })
    }
}

/// Result of factoring an iterate over the nonlinear chart.
#[derive(Debug, Clone)]
pub struct XiFactorization {
    /// Exponents of the x0..x3 monomial prefactor, in that order; for even n
    /// this is x2^a(i+1) x0^(-a(i)), for odd n the x3/x1 analogue.
    pub x_prefactor: [i64; 4],
    pub tilde: TildeForm,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::somos::{SomosEngine, SomosParams};

    fn engine(k: u32, l: u32, m: u32) -> SomosEngine {
        SomosEngine::new(SomosParams::new(k, l, m).unwrap())
    }

    #[test]
    fn backward_f0_vanishes_at_all_ones() {
        let e = engine(2, 1, 1);
        let f0 = &e.backward_map()["f0"];
        let v = f0.numerator().eval_integers(|_| Some(1.into())).unwrap();
        assert_eq!(v, 0.into());
    }

    #[test]
    fn forward_x3_matches_the_inverse_display() {
        // x3 = (x4^l x6^m g1 + x5^k) / x7
        let e = engine(2, 1, 1);
        let x3 = &e.forward_map()["x3"];
        let expected = crate::ring::parse_canonical(
            "x4*x6*x7^-1*g1 + x5^2*x7^-1",
            e.ring_table(),
        )
        .unwrap();
        assert!(x3.is_laurent_polynomial());
        assert_eq!(x3.numerator(), &expected);
    }

    #[test]
    fn u_recurrence_reproduces_generators() {
        let mut u = USystem::new(SomosParams::new(2, 1, 1).unwrap());
        for j in 2..=5 {
            let v = u.u(j).unwrap();
            assert!(v.is_laurent_polynomial());
            assert_eq!(v.numerator().to_canonical_string(), format!("u{j}"));
        }
        // u6 is a genuine rational function with (u2 - 1) in the denominator.
        let u6 = u.u(6).unwrap();
        assert!(!u6.is_laurent_polynomial());
    }

    #[test]
    fn unit_images_agree_with_the_rational_chart_map() {
        let e = engine(2, 1, 2);
        let mut usys = USystem::new(e.params());
        let map = e.u_chart_map();
        for (g, name) in super::super::RING_VARS.iter().enumerate() {
            let (mono, w) = usys.images[g].clone();
            let mut surplus = [0i64; 4];
            let mut floor = [0i64; 4];
            for j in 0..4 {
                if w[j] >= 0 {
                    surplus[j] = w[j];
                } else {
                    floor[j] = -w[j];
                }
            }
            let num = usys
                .expand_minus_ones(surplus)
                .shift_exponents(&mono);
            let den = usys.expand_minus_ones(floor);
            let rebuilt = RationalFunction::new(num, den).unwrap();
            assert_eq!(&rebuilt, &map[*name], "image of {name}");
        }
    }

    #[test]
    fn xi_tilde_smallest_cases() {
        // xi~_4 = u2 with prefactor x2^k/x0; xi~_6 = u2^k u4; odd analogues.
        let mut e = engine(2, 1, 1);
        let mut u = USystem::new(e.params());
        let x4 = u.xi_tilde(&mut e, 4).unwrap();
        assert_eq!(x4.tilde.poly.to_canonical_string(), "u2");
        assert_eq!(x4.x_prefactor, [-1, 0, 2, 0]); // x0^-1 x2^k
        let x6 = u.xi_tilde(&mut e, 6).unwrap();
        assert_eq!(x6.tilde.poly.to_canonical_string(), "u2^2*u4");
        assert_eq!(x6.x_prefactor, [-2, 0, 3, 0]); // x0^-a(2) x2^a(3)
        let x5 = u.xi_tilde(&mut e, 5).unwrap();
        assert_eq!(x5.tilde.poly.to_canonical_string(), "u3");
        let x7 = u.xi_tilde(&mut e, 7).unwrap();
        assert_eq!(x7.tilde.poly.to_canonical_string(), "u3^2*u5");
    }

    #[test]
    fn xi_tilde_prefactor_follows_the_a_sequence() {
        let mut e = engine(2, 1, 1);
        let mut u = USystem::new(e.params());
        for n in (4..=12).step_by(2) {
            let i = (n - 2) / 2;
            let xf = u.xi_tilde(&mut e, n).unwrap();
            let hi = e.a(i as i64 + 1);
            let lo = e.a(i as i64);
            assert_eq!(xf.x_prefactor, [-lo, 0, hi, 0], "n={n}");
        }
    }

    #[test]
    fn xi_tilde_membership_holds_to_depth_twelve() {
        for (k, l, m) in [(1, 1, 1), (2, 1, 1)] {
            let mut e = engine(k, l, m);
            let mut u = USystem::new(e.params());
            for n in 4..=12 {
                let t = u.xi_tilde(&mut e, n);
                assert!(t.is_ok(), "(k,l,m)=({k},{l},{m}) n={n}");
            }
        }
    }

    #[test]
    fn substitution_and_recurrence_routes_agree() {
        for (k, l, m) in [(1, 1, 1), (2, 1, 1), (1, 2, 2)] {
            let mut e = engine(k, l, m);
            let mut u = USystem::new(e.params());
            for n in 4..=9 {
                let by_subst = u.xi_tilde(&mut e, n).unwrap();
                let by_rec = u.xi_tilde_recursive(&mut e, n).unwrap();
                assert_eq!(
                    by_subst.tilde.poly, by_rec.poly,
                    "(k,l,m)=({k},{l},{m}) n={n}"
                );
            }
        }
    }
}
