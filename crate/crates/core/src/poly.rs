//! Multivariate polynomials with rational coefficients over formal
//! variables `t0, t1, ...`.
//!
//! Polynomials form a ring, not a field: determinants over them go through
//! the division-free routines in [`crate::matrix`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{format_rational, Rational, Scalar};

/// Exponent vector, indexed by variable. Trailing zeros are trimmed so that
/// equal monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(v: usize, exp: u32) -> Self {
        let mut e = vec![0; v + 1];
        e[v] = exp;
        Monomial::new(e)
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let e = (0..n)
            .map(|i| self.exponent(i) + other.exponent(i))
            .collect();
        Monomial::new(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::default(), c);
        }
        Poly { terms }
    }

    /// The formal variable `t_v`.
    pub fn var(v: usize) -> Self {
        Poly::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::default())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Number of variable slots referenced (one past the largest index used).
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Evaluates with `values[v]` substituted for `t_v`; missing variables are
    /// treated as zero.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let x = values.get(v).cloned().unwrap_or_else(Rational::zero);
                    term *= num_traits::pow(x, e as usize);
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes `t_v := value`, leaving the other variables formal.
    pub fn substitute(&self, v: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let mut rest = m.0.clone();
            if v < rest.len() {
                rest[v] = 0;
            }
            let coeff = c * num_traits::pow(value.clone(), e as usize);
            out.add_term(Monomial::new(rest), coeff);
        }
        out
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[v] -= 1;
            out.add_term(Monomial::new(exps), c * Rational::from_i64(e as i64));
        }
        out
    }

    /// Coefficients of a univariate polynomial in `t_v`, lowest degree first.
    /// Returns `None` if another variable occurs.
    pub fn univariate_coeffs(&self, v: usize) -> Option<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            if m.degree() != m.exponent(v) {
                return None;
            }
            out[m.exponent(v) as usize] += c;
        }
        Some(out)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, x| !x.is_zero());
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (sign, mag) = if *c < Rational::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| {
                        if e == 1 {
                            format!("t{v}")
                        } else {
                            format!("t{v}^{e}")
                        }
                    })
                    .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
}

impl<'a> Add<&'a Poly> for Poly {
    type Output = Poly;

    fn add(mut self, rhs: &'a Poly) -> Poly {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        self
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(self, rhs: Poly) -> Poly {
        self + &rhs
    }
}

impl<'a> Sub<&'a Poly> for Poly {
    type Output = Poly;

    fn sub(mut self, rhs: &'a Poly) -> Poly {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(self, rhs: Poly) -> Poly {
        self - &rhs
    }
}

impl<'a> Mul<&'a Poly> for Poly {
    type Output = Poly;

    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Scalar for Poly {
    fn from_i64(v: i64) -> Self {
        Poly::constant(Rational::from_i64(v))
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn ring_arithmetic() {
        let t0 = Poly::var(0);
        let t1 = Poly::var(1);
        let p = (t0.clone() + Poly::one()) * (t0.clone() - Poly::one());
        assert_eq!(p, t0.clone() * t0.clone() - Poly::one());
        let q = t0.clone() * t1.clone() - t1.clone() * t0.clone();
        assert!(q.is_zero());
        assert_eq!(p.degree_in(0), 2);
        assert_eq!(p.to_string(), "-1 + t0^2");
    }

    #[test]
    fn evaluation_and_substitution() {
        let t0 = Poly::var(0);
        let t1 = Poly::var(1);
        let p = t0.clone() * t1.clone() * Poly::from_i64(3) + t1.clone();
        assert_eq!(p.eval(&[rat(2, 1), rat(1, 3)]), rat(7, 3));
        let s = p.substitute(1, &rat(1, 3));
        assert_eq!(s, t0.scale(&rat(1, 1)) + Poly::constant(rat(1, 3)));
        assert_eq!(p.derivative(0), t1.scale(&rat(3, 1)));
        assert_eq!(s.univariate_coeffs(0).unwrap(), vec![rat(1, 3), rat(1, 1)]);
        assert!(p.univariate_coeffs(0).is_none());
    }
}
