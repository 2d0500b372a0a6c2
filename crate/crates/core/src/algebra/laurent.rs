//! Laurent polynomials in the quantum parameter `q` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::rational::{format_rational, int, parse_rational, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Element of Q[q, 1/q]. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QLaurent {
    terms: BTreeMap<i64, Rational>,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn q() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn monomial(c: Rational, power: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (p, c) in terms {
            out.add_term(p, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn coeff(&self, power: i64) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// The constant term, if the polynomial has no other term.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, power: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, v)| (*p, v * c)).collect(),
        }
    }

    /// The derivation `q d/dq`.
    pub fn q_d_dq(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, c)| (*p, c * int(*p))))
    }

    /// The derivation `d/dq`.
    pub fn d_dq(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, c)| (p - 1, c * int(*p))))
    }

    pub fn eval(&self, q: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (p, c) in &self.terms {
            let pw = if *p >= 0 {
                num_traits::pow(q.clone(), *p as usize)
            } else {
                num_traits::pow(q.recip(), (-p) as usize)
            };
            acc += c * pw;
        }
        acc
    }

    /// Substitutes `q -> c * q`.
    pub fn rescale_q(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, v)| {
            let f = if *p >= 0 {
                num_traits::pow(c.clone(), *p as usize)
            } else {
                num_traits::pow(c.recip(), (-p) as usize)
            };
            (*p, v * f)
        }))
    }

    /// Substitutes `q -> q^(1/k)`; every exponent must be divisible by `k`.
    pub fn divide_exponents(&self, k: i64) -> Option<Self> {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            if p % k != 0 {
                return None;
            }
            out.add_term(p / k, c);
        }
        Some(out)
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, c)| (p + k, c.clone())).collect(),
        }
    }

    /// A unit of Q[q, 1/q] is a nonzero monomial.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (p, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.recip(), -p))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(p, c)| json!([p, format_rational(c)]))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("q-Laurent polynomial must be a list".into()))?;
        let mut out = Self::zero();
        for pair in arr {
            let p = pair
                .get(0)
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("bad q power".into()))?;
            let c = match pair.get(1) {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(n)) => parse_rational(&n.to_string())?,
                _ => return Err(Error::Parse("bad q coefficient".into())),
            };
            out.add_term(p, &c);
        }
        Ok(out)
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match *p {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if *p == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{p}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(*p, c);
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(*p, &-c);
        }
        out
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (p1, c1) in &self.terms {
            for (p2, c2) in &rhs.terms {
                out.add_term(p1 + p2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: QLaurent) -> QLaurent {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Ring for QLaurent {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        QLaurent::scale(self, c)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.unit_inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn arb_laurent() -> impl Strategy<Value = QLaurent> {
        prop::collection::vec((-3i64..4, -5i64..6, 1i64..4), 0..5).prop_map(|v| {
            QLaurent::from_terms(v.into_iter().map(|(p, n, d)| (p, rat(n, d))))
        })
    }

    #[test]
    fn arithmetic_and_display() {
        let a = &QLaurent::q() + &QLaurent::from_int(2);
        let b = &QLaurent::q() - &QLaurent::from_int(2);
        assert_eq!((&a * &b).to_string(), "-4 + q^2");
        assert!((&a - &a).is_zero());
        assert_eq!(QLaurent::monomial(rat(-1, 2), -1).to_string(), "-1/2*q^-1");
    }

    #[test]
    fn derivations() {
        let p = QLaurent::from_terms([(3, int(2)), (-1, int(1))]);
        assert_eq!(p.q_d_dq(), QLaurent::from_terms([(3, int(6)), (-1, int(-1))]));
        assert_eq!(p.d_dq(), QLaurent::from_terms([(2, int(6)), (-2, int(-1))]));
        assert_eq!(p.eval(&int(2)), rat(33, 2));
    }

    #[test]
    fn units() {
        assert_eq!(
            QLaurent::monomial(int(3), 2).unit_inverse().unwrap(),
            QLaurent::monomial(rat(1, 3), -2)
        );
        assert!((&QLaurent::q() + &QLaurent::one()).unit_inverse().is_none());
        assert!(QLaurent::zero().unit_inverse().is_none());
    }

    #[test]
    fn json_shape() {
        let p = QLaurent::from_terms([(1, rat(1, 2)), (0, int(-3))]);
        assert_eq!(p.to_json().to_string(), r#"[[0,"-3/1"],[1,"1/2"]]"#);
        assert_eq!(QLaurent::from_json(&p.to_json()).unwrap(), p);
    }

    proptest! {
        #[test]
        fn q_d_dq_is_a_derivation(a in arb_laurent(), b in arb_laurent()) {
            let lhs = (&a * &b).q_d_dq();
            let rhs = &(&a.q_d_dq() * &b) + &(&a * &b.q_d_dq());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn d_dq_is_a_derivation(a in arb_laurent(), b in arb_laurent()) {
            let lhs = (&a * &b).d_dq();
            let rhs = &(&a.d_dq() * &b) + &(&a * &b.d_dq());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
