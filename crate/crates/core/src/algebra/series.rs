//! Multivariate power series truncated by total degree, with coefficients in Q[q, 1/q].
//!
//! The quantum parameter `q` is never truncated; only the named series
//! variables are. Every stored exponent vector has total degree at most the
//! ring order and products drop everything above it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::laurent::QLaurent;
use super::rational::{int, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Variable names and truncation order shared by a family of series.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesRing {
    vars: Vec<String>,
    order: u32,
}

impl SeriesRing {
    pub fn new(vars: Vec<String>, order: u32) -> Arc<Self> {
        Arc::new(Self { vars, order })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

#[derive(Clone)]
pub struct TruncatedSeries {
    ring: Arc<SeriesRing>,
    terms: BTreeMap<Vec<u32>, QLaurent>,
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl TruncatedSeries {
    pub fn zero(ring: &Arc<SeriesRing>) -> Self {
        Self {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<SeriesRing>, c: QLaurent) -> Self {
        let mut s = Self::zero(ring);
        if !c.is_zero() {
            s.terms.insert(vec![0; ring.nvars()], c);
        }
        s
    }

    pub fn rational(ring: &Arc<SeriesRing>, c: Rational) -> Self {
        Self::constant(ring, QLaurent::constant(c))
    }

    /// The series variable with index `var`.
    pub fn var(ring: &Arc<SeriesRing>, var: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[var] = 1;
        Self::monomial(ring, e, QLaurent::one())
    }

    pub fn monomial(ring: &Arc<SeriesRing>, exps: Vec<u32>, c: QLaurent) -> Self {
        assert_eq!(exps.len(), ring.nvars(), "exponent length");
        let mut s = Self::zero(ring);
        if !c.is_zero() && degree(&exps) <= ring.order {
            s.terms.insert(exps, c);
        }
        s
    }

    pub fn ring(&self) -> &Arc<SeriesRing> {
        &self.ring
    }

    pub fn order(&self) -> u32 {
        self.ring.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QLaurent)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> QLaurent {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> QLaurent {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "series from different rings: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    fn add_term(&mut self, exps: &[u32], c: &QLaurent) {
        if c.is_zero() || degree(exps) > self.ring.order {
            return;
        }
        match self.terms.get_mut(exps) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(exps);
                }
            }
            None => {
                self.terms.insert(exps.to_vec(), c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, &-c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let order = self.ring.order;
        let mut out = Self::zero(&self.ring);
        let mut e = vec![0u32; self.ring.nvars()];
        for (e1, c1) in &self.terms {
            let d1 = degree(e1);
            for (e2, c2) in &other.terms {
                if d1 + degree(e2) > order {
                    continue;
                }
                for (k, slot) in e.iter_mut().enumerate() {
                    *slot = e1[k] + e2[k];
                }
                out.add_term(&e, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        self.map_coeffs(|v| v.scale(c))
    }

    pub fn mul_laurent(&self, c: &QLaurent) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, v) in &self.terms {
            out.add_term(e, &(v * c));
        }
        out
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs<F: Fn(&QLaurent) -> QLaurent>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, v) in &self.terms {
            let nv = f(v);
            if !nv.is_zero() {
                out.terms.insert(e.clone(), nv);
            }
        }
        out
    }

    pub fn try_map_coeffs<F: Fn(&QLaurent) -> Result<QLaurent>>(&self, f: F) -> Result<Self> {
        let mut out = Self::zero(&self.ring);
        for (e, v) in &self.terms {
            let nv = f(v)?;
            if !nv.is_zero() {
                out.terms.insert(e.clone(), nv);
            }
        }
        Ok(out)
    }

    /// Partial derivative in series variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(&ne, &c.scale(&int(e[var] as i64)));
        }
        out
    }

    /// Antiderivative in `var` vanishing at `var = 0`; terms pushed past the order are dropped.
    pub fn integrate(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[var] += 1;
            out.add_term(&ne, &c.scale(&Rational::new(1.into(), (ne[var] as i64).into())));
        }
        out
    }

    /// Drops all terms of total degree above `order`.
    pub fn truncate(&self, order: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| degree(e) <= order);
        out
    }

    /// Drops all terms whose degree in `var` exceeds `max`.
    pub fn truncate_in(&self, var: usize, max: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| e[var] <= max);
        out
    }

    /// Sets variable `var` to zero.
    pub fn restrict_zero(&self, var: usize) -> Self {
        self.truncate_in(var, 0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Re-embeds into `ring`, sending variable `i` to `var_map[i]`.
    pub fn embed(&self, ring: &Arc<SeriesRing>, var_map: &[usize]) -> Self {
        assert_eq!(var_map.len(), self.ring.nvars());
        let mut out = Self::zero(ring);
        for (e, c) in &self.terms {
            let mut ne = vec![0; ring.nvars()];
            for (i, &k) in e.iter().enumerate() {
                ne[var_map[i]] += k;
            }
            out.add_term(&ne, c);
        }
        out
    }

    /// Same terms in a ring with identical variables but a different order.
    pub fn with_order(&self, order: u32) -> Self {
        let ring = SeriesRing::new(self.ring.vars.clone(), order);
        let mut out = Self::zero(&ring);
        for (e, c) in &self.terms {
            out.add_term(e, c);
        }
        out
    }

    /// Substitutes `q -> 1` and evaluates the constant term.
    pub fn constant_at_q1(&self) -> Rational {
        self.constant_term().eval(&Rational::one())
    }

    /// Inverse when the constant term is a unit of Q[q, 1/q].
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.unit_inverse()?;
        let one = Self::constant(&self.ring, QLaurent::one());
        // self = c0 (1 - n) with n nilpotent modulo the truncation
        let n = one.sub(&self.mul_laurent(&c0_inv));
        let mut acc = one.clone();
        let mut pow = one;
        for _ in 0..self.ring.order {
            pow = pow.mul(&n);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Some(acc.mul_laurent(&c0_inv))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"exps": e, "coef": c.to_json()}))
                .collect(),
        )
    }

    pub fn from_json(ring: &Arc<SeriesRing>, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("series must be a list of terms".into()))?;
        let mut out = Self::zero(ring);
        for t in arr {
            let exps: Vec<u32> = t
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("series term without exps".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as u32)
                        .ok_or_else(|| Error::Parse("bad exponent".into()))
                })
                .collect::<Result<_>>()?;
            if exps.len() != ring.nvars() {
                return Err(Error::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    ring.nvars()
                )));
            }
            if degree(&exps) > ring.order {
                return Err(Error::Input(format!(
                    "series term {exps:?} exceeds truncation order {}",
                    ring.order
                )));
            }
            let c = QLaurent::from_json(
                t.get("coef")
                    .ok_or_else(|| Error::Parse("series term without coef".into()))?,
            )?;
            out.add_term(&exps, &c);
        }
        Ok(out)
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*{}", self.ring.vars[i])?,
                    _ => write!(f, "*{}^{k}", self.ring.vars[i])?,
                }
            }
        }
        Ok(())
    }
}

impl Ring for TruncatedSeries {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ring)
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.ring, QLaurent::one())
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries::scale(self, c)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn ring() -> Arc<SeriesRing> {
        SeriesRing::new(vec!["x".into(), "y".into()], 4)
    }

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((0u32..4, 0u32..4, -2i64..3, -4i64..5), 0..6).prop_map(|v| {
            let r = ring();
            let mut s = TruncatedSeries::zero(&r);
            for (a, b, p, c) in v {
                s = s.add(&TruncatedSeries::monomial(
                    &r,
                    vec![a, b],
                    QLaurent::monomial(int(c), p),
                ));
            }
            s
        })
    }

    #[test]
    fn multiplication_truncates() {
        let r = ring();
        let x = TruncatedSeries::var(&r, 0);
        let y = TruncatedSeries::var(&r, 1);
        let p = x.mul(&x).mul(&y).mul(&y);
        assert_eq!(p.num_terms(), 1);
        assert!(p.mul(&x).is_zero());
    }

    #[test]
    fn inverse_of_unit() {
        let r = ring();
        let x = TruncatedSeries::var(&r, 0);
        let s = TruncatedSeries::constant(&r, QLaurent::monomial(int(2), 1)).sub(&x);
        let inv = s.inverse().unwrap();
        assert_eq!(s.mul(&inv), s.one_like());
        assert!(x.inverse().is_none());
    }

    #[test]
    fn calculus() {
        let r = ring();
        let x = TruncatedSeries::var(&r, 0);
        let y = TruncatedSeries::var(&r, 1);
        let f = x.mul(&x).mul(&y);
        assert_eq!(f.partial(0), x.mul(&y).scale(&int(2)));
        assert_eq!(f.integrate(1), x.mul(&x).mul(&y).mul(&y).scale(&rat(1, 2)));
        // x^2 y^2 integrated in y would reach degree 5 > 4
        assert!(f.mul(&y).integrate(1).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let r = ring();
        let s = TruncatedSeries::monomial(&r, vec![1, 2], QLaurent::monomial(rat(3, 4), -1))
            .add(&TruncatedSeries::rational(&r, int(5)));
        let j = s.to_json();
        assert_eq!(TruncatedSeries::from_json(&r, &j).unwrap(), s);
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn partial_is_a_derivation(a in arb_series(), b in arb_series()) {
            // exact only below the truncation order
            let lhs = a.mul(&b).partial(0).truncate(3);
            let rhs = a.partial(0).mul(&b).add(&a.mul(&b.partial(0))).truncate(3);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
