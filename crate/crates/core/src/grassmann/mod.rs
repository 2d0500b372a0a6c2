//! Alternate products of projective space and quantum cohomology of Grassmannians.
//!
//! The `r`-th alternate product of the quantum cohomology of projective
//! `n`-space is computed in `Q[q][y_1..y_r] / (y_i^(n+1) - q)` restricted to
//! antisymmetric classes, with basis `[s_lambda Delta]` where
//! `Delta = det(y_i^(r-j))`. An independent Littlewood-Richardson and
//! rim-hook computation gives the same table for `G(r, n+1)`.

mod bialternant;
mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::rational::{int, to_i64};
use crate::algebra::wedge::{subsets, wedge_metric};
use crate::algebra::{Matrix, QLaurent, Rational};
use crate::error::{Error, Result};
use crate::projective::build_pn;

pub use bialternant::{
    alt_structure_constants, alternant_class, bialternant_reduce, schur_monomials, YPoly,
};
pub use oracle::{lr_coefficients, rim_hook_reduce, rimhook_oracle};

/// Integer partition, weakly decreasing, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Input(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(vec![])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Part `i`, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `r`.
    pub fn padded(&self, r: usize) -> Vec<u32> {
        (0..r).map(|i| self.part(i)).collect()
    }

    pub fn fits(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }

    pub fn to_json(&self) -> Value {
        json!(self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions inside the `r x (n+1-r)` rectangle, by size and then decreasing parts.
pub fn rectangle(r: usize, n: usize) -> Vec<Partition> {
    assert!(r >= 1 && r <= n, "need 1 <= r <= n");
    let cols = (n + 1 - r) as u32;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(max: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        out.push(Partition::new(cur.clone()).expect("decreasing"));
        if rows == 0 {
            return;
        }
        for p in 1..=max {
            cur.push(p);
            go(p, rows - 1, cur, out);
            cur.pop();
        }
    }
    go(cols, r, &mut cur, &mut out);
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.cmp(a)));
    out
}

/// Coefficients of classes `[s_nu Delta]`.
pub type BialternantClass = BTreeMap<Partition, QLaurent>;

/// Structure constants `sigma_lambda * sigma_mu = sum_nu c q^d sigma_nu` for unordered pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLRTable {
    pub r: usize,
    pub n: usize,
    pub basis: Vec<Partition>,
    /// Keyed by basis positions `(i, j)` with `i <= j`; zero classes are kept as empty maps.
    pub products: BTreeMap<(usize, usize), BialternantClass>,
}

impl QLRTable {
    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.basis.iter().position(|b| b == p)
    }

    pub fn product(&self, a: &Partition, b: &Partition) -> BialternantClass {
        let (Some(i), Some(j)) = (self.index_of(a), self.index_of(b)) else {
            return BialternantClass::new();
        };
        self.products
            .get(&(i.min(j), i.max(j)))
            .cloned()
            .unwrap_or_default()
    }

    /// Coefficient of `sigma_nu` in `sigma_lambda * sigma_mu`.
    pub fn coeff(&self, a: &Partition, b: &Partition, nu: &Partition) -> QLaurent {
        self.product(a, b).get(nu).cloned().unwrap_or_default()
    }

    /// Number of unordered pairs with a nonzero product.
    pub fn nonzero_products(&self) -> usize {
        self.products.values().filter(|c| !c.is_empty()).count()
    }

    /// Product of two classes, extended bilinearly over `Q[q]`.
    pub fn multiply(&self, a: &BialternantClass, b: &BialternantClass) -> BialternantClass {
        let mut out = BialternantClass::new();
        for (pa, ca) in a {
            for (pb, cb) in b {
                let cab = ca * cb;
                for (nu, c) in self.product(pa, pb) {
                    let e = out.entry(nu.clone()).or_default();
                    *e = &*e + &(&cab * &c);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Rows `(lambda, mu, nu, q power, integer coefficient)` in table order.
    pub fn rows(&self) -> Vec<(Partition, Partition, Partition, i64, i64)> {
        let mut out = Vec::new();
        for ((i, j), class) in &self.products {
            for (nu, c) in class {
                for (p, v) in c.terms() {
                    let v = to_i64(v).expect("integral structure constant");
                    out.push((self.basis[*i].clone(), self.basis[*j].clone(), nu.clone(), p, v));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for ((i, j), class) in &self.products {
            for (nu, c) in class {
                entries.push(json!({
                    "lambda": self.basis[*i].to_json(),
                    "mu": self.basis[*j].to_json(),
                    "nu": nu.to_json(),
                    "q": c.terms().map(|(p, v)| json!([p, to_i64(v).expect("integral")])).collect::<Vec<_>>(),
                }));
            }
        }
        json!({"r": self.r, "n": self.n, "entries": entries})
    }

    pub fn to_csv(&self) -> Result<String> {
        let fmt = |p: &Partition| {
            p.parts()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["lambda", "mu", "nu", "qpow", "coef"])
            .map_err(|e| Error::Input(e.to_string()))?;
        for (a, b, nu, p, v) in self.rows() {
            w.write_record([fmt(&a), fmt(&b), fmt(&nu), p.to_string(), v.to_string()])
                .map_err(|e| Error::Input(e.to_string()))?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Input(e.to_string()))?)
            .map_err(|e| Error::Input(e.to_string()))
    }

    /// First `(lambda, mu)` where the two tables differ.
    pub fn first_difference(&self, other: &QLRTable) -> Option<String> {
        if self.basis != other.basis {
            return Some("different bases".into());
        }
        for (key, a) in &self.products {
            let b = other.products.get(key).cloned().unwrap_or_default();
            if *a != b {
                return Some(format!(
                    "{} * {}: {:?} vs {:?}",
                    self.basis[key.0], self.basis[key.1], a, b
                ));
            }
        }
        if other.products.keys().any(|k| !self.products.contains_key(k)) {
            return Some("extra products".into());
        }
        None
    }
}

/// Metric of the `r`-th alternate product on the classes `sigma_lambda`.
///
/// `sigma_lambda` is the wedge of the basis vectors `omega_k` of projective
/// `n`-space at the indices `lambda + delta`; the metric is
/// `(-1)^C(r,2) det[g(omega_i, omega_j)]`.
pub fn alt_metric(r: usize, n: usize) -> Matrix<Rational> {
    let basis = rectangle(r, n);
    let g = build_pn(n).g.expect("projective metric");
    let w = wedge_metric(&g, r).expect("r <= n + 1");
    let subs = subsets(n + 1, r);
    let pos = |p: &Partition| {
        let mut idx: Vec<usize> = (0..r)
            .map(|i| p.part(i) as usize + r - 1 - i)
            .collect();
        idx.reverse();
        subs.iter().position(|s| *s == idx).expect("index set")
    };
    Matrix::from_fn(basis.len(), basis.len(), |a, b| {
        w.get(pos(&basis[a]), pos(&basis[b])).clone()
    })
}

/// Complement of `p` in the `r x (n+1-r)` rectangle.
pub fn complement(p: &Partition, r: usize, n: usize) -> Partition {
    let cols = (n + 1 - r) as u32;
    Partition::new((0..r).rev().map(|i| cols - p.part(i)).collect()).expect("decreasing")
}

/// `g(sigma_lambda * sigma_mu, sigma_nu)` over all triples, basis ordered as [`rectangle`].
pub fn pairing_tensor(table: &QLRTable, metric: &Matrix<Rational>) -> Vec<Vec<Vec<QLaurent>>> {
    let b = &table.basis;
    let m = b.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let prod = table.product(&b[i], &b[j]);
                    (0..m)
                        .map(|k| {
                            let mut acc = QLaurent::zero();
                            for (kappa, c) in &prod {
                                let idx = table.index_of(kappa).expect("rectangle partition");
                                acc = &acc + &c.scale(metric.get(idx, k));
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Substitutes `q -> (-1)^(r-1) q`.
pub fn twist(c: &QLaurent, r: usize) -> QLaurent {
    if r % 2 == 1 {
        c.clone()
    } else {
        c.rescale_q(&int(-1))
    }
}

/// True when every coefficient is a nonnegative integer at a nonnegative power of `q`.
pub fn is_nonnegative_integer_poly(c: &QLaurent) -> bool {
    c.terms()
        .all(|(p, v)| p >= 0 && v.is_integer() && *v >= Rational::zero())
}

/// The class of `sigma_()`.
pub fn unit_class() -> BialternantClass {
    BTreeMap::from([(Partition::empty(), QLaurent::constant(Rational::one()))])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rectangle_listing() {
        let b = rectangle(2, 3);
        assert_eq!(b, vec![p(&[]), p(&[1]), p(&[2]), p(&[1, 1]), p(&[2, 1]), p(&[2, 2])]);
        assert_eq!(rectangle(1, 3).len(), 4);
        assert_eq!(rectangle(3, 5).len(), 20);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(p(&[2, 0, 0]), p(&[2]));
        assert_eq!(complement(&p(&[2]), 2, 3), p(&[2]));
        assert_eq!(complement(&p(&[1]), 2, 3), p(&[2, 1]));
    }

    #[test]
    fn metric_on_g24() {
        let g = alt_metric(2, 3);
        let b = rectangle(2, 3);
        for (i, a) in b.iter().enumerate() {
            for (j, c) in b.iter().enumerate() {
                let want = if complement(a, 2, 3) == *c { 1 } else { 0 };
                assert_eq!(g.get(i, j), &int(want), "{a} {c}");
            }
        }
    }

    #[test]
    fn two_routes_agree() {
        for n in 1..=5 {
            for r in 1..=n.min(3) {
                let a = alt_structure_constants(r, n);
                let b = rimhook_oracle(r, n);
                assert_eq!(a.first_difference(&b), None, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn g24_counts() {
        let t = alt_structure_constants(2, 3);
        assert_eq!(t.products.len(), 21);
        assert_eq!(t.nonzero_products(), 21);
    }
}
