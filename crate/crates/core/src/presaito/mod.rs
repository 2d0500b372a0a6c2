//! Pre-Saito structures: a flat bundle with Higgs field and residues, in matrix form.
//!
//! A family over a base with coordinates `x_1..x_m` is stored as
//! `(B_inf, B_0(x), C^(i)(x), G, w)`. Matrices act on coordinate columns, so
//! column `j` is the image of the `j`-th basis vector:
//! `R_inf = -B_inf`, `R_0 = B_0` and `Phi_{d/dx_i} = C^(i)`.
//!
//! The first base coordinate may be a Laurent axis: entries are Laurent
//! polynomials in a parameter `q` and differentiation along that coordinate
//! is either `q d/dq` ([`AxisKind::Exp`], `q = e^t`) or `d/dq`
//! ([`AxisKind::Plain`]). The remaining coordinates are formal series
//! variables truncated by total degree.

mod check;
mod construct;
mod frobenius;
mod json;

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{Matrix, QLaurent, Rational, SeriesRing, TruncatedSeries};
use crate::error::{Error, Result};

pub use check::{check_metric, check_pre_saito};
pub use construct::{tensor, trivial_deformation, unit_point, wedge_family, wedge_restrict};
pub use frobenius::{frobenius_data, FrobeniusData};

pub type SeriesMatrix = Matrix<TruncatedSeries>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisKind {
    /// Coordinate `t` with `q = e^t`; derivation `q d/dq`.
    Exp,
    /// The coordinate is `q` itself; derivation `d/dq`.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentAxis {
    pub name: String,
    pub kind: AxisKind,
}

/// Pre-Saito structure on a point: `(E, R_inf, R_0)` with optional metric and a section `omega`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointStructure {
    /// Diagonal with integer entries.
    pub rinf: Matrix<Rational>,
    pub r0: Matrix<Rational>,
    pub g: Option<Matrix<Rational>>,
    pub w: Option<Rational>,
    pub omega: Vec<Rational>,
}

impl PointStructure {
    pub fn rank(&self) -> usize {
        self.r0.rows()
    }

    /// Diagonal of `R_inf` as integers, or an error when it is not integral diagonal.
    pub fn rinf_diagonal(&self) -> Result<Vec<i64>> {
        let d = self.rank();
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            for j in 0..d {
                if i != j && !self.rinf.get(i, j).is_zero() {
                    return Err(Error::Unsupported("R_inf is not diagonal".into()));
                }
            }
            let v = self.rinf.get(i, i);
            let k = crate::algebra::rational::to_i64(v).ok_or_else(|| {
                Error::Unsupported(format!("R_inf eigenvalue {v} is not an integer"))
            })?;
            out.push(k);
        }
        Ok(out)
    }

    /// The same structure seen as a family over an empty base.
    pub fn as_family(&self) -> PreSaitoFamily {
        let ring = SeriesRing::new(vec![], 0);
        PreSaitoFamily {
            binf: self.rinf.neg(),
            b0: lift(&self.r0, &ring),
            c: vec![],
            g: self.g.clone(),
            w: self.w.clone(),
            laurent: None,
            ring,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreSaitoFamily {
    /// Series variables and truncation order shared by all entries.
    pub ring: Arc<SeriesRing>,
    pub laurent: Option<LaurentAxis>,
    pub binf: Matrix<Rational>,
    pub b0: SeriesMatrix,
    /// One matrix per base coordinate: the Laurent axis first, then the series variables.
    pub c: Vec<SeriesMatrix>,
    pub g: Option<Matrix<Rational>>,
    pub w: Option<Rational>,
}

impl PreSaitoFamily {
    /// Builds a family after checking shapes and ring agreement.
    pub fn new(
        ring: Arc<SeriesRing>,
        laurent: Option<LaurentAxis>,
        binf: Matrix<Rational>,
        b0: SeriesMatrix,
        c: Vec<SeriesMatrix>,
        g: Option<Matrix<Rational>>,
        w: Option<Rational>,
    ) -> Result<Self> {
        let d = binf.rows();
        if d == 0 {
            return Err(Error::Input("rank must be positive".into()));
        }
        let square = |m_rows: usize, m_cols: usize, what: &str| -> Result<()> {
            if m_rows != d || m_cols != d {
                return Err(Error::Dimension(format!(
                    "{what} is {m_rows}x{m_cols}, rank is {d}"
                )));
            }
            Ok(())
        };
        square(binf.rows(), binf.cols(), "B_inf")?;
        square(b0.rows(), b0.cols(), "B_0")?;
        let nbase = ring.nvars() + usize::from(laurent.is_some());
        if c.len() != nbase {
            return Err(Error::Input(format!(
                "{} Higgs matrices for {nbase} base coordinates",
                c.len()
            )));
        }
        for m in &c {
            square(m.rows(), m.cols(), "C")?;
        }
        for m in std::iter::once(&b0).chain(&c) {
            if m.entries().any(|e| **e.ring() != *ring) {
                return Err(Error::Input(
                    "entries do not share the variables and truncation order".into(),
                ));
            }
        }
        if let Some(g) = &g {
            square(g.rows(), g.cols(), "G")?;
        }
        if g.is_some() != w.is_some() {
            return Err(Error::Input("metric and weight must be given together".into()));
        }
        Ok(Self {
            ring,
            laurent,
            binf,
            b0,
            c,
            g,
            w,
        })
    }

    pub fn rank(&self) -> usize {
        self.binf.rows()
    }

    pub fn order(&self) -> u32 {
        self.ring.order()
    }

    /// Base coordinate names, the Laurent axis first.
    pub fn vars(&self) -> Vec<String> {
        self.laurent
            .iter()
            .map(|a| a.name.clone())
            .chain(self.ring.vars().iter().cloned())
            .collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars().iter().position(|v| v == name)
    }

    fn offset(&self) -> usize {
        usize::from(self.laurent.is_some())
    }

    /// Index into the series ring of base coordinate `i`, if it is a series variable.
    pub fn series_index(&self, i: usize) -> Option<usize> {
        i.checked_sub(self.offset())
    }

    /// Derivative of a single entry along base coordinate `i`.
    pub fn derive(&self, i: usize, s: &TruncatedSeries) -> TruncatedSeries {
        match (self.series_index(i), &self.laurent) {
            (Some(k), _) => s.partial(k),
            (None, Some(axis)) => match axis.kind {
                AxisKind::Exp => s.map_coeffs(QLaurent::q_d_dq),
                AxisKind::Plain => s.map_coeffs(QLaurent::d_dq),
            },
            (None, None) => unreachable!("base coordinate without axis"),
        }
    }

    pub fn derive_matrix(&self, i: usize, m: &SeriesMatrix) -> SeriesMatrix {
        m.map(|s| self.derive(i, s))
    }

    pub fn binf_series(&self) -> SeriesMatrix {
        lift(&self.binf, &self.ring)
    }

    /// Sets series variable `var` (ring index) to zero and drops its Higgs matrix.
    pub fn restrict_series_var(&self, var: usize) -> Self {
        let vars: Vec<String> = self
            .ring
            .vars()
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != var)
            .map(|(_, v)| v.clone())
            .collect();
        let ring = SeriesRing::new(vars, self.ring.order());
        let map: Vec<usize> = (0..self.ring.nvars())
            .map(|k| if k < var { k } else { k.saturating_sub(1) })
            .collect();
        let down = |m: &SeriesMatrix| m.map(|s| s.restrict_zero(var).embed(&ring, &map));
        let drop = self.offset() + var;
        Self {
            b0: down(&self.b0),
            c: self
                .c
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != drop)
                .map(|(_, m)| down(m))
                .collect(),
            ring,
            laurent: self.laurent.clone(),
            binf: self.binf.clone(),
            g: self.g.clone(),
            w: self.w.clone(),
        }
    }

    /// All entries truncated to total degree `order` in a ring of that order.
    pub fn with_order(&self, order: u32) -> Self {
        let ring = SeriesRing::new(self.ring.vars().to_vec(), order);
        let ident: Vec<usize> = (0..ring.nvars()).collect();
        let f = |m: &SeriesMatrix| m.map(|s| s.embed(&ring, &ident));
        Self {
            b0: f(&self.b0),
            c: self.c.iter().map(f).collect(),
            ring,
            laurent: self.laurent.clone(),
            binf: self.binf.clone(),
            g: self.g.clone(),
            w: self.w.clone(),
        }
    }

    /// Rewrites a Plain Laurent axis `lambda` as an Exp axis `t` with `q = lambda^k`.
    ///
    /// Every `lambda` exponent must be divisible by `k`.
    pub fn to_exp_axis(&self, k: i64, name: &str) -> Result<Self> {
        if !matches!(&self.laurent, Some(a) if a.kind == AxisKind::Plain) {
            return Err(Error::Input("family has no plain Laurent axis".into()));
        }
        let div = |s: &TruncatedSeries| {
            s.try_map_coeffs(|c| {
                c.divide_exponents(k).ok_or_else(|| {
                    Error::Input(format!("exponent not divisible by {k} in {c}"))
                })
            })
        };
        // q d/dq = (lambda / k) d/dlambda
        let lam = QLaurent::monomial(Rational::new(1.into(), k.into()), 1);
        let mut c = Vec::with_capacity(self.c.len());
        c.push(self.c[0].try_map(|s| div(&s.mul_laurent(&lam)))?);
        for m in &self.c[1..] {
            c.push(m.try_map(div)?);
        }
        Ok(Self {
            ring: self.ring.clone(),
            laurent: Some(LaurentAxis {
                name: name.to_string(),
                kind: AxisKind::Exp,
            }),
            binf: self.binf.clone(),
            b0: self.b0.try_map(div)?,
            c,
            g: self.g.clone(),
            w: self.w.clone(),
        })
    }
}

/// Embeds a rational matrix as constant series.
pub fn lift(m: &Matrix<Rational>, ring: &Arc<SeriesRing>) -> SeriesMatrix {
    m.map(|x| TruncatedSeries::rational(ring, x.clone()))
}

pub fn lift_laurent(m: &Matrix<QLaurent>, ring: &Arc<SeriesRing>) -> SeriesMatrix {
    m.map(|x| TruncatedSeries::constant(ring, x.clone()))
}

pub fn lift_vec(v: &[Rational], ring: &Arc<SeriesRing>) -> Vec<TruncatedSeries> {
    v.iter()
        .map(|x| TruncatedSeries::rational(ring, x.clone()))
        .collect()
}

/// Value at the closed point: series order 0 and `q = 1`.
pub fn at_closed_point(m: &SeriesMatrix) -> Matrix<Rational> {
    m.map(TruncatedSeries::constant_at_q1)
}

/// Constant-in-series part as a Laurent matrix.
pub fn constant_part(m: &SeriesMatrix) -> Matrix<QLaurent> {
    m.map(TruncatedSeries::constant_term)
}

/// First nonzero coefficient of a series matrix, as `(row, col, exps, q-power, value)` text.
pub fn first_nonzero(m: &SeriesMatrix) -> Option<String> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let s = m.get(i, j);
            if let Some((e, c)) = s.terms().next() {
                let (p, v) = c.terms().next().expect("nonzero coefficient");
                return Some(format!(
                    "entry ({i},{j}), series exponents {e:?}, q^{p}: difference {v}"
                ));
            }
        }
    }
    None
}

pub(crate) fn series_identity(d: usize, ring: &Arc<SeriesRing>) -> SeriesMatrix {
    Matrix::identity(d, &TruncatedSeries::rational(ring, Rational::one()))
}
