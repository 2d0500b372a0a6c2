use super::{lift, lift_vec, PreSaitoFamily, SeriesMatrix};
use crate::algebra::{Matrix, Rational, Ring, TruncatedSeries};
use crate::error::{Error, Result};

/// Frobenius manifold data read off a primitive section.
///
/// All vectors are coordinates in the basis `d/dx_1, .., d/dx_m` of base vector fields.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData {
    pub vars: Vec<String>,
    /// `product[i][j][k]`: coefficient of `d_k` in `d_i * d_j`.
    pub product: Vec<Vec<Vec<TruncatedSeries>>>,
    pub unit: Vec<TruncatedSeries>,
    pub euler: Vec<TruncatedSeries>,
    /// `g(d_i * d_j, d_k)` when the family has a metric.
    pub cijk: Option<Vec<Vec<Vec<TruncatedSeries>>>>,
}

impl FrobeniusData {
    /// Matrix of `d_i *` acting on vector field coordinates.
    pub fn mult_matrix(&self, i: usize) -> SeriesMatrix {
        let m = self.vars.len();
        Matrix::from_fn(m, m, |k, j| self.product[i][j][k].clone())
    }

    /// Coordinates of `u * v`.
    pub fn multiply(&self, u: &[TruncatedSeries], v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
        let m = self.vars.len();
        let zero = self.unit[0].zero_like();
        let mut out = vec![zero; m];
        for i in 0..m {
            if u[i].vanishes() {
                continue;
            }
            for j in 0..m {
                if v[j].vanishes() {
                    continue;
                }
                let uv = u[i].mul(&v[j]);
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = slot.add(&uv.mul(&self.product[i][j][k]));
                }
            }
        }
        out
    }
}

/// Product, unit and Euler field induced by the flat section `omega`.
///
/// The period map sends `d_i` to `-C^(i) omega`; it must be invertible over
/// the truncated coefficient ring, otherwise the section is not primitive.
pub fn frobenius_data(family: &PreSaitoFamily, omega: &[Rational]) -> Result<FrobeniusData> {
    let d = family.rank();
    let m = family.c.len();
    if omega.len() != d {
        return Err(Error::Dimension(format!(
            "section of length {} for rank {d}",
            omega.len()
        )));
    }
    if m != d {
        return Err(Error::NotPrimitive(format!(
            "base of dimension {m} cannot map isomorphically onto rank {d}"
        )));
    }
    let om = lift_vec(omega, &family.ring);
    let v: Vec<Vec<TruncatedSeries>> = family.c.iter().map(|c| c.mat_vec(&om)).collect();
    let phi = Matrix::from_columns(&v).neg();
    let rhs_cols: Vec<Vec<TruncatedSeries>> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| family.c[i].mat_vec(&v[j]))
        .chain([om.clone(), family.b0.mat_vec(&om)])
        .collect();
    let sol = phi
        .solve(&Matrix::from_columns(&rhs_cols))
        .map_err(|e| Error::NotPrimitive(format!("period map is not invertible: {e}")))?;
    let product = (0..m)
        .map(|i| (0..m).map(|j| sol.column(i * m + j)).collect())
        .collect();
    let cijk = family.g.as_ref().map(|g| {
        let gs = lift(g, &family.ring);
        let gv: Vec<Vec<TruncatedSeries>> = v.iter().map(|x| gs.mat_vec(x)).collect();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let cc = &rhs_cols[i * m + j];
                        (0..m)
                            .map(|k| {
                                let mut acc = cc[0].zero_like();
                                for (a, b) in cc.iter().zip(&gv[k]) {
                                    acc = acc.add(&a.mul(b));
                                }
                                acc.neg()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    });
    Ok(FrobeniusData {
        vars: family.vars(),
        product,
        unit: sol.column(m * m),
        euler: sol.column(m * m + 1),
        cijk,
    })
}
