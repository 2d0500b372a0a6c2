use std::sync::Arc;

use num_traits::{One, Zero};

use super::{series_identity, AxisKind, LaurentAxis, PointStructure, PreSaitoFamily, SeriesMatrix};
use crate::algebra::rational::int;
use crate::algebra::wedge::{wedge_derivation, wedge_metric, wedge_vectors};
use crate::algebra::{Matrix, QLaurent, Rational, SeriesRing, TruncatedSeries};
use crate::error::{Error, Result};

/// One-parameter deformation of a point structure in the coordinate `lambda`.
///
/// `B_0(lambda)_ij = (R_0)_ij lambda^(1 + d_i - d_j)` where `d` is the diagonal of
/// `R_inf`, and `C = -B_0 / lambda` along the Plain axis `lambda`.
pub fn trivial_deformation(p: &PointStructure) -> Result<PreSaitoFamily> {
    let d = p.rinf_diagonal()?;
    let n = p.rank();
    let ring = SeriesRing::new(vec![], 0);
    let entry = |i: usize, j: usize, shift: i64| {
        TruncatedSeries::constant(
            &ring,
            QLaurent::monomial(p.r0.get(i, j).clone(), shift + d[i] - d[j]),
        )
    };
    let b0 = Matrix::from_fn(n, n, |i, j| entry(i, j, 1));
    let c = Matrix::from_fn(n, n, |i, j| entry(i, j, 0)).neg();
    PreSaitoFamily::new(
        ring.clone(),
        Some(LaurentAxis {
            name: "lambda".into(),
            kind: AxisKind::Plain,
        }),
        p.rinf.neg(),
        b0,
        vec![c],
        p.g.clone(),
        p.w.clone(),
    )
}

fn fresh_name(name: &str, taken: &[String]) -> String {
    let mut out = name.to_string();
    while taken.contains(&out) {
        out.push('\'');
    }
    out
}

/// External tensor product.
///
/// Series variables are concatenated, renaming collisions in the second
/// factor. When both factors have a Laurent axis the product is restricted
/// to the diagonal `q_1 = q_2`, whose Higgs matrix is the Kronecker sum.
pub fn tensor(f1: &PreSaitoFamily, f2: &PreSaitoFamily) -> Result<PreSaitoFamily> {
    let mut taken: Vec<String> = f1.vars();
    taken.extend(f2.laurent.iter().map(|a| a.name.clone()));
    let mut vars: Vec<String> = f1.ring.vars().to_vec();
    for v in f2.ring.vars() {
        let nv = fresh_name(v, &taken);
        taken.push(nv.clone());
        vars.push(nv);
    }
    let ring = SeriesRing::new(vars, f1.order().min(f2.order()));
    let n1 = f1.ring.nvars();
    let map1: Vec<usize> = (0..n1).collect();
    let map2: Vec<usize> = (0..f2.ring.nvars()).map(|k| n1 + k).collect();
    let up1 = |m: &SeriesMatrix| m.map(|s| s.embed(&ring, &map1));
    let up2 = |m: &SeriesMatrix| m.map(|s| s.embed(&ring, &map2));
    let i1 = series_identity(f1.rank(), &ring);
    let i2 = series_identity(f2.rank(), &ring);
    let left = |m: &SeriesMatrix| up1(m).kron(&i2);
    let right = |m: &SeriesMatrix| i1.kron(&up2(m));

    let laurent = match (&f1.laurent, &f2.laurent) {
        (Some(a), Some(b)) if a.kind != b.kind => {
            return Err(Error::Unsupported(
                "tensor of families with different Laurent axis kinds".into(),
            ))
        }
        (Some(a), _) => Some(a.clone()),
        (None, b) => b.clone(),
    };
    let mut c = Vec::new();
    match (&f1.laurent, &f2.laurent) {
        (Some(_), Some(_)) => c.push(left(&f1.c[0]).add(&right(&f2.c[0]))),
        (Some(_), None) => c.push(left(&f1.c[0])),
        (None, Some(_)) => c.push(right(&f2.c[0])),
        (None, None) => {}
    }
    let o1 = usize::from(f1.laurent.is_some());
    let o2 = usize::from(f2.laurent.is_some());
    c.extend(f1.c[o1..].iter().map(left));
    c.extend(f2.c[o2..].iter().map(right));

    let b0 = left(&f1.b0).add(&right(&f2.b0));
    let (g, w) = match (&f1.g, &f2.g, &f1.w, &f2.w) {
        (Some(g1), Some(g2), Some(w1), Some(w2)) => (Some(g1.kron(g2)), Some(w1 + w2)),
        _ => (None, None),
    };
    PreSaitoFamily::new(ring, laurent, f1.binf.kron_sum(&f2.binf), b0, c, g, w)
}

/// The `r`-th exterior power of a family, all operators acting as derivations.
pub fn wedge_family(f: &PreSaitoFamily, r: usize) -> Result<PreSaitoFamily> {
    let g = f.g.as_ref().map(|g| wedge_metric(g, r)).transpose()?;
    let w = f.w.as_ref().map(|w| w * int(r as i64));
    PreSaitoFamily::new(
        Arc::clone(&f.ring),
        f.laurent.clone(),
        wedge_derivation(&f.binf, r)?,
        wedge_derivation(&f.b0, r)?,
        f.c.iter()
            .map(|m| wedge_derivation(m, r))
            .collect::<Result<_>>()?,
        g,
        w,
    )
}

/// Alternate product of a point structure and of its trivial deformation.
///
/// The section of the product is `R_0^(r-1) omega ^ ... ^ R_0 omega ^ omega`.
pub fn wedge_restrict(p: &PointStructure, r: usize) -> Result<(PointStructure, PreSaitoFamily)> {
    let mut cols = Vec::with_capacity(r);
    let mut v = p.omega.clone();
    for _ in 0..r {
        cols.push(v.clone());
        v = p.r0.mat_vec(&v);
    }
    cols.reverse();
    let point = PointStructure {
        rinf: wedge_derivation(&p.rinf, r)?,
        r0: wedge_derivation(&p.r0, r)?,
        g: p.g.as_ref().map(|g| wedge_metric(g, r)).transpose()?,
        w: p.w.as_ref().map(|w| w * int(r as i64)),
        omega: wedge_vectors(&Matrix::from_columns(&cols))?,
    };
    let family = wedge_family(&trivial_deformation(p)?, r)?;
    Ok((point, family))
}

/// Rank-one point with `R_inf = R_0 = 0`, unit for the tensor product.
pub fn unit_point() -> PointStructure {
    PointStructure {
        rinf: Matrix::from_fn(1, 1, |_, _| Rational::zero()),
        r0: Matrix::from_fn(1, 1, |_, _| Rational::zero()),
        g: Some(Matrix::from_fn(1, 1, |_, _| Rational::one())),
        w: Some(Rational::zero()),
        omega: vec![Rational::one()],
    }
}
