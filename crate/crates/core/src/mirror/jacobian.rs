use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::LaurentPoly;
use crate::algebra::rational::int;
use crate::algebra::{Matrix, QLaurent, Rational};
use crate::error::{Error, Result};

type SparseRow = BTreeMap<usize, QLaurent>;

fn norm(e: &[i64]) -> i64 {
    e.iter().map(|x| x.abs()).max().unwrap_or(0)
}

fn cube(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e| {
                (-b..=b).map(move |x| {
                    let mut e = e.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
    }
    out
}

/// True when 0 lies in the interior of the convex hull of `points`.
///
/// Equivalent to the points positively spanning the whole space: they have
/// full rank and no hyperplane through 0 spanned by some of them leaves all
/// of them on one closed side.
pub fn origin_interior(points: &[Vec<i64>], n: usize) -> bool {
    let to_matrix = |rows: &[&Vec<i64>]| {
        Matrix::from_fn(rows.len(), n, |i, j| int(rows[i][j]))
    };
    let all: Vec<&Vec<i64>> = points.iter().collect();
    if n == 0 {
        return true;
    }
    if all.is_empty() || to_matrix(&all).rank() < n {
        return false;
    }
    let mut chosen = Vec::new();
    fn walk<'a>(
        start: usize,
        need: usize,
        all: &[&'a Vec<i64>],
        chosen: &mut Vec<&'a Vec<i64>>,
        f: &mut dyn FnMut(&[&'a Vec<i64>]) -> bool,
    ) -> bool {
        if need == 0 {
            return f(chosen);
        }
        for k in start..all.len() {
            chosen.push(all[k]);
            let stop = walk(k + 1, need - 1, all, chosen, f);
            chosen.pop();
            if stop {
                return true;
            }
        }
        false
    }
    let mut one_sided = |rows: &[&Vec<i64>]| -> bool {
        let normal = if rows.is_empty() {
            // n == 1: the only hyperplane is {0}
            vec![Rational::one()]
        } else {
            let m = to_matrix(rows);
            let (r, pivots) = m.rref();
            if pivots.len() != n - 1 {
                return false;
            }
            let free = (0..n).find(|j| !pivots.contains(j)).expect("one free column");
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free).clone();
            }
            v
        };
        let signs: Vec<Rational> = all
            .iter()
            .map(|e| e.iter().zip(&normal).map(|(a, b)| b * int(*a)).sum())
            .collect();
        signs.iter().all(|s| *s <= Rational::zero()) || signs.iter().all(|s| *s >= Rational::zero())
    };
    !walk(0, n - 1, &all, &mut chosen, &mut one_sided)
}

/// Echelon form over `Q[q, 1/q]` with unit pivots, leading column first.
#[derive(Clone, Debug, Default)]
struct Echelon {
    pivots: HashMap<usize, SparseRow>,
}

impl Echelon {
    fn insert(&mut self, mut row: SparseRow) -> Result<()> {
        loop {
            let Some((&lead, c)) = row.iter().next() else {
                return Ok(());
            };
            let c = c.clone();
            match self.pivots.get(&lead) {
                Some(p) => {
                    for (k, v) in p {
                        let e = row.entry(*k).or_default();
                        *e = &*e - &(&c * v);
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    let inv = c.unit_inverse().ok_or(Error::NonUnitPivot)?;
                    for v in row.values_mut() {
                        *v = &*v * &inv;
                    }
                    self.pivots.insert(lead, row);
                    return Ok(());
                }
            }
        }
    }

    fn reduce(&self, mut v: SparseRow) -> SparseRow {
        let mut cursor = 0;
        while let Some((&k, c)) = v.range(cursor..).find(|(k, _)| self.pivots.contains_key(k)) {
            let c = c.clone();
            for (j, x) in &self.pivots[&k] {
                let e = v.entry(*j).or_default();
                *e = &*e - &(&c * x);
                if e.is_zero() {
                    v.remove(j);
                }
            }
            cursor = k + 1;
        }
        v
    }
}

/// Jacobian algebra `Q[q,1/q][u, 1/u] / (u_i df/du_i)` with a monomial basis.
#[derive(Clone, Debug)]
pub struct JacobianAlgebra {
    pub n: usize,
    /// Basis elements `scale * u^exp`.
    pub basis: Vec<(Vec<i64>, QLaurent)>,
    /// The relations `u_i df/du_i`.
    pub relations: Vec<LaurentPoly>,
    /// Dimensions seen for box sizes `1, 2, ...`.
    pub certificate: Vec<(u32, usize)>,
    /// Monomials that have a normal form.
    reach: i64,
    columns: HashMap<Vec<i64>, usize>,
    basis_cols: Vec<usize>,
    echelon: Echelon,
}

impl JacobianAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the class of `g` in the basis.
    pub fn normal_form(&self, g: &LaurentPoly) -> Result<Vec<QLaurent>> {
        let mut v = SparseRow::new();
        for (e, c) in &g.terms {
            let col = self
                .columns
                .get(e)
                .filter(|_| norm(e) <= self.reach)
                .ok_or_else(|| Error::Input(format!("monomial {e:?} outside the computed box")))?;
            let x = v.entry(*col).or_default();
            *x = &*x + c;
        }
        v.retain(|_, c| !c.is_zero());
        let v = self.echelon.reduce(v);
        let mut out = vec![QLaurent::zero(); self.basis.len()];
        for (col, c) in v {
            let k = self
                .basis_cols
                .iter()
                .position(|&b| b == col)
                .ok_or_else(|| Error::Input("normal form leaves the computed box".into()))?;
            let inv = self.basis[k].1.unit_inverse().expect("unit basis scale");
            out[k] = &c * &inv;
        }
        Ok(out)
    }

    /// Basis element `k` as a Laurent polynomial.
    pub fn basis_element(&self, k: usize) -> LaurentPoly {
        let (e, c) = &self.basis[k];
        LaurentPoly::monomial(self.n, e.clone(), c.clone())
    }
}

/// Flag monomials `1, u_0, u_0 u_1, ...` where `u_0` is the term of `f` at `(-1, ..., -1)`.
fn flag(f: &LaurentPoly) -> Vec<(Vec<i64>, QLaurent)> {
    let n = f.n;
    let mut out = vec![(vec![0; n], QLaurent::one())];
    let Some(c) = f.terms.get(&vec![-1; n]) else {
        return out;
    };
    if c.unit_inverse().is_none() {
        return out;
    }
    for k in 1..=n {
        let e = (0..n).map(|i| if i + 1 >= k { -1 } else { 0 }).collect();
        out.push((e, c.clone()));
    }
    out
}

fn attempt(
    f: &LaurentPoly,
    rels: &[LaurentPoly],
    pref: &[(Vec<i64>, QLaurent)],
    b: i64,
    d: i64,
) -> Result<(usize, JacobianAlgebra)> {
    let n = f.n;
    let outer = b + d;
    let mut mons = cube(n, outer);
    let pref_pos = |e: &Vec<i64>| pref.iter().position(|(p, _)| p == e);
    mons.sort_by_key(|e| {
        let p = pref_pos(e);
        (
            p.is_some(),
            p.map_or(0, |k| usize::MAX - k),
            -norm(e),
            -e.iter().map(|x| x.abs()).sum::<i64>(),
            e.clone(),
        )
    });
    let columns: HashMap<Vec<i64>, usize> =
        mons.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let mut ech = Echelon::default();
    for g in rels {
        for m in &mons {
            let mut row = SparseRow::new();
            let mut inside = true;
            for (e, c) in &g.terms {
                let s: Vec<i64> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                match columns.get(&s) {
                    Some(&col) if norm(&s) <= outer => {
                        let x = row.entry(col).or_default();
                        *x = &*x + c;
                    }
                    _ => {
                        inside = false;
                        break;
                    }
                }
            }
            row.retain(|_, c| !c.is_zero());
            if inside && !row.is_empty() {
                ech.insert(row)?;
            }
        }
    }
    let inner: Vec<usize> = (0..mons.len()).filter(|&i| norm(&mons[i]) <= b).collect();
    let free: Vec<usize> = inner
        .iter()
        .copied()
        .filter(|i| !ech.pivots.contains_key(i))
        .collect();
    let mut basis_cols: Vec<usize> = free
        .iter()
        .copied()
        .filter(|&i| pref_pos(&mons[i]).is_some())
        .collect();
    basis_cols.sort_by_key(|&i| pref_pos(&mons[i]));
    let mut rest: Vec<usize> = free
        .iter()
        .copied()
        .filter(|&i| pref_pos(&mons[i]).is_none())
        .collect();
    rest.sort_by_key(|&i| (mons[i].iter().map(|x| x.abs()).sum::<i64>(), mons[i].clone()));
    basis_cols.extend(rest);
    let basis = basis_cols
        .iter()
        .map(|&i| {
            let e = mons[i].clone();
            let scale = pref_pos(&e).map_or_else(QLaurent::one, |k| pref[k].1.clone());
            (e, scale)
        })
        .collect::<Vec<_>>();
    let dim = basis.len();
    Ok((
        dim,
        JacobianAlgebra {
            n,
            basis,
            relations: rels.to_vec(),
            certificate: vec![],
            reach: b,
            columns,
            basis_cols,
            echelon: ech,
        },
    ))
}

/// Jacobian algebra of a convenient Laurent polynomial by monomial-box elimination.
///
/// For box size `b` the monomials of `[-b, b]^n` are reduced modulo the
/// relations `m u_i df/du_i` supported in the larger box `[-b-d, b+d]^n`,
/// `d` the largest exponent of `f`. The box grows until two consecutive
/// sizes give the same dimension.
pub fn jacobian_algebra(f: &LaurentPoly, b_max: u32) -> Result<JacobianAlgebra> {
    let support: Vec<Vec<i64>> = f.terms.keys().cloned().collect();
    if !origin_interior(&support, f.n) {
        return Err(Error::NotConvenient);
    }
    let rels: Vec<LaurentPoly> = (0..f.n).map(|i| f.euler_derivative(i)).collect();
    let d = support.iter().map(|e| norm(e)).max().unwrap_or(0);
    let pref = flag(f);
    let mut certificate = Vec::new();
    let mut prev: Option<usize> = None;
    for b in 1..=b_max {
        let (dim, mut alg) = attempt(f, &rels, &pref, i64::from(b), d)?;
        certificate.push((b, dim));
        if prev == Some(dim) {
            alg.certificate = certificate;
            return Ok(alg);
        }
        prev = Some(dim);
    }
    Err(Error::NotTame(b_max))
}

/// Matrix of multiplication by `f` on the basis of `j`.
pub fn mult_f_matrix(j: &JacobianAlgebra, f: &LaurentPoly) -> Result<Matrix<QLaurent>> {
    let cols = (0..j.dim())
        .map(|k| j.normal_form(&f.mul(&j.basis_element(k))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(&cols))
}
