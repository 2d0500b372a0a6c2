//! Universal deformations by the order-by-order recursion in one new variable at a time.
//!
//! Given a family over `x` with flat section `omega` and a vector `Psi(x, y)`
//! with `Psi(x, 0) = 0`, there is a unique extension to `(x, y)` whose period
//! map sends `d/dy_s` to `dPsi/dy_s`. For one new variable `y` the Higgs matrix
//! `D = C^(y)` is read off `D omega = -dPsi/dy`, extended to all of `E`
//! through a word basis `P_j(C, B_0) omega`, and the old matrices are then
//! integrated in `y` from their values at `y = 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::rational::{binomial, factorial, format_rational, int};
use crate::algebra::{Matrix, QLaurent, Rational, SeriesRing, TruncatedSeries};
use crate::error::{Error, Result};
use crate::presaito::{
    at_closed_point, first_nonzero, frobenius_data, lift, lift_vec, AxisKind, PreSaitoFamily,
    SeriesMatrix,
};
use crate::projective::pn_small_family;
use crate::report::Report;

/// Order in which `C^(1), .., C^(m), B_0` are offered to the word-basis search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeneratorOrder {
    #[default]
    Forward,
    Reversed,
}

#[derive(Clone, Debug)]
pub struct DeformationProblem {
    pub initial: PreSaitoFamily,
    pub new_vars: Vec<String>,
    /// Entries live in the series ring on the initial series variables followed by `new_vars`.
    pub psi: Vec<TruncatedSeries>,
    pub omega: Vec<Rational>,
    pub order: u32,
}

/// Greedy breadth-first word basis: shortest words first, then lexicographic.
///
/// A word `[a, b, ..]` stands for `.. G_b G_a omega`.
pub fn word_basis(generators: &[Matrix<Rational>], omega: &[Rational]) -> Result<Vec<Vec<usize>>> {
    let d = omega.len();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut accept = |word: Vec<usize>, v: Vec<Rational>, rows: &mut Vec<Vec<Rational>>| -> bool {
        let mut trial = rows.clone();
        trial.push(v);
        let m = Matrix::from_rows(trial.clone()).expect("equal lengths");
        if m.rank() == trial.len() {
            *rows = trial;
            words.push(word);
            true
        } else {
            false
        }
    };
    let mut frontier: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
    if omega.iter().all(Zero::is_zero) {
        return Err(Error::NotPrePrimitive("section is zero".into()));
    }
    if accept(vec![], omega.to_vec(), &mut rows) {
        frontier.push((vec![], omega.to_vec()));
    }
    while rows.len() < d && !frontier.is_empty() {
        let mut candidates: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
        for (w, v) in &frontier {
            for (g, m) in generators.iter().enumerate() {
                let mut nw = w.clone();
                nw.push(g);
                candidates.push((nw, m.mat_vec(v)));
            }
        }
        candidates.sort_by(|a, b| a.0.cmp(&b.0));
        let mut next = Vec::new();
        for (w, v) in candidates {
            if rows.len() == d {
                break;
            }
            if accept(w.clone(), v.clone(), &mut rows) {
                next.push((w, v));
            }
        }
        frontier = next;
    }
    if rows.len() < d {
        return Err(Error::NotPrePrimitive(format!(
            "iterates of the section span only {} of {d} dimensions",
            rows.len()
        )));
    }
    Ok(words)
}

#[derive(Clone, Copy, Debug)]
enum Coord {
    Laurent(AxisKind),
    Series(usize),
}

fn derive(coord: Coord, s: &TruncatedSeries) -> TruncatedSeries {
    match coord {
        Coord::Laurent(AxisKind::Exp) => s.map_coeffs(QLaurent::q_d_dq),
        Coord::Laurent(AxisKind::Plain) => s.map_coeffs(QLaurent::d_dq),
        Coord::Series(k) => s.partial(k),
    }
}

fn apply_word(word: &[usize], gens: &[&SeriesMatrix], v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    let mut out = v.to_vec();
    for &g in word {
        out = gens[g].mat_vec(&out);
    }
    out
}

fn truncate_matrix(m: &SeriesMatrix, var: usize, k: u32) -> SeriesMatrix {
    m.map(|s| s.truncate_in(var, k))
}

/// Extends `problem.initial` to the new variables, the default word-basis order.
pub fn hm_extend(problem: &DeformationProblem) -> Result<PreSaitoFamily> {
    hm_extend_with(problem, GeneratorOrder::Forward)
}

pub fn hm_extend_with(problem: &DeformationProblem, gen_order: GeneratorOrder) -> Result<PreSaitoFamily> {
    let init = &problem.initial;
    let k_max = problem.order;
    let d = init.rank();
    let n_init = init.ring.nvars();
    if n_init > 0 && init.order() < k_max {
        return Err(Error::Input(format!(
            "initial family known to order {}, {k_max} requested",
            init.order()
        )));
    }
    if problem.omega.len() != d || problem.psi.len() != d {
        return Err(Error::Dimension(format!(
            "section and Psi must have length {d}"
        )));
    }
    let mut vars = init.ring.vars().to_vec();
    for v in &problem.new_vars {
        if vars.contains(v) || init.laurent.as_ref().is_some_and(|a| &a.name == v) {
            return Err(Error::Input(format!("variable {v:?} already in the base")));
        }
        vars.push(v.clone());
    }
    let ring = SeriesRing::new(vars, k_max);
    if problem.psi.iter().any(|s| **s.ring() != *ring) {
        return Err(Error::Input(format!(
            "Psi must live in the series ring {:?} of order {k_max}",
            ring.vars()
        )));
    }
    let mut at_zero = problem.psi.clone();
    for s in 0..problem.new_vars.len() {
        at_zero = at_zero.iter().map(|e| e.restrict_zero(n_init + s)).collect();
    }
    if at_zero.iter().any(|e| !e.is_zero()) {
        return Err(Error::Input("Psi does not vanish on the initial base".into()));
    }

    let ident: Vec<usize> = (0..n_init).collect();
    let up = |m: &SeriesMatrix| m.map(|s| s.embed(&ring, &ident));
    let mut b0 = up(&init.b0);
    let mut cs: Vec<SeriesMatrix> = init.c.iter().map(up).collect();
    let mut coords: Vec<Coord> = init
        .laurent
        .iter()
        .map(|a| Coord::Laurent(a.kind))
        .chain((0..n_init).map(Coord::Series))
        .collect();
    let m_init = cs.len();

    let mut gen_index: Vec<usize> = (0..=m_init).collect();
    if gen_order == GeneratorOrder::Reversed {
        gen_index.reverse();
    }
    let closed: Vec<Matrix<Rational>> = gen_index
        .iter()
        .map(|&g| at_closed_point(if g < m_init { &cs[g] } else { &b0 }))
        .collect();
    let words = word_basis(&closed, &problem.omega)?;
    let omega = lift_vec(&problem.omega, &ring);
    let binf = lift(&init.binf, &ring);

    for s in 0..problem.new_vars.len() {
        let y = n_init + s;
        let mut psi_s: Vec<TruncatedSeries> = problem.psi.clone();
        for later in (s + 1)..problem.new_vars.len() {
            psi_s = psi_s.iter().map(|e| e.restrict_zero(n_init + later)).collect();
        }
        let target: Vec<TruncatedSeries> = psi_s.iter().map(|e| e.partial(y).neg()).collect();
        let b0_init = b0.clone();
        let cs_init = cs.clone();
        let mut dmat = Matrix::zeros(d, d, &TruncatedSeries::zero(&ring));
        for k in 0..=k_max {
            let cs_k: Vec<SeriesMatrix> = cs.iter().map(|m| truncate_matrix(m, y, k)).collect();
            let b0_k = truncate_matrix(&b0, y, k);
            let gens: Vec<&SeriesMatrix> = gen_index
                .iter()
                .map(|&g| if g < m_init { &cs_k[g] } else { &b0_k })
                .collect();
            let tgt: Vec<TruncatedSeries> = target.iter().map(|e| e.truncate_in(y, k)).collect();
            let w_cols: Vec<Vec<TruncatedSeries>> =
                words.iter().map(|w| apply_word(w, &gens, &omega)).collect();
            let v_cols: Vec<Vec<TruncatedSeries>> =
                words.iter().map(|w| apply_word(w, &gens, &tgt)).collect();
            let wt = Matrix::from_columns(&w_cols).transpose();
            let vt = Matrix::from_columns(&v_cols).transpose();
            dmat = truncate_matrix(
                &wt.solve(&vt)
                    .map_err(|e| {
                        Error::NotPrePrimitive(format!("word basis does not invert: {e}"))
                    })?
                    .transpose(),
                y,
                k,
            );
            for (i, c) in cs_k.iter().enumerate().chain([(usize::MAX, &b0_k)]) {
                let comm = truncate_matrix(&dmat.commutator(c), y, k);
                if let Some(w) = first_nonzero(&comm) {
                    let what = if i == usize::MAX {
                        "B0".to_string()
                    } else {
                        format!("C({i})")
                    };
                    return Err(Error::InvariantViolation(format!(
                        "D({}) does not commute with {what} at y-order {k}: {w}",
                        problem.new_vars[s]
                    )));
                }
            }
            for (i, coord) in coords.iter().enumerate() {
                let dd = dmat.map(|e| derive(*coord, e).integrate(y));
                cs[i] = cs_init[i].add(&dd);
            }
            let rhs = binf.commutator(&dmat).sub(&dmat);
            b0 = b0_init.add(&rhs.map(|e| e.integrate(y)));
        }
        cs.push(dmat);
        coords.push(Coord::Series(y));
    }
    PreSaitoFamily::new(
        Arc::clone(&ring),
        init.laurent.clone(),
        init.binf.clone(),
        b0,
        cs,
        init.g.clone(),
        init.w.clone(),
    )
}

/// Big quantum family of projective `n`-space on `(t1, t0, t2, .., tn)`, truncated at `order`.
pub fn universal_big_quantum(n: usize, order: u32) -> Result<PreSaitoFamily> {
    if order < 2 {
        return Err(Error::Input("universal deformation needs order at least 2".into()));
    }
    let initial = pn_small_family(n);
    let new_vars: Vec<String> = std::iter::once(0)
        .chain(2..=n)
        .map(|j| format!("t{j}"))
        .collect();
    let ring = SeriesRing::new(new_vars.clone(), order);
    let mut psi = vec![TruncatedSeries::zero(&ring); n + 1];
    for (k, j) in std::iter::once(0).chain(2..=n).enumerate() {
        psi[j] = TruncatedSeries::var(&ring, k);
    }
    let mut omega = vec![Rational::zero(); n + 1];
    omega[0] = Rational::one();
    hm_extend(&DeformationProblem {
        initial,
        new_vars,
        psi,
        omega,
        order,
    })
}

/// Frobenius potential keyed by `(q power, exponents over all base coordinates)`.
///
/// The exponent of an Exp axis coordinate `t` appears only in the `q^0`
/// part; nonzero `q` powers stand for `e^(d t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    pub vars: Vec<String>,
    /// Base coordinate index of the Exp axis, if any.
    pub exp_axis: Option<usize>,
    pub terms: BTreeMap<(i64, Vec<u32>), Rational>,
}

impl Potential {
    pub fn coeff(&self, qpow: i64, exps: &[u32]) -> Rational {
        self.terms
            .get(&(qpow, exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add(&mut self, key: (i64, Vec<u32>), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self {
            vars: self.vars.clone(),
            exp_axis: self.exp_axis,
            terms: BTreeMap::new(),
        };
        for ((p, e), c) in &self.terms {
            if e[var] > 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                out.add((*p, ne), c * int(e[var] as i64));
            }
            if self.exp_axis == Some(var) && *p != 0 {
                out.add((*p, e.clone()), c * int(*p));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.vars,
            "monomials": self.terms.iter().map(|((p, e), c)| json!({
                "qpow": p,
                "exps": e,
                "coef": format_rational(c),
            })).collect::<Vec<_>>(),
        })
    }
}

fn series_degree(e: &[u32], exp_axis: Option<usize>) -> u32 {
    e.iter()
        .enumerate()
        .filter(|(k, _)| Some(*k) != exp_axis)
        .map(|(_, v)| v)
        .sum()
}

/// Potential `Phi` with `d_i d_j d_k Phi = g(d_i * d_j, d_k)`, without terms of degree at most 2.
///
/// The classical part integrates the `q^0` part of `c_ijk` radially in all
/// coordinates; each `q^d` part with `d != 0` is `[q^d] c_ttt / d^3` along the
/// Exp axis `t`. Third derivatives are verified through series order `order - 3`.
pub fn potential(family: &PreSaitoFamily, omega: &[Rational], order: u32) -> Result<Potential> {
    if order > family.order() {
        return Err(Error::Input(format!(
            "potential order {order} exceeds family order {}",
            family.order()
        )));
    }
    let frob = frobenius_data(family, omega)?;
    let c = frob
        .cijk
        .ok_or_else(|| Error::Input("potential needs a metric".into()))?;
    let m = frob.vars.len();
    let exp_axis = match &family.laurent {
        Some(a) if a.kind == AxisKind::Exp => Some(0),
        Some(_) => {
            return Err(Error::Unsupported(
                "potential along a plain Laurent axis".into(),
            ))
        }
        None => None,
    };
    let offset = usize::from(family.laurent.is_some());

    let mut report = Report::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let diff = c[i][j][k].sub(&c[j][i][k]).truncate(order);
                let diff2 = c[i][j][k].sub(&c[i][k][j]).truncate(order);
                if !diff.is_zero() || !diff2.is_zero() {
                    report.fail(format!("c({i},{j},{k}) symmetric"), format!("{diff} / {diff2}"));
                }
                if let Some(lim) = order.checked_sub(1) {
                    for l in 0..m {
                        let a = family.derive(l, &c[i][j][k]);
                        let b = family.derive(i, &c[l][j][k]);
                        let diff = a.sub(&b).truncate(lim);
                        if !diff.is_zero() {
                            report.fail(format!("d{l} c({i},{j},{k}) symmetric"), diff.to_string());
                        }
                    }
                }
            }
        }
    }
    if let Some(f) = report.first_failure() {
        return Err(Error::InvariantViolation(format!(
            "structure constants are not integrable: {}: {}",
            f.name,
            f.witness.as_deref().unwrap_or("")
        )));
    }

    let mut pot = Potential {
        vars: frob.vars.clone(),
        exp_axis,
        terms: BTreeMap::new(),
    };
    let full_exps = |e: &[u32]| {
        let mut out = vec![0; m];
        out[offset..].copy_from_slice(e);
        out
    };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for (e, coef) in c[i][j][k].truncate(order).terms() {
                    let r = coef.coeff(0);
                    if r.is_zero() {
                        continue;
                    }
                    let deg = e.iter().sum::<u32>() as i64;
                    let mut ne = full_exps(e);
                    ne[i] += 1;
                    ne[j] += 1;
                    ne[k] += 1;
                    let den = (deg + 1) * (deg + 2) * (deg + 3);
                    pot.add((0, ne), r / int(den));
                }
            }
        }
    }
    for (e, coef) in c[0][0][0].truncate(order).terms() {
        for (p, r) in coef.terms() {
            if p == 0 {
                continue;
            }
            if exp_axis.is_none() {
                return Err(Error::Unsupported(
                    "quantum terms without an Exp axis".into(),
                ));
            }
            pot.add((p, full_exps(e)), r / int(p * p * p));
        }
    }
    if exp_axis.is_none() {
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if c[i][j][k].terms().any(|(_, v)| v.terms().any(|(p, _)| p != 0)) {
                        return Err(Error::Unsupported("quantum terms without an Exp axis".into()));
                    }
                }
            }
        }
    }

    if let Some(lim) = order.checked_sub(3) {
        for i in 0..m {
            let di = pot.derivative(i);
            for j in 0..m {
                let dij = di.derivative(j);
                for k in 0..m {
                    let dijk = dij.derivative(k);
                    let mut expect: BTreeMap<(i64, Vec<u32>), Rational> = BTreeMap::new();
                    for (e, coef) in c[i][j][k].truncate(lim).terms() {
                        for (p, r) in coef.terms() {
                            expect.insert((p, full_exps(e)), r.clone());
                        }
                    }
                    let got: BTreeMap<(i64, Vec<u32>), Rational> = dijk
                        .terms
                        .into_iter()
                        .filter(|((_, e), _)| series_degree(e, exp_axis) <= lim)
                        .collect();
                    if got != expect {
                        return Err(Error::InvariantViolation(format!(
                            "third derivative ({i},{j},{k}) of the potential differs from c"
                        )));
                    }
                }
            }
        }
    }
    Ok(pot)
}

/// Degree `d` rational curve counts of the plane through `3d - 1` points, from the potential.
pub fn gw_pn2(dmax: u32, order: Option<u32>) -> Result<Vec<Rational>> {
    let order = order.unwrap_or(3 * dmax);
    if dmax == 0 || order < 3 * dmax - 1 {
        return Err(Error::Input(format!(
            "degree {dmax} needs order at least {}",
            (3 * dmax).saturating_sub(1)
        )));
    }
    let fam = universal_big_quantum(2, order)?;
    let omega = vec![int(1), int(0), int(0)];
    let pot = potential(&fam, &omega, order)?;
    let t2 = pot
        .vars
        .iter()
        .position(|v| v == "t2")
        .expect("t2 coordinate");
    Ok((1..=dmax)
        .map(|d| {
            let mut e = vec![0; pot.vars.len()];
            e[t2] = 3 * d - 1;
            let f = Rational::from_integer(factorial(u64::from(3 * d - 1)));
            pot.coeff(d as i64, &e) * f
        })
        .collect())
}

/// Kontsevich's recursion for the same numbers.
pub fn wdvv_oracle(dmax: u32) -> Vec<Rational> {
    let mut n: Vec<num_bigint::BigInt> = vec![0.into(); dmax as usize + 1];
    if dmax >= 1 {
        n[1] = 1.into();
    }
    for d in 2..=dmax as u64 {
        let mut acc = num_bigint::BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let a = binomial(3 * d - 4, 3 * d1 - 2) * num_bigint::BigInt::from(d2);
            let b = binomial(3 * d - 4, 3 * d1 - 1) * num_bigint::BigInt::from(d1);
            acc += &n[d1 as usize]
                * &n[d2 as usize]
                * num_bigint::BigInt::from(d1 * d1 * d2)
                * (a - b);
        }
        n[d as usize] = acc;
    }
    n.into_iter().skip(1).map(Rational::from_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presaito::check_pre_saito;
    use num_traits::Signed;

    #[test]
    fn wdvv_values() {
        assert_eq!(wdvv_oracle(4), vec![int(1), int(1), int(12), int(620)]);
        assert!(wdvv_oracle(4).iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn unit_direction_on_the_line() {
        let init = pn_small_family(1);
        let ring = SeriesRing::new(vec!["t0".into()], 3);
        let psi = vec![TruncatedSeries::var(&ring, 0), TruncatedSeries::zero(&ring)];
        let fam = hm_extend(&DeformationProblem {
            initial: init,
            new_vars: vec!["t0".into()],
            psi,
            omega: vec![int(1), int(0)],
            order: 3,
        })
        .unwrap();
        let minus_id = Matrix::identity(2, &TruncatedSeries::rational(&ring, int(1))).neg();
        assert_eq!(fam.c[1], minus_id);
        assert!(check_pre_saito(&fam, 3).unwrap().passed());
    }

    #[test]
    fn word_basis_of_cyclic_matrix() {
        let p = crate::projective::build_pn(2);
        let w = word_basis(&[p.r0.clone()], &p.omega).unwrap();
        assert_eq!(w, vec![vec![], vec![0], vec![0, 0]]);
        assert!(word_basis(&[Matrix::identity(3, &int(1))], &p.omega).is_err());
    }
}
