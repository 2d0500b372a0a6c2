//! Mirror side: Laurent polynomials on the torus, their Jacobian algebras and
//! Brieskorn lattice data, Thom-Sebastiani powers and anti-invariant parts.

mod jacobian;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::rational::{factorial, int, to_i64};
use crate::algebra::wedge::{subsets, wedge_derivation};
use crate::algebra::{Matrix, QLaurent, Rational};
use crate::error::{Error, Result};
use crate::presaito::{constant_part, wedge_restrict};
use crate::projective::build_pn;
use crate::report::Report;

pub use jacobian::{jacobian_algebra, mult_f_matrix, origin_interior, JacobianAlgebra};

/// Laurent polynomial in `u_1..u_n` with coefficients in `Q[q, 1/q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<i64>, QLaurent>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(n: usize, exp: Vec<i64>, coef: QLaurent) -> Self {
        let mut p = Self::zero(n);
        p.add_term(exp, coef);
        p
    }

    pub fn add_term(&mut self, exp: Vec<i64>, coef: QLaurent) {
        assert_eq!(exp.len(), self.n, "exponent length");
        let e = self.terms.entry(exp.clone()).or_default();
        *e = &*e + &coef;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `u_i df/du_i`.
    pub fn euler_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                out.add_term(e.clone(), c.scale(&int(e[i])));
            }
        }
        out
    }

    /// `u_1 + ... + u_n + q / (u_1 ... u_n)`.
    pub fn mirror_pn(n: usize) -> Self {
        let mut f = Self::zero(n);
        for i in 0..n {
            let e = (0..n).map(|j| i64::from(i == j)).collect();
            f.add_term(e, QLaurent::one());
        }
        f.add_term(vec![-1; n], QLaurent::q());
        f
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "terms": self.terms.iter().map(|(e, c)| json!({"exp": e, "coef": c.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("Laurent polynomial needs an integer n".into()))?
            as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("Laurent polynomial needs a terms list".into()))?;
        let mut out = Self::zero(n);
        for t in terms {
            let exp: Vec<i64> = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term without exp".into()))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse("exponent must be an integer".into())))
                .collect::<Result<_>>()?;
            if exp.len() != n {
                return Err(Error::Input(format!("exponent {exp:?} has length != {n}")));
            }
            let coef = QLaurent::from_json(
                t.get("coef")
                    .ok_or_else(|| Error::Parse("term without coef".into()))?,
            )?;
            out.add_term(exp, coef);
        }
        Ok(out)
    }
}

/// Residue data of a Brieskorn lattice: `R_0` over `Q[q, 1/q]` and an integral diagonal `R_inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrieskornPoint {
    pub r0: Matrix<QLaurent>,
    pub rinf: Matrix<Rational>,
    pub labels: Vec<String>,
}

impl BrieskornPoint {
    pub fn new(r0: Matrix<QLaurent>, rinf: Matrix<Rational>, labels: Vec<String>) -> Result<Self> {
        let d = r0.rows();
        if !r0.is_square() || rinf.rows() != d || rinf.cols() != d || labels.len() != d {
            return Err(Error::Dimension("R_0, R_inf and labels disagree in rank".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let x = rinf.get(i, j);
                if (i != j && !x.is_zero()) || !x.is_integer() {
                    return Err(Error::Input("R_inf must be integral diagonal".into()));
                }
            }
        }
        Ok(Self { r0, rinf, labels })
    }

    pub fn rank(&self) -> usize {
        self.r0.rows()
    }

    /// Diagonal of `R_inf`.
    pub fn rinf_spectrum(&self) -> Vec<i64> {
        (0..self.rank())
            .map(|i| to_i64(self.rinf.get(i, i)).expect("integral"))
            .collect()
    }

    /// Rank one, `R_0 = R_inf = 0`.
    pub fn unit() -> Self {
        Self {
            r0: Matrix::from_fn(1, 1, |_, _| QLaurent::zero()),
            rinf: Matrix::from_fn(1, 1, |_, _| Rational::zero()),
            labels: vec!["1".into()],
        }
    }
}

/// Brieskorn lattice data of `u_1 + ... + u_n + q/(u_1...u_n)` on the flag basis.
pub fn mirror_point(n: usize, b_max: u32) -> Result<BrieskornPoint> {
    let f = LaurentPoly::mirror_pn(n);
    let j = jacobian_algebra(&f, b_max)?;
    if j.dim() != n + 1 || j.basis.iter().skip(1).any(|(_, c)| *c != QLaurent::q()) {
        return Err(Error::InvariantViolation(format!(
            "mirror Jacobian basis is not the flag basis: {:?}",
            j.basis
        )));
    }
    let r0 = mult_f_matrix(&j, &f)?;
    let rinf = Matrix::from_fn(n + 1, n + 1, |i, k| if i == k { int(-(i as i64)) } else { int(0) });
    let labels = (0..=n)
        .map(|k| {
            if k == 0 {
                "1".to_string()
            } else {
                (0..k).map(|i| format!("u{i}")).collect::<Vec<_>>().join("")
            }
        })
        .collect();
    BrieskornPoint::new(r0, rinf, labels)
}

/// Thom-Sebastiani sum: Kronecker sums of `R_0` and `R_inf` on the tensor basis.
pub fn ts_tensor(a: &BrieskornPoint, b: &BrieskornPoint) -> BrieskornPoint {
    let labels = a
        .labels
        .iter()
        .flat_map(|x| b.labels.iter().map(move |y| format!("{x}*{y}")))
        .collect();
    BrieskornPoint {
        r0: a.r0.kron_sum(&b.r0),
        rinf: a.rinf.kron_sum(&b.rinf),
        labels,
    }
}

/// Restriction of the `r`-fold Thom-Sebastiani power to its anti-invariant part.
pub fn gm_wedge(b: &BrieskornPoint, r: usize) -> Result<BrieskornPoint> {
    let labels = subsets(b.rank(), r)
        .iter()
        .map(|s| s.iter().map(|&i| b.labels[i].as_str()).collect::<Vec<_>>().join("^"))
        .collect();
    Ok(BrieskornPoint {
        r0: wedge_derivation(&b.r0, r)?,
        rinf: wedge_derivation(&b.rinf, r)?,
        labels,
    })
}

/// Power sums `p_0..p_kmax` of the roots of a monic polynomial (ascending coefficients).
fn power_sums(p: &[QLaurent], kmax: usize) -> Vec<QLaurent> {
    let m = p.len() - 1;
    // e_k = (-1)^k a_(m-k)
    let e = |k: usize| -> QLaurent {
        if k > m {
            QLaurent::zero()
        } else if k % 2 == 0 {
            p[m - k].clone()
        } else {
            -&p[m - k]
        }
    };
    let mut ps = vec![QLaurent::from_int(m as i64)];
    for k in 1..=kmax {
        let mut acc = e(k).scale(&int(k as i64));
        if k % 2 == 0 {
            acc = -&acc;
        }
        for i in 1..k {
            let t = &e(i) * &ps[k - i];
            acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        ps.push(acc);
    }
    ps
}

/// Monic polynomial with the given power sums `p_1..p_m` of its `m` roots.
fn from_power_sums(ps: &[QLaurent], m: usize) -> Vec<QLaurent> {
    let mut e = vec![QLaurent::one()];
    for k in 1..=m {
        let mut acc = QLaurent::zero();
        for i in 1..=k {
            let t = &e[k - i] * &ps[i];
            acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
        }
        e.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
    }
    (0..=m)
        .map(|j| {
            let k = m - j;
            if k % 2 == 0 {
                e[k].clone()
            } else {
                -&e[k]
            }
        })
        .collect()
}

/// Monic polynomial whose roots are the sums of `r` distinct roots of `p`.
///
/// Power sums of the subset sums are read off from
/// `sum_S exp(t s_S) = [u^r] exp(sum_j (-1)^(j+1) u^j/j sum_i exp(j t x_i))`.
pub fn subset_sum_charpoly(p: &[QLaurent], r: usize) -> Result<Vec<QLaurent>> {
    let m = p.len().checked_sub(1).ok_or_else(|| Error::Input("empty polynomial".into()))?;
    if p[m] != QLaurent::one() {
        return Err(Error::Input("polynomial is not monic".into()));
    }
    if r > m {
        return Err(Error::Dimension(format!("{r} distinct roots of a degree {m} polynomial")));
    }
    let big = crate::algebra::rational::binomial(m as u64, r as u64);
    let big: usize = big.try_into().map_err(|_| Error::Input("too many subsets".into()))?;
    let ps = power_sums(p, big);
    let fact = |k: usize| Rational::from_integer(factorial(k as u64));
    // series in u (degree <= r) and t (degree <= big), dense
    type Bi = Vec<Vec<QLaurent>>;
    let zero = || vec![vec![QLaurent::zero(); big + 1]; r + 1];
    let mul = |a: &Bi, b: &Bi| {
        let mut out = zero();
        for (i, ra) in a.iter().enumerate() {
            for (k, x) in ra.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, rb) in b.iter().enumerate().take(r + 1 - i) {
                    for (l, y) in rb.iter().enumerate().take(big + 1 - k) {
                        out[i + j][k + l] = &out[i + j][k + l] + &(x * y);
                    }
                }
            }
        }
        out
    };
    let mut a = zero();
    for j in 1..=r {
        let sign = if j % 2 == 1 { int(1) } else { int(-1) };
        for (k, pk) in ps.iter().enumerate() {
            let c = sign.clone() * int(j as i64).pow(k as i32) / (int(j as i64) * fact(k));
            a[j][k] = pk.scale(&c);
        }
    }
    // exp(a) truncated in u
    let mut total = zero();
    let mut power = zero();
    power[0][0] = QLaurent::one();
    for l in 0..=r {
        let c = Rational::one() / fact(l);
        for i in 0..=r {
            for k in 0..=big {
                total[i][k] = &total[i][k] + &power[i][k].scale(&c);
            }
        }
        power = mul(&power, &a);
    }
    let qs: Vec<QLaurent> = (0..=big).map(|k| total[r][k].scale(&fact(k))).collect();
    Ok(from_power_sums(&qs, big))
}

/// Monic polynomial whose roots are the sums `a + b` of a root of `p` and a root of `q`.
pub fn composed_sum(p: &[QLaurent], q: &[QLaurent]) -> Result<Vec<QLaurent>> {
    for x in [p, q] {
        if x.last() != Some(&QLaurent::one()) {
            return Err(Error::Input("polynomial is not monic".into()));
        }
    }
    let m = (p.len() - 1) * (q.len() - 1);
    let pa = power_sums(p, m);
    let pb = power_sums(q, m);
    let ps: Vec<QLaurent> = (0..=m)
        .map(|k| {
            let mut acc = QLaurent::zero();
            for l in 0..=k {
                let c = Rational::from_integer(crate::algebra::rational::binomial(k as u64, l as u64));
                acc = &acc + &(&pa[l] * &pb[k - l]).scale(&c);
            }
            acc
        })
        .collect();
    Ok(from_power_sums(&ps, m))
}

fn format_poly(p: &[QLaurent]) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if !c.is_zero() {
            parts.push(format!("({c}) z^{k}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Compares the alternate product of the mirror of projective `n`-space with the
/// alternate product of its quantum cohomology along the `q`-line.
pub fn compare_quantum_gm(r: usize, n: usize) -> Result<Report> {
    if r == 0 || r > n {
        return Err(Error::Input(format!("need 1 <= r <= n, got r={r} n={n}")));
    }
    let mut report = Report::default();
    let mirror = mirror_point(n, 6)?;
    let gm = gm_wedge(&mirror, r)?;
    let cp_gm = gm.r0.charpoly();

    let (_, fam) = wedge_restrict(&build_pn(n), r)?;
    let fam = fam.to_exp_axis(n as i64 + 1, "t1")?;
    let b0 = constant_part(&fam.b0);
    let cp_q = b0.charpoly();

    let name = format!("charpoly r={r} n={n}");
    match cp_gm.iter().zip(&cp_q).enumerate().find(|(_, (a, b))| a != b) {
        None if cp_gm.len() == cp_q.len() => report.pass(&name),
        None => report.fail(&name, "degrees differ"),
        Some((k, (a, b))) => report.fail(&name, format!("z^{k}: {a} vs {b}")),
    }
    let oracle = subset_sum_charpoly(&mirror.r0.charpoly(), r)?;
    let name = format!("subset sums r={r} n={n}");
    if oracle == cp_gm {
        report.pass(&name);
    } else {
        report.fail(&name, format!("{} vs {}", format_poly(&cp_gm), format_poly(&oracle)));
    }
    let mut s_gm = gm.rinf_spectrum();
    let mut s_q: Vec<i64> = (0..fam.rank())
        .map(|i| -to_i64(fam.binf.get(i, i)).unwrap_or(i64::MIN))
        .collect();
    s_gm.sort_unstable();
    s_q.sort_unstable();
    let name = format!("R_inf spectrum r={r} n={n}");
    if s_gm == s_q {
        report.pass(&name);
    } else {
        report.fail(&name, format!("{s_gm:?} vs {s_q:?}"));
    }
    Ok(report)
}

/// Printable form of a polynomial in `z` with `Q[q, 1/q]` coefficients.
pub fn poly_to_string(p: &[QLaurent]) -> String {
    format_poly(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::cyclic_matrix;

    fn poly(c: &[(i64, i64, usize)], deg: usize) -> Vec<QLaurent> {
        let mut out = vec![QLaurent::zero(); deg + 1];
        for &(v, qp, k) in c {
            out[k] = &out[k] + &QLaurent::monomial(int(v), qp);
        }
        out
    }

    #[test]
    fn jacobian_of_the_circle() {
        let mut f = LaurentPoly::zero(1);
        f.add_term(vec![1], QLaurent::one());
        f.add_term(vec![-1], QLaurent::one());
        let j = jacobian_algebra(&f, 5).unwrap();
        assert_eq!(j.dim(), 2);
        let u = LaurentPoly::monomial(1, vec![1], QLaurent::one());
        let uinv = LaurentPoly::monomial(1, vec![-1], QLaurent::one());
        assert_eq!(j.normal_form(&u).unwrap(), j.normal_form(&uinv).unwrap());
        assert_eq!(
            j.normal_form(&u.mul(&u)).unwrap(),
            j.normal_form(&LaurentPoly::monomial(1, vec![0], QLaurent::one())).unwrap()
        );
    }

    #[test]
    fn not_convenient() {
        let f = LaurentPoly::monomial(1, vec![1], QLaurent::one());
        assert_eq!(jacobian_algebra(&f, 4).unwrap_err(), Error::NotConvenient);
        let mut g = LaurentPoly::zero(2);
        g.add_term(vec![1, 0], QLaurent::one());
        g.add_term(vec![-1, 0], QLaurent::one());
        g.add_term(vec![0, 1], QLaurent::one());
        assert_eq!(jacobian_algebra(&g, 4).unwrap_err(), Error::NotConvenient);
        assert!(origin_interior(&[vec![1, 0], vec![0, 1], vec![-1, -1]], 2));
        assert!(!origin_interior(&[vec![1, 0], vec![0, 1], vec![-1, 0]], 2));
    }

    #[test]
    fn mirror_matches_cyclic_matrix() {
        for n in 1..=3 {
            let f = LaurentPoly::mirror_pn(n);
            let j = jacobian_algebra(&f, 6).unwrap();
            assert_eq!(j.dim(), n + 1);
            assert_eq!(mult_f_matrix(&j, &f).unwrap(), cyclic_matrix(n, &QLaurent::q()), "n={n}");
        }
        let m = mirror_point(1, 6).unwrap();
        assert_eq!(m.r0.get(0, 1), &QLaurent::monomial(int(2), 1));
        assert_eq!(m.r0.get(1, 0), &QLaurent::from_int(2));
    }

    #[test]
    fn subset_sums() {
        let p = poly(&[(-4, 0, 0), (1, 0, 2)], 2);
        assert_eq!(subset_sum_charpoly(&p, 2).unwrap(), poly(&[(1, 0, 1)], 1));
        assert_eq!(subset_sum_charpoly(&p, 1).unwrap(), p);
        let c = poly(&[(-27, 1, 0), (1, 0, 3)], 3);
        assert_eq!(subset_sum_charpoly(&c, 2).unwrap(), poly(&[(27, 1, 0), (1, 0, 3)], 3));
    }

    #[test]
    fn tensor_spectrum() {
        let m = mirror_point(1, 6).unwrap();
        let at_one = |b: &BrieskornPoint| b.r0.map(|x| x.eval(&Rational::one())).charpoly();
        let t = ts_tensor(&m, &m);
        // roots 4, 0, 0, -4
        assert_eq!(at_one(&t), vec![int(0), int(0), int(-16), int(0), int(1)]);
        assert_eq!(ts_tensor(&m, &BrieskornPoint::unit()).r0, m.r0);
    }

    #[test]
    fn compare_small() {
        for (r, n) in [(1, 2), (2, 2), (2, 3)] {
            let rep = compare_quantum_gm(r, n).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        let w = gm_wedge(&mirror_point(2, 6).unwrap(), 2).unwrap();
        assert_eq!(w.r0.charpoly(), poly(&[(27, 1, 0), (1, 0, 3)], 3));
    }
}
