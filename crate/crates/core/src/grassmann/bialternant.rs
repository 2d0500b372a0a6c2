use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{rectangle, twist, BialternantClass, Partition, QLRTable};
use crate::algebra::rational::int;
use crate::algebra::QLaurent;
use crate::error::{Error, Result};

/// Polynomial in `y_1..y_r` with coefficients in `Q[q, 1/q]`.
pub type YPoly = BTreeMap<Vec<u32>, QLaurent>;

type IntPoly = BTreeMap<Vec<u32>, i64>;

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Complete homogeneous symmetric polynomial `h_k` in `r` variables.
fn complete(k: i64, r: usize) -> IntPoly {
    let mut out = IntPoly::new();
    if k < 0 {
        return out;
    }
    let mut cur = vec![0u32; r];
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut IntPoly) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.insert(cur.clone(), 1);
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            go(i + 1, left - a, cur, out);
        }
    }
    if r == 0 {
        if k == 0 {
            out.insert(vec![], 1);
        }
        return out;
    }
    go(0, k as u32, &mut cur, &mut out);
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // moving n-1 from the end to `pos` crosses len - pos entries
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Monomial expansion of the Schur polynomial `s_lambda(y_1..y_r)` by Jacobi-Trudi.
pub fn schur_monomials(lambda: &Partition, r: usize) -> BTreeMap<Vec<u32>, i64> {
    let l = lambda.len();
    if l > r {
        return IntPoly::new();
    }
    let h = |i: usize, j: usize| complete(lambda.part(i) as i64 - i as i64 + j as i64, r);
    let mut out = IntPoly::new();
    if l == 0 {
        out.insert(vec![0; r], 1);
        return out;
    }
    for (perm, sign) in permutations(l) {
        let mut term = IntPoly::from([(vec![0; r], sign)]);
        for (i, &j) in perm.iter().enumerate() {
            term = int_mul(&term, &h(i, j));
            if term.is_empty() {
                break;
            }
        }
        for (e, c) in term {
            *out.entry(e).or_insert(0) += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Class of the alternant `a_e = det(y_i^(e_j))` in the quotient by `y^(n+1) = q`.
///
/// Returns `(lambda, sign, q power)` with `a_e = sign q^d [s_lambda Delta]`, or `None` when it vanishes.
pub fn alternant_class(exps: &[u32], n: usize) -> Option<(Partition, i64, i64)> {
    let r = exps.len();
    let m = (n + 1) as u32;
    let mut qpow = 0i64;
    let mut red: Vec<u32> = exps
        .iter()
        .map(|&e| {
            qpow += i64::from(e / m);
            e % m
        })
        .collect();
    let mut sign = 1;
    for i in 1..r {
        let mut j = i;
        while j > 0 && red[j - 1] < red[j] {
            red.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if red.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let parts = red
        .iter()
        .enumerate()
        .map(|(i, &e)| e - (r - 1 - i) as u32)
        .collect();
    Some((Partition::new(parts).expect("decreasing"), sign, qpow))
}

fn add_to(class: &mut BialternantClass, p: Partition, c: QLaurent) {
    if c.is_zero() {
        return;
    }
    let e = class.entry(p.clone()).or_default();
    *e = &*e + &c;
    if e.is_zero() {
        class.remove(&p);
    }
}

/// Reduces an antisymmetric polynomial to the basis `[s_lambda Delta]` modulo `y_i^(n+1) = q`.
pub fn bialternant_reduce(p: &YPoly, r: usize, n: usize) -> Result<BialternantClass> {
    if p.keys().any(|e| e.len() != r) {
        return Err(Error::Input(format!("polynomial is not in {r} variables")));
    }
    if r >= 2 {
        let swapped: YPoly = p
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.swap(0, 1);
                (e, -c)
            })
            .collect();
        if swapped != *p {
            return Err(Error::Input("polynomial is not antisymmetric".into()));
        }
    }
    let mut out = BialternantClass::new();
    for (e, c) in p {
        if e.windows(2).any(|w| w[0] <= w[1]) {
            continue;
        }
        if let Some((lambda, sign, qpow)) = alternant_class(e, n) {
            add_to(&mut out, lambda, c.shift(qpow).scale(&int(sign)));
        }
    }
    Ok(out)
}

/// Product `s_lambda s_mu Delta` reduced, before the twist.
fn untwisted_product(lambda: &Partition, mu: &Partition, r: usize, n: usize) -> BialternantClass {
    let base: Vec<u32> = (0..r)
        .map(|i| lambda.part(i) + (r - 1 - i) as u32)
        .collect();
    let mut out = BialternantClass::new();
    for (beta, c) in schur_monomials(mu, r) {
        let e: Vec<u32> = base.iter().zip(&beta).map(|(a, b)| a + b).collect();
        if let Some((nu, sign, qpow)) = alternant_class(&e, n) {
            add_to(&mut out, nu, QLaurent::monomial(int(sign * c), qpow));
        }
    }
    out
}

/// Structure constants of the `r`-th alternate product of quantum projective `n`-space, twisted.
pub fn alt_structure_constants(r: usize, n: usize) -> QLRTable {
    let basis = rectangle(r, n);
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (i..basis.len()).map(move |j| (i, j)))
        .collect();
    let products = pairs
        .par_iter()
        .map(|&(i, j)| {
            let class = untwisted_product(&basis[i], &basis[j], r, n)
                .into_iter()
                .map(|(nu, c)| (nu, twist(&c, r)))
                .collect();
            ((i, j), class)
        })
        .collect();
    QLRTable {
        r,
        n,
        basis,
        products,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn alternant(e: &[u32]) -> YPoly {
        // two variables only
        YPoly::from([
            (vec![e[0], e[1]], QLaurent::one()),
            (vec![e[1], e[0]], QLaurent::from_int(-1)),
        ])
    }

    #[test]
    fn schur_small() {
        let s21 = schur_monomials(&p(&[2, 1]), 3);
        assert_eq!(s21.get(&vec![1, 1, 1]), Some(&2));
        assert_eq!(s21.get(&vec![2, 1, 0]), Some(&1));
        assert_eq!(s21.values().sum::<i64>(), 8);
        assert!(schur_monomials(&p(&[1, 1, 1]), 2).is_empty());
    }

    #[test]
    fn reductions() {
        let delta = alternant(&[1, 0]);
        assert_eq!(
            bialternant_reduce(&delta, 2, 3).unwrap(),
            BialternantClass::from([(p(&[]), QLaurent::one())])
        );
        assert_eq!(
            bialternant_reduce(&alternant(&[4, 1]), 2, 3).unwrap(),
            BialternantClass::from([(p(&[]), QLaurent::monomial(int(-1), 1))])
        );
        assert!(bialternant_reduce(&alternant(&[3, 0]), 2, 2).unwrap().is_empty());
        let sym = YPoly::from([(vec![1, 0], QLaurent::one()), (vec![0, 1], QLaurent::one())]);
        assert!(bialternant_reduce(&sym, 2, 3).is_err());
    }

    #[test]
    fn g24_anchor_products() {
        let t = alt_structure_constants(2, 3);
        let q = QLaurent::q();
        assert_eq!(t.product(&p(&[2]), &p(&[1, 1])), BialternantClass::from([(p(&[]), q.clone())]));
        assert_eq!(
            t.product(&p(&[1]), &p(&[2, 1])),
            BialternantClass::from([(p(&[2, 2]), QLaurent::one()), (p(&[]), q)])
        );
        assert_eq!(
            t.product(&p(&[2]), &p(&[2])),
            BialternantClass::from([(p(&[2, 2]), QLaurent::one())])
        );
    }
}
