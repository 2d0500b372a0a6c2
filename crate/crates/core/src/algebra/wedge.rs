//! Exterior powers in the basis `e_I = sum_sigma sgn(sigma) e_{I(sigma(1))} (x) ... (x) e_{I(sigma(r))}`
//! indexed by strictly increasing index tuples `I`.

use super::matrix::Matrix;
use super::rational::{int, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// All strictly increasing `r`-tuples from `0..d`, in lexicographic order.
pub fn subsets(d: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, d: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, d, r, cur, out);
            cur.pop();
        }
    }
    go(0, d, r, &mut cur, &mut out);
    out
}

/// Sorts `idx` in place; returns the sign of the sorting permutation, or `None` on a repeat.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(sign)
}

fn check_r(d: usize, r: usize) -> Result<()> {
    if r == 0 || r > d {
        return Err(Error::Dimension(format!(
            "exterior power {r} of a rank {d} space"
        )));
    }
    Ok(())
}

/// Action of `m` on the `r`-th exterior power as a derivation (restriction of the r-fold Kronecker sum).
pub fn wedge_derivation<T: Ring>(m: &Matrix<T>, r: usize) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::Dimension("wedge of a non-square matrix".into()));
    }
    let d = m.rows();
    check_r(d, r)?;
    let subs = subsets(d, r);
    let pos: std::collections::HashMap<&Vec<usize>, usize> =
        subs.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut out = Matrix::zeros(subs.len(), subs.len(), m.proto());
    for (col, set) in subs.iter().enumerate() {
        for a in 0..r {
            for j in 0..d {
                let v = m.get(j, set[a]);
                if v.vanishes() {
                    continue;
                }
                let mut t = set.clone();
                t[a] = j;
                let Some(sign) = sort_with_sign(&mut t) else {
                    continue;
                };
                let row = pos[&t];
                let add = if sign > 0 { v.clone() } else { v.negate() };
                let cur = out.get(row, col).plus(&add);
                out.set(row, col, cur);
            }
        }
    }
    Ok(out)
}

/// Induced metric `(-1)^C(r,2) det[g(e_{i_a}, e_{j_b})]` on the `r`-th exterior power.
pub fn wedge_metric(g: &Matrix<Rational>, r: usize) -> Result<Matrix<Rational>> {
    let d = g.rows();
    check_r(d, r)?;
    let subs = subsets(d, r);
    let sign = if (r * (r - 1) / 2) % 2 == 0 { 1 } else { -1 };
    Ok(Matrix::from_fn(subs.len(), subs.len(), |x, y| {
        let block = Matrix::from_fn(r, r, |a, b| g.get(subs[x][a], subs[y][b]).clone());
        block.det() * int(sign)
    }))
}

/// Coordinates of `v_1 ^ ... ^ v_r` where the `v_k` are the columns of `vecs`.
pub fn wedge_vectors<T: Ring>(vecs: &Matrix<T>) -> Result<Vec<T>> {
    let d = vecs.rows();
    let r = vecs.cols();
    check_r(d, r)?;
    Ok(subsets(d, r)
        .iter()
        .map(|set| Matrix::from_fn(r, r, |a, b| vecs.get(set[a], b).clone()).det())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_listing() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets(3, 3).len(), 1);
    }

    #[test]
    fn sorting_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        assert_eq!(v, vec![0, 1, 2]);
        let mut v = vec![1, 0];
        assert_eq!(sort_with_sign(&mut v), Some(-1));
        assert_eq!(sort_with_sign(&mut [1, 2, 1]), None);
    }

    #[test]
    fn top_power_is_trace() {
        let m = Matrix::from_ints(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 10]);
        let w = wedge_derivation(&m, 3).unwrap();
        assert_eq!(w.rows(), 1);
        assert_eq!(w.get(0, 0), &int(16));
        assert_eq!(wedge_derivation(&m, 1).unwrap(), m);
        assert!(wedge_derivation(&m, 4).is_err());
    }

    #[test]
    fn metric_of_antidiagonal() {
        let g = Matrix::from_fn(4, 4, |i, j| if i + j == 3 { int(1) } else { int(0) });
        let w = wedge_metric(&g, 2).unwrap();
        // {0,1} pairs with {2,3}: det [[0,1],[1,0]] = -1, times (-1)
        assert_eq!(w.get(0, 5), &int(1));
        assert_eq!(w.get(1, 4), &int(1));
        assert_eq!(w.get(0, 0), &int(0));
    }
}
