use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{rectangle, BialternantClass, Partition, QLRTable};
use crate::algebra::rational::int;
use crate::algebra::QLaurent;

struct Filler<'a> {
    lambda: Vec<u32>,
    mu: &'a [u32],
    cells: Vec<(usize, usize)>,
    labels: BTreeMap<(usize, usize), usize>,
    counts: Vec<u32>,
}

impl Filler<'_> {
    fn count(&mut self, k: usize) -> u64 {
        if k == self.cells.len() {
            return u64::from(self.counts.iter().zip(self.mu).all(|(a, b)| a == b));
        }
        let (i, j) = self.cells[k];
        let mut total = 0;
        for l in 0..self.mu.len() {
            if self.counts[l] == self.mu[l] {
                continue;
            }
            if l > 0 && self.counts[l] + 1 > self.counts[l - 1] {
                continue;
            }
            if let Some(&right) = self.labels.get(&(i, j + 1)) {
                if l > right {
                    continue;
                }
            }
            if i > 0 && j as u32 >= self.lambda[i - 1] {
                if let Some(&above) = self.labels.get(&(i - 1, j)) {
                    if l <= above {
                        continue;
                    }
                }
            }
            self.labels.insert((i, j), l);
            self.counts[l] += 1;
            total += self.count(k + 1);
            self.counts[l] -= 1;
            self.labels.remove(&(i, j));
        }
        total
    }
}

/// Number of Littlewood-Richardson tableaux of shape `nu / lambda` and content `mu`.
pub fn lr_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let rows = nu.len();
    let lam = lambda.padded(rows.max(lambda.len()));
    if lambda.len() > rows || (0..rows).any(|i| lam[i] > nu.part(i)) {
        return 0;
    }
    if nu.size() != lambda.size() + mu.size() {
        return 0;
    }
    let mut cells = Vec::new();
    for i in 0..rows {
        for j in (lam[i]..nu.part(i)).rev() {
            cells.push((i, j as usize));
        }
    }
    let mut f = Filler {
        lambda: lam,
        mu: mu.parts(),
        cells,
        labels: BTreeMap::new(),
        counts: vec![0; mu.len()],
    };
    f.count(0)
}

fn partitions_between(lambda: &Partition, size: u32, rows: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let lam = lambda.padded(rows);
    fn go(i: usize, left: u32, prev: u32, lam: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == lam.len() {
            if left == 0 {
                out.push(Partition::new(cur.clone()).expect("decreasing"));
            }
            return;
        }
        let lo = lam[i];
        let hi = prev.min(lo + left);
        for v in lo..=hi {
            cur.push(v);
            go(i + 1, left - (v - lo), v, lam, cur, out);
            cur.pop();
        }
    }
    if lambda.len() > rows {
        return out;
    }
    let extra = size.saturating_sub(lambda.size());
    go(0, extra, u32::MAX, &lam, &mut Vec::new(), &mut out);
    out
}

/// `s_lambda s_mu = sum c^nu s_nu` restricted to `nu` with at most `rows` parts.
pub fn lr_coefficients(lambda: &Partition, mu: &Partition, rows: usize) -> BTreeMap<Partition, u64> {
    partitions_between(lambda, lambda.size() + mu.size(), rows)
        .into_iter()
        .filter_map(|nu| {
            let c = lr_tableaux(lambda, mu, &nu);
            (c > 0).then_some((nu, c))
        })
        .collect()
}

/// Removes `(n+1)`-rim hooks from `nu` (at most `r` rows) until it fits the rectangle.
///
/// Each removal of a hook spanning `ht` rows contributes `q` and the sign
/// `(-1)^(ht-1) (-1)^(r-1)`. Returns `(core, sign, q power)`, or `None` when
/// no hook can be removed from a shape outside the rectangle.
pub fn rim_hook_reduce(nu: &Partition, r: usize, n: usize) -> Option<(Partition, i64, i64)> {
    let big = (n + 1) as i64;
    let cols = (n + 1 - r) as u32;
    if nu.len() > r {
        return None;
    }
    let mut v: Vec<i64> = nu.padded(r).iter().map(|&x| i64::from(x)).collect();
    let mut sign = 1i64;
    let mut d = 0i64;
    loop {
        let cur = Partition::new(v.iter().map(|&x| x as u32).collect()).expect("decreasing");
        if cur.fits(r, cols) {
            return Some((cur, sign, d));
        }
        let at = |i: usize, v: &[i64]| if i < v.len() { v[i] } else { 0 };
        let mut found = None;
        'search: for a in 0..r {
            let mut removed = 0;
            for b in a..r {
                let rem = big - removed;
                let kb = v[b] - rem;
                if rem > 0 && kb >= at(b + 1, &v) && kb >= 0 {
                    found = Some((a, b, kb));
                    break 'search;
                }
                // row b fully used down to the next row's end, minus one
                let kappa = at(b + 1, &v) - 1;
                if kappa < 0 {
                    break;
                }
                removed += v[b] - kappa;
                if removed >= big {
                    break;
                }
            }
        }
        let (a, b, kb) = found?;
        for i in a..b {
            v[i] = v[i + 1] - 1;
        }
        v[b] = kb;
        let ht = (b - a + 1) as i64;
        if (ht - 1 + r as i64 - 1) % 2 != 0 {
            sign = -sign;
        }
        d += 1;
    }
}

/// Quantum Littlewood-Richardson table of `G(r, n+1)` by rim-hook reduction.
pub fn rimhook_oracle(r: usize, n: usize) -> QLRTable {
    let basis = rectangle(r, n);
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (i..basis.len()).map(move |j| (i, j)))
        .collect();
    let products = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut class = BialternantClass::new();
            for (nu, c) in lr_coefficients(&basis[i], &basis[j], r) {
                if let Some((core, sign, d)) = rim_hook_reduce(&nu, r, n) {
                    let e = class.entry(core.clone()).or_default();
                    *e = &*e + &QLaurent::monomial(int(sign * c as i64), d);
                    if e.is_zero() {
                        class.remove(&core);
                    }
                }
            }
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

    #[test]
    fn classical_lr() {
        let c = lr_coefficients(&p(&[2, 1]), &p(&[2, 1]), 10);
        assert_eq!(c.get(&p(&[3, 2, 1])), Some(&2));
        assert_eq!(c.get(&p(&[4, 2])), Some(&1));
        assert_eq!(c.values().sum::<u64>(), 8);
        let c = lr_coefficients(&p(&[1]), &p(&[1]), 2);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn hooks() {
        // (3,1) in G(2,4): one hook of height 2, sign -1, twisted by -1
        assert_eq!(rim_hook_reduce(&p(&[3, 1]), 2, 3), Some((p(&[]), 1, 1)));
        // (4) in G(2,4): horizontal hook, height 1, twisted
        assert_eq!(rim_hook_reduce(&p(&[4]), 2, 3), Some((p(&[]), -1, 1)));
        assert_eq!(rim_hook_reduce(&p(&[3]), 2, 3), None);
        assert_eq!(rim_hook_reduce(&p(&[2, 2]), 2, 3), Some((p(&[2, 2]), 1, 0)));
    }
}
