//! Quantum cohomology of projective space: the point structure and its small-locus family.

use num_traits::{One, Zero};

use crate::algebra::rational::int;
use crate::algebra::{Matrix, QLaurent, Rational, SeriesRing, TruncatedSeries};
use crate::presaito::{AxisKind, LaurentAxis, PointStructure, PreSaitoFamily};

/// `(n+1)` times the cyclic shift `e_k -> e_(k+1)`, `e_n -> q e_0`.
pub fn cyclic_matrix(n: usize, q: &QLaurent) -> Matrix<QLaurent> {
    let s = int(n as i64 + 1);
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        if i == j + 1 {
            QLaurent::constant(s.clone())
        } else if i == 0 && j == n {
            q.scale(&s)
        } else {
            QLaurent::zero()
        }
    })
}

/// The point structure of projective `n`-space with basis `omega_k = e_k`.
///
/// `R_inf = -diag(0..n)`, `R_0` is the cyclic matrix at `q = 1`,
/// `g(omega_k, omega_l) = 1` iff `k + l = n`, weight `n`, section `omega_0`.
pub fn build_pn(n: usize) -> PointStructure {
    assert!(n >= 1, "projective space of dimension 0");
    let d = n + 1;
    let r0 = cyclic_matrix(n, &QLaurent::one()).map(|x| x.eval(&Rational::one()));
    let mut omega = vec![Rational::zero(); d];
    omega[0] = Rational::one();
    PointStructure {
        rinf: Matrix::from_fn(d, d, |i, j| if i == j { int(-(i as i64)) } else { int(0) }),
        r0,
        g: Some(Matrix::from_fn(d, d, |i, j| {
            if i + j == n {
                int(1)
            } else {
                int(0)
            }
        })),
        w: Some(int(n as i64)),
        omega,
    }
}

/// Family over the `q`-line, `q = e^(t1)`: `B_0 = ` [`cyclic_matrix`], `C(t1) = -B_0/(n+1)`.
pub fn pn_small_family(n: usize) -> PreSaitoFamily {
    let p = build_pn(n);
    let ring = SeriesRing::new(vec![], 0);
    let b0 = cyclic_matrix(n, &QLaurent::q()).map(|x| TruncatedSeries::constant(&ring, x.clone()));
    let c = b0.scale(&Rational::new((-1).into(), (n as i64 + 1).into()));
    PreSaitoFamily::new(
        ring,
        Some(LaurentAxis {
            name: "t1".into(),
            kind: AxisKind::Exp,
        }),
        p.rinf.neg(),
        b0,
        vec![c],
        p.g,
        p.w,
    )
    .expect("well-formed projective family")
}
