use num_traits::Zero;

use super::{first_nonzero, lift, PreSaitoFamily, SeriesMatrix};
use crate::algebra::{Matrix, Rational, Ring};
use crate::error::{Error, Result};
use crate::report::Report;

fn compare(report: &mut Report, name: String, lhs: &SeriesMatrix, rhs: &SeriesMatrix, upto: Option<u32>) {
    let Some(k) = upto else {
        report.pass(name);
        return;
    };
    let diff = lhs.sub(rhs).map(|s| s.truncate(k));
    report.push(name, first_nonzero(&diff));
}

fn first_nonzero_rational(m: &Matrix<Rational>) -> Option<String> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.get(i, j).is_zero() {
                return Some(format!("entry ({i},{j}): difference {}", m.get(i, j)));
            }
        }
    }
    None
}

/// Checks the flatness relations of `family` through total degree `order`.
///
/// A series known through degree `K` has derivatives known through degree
/// `K - 1`, so relations that differentiate along a series variable are
/// compared one degree lower.
pub fn check_pre_saito(family: &PreSaitoFamily, order: u32) -> Result<Report> {
    // without series variables the family is exact and any order is valid
    if family.ring.nvars() > 0 && order > family.order() {
        return Err(Error::Input(format!(
            "check order {order} exceeds family truncation order {}",
            family.order()
        )));
    }
    let vars = family.vars();
    let upto = |i: usize| -> Option<u32> {
        match family.series_index(i) {
            Some(_) => order.checked_sub(1),
            None => Some(order),
        }
    };
    let mut report = Report::new();
    let m = vars.len();
    for i in 0..m {
        for j in (i + 1)..m {
            let lhs = family.derive_matrix(j, &family.c[i]);
            let rhs = family.derive_matrix(i, &family.c[j]);
            let k = upto(i).zip(upto(j)).map(|(a, b)| a.min(b));
            compare(
                &mut report,
                format!("dC({})/d{} = dC({})/d{}", vars[i], vars[j], vars[j], vars[i]),
                &lhs,
                &rhs,
                k,
            );
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let comm = family.c[i].commutator(&family.c[j]);
            let zero = comm.map(|s| s.zero_like());
            compare(
                &mut report,
                format!("[C({}),C({})] = 0", vars[i], vars[j]),
                &comm,
                &zero,
                Some(order),
            );
        }
    }
    let binf = family.binf_series();
    for i in 0..m {
        let comm = family.b0.commutator(&family.c[i]);
        let zero = comm.map(|s| s.zero_like());
        compare(
            &mut report,
            format!("[B0,C({})] = 0", vars[i]),
            &comm,
            &zero,
            Some(order),
        );
        let lhs = family.c[i].add(&family.derive_matrix(i, &family.b0));
        let rhs = binf.commutator(&family.c[i]);
        compare(
            &mut report,
            format!("C({}) + dB0/d{} = [Binf,C({})]", vars[i], vars[i], vars[i]),
            &lhs,
            &rhs,
            upto(i),
        );
    }
    Ok(report)
}

/// Checks that the metric is flat, symmetric, and compatible with `R_inf`, `R_0` and the Higgs field.
///
/// With `R_inf = -B_inf` the condition `R_inf + R_inf^* = -w id` reads
/// `B_inf^T G + G B_inf = w G`; self-adjointness of `R_0` reads `B_0^T G = G B_0`.
pub fn check_metric(family: &PreSaitoFamily) -> Result<Report> {
    let (Some(g), Some(w)) = (&family.g, &family.w) else {
        return Err(Error::Input("family carries no metric".into()));
    };
    if g.det().is_zero() {
        return Err(Error::Input("metric is singular".into()));
    }
    let mut report = Report::new();
    report.push("G symmetric", first_nonzero_rational(&g.sub(&g.transpose())));
    let bt = family.binf.transpose();
    let lhs = bt.mul(g).add(&g.mul(&family.binf));
    report.push(
        "R_inf + R_inf^* = -w id",
        first_nonzero_rational(&lhs.sub(&g.scale(w))),
    );
    let gs = lift(g, &family.ring);
    let adjoint = |m: &SeriesMatrix| first_nonzero(&m.transpose().mul(&gs).sub(&gs.mul(m)));
    report.push("R_0 self-adjoint", adjoint(&family.b0));
    for (name, c) in family.vars().iter().zip(&family.c) {
        report.push(format!("Phi({name}) self-adjoint"), adjoint(c));
    }
    Ok(report)
}
