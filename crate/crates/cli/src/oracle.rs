//! Wide-bound brute-force cross-check of the positivity search.
//!
//! The oracle shares no enumeration code with the library search: it walks
//! coordinates position by position, decides membership through the lattice's
//! Smith solver and evaluates pairings from the frame Gram matrix.

use std::cmp::Ordering;

use k3evenset_core::exactlin::{Int, Rat};
use k3evenset_core::lattice::{inner, FrameVector, IntegerLattice};
use k3evenset_core::positivity::{PositivityReport, PositivityStatus};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("the oracle needs a rank-9 frame diag(2d, -2, ..., -2)")]
    UnsupportedFrame,
    #[error("coordinates exceed machine range")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] k3evenset_core::lattice::LatticeError),
}

/// A candidate root `C = x / den` with the sign of `D·C`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Obstruction {
    pub x: [i64; 9],
    pub den: i64,
    pub sign: Ordering,
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// Largest `a` scanned.
    pub bound: Rat,
    pub obstructions: Vec<Obstruction>,
    pub discrepancies: Vec<String>,
}

fn frame_d(ns: &IntegerLattice) -> Result<i64, OracleError> {
    let g = ns.frame().gram();
    if g.rows() != 9 {
        return Err(OracleError::UnsupportedFrame);
    }
    for i in 0..9 {
        for j in 0..9 {
            let ok = match (i == j, i) {
                (false, _) => g[(i, j)].is_zero(),
                (true, 0) => true,
                (true, _) => g[(i, j)] == Int::from(-2),
            };
            if !ok {
                return Err(OracleError::UnsupportedFrame);
            }
        }
    }
    let two_d = g[(0, 0)].to_i64().ok_or(OracleError::Overflow)?;
    if two_d <= 0 || two_d % 2 != 0 {
        return Err(OracleError::UnsupportedFrame);
    }
    Ok(two_d / 2)
}

/// Every non-positive `(x_1..x_8)` with `sum x_i^2 = total`, one slot at a time.
fn walk(total: i64, slot: usize, cur: &mut [i64; 8], f: &mut impl FnMut(&[i64; 8])) {
    if slot == 8 {
        if total == 0 {
            f(cur);
        }
        return;
    }
    let mut m = 0i64;
    while m * m <= total {
        cur[slot] = -m;
        walk(total - m * m, slot + 1, cur, f);
        m += 1;
    }
    cur[slot] = 0;
}

/// Scans all roots `C = aL + sum b_i N_i` with `0 < a <= a_bound`, `b_i <= 0`,
/// plus the eight `N_i`, and keeps those with `D·C <= 0`.
pub fn brute_force_obstructions(
    ns: &IntegerLattice,
    dvec: &FrameVector,
    a_bound: &Rat,
) -> Result<Vec<Obstruction>, OracleError> {
    let d = frame_d(ns)?;
    let (_, den) = ns.basis_matrix().to_common_denominator();
    let den = den.to_i64().ok_or(OracleError::Overflow)?;
    let x0_max = (a_bound * Rat::from_integer(Int::from(den))).floor().to_integer().to_i64().ok_or(OracleError::Overflow)?;
    let ydvec: Vec<i128> =
        dvec.numerators().iter().map(|v| v.to_i128().ok_or(OracleError::Overflow)).collect::<Result<_, _>>()?;
    // sign of D·C = sign of (2d x0 y0 - 2 sum x_i y_i)
    let sign = |x: &[i64; 9]| -> Ordering {
        let s = 2 * i128::from(d) * i128::from(x[0]) * ydvec[0]
            - 2 * (1..9).map(|i| i128::from(x[i]) * ydvec[i]).sum::<i128>();
        s.cmp(&0)
    };
    let frame = ns.frame().clone();
    let mut out = Vec::new();
    let mut failure = None;
    for x0 in 1..=x0_max {
        let total = d * x0 * x0 + den * den;
        let mut cur = [0i64; 8];
        walk(total, 0, &mut cur, &mut |tail| {
            let mut x = [0i64; 9];
            x[0] = x0;
            x[1..].copy_from_slice(tail);
            let s = sign(&x);
            if s == Ordering::Greater || failure.is_some() {
                return;
            }
            let v = FrameVector::new(&frame, x.iter().map(|&c| Int::from(c)).collect(), Int::from(den))
                .expect("nine coordinates");
            match ns.contains(&v) {
                Ok(true) => out.push(Obstruction { x, den, sign: s }),
                Ok(false) => {}
                Err(e) => failure = Some(e),
            }
        });
    }
    if let Some(e) = failure {
        return Err(e.into());
    }
    for i in 1..9 {
        let mut num = vec![Int::zero(); 9];
        num[i] = Int::from(1);
        let n = FrameVector::new(&frame, num, Int::from(1))?;
        if !ns.contains(&n)? {
            continue;
        }
        let p = inner(dvec, &n)?;
        if !p.is_positive() {
            let mut x = [0i64; 9];
            x[i] = den;
            out.push(Obstruction { x, den, sign: p.cmp(&Rat::zero()) });
        }
    }
    out.sort();
    Ok(out)
}

/// Status implied by an obstruction list, mirroring the definitions.
fn status_from(obstructions: &[Obstruction], d2: &Int) -> (PositivityStatus, Option<[i64; 9]>) {
    let first = |o: Ordering| obstructions.iter().find(|c| c.sign == o).map(|c| c.x);
    if let Some(w) = first(Ordering::Less) {
        (PositivityStatus::NotNef, Some(w))
    } else if d2.is_zero() {
        (PositivityStatus::Nef, first(Ordering::Equal))
    } else if let Some(w) = first(Ordering::Equal) {
        (PositivityStatus::PseudoAmple, Some(w))
    } else {
        (PositivityStatus::Ample, None)
    }
}

/// Re-derives a report from a scan over `a <= max(3 a_max, 1)`.
pub fn cross_check(ns: &IntegerLattice, report: &PositivityReport) -> Result<OracleOutcome, OracleError> {
    let three = Rat::from_integer(Int::from(3));
    let bound = (&report.search_bound * three).max(Rat::from_integer(Int::from(1)));
    let mut obstructions = brute_force_obstructions(ns, &report.divisor, &bound)?;
    if report.self_intersection.is_zero() {
        // for D^2 = 0 the bound certifies only D·C < 0; orthogonal roots are reported among the N_i
        obstructions.retain(|o| o.sign == Ordering::Less || o.x[0] == 0);
    }
    let mut discrepancies = Vec::new();
    let d2 = inner(&report.divisor, &report.divisor)?;
    if d2 != Rat::from_integer(report.self_intersection.clone()) {
        discrepancies.push(format!("self-intersection: oracle {d2}, report {}", report.self_intersection));
    }
    for o in &obstructions {
        let a = Rat::new(Int::from(o.x[0]), Int::from(o.den));
        if a > report.search_bound {
            discrepancies.push(format!("root {:?}/{} with a = {a} lies beyond the proven bound", o.x, o.den));
        }
    }
    let (status, witness) = status_from(&obstructions, &report.self_intersection);
    if status != report.status {
        discrepancies.push(format!("status: oracle {}, report {}", status.as_str(), report.status.as_str()));
    }
    let witness = match witness {
        Some(x) => Some(FrameVector::new(
            ns.frame(),
            x.iter().map(|&c| Int::from(c)).collect(),
            Int::from(obstructions[0].den),
        )?),
        None => None,
    };
    if witness != report.witness {
        discrepancies.push(format!("witness: oracle {witness:?}, report {:?}", report.witness));
    }
    if let Some(w) = &report.witness {
        let w2 = inner(w, w)?;
        let dw = inner(&report.divisor, w)?;
        let claimed_ok = match report.status {
            PositivityStatus::NotNef => dw.is_negative(),
            _ => dw.is_zero(),
        };
        if w2 != Rat::from_integer(Int::from(-2)) || !claimed_ok || !ns.contains(w)? {
            discrepancies.push(format!("witness {w:?} fails its claim (square {w2}, pairing {dw})"));
        }
    }
    Ok(OracleOutcome { bound, obstructions, discrepancies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use k3evenset_core::families::{LClasses, NsFamily};
    use k3evenset_core::positivity::classify_positivity;

    #[test]
    fn walk_counts_representations() {
        // non-positive solutions of sum x_i^2 = 2 in 8 slots: choose two positions
        let mut n = 0;
        walk(2, 0, &mut [0; 8], &mut |_| n += 1);
        assert_eq!(n, 28);
    }

    #[test]
    fn oracle_agrees_on_small_cases() {
        for d in 2..=6 {
            let ns = NsFamily::l(d).make().unwrap();
            let c = LClasses::new(ns.frame());
            for dv in [c.l.clone(), c.l.sub(&c.nhat).unwrap(), c.l.sub(c.n(1)).unwrap()] {
                let r = classify_positivity(&ns, &dv).unwrap();
                let o = cross_check(&ns, &r).unwrap();
                assert!(o.discrepancies.is_empty(), "d = {d}: {:?}", o.discrepancies);
            }
        }
    }

    #[test]
    fn oracle_sees_the_pseudo_ample_witness() {
        let ns = NsFamily::l(3).make().unwrap();
        let c = LClasses::new(ns.frame());
        let o = brute_force_obstructions(&ns, &c.l, &Rat::from_integer(Int::from(1))).unwrap();
        assert!(o.iter().any(|x| x.sign == Ordering::Equal));
    }
}
