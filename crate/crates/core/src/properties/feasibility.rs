//! Exact feasibility of `h_i'θ ∈ S_i` for all `i`, by Fourier–Motzkin elimination.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::LinearConstraint;
use crate::numerics::{int, Mat, Rational};

/// `a'y <= b`
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    a: Vec<Rational>,
    b: Rational,
}

fn dot(a: &[Rational], y: &[Rational]) -> Rational {
    a.iter().zip(y).map(|(x, v)| x * v).sum()
}

fn fourier_motzkin(ineqs: &[Ineq], dim: usize) -> Option<Vec<Rational>> {
    if dim == 0 {
        return ineqs.iter().all(|q| !q.b.is_negative()).then(Vec::new);
    }
    let k = dim - 1;
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for q in ineqs {
        if q.a[k].is_positive() {
            pos.push(q);
        } else if q.a[k].is_negative() {
            neg.push(q);
        } else {
            rest.push(Ineq { a: q.a[..k].to_vec(), b: q.b.clone() });
        }
    }
    for p in &pos {
        for n in &neg {
            let sp = p.a[k].recip();
            let sn = -n.a[k].recip();
            let a: Vec<Rational> = (0..k).map(|i| &p.a[i] * &sp + &n.a[i] * &sn).collect();
            let b = &p.b * &sp + &n.b * &sn;
            rest.push(Ineq { a, b });
        }
    }
    rest.dedup();
    let mut y = fourier_motzkin(&rest, k)?;
    // y_k <= (b - a'y)/a_k for a_k > 0, y_k >= (b - a'y)/a_k for a_k < 0
    let upper = pos.iter().map(|q| (&q.b - dot(&q.a[..k], &y)) / &q.a[k]).min();
    let lower = neg.iter().map(|q| (&q.b - dot(&q.a[..k], &y)) / &q.a[k]).max();
    let v = match (lower, upper) {
        (Some(lo), Some(hi)) => (lo + hi) / int(2),
        (Some(lo), None) => lo,
        (None, Some(hi)) => hi,
        (None, None) => Rational::zero(),
    };
    y.push(v);
    Some(y)
}

/// A parameter vector satisfying every constraint, if any exists.
///
/// The constraint values of an independent subset of the `h_i` are free coordinates;
/// the remaining `h_j` are fixed combinations of them, which gives a small
/// interval-constrained system that is solved once per choice of pieces.
pub fn feasible_point(constraints: &[LinearConstraint], len: usize) -> Option<Vec<Rational>> {
    if constraints.is_empty() {
        return Some(vec![Rational::zero(); len]);
    }
    let h = Mat::from_rows(constraints.iter().map(|c| c.h.clone()).collect());
    let independent = h.transpose().pivot_columns();
    let h_ind = h.select_rows(&independent);
    let r = independent.len();
    let coeffs = h_ind
        .transpose()
        .solve_right(&h.transpose())
        .expect("every row lies in the row space");
    let mut choice = vec![0usize; constraints.len()];
    loop {
        let mut ineqs = Vec::with_capacity(2 * constraints.len());
        for (j, c) in constraints.iter().enumerate() {
            let (lo, hi) = &c.set.pieces()[choice[j]];
            let a = coeffs.column(j);
            ineqs.push(Ineq { a: a.clone(), b: hi.clone() });
            ineqs.push(Ineq { a: a.iter().map(|v| -v).collect(), b: -lo.clone() });
        }
        if let Some(y) = fourier_motzkin(&ineqs, r) {
            let theta = h_ind
                .solve_right(&Mat::column_vector(y))
                .expect("independent rows are onto");
            return Some(theta.column(0));
        }
        // next piece combination
        let mut j = 0;
        loop {
            if j == choice.len() {
                return None;
            }
            choice[j] += 1;
            if choice[j] < constraints[j].set.pieces().len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}
