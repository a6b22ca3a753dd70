//! Smith normal form over the integers, exact arithmetic throughout.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries, all positive and in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut cleared = true;
            for i in t + 1..rows {
                let q = d.get(i, t) / &pivot;
                if !q.is_zero() {
                    let neg = -q;
                    d.add_row(i, t, &neg);
                    u.add_row(i, t, &neg);
                }
                cleared &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = d.get(t, j) / &pivot;
                if !q.is_zero() {
                    let neg = -q;
                    d.add_col(j, t, &neg);
                    v.add_col(j, t, &neg);
                }
                cleared &= d.get(t, j).is_zero();
            }
            if !cleared {
                // a remainder smaller than the pivot is left; pivot again on it
                continue;
            }
            if let Some(i) = non_divisible_row(&d, t, &pivot) {
                d.add_row(t, i, &BigInt::from(1));
                u.add_row(t, i, &BigInt::from(1));
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn non_divisible_row(d: &IntMatrix, t: usize, pivot: &BigInt) -> Option<usize> {
    (t + 1..d.rows()).find(|&i| (t + 1..d.cols()).any(|j| !(d.get(i, j) % pivot).is_zero()))
}
