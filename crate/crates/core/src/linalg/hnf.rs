//! Row-style Hermite normal form with a unimodular certificate.
//!
//! `M = Ω·H` where `Ω` is unimodular and `H` is in echelon form: zero rows
//! at the bottom, pivot columns strictly increasing, pivots positive and the
//! entries above each pivot reduced into `[0, pivot)`.
//!
//! The elimination works column by column. Inside a column the rows below
//! the current pivot row are combined Euclid-style until one nonzero entry
//! is left. Row operations applied to `M` are mirrored as inverse column
//! operations on `Ω`, so the certificate is built without any inversion.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::int::{Checked, Entry, Work};
use super::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    pub omega: IntMatrix,
    pub h: IntMatrix,
}

impl HnfResult {
    /// `(row, column)` of every pivot, top to bottom.
    pub fn pivots(&self) -> Vec<(usize, usize)> {
        pivots_of(&self.h)
    }

    pub fn rank(&self) -> usize {
        self.pivots().len()
    }

    /// Re-checks every defining property against the input `m`.
    pub fn check(&self, m: &IntMatrix) -> Result<(), String> {
        if self.omega.rows() != m.rows() || !self.omega.is_square() {
            return Err("omega has the wrong shape".into());
        }
        if self.h.rows() != m.rows() || self.h.cols() != m.cols() {
            return Err("h has the wrong shape".into());
        }
        if &(&self.omega * &self.h) != m {
            return Err("omega * h does not reproduce the input".into());
        }
        if !self.omega.is_unimodular() {
            return Err("omega is not unimodular".into());
        }
        check_echelon(&self.h)
    }
}

/// Pivot positions of a matrix already in echelon form.
pub fn pivots_of(h: &IntMatrix) -> Vec<(usize, usize)> {
    (0..h.rows())
        .filter_map(|i| h.row(i).iter().position(|x| !x.is_zero()).map(|j| (i, j)))
        .collect()
}

/// Checks the echelon, sign and reduction conditions of a Hermite form.
pub fn check_echelon(h: &IntMatrix) -> Result<(), String> {
    let mut seen_zero = false;
    let mut last_pivot: Option<usize> = None;
    for i in 0..h.rows() {
        match h.row(i).iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(j) => {
                if seen_zero {
                    return Err(format!("nonzero row {i} below a zero row"));
                }
                if last_pivot.is_some_and(|p| j <= p) {
                    return Err(format!("pivot columns not increasing at row {i}"));
                }
                last_pivot = Some(j);
                let p = &h[(i, j)];
                if !p.is_positive() {
                    return Err(format!("pivot at row {i} is not positive"));
                }
                for k in 0..i {
                    let e = &h[(k, j)];
                    if e.is_negative() || e >= p {
                        return Err(format!("entry ({k},{j}) not reduced modulo the pivot"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Hermite normal form of `m` together with its certificate `Ω`.
pub fn hnf(m: &IntMatrix) -> HnfResult {
    if let Some(r) = run::<i64>(m, true) {
        return r;
    }
    run::<BigInt>(m, true).expect("arbitrary precision cannot overflow")
}

/// The Hermite form `H` alone; skips certificate bookkeeping.
pub fn hermite_form(m: &IntMatrix) -> IntMatrix {
    if let Some(r) = run::<i64>(m, false) {
        return r.h;
    }
    run::<BigInt>(m, false)
        .expect("arbitrary precision cannot overflow")
        .h
}

fn run<E: Entry>(m: &IntMatrix, certify: bool) -> Option<HnfResult> {
    let mut a: Work<E> = m.to_work()?;
    let mut omega = certify.then(|| Work::<E>::identity(m.rows()));
    reduce(&mut a, omega.as_mut()).ok()?;
    Some(HnfResult {
        omega: match omega {
            Some(w) => IntMatrix::from_work(&w),
            None => IntMatrix::zeros(0, 0),
        },
        h: IntMatrix::from_work(&a),
    })
}

/// row `dst` -= q * row `src` on `a`; mirrored on `Ω` as column `src` += q * column `dst`.
fn row_op<E: Entry>(
    a: &mut Work<E>,
    omega: &mut Option<&mut Work<E>>,
    dst: usize,
    src: usize,
    q: &E,
    from: usize,
) -> Checked<()> {
    a.row_sub_mul(dst, src, q, from)?;
    if let Some(o) = omega {
        o.col_sub_mul(src, dst, &q.negated()?)?;
    }
    Ok(())
}

fn reduce<E: Entry>(a: &mut Work<E>, mut omega: Option<&mut Work<E>>) -> Checked<()> {
    let (rows, cols) = (a.rows, a.cols);
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        let mut has_pivot = false;
        loop {
            let best = (r..rows)
                .filter(|&i| !a.at(i, j).is_nil())
                .min_by(|&x, &y| a.at(x, j).cmp_abs(a.at(y, j)));
            let Some(p) = best else { break };
            has_pivot = true;
            a.swap_rows(r, p);
            if let Some(o) = omega.as_mut() {
                o.swap_cols(r, p);
            }
            let mut clean = true;
            for i in r + 1..rows {
                if a.at(i, j).is_nil() {
                    continue;
                }
                let q = a.at(i, j).div_floor(a.at(r, j))?;
                row_op(a, &mut omega, i, r, &q, j)?;
                if !a.at(i, j).is_nil() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !has_pivot {
            continue;
        }
        if a.at(r, j).is_neg() {
            a.negate_row(r)?;
            if let Some(o) = omega.as_mut() {
                o.negate_col(r)?;
            }
        }
        for i in 0..r {
            let q = a.at(i, j).div_floor(a.at(r, j))?;
            if !q.is_nil() {
                row_op(a, &mut omega, i, r, &q, j)?;
            }
        }
        r += 1;
    }
    Ok(())
}
