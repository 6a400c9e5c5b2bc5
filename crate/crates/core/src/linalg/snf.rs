//! Smith normal form `M = Ω·D·Ψ` with both unimodular factors and their
//! inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::int::{Checked, Entry, Work};
use super::{IntMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub omega: IntMatrix,
    pub d: IntMatrix,
    pub psi: IntMatrix,
    /// `Ω⁻¹`, the accumulated row transform.
    pub omega_inv: IntMatrix,
    /// `Ψ⁻¹`, the accumulated column transform.
    pub psi_inv: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `D`, length `min(rows, cols)`; nonzero entries first.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// The nonzero invariant factors `d_1 | d_2 | … | d_r`.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    /// `d_j` for every row index `j`, treating rows past the diagonal as zero.
    pub fn row_invariant(&self, j: usize) -> BigInt {
        if j < self.d.cols() {
            self.d[(j, j)].clone()
        } else {
            BigInt::zero()
        }
    }

    pub fn check(&self, m: &IntMatrix) -> Result<(), String> {
        let (r, c) = (m.rows(), m.cols());
        if self.omega.rows() != r || !self.omega.is_square() {
            return Err("omega has the wrong shape".into());
        }
        if self.psi.rows() != c || !self.psi.is_square() {
            return Err("psi has the wrong shape".into());
        }
        if &(&self.omega * &(&self.d * &self.psi)) != m {
            return Err("omega * d * psi does not reproduce the input".into());
        }
        if !self.omega.is_unimodular() || !self.psi.is_unimodular() {
            return Err("a transform is not unimodular".into());
        }
        if &self.omega * &self.omega_inv != IntMatrix::identity(r)
            || &self.psi * &self.psi_inv != IntMatrix::identity(c)
        {
            return Err("stored inverse is wrong".into());
        }
        for i in 0..r {
            for j in 0..c {
                if i != j && !self.d[(i, j)].is_zero() {
                    return Err(format!("d has off-diagonal entry at ({i},{j})"));
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return Err("negative invariant".into());
        }
        for w in diag.windows(2) {
            if w[0].is_zero() {
                if !w[1].is_zero() {
                    return Err("zero invariant before a nonzero one".into());
                }
            } else if !w[1].is_multiple_of(&w[0]) {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        Ok(())
    }
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    if let Some(r) = run::<i64>(m) {
        return r;
    }
    run::<BigInt>(m).expect("arbitrary precision cannot overflow")
}

/// Decides whether `m·ξ = b` has an integer solution `ξ`.
pub fn integer_solvable(m: &IntMatrix, b: &[BigInt]) -> Result<bool, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let f = snf(m);
    let c = f.omega_inv.mul_vec(b);
    Ok(c.iter().enumerate().all(|(i, ci)| {
        let d = f.row_invariant(i);
        if d.is_zero() {
            ci.is_zero()
        } else {
            ci.is_multiple_of(&d)
        }
    }))
}

struct Tracked<E> {
    a: Work<E>,
    omega: Work<E>,
    omega_inv: Work<E>,
    psi: Work<E>,
    psi_inv: Work<E>,
}

impl<E: Entry> Tracked<E> {
    /// row `dst` -= q * row `src`
    fn row_sub(&mut self, dst: usize, src: usize, q: &E) -> Checked<()> {
        self.a.row_sub_mul(dst, src, q, 0)?;
        self.omega_inv.row_sub_mul(dst, src, q, 0)?;
        self.omega.col_sub_mul(src, dst, &q.negated()?)
    }

    /// column `dst` -= q * column `src`
    fn col_sub(&mut self, dst: usize, src: usize, q: &E) -> Checked<()> {
        self.a.col_sub_mul(dst, src, q)?;
        self.psi_inv.col_sub_mul(dst, src, q)?;
        self.psi.row_sub_mul(src, dst, &q.negated()?, 0)
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.omega_inv.swap_rows(x, y);
        self.omega.swap_cols(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.psi_inv.swap_cols(x, y);
        self.psi.swap_rows(x, y);
    }

    fn negate_row(&mut self, r: usize) -> Checked<()> {
        self.a.negate_row(r)?;
        self.omega_inv.negate_row(r)?;
        self.omega.negate_col(r)
    }

    /// Moves the smallest nonzero entry of the trailing block to `(t, t)`.
    fn place_min(&mut self, t: usize, whole_block: bool) -> bool {
        let (rows, cols) = (self.a.rows, self.a.cols);
        let mut best: Option<(usize, usize)> = None;
        let mut consider = |i: usize, j: usize, a: &Work<E>| {
            let v = a.at(i, j);
            if !v.is_nil() && best.is_none_or(|(bi, bj)| v.cmp_abs(a.at(bi, bj)).is_lt()) {
                best = Some((i, j));
            }
        };
        if whole_block {
            for i in t..rows {
                for j in t..cols {
                    consider(i, j, &self.a);
                }
            }
        } else {
            for i in t..rows {
                consider(i, t, &self.a);
            }
            for j in t + 1..cols {
                consider(t, j, &self.a);
            }
        }
        match best {
            Some((i, j)) => {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                true
            }
            None => false,
        }
    }

    fn reduce(&mut self) -> Checked<()> {
        let (rows, cols) = (self.a.rows, self.a.cols);
        for t in 0..rows.min(cols) {
            if !self.place_min(t, true) {
                break;
            }
            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if self.a.at(i, t).is_nil() {
                        continue;
                    }
                    let q = self.a.at(i, t).div_floor(self.a.at(t, t))?;
                    self.row_sub(i, t, &q)?;
                    clean &= self.a.at(i, t).is_nil();
                }
                for j in t + 1..cols {
                    if self.a.at(t, j).is_nil() {
                        continue;
                    }
                    let q = self.a.at(t, j).div_floor(self.a.at(t, t))?;
                    self.col_sub(j, t, &q)?;
                    clean &= self.a.at(t, j).is_nil();
                }
                if !clean {
                    self.place_min(t, false);
                    continue;
                }
                let pivot = self.a.at(t, t).clone();
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !self.a.at(i, j).divisible_by(&pivot))
                });
                match offender {
                    // row t is zero off the pivot, so adding row i exposes a
                    // remainder in row t on the next pass
                    Some(i) => self.row_sub(t, i, &E::unit().negated()?)?,
                    None => break,
                }
            }
            if self.a.at(t, t).is_neg() {
                self.negate_row(t)?;
            }
        }
        Ok(())
    }
}

fn run<E: Entry>(m: &IntMatrix) -> Option<SnfResult> {
    let mut t = Tracked {
        a: m.to_work::<E>()?,
        omega: Work::identity(m.rows()),
        omega_inv: Work::identity(m.rows()),
        psi: Work::identity(m.cols()),
        psi_inv: Work::identity(m.cols()),
    };
    t.reduce().ok()?;
    Some(SnfResult {
        omega: IntMatrix::from_work(&t.omega),
        d: IntMatrix::from_work(&t.a),
        psi: IntMatrix::from_work(&t.psi),
        omega_inv: IntMatrix::from_work(&t.omega_inv),
        psi_inv: IntMatrix::from_work(&t.psi_inv),
    })
}
