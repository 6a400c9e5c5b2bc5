use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Classification, ClassifyError, Method};
use crate::game::{defining_system, XorGame};
use crate::linalg::{
    hermite_form, solve_mod2, solve_triangular_rational, IntMatrix, LinalgError,
};

/// Block split of the Hermite form of `(Γ | S)`:
///
/// ```text
/// H = ( R  b1 )
///     ( 0  b2 )
/// ```
///
/// Only the first entry of `b2` can be nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfPartition {
    /// Pivot rows restricted to the coefficient columns.
    pub r: IntMatrix,
    /// Last-column entries of the `r` rows.
    pub b1: Vec<BigInt>,
    /// Last-column entries of the remaining rows.
    pub b2: Vec<BigInt>,
}

impl HnfPartition {
    /// Splits an augmented Hermite form. A row belongs to the `b2` block iff
    /// it vanishes on every coefficient column.
    pub fn split(h: &IntMatrix) -> Self {
        assert!(h.cols() >= 1, "augmented matrix needs a right-hand side column");
        let coeffs = h.cols() - 1;
        let mut r_rows = Vec::new();
        let mut b1 = Vec::new();
        let mut b2 = Vec::new();
        for i in 0..h.rows() {
            let row = h.row(i);
            if row[..coeffs].iter().all(Zero::is_zero) {
                b2.push(row[coeffs].clone());
            } else {
                r_rows.push(row[..coeffs].to_vec());
                b1.push(row[coeffs].clone());
            }
        }
        let r = if r_rows.is_empty() {
            IntMatrix::zeros(0, coeffs)
        } else {
            IntMatrix::from_rows(&r_rows)
        };
        HnfPartition { r, b1, b2 }
    }

    pub fn of_system(gamma: &IntMatrix, s: &[BigInt]) -> Self {
        let s = IntMatrix::from_fn(s.len(), 1, |i, _| s[i].clone());
        Self::split(&hermite_form(&gamma.hconcat(&s)))
    }

    pub fn b2_even(&self) -> bool {
        self.b2.iter().all(|x| !x.bit(0))
    }

    /// `R` square with every pivot equal to one, i.e. `det R = ±1`.
    pub fn r_is_unimodular(&self) -> bool {
        self.r.is_square() && (0..self.r.rows()).all(|i| self.r[(i, i)].is_one())
    }
}

pub fn classify_hnf(game: &XorGame) -> Classification {
    let sys = defining_system(game);
    let part = HnfPartition::split(&hermite_form(&sys.augmented()));
    if !part.b2_even() {
        return Classification {
            q_perfect: false,
            c_perfect: false,
            merp: None,
            classical: None,
            method: Method::Hnf,
        };
    }
    let merp = solve_triangular_rational(&part.r, &part.b1)
        .expect("pivot rows of a Hermite form form a staircase");
    let classical = solve_mod2(&sys.gamma, &sys.s_vec).expect("shapes match by construction");
    Classification {
        q_perfect: true,
        c_perfect: classical.is_some(),
        merp: Some(merp),
        classical,
        method: Method::Hnf,
    }
}

/// Whether `Γz ≡ S (mod 2)` has exactly one rational solution modulo 2.
pub fn unique_merp(gamma: &IntMatrix, s_vec: &[BigInt]) -> Result<bool, ClassifyError> {
    if s_vec.len() != gamma.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: gamma.rows(),
            found: s_vec.len(),
        }
        .into());
    }
    let part = HnfPartition::of_system(gamma, s_vec);
    if !part.b2_even() {
        return Err(ClassifyError::NotQPerfect);
    }
    Ok(part.r_is_unimodular())
}
