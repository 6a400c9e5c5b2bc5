//! Linear systems over GF(2) with 64-bit packed rows.

use num_bigint::BigInt;

use super::{IntMatrix, LinalgError};

/// Augmented system `(A | b)` over GF(2); the right-hand side is stored as
/// bit `cols` of each row.
#[derive(Debug, Clone)]
pub struct Gf2System {
    cols: usize,
    words: usize,
    rows: usize,
    data: Vec<u64>,
}

/// Outcome of forward elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2Echelon {
    /// Rank of the coefficient part.
    pub rank: usize,
    pub consistent: bool,
}

impl Gf2System {
    pub fn new(cols: usize) -> Self {
        Gf2System {
            cols,
            words: (cols + 1).div_ceil(64),
            rows: 0,
            data: Vec::new(),
        }
    }

    /// Adds the equation `Σ_{j ∈ ones} x_j = rhs`. Repeated indices cancel.
    pub fn push_equation(&mut self, ones: impl IntoIterator<Item = usize>, rhs: bool) {
        let base = self.data.len();
        self.data.resize(base + self.words, 0);
        let row = &mut self.data[base..];
        for j in ones {
            debug_assert!(j < self.cols);
            row[j / 64] ^= 1 << (j % 64);
        }
        if rhs {
            row[self.cols / 64] |= 1 << (self.cols % 64);
        }
        self.rows += 1;
    }

    /// Room for `rows` equations without reallocating.
    pub fn with_capacity(cols: usize, rows: usize) -> Self {
        let mut sys = Gf2System::new(cols);
        sys.data.reserve(rows * sys.words);
        sys
    }

    fn bit(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Reduces to echelon form; with `full`, entries above pivots are
    /// cleared too. Returns the pivot columns and whether the system is
    /// consistent.
    fn eliminate(&mut self, full: bool) -> (Vec<usize>, bool) {
        let w = self.words;
        let mut pivots = Vec::new();
        let mut pivot_row = vec![0u64; w];
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (word, mask) = (j / 64, 1u64 << (j % 64));
            let Some(p) = (r..self.rows).find(|&i| self.data[i * w + word] & mask != 0) else {
                continue;
            };
            if p != r {
                let (x, y) = self.data.split_at_mut(p * w);
                x[r * w..(r + 1) * w].swap_with_slice(&mut y[..w]);
            }
            pivot_row.copy_from_slice(&self.data[r * w..(r + 1) * w]);
            let tail = &pivot_row[word..];
            let from = if full { 0 } else { r + 1 };
            for (i, row) in self.data.chunks_exact_mut(w).enumerate().skip(from) {
                if i != r && row[word] & mask != 0 {
                    for (a, b) in row[word..].iter_mut().zip(tail) {
                        *a ^= *b;
                    }
                }
            }
            pivots.push(j);
            r += 1;
        }
        let consistent = (r..self.rows).all(|i| !self.bit(i, self.cols));
        (pivots, consistent)
    }

    /// Rank of the coefficient part and solvability, without back
    /// substitution.
    pub fn echelon(mut self) -> Gf2Echelon {
        let (pivots, consistent) = self.eliminate(false);
        Gf2Echelon {
            rank: pivots.len(),
            consistent,
        }
    }

    /// Gaussian elimination. Returns one solution (free variables zero) or
    /// `None` when the system is inconsistent.
    pub fn solve(mut self) -> Option<Vec<u8>> {
        let (pivots, consistent) = self.eliminate(true);
        if !consistent {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (i, &j) in pivots.iter().enumerate() {
            x[j] = u8::from(self.bit(i, self.cols));
        }
        Some(x)
    }
}

/// Solves `a·x ≡ b (mod 2)`; entries of `a` and `b` are reduced mod 2 first.
pub fn solve_mod2(a: &IntMatrix, b: &[u8]) -> Result<Option<Vec<u8>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let mut sys = Gf2System::new(a.cols());
    for (i, &bi) in b.iter().enumerate() {
        let ones = a
            .row(i)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.bit(0))
            .map(|(j, _)| j);
        sys.push_equation(ones, bi & 1 == 1);
    }
    Ok(sys.solve())
}

/// Residue mod 2 of every entry, as `0`/`1`.
pub fn parity_vector(v: &[BigInt]) -> Vec<u8> {
    v.iter().map(|x| u8::from(x.bit(0))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let x = solve_mod2(&IntMatrix::identity(3), &[1, 0, 1]).unwrap();
        assert_eq!(x, Some(vec![1, 0, 1]));
    }

    #[test]
    fn inconsistent_pair() {
        let a = IntMatrix::from_rows(&[[1], [1]]);
        assert_eq!(solve_mod2(&a, &[0, 1]).unwrap(), None);
    }

    #[test]
    fn even_coefficients_vanish() {
        let a = IntMatrix::from_rows(&[[2, 3], [-1, 4]]);
        // mod 2: [0 1; 1 0]
        assert_eq!(solve_mod2(&a, &[1, 0]).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(solve_mod2(&IntMatrix::identity(2), &[1]).is_err());
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let n = 150;
        let mut sys = Gf2System::new(n);
        // x_i + x_{i+1} = 1 chain, x_0 = 1
        sys.push_equation([0], true);
        for i in 0..n - 1 {
            sys.push_equation([i, i + 1], true);
        }
        let x = sys.solve().unwrap();
        for (i, &xi) in x.iter().enumerate() {
            assert_eq!(xi as usize, (i + 1) % 2);
        }
    }

    #[test]
    fn negative_odd_entries_count_as_one() {
        let a = IntMatrix::from_rows(&[[-3]]);
        assert_eq!(solve_mod2(&a, &[1]).unwrap(), Some(vec![1]));
    }
}
