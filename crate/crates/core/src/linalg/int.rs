//! Scalar abstraction shared by the normal-form routines.
//!
//! Every elimination runs first on checked `i64` and restarts on `BigInt`
//! when an intermediate value leaves the machine range. Overflow is always
//! detected; it is never wrapped.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Raised by the `i64` path when a result does not fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = Result<T, Overflow>;

pub(crate) trait Entry: Clone + std::fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    /// `self - q * x`
    fn sub_mul(&self, q: &Self, x: &Self) -> Checked<Self>;
    fn negated(&self) -> Checked<Self>;
    /// Floor division; `d` is nonzero.
    fn div_floor(&self, d: &Self) -> Checked<Self>;
    /// True when `d` divides `self`; `d` is nonzero.
    fn divisible_by(&self, d: &Self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    #[inline]
    fn sub_mul(&self, q: &Self, x: &Self) -> Checked<Self> {
        q.checked_mul(*x)
            .and_then(|p| self.checked_sub(p))
            .ok_or(Overflow)
    }
    fn negated(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn div_floor(&self, d: &Self) -> Checked<Self> {
        if *d == -1 && *self == i64::MIN {
            return Err(Overflow);
        }
        Ok(Integer::div_floor(self, d))
    }
    fn divisible_by(&self, d: &Self) -> bool {
        // i64::MIN % -1 panics in debug builds
        *d == -1 || self % d == 0
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Checked<Self> {
        Ok(self - q * x)
    }
    fn negated(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn div_floor(&self, d: &Self) -> Checked<Self> {
        Ok(Integer::div_floor(self, d))
    }
    fn divisible_by(&self, d: &Self) -> bool {
        Zero::is_zero(&Integer::mod_floor(self, d))
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Dense row-major scratch matrix used inside eliminations.
#[derive(Debug, Clone)]
pub(crate) struct Work<E> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<E>,
}

impl<E: Entry> Work<E> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![E::nil(); n * n];
        for i in 0..n {
            data[i * n + i] = E::unit();
        }
        Work { rows: n, cols: n, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    /// row `dst` -= q * row `src`, restricted to columns `from..`.
    pub fn row_sub_mul(&mut self, dst: usize, src: usize, q: &E, from: usize) -> Checked<()> {
        let c = self.cols;
        for k in from..c {
            let x = &self.data[src * c + k];
            if x.is_nil() {
                continue;
            }
            let v = self.data[dst * c + k].sub_mul(q, x)?;
            self.data[dst * c + k] = v;
        }
        Ok(())
    }

    /// column `dst` -= q * column `src`.
    pub fn col_sub_mul(&mut self, dst: usize, src: usize, q: &E) -> Checked<()> {
        let c = self.cols;
        for i in 0..self.rows {
            let x = &self.data[i * c + src];
            if x.is_nil() {
                continue;
            }
            let v = self.data[i * c + dst].sub_mul(q, x)?;
            self.data[i * c + dst] = v;
        }
        Ok(())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for k in 0..c {
            self.data.swap(a * c + k, b * c + k);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for i in 0..self.rows {
            self.data.swap(i * c + a, i * c + b);
        }
    }

    pub fn negate_row(&mut self, r: usize) -> Checked<()> {
        let c = self.cols;
        for k in 0..c {
            let v = self.data[r * c + k].negated()?;
            self.data[r * c + k] = v;
        }
        Ok(())
    }

    pub fn negate_col(&mut self, col: usize) -> Checked<()> {
        let c = self.cols;
        for i in 0..self.rows {
            let v = self.data[i * c + col].negated()?;
            self.data[i * c + col] = v;
        }
        Ok(())
    }
}
