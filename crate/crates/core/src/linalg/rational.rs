use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntMatrix, LinalgError};

/// Reduces `x` into `[0, 2)` by subtracting an even integer.
pub fn mod2(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let k = (x / &two).floor();
    x - k * two
}

/// True iff `x` is an even integer.
pub fn is_even_integer(x: &BigRational) -> bool {
    x.is_integer() && !x.numer().bit(0)
}

/// Exact rational vector. Entries are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn zeros(len: usize) -> Self {
        RationalVector(vec![BigRational::zero(); len])
    }

    pub fn from_integers(v: &[i64]) -> Self {
        RationalVector(
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    /// Parses `p/q` or integer tokens.
    pub fn parse_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Result<Self, String> {
        tokens
            .into_iter()
            .map(|t| {
                let (p, q) = match t.split_once('/') {
                    Some((p, q)) => (p, q),
                    None => (t, "1"),
                };
                let p: BigInt = p.parse().map_err(|_| format!("bad rational `{t}`"))?;
                let q: BigInt = q.parse().map_err(|_| format!("bad rational `{t}`"))?;
                if q.is_zero() {
                    return Err(format!("zero denominator in `{t}`"));
                }
                Ok(BigRational::new(p, q))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(RationalVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every entry reduced into `[0, 2)`.
    pub fn canonical_mod2(&self) -> Self {
        RationalVector(self.0.iter().map(mod2).collect())
    }

    pub fn is_canonical(&self) -> bool {
        let two = BigRational::from_integer(BigInt::from(2));
        self.0.iter().all(|x| !x.is_negative() && x < &two)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// `m·z` in exact arithmetic.
pub fn mul_rational(m: &IntMatrix, z: &RationalVector) -> Vec<BigRational> {
    assert_eq!(m.cols(), z.len());
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(&z.0)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, x)| x * a)
                .sum()
        })
        .collect()
}

/// Leading column of every row; errors unless they strictly increase.
fn staircase(r: &IntMatrix) -> Result<Vec<usize>, LinalgError> {
    let mut lead = Vec::with_capacity(r.rows());
    for i in 0..r.rows() {
        let j = r
            .row(i)
            .iter()
            .position(|x| !x.is_zero())
            .ok_or(LinalgError::NotStaircase { row: i })?;
        if lead.last().is_some_and(|&p| j <= p) {
            return Err(LinalgError::NotStaircase { row: i });
        }
        lead.push(j);
    }
    Ok(lead)
}

/// Exact back substitution on a staircase system `r·z = b`, non-pivot
/// columns set to zero. The result satisfies `r·z = b` exactly.
pub fn back_substitute(r: &IntMatrix, b: &[BigInt]) -> Result<RationalVector, LinalgError> {
    if b.len() != r.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: r.rows(),
            found: b.len(),
        });
    }
    let lead = staircase(r)?;
    let mut z = RationalVector::zeros(r.cols());
    for i in (0..r.rows()).rev() {
        let p = lead[i];
        let mut acc = BigRational::from_integer(b[i].clone());
        for k in p + 1..r.cols() {
            let a = &r[(i, k)];
            if !a.is_zero() && !z.0[k].is_zero() {
                acc -= &z.0[k] * a;
            }
        }
        z.0[p] = acc / BigRational::from_integer(r[(i, p)].clone());
    }
    Ok(z)
}

/// Back substitution followed by reduction of every entry into `[0, 2)`.
/// The result satisfies `r·z ≡ b (mod 2)`.
pub fn solve_triangular_rational(
    r: &IntMatrix,
    b: &[BigInt],
) -> Result<RationalVector, LinalgError> {
    back_substitute(r, b).map(|z| z.canonical_mod2())
}
