//! Scoring of deterministic and MERP strategies.
//!
//! A MERP strategy has player α answer question `j` by measuring its share
//! of `|GHZ⟩ = (|000⟩ + |111⟩)/√2` in the basis of
//! `O(θ) = cos θ·σx + sin θ·σy` with `θ = π·z`, entry `(α-1)·n + j` of `z`.
//! The three-party correlation is then `cos(π(z_a + z_b + z_c))`, which the
//! simulator here reproduces from the state vector.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::game::XorGame;
use crate::linalg::{is_even_integer, mod2, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("strategy has {found} entries, game needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry {index} of a deterministic strategy is not 0 or 1")]
    NotBinary { index: usize },
    #[error("exhaustive search over 2^{bits} assignments is too large")]
    SearchTooLarge { bits: usize },
}

/// Phases `z ∈ [0, 2)^{3n}`, canonicalised on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MerpStrategy {
    z: RationalVector,
}

impl MerpStrategy {
    pub fn new(z: RationalVector) -> Self {
        MerpStrategy {
            z: z.canonical_mod2(),
        }
    }

    pub fn z(&self) -> &RationalVector {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Answers `x ∈ {0,1}^{3n}`, same indexing as [`MerpStrategy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalStrategy {
    x: Vec<u8>,
}

impl ClassicalStrategy {
    pub fn new(x: Vec<u8>) -> Result<Self, StrategyError> {
        if let Some(index) = x.iter().position(|&b| b > 1) {
            return Err(StrategyError::NotBinary { index });
        }
        Ok(ClassicalStrategy { x })
    }

    pub fn x(&self) -> &[u8] {
        &self.x
    }

    /// The same answers read as phases; `cos(π·x)` is `±1`.
    pub fn as_merp(&self) -> MerpStrategy {
        MerpStrategy::new(RationalVector(
            self.x
                .iter()
                .map(|&b| BigRational::from_integer(BigInt::from(b)))
                .collect(),
        ))
    }
}

fn check_len(game: &XorGame, len: usize) -> Result<(), StrategyError> {
    if len == game.unknowns() {
        Ok(())
    } else {
        Err(StrategyError::DimensionMismatch {
            expected: game.unknowns(),
            found: len,
        })
    }
}

/// Fraction of clauses the deterministic strategy wins.
pub fn classical_score(
    game: &XorGame,
    strat: &ClassicalStrategy,
) -> Result<BigRational, StrategyError> {
    check_len(game, strat.x.len())?;
    let won = game
        .clauses()
        .iter()
        .filter(|cl| {
            let sum: u8 = cl.columns(game.n()).iter().map(|&j| strat.x[j]).sum();
            sum % 2 == cl.s
        })
        .count();
    Ok(BigRational::new(won.into(), game.m().into()))
}

/// Best deterministic score by enumerating all `2^{3n}` assignments.
pub fn best_classical_score(game: &XorGame) -> Result<BigRational, StrategyError> {
    let bits = game.unknowns();
    if bits > 24 {
        return Err(StrategyError::SearchTooLarge { bits });
    }
    let cols: Vec<[usize; 3]> = game.clauses().iter().map(|c| c.columns(game.n())).collect();
    let best = (0u32..1 << bits)
        .map(|mask| {
            cols.iter()
                .zip(game.clauses())
                .filter(|([a, b, c], cl)| {
                    ((mask >> a) ^ (mask >> b) ^ (mask >> c)) & 1 == u32::from(cl.s)
                })
                .count()
        })
        .max()
        .unwrap_or(0);
    Ok(BigRational::new(best.into(), game.m().into()))
}

/// Exact phase argument `z_a + z_b + z_c − s` of every clause, reduced into `[0, 2)`.
fn arguments(game: &XorGame, strat: &MerpStrategy) -> Result<Vec<BigRational>, StrategyError> {
    check_len(game, strat.len())?;
    let z = &strat.z.0;
    Ok(game
        .clauses()
        .iter()
        .map(|cl| {
            let [a, b, c] = cl.columns(game.n());
            mod2(&(&z[a] + &z[b] + &z[c] - BigRational::from_integer(cl.s.into())))
        })
        .collect())
}

/// `½ + (1/2m) Σ cos(π(z_a + z_b + z_c − s))`.
///
/// Arguments are reduced exactly before the cosine, so a perfect strategy
/// scores exactly `1.0`.
pub fn merp_score(game: &XorGame, strat: &MerpStrategy) -> Result<f64, StrategyError> {
    let args = arguments(game, strat)?;
    let total: f64 = args.iter().map(cos_pi).sum();
    Ok(0.5 + total / (2.0 * game.m() as f64))
}

fn cos_pi(t: &BigRational) -> f64 {
    if t.is_zero() {
        1.0
    } else {
        (PI * t.to_f64().expect("reduced argument is in [0, 2)")).cos()
    }
}

/// True iff every clause argument is an even integer.
pub fn is_perfect_merp(game: &XorGame, strat: &MerpStrategy) -> Result<bool, StrategyError> {
    check_len(game, strat.len())?;
    let z = &strat.z.0;
    Ok(game.clauses().iter().all(|cl| {
        let [a, b, c] = cl.columns(game.n());
        is_even_integer(&(&z[a] + &z[b] + &z[c] - BigRational::from_integer(cl.s.into())))
    }))
}

/// Three-qubit state, amplitude `k` belonging to basis state `|k₂k₁k₀⟩`
/// with qubit 0 held by the first player.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: [Complex64; 8],
}

type Op = [[Complex64; 2]; 2];

impl StateVector {
    pub fn ghz() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amplitudes = [Complex64::zero(); 8];
        amplitudes[0] = h;
        amplitudes[7] = h;
        StateVector { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    fn apply(&self, qubit: usize, op: &Op) -> StateVector {
        let mut out = [Complex64::zero(); 8];
        for (k, amp) in self.amplitudes.iter().enumerate() {
            let bit = (k >> qubit) & 1;
            for (row, entry) in op.iter().enumerate() {
                let target = (k & !(1 << qubit)) | (row << qubit);
                out[target] += entry[bit] * amp;
            }
        }
        StateVector { amplitudes: out }
    }

    /// `⟨ψ| O₀ ⊗ O₁ ⊗ O₂ |ψ⟩`.
    fn expectation(&self, ops: [&Op; 3]) -> Complex64 {
        let mut phi = self.clone();
        for (q, op) in ops.iter().enumerate() {
            phi = phi.apply(q, op);
        }
        self.amplitudes
            .iter()
            .zip(&phi.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// `R σx R†` with `R = exp(−iθσz/2)`, i.e. `cos θ·σx + sin θ·σy`.
fn rotated_sigma_x(theta: f64) -> Op {
    let r = [Complex64::from_polar(1.0, -theta / 2.0), Complex64::from_polar(1.0, theta / 2.0)];
    let sx = [[Complex64::zero(), Complex64::new(1.0, 0.0)], [Complex64::new(1.0, 0.0), Complex64::zero()]];
    let mut out = [[Complex64::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = r[i] * sx[i][j] * r[j].conj();
        }
    }
    out
}

/// Per-clause win probabilities `(1 + (−1)^s·E)/2`, with `E` computed from
/// the GHZ state vector.
pub fn simulate_merp(game: &XorGame, strat: &MerpStrategy) -> Result<Vec<f64>, StrategyError> {
    check_len(game, strat.len())?;
    let ghz = StateVector::ghz();
    let ops: Vec<Op> = strat
        .z
        .0
        .iter()
        .map(|zj| rotated_sigma_x(PI * zj.to_f64().expect("canonical phase is finite")))
        .collect();
    Ok(game
        .clauses()
        .iter()
        .map(|cl| {
            let [a, b, c] = cl.columns(game.n());
            let e = ghz.expectation([&ops[a], &ops[b], &ops[c]]).re;
            let sign = if cl.s == 0 { 1.0 } else { -1.0 };
            (1.0 + sign * e) / 2.0
        })
        .collect())
}
