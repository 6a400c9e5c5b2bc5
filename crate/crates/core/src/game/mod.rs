//! 3-player XOR games and their defining linear systems.

mod file;
mod sample;

pub use file::{format_game, parse_game, ParseError};
pub use sample::{derive_seed, sample_random_game, Dedup};

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("game needs at least one question per player")]
    NoQuestions,
    #[error("game needs at least one clause")]
    NoClauses,
    #[error("clause {index}: question index out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("clause {index}: parity bit must be 0 or 1")]
    BadParity { index: usize },
    #[error("clause {index} repeats clause {first}")]
    DuplicateClause { index: usize, first: usize },
    #[error("{m} distinct clauses requested but only {capacity} exist")]
    ExhaustedSpace { m: usize, capacity: u128 },
}

/// One round of a game: questions `a`, `b`, `c` (1-based) and the winning parity `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub s: u8,
}

impl Clause {
    pub const fn new(a: usize, b: usize, c: usize, s: u8) -> Self {
        Clause { a, b, c, s }
    }

    /// Column indices (0-based) of the three unknowns in the defining system
    /// of an `n`-question game.
    pub fn columns(&self, n: usize) -> [usize; 3] {
        [self.a - 1, n + self.b - 1, 2 * n + self.c - 1]
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.a, self.b, self.c, self.s)
    }
}

/// A validated `n`-question, `m`-clause 3XOR game. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XorGame {
    n: usize,
    clauses: Vec<Clause>,
}

impl XorGame {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, GameError> {
        if n == 0 {
            return Err(GameError::NoQuestions);
        }
        if clauses.is_empty() {
            return Err(GameError::NoClauses);
        }
        let mut seen = std::collections::HashMap::with_capacity(clauses.len());
        for (index, cl) in clauses.iter().enumerate() {
            if [cl.a, cl.b, cl.c].iter().any(|&q| q == 0 || q > n) {
                return Err(GameError::IndexOutOfRange { index, n });
            }
            if cl.s > 1 {
                return Err(GameError::BadParity { index });
            }
            if let Some(&first) = seen.get(cl) {
                return Err(GameError::DuplicateClause { index, first });
            }
            seen.insert(*cl, index);
        }
        Ok(XorGame { n, clauses })
    }

    /// The GHZ game: `x + y + z = 0` on questions (1,1,1) and parity 1 on
    /// the three questions with exactly two 2s.
    pub fn ghz() -> Self {
        XorGame::new(
            2,
            vec![
                Clause::new(1, 1, 1, 0),
                Clause::new(1, 2, 2, 1),
                Clause::new(2, 1, 2, 1),
                Clause::new(2, 2, 1, 1),
            ],
        )
        .expect("GHZ game is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of unknowns in the defining system, `3n`.
    pub fn unknowns(&self) -> usize {
        3 * self.n
    }

    pub fn parities(&self) -> Vec<u8> {
        self.clauses.iter().map(|c| c.s).collect()
    }

    /// True when no two clauses share a question triple.
    pub fn has_distinct_triples(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.m());
        self.clauses.iter().all(|c| seen.insert((c.a, c.b, c.c)))
    }

    /// The same game with clause `index` removed, or `None` if it was the last one.
    pub fn without_clause(&self, index: usize) -> Option<Self> {
        if self.m() == 1 {
            return None;
        }
        let mut clauses = self.clauses.clone();
        clauses.remove(index);
        Some(XorGame { n: self.n, clauses })
    }

    /// The same game with clauses reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.m());
        XorGame {
            n: self.n,
            clauses: perm.iter().map(|&i| self.clauses[i]).collect(),
        }
    }
}

/// Shorthand for [`XorGame::new`].
pub fn make_game(n: usize, clauses: Vec<Clause>) -> Result<XorGame, GameError> {
    XorGame::new(n, clauses)
}

/// `Γ x = S (mod 2)` with `Γ = (A B C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningSystem {
    pub n: usize,
    pub gamma: IntMatrix,
    pub s_vec: Vec<u8>,
}

impl DefiningSystem {
    pub fn s_integers(&self) -> Vec<BigInt> {
        self.s_vec.iter().map(|&s| BigInt::from(s)).collect()
    }

    /// `(Γ | S)`.
    pub fn augmented(&self) -> IntMatrix {
        let s = IntMatrix::from_fn(self.s_vec.len(), 1, |i, _| BigInt::from(self.s_vec[i]));
        self.gamma.hconcat(&s)
    }

    /// Recovers the game; `None` if a row is not one-hot per block.
    pub fn to_game(&self) -> Option<XorGame> {
        let n = self.n;
        let mut clauses = Vec::with_capacity(self.gamma.rows());
        for (i, &s) in self.s_vec.iter().enumerate() {
            let row = self.gamma.row(i);
            let mut q = [0usize; 3];
            for (block, slot) in q.iter_mut().enumerate() {
                let cols = &row[block * n..(block + 1) * n];
                let ones: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
                    .map(|(j, _)| j)
                    .collect();
                if ones.len() != 1 || !cols[ones[0]].is_one() {
                    return None;
                }
                *slot = ones[0] + 1;
            }
            clauses.push(Clause::new(q[0], q[1], q[2], s));
        }
        XorGame::new(n, clauses).ok()
    }
}

pub fn defining_system(game: &XorGame) -> DefiningSystem {
    let n = game.n();
    let mut gamma = IntMatrix::zeros(game.m(), 3 * n);
    for (i, cl) in game.clauses().iter().enumerate() {
        for j in cl.columns(n) {
            gamma[(i, j)] = BigInt::one();
        }
    }
    DefiningSystem {
        n,
        gamma,
        s_vec: game.parities(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_game() {
        let g = make_game(1, vec![Clause::new(1, 1, 1, 0)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn ghz_is_valid() {
        let g = XorGame::ghz();
        assert_eq!((g.n(), g.m()), (2, 4));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            make_game(1, vec![Clause::new(1, 1, 2, 0)]),
            Err(GameError::IndexOutOfRange { index: 0, n: 1 })
        );
        assert_eq!(
            make_game(1, vec![Clause::new(0, 1, 1, 0)]),
            Err(GameError::IndexOutOfRange { index: 0, n: 1 })
        );
        assert_eq!(
            make_game(2, vec![Clause::new(1, 2, 1, 1), Clause::new(1, 2, 1, 1)]),
            Err(GameError::DuplicateClause { index: 1, first: 0 })
        );
        assert_eq!(make_game(1, vec![]), Err(GameError::NoClauses));
        assert_eq!(make_game(0, vec![Clause::new(1, 1, 1, 0)]), Err(GameError::NoQuestions));
        assert_eq!(
            make_game(1, vec![Clause::new(1, 1, 1, 2)]),
            Err(GameError::BadParity { index: 0 })
        );
        // same triple, different parity is allowed by the game model
        assert!(make_game(1, vec![Clause::new(1, 1, 1, 0), Clause::new(1, 1, 1, 1)]).is_ok());
    }

    #[test]
    fn single_clause_system() {
        let g = make_game(1, vec![Clause::new(1, 1, 1, 1)]).unwrap();
        let sys = defining_system(&g);
        assert_eq!(sys.gamma, IntMatrix::from_rows(&[[1, 1, 1]]));
        assert_eq!(sys.s_vec, vec![1]);
    }

    #[test]
    fn ghz_system_layout() {
        let sys = defining_system(&XorGame::ghz());
        assert_eq!((sys.gamma.rows(), sys.gamma.cols()), (4, 6));
        assert_eq!(sys.gamma, IntMatrix::from_rows(&[
            [1, 0, 1, 0, 1, 0],
            [1, 0, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1],
            [0, 1, 0, 1, 1, 0],
        ]));
        assert_eq!(sys.s_vec, vec![0, 1, 1, 1]);
        assert_eq!(sys.to_game(), Some(XorGame::ghz()));
    }

    #[test]
    fn placement_in_blocks() {
        let g = make_game(2, vec![Clause::new(2, 1, 1, 0)]).unwrap();
        let sys = defining_system(&g);
        assert_eq!(sys.gamma, IntMatrix::from_rows(&[[0, 1, 1, 0, 1, 0]]));
        assert_eq!(sys.s_vec, vec![0]);
    }

    #[test]
    fn malformed_system_is_rejected() {
        let sys = DefiningSystem {
            n: 1,
            gamma: IntMatrix::from_rows(&[[1, 1, 0]]),
            s_vec: vec![0],
        };
        assert_eq!(sys.to_game(), None);
    }
}
