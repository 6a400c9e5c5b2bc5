//! Q-perfect / C-perfect classification of 3XOR games.
//!
//! A game is C-perfect iff its defining system `Γx = S` has a solution over
//! GF(2), and Q-perfect iff `Γz ≡ S (mod 2)` has a rational solution `z`.
//! Three independent deciders are provided:
//!
//! * [`classify_hnf`] reads the answer off the Hermite form of `(Γ | S)` and
//!   extracts a perfect MERP vector by back substitution;
//! * [`classify_snf`] diagonalises `Γ` and works coordinate-wise;
//! * [`classify_dual`] searches for refutations of the dual system, over
//!   the integers for the quantum case and over GF(2) for the classical one.
//!
//! [`decide`] is the lean variant used by the Monte Carlo engine.

mod dual;
mod fast;
mod hermite;
mod smith;

pub use dual::{classify_dual, dual_system};
pub use fast::{decide, Verdict};
pub use hermite::{classify_hnf, unique_merp, HnfPartition};
pub use smith::classify_snf;

use std::fmt;

use thiserror::Error;

use crate::game::XorGame;
use crate::linalg::{LinalgError, RationalVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Hnf,
    Snf,
    Dual,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Hnf => "hnf",
            Method::Snf => "snf",
            Method::Dual => "dual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub q_perfect: bool,
    pub c_perfect: bool,
    /// Perfect MERP phases, entries in `[0, 2)`.
    pub merp: Option<RationalVector>,
    /// Perfect deterministic strategy.
    pub classical: Option<Vec<u8>>,
    pub method: Method,
}

impl Classification {
    /// Q-perfect but not C-perfect.
    pub fn pseudotelepathic(&self) -> bool {
        self.q_perfect && !self.c_perfect
    }

    pub fn verdict(&self) -> Verdict {
        Verdict {
            q_perfect: self.q_perfect,
            c_perfect: self.c_perfect,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("system has no perfect MERP solution")]
    NotQPerfect,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("classifiers disagree ({}) on game n={} m={}", format_verdicts(.verdicts), .game.n(), .game.m())]
    Disagreement {
        verdicts: Vec<(Method, Verdict)>,
        game: Box<XorGame>,
    },
}

fn format_verdicts(v: &[(Method, Verdict)]) -> String {
    v.iter()
        .map(|(m, v)| format!("{m}: q={} c={}", v.q_perfect, v.c_perfect))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Runs all three classifiers and returns the Hermite result if they agree.
pub fn cross_check(game: &XorGame) -> Result<Classification, ClassifyError> {
    let hnf = classify_hnf(game);
    let snf = classify_snf(game);
    let dual = classify_dual(game);
    let verdicts = vec![
        (Method::Hnf, hnf.verdict()),
        (Method::Snf, snf.verdict()),
        (Method::Dual, dual.verdict()),
    ];
    if verdicts.iter().all(|(_, v)| *v == verdicts[0].1) {
        Ok(hnf)
    } else {
        Err(ClassifyError::Disagreement {
            verdicts,
            game: Box::new(game.clone()),
        })
    }
}
