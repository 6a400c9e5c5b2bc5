use num_bigint::BigInt;

use super::{Classification, Method};
use crate::game::{defining_system, XorGame};
use crate::linalg::{integer_solvable, solve_mod2, IntMatrix};

/// The dual system `M ξ = b` with
///
/// ```text
/// M = ( Γᵀ  0 )    b = ( 0 )
///     ( Sᵀ  2 )        ( 1 )
/// ```
///
/// of shape `(3n+1) × (m+1)`.
pub fn dual_system(game: &XorGame) -> (IntMatrix, Vec<BigInt>) {
    let sys = defining_system(game);
    let (m, k) = (sys.gamma.rows(), sys.gamma.cols());
    let dual = IntMatrix::from_fn(k + 1, m + 1, |i, j| match (i < k, j < m) {
        (true, true) => sys.gamma[(j, i)].clone(),
        (true, false) => BigInt::from(0),
        (false, true) => BigInt::from(sys.s_vec[j]),
        (false, false) => BigInt::from(2),
    });
    let mut b = vec![BigInt::from(0); k + 1];
    b[k] = BigInt::from(1);
    (dual, b)
}

/// Existence-only classification: the game is Q-perfect iff the dual system
/// has no integer solution, and C-perfect iff it has none over GF(2).
pub fn classify_dual(game: &XorGame) -> Classification {
    let (dual, b) = dual_system(game);
    let q_refuted = integer_solvable(&dual, &b).expect("shapes match by construction");
    let parity: Vec<u8> = b.iter().map(|x| u8::from(x.bit(0))).collect();
    let c_refuted = solve_mod2(&dual, &parity)
        .expect("shapes match by construction")
        .is_some();
    Classification {
        q_perfect: !q_refuted,
        c_perfect: !c_refuted,
        merp: None,
        classical: None,
        method: Method::Dual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{make_game, Clause};

    #[test]
    fn ghz_refuted_only_classically() {
        let g = XorGame::ghz();
        let c = classify_dual(&g);
        assert!(c.q_perfect && !c.c_perfect);
        assert!(c.merp.is_none() && c.classical.is_none());
        // all-ones ξ: every column of Γ is hit twice, and the parities sum to 3
        let (dual, _) = dual_system(&g);
        let xi = vec![BigInt::from(1); 5];
        let img = dual.mul_vec(&xi);
        assert!(img[..6].iter().all(|v| !v.bit(0)));
        assert!(img[6].bit(0));
    }

    #[test]
    fn consistent_single_equation() {
        let g = make_game(1, vec![Clause::new(1, 1, 1, 1)]).unwrap();
        let c = classify_dual(&g);
        assert!(c.q_perfect && c.c_perfect);
    }

    #[test]
    fn contradictory_pair_refuted_both_ways() {
        let g = make_game(1, vec![Clause::new(1, 1, 1, 0), Clause::new(1, 1, 1, 1)]).unwrap();
        let c = classify_dual(&g);
        assert!(!c.q_perfect && !c.c_perfect);
        // ξ = (1, -1, 0) is an integer refutation: Γᵀξ = 0, Sᵀξ = -1 ... plus 2·1
        let (dual, b) = dual_system(&g);
        let xi: Vec<BigInt> = [-1, 1, 0].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(dual.mul_vec(&xi), b);
    }

    #[test]
    fn shape() {
        let (dual, b) = dual_system(&XorGame::ghz());
        assert_eq!((dual.rows(), dual.cols()), (7, 5));
        assert_eq!(b.len(), 7);
    }
}
