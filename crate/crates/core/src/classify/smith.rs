use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Classification, Method};
use crate::game::{defining_system, XorGame};
use crate::linalg::{snf, RationalVector};

/// Classification through `Γ = Ω·D·Ψ`.
///
/// With `c = Ω⁻¹S` the system becomes `D·y ≡ c (mod 2)` for `y = Ψz`, which
/// decouples per coordinate:
///
/// * rationally solvable iff `c_j` is even wherever `d_j = 0`;
/// * solvable over GF(2) iff `c_j` is even wherever `d_j` is even.
pub fn classify_snf(game: &XorGame) -> Classification {
    let sys = defining_system(game);
    let f = snf(&sys.gamma);
    let c = f.omega_inv.mul_vec(&sys.s_integers());
    let d: Vec<BigInt> = (0..c.len()).map(|j| f.row_invariant(j)).collect();

    let q_perfect = c.iter().zip(&d).all(|(cj, dj)| !dj.is_zero() || !cj.bit(0));
    let c_perfect = c.iter().zip(&d).all(|(cj, dj)| dj.bit(0) || !cj.bit(0));

    let unknowns = sys.gamma.cols();
    let merp = q_perfect.then(|| {
        let y: Vec<BigRational> = (0..unknowns)
            .map(|i| match d.get(i) {
                Some(di) if !di.is_zero() => BigRational::new(c[i].clone(), di.clone()),
                _ => BigRational::zero(),
            })
            .collect();
        psi_inv_apply(&f.psi_inv, &y).canonical_mod2()
    });

    // y_j = c_j mod 2 on odd invariants, 0 elsewhere; then z = Ψ⁻¹y over GF(2)
    let classical = c_perfect.then(|| {
        let y: Vec<BigInt> = (0..unknowns)
            .map(|i| match d.get(i) {
                Some(di) if di.bit(0) => BigInt::from(u8::from(c[i].bit(0))),
                _ => BigInt::zero(),
            })
            .collect();
        f.psi_inv
            .mul_vec(&y)
            .iter()
            .map(|x| u8::from(x.bit(0)))
            .collect()
    });

    Classification {
        q_perfect,
        c_perfect,
        merp,
        classical,
        method: Method::Snf,
    }
}

fn psi_inv_apply(psi_inv: &crate::linalg::IntMatrix, y: &[BigRational]) -> RationalVector {
    RationalVector(
        (0..psi_inv.rows())
            .map(|i| {
                psi_inv
                    .row(i)
                    .iter()
                    .zip(y)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| b * a)
                    .sum()
            })
            .collect(),
    )
}
