//! Verdict-only classification for bulk sampling.
//!
//! The flags are decided in three stages, each exact:
//!
//! 1. clauses owning a private variable are peeled off, since they can be
//!    met whatever the rest of the system says;
//! 2. the remaining core is solved over GF(2); a solution settles both flags;
//! 3. otherwise the Hermite criterion is evaluated by sparse integer
//!    elimination on the core, unless a rank argument already settles it.
//!
//! Only the parity of the right-hand side is tracked in stage 3: the
//! Hermite tail is even iff every integer row combination killing `Γ` has an
//! even parity combination, and that depends on `S mod 2` alone.

use super::hermite::HnfPartition;
use crate::game::XorGame;
use crate::linalg::{hermite_form, Gf2System};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Verdict {
    pub q_perfect: bool,
    pub c_perfect: bool,
}

impl Verdict {
    pub fn pseudotelepathic(self) -> bool {
        self.q_perfect && !self.c_perfect
    }
}

struct Row {
    /// Sorted by column, no zero entries.
    ents: Vec<(u32, i64)>,
    rhs: bool,
}

struct Overflow;

pub fn decide(game: &XorGame) -> Verdict {
    let n = game.n();
    let core = peel(game);
    if core.is_empty() {
        return Verdict {
            q_perfect: true,
            c_perfect: true,
        };
    }
    // renumber the core's columns, sparsest first, so elimination meets
    // short columns early
    let mut deg = vec![0u32; game.unknowns()];
    for &i in &core {
        for j in game.clauses()[i].columns(n) {
            deg[j] += 1;
        }
    }
    let mut order: Vec<usize> = (0..deg.len()).filter(|&j| deg[j] > 0).collect();
    order.sort_by_key(|&j| deg[j]);
    let mut local = vec![0usize; deg.len()];
    for (k, &j) in order.iter().enumerate() {
        local[j] = k;
    }
    let mut gf2 = Gf2System::with_capacity(order.len(), core.len());
    for &i in &core {
        let cl = game.clauses()[i];
        gf2.push_equation(cl.columns(n).map(|j| local[j]), cl.s == 1);
    }
    let ech = gf2.echelon();
    if ech.consistent {
        return Verdict {
            q_perfect: true,
            c_perfect: true,
        };
    }
    // Over Q each connected piece of the core carries two kernel vectors,
    // (1, -1, 0) and (1, 0, -1) on its three column blocks. When the GF(2)
    // rank already meets that ceiling the rational rank equals it too, the
    // integer left kernel reduces onto the whole GF(2) left kernel, and both
    // notions of perfection coincide.
    if ech.rank == rank_ceiling(game, &core) {
        return Verdict::default();
    }
    let q_perfect = match lattice_even(game, &core) {
        Ok(q) => q,
        Err(Overflow) => {
            let h = hermite_form(&crate::game::defining_system(game).augmented());
            HnfPartition::split(&h).b2_even()
        }
    };
    Verdict {
        q_perfect,
        c_perfect: false,
    }
}

/// Columns used by `core` minus two per connected component.
fn rank_ceiling(game: &XorGame, core: &[usize]) -> usize {
    let n = game.n();
    let mut parent: Vec<usize> = (0..game.unknowns()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut used = vec![false; game.unknowns()];
    for &i in core {
        let [a, b, c] = game.clauses()[i].columns(n);
        for j in [a, b, c] {
            used[j] = true;
        }
        for j in [b, c] {
            let (x, y) = (find(&mut parent, a), find(&mut parent, j));
            parent[x] = y;
        }
    }
    let cols = used.iter().filter(|&&u| u).count();
    let comps = (0..parent.len())
        .filter(|&j| used[j] && find(&mut parent, j) == j)
        .count();
    cols - 2 * comps
}

/// Repeatedly drops clauses owning a variable no other clause uses; such a
/// clause can always be met by that variable alone, over GF(2) and over Q.
/// Returns the indices of the surviving clauses.
fn peel(game: &XorGame) -> Vec<usize> {
    let n = game.n();
    let cols = game.unknowns();
    // clause lists per column, packed: column j owns incident[start[j]..start[j + 1]]
    let mut start = vec![0u32; cols + 1];
    for cl in game.clauses() {
        for j in cl.columns(n) {
            start[j + 1] += 1;
        }
    }
    for j in 0..cols {
        start[j + 1] += start[j];
    }
    let mut deg: Vec<u32> = (0..cols).map(|j| start[j + 1] - start[j]).collect();
    let mut fill = start.clone();
    let mut incident = vec![0u32; 3 * game.m()];
    for (i, cl) in game.clauses().iter().enumerate() {
        for j in cl.columns(n) {
            incident[fill[j] as usize] = i as u32;
            fill[j] += 1;
        }
    }
    let mut alive = vec![true; game.m()];
    let mut queue: Vec<usize> = (0..cols).filter(|&j| deg[j] == 1).collect();
    while let Some(j) = queue.pop() {
        if deg[j] != 1 {
            continue;
        }
        let i = incident[start[j] as usize..start[j + 1] as usize]
            .iter()
            .map(|&i| i as usize)
            .find(|&i| alive[i])
            .expect("degree counts live clauses");
        alive[i] = false;
        for k in game.clauses()[i].columns(n) {
            deg[k] -= 1;
            if deg[k] == 1 {
                queue.push(k);
            }
        }
    }
    (0..game.m()).filter(|&i| alive[i]).collect()
}

/// Whether every integer row combination of the `core` clauses that
/// annihilates `Γ` has an even parity combination.
///
/// A variable met by a single row lets that row be dropped: whatever its
/// coefficient, a rational value for the variable satisfies it. Otherwise
/// the rows of the sparsest variable are reduced against the one with the
/// smallest coefficient until a single row is left.
fn lattice_even(game: &XorGame, core: &[usize]) -> Result<bool, Overflow> {
    let n = game.n();
    let mut rows: Vec<Option<Row>> = core
        .iter()
        .map(|&i| {
            let cl = game.clauses()[i];
            Some(Row {
                ents: cl.columns(n).iter().map(|&j| (j as u32, 1)).collect(),
                rhs: cl.s == 1,
            })
        })
        .collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); game.unknowns()];
    for (i, r) in rows.iter().enumerate() {
        for &(j, _) in &r.as_ref().expect("fresh row").ents {
            col_rows[j as usize].push(i as u32);
        }
    }
    let mut scratch = Vec::new();
    loop {
        let Some(c) = (0..col_rows.len())
            .filter(|&j| !col_rows[j].is_empty())
            .min_by_key(|&j| col_rows[j].len())
        else {
            return Ok(true);
        };
        let cu = c as u32;
        let p = *col_rows[c]
            .iter()
            .min_by_key(|&&i| {
                let r = rows[i as usize].as_ref().expect("live row");
                (coeff(r, cu).unsigned_abs(), r.ents.len())
            })
            .expect("column is live");
        let prow = rows[p as usize].take().expect("live row");
        unlink(&mut col_rows, p, &prow.ents);
        let pv = coeff(&prow, cu);
        let targets = col_rows[c].clone();
        for k in targets {
            let mut row = rows[k as usize].take().expect("live row");
            let q = round_div(coeff(&row, cu), pv);
            sub_mul_into(&row.ents, &prow.ents, q, &mut scratch, &mut col_rows, k)?;
            std::mem::swap(&mut row.ents, &mut scratch);
            if q & 1 == 1 {
                row.rhs ^= prow.rhs;
            }
            if row.ents.is_empty() {
                if row.rhs {
                    return Ok(false);
                }
            } else {
                rows[k as usize] = Some(row);
            }
        }
        // the pivot goes back unless it is now alone in its column
        if !col_rows[c].is_empty() {
            for &(j, _) in &prow.ents {
                col_rows[j as usize].push(p);
            }
            rows[p as usize] = Some(prow);
        }
    }
}

fn unlink(col_rows: &mut [Vec<u32>], k: u32, ents: &[(u32, i64)]) {
    for &(j, _) in ents {
        let list = &mut col_rows[j as usize];
        let at = list.iter().position(|&i| i == k).expect("indexed");
        list.swap_remove(at);
    }
}

/// Nearest-integer quotient, keeping remainders at most `|d|/2`.
fn round_div(a: i64, d: i64) -> i64 {
    let (q, r) = (a / d, a % d);
    if 2 * r.unsigned_abs() > d.unsigned_abs() {
        q + if (r < 0) == (d < 0) { 1 } else { -1 }
    } else {
        q
    }
}

fn coeff(r: &Row, c: u32) -> i64 {
    r.ents
        .binary_search_by_key(&c, |e| e.0)
        .map_or(0, |at| r.ents[at].1)
}

/// `out = a - q·b` for sorted sparse rows, keeping the column index of row
/// `k` in sync.
fn sub_mul_into(
    a: &[(u32, i64)],
    b: &[(u32, i64)],
    q: i64,
    out: &mut Vec<(u32, i64)>,
    col_rows: &mut [Vec<u32>],
    k: u32,
) -> Result<(), Overflow> {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(u32::MAX, |e| e.0);
        let cb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
            continue;
        }
        let prod = b[j].1.checked_mul(q).ok_or(Overflow)?;
        j += 1;
        if cb < ca {
            if prod != 0 {
                out.push((cb, prod.checked_neg().ok_or(Overflow)?));
                col_rows[cb as usize].push(k);
            }
        } else {
            let v = a[i].1.checked_sub(prod).ok_or(Overflow)?;
            i += 1;
            if v != 0 {
                out.push((cb, v));
            } else {
                let list = &mut col_rows[cb as usize];
                let at = list.iter().position(|&r| r == k).expect("indexed");
                list.swap_remove(at);
            }
        }
    }
    Ok(())
}
