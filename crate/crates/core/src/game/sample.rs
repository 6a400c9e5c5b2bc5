use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use super::{Clause, GameError, XorGame};

/// Which clauses count as repeats when sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Dedup {
    /// A question triple may appear at most once, whatever its parity.
    #[default]
    Triple,
    /// Only identical `(a, b, c, s)` tuples are rejected.
    FullTuple,
}

impl Dedup {
    pub fn capacity(self, n: usize) -> u128 {
        let triples = (n as u128).pow(3);
        match self {
            Dedup::Triple => triples,
            Dedup::FullTuple => 2 * triples,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dedup::Triple => "triple",
            Dedup::FullTuple => "full",
        }
    }
}

impl fmt::Display for Dedup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dedup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "triple" => Ok(Dedup::Triple),
            "full" | "fulltuple" => Ok(Dedup::FullTuple),
            other => Err(format!("unknown dedup mode `{other}` (expected triple|full)")),
        }
    }
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `index` of cell `(n, m)` under a run seed.
///
/// A pure function of its arguments, so trials can be evaluated in any
/// order and on any number of workers.
pub fn derive_seed(seed: u64, n: usize, m: usize, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut h = mix(seed ^ GOLDEN);
    for word in [n as u64, m as u64, index] {
        h = mix(h.wrapping_add(GOLDEN) ^ word);
    }
    h
}

/// Draws `m` distinct clauses uniformly at random.
///
/// Deterministic in `(n, m, seed, dedup)`. Below half the capacity, clauses
/// are drawn with rejection of repeats; above it, keys are drawn without
/// replacement from the enumerated clause space.
pub fn sample_random_game(
    n: usize,
    m: usize,
    seed: u64,
    dedup: Dedup,
) -> Result<XorGame, GameError> {
    if n == 0 {
        return Err(GameError::NoQuestions);
    }
    if m == 0 {
        return Err(GameError::NoClauses);
    }
    let capacity = dedup.capacity(n);
    if m as u128 > capacity {
        return Err(GameError::ExhaustedSpace { m, capacity });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = if (m as u128) * 2 <= capacity {
        by_rejection(&mut rng, n, m, dedup)
    } else {
        by_enumeration(&mut rng, n, m, dedup, capacity as usize)
    };
    Ok(XorGame { n, clauses })
}

fn by_rejection(rng: &mut ChaCha8Rng, n: usize, m: usize, dedup: Dedup) -> Vec<Clause> {
    let mut seen = FxHashSet::default();
    seen.reserve(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let cl = Clause::new(
            rng.gen_range(1..=n),
            rng.gen_range(1..=n),
            rng.gen_range(1..=n),
            rng.gen_range(0..=1),
        );
        let triple = ((cl.a * n + cl.b) * n + cl.c) as u64;
        let key = match dedup {
            Dedup::Triple => triple,
            Dedup::FullTuple => 2 * triple + u64::from(cl.s),
        };
        if seen.insert(key) {
            out.push(cl);
        }
    }
    out
}

fn by_enumeration(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    dedup: Dedup,
    capacity: usize,
) -> Vec<Clause> {
    let keys = index::sample(rng, capacity, m).into_vec();
    keys.into_iter()
        .map(|key| {
            let (triple, s) = match dedup {
                Dedup::Triple => (key, None),
                Dedup::FullTuple => (key / 2, Some((key % 2) as u8)),
            };
            let s = s.unwrap_or_else(|| rng.gen_range(0..=1));
            Clause::new(triple / (n * n) + 1, (triple / n) % n + 1, triple % n + 1, s)
        })
        .collect()
}
