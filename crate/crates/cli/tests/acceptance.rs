//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion failed. Runs without the libtest harness so the
//! lines are never captured.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xorgame::classify::{classify_dual, classify_hnf, classify_snf, cross_check, decide};
use xorgame::experiments::{
    fit_linear, find_transition, max_pseudotelepathy, sweep_grid, with_threads,
    ProbabilityEstimate, Sampling,
};
use xorgame::game::{defining_system, sample_random_game, Dedup, XorGame};
use xorgame::linalg::{check_echelon, hnf, mul_rational, snf, IntMatrix};
use xorgame::strategy::{best_classical_score, simulate_merp, MerpStrategy};

const SEED: u64 = 1;

struct Report {
    failures: Vec<usize>,
}

impl Report {
    fn record(&mut self, id: usize, title: &str, pass: bool, detail: String) {
        println!(
            "criterion {id} {title}: {} ({detail})",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failures.push(id);
        }
    }
}

fn brute_force_c_perfect(g: &XorGame) -> bool {
    let cols: Vec<[usize; 3]> = g.clauses().iter().map(|c| c.columns(g.n())).collect();
    (0u32..1 << g.unknowns()).any(|x| {
        cols.iter()
            .zip(g.clauses())
            .all(|([a, b, c], cl)| ((x >> a) ^ (x >> b) ^ (x >> c)) & 1 == u32::from(cl.s))
    })
}

fn random_game(rng: &mut ChaCha8Rng, max_n: usize, max_m: impl Fn(usize) -> usize, dedup: Dedup) -> XorGame {
    let n = rng.gen_range(1..=max_n);
    let cap = dedup.capacity(n).min(max_m(n) as u128) as usize;
    let m = rng.gen_range(1..=cap);
    sample_random_game(n, m, rng.gen(), dedup).unwrap()
}

fn oracle_equivalence(r: &mut Report) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for t in 0..10_000 {
        let dedup = if t % 2 == 0 { Dedup::Triple } else { Dedup::FullTuple };
        let g = random_game(&mut rng, 4, |_| 10, dedup);
        let v = classify_hnf(&g).verdict();
        let ok = v == classify_snf(&g).verdict()
            && v == classify_dual(&g).verdict()
            && v.c_perfect == brute_force_c_perfect(&g);
        bad += usize::from(!ok);
    }
    let took = start.elapsed();
    r.record(
        1,
        "oracle equivalence",
        bad == 0 && took < Duration::from_secs(300),
        format!("10000 games, {bad} disagreements, {:.1} s", took.as_secs_f64()),
    );
}

fn strategy_soundness(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let (mut checked, mut bad, mut worst) = (0, 0, 1.0f64);
    while checked < 1000 {
        let dedup = if rng.gen() { Dedup::Triple } else { Dedup::FullTuple };
        let g = random_game(&mut rng, 30, |n| 3 * n, dedup);
        if !decide(&g).q_perfect {
            continue;
        }
        checked += 1;
        let Some(z) = classify_hnf(&g).merp else {
            bad += 1;
            continue;
        };
        let sys = defining_system(&g);
        let exact = mul_rational(&sys.gamma, &z)
            .iter()
            .zip(&sys.s_vec)
            .all(|(lhs, &s)| {
                let d = lhs - BigRational::from_integer(s.into());
                d.is_integer() && !d.numer().bit(0)
            });
        let probs = simulate_merp(&g, &MerpStrategy::new(z)).unwrap();
        let low = probs.iter().copied().fold(1.0, f64::min);
        worst = worst.min(low);
        bad += usize::from(!exact || low < 1.0 - 1e-9);
    }
    r.record(
        2,
        "strategy soundness",
        bad == 0,
        format!("{checked} Q-perfect games, {bad} failures, lowest clause probability {worst}"),
    );
}

fn ghz_witness(r: &mut Report) {
    let g = XorGame::ghz();
    let c = cross_check(&g).unwrap();
    let best = best_classical_score(&g).unwrap();
    let three_quarters = BigRational::new(3.into(), 4.into());
    r.record(
        3,
        "GHZ witness",
        c.q_perfect && !c.c_perfect && best == three_quarters,
        format!("q_perfect={} c_perfect={} best classical score {best}", c.q_perfect, c.c_perfect),
    );
}

fn certificates(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut bad = 0;
    for _ in 0..10_000 {
        let (rows, cols) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m = IntMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-9i64..=9).into());
        let h = hnf(&m);
        let s = snf(&m);
        let diag = s.invariants();
        let divides = diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let ok = &h.omega * &h.h == m
            && h.omega.is_unimodular()
            && check_echelon(&h.h).is_ok()
            && &s.omega * &(&s.d * &s.psi) == m
            && s.omega.is_unimodular()
            && s.psi.is_unimodular()
            && &s.omega * &s.omega_inv == IntMatrix::identity(rows)
            && &s.psi * &s.psi_inv == IntMatrix::identity(cols)
            && divides
            && diag.iter().all(Signed::is_positive)
            && diag.len() == h.rank();
        bad += usize::from(!ok);
    }
    r.record(4, "normal-form certificates", bad == 0, format!("10000 matrices, {bad} failures"));
}

fn peak_at_38(r: &mut Report) {
    let sampling = Sampling::new(10_000, SEED, Dedup::Triple);
    let (best, _) = with_threads(0, || max_pseudotelepathy(38, 90, 115, &sampling))
        .unwrap()
        .unwrap();
    let target = 2.7405 * 38.0 - 2.54;
    let pass = (0.11..=0.17).contains(&best.mu) && (best.m_star as f64 - target).abs() <= 4.0;
    r.record(
        5,
        "pseudotelepathy peak at n=38",
        pass,
        format!("mu={} m*={} target {target:.1}", best.mu, best.m_star),
    );
}

fn peak_fit(r: &mut Report) {
    let sampling = Sampling::new(10_000, SEED, Dedup::Triple);
    let mut points = Vec::new();
    let mut peaks = Vec::new();
    for n in (10..=40).step_by(5) {
        let (lo, hi) = ((2.2 * n as f64).round() as usize, (3.3 * n as f64).round() as usize);
        let (best, _) = with_threads(0, || max_pseudotelepathy(n, lo, hi, &sampling))
            .unwrap()
            .unwrap();
        points.push((n as f64, best.m_star as f64));
        peaks.push(format!("{n}:{}", best.m_star));
    }
    let fit = fit_linear(&points).unwrap();
    r.record(
        6,
        "peak location fit",
        (2.64..=2.84).contains(&fit.slope),
        format!(
            "slope={:.4} intercept={:.2} peaks {}",
            fit.slope,
            fit.intercept,
            peaks.join(" ")
        ),
    );
}

fn crosssection_csv(threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_xorgame"))
        .args([
            "crosssection", "--n", "100", "--m", "240:310", "--samples", "10000", "--seed",
            &SEED.to_string(), "--threads", threads,
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn parse_rows(csv: &[u8]) -> Vec<ProbabilityEstimate> {
    String::from_utf8_lossy(csv)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let f: Vec<u64> = l.split(',').take(7).map(|x| x.parse().unwrap_or(0)).collect();
            ProbabilityEstimate {
                n: f[0] as usize,
                m: f[1] as usize,
                samples: f[3],
                c_count: f[4],
                q_count: f[5],
                pseudo_count: f[6],
            }
        })
        .collect()
}

fn transition(r: &mut Report) -> Vec<u8> {
    let one = crosssection_csv("1");
    let rows = parse_rows(&one);
    match find_transition(&rows) {
        Ok(t) => {
            let pass = (t.ratio_q - 2.74).abs() <= 0.10
                && (t.ratio_c - 2.74).abs() <= 0.10
                && (t.ratio_q - t.ratio_c).abs() <= 0.05;
            r.record(
                7,
                "transition coincidence at n=100",
                pass,
                format!("ratio_q={:.4} ratio_c={:.4}", t.ratio_q, t.ratio_c),
            );
        }
        Err(e) => r.record(7, "transition coincidence at n=100", false, e.to_string()),
    }
    one
}

fn determinism(r: &mut Report, one: &[u8]) {
    let eight = crosssection_csv("8");
    r.record(
        9,
        "determinism across --threads 1 and 8",
        one == eight,
        format!("{} bytes vs {} bytes", one.len(), eight.len()),
    );
}

fn heatmap(r: &mut Report) {
    let sampling = Sampling::new(5_000, SEED, Dedup::Triple);
    let rows = with_threads(0, || sweep_grid(&[8, 16, 24, 32], 1.0, 5.0, 0.25, &sampling))
        .unwrap()
        .unwrap();
    // two-proportion z statistic of a rise from a to b
    let rise = |a: u64, b: u64, samples: u64| {
        let pooled = (a + b) as f64 / (2 * samples) as f64;
        let sd = (2.0 * pooled * (1.0 - pooled) / samples as f64).sqrt();
        let diff = (b as f64 - a as f64) / samples as f64;
        if diff <= 0.0 { 0.0 } else { diff / sd }
    };
    let mut worst: f64 = 0.0;
    for w in rows.windows(2).filter(|w| w[0].n == w[1].n) {
        worst = worst
            .max(rise(w[0].q_count, w[1].q_count, w[0].samples))
            .max(rise(w[0].c_count, w[1].c_count, w[0].samples));
    }
    let ordered = rows.iter().all(|r| r.q_count >= r.c_count);
    r.record(
        8,
        "heatmap structure",
        worst <= 3.0 && ordered,
        format!("{} cells, largest rise {worst:.2} sigma, p_q >= p_c: {ordered}", rows.len()),
    );
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters from other targets end up here too
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut r = Report { failures: Vec::new() };
    oracle_equivalence(&mut r);
    strategy_soundness(&mut r);
    ghz_witness(&mut r);
    certificates(&mut r);
    peak_at_38(&mut r);
    peak_fit(&mut r);
    let csv = transition(&mut r);
    heatmap(&mut r);
    determinism(&mut r, &csv);
    if r.failures.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {:?}", r.failures);
        ExitCode::FAILURE
    }
}
