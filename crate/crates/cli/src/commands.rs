use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use xorgame::classify::cross_check;
use xorgame::experiments::{
    cross_section, default_samples, fit_linear, format_f64, max_pseudotelepathy, sweep_grid, with_threads,
    write_csv, PseudoMax, Sampling,
};
use xorgame::game::{derive_seed, format_game, parse_game, sample_random_game, XorGame};
use xorgame::linalg::RationalVector;
use xorgame::strategy::{
    classical_score, is_perfect_merp, merp_score, simulate_merp, ClassicalStrategy, MerpStrategy,
};

use crate::args::{MRange, NList, RatioRange, RunArgs};
use crate::UsageError;

pub const SUMMARY_HEADER: &str = "n,m_star,mu,samples,m_min,m_max,seed,dedup";

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_game(path: &Path) -> Result<XorGame> {
    let text = read_text(path)?;
    parse_game(&text).with_context(|| format!("in {}", path.display()))
}

fn open_out(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn manifest(command: &str, params: &str, run: &RunArgs) -> String {
    format!(
        "xorgame {command} {params} samples={} seed={} dedup={} version={}",
        run.samples.map_or_else(|| "auto".to_owned(), |s| s.to_string()),
        run.seed,
        run.dedup,
        env!("CARGO_PKG_VERSION")
    )
}

fn sampling(run: &RunArgs, n: usize) -> Sampling {
    let samples = run.samples.unwrap_or_else(|| default_samples(n));
    Sampling::new(samples, run.seed, run.dedup)
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

/// Returns the exit code: 0 both perfect, 1 quantum only, 2 neither.
pub fn classify(path: &Path) -> Result<u8> {
    let game = read_game(path)?;
    let c = cross_check(&game)?;
    let mut out = io::stdout().lock();
    writeln!(out, "game: n={} m={}", game.n(), game.m())?;
    writeln!(out, "q_perfect: {}", c.q_perfect)?;
    writeln!(out, "c_perfect: {}", c.c_perfect)?;
    writeln!(out, "pseudotelepathy: {}", c.pseudotelepathic())?;
    match &c.merp {
        Some(z) => writeln!(out, "merp: {}", z.canonical_mod2())?,
        None => writeln!(out, "merp: none")?,
    }
    match &c.classical {
        Some(x) => writeln!(out, "classical: {}", bits(x))?,
        None => writeln!(out, "classical: none")?,
    }
    writeln!(out, "agreement: hnf snf dual")?;
    Ok(match (c.q_perfect, c.c_perfect) {
        (true, true) => 0,
        (true, false) => 1,
        _ => 2,
    })
}

pub fn verify(game_path: &Path, strategy_path: &Path) -> Result<u8> {
    let game = read_game(game_path)?;
    let text = read_text(strategy_path)?;
    let tokens = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace);
    let z = RationalVector::parse_tokens(tokens)
        .map_err(|e| UsageError(format!("{}: {e}", strategy_path.display())))?;
    let binary: Option<Vec<u8>> = z
        .0
        .iter()
        .map(|x| match x.to_integer().try_into() {
            Ok(b @ (0u8 | 1u8)) if x.is_integer() => Some(b),
            _ => None,
        })
        .collect();
    let strat = MerpStrategy::new(z);

    let perfect = is_perfect_merp(&game, &strat)?;
    let score = merp_score(&game, &strat)?;
    let probs = simulate_merp(&game, &strat)?;
    let simulated = probs.iter().sum::<f64>() / probs.len() as f64;

    let mut out = io::stdout().lock();
    writeln!(out, "perfect: {perfect}")?;
    writeln!(out, "score: {}", format_f64(score))?;
    writeln!(out, "simulated: {}", format_f64(simulated))?;
    writeln!(out, "difference: {:.3e}", (score - simulated).abs())?;
    if let Some(x) = binary {
        let cs = ClassicalStrategy::new(x)?;
        writeln!(out, "classical_score: {}", classical_score(&game, &cs)?)?;
    }
    Ok(0)
}

pub fn sample(n: usize, m: usize, count: u64, seed: u64, dedup: xorgame::game::Dedup, out: &Path) -> Result<u8> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    for i in 0..count {
        let game = sample_random_game(n, m, derive_seed(seed, n, m, i), dedup)?;
        let comment = format!("xorgame sample n={n} m={m} seed={seed} index={i} dedup={dedup}");
        let path = out.join(format!("game-n{n}-m{m}-s{seed}-{i}.txt"));
        fs::write(&path, format_game(&game, Some(&comment)))
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(0)
}

pub fn sweep(n: &NList, ratio: RatioRange, run: &RunArgs) -> Result<u8> {
    let step = ratio.step.unwrap_or(0.1);
    let rows = with_threads(run.threads, || {
        n.0.iter()
            .map(|&n| sweep_grid(&[n], ratio.lo, ratio.hi, step, &sampling(run, n)))
            .collect::<Result<Vec<_>, _>>()
    })??
    .concat();
    let ns: Vec<String> = n.0.iter().map(ToString::to_string).collect();
    let params = format!("n={} ratio={}:{}:{step}", ns.join(","), ratio.lo, ratio.hi);
    let mut w = open_out(run.out.as_ref())?;
    write_csv(&mut w, Some(&manifest("sweep", &params, run)), &rows, run.seed, run.dedup)?;
    Ok(0)
}

pub fn crosssection(n: usize, m: MRange, run: &RunArgs) -> Result<u8> {
    let rows = with_threads(run.threads, || cross_section(n, m.lo, m.hi, &sampling(run, n)))??;
    let mut w = open_out(run.out.as_ref())?;
    let params = format!("n={n} m={m}");
    write_csv(&mut w, Some(&manifest("crosssection", &params, run)), &rows, run.seed, run.dedup)?;
    Ok(0)
}

pub fn maxpseudo(
    n: &NList,
    m: Option<MRange>,
    ratio: Option<RatioRange>,
    rows_path: Option<&PathBuf>,
    run: &RunArgs,
) -> Result<u8> {
    let window = |n: usize| match (m, ratio) {
        (Some(m), _) => (m.lo, m.hi),
        (None, Some(r)) => (
            (r.lo * n as f64).round() as usize,
            (r.hi * n as f64).round() as usize,
        ),
        (None, None) => unreachable!("clap requires one of --m, --ratio"),
    };
    let results: Vec<(PseudoMax, usize, usize, Vec<_>)> = with_threads(run.threads, || {
        n.0.iter()
            .map(|&n| {
                let (lo, hi) = window(n);
                max_pseudotelepathy(n, lo, hi, &sampling(run, n)).map(|(best, rows)| (best, lo, hi, rows))
            })
            .collect::<Result<_, _>>()
    })??;

    let ns: Vec<String> = n.0.iter().map(ToString::to_string).collect();
    let params = match (m, ratio) {
        (Some(m), _) => format!("n={} m={m}", ns.join(",")),
        (None, Some(r)) => format!("n={} ratio={r}", ns.join(",")),
        (None, None) => unreachable!(),
    };
    let head = manifest("maxpseudo", &params, run);

    let mut w = open_out(run.out.as_ref())?;
    writeln!(w, "# {head}")?;
    writeln!(w, "{SUMMARY_HEADER}")?;
    for (best, lo, hi, _) in &results {
        writeln!(
            w,
            "{},{},{},{},{lo},{hi},{},{}",
            best.n,
            best.m_star,
            format_f64(best.mu),
            best.samples,
            run.seed,
            run.dedup
        )?;
    }
    if results.len() >= 2 {
        let points: Vec<(f64, f64)> = results
            .iter()
            .map(|(b, ..)| (b.n as f64, b.m_star as f64))
            .collect();
        let fit = fit_linear(&points)?;
        writeln!(
            w,
            "# fit m_star = slope*n + intercept: slope={} intercept={} residual={}",
            format_f64(fit.slope),
            format_f64(fit.intercept),
            format_f64(fit.residual)
        )?;
    }
    w.flush()?;

    if let Some(p) = rows_path {
        let all: Vec<_> = results.iter().flat_map(|r| r.3.iter().copied()).collect();
        let mut w = open_out(Some(p))?;
        write_csv(&mut w, Some(&head), &all, run.seed, run.dedup)?;
    }
    Ok(0)
}
