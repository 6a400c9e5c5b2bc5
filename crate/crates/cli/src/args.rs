use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use xorgame::game::Dedup;

#[derive(Parser, Debug)]
#[command(name = "xorgame", version, about = "Perfect strategies for 3-player XOR games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide quantum and classical perfection of a game file.
    Classify {
        game: PathBuf,
    },
    /// Score a strategy (3n rationals `p/q` or 3n bits) on a game.
    Verify {
        game: PathBuf,
        strategy: PathBuf,
    },
    /// Write random games, one file each.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "triple")]
        dedup: Dedup,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Perfection probabilities on an (n, m/n) grid.
    Sweep {
        #[arg(long)]
        n: NList,
        #[arg(long, default_value = "1:5:0.1")]
        ratio: RatioRange,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Perfection probabilities for every m in a window at fixed n.
    Crosssection {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: MRange,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Location and height of the pseudotelepathy peak for each n.
    Maxpseudo {
        #[arg(long)]
        n: NList,
        /// Fixed clause window.
        #[arg(long, conflicts_with = "ratio", required_unless_present = "ratio")]
        m: Option<MRange>,
        /// Clause window round(a·n)..=round(b·n), scaled per n.
        #[arg(long)]
        ratio: Option<RatioRange>,
        /// Also write the scanned rows in the sweep CSV layout.
        #[arg(long)]
        rows: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Games per cell; defaults to 50000 for n <= 32 and 10000 above.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads, 0 = one per core. Never changes the output.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, default_value = "triple")]
    pub dedup: Dedup,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `8`, `8,16,24` or `10:40:5` (inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

impl FromStr for NList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{t}` is not a nonnegative integer"))
        };
        let list = if s.contains(':') {
            let parts: Vec<usize> = s.split(':').map(num).collect::<Result<_, _>>()?;
            let (a, b, step) = match parts[..] {
                [a, b] => (a, b, 1),
                [a, b, step] => (a, b, step),
                _ => return Err(format!("bad range `{s}`, expected a:b or a:b:step")),
            };
            if step == 0 || a > b {
                return Err(format!("empty range `{s}`"));
            }
            (a..=b).step_by(step).collect()
        } else {
            s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        if list.contains(&0) {
            return Err("question counts must be positive".into());
        }
        Ok(NList(list))
    }
}

/// `m` or `a:b` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRange {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{t}` is not a nonnegative integer"))
        };
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(s)?, num(s)?),
        };
        if lo == 0 || lo > hi {
            return Err(format!("bad clause window `{s}`"));
        }
        Ok(MRange { lo, hi })
    }
}

impl fmt::Display for MRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}:{}", self.lo, self.hi)
        }
    }
}

/// `a:b` or `a:b:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRange {
    pub lo: f64,
    pub hi: f64,
    pub step: Option<f64>,
}

impl FromStr for RatioRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
            .collect::<Result<_, _>>()?;
        let r = match parts[..] {
            [lo, hi] => RatioRange { lo, hi, step: None },
            [lo, hi, step] => RatioRange { lo, hi, step: Some(step) },
            _ => return Err(format!("bad ratio range `{s}`, expected a:b or a:b:step")),
        };
        if !(r.lo > 0.0 && r.lo <= r.hi && r.step.is_none_or(|st| st > 0.0)) {
            return Err(format!("bad ratio range `{s}`"));
        }
        Ok(r)
    }
}

impl fmt::Display for RatioRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)?;
        if let Some(st) = self.step {
            write!(f, ":{st}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!("8".parse::<NList>().unwrap().0, vec![8]);
        assert_eq!("8,16, 24".parse::<NList>().unwrap().0, vec![8, 16, 24]);
        assert_eq!("10:40:5".parse::<NList>().unwrap().0, vec![10, 15, 20, 25, 30, 35, 40]);
        assert_eq!("3:5".parse::<NList>().unwrap().0, vec![3, 4, 5]);
        assert!("0".parse::<NList>().is_err());
        assert!("5:3".parse::<NList>().is_err());
        assert!("1:2:0".parse::<NList>().is_err());
        assert!("x".parse::<NList>().is_err());
    }

    #[test]
    fn m_ranges() {
        assert_eq!("22".parse::<MRange>().unwrap(), MRange { lo: 22, hi: 22 });
        assert_eq!("8:40".parse::<MRange>().unwrap(), MRange { lo: 8, hi: 40 });
        assert!("40:8".parse::<MRange>().is_err());
        assert!("0:3".parse::<MRange>().is_err());
        assert_eq!("8:40".parse::<MRange>().unwrap().to_string(), "8:40");
    }

    #[test]
    fn ratio_ranges() {
        let r: RatioRange = "1:5:0.25".parse().unwrap();
        assert_eq!((r.lo, r.hi, r.step), (1.0, 5.0, Some(0.25)));
        assert_eq!(r.to_string(), "1:5:0.25");
        assert_eq!("2:3".parse::<RatioRange>().unwrap().step, None);
        assert!("0:1:0.1".parse::<RatioRange>().is_err());
        assert!("1:2:-1".parse::<RatioRange>().is_err());
        assert!("1".parse::<RatioRange>().is_err());
    }
}
