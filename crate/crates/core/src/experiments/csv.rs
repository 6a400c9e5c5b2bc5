//! Tabular output. Floats are plain decimals with 9 significant digits and
//! no locale formatting.

use std::io::{self, Write};

use super::ProbabilityEstimate;
use crate::game::Dedup;

pub const CSV_HEADER: &str =
    "n,m,ratio,samples,c_count,q_count,pseudo_count,p_c,p_q,p_pseudo,ci_c,ci_q,ci_pseudo,seed,dedup";

/// `x` rounded to 9 significant digits, positional notation, trailing
/// zeros trimmed.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    // the exponent of the already rounded value, so 0.9999999996 becomes 1
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (8 - exp).max(0) as usize;
    let mut out = format!("{x:.decimals$}");
    if out.contains('.') {
        out.truncate(out.trim_end_matches('0').trim_end_matches('.').len());
    }
    out
}

/// Writes `# `-prefixed `manifest` lines, the header, and one line per row.
pub fn write_csv<W: Write>(
    mut w: W,
    manifest: Option<&str>,
    rows: &[ProbabilityEstimate],
    seed: u64,
    dedup: Dedup,
) -> io::Result<()> {
    if let Some(text) = manifest {
        for line in text.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.m,
            format_f64(r.ratio()),
            r.samples,
            r.c_count,
            r.q_count,
            r.pseudo_count,
            format_f64(r.p_c()),
            format_f64(r.p_q()),
            format_f64(r.p_pseudo()),
            format_f64(r.ci_c()),
            format_f64(r.ci_q()),
            format_f64(r.ci_pseudo()),
            seed,
            dedup,
        )?;
    }
    w.flush()
}
