use std::io::Write;

use crate::simulate::{MomentEstimate, SimulationConfig};
use crate::Result;

/// Writes `estimate` as CSV: two comment header lines, a column header, then
/// one row per mean and per unordered statistic pair.
pub fn write_csv(
    config: &SimulationConfig,
    estimate: &MomentEstimate,
    out: &mut impl Write,
) -> Result<()> {
    writeln!(
        out,
        "# model={}, seed={}, N={}",
        config.model, estimate.seed, estimate.samples
    )?;
    writeln!(
        out,
        "# rng=ChaCha8 (rand_chacha), seed_from_u64(seed), stream=sample index"
    )?;
    let orders: Vec<String> = config
        .statistics
        .iter()
        .map(|s| format!("{}:r={}", s.name, s.order))
        .collect();
    writeln!(out, "# statistics={}", orders.join(" "))?;
    writeln!(out, "kind,stat_a,stat_b,estimate,stderr")?;
    let names = &estimate.names;
    for (a, name) in names.iter().enumerate() {
        writeln!(
            out,
            "mean,{name},,{:.11e},{:.11e}",
            estimate.mean[a], estimate.mean_stderr[a]
        )?;
    }
    for a in 0..names.len() {
        for b in a..names.len() {
            writeln!(
                out,
                "covariance,{},{},{:.11e},{:.11e}",
                names[a], names[b], estimate.covariance[a][b], estimate.covariance_stderr[a][b]
            )?;
        }
    }
    for a in 0..names.len() {
        for b in a..names.len() {
            writeln!(
                out,
                "second_moment,{},{},{:.11e},{:.11e}",
                names[a],
                names[b],
                estimate.second_moment[a][b],
                estimate.second_moment_stderr[a][b]
            )?;
        }
    }
    Ok(())
}
