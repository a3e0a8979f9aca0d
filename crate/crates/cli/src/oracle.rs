use std::fmt::Write as _;

use clap::Args;
use dirichlet_core::{closed_form_temperatures, vanilla_consistency_condition, BlockModelParams};

use crate::error::{CliError, Result};

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Number of blocks; must match the length of --sizes when given.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Block sizes, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Seeds per block, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub seeds: Vec<usize>,
    /// Edge weight inside a block.
    #[arg(long)]
    pub p: f64,
    /// Edge weight between blocks.
    #[arg(long)]
    pub q: f64,
    /// Block whose seeds are hot.
    #[arg(long, default_value_t = 1)]
    pub hot: u32,
}

/// Formats with at most 12 decimals and no trailing zeros.
pub fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn report(args: &OracleArgs) -> Result<String> {
    if let Some(k) = args.k {
        if k != args.sizes.len() {
            return Err(CliError::Usage(format!(
                "--K is {k} but --sizes lists {} blocks",
                args.sizes.len()
            )));
        }
    }
    let params = BlockModelParams::new(args.sizes.clone(), args.seeds.clone(), args.p, args.q)?;
    let t = closed_form_temperatures(&params, args.hot)?;
    let k = params.k();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "K={k} sizes={:?} seeds={:?} p={} q={} hot={}",
        params.sizes, params.seeds, params.p, params.q, args.hot
    );
    let _ = writeln!(out, "mean temperature: {}", num(t.mean));
    let _ = writeln!(out, "block\ttemperature\tdelta");
    for b in 0..k as usize {
        let _ = writeln!(out, "{}\t{}\t{}", b + 1, num(t.per_block[b]), num(t.deltas[b]));
    }
    if k > 1 {
        let _ = writeln!(out, "vanilla condition (block b prefers its own label over label o):");
        for b in 1..=k {
            for o in (1..=k).filter(|&o| o != b) {
                let holds = vanilla_consistency_condition(&params, b, o)?;
                let _ = writeln!(
                    out,
                    "  block {b} vs label {o}: {}",
                    if holds { "TRUE" } else { "FALSE" }
                );
            }
        }
    }
    Ok(out)
}

pub fn run(args: &OracleArgs) -> Result<()> {
    print!("{}", report(args)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(sizes: &[usize], seeds: &[usize], p: f64, q: f64) -> OracleArgs {
        OracleArgs {
            k: Some(sizes.len()),
            sizes: sizes.to_vec(),
            seeds: seeds.to_vec(),
            p,
            q,
            hot: 1,
        }
    }

    #[test]
    fn worked_instance() {
        let r = report(&args(&[2, 2], &[1, 1], 2.0, 1.0)).unwrap();
        assert!(r.contains("mean temperature: 0.5\n"), "{r}");
        assert!(r.contains("1\t0.6\t0.1\n") && r.contains("2\t0.4\t-0.1\n"), "{r}");
    }

    #[test]
    fn equal_weights_give_zero_deltas() {
        let r = report(&args(&[3, 5], &[1, 2], 1.0, 1.0)).unwrap();
        for line in r.lines().filter(|l| l.starts_with(char::is_numeric)) {
            assert!(line.ends_with("\t0"), "{line}");
        }
    }

    #[test]
    fn seed_imbalance_fails_block_two() {
        let r = report(&args(&[50, 50], &[10, 2], 2.0, 1.0)).unwrap();
        assert!(r.contains("block 1 vs label 2: TRUE"));
        assert!(r.contains("block 2 vs label 1: FALSE"));
    }

    #[test]
    fn block_count_mismatch() {
        let mut a = args(&[2, 2], &[1, 1], 2.0, 1.0);
        a.k = Some(3);
        assert!(matches!(report(&a), Err(CliError::Usage(_))));
    }

    #[test]
    fn number_format() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(0.6000000000000001), "0.6");
        assert_eq!(num(-1e-17), "0");
        assert_eq!(num(2.0), "2");
    }
}
