//! Built-in distributions: the published dyadic/triadic/camouflage tables
//! and the canonical parity and giant-bit constructions.

use num::BigRational;

use crate::dist::{rat, JointDistribution};
use crate::error::{Error, Result};
use crate::symbol::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Three four-symbol variables built from three pairwise rules.
    Dyadic,
    /// Three four-symbol variables built from an xor rule and a shared bit.
    Triadic,
    /// Uniform over even-parity 3-bit tuples.
    Xor3,
    /// k symbols copied across n variables.
    GiantBit { n: usize, k: u64 },
    /// Uniform over even-parity n-bit tuples.
    Parity { n: usize },
    /// The published 4-variable dyadic camouflage table.
    Camouflage4,
}

impl std::str::FromStr for Builtin {
    type Err = Error;

    /// Parses `dyadic`, `triadic`, `xor3`, `camouflage4`, `parity(n)`,
    /// `giant_bit(n,k)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "dyadic" => return Ok(Builtin::Dyadic),
            "triadic" => return Ok(Builtin::Triadic),
            "xor3" => return Ok(Builtin::Xor3),
            "camouflage4" => return Ok(Builtin::Camouflage4),
            _ => {}
        }
        let parse_args = |name: &str| -> Option<Vec<u64>> {
            let rest = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
            rest.split(',')
                .map(|a| a.trim().parse::<u64>().ok())
                .collect()
        };
        if let Some(args) = parse_args("parity") {
            if args.len() == 1 {
                return Ok(Builtin::Parity {
                    n: args[0] as usize,
                });
            }
        }
        if let Some(args) = parse_args("giant_bit") {
            if args.len() == 2 {
                return Ok(Builtin::GiantBit {
                    n: args[0] as usize,
                    k: args[1],
                });
            }
        }
        Err(Error::UnknownName(s.to_string()))
    }
}

fn table(
    names: &[&str],
    rows: &[&[u64]],
    p: BigRational,
) -> Result<JointDistribution> {
    JointDistribution::from_outcomes(
        names.iter().map(|s| s.to_string()),
        rows.iter()
            .map(|r| (r.iter().map(|&v| Symbol::int(v)).collect(), p.clone()))
            .collect(),
    )
}

pub fn builtin(which: Builtin) -> Result<JointDistribution> {
    match which {
        Builtin::Dyadic => table(
            &["X", "Y", "Z"],
            &[
                &[0, 0, 0],
                &[0, 2, 1],
                &[1, 0, 2],
                &[1, 2, 3],
                &[2, 1, 0],
                &[2, 3, 1],
                &[3, 1, 2],
                &[3, 3, 3],
            ],
            rat(1, 8),
        ),
        Builtin::Triadic => table(
            &["X", "Y", "Z"],
            &[
                &[0, 0, 0],
                &[1, 1, 1],
                &[0, 2, 2],
                &[1, 3, 3],
                &[2, 0, 2],
                &[3, 1, 3],
                &[2, 2, 0],
                &[3, 3, 1],
            ],
            rat(1, 8),
        ),
        Builtin::Xor3 => builtin(Builtin::Parity { n: 3 }),
        Builtin::GiantBit { n, k } => {
            if n == 0 || k == 0 {
                return Err(Error::UnknownName(format!("giant_bit({n},{k})")));
            }
            let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
            let rows = (0..k)
                .map(|s| (vec![Symbol::int(s); n], rat(1, k as i64)))
                .collect();
            JointDistribution::from_outcomes(names, rows)
        }
        Builtin::Parity { n } => {
            if n < 2 || n > 24 {
                return Err(Error::UnknownName(format!("parity({n})")));
            }
            let names: Vec<String> = (0..n).map(|i| format!("V{i}")).collect();
            let count = 1i64 << (n - 1);
            let rows = (0..1u64 << n)
                .filter(|w| w.count_ones() % 2 == 0)
                .map(|w| {
                    let tuple = (0..n)
                        .map(|i| Symbol::int((w >> (n - 1 - i)) & 1))
                        .collect();
                    (tuple, rat(1, count))
                })
                .collect();
            JointDistribution::from_outcomes(names, rows)
        }
        Builtin::Camouflage4 => table(
            &["W", "X", "Y", "Z"],
            &[
                &[0, 0, 0, 0],
                &[0, 1, 3, 1],
                &[1, 0, 2, 2],
                &[1, 1, 1, 3],
                &[2, 2, 3, 3],
                &[2, 3, 0, 2],
                &[3, 2, 1, 1],
                &[3, 3, 2, 0],
            ],
            rat(1, 8),
        ),
    }
}
