//! Suite selection and run configuration.

use excalc::Mode;
use exactalg::random::random_scalars;
use exactalg::scalar::{format_short, parse};
use exactalg::Scalar;
use integrals::CValue;
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Pairings,
    Spencer,
    Torsion,
    Bianchi,
    Closure,
    Jmatrix,
    Integrals,
    Restriction,
    Frobenius,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Pairings,
        Suite::Spencer,
        Suite::Torsion,
        Suite::Bianchi,
        Suite::Closure,
        Suite::Jmatrix,
        Suite::Integrals,
        Suite::Restriction,
        Suite::Frobenius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pairings => "pairings",
            Suite::Spencer => "spencer",
            Suite::Torsion => "torsion",
            Suite::Bianchi => "bianchi",
            Suite::Closure => "closure",
            Suite::Jmatrix => "jmatrix",
            Suite::Integrals => "integrals",
            Suite::Restriction => "restriction",
            Suite::Frobenius => "frobenius",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a comma-separated suite list; `all` expands to every suite.
/// The result is sorted and deduplicated.
pub fn parse_suites(text: &str) -> Result<Vec<Suite>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
            continue;
        }
        match Suite::ALL.iter().find(|s| s.name() == part) {
            Some(s) => out.push(*s),
            None => return Err(format!("unknown suite `{part}`")),
        }
    }
    if out.is_empty() {
        return Err("no suites selected".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The `--c` setting: unset, symbolic, or a rational value.
#[derive(Clone, Debug, PartialEq)]
pub enum CSetting {
    Default,
    Symbolic,
    Value(Scalar),
}

impl FromStr for CSetting {
    type Err = String;
    fn from_str(s: &str) -> Result<CSetting, String> {
        if s == "symbolic" {
            return Ok(CSetting::Symbolic);
        }
        parse(s).map(CSetting::Value).map_err(|e| format!("`{s}` is not a rational: {e}"))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub c: CSetting,
    /// Structure modes for the closure suite; empty means the default set.
    pub modes: Vec<Mode>,
}

impl SuiteConfig {
    pub fn new(suites: Vec<Suite>, seed: u64) -> SuiteConfig {
        SuiteConfig { suites, seed, c: CSetting::Default, modes: Vec::new() }
    }

    /// `c` for identity checks: symbolic unless a value was given.
    pub fn identity_c(&self) -> CValue {
        match &self.c {
            CSetting::Value(v) => CValue::Value(v.clone()),
            _ => CValue::Symbolic,
        }
    }

    /// `c` for point evaluations: the given value, or a nonzero rational
    /// drawn from the seed.
    pub fn point_c(&self) -> Scalar {
        match &self.c {
            CSetting::Value(v) => v.clone(),
            _ => {
                let mut k = 0;
                loop {
                    let v = random_scalars(1, self.seed.wrapping_add(0xc0ffee + k), 9).remove(0);
                    if !v.is_zero() {
                        return v;
                    }
                    k += 1;
                }
            }
        }
    }

    pub fn c_label(&self) -> String {
        match &self.c {
            CSetting::Value(v) => format_short(v),
            _ => format!("symbolic/{}", format_short(&self.point_c())),
        }
    }

    pub fn closure_modes(&self) -> Vec<Mode> {
        if self.modes.is_empty() {
            vec![Mode::H12, Mode::G12, Mode::TorsionS30]
        } else {
            self.modes.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_lists() {
        assert_eq!(parse_suites("all").unwrap().len(), 9);
        assert_eq!(parse_suites("spencer,pairings,spencer").unwrap(), vec![Suite::Pairings, Suite::Spencer]);
        assert!(parse_suites("pairings,nope").is_err());
        assert!(parse_suites("").is_err());
    }

    #[test]
    fn c_settings() {
        assert_eq!("symbolic".parse::<CSetting>().unwrap(), CSetting::Symbolic);
        assert!("3/x".parse::<CSetting>().is_err());
        let cfg = SuiteConfig::new(vec![Suite::Jmatrix], 7);
        assert_eq!(cfg.point_c(), cfg.point_c());
        assert!(!cfg.point_c().is_zero());
    }
}
