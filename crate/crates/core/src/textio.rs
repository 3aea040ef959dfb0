//! Rational tokens and the key=value config file.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lab::probe::Radius;
use crate::lab::Q;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("not a rational number: {0:?}")]
    BadRational(String),
    #[error("line {line}: {message}")]
    BadConfig { line: usize, message: String },
}

/// Accepts `3`, `-1/4` and `0.25`; no exponents.
pub fn parse_rational(text: &str) -> Result<Q, TextError> {
    let t = text.trim();
    let bad = || TextError::BadRational(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.starts_with('-');
        let digits = int.trim_start_matches(['-', '+']);
        if frac.is_empty() && digits.is_empty()
            || !frac.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(digits).map_err(|_| bad())?
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let f = if frac.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(frac).map_err(|_| bad())?
        };
        let q = Q::new(whole * &scale + f, scale);
        return Ok(if negative { -q } else { q });
    }
    Q::from_str(t).map_err(|_| bad())
}

/// A rational ≥ 0 or `inf`.
pub fn parse_radius(text: &str) -> Result<Radius, TextError> {
    let t = text.trim();
    if matches!(t, "inf" | "∞" | "infinity") {
        return Ok(Radius::Infinity);
    }
    let r = parse_rational(t)?;
    if r.is_negative() {
        return Err(TextError::BadRational(text.to_string()));
    }
    Ok(Radius::Finite(r))
}

/// Defaults read from a config file of `key = value` lines; `#` starts a
/// comment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub rho: Option<Q>,
    pub eps: Option<Q>,
    pub nmax: Option<u64>,
    pub denom_bound: Option<u64>,
    pub imax: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

pub const CONFIG_KEYS: [&str; 7] = ["rho", "eps", "nmax", "denom-bound", "imax", "seed", "threads"];

impl Config {
    pub fn parse(text: &str) -> Result<Config, TextError> {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| TextError::BadConfig { line, message };
            let (k, v) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {content:?}")))?;
            let (k, v) = (k.trim().replace('_', "-"), v.trim());
            if let Some(prev) = seen.insert(k.clone(), line) {
                return Err(err(format!("{k} already set on line {prev}")));
            }
            let int = |v: &str| v.parse::<u64>().map_err(|_| err(format!("{k}: not an integer: {v:?}")));
            let rat = |v: &str| parse_rational(v).map_err(|e| err(format!("{k}: {e}")));
            match k.as_str() {
                "rho" => c.rho = Some(rat(v)?),
                "eps" | "epsilon" => c.eps = Some(rat(v)?),
                "nmax" => c.nmax = Some(int(v)?),
                "denom-bound" => c.denom_bound = Some(int(v)?),
                "imax" => c.imax = Some(int(v)?),
                "seed" => c.seed = Some(int(v)?),
                "threads" => c.threads = Some(int(v)? as usize),
                other => {
                    return Err(err(format!(
                        "unknown key {other:?}; known keys: {}",
                        CONFIG_KEYS.join(", ")
                    )))
                }
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::matrix::{frac, q};

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("1/4").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("-2/6").unwrap(), frac(-1, 3));
        assert_eq!(parse_rational("-0.5").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("3").unwrap(), q(3));
        for bad in ["", "1/0", "abc", "1.2.3", "1e-2", ".", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn radii() {
        assert_eq!(parse_radius("inf").unwrap(), Radius::Infinity);
        assert_eq!(parse_radius("2").unwrap(), Radius::Finite(q(2)));
        assert!(parse_radius("-1").is_err());
    }

    #[test]
    fn config() {
        let c = Config::parse("# defaults\nrho = 3\neps=0.25 # quarter\n\ndenom_bound = 24\n").unwrap();
        assert_eq!(c.rho, Some(q(3)));
        assert_eq!(c.eps, Some(frac(1, 4)));
        assert_eq!(c.denom_bound, Some(24));
        assert!(matches!(Config::parse("rho 3"), Err(TextError::BadConfig { line: 1, .. })));
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("rho = 1\nrho = 2").is_err());
    }
}
