//! Command-line value parsers.

use std::str::FromStr;

use num::BigInt;
use oneperc::scalar::{parse_rational, rational_grid};
use oneperc::Rational;

/// `lo:hi:steps`, `steps` evenly spaced points including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lo: Rational,
    pub hi: Rational,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<Rational> {
        rational_grid(&self.lo, &self.hi, self.steps)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("expected lo:hi:steps, got {s:?}"));
        };
        let lo = exact(lo)?;
        let hi = exact(hi)?;
        let steps: usize = steps.parse().map_err(|_| format!("bad step count {steps:?}"))?;
        if steps == 0 || lo > hi || (steps == 1 && lo != hi) {
            return Err(format!("grid {s:?} is empty or reversed"));
        }
        Ok(Grid { lo, hi, steps })
    }
}

/// `num/den` or an integer; decimals are rejected.
pub fn exact(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| format!("{e} (decimals are not accepted here)"))
}

/// `num/den`, an integer, or a terminating decimal read exactly, so `0.556`
/// becomes `139/250`.
pub fn exact_or_decimal(s: &str) -> Result<Rational, String> {
    if let Ok(r) = parse_rational(s) {
        return Ok(r);
    }
    let bad = || format!("expected num/den or a decimal, got {s:?}");
    let s = s.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').ok_or_else(bad)?;
    let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = num::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(digits, scale);
    Ok(if negative { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use oneperc::scalar::ratio;
    use oneperc::Scalar;

    #[test]
    fn grids() {
        let g: Grid = "1/2:1:3".parse().unwrap();
        assert_eq!(g.points(), vec![ratio(1, 2), ratio(3, 4), ratio(1, 1)]);
        assert!("0:1".parse::<Grid>().is_err());
        assert!("1:0:3".parse::<Grid>().is_err());
        assert!("0.5:1:3".parse::<Grid>().is_err());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(exact_or_decimal("0.556").unwrap(), ratio(139, 250));
        assert_eq!(exact_or_decimal("3/8").unwrap(), ratio(3, 8));
        assert_eq!(exact_or_decimal(".5").unwrap(), ratio(1, 2));
        assert_eq!(exact_or_decimal("-1.25").unwrap(), ratio(-5, 4));
        assert!(exact_or_decimal("1e-3").is_err());
        assert!(exact("0.5").is_err());
        assert_eq!(exact_or_decimal("2").unwrap(), Rational::one() + Rational::one());
    }
}
