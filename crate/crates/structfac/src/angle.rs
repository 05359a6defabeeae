//! Numeric argument parsing: angles with a literal `pi` token, coefficient
//! triples and comma-separated lists.

use std::f64::consts::PI;

use crate::error::{input, CliError};

/// Parses `0.3`, `pi`, `-pi`, `pi/4`, `3pi/4` or `3*pi/4`.
///
/// `pi` maps to the `f64` constant itself, so `--k pi` gives exactly the
/// value used in the closed forms.
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let value = match s.find("pi") {
        Some(at) => {
            let coeff = s[..at].strip_suffix('*').unwrap_or(&s[..at]);
            let coeff = match coeff {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| input!("bad angle {text:?}"))?,
            };
            let rest = &s[at + 2..];
            let denom = match rest.strip_prefix('/') {
                None if rest.is_empty() => 1.0,
                None => return Err(input!("bad angle {text:?}")),
                Some(d) => d.parse::<f64>().map_err(|_| input!("bad angle {text:?}"))?,
            };
            if denom == 0.0 {
                return Err(input!("angle {text:?} divides by zero"));
            }
            coeff * PI / denom
        }
        None => s.parse::<f64>().map_err(|_| input!("bad angle {text:?}"))?,
    };
    if !value.is_finite() {
        return Err(input!("angle {text:?} is not finite"));
    }
    Ok(value)
}

/// Comma-separated reals, e.g. `1,1,-1`.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(input!("bad number {t:?} in {text:?}")),
            }
        })
        .collect()
}

/// Witness coefficients `cx,cy,cz`.
pub fn parse_coeffs(text: &str) -> Result<[f64; 3], CliError> {
    let v = parse_reals(text)?;
    <[f64; 3]>::try_from(v).map_err(|v| input!("expected three coefficients, got {}", v.len()))
}

/// Comma-separated positive integers.
pub fn parse_counts(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            // allow 1e6 style shorthand
            let v = t.parse::<usize>().ok().or_else(|| {
                t.parse::<f64>()
                    .ok()
                    .filter(|f| f.fract() == 0.0 && *f >= 1.0 && *f <= u32::MAX as f64)
                    .map(|f| f as usize)
            });
            v.filter(|&n| n > 0)
                .ok_or_else(|| input!("bad count {t:?} in {text:?}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle(" 2 PI ").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        for bad in ["", "pie", "pi/0", "x", "pi/", "1/2", "inf"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(parse_coeffs("1, 1,-1").unwrap(), [1.0, 1.0, -1.0]);
        assert!(parse_coeffs("1,1").is_err());
        assert_eq!(parse_counts("100,1e6").unwrap(), vec![100, 1_000_000]);
        assert!(parse_counts("0").is_err());
        assert!(parse_counts("1.5").is_err());
    }
}
