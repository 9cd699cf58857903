//! Parsing of schedule arguments.
//!
//! Every schedule flag accepts a single value, a comma list, or a range
//! `a..b[:k]`. Ranges are geometric for `--deltas` (default two samples
//! per decade) and linear for the others (default five samples). Integer
//! ranges (`--n`) step by one and include both ends.

use crate::CliError;

fn number(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::Usage(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("non-finite value: {s:?}")));
    }
    Ok(v)
}

fn split_range(s: &str) -> Option<(&str, &str, Option<&str>)> {
    let (a, rest) = s.split_once("..")?;
    match rest.split_once(':') {
        Some((b, k)) => Some((a, b, Some(k))),
        None => Some((a, rest, None)),
    }
}

fn count(k: &str) -> Result<usize, CliError> {
    match k.trim().parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(CliError::Usage(format!("sample count must be an integer ≥ 2, got {k:?}"))),
    }
}

fn list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(number).collect()
}

/// `a..b[:k]` with `k` log-spaced samples from `a` to `b`.
pub fn parse_geometric(s: &str) -> Result<Vec<f64>, CliError> {
    let Some((a, b, k)) = split_range(s) else { return list(s) };
    let (a, b) = (number(a)?, number(b)?);
    if !(a > 0.0 && b > 0.0) {
        return Err(CliError::Usage(format!("geometric range needs positive ends: {s:?}")));
    }
    let k = match k {
        Some(k) => count(k)?,
        None => ((2.0 * (a / b).log10().abs()).round() as usize + 1).max(2),
    };
    let (la, lb) = (a.ln(), b.ln());
    Ok((0..k)
        .map(|i| {
            // Ends are reproduced exactly.
            match i {
                0 => a,
                _ if i == k - 1 => b,
                _ => (la + (lb - la) * i as f64 / (k - 1) as f64).exp(),
            }
        })
        .collect())
}

/// `a..b[:k]` with `k` evenly spaced samples.
pub fn parse_linear(s: &str) -> Result<Vec<f64>, CliError> {
    let Some((a, b, k)) = split_range(s) else { return list(s) };
    let (a, b) = (number(a)?, number(b)?);
    let k = match k {
        Some(k) => count(k)?,
        None => 5,
    };
    Ok((0..k).map(|i| if i == k - 1 { b } else { a + (b - a) * i as f64 / (k - 1) as f64 }).collect())
}

/// `a..b` inclusive, or a comma list.
pub fn parse_integers(s: &str) -> Result<Vec<usize>, CliError> {
    let int =
        |t: &str| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("not a non-negative integer: {t:?}")));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(CliError::Usage(format!("empty integer range {s:?}")));
            }
            Ok((a..=b).collect())
        }
        None => s.split(',').map(int).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_defaults_to_two_per_decade() {
        let v = parse_geometric("1e-1..1e-4").unwrap();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 1e-4);
        assert!((v[2] - 1e-2).abs() < 1e-17);
        assert_eq!(parse_geometric("1e-1..1e-4:4").unwrap().len(), 4);
        assert_eq!(parse_geometric("0.5,0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_geometric("0..1").is_err());
        assert!(parse_geometric("1e-1..1e-2:1").is_err());
    }

    #[test]
    fn linear_and_integer() {
        assert_eq!(parse_linear("0.1..0.9:9").unwrap().len(), 9);
        assert_eq!(parse_linear("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_linear("0..1").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_integers("1..5").unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_integers("2,7").unwrap(), vec![2, 7]);
        assert!(parse_integers("3..1").is_err());
        assert!(parse_linear("x").is_err());
    }
}
