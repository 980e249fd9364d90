pub mod dirac;
pub mod gauge;
pub mod maxwell;
pub mod nelson;
pub mod stochastic;

/// Least-squares slope of `y` against `x`.
pub(crate) fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Comma-separated list of numbers.
pub(crate) fn parse_list<T: std::str::FromStr>(
    name: &str,
    raw: &str,
) -> crate::error::Result<Vec<T>> {
    raw.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| crate::error::invalid(format!("`{name}` has a malformed entry `{s}`")))
        })
        .collect::<crate::error::Result<Vec<T>>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(crate::error::invalid(format!("`{name}` must not be empty")))
            } else {
                Ok(v)
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        assert!((fit_slope(&x, &y) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn lists() {
        assert_eq!(
            parse_list::<f64>("m", "0, 0.5,1").unwrap(),
            vec![0.0, 0.5, 1.0]
        );
        assert!(parse_list::<i64>("k", "1,x").is_err());
        assert!(parse_list::<i64>("k", " ").is_err());
    }
}
