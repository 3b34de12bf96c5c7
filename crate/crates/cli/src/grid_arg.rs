use osinv_core::grid::geometric_integers;

use crate::error::{CliError, CliResult};

/// Parses `geometric:a:b:count` or a comma-separated list of positive integers.
pub fn parse_grid(arg: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Parse(format!("grid \"{arg}\": {why}"));
    let grid: Vec<u64> = if let Some(rest) = arg.strip_prefix("geometric:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected geometric:a:b:count"));
        }
        let a: u64 = parts[0].trim().parse().map_err(|_| bad("a is not a positive integer"))?;
        let b: u64 = parts[1].trim().parse().map_err(|_| bad("b is not a positive integer"))?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count is not a positive integer"))?;
        if a == 0 || b < a || count == 0 || (count > 1 && b == a) {
            return Err(bad("need 1 <= a < b and count >= 1"));
        }
        geometric_integers(a, b, count)
    } else {
        let mut v = Vec::new();
        for item in arg.split(',') {
            let n: u64 = item.trim().parse().map_err(|_| bad(&format!("\"{}\" is not a positive integer", item.trim())))?;
            if n == 0 {
                return Err(bad("dimensions start at 1"));
            }
            v.push(n);
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("dimensions must increase"));
        }
        v
    };
    if grid.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(grid.into_iter().map(|n| n as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_default() {
        let g = parse_grid("geometric:16:1048576:9").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 16.0);
        assert_eq!(g[1], 64.0);
        assert_eq!(g[8], 1048576.0);
    }

    #[test]
    fn lists_and_errors() {
        assert_eq!(parse_grid("4, 8,16").unwrap(), vec![4.0, 8.0, 16.0]);
        for bad in ["", "geometric:1:2", "geometric:0:8:3", "3,2", "1,x", "0"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Parse(_))), "{bad}");
        }
    }
}
