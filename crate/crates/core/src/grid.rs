//! Log-spaced sample grids.

/// Points per decade used when the environment does not override it.
pub const DEFAULT_DENSITY: usize = 64;

/// Environment variable holding an integer points-per-decade override.
pub const DENSITY_VAR: &str = "OSINV_GRID_DENSITY";

/// Points per decade for tabulated functions, honouring `OSINV_GRID_DENSITY`.
pub fn grid_density() -> usize {
    std::env::var(DENSITY_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&d| d >= 2)
        .unwrap_or(DEFAULT_DENSITY)
}

/// Log-spaced points from `lo` to `hi` inclusive, `per_decade` steps per factor 10.
///
/// Doubling `per_decade` keeps every old point, so grids nest.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && per_decade > 0);
    let decades = (hi / lo).log10();
    let steps = ((decades * per_decade as f64).round() as usize).max(1);
    geometric(lo, hi, steps + 1)
}

/// `count` geometrically spaced points from `a` to `b` inclusive.
pub fn geometric(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > 0.0 && count >= 1);
    if count == 1 {
        return vec![a];
    }
    let ratio = (b / a).ln();
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| match i {
            0 => a,
            _ if i == count - 1 => b,
            _ => a * (ratio * i as f64 / last).exp(),
        })
        .collect()
}

/// Geometric integer grid, rounded and deduplicated.
pub fn geometric_integers(a: u64, b: u64, count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = geometric(a as f64, b as f64, count)
        .into_iter()
        .map(|x| x.round().max(1.0) as u64)
        .collect();
    out.dedup();
    out
}

/// Powers of two `2^lo ..= 2^hi`.
pub fn dyadic(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = log_grid(1e-12, 1e3, 64);
        assert_eq!(g[0], 1e-12);
        assert_eq!(*g.last().unwrap(), 1e3);
        assert_eq!(g.len(), 15 * 64 + 1);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn doubling_nests() {
        let coarse = log_grid(1.0, 1e4, 8);
        let fine = log_grid(1.0, 1e4, 16);
        for (i, x) in coarse.iter().enumerate() {
            let y = fine[2 * i];
            assert!((x - y).abs() <= 1e-12 * x);
        }
    }

    #[test]
    fn integer_grid() {
        assert_eq!(geometric_integers(16, 1 << 20, 9), dyadic(4, 20).into_iter().step_by(2).collect::<Vec<_>>());
    }
}
