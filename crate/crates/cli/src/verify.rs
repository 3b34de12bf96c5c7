use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use osinv_core::grid::{geometric, log_grid};
use osinv_core::growth::{growth_fn, recover_weight, regularity_report, GrowthProfile, DEFAULT_WINDOW};
use osinv_core::invariants::{exactness, pi1_fundamental, projection};
use osinv_core::monotone_fn::{Direction, MonotoneFn};
use osinv_core::oracle::{aux_diag_norm, indicator_search, orlicz_norm_scan, riemann_integral, SearchGrid};
use osinv_core::orlicz::{fundamental_sequence, sequence_norm, OrliczFn};
use osinv_core::schatten::{pi1_of_map, schatten_orlicz_norm, schatten_p_norm, ComplexMatrix};
use osinv_core::spaces::conjugate;
use osinv_core::{Error, SpaceDescriptor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Growth,
    Orlicz,
    Oracle,
    Spaces,
    Schatten,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Growth, Suite::Orlicz, Suite::Oracle, Suite::Spaces, Suite::Schatten],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Growth => "growth",
            Suite::Orlicz => "orlicz",
            Suite::Oracle => "oracle",
            Suite::Spaces => "spaces",
            Suite::Schatten => "schatten",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}/{}: {}", self.suite, self.name, self.detail)
    }
}

/// Outcome of one check body: pass flag and detail, or an error that fails it.
type Outcome = osinv_core::Result<(bool, String)>;

fn check(suite: &'static str, name: &'static str, body: impl FnOnce() -> Outcome) -> Check {
    let (pass, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { suite, name, pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn clamped_power(e: f64) -> MonotoneFn {
    MonotoneFn::power(e).expect("finite exponent").restrict_left(1.0)
}

fn growth_checks() -> Vec<Check> {
    let s = "growth";
    vec![
        check(s, "power_solution", || {
            let ss = log_grid(10.0, 1e6, 8);
            let mut worst: f64 = 0.0;
            for a in [1.5, 2.0, 3.0] {
                let g = growth_fn(&MonotoneFn::power(-a)?, &ss)?;
                for &x in &ss {
                    worst = worst.max(rel(g.value(x), (x / (a - 1.0)).powf(1.0 / a)));
                }
            }
            Ok((worst < 1e-6, format!("max rel err {worst:.3e} (tol 1e-6)")))
        }),
        check(s, "identity_residual", || {
            let mut worst: f64 = 0.0;
            for a in [1.5, 2.0, 3.0] {
                let profile = GrowthProfile::new(clamped_power(-a))?;
                let ts: Vec<f64> = profile.g.values().iter().copied().filter(|&t| t >= 2.0).collect();
                worst = worst.max(profile.identity_residual(&ts)?);
            }
            Ok((worst < 1e-6, format!("max |h(t) g_inv(t)/t - 1| = {worst:.3e} (tol 1e-6)")))
        }),
        check(s, "growth_is_regular", || {
            let mut detail = Vec::new();
            let mut pass = true;
            for a in [1.5, 2.0, 3.0] {
                let profile = GrowthProfile::new(clamped_power(-a))?;
                let rep = regularity_report(&profile.g, DEFAULT_WINDOW);
                pass &= rep.pass && rep.inverse_doubling.is_finite();
                detail.push(format!("a={a}: [{:.3}, {:.3}]", rep.alpha, rep.beta));
            }
            Ok((pass, detail.join(", ")))
        }),
        check(s, "weight_recovery", || {
            let ss = log_grid(10.0, 1e6, 8);
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for a in [1.5, 2.0, 3.0] {
                let w = clamped_power(-a);
                let back = recover_weight(&GrowthProfile::new(w.clone())?.g)?;
                for &x in &ss {
                    let r = back.value(x) / w.value(x);
                    lo = lo.min(r);
                    hi = hi.max(r);
                }
            }
            let target = MonotoneFn::power(0.3)?;
            let g = growth_fn(&recover_weight(&target)?, &ss)?;
            for &x in &ss {
                let r = g.value(x) / target.value(x);
                lo = lo.min(r);
                hi = hi.max(r);
            }
            Ok((lo >= 0.25 && hi <= 4.0, format!("ratios in [{lo:.3}, {hi:.3}] (bound [0.25, 4])")))
        }),
    ]
}

fn oh_orlicz() -> osinv_core::Result<OrliczFn> {
    OrliczFn::from_weight(&clamped_power(-2.0))
}

fn random_vector(rng: &mut ChaCha8Rng, max_len: usize, scale: f64) -> Vec<f64> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(-scale..scale)).collect()
}

fn orlicz_checks() -> Vec<Check> {
    let s = "orlicz";
    vec![
        check(s, "euclidean_norm", || {
            let sq = OrliczFn::new(MonotoneFn::power(2.0)?)?;
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let x = random_vector(&mut rng, 40, 10.0);
                let euclid = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                worst = worst.max(rel(sequence_norm(&sq, &x), euclid));
            }
            Ok((worst < 1e-9, format!("max rel err {worst:.3e} (tol 1e-9)")))
        }),
        check(s, "scan_vs_bisection", || {
            let phi = oh_orlicz()?;
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let x = random_vector(&mut rng, 20, 5.0);
                worst = worst.max(rel(orlicz_norm_scan(&phi, &x), sequence_norm(&phi, &x)));
            }
            Ok((worst < 1e-3, format!("max rel gap {worst:.3e} (tol 1e-3)")))
        }),
        check(s, "triangle_inequality", || {
            let phi = oh_orlicz()?;
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let x = random_vector(&mut rng, 20, 5.0);
                let y: Vec<f64> = x.iter().map(|_| rng.gen_range(-5.0..5.0)).collect();
                let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                let r = sequence_norm(&phi, &sum) / (sequence_norm(&phi, &x) + sequence_norm(&phi, &y));
                worst = worst.max(r);
            }
            Ok((worst <= 1.0 + 1e-6, format!("max ‖x+y‖/(‖x‖+‖y‖) = {worst:.6}")))
        }),
        check(s, "psi_fundamental_sequence", || {
            let psi = OrliczFn::psi();
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for n in geometric(8.0, 1_048_576.0, 30) {
                let r = fundamental_sequence(&psi, n) / (n * (n + 1.0).ln()).sqrt();
                lo = lo.min(r);
                hi = hi.max(r);
            }
            Ok((lo >= 0.5 && hi <= 2.0, format!("ratio to sqrt(n log(n+1)) in [{lo:.3}, {hi:.3}]")))
        }),
        check(s, "smoothing_sandwich", || {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let mut knots = vec![1e-6];
                let mut values = vec![1e-9];
                for _ in 0..5 {
                    let last = *knots.last().unwrap();
                    let t: f64 = last * rng.gen_range(3.0..100.0);
                    let e: f64 = rng.gen_range(1.0..2.0);
                    values.push(values.last().unwrap() * (t / last).powf(e));
                    knots.push(t);
                }
                let raw = MonotoneFn::new(knots, values, 1.5, 1.2, Direction::Nondecreasing)?;
                let phi = OrliczFn::smooth_from_raw(&raw)?;
                for t in log_grid(1e-8, 1e2, 8) {
                    let (a, b) = (phi.eval(t), raw.value(t));
                    worst = worst.max((a / b).max(b / (4.0 * a)));
                }
            }
            Ok((worst <= 1.0 + 1e-9, format!("max of φ/φ̃ and φ̃/4φ = {worst:.6}")))
        }),
    ]
}

fn oracle_checks() -> Vec<Check> {
    let s = "oracle";
    let oh = SpaceDescriptor::oh();
    let grid = SearchGrid::default();
    let ns = [16.0, 256.0, 4096.0];
    let searches = || -> osinv_core::Result<Vec<_>> {
        let w = oh.canonical_weights()?;
        ns.iter()
            .map(|&n| Ok((n, indicator_search(&w, &w, n, &grid)?, pi1_fundamental(&oh, &oh, n)?.minus_plus)))
            .collect()
    };
    let found = searches();
    let cell = (grid.rect_s[1] / grid.rect_s[0]).ln();
    vec![
        check(s, "indicator_argmin", || {
            let mut pass = true;
            let mut detail = Vec::new();
            for (n, f, q) in found.clone()? {
                let (ds, dt) = ((f.argmin.0 / q.s_break).ln() / cell, (f.argmin.1 / q.t_break).ln() / cell);
                pass &= ds.abs() <= 1.0 + 1e-9 && dt.abs() <= 1.0 + 1e-9;
                detail.push(format!("n={n}: ({ds:+.2}, {dt:+.2}) cells"));
            }
            Ok((pass, format!("argmin offset from (s_n, t_n): {}", detail.join(", "))))
        }),
        check(s, "indicator_value", || {
            let mut pass = true;
            let mut detail = Vec::new();
            for (n, f, q) in found.clone()? {
                let r = f.value / q.total().sqrt();
                pass &= (0.25..=4.0).contains(&r);
                detail.push(format!("n={n}: {r:.4}"));
            }
            Ok((pass, format!("search / region value: {}", detail.join(", "))))
        }),
        check(s, "aux_norm_bracket", || {
            let w = oh.canonical_weights()?;
            let (_, wr) = w.half_line_parts().expect("canonical weights live on the half-line");
            let phi = OrliczFn::from_weight(wr)?;
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for _ in 0..30 {
                let x = random_vector(&mut rng, 32, 3.0);
                let r = aux_diag_norm(&w, &x, &grid)? / sequence_norm(&phi, &x);
                lo = lo.min(r);
                hi = hi.max(r);
            }
            Ok((lo >= 0.125 && hi <= 8.0, format!("ratio in [{lo:.3}, {hi:.3}] (bound [1/8, 8])")))
        }),
        check(s, "riemann_vs_closed_form", || {
            let w = clamped_power(-2.0);
            let num = riemann_integral(|t| w.value(t), 1.0, f64::INFINITY, 20_000, Some(1e10))?;
            let exact = w.integral(1.0, f64::INFINITY)?;
            let err = rel(num, exact);
            Ok((err < 1e-6, format!("rel err {err:.3e} (tol 1e-6)")))
        }),
    ]
}

fn catalog() -> osinv_core::Result<Vec<SpaceDescriptor>> {
    let mut out = vec![SpaceDescriptor::oh()];
    for p in [4.0 / 3.0, 1.5, 3.0, 4.0] {
        out.push(SpaceDescriptor::column_p(p)?);
        out.push(SpaceDescriptor::row_p(p)?);
        out.push(SpaceDescriptor::cr_p(p)?);
    }
    Ok(out)
}

fn spaces_checks() -> Vec<Check> {
    let s = "spaces";
    vec![
        check(s, "dual_product", || {
            let mut worst: f64 = 0.0;
            for f in catalog()? {
                let d = f.dual();
                for n in [1.0, 3.0, 1024.0, 1e6] {
                    worst = worst.max(rel(f.phi_c().value(n) * d.phi_c().value(n), n));
                    worst = worst.max(rel(f.phi_r().value(n) * d.phi_r().value(n), n));
                }
            }
            Ok((worst < 1e-14, format!("max rel err {worst:.3e} (tol 1e-14)")))
        }),
        check(s, "projection_duality", || {
            let mut worst: f64 = 0.0;
            for f in catalog()? {
                for n in [2.0, 64.0, 65536.0] {
                    worst = worst.max(rel(projection(&f, n)?, projection(&f.dual(), n)?));
                }
            }
            Ok((worst < 1e-6, format!("max rel gap {worst:.3e} (tol 1e-6)")))
        }),
        check(s, "endpoints_rejected", || {
            let all = [SpaceDescriptor::c(), SpaceDescriptor::r(), SpaceDescriptor::c_cap_r(), SpaceDescriptor::c_plus_r()];
            let rejected = all.iter().filter(|f| matches!(exactness(f, 16.0), Err(Error::NotRegular { .. }))).count();
            Ok((rejected == all.len(), format!("{rejected} of {} endpoint spaces rejected", all.len())))
        }),
    ]
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> osinv_core::Result<ComplexMatrix> {
    let e = (0..n * n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::new(n, n, e)
}

fn schatten_checks() -> Vec<Check> {
    let s = "schatten";
    vec![
        check(s, "identity_p_norms", || {
            let mut worst: f64 = 0.0;
            for p in [1.0, 4.0 / 3.0, 2.0, 3.0, 4.0] {
                for n in [1usize, 5, 32, 100] {
                    let v = schatten_p_norm(&ComplexMatrix::identity(n), p)?;
                    worst = worst.max(rel(v, (n as f64).powf(1.0 / p)));
                }
            }
            Ok((worst < 1e-12, format!("max rel err {worst:.3e} (tol 1e-12)")))
        }),
        check(s, "column_fundamental_from_identity", || {
            let mut worst: f64 = 0.0;
            for p in [4.0 / 3.0, 2.0, 3.0, 4.0] {
                let phi_c = SpaceDescriptor::column_p(p)?.phi_c().clone();
                for n in [1usize, 5, 32, 100] {
                    let sq = schatten_p_norm(&ComplexMatrix::identity(n), 2.0 * conjugate(p))?.powi(2);
                    worst = worst.max(rel(sq, phi_c.value(n as f64)));
                }
            }
            Ok((worst < 1e-9, format!("max rel err {worst:.3e} (tol 1e-9)")))
        }),
        check(s, "unitary_invariance", || {
            let phi = oh_orlicz()?;
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let x = random_complex(&mut rng, 8)?;
                let u = ComplexMatrix::from_nalgebra(&random_complex(&mut rng, 8)?.to_nalgebra().qr().q());
                let v = ComplexMatrix::from_nalgebra(&random_complex(&mut rng, 8)?.to_nalgebra().qr().q());
                let moved = u.mul(&x)?.mul(&v)?;
                worst = worst.max(rel(schatten_orlicz_norm(&moved, &phi), schatten_orlicz_norm(&x, &phi)));
            }
            Ok((worst < 1e-8, format!("max rel change {worst:.3e} (tol 1e-8)")))
        }),
        check(s, "pi1_of_identity", || {
            let oh = SpaceDescriptor::oh();
            let mut worst: f64 = 0.0;
            for n in [1usize, 16, 256] {
                let a = pi1_of_map(&oh, &oh, &ComplexMatrix::identity(n))?;
                worst = worst.max(rel(a, pi1_fundamental(&oh, &oh, n as f64)?.pi1));
            }
            Ok((worst < 1e-3, format!("max rel gap to the fundamental sequence {worst:.3e} (tol 1e-3)")))
        }),
    ]
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    suite
        .members()
        .into_iter()
        .flat_map(|s| {
            log::info!("running {} checks", s.name());
            match s {
                Suite::Growth => growth_checks(),
                Suite::Orlicz => orlicz_checks(),
                Suite::Oracle => oracle_checks(),
                Suite::Spaces => spaces_checks(),
                Suite::Schatten => schatten_checks(),
                Suite::All => unreachable!("expanded by members"),
            }
        })
        .collect()
}

/// Prints one line per check and a summary; `Verify` error if any check fails.
pub fn write_verify(out: &mut dyn Write, suite: Suite) -> CliResult<()> {
    let checks = run_suite(suite);
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    writeln!(out, "{} checks, {failed} failed", checks.len())?;
    if failed > 0 {
        return Err(CliError::Verify(failed, checks.len()));
    }
    Ok(())
}
