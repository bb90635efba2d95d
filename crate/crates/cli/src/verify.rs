//! The `verify` command: invariant batteries at small scale with a
//! machine-readable summary.
//!
//! Every check compares a nonnegative deviation with a positive tolerance.
//! `VerifyOptions::tolerance_scale` multiplies all tolerances; a negative scale
//! makes every check fail, which is how the harness itself is tested.

use hiding::darwinism::{diamond_bound_rhs, omega_new, omega_ranard, DarwinismParams};
use hiding::linalg::{hermitian_sign, max_abs_entry, partial_trace};
use hiding::seesaw::{initial_contraction, seesaw_from, Start};
use hiding::states::{gue_hermitian, haar_unitary, random_gue_operator, werner_hiding_pair};
use hiding::{
    complex_vs_hermitian_check, epsilon_norm, local_hiding_bound, seesaw_run, BipartiteOperator, ComplexMatrix, Field,
    RngSeed, SeeSawConfig, Subsystem, C64,
};
use serde::Serialize;

use crate::commands::{game_with_escalation, random_game, ratio_with_escalation, Generator};
use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub tolerance_scale: f64,
    pub seesaw: SeeSawConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tolerance_scale: 1.0, seesaw: SeeSawConfig::default().with_restarts(50) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub worst_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

struct Suite {
    name: &'static str,
    tolerance: f64,
    checks: usize,
    failures: usize,
    worst: f64,
}

impl Suite {
    fn new(name: &'static str, tolerance: f64, scale: f64) -> Self {
        Suite { name, tolerance: tolerance * scale, checks: 0, failures: 0, worst: 0.0 }
    }

    fn check(&mut self, deviation: f64) {
        let deviation = deviation.max(0.0);
        self.checks += 1;
        if deviation.is_nan() || deviation > self.tolerance {
            self.failures += 1;
        }
        self.worst = self.worst.max(deviation);
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            worst_deviation: self.worst,
            tolerance: self.tolerance,
            passed: self.failures == 0 && self.checks > 0,
        }
    }
}

fn max_prefix_diff(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let mut worst = (a[a.len() - 1] - b[b.len() - 1]).abs();
    for k in 0..n {
        worst = worst.max((a[k] - b[k]).abs());
    }
    worst
}

pub fn run_verify(seed: RngSeed, opts: &VerifyOptions) -> Result<VerifySummary> {
    let s = opts.tolerance_scale;
    let cfg = opts.seesaw.with_seed(seed);
    let mut rng = seed.derive(&[100]).rng();
    let mut suites = Vec::new();

    let mut suite = Suite::new("trace_norm_eigenvalues", 1e-10, s);
    for k in 0..50 {
        let m = gue_hermitian(1 + k % 16, &mut rng)?;
        let by_eigen: f64 = m.eigen().values.iter().map(|l| l.abs()).sum();
        let by_svd = hiding::linalg::trace_norm(m.as_matrix())?;
        suite.check((by_eigen - by_svd).abs() / by_eigen.max(1.0));
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("sign_involution", 1e-10, s);
    for k in 0..30 {
        let n = 1 + k % 8;
        let f = hermitian_sign(&gue_hermitian(n, &mut rng)?).into_inner();
        suite.check(max_abs_entry(&(&f * &f - ComplexMatrix::identity(n, n))));
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("partial_trace_preserves_trace", 1e-12, s);
    for n_a in 2..=4 {
        for n_b in 2..=4 {
            for _ in 0..10 {
                let z = BipartiteOperator::hermitian(n_a, n_b, gue_hermitian(n_a * n_b, &mut rng)?)?;
                let t = z.trace();
                suite.check((partial_trace(&z, Subsystem::A).trace() - t).norm());
                suite.check((partial_trace(&z, Subsystem::B).trace() - t).norm());
            }
        }
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("unitary_block_identities", 1e-10, s);
    for (n_a, n_b) in [(2, 2), (2, 3), (3, 3)] {
        for _ in 0..20 {
            let u = haar_unitary(n_a * n_b, &mut rng)?;
            let mut left = ComplexMatrix::zeros(n_b, n_b);
            let mut right = ComplexMatrix::zeros(n_b, n_b);
            for i in 0..n_a {
                for j in 0..n_a {
                    let b = u.view((i * n_b, j * n_b), (n_b, n_b)).into_owned();
                    left += &b * b.adjoint();
                    right += b.adjoint() * &b;
                }
            }
            let target = ComplexMatrix::identity(n_b, n_b).scale(n_a as f64);
            suite.check(max_abs_entry(&(left - &target)));
            suite.check(max_abs_entry(&(right - &target)));
        }
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("matrix_unit_identity", 1e-15, s);
    for n in 2..=4 {
        let mut sum = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut e = ComplexMatrix::zeros(n, n);
                e[(i, j)] = C64::new(1.0, 0.0);
                sum += e.adjoint() * &e;
            }
        }
        suite.check(max_abs_entry(&(sum - ComplexMatrix::identity(n, n).scale(n as f64))));
    }
    suites.push(suite.finish());

    let mut mono = Suite::new("seesaw_monotonicity", 1e-12, s);
    let mut order = Suite::new("epsilon_below_trace_norm", 1e-9, s);
    for k in 0..40u64 {
        let (n_a, n_b) = (1 + (k % 4) as usize, 1 + (k / 4 % 4) as usize);
        let z = random_gue_operator(n_a, n_b, &mut rng)?;
        let run_cfg = cfg.with_seed(seed.derive(&[200, k])).with_restarts(4);
        for r in 0..4 {
            let run = seesaw_run(&z, &initial_contraction(n_b, r, &run_cfg)?, &run_cfg)?;
            let drop = run.history.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
            mono.check(drop);
        }
        let est = epsilon_norm(&z, &run_cfg)?;
        order.check(est.value - z.trace_norm());
    }
    suites.push(mono.finish());
    suites.push(order.finish());

    let mut suite = Suite::new("homogeneity", 1e-9, s);
    for k in 0..5u64 {
        let z = random_gue_operator(2, 3, &mut rng)?;
        let run_cfg = cfg.with_seed(seed.derive(&[300, k])).with_restarts(8);
        let base = epsilon_norm(&z, &run_cfg)?.value;
        for alpha in [-2.0, 0.5, 3.0] {
            let scaled = epsilon_norm(&z.scaled(alpha), &run_cfg)?.value;
            suite.check((scaled - alpha.abs() * base).abs() / base.max(1e-300));
        }
    }
    suites.push(suite.finish());

    let mut swap = Suite::new("swap_covariance", 1e-9, s);
    let mut local = Suite::new("local_unitary_covariance", 1e-9, s);
    for k in 0..20u64 {
        let (n_a, n_b) = (2 + (k % 3) as usize, 2 + (k / 3 % 3) as usize);
        let z = random_gue_operator(n_a, n_b, &mut rng)?;
        let run_cfg = cfg.with_seed(seed.derive(&[400, k]));
        let g0 = initial_contraction(n_b, 1, &run_cfg)?;
        let direct = seesaw_run(&z, &g0, &run_cfg)?;
        let swapped = seesaw_from(&z.swapped(), Start::OnA(g0.clone()), &run_cfg)?;
        swap.check(max_prefix_diff(&direct.history, &swapped.history));
        let u = haar_unitary(n_a, &mut rng)?;
        let v = haar_unitary(n_b, &mut rng)?;
        let rotated = z.conjugated_by_local(&u, &v)?;
        let moved = seesaw_run(&rotated, &(&v * &g0 * v.adjoint()), &run_cfg)?;
        local.check(max_prefix_diff(&direct.history, &moved.history));
    }
    suites.push(swap.finish());
    suites.push(local.finish());

    let mut suite = Suite::new("main_bound_scan", 1e-6, s);
    for generator in [Generator::Gue, Generator::Induced] {
        for n_a in 2..=3 {
            for n_b in 2..=3 {
                for k in 0..10u64 {
                    let inst = seed.derive(&[500, n_a as u64, n_b as u64, k]);
                    let z = generator.generate(n_a, n_b, inst)?;
                    let r = ratio_with_escalation(&z, &cfg.with_seed(inst))?;
                    suite.check(r.ratio - r.bound);
                }
            }
        }
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("xor_game_scan", 1e-6, s);
    for k in 0..10u64 {
        let inst = seed.derive(&[600, k]);
        let game = random_game(4, 3, 3, inst)?;
        let r = game_with_escalation(&game, &cfg.with_seed(inst))?;
        suite.check(r.ratio.unwrap_or(0.0) - r.bound);
        suite.check(r.beta_product.value - r.beta_all - 1e-9);
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("complex_vs_hermitian", 0.02, s);
    for k in 0..10u64 {
        let z = random_gue_operator(3, 3, &mut rng)?;
        let c = complex_vs_hermitian_check(&z, &cfg.with_seed(seed.derive(&[700, k])))?;
        suite.check(c.ratio - std::f64::consts::SQRT_2);
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("werner_growth", 1e-9, s);
    let mut previous = 0.0;
    for d in 2..=5 {
        let z = werner_hiding_pair(d)?.discrimination_operator();
        let r = ratio_with_escalation(&z, &cfg)?;
        // strict growth: a tie counts as a failure
        suite.check(if r.ratio > previous { 0.0 } else { f64::INFINITY });
        suite.check(r.ratio - local_hiding_bound(d, d));
        previous = r.ratio;
    }
    suites.push(suite.finish());

    let mut suite = Suite::new("darwinism_coefficients", 1e-12, s);
    suite.check((omega_new(2, 5)? - 4.0).abs());
    suite.check((omega_new(3, 1_000_000)? - 6.0 * std::f64::consts::SQRT_2).abs());
    for d_a in (3..=100).step_by(7) {
        for d_r in (1..=1000).step_by(37) {
            suite.check(omega_new(d_a, d_r)? - omega_ranard(d_a, d_r)?);
        }
    }
    let p = DarwinismParams { d_a: 2, d_r: 2, r_size: 1, q_size: 100 };
    suite.check((diamond_bound_rhs(&p)? - 6.0 * (2.0 * 2f64.ln() / 100.0).sqrt()).abs());
    suites.push(suite.finish());

    // the complex field must never fall below the Hermitian one by more than noise
    let mut suite = Suite::new("field_ordering", 1e-9, s);
    for k in 0..5u64 {
        let z = random_gue_operator(2, 2, &mut rng)?;
        let run_cfg = cfg.with_seed(seed.derive(&[800, k]));
        let h = epsilon_norm(&z, &run_cfg.with_field(Field::Hermitian))?.value;
        let c = epsilon_norm(&z, &run_cfg.with_field(Field::Complex))?.value;
        suite.check(h - c);
    }
    suites.push(suite.finish());

    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifySummary { seed: seed.0, passed, suites })
}
