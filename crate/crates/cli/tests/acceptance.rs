//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are always printed; exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;
use superspace_cli::suites::{self, Check};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, what: &str, passed: bool, info: String) {
        if !passed {
            self.failed += 1;
        }
        println!("criterion {id:>2} {} {what}: {info}", if passed { "PASS" } else { "FAIL" });
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn field(c: &Check, key: &str) -> String {
    c.detail.get(key).map(Value::to_string).unwrap_or_else(|| "-".into())
}

fn main() {
    let mut r = Report { failed: 0 };

    let (checks, t) = timed(|| [(3, 1), (5, 2)].map(|(m, n)| suites::sl2(m, n, 100, 6, 1).unwrap()));
    r.line(
        1,
        "sl2 commutator, 100 samples, degree <= 6, (3,1) and (5,2)",
        all_pass(&checks) && t < Duration::from_secs(10),
        format!(
            "[nabla^2/2, R^2/2] = E + M/2 held {}/100 and {}/100 in {:.2?}; the form 2E + M matched {} and {}",
            field(&checks[0], "holds"),
            field(&checks[1], "holds"),
            t,
            field(&checks[0], "matching_2E_plus_M"),
            field(&checks[1], "matching_2E_plus_M"),
        ),
    );

    let checks = [(3, 1), (4, 1), (5, 2), (7, 3)].map(|(m, n)| suites::laplacian_r2(m, n).unwrap());
    let values: Vec<String> = checks.iter().map(|c| field(c, "value")).collect();
    r.line(2, "nabla^2(R^2) = 2M", all_pass(&checks), format!("values {}", values.join(", ")));

    let (c, t) = timed(|| suites::continuation(3, 1, 8).unwrap());
    r.line(
        3,
        "dimensional continuation, degree <= 8 at (3,1)",
        c.passed && t < Duration::from_secs(30),
        format!("{} monomials in {:.2?}", field(&c, "monomials"), t),
    );

    let c = suites::gram(3, 1, 4, 3).unwrap();
    r.line(
        4,
        "Hermite Gram matrix, j <= 4, k <= 3 at (3,1)",
        c.passed,
        format!(
            "off-diagonal nonzero {}, diagonal mismatches {}, normalized deviation {}",
            field(&c, "offdiag_nonzero"),
            field(&c, "diag_mismatch"),
            field(&c, "max_normalized_dev")
        ),
    );

    let checks = [(3, 1), (5, 2)].map(|(m, n)| suites::alpha(m, n, 10, 6, 20).unwrap());
    r.line(
        5,
        "alpha recursion vs exact oracle, closed form for i <= 20",
        all_pass(&checks),
        format!(
            "max deviation {} over {} entries at (3,1), {} over {} at (5,2)",
            field(&checks[0], "max_deviation"),
            field(&checks[0], "entries"),
            field(&checks[1], "max_deviation"),
            field(&checks[1], "entries"),
        ),
    );

    let c = suites::bound(3, 1, 30, 30, 15).unwrap();
    r.line(6, "bound maximum attained at j <= 15", c.passed, format!("argmax (j,k,p,q,s) {}", field(&c, "argmax_jkpqs")));

    let c = suites::fourier(3, 1, 20, 20, 1).unwrap();
    r.line(
        7,
        "Fourier inverse, period four, spectral phases for (j,k) <= 20",
        c.passed,
        format!("exact {}, spectral deviation {}", field(&c, "exact_inverse_and_period"), field(&c, "spectral_form_max_dev")),
    );

    let c = suites::parseval(3, 1, 50, 1).unwrap();
    r.line(8, "Parseval on 50 random expansions", c.passed, format!("max residual {}", field(&c, "max_residual")));

    let c = suites::casimir(3, 1, 5, 5).unwrap();
    r.line(
        9,
        "Casimir eigenvalue, j,k <= 5",
        c.passed,
        format!("band exact {}, cross-check {}", field(&c, "band_exact"), field(&c, "laplace_beltrami_form")),
    );

    let (c, t) = timed(|| suites::spectrum(&[1, 3], 2, 4, 2000, 12.0).unwrap());
    r.line(
        10,
        "oscillator spectra, M in {1,3}, j <= 3, k <= 2, N = 2000",
        c.passed && t < Duration::from_secs(60),
        format!("max error {}, min observed order {} in {:.2?}", field(&c, "max_error"), field(&c, "min_observed_order"), t),
    );

    let c = suites::heisenberg(3, 1, 50, 1).unwrap();
    r.line(
        11,
        "Heisenberg inequality, Gaussian saturation",
        c.passed,
        format!("min margin {}, gaussian {}", field(&c, "min_margin"), field(&c, "gaussian")),
    );

    let c = suites::divergence(3, 1, 10_000).unwrap();
    r.line(
        12,
        "partial norms above 2 H_r and increasing, r <= 10^4",
        c.passed,
        format!("last {} vs bound {}", field(&c, "last"), field(&c, "bound_last")),
    );

    let checks = [(3, 1), (5, 2)].map(|(m, n)| suites::dims(m, n, 6).unwrap());
    r.line(13, "dim H_k formula vs kernel rank, k <= 6", all_pass(&checks), "(3,1) and (5,2)".into());

    let c = suites::norms(3, 1, 4, 8).unwrap();
    r.line(14, "Schwartz norms of basis functions", c.passed, format!("max relative deviation {}", field(&c, "max_rel_dev")));

    let (out, t) = timed(|| {
        Command::new(env!("CARGO_BIN_EXE_superspace"))
            .args(["verify", "--suite", "all", "--m", "3", "--n", "1"])
            .output()
            .expect("spawn superspace")
    });
    r.line(
        15,
        "verify --suite all --m 3 --n 1",
        out.status.code() == Some(0) && t < Duration::from_secs(300),
        format!("exit {:?} in {:.2?}", out.status.code(), t),
    );

    println!("acceptance: {} of 15 criteria failed", r.failed);
    if r.failed > 0 {
        std::process::exit(1);
    }
}
