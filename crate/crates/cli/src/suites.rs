//! Invariant suites. Each check returns a named pass/fail record with
//! machine-readable details; nothing here depends on wall-clock time.

use num::complex::Complex;
use num::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use superspace::basischange::{alpha_oracle, alpha_squared_s0, bound_report, AlphaTable, Dims};
use superspace::harmonics::{dim_super_harmonics, laplacian_kernel_dim, monomials_of_degree, t_map};
use superspace::hermite::{
    collinear_ratio, hermite, ladder_apply, oscillator_energy, raise_factor2, real_part, weighted_laplacian, Family,
    HermiteLabel, Ladder, Weight,
};
use superspace::integrate::{gaussian_integral, gaussian_pairing, pizzetti};
use superspace::scalar::{gamma_half, int, rat, HalfInt, PiScaled, Rational};
use superspace::schrodinger::{lift_spectrum, radial_solve, self_adjointness_check, Potential, RadialProblem};
use superspace::spectral::{
    casimir_eigenvalue, divergence_demo, exact_casimir_column, exact_column, exact_commutator_column,
    fourier_phase_spectral, heisenberg_check, i_pow, parseval_check, radial_basis, radial_coefficients,
    schwartz_norm, CoeffOp, ExactColumn, NormVariant,
};
use superspace::superpoly::OperatorKind;
use superspace::{ExactPoly, Expansion64, Result};

use crate::random;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: &str, passed: bool, detail: Value) -> Self {
        Check { name: name.to_string(), passed, detail }
    }
}

pub const SUITES: &[&str] = &[
    "sl2",
    "laplacian",
    "continuation",
    "gram",
    "ladder",
    "alpha",
    "bound",
    "fourier",
    "parseval",
    "symmetry",
    "casimir",
    "spectrum",
    "lift",
    "self-adjoint",
    "heisenberg",
    "divergence",
    "dims",
    "norms",
    "transport",
];

fn pi_eq(a: &PiScaled, b: &PiScaled) -> bool {
    a.sub(b).map(|d| d.is_zero()).unwrap_or(false)
}

fn big_m(m: usize, n: usize) -> i64 {
    m as i64 - 2 * n as i64
}

/// `[nabla^2/2, R^2/2] f = (E + M/2) f` exactly on seeded random
/// superpolynomials; also records whether `(2E + M) f` would match.
pub fn sl2(m: usize, n: usize, samples: usize, max_deg: u32, seed: u64) -> Result<Check> {
    let mut r = random::rng(seed);
    let bm = big_m(m, n);
    let half = rat(1, 2);
    let (mut ok, mut literal) = (0, 0);
    for _ in 0..samples {
        let f = random::superpoly(&mut r, m, n, max_deg, 6)?;
        let a = f.apply(OperatorKind::R2Mul)?.scale_rational(&half).apply(OperatorKind::Laplacian)?.scale_rational(&half);
        let b = f.apply(OperatorKind::Laplacian)?.scale_rational(&half).apply(OperatorKind::R2Mul)?.scale_rational(&half);
        let lhs = a.sub(&b)?;
        let ef = f.apply(OperatorKind::Euler)?;
        let rhs = ef.add(&f.scale_rational(&rat(bm, 2)))?;
        if lhs == rhs {
            ok += 1;
        }
        if lhs == ef.scale_rational(&int(2)).add(&f.scale_rational(&int(bm)))? {
            literal += 1;
        }
    }
    Ok(Check::new(
        "sl2",
        ok == samples,
        json!({"m": m, "n": n, "samples": samples, "max_degree": max_deg, "seed": seed,
               "identity": "[nabla^2/2, R^2/2] = E + M/2",
               "holds": ok, "matching_2E_plus_M": literal}),
    ))
}

/// `nabla^2 R^2 = 2M`.
pub fn laplacian_r2(m: usize, n: usize) -> Result<Check> {
    let r2 = ExactPoly::big_r2(m, n)?;
    let l = r2.apply(OperatorKind::Laplacian)?;
    let want = ExactPoly::one(m, n)?.scale_rational(&int(2 * big_m(m, n)));
    Ok(Check::new("laplacian", l == want, json!({"m": m, "n": n, "value": format!("{}", l.constant_term().re)})))
}

/// `int P_k exp(-R^2) = Gamma((k+M)/2)/2 * int_SS P_k` for every monomial of
/// degree `<= max_deg`.
pub fn continuation(m: usize, n: usize, max_deg: usize) -> Result<Check> {
    let bm = big_m(m, n);
    let mut count = 0usize;
    let mut failures = Vec::new();
    for k in 0..=max_deg {
        let monos = monomials_of_degree(m, n, k);
        let g = if k as i64 + bm > 0 {
            Some(gamma_half(HalfInt::from_twice(k as i64 + bm))?.scale_rational(&rat(1, 2)))
        } else {
            None
        };
        let results: Vec<Result<Option<String>>> = monos
            .par_iter()
            .map(|mono| {
                let p = ExactPoly::from_terms(m, n, [(*mono, Complex::new(Rational::one(), Rational::zero()))])?;
                let lhs = gaussian_integral(&p);
                let rhs = match &g {
                    Some(g) => g.mul(&pizzetti(&p)?),
                    None => PiScaled::zero(),
                };
                Ok((!pi_eq(&lhs, &rhs)).then(|| format!("{mono:?}: {lhs} vs {rhs}")))
            })
            .collect();
        for r in results {
            if let Some(f) = r? {
                failures.push(f);
            }
            count += 1;
        }
    }
    Ok(Check::new(
        "continuation",
        failures.is_empty(),
        json!({"m": m, "n": n, "max_degree": max_deg, "monomials": count, "failures": failures}),
    ))
}

/// Exact `<.|.>_2` Gram matrix of super Hermite functions.
pub fn gram(m: usize, n: usize, jmax: usize, kmax: usize) -> Result<Check> {
    let report = gram_report(m, n, jmax, kmax)?;
    let passed = report.offdiag_nonzero == 0 && report.diag_mismatch == 0 && report.max_normalized_dev < 1e-12;
    Ok(Check::new("gram", passed, serde_json::to_value(&report).expect("plain data")))
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub m: usize,
    pub n: usize,
    pub jmax: usize,
    pub kmax: usize,
    pub functions: Vec<GramEntry>,
    pub offdiag_nonzero: usize,
    pub diag_mismatch: usize,
    pub max_normalized_dev: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramEntry {
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub norm2: String,
    pub norm2_f64: f64,
}

pub fn gram_report(m: usize, n: usize, jmax: usize, kmax: usize) -> Result<GramReport> {
    Dims::new(m, n)?;
    let mut fs = Vec::new();
    for k in 0..=kmax {
        for j in 0..=jmax {
            for l in 1..=dim_super_harmonics(m, n, k) as usize {
                fs.push(hermite(HermiteLabel::new(Family::Super { m, n }, j, k, l))?);
            }
        }
    }
    let tq: Vec<ExactPoly> = fs.par_iter().map(|f| t_map(&f.poly.conj())).collect::<Result<_>>()?;
    let rows: Vec<(usize, bool, f64)> = (0..fs.len())
        .into_par_iter()
        .map(|a| -> Result<(usize, bool, f64)> {
            let mut off = 0;
            let mut diag_ok = false;
            let mut dev = 0.0;
            for (b, q) in tq.iter().enumerate() {
                let v = gaussian_pairing(&fs[a].poly, q)?;
                if a == b {
                    diag_ok = pi_eq(&v, &fs[a].norm2);
                    dev = (v.to_f64() / fs[a].norm2.to_f64() - 1.0).abs();
                } else if !v.is_zero() {
                    off += 1;
                }
            }
            Ok((off, diag_ok, dev))
        })
        .collect::<Result<_>>()?;
    Ok(GramReport {
        m,
        n,
        jmax,
        kmax,
        functions: fs
            .iter()
            .map(|f| GramEntry {
                j: f.label.j,
                k: f.label.k,
                l: f.label.l,
                norm2: f.norm2.to_string(),
                norm2_f64: f.norm2.to_f64(),
            })
            .collect(),
        offdiag_nonzero: rows.iter().map(|r| r.0).sum(),
        diag_mismatch: rows.iter().filter(|r| !r.1).count(),
        max_normalized_dev: rows.iter().map(|r| r.2).fold(0.0, f64::max),
    })
}

/// Raising, lowering and Hamiltonian relations on the weighted polynomials.
pub fn ladder(m: usize, n: usize, jmax: usize, kmax: usize) -> Result<Check> {
    let bm = big_m(m, n);
    let mut failures = Vec::new();
    for k in 0..=kmax {
        if dim_super_harmonics(m, n, k) == 0 {
            continue;
        }
        for j in 0..=jmax {
            let fam = Family::Super { m, n };
            let h = hermite(HermiteLabel::new(fam, j, k, 1))?;
            let hn = hermite(HermiteLabel::new(fam, j + 1, k, 1))?;
            let ham = ladder_apply(Ladder::Hamiltonian, Weight::Full, &h.poly)?;
            let energy_ok = ham == h.poly.scale_rational(&oscillator_energy(bm, j, k));
            let up = ladder_apply(Ladder::Raise, Weight::Full, &h.poly)?;
            let raise_ok = match collinear_ratio(&up, &hn.poly).as_ref().and_then(real_part) {
                Some(c) => {
                    let ratio = hn.norm2.div(&h.norm2)?;
                    pi_eq(&ratio.scale_rational(&(&c * &c)), &PiScaled::from_rational(raise_factor2(bm, j, k)))
                }
                None => false,
            };
            let low_ok = j > 0 || ladder_apply(Ladder::Lower, Weight::Full, &h.poly)?.is_zero();
            if !(energy_ok && raise_ok && low_ok) {
                failures.push(json!({"j": j, "k": k, "energy": energy_ok, "raise": raise_ok, "lower": low_ok}));
            }
        }
    }
    Ok(Check::new("ladder", failures.is_empty(), json!({"m": m, "n": n, "jmax": jmax, "kmax": kmax, "failures": failures})))
}

/// Recursion against the exact oracle, plus the closed form of
/// `|alpha_{i,0,0,0,0}|^2`.
pub fn alpha(m: usize, n: usize, jmax: usize, pmax: usize, imax: usize) -> Result<Check> {
    let d = Dims::new(m, n)?;
    let table = AlphaTable::build(d, jmax, pmax)?;
    let devs: Vec<f64> = table
        .entries
        .par_iter()
        .map(|e| alpha_oracle(d, e.j, e.k, e.p, e.q, e.s, 1).map(|o| (o.alpha - e.alpha).abs()))
        .collect::<Result<_>>()?;
    let worst = devs.iter().copied().fold(0.0, f64::max);
    let mut closed_bad = Vec::new();
    for i in 0..=imax {
        // Gamma(i+m/2) Gamma(M/2) / (Gamma(i+M/2) Gamma(m/2))
        let want = gamma_half(HalfInt::from_twice((2 * i + m) as i64))?
            .mul(&gamma_half(HalfInt::from_twice(d.big_m()))?)
            .div(&gamma_half(HalfInt::from_twice(2 * i as i64 + d.big_m()))?.mul(&gamma_half(HalfInt::from_twice(m as i64))?))?;
        let closed = PiScaled::from_rational(alpha_squared_s0(d, i, 0, 0, 0)?);
        let oracle = PiScaled::from_rational(alpha_oracle(d, i, 0, 0, 0, 0, 1)?.alpha2);
        if !pi_eq(&want, &closed) || !pi_eq(&want, &oracle) {
            closed_bad.push(i);
        }
    }
    Ok(Check::new(
        "alpha",
        worst < 1e-9 && closed_bad.is_empty(),
        json!({"m": m, "n": n, "jmax": jmax, "pmax": pmax, "entries": devs.len(),
               "max_deviation": worst, "closed_form_imax": imax, "closed_form_failures": closed_bad}),
    ))
}

/// The maximum of `|alpha| / sqrt((2j+2k+p+q+1)^{n+2})` is attained at small `j`.
pub fn bound(m: usize, n: usize, jmax: usize, pmax: usize, jlimit: usize) -> Result<Check> {
    let r = bound_report(Dims::new(m, n)?, jmax, pmax)?;
    Ok(Check::new(
        "bound",
        r.argmax_total.0 <= jlimit,
        json!({"m": m, "n": n, "jmax": jmax, "pmax": pmax, "max_ratio": r.max_ratio_total,
               "argmax_jkpqs": r.argmax_total, "required_j_at_most": jlimit,
               "max_ratio_jp": r.max_ratio_jp, "argmax_jp": r.argmax_jp}),
    ))
}

/// `F^- F^+ = id`, `F^4 = id` exactly, and the spectral form of the phases.
pub fn fourier(m: usize, n: usize, nmax: usize, samples: usize, seed: u64) -> Result<Check> {
    let bm = big_m(m, n);
    let mut r = random::rng(seed);
    let mut exact_ok = true;
    for _ in 0..samples {
        let f = random::expansion(&mut r, m, n, 12, 8, 5)?;
        let inv = f.apply(CoeffOp::FourierPlus).apply(CoeffOp::FourierMinus);
        let mut four = f.clone();
        for _ in 0..4 {
            four = four.apply(CoeffOp::FourierPlus);
        }
        exact_ok &= inv == f && four == f;
    }
    let mut worst: f64 = 0.0;
    for j in 0..=nmax {
        for k in 0..=nmax {
            for plus in [true, false] {
                let e = (2 * j + k) as i64;
                let want = i_pow::<f64>(if plus { e } else { -e });
                worst = worst.max((fourier_phase_spectral(plus, bm, j, k) - want).norm());
            }
        }
    }
    Ok(Check::new(
        "fourier",
        exact_ok && worst < 1e-12,
        json!({"m": m, "n": n, "samples": samples, "seed": seed, "exact_inverse_and_period": exact_ok,
               "spectral_form_max_dev": worst, "jk_max": nmax}),
    ))
}

pub fn parseval(m: usize, n: usize, samples: usize, seed: u64) -> Result<Check> {
    let mut r = random::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let f = random::expansion(&mut r, m, n, 10, 8, 5)?;
        let g = random::expansion(&mut r, m, n, 10, 8, 5)?;
        worst = worst.max(parseval_check(&f, &g)?);
    }
    Ok(Check::new("parseval", worst < 1e-12, json!({"m": m, "n": n, "samples": samples, "seed": seed, "max_residual": worst})))
}

/// Symmetry of `R^2`, `nabla^2`, skew-symmetry of `E + M/2` and the exact
/// coefficient-space commutator.
pub fn symmetry(m: usize, n: usize, samples: usize, seed: u64, jmax: usize) -> Result<Check> {
    let bm = big_m(m, n);
    let mut r = random::rng(seed);
    let mut worst: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for _ in 0..samples {
        let f = random::expansion(&mut r, m, n, 8, 6, 4)?;
        let g = random::expansion(&mut r, m, n, 8, 6, 4)?;
        for (op, sign) in [(CoeffOp::R2, 1.0), (CoeffOp::Nabla2, 1.0), (CoeffOp::EulerPlusM2, -1.0)] {
            let a = f.apply(op).inner2(&g)?;
            let b = f.inner2(&g.apply(op))?;
            worst = worst.max((a - b * sign).norm());
        }
        let c = f
            .apply(CoeffOp::R2)
            .apply(CoeffOp::Nabla2)
            .sub(&f.apply(CoeffOp::Nabla2).apply(CoeffOp::R2))?
            .scale(Complex::new(0.25, 0.0));
        comm = comm.max(c.sub(&f.apply(CoeffOp::EulerPlusM2))?.norm2().sqrt());
    }
    let mut exact_ok = true;
    for k in 0..=jmax {
        for j in 0..=jmax {
            exact_ok &= exact_commutator_column(bm, j, k) == exact_column(CoeffOp::EulerPlusM2, bm, j, k).expect("band");
        }
    }
    Ok(Check::new(
        "symmetry",
        worst < 1e-12 && comm < 1e-12 && exact_ok,
        json!({"m": m, "n": n, "samples": samples, "seed": seed, "max_symmetry_defect": worst,
               "commutator_float_dev": comm, "commutator_exact": exact_ok, "truncation": jmax}),
    ))
}

fn weighted_euler_shift(p: &ExactPoly) -> Result<ExactPoly> {
    // (E + M/2)(P e) = (E P - R^2 P + M/2 P) e
    let bm = p.superdim();
    p.apply(OperatorKind::Euler)?.sub(&p.apply(OperatorKind::R2Mul)?)?.add(&p.scale_rational(&rat(bm, 2)))
}

/// Casimir eigenvalue in the exact band layer for `j, k <= jk`, and on the
/// weighted polynomials for `j, k <= poly_jk`.
pub fn casimir(m: usize, n: usize, jk: usize, poly_jk: usize) -> Result<Check> {
    let bm = big_m(m, n);
    let mut band_ok = true;
    let mut cross_ok = true;
    for k in 0..=jk {
        let lam = casimir_eigenvalue(bm, k);
        let alt = rat(bm, 2) * (rat(bm, 2) - int(2)) + int(k as i64 * (k as i64 + bm - 2));
        cross_ok &= lam == alt;
        for j in 0..=jk {
            let col = exact_casimir_column(bm, j, k);
            let want: ExactColumn = if lam.is_zero() { ExactColumn::new() } else { ExactColumn::from([(0, lam.clone())]) };
            band_ok &= col == want;
        }
    }
    let mut poly_fail = Vec::new();
    for k in 0..=poly_jk {
        if dim_super_harmonics(m, n, k) == 0 {
            continue;
        }
        for j in 0..=poly_jk {
            let p = hermite(HermiteLabel::new(Family::Super { m, n }, j, k, 1))?.poly;
            let e2 = weighted_euler_shift(&weighted_euler_shift(&p)?)?;
            let a = weighted_laplacian(Weight::Full, &p)?.apply(OperatorKind::R2Mul)?;
            let b = weighted_laplacian(Weight::Full, &p.apply(OperatorKind::R2Mul)?)?;
            let c = e2.sub(&a.add(&b)?.scale_rational(&rat(1, 2)))?;
            if c != p.scale_rational(&casimir_eigenvalue(bm, k)) {
                poly_fail.push((j, k));
            }
        }
    }
    Ok(Check::new(
        "casimir",
        band_ok && cross_ok && poly_fail.is_empty(),
        json!({"m": m, "n": n, "band_jk_max": jk, "band_exact": band_ok, "laplace_beltrami_form": cross_ok,
               "polynomial_jk_max": poly_jk, "polynomial_failures": poly_fail}),
    ))
}

/// Oscillator spectra from the radial solver.
pub fn spectrum(big_ms: &[i64], kmax: usize, count: usize, points: usize, r_max: f64) -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut orders = Vec::new();
    for &bm in big_ms {
        for k in 0..=kmax {
            let p = RadialProblem::new(bm, k, Potential::oscillator(), r_max, points)?;
            let s = radial_solve(&p, count)?;
            for (j, e) in s.eigenvalues.iter().enumerate() {
                worst = worst.max((e - (2 * j + k) as f64 - bm as f64 / 2.0).abs());
            }
            // observed order of the underlying grid under doubling
            let coarse = RadialProblem { extrapolate: false, ..RadialProblem::new(bm, k, Potential::oscillator(), r_max, 250)? };
            let fine = coarse.refined();
            let ec = radial_solve(&coarse, count)?;
            let ef = radial_solve(&fine, count)?;
            for j in 0..count {
                let want = (2 * j + k) as f64 + bm as f64 / 2.0;
                let ratio = (ec.eigenvalues[j] - want).abs() / (ef.eigenvalues[j] - want).abs();
                orders.push(ratio.log2());
            }
        }
    }
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Check::new(
        "spectrum",
        worst < 1e-4 && min_order >= 1.9,
        json!({"M": big_ms, "kmax": kmax, "count": count, "grid": points, "r_max": r_max,
               "max_error": worst, "min_observed_order": min_order}),
    ))
}

/// Lifted oscillator eigenfunctions: overlap with the Hermite basis,
/// multiplicities, and the coefficient-space Hamiltonian.
pub fn lift(m: usize, n: usize, kmax: usize, count: usize) -> Result<Check> {
    let bm = Dims::new(m, n)?.big_m();
    let mut worst_overlap: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    let mut mult_ok = true;
    let mut radial_counts = Vec::new();
    for k in 0..=kmax {
        let p = RadialProblem::new(bm, k, Potential::oscillator(), 12.0, 2000)?;
        let s = radial_solve(&p, count)?;
        let states = lift_spectrum(&s, m, n, 40)?;
        radial_counts.push(states.len());
        for st in &states {
            worst_overlap = worst_overlap.max(1.0 - st.radial_coeffs[st.j].abs());
            mult_ok &= st.multiplicity == dim_super_harmonics(m, n, k);
            let f = st.expansion(m, n, 1)?;
            let h = f.apply(CoeffOp::R2).sub(&f.apply(CoeffOp::Nabla2))?.scale(Complex::new(0.5, 0.0));
            worst_res = worst_res.max(h.sub(&f.scale(Complex::new(st.energy, 0.0)))?.norm2().sqrt());
        }
    }
    // levels below the threshold, counted with multiplicity both ways
    let threshold = bm as f64 / 2.0 + 2.0 * (count - 1) as f64 - 0.5;
    let mut direct = 0u64;
    for k in 0..=kmax {
        for j in 0..count {
            if ((2 * j + k) as f64 + bm as f64 / 2.0) < threshold {
                direct += dim_super_harmonics(m, n, k);
            }
        }
    }
    let mut via_sectors = 0u64;
    for k in 0..=kmax {
        let p = RadialProblem::new(bm, k, Potential::oscillator(), 12.0, 2000)?;
        let below = radial_solve(&p, count)?.eigenvalues.iter().filter(|e| **e < threshold).count();
        via_sectors += dim_super_harmonics(m, n, k) * below as u64;
    }
    Ok(Check::new(
        "lift",
        worst_overlap < 1e-6 && worst_res < 1e-6 && mult_ok && direct == via_sectors,
        json!({"m": m, "n": n, "kmax": kmax, "count": count, "max_overlap_defect": worst_overlap,
               "max_hamiltonian_residual": worst_res, "multiplicities": mult_ok,
               "count_below": {"threshold": threshold, "direct": direct, "by_sector": via_sectors}}),
    ))
}

pub fn self_adjoint() -> Result<Check> {
    let half = |u: f64| u / 2.0;
    let a = self_adjointness_check(half, 5, 1.0, 400);
    let b = self_adjointness_check(half, 1, 1.0, 400);
    let c = self_adjointness_check(|u| 1.0 / u, 1, 0.1, 400);
    Ok(Check::new(
        "self-adjoint",
        a.holds && !b.holds && c.holds,
        json!({"oscillator_M5": a, "oscillator_M1_inconclusive": b, "inverse_u_M1": c}),
    ))
}

pub fn heisenberg(m: usize, n: usize, samples: usize, seed: u64) -> Result<Check> {
    let mut r = random::rng(seed);
    let mut worst: f64 = f64::INFINITY;
    for _ in 0..samples {
        let f = random::expansion(&mut r, m, n, 10, 8, 5)?;
        let h = heisenberg_check(&f)?;
        worst = worst.min(h.lhs - h.rhs);
    }
    let g = heisenberg_check(&Expansion64::basis(m, n, (0, 0, 1))?)?;
    Ok(Check::new(
        "heisenberg",
        worst >= -1e-10 && g.saturated,
        json!({"m": m, "n": n, "samples": samples, "seed": seed, "min_margin": worst, "gaussian": g}),
    ))
}

pub fn divergence(m: usize, n: usize, r_max: usize) -> Result<Check> {
    let d = divergence_demo(m, n, r_max)?;
    let increasing = d.partial.windows(2).all(|w| w[1] > w[0]);
    let above = d.partial.iter().zip(&d.lower_bound).all(|(p, b)| p > b);
    let at = |r: usize| d.partial.get(r - 1).copied();
    Ok(Check::new(
        "divergence",
        increasing && above,
        json!({"m": m, "n": n, "r_max": r_max, "strictly_increasing": increasing, "above_bound": above,
               "first": d.partial.first(), "last": d.partial.last(), "bound_last": d.lower_bound.last(),
               "growth_100_to_1000": if r_max >= 1000 { json!(at(1000).unwrap() - at(100).unwrap()) } else { Value::Null }}),
    ))
}

pub fn dims(m: usize, n: usize, kmax: usize) -> Result<Check> {
    let mut rows = Vec::new();
    let mut ok = true;
    for k in 0..=kmax {
        let f = dim_super_harmonics(m, n, k);
        let o = laplacian_kernel_dim(m, n, k)?;
        ok &= f == o;
        rows.push(json!({"k": k, "formula": f, "kernel_rank": o}));
    }
    Ok(Check::new("dims", ok, json!({"m": m, "n": n, "rows": rows})))
}

pub fn norms(m: usize, n: usize, rmax: u32, jk: usize) -> Result<Check> {
    let mut worst: f64 = 0.0;
    for j in 0..=jk {
        for k in 0..=jk {
            if dim_super_harmonics(m, n, k) == 0 {
                continue;
            }
            let f = Expansion64::basis(m, n, (j, k, 1))?;
            for r in 0..=rmax {
                let want = ((2 * j + k + 1) as f64).powi(r as i32);
                worst = worst.max((schwartz_norm(&f, r, NormVariant::Spherical)? - want).abs() / want);
            }
        }
    }
    Ok(Check::new("norms", worst < 1e-12, json!({"m": m, "n": n, "r_max": rmax, "jk_max": jk, "max_rel_dev": worst})))
}

/// Gram matrices of radial profiles are preserved by the transport to
/// coefficient space.
pub fn transport(m: usize, n: usize, kmax: usize) -> Result<Check> {
    let bm = Dims::new(m, n)?.big_m();
    let profiles: Vec<Box<dyn Fn(f64) -> f64 + Sync>> = vec![
        Box::new(|u: f64| (-0.7 * u * u).exp()),
        Box::new(|u: f64| u * u * (-0.6 * u * u).exp()),
        Box::new(|u: f64| (1.0 + u * u * u * u) * (-0.8 * u * u).exp()),
    ];
    let (u_max, panels, jmax) = (16.0, 16000, 80);
    let mut worst: f64 = 0.0;
    for k in 0..=kmax {
        if dim_super_harmonics(m, n, k) == 0 {
            continue;
        }
        let pw = bm as f64 + 2.0 * k as f64 - 1.0;
        let exps: Vec<Expansion64> = profiles
            .iter()
            .map(|h| {
                let c = radial_coefficients(h, bm, k, jmax, u_max, panels);
                let mut e = Expansion64::new(m, n)?;
                for (j, v) in c.iter().enumerate() {
                    e.set((j, k, 1), Complex::new(*v, 0.0))?;
                }
                Ok(e)
            })
            .collect::<Result<_>>()?;
        for a in 0..profiles.len() {
            for b in 0..profiles.len() {
                let direct = simpson(|u| profiles[a](u) * profiles[b](u) * u.powf(pw), u_max, panels);
                let coeff = exps[a].inner2(&exps[b])?.re;
                worst = worst.max((direct - coeff).abs());
            }
        }
        // the basis itself transports to unit vectors
        let c = radial_coefficients(|u| radial_basis(bm, 2, k, u), bm, k, 4, u_max, panels);
        worst = worst.max((c[2] - 1.0).abs());
    }
    Ok(Check::new("transport", worst < 1e-8, json!({"m": m, "n": n, "kmax": kmax, "max_gram_dev": worst})))
}

fn simpson(f: impl Fn(f64) -> f64, b: f64, panels: usize) -> f64 {
    let h = b / panels as f64;
    let mut s = f(0.0) + f(b);
    for i in 1..panels {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

/// Runs one named suite at `(m, n)` with the default sizes.
/// Shrinks the default `j <= 4, k <= 3` Gram window until it holds at most
/// `budget` functions.
pub fn gram_size(m: usize, n: usize, budget: u64) -> (usize, usize) {
    let count = |jmax: usize, kmax: usize| (0..=kmax).map(|k| dim_super_harmonics(m, n, k)).sum::<u64>() * (jmax as u64 + 1);
    let (mut jmax, mut kmax) = (4, 3);
    while count(jmax, kmax) > budget && jmax + kmax > 0 {
        if jmax > kmax {
            jmax -= 1;
        } else {
            kmax -= 1;
        }
    }
    (jmax, kmax)
}

pub fn run_suite(name: &str, m: usize, n: usize, seed: u64) -> Result<Vec<Check>> {
    let bm = big_m(m, n);
    let needs_positive = !matches!(name, "sl2" | "laplacian" | "continuation" | "dims" | "self-adjoint");
    if needs_positive && bm <= 0 {
        return Err(superspace::Error::NonPositiveSuperDimension { m, n });
    }
    Ok(vec![match name {
        "sl2" => sl2(m, n, 100, 6, seed)?,
        "laplacian" => laplacian_r2(m, n)?,
        "continuation" => continuation(m, n, 8)?,
        "gram" => {
            let (jmax, kmax) = gram_size(m, n, 200);
            gram(m, n, jmax, kmax)?
        }
        "ladder" => ladder(m, n, 3, 2)?,
        "alpha" => alpha(m, n, 10, 6, 20)?,
        "bound" => bound(m, n, 30, 30, 15)?,
        "fourier" => fourier(m, n, 20, 20, seed)?,
        "parseval" => parseval(m, n, 50, seed)?,
        "symmetry" => symmetry(m, n, 20, seed, 8)?,
        "casimir" => casimir(m, n, 5, 3)?,
        "spectrum" => spectrum(&[bm], 2, 4, 2000, 12.0)?,
        "lift" => lift(m, n, 2, 3)?,
        "self-adjoint" => self_adjoint()?,
        "heisenberg" => heisenberg(m, n, 50, seed)?,
        "divergence" => divergence(m, n, 10_000)?,
        "dims" => dims(m, n, 6)?,
        "norms" => norms(m, n, 4, 8)?,
        "transport" => transport(m, n, 2)?,
        other => return Err(superspace::Error::Parse(format!("unknown suite {other}"))),
    }])
}
