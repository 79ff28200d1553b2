//! Radial reduction of `H = -nabla^2/2 + V(R^2)` on superspace, finite
//! difference spectra per harmonic sector and lifting back to expansions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::harmonics::dim_super_harmonics;
use crate::spectral::{radial_basis, HermiteExpansion};
use num::complex::Complex;

/// Radial potential as a function of `u = r^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    PolyInU { coeffs: Vec<f64> },
    /// Piecewise linear in `u`, constant beyond the table ends.
    Table { u: Vec<f64>, v: Vec<f64> },
}

impl Potential {
    pub fn oscillator() -> Self {
        Potential::PolyInU { coeffs: vec![0.0, 0.5] }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Potential = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if let Potential::Table { u, v } = &p {
            if u.len() != v.len() || u.is_empty() || u.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Parse("table needs matching, increasing u samples".into()));
            }
        }
        Ok(p)
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Potential::PolyInU { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c),
            Potential::Table { u: us, v } => {
                if u <= us[0] {
                    return v[0];
                }
                let last = us.len() - 1;
                if u >= us[last] {
                    return v[last];
                }
                let i = us.partition_point(|&x| x <= u) - 1;
                let t = (u - us[i]) / (us[i + 1] - us[i]);
                v[i] + t * (v[i + 1] - v[i])
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialProblem {
    /// `M = m - 2n`.
    pub big_m: i64,
    pub k: usize,
    pub potential: Potential,
    pub r_max: f64,
    pub points: usize,
    /// Combine with the half-step grid: `E = (4 E_{h/2} - E_h) / 3`.
    pub extrapolate: bool,
}

impl RadialProblem {
    pub fn new(big_m: i64, k: usize, potential: Potential, r_max: f64, points: usize) -> Result<Self> {
        if big_m < 1 {
            return Err(Error::NonPositiveArgument(format!("M = {big_m}")));
        }
        if points < 16 || !(r_max > 0.0) {
            return Err(Error::GridTooCoarse(format!("N = {points}, r_max = {r_max}")));
        }
        Ok(RadialProblem { big_m, k, potential, r_max, points, extrapolate: true })
    }

    /// Effective dimension `M + 2k`.
    pub fn dim(&self) -> i64 {
        self.big_m + 2 * self.k as i64
    }

    /// Grid nodes and spacing. In effective dimension 1 the grid is shifted by
    /// half a step so that the even extension gives the reflecting condition.
    pub fn grid(&self) -> (Vec<f64>, f64) {
        let n = self.points;
        if self.dim() == 1 {
            let h = self.r_max / n as f64;
            ((1..=n).map(|i| (i as f64 - 0.5) * h).collect(), h)
        } else {
            let h = self.r_max / (n as f64 + 1.0);
            ((1..=n).map(|i| i as f64 * h).collect(), h)
        }
    }

    /// Symmetric tridiagonal matrix `(diag, off)` of the Liouville form
    /// `-u''/2 + [(d-1)(d-3)/(8 r^2) + V(r^2)] u`.
    pub fn matrix(&self) -> (Vec<f64>, Vec<f64>) {
        let (r, h) = self.grid();
        let d = self.dim() as f64;
        let cent = (d - 1.0) * (d - 3.0) / 8.0;
        let mut diag: Vec<f64> =
            r.iter().map(|&x| 1.0 / (h * h) + cent / (x * x) + self.potential.eval(x * x)).collect();
        if self.dim() == 1 {
            diag[0] -= 0.5 / (h * h);
        }
        let off = vec![-0.5 / (h * h); self.points - 1];
        (diag, off)
    }

    /// Same problem on the grid with half the spacing.
    pub fn refined(&self) -> Self {
        let points = if self.dim() == 1 { 2 * self.points } else { 2 * self.points + 1 };
        RadialProblem { points, extrapolate: false, ..self.clone() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub big_m: i64,
    pub k: usize,
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues of the base grid before extrapolation.
    pub grid_eigenvalues: Vec<f64>,
    pub radii: Vec<f64>,
    /// `profiles[i][node]`: samples of the radial eigenfunction `psi(r)`,
    /// normalized in `L_2(R^+, r^{M+2k-1} dr)` and positive near the origin.
    pub profiles: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub r_max: f64,
    pub points: usize,
    pub step: f64,
    /// Half-step solve used for extrapolation.
    pub refined: Option<Box<SpectrumResult>>,
}

/// Number of eigenvalues of the tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if q == 0.0 { f64::EPSILON * off[i - 1].abs().max(1.0) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < off.len() {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// `index`-th smallest eigenvalue (0-based) by bisection.
fn bisect(diag: &[f64], off: &[f64], index: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin(diag, off);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve `(T - shift) x = b` for symmetric tridiagonal `T`.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let tiny = 1e-300;
    let mut denom = diag[0] - shift;
    if denom.abs() < tiny {
        denom = tiny;
    }
    if n > 1 {
        c[0] = off[0] / denom;
    }
    d[0] = b[0] / denom;
    for i in 1..n {
        let mut den = diag[i] - shift - off[i - 1] * c[i - 1];
        if den.abs() < tiny {
            den = tiny;
        }
        if i < n - 1 {
            c[i] = off[i] / den;
        }
        d[i] = (b[i] - off[i - 1] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn tridiag_mul(diag: &[f64], off: &[f64], x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * x[i];
            if i > 0 {
                s += off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += off[i] * x[i + 1];
            }
            s
        })
        .collect()
}

fn normalize(x: &mut [f64]) {
    let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= s);
}

/// Eigenvector for an isolated eigenvalue by inverse iteration.
fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let scale = gershgorin(diag, off).1.abs().max(1.0);
    let shift = lambda - 1e-12 * scale;
    // deterministic, non-symmetric start vector
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    normalize(&mut x);
    for _ in 0..4 {
        x = solve_shifted(diag, off, shift, &x);
        normalize(&mut x);
    }
    x
}

/// Residual tolerance `||T x - E x|| / ||x||` relative to the matrix scale.
const RESIDUAL_TOL: f64 = 1e-8;

pub fn radial_solve(p: &RadialProblem, count: usize) -> Result<SpectrumResult> {
    let mut out = solve_grid(p, count)?;
    if p.extrapolate {
        let fine = solve_grid(&p.refined(), count)?;
        for (e, f) in out.eigenvalues.iter_mut().zip(&fine.grid_eigenvalues) {
            *e = (4.0 * f - *e) / 3.0;
        }
        out.refined = Some(Box::new(fine));
    }
    Ok(out)
}

fn solve_grid(p: &RadialProblem, count: usize) -> Result<SpectrumResult> {
    if count == 0 || count > p.points / 4 {
        return Err(Error::GridTooCoarse(format!("{count} eigenvalues from {} points", p.points)));
    }
    let (diag, off) = p.matrix();
    let (r, h) = p.grid();
    let scale = gershgorin(&diag, &off).1.abs().max(1.0);
    let lift = (p.dim() as f64 - 1.0) / 2.0;
    let mut out = SpectrumResult {
        big_m: p.big_m,
        k: p.k,
        eigenvalues: Vec::with_capacity(count),
        grid_eigenvalues: Vec::with_capacity(count),
        radii: r.clone(),
        profiles: Vec::with_capacity(count),
        residuals: Vec::with_capacity(count),
        r_max: p.r_max,
        points: p.points,
        step: h,
        refined: None,
    };
    for i in 0..count {
        let e = bisect(&diag, &off, i);
        let mut v = inverse_iteration(&diag, &off, e);
        let tv = tridiag_mul(&diag, &off, &v);
        let res = tv.iter().zip(&v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
        if res > RESIDUAL_TOL * scale {
            return Err(Error::GridTooCoarse(format!("eigenpair {i}: residual {res:e}")));
        }
        let tail: f64 = v[v.len() - v.len() / 20..].iter().map(|x| x * x).sum();
        if tail > 1e-8 {
            return Err(Error::GridTooCoarse(format!("eigenfunction {i} reaches r_max (tail {tail:e})")));
        }
        let first = v.iter().copied().find(|x| x.abs() > 1e-8).unwrap_or(1.0);
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        // u = r^{(d-1)/2} psi with sum u^2 h = 1
        let norm = h.sqrt();
        let psi: Vec<f64> = v.iter().zip(&r).map(|(u, x)| u / norm / x.powf(lift)).collect();
        out.grid_eigenvalues.push(e);
        out.eigenvalues.push(e);
        out.profiles.push(psi);
        out.residuals.push(res / scale);
    }
    Ok(out)
}

/// Eigenfunction of the super Hamiltonian in sector `k`, carried by every
/// harmonic `l = 1..=multiplicity` with the same radial coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct LiftedState {
    pub k: usize,
    /// radial index
    pub j: usize,
    pub energy: f64,
    pub multiplicity: u64,
    pub radial_coeffs: Vec<f64>,
    /// `1 - sum a_j^2`
    pub tail: f64,
    pub residual: f64,
}

impl LiftedState {
    pub fn expansion(&self, m: usize, n: usize, l: usize) -> Result<HermiteExpansion<f64>> {
        let mut e = HermiteExpansion::new(m, n)?;
        for (j, a) in self.radial_coeffs.iter().enumerate() {
            if *a != 0.0 {
                e.set((j, self.k, l), Complex::new(*a, 0.0))?;
            }
        }
        Ok(e)
    }
}

/// Projects each radial profile on the Laguerre-Gaussian radial basis with
/// `jmax + 1` terms using the grid quadrature.
pub fn lift_spectrum(res: &SpectrumResult, m: usize, n: usize, jmax: usize) -> Result<Vec<LiftedState>> {
    let big_m = m as i64 - 2 * n as i64;
    if big_m <= 0 {
        return Err(Error::NonPositiveSuperDimension { m, n });
    }
    if big_m != res.big_m {
        return Err(Error::MismatchedDimensions(format!("M = {big_m} vs spectrum for M = {}", res.big_m)));
    }
    let k = res.k;
    let mut coeffs_all = project(res, jmax);
    if let Some(fine) = &res.refined {
        for (c, f) in coeffs_all.iter_mut().zip(project(fine, jmax)) {
            c.iter_mut().zip(f).for_each(|(a, b)| *a = (4.0 * b - *a) / 3.0);
        }
    }
    let mult = dim_super_harmonics(m, n, k);
    let mut out = Vec::new();
    for (idx, coeffs) in coeffs_all.into_iter().enumerate() {
        let tail = 1.0 - coeffs.iter().map(|a| a * a).sum::<f64>();
        if tail > 1e-6 {
            return Err(Error::BasisProjectionIncomplete { tail });
        }
        out.push(LiftedState {
            k,
            j: idx,
            energy: res.eigenvalues[idx],
            multiplicity: mult,
            radial_coeffs: coeffs,
            tail,
            residual: res.residuals[idx],
        });
    }
    Ok(out)
}

/// Radial coefficients of every profile by the grid quadrature.
fn project(res: &SpectrumResult, jmax: usize) -> Vec<Vec<f64>> {
    let pw = (res.big_m + 2 * res.k as i64 - 1) as i32;
    let basis: Vec<Vec<f64>> = (0..=jmax)
        .map(|j| res.radii.iter().map(|&r| radial_basis(res.big_m, j, res.k, r) * r.powi(pw) * res.step).collect())
        .collect();
    res.profiles
        .iter()
        .map(|psi| basis.iter().map(|b| b.iter().zip(psi).map(|(x, y)| x * y).sum()).collect())
        .collect()
}

/// CSV rows `k,j,E,multiplicity,residual`.
pub fn spectrum_csv(states: &[LiftedState]) -> String {
    let mut s = String::from("k,j,E,multiplicity,residual\n");
    for st in states {
        s.push_str(&format!("{},{},{:.10},{},{:.3e}\n", st.k, st.j, st.energy, st.multiplicity, st.residual));
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelfAdjointness {
    /// `true` when the sufficient condition holds on every sample; `false`
    /// means the criterion is inconclusive.
    pub holds: bool,
    /// `min u V(u) + (M-1)(M-3)/8 - 3/8` over the samples.
    pub worst_margin: f64,
    pub worst_u: f64,
}

/// Samples `V(u) + (M-1)(M-3)/(8u) >= 3/(8u)` (multiplied through by `u`) on
/// a log-spaced grid of `(0, u0]` reaching down to `u0 * 1e-12`.
pub fn self_adjointness_check(v: impl Fn(f64) -> f64, big_m: i64, u0: f64, samples: usize) -> SelfAdjointness {
    let c = ((big_m - 1) * (big_m - 3)) as f64 / 8.0 - 3.0 / 8.0;
    let samples = samples.max(2);
    let mut worst = (f64::INFINITY, u0);
    for i in 0..samples {
        let u = u0 * 10f64.powf(-12.0 * i as f64 / (samples - 1) as f64);
        let margin = u * v(u) + c;
        if margin < worst.0 {
            worst = (margin, u);
        }
    }
    SelfAdjointness { holds: worst.0 >= 0.0, worst_margin: worst.0, worst_u: worst.1 }
}
