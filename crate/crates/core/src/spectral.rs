//! Coefficient-space model of the Hilbert space: expansions in normalized
//! super Hermite functions `phi_{j,k,l}` and the operators acting on them.

use std::collections::BTreeMap;

use num::complex::Complex;
use num::{Float, Zero};
use serde::{Deserialize, Serialize};

use crate::basischange::{product_to_spherical, spherical_to_product, Dims, ProductLabel, SphericalLabel};
use crate::error::{Error, Result};
use crate::harmonics::dim_super_harmonics;
use crate::scalar::{gamma_half, int, rat, rational_to_f64, HalfInt, Rational};

/// Label `(j, k, l)`; `l` is 1-based.
pub type Label = (usize, usize, usize);

/// `f = sum a_{j,k,l} phi_{j,k,l}` with finitely many nonzero amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteExpansion<T: Float = f64> {
    pub m: usize,
    pub n: usize,
    pub coeffs: BTreeMap<Label, Complex<T>>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    j: usize,
    k: usize,
    l: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct JsonExpansion {
    m: usize,
    n: usize,
    coeffs: Vec<JsonTerm>,
}

impl HermiteExpansion<f64> {
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(j, k, l), v)| JsonTerm { j, k, l, re: v.re, im: v.im })
            .collect();
        serde_json::to_value(JsonExpansion { m: self.m, n: self.n, coeffs }).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: JsonExpansion = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Self::new(raw.m, raw.n)?;
        for t in raw.coeffs {
            out.add_at((t.j, t.k, t.l), Complex::new(t.re, t.im));
            out.set((t.j, t.k, t.l), out.get((t.j, t.k, t.l)))?;
        }
        Ok(out.prune())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoeffOp {
    R2,
    Nabla2,
    EulerPlusM2,
    FourierPlus,
    FourierMinus,
    Casimir,
    NumberOp,
}

fn cf<T: Float>(x: f64) -> T {
    T::from(x).expect("representable")
}

/// `rho_{j,k} = (j+1)(j+k+M/2)`: squared off-diagonal weight between `j` and `j+1`.
pub fn edge_weight(big_m: i64, j: usize, k: usize) -> Rational {
    int(j as i64 + 1) * (int((j + k) as i64) + rat(big_m, 2))
}

/// `i^e` for integer `e`.
pub fn i_pow<T: Float>(e: i64) -> Complex<T> {
    match e.rem_euclid(4) {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// `(k + M/2 - 2)(k + M/2)`.
pub fn casimir_eigenvalue(big_m: i64, k: usize) -> Rational {
    let x = int(k as i64) + rat(big_m, 2);
    (&x - int(2)) * x
}

impl<T: Float> HermiteExpansion<T> {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        Dims::new(m, n)?;
        Ok(HermiteExpansion { m, n, coeffs: BTreeMap::new() })
    }

    pub fn basis(m: usize, n: usize, label: Label) -> Result<Self> {
        let mut e = Self::new(m, n)?;
        e.set(label, Complex::new(T::one(), T::zero()))?;
        Ok(e)
    }

    pub fn big_m(&self) -> i64 {
        self.m as i64 - 2 * self.n as i64
    }

    pub fn get(&self, label: Label) -> Complex<T> {
        self.coeffs.get(&label).copied().unwrap_or_else(Complex::zero)
    }

    pub fn set(&mut self, label: Label, v: Complex<T>) -> Result<()> {
        let (_, k, l) = label;
        if l == 0 || l as u64 > dim_super_harmonics(self.m, self.n, k) {
            return Err(Error::IndexOutOfRange(format!("l = {l} in H_{k}")));
        }
        if v.is_zero() {
            self.coeffs.remove(&label);
        } else {
            self.coeffs.insert(label, v);
        }
        Ok(())
    }

    fn add_at(&mut self, label: Label, v: Complex<T>) {
        let e = self.coeffs.entry(label).or_insert_with(Complex::zero);
        *e = *e + v;
    }

    fn empty_like(&self) -> Self {
        HermiteExpansion { m: self.m, n: self.n, coeffs: BTreeMap::new() }
    }

    fn prune(mut self) -> Self {
        self.coeffs.retain(|_, v| !v.is_zero());
        self
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::MismatchedDimensions(format!(
                "({},{}) vs ({},{})",
                self.m, self.n, other.m, other.n
            )));
        }
        Ok(())
    }

    fn tridiagonal(&self, diag_sign: f64, off_sign: f64, skew: bool) -> Self {
        let big_m = self.big_m();
        let mut out = self.empty_like();
        for (&(j, k, l), &a) in &self.coeffs {
            let diag = 2.0 * j as f64 + k as f64 + big_m as f64 / 2.0;
            if diag_sign != 0.0 {
                out.add_at((j, k, l), a * cf::<T>(diag_sign * diag));
            }
            let up = rational_to_f64(&edge_weight(big_m, j, k)).sqrt();
            out.add_at((j + 1, k, l), a * cf::<T>(off_sign * up));
            if j > 0 {
                let down = rational_to_f64(&edge_weight(big_m, j - 1, k)).sqrt();
                let s = if skew { -off_sign } else { off_sign };
                out.add_at((j - 1, k, l), a * cf::<T>(s * down));
            }
        }
        out.prune()
    }

    fn diagonal(&self, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut out = self.empty_like();
        for (&(j, k, l), &a) in &self.coeffs {
            out.add_at((j, k, l), a * f(j, k));
        }
        out.prune()
    }

    pub fn apply(&self, op: CoeffOp) -> Self {
        let big_m = self.big_m();
        match op {
            CoeffOp::R2 => self.tridiagonal(1.0, -1.0, false),
            CoeffOp::Nabla2 => self.tridiagonal(-1.0, -1.0, false),
            CoeffOp::EulerPlusM2 => self.tridiagonal(0.0, 1.0, true),
            CoeffOp::FourierPlus => self.diagonal(|j, k| i_pow((2 * j + k) as i64)),
            CoeffOp::FourierMinus => self.diagonal(|j, k| i_pow(-((2 * j + k) as i64))),
            CoeffOp::Casimir => {
                self.diagonal(|_, k| Complex::new(cf(rational_to_f64(&casimir_eigenvalue(big_m, k))), T::zero()))
            }
            CoeffOp::NumberOp => self.diagonal(|j, k| Complex::new(cf((2 * j + k) as f64), T::zero())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (l, v) in &other.coeffs {
            out.add_at(*l, *v);
        }
        Ok(out.prune())
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = *v * c;
        }
        out.prune()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex::new(-T::one(), T::zero())))
    }

    /// `<f|g>_2 = sum a conj(b)`.
    pub fn inner2(&self, other: &Self) -> Result<Complex<T>> {
        self.check_dims(other)?;
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(l, a)| other.coeffs.get(l).map(|b| *a * b.conj()))
            .fold(Complex::zero(), |acc, x| acc + x))
    }

    pub fn norm2(&self) -> T {
        self.coeffs.values().fold(T::zero(), |acc, v| acc + v.norm_sqr())
    }

    pub fn to_f64(&self) -> HermiteExpansion<f64> {
        HermiteExpansion {
            m: self.m,
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(l, v)| (*l, Complex::new(v.re.to_f64().unwrap_or(f64::NAN), v.im.to_f64().unwrap_or(f64::NAN))))
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormVariant {
    /// `sum |a_{j,k,l}|^2 (2j+k+1)^{2r}`
    Spherical,
    /// `sum |c_{i,p,l,s,q,t}|^2 (2i+2s+p+q+1)^{2r}` in the product basis.
    Star,
}

/// Spherical labels of an expansion, with its coefficients.
pub fn to_spherical(f: &HermiteExpansion<f64>) -> Result<BTreeMap<SphericalLabel, Complex<f64>>> {
    let d = Dims::new(f.m, f.n)?;
    f.coeffs
        .iter()
        .map(|(&(j, k, l), v)| Ok((SphericalLabel::from_spectral(d, j, k, l)?, *v)))
        .collect()
}

pub fn from_spherical(m: usize, n: usize, c: &BTreeMap<SphericalLabel, Complex<f64>>) -> Result<HermiteExpansion<f64>> {
    let d = Dims::new(m, n)?;
    let mut out = HermiteExpansion::new(m, n)?;
    for (lab, v) in c {
        let key = lab.to_spectral(d)?;
        out.add_at(key, *v);
    }
    Ok(out.prune())
}

pub fn to_product(f: &HermiteExpansion<f64>) -> Result<BTreeMap<ProductLabel, Complex<f64>>> {
    spherical_to_product(Dims::new(f.m, f.n)?, &to_spherical(f)?)
}

pub fn from_product(m: usize, n: usize, c: &BTreeMap<ProductLabel, Complex<f64>>) -> Result<HermiteExpansion<f64>> {
    from_spherical(m, n, &product_to_spherical(Dims::new(m, n)?, c)?)
}

pub fn schwartz_norm(f: &HermiteExpansion<f64>, r: u32, variant: NormVariant) -> Result<f64> {
    let s: f64 = match variant {
        NormVariant::Spherical => f
            .coeffs
            .iter()
            .map(|(&(j, k, _), a)| a.norm_sqr() * ((2 * j + k + 1) as f64).powi(2 * r as i32))
            .sum(),
        NormVariant::Star => to_product(f)?
            .iter()
            .map(|(l, c)| c.norm_sqr() * ((2 * l.i + 2 * l.s + l.p + l.q + 1) as f64).powi(2 * r as i32))
            .sum(),
    };
    Ok(s.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeisenbergReport {
    pub lhs: f64,
    pub rhs: f64,
    pub saturated: bool,
}

/// `||R f|| ||R F f|| >= M/2 ||f||^2`, with `||R f||^2 = <f|R^2 f>`.
pub fn heisenberg_check(f: &HermiteExpansion<f64>) -> Result<HeisenbergReport> {
    let rf = f.inner2(&f.apply(CoeffOp::R2))?.re;
    let ff = f.apply(CoeffOp::FourierPlus);
    let rff = ff.inner2(&ff.apply(CoeffOp::R2))?.re;
    let lhs = (rf.max(0.0) * rff.max(0.0)).sqrt();
    let rhs = f.big_m() as f64 / 2.0 * f.norm2();
    Ok(HeisenbergReport { lhs, rhs, saturated: (lhs - rhs).abs() < 1e-10 })
}

/// `|<f|g>_2 - <F f|F g>_2|`.
pub fn parseval_check(f: &HermiteExpansion<f64>, g: &HermiteExpansion<f64>) -> Result<f64> {
    let a = f.inner2(g)?;
    let b = f.apply(CoeffOp::FourierPlus).inner2(&g.apply(CoeffOp::FourierPlus))?;
    Ok((a - b).norm())
}

/// `exp(-+ i pi M/4) exp(+- i pi/2 (2j+k+M/2))` evaluated in floating point.
pub fn fourier_phase_spectral(plus: bool, big_m: i64, j: usize, k: usize) -> Complex<f64> {
    let s = if plus { 1.0 } else { -1.0 };
    let e = 2.0 * j as f64 + k as f64 + big_m as f64 / 2.0;
    let pre = Complex::from_polar(1.0, -s * std::f64::consts::PI * big_m as f64 / 4.0);
    pre * Complex::from_polar(1.0, s * std::f64::consts::FRAC_PI_2 * e)
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceDemo {
    pub r: Vec<usize>,
    /// `<f_r|f_r>_2` for `f_r = sum_{i=1}^r (1/i) phi^b_{i,0,1} phi^f_{0,0,1}`.
    pub partial: Vec<f64>,
    /// `Gamma(M/2)/Gamma(m/2) sum_{i=1}^r i^{n-2}`.
    pub lower_bound: Vec<f64>,
}

/// Partial squared norms of the product-basis series with coefficients `1/i`.
/// Only `s = 0` occurs, so `phi^b_{i,0,1} phi^f_{0,0,1}` expands into
/// `phi_{i-k,k,0,0,1,1}` with coefficient `(-1)^k alpha_{i-k,k,0,0,0}` and
/// distinct `i` never share a spherical label.
pub fn divergence_demo(m: usize, n: usize, r_max: usize) -> Result<DivergenceDemo> {
    let d = Dims::new(m, n)?;
    let mut alpha2: Vec<Vec<f64>> = Vec::new();
    for k in 0..=n {
        // alpha_{j,k,0,0,0}^2 via the s = 0 product formula, accumulated in j
        let mut v = Vec::with_capacity(r_max + 1);
        let mut cur = rational_to_f64(&crate::basischange::alpha0_squared(d, k, 0, 0, 0)?);
        v.push(cur);
        for j in 1..=r_max {
            let num = (j + k) as f64 * (j as f64 + k as f64 - 1.0 + m as f64 / 2.0);
            let den = j as f64 * (j as f64 + 2.0 * k as f64 - 1.0 + d.big_m() as f64 / 2.0);
            cur *= num / den;
            v.push(cur);
        }
        alpha2.push(v);
    }
    let c = gamma_half(HalfInt::from_twice(d.big_m()))?.to_f64() / gamma_half(HalfInt::from_twice(m as i64))?.to_f64();
    let mut out = DivergenceDemo { r: Vec::new(), partial: Vec::new(), lower_bound: Vec::new() };
    let (mut acc, mut bound) = (0.0f64, 0.0f64);
    for i in 1..=r_max {
        let w = 1.0 / (i as f64 * i as f64);
        for (k, a2) in alpha2.iter().enumerate() {
            if k <= i {
                acc += w * a2[i - k];
            }
        }
        bound += c * (i as f64).powi(n as i32 - 2);
        out.r.push(i);
        out.partial.push(acc);
        out.lower_bound.push(bound);
    }
    Ok(out)
}

/// Band representation used for exact checks: for a fixed column `j`,
/// entry at row `j + d` is `c * sqrt(prod of edge weights between j and j+d)`.
pub type ExactColumn = BTreeMap<i64, Rational>;

/// Exact column of a coefficient operator acting on `phi_{j,k,l}`.
pub fn exact_column(op: CoeffOp, big_m: i64, j: usize, k: usize) -> Option<ExactColumn> {
    let diag = int(2 * j as i64 + k as i64) + rat(big_m, 2);
    let mut col = ExactColumn::new();
    match op {
        CoeffOp::R2 | CoeffOp::Nabla2 => {
            col.insert(0, if op == CoeffOp::R2 { diag } else { -diag });
            col.insert(1, int(-1));
            if j > 0 {
                col.insert(-1, int(-1));
            }
        }
        CoeffOp::EulerPlusM2 => {
            col.insert(1, int(1));
            if j > 0 {
                col.insert(-1, int(-1));
            }
        }
        CoeffOp::Casimir => {
            col.insert(0, casimir_eigenvalue(big_m, k));
        }
        CoeffOp::NumberOp => {
            col.insert(0, int(2 * j as i64 + k as i64));
        }
        CoeffOp::FourierPlus | CoeffOp::FourierMinus => return None,
    }
    Some(col)
}

/// Column `j` of the product `A B` (apply `B` first) in the band representation.
pub fn exact_product(a: CoeffOp, b: CoeffOp, big_m: i64, j: usize, k: usize) -> Option<ExactColumn> {
    let bcol = exact_column(b, big_m, j, k)?;
    let mut out = ExactColumn::new();
    for (db, cb) in &bcol {
        let mid = j as i64 + db;
        let acol = exact_column(a, big_m, mid as usize, k)?;
        for (da, ca) in &acol {
            let end = mid + da;
            if end < 0 {
                continue;
            }
            // edges walked twice contribute their weight as a rational factor
            let mut c = cb * ca;
            if (*db > 0 && *da < 0) || (*db < 0 && *da > 0) {
                let overlap = db.abs().min(da.abs());
                let start = if *db > 0 { mid - overlap } else { mid };
                for e in start..start + overlap {
                    c *= edge_weight(big_m, e as usize, k);
                }
            }
            let d = end - j as i64;
            let slot = out.entry(d).or_insert_with(Rational::zero);
            *slot += c;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Some(out)
}

/// Exact column of `(E+M/2)^2 - (R^2 nabla^2 + nabla^2 R^2)/2`.
pub fn exact_casimir_column(big_m: i64, j: usize, k: usize) -> ExactColumn {
    let mut out = exact_product(CoeffOp::EulerPlusM2, CoeffOp::EulerPlusM2, big_m, j, k).expect("band op");
    for (x, y) in [(CoeffOp::R2, CoeffOp::Nabla2), (CoeffOp::Nabla2, CoeffOp::R2)] {
        for (d, c) in exact_product(x, y, big_m, j, k).expect("band op") {
            let slot = out.entry(d).or_insert_with(Rational::zero);
            *slot -= c * rat(1, 2);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Exact column of `[nabla^2/2, R^2/2]`, which equals `E + M/2`.
pub fn exact_commutator_column(big_m: i64, j: usize, k: usize) -> ExactColumn {
    let mut out = exact_product(CoeffOp::Nabla2, CoeffOp::R2, big_m, j, k).expect("band op");
    for (d, c) in exact_product(CoeffOp::R2, CoeffOp::Nabla2, big_m, j, k).expect("band op") {
        let slot = out.entry(d).or_insert_with(Rational::zero);
        *slot -= c;
    }
    for v in out.values_mut() {
        *v *= rat(1, 4);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Coefficients of a radial profile `h(u)` on the normalized radial basis
/// `L_j^{M/2+k-1}(u^2) exp(-u^2/2) / zeta_{j,k}`, orthonormal on
/// `L_2(R^+, u^{M+2k-1} du)`, by composite Simpson quadrature on `[0, u_max]`.
pub fn radial_coefficients(h: impl Fn(f64) -> f64, big_m: i64, k: usize, jmax: usize, u_max: f64, panels: usize) -> Vec<f64> {
    let panels = panels + panels % 2;
    let step = u_max / panels as f64;
    let alpha = big_m as f64 / 2.0 + k as f64 - 1.0;
    let pw = big_m as f64 + 2.0 * k as f64 - 1.0;
    let mut out = vec![0.0; jmax + 1];
    for i in 0..=panels {
        let u = i as f64 * step;
        let w = if i == 0 || i == panels { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let base = w * step / 3.0 * h(u) * u.powf(pw) * (-u * u / 2.0).exp();
        if base == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += base * crate::hermite::laguerre_f64(j, alpha, u * u) / radial_zeta(big_m, j, k);
        }
    }
    out
}

/// `zeta_{j,k} = sqrt(Gamma(j+k+M/2) / (2 j!))` in floating point.
pub fn radial_zeta(big_m: i64, j: usize, k: usize) -> f64 {
    let lg = ln_gamma_half(2 * (j + k) as i64 + big_m) - ln_factorial(j);
    (0.5 * (lg - std::f64::consts::LN_2)).exp()
}

fn ln_factorial(j: usize) -> f64 {
    (1..=j).map(|i| (i as f64).ln()).sum()
}

/// `ln Gamma(twice / 2)` for positive `twice`.
fn ln_gamma_half(twice: i64) -> f64 {
    let mut x = if twice % 2 == 0 { 0.0 } else { 0.5 * std::f64::consts::PI.ln() };
    let mut a = if twice % 2 == 0 { 1.0 } else { 0.5 };
    while 2.0 * a < twice as f64 {
        x += a.ln();
        a += 1.0;
    }
    x
}

/// The normalized radial basis function evaluated at `u`.
pub fn radial_basis(big_m: i64, j: usize, k: usize, u: f64) -> f64 {
    let alpha = big_m as f64 / 2.0 + k as f64 - 1.0;
    crate::hermite::laguerre_f64(j, alpha, u * u) * (-u * u / 2.0).exp() / radial_zeta(big_m, j, k)
}
