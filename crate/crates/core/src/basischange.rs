//! Coefficients between the spherical super Hermite basis and the product of
//! bosonic and fermionic Hermite functions.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::harmonics::{
    a_kpq, b_kpq, dim_bosonic_harmonics, dim_fermionic_harmonics, f_kpq_coeffs, fermionic_harmonics, super_labels,
    SuperLabel,
};
use crate::scalar::{
    binomial, factorial, gamma_half, int, pochhammer, rat, rational_to_f64, HalfInt, PiScaled, Rational,
};

/// Dimensions `(m, n)` with `M = m - 2n > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m as i64 - 2 * n as i64 <= 0 {
            return Err(Error::NonPositiveSuperDimension { m, n });
        }
        Ok(Dims { m, n })
    }

    pub fn big_m(&self) -> i64 {
        self.m as i64 - 2 * self.n as i64
    }
}

fn check(d: Dims, k: usize, q: usize) -> Result<()> {
    if q > d.n || k + q > d.n {
        return Err(Error::IndexConstraintViolated(format!("k = {k}, q = {q} with n = {}", d.n)));
    }
    Ok(())
}

/// Exact `alpha_{0,k,p,q,s}^2`; the sign of `alpha_{0,k,p,q,s}` is `(-1)^k`.
pub fn alpha0_squared(d: Dims, k: usize, p: usize, q: usize, s: usize) -> Result<Rational> {
    check(d, k, q)?;
    if s > k {
        return Ok(Rational::zero());
    }
    let top = HalfInt::from_twice((d.m + 2 * p + 2 * k) as i64);
    let lower = HalfInt::from_twice(d.big_m() + 2 * (p + q + k) as i64 - 2);
    Ok(Rational::from_integer(binomial(k as i64, s as i64))
        * pochhammer(top.add_int(-(s as i64)), s as u32)
        / pochhammer(lower, k as u32)
        * Rational::from_integer(factorial((d.n - q - s) as u64))
        / Rational::from_integer(factorial((d.n - q - k) as u64)))
}

/// Radicands of the two recursion coefficients taking `alpha_{j-1}` to
/// `alpha_j`: `(same s, s - 1)`.
pub fn recursion_radicands(d: Dims, j: usize, k: usize, p: usize, q: usize, s: usize) -> (Rational, Rational) {
    let big = int((j + 2 * k + p + q) as i64 - 1) + rat(d.big_m(), 2);
    let den = int(j as i64) * big;
    let i = (j + k) as i64 - s as i64;
    let first = if i > 0 {
        int(i) * (int(i + p as i64 - 1) + rat(d.m as i64, 2)) / &den
    } else {
        Rational::zero()
    };
    let second = if s >= 1 && d.n + 1 >= s + q {
        int((s * (d.n + 1 - s - q)) as i64) / &den
    } else {
        Rational::zero()
    };
    (first, second)
}

/// `alpha_{j',k,p,q,s}` for `j' = 0..=j` and every `s`, indexed `[j'][s]`.
fn alpha_rows(d: Dims, j: usize, k: usize, p: usize, q: usize) -> Result<Vec<Vec<f64>>> {
    check(d, k, q)?;
    let smax = d.n - q;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut rows = Vec::with_capacity(j + 1);
    let row0: Vec<f64> = (0..=smax)
        .map(|s| alpha0_squared(d, k, p, q, s).map(|a| sign * rational_to_f64(&a).sqrt()))
        .collect::<Result<_>>()?;
    rows.push(row0);
    for jj in 1..=j {
        let prev = &rows[jj - 1];
        let row: Vec<f64> = (0..=smax)
            .map(|s| {
                if s > jj + k {
                    return 0.0;
                }
                let (a, b) = recursion_radicands(d, jj, k, p, q, s);
                let mut v = rational_to_f64(&a).sqrt() * prev[s];
                if s >= 1 {
                    v += rational_to_f64(&b).sqrt() * prev[s - 1];
                }
                v
            })
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

/// `alpha_{j,k,p,q,s}` by the recursion in `j` seeded with the closed form
/// at `j = 0`.
pub fn alpha(d: Dims, j: usize, k: usize, p: usize, q: usize, s: usize) -> Result<f64> {
    check(d, k, q)?;
    if s > d.n - q || s > j + k {
        return Ok(0.0);
    }
    Ok(alpha_rows(d, j, k, p, q)?[j][s])
}

/// Exact `alpha_{j,k,p,q,0}^2` from the closed form in `j`.
pub fn alpha_squared_s0(d: Dims, j: usize, k: usize, p: usize, q: usize) -> Result<Rational> {
    let a0 = alpha0_squared(d, k, p, q, 0)?;
    let bos = HalfInt::from_twice((2 * k + 2 * p + d.m) as i64);
    let sup = HalfInt::from_twice(d.big_m() + 2 * (2 * k + p + q) as i64);
    Ok(a0 * Rational::from_integer(binomial((j + k) as i64, j as i64)) * pochhammer(bos, j as u32)
        / pochhammer(sup, j as u32))
}

/// `beta_{i,s,p,q,k} = (-1)^{k-s} alpha_{i+s-k,k,p,q,s}`.
pub fn beta(d: Dims, i: usize, s: usize, p: usize, q: usize, k: usize) -> Result<f64> {
    check(d, k, q)?;
    if i + s < k {
        return Ok(0.0);
    }
    let a = alpha(d, i + s - k, k, p, q, s)?;
    Ok(if (k + s).is_multiple_of(2) { a } else { -a })
}

/// Polynomials in the commuting pair `(rho, t) = (r^2, theta^2)`.
type Radial = BTreeMap<(usize, usize), Rational>;

fn radial_mul(a: &Radial, b: &Radial, tmax: usize) -> Radial {
    let mut out = Radial::new();
    for ((i1, t1), c1) in a {
        for ((i2, t2), c2) in b {
            if t1 + t2 > tmax {
                continue;
            }
            let e = out.entry((i1 + i2, t1 + t2)).or_insert_with(Rational::zero);
            *e += c1 * c2;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `L_j^alpha(x)` with `x` given as a radial polynomial.
fn laguerre_radial(j: usize, alpha: HalfInt, x: &Radial, tmax: usize) -> Radial {
    let c = crate::hermite::laguerre(j, alpha);
    let mut out = Radial::new();
    let mut pow = Radial::from([((0, 0), Rational::from_integer(1.into()))]);
    for (i, ci) in c.iter().enumerate() {
        if i > 0 {
            pow = radial_mul(&pow, x, tmax);
        }
        for (key, v) in &pow {
            let e = out.entry(*key).or_insert_with(Rational::zero);
            *e += v * ci;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Result of the exact inner-product oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleValue {
    pub alpha: f64,
    /// Exact `alpha^2`.
    pub alpha2: Rational,
}

/// `alpha_{j,k,p,q,s} = <phi_{j,k,p,q,l,t} | phi^b_{j+k-s,p,l} phi^f_{s,q,t}>_1`
/// computed exactly. Both functions carry the same `H^b_p` and `H^f_q`; the
/// bosonic angular integral factors out, the radial integrals are Gamma
/// values and the fermionic part is an exact `<.|.>_Lambda` computation.
pub fn alpha_oracle(d: Dims, j: usize, k: usize, p: usize, q: usize, s: usize, t: usize) -> Result<OracleValue> {
    check(d, k, q)?;
    if s > d.n - q || s > j + k {
        return Ok(OracleValue { alpha: 0.0, alpha2: Rational::zero() });
    }
    let n = d.n;
    let hf = fermionic_harmonics(n, q)?;
    if t == 0 || t > hf.len() {
        return Err(Error::IndexOutOfRange(format!("t = {t}")));
    }
    let h = GrassmannElement::from_terms(n, hf.elements[t - 1].terms().map(|(m, c)| (m.mask(), c.clone())))?;
    let big_k = 2 * k + p + q;
    let i = j + k - s;
    // super side: L_j(rho + theta^2) f_{k,p,q}
    let rho_plus_t = Radial::from([((1, 0), int(1)), ((0, 1), int(1))]);
    let lag = laguerre_radial(j, HalfInt::from_twice(d.big_m() + 2 * big_k as i64 - 2), &rho_plus_t, n);
    let f: Radial = f_kpq_coeffs(d.m, n, k, p, q)?
        .into_iter()
        .enumerate()
        .map(|(c, a)| ((k - c, c), a))
        .collect();
    let a_side = radial_mul(&lag, &f, n);
    // product side: L_i(rho) L_s(theta^2)
    let lb = laguerre_radial(i, HalfInt::from_twice((d.m + 2 * p) as i64 - 2), &Radial::from([((1, 0), int(1))]), n);
    let lf = laguerre_radial(s, HalfInt::from_int(q as i64 - n as i64 - 1), &Radial::from([((0, 1), int(1))]), n);
    let b_side = radial_mul(&lb, &lf, n);

    let e = GrassmannElement::<Rational>::exp_theta2(n, &rat(-1, 2))?;
    let theta2 = GrassmannElement::<Rational>::theta2(n)?;
    let mut g = vec![h.mul(&e)?];
    for c in 1..=n {
        let next = theta2.mul(&g[c - 1])?;
        g.push(next);
    }
    let mut lambda = vec![vec![PiScaled::zero(); n + 1]; n + 1];
    for c in 0..=n {
        for dd in 0..=n {
            lambda[c][dd] = g[c].inner_lambda(&g[dd])?;
        }
    }
    // int_0^inf rho^a r^{2p+m-1} exp(-r^2) dr = Gamma(a + p + m/2) / 2
    let radial = |a: usize| -> Result<PiScaled> {
        Ok(gamma_half(HalfInt::from_twice((2 * a + 2 * p + d.m) as i64))?.scale_rational(&rat(1, 2)))
    };
    let mut total = PiScaled::zero();
    for ((ia, ta), ca) in &a_side {
        for ((ib, tb), cb) in &b_side {
            let term = radial(ia + ib)?.mul(&lambda[*ta][*tb]).scale_rational(&(ca * cb));
            total = total.add(&term)?;
        }
    }
    // squared norms with the common factor N_b removed
    let nf = hf.norm2[t - 1].clone();
    let nq = Rational::from_integer(factorial((n - q) as u64));
    let sup = a_kpq(d.m, n, k, p, q)?
        .mul(&b_kpq(d.m, n, k, p, q)?)
        .mul(&nf)
        .scale_rational(&nq)
        .mul(&gamma_half(HalfInt::from_twice(d.big_m() + 2 * big_k as i64))?)
        .scale_rational(&(rat(1, 2) * pochhammer(HalfInt::from_twice(d.big_m() + 2 * big_k as i64), j as u32)
            / Rational::from_integer(factorial(j as u64))));
    let ferm = {
        let lfe = laguerre_radial(s, HalfInt::from_int(q as i64 - n as i64 - 1), &Radial::from([((0, 1), int(1))]), n);
        let mut acc = GrassmannElement::<Rational>::zero(n)?;
        for ((_, c), v) in &lfe {
            acc = acc.add(&g[*c].scale(&crate::scalar::real(v.clone())))?;
        }
        acc.inner_lambda(&acc)?
    };
    let bos = gamma_half(HalfInt::from_twice((2 * i + 2 * p + d.m) as i64))?
        .scale_rational(&(rat(1, 2) / Rational::from_integer(factorial(i as u64))));
    let prod_norm = bos.mul(&ferm);
    let sq = total.mul(&total).div(&sup.mul(&prod_norm))?;
    if sq.half_pi != 0 || !total.coeff.im.is_zero() || !sq.coeff.im.is_zero() {
        return Err(Error::MismatchedDimensions(format!("oracle value not real rational: {sq}")));
    }
    let alpha2 = sq.coeff.re.clone();
    let mag = rational_to_f64(&alpha2).sqrt();
    let alpha = if total.coeff.re.is_negative() { -mag } else { mag };
    Ok(OracleValue { alpha, alpha2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Recursion,
    Oracle,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaEntry {
    pub j: usize,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub s: usize,
    pub alpha: f64,
    pub provenance: Provenance,
}

/// All nonzero-pattern `alpha_{j,k,p,q,s}` with `j <= jmax`, `p <= pmax`.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaTable {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<AlphaEntry>,
}

pub fn valid_indices(d: Dims, jmax: usize, pmax: usize) -> Vec<(usize, usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=jmax {
        for q in 0..=d.n {
            for k in 0..=d.n - q {
                for p in 0..=pmax {
                    for s in 0..=(d.n - q).min(j + k) {
                        out.push((j, k, p, q, s));
                    }
                }
            }
        }
    }
    out
}

impl AlphaTable {
    pub fn build(d: Dims, jmax: usize, pmax: usize) -> Result<Self> {
        let mut rows = BTreeMap::new();
        for q in 0..=d.n {
            for k in 0..=d.n - q {
                for p in 0..=pmax {
                    rows.insert((k, p, q), alpha_rows(d, jmax, k, p, q)?);
                }
            }
        }
        let entries = valid_indices(d, jmax, pmax)
            .into_iter()
            .map(|(j, k, p, q, s)| AlphaEntry {
                j,
                k,
                p,
                q,
                s,
                alpha: rows[&(k, p, q)][j][s],
                provenance: if j == 0 { Provenance::ClosedForm } else { Provenance::Recursion },
            })
            .collect();
        Ok(AlphaTable { m: d.m, n: d.n, entries })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub jmax: usize,
    pub pmax: usize,
    /// `max |alpha| / sqrt(j^{n-q-2s+2} p^{s-k})`, zero bases replaced by 1.
    pub max_ratio_jp: f64,
    pub argmax_jp: (usize, usize, usize, usize, usize),
    /// `max |alpha| / sqrt((2j+2k+p+q+1)^{n+2})`.
    pub max_ratio_total: f64,
    pub argmax_total: (usize, usize, usize, usize, usize),
    /// Running maximum of the second ratio over `j' <= j`, for `j = 0..=jmax`.
    pub partial_max_total: Vec<f64>,
    pub partial_max_jp: Vec<f64>,
}

pub fn bound_report(d: Dims, jmax: usize, pmax: usize) -> Result<BoundReport> {
    let table = AlphaTable::build(d, jmax, pmax)?;
    let n = d.n as i32;
    let mut best_jp = (0.0f64, (0, 0, 0, 0, 0));
    let mut best_tot = (0.0f64, (0, 0, 0, 0, 0));
    let mut per_j_tot = vec![0.0f64; jmax + 1];
    let mut per_j_jp = vec![0.0f64; jmax + 1];
    for e in &table.entries {
        let a = e.alpha.abs();
        let jb = e.j.max(1) as f64;
        let pb = e.p.max(1) as f64;
        let r1 = a / (jb.powi(n - e.q as i32 - 2 * e.s as i32 + 2) * pb.powi(e.s as i32 - e.k as i32)).sqrt();
        let r2 = a / ((2 * e.j + 2 * e.k + e.p + e.q + 1) as f64).powi(n + 2).sqrt();
        let key = (e.j, e.k, e.p, e.q, e.s);
        if r1 > best_jp.0 {
            best_jp = (r1, key);
        }
        if r2 > best_tot.0 {
            best_tot = (r2, key);
        }
        per_j_tot[e.j] = per_j_tot[e.j].max(r2);
        per_j_jp[e.j] = per_j_jp[e.j].max(r1);
    }
    let running = |v: Vec<f64>| {
        v.into_iter()
            .scan(0.0f64, |acc, x| {
                *acc = acc.max(x);
                Some(*acc)
            })
            .collect()
    };
    Ok(BoundReport {
        jmax,
        pmax,
        max_ratio_jp: best_jp.0,
        argmax_jp: best_jp.1,
        max_ratio_total: best_tot.0,
        argmax_total: best_tot.1,
        partial_max_total: running(per_j_tot),
        partial_max_jp: running(per_j_jp),
    })
}

/// Label `(j, k, p, q, l, t)` of `phi_{j,k,p,q,l,t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SphericalLabel {
    pub j: usize,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub l: usize,
    pub t: usize,
}

/// Label `(i, p, l, s, q, t)` of `phi^b_{i,p,l} phi^f_{s,q,t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductLabel {
    pub i: usize,
    pub p: usize,
    pub l: usize,
    pub s: usize,
    pub q: usize,
    pub t: usize,
}

impl SphericalLabel {
    /// `(j, 2k+p+q, r)` with `r` the 1-based position in the super harmonic basis.
    pub fn to_spectral(&self, d: Dims) -> Result<(usize, usize, usize)> {
        let big_k = 2 * self.k + self.p + self.q;
        let lab = SuperLabel { ks: self.k, q: self.q, p: self.p, t: self.t, l: self.l };
        let pos = super_labels(d.m, d.n, big_k)
            .iter()
            .position(|x| *x == lab)
            .ok_or_else(|| Error::IndexOutOfRange(format!("{self:?}")))?;
        Ok((self.j, big_k, pos + 1))
    }

    pub fn from_spectral(d: Dims, j: usize, big_k: usize, r: usize) -> Result<Self> {
        let labels = super_labels(d.m, d.n, big_k);
        let lab = labels
            .get(r.wrapping_sub(1))
            .ok_or_else(|| Error::IndexOutOfRange(format!("r = {r} in H_{big_k}")))?;
        Ok(SphericalLabel { j, k: lab.ks, p: lab.p, q: lab.q, l: lab.l, t: lab.t })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    SphericalToProduct,
    ProductToSpherical,
}

fn check_harmonic_indices(d: Dims, p: usize, l: usize, q: usize, t: usize) -> Result<()> {
    if q > d.n {
        return Err(Error::IndexConstraintViolated(format!("q = {q}")));
    }
    if l == 0 || l as u64 > dim_bosonic_harmonics(d.m, p) || t == 0 || t as u64 > dim_fermionic_harmonics(d.n, q) {
        return Err(Error::IndexOutOfRange(format!("l = {l}, t = {t} for p = {p}, q = {q}")));
    }
    Ok(())
}

pub fn spherical_to_product(
    d: Dims,
    coeffs: &BTreeMap<SphericalLabel, Complex64>,
) -> Result<BTreeMap<ProductLabel, Complex64>> {
    let mut out = BTreeMap::new();
    for (lab, c) in coeffs {
        check_harmonic_indices(d, lab.p, lab.l, lab.q, lab.t)?;
        check(d, lab.k, lab.q)?;
        let rows = alpha_rows(d, lab.j, lab.k, lab.p, lab.q)?;
        for s in 0..=(d.n - lab.q).min(lab.j + lab.k) {
            let a = rows[lab.j][s];
            let key = ProductLabel { i: lab.j + lab.k - s, p: lab.p, l: lab.l, s, q: lab.q, t: lab.t };
            *out.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c * a;
        }
    }
    Ok(out)
}

pub fn product_to_spherical(
    d: Dims,
    coeffs: &BTreeMap<ProductLabel, Complex64>,
) -> Result<BTreeMap<SphericalLabel, Complex64>> {
    let mut out = BTreeMap::new();
    for (lab, c) in coeffs {
        check_harmonic_indices(d, lab.p, lab.l, lab.q, lab.t)?;
        if lab.s + lab.q > d.n {
            return Err(Error::IndexConstraintViolated(format!("s = {}, q = {}", lab.s, lab.q)));
        }
        for k in 0..=(d.n - lab.q).min(lab.i + lab.s) {
            let b = beta(d, lab.i, lab.s, lab.p, lab.q, k)?;
            let key = SphericalLabel { j: lab.i + lab.s - k, k, p: lab.p, q: lab.q, l: lab.l, t: lab.t };
            *out.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c * b;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::product_function;
    use crate::integrate::inner1;

    fn d31() -> Dims {
        Dims::new(3, 1).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let d = d31();
        assert_eq!(alpha(d, 0, 0, 0, 0, 0).unwrap(), 1.0);
        assert!((alpha(d, 1, 0, 0, 0, 0).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(alpha_squared_s0(d, 1, 0, 0, 0).unwrap(), int(3));
        assert_eq!(alpha(d, 0, 0, 0, 0, 1).unwrap(), 0.0);
        assert!((beta(d, 1, 0, 0, 0, 0).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!(matches!(alpha(d, 0, 2, 0, 0, 0), Err(Error::IndexConstraintViolated(_))));
    }

    #[test]
    fn oracle_matches_full_inner_product() {
        let d = d31();
        for (j, k, p, q, s) in [(0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (0, 1, 0, 0, 1), (1, 1, 1, 0, 0), (1, 0, 1, 1, 0), (2, 1, 0, 0, 1)] {
            let lab = SphericalLabel { j, k, p, q, l: 1, t: 1 };
            let (jj, big_k, r) = lab.to_spectral(d).unwrap();
            let sup = crate::hermite::hermite(crate::hermite::HermiteLabel::new(
                crate::hermite::Family::Super { m: 3, n: 1 },
                jj,
                big_k,
                r,
            ))
            .unwrap();
            let prod = product_function(3, 1, (j + k - s, p, 1), (s, q, 1)).unwrap();
            let ip = inner1(&sup.poly, &prod.poly).unwrap();
            let sq = ip.mul(&ip.conj()).div(&sup.norm2.mul(&prod.norm2)).unwrap();
            let o = alpha_oracle(d, j, k, p, q, s, 1).unwrap();
            assert_eq!(sq, PiScaled::from_rational(o.alpha2.clone()), "{lab:?}");
            assert_eq!(ip.coeff.re.is_negative(), o.alpha < 0.0);
            assert!((o.alpha - alpha(d, j, k, p, q, s).unwrap()).abs() < 1e-12, "{lab:?}");
        }
    }

    #[test]
    fn kronecker_inversion() {
        for (m, n) in [(3, 1), (5, 2)] {
            let d = Dims::new(m, n).unwrap();
            for q in 0..=n {
                for p in 0..=3 {
                    for j in 0..=6 {
                        for k in 0..=n - q {
                            for k2 in 0..=n - q {
                                let mut sum = 0.0;
                                for s in 0..=(n - q).min(j + k) {
                                    sum += alpha(d, j, k, p, q, s).unwrap() * beta(d, j + k - s, s, p, q, k2).unwrap();
                                }
                                let want = if k == k2 { 1.0 } else { 0.0 };
                                assert!((sum - want).abs() < 1e-10, "({m},{n}) j={j} k={k} k'={k2} p={p} q={q}: {sum}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn round_trip() {
        let d = Dims::new(5, 2).unwrap();
        let mut c = BTreeMap::new();
        c.insert(SphericalLabel { j: 3, k: 1, p: 2, q: 1, l: 2, t: 1 }, Complex64::new(0.5, -1.0));
        c.insert(SphericalLabel { j: 0, k: 2, p: 0, q: 0, l: 1, t: 1 }, Complex64::new(2.0, 0.0));
        let back = product_to_spherical(d, &spherical_to_product(d, &c).unwrap()).unwrap();
        for (lab, v) in &back {
            let want = c.get(lab).copied().unwrap_or_default();
            assert!((v - want).norm() < 1e-10);
        }
    }

    #[test]
    fn bound_partial_maxima_are_monotone() {
        let r = bound_report(d31(), 12, 6).unwrap();
        assert!(r.partial_max_total.windows(2).all(|w| w[0] <= w[1]));
        assert!(r.max_ratio_total.is_finite());
    }
}
