//! Spherical harmonics on superspace: bosonic and fermionic bases, the
//! radial factors `f_{k,p,q}`, the Fischer decomposition and the T map.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num::{Complex, One, Zero};
use once_cell::sync::Lazy;
use parking_lot::Mutex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::integrate::gaussian_pairing;
use crate::linalg::{independent_subset, nullspace, rank_mod_p, rank_rational};
use crate::scalar::{
    binomial, factorial, gamma_half, gamma_ratio, int, pochhammer, rat, real, GaussianRational, HalfInt,
    PiScaled, Rational,
};
use crate::superpoly::{Monomial, OperatorKind, SuperPolynomial};

type Poly = SuperPolynomial<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HarmonicKind {
    Bosonic,
    Fermionic,
    Super,
}

/// Label of a super harmonic `f_{ks,p,q} H^b_{p,l} H^f_{q,t}`; `l`, `t` are
/// 1-based positions in the bosonic and fermionic bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SuperLabel {
    pub ks: usize,
    pub q: usize,
    pub p: usize,
    pub t: usize,
    pub l: usize,
}

#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub kind: HarmonicKind,
    pub m: usize,
    pub n: usize,
    pub degree: usize,
    pub elements: Vec<Poly>,
    /// Exact squared norms: on the sphere (bosonic), `<H e|H e>_Lambda`
    /// with the fermionic Gaussian `e` (fermionic), `<H e|H e>_2` (super).
    pub norm2: Vec<PiScaled>,
    /// Super labels; empty for the other kinds.
    pub labels: Vec<SuperLabel>,
    /// Eigenvalue of tilde on the fermionic factor; empty for bosonic.
    pub tilde_eigen: Vec<GaussianRational>,
}

impl HarmonicBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn i_power(q: usize) -> GaussianRational {
    match q % 4 {
        0 => real(int(1)),
        1 => Complex::new(int(0), int(1)),
        2 => real(int(-1)),
        _ => Complex::new(int(0), int(-1)),
    }
}

pub fn dim_polynomials(m: usize, n: usize, k: usize) -> u64 {
    let mut total = 0i64;
    for i in 0..=k.min(2 * n) {
        let b = binomial((k - i + m) as i64 - 1, m as i64 - 1);
        total += i64::try_from(binomial(2 * n as i64, i as i64) * b).unwrap_or(i64::MAX);
    }
    if m == 0 {
        return if k <= 2 * n { binomial(2 * n as i64, k as i64).try_into().unwrap_or(0) } else { 0 };
    }
    total as u64
}

pub fn dim_bosonic_harmonics(m: usize, p: usize) -> u64 {
    if m == 0 {
        return (p == 0) as u64;
    }
    let a = binomial((p + m) as i64 - 1, m as i64 - 1);
    let b = if p >= 2 { binomial((p + m) as i64 - 3, m as i64 - 1) } else { 0.into() };
    (a - b).try_into().unwrap_or(0)
}

pub fn dim_fermionic_harmonics(n: usize, q: usize) -> u64 {
    if q > n {
        return 0;
    }
    let a = binomial(2 * n as i64, q as i64);
    let b = if q >= 2 { binomial(2 * n as i64, q as i64 - 2) } else { 0.into() };
    (a - b).try_into().unwrap_or(0)
}

/// `dim H_k` on `R^{m|2n}`.
pub fn dim_super_harmonics(m: usize, n: usize, k: usize) -> u64 {
    let part = |deg: i64| -> i64 {
        if deg < 0 {
            return 0;
        }
        let deg = deg as usize;
        (0..=deg.min(2 * n))
            .map(|i| {
                let c = binomial(2 * n as i64, i as i64)
                    * binomial((deg - i + m) as i64 - 1, m as i64 - 1);
                i64::try_from(c).unwrap_or(i64::MAX)
            })
            .sum()
    };
    if m == 0 {
        return 0;
    }
    (part(k as i64) - part(k as i64 - 2)).max(0) as u64
}

/// All monomials of total degree `k`.
pub fn monomials_of_degree(m: usize, n: usize, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in 0..=k.min(2 * n) {
        let masks: Vec<u16> = (0u32..(1 << (2 * n))).filter(|x| x.count_ones() as usize == i).map(|x| x as u16).collect();
        let mut exps = Vec::new();
        compositions(k - i, m, &mut vec![0; m], 0, &mut exps);
        for e in &exps {
            for &mask in &masks {
                out.push(Monomial::new(e, mask).expect("small exponents"));
            }
        }
    }
    out
}

fn compositions(total: usize, m: usize, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<Vec<u32>>) {
    if m == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == m - 1 {
        cur[pos] = total as u32;
        out.push(cur.clone());
        return;
    }
    for v in 0..=total {
        cur[pos] = v as u32;
        compositions(total - v, m, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

/// Dimension of the kernel of the super Laplacian on `P_k`, from an exact
/// rank computation.
pub fn laplacian_kernel_dim(m: usize, n: usize, k: usize) -> Result<u64> {
    let cols = monomials_of_degree(m, n, k);
    if k < 2 {
        return Ok(cols.len() as u64);
    }
    let rows = monomials_of_degree(m, n, k - 2);
    let index: HashMap<Monomial, usize> = rows.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut mat = vec![vec![0i64; cols.len()]; rows.len()];
    for (c, t) in cols.iter().enumerate() {
        let img = Poly::from_terms(m, n, [(*t, real(int(1)))])?.apply(OperatorKind::Laplacian)?;
        for (u, v) in img.terms() {
            let r = index[u];
            mat[r][c] = i64::try_from(v.re.to_integer()).expect("small integer entry");
        }
    }
    // rank mod p is a lower bound for the rational rank; full row rank is exact
    let mut rank = rank_mod_p(&mat);
    if rank < rows.len() {
        let q: Vec<Vec<Rational>> = mat.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        rank = rank_rational(&q);
    }
    Ok((cols.len() - rank) as u64)
}

fn embed(p: &Poly, m: usize, n: usize) -> Result<Poly> {
    Poly::from_terms(m, n, p.terms().map(|(t, c)| (*t, c.clone())))
}

static BOSONIC: Lazy<Mutex<HashMap<(usize, usize), Arc<HarmonicBasis>>>> = Lazy::new(Default::default);
static FERMIONIC: Lazy<Mutex<HashMap<(usize, usize), Arc<HarmonicBasis>>>> = Lazy::new(Default::default);
static SUPER: Lazy<Mutex<HashMap<(usize, usize, usize), Arc<HarmonicBasis>>>> = Lazy::new(Default::default);

/// Orthogonal basis of harmonic polynomials of degree `p` in `m` variables,
/// built by separation of variables with Gegenbauer factors.
pub fn bosonic_harmonics(m: usize, p: usize) -> Result<Arc<HarmonicBasis>> {
    if let Some(b) = BOSONIC.lock().get(&(m, p)) {
        return Ok(b.clone());
    }
    let elements = build_bosonic(m, p)?;
    let mut norm2 = Vec::with_capacity(elements.len());
    for h in &elements {
        // int_S h^2 = 2 int h^2 exp(-r^2) / Gamma(p + m/2)
        let g = gaussian_pairing(h, &h.conj())?;
        let gam = gamma_half(HalfInt::from_twice((2 * p + m) as i64))?;
        norm2.push(g.scale_rational(&int(2)).div(&gam)?);
    }
    let basis = Arc::new(HarmonicBasis {
        kind: HarmonicKind::Bosonic,
        m,
        n: 0,
        degree: p,
        elements,
        norm2,
        labels: Vec::new(),
        tilde_eigen: Vec::new(),
    });
    BOSONIC.lock().insert((m, p), basis.clone());
    Ok(basis)
}

fn build_bosonic(m: usize, p: usize) -> Result<Vec<Poly>> {
    let mono = |e: &[u32], c: Rational| Poly::monomial(m, 0, e, 0, real(c));
    match m {
        0 => Err(Error::PurelyFermionic),
        1 => Ok(match p {
            0 => vec![Poly::one(1, 0)?],
            1 => vec![Poly::x(1, 0, 1)?],
            _ => Vec::new(),
        }),
        2 => {
            if p == 0 {
                return Ok(vec![Poly::one(2, 0)?]);
            }
            // real and imaginary parts of (x_1 + i x_2)^p
            let mut re = Poly::zero(2, 0)?;
            let mut im = Poly::zero(2, 0)?;
            for r in 0..=p {
                let c = Rational::from_integer(binomial(p as i64, r as i64));
                let sign = if (r / 2) % 2 == 0 { c } else { -c };
                let t = mono(&[(p - r) as u32, r as u32], sign)?;
                if r % 2 == 0 {
                    re = re.add(&t)?;
                } else {
                    im = im.add(&t)?;
                }
            }
            Ok(vec![re, im])
        }
        _ => {
            let mut out = Vec::new();
            let r2 = Poly::r2(m, 0)?;
            for i in 0..=p {
                let lower = bosonic_harmonics(m - 1, i)?;
                if lower.is_empty() {
                    continue;
                }
                let j = p - i;
                // r^j C_j^lambda(x_m / r), lambda = i + (m - 2)/2
                let lambda = HalfInt::from_twice((2 * i + m) as i64 - 2);
                let mut g = Poly::zero(m, 0)?;
                for s in 0..=j / 2 {
                    let mut c = pochhammer(lambda, (j - s) as u32)
                        * Rational::from_integer(num::BigInt::from(1) << (j - 2 * s))
                        / Rational::from_integer(factorial(s as u64) * factorial((j - 2 * s) as u64));
                    if s % 2 == 1 {
                        c = -c;
                    }
                    let mut e = vec![0u32; m];
                    e[m - 1] = (j - 2 * s) as u32;
                    g = g.add(&mono(&e, c)?.mul(&r2.pow(s as u32)?)?)?;
                }
                for h in &lower.elements {
                    out.push(g.mul(&embed(h, m, 0)?)?);
                }
            }
            Ok(out)
        }
    }
}

fn lambda_inner_weighted(a: &GrassmannElement<Rational>, b: &GrassmannElement<Rational>) -> Result<PiScaled> {
    let e = GrassmannElement::<Rational>::exp_theta2(a.n(), &rat(-1, 2))?;
    a.mul(&e)?.inner_lambda(&b.mul(&e)?)
}

/// Harmonic elements of degree `q` in the Grassmann algebra on `2n`
/// generators, eigenvectors of tilde, orthogonal for `<H e|H e>_Lambda`.
pub fn fermionic_harmonics(n: usize, q: usize) -> Result<Arc<HarmonicBasis>> {
    if let Some(b) = FERMIONIC.lock().get(&(n, q)) {
        return Ok(b.clone());
    }
    let basis = Arc::new(build_fermionic(n, q)?);
    FERMIONIC.lock().insert((n, q), basis.clone());
    Ok(basis)
}

fn build_fermionic(n: usize, q: usize) -> Result<HarmonicBasis> {
    let empty = |elements, norm2, tilde_eigen| HarmonicBasis {
        kind: HarmonicKind::Fermionic,
        m: 0,
        n,
        degree: q,
        elements,
        norm2,
        labels: Vec::new(),
        tilde_eigen,
    };
    if q > n {
        return Ok(empty(Vec::new(), Vec::new(), Vec::new()));
    }
    let masks = |d: usize| -> Vec<u16> {
        (0u32..(1 << (2 * n))).filter(|x| x.count_ones() as usize == d).map(|x| x as u16).collect()
    };
    let cols = masks(q);
    let null: Vec<Vec<Rational>> = if q < 2 {
        nullspace(&[], cols.len())
    } else {
        let rows = masks(q - 2);
        let idx: HashMap<u16, usize> = rows.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut mat = vec![vec![Rational::zero(); cols.len()]; rows.len()];
        for (c, &mask) in cols.iter().enumerate() {
            for j in 0..n {
                let pair = 0b11u16 << (2 * j);
                if mask & pair == pair {
                    mat[idx[&(mask & !pair)]][c] += int(4);
                }
            }
        }
        nullspace(&mat, cols.len())
    };
    let lambda = i_power(q);
    let to_elem = |v: &[GaussianRational]| {
        GrassmannElement::<Rational>::from_terms(n, cols.iter().zip(v).map(|(m, c)| (*m, c.clone())))
    };
    let coords = |g: &GrassmannElement<Rational>| -> Vec<GaussianRational> { cols.iter().map(|m| g.coeff(*m)).collect() };
    let mut elements = Vec::new();
    let mut norm2 = Vec::new();
    let mut tilde_eigen = Vec::new();
    let half = real(rat(1, 2));
    for eig in [-lambda.clone(), lambda.clone()] {
        // (1 + tilde / eig) / 2 projects on the eig-eigenspace
        let mut images = Vec::new();
        for v in &null {
            let g = to_elem(&v.iter().map(|c| real(c.clone())).collect::<Vec<_>>())?;
            let img = g.add(&g.tilde().scale(&(real(int(1)) / &eig)))?.scale(&half);
            images.push(coords(&img));
        }
        let chosen = independent_subset(&images);
        let mut ortho: Vec<(GrassmannElement<Rational>, PiScaled)> = Vec::new();
        for i in chosen {
            let mut w = to_elem(&images[i])?;
            for (u, nu) in &ortho {
                let c = lambda_inner_weighted(&w, u)?.div(nu)?;
                w = w.sub(&u.scale(&c.coeff))?;
            }
            let nw = lambda_inner_weighted(&w, &w)?;
            ortho.push((w, nw));
        }
        for (w, nw) in ortho {
            debug_assert_eq!(w.tilde(), w.scale(&eig));
            elements.push(Poly::from_grassmann(0, &w)?);
            norm2.push(nw);
            tilde_eigen.push(eig.clone());
        }
    }
    Ok(empty(elements, norm2, tilde_eigen))
}

fn check_kpq(n: usize, k: usize, q: usize) -> Result<()> {
    if q > n || k + q > n {
        return Err(Error::IndexConstraintViolated(format!("k = {k}, q = {q} with n = {n}")));
    }
    Ok(())
}

fn require_positive_superdim(m: usize, n: usize) -> Result<()> {
    if m as i64 - 2 * n as i64 <= 0 {
        return Err(Error::NonPositiveSuperDimension { m, n });
    }
    Ok(())
}

/// Coefficients `a_s` of `f_{k,p,q} = sum_s a_s r^{2k-2s} theta^{2s}`.
pub fn f_kpq_coeffs(m: usize, n: usize, k: usize, p: usize, q: usize) -> Result<Vec<Rational>> {
    check_kpq(n, k, q)?;
    let base = HalfInt::from_twice((m + 2 * p + 2 * k) as i64);
    Ok((0..=k)
        .map(|s| {
            // C(k,s) (n-q-s)!/(n-q-k)! Gamma(m/2+p+k)/Gamma(m/2+p+k-s)
            Rational::from_integer(binomial(k as i64, s as i64) * factorial((n - q - s) as u64))
                / Rational::from_integer(factorial((n - q - k) as u64))
                * pochhammer(base.add_int(-(s as i64)), s as u32)
        })
        .collect())
}

pub fn f_kpq(m: usize, n: usize, k: usize, p: usize, q: usize) -> Result<Poly> {
    let coeffs = f_kpq_coeffs(m, n, k, p, q)?;
    let r2 = Poly::r2(m, n)?;
    let t2 = Poly::theta2(m, n)?;
    let mut out = Poly::zero(m, n)?;
    for (s, a) in coeffs.iter().enumerate() {
        let t = r2.pow((k - s) as u32)?.mul(&t2.pow(s as u32)?)?;
        out = out.add(&t.scale_rational(a))?;
    }
    Ok(out)
}

/// `a_{k,p,q} = Gamma(M/2+p+q+2k-1) / Gamma(M/2+p+q+k-1)`.
pub fn a_kpq(m: usize, n: usize, k: usize, p: usize, q: usize) -> Result<PiScaled> {
    check_kpq(n, k, q)?;
    let big_m = m as i64 - 2 * n as i64;
    let x = HalfInt::from_twice(big_m + 2 * (p + q + k) as i64 - 2);
    Ok(PiScaled::from_rational(pochhammer(x, k as u32)))
}

/// `b_{k,p,q} = k! Gamma(m/2+p+k) / (Gamma(2k+M/2+p+q) (n-q-k)!)`.
pub fn b_kpq(m: usize, n: usize, k: usize, p: usize, q: usize) -> Result<PiScaled> {
    check_kpq(n, k, q)?;
    let big_m = m as i64 - 2 * n as i64;
    let num = HalfInt::from_twice((m + 2 * p + 2 * k) as i64);
    let den = HalfInt::from_twice(big_m + 2 * (2 * k + p + q) as i64);
    let r = gamma_ratio(num, den)? * Rational::from_integer(factorial(k as u64))
        / Rational::from_integer(factorial((n - q - k) as u64));
    Ok(PiScaled::from_rational(r))
}

/// Labels of `H_k` in basis order, from dimension counts only.
pub fn super_labels(m: usize, n: usize, k: usize) -> Vec<SuperLabel> {
    let mut out = Vec::new();
    for ks in 0..=n.min(k / 2) {
        for q in 0..=n {
            if ks + q > n || 2 * ks + q > k {
                continue;
            }
            let p = k - 2 * ks - q;
            let db = dim_bosonic_harmonics(m, p) as usize;
            let df = dim_fermionic_harmonics(n, q) as usize;
            for t in 1..=df {
                for l in 1..=db {
                    out.push(SuperLabel { ks, q, p, t, l });
                }
            }
        }
    }
    out
}

/// Basis of `H_k` made of `f_{ks,p,q} H^b_p H^f_q`, orthogonal for `<.|.>_2`.
pub fn super_harmonic_basis(m: usize, n: usize, k: usize) -> Result<Arc<HarmonicBasis>> {
    require_positive_superdim(m, n)?;
    if let Some(b) = SUPER.lock().get(&(m, n, k)) {
        return Ok(b.clone());
    }
    let labels = super_labels(m, n, k);
    let mut elements = Vec::with_capacity(labels.len());
    let mut norm2 = Vec::with_capacity(labels.len());
    let mut tilde_eigen = Vec::with_capacity(labels.len());
    let mut cache: HashMap<(usize, usize, usize), (Poly, Arc<HarmonicBasis>, Arc<HarmonicBasis>)> = HashMap::new();
    for lab in &labels {
        let key = (lab.ks, lab.p, lab.q);
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            let f = f_kpq(m, n, lab.ks, lab.p, lab.q)?;
            e.insert((f, bosonic_harmonics(m, lab.p)?, fermionic_harmonics(n, lab.q)?));
        }
        let (f, hb, hf) = &cache[&key];
        let x = f
            .mul(&embed(&hb.elements[lab.l - 1], m, n)?)?
            .mul(&embed(&hf.elements[lab.t - 1], m, n)?)?;
        let eps = hf.tilde_eigen[lab.t - 1].clone();
        // T(conj X) = (-1)^ks conj(eps) conj(X)
        let mut factor = eps.conj();
        if lab.ks % 2 == 1 {
            factor = -factor;
        }
        let g = gaussian_pairing(&x, &x.conj())?.scale(&factor);
        elements.push(x);
        norm2.push(g);
        tilde_eigen.push(eps);
    }
    let basis = Arc::new(HarmonicBasis {
        kind: HarmonicKind::Super,
        m,
        n,
        degree: k,
        elements,
        norm2,
        labels,
        tilde_eigen,
    });
    SUPER.lock().insert((m, n, k), basis.clone());
    Ok(basis)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FischerComponent {
    pub j: usize,
    pub k: usize,
    pub harmonic: Poly,
}

/// `P = sum R^{2j} H_k` with every `H_k` harmonic.
pub fn fischer_decompose(p: &Poly) -> Result<Vec<FischerComponent>> {
    require_positive_superdim(p.m(), p.n())?;
    let big_m = p.superdim();
    let r2 = Poly::big_r2(p.m(), p.n())?;
    let mut out = Vec::new();
    for (d, part) in p.homogeneous_parts() {
        let d = d as usize;
        let mut rest = part;
        for j in (0..=d / 2).rev() {
            let l = (d - 2 * j) as i64;
            let mut lap = rest.clone();
            let mut c = Rational::one();
            for i in 1..=j as i64 {
                lap = lap.apply(OperatorKind::Laplacian)?;
                c *= int(2 * i * (2 * l + big_m + 2 * i - 2));
            }
            if lap.is_zero() {
                continue;
            }
            let h = lap.scale_rational(&c.recip());
            rest = rest.sub(&r2.pow(j as u32)?.mul(&h)?)?;
            out.push(FischerComponent { j, k: l as usize, harmonic: h });
        }
        debug_assert!(rest.is_zero());
    }
    out.sort_by_key(|c| (c.j, c.k));
    Ok(out)
}

fn project(h: &Poly, op: OperatorKind, target: &Rational, others: &[Rational]) -> Result<Poly> {
    let mut acc = h.clone();
    for w in others {
        let shifted = acc.apply(op)?.sub(&acc.scale_rational(w))?;
        acc = shifted.scale_rational(&(target - w).recip());
    }
    Ok(acc)
}

/// Split a harmonic of degree `k` into its `(ks, p, q)` components.
pub fn split_harmonic(h: &Poly, k: usize) -> Result<Vec<((usize, usize, usize), Poly)>> {
    let (m, n) = (h.m(), h.n());
    let cands: Vec<(usize, usize, usize)> = (0..=n)
        .flat_map(|q| (0..=n - q).map(move |ks| (ks, q)))
        .filter(|&(ks, q)| 2 * ks + q <= k)
        .map(|(ks, q)| (ks, k - 2 * ks - q, q))
        .collect();
    if cands.len() == 1 {
        return Ok(vec![(cands[0], h.clone())]);
    }
    let qs: BTreeSet<usize> = cands.iter().map(|c| c.2).collect();
    let eig_f = |q: usize| int(q as i64 * (2 * n as i64 + 2 - q as i64));
    let eig_b = |p: usize| int(-(p as i64) * (p as i64 + m as i64 - 2));
    let mut out = Vec::new();
    for &q in &qs {
        let others: Vec<Rational> = qs.iter().filter(|&&x| x != q).map(|&x| eig_f(x)).collect();
        let hq = project(h, OperatorKind::LaplaceBeltramiF, &eig_f(q), &others)?;
        if hq.is_zero() {
            continue;
        }
        let ps: Vec<usize> = cands.iter().filter(|c| c.2 == q).map(|c| c.1).collect();
        for &(ks, p, cq) in cands.iter().filter(|c| c.2 == q) {
            let others: Vec<Rational> = ps.iter().filter(|&&x| x != p).map(|&x| eig_b(x)).collect();
            let piece = project(&hq, OperatorKind::LaplaceBeltramiB, &eig_b(p), &others)?;
            if !piece.is_zero() {
                out.push(((ks, p, cq), piece));
            }
        }
    }
    Ok(out)
}

/// `T[R^{2j} f_{k,p,q} H^b H^f e] = (-1)^k R^{2j} f_{k,p,q} H^b tilde(H^f) e`,
/// extended linearly; acts on the polynomial factor.
pub fn t_map(p: &Poly) -> Result<Poly> {
    let (m, n) = (p.m(), p.n());
    let r2 = Poly::big_r2(m, n)?;
    let mut out = Poly::zero(m, n)?;
    let mut by_j: BTreeMap<usize, Poly> = BTreeMap::new();
    for comp in fischer_decompose(p)? {
        let mut image = Poly::zero(m, n)?;
        for ((ks, _p, q), piece) in split_harmonic(&comp.harmonic, comp.k)? {
            let mut t = tilde_on_harmonic_factor(&piece, q);
            if ks % 2 == 1 {
                t = t.neg();
            }
            image = image.add(&t)?;
        }
        let slot = by_j.entry(comp.j).or_insert_with(|| Poly::zero(m, n).expect("valid dims"));
        *slot = slot.add(&image)?;
    }
    for (j, img) in by_j {
        out = out.add(&r2.pow(j as u32)?.mul(&img)?)?;
    }
    Ok(out)
}

/// On `theta^{2s} H^f_q` (times bosonic factors) apply tilde to `H^f_q` only:
/// `tilde(theta^{2s} h) = (-1)^s theta^{2s} tilde(h)`.
fn tilde_on_harmonic_factor(piece: &Poly, q: usize) -> Poly {
    let t = piece.tilde_fermionic();
    let odd_s = t.filter(|mono| ((mono.fermionic_degree() as usize - q) / 2) % 2 == 1);
    let even_s = t.filter(|mono| ((mono.fermionic_degree() as usize - q) / 2).is_multiple_of(2));
    even_s.sub(&odd_s).expect("same dims")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_examples() {
        assert_eq!(dim_super_harmonics(3, 1, 1), 5);
        assert_eq!(dim_super_harmonics(3, 1, 2), 12);
        assert_eq!(dim_super_harmonics(3, 1, 3), 20);
        assert_eq!(dim_bosonic_harmonics(3, 2), 5);
        assert_eq!(dim_fermionic_harmonics(2, 2), 5);
        for k in 0..6 {
            assert_eq!(laplacian_kernel_dim(3, 1, k).unwrap(), dim_super_harmonics(3, 1, k));
        }
    }

    #[test]
    fn bosonic_bases_are_harmonic_and_orthogonal() {
        for m in 1..=5 {
            for p in 0..=4 {
                let b = bosonic_harmonics(m, p).unwrap();
                assert_eq!(b.len() as u64, dim_bosonic_harmonics(m, p), "m={m} p={p}");
                for (i, h) in b.elements.iter().enumerate() {
                    assert!(h.apply(OperatorKind::Laplacian).unwrap().is_zero());
                    for g in &b.elements[..i] {
                        assert!(gaussian_pairing(h, g).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_norm_of_one() {
        let b = bosonic_harmonics(3, 0).unwrap();
        assert_eq!(b.norm2[0], PiScaled::real(int(4), 2));
    }

    #[test]
    fn fermionic_n1() {
        let b0 = fermionic_harmonics(1, 0).unwrap();
        assert_eq!(b0.len(), 1);
        assert_eq!(b0.norm2[0], PiScaled::real(int(1), -2));
        let b1 = fermionic_harmonics(1, 1).unwrap();
        assert_eq!(b1.len(), 2);
        // x`_1 + i x`_2 has tilde eigenvalue -i
        let x1 = Poly::xf(0, 1, 1).unwrap();
        let x2 = Poly::xf(0, 1, 2).unwrap();
        let i = Complex::new(int(0), int(1));
        let want = x1.add(&x2.scale(&i)).unwrap();
        let got = &b1.elements[0];
        let c = got.coeff(&Monomial::new(&[], 1).unwrap());
        assert_eq!(got.scale(&(real(int(1)) / c)), want);
        assert_eq!(b1.tilde_eigen[0], -i);
    }

    #[test]
    fn fermionic_bases() {
        for n in 1..=3 {
            for q in 0..=n {
                let b = fermionic_harmonics(n, q).unwrap();
                assert_eq!(b.len() as u64, dim_fermionic_harmonics(n, q));
                for (h, eps) in b.elements.iter().zip(&b.tilde_eigen) {
                    assert!(h.apply(OperatorKind::Laplacian).unwrap().is_zero());
                    assert_eq!(h.tilde_fermionic(), h.scale(eps));
                }
            }
        }
    }

    #[test]
    fn f_kpq_example() {
        let f = f_kpq(3, 1, 1, 0, 0).unwrap();
        let want = Poly::r2(3, 1).unwrap().add(&Poly::theta2(3, 1).unwrap().scale_rational(&rat(3, 2))).unwrap();
        assert_eq!(f, want);
        assert!(f.apply(OperatorKind::Laplacian).unwrap().is_zero());
        assert!(matches!(f_kpq(3, 1, 2, 0, 0), Err(Error::IndexConstraintViolated(_))));
        assert_eq!(b_kpq(3, 1, 0, 0, 0).unwrap(), PiScaled::from_rational(rat(1, 2)));
    }

    #[test]
    fn super_basis_is_harmonic() {
        for (m, n) in [(3, 1), (5, 2)] {
            for k in 0..=3 {
                let b = super_harmonic_basis(m, n, k).unwrap();
                assert_eq!(b.len() as u64, dim_super_harmonics(m, n, k));
                for h in &b.elements {
                    assert!(h.apply(OperatorKind::Laplacian).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn fischer_example() {
        let x1sq = Poly::x(3, 1, 1).unwrap().pow(2).unwrap();
        let comps = fischer_decompose(&x1sq).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!((comps[0].j, comps[0].k), (0, 2));
        assert_eq!(comps[0].harmonic, x1sq.sub(&Poly::big_r2(3, 1).unwrap()).unwrap());
        assert_eq!((comps[1].j, comps[1].k), (1, 0));
        assert_eq!(comps[1].harmonic, Poly::one(3, 1).unwrap());
    }

    #[test]
    fn t_map_on_basis() {
        let (m, n) = (3, 1);
        for k in 0..=3 {
            let b = super_harmonic_basis(m, n, k).unwrap();
            for ((h, lab), eps) in b.elements.iter().zip(&b.labels).zip(&b.tilde_eigen) {
                let mut want = h.scale(eps);
                if lab.ks % 2 == 1 {
                    want = want.neg();
                }
                assert_eq!(t_map(h).unwrap(), want);
            }
        }
    }

    #[test]
    fn super_norms_closed_form() {
        use crate::integrate::inner2;
        for (m, n) in [(3, 1), (5, 2)] {
            let big_m = m as i64 - 2 * n as i64;
            for k in 0..=3 {
                let b = super_harmonic_basis(m, n, k).unwrap();
                for (i, (x, lab)) in b.elements.iter().zip(&b.labels).enumerate() {
                    let hb = bosonic_harmonics(m, lab.p).unwrap();
                    let hf = fermionic_harmonics(n, lab.q).unwrap();
                    let ab = a_kpq(m, n, lab.ks, lab.p, lab.q).unwrap().mul(&b_kpq(m, n, lab.ks, lab.p, lab.q).unwrap());
                    let want = ab
                        .mul(&hb.norm2[lab.l - 1])
                        .mul(&hf.norm2[lab.t - 1])
                        .scale_rational(&Rational::from_integer(factorial((n - lab.q) as u64)))
                        .mul(&gamma_half(HalfInt::from_twice(big_m + 2 * k as i64)).unwrap())
                        .scale_rational(&rat(1, 2));
                    assert_eq!(b.norm2[i], want, "({m},{n}) k={k} {lab:?}");
                    if m == 3 {
                        assert_eq!(inner2(x, x).unwrap(), b.norm2[i]);
                        for y in &b.elements[..i] {
                            assert!(inner2(x, y).unwrap().is_zero());
                        }
                    }
                }
            }
        }
    }
}
