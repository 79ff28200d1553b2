//! Generalized Laguerre polynomials, the bosonic, fermionic and super Hermite
//! functions, and the oscillator ladder on Gaussian-weighted polynomials.

use std::collections::HashMap;
use std::sync::Arc;

use num::Zero;
use once_cell::sync::Lazy;
use parking_lot::Mutex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::harmonics::{bosonic_harmonics, fermionic_harmonics, super_harmonic_basis};
use crate::scalar::{factorial, gamma_half, int, pochhammer, rat, GaussianRational, HalfInt, PiScaled, Rational};
use crate::superpoly::{OperatorKind, SuperPolynomial};

type Poly = SuperPolynomial<Rational>;

static LAGUERRE: Lazy<Mutex<HashMap<(usize, i64), Arc<Vec<Rational>>>>> = Lazy::new(Default::default);

/// Coefficients `c_i` of `L_j^alpha(t) = sum_i c_i t^i`.
pub fn laguerre(j: usize, alpha: HalfInt) -> Arc<Vec<Rational>> {
    let key = (j, alpha.twice());
    if let Some(c) = LAGUERRE.lock().get(&key) {
        return c.clone();
    }
    let coeffs: Vec<Rational> = (0..=j)
        .map(|i| {
            let c = pochhammer(alpha.add_int(i as i64 + 1), (j - i) as u32)
                / Rational::from_integer(factorial(i as u64) * factorial((j - i) as u64));
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let coeffs = Arc::new(coeffs);
    LAGUERRE.lock().insert(key, coeffs.clone());
    coeffs
}

/// `L_j^alpha(t)` in double precision by the three-term recurrence.
pub fn laguerre_f64(j: usize, alpha: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if j == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - t;
    for k in 1..j {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - t) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_j^alpha(u)` for a polynomial argument `u`.
pub fn laguerre_of(j: usize, alpha: HalfInt, u: &Poly) -> Result<Poly> {
    let c = laguerre(j, alpha);
    let mut out = Poly::zero(u.m(), u.n())?;
    let mut pow = Poly::one(u.m(), u.n())?;
    for (i, ci) in c.iter().enumerate() {
        if i > 0 {
            pow = pow.mul(u)?;
        }
        if !ci.is_zero() {
            out = out.add(&pow.scale_rational(ci))?;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Hermite functions on `R^{m|2n}`, orthonormal for `<.|.>_2`.
    Super { m: usize, n: usize },
    /// Hermite functions on `R^m`; also used with `m = M`.
    Bosonic { m: usize },
    /// Hermite functions in `Lambda_{2n}`, orthonormal for `<.|.>_Lambda`.
    Fermionic { n: usize },
}

/// `(j, k, l)` for the bosonic and super families, `(s, q, t)` for the
/// fermionic one. `l` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HermiteLabel {
    pub family: Family,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl HermiteLabel {
    pub fn new(family: Family, j: usize, k: usize, l: usize) -> Self {
        HermiteLabel { family, j, k, l }
    }
}

/// `poly * exp(-R^2/2)` (resp. `r^2`, `theta^2`) with `poly = L * H`, and its
/// exact squared norm in the family's inner product.
#[derive(Clone, Debug)]
pub struct HermiteFunction {
    pub label: HermiteLabel,
    pub poly: Poly,
    pub norm2: PiScaled,
}

impl HermiteFunction {
    /// The normalized function in double precision.
    pub fn normalized(&self) -> SuperPolynomial<f64> {
        let s = 1.0 / self.norm2.to_f64().sqrt();
        self.poly.to_float().scale_real(&s)
    }
}

fn check_l(l: usize, dim: usize) -> Result<()> {
    if l == 0 || l > dim {
        return Err(Error::IndexOutOfRange(format!("l = {l} with {dim} harmonics")));
    }
    Ok(())
}

pub fn hermite(label: HermiteLabel) -> Result<HermiteFunction> {
    let HermiteLabel { family, j, k, l } = label;
    match family {
        Family::Super { m, n } => {
            let basis = super_harmonic_basis(m, n, k)?;
            check_l(l, basis.len())?;
            let big_m = m as i64 - 2 * n as i64;
            let alpha = HalfInt::from_twice(big_m + 2 * k as i64 - 2);
            let lag = laguerre_of(j, alpha, &Poly::big_r2(m, n)?)?;
            let poly = lag.mul(&basis.elements[l - 1])?;
            // the Laguerre factor scales the norm by (k + M/2)_j / j!
            let f = pochhammer(HalfInt::from_twice(big_m + 2 * k as i64), j as u32)
                / Rational::from_integer(factorial(j as u64));
            Ok(HermiteFunction { label, poly, norm2: basis.norm2[l - 1].scale_rational(&f) })
        }
        Family::Bosonic { m } => {
            let basis = bosonic_harmonics(m, k)?;
            check_l(l, basis.len())?;
            let alpha = HalfInt::from_twice((m + 2 * k) as i64 - 2);
            let poly = laguerre_of(j, alpha, &Poly::r2(m, 0)?)?.mul(&basis.elements[l - 1])?;
            // zeta^2 = Gamma(j + k + m/2) / (2 j!)
            let zeta2 = gamma_half(HalfInt::from_twice((2 * j + 2 * k + m) as i64))?
                .scale_rational(&(rat(1, 2) / Rational::from_integer(factorial(j as u64))));
            Ok(HermiteFunction { label, poly, norm2: basis.norm2[l - 1].mul(&zeta2) })
        }
        Family::Fermionic { n } => {
            let (s, q) = (j, k);
            if s + q > n {
                return Err(Error::IndexConstraintViolated(format!("s = {s}, q = {q} with n = {n}")));
            }
            let basis = fermionic_harmonics(n, q)?;
            check_l(l, basis.len())?;
            let alpha = HalfInt::from_int(q as i64 - n as i64 - 1);
            let poly = laguerre_of(s, alpha, &Poly::theta2(0, n)?)?.mul(&basis.elements[l - 1])?;
            let norm2 = fermionic_weighted_norm2(&poly)?;
            Ok(HermiteFunction { label, poly, norm2 })
        }
    }
}

fn to_grassmann(p: &Poly) -> Result<GrassmannElement<Rational>> {
    GrassmannElement::from_terms(p.n(), p.terms().map(|(t, c)| (t.mask(), c.clone())))
}

fn fermionic_weighted_norm2(p: &Poly) -> Result<PiScaled> {
    let e = GrassmannElement::<Rational>::exp_theta2(p.n(), &rat(-1, 2))?;
    let g = to_grassmann(p)?.mul(&e)?;
    g.inner_lambda(&g)
}

/// `phi^b_{i,p,l} phi^f_{s,q,t}` on `R^{m|2n}`: polynomial factor and exact
/// squared `<.|.>_1` norm.
pub fn product_function(m: usize, n: usize, bos: (usize, usize, usize), ferm: (usize, usize, usize)) -> Result<HermiteFunction> {
    let b = hermite(HermiteLabel::new(Family::Bosonic { m }, bos.0, bos.1, bos.2))?;
    let f = hermite(HermiteLabel::new(Family::Fermionic { n }, ferm.0, ferm.1, ferm.2))?;
    let pb = Poly::from_terms(m, n, b.poly.terms().map(|(t, c)| (*t, c.clone())))?;
    let pf = Poly::from_terms(m, n, f.poly.terms().map(|(t, c)| (*t, c.clone())))?;
    Ok(HermiteFunction {
        label: HermiteLabel::new(Family::Super { m, n }, bos.0, bos.1, bos.2),
        poly: pb.mul(&pf)?,
        norm2: b.norm2.mul(&f.norm2),
    })
}

/// Which Gaussian a polynomial factor is weighted with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Weight {
    /// `exp(-R^2/2)` with the full operators.
    Full,
    /// `exp(-r^2/2)` with the bosonic operators only.
    Bosonic,
    /// `exp(-theta^2/2)` with the fermionic operators only.
    Fermionic,
}

struct WeightOps {
    lap: OperatorKind,
    euler: OperatorKind,
    square: OperatorKind,
    dim: i64,
}

fn weight_ops(w: Weight, p: &Poly) -> WeightOps {
    match w {
        Weight::Full => WeightOps {
            lap: OperatorKind::Laplacian,
            euler: OperatorKind::Euler,
            square: OperatorKind::R2Mul,
            dim: p.superdim(),
        },
        Weight::Bosonic => WeightOps {
            lap: OperatorKind::LaplacianB,
            euler: OperatorKind::EulerB,
            square: OperatorKind::RB2Mul,
            dim: p.m() as i64,
        },
        Weight::Fermionic => WeightOps {
            lap: OperatorKind::LaplacianF,
            euler: OperatorKind::EulerF,
            square: OperatorKind::Theta2Mul,
            dim: -2 * p.n() as i64,
        },
    }
}

/// `Q` with `nabla^2 (P exp(-R^2/2)) = Q exp(-R^2/2)`.
pub fn weighted_laplacian(w: Weight, p: &Poly) -> Result<Poly> {
    let o = weight_ops(w, p);
    let lap = p.apply(o.lap)?;
    let e = p.apply(o.euler)?.scale_rational(&int(2));
    let sq = p.apply(o.square)?;
    lap.sub(&e)?.sub(&p.scale_rational(&int(o.dim)))?.add(&sq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ladder {
    /// `nabla^2 + R^2 - 2E - M`
    Raise,
    /// `nabla^2 + R^2 + 2E + M`
    Lower,
    /// `(R^2 - nabla^2) / 2`
    Hamiltonian,
}

/// Apply a ladder operator to `P exp(-R^2/2)`; returns the new polynomial
/// factor.
pub fn ladder_apply(which: Ladder, w: Weight, p: &Poly) -> Result<Poly> {
    let o = weight_ops(w, p);
    let lap = p.apply(o.lap)?;
    match which {
        Ladder::Lower => Ok(lap),
        Ladder::Raise => {
            let e = p.apply(o.euler)?.scale_rational(&int(4));
            let sq = p.apply(o.square)?.scale_rational(&int(4));
            lap.sub(&e)?.sub(&p.scale_rational(&int(2 * o.dim)))?.add(&sq)
        }
        Ladder::Hamiltonian => {
            let e = p.apply(o.euler)?.scale_rational(&int(2));
            Ok(e.add(&p.scale_rational(&int(o.dim)))?.sub(&lap)?.scale_rational(&rat(1, 2)))
        }
    }
}

/// `c` with `a = c b`, if it exists.
pub fn collinear_ratio(a: &Poly, b: &Poly) -> Option<GaussianRational> {
    if b.is_zero() {
        return if a.is_zero() { Some(GaussianRational::zero()) } else { None };
    }
    let (t, cb) = b.terms().next()?;
    let c = a.coeff(t) / cb.clone();
    if a == &b.scale(&c) {
        Some(c)
    } else {
        None
    }
}

/// Energy `2j + k + M/2` of the super Hermite function as an exact rational.
pub fn oscillator_energy(big_m: i64, j: usize, k: usize) -> Rational {
    int(2 * j as i64 + k as i64) + rat(big_m, 2)
}

/// `sqrt` argument of the raising coefficient squared: `16 (j+1)(j+k+M/2)`.
pub fn raise_factor2(big_m: i64, j: usize, k: usize) -> Rational {
    int(16 * (j as i64 + 1)) * (int(j as i64 + k as i64) + rat(big_m, 2))
}

/// `16 j (j+k+M/2-1)`.
pub fn lower_factor2(big_m: i64, j: usize, k: usize) -> Rational {
    int(16 * j as i64) * (int(j as i64 + k as i64 - 1) + rat(big_m, 2))
}

pub fn real_part(r: &GaussianRational) -> Option<Rational> {
    r.im.is_zero().then(|| r.re.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{inner1, inner2};

    #[test]
    fn laguerre_examples() {
        assert_eq!(*laguerre(0, HalfInt::from_twice(7)), vec![int(1)]);
        assert_eq!(*laguerre(1, HalfInt::from_twice(1)), vec![rat(3, 2), int(-1)]);
        assert_eq!(*laguerre(1, HalfInt::from_int(-2)), vec![int(-1), int(-1)]);
        let c = laguerre(4, HalfInt::from_twice(3));
        let t: f64 = 0.7;
        let exact: f64 = c.iter().enumerate().map(|(i, x)| crate::scalar::rational_to_f64(x) * t.powi(i as i32)).sum();
        assert!((exact - laguerre_f64(4, 1.5, t)).abs() < 1e-12);
    }

    #[test]
    fn super_norm_matches_inner2() {
        for k in 0..=2 {
            for j in 0..=2 {
                let h = hermite(HermiteLabel::new(Family::Super { m: 3, n: 1 }, j, k, 1)).unwrap();
                assert_eq!(inner2(&h.poly, &h.poly).unwrap(), h.norm2);
            }
        }
        let h = hermite(HermiteLabel::new(Family::Super { m: 3, n: 1 }, 1, 0, 1)).unwrap();
        let want = laguerre_of(1, HalfInt::from_twice(-1), &Poly::big_r2(3, 1).unwrap()).unwrap();
        assert_eq!(h.poly, want);
    }

    #[test]
    fn bosonic_norm_matches_integral() {
        for (j, k) in [(0, 0), (2, 1), (1, 3)] {
            let h = hermite(HermiteLabel::new(Family::Bosonic { m: 3 }, j, k, 1)).unwrap();
            let direct = crate::integrate::gaussian_pairing(&h.poly, &h.poly.conj()).unwrap();
            assert_eq!(direct, h.norm2);
        }
    }

    #[test]
    fn fermionic_functions_orthonormal() {
        for n in 1..=3 {
            let mut all = Vec::new();
            for s in 0..=n {
                for q in 0..=n - s {
                    let d = fermionic_harmonics(n, q).unwrap().len();
                    for t in 1..=d {
                        all.push(hermite(HermiteLabel::new(Family::Fermionic { n }, s, q, t)).unwrap());
                    }
                }
            }
            // they span Lambda_{2n}
            assert_eq!(all.len(), 1 << (2 * n));
            let e = GrassmannElement::<Rational>::exp_theta2(n, &rat(-1, 2)).unwrap();
            let gs: Vec<_> = all.iter().map(|h| to_grassmann(&h.poly).unwrap().mul(&e).unwrap()).collect();
            for (a, ha) in gs.iter().zip(&all) {
                let (s, q) = (ha.label.j, ha.label.k);
                // normalized norm is one: norm2 s! (n-s-q)! = N_H (n-q)!
                let nh = &fermionic_harmonics(n, q).unwrap().norm2[ha.label.l - 1];
                let f = Rational::from_integer(factorial(s as u64) * factorial((n - s - q) as u64));
                let g = Rational::from_integer(factorial((n - q) as u64));
                assert_eq!(ha.norm2.scale_rational(&f), nh.scale_rational(&g));
                for b in &gs {
                    if !std::ptr::eq(a, b) {
                        assert!(a.inner_lambda(b).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_relations_exact() {
        let (m, n) = (3, 1);
        let big_m = 1;
        for k in 0..=2 {
            for j in 0..=3 {
                let fam = Family::Super { m, n };
                let h = hermite(HermiteLabel::new(fam, j, k, 1)).unwrap();
                let hn = hermite(HermiteLabel::new(fam, j + 1, k, 1)).unwrap();
                let ham = ladder_apply(Ladder::Hamiltonian, Weight::Full, &h.poly).unwrap();
                assert_eq!(ham, h.poly.scale_rational(&oscillator_energy(big_m, j, k)));
                let up = ladder_apply(Ladder::Raise, Weight::Full, &h.poly).unwrap();
                let c = real_part(&collinear_ratio(&up, &hn.poly).unwrap()).unwrap();
                assert!(c < Rational::zero());
                let ratio = hn.norm2.div(&h.norm2).unwrap();
                assert_eq!(ratio.scale_rational(&(&c * &c)), PiScaled::from_rational(raise_factor2(big_m, j, k)));
                let down = ladder_apply(Ladder::Lower, Weight::Full, &up).unwrap();
                assert_eq!(down, h.poly.scale_rational(&(&c * &c)).scale_rational(&ratio_to_rational(&ratio)));
                if j == 0 {
                    assert!(ladder_apply(Ladder::Lower, Weight::Full, &h.poly).unwrap().is_zero());
                }
            }
        }
    }

    fn ratio_to_rational(p: &PiScaled) -> Rational {
        assert_eq!(p.half_pi, 0);
        p.coeff.re.clone()
    }

    #[test]
    fn fermionic_lowering() {
        let n = 2;
        for q in 0..n {
            let h1 = hermite(HermiteLabel::new(Family::Fermionic { n }, 1, q, 1)).unwrap();
            let h0 = hermite(HermiteLabel::new(Family::Fermionic { n }, 0, q, 1)).unwrap();
            let down = ladder_apply(Ladder::Lower, Weight::Full, &h1.poly).unwrap();
            let c = real_part(&collinear_ratio(&down, &h0.poly).unwrap()).unwrap();
            let ratio = h0.norm2.div(&h1.norm2).unwrap();
            assert_eq!(ratio.scale_rational(&(&c * &c)), PiScaled::from_rational(int(16 * (n - q) as i64)));
        }
    }

    #[test]
    fn product_family_orthonormal_and_super_family_not() {
        let (m, n) = (3, 1);
        let mut prods = Vec::new();
        for i in 0..=1 {
            for p in 0..=1 {
                for s in 0..=1 {
                    for q in 0..=(1 - s) {
                        prods.push(product_function(m, n, (i, p, 1), (s, q, 1)).unwrap());
                    }
                }
            }
        }
        for (a, fa) in prods.iter().enumerate() {
            assert_eq!(inner1(&fa.poly, &fa.poly).unwrap(), fa.norm2);
            for fb in &prods[..a] {
                assert!(inner1(&fa.poly, &fb.poly).unwrap().is_zero());
            }
        }
        let fam = Family::Super { m, n };
        // phi_{1,0,1} and phi_{0,2,12} have the same energy but overlap under <.|.>_1
        let a = hermite(HermiteLabel::new(fam, 1, 0, 1)).unwrap();
        let b = hermite(HermiteLabel::new(fam, 0, 2, 12)).unwrap();
        assert!(!inner1(&a.poly, &b.poly).unwrap().is_zero());
        assert!(inner2(&a.poly, &b.poly).unwrap().is_zero());
    }
}
