//! Exact integrals on superspace: Berezin, Gaussian, Pizzetti, and the two
//! inner products on weighted polynomials `P exp(-R^2/2)`.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::grassmann::{product_sign, signed, GrassmannElement};
use crate::harmonics::t_map;
use crate::scalar::{cmul, rat, reciprocal_gamma_half, GaussianRational, HalfInt, PiScaled, Rational};
use crate::superpoly::{Monomial, OperatorKind, SuperPolynomial};

type Poly = SuperPolynomial<Rational>;

const MAX_MOMENT: usize = 520;

/// `(e-1)!!` for even `e`, indexed by `e`.
static DOUBLE_FACTORIALS: Lazy<Vec<BigInt>> = Lazy::new(|| {
    let mut v = vec![BigInt::one(); MAX_MOMENT + 1];
    for e in (2..=MAX_MOMENT).step_by(2) {
        v[e] = &v[e - 2] * BigInt::from(e - 1);
    }
    v
});

fn parity_key(t: &Monomial, m: usize) -> u16 {
    (0..m).fold(0u16, |acc, i| acc | (((t.exponent(i) & 1) as u16) << i))
}

fn pairs_union(mask: u16, n: usize) -> bool {
    (0..n).all(|j| {
        let p = (mask >> (2 * j)) & 0b11;
        p == 0 || p == 0b11
    })
}

/// `int_{R^m} x^a exp(-r^2) dx / pi^{m/2}` as `(numerator, total degree)`,
/// the value being `numerator / 2^{degree/2}`.
fn bosonic_moment(exps: impl Iterator<Item = u32>) -> Option<(BigInt, u32)> {
    let mut num = BigInt::one();
    let mut deg = 0;
    for e in exps {
        if e % 2 == 1 {
            return None;
        }
        num *= &DOUBLE_FACTORIALS[e as usize];
        deg += e;
    }
    Some((num, deg))
}

fn finish_by_degree(acc: HashMap<u32, GaussianRational>, half_pi: i64, extra: Rational) -> PiScaled {
    let mut total = GaussianRational::zero();
    for (deg, v) in acc {
        let w = rat(1, 1) / Rational::from_integer(BigInt::one() << (deg / 2) as usize);
        total += v * w;
    }
    PiScaled::new(total * extra, half_pi)
}

fn accumulate(acc: &mut HashMap<u32, GaussianRational>, deg: u32, v: GaussianRational) {
    let e = acc.entry(deg).or_insert_with(GaussianRational::zero);
    *e = &*e + v;
}

/// `int P exp(-R^2)`, exact.
pub fn gaussian_integral(p: &Poly) -> PiScaled {
    let (m, n) = (p.m(), p.n());
    let mut acc = HashMap::new();
    for (t, c) in p.terms() {
        if !pairs_union(t.mask(), n) {
            continue;
        }
        if let Some((num, deg)) = bosonic_moment((0..m).map(|i| t.exponent(i))) {
            accumulate(&mut acc, deg, c * Rational::from_integer(num));
        }
    }
    finish_by_degree(acc, p.superdim(), Rational::one())
}

/// `int P Q exp(-R^2)` without forming the product.
pub fn gaussian_pairing(p: &Poly, q: &Poly) -> Result<PiScaled> {
    if p.m() != q.m() || p.n() != q.n() {
        return Err(Error::MismatchedDimensions("gaussian pairing".into()));
    }
    let (m, n) = (p.m(), p.n());
    let mut groups: HashMap<(u16, u16), Vec<(&Monomial, &GaussianRational)>> = HashMap::new();
    for (t, c) in q.terms() {
        groups.entry((parity_key(t, m), t.mask())).or_default().push((t, c));
    }
    let masks: Vec<u16> = {
        let mut v: Vec<u16> = groups.keys().map(|k| k.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut acc = HashMap::new();
    for (a, ca) in p.terms() {
        let key = parity_key(a, m);
        for &mb in &masks {
            let Some(neg) = product_sign(a.mask(), mb) else { continue };
            if !pairs_union(a.mask() | mb, n) {
                continue;
            }
            let Some(list) = groups.get(&(key, mb)) else { continue };
            for (b, cb) in list {
                let (num, deg) = bosonic_moment((0..m).map(|i| a.exponent(i) + b.exponent(i)))
                    .expect("matching parities");
                let v = signed(&cmul(ca, cb), neg) * Rational::from_integer(num);
                accumulate(&mut acc, deg, v);
            }
        }
    }
    Ok(finish_by_degree(acc, p.superdim(), Rational::one()))
}

/// Berezin integral of the Grassmann coefficient of `x^0`.
pub fn berezin(g: &GrassmannElement<Rational>) -> PiScaled {
    g.berezin()
}

/// `int_SS P = sum_k 2 pi^{M/2} / (4^k k! Gamma(k + M/2)) (nabla^{2k} P)(0)`.
pub fn pizzetti(p: &Poly) -> Result<PiScaled> {
    if p.m() == 0 {
        return Err(Error::PurelyFermionic);
    }
    let big_m = p.superdim();
    let mut total = PiScaled::zero();
    let mut cur = p.clone();
    let mut k: i64 = 0;
    let mut k_fact = Rational::one();
    while !cur.is_zero() {
        let c0 = cur.constant_term();
        if !c0.is_zero() {
            let w = rat(2, 1) / (Rational::from_integer(BigInt::from(4).pow(k as u32)) * &k_fact);
            let g = reciprocal_gamma_half(HalfInt::from_twice(2 * k + big_m));
            let term = g.mul(&PiScaled::new(c0 * w, big_m));
            total = total.add(&term)?;
        }
        cur = cur.apply(OperatorKind::Laplacian)?;
        k += 1;
        k_fact *= Rational::from_integer(BigInt::from(k));
    }
    Ok(total)
}

fn fermionic_gaussian(m: usize, n: usize) -> Result<Poly> {
    let e = GrassmannElement::<Rational>::exp_theta2(n, &rat(-1, 2))?;
    Poly::from_grassmann(m, &e)
}

/// `<f|g>_1 = int f *(conj g)` for `f = P exp(-R^2/2)`, `g = Q exp(-R^2/2)`.
/// The star acts on the full Grassmann content, fermionic Gaussian included.
pub fn inner1(p: &Poly, q: &Poly) -> Result<PiScaled> {
    if p.m() != q.m() || p.n() != q.n() {
        return Err(Error::MismatchedDimensions("inner1".into()));
    }
    let (m, n) = (p.m(), p.n());
    let e = fermionic_gaussian(m, n)?;
    let f = p.mul(&e)?;
    let g = q.mul(&e)?;
    let fc = f.fermionic_components();
    let gc = g.fermionic_components();
    let mut total = PiScaled::zero();
    for (mask, fa) in &fc {
        let Some(ga) = gc.get(mask) else { continue };
        // bosonic factor: int fa conj(ga) exp(-r^2), pi^{m/2}
        let b = gaussian_pairing(fa, &ga.conj())?;
        let w = Rational::from_integer(BigInt::one() << mask.count_ones() as usize);
        let v = PiScaled::new(b.coeff * w, m as i64);
        total = total.add(&v)?;
    }
    // (2 pi)^{-n}
    Ok(total.mul(&PiScaled::real(rat(1, 1i64 << n), -2 * n as i64)))
}

/// `<f|g>_2 = int f T(conj g)` for `f = P exp(-R^2/2)`, `g = Q exp(-R^2/2)`.
pub fn inner2(p: &Poly, q: &Poly) -> Result<PiScaled> {
    let tq = t_map(&q.conj())?;
    gaussian_pairing(p, &tq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, real};
    use num::Complex;

    fn x(m: usize, n: usize, i: usize) -> Poly {
        Poly::x(m, n, i).unwrap()
    }

    #[test]
    fn gaussian_examples() {
        let one = Poly::one(3, 1).unwrap();
        assert_eq!(gaussian_integral(&one), PiScaled::real(int(1), 1));
        let x1sq = x(3, 1, 1).pow(2).unwrap();
        assert_eq!(gaussian_integral(&x1sq), PiScaled::real(rat(1, 2), 1));
        assert!(gaussian_integral(&x(3, 1, 1)).is_zero());
        let t = Poly::theta2(3, 1).unwrap();
        assert_eq!(gaussian_integral(&t), PiScaled::real(int(-1), 1));
    }

    #[test]
    fn pairing_equals_integral_of_product() {
        let (m, n) = (3, 1);
        let p = x(m, n, 1)
            .add(&Poly::xf(m, n, 1).unwrap())
            .unwrap()
            .mul(&Poly::big_r2(m, n).unwrap())
            .unwrap();
        let q = x(m, n, 1).pow(3).unwrap().add(&Poly::xf(m, n, 2).unwrap()).unwrap();
        let direct = gaussian_integral(&p.mul(&q).unwrap());
        assert_eq!(gaussian_pairing(&p, &q).unwrap(), direct);
    }

    #[test]
    fn pizzetti_examples() {
        let one = Poly::one(3, 1).unwrap();
        assert_eq!(pizzetti(&one).unwrap(), PiScaled::real(int(2), 0));
        assert_eq!(pizzetti(&x(3, 1, 1).pow(2).unwrap()).unwrap(), PiScaled::real(int(2), 0));
        assert!(matches!(pizzetti(&Poly::one(0, 1).unwrap()), Err(Error::PurelyFermionic)));
        // classical sphere area for n = 0
        assert_eq!(pizzetti(&Poly::one(3, 0).unwrap()).unwrap(), PiScaled::real(int(4), 2));
    }

    #[test]
    fn pizzetti_sees_r2_as_one() {
        let (m, n) = (5, 2);
        let p = x(m, n, 1).pow(2).unwrap().add(&Poly::theta2(m, n).unwrap()).unwrap();
        let r2p = p.apply(OperatorKind::R2Mul).unwrap();
        assert_eq!(pizzetti(&r2p).unwrap(), pizzetti(&p).unwrap());
    }

    #[test]
    fn inner1_of_product_ground_state() {
        // phi^b_{0,0,1} phi^f_{0,0,1} at (3,1) is 1 after normalising by
        // Gamma(3/2)/2 * 4 pi (bosonic) and pi (fermionic)
        let one = Poly::one(3, 1).unwrap();
        let v = inner1(&one, &one).unwrap();
        assert_eq!(v, PiScaled::real(int(1), 1));
    }

    #[test]
    fn inner1_hermitian() {
        let (m, n) = (3, 1);
        let i = real(int(0)) + Complex::new(int(0), int(1));
        let p = x(m, n, 2).add(&Poly::xf(m, n, 1).unwrap().scale(&i)).unwrap();
        let q = Poly::xf(m, n, 1).unwrap().add(&Poly::theta2(m, n).unwrap()).unwrap();
        assert_eq!(inner1(&p, &q).unwrap(), inner1(&q, &p).unwrap().conj());
    }
}
