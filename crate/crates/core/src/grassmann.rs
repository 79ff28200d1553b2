//! The Grassmann algebra on 2n anticommuting generators `x`_1, ..., x`_2n`.
//!
//! A monomial is a bitmask; bit `j-1` stands for `x`_j` and factors are kept
//! in ascending order.

use std::collections::BTreeMap;

use num::{Complex, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, rat, GaussianRational, PiScaled, Rational, Scalar};

pub const MAX_FERMIONIC_PAIRS: usize = 8;

/// Sign of `x_a x_b` brought to ascending order, `None` if they share a factor.
/// `Some(true)` means negative.
pub(crate) fn product_sign(a: u16, b: u16) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// Sign picked up by the left derivative with respect to bit `bit`.
pub(crate) fn derivative_sign(mask: u16, bit: u32) -> bool {
    (mask & ((1u16 << bit) - 1)).count_ones() % 2 == 1
}

pub(crate) fn signed<S: Scalar>(c: &Complex<S>, negative: bool) -> Complex<S> {
    if negative {
        -c.clone()
    } else {
        c.clone()
    }
}

pub(crate) fn check_pairs(n: usize) -> Result<()> {
    if n > MAX_FERMIONIC_PAIRS {
        return Err(Error::UnsupportedDimension(format!(
            "n = {n} exceeds {MAX_FERMIONIC_PAIRS}"
        )));
    }
    Ok(())
}

/// Image of the monomial under the tilde antihomomorphism, as (mask, negative).
pub(crate) fn tilde_monomial(mask: u16) -> (u16, bool) {
    // images of the generators taken in reverse order
    let mut out = 0u16;
    let mut negative = false;
    let mut bits: Vec<u32> = (0..16).filter(|b| mask & (1 << b) != 0).collect();
    bits.reverse();
    for b in bits {
        let (img, neg) = if b % 2 == 0 { (b + 1, false) } else { (b - 1, true) };
        negative ^= neg;
        match product_sign(out, 1 << img) {
            Some(s) => negative ^= s,
            None => unreachable!("tilde maps distinct generators to distinct generators"),
        }
        out |= 1 << img;
    }
    (out, negative)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement<S: Scalar = Rational> {
    n: usize,
    terms: BTreeMap<u16, Complex<S>>,
}

impl<S: Scalar> GrassmannElement<S> {
    pub fn zero(n: usize) -> Result<Self> {
        check_pairs(n)?;
        Ok(GrassmannElement { n, terms: BTreeMap::new() })
    }

    pub fn one(n: usize) -> Result<Self> {
        Self::monomial(n, 0, Complex::one())
    }

    pub fn monomial(n: usize, mask: u16, coeff: Complex<S>) -> Result<Self> {
        let mut e = Self::zero(n)?;
        if (mask as u32) >> (2 * n) != 0 {
            return Err(Error::IndexOutOfRange(format!("mask {mask:#b} for n = {n}")));
        }
        e.add_term(mask, coeff);
        Ok(e)
    }

    /// The generator `x`_j`, `1 <= j <= 2n`.
    pub fn generator(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > 2 * n {
            return Err(Error::IndexOutOfRange(format!("generator {j} for n = {n}")));
        }
        Self::monomial(n, 1 << (j - 1), Complex::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (u16, Complex<S>)>) -> Result<Self> {
        let mut e = Self::zero(n)?;
        for (mask, c) in terms {
            if (mask as u32) >> (2 * n) != 0 {
                return Err(Error::IndexOutOfRange(format!("mask {mask:#b} for n = {n}")));
            }
            e.add_term(mask, c);
        }
        Ok(e)
    }

    /// `theta^2 = -sum_j x`_{2j-1} x`_{2j}`.
    pub fn theta2(n: usize) -> Result<Self> {
        Self::from_terms(n, (0..n).map(|j| (0b11u16 << (2 * j), -Complex::<S>::one())))
    }

    /// `exp(c theta^2) = prod_j (1 - c x`_{2j-1} x`_{2j})`.
    pub fn exp_theta2(n: usize, c: &Rational) -> Result<Self> {
        let mut acc = Self::one(n)?;
        let minus_c = Complex::new(S::from_rational(&-c.clone()), S::zero());
        for j in 0..n {
            let mut factor = Self::one(n)?;
            factor.add_term(0b11u16 << (2 * j), minus_c.clone());
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u16, &Complex<S>)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: u16) -> Complex<S> {
        self.terms.get(&mask).cloned().unwrap_or_else(Complex::zero)
    }

    pub(crate) fn add_term(&mut self, mask: u16, c: Complex<S>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::MismatchedDimensions(format!("n = {} vs n = {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &Complex<S>) -> Self {
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    fn map_coeffs(&self, f: impl Fn(&Complex<S>) -> Complex<S>) -> Self {
        let mut out = GrassmannElement { n: self.n, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = GrassmannElement { n: self.n, terms: BTreeMap::new() };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(neg) = product_sign(*a, *b) {
                    out.add_term(a | b, signed(&(ca.clone() * cb.clone()), neg));
                }
            }
        }
        Ok(out)
    }

    /// Left derivative with respect to `x`_j`.
    pub fn derive(&self, j: usize) -> Result<Self> {
        if j == 0 || j > 2 * self.n {
            return Err(Error::IndexOutOfRange(format!("derivative {j} for n = {}", self.n)));
        }
        let bit = (j - 1) as u32;
        let mut out = GrassmannElement { n: self.n, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m & (1 << bit) != 0 {
                out.add_term(m & !(1 << bit), signed(c, derivative_sign(*m, bit)));
            }
        }
        Ok(out)
    }

    /// `nabla_f^2 = -4 sum_j d_{2j-1} d_{2j}`.
    pub fn laplacian(&self) -> Self {
        let mut out = GrassmannElement { n: self.n, terms: BTreeMap::new() };
        let four = Complex::new(S::from_rational(&rat(-4, 1)), S::zero());
        for j in 1..=self.n {
            let d = self.derive(2 * j).and_then(|e| e.derive(2 * j - 1)).expect("valid index");
            out = out.add(&d.scale(&four)).expect("same n");
        }
        out
    }

    /// Homogeneous component of degree `k`.
    pub fn degree_part(&self, k: u32) -> Self {
        let mut out = GrassmannElement { n: self.n, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m.count_ones() == k {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    /// Hodge-type map `x`_A -> +-2^{|A|-n} x`_{complement}` with
    /// `x`_A * (star x`_A) = 2^{|A|-n} x`_1...x`_2n`.
    pub fn star(&self) -> Self {
        let full: u16 = ((1u32 << (2 * self.n)) - 1) as u16;
        let mut out = GrassmannElement { n: self.n, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let comp = full & !m;
            let neg = product_sign(*m, comp).expect("disjoint");
            let e = m.count_ones() as i64 - self.n as i64;
            let w = if e >= 0 { rat(1 << e, 1) } else { rat(1, 1 << (-e)) };
            let wc = Complex::new(S::from_rational(&w), S::zero());
            out.add_term(comp, signed(&(c.clone() * wc), neg));
        }
        out
    }

    /// Antihomomorphism with `x`_{2i-1} -> x`_{2i}` and `x`_{2i} -> -x`_{2i-1}`.
    pub fn tilde(&self) -> Self {
        let mut out = GrassmannElement { n: self.n, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            let (img, neg) = tilde_monomial(*m);
            out.add_term(img, signed(c, neg));
        }
        out
    }

    /// Coefficient of `x`_1 ... x`_2n`.
    pub fn top_coeff(&self) -> Complex<S> {
        let full: u16 = ((1u32 << (2 * self.n)) - 1) as u16;
        self.coeff(full)
    }
}

impl GrassmannElement<Rational> {
    /// `pi^{-n} d_{2n} ... d_1 f`.
    pub fn berezin(&self) -> PiScaled {
        PiScaled::new(self.top_coeff(), -2 * self.n as i64)
    }

    /// `<f|g>_Lambda = (2 pi)^{-n} sum_A 2^{|A|} f_A conj(g_A)`.
    pub fn inner_lambda(&self, other: &Self) -> Result<PiScaled> {
        self.check_same(other)?;
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                acc += (c * d.conj()) * Rational::from_integer((1i64 << m.count_ones()).into());
            }
        }
        let scale = rat(1, 1i64 << self.n);
        Ok(PiScaled::new(acc * scale, -2 * self.n as i64))
    }

    pub fn to_float(&self) -> GrassmannElement<f64> {
        GrassmannElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, Complex::new(c.re.as_f64(), c.im.as_f64())))
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    mask: u16,
    coeff: CoeffJson,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct GrassmannJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for GrassmannElement<Rational> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        GrassmannJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    mask: *m,
                    coeff: CoeffJson { re: format_rational(&c.re), im: format_rational(&c.im) },
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GrassmannElement<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = GrassmannJson::deserialize(d)?;
        let mut terms = Vec::new();
        for t in j.terms {
            let re = parse_rational(&t.coeff.re).map_err(D::Error::custom)?;
            let im = parse_rational(&t.coeff.im).map_err(D::Error::custom)?;
            terms.push((t.mask, Complex::new(re, im)));
        }
        GrassmannElement::from_terms(j.n, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, real};

    type G = GrassmannElement<Rational>;

    fn x(n: usize, j: usize) -> G {
        G::generator(n, j).unwrap()
    }

    #[test]
    fn anticommutation() {
        let (a, b) = (x(2, 1), x(2, 3));
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab, ba.neg());
        assert!(a.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn derivative_sign_rule() {
        // d_2 (x1 x2) = -x1
        let f = x(1, 1).mul(&x(1, 2)).unwrap();
        assert_eq!(f.derive(2).unwrap(), x(1, 1).neg());
        assert_eq!(f.derive(1).unwrap(), x(1, 2));
    }

    #[test]
    fn berezin_of_top() {
        let f = x(1, 1).mul(&x(1, 2)).unwrap();
        assert_eq!(f.berezin(), PiScaled::real(int(1), -2));
        // equals pi^{-n} / (4^n n!) nabla^{2n}
        assert_eq!(f.laplacian(), G::one(1).unwrap().scale(&real(int(4))));
    }

    #[test]
    fn star_values() {
        let top = x(1, 1).mul(&x(1, 2)).unwrap();
        assert_eq!(top.star(), G::one(1).unwrap().scale(&real(int(2))));
        assert_eq!(G::one(1).unwrap().star(), top.scale(&real(rat(1, 2))));
        assert_eq!(x(1, 1).star(), x(1, 2));
        assert_eq!(x(1, 2).star(), x(1, 1).neg());
    }

    #[test]
    fn tilde_values() {
        assert_eq!(x(1, 1).tilde(), x(1, 2));
        assert_eq!(x(1, 2).tilde(), x(1, 1).neg());
        let t2 = G::theta2(2).unwrap();
        assert_eq!(t2.tilde(), t2.neg());
    }

    #[test]
    fn gaussian_lambda_norm() {
        let e = G::exp_theta2(1, &rat(-1, 2)).unwrap();
        assert_eq!(e.inner_lambda(&e).unwrap(), PiScaled::real(int(1), -2));
    }

    #[test]
    fn json_roundtrip() {
        let f = x(2, 1).add(&x(2, 4).scale(&real(rat(-3, 2)))).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: G = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn mismatched_n() {
        assert!(matches!(x(1, 1).mul(&x(2, 1)), Err(Error::MismatchedDimensions(_))));
        assert!(G::generator(1, 3).is_err());
    }
}
