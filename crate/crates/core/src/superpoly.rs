//! Polynomials on R^{m|2n}: commuting variables `x_1..x_m` and Grassmann
//! generators `x`_1..x`_2n`, with the standard differential operators.

use std::collections::BTreeMap;

use num::{Complex, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::{check_pairs, derivative_sign, product_sign, signed, tilde_monomial, GrassmannElement};
use crate::scalar::{cmul, format_rational, int, parse_rational, rat, rscale, GaussianRational, Rational, Scalar};

pub const MAX_BOSONIC: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    bos: [u8; MAX_BOSONIC],
    mask: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { bos: [0; MAX_BOSONIC], mask: 0 };

    pub fn new(bos: &[u32], mask: u16) -> Result<Self> {
        if bos.len() > MAX_BOSONIC {
            return Err(Error::UnsupportedDimension(format!("{} bosonic exponents", bos.len())));
        }
        let mut out = Monomial { bos: [0; MAX_BOSONIC], mask };
        for (i, &e) in bos.iter().enumerate() {
            out.bos[i] = u8::try_from(e).map_err(|_| Error::DegreeTooLarge(format!("exponent {e}")))?;
        }
        Ok(out)
    }

    pub fn exponents(&self, m: usize) -> Vec<u32> {
        self.bos[..m].iter().map(|&e| e as u32).collect()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.bos[i] as u32
    }

    pub fn mask(&self) -> u16 {
        self.mask
    }

    pub fn bosonic_degree(&self) -> u32 {
        self.bos.iter().map(|&e| e as u32).sum()
    }

    pub fn fermionic_degree(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn degree(&self) -> u32 {
        self.bosonic_degree() + self.fermionic_degree()
    }

    fn with_exp(mut self, i: usize, e: u32) -> Result<Self> {
        self.bos[i] = u8::try_from(e).map_err(|_| Error::DegreeTooLarge(format!("exponent {e}")))?;
        Ok(self)
    }

    fn with_mask(mut self, mask: u16) -> Self {
        self.mask = mask;
        self
    }

    fn times_bosonic(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = *self;
        for i in 0..MAX_BOSONIC {
            let e = self.bos[i] as u32 + other.bos[i] as u32;
            out.bos[i] = u8::try_from(e).map_err(|_| Error::DegreeTooLarge(format!("exponent {e}")))?;
        }
        Ok(out)
    }
}

/// Differential and multiplication operators. Indices are 1-based;
/// `Osp(i, j)` ranges over `1..=m+2n` with the fermionic slots after the
/// bosonic ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    DxB(usize),
    DxF(usize),
    MulB(usize),
    MulF(usize),
    Laplacian,
    LaplacianB,
    LaplacianF,
    Euler,
    EulerB,
    EulerF,
    R2Mul,
    RB2Mul,
    Theta2Mul,
    LaplaceBeltrami,
    LaplaceBeltramiB,
    LaplaceBeltramiF,
    Osp(usize, usize),
    /// `sqrt(2) a_i^+ = x_i - d_{x_i}`
    LadderBosPlus(usize),
    /// `sqrt(2) a_i^- = x_i + d_{x_i}`
    LadderBosMinus(usize),
    LadderFermPlus(usize),
    LadderFermMinus(usize),
}

fn add_into<S: Scalar>(map: &mut BTreeMap<Monomial, Complex<S>>, mono: Monomial, c: Complex<S>) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&mono) {
        Some(v) => {
            *v = Complex::new(v.re.add_ref(&c.re), v.im.add_ref(&c.im));
            if v.is_zero() {
                map.remove(&mono);
            }
        }
        None => {
            map.insert(mono, c);
        }
    }
}

fn from_int<S: Scalar>(k: i64) -> S {
    S::from_rational(&int(k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperPolynomial<S: Scalar = Rational> {
    m: usize,
    n: usize,
    terms: BTreeMap<Monomial, Complex<S>>,
}

impl<S: Scalar> SuperPolynomial<S> {
    pub fn zero(m: usize, n: usize) -> Result<Self> {
        if m > MAX_BOSONIC {
            return Err(Error::UnsupportedDimension(format!("m = {m} exceeds {MAX_BOSONIC}")));
        }
        check_pairs(n)?;
        Ok(SuperPolynomial { m, n, terms: BTreeMap::new() })
    }

    pub fn constant(m: usize, n: usize, c: Complex<S>) -> Result<Self> {
        let mut p = Self::zero(m, n)?;
        add_into(&mut p.terms, Monomial::ONE, c);
        Ok(p)
    }

    pub fn one(m: usize, n: usize) -> Result<Self> {
        Self::constant(m, n, Complex::one())
    }

    pub fn monomial(m: usize, n: usize, bos: &[u32], mask: u16, c: Complex<S>) -> Result<Self> {
        let mut p = Self::zero(m, n)?;
        if bos.len() != m {
            return Err(Error::MismatchedDimensions(format!("{} exponents for m = {m}", bos.len())));
        }
        if (mask as u32) >> (2 * n) != 0 {
            return Err(Error::IndexOutOfRange(format!("mask {mask:#b} for n = {n}")));
        }
        add_into(&mut p.terms, Monomial::new(bos, mask)?, c);
        Ok(p)
    }

    /// Bosonic variable `x_i`, `1 <= i <= m`.
    pub fn x(m: usize, n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > m {
            return Err(Error::IndexOutOfRange(format!("x_{i} for m = {m}")));
        }
        let mut e = vec![0; m];
        e[i - 1] = 1;
        Self::monomial(m, n, &e, 0, Complex::one())
    }

    /// Grassmann generator `x`_j`, `1 <= j <= 2n`.
    pub fn xf(m: usize, n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > 2 * n {
            return Err(Error::IndexOutOfRange(format!("x`_{j} for n = {n}")));
        }
        Self::monomial(m, n, &vec![0; m], 1 << (j - 1), Complex::one())
    }

    pub fn r2(m: usize, n: usize) -> Result<Self> {
        Self::one(m, n)?.apply(OperatorKind::RB2Mul)
    }

    pub fn theta2(m: usize, n: usize) -> Result<Self> {
        Self::one(m, n)?.apply(OperatorKind::Theta2Mul)
    }

    /// `R^2 = r^2 + theta^2`.
    pub fn big_r2(m: usize, n: usize) -> Result<Self> {
        Self::one(m, n)?.apply(OperatorKind::R2Mul)
    }

    pub fn from_grassmann(m: usize, g: &GrassmannElement<S>) -> Result<Self> {
        let mut p = Self::zero(m, g.n())?;
        for (mask, c) in g.terms() {
            add_into(&mut p.terms, Monomial::ONE.with_mask(mask), c.clone());
        }
        Ok(p)
    }

    pub fn from_terms(
        m: usize,
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, Complex<S>)>,
    ) -> Result<Self> {
        let mut p = Self::zero(m, n)?;
        for (mono, c) in terms {
            if mono.bos[m..].iter().any(|&e| e != 0) || (mono.mask as u32) >> (2 * n) != 0 {
                return Err(Error::IndexOutOfRange(format!("{mono:?} for (m, n) = ({m}, {n})")));
            }
            add_into(&mut p.terms, mono, c);
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Superdimension `M = m - 2n`.
    pub fn superdim(&self) -> i64 {
        self.m as i64 - 2 * self.n as i64
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex<S>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> Complex<S> {
        self.terms.get(mono).cloned().unwrap_or_else(Complex::zero)
    }

    pub fn constant_term(&self) -> Complex<S> {
        self.coeff(&Monomial::ONE)
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|t| t.degree()).max()
    }

    fn empty_like(&self) -> Self {
        SuperPolynomial { m: self.m, n: self.n, terms: BTreeMap::new() }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::MismatchedDimensions(format!(
                "({}, {}) vs ({}, {})",
                self.m, self.n, other.m, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            add_into(&mut out.terms, *t, c.clone());
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (t, c) in &other.terms {
            add_into(&mut self.terms, *t, c.clone());
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &Complex<S>) -> Self {
        if s.is_zero() {
            return self.empty_like();
        }
        self.map_coeffs(|c| cmul(c, s))
    }

    pub fn scale_real(&self, s: &S) -> Self {
        if s.is_zero() {
            return self.empty_like();
        }
        self.map_coeffs(|c| rscale(c, s))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale_real(&S::from_rational(r))
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    fn map_coeffs(&self, f: impl Fn(&Complex<S>) -> Complex<S>) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            add_into(&mut out.terms, *t, f(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.empty_like();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(neg) = product_sign(a.mask, b.mask) {
                    let mono = a.times_bosonic(b)?.with_mask(a.mask | b.mask);
                    add_into(&mut out.terms, mono, signed(&cmul(ca, cb), neg));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.m, self.n)?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Homogeneous components `(degree, P_degree)` in increasing degree.
    pub fn homogeneous_parts(&self) -> Vec<(u32, Self)> {
        let mut parts: BTreeMap<u32, Self> = BTreeMap::new();
        for (t, c) in &self.terms {
            let p = parts.entry(t.degree()).or_insert_with(|| self.empty_like());
            p.terms.insert(*t, c.clone());
        }
        parts.into_iter().collect()
    }

    pub fn homogeneous_part(&self, k: u32) -> Self {
        self.filter(|t| t.degree() == k)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            if keep(t) {
                out.terms.insert(*t, c.clone());
            }
        }
        out
    }

    /// Apply the tilde antihomomorphism to the Grassmann factor of every
    /// term, bosonic variables untouched.
    pub fn tilde_fermionic(&self) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            let (img, neg) = tilde_monomial(t.mask);
            add_into(&mut out.terms, t.with_mask(img), signed(c, neg));
        }
        out
    }

    /// Grassmann components: mask -> purely bosonic polynomial.
    pub fn fermionic_components(&self) -> BTreeMap<u16, Self> {
        let mut out: BTreeMap<u16, Self> = BTreeMap::new();
        for (t, c) in &self.terms {
            let p = out.entry(t.mask).or_insert_with(|| self.empty_like());
            p.terms.insert(t.with_mask(0), c.clone());
        }
        out
    }

    pub fn apply(&self, op: OperatorKind) -> Result<Self> {
        use OperatorKind::*;
        let (m, n) = (self.m, self.n);
        let big_m = self.superdim();
        let check_b = |i: usize| {
            if i == 0 || i > m {
                Err(Error::IndexOutOfRange(format!("bosonic index {i} for m = {m}")))
            } else {
                Ok(())
            }
        };
        let check_f = |j: usize| {
            if j == 0 || j > 2 * n {
                Err(Error::IndexOutOfRange(format!("fermionic index {j} for n = {n}")))
            } else {
                Ok(())
            }
        };
        match op {
            DxB(i) => {
                check_b(i)?;
                self.d_bos(i - 1)
            }
            DxF(j) => {
                check_f(j)?;
                Ok(self.d_ferm((j - 1) as u32))
            }
            MulB(i) => {
                check_b(i)?;
                self.mul_bos(i - 1)
            }
            MulF(j) => {
                check_f(j)?;
                Ok(self.mul_ferm_left((j - 1) as u32))
            }
            Laplacian => self.laplacian_b()?.add(&self.laplacian_f()),
            LaplacianB => self.laplacian_b(),
            LaplacianF => Ok(self.laplacian_f()),
            Euler => Ok(self.degree_weighted(|t| t.degree() as i64)),
            EulerB => Ok(self.degree_weighted(|t| t.bosonic_degree() as i64)),
            EulerF => Ok(self.degree_weighted(|t| t.fermionic_degree() as i64)),
            R2Mul => self.mul_r2b()?.add(&self.mul_theta2()),
            RB2Mul => self.mul_r2b(),
            Theta2Mul => Ok(self.mul_theta2()),
            LaplaceBeltrami => {
                let a = self.apply(Laplacian)?.apply(R2Mul)?;
                a.sub(&self.degree_weighted(|t| {
                    let d = t.degree() as i64;
                    d * (big_m - 2 + d)
                }))
            }
            LaplaceBeltramiB => {
                let a = self.laplacian_b()?.mul_r2b()?;
                a.sub(&self.degree_weighted(|t| {
                    let d = t.bosonic_degree() as i64;
                    d * (m as i64 - 2 + d)
                }))
            }
            LaplaceBeltramiF => {
                let a = self.laplacian_f().mul_theta2();
                a.sub(&self.degree_weighted(|t| {
                    let d = t.fermionic_degree() as i64;
                    d * (-2 * n as i64 - 2 + d)
                }))
            }
            Osp(i, j) => self.osp(i, j),
            LadderBosPlus(i) => {
                check_b(i)?;
                self.mul_bos(i - 1)?.sub(&self.d_bos(i - 1)?)
            }
            LadderBosMinus(i) => {
                check_b(i)?;
                self.mul_bos(i - 1)?.add(&self.d_bos(i - 1)?)
            }
            LadderFermPlus(j) => {
                check_f(j)?;
                let b = (j - 1) as u32;
                // even slot: (x`_{2i} + 2 d_{2i-1}) / 2, odd slot: (x`_{2i-1} - 2 d_{2i}) / 2
                let (x, d, sign) = if j % 2 == 0 { (b, b - 1, 1) } else { (b, b + 1, -1) };
                self.half_ladder(x, 1, d, sign)
            }
            LadderFermMinus(j) => {
                check_f(j)?;
                let b = (j - 1) as u32;
                // even slot: (x`_{2i-1} + 2 d_{2i}) / 2, odd slot: (-x`_{2i} + 2 d_{2i-1}) / 2
                let (x, xs, d) = if j % 2 == 0 { (b - 1, 1, b) } else { (b + 1, -1, b) };
                self.half_ladder(x, xs, d, 1)
            }
        }
    }

    /// `(xs x_xbit + 2 ds d_dbit) / 2`
    fn half_ladder(&self, xbit: u32, xs: i64, dbit: u32, ds: i64) -> Result<Self> {
        let a = self.mul_ferm_left(xbit).scale_rational(&rat(xs, 2));
        let b = self.d_ferm(dbit).scale_rational(&int(ds));
        a.add(&b)
    }

    pub fn apply_all(&self, ops: &[OperatorKind]) -> Result<Self> {
        let mut acc = self.clone();
        for op in ops.iter().rev() {
            acc = acc.apply(*op)?;
        }
        Ok(acc)
    }

    fn degree_weighted(&self, w: impl Fn(&Monomial) -> i64) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            let k = w(t);
            if k != 0 {
                add_into(&mut out.terms, *t, rscale(c, &from_int::<S>(k)));
            }
        }
        out
    }

    fn d_bos(&self, i: usize) -> Result<Self> {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            let e = t.exponent(i);
            if e > 0 {
                add_into(&mut out.terms, t.with_exp(i, e - 1)?, rscale(c, &from_int::<S>(e as i64)));
            }
        }
        Ok(out)
    }

    fn mul_bos(&self, i: usize) -> Result<Self> {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            add_into(&mut out.terms, t.with_exp(i, t.exponent(i) + 1)?, c.clone());
        }
        Ok(out)
    }

    fn d_ferm(&self, bit: u32) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            if t.mask & (1 << bit) != 0 {
                let neg = derivative_sign(t.mask, bit);
                add_into(&mut out.terms, t.with_mask(t.mask & !(1 << bit)), signed(c, neg));
            }
        }
        out
    }

    fn mul_ferm_left(&self, bit: u32) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            if t.mask & (1 << bit) == 0 {
                let neg = derivative_sign(t.mask, bit);
                add_into(&mut out.terms, t.with_mask(t.mask | (1 << bit)), signed(c, neg));
            }
        }
        out
    }

    fn laplacian_b(&self) -> Result<Self> {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            for i in 0..self.m {
                let e = t.exponent(i);
                if e >= 2 {
                    let w = from_int::<S>((e * (e - 1)) as i64);
                    add_into(&mut out.terms, t.with_exp(i, e - 2)?, rscale(c, &w));
                }
            }
        }
        Ok(out)
    }

    /// `-4 sum_j d_{2j-1} d_{2j}` sends `x`_A` to `4 sum x`_{A minus pair}`.
    fn laplacian_f(&self) -> Self {
        let mut out = self.empty_like();
        let four = from_int::<S>(4);
        for (t, c) in &self.terms {
            for j in 0..self.n {
                let pair = 0b11u16 << (2 * j);
                if t.mask & pair == pair {
                    add_into(&mut out.terms, t.with_mask(t.mask & !pair), rscale(c, &four));
                }
            }
        }
        out
    }

    fn mul_r2b(&self) -> Result<Self> {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            for i in 0..self.m {
                add_into(&mut out.terms, t.with_exp(i, t.exponent(i) + 2)?, c.clone());
            }
        }
        Ok(out)
    }

    fn mul_theta2(&self) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            for j in 0..self.n {
                let pair = 0b11u16 << (2 * j);
                if t.mask & pair == 0 {
                    add_into(&mut out.terms, t.with_mask(t.mask | pair), -c.clone());
                }
            }
        }
        out
    }

    fn is_fermionic_slot(&self, i: usize) -> bool {
        i > self.m
    }

    /// Left multiplication by the coordinate `X_i`.
    fn mul_coordinate(&self, i: usize) -> Result<Self> {
        if self.is_fermionic_slot(i) {
            Ok(self.mul_ferm_left((i - self.m - 1) as u32))
        } else {
            self.mul_bos(i - 1)
        }
    }

    /// `d_{X^j}`: the j-th component of the super gradient.
    fn gradient_component(&self, j: usize) -> Result<Self> {
        if !self.is_fermionic_slot(j) {
            return self.d_bos(j - 1);
        }
        let l = j - self.m; // 1-based fermionic slot
        if l % 2 == 1 {
            Ok(self.d_ferm(l as u32).scale_rational(&int(2)))
        } else {
            Ok(self.d_ferm((l - 2) as u32).scale_rational(&int(-2)))
        }
    }

    fn osp(&self, i: usize, j: usize) -> Result<Self> {
        let dim = self.m + 2 * self.n;
        if i == 0 || j == 0 || i > dim || j > dim {
            return Err(Error::IndexOutOfRange(format!("L_({i},{j}) for dimension {dim}")));
        }
        let a = self.gradient_component(j)?.mul_coordinate(i)?;
        let b = self.gradient_component(i)?.mul_coordinate(j)?;
        if self.is_fermionic_slot(i) && self.is_fermionic_slot(j) {
            a.add(&b)
        } else {
            a.sub(&b)
        }
    }
}

impl SuperPolynomial<Rational> {
    pub fn to_float(&self) -> SuperPolynomial<f64> {
        SuperPolynomial {
            m: self.m,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (*t, Complex::new(c.re.as_f64(), c.im.as_f64())))
                .collect(),
        }
    }

    pub fn scale_gaussian(&self, c: &GaussianRational) -> Self {
        self.scale(c)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    bos: Vec<u32>,
    mask: u16,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    m: usize,
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for SuperPolynomial<Rational> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        PolyJson {
            m: self.m,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| TermJson {
                    bos: t.exponents(self.m),
                    mask: t.mask,
                    re: format_rational(&c.re),
                    im: format_rational(&c.im),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuperPolynomial<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        let mut p = SuperPolynomial::zero(j.m, j.n).map_err(D::Error::custom)?;
        for t in j.terms {
            let re = parse_rational(&t.re).map_err(D::Error::custom)?;
            let im = parse_rational(&t.im).map_err(D::Error::custom)?;
            let q = SuperPolynomial::monomial(j.m, j.n, &t.bos, t.mask, Complex::new(re, im))
                .map_err(D::Error::custom)?;
            p = p.add(&q).map_err(D::Error::custom)?;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real;
    use OperatorKind::*;

    type P = SuperPolynomial<Rational>;

    fn c(k: i64) -> GaussianRational {
        real(int(k))
    }

    #[test]
    fn laplacian_of_r2_is_twice_superdimension() {
        for (m, n) in [(3, 1), (4, 1), (5, 2), (7, 3), (1, 2)] {
            let r2 = P::big_r2(m, n).unwrap();
            let l = r2.apply(Laplacian).unwrap();
            let want = 2 * (m as i64 - 2 * n as i64);
            assert_eq!(l, P::constant(m, n, c(want)).unwrap());
        }
    }

    #[test]
    fn euler_counts_degree() {
        let p = P::x(3, 1, 1).unwrap().mul(&P::xf(3, 1, 2).unwrap()).unwrap();
        assert_eq!(p.apply(Euler).unwrap(), p.scale(&c(2)));
        assert_eq!(p.apply(EulerB).unwrap(), p);
        assert_eq!(p.apply(EulerF).unwrap(), p);
    }

    #[test]
    fn theta2_matches_grassmann() {
        let t = P::theta2(3, 2).unwrap();
        let g = GrassmannElement::<Rational>::theta2(2).unwrap();
        assert_eq!(t, P::from_grassmann(3, &g).unwrap());
    }

    #[test]
    fn mixed_variables_commute() {
        let x = P::x(2, 1, 2).unwrap();
        let y = P::xf(2, 1, 1).unwrap();
        assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        let z = P::xf(2, 1, 2).unwrap();
        assert_eq!(y.mul(&z).unwrap(), z.mul(&y).unwrap().neg());
    }

    #[test]
    fn laplace_beltrami_on_low_degree() {
        // on x_1 at (3,1): -1 (1 + M - 2) = 0 with M = 1
        let x1 = P::x(3, 1, 1).unwrap();
        assert!(x1.apply(LaplaceBeltrami).unwrap().is_zero());
        // x_1 x_2 at (5,1): -2 (2 + 3 - 2) = -6
        let p = P::x(5, 1, 1).unwrap().mul(&P::x(5, 1, 2).unwrap()).unwrap();
        assert_eq!(p.apply(LaplaceBeltrami).unwrap(), p.scale(&c(-6)));
    }

    #[test]
    fn osp_annihilates_r2() {
        let (m, n) = (3, 2);
        let r2 = P::big_r2(m, n).unwrap();
        for i in 1..=m + 2 * n {
            for j in 1..=m + 2 * n {
                assert!(r2.apply(Osp(i, j)).unwrap().is_zero(), "L_({i},{j})");
            }
        }
    }

    #[test]
    fn ladder_hamiltonian_on_one() {
        let (m, n) = (3, 1);
        let one = P::one(m, n).unwrap();
        let mut h = P::zero(m, n).unwrap();
        for i in 1..=m {
            let t = one.apply_all(&[LadderBosPlus(i), LadderBosMinus(i)]).unwrap();
            h = h.add(&t.scale_rational(&rat(1, 2))).unwrap();
        }
        for j in 1..=2 * n {
            h = h.add(&one.apply_all(&[LadderFermPlus(j), LadderFermMinus(j)]).unwrap()).unwrap();
        }
        h = h.add(&one.scale_rational(&rat(1, 2))).unwrap();
        assert_eq!(h, P::big_r2(m, n).unwrap().scale_rational(&rat(1, 2)));
    }

    #[test]
    fn index_errors() {
        let p = P::one(3, 1).unwrap();
        assert!(matches!(p.apply(DxB(4)), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(p.apply(DxF(3)), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(P::zero(13, 0), Err(Error::UnsupportedDimension(_))));
    }

    #[test]
    fn json_roundtrip() {
        let p = P::x(3, 1, 2).unwrap().pow(3).unwrap().add(&P::theta2(3, 1).unwrap()).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: P = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
