//! Exact scalars: rationals, Gaussian rationals, half-integers and
//! rational multiples of half-integer powers of pi.

use std::fmt;
use std::ops::Neg;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Complex, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type GaussianRational = Complex<Rational>;

/// Real field underlying polynomial coefficients. Coefficients themselves are
/// `Complex<S>`.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_rational(r: &Rational) -> Self;
    fn as_f64(&self) -> f64;
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
}

/// Complex product that skips work for real operands.
pub fn cmul<S: Scalar>(a: &Complex<S>, b: &Complex<S>) -> Complex<S> {
    match (a.im.is_zero(), b.im.is_zero()) {
        (true, true) => Complex::new(a.re.mul_ref(&b.re), S::zero()),
        (true, false) => Complex::new(a.re.mul_ref(&b.re), a.re.mul_ref(&b.im)),
        (false, true) => Complex::new(a.re.mul_ref(&b.re), a.im.mul_ref(&b.re)),
        (false, false) => Complex::new(
            a.re.mul_ref(&b.re) - a.im.mul_ref(&b.im),
            a.re.mul_ref(&b.im) + a.im.mul_ref(&b.re),
        ),
    }
}

/// Scale a complex number by a real.
pub fn rscale<S: Scalar>(a: &Complex<S>, r: &S) -> Complex<S> {
    if a.im.is_zero() {
        Complex::new(a.re.mul_ref(r), S::zero())
    } else {
        Complex::new(a.re.mul_ref(r), a.im.mul_ref(r))
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn as_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r) as f32
    }
    fn as_f64(&self) -> f64 {
        *self as f64
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn gaussian(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn real(r: Rational) -> GaussianRational {
    Complex::new(r, Rational::zero())
}

/// Always `p/q`, also for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str_radix(p.trim(), 10).map_err(|_| bad())?;
            let q = BigInt::from_str_radix(q.trim(), 10).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str_radix(s, 10).map_err(|_| bad())?,
        )),
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A half-integer `twice / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }
    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }
    pub fn twice(self) -> i64 {
        self.twice
    }
    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
    pub fn add_int(self, k: i64) -> Self {
        HalfInt { twice: self.twice + 2 * k }
    }
    pub fn add(self, other: HalfInt) -> Self {
        HalfInt { twice: self.twice + other.twice }
    }
    pub fn to_rational(self) -> Rational {
        rat(self.twice, 2)
    }
    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `coeff * pi^(half_pi / 2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiScaled {
    pub coeff: GaussianRational,
    pub half_pi: i64,
}

impl PiScaled {
    pub fn new(coeff: GaussianRational, half_pi: i64) -> Self {
        PiScaled { coeff, half_pi }
    }
    pub fn zero() -> Self {
        PiScaled { coeff: GaussianRational::zero(), half_pi: 0 }
    }
    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }
    pub fn from_rational(r: Rational) -> Self {
        PiScaled { coeff: real(r), half_pi: 0 }
    }
    pub fn real(r: Rational, half_pi: i64) -> Self {
        PiScaled { coeff: real(r), half_pi }
    }
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Exact sum. Zero is compatible with any exponent.
    pub fn add(&self, other: &PiScaled) -> Result<PiScaled> {
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.half_pi != other.half_pi {
            return Err(Error::PiExponentMismatch { left: self.half_pi, right: other.half_pi });
        }
        Ok(PiScaled { coeff: &self.coeff + &other.coeff, half_pi: self.half_pi })
    }

    pub fn sub(&self, other: &PiScaled) -> Result<PiScaled> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PiScaled {
        PiScaled { coeff: -self.coeff.clone(), half_pi: self.half_pi }
    }

    pub fn mul(&self, other: &PiScaled) -> PiScaled {
        PiScaled { coeff: &self.coeff * &other.coeff, half_pi: self.half_pi + other.half_pi }
    }

    pub fn div(&self, other: &PiScaled) -> Result<PiScaled> {
        if other.is_zero() {
            return Err(Error::NonPositiveArgument("division by zero".into()));
        }
        Ok(PiScaled { coeff: &self.coeff / &other.coeff, half_pi: self.half_pi - other.half_pi })
    }

    pub fn scale(&self, c: &GaussianRational) -> PiScaled {
        PiScaled { coeff: &self.coeff * c, half_pi: self.half_pi }
    }

    pub fn scale_rational(&self, r: &Rational) -> PiScaled {
        PiScaled {
            coeff: Complex::new(&self.coeff.re * r, &self.coeff.im * r),
            half_pi: self.half_pi,
        }
    }

    pub fn conj(&self) -> PiScaled {
        PiScaled { coeff: self.coeff.conj(), half_pi: self.half_pi }
    }

    pub fn is_real(&self) -> bool {
        self.coeff.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let p = pi_power(self.half_pi);
        Complex::new(rational_to_f64(&self.coeff.re) * p, rational_to_f64(&self.coeff.im) * p)
    }

    /// Real part as a float; the imaginary part is ignored.
    pub fn to_f64(&self) -> f64 {
        self.to_complex().re
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coeff;
        if c.im.is_zero() {
            write!(f, "{}", c.re)?;
        } else {
            write!(f, "({} + {}i)", c.re, c.im)?;
        }
        if self.half_pi != 0 {
            write!(f, "·π^({}/2)", self.half_pi)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PiScaledJson {
    re: String,
    im: String,
    half_pi: i64,
}

impl Serialize for PiScaled {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        PiScaledJson {
            re: format_rational(&self.coeff.re),
            im: format_rational(&self.coeff.im),
            half_pi: self.half_pi,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiScaled {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PiScaledJson::deserialize(d)?;
        let re = parse_rational(&j.re).map_err(serde::de::Error::custom)?;
        let im = parse_rational(&j.im).map_err(serde::de::Error::custom)?;
        Ok(PiScaled { coeff: Complex::new(re, im), half_pi: j.half_pi })
    }
}

/// `pi^(h/2)` as a float.
pub fn pi_power(half_pi: i64) -> f64 {
    let q = half_pi.div_euclid(2);
    let r = half_pi.rem_euclid(2);
    let mut v = std::f64::consts::PI.powi(q as i32);
    if r == 1 {
        v *= std::f64::consts::PI.sqrt();
    }
    v
}

/// Rising factorial `(a)_j = a (a+1) ... (a+j-1)`.
pub fn pochhammer(a: HalfInt, j: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j as i64 {
        acc *= a.add_int(i).to_rational();
    }
    acc
}

/// Exact `Gamma(a)` for a positive half-integer `a`.
pub fn gamma_half(a: HalfInt) -> Result<PiScaled> {
    if a.twice() <= 0 {
        return Err(Error::NonPositiveArgument(format!("Gamma({a})")));
    }
    if a.is_integer() {
        let n = (a.twice() / 2) as u64;
        Ok(PiScaled::from_rational(Rational::from_integer(factorial(n - 1))))
    } else {
        // Gamma(k + 1/2) = (1/2)_k sqrt(pi)
        let k = ((a.twice() - 1) / 2) as u32;
        Ok(PiScaled::real(pochhammer(HalfInt::from_twice(1), k), 1))
    }
}

/// Exact `1 / Gamma(a)` for any half-integer, zero at the poles.
pub fn reciprocal_gamma_half(a: HalfInt) -> PiScaled {
    if a.twice() > 0 {
        let g = gamma_half(a).expect("positive argument");
        return PiScaled::one().div(&g).expect("gamma is nonzero");
    }
    if a.is_integer() {
        return PiScaled::zero();
    }
    // 1/Gamma(a) = (a)_N / Gamma(a+N) with a+N = 1/2
    let shift = ((1 - a.twice()) / 2) as u32;
    let g = gamma_half(a.add_int(shift as i64)).expect("positive argument");
    PiScaled::from_rational(pochhammer(a, shift)).div(&g).expect("gamma is nonzero")
}

/// `Gamma(a) / Gamma(b)` for half-integers with integer difference.
/// Fails when the ratio is singular.
pub fn gamma_ratio(a: HalfInt, b: HalfInt) -> Result<Rational> {
    let d = a.twice() - b.twice();
    if d % 2 != 0 {
        return Err(Error::IndexConstraintViolated(format!(
            "Gamma({a})/Gamma({b}) is not rational"
        )));
    }
    let d = d / 2;
    if d >= 0 {
        Ok(pochhammer(b, d as u32))
    } else {
        let p = pochhammer(a, (-d) as u32);
        if p.is_zero() {
            return Err(Error::NonPositiveArgument(format!("Gamma({a})/Gamma({b}) diverges")));
        }
        Ok(p.recip())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half(h(1)).unwrap(), PiScaled::real(int(1), 1));
        assert_eq!(gamma_half(h(6)).unwrap(), PiScaled::from_rational(int(2)));
        assert_eq!(gamma_half(h(5)).unwrap(), PiScaled::real(rat(3, 4), 1));
        assert_eq!(gamma_half(h(2)).unwrap(), PiScaled::from_rational(int(1)));
        assert!(matches!(gamma_half(h(0)), Err(Error::NonPositiveArgument(_))));
        assert!(matches!(gamma_half(h(-1)), Err(Error::NonPositiveArgument(_))));
    }

    #[test]
    fn gamma_recurrence() {
        for t in 1..40 {
            let a = h(t);
            let lhs = gamma_half(a.add_int(1)).unwrap();
            let rhs = gamma_half(a).unwrap().scale_rational(&a.to_rational());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn reciprocal_gamma_negative() {
        // Gamma(-1/2) = -2 sqrt(pi)
        assert_eq!(reciprocal_gamma_half(h(-1)), PiScaled::real(rat(-1, 2), -1));
        assert!(reciprocal_gamma_half(h(0)).is_zero());
        assert!(reciprocal_gamma_half(h(-4)).is_zero());
        assert_eq!(reciprocal_gamma_half(h(5)), PiScaled::real(rat(4, 3), -1));
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(h(3), 2), rat(15, 4));
        assert_eq!(pochhammer(h(-2), 3), int(0));
        assert_eq!(pochhammer(h(7), 0), int(1));
    }

    #[test]
    fn gamma_ratio_matches_gamma() {
        for a in 1..20 {
            for d in 0..6 {
                let b = h(a + 2 * d);
                let r = gamma_ratio(b, h(a)).unwrap();
                let q = gamma_half(b).unwrap().div(&gamma_half(h(a)).unwrap()).unwrap();
                assert_eq!(q, PiScaled::from_rational(r.clone()));
                assert_eq!(gamma_ratio(h(a), b).unwrap(), r.recip());
            }
        }
    }

    #[test]
    fn add_requires_matching_exponent() {
        let a = PiScaled::real(int(1), 1);
        let b = PiScaled::real(int(1), 0);
        assert_eq!(a.add(&b), Err(Error::PiExponentMismatch { left: 1, right: 0 }));
        assert_eq!(a.add(&PiScaled::zero()).unwrap(), a);
        assert_eq!(a.add(&a).unwrap(), PiScaled::real(int(2), 1));
    }

    #[test]
    fn float_conversion() {
        let v = PiScaled::real(rat(3, 4), 1).to_f64();
        let want = 1.329_340_388_179_137;
        assert!(((v - want) / want).abs() < 4.0 * f64::EPSILON);
        assert!((pi_power(-3) * std::f64::consts::PI.powf(1.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_roundtrip() {
        let p = PiScaled::new(gaussian(rat(-3, 4), int(2)), -1);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"re":"-3/4","im":"2/1","half_pi":-1}"#);
        let q: PiScaled = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 5), BigInt::from(0));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
