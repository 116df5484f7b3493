//! Exact Gaussian rationals `Q(i)`.
//!
//! Every coefficient in the symmetric-function algebra is a [`Scalar`]. Real
//! quantities (Jack coefficients, norms, dimensions) live in [`Q`] directly;
//! the complex part only appears through principal-series parameters.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_abs = int.trim_start_matches(['-', '+']);
        let whole: BigInt = if int_abs.is_empty() {
            BigInt::zero()
        } else {
            int_abs.parse().map_err(|_| bad())?
        };
        let frac_n: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num::pow(BigInt::from(10), frac.len());
        let v = Q::new(whole * &scale + frac_n, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Canonical `"p/q"` (or `"p"` for integers) rendering used on every wire format.
pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn q_to_f64(v: &Q) -> f64 {
    if let Some(x) = v.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Components overflow f64 individually: rescale to a ~64-bit quotient first.
    let shift = v.numer().bits() as i64 - v.denom().bits() as i64;
    if shift > 1030 {
        return if v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    if shift < -1080 {
        return 0.0;
    }
    let k = 64 - shift;
    let quo = if k >= 0 {
        (v.numer() << (k as usize)) / v.denom()
    } else {
        v.numer() / (v.denom() << ((-k) as usize))
    };
    let mut x = quo.to_f64().unwrap_or(0.0);
    let mut e = -k;
    while e > 500 {
        x *= 2f64.powi(500);
        e -= 500;
    }
    while e < -500 {
        x *= 2f64.powi(-500);
        e += 500;
    }
    x * 2f64.powi(e as i32)
}

/// Element `re + im·i` of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Q,
    pub im: Q,
}

impl Scalar {
    pub fn new(re: Q, im: Q) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Q) -> Self {
        Scalar { re, im: Q::zero() }
    }

    pub fn int(n: i64) -> Self {
        Scalar::real(q(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::real(qr(num, den))
    }

    pub fn i() -> Self {
        Scalar::new(Q::zero(), Q::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|x|^2`, always an exact rational.
    pub fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Scalar {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero scalar");
        Scalar::new(&self.re / &n, -&self.im / &n)
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Q) -> Scalar {
        Scalar::new(&self.re * r, &self.im * r)
    }

    /// Real part when the imaginary part vanishes.
    pub fn as_real(&self) -> Option<&Q> {
        if self.im.is_zero() {
            Some(&self.re)
        } else {
            None
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (q_to_f64(&self.re), q_to_f64(&self.im))
    }

    pub fn re_f64(&self) -> f64 {
        q_to_f64(&self.re)
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64_pair();
        a.hypot(b)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::real(Q::one())
    }
}

impl From<Q> for Scalar {
    fn from(v: Q) -> Self {
        Scalar::real(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::real(&self.re * &o.re);
        }
        Scalar::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero scalar");
            return Scalar::new(&self.re / &o.re, &self.im / &o.re);
        }
        self * &o.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.re, -&self.im)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_q(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", fmt_q(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", fmt_q(&self.re), fmt_q(&-&self.im))
        } else {
            write!(f, "{}+{}i", fmt_q(&self.re), fmt_q(&self.im))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts a plain rational (`"3/4"`) or `re,im` pair (`"1,2"` for `1+2i`).
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.split_once(',') {
            Some((re, im)) => Ok(Scalar::new(parse_q(re)?, parse_q(im)?)),
            None => Ok(Scalar::real(parse_q(s)?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarRepr {
            re: fmt_q(&self.re),
            im: fmt_q(&self.im),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Pair(ScalarRepr),
            Plain(String),
        }
        let parsed = match Either::deserialize(d)? {
            Either::Pair(r) => parse_q(&r.re).and_then(|re| Ok(Scalar::new(re, parse_q(&r.im)?))),
            Either::Plain(s) => parse_q(&s).map(Scalar::real),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Rising factorial `(x)_n = x(x+1)…(x+n-1)`, extended by `(x)_{-1} = 1/(x-1)`.
pub fn pochhammer(x: &Scalar, n: i64) -> Scalar {
    if n == -1 {
        return (x - &Scalar::one()).inv();
    }
    assert!(n >= 0, "pochhammer index below -1");
    let mut acc = Scalar::one();
    for k in 0..n {
        acc = &acc * &(x + &Scalar::int(k));
    }
    acc
}

pub fn pochhammer_q(x: &Q, n: i64) -> Q {
    if n == -1 {
        return (x - Q::one()).recip();
    }
    assert!(n >= 0, "pochhammer index below -1");
    (0..n).fold(Q::one(), |acc, k| acc * (x + q(k)))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: u64) -> Q {
    Q::from_integer(factorial(n))
}
