//! Exact scalars: rationals, planar points, and elements of a real quadratic
//! field `Q(sqrt n)` used for levels in a fixed direction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::rational::Ratio;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Parses `"3"`, `"-3/2"` or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) || fp.len() > 18 {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs: i128 = ip.trim_start_matches(['-', '+']).parse().or_else(|e| {
            if ip.trim_start_matches(['-', '+']).is_empty() {
                Ok(0)
            } else {
                Err(e)
            }
        }).map_err(|_| bad())?;
        let den = 10i128.pow(fp.len() as u32);
        let frac: i128 = fp.parse().map_err(|_| bad())?;
        let v = Q::new(ip_abs * den + frac, den);
        return Ok(if neg { -v } else { v });
    }
    s.parse::<i128>().map(Q::from_integer).map_err(|_| bad())
}

pub fn fmt_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn q_to_f64(v: &Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Serde adapter: rationals travel as strings (`"3/2"`) and also accept bare integers.
pub mod qserde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(q(i as i128)),
            Raw::Str(s) => parse_q(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// A point of the plane with rational coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i128, y: i128) -> Self {
        Point::new(q(x), q(y))
    }

    pub fn dot(&self, d: (i64, i64)) -> Q {
        self.x * q(d.0 as i128) + self.y * q(d.1 as i128)
    }

    pub fn lerp(&self, other: &Point, s: Q) -> Point {
        Point::new(self.x + (other.x - self.x) * s, self.y + (other.y - self.y) * s)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_q(&self.x), fmt_q(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "qserde")] Q, #[serde(with = "qserde")] Q);
        let Wrap(x, y) = Wrap::deserialize(d)?;
        Ok(Point::new(x, y))
    }
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// `rat + surd * sqrt(radicand)`, exact. Values with a zero surd part are
/// stored with radicand 1 so that they mix freely with any field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    rat: Q,
    surd: Q,
    radicand: i128,
}

impl Quad {
    pub fn new(rat: Q, surd: Q, radicand: i128) -> Self {
        assert!(radicand >= 1, "radicand must be positive");
        if surd.is_zero() {
            return Quad { rat, surd, radicand: 1 };
        }
        if let Some(k) = isqrt(radicand) {
            return Quad { rat: rat + surd * q(k), surd: Q::zero(), radicand: 1 };
        }
        Quad { rat, surd, radicand }
    }

    pub fn rational(rat: Q) -> Self {
        Quad { rat, surd: Q::zero(), radicand: 1 }
    }

    pub fn zero() -> Self {
        Quad::rational(Q::zero())
    }

    /// `sqrt(n)` itself.
    pub fn sqrt(n: i128) -> Self {
        Quad::new(Q::zero(), Q::one(), n)
    }

    pub fn rat_part(&self) -> Q {
        self.rat
    }

    pub fn surd_part(&self) -> Q {
        self.surd
    }

    pub fn radicand(&self) -> i128 {
        self.radicand
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.surd.is_zero().then_some(self.rat)
    }

    fn common(a: i128, b: i128) -> i128 {
        match (a, b) {
            (1, n) | (n, 1) => n,
            (m, n) if m == n => m,
            (m, n) => panic!("mixing Q(sqrt {m}) with Q(sqrt {n})"),
        }
    }

    pub fn compatible(&self, other: &Quad) -> bool {
        self.radicand == 1 || other.radicand == 1 || self.radicand == other.radicand
    }

    pub fn scale(&self, k: Q) -> Quad {
        Quad::new(self.rat * k, self.surd * k, self.radicand)
    }

    /// Division by `sqrt(n)`; the result lives in the same field.
    pub fn div_sqrt(&self, n: i128) -> Quad {
        let n = Quad::common(self.radicand, n);
        match isqrt(n) {
            Some(k) => self.scale(Q::new(1, k)),
            None => Quad::new(self.surd, self.rat / q(n), n),
        }
    }

    pub fn signum(&self) -> i32 {
        let a = self.rat.signum();
        let b = self.surd.signum();
        let (sa, sb) = (sign_i(&a), sign_i(&b));
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare rat^2 with surd^2 * n
        let lhs = self.rat * self.rat;
        let rhs = self.surd * self.surd * q(self.radicand);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.rat) + q_to_f64(&self.surd) * (self.radicand as f64).sqrt()
    }
}

fn sign_i(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        let n = Quad::common(self.radicand, o.radicand);
        Quad::new(self.rat + o.rat, self.surd + o.surd, n)
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, o: Quad) -> Quad {
        self + (-o)
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(-self.rat, -self.surd, self.radicand)
    }
}

impl From<Q> for Quad {
    fn from(v: Q) -> Self {
        Quad::rational(v)
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", fmt_q(&self.rat));
        }
        if self.rat.is_zero() {
            write!(f, "{}*sqrt({})", fmt_q(&self.surd), self.radicand)
        } else if self.surd.is_negative() {
            write!(f, "{}-{}*sqrt({})", fmt_q(&self.rat), fmt_q(&-self.surd), self.radicand)
        } else {
            write!(f, "{}+{}*sqrt({})", fmt_q(&self.rat), fmt_q(&self.surd), self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/2").unwrap(), qf(3, 2));
        assert_eq!(parse_q("-0.25").unwrap(), qf(-1, 4));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert!(parse_q("x").is_err());
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn quad_sign_and_order() {
        let s2 = Quad::sqrt(2);
        assert_eq!(s2.signum(), 1);
        assert!(Quad::rational(qf(7, 5)) < s2);
        assert!(Quad::rational(qf(3, 2)) > s2);
        let z = s2 - Quad::sqrt(2);
        assert_eq!(z, Quad::zero());
        assert_eq!(Quad::sqrt(4), Quad::rational(q(2)));
        // (1 + 2 sqrt 5) / sqrt 5 = 2 + sqrt5/5
        let v = Quad::new(q(1), q(2), 5).div_sqrt(5);
        assert_eq!(v, Quad::new(q(2), qf(1, 5), 5));
    }

    #[test]
    fn display_quad() {
        assert_eq!(Quad::new(q(1), q(-2), 3).to_string(), "1-2*sqrt(3)");
        assert_eq!(Quad::rational(qf(-1, 2)).to_string(), "-1/2");
    }
}
