//! Exact scalars: the rationals and quadratic extensions `Q(√a)`.
//!
//! Everything downstream is generic over [`Scalar`], so the same linear
//! algebra, Lie algebra and module code runs over both fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Which field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldKind {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "QuadExt")]
    QuadExt { a: i64 },
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::QuadExt { a } => write!(f, "Q(sqrt({a}))"),
        }
    }
}

/// Exact field element. Implemented for [`Rational`] and [`QuadExt`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;
    /// The rational value, when the element lies in `Q`.
    fn to_rational(&self) -> Option<Rational>;
    /// The nontrivial Galois conjugate (identity over `Q`).
    fn conj(&self) -> Self;
    /// A square root inside the same field, if one exists.
    fn sqrt(&self) -> Option<Self>;
    fn kind(&self) -> FieldKind;
    /// Deterministic total order used for tie-breaking only.
    fn total_cmp(&self, other: &Self) -> Ordering;
    /// Largest decimal length among the numerators/denominators.
    fn digits(&self) -> usize;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    /// `self / other`; panics on division by zero.
    fn quo(&self, other: &Self) -> Self {
        self.clone() * &other.inv().expect("division by zero")
    }

    /// Factor `s` with `self * s^2` in a simpler square class. Default: 1.
    fn square_class_scale(&self) -> Self {
        Self::one()
    }

    /// Optional faster kernel computation; `None` falls back to elimination.
    fn fast_kernel(_m: &crate::linalg::Mat<Self>) -> Option<Vec<Vec<Self>>> {
        None
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| Error::Parse(format!("invalid rational `{t}`")))
}

pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = arith::exact_sqrt(r.numer())?;
    let d = arith::exact_sqrt(r.denom())?;
    Some(Rational::new(n, d))
}

pub fn rational_digits(r: &Rational) -> usize {
    let n = r.numer().abs().to_string().len();
    let d = r.denom().to_string().len();
    n.max(d)
}

impl Scalar for Rational {
    fn fast_kernel(m: &crate::linalg::Mat<Self>) -> Option<Vec<Vec<Self>>> {
        if m.rows() * m.cols() < 256 {
            return None;
        }
        crate::modular::kernel_rational(m)
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn digits(&self) -> usize {
        rational_digits(self)
    }

    /// `d * s^2` becomes an integer with the small square factors removed.
    fn square_class_scale(&self) -> Self {
        if Zero::is_zero(self) {
            return <Rational as One>::one();
        }
        let den = self.denom().clone();
        let mut m: BigInt = self.numer() * &den;
        let mut s = Rational::from_integer(den);
        let mut p: u64 = 2;
        while p < 1000 {
            let pp = BigInt::from(p * p);
            while !m.is_zero() && (&m % &pp).is_zero() {
                m /= &pp;
                s /= Rational::from_integer(BigInt::from(p));
            }
            p += 1;
        }
        if let Some(r) = arith::exact_sqrt(&m.abs()) {
            if r > BigInt::one() {
                s /= Rational::from_integer(r);
            }
        }
        s
    }
}

/// Element `x + y·√a` of the field `Q(√a)`.
///
/// `a` is squarefree and not a square. The value `a = 0` marks an element
/// that has not been tied to an extension yet (only possible when `y = 0`);
/// it adopts the extension of whatever it is combined with.
#[derive(Clone, Debug)]
pub struct QuadExt {
    pub x: Rational,
    pub y: Rational,
    a: i64,
}

fn join_ext(a1: i64, a2: i64) -> i64 {
    match (a1, a2) {
        (0, b) => b,
        (b, 0) => b,
        (b, c) if b == c => b,
        (b, c) => panic!("mixing elements of Q(sqrt({b})) and Q(sqrt({c}))"),
    }
}

impl QuadExt {
    /// Builds `x + y√a`. The extension is stored by the squarefree part `d`
    /// of `a = m²·d`, and `y` is rescaled to `m·y` so the value is unchanged.
    pub fn new(x: Rational, y: Rational, a: i64) -> Result<Self> {
        let d = normalize_extension(a)?;
        let m = arith::exact_sqrt(&BigInt::from(a / d)).expect("a / squarefree(a) is a square");
        Ok(QuadExt {
            x,
            y: y * Rational::from_integer(m),
            a: d,
        })
    }

    /// The generator `√a` of `Q(√a)`.
    pub fn sqrt_of(a: i64) -> Result<Self> {
        Self::new(<Rational as Zero>::zero(), <Rational as One>::one(), a)
    }

    pub fn embed(r: Rational, a: i64) -> Self {
        QuadExt {
            x: r,
            y: <Rational as Zero>::zero(),
            a,
        }
    }

    pub fn ext(&self) -> i64 {
        self.a
    }

    /// `x² − a·y²`.
    pub fn norm(&self) -> Rational {
        &self.x * &self.x - Rational::from_integer(self.a.into()) * &self.y * &self.y
    }

    pub fn trace(&self) -> Rational {
        &self.x + &self.x
    }

    /// Sign under the embedding sending `√a` to `+√a` (`plus = true`) or
    /// `−√a`; only meaningful for real fields (`a > 0`).
    pub fn real_sign(&self, plus: bool) -> i32 {
        let y = if plus {
            self.y.clone()
        } else {
            -self.y.clone()
        };
        let sx = sign(&self.x);
        let sy = sign(&y);
        if sy == 0 {
            return sx;
        }
        if sx == 0 || sx == sy {
            return sy;
        }
        // opposite signs: compare x² with a·y²
        let lhs = &self.x * &self.x;
        let rhs = Rational::from_integer(self.a.into()) * &y * &y;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => 0,
        }
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Squarefree part of `a`, rejecting squares (which would not give a field).
pub fn normalize_extension(a: i64) -> Result<i64> {
    if a == 0 {
        return Err(Error::InvalidArgument(
            "extension parameter must be nonzero".into(),
        ));
    }
    let d = arith::squarefree_part(&BigInt::from(a))?;
    if d == BigInt::one() {
        return Err(Error::InvalidArgument(format!(
            "{a} is a square; Q(sqrt({a})) is not a field"
        )));
    }
    Ok(i64::try_from(d).expect("squarefree part fits"))
}

/// Square root in `Q(√a)`, or `None` when `z` is not a square there.
pub fn qext_sqrt(z: &QuadExt) -> Option<QuadExt> {
    if Zero::is_zero(&z.y) {
        if let Some(r) = rational_sqrt(&z.x) {
            return Some(QuadExt {
                x: r,
                y: <Rational as Zero>::zero(),
                a: z.a,
            });
        }
        if z.a == 0 {
            return None;
        }
        // z = a·q²  ⇒  √z = q·√a
        let q2 = &z.x / Rational::from_integer(z.a.into());
        let q = rational_sqrt(&q2)?;
        return Some(QuadExt {
            x: <Rational as Zero>::zero(),
            y: q,
            a: z.a,
        });
    }
    let n = rational_sqrt(&z.norm())?;
    let two = Rational::from_integer(2.into());
    for s in [n.clone(), -n] {
        let p2 = (&z.x + &s) / &two;
        let Some(p) = rational_sqrt(&p2) else {
            continue;
        };
        if Zero::is_zero(&p) {
            continue;
        }
        let q = &z.y / (&two * &p);
        let w = QuadExt { x: p, y: q, a: z.a };
        if w.clone() * &w == *z {
            return Some(w);
        }
    }
    None
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && (Zero::is_zero(&self.y) || self.a == other.a)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.y) {
            return write!(f, "{}", self.x);
        }
        if Zero::is_zero(&self.x) {
            write!(f, "{}*sqrt({})", self.y, self.a)
        } else if self.y.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.x, -self.y.clone(), self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.a)
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        self + &o
    }
}
impl Add<&QuadExt> for QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        QuadExt {
            a: join_ext(self.a, o.a),
            x: self.x + &o.x,
            y: self.y + &o.y,
        }
    }
}
impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        self - &o
    }
}
impl Sub<&QuadExt> for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        QuadExt {
            a: join_ext(self.a, o.a),
            x: self.x - &o.x,
            y: self.y - &o.y,
        }
    }
}
impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        self * &o
    }
}
impl Mul<&QuadExt> for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let a = join_ext(self.a, o.a);
        if Zero::is_zero(&self.y) && Zero::is_zero(&o.y) {
            return QuadExt {
                x: self.x * &o.x,
                y: <Rational as Zero>::zero(),
                a,
            };
        }
        let ar = Rational::from_integer(a.into());
        let x = &self.x * &o.x + ar * &self.y * &o.y;
        let y = &self.x * &o.y + &self.y * &o.x;
        QuadExt { x, y, a }
    }
}
impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            x: -self.x,
            y: -self.y,
            a: self.a,
        }
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt {
            x: <Rational as Zero>::zero(),
            y: <Rational as Zero>::zero(),
            a: 0,
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.x) && Zero::is_zero(&self.y)
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt {
            x: <Rational as One>::one(),
            y: <Rational as Zero>::zero(),
            a: 0,
        }
    }
}

impl Scalar for QuadExt {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            return None;
        }
        let n = self.norm();
        Some(QuadExt {
            x: &self.x / &n,
            y: -(&self.y / &n),
            a: self.a,
        })
    }
    fn from_rational(r: &Rational) -> Self {
        QuadExt {
            x: r.clone(),
            y: <Rational as Zero>::zero(),
            a: 0,
        }
    }
    fn to_rational(&self) -> Option<Rational> {
        Zero::is_zero(&self.y).then(|| self.x.clone())
    }
    fn conj(&self) -> Self {
        QuadExt {
            x: self.x.clone(),
            y: -self.y.clone(),
            a: self.a,
        }
    }
    fn sqrt(&self) -> Option<Self> {
        qext_sqrt(self)
    }
    fn kind(&self) -> FieldKind {
        if self.a == 0 {
            FieldKind::Rational
        } else {
            FieldKind::QuadExt { a: self.a }
        }
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
    fn digits(&self) -> usize {
        rational_digits(&self.x).max(rational_digits(&self.y))
    }
}

/// Serialized form of a [`QuadExt`]: `{"x": "p/q", "y": "r/s", "a": d}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadExtJson {
    pub x: String,
    pub y: String,
    pub a: i64,
}

impl From<&QuadExt> for QuadExtJson {
    fn from(z: &QuadExt) -> Self {
        QuadExtJson {
            x: z.x.to_string(),
            y: z.y.to_string(),
            a: z.a,
        }
    }
}

impl TryFrom<&QuadExtJson> for QuadExt {
    type Error = Error;
    fn try_from(j: &QuadExtJson) -> Result<Self> {
        QuadExt::new(parse_rational(&j.x)?, parse_rational(&j.y)?, j.a)
    }
}

/// Scalars that can be written to and read from the JSON formats.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => n.as_i64().map(rat_int).ok_or_else(|| {
                Error::Parse(format!("non-integer number {n}; use \"p/q\" strings"))
            }),
            other => Err(Error::Parse(format!("expected rational, found {other}"))),
        }
    }
}

impl JsonScalar for QuadExt {
    fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(QuadExtJson::from(self)).expect("serializable")
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Object(_) => {
                let j: QuadExtJson = serde_json::from_value(v.clone())
                    .map_err(|e| Error::Parse(format!("bad extension element: {e}")))?;
                QuadExt::try_from(&j)
            }
            _ => Ok(QuadExt::from_rational(&Rational::from_json(v)?)),
        }
    }
}

/// Clears denominators of a rational vector and divides by the content,
/// giving a primitive integer vector with the same direction.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for r in v {
        l = l.lcm(r.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|r| (r * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    if g.is_zero() {
        return ints;
    }
    // sign: first nonzero entry positive
    let lead_neg = ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    if lead_neg {
        g = -g;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
