//! Unit-quaternion model of SU(2) and the traceless conjugacy class.
//!
//! A quaternion `x + yi + zj + wk` is stored as the four reals `(x, y, z, w)`.
//! Traceless elements of SU(2) are exactly the purely imaginary unit
//! quaternions, which form a 2-sphere inside the imaginary span.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use approx::AbsDiffEq;

use crate::error::{Error, Result};

/// Tolerance on `|norm - 1|` accepted by the unit constructors.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quaternion {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64, w: f64) -> Self {
        Quaternion { x, y, z, w }
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn real(self) -> f64 {
        self.x
    }

    pub fn imaginary(self) -> PureQuaternion {
        PureQuaternion::new(self.y, self.z, self.w)
    }

    pub fn conjugate(self) -> Self {
        Quaternion::new(self.x, -self.y, -self.z, -self.w)
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Euclidean inner product of the coefficient 4-vectors.
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z + self.w * other.w
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.x * s, self.y * s, self.z * s, self.w * s)
    }

    /// Multiplicative inverse. For unit quaternions this is the conjugate.
    pub fn inverse(self) -> Self {
        self.conjugate().scale(1.0 / self.norm_squared())
    }

    /// Distance between the coefficient 4-vectors.
    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() < UNIT_TOLERANCE
    }

    /// Renormalizes a quaternion that is already unit up to [`UNIT_TOLERANCE`].
    pub fn to_unit(self) -> Result<Self> {
        let n = self.norm();
        if (n - 1.0).abs() < UNIT_TOLERANCE {
            Ok(self.scale(1.0 / n))
        } else {
            Err(Error::NotUnit { norm: n })
        }
    }

    /// Conjugation `g x g⁻¹`.
    pub fn conj_by(g: Quaternion, x: Quaternion) -> Quaternion {
        g * x * g.inverse()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.x * q.x - p.y * q.y - p.z * q.z - p.w * q.w,
            p.x * q.y + p.y * q.x + p.z * q.w - p.w * q.z,
            p.x * q.z - p.y * q.w + p.z * q.x + p.w * q.y,
            p.x * q.w + p.y * q.z - p.z * q.y + p.w * q.x,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;

    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.x + q.x, self.y + q.y, self.z + q.z, self.w + q.w)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.x - q.x, self.y - q.y, self.z - q.z, self.w - q.w)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl AbsDiffEq for Quaternion {
    type Epsilon = f64;

    fn default_epsilon() -> f64 {
        f64::EPSILON
    }

    fn abs_diff_eq(&self, other: &Self, epsilon: f64) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .all(|(a, b)| (a - b).abs() <= epsilon)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &[(self.x, ""), (self.y, "i"), (self.z, "j"), (self.w, "k")])
    }
}

/// An element `yi + zj + wk` of the imaginary span, i.e. of su(2).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PureQuaternion {
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl PureQuaternion {
    pub const ZERO: PureQuaternion = PureQuaternion::new(0.0, 0.0, 0.0);
    pub const I: PureQuaternion = PureQuaternion::new(1.0, 0.0, 0.0);
    pub const J: PureQuaternion = PureQuaternion::new(0.0, 1.0, 0.0);
    pub const K: PureQuaternion = PureQuaternion::new(0.0, 0.0, 1.0);

    pub const fn new(y: f64, z: f64, w: f64) -> Self {
        PureQuaternion { y, z, w }
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        PureQuaternion::new(c[0], c[1], c[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.y, self.z, self.w]
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.y, self.z, self.w)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.y * other.y + self.z * other.z + self.w * other.w
    }

    pub fn cross(self, o: Self) -> Self {
        PureQuaternion::new(
            self.z * o.w - self.w * o.z,
            self.w * o.y - self.y * o.w,
            self.y * o.z - self.z * o.y,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        PureQuaternion::new(self.y * s, self.z * s, self.w * s)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// `exp(v) = cos|v| + (v/|v|) sin|v|`, and `1` for `v = 0`.
    pub fn exp(self) -> Quaternion {
        let angle = self.norm();
        if angle == 0.0 {
            return Quaternion::ONE;
        }
        let s = angle.sin() / angle;
        Quaternion::new(angle.cos(), self.y * s, self.z * s, self.w * s)
    }

    /// `½(q x − x q)`: the velocity of `e^{qt} x e^{−qt}` at `t = 0`, halved.
    pub fn half_commutator(self, x: Quaternion) -> PureQuaternion {
        let q = self.to_quaternion();
        (q * x - x * q).scale(0.5).imaginary()
    }
}

impl Add for PureQuaternion {
    type Output = PureQuaternion;

    fn add(self, o: Self) -> Self {
        PureQuaternion::new(self.y + o.y, self.z + o.z, self.w + o.w)
    }
}

impl Sub for PureQuaternion {
    type Output = PureQuaternion;

    fn sub(self, o: Self) -> Self {
        PureQuaternion::new(self.y - o.y, self.z - o.z, self.w - o.w)
    }
}

impl Neg for PureQuaternion {
    type Output = PureQuaternion;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for PureQuaternion {
    type Output = PureQuaternion;

    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl From<PureQuaternion> for Quaternion {
    fn from(p: PureQuaternion) -> Quaternion {
        p.to_quaternion()
    }
}

impl AbsDiffEq for PureQuaternion {
    type Epsilon = f64;

    fn default_epsilon() -> f64 {
        f64::EPSILON
    }

    fn abs_diff_eq(&self, other: &Self, epsilon: f64) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .all(|(a, b)| (a - b).abs() <= epsilon)
    }
}

impl fmt::Display for PureQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &[(self.y, "i"), (self.z, "j"), (self.w, "k")])
    }
}

/// A point of the conjugacy class `C_i`: a purely imaginary unit quaternion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracelessElement(Quaternion);

impl TracelessElement {
    pub const I: TracelessElement = TracelessElement(Quaternion::I);
    pub const J: TracelessElement = TracelessElement(Quaternion::J);
    pub const K: TracelessElement = TracelessElement(Quaternion::K);

    /// Builds `yi + zj + wk`, renormalizing when the norm is within
    /// [`UNIT_TOLERANCE`] of one.
    pub fn new(y: f64, z: f64, w: f64) -> Result<Self> {
        let q = Quaternion::new(0.0, y, z, w).to_unit()?;
        Ok(TracelessElement(q))
    }

    pub fn from_pure(p: PureQuaternion) -> Result<Self> {
        TracelessElement::new(p.y, p.z, p.w)
    }

    /// Accepts a quaternion whose real part vanishes up to [`UNIT_TOLERANCE`]
    /// and whose norm is one up to the same tolerance. The real part is set
    /// to exactly zero.
    pub fn from_quaternion(q: Quaternion) -> Result<Self> {
        if !q.x.is_finite() || q.x.abs() >= UNIT_TOLERANCE {
            return Err(Error::NotTraceless { real: q.x });
        }
        TracelessElement::new(q.y, q.z, q.w)
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn vector(self) -> PureQuaternion {
        self.0.imaginary()
    }

    /// `g x g⁻¹`, which stays in `C_i` for unit `g`.
    pub fn conj_by(self, g: Quaternion) -> TracelessElement {
        let v = Quaternion::conj_by(g, self.0).imaginary();
        let n = v.norm();
        TracelessElement(v.scale(1.0 / n).to_quaternion())
    }

    pub fn distance(self, other: TracelessElement) -> f64 {
        self.0.distance(other.0)
    }
}

impl From<TracelessElement> for Quaternion {
    fn from(t: TracelessElement) -> Quaternion {
        t.0
    }
}

impl Neg for TracelessElement {
    type Output = TracelessElement;

    fn neg(self) -> TracelessElement {
        TracelessElement(-self.0)
    }
}

impl fmt::Display for TracelessElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// Prints a linear combination such as `-i + 2j`, dropping numerically zero
// coefficients and snapping near-integers.
fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(f64, &str)]) -> fmt::Result {
    let mut wrote = false;
    for &(c, unit) in terms {
        if c.abs() < 1e-9 {
            continue;
        }
        let c = if (c - c.round()).abs() < 1e-9 { c.round() } else { c };
        let mag = c.abs();
        if wrote {
            f.write_str(if c < 0.0 { " - " } else { " + " })?;
        } else if c < 0.0 {
            f.write_str("-")?;
        }
        if unit.is_empty() || mag != 1.0 {
            write!(f, "{}", format_coefficient(mag))?;
        }
        f.write_str(unit)?;
        wrote = true;
    }
    if !wrote {
        f.write_str("0")?;
    }
    Ok(())
}

fn format_coefficient(c: f64) -> String {
    if c == c.round() {
        format!("{}", c as i64)
    } else {
        let s = format!("{:.9}", c);
        s.trim_end_matches('0').to_string()
    }
}
