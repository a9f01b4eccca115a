//! Orientation bookkeeping on `C_i⁴` and the pillowcase.
//!
//! The map `f(X₁, X₂, Y₁, Y₂) = (X₁X₂)(Y₁Y₂)⁻¹` has `f⁻¹(1)` = the quadruples
//! with `ab = cd`. Its tangent space is `ker df`, which splits as the orbit
//! directions of the conjugation action plus the two torus directions of the
//! pillowcase parametrization. Orientations are compared through
//! change-of-basis determinants against the product orientation on `C_i⁴`:
//!
//! * a complement `{w₁, w₂, w₃}` is positive when `df` maps it to a positive
//!   basis of su(2);
//! * a pair `{p₁, p₂}` is a positive basis of the pillowcase when
//!   `{w₁, w₂, w₃, p₁, p₂, v₁, v₂, v₃}` is positive in `T C_i⁴`, where `vᵢ`
//!   is the orbit frame generated by `i, j, k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pillowcase::{param_g, Quadruple, TorusLift};
use crate::quat::{PureQuaternion, Quaternion, TracelessElement};
use crate::repspace::{is_irreducible, RepTuple};
use crate::Sign;

/// Determinants at or below this magnitude count as degenerate.
pub const DETERMINANT_TOLERANCE: f64 = 1e-6;
/// Allowed residual when expressing vectors in a frame that should span them.
pub const SPAN_TOLERANCE: f64 = 1e-8;
/// Ratio of smallest to largest singular value below which a frame is rejected.
pub const CONDITION_TOLERANCE: f64 = 1e-8;

/// One pure quaternion per entry of a quadruple: a tangent vector to `C_i⁴`
/// when each component is orthogonal to the matching entry.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct TangentVector4(pub [PureQuaternion; 4]);

impl TangentVector4 {
    pub const ZERO: TangentVector4 = TangentVector4([PureQuaternion::ZERO; 4]);

    pub fn new(a: PureQuaternion, b: PureQuaternion, c: PureQuaternion, d: PureQuaternion) -> Self {
        TangentVector4([a, b, c, d])
    }

    pub fn components(&self) -> &[PureQuaternion; 4] {
        &self.0
    }

    /// Places `v` in slot `slot` and zero elsewhere.
    pub fn single(slot: usize, v: PureQuaternion) -> Self {
        let mut out = TangentVector4::ZERO;
        out.0[slot] = v;
        out
    }

    pub fn scale(self, s: f64) -> Self {
        TangentVector4(self.0.map(|p| p.scale(s)))
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|p| p.dot(*p)).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &TangentVector4) -> f64 {
        (*self - *other).norm()
    }

    /// Componentwise `g v g⁻¹`, the pushforward of conjugation by `g`.
    pub fn conj_by(&self, g: Quaternion) -> Self {
        TangentVector4(self.0.map(|p| Quaternion::conj_by(g, p.to_quaternion()).imaginary()))
    }

    /// Largest `|⟨componentᵢ, baseᵢ⟩|`: zero for vectors tangent to `C_i⁴` at `base`.
    pub fn normal_defect(&self, base: &Quadruple) -> f64 {
        self.0.iter().zip(base).map(|(p, x)| p.dot(x.vector()).abs()).fold(0.0, f64::max)
    }
}

impl Add for TangentVector4 {
    type Output = TangentVector4;

    fn add(self, o: Self) -> Self {
        TangentVector4([0, 1, 2, 3].map(|n| self.0[n] + o.0[n]))
    }
}

impl Sub for TangentVector4 {
    type Output = TangentVector4;

    fn sub(self, o: Self) -> Self {
        TangentVector4([0, 1, 2, 3].map(|n| self.0[n] - o.0[n]))
    }
}

impl Neg for TangentVector4 {
    type Output = TangentVector4;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for TangentVector4 {
    type Output = TangentVector4;

    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for TangentVector4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Vectors that can be written in coordinates of a Euclidean space.
pub trait Coordinates {
    fn coordinates(&self) -> Vec<f64>;
}

impl Coordinates for TangentVector4 {
    fn coordinates(&self) -> Vec<f64> {
        self.0.iter().flat_map(|p| p.to_array()).collect()
    }
}

impl Coordinates for PureQuaternion {
    fn coordinates(&self) -> Vec<f64> {
        self.to_array().to_vec()
    }
}

fn matrix_of<V: Coordinates>(vectors: &[V]) -> DMatrix<f64> {
    let cols: Vec<Vec<f64>> = vectors.iter().map(|v| v.coordinates()).collect();
    let rows = cols.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

/// An ordered, linearly independent list of vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<V>(Vec<V>);

impl<V: Coordinates> Frame<V> {
    pub fn new(vectors: Vec<V>) -> Result<Self> {
        let m = matrix_of(&vectors);
        if vectors.is_empty() || m.nrows() < vectors.len() {
            return Err(Error::DegenerateFrame { determinant: 0.0 });
        }
        let s = m.singular_values();
        let (min, max) = (s.min(), s.max());
        if !(min > CONDITION_TOLERANCE * max) {
            return Err(Error::DegenerateFrame { determinant: min });
        }
        Ok(Frame(vectors))
    }
}

impl<V> Frame<V> {
    pub fn vectors(&self) -> &[V] {
        &self.0
    }

    pub fn into_vectors(self) -> Vec<V> {
        self.0
    }
}

impl<V> std::ops::Deref for Frame<V> {
    type Target = [V];

    fn deref(&self) -> &[V] {
        &self.0
    }
}

/// Coefficients of `test` in terms of `reference`: column `c` holds the
/// coordinates of `test[c]`. `reference` must be independent and span every
/// test vector.
pub fn change_of_basis<V: Coordinates>(test: &[V], reference: &[V]) -> Result<DMatrix<f64>> {
    let r = matrix_of(reference);
    let t = matrix_of(test);
    if reference.is_empty() || r.nrows() != t.nrows() && !test.is_empty() {
        return Err(Error::LengthMismatch { expected: reference.len(), found: test.len() });
    }
    let svd = r.clone().svd(true, true);
    let s = &svd.singular_values;
    if !(s.min() > CONDITION_TOLERANCE * s.max()) {
        return Err(Error::DegenerateFrame { determinant: s.min() });
    }
    let coeffs = svd
        .solve(&t, 0.0)
        .map_err(|_| Error::DegenerateFrame { determinant: 0.0 })?;
    let residual = (&r * &coeffs - &t).amax();
    let scale = t.amax().max(1.0);
    if !(residual <= SPAN_TOLERANCE * scale) {
        return Err(Error::NotInSpan { residual });
    }
    Ok(coeffs)
}

/// Sign of the change-of-basis determinant from `reference` to `test`.
pub fn orientation_sign<V: Coordinates>(test: &[V], reference: &[V]) -> Result<Sign> {
    if test.len() != reference.len() {
        return Err(Error::LengthMismatch { expected: reference.len(), found: test.len() });
    }
    let det = change_of_basis(test, reference)?.determinant();
    if !(det.abs() > DETERMINANT_TOLERANCE) {
        return Err(Error::DegenerateFrame { determinant: det });
    }
    Ok(Sign::of(det).expect("nonzero determinant"))
}

/// Exact determinant of an integer matrix by fraction-free elimination.
pub fn integer_determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        return 1;
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Rounds every entry to the nearest integer, provided all entries are
/// within `tol` of one.
pub fn integer_matrix(m: &DMatrix<f64>, tol: f64) -> Option<Vec<Vec<i64>>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| {
                    let x = m[(r, c)];
                    ((x - x.round()).abs() <= tol).then_some(x.round() as i64)
                })
                .collect()
        })
        .collect()
}

/// `df` at `base` applied to `v`, translated back to `T₁SU(2) = su(2)`.
pub fn df(base: &Quadruple, v: &TangentVector4) -> PureQuaternion {
    let [a, b, c, d] = base.map(|x| x.quaternion());
    let [va, vb, vc, vd] = v.0.map(|p| p.to_quaternion());
    let (c_inv, d_inv) = (c.conjugate(), d.conjugate());
    let f = a * b * d_inv * c_inv;
    let deriv = va * b * d_inv * c_inv
        + a * vb * d_inv * c_inv
        - a * b * d_inv * vd * d_inv * c_inv
        - a * b * d_inv * c_inv * vc * c_inv;
    (deriv * f.inverse()).imaginary()
}

/// `(∂g/∂θ₁, ∂g/∂θ₂)` at `t`.
pub fn pillowcase_frame(t: TorusLift) -> Result<[TangentVector4; 2]> {
    if t.is_corner() {
        return Err(Error::SingularPoint);
    }
    let rot_j = |theta: f64| (PureQuaternion::K.scale(theta).exp() * Quaternion::J).imaginary();
    let (t1, t2) = (t.theta1, t.theta2);
    let zero = PureQuaternion::ZERO;
    let u1 = TangentVector4::new(zero, rot_j(t1), -rot_j(t2 - t1), zero);
    let u2 = TangentVector4::new(zero, zero, rot_j(t2 - t1), rot_j(t2));
    Ok([u1, u2])
}

/// `vₙ = ½[qₙ, base]` componentwise, for `qₙ = i, j, k`.
pub fn orbit_frame(base: &Quadruple) -> Result<[TangentVector4; 3]> {
    if !is_irreducible(&RepTuple::new(base.to_vec())) {
        return Err(Error::ReduciblePoint);
    }
    let frame = [PureQuaternion::I, PureQuaternion::J, PureQuaternion::K]
        .map(|q| TangentVector4(base.map(|x| q.half_commutator(x.quaternion()))));
    Frame::new(frame.to_vec()).map_err(|_| Error::ReduciblePoint)?;
    Ok(frame)
}

/// Positively oriented basis `(e₁, e₂)` of `T_x C_i`, meaning
/// `det[x, e₁, e₂] > 0`. `e₁` is the axis cyclically after the dominant
/// axis of `x`, projected and normalized, and `e₂ = x × e₁`. At `i` this is
/// `(j, k)` and at `j` it is `(k, i)`.
pub fn sphere_tangent_basis(x: TracelessElement) -> [PureQuaternion; 2] {
    let v = x.vector();
    let c = v.to_array();
    let dominant = (0..3).max_by(|&p, &q| c[p].abs().total_cmp(&c[q].abs())).unwrap_or(0);
    let mut axis = [0.0; 3];
    axis[(dominant + 1) % 3] = 1.0;
    let axis = PureQuaternion::from_array(axis);
    let e1 = axis - v.scale(axis.dot(v));
    let e1 = e1.scale(1.0 / e1.norm());
    [e1, v.cross(e1)]
}

/// The product orientation basis of `T C_i⁴ = T C_i² × T C_i²`: the sphere
/// tangent basis of each entry in turn.
pub fn product_orientation_basis(base: &Quadruple) -> Frame<TangentVector4> {
    let vectors = base
        .iter()
        .enumerate()
        .flat_map(|(slot, &x)| sphere_tangent_basis(x).map(|e| TangentVector4::single(slot, e)))
        .collect();
    Frame(vectors)
}

fn standard_su2() -> [PureQuaternion; 3] {
    [PureQuaternion::I, PureQuaternion::J, PureQuaternion::K]
}

fn df_determinant(base: &Quadruple, w: &[TangentVector4; 3]) -> f64 {
    let images = w.map(|v| df(base, &v));
    images[0].dot(images[1].cross(images[2]))
}

/// The base point `(i, j, i, j)` of the Hopf computation.
pub fn hopf_base() -> Quadruple {
    [TracelessElement::I, TracelessElement::J, TracelessElement::I, TracelessElement::J]
}

fn is_hopf_base(base: &Quadruple) -> bool {
    base.iter().zip(hopf_base()).all(|(x, y)| x.distance(y) < 1e-12)
}

/// Three tangent vectors whose `df`-images form a positive basis of su(2).
///
/// At `(i, j, i, j)` this is `((k,0,0,0), (0,k,0,0), (j,0,0,0))`; elsewhere
/// the triple of product-basis vectors with the best-conditioned image is
/// taken, negating the first vector when needed.
pub fn complement_frame(base: &Quadruple) -> Result<[TangentVector4; 3]> {
    if is_hopf_base(base) {
        let k = PureQuaternion::K;
        return Ok([
            TangentVector4::single(0, k),
            TangentVector4::single(1, k),
            TangentVector4::single(0, PureQuaternion::J),
        ]);
    }
    let beta = product_orientation_basis(base).into_vectors();
    let mut best: Option<([TangentVector4; 3], f64)> = None;
    for p in 0..beta.len() {
        for q in p + 1..beta.len() {
            for r in q + 1..beta.len() {
                let w = [beta[p], beta[q], beta[r]];
                let det = df_determinant(base, &w);
                if best.as_ref().is_none_or(|(_, d)| det.abs() > d.abs()) {
                    best = Some((w, det));
                }
            }
        }
    }
    match best {
        Some((mut w, det)) if det.abs() > DETERMINANT_TOLERANCE => {
            if det < 0.0 {
                w[0] = -w[0];
            }
            Ok(w)
        }
        _ => Err(Error::DegenerateComplement),
    }
}

/// Which ordering of the torus frame `(u₁, u₂)` is positive on the pillowcase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedPillowcaseBasis {
    pub vectors: [TangentVector4; 2],
    /// True when the positive ordering is `(u₂, u₁)`.
    pub swapped: bool,
}

impl OrientedPillowcaseBasis {
    pub fn label(&self) -> &'static str {
        if self.swapped {
            "(u2, u1)"
        } else {
            "(u1, u2)"
        }
    }
}

/// Orients the pair `(p₁, p₂)` spanning a complement of the orbit directions
/// in `ker df`, using the complement `w`, which must have positive `df`-image.
pub fn orient_pillowcase_pair(
    base: &Quadruple,
    pair: [TangentVector4; 2],
    w: &[TangentVector4; 3],
) -> Result<OrientedPillowcaseBasis> {
    let images = w.map(|v| df(base, &v));
    if orientation_sign(&images, &standard_su2()).map_err(|_| Error::DegenerateComplement)?
        != Sign::Positive
    {
        return Err(Error::DegenerateComplement);
    }
    let v = orbit_frame(base)?;
    let s = [w[0], w[1], w[2], pair[0], pair[1], v[0], v[1], v[2]];
    let beta = product_orientation_basis(base);
    let sign = orientation_sign(&s, &beta)?;
    Ok(match sign {
        Sign::Positive => OrientedPillowcaseBasis { vectors: pair, swapped: false },
        Sign::Negative => OrientedPillowcaseBasis { vectors: [pair[1], pair[0]], swapped: true },
    })
}

/// The positive ordering of `(u₁, u₂)` at the torus point `t`.
pub fn oriented_pillowcase_basis(t: TorusLift) -> Result<OrientedPillowcaseBasis> {
    let [u1, u2] = pillowcase_frame(t)?;
    let base = param_g(t.theta1, t.theta2);
    orient_pillowcase_pair(&base, [u1, u2], &complement_frame(&base)?)
}

/// Coordinates `(c₁, c₂)` with `v ≡ c₁p₁ + c₂p₂` modulo the orbit
/// directions, by least squares against `(p₁, p₂, v₁, v₂, v₃)`.
pub fn pillowcase_coordinates(
    base: &Quadruple,
    pair: &[TangentVector4; 2],
    v: &TangentVector4,
) -> Result<[f64; 2]> {
    let orbit = orbit_frame(base)?;
    let reference = [pair[0], pair[1], orbit[0], orbit[1], orbit[2]];
    let m = change_of_basis(std::slice::from_ref(v), &reference)?;
    Ok([m[(0, 0)], m[(1, 0)]])
}
