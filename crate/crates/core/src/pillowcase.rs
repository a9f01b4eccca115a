//! The pillowcase `P = {(a, b, c, d) ∈ C_i⁴ | ab = cd}/conj`.
//!
//! Every class has a representative on the torus
//! `g(θ₁, θ₂) = (i, e^{kθ₁}i, e^{k(θ₂−θ₁)}i, e^{kθ₂}i)`, unique up to the
//! involution `(θ₁, θ₂) ↦ (−θ₁, −θ₂)` (realized by conjugating with `i`).
//! The four fixed points of the involution, `θ₁, θ₂ ∈ {0, π}`, are the
//! reducible corners.
//!
//! For a 2-strand braid with `ε = (−1, −1)` the curves
//! `Δ̂(θ) = [(α(θ), α(θ))]` and `Γ̂(θ) = [(α(θ), εσ(α(θ)))]`, with
//! `α(θ) = (i, e^{kθ}i)`, meet exactly at the conjugacy classes of fixed
//! points of `εσ`.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use rayon::prelude::*;

use crate::braid::BraidAutomorphism;
use crate::error::{Error, Result};
use crate::orientation::{pillowcase_coordinates, pillowcase_frame, TangentVector4, DETERMINANT_TOLERANCE};
use crate::quat::{PureQuaternion, Quaternion, TracelessElement};
use crate::repspace::{eps_sigma, eps_sigma_tangent, fixed_point_residual, RepTuple, SignTuple};

/// A point `(a, b, c, d)` of `C_i⁴`.
pub type Quadruple = [TracelessElement; 4];

/// Angles within this distance of `0` or `π` are treated as lying on them.
pub const ANGLE_TOLERANCE: f64 = 1e-9;
/// `|ab − cd|` accepted by [`normalize_quadruple`].
pub const PILLOWCASE_TOLERANCE: f64 = 1e-8;
/// Norm of the `(j, k)` part below which an entry is treated as `±i`.
const AXIS_TOLERANCE: f64 = 1e-9;

/// Reduces an angle into `[0, 2π)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = reduce_angle(theta);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn near_zero_or_pi(theta: f64) -> bool {
    let r = reduce_angle(theta);
    r < ANGLE_TOLERANCE || (r - PI).abs() < ANGLE_TOLERANCE || TAU - r < ANGLE_TOLERANCE
}

/// A point `(θ₁, θ₂)` of the torus, angles in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusLift {
    pub theta1: f64,
    pub theta2: f64,
}

impl TorusLift {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        TorusLift { theta1: reduce_angle(theta1), theta2: reduce_angle(theta2) }
    }

    /// Image under the hyperelliptic involution.
    pub fn involution(self) -> Self {
        TorusLift::new(-self.theta1, -self.theta2)
    }

    /// True at the four fixed points of the involution.
    pub fn is_corner(self) -> bool {
        near_zero_or_pi(self.theta1) && near_zero_or_pi(self.theta2)
    }

    /// Distance on the flat torus `(ℝ/2πℤ)²`.
    pub fn torus_distance(self, other: TorusLift) -> f64 {
        let d1 = wrap_angle(self.theta1 - other.theta1);
        let d2 = wrap_angle(self.theta2 - other.theta2);
        d1.hypot(d2)
    }
}

/// A point of the pillowcase, stored as its canonical torus lift: `θ₁ ∈ [0, π]`,
/// and `θ₂ ∈ [0, π]` whenever `θ₁ ∈ {0, π}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PillowcasePoint(TorusLift);

impl PillowcasePoint {
    pub fn lift(self) -> TorusLift {
        self.0
    }

    pub fn theta1(self) -> f64 {
        self.0.theta1
    }

    pub fn theta2(self) -> f64 {
        self.0.theta2
    }

    /// Distance in the quotient metric: the smaller torus distance to either lift.
    pub fn distance(self, other: PillowcasePoint) -> f64 {
        let a = self.0.torus_distance(other.0);
        let b = self.0.torus_distance(other.0.involution());
        a.min(b)
    }

    pub fn approx_eq(self, other: PillowcasePoint, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// The quadruple `g(θ₁, θ₂)` of the canonical lift.
    pub fn quadruple(self) -> Quadruple {
        param_g(self.0.theta1, self.0.theta2)
    }
}

/// Picks the canonical representative of `{t, involution(t)}`.
pub fn canonicalize(t: TorusLift) -> PillowcasePoint {
    let t = TorusLift::new(t.theta1, t.theta2);
    let snap = |theta: f64| {
        if theta < ANGLE_TOLERANCE || TAU - theta < ANGLE_TOLERANCE {
            Some(0.0)
        } else if (theta - PI).abs() < ANGLE_TOLERANCE {
            Some(PI)
        } else {
            None
        }
    };
    match snap(t.theta1) {
        Some(edge) => {
            let theta2 = if t.theta2 > PI { reduce_angle(-t.theta2) } else { t.theta2 };
            PillowcasePoint(TorusLift { theta1: edge, theta2 })
        }
        None if t.theta1 > PI => PillowcasePoint(t.involution()),
        None => PillowcasePoint(t),
    }
}

fn circle_point(theta: f64) -> TracelessElement {
    // e^{kθ} i = cos θ i + sin θ j
    TracelessElement::new(theta.cos(), theta.sin(), 0.0).expect("unit by construction")
}

/// `g(θ₁, θ₂) = (i, e^{kθ₁}i, e^{k(θ₂−θ₁)}i, e^{kθ₂}i)`.
pub fn param_g(theta1: f64, theta2: f64) -> Quadruple {
    [
        TracelessElement::I,
        circle_point(theta1),
        circle_point(theta2 - theta1),
        circle_point(theta2),
    ]
}

/// `|ab − cd|`.
pub fn pillowcase_residual(q: &Quadruple) -> f64 {
    let [a, b, c, d] = q.map(|x| x.quaternion());
    (a * b).distance(c * d)
}

pub fn conj_quadruple(q: &Quadruple, g: Quaternion) -> Quadruple {
    q.map(|x| x.conj_by(g))
}

// Unit quaternion h with h u h⁻¹ = v for unit pure u, v.
fn rotation_between(u: PureQuaternion, v: PureQuaternion) -> Quaternion {
    let dot = u.dot(v);
    if 1.0 + dot < 1e-12 {
        let axis = [PureQuaternion::I, PureQuaternion::J, PureQuaternion::K]
            .into_iter()
            .map(|e| u.cross(e))
            .max_by(|p, q| p.norm().total_cmp(&q.norm()))
            .expect("three axes");
        return axis.scale(1.0 / axis.norm()).to_quaternion();
    }
    let q = Quaternion::new(1.0 + dot, 0.0, 0.0, 0.0) + u.cross(v).to_quaternion();
    q.scale(1.0 / q.norm())
}

/// Conjugates `q` onto the torus and returns its lift.
///
/// Conjugation first sends `a` to `i`, then rotates about `i` so that `b`
/// (or `d` when `b = ±i`) lands on the upper half of the
/// `(i, j)`-circle. The lift returned is therefore canonical.
pub fn normalize_quadruple(q: &Quadruple) -> Result<TorusLift> {
    normalize_with_conjugator(q).map(|(t, _)| t)
}

/// Like [`normalize_quadruple`], also returning the unit quaternion `h` with
/// `h q h⁻¹ = g(lift)`.
pub fn normalize_with_conjugator(q: &Quadruple) -> Result<(TorusLift, Quaternion)> {
    let residual = pillowcase_residual(q);
    if !(residual <= PILLOWCASE_TOLERANCE) {
        return Err(Error::NotOnPillowcase { residual });
    }
    let h1 = rotation_between(q[0].vector(), PureQuaternion::I);
    let moved = conj_quadruple(q, h1);
    let jk_angle = |x: TracelessElement| {
        let v = x.vector();
        (v.z.hypot(v.w) >= AXIS_TOLERANCE).then(|| v.w.atan2(v.z))
    };
    // b and d both on the i-axis happens only at the corners.
    let alpha = jk_angle(moved[1]).or_else(|| jk_angle(moved[3])).ok_or(Error::SingularPoint)?;
    let psi = -alpha / 2.0;
    let h2 = Quaternion::new(psi.cos(), psi.sin(), 0.0, 0.0);
    let mut h = h2 * h1;
    let target = conj_quadruple(q, h);
    let angle = |v: PureQuaternion| {
        if v.z.hypot(v.w) < AXIS_TOLERANCE {
            if v.y > 0.0 {
                0.0
            } else {
                PI
            }
        } else {
            v.z.atan2(v.y)
        }
    };
    let lift = TorusLift::new(angle(target[1].vector()), angle(target[3].vector()));
    let rebuilt = param_g(lift.theta1, lift.theta2);
    let mismatch = rebuilt
        .iter()
        .zip(&target)
        .map(|(x, y)| x.distance(*y))
        .fold(0.0, f64::max);
    if !(mismatch <= 1e-6) {
        return Err(Error::NotOnPillowcase { residual: mismatch });
    }
    let canonical = canonicalize(lift).lift();
    if canonical.torus_distance(lift) > ANGLE_TOLERANCE {
        // Conjugation by i realizes the involution.
        h = Quaternion::I * h;
    }
    Ok((canonical, h))
}

/// `α(θ) = (i, e^{kθ}i)`.
pub fn alpha(theta: f64) -> RepTuple {
    RepTuple::new(vec![TracelessElement::I, circle_point(theta)])
}

fn alpha_velocity(theta: f64) -> [PureQuaternion; 2] {
    // d/dθ e^{kθ}i = e^{kθ}j = cos θ j − sin θ i
    [PureQuaternion::ZERO, PureQuaternion::new(-theta.sin(), theta.cos(), 0.0)]
}

/// A sample of `Δ̂` or `Γ̂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub theta: f64,
    pub lift: TorusLift,
    pub quadruple: Quadruple,
}

/// `(α(θ), α(θ))`, whose lift is `(θ, θ)`.
pub fn delta_curve(theta: f64) -> CurveSample {
    let b = circle_point(theta);
    CurveSample {
        theta,
        lift: TorusLift::new(theta, theta),
        quadruple: [TracelessElement::I, b, TracelessElement::I, b],
    }
}

fn require_two_strands(eps: &SignTuple, a: &BraidAutomorphism) -> Result<()> {
    if a.rank() != 2 {
        return Err(Error::NotTwoStrands { strands: a.rank() });
    }
    if eps.len() != 2 {
        return Err(Error::LengthMismatch { expected: 2, found: eps.len() });
    }
    Ok(())
}

/// `(α(θ), εσ(α(θ)))` and its normalized (canonical) lift.
pub fn gamma_curve(eps: &SignTuple, a: &BraidAutomorphism, theta: f64) -> Result<CurveSample> {
    require_two_strands(eps, a)?;
    let rho = alpha(theta);
    let image = eps_sigma(eps, a, &rho)?;
    let quadruple = [rho.entries()[0], rho.entries()[1], image.entries()[0], image.entries()[1]];
    let lift = normalize_quadruple(&quadruple)?;
    Ok(CurveSample { theta, lift, quadruple })
}

/// Velocity of `θ ↦ (α(θ), α(θ))`.
pub fn delta_velocity(theta: f64) -> TangentVector4 {
    let [da, db] = alpha_velocity(theta);
    TangentVector4::new(da, db, da, db)
}

/// Velocity of `θ ↦ (α(θ), εσ(α(θ)))`, exact by the product rule.
pub fn gamma_velocity(eps: &SignTuple, a: &BraidAutomorphism, theta: f64) -> Result<TangentVector4> {
    require_two_strands(eps, a)?;
    let [da, db] = alpha_velocity(theta);
    let (_, image_dot) = eps_sigma_tangent(eps, a, &alpha(theta), &[da, db])?;
    Ok(TangentVector4::new(da, db, image_dot[0], image_dot[1]))
}

/// Tunables of the intersection scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    /// Number of samples of `θ ∈ [0, 2π)`.
    pub resolution: usize,
    /// Target `|displacement|` after bisection.
    pub residual_tolerance: f64,
    /// Largest fixed-point residual accepted for a refined intersection.
    pub fixed_point_tolerance: f64,
    /// Minimum `|det|` of the two velocities in the `(u₁, u₂)` frame.
    pub transversality_tolerance: f64,
    /// Pillowcase distance under which two roots are the same point.
    pub dedup_tolerance: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            resolution: 4096,
            residual_tolerance: 1e-10,
            fixed_point_tolerance: 1e-8,
            transversality_tolerance: DETERMINANT_TOLERANCE,
            dedup_tolerance: 1e-6,
        }
    }
}

/// An intersection point of `Δ̂` and `Γ̂`, before its sign is assigned.
///
/// The quadruple, frames and velocities all live at the canonical lift:
/// the raw curve data at `θ` was conjugated by `conjugator` to get there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntersectionCandidate {
    pub theta_delta: f64,
    pub theta_gamma: f64,
    pub point: PillowcasePoint,
    pub quadruple: Quadruple,
    pub conjugator: Quaternion,
    pub velocity_delta: TangentVector4,
    pub velocity_gamma: TangentVector4,
    /// Coordinates of the two velocities in the `(u₁, u₂)` frame modulo orbits.
    pub coordinates_delta: [f64; 2],
    pub coordinates_gamma: [f64; 2],
    /// `det[coordinates_delta, coordinates_gamma]`.
    pub transversality: f64,
    pub displacement: f64,
    pub fixed_point_residual: f64,
}

impl IntersectionCandidate {
    pub fn is_transverse(&self, tol: f64) -> bool {
        self.transversality.abs() > tol
    }
}

/// Signed distance of `Γ̂(θ)` from `Δ̂`: `θ₂ − θ₁` of the canonical lift,
/// wrapped into `(−π, π]`. `Δ̂` is the diagonal `θ₁ = θ₂` on the torus.
pub fn displacement(eps: &SignTuple, a: &BraidAutomorphism, theta: f64) -> Result<f64> {
    let s = gamma_curve(eps, a, theta)?;
    Ok(wrap_angle(s.lift.theta2 - s.lift.theta1))
}

fn bisect(eps: &SignTuple, a: &BraidAutomorphism, mut lo: f64, mut hi: f64, mut d_lo: f64) -> Option<(f64, f64)> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d_mid = displacement(eps, a, mid).ok()?;
        if d_mid == 0.0 || hi - lo < 1e-15 {
            return Some((mid, d_mid));
        }
        if (d_mid < 0.0) == (d_lo < 0.0) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Some((mid, displacement(eps, a, mid).ok()?))
}

/// All parameter roots in `[0, 2π)` where `Γ̂(θ)` lies on `Δ̂`, each refined
/// by bisection, sorted by `θ`. Roots are not yet deduplicated.
fn displacement_roots(eps: &SignTuple, a: &BraidAutomorphism, config: &ScanConfig) -> Vec<(f64, f64)> {
    let n = config.resolution.max(8);
    let step = TAU / n as f64;
    // Samples sit at half steps so that θ = 0 and θ = π, where Γ̂ of an
    // even power of σ₁ meets a corner, are never sampled.
    let theta_at = |s: usize| (s as f64 + 0.5) * step;
    let samples: Vec<Option<f64>> =
        (0..n).into_par_iter().map(|s| displacement(eps, a, theta_at(s)).ok()).collect();
    let brackets: Vec<(f64, f64, f64, f64)> = (0..n)
        .filter_map(|s| {
            let next = (s + 1) % n;
            let (d0, d1) = (samples[s]?, samples[next]?);
            let (t0, t1) = (theta_at(s), theta_at(s) + step);
            // A genuine crossing passes through zero; a jump across ±π does not.
            let crosses = (d0 < 0.0) != (d1 < 0.0) && d0.abs() + d1.abs() < PI;
            (crosses || d0 == 0.0).then_some((t0, t1, d0, d1))
        })
        .collect();
    let mut roots: Vec<(f64, f64)> = brackets
        .into_par_iter()
        .filter_map(|(t0, t1, d0, _)| {
            if d0 == 0.0 {
                return Some((t0, 0.0));
            }
            bisect(eps, a, t0, t1, d0)
        })
        .filter(|&(_, d)| d.abs() < config.residual_tolerance)
        .map(|(t, d)| (reduce_angle(t), d))
        .collect();
    roots.sort_by(|x, y| x.0.total_cmp(&y.0));
    roots
}

fn candidate_at(
    eps: &SignTuple,
    a: &BraidAutomorphism,
    theta: f64,
    displacement: f64,
) -> Result<IntersectionCandidate> {
    let sample = gamma_curve(eps, a, theta)?;
    let (lift, h) = normalize_with_conjugator(&sample.quadruple)?;
    let quadruple = param_g(lift.theta1, lift.theta2);
    let velocity_delta = delta_velocity(theta).conj_by(h);
    let velocity_gamma = gamma_velocity(eps, a, theta)?.conj_by(h);
    let pair = pillowcase_frame(lift)?;
    let cd = pillowcase_coordinates(&quadruple, &pair, &velocity_delta)?;
    let cg = pillowcase_coordinates(&quadruple, &pair, &velocity_gamma)?;
    Ok(IntersectionCandidate {
        theta_delta: theta,
        theta_gamma: theta,
        point: canonicalize(lift),
        quadruple,
        conjugator: h,
        velocity_delta,
        velocity_gamma,
        coordinates_delta: cd,
        coordinates_gamma: cg,
        transversality: cd[0] * cg[1] - cd[1] * cg[0],
        displacement,
        fixed_point_residual: fixed_point_residual(eps, a, &alpha(theta)),
    })
}

/// Every point of `Δ̂ ∩ Γ̂`, deduplicated on the pillowcase and ordered by
/// curve parameter, whether or not it is transverse. A reducible fixed point
/// is an error.
pub fn scan_intersections(
    eps: &SignTuple,
    a: &BraidAutomorphism,
    config: &ScanConfig,
) -> Result<Vec<IntersectionCandidate>> {
    require_two_strands(eps, a)?;
    // α(0) and α(π) are the reducible pairs up to conjugation.
    if [0.0, PI].iter().any(|&t| fixed_point_residual(eps, a, &alpha(t)) < config.fixed_point_tolerance) {
        return Err(Error::ReduciblePoint);
    }
    let mut points: Vec<IntersectionCandidate> = Vec::new();
    for (theta, d) in displacement_roots(eps, a, config) {
        let candidate = match candidate_at(eps, a, theta, d) {
            Ok(c) => c,
            Err(Error::SingularPoint) | Err(Error::ReduciblePoint) => continue,
            Err(e) => return Err(e),
        };
        if !(candidate.fixed_point_residual < config.fixed_point_tolerance) {
            continue;
        }
        if points.iter().all(|p| !p.point.approx_eq(candidate.point, config.dedup_tolerance)) {
            points.push(candidate);
        }
    }
    Ok(points)
}

/// [`scan_intersections`] with default settings, failing on the first
/// non-transverse point.
pub fn find_intersections(eps: &SignTuple, a: &BraidAutomorphism) -> Result<Vec<IntersectionCandidate>> {
    find_intersections_with(eps, a, &ScanConfig::default())
}

pub fn find_intersections_with(
    eps: &SignTuple,
    a: &BraidAutomorphism,
    config: &ScanConfig,
) -> Result<Vec<IntersectionCandidate>> {
    let points = scan_intersections(eps, a, config)?;
    if let Some(p) = points.iter().find(|p| !p.is_transverse(config.transversality_tolerance)) {
        return Err(Error::TangencyUnresolved { theta: p.theta_gamma, determinant: p.transversality });
    }
    Ok(points)
}

/// Samples both curves at `θ = 2π s / resolution`. `Γ̂` samples that land on
/// a corner are omitted.
pub fn sample_curves(
    eps: &SignTuple,
    a: &BraidAutomorphism,
    resolution: usize,
) -> Result<(Vec<CurveSample>, Vec<CurveSample>)> {
    require_two_strands(eps, a)?;
    let step = TAU / resolution.max(1) as f64;
    let delta = (0..resolution).map(|s| delta_curve(s as f64 * step)).collect();
    let gamma = (0..resolution)
        .into_par_iter()
        .map(|s| match gamma_curve(eps, a, s as f64 * step) {
            Ok(c) => Ok(Some(c)),
            Err(Error::SingularPoint) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((delta, gamma))
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back as the rounded value.
pub fn format_angle(x: f64) -> String {
    let rounded = round_significant(x);
    format!("{}", rounded)
}

/// `x` rounded to 12 significant digits; `-0` becomes `0`.
pub fn round_significant(x: f64) -> f64 {
    let r: f64 = format!("{:.11e}", x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Writes `theta,theta1,theta2` rows.
pub fn write_curve_csv<W: Write>(mut out: W, samples: &[CurveSample]) -> io::Result<()> {
    writeln!(out, "theta,theta1,theta2")?;
    for s in samples {
        writeln!(
            out,
            "{},{},{}",
            format_angle(s.theta),
            format_angle(s.lift.theta1),
            format_angle(s.lift.theta2)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{artin_action, BraidWord};
    use std::f64::consts::FRAC_PI_2;

    fn hopf() -> BraidAutomorphism {
        artin_action(&BraidWord::sigma1_power(2))
    }

    fn quad_distance(p: &Quadruple, q: &Quadruple) -> f64 {
        p.iter().zip(q).map(|(x, y)| x.distance(*y)).fold(0.0, f64::max)
    }

    fn hopf_quadruple() -> Quadruple {
        [TracelessElement::I, TracelessElement::J, TracelessElement::I, TracelessElement::J]
    }

    #[test]
    fn reducible_fixed_point_is_an_error() {
        let a = artin_action(&BraidWord::sigma1_power(1));
        let eps = SignTuple::twisted_pair();
        let fixed = RepTuple::new(vec![TracelessElement::I, -TracelessElement::I]);
        assert!(fixed_point_residual(&eps, &a, &fixed) < 1e-15);
        assert_eq!(scan_intersections(&eps, &a, &ScanConfig::default()).unwrap_err(), Error::ReduciblePoint);
    }

    #[test]
    fn param_g_examples() {
        assert!(quad_distance(&param_g(FRAC_PI_2, FRAC_PI_2), &hopf_quadruple()) < 1e-15);
        assert_eq!(param_g(0.0, 0.0), [TracelessElement::I; 4]);
        let minus_i = -TracelessElement::I;
        let expected = [TracelessElement::I, minus_i, minus_i, TracelessElement::I];
        assert!(quad_distance(&param_g(PI, 0.0), &expected) < 1e-15);
    }

    #[test]
    fn normalize_examples() {
        let t = normalize_quadruple(&hopf_quadruple()).unwrap();
        assert!(t.torus_distance(TorusLift::new(FRAC_PI_2, FRAC_PI_2)) < 1e-12);

        let g = Quaternion::new(0.3, -0.5, 0.7, 0.2);
        let g = g.scale(1.0 / g.norm());
        let moved = conj_quadruple(&hopf_quadruple(), g);
        let t = normalize_quadruple(&moved).unwrap();
        assert!(t.torus_distance(TorusLift::new(FRAC_PI_2, FRAC_PI_2)) < 1e-12);

        // The Γ̂ path of σ₁² at θ = π/2.
        let theta = FRAC_PI_2;
        let gamma = [
            TracelessElement::I,
            circle_point(theta),
            -circle_point(2.0 * theta),
            -circle_point(3.0 * theta),
        ];
        let t = normalize_quadruple(&gamma).unwrap();
        assert!(t.torus_distance(TorusLift::new(FRAC_PI_2, FRAC_PI_2)) < 1e-12);
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(normalize_quadruple(&[TracelessElement::I; 4]), Err(Error::SingularPoint));
        let off = [TracelessElement::I, TracelessElement::J, TracelessElement::K, TracelessElement::J];
        assert!(matches!(normalize_quadruple(&off), Err(Error::NotOnPillowcase { .. })));
    }

    #[test]
    fn normalize_when_b_is_on_the_axis() {
        // θ₁ = 0 but θ₂ generic: not a corner.
        let q = param_g(0.0, 2.0);
        let t = normalize_quadruple(&q).unwrap();
        assert_eq!(t.theta1, 0.0);
        assert!((t.theta2 - 2.0).abs() < 1e-12);
        let q = param_g(PI, 5.0);
        let t = normalize_quadruple(&q).unwrap();
        assert_eq!(t.theta1, PI);
        assert!(canonicalize(TorusLift::new(PI, 5.0)).lift().torus_distance(t) < 1e-12);
    }

    #[test]
    fn canonicalize_examples() {
        let (a, b) = (1.2, 4.0);
        let p = canonicalize(TorusLift::new(a, b));
        let q = canonicalize(TorusLift::new(TAU - a, TAU - b));
        assert!(p.approx_eq(q, 1e-12));
        assert!(p.lift().torus_distance(q.lift()) < 1e-12);
        assert_eq!(canonicalize(TorusLift::new(0.0, PI)).lift(), TorusLift::new(0.0, PI));
        let p = canonicalize(TorusLift::new(FRAC_PI_2, FRAC_PI_2));
        let q = canonicalize(TorusLift::new(3.0 * FRAC_PI_2, 3.0 * FRAC_PI_2));
        assert!(p.lift().torus_distance(q.lift()) < 1e-12);
        assert_eq!(canonicalize(TorusLift::new(0.0, 5.0)).lift(), TorusLift::new(0.0, TAU - 5.0));
    }

    #[test]
    fn curves_through_hopf_point() {
        let eps = SignTuple::twisted_pair();
        let d = delta_curve(FRAC_PI_2);
        assert_eq!(d.lift, TorusLift::new(FRAC_PI_2, FRAC_PI_2));
        assert!(quad_distance(&d.quadruple, &hopf_quadruple()) < 1e-15);

        let g = gamma_curve(&eps, &hopf(), FRAC_PI_2).unwrap();
        assert!(g.lift.torus_distance(TorusLift::new(FRAC_PI_2, FRAC_PI_2)) < 1e-12);

        for theta in [0.1, 0.9, 2.0, 4.4] {
            let g = gamma_curve(&eps, &hopf(), theta).unwrap();
            let expected = [
                TracelessElement::I,
                circle_point(theta),
                -circle_point(2.0 * theta),
                -circle_point(3.0 * theta),
            ];
            assert!(quad_distance(&g.quadruple, &expected) < 1e-12);
            assert!(pillowcase_residual(&g.quadruple) < 1e-12);
        }
        assert_eq!(gamma_curve(&eps, &hopf(), 0.0).unwrap_err(), Error::SingularPoint);
    }

    #[test]
    fn hopf_velocities() {
        use crate::quat::PureQuaternion as P;
        let eps = SignTuple::twisted_pair();
        let o = P::ZERO;
        let vd = delta_velocity(FRAC_PI_2);
        assert!(vd.distance(&TangentVector4::new(o, -P::I, o, -P::I)) < 1e-15);
        let vg = gamma_velocity(&eps, &hopf(), FRAC_PI_2).unwrap();
        assert!(vg.distance(&TangentVector4::new(o, -P::I, P::J.scale(2.0), P::I.scale(-3.0))) < 1e-12);
    }

    #[test]
    fn hopf_has_one_intersection() {
        let eps = SignTuple::twisted_pair();
        let points = find_intersections(&eps, &hopf()).unwrap();
        assert_eq!(points.len(), 1);
        let p = points[0];
        assert!(p.point.lift().torus_distance(TorusLift::new(FRAC_PI_2, FRAC_PI_2)) < 1e-9);
        assert!((p.theta_gamma - FRAC_PI_2).abs() < 1e-9);
        assert!(p.fixed_point_residual < 1e-8);
        assert!(p.displacement.abs() < 1e-10);
        // Δ̂ = u₁ + u₂ and Γ̂ = u₁ + 3u₂ in the torus frame.
        assert!((p.coordinates_delta[0] - 1.0).abs() < 1e-8 && (p.coordinates_delta[1] - 1.0).abs() < 1e-8);
        assert!((p.coordinates_gamma[0] - 1.0).abs() < 1e-8 && (p.coordinates_gamma[1] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn even_powers_have_k_intersections() {
        let eps = SignTuple::twisted_pair();
        for k in 1..=5i64 {
            let a = artin_action(&BraidWord::sigma1_power(2 * k));
            assert_eq!(find_intersections(&eps, &a).unwrap().len(), k as usize, "k = {k}");
        }
        let a = artin_action(&BraidWord::identity(2));
        assert!(find_intersections(&eps, &a).unwrap().is_empty());
    }

    #[test]
    fn tangency_is_reported() {
        let eps = SignTuple::twisted_pair();
        let config = ScanConfig { transversality_tolerance: 1e6, ..ScanConfig::default() };
        assert!(matches!(
            find_intersections_with(&eps, &hopf(), &config),
            Err(Error::TangencyUnresolved { .. })
        ));
    }

    #[test]
    fn csv_format() {
        let mut out = Vec::new();
        write_curve_csv(&mut out, &[delta_curve(FRAC_PI_2)]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "theta,theta1,theta2\n1.57079632679,1.57079632679,1.57079632679\n");
        assert_eq!(format_angle(0.0), "0");
        assert_eq!(format_angle(-0.0), "0");
        assert_eq!(format_angle(PI), "3.14159265359");
        assert_eq!(format_angle(1e-20), "0.00000000000000000001");
    }
}
