//! Signed intersection count `h₂(L) = ⟨Δ̂, Γ̂_{εσ}⟩` for closures of 2-strand
//! braids, and a replay of the Hopf link computation.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::{artin_action, linking_number, BraidWord};
use crate::error::{Error, Result};
use crate::orientation::{
    change_of_basis, complement_frame, df, hopf_base, integer_determinant, integer_matrix,
    orbit_frame, orient_pillowcase_pair, oriented_pillowcase_basis, orientation_sign, pillowcase_coordinates,
    pillowcase_frame, product_orientation_basis, OrientedPillowcaseBasis, TangentVector4,
    DETERMINANT_TOLERANCE,
};
use crate::pillowcase::{
    delta_velocity, gamma_velocity, param_g, scan_intersections, IntersectionCandidate,
    PillowcasePoint, Quadruple, ScanConfig, TorusLift,
};
use crate::quat::{PureQuaternion, Quaternion, TracelessElement};
use crate::repspace::{eps_sigma, fixed_point_residual, RepTuple, SignTuple};
use crate::Sign;

/// Everything needed to sign one intersection point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignInput {
    pub theta: f64,
    pub quadruple: Quadruple,
    /// Torus frame `(u₁, u₂)` spanning the pillowcase directions at `quadruple`.
    pub pair: [TangentVector4; 2],
    pub velocity_delta: TangentVector4,
    pub velocity_gamma: TangentVector4,
}

impl SignInput {
    pub fn from_candidate(c: &IntersectionCandidate) -> Result<Self> {
        Ok(SignInput {
            theta: c.theta_gamma,
            quadruple: c.quadruple,
            pair: pillowcase_frame(c.point.lift())?,
            velocity_delta: c.velocity_delta,
            velocity_gamma: c.velocity_gamma,
        })
    }

    /// The same configuration moved by conjugation with `g`.
    pub fn conj_by(&self, g: Quaternion) -> SignInput {
        SignInput {
            theta: self.theta,
            quadruple: self.quadruple.map(|x| x.conj_by(g)),
            pair: self.pair.map(|v| v.conj_by(g)),
            velocity_delta: self.velocity_delta.conj_by(g),
            velocity_gamma: self.velocity_gamma.conj_by(g),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignComputation {
    pub oriented: OrientedPillowcaseBasis,
    /// Columns: the `Δ̂` and `Γ̂` velocities in the oriented pillowcase basis.
    pub matrix: [[f64; 2]; 2],
    pub determinant: f64,
    pub sign: Sign,
}

/// Local intersection sign of `Δ̂` and `Γ̂`: the orientation of
/// `(velocity_Δ, velocity_Γ)`, projected off the orbit directions, against
/// the oriented pillowcase basis.
pub fn intersection_sign(input: &SignInput) -> Result<SignComputation> {
    intersection_sign_with(input, DETERMINANT_TOLERANCE)
}

pub fn intersection_sign_with(input: &SignInput, tolerance: f64) -> Result<SignComputation> {
    let base = &input.quadruple;
    let oriented = orient_pillowcase_pair(base, input.pair, &complement_frame(base)?)?;
    let [o1, o2] = oriented.vectors;
    let project = |v: &TangentVector4| -> Result<TangentVector4> {
        let [c1, c2] = pillowcase_coordinates(base, &oriented.vectors, v)?;
        Ok(o1 * c1 + o2 * c2)
    };
    let tangents = [project(&input.velocity_delta)?, project(&input.velocity_gamma)?];
    let m = change_of_basis(&tangents, &oriented.vectors)?;
    let matrix = [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
    let determinant = m.determinant();
    let sign = Sign::of(determinant)
        .filter(|_| determinant.abs() > tolerance)
        .ok_or(Error::TangencyUnresolved { theta: input.theta, determinant })?;
    Ok(SignComputation { oriented, matrix, determinant, sign })
}

/// A signed point of `Δ̂ ∩ Γ̂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntersectionDatum {
    pub point: PillowcasePoint,
    pub theta_delta: f64,
    pub theta_gamma: f64,
    pub velocity_delta: TangentVector4,
    pub velocity_gamma: TangentVector4,
    pub fixed_point_residual: f64,
    pub computation: SignComputation,
    pub sign: Sign,
}

/// An intersection point whose sign could not be fixed because the curves
/// are (numerically) tangent there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnresolvedPoint {
    pub point: PillowcasePoint,
    pub theta: f64,
    pub determinant: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CassonLinResult {
    pub braid: BraidWord,
    pub epsilon: SignTuple,
    pub intersections: Vec<IntersectionDatum>,
    pub unresolved: Vec<UnresolvedPoint>,
    pub h2: i64,
    pub lk: i64,
    pub agrees: bool,
}

impl CassonLinResult {
    /// False when some intersection was not transverse; `h2` then counts only
    /// the resolved points.
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

pub fn casson_lin_h2(b: &BraidWord) -> Result<CassonLinResult> {
    casson_lin_h2_with(b, &SignTuple::twisted_pair(), &ScanConfig::default())
}

/// `h₂` of the closure of a 2-strand braid with a 2-component closure.
///
/// Only `ε = (−1, −1)` is accepted: it is the one choice for 2-strand braids
/// whose projective representations have `w₂ ≠ 0`.
pub fn casson_lin_h2_with(b: &BraidWord, eps: &SignTuple, config: &ScanConfig) -> Result<CassonLinResult> {
    if b.strand_count() != 2 {
        return Err(Error::NotTwoStrands { strands: b.strand_count() });
    }
    let lk = linking_number(b)?;
    if eps != &SignTuple::twisted_pair() {
        return Err(Error::UnsupportedEpsilon { epsilon: eps.to_i8s() });
    }
    let a = artin_action(b);
    let candidates = scan_intersections(eps, &a, config)?;
    let outcomes: Vec<Result<std::result::Result<IntersectionDatum, UnresolvedPoint>>> = candidates
        .par_iter()
        .map(|c| {
            let input = SignInput::from_candidate(c)?;
            match intersection_sign_with(&input, config.transversality_tolerance) {
                Ok(computation) => Ok(Ok(IntersectionDatum {
                    point: c.point,
                    theta_delta: c.theta_delta,
                    theta_gamma: c.theta_gamma,
                    velocity_delta: c.velocity_delta,
                    velocity_gamma: c.velocity_gamma,
                    fixed_point_residual: c.fixed_point_residual,
                    computation,
                    sign: computation.sign,
                })),
                Err(Error::TangencyUnresolved { theta, determinant }) => {
                    Ok(Err(UnresolvedPoint { point: c.point, theta, determinant }))
                }
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut intersections = Vec::new();
    let mut unresolved = Vec::new();
    for outcome in outcomes {
        match outcome? {
            Ok(d) => intersections.push(d),
            Err(u) => unresolved.push(u),
        }
    }
    let h2 = intersections.iter().map(|d| i64::from(d.sign.to_i8())).sum();
    Ok(CassonLinResult {
        braid: b.clone(),
        epsilon: eps.clone(),
        agrees: unresolved.is_empty() && h2 == -lk,
        intersections,
        unresolved,
        h2,
        lk,
    })
}

/// One checked step of the Hopf replay.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub label: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "[pass]" } else { "[FAIL]" };
        write!(f, "{status} {} = {}", self.label, self.observed)?;
        if !self.pass {
            write!(f, " (expected {})", self.expected)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct HopfTrace {
    pub entries: Vec<TraceEntry>,
}

impl HopfTrace {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, label: &str) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    fn push(&mut self, label: &str, expected: impl ToString, observed: impl ToString, pass: bool) {
        self.entries.push(TraceEntry {
            label: label.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
        });
    }

    fn push_vector(&mut self, label: &str, expected: TangentVector4, observed: Result<TangentVector4>) {
        match observed {
            Ok(v) => self.push(label, expected, v, v.distance(&expected) < 1e-9),
            Err(e) => self.push(label, expected, e, false),
        }
    }
}

impl fmt::Display for HopfTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

fn random_traceless(rng: &mut impl Rng) -> TracelessElement {
    loop {
        let v = PureQuaternion::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return TracelessElement::from_pure(v.scale(1.0 / n)).expect("unit");
        }
    }
}

/// The matrix expressing `(w₁, w₂, w₃, u₁, u₂, v₁, v₂, v₃)` in the
/// product basis at `(i, j, i, j)`.
pub const HOPF_MATRIX_M: [[i64; 8]; 8] = [
    [0, 0, 1, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, -1, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, -1],
    [0, 0, 0, -1, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, -1],
];

/// Replays the Hopf link computation step by step, checking each value
/// against its known closed form. Failures are recorded, not returned.
pub fn verify_hopf() -> HopfTrace {
    let mut trace = HopfTrace::default();
    let hopf = BraidWord::sigma1_power(2);
    let eps = SignTuple::twisted_pair();
    let action = artin_action(&hopf);

    // εσ(X, Y) = (−Y⁻¹XY, −Y⁻¹X⁻¹YXY)
    let names = ["X", "Y"];
    let symbolic = format!(
        "(-{}, -{})",
        action.image(1).display_with(&names),
        action.image(2).display_with(&names)
    );
    let expected_symbolic = "(-Y^-1 X Y, -Y^-1 X^-1 Y X Y)";
    trace.push("eps-sigma(X, Y)", expected_symbolic, &symbolic, symbolic == expected_symbolic);

    let mut rng = ChaCha8Rng::seed_from_u64(0x4a0f);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (x, y) = (random_traceless(&mut rng), random_traceless(&mut rng));
        let (xq, yq) = (x.quaternion(), y.quaternion());
        let (xi, yi) = (xq.inverse(), yq.inverse());
        let direct = [-(yi * xq * yq), -(yi * xi * yq * xq * yq)];
        let residual = match eps_sigma(&eps, &action, &RepTuple::new(vec![x, y])) {
            Ok(out) => out
                .entries()
                .iter()
                .zip(direct)
                .map(|(o, d)| o.quaternion().distance(d))
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(residual);
    }
    trace.push("eps-sigma residual on 100 random pairs", "< 1e-10", format!("{worst:.1e}"), worst < 1e-10);

    let rho = RepTuple::new(vec![TracelessElement::I, TracelessElement::J]);
    let r = fixed_point_residual(&eps, &action, &rho);
    trace.push("fixed point (i, j) residual", "< 1e-12", format!("{r:.1e}"), r < 1e-12);

    let lift = TorusLift::new(FRAC_PI_2, FRAC_PI_2);
    let base = param_g(lift.theta1, lift.theta2);
    let hopf_quad = hopf_base();
    let err = base.iter().zip(&hopf_quad).map(|(a, b)| a.distance(*b)).fold(0.0, f64::max);
    let shown = format!("({}, {}, {}, {})", base[0], base[1], base[2], base[3]);
    trace.push("g(pi/2, pi/2)", "(i, j, i, j)", shown, err < 1e-9);

    let (i, j, k, o) = (PureQuaternion::I, PureQuaternion::J, PureQuaternion::K, PureQuaternion::ZERO);
    let tv = TangentVector4::new;
    let frame = pillowcase_frame(lift);
    trace.push_vector("u1", tv(o, -i, -j, o), pick(&frame, 0));
    trace.push_vector("u2", tv(o, o, j, -i), pick(&frame, 1));

    let orbit = orbit_frame(&hopf_quad);
    trace.push_vector("v1", tv(o, k, o, k), pick(&orbit, 0));
    trace.push_vector("v2", tv(-k, o, -k, o), pick(&orbit, 1));
    trace.push_vector("v3", tv(j, -i, j, -i), pick(&orbit, 2));

    let complement = complement_frame(&hopf_quad);
    let expected_w = [tv(k, o, o, o), tv(o, k, o, o), tv(j, o, o, o)];
    for (n, label) in ["w1", "w2", "w3"].iter().enumerate() {
        trace.push_vector(label, expected_w[n], pick(&complement, n));
    }
    let expected_df = [-j, i, k];
    for (n, label) in ["df(w1)", "df(w2)", "df(w3)"].iter().enumerate() {
        match &complement {
            Ok(w) => {
                let image = df(&hopf_quad, &w[n]);
                trace.push(label, expected_df[n], image, image.distance(expected_df[n]) < 1e-9);
            }
            Err(e) => trace.push(label, expected_df[n], e, false),
        }
    }
    match &complement {
        Ok(w) => {
            let images = w.map(|v| df(&hopf_quad, &v));
            let s = orientation_sign(&images, &[i, j, k]);
            let shown = s.as_ref().map_or_else(|e| e.to_string(), |s| s.to_string());
            trace.push("orientation of (df(w1), df(w2), df(w3))", 1, shown, s == Ok(Sign::Positive));
        }
        Err(e) => trace.push("orientation of (df(w1), df(w2), df(w3))", 1, e, false),
    }

    let expected_m: Vec<Vec<i64>> = HOPF_MATRIX_M.iter().map(|r| r.to_vec()).collect();
    match (&complement, &frame, &orbit) {
        (Ok(w), Ok([u1, u2]), Ok(v)) => {
            let s = [w[0], w[1], w[2], *u1, *u2, v[0], v[1], v[2]];
            let m = change_of_basis(&s, &product_orientation_basis(&hopf_quad))
                .ok()
                .and_then(|m| integer_matrix(&m, 1e-9));
            match m {
                Some(m) => {
                    trace.push("M", "reference 8x8 matrix", format!("{m:?}"), m == expected_m);
                    let det = integer_determinant(&m);
                    trace.push("det M", -1, det, det == -1);
                }
                None => {
                    trace.push("M", "reference 8x8 matrix", "not an integer matrix", false);
                    trace.push("det M", -1, "undefined", false);
                }
            }
        }
        _ => {
            trace.push("M", "reference 8x8 matrix", "frames unavailable", false);
            trace.push("det M", -1, "undefined", false);
        }
    }

    let oriented = oriented_pillowcase_basis(lift);
    match &oriented {
        Ok(b) => trace.push("oriented pillowcase basis", "(u2, u1)", b.label(), b.swapped),
        Err(e) => trace.push("oriented pillowcase basis", "(u2, u1)", e, false),
    }

    let vd = delta_velocity(FRAC_PI_2);
    trace.push_vector("Delta velocity", tv(o, -i, o, -i), Ok(vd));
    let vg = gamma_velocity(&eps, &action, FRAC_PI_2);
    trace.push_vector("Gamma velocity", tv(o, -i, j.scale(2.0), i.scale(-3.0)), vg.clone());

    let computation = match (&frame, &vg) {
        (Ok(pair), Ok(vg)) => intersection_sign(&SignInput {
            theta: FRAC_PI_2,
            quadruple: hopf_quad,
            pair: *pair,
            velocity_delta: vd,
            velocity_gamma: *vg,
        }),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    match computation {
        Ok(c) => {
            let expected = [[1.0, 3.0], [1.0, 1.0]];
            let err = (0..2)
                .flat_map(|r| (0..2).map(move |s| (r, s)))
                .map(|(r, s)| (c.matrix[r][s] - expected[r][s]).abs())
                .fold(0.0, f64::max);
            let shown = format!(
                "[[{}, {}], [{}, {}]]",
                fmt_coeff(c.matrix[0][0]),
                fmt_coeff(c.matrix[0][1]),
                fmt_coeff(c.matrix[1][0]),
                fmt_coeff(c.matrix[1][1])
            );
            trace.push("change of basis", "[[1, 3], [1, 1]]", shown, err < 1e-8);
            trace.push(
                "det change of basis",
                "-2",
                fmt_coeff(c.determinant),
                (c.determinant + 2.0).abs() < 1e-8 && c.sign == Sign::Negative,
            );
        }
        Err(e) => {
            trace.push("change of basis", "[[1, 3], [1, 1]]", &e, false);
            trace.push("det change of basis", "-2", &e, false);
        }
    }

    match casson_lin_h2(&hopf) {
        Ok(result) => {
            let n = result.intersections.len();
            let at_point = result
                .intersections
                .first()
                .is_some_and(|d| d.point.lift().torus_distance(lift) < 1e-9);
            trace.push("intersection points", "1 at (pi/2, pi/2)", n, n == 1 && at_point);
            trace.push("lk", 1, result.lk, result.lk == 1);
            trace.push("h2", -1, result.h2, result.h2 == -1 && result.is_complete());
        }
        Err(e) => {
            trace.push("intersection points", "1 at (pi/2, pi/2)", &e, false);
            trace.push("lk", 1, &e, false);
            trace.push("h2", -1, &e, false);
        }
    }
    trace
}

fn pick<T: Copy, const N: usize>(r: &Result<[T; N]>, n: usize) -> Result<T> {
    r.as_ref().map(|a| a[n]).map_err(Clone::clone)
}

fn fmt_coeff(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.9}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_sign_is_negative() {
        let r = casson_lin_h2(&BraidWord::sigma1_power(2)).unwrap();
        assert_eq!(r.h2, -1);
        assert_eq!(r.lk, 1);
        assert!(r.agrees);
        assert!(r.is_complete());
        let d = &r.intersections[0];
        assert!(d.computation.oriented.swapped);
        assert!((d.computation.matrix[0][0] - 1.0).abs() < 1e-8);
        assert!((d.computation.matrix[0][1] - 3.0).abs() < 1e-8);
        assert!((d.computation.matrix[1][0] - 1.0).abs() < 1e-8);
        assert!((d.computation.matrix[1][1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mirror_hopf() {
        let r = casson_lin_h2(&BraidWord::sigma1_power(-2)).unwrap();
        assert_eq!((r.h2, r.lk, r.agrees), (1, -1, true));
    }

    #[test]
    fn unlink_is_zero() {
        let r = casson_lin_h2(&BraidWord::identity(2)).unwrap();
        assert_eq!((r.h2, r.lk, r.agrees), (0, 0, true));
        assert!(r.intersections.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            casson_lin_h2(&BraidWord::sigma1_power(3)).unwrap_err(),
            Error::NotTwoComponents { components: 1 }
        );
        let b3 = crate::braid::parse_braid("s1^2", 3).unwrap();
        assert_eq!(casson_lin_h2(&b3).unwrap_err(), Error::NotTwoStrands { strands: 3 });
        let err = casson_lin_h2_with(
            &BraidWord::sigma1_power(2),
            &SignTuple::all_positive(2),
            &ScanConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnsupportedEpsilon { .. }));
    }

    #[test]
    fn tangency_marks_result_incomplete() {
        let config = ScanConfig { transversality_tolerance: 1e6, ..ScanConfig::default() };
        let r = casson_lin_h2_with(&BraidWord::sigma1_power(2), &SignTuple::twisted_pair(), &config).unwrap();
        assert!(!r.is_complete());
        assert!(!r.agrees);
        assert_eq!(r.unresolved.len(), 1);
        assert_eq!(r.h2, 0);
    }

    #[test]
    fn hopf_trace_passes() {
        let trace = verify_hopf();
        assert!(trace.all_pass(), "{trace}");
        assert_eq!(trace.entry("det M").unwrap().observed, "-1");
        assert_eq!(trace.entry("oriented pillowcase basis").unwrap().observed, "(u2, u1)");
        assert_eq!(trace.entry("h2").unwrap().to_string(), "[pass] h2 = -1");
        assert_eq!(trace.entries.last().unwrap().label, "h2");
    }
}
