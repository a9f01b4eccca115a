//! Traceless representations of the free group and the ε-twisted braid action.
//!
//! A homomorphism `F_n → SU(2)` is recorded by the images `(X₁, …, Xₙ)` of the
//! generators. The ε-twisted action sends entry `i` to `εᵢ · ρ(xᵢ^σ)`. Its
//! fixed points are the projective representations counted by the invariant.

use rayon::prelude::*;

use crate::braid::{BraidAutomorphism, FreeWord};
use crate::error::{Error, Result};
use crate::pillowcase::{param_g, TorusLift};
use crate::quat::{PureQuaternion, Quaternion, TracelessElement};
use crate::Sign;

/// Commutator norm below which two entries count as commuting.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct RepTuple(Vec<TracelessElement>);

impl RepTuple {
    pub fn new(entries: Vec<TracelessElement>) -> Self {
        RepTuple(entries)
    }

    pub fn entries(&self) -> &[TracelessElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conj_by(&self, g: Quaternion) -> RepTuple {
        RepTuple(self.0.iter().map(|x| x.conj_by(g)).collect())
    }

    /// Largest entrywise 4-vector distance.
    pub fn distance(&self, other: &RepTuple) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.0.iter().zip(&other.0).map(|(a, b)| a.distance(*b)).fold(0.0, f64::max)
    }
}

/// `(ε₁, …, εₙ)` with `ε₁ ⋯ εₙ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignTuple(Vec<Sign>);

impl SignTuple {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        let product = signs.iter().fold(Sign::Positive, |acc, &s| acc * s);
        if product != Sign::Positive {
            return Err(Error::SignProduct);
        }
        Ok(SignTuple(signs))
    }

    pub fn all_positive(n: usize) -> Self {
        SignTuple(vec![Sign::Positive; n])
    }

    /// The choice `(−1, −1)` for 2-strand braids.
    pub fn twisted_pair() -> Self {
        SignTuple(vec![Sign::Negative; 2])
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_i8s(&self) -> Vec<i8> {
        self.0.iter().map(|s| s.to_i8()).collect()
    }
}

fn check_generators(w: &FreeWord, n: usize) -> Result<()> {
    let max = w.max_generator();
    if max > n {
        return Err(Error::Index { index: max as u64, strands: n });
    }
    Ok(())
}

/// `ρ(w)`: the product of entries and their inverses in word order.
pub fn evaluate_word(w: &FreeWord, rho: &RepTuple) -> Result<Quaternion> {
    check_generators(w, rho.len())?;
    Ok(w.letters().iter().fold(Quaternion::ONE, |acc, l| {
        let x = rho.0[l.generator - 1].quaternion();
        match l.sign {
            Sign::Positive => acc * x,
            Sign::Negative => acc * x.conjugate(),
        }
    }))
}

/// `ρ(w)` together with its derivative along the tangent `rho_dot`
/// (one pure quaternion per entry), by the product rule.
pub fn evaluate_word_tangent(
    w: &FreeWord,
    rho: &RepTuple,
    rho_dot: &[PureQuaternion],
) -> Result<(Quaternion, Quaternion)> {
    check_generators(w, rho.len())?;
    if rho_dot.len() != rho.len() {
        return Err(Error::LengthMismatch { expected: rho.len(), found: rho_dot.len() });
    }
    let mut value = Quaternion::ONE;
    let mut deriv = Quaternion::ZERO;
    for l in w.letters() {
        let x = rho.0[l.generator - 1].quaternion();
        let dx = rho_dot[l.generator - 1].to_quaternion();
        let (f, df) = match l.sign {
            Sign::Positive => (x, dx),
            Sign::Negative => {
                let inv = x.conjugate();
                (inv, -(inv * dx * inv))
            }
        };
        deriv = deriv * f + value * df;
        value = value * f;
    }
    Ok((value, deriv))
}

fn check_lengths(eps: &SignTuple, a: &BraidAutomorphism, rho: &RepTuple) -> Result<()> {
    for found in [eps.len(), a.rank()] {
        if found != rho.len() {
            return Err(Error::LengthMismatch { expected: rho.len(), found });
        }
    }
    Ok(())
}

/// The ε-twisted action: entry `i` becomes `εᵢ · ρ(xᵢ^σ)`.
pub fn eps_sigma(eps: &SignTuple, a: &BraidAutomorphism, rho: &RepTuple) -> Result<RepTuple> {
    check_lengths(eps, a, rho)?;
    a.images()
        .iter()
        .zip(eps.signs())
        .map(|(w, &s)| TracelessElement::from_quaternion(evaluate_word(w, rho)? * s.to_f64()))
        .collect::<Result<Vec<_>>>()
        .map(RepTuple)
}

/// The ε-twisted action and its differential applied to `rho_dot`.
pub fn eps_sigma_tangent(
    eps: &SignTuple,
    a: &BraidAutomorphism,
    rho: &RepTuple,
    rho_dot: &[PureQuaternion],
) -> Result<(RepTuple, Vec<PureQuaternion>)> {
    check_lengths(eps, a, rho)?;
    let mut values = Vec::with_capacity(rho.len());
    let mut tangents = Vec::with_capacity(rho.len());
    for (w, &s) in a.images().iter().zip(eps.signs()) {
        let (v, dv) = evaluate_word_tangent(w, rho, rho_dot)?;
        values.push(TracelessElement::from_quaternion(v * s.to_f64())?);
        tangents.push((dv * s.to_f64()).imaginary());
    }
    Ok((RepTuple(values), tangents))
}

/// `max_i |εσ(ρ)ᵢ − ρᵢ|`; zero exactly at fixed points. Infinite when the
/// inputs have mismatched lengths or the action cannot be evaluated.
pub fn fixed_point_residual(eps: &SignTuple, a: &BraidAutomorphism, rho: &RepTuple) -> f64 {
    match eps_sigma(eps, a, rho) {
        Ok(image) => image.distance(rho),
        Err(_) => f64::INFINITY,
    }
}

/// True when some pair of entries fails to commute.
pub fn is_irreducible(rho: &RepTuple) -> bool {
    let q: Vec<Quaternion> = rho.0.iter().map(|x| x.quaternion()).collect();
    q.iter().enumerate().any(|(n, &x)| {
        q[n + 1..].iter().any(|&y| (x * y - y * x).norm() > COMMUTATOR_TOLERANCE)
    })
}

/// `X₁ ⋯ Xₙ`.
pub fn product_holonomy(rho: &RepTuple) -> Quaternion {
    rho.0.iter().fold(Quaternion::ONE, |acc, x| acc * x.quaternion())
}

/// Fixed-point residual of a torus point `g(θ₁, θ₂) = (a, b, c, d)` read as
/// `(X, Y) = (a, b)` on the diagonal `(c, d) = (X, Y)`: zero exactly when the
/// quadruple is `(ρ, ρ)` with `ρ` fixed by `εσ`. Only meaningful for 2 strands.
pub fn torus_residual(eps: &SignTuple, a: &BraidAutomorphism, lift: TorusLift) -> f64 {
    let [qa, qb, qc, qd] = param_g(lift.theta1, lift.theta2);
    let rho = RepTuple(vec![qa, qb]);
    let diagonal = qa.distance(qc).max(qb.distance(qd));
    diagonal.max(fixed_point_residual(eps, a, &rho))
}

/// Diagnostic scan of [`torus_residual`] on a `resolution × resolution` grid
/// of the torus, row-major in `θ₁`, with sample `(r, c)` at
/// `(2π r / resolution, 2π c / resolution)`.
pub fn residual_grid(eps: &SignTuple, a: &BraidAutomorphism, resolution: usize) -> Vec<f64> {
    let step = std::f64::consts::TAU / resolution as f64;
    (0..resolution)
        .into_par_iter()
        .flat_map_iter(|r| {
            (0..resolution).map(move |c| {
                torus_residual(eps, a, TorusLift::new(r as f64 * step, c as f64 * step))
            })
        })
        .collect()
}
