//! Generators, property suites and the grid oracle shared by the
//! integration test targets.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use casson_lin::braid::{artin_action, BraidAutomorphism, BraidLetter, BraidWord, FreeWord};
use casson_lin::cassonlin::{intersection_sign, SignInput};
use casson_lin::orientation::{
    complement_frame, df, orient_pillowcase_pair, orientation_sign, TangentVector4,
};
use casson_lin::pillowcase::{
    canonicalize, conj_quadruple, normalize_with_conjugator, param_g, scan_intersections,
    IntersectionCandidate, PillowcasePoint, Quadruple, ScanConfig, TorusLift,
};
use casson_lin::quat::{PureQuaternion, Quaternion, TracelessElement};
use casson_lin::repspace::{eps_sigma, product_holonomy, RepTuple, SignTuple};
use casson_lin::Sign;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};
use rayon::prelude::*;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub type SuiteResult = Result<(), TestError<String>>;

fn describe<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> SuiteResult {
    r.map_err(|e| match e {
        TestError::Abort(reason) => TestError::Abort(reason),
        TestError::Fail(reason, value) => TestError::Fail(reason, format!("{value:?}")),
    })
}

pub fn pure() -> impl Strategy<Value = PureQuaternion> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(y, z, w)| PureQuaternion::new(y, z, w))
}

pub fn traceless() -> impl Strategy<Value = TracelessElement> {
    pure()
        .prop_filter("nonzero", |v| v.norm() > 0.1)
        .prop_map(|v| TracelessElement::from_pure(v.scale(1.0 / v.norm())).unwrap())
}

pub fn unit() -> impl Strategy<Value = Quaternion> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_map(|(x, y, z, w)| Quaternion::new(x, y, z, w))
        .prop_filter("nonzero", |q| q.norm() > 0.1)
        .prop_map(|q| q.scale(1.0 / q.norm()))
}

pub fn braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| {
        prop::collection::vec((1..n, any::<bool>()), 0..=max_len).prop_map(move |letters| {
            let letters = letters
                .into_iter()
                .map(|(g, s)| BraidLetter::new(g, if s { Sign::Positive } else { Sign::Negative }))
                .collect();
            BraidWord::new(n, letters).unwrap()
        })
    })
}

pub fn sign_tuple(n: usize) -> impl Strategy<Value = SignTuple> {
    prop::collection::vec(any::<bool>(), n - 1).prop_map(move |mut bits| {
        let negatives = bits.iter().filter(|b| !**b).count();
        bits.push(negatives % 2 == 0);
        SignTuple::new(bits.into_iter().map(|b| if b { Sign::Positive } else { Sign::Negative }).collect())
            .unwrap()
    })
}

fn word(n: usize, gens: &[(usize, i8)]) -> BraidWord {
    let letters = gens
        .iter()
        .map(|&(g, s)| BraidLetter::new(g, if s > 0 { Sign::Positive } else { Sign::Negative }))
        .collect();
    BraidWord::new(n, letters).unwrap()
}

fn same_action(a: &BraidAutomorphism, b: &BraidAutomorphism) -> bool {
    a.images() == b.images()
}

/// Braid relations hold for the action, and every braid fixes `x₁⋯xₙ`.
pub fn braid_relations(cases: u32) -> SuiteResult {
    let strategy = braid(5, 12).prop_flat_map(|w| {
        let n = w.strand_count();
        (Just(w), 1..n, 1..n, 0..=12usize)
    });
    describe(runner(cases).run(&strategy, |(w, i, j, cut)| {
        let n = w.strand_count();
        let a = artin_action(&w);
        let product = FreeWord::product_of_generators(n);
        prop_assert_eq!(a.apply(&product), product);

        let cut = cut.min(w.len());
        let (head, tail) = w.letters().split_at(cut);
        let head = BraidWord::new(n, head.to_vec()).unwrap();
        let tail = BraidWord::new(n, tail.to_vec()).unwrap();
        let splice = |mid: &BraidWord| artin_action(&head.concat(mid).unwrap().concat(&tail).unwrap());

        let relation = if i + 1 < n {
            Some((word(n, &[(i, 1), (i + 1, 1), (i, 1)]), word(n, &[(i + 1, 1), (i, 1), (i + 1, 1)])))
        } else {
            None
        };
        if let Some((l, r)) = relation {
            prop_assert!(same_action(&splice(&l), &splice(&r)));
        }
        if i.abs_diff(j) >= 2 {
            let l = word(n, &[(i, 1), (j, -1)]);
            let r = word(n, &[(j, -1), (i, 1)]);
            prop_assert!(same_action(&splice(&l), &splice(&r)));
        }
        let cancel = word(n, &[(i, 1), (i, -1)]);
        prop_assert!(same_action(&splice(&cancel), &a));
        Ok(())
    }))
}

fn rep(entries: Vec<TracelessElement>) -> RepTuple {
    RepTuple::new(entries)
}

/// `εσ` commutes with conjugation and preserves the product of the entries.
pub fn eps_sigma_equivariance(cases: u32) -> SuiteResult {
    let strategy = braid(5, 12).prop_flat_map(|w| {
        let n = w.strand_count();
        (Just(w), sign_tuple(n), prop::collection::vec(traceless(), n), unit())
    });
    describe(runner(cases).run(&strategy, |(w, eps, entries, g)| {
        let a = artin_action(&w);
        let rho = rep(entries);
        let image = eps_sigma(&eps, &a, &rho).unwrap();
        let moved = eps_sigma(&eps, &a, &rho.conj_by(g)).unwrap();
        prop_assert!(moved.distance(&image.conj_by(g)) < 1e-10);
        let drift = product_holonomy(&image).distance(product_holonomy(&rho));
        prop_assert!(drift < 1e-10, "product drift {}", drift);
        Ok(())
    }))
}

fn torus_point() -> impl Strategy<Value = TorusLift> {
    (0.0..TAU, 0.0..TAU).prop_map(|(a, b)| TorusLift::new(a, b))
}

fn quad_distance(p: &Quadruple, q: &Quadruple) -> f64 {
    p.iter().zip(q).map(|(x, y)| x.distance(*y)).fold(0.0, f64::max)
}

/// `g` is two-to-one onto the pillowcase away from the corners, and the
/// involution `θ ↦ −θ` is realized by conjugation with `i`.
pub fn pillowcase_identities(cases: u32) -> SuiteResult {
    describe(runner(cases).run(&(torus_point(), unit()), |(t, h)| {
        let q = param_g(t.theta1, t.theta2);
        let s = t.involution();
        let qi = conj_quadruple(&q, Quaternion::I);
        prop_assert!(quad_distance(&qi, &param_g(s.theta1, s.theta2)) < 1e-12);
        prop_assert!(canonicalize(t).approx_eq(canonicalize(s), 1e-12));
        prop_assert!(canonicalize(t).distance(canonicalize(s)) < 1e-12);
        if t.is_corner() {
            return Ok(());
        }
        let moved = conj_quadruple(&q, h);
        let (lift, k) = normalize_with_conjugator(&moved).unwrap();
        prop_assert!(quad_distance(&conj_quadruple(&moved, k), &param_g(lift.theta1, lift.theta2)) < 1e-12);
        prop_assert!(
            lift.torus_distance(t) < 1e-12 || lift.torus_distance(s) < 1e-12,
            "lift {:?} vs {:?}",
            lift,
            t
        );
        Ok(())
    }))
}

fn along(x: TracelessElement, v: PureQuaternion, t: f64) -> Quaternion {
    let n = v.norm();
    if n == 0.0 {
        return x.quaternion();
    }
    x.quaternion().scale((t * n).cos()) + v.to_quaternion().scale((t * n).sin() / n)
}

fn tangent_at(x: TracelessElement, v: PureQuaternion) -> PureQuaternion {
    v - x.vector().scale(v.dot(x.vector()))
}

/// Analytic `df` against a central finite difference of `ab d⁻¹c⁻¹`.
pub fn df_finite_difference(cases: u32) -> SuiteResult {
    let strategy = (prop::array::uniform4(traceless()), prop::array::uniform4(pure()));
    describe(runner(cases).run(&strategy, |(base, raw)| {
        let v = TangentVector4([0, 1, 2, 3].map(|s| tangent_at(base[s], raw[s])));
        let f = |t: f64| {
            let [a, b, c, d] = [0, 1, 2, 3].map(|s| along(base[s], v.0[s], t));
            a * b * d.inverse() * c.inverse()
        };
        let h = 1e-5;
        let numeric = ((f(h) - f(-h)).scale(0.5 / h) * f(0.0).inverse()).imaginary();
        let analytic = df(&base, &v);
        prop_assert!(numeric.distance(analytic) < 1e-6, "{} vs {}", numeric, analytic);
        Ok(())
    }))
}

/// Swapping two vectors flips `orientation_sign`; adding a multiple of one
/// vector to another does not change it.
pub fn orientation_sign_identities(cases: u32) -> SuiteResult {
    let strategy = (prop::array::uniform3(pure()), prop::array::uniform3(pure()), 0..3usize, 1..3usize, -3.0..3.0f64);
    describe(runner(cases).run(&strategy, |(test, reference, i, offset, c)| {
        let det = |f: &[PureQuaternion; 3]| f[0].dot(f[1].cross(f[2]));
        prop_assume!(det(&test).abs() > 1e-2 && det(&reference).abs() > 1e-2);
        let s = orientation_sign(&test, &reference).unwrap();
        let j = (i + offset) % 3;
        let mut swapped = test;
        swapped.swap(i, j);
        prop_assert_eq!(orientation_sign(&swapped, &reference).unwrap(), -s);
        let mut sheared = test;
        sheared[i] = sheared[i] + test[j].scale(c);
        prop_assert_eq!(orientation_sign(&sheared, &reference).unwrap(), s);
        let mut flipped = reference;
        flipped.swap(i, j);
        prop_assert_eq!(orientation_sign(&test, &flipped).unwrap(), -s);
        Ok(())
    }))
}

/// Intersection candidates of `σ₁^{2m}` for `m = ±1, …, ±5`.
pub fn family_candidates() -> Vec<(i64, IntersectionCandidate)> {
    let eps = SignTuple::twisted_pair();
    [-5i64, -4, -3, -2, -1, 1, 2, 3, 4, 5]
        .into_par_iter()
        .flat_map_iter(|m| {
            let a = artin_action(&BraidWord::sigma1_power(2 * m));
            scan_intersections(&eps, &a, &ScanConfig::default()).unwrap().into_iter().map(move |c| (m, c))
        })
        .collect()
}

fn random_complement(base: &Quadruple, raw: [[PureQuaternion; 4]; 3]) -> Option<[TangentVector4; 3]> {
    let mut w = raw.map(|r| TangentVector4([0, 1, 2, 3].map(|s| tangent_at(base[s], r[s]))));
    let images = w.map(|v| df(base, &v));
    let det = images[0].dot(images[1].cross(images[2]));
    if det.abs() < 1e-2 {
        return None;
    }
    if det < 0.0 {
        w[0] = -w[0];
    }
    Some(w)
}

/// The intersection sign does not depend on positive rescaling of either
/// velocity, on a global conjugation, or on the choice of complement `w`.
pub fn intersection_sign_invariance(cases: u32) -> SuiteResult {
    let candidates = family_candidates();
    let expected_sign = |m: i64| if m > 0 { Sign::Negative } else { Sign::Positive };
    let strategy = (
        0..candidates.len(),
        0.05..20.0f64,
        0.05..20.0f64,
        unit(),
        prop::array::uniform3(prop::array::uniform4(pure())),
    );
    describe(runner(cases).run(&strategy, |(index, s, t, g, raw)| {
        let (m, c) = &candidates[index];
        let input = SignInput::from_candidate(c).unwrap();
        let reference = intersection_sign(&input).unwrap().sign;
        prop_assert_eq!(reference, expected_sign(*m));

        let scaled = SignInput {
            velocity_delta: input.velocity_delta * s,
            velocity_gamma: input.velocity_gamma * t,
            ..input
        };
        prop_assert_eq!(intersection_sign(&scaled).unwrap().sign, reference);

        let moved = input.conj_by(g);
        prop_assert_eq!(intersection_sign(&moved).unwrap().sign, reference);

        if let Some(w) = random_complement(&moved.quadruple, raw) {
            let generic = orient_pillowcase_pair(&moved.quadruple, moved.pair, &w).unwrap();
            let canonical = orient_pillowcase_pair(
                &input.quadruple,
                input.pair,
                &complement_frame(&input.quadruple).unwrap(),
            )
            .unwrap();
            prop_assert_eq!(generic.swapped, canonical.swapped);
        }
        Ok(())
    }))
}

/// Zeros of the fixed-point residual found on a dense torus grid: each
/// connected region below a threshold contributes its minimum, and minima
/// are merged on the pillowcase. Returns one representative per cluster.
pub fn grid_oracle(m: i64, resolution: usize) -> Vec<PillowcasePoint> {
    let eps = SignTuple::twisted_pair();
    let a = artin_action(&BraidWord::sigma1_power(2 * m));
    let step = TAU / resolution as f64;
    let residual = |r: usize, c: usize| -> f64 {
        let [qa, qb, qc, qd] = param_g(r as f64 * step, c as f64 * step);
        let rho = RepTuple::new(vec![qa, qb]);
        let image = eps_sigma(&eps, &a, &rho).unwrap();
        let on_delta = qa.distance(qc).max(qb.distance(qd));
        let on_gamma = qc.distance(image.entries()[0]).max(qd.distance(image.entries()[1]));
        on_delta.max(on_gamma)
    };
    let grid: Vec<f64> = (0..resolution)
        .into_par_iter()
        .flat_map_iter(|r| (0..resolution).map(move |c| (r, c)).map(|(r, c)| residual(r, c)).collect::<Vec<_>>())
        .collect();
    let threshold = 8.0 * step;
    // Connected components of the sublevel set, with torus wrap-around.
    let mut seen = vec![false; grid.len()];
    let mut minima: Vec<PillowcasePoint> = Vec::new();
    for start in 0..grid.len() {
        if seen[start] || grid[start] >= threshold {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut best = start;
        while let Some(cell) = stack.pop() {
            if grid[cell] < grid[best] {
                best = cell;
            }
            let (r, c) = (cell / resolution, cell % resolution);
            let back = resolution - 1;
            for (dr, dc) in [(1, 0), (back, 0), (0, 1), (0, back), (1, 1), (back, back), (1, back), (back, 1)] {
                let next = ((r + dr) % resolution) * resolution + (c + dc) % resolution;
                if !seen[next] && grid[next] < threshold {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        let (r, c) = (best / resolution, best % resolution);
        minima.push(canonicalize(TorusLift::new(r as f64 * step, c as f64 * step)));
    }
    let mut clusters: Vec<PillowcasePoint> = Vec::new();
    for p in minima {
        if clusters.iter().all(|q| q.distance(p) > 0.05) {
            clusters.push(p);
        }
    }
    clusters.sort_by(|p, q| p.theta1().total_cmp(&q.theta1()));
    clusters
}

/// Where the fixed points of `σ₁^{2m}` sit, for comparison with the oracle.
pub fn expected_fixed_angles(m: i64) -> Vec<f64> {
    let n = 2 * m.abs();
    (0..n)
        .map(|r| (PI * (2 * r + 1) as f64 / n as f64).rem_euclid(TAU))
        .filter(|t| *t <= PI)
        .collect()
}

