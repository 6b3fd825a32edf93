//! Randomized invariants across the pipeline: the apolarity calculus,
//! the quadric-to-cubic correspondence on binary forms, the projective
//! maps of the chain, and the structure of successful decompositions.
//!
//! Algebraic laws run under proptest; geometric invariants run over fixed
//! seed ranges so every execution checks the same instances.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use waring7_core::binary::{
    combine, eval_dual_quadratic, l_space_basis, next_index, omega_map, omega_point,
    quadric_perp, relative_discriminant, roots_of_dual_quadratic, sum_of_squares_coeffs, Frame,
    ProjPoint,
};
use waring7_core::decompose::{
    decompose_seven, proof_checks, random_frame, v_step, SevenResult,
};
use waring7_core::linalg::{proj_distance_3, CMat};
use waring7_core::poly::{
    antiderivative, apolar_apply, dual_multiply, evaluate_dual, monomial_count, multiply,
    power_of_linear, rel_distance, Decomposition, DecompositionTerm,
};
use waring7_core::theta::{build_chain, PsiContext};
use waring7_core::{HomogeneousForm, LinearForm, Scalar, Side, Tolerances};

const TOL: Tolerances = Tolerances::new(1e-9, 1e-8);

fn c64(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

fn centered(rng: &mut ChaCha12Rng) -> Scalar {
    c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
}

fn random_form(rng: &mut ChaCha12Rng, side: Side, nvars: usize, degree: usize) -> HomogeneousForm {
    let coeffs: Vec<Scalar> = (0..monomial_count(nvars, degree))
        .map(|_| centered(rng))
        .collect();
    HomogeneousForm::new(side, nvars, degree, coeffs).expect("random coefficients are valid")
}

/// Sine of the Hermitian angle between two nonzero coefficient vectors,
/// computed from the projection residual so values near zero keep full
/// precision.
fn proj_distance_vec(a: &[Scalar], b: &[Scalar]) -> f64 {
    let na2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let nb2: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    assert!(na2 > 0.0 && nb2 > 0.0, "projective distance needs nonzero vectors");
    let dot: Scalar = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let scale = dot / na2;
    let r2: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (y - x * scale).norm_sqr())
        .sum();
    (r2 / nb2).min(1.0).sqrt()
}

// ---------------------------------------------------------------------------
// apolarity calculus

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    ((-1.0f64..1.0), (-1.0f64..1.0)).prop_map(|(re, im)| Scalar::new(re, im))
}

fn form_strategy(side: Side, degree: usize) -> impl Strategy<Value = HomogeneousForm> {
    prop::collection::vec(scalar_strategy(), monomial_count(3, degree))
        .prop_map(move |c| HomogeneousForm::new(side, 3, degree, c).expect("valid form"))
}

fn linear_strategy(side: Side) -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(scalar_strategy(), 3).prop_map(move |c| {
        LinearForm::from_coeffs(side, &c)
    })
}

proptest! {
    #[test]
    fn composing_derivatives_multiplies_operators(
        x in form_strategy(Side::Dual, 1),
        y in form_strategy(Side::Dual, 2),
        f in form_strategy(Side::Primal, 4),
    ) {
        let nested = apolar_apply(&x, &apolar_apply(&y, &f));
        let joint = apolar_apply(&dual_multiply(&x, &y), &f);
        prop_assert!(rel_distance(&nested, &joint) <= 1e-12);
    }

    #[test]
    fn derivatives_commute(
        x in form_strategy(Side::Dual, 1),
        y in form_strategy(Side::Dual, 2),
        f in form_strategy(Side::Primal, 4),
    ) {
        let xy = apolar_apply(&x, &apolar_apply(&y, &f));
        let yx = apolar_apply(&y, &apolar_apply(&x, &f));
        prop_assert!(rel_distance(&xy, &yx) <= 1e-12);
    }

    #[test]
    fn derivative_of_a_power_is_directional(
        x in linear_strategy(Side::Dual),
        v in linear_strategy(Side::Primal),
        d in 1usize..=4,
    ) {
        let lhs = apolar_apply(x.form(), &power_of_linear(&v, d));
        let k = Scalar::new(d as f64, 0.0) * evaluate_dual(x.form(), &v);
        let rhs = power_of_linear(&v, d - 1).scaled(k);
        prop_assert!(rel_distance(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn dual_evaluation_is_multiplicative(
        x in form_strategy(Side::Dual, 1),
        y in form_strategy(Side::Dual, 2),
        v in linear_strategy(Side::Primal),
    ) {
        let product = evaluate_dual(&dual_multiply(&x, &y), &v);
        let split = evaluate_dual(&x, &v) * evaluate_dual(&y, &v);
        prop_assert!((product - split).norm() <= 1e-12 * (1.0 + split.norm()));
    }

    #[test]
    fn power_expansion_matches_naive_products(v in linear_strategy(Side::Primal)) {
        let square = multiply(v.form(), v.form());
        let quartic = multiply(&square, &square);
        prop_assert!(rel_distance(&power_of_linear(&v, 4), &quartic) <= 1e-12);
        let cubic = multiply(&square, v.form());
        prop_assert!(rel_distance(&power_of_linear(&v, 3), &cubic) <= 1e-12);
    }

    #[test]
    fn antiderivative_inverts_the_derivative(
        coeffs in prop::collection::vec(scalar_strategy(), 1..=4),
        dirs in prop::collection::vec(prop::collection::vec(scalar_strategy(), 3), 1..=4),
        xc in prop::collection::vec(scalar_strategy(), 3),
        deg_x in 1usize..=2,
    ) {
        let n = coeffs.len().min(dirs.len());
        let x = if deg_x == 1 {
            HomogeneousForm::new(Side::Dual, 3, 1, xc.clone()).expect("valid operator")
        } else {
            let lin = LinearForm::from_coeffs(Side::Dual, &xc);
            dual_multiply(lin.form(), lin.form())
        };
        prop_assume!(x.max_norm() > 0.1);
        let mut terms = Vec::new();
        for k in 0..n {
            let dir = LinearForm::from_coeffs(Side::Primal, &dirs[k]);
            prop_assume!(dir.max_norm() > 0.1);
            // stay away from directions the operator nearly annihilates
            let val = evaluate_dual(&x, &dir);
            let scale = x.max_norm() * dir.max_norm().powi(x.degree() as i32);
            prop_assume!(val.norm() > 0.05 * scale);
            terms.push(DecompositionTerm::new(coeffs[k], dir));
        }
        let d = 3;
        let big = antiderivative(&terms, d, &x, 1e-9).expect("guarded directions");
        prop_assert_eq!(big.degree(), d + x.degree());
        let expansion = Decomposition { degree: d, terms, target_residual: 0.0 }.expand();
        prop_assert!(rel_distance(&apolar_apply(&x, &big), &expansion) <= 1e-10);
    }

    #[test]
    fn expansion_evaluates_like_its_terms(
        coeffs in prop::collection::vec(scalar_strategy(), 3),
        dirs in prop::collection::vec(prop::collection::vec(scalar_strategy(), 3), 3),
        z in prop::collection::vec(scalar_strategy(), 3),
    ) {
        let terms: Vec<DecompositionTerm> = coeffs
            .iter()
            .zip(&dirs)
            .map(|(&c, d)| DecompositionTerm::new(c, LinearForm::from_coeffs(Side::Primal, d)))
            .collect();
        let dec = Decomposition { degree: 4, terms, target_residual: 0.0 };
        let lhs = waring7_core::poly::evaluate_at(&dec.expand(), &z);
        let mut rhs = Scalar::new(0.0, 0.0);
        for (c, d) in coeffs.iter().zip(&dirs) {
            let dot: Scalar = d.iter().zip(&z).map(|(a, b)| a * b).sum();
            rhs += c * dot.powu(4);
        }
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

// ---------------------------------------------------------------------------
// binary correspondence

fn random_binary_quadric(rng: &mut ChaCha12Rng) -> HomogeneousForm {
    random_form(rng, Side::Primal, 2, 2)
}

/// Draws a quadric with a comfortably nonzero discriminant together with a
/// generic operator direction and a generic complement element.
fn correspondence_instance(
    seed: u64,
) -> Option<(
    HomogeneousForm,
    LinearForm,
    (HomogeneousForm, HomogeneousForm),
    HomogeneousForm,
)> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let q = random_binary_quadric(&mut rng);
    if relative_discriminant(&q).ok()? <= 1e-3 {
        return None;
    }
    let xc = [centered(&mut rng), centered(&mut rng)];
    if xc[0].norm().max(xc[1].norm()) < 0.2 {
        return None;
    }
    let x = LinearForm::from_coeffs(Side::Dual, &xc);
    let perp = quadric_perp(&q).ok()?;
    let h = combine(&perp, &ProjPoint::new([centered(&mut rng), centered(&mut rng)]));
    if h.max_norm() < 0.05 {
        return None;
    }
    Some((q, x, perp, h))
}

#[test]
fn correspondence_image_is_annihilated_by_its_quadric() {
    let mut checked = 0;
    for seed in 0..300u64 {
        let Some((q, x, _perp, h)) = correspondence_instance(seed) else {
            continue;
        };
        let f = omega_point(&q, &x, &h, &TOL).expect("the defining system has a line of solutions");
        let dh = apolar_apply(&h, &f);
        let rel = dh.max_norm() / (6.0 * h.max_norm() * f.max_norm());
        assert!(rel <= 1e-9, "seed {seed}: derivative along h is {rel:.3e}");
        // the other defining condition: d_x f returns to the quadric line
        let dx = apolar_apply(x.form(), &f);
        let d = proj_distance_3(
            &[dx.coeffs()[0], dx.coeffs()[1], dx.coeffs()[2]],
            &[q.coeffs()[0], q.coeffs()[1], q.coeffs()[2]],
        );
        assert!(d <= 1e-9, "seed {seed}: image derivative strays from q by {d:.3e}");
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100, "expected 100 usable instances");
}

#[test]
fn cubics_away_from_the_correspondence_keep_a_visible_derivative() {
    let mut checked = 0;
    for seed in 0..400u64 {
        let Some((q, x, perp, h)) = correspondence_instance(seed) else {
            continue;
        };
        let Ok(l) = l_space_basis(&x, &perp) else {
            continue;
        };
        let fh = omega_point(&q, &x, &h, &TOL).expect("correspondence image exists");
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5bf0_3635);
        let a = centered(&mut rng);
        let b = centered(&mut rng);
        let f = &l.0.scaled(a) + &l.1.scaled(b);
        if f.max_norm() < 0.05 {
            continue;
        }
        let d = proj_distance_vec(f.coeffs(), fh.coeffs());
        // the derivative shrinks linearly with the distance to the image
        // line, so the claim is tested where the distance is macroscopic
        if d < 5e-2 {
            continue;
        }
        let dh = apolar_apply(&h, &f);
        let rel = dh.max_norm() / (6.0 * h.max_norm() * f.max_norm());
        assert!(
            rel > TOL.zero.sqrt(),
            "seed {seed}: distance {d:.3e} but derivative only {rel:.3e}"
        );
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100, "expected 100 usable instances");
}

#[test]
fn correspondence_map_extends_to_a_fourth_point() {
    let mut checked = 0;
    for seed in 0..300u64 {
        let Some((q, x, perp, _)) = correspondence_instance(seed) else {
            continue;
        };
        let Ok(l) = l_space_basis(&x, &perp) else {
            continue;
        };
        let Ok(map) = omega_map(&q, &x, &perp, &l, &TOL) else {
            continue;
        };
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x00c0_ffee);
        let p = ProjPoint::new([centered(&mut rng), centered(&mut rng)]);
        let h4 = combine(&perp, &p);
        if h4.max_norm() < 0.05 {
            continue;
        }
        let direct = omega_point(&q, &x, &h4, &TOL).expect("image of the fourth point");
        let through_map = combine(&l, &map.apply(&p));
        let d = proj_distance_vec(direct.coeffs(), through_map.coeffs());
        assert!(d <= 1e-9, "seed {seed}: fourth point misses by {d:.3e}");
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100, "expected 100 usable instances");
}

#[test]
fn extracted_roots_annihilate_their_quadratic() {
    let mut checked = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let h = random_form(&mut rng, Side::Dual, 2, 2);
        if h.max_norm() < 0.05 {
            continue;
        }
        let Ok(pair) = roots_of_dual_quadratic(&h, TOL.zero) else {
            continue;
        };
        for p in [&pair.first, &pair.second] {
            let pn = p.coords()[0].norm().max(p.coords()[1].norm());
            let val = eval_dual_quadratic(&h, p).norm();
            assert!(
                val <= 1e-10 * h.max_norm() * pn * pn,
                "seed {seed}: root evaluates to {val:.3e}"
            );
        }
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100, "expected 100 usable instances");
}

#[test]
fn two_squares_reproduce_their_quadric() {
    let mut checked = 0;
    for seed in 0..400u64 {
        let Some((q, _x, _perp, h)) = correspondence_instance(seed) else {
            continue;
        };
        let Ok(pair) = roots_of_dual_quadratic(&h, TOL.zero) else {
            continue;
        };
        if pair.repeated {
            continue;
        }
        let u = LinearForm::from_coeffs(Side::Primal, pair.first.coords());
        let w = LinearForm::from_coeffs(Side::Primal, pair.second.coords());
        let Ok((alpha, beta)) = sum_of_squares_coeffs(&q, &u, &w, &TOL) else {
            continue;
        };
        let rebuilt = &power_of_linear(&u, 2).scaled(alpha) + &power_of_linear(&w, 2).scaled(beta);
        let res = (&rebuilt - &q).max_norm();
        assert!(res <= 1e-10 * q.max_norm(), "seed {seed}: residual {res:.3e}");
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100, "expected 100 usable instances");
}

#[test]
fn restriction_inverts_embedding() {
    let mut checked = 0;
    for seed in 0..60u64 {
        let Ok(frame) = random_frame(9000 + seed) else {
            continue;
        };
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        for i in 0..3 {
            let ctx = frame.context(i);
            for degree in [2usize, 3] {
                // conditioning of the embedding, from its monomial columns
                let cols: Vec<Vec<Scalar>> = (0..monomial_count(2, degree))
                    .map(|k| {
                        let mut c = vec![Scalar::new(0.0, 0.0); monomial_count(2, degree)];
                        c[k] = Scalar::new(1.0, 0.0);
                        let e = HomogeneousForm::new(Side::Primal, 2, degree, c)
                            .expect("basis monomial");
                        ctx.embed(&e).coeffs().to_vec()
                    })
                    .collect();
                let svd = CMat::from_cols(&cols).svd().expect("embed matrix svd");
                let cond = svd.singular_values[0]
                    / svd.singular_values.last().copied().unwrap_or(f64::MIN_POSITIVE);
                // a skewed plane basis legitimately costs eps * cond
                let tol = (100.0 * f64::EPSILON * cond).max(1e-12);
                let b = random_form(&mut rng, Side::Primal, 2, degree);
                let t = ctx.embed(&b);
                let back = ctx.restrict(&t, 1e-9).expect("embedded forms restrict");
                let r = rel_distance(&back, &b);
                assert!(
                    r <= tol,
                    "seed {seed}: round trip off by {r:.3e} at plane {i} degree {degree} (cond {cond:.3e})"
                );
            }
        }
        checked += 1;
        if checked == 25 {
            break;
        }
    }
    assert_eq!(checked, 25, "expected 25 usable frames");
}

// ---------------------------------------------------------------------------
// chain maps

/// A random quartic with its fourth-power correction removed, paired with
/// the frame that produced it. `None` when the draw degenerates.
fn harmonic_remainder(seed: u64) -> Option<(HomogeneousForm, Frame)> {
    let frame = random_frame(7000 + seed).ok()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let f = random_form(&mut rng, Side::Primal, 3, 4);
    let vs = v_step(&f, &frame, &TOL).ok()?;
    if !vs.applied {
        return None;
    }
    Some((vs.g, frame))
}

#[test]
fn psi_is_linear_and_keeps_rank_two_spans() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let Some((g, frame)) = harmonic_remainder(seed) else {
            continue;
        };
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x7777);
        for i in 0..3 {
            let i2 = next_index(next_index(i));
            let c = apolar_apply(frame.x(i2).form(), &g);
            let Ok(psi) = PsiContext::new(c, &frame, i, &TOL) else {
                continue;
            };
            let Ok(perp) = quadric_perp(psi.q_tail_binary()) else {
                continue;
            };
            let x_dom = LinearForm::from_coeffs(Side::Dual, &[Scalar::ONE, Scalar::ZERO]);
            let Ok(l) = l_space_basis(&x_dom, &perp) else {
                continue;
            };
            let fa = psi.domain_context().embed(&l.0);
            let fb = psi.domain_context().embed(&l.1);
            let a = centered(&mut rng);
            let b = centered(&mut rng);
            let mix = &fa.scaled(a) + &fb.scaled(b);
            if mix.max_norm() < 0.05 {
                continue;
            }
            let lhs = psi.apply(&mix, &TOL).expect("members of L are accepted");
            let rhs = &psi.apply(&fa, &TOL).expect("basis cubic").scaled(a)
                + &psi.apply(&fb, &TOL).expect("basis cubic").scaled(b);
            assert!(
                rel_distance(&lhs, &rhs) <= 1e-10,
                "seed {seed} plane {i}: linearity residual {:.3e}",
                rel_distance(&lhs, &rhs)
            );
            // the span of the cubic, the input, and the image stays planar;
            // unit columns make the singular-value ratio a rank statement
            let unit = |f: &HomogeneousForm| -> Vec<Scalar> {
                let n: f64 = f.coeffs().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                f.coeffs().iter().map(|z| z / n).collect()
            };
            let m = CMat::from_cols(&[unit(psi.cubic()), unit(&mix), unit(&lhs)]);
            let svd = m.svd().expect("10x3 svd converges");
            let ratio = svd.singular_values[2] / svd.singular_values[0];
            assert!(ratio <= 1e-8, "seed {seed} plane {i}: rank-3 span, ratio {ratio:.3e}");
            // the distinguished power direction is an eigenvector; an
            // absolute error in the multiplier moves the image by a
            // multiple of |c| / |v^3|, so the bound carries that ratio
            let image = psi.apply(psi.vcube(), &TOL).expect("the power lies in L");
            let d = proj_distance_vec(image.coeffs(), psi.vcube().coeffs());
            let amplify = 1.0 + psi.cubic().max_norm() / psi.vcube().max_norm();
            assert!(
                d <= 1e-10 * amplify,
                "seed {seed} plane {i}: power direction moved {d:.3e} (amplify {amplify:.3e})"
            );
            checked += 1;
        }
        if checked >= 60 {
            break;
        }
    }
    assert!(checked >= 60, "expected 60 usable psi instances, got {checked}");
}

#[test]
fn chain_composition_closes_at_fixed_points() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let Some((g, frame)) = harmonic_remainder(seed) else {
            continue;
        };
        let Ok(chain) = build_chain(&g, &frame, &TOL) else {
            continue;
        };
        // composite equals the ordered product of the three maps
        let prod = chain.theta[2]
            .matrix()
            .matmul(chain.theta[1].matrix())
            .matmul(chain.theta[0].matrix());
        let flat = |m: &CMat| vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]];
        let d = proj_distance_vec(&flat(&prod), &flat(chain.composite.matrix()));
        assert!(d <= 1e-10, "seed {seed}: composite differs from product by {d:.3e}");
        assert!(!chain.fixed.points.is_empty());
        for (k, p) in chain.fixed.points.iter().enumerate() {
            // eigenvector residual against the composite matrix
            let mp = chain.composite.matrix().matvec(p.coords());
            let pp: Scalar = p.coords().iter().map(|z| z.conj() * z).sum();
            let mu: Scalar = p
                .coords()
                .iter()
                .zip(&mp)
                .map(|(a, b)| a.conj() * b)
                .sum::<Scalar>()
                / pp;
            let mut res = 0.0f64;
            let mut scale = 0.0f64;
            for (a, b) in p.coords().iter().zip(&mp) {
                res = res.max((b - mu * a).norm());
                scale = scale.max(b.norm());
            }
            assert!(
                res <= 1e-10 * scale.max(1e-300),
                "seed {seed}: eigen residual {res:.3e}"
            );
            // walking the three maps returns to the start
            let around = chain.step(2, &chain.step(1, &chain.step(0, p)));
            assert!(
                around.distance(p) <= 1e-8,
                "seed {seed} point {k}: closure {:.3e}",
                around.distance(p)
            );
            assert!(chain.closure[k] <= 1e-8);
        }
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20, "expected 20 usable chains");
}

// ---------------------------------------------------------------------------
// decomposition structure

fn check_success_structure(f: &HomogeneousForm, frame: &Frame, seven: &SevenResult, seed: u64) {
    assert!(seven.residual <= TOL.verify, "seed {seed}: residual {:.3e}", seven.residual);
    let recomputed = waring7_core::decompose::verify(f, &seven.decomposition);
    assert!((recomputed - seven.residual).abs() <= 1e-14);
    assert_eq!(seven.decomposition.terms.len(), 7);
    assert_eq!(seven.six.candidate.decomposition.terms.len(), 6);

    // two directions per plane, annihilated by the plane functional
    for (k, term) in seven.decomposition.terms[..6].iter().enumerate() {
        let i = k / 2;
        let x = frame.x(i);
        let val = evaluate_dual(x.form(), &term.direction).norm();
        let scale = x.max_norm() * term.direction.max_norm();
        assert!(
            val <= 1e-10 * scale,
            "seed {seed}: direction {k} leaves plane {i} by {val:.3e}"
        );
    }

    // each pair comes from the roots of the fixed quadric at its plane
    let cand = &seven.six.candidate;
    for i in 0..3 {
        let h = seven.six.chain.quadric_at(i, &cand.points[i]);
        let (u, w) = (&cand.roots[i].0, &cand.roots[i].1);
        for p in [u, w] {
            let pn = p.coords()[0].norm().max(p.coords()[1].norm());
            let val = eval_dual_quadratic(&h, p).norm();
            assert!(
                val <= 1e-9 * h.max_norm() * pn * pn,
                "seed {seed}: root of plane {i} off its quadric by {val:.3e}"
            );
        }
    }

    // derivative split and quadric identities of the pair structure
    let checks = proof_checks(&seven.v_step.g, cand, frame);
    assert!(
        checks.worst() <= 1e-9,
        "seed {seed}: structural identity residual {:.3e}",
        checks.worst()
    );

    // the seventh term points along the triple derivative and recovers it
    let triple = frame.triple_operator();
    let dv = apolar_apply(&triple, f);
    let last = seven.decomposition.terms.last().expect("seven terms");
    let lc = last.direction.coeffs();
    let d = proj_distance_3(
        &[lc[0], lc[1], lc[2]],
        &[dv.coeffs()[0], dv.coeffs()[1], dv.coeffs()[2]],
    );
    assert!(d <= 1e-10, "seed {seed}: seventh direction misses by {d:.3e}");
    let vterm = power_of_linear(&last.direction, 4).scaled(last.coefficient);
    assert!(
        rel_distance(&apolar_apply(&triple, &vterm), &dv) <= 1e-10,
        "seed {seed}: seventh term does not absorb the triple derivative"
    );
}

#[test]
fn successful_runs_have_the_claimed_structure() {
    let mut successes = 0;
    let mut attempts = 0;
    for seed in 0..40u64 {
        let Ok(frame) = random_frame(3000 + seed) else {
            continue;
        };
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, Side::Primal, 3, 4);
        attempts += 1;
        let Ok(seven) = decompose_seven(&f, &frame, &TOL) else {
            continue;
        };
        check_success_structure(&f, &frame, &seven, seed);
        successes += 1;
    }
    assert!(
        successes * 10 >= attempts * 8,
        "only {successes} of {attempts} random runs succeeded"
    );
}

#[test]
fn decomposition_is_deterministic() {
    let frame = random_frame(3001).expect("frame builds");
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let f = random_form(&mut rng, Side::Primal, 3, 4);
    let a = decompose_seven(&f, &frame, &TOL).expect("decomposes");
    let b = decompose_seven(&f, &frame, &TOL).expect("decomposes");
    assert_eq!(a.residual.to_bits(), b.residual.to_bits());
    assert_eq!(a.decomposition.terms.len(), b.decomposition.terms.len());
    for (ta, tb) in a.decomposition.terms.iter().zip(&b.decomposition.terms) {
        assert_eq!(ta.coefficient, tb.coefficient);
        assert_eq!(ta.direction.coeffs(), tb.direction.coeffs());
    }
}

#[test]
fn forward_built_power_sums_decompose_back() {
    // forms assembled from seven explicit powers, decomposed with an
    // unrelated frame, must reproduce themselves
    let mut successes = 0;
    let mut attempts = 0;
    for seed in 0..30u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut acc = HomogeneousForm::zero(Side::Primal, 3, 4);
        for _ in 0..7 {
            let dir = LinearForm::from_coeffs(
                Side::Primal,
                &[centered(&mut rng), centered(&mut rng), centered(&mut rng)],
            );
            acc = &acc + &power_of_linear(&dir, 4).scaled(centered(&mut rng));
        }
        let Ok(frame) = random_frame(5000 + seed) else {
            continue;
        };
        attempts += 1;
        if let Ok(seven) = decompose_seven(&acc, &frame, &TOL) {
            assert!(seven.residual <= TOL.verify);
            let back = seven.decomposition.expand();
            assert!(rel_distance(&back, &acc) <= TOL.verify);
            successes += 1;
        }
    }
    assert!(
        successes * 10 >= attempts * 9,
        "only {successes} of {attempts} forward-built forms decomposed"
    );
}
