use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepstruct_core::approximations::{random_robustness_pure, robustness};
use sepstruct_core::linalg::{
    hermitian_eig, partial_transpose, realign, schmidt, tensor_product, trace_norm,
};
use sepstruct_core::separability::{
    common_witness_exists, finer_decomposition, indicator, ppt_min_eig, verdict, Outcome,
    WitnessAnswer,
};
use sepstruct_core::states::{max_mixed, werner};
use sepstruct_core::structure::{product_vectors_in_subspace, purely_decompose};
use sepstruct_core::{
    BipartiteDims, ComplexMatrix, Criterion, DensityMatrix, FamilyLine, Options, PureState, C64,
};

fn opts() -> Options {
    Options::default()
}

fn dims(a: usize, b: usize) -> BipartiteDims {
    BipartiteDims::new(a, b).unwrap()
}

fn gaussian_ish(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian_ish(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn random_pure(rng: &mut ChaCha8Rng, d: BipartiteDims) -> PureState {
    PureState::new(random_vector(rng, d.total()), d).unwrap()
}

/// `G G† / tr` with `G` of shape `n × rank`.
fn random_state(rng: &mut ChaCha8Rng, d: BipartiteDims, rank: usize) -> DensityMatrix {
    let n = d.total();
    let g = ComplexMatrix::from_fn(n, rank, |_, _| gaussian_ish(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr), d).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian_ish(rng));
    let h = g.lin_comb(0.5, &g.adjoint(), 0.5);
    let eig = hermitian_eig(&h, 1e-14).unwrap();
    ComplexMatrix::from_fn(n, n, |i, j| eig.vectors[j][i])
}

fn local_unitary(rng: &mut ChaCha8Rng, d: BipartiteDims) -> ComplexMatrix {
    tensor_product(&random_unitary(rng, d.d_a()), &random_unitary(rng, d.d_b()))
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = rng_for(seed);
        let d = dims(da, db);
        let n = d.total();
        let m = ComplexMatrix::from_fn(n, n, |_, _| gaussian_ish(&mut rng));
        let back = partial_transpose(&partial_transpose(&m, d).unwrap(), d).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn ccnr_norm_is_local_unitary_invariant(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = rng_for(seed);
        let d = dims(da, db);
        let rho = random_state(&mut rng, d, d.total());
        let u = local_unitary(&mut rng, d);
        let rotated = &(&u * rho.matrix()) * &u.adjoint();
        let before = trace_norm(&realign(rho.matrix(), d).unwrap());
        let after = trace_norm(&realign(&rotated, d).unwrap());
        prop_assert!((before - after).abs() < 1e-9, "{} vs {}", before, after);
    }

    #[test]
    fn schmidt_coefficients_are_local_unitary_invariant(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = rng_for(seed);
        let d = dims(da, db);
        let psi = random_vector(&mut rng, d.total());
        let rotated = local_unitary(&mut rng, d).mul_vec(&psi);
        let before = schmidt(&psi, d).unwrap().coefficients;
        let after = schmidt(&rotated, d).unwrap().coefficients;
        prop_assert_eq!(before.len(), after.len());
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn indicators_are_midpoint_concave(seed in any::<u64>(), da in 2usize..4, s in 0.0..1.0f64, u in 0.0..1.0f64) {
        let mut rng = rng_for(seed);
        let d = dims(da, 3);
        let line = FamilyLine::new(
            random_state(&mut rng, d, 2),
            random_state(&mut rng, d, d.total()),
        ).unwrap();
        for c in [Criterion::Ppt, Criterion::Ccnr] {
            let f = indicator(&line, c);
            let mid = f(0.5 * (s + u));
            prop_assert!(mid >= 0.5 * (f(s) + f(u)) - 1e-10, "{:?}", c);
        }
    }

    #[test]
    fn purely_decompose_reconstructs(seed in any::<u64>(), rank in 1usize..5) {
        let mut rng = rng_for(seed);
        let rho = random_state(&mut rng, dims(2, 2), rank);
        let s = purely_decompose(&rho, &opts());
        prop_assert!(s.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
        prop_assert!((0.0..=1.0).contains(&s.lambda_ps));
        // every two-dimensional subspace of C²⊗C² holds a product vector
        if let Some(pe) = &s.pe {
            prop_assert_eq!(pe.eig().values.iter().filter(|&&l| l > 1e-9).count(), 1);
        }
    }

    #[test]
    fn purely_decompose_is_deterministic(seed in any::<u64>(), rank in 1usize..5) {
        let mut rng = rng_for(seed);
        let rho = random_state(&mut rng, dims(2, 3), rank);
        let a = purely_decompose(&rho, &opts());
        let b = purely_decompose(&rho, &opts());
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn purely_decompose_commutes_with_relabeling(seed in any::<u64>(), rank in 1usize..4) {
        let mut rng = rng_for(seed);
        let rho = random_state(&mut rng, dims(2, 2), rank);
        let s = purely_decompose(&rho, &opts());
        let t = purely_decompose(&rho.swap_parties(), &opts());
        prop_assert!((s.lambda_ps - t.lambda_ps).abs() < 1e-6, "{} vs {}", s.lambda_ps, t.lambda_ps);
        if let (Some(p), Some(q)) = (&s.pe, &t.pe) {
            prop_assert!(p.swap_parties().max_abs_diff(q) < 1e-6);
        }
    }

    #[test]
    fn purely_decompose_is_idempotent(seed in any::<u64>(), rank in 2usize..5) {
        let mut rng = rng_for(seed);
        let rho = random_state(&mut rng, dims(2, 2), rank);
        let s = purely_decompose(&rho, &opts());
        if let Some(ps) = &s.ps {
            prop_assert!((purely_decompose(ps, &opts()).lambda_ps - 1.0).abs() < 1e-6);
        }
        if let Some(pe) = &s.pe {
            prop_assert!(purely_decompose(pe, &opts()).lambda_ps.abs() < 1e-6);
        }
    }

    #[test]
    fn purely_entangled_part_admits_no_product_projector(seed in any::<u64>(), rank in 2usize..4) {
        let mut rng = rng_for(seed);
        let d = dims(2, 3);
        let rho = random_state(&mut rng, d, rank);
        let s = purely_decompose(&rho, &opts());
        let Some(pe) = &s.pe else { return Ok(()) };
        let eig = pe.eig();
        let support: Vec<usize> = (0..eig.values.len()).filter(|&i| eig.values[i] > 1e-9).collect();
        let range: Vec<Vec<C64>> = support.iter().map(|&i| eig.vectors[i].clone()).collect();
        for x in product_vectors_in_subspace(&range, d) {
            // largest δ with (1-Λ)ρ^PE - δ|x⟩⟨x| ⪰ 0 is 1/⟨x|((1-Λ)ρ^PE)⁻¹|x⟩
            let inv: f64 = support
                .iter()
                .map(|&i| {
                    let amp: C64 = eig.vectors[i].iter().zip(&x).map(|(v, y)| v.conj() * y).sum();
                    amp.norm_sqr() / ((1.0 - s.lambda_ps) * eig.values[i])
                })
                .sum();
            prop_assert!(1.0 / inv <= 1e-6, "subtractable weight {}", 1.0 / inv);
        }
    }
}

#[test]
fn finer_decomposition_on_nested_pairs() {
    let mut rng = rng_for(7);
    for k in 0..100 {
        let d = if k % 2 == 0 { dims(2, 2) } else { dims(2, 3) };
        let sigma2 = random_state(&mut rng, d, 1 + k % d.total());
        let omega = random_state(&mut rng, d, d.total());
        let eps = rng.random_range(0.05..0.95);
        let sigma1 = sigma2.mix(1.0 - eps, &omega).unwrap();
        let c = finer_decomposition(&sigma1, &sigma2, &opts()).unwrap();
        assert!(c.epsilon <= eps + 1e-9, "pair {k}: {} > {eps}", c.epsilon);
        let om = c.omega.unwrap();
        assert!(om.min_eigenvalue() >= -1e-9 / c.epsilon, "pair {k}");
        let rebuilt = sigma2.matrix().lin_comb(1.0 - c.epsilon, om.matrix(), c.epsilon);
        assert!(rebuilt.max_abs_diff(sigma1.matrix()) < 1e-8, "pair {k}");
    }
}

/// A witness built from the negative PT eigenvector of `σ₁` detects `σ₁` at
/// least as strongly as any state `σ₂` it is finer than.
#[test]
fn finer_states_are_detected_less_strongly() {
    let i4 = max_mixed(dims(2, 2));
    for p in [0.4, 0.5, 0.7, 0.9] {
        let sigma1 = werner(p).unwrap();
        for sigma2 in [i4.clone(), werner(0.2).unwrap(), werner(p / 2.0).unwrap()] {
            let c = finer_decomposition(&sigma1, &sigma2, &opts()).unwrap();
            let om = c.omega.clone().unwrap();
            assert!(om.min_eigenvalue() >= -1e-9);
            assert_eq!(c.omega_verdict.unwrap().outcome, Outcome::Entangled);

            let pt = partial_transpose(sigma1.matrix(), sigma1.dims()).unwrap();
            let eig = hermitian_eig(&pt, 1e-14).unwrap();
            let v = eig.vectors.last().unwrap();
            let theta = partial_transpose(&ComplexMatrix::projector(v), sigma1.dims()).unwrap();
            let expect = |s: &DensityMatrix| (&theta * s.matrix()).trace().re;
            assert!(expect(&sigma1) < 0.0);
            assert!(expect(&sigma2) >= expect(&sigma1) - 1e-12, "p = {p}");
        }
    }
}

#[test]
fn robustness_of_random_pure_states_against_noise() {
    let mut rng = rng_for(50);
    let d = dims(2, 2);
    let noise = max_mixed(d);
    for k in 0..50 {
        let psi = random_pure(&mut rng, d);
        let r = schmidt(psi.amplitudes(), d).unwrap().coefficients;
        let expected = r[0] * r[1] * 4.0;
        let got = robustness(&psi.density(), &noise, &opts()).unwrap().finite().unwrap();
        assert!((got - expected).abs() < 1e-5, "state {k}: {got} vs {expected}");
        assert!((random_robustness_pure(&psi).unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn common_witness_matches_a_dense_mixture_scan() {
    let mut rng = rng_for(11);
    let d = dims(2, 2);
    let mut compared = 0;
    for _ in 0..40 {
        let a = random_pure(&mut rng, d).density();
        let b = random_pure(&mut rng, d).density();
        if ppt_min_eig(&a) > -1e-3 || ppt_min_eig(&b) > -1e-3 {
            continue;
        }
        let scan: Vec<f64> = (0..=4000)
            .map(|k| ppt_min_eig(&a.mix(k as f64 / 4000.0, &b).unwrap()))
            .collect();
        let best = scan.iter().cloned().fold(f64::MIN, f64::max);
        if best.abs() < 1e-6 {
            continue;
        }
        let expected = if best > 0.0 { WitnessAnswer::No } else { WitnessAnswer::Yes };
        assert_eq!(common_witness_exists(&[a, b], &opts()).unwrap(), expected);
        compared += 1;
    }
    assert!(compared >= 10, "only {compared} pairs compared");

    // |ψ+⟩ against a local rotation of itself
    let psi = sepstruct_core::states::max_entangled(2);
    for _ in 0..10 {
        let u = local_unitary(&mut rng, d);
        let rotated = PureState::new(u.mul_vec(psi.amplitudes()), d).unwrap().density();
        let (a, b) = (psi.density(), rotated);
        let best = (0..=4000)
            .map(|k| ppt_min_eig(&a.mix(k as f64 / 4000.0, &b).unwrap()))
            .fold(f64::MIN, f64::max);
        if best.abs() < 1e-6 {
            continue;
        }
        let expected = if best > 0.0 { WitnessAnswer::No } else { WitnessAnswer::Yes };
        assert_eq!(common_witness_exists(&[a, b], &opts()).unwrap(), expected);
    }
}

#[test]
fn ppt_is_decisive_in_low_dimensions() {
    let mut rng = rng_for(3);
    for k in 0..60 {
        let d = if k % 2 == 0 { dims(2, 2) } else { dims(2, 3) };
        let rho = random_state(&mut rng, d, 1 + k % d.total());
        assert_ne!(verdict(&rho, &opts()).outcome, Outcome::Undecided);
    }
}
