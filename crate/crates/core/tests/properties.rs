use proptest::prelude::*;
use strobe_core::analysis::{
    heisenberg_power, span_check, spectral_report, two_level_admissible, ObservableSpec,
};
use strobe_core::channels::{
    generator_from_lindblad, generator_three_level, generator_two_level, KrausFamily, LindbladSpec, ThreeLevelParams,
    TwoLevelParams,
};
use strobe_core::matcore::{
    eig, expm_apply, hermitian_eig, kron, rank_with_tol, unvec, vec, CVector, ComplexMatrix, Tolerances, C64,
};
use strobe_core::reconstruct::{
    alpha_at, default_time_grid, evolve, execute, plan, simulate_records, ExecuteOptions, MeasurementRecord,
    PlanOptions, Shots,
};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        ..ProptestConfig::default()
    }
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(complex(), n * n).prop_map(move |d| ComplexMatrix::from_row_major(n, n, d).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n).prop_map(|m| m.hermitian_part())
}

/// Random full-rank density matrix `A A† / Tr(A A†)`.
fn density(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n).prop_map(move |a| {
        let p = &(&a * &a.adjoint()) + &ComplexMatrix::identity(n).scale_real(1e-3);
        let tr = p.trace().re;
        p.scale_real(1.0 / tr).hermitian_part()
    })
}

/// Two-level weights in the channel domain with pairwise gaps of at least `gap`.
fn separated_two_level(gap: f64) -> impl Strategy<Value = TwoLevelParams> {
    (0.0..0.33f64, 0.0..0.33f64, 0.0..0.33f64, 0.2..3.0f64)
        .prop_filter("separated weights", move |(a, b, c, _)| {
            (a - b).abs() >= gap && (b - c).abs() >= gap && (a - c).abs() >= gap
        })
        .prop_map(|(a, b, c, g)| TwoLevelParams::new(a, b, c, g))
}

fn valid_three_level() -> impl Strategy<Value = ThreeLevelParams> {
    proptest::array::uniform6(0.0..0.2f64)
        .prop_filter("channel domain", |a| ThreeLevelParams::new(*a, 1.0).validate().cptp_domain)
        .prop_map(|a| ThreeLevelParams::new(a, 1.0))
}

fn sorted_re(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = eig(m).unwrap().eigenvalues.iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn vec_of_triple_product(x in matrix(2), y in matrix(2), z in matrix(2)) {
        let lhs = vec(&(&(&x * &y) * &z));
        let rhs = kron(&z.transpose(), &x).matvec(&vec(&y)).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn unvec_inverts_vec(m in matrix(3)) {
        prop_assert_eq!(unvec(&vec(&m), 3, 3).unwrap(), m);
    }

    #[test]
    fn expm_semigroup(h in hermitian(2), rho in density(2), s in 0.0..2.0f64, t in 0.0..2.0f64) {
        let spec = LindbladSpec::new(h, vec![ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()], vec![0.4]).unwrap();
        let l = generator_from_lindblad(&spec);
        let v = vec(&rho);
        let both = expm_apply(&l, s + t, &v).unwrap();
        let split = expm_apply(&l, t, &expm_apply(&l, s, &v).unwrap()).unwrap();
        prop_assert!((both - split).norm() < 1e-12);
    }

    #[test]
    fn rank_invariant_under_rescaling(
        cols in proptest::collection::vec(proptest::collection::vec(complex(), 4), 1..4),
        scales in proptest::collection::vec(0.01..100.0f64, 3),
    ) {
        let vs: Vec<CVector> = cols.iter().map(|c| CVector::from_vec(c.clone())).collect();
        let scaled: Vec<CVector> = vs.iter().zip(&scales).map(|(v, &s)| v.scale(s)).collect();
        let mut reversed = vs.clone();
        reversed.reverse();
        let r = rank_with_tol(&vs, 1e-9).unwrap();
        prop_assert_eq!(r, rank_with_tol(&scaled, 1e-9).unwrap());
        prop_assert_eq!(r, rank_with_tol(&reversed, 1e-9).unwrap());
    }

    #[test]
    fn kraus_completeness_and_cptp(p in separated_two_level(0.0), rho in density(2), t in 0.0..5.0f64) {
        let family = KrausFamily::TwoLevel(p);
        let ops = family.kraus_at(t).unwrap();
        let mut sum = ComplexMatrix::zeros(2, 2);
        for k in &ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        let out = family.apply_kraus(t, &rho).unwrap();
        prop_assert!(out.hermiticity_defect() < 1e-14);
        prop_assert!((out.trace().re - 1.0).abs() < 1e-14);
        prop_assert!(hermitian_eig(&out, 1e-12).unwrap().min_value() > -1e-14);
    }

    #[test]
    fn three_level_kraus_completeness(p in valid_three_level(), t in 0.0..5.0f64) {
        let ops = KrausFamily::ThreeLevel(p).kraus_at(t).unwrap();
        let mut sum = ComplexMatrix::zeros(3, 3);
        for k in &ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        prop_assert!(sum.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn generators_are_unital(p in separated_two_level(0.0), q in valid_three_level()) {
        let id2 = vec(&ComplexMatrix::identity(2));
        prop_assert!(generator_two_level(&p).unwrap().matvec(&id2).unwrap().norm() < 1e-14);
        let id3 = vec(&ComplexMatrix::identity(3));
        prop_assert!(generator_three_level(&q).unwrap().matvec(&id3).unwrap().norm() < 1e-14);
    }

    #[test]
    fn closed_form_spectra(p in separated_two_level(0.0), q in valid_three_level()) {
        let mut want = p.closed_form_spectrum().to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in sorted_re(&generator_two_level(&p).unwrap()).iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-10);
        }
        let mut want = q.closed_form_spectrum().to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in sorted_re(&generator_three_level(&q).unwrap()).iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn hamiltonian_evolution_is_unitary_conjugation(h in hermitian(2), rho in density(2), t in 0.0..3.0f64) {
        let l = generator_from_lindblad(&LindbladSpec::new(h.clone(), vec![], vec![]).unwrap());
        let got = evolve(&l, &rho, t).unwrap();
        // e^{-iHt} from the eigen-decomposition of H
        let eig = hermitian_eig(&h, 1e-12).unwrap();
        let mut u = ComplexMatrix::zeros(2, 2);
        for (k, &e) in eig.values.iter().enumerate() {
            let v = eig.vector(k);
            let outer = ComplexMatrix::from_dmatrix(&v * v.adjoint()).unwrap();
            u = &u + &outer.scale(C64::new(0.0, -e * t).exp());
        }
        let want = &(&u * &rho) * &u.adjoint();
        prop_assert!(got.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn span_check_matches_closed_form(p in separated_two_level(0.02), q in hermitian(2), zero in 0..4usize) {
        // force one of the structural degeneracies about half the time
        let mut m = q.row_major();
        match zero {
            0 => m[1] = C64::new(0.0, m[1].im),
            1 => m[1] = C64::new(m[1].re, 0.0),
            2 => m[3] = m[0],
            _ => {}
        }
        m[2] = m[1].conj();
        let q = ComplexMatrix::from_row_major(2, 2, m).unwrap();
        let l = generator_two_level(&p).unwrap();
        let spec = ObservableSpec::new(q.clone()).unwrap();
        prop_assert_eq!(span_check(&l, &spec, Tolerances::default()).unwrap(), two_level_admissible(&q).unwrap());
    }

    #[test]
    fn heisenberg_powers_stay_hermitian(p in separated_two_level(0.0), q in hermitian(2), k in 0..4usize) {
        let l = generator_two_level(&p).unwrap();
        let spec = ObservableSpec::new(q).unwrap();
        prop_assert!(heisenberg_power(&l, &spec, k).unwrap().hermiticity_defect() < 1e-14);
    }

    #[test]
    fn eta_matches_null_space_oracle(p in separated_two_level(0.0), tie in 0..4usize) {
        let w = p.weights();
        let p = match tie {
            0 => TwoLevelParams::new(w[0], w[0], w[2], p.gamma),
            1 => TwoLevelParams::new(w[0], w[1], w[1], p.gamma),
            2 => TwoLevelParams::new(w[0], w[0], w[0], p.gamma),
            _ => p,
        };
        let l = generator_two_level(&p).unwrap();
        let report = spectral_report(&l, Tolerances::default()).unwrap();
        // L is real symmetric, so each eigenvalue's geometric multiplicity is
        // its count in the closed-form list
        let values = p.closed_form_spectrum();
        let oracle = values
            .iter()
            .map(|a| values.iter().filter(|b| (*a - **b).abs() < 1e-10).count())
            .max()
            .unwrap();
        prop_assert_eq!(report.eta, oracle);
    }

    #[test]
    fn alpha_residual_and_exponential(p in separated_two_level(0.03), rho in density(2), t in 0.0..4.0f64) {
        let l = generator_two_level(&p).unwrap();
        let a = alpha_at(&l, t).unwrap();
        prop_assert!(a.interpolation_residual() < 1e-10);
        let v = vec(&rho);
        prop_assert!((a.apply(&l, &v).unwrap() - expm_apply(&l, t, &v).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn two_level_round_trip(p in separated_two_level(0.05), rho in density(2), seed in 0..1000u64) {
        let l = generator_two_level(&p).unwrap();
        let q = strobe_core::analysis::random_admissible_observable(&l, seed, Tolerances::default()).unwrap();
        let grid = default_time_grid(&l, 3).unwrap();
        let plan = plan(&l, &q, &grid, PlanOptions::default()).unwrap();
        let records = simulate_records(&l, &q, &rho, &grid, Shots::Exact, 0).unwrap();
        let r = execute(&plan, &records, ExecuteOptions::default()).unwrap();
        prop_assert!((&r.estimate - &rho).frobenius_norm() < 1e-8);
        prop_assert!((r.estimate.trace().re - 1.0).abs() < 1e-14);
        prop_assert_eq!(r.estimate.hermiticity_defect(), 0.0);
    }

    #[test]
    fn reconstruction_is_linear(p in separated_two_level(0.05), r1 in density(2), r2 in density(2)) {
        let l = generator_two_level(&p).unwrap();
        let q = ObservableSpec::from_abcd(1.0, -0.3, 0.7, 0.5).unwrap();
        let grid = default_time_grid(&l, 3).unwrap();
        let plan = plan(&l, &q, &grid, PlanOptions::default()).unwrap();
        let a = simulate_records(&l, &q, &r1, &grid, Shots::Exact, 0).unwrap();
        let b = simulate_records(&l, &q, &r2, &grid, Shots::Exact, 0).unwrap();
        let mean: Vec<MeasurementRecord> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| MeasurementRecord { value: 0.5 * (x.value + y.value), ..*x })
            .collect();
        let opts = ExecuteOptions::default();
        let ea = execute(&plan, &a, opts).unwrap().estimate;
        let eb = execute(&plan, &b, opts).unwrap().estimate;
        let em = execute(&plan, &mean, opts).unwrap().estimate;
        prop_assert!((&(&ea + &eb).scale_real(0.5) - &em).max_abs() < 1e-10);
    }
}

#[test]
fn trajectory_diagnostics_hold() {
    let l = generator_two_level(&TwoLevelParams::new(0.1, 0.2, 0.3, 1.0)).unwrap();
    let rho = ComplexMatrix::from_rows(&[
        vec![C64::new(0.9, 0.0), C64::new(0.2, 0.2)],
        vec![C64::new(0.2, -0.2), C64::new(0.1, 0.0)],
    ])
    .unwrap();
    for k in 0..50 {
        let r = evolve(&l, &rho, 0.2 * k as f64).unwrap();
        assert!((r.trace().re - 1.0).abs() < 1e-12);
        assert!(r.hermiticity_defect() < 1e-12);
        assert!(hermitian_eig(&r, 1e-12).unwrap().min_value() > -1e-10);
    }
}

#[test]
fn shot_noise_shrinks_with_shots() {
    let l = generator_two_level(&TwoLevelParams::new(0.1, 0.2, 0.3, 1.0)).unwrap();
    let q = ObservableSpec::from_abcd(1.0, 0.0, 1.0, 1.0).unwrap();
    let mixed = ComplexMatrix::identity(2).scale_real(0.5);
    let grid = default_time_grid(&l, 3).unwrap();
    let spread = |shots: u64| {
        let values: Vec<f64> = (0..200)
            .map(|s| simulate_records(&l, &q, &mixed, &grid, Shots::Finite(shots), s).unwrap()[0].value)
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64).sqrt()
    };
    let ratio = spread(100) / spread(10_000);
    assert!((7.0..14.0).contains(&ratio), "{ratio}");
}
