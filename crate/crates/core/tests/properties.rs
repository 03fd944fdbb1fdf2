#![allow(clippy::needless_range_loop)]

use cvsep::covariance::{
    apply_symp, flip_sign, is_physical, tilde_from_ensemble, tilde_from_prep, to_standard_form, EnsembleSpec,
};
use cvsep::criteria::{
    classify, duan_criterion, gap_general, gap_separable, hierarchy, physicality, simon_algebraic, simon_c1_bound,
    simon_criterion, stringent_criterion, weak_gap, Classification,
};
use cvsep::matkit::{
    eig_sym, is_psd_herm, is_psd_sym, jacobi_eigen, svd2_special, HermMat4, Mat2, SymMat4, JACOBI_TOL, PSD_TOL,
};
use cvsep::prep::{p_sample, p_weight, sample_covariance};
use cvsep::squeezing::{
    concavity_chord, concavity_chord_curvature, concavity_gap, duan_bound_at, duan_bound_squeezed, extremality_residual,
    split_identity_gap, optimal_squeeze, r2_of_r1, SqueezeParams,
};
use cvsep::statezoo::{random_physical, random_psd, random_separable, random_symp2};
use cvsep::{CovMat4, Symp2, TildeMat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn physical(seed: u64) -> CovMat4 {
    random_physical(&mut rng(seed))
}

fn sym4() -> impl Strategy<Value = SymMat4> {
    proptest::array::uniform4(proptest::array::uniform4(-5.0..5.0_f64)).prop_map(SymMat4::from_upper)
}

fn mat2() -> impl Strategy<Value = Mat2> {
    (-3.0..3.0_f64, -3.0..3.0_f64, -3.0..3.0_f64, -3.0..3.0_f64).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

fn rel(x: f64, y: f64) -> f64 {
    let s = x.abs().max(y.abs());
    if s == 0.0 {
        0.0
    } else {
        (x - y).abs() / s
    }
}

fn invariants(v: &CovMat4) -> [f64; 4] {
    [v.a().det(), v.b().det(), v.c().det(), v.det()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eigen_reconstructs(m in sym4()) {
        let e = eig_sym(&m, JACOBI_TOL).unwrap();
        let back = SymMat4::symmetrize(e.reconstruct_with(|l| l));
        prop_assert!(back.max_abs_diff(&m) <= 1e-12 * m.norm_inf().max(1.0));
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|k| e.vectors[i][k] * e.vectors[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - want).abs() < 1e-12);
            }
        }
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(rel(e.values.iter().product(), m.det()) < 1e-9 || m.det().abs() < 1e-9);
    }

    #[test]
    fn hermitian_embedding_doubles_spectrum(re in sym4(), upper in proptest::array::uniform6(-2.0..2.0_f64)) {
        let mut im = [[0.0; 4]; 4];
        let mut k = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                im[i][j] = upper[k];
                k += 1;
            }
        }
        let h = HermMat4::new(re, im);
        let full = jacobi_eigen(&h.real_embedding(), JACOBI_TOL).unwrap();
        let r = is_psd_herm(&h, PSD_TOL).unwrap();
        let scale = h.norm_inf().max(1.0);
        for i in 0..4 {
            prop_assert!((full.values[2 * i] - full.values[2 * i + 1]).abs() < 1e-9 * scale);
            prop_assert!((full.values[2 * i] - r.spectrum[i]).abs() < 1e-9 * scale);
        }
        prop_assert!((h.quad(&r.witness) - r.min_eigenvalue).abs() < 1e-9 * scale);
    }

    #[test]
    fn svd2_diagonalizes(c in mat2()) {
        let (r1, r2, c1, c2) = svd2_special(&c);
        prop_assert!((r1.det() - 1.0).abs() < 1e-12 && (r2.det() - 1.0).abs() < 1e-12);
        let d = c.congruence(&r1, &r2);
        prop_assert!(d.max_abs_diff(&Mat2::diag(c1, c2)) < 1e-12);
        prop_assert!(c1 >= c2.abs() - 1e-12);
        prop_assert!((c1 * c2 - c.det()).abs() < 1e-11);
    }

    #[test]
    fn local_symplectics_preserve_invariants(state in any::<u64>(), ts in any::<u64>()) {
        let v = physical(state);
        let mut g = rng(ts);
        let w = apply_symp(&v, &random_symp2(&mut g), &random_symp2(&mut g));
        for (x, y) in invariants(&v).iter().zip(invariants(&w)) {
            prop_assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
        }
        let (s, t) = (simon_criterion(&v, PSD_TOL).unwrap(), simon_criterion(&w, PSD_TOL).unwrap());
        if s.margin.abs() > 1e-8 {
            prop_assert_eq!(s.satisfied, t.satisfied);
        }
    }

    #[test]
    fn standard_form_round_trip(state in any::<u64>()) {
        let v = physical(state);
        let sf = to_standard_form(&v).unwrap();
        let reduced = apply_symp(&v, &sf.s1, &sf.s2);
        prop_assert!(reduced.max_abs_diff(&sf.covariance()) < 1e-9 * v.matrix().norm_inf());
        prop_assert!(sf.c1 >= sf.c2.abs() - 1e-12);
        let again = to_standard_form(&sf.covariance()).unwrap();
        for (x, y) in [(sf.a, again.a), (sf.b, again.b), (sf.c1, again.c1), (sf.c2, again.c2)] {
            prop_assert!((x - y).abs() < 1e-12 * sf.a.max(sf.b));
        }
    }

    #[test]
    fn flip_sign_is_a_partial_transpose(state in any::<u64>()) {
        let v = physical(state);
        let f = flip_sign(&v);
        prop_assert_eq!(flip_sign(&f), v);
        prop_assert!((f.det() - v.det()).abs() < 1e-12 * v.det().abs().max(1.0));
        let (s, t) = (simon_criterion(&v, PSD_TOL).unwrap(), simon_criterion(&f, PSD_TOL).unwrap());
        prop_assert!((s.margin - t.margin).abs() < 1e-10);
    }

    #[test]
    fn ensembles_give_psd_tilde(
        comps in proptest::collection::vec((0.0..1.0_f64, proptest::array::uniform4(-3.0..3.0_f64)), 1..8)
    ) {
        let total: f64 = comps.iter().map(|c| c.0).sum();
        prop_assume!(total > 1e-3);
        let comps: Vec<_> = comps.into_iter().map(|(w, d)| (w / total, d)).collect();
        let e = EnsembleSpec::new(comps).unwrap();
        prop_assert!(is_psd_sym(tilde_from_ensemble(&e).matrix(), PSD_TOL));
    }

    #[test]
    fn bounds_agree(a in 0.5..6.0_f64, b in 0.5..6.0_f64, t in 0.0..=1.0_f64) {
        let sol = optimal_squeeze(a, b, t).unwrap();
        let simon = simon_c1_bound(a, b, t).unwrap();
        let duan = duan_bound_at(a, b, t, &sol.params).unwrap();
        let squeezed = duan_bound_squeezed(a, b, t, &sol.params).unwrap();
        prop_assert!(rel(sol.c1_bound, simon) < 1e-8);
        prop_assert!(rel(sol.c1_bound, duan) < 1e-8);
        prop_assert!(rel(duan, squeezed) < 1e-8);
        prop_assert!(extremality_residual(a, b, &sol.params).value().abs() < 1e-7 * a.max(b));
    }

    #[test]
    fn extremal_curve(a in 0.51..6.0_f64, b in 0.5..6.0_f64, s in 0.0..=1.0_f64) {
        let r1 = 1.0 + s * (2.0 * a - 1.0);
        let r2 = r2_of_r1(a, b, r1).unwrap();
        prop_assert!((1.0 - 1e-12..=2.0 * b + 1e-12).contains(&r2));
        let p = SqueezeParams::new(r1, r2.max(1.0)).unwrap();
        prop_assert!(split_identity_gap(a, b, &p).abs() < 1e-9 * a.max(b));
    }

    #[test]
    fn concavity_gap_nonnegative(n1 in 0.5..10.0_f64, n2 in 0.5..10.0_f64, m1 in 0.5..10.0_f64, m2 in 0.5..10.0_f64) {
        let g = concavity_gap(n1, n2, m1, m2).unwrap();
        prop_assert!(g.gap >= -1e-12);
        if g.equality_condition_met {
            prop_assert!(g.gap.abs() < 1e-9);
        }
        for x in [0.1, 0.5, 0.9] {
            prop_assert!(concavity_chord_curvature(n1, n2, m1, m2, x) <= 0.0);
        }
        let mid = concavity_chord(n1, n2, m1, m2, 0.5);
        prop_assert!(2.0 * mid >= concavity_chord(n1, n2, m1, m2, 0.0) + concavity_chord(n1, n2, m1, m2, 1.0) - 1e-12);
    }

    #[test]
    fn concavity_equality_on_proportional_inputs(n1 in 0.5..10.0_f64, m1 in 0.51..10.0_f64, k in 0.0..5.0_f64) {
        let n2 = 0.5 + k * (n1 - 0.5);
        let m2 = 0.5 + k * (m1 - 0.5);
        let g = concavity_gap(n1, n2, m1, m2).unwrap();
        prop_assert!(g.equality_condition_met);
        prop_assert!(g.gap.abs() < 1e-9);
    }
}

#[test]
fn hierarchy_holds_on_seeded_states() {
    for seed in 0..2000 {
        let v = if seed % 2 == 0 { physical(seed) } else { random_separable(&mut rng(seed)) };
        let h = hierarchy(&v, PSD_TOL).unwrap();
        assert!(h.violations().is_empty(), "seed {seed}: {:?}", h.violations());
    }
}

#[test]
fn separable_construction_passes_every_criterion() {
    for seed in 0..500 {
        let v = random_separable(&mut rng(seed));
        let t = tilde_from_prep(&v, PSD_TOL).unwrap();
        assert!(stringent_criterion(&v, &t, PSD_TOL).unwrap().satisfied);
        assert!(weak_gap(&v, &t, 1.0, PSD_TOL).unwrap().satisfied);
        assert!(weak_gap(&v, &t, -1.0, PSD_TOL).unwrap().satisfied);
        assert_eq!(classify(&v, PSD_TOL).unwrap().class, Classification::Separable);
    }
}

#[test]
fn witnesses_violate_their_inequalities() {
    let zero = TildeMat::zero();
    let mut checked = [0; 3];
    for seed in 0..3000 {
        let v = physical(seed);
        let s = simon_criterion(&v, PSD_TOL).unwrap();
        if let Some(w) = s.witness {
            assert!(gap_separable(&v, &zero, &w.params) < 0.0, "simon seed {seed}");
            checked[0] += 1;
        }
        let d = duan_criterion(&v, PSD_TOL).unwrap();
        if let Some(w) = d.witness {
            assert!(gap_separable(&v, &zero, &w.params) < 0.0, "duan seed {seed}");
            checked[1] += 1;
        }
        let shrunk = CovMat4::new(v.matrix().scale(0.5));
        let p = physicality(&shrunk, PSD_TOL).unwrap();
        if let Some(w) = p.witness {
            assert!(gap_general(&shrunk, &zero, &w.params) < 0.0, "physicality seed {seed}");
            checked[2] += 1;
        }
    }
    assert!(checked.iter().all(|&c| c > 50), "{checked:?}");
}

#[test]
fn simon_matrix_and_algebraic_forms_agree() {
    let mut compared = 0;
    for seed in 0..3000 {
        let v = physical(seed);
        let m = simon_criterion(&v, PSD_TOL).unwrap();
        let sf = to_standard_form(&v).unwrap();
        let alg = simon_algebraic(&sf, PSD_TOL);
        if m.margin.abs() > 1e-8 && alg.margin.abs() > 1e-8 {
            assert_eq!(m.satisfied, alg.satisfied, "seed {seed}");
            compared += 1;
        }
    }
    assert!(compared > 2900);
}

#[test]
fn classification_matches_simon_away_from_the_boundary() {
    for seed in 0..3000 {
        let v = physical(seed);
        let s = simon_criterion(&v, PSD_TOL).unwrap();
        if s.margin.abs() < 1e-8 {
            continue;
        }
        let verdict = classify(&v, PSD_TOL).unwrap();
        assert!(verdict.consistent, "seed {seed}");
        assert_eq!(verdict.class == Classification::Separable, s.satisfied, "seed {seed}");
    }
}

#[test]
fn generated_states_are_physical() {
    for seed in 0..2000 {
        assert!(is_physical(&physical(seed), PSD_TOL).0);
        let psd = random_psd(&mut rng(seed), 1.0);
        assert!(is_psd_sym(&psd, PSD_TOL));
    }
}

#[test]
fn sample_covariance_tracks_p_moments() {
    let v = CovMat4::new(SymMat4::from_upper([
        [1.2, 0.1, 0.3, 0.0],
        [0.0, 0.9, 0.0, -0.2],
        [0.0, 0.0, 1.4, 0.05],
        [0.0, 0.0, 0.0, 0.8],
    ]));
    let w = p_weight(&v, PSD_TOL).unwrap();
    let n = 50_000;
    let cov = sample_covariance(&p_sample(&w, n, 77));
    let truth = v.matrix().shift(-0.5);
    for i in 0..4 {
        for j in i..4 {
            let se = ((truth.get(i, i) * truth.get(j, j) + truth.get(i, j).powi(2)) / n as f64).sqrt();
            assert!((cov.get(i, j) - truth.get(i, j)).abs() < 4.5 * se, "({i},{j})");
        }
    }
}

#[test]
fn squeezing_the_vacuum_leaves_p_representation() {
    let sq = Symp2::squeeze(2.0).unwrap();
    let v = apply_symp(&CovMat4::new(SymMat4::identity()), &sq, &Symp2::identity());
    assert!(tilde_from_prep(&CovMat4::new(SymMat4::identity()), PSD_TOL).is_ok());
    assert!(tilde_from_prep(&v, PSD_TOL).is_err());
    assert!(simon_criterion(&v, PSD_TOL).unwrap().satisfied);
}
