use rand::rngs::StdRng;
use rand::SeedableRng;

use pseudospec::blockdiag::{block_diagonalize, canonical_gauge, BlockTolerances};
use pseudospec::certify::{
    decide, residual_commute_antilinear, residual_hermitian_metric, residual_intertwine_antilinear,
    residual_involution, TolProfile, Verdict,
};
use pseudospec::ensemble::{admissible_lambdas, regime_frequencies};
use pseudospec::linalg::{pauli, ComplexMatrix};
use pseudospec::model::{self, ModelSpec};
use pseudospec::scattering::{closed_form_jordan_basis, closed_form_operators, hamiltonian_at, PotentialSpec};
use pseudospec::symmetry::{classify_spectrum, synthesize};

fn p_lists(cert: &pseudospec::certify::Certificate) -> Vec<Vec<usize>> {
    cert.table.as_ref().unwrap().clusters.iter().map(|c| c.p_list.clone()).collect()
}

#[test]
fn scattering_pipeline_reproduces_closed_forms_in_their_basis() {
    for k in [0.5, 1.0, 2.0] {
        for x in [0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.0] {
            let v = 2.0 * k;
            let h = hamiltonian_at(x, &PotentialSpec::rectangular(v, -5.0, 5.0, k).unwrap()).unwrap();
            let bd = block_diagonalize(&h, &BlockTolerances::default()).unwrap();
            let labeling = classify_spectrum(&bd.table, 1e-8, 1e-8);
            let closed = closed_form_operators(x, k);

            let frozen = canonical_gauge(&closed_form_jordan_basis(x, k, v), &bd.labels);
            let ops = synthesize(&bd.regauge(&h, &frozen, 1e-10).unwrap(), &labeling).unwrap();
            let pipeline = synthesize(&bd, &labeling).unwrap();
            assert!(pipeline.pt_symmetry.matrix().max_abs_diff(ops.pt_symmetry.matrix()) < 1e-10);

            let native = bd.regauge(&h, &closed_form_jordan_basis(x, k, v), 1e-10).unwrap();
            let ops = synthesize(&native, &labeling).unwrap();
            for ((name, got), (_, want)) in ops.named_matrices().into_iter().zip(closed.named_matrices()) {
                assert!(got.max_abs_diff(want) < 1e-10, "{name} at k={k}, x={x}");
            }
            assert!(ops.pt_symmetry.matrix().max_abs_diff(&pauli::exp_i_sigma3(-2.0 * k * x)) < 1e-10);
        }
    }
}

#[test]
fn scattering_hamiltonian_is_a_single_jordan_block() {
    let spec = PotentialSpec::rectangular(1.0, 0.0, 1.0, 1.3).unwrap();
    for i in 0..=10 {
        let x = 0.05 + 0.09 * i as f64;
        let cert = decide(&hamiltonian_at(x, &spec).unwrap(), &TolProfile::default());
        assert_eq!(cert.verdict, Verdict::PseudoHermitian);
        let t = cert.table.unwrap();
        assert_eq!(t.clusters.len(), 1);
        assert_eq!((t.clusters[0].d, t.clusters[0].p_list.clone()), (1, vec![2]));
        assert!(t.clusters[0].value.norm() < 1e-10);
    }
}

#[test]
fn exceptional_point_sweep_flips_the_zero_cluster() {
    for delta in [1e-2, 1e-3] {
        for (w, merged) in [(2.0 - delta, false), (2.0, true), (2.0 + delta, false)] {
            let s = ModelSpec::new(vec![1.0, 4.0], w).unwrap();
            let cert = decide(&model::build_h(&s), &TolProfile::default());
            assert_eq!(cert.verdict, Verdict::PseudoHermitian, "{w}: {:?}", cert.diagnostics);
            let pl = p_lists(&cert);
            if merged {
                assert_eq!(pl.iter().filter(|p| **p == vec![2]).count(), 1, "{w}: {pl:?}");
            } else {
                assert!(pl.iter().all(|p| *p == vec![1]), "{w}: {pl:?}");
                assert_eq!(pl.len(), 4);
            }
        }
    }
}

#[test]
fn census_counts_real_eigenvalues() {
    let lambdas = vec![1.0, 4.0, 9.0, 16.0];
    for (w, want) in [(0.5, 0), (1.5, 2), (2.5, 4), (3.5, 6), (5.0, 8)] {
        let s = ModelSpec::new(lambdas.clone(), w).unwrap();
        let cert = decide(&model::build_h(&s), &TolProfile::default());
        let t = cert.table.as_ref().unwrap();
        let l = cert.labeling.as_ref().unwrap();
        let n: usize = l.real.iter().map(|&i| t.clusters[i].algebraic_mult).sum();
        assert_eq!(n, want, "ϖ = {w}");
        assert_eq!(n, 2 * s.real_levels(0.0));
    }
}

#[test]
fn model_oracles_on_random_levels() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        let lambdas = admissible_lambdas(&mut rng, 8, 0.5);
        for (w, at_ep) in regime_frequencies(&lambdas) {
            let s = ModelSpec::new(lambdas.clone(), w).unwrap();
            let h = model::build_h(&s);
            let cert = decide(&h, &TolProfile::default());
            assert_eq!(cert.verdict, Verdict::PseudoHermitian, "{lambdas:?} {w}: {:?}", cert.diagnostics);
            let ops = cert.witnesses.as_ref().unwrap();

            // The closed-form antilinear metric intertwines exactly.
            let tau = model::closed_form_tau(&s);
            assert!(residual_intertwine_antilinear(&h, &tau) < 1e-10);
            assert!(tau.is_hermitian(1e-12).holds);

            // Transporting the canonical symmetry gives plain conjugation,
            // which is what the pipeline finds.
            let x = model::transported_x(&s);
            assert!(x.matrix().max_abs_diff(&ComplexMatrix::identity(s.dim())) < 1e-9);
            assert!(ops.pt_symmetry.matrix().max_abs_diff(x.matrix()) < 1e-9, "{lambdas:?} {w}");
            assert!(residual_commute_antilinear(&h, &x) < 1e-12);

            // Canonical closed forms are Hermitian unitary involutions.
            let app = model::closed_form_operators(&s);
            for m in [&app.chain_reversal, &app.pair_exchange, &app.canonical_metric] {
                assert_eq!(m, &m.adjoint());
                assert_eq!(&(m * m), &ComplexMatrix::identity(s.dim()));
            }
            assert_eq!(residual_involution(&app.canonical_antilinear_metric), 0.0);
            assert_eq!(residual_involution(&app.pt_symmetry), 0.0);
            let (herm, inter) = residual_hermitian_metric(&h, &app.metric);
            assert!(herm < 1e-12 && inter < 1e-10);

            if at_ep {
                let t = cert.table.as_ref().unwrap();
                let zero = t.clusters.iter().find(|c| c.value.norm() < 1e-6).unwrap();
                assert_eq!(zero.p_list, vec![2]);
            }
        }
    }
}

#[test]
fn printed_symmetry_matches_only_without_imaginary_levels() {
    let lambdas = vec![1.0, 4.0, 9.0];
    for (w, printed_ok) in [(0.5, false), (1.5, false), (2.5, false), (3.5, true), (3.0, true)] {
        let s = ModelSpec::new(lambdas.clone(), w).unwrap();
        let h = model::build_h(&s);
        let printed = model::closed_form_x(&s);
        let commute = residual_commute_antilinear(&h, &printed);
        assert_eq!(commute < 1e-12, printed_ok, "ϖ = {w}: {commute:e}");
    }
}
