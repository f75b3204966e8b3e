//! The theorem suite: every check in qg-core run against one quantum group
//! and a list of states, collected into a [`SuiteReport`].

use std::time::Instant;

use qg_core::boundary::{check_choquet_deny, check_idempotent_theorems};
use qg_core::error::QgError;
use qg_core::extension::{analyze_extension, gamma_tilde, theta_extension, ExtensionAnalysis, ISO_TOL};
use qg_core::linalg::{identity, kron, max_abs, max_abs_vec, CMat, CVec, RANK_RTOL};
use qg_core::quantum_group::QuantumGroup;
use qg_core::spectrum::{spectrum_group, verify_bridge};
use qg_core::states::{
    cesaro_limit_state, counit_state, haar_state, is_nondegenerate, iterative_cesaro_average, seeded_states,
    StateFunctional, DEFAULT_SEED,
};

use crate::is_nonconvergence;
use crate::report::{Entry, StateDescription, SuiteReport};

/// Terms in the iterative Cesàro cross-check of Haar recovery.
pub const ITERATIVE_CESARO_TERMS: usize = 10_000;
pub const ITERATIVE_CESARO_TOL: f64 = 1e-4;
pub const HAAR_RECOVERY_TOL: f64 = 1e-8;
pub const THETA_COUNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SuiteInput {
    pub label: String,
    pub source: String,
    pub state: StateFunctional,
    pub spectrum_weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Seeded random non-degenerate states appended to the inputs.
    pub random_count: usize,
    /// Record wall-clock seconds per entry; reports are then no longer
    /// byte-reproducible.
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: DEFAULT_SEED, random_count: 2, timings: false }
    }
}

fn error_kind(e: &QgError) -> &'static str {
    if is_nonconvergence(e) {
        "nonconvergence"
    } else {
        "theorem"
    }
}

fn run_entry(name: String, timings: bool, body: impl FnOnce(&mut Entry) -> qg_core::error::Result<()>) -> Entry {
    let start = Instant::now();
    let mut entry = Entry::new(name);
    if let Err(e) = body(&mut entry) {
        entry.fail_with(error_kind(&e), e.to_string());
    }
    entry.settle();
    if timings {
        entry.wall_clock_s = Some(start.elapsed().as_secs_f64());
    }
    entry
}

/// User states, then Haar (unless already present), then seeded random states.
fn suite_states(qg: &QuantumGroup, inputs: &[SuiteInput], options: &SuiteOptions) -> Vec<SuiteInput> {
    let mut states = inputs.to_vec();
    let h = haar_state(qg);
    if !states.iter().any(|s| max_abs_vec(&(&s.state.values - &h.values)) <= qg.tol) {
        states.push(SuiteInput { label: "haar".into(), source: "Haar state".into(), state: h, spectrum_weights: None });
    }
    for (k, state) in seeded_states(qg, options.seed, options.random_count).into_iter().enumerate() {
        states.push(SuiteInput {
            label: format!("random{k}"),
            source: format!("seeded random non-degenerate state {k}"),
            state,
            spectrum_weights: None,
        });
    }
    states
}

fn axioms_entry(qg: &QuantumGroup, timings: bool) -> Entry {
    run_entry("axioms".into(), timings, |e| {
        for (name, r) in qg.spec.axiom_residuals() {
            e.residual(name, r, qg.tol);
        }
        e.residual("haar_right_invariance", qg.haar_residuals.0, qg.tol);
        e.residual("haar_left_invariance", qg.haar_residuals.1, qg.tol);
        e.dim("algebra", qg.dim());
        Ok(())
    })
}

/// `Γ̃(π(e_k)) = Σ Γ(e_k)_ij π(e_i)⊗π(e_j)`, largest deviation over `k`.
fn gamma_tilde_residual(qg: &QuantumGroup) -> qg_core::error::Result<f64> {
    let n = qg.dim();
    let mut worst = 0.0f64;
    for k in 0..n {
        let lhs = gamma_tilde(qg, &qg.pi[k])?;
        let g = qg.spec.comult_of(&qg.spec.basis(k));
        let mut rhs = CMat::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                if g[(i, j)].norm() > 0.0 {
                    rhs += kron(&qg.pi[i], &qg.pi[j]) * g[(i, j)];
                }
            }
        }
        worst = worst.max(max_abs(&(lhs - rhs)));
    }
    Ok(worst)
}

fn contracts_entry(qg: &QuantumGroup, timings: bool) -> Entry {
    run_entry("unitary_contracts".into(), timings, |e| {
        e.input("orientation", format!("{:?}", qg.orientation));
        e.residual("unitarity", qg.contracts.unitarity, qg.tol);
        e.residual("pentagon", qg.contracts.pentagon, qg.tol);
        e.residual("comultiplication_implementation", qg.contracts.implements_comultiplication, qg.tol);
        e.residual("gamma_tilde_on_pi", gamma_tilde_residual(qg)?, qg.tol);
        let theta = theta_extension(qg, &counit_state(qg))?;
        let n = qg.dim();
        e.residual("theta_counit_identity", max_abs(&(&theta.operator.matrix - identity(n * n))), THETA_COUNIT_TOL);
        Ok(())
    })
}

fn haar_recovery_entry(qg: &QuantumGroup, s: &SuiteInput, timings: bool) -> Entry {
    run_entry(format!("haar_recovery[{}]", s.label), timings, |e| {
        if !is_nondegenerate(qg, &s.state)? {
            e.skip("state is degenerate");
            return Ok(());
        }
        let phi = cesaro_limit_state(qg, &s.state)?;
        e.residual("ergodic_limit_vs_haar", max_abs_vec(&(&phi.values - &qg.haar)), HAAR_RECOVERY_TOL);
        let iterative = iterative_cesaro_average(qg, &s.state, ITERATIVE_CESARO_TERMS);
        e.residual("iterative_cesaro_vs_limit", max_abs_vec(&(iterative - &phi.values)), ITERATIVE_CESARO_TOL);
        e.check("limit_is_faithful_state", phi.is_positive && phi.is_unital);
        Ok(())
    })
}

fn choquet_deny_entry(qg: &QuantumGroup, s: &SuiteInput, timings: bool) -> Entry {
    run_entry(format!("choquet_deny[{}]", s.label), timings, |e| {
        let r = check_choquet_deny(qg, &s.state)?;
        e.input("nondegenerate", r.nondegenerate);
        e.dim("harmonic", r.harmonic_dim);
        e.dim("eigenvalue_one_multiplicity", r.eigenvalue_one_multiplicity);
        e.check("oracle_agrees", r.harmonic_dim == r.eigenvalue_one_multiplicity);
        e.check("scalar_when_nondegenerate", !r.nondegenerate || r.harmonic_dim == 1);
        Ok(())
    })
}

fn idempotent_entry(qg: &QuantumGroup, s: &SuiteInput, timings: bool) -> Entry {
    run_entry(format!("idempotent[{}]", s.label), timings, |e| {
        let r = check_idempotent_theorems(qg, &s.state)?;
        e.input("phi_blocks", format!("{:?}", r.phi_blocks));
        e.input("omega_nondegenerate", r.omega_nondegenerate);
        e.input("omega_ambient_closed", r.omega_ambient_closed);
        e.dim("harmonic", r.harmonic_dim);
        e.residual("fs_identity", r.fs_residual, qg.tol);
        e.residual("ambient_closure", r.ambient_closure_residual, RANK_RTOL);
        e.residual("product_agreement", r.product_agreement_residual, qg.tol);
        e.residual("boundary_distance", r.boundary_distance, RANK_RTOL);
        e.check("phi_is_idempotent", r.phi_is_idempotent);
        e.check("dichotomy", r.dichotomy != Some(false));
        Ok(())
    })
}

fn bridge_entries(qg: &QuantumGroup, states: &[SuiteInput], timings: bool) -> Vec<Entry> {
    let sp = match spectrum_group(qg) {
        Ok(sp) => sp,
        Err(e) => return vec![run_entry("bridge".into(), timings, |_| Err(e))],
    };
    let m = sp.order();
    if m <= 1 {
        let mut e = Entry::new("bridge");
        e.skip("spectrum is trivial");
        return vec![e];
    }
    let mut runs: Vec<(String, Vec<f64>)> =
        states.iter().filter_map(|s| s.spectrum_weights.clone().map(|w| (s.label.clone(), w))).collect();
    if runs.is_empty() {
        runs.push(("uniform".into(), vec![1.0 / m as f64; m]));
    }
    runs.into_iter()
        .map(|(label, weights)| {
            run_entry(format!("bridge[{label}]"), timings, |e| {
                let r = verify_bridge(qg, &sp, &weights)?;
                e.input("weights", format!("{weights:?}"));
                e.input("generating", r.generating);
                e.dim("spectrum", m);
                e.dim("harmonic", r.harmonic_dim);
                e.dim("lifted", r.lifted_dim);
                e.dim("classical", r.classical_dim);
                e.residual("bridge_distance", r.bridge_distance, RANK_RTOL);
                if let Some((dim, d)) = r.homogeneous {
                    e.dim("homogeneous", dim);
                    e.residual("homogeneous_distance", d, RANK_RTOL);
                }
                if let Some(d) = r.classical_agreement {
                    e.residual("classical_agreement", d, RANK_RTOL);
                }
                Ok(())
            })
        })
        .collect()
}

fn extension_entry(qg: &QuantumGroup, s: &SuiteInput, timings: bool) -> Entry {
    run_entry(format!("extension[{}]", s.label), timings, |e| {
        let t = theta_extension(qg, &s.state)?;
        e.input("faithful", t.is_faithful);
        e.residual("representation", t.representation_residual, qg.tol);
        e.residual("restriction", t.restriction_residual, qg.tol);
        e.check("unital", t.operator.is_unital);
        e.check("completely_positive", t.operator.is_cp);
        Ok(())
    })
}

fn analysis_entries(qg: &QuantumGroup, s: &SuiteInput, timings: bool) -> [Entry; 2] {
    let start = Instant::now();
    let analysis = analyze_extension(qg, &s.state);
    let elapsed = start.elapsed().as_secs_f64();
    let crossed_name = format!("crossed_product[{}]", s.label);
    let main_name = format!("main_theorem[{}]", s.label);
    let (mut crossed, mut main) = match analysis {
        Err(err) => {
            let fail = |name: String| run_entry(name, false, |_| Err(err.clone()));
            (fail(crossed_name), fail(main_name))
        }
        Ok(ExtensionAnalysis { upstairs, crossed: cp, report }) => {
            let crossed = run_entry(crossed_name, false, |e| {
                e.dim("crossed_product", cp.dim());
                e.dim("beta_fixed_points", cp.beta_fixed_points.dim());
                e.dim("boundary", cp.coaction.boundary.dim());
                e.residual("construction_distance", cp.construction_distance, RANK_RTOL);
                e.residual("beta_fixed", cp.beta_fixed_residual, RANK_RTOL);
                e.residual("coaction", cp.coaction.residuals.worst(), ISO_TOL);
                e.check("constructions_agree_in_dimension", cp.dim() == cp.beta_fixed_points.dim());
                Ok(())
            });
            let main = run_entry(main_name, false, |e| {
                e.dim("harmonic_operators", report.dims.0);
                e.dim("crossed_product", report.dims.1);
                e.residual("harmonic_operators_contract", upstairs.worst_residual(), ISO_TOL);
                for (name, r) in &report.residuals {
                    e.residual(name, *r, report.tol);
                }
                e.check("dimensions_agree", report.dims.0 == report.dims.1);
                e.check("isomorphism", report.verdict);
                Ok(())
            });
            (crossed, main)
        }
    };
    if timings {
        crossed.wall_clock_s = Some(elapsed);
        main.wall_clock_s = Some(elapsed);
    }
    [crossed, main]
}

/// Runs every check. Failures of individual checks are recorded as entries,
/// never returned.
pub fn run_suite(qg: &QuantumGroup, inputs: &[SuiteInput], options: SuiteOptions) -> SuiteReport {
    let t = options.timings;
    let states = suite_states(qg, inputs, &options);
    let mut report = SuiteReport::new(qg.name(), qg.dim(), options.seed);
    report.states =
        states.iter().map(|s| StateDescription { label: s.label.clone(), source: s.source.clone() }).collect();
    for (k, v) in [
        ("default", qg.tol),
        ("rank", RANK_RTOL),
        ("isomorphism", ISO_TOL),
        ("haar_recovery", HAAR_RECOVERY_TOL),
        ("iterative_cesaro", ITERATIVE_CESARO_TOL),
        ("theta_counit", THETA_COUNIT_TOL),
    ] {
        report.tolerances.insert(k.into(), v);
    }

    report.entries.push(axioms_entry(qg, t));
    report.entries.push(contracts_entry(qg, t));
    for s in &states {
        report.entries.push(haar_recovery_entry(qg, s, t));
    }
    for s in &states {
        report.entries.push(choquet_deny_entry(qg, s, t));
    }
    for s in &states {
        report.entries.push(idempotent_entry(qg, s, t));
    }
    report.entries.extend(bridge_entries(qg, &states, t));
    for s in &states {
        report.entries.push(extension_entry(qg, s, t));
    }
    for s in &states {
        report.entries.extend(analysis_entries(qg, s, t));
    }
    report.finish();
    report
}

/// Wraps a raw values vector as a suite input.
pub fn input_from_values(
    qg: &QuantumGroup,
    label: &str,
    source: &str,
    values: CVec,
    spectrum_weights: Option<Vec<f64>>,
) -> qg_core::error::Result<SuiteInput> {
    let state = qg_core::states::make_state(qg, values)?;
    Ok(SuiteInput { label: label.into(), source: source.into(), state, spectrum_weights })
}
