//! One function per subcommand, each producing a [`Report`].

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use quantax_core::algebra::{self, AlgebraSpec, AlgebraState};
use quantax_core::dynamics;
use quantax_core::fixtures;
use quantax_core::lattice::{
    self, build_lattice, check_properties, orthomodular_criterion, orthomodular_definitional,
    validate_ortho, FiniteLattice, LatticeSpec,
};
use quantax_core::matrix::{Matrix, MatrixJson};
use quantax_core::modular;
use quantax_core::numerics::{partial_trace, Tolerance, TraceSide};
use quantax_core::sample;
use quantax_core::states::{self, DensityMatrix, FrameSample, Projector};
use quantax_core::subspaces::{self, Subspace};

use crate::report::{Check, Report};

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

pub struct Ctx {
    pub tol: Tolerance,
}

fn load<T: DeserializeOwned>(path: &Path, report: &mut Report) -> CliResult<T> {
    let bytes = std::fs::read(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    report.record_input(&path.display().to_string(), &bytes);
    let value = serde_json::from_slice(&bytes)
        .map_err(|e| format!("malformed JSON in {}: {e}", path.display()))?;
    Ok(value)
}

/// Loads a raw matrix; invariant validation happens afterwards against the
/// session tolerance, not the wire-format default.
fn load_matrix(path: &Path, report: &mut Report) -> CliResult<Matrix> {
    let j: MatrixJson = load(path, report)?;
    Ok(Matrix::try_from(j)?)
}

fn load_density(ctx: &Ctx, path: &Path, report: &mut Report) -> CliResult<DensityMatrix> {
    Ok(DensityMatrix::new(load_matrix(path, report)?, ctx.tol)?)
}

fn lattice_checks(lat: &FiniteLattice, report: &mut Report) -> CliResult<Value> {
    let props = check_properties(lat);
    report.push(Check::flag("lattice_valid", props.is_lattice));
    if lat.has_ortho() {
        let ortho = validate_ortho(lat)?;
        report.push(Check::flag("orthocomplementation_valid", ortho.valid));
        if ortho.valid {
            report.push(Check::flag("de_morgan", props.de_morgan_holds));
            report.push(Check::flag("orthomodular", props.is_orthomodular));
            let (by_def, _) = orthomodular_definitional(lat)?;
            let (by_crit, _) = orthomodular_criterion(lat)?;
            report.push(Check::flag(
                "orthomodularity_procedures_agree",
                by_def == by_crit,
            ));
        }
    }
    Ok(serde_json::to_value(&props)?)
}

/// `check-lattice <file>`: build the lattice and audit every property.
/// Purely combinatorial; no tolerances involved.
pub fn check_lattice(file: &Path) -> CliResult<Report> {
    let mut report = Report::new("check-lattice");
    let spec: LatticeSpec = load(file, &mut report)?;
    let lat = build_lattice(&spec)?;
    let props = lattice_checks(&lat, &mut report)?;
    report.data = json!({
        "elements": lat.labels(),
        "properties": props,
    });
    Ok(report.finalize())
}

/// `subspace-lattice --family <file>`: close a family of subspaces under
/// meet/join/ortho and audit the resulting lattice.
pub fn subspace_lattice(
    ctx: &Ctx,
    family_path: &Path,
    budget: usize,
    max_subalgebras: usize,
) -> CliResult<Report> {
    let mut report = Report::new("subspace-lattice");
    let family: Vec<Subspace> = load(family_path, &mut report)?;
    let (lat, dict) = subspaces::generate_lattice(&family, budget, ctx.tol)?;
    let props = lattice_checks(&lat, &mut report)?;
    let subalgebras = lattice::boolean_subalgebras(&lat, max_subalgebras)?;
    report.data = json!({
        "closure_size": dict.len(),
        "elements": lat.labels(),
        "subspace_dims": dict.iter().map(|s| s.dim()).collect::<Vec<_>>(),
        "properties": props,
        "boolean_subalgebras": subalgebras.subalgebras,
        "proper_only": subalgebras.proper_only,
    });
    Ok(report.finalize())
}

/// `gleason-recover --dim d --samples <file>`: least-squares state recovery
/// from frame-function samples.
pub fn gleason_recover(ctx: &Ctx, dim: usize, samples_path: &Path) -> CliResult<Report> {
    #[derive(serde::Deserialize)]
    struct RawSample {
        projector: MatrixJson,
        value: f64,
    }
    let mut report = Report::new("gleason-recover");
    let raw: Vec<RawSample> = load(samples_path, &mut report)?;
    let samples: Vec<FrameSample> = raw
        .into_iter()
        .map(|r| {
            let p = Projector::new(r.projector.try_into()?, ctx.tol)?;
            FrameSample::new(p, r.value, ctx.tol)
        })
        .collect::<Result<_, _>>()?;
    let rec = states::gleason_recover(&samples, dim, ctx.tol)?;
    report.push(Check::le("recovery_residual", rec.residual, ctx.tol.eq_tol));
    report.push(Check::le("psd_repair", rec.psd_repair, ctx.tol.eq_tol));
    report.data = json!({
        "dim": dim,
        "samples": samples.len(),
        "rho": MatrixJson::from(rec.rho.mat().clone()),
        "residual": rec.residual,
        "psd_repair": rec.psd_repair,
    });
    Ok(report.finalize())
}

/// `povm --unitary U --ancilla-state rho --projectors P [--test-states S | --seed n]`:
/// build the induced POVM and verify the joint/reduced probability equivalence.
pub fn povm(
    ctx: &Ctx,
    unitary_path: &Path,
    ancilla_path: &Path,
    projectors_path: &Path,
    test_states_path: Option<&Path>,
    seed: Option<u64>,
) -> CliResult<Report> {
    let mut report = Report::new("povm");
    let u = load_matrix(unitary_path, &mut report)?;
    let rho_p = load_density(ctx, ancilla_path, &mut report)?;
    let projector_json: Vec<MatrixJson> = load(projectors_path, &mut report)?;
    let projectors: Vec<Matrix> = projector_json
        .into_iter()
        .map(Matrix::try_from)
        .collect::<Result<_, _>>()?;

    let povm = dynamics::ancilla_povm(&u, &rho_p, &projectors, ctx.tol)?;
    let ds = povm.dim();

    let test_states: Vec<DensityMatrix> = match (test_states_path, seed) {
        (Some(path), _) => {
            let raw: Vec<MatrixJson> = load(path, &mut report)?;
            raw.into_iter()
                .map(|j| Ok(DensityMatrix::new(j.try_into()?, ctx.tol)?))
                .collect::<CliResult<_>>()?
        }
        (None, Some(seed)) => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            (0..100)
                .map(|_| DensityMatrix::new(sample::random_density(&mut rng, ds), ctx.tol))
                .collect::<Result<_, _>>()?
        }
        (None, None) => {
            return Err("povm needs --test-states or an explicit --seed for sampling".into())
        }
    };

    for (i, s) in test_states.iter().enumerate() {
        if s.dim() != ds {
            return Err(format!(
                "test state {i} has dimension {}, system dimension is {ds}",
                s.dim()
            )
            .into());
        }
    }

    let sum = povm
        .effects()
        .iter()
        .fold(Matrix::zeros(ds, ds), |acc, e| acc.add(e));
    report.push(Check::le(
        "effects_sum_to_identity",
        sum.max_diff(&Matrix::identity(ds)),
        1e-10,
    ));

    let mut worst = 0.0_f64;
    for rho_s in &test_states {
        for (b, p_b) in projectors.iter().enumerate() {
            let joint = dynamics::joint_probability(&u, rho_s, &rho_p, p_b);
            let reduced = dynamics::reduced_probability(rho_s, &povm.effects()[b]);
            worst = worst.max((joint - reduced).abs());
        }
    }
    report.push(Check::le("probability_equivalence", worst, 1e-9));

    report.data = json!({
        "system_dim": ds,
        "effects": povm
            .effects()
            .iter()
            .map(|e| MatrixJson::from(e.clone()))
            .collect::<Vec<_>>(),
        "test_states": test_states.len(),
    });
    Ok(report.finalize())
}

/// `algebra commutant --input <file>`: commutant tower audit.
pub fn algebra_commutant(ctx: &Ctx, input: &Path) -> CliResult<Report> {
    let mut report = Report::new("algebra commutant");
    let spec: AlgebraSpec = load(input, &mut report)?;
    let alg = algebra::from_spec(&spec, ctx.tol)?;
    let audit = algebra::double_commutant_audit(&alg, ctx.tol)?;
    report.push(Check::flag(
        "tricommutant_is_commutant",
        audit.tricommutant_is_commutant,
    ));
    if alg.contains_identity() {
        report.push(Check::flag("double_commutant_equals", audit.equals));
    }
    let (center, is_factor) = if alg.contains_identity() {
        let (c, f) = algebra::center_factor(&alg, ctx.tol)?;
        (Some(c.dim()), Some(f))
    } else {
        (None, None)
    };
    report.data = json!({
        "contains_identity": alg.contains_identity(),
        "audit": audit,
        "center_dim": center,
        "is_factor": is_factor,
    });
    Ok(report.finalize())
}

/// `algebra independence --a <file> --b <file>`: kinematic independence test.
pub fn algebra_independence(ctx: &Ctx, a_path: &Path, b_path: &Path) -> CliResult<Report> {
    let mut report = Report::new("algebra independence");
    let spec_a: AlgebraSpec = load(a_path, &mut report)?;
    let spec_b: AlgebraSpec = load(b_path, &mut report)?;
    let a = algebra::from_spec(&spec_a, ctx.tol)?;
    let b = algebra::from_spec(&spec_b, ctx.tol)?;
    let (independent, worst) = algebra::kinematic_independence(&a, &b, ctx.tol)?;
    report.push(Check::le(
        "kinematically_independent",
        worst,
        10.0 * ctx.tol.eq_tol,
    ));
    report.data = json!({
        "dim_a": a.dim(),
        "dim_b": b.dim(),
        "independent": independent,
        "worst_commutator": worst,
    });
    Ok(report.finalize())
}

/// `algebra extend --a <file> --b <file> --rho1 <file> --rho2 <file>`:
/// joint-state extension feasibility search.
pub fn algebra_extend(
    ctx: &Ctx,
    a_path: &Path,
    b_path: &Path,
    rho1_path: &Path,
    rho2_path: &Path,
    max_iters: usize,
) -> CliResult<Report> {
    let mut report = Report::new("algebra extend");
    let spec_a: AlgebraSpec = load(a_path, &mut report)?;
    let spec_b: AlgebraSpec = load(b_path, &mut report)?;
    let rho1 = load_density(ctx, rho1_path, &mut report)?;
    let rho2 = load_density(ctx, rho2_path, &mut report)?;
    let a = algebra::from_spec(&spec_a, ctx.tol)?;
    let b = algebra::from_spec(&spec_b, ctx.tol)?;
    let out = algebra::joint_state_extension(
        &a,
        &b,
        &AlgebraState { rho: rho1 },
        &AlgebraState { rho: rho2 },
        max_iters,
        ctx.tol,
    )?;
    report.push(Check::le("joint_state_residual", out.residual, 1e-7));
    report.data = json!({
        "feasible": out.feasible,
        "residual": out.residual,
        "iterations": out.iterations,
        "affine_inconsistent": out.affine_inconsistent,
        "state": out.state.as_ref().map(|s| MatrixJson::from(s.mat().clone())),
    });
    Ok(report.finalize())
}

/// `modular --state <rho> [--ops A B ...] [--times ...]`: full modular audit
/// of a faithful state (construction relation, KMS at β = 1, inner
/// implementation).
pub fn modular_audit(
    ctx: &Ctx,
    state_path: &Path,
    compare_state_path: Option<&Path>,
    ops_paths: &[PathBuf],
    times: &[f64],
    seed: Option<u64>,
) -> CliResult<Report> {
    let mut report = Report::new("modular");
    let rho = load_density(ctx, state_path, &mut report)?;
    let md = modular::gns_purify(&rho, ctx.tol)?;
    let d = md.dim();

    let ops: Vec<Matrix> = if ops_paths.is_empty() {
        let seed = seed.ok_or("modular needs --ops files or an explicit --seed for sampling")?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..4).map(|_| sample::random_matrix(&mut rng, d, d)).collect()
    } else {
        ops_paths
            .iter()
            .map(|p| load_matrix(p, &mut report))
            .collect::<CliResult<_>>()?
    };
    let times = if times.is_empty() {
        vec![0.0, 0.5, 1.0]
    } else {
        times.to_vec()
    };

    report.push(Check::le(
        "tomita_relation",
        modular::tomita_defect(&md),
        1e-8,
    ));

    let mut kms_worst = 0.0_f64;
    for a in &ops {
        for b in &ops {
            let rep = modular::kms_residual(&md, a, b, &times, 1.0)?;
            kms_worst = kms_worst.max(rep.max_residual);
        }
    }
    report.push(Check::le("kms_beta_one", kms_worst, 1e-9));

    let mut inner_worst = 0.0_f64;
    for &t in &times {
        let (_, cert) = modular::inner_implementation(&md, t)?;
        inner_worst = inner_worst.max(cert);
    }
    report.push(Check::le("inner_implementation", inner_worst, 1e-9));

    let mut group_worst = 0.0_f64;
    for &t1 in &times {
        for &t2 in &times {
            for a in &ops {
                let seq =
                    modular::modular_flow(&md, &modular::modular_flow(&md, a, t2)?, t1)?;
                let direct = modular::modular_flow(&md, a, t1 + t2)?;
                group_worst = group_worst.max(seq.max_diff(&direct));
            }
        }
    }
    report.push(Check::le("flow_group_law", group_worst, 1e-8));

    // flows of two faithful states differ by an inner automorphism
    if let Some(other_path) = compare_state_path {
        let other = load_density(ctx, other_path, &mut report)?;
        let md_other = modular::gns_purify(&other, ctx.tol)?;
        let mut cocycle_worst = 0.0_f64;
        for &t in &times {
            let (_, dev) = modular::cocycle_intertwiner(&md, &md_other, t)?;
            cocycle_worst = cocycle_worst.max(dev);
        }
        report.push(Check::le("cocycle_intertwining", cocycle_worst, 1e-8));
    }

    report.data = json!({
        "dim": d,
        "times": times,
        "delta_spectrum": sample::spectrum(md.delta(), ctx.tol),
        "psi_norm": md.psi().hs_norm(),
    });
    Ok(report.finalize())
}

/// `kms --state <rho> --ops A B --times ... --beta b`: KMS residual report.
/// At β = 1 the residual is a pass/fail check; away from it the command is a
/// measurement.
pub fn kms(
    ctx: &Ctx,
    state_path: &Path,
    a_path: &Path,
    b_path: &Path,
    times: &[f64],
    beta: f64,
) -> CliResult<Report> {
    let mut report = Report::new("kms");
    let rho = load_density(ctx, state_path, &mut report)?;
    let a = load_matrix(a_path, &mut report)?;
    let b = load_matrix(b_path, &mut report)?;
    let md = modular::gns_purify(&rho, ctx.tol)?;
    let rep = modular::kms_residual(&md, &a, &b, times, beta)?;
    if beta == 1.0 {
        report.push(Check::le("kms_beta_one", rep.max_residual, 1e-9));
    }
    report.data = serde_json::to_value(&rep)?;
    Ok(report.finalize())
}

type FixturePayload = (Vec<(String, Value)>, Vec<Check>);

/// All fixture payloads: `(file name, JSON value)` pairs plus the checks that
/// pin the fixture's defining property.
fn fixture_payload(name: &str, tol: Tolerance) -> CliResult<FixturePayload> {
    let mat = |m: &Matrix| -> Value { serde_json::to_value(MatrixJson::from(m.clone())).unwrap() };
    let spec = |s: &LatticeSpec| -> Value { serde_json::to_value(s).unwrap() };
    let mut files: Vec<(String, Value)> = Vec::new();
    let mut checks: Vec<Check> = Vec::new();
    match name {
        "ghz" => {
            let vec = fixtures::ghz_vec();
            let rho = fixtures::ghz_density();
            let first = partial_trace(&rho, TraceSide::Second, 2, 4)?;
            let pair = partial_trace(&rho, TraceSide::First, 2, 4)?;
            files.push(("ghz_state.json".into(), mat(&vec)));
            files.push(("ghz_density.json".into(), mat(&rho)));
            files.push(("ghz_reduced_first.json".into(), mat(&first)));
            files.push(("ghz_reduced_pair.json".into(), mat(&pair)));
            checks.push(Check::le(
                "reduced_first_qubit_is_maximally_mixed",
                first.max_diff(&Matrix::identity(2).scale_re(0.5)),
                tol.eq_tol,
            ));
            let purity = first.matmul(&first).trace().re;
            checks.push(Check::le(
                "reduced_purity_is_one_half",
                (purity - 0.5).abs(),
                tol.eq_tol,
            ));
            // losing one qubit leaves the classical mixture (|00⟩⟨00| + |11⟩⟨11|)/2
            let mut mixture = Matrix::zeros(4, 4);
            mixture[(0, 0)] = num_complex::Complex64::new(0.5, 0.0);
            mixture[(3, 3)] = num_complex::Complex64::new(0.5, 0.0);
            checks.push(Check::le(
                "reduced_pair_is_classical_mixture",
                pair.max_diff(&mixture),
                tol.eq_tol,
            ));
        }
        "pauli" => {
            for (n, m) in [
                ("pauli_x", fixtures::pauli_x()),
                ("pauli_y", fixtures::pauli_y()),
                ("pauli_z", fixtures::pauli_z()),
            ] {
                checks.push(Check::le(
                    &format!("{n}_unitary"),
                    m.adjoint().matmul(&m).max_diff(&Matrix::identity(2)),
                    tol.eq_tol,
                ));
                files.push((format!("{n}.json"), mat(&m)));
            }
        }
        "cbh-ef" => {
            let e = fixtures::cbh_e();
            let f = fixtures::cbh_f();
            files.push(("cbh_e.json".into(), mat(&e)));
            files.push(("cbh_f.json".into(), mat(&f)));
            files.push((
                "cbh_e_algebra.json".into(),
                json!({"ambient_dim": 6, "generators": [mat(&e)], "with_identity": false}),
            ));
            files.push((
                "cbh_f_algebra.json".into(),
                json!({"ambient_dim": 6, "generators": [mat(&f)], "with_identity": false}),
            ));
            checks.push(Check::le(
                "e_is_projection",
                e.matmul(&e).max_diff(&e),
                tol.eq_tol,
            ));
            checks.push(Check::le(
                "f_is_projection",
                f.matmul(&f).max_diff(&f),
                tol.eq_tol,
            ));
            checks.push(Check::gt(
                "effects_do_not_commute",
                e.commutator(&f).max_abs(),
                0.1,
            ));
        }
        "o6" => files.push(("o6.json".into(), spec(&fixtures::o6_spec()))),
        "mo2" => files.push(("mo2.json".into(), spec(&fixtures::mo2_spec()))),
        "n5" => files.push(("n5.json".into(), spec(&fixtures::n5_spec()))),
        "chain2" => files.push(("chain2.json".into(), spec(&fixtures::chain2_spec()))),
        "cube2" => files.push(("cube2.json".into(), spec(&fixtures::boolean_cube_spec(2)))),
        "cube3" => files.push(("cube3.json".into(), spec(&fixtures::boolean_cube_spec(3)))),
        "swap" => {
            let u = fixtures::swap2();
            checks.push(Check::le(
                "swap_unitary",
                u.adjoint().matmul(&u).max_diff(&Matrix::identity(4)),
                tol.eq_tol,
            ));
            files.push(("swap.json".into(), mat(&u)));
        }
        "cnot" => {
            let u = fixtures::cnot();
            checks.push(Check::le(
                "cnot_unitary",
                u.adjoint().matmul(&u).max_diff(&Matrix::identity(4)),
                tol.eq_tol,
            ));
            files.push(("cnot.json".into(), mat(&u)));
        }
        "partial-swap" => {
            let u = fixtures::partial_swap(std::f64::consts::FRAC_PI_4);
            checks.push(Check::le(
                "partial_swap_unitary",
                u.adjoint().matmul(&u).max_diff(&Matrix::identity(4)),
                tol.eq_tol,
            ));
            files.push(("partial_swap_pi4.json".into(), mat(&u)));
        }
        other => return Err(format!("unknown fixture `{other}`").into()),
    }
    Ok((files, checks))
}

pub const FIXTURE_NAMES: &[&str] = &[
    "ghz",
    "pauli",
    "cbh-ef",
    "o6",
    "mo2",
    "n5",
    "chain2",
    "cube2",
    "cube3",
    "swap",
    "cnot",
    "partial-swap",
];

/// `fixtures <name> [--out-dir <dir>]`: emit canonical fixtures as JSON,
/// optionally writing one file per payload.
pub fn fixtures_cmd(ctx: &Ctx, name: &str, out_dir: Option<&Path>) -> CliResult<Report> {
    let mut report = Report::new("fixtures");
    let names: Vec<&str> = if name == "all" {
        FIXTURE_NAMES.to_vec()
    } else {
        vec![name]
    };
    let mut data = serde_json::Map::new();
    for n in names {
        let (files, checks) = fixture_payload(n, ctx.tol)?;
        for c in checks {
            report.push(c);
        }
        for (fname, value) in files {
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(&fname);
                let mut body = serde_json::to_string_pretty(&value)?;
                body.push('\n');
                std::fs::write(&path, body)?;
            }
            data.insert(fname, value);
        }
    }
    report.data = Value::Object(data);
    Ok(report.finalize())
}

