//! Command-line front end: builds model files, runs batch check suites,
//! prints characters, extracts subalgebras, and runs single smeared
//! checks.  All outputs are canonical JSON; exit code 0 means every
//! check passed, 1 means a check failed, 2 means the input was bad.

mod files;
mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use voa_core::model::VOAModel;
use voa_core::models;
use voa_core::scalar::Scalar;
use voa_core::smeared::energy::energy_bound_witness;
use voa_core::smeared::ladder;
use voa_core::smeared::operators::adjoint_residual;
use voa_core::smeared::wightman::wightman_residual;
use voa_core::smeared::{OrthoFrame, SampleSpec, SmearedField, TestFunction};
use voa_core::subalgebra;
use voa_core::unitarity::{invariant_form, pct_operator};
use voa_core::GradedVector;

use files::{read_generators, read_model, write_model, InputError, SubalgebraFile};
use report::{timed_try, CheckRecord, CheckReport};

#[derive(Parser)]
#[command(
    name = "voa",
    version,
    about = "exact level-truncated vertex algebra models and their checks"
)]
struct Cli {
    /// seed for randomized witnesses, recorded in every report
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// worker threads for check orchestration (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// output path (default depends on the command)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a model file
    Build {
        #[arg(value_enum)]
        family: Family,
        /// central charge for virasoro, an exact rational like 1/2 or -22/5
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// level for sl2 (positive integer)
        #[arg(long)]
        k: Option<i64>,
        /// squared norm of the lattice generator (even, positive)
        #[arg(long)]
        norm: Option<i64>,
        /// the two factor model files for tensor
        #[arg(long, num_args = 2)]
        factors: Vec<PathBuf>,
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
    },
    /// Run a batch check suite against a model file
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        model: PathBuf,
        /// cap the levels swept by the axioms suite
        #[arg(long)]
        max_level: Option<u32>,
        /// Fourier window for the smeared suite
        #[arg(long, default_value_t = 256)]
        window: i64,
        /// report path (same as --out)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the graded dimension series of a model
    Character {
        #[arg(long)]
        model: PathBuf,
        /// highest power to print (default: the model cutoff)
        #[arg(long)]
        max: Option<u32>,
    },
    /// Extract a subalgebra: closure, coset, or automorphism fixed points
    Subalgebra {
        #[arg(long)]
        model: PathBuf,
        /// JSON file with generating vectors or group element data
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, value_enum)]
        op: SubOp,
    },
    /// Smear one field against a test function and run one analytic check
    Smear {
        #[arg(long)]
        model: PathBuf,
        /// field name ("a", "nu", ...) or "vacuum"
        #[arg(long)]
        field: String,
        /// test function, e.g. bump:0,pi or mode:3
        #[arg(long, default_value = "bump:0,pi")]
        function: String,
        /// second test function for wightman and symplectic
        #[arg(long)]
        function2: Option<String>,
        #[arg(long, value_enum)]
        check: SmearCheck,
        /// Fourier window
        #[arg(long, default_value_t = 256)]
        window: i64,
        /// ladder truncation for bw and symplectic
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Virasoro,
    Heisenberg,
    Sl2,
    Lattice,
    Tensor,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Axioms,
    Unitarity,
    Subalgebra,
    Smeared,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubOp {
    Close,
    Coset,
    Fixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum SmearCheck {
    Adjoint,
    Ebound,
    Wightman,
    Bw,
    Symplectic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .ok();
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, InputError> {
    match cli.cmd {
        Cmd::Build {
            family,
            c,
            k,
            norm,
            factors,
            cutoff,
        } => cmd_build(family, c, k, norm, &factors, cutoff, cli.out.as_deref()),
        Cmd::Check {
            suite,
            model,
            max_level,
            window,
            report,
        } => {
            let out = report.or(cli.out);
            cmd_check(suite, &model, max_level, window, cli.seed, out.as_deref())
        }
        Cmd::Character { model, max } => cmd_character(&model, max, cli.out.as_deref()),
        Cmd::Subalgebra {
            model,
            generators,
            op,
        } => cmd_subalgebra(&model, &generators, op, cli.out.as_deref()),
        Cmd::Smear {
            model,
            field,
            function,
            function2,
            check,
            window,
            n_max,
        } => cmd_smear(
            &model,
            &field,
            &function,
            function2.as_deref(),
            check,
            window,
            n_max,
            cli.seed,
            cli.out.as_deref(),
        ),
    }
}

fn cmd_build(
    family: Family,
    c: Option<String>,
    k: Option<i64>,
    norm: Option<i64>,
    factors: &[PathBuf],
    cutoff: u32,
    out: Option<&Path>,
) -> Result<u8, InputError> {
    let model = match family {
        Family::Virasoro => {
            let text = c.ok_or(InputError("virasoro needs --c".into()))?;
            let c = Scalar::from_str(&text)
                .map_err(|e| InputError(format!("--c {text}: {e}")))?;
            models::virasoro(c, cutoff)
        }
        Family::Heisenberg => models::heisenberg(cutoff),
        Family::Sl2 => {
            let k = k.ok_or(InputError("sl2 needs --k".into()))?;
            if k <= 0 {
                return Err(InputError("--k must be a positive integer".into()));
            }
            models::sl2(k, cutoff)
        }
        Family::Lattice => {
            let n = norm.ok_or(InputError("lattice needs --norm".into()))?;
            if n <= 0 || n % 2 != 0 {
                return Err(InputError("--norm must be even and positive".into()));
            }
            models::lattice(n, cutoff)
        }
        Family::Tensor => {
            if factors.len() != 2 {
                return Err(InputError("tensor needs --factors a.json b.json".into()));
            }
            let a = read_model(&factors[0])?;
            let b = read_model(&factors[1])?;
            models::tensor::tensor(&a, &b, cutoff)
        }
    };
    // model names may contain '/': keep them out of the default filename
    let safe: String = model
        .name
        .chars()
        .map(|ch| if ch.is_alphanumeric() { ch } else { '_' })
        .collect();
    let default = PathBuf::from(format!("{safe}.json"));
    let path = out.unwrap_or(&default);
    write_model(path, &model)?;
    println!(
        "{} cutoff {} level_dims {:?} -> {}",
        model.name,
        model.cutoff,
        model.level_dims,
        path.display()
    );
    Ok(0)
}

fn cmd_check(
    suite: Suite,
    model_path: &Path,
    max_level: Option<u32>,
    window: i64,
    seed: u64,
    out: Option<&Path>,
) -> Result<u8, InputError> {
    let model = read_model(model_path)?;
    let records = match suite {
        Suite::Axioms => suites::axioms_suite(&model, max_level)?,
        Suite::Unitarity => suites::unitarity_suite(&model)?,
        Suite::Subalgebra => suites::subalgebra_suite(&model)?,
        Suite::Smeared => suites::smeared_suite(&model, window, seed)?,
    };
    let mut rep = CheckReport::new(&model.name, &model.fingerprint(), seed);
    for r in records {
        rep.push(r);
    }
    rep.finish();
    let default = PathBuf::from("report.json");
    let path = out.unwrap_or(&default);
    std::fs::write(path, rep.to_json())?;
    let (passed, total) = (
        rep.records.iter().filter(|r| r.passed()).count(),
        rep.records.len(),
    );
    println!("{passed}/{total} checks passed -> {}", path.display());
    Ok(if rep.all_passed() { 0 } else { 1 })
}

fn cmd_character(
    model_path: &Path,
    max: Option<u32>,
    out: Option<&Path>,
) -> Result<u8, InputError> {
    let model = read_model(model_path)?;
    let top = max.unwrap_or(model.cutoff).min(model.cutoff);
    let coeffs: Vec<usize> = model.level_dims[..=top as usize].to_vec();
    let series = q_series(&coeffs);
    println!("{series}");
    if let Some(path) = out {
        let doc = json!({
            "model": model.name,
            "fingerprint": model.fingerprint(),
            "coeffs": coeffs,
            "series": series,
        });
        std::fs::write(path, voa_core::json::to_canonical_string(&doc))?;
    }
    Ok(0)
}

/// ASCII q-series with zero terms dropped: "1 + 3q + 4q^2 + 7q^3".
fn q_series(coeffs: &[usize]) -> String {
    let mut terms = Vec::new();
    for (n, &a) in coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        terms.push(match n {
            0 => a.to_string(),
            1 if a == 1 => "q".into(),
            1 => format!("{a}q"),
            _ if a == 1 => format!("q^{n}"),
            _ => format!("{a}q^{n}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn cmd_subalgebra(
    model_path: &Path,
    gen_path: &Path,
    op: SubOp,
    out: Option<&Path>,
) -> Result<u8, InputError> {
    let model = read_model(model_path)?;
    let gens = read_generators(gen_path)?;
    let form = invariant_form(&model)?;
    let pct = pct_operator(&model, &form)?;

    let mut notes = Vec::new();
    let (sub, op_name) = match op {
        SubOp::Close => {
            if gens.vectors.is_empty() {
                return Err(InputError("close needs at least one vector".into()));
            }
            let w = subalgebra::close_unitary_subalgebra(&model, &pct, &gens.vectors)?;
            (w, "close")
        }
        SubOp::Coset => {
            if gens.vectors.is_empty() {
                return Err(InputError("coset needs at least one vector".into()));
            }
            let w = subalgebra::close_unitary_subalgebra(&model, &pct, &gens.vectors)?;
            let c = subalgebra::coset_subalgebra(&model, &pct, &w)?;
            (c, "coset")
        }
        SubOp::Fixed => {
            let mut elements = Vec::new();
            for name in &gens.exp_zero_modes {
                let v = resolve_field(&model, name)?;
                elements.push(subalgebra::exp_zero_mode(&model, &v)?);
                notes.push(format!("exp of the zero mode of {name}"));
            }
            for (i, maps) in gens.automorphisms.iter().enumerate() {
                if maps.len() != model.cutoff as usize + 1 {
                    return Err(InputError(format!(
                        "automorphism {i} must give one matrix per level 0..={}",
                        model.cutoff
                    )));
                }
                let sparse: Vec<_> = maps
                    .iter()
                    .enumerate()
                    .map(|(l, rows)| files::dense_to_sparse(rows, model.dim(l as u32)))
                    .collect();
                elements.push(sparse);
                notes.push(format!("explicit matrices, entry {i}"));
            }
            if elements.is_empty() {
                return Err(InputError(
                    "fixed needs exp_zero_modes or automorphisms".into(),
                ));
            }
            let (sub, reports) =
                subalgebra::fixed_point_subalgebra(&model, &form, &pct, &elements)?;
            for (note, r) in notes.iter_mut().zip(&reports) {
                note.push_str(if r.sesquilinear_ok {
                    ": unitary automorphism fixing nu"
                } else {
                    ": automorphism fixing nu and the bilinear form"
                });
            }
            (sub, "fixed")
        }
    };

    subalgebra::check_subalgebra(&model, &pct, &sub)?;
    let (nu_w, c_w) = subalgebra::projected_conformal_vector(&model, &sub)?;
    let doc = SubalgebraFile {
        parent: model.name.clone(),
        parent_fingerprint: model.fingerprint(),
        op: op_name.into(),
        dims: sub.dims.clone(),
        basis: sub.basis.iter().map(files::sparse_to_dense).collect(),
        conformal_vector: nu_w,
        central_charge: c_w.clone(),
        automorphism_notes: notes,
    };
    let default = PathBuf::from("subalgebra.json");
    let path = out.unwrap_or(&default);
    std::fs::write(path, voa_core::json::to_canonical_string(&doc))?;
    println!(
        "{op_name} dims {:?} central charge {c_w} -> {}",
        doc.dims,
        path.display()
    );
    Ok(0)
}

/// Looks a field up by generator name; "nu" is the conformal vector and
/// "1" or "vacuum" is the vacuum.
fn resolve_field(model: &VOAModel, name: &str) -> Result<GradedVector, InputError> {
    match name {
        "nu" => Ok(model.conformal_vector.clone()),
        "1" | "vacuum" => Ok(model.vacuum()),
        _ => model
            .generators
            .iter()
            .find(|g| g.name == name)
            .map(|g| g.vector.clone())
            .ok_or_else(|| {
                let known: Vec<_> = model.generators.iter().map(|g| g.name.clone()).collect();
                InputError(format!("unknown field {name}; generators: {known:?}"))
            }),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_smear(
    model_path: &Path,
    field: &str,
    function: &str,
    function2: Option<&str>,
    check: SmearCheck,
    window: i64,
    n_max: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<u8, InputError> {
    let model = read_model(model_path)?;
    let v = resolve_field(&model, field)?;
    let weight = v
        .homogeneous_level()
        .ok_or(InputError("field must be homogeneous".into()))?;
    let f = TestFunction::parse(function, window)?;
    let frame = OrthoFrame::new(&model)
        .map_err(|e| InputError(format!("model has no orthonormal frame: {e}")))?;
    let spec = SampleSpec {
        seed,
        ..SampleSpec::default()
    };

    let record = match check {
        SmearCheck::Adjoint => {
            let form = invariant_form(&model)?;
            let pct = pct_operator(&model, &form)?;
            timed_try(|| {
                let r = adjoint_residual(&model, &frame, &pct, &v, &f)?;
                Ok::<_, voa_core::VoaError>(CheckRecord::residual(
                    &format!("smear/adjoint/{field}"),
                    "smeared adjoint matches the PCT-conjugated smearing",
                    window,
                    r,
                    1e-12,
                ))
            })?
        }
        SmearCheck::Ebound => {
            if model.cutoff < 2 {
                return Err(InputError("ebound needs cutoff at least 2".into()));
            }
            timed_try(|| {
                let s = weight.max(1);
                let full = energy_bound_witness(&model, &frame, &v, field, s, 1, spec)?;
                let capped = energy_bound_witness(
                    &model,
                    &frame,
                    &v,
                    field,
                    s,
                    1,
                    SampleSpec {
                        max_level: Some(model.cutoff - 1),
                        ..spec
                    },
                )?;
                let drift = if full.m > 0.0 {
                    ((full.m - capped.m) / full.m).max(0.0)
                } else {
                    0.0
                };
                Ok::<_, voa_core::VoaError>(
                    CheckRecord::residual(
                        &format!("smear/ebound/{field}"),
                        "energy-bound witness is stable when the top level is dropped",
                        model.cutoff as i64,
                        drift,
                        0.05,
                    )
                    .with_details(json!({
                        "m": full.m,
                        "m_without_top_level": capped.m,
                        "s": full.s,
                        "k": full.k,
                        "max_mode": full.max_mode,
                        "max_level": full.max_level,
                        "samples": full.samples,
                    })),
                )
            })?
        }
        SmearCheck::Wightman => {
            let g = TestFunction::parse(function2.unwrap_or("bump:4,5"), window)?;
            timed_try(|| {
                let rep = wightman_residual(
                    &model,
                    &frame,
                    SmearedField {
                        vector: &v,
                        function: &f,
                    },
                    SmearedField {
                        vector: &v,
                        function: &g,
                    },
                    &model.vacuum(),
                    spec,
                )?;
                Ok::<_, voa_core::VoaError>(
                    CheckRecord::residual(
                        &format!("smear/wightman/{field}"),
                        "smeared commutator vanishes for disjoint supports",
                        window,
                        rep.residual,
                        rep.declared_bound,
                    )
                    .with_details(json!({
                        "locality_order": rep.locality_order,
                        "declared_bound": rep.declared_bound,
                        "within_bound": rep.within_bound,
                    })),
                )
            })?
        }
        SmearCheck::Bw => {
            if weight == 0 {
                return Err(InputError("bw needs a field of positive weight".into()));
            }
            timed_try(|| {
                let rep = ladder::bisognano_wichmann_residual(weight, &f, n_max, 12.0)?;
                Ok::<_, voa_core::VoaError>(
                    CheckRecord::residual(
                        &format!("smear/bw/{field}"),
                        "modular flow matches reflection on the spectral window",
                        rep.n_max as i64,
                        rep.residual,
                        1e-3,
                    )
                    .with_details(json!({
                        "n_max": rep.n_max,
                        "residual_half": rep.residual_half,
                        "kept": rep.kept,
                        "kept_half": rep.kept_half,
                        "lambda_cut": rep.lambda_cut,
                    })),
                )
            })?
        }
        SmearCheck::Symplectic => {
            if weight == 0 {
                return Err(InputError(
                    "symplectic needs a field of positive weight".into(),
                ));
            }
            let g = TestFunction::parse(function2.unwrap_or("bump:1,3"), window)?;
            let cap = window - weight as i64;
            if cap < 1 {
                return Err(InputError("window too small for this weight".into()));
            }
            let n_max = n_max.min(cap as usize);
            timed_try(|| {
                let lad = ladder::ladder_module(weight, n_max)?;
                let norm_a = model.norm_sq(&v).to_f64().sqrt();
                let s = ladder::symplectic_form(&lad, norm_a, &f, &g)?;
                let si = ladder::symplectic_inner_path(&lad, norm_a, &f, &g, n_max);
                Ok::<_, voa_core::VoaError>(
                    CheckRecord::residual(
                        &format!("smear/symplectic/{field}"),
                        "mode-series and scalar-product paths to the symplectic form agree",
                        n_max as i64 + weight as i64,
                        (s - si).abs(),
                        1e-10,
                    )
                    .with_details(json!({ "series": s, "inner": si, "norm_a": norm_a })),
                )
            })?
        }
    };

    let mut rep = CheckReport::new(&model.name, &model.fingerprint(), seed);
    let ok = record.passed();
    rep.push(record);
    rep.finish();
    let default = PathBuf::from("smear.json");
    let path = out.unwrap_or(&default);
    std::fs::write(path, rep.to_json())?;
    println!(
        "{} -> {}",
        if ok { "pass" } else { "fail" },
        path.display()
    );
    Ok(if ok { 0 } else { 1 })
}
