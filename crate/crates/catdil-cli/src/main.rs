//! Command-line front end: JSON file I/O around the dilation library.
//!
//! Exit codes: 0 all checks passed (or output written), 1 a verification
//! failed (witness JSON on stdout), 2 input or validation error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catdil::channel::Dilation;
use catdil::schur::{
    build_schur_dilation, decomposition_report, extremality_witness_search, factorizable_decompose,
    random_schur,
};
use catdil::states::{
    haar_random_unitary, random_density, DensityMatrix, ToleranceSpec, UnitaryMatrix,
};
use catdil::tensor::FactoredDims;
use catdil::thermal::{gibbs, robust_catalysis_reduce, thermal_operation_check, HamiltonianSpec};
use catdil::verify::{
    catalytic_check, equilibrating_check, multipartite_equilibrium_check,
    structural_catalytic_check,
};
use catdil::Error;
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use catdil_cli::classify::{classify, Certificates};
use catdil_cli::format::{
    ChoiJson, DilationJson, MatrixJson, MixedUnitaryJson, SchurJson, WitnessJson,
};

#[derive(Parser)]
#[command(name = "catdil", version, about = "Build, verify, and classify unitary dilations of quantum channels")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a property of a dilation or unitary
    Verify {
        #[command(subcommand)]
        target: VerifyCmd,
    },
    /// Construct dilations and states
    Build {
        #[command(subcommand)]
        target: BuildCmd,
    },
    /// Decompose a dilation into component channels
    Decompose {
        #[command(subcommand)]
        target: DecomposeCmd,
    },
    /// Search for witnesses
    Search {
        #[command(subcommand)]
        target: SearchCmd,
    },
    /// Classify a channel in the doubly-stochastic hierarchy
    Classify(ClassifyArgs),
    /// Generate seeded random instances
    Random {
        #[command(subcommand)]
        target: RandomCmd,
    },
}

#[derive(Args)]
struct TolArg {
    /// Absolute residual tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl TolArg {
    fn spec(&self) -> ToleranceSpec {
        ToleranceSpec::with_abs_tol(self.tol)
    }
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Both marginals of U(w_sys x w_env)U' must reproduce the inputs
    Equilibrating {
        #[arg(long)]
        dilation: PathBuf,
        /// System equilibrium state (matrix JSON)
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Environment preserved for every system input
    Catalytic {
        #[arg(long)]
        dilation: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Gibbs environment and energy conservation
    Thermal {
        #[arg(long)]
        dilation: PathBuf,
        /// System Hamiltonian (matrix JSON)
        #[arg(long)]
        h_sys: PathBuf,
        /// Environment Hamiltonian (matrix JSON)
        #[arg(long)]
        h_env: PathBuf,
        /// Inverse temperature (required; one beta per invocation)
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Robust catalysis on a system-catalyst-bath tripartition
    Robust {
        /// Unitary on A x C x B (matrix JSON)
        #[arg(long)]
        unitary: PathBuf,
        /// Gibbs state of A (matrix JSON)
        #[arg(long)]
        omega_a: PathBuf,
        /// Gibbs state of C (matrix JSON)
        #[arg(long)]
        gibbs_c: PathBuf,
        /// Actual catalyst state on C (matrix JSON)
        #[arg(long)]
        tau_c: PathBuf,
        /// Gibbs state of B (matrix JSON)
        #[arg(long)]
        omega_b: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Reshuffled operator must be unitary
    Dual {
        #[arg(long)]
        unitary: PathBuf,
        /// First tensor factor dimension (default: square split)
        #[arg(long)]
        dim_first: Option<usize>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Every party's marginal preserved under a joint unitary
    Multipartite {
        #[arg(long)]
        unitary: PathBuf,
        /// Per-party states, in tensor order (repeat the flag)
        #[arg(long = "state", required = true, num_args = 1)]
        states: Vec<PathBuf>,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// Fermionic catalytic dilation of a Schur-multiplier channel
    Schur {
        /// Schur matrix JSON {"n", "x"}
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Controlled-unitary dilation of a mixed-unitary channel
    MixedUnitary {
        /// Decomposition JSON {"terms": [{"probability", "unitary"}]}
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Gibbs state of a Hamiltonian
    Gibbs {
        /// Hamiltonian (matrix JSON)
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Inverse temperature (required; one beta per invocation)
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Subcommand)]
enum DecomposeCmd {
    /// Split a maximally-mixed-environment dilation over an env basis
    Factorizable {
        #[arg(long)]
        dilation: PathBuf,
        /// Orthonormal environment basis as unitary columns (default: computational)
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Write the component Choi matrices here (default: stdout only)
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Non-extremality witness over random environment bases
    Extremality {
        #[arg(long)]
        dilation: PathBuf,
        /// Number of Haar-random bases to try
        #[arg(long, default_value_t = 32)]
        bases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Channel as Choi JSON {"dim_in", "dim_out", "choi"}
    #[arg(long)]
    channel: PathBuf,
    /// Optional catalytic / strongly factorizable certificate
    #[arg(long)]
    dilation: Option<PathBuf>,
    /// Optional mixed-unitary certificate
    #[arg(long)]
    mixed_unitary: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Subcommand)]
enum RandomCmd {
    /// Haar-random unitary
    Unitary {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random full-rank density matrix
    Density {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random unit-diagonal Gram matrix
    Schur {
        #[arg(long)]
        n: usize,
        /// Gram vector dimension (controls the rank)
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Command outcome, mapped onto the exit codes.
enum Outcome {
    Pass,
    Fail,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Invalid(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Invalid(format!("serialization failed: {e}")))?;
    fs::write(path, text)
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable output")
    );
}

fn load_dilation(path: &Path, tol: &ToleranceSpec) -> Result<Dilation, Error> {
    read_json::<DilationJson>(path)?.to_dilation(tol)
}

fn load_density(path: &Path, tol: &ToleranceSpec) -> Result<DensityMatrix, Error> {
    DensityMatrix::new(read_json::<MatrixJson>(path)?.to_matrix()?, tol)
}

fn load_unitary(path: &Path, tol: &ToleranceSpec) -> Result<UnitaryMatrix, Error> {
    UnitaryMatrix::new(read_json::<MatrixJson>(path)?.to_matrix()?, tol)
}

fn load_hamiltonian(path: &Path, label: &str) -> Result<HamiltonianSpec, Error> {
    HamiltonianSpec::new(read_json::<MatrixJson>(path)?.to_matrix()?, label)
}

fn run_verify(cmd: VerifyCmd) -> Result<Outcome, Error> {
    match cmd {
        VerifyCmd::Equilibrating {
            dilation,
            state,
            tol,
        } => {
            let t = tol.spec();
            let dil = load_dilation(&dilation, &t)?;
            let omega = load_density(&state, &t)?;
            let rep = equilibrating_check(&dil, &omega, &t)?;
            let out = json!({
                "pass": rep.pass,
                "fixed_point_residual": rep.fixed_point_residual,
                "env_preservation_residual": rep.env_preservation_residual,
                "joint_product_residual": rep.joint_product_residual,
                "commutator_residual": rep.commutator_residual,
                "mutual_info_out": rep.mutual_info_out,
                "threshold": t.abs_tol,
            });
            if rep.pass {
                print_json(&out);
                Ok(Outcome::Pass)
            } else {
                let (name, value) = if rep.fixed_point_residual >= rep.env_preservation_residual {
                    ("fixed_point_residual", rep.fixed_point_residual)
                } else {
                    ("env_preservation_residual", rep.env_preservation_residual)
                };
                let env_out = dil.env_marginal(&omega)?;
                print_json(&json!({
                    "witness": WitnessJson::new(name, value, t.abs_tol, Some(&env_out)),
                    "report": out,
                }));
                Ok(Outcome::Fail)
            }
        }
        VerifyCmd::Catalytic { dilation, tol } => {
            let t = tol.spec();
            let dil = load_dilation(&dilation, &t)?;
            let direct = catalytic_check(&dil, &t)?;
            let (structural, _) = structural_catalytic_check(&dil, &t)?;
            let out = json!({
                "pass": direct.pass,
                "marginal_residual": direct.marginal_residual,
                "structural_commutator_residual": structural.structural_commutator_residual,
                "sector_pt_unitarity_residuals": structural.sector_pt_unitarity_residuals,
                "threshold": t.abs_tol,
            });
            if direct.pass {
                print_json(&out);
                Ok(Outcome::Pass)
            } else {
                print_json(&json!({
                    "witness": WitnessJson::new(
                        "marginal_residual",
                        direct.marginal_residual,
                        t.abs_tol,
                        Some(dil.omega_env.matrix()),
                    ),
                    "report": out,
                }));
                Ok(Outcome::Fail)
            }
        }
        VerifyCmd::Thermal {
            dilation,
            h_sys,
            h_env,
            beta,
            tol,
        } => {
            let t = tol.spec();
            let dil = load_dilation(&dilation, &t)?;
            let hs = load_hamiltonian(&h_sys, "system")?;
            let he = load_hamiltonian(&h_env, "environment")?;
            let rep = thermal_operation_check(&dil, &hs, &he, beta, &t)?;
            if rep.pass {
                print_json(&rep);
                Ok(Outcome::Pass)
            } else {
                let worst = rep.worst().expect("failing report has checks");
                print_json(&json!({
                    "witness": WitnessJson::new(&worst.name, worst.value, worst.threshold, None),
                    "report": rep,
                }));
                Ok(Outcome::Fail)
            }
        }
        VerifyCmd::Robust {
            unitary,
            omega_a,
            gibbs_c,
            tau_c,
            omega_b,
            tol,
        } => {
            let t = tol.spec();
            let u = load_unitary(&unitary, &t)?;
            let oa = load_density(&omega_a, &t)?;
            let gc = load_density(&gibbs_c, &t)?;
            let tc = load_density(&tau_c, &t)?;
            let ob = load_density(&omega_b, &t)?;
            match robust_catalysis_reduce(&u, &oa, &gc, &tc, &ob, &t) {
                Ok(red) => {
                    print_json(&json!({
                        "report": red.report,
                        "merged_dilation": DilationJson::from_dilation(&red.merged),
                    }));
                    if red.report.pass {
                        Ok(Outcome::Pass)
                    } else {
                        Ok(Outcome::Fail)
                    }
                }
                Err(Error::NotRobust { witness }) => {
                    print_json(&json!({
                        "witness": WitnessJson::new("catalyst_basis_residual", witness, t.abs_tol, None),
                    }));
                    Ok(Outcome::Fail)
                }
                Err(Error::NotThermal { residual }) => {
                    print_json(&json!({
                        "witness": WitnessJson::new("thermal_premise_residual", residual, t.abs_tol, None),
                    }));
                    Ok(Outcome::Fail)
                }
                Err(e) => Err(e),
            }
        }
        VerifyCmd::Dual {
            unitary,
            dim_first,
            tol,
        } => {
            let t = tol.spec();
            let u = load_unitary(&unitary, &t)?;
            let d1 = match dim_first {
                Some(d) => d,
                None => {
                    let r = (u.dim() as f64).sqrt().round() as usize;
                    if r * r != u.dim() {
                        return Err(Error::Dimension(
                            "dimension is not a perfect square; pass --dim-first".into(),
                        ));
                    }
                    r
                }
            };
            if d1 == 0 || u.dim() % d1 != 0 {
                return Err(Error::Dimension("--dim-first must divide the dimension".into()));
            }
            let dims = FactoredDims::new(vec![d1, u.dim() / d1])?;
            let rep = catdil::dual::is_dual_unitary(&u, &dims, &t)?;
            if rep.pass {
                print_json(&rep);
                Ok(Outcome::Pass)
            } else {
                let worst = rep.worst().expect("failing report has checks");
                print_json(&json!({
                    "witness": WitnessJson::new(&worst.name, worst.value, worst.threshold, None),
                    "report": rep,
                }));
                Ok(Outcome::Fail)
            }
        }
        VerifyCmd::Multipartite {
            unitary,
            states,
            tol,
        } => {
            let t = tol.spec();
            let u = load_unitary(&unitary, &t)?;
            let parties = states
                .iter()
                .map(|p| load_density(p, &t))
                .collect::<Result<Vec<_>, _>>()?;
            let rep = multipartite_equilibrium_check(&u, &parties, &t)?;
            let out = json!({
                "pass": rep.pass,
                "marginal_residuals": rep.marginal_residuals,
                "joint_product_residual": rep.joint_product_residual,
                "commutator_residual": rep.commutator_residual,
                "threshold": t.abs_tol,
            });
            if rep.pass {
                print_json(&out);
                Ok(Outcome::Pass)
            } else {
                let (worst_idx, worst) = rep
                    .marginal_residuals
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .expect("at least two parties");
                print_json(&json!({
                    "witness": WitnessJson::new(
                        &format!("marginal_residual_party_{worst_idx}"),
                        *worst,
                        t.abs_tol,
                        None,
                    ),
                    "report": out,
                }));
                Ok(Outcome::Fail)
            }
        }
    }
}

fn run_build(cmd: BuildCmd) -> Result<Outcome, Error> {
    match cmd {
        BuildCmd::Schur { matrix, out, tol } => {
            let t = tol.spec();
            let x = read_json::<SchurJson>(&matrix)?.to_schur(&t)?;
            let (dil, report) = build_schur_dilation(&x, &t)?;
            write_json(&out, &DilationJson::from_dilation(&dil))?;
            print_json(&report);
            Ok(Outcome::Pass)
        }
        BuildCmd::MixedUnitary {
            decomposition,
            out,
            tol,
        } => {
            let t = tol.spec();
            let dec = read_json::<MixedUnitaryJson>(&decomposition)?.to_decomposition(&t)?;
            let dil = dec.to_dilation()?;
            write_json(&out, &DilationJson::from_dilation(&dil))?;
            print_json(&json!({
                "dim_sys": dil.dim_sys,
                "dim_env": dil.dim_env,
                "terms": dec.terms.len(),
            }));
            Ok(Outcome::Pass)
        }
        BuildCmd::Gibbs {
            hamiltonian,
            beta,
            out,
            tol,
        } => {
            let t = tol.spec();
            let h = load_hamiltonian(&hamiltonian, "input")?;
            let (omega, spec) = gibbs(&h, beta, &t)?;
            write_json(&out, &MatrixJson::from_matrix(omega.matrix()))?;
            print_json(&json!({"beta": spec.beta, "z": spec.z, "dim": h.dim()}));
            Ok(Outcome::Pass)
        }
    }
}

fn run_decompose(cmd: DecomposeCmd) -> Result<Outcome, Error> {
    match cmd {
        DecomposeCmd::Factorizable {
            dilation,
            basis,
            out,
            tol,
        } => {
            let t = tol.spec();
            let dil = load_dilation(&dilation, &t)?;
            let basis = match basis {
                Some(path) => load_unitary(&path, &t)?,
                None => UnitaryMatrix::identity(dil.dim_env),
            };
            let components = factorizable_decompose(&dil, &basis, &t)?;
            let report = decomposition_report(&dil, &components, &t)?;
            let comp_json: Vec<ChoiJson> = components.iter().map(ChoiJson::from_channel).collect();
            if let Some(path) = out {
                write_json(&path, &comp_json)?;
            }
            print_json(&json!({"components": comp_json, "report": report}));
            if report.residual("average_reconstruction_residual").unwrap_or(f64::NAN) < t.abs_tol {
                Ok(Outcome::Pass)
            } else {
                Ok(Outcome::Fail)
            }
        }
    }
}

fn run_search(cmd: SearchCmd) -> Result<Outcome, Error> {
    match cmd {
        SearchCmd::Extremality {
            dilation,
            bases,
            seed,
            tol,
        } => {
            let t = tol.spec();
            let dil = load_dilation(&dilation, &t)?;
            match extremality_witness_search(&dil, bases, seed, &t)? {
                Some(w) => {
                    print_json(&json!({
                        "found": true,
                        "trial": w.trial,
                        "indices": [w.indices.0, w.indices.1],
                        "channel_distance": w.distance,
                        "basis": MatrixJson::from_matrix(w.basis.matrix()),
                        "components": w.components.iter().map(ChoiJson::from_channel).collect::<Vec<_>>(),
                    }));
                }
                None => {
                    print_json(&json!({"found": false, "bases_tried": bases}));
                }
            }
            Ok(Outcome::Pass)
        }
    }
}

fn run_classify(args: ClassifyArgs) -> Result<Outcome, Error> {
    let t = args.tol.spec();
    let channel = read_json::<ChoiJson>(&args.channel)?.to_channel()?;
    let certs = Certificates {
        mixed_unitary: args
            .mixed_unitary
            .as_deref()
            .map(|p| read_json::<MixedUnitaryJson>(p)?.to_decomposition(&t))
            .transpose()?,
        dilation: args
            .dilation
            .as_deref()
            .map(|p| load_dilation(p, &t))
            .transpose()?,
    };
    let report = classify(&channel, &certs, &t)?;
    print_json(&report);
    Ok(Outcome::Pass)
}

fn run_random(cmd: RandomCmd) -> Result<Outcome, Error> {
    let emit = |value: &serde_json::Value, out: Option<PathBuf>| -> Result<(), Error> {
        if let Some(path) = out {
            write_json(&path, value)?;
        }
        print_json(value);
        Ok(())
    };
    match cmd {
        RandomCmd::Unitary { dim, seed, out } => {
            let u = haar_random_unitary(dim, seed)?;
            let v = serde_json::to_value(MatrixJson::from_matrix(u.matrix()))
                .expect("serializable matrix");
            emit(&v, out)?;
        }
        RandomCmd::Density { dim, seed, out } => {
            let rho = random_density(dim, seed)?;
            let v = serde_json::to_value(MatrixJson::from_matrix(rho.matrix()))
                .expect("serializable matrix");
            emit(&v, out)?;
        }
        RandomCmd::Schur { n, rank, seed, out } => {
            let t = ToleranceSpec::default();
            let x = random_schur(n, rank, seed, &t)?;
            let v = serde_json::to_value(SchurJson::from_schur(&x)).expect("serializable matrix");
            emit(&v, out)?;
        }
    }
    Ok(Outcome::Pass)
}

fn dispatch(cli: Cli) -> Result<Outcome, Error> {
    match cli.cmd {
        Command::Verify { target } => run_verify(target),
        Command::Build { target } => run_build(target),
        Command::Decompose { target } => run_decompose(target),
        Command::Search { target } => run_search(target),
        Command::Classify(args) => run_classify(args),
        Command::Random { target } => run_random(target),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
