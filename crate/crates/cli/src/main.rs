use std::error::Error as StdError;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bwmagic::amplify::{
    amplify, compose, lattice_track_run, write_lattice_csv, zero_base, AmplifyOptions, MaskMode,
    MaskPolicy,
};
use bwmagic::bwlattice::{
    bw_norm, check_ndelta_witness, is_member, measurement_split, n_delta_upper,
    reduce_proportional_minimal, PauliBasis,
};
use bwmagic::cliffstab::{apply_gate, cs_count_check, cs_injection_check, enumerate_stabilizers};
use bwmagic::io::{
    bw_norm_to_json, circuit_from_json, decomposition_from_json, decomposition_to_json,
    exact_state_from_json, exact_state_to_json, float_state_from_json, ndelta_witness_to_json,
    stabilizers_to_json, to_canonical_json,
};
use bwmagic::rankoracle::{
    exact_rank, extent_check, gram_analysis, product_rank_experiment, stab_fidelity,
};
use bwmagic::verify::{Suite, VerifyConfig};
use bwmagic::{Decomposition, Error, ExactState};

type AnyResult<T> = Result<T, Box<dyn StdError>>;

/// Exact Barnes Wall lattice magic monotones, stabilizer rank oracles and fidelity amplification.
#[derive(Parser)]
#[command(name = "bwmagic", version)]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "BWMAGIC_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker thread cap.
    #[arg(long, global = true, env = "BWMAGIC_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Randomized-rounding attempts.
    #[arg(long, global = true, env = "BWMAGIC_BUDGET_ROUNDING", default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    budget_rounding: u64,
    /// Amplitude entries allowed across decomposition terms.
    #[arg(long, global = true, env = "BWMAGIC_BUDGET_TERMS", default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
    budget_terms: u64,
    /// Largest subset size tried by the rank oracle.
    #[arg(long, global = true, env = "BWMAGIC_BUDGET_SUBSETS", default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    budget_subsets: u64,
    /// Tolerance for floating-point comparisons.
    #[arg(long, global = true, env = "BWMAGIC_TOL", default_value_t = 1e-9)]
    tol: f64,
    /// Output path (report, or the decomposition for amplify/compose).
    #[arg(long, global = true, env = "BWMAGIC_OUT")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Z,
    X,
    Y,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Random,
    MinError,
}

#[derive(Subcommand)]
enum Cmd {
    /// Barnes Wall lattice membership of an exact state.
    Member { state: PathBuf },
    /// Divide a lattice vector by the gcd of its dual coordinates.
    Reduce { state: PathBuf },
    /// The norm N(ψ) with its minimal vector.
    Norm { state: PathBuf },
    /// Split the minimal vector on one qubit after rotating into the given basis.
    Split {
        state: PathBuf,
        #[arg(long)]
        qubit: usize,
        #[arg(long, value_enum, default_value = "z")]
        basis: BasisArg,
    },
    /// Enumerate stabilizer states with stable indices.
    Enumerate {
        #[arg(short = 'n', long)]
        n: usize,
    },
    /// Exact stabilizer rank by subset search.
    Rank { state: PathBuf },
    /// Stabilizer fidelity by enumeration.
    Fidelity { state: PathBuf },
    /// ℓ₁ norm of a decomposition against the extent bound.
    ExtentCheck { decomposition: PathBuf },
    /// Gram determinant window for a family of states (decomposition terms or a list).
    GramCheck { states: PathBuf },
    /// CS gate teleportation from the |CS⟩ resource state.
    InjectCheck { state: PathBuf },
    /// N(final) divides 2^m for a circuit with m CS gates run from |0^n⟩.
    CsCount {
        circuit: PathBuf,
        #[arg(short = 'n', long)]
        n: Option<usize>,
    },
    /// Fidelity amplification of a decomposition of |H⟩^⊗n.
    Amplify {
        /// Input decomposition; defaults to {(1, |0^n⟩)}.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(short = 'n', long)]
        n: Option<usize>,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value = "exhaustive")]
        mode: MaskMode,
    },
    /// Tensor copies of a base decomposition and amplify to a target error.
    Compose {
        /// Base decomposition; defaults to {(1, |0⟩)}.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        copies: usize,
        #[arg(long)]
        target_error: f64,
    },
    /// Exact amplification with lattice-preserving masks.
    LatticeTrack {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, value_enum, default_value = "random")]
        policy: PolicyArg,
        /// Per-round CSV; with several seeds one file per seed is written.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Certified upper bound on N_δ from a decomposition.
    Ndelta {
        decomposition: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        delta0: f64,
    },
    /// Exact ranks of random two-qubit product states.
    ProductExperiment {
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Run an acceptance property suite, or `all`.
    Verify {
        suite: String,
        #[arg(short = 'n', long, default_value_t = 3)]
        n: usize,
    },
}

/// A report and whether the property it encodes held.
struct Outcome {
    report: Value,
    ok: bool,
}

impl Outcome {
    fn pass(report: Value) -> Self {
        Outcome { report, ok: true }
    }
}

fn read_json(path: &Path) -> AnyResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn read_exact(path: &Path) -> AnyResult<ExactState> {
    Ok(exact_state_from_json(&read_json(path)?)?)
}

fn read_decomposition(path: &Path) -> AnyResult<Decomposition> {
    Ok(decomposition_from_json(&read_json(path)?)?)
}

fn write_out(path: &Path, value: &Value) -> AnyResult<()> {
    fs::write(path, to_canonical_json(value)?).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(())
}

fn amplify_opts(cfg: &RunConfig, mode: MaskMode) -> AmplifyOptions {
    AmplifyOptions {
        mode,
        seed: cfg.seed,
        term_budget: cfg.budget_terms as usize,
    }
}

fn csv_path(base: &Path, seed: u64, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("lattice");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}-seed{seed}.{ext}"))
}

fn run(cmd: Cmd, cfg: &RunConfig) -> AnyResult<Outcome> {
    Ok(match cmd {
        Cmd::Member { state } => Outcome::pass(json!(is_member(&read_exact(&state)?))),
        Cmd::Reduce { state } => {
            let (v, g) = reduce_proportional_minimal(&read_exact(&state)?)?;
            Outcome::pass(json!({ "minimal_vector": exact_state_to_json(&v), "gcd": g }))
        }
        Cmd::Norm { state } => Outcome::pass(bw_norm_to_json(&bw_norm(&read_exact(&state)?)?)),
        Cmd::Split {
            state,
            qubit,
            basis,
        } => {
            let v = read_exact(&state)?;
            let basis = match basis {
                BasisArg::Z => PauliBasis::Z,
                BasisArg::X => PauliBasis::X,
                BasisArg::Y => PauliBasis::Y,
            };
            let minimal = bw_norm(&v)?
                .finite()
                .ok_or("split needs a state with amplitude ratios in Q(i)")?
                .minimal_vector;
            let mut w = minimal;
            for g in basis.rotation(qubit) {
                w = apply_gate(&w, &g)?;
            }
            let (v0, v1) = measurement_split(&w, qubit)?;
            let branch = |b: &ExactState| -> AnyResult<Value> {
                Ok(if b.is_zero() {
                    json!({ "state": exact_state_to_json(b), "norm": null })
                } else {
                    json!({ "state": exact_state_to_json(b), "norm": bw_norm(b)?.to_display() })
                })
            };
            Outcome::pass(
                json!({ "qubit": qubit, "basis": basis, "branches": [branch(&v0)?, branch(&v1)?] }),
            )
        }
        Cmd::Enumerate { n } => {
            let set = enumerate_stabilizers(n)?;
            let export = stabilizers_to_json(&set);
            match &cfg.out {
                Some(path) => {
                    write_out(path, &export)?;
                    Outcome::pass(
                        json!({ "n": n, "count": set.len(), "out": path.display().to_string() }),
                    )
                }
                None => Outcome::pass(export),
            }
        }
        Cmd::Rank { state } => {
            let v = read_exact(&state)?;
            let stabs = enumerate_stabilizers(v.n())?;
            Outcome::pass(json!(exact_rank(&v, &stabs, cfg.budget_subsets as usize)?))
        }
        Cmd::Fidelity { state } => {
            let v = float_state_from_json(&read_json(&state)?)?;
            let stabs = enumerate_stabilizers(v.n())?;
            Outcome::pass(json!(stab_fidelity(&v, &stabs)?))
        }
        Cmd::ExtentCheck { decomposition } => {
            let r = extent_check(&read_decomposition(&decomposition)?)?;
            Outcome {
                ok: r.ok,
                report: json!(r),
            }
        }
        Cmd::GramCheck { states } => {
            let v = read_json(&states)?;
            let family: Vec<ExactState> = match &v {
                Value::Array(items) => items
                    .iter()
                    .map(exact_state_from_json)
                    .collect::<Result<_, _>>()?,
                Value::Object(m) if m.contains_key("states") => m["states"]
                    .as_array()
                    .ok_or("\"states\" must be an array")?
                    .iter()
                    .map(exact_state_from_json)
                    .collect::<Result<_, _>>()?,
                _ => decomposition_from_json(&v)?
                    .terms()
                    .iter()
                    .map(|t| {
                        t.state
                            .as_exact()
                            .cloned()
                            .ok_or("gram-check needs exact term states")
                    })
                    .collect::<Result<_, _>>()?,
            };
            let r = gram_analysis(&family)?;
            Outcome {
                ok: r.minkowski_ok && r.claim_ok,
                report: json!(r),
            }
        }
        Cmd::InjectCheck { state } => {
            let r = cs_injection_check(&read_exact(&state)?)?;
            Outcome {
                ok: r.ok,
                report: json!(r),
            }
        }
        Cmd::CsCount { circuit, n } => {
            let c = circuit_from_json(&read_json(&circuit)?, n)?;
            let r = cs_count_check(&c)?;
            Outcome {
                ok: r.ok,
                report: json!(r),
            }
        }
        Cmd::Amplify {
            input,
            n,
            rounds,
            mode,
        } => {
            let d = match (&input, n) {
                (Some(p), _) => read_decomposition(p)?,
                (None, Some(n)) => zero_base_n(n)?,
                (None, None) => return Err("amplify needs --in or -n".into()),
            };
            if let (Some(n), true) = (n, input.is_some()) {
                if n != d.n() {
                    return Err(format!(
                        "-n {n} does not match the decomposition's {} qubits",
                        d.n()
                    )
                    .into());
                }
            }
            let (out, steps) = amplify(&d, rounds, &amplify_opts(cfg, mode))?;
            let decomposition = decomposition_to_json(&out, None);
            let report = json!({ "n": out.n(), "rank": out.rank(), "steps": steps });
            if let Some(path) = &cfg.out {
                write_out(path, &decomposition)?;
                Outcome::pass(report)
            } else {
                Outcome::pass(json!({ "report": report, "decomposition": decomposition }))
            }
        }
        Cmd::Compose {
            base,
            copies,
            target_error,
        } => {
            let base = match &base {
                Some(p) => read_decomposition(p)?,
                None => zero_base(),
            };
            let (out, r) = compose(
                &base,
                copies,
                target_error,
                &amplify_opts(cfg, MaskMode::Exhaustive),
            )?;
            let ok = r.formula_ok && r.final_error <= target_error + cfg.tol;
            if let Some(path) = &cfg.out {
                write_out(path, &decomposition_to_json(&out, None))?;
            }
            Outcome {
                ok,
                report: json!(r),
            }
        }
        Cmd::LatticeTrack {
            n,
            rounds,
            seeds,
            policy,
            csv,
        } => {
            let policy = match policy {
                PolicyArg::Random => MaskPolicy::Random,
                PolicyArg::MinError => MaskPolicy::MinError,
            };
            let mut runs = Vec::new();
            let mut ok = true;
            for s in 0..seeds {
                let seed = cfg.seed.wrapping_add(s);
                match lattice_track_run(n, rounds, seed, policy) {
                    Ok(reps) => {
                        if let Some(base) = &csv {
                            let path = csv_path(base, seed, seeds > 1);
                            let mut buf = Vec::new();
                            write_lattice_csv(&mut buf, &reps)?;
                            fs::write(&path, buf)
                                .map_err(|e| format!("{}: {e}", path.display()))?;
                        }
                        runs.push(json!({ "seed": seed, "rounds": reps }));
                    }
                    Err(e @ Error::NotMember { .. }) => {
                        ok = false;
                        runs.push(json!({ "seed": seed, "violation": e.to_string() }));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Outcome {
                ok,
                report: json!({ "n": n, "runs": runs }),
            }
        }
        Cmd::Ndelta {
            decomposition,
            delta0,
        } => {
            let d = read_decomposition(&decomposition)?;
            let w = n_delta_upper(&d, delta0, cfg.budget_rounding as usize, cfg.seed)?;
            let phi = d.assemble_float().normalized()?;
            let check = check_ndelta_witness(&phi, &w.witness, w.c, delta0);
            Outcome {
                ok: check.ok,
                report: json!({ "witness": ndelta_witness_to_json(&w), "check": check }),
            }
        }
        Cmd::ProductExperiment { samples } => {
            let stabs = enumerate_stabilizers(2)?;
            let r = product_rank_experiment(samples, cfg.seed, &stabs)?;
            Outcome {
                ok: r.failures.is_empty(),
                report: json!(r),
            }
        }
        Cmd::Verify { suite, n } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let vcfg = VerifyConfig {
                max_n: n,
                seed: cfg.seed,
                tol: cfg.tol,
                rounding_budget: cfg.budget_rounding as usize,
                term_budget: cfg.budget_terms as usize,
            };
            let mut reports = Vec::new();
            for s in suites {
                let start = Instant::now();
                let r = s.run(&vcfg)?;
                eprintln!(
                    "{} criterion {} {} in {:.2?}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.criterion,
                    r.suite,
                    start.elapsed()
                );
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.passed);
            Outcome {
                ok,
                report: if reports.len() == 1 {
                    json!(reports[0])
                } else {
                    json!(reports)
                },
            }
        }
    })
}

fn zero_base_n(n: usize) -> AnyResult<Decomposition> {
    use bwmagic::statevec::{Target, Term};
    if n == 0 || n > 30 {
        return Err(format!("unsupported qubit count {n}").into());
    }
    Ok(Decomposition::new(
        n,
        vec![Term::exact(
            bwmagic::ExactScalar::one(),
            ExactState::basis(n, 0),
        )],
        Target::HTensor,
    )?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let writes_decomposition = matches!(
        cli.cmd,
        Cmd::Amplify { .. } | Cmd::Compose { .. } | Cmd::Enumerate { .. }
    );
    let outcome = match run(cli.cmd, &cli.cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let emitted = match (&cli.cfg.out, writes_decomposition) {
        (Some(path), false) => write_out(path, &outcome.report),
        _ => to_canonical_json(&outcome.report)
            .map(|s| print!("{s}"))
            .map_err(Into::into),
    };
    if let Err(e) = emitted {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
