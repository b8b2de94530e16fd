//! Command-line front end. Exit codes: 0 yes/ok, 1 no/fails, 2 parse error,
//! 3 validation error, 4 undecided.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::asymptotic::{check_reversible_asymptotic, AsymptoticOverall, LieAlgebraBasis};
use crate::charfn::{char_fn, sym_group, CharFn, PureState};
use crate::deciders::{convertible, convertible_chars, g_equiv, unitary_g_equiv, Outcome, RepContext, Verdict};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, Quaternion};
use crate::io::{self, LoadedRep, SavedWitness};
use crate::linalg::{max_abs_diff, random_unit_vector};
use crate::oracle::{verify_pd_witness, verify_unitary_witness};
use crate::rep::decompose;
use crate::Tolerances;

#[derive(Parser, Debug)]
#[command(name = "asymmetry", version, about = "Characteristic functions and G-covariant interconversion of pure states")]
struct Cli {
    /// Override a tolerance, e.g. `--tol equality=1e-9` (repeatable).
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    tol: Vec<String>,
    /// Seed for randomized spot checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Unitary,
    Gcov,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Unitary => "unitary",
            Mode::Gcov => "gcov",
        }
    }
}

#[derive(clap::Args, Debug)]
struct RepArgs {
    /// Representation file; may embed or reference its group.
    #[arg(long)]
    rep: PathBuf,
    /// Group file, overriding the one named in the representation file.
    #[arg(long)]
    group: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic function of a state.
    Charfn {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        state: PathBuf,
    },
    /// Irreps and multiplicities of a representation.
    Decompose {
        #[command(flatten)]
        rep: RepArgs,
        /// Include the isometries of each isotypic block.
        #[arg(long)]
        isometries: bool,
    },
    /// Unitary G-equivalence or G-equivalence of two states.
    Equiv {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
    },
    /// One-way convertibility of state A into state B.
    Convert {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
        /// Representation carrying state B when it differs from state A's.
        #[arg(long)]
        rep_b: Option<PathBuf>,
    },
    /// Necessary conditions for reversible asymptotic conversion.
    Asymptotic {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
        /// Lie-algebra basis file; defaults to the representation's generators.
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Stabilizer subgroup of a state.
    Sym {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        state: PathBuf,
    },
    /// Re-checks a saved verdict report against the states.
    Verify {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        verdict: PathBuf,
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Format(_) | Error::Io(_) => 2,
        Error::Consistency(_) => 4,
        _ => 3,
    }
}

fn load_rep(args: &RepArgs) -> Result<LoadedRep> {
    let group = match &args.group {
        Some(p) => Some(io::parse_group(&io::load_json(p)?)?),
        None => None,
    };
    io::parse_rep(&io::load_json(&args.rep)?, Some(&args.rep), group)
}

fn load_state(p: &Path) -> Result<PureState> {
    io::parse_state(&io::load_json(p)?)
}

fn context(loaded: &LoadedRep, tol: &Tolerances) -> Result<RepContext> {
    RepContext::new(loaded.rep.clone(), loaded.group_spec.table()?.clone(), tol.clone())
}

fn tolerances(overrides: &[String]) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for o in overrides {
        let (name, value) = o
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--tol expects NAME=VALUE, got `{o}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("--tol {name}: `{value}` is not a number")))?;
        tol.set(name.trim(), value)?;
    }
    Ok(tol)
}

struct Output {
    report: Value,
    code: i32,
}

fn verdict_output(command: &str, mode: Option<&str>, v: &Verdict, group: &Group) -> Result<Output> {
    Ok(Output {
        report: io::verdict_report(command, mode, v, group)?,
        code: v.outcome.exit_code(),
    })
}

fn execute(cli: &Cli, tol: &Tolerances) -> Result<Output> {
    match &cli.command {
        Command::Charfn { rep, state } => {
            let loaded = load_rep(rep)?;
            let psi = load_state(state)?;
            loaded.rep.validate(tol.representation)?;
            Ok(Output {
                report: io::charfn_report(&char_fn(&psi, &loaded.rep)?)?,
                code: 0,
            })
        }
        Command::Decompose { rep, isometries } => {
            let loaded = load_rep(rep)?;
            loaded.rep.validate(tol.representation)?;
            let dec = decompose(&loaded.rep, loaded.group_spec.table()?)?;
            Ok(Output {
                report: io::decompose_report(&dec, *isometries),
                code: 0,
            })
        }
        Command::Equiv { rep, mode, state_a, state_b } => {
            let loaded = load_rep(rep)?;
            let (a, b) = (load_state(state_a)?, load_state(state_b)?);
            let ctx = context(&loaded, tol)?;
            let v = match mode {
                Mode::Unitary => unitary_g_equiv(&a, &b, &ctx)?,
                Mode::Gcov => g_equiv(&a, &b, &ctx)?,
            };
            verdict_output("equiv", Some(mode.name()), &v, ctx.group())
        }
        Command::Convert { rep, state_a, state_b, rep_b } => {
            let loaded = load_rep(rep)?;
            let (a, b) = (load_state(state_a)?, load_state(state_b)?);
            let v = match rep_b {
                None => convertible(&a, &b, &context(&loaded, tol)?)?,
                Some(p) => {
                    let other = io::parse_rep(&io::load_json(p)?, Some(p), Some(loaded.group_spec.clone()))?;
                    loaded.rep.validate(tol.representation)?;
                    other.rep.validate(tol.representation)?;
                    let (ca, cb) = (char_fn(&a, &loaded.rep)?, char_fn(&b, &other.rep)?);
                    let cb = rebase(cb, ca.group());
                    convertible_chars(&ca, &cb, loaded.group_spec.table()?, tol)?
                }
            };
            verdict_output("convert", None, &v, &loaded.group_spec.group)
        }
        Command::Asymptotic { rep, state_a, state_b, generators } => {
            let loaded = load_rep(rep)?;
            let (a, b) = (load_state(state_a)?, load_state(state_b)?);
            loaded.rep.validate(tol.representation)?;
            let basis = match generators {
                Some(p) => LieAlgebraBasis::new(io::parse_generators(&io::load_json(p)?)?)?,
                None if loaded.rep.group().is_lie() => LieAlgebraBasis::from_rep(&loaded.rep)?,
                None => {
                    return Err(Error::Unsupported(
                        "reversible asymptotic conditions are defined for compact Lie groups".into(),
                    ))
                }
            };
            let r = check_reversible_asymptotic(&a, &b, &loaded.rep, &basis, tol)?;
            let code = match r.overall {
                AsymptoticOverall::NecessaryConditionsHold { .. } => 0,
                AsymptoticOverall::Fails { .. } => 1,
            };
            Ok(Output {
                report: io::asymptotic_report(&loaded.group_spec.group, &r),
                code,
            })
        }
        Command::Sym { rep, state } => {
            let loaded = load_rep(rep)?;
            let psi = load_state(state)?;
            loaded.rep.validate(tol.representation)?;
            let s = sym_group(&psi, &loaded.rep, tol.sym)?;
            Ok(Output {
                report: io::sym_report(&loaded.group_spec.group, &s),
                code: 0,
            })
        }
        Command::Verify { rep, verdict, state_a, state_b } => {
            let loaded = load_rep(rep)?;
            let (a, b) = (load_state(state_a)?, load_state(state_b)?);
            let ctx = context(&loaded, tol)?;
            let saved = io::parse_verdict(&io::load_json(verdict)?, ctx.group())?;
            verify(&saved, &a, &b, &ctx, cli.seed)
        }
    }
}

/// Lie characteristic functions of different quadrature configurations
/// describe the same group; align them for comparison.
fn rebase(chi: CharFn, group: &std::sync::Arc<Group>) -> CharFn {
    match chi {
        CharFn::Lie { reduction, .. } => CharFn::Lie {
            group: group.clone(),
            reduction,
        },
        other => other,
    }
}

fn random_element(group: &Group, rng: &mut ChaCha8Rng) -> GroupElement {
    match group {
        Group::Finite(g) => GroupElement::Finite(rng.random_range(0..g.order())),
        Group::U1 { .. } => GroupElement::u1(rng.random_range(0.0..std::f64::consts::TAU)),
        Group::Su2 { .. } => {
            let v = random_unit_vector(2, rng);
            GroupElement::Su2(Quaternion::new(v[0].re, v[0].im, v[1].re, v[1].im).normalized())
        }
    }
}

/// Number of extra seeded random elements checked by `verify`.
const SPOT_CHECKS: usize = 16;

fn verify(saved: &io::SavedVerdict, a: &PureState, b: &PureState, ctx: &RepContext, seed: u64) -> Result<Output> {
    let tol = &ctx.tol;
    let mut residuals = BTreeMap::new();
    let (ok, checked, detail) = match (&saved.outcome, &saved.witness) {
        (Outcome::Yes, Some(SavedWitness::InvariantUnitary(v))) => {
            let check = verify_unitary_witness(v, a, b, &ctx.rep, tol.equality)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut spot: f64 = 0.0;
            for _ in 0..SPOT_CHECKS {
                let u = ctx.rep.matrix(&random_element(ctx.group(), &mut rng))?;
                spot = spot.max(max_abs_diff(&(v * &u), &(&u * v)));
            }
            residuals.insert("equality".to_string(), check.equality_residual);
            residuals.insert("commutation".to_string(), check.structure_residual);
            residuals.insert("random_commutation".to_string(), spot);
            (check.ok && spot <= tol.equality, "invariant unitary witness", None)
        }
        (Outcome::Yes, Some(SavedWitness::OneDimRep(values))) => {
            let mut worst: f64 = 0.0;
            let mut modulus: f64 = 0.0;
            for (g, theta) in values {
                let va = crate::charfn::char_value(a, &ctx.rep, g)?;
                let vb = crate::charfn::char_value(b, &ctx.rep, g)?;
                worst = worst.max((vb - theta * va).norm());
                modulus = modulus.max((theta.norm() - 1.0).abs());
            }
            residuals.insert("equality".to_string(), worst);
            residuals.insert("modulus".to_string(), modulus);
            (
                !values.is_empty() && worst <= tol.equality && modulus <= tol.equality,
                "one-dimensional representation witness",
                None,
            )
        }
        (Outcome::Yes, Some(SavedWitness::PdFunction(f))) => {
            let (ca, cb) = (char_fn(a, &ctx.rep)?, char_fn(b, &ctx.rep)?);
            let check = verify_pd_witness(f, &ca, &cb, tol.equality, tol.psd)?;
            residuals.insert("equality".to_string(), check.equality_residual);
            residuals.insert("min_eigenvalue".to_string(), check.structure_residual);
            (check.ok, "positive definite function witness", None)
        }
        (Outcome::Yes, None) => (false, "yes verdict without witness", Some("a yes verdict must carry a witness".to_string())),
        (outcome, _) => {
            let fresh = match (saved.command.as_str(), saved.mode.as_deref()) {
                ("equiv", Some("unitary")) => unitary_g_equiv(a, b, ctx)?,
                ("equiv", Some("gcov")) => g_equiv(a, b, ctx)?,
                ("convert", _) => convertible(a, b, ctx)?,
                (cmd, mode) => {
                    return Err(Error::Format(format!(
                        "verdict.command: cannot re-run `{cmd}` (mode {mode:?})"
                    )))
                }
            };
            residuals.extend(fresh.residuals.clone());
            let same = fresh.outcome == *outcome;
            (
                same,
                "re-run of the decider",
                (!same).then(|| format!("saved outcome {} but re-run gives {}", outcome.as_str(), fresh.outcome.as_str())),
            )
        }
    };
    Ok(Output {
        report: io::verify_report(ok, checked, &residuals, detail.as_deref()),
        code: if ok { 0 } else { 1 },
    })
}

/// Runs the tool on `args` (including the program name), writing the report
/// to `stdout` (or `--out`) and diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let result = tolerances(&cli.tol).and_then(|tol| execute(&cli, &tol));
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let rendered = match cli.format {
        Format::Json => io::to_canonical_json(&out.report),
        Format::Text => io::to_text(&out.report),
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, rendered.as_bytes()),
        None => stdout.write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    out.code
}
