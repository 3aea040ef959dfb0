mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use chabauty_core::acceptance;
use chabauty_core::classify::{classify_compact_free, classify_integral, classify_numeral, witness_recipe, ClassifyError};
use chabauty_core::duality::{dual, DualityError};
use chabauty_core::grammar::{normalize, parse};
use chabauty_core::lab::probe::independence_obstruction;
use chabauty_core::lab::{
    duality_limit_consistency, finite_duality_report, limit_threshold, probe_integral, trivial_limit_check,
    ClosedSubgroupRep, ConcreteGroup, LabError, NeighborhoodSpec, ProbeResult, SubgroupSequence, Q,
};
use chabauty_core::nets::{demo_corollary, NetsError};
use chabauty_core::random::DEFAULT_SEED;
use chabauty_core::structure;
use chabauty_core::textio::{parse_rational, Config};

use output::Out;

#[derive(Parser)]
#[command(name = "chabauty", version, about = "Approximation of locally compact abelian groups by integral subgroups")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the random corpus used by selftest.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// key = value file with defaults for rho, eps, nmax, denom-bound, imax, seed, threads.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide integral, numeral or compact-free approximability.
    Classify {
        expr: String,
        #[arg(long, value_enum, default_value_t = Mode::Integral)]
        mode: Mode,
        /// Attach a construction when the answer is yes.
        #[arg(long)]
        witness: bool,
    },
    /// Character group.
    Dual { expr: String },
    /// Structural invariants and flags.
    Structure { expr: String },
    /// A construction of an approximating sequence.
    Witness { expr: String },
    /// Exact computations in R^d x T^t x Z^z x F.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Diagonal arguments over double sequences.
    #[command(subcommand)]
    Nets(NetsCommand),
    /// Run the acceptance checks.
    Selftest {
        /// Run a single check.
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Integral,
    Numeral,
    CompactFree,
}

#[derive(Args)]
struct Scale {
    /// Radius of the compact ball K.
    #[arg(long, value_parser = rational)]
    rho: Option<Q>,
    /// Radius of the identity neighborhood W.
    #[arg(long, value_parser = rational)]
    eps: Option<Q>,
}

#[derive(Subcommand)]
enum LabCommand {
    /// Least n0 with H_n in the neighborhood of the target for n0 ≤ n ≤ nmax.
    Limit {
        #[arg(long)]
        group: String,
        /// inv-lattice, lattice, alternating, zn, rn, rn-cyclic, qsub-chain.
        #[arg(long)]
        seq: String,
        #[arg(long, value_enum, default_value_t = Target::Expected)]
        target: Target,
        #[command(flatten)]
        scale: Scale,
        #[arg(long)]
        nmax: Option<u64>,
        /// Also run the trivial-limit test with cluster witnesses.
        #[arg(long)]
        trivial_report: bool,
    },
    /// Search for a cyclic subgroup of R x F close to the whole group.
    Probe {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        scale: Scale,
        #[arg(long)]
        denom_bound: Option<u64>,
    },
    /// Annihilators: of every subgroup of a finite group, or along a sequence.
    Duality {
        #[arg(long, conflicts_with_all = ["group", "seq"])]
        finite: Option<String>,
        #[arg(long, requires = "seq")]
        group: Option<String>,
        #[arg(long, requires = "group")]
        seq: Option<String>,
        #[command(flatten)]
        scale: Scale,
        #[arg(long)]
        nmax: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Full,
    Trivial,
    Expected,
}

#[derive(Subcommand)]
enum NetsCommand {
    /// Diagonal through cyclic approximants of slope lines in R x T.
    DemoCorollary {
        #[command(flatten)]
        scale: Scale,
        #[arg(long)]
        imax: Option<u64>,
    },
}

fn rational(s: &str) -> Result<Q, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Exit statuses.
const OK: u8 = 0;
const NO: u8 = 1;
const USAGE: u8 = 2;
const BORDERLINE: u8 = 3;
const INCONSISTENT: u8 = 4;

struct Defaults {
    rho: Q,
    eps: Q,
    nmax: u64,
    denom_bound: u64,
    imax: u64,
    seed: u64,
}

impl Defaults {
    fn new(c: &Config, cli_seed: Option<u64>) -> Defaults {
        Defaults {
            rho: c.rho.clone().unwrap_or_else(|| Q::from_integer(3.into())),
            eps: c.eps.clone().unwrap_or_else(|| Q::new(1.into(), 4.into())),
            nmax: c.nmax.unwrap_or(40),
            denom_bound: c.denom_bound.unwrap_or(24),
            imax: c.imax.unwrap_or(8),
            seed: cli_seed.or(c.seed).unwrap_or(DEFAULT_SEED),
        }
    }

    fn nbhd(&self, s: &Scale) -> Result<NeighborhoodSpec, LabError> {
        NeighborhoodSpec::ball(
            s.rho.clone().unwrap_or_else(|| self.rho.clone()),
            s.eps.clone().unwrap_or_else(|| self.eps.clone()),
        )
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let out = Out::new(cli.json);
    match run(&cli, &out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = exit_code(&e);
            out.error(&e, code);
            ExitCode::from(code)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let lab = e
        .downcast_ref::<LabError>()
        .or_else(|| match e.downcast_ref::<NetsError>() {
            Some(NetsError::Lab(l)) => Some(l),
            _ => None,
        });
    if matches!(lab, Some(LabError::Borderline { .. })) {
        return BORDERLINE;
    }
    if matches!(e.downcast_ref::<ClassifyError>(), Some(ClassifyError::InternalInconsistency(_)))
        || matches!(e.downcast_ref::<NetsError>(), Some(NetsError::RowDivergent(_)))
    {
        return INCONSISTENT;
    }
    USAGE
}

fn run(cli: &Cli, out: &Out) -> Result<u8> {
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Config::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => Config::default(),
    };
    if let Some(n) = cli.threads.or(config.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let d = Defaults::new(&config, cli.seed);
    match &cli.command {
        Command::Classify { expr, mode, witness } => classify(out, expr, *mode, *witness),
        Command::Dual { expr } => {
            let g = parse(expr)?;
            match dual(&g) {
                Ok(h) => {
                    let h = normalize(&h);
                    out.emit("dual", &json!({"group": normalize(&g), "dual": h}), || h.to_string());
                    Ok(OK)
                }
                Err(e @ DualityError::DualUnrepresentable(_)) => {
                    out.emit("dual", &json!({"group": normalize(&g), "dual": null, "reason": e.to_string()}), || {
                        e.to_string()
                    });
                    Ok(NO)
                }
            }
        }
        Command::Structure { expr } => {
            let r = structure::flags(&parse(expr)?);
            out.emit("structure", &r, || output::structure_text(&r));
            Ok(OK)
        }
        Command::Witness { expr } => {
            let g = parse(expr)?;
            match witness_recipe(&g) {
                Ok(plan) => {
                    out.emit("witness", &json!({"group": normalize(&g), "answer": true, "plan": plan}), || {
                        output::plan_text(&plan)
                    });
                    Ok(OK)
                }
                Err(e @ ClassifyError::NotApproximable(_)) => {
                    out.emit("witness", &json!({"group": normalize(&g), "answer": false, "reason": e.to_string()}), || {
                        e.to_string()
                    });
                    Ok(NO)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Lab(cmd) => lab(out, cmd, &d),
        Command::Nets(NetsCommand::DemoCorollary { scale, imax }) => {
            let nb = d.nbhd(scale)?;
            let r = demo_corollary(&rho_of(&nb), &nb.epsilon, imax.unwrap_or(d.imax))?;
            out.emit("demo", &r, || output::demo_text(&r));
            Ok(if r.success { OK } else { NO })
        }
        Command::Selftest { only } => {
            let results = match only {
                Some(id @ 1..=9) => {
                    let all = acceptance::CRITERIA;
                    vec![match id {
                        2 => acceptance::numeral_implies_integral_seeded(d.seed),
                        3 => acceptance::dual_involution_seeded(d.seed),
                        _ => all[*id as usize - 1](),
                    }]
                }
                Some(id) => bail!("no check numbered {id}; checks are 1 to 9"),
                None => acceptance::run_all_seeded(d.seed),
            };
            let passed = results.iter().all(|r| r.passed);
            out.emit("selftest", &json!({"seed": d.seed, "passed": passed, "criteria": results}), || {
                output::selftest_text(&results)
            });
            Ok(if passed { OK } else { INCONSISTENT })
        }
    }
}

fn rho_of(nb: &NeighborhoodSpec) -> Q {
    match &nb.k {
        chabauty_core::lab::CompactSet::Ball(r) => r.clone(),
        chabauty_core::lab::CompactSet::Finite(_) => unreachable!("balls only"),
    }
}

fn classify(out: &Out, expr: &str, mode: Mode, witness: bool) -> Result<u8> {
    let g = parse(expr)?;
    let mut v = match mode {
        Mode::Integral => classify_integral(&g),
        Mode::Numeral => classify_numeral(&g),
        Mode::CompactFree => classify_compact_free(&g)?,
    };
    if witness && v.answer {
        v = v.with_plan(witness_recipe(&g)?);
    }
    out.emit("verdict", &v, || output::verdict_text(&normalize(&g), &v));
    Ok(if v.answer { OK } else { NO })
}

fn concrete(expr: &str) -> Result<ConcreteGroup> {
    Ok(ConcreteGroup::from_expr(&parse(expr)?)?)
}

fn sequence(group: &str, seq: &str) -> Result<SubgroupSequence> {
    Ok(SubgroupSequence::builtin(seq, &concrete(group)?)?)
}

fn lab(out: &Out, cmd: &LabCommand, d: &Defaults) -> Result<u8> {
    match cmd {
        LabCommand::Limit {
            group,
            seq,
            target,
            scale,
            nmax,
            trivial_report,
        } => {
            let s = sequence(group, seq)?;
            let g = s.group();
            let t = match target {
                Target::Full => ClosedSubgroupRep::whole(g),
                Target::Trivial => ClosedSubgroupRep::trivial(g),
                Target::Expected => s
                    .expected_limit()
                    .ok_or_else(|| anyhow!("{} has no known limit; pass --target full or trivial", s.name()))?,
            };
            let nb = d.nbhd(scale)?;
            let n_max = nmax.unwrap_or(d.nmax);
            let r = limit_threshold(&s, &t, &nb, n_max)?;
            let code = if r.stable { OK } else { NO };
            if *trivial_report {
                let tr = trivial_limit_check(&s, &nb, n_max)?;
                out.emit("trivial-limit", &json!({"limit": r, "trivialLimit": tr}), || {
                    format!("{}\n{}", output::limit_text(&r), output::trivial_text(&tr))
                });
            } else {
                out.emit("limit", &r, || output::limit_text(&r));
            }
            Ok(code)
        }
        LabCommand::Probe {
            group,
            scale,
            denom_bound,
        } => {
            let g = concrete(group)?;
            let nb = d.nbhd(scale)?;
            if g.d == 2 && g.dim() == 2 {
                let c = independence_obstruction(&nb.epsilon)?;
                out.emit("independence", &c, || {
                    format!(
                        "no cyclic subgroup of R^2 lies near both axes at eps = {}: det >= {} > 0",
                        c.epsilon, c.determinant_bound
                    )
                });
                return Ok(NO);
            }
            if g.d != 1 || g.t != 0 || g.z != 0 {
                bail!("probe needs R x F with F finite, or R^2; got {g}");
            }
            let r = probe_integral(&g.moduli, &rho_of(&nb), &nb.epsilon, denom_bound.unwrap_or(d.denom_bound))?;
            let found = matches!(r, ProbeResult::Witness { .. });
            out.emit("probe", &json!({"group": g.to_string(), "neighborhood": nb, "probe": r}), || match &r {
                ProbeResult::Witness { a, f } => format!("witness: Z·({a}, {f:?}) in {g}"),
                ProbeResult::Exhausted => format!("no cyclic witness in {g} up to the denominator bound"),
            });
            Ok(if found { OK } else { NO })
        }
        LabCommand::Duality {
            finite,
            group,
            seq,
            scale,
            nmax,
        } => {
            if let Some(f) = finite {
                let g = concrete(f)?;
                let r = finite_duality_report(&g)?;
                out.emit("finite-duality", &r, || output::finite_duality_text(&r));
                return Ok(if r.passed() { OK } else { INCONSISTENT });
            }
            let (Some(group), Some(seq)) = (group, seq) else {
                bail!("pass --finite, or --group with --seq");
            };
            let s = sequence(group, seq)?;
            let t = s
                .expected_limit()
                .ok_or_else(|| anyhow!("{} has no known limit", s.name()))?;
            let nb = d.nbhd(scale)?;
            let r = duality_limit_consistency(&s, &t, &nb, &nb, nmax.unwrap_or(d.nmax))?;
            out.emit("duality", &r, || {
                format!(
                    "{}\n{}\nconsistent: {}",
                    output::limit_text(&r.primal),
                    output::limit_text(&r.dual),
                    r.consistent
                )
            });
            Ok(if r.consistent { OK } else { INCONSISTENT })
        }
    }
}
