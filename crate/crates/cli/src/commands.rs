use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldcb_core::election::{winners, weighted_majority_graph};
use ldcb_core::gadgets::{
    gen_borda_gadget, gen_kapproval_maxdisp_priced_gadget, gen_kapproval_swap_gadget, parse_and_validate_3b2,
    realize_wmg, witness_from_assignment, GadgetInstance, Reduction, WmgTarget,
};
use ldcb_core::instance::{verify, BriberyInstance, BriberyOutcome, Witness};
use ldcb_core::metrics::{ball, distance, Metric};
use ldcb_core::oracle::{solve_exhaustive, OracleBudget};
use ldcb_core::solvers::{self, Route};
use ldcb_core::{AlternativeSet, Error, Preference};

use crate::format::{parse_instance, parse_pref, render_instance, render_pref};
use crate::{CliError, EXIT_NO, EXIT_YES};

#[derive(Debug, Parser)]
#[command(name = "ldcb", version, about = "Local distance-constrained bribery")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the winners of an instance's profile.
    Winner {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Distance between two rankings such as "a>b>c".
    Distance {
        #[arg(long)]
        metric: Metric,
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
    },
    /// Every ranking within a radius.
    Ball {
        #[arg(long)]
        metric: Metric,
        #[arg(long)]
        pref: String,
        #[arg(long)]
        radius: u64,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Decide an instance with a polynomial solver, or the exact search.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
        solver: SolverChoice,
        /// Allow the exponential exact search when no polynomial solver applies.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Exact search on any instance.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        no_prune: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Build a bribery instance from a (3,B2)-SAT formula.
    GenGadget {
        #[command(flatten)]
        gadget: GadgetArgs,
        /// Instance file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Name map; defaults to `<out>.names` when `--out` is given.
        #[arg(long)]
        names: Option<PathBuf>,
    },
    /// Apply a truth assignment to a regenerated gadget.
    Witness {
        #[command(flatten)]
        gadget: GadgetArgs,
        /// Signed DIMACS literals, e.g. "1 -2 3"; a trailing 0 is ignored.
        #[arg(long, allow_hyphen_values = true)]
        assignment: String,
    },
    /// Check a proposed final profile (`pref:` lines) against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Profile whose majority margins on b1..bl equal a target matrix.
    RealizeWmg {
        /// Rows separated by `;`, entries by spaces or commas.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Filler count; the smallest workable one when absent.
        #[arg(long)]
        fillers: Option<usize>,
    },
    /// Print the plurality or veto flow network for one score guess.
    DumpFlow {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        guess: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Auto,
    Plurality,
    Veto,
    KappSmall,
    KappMaxdisp,
    SbucklinSmall,
    SbucklinMaxdisp,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Overrides ORACLE_MAX_NODES.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Overrides ORACLE_TIME_S.
    #[arg(long)]
    time_s: Option<u64>,
    #[arg(long)]
    max_ball: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GadgetArgs {
    #[arg(long)]
    reduction: Reduction,
    /// DIMACS file of a (3,B2)-SAT formula.
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Copy parameter (kapp-swap) or filler count (the others).
    #[arg(long)]
    pad: Option<usize>,
    /// Borda only.
    #[arg(long, default_value_t = Metric::Swap)]
    metric: Metric,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path) -> Result<BriberyInstance, CliError> {
    parse_instance(&read(path)?).map_err(|e| match e {
        CliError::Parse { line, msg } => CliError::Parse { line, msg: format!("{}: {msg}", path.display()) },
        e => e,
    })
}

fn env_u64(name: &str) -> Result<Option<u64>, CliError> {
    match std::env::var(name) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::Usage(format!("{name} must be an integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

impl LimitArgs {
    fn budget(&self, prune: bool) -> Result<OracleBudget, CliError> {
        let mut b = OracleBudget { prune, ..OracleBudget::default() };
        if let Some(n) = self.max_nodes.or(env_u64("ORACLE_MAX_NODES")?) {
            b.max_nodes = n;
        }
        if let Some(s) = self.time_s.or(env_u64("ORACLE_TIME_S")?) {
            b.time_limit_ms = s.saturating_mul(1000);
        }
        if let Some(m) = self.max_ball {
            b.max_ball = m;
        }
        Ok(b)
    }
}

/// Alternatives in the order they appear in `text`.
fn alts_of(text: &str) -> Result<AlternativeSet, CliError> {
    Ok(AlternativeSet::new(text.split('>').map(str::trim))?)
}

fn pref_arg(alts: &AlternativeSet, text: &str) -> Result<Preference, CliError> {
    parse_pref(alts, text).map_err(CliError::Usage)
}

pub fn route_name(r: &Route) -> &'static str {
    match r {
        Route::Trivial => "trivial",
        Route::Plurality => "plurality",
        Route::Veto => "veto",
        Route::KApprovalSmallRadius => "kapproval-small-radius",
        Route::KApprovalMaxDisp => "kapproval-maxdisp",
        Route::SBucklinSmallRadius => "sbucklin-small-radius",
        Route::SBucklinMaxDisp => "sbucklin-maxdisp",
        Route::Hard(_) => "hard",
    }
}

fn print_witness(out: &mut dyn Write, inst: &BriberyInstance, w: &Witness) -> std::io::Result<()> {
    let alts = inst.profile.alternatives();
    writeln!(out, "cost: {}", w.cost)?;
    let bribed: Vec<String> = w.bribed.iter().map(|i| (i + 1).to_string()).collect();
    writeln!(out, "bribed: {}", bribed.join(" "))?;
    for p in w.profile.prefs() {
        writeln!(out, "pref: {}", render_pref(alts, p))?;
    }
    Ok(())
}

fn print_outcome(out: &mut dyn Write, inst: &BriberyInstance, o: &BriberyOutcome) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Io { path: "stdout".into(), source: e };
    match o.witness() {
        Some(w) => {
            writeln!(out, "decision: YES").map_err(io)?;
            print_witness(out, inst, w).map_err(io)?;
            Ok(EXIT_YES)
        }
        None => {
            writeln!(out, "decision: NO").map_err(io)?;
            Ok(EXIT_NO)
        }
    }
}

fn gadget(args: &GadgetArgs) -> Result<GadgetInstance, CliError> {
    let sat = parse_and_validate_3b2(&read(&args.cnf)?)?;
    Ok(match args.reduction {
        Reduction::KApprovalSwap => gen_kapproval_swap_gadget(&sat, args.pad, args.k)?,
        Reduction::KApprovalMaxDispPriced => gen_kapproval_maxdisp_priced_gadget(&sat, args.k, args.pad)?,
        Reduction::Borda => gen_borda_gadget(&sat, args.metric, args.pad)?,
    })
}

fn parse_assignment(text: &str, vars: usize) -> Result<Vec<bool>, CliError> {
    let mut a: Vec<Option<bool>> = vec![None; vars];
    for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty() && *t != "v") {
        let l: i64 = tok.parse().map_err(|_| CliError::Usage(format!("bad literal `{tok}` in assignment")))?;
        if l == 0 {
            continue;
        }
        let v = l.unsigned_abs() as usize;
        if v > vars {
            return Err(CliError::Usage(format!("assignment mentions x{v}, formula has {vars} variables")));
        }
        if a[v - 1].replace(l > 0).is_some_and(|old| old != (l > 0)) {
            return Err(CliError::Usage(format!("x{v} assigned both ways")));
        }
    }
    a.iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| CliError::Usage(format!("assignment leaves x{} unset", i + 1))))
        .collect()
}

fn parse_matrix(text: &str) -> Result<(usize, Vec<i64>), CliError> {
    let rows: Vec<Vec<i64>> = text
        .split(';')
        .map(|r| {
            r.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad margin `{t}`"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let l = rows.len();
    if rows.iter().any(|r| r.len() != l) {
        return Err(CliError::Usage(format!("margin matrix must be square ({l} rows)")));
    }
    Ok((l, rows.concat()))
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Io { path: "stdout".into(), source: e };
    match cli.command {
        Command::Winner { instance } => {
            let inst = load(&instance)?;
            let alts = inst.profile.alternatives();
            let w = winners(&inst.profile, &inst.rule)?;
            let names: Vec<&str> = w.iter().map(|&a| alts.name(a)).collect();
            writeln!(out, "winners: {}", names.join(" ")).map_err(io)?;
            writeln!(out, "unique: {}", if w.len() == 1 { "yes" } else { "no" }).map_err(io)?;
            Ok(EXIT_YES)
        }
        Command::Distance { metric, p1, p2 } => {
            let alts = alts_of(&p1)?;
            let d = distance(metric, &pref_arg(&alts, &p1)?, &pref_arg(&alts, &p2)?)?;
            writeln!(out, "{d}").map_err(io)?;
            Ok(EXIT_YES)
        }
        Command::Ball { metric, pref, radius, limit } => {
            let alts = alts_of(&pref)?;
            let members = ball(&pref_arg(&alts, &pref)?, metric, radius, limit)?;
            for q in &members {
                writeln!(out, "pref: {}", render_pref(&alts, q)).map_err(io)?;
            }
            writeln!(out, "size: {}", members.len()).map_err(io)?;
            Ok(EXIT_YES)
        }
        Command::Solve { instance, solver, oracle, limits } => {
            let inst = load(&instance)?;
            let (name, outcome) = match solver {
                SolverChoice::Auto => match solvers::route(&inst) {
                    Route::Hard(_) if oracle => ("oracle", solve_exhaustive(&inst, &limits.budget(true)?)?),
                    Route::Hard(why) => return Err(CliError::Usage(why)),
                    r => (route_name(&r), solvers::solve_auto(&inst)?),
                },
                SolverChoice::Plurality => ("plurality", solvers::solve_plurality(&inst)?),
                SolverChoice::Veto => ("veto", solvers::solve_veto(&inst)?),
                SolverChoice::KappSmall => ("kapproval-small-radius", solvers::solve_kapproval_small_radius(&inst)?),
                SolverChoice::KappMaxdisp => ("kapproval-maxdisp", solvers::solve_kapproval_maxdisp(&inst)?),
                SolverChoice::SbucklinSmall => ("sbucklin-small-radius", solvers::solve_sbucklin_small_radius(&inst)?),
                SolverChoice::SbucklinMaxdisp => ("sbucklin-maxdisp", solvers::solve_sbucklin_maxdisp(&inst)?),
            };
            writeln!(out, "solver: {name}").map_err(io)?;
            print_outcome(out, &inst, &outcome)
        }
        Command::Oracle { instance, no_prune, limits } => {
            let inst = load(&instance)?;
            let outcome = solve_exhaustive(&inst, &limits.budget(!no_prune)?)?;
            writeln!(out, "solver: oracle").map_err(io)?;
            print_outcome(out, &inst, &outcome)
        }
        Command::GenGadget { gadget: args, out: path, names } => {
            let g = gadget(&args)?;
            let text = render_instance(&g.instance);
            let names = names.or_else(|| path.as_ref().map(|p| PathBuf::from(format!("{}.names", p.display()))));
            match &path {
                Some(p) => write_file(p, &text)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            if let Some(n) = names {
                write_file(&n, &g.name_map())?;
            }
            Ok(EXIT_YES)
        }
        Command::Witness { gadget: args, assignment } => {
            let g = gadget(&args)?;
            let a = parse_assignment(&assignment, g.source_vars)?;
            let w = witness_from_assignment(&g, &a)?;
            if !w.satisfies {
                writeln!(out, "satisfies: no").map_err(io)?;
                writeln!(out, "winner-guarantee: void").map_err(io)?;
                for p in &w.prefs {
                    writeln!(out, "pref: {}", render_pref(g.instance.profile.alternatives(), p)).map_err(io)?;
                }
                return Ok(EXIT_NO);
            }
            let checked = verify(&g.instance, &w.prefs)?;
            writeln!(out, "satisfies: yes").map_err(io)?;
            writeln!(out, "decision: YES").map_err(io)?;
            print_witness(out, &g.instance, &checked).map_err(io)?;
            Ok(EXIT_YES)
        }
        Command::Verify { instance, witness } => {
            let inst = load(&instance)?;
            let alts = inst.profile.alternatives();
            let text = read(&witness)?;
            let prefs = text
                .lines()
                .enumerate()
                .filter_map(|(i, l)| l.trim().strip_prefix("pref:").map(|p| (i + 1, p)))
                .map(|(line, p)| parse_pref(alts, p).map_err(|msg| CliError::Parse { line, msg }))
                .collect::<Result<Vec<_>, _>>()?;
            match verify(&inst, &prefs) {
                Ok(w) => {
                    writeln!(out, "valid: yes").map_err(io)?;
                    print_witness(out, &inst, &w).map_err(io)?;
                    Ok(EXIT_YES)
                }
                Err(e @ (Error::InvalidInstance(_) | Error::LengthMismatch { .. })) => {
                    writeln!(out, "valid: no").map_err(io)?;
                    writeln!(out, "reason: {e}").map_err(io)?;
                    Ok(EXIT_NO)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::RealizeWmg { z, k, fillers } => {
            let (core, z) = parse_matrix(&z)?;
            let mut target = WmgTarget { core, fillers: 0, z, k };
            target.fillers = fillers.unwrap_or_else(|| target.min_fillers());
            let profile = realize_wmg(&target)?;
            let alts = profile.alternatives();
            writeln!(out, "alternatives: {}", alts.names().join(" ")).map_err(io)?;
            for p in profile.prefs() {
                writeln!(out, "pref: {}", render_pref(alts, p)).map_err(io)?;
            }
            let g = weighted_majority_graph(&profile);
            for a in 0..core {
                let row: Vec<String> = (0..core).map(|b| g.margin(a, b).to_string()).collect();
                writeln!(out, "margins: {}", row.join(" ")).map_err(io)?;
            }
            Ok(EXIT_YES)
        }
        Command::DumpFlow { instance, guess } => {
            let inst = load(&instance)?;
            let net = match solvers::as_k_approval(&inst.rule, inst.m()) {
                Some(1) => solvers::plurality_network(&inst, guess)?.0,
                Some(k) if k + 1 == inst.m() => solvers::veto_network(&inst, guess)?.0,
                _ => return Err(CliError::Usage(format!("dump-flow supports plurality and veto, not {}", inst.rule))),
            };
            out.write_all(net.dump().as_bytes()).map_err(io)?;
            Ok(EXIT_YES)
        }
    }
}
