use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use genus_atsp::harness::{
    audit_cuts, brute_force_atsp, generate, AuditMode, CostModel, GenMode, GenSpec, ORACLE_MAX_VERTICES,
};
use genus_atsp::heldkarp_lp::{conservation_residual, normalize_metric, separate_subtour, symmetrize, LpConfig};
use genus_atsp::surface_graph::{build_embedding, format, EmbeddedDigraph};
use genus_atsp::thin_forest::THIN_ALPHA;
use genus_atsp::tour::{solve, Solution, SolveConfig, DEFAULT_DP_CAP};

#[derive(Parser)]
#[command(name = "genus-atsp", version, about = "ATSP approximation on surface-embedded digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an ATSPE-1 instance and print the tour certificate.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Print audit lines and the LP solution to stderr; fail unless certified.
        #[arg(long)]
        audit: bool,
        /// Emit the certificate as JSON.
        #[arg(long)]
        json: bool,
        /// Also report the induced Hamiltonian order on the metric closure.
        #[arg(long)]
        as_permutation: bool,
    },
    /// Generate a random embedded instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.5)]
        density: f64,
        /// planar | random-rotation[:p] | add-crosscaps:k
        #[arg(long, default_value = "planar")]
        mode: String,
        /// uniform | skew:<lambda>
        #[arg(long, default_value = "uniform")]
        costs: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact optimum of a small instance.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Solve and check every certificate; exit status 0 iff all checks pass.
    Audit {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
}

#[derive(Args)]
struct SolveOpts {
    #[arg(long, default_value_t = DEFAULT_DP_CAP)]
    dp_cap: usize,
    /// Seed for sampled cut audits.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    lp_tol: f64,
    #[arg(long)]
    lp_max_rounds: Option<usize>,
    /// exhaustive | sample:<k> | off
    #[arg(long)]
    thin_audit: Option<String>,
}

impl SolveOpts {
    fn config(&self) -> Result<SolveConfig> {
        let thin_audit = self.thin_audit.as_deref().map(str::parse::<AuditMode>).transpose()?;
        Ok(SolveConfig {
            lp: LpConfig { tol: self.lp_tol, max_rounds: self.lp_max_rounds },
            dp_cap: self.dp_cap,
            thin_audit,
            seed: self.seed,
            ..SolveConfig::default()
        })
    }
}

fn load(path: &Path) -> Result<EmbeddedDigraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    build_embedding(&text).with_context(|| format!("loading {}", path.display()))
}

fn solution_json(g: &EmbeddedDigraph, sol: &Solution, as_permutation: bool) -> Result<Value> {
    let mut value = serde_json::to_value(&sol.certificate)?;
    value["tour"] = serde_json::to_value(&sol.tour)?;
    if as_permutation {
        value["permutation"] = json!(sol.permutation(g));
    }
    Ok(value)
}

fn run_solve(file: &Path, opts: &SolveOpts, audit: bool, as_json: bool, as_permutation: bool) -> Result<ExitCode> {
    let g = load(file)?;
    let sol = solve(&g, &opts.config()?)?;
    if audit {
        for line in &sol.audit {
            eprintln!("{line}");
        }
        eprint!("{}", lp_dump(&sol.x));
    }
    if as_json {
        println!("{}", serde_json::to_string_pretty(&solution_json(&g, &sol, as_permutation)?)?);
    } else {
        let c = &sol.certificate;
        println!("tour_cost {}", c.tour_cost);
        println!("lp {}", c.lp);
        match c.ratio_vs_lp {
            Some(r) => println!("ratio_vs_lp {r}"),
            None => println!("ratio_vs_lp undefined"),
        }
        println!("components k={} k'={}", c.forest.k, c.walks.k_prime);
        println!("certified {}", c.certified);
        let arcs: Vec<String> = sol.tour.arcs.iter().map(ToString::to_string).collect();
        println!("tour {} : {}", sol.tour.start, arcs.join(" "));
        if as_permutation {
            let order: Vec<String> = sol.permutation(&g).iter().map(ToString::to_string).collect();
            println!("permutation {}", order.join(" "));
        }
    }
    Ok(if audit && !sol.certificate.certified { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn lp_dump(x: &[f64]) -> String {
    x.iter().enumerate().map(|(a, v)| format!("x {a} {v:?}\n")).collect()
}

fn run_gen(n: usize, density: f64, mode: &str, costs: &str, seed: u64, output: Option<&Path>) -> Result<()> {
    let spec = GenSpec { n, density, mode: mode.parse::<GenMode>()?, costs: costs.parse::<CostModel>()?, seed };
    let g = generate(&spec)?;
    let mut text = format!(
        "# gen n={n} density={density} mode={} costs={} seed={seed} euler_genus={}\n",
        spec.mode,
        spec.costs,
        g.embedding().euler_genus()
    );
    text.push_str(&format::write(&g));
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_oracle(file: &Path, as_json: bool) -> Result<()> {
    let g = load(file)?;
    let r = brute_force_atsp(&g)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&json!({ "opt": r.opt, "order": r.order }))?);
    } else {
        let order: Vec<String> = r.order.iter().map(ToString::to_string).collect();
        println!("opt {}", r.opt);
        println!("order {}", order.join(" "));
    }
    Ok(())
}

struct Checks {
    failed: usize,
}

impl Checks {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        eprintln!("{} {name} {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed += 1;
        }
    }
}

fn run_audit(file: &Path, opts: &SolveOpts) -> Result<ExitCode> {
    let g = load(file)?;
    let config = opts.config()?;
    let mut checks = Checks { failed: 0 };
    let sol = match solve(&g, &config) {
        Ok(sol) => sol,
        Err(e) => {
            checks.record("pipeline", false, e.to_string());
            return Ok(ExitCode::FAILURE);
        }
    };
    for line in &sol.audit {
        eprintln!("{line}");
    }
    let c = &sol.certificate;
    let h = normalize_metric(&g);
    let residual = conservation_residual(&h, &sol.x);
    checks.record("lp-conservation", residual <= config.lp.tol, format!("residual={residual}"));
    let violated = separate_subtour(&h, &sol.x, config.lp.tol);
    checks.record("lp-cuts", violated.is_none(), format!("violated={}", violated.is_some()));

    let z = symmetrize(&h, &sol.x);
    let n = g.num_vertices();
    let mode = match config.thin_audit.unwrap_or_else(|| AuditMode::default_for(n)) {
        AuditMode::Sample { cuts, .. } => AuditMode::Sample { cuts, seed: config.seed },
        m => m,
    };
    let cuts = audit_cuts(g.embedding(), &[], &z.z, mode)?;
    checks.record(
        "sym-cuts",
        cuts.min_weight >= 2.0 - 1e-6,
        format!("min_weight={} audited={}", cuts.min_weight, cuts.cuts_audited),
    );

    checks.record(
        "forest-components",
        c.forest.k <= c.euler_genus.max(1),
        format!("k={} euler_genus={}", c.forest.k, c.euler_genus),
    );
    checks.record("forest-cost", c.forest.s_hat <= THIN_ALPHA * (1.0 + 1e-6), format!("s_hat={}", c.forest.s_hat));
    if let Some(a) = c.forest.alpha_hat {
        checks.record("forest-thinness", a <= THIN_ALPHA * (1.0 + 1e-6), format!("alpha_hat={a}"));
    }
    checks.record(
        "walk-cover",
        c.walks.cost <= c.circulation.bound + c.circulation.slack + 1e-6 * (1.0 + c.circulation.bound),
        format!("cost={} bound={} slack={}", c.walks.cost, c.circulation.bound, c.circulation.slack),
    );
    let valid = sol.tour.validate(&g);
    checks.record("tour-valid", valid.is_ok(), valid.err().unwrap_or_default());
    checks.record(
        "tour-bound",
        c.tour_cost <= c.bound + 1e-6 * (1.0 + c.bound),
        format!("cost={} bound={}", c.tour_cost, c.bound),
    );
    checks.record("rep-solver", c.rep_solver == "exact-dp", c.rep_solver.clone());
    if n <= ORACLE_MAX_VERTICES {
        let opt = brute_force_atsp(&g)?.opt;
        checks.record("lp-below-opt", c.lp <= opt + 1e-6 * (1.0 + opt), format!("lp={} opt={opt}", c.lp));
    }
    Ok(if checks.failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { file, opts, audit, json, as_permutation } => {
            run_solve(&file, &opts, audit, json, as_permutation)
        }
        Command::Gen { n, density, mode, costs, seed, output } => {
            run_gen(n, density, &mode, &costs, seed, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { file, json } => {
            run_oracle(&file, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit { file, opts } => run_audit(&file, &opts),
    }
}
