//! Batch driver behind the `kl` binary.
//!
//! [`run`] parses an argument vector, dispatches to `kl-core` and returns
//! the exit code together with everything that would be written to stdout
//! and stderr, so the binary and the tests share one code path.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kl_core::arith::{parse_rational, rational_string};
use kl_core::transference::{cover_scale, product_bound};
use kl_core::{
    best_approximations, choose_nu, constants, eta_search, omega, product_min, psi, regularity_profile, solve_inhom,
    verify_minkowski_chain, verify_theorem1, BestApproxChain, Error, ErrorClass, ExactReal, FormSystem, Settings,
    VerifyOptions,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "kl",
    version,
    about = "Best approximations and inhomogeneous transference bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Matrix file: {"m": .., "n": .., "entries": [[..], ..]}, row j = form j.
    #[arg(long, global = true)]
    matrix: Option<PathBuf>,
    /// Reported enclosures have width at most 2^-precision.
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,
    /// Cap on lattice points per enumeration; KL_BUDGET overrides.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for target sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// psi(t) with its minimizer.
    Psi {
        #[arg(long)]
        t: u64,
        /// Target coordinate; repeat once per form. Defaults to zero.
        #[arg(long = "alpha", allow_hyphen_values = true)]
        alpha: Vec<String>,
        /// Evaluate the transposed system.
        #[arg(long)]
        transposed: bool,
    },
    /// Best-approximation records up to T_max.
    Chain {
        #[arg(long)]
        tmax: u64,
        #[arg(long)]
        transposed: bool,
    },
    /// Normalized profile t^{m/n} psi(t) over t = from, from+every, ..., to.
    Profile {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 1)]
        every: u64,
        #[arg(long)]
        transposed: bool,
        /// Emit t,lo,hi rows instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Windowed minimum of the inhomogeneous product.
    Product {
        #[arg(long, num_args = 2, value_names = ["X_MIN", "X_MAX"])]
        window: Vec<u64>,
        #[arg(long = "alpha", allow_hyphen_values = true)]
        alpha: Vec<String>,
    },
    /// Grid search for anchors over the chain of the transposed system.
    Eta {
        /// Records of the transposed system are searched up to this bound.
        #[arg(long)]
        tmax: u64,
        /// Grid of 2^grid_bits cell centers per coordinate.
        #[arg(long, default_value_t = 10)]
        grid_bits: u32,
        /// Number of candidates reported.
        #[arg(long, default_value_t = 5)]
        top_k: usize,
    },
    /// Exact transference constants.
    Constants {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: String,
        /// Also report omega and the product bound at this delta.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Constructive inhomogeneous solution for one target.
    Solve {
        /// Target coordinates, one per form.
        #[arg(long = "alpha", allow_hyphen_values = true)]
        alpha: Vec<String>,
        /// Picks the record pair bracketing this bound.
        #[arg(long)]
        x_target: u64,
        #[command(flatten)]
        anchor: Anchor,
    },
    /// Product bound over sampled targets, with a solver witness for each.
    Verify {
        /// Number of sampled targets.
        #[arg(long, default_value_t = 10)]
        alphas: usize,
        /// Put the zero target first.
        #[arg(long)]
        with_zero: bool,
        /// Picks the record pair bracketing this bound; defaults to the window end.
        #[arg(long)]
        x_target: Option<u64>,
        #[command(flatten)]
        anchor: Anchor,
    },
}

/// How eta, epsilon and delta are obtained.
#[derive(Args, Debug)]
struct Anchor {
    /// Records of the transposed system are searched up to this bound.
    #[arg(long, default_value_t = 2000)]
    tmax: u64,
    /// Grid resolution for the default anchor.
    #[arg(long, default_value_t = 10)]
    grid_bits: u32,
    /// Anchor coordinates; defaults to the best grid point.
    #[arg(long = "eta", allow_hyphen_values = true)]
    eta: Vec<String>,
    /// Margin; defaults to the certified margin of the anchor.
    #[arg(long)]
    eps: Option<String>,
    /// Product level; defaults to the windowed product at the anchor.
    #[arg(long)]
    delta: Option<String>,
    /// Window for delta and the per-target minima.
    #[arg(long, num_args = 2, value_names = ["X_MIN", "X_MAX"], default_values_t = [1, 500])]
    window: Vec<u64>,
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// Runs one invocation; `argv` starts with the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("kl")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let mut out = diagnostic(2, "usage", e.kind().to_string().as_str(), None);
                out.stderr = format!("{text}{}", out.stderr);
                out
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(doc) => match &cli.global.output {
            Some(path) => match std::fs::write(path, &doc) {
                Ok(()) => Outcome {
                    code: 0,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => diagnostic(2, "io", &format!("cannot write {}: {e}", path.display()), None),
            },
            None => Outcome {
                code: 0,
                stdout: doc,
                stderr: String::new(),
            },
        },
        Err(Failure::Usage(msg)) => diagnostic(2, "usage", &msg, None),
        Err(Failure::Core(e)) => {
            let code = match e.class() {
                ErrorClass::Usage => 2,
                ErrorClass::Mathematical => 1,
                ErrorClass::Resource => 3,
            };
            let witnesses = match &e {
                Error::PrecisionCap {
                    witnesses: Some((a, b)),
                    ..
                } => Some(json!([a, b])),
                _ => None,
            };
            diagnostic(code, e.kind(), &e.to_string(), witnesses)
        }
    }
}

fn diagnostic(code: i32, kind: &str, message: &str, witnesses: Option<Value>) -> Outcome {
    let mut doc = json!({ "error": kind, "message": message, "exit_code": code });
    if let Some(w) = witnesses {
        doc["witnesses"] = w;
    }
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("{doc}\n"),
    }
}

fn settings(g: &Global) -> CliResult<Settings> {
    let budget = match std::env::var("KL_BUDGET") {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(b) => b,
            Err(_) => return usage(format!("KL_BUDGET is not an integer: `{v}`")),
        },
        Err(_) => g.budget,
    };
    if g.precision < 32 {
        return usage("--precision must be at least 32");
    }
    if budget < 10_000 {
        return usage("budget must be at least 10000");
    }
    Ok(Settings {
        precision_bits: g.precision,
        budget,
        ..Settings::default()
    })
}

fn load_matrix(g: &Global) -> CliResult<FormSystem> {
    let Some(path) = &g.matrix else {
        return usage("--matrix is required for this subcommand");
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", path.display())),
    };
    Ok(FormSystem::from_json(&text)?)
}

fn reals(specs: &[String], len: usize, what: &str) -> CliResult<Vec<ExactReal>> {
    if specs.is_empty() {
        return Ok(vec![ExactReal::zero(); len]);
    }
    if specs.len() != len {
        return usage(format!("expected {len} {what} coordinates, got {}", specs.len()));
    }
    Ok(specs
        .iter()
        .map(|s| ExactReal::parse(s))
        .collect::<kl_core::Result<_>>()?)
}

fn rational(s: &str) -> CliResult<BigRational> {
    Ok(parse_rational(s)?)
}

fn window(w: &[u64]) -> (u64, u64) {
    (w[0], w[1])
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn chain_json(chain: &BestApproxChain, s: &Settings) -> CliResult<Value> {
    let minkowski = if chain.records.len() >= 2 {
        to_value(&verify_minkowski_chain(chain, s)?)
    } else {
        Value::Null
    };
    Ok(json!({
        "m": chain.system.m(),
        "n": chain.system.n(),
        "T_max": chain.t_max,
        "exhausted": chain.exhausted,
        "records": to_value(&chain.records),
        "minkowski": minkowski,
    }))
}

/// A shifted rank-1 lattice in `[0,1)^dim` with denominator `2^20`: point
/// `k` has coordinates `((k z_j + u_j) mod 2^20) / 2^20`, `z_j` odd.
pub fn sample_targets(seed: u64, count: usize, dim: usize) -> Vec<Vec<ExactReal>> {
    const DEN: u64 = 1 << 20;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..DEN / 2) * 2 + 1).collect();
    let u: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..DEN)).collect();
    (0..count as u64)
        .map(|k| {
            (0..dim)
                .map(|j| {
                    let num = (k.wrapping_mul(z[j]).wrapping_add(u[j])) % DEN;
                    ExactReal::from_rational(BigRational::new(num.into(), DEN.into()))
                })
                .collect()
        })
        .collect()
}

struct Anchored {
    chain_t: BestApproxChain,
    eta: Vec<ExactReal>,
    eps: BigRational,
    delta: Option<BigRational>,
    window: (u64, u64),
}

fn anchor(system: &FormSystem, a: &Anchor, s: &Settings) -> CliResult<Anchored> {
    let chain_t = best_approximations(&system.transposed(), a.tmax, s)?;
    let (eta, margin) = if a.eta.is_empty() {
        if chain_t.exhausted {
            return Err(Error::ChainExhausted.into());
        }
        let best = eta_search(&chain_t, a.grid_bits, 1, s)?.remove(0);
        (best.eta, best.margin)
    } else {
        let eta = reals(&a.eta, system.n(), "eta")?;
        let m = kl_core::eta_margin(&eta, &chain_t, s)?;
        (eta, m.value)
    };
    let eps = match &a.eps {
        Some(e) => rational(e)?,
        None => margin.lo().to_rational(),
    };
    let delta = a.delta.as_deref().map(rational).transpose()?;
    let w = window(&a.window);
    if w.0 == 0 || w.0 > w.1 {
        return Err(Error::EmptyWindow(w.0, w.1).into());
    }
    Ok(Anchored {
        chain_t,
        eta,
        eps,
        delta,
        window: w,
    })
}

fn execute(cli: &Cli) -> CliResult<String> {
    let g = &cli.global;
    let s = settings(g)?;
    let doc = match &cli.command {
        Command::Psi { t, alpha, transposed } => {
            let f = load_matrix(g)?;
            let f = if *transposed { f.transposed() } else { f };
            let a = reals(alpha, f.n(), "alpha")?;
            let p = psi(&f, &a, *t, &s)?;
            json!({
                "transposed": transposed,
                "alpha": alpha_strings(&a),
                "t": p.t,
                "value": to_value(&p.value),
                "witness": p.witness,
            })
        }
        Command::Chain { tmax, transposed } => {
            let f = load_matrix(g)?;
            let f = if *transposed { f.transposed() } else { f };
            let chain = best_approximations(&f, *tmax, &s)?;
            chain_json(&chain, &s)?
        }
        Command::Profile {
            from,
            to,
            every,
            transposed,
            csv,
        } => {
            if *every == 0 || *from == 0 || from > to {
                return usage("profile needs 1 <= from <= to and every >= 1");
            }
            let f = load_matrix(g)?;
            let f = if *transposed { f.transposed() } else { f };
            let ts: Vec<u64> = (*from..=*to).step_by(*every as usize).collect();
            let p = regularity_profile(&f, &ts, &s)?;
            if *csv {
                return Ok(p.to_csv());
            }
            to_value(&p)
        }
        Command::Product { window: w, alpha } => {
            let f = load_matrix(g)?;
            let a = reals(alpha, f.n(), "alpha")?;
            let (lo, hi) = window(w);
            let p = product_min(&f, &a, lo, hi, &s)?;
            let mut v = to_value(&p);
            v["alpha"] = json!(alpha_strings(&a));
            v
        }
        Command::Eta { tmax, grid_bits, top_k } => {
            let f = load_matrix(g)?;
            let chain_t = best_approximations(&f.transposed(), *tmax, &s)?;
            let top = eta_search(&chain_t, *grid_bits, *top_k, &s)?;
            json!({
                "T_max": tmax,
                "grid_bits": grid_bits,
                "records": chain_t.records.len(),
                "exhausted": chain_t.exhausted,
                "candidates": to_value(&top),
            })
        }
        Command::Constants { m, n, eps, delta } => {
            let eps = rational(eps)?;
            let c = constants(*m, *n, &eps)?;
            let mut v = to_value(&c);
            if let Some(dl) = delta {
                let dl = rational(dl)?;
                let w = omega(*m, *n, &eps, &dl)?;
                v["delta"] = json!(rational_string(&dl));
                v["omega"] = json!(rational_string(&w));
                v["scale"] = json!(rational_string(&cover_scale(&c.k, &w, c.d)));
                v["product_bound"] = json!(rational_string(&product_bound(&c, &dl)));
            }
            v
        }
        Command::Solve {
            alpha,
            x_target,
            anchor: a,
        } => {
            let f = load_matrix(g)?;
            let alpha = reals(alpha, f.n(), "alpha")?;
            let an = anchor(&f, a, &s)?;
            if an.chain_t.exhausted {
                return Err(Error::ChainExhausted.into());
            }
            let delta = match an.delta.clone() {
                Some(d) => d,
                None => product_min(&f, &an.eta, an.window.0, an.window.1, &s)?
                    .min_value
                    .hi()
                    .to_rational(),
            };
            let nu = choose_nu(&an.chain_t, *x_target, &an.eps, &delta, f.n(), f.m()).ok();
            let sol = solve_inhom(&f, &an.chain_t, &an.eps, &delta, &alpha, *x_target, &s)?;
            json!({
                "alpha": alpha_strings(&alpha),
                "eta": alpha_strings(&an.eta),
                "epsilon": rational_string(&an.eps),
                "delta": rational_string(&delta),
                "x_target": x_target,
                "nu": nu,
                "solution": to_value(&sol),
            })
        }
        Command::Verify {
            alphas,
            with_zero,
            x_target,
            anchor: a,
        } => {
            let f = load_matrix(g)?;
            let an = anchor(&f, a, &s)?;
            let mut targets = Vec::with_capacity(alphas + 1);
            if *with_zero {
                targets.push(vec![ExactReal::zero(); f.n()]);
            }
            targets.extend(sample_targets(g.seed, *alphas, f.n()));
            let opts = VerifyOptions {
                delta_override: an.delta.clone(),
                x_target: *x_target,
            };
            let rep = verify_theorem1(&f, &an.chain_t, &an.eta, &an.eps, &targets, an.window, &opts, &s)?;
            let mut v = to_value(&rep);
            v["seed"] = json!(g.seed);
            v
        }
    };
    Ok(pretty(&doc))
}

fn alpha_strings(a: &[ExactReal]) -> Vec<String> {
    a.iter().map(|x| x.source().to_string()).collect()
}
