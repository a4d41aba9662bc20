use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amcgrad::circuit::{read_d4, read_weights, smooth, smooth_to, validate, write_d4};
use amcgrad::dimacs::parse_dimacs;
use amcgrad::engine::check_structure;
use amcgrad::learn::{
    conditional_entropy, conditioned_hessian_row, em_conditionals, hessian_row, indecater_estimate,
    matrix_to_circuit, matrix_vec_to_circuit, mpe_gradient, BernoulliParams, BinaryMatrix, SampleBatch,
};
use amcgrad::oracle::{oracle_amc, oracle_grad, oracle_hessian};
use amcgrad::semiring::Prob;
use amcgrad::testgen::{random_ddnnf, star_product, DdnnfConfig};
use amcgrad::{
    variable_gradient, with_semiring, Algorithm, Circuit, Error, Formula, GateOptions, GradientVector, Labeling,
    Literal, Semiring, SemiringKind,
};
use amcgrad_bench::{run_suite, write_csv, BenchConfig};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod format;

use format::round_decimals;

#[derive(Parser)]
#[command(name = "amcgrad", version, about = "Algebraic model counting and its gradients over d-DNNF circuits")]
struct Cli {
    /// Significant digits for decimal output; 0 prints the exact shortest form.
    #[arg(long, global = true, default_value_t = 15)]
    digits: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluates a circuit.
    Amc(EvalArgs),
    /// Gradient of the circuit with respect to every literal label.
    Grad(GradArgs),
    /// Brute-force reference results from a CNF or a circuit.
    Oracle(OracleArgs),
    /// Times the backpropagation variants and writes CSV.
    Bench(BenchArgs),
    /// Reports smoothness, decomposability and determinism.
    Validate(ValidateArgs),
    /// Writes generated circuits or matrices.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Conditional literal probabilities p(l | φ).
    Em(LearnArgs),
    /// Entropy of the model distribution restricted to φ.
    Entropy(LearnArgs),
    /// Most probable explanation and its per-literal maxima.
    Mpe(MpeArgs),
    /// Sampled gradient estimate with standard errors.
    Indecater(IndecaterArgs),
    /// One row of the second-order table AMC(φ | y, l).
    HessianRow(HessianRowArgs),
}

#[derive(Args)]
struct GateArgs {
    /// Skip the determinism check when it cannot be decided within budget.
    #[arg(long)]
    trust_deterministic: bool,

    /// Largest variable count for which determinism is checked exhaustively.
    #[arg(long, env = "AMCGRAD_DETERMINISM_BUDGET", default_value_t = amcgrad::circuit::DEFAULT_DETERMINISM_BUDGET)]
    determinism_budget: usize,
}

impl GateArgs {
    fn options(&self) -> GateOptions {
        GateOptions { determinism_budget: self.determinism_budget, trust_deterministic: self.trust_deterministic }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    circuit: PathBuf,

    #[arg(long)]
    weights: Option<PathBuf>,

    #[arg(long, default_value = "prob")]
    semiring: SemiringKind,

    /// Smooth the circuit before evaluating it.
    #[arg(long)]
    smooth: bool,

    /// Smooth over at least this many variables.
    #[arg(long)]
    vars: Option<usize>,

    #[command(flatten)]
    gate: GateArgs,
}

#[derive(Args)]
struct GradArgs {
    #[command(flatten)]
    eval: EvalArgs,

    #[arg(long, default_value = "opt")]
    algo: Algorithm,

    /// Print ∇[v] − ∇[¬v] per variable (rings only).
    #[arg(long)]
    per_variable: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Amc,
    Grad,
    Hessian,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, conflicts_with = "circuit", required_unless_present = "circuit")]
    cnf: Option<PathBuf>,

    /// Reads the formula from a circuit instead.
    #[arg(long)]
    circuit: Option<PathBuf>,

    #[arg(long)]
    weights: Option<PathBuf>,

    #[arg(long, default_value = "prob")]
    semiring: SemiringKind,

    #[arg(long, value_enum, default_value_t = OracleMode::Amc)]
    mode: OracleMode,

    /// In hessian mode, print only the positive-literal block.
    #[arg(long)]
    positive: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    circuit: Vec<PathBuf>,

    /// Directory of `.nnf` files.
    #[arg(long)]
    suite: Option<PathBuf>,

    /// Star-product arities, e.g. `64,256,1024`.
    #[arg(long, value_delimiter = ',')]
    star: Vec<usize>,

    /// Number of random circuits over `--vars` variables.
    #[arg(long, default_value_t = 0)]
    random: usize,

    #[arg(long, default_value_t = 16)]
    vars: usize,

    #[arg(long, default_value = "prob")]
    semiring: SemiringKind,

    #[arg(long, value_delimiter = ',', default_value = "naive,cancel,dynamic,opt")]
    algos: Vec<Algorithm>,

    #[arg(long, default_value_t = 10)]
    repeat: usize,

    #[arg(long, default_value_t = 1)]
    warmup: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Benchmark distinct circuits on worker threads.
    #[arg(long)]
    parallel: bool,

    /// Smooth circuits read from files.
    #[arg(long)]
    smooth: bool,

    #[arg(long, short)]
    output: Option<PathBuf>,

    #[command(flatten)]
    gate: GateArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    circuit: PathBuf,

    #[arg(long)]
    smooth: bool,

    #[arg(long, env = "AMCGRAD_DETERMINISM_BUDGET", default_value_t = amcgrad::circuit::DEFAULT_DETERMINISM_BUDGET)]
    determinism_budget: usize,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Product of x1..xk.
    Star {
        #[arg(long)]
        arity: usize,
    },
    /// Random smooth d-DNNF.
    Random {
        #[arg(long)]
        vars: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability that a decision literal is repeated inside its branch.
        #[arg(long, default_value_t = 0.0)]
        duplicate: f64,
    },
    /// Random symmetric 0/1 matrix with a zero diagonal.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Circuit whose 𝔽₂ Hessian is the given matrix (and gradient the given vector).
    Gf2 {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        vector: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LearnArgs {
    #[arg(long)]
    circuit: PathBuf,

    /// Bernoulli parameters as a weight file.
    #[arg(long)]
    weights: PathBuf,

    #[arg(long)]
    smooth: bool,

    #[command(flatten)]
    gate: GateArgs,
}

#[derive(Args)]
struct MpeArgs {
    #[command(flatten)]
    learn: LearnArgs,

    /// Work with log probabilities.
    #[arg(long)]
    log: bool,
}

#[derive(Args)]
struct IndecaterArgs {
    #[command(flatten)]
    learn: LearnArgs,

    #[arg(long, default_value_t = 10_000)]
    samples: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct HessianRowArgs {
    #[command(flatten)]
    eval: EvalArgs,

    /// The conditioning literal, e.g. `3` or `-2`.
    #[arg(long, allow_hyphen_values = true)]
    literal: i64,

    #[arg(long, default_value = "opt")]
    algo: Algorithm,
}

struct Out {
    digits: usize,
    lock: std::io::StdoutLock<'static>,
}

impl Out {
    fn line(&mut self, text: &str) -> anyhow::Result<()> {
        writeln!(self.lock, "{}", round_decimals(text, self.digits))?;
        Ok(())
    }

    fn literals<V>(&mut self, grad: &GradientVector<V>, show: impl Fn(&V) -> String) -> anyhow::Result<()> {
        for (lit, v) in grad.iter() {
            self.line(&format!("{} {}", lit.dimacs(), show(v)))?;
        }
        Ok(())
    }
}

fn load_circuit(path: &Path, smoothed: bool) -> anyhow::Result<Circuit> {
    let c = read_d4(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(if smoothed { smooth(&c)? } else { c })
}

fn load_labels<S: Semiring>(s: &S, weights: Option<&Path>, num_vars: usize) -> anyhow::Result<Labeling<S::Value>> {
    match weights {
        Some(p) => read_weights(p, num_vars, s).with_context(|| format!("reading {}", p.display())),
        None => Ok(Labeling::default_for(s, num_vars)),
    }
}

/// Reads the circuit and its labels. Smoothing covers every labeled
/// variable, so a weight file can widen the circuit.
fn load_eval<S: Semiring>(args: &EvalArgs, s: &S) -> anyhow::Result<(Circuit, Labeling<S::Value>)> {
    let c = load_circuit(&args.circuit, false)?;
    let alpha = load_labels(s, args.weights.as_deref(), c.num_vars())?;
    if !args.smooth && args.vars.is_none() {
        return Ok((c, alpha));
    }
    let n = alpha.num_vars().max(args.vars.unwrap_or(0));
    let c = smooth_to(&c, n)?;
    let alpha = load_labels(s, args.weights.as_deref(), c.num_vars())?;
    Ok((c, alpha))
}

fn load_params(args: &LearnArgs) -> anyhow::Result<(Circuit, BernoulliParams)> {
    let c = load_circuit(&args.circuit, args.smooth)?;
    let labels = load_labels(&Prob, Some(&args.weights), c.num_vars())?;
    Ok((c, BernoulliParams::from_labeling(&labels)?))
}

fn parse_literal(code: i64) -> anyhow::Result<Literal> {
    Literal::from_dimacs(code).with_context(|| format!("`{code}` is not a literal"))
}

fn cmd_amc(args: &EvalArgs, out: &mut Out) -> anyhow::Result<()> {
    with_semiring!(args.semiring, |s| {
        let (c, alpha) = load_eval(args, &s)?;
        let value = amcgrad::amc(&c, &alpha, &s, args.gate.options())?;
        out.line(&s.format_value(&value))
    })
}

fn cmd_grad(args: &GradArgs, out: &mut Out) -> anyhow::Result<()> {
    let eval = &args.eval;
    with_semiring!(eval.semiring, |s| {
        let (c, alpha) = load_eval(eval, &s)?;
        let (_, grad) = amcgrad::grad_amc(&c, &alpha, &s, args.algo, eval.gate.options())?;
        if args.per_variable {
            for (i, v) in variable_gradient(&grad, &s)?.iter().enumerate() {
                out.line(&format!("{} {}", i + 1, s.format_value(v)))?;
            }
            Ok(())
        } else {
            out.literals(&grad, |v| s.format_value(v))
        }
    })
}

fn cmd_oracle(args: &OracleArgs, out: &mut Out) -> anyhow::Result<()> {
    let (phi, num_vars): (Formula, usize) = match (&args.cnf, &args.circuit) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cnf = parse_dimacs(&text)?;
            (cnf.to_formula(), cnf.num_vars)
        }
        (None, Some(path)) => {
            let c = load_circuit(path, false)?;
            (c.to_formula(), c.num_vars())
        }
        (None, None) => bail!("one of --cnf or --circuit is required"),
    };
    with_semiring!(args.semiring, |s| {
        let alpha = load_labels(&s, args.weights.as_deref(), num_vars)?;
        match args.mode {
            OracleMode::Amc => out.line(&s.format_value(&oracle_amc(&phi, &alpha, &s)?)),
            OracleMode::Grad => out.literals(&oracle_grad(&phi, &alpha, &s)?, |v| s.format_value(v)),
            OracleMode::Hessian => {
                let n = alpha.num_vars();
                let keep = if args.positive { n } else { 2 * n };
                for row in oracle_hessian(&phi, &alpha, &s)?.iter().take(keep) {
                    let cells: Vec<String> = row.iter().take(keep).map(|v| s.format_value(v)).collect();
                    out.line(&cells.join(" "))?;
                }
                Ok(())
            }
        }
    })
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let mut cases: Vec<(String, amcgrad::Result<Circuit>)> = Vec::new();
    let prepare = |c: amcgrad::Result<Circuit>| if args.smooth { c.and_then(|c| smooth(&c)) } else { c };
    for path in &args.circuit {
        let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        cases.push((id, prepare(read_d4(path))));
    }
    if let Some(dir) = &args.suite {
        let loaded = amcgrad_bench::load_suite(dir).with_context(|| format!("listing {}", dir.display()))?;
        cases.extend(loaded.into_iter().map(|(id, c)| (id, prepare(c))));
    }
    cases.extend(amcgrad_bench::star_suite(&args.star).into_iter().map(|c| (c.id, Ok(c.circuit))));
    cases.extend(
        amcgrad_bench::random_suite(args.seed, args.random, args.vars)
            .into_iter()
            .map(|c| (c.id, Ok(c.circuit))),
    );
    if cases.is_empty() {
        bail!("nothing to benchmark: pass --circuit, --suite, --star or --random");
    }
    let cfg = BenchConfig {
        algos: args.algos.clone(),
        repeat: args.repeat,
        warmup: args.warmup,
        seed: args.seed,
        gate: args.gate.options(),
    };
    let records = run_suite(&cases, args.semiring, &cfg, args.parallel);
    match &args.output {
        Some(path) => write_csv(std::fs::File::create(path)?, &records)?,
        None => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &records)?;
            std::io::stdout().lock().write_all(&buf)?;
        }
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs, out: &mut Out) -> anyhow::Result<bool> {
    let c = load_circuit(&args.circuit, args.smooth)?;
    let report = validate(&c, args.determinism_budget);
    for line in report.to_string().lines() {
        out.line(line)?;
    }
    Ok(report.smooth && report.decomposable)
}

fn parse_bits(text: &str) -> anyhow::Result<Vec<Vec<bool>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(anyhow::anyhow!("line {}: unexpected `{c}`", i + 1)),
            })
            .collect::<anyhow::Result<Vec<bool>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn show_bits(bits: impl IntoIterator<Item = bool>) -> String {
    bits.into_iter().map(|b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(" ")
}

fn cmd_gen(cmd: &GenCommand, out: &mut Out) -> anyhow::Result<()> {
    let c = match cmd {
        GenCommand::Star { arity } => star_product(*arity),
        GenCommand::Random { vars, seed, duplicate } => {
            let cfg = DdnnfConfig { duplicate: *duplicate, ..DdnnfConfig::new(*vars) };
            random_ddnnf(&mut ChaCha8Rng::seed_from_u64(*seed), &cfg)
        }
        GenCommand::Matrix { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut m = BinaryMatrix::zeros(*n);
            for i in 0..*n {
                for j in i + 1..*n {
                    let bit = rng.random_bool(0.5);
                    m.set(i, j, bit);
                    m.set(j, i, bit);
                }
            }
            for i in 0..*n {
                out.line(&show_bits((0..*n).map(|j| m.get(i, j))))?;
            }
            return Ok(());
        }
        GenCommand::Gf2 { matrix, vector } => {
            let m = BinaryMatrix::from_rows(&parse_bits(&std::fs::read_to_string(matrix)?)?)?;
            match vector {
                None => matrix_to_circuit(&m)?,
                Some(path) => {
                    let v: Vec<bool> = parse_bits(&std::fs::read_to_string(path)?)?.concat();
                    matrix_vec_to_circuit(&m, &v)?
                }
            }
        }
    };
    write!(out.lock, "{}", write_d4(&c))?;
    Ok(())
}

fn cmd_em(args: &LearnArgs, out: &mut Out) -> anyhow::Result<()> {
    let (c, params) = load_params(args)?;
    out.literals(&em_conditionals(&c, &params, args.gate.options())?, |p| p.to_string())
}

fn cmd_entropy(args: &LearnArgs, out: &mut Out) -> anyhow::Result<()> {
    let (c, params) = load_params(args)?;
    let e = conditional_entropy(&c, &params, args.gate.options())?;
    out.line(&format!("probability {}", e.probability))?;
    out.line(&format!("entropy {}", e.entropy))?;
    out.literals(&e.per_literal, |h| h.to_string())
}

fn cmd_mpe(args: &MpeArgs, out: &mut Out) -> anyhow::Result<()> {
    let (c, params) = load_params(&args.learn)?;
    let (best, grad) = mpe_gradient(&c, &params, args.log, args.learn.gate.options())?;
    let show = |x: &f64| if args.log { format!("log:{x}") } else { x.to_string() };
    out.line(&format!("mpe {}", show(&best)))?;
    out.literals(&grad, show)
}

fn cmd_indecater(args: &IndecaterArgs, out: &mut Out) -> anyhow::Result<()> {
    let (c, params) = load_params(&args.learn)?;
    let batch = SampleBatch { seed: args.seed, count: args.samples };
    let est = indecater_estimate(&c, &params, batch, args.learn.gate.options())?;
    out.line(&format!("probability {}", est.probability))?;
    let n = est.gradient.num_vars();
    for (lit, g) in est.gradient.iter() {
        out.line(&format!("{} {g} {}", lit.dimacs(), est.stderr[lit.slot(n)]))?;
    }
    Ok(())
}

fn cmd_hessian_row(args: &HessianRowArgs, out: &mut Out) -> anyhow::Result<()> {
    let eval = &args.eval;
    let y = parse_literal(args.literal)?;
    let opts = eval.gate.options();
    let check = |c: &Circuit| {
        if y.var() as usize > c.num_vars() {
            bail!("literal {} is outside the circuit's {} variables", args.literal, c.num_vars());
        }
        Ok(())
    };
    if eval.semiring == SemiringKind::Prob {
        let (c, labels) = load_eval(eval, &Prob)?;
        check(&c)?;
        let row = hessian_row(&c, &BernoulliParams::from_labeling(&labels)?, y, opts)?;
        return out.literals(&GradientVector::new(c.num_vars(), row), |x| x.to_string());
    }
    with_semiring!(eval.semiring, |s| {
        let (c, alpha) = load_eval(eval, &s)?;
        check(&c)?;
        check_structure(&c, &s, opts)?;
        let row = conditioned_hessian_row(&c, &alpha, &s, y, args.algo, opts)?;
        out.literals(&row, |v| s.format_value(v))
    })
}

/// 1 for bad input, 3 for operations the semiring does not support, 4 for
/// circuits failing the structural gate, 5 when the oracle refuses the size.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Unsupported(_)) => 3,
        Some(Error::Structure { .. }) => 4,
        Some(Error::OracleScale { .. }) => 5,
        _ => 1,
    }
}

fn broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        let io = e.downcast_ref::<std::io::Error>().or_else(|| match e.downcast_ref::<Error>() {
            Some(Error::Io(io)) => Some(io),
            _ => None,
        });
        io.is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut out = Out { digits: cli.digits, lock: std::io::stdout().lock() };
    match &cli.command {
        Command::Amc(a) => cmd_amc(a, &mut out)?,
        Command::Grad(a) => cmd_grad(a, &mut out)?,
        Command::Oracle(a) => cmd_oracle(a, &mut out)?,
        Command::Bench(a) => {
            drop(out);
            cmd_bench(a)?;
        }
        Command::Validate(a) => return cmd_validate(a, &mut out),
        Command::Gen(g) => cmd_gen(g, &mut out)?,
        Command::Em(a) => cmd_em(a, &mut out)?,
        Command::Entropy(a) => cmd_entropy(a, &mut out)?,
        Command::Mpe(a) => cmd_mpe(a, &mut out)?,
        Command::Indecater(a) => cmd_indecater(a, &mut out)?,
        Command::HessianRow(a) => cmd_hessian_row(a, &mut out)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) if broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
