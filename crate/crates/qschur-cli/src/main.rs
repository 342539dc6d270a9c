mod cache;
mod matrix;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qschur::indexsets::{enumerate, enumerate_words, SetTag};
use qschur::suites::{self, SuiteReport};
use qschur::tensor::{hecke_act, Flavor, TensorAction, TensorElement};
use qschur::{Algebra, AlgebraContext, AlgebraElement, Family, ThetaMatrix};
use thiserror::Error;

use crate::cache::{Cache, CACHE_ENV};
use crate::matrix::{parse_matrix, parse_word};
use crate::output::{render, Format, Output};

#[derive(Debug, Error)]
enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("computation failed: {0}")]
    Compute(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

fn invalid(s: impl Into<String>) -> CliError {
    CliError::Invalid(s.into())
}

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    SchurJ,
    SchurI,
    Kj,
    KjGreater,
    Ki,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::SchurJ => Family::SchurJ,
            FamilyArg::SchurI => Family::SchurI,
            FamilyArg::Kj => Family::Kj,
            FamilyArg::KjGreater => Family::KjGreater,
            FamilyArg::Ki => Family::Ki,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SetArg {
    #[value(name = "Xi")]
    Xi,
    #[value(name = "iXi")]
    IXi,
    #[value(name = "Pi")]
    Pi,
    #[value(name = "iPi")]
    IPi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Relations,
    Duality,
    Oracle,
    Stabilization,
    Compat,
    InnerProduct,
    Typec,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Rank: matrices are (2n+1) x (2n+1).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Degree of the finite Schur algebra.
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "schur-j")]
    family: FamilyArg,
    /// Odd primes for finite-field counts, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    q: Vec<u32>,
    /// Weight window `lo,hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List a finite label set.
    Enumerate {
        #[arg(long, value_enum)]
        set: Option<SetArg>,
    },
    /// Product of two elements; operands are matrices or `@file.json`.
    Mul {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Monomial element `M_A`.
    Monomial {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Canonical basis element `{A}` (cached when a cache dir is set).
    Canonical {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Bar involution of `[A]` or of an element file.
    Bar {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// `[A]` acting on a tensor basis word, or `T_j` acting on the right.
    Act {
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        #[arg(long)]
        hecke: Option<usize>,
        /// Letters `r_1,...,r_d`.
        #[arg(long)]
        word: String,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Upper-mass bound for label windows (compat).
        #[arg(long)]
        mass: Option<i64>,
        /// Largest divided power per generator factor (stabilization).
        #[arg(long)]
        rmax: Option<i64>,
    },
}

#[derive(Parser, Debug)]
#[command(name = "qschur", version, about = "Exact computations in type B/C q-Schur algebras and their coideal limits")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

/// Validated run parameters.
struct RunConfig {
    n: Option<usize>,
    d: Option<usize>,
    family: Family,
    qs: Vec<u32>,
    window: Option<(i64, i64)>,
    cache_dir: Option<PathBuf>,
    format: Format,
}

const MAX_N: usize = 4;
const MAX_D: usize = 6;

fn is_odd_prime(q: u32) -> bool {
    q > 2 && q % 2 == 1 && (3..).step_by(2).take_while(|k| k * k <= q).all(|k| q % k != 0)
}

fn parse_window(s: &str) -> Result<(i64, i64), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(invalid(format!("window `{s}`: expected `lo,hi`")));
    }
    let lo: i64 = parts[0].trim().parse().map_err(|_| invalid(format!("window `{s}`: bad lower end")))?;
    let hi: i64 = parts[1].trim().parse().map_err(|_| invalid(format!("window `{s}`: bad upper end")))?;
    if lo > hi || hi - lo > 10 {
        return Err(invalid(format!("window `{s}`: need lo <= hi and width at most 10")));
    }
    Ok((lo, hi))
}

impl RunConfig {
    fn from_opts(o: &GlobalOpts) -> Result<Self, CliError> {
        if let Some(n) = o.n {
            if n == 0 || n > MAX_N {
                return Err(invalid(format!("--n {n}: need 1 <= n <= {MAX_N}")));
            }
        }
        if let Some(d) = o.d {
            if d > MAX_D {
                return Err(invalid(format!("--d {d}: need d <= {MAX_D}")));
            }
        }
        let family: Family = o.family.into();
        if !family.is_finite() && o.d.is_some() {
            return Err(invalid(format!("--d does not apply to {family:?}")));
        }
        if let Some(q) = o.q.iter().find(|&&q| !is_odd_prime(q)) {
            return Err(invalid(format!("--q {q}: need an odd prime")));
        }
        let window = o.window.as_deref().map(parse_window).transpose()?;
        Ok(RunConfig {
            n: o.n,
            d: o.d,
            family,
            qs: o.q.clone(),
            window,
            cache_dir: o.cache_dir.clone(),
            format: o.format,
        })
    }

    fn need_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| invalid("--n is required"))
    }

    fn need_d(&self) -> Result<usize, CliError> {
        self.d.ok_or_else(|| invalid("--d is required"))
    }

    /// The algebra context, with `n` taken from `--n` or the operand.
    fn context(&self, n_hint: Option<usize>) -> Result<AlgebraContext, CliError> {
        let n = match (self.n, n_hint) {
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => return Err(invalid("--n is required")),
        };
        Ok(match self.family {
            Family::SchurJ => AlgebraContext::schur_j(n, self.need_d()?),
            Family::SchurI => AlgebraContext::schur_i(n, self.need_d()?),
            Family::Kj => AlgebraContext::kj(n),
            Family::KjGreater => AlgebraContext::kj_greater(n),
            Family::Ki => AlgebraContext::ki(n),
        })
    }
}

fn label(cfg: &RunConfig, s: &str) -> Result<(AlgebraContext, ThetaMatrix), CliError> {
    let a = parse_matrix(s, cfg.n).map_err(invalid)?;
    let ctx = cfg.context(Some(a.n()))?;
    if !ctx.contains(&a) {
        return Err(invalid(format!("{a} is not a label of {ctx}")));
    }
    Ok((ctx, a))
}

/// A matrix label or `@path` to a JSON element.
fn operand(cfg: &RunConfig, s: &str) -> Result<AlgebraElement, CliError> {
    if let Some(path) = s.strip_prefix('@') {
        let bytes = std::fs::read(path).map_err(|e| invalid(format!("{path}: {e}")))?;
        let x: AlgebraElement = serde_json::from_slice(&bytes).map_err(|e| invalid(format!("{path}: {e}")))?;
        let ctx = cfg.context(Some(x.context().n))?;
        if x.context() != ctx {
            return Err(invalid(format!("{path}: element of {} but the run is in {ctx}", x.context())));
        }
        return Ok(x);
    }
    let (ctx, a) = label(cfg, s)?;
    AlgebraElement::std(ctx, &a).map_err(compute)
}

fn open_cache(dir: &Path) -> Result<Cache, CliError> {
    Cache::open(dir).map_err(|e| invalid(format!("cache dir {}: {e}", dir.display())))
}

fn canonical(cfg: &RunConfig, s: &str) -> Result<AlgebraElement, CliError> {
    let (ctx, a) = label(cfg, s)?;
    let cache = cfg.cache_dir.as_deref().map(open_cache).transpose()?;
    if let Some(x) = cache.as_ref().and_then(|c| c.get("canonical", &ctx, &a)) {
        return Ok(x);
    }
    let x = Algebra::new(ctx).canonical(&a).map_err(compute)?;
    if let Some(c) = &cache {
        c.put("canonical", &ctx, &a, &x).map_err(compute)?;
    }
    Ok(x)
}

fn verify(cfg: &RunConfig, suite: Suite, mass: Option<i64>, rmax: Option<i64>) -> Result<SuiteReport, CliError> {
    let guard = |ok: bool, what: &str| if ok { Ok(()) } else { Err(invalid(format!("outside desk scale: {what}"))) };
    let r = match suite {
        Suite::Relations => {
            let (n, d) = (cfg.need_n()?, cfg.need_d()?);
            guard(n <= 3 && d <= 3, "relations need n <= 3, d <= 3")?;
            suites::relations(n, d, cfg.window.unwrap_or((-2, 4)))
        }
        Suite::Duality => {
            let (n, d) = (cfg.need_n()?, cfg.need_d()?);
            guard((2 * n + 1).pow(d as u32) <= 125, "duality needs (2n+1)^d <= 125")?;
            suites::duality(n, d, &suites::default_points())
        }
        Suite::Oracle => {
            let (n, d) = (cfg.need_n()?, cfg.need_d()?);
            let qs = if cfg.qs.is_empty() { vec![3, 5] } else { cfg.qs.clone() };
            guard(2 * d + 1 <= 7 && n <= 2, "oracle needs 2d+1 <= 7 and n <= 2")?;
            guard(qs.iter().all(|&q| q <= 13), "oracle needs q <= 13")?;
            suites::oracle(n, d, &qs)
        }
        Suite::Stabilization => {
            guard(cfg.n.unwrap_or(1) == 1, "stabilization runs at n = 1")?;
            let rmax = rmax.unwrap_or(2);
            guard((1..=3).contains(&rmax), "rmax in 1..=3")?;
            suites::stabilization(cfg.window.unwrap_or((-1, 2)), rmax)
        }
        Suite::Compat => {
            let (n, d) = (cfg.need_n()?, cfg.need_d()?);
            let mass = mass.unwrap_or(d as i64 + 2);
            guard(n <= 2 && d <= 3 && (0..=5).contains(&mass), "compat needs n <= 2, d <= 3, mass <= 5")?;
            suites::compat(n, d, mass)
        }
        Suite::InnerProduct => {
            let (n, d) = (cfg.need_n()?, cfg.need_d()?);
            guard(n <= 2 && d <= 2, "inner-product needs n <= 2, d <= 2")?;
            suites::inner_product(n, d)
        }
        Suite::Typec => {
            let (n, d) = (cfg.need_n()?, cfg.need_d()?);
            let q = cfg.qs.first().copied().unwrap_or(3);
            guard(n <= 2 && d <= 2 && q <= 7, "typec needs n <= 2, d <= 2, q <= 7")?;
            suites::typec(n, d, q)
        }
    };
    r.map_err(compute)
}

fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let cfg = RunConfig::from_opts(&cli.opts)?;
    let out = match &cli.cmd {
        Command::Enumerate { set } => {
            let n = cfg.need_n()?;
            let d = cfg.need_d()?;
            let set = set.unwrap_or(if cfg.family.is_iota() { SetArg::IXi } else { SetArg::Xi });
            let matrices = match set {
                SetArg::Xi => enumerate(SetTag::XiD { n, d }).map_err(compute)?,
                SetArg::IXi => enumerate(SetTag::IXiD { n, d }).map_err(compute)?,
                SetArg::Pi | SetArg::IPi => {
                    let words = enumerate_words(n, d, set == SetArg::IPi);
                    return Ok((render(&Output::Words { set: format!("{set:?}(n={n}, d={d})"), words }, cfg.format), true));
                }
            };
            Output::Matrices { set: format!("{set:?}(n={n}, d={d})"), matrices }
        }
        Command::Mul { left, right } => {
            let x = operand(&cfg, left)?;
            let y = operand(&cfg, right)?;
            if x.context() != y.context() {
                return Err(invalid(format!("operands live in {} and {}", x.context(), y.context())));
            }
            let alg = Algebra::new(x.context());
            Output::Element(alg.mul(&x, &y).map_err(compute)?)
        }
        Command::Monomial { matrix } => {
            let (ctx, a) = label(&cfg, matrix)?;
            Output::Element(Algebra::new(ctx).monomial(&a).map_err(compute)?)
        }
        Command::Canonical { matrix } => Output::Element(canonical(&cfg, matrix)?),
        Command::Bar { matrix } => {
            let x = operand(&cfg, matrix)?;
            Output::Element(Algebra::new(x.context()).bar(&x).map_err(compute)?)
        }
        Command::Act { matrix, hecke, word } => {
            let n = match (&cfg.n, matrix) {
                (Some(n), _) => *n,
                (None, Some(m)) => parse_matrix(m, None).map_err(invalid)?.n(),
                (None, None) => return Err(invalid("--n is required")),
            };
            let letters = 2 * n + 1;
            let w = parse_word(word, letters).map_err(invalid)?;
            let x = TensorElement::basis(letters, Flavor::Standard, &w).map_err(compute)?;
            match (matrix, hecke) {
                (Some(m), None) => {
                    let (ctx, a) = label(&cfg, m)?;
                    let d = ctx.d.ok_or_else(|| invalid("act needs a finite family"))?;
                    if d != w.len() {
                        return Err(invalid(format!("word of length {} but d = {d}", w.len())));
                    }
                    if ctx.family.is_iota() && w.contains(&(n + 1)) {
                        return Err(invalid("iota action: the word may not use the center letter"));
                    }
                    Output::Tensor(TensorAction::new(n, d).act_std(&a, &x).map_err(compute)?)
                }
                (None, Some(j)) => {
                    if *j == 0 || *j > w.len() {
                        return Err(invalid(format!("--hecke {j}: need 1 <= j <= {}", w.len())));
                    }
                    Output::Tensor(hecke_act(&x, *j).map_err(compute)?)
                }
                _ => return Err(invalid("act needs exactly one of --matrix and --hecke")),
            }
        }
        Command::Verify { suite, mass, rmax } => {
            let r = verify(&cfg, *suite, *mass, *rmax)?;
            let pass = r.pass;
            return Ok((render(&Output::Report(r), cfg.format), pass));
        }
    };
    Ok((render(&out, cfg.format), true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("qschur: {e}");
            ExitCode::from(e.code())
        }
    }
}
