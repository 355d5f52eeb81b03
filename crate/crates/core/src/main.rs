use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wpl_core::cases::{auto_primes, CaseRegistry, CaseSpec};
use wpl_core::config::{algebra_from_params, VerifyConfig};
use wpl_core::field::admissible_primes;
use wpl_core::group_hom::{GroupHom, DEFAULT_WINDOW};
use wpl_core::report::verify_case;
use wpl_core::{CoordinateAlgebra, FieldElement, FieldSpec, GroupElement, Monomial, RootChoice, WeightSequence};

const DEFAULT_VERIFY_WINDOW: i64 = 20;
const AUTO_PRIME_MAX: u64 = 1000;

#[derive(Parser)]
#[command(name = "wpl", version, about = "String groups and coordinate algebras of weighted projective lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Queries on the string group L(p).
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Queries on the coordinate algebra S(p, lambda).
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Verify a built-in case or a JSON configuration and emit a JSON report.
    Verify(VerifyArgs),
    /// List the built-in cases.
    Cases,
}

#[derive(Args, Clone)]
struct WeightsArg {
    /// Weights p1,p2,...
    #[arg(long)]
    weights: String,
}

#[derive(Args, Clone)]
struct HomArgs {
    /// Use the group homomorphism of a built-in case.
    #[arg(long, conflicts_with_all = ["weights", "target", "image"])]
    case: Option<String>,
    /// Source weights of a custom homomorphism.
    #[arg(long, requires_all = ["target", "image"])]
    weights: Option<String>,
    /// Target weights of a custom homomorphism.
    #[arg(long)]
    target: Option<String>,
    /// Image "l;l1,..." of a source generator (repeat once per generator).
    #[arg(long, allow_hyphen_values = true)]
    image: Vec<String>,
}

#[derive(Subcommand)]
enum GroupOp {
    /// Normal form of "l;l1,..." with arbitrary integer torsion entries.
    NormalForm {
        #[command(flatten)]
        w: WeightsArg,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Sum of the given elements.
    Add {
        #[command(flatten)]
        w: WeightsArg,
        #[arg(long, allow_hyphen_values = true, required = true)]
        elem: Vec<String>,
        #[arg(long)]
        pretty: bool,
    },
    /// Order of an element, or "infinite".
    Order {
        #[command(flatten)]
        w: WeightsArg,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// The dualizing element.
    Dualizing {
        #[command(flatten)]
        w: WeightsArg,
        #[arg(long)]
        pretty: bool,
    },
    /// Whether the dualizing element has degree 0.
    Tubular {
        #[command(flatten)]
        w: WeightsArg,
    },
    /// Kernel of a homomorphism, one element per line.
    Kernel {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long)]
        pretty: bool,
    },
    /// Fiber of a homomorphism over an element of the target.
    Fiber {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Effectiveness and the fiber multiplicity condition on a window, as JSON.
    Admissible {
        #[command(flatten)]
        hom: HomArgs,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: i64,
    },
}

#[derive(Args, Clone)]
struct AlgebraArgs {
    #[arg(long)]
    weights: String,
    /// Free parameters lambda_4,... (or the full list starting with 1).
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    params: String,
    /// "rationals" or a prime q >= 5.
    #[arg(long, default_value = "rationals")]
    field: String,
}

#[derive(Subcommand)]
enum AlgebraOp {
    /// Dimension of a homogeneous component.
    Dim {
        #[command(flatten)]
        a: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
    },
    /// Monomial basis of a homogeneous component.
    Basis {
        #[command(flatten)]
        a: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
        /// Print exponent vectors as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Normal form of a monomial or polynomial.
    Reduce {
        #[command(flatten)]
        a: AlgebraArgs,
        /// Exponent vector a1,a2,...
        #[arg(long, conflicts_with = "poly")]
        exp: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "1", requires = "exp")]
        coeff: String,
        /// Polynomial such as "x1^2*x3 + -2*x2".
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Dimensions for l in [from, to] at a fixed torsion part.
    Hilbert {
        #[command(flatten)]
        a: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        /// Torsion part l1,..., defaults to zero.
        #[arg(long)]
        torsion: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    case: Option<String>,
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// "rationals" or a prime q >= 5.
    #[arg(long, conflicts_with = "auto_prime")]
    field: Option<String>,
    /// Parameter lambda for case D.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long)]
    window: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the smallest prime in 5..1000 over which the constants exist.
    #[arg(long)]
    auto_prime: bool,
    /// Perturbation: lambda=<v>, pi<j>=<l;..>, phi<j>=<element> or phi=zero.
    #[arg(long, allow_hyphen_values = true)]
    tamper: Vec<String>,
    /// smallest or largest.
    #[arg(long, default_value = "smallest")]
    root_choice: String,
}

/// Usage and configuration errors; reported on stderr with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult = Result<ExitCode, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {}", e.0);
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Group { op } => run_group(op),
        Command::Algebra { op } => run_algebra(op),
        Command::Verify(args) => run_verify(args),
        Command::Cases => run_cases(),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {}", e.0);
        ExitCode::from(2)
    })
}

fn init_threads() -> Result<(), UsageError> {
    let Ok(v) = std::env::var("WPL_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| UsageError(format!("WPL_THREADS={v:?} is not a thread count")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn show(x: &GroupElement, pretty: bool) -> String {
    if pretty {
        x.pretty()
    } else {
        x.to_string()
    }
}

fn hom_from(args: &HomArgs) -> Result<GroupHom, UsageError> {
    if let Some(name) = &args.case {
        return Ok(CaseRegistry::builtin().get(name)?.group_hom());
    }
    let (Some(src), Some(tgt)) = (&args.weights, &args.target) else {
        return Err(UsageError("give --case or --weights, --target and --image".into()));
    };
    let src = WeightSequence::parse(src)?;
    let tgt = WeightSequence::parse(tgt)?;
    let images = args.image.iter().map(|s| tgt.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(GroupHom::new(src, tgt, images)?)
}

fn run_group(op: GroupOp) -> CliResult {
    match op {
        GroupOp::NormalForm { w, elem, pretty } => {
            let p = WeightSequence::parse(&w.weights)?;
            println!("{}", show(&p.parse_element(&elem)?, pretty));
        }
        GroupOp::Add { w, elem, pretty } => {
            let p = WeightSequence::parse(&w.weights)?;
            let mut acc = p.zero();
            for e in &elem {
                acc = acc.checked_add(&p.parse_element(e)?)?;
            }
            println!("{}", show(&acc, pretty));
        }
        GroupOp::Order { w, elem } => {
            let p = WeightSequence::parse(&w.weights)?;
            println!("{}", p.parse_element(&elem)?.order());
        }
        GroupOp::Dualizing { w, pretty } => {
            let p = WeightSequence::parse(&w.weights)?;
            println!("{}", show(&p.dualizing(), pretty));
        }
        GroupOp::Tubular { w } => {
            println!("{}", WeightSequence::parse(&w.weights)?.is_tubular());
        }
        GroupOp::Kernel { hom, pretty } => {
            for x in hom_from(&hom)?.kernel()? {
                println!("{}", show(&x, pretty));
            }
        }
        GroupOp::Fiber { hom, elem, pretty } => {
            let h = hom_from(&hom)?;
            let x = h.target().parse_element(&elem)?;
            for y in h.fiber(&x)? {
                println!("{}", show(&y, pretty));
            }
        }
        GroupOp::Admissible { hom, window } => {
            let r = hom_from(&hom)?.is_admissible(window)?;
            let kernel: Vec<String> = r.kernel.iter().map(ToString::to_string).collect();
            let v = serde_json::json!({
                "admissible": r.is_admissible(),
                "effective": r.effective,
                "window": r.ah2_window,
                "ah2_checked": r.ah2_checked,
                "ah2_failures": r.ah2_failures,
                "edge_regime_ok": r.edge_regime_ok,
                "kernel": kernel,
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
            if !r.is_admissible() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|v| !v.is_empty()).collect()
}

fn algebra_from(a: &AlgebraArgs) -> Result<CoordinateAlgebra, UsageError> {
    let field = FieldSpec::parse(&a.field)?;
    let weights = WeightSequence::parse(&a.weights)?;
    let params =
        parse_list(&a.params).into_iter().map(|v| field.parse_element(v)).collect::<Result<Vec<_>, _>>()?;
    Ok(algebra_from_params(weights, params, &field)?)
}

fn run_algebra(op: AlgebraOp) -> CliResult {
    match op {
        AlgebraOp::Dim { a, degree } => {
            let s = algebra_from(&a)?;
            let x = s.weights().parse_element(&degree)?;
            println!("{}", s.component_basis(&x)?.dim());
        }
        AlgebraOp::Basis { a, degree, json } => {
            let s = algebra_from(&a)?;
            let x = s.weights().parse_element(&degree)?;
            let basis = s.component_basis(&x)?;
            if json {
                let exps: Vec<&[u32]> = basis.monomials.iter().map(Monomial::exponents).collect();
                println!("{}", serde_json::to_string(&exps)?);
            } else {
                let shown: Vec<String> = basis.monomials.iter().map(|m| m.render(s.symbol())).collect();
                println!("[{}]", shown.join(", "));
            }
        }
        AlgebraOp::Reduce { a, exp, coeff, poly } => {
            let s = algebra_from(&a)?;
            let element = match (exp, poly) {
                (Some(exp), None) => {
                    let exps = parse_list(&exp)
                        .into_iter()
                        .map(str::parse::<u32>)
                        .collect::<Result<Vec<_>, _>>()?;
                    if exps.len() != s.num_vars() {
                        return Err(UsageError(format!("expected {} exponents, got {}", s.num_vars(), exps.len())));
                    }
                    let c: FieldElement = s.field().parse_element(&coeff)?;
                    s.reduce(&Monomial(exps), &c)
                }
                (None, Some(poly)) => s.parse_element(&poly)?,
                _ => return Err(UsageError("give --exp or --poly".into())),
            };
            println!("{}", element.render(s.symbol()));
        }
        AlgebraOp::Hilbert { a, from, to, torsion } => {
            let s = algebra_from(&a)?;
            let torsion = match torsion {
                Some(t) => parse_list(&t).into_iter().map(str::parse::<i64>).collect::<Result<Vec<_>, _>>()?,
                None => vec![0; s.weights().len()],
            };
            for (x, dim) in s.hilbert(from, to, &torsion)? {
                println!("{x}\t{dim}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_cases() -> CliResult {
    for case in CaseRegistry::builtin().iter() {
        let lambda = if case.needs_lambda() { " (needs --lambda)" } else { "" };
        println!("{}\t{}{lambda}", case.id(), case.description());
    }
    Ok(ExitCode::SUCCESS)
}

fn build_case(args: &VerifyArgs, choice: RootChoice) -> Result<CaseSpec, UsageError> {
    let registry = CaseRegistry::builtin();
    if let Some(name) = &args.case {
        let case = registry.get(name)?;
        if case.needs_lambda() && args.lambda.is_none() {
            return Err(UsageError(format!("case {} needs --lambda", case.id())));
        }
        if args.auto_prime {
            let found = auto_primes(case, args.lambda.as_deref(), 1, AUTO_PRIME_MAX, choice);
            return found
                .into_iter()
                .next()
                .ok_or_else(|| UsageError(format!("no prime in 5..{AUTO_PRIME_MAX} admits case {}", case.id())));
        }
        let field = FieldSpec::parse(args.field.as_deref().unwrap_or("rationals"))?;
        let lambda = args.lambda.as_deref().map(|v| field.parse_element(v)).transpose()?;
        return Ok(case.build(&field, lambda.as_ref(), choice)?);
    }
    let path = args.config.as_ref().expect("clap requires --case or --config");
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let config = VerifyConfig::from_json(&text)?;
    if args.auto_prime {
        return admissible_primes(5, AUTO_PRIME_MAX)
            .find_map(|q| config.build_over(&FieldSpec::Prime(q), choice).ok())
            .ok_or_else(|| UsageError(format!("no prime in 5..{AUTO_PRIME_MAX} admits this configuration")));
    }
    match &args.field {
        Some(f) => Ok(config.build_over(&FieldSpec::parse(f)?, choice)?),
        None => Ok(config.build(choice)?),
    }
}

fn run_verify(args: VerifyArgs) -> CliResult {
    let choice = RootChoice::parse(&args.root_choice)
        .ok_or_else(|| UsageError(format!("--root-choice must be smallest or largest, got {:?}", args.root_choice)))?;
    let mut spec = build_case(&args, choice)?;
    if args.auto_prime {
        eprintln!("using prime {}", spec.field);
    }
    for t in &args.tamper {
        let tamper = spec.parse_tamper(t)?;
        spec.apply_tamper(&tamper)?;
    }
    let window = match (args.window, &args.config) {
        (Some(w), _) => w,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            VerifyConfig::from_json(&text)?.window
        }
        (None, None) => DEFAULT_VERIFY_WINDOW,
    };
    if window < 0 {
        return Err(UsageError(format!("--window must be nonnegative, got {window}")));
    }
    let outcome = verify_case(&spec, window);
    let text = outcome.render();
    match &args.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            eprintln!("{}", outcome.json["summary"]["statement"].as_str().unwrap_or_default());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(if outcome.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
