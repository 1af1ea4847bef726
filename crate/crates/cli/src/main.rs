//! `wreath`: batch queries against iterated wreath products of cyclic groups.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use wreath_core::commutator::{
    decompose_bk_with_gk_witness, decompose_derived_wreath, decompose_gk,
};
use wreath_core::membership::{
    random_member_with, subgroup_order_with_cap, DEFAULT_ENUMERATION_CAP,
};
use wreath_core::verify::{run_suite, Suite, SuiteOptions};
use wreath_core::{Error, Oracle, SubgroupKind, SubgroupSpec, TreeAutomorphism, WreathSignature};

#[derive(Parser)]
#[command(
    name = "wreath",
    version,
    about = "Exact computation in iterated wreath products of cyclic groups"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Level arities, root first, e.g. 2,2,2
    #[arg(long, global = true, conflicts_with_all = ["arity", "depth"])]
    signature: Option<WreathSignature>,
    /// Uniform arity (with --depth)
    #[arg(long, global = true, requires = "depth")]
    arity: Option<u32>,
    /// Uniform depth (with --arity)
    #[arg(long, global = true, requires = "arity")]
    depth: Option<usize>,
    /// Subgroup: full, derived, sylow-a, sylow-a-derived
    #[arg(long, global = true)]
    set: Option<SubgroupKind>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples for `random` and for sampled verify checks
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Extend sampled verify checks to trees of this depth
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    /// Emit JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,
    /// Largest group the brute-force oracle may enumerate
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Product a*b (apply a, then b)
    Mul { a: String, b: String },
    /// Inverse
    Inv { a: String },
    /// Commutator [a, b] = a b a^-1 b^-1
    Comm { a: String, b: String },
    /// Conjugate a^b = b a b^-1
    Conj { a: String, b: String },
    /// Membership in --set; exit 0 if a member, 1 if not
    Member { g: String },
    /// Write an element of the derived subgroup as a single commutator
    Decompose { g: String },
    /// List every element of --set
    Enumerate,
    /// Draw uniform elements of --set
    Random,
    /// Order of --set
    Order,
    /// Run a named verification suite and print its report
    Verify {
        #[arg(long)]
        suite: Suite,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e {
                Error::Parse { .. } | Error::InvalidSignature(_) => 2,
                Error::CapExceeded { .. } => 4,
                Error::VerificationFailed(_) => 1,
                _ => 3,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

struct Context {
    sig: WreathSignature,
    global: Global,
}

impl Context {
    fn element(&self, text: &str) -> Result<TreeAutomorphism, Failure> {
        Ok(TreeAutomorphism::parse(&self.sig, text)?)
    }

    fn spec(&self, default: Option<SubgroupKind>) -> Result<SubgroupSpec, Failure> {
        let kind = self
            .global
            .set
            .or(default)
            .ok_or_else(|| Failure::Usage("--set is required for this command".into()))?;
        Ok(SubgroupSpec::new(kind, self.sig.clone())?)
    }

    fn oracle(&self) -> Oracle {
        Oracle {
            enumeration_cap: self.global.cap,
            ..Oracle::default()
        }
    }

    fn portrait(&self, g: &TreeAutomorphism) -> String {
        if self.global.json {
            json!({ "result": g.render() }).to_string()
        } else {
            g.render()
        }
    }
}

/// Output lines plus the success exit code.
type Output = (Vec<String>, u8);

fn run(cli: Cli) -> Result<Output, Failure> {
    let sig = match (&cli.global.signature, cli.global.arity, cli.global.depth) {
        (Some(sig), _, _) => sig.clone(),
        (None, Some(p), Some(k)) => WreathSignature::uniform(p, k)?,
        _ => {
            return Err(Failure::Usage(
                "a signature is required: --signature p1,p2,... or --arity p --depth k".into(),
            ))
        }
    };
    let ctx = Context {
        sig,
        global: cli.global,
    };
    let g = &ctx.global;
    match cli.command {
        Command::Mul { a, b } => {
            let r = ctx.element(&a)?.multiply(&ctx.element(&b)?)?;
            Ok((vec![ctx.portrait(&r)], 0))
        }
        Command::Inv { a } => Ok((vec![ctx.portrait(&ctx.element(&a)?.inverse())], 0)),
        Command::Comm { a, b } => {
            let r = ctx.element(&a)?.commutator(&ctx.element(&b)?)?;
            Ok((vec![ctx.portrait(&r)], 0))
        }
        Command::Conj { a, b } => {
            let r = ctx.element(&a)?.conjugate(&ctx.element(&b)?)?;
            Ok((vec![ctx.portrait(&r)], 0))
        }
        Command::Member { g: text } => {
            let spec = ctx.spec(None)?;
            let member = spec.contains(&ctx.element(&text)?)?;
            let line = if g.json {
                json!({ "element": text, "set": spec.kind().name(), "member": member }).to_string()
            } else {
                member.to_string()
            };
            Ok((vec![line], if member { 0 } else { 1 }))
        }
        Command::Decompose { g: text } => {
            let w = ctx.element(&text)?;
            let witness = match ctx.spec(Some(SubgroupKind::Derived))?.kind() {
                SubgroupKind::Derived if ctx.sig.is_binary() => decompose_bk_with_gk_witness(&w)?,
                SubgroupKind::Derived => decompose_derived_wreath(&w)?,
                SubgroupKind::SylowADerived => decompose_gk(&w)?,
                kind => {
                    return Err(Failure::Core(Error::Unsupported(format!(
                        "decompose needs --set derived or sylow-a-derived, got {kind}"
                    ))))
                }
            };
            Ok((vec![witness.to_json().to_string()], 0))
        }
        Command::Enumerate => {
            let set = ctx
                .oracle()
                .enumerate(&ctx.spec(Some(SubgroupKind::Full))?)?;
            let lines: Vec<String> = set.render_lines().collect();
            if g.json {
                Ok((vec![Value::from(lines).to_string()], 0))
            } else {
                Ok((lines, 0))
            }
        }
        Command::Random => {
            use rand::SeedableRng;
            let spec = ctx.spec(Some(SubgroupKind::Full))?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(g.seed);
            let lines: Vec<String> = (0..g.samples.unwrap_or(1))
                .map(|_| random_member_with(&spec, &mut rng).render())
                .collect();
            if g.json {
                Ok((vec![Value::from(lines).to_string()], 0))
            } else {
                Ok((lines, 0))
            }
        }
        Command::Order => {
            let spec = ctx.spec(Some(SubgroupKind::Full))?;
            let order = subgroup_order_with_cap(&spec, g.cap)?.to_string();
            let line = if g.json {
                json!({ "set": spec.kind().name(), "order": order }).to_string()
            } else {
                order
            };
            Ok((vec![line], 0))
        }
        Command::Verify { suite } => {
            let mut opts = SuiteOptions {
                seed: g.seed,
                max_depth: g.max_depth,
                oracle: ctx.oracle(),
                ..SuiteOptions::default()
            };
            if let Some(n) = g.samples {
                opts.samples = n;
            }
            let report = run_suite(suite, &ctx.sig, &opts)?;
            let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
            Ok((vec![text], if report.passed() { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("usage error");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((lines, code)) => {
            let mut out = io::stdout().lock();
            for line in lines {
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
