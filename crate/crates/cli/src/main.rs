mod cert;
mod exit;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use bohm::ccc::{check_axioms_with, collapse_with, parse_arrow, replay_with};
use bohm::models::{define_functional, PModel};
use bohm::normalize::Normalizer;
use bohm::numerals::{combinator, CombinatorKind, Tag};
use bohm::products::{
    build_iso_with, position_string, separate_prod_with, type_nf_with, verify_product_with, Measure, RedexOrder,
};
use bohm::separator::{separate_two_with, separate_with, verify_with, SeparateOptions};
use bohm::syntax::{
    parse_type, print_term, print_type, read_term, Context, ReadError, Term, Ty, TypeAliases, TypeError,
};

use cert::{decode, parse_envelope, to_json, Certificate};
use exit::{exit_code, Outcome};

/// Typed lambda calculus workbench: normal forms, equality, separation certificates and CCC collapse.
#[derive(Parser)]
#[command(name = "bohm", version)]
struct Cli {
    #[command(flatten)]
    budget: Budget,
    /// Free variable declaration `name:type`; undeclared free variables default to `p`.
    #[arg(long = "var", global = true, value_name = "NAME:TYPE")]
    vars: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Budget {
    /// Largest model base searched for a distinguishing model.
    #[arg(long, global = true, env = "BOHM_MAX_BASE", default_value_t = 3)]
    max_base: u32,
    /// Largest numeral level a separation may use.
    #[arg(long, global = true, env = "BOHM_MAX_LEVEL", default_value_t = 24)]
    max_level: usize,
    /// Normalization step budget for each equality check.
    #[arg(long, global = true, env = "BOHM_MEM_BUDGET")]
    mem_budget: Option<u64>,
    /// Worker threads for corpus runs.
    #[arg(long, global = true, env = "BOHM_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the βη normal form of a term.
    Normalize {
        term: String,
        /// η-long form.
        #[arg(long, conflicts_with = "contracted")]
        long: bool,
        /// η-contracted form (default).
        #[arg(long)]
        contracted: bool,
    },
    /// Decide βη-equality; exit 0 if equal, 1 if not.
    Eq { a: String, b: String },
    /// Emit a separation certificate as JSON.
    Separate {
        a: String,
        b: String,
        /// Targets `c d`; without them the separation is two-valued.
        targets: Vec<String>,
        /// Two-valued: `K a e f = e`, `K b e f = f` for fresh `e, f : p`.
        #[arg(long, conflicts_with = "product")]
        two_valued: bool,
        /// Closed terms with products, via a differing component.
        #[arg(long)]
        product: bool,
    },
    /// Check a certificate file; exit 0 on pass, 1 on fail.
    Verify { file: PathBuf },
    /// Print the reduction trace and the product normal form of a type.
    TypeNf {
        ty: String,
        #[arg(long)]
        outermost: bool,
        #[arg(long, default_value_t = 2)]
        weight: u32,
    },
    /// Print the isomorphism A → A^π and its inverse.
    Iso { ty: String },
    /// Print a term defining a functional of a finite model.
    Define {
        /// Model base.
        #[arg(long)]
        model: u32,
        /// Canonical code of the functional.
        #[arg(long)]
        functional: u64,
        /// Type of the functional.
        #[arg(long = "type", default_value = "p")]
        ty: String,
        #[arg(long)]
        level: usize,
    },
    /// Print a numeral combinator: C R E S M Pi pi1 pi2 T H P Z, or D<k>.
    Combinator {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        level: usize,
    },
    /// Cartesian closed category commands.
    Ccc {
        #[command(subcommand)]
        command: CccCommand,
    },
    /// Separate and verify every pair file in a directory.
    Corpus { dir: PathBuf },
}

#[derive(Subcommand)]
enum CccCommand {
    /// Check every axiom schema at random type instantiations.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
    /// Emit a certificate deriving p1[C,C] = p2[C,C] from f = g.
    Collapse {
        f: String,
        g: String,
        #[arg(long, default_value = "C")]
        object: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

impl Budget {
    fn normalizer(&self) -> Normalizer {
        match self.mem_budget {
            Some(n) => Normalizer::with_budget(n),
            None => Normalizer::default(),
        }
    }

    fn options(&self) -> SeparateOptions {
        SeparateOptions {
            max_base: self.max_base,
            max_level: self.max_level,
            normalizer: self.normalizer(),
            ..SeparateOptions::default()
        }
    }
}

fn context(vars: &[String]) -> Result<Context> {
    let mut ctx = Context::new();
    for v in vars {
        let (name, ty) = v.split_once(':').ok_or_else(|| anyhow!("--var expects NAME:TYPE, got {v:?}"))?;
        ctx.push(name.trim(), parse_type(ty.trim())?)?;
    }
    Ok(ctx)
}

/// Reads a term, declaring undeclared free variables at type `p`.
fn read(text: &str, ctx: &Context) -> Result<Term> {
    let mut ctx = ctx.clone();
    loop {
        match read_term(text, &ctx) {
            Err(ReadError::Type(TypeError::UnboundVariable(name))) if ctx.get(&name).is_none() => {
                ctx.push(&name, Ty::p())?;
            }
            r => return r.with_context(|| format!("reading {text:?}")),
        }
    }
}

fn print_with_aliases(t: &Term) -> String {
    let mut aliases = TypeAliases::new(256);
    let body = aliases.print_term(t);
    let mut out = String::new();
    for (name, def) in aliases.defs() {
        out.push_str(&format!("@{name} = {def}\n"));
    }
    out + &body
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(n) = cli.budget.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let ctx = context(&cli.vars)?;
    let norm = cli.budget.normalizer();
    match &cli.command {
        Command::Normalize { term, long, .. } => {
            let t = read(term, &ctx)?;
            let nf = if *long { norm.long_nf(&t)? } else { norm.beta_eta_nf(&t)? };
            println!("{}", print_term(&nf.term));
            Ok(Outcome::Success)
        }
        Command::Eq { a, b } => {
            let (a, b) = (read(a, &ctx)?, read(b, &ctx)?);
            if a.ty() != b.ty() {
                return Err(TypeError::TypeMismatch { expected: a.ty(), found: b.ty() }.into());
            }
            let equal = norm.decide_eq(&a, &b)?;
            println!("{}", if equal { "equal" } else { "not-equal" });
            Ok(if equal { Outcome::Success } else { Outcome::Negative })
        }
        Command::Separate { a, b, targets, two_valued, product } => {
            let (a, b) = (read(a, &ctx)?, read(b, &ctx)?);
            let opts = cli.budget.options();
            let cert = if *product {
                Certificate::Product(separate_prod_with(&a, &b, Ty::p(), &opts)?)
            } else if targets.is_empty() || *two_valued {
                if !targets.is_empty() {
                    bail!("--two-valued takes no targets");
                }
                let p = Ty::p();
                Certificate::Lambda(separate_two_with(&a, &b, &Term::free("e", p), &Term::free("f", p), &opts)?)
            } else {
                let [c, d] = targets.as_slice() else {
                    bail!("expected two targets c d, got {}", targets.len());
                };
                Certificate::Lambda(separate_with(&a, &b, &read(c, &ctx)?, &read(d, &ctx)?, &opts)?)
            };
            print!("{}", to_json(&cert.envelope()?)?);
            Ok(Outcome::Success)
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let env = parse_envelope(&text)?;
            let pass = verify_certificate(&env, &norm)?;
            println!("{}", if pass { "pass" } else { "fail" });
            Ok(if pass { Outcome::Success } else { Outcome::Negative })
        }
        Command::TypeNf { ty, outermost, weight } => {
            let t = parse_type(ty)?;
            if *weight < 2 {
                bail!("--weight must be at least 2");
            }
            let order = if *outermost { RedexOrder::LeftmostOutermost } else { RedexOrder::LeftmostInnermost };
            let trace = type_nf_with(t, order, *weight);
            for (k, s) in trace.steps.iter().enumerate() {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    k + 1,
                    position_string(&s.position),
                    s.rule.tag(),
                    measure_text(&s.before),
                    measure_text(&s.after),
                    format!("{:?}", s.tier).to_lowercase()
                );
            }
            println!("{}", print_type(trace.output));
            Ok(Outcome::Success)
        }
        Command::Iso { ty } => {
            let w = build_iso_with(parse_type(ty)?, &norm)?;
            println!("{}", print_term(&w.forward));
            println!("{}", print_term(&w.backward));
            Ok(Outcome::Success)
        }
        Command::Define { model, functional, ty, level } => {
            let m = PModel::new(*model)?;
            let phi = m.element(parse_type(ty)?, *functional)?;
            println!("{}", print_with_aliases(&define_functional(&phi, *level)?));
            Ok(Outcome::Success)
        }
        Command::Combinator { kind, level } => {
            let tag = parse_tag(kind)?;
            println!("{}", print_with_aliases(&combinator(CombinatorKind::new(tag, *level))?));
            Ok(Outcome::Success)
        }
        Command::Ccc { command: CccCommand::Check { seed, instances } } => {
            let report = check_axioms_with(*seed, *instances, &norm);
            for a in &report.axioms {
                let status = if a.failures.is_empty() { "PASS" } else { "FAIL" };
                println!("{status}\t{}\t{} instances\t{} equations\t{}", a.name, a.instances, a.equations, a.schema);
                for f in &a.failures {
                    eprintln!("  {}: {f}", a.name);
                }
            }
            Ok(if report.all_pass() { Outcome::Success } else { Outcome::Negative })
        }
        Command::Ccc { command: CccCommand::Collapse { f, g, object } } => {
            let (f, g) = (parse_arrow(f)?, parse_arrow(g)?);
            let cert = collapse_with(&f, &g, parse_type(object)?, &cli.budget.options())?;
            print!("{}", to_json(&Certificate::Collapse(cert).envelope()?)?);
            Ok(Outcome::Success)
        }
        Command::Corpus { dir } => corpus(dir, &cli.budget),
    }
}

fn measure_text(m: &Measure) -> String {
    match m.exact() {
        Some(n) if n.bits() <= 64 => n.to_string(),
        Some(n) => format!("~2^{}", n.bits()),
        None => "beyond-cap".into(),
    }
}

fn parse_tag(s: &str) -> Result<Tag> {
    Ok(match s {
        "C" => Tag::Cond,
        "R" => Tag::Lower,
        "E" => Tag::Expo,
        "S" => Tag::Add,
        "M" => Tag::Mul,
        "Pi" => Tag::Pair,
        "pi1" => Tag::Proj1,
        "pi2" => Tag::Proj2,
        "T" => Tag::AuxT,
        "H" => Tag::AuxH,
        "P" => Tag::Pred,
        "Z" => Tag::Raise,
        _ => match s.strip_prefix('D').and_then(|k| k.trim_start_matches('^').parse().ok()) {
            Some(k) => Tag::Check(k),
            None => bail!("unknown combinator {s:?}"),
        },
    })
}

fn verify_certificate(env: &cert::Envelope, norm: &Normalizer) -> Result<bool> {
    let (c, extra) = decode(env)?;
    Ok(match c {
        Certificate::Lambda(c) => verify_with(&c, norm)?,
        Certificate::Product(c) => verify_product_with(&c, norm)?,
        Certificate::Collapse(c) => {
            let ((p1, p2), schema) = extra.expect("collapse extras");
            replay_with(&c, norm)?.verified() && (p1, p2) == c.derived() && schema == c.schema()
        }
    })
}

/// Splits a pair file at its `---` line.
fn read_pair(path: &Path) -> Result<(String, String)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut parts = vec![String::new()];
    for line in text.lines() {
        if line.trim() == "---" {
            parts.push(String::new());
        } else {
            parts.last_mut().unwrap().push_str(line);
            parts.last_mut().unwrap().push('\n');
        }
    }
    match parts.as_slice() {
        [a, b] => Ok((a.trim().to_string(), b.trim().to_string())),
        _ => bail!("{}: expected two terms separated by a line ---", path.display()),
    }
}

fn corpus_one(path: &Path, budget: &Budget) -> Result<String> {
    let (a, b) = read_pair(path)?;
    let ctx = Context::new();
    let (a, b) = (read(&a, &ctx)?, read(&b, &ctx)?);
    let opts = budget.options();
    let norm = budget.normalizer();
    if a.is_product_free() && b.is_product_free() {
        let p = Ty::p();
        let c = separate_two_with(&a, &b, &Term::free("e", p), &Term::free("f", p), &opts)?;
        let ok = verify_with(&c, &norm)?;
        Ok(format!("{}\tlevel {}", if ok { "verified" } else { "FAILED" }, c.level))
    } else {
        let c = separate_prod_with(&a, &b, Ty::p(), &opts)?;
        let ok = verify_product_with(&c, &norm)?;
        Ok(format!(
            "{}\tcomponent {} of {}, level {}",
            if ok { "verified" } else { "FAILED" },
            c.index,
            c.components,
            c.inner.level
        ))
    }
}

fn corpus(dir: &Path, budget: &Budget) -> Result<Outcome> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    let results: Vec<(String, Result<String>)> = files
        .par_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), corpus_one(p, budget)))
        .collect();
    let mut all = true;
    for (name, r) in results {
        match r {
            Ok(line) => {
                all &= line.starts_with("verified");
                println!("{name}\t{line}");
            }
            Err(e) => {
                let code = exit_code(&e);
                all &= code == 4;
                println!("{name}\t{}\t{e:#}", if code == 4 { "equal" } else { "error" });
            }
        }
    }
    Ok(if all { Outcome::Success } else { Outcome::Negative })
}
