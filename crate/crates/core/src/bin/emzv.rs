//! Command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use emzv::decomp::{EmzvIndex, Engine};
use emzv::derlie::{find_relations_among, fourier_membership, lyndon_candidates, to_e0_basis, uu_dual_membership, LieExpr};
use emzv::doc::{self, ComponentResult, MembershipDoc};
use emzv::ncalg::build_ainf;
use emzv::{CoeffElem, EPoly, Error, MzvTable, Rational};

#[derive(Parser)]
#[command(name = "emzv", version, about = "Exact decomposition of A-elliptic multiple zeta values")]
struct Cli {
    /// MZV reduction table (defaults to the built-in weight-8 table)
    #[arg(long, global = true, env = "EMZV_MZV_TABLE")]
    mzv_table: Option<PathBuf>,
    /// Number of q-expansion terms
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    order: u64,
    /// Degree bound for noncommutative series
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    degree: u64,
    /// Degree bound for the free Lie algebra
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(4..))]
    lie_degree: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_index(s: &str) -> Result<EmzvIndex, String> {
    EmzvIndex::parse(s).map_err(|e| e.to_string())
}

fn parse_epoly(s: &str) -> Result<EPoly, String> {
    EPoly::parse(s).map_err(|e| e.to_string())
}

fn parse_coeff(s: &str) -> Result<CoeffElem, String> {
    CoeffElem::parse(s).map_err(|e| e.to_string())
}

fn parse_lie(s: &str) -> Result<LieExpr, String> {
    LieExpr::parse(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct IndexArg {
    /// Index k1,k2,...; "" is the empty index
    #[arg(long, value_parser = parse_index)]
    index: EmzvIndex,
}

#[derive(Args)]
struct Target {
    /// Decompose this index and test its nonconstant part
    #[arg(long, value_parser = parse_index, conflicts_with = "epoly", required_unless_present = "epoly")]
    index: Option<EmzvIndex>,
    /// Test this polynomial, e.g. "3*e(10,4) + e(8,6)"
    #[arg(long, value_parser = parse_epoly)]
    epoly: Option<EPoly>,
}

#[derive(Subcommand)]
enum Command {
    /// Iterated Eisenstein integral decomposition of I(index)
    Decompose(IndexArg),
    /// q-expansion of I(index)
    Qexp(IndexArg),
    /// Constant term of I(index)
    Gamma(IndexArg),
    /// Rational relations among all I(index) of a given length and weight
    Relations {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        weight: u32,
        /// Constants adjoined as extra columns, e.g. "pi^2"
        #[arg(long, value_parser = parse_coeff)]
        adjoin: Vec<CoeffElem>,
    },
    /// Relations among brackets of the derivations eps_2k
    DerlieRelations {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        depth: usize,
        /// Smallest eps index among enumerated candidates
        #[arg(long, default_value_t = 2)]
        min_letter: u32,
        /// Explicit candidates such as "[e10,e4]" instead of Lyndon enumeration
        #[arg(long, value_parser = parse_lie)]
        candidate: Vec<LieExpr>,
    },
    /// Whether a polynomial lies in the Fourier subspace
    FourierCheck(Target),
    /// Whether each homogeneous component kills the relations among the eps_2k
    Membership(Target),
    /// The constant-term series A_inf
    DumpAinf,
    /// Run the built-in checks
    Verify {
        /// Only run these check ids
        #[arg(long)]
        only: Vec<String>,
    },
}

enum Failure {
    Compute(Error),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Checks(out)) => {
            println!("{out}");
            ExitCode::from(1)
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, doc: &T, text: String) -> String {
    match cli.format {
        Format::Json => doc::to_json(doc),
        Format::Text => text,
    }
}

fn render_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn target_poly(engine: &Engine, t: &Target) -> Result<EPoly, Error> {
    match (&t.index, &t.epoly) {
        (Some(i), _) => Ok(engine.decompose(i)?.epoly.without_constant()),
        (None, Some(p)) => Ok(p.clone()),
        (None, None) => unreachable!("clap requires one of them"),
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let table = match &cli.mzv_table {
        Some(p) => MzvTable::load_path(p)?,
        None => MzvTable::shipped(),
    };
    let order = cli.order as usize;
    let lie_degree = cli.lie_degree as usize;
    let engine = Engine::new(table.clone()).with_order(order);
    let out = match &cli.command {
        Command::Decompose(a) => {
            let d = engine.decompose(&a.index)?;
            emit(cli, &doc::DecompositionDoc::new(&d), format!("I{} = {}", d.index, d.epoly))
        }
        Command::Qexp(a) => {
            let i = &a.index;
            let s = engine.emzv_qexp(i, order)?;
            emit(cli, &doc::QExpDoc::new(i, &s), format!("I{i} = {s}"))
        }
        Command::Gamma(a) => {
            let i = &a.index;
            let g = engine.gamma(i)?;
            #[derive(Serialize)]
            struct GammaDoc {
                schema: &'static str,
                index: Vec<u32>,
                gamma: String,
            }
            let d = GammaDoc { schema: "emzv/gamma/v1", index: i.entries().to_vec(), gamma: g.to_string() };
            emit(cli, &d, format!("gamma{i} = {g}"))
        }
        Command::Relations { length, weight, adjoin } => {
            let indices: Vec<EmzvIndex> = EmzvIndex::all(*length, *weight)
                .into_iter()
                .filter(|i| i.len() == *length && i.weight() == *weight)
                .collect();
            let adjoined = adjoin.clone();
            let kernel = engine.find_emzv_relations(&indices, &adjoined)?;
            let mut text = String::from("columns:");
            for i in &indices {
                text += &format!(" I{i}");
            }
            for c in &adjoined {
                text += &format!(" {c}");
            }
            for v in &kernel {
                text += &format!("\n{}", render_vector(v));
            }
            if kernel.is_empty() {
                text += "\nno relations";
            }
            emit(cli, &doc::EmzvRelationsDoc::new(&indices, &adjoined, &kernel), text)
        }
        Command::DerlieRelations { weight, depth, min_letter, candidate } => {
            let candidates = if candidate.is_empty() {
                lyndon_candidates(*weight, *depth, *min_letter)
            } else {
                candidate.clone()
            };
            if candidates.is_empty() {
                return Err(Error::PreconditionViolated("no candidates of that weight and depth".into()).into());
            }
            let r = find_relations_among(&candidates, lie_degree)?;
            let names: Vec<String> = r.candidates.iter().map(|c| c.to_string()).collect();
            let mut text = format!(
                "weight {}, depth {}, lie degree {}\ncandidates: {}",
                r.weight,
                r.depth,
                r.lie_degree,
                names.join(" ")
            );
            for v in &r.kernel {
                text += &format!("\n{}", render_vector(v));
            }
            if r.kernel.is_empty() {
                text += "\nno relations";
            }
            emit(cli, &doc::LieRelationsDoc::new(&r), text)
        }
        Command::FourierCheck(t) => {
            let x = target_poly(&engine, t)?;
            let fourier = fourier_membership(&x, order);
            let (_, residual) = to_e0_basis(&x);
            let d = MembershipDoc {
                schema: doc::MEMBERSHIP_SCHEMA.into(),
                input: x.to_string(),
                uu_dual: None,
                fourier: Some(fourier),
                e0_residual: Some(residual.to_string()),
            };
            let text = format!("{x}\nfourier: {fourier}\nE0 residual: {residual}");
            let out = emit(cli, &d, text);
            if !fourier {
                return Err(Failure::Checks(out));
            }
            out
        }
        Command::Membership(t) => {
            let x = target_poly(&engine, t)?;
            let comps = uu_dual_membership(&x, lie_degree)?;
            let mut text = format!("{x}");
            for ((p, s), ok) in &comps {
                text += &format!("\nlength {p}, weight {s}: {}", if *ok { "in dual image" } else { "NOT in dual image" });
            }
            let passed = comps.values().all(|b| *b);
            let d = MembershipDoc {
                schema: doc::MEMBERSHIP_SCHEMA.into(),
                input: x.to_string(),
                uu_dual: Some(
                    comps.iter().map(|(&(length, weight), &passed)| ComponentResult { length, weight, passed }).collect(),
                ),
                fourier: None,
                e0_residual: None,
            };
            let out = emit(cli, &d, text);
            if !passed {
                return Err(Failure::Checks(out));
            }
            out
        }
        Command::DumpAinf => {
            let a = build_ainf(cli.degree as usize, &table)?;
            #[derive(Serialize)]
            struct Term {
                word: String,
                coeff: String,
            }
            #[derive(Serialize)]
            struct AinfDoc {
                schema: &'static str,
                degree: usize,
                terms: Vec<Term>,
            }
            let terms: Vec<Term> = a.iter().map(|(w, c)| Term { word: w.to_string(), coeff: c.to_string() }).collect();
            let text = terms.iter().map(|t| format!("{}: {}", t.word, t.coeff)).collect::<Vec<_>>().join("\n");
            emit(cli, &AinfDoc { schema: "emzv/ainf/v1", degree: a.maxdeg(), terms }, text)
        }
        Command::Verify { only } => {
            let outcomes = emzv::verify::run(&table, if only.is_empty() { None } else { Some(only) });
            if outcomes.is_empty() {
                return Err(Error::PreconditionViolated(format!("no checks named {only:?}")).into());
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let d = doc::VerifyDoc {
                schema: doc::VERIFY_SCHEMA.into(),
                checks: outcomes
                    .iter()
                    .map(|o| doc::CheckDoc {
                        id: o.id.into(),
                        title: o.title.into(),
                        passed: o.passed,
                        detail: o.detail.clone(),
                    })
                    .collect(),
            };
            let mut lines: Vec<String> = outcomes
                .iter()
                .map(|o| {
                    let mut l = format!("{} {:<10} {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title);
                    if !o.passed {
                        l += &format!(": {}", o.detail);
                    }
                    l
                })
                .collect();
            let n = outcomes.iter().filter(|o| o.passed).count();
            lines.push(format!("{n}/{} checks passed", outcomes.len()));
            let out = emit(cli, &d, lines.join("\n"));
            if !passed {
                return Err(Failure::Checks(out));
            }
            out
        }
    };
    Ok(out)
}
