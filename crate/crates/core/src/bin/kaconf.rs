use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ka_conformance::checker::{check, prune_suite, CheckMode};
use ka_conformance::fault::{bound_states, member, search_counterexample, FaultDomain};
use ka_conformance::format::{parse_cover_words, parse_identifiers, parse_machine, serialize_machine};
use ka_conformance::generators::{generate, GenConfig, Method};
use ka_conformance::mealy::{eccentricity, passes, PassVerdict};
use ka_conformance::obs::basis_from_cover;
use ka_conformance::reproduce::{reproduce, EXAMPLES};
use ka_conformance::{build_testing_tree, MealyMachine, StateCover, TestSuite};

const OK: u8 = 0;
const NO: u8 = 1;

#[derive(Parser)]
#[command(
    name = "kaconf",
    version,
    about = "k-A-complete conformance testing for Mealy machines"
)]
struct Cli {
    /// Report encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Refuse to run randomized commands without an explicit `--seed`.
    #[arg(long, global = true)]
    ci: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Wp, HSI or W suite.
    Generate {
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Lines of `state: word ; word ; ...`.
        #[arg(long)]
        identifiers: Option<PathBuf>,
        spec: PathBuf,
    },
    /// Check the sufficient completeness conditions on a suite.
    Check {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_mode, default_value = "kA")]
        mode: CheckMode,
        #[arg(long)]
        cover: Option<PathBuf>,
        spec: PathBuf,
        suite: PathBuf,
    },
    /// Run a suite against an implementation.
    VerifyPass {
        spec: PathBuf,
        implementation: PathBuf,
        suite: PathBuf,
    },
    /// Apartness, basis and candidate sets of a suite's testing tree.
    Apart {
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Report apartness of two tree nodes given by their access words.
        #[arg(long, num_args = 2, value_names = ["WORD", "WORD"])]
        pair: Option<Vec<String>>,
        spec: PathBuf,
        suite: PathBuf,
    },
    /// Largest distance of any state from the states a cover reaches.
    Eccentricity {
        #[arg(long)]
        cover: PathBuf,
        machine: PathBuf,
    },
    /// Decide fault-domain membership.
    Member {
        /// `um:M`, `uka:K:cover.txt`, `ua:cover.txt`, joined by `+` for unions.
        #[arg(long, value_parser = parse_domain)]
        domain: DomainArg,
        machine: PathBuf,
    },
    /// Search a fault domain for an inequivalent machine passing the suite.
    Search {
        #[arg(long, value_parser = parse_domain)]
        domain: DomainArg,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        seed: Option<u64>,
        spec: PathBuf,
        suite: PathBuf,
    },
    /// Largest machine in U_k^A for n cover states and l inputs.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        k: u32,
    },
    /// Greedily shrink a suite while the checker keeps accepting it.
    Prune {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_mode, default_value = "kA")]
        mode: CheckMode,
        #[arg(long)]
        cover: Option<PathBuf>,
        spec: PathBuf,
        suite: PathBuf,
    },
    /// Rerun a worked example and verify each of its claims.
    Reproduce {
        #[arg(value_parser = parse_example)]
        example: String,
    },
}

#[derive(Clone, Debug)]
enum DomainArg {
    Um(usize),
    UkA(usize, PathBuf),
    UA(PathBuf),
    Union(Vec<DomainArg>),
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: ka_conformance::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<CheckMode, String> {
    s.parse().map_err(|e: ka_conformance::Error| e.to_string())
}

fn parse_example(s: &str) -> Result<String, String> {
    let aliases = ["fig4", "fig5", "appendixA"];
    if EXAMPLES.contains(&s) || aliases.contains(&s) {
        Ok(s.into())
    } else {
        Err(format!("expected one of {}", EXAMPLES.join(", ")))
    }
}

fn parse_domain(s: &str) -> Result<DomainArg, String> {
    if s.contains('+') {
        return s
            .split('+')
            .map(parse_domain)
            .collect::<Result<_, _>>()
            .map(DomainArg::Union);
    }
    let nat = |x: &str| x.parse::<usize>().map_err(|_| format!("`{x}` is not a natural number"));
    let parts: Vec<&str> = s.splitn(3, ':').collect();
    match parts.as_slice() {
        ["um", m] => Ok(DomainArg::Um(nat(m)?)),
        ["uka", k, file] if !file.is_empty() => Ok(DomainArg::UkA(nat(k)?, file.into())),
        ["ua", file] if !file.is_empty() => Ok(DomainArg::UA(file.into())),
        _ => Err("expected um:M, uka:K:cover.txt or ua:cover.txt".into()),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_machine(path: &Path) -> Result<MealyMachine, String> {
    parse_machine(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_suite(spec: &MealyMachine, path: &Path) -> Result<TestSuite, String> {
    TestSuite::parse(spec.inputs(), &read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_cover_words(m: &MealyMachine, path: &Path) -> Result<Vec<ka_conformance::Word>, String> {
    parse_cover_words(m.inputs(), &read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_cover(spec: &MealyMachine, path: Option<&Path>) -> Result<StateCover, String> {
    match path {
        Some(p) => {
            StateCover::from_words(spec, load_cover_words(spec, p)?).map_err(|e| format!("{}: {e}", p.display()))
        }
        None => spec.minimal_state_cover().map_err(|e| e.to_string()),
    }
}

fn resolve(m: &MealyMachine, d: &DomainArg) -> Result<FaultDomain, String> {
    Ok(match d {
        DomainArg::Um(n) => FaultDomain::Um(*n),
        DomainArg::UkA(k, p) => FaultDomain::UkA {
            k: *k,
            cover: load_cover_words(m, p)?,
        },
        DomainArg::UA(p) => FaultDomain::UA {
            cover: load_cover_words(m, p)?,
        },
        DomainArg::Union(ds) => FaultDomain::Union(ds.iter().map(|d| resolve(m, d)).collect::<Result<_, _>>()?),
    })
}

fn cover_strings(m: &MealyMachine, cover: &StateCover) -> Vec<String> {
    cover.words().map(|w| m.render(w)).collect()
}

fn emit(format: Format, text: impl FnOnce() -> String, structured: impl FnOnce() -> serde_json::Value) {
    let body = match format {
        Format::Text => text(),
        Format::Structured => serde_json::to_string_pretty(&structured()).expect("json") + "\n",
    };
    // A closed pipe (`| head`) is not an error worth a panic.
    let _ = std::io::stdout().write_all(body.as_bytes());
}

fn run(cli: Cli) -> Result<u8, String> {
    let format = cli.format;
    let lib = |e: ka_conformance::Error| e.to_string();
    match cli.command {
        Command::Generate {
            method,
            k,
            cover,
            identifiers,
            spec,
        } => {
            let s = load_machine(&spec)?;
            let cover = load_cover(&s, cover.as_deref())?;
            let mut config = GenConfig::new(method, k, cover.clone());
            if let Some(p) = identifiers {
                config = config.with_identifiers(parse_identifiers(&s, &read(&p)?).map_err(lib)?);
            }
            let suite = generate(&s, &config).map_err(lib)?;
            emit(
                format,
                || suite.serialize(s.inputs()),
                || {
                    json!({
                        "method": method.to_string(),
                        "k": k,
                        "cover": cover_strings(&s, &cover),
                        "tests": suite.maximal().map(|w| s.render(w)).collect::<Vec<_>>(),
                    })
                },
            );
            Ok(OK)
        }
        Command::Check {
            k,
            mode,
            cover,
            spec,
            suite,
        } => {
            let s = load_machine(&spec)?;
            let t = load_suite(&s, &suite)?;
            let cover = load_cover(&s, cover.as_deref())?;
            let report = check(&s, &t, &cover, k, mode).map_err(lib)?;
            emit(
                format,
                || report.to_string(),
                || serde_json::to_value(&report).expect("json"),
            );
            Ok(if report.is_accepted() { OK } else { NO })
        }
        Command::VerifyPass {
            spec,
            implementation,
            suite,
        } => {
            let s = load_machine(&spec)?;
            let m = load_machine(&implementation)?;
            let t = load_suite(&s, &suite)?;
            let verdict = passes(&m, &s, &t).map_err(lib)?;
            let code = if verdict.is_pass() { OK } else { NO };
            match verdict {
                PassVerdict::Pass => emit(format, || "pass\n".into(), || json!({"verdict": "pass"})),
                PassVerdict::Fail {
                    test,
                    spec_output,
                    impl_output,
                } => {
                    let test = s.render(&test);
                    emit(
                        format,
                        || {
                            let got = impl_output.as_ref().map_or("(undefined)".into(), |o| o.join(" "));
                            format!(
                                "fail\ntest: {test}\nexpected: {}\nobserved: {got}\n",
                                spec_output.join(" ")
                            )
                        },
                        || json!({"verdict": "fail", "test": test, "expected": spec_output, "observed": impl_output}),
                    )
                }
            }
            Ok(code)
        }
        Command::Apart {
            cover,
            pair,
            spec,
            suite,
        } => {
            let s = load_machine(&spec)?;
            let t = load_suite(&s, &suite)?;
            let cover = load_cover(&s, cover.as_deref())?;
            let tree = build_testing_tree(&s, &t).map_err(lib)?;
            let matrix = tree.apartness();
            let mut text = format!("tree nodes: {}\napart pairs: {}\n", tree.len(), matrix.count_apart());
            let mut doc = json!({"nodes": tree.len(), "apart_pairs": matrix.count_apart()});
            if let Some(p) = pair {
                let node = |w: &str| -> Result<usize, String> {
                    let word = s.inputs().parse_word(w).map_err(lib)?;
                    tree.node_of(&word).ok_or_else(|| format!("`{w}` is not a tree node"))
                };
                let (q, r) = (node(&p[0])?, node(&p[1])?);
                let witness = matrix.witness(&tree, q, r).ok().map(|w| s.render(&w));
                match &witness {
                    Some(w) => text += &format!("`{}` # `{}` with witness {w}\n", p[0], p[1]),
                    None => text += &format!("`{}` and `{}` are not apart\n", p[0], p[1]),
                }
                doc["pair"] = json!({"q": p[0], "r": p[1], "apart": witness.is_some(), "witness": witness});
            }
            match basis_from_cover(&tree, &cover, &matrix) {
                Ok(strat) => {
                    let acc = |q: usize| tree.access_string(q);
                    let mut rows = Vec::new();
                    text += &format!(
                        "basis: {}\n",
                        strat.basis().iter().map(|&q| acc(q)).collect::<Vec<_>>().join(", ")
                    );
                    for j in 0..strat.num_strata() {
                        for &q in strat.stratum(j) {
                            let c: Vec<String> = strat.candidate_nodes(q).into_iter().map(acc).collect();
                            text += &format!("F^{j} {} C = {{{}}}\n", acc(q), c.join(", "));
                            rows.push(json!({"node": acc(q), "stratum": j, "candidates": c}));
                        }
                    }
                    doc["basis"] = json!(strat.basis().iter().map(|&q| acc(q)).collect::<Vec<_>>());
                    doc["frontier"] = json!(rows);
                }
                Err(e) => {
                    text += &format!("basis: invalid ({e})\n");
                    doc["basis_error"] = json!(e.to_string());
                }
            }
            emit(format, || text, || doc);
            Ok(OK)
        }
        Command::Eccentricity { cover, machine } => {
            let m = load_machine(&machine)?;
            let words = load_cover_words(&m, &cover)?;
            let sources = StateCover::from_words(&m, words).map_err(lib)?;
            let states: Vec<usize> = sources.entries().iter().map(|(_, q)| *q).collect();
            let e = eccentricity(&m, &states).map_err(lib)?;
            emit(format, || format!("{e}\n"), || json!({"eccentricity": e.to_string()}));
            Ok(OK)
        }
        Command::Member { domain, machine } => {
            let m = load_machine(&machine)?;
            let d = resolve(&m, &domain)?;
            let is = member(&m, &d).map_err(lib)?;
            emit(
                format,
                || format!("{}member of {d}\n", if is { "" } else { "not a " }),
                || json!({"domain": d.to_string(), "member": is}),
            );
            Ok(if is { OK } else { NO })
        }
        Command::Search {
            domain,
            budget,
            seed,
            spec,
            suite,
        } => {
            if cli.ci && seed.is_none() {
                return Err("--seed is required with --ci".into());
            }
            let seed = seed.unwrap_or(0);
            let s = load_machine(&spec)?;
            let t = load_suite(&s, &suite)?;
            let d = resolve(&s, &domain)?;
            let found = search_counterexample(&s, &t, &d, budget, seed).map_err(lib)?;
            match &found {
                Some(c) => emit(
                    format,
                    || {
                        format!(
                            "counterexample in {d} (seed {}, {:?})\ndistinguishing word: {}\n{}",
                            c.mutant.seed,
                            c.mutant.origin,
                            s.render(&c.distinguishing),
                            serialize_machine(&c.mutant.machine)
                        )
                    },
                    || {
                        json!({
                            "domain": d.to_string(),
                            "found": true,
                            "seed": c.mutant.seed,
                            "origin": c.mutant.origin,
                            "edits": c.mutant.edits,
                            "distinguishing": s.render(&c.distinguishing),
                            "machine": serialize_machine(&c.mutant.machine),
                        })
                    },
                ),
                None => emit(
                    format,
                    || format!("no counterexample in {d} within {budget} machines (seed {seed})\n"),
                    || json!({"domain": d.to_string(), "found": false, "budget": budget, "seed": seed}),
                ),
            }
            Ok(if found.is_some() { NO } else { OK })
        }
        Command::Bound { n, l, k } => {
            let b = bound_states(n, l, k).map_err(lib)?;
            emit(
                format,
                || format!("{b}\n"),
                || json!({"n": n, "l": l, "k": k, "bound": b.to_string()}),
            );
            Ok(OK)
        }
        Command::Prune {
            k,
            mode,
            cover,
            spec,
            suite,
        } => {
            let s = load_machine(&spec)?;
            let t = load_suite(&s, &suite)?;
            let cover = load_cover(&s, cover.as_deref())?;
            let pruned = prune_suite(&s, &t, &cover, k, mode).map_err(lib)?;
            emit(
                format,
                || pruned.serialize(s.inputs()),
                || {
                    json!({
                        "cover": cover_strings(&s, &cover),
                        "before": t.maximal().count(),
                        "after": pruned.maximal().count(),
                        "tests": pruned.maximal().map(|w| s.render(w)).collect::<Vec<_>>(),
                    })
                },
            );
            Ok(OK)
        }
        Command::Reproduce { example } => {
            let r = reproduce(&example).map_err(lib)?;
            emit(format, || r.to_string(), || serde_json::to_value(&r).expect("json"));
            Ok(if r.all_ok() { OK } else { NO })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
