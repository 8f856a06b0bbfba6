use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use permres_core::bounds::interval::parse_rational;
use permres_core::bounds::{formula_suite, lemma22_check, theorem13_check, thresholds, BoundReport, Formula};
use permres_core::constructions::LabeledAction;
use permres_core::describe::describe;
use permres_core::error::{Error, Result};
use permres_core::group::{format_generator_file, parse_generator_file};
use permres_core::manifest::{run_manifest_text, RunReport, REFERENCE_MANIFEST};
use permres_core::num_bigint::BigUint;
use permres_core::recipe::Recipe;
use permres_core::search::{
    base_size_exact, count_regular_tuples, distinguishing_number, is_distinguishing, stabilizer_scan, BaseOutcome,
    Budget, RegularCount, BUDGET_ENV, DEFAULT_DIST_CAP,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "permres", version, about = "Permutation groups, base sizes and bound checks")]
struct Cli {
    /// Print JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Per-command time budget in milliseconds.
    #[arg(long, global = true, env = BUDGET_ENV)]
    budget_ms: Option<u64>,
    /// Worker threads (0 for one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and print its generators.
    Construct { recipe: String },
    /// Order, orbits, primitivity and composition factors.
    Describe { recipe: String },
    /// Group order.
    Order { recipe: String },
    /// Minimal base size with a witness.
    BaseSize {
        recipe: String,
        #[arg(long, default_value_t = 64)]
        max_b: usize,
    },
    /// Distinguishing number with a witness colouring.
    DistNumber {
        recipe: String,
        #[arg(long, default_value_t = DEFAULT_DIST_CAP)]
        cap: usize,
    },
    /// Tests a predicate on every pointwise stabilizer of c points.
    StabScan {
        recipe: String,
        #[arg(long)]
        c: usize,
        /// `solvable` or `gamma:d`.
        #[arg(long)]
        predicate: String,
    },
    /// Counts t-tuples with trivial pointwise stabilizer.
    RegCount {
        recipe: String,
        #[arg(long)]
        t: usize,
        /// A number, or `auto` for the group order.
        #[arg(long)]
        threshold: Option<String>,
    },
    /// Evaluates a bound or threshold.
    Bounds {
        #[arg(long, value_enum)]
        check: BoundCheck,
        /// Needed for lemma22 and thm13.
        recipe: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        /// Rational δ or ε, as `p/q`.
        #[arg(long)]
        delta: Option<String>,
        /// Formula name: prod, faw, diag, subsets, partition or bcp_order.
        #[arg(long)]
        formula: Option<String>,
        /// Comma-separated formula parameters.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Measured value to compare with the formula.
        #[arg(long)]
        measured: Option<String>,
    },
    /// Runs a check manifest (the bundled one when no path is given).
    Verify {
        manifest: Option<PathBuf>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundCheck {
    Lemma22,
    Thm13,
    Formula,
    MEpsilon,
    #[value(name = "n-c-delta")]
    NCDelta,
}

/// A JSON recipe (inline or in a file) or a generator file.
fn load(arg: &str) -> Result<LabeledAction> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    if text.trim_start().starts_with('{') {
        Recipe::from_json(&text)?.build()
    } else {
        let group = parse_generator_file(&text)?;
        let labels = (1..=group.degree()).map(|i| i.to_string()).collect();
        Ok(LabeledAction {
            group,
            labels,
            abstract_order: None,
        })
    }
}

fn budget(cli: &Cli) -> Budget {
    cli.budget_ms.map_or_else(Budget::unlimited, Budget::millis)
}

fn table(rows: &[(&str, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

fn one_based(points: &[usize]) -> String {
    let p: Vec<String> = points.iter().map(|x| (x + 1).to_string()).collect();
    format!("[{}]", p.join(", "))
}

fn rational(s: Option<&String>, what: &str) -> Result<permres_core::num_rational::BigRational> {
    let s = s.ok_or_else(|| Error::invalid(format!("--{what} is required")))?;
    parse_rational(s).ok_or_else(|| Error::invalid(format!("{s:?} is not a rational p/q")))
}

fn bound_rows(r: &BoundReport) -> String {
    let v = serde_json::to_value(r).unwrap_or(Value::Null);
    let rows: Vec<(&str, String)> = ["bound_name", "parameters", "bound_value", "measured_value", "verdict", "comparison", "note"]
        .iter()
        .filter(|k| !v[**k].is_null())
        .map(|k| (*k, v[*k].to_string().trim_matches('"').to_string()))
        .collect();
    table(&rows)
}

fn report_text(r: &RunReport) -> String {
    let mut out = String::new();
    let w = r.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &r.checks {
        let s = serde_json::to_value(c.status).unwrap();
        out.push_str(&format!("{:<w$}  {:<16}  {:>7} ms\n", c.id, s.as_str().unwrap_or(""), c.elapsed_ms));
        for a in c.assertions.iter().filter(|a| a.status != permres_core::manifest::Status::Pass) {
            let m = a.measured.as_ref().map_or("-".to_string(), Value::to_string);
            let e = a.error.as_deref().unwrap_or("");
            out.push_str(&format!("    {} expected {} measured {} {}\n", a.operation, a.expected, m, e));
        }
    }
    out.push_str(&format!(
        "{} pass, {} fail, {} skipped\n",
        r.summary.pass, r.summary.fail, r.summary.skipped_resource
    ));
    out
}

/// Runs the command; returns the output and the exit code.
fn run(cli: &Cli) -> Result<(Value, String, u8)> {
    let b = budget(cli);
    Ok(match &cli.command {
        Command::Construct { recipe } => {
            let a = load(recipe)?;
            let g = &a.group;
            let gens: Vec<String> = g.generators().iter().map(ToString::to_string).collect();
            let v = json!({
                "label": g.label(),
                "degree": g.degree(),
                "generators": gens,
                "labels": a.labels,
            });
            let mut text = format_generator_file(g);
            for (i, l) in a.labels.iter().enumerate() {
                if *l != (i + 1).to_string() {
                    text.push_str(&format!("# {} = {l}\n", i + 1));
                }
            }
            (v, text, 0)
        }
        Command::Describe { recipe } => {
            let d = describe(&load(recipe)?)?;
            let v = serde_json::to_value(&d)?;
            let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
            let text = table(&[
                ("label", opt(d.label.clone())),
                ("degree", d.degree.to_string()),
                ("order", d.order.to_string()),
                ("kernel order", opt(d.kernel_order.as_ref().map(ToString::to_string))),
                ("orbit lengths", format!("{:?}", d.orbit_lengths)),
                ("transitive", d.transitive.to_string()),
                ("primitive", d.primitive.to_string()),
                ("2-transitive", d.two_transitive.to_string()),
                ("suborbits", opt(d.suborbits.as_ref().map(|s| format!("{s:?}")))),
                ("solvable", d.solvable.to_string()),
                ("factors", opt(d.composition_factors.as_ref().map(|f| f.join(" ")))),
                ("minimal Γ_d", opt(d.minimal_gamma_d.map(|x| x.to_string()))),
                ("note", opt(d.note.clone())),
            ]);
            (v, text, 0)
        }
        Command::Order { recipe } => {
            let o = load(recipe)?.group.order();
            (json!({ "order": o.to_string() }), format!("{o}\n"), 0)
        }
        Command::BaseSize { recipe, max_b } => {
            let g = load(recipe)?.group;
            let out = base_size_exact(&g, *max_b, &b)?;
            let v = serde_json::to_value(&out)?;
            let (text, code) = match &out {
                BaseOutcome::Exact { witness } => (
                    table(&[
                        ("b(G)", witness.size.to_string()),
                        ("base", one_based(&witness.points)),
                        ("minimal", witness.minimal.to_string()),
                    ]),
                    0,
                ),
                BaseOutcome::ExceedsMax { max_b, lower } => {
                    (table(&[("b(G)", format!("> {max_b}")), ("lower bound", lower.to_string())]), 0)
                }
                BaseOutcome::Partial { lower, upper } => (
                    table(&[
                        ("status", "budget exhausted".into()),
                        ("lower bound", lower.to_string()),
                        ("upper bound", upper.size.to_string()),
                        ("base", one_based(&upper.points)),
                    ]),
                    2,
                ),
            };
            (v, text, code)
        }
        Command::DistNumber { recipe, cap } => {
            let g = load(recipe)?.group;
            let d = distinguishing_number(&g, *cap, &b)?;
            let verified = is_distinguishing(&g, &d.coloring)?;
            let v = json!({"r": d.r, "coloring": d.coloring, "minimal": d.minimal, "verified": verified});
            let colours: Vec<String> = d.coloring.iter().map(ToString::to_string).collect();
            let text = table(&[
                ("d(G)", d.r.to_string()),
                ("colouring", colours.join(" ")),
                ("verified", verified.to_string()),
            ]);
            (v, text, 0)
        }
        Command::StabScan { recipe, c, predicate } => {
            let g = load(recipe)?.group;
            let r = stabilizer_scan(&g, *c, predicate.parse()?, &b)?;
            let v = serde_json::to_value(&r)?;
            let orders: Vec<String> = r.orders.iter().map(|(o, n)| format!("{o}x{n}")).collect();
            let text = table(&[
                ("predicate", r.predicate.to_string()),
                ("verdict", serde_json::to_value(r.verdict)?.as_str().unwrap_or("").to_string()),
                ("representatives", r.representatives.to_string()),
                ("exhaustive", r.exhaustive.to_string()),
                ("max order", r.max_order().map_or("-".into(), ToString::to_string)),
                ("orders", orders.join(" ")),
            ]);
            (v, text, 0)
        }
        Command::RegCount { recipe, t, threshold } => {
            let g = load(recipe)?.group;
            let th = match threshold.as_deref() {
                None => None,
                Some("auto") => Some(g.order()),
                Some(s) => Some(s.parse::<BigUint>().map_err(|_| Error::invalid(format!("bad threshold {s:?}")))?),
            };
            let r = count_regular_tuples(&g, *t, th.as_ref(), &b)?;
            let text = match &r {
                RegularCount::Exact { count } => format!("{count}\n"),
                RegularCount::ReachedThreshold { threshold } => format!(">= {threshold}\n"),
            };
            (serde_json::to_value(&r)?, text, 0)
        }
        Command::Bounds {
            check,
            recipe,
            d,
            c,
            delta,
            formula,
            params,
            measured,
        } => {
            let need = |x: Option<usize>, what: &str| x.ok_or_else(|| Error::invalid(format!("--{what} is required")));
            let group = || -> Result<_> {
                let r = recipe.as_ref().ok_or_else(|| Error::invalid("a recipe is required"))?;
                Ok(load(r)?.group)
            };
            let report = match check {
                BoundCheck::Lemma22 => lemma22_check(&group()?, need(*d, "d")?)?,
                BoundCheck::Thm13 => {
                    theorem13_check(&group()?, need(*c, "c")?, need(*d, "d")?, &rational(delta.as_ref(), "delta")?, &b)?
                }
                BoundCheck::Formula => {
                    let f: Formula = formula.as_deref().ok_or_else(|| Error::invalid("--formula is required"))?.parse()?;
                    let big = |s: &String| s.trim().parse::<BigUint>().map_err(|_| Error::invalid(format!("bad integer {s:?}")));
                    let ps = params.iter().map(big).collect::<Result<Vec<_>>>()?;
                    let m = measured.as_ref().map(big).transpose()?;
                    formula_suite(f, &ps, m.as_ref())?
                }
                BoundCheck::MEpsilon => {
                    let eps = rational(delta.as_ref(), "delta")?;
                    let m = thresholds::m_epsilon_param(&thresholds::Param::rational(eps.clone())?)?;
                    let v = json!({"eps": eps.to_string(), "m_epsilon": m.m, "monotone_from": m.monotone_from, "start": m.start});
                    let text = table(&[("ε", eps.to_string()), ("M(ε)", m.m.to_string())]);
                    return Ok((v, text, 0));
                }
                BoundCheck::NCDelta => {
                    let dl = rational(delta.as_ref(), "delta")?;
                    let c = need(*c, "c")? as u32;
                    let mut calc = thresholds::NCalculator::new(dl.clone())?;
                    let n = calc.n(c, 0)?;
                    let v = json!({"c": c, "delta": dl.to_string(), "n": n, "trace": calc.trace});
                    let text = table(&[("c", c.to_string()), ("δ", dl.to_string()), ("N(c, δ)", n.to_string())]);
                    return Ok((v, text, 0));
                }
            };
            (serde_json::to_value(&report)?, bound_rows(&report), 0)
        }
        Command::Verify { manifest, out } => {
            let text = match manifest {
                Some(p) => std::fs::read_to_string(p)?,
                None => REFERENCE_MANIFEST.to_string(),
            };
            let report = run_manifest_text(&text, cli.threads)?;
            let v = serde_json::to_value(&report)?;
            if let Some(p) = out {
                std::fs::write(p, serde_json::to_string_pretty(&v)? + "\n")?;
            }
            (v, report_text(&report), report.exit_code() as u8)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok((v, text, code)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&v).unwrap_or_default());
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            let resource = matches!(e, Error::Resource(_) | Error::DegreeLimit { .. } | Error::OrderLimit { .. });
            if cli.json {
                println!("{}", json!({"error": e.to_string(), "resource": resource}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(if resource { 2 } else { 3 })
        }
    }
}
