use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use catbound_core::catalog::{build_ring, Catalog};
use catbound_core::cone::filtration_ledger;
use catbound_core::corpus::{
    corpus_documents, link_documents, lint, load_corpus, read_dir_documents, read_document,
};
use catbound_core::cup::{cup_length, weighted_wgt_lower, WeightAssignment, DEFAULT_MAX_SEARCH};
use catbound_core::dsl::{Declaration, SourceDocument};
use catbound_core::report::{render_space_text, render_table_json, render_table_text, space_json};
use catbound_core::solver::{ganea_check, propagate_with, Solution, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Lusternik-Schnirelmann category bounds from symbolic presentations.
#[derive(Debug, Parser)]
#[command(name = "catbound", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Read the corpus from this directory instead of the built-in copy.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Cap on the number of exponent vectors a ring search may visit.
    #[arg(long, default_value_t = DEFAULT_MAX_SEARCH, global = true)]
    max_search: u64,
    /// Shuffle the rule order with this seed before propagating.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cup-length of a ring declared in a file.
    Cup { file: PathBuf, ring: String },
    /// Weighted cup-length of a ring, or of the ring of a space.
    Wgt { file: PathBuf, name: String },
    /// Solved bounds for one corpus space.
    Bound { space: String },
    /// The rank-by-family table with provenance.
    Table,
    /// Filtration bookkeeping for one bundle.
    Ledger { bundle: String },
    /// Ganea-conjecture status for one space, or for all.
    CheckGanea { space: Option<String> },
    /// Parse, link and lint corpus files.
    Validate { files: Vec<PathBuf> },
}

/// Output and whether the run hit a domain error after producing it.
struct Outcome {
    text: String,
    json: Value,
    failed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            failed: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => {
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialise") + "\n"
                }
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Cup { file, ring } => cmd_cup(cli, file, ring),
        Command::Wgt { file, name } => cmd_wgt(cli, file, name),
        Command::Bound { space } => cmd_bound(cli, space),
        Command::Table => cmd_table(cli),
        Command::Ledger { bundle } => cmd_ledger(cli, bundle),
        Command::CheckGanea { space } => cmd_ganea(cli, space.as_deref()),
        Command::Validate { files } => cmd_validate(cli, files),
    }
}

fn parsed_file(path: &Path) -> Result<SourceDocument> {
    let doc = read_document(path).map_err(|e| anyhow!("{e}"))?;
    if !doc.is_ok() {
        let lines: Vec<String> = doc
            .diagnostics
            .iter()
            .map(|d| format!("{}:{d}", doc.path))
            .collect();
        bail!("parse failed\n{}", lines.join("\n"));
    }
    Ok(doc)
}

fn load_catalog(cli: &Cli) -> Result<Catalog> {
    match &cli.corpus {
        Some(dir) => read_dir_documents(dir)
            .and_then(link_documents)
            .map_err(|e| anyhow!("{e}")),
        None => load_corpus().map_err(|e| anyhow!("{e}")),
    }
}

fn solve(cli: &Cli) -> Result<Solution> {
    let catalog = load_catalog(cli)?;
    let opts = SolverOptions {
        max_search: cli.max_search,
    };
    Ok(propagate_with(&catalog, &opts, cli.seed))
}

fn cmd_cup(cli: &Cli, file: &Path, ring: &str) -> Result<Outcome> {
    let doc = parsed_file(file)?;
    let Some(Declaration::Ring(decl)) = doc.find(ring) else {
        bail!("{}: no ring named `{ring}`", doc.path);
    };
    let pres = build_ring(decl).with_context(|| format!("ring `{ring}`"))?;
    let r = cup_length(&pres, cli.max_search)?;
    let witness = pres.format_exponents(&r.witness);
    Ok(Outcome::ok(
        format!(
            "ring {ring} over Z/{}\ncup {}\nwitness {witness}\n",
            pres.prime(),
            r.value
        ),
        json!({
            "ring": ring,
            "prime": pres.prime(),
            "cup": r.value,
            "witness": r.witness,
            "witness_text": witness,
        }),
    ))
}

fn cmd_wgt(cli: &Cli, file: &Path, name: &str) -> Result<Outcome> {
    let doc = parsed_file(file)?;
    let (ring_name, loopspace_even) = match doc.find(name) {
        Some(Declaration::Ring(_)) => (name.to_string(), false),
        Some(Declaration::Space(s)) => {
            let Some(c) = &s.cohomology else {
                bail!("space `{name}` declares no cohomology ring");
            };
            (c.ring.clone(), s.loopspace_even)
        }
        _ => bail!("{}: no ring or space named `{name}`", doc.path),
    };
    let Some(Declaration::Ring(decl)) = doc.find(&ring_name) else {
        bail!("{}: ring `{ring_name}` is not declared in this file", doc.path);
    };
    let pres = build_ring(decl).with_context(|| format!("ring `{ring_name}`"))?;
    let weights = WeightAssignment::for_space(&pres, loopspace_even);
    let r = weighted_wgt_lower(&pres, &weights, cli.max_search)?;
    let witness = pres.format_exponents(&r.witness);
    let weight_text = pres
        .generators()
        .iter()
        .zip(weights.as_slice())
        .map(|(g, w)| format!("{}={w}", g.name))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Outcome::ok(
        format!(
            "ring {ring_name} over Z/{}\nweights {weight_text}\nwgt-lower {}\nwitness {witness}\n",
            pres.prime(),
            r.value
        ),
        json!({
            "ring": ring_name,
            "prime": pres.prime(),
            "weights": weights.as_slice(),
            "wgt_lower": r.value,
            "witness": r.witness,
            "witness_text": witness,
        }),
    ))
}

fn cmd_bound(cli: &Cli, space: &str) -> Result<Outcome> {
    let sol = solve(cli)?;
    let rec = sol
        .spaces
        .get(space)
        .ok_or_else(|| anyhow!("no space named `{space}` in the corpus"))?;
    if let Some(c) = &rec.contradiction {
        eprintln!("error: {}: {c}", rec.name);
    }
    Ok(Outcome {
        text: render_space_text(rec),
        json: space_json(rec),
        failed: rec.is_halted(),
    })
}

fn cmd_table(cli: &Cli) -> Result<Outcome> {
    let sol = solve(cli)?;
    let mut failed = false;
    for (name, c) in sol.contradictions() {
        eprintln!("error: {name}: {c}");
        failed = true;
    }
    for f in &sol.search_failures {
        eprintln!("warning: {} ({}): {}", f.space, f.ring, f.message);
    }
    Ok(Outcome {
        text: render_table_text(&sol),
        json: render_table_json(&sol),
        failed,
    })
}

fn cmd_ledger(cli: &Cli, bundle: &str) -> Result<Outcome> {
    let catalog = load_catalog(cli)?;
    let b = catalog
        .bundles
        .get(bundle)
        .ok_or_else(|| anyhow!("no bundle named `{bundle}` in the corpus"))?;
    let ledger = filtration_ledger(b)?;
    Ok(Outcome::ok(ledger.render_text(), json!(ledger)))
}

fn cmd_ganea(cli: &Cli, space: Option<&str>) -> Result<Outcome> {
    let sol = solve(cli)?;
    let recs: Vec<_> = match space {
        Some(name) => vec![sol
            .spaces
            .get(name)
            .ok_or_else(|| anyhow!("no space named `{name}` in the corpus"))?],
        None => sol.spaces.values().collect(),
    };
    let mut text = String::new();
    let mut entries = serde_json::Map::new();
    for rec in recs {
        let status = ganea_check(rec);
        text.push_str(&format!("{}: {status}\n", rec.name));
        let j = space_json(rec);
        entries.insert(
            rec.name.clone(),
            json!({ "ganea": j["ganea"], "rule": j["ganea_rule"], "cat": j["cat"] }),
        );
    }
    Ok(Outcome::ok(text, serde_json::Value::Object(entries)))
}

fn cmd_validate(cli: &Cli, files: &[PathBuf]) -> Result<Outcome> {
    let docs = if !files.is_empty() {
        files
            .iter()
            .map(|f| read_document(f).map_err(|e| anyhow!("{e}")))
            .collect::<Result<Vec<_>>>()?
    } else if let Some(dir) = &cli.corpus {
        read_dir_documents(dir).map_err(|e| anyhow!("{e}"))?
    } else {
        corpus_documents()
    };
    let mut problems: Vec<String> = docs
        .iter()
        .flat_map(|d| d.diagnostics.iter().map(move |x| format!("{}:{x}", d.path)))
        .collect();
    let count = docs.len();
    let mut summary = json!(null);
    if problems.is_empty() {
        match link_documents(docs) {
            Ok(cat) => {
                problems.extend(lint(&cat).into_iter().map(|i| format!("{}: {}", i.subject, i.message)));
                summary = json!({
                    "rings": cat.rings.len(),
                    "spaces": cat.spaces.len(),
                    "bundles": cat.bundles.len(),
                    "products": cat.products.len(),
                    "facts": cat.facts.len(),
                });
            }
            Err(e) => problems.extend(e.to_string().lines().map(str::to_string)),
        }
    }
    let failed = !problems.is_empty();
    let text = if failed {
        for p in &problems {
            eprintln!("error: {p}");
        }
        format!("{} problem(s) in {count} file(s)\n", problems.len())
    } else {
        format!(
            "ok: {count} file(s), {} ring(s), {} space(s), {} bundle(s), {} product(s)\n",
            summary["rings"], summary["spaces"], summary["bundles"], summary["products"]
        )
    };
    Ok(Outcome {
        text,
        json: json!({ "files": count, "ok": !failed, "problems": problems, "catalog": summary }),
        failed,
    })
}
