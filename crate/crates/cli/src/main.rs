//! Batch front end for concatenated conjugate code pairs: build and verify
//! pairs from JSON specs, encode/decode words, run channel simulations and
//! print analytic bounds.
//!
//! Exit codes: 0 success, 1 a decode reported failure, 2 invalid input or a
//! verification failure.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use conjcat::codespec::{
    self, concat_to_value, ext_vec_to_value, pair_to_value, report_to_value, CodeSpec,
};
use conjcat::concat::{ConcatRandomness, ConcatenatedPair};
use conjcat::decoder::{build_inner_tables, syndrome_only_decode, two_stage_decode};
use conjcat::evaluate::{
    self, analytic_bounds, fidelity_lower_bound, monte_carlo, swapped_pair, ChannelModel,
};
use conjcat::galois::Ext;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "conjcat", version, about = "Concatenated conjugate (CSS) code pair toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized choice (encoding randomness, simulation).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Emit one CSV row (simulate only).
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a pair from a spec file, run all verification, write the pair
    /// document.
    Build {
        spec: PathBuf,
        /// Output path for the pair document (stdout when absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Skip embedding the assembled parity-check matrices.
        #[arg(long)]
        no_matrices: bool,
    },
    /// Encode a message (k*K digits over GF(q)) into a transmitted word.
    Encode {
        pair: PathBuf,
        #[arg(long)]
        message: String,
    },
    /// Decode a received word, or a syndrome in the block row order.
    Decode {
        pair: PathBuf,
        #[arg(long, conflicts_with = "syndrome")]
        word: Option<String>,
        #[arg(long)]
        syndrome: Option<String>,
    },
    /// Monte Carlo simulation on the q-ary symmetric channel.
    Simulate {
        pair: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Analytic failure bounds and rates at a channel parameter.
    Bound {
        pair: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Re-run every structural check on a spec or pair document.
    Verify { spec: PathBuf },
}

fn main() -> ExitCode {
    // Die quietly when the consumer of a pipe goes away (conjcat ... | head).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Build { spec, output, no_matrices } => {
            cmd_build(spec, output.as_deref(), !no_matrices)
        }
        Command::Encode { pair, message } => cmd_encode(cli, pair, message),
        Command::Decode { pair, word, syndrome } => {
            cmd_decode(cli, pair, word.as_deref(), syndrome.as_deref())
        }
        Command::Simulate { pair, p, trials } => cmd_simulate(cli, pair, *p, *trials),
        Command::Bound { pair, p } => cmd_bound(cli, pair, *p),
        Command::Verify { spec } => cmd_verify(spec),
    }
}

fn load_spec(path: &Path) -> Result<CodeSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    codespec::parse_spec(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_concat(path: &Path) -> Result<ConcatenatedPair> {
    match load_spec(path)? {
        CodeSpec::Concatenated(cp) => Ok(*cp),
        CodeSpec::Single { .. } => {
            bail!("{}: this command needs a concatenated pair (an \"outer\" object)", path.display())
        }
    }
}

/// Structural checks shared by `build` and `verify`; returns one line per
/// check.
fn verification_lines(spec: &CodeSpec) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    match spec {
        CodeSpec::Concatenated(cp) => {
            cp.verify_duality().map_err(|e| anyhow!("{e}"))?;
            lines.push("duality identities: OK".to_string());
            for (i, inner) in cp.inners().iter().enumerate() {
                if !inner.pairing_is_identity() {
                    bail!("inner pair {i}: generator pairing is not the identity");
                }
            }
            lines.push("generator pairing: OK".to_string());
            let h = cp.parity_check_l1();
            if h.rref().rank != cp.n_total() - cp.l1().dim() {
                bail!("block parity-check matrix of L1 is rank-deficient");
            }
            let h2 = cp.parity_check_l2();
            if h2.rref().rank != cp.n_total() - cp.l2().dim() {
                bail!("block parity-check matrix of L2 is rank-deficient");
            }
            lines.push("parity-check ranks: OK".to_string());
            if cp.l1().dim() + cp.l2().dim() != cp.n_total() + cp.k_total() {
                bail!("dimension identity dim L1 + dim L2 = n + k failed");
            }
            lines.push("dimension identity: OK".to_string());
        }
        CodeSpec::Single { pair, .. } => {
            if !pair.pairing_is_identity() {
                bail!("generator pairing is not the identity");
            }
            lines.push("generator pairing: OK".to_string());
            if !pair.c1().contains_code(&pair.c2().dual()) {
                bail!("containment check failed");
            }
            lines.push("containment: OK".to_string());
        }
    }
    Ok(lines)
}

fn cmd_build(spec_path: &Path, output: Option<&Path>, with_matrices: bool) -> Result<ExitCode> {
    let spec = load_spec(spec_path)?;
    let lines = verification_lines(&spec)?;
    let (summary, doc) = match &spec {
        CodeSpec::Concatenated(cp) => (
            format!("[[{}, {}]] over GF({})", cp.n_total(), cp.k_total(), cp.tower().q()),
            concat_to_value(cp, with_matrices),
        ),
        CodeSpec::Single { tower, pair } => {
            let mut doc = pair_to_value(pair);
            doc.as_object_mut()
                .unwrap()
                .insert("field".into(), codespec::field_to_value(tower));
            (
                format!("[[{}, {}]] over GF({})", pair.n(), pair.k(), pair.q()),
                doc,
            )
        }
    };
    let rendered = serde_json::to_string_pretty(&doc)?;
    match output {
        Some(path) => {
            std::fs::write(path, rendered + "\n")
                .with_context(|| format!("cannot write {}", path.display()))?;
            println!("{summary}, {}", lines.join(", "));
            println!("wrote {}", path.display());
        }
        None => {
            eprintln!("{summary}, {}", lines.join(", "));
            println!("{rendered}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(spec_path: &Path) -> Result<ExitCode> {
    let spec = load_spec(spec_path)?;
    for line in verification_lines(&spec)? {
        println!("{line}");
    }
    println!("all checks passed");
    Ok(ExitCode::SUCCESS)
}

fn parse_base_vec(q: u32, text: &str, what: &str) -> Result<Vec<u32>> {
    let value = if q <= 10 {
        serde_json::Value::String(text.to_string())
    } else {
        serde_json::Value::Array(
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u64>()
                        .map(serde_json::Value::from)
                        .map_err(|_| anyhow!("{what}: bad integer {tok:?}"))
                })
                .collect::<Result<_>>()?,
        )
    };
    codespec::vec_from_value(q, &value, what).map_err(|e| anyhow!("{e}"))
}

fn message_symbols(cp: &ConcatenatedPair, digits: &[u32]) -> Result<Vec<Ext>> {
    let k = cp.inner_k();
    let expected = k * cp.outer_k();
    if digits.len() != expected {
        bail!("message must have {expected} digits, got {}", digits.len());
    }
    let t = cp.tower();
    Ok(digits.chunks(k).map(|chunk| cp.bases().from_coords(t, chunk)).collect())
}

fn cmd_encode(cli: &Cli, pair_path: &Path, message: &str) -> Result<ExitCode> {
    let cp = load_concat(pair_path)?;
    let q = cp.tower().q();
    let digits = parse_base_vec(q, message, "message")?;
    let msg = message_symbols(&cp, &digits)?;
    let word = cp.encode_message(&msg, &ConcatRandomness::Seed(cli.seed))?;
    let coset = cp.message_coset_rep(&msg)?;
    if cli.json {
        let doc = json!({
            "word": codespec::vec_to_value(q, &word),
            "coset": ext_vec_to_value(cp.tower(), &coset),
            "seed": cli.seed,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("{}", render_base_vec(q, &word));
    }
    Ok(ExitCode::SUCCESS)
}

fn render_base_vec(q: u32, v: &[u32]) -> String {
    if q <= 10 {
        v.iter().map(|&d| char::from_digit(d, 10).unwrap()).collect()
    } else {
        v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

fn cmd_decode(
    cli: &Cli,
    pair_path: &Path,
    word: Option<&str>,
    syndrome: Option<&str>,
) -> Result<ExitCode> {
    let cp = load_concat(pair_path)?;
    let tables = build_inner_tables(&cp)?;
    let q = cp.tower().q();
    match (word, syndrome) {
        (Some(text), None) => {
            let received = parse_base_vec(q, text, "word")?;
            let report = two_stage_decode(&cp, &tables, &received)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report_to_value(cp.tower(), &report))?
                );
            } else {
                let coset: Vec<String> = report
                    .message_coset
                    .iter()
                    .map(|&x| codespec::ext_to_string(cp.tower(), x))
                    .collect();
                println!("ok: {}", report.ok);
                println!("message coset: {}", coset.join(" "));
            }
            Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        (None, Some(text)) => {
            let s = parse_base_vec(q, text, "syndrome")?;
            let outcome = syndrome_only_decode(&cp, &tables, &s)?;
            if cli.json {
                let doc = json!({
                    "error_estimate": codespec::vec_to_value(q, &outcome.error_estimate),
                    "outer_delta": ext_vec_to_value(cp.tower(), &outcome.outer_delta),
                    "outer_ok": outcome.outer_ok,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("outer ok: {}", outcome.outer_ok);
                println!("error estimate: {}", render_base_vec(q, &outcome.error_estimate));
            }
            Ok(if outcome.outer_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        _ => bail!("pass exactly one of --word or --syndrome"),
    }
}

fn cmd_simulate(cli: &Cli, pair_path: &Path, p: f64, trials: u64) -> Result<ExitCode> {
    let cp = load_concat(pair_path)?;
    let channel = ChannelModel::new(cp.tower().q(), p)?;
    let report = monte_carlo(&cp, &channel, trials, cli.seed)?;
    if cli.csv {
        println!("{}", conjcat::EvalReport::csv_header());
        println!("{}", report.csv_row());
    } else if cli.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.to_text_table());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(cli: &Cli, pair_path: &Path, p: f64) -> Result<ExitCode> {
    let cp = load_concat(pair_path)?;
    let bounds = analytic_bounds(&cp, p)?;
    let swapped = swapped_pair(&cp)?;
    let swapped_bounds = analytic_bounds(&swapped, p)?;
    let fidelity = fidelity_lower_bound(bounds.tail_bound, swapped_bounds.tail_bound);
    let r_q = cp.k_total() as f64 / cp.n_total() as f64;
    let r_cl = evaluate::rate_quotient_to_classical(r_q)?;
    if cli.json {
        let doc = json!({
            "p": p,
            "theta": bounds.theta,
            "inner_exact": bounds.inner_exact,
            "tail_bound": bounds.tail_bound,
            "entropy_exponent": bounds.entropy_exponent,
            "swapped_inner_exact": swapped_bounds.inner_exact,
            "swapped_tail_bound": swapped_bounds.tail_bound,
            "fidelity_bound": fidelity,
            "rate_quotient": r_q,
            "rate_classical": r_cl,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("{:<28} {}", "p", p);
        println!("{:<28} {}", "theta", bounds.theta);
        println!("{:<28} {:.6e}", "inner exact failure prob", bounds.inner_exact);
        println!("{:<28} {:.6e}", "tail bound", bounds.tail_bound);
        println!("{:<28} {:.6}", "entropy exponent", bounds.entropy_exponent);
        println!("{:<28} {:.6e}", "swapped inner exact", swapped_bounds.inner_exact);
        println!("{:<28} {:.6e}", "swapped tail bound", swapped_bounds.tail_bound);
        println!("{:<28} {:.6}", "fidelity bound", fidelity);
        println!("{:<28} {:.6}", "rate (quotient)", r_q);
        println!("{:<28} {:.6}", "rate (classical view)", r_cl);
    }
    Ok(ExitCode::SUCCESS)
}
