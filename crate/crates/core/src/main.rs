use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use awg_sen::awg::{build_connectivity_table, build_routing_table, AwgSpec};
use awg_sen::export::{emit_topology, TopologyFormat};
use awg_sen::render::{render_table, TableFormat};
use awg_sen::rwa::{
    detect_contentions, is_concentrated, is_monotonic, self_route, verify_theorem1_with_limits,
    Request, RequestSet, DEFAULT_SET_LIMIT,
};
use awg_sen::sen::{build_sen_with_limit, DEFAULT_CHANNEL_LIMIT};
use awg_sen::shuffle::{build_modular_table, build_w};
use awg_sen::{compute_metrics, Error};

const EXIT_CONTENTION: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_GUARD: u8 = 4;

#[derive(Parser)]
#[command(name = "awg-sen", version, about = "AWG-based WDM shuffle-exchange network toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    /// Wavelength routing table (T_A for --l, T_C for --r).
    Routing,
    /// Connectivity table (T_B for --l, T_D for --r).
    Connectivity,
}

#[derive(Subcommand)]
enum Command {
    /// Print the routing or connectivity table of A(m,l) or W(m,rm).
    Table {
        #[arg(long)]
        m: usize,
        /// Outputs of a single AWG A(m,l).
        #[arg(long, conflicts_with = "r", required_unless_present = "r")]
        l: Option<usize>,
        /// AWG count of W(m,rm).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_enum, default_value = "routing")]
        kind: TableKind,
        /// csv, text or markdown.
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_CHANNEL_LIMIT)]
        limit: u64,
    },
    /// Build S(m,n), or W(m,rm) when --r is given, and print its topology.
    Build {
        #[arg(long)]
        m: usize,
        #[arg(long, required_unless_present = "r")]
        n: Option<usize>,
        #[arg(long, conflicts_with = "n")]
        r: Option<usize>,
        /// dot or json.
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_CHANNEL_LIMIT)]
        limit: u64,
    },
    /// Trace the self-routing path of one request.
    Route {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_CHANNEL_LIMIT)]
        limit: u64,
    },
    /// Route a request set and report contentions (exit 2 if any).
    Check {
        /// Request-set JSON file, or "-" for stdin.
        #[arg(long)]
        set: String,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_CHANNEL_LIMIT)]
        limit: u64,
    },
    /// Route every monotonic and concentrated request set of S(m,n).
    Verify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CHANNEL_LIMIT)]
        limit: u64,
        /// Cap on the number of request sets enumerated.
        #[arg(long, default_value_t = DEFAULT_SET_LIMIT)]
        max_sets: u128,
    },
    /// Component counts of S(m,n), or W(m,rm) when --r is given.
    Metrics {
        #[arg(long)]
        m: usize,
        #[arg(long, required_unless_present = "r")]
        n: Option<usize>,
        #[arg(long, conflicts_with = "n")]
        r: Option<usize>,
        /// text or json.
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_CHANNEL_LIMIT)]
        limit: u64,
    },
}

enum Outcome {
    Clean,
    Contention,
}

fn guard(what: &'static str, required: u128, limit: u64) -> Result<(), Error> {
    if required > limit as u128 {
        return Err(Error::ResourceGuard { what, required, limit: limit as u128 });
    }
    Ok(())
}

fn run(cmd: Command, out: &mut impl Write) -> Result<Outcome, Error> {
    let write = |out: &mut dyn Write, bytes: &[u8]| {
        out.write_all(bytes).map_err(|e| Error::Usage(format!("writing output: {e}")))
    };
    match cmd {
        Command::Table { m, l, r, kind, format, limit } => {
            let format: TableFormat = format.parse()?;
            let table = match (l, r) {
                (Some(l), _) => {
                    guard("channel count m*l", m as u128 * l as u128, limit)?;
                    let spec = AwgSpec::new(m, l)?;
                    match kind {
                        TableKind::Routing => build_routing_table(&spec).to_text_table(),
                        TableKind::Connectivity => build_connectivity_table(&spec).to_text_table(),
                    }
                }
                (None, Some(r)) => {
                    guard("channel count r*m^2", r as u128 * (m as u128).pow(2), limit)?;
                    match kind {
                        TableKind::Routing => build_modular_table(m, r)?.to_text_table(),
                        TableKind::Connectivity => build_w(m, r)?.connectivity_table()?.to_text_table(),
                    }
                }
                (None, None) => return Err(Error::Usage("table needs --l or --r".into())),
            };
            write(out, &render_table(&table, format))?;
        }
        Command::Build { m, n, r, format, limit } => {
            let format: TopologyFormat = format.parse()?;
            let bytes = match (n, r) {
                (_, Some(r)) => {
                    guard("channel count r*m^2", r as u128 * (m as u128).pow(2), limit)?;
                    emit_topology(&build_w(m, r)?, format)
                }
                (Some(n), None) => emit_topology(&build_sen_with_limit(m, n, limit)?, format),
                (None, None) => return Err(Error::Usage("build needs --n or --r".into())),
            };
            write(out, &bytes)?;
        }
        Command::Route { m, n, src, dst, format, limit } => {
            let net = build_sen_with_limit(m, n, limit)?;
            let route = self_route(&net, &Request::parse(&src, &dst, m)?)?;
            let text = match format.as_str() {
                "text" => route.trace(),
                "json" => format!("{:#}\n", route.to_json()),
                other => return Err(Error::Usage(format!("unknown route format {other:?}"))),
            };
            write(out, text.as_bytes())?;
        }
        Command::Check { set, format, limit } => {
            let text = if set == "-" {
                let mut s = String::new();
                io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(&set)
                    .map_err(|e| Error::Parse(format!("reading {set}: {e}")))?
            };
            let set = RequestSet::from_json(&text)?;
            let net = build_sen_with_limit(set.m(), set.n(), limit)?;
            let found = detect_contentions(&net, &set)?;
            let body = match format.as_str() {
                "text" => {
                    let mut s = format!(
                        "requests: {}\nmonotonic: {}\nconcentrated: {}\ncontentions: {}\n",
                        set.len(),
                        is_monotonic(&set),
                        is_concentrated(&set),
                        found.len()
                    );
                    for c in &found {
                        s.push_str(&format!("{c}\n"));
                    }
                    s
                }
                "json" => {
                    let value = serde_json::json!({
                        "requests": set.len(),
                        "monotonic": is_monotonic(&set),
                        "concentrated": is_concentrated(&set),
                        "contentions": found,
                    });
                    format!("{value:#}\n")
                }
                other => return Err(Error::Usage(format!("unknown check format {other:?}"))),
            };
            write(out, body.as_bytes())?;
            if !found.is_empty() {
                return Ok(Outcome::Contention);
            }
        }
        Command::Verify { m, n, limit, max_sets } => {
            let report = verify_theorem1_with_limits(m, n, limit, max_sets)?;
            let mut text = format!(
                "S({m},{n}): {} monotonic and concentrated sets tested, {} with contention\n",
                report.sets_tested, report.violations
            );
            if let Some(w) = &report.witness {
                text.push_str(&format!("first violating set: {}\n", w.join(" ")));
            }
            write(out, text.as_bytes())?;
            if report.violations > 0 {
                return Ok(Outcome::Contention);
            }
        }
        Command::Metrics { m, n, r, format, limit } => {
            let report = match (n, r) {
                (_, Some(r)) => {
                    guard("channel count r*m^2", r as u128 * (m as u128).pow(2), limit)?;
                    compute_metrics(&build_w(m, r)?)
                }
                (Some(n), None) => compute_metrics(&build_sen_with_limit(m, n, limit)?),
                (None, None) => return Err(Error::Usage("metrics needs --n or --r".into())),
            };
            let text = match format.as_str() {
                "text" => report.to_text(),
                "json" => format!("{}\n", serde_json::to_string_pretty(&report).expect("plain data")),
                other => return Err(Error::Usage(format!("unknown metrics format {other:?}"))),
            };
            write(out, text.as_bytes())?;
        }
    }
    Ok(Outcome::Clean)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Contention) => ExitCode::from(EXIT_CONTENTION),
        Err(e) => {
            let _ = out.flush();
            eprintln!("awg-sen: {e}");
            match e {
                Error::ResourceGuard { .. } => ExitCode::from(EXIT_GUARD),
                _ => ExitCode::from(EXIT_INVALID),
            }
        }
    }
}
