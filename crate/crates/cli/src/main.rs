use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use xpfsa::json;
use xpfsa::quantize::{quantize_quantile, quantize_updown};
use xpfsa::{
    causality_network, gamma_empirical, infer_pfsa, infer_xpfsa, predict_next, simulate_coupled,
    Alphabet, CoupledSystemSpec, Error, InferenceConfig, SeriesTable, SymbolStream,
};

#[derive(Parser)]
#[command(
    name = "xpfsa",
    about = "Probabilistic automata, cross-models, and causality networks over symbol streams",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer a self-model from a symbol stream file
    InferSelf {
        /// Symbol stream file (one line of symbols)
        stream: PathBuf,
        #[command(flatten)]
        inference: InferenceArgs,
        /// Comma-separated alphabet labels; inferred from the data if absent
        #[arg(long)]
        alphabet: Option<String>,
        /// Output machine JSON path (stdout if absent)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Infer the cross-model from a source stream to a target stream
    InferCross {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        inference: InferenceArgs,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        target_alphabet: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Coefficient of causal dependence of the target on the source
    Gamma {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        inference: InferenceArgs,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        target_alphabet: Option<String>,
    },
    /// Quantize a CSV table and compute the full pairwise causality network
    Network {
        csv: PathBuf,
        #[command(flatten)]
        inference: InferenceArgs,
        /// Quantizer: `updown` or `quantile-K` (e.g. quantile-4)
        #[arg(long, default_value = "updown")]
        quantizer: String,
        /// Output prefix; writes <prefix>.json and <prefix>.dot
        #[arg(short, long, default_value = "network")]
        output: PathBuf,
    },
    /// Predict the next-symbol distribution from a self-model, a
    /// cross-model, and a recent history over the source alphabet
    Predict {
        self_model: PathBuf,
        cross_model: PathBuf,
        /// Recent source history (same line format as stream files)
        #[arg(long, default_value = "")]
        history: String,
    },
    /// Sample an aligned stream pair from a coupled-system spec
    Simulate {
        spec: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory; writes a.txt and b.txt
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Quantize a CSV table into one stream file per column
    Quantize {
        csv: PathBuf,
        #[arg(long, default_value = "updown")]
        quantizer: String,
        /// Output directory
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct InferenceArgs {
    /// Merge tolerance in sup norm
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Heap depth bound (0 = derive from epsilon)
    #[arg(long, default_value_t = 0)]
    depth: usize,
    /// Minimum occurrence support behind any estimate
    #[arg(long, default_value_t = 50)]
    nmin: u64,
    /// Hard cap on discovered states
    #[arg(long, default_value_t = 64)]
    max_states: usize,
    /// Minimum stream length
    #[arg(long, default_value_t = 1000)]
    min_length: usize,
}

impl InferenceArgs {
    fn config(&self) -> InferenceConfig {
        InferenceConfig {
            epsilon: self.epsilon,
            depth: if self.depth == 0 { None } else { Some(self.depth) },
            n_min: self.nmin,
            max_states: self.max_states,
            min_length: self.min_length,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.to_string() })
            );
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> xpfsa::Result<()> {
    match cli.command {
        Command::InferSelf { stream, inference, alphabet, output } => {
            let s = read_stream(&stream, alphabet.as_deref())?;
            let machine = infer_pfsa(&s, &inference.config())?;
            emit(json::pfsa_to_json(&machine), output.as_deref())
        }
        Command::InferCross { source, target, inference, alphabet, target_alphabet, output } => {
            let a = read_stream(&source, alphabet.as_deref())?;
            let b = read_stream(&target, target_alphabet.as_deref())?;
            let result = infer_xpfsa(&a, &b, &inference.config())?;
            emit(json::xpfsa_to_json(&result.machine), output.as_deref())
        }
        Command::Gamma { source, target, inference, alphabet, target_alphabet } => {
            let a = read_stream(&source, alphabet.as_deref())?;
            let b = read_stream(&target, target_alphabet.as_deref())?;
            let report = gamma_empirical(&a, &b, &inference.config())?;
            println!(
                "{{\"gamma\":{},\"raw_gamma\":{},\"n_states\":{},\"sync_string\":{},\"occupancy\":{},\"base\":{},\"target_frequencies\":{}}}",
                json::fmt_real(report.gamma),
                json::fmt_real(report.raw_gamma),
                report.cross.machine.n_states(),
                serde_json::json!(report.cross.sync_string.render()),
                real_array(report.occupancy.weights()),
                real_array(report.base.weights()),
                real_array(&report.target_frequencies),
            );
            Ok(())
        }
        Command::Network { csv, inference, quantizer, output } => {
            let table = SeriesTable::from_csv_path(&csv)?;
            let streams = quantize_table(&table, &quantizer)?;
            let network = causality_network(&streams, &inference.config())?;
            let json_path = output.with_extension("json");
            let dot_path = output.with_extension("dot");
            fs::write(&json_path, json::network_to_json(&network))?;
            fs::write(&dot_path, json::network_to_dot(&network))?;
            println!(
                "{}",
                serde_json::json!({
                    "nodes": network.nodes.len(),
                    "arcs": network.arcs.len(),
                    "skipped": network.skipped.len(),
                    "json": json_path,
                    "dot": dot_path,
                })
            );
            Ok(())
        }
        Command::Predict { self_model, cross_model, history } => {
            let machine = json::pfsa_from_json(&fs::read_to_string(&self_model)?)?;
            let cross = json::xpfsa_from_json(&fs::read_to_string(&cross_model)?)?;
            let history = SymbolStream::parse(cross.input_alphabet().clone(), &history)?;
            let tau = predict_next(&machine, &cross, &history)?;
            println!(
                "{{\"symbols\":{},\"tau\":{}}}",
                serde_json::json!(cross.output_alphabet().labels()),
                real_array(tau.weights()),
            );
            Ok(())
        }
        Command::Simulate { spec, length, seed, output } => {
            let spec: CoupledSystemSpec = serde_json::from_str(&fs::read_to_string(&spec)?)?;
            let (a, b) = simulate_coupled(&spec, length, seed)?;
            fs::create_dir_all(&output)?;
            let a_path = output.join("a.txt");
            let b_path = output.join("b.txt");
            fs::write(&a_path, format!("{}\n", a.render()))?;
            fs::write(&b_path, format!("{}\n", b.render()))?;
            println!(
                "{}",
                serde_json::json!({ "a": a_path, "b": b_path, "length": length, "seed": seed })
            );
            Ok(())
        }
        Command::Quantize { csv, quantizer, output } => {
            let table = SeriesTable::from_csv_path(&csv)?;
            let streams = quantize_table(&table, &quantizer)?;
            fs::create_dir_all(&output)?;
            let mut written = Vec::new();
            for (name, stream) in &streams {
                let path = output.join(format!("{}.txt", sanitize(name)));
                fs::write(&path, format!("{}\n", stream.render()))?;
                written.push(path);
            }
            println!("{}", serde_json::json!({ "written": written }));
            Ok(())
        }
    }
}

fn emit(text: String, output: Option<&Path>) -> xpfsa::Result<()> {
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n"))?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn real_array(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|&v| json::fmt_real(v)).collect();
    format!("[{}]", cells.join(","))
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Reads a one-line stream file. Without an explicit alphabet the distinct
/// labels found in the data, sorted, become the alphabet.
fn read_stream(path: &Path, alphabet: Option<&str>) -> xpfsa::Result<SymbolStream> {
    let text = fs::read_to_string(path)?;
    let line = text.trim();
    let alphabet = match alphabet {
        Some(spec) => Alphabet::new(spec.split(',').map(str::trim).map(String::from))?,
        None => infer_alphabet(line)?,
    };
    SymbolStream::parse(alphabet, line)
}

fn infer_alphabet(line: &str) -> xpfsa::Result<Alphabet> {
    let labels: BTreeSet<String> = if line.contains(',') {
        line.split(',').map(|p| p.trim().to_string()).collect()
    } else {
        line.chars().map(|c| c.to_string()).collect()
    };
    if labels.is_empty() {
        return Err(Error::InvalidInput("stream file is empty".into()));
    }
    Alphabet::new(labels)
}

fn quantize_table(
    table: &SeriesTable,
    quantizer: &str,
) -> xpfsa::Result<Vec<(String, SymbolStream)>> {
    let mut streams = Vec::with_capacity(table.n_columns());
    for i in 0..table.n_columns() {
        let stream = match quantizer {
            "updown" => quantize_updown(table.column(i))?,
            other => match other.strip_prefix("quantile-").and_then(|k| k.parse::<usize>().ok())
            {
                Some(k) => quantize_quantile(table.column(i), k)?,
                None => {
                    return Err(Error::InvalidInput(format!(
                        "unknown quantizer `{other}`; use updown or quantile-K"
                    )))
                }
            },
        };
        streams.push((table.names()[i].clone(), stream));
    }
    Ok(streams)
}
