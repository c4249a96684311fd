use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dscat::gibbs::CouplingConfig;
use dscat_cli::*;

#[derive(Parser)]
#[command(name = "dscat", version, about = "Dempster-Shafer inference for Categorical data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Data {
    /// Counts per category, e.g. 4,3,0
    #[arg(long, conflicts_with = "observations", required_unless_present = "observations")]
    counts: Option<String>,
    /// File with one 1-based category label per line
    #[arg(long)]
    observations: Option<PathBuf>,
    /// Number of categories when reading an observation file
    #[arg(long, requires = "observations")]
    categories: Option<usize>,
}

impl Data {
    fn source(&self) -> CliResult<DataSource> {
        match (&self.counts, &self.observations) {
            (Some(c), _) => Ok(DataSource::Counts(parse_list(c)?)),
            (None, Some(path)) => Ok(DataSource::File {
                path: path.clone(),
                categories: self.categories,
            }),
            (None, None) => Err(CliError::Usage("give --counts or --observations".into())),
        }
    }
}

#[derive(Args)]
struct Chain {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Total Gibbs sweeps, burn-in included
    #[arg(long, default_value_t = 11_000)]
    iterations: usize,
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
}

impl Chain {
    fn config(&self) -> SampleConfig {
        SampleConfig {
            seed: self.seed,
            iterations: self.iterations,
            burn_in: self.burn_in,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the Gibbs sampler and write a JSON-lines trace
    Sample {
        #[command(flatten)]
        data: Data,
        #[command(flatten)]
        chain: Chain,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// (p, q, r) of an assertion over a trace: coord K [C] | logratio K L [C] | independence | phi [C]
    Pqr {
        /// Trace written by `sample`
        #[arg(long)]
        trace: PathBuf,
        /// Grid start:stop:step used when C is omitted
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = dscat::polytope::DEFAULT_PROBES)]
        probes: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        assertion: Vec<String>,
    },
    /// Upper bounds on the TV distance to stationarity from coupled chains
    Diagnose {
        #[command(flatten)]
        data: Data,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.9)]
        omega: f64,
        #[arg(long, default_value_t = 1)]
        lag: usize,
        #[arg(long, default_value_t = 10_000)]
        max_iterations: usize,
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Sequential assimilation with particles; reports positive association
    Sequential {
        #[command(flatten)]
        data: Data,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        particles: usize,
        #[arg(long, default_value_t = dscat::evidence::DEFAULT_ESS_THRESHOLD)]
        ess_threshold: f64,
        #[arg(long, default_value_t = dscat::polytope::DEFAULT_PROBES)]
        probes: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Simplex-DSM and Dirichlet-DSM curves for the linkage parameter
    Linkage {
        /// Four counts, e.g. 25,3,4,7
        #[arg(long)]
        counts: String,
        #[command(flatten)]
        chain: Chain,
        /// Dirichlet-DSM draws (default: trace length)
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        simplex_out: PathBuf,
        #[arg(long)]
        dirichlet_out: PathBuf,
    },
    /// Median wall time of Gibbs sweeps over a grid of (K, N)
    Bench {
        #[arg(long, default_value = "3,5,8")]
        k: String,
        #[arg(long, default_value = "50,100,200")]
        n: String,
        #[arg(long, default_value_t = 100)]
        iterations: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn create(path: &PathBuf) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn sink(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sample { data, chain, output } => {
            let dataset = data.source()?.load()?;
            let summary = cmd_sample(dataset, &chain.config(), &mut sink(&output)?)?;
            eprintln!("{summary}");
        }
        Command::Pqr {
            trace,
            grid,
            probes,
            output,
            assertion,
        } => {
            let spec = AssertionSpec::parse(&assertion)?;
            let cfg = PqrConfig {
                grid: grid.as_deref().map(parse_grid).transpose()?,
                probes,
            };
            let trace = load_trace(&trace)?;
            cmd_pqr(&trace, &spec, &cfg, &mut sink(&output)?)?;
        }
        Command::Diagnose {
            data,
            seed,
            omega,
            lag,
            max_iterations,
            replicates,
            output,
        } => {
            let dataset = data.source()?.load()?;
            let cfg = DiagnoseConfig {
                seed,
                coupling: CouplingConfig {
                    omega,
                    lag,
                    max_iterations,
                },
                replicates,
            };
            cmd_diagnose(&dataset, &cfg, &mut sink(&output)?)?;
        }
        Command::Sequential {
            data,
            seed,
            particles,
            ess_threshold,
            probes,
            output,
        } => {
            let dataset = sequential_order(&data.source()?, seed)?;
            let cfg = SequentialConfig {
                seed,
                particles,
                ess_threshold,
                probes,
            };
            cmd_sequential(&dataset, &cfg, &mut sink(&output)?)?;
        }
        Command::Linkage {
            counts,
            chain,
            draws,
            grid,
            simplex_out,
            dirichlet_out,
        } => {
            let cfg = LinkageConfig {
                sample: chain.config(),
                draws,
                grid: match grid {
                    Some(g) => parse_grid(&g)?,
                    None => default_unit_grid(),
                },
            };
            cmd_linkage(
                &parse_list(&counts)?,
                &cfg,
                &mut create(&simplex_out)?,
                &mut create(&dirichlet_out)?,
                &mut BufWriter::new(io::stdout().lock()),
            )?;
        }
        Command::Bench {
            k,
            n,
            iterations,
            repeats,
            seed,
            output,
        } => {
            let cfg = BenchConfig {
                seed,
                categories: parse_list(&k)?,
                observations: parse_list(&n)?,
                iterations,
                repeats,
            };
            cmd_bench(&cfg, &mut sink(&output)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
