//! Command implementations behind the `dscat` binary. Every command writes
//! machine-readable output to a caller-supplied writer so it can be tested
//! without spawning a process.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use thiserror::Error;

use dscat::evidence::{
    dirichlet_dsm_phi, linkage_phi_pqr, phi_curve, pqr_many, sequential_pqr_path, Assertion, PqrTriple,
};
use dscat::gibbs::{meeting_times, tv_upper_bound_curve, write_trace_record, CouplingConfig, GibbsState};
use dscat::graph::{is_feasible, EtaMatrix};
use dscat::rng::{streams, RngStream};
use dscat::simplex::{Dataset, SimplexPoint};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dscat::Error),

    #[error("{path}: {source}")]
    Input { path: String, source: io::Error },

    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input_error() => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a comma-separated list such as `4,3,0`.
pub fn parse_list<T: std::str::FromStr>(text: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("cannot parse {s:?} in list {text:?}")))
        })
        .collect()
}

/// Reads 1-based category labels, one per line; blank lines are skipped.
/// `K` defaults to the largest label.
pub fn read_observations<R: BufRead>(input: R, categories: Option<usize>) -> CliResult<Dataset> {
    let mut labels = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let label: usize = text.parse().map_err(|_| dscat::Error::Parse {
            line: i + 1,
            message: format!("expected a positive category label, got {text:?}"),
        })?;
        if label == 0 || categories.is_some_and(|k| label > k) {
            return Err(dscat::Error::Parse {
                line: i + 1,
                message: format!("category label {label} out of range"),
            }
            .into());
        }
        labels.push(label - 1);
    }
    let dim = categories.unwrap_or_else(|| labels.iter().max().map_or(0, |m| m + 1));
    Ok(Dataset::new(dim, labels)?)
}

/// Where the observations come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Counts(Vec<usize>),
    File {
        path: std::path::PathBuf,
        categories: Option<usize>,
    },
}

impl DataSource {
    pub fn load(&self) -> CliResult<Dataset> {
        match self {
            DataSource::Counts(c) => Ok(Dataset::from_counts(c)?),
            DataSource::File { path, categories } => read_observations(open(path)?, *categories),
        }
    }
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("grid must be start:stop:step, got {text:?}")))?;
    match parts[..] {
        [start, stop, step] if step > 0.0 && stop >= start => Ok(grid(start, stop, step)),
        _ => usage(format!("grid must be start:stop:step with step > 0, got {text:?}")),
    }
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect()
}

pub fn default_unit_grid() -> Vec<f64> {
    grid(0.01, 0.99, 0.01)
}

pub fn default_log_ratio_grid() -> Vec<f64> {
    grid(-4.0, 4.0, 0.1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    /// Total sweeps, burn-in included.
    pub iterations: usize,
    pub burn_in: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            iterations: 11_000,
            burn_in: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub records: usize,
    pub sweeps: usize,
    pub violations: usize,
    pub seconds: f64,
}

impl std::fmt::Display for SampleSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "records={} sweeps={} feasibility_violations={} seconds={:.3}",
            self.records, self.sweeps, self.violations, self.seconds
        )
    }
}

/// Runs the Gibbs sampler and writes the JSON-lines trace of the sweeps after
/// burn-in.
pub fn cmd_sample(dataset: Dataset, cfg: &SampleConfig, out: &mut dyn Write) -> CliResult<SampleSummary> {
    if cfg.iterations <= cfg.burn_in {
        return usage(format!(
            "iterations ({}) must exceed burn-in ({})",
            cfg.iterations, cfg.burn_in
        ));
    }
    let start = Instant::now();
    let mut rng = RngStream::new(cfg.seed, streams::CHAIN);
    let theta0 = SimplexPoint::uniform(dataset.num_categories());
    let mut state = GibbsState::init(dataset, &theta0, &mut rng)?;
    let mut violations = 0;
    for t in 1..=cfg.iterations {
        state.step(&mut rng)?;
        if !is_feasible(state.eta()) {
            violations += 1;
        }
        if t > cfg.burn_in {
            write_trace_record(out, t, state.eta())?;
        }
    }
    out.flush()?;
    Ok(SampleSummary {
        records: cfg.iterations - cfg.burn_in,
        sweeps: cfg.iterations,
        violations,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs the sampler in memory and returns the trace after burn-in.
pub fn sample_trace(dataset: Dataset, cfg: &SampleConfig) -> CliResult<Vec<EtaMatrix>> {
    let mut rng = RngStream::new(cfg.seed, streams::CHAIN);
    let theta0 = SimplexPoint::uniform(dataset.num_categories());
    Ok(dscat::gibbs::run(dataset, &theta0, cfg.iterations, cfg.burn_in, &mut rng)?)
}

pub fn load_trace(path: &Path) -> CliResult<Vec<EtaMatrix>> {
    Ok(dscat::gibbs::read_trace(open(path)?)?
        .into_iter()
        .map(|r| r.eta)
        .collect())
}

/// Assertion families accepted by `pqr`; categories are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum AssertionSpec {
    Coord { k: usize, c: Option<f64> },
    LogRatio { k: usize, l: usize, c: Option<f64> },
    Independence,
    Phi { c: Option<f64> },
}

impl AssertionSpec {
    pub fn parse(words: &[String]) -> CliResult<Self> {
        let num = |i: usize| -> CliResult<Option<f64>> {
            words
                .get(i)
                .map(|w| {
                    w.parse()
                        .map_err(|_| CliError::Usage(format!("expected a number, got {w:?}")))
                })
                .transpose()
        };
        let label = |i: usize| -> CliResult<usize> {
            match words.get(i).map(|w| w.parse::<usize>()) {
                Some(Ok(k)) if k >= 1 => Ok(k),
                _ => usage(format!("expected a 1-based category label at position {}", i + 1)),
            }
        };
        let arity = |n: usize| -> CliResult<()> {
            if words.len() > n {
                return usage(format!("too many arguments for {:?}", words[0]));
            }
            Ok(())
        };
        match words.first().map(String::as_str) {
            Some("coord") => {
                arity(3)?;
                Ok(AssertionSpec::Coord {
                    k: label(1)?,
                    c: num(2)?,
                })
            }
            Some("logratio") => {
                arity(4)?;
                Ok(AssertionSpec::LogRatio {
                    k: label(1)?,
                    l: label(2)?,
                    c: num(3)?,
                })
            }
            Some("independence") => {
                arity(1)?;
                Ok(AssertionSpec::Independence)
            }
            Some("phi") => {
                arity(2)?;
                Ok(AssertionSpec::Phi { c: num(1)? })
            }
            Some(other) => usage(format!(
                "unknown assertion {other:?}; expected coord, logratio, independence or phi"
            )),
            None => usage("missing assertion"),
        }
    }

    fn label(&self) -> String {
        match self {
            AssertionSpec::Coord { k, .. } => format!("coord {k}"),
            AssertionSpec::LogRatio { k, l, .. } => format!("logratio {k} {l}"),
            AssertionSpec::Independence => "independence".into(),
            AssertionSpec::Phi { .. } => "phi".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PqrConfig {
    pub grid: Option<Vec<f64>>,
    pub probes: usize,
}

impl Default for PqrConfig {
    fn default() -> Self {
        Self {
            grid: None,
            probes: dscat::polytope::DEFAULT_PROBES,
        }
    }
}

/// `(c, p, q, r)` rows for the assertion over its grid.
pub fn pqr_rows(
    trace: &[EtaMatrix],
    spec: &AssertionSpec,
    cfg: &PqrConfig,
) -> CliResult<Vec<(Option<f64>, PqrTriple)>> {
    if trace.is_empty() {
        return Err(dscat::Error::NoSamples.into());
    }
    let dim = trace[0].dim();
    let check = |k: usize| -> CliResult<usize> {
        if k > dim {
            return usage(format!("category {k} does not exist for K={dim}"));
        }
        Ok(k - 1)
    };
    let grid_or = |c: Option<f64>, default: fn() -> Vec<f64>| match c {
        Some(c) => vec![c],
        None => cfg.grid.clone().unwrap_or_else(default),
    };
    let (grid, assertions): (Vec<f64>, Vec<Assertion>) = match *spec {
        AssertionSpec::Coord { k, c } => {
            let k = check(k)?;
            let grid = grid_or(c, default_unit_grid);
            let a = grid.iter().map(|&c| Assertion::coordinate_at_most(k, c)).collect();
            (grid, a)
        }
        AssertionSpec::LogRatio { k, l, c } => {
            let (k, l) = (check(k)?, check(l)?);
            if k == l {
                return usage("logratio needs two distinct categories");
            }
            let grid = grid_or(c, default_log_ratio_grid);
            let a = grid.iter().map(|&c| Assertion::log_ratio_at_most(k, l, c)).collect();
            (grid, a)
        }
        AssertionSpec::Independence => {
            let t = pqr_many(trace, &[Assertion::positive_association()], cfg.probes)?;
            return Ok(vec![(None, t[0])]);
        }
        AssertionSpec::Phi { c } => {
            let grid = grid_or(c, default_unit_grid);
            let summary = linkage_phi_pqr(trace, &grid)?;
            return Ok(summary.curve.into_iter().map(|(c, t)| (Some(c), t)).collect());
        }
    };
    let triples = pqr_many(trace, &assertions, cfg.probes)?;
    Ok(grid.into_iter().map(Some).zip(triples).collect())
}

/// CSV `assertion,c,p,q,r`.
pub fn cmd_pqr(
    trace: &[EtaMatrix],
    spec: &AssertionSpec,
    cfg: &PqrConfig,
    out: &mut dyn Write,
) -> CliResult<()> {
    let rows = pqr_rows(trace, spec, cfg)?;
    writeln!(out, "assertion,c,p,q,r")?;
    let label = spec.label();
    for (c, t) in rows {
        let c = c.map(|c| c.to_string()).unwrap_or_default();
        writeln!(out, "{label},{c},{},{},{}", t.p, t.q, t.r)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnoseConfig {
    pub seed: u64,
    pub coupling: CouplingConfig,
    pub replicates: usize,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            coupling: CouplingConfig::default(),
            replicates: 100,
        }
    }
}

/// `(t, bound)` from coupled replicates; fails if any pair did not meet.
pub fn tv_curve(dataset: &Dataset, cfg: &DiagnoseConfig) -> CliResult<Vec<(usize, f64)>> {
    if cfg.replicates == 0 {
        return usage("need at least one replicate");
    }
    cfg.coupling.validate()?;
    let mut rng = RngStream::new(cfg.seed, streams::COUPLING);
    let meetings = meeting_times(dataset, &cfg.coupling, cfg.replicates, &mut rng)?;
    let unmet = meetings.iter().filter(|m| m.meeting_time.is_none()).count();
    if unmet > 0 {
        return Err(dscat::Error::UnmetChains {
            unmet,
            total: meetings.len(),
            max_iterations: cfg.coupling.max_iterations,
        }
        .into());
    }
    Ok(tv_upper_bound_curve(&meetings)?)
}

/// CSV `t,tv_upper_bound`.
pub fn cmd_diagnose(dataset: &Dataset, cfg: &DiagnoseConfig, out: &mut dyn Write) -> CliResult<()> {
    let curve = tv_curve(dataset, cfg)?;
    writeln!(out, "t,tv_upper_bound")?;
    for (t, b) in curve {
        writeln!(out, "{t},{b}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialConfig {
    pub seed: u64,
    pub particles: usize,
    pub ess_threshold: f64,
    pub probes: usize,
}

impl Default for SequentialConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            particles: 4096,
            ess_threshold: dscat::evidence::DEFAULT_ESS_THRESHOLD,
            probes: dscat::polytope::DEFAULT_PROBES,
        }
    }
}

/// Observation order for `sequential`: files keep their order, inline counts
/// are expanded and shuffled with the seed.
pub fn sequential_order(source: &DataSource, seed: u64) -> CliResult<Dataset> {
    let dataset = source.load()?;
    match source {
        DataSource::File { .. } => Ok(dataset),
        DataSource::Counts(_) => {
            let mut obs = dataset.observations().to_vec();
            obs.shuffle(&mut RngStream::new(seed, streams::SHUFFLE));
            Ok(Dataset::new(dataset.num_categories(), obs)?)
        }
    }
}

/// CSV `n,p,one_minus_q` for positive association after each observation.
pub fn cmd_sequential(dataset: &Dataset, cfg: &SequentialConfig, out: &mut dyn Write) -> CliResult<()> {
    if dataset.num_categories() != 4 {
        return Err(dscat::Error::InvalidDimension(format!(
            "positive association needs K=4, got K={}",
            dataset.num_categories()
        ))
        .into());
    }
    let mut rng = RngStream::new(cfg.seed, streams::PARTICLES);
    let path = sequential_pqr_path(
        dataset.observations(),
        4,
        cfg.particles,
        cfg.ess_threshold,
        &Assertion::positive_association(),
        cfg.probes,
        &mut rng,
    )?;
    writeln!(out, "n,p,one_minus_q")?;
    for (n, t) in path {
        writeln!(out, "{n},{},{}", t.p, t.upper())?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageConfig {
    pub sample: SampleConfig,
    /// Dirichlet-DSM draws; defaults to the trace length.
    pub draws: Option<usize>,
    pub grid: Vec<f64>,
}

impl Default for LinkageConfig {
    fn default() -> Self {
        Self {
            sample: SampleConfig::default(),
            draws: None,
            grid: default_unit_grid(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageCurves {
    /// `(c, lower, upper)` for the Simplex-DSM.
    pub simplex: Vec<(f64, f64, f64)>,
    pub dirichlet: Vec<(f64, f64, f64)>,
    pub simplex_retention: f64,
    pub dirichlet_retention: f64,
}

/// Lower and upper cdf curves of `φ` under both sampling mechanisms.
pub fn linkage_curves(counts: &[usize], cfg: &LinkageConfig) -> CliResult<LinkageCurves> {
    if counts.len() != 4 {
        return usage(format!("linkage needs 4 counts, got {}", counts.len()));
    }
    let trace = sample_trace(Dataset::from_counts(counts)?, &cfg.sample)?;
    let simplex = linkage_phi_pqr(&trace, &cfg.grid)?;
    let draws = cfg.draws.unwrap_or(trace.len());
    let mut rng = RngStream::new(cfg.sample.seed, streams::DIRICHLET_DSM);
    let intervals = dirichlet_dsm_phi(counts, draws, &mut rng)?;
    let kept = intervals.iter().flatten().count();
    let dirichlet = phi_curve(&intervals, &cfg.grid)?;
    let bands = |curve: Vec<(f64, PqrTriple)>| curve.into_iter().map(|(c, t)| (c, t.p, t.upper())).collect();
    Ok(LinkageCurves {
        simplex: bands(simplex.curve),
        dirichlet: bands(dirichlet),
        simplex_retention: simplex.retention_rate,
        dirichlet_retention: kept as f64 / draws as f64,
    })
}

fn write_bands(out: &mut dyn Write, rows: &[(f64, f64, f64)]) -> io::Result<()> {
    writeln!(out, "c,lower,upper")?;
    for (c, lo, hi) in rows {
        writeln!(out, "{c},{lo},{hi}")?;
    }
    out.flush()
}

/// Writes the two `c,lower,upper` tables and a `method,retention_rate` summary.
pub fn cmd_linkage(
    counts: &[usize],
    cfg: &LinkageConfig,
    simplex_out: &mut dyn Write,
    dirichlet_out: &mut dyn Write,
    summary: &mut dyn Write,
) -> CliResult<()> {
    let curves = linkage_curves(counts, cfg)?;
    write_bands(simplex_out, &curves.simplex)?;
    write_bands(dirichlet_out, &curves.dirichlet)?;
    writeln!(summary, "method,retention_rate")?;
    writeln!(summary, "simplex-dsm,{}", curves.simplex_retention)?;
    writeln!(summary, "dirichlet-dsm,{}", curves.dirichlet_retention)?;
    summary.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    pub categories: Vec<usize>,
    pub observations: Vec<usize>,
    pub iterations: usize,
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            categories: vec![3, 5, 8],
            observations: vec![50, 100, 200],
            iterations: 100,
            repeats: 5,
        }
    }
}

/// Median wall time of `iterations` sweeps over `repeats` runs, with
/// `⌊N/K⌋` observations in each of `K` categories.
pub fn bench_point(dim: usize, n: usize, iterations: usize, repeats: usize, seed: u64) -> CliResult<f64> {
    if dim == 0 || n / dim == 0 {
        return usage(format!("N={n} gives no observations per category for K={dim}"));
    }
    if repeats == 0 || iterations == 0 {
        return usage("repeats and iterations must be positive");
    }
    let dataset = Dataset::from_counts(&vec![n / dim; dim])?;
    let mut rng = RngStream::new(seed, streams::CHAIN);
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let mut state = GibbsState::init_random(dataset.clone(), &mut rng)?;
        let start = Instant::now();
        for _ in 0..iterations {
            state.step(&mut rng)?;
        }
        times.push(start.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok(times[repeats / 2])
}

/// CSV `K,N,median_seconds` over the grid of `(K, N)`.
pub fn cmd_bench(cfg: &BenchConfig, out: &mut dyn Write) -> CliResult<()> {
    writeln!(out, "K,N,median_seconds")?;
    for &k in &cfg.categories {
        for &n in &cfg.observations {
            let secs = bench_point(k, n, cfg.iterations, cfg.repeats, cfg.seed)?;
            writeln!(out, "{k},{n},{secs}")?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn assertion_specs() {
        assert_eq!(
            AssertionSpec::parse(&words("coord 1 0.5")).unwrap(),
            AssertionSpec::Coord { k: 1, c: Some(0.5) }
        );
        assert_eq!(
            AssertionSpec::parse(&words("logratio 1 2")).unwrap(),
            AssertionSpec::LogRatio { k: 1, l: 2, c: None }
        );
        assert_eq!(AssertionSpec::parse(&words("independence")).unwrap(), AssertionSpec::Independence);
        assert!(AssertionSpec::parse(&words("median 1")).is_err());
        assert!(AssertionSpec::parse(&words("coord 0 0.5")).is_err());
        assert!(AssertionSpec::parse(&words("coord 1 x")).is_err());
        assert!(AssertionSpec::parse(&words("independence 3")).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(default_unit_grid().len(), 99);
        assert_eq!(default_unit_grid()[29], 0.3);
        assert_eq!(default_log_ratio_grid().len(), 81);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn observation_files() {
        let d = read_observations("1\n2\n\n2\n4\n".as_bytes(), None).unwrap();
        assert_eq!(d.counts(), vec![1, 2, 0, 1]);
        let d = read_observations("1\n".as_bytes(), Some(3)).unwrap();
        assert_eq!(d.counts(), vec![1, 0, 0]);
        match read_observations("1\n2\nx\n".as_bytes(), None) {
            Err(CliError::Core(dscat::Error::Parse { line: 3, .. })) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_observations("0\n".as_bytes(), None).is_err());
        assert!(read_observations("4\n".as_bytes(), Some(3)).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(dscat::Error::ZeroMargin).exit_code(), 2);
        assert_eq!(CliError::Core(dscat::Error::DegenerateWeights).exit_code(), 3);
        assert_eq!(
            CliError::Core(dscat::Error::Starvation { retained: 0, attempts: 9 }).exit_code(),
            3
        );
    }

    #[test]
    fn sample_bookkeeping() {
        let d = Dataset::from_counts(&[4, 3]).unwrap();
        let cfg = SampleConfig {
            seed: 1,
            iterations: 2000,
            burn_in: 1000,
        };
        let mut buf = Vec::new();
        let s = cmd_sample(d.clone(), &cfg, &mut buf).unwrap();
        assert_eq!(s.records, 1000);
        assert_eq!(s.violations, 0);
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 1000);
        assert!(text.starts_with("{\"iteration\":1001,"));

        let mut again = Vec::new();
        cmd_sample(d, &cfg, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn sequential_empty_sequence_is_vacuous() {
        let d = Dataset::new(4, Vec::new()).unwrap();
        let mut buf = Vec::new();
        cmd_sequential(&d, &SequentialConfig::default(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,p,one_minus_q\n0,0,1\n");
        assert!(cmd_sequential(&Dataset::from_counts(&[1, 1]).unwrap(), &SequentialConfig::default(), &mut Vec::new()).is_err());
    }

    #[test]
    fn bench_row_is_positive() {
        let t = bench_point(3, 30, 100, 5, 0).unwrap();
        assert!(t > 0.0);
        assert!(bench_point(5, 3, 100, 5, 0).is_err());
    }
}
