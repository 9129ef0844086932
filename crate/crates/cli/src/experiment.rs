//! Grid experiments: one CSV row per (cell, trial, algorithm).
//!
//! Every row is a function of the spec and the master seed. Rows are appended
//! in task order, so an interrupted run can be resumed: the rows already on
//! disk that match the task list are kept and the rest are recomputed.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use log::{info, warn};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use theta_lab::cover::verify_theta_cover;
use theta_lab::exact::{independence_number, vartheta_exact, SolveLimits};
use theta_lab::randcover::{balanced_cover, general_cover, BalancedConfig, CoverRun, GeneralConfig, Mode};
use theta_lab::{CoverCertificate, Error, Hypergraph};

use crate::bounds::{compute_bounds, log_f};
use crate::error::{CliError, CliResult};
use crate::family::{grid_instance, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Balanced,
    General,
    Exact,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Balanced => "balanced",
            Algorithm::General => "general",
            Algorithm::Exact => "exact",
        }
    }

    fn slot(self) -> usize {
        match self {
            Algorithm::Balanced => 0,
            Algorithm::General => 1,
            Algorithm::Exact => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    #[default]
    Adaptive,
    FixedT,
}

impl From<RunMode> for Mode {
    fn from(m: RunMode) -> Mode {
        match m {
            RunMode::Adaptive => Mode::Adaptive,
            RunMode::FixedT => Mode::FixedT,
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_max_vertices() -> usize {
    SolveLimits::default().max_vertices
}

fn default_time_budget() -> u64 {
    SolveLimits::default().time_budget.as_secs()
}

/// Experiment description, read from TOML.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: Family,
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub k: Vec<usize>,
    pub trials: u32,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    /// CSV path, relative to the spec file.
    pub output: Option<PathBuf>,
    /// Lower `n` to the nearest size the family accepts.
    #[serde(default = "default_true")]
    pub round: bool,
    #[serde(default)]
    pub mode: RunMode,
    pub t_cap: Option<u64>,
    /// Directory for certificate files, relative to the spec file.
    pub certificates: Option<PathBuf>,
    #[serde(default = "default_max_vertices")]
    pub max_vertices: usize,
    #[serde(default = "default_time_budget")]
    pub time_budget_secs: u64,
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start].lines().count().max(1));
            Error::Parse {
                line,
                msg: e.message().to_string(),
            }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.n.is_empty() || self.d.is_empty() || self.k.is_empty() {
            return Err(CliError::Usage(
                "experiment grid is empty: n, d and k need at least one value each".into(),
            ));
        }
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::Usage("no algorithms listed".into()));
        }
        if self.max_vertices == 0 || self.time_budget_secs == 0 {
            return Err(CliError::Usage(
                "max_vertices and time_budget_secs must be positive".into(),
            ));
        }
        Ok(())
    }

    fn limits(&self) -> SolveLimits {
        SolveLimits {
            max_vertices: self.max_vertices,
            time_budget: Duration::from_secs(self.time_budget_secs),
            ..SolveLimits::default()
        }
    }

    /// Cells in grid order (n outermost, k innermost).
    pub fn cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &d in &self.d {
                for &k in &self.k {
                    out.push((n, d, k));
                }
            }
        }
        out
    }

    /// Tasks in output order. The exact solver is only scheduled for cells
    /// within the vertex limit.
    pub fn tasks(&self) -> Vec<Row> {
        let mut tasks = Vec::new();
        for (cell, (n, d, k)) in self.cells().into_iter().enumerate() {
            for trial in 0..self.trials {
                let (instance_seed, run_seeds) = derive_seeds(self.seed, cell as u64, trial);
                for &alg in &self.algorithms {
                    if alg == Algorithm::Exact && n > self.max_vertices {
                        continue;
                    }
                    tasks.push(Row::task(
                        self,
                        cell,
                        trial,
                        (n, d, k),
                        alg,
                        instance_seed,
                        run_seeds[alg.slot()],
                    ));
                }
            }
        }
        tasks
    }
}

/// Instance seed and one run seed per algorithm for `(cell, trial)`.
fn derive_seeds(master: u64, cell: u64, trial: u32) -> (u64, [u64; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(cell);
    rng.set_word_pos(u128::from(trial) * 16);
    let instance = rng.next_u64();
    (instance, [rng.next_u64(), rng.next_u64(), rng.next_u64()])
}

/// One CSV row. The first ten columns identify the task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub cell: usize,
    pub trial: u32,
    pub family: String,
    pub n_req: usize,
    pub d: usize,
    pub k: usize,
    pub alg: String,
    pub mode: String,
    pub instance_seed: u64,
    pub run_seed: u64,
    pub n: Option<usize>,
    pub edges: Option<usize>,
    pub fingerprint: Option<String>,
    pub status: String,
    pub t_achieved: Option<u64>,
    pub bound: Option<u64>,
    pub ratio: Option<f64>,
    pub complete: Option<bool>,
    pub alpha: Option<usize>,
    pub upper_balanced: Option<f64>,
    pub upper_general: Option<f64>,
    pub lower_balanced_form: Option<f64>,
    pub lower_even_form: Option<f64>,
    pub steiner_lower_form: Option<f64>,
    pub log_f: Option<f64>,
}

pub const COLUMNS: [&str; 25] = [
    "cell",
    "trial",
    "family",
    "n_req",
    "d",
    "k",
    "alg",
    "mode",
    "instance_seed",
    "run_seed",
    "n",
    "edges",
    "fingerprint",
    "status",
    "t_achieved",
    "bound",
    "ratio",
    "complete",
    "alpha",
    "upper_balanced",
    "upper_general",
    "lower_balanced_form",
    "lower_even_form",
    "steiner_lower_form",
    "log_f",
];

impl Row {
    fn task(
        spec: &ExperimentSpec,
        cell: usize,
        trial: u32,
        (n, d, k): (usize, usize, usize),
        alg: Algorithm,
        instance_seed: u64,
        run_seed: u64,
    ) -> Row {
        Row {
            cell,
            trial,
            family: spec.family.as_str().to_string(),
            n_req: n,
            d,
            k,
            alg: alg.as_str().to_string(),
            mode: match alg {
                Algorithm::Exact => "exact".to_string(),
                _ => Mode::from(spec.mode).as_str().to_string(),
            },
            instance_seed,
            run_seed,
            n: None,
            edges: None,
            fingerprint: None,
            status: String::new(),
            t_achieved: None,
            bound: None,
            ratio: None,
            complete: None,
            alpha: None,
            upper_balanced: None,
            upper_general: None,
            lower_balanced_form: None,
            lower_even_form: None,
            steiner_lower_form: None,
            log_f: None,
        }
    }

    fn same_task(&self, other: &Row) -> bool {
        (
            self.cell,
            self.trial,
            &self.family,
            self.n_req,
            self.d,
            self.k,
            &self.alg,
            &self.mode,
            self.instance_seed,
            self.run_seed,
        ) == (
            other.cell,
            other.trial,
            &other.family,
            other.n_req,
            other.d,
            other.k,
            &other.alg,
            &other.mode,
            other.instance_seed,
            other.run_seed,
        )
    }

    fn algorithm(&self) -> Algorithm {
        match self.alg.as_str() {
            "balanced" => Algorithm::Balanced,
            "general" => Algorithm::General,
            _ => Algorithm::Exact,
        }
    }

    fn certificate_name(&self) -> String {
        format!("c{}-t{}-{}.cert", self.cell, self.trial, self.alg)
    }
}

fn one_line(e: &dyn std::fmt::Display) -> String {
    format!("error: {e}").replace(['\n', '\r'], " ")
}

struct Context<'a> {
    spec: &'a ExperimentSpec,
    certificates: Option<PathBuf>,
}

impl Context<'_> {
    fn instance(&self, row: &Row) -> theta_lab::Result<Hypergraph> {
        grid_instance(
            self.spec.family,
            row.n_req,
            row.d,
            row.k,
            row.instance_seed,
            self.spec.round,
        )
    }

    fn cover(&self, g: &Hypergraph, row: &Row) -> theta_lab::Result<CoverRun> {
        let mode = Mode::from(self.spec.mode);
        let d = row.d as u64;
        match row.algorithm() {
            Algorithm::Balanced => balanced_cover(
                g,
                &BalancedConfig {
                    d,
                    seed: row.run_seed,
                    t_cap: self.spec.t_cap,
                    mode,
                },
            ),
            _ => general_cover(
                g,
                &GeneralConfig {
                    d,
                    seed: row.run_seed,
                    t_cap: self.spec.t_cap,
                    mode,
                },
            ),
        }
    }

    fn run(&self, task: &Row) -> CliResult<Row> {
        let mut row = task.clone();
        let g = match self.instance(task) {
            Ok(g) => g,
            Err(e) => {
                warn!("cell {} trial {}: {e}", row.cell, row.trial);
                row.status = one_line(&e);
                return Ok(row);
            }
        };
        row.n = Some(g.n());
        row.edges = Some(g.num_edges());
        row.fingerprint = Some(g.fingerprint());
        if let Ok(b) = compute_bounds(g.n() as u64, row.d as u64, row.k as u64, None, None) {
            row.upper_balanced = Some(b.upper_balanced);
            row.upper_general = Some(b.upper_general);
            row.lower_balanced_form = Some(b.lower_balanced_form);
            row.lower_even_form = Some(b.lower_even_form);
            row.steiner_lower_form = Some(b.steiner_lower_form);
        }
        match task.algorithm() {
            Algorithm::Exact => self.run_exact(&g, &mut row),
            _ => match self.cover(&g, task) {
                Ok(run) => {
                    row.status = if run.complete { "ok" } else { "incomplete" }.to_string();
                    row.t_achieved = Some(run.trials);
                    row.bound = Some(run.trial_bound);
                    row.ratio = Some(run.trials as f64 / run.trial_bound as f64);
                    row.complete = Some(run.complete);
                    if let Some(dir) = &self.certificates {
                        let path = dir.join(row.certificate_name());
                        fs::write(&path, run.certificate.to_text()).map_err(|e| CliError::io(&path, e))?;
                    }
                }
                Err(e) => {
                    warn!("cell {} trial {} {}: {e}", row.cell, row.trial, row.alg);
                    row.status = one_line(&e);
                }
            },
        }
        Ok(row)
    }

    fn run_exact(&self, g: &Hypergraph, row: &mut Row) {
        let limits = self.spec.limits();
        let outcome = vartheta_exact(g, &limits).and_then(|v| Ok((v, independence_number(g, &limits)?)));
        match outcome {
            Ok((v, alpha)) => {
                row.status = "ok".to_string();
                row.t_achieved = Some(v.size as u64);
                row.complete = Some(v.optimal && alpha.optimal);
                row.alpha = Some(alpha.value);
                row.log_f = log_f(g.n() as u64, alpha.value as u64, v.size as u64).ok();
                if let Some(dir) = &self.certificates {
                    let path = dir.join(row.certificate_name());
                    if let Err(e) = fs::write(&path, v.certificate.to_text()) {
                        warn!("{}: {e}", path.display());
                    }
                }
            }
            Err(e) => {
                warn!("cell {} trial {} exact: {e}", row.cell, row.trial);
                row.status = one_line(&e);
            }
        }
    }

    /// Re-checks a completed cover row against a regenerated instance.
    fn audit(&self, row: &Row) -> Result<(), String> {
        let g = self.instance(row).map_err(|e| e.to_string())?;
        if Some(g.fingerprint()) != row.fingerprint {
            return Err("regenerated instance has a different fingerprint".into());
        }
        let stored = self
            .certificates
            .as_ref()
            .map(|dir| dir.join(row.certificate_name()))
            .filter(|p| p.exists());
        let cert = match stored {
            Some(path) => {
                let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                CoverCertificate::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None if row.algorithm() == Algorithm::Exact => {
                vartheta_exact(&g, &self.spec.limits())
                    .map_err(|e| e.to_string())?
                    .certificate
            }
            None => self.cover(&g, row).map_err(|e| e.to_string())?.certificate,
        };
        verify_theta_cover(&g, &cert).map_err(|v| v.to_string())?;
        let reported = match row.algorithm() {
            Algorithm::Exact => cert.t() as u64,
            _ => cert
                .provenance
                .get("trials")
                .and_then(|t| t.parse().ok())
                .unwrap_or(u64::MAX),
        };
        if Some(reported) != row.t_achieved {
            return Err(format!("certificate reports {reported}, row has {:?}", row.t_achieved));
        }
        Ok(())
    }
}

/// Outcome of [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub rows: usize,
    pub resumed: usize,
    pub audit_failures: Vec<String>,
}

/// Rows already on disk that match a prefix of `tasks`, and the byte length of that prefix.
fn existing_prefix(path: &Path, tasks: &[Row]) -> CliResult<(usize, u64)> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((0, 0)),
        Err(e) => return Err(CliError::io(path, e)),
    };
    if bytes.is_empty() {
        return Ok((0, 0));
    }
    let mut reader = csv::ReaderBuilder::new().from_reader(&bytes[..]);
    let header_ok = reader
        .headers()
        .map(|h| h.iter().eq(COLUMNS.iter().copied()))
        .unwrap_or(false);
    if !header_ok {
        return Err(CliError::Usage(format!(
            "{} exists with a different column layout; move it away to start over",
            path.display()
        )));
    }
    let header = reader.headers()?.clone();
    let mut end = reader.position().byte();
    let mut kept = 0;
    let mut record = csv::StringRecord::new();
    for task in tasks {
        if !matches!(reader.read_record(&mut record), Ok(true)) {
            break;
        }
        let Ok(row) = record.deserialize::<Row>(Some(&header)) else {
            break;
        };
        let pos = reader.position().byte();
        let terminated = pos as usize <= bytes.len() && bytes[pos as usize - 1] == b'\n';
        if !terminated || !row.same_task(task) {
            break;
        }
        kept += 1;
        end = pos;
    }
    Ok((kept, end))
}

/// Runs (or resumes) the experiment, appending rows to `output`.
pub fn run_experiment(
    spec: &ExperimentSpec,
    output: &Path,
    certificates: Option<PathBuf>,
    paranoid: bool,
) -> CliResult<ExperimentSummary> {
    spec.validate()?;
    if let Some(dir) = &certificates {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let ctx = Context { spec, certificates };
    let tasks = spec.tasks();
    let (resumed, end) = existing_prefix(output, &tasks)?;
    if resumed > 0 {
        info!("resuming after {resumed} rows");
    }
    let file = OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(output)
        .map_err(|e| CliError::io(output, e))?;
    file.set_len(end).map_err(|e| CliError::io(output, e))?;
    let file = OpenOptions::new()
        .append(true)
        .open(output)
        .map_err(|e| CliError::io(output, e))?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if end == 0 {
        writer.write_record(COLUMNS)?;
    }
    let chunk = (rayon::current_num_threads() * 2).max(1);
    for batch in tasks[resumed..].chunks(chunk) {
        let rows: Vec<Row> = batch.par_iter().map(|t| ctx.run(t)).collect::<CliResult<_>>()?;
        for row in &rows {
            writer.serialize(row)?;
        }
        writer.flush().map_err(|e| CliError::io(output, e))?;
    }
    drop(writer);

    let mut audit_failures = Vec::new();
    if paranoid {
        let rows: Vec<Row> = csv::Reader::from_path(output)?
            .deserialize()
            .collect::<Result<_, _>>()?;
        let failures: Vec<Option<String>> = rows
            .par_iter()
            .filter(|r| r.complete == Some(true))
            .map(|r| {
                ctx.audit(r)
                    .err()
                    .map(|e| format!("cell {} trial {} {}: {e}", r.cell, r.trial, r.alg))
            })
            .collect();
        audit_failures = failures.into_iter().flatten().collect();
    }
    Ok(ExperimentSummary {
        rows: tasks.len(),
        resumed,
        audit_failures,
    })
}

/// Reads a spec file and resolves its relative paths against the spec's directory.
pub fn load_spec(path: &Path) -> CliResult<(ExperimentSpec, Option<PathBuf>, Option<PathBuf>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let spec = ExperimentSpec::parse(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let output = spec.output.as_ref().map(|p| base.join(p));
    let certificates = spec.certificates.as_ref().map(|p| base.join(p));
    Ok((spec, output, certificates))
}

/// Writes a file atomically enough for small outputs.
pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"
family = "balanced-hard"
n = [30]
d = [4]
k = [3]
trials = 2
algorithms = ["balanced", "exact"]
seed = 5
max_vertices = 12
"#;

    #[test]
    fn parse_and_schedule() {
        let spec = ExperimentSpec::parse(SPEC).unwrap();
        assert!(spec.round);
        assert_eq!(spec.mode, RunMode::Adaptive);
        let tasks = spec.tasks();
        // exact is skipped: n = 30 exceeds max_vertices
        assert_eq!(tasks.len(), 2);
        assert!(tasks.iter().all(|t| t.alg == "balanced"));
        assert_ne!(tasks[0].instance_seed, tasks[1].instance_seed);
    }

    #[test]
    fn empty_grid_is_rejected() {
        let text = SPEC.replace("d = [4]", "d = []");
        assert!(matches!(ExperimentSpec::parse(&text), Err(CliError::Usage(_))));
        assert!(matches!(
            ExperimentSpec::parse("family = \"nope\""),
            Err(CliError::Core(Error::Parse { .. }))
        ));
    }

    #[test]
    fn seeds_differ_across_cells_and_trials() {
        let a = derive_seeds(1, 0, 0);
        assert_eq!(a, derive_seeds(1, 0, 0));
        assert_ne!(a.0, derive_seeds(1, 1, 0).0);
        assert_ne!(a.0, derive_seeds(1, 0, 1).0);
        assert_ne!(a.1[0], a.1[1]);
    }

    #[test]
    fn column_list_matches_row() {
        let spec = ExperimentSpec::parse(SPEC).unwrap();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&spec.tasks()[0]).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
    }
}
