//! End-to-end run: generate, invariant pre-filter, exact H-classes,
//! TH-merging, decomposition and report, with every stage persisted.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error as ThisError;

use crate::classify::{
    build_report, dedup_h_classes, dedup_th_classes, CatalogCache, ClassificationReport, DisplayMode, HClass,
    ReportOptions, THClass,
};
use crate::error::Error;
use crate::invariant::{partition_by_invariant, InvariantGroup};
use crate::io::{self, FormatError};
use crate::matrix::IntegerMatrix;
use crate::nsoks::isqrt;
use crate::search::{search, LevelStats, SearchOptions, SpillConfig};

#[derive(Debug, ThisError)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: PathBuf,
        #[source]
        source: FormatError,
    },
    #[error("invariant check failed: {0}")]
    Inconsistent(String),
}

impl PipelineError {
    /// Process exit code per error category.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::Compute(Error::InvalidParameters(_)) => 2,
            PipelineError::Io { .. } => 3,
            PipelineError::Format { .. } => 4,
            PipelineError::Compute(_) => 5,
            PipelineError::Inconsistent(_) => 6,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), PipelineError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| PipelineError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a record file; all records must share one weight.
pub fn read_record_file(path: &Path) -> Result<(Option<u64>, Vec<IntegerMatrix>), PipelineError> {
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let records = io::read_records(text.as_bytes()).map_err(|source| PipelineError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    let k = records.first().map(|r| r.k);
    if let Some(r) = records.iter().find(|r| Some(r.k) != k) {
        return Err(PipelineError::Config(format!(
            "{}: mixed weights {} and {}",
            path.display(),
            k.unwrap_or_default(),
            r.k
        )));
    }
    Ok((k, records.into_iter().map(|r| r.matrix).collect()))
}

pub fn write_record_file(path: &Path, k: u64, matrices: &[IntegerMatrix]) -> Result<(), PipelineError> {
    let mut s = String::new();
    for m in matrices {
        s.push_str(&io::record_line(k, m));
        s.push('\n');
    }
    write_file(path, &s)
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub m: usize,
    pub n: usize,
    pub k: u64,
    pub mindepth: usize,
    pub threads: usize,
    pub spill: Option<SpillConfig>,
    /// Code-invariant depth `d`.
    pub invariant_depth: usize,
    /// Directory receiving `generated.jsonl`, `hclasses.jsonl`,
    /// `report.jsonl` and `table.txt`.
    pub output_dir: Option<PathBuf>,
    pub display: DisplayMode,
}

impl PipelineConfig {
    pub fn new(m: usize, n: usize, k: u64) -> Self {
        Self {
            m,
            n,
            k,
            mindepth: m,
            threads: 1,
            spill: None,
            invariant_depth: m.min(3),
            output_dir: None,
            display: DisplayMode::Canonical,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.m == 0 || self.m > self.n {
            return Err(PipelineError::Config(format!("need 1 <= m <= n, got m={}, n={}", self.m, self.n)));
        }
        if self.mindepth == 0 || self.mindepth > self.m {
            return Err(PipelineError::Config(format!("need 1 <= mindepth <= m, got {}", self.mindepth)));
        }
        if self.invariant_depth == 0 || self.invariant_depth > self.m {
            return Err(PipelineError::Config(format!(
                "need 1 <= invariant depth <= m, got {}",
                self.invariant_depth
            )));
        }
        if self.threads == 0 {
            return Err(PipelineError::Config("threads must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(PipelineError::Config("k must be positive".into()));
        }
        Ok(())
    }
}

/// Everything a pipeline run produced.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub generated: Vec<IntegerMatrix>,
    pub levels: Vec<LevelStats>,
    pub partition: Vec<InvariantGroup>,
    pub h_classes: Vec<HClass>,
    pub th_classes: Option<Vec<THClass>>,
    pub report: ClassificationReport,
}

/// Options for classifying an existing list of matrices.
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub th: bool,
    pub decompose: bool,
    pub invariant_depth: Option<usize>,
    pub threads: usize,
    pub display: DisplayMode,
}

/// Result of [`classify_matrices`].
#[derive(Clone, Debug)]
pub struct Classification {
    pub partition: Vec<InvariantGroup>,
    pub h_classes: Vec<HClass>,
    pub th_classes: Option<Vec<THClass>>,
    pub report: ClassificationReport,
}

/// Invariant partition, exact H-classes, optional TH-merge and decomposition.
///
/// The invariant partition is checked against the exact classes: every
/// H-class must sit inside one invariant group.
pub fn classify_matrices(k: u64, matrices: &[IntegerMatrix], opts: &ClassifyOptions) -> Result<Classification, PipelineError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| PipelineError::Config(format!("thread pool: {e}")))?;
    pool.install(|| classify_inner(k, matrices, opts))
}

fn classify_inner(k: u64, matrices: &[IntegerMatrix], opts: &ClassifyOptions) -> Result<Classification, PipelineError> {
    let (m, n) = matrices.first().map_or((0, 0), IntegerMatrix::shape);
    let bound = (isqrt(k) as i64).max(matrices.iter().map(IntegerMatrix::max_abs).max().unwrap_or(0));
    let depth = opts.invariant_depth.filter(|&d| d >= 1 && d <= m);

    let partition = match depth {
        Some(d) => partition_by_invariant(matrices, d, Some(bound))?,
        None => Vec::new(),
    };
    let h_classes = dedup_h_classes(matrices);
    if depth.is_some() {
        check_refinement(matrices, &partition, h_classes.len())?;
        log::info!(
            "{} inputs: {} invariant groups, {} H-classes",
            matrices.len(),
            partition.len(),
            h_classes.len()
        );
    }

    let square = m == n && m > 0;
    let th_classes = if opts.th && square {
        Some(dedup_th_classes(&h_classes)?)
    } else {
        None
    };
    let catalog = if opts.decompose && square {
        let mut cache = CatalogCache::new();
        let mut cat = cache.catalog(m - 1, k, opts.threads)?;
        // primitives of the top order come from this classification
        let top = match &th_classes {
            Some(th) => th.iter().map(|c| c.representative.clone()).collect::<Vec<_>>(),
            None => dedup_th_classes(&h_classes)?
                .into_iter()
                .map(|c| c.representative)
                .collect(),
        };
        let mut prim = Vec::new();
        for rep in top {
            if crate::classify::decompose(&rep)?.primitive {
                prim.push(rep);
            }
        }
        cat.insert(m, prim);
        Some(cat)
    } else {
        None
    };

    let report_opts = ReportOptions {
        th: th_classes.is_some(),
        decompose: opts.decompose && square,
        invariant_depth: depth,
        invariant_bound: Some(bound),
        display: opts.display,
    };
    let mut report = build_report(
        (m, n, k),
        matrices.len(),
        &h_classes,
        th_classes.as_deref(),
        catalog.as_ref(),
        &report_opts,
    )?;
    if depth.is_some() {
        report.invariant_groups = Some(partition.len());
    }
    Ok(Classification {
        partition,
        h_classes,
        th_classes,
        report,
    })
}

fn check_refinement(matrices: &[IntegerMatrix], partition: &[InvariantGroup], h_count: usize) -> Result<(), PipelineError> {
    use std::collections::HashMap;
    let mut group_of: HashMap<IntegerMatrix, usize> = HashMap::new();
    for (g, group) in partition.iter().enumerate() {
        for &i in &group.members {
            let c = crate::canon::canonical(&matrices[i]);
            if let Some(&prev) = group_of.get(&c) {
                if prev != g {
                    return Err(PipelineError::Inconsistent(format!(
                        "one H-class spans invariant groups {} and {}",
                        prev + 1,
                        g + 1
                    )));
                }
            }
            group_of.insert(c, g);
        }
    }
    if partition.len() > h_count {
        return Err(PipelineError::Inconsistent(format!(
            "{} invariant groups exceed {h_count} H-classes",
            partition.len()
        )));
    }
    Ok(())
}

/// Runs every stage and persists the results when an output directory is set.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    cfg.validate()?;
    let mut opts = SearchOptions::new(cfg.mindepth);
    opts.threads = cfg.threads;
    opts.spill = cfg.spill.clone();
    let out = search(cfg.m, cfg.n, cfg.k, &opts)?;
    if let Some(dir) = &cfg.output_dir {
        write_record_file(&dir.join("generated.jsonl"), cfg.k, &out.matrices)?;
    }
    let classification = classify_matrices(
        cfg.k,
        &out.matrices,
        &ClassifyOptions {
            th: true,
            decompose: true,
            invariant_depth: Some(cfg.invariant_depth),
            threads: cfg.threads,
            display: cfg.display,
        },
    )?;
    let mut report = classification.report;
    if out.matrices.is_empty() {
        report.m = cfg.m;
        report.n = cfg.n;
        if cfg.m == cfg.n {
            report.th_classes = Some(0);
            report.primitive = Some(0);
        }
    }
    if let Some(dir) = &cfg.output_dir {
        let reps: Vec<IntegerMatrix> = classification
            .h_classes
            .iter()
            .map(|c| c.representative.clone())
            .collect();
        write_record_file(&dir.join("hclasses.jsonl"), cfg.k, &reps)?;
        write_file(&dir.join("report.jsonl"), &report.class_lines())?;
        write_file(&dir.join("table.txt"), &report.table_text())?;
    }
    Ok(PipelineOutput {
        generated: out.matrices,
        levels: out.levels,
        partition: classification.partition,
        h_classes: classification.h_classes,
        th_classes: classification.th_classes,
        report,
    })
}
