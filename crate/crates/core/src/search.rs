//! Level-by-level generation of minimal `PIW(m, n, k)` representatives.
//!
//! A row is appended to a `p`-row prefix only if the result is row-lex minimal,
//! as long as `p <= mindepth`; beyond that any strictly increasing orthogonal
//! row is accepted. Prefixes of up to `mindepth + 1` rows (capped at `m`) are
//! therefore minimal, and the output may hold several members of one class
//! but never misses a class.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::canon::{self, Canonicalizer};
use crate::error::{Error, Result};
use crate::io;
use crate::matrix::{dot, IntegerMatrix, RowVector};
use crate::nsoks::{nsoks, SquareRep};

/// Every distinct vector obtained from `rep` by permuting entries and negating
/// nonzero ones, in ascending row-lex order.
pub fn signed_perms(rep: &SquareRep, n_cols: usize) -> Result<Vec<RowVector>> {
    if rep.len() != n_cols {
        return Err(Error::MultiplicityMismatch {
            expected: n_cols,
            found: rep.len(),
        });
    }
    let mut base: Vec<i32> = rep.values().map(|s| s as i32).collect();
    base.sort_unstable();
    let mut out = Vec::new();
    loop {
        let nonzero: Vec<usize> = (0..n_cols).filter(|&j| base[j] != 0).collect();
        for mask in 0u64..(1u64 << nonzero.len()) {
            let mut v = base.clone();
            for (b, &j) in nonzero.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    v[j] = -v[j];
                }
            }
            out.push(v);
        }
        if !next_permutation(&mut base) {
            break;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Advances to the next lexicographic permutation of a multiset; `false` once
/// the last one has been reached.
fn next_permutation(v: &mut [i32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All weight-`k` rows of length `n`, sorted ascending.
#[derive(Clone, Debug)]
pub struct RowReservoir {
    n: usize,
    k: i64,
    data: Vec<i32>,
}

impl RowReservoir {
    pub fn new(n: usize, k: u64) -> Result<Self> {
        let mut rows = Vec::new();
        for rep in nsoks(k, n as u32, None) {
            rows.extend(signed_perms(&rep, n)?);
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Self {
            n,
            k: k as i64,
            data: rows.concat(),
        })
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> i64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn row(&self, idx: usize) -> &[i32] {
        &self.data[idx * self.n..(idx + 1) * self.n]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i32]> + '_ {
        self.data.chunks_exact(self.n.max(1))
    }

    pub fn index_of(&self, v: &[i32]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.row(mid).cmp(v) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Indices of all rows after `last` orthogonal to every row in `rows`.
    fn candidates_for(&self, rows: &[u32]) -> Vec<u32> {
        let last = *rows.last().expect("non-empty prefix") as usize;
        (last + 1..self.len())
            .filter(|&w| rows.iter().all(|&r| dot(self.row(r as usize), self.row(w)) == 0))
            .map(|w| w as u32)
            .collect()
    }

    fn matrix(&self, rows: &[u32]) -> IntegerMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.n);
        for &r in rows {
            data.extend_from_slice(self.row(r as usize));
        }
        IntegerMatrix::new(rows.len(), self.n, data).expect("non-empty prefix")
    }
}

/// Frontier spilling: levels with more than `budget` nodes are written to
/// `dir` and streamed back in chunks of `budget`.
#[derive(Clone, Debug)]
pub struct SpillConfig {
    pub dir: PathBuf,
    pub budget: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub mindepth: usize,
    pub threads: usize,
    pub canonicalizer: Canonicalizer,
    pub spill: Option<SpillConfig>,
}

impl SearchOptions {
    pub fn new(mindepth: usize) -> Self {
        Self {
            mindepth,
            threads: 1,
            canonicalizer: Canonicalizer::Auto,
            spill: None,
        }
    }
}

/// One level of the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub nodes: usize,
    pub minimality_tests: usize,
    pub spilled: bool,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchOutput {
    pub matrices: Vec<IntegerMatrix>,
    pub levels: Vec<LevelStats>,
}

struct SearchNode {
    rows: Vec<u32>,
    candidates: Vec<u32>,
}

enum Frontier {
    Memory(Vec<SearchNode>),
    Disk { path: PathBuf, len: usize },
}

impl Frontier {
    fn len(&self) -> usize {
        match self {
            Frontier::Memory(v) => v.len(),
            Frontier::Disk { len, .. } => *len,
        }
    }
}

/// Representatives of every Hadamard class of `PIW(m, n, k)` with the
/// default options (`mindepth = m`, one thread).
pub fn rep_piw(m: usize, n: usize, k: u64) -> Result<Vec<IntegerMatrix>> {
    Ok(search(m, n, k, &SearchOptions::new(m))?.matrices)
}

/// Same as [`rep_piw`] with a smaller `mindepth`.
pub fn rep_piw_mindepth(m: usize, n: usize, k: u64, mindepth: usize) -> Result<Vec<IntegerMatrix>> {
    Ok(search(m, n, k, &SearchOptions::new(mindepth))?.matrices)
}

pub fn search(m: usize, n: usize, k: u64, opts: &SearchOptions) -> Result<SearchOutput> {
    if m == 0 || m > n {
        return Err(Error::InvalidParameters(format!("need 1 <= m <= n, got m={m}, n={n}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameters("k must be positive".into()));
    }
    if opts.mindepth == 0 || opts.mindepth > m {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= mindepth <= m, got mindepth={}",
            opts.mindepth
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
    pool.install(|| run(m, n, k, opts))
}

fn run(m: usize, n: usize, k: u64, opts: &SearchOptions) -> Result<SearchOutput> {
    let start = Instant::now();
    let reservoir = RowReservoir::new(n, k)?;
    let mut levels = Vec::with_capacity(m);

    let mut first = Vec::new();
    for rep in nsoks(k, n as u32, None) {
        let v = rep.to_minimal_row(n)?;
        let idx = reservoir.index_of(&v).expect("minimal row lies in the reservoir") as u32;
        let candidates = if m > 1 {
            reservoir.candidates_for(&[idx])
        } else {
            Vec::new()
        };
        if m == 1 || candidates.len() >= m - 1 {
            first.push(SearchNode {
                rows: vec![idx],
                candidates,
            });
        }
    }
    first.sort_by(|a, b| a.rows.cmp(&b.rows));
    let mut frontier = Frontier::Memory(first);
    frontier = maybe_spill(frontier, 1, &reservoir, k, opts)?;
    report(&mut levels, 1, frontier.len(), 0, &frontier, start.elapsed());

    for depth in 2..=m {
        // the parent has depth - 1 rows
        let check = depth - 1 <= opts.mindepth;
        let (next, tests) = match frontier {
            Frontier::Memory(nodes) => expand(&nodes, depth, m, check, &reservoir, opts),
            Frontier::Disk { path, .. } => {
                let budget = opts.spill.as_ref().map_or(usize::MAX, |s| s.budget.max(1));
                let records = io::read_records(BufReader::new(File::open(&path).map_err(spill_err)?))
                    .map_err(|e| Error::InvalidParameters(format!("reading spilled frontier: {e}")))?;
                let mut out = Vec::new();
                let mut tests = 0;
                for chunk in records.chunks(budget) {
                    let nodes: Vec<SearchNode> = chunk
                        .iter()
                        .map(|rec| {
                            let rows: Vec<u32> = rec
                                .matrix
                                .row_iter()
                                .map(|r| reservoir.index_of(r).expect("spilled row in reservoir") as u32)
                                .collect();
                            let candidates = reservoir.candidates_for(&rows);
                            SearchNode { rows, candidates }
                        })
                        .collect();
                    let (part, t) = expand(&nodes, depth, m, check, &reservoir, opts);
                    out.extend(part);
                    tests += t;
                }
                fs::remove_file(&path).map_err(spill_err)?;
                (out, tests)
            }
        };
        debug_assert!(next.windows(2).all(|w| w[0].rows < w[1].rows));
        frontier = maybe_spill(Frontier::Memory(next), depth, &reservoir, k, opts)?;
        report(&mut levels, depth, frontier.len(), tests, &frontier, start.elapsed());
    }

    let matrices = match frontier {
        Frontier::Memory(nodes) => nodes.iter().map(|node| reservoir.matrix(&node.rows)).collect(),
        Frontier::Disk { path, .. } => {
            let records = io::read_records(BufReader::new(File::open(&path).map_err(spill_err)?))
                .map_err(|e| Error::InvalidParameters(format!("reading spilled frontier: {e}")))?;
            fs::remove_file(&path).map_err(spill_err)?;
            records.into_iter().map(|r| r.matrix).collect()
        }
    };
    Ok(SearchOutput { matrices, levels })
}

fn report(levels: &mut Vec<LevelStats>, level: usize, nodes: usize, tests: usize, frontier: &Frontier, elapsed: Duration) {
    let spilled = matches!(frontier, Frontier::Disk { .. });
    log::info!(
        "level {level}: {nodes} nodes, {tests} minimality tests{}, {:.3}s",
        if spilled { ", spilled" } else { "" },
        elapsed.as_secs_f64()
    );
    levels.push(LevelStats {
        level,
        nodes,
        minimality_tests: tests,
        spilled,
        elapsed,
    });
}

fn spill_err(e: std::io::Error) -> Error {
    Error::InvalidParameters(format!("spill directory: {e}"))
}

fn maybe_spill(frontier: Frontier, depth: usize, reservoir: &RowReservoir, k: u64, opts: &SearchOptions) -> Result<Frontier> {
    let Some(spill) = &opts.spill else {
        return Ok(frontier);
    };
    match frontier {
        Frontier::Memory(nodes) if nodes.len() > spill.budget => {
            fs::create_dir_all(&spill.dir).map_err(spill_err)?;
            let path = spill.dir.join(format!("frontier_{depth}.jsonl"));
            let mut w = BufWriter::new(File::create(&path).map_err(spill_err)?);
            let matrices: Vec<IntegerMatrix> = nodes.iter().map(|nd| reservoir.matrix(&nd.rows)).collect();
            io::write_records(&mut w, k, &matrices).map_err(spill_err)?;
            Ok(Frontier::Disk {
                path,
                len: nodes.len(),
            })
        }
        other => Ok(other),
    }
}

/// Children at `depth` of every node; returns them in ascending order along
/// with the number of minimality tests run.
fn expand(
    nodes: &[SearchNode],
    depth: usize,
    m: usize,
    check: bool,
    reservoir: &RowReservoir,
    opts: &SearchOptions,
) -> (Vec<SearchNode>, usize) {
    let per_node: Vec<(Vec<SearchNode>, usize)> = nodes
        .par_iter()
        .map(|node| expand_node(node, depth, m, check, reservoir, opts.canonicalizer))
        .collect();
    let tests = per_node.iter().map(|(_, t)| t).sum();
    (per_node.into_iter().flat_map(|(c, _)| c).collect(), tests)
}

fn expand_node(
    node: &SearchNode,
    depth: usize,
    m: usize,
    check: bool,
    reservoir: &RowReservoir,
    canonicalizer: Canonicalizer,
) -> (Vec<SearchNode>, usize) {
    let mut children = Vec::new();
    let mut tests = 0;
    for (pos, &w) in node.candidates.iter().enumerate() {
        let mut rows = node.rows.clone();
        rows.push(w);
        let candidates: Vec<u32> = if depth < m {
            let wrow = reservoir.row(w as usize);
            node.candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&c| dot(wrow, reservoir.row(c as usize)) == 0)
                .collect()
        } else {
            Vec::new()
        };
        // a prefix that cannot be completed to m rows is dropped
        if candidates.len() < m - depth {
            continue;
        }
        if check {
            tests += 1;
            let x = reservoir.matrix(&rows);
            let minimal = match canonicalizer {
                Canonicalizer::Auto => canon::is_minimal(&x),
                c => canon::is_minimal_with(&x, c),
            };
            if !minimal {
                continue;
            }
        }
        children.push(SearchNode { rows, candidates });
    }
    (children, tests)
}
