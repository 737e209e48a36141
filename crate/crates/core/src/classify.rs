//! Exact H- and TH-classes, block-sum decomposition and structure labels.
//!
//! Hadamard equivalence is decided by equality of canonical forms. A square
//! weighing matrix is imprimitive exactly when the bipartite support graph
//! (rows and columns as vertices, nonzero entries as edges) is disconnected,
//! since monomial operations only relabel that graph.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonical;
use crate::error::{Error, Result};
use crate::invariant::code_invariant;
use crate::matrix::IntegerMatrix;
use crate::search::{search, SearchOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HClass {
    /// `Min` of the class.
    pub representative: IntegerMatrix,
    /// Number of inputs collapsed into this class.
    pub members: usize,
}

/// Groups inputs by canonical form; classes come out sorted ascending.
pub fn dedup_h_classes(list: &[IntegerMatrix]) -> Vec<HClass> {
    let canon: Vec<IntegerMatrix> = list.par_iter().map(canonical).collect();
    let mut classes: BTreeMap<IntegerMatrix, usize> = BTreeMap::new();
    for c in canon {
        *classes.entry(c).or_default() += 1;
    }
    classes
        .into_iter()
        .map(|(representative, members)| HClass {
            representative,
            members,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct THClass {
    /// `min(Min(M), Min(M^T))`.
    pub representative: IntegerMatrix,
    pub self_transpose: bool,
    /// Canonical forms of the merged H-classes, ascending.
    pub h_classes: Vec<IntegerMatrix>,
    /// Raw inputs behind all merged H-classes.
    pub members: usize,
}

/// Transpose-Hadamard canonical form of a square matrix.
pub fn th_canonical(m: &IntegerMatrix) -> Result<IntegerMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(canonical(m).min(canonical(&m.transpose())))
}

/// Merges H-classes whose transposes are H-equivalent.
pub fn dedup_th_classes(classes: &[HClass]) -> Result<Vec<THClass>> {
    if let Some(c) = classes.iter().find(|c| !c.representative.is_square()) {
        return Err(Error::NotSquare {
            rows: c.representative.rows(),
            cols: c.representative.cols(),
        });
    }
    let transposed: Vec<IntegerMatrix> = classes
        .par_iter()
        .map(|c| canonical(&c.representative.transpose()))
        .collect();
    let mut merged: BTreeMap<IntegerMatrix, THClass> = BTreeMap::new();
    for (c, t) in classes.iter().zip(transposed) {
        let self_transpose = t == c.representative;
        let key = c.representative.clone().min(t);
        let entry = merged.entry(key.clone()).or_insert_with(|| THClass {
            representative: key,
            self_transpose,
            h_classes: Vec::new(),
            members: 0,
        });
        entry.h_classes.push(c.representative.clone());
        entry.members += c.members;
    }
    Ok(merged
        .into_values()
        .map(|mut c| {
            c.h_classes.sort();
            c.h_classes.dedup();
            c
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Canonical blocks, ascending by shape then row-lex.
    pub blocks: Vec<IntegerMatrix>,
    pub primitive: bool,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits `m` along the connected components of its support graph.
pub fn decompose(m: &IntegerMatrix) -> Result<BlockDecomposition> {
    let (rows, cols) = m.shape();
    for i in 0..rows {
        if m.row(i).iter().all(|&e| e == 0) {
            return Err(Error::ZeroLine { kind: "row", index: i + 1 });
        }
    }
    for j in 0..cols {
        if (0..rows).all(|i| m.get(i, j) == 0) {
            return Err(Error::ZeroLine {
                kind: "column",
                index: j + 1,
            });
        }
    }
    // vertices 0..rows are rows, rows..rows+cols are columns
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    for i in 0..rows {
        for j in 0..cols {
            if m.get(i, j) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut components: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for i in 0..rows {
        let root = find(&mut parent, i);
        components.entry(root).or_default().0.push(i);
    }
    for j in 0..cols {
        let root = find(&mut parent, rows + j);
        components.entry(root).or_default().1.push(j);
    }
    let mut blocks: Vec<IntegerMatrix> = components
        .into_values()
        .map(|(r, c)| canonical(&m.select_rows(&r).select_cols(&c)))
        .collect();
    blocks.sort();
    let primitive = blocks.len() == 1;
    Ok(BlockDecomposition { blocks, primitive })
}

/// Primitive TH-class representatives per order, for one weight.
///
/// Letters go to the orders with a non-empty entry list, smallest order first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    pub k: u64,
    entries: BTreeMap<usize, Vec<IntegerMatrix>>,
}

impl Catalog {
    pub fn new(k: u64) -> Self {
        Self {
            k,
            entries: BTreeMap::new(),
        }
    }

    /// Sets the primitive representatives of one order (sorted on insert).
    pub fn insert(&mut self, order: usize, mut reps: Vec<IntegerMatrix>) {
        reps.sort();
        reps.dedup();
        self.entries.insert(order, reps);
    }

    pub fn entries(&self, order: usize) -> &[IntegerMatrix] {
        self.entries.get(&order).map_or(&[], Vec::as_slice)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn letter(&self, order: usize) -> Option<char> {
        self.entries
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .position(|(&o, _)| o == order)
            .map(|p| char::from(b'A' + (p % 26) as u8))
    }

    /// `(letter, 1-based index)` of the catalog entry TH-equivalent to `block`.
    pub fn lookup(&self, block: &IntegerMatrix) -> Result<(char, usize)> {
        let order = block.rows();
        let th = th_canonical(block)?;
        let pos = self
            .entries(order)
            .binary_search(&th)
            .map_err(|_| Error::NotInCatalog { order })?;
        let letter = self.letter(order).ok_or(Error::NotInCatalog { order })?;
        Ok((letter, pos + 1))
    }
}

/// Caches primitive TH-classes per `(order, k)`.
#[derive(Debug, Default)]
pub struct CatalogCache {
    primitives: HashMap<(usize, u64), Vec<IntegerMatrix>>,
}

impl CatalogCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Primitive TH-class representatives of `IW(order, k)`, by a full search.
    pub fn primitives(&mut self, order: usize, k: u64, threads: usize) -> Result<Vec<IntegerMatrix>> {
        if let Some(v) = self.primitives.get(&(order, k)) {
            return Ok(v.clone());
        }
        let mut opts = SearchOptions::new(order);
        opts.threads = threads;
        let found = search(order, order, k, &opts)?.matrices;
        let th = dedup_th_classes(&dedup_h_classes(&found))?;
        let mut prim = Vec::new();
        for c in th {
            if decompose(&c.representative)?.primitive {
                prim.push(c.representative);
            }
        }
        self.primitives.insert((order, k), prim.clone());
        Ok(prim)
    }

    /// Catalog of all orders `1..=max_order`.
    pub fn catalog(&mut self, max_order: usize, k: u64, threads: usize) -> Result<Catalog> {
        let mut cat = Catalog::new(k);
        for order in 1..=max_order {
            let prim = self.primitives(order, k, threads)?;
            cat.insert(order, prim);
        }
        Ok(cat)
    }
}

/// A block-sum expression such as `3A_1⊕C_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureLabel {
    /// `(order, letter, index, multiplicity)`, ascending by order then index.
    pub terms: Vec<(usize, char, usize, usize)>,
}

impl StructureLabel {
    /// The label with indices dropped and multiplicities summed per letter,
    /// as used in the multiplicity table (e.g. `3A⊕C`).
    pub fn kind(&self) -> String {
        let mut per: Vec<(char, usize)> = Vec::new();
        for &(_, letter, _, mult) in &self.terms {
            match per.last_mut() {
                Some(last) if last.0 == letter => last.1 += mult,
                _ => per.push((letter, mult)),
            }
        }
        per.iter()
            .map(|&(l, m)| if m == 1 { l.to_string() } else { format!("{m}{l}") })
            .collect::<Vec<_>>()
            .join("⊕")
    }

    /// Block orders with multiplicity, descending; orders the table rows.
    pub fn sort_key(&self) -> Vec<usize> {
        let mut key: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|&(o, _, _, m)| std::iter::repeat_n(o, m))
            .collect();
        key.sort_unstable_by(|a, b| b.cmp(a));
        key
    }
}

impl fmt::Display for StructureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(_, letter, index, mult)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "⊕")?;
            }
            if mult > 1 {
                write!(f, "{mult}")?;
            }
            write!(f, "{letter}_{index}")?;
        }
        Ok(())
    }
}

pub fn structure_label(dec: &BlockDecomposition, catalog: &Catalog) -> Result<StructureLabel> {
    let mut found: Vec<(usize, char, usize)> = dec
        .blocks
        .iter()
        .map(|b| catalog.lookup(b).map(|(l, i)| (b.rows(), l, i)))
        .collect::<Result<_>>()?;
    found.sort_unstable();
    let mut terms: Vec<(usize, char, usize, usize)> = Vec::new();
    for (o, l, i) in found {
        match terms.last_mut() {
            Some(t) if (t.0, t.1, t.2) == (o, l, i) => t.3 += 1,
            _ => terms.push((o, l, i, 1)),
        }
    }
    Ok(StructureLabel { terms })
}

/// How representatives are printed in reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DisplayMode {
    /// The minimal (negative-leading) form.
    #[default]
    Canonical,
    /// Every nonzero row and column leading positive: the entrywise negation
    /// of the minimal form.
    Paper,
}

impl DisplayMode {
    pub fn render(self, m: &IntegerMatrix) -> IntegerMatrix {
        match self {
            DisplayMode::Canonical => m.clone(),
            DisplayMode::Paper => m.negated(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportClass {
    pub index: usize,
    pub rows: Vec<Vec<i32>>,
    pub members: usize,
    pub h_classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_transpose: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassificationReport {
    pub m: usize,
    pub n: usize,
    pub k: u64,
    /// Inputs fed to classification.
    pub inputs: usize,
    pub invariant_groups: Option<usize>,
    pub h_classes: usize,
    /// `None` unless TH-merging ran.
    pub th_classes: Option<usize>,
    pub primitive: Option<usize>,
    pub classes: Vec<ReportClass>,
    /// `(kind, multiplicity)` in table order.
    pub table: Vec<(String, usize)>,
}

/// What to compute on top of the H-classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub th: bool,
    pub decompose: bool,
    /// Code-invariant depth for the per-class digest; skipped when larger than `m`.
    pub invariant_depth: Option<usize>,
    pub invariant_bound: Option<i64>,
    pub display: DisplayMode,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            th: true,
            decompose: true,
            invariant_depth: Some(3),
            invariant_bound: None,
            display: DisplayMode::Canonical,
        }
    }
}

/// Assembles the report. With `th`, one entry per TH-class; otherwise one
/// per H-class. Labels need a catalog covering every block order.
pub fn build_report(
    (m, n, k): (usize, usize, u64),
    inputs: usize,
    h_classes: &[HClass],
    th_classes: Option<&[THClass]>,
    catalog: Option<&Catalog>,
    opts: &ReportOptions,
) -> Result<ClassificationReport> {
    let bound = opts
        .invariant_bound
        .unwrap_or_else(|| crate::nsoks::isqrt(k) as i64);
    struct Entry<'a> {
        rep: &'a IntegerMatrix,
        members: usize,
        h: usize,
        self_transpose: Option<bool>,
    }
    let entries: Vec<Entry> = match th_classes {
        Some(th) => th
            .iter()
            .map(|c| Entry {
                rep: &c.representative,
                members: c.members,
                h: c.h_classes.len(),
                self_transpose: Some(c.self_transpose),
            })
            .collect(),
        None => h_classes
            .iter()
            .map(|c| Entry {
                rep: &c.representative,
                members: c.members,
                h: 1,
                self_transpose: None,
            })
            .collect(),
    };

    let mut classes = Vec::with_capacity(entries.len());
    let mut table: Vec<(Vec<usize>, String, usize)> = Vec::new();
    let mut primitive_count = 0;
    for (i, e) in entries.iter().enumerate() {
        let invariant = match opts.invariant_depth {
            Some(d) if d <= e.rep.rows() => Some(code_invariant(e.rep, d, bound.max(e.rep.max_abs()))?.digest()),
            _ => None,
        };
        let (primitive, blocks, label, kind) = if opts.decompose {
            let dec = decompose(e.rep)?;
            primitive_count += usize::from(dec.primitive);
            let orders = dec.blocks.iter().map(IntegerMatrix::rows).collect();
            match catalog {
                Some(cat) => {
                    let label = structure_label(&dec, cat)?;
                    let kind = label.kind();
                    match table.iter_mut().find(|t| t.1 == kind) {
                        Some(t) => t.2 += 1,
                        None => table.push((label.sort_key(), kind.clone(), 1)),
                    }
                    (Some(dec.primitive), Some(orders), Some(label.to_string()), Some(kind))
                }
                None => (Some(dec.primitive), Some(orders), None, None),
            }
        } else {
            (None, None, None, None)
        };
        classes.push(ReportClass {
            index: i + 1,
            rows: opts.display.render(e.rep).to_rows(),
            members: e.members,
            h_classes: e.h,
            self_transpose: e.self_transpose,
            invariant,
            primitive,
            blocks,
            label,
            kind,
        });
    }
    table.sort();
    Ok(ClassificationReport {
        m,
        n,
        k,
        inputs,
        invariant_groups: None,
        h_classes: h_classes.len(),
        th_classes: th_classes.map(<[THClass]>::len),
        primitive: opts.decompose.then_some(primitive_count),
        classes,
        table: table.into_iter().map(|(_, kind, c)| (kind, c)).collect(),
    })
}

impl ClassificationReport {
    /// One JSON object per class.
    pub fn class_lines(&self) -> String {
        let mut s = String::new();
        for c in &self.classes {
            s.push_str(&serde_json::to_string(c).expect("report classes serialize"));
            s.push('\n');
        }
        s
    }

    /// Human-readable summary with the multiplicity table.
    pub fn table_text(&self) -> String {
        let mut s = format!("PIW({},{},{})\n", self.m, self.n, self.k);
        s.push_str(&format!("inputs: {}\n", self.inputs));
        if let Some(g) = self.invariant_groups {
            s.push_str(&format!("invariant groups: {g}\n"));
        }
        s.push_str(&format!("H-classes: {}\n", self.h_classes));
        if let Some(t) = self.th_classes {
            s.push_str(&format!("TH-classes: {t}\n"));
        }
        if let Some(p) = self.primitive {
            s.push_str(&format!("primitive: {p}\n"));
        }
        if !self.table.is_empty() {
            let width = self.table.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0).max(5);
            s.push_str(&format!("\n{:<width$} | Multiplicity\n", "Type"));
            s.push_str(&format!("{}-+-------------\n", "-".repeat(width)));
            for (kind, mult) in &self.table {
                let pad = width - kind.chars().count();
                s.push_str(&format!("{kind}{} | {mult}\n", " ".repeat(pad)));
            }
            let total: usize = self.table.iter().map(|(_, c)| c).sum();
            s.push_str(&format!("{}-+-------------\n", "-".repeat(width)));
            s.push_str(&format!("{:<width$} | {total}\n", "Total"));
        }
        s
    }
}
