//! Text formats: edge lists, label files and seed files.
//!
//! All three are line-oriented. Blank lines and lines starting with the
//! comment prefix (default `#`) are skipped. Fields are separated by a tab,
//! a comma, or runs of spaces; unless given explicitly, the delimiter is
//! taken from the first data line (tab if present, else comma, else spaces).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dirichlet_core::{Graph, MultiLabels, NodePartition};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Tab,
    Comma,
    /// One or more spaces or tabs.
    Space,
}

impl FromStr for Delimiter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tab" | "\\t" => Ok(Delimiter::Tab),
            "comma" | "," => Ok(Delimiter::Comma),
            "space" | " " => Ok(Delimiter::Space),
            _ => Err(format!("unknown delimiter `{s}` (expected tab, comma or space)")),
        }
    }
}

impl Delimiter {
    fn detect(line: &str) -> Self {
        if line.contains('\t') {
            Delimiter::Tab
        } else if line.contains(',') {
            Delimiter::Comma
        } else {
            Delimiter::Space
        }
    }

    fn split<'a>(self, line: &'a str) -> Vec<&'a str> {
        match self {
            Delimiter::Tab => line.split('\t').map(str::trim).collect(),
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Space => line.split_whitespace().collect(),
        }
    }
}

/// Which copy of a node a directed dataset is classified on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    /// Copies carrying the outgoing arcs.
    #[default]
    Source,
    /// Copies carrying the incoming arcs.
    Destination,
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "source" | "src" => Ok(Side::Source),
            "destination" | "dst" => Ok(Side::Destination),
            _ => Err(format!("unknown side `{s}` (expected source or destination)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListOptions {
    pub directed: bool,
    /// Read a third column as the edge weight. Without it, extra columns are
    /// ignored and every edge has weight 1.
    pub weighted: bool,
    pub comment_prefix: String,
    pub delimiter: Option<Delimiter>,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            directed: false,
            weighted: false,
            comment_prefix: "#".to_string(),
            delimiter: None,
        }
    }
}

/// External string ids, numbered densely in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl IdMap {
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A loaded graph with its id mapping.
///
/// Undirected files map external id `i` to node `i`. Directed files are
/// lifted to a bipartite graph: each external id gets a source copy if it has
/// outgoing arcs and a destination copy if it has incoming arcs. Copies
/// without arcs are left out, since they would be isolated.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    pub ids: IdMap,
    pub directed: bool,
    owner: Vec<(usize, Side)>,
    source_node: Vec<Option<usize>>,
    dest_node: Vec<Option<usize>>,
}

impl EdgeList {
    /// Graph node of external index `ext` on `side` (the side is ignored for
    /// undirected graphs).
    pub fn node(&self, ext: usize, side: Side) -> Option<usize> {
        match side {
            Side::Source => self.source_node[ext],
            Side::Destination => self.dest_node[ext],
        }
    }

    pub fn node_of(&self, name: &str, side: Side) -> Option<usize> {
        self.ids.get(name).and_then(|ext| self.node(ext, side))
    }

    /// External index and side of a graph node.
    pub fn owner(&self, node: usize) -> (usize, Side) {
        self.owner[node]
    }

    pub fn name_of(&self, node: usize) -> &str {
        self.ids.name(self.owner[node].0)
    }

    /// Graph nodes that represent `side`, in external-id order.
    pub fn nodes_on(&self, side: Side) -> Vec<usize> {
        (0..self.ids.len()).filter_map(|ext| self.node(ext, side)).collect()
    }

    /// Re-emits the edges with external ids, one `src<TAB>dst<TAB>weight` line
    /// each; directed graphs emit their arcs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, j, w) in self.graph.edges() {
            let (a, b) = match (self.owner[i], self.owner[j]) {
                ((_, Side::Destination), (_, Side::Source)) => (j, i),
                _ => (i, j),
            };
            let _ = writeln!(out, "{}\t{}\t{}", self.name_of(a), self.name_of(b), w);
        }
        out
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Data lines with their 1-based line numbers.
fn data_lines<'a>(text: &'a str, comment_prefix: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines().enumerate().filter_map(move |(idx, raw)| {
        let line = raw.trim();
        let comment = !comment_prefix.is_empty() && line.starts_with(comment_prefix);
        (!line.is_empty() && !comment).then_some((idx + 1, line))
    })
}

pub fn load_edge_list(path: &Path, opts: &EdgeListOptions) -> Result<EdgeList> {
    parse_edge_list(&read(path)?, path, opts)
}

pub fn parse_edge_list(text: &str, path: &Path, opts: &EdgeListOptions) -> Result<EdgeList> {
    let parse_err = |line: usize, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut ids = IdMap::default();
    let mut arcs = Vec::new();
    let mut delimiter = opts.delimiter;
    for (line_no, line) in data_lines(text, &opts.comment_prefix) {
        let delim = *delimiter.get_or_insert_with(|| Delimiter::detect(line));
        let fields = delim.split(line);
        if fields.len() < 2 || fields[0].is_empty() || fields[1].is_empty() {
            return Err(parse_err(line_no, format!("expected `src dst [weight]`, got `{line}`")));
        }
        let w = if opts.weighted {
            let Some(raw) = fields.get(2) else {
                return Err(parse_err(line_no, "missing weight column".into()));
            };
            let w: f64 = raw
                .parse()
                .map_err(|_| parse_err(line_no, format!("weight `{raw}` is not a number")))?;
            if !(w > 0.0) || !w.is_finite() {
                return Err(parse_err(line_no, format!("weight {w} must be positive")));
            }
            w
        } else {
            1.0
        };
        let a = ids.intern(fields[0]);
        let b = ids.intern(fields[1]);
        arcs.push((a, b, w));
    }
    if arcs.is_empty() {
        return Err(CliError::Invalid {
            path: path.to_path_buf(),
            message: "no edges".into(),
        });
    }

    let n = ids.len();
    let graph_err = |e| CliError::Invalid {
        path: path.to_path_buf(),
        message: format!("{e}"),
    };
    if !opts.directed {
        let graph = Graph::from_edges(n, &arcs).map_err(graph_err)?;
        let all: Vec<Option<usize>> = (0..n).map(Some).collect();
        return Ok(EdgeList {
            graph,
            ids,
            directed: false,
            owner: (0..n).map(|i| (i, Side::Source)).collect(),
            source_node: all.clone(),
            dest_node: all,
        });
    }

    let mut has_out = vec![false; n];
    let mut has_in = vec![false; n];
    for &(a, b, _) in &arcs {
        has_out[a] = true;
        has_in[b] = true;
    }
    let mut owner = Vec::new();
    let mut source_node = vec![None; n];
    let mut dest_node = vec![None; n];
    for ext in (0..n).filter(|&e| has_out[e]) {
        source_node[ext] = Some(owner.len());
        owner.push((ext, Side::Source));
    }
    for ext in (0..n).filter(|&e| has_in[e]) {
        dest_node[ext] = Some(owner.len());
        owner.push((ext, Side::Destination));
    }
    let edges: Vec<(usize, usize, f64)> = arcs
        .iter()
        .map(|&(a, b, w)| (source_node[a].unwrap(), dest_node[b].unwrap(), w))
        .collect();
    let graph = Graph::from_edges(owner.len(), &edges).map_err(graph_err)?;
    Ok(EdgeList {
        graph,
        ids,
        directed: true,
        owner,
        source_node,
        dest_node,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelOptions {
    pub comment_prefix: String,
    pub delimiter: Option<Delimiter>,
    /// Keep every label of a repeated node instead of rejecting conflicts.
    pub multi: bool,
    pub side: Side,
}

impl Default for LabelOptions {
    fn default() -> Self {
        Self {
            comment_prefix: "#".to_string(),
            delimiter: None,
            multi: false,
            side: Side::Source,
        }
    }
}

/// Label names; label `k` (1-based) is `names[k - 1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelNames {
    pub names: Vec<String>,
}

impl LabelNames {
    pub fn k(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32 + 1)
    }

    pub fn name(&self, label: u32) -> &str {
        &self.names[label as usize - 1]
    }

    /// Numeric order when every name is an integer, otherwise lexicographic.
    fn from_set(mut names: Vec<String>) -> Self {
        names.sort();
        names.dedup();
        if names.iter().all(|n| n.parse::<i64>().is_ok()) {
            names.sort_by_key(|n| n.parse::<i64>().unwrap());
        }
        Self { names }
    }
}

/// Labels of the graph nodes on one side, possibly several per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub names: LabelNames,
    /// Sorted label ids per graph node; empty when unlabelled.
    pub sets: Vec<Vec<u32>>,
}

impl Labels {
    /// Single-label view; a node with several labels is an error.
    pub fn partition(&self) -> Result<NodePartition> {
        let mut labels = Vec::with_capacity(self.sets.len());
        for set in &self.sets {
            match set.as_slice() {
                [] => labels.push(None),
                [l] => labels.push(Some(*l)),
                many => {
                    return Err(CliError::Usage(format!(
                        "a node carries {} labels; load the file in multi-label mode",
                        many.len()
                    )))
                }
            }
        }
        Ok(NodePartition::new(labels, self.names.k())?)
    }

    pub fn multi(&self) -> Result<MultiLabels> {
        Ok(MultiLabels::new(self.sets.clone(), self.names.k())?)
    }
}

struct LabelLine<'a> {
    line: usize,
    id: &'a str,
    label: &'a str,
}

fn label_lines<'a>(text: &'a str, path: &Path, opts: &'a LabelOptions) -> Result<Vec<LabelLine<'a>>> {
    let mut delimiter = opts.delimiter;
    let mut out = Vec::new();
    for (line, raw) in data_lines(text, &opts.comment_prefix) {
        let delim = *delimiter.get_or_insert_with(|| Delimiter::detect(raw));
        let fields = delim.split(raw);
        if fields.len() < 2 || fields[0].is_empty() || fields[1].is_empty() {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected `node label`, got `{raw}`"),
            });
        }
        out.push(LabelLine {
            line,
            id: fields[0],
            label: fields[1],
        });
    }
    Ok(out)
}

fn unknown_ids_error(path: &Path, unknown: &[(usize, &str)]) -> CliError {
    const SHOWN: usize = 20;
    let mut message = format!("{} label line(s) name unknown nodes:", unknown.len());
    for (line, id) in unknown.iter().take(SHOWN) {
        let _ = write!(message, "\n    line {line}: `{id}`");
    }
    if unknown.len() > SHOWN {
        let _ = write!(message, "\n    ... and {} more", unknown.len() - SHOWN);
    }
    CliError::Invalid {
        path: path.to_path_buf(),
        message,
    }
}

pub fn load_labels(path: &Path, edges: &EdgeList, opts: &LabelOptions) -> Result<Labels> {
    parse_labels(&read(path)?, path, edges, opts)
}

pub fn parse_labels(text: &str, path: &Path, edges: &EdgeList, opts: &LabelOptions) -> Result<Labels> {
    let lines = label_lines(text, path, opts)?;
    let unknown: Vec<(usize, &str)> = lines
        .iter()
        .filter(|l| edges.ids.get(l.id).is_none())
        .map(|l| (l.line, l.id))
        .collect();
    if !unknown.is_empty() {
        return Err(unknown_ids_error(path, &unknown));
    }
    let names = LabelNames::from_set(lines.iter().map(|l| l.label.to_string()).collect());
    let mut sets: Vec<Vec<u32>> = vec![Vec::new(); edges.graph.n()];
    let mut first_line: HashMap<usize, usize> = HashMap::new();
    let mut off_side = 0usize;
    for l in &lines {
        let Some(node) = edges.node_of(l.id, opts.side) else {
            off_side += 1;
            continue;
        };
        let label = names.id(l.label).expect("label was collected above");
        let set = &mut sets[node];
        if set.contains(&label) {
            continue;
        }
        if !opts.multi && !set.is_empty() {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: l.line,
                message: format!(
                    "node `{}` is labelled `{}` here and `{}` on line {}",
                    l.id,
                    l.label,
                    names.name(set[0]),
                    first_line[&node]
                ),
            });
        }
        first_line.entry(node).or_insert(l.line);
        set.push(label);
        set.sort_unstable();
    }
    if off_side > 0 {
        log::warn!(
            "{}: {off_side} label line(s) refer to nodes without arcs on the {:?} side; ignored",
            path.display(),
            opts.side
        );
    }
    Ok(Labels { names, sets })
}

/// Seed file: `node label` lines. Labels must be names from `names`.
pub fn load_seeds(
    path: &Path,
    edges: &EdgeList,
    names: &LabelNames,
    opts: &LabelOptions,
) -> Result<Vec<(usize, u32)>> {
    parse_seeds(&read(path)?, path, edges, names, opts)
}

pub fn parse_seeds(
    text: &str,
    path: &Path,
    edges: &EdgeList,
    names: &LabelNames,
    opts: &LabelOptions,
) -> Result<Vec<(usize, u32)>> {
    let lines = label_lines(text, path, opts)?;
    let unknown: Vec<(usize, &str)> = lines
        .iter()
        .filter(|l| edges.node_of(l.id, opts.side).is_none())
        .map(|l| (l.line, l.id))
        .collect();
    if !unknown.is_empty() {
        return Err(unknown_ids_error(path, &unknown));
    }
    let mut seeds = Vec::with_capacity(lines.len());
    for l in &lines {
        let Some(label) = names.id(l.label) else {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: l.line,
                message: format!("unknown label `{}`", l.label),
            });
        };
        seeds.push((edges.node_of(l.id, opts.side).unwrap(), label));
    }
    Ok(seeds)
}

/// Label names found in a seed file, for runs without a label file.
pub fn seed_file_names(path: &Path, opts: &LabelOptions) -> Result<LabelNames> {
    let text = read(path)?;
    let lines = label_lines(&text, path, opts)?;
    Ok(LabelNames::from_set(lines.iter().map(|l| l.label.to_string()).collect()))
}

/// An edge list with labels on one side.
#[derive(Debug, Clone)]
pub struct DatasetBundle {
    pub edges: EdgeList,
    pub labels: Labels,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub graph: PathBuf,
    pub labels: PathBuf,
    pub edge_options: EdgeListOptions,
    pub label_options: LabelOptions,
}

impl DatasetSpec {
    pub fn load(&self) -> Result<DatasetBundle> {
        let edges = load_edge_list(&self.graph, &self.edge_options)?;
        let labels = load_labels(&self.labels, &edges, &self.label_options)?;
        Ok(DatasetBundle {
            edges,
            labels,
            side: self.label_options.side,
        })
    }
}
