//! Intra-project include graph.
//!
//! Nodes are project files, named by their path relative to a source root
//! (the same path other files use to include them). Reachability is computed
//! once per graph over the strongly connected components.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;

use crate::config::ProjectConfig;
use crate::diagnostics::{Diagnostic, DiagnosticCode};
use crate::error::{Error, Result};
use crate::model::{IncludeClass, IncludeForm};
use crate::naming::classify_include;
use crate::scanner::SourceScan;

#[derive(Debug, Default)]
pub struct IncludeGraph {
    nodes: Vec<String>,
    index: BTreeMap<String, usize>,
    adjacency: Vec<BTreeSet<usize>>,
    closure: OnceLock<Vec<BitSet>>,
}

impl Clone for IncludeGraph {
    fn clone(&self) -> Self {
        Self {
            nodes: self.nodes.clone(),
            index: self.index.clone(),
            adjacency: self.adjacency.clone(),
            closure: OnceLock::new(),
        }
    }
}

impl PartialEq for IncludeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.adjacency == other.adjacency
    }
}

impl Eq for IncludeGraph {}

impl IncludeGraph {
    /// Nodes are stored sorted; duplicates are merged.
    pub fn new<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Self {
        let set: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        let nodes: Vec<String> = set.into_iter().collect();
        let index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let adjacency = vec![BTreeSet::new(); nodes.len()];
        Self { nodes, index, adjacency, closure: OnceLock::new() }
    }

    /// Adds `from -> to`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<bool> {
        let (f, t) = (self.require(from)?, self.require(to)?);
        let added = self.adjacency[f].insert(t);
        if added {
            self.closure = OnceLock::new();
        }
        Ok(added)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn contains(&self, node: &str) -> bool {
        self.index.contains_key(node)
    }

    /// All edges in (from, to) order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(f, targets)| {
            targets.iter().map(move |&t| (self.nodes[f].as_str(), self.nodes[t].as_str()))
        })
    }

    pub fn successors(&self, node: &str) -> Result<Vec<&str>> {
        let i = self.require(node)?;
        Ok(self.adjacency[i].iter().map(|&t| self.nodes[t].as_str()).collect())
    }

    fn require(&self, node: &str) -> Result<usize> {
        self.index.get(node).copied().ok_or_else(|| Error::UnknownNode(node.to_owned()))
    }

    /// Files reachable from `node` through one or more edges, excluding
    /// `node` itself.
    pub fn reachable(&self, node: &str) -> Result<BTreeSet<&str>> {
        let i = self.require(node)?;
        Ok(self.closure()[i].iter().filter(|&j| j != i).map(|j| self.nodes[j].as_str()).collect())
    }

    pub fn transitive_count(&self, node: &str) -> Result<usize> {
        let i = self.require(node)?;
        let set = &self.closure()[i];
        Ok(set.len() - usize::from(set.contains(i)))
    }

    /// Transitive counts for every node, in node order.
    pub fn transitive_counts(&self) -> Vec<usize> {
        self.closure().iter().enumerate().map(|(i, set)| set.len() - usize::from(set.contains(i))).collect()
    }

    fn closure(&self) -> &[BitSet] {
        self.closure.get_or_init(|| {
            let components = tarjan(&self.adjacency);
            let mut component_of = vec![0; self.nodes.len()];
            for (c, members) in components.iter().enumerate() {
                for &m in members {
                    component_of[m] = c;
                }
            }
            // Tarjan emits components in reverse topological order, so every
            // successor component is complete before it is needed.
            let mut reach: Vec<BitSet> = Vec::with_capacity(components.len());
            for (c, members) in components.iter().enumerate() {
                let mut set = BitSet::new(self.nodes.len());
                for &m in members {
                    for &t in &self.adjacency[m] {
                        set.insert(t);
                        let tc = component_of[t];
                        if tc != c {
                            set.union_with(&reach[tc]);
                        }
                    }
                }
                reach.push(set);
            }
            (0..self.nodes.len()).map(|n| reach[component_of[n]].clone()).collect()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(bits: usize) -> Self {
        Self { words: vec![0; bits.div_ceil(64)] }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b))
    }
}

/// Iterative Tarjan. Components come out in reverse topological order.
fn tarjan(adjacency: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adjacency.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next = 0;
    let succ: Vec<Vec<usize>> = adjacency.iter().map(|s| s.iter().copied().collect()).collect();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// One strongly connected component that contains a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    /// Component members, sorted.
    pub nodes: Vec<String>,
    /// A closed walk through the component starting and ending at its first
    /// member, e.g. `[a.h, b.h, a.h]`.
    pub witness: Vec<String>,
}

/// Every component of two or more files, plus every self-include, sorted by
/// first member.
pub fn detect_cycles(graph: &IncludeGraph) -> Vec<Cycle> {
    let mut out: Vec<Cycle> = tarjan(&graph.adjacency)
        .into_iter()
        .filter(|c| c.len() > 1 || graph.adjacency[c[0]].contains(&c[0]))
        .map(|members| {
            let witness =
                shortest_cycle(&graph.adjacency, &members).into_iter().map(|i| graph.nodes[i].clone()).collect();
            Cycle { nodes: members.iter().map(|&i| graph.nodes[i].clone()).collect(), witness }
        })
        .collect();
    out.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    out
}

/// Shortest path from the first member back to itself inside the component.
fn shortest_cycle(adjacency: &[BTreeSet<usize>], members: &[usize]) -> Vec<usize> {
    let start = members[0];
    if adjacency[start].contains(&start) {
        return vec![start, start];
    }
    let inside: BTreeSet<usize> = members.iter().copied().collect();
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if w == start {
                let mut path = vec![start, v];
                let mut cur = v;
                while cur != start {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                // Reversal leaves `start` at both ends.
                return path;
            }
            if inside.contains(&w) && !parent.contains_key(&w) {
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    vec![start]
}

/// Builds the graph from scanned files. Each distinct intra-project include
/// that names a project file is an edge; forced textual and external
/// includes are not. Quote includes are also looked up next to the including
/// file. Includes of missing project files yield a `DanglingInclude` warning
/// attributed to the including file.
pub fn build_graph<'a>(
    units: impl IntoIterator<Item = (&'a str, &'a SourceScan)>,
    config: &ProjectConfig,
) -> (IncludeGraph, Vec<(String, Diagnostic)>) {
    let units: Vec<(&str, &SourceScan)> = units.into_iter().collect();
    let mut graph = IncludeGraph::new(units.iter().map(|(p, _)| *p));
    let mut warnings = Vec::new();
    for (path, scan) in &units {
        for (target, form, line) in scan.includes() {
            if classify_include(target, config) != IncludeClass::Intra {
                continue;
            }
            let sibling = (form == IncludeForm::Quote)
                .then(|| path.rsplit_once('/').map(|(dir, _)| format!("{dir}/{target}")))
                .flatten();
            let resolved =
                if graph.contains(target) { Some(target.to_owned()) } else { sibling.filter(|s| graph.contains(s)) };
            match resolved {
                Some(t) => {
                    graph.add_edge(path, &t).expect("both nodes exist");
                }
                None => warnings.push((
                    (*path).to_owned(),
                    Diagnostic::warning(
                        DiagnosticCode::DanglingInclude,
                        line,
                        format!("`{target}` looks like a project header but no such file was scanned"),
                    ),
                )),
            }
        }
    }
    (graph, warnings)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    /// Strictly ascending. Bucket `i` holds counts in
    /// `[bucket_edges[i], bucket_edges[i + 1])`.
    pub bucket_edges: Vec<usize>,
    pub counts: Vec<usize>,
    /// Largest transitive count and the first file (in path order) having it.
    pub max_value: Option<(usize, String)>,
}

/// Buckets files by transitive count. The requested edges are extended with
/// a leading 0 and a trailing `max + 1` when needed so every file lands in a
/// bucket.
pub fn histogram(graph: &IncludeGraph, bucket_edges: &[usize]) -> Result<Histogram> {
    if bucket_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("bucket edges must be strictly ascending".into()));
    }
    let counts_per_node = graph.transitive_counts();
    let max_value = counts_per_node
        .iter()
        .enumerate()
        .fold(None::<(usize, usize)>, |best, (i, &c)| match best {
            Some((_, b)) if b >= c => best,
            _ => Some((i, c)),
        })
        .map(|(i, c)| (c, graph.nodes[i].clone()));

    let mut edges = bucket_edges.to_vec();
    if edges.first().is_none_or(|&e| e > 0) {
        edges.insert(0, 0);
    }
    let max = max_value.as_ref().map_or(0, |(c, _)| *c);
    if edges.len() < 2 || max >= *edges.last().expect("non-empty") {
        edges.push(max.max(*edges.last().expect("non-empty")) + 1);
    }

    let mut counts = vec![0; edges.len() - 1];
    for c in counts_per_node {
        let bucket = edges.partition_point(|&e| e <= c) - 1;
        counts[bucket] += 1;
    }
    Ok(Histogram { bucket_edges: edges, counts, max_value })
}

impl Histogram {
    /// `bucket_low`, `bucket_high` (exclusive), `count`, followed by a `#`
    /// summary line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("bucket_low\tbucket_high\tcount\n");
        for (i, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{}", self.bucket_edges[i], self.bucket_edges[i + 1], c);
        }
        let total: usize = self.counts.iter().sum();
        match &self.max_value {
            Some((m, path)) => {
                let _ = writeln!(out, "# files={total} max={m} max_file={path}");
            }
            None => {
                let _ = writeln!(out, "# files=0");
            }
        }
        out
    }
}

/// `path,direct,transitive` per file, in path order. Paths containing
/// commas or quotes are quoted.
pub fn transitive_counts_csv(graph: &IncludeGraph) -> String {
    let mut out = String::from("path,direct,transitive\n");
    for (i, count) in graph.transitive_counts().into_iter().enumerate() {
        let path = &graph.nodes[i];
        let path =
            if path.contains([',', '"', '\n']) { format!("\"{}\"", path.replace('"', "\"\"")) } else { path.clone() };
        let _ = writeln!(out, "{path},{},{count}", graph.adjacency[i].len());
    }
    out
}
