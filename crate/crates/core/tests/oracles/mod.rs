//! Independent reference implementations and generators shared by the
//! property tests. Nothing here calls into the library under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::LazyLock;

use rand::seq::SliceRandom;
use rand::Rng;
use regex::Regex;

// ---------------------------------------------------------------- graphs

pub type Edges = Vec<(usize, usize)>;

pub fn bfs_reachable(n: usize, edges: &[(usize, usize)], start: usize) -> BTreeSet<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<usize> = adj[start].iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        if seen.insert(v) {
            queue.extend(adj[v].iter().copied());
        }
    }
    seen.remove(&start);
    seen
}

/// Groups of mutually reachable nodes that contain a cycle, found by the
/// pairwise test `u ->* v && v ->* u`.
pub fn brute_force_cyclic_components(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let reach: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| {
            let mut r = bfs_reachable(n, edges, v);
            if edges.contains(&(v, v)) || edges.iter().any(|&(a, b)| a != v && b == v && r.contains(&a)) {
                r.insert(v);
            }
            r
        })
        .collect();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for u in 0..n {
        if assigned[u] || !reach[u].contains(&u) {
            continue;
        }
        let comp: BTreeSet<usize> =
            (0..n).filter(|&v| v == u || (reach[u].contains(&v) && reach[v].contains(&u))).collect();
        for &v in &comp {
            assigned[v] = true;
        }
        out.push(comp);
    }
    out
}

pub fn random_digraph(rng: &mut impl Rng, n: usize, density: f64) -> Edges {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Random DAG: edges only go forward in a random permutation.
pub fn random_dag(rng: &mut impl Rng, n: usize, density: f64) -> (Edges, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((order[i], order[j]));
            }
        }
    }
    (edges, order)
}

/// A random DAG plus `k` disjoint 3-cycles. Each cycle sits on three
/// consecutive positions of the DAG order, so no two cycles can merge.
pub fn dag_with_planted_cycles(rng: &mut impl Rng, n: usize, density: f64, k: usize) -> Edges {
    assert!(n >= 3 * k);
    let (mut edges, order) = random_dag(rng, n, density);
    let slots = n / 3;
    let mut chosen: Vec<usize> = (0..slots).collect();
    chosen.shuffle(rng);
    for &s in chosen.iter().take(k) {
        let (a, b, c) = (order[3 * s], order[3 * s + 1], order[3 * s + 2]);
        edges.extend([(a, b), (b, c), (c, a)]);
    }
    edges
}

pub fn node_name(i: usize) -> String {
    format!("n{i:03}.h")
}

// ---------------------------------------------------------------- includes

/// Removes comments and replaces literal contents by spaces, keeping
/// newlines. Does not know about line splicing or digit separators; the
/// corpus generator avoids both.
pub fn strip_comments_and_literals(text: &str) -> String {
    let c: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    let mut line_start = true;
    let mut in_include = false;
    while i < c.len() {
        let ch = c[i];
        if ch == '\n' {
            out.push('\n');
            line_start = true;
            in_include = false;
            i += 1;
            continue;
        }
        if line_start && ch == '#' {
            let rest: String = c[i + 1..].iter().take_while(|&&x| x != '\n').collect();
            in_include = rest.trim_start().starts_with("include");
        }
        if !ch.is_whitespace() {
            line_start = false;
        }
        if in_include && (ch == '<' || ch == '"') {
            let close = if ch == '<' { '>' } else { '"' };
            out.push(ch);
            i += 1;
            while i < c.len() && c[i] != close && c[i] != '\n' {
                out.push(c[i]);
                i += 1;
            }
            if i < c.len() && c[i] == close {
                out.push(close);
                i += 1;
            }
            in_include = false;
            continue;
        }
        if ch == '/' && c.get(i + 1) == Some(&'/') {
            while i < c.len() && c[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if ch == '/' && c.get(i + 1) == Some(&'*') {
            out.push(' ');
            i += 2;
            while i < c.len() && !(c[i] == '*' && c.get(i + 1) == Some(&'/')) {
                if c[i] == '\n' {
                    out.push('\n');
                }
                i += 1;
            }
            i += 2;
            continue;
        }
        if ch == 'R' && c.get(i + 1) == Some(&'"') {
            let open = i + 2;
            let paren = (open..c.len()).find(|&j| c[j] == '(').expect("raw string delimiter");
            let delim: String = c[open..paren].iter().collect();
            let terminator: Vec<char> = format!("){delim}\"").chars().collect();
            out.push_str("R\"");
            i = paren + 1;
            while i < c.len() && c[i..].iter().take(terminator.len()).ne(terminator.iter()) {
                out.push(if c[i] == '\n' { '\n' } else { ' ' });
                i += 1;
            }
            out.push('"');
            i += terminator.len();
            continue;
        }
        if ch == '"' || ch == '\'' {
            out.push(ch);
            i += 1;
            while i < c.len() && c[i] != ch {
                if c[i] == '\\' {
                    i += 1;
                }
                out.push(' ');
                i += 1;
            }
            out.push(ch);
            i += 1;
            continue;
        }
        out.push(ch);
        i += 1;
    }
    out
}

/// Includes found by a regex over the stripped text: (target, 1-based line).
pub fn oracle_includes(text: &str) -> Vec<(String, usize)> {
    static RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r#"^\s*#\s*include\s*[<"]([^>"]+)[>"]"#).unwrap());
    let re = &*RE;
    strip_comments_and_literals(text)
        .lines()
        .enumerate()
        .filter_map(|(i, l)| re.captures(l).map(|c| (c[1].to_owned(), i + 1)))
        .collect()
}

/// A file interleaving `n` real includes with decoys hidden in comments,
/// string, character and raw string literals. Returns the text and the real
/// include targets in order.
pub fn random_include_corpus(rng: &mut impl Rng, n: usize) -> (String, Vec<String>) {
    let mut out = String::new();
    let mut real = Vec::new();
    let mut remaining = n;
    let mut decoy = 0;
    while remaining > 0 || rng.gen_bool(0.3) {
        let target = format!("dir{}/file{}.h", rng.gen_range(0..5), rng.gen_range(0..1000));
        let choice = if remaining == 0 { rng.gen_range(1..8) } else { rng.gen_range(0..8) };
        match choice {
            0 => {
                let form = if rng.gen_bool(0.5) { format!("<{target}>") } else { format!("\"{target}\"") };
                let lead = [" ", "", "  ", "\t"][rng.gen_range(0..4)];
                let gap = [" ", "  ", "\t", ""][rng.gen_range(0..4)];
                let tail = ["", " // trailing", " /* c */"][rng.gen_range(0..3)];
                out.push_str(&format!("{lead}#{gap}include {form}{tail}\n"));
                real.push(target);
                remaining -= 1;
            }
            1 => out.push_str(&format!("// #include <{target}>\n")),
            2 => out.push_str(&format!("/* start\n#include <{target}>\n   end */ int x{decoy};\n")),
            3 => out.push_str(&format!("const char *s{decoy} = \"#include <{target}>\";\n")),
            4 => out.push_str(&format!("auto r{decoy} = R\"tag(\n#include <{target}>\n)tag\";\n")),
            5 => out.push_str(&format!("char q{decoy} = '\"'; const char *t{decoy} = \"/*\";\n")),
            6 => out.push_str(&format!("int f{decoy}(); /* #include <{target}> */ int g{decoy}();\n")),
            _ => out.push('\n'),
        }
        decoy += 1;
    }
    (out, real)
}

// ---------------------------------------------------------------- projects

pub const PREFIX: &str = "proj/";
pub const OPEN: &str = "PROJ_NAMESPACE_OPEN";
pub const CLOSE: &str = "PROJ_NAMESPACE_CLOSE";
pub const FORCED: &str = "proj/config.h";

/// Partition name computed directly from a path, for comparison with the
/// library's naming.
pub fn expected_partition(path: &str, interface: bool) -> String {
    let (prefix, body) = if interface {
        ("interface_partition_", path.strip_prefix(PREFIX).unwrap().strip_suffix(".h").unwrap())
    } else {
        ("implementation_partition_", path.strip_suffix(".cc").unwrap())
    };
    let body: String = body.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("{prefix}{body}")
}

/// Synthetic project: `headers` headers under `proj/` that include only
/// earlier headers, and `sources` sources that include any header. Returns
/// (path, text) pairs; paths are include paths. `proj/config.h` is always
/// present and is meant to be a forced textual include.
pub fn synthetic_project(rng: &mut impl Rng, headers: usize, sources: usize) -> Vec<(String, String)> {
    let mut files =
        vec![(FORCED.to_owned(), format!("#pragma once\n#define {OPEN} namespace proj {{\n#define {CLOSE} }}\n"))];
    let header_paths: Vec<String> = (0..headers).map(|i| format!("{PREFIX}d{}/h{i}.h", i % 4)).collect();
    for (i, path) in header_paths.iter().enumerate() {
        let guard = format!("PROJ_H{i}_H");
        let includes: Vec<&String> = header_paths[..i].iter().filter(|_| rng.gen_bool(0.2)).collect();
        let mut t = String::new();
        t.push_str(&format!("// header {i}\n"));
        let pragma = rng.gen_bool(0.3);
        if pragma {
            t.push_str("#pragma once\n");
        } else {
            t.push_str(&format!("#ifndef {guard}\n#define {guard}\n"));
        }
        t.push('\n');
        if rng.gen_bool(0.7) {
            t.push_str(&format!("#include <{FORCED}>\n"));
        }
        for inc in &includes {
            if rng.gen_bool(0.15) {
                t.push_str(&format!("#include \"{inc}\"\n"));
            } else {
                t.push_str(&format!("#include <{inc}>\n"));
            }
        }
        if rng.gen_bool(0.5) {
            t.push_str("#include <vector>\n");
        }
        if rng.gen_bool(0.3) {
            t.push_str("#ifdef PROJ_WITH_MPI\n#  include <mpi.h>\n#endif\n");
        }
        t.push_str(&format!("\n/* #include <{PREFIX}fake.h> */\n{OPEN}\n"));
        t.push_str(&format!("namespace d{i}\n{{\n  // #include <{PREFIX}d0/h0.h>\n"));
        t.push_str(&format!("  inline const char *name() {{ return \"h{i} #include <x.h>\"; }}\n"));
        t.push_str(&format!("  int f{i}(int x);\n}}\n{CLOSE}\n"));
        if !pragma {
            t.push_str(&format!("\n#endif // {guard}"));
        }
        if rng.gen_bool(0.8) {
            t.push('\n');
        }
        files.push((path.clone(), t));
    }
    for j in 0..sources {
        let path = format!("src/d{}/s{j}.cc", j % 3);
        let mut t = format!("// source {j}\n#include <{FORCED}>\n");
        for inc in header_paths.iter().filter(|_| rng.gen_bool(0.15)) {
            t.push_str(&format!("#include <{inc}>\n"));
        }
        t.push_str("#include <cmath>\n\n");
        t.push_str(&format!(
            "{OPEN}\nint s{j}(int x)\n{{\n  return x * {j}; // #include <{PREFIX}no.h>\n}}\n{CLOSE}\n"
        ));
        files.push((path, t));
    }
    files
}

/// Intra-project include targets of `text` (forced header excluded), in
/// first-occurrence order, as the oracle sees them.
pub fn oracle_intra_includes(text: &str) -> Vec<String> {
    let mut seen = BTreeMap::new();
    for (t, _) in oracle_includes(text) {
        if t.starts_with(PREFIX) && t != FORCED {
            let n = seen.len();
            seen.entry(t).or_insert(n);
        }
    }
    let mut v: Vec<(String, usize)> = seen.into_iter().collect();
    v.sort_by_key(|(_, i)| *i);
    v.into_iter().map(|(t, _)| t).collect()
}
