//! Input generators shared by the benchmarks.

use modulizer_core::graph::IncludeGraph;
use modulizer_core::ProjectConfig;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const OPEN: &str = "BENCH_NAMESPACE_OPEN";
pub const CLOSE: &str = "BENCH_NAMESPACE_CLOSE";

pub fn config() -> ProjectConfig {
    ProjectConfig::new("bench", vec!["bench/".into()], OPEN, CLOSE)
}

/// A guarded header of roughly `body_lines` lines that includes the given
/// project headers, with comments and literals sprinkled through the body.
pub fn header(index: usize, includes: &[String], body_lines: usize) -> String {
    let guard = format!("BENCH_H{index}_H");
    let mut t = format!("// header {index}\n#ifndef {guard}\n#define {guard}\n\n");
    for inc in includes {
        t.push_str(&format!("#include <{inc}>\n"));
    }
    t.push_str("#include <vector>\n#include <string>\n\n");
    t.push_str(&format!("{OPEN}\nnamespace h{index}\n{{\n"));
    for l in 0..body_lines {
        match l % 5 {
            0 => t.push_str(&format!("  /** Doc for f{l}, see #include <x.h>. */\n")),
            1 => t.push_str(&format!("  int f{l}(int a, int b); // trailing\n")),
            2 => t.push_str(&format!("  inline const char *s{l}() {{ return \"text /* not a comment */\"; }}\n")),
            3 => t.push_str(&format!("  constexpr int k{l} = 1'000'{:03};\n", l % 1000)),
            _ => t.push_str(&format!("  std::vector<std::string> v{l}();\n")),
        }
    }
    t.push_str(&format!("}}\n{CLOSE}\n\n#endif // {guard}\n"));
    t
}

pub fn header_path(i: usize) -> String {
    format!("bench/d{}/h{i}.h", i % 8)
}

/// `n` headers, each including a few earlier ones.
pub fn headers(n: usize, body_lines: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let includes: Vec<String> =
                (0..i).filter(|_| rng.gen_bool((4.0 / i as f64).min(1.0))).map(header_path).collect();
            (header_path(i), header(i, &includes, body_lines))
        })
        .collect()
}

/// Random DAG on `n` nodes with about `degree` out-edges per node.
pub fn dag(n: usize, degree: f64, seed: u64) -> IncludeGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut g = IncludeGraph::new((0..n).map(header_path));
    for to in 0..n {
        for from in to + 1..n {
            if rng.gen_bool((degree / (n - to) as f64).min(1.0)) {
                g.add_edge(&header_path(from), &header_path(to)).expect("nodes exist");
            }
        }
    }
    g
}
