mod oracles;

use modulizer_core::Scanner;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn scanned(text: &str) -> Vec<(String, usize)> {
    Scanner::without_markers().scan(text).includes().map(|(t, _, l)| (t.to_owned(), l)).collect()
}

#[test]
fn oracle_agrees_on_fixed_decoys() {
    let text = "// #include <a.h>\n#include <b.h>\nconst char *s = \"#include <c.h>\";\n";
    assert_eq!(oracles::oracle_includes(text), vec![("b.h".to_owned(), 2)]);
    assert_eq!(scanned(text), oracles::oracle_includes(text));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scanner_matches_strip_then_match(seed in any::<u64>(), n in 0usize..30) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (text, real) = oracles::random_include_corpus(&mut rng, n);
        let got = scanned(&text);
        prop_assert_eq!(got.len(), n);
        prop_assert_eq!(got.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>(), real);
        prop_assert_eq!(got, oracles::oracle_includes(&text));
    }

    #[test]
    fn scanning_never_panics(text in "[ -~\n\t\\\\]{0,400}") {
        let scan = Scanner::without_markers().scan(&text);
        prop_assert!(scan.events.iter().all(|e| e.line <= e.end_line && e.end_line <= scan.line_count.max(1)));
    }
}
