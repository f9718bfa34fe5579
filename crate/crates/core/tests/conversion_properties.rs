mod oracles;
mod reconstruct;

use std::collections::BTreeSet;

use modulizer_core::convert::{convert_unit, ConversionPlan};
use modulizer_core::primary::{collect_interface_partitions, render_primary_unit, PrimaryUnitSpec};
use modulizer_core::scanner::{module_statements, ModuleStatement};
use modulizer_core::{Markers, ModuleUnitText, ProjectConfig, Scanner, SourceUnit};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use reconstruct::{declared_partitions, reconstruct};

fn config() -> ProjectConfig {
    let mut c = ProjectConfig::new("synth", vec![oracles::PREFIX.into()], oracles::OPEN, oracles::CLOSE);
    c.forced_textual_includes = vec![oracles::FORCED.into()];
    c
}

fn convert_project(
    files: &[(String, String)],
    c: &ProjectConfig,
) -> Vec<(String, String, ConversionPlan, ModuleUnitText)> {
    let scanner = Scanner::new(Markers::from_config(c));
    files
        .iter()
        .filter(|(p, _)| p != oracles::FORCED)
        .map(|(p, t)| {
            let (plan, unit) = convert_unit(&SourceUnit::new(p.clone(), t.clone()), &scanner.scan(t), c).unwrap();
            (p.clone(), t.clone(), plan, unit)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn verbatim_body_and_imports(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let files = oracles::synthetic_project(&mut rng, 12, 6);
        let c = config();
        for (path, original, plan, unit) in convert_project(&files, &c) {
            prop_assert_eq!(reconstruct(&original, &plan, &unit.text), original.clone(), "{}", path);
            unit.validate().unwrap();

            let expected: Vec<String> = oracles::oracle_intra_includes(&original)
                .iter()
                .map(|t| oracles::expected_partition(t, true))
                .collect();
            let got: Vec<String> = plan.imports.iter().map(|p| p.to_string()).collect();
            prop_assert_eq!(got, expected);

            let interface = path.ends_with(".h");
            prop_assert_eq!(plan.partition.to_string(), oracles::expected_partition(&path, interface));
            for line in &plan.removed_lines {
                let text = original.lines().nth(line - 1).unwrap().trim_start();
                prop_assert!(text.starts_with('#'), "removed a non-directive line {}: {}", line, text);
            }
        }
    }

    #[test]
    fn primary_unit_lists_every_interface_partition(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let files = oracles::synthetic_project(&mut rng, 15, 3);
        let c = config();
        let interfaces: Vec<ModuleUnitText> = convert_project(&files, &c)
            .into_iter()
            .filter(|(p, ..)| p.ends_with(".h"))
            .map(|(.., u)| u)
            .collect();
        let partitions = collect_interface_partitions(&interfaces).unwrap();
        let primary = render_primary_unit(&PrimaryUnitSpec::new("synth", partitions).unwrap());
        primary.validate().unwrap();
        let from_units: BTreeSet<String> = interfaces.iter().flat_map(|u| {
            module_statements(&u.text).into_iter().filter_map(|s| match s {
                ModuleStatement::Declaration { partition: Some(p), .. } => Some(p),
                _ => None,
            })
        }).collect();
        prop_assert_eq!(declared_partitions(&primary.text), from_units);
    }
}
