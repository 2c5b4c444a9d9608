//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p vortex-diagrams --test acceptance` (add
//! `-- --nocapture` to see the PASS lines).

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;

use vortex_diagrams::annotate::{
    emit_constraints, ConstraintKind, DiagramColor, LambdaBranch, PatternId,
};
use vortex_diagrams::gamma::GammaPolynomial;
use vortex_diagrams::matrix::{BinarySymmetricMatrix, Permutation, ZWMatrix};
use vortex_diagrams::oracle::{brute_force_pipeline, orbit_expand, verify_stage_identities};
use vortex_diagrams::pipeline::{
    filter_z, generate_z_candidates, run_pipeline, PipelineOptions,
};
use vortex_diagrams::rules::{self, RuleId};

fn m(lit: &str) -> BinarySymmetricMatrix {
    BinarySymmetricMatrix::parse_literal(lit).unwrap()
}

fn pair(z: &str, w: &str) -> ZWMatrix {
    ZWMatrix::new(m(z), m(w)).unwrap()
}

fn counts(map: &BTreeMap<usize, Vec<BinarySymmetricMatrix>>) -> Vec<u64> {
    map.values().map(|v| v.len() as u64).collect()
}

#[test]
fn criterion_01_stage2_counts_n5() {
    let start = Instant::now();
    let filtered = filter_z(&generate_z_candidates(5).unwrap());
    let elapsed = start.elapsed();
    assert_eq!(counts(&filtered), vec![3, 5, 4, 4, 2]);
    assert!(
        elapsed < Duration::from_secs(5),
        "stage 1+2 took {elapsed:?}, budget 5s"
    );

    // The class-1 and class-5 survivors are exactly the documented ones.
    let k1: Vec<String> = filtered[&1].iter().map(|m| m.encoding()).collect();
    assert_eq!(
        k1,
        vec![
            "000000000000111", // triangle on {3,4,5}, two isolated vertices
            "000000000111111", // K4 on {2,3,4,5}, one isolated vertex
            "000001111111111", // K5
        ]
    );
    let k5: Vec<String> = filtered[&5].iter().map(|m| m.encoding()).collect();
    assert_eq!(
        k5,
        vec![
            "111110001110100", // circled segment {1,5} plus circled triangle {2,3,4}
            "111111111111111", // circled K5
        ]
    );
    println!("PASS criterion 1: stage-2 counts (3,5,4,4,2) in {elapsed:?}");
}

#[test]
fn criterion_02_t_counts_n5() {
    let filtered = filter_z(&generate_z_candidates(5).unwrap());
    let expected = [16u64, 90, 70, 55, 11];
    for k in 1..=5usize {
        let orbit_sum: u64 = filtered[&k]
            .iter()
            .map(|m| orbit_expand(m).len() as u64)
            .sum();
        assert_eq!(orbit_sum, expected[k - 1], "class {k}");
    }
    let stats = run_pipeline(5, &PipelineOptions::default())
        .unwrap()
        .stats
        .unwrap();
    assert_eq!(stats.t_sets, expected);
    println!("PASS criterion 2: T counts (16,90,70,55,11) equal orbit-size sums");
}

#[test]
fn criterion_03_u_counts_n5() {
    let set = run_pipeline(5, &PipelineOptions::default()).unwrap();
    let stats = set.stats.unwrap();
    assert_eq!(stats.u_sets, vec![726, 1130, 544, 264, 22]);
    for k in 1..=5usize {
        let suffix: u64 = stats.t_sets[k - 1..].iter().sum();
        assert_eq!(stats.u_sets[k - 1], stats.filtered[k - 1] * suffix);
    }
    let filtered = filter_z(&generate_z_candidates(5).unwrap());
    assert!(verify_stage_identities(&stats, Some(&filtered)));
    println!("PASS criterion 3: U counts (726,1130,544,264,22) and cross-product identity");
}

#[test]
fn criterion_04_final_count_n5() {
    let start = Instant::now();
    let set = run_pipeline(5, &PipelineOptions::default()).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(set.diagrams.len(), 31);
    assert_eq!(set.stats.as_ref().unwrap().final_count, 31);
    assert!(
        elapsed < Duration::from_secs(60),
        "pipeline took {elapsed:?}, budget 60s"
    );
    for p in &set.diagrams {
        assert!(rules::passes_all(p, &RuleId::ALL));
    }
    println!("PASS criterion 4: 31 diagrams at n=5 in {elapsed:?}");
}

#[test]
fn criterion_05_stage1_counts_n5() {
    let classes = generate_z_candidates(5).unwrap();
    assert_eq!(counts(&classes), vec![84, 240, 240, 182, 84]);
    // The fused pipeline path reports the same stage-1 cardinalities.
    let stats = run_pipeline(5, &PipelineOptions::default())
        .unwrap()
        .stats
        .unwrap();
    assert_eq!(stats.initial, vec![84, 240, 240, 182, 84]);
    println!("PASS criterion 5: stage-1 counts (84,240,240,182,84)");
}

#[test]
fn criterion_06_oracle_equivalence() {
    let options = PipelineOptions::default();
    let oracle3 = brute_force_pipeline(3, true).unwrap();
    let pipe3 = run_pipeline(3, &options).unwrap();
    assert_eq!(oracle3.diagrams, pipe3.diagrams, "n=3 sets differ");

    let start = Instant::now();
    let oracle4 = brute_force_pipeline(4, true).unwrap();
    let elapsed = start.elapsed();
    let pipe4 = run_pipeline(4, &options).unwrap();
    assert_eq!(oracle4.diagrams, pipe4.diagrams, "n=4 sets differ");
    assert_eq!(oracle4.diagrams.len(), 6);
    assert!(
        elapsed < Duration::from_secs(600),
        "n=4 oracle took {elapsed:?}, budget 10min"
    );
    println!(
        "PASS criterion 6: oracle and pipeline agree at n=3 ({}) and n=4 ({}) in {elapsed:?}",
        oracle3.diagrams.len(),
        oracle4.diagrams.len()
    );
}

#[test]
fn criterion_07_rule_examples() {
    use rules::*;

    // Rule of Column Sums.
    assert!(!rule_column_sums(&m("M(n=4; d=0000; s=12)")).passed);
    assert!(!rule_column_sums(&m("M(n=4; d=0000; s=)")).passed);
    assert!(rule_column_sums(&m("M(n=4; d=0000; s=12,13,14,23,24,34)")).passed);

    // Rule of Trace.
    assert!(!rule_trace(&m("M(n=4; d=1000; s=12)")).passed);
    assert!(rule_trace(&m("M(n=4; d=0000; s=12)")).passed);
    assert!(rule_trace(&m("M(n=4; d=1100; s=12)")).passed);

    // First Rule of Triangle.
    assert!(!rule_triangle1(&m("M(n=3; d=000; s=12,13)")).passed);
    assert!(rule_triangle1(&m("M(n=3; d=000; s=12,13,23)")).passed);
    assert!(rule_triangle1(&m("M(n=3; d=000; s=12)")).passed);

    // Rule of Circling.
    assert!(!rule_circling(&pair("M(n=3; d=000; s=12)", "M(n=3; d=100; s=)")).passed);
    assert!(rule_circling(&pair("M(n=3; d=000; s=12)", "M(n=3; d=110; s=)")).passed);
    assert!(rule_circling(&pair("M(n=3; d=000; s=)", "M(n=3; d=100; s=)")).passed);

    // Rule of Trace-2 Matrices.
    assert!(!rule_trace2(&pair("M(n=4; d=0011; s=34)", "M(n=4; d=0000; s=34)")).passed);
    assert!(rule_trace2(&pair("M(n=4; d=0011; s=34)", "M(n=4; d=0000; s=12)")).passed);
    assert!(rule_trace2(&pair("M(n=4; d=0111; s=34)", "M(n=4; d=0000; s=34)")).passed);

    // Rule of Connected Components.
    assert!(!rule_components(&m("M(n=5; d=10000; s=12,23)")).passed);
    assert!(rule_components(&m("M(n=5; d=00000; s=12,23)")).passed);
    assert!(rule_components(&m("M(n=5; d=11000; s=12,23)")).passed);

    // Rule of Trace-0 Principal Minors.
    assert!(!rule_trace0_minors(&m("M(n=4; d=0000; s=12,23)")).passed);
    assert!(rule_trace0_minors(&m("M(n=4; d=0000; s=12,13,23)")).passed);
    assert!(rule_trace0_minors(&m("M(n=4; d=1111; s=12,23)")).passed);

    // Rule of Fully Edged Components.
    assert!(
        !rule_fully_edged(&pair(
            "M(n=5; d=00000; s=12,13,23)",
            "M(n=5; d=11100; s=14,24,34)"
        ))
        .passed
    );
    assert!(
        !rule_fully_edged(&pair(
            "M(n=5; d=00000; s=12,13,23)",
            "M(n=5; d=00000; s=12,13,14,23,24,34)"
        ))
        .passed
    );
    assert!(
        rule_fully_edged(&pair(
            "M(n=5; d=00000; s=12,13,23)",
            "M(n=5; d=11110; s=14,24,34)"
        ))
        .passed
    );

    // Second Rule of Triangle.
    assert!(
        !rule_triangle2(&pair(
            "M(n=5; d=11100; s=12,13,23)",
            "M(n=5; d=11100; s=12,13,23)"
        ))
        .passed
    );
    assert!(
        rule_triangle2(&pair(
            "M(n=5; d=11110; s=12,13,23)",
            "M(n=5; d=11110; s=12,13,23)"
        ))
        .passed
    );
    assert!(
        rule_triangle2(&pair(
            "M(n=5; d=11100; s=12,13,23)",
            "M(n=5; d=11100; s=12,13)"
        ))
        .passed
    );

    // Rule of Quadrilateral.
    let full4 = "12,13,14,23,24,34";
    assert!(
        !rule_quadrilateral(&pair(
            &format!("M(n=5; d=11110; s={full4})"),
            &format!("M(n=5; d=00000; s={full4})")
        ))
        .passed
    );
    assert!(
        rule_quadrilateral(&pair(
            &format!("M(n=5; d=11111; s={full4})"),
            &format!("M(n=5; d=00000; s={full4})")
        ))
        .passed
    );
    assert!(
        rule_quadrilateral(&pair(
            &format!("M(n=5; d=11100; s={full4})"),
            &format!("M(n=5; d=00000; s={full4})")
        ))
        .passed
    );

    // Rule of Dumbbells.
    assert!(
        !rule_dumbbells(&pair("M(n=5; d=11110; s=12,34)", "M(n=5; d=11110; s=12,34)")).passed
    );
    assert!(
        rule_dumbbells(&pair("M(n=5; d=11110; s=12,34)", "M(n=5; d=11111; s=12,34)")).passed
    );
    assert!(
        rule_dumbbells(&pair("M(n=5; d=11110; s=12,34)", "M(n=5; d=11110; s=12)")).passed
    );

    // apply_all.
    let p = pair("M(n=5; d=10000; s=12)", "M(n=5; d=00000; s=12)");
    assert!(rules::apply_all(&p, &[]).is_empty());
    let verdicts = rules::apply_all(&p, &RuleId::ALL);
    assert!(!verdicts
        .iter()
        .find(|v| v.rule == RuleId::Trace)
        .unwrap()
        .passed);

    // Every surviving pipeline pair passes the full set.
    let set = run_pipeline(5, &PipelineOptions::default()).unwrap();
    for p in &set.diagrams {
        assert!(rules::apply_all(p, &RuleId::ALL).iter().all(|v| v.passed));
    }
    println!("PASS criterion 7: rule example suite");
}

fn arb_matrix(max_n: usize) -> impl Strategy<Value = BinarySymmetricMatrix> {
    (3usize..=max_n).prop_flat_map(|n| {
        let strokes = n * (n - 1) / 2;
        (
            Just(n),
            0u32..(1u32 << n),
            0u32..(1u32 << strokes),
        )
            .prop_map(|(n, diag, strokes)| {
                BinarySymmetricMatrix::from_bits(n, diag as u8, strokes).unwrap()
            })
    })
}

fn arb_pair_perm() -> impl Strategy<Value = (ZWMatrix, Permutation)> {
    (3usize..=6).prop_flat_map(|n| {
        let strokes = n * (n - 1) / 2;
        (
            Just(n),
            0u32..(1u32 << n),
            0u32..(1u32 << strokes),
            0u32..(1u32 << n),
            0u32..(1u32 << strokes),
            proptest::collection::vec(any::<u32>(), n),
        )
            .prop_map(|(n, dz, sz, dw, sw, noise)| {
                let z = BinarySymmetricMatrix::from_bits(n, dz as u8, sz).unwrap();
                let w = BinarySymmetricMatrix::from_bits(n, dw as u8, sw).unwrap();
                let mut order: Vec<u8> = (1..=n as u8).collect();
                order.sort_by_key(|&v| noise[(v - 1) as usize]);
                let sigma = Permutation::from_images(&order).unwrap();
                (ZWMatrix::new(z, w).unwrap(), sigma)
            })
    })
}

#[test]
fn criterion_08_property_suite() {
    let config = ProptestConfig {
        cases: 1000,
        ..ProptestConfig::default()
    };

    // (a) Rule verdicts are invariant under simultaneous permutation.
    let mut runner = proptest::test_runner::TestRunner::new(config.clone());
    runner
        .run(&arb_pair_perm(), |(p, sigma)| {
            let q = p.permute(&sigma).unwrap();
            for rule in RuleId::ALL {
                prop_assert_eq!(
                    rules::apply_rule(rule, &p).passed,
                    rules::apply_rule(rule, &q).passed,
                    "rule {} changed under permutation",
                    rule
                );
            }
            Ok(())
        })
        .unwrap();

    // (b) Canonicalization is idempotent and constant on orbits.
    let mut runner = proptest::test_runner::TestRunner::new(config.clone());
    runner
        .run(&arb_pair_perm(), |(p, sigma)| {
            let (cz, kz) = p.z().canonical();
            prop_assert_eq!(cz.canonical().0, cz);
            prop_assert_eq!(p.z().permute(&sigma).unwrap().canonical().1, kz);
            for swap in [false, true] {
                let (cp, kp) = p.canonical(swap);
                prop_assert_eq!(cp.canonical(swap).0, cp);
                prop_assert_eq!(p.permute(&sigma).unwrap().canonical(swap).1, kp);
            }
            Ok(())
        })
        .unwrap();

    // (c) Encoding round-trips bit-exactly.
    let mut runner = proptest::test_runner::TestRunner::new(config.clone());
    runner
        .run(&arb_matrix(8), |m| {
            prop_assert_eq!(
                BinarySymmetricMatrix::from_encoding(&m.encoding()).unwrap(),
                m
            );
            Ok(())
        })
        .unwrap();
    let mut runner = proptest::test_runner::TestRunner::new(config.clone());
    runner
        .run(&arb_pair_perm(), |(p, _)| {
            prop_assert_eq!(ZWMatrix::from_encoding(&p.encoding()).unwrap(), p);
            Ok(())
        })
        .unwrap();

    // (d) (Γ_J)^2 = Σ Γ_j^2 + 2 L_J for random subsets J.
    let subset = (3usize..=8).prop_flat_map(|n| (Just(n), 0u32..(1u32 << n)));
    let mut runner = proptest::test_runner::TestRunner::new(config);
    runner
        .run(&subset, |(n, mask)| {
            let j: Vec<u8> = (1..=n as u8).filter(|&v| mask >> (v - 1) & 1 == 1).collect();
            let gj = GammaPolynomial::gamma_sum(n, &j);
            let squares = j.iter().fold(GammaPolynomial::zero(n), |acc, &v| {
                let g = GammaPolynomial::variable(n, v);
                &acc + &(&g * &g)
            });
            let two_l = &GammaPolynomial::constant(n, 2) * &GammaPolynomial::l_sum(n, &j);
            prop_assert_eq!(&gj * &gj, &squares + &two_l);
            Ok(())
        })
        .unwrap();

    println!("PASS criterion 8: property suite (1000 cases per property)");
}

#[test]
fn criterion_09_jobs_determinism() {
    let bin = env!("CARGO_BIN_EXE_vortex-diagrams");
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("one.json");
    let out8 = dir.path().join("eight.json");
    for (jobs, out) in [("1", &out1), ("8", &out8)] {
        let status = Command::new(bin)
            .args([
                "enumerate",
                "--n",
                "5",
                "--jobs",
                jobs,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let bytes1 = std::fs::read(&out1).unwrap();
    let bytes8 = std::fs::read(&out8).unwrap();
    assert_eq!(bytes1, bytes8, "outputs differ between --jobs 1 and --jobs 8");
    println!("PASS criterion 9: byte-identical output for --jobs 1 and --jobs 8");
}

#[test]
fn criterion_10_annotator() {
    // Isolated uncircled full K3 in the z-diagram.
    let p = pair(
        "M(n=5; d=00000; s=12,13,23)",
        "M(n=5; d=00000; s=12,13,14,15,23,24,25,34,35,45)",
    );
    assert!(rules::passes_all(&p, &RuleId::ALL));
    let cs = emit_constraints(&p);
    let expected_li = GammaPolynomial::l_sum(5, &[1, 2, 3]);
    assert!(
        cs.iter().any(|c| c.pattern == PatternId::UncircledClique
            && c.color == DiagramColor::Z
            && c.kind == ConstraintKind::EqualsZero
            && c.poly == expected_li),
        "missing L_123 = 0"
    );

    // Isolated circled z-stroke.
    let p = pair("M(n=5; d=11000; s=12)", "M(n=5; d=00000; s=34,35,45)");
    assert!(rules::passes_all(&p, &RuleId::ALL));
    let cs = emit_constraints(&p);
    let iso: Vec<_> = cs
        .iter()
        .filter(|c| c.pattern == PatternId::IsolatedCircledStroke && c.color == DiagramColor::Z)
        .collect();
    assert!(iso.iter().any(|c| c.kind == ConstraintKind::Nonzero
        && c.branch == LambdaBranch::Any
        && c.poly == GammaPolynomial::gamma_sum(5, &[1, 2])));
    assert!(iso.iter().any(|c| c.kind == ConstraintKind::EqualsZero
        && c.branch == LambdaBranch::Real
        && c.poly == GammaPolynomial::gamma_sum(5, &[3, 4, 5])));
    assert!(iso.iter().any(|c| c.kind == ConstraintKind::EqualsZero
        && c.branch == LambdaBranch::Imaginary
        && c.poly == GammaPolynomial::total_momentum(5)));
    let product = &GammaPolynomial::variable(5, 1) * &GammaPolynomial::variable(5, 2);
    let pair_vs_rest = &product - &GammaPolynomial::l_sum(5, &[3, 4, 5]);
    assert!(iso.iter().any(|c| c.kind == ConstraintKind::EqualsZero
        && c.branch == LambdaBranch::Imaginary
        && c.poly == pair_vs_rest));
    println!("PASS criterion 10: annotator emits the documented constraints");
}
