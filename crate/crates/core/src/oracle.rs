//! Brute-force cross-checks for the staged pipeline.
//!
//! Shares only the matrix representation, permutation machinery and
//! canonical forms with the pipeline. Everything else is re-derived
//! here in a deliberately different shape: connectivity comes from the
//! positivity of `E + A + ... + A^(n-1)` instead of graph traversal,
//! the admissibility checks are direct transcriptions of the rule
//! statements over a dense grid, and the pair space is enumerated
//! whole, with no staging, pre-filtering or partial dedup.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::matrix::{all_maps, BinarySymmetricMatrix, ZWMatrix};
use crate::pipeline::{DiagramSet, RunManifest, StageStats};
use crate::{Error, Result};

/// The full permutation orbit of a matrix, duplicate-free, sorted.
pub fn orbit_expand(m: &BinarySymmetricMatrix) -> Vec<BinarySymmetricMatrix> {
    let set: BTreeSet<BinarySymmetricMatrix> =
        all_maps(m.n()).iter().map(|inv| m.reindex(inv)).collect();
    set.into_iter().collect()
}

/// Number of vertex permutations fixing the matrix.
pub fn stabilizer_order(m: &BinarySymmetricMatrix) -> usize {
    all_maps(m.n())
        .iter()
        .filter(|inv| m.reindex(inv) == *m)
        .count()
}

/// Dense 0/1 grid view of a matrix, diagonal included.
fn grid(m: &BinarySymmetricMatrix) -> [[u8; 8]; 8] {
    let n = m.n() as u8;
    let mut g = [[0u8; 8]; 8];
    for i in 1..=n {
        for j in 1..=n {
            g[(i - 1) as usize][(j - 1) as usize] = m.entry(i, j);
        }
    }
    g
}

/// Connected components through the matrix-power definition: vertices i
/// and j share a block when `(E + A + A^2 + ... + A^(n-1))_{ij}` is
/// positive. Returns 0-based blocks sorted by least element.
fn power_components(n: usize, g: &[[u8; 8]; 8]) -> Vec<Vec<usize>> {
    let mut total = [[0u64; 8]; 8];
    let mut power = [[0u64; 8]; 8];
    for i in 0..n {
        total[i][i] = 1; // E
        for j in 0..n {
            power[i][j] = g[i][j] as u64;
        }
    }
    for _ in 1..n {
        for i in 0..n {
            for j in 0..n {
                total[i][j] = total[i][j].saturating_add(power[i][j]);
            }
        }
        let mut next = [[0u64; 8]; 8];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u64 = 0;
                for (k, row) in power.iter().enumerate().take(n) {
                    acc = acc.saturating_add(row[j].saturating_mul(g[i][k] as u64));
                }
                next[i][j] = acc;
            }
        }
        power = next;
    }
    let mut assigned = [false; 8];
    let mut blocks = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut block = Vec::new();
        for j in 0..n {
            if total[i][j] > 0 {
                block.push(j);
                assigned[j] = true;
            }
        }
        blocks.push(block);
    }
    blocks
}

fn circle_count(g: &[[u8; 8]; 8], block: &[usize]) -> u8 {
    block.iter().map(|&v| g[v][v]).sum()
}

fn all_stroked(g: &[[u8; 8]; 8], block: &[usize]) -> bool {
    block
        .iter()
        .all(|&i| block.iter().all(|&j| i == j || g[i][j] == 1))
}

/// Literal transcription of the eleven rule statements on one pair.
fn admissible(n: usize, a: &[[u8; 8]; 8], b: &[[u8; 8]; 8]) -> bool {
    for m in [a, b] {
        // Rule of Column Sums.
        let mut any_nonzero = false;
        for j in 0..n {
            let sum: u8 = (0..n).map(|i| m[i][j]).sum();
            if sum == 1 {
                return false;
            }
            if sum != 0 {
                any_nonzero = true;
            }
        }
        if !any_nonzero {
            return false;
        }
        // Rule of Trace.
        let tr: u8 = (0..n).map(|i| m[i][i]).sum();
        if tr == 1 {
            return false;
        }
        // First Rule of Triangle.
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if m[i][j] + m[j][k] + m[k][i] == 2 {
                        return false;
                    }
                }
            }
        }
    }
    // Rule of Circling.
    for i in 0..n {
        for j in i + 1..n {
            if a[i][j] * (b[i][i] + b[j][j]) == 1 || b[i][j] * (a[i][i] + a[j][j]) == 1 {
                return false;
            }
        }
    }
    // Rule of Trace-2 Matrices, both statements.
    let tr_a: u8 = (0..n).map(|i| a[i][i]).sum();
    let tr_b: u8 = (0..n).map(|i| b[i][i]).sum();
    for (tr, m) in [(tr_a, a), (tr_b, b)] {
        if tr == 2 {
            for i in 0..n {
                for j in 0..n {
                    if i != j && m[i][i] == 1 && m[j][j] == 1 && a[i][j] * b[i][j] != 0 {
                        return false;
                    }
                }
            }
        }
    }
    let comps_a = power_components(n, a);
    let comps_b = power_components(n, b);
    // Rule of Connected Components.
    for (m, comps) in [(a, &comps_a), (b, &comps_b)] {
        if comps.iter().any(|c| circle_count(m, c) == 1) {
            return false;
        }
    }
    // Rule of Trace-0 Principal Minors.
    for (m, _) in [(a, 0), (b, 1)] {
        for subset in 1u32..((1 << n) - 1) {
            let members: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
            if members.iter().any(|&v| m[v][v] == 1) {
                continue;
            }
            let crossing: u8 = members
                .iter()
                .map(|&i| {
                    (0..n)
                        .filter(|&j| subset >> j & 1 == 0)
                        .map(|j| m[i][j])
                        .sum::<u8>()
                })
                .sum();
            if crossing == 1 {
                return false;
            }
        }
    }
    // Rule of Fully Edged Components, four parts, both orientations.
    // Part 4 is enumerated literally over all sub-collections of
    // components of the other color.
    for (own, other, comps_own, comps_other) in
        [(a, b, &comps_a, &comps_b), (b, a, &comps_b, &comps_a)]
    {
        for k_block in comps_own {
            let card = k_block.len();
            if card < 3 || !all_stroked(own, k_block) || circle_count(own, k_block) != 0 {
                continue;
            }
            // Parts 1 and 4.
            for pick in 1u32..(1 << comps_other.len()) {
                let mut union: Vec<usize> = Vec::new();
                for (t, comp) in comps_other.iter().enumerate() {
                    if pick >> t & 1 == 1 {
                        union.extend_from_slice(comp);
                    }
                }
                if !k_block.iter().all(|v| union.contains(v)) {
                    continue;
                }
                let circled: Vec<usize> =
                    union.iter().copied().filter(|&v| other[v][v] == 1).collect();
                let mut circled_sorted = circled;
                circled_sorted.sort_unstable();
                let mut k_sorted = k_block.clone();
                k_sorted.sort_unstable();
                if circled_sorted == k_sorted {
                    return false;
                }
            }
            // Part 2.
            for &drop in k_block {
                let k1: Vec<usize> = k_block.iter().copied().filter(|&v| v != drop).collect();
                for comp in comps_other {
                    if k1.iter().all(|v| comp.contains(v)) {
                        let circled: Vec<usize> =
                            comp.iter().copied().filter(|&v| other[v][v] == 1).collect();
                        if circled == k1 {
                            return false;
                        }
                    }
                }
            }
            // Part 3.
            for comp in comps_other {
                if comp.len() == card + 1
                    && k_block.iter().all(|v| comp.contains(v))
                    && all_stroked(other, comp)
                    && circle_count(other, comp) == 0
                {
                    return false;
                }
            }
        }
    }
    // Second Rule of Triangle.
    for (own, other, comps_own) in [(a, b, &comps_a), (b, a, &comps_b)] {
        let tr: u8 = (0..n).map(|i| own[i][i]).sum();
        for block in comps_own {
            if block.len() == 3
                && all_stroked(own, block)
                && circle_count(own, block) == 3
                && all_stroked(other, block)
                && circle_count(other, block) == 3
                && tr <= 3
            {
                return false;
            }
        }
    }
    // Rule of Quadrilateral.
    for (own, other, comps_own) in [(a, b, &comps_a), (b, a, &comps_b)] {
        let tr: u8 = (0..n).map(|i| own[i][i]).sum();
        for block in comps_own {
            if block.len() == 4
                && all_stroked(own, block)
                && circle_count(own, block) == 4
                && all_stroked(other, block)
                && tr <= 4
            {
                return false;
            }
        }
    }
    // Rule of Dumbbells.
    for comps_own in [&comps_a, &comps_b] {
        let mut segments = 0;
        for block in comps_own {
            if block.len() != 2 {
                continue;
            }
            let (i, j) = (block[0], block[1]);
            if a[i][j] == 1
                && b[i][j] == 1
                && a[i][i] + a[j][j] == 2
                && b[i][i] + b[j][j] == 2
            {
                segments += 1;
            }
        }
        if segments >= 2 && tr_a + tr_b <= 8 {
            return false;
        }
    }
    true
}

/// Whether a pair passes the oracle's independent transcription of all
/// eleven rules.
pub fn pair_admissible(p: &ZWMatrix) -> bool {
    admissible(p.n(), &grid(p.z()), &grid(p.w()))
}

/// Enumerates every (A|B) pair directly — `2^(n(n+1))` of them — keeping
/// those with neither trace equal to 1, `trace(A) <= trace(B)`, and all
/// eleven rules passing, then canonicalizes and deduplicates. Refused
/// for n > 4.
pub fn brute_force_pipeline(n: usize, dedupe_swap: bool) -> Result<DiagramSet> {
    if n < 3 {
        return Err(Error::VertexCount(n));
    }
    if n > 4 {
        return Err(Error::BruteForceRange(n));
    }
    let stroke_bits = n * (n - 1) / 2;
    let matrix_space = 1u32 << (n + stroke_bits);

    let decode = move |code: u32| -> BinarySymmetricMatrix {
        let diag = (code & ((1 << n) - 1)) as u8;
        let strokes = code >> n;
        BinarySymmetricMatrix::from_bits(n, diag, strokes).expect("in-range bits")
    };

    let keys: BTreeSet<ZWMatrix> = (0..matrix_space)
        .into_par_iter()
        .flat_map_iter(|code_a| {
            let a = decode(code_a);
            (0..matrix_space).filter_map(move |code_b| {
                let b = decode(code_b);
                if a.trace() == 1 || b.trace() == 1 || a.trace() > b.trace() {
                    return None;
                }
                let p = ZWMatrix::new(a, b).expect("equal dimensions");
                pair_admissible(&p).then(|| p.canonical(dedupe_swap).0)
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    Ok(DiagramSet {
        n,
        diagrams: keys.into_iter().collect(),
        stats: None,
        manifest: RunManifest::new(n, dedupe_swap),
    })
}

/// Checks the stage-count identities: `card_U[k] =
/// card_S_filtered[k] * sum_{j>=k} card_T[j]`, and — when the filtered
/// classes are supplied — that each `card_T[k]` equals the sum of the
/// orbit sizes of the class's canonical matrices.
pub fn verify_stage_identities(
    stats: &StageStats,
    filtered: Option<&BTreeMap<usize, Vec<BinarySymmetricMatrix>>>,
) -> bool {
    let n = stats.n;
    if [&stats.initial, &stats.filtered, &stats.t_sets, &stats.u_sets]
        .iter()
        .any(|v| v.len() != n)
    {
        return false;
    }
    for k in 1..=n {
        let suffix: u64 = stats.t_sets[k - 1..].iter().sum();
        if stats.u_sets[k - 1] != stats.filtered[k - 1] * suffix {
            return false;
        }
    }
    if let Some(classes) = filtered {
        for k in 1..=n {
            let Some(ms) = classes.get(&k) else {
                return false;
            };
            let orbit_sum: u64 = ms.iter().map(|m| orbit_expand(m).len() as u64).sum();
            if orbit_sum != stats.t_sets[k - 1] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{
        filter_z, generate_z_candidates, run_pipeline, PipelineOptions,
    };

    fn m(lit: &str) -> BinarySymmetricMatrix {
        BinarySymmetricMatrix::parse_literal(lit).unwrap()
    }

    #[test]
    fn orbit_sizes() {
        let full5 = m("M(n=5; d=11111; s=12,13,14,15,23,24,25,34,35,45)");
        assert_eq!(orbit_expand(&full5).len(), 1);

        // Circle at one end of a single stroke: six distinct images.
        let stroke = m("M(n=3; d=001; s=23)");
        assert_eq!(orbit_expand(&stroke).len(), 6);

        // Circled triangle plus circled segment: 5!/(3! 2!) = 10.
        let k3k2 = m("M(n=5; d=11111; s=12,13,23,45)");
        assert_eq!(orbit_expand(&k3k2).len(), 10);
    }

    #[test]
    fn orbit_stabilizer_identity() {
        for lit in [
            "M(n=4; d=0000; s=12)",
            "M(n=4; d=1100; s=12,34)",
            "M(n=5; d=11111; s=12,13,23,45)",
            "M(n=3; d=001; s=23)",
        ] {
            let mat = m(lit);
            let fact: usize = (1..=mat.n()).product();
            assert_eq!(orbit_expand(&mat).len() * stabilizer_order(&mat), fact);
            assert_eq!(fact % orbit_expand(&mat).len(), 0);
        }
    }

    #[test]
    fn power_components_match_traversal() {
        for lit in [
            "M(n=5; d=10100; s=12,23,45)",
            "M(n=5; d=00000; s=)",
            "M(n=4; d=1111; s=12,34)",
            "M(n=6; d=010101; s=12,23,34,45,56)",
        ] {
            let mat = m(lit);
            let g = grid(&mat);
            let power: Vec<Vec<u8>> = power_components(mat.n(), &g)
                .into_iter()
                .map(|b| b.into_iter().map(|v| v as u8 + 1).collect())
                .collect();
            let traversal: Vec<Vec<u8>> =
                mat.components().blocks().to_vec();
            assert_eq!(power, traversal);
        }
    }

    #[test]
    fn oracle_rules_agree_with_rule_module_on_samples() {
        // Exhaustive at n=3 over all pairs: the independent transcription
        // and the structured predicates must agree pair by pair.
        for code_a in 0u32..1 << 6 {
            for code_b in 0u32..1 << 6 {
                let a = BinarySymmetricMatrix::from_bits(3, (code_a & 7) as u8, code_a >> 3)
                    .unwrap();
                let b = BinarySymmetricMatrix::from_bits(3, (code_b & 7) as u8, code_b >> 3)
                    .unwrap();
                let p = ZWMatrix::new(a, b).unwrap();
                let structured = crate::rules::passes_all(&p, &crate::rules::RuleId::ALL);
                assert_eq!(
                    pair_admissible(&p),
                    structured,
                    "disagreement on {}",
                    p.encoding()
                );
            }
        }
    }

    #[test]
    fn brute_force_refuses_large_n() {
        assert!(brute_force_pipeline(5, true).is_err());
        assert!(brute_force_pipeline(2, true).is_err());
    }

    #[test]
    fn brute_force_matches_pipeline_n3() {
        let oracle = brute_force_pipeline(3, true).unwrap();
        let pipeline = run_pipeline(3, &PipelineOptions::default()).unwrap();
        assert_eq!(oracle.diagrams, pipeline.diagrams);
        assert_eq!(oracle.diagrams.len(), 1);
    }

    #[test]
    fn stage_identities() {
        let set = run_pipeline(3, &PipelineOptions::default()).unwrap();
        let stats = set.stats.unwrap();
        let filtered = filter_z(&generate_z_candidates(3).unwrap());
        assert!(verify_stage_identities(&stats, Some(&filtered)));

        let mut broken = stats.clone();
        broken.u_sets[2] = 23;
        assert!(!verify_stage_identities(&broken, None));
    }
}
