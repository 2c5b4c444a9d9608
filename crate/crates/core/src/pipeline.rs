//! The staged enumeration: generate trace-classified z-candidates,
//! filter them with the single-matrix rules, expand the survivors'
//! permutation orbits into w-candidate sets, match z against w, filter
//! the pairs with the remaining rules, and deduplicate canonically.
//!
//! Trace classes follow the convention: class 1 holds trace-0 matrices,
//! class k holds trace-k matrices for k >= 2; trace 1 is never
//! represented. Every stage is deterministic for any worker count: work
//! is partitioned over stroke-pattern ranges and merged by sorting on
//! canonical keys.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::{all_maps, pair_index, BinarySymmetricMatrix, ZWMatrix, MAX_VERTICES};
use crate::rules::{apply_rule, RuleId};
use crate::{Error, Result};

/// Rules applied to single z-matrices in stage 2, in order.
pub const STAGE2_RULES: [RuleId; 3] = [RuleId::ColumnSums, RuleId::Triangle1, RuleId::Trace0Minors];

/// Rules applied to matched pairs in stage 4, in order. The verdicts are
/// order-independent; the order is an efficiency choice only.
pub const STAGE4_RULES: [RuleId; 7] = [
    RuleId::Circling,
    RuleId::Trace2,
    RuleId::Components,
    RuleId::FullyEdged,
    RuleId::Triangle2,
    RuleId::Quadrilateral,
    RuleId::Dumbbells,
];

/// Options affecting a pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Deduplicate pairs equivalent under exchanging the two colors when
    /// both traces agree. On by default; turning it off keeps both
    /// orientations of asymmetric equal-trace pairs.
    pub dedupe_swap: bool,
    /// Worker threads; `None` uses the rayon default. The output is
    /// identical for every value.
    pub jobs: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            dedupe_swap: true,
            jobs: None,
        }
    }
}

/// Configuration echo embedded in result files: every option that
/// affects the output, sufficient to reproduce the run. Worker count and
/// timings are deliberately excluded (they cannot change the result).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub n: usize,
    pub dedupe_swap: bool,
    pub rules: Vec<String>,
}

impl RunManifest {
    pub fn new(n: usize, dedupe_swap: bool) -> Self {
        Self {
            tool: "vortex-diagrams".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            n,
            dedupe_swap,
            rules: RuleId::ALL.iter().map(|r| r.as_str().to_owned()).collect(),
        }
    }
}

/// Wall-clock spent per stage. The candidate scan fuses stages 1 and 2.
#[derive(Debug, Clone, Default)]
pub struct StageTimings {
    pub candidates: Duration,
    pub w_expansion: Duration,
    pub pair_filter: Duration,
    pub dedup: Duration,
    pub total: Duration,
}

/// Per-trace-class cardinalities at each pipeline stage.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageStats {
    pub n: usize,
    /// card(S_k) after the stage-1 partial dedup, index 0 = class 1.
    pub initial: Vec<u64>,
    /// card(S_k) after stage-2 rules and canonical dedup.
    pub filtered: Vec<u64>,
    /// card(T_k): full orbit expansions of the filtered classes.
    pub t_sets: Vec<u64>,
    /// card(U_k): matched pairs before the stage-4 filter.
    pub u_sets: Vec<u64>,
    pub final_count: u64,
    #[serde(skip)]
    pub timings: StageTimings,
}

/// The enumeration result: canonical pairs in ascending key order.
#[derive(Debug, Clone)]
pub struct DiagramSet {
    pub n: usize,
    pub diagrams: Vec<ZWMatrix>,
    pub stats: Option<StageStats>,
    pub manifest: RunManifest,
}

fn check_n(n: usize) -> Result<()> {
    if !(3..=MAX_VERTICES).contains(&n) {
        return Err(Error::VertexCount(n));
    }
    Ok(())
}

/// Trace represented by class `k` (1-based).
pub fn class_trace(k: usize) -> u32 {
    if k == 1 {
        0
    } else {
        k as u32
    }
}

/// The diagonal pattern of a class: zeros first, then `trace` ones, so
/// that `a_ii <= a_jj` holds for all `i < j`.
fn class_diag(n: usize, k: usize) -> u8 {
    let t = class_trace(k) as usize;
    if t == 0 {
        0
    } else {
        (((1u16 << t) - 1) << (n - t)) as u8
    }
}

fn column_sums_raw(n: usize, diag: u8, strokes: u32) -> [u8; MAX_VERTICES] {
    let mut sums = [0u8; MAX_VERTICES];
    for (v, s) in sums.iter_mut().enumerate().take(n) {
        *s = diag >> v & 1;
    }
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            if strokes >> t & 1 == 1 {
                sums[i] += 1;
                sums[j] += 1;
            }
            t += 1;
        }
    }
    sums
}

/// Sorts vertices by the key (diagonal bit, column sum) ascending with a
/// stable sort and relabels accordingly. The stage-1 partial dedup keeps
/// exactly the fixed points of this normalization.
pub fn sort_normalize(m: &BinarySymmetricMatrix) -> BinarySymmetricMatrix {
    let n = m.n();
    let sums = column_sums_raw(n, m.diag_bits(), m.stroke_bits());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (m.diag_bits() >> v & 1, sums[v]));
    let mut inv = [0u8; MAX_VERTICES];
    for (slot, &old) in order.iter().enumerate() {
        inv[slot] = old as u8;
    }
    m.reindex(&inv)
}

/// Fixed-point test for [`sort_normalize`]: the per-vertex keys are
/// already non-decreasing in label order.
fn is_sort_normal(n: usize, diag: u8, strokes: u32) -> bool {
    let sums = column_sums_raw(n, diag, strokes);
    for v in 0..n - 1 {
        let a = (diag >> v & 1, sums[v]);
        let b = (diag >> (v + 1) & 1, sums[v + 1]);
        if a > b {
            return false;
        }
    }
    true
}

/// Stroke-bit indices of the three sides of every vertex triple.
fn triple_table(n: usize) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push((
                    pair_index(n, i, j) as u32,
                    pair_index(n, j, k) as u32,
                    pair_index(n, i, k) as u32,
                ));
            }
        }
    }
    out
}

/// Endpoints of each stroke bit.
fn endpoint_table(n: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i as u32, j as u32));
        }
    }
    out
}

struct ClassScan {
    n: usize,
    diag: u8,
    triples: Vec<(u32, u32, u32)>,
    endpoints: Vec<(u32, u32)>,
}

impl ClassScan {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            diag: class_diag(n, k),
            triples: triple_table(n),
            endpoints: endpoint_table(n),
        }
    }

    /// Column-sums rule on precomputed sums.
    fn column_sums_ok(&self, sums: &[u8; MAX_VERTICES]) -> bool {
        let slice = &sums[..self.n];
        !slice.contains(&1) && slice.iter().any(|&s| s != 0)
    }

    fn triangle_ok(&self, strokes: u32) -> bool {
        self.triples
            .iter()
            .all(|&(a, b, c)| (strokes >> a & 1) + (strokes >> b & 1) + (strokes >> c & 1) != 2)
    }

    /// Trace-0 principal minors over subsets of the uncircled prefix.
    fn minors_ok(&self, strokes: u32) -> bool {
        let uncircled = self.n - self.diag.count_ones() as usize;
        let full = (1u32 << self.n) - 1;
        for subset in 1u32..(1 << uncircled) {
            if subset == full {
                continue;
            }
            let mut cross = 0;
            for (t, &(i, j)) in self.endpoints.iter().enumerate() {
                if strokes >> t & 1 == 1 && (subset >> i & 1) != (subset >> j & 1) {
                    cross += 1;
                    if cross > 1 {
                        break;
                    }
                }
            }
            if cross == 1 {
                return false;
            }
        }
        true
    }

    /// Streams every stroke pattern of the class through the stage-1
    /// fixed-point dedup and the stage-2 single-matrix rules. Returns
    /// the stage-1 cardinality and the rule survivors (not yet
    /// canonicalized).
    fn run(&self) -> (u64, Vec<BinarySymmetricMatrix>) {
        let m_bits = self.n * (self.n - 1) / 2;
        (0u32..1u32 << m_bits)
            .into_par_iter()
            .fold(
                || (0u64, Vec::new()),
                |(mut count, mut survivors), strokes| {
                    let sums = column_sums_raw(self.n, self.diag, strokes);
                    let mut normal = true;
                    for v in 0..self.n - 1 {
                        if (self.diag >> v & 1, sums[v]) > (self.diag >> (v + 1) & 1, sums[v + 1]) {
                            normal = false;
                            break;
                        }
                    }
                    if normal {
                        count += 1;
                        if self.column_sums_ok(&sums)
                            && self.triangle_ok(strokes)
                            && self.minors_ok(strokes)
                        {
                            survivors.push(
                                BinarySymmetricMatrix::from_bits(self.n, self.diag, strokes)
                                    .expect("class pattern is valid"),
                            );
                        }
                    }
                    (count, survivors)
                },
            )
            .reduce(
                || (0u64, Vec::new()),
                |(c1, mut s1), (c2, s2)| {
                    s1.extend(s2);
                    (c1 + c2, s1)
                },
            )
    }
}

/// Stage 1: all stroke patterns per trace class with the diagonal fixed
/// to the class pattern, after the partial sort-based dedup. Trace-1
/// matrices are never generated.
pub fn generate_z_candidates(n: usize) -> Result<BTreeMap<usize, Vec<BinarySymmetricMatrix>>> {
    check_n(n)?;
    let mut classes = BTreeMap::new();
    for k in 1..=n {
        let scan = ClassScan::new(n, k);
        let m_bits = n * (n - 1) / 2;
        let mut kept: Vec<BinarySymmetricMatrix> = (0u32..1u32 << m_bits)
            .into_par_iter()
            .filter(|&bits| is_sort_normal(n, scan.diag, bits))
            .map(|bits| BinarySymmetricMatrix::from_bits(n, scan.diag, bits).unwrap())
            .collect();
        kept.sort_unstable();
        classes.insert(k, kept);
    }
    Ok(classes)
}

fn canonical_dedup(survivors: Vec<BinarySymmetricMatrix>) -> Vec<BinarySymmetricMatrix> {
    let canon: BTreeSet<BinarySymmetricMatrix> = survivors
        .into_par_iter()
        .map(|m| m.canonical().0)
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    canon.into_iter().collect()
}

/// Stage 2: removes candidates failing the column-sums, first-triangle
/// and trace-0-minors rules, then keeps one canonical representative per
/// permutation orbit.
pub fn filter_z(
    classes: &BTreeMap<usize, Vec<BinarySymmetricMatrix>>,
) -> BTreeMap<usize, Vec<BinarySymmetricMatrix>> {
    classes
        .iter()
        .map(|(&k, ms)| {
            let survivors: Vec<BinarySymmetricMatrix> = ms
                .iter()
                .filter(|m| {
                    STAGE2_RULES
                        .iter()
                        .all(|&r| crate::rules::apply_single(r, m).passed)
                })
                .copied()
                .collect();
            (k, canonical_dedup(survivors))
        })
        .collect()
}

fn orbit_of(m: &BinarySymmetricMatrix) -> Vec<BinarySymmetricMatrix> {
    let set: BTreeSet<BinarySymmetricMatrix> =
        all_maps(m.n()).iter().map(|inv| m.reindex(inv)).collect();
    set.into_iter().collect()
}

/// Stage 3: T_k is the union of the full permutation orbits of the
/// canonical matrices in filtered class k — all distinct matrices, not
/// representatives, since w-matrices matched to a fixed z-matrix are
/// generally inequivalent.
pub fn generate_w_sets(
    filtered: &BTreeMap<usize, Vec<BinarySymmetricMatrix>>,
) -> BTreeMap<usize, Vec<BinarySymmetricMatrix>> {
    filtered
        .iter()
        .map(|(&k, ms)| {
            let set: BTreeSet<BinarySymmetricMatrix> =
                ms.par_iter().flat_map_iter(orbit_of).collect::<Vec<_>>().into_iter().collect();
            (k, set.into_iter().collect())
        })
        .collect()
}

/// Stage 3 matching: U_k pairs every canonical z of class k with every
/// w-matrix of trace class >= k, enforcing trace(A) <= trace(B). No
/// dedup happens here.
pub fn match_zw(
    filtered: &BTreeMap<usize, Vec<BinarySymmetricMatrix>>,
    w_sets: &BTreeMap<usize, Vec<BinarySymmetricMatrix>>,
) -> BTreeMap<usize, Vec<ZWMatrix>> {
    let max_k = *filtered.keys().max().unwrap_or(&0);
    filtered
        .iter()
        .map(|(&k, zs)| {
            let mut pairs = Vec::new();
            for z in zs {
                for j in k..=max_k {
                    if let Some(ws) = w_sets.get(&j) {
                        for w in ws {
                            pairs.push(ZWMatrix::new(*z, *w).expect("equal dimensions"));
                        }
                    }
                }
            }
            (k, pairs)
        })
        .collect()
}

fn stage4_survivors(pairs: &[ZWMatrix]) -> Vec<ZWMatrix> {
    pairs
        .par_iter()
        .filter(|p| STAGE4_RULES.iter().all(|&r| apply_rule(r, p).passed))
        .copied()
        .collect()
}

fn canonical_pair_dedup(survivors: Vec<ZWMatrix>, dedupe_swap: bool) -> Vec<ZWMatrix> {
    let canon: BTreeSet<ZWMatrix> = survivors
        .into_par_iter()
        .map(|p| p.canonical(dedupe_swap).0)
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    canon.into_iter().collect()
}

/// Stage 4: applies the seven pair-stage rules in their listed order,
/// then deduplicates under simultaneous vertex permutation (and color
/// swap, when enabled). The result is sorted by canonical key.
pub fn filter_zw(
    n: usize,
    u_classes: &BTreeMap<usize, Vec<ZWMatrix>>,
    dedupe_swap: bool,
) -> Result<DiagramSet> {
    check_n(n)?;
    let mut survivors = Vec::new();
    for pairs in u_classes.values() {
        survivors.extend(stage4_survivors(pairs));
    }
    let diagrams = canonical_pair_dedup(survivors, dedupe_swap);
    Ok(DiagramSet {
        n,
        diagrams,
        stats: None,
        manifest: RunManifest::new(n, dedupe_swap),
    })
}

/// Runs the full pipeline. Deterministic: the result is byte-identical
/// for any worker count.
pub fn run_pipeline(n: usize, options: &PipelineOptions) -> Result<DiagramSet> {
    check_n(n)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.unwrap_or(0))
        .build()
        .expect("thread pool construction");
    pool.install(|| run_pipeline_inner(n, options))
}

fn run_pipeline_inner(n: usize, options: &PipelineOptions) -> Result<DiagramSet> {
    let t_total = Instant::now();
    let mut timings = StageTimings::default();

    // Stages 1 and 2, fused: stream candidates through the fixed-point
    // dedup and the single-matrix rules, then canonicalize survivors.
    let t0 = Instant::now();
    let mut initial = Vec::with_capacity(n);
    let mut filtered: BTreeMap<usize, Vec<BinarySymmetricMatrix>> = BTreeMap::new();
    for k in 1..=n {
        let (count, survivors) = ClassScan::new(n, k).run();
        initial.push(count);
        filtered.insert(k, canonical_dedup(survivors));
    }
    timings.candidates = t0.elapsed();

    // Stage 3: orbit expansion.
    let t0 = Instant::now();
    let w_sets = generate_w_sets(&filtered);
    timings.w_expansion = t0.elapsed();

    // Stage 3 matching and stage 4 filtering, fused per class.
    let t0 = Instant::now();
    let mut u_sets = vec![0u64; n];
    let mut survivors: Vec<ZWMatrix> = Vec::new();
    for k in 1..=n {
        let zs = &filtered[&k];
        let pool: Vec<&BinarySymmetricMatrix> =
            (k..=n).flat_map(|j| w_sets[&j].iter()).collect();
        u_sets[k - 1] = (zs.len() * pool.len()) as u64;
        let class_survivors: Vec<ZWMatrix> = zs
            .par_iter()
            .flat_map_iter(|z| {
                pool.iter().filter_map(|w| {
                    let p = ZWMatrix::new(*z, **w).expect("equal dimensions");
                    STAGE4_RULES
                        .iter()
                        .all(|&r| apply_rule(r, &p).passed)
                        .then_some(p)
                })
            })
            .collect();
        survivors.extend(class_survivors);
    }
    timings.pair_filter = t0.elapsed();

    let t0 = Instant::now();
    let diagrams = canonical_pair_dedup(survivors, options.dedupe_swap);
    timings.dedup = t0.elapsed();
    timings.total = t_total.elapsed();

    let stats = StageStats {
        n,
        initial,
        filtered: (1..=n).map(|k| filtered[&k].len() as u64).collect(),
        t_sets: (1..=n).map(|k| w_sets[&k].len() as u64).collect(),
        u_sets,
        final_count: diagrams.len() as u64,
        timings,
    };
    Ok(DiagramSet {
        n,
        diagrams,
        stats: Some(stats),
        manifest: RunManifest::new(n, options.dedupe_swap),
    })
}
