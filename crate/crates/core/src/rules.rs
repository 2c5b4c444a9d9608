//! The eleven admissibility rules for zw-matrices, each a total pure
//! predicate with a violation witness.
//!
//! Single-matrix rules are stated for a matrix of either color; pair
//! rules take the whole pair and are checked with both color
//! assignments. No rule assumes another rule passed.

use std::fmt;
use std::str::FromStr;

use crate::matrix::{BinarySymmetricMatrix, ZWMatrix};
use crate::Error;

/// Stable identifiers for the eleven rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    ColumnSums,
    Trace,
    Triangle1,
    Circling,
    Trace2,
    Components,
    Trace0Minors,
    FullyEdged,
    Triangle2,
    Quadrilateral,
    Dumbbells,
}

impl RuleId {
    /// All rules, in the order the pipeline applies them within their
    /// stage (single-matrix stage rules first).
    pub const ALL: [RuleId; 11] = [
        RuleId::ColumnSums,
        RuleId::Trace,
        RuleId::Triangle1,
        RuleId::Circling,
        RuleId::Trace2,
        RuleId::Components,
        RuleId::Trace0Minors,
        RuleId::FullyEdged,
        RuleId::Triangle2,
        RuleId::Quadrilateral,
        RuleId::Dumbbells,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::ColumnSums => "column-sums",
            RuleId::Trace => "trace",
            RuleId::Triangle1 => "triangle-1",
            RuleId::Circling => "circling",
            RuleId::Trace2 => "trace-2",
            RuleId::Components => "components",
            RuleId::Trace0Minors => "trace0-minors",
            RuleId::FullyEdged => "fully-edged",
            RuleId::Triangle2 => "triangle-2",
            RuleId::Quadrilateral => "quadrilateral",
            RuleId::Dumbbells => "dumbbells",
        }
    }

    /// Whether the rule reads a single matrix (and is therefore applied
    /// to both colors of a pair) rather than the pair as a whole.
    pub fn is_single_matrix(&self) -> bool {
        matches!(
            self,
            RuleId::ColumnSums
                | RuleId::Trace
                | RuleId::Triangle1
                | RuleId::Components
                | RuleId::Trace0Minors
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        RuleId::ALL
            .iter()
            .find(|r| r.as_str() == s)
            .copied()
            .ok_or_else(|| Error::Encoding(format!("unknown rule id {s:?}")))
    }
}

/// Outcome of one rule on one input. A witness is present exactly when
/// the rule failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleVerdict {
    pub rule: RuleId,
    pub passed: bool,
    pub witness: Option<String>,
}

impl RuleVerdict {
    fn pass(rule: RuleId) -> Self {
        Self {
            rule,
            passed: true,
            witness: None,
        }
    }

    fn fail(rule: RuleId, witness: String) -> Self {
        Self {
            rule,
            passed: false,
            witness: Some(witness),
        }
    }
}

fn set_string(vs: &[u8]) -> String {
    let inner = vs.iter().map(|v| v.to_string()).collect::<Vec<_>>();
    format!("{{{}}}", inner.join(","))
}

/// No column sum may equal 1, and the column sums may not all be 0.
pub fn rule_column_sums(m: &BinarySymmetricMatrix) -> RuleVerdict {
    let sums = m.column_sums();
    if let Some(v) = sums.iter().position(|&s| s == 1) {
        return RuleVerdict::fail(
            RuleId::ColumnSums,
            format!("column {} sums to 1", v + 1),
        );
    }
    if sums.iter().all(|&s| s == 0) {
        return RuleVerdict::fail(RuleId::ColumnSums, "all column sums are 0".into());
    }
    RuleVerdict::pass(RuleId::ColumnSums)
}

/// The trace may not equal 1.
pub fn rule_trace(m: &BinarySymmetricMatrix) -> RuleVerdict {
    if m.trace() == 1 {
        let v = m.circled_vertices()[0];
        RuleVerdict::fail(RuleId::Trace, format!("single circle at vertex {v}"))
    } else {
        RuleVerdict::pass(RuleId::Trace)
    }
}

/// No vertex triple may carry exactly two strokes.
pub fn rule_triangle1(m: &BinarySymmetricMatrix) -> RuleVerdict {
    let n = m.n() as u8;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let s = m.stroke(i, j) as u8 + m.stroke(j, k) as u8 + m.stroke(i, k) as u8;
                if s == 2 {
                    return RuleVerdict::fail(
                        RuleId::Triangle1,
                        format!("triple {} carries two strokes", set_string(&[i, j, k])),
                    );
                }
            }
        }
    }
    RuleVerdict::pass(RuleId::Triangle1)
}

/// A stroke of one color may not join a circled and an uncircled vertex
/// of the other color: `a_ij (b_ii + b_jj) != 1` and
/// `b_ij (a_ii + a_jj) != 1` for all pairs.
pub fn rule_circling(p: &ZWMatrix) -> RuleVerdict {
    let n = p.n() as u8;
    let (a, b) = (p.z(), p.w());
    for i in 1..=n {
        for j in i + 1..=n {
            if a.stroke(i, j) && (b.circle(i) as u8 + b.circle(j) as u8) == 1 {
                return RuleVerdict::fail(
                    RuleId::Circling,
                    format!("z-stroke ({i},{j}) joins one w-circled and one uncircled vertex"),
                );
            }
            if b.stroke(i, j) && (a.circle(i) as u8 + a.circle(j) as u8) == 1 {
                return RuleVerdict::fail(
                    RuleId::Circling,
                    format!("w-stroke ({i},{j}) joins one z-circled and one uncircled vertex"),
                );
            }
        }
    }
    RuleVerdict::pass(RuleId::Circling)
}

/// If one color has trace exactly 2, its two circled vertices may not be
/// joined by a stroke in both colors.
pub fn rule_trace2(p: &ZWMatrix) -> RuleVerdict {
    for (name, m) in [("z", p.z()), ("w", p.w())] {
        if m.trace() == 2 {
            let c = m.circled_vertices();
            let (i, j) = (c[0], c[1]);
            if p.z().stroke(i, j) && p.w().stroke(i, j) {
                return RuleVerdict::fail(
                    RuleId::Trace2,
                    format!("{name}-trace 2 with zw-edge between circled vertices ({i},{j})"),
                );
            }
        }
    }
    RuleVerdict::pass(RuleId::Trace2)
}

/// No connected component may contain exactly one circled vertex.
pub fn rule_components(m: &BinarySymmetricMatrix) -> RuleVerdict {
    for block in m.components().blocks() {
        let circled = block.iter().filter(|&&v| m.circle(v)).count();
        if circled == 1 {
            return RuleVerdict::fail(
                RuleId::Components,
                format!("component {} has exactly one circle", set_string(block)),
            );
        }
    }
    RuleVerdict::pass(RuleId::Components)
}

/// Every nonempty proper vertex subset with all-zero diagonal must have
/// a number of strokes to its complement different from 1.
pub fn rule_trace0_minors(m: &BinarySymmetricMatrix) -> RuleVerdict {
    let n = m.n();
    let diag = m.diag_bits() as u32;
    let pairs = m.stroke_pairs();
    for subset in 1u32..((1 << n) - 1) {
        if subset & diag != 0 {
            continue;
        }
        let mut cross = 0;
        for &(i, j) in &pairs {
            let in_i = subset >> (i - 1) & 1;
            let in_j = subset >> (j - 1) & 1;
            if in_i != in_j {
                cross += 1;
            }
        }
        if cross == 1 {
            let members: Vec<u8> = (1..=n as u8).filter(|&v| subset >> (v - 1) & 1 == 1).collect();
            return RuleVerdict::fail(
                RuleId::Trace0Minors,
                format!(
                    "uncircled subset {} has exactly one crossing stroke",
                    set_string(&members)
                ),
            );
        }
    }
    RuleVerdict::pass(RuleId::Trace0Minors)
}

fn fully_stroked(m: &BinarySymmetricMatrix, vs: &[u8]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(t, &i)| vs[t + 1..].iter().all(|&j| m.stroke(i, j)))
}

fn circled_in(m: &BinarySymmetricMatrix, vs: &[u8]) -> Vec<u8> {
    vs.iter().copied().filter(|&v| m.circle(v)).collect()
}

/// One direction of the fully-edged-components rule: `first` plays the
/// role of the fully stroked, fully uncircled component's color.
fn fully_edged_one(
    first: &BinarySymmetricMatrix,
    second: &BinarySymmetricMatrix,
    first_name: &str,
    second_name: &str,
) -> Option<String> {
    let second_comps = second.components();
    for block in first.components().blocks() {
        let k = block.len();
        if k < 3 || !fully_stroked(first, block) || !circled_in(first, block).is_empty() {
            continue;
        }
        // The circled vertices of the union of second-color components
        // meeting K may not be exactly K.
        let mut union: Vec<u8> = Vec::new();
        for comp in second_comps.blocks() {
            if comp.iter().any(|v| block.contains(v)) {
                union.extend_from_slice(comp);
            }
        }
        union.sort_unstable();
        if circled_in(second, &union) == *block {
            return Some(format!(
                "{first_name}-component {} is matched by {second_name}-circles exactly on it",
                set_string(block)
            ));
        }
        // Deleting one vertex: if the remainder sits inside a single
        // second-color component, that component's circles may not be
        // exactly the remainder.
        for &drop in block {
            let k1: Vec<u8> = block.iter().copied().filter(|&v| v != drop).collect();
            for comp in second_comps.blocks() {
                if k1.iter().all(|v| comp.contains(v)) && circled_in(second, comp) == k1 {
                    return Some(format!(
                        "{first_name}-component {} minus vertex {drop} is matched by \
                         {second_name}-circles exactly on {}",
                        set_string(block),
                        set_string(&k1)
                    ));
                }
            }
        }
        // A second-color component one vertex larger than K may not be
        // fully stroked and circle-free.
        for comp in second_comps.blocks() {
            if comp.len() == k + 1
                && block.iter().all(|v| comp.contains(v))
                && fully_stroked(second, comp)
                && circled_in(second, comp).is_empty()
            {
                return Some(format!(
                    "{second_name}-component {} extends {first_name}-component {} \
                     fully stroked without circles",
                    set_string(comp),
                    set_string(block)
                ));
            }
        }
    }
    None
}

/// For a fully stroked, fully uncircled component K (|K| >= 3) of either
/// color, the other color may not circle exactly K, nor exactly K minus
/// one vertex within one component, nor extend K by one vertex into a
/// fully stroked circle-free component.
pub fn rule_fully_edged(p: &ZWMatrix) -> RuleVerdict {
    if let Some(w) = fully_edged_one(p.z(), p.w(), "z", "w") {
        return RuleVerdict::fail(RuleId::FullyEdged, w);
    }
    if let Some(w) = fully_edged_one(p.w(), p.z(), "w", "z") {
        return RuleVerdict::fail(RuleId::FullyEdged, w);
    }
    RuleVerdict::pass(RuleId::FullyEdged)
}

/// A size-3 component of one color that is fully stroked and fully
/// circled in both colors forces that color's trace above 3.
pub fn rule_triangle2(p: &ZWMatrix) -> RuleVerdict {
    for (name, own, other) in [("z", p.z(), p.w()), ("w", p.w(), p.z())] {
        for block in own.components().blocks() {
            if block.len() == 3
                && fully_stroked(own, block)
                && circled_in(own, block).len() == 3
                && fully_stroked(other, block)
                && circled_in(other, block).len() == 3
                && own.trace() <= 3
            {
                return RuleVerdict::fail(
                    RuleId::Triangle2,
                    format!(
                        "doubly full triangle {} as a {name}-component with {name}-trace {}",
                        set_string(block),
                        own.trace()
                    ),
                );
            }
        }
    }
    RuleVerdict::pass(RuleId::Triangle2)
}

/// A size-4 component of one color that is fully stroked and circled in
/// its own color and fully stroked in the other forces its color's
/// trace above 4.
pub fn rule_quadrilateral(p: &ZWMatrix) -> RuleVerdict {
    for (name, own, other) in [("z", p.z(), p.w()), ("w", p.w(), p.z())] {
        for block in own.components().blocks() {
            if block.len() == 4
                && fully_stroked(own, block)
                && circled_in(own, block).len() == 4
                && fully_stroked(other, block)
                && own.trace() <= 4
            {
                return RuleVerdict::fail(
                    RuleId::Quadrilateral,
                    format!(
                        "full quadrilateral {} as a {name}-component with {name}-trace {}",
                        set_string(block),
                        own.trace()
                    ),
                );
            }
        }
    }
    RuleVerdict::pass(RuleId::Quadrilateral)
}

/// Two distinct size-2 components of one color, each a zw-edge with both
/// vertices circled in both colors, force trace(A) + trace(B) above 8.
pub fn rule_dumbbells(p: &ZWMatrix) -> RuleVerdict {
    let total = p.z().trace() + p.w().trace();
    for (name, own) in [("z", p.z()), ("w", p.w())] {
        let comps = own.components();
        let mut found: Vec<&[u8]> = Vec::new();
        for block in comps.blocks() {
            if block.len() != 2 {
                continue;
            }
            let (i, j) = (block[0], block[1]);
            if p.z().stroke(i, j)
                && p.w().stroke(i, j)
                && p.z().circle(i)
                && p.z().circle(j)
                && p.w().circle(i)
                && p.w().circle(j)
            {
                found.push(block);
            }
        }
        if found.len() >= 2 && total <= 8 {
            return RuleVerdict::fail(
                RuleId::Dumbbells,
                format!(
                    "{name}-components {} and {} are doubly circled zw-edges with trace sum {total}",
                    set_string(found[0]),
                    set_string(found[1])
                ),
            );
        }
    }
    RuleVerdict::pass(RuleId::Dumbbells)
}

/// Evaluates a single-matrix rule on one matrix.
pub fn apply_single(rule: RuleId, m: &BinarySymmetricMatrix) -> RuleVerdict {
    match rule {
        RuleId::ColumnSums => rule_column_sums(m),
        RuleId::Trace => rule_trace(m),
        RuleId::Triangle1 => rule_triangle1(m),
        RuleId::Components => rule_components(m),
        RuleId::Trace0Minors => rule_trace0_minors(m),
        _ => panic!("{rule} is a pair rule"),
    }
}

/// Evaluates a pair rule on the whole pair.
pub fn apply_pair(rule: RuleId, p: &ZWMatrix) -> RuleVerdict {
    match rule {
        RuleId::Circling => rule_circling(p),
        RuleId::Trace2 => rule_trace2(p),
        RuleId::FullyEdged => rule_fully_edged(p),
        RuleId::Triangle2 => rule_triangle2(p),
        RuleId::Quadrilateral => rule_quadrilateral(p),
        RuleId::Dumbbells => rule_dumbbells(p),
        _ => panic!("{rule} is a single-matrix rule"),
    }
}

/// Evaluates one rule on a pair; single-matrix rules are checked on both
/// colors and fail if either color fails.
pub fn apply_rule(rule: RuleId, p: &ZWMatrix) -> RuleVerdict {
    if rule.is_single_matrix() {
        let vz = apply_single(rule, p.z());
        if !vz.passed {
            return RuleVerdict::fail(rule, format!("z: {}", vz.witness.unwrap()));
        }
        let vw = apply_single(rule, p.w());
        if !vw.passed {
            return RuleVerdict::fail(rule, format!("w: {}", vw.witness.unwrap()));
        }
        RuleVerdict::pass(rule)
    } else {
        apply_pair(rule, p)
    }
}

/// Applies the selected rules to a pair; verdict list is in `rule_set`
/// order, and each verdict is independent of the others.
pub fn apply_all(p: &ZWMatrix, rule_set: &[RuleId]) -> Vec<RuleVerdict> {
    rule_set.iter().map(|&r| apply_rule(r, p)).collect()
}

/// True if the pair passes every rule in the set.
pub fn passes_all(p: &ZWMatrix, rule_set: &[RuleId]) -> bool {
    rule_set.iter().all(|&r| apply_rule(r, p).passed)
}
