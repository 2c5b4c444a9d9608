//! Sub-diagram pattern detection and the vorticity constraints the
//! patterns force, as formal polynomials in the symbols `Γ_1..Γ_n`.
//!
//! Constraints are emitted, never solved. The Λ branch is a discrete
//! tag: certain isolated circled patterns force Λ = ±1 (real) or
//! Λ = ±i (imaginary), and constraints under different branches form
//! alternative systems.

use serde::Serialize;

use crate::gamma::GammaPolynomial;
use crate::matrix::{BinarySymmetricMatrix, ZWMatrix};

/// Which color's component structure a pattern lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagramColor {
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "w")]
    W,
}

impl DiagramColor {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagramColor::Z => "z",
            DiagramColor::W => "w",
        }
    }
}

/// Detectable sub-diagram patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PatternId {
    /// A fully stroked, fully uncircled component of size >= 3.
    #[serde(rename = "P-LI")]
    UncircledClique,
    /// An isolated stroke with both ends circled and no other circle of
    /// that color anywhere.
    #[serde(rename = "P-ISO2")]
    IsolatedCircledStroke,
    /// An isolated fully stroked triangle with exactly two circled
    /// vertices and no other circle of that color.
    #[serde(rename = "P-ISO3")]
    TwoCircledTriangle,
    /// A component whose circled vertices (at least two) are pairwise
    /// joined by zw-edges, hence provably close.
    #[serde(rename = "P-RIV0")]
    CloseCircledSet,
}

impl PatternId {
    pub fn as_str(&self) -> &'static str {
        match self {
            PatternId::UncircledClique => "P-LI",
            PatternId::IsolatedCircledStroke => "P-ISO2",
            PatternId::TwoCircledTriangle => "P-ISO3",
            PatternId::CloseCircledSet => "P-RIV0",
        }
    }
}

/// One pattern occurrence: the component it matched on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatch {
    pub pattern: PatternId,
    pub color: DiagramColor,
    pub vertices: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    #[serde(rename = "eq0")]
    EqualsZero,
    #[serde(rename = "ne0")]
    Nonzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LambdaBranch {
    #[serde(rename = "any")]
    Any,
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "imag")]
    Imaginary,
}

/// A single forced relation on the vorticities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub pattern: PatternId,
    pub color: DiagramColor,
    pub vertices: Vec<u8>,
    pub kind: ConstraintKind,
    pub branch: LambdaBranch,
    pub poly: GammaPolynomial,
}

fn fully_stroked(m: &BinarySymmetricMatrix, vs: &[u8]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(t, &i)| vs[t + 1..].iter().all(|&j| m.stroke(i, j)))
}

fn circled(m: &BinarySymmetricMatrix, vs: &[u8]) -> Vec<u8> {
    vs.iter().copied().filter(|&v| m.circle(v)).collect()
}

/// Detects every pattern occurrence, color by color. Callers are
/// expected to pass pairs that satisfy the eleven rules; detection
/// itself is total.
pub fn detect_patterns(p: &ZWMatrix) -> Vec<PatternMatch> {
    let mut out = Vec::new();
    for color in [DiagramColor::Z, DiagramColor::W] {
        let own = match color {
            DiagramColor::Z => p.z(),
            DiagramColor::W => p.w(),
        };
        for block in own.components().blocks() {
            let circ = circled(own, block);
            if block.len() >= 3 && fully_stroked(own, block) && circ.is_empty() {
                out.push(PatternMatch {
                    pattern: PatternId::UncircledClique,
                    color,
                    vertices: block.clone(),
                });
            }
            if block.len() == 2 && circ.len() == 2 && own.trace() == 2 {
                out.push(PatternMatch {
                    pattern: PatternId::IsolatedCircledStroke,
                    color,
                    vertices: block.clone(),
                });
            }
            if block.len() == 3
                && fully_stroked(own, block)
                && circ.len() == 2
                && own.trace() == 2
            {
                out.push(PatternMatch {
                    pattern: PatternId::TwoCircledTriangle,
                    color,
                    vertices: block.clone(),
                });
            }
            if circ.len() >= 2
                && circ.iter().enumerate().all(|(t, &i)| {
                    circ[t + 1..]
                        .iter()
                        .all(|&j| p.z().stroke(i, j) && p.w().stroke(i, j))
                })
            {
                out.push(PatternMatch {
                    pattern: PatternId::CloseCircledSet,
                    color,
                    vertices: block.clone(),
                });
            }
        }
    }
    out
}

fn complement(n: usize, vs: &[u8]) -> Vec<u8> {
    (1..=n as u8).filter(|v| !vs.contains(v)).collect()
}

/// Emits the constraints forced by every detected pattern.
pub fn emit_constraints(p: &ZWMatrix) -> Vec<Constraint> {
    let n = p.n();
    let mut out = Vec::new();
    for m in detect_patterns(p) {
        let own = match m.color {
            DiagramColor::Z => p.z(),
            DiagramColor::W => p.w(),
        };
        match m.pattern {
            PatternId::UncircledClique => {
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: m.vertices.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Any,
                    poly: GammaPolynomial::l_sum(n, &m.vertices),
                });
            }
            PatternId::IsolatedCircledStroke => {
                let pair = &m.vertices;
                let others = complement(n, pair);
                let g_pair_product = &GammaPolynomial::variable(n, pair[0])
                    * &GammaPolynomial::variable(n, pair[1]);
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: pair.clone(),
                    kind: ConstraintKind::Nonzero,
                    branch: LambdaBranch::Any,
                    poly: GammaPolynomial::gamma_sum(n, pair),
                });
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: pair.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Real,
                    poly: GammaPolynomial::gamma_sum(n, &others),
                });
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: pair.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Imaginary,
                    poly: GammaPolynomial::total_momentum(n),
                });
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: pair.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Imaginary,
                    poly: &g_pair_product - &GammaPolynomial::l_sum(n, &others),
                });
            }
            PatternId::TwoCircledTriangle => {
                let triangle = &m.vertices;
                let circ = circled(own, triangle);
                let uncircled = *triangle
                    .iter()
                    .find(|v| !circ.contains(v))
                    .expect("one uncircled triangle vertex");
                let outside = complement(n, triangle);
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: triangle.clone(),
                    kind: ConstraintKind::Nonzero,
                    branch: LambdaBranch::Any,
                    poly: GammaPolynomial::gamma_sum(n, &circ),
                });
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: triangle.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Real,
                    poly: GammaPolynomial::gamma_sum(n, &outside),
                });
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: triangle.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Imaginary,
                    poly: GammaPolynomial::total_momentum(n),
                });
                // L_K = L_outside + Γ_u * Γ_outside
                let residual = &(&GammaPolynomial::l_sum(n, triangle)
                    - &GammaPolynomial::l_sum(n, &outside))
                    - &(&GammaPolynomial::variable(n, uncircled)
                        * &GammaPolynomial::gamma_sum(n, &outside));
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: triangle.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Imaginary,
                    poly: residual,
                });
            }
            PatternId::CloseCircledSet => {
                let circ = circled(own, &m.vertices);
                out.push(Constraint {
                    pattern: m.pattern,
                    color: m.color,
                    vertices: circ.clone(),
                    kind: ConstraintKind::EqualsZero,
                    branch: LambdaBranch::Any,
                    poly: GammaPolynomial::gamma_sum(n, &circ),
                });
            }
        }
    }
    out
}
