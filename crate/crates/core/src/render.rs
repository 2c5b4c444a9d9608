//! Stable serialization and human-readable views of diagram sets.
//!
//! JSON is the canonical interchange format and round-trips bit-exactly;
//! DOT and the stats table are write-only views.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::annotate::Constraint;
use crate::matrix::{BinarySymmetricMatrix, ZWMatrix};
use crate::pipeline::{DiagramSet, RunManifest, StageStats};
use crate::{Error, Result};

/// One color of a diagram: `{"diag":[0,1,...],"strokes":[[i,j],...]}`
/// with 1-based indices and strokes sorted row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub diag: Vec<u8>,
    pub strokes: Vec<(u8, u8)>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &BinarySymmetricMatrix) -> Self {
        Self {
            diag: (1..=m.n() as u8).map(|v| m.circle(v) as u8).collect(),
            strokes: m.stroke_pairs(),
        }
    }

    pub fn to_matrix(&self) -> Result<BinarySymmetricMatrix> {
        let n = self.diag.len();
        let mut m = BinarySymmetricMatrix::empty(n)?;
        for (v, &bit) in self.diag.iter().enumerate() {
            match bit {
                0 => {}
                1 => m = m.with_circle(v as u8 + 1),
                _ => return Err(Error::Encoding(format!("diagonal entry {bit} is not 0/1"))),
            }
        }
        for &(i, j) in &self.strokes {
            if i == j || i == 0 || j == 0 || i as usize > n || j as usize > n {
                return Err(Error::Encoding(format!("stroke [{i},{j}] out of range")));
            }
            m = m.with_stroke(i, j);
        }
        Ok(m)
    }
}

/// One diagram document; `key` is present in set files and optional on
/// input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub key: Option<String>,
    pub n: usize,
    pub z: MatrixDoc,
    pub w: MatrixDoc,
}

impl DiagramDoc {
    pub fn from_pair(p: &ZWMatrix, with_key: bool) -> Self {
        Self {
            key: with_key.then(|| p.encoding()),
            n: p.n(),
            z: MatrixDoc::from_matrix(p.z()),
            w: MatrixDoc::from_matrix(p.w()),
        }
    }

    pub fn to_pair(&self) -> Result<ZWMatrix> {
        let z = self.z.to_matrix()?;
        let w = self.w.to_matrix()?;
        if z.n() != self.n || w.n() != self.n {
            return Err(Error::Encoding(format!(
                "declared n={} but diagonals have lengths {} and {}",
                self.n,
                z.n(),
                w.n()
            )));
        }
        ZWMatrix::new(z, w)
    }
}

/// The diagram-set file: manifest, stage statistics, diagrams in
/// ascending canonical-key order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramSetDoc {
    pub manifest: RunManifest,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<StageStats>,
    pub diagrams: Vec<DiagramDoc>,
}

impl DiagramSetDoc {
    pub fn from_set(set: &DiagramSet) -> Self {
        Self {
            manifest: set.manifest.clone(),
            stats: set.stats.clone(),
            diagrams: set
                .diagrams
                .iter()
                .map(|p| DiagramDoc::from_pair(p, true))
                .collect(),
        }
    }
}

/// Serializes a diagram set to its canonical JSON text.
pub fn to_json(set: &DiagramSet) -> String {
    let doc = DiagramSetDoc::from_set(set);
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

/// Parses a diagram-set file (or a single diagram document) and returns
/// the pairs it holds.
pub fn pairs_from_json(text: &str) -> Result<Vec<ZWMatrix>> {
    if let Ok(doc) = serde_json::from_str::<DiagramSetDoc>(text) {
        return doc.diagrams.iter().map(|d| d.to_pair()).collect();
    }
    let single: DiagramDoc = serde_json::from_str(text)
        .map_err(|e| Error::Encoding(format!("not a diagram document: {e}")))?;
    Ok(vec![single.to_pair()?])
}

fn node_attrs(z_circle: bool, w_circle: bool) -> &'static str {
    match (z_circle, w_circle) {
        (false, false) => "",
        (true, false) => " [color=red, peripheries=2]",
        (false, true) => " [color=blue, style=dashed, peripheries=2]",
        (true, true) => " [color=\"red:blue\", style=dashed, peripheries=3]",
    }
}

/// Deterministic DOT text for one diagram: solid red edges for
/// z-strokes, dashed blue edges for w-strokes (a zw-edge renders both),
/// doubled node peripheries for circles.
pub fn render_dot(p: &ZWMatrix, name: &str) -> String {
    let n = p.n() as u8;
    let mut out = String::new();
    out.push_str(&format!("graph {name} {{\n"));
    out.push_str("  node [shape=circle];\n");
    for v in 1..=n {
        out.push_str(&format!(
            "  {v}{};\n",
            node_attrs(p.z().circle(v), p.w().circle(v))
        ));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if p.z().stroke(i, j) {
                out.push_str(&format!("  {i} -- {j} [color=red];\n"));
            }
            if p.w().stroke(i, j) {
                out.push_str(&format!("  {i} -- {j} [color=blue, style=dashed];\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// DOT text for a whole set: one graph per diagram, keyed comments.
pub fn render_dot_set(set: &DiagramSet) -> String {
    let mut out = String::new();
    for (t, p) in set.diagrams.iter().enumerate() {
        out.push_str(&format!("// {}\n", p.encoding()));
        out.push_str(&render_dot(p, &format!("d{t}")));
        if t + 1 != set.diagrams.len() {
            out.push('\n');
        }
    }
    out
}

/// Per-class stage table plus the diagram list, ending with a
/// `total: <count>` line.
pub fn render_table(set: &DiagramSet) -> String {
    let mut out = String::new();
    if let Some(stats) = &set.stats {
        out.push_str("class  trace  S_initial  S_filtered  T      U\n");
        for k in 1..=stats.n {
            let trace = crate::pipeline::class_trace(k);
            out.push_str(&format!(
                "{:<6} {:<6} {:<10} {:<11} {:<6} {}\n",
                k,
                trace,
                stats.initial[k - 1],
                stats.filtered[k - 1],
                stats.t_sets[k - 1],
                stats.u_sets[k - 1],
            ));
        }
        out.push('\n');
    }
    for (t, p) in set.diagrams.iter().enumerate() {
        out.push_str(&format!("{:>4}  {}\n", t + 1, p.encoding()));
    }
    out.push_str(&format!("total: {}\n", set.diagrams.len()));
    out
}

/// Per-diagram constraint report, JSON shape:
/// `[{"key":..., "constraints":[...]}, ...]`.
#[derive(Debug, Serialize)]
pub struct AnnotationDoc {
    pub key: String,
    pub constraints: Vec<Constraint>,
}

pub fn annotations_to_json(docs: &[AnnotationDoc]) -> String {
    let mut text = serde_json::to_string_pretty(docs).expect("serializable document");
    text.push('\n');
    text
}

pub fn annotations_to_text(docs: &[AnnotationDoc]) -> String {
    let mut out = String::new();
    for doc in docs {
        out.push_str(&doc.key);
        out.push('\n');
        if doc.constraints.is_empty() {
            out.push_str("  (no patterns)\n");
        }
        for c in &doc.constraints {
            let rel = match c.kind {
                crate::annotate::ConstraintKind::EqualsZero => "= 0",
                crate::annotate::ConstraintKind::Nonzero => "!= 0",
            };
            let branch = match c.branch {
                crate::annotate::LambdaBranch::Any => "any",
                crate::annotate::LambdaBranch::Real => "real",
                crate::annotate::LambdaBranch::Imaginary => "imag",
            };
            let vs = c
                .vertices
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "  [{} {} {{{}}}] {} {} ({})\n",
                c.pattern.as_str(),
                c.color.as_str(),
                vs,
                c.poly,
                rel,
                branch
            ));
        }
    }
    out
}

/// Writes the per-stage dump files: one encoding per line, sorted.
pub fn write_stage_dumps(dir: &Path, n: usize) -> std::io::Result<()> {
    use crate::pipeline;
    std::fs::create_dir_all(dir)?;
    let classes = pipeline::generate_z_candidates(n)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
    let write = |name: String, lines: Vec<String>| -> std::io::Result<()> {
        let mut sorted = lines;
        sorted.sort_unstable();
        std::fs::write(dir.join(name), sorted.join("\n") + "\n")
    };
    for (k, ms) in &classes {
        write(
            format!("stage1_class{k}.txt"),
            ms.iter().map(|m| m.encoding()).collect(),
        )?;
    }
    let filtered = pipeline::filter_z(&classes);
    for (k, ms) in &filtered {
        write(
            format!("stage2_class{k}.txt"),
            ms.iter().map(|m| m.encoding()).collect(),
        )?;
    }
    let w_sets = pipeline::generate_w_sets(&filtered);
    for (k, ms) in &w_sets {
        write(
            format!("t_class{k}.txt"),
            ms.iter().map(|m| m.encoding()).collect(),
        )?;
    }
    let u_sets = pipeline::match_zw(&filtered, &w_sets);
    for (k, ps) in &u_sets {
        write(
            format!("u_class{k}.txt"),
            ps.iter().map(|p| p.encoding()).collect(),
        )?;
    }
    Ok(())
}
