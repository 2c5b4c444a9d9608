//! Bit-packed binary symmetric matrices, zw-pairs, permutations and
//! canonical forms.
//!
//! A matrix on `n` vertices (3 <= n <= 8) stores `n` diagonal bits
//! (circles) and `n(n-1)/2` upper-triangle bits (strokes) in row-major
//! order `(1,2),(1,3),...,(n-1,n)`. The bit-exact text encoding is
//! `d_1..d_n || s_(1,2) s_(1,3) .. s_(n-1,n)` with characters '0'/'1';
//! a pair encodes as `N=<n>;A=<enc>;B=<enc>`. Vertices are 1-based in
//! every public interface.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::{Error, Result};

pub const MIN_VERTICES: usize = 3;
pub const MAX_VERTICES: usize = 8;

/// Index of the unordered pair `(i, j)` (0-based, `i < j`) in row-major
/// upper-triangle order.
#[inline]
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[inline]
fn stroke_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn check_vertex_count(n: usize) -> Result<()> {
    if (MIN_VERTICES..=MAX_VERTICES).contains(&n) {
        Ok(())
    } else {
        Err(Error::VertexCount(n))
    }
}

/// A permutation of the vertex labels `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    n: u8,
    // map[old] = new, 0-based
    map: [u8; MAX_VERTICES],
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        let mut map = [0u8; MAX_VERTICES];
        for (v, slot) in map.iter_mut().enumerate().take(n) {
            *slot = v as u8;
        }
        Ok(Self { n: n as u8, map })
    }

    /// Builds the permutation sending vertex `i` to `images[i-1]`
    /// (1-based labels). Fails unless `images` is a bijection on `1..=n`.
    pub fn from_images(images: &[u8]) -> Result<Self> {
        let n = images.len();
        check_vertex_count(n)?;
        let mut map = [0u8; MAX_VERTICES];
        let mut seen = [false; MAX_VERTICES];
        for (v, &img) in images.iter().enumerate() {
            if img == 0 || img as usize > n {
                return Err(Error::Permutation(format!(
                    "image {img} out of range 1..={n}"
                )));
            }
            if seen[img as usize - 1] {
                return Err(Error::Permutation(format!("image {img} repeats")));
            }
            seen[img as usize - 1] = true;
            map[v] = img - 1;
        }
        Ok(Self { n: n as u8, map })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Image of vertex `v` (1-based).
    pub fn apply(&self, v: u8) -> u8 {
        self.map[(v - 1) as usize] + 1
    }

    pub fn inverse(&self) -> Self {
        let mut map = [0u8; MAX_VERTICES];
        for v in 0..self.n as usize {
            map[self.map[v] as usize] = v as u8;
        }
        Self { n: self.n, map }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "composing permutations of sizes {} and {}",
                self.n, other.n
            )));
        }
        let mut map = [0u8; MAX_VERTICES];
        for v in 0..self.n as usize {
            map[v] = self.map[other.map[v] as usize];
        }
        Ok(Self { n: self.n, map })
    }

    fn raw(&self) -> &[u8; MAX_VERTICES] {
        &self.map
    }
}

/// All `n!` vertex maps for a given `n`, built once and cached.
/// Each entry is a 0-based array `m` with `m[slot] = vertex`.
pub(crate) fn all_maps(n: usize) -> &'static [[u8; MAX_VERTICES]] {
    static TABLES: [OnceLock<Vec<[u8; MAX_VERTICES]>>; MAX_VERTICES + 1] =
        [const { OnceLock::new() }; MAX_VERTICES + 1];
    TABLES[n].get_or_init(|| {
        (0..n as u8)
            .permutations(n)
            .map(|p| {
                let mut m = [0u8; MAX_VERTICES];
                m[..n].copy_from_slice(&p);
                m
            })
            .collect()
    })
}

/// A symmetric 0/1 matrix: one color of a two-colored diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinarySymmetricMatrix {
    n: u8,
    diag: u8,
    strokes: u32,
}

impl BinarySymmetricMatrix {
    /// The zero matrix on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        Ok(Self {
            n: n as u8,
            diag: 0,
            strokes: 0,
        })
    }

    /// Builds from packed bits: `diag` bit `i` is the circle at vertex
    /// `i+1`, `strokes` bit `t` is the stroke at pair index `t`.
    pub fn from_bits(n: usize, diag: u8, strokes: u32) -> Result<Self> {
        check_vertex_count(n)?;
        if diag & !(u8::MAX >> (8 - n)) != 0 {
            return Err(Error::Encoding(format!("diagonal bits exceed n={n}")));
        }
        let m = stroke_count(n);
        if m < 32 && strokes >> m != 0 {
            return Err(Error::Encoding(format!("stroke bits exceed n={n}")));
        }
        Ok(Self {
            n: n as u8,
            diag,
            strokes,
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn diag_bits(&self) -> u8 {
        self.diag
    }

    pub fn stroke_bits(&self) -> u32 {
        self.strokes
    }

    /// Circle at vertex `v` (1-based).
    pub fn circle(&self, v: u8) -> bool {
        debug_assert!(v >= 1 && v as usize <= self.n());
        self.diag >> (v - 1) & 1 == 1
    }

    /// Stroke between distinct vertices `i` and `j` (1-based).
    pub fn stroke(&self, i: u8, j: u8) -> bool {
        debug_assert!(i != j);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let t = pair_index(self.n(), (i - 1) as usize, (j - 1) as usize);
        self.strokes >> t & 1 == 1
    }

    /// Matrix entry `a_ij` (1-based); `i == j` reads the diagonal.
    pub fn entry(&self, i: u8, j: u8) -> u8 {
        if i == j {
            self.circle(i) as u8
        } else {
            self.stroke(i, j) as u8
        }
    }

    pub fn with_circle(mut self, v: u8) -> Self {
        debug_assert!(v >= 1 && v as usize <= self.n());
        self.diag |= 1 << (v - 1);
        self
    }

    pub fn with_stroke(mut self, i: u8, j: u8) -> Self {
        debug_assert!(i != j);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let t = pair_index(self.n(), (i - 1) as usize, (j - 1) as usize);
        self.strokes |= 1 << t;
        self
    }

    /// Number of circled vertices.
    pub fn trace(&self) -> u32 {
        self.diag.count_ones()
    }

    /// Column sums including the diagonal: entry `j` is
    /// `a_jj + sum_{i != j} a_ij`.
    pub fn column_sums(&self) -> Vec<u32> {
        let n = self.n();
        let mut sums = vec![0u32; n];
        for (v, s) in sums.iter_mut().enumerate() {
            *s = (self.diag >> v & 1) as u32;
        }
        let mut t = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.strokes >> t & 1 == 1 {
                    sums[i] += 1;
                    sums[j] += 1;
                }
                t += 1;
            }
        }
        sums
    }

    /// Connected components of the stroke graph. Circles are self-loops
    /// and do not affect connectivity; isolated vertices form singleton
    /// blocks.
    pub fn components(&self) -> Partition {
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut t = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.strokes >> t & 1 == 1 {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
                t += 1;
            }
        }
        let mut blocks: Vec<Vec<u8>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = find(&mut parent, v);
            blocks[r].push(v as u8 + 1);
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        Partition { blocks }
    }

    /// Reindexes by a slot map: result entry at `(p, q)` is the entry of
    /// `self` at `(inv[p], inv[q])` (0-based slots).
    pub(crate) fn reindex(&self, inv: &[u8; MAX_VERTICES]) -> Self {
        let n = self.n();
        let mut diag = 0u8;
        let mut strokes = 0u32;
        for p in 0..n {
            diag |= (self.diag >> inv[p] & 1) << p;
        }
        let mut t = 0;
        for p in 0..n {
            for q in p + 1..n {
                let (a, b) = (inv[p] as usize, inv[q] as usize);
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                strokes |= ((self.strokes >> pair_index(n, a, b)) & 1) << t;
                t += 1;
            }
        }
        Self {
            n: self.n,
            diag,
            strokes,
        }
    }

    /// Conjugation by a vertex permutation: the result has
    /// `a'_{sigma(i) sigma(j)} = a_{ij}` for all `i, j`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of size {} applied to matrix of size {}",
                sigma.n(),
                self.n()
            )));
        }
        Ok(self.reindex(sigma.inverse().raw()))
    }

    /// Packed encoding bits, most significant bit first, so that integer
    /// order equals lexicographic order of the text encoding.
    pub(crate) fn packed_key(&self) -> u64 {
        let n = self.n();
        let mut key = 0u64;
        for v in 0..n {
            key = key << 1 | (self.diag >> v & 1) as u64;
        }
        for t in 0..stroke_count(n) {
            key = key << 1 | (self.strokes >> t & 1) as u64;
        }
        key
    }

    /// Packed encoding of `self.reindex(inv)` without materializing it.
    pub(crate) fn key_under(&self, inv: &[u8; MAX_VERTICES]) -> u64 {
        let n = self.n();
        let mut key = 0u64;
        for p in 0..n {
            key = key << 1 | (self.diag >> inv[p] & 1) as u64;
        }
        for p in 0..n {
            for q in p + 1..n {
                let (a, b) = (inv[p] as usize, inv[q] as usize);
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                key = key << 1 | (self.strokes >> pair_index(n, a, b) & 1) as u64;
            }
        }
        key
    }

    /// The orbit representative with lexicographically minimal encoding
    /// over all `n!` vertex permutations, together with its key.
    pub fn canonical(&self) -> (Self, CanonicalKey) {
        let mut best_key = u64::MAX;
        let mut best_map = &all_maps(self.n())[0];
        for inv in all_maps(self.n()) {
            let key = self.key_under(inv);
            if key < best_key {
                best_key = key;
                best_map = inv;
            }
        }
        let canon = self.reindex(best_map);
        let key = CanonicalKey(canon.encoding());
        (canon, key)
    }

    /// Text encoding: diagonal bits then row-major upper-triangle bits.
    pub fn encoding(&self) -> String {
        let n = self.n();
        let mut s = String::with_capacity(n + stroke_count(n));
        for v in 0..n {
            s.push(if self.diag >> v & 1 == 1 { '1' } else { '0' });
        }
        for t in 0..stroke_count(n) {
            s.push(if self.strokes >> t & 1 == 1 { '1' } else { '0' });
        }
        s
    }

    /// Parses the text encoding produced by [`Self::encoding`].
    pub fn from_encoding(s: &str) -> Result<Self> {
        let n = (MIN_VERTICES..=MAX_VERTICES)
            .find(|&n| n + stroke_count(n) == s.len())
            .ok_or_else(|| {
                Error::Encoding(format!("encoding length {} fits no n in 3..=8", s.len()))
            })?;
        let mut diag = 0u8;
        let mut strokes = 0u32;
        for (pos, c) in s.chars().enumerate() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Encoding(format!("bad character {c:?}"))),
            };
            if pos < n {
                diag |= bit << pos;
            } else {
                strokes |= (bit as u32) << (pos - n);
            }
        }
        Self::from_bits(n, diag, strokes)
    }

    /// Parses the compact literal used in docs and tests, e.g.
    /// `M(n=5; d=00011; s=12,45)`. The stroke list may be empty.
    pub fn parse_literal(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix("M(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Encoding(format!("literal {text:?} is not M(...)")))?;
        let mut n = None;
        let mut diag = None;
        let mut strokes_part = None;
        for field in inner.split(';') {
            let field = field.trim();
            if let Some(v) = field.strip_prefix("n=") {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|e| Error::Encoding(format!("bad n: {e}")))?,
                );
            } else if let Some(v) = field.strip_prefix("d=") {
                diag = Some(v.to_owned());
            } else if let Some(v) = field.strip_prefix("s=") {
                strokes_part = Some(v.to_owned());
            } else {
                return Err(Error::Encoding(format!("unknown field {field:?}")));
            }
        }
        let n = n.ok_or_else(|| Error::Encoding("missing n=".into()))?;
        check_vertex_count(n)?;
        let diag = diag.ok_or_else(|| Error::Encoding("missing d=".into()))?;
        if diag.len() != n || diag.chars().any(|c| c != '0' && c != '1') {
            return Err(Error::Encoding(format!("bad diagonal {diag:?}")));
        }
        let mut m = Self::empty(n)?;
        for (v, c) in diag.chars().enumerate() {
            if c == '1' {
                m = m.with_circle(v as u8 + 1);
            }
        }
        let strokes_part = strokes_part.unwrap_or_default();
        let strokes_part = strokes_part.trim();
        if !strokes_part.is_empty() && strokes_part != "∅" {
            for tok in strokes_part.split(',') {
                let tok = tok.trim();
                let digits: Vec<u8> = tok
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::Encoding(format!("bad stroke {tok:?}")))
                    })
                    .collect::<Result<_>>()?;
                let [i, j] = digits[..] else {
                    return Err(Error::Encoding(format!("bad stroke {tok:?}")));
                };
                if i == j || i == 0 || j == 0 || i as usize > n || j as usize > n {
                    return Err(Error::Encoding(format!("stroke {tok:?} out of range")));
                }
                m = m.with_stroke(i, j);
            }
        }
        Ok(m)
    }

    /// Iterates all `(i, j)` stroke pairs present, 1-based, row-major.
    pub fn stroke_pairs(&self) -> Vec<(u8, u8)> {
        let n = self.n();
        let mut out = Vec::new();
        let mut t = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.strokes >> t & 1 == 1 {
                    out.push((i as u8 + 1, j as u8 + 1));
                }
                t += 1;
            }
        }
        out
    }

    /// Circled vertices, 1-based ascending.
    pub fn circled_vertices(&self) -> Vec<u8> {
        (1..=self.n() as u8).filter(|&v| self.circle(v)).collect()
    }
}

impl PartialOrd for BinarySymmetricMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinarySymmetricMatrix {
    /// Orders by vertex count, then by encoding (lexicographic).
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.packed_key().cmp(&other.packed_key()))
    }
}

impl fmt::Display for BinarySymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// A partition of the vertex set `{1..n}` into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<u8>>,
}

impl Partition {
    /// Blocks sorted by least element; vertices inside a block ascending.
    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The block containing vertex `v` (1-based).
    pub fn block_of(&self, v: u8) -> &[u8] {
        self.blocks
            .iter()
            .find(|b| b.contains(&v))
            .map(|b| b.as_slice())
            .expect("vertex outside partition")
    }
}

/// Kind of an edge of the two-colored diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Stroke in the z-diagram only.
    Z,
    /// Stroke in the w-diagram only.
    W,
    /// Stroke in both diagrams.
    Zw,
}

/// An ordered pair (A|B) of same-dimension matrices: one candidate
/// two-colored diagram with A the z-matrix and B the w-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZWMatrix {
    z: BinarySymmetricMatrix,
    w: BinarySymmetricMatrix,
}

impl ZWMatrix {
    pub fn new(z: BinarySymmetricMatrix, w: BinarySymmetricMatrix) -> Result<Self> {
        if z.n() != w.n() {
            return Err(Error::DimensionMismatch(format!(
                "z has {} vertices, w has {}",
                z.n(),
                w.n()
            )));
        }
        Ok(Self { z, w })
    }

    pub fn n(&self) -> usize {
        self.z.n()
    }

    pub fn z(&self) -> &BinarySymmetricMatrix {
        &self.z
    }

    pub fn w(&self) -> &BinarySymmetricMatrix {
        &self.w
    }

    /// The matrix of the given color; `0` selects z, `1` selects w.
    pub fn color(&self, idx: usize) -> &BinarySymmetricMatrix {
        if idx == 0 {
            &self.z
        } else {
            &self.w
        }
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        Ok(Self {
            z: self.z.permute(sigma)?,
            w: self.w.permute(sigma)?,
        })
    }

    /// Edge classification over all vertex pairs carrying a stroke in
    /// either color, row-major, 1-based.
    pub fn classify_edges(&self) -> Vec<(u8, u8, EdgeKind)> {
        let n = self.n() as u8;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                match (self.z.stroke(i, j), self.w.stroke(i, j)) {
                    (true, false) => out.push((i, j, EdgeKind::Z)),
                    (false, true) => out.push((i, j, EdgeKind::W)),
                    (true, true) => out.push((i, j, EdgeKind::Zw)),
                    (false, false) => {}
                }
            }
        }
        out
    }

    /// Minimizes the concatenated encoding `enc(A)||enc(B)` over
    /// simultaneous vertex permutations. With `swap_colors` set and
    /// `trace(A) == trace(B)`, also minimizes over exchanging A and B.
    pub fn canonical(&self, swap_colors: bool) -> (Self, CanonicalKey) {
        let maps = all_maps(self.n());
        let mut best: (u64, u64) = (u64::MAX, u64::MAX);
        let mut best_map = &maps[0];
        let mut best_swapped = false;
        let consider_swap = swap_colors && self.z.trace() == self.w.trace();
        for inv in maps {
            let kz = self.z.key_under(inv);
            let kw = self.w.key_under(inv);
            if (kz, kw) < best {
                best = (kz, kw);
                best_map = inv;
                best_swapped = false;
            }
            if consider_swap && (kw, kz) < best {
                best = (kw, kz);
                best_map = inv;
                best_swapped = true;
            }
        }
        let (z, w) = if best_swapped {
            (self.w.reindex(best_map), self.z.reindex(best_map))
        } else {
            (self.z.reindex(best_map), self.w.reindex(best_map))
        };
        let canon = Self { z, w };
        let key = CanonicalKey(canon.encoding());
        (canon, key)
    }

    /// Pair encoding `N=<n>;A=<enc>;B=<enc>`.
    pub fn encoding(&self) -> String {
        format!("N={};A={};B={}", self.n(), self.z.encoding(), self.w.encoding())
    }

    pub fn from_encoding(s: &str) -> Result<Self> {
        let mut n_part = None;
        let mut a_part = None;
        let mut b_part = None;
        for field in s.trim().split(';') {
            if let Some(v) = field.strip_prefix("N=") {
                n_part = Some(v);
            } else if let Some(v) = field.strip_prefix("A=") {
                a_part = Some(v);
            } else if let Some(v) = field.strip_prefix("B=") {
                b_part = Some(v);
            } else {
                return Err(Error::Encoding(format!("unknown field {field:?}")));
            }
        }
        let (Some(n), Some(a), Some(b)) = (n_part, a_part, b_part) else {
            return Err(Error::Encoding(format!("pair encoding {s:?} needs N, A, B")));
        };
        let n: usize = n
            .parse()
            .map_err(|e| Error::Encoding(format!("bad N: {e}")))?;
        let z = BinarySymmetricMatrix::from_encoding(a)?;
        let w = BinarySymmetricMatrix::from_encoding(b)?;
        if z.n() != n || w.n() != n {
            return Err(Error::Encoding(format!(
                "declared N={n} but matrices have {} and {} vertices",
                z.n(),
                w.n()
            )));
        }
        Self::new(z, w)
    }
}

impl PartialOrd for ZWMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ZWMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.z.cmp(&other.z).then_with(|| self.w.cmp(&other.w))
    }
}

impl fmt::Display for ZWMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

/// The lexicographically minimal encoding of an orbit: a total order on
/// isomorphism classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
