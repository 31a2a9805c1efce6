//! Triangulations as face gluing tables, and their matching equations.
//!
//! File format (UTF-8 text, `#` starts a comment line, blank lines ignored):
//!
//! ```text
//! 2
//! 1:1:1302 1:0:2031 1:2:0321 1:3:2103
//! 0:1:1302 0:0:2031 0:2:0321 0:3:2103
//! ```
//!
//! The first line holds the number of tetrahedra `n`. Each of the next `n`
//! lines lists faces 0..3 of one tetrahedron. A token is either `bdry` or
//! `t:f:p`, where `t` is the target tetrahedron, `f` the target face and `p`
//! four digits giving the images of vertices 0, 1, 2, 3. Face `i` of a
//! tetrahedron is the face opposite vertex `i`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cone::{quad_type, DenseMatrix, IntVector, COORDS_PER_TET, QUAD_OFFSET};
use crate::num::{scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: {message}")]
    OutOfRange { line: usize, column: usize, message: String },
    #[error("triangulation has no tetrahedra")]
    Empty,
    #[error("expected {expected} tetrahedron lines, found {found}")]
    WrongLineCount { expected: usize, found: usize },
    #[error("gluing of tetrahedron {tet} face {face} is not involutive")]
    NotInvolutive { tet: usize, face: usize },
    #[error("permutation on tetrahedron {tet} face {face} does not map the face onto face {target_face}")]
    FaceMismatch { tet: usize, face: usize, target_face: usize },
    #[error("tetrahedron {tet} face {face} is glued to itself by the identity")]
    DegenerateSelfGluing { tet: usize, face: usize },
}

/// A permutation of the vertex labels `{0,1,2,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm4(images))
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img as usize] = i as u8;
        }
        Perm4(inv)
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gluing {
    Boundary,
    Glued { tet: usize, face: usize, perm: Perm4 },
}

/// One identified pair of faces. `src` is the smaller `(tet, face)`; a face
/// folded onto itself has `src == dst`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FacePair {
    pub src_tet: usize,
    pub src_face: usize,
    pub dst_tet: usize,
    pub dst_face: usize,
    pub perm: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
}

impl Triangulation {
    /// Builds and validates a triangulation from its gluing table.
    pub fn new(gluings: Vec<[Gluing; 4]>) -> Result<Self, TriangulationError> {
        if gluings.is_empty() {
            return Err(TriangulationError::Empty);
        }
        let n = gluings.len();
        for (t, faces) in gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let Gluing::Glued { tet, face, perm } = *g else { continue };
                if tet >= n || face >= 4 {
                    return Err(TriangulationError::OutOfRange {
                        line: 0,
                        column: 0,
                        message: format!("tetrahedron {t} face {f} glued to missing {tet}:{face}"),
                    });
                }
                if perm.apply(f) != face {
                    return Err(TriangulationError::FaceMismatch { tet: t, face: f, target_face: face });
                }
                if tet == t && face == f && (0..4).filter(|&v| v != f).all(|v| perm.apply(v) == v) {
                    return Err(TriangulationError::DegenerateSelfGluing { tet: t, face: f });
                }
                match gluings[tet][face] {
                    Gluing::Glued { tet: back_t, face: back_f, perm: back_p }
                        if back_t == t && back_f == f && back_p == perm.inverse() => {}
                    _ => return Err(TriangulationError::NotInvolutive { tet: t, face: f }),
                }
            }
        }
        Ok(Triangulation { gluings })
    }

    /// Number of tetrahedra.
    pub fn size(&self) -> usize {
        self.gluings.len()
    }

    /// Length of a normal coordinate vector, `7n`.
    pub fn dim(&self) -> usize {
        COORDS_PER_TET * self.size()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    /// Identified face pairs, ordered by source `(tet, face)`.
    pub fn face_pairs(&self) -> Vec<FacePair> {
        let mut pairs = Vec::new();
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Gluing::Glued { tet, face, perm } = *g {
                    if (t, f) <= (tet, face) {
                        pairs.push(FacePair { src_tet: t, src_face: f, dst_tet: tet, dst_face: face, perm });
                    }
                }
            }
        }
        pairs
    }

    /// Serializes in the gluing-table file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.size());
        for faces in &self.gluings {
            let tokens: Vec<String> = faces
                .iter()
                .map(|g| match g {
                    Gluing::Boundary => "bdry".to_string(),
                    Gluing::Glued { tet, face, perm } => format!("{tet}:{face}:{perm}"),
                })
                .collect();
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses and validates a triangulation file.
pub fn parse_triangulation(text: &str) -> Result<Triangulation, TriangulationError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (count_line, count_text) = lines.next().ok_or(TriangulationError::Syntax {
        line: 1,
        column: 1,
        message: "missing tetrahedron count".into(),
    })?;
    let trimmed = count_text.trim();
    let n: usize = trimmed.parse().map_err(|_| TriangulationError::Syntax {
        line: count_line,
        column: column_of(count_text, trimmed),
        message: format!("invalid tetrahedron count `{trimmed}`"),
    })?;
    if n == 0 {
        return Err(TriangulationError::Empty);
    }

    let mut gluings = Vec::with_capacity(n);
    for (line_no, line) in lines {
        if gluings.len() == n {
            return Err(TriangulationError::WrongLineCount { expected: n, found: n + 1 });
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(TriangulationError::Syntax {
                line: line_no,
                column: 1,
                message: format!("expected 4 face tokens, found {}", tokens.len()),
            });
        }
        let mut faces = [Gluing::Boundary; 4];
        let mut search_from = 0;
        for (f, tok) in tokens.iter().enumerate() {
            let offset = search_from + line[search_from..].find(tok).unwrap_or(0);
            search_from = offset + tok.len();
            faces[f] = parse_token(tok, n, line_no, line[..offset].chars().count() + 1)?;
        }
        gluings.push(faces);
    }
    if gluings.len() != n {
        return Err(TriangulationError::WrongLineCount { expected: n, found: gluings.len() });
    }
    Triangulation::new(gluings)
}

fn column_of(line: &str, token: &str) -> usize {
    line.find(token).map(|o| line[..o].chars().count() + 1).unwrap_or(1)
}

fn parse_token(tok: &str, n: usize, line: usize, column: usize) -> Result<Gluing, TriangulationError> {
    if tok == "bdry" {
        return Ok(Gluing::Boundary);
    }
    let syntax = |message: String| TriangulationError::Syntax { line, column, message };
    let parts: Vec<&str> = tok.split(':').collect();
    let [t, f, p] = parts.as_slice() else {
        return Err(syntax(format!("expected `bdry` or `t:f:perm`, found `{tok}`")));
    };
    let tet: usize = t.parse().map_err(|_| syntax(format!("invalid tetrahedron index `{t}`")))?;
    let face: usize = f.parse().map_err(|_| syntax(format!("invalid face index `{f}`")))?;
    if tet >= n {
        return Err(TriangulationError::OutOfRange {
            line,
            column,
            message: format!("tetrahedron index {tet} out of range (n = {n})"),
        });
    }
    if face > 3 {
        return Err(TriangulationError::OutOfRange {
            line,
            column,
            message: format!("face index {face} out of range"),
        });
    }
    let digits: Vec<u8> = p.bytes().map(|b| b.wrapping_sub(b'0')).collect();
    let perm = <[u8; 4]>::try_from(digits.as_slice())
        .ok()
        .and_then(Perm4::new)
        .ok_or_else(|| syntax(format!("invalid permutation `{p}`")))?;
    Ok(Gluing::Glued { tet, face, perm })
}

impl std::str::FromStr for Triangulation {
    type Err = TriangulationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_triangulation(s)
    }
}

/// Provenance of one matching equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowMeta {
    /// Index into [`Triangulation::face_pairs`].
    pub face_pair: usize,
    /// Vertex of the source tetrahedron that the normal arc cuts off.
    pub arc_vertex: usize,
    /// All coefficients cancelled (possible only for a face folded onto itself).
    pub degenerate: bool,
}

/// Sparse `3f × 7n` matrix of matching equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, i64)>>,
    meta: Vec<RowMeta>,
}

impl MatchingMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Nonzero `(column, coefficient)` entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.rows[i]
    }

    pub fn meta(&self, i: usize) -> RowMeta {
        self.meta[i]
    }

    pub fn to_dense<T: Scalar>(&self) -> DenseMatrix<T> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut dense = vec![T::zero(); self.cols];
                for &(c, v) in r {
                    dense[c] = scalar(v);
                }
                dense
            })
            .collect();
        DenseMatrix::new(self.cols, rows).expect("rows built with matching width")
    }

    pub fn mul_vec<T: Scalar>(&self, x: &IntVector<T>) -> Vec<T> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(T::zero(), |acc, &(c, v)| acc + x[c].clone() * scalar::<T>(v)))
            .collect()
    }
}

/// Builds the matching equations: for every identified face pair and every
/// normal arc on the face, the triangle and quadrilateral counts meeting that
/// arc agree on both sides of the gluing.
pub fn matching_matrix(tri: &Triangulation) -> MatchingMatrix {
    let cols = tri.dim();
    let mut rows = Vec::new();
    let mut meta = Vec::new();
    for (pair_idx, pair) in tri.face_pairs().iter().enumerate() {
        let src = COORDS_PER_TET * pair.src_tet;
        let dst = COORDS_PER_TET * pair.dst_tet;
        for v in (0..4).filter(|&v| v != pair.src_face) {
            let w = pair.perm.apply(v);
            let mut entries: BTreeMap<usize, i64> = BTreeMap::new();
            *entries.entry(src + v).or_default() += 1;
            *entries.entry(src + QUAD_OFFSET + quad_type(v, pair.src_face)).or_default() += 1;
            *entries.entry(dst + w).or_default() -= 1;
            *entries.entry(dst + QUAD_OFFSET + quad_type(w, pair.dst_face)).or_default() -= 1;
            let row: Vec<(usize, i64)> = entries.into_iter().filter(|&(_, c)| c != 0).collect();
            meta.push(RowMeta { face_pair: pair_idx, arc_vertex: v, degenerate: row.is_empty() });
            rows.push(row);
        }
    }
    MatchingMatrix { cols, rows, meta }
}
