//! Projective planes of order q as indexed incidence structures.
//!
//! Points and lines are dense indices `0..q²+q+1`. A generated Desarguesian
//! plane PG(2,q) carries homogeneous coordinates over [`FiniteField`]; planes
//! loaded from incidence files carry none. The normalization rule for
//! homogeneous triples is: scale so the *last* nonzero coordinate is 1. The
//! induced point indexing is
//!
//! - `(a, b, 1) ↦ a·q + b`
//! - `(a, 1, 0) ↦ q² + a`
//! - `(1, 0, 0) ↦ q² + q`
//!
//! and the same formula indexes lines by their coefficient triples. In
//! particular line 0 is `[0,0,1]`, the line `x2 = 0`; its points occupy the
//! contiguous index block `q²..=q²+q`, which the search module leans on.

mod equiv;

pub use equiv::are_equivalent;

use crate::field::FiniteField;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlaneError {
    #[error("malformed incidence file: {0}")]
    MalformedFile(String),
    #[error("incidence axiom violated: {0}")]
    AxiomViolation(String),
    #[error("GF({sub_q}) is not a subfield of GF({q})")]
    NotASubfield { sub_q: u32, q: u32 },
    #[error("operation requires a generated plane with coordinates")]
    UnsupportedPlaneKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    GeneratedDesarguesian,
    Loaded,
}

/// Coordinates of a generated plane: the field plus the normalized
/// homogeneous triple of every point and line.
pub struct Coords {
    pub field: FiniteField,
    point_triples: Vec<[u32; 3]>,
    line_triples: Vec<[u32; 3]>,
}

/// An incidence structure of order q satisfying the projective-plane axioms.
///
/// Immutable after construction; wrap in `Arc` to share across workers.
pub struct Plane {
    q: u32,
    kind: PlaneKind,
    points_of_line: Vec<Vec<u32>>,
    lines_of_point: Vec<Vec<u32>>,
    /// line_through[a·n + b] for distinct points a, b; present for n ≤ 5000.
    join_table: Option<Vec<u32>>,
    /// meet_table[l·n + m] for distinct lines l, m; present for n ≤ 5000.
    meet_table: Option<Vec<u32>>,
    coords: Option<Coords>,
}

impl Plane {
    /// The Desarguesian plane PG(2,q) over the given field, with coordinates.
    pub fn build_pg2(field: FiniteField) -> Plane {
        let q = field.q();
        let n = (q * q + q + 1) as usize;
        let triples: Vec<[u32; 3]> = (0..n as u32).map(|i| index_triple(i, q)).collect();

        let mut points_of_line = vec![Vec::with_capacity(q as usize + 1); n];
        let mut lines_of_point = vec![Vec::with_capacity(q as usize + 1); n];
        for (l, lt) in triples.iter().enumerate() {
            for (p, pt) in triples.iter().enumerate() {
                if dot_is_zero(&field, lt, pt) {
                    points_of_line[l].push(p as u32);
                    lines_of_point[p].push(l as u32);
                }
            }
        }

        let mut plane = Plane {
            q,
            kind: PlaneKind::GeneratedDesarguesian,
            points_of_line,
            lines_of_point,
            join_table: None,
            meet_table: None,
            coords: Some(Coords {
                field,
                point_triples: triples.clone(),
                line_triples: triples,
            }),
        };
        plane.build_tables();
        debug_assert!(plane.validate_axioms().is_ok());
        plane
    }

    /// Parses an incidence file: `order q` on the first content line, then
    /// one line of the plane per row as q+1 point indices. `#` starts a
    /// comment. The projective-plane axioms are enforced.
    pub fn load(reader: impl BufRead) -> Result<Plane, PlaneError> {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut order: Option<u32> = None;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| PlaneError::MalformedFile(format!("read error: {e}")))?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            match order {
                None => {
                    let rest = content.strip_prefix("order").ok_or_else(|| {
                        PlaneError::MalformedFile(format!(
                            "line {}: expected `order q`, got {content:?}",
                            lineno + 1
                        ))
                    })?;
                    let q: u32 = rest.trim().parse().map_err(|_| {
                        PlaneError::MalformedFile(format!("line {}: bad order", lineno + 1))
                    })?;
                    if q < 2 {
                        return Err(PlaneError::MalformedFile("order must be ≥ 2".into()));
                    }
                    order = Some(q);
                }
                Some(q) => {
                    let n = q * q + q + 1;
                    let mut row = Vec::new();
                    for tok in content.split_whitespace() {
                        let idx: u32 = tok.parse().map_err(|_| {
                            PlaneError::MalformedFile(format!(
                                "line {}: bad point index {tok:?}",
                                lineno + 1
                            ))
                        })?;
                        if idx >= n {
                            return Err(PlaneError::MalformedFile(format!(
                                "line {}: point index {idx} out of range (n = {n})",
                                lineno + 1
                            )));
                        }
                        row.push(idx);
                    }
                    let mut sorted = row.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != row.len() {
                        return Err(PlaneError::MalformedFile(format!(
                            "line {}: repeated point index",
                            lineno + 1
                        )));
                    }
                    rows.push(sorted);
                }
            }
        }
        let q = order.ok_or_else(|| PlaneError::MalformedFile("missing `order q` header".into()))?;
        let n = (q * q + q + 1) as usize;
        if rows.len() != n {
            return Err(PlaneError::AxiomViolation(format!(
                "expected {n} lines for order {q}, file has {}",
                rows.len()
            )));
        }
        let mut lines_of_point = vec![Vec::new(); n];
        for (l, row) in rows.iter().enumerate() {
            for &p in row {
                lines_of_point[p as usize].push(l as u32);
            }
        }
        let mut plane = Plane {
            q,
            kind: PlaneKind::Loaded,
            points_of_line: rows,
            lines_of_point,
            join_table: None,
            meet_table: None,
            coords: None,
        };
        plane.validate_axioms()?;
        plane.build_tables();
        Ok(plane)
    }

    /// Writes the incidence-file form read back by [`Plane::load`].
    pub fn write_incidence(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "order {}", self.q)?;
        for row in &self.points_of_line {
            let toks: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            writeln!(w, "{}", toks.join(" "))?;
        }
        Ok(())
    }

    fn build_tables(&mut self) {
        let n = self.n_points() as usize;
        if n > 5000 {
            return;
        }
        let mut join = vec![u32::MAX; n * n];
        for (l, row) in self.points_of_line.iter().enumerate() {
            for &a in row {
                for &b in row {
                    if a != b {
                        join[a as usize * n + b as usize] = l as u32;
                    }
                }
            }
        }
        let mut meet = vec![u32::MAX; n * n];
        for (p, pencil) in self.lines_of_point.iter().enumerate() {
            for &l in pencil {
                for &m in pencil {
                    if l != m {
                        meet[l as usize * n + m as usize] = p as u32;
                    }
                }
            }
        }
        self.join_table = Some(join);
        self.meet_table = Some(meet);
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn kind(&self) -> PlaneKind {
        self.kind
    }

    pub fn n_points(&self) -> u32 {
        self.q * self.q + self.q + 1
    }

    pub fn n_lines(&self) -> u32 {
        self.n_points()
    }

    pub fn field(&self) -> Option<&FiniteField> {
        self.coords.as_ref().map(|c| &c.field)
    }

    pub fn coords(&self) -> Option<&Coords> {
        self.coords.as_ref()
    }

    pub fn points_of_line(&self, l: u32) -> &[u32] {
        &self.points_of_line[l as usize]
    }

    pub fn lines_of_point(&self, p: u32) -> &[u32] {
        &self.lines_of_point[p as usize]
    }

    pub fn incident(&self, p: u32, l: u32) -> bool {
        self.points_of_line[l as usize].binary_search(&p).is_ok()
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, a: u32, b: u32) -> u32 {
        assert_ne!(a, b, "no unique line through a point and itself");
        match &self.join_table {
            Some(t) => t[a as usize * self.n_points() as usize + b as usize],
            None => intersect_one(&self.lines_of_point[a as usize], &self.lines_of_point[b as usize]),
        }
    }

    /// The unique common point of two distinct lines.
    pub fn meet(&self, l: u32, m: u32) -> u32 {
        assert_ne!(l, m, "no unique meet of a line with itself");
        match &self.meet_table {
            Some(t) => t[l as usize * self.n_points() as usize + m as usize],
            None => intersect_one(&self.points_of_line[l as usize], &self.points_of_line[m as usize]),
        }
    }

    /// Normalized homogeneous triple of a point (generated planes only).
    pub fn point_triple(&self, p: u32) -> Option<[u32; 3]> {
        self.coords.as_ref().map(|c| c.point_triples[p as usize])
    }

    pub fn line_triple(&self, l: u32) -> Option<[u32; 3]> {
        self.coords.as_ref().map(|c| c.line_triples[l as usize])
    }

    /// Index of the point with the given homogeneous triple (any nonzero
    /// scalar multiple). Panics on the zero triple or a coordinate-free plane.
    pub fn point_index(&self, triple: [u32; 3]) -> u32 {
        let c = self.coords.as_ref().expect("point_index requires coordinates");
        triple_index(&c.field, triple)
    }

    /// Index of the line with the given coefficient triple.
    pub fn line_index(&self, triple: [u32; 3]) -> u32 {
        self.point_index(triple)
    }

    /// Full projective-plane axiom check on the stored incidence lists:
    /// counts, line sizes, pencil sizes, unique joins and unique meets.
    pub fn validate_axioms(&self) -> Result<(), PlaneError> {
        let q = self.q as usize;
        let n = q * q + q + 1;
        if self.points_of_line.len() != n || self.lines_of_point.len() != n {
            return Err(PlaneError::AxiomViolation(format!(
                "expected {n} points and lines, got {} lines / {} points",
                self.points_of_line.len(),
                self.lines_of_point.len()
            )));
        }
        for (l, row) in self.points_of_line.iter().enumerate() {
            if row.len() != q + 1 {
                return Err(PlaneError::AxiomViolation(format!(
                    "line {l} has {} points, expected {}",
                    row.len(),
                    q + 1
                )));
            }
        }
        for (p, pencil) in self.lines_of_point.iter().enumerate() {
            if pencil.len() != q + 1 {
                return Err(PlaneError::AxiomViolation(format!(
                    "point {p} lies on {} lines, expected {}",
                    pencil.len(),
                    q + 1
                )));
            }
        }
        for a in 0..n as u32 {
            for b in (a + 1)..n as u32 {
                let common = count_common(
                    &self.lines_of_point[a as usize],
                    &self.lines_of_point[b as usize],
                );
                if common != 1 {
                    return Err(PlaneError::AxiomViolation(format!(
                        "points {a} and {b} lie on {common} common lines"
                    )));
                }
            }
        }
        for l in 0..n as u32 {
            for m in (l + 1)..n as u32 {
                let common = count_common(
                    &self.points_of_line[l as usize],
                    &self.points_of_line[m as usize],
                );
                if common != 1 {
                    return Err(PlaneError::AxiomViolation(format!(
                        "lines {l} and {m} share {common} points"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The canonical subfield subplane of order `f_sub.q()` inside this
    /// generated plane: the points whose triples normalize into the embedded
    /// copy of `f_sub`, together with the ambient lines inducing its lines.
    pub fn subfield_subplane(&self, f_sub: &FiniteField) -> Result<Subplane, PlaneError> {
        let coords = self.coords.as_ref().ok_or(PlaneError::UnsupportedPlaneKind)?;
        let f = &coords.field;
        let (sub_q, q) = (f_sub.q(), f.q());
        if f_sub.p() != f.p() || f.r() % f_sub.r() != 0 {
            return Err(PlaneError::NotASubfield { sub_q, q });
        }

        // The embedding sends the adjoined root of f_sub to the least root θ
        // of f_sub's modulus inside the ambient field; an element with digits
        // (c0..c_{d-1}) maps to Σ c_i θ^i.
        let theta = (0..q)
            .find(|&x| {
                f_sub
                    .modulus()
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &c)| f.add(acc, f.mul(c, f.pow(x, i as u64))))
                    == 0
            })
            .expect("a subfield modulus always has a root in the ambient field");
        let element_map: Vec<u32> = (0..sub_q)
            .map(|x| {
                f_sub
                    .digits_of(x)
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &c)| f.add(acc, f.mul(c, f.pow(theta, i as u64))))
            })
            .collect();

        let sub_n = sub_q * sub_q + sub_q + 1;
        let map_triple = |t: [u32; 3]| -> [u32; 3] {
            [
                element_map[t[0] as usize],
                element_map[t[1] as usize],
                element_map[t[2] as usize],
            ]
        };
        let point_map: Vec<u32> = (0..sub_n)
            .map(|i| triple_index(f, map_triple(index_triple(i, sub_q))))
            .collect();
        let mut points = point_map.clone();
        points.sort_unstable();
        let mut lines = point_map.clone(); // same triples index the lines
        lines.sort_unstable();
        Ok(Subplane { sub_order: sub_q, points, lines, point_map, line_map_is_point_map: true, element_map })
    }
}

// Keeps the incidence lists out of debug output.
impl std::fmt::Debug for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Plane")
            .field("q", &self.q)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

/// A subfield subplane of a generated plane, with the index translation from
/// the standalone PG(2, sub_order) to the ambient plane.
pub struct Subplane {
    pub sub_order: u32,
    /// Ambient point indices of the subplane, sorted.
    pub points: Vec<u32>,
    /// Ambient line indices inducing the subplane lines, sorted.
    pub lines: Vec<u32>,
    /// point_map[i] = ambient index of point i of PG(2, sub_order); because
    /// points and lines share the triple indexing, the same vector translates
    /// line indices.
    pub point_map: Vec<u32>,
    line_map_is_point_map: bool,
    /// element_map[x] = ambient field element of the subfield element x.
    pub element_map: Vec<u32>,
}

impl Subplane {
    pub fn line_map(&self, sub_line: u32) -> u32 {
        debug_assert!(self.line_map_is_point_map);
        self.point_map[sub_line as usize]
    }

    pub fn contains_point(&self, p: u32) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// An element of PΓL(3,q): an invertible matrix together with a Frobenius
/// exponent e; the action on points is x ↦ M·x^{p^e}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collineation {
    pub matrix: [[u32; 3]; 3],
    pub frob_exp: u32,
}

impl Collineation {
    pub fn identity() -> Self {
        Collineation { matrix: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], frob_exp: 0 }
    }

    pub fn apply_triple(&self, f: &FiniteField, x: [u32; 3]) -> [u32; 3] {
        let s = [
            f.frobenius_pow(x[0], self.frob_exp),
            f.frobenius_pow(x[1], self.frob_exp),
            f.frobenius_pow(x[2], self.frob_exp),
        ];
        mat_vec(f, &self.matrix, s)
    }

    pub fn apply_point(&self, plane: &Plane, p: u32) -> u32 {
        let f = plane.field().expect("collineations act on generated planes");
        plane.point_index(self.apply_triple(f, plane.point_triple(p).unwrap()))
    }

    /// Image of a line: coefficient triples transform by the inverse
    /// transpose of the matrix.
    pub fn apply_line(&self, plane: &Plane, l: u32) -> u32 {
        let f = plane.field().expect("collineations act on generated planes");
        let a = plane.line_triple(l).unwrap();
        let s = [
            f.frobenius_pow(a[0], self.frob_exp),
            f.frobenius_pow(a[1], self.frob_exp),
            f.frobenius_pow(a[2], self.frob_exp),
        ];
        let minv_t = transpose(&mat_inv(f, &self.matrix));
        plane.line_index(mat_vec(f, &minv_t, s))
    }

    /// The composite "self, then g".
    pub fn then(&self, f: &FiniteField, g: &Collineation) -> Collineation {
        let m1s = map_matrix(f, &self.matrix, |x| f.frobenius_pow(x, g.frob_exp));
        Collineation {
            matrix: mat_mul(f, &g.matrix, &m1s),
            frob_exp: (self.frob_exp + g.frob_exp) % f.r(),
        }
    }

    pub fn inverse(&self, f: &FiniteField) -> Collineation {
        let e_inv = (f.r() - self.frob_exp % f.r()) % f.r();
        let minv = mat_inv(f, &self.matrix);
        Collineation {
            matrix: map_matrix(f, &minv, |x| f.frobenius_pow(x, e_inv)),
            frob_exp: e_inv,
        }
    }

    /// Scales the matrix so its first nonzero entry (row-major) is 1, making
    /// projectively equal collineations compare equal.
    pub fn canonicalize(&mut self, f: &FiniteField) {
        let first = self
            .matrix
            .iter()
            .flatten()
            .copied()
            .find(|&x| x != 0)
            .expect("zero matrix is not a collineation");
        let s = f.inv(first);
        self.matrix = map_matrix(f, &self.matrix, |x| f.mul(x, s));
        self.frob_exp %= f.r();
    }
}

/// Triple of the point (or line) with the given index; inverse of
/// [`triple_index`].
pub(crate) fn index_triple(i: u32, q: u32) -> [u32; 3] {
    if i < q * q {
        [i / q, i % q, 1]
    } else if i < q * q + q {
        [i - q * q, 1, 0]
    } else {
        debug_assert_eq!(i, q * q + q);
        [1, 0, 0]
    }
}

/// Index of a (not necessarily normalized) nonzero triple.
pub(crate) fn triple_index(f: &FiniteField, t: [u32; 3]) -> u32 {
    let q = f.q();
    if t[2] != 0 {
        let s = f.inv(t[2]);
        f.mul(t[0], s) * q + f.mul(t[1], s)
    } else if t[1] != 0 {
        let s = f.inv(t[1]);
        q * q + f.mul(t[0], s)
    } else {
        assert_ne!(t[0], 0, "zero triple has no index");
        q * q + q
    }
}

fn dot_is_zero(f: &FiniteField, a: &[u32; 3], x: &[u32; 3]) -> bool {
    let s = f.add(f.mul(a[0], x[0]), f.mul(a[1], x[1]));
    f.add(s, f.mul(a[2], x[2])) == 0
}

fn count_common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn intersect_one(a: &[u32], b: &[u32]) -> u32 {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return a[i],
        }
    }
    panic!("expected exactly one common element")
}

pub(crate) fn mat_vec(f: &FiniteField, m: &[[u32; 3]; 3], x: [u32; 3]) -> [u32; 3] {
    let mut out = [0u32; 3];
    for i in 0..3 {
        let mut acc = 0;
        for j in 0..3 {
            acc = f.add(acc, f.mul(m[i][j], x[j]));
        }
        out[i] = acc;
    }
    out
}

pub(crate) fn mat_mul(f: &FiniteField, a: &[[u32; 3]; 3], b: &[[u32; 3]; 3]) -> [[u32; 3]; 3] {
    let mut out = [[0u32; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0;
            for k in 0..3 {
                acc = f.add(acc, f.mul(a[i][k], b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub(crate) fn det(f: &FiniteField, m: &[[u32; 3]; 3]) -> u32 {
    let minor = |a: u32, b: u32, c: u32, d: u32| f.sub(f.mul(a, d), f.mul(b, c));
    let t0 = f.mul(m[0][0], minor(m[1][1], m[1][2], m[2][1], m[2][2]));
    let t1 = f.mul(m[0][1], minor(m[1][0], m[1][2], m[2][0], m[2][2]));
    let t2 = f.mul(m[0][2], minor(m[1][0], m[1][1], m[2][0], m[2][1]));
    f.add(f.sub(t0, t1), t2)
}

/// Inverse via the adjugate; panics on a singular matrix.
pub(crate) fn mat_inv(f: &FiniteField, m: &[[u32; 3]; 3]) -> [[u32; 3]; 3] {
    let d = det(f, m);
    assert_ne!(d, 0, "singular matrix");
    let dinv = f.inv(d);
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]))
    };
    let mut adj = [[0u32; 3]; 3];
    let rows = [(1usize, 2usize), (0, 2), (0, 1)];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = rows[j];
            let (c0, c1) = rows[i];
            let cof = minor(r0, r1, c0, c1);
            // sign (−1)^{i+j}
            adj[i][j] = if (i + j) % 2 == 0 { f.mul(cof, dinv) } else { f.neg(f.mul(cof, dinv)) };
        }
    }
    adj
}

pub(crate) fn transpose(m: &[[u32; 3]; 3]) -> [[u32; 3]; 3] {
    let mut out = [[0u32; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}

fn map_matrix(_f: &FiniteField, m: &[[u32; 3]; 3], g: impl Fn(u32) -> u32) -> [[u32; 3]; 3] {
    let mut out = [[0u32; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = g(m[i][j]);
        }
    }
    out
}

/// |ℓ ∩ S| for every line ℓ, as a dense vector indexed by line.
pub(crate) fn line_intersection_counts(plane: &Plane, pts: &[u32]) -> Vec<u32> {
    let mut counts = vec![0u32; plane.n_lines() as usize];
    for &p in pts {
        for &l in plane.lines_of_point(p) {
            counts[l as usize] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn pg(q_p: u32, q_r: u32) -> Plane {
        Plane::build_pg2(FiniteField::new(q_p, q_r).unwrap())
    }

    #[test]
    fn pg2_2_has_fano_shape() {
        let pl = pg(2, 1);
        assert_eq!(pl.n_points(), 7);
        assert_eq!(pl.n_lines(), 7);
        for l in 0..7 {
            assert_eq!(pl.points_of_line(l).len(), 3);
        }
    }

    #[test]
    fn pg2_3_pairwise_line_meets_are_unique() {
        let pl = pg(3, 1);
        assert_eq!(pl.n_points(), 13);
        for l in 0..13 {
            for m in (l + 1)..13 {
                let common: Vec<u32> = pl
                    .points_of_line(l)
                    .iter()
                    .filter(|p| pl.points_of_line(m).contains(p))
                    .copied()
                    .collect();
                assert_eq!(common.len(), 1);
                assert_eq!(common[0], pl.meet(l, m));
            }
        }
    }

    #[test]
    fn axiom_oracle_passes_for_small_orders() {
        for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let pl = pg(p, r);
            pl.validate_axioms().unwrap();
        }
    }

    #[test]
    fn line_zero_is_the_line_at_infinity() {
        let pl = pg(5, 1);
        assert_eq!(pl.line_triple(0).unwrap(), [0, 0, 1]);
        let expected: Vec<u32> = (25..=30).collect();
        assert_eq!(pl.points_of_line(0), &expected[..]);
    }

    #[test]
    fn triple_indexing_round_trips() {
        let pl = pg(3, 2);
        for i in 0..pl.n_points() {
            let t = pl.point_triple(i).unwrap();
            assert_eq!(pl.point_index(t), i);
        }
        // non-normalized multiples resolve to the same index
        let f = pl.field().unwrap().clone();
        for i in 0..pl.n_points() {
            let t = pl.point_triple(i).unwrap();
            for s in 1..f.q() {
                let scaled = [f.mul(t[0], s), f.mul(t[1], s), f.mul(t[2], s)];
                assert_eq!(pl.point_index(scaled), i);
            }
        }
    }

    #[test]
    fn join_and_meet_agree_with_incidence() {
        let pl = pg(2, 2);
        for a in 0..pl.n_points() {
            for b in (a + 1)..pl.n_points() {
                let l = pl.line_through(a, b);
                assert!(pl.incident(a, l) && pl.incident(b, l));
            }
        }
    }

    #[test]
    fn duality_triple_swap_preserves_incidence() {
        // point i on line j ⟺ point j on line i, because points and lines
        // share the same triple indexing and the form is symmetric.
        let pl = pg(7, 1);
        for l in 0..pl.n_lines() {
            for &p in pl.points_of_line(l) {
                assert!(pl.incident(l, p));
            }
        }
    }

    #[test]
    fn incidence_file_round_trip() {
        let pl = pg(2, 1);
        let mut buf = Vec::new();
        pl.write_incidence(&mut buf).unwrap();
        let loaded = Plane::load(&buf[..]).unwrap();
        assert_eq!(loaded.q(), 2);
        assert_eq!(loaded.kind(), PlaneKind::Loaded);
        for l in 0..7 {
            assert_eq!(loaded.points_of_line(l), pl.points_of_line(l));
        }
        loaded.validate_axioms().unwrap();
    }

    #[test]
    fn loaded_order_9_desarguesian_dump_passes_axioms() {
        let pl = pg(3, 2);
        let mut buf = Vec::new();
        pl.write_incidence(&mut buf).unwrap();
        let loaded = Plane::load(&buf[..]).unwrap();
        assert_eq!(loaded.q(), 9);
        assert!(loaded.field().is_none());
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(
            Plane::load(&b"order\n"[..]),
            Err(PlaneError::MalformedFile(_))
        ));
        assert!(matches!(
            Plane::load(&b"0 1 2\n"[..]),
            Err(PlaneError::MalformedFile(_))
        ));
        // out-of-range index
        assert!(matches!(
            Plane::load(&b"order 2\n0 1 99\n"[..]),
            Err(PlaneError::MalformedFile(_))
        ));
    }

    #[test]
    fn mixed_line_sizes_violate_axioms() {
        // Take the Fano dump and delete one point from one line.
        let pl = pg(2, 1);
        let mut buf = Vec::new();
        pl.write_incidence(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        lines[1] = lines[1].rsplit_once(' ').unwrap().0.to_string();
        let mangled = lines.join("\n");
        assert!(matches!(
            Plane::load(mangled.as_bytes()),
            Err(PlaneError::AxiomViolation(_))
        ));
    }

    #[test]
    fn fano_subplane_of_pg2_4() {
        let pl = pg(2, 2);
        let sub = pl.subfield_subplane(&FiniteField::new(2, 1).unwrap()).unwrap();
        assert_eq!(sub.points.len(), 7);
        assert_eq!(sub.lines.len(), 7);
        // each subplane line meets the subplane point set in exactly 3 points
        for &l in &sub.lines {
            let cnt = pl.points_of_line(l).iter().filter(|p| sub.contains_point(**p)).count();
            assert_eq!(cnt, 3);
        }
        // every other ambient line meets it in 0 or 1 points
        for l in 0..pl.n_lines() {
            if sub.lines.binary_search(&l).is_ok() {
                continue;
            }
            let cnt = pl.points_of_line(l).iter().filter(|p| sub.contains_point(**p)).count();
            assert!(cnt <= 1, "line {l} meets the Fano subplane in {cnt} points");
        }
    }

    #[test]
    fn order_3_subplane_of_pg2_9_incidence_oracle() {
        let pl = pg(3, 2);
        let sub = pl.subfield_subplane(&FiniteField::new(3, 1).unwrap()).unwrap();
        assert_eq!(sub.points.len(), 13);
        // the point_map is an isomorphism from the standalone PG(2,3): each
        // subplane line of PG(2,3) maps into a unique ambient line
        let small = pg(3, 1);
        for l in 0..small.n_lines() {
            let ambient_line = sub.line_map(l);
            for &p in small.points_of_line(l) {
                assert!(pl.incident(sub.point_map[p as usize], ambient_line));
            }
        }
        // the embedded field copy is closed under the ambient operations
        let f9 = pl.field().unwrap();
        let f3 = FiniteField::new(3, 1).unwrap();
        for a in 0..3u32 {
            for b in 0..3u32 {
                assert_eq!(
                    f9.mul(sub.element_map[a as usize], sub.element_map[b as usize]),
                    sub.element_map[f3.mul(a, b) as usize]
                );
                assert_eq!(
                    f9.add(sub.element_map[a as usize], sub.element_map[b as usize]),
                    sub.element_map[f3.add(a, b) as usize]
                );
            }
        }
    }

    #[test]
    fn gf4_subplane_of_pg2_16_line_profile() {
        let pl = pg(2, 4);
        let sub = pl.subfield_subplane(&FiniteField::new(2, 2).unwrap()).unwrap();
        assert_eq!(sub.points.len(), 21);
        for l in 0..pl.n_lines() {
            let cnt = pl.points_of_line(l).iter().filter(|p| sub.contains_point(**p)).count();
            assert!(matches!(cnt, 0 | 1 | 5));
        }
    }

    #[test]
    fn non_subfield_rejected() {
        let pl = pg(2, 2);
        assert!(matches!(
            pl.subfield_subplane(&FiniteField::new(3, 1).unwrap()),
            Err(PlaneError::NotASubfield { .. })
        ));
        let pl8 = pg(2, 3);
        assert!(matches!(
            pl8.subfield_subplane(&FiniteField::new(2, 2).unwrap()),
            Err(PlaneError::NotASubfield { .. })
        ));
    }

    #[test]
    fn collineation_algebra_round_trips() {
        let pl = pg(3, 2);
        let f = pl.field().unwrap();
        let c1 = Collineation { matrix: [[1, 2, 0], [0, 1, 3], [4, 0, 1]], frob_exp: 1 };
        assert_ne!(det(f, &c1.matrix), 0);
        let c2 = Collineation { matrix: [[2, 0, 1], [1, 1, 0], [0, 5, 1]], frob_exp: 0 };
        assert_ne!(det(f, &c2.matrix), 0);

        let composed = c1.then(f, &c2);
        for p in 0..pl.n_points() {
            assert_eq!(composed.apply_point(&pl, p), c2.apply_point(&pl, c1.apply_point(&pl, p)));
        }
        let inv = c1.inverse(f);
        for p in 0..pl.n_points() {
            assert_eq!(inv.apply_point(&pl, c1.apply_point(&pl, p)), p);
        }
    }

    #[test]
    fn collineations_preserve_incidence() {
        let pl = pg(2, 2);
        let f = pl.field().unwrap();
        let c = Collineation { matrix: [[1, 2, 0], [0, 1, 2], [1, 0, 1]], frob_exp: 1 };
        assert_ne!(det(f, &c.matrix), 0);
        for l in 0..pl.n_lines() {
            let li = c.apply_line(&pl, l);
            for &p in pl.points_of_line(l) {
                assert!(pl.incident(c.apply_point(&pl, p), li));
            }
        }
    }
}
