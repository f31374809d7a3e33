//! Perspective point sets on a pair of lines through a common vertex.
//!
//! Two sets X1 ⊆ ℓ1∖P and X2 ⊆ ℓ2∖P are perspective when some point Q sees
//! them matched: every line through Q meets both of them or neither. The
//! points Q with that property are the centres of perspectivities mapping X1
//! onto X2, and they all lie off ℓ1 ∪ ℓ2. Over GF(q) the structured examples
//! come from one-dimensional affine groups G(A,B) = {y ↦ ay + b} with A a
//! multiplicative subgroup of order n and B an A-invariant additive subgroup
//! of order p^h: realizing a union of G-orbits on both legs of the standard
//! frame makes the centre of every group element a perspectivity centre.
//! Centre sets of the exact group size n·p^h fall into five shapes — a
//! singleton, p^h points collinear with the vertex, n points collinear off
//! the vertex, a subfield subplane minus two of its lines, or a set with
//! intersection numbers {0,1,n,p^h} — which [`classify_centres`] decides and
//! certifies.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{AddSubgroup, FieldError, FiniteField, MultSubgroup};
use crate::plane::{line_intersection_counts, Plane, PlaneError};

#[derive(Debug, Error)]
pub enum PerspectiveError {
    #[error("incompatible parameters: need n = {n} dividing p^d - 1 = {pd1} and d = {d} dividing r = {r}")]
    IncompatibleParameters { n: u32, d: u32, pd1: u32, r: u32 },
    #[error("perspective legs must be non-empty")]
    EmptyLeg,
    #[error("orbit selection is empty")]
    EmptySelection,
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// A pair of distinct lines with their common vertex and a labelling of each
/// leg ℓi ∖ {vertex} by 0..q.
///
/// [`PerspectiveFrame::pinned`] builds the standard frame in which affine
/// groups act directly on the labels; [`PerspectiveFrame::for_lines`] labels
/// arbitrary line pairs (enough for centre computation, which is purely
/// incidence-based, but not for orbit realization).
#[derive(Debug, Clone)]
pub struct PerspectiveFrame {
    plane: Arc<Plane>,
    l1: u32,
    l2: u32,
    vertex: u32,
    leg1: Vec<u32>,
    leg2: Vec<u32>,
    aligned: bool,
}

impl PerspectiveFrame {
    /// The standard frame: ℓ1 is the line x1 = 0, ℓ2 is x0 = 0, the vertex
    /// is (0,0,1), and the label y ∈ GF(q) names (1,0,y) on leg 1 and
    /// (0,1,y) on leg 2. The perspectivity centred at (−a,1,b) then acts on
    /// labels as y ↦ ay + b, so affine groups act on the legs exactly as on
    /// GF(q).
    pub fn pinned(plane: &Arc<Plane>) -> Result<PerspectiveFrame, PerspectiveError> {
        if plane.coords().is_none() {
            return Err(PlaneError::UnsupportedPlaneKind.into());
        }
        let q = plane.q();
        Ok(PerspectiveFrame {
            plane: Arc::clone(plane),
            l1: plane.line_index([0, 1, 0]),
            l2: plane.line_index([1, 0, 0]),
            vertex: plane.point_index([0, 0, 1]),
            leg1: (0..q).map(|y| plane.point_index([1, 0, y])).collect(),
            leg2: (0..q).map(|y| plane.point_index([0, 1, y])).collect(),
            aligned: true,
        })
    }

    /// A frame on an arbitrary pair of distinct lines; each leg is labelled
    /// in point-index order. Works on coordinate-free planes too.
    pub fn for_lines(plane: &Arc<Plane>, l1: u32, l2: u32) -> Result<PerspectiveFrame, PerspectiveError> {
        if l1 == l2 || l1 >= plane.n_lines() || l2 >= plane.n_lines() {
            return Err(PerspectiveError::InconsistentInput(format!(
                "need two distinct lines of the plane, got {l1} and {l2}"
            )));
        }
        let vertex = plane.meet(l1, l2);
        let leg = |l: u32| -> Vec<u32> {
            plane.points_of_line(l).iter().copied().filter(|&p| p != vertex).collect()
        };
        Ok(PerspectiveFrame {
            plane: Arc::clone(plane),
            l1,
            l2,
            vertex,
            leg1: leg(l1),
            leg2: leg(l2),
            aligned: false,
        })
    }

    pub fn plane(&self) -> &Arc<Plane> {
        &self.plane
    }

    pub fn l1(&self) -> u32 {
        self.l1
    }

    pub fn l2(&self) -> u32 {
        self.l2
    }

    pub fn vertex(&self) -> u32 {
        self.vertex
    }

    /// True when leg labels are field elements acted on affinely by
    /// perspectivities (i.e. the frame came from [`PerspectiveFrame::pinned`]).
    pub fn is_aligned(&self) -> bool {
        self.aligned
    }

    /// Point of leg 1 with label y.
    pub fn leg1_point(&self, y: u32) -> u32 {
        self.leg1[y as usize]
    }

    /// Point of leg 2 with label y.
    pub fn leg2_point(&self, y: u32) -> u32 {
        self.leg2[y as usize]
    }

    fn field(&self) -> Result<&FiniteField, PerspectiveError> {
        self.plane.field().ok_or_else(|| PlaneError::UnsupportedPlaneKind.into())
    }

    /// Orbit realization and classification need the pinned labelling and a
    /// group over the very same field.
    fn require_group(&self, g: &PerspectiveGroup) -> Result<(), PerspectiveError> {
        if !self.aligned {
            return Err(PerspectiveError::InconsistentInput(
                "frame does not align leg labels with GF(q); use the pinned frame".into(),
            ));
        }
        let f = self.field()?;
        if f.q() != g.field.q() || f.modulus() != g.field.modulus() {
            return Err(PerspectiveError::InconsistentInput(format!(
                "group was built over GF({}) with a different modulus than the plane's field GF({})",
                g.field.q(),
                f.q()
            )));
        }
        Ok(())
    }
}

/// The affine group G(A,B) = {y ↦ ay + b : a ∈ A, b ∈ B} together with its
/// orbit decomposition of GF(q): the base orbit B and m = (p^{r−h}−1)/n
/// regular orbits O_1..O_m, listed in increasing order of minimal element.
#[derive(Debug, Clone)]
pub struct PerspectiveGroup {
    field: FiniteField,
    a: MultSubgroup,
    b: AddSubgroup,
    orbits: Vec<Vec<u32>>,
}

/// Builds G(A,B) over the given field with A the multiplicative subgroup of
/// order n and B the GF(p^d)-span of the given basis elements, and computes
/// its orbits on GF(q).
pub fn build_group(
    f: &FiniteField,
    n: u32,
    d: u32,
    basis: &[u32],
) -> Result<PerspectiveGroup, PerspectiveError> {
    let (p, r) = (f.p(), f.r());
    let pd1 = if d == 0 || d > r { 0 } else { p.pow(d) - 1 };
    if d == 0 || r % d != 0 || n == 0 || pd1 % n != 0 {
        return Err(PerspectiveError::IncompatibleParameters { n, d, pd1, r });
    }
    let a = f.mult_subgroup(n)?;
    let b = f.add_subgroup(d, basis)?;
    assert!(b.is_invariant_under(f, &a), "a GF(p^d)-subspace is invariant under A ⊆ GF(p^d)*");

    let q = f.q();
    let ph = b.order();
    let mut seen = vec![false; q as usize];
    let mut orbits: Vec<Vec<u32>> = Vec::new();
    for x in 0..q {
        if seen[x as usize] {
            continue;
        }
        let mut orb: Vec<u32> = Vec::with_capacity((n * ph) as usize);
        for &aa in &a.elements {
            let ax = f.mul(aa, x);
            for &bb in &b.elements {
                let y = f.add(ax, bb);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orb.push(y);
                }
            }
        }
        orb.sort_unstable();
        orbits.push(orb);
    }
    // The base orbit is B itself; G acts regularly everywhere else.
    assert_eq!(orbits[0], b.elements);
    for orb in &orbits[1..] {
        assert_eq!(orb.len() as u32, n * ph);
    }
    let m = (p.pow(r - b.h) - 1) / n;
    assert_eq!(orbits.len() as u32 - 1, m);
    Ok(PerspectiveGroup { field: f.clone(), a, b, orbits })
}

impl PerspectiveGroup {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn a(&self) -> &MultSubgroup {
        &self.a
    }

    pub fn b(&self) -> &AddSubgroup {
        &self.b
    }

    /// |A|.
    pub fn n(&self) -> u32 {
        self.a.n
    }

    /// |B| = p^h.
    pub fn base_order(&self) -> u32 {
        self.b.order()
    }

    pub fn h(&self) -> u32 {
        self.b.h
    }

    pub fn d(&self) -> u32 {
        self.b.d
    }

    /// |G| = n·p^h.
    pub fn order(&self) -> u32 {
        self.n() * self.base_order()
    }

    /// Number of regular orbits.
    pub fn m(&self) -> u32 {
        self.orbits.len() as u32 - 1
    }

    /// All orbits on GF(q); index 0 is the base orbit B, indices 1..=m are
    /// the regular orbits in increasing order of minimal element.
    pub fn orbits(&self) -> &[Vec<u32>] {
        &self.orbits
    }

    /// Whether (A, B) are exactly the multiplicative and additive groups of
    /// the subfield of order p^h (the subplane-producing shape).
    fn is_subfield_pair(&self) -> bool {
        let h = self.h();
        if h == 0 || self.field.r() % h != 0 || self.n() != self.base_order() - 1 {
            return false;
        }
        let sub = self.field.subfield_elements(h).expect("h divides r");
        self.b.elements == sub
    }
}

/// A set of perspectivity centres, remembered together with the frame it was
/// computed in and its intersection-number profile (|ℓ ∩ U| ↦ number of
/// lines, zero-secant lines included).
#[derive(Debug, Clone)]
pub struct CentreSet {
    frame: PerspectiveFrame,
    points: Vec<u32>,
    profile: BTreeMap<u32, u32>,
}

impl CentreSet {
    fn from_points(frame: PerspectiveFrame, mut points: Vec<u32>) -> CentreSet {
        points.sort_unstable();
        points.dedup();
        let counts = line_intersection_counts(&frame.plane, &points);
        let mut profile = BTreeMap::new();
        for c in counts {
            *profile.entry(c).or_insert(0) += 1;
        }
        CentreSet { frame, points, profile }
    }

    pub fn frame(&self) -> &PerspectiveFrame {
        &self.frame
    }

    /// Sorted centre point indices.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: u32) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn profile(&self) -> &BTreeMap<u32, u32> {
        &self.profile
    }
}

/// Computes, by brute force over all points off both lines, the exact set of
/// centres of perspectivities mapping X1 onto X2. This is the oracle the
/// group-structured constructions are tested against. An empty result means
/// X1 and X2 are not perspective.
pub fn centres(
    frame: &PerspectiveFrame,
    x1: &[u32],
    x2: &[u32],
) -> Result<CentreSet, PerspectiveError> {
    if x1.is_empty() || x2.is_empty() {
        return Err(PerspectiveError::EmptyLeg);
    }
    let plane = &frame.plane;
    let np = plane.n_points();
    let mark = |pts: &[u32], line: u32, which: &str| -> Result<Vec<bool>, PerspectiveError> {
        let mut on = vec![false; np as usize];
        for &p in pts {
            if p >= np || p == frame.vertex || !plane.incident(p, line) {
                return Err(PerspectiveError::InconsistentInput(format!(
                    "point {p} is not on the {which} leg"
                )));
            }
            on[p as usize] = true;
        }
        Ok(on)
    };
    let in1 = mark(x1, frame.l1, "first")?;
    let in2 = mark(x2, frame.l2, "second")?;

    let mut points = Vec::new();
    for q in 0..np {
        if plane.incident(q, frame.l1) || plane.incident(q, frame.l2) {
            continue;
        }
        // Every line of the pencil of q meets ℓ1 and ℓ2 in single (distinct
        // from q) points; q is a centre iff the leg memberships agree on all
        // of them.
        let ok = plane.lines_of_point(q).iter().all(|&l| {
            in1[plane.meet(l, frame.l1) as usize] == in2[plane.meet(l, frame.l2) as usize]
        });
        if ok {
            points.push(q);
        }
    }
    Ok(CentreSet::from_points(frame.clone(), points))
}

/// The centre set predicted by the group structure: the points (−a, 1, b)
/// for (a, b) ∈ A × B, which centre the perspectivities y ↦ ay + b of the
/// pinned frame. For degenerate legs this can be a proper subset of the
/// brute-force [`centres`]; the two are recorded separately and never
/// conflated.
pub fn group_centre_set(
    frame: &PerspectiveFrame,
    g: &PerspectiveGroup,
) -> Result<CentreSet, PerspectiveError> {
    frame.require_group(g)?;
    let f = frame.field()?;
    let plane = &frame.plane;
    let mut points: Vec<u32> = Vec::with_capacity(g.order() as usize);
    for &a in &g.a.elements {
        let na = f.neg(a);
        for &b in &g.b.elements {
            points.push(plane.point_index([na, 1, b]));
        }
    }
    points.sort_unstable();
    points.windows(2).for_each(|w| assert_ne!(w[0], w[1]));
    Ok(CentreSet::from_points(frame.clone(), points))
}

/// Realizes a union of G-orbits as matching labelled sets on both legs of
/// the pinned frame: the selected regular orbits (1-based indices into
/// O_1..O_m) plus optionally the base orbit B. Every point of the group's
/// centre set is then a centre of a perspectivity X1 → X2.
pub fn perspective_sets_from_orbits(
    frame: &PerspectiveFrame,
    g: &PerspectiveGroup,
    orbit_indices: &[u32],
    include_base: bool,
) -> Result<(Vec<u32>, Vec<u32>), PerspectiveError> {
    frame.require_group(g)?;
    if orbit_indices.is_empty() && !include_base {
        return Err(PerspectiveError::EmptySelection);
    }
    let m = g.m();
    let mut idx: Vec<u32> = orbit_indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if let Some(&j) = idx.iter().find(|&&j| j == 0 || j > m) {
        return Err(PerspectiveError::InconsistentInput(format!(
            "orbit index {j} is outside 1..={m}"
        )));
    }
    let mut labels: Vec<u32> = Vec::new();
    if include_base {
        labels.extend_from_slice(&g.orbits[0]);
    }
    for &j in &idx {
        labels.extend_from_slice(&g.orbits[j as usize]);
    }
    let mut x1: Vec<u32> = labels.iter().map(|&y| frame.leg1_point(y)).collect();
    let mut x2: Vec<u32> = labels.iter().map(|&y| frame.leg2_point(y)).collect();
    x1.sort_unstable();
    x2.sort_unstable();
    Ok((x1, x2))
}

/// Checks that every line meeting the group's centre set in at least two
/// points and missing the vertex meets both leg copies of the base orbit B.
/// Returns the offending lines (empty = the property holds).
pub fn base_secant_violations(
    frame: &PerspectiveFrame,
    g: &PerspectiveGroup,
) -> Result<Vec<u32>, PerspectiveError> {
    let u = group_centre_set(frame, g)?;
    let plane = &frame.plane;
    let np = plane.n_points() as usize;
    let mut in_b1 = vec![false; np];
    let mut in_b2 = vec![false; np];
    for &y in &g.b.elements {
        in_b1[frame.leg1_point(y) as usize] = true;
        in_b2[frame.leg2_point(y) as usize] = true;
    }
    let counts = line_intersection_counts(plane, u.points());
    let mut bad = Vec::new();
    for l in 0..plane.n_lines() {
        if counts[l as usize] >= 2 && !plane.incident(frame.vertex, l) {
            // U avoids both legs, so such a line is neither ℓ1 nor ℓ2 and
            // meets each of them in a single point.
            let hit1 = in_b1[plane.meet(l, frame.l1) as usize];
            let hit2 = in_b2[plane.meet(l, frame.l2) as usize];
            if !hit1 || !hit2 {
                bad.push(l);
            }
        }
    }
    Ok(bad)
}

/// Case-specific witness data accompanying a classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CaseWitness {
    /// Case 1: both subgroups trivial.
    Singleton { centre: u32 },
    /// Case 2: the p^h centres and the vertex share this line.
    PencilLine { line: u32 },
    /// Case 3: the n centres share this line, which misses the vertex.
    ExternalLine { line: u32 },
    /// Case 4: centre set ∪ leg copies of B ∪ vertex — a full subplane of
    /// order p^h.
    Subplane { points: Vec<u32> },
    /// Case 5: the n lines meeting the centre set in p^h points; they are
    /// concurrent at the vertex.
    HeavyPencil { lines: Vec<u32> },
}

/// Outcome of classifying a centre set of exact group size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentreClassification {
    /// 1 = singleton, 2 = collinear with the vertex, 3 = collinear off the
    /// vertex, 4 = subfield subplane, 5 = four intersection numbers.
    pub case: u8,
    pub n: u32,
    pub h: u32,
    pub d: u32,
    pub m: u32,
    /// |U| = n·p^h.
    pub size: u32,
    /// |ℓ ∩ U| ↦ number of lines.
    pub profile: BTreeMap<u32, u32>,
    pub witness: CaseWitness,
}

/// Decides which of the five shapes a centre set of size exactly n·p^h has,
/// verifying the shape's defining property on the way. Shape 4 (the
/// subfield pair) is recognized before shapes 2 and 3 because for p^h = 2 a
/// trivial A is also the full multiplicative group of GF(2).
pub fn classify_centres(
    cs: &CentreSet,
    g: &PerspectiveGroup,
) -> Result<CentreClassification, PerspectiveError> {
    let frame = &cs.frame;
    frame.require_group(g)?;
    let plane = &frame.plane;
    let (n, ph) = (g.n(), g.base_order());
    let expected = n * ph;
    if cs.len() != expected as usize {
        return Err(PerspectiveError::InconsistentInput(format!(
            "centre set has {} points but |G| = {n}·{ph} = {expected}",
            cs.len()
        )));
    }
    let bad = |msg: String| PerspectiveError::InconsistentInput(msg);

    let (case, witness) = if expected == 1 {
        (1, CaseWitness::Singleton { centre: cs.points[0] })
    } else if g.is_subfield_pair() {
        let f = frame.field()?;
        let sub = FiniteField::new(f.p(), g.h())?;
        let sp = plane.subfield_subplane(&sub)?;
        let mut t = cs.points.clone();
        t.extend(g.b.elements.iter().map(|&y| frame.leg1_point(y)));
        t.extend(g.b.elements.iter().map(|&y| frame.leg2_point(y)));
        t.push(frame.vertex);
        t.sort_unstable();
        t.dedup();
        if t != sp.points {
            return Err(bad(
                "centre set with subfield parameters does not close up to the subfield subplane"
                    .into(),
            ));
        }
        (4, CaseWitness::Subplane { points: t })
    } else if n == 1 {
        let line = plane.line_through(cs.points[0], cs.points[1]);
        if !cs.points.iter().all(|&p| plane.incident(p, line)) {
            return Err(bad("centres of a trivial-A group are not collinear".into()));
        }
        if !plane.incident(frame.vertex, line) {
            return Err(bad("the line of a trivial-A centre set misses the vertex".into()));
        }
        (2, CaseWitness::PencilLine { line })
    } else if ph == 1 {
        let line = plane.line_through(cs.points[0], cs.points[1]);
        if !cs.points.iter().all(|&p| plane.incident(p, line)) {
            return Err(bad("centres of a trivial-B group are not collinear".into()));
        }
        if plane.incident(frame.vertex, line) {
            return Err(bad("the line of a trivial-B centre set passes through the vertex".into()));
        }
        (3, CaseWitness::ExternalLine { line })
    } else {
        if let Some(&k) = cs.profile.keys().find(|&&k| ![0, 1, n, ph].contains(&k)) {
            return Err(bad(format!(
                "intersection number {k} is outside {{0, 1, {n}, {ph}}}"
            )));
        }
        let counts = line_intersection_counts(plane, &cs.points);
        let heavy: Vec<u32> =
            (0..plane.n_lines()).filter(|&l| counts[l as usize] == ph).collect();
        if heavy.len() as u32 != n {
            return Err(bad(format!(
                "expected exactly {n} lines meeting the centre set in {ph} points, found {}",
                heavy.len()
            )));
        }
        if let Some(&l) = heavy.iter().find(|&&l| !plane.incident(frame.vertex, l)) {
            return Err(bad(format!("heavy line {l} is not concurrent at the vertex")));
        }
        (5, CaseWitness::HeavyPencil { lines: heavy })
    };

    Ok(CentreClassification {
        case,
        n,
        h: g.h(),
        d: g.d(),
        m: g.m(),
        size: expected,
        profile: cs.profile.clone(),
        witness,
    })
}
