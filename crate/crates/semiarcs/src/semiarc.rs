//! Point-set analytics: tangent counts, t-semiarc recognition, secant
//! spectra, long secants, V_t-configuration detection, Rédei blocking-set
//! analysis, and the Szőnyi–Weiner line-count bound.
//!
//! A t-semiarc is a non-empty point set with exactly t tangents at each of
//! its points. Its secants have at most q+1−t points (each set point sees
//! the rest of a secant through non-tangent pencil lines), and a
//! (q+1−t)-secant is called a *long* secant.

use crate::plane::{line_intersection_counts, Plane};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SemiarcError {
    #[error("a point set must be non-empty")]
    EmptySet,
    #[error("point index {index} out of range (plane has {n} points)")]
    InvalidPointIndex { index: u32, n: u32 },
    #[error("the set is not a {t}-semiarc")]
    NotASemiarc { t: u32 },
    #[error("the reference point lies inside the set")]
    PointInsideSet,
}

/// A non-empty subset of plane points with lazily cached analytics.
///
/// Immutable: derive modified sets by constructing new ones, which keeps the
/// caches trivially consistent with the incidence data.
#[derive(Clone)]
pub struct PointSet {
    plane: Arc<Plane>,
    points: Vec<u32>,
    line_counts: OnceLock<Arc<Vec<u32>>>,
    tangent_counts: OnceLock<Arc<Vec<u32>>>,
    spectrum: OnceLock<BTreeMap<u32, u32>>,
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointSet")
            .field("q", &self.plane.q())
            .field("points", &self.points)
            .finish()
    }
}

/// Verdict of [`PointSet::classify_semiarc`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    #[serde(rename = "t-semiarc")]
    Semiarc { t: u32 },
    #[serde(rename = "not-semiarc")]
    NotSemiarc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemiarcReport {
    pub verdict: Verdict,
    /// Tangent count of each set point, in set order.
    pub tangent_counts: Vec<u32>,
    /// Set points whose tangent count differs from the first point's, when
    /// the verdict is not-semiarc.
    pub offenders: Vec<u32>,
}

impl SemiarcReport {
    pub fn t(&self) -> Option<u32> {
        match self.verdict {
            Verdict::Semiarc { t } => Some(t),
            Verdict::NotSemiarc => None,
        }
    }
}

/// One V_t-configuration found inside a t-semiarc: a line pair whose
/// symmetric difference meets S in exactly q−t points on each line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VtWitness {
    pub l1: u32,
    pub l2: u32,
    pub vertex: u32,
    /// true = V• (vertex in S), false = V∘.
    pub vertex_in_s: bool,
    /// The t points of ℓ1 ∖ ({vertex} ∪ S), sorted.
    pub removed1: Vec<u32>,
    /// The t points of ℓ2 ∖ ({vertex} ∪ S), sorted.
    pub removed2: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedeiReport {
    pub is_blocking: bool,
    pub is_minimal: bool,
    pub is_nontrivial: bool,
    /// Lines with |ℓ∩S| = |S|−q; populated only for non-trivial blocking sets.
    pub redei_lines: Vec<u32>,
}

/// Result of the Szőnyi–Weiner line-count bound check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lines_meeting: u32,
    /// Number of lines through the reference point that meet U.
    pub r: u32,
    pub bound: u64,
    pub holds: bool,
}

impl PointSet {
    pub fn new(plane: Arc<Plane>, points: impl IntoIterator<Item = u32>) -> Result<Self, SemiarcError> {
        let mut points: Vec<u32> = points.into_iter().collect();
        points.sort_unstable();
        points.dedup();
        if points.is_empty() {
            return Err(SemiarcError::EmptySet);
        }
        let n = plane.n_points();
        if let Some(&bad) = points.iter().find(|&&p| p >= n) {
            return Err(SemiarcError::InvalidPointIndex { index: bad, n });
        }
        Ok(PointSet {
            plane,
            points,
            line_counts: OnceLock::new(),
            tangent_counts: OnceLock::new(),
            spectrum: OnceLock::new(),
        })
    }

    pub fn plane(&self) -> &Arc<Plane> {
        &self.plane
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn contains(&self, p: u32) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    /// |ℓ∩S| for every line, dense by line index.
    pub fn line_counts(&self) -> &[u32] {
        self.line_counts
            .get_or_init(|| Arc::new(line_intersection_counts(&self.plane, &self.points)))
    }

    /// Number of tangents at each set point (lines meeting S exactly there),
    /// parallel to `points()`.
    pub fn tangent_counts(&self) -> &[u32] {
        self.tangent_counts
            .get_or_init(|| {
                let counts = self.line_counts().to_vec();
                Arc::new(
                    self.points
                        .iter()
                        .map(|&p| {
                            self.plane
                                .lines_of_point(p)
                                .iter()
                                .filter(|&&l| counts[l as usize] == 1)
                                .count() as u32
                        })
                        .collect(),
                )
            })
    }

    /// The secant spectrum: k ↦ number of k-secants, k ≥ 1. Asserts the two
    /// double-count identities Σ k·c_k = |S|(q+1) and Σ k(k−1)·c_k = |S|(|S|−1).
    pub fn secant_spectrum(&self) -> &BTreeMap<u32, u32> {
        self.spectrum.get_or_init(|| {
            let mut spec = BTreeMap::new();
            for &c in self.line_counts() {
                if c > 0 {
                    *spec.entry(c).or_insert(0u32) += 1;
                }
            }
            let s = self.points.len() as u64;
            let q = u64::from(self.plane.q());
            let inc: u64 = spec.iter().map(|(&k, &c)| u64::from(k) * u64::from(c)).sum();
            let pairs: u64 = spec
                .iter()
                .map(|(&k, &c)| u64::from(k) * u64::from(k - 1) * u64::from(c))
                .sum();
            assert_eq!(inc, s * (q + 1), "incidence double count failed");
            assert_eq!(pairs, s * (s - 1), "pair double count failed");
            spec
        })
    }

    /// Tangent-count verdict: a t-semiarc has the same count t at every point.
    pub fn classify_semiarc(&self) -> SemiarcReport {
        let counts = self.tangent_counts().to_vec();
        let t0 = counts[0];
        let offenders: Vec<u32> = self
            .points
            .iter()
            .zip(&counts)
            .filter(|&(_, &c)| c != t0)
            .map(|(&p, _)| p)
            .collect();
        SemiarcReport {
            verdict: if offenders.is_empty() {
                Verdict::Semiarc { t: t0 }
            } else {
                Verdict::NotSemiarc
            },
            tangent_counts: counts,
            offenders,
        }
    }

    fn require_semiarc(&self, t: u32) -> Result<(), SemiarcError> {
        match self.classify_semiarc().verdict {
            Verdict::Semiarc { t: found } if found == t => Ok(()),
            _ => Err(SemiarcError::NotASemiarc { t }),
        }
    }

    /// All (q+1−t)-secants of a t-semiarc. Asserts |S∖ℓ| ≤ q for each
    /// returned line (no secant leaves more than q points outside).
    pub fn long_secants(&self, t: u32) -> Result<Vec<u32>, SemiarcError> {
        self.require_semiarc(t)?;
        let q = self.plane.q();
        let target = q + 1 - t;
        let out: Vec<u32> = self
            .line_counts()
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == target)
            .map(|(l, _)| l as u32)
            .collect();
        if !out.is_empty() {
            let outside = self.points.len() as u32 - target;
            assert!(outside <= q, "a long secant of a t-semiarc leaves at most q points outside");
        }
        Ok(out)
    }

    /// All V_t-configurations inside a t-semiarc: unordered line pairs with
    /// exactly q−t points of S on each line apart from their common point,
    /// tagged V∘/V• by vertex membership.
    pub fn detect_vt(&self, t: u32) -> Result<Vec<VtWitness>, SemiarcError> {
        self.require_semiarc(t)?;
        let q = self.plane.q();
        if t > q {
            return Ok(Vec::new());
        }
        let want = q - t;
        let counts = self.line_counts();
        // Candidate lines: |ℓ∩S| is q−t, or q−t+1 when the vertex lies in S.
        let cands: Vec<u32> = (0..self.plane.n_lines())
            .filter(|&l| counts[l as usize] == want || counts[l as usize] == want + 1)
            .collect();
        let mut out = Vec::new();
        for (i, &l1) in cands.iter().enumerate() {
            for &l2 in &cands[i + 1..] {
                let vertex = self.plane.meet(l1, l2);
                let vertex_in_s = self.contains(vertex);
                let adjust = u32::from(vertex_in_s);
                if counts[l1 as usize] - adjust != want || counts[l2 as usize] - adjust != want {
                    continue;
                }
                let removed = |l: u32| -> Vec<u32> {
                    self.plane
                        .points_of_line(l)
                        .iter()
                        .filter(|&&p| p != vertex && !self.contains(p))
                        .copied()
                        .collect()
                };
                let (removed1, removed2) = (removed(l1), removed(l2));
                debug_assert_eq!(removed1.len() as u32, t);
                debug_assert_eq!(removed2.len() as u32, t);
                out.push(VtWitness { l1, l2, vertex, vertex_in_s, removed1, removed2 });
            }
        }
        Ok(out)
    }

    /// Blocking-set analysis: whether S meets every line, whether it is
    /// minimal (every point on some tangent) and non-trivial (contains no
    /// full line), and its Rédei lines.
    pub fn redei_analysis(&self) -> RedeiReport {
        let counts = self.line_counts();
        let q = self.plane.q();
        let is_blocking = counts.iter().all(|&c| c > 0);
        let is_minimal = is_blocking && self.tangent_counts().iter().all(|&c| c > 0);
        let is_nontrivial = is_blocking && counts.iter().all(|&c| c < q + 1);
        let redei_lines = if is_blocking && is_nontrivial && self.points.len() as u32 > q {
            let target = self.points.len() as u32 - q;
            counts
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c == target)
                .map(|(l, _)| l as u32)
                .collect()
        } else {
            Vec::new()
        };
        RedeiReport { is_blocking, is_minimal, is_nontrivial, redei_lines }
    }

    /// Szőnyi–Weiner bound: with r = lines through `p` meeting this set U
    /// (p ∉ U), the number of lines meeting U is at most
    /// 1 + r·q + (|U|−r)(q+1−r).
    pub fn line_meeting_bound(&self, p: u32) -> Result<BoundReport, SemiarcError> {
        if self.contains(p) {
            return Err(SemiarcError::PointInsideSet);
        }
        let counts = self.line_counts();
        let lines_meeting = counts.iter().filter(|&&c| c > 0).count() as u32;
        let r = self
            .plane
            .lines_of_point(p)
            .iter()
            .filter(|&&l| counts[l as usize] > 0)
            .count() as u32;
        let (q, u) = (u64::from(self.plane.q()), self.points.len() as u64);
        debug_assert!(u64::from(r) <= u);
        let bound = 1 + u64::from(r) * q + (u - u64::from(r)) * (q + 1 - u64::from(r));
        Ok(BoundReport { lines_meeting, r, bound, holds: u64::from(lines_meeting) <= bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::plane::Plane;

    fn pg(p: u32, r: u32) -> Arc<Plane> {
        Arc::new(Plane::build_pg2(FiniteField::new(p, r).unwrap()))
    }

    fn set(plane: &Arc<Plane>, pts: impl IntoIterator<Item = u32>) -> PointSet {
        PointSet::new(Arc::clone(plane), pts).unwrap()
    }

    /// Frame vertices plus {(c,0,1), (0,−c,1), (c,1,0)} over the nonzero
    /// squares c — the projective triangle, a ((q−1)/2)-semiarc for odd q.
    fn projective_triangle(plane: &Arc<Plane>) -> PointSet {
        let f = plane.field().unwrap();
        let mut pts = vec![
            plane.point_index([1, 0, 0]),
            plane.point_index([0, 1, 0]),
            plane.point_index([0, 0, 1]),
        ];
        for c in f.squares() {
            pts.push(plane.point_index([c, 0, 1]));
            pts.push(plane.point_index([0, f.neg(c), 1]));
            pts.push(plane.point_index([c, 1, 0]));
        }
        set(plane, pts)
    }

    /// Symmetric difference of two lines with the first t non-vertex points
    /// removed from each.
    fn vt_configuration(plane: &Arc<Plane>, l1: u32, l2: u32, t: usize) -> PointSet {
        let vertex = plane.meet(l1, l2);
        let mut pts = Vec::new();
        for l in [l1, l2] {
            pts.extend(
                plane.points_of_line(l).iter().filter(|&&p| p != vertex).skip(t).copied(),
            );
        }
        set(plane, pts)
    }

    #[test]
    fn single_point_has_full_pencil_of_tangents() {
        let pl = pg(3, 1);
        let s = set(&pl, [5]);
        assert_eq!(s.tangent_counts(), &[4]);
        assert_eq!(s.classify_semiarc().verdict, Verdict::Semiarc { t: 4 });
    }

    #[test]
    fn three_noncollinear_points_form_a_q_minus_1_semiarc() {
        for (p, r) in [(3, 1), (2, 2), (5, 1)] {
            let pl = pg(p, r);
            let q = pl.q();
            let s = set(
                &pl,
                [
                    pl.point_index([1, 0, 0]),
                    pl.point_index([0, 1, 0]),
                    pl.point_index([0, 0, 1]),
                ],
            );
            assert_eq!(s.tangent_counts(), &[q - 1, q - 1, q - 1]);
            // their long secants at t=q−1 are the three joining 2-secants
            assert_eq!(s.long_secants(q - 1).unwrap().len(), 3);
        }
    }

    #[test]
    fn v2_configuration_in_pg2_5_has_constant_tangent_count_2() {
        let pl = pg(5, 1);
        let s = vt_configuration(&pl, 0, 1, 2);
        assert_eq!(s.len(), 2 * (5 - 2));
        assert!(s.tangent_counts().iter().all(|&c| c == 2));
    }

    #[test]
    fn projective_triangle_in_pg2_5_is_a_2_semiarc() {
        let pl = pg(5, 1);
        let s = projective_triangle(&pl);
        assert_eq!(s.len(), 9);
        assert_eq!(s.classify_semiarc().verdict, Verdict::Semiarc { t: 2 });
    }

    #[test]
    fn conic_in_pg2_5_is_a_semioval() {
        // {(x, x², 1)} ∪ {(0,1,0)}: an oval; brute-force tangent counts.
        let pl = pg(5, 1);
        let f = pl.field().unwrap();
        let mut pts: Vec<u32> =
            (0..5).map(|x| pl.point_index([x, f.mul(x, x), 1])).collect();
        pts.push(pl.point_index([0, 1, 0]));
        let s = set(&pl, pts);
        assert_eq!(s.classify_semiarc().verdict, Verdict::Semiarc { t: 1 });
    }

    #[test]
    fn line_plus_external_point_is_not_a_semiarc() {
        let pl = pg(2, 2);
        let mut pts: Vec<u32> = pl.points_of_line(3).to_vec();
        let off = (0..pl.n_points()).find(|&p| !pl.incident(p, 3)).unwrap();
        pts.push(off);
        let s = set(&pl, pts);
        let report = s.classify_semiarc();
        assert_eq!(report.verdict, Verdict::NotSemiarc);
        assert!(!report.offenders.is_empty());
    }

    #[test]
    fn triangle_spectrum_in_pg2_5() {
        // Derived by double counting: 18 tangents, 6 two-secants, 4
        // three-secants and the 3 sides.
        let pl = pg(5, 1);
        let s = projective_triangle(&pl);
        let spec = s.secant_spectrum();
        let expected: BTreeMap<u32, u32> = [(1, 18), (2, 6), (3, 4), (4, 3)].into();
        assert_eq!(spec, &expected);
    }

    #[test]
    fn full_line_spectrum_in_pg2_3() {
        let pl = pg(3, 1);
        let s = set(&pl, pl.points_of_line(7).to_vec());
        let spec = s.secant_spectrum();
        let expected: BTreeMap<u32, u32> = [(1, 12), (4, 1)].into();
        assert_eq!(spec, &expected);
    }

    #[test]
    fn suetake_set_in_pg2_5_has_the_named_secants() {
        // S = {(0,a,1): a∈A} ∪ {(b,0,1): b∈B} ∪ {(c,c,1): c≠0} ∪ {(m,1,0): m∉{0,1}}
        // with A = {1,4}, B = {2,3}.
        let pl = pg(5, 1);
        let f = pl.field().unwrap();
        let mut pts = Vec::new();
        for a in [1, 4] {
            pts.push(pl.point_index([0, a, 1]));
        }
        for b in [2, 3] {
            pts.push(pl.point_index([b, 0, 1]));
        }
        for c in 1..5 {
            pts.push(pl.point_index([c, c, 1]));
        }
        for m in 2..5 {
            pts.push(pl.point_index([m, 1, 0]));
        }
        let s = set(&pl, pts);
        assert_eq!(s.classify_semiarc().verdict, Verdict::Semiarc { t: 1 });
        let x_eq_y = pl.line_index([1, f.neg(1), 0]);
        let z_eq_0 = pl.line_index([0, 0, 1]);
        assert_eq!(s.line_counts()[x_eq_y as usize], 4); // the (q−1)-secant
        assert_eq!(s.line_counts()[z_eq_0 as usize], 3); // the (q−2)-secant
        // X=Y and Z=0 meet in (1,1,0), which is outside S (m=1 is excluded)
        assert!(!s.contains(pl.meet(x_eq_y, z_eq_0)));
        // full spectrum, frozen from the double-count identities
        let expected: BTreeMap<u32, u32> = [(1, 11), (2, 10), (3, 5), (4, 5)].into();
        assert_eq!(s.secant_spectrum(), &expected);
    }

    #[test]
    fn triangle_long_secants_are_its_three_sides() {
        let pl = pg(5, 1);
        let s = projective_triangle(&pl);
        let longs = s.long_secants(2).unwrap();
        assert_eq!(longs.len(), 3);
        let sides = vec![
            pl.line_index([0, 0, 1]),
            pl.line_index([0, 1, 0]),
            pl.line_index([1, 0, 0]),
        ];
        let mut sides = sides;
        sides.sort_unstable();
        assert_eq!(longs, sides);
    }

    #[test]
    fn wrong_t_is_rejected() {
        let pl = pg(5, 1);
        let s = projective_triangle(&pl);
        assert!(matches!(s.long_secants(3), Err(SemiarcError::NotASemiarc { t: 3 })));
        assert!(matches!(s.detect_vt(1), Err(SemiarcError::NotASemiarc { t: 1 })));
    }

    #[test]
    fn bare_vt_configuration_yields_one_circ_witness() {
        let pl = pg(5, 1);
        let s = vt_configuration(&pl, 0, 1, 2);
        let ws = s.detect_vt(2).unwrap();
        assert_eq!(ws.len(), 1);
        let w = &ws[0];
        assert_eq!((w.l1, w.l2), (0, 1));
        assert!(!w.vertex_in_s);
        assert_eq!(w.removed1.len(), 2);
        assert_eq!(w.removed2.len(), 2);
        assert_eq!(w.vertex, pl.meet(0, 1));
    }

    #[test]
    fn triangle_yields_three_bullet_witnesses() {
        let pl = pg(5, 1);
        let s = projective_triangle(&pl);
        let ws = s.detect_vt(2).unwrap();
        assert_eq!(ws.len(), 3);
        assert!(ws.iter().all(|w| w.vertex_in_s));
        // the witnesses are exactly the three side pairs
        let mut vertices: Vec<u32> = ws.iter().map(|w| w.vertex).collect();
        vertices.sort_unstable();
        let mut frame = vec![
            pl.point_index([1, 0, 0]),
            pl.point_index([0, 1, 0]),
            pl.point_index([0, 0, 1]),
        ];
        frame.sort_unstable();
        assert_eq!(vertices, frame);
    }

    #[test]
    fn conic_contains_no_vt_configuration() {
        let pl = pg(5, 1);
        let f = pl.field().unwrap();
        let mut pts: Vec<u32> =
            (0..5).map(|x| pl.point_index([x, f.mul(x, x), 1])).collect();
        pts.push(pl.point_index([0, 1, 0]));
        let s = set(&pl, pts);
        assert!(s.detect_vt(1).unwrap().is_empty());
    }

    #[test]
    fn triangle_redei_analysis() {
        let pl = pg(5, 1);
        let s = projective_triangle(&pl);
        let r = s.redei_analysis();
        assert!(r.is_blocking && r.is_minimal && r.is_nontrivial);
        assert_eq!(r.redei_lines.len(), 3);
        let mut longs = s.long_secants(2).unwrap();
        longs.sort_unstable();
        assert_eq!(r.redei_lines, longs);
    }

    #[test]
    fn full_line_blocks_trivially() {
        let pl = pg(3, 1);
        let s = set(&pl, pl.points_of_line(5).to_vec());
        let r = s.redei_analysis();
        assert!(r.is_blocking);
        assert!(!r.is_nontrivial);
        assert!(r.redei_lines.is_empty());
    }

    #[test]
    fn general_position_quadruple_in_pg2_3_is_not_blocking() {
        let pl = pg(3, 1);
        let s = set(
            &pl,
            [
                pl.point_index([1, 0, 0]),
                pl.point_index([0, 1, 0]),
                pl.point_index([0, 0, 1]),
                pl.point_index([1, 1, 1]),
            ],
        );
        let r = s.redei_analysis();
        assert!(!r.is_blocking);
        // brute force: some line misses all four points
        assert!(s.line_counts().iter().any(|&c| c == 0));
    }

    #[test]
    fn line_meeting_bound_equality_cases() {
        let pl = pg(2, 2);
        let q = 4u32;
        // single point
        let s = set(&pl, [0]);
        let rep = s.line_meeting_bound(1).unwrap();
        assert_eq!((rep.r, rep.lines_meeting), (1, q + 1));
        assert_eq!(u64::from(rep.lines_meeting), rep.bound);
        assert!(rep.holds);
        // full line, reference point off it
        let line = set(&pl, pl.points_of_line(2).to_vec());
        let off = (0..pl.n_points()).find(|&p| !pl.incident(p, 2)).unwrap();
        let rep = line.line_meeting_bound(off).unwrap();
        assert_eq!(rep.r, q + 1);
        assert_eq!(u64::from(rep.lines_meeting), rep.bound);
        assert_eq!(rep.lines_meeting, q * q + q + 1);
    }

    #[test]
    fn line_meeting_bound_holds_on_random_samples() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, r) in [(2, 2), (5, 1)] {
            let pl = pg(p, r);
            let n = pl.n_points();
            for _ in 0..200 {
                let size = rng.gen_range(1..=8usize);
                let pts: Vec<u32> = (0..n).choose_multiple(&mut rng, size);
                let s = set(&pl, pts);
                let outside = (0..n).find(|&x| !s.contains(x)).unwrap();
                assert!(s.line_meeting_bound(outside).unwrap().holds);
            }
        }
    }

    #[test]
    fn point_inside_set_is_rejected() {
        let pl = pg(3, 1);
        let s = set(&pl, [0, 1]);
        assert!(matches!(s.line_meeting_bound(0), Err(SemiarcError::PointInsideSet)));
    }

    #[test]
    fn invalid_input_errors() {
        let pl = pg(3, 1);
        assert!(matches!(
            PointSet::new(Arc::clone(&pl), []),
            Err(SemiarcError::EmptySet)
        ));
        assert!(matches!(
            PointSet::new(Arc::clone(&pl), [99]),
            Err(SemiarcError::InvalidPointIndex { index: 99, .. })
        ));
    }
}
