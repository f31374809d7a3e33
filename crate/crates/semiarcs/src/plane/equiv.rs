//! Projective-equivalence testing on generated planes.
//!
//! Backtracking over images of an ordered frame: four points in general
//! position, drawn from S1 wherever S1 supplies them and completed with
//! arbitrary plane points otherwise. Slots drawn from S1 may only map to
//! S2 points (with secant-profile pruning); filler slots range over the
//! whole plane, so sets without four points in general position — sets on
//! two lines, collinear sets — are still decided exactly.

use super::{
    det, line_intersection_counts, mat_inv, mat_mul, mat_vec, Collineation, Plane, PlaneError,
};
use std::collections::BTreeMap;

/// Searches PΓL(3,q) for a collineation mapping `s1` onto `s2`. Returns
/// `None` only after exhausting every frame image and Frobenius exponent
/// (or on a cheap invariant mismatch, which certifies non-equivalence).
pub fn are_equivalent(
    plane: &Plane,
    s1: &[u32],
    s2: &[u32],
) -> Result<Option<Collineation>, PlaneError> {
    let f = plane.field().ok_or(PlaneError::UnsupportedPlaneKind)?.clone();

    let mut s1 = s1.to_vec();
    let mut s2 = s2.to_vec();
    s1.sort_unstable();
    s1.dedup();
    s2.sort_unstable();
    s2.dedup();
    if s1.len() != s2.len() {
        return Ok(None);
    }
    if s1.is_empty() {
        return Ok(Some(Collineation::identity()));
    }

    // Invariant screen: global secant spectra must agree.
    let counts1 = line_intersection_counts(plane, &s1);
    let counts2 = line_intersection_counts(plane, &s2);
    if spectrum(&counts1) != spectrum(&counts2) {
        return Ok(None);
    }

    // Per-point profiles: the sorted multiset of |ℓ∩S| over the pencil of
    // each set point. A collineation must match profiles pointwise.
    let profile = |set: &[u32], counts: &[u32], p: u32| -> Vec<u32> {
        let _ = set;
        let mut pr: Vec<u32> =
            plane.lines_of_point(p).iter().map(|&l| counts[l as usize]).collect();
        pr.sort_unstable();
        pr
    };
    let in_s2 = {
        let mut v = vec![false; plane.n_points() as usize];
        for &p in &s2 {
            v[p as usize] = true;
        }
        v
    };

    // Frame skeleton: greedily extend to 4 points in general position,
    // preferring points of S1.
    let mut skeleton: Vec<u32> = Vec::with_capacity(4);
    let mut from_s1 = [false; 4];
    for &p in &s1 {
        if skeleton.len() < 4 && extends_general_position(plane, &skeleton, p) {
            from_s1[skeleton.len()] = true;
            skeleton.push(p);
        }
    }
    for p in 0..plane.n_points() {
        if skeleton.len() == 4 {
            break;
        }
        if extends_general_position(plane, &skeleton, p) {
            skeleton.push(p);
        }
    }
    assert_eq!(skeleton.len(), 4, "every projective plane contains a quadrangle");

    // Candidate images per slot.
    let all_points: Vec<u32> = (0..plane.n_points()).collect();
    let candidates: Vec<Vec<u32>> = (0..4)
        .map(|i| {
            if from_s1[i] {
                let pr = profile(&s1, &counts1, skeleton[i]);
                s2.iter()
                    .copied()
                    .filter(|&t| profile(&s2, &counts2, t) == pr)
                    .collect()
            } else {
                all_points.clone()
            }
        })
        .collect();

    for e in 0..f.r() {
        let source: Vec<[u32; 3]> = skeleton
            .iter()
            .map(|&p| {
                let t = plane.point_triple(p).unwrap();
                [f.frobenius_pow(t[0], e), f.frobenius_pow(t[1], e), f.frobenius_pow(t[2], e)]
            })
            .collect();
        let a_inv = match frame_matrix(&f, &source) {
            Some(a) => mat_inv(&f, &a),
            None => unreachable!("skeleton is in general position"),
        };

        let mut tuple = [0u32; 4];
        if let Some(c) = enumerate(
            plane,
            &f,
            &a_inv,
            e,
            &candidates,
            &mut tuple,
            0,
            &s1,
            &in_s2,
        ) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    plane: &Plane,
    f: &crate::field::FiniteField,
    a_inv: &[[u32; 3]; 3],
    e: u32,
    candidates: &[Vec<u32>],
    tuple: &mut [u32; 4],
    depth: usize,
    s1: &[u32],
    in_s2: &[bool],
) -> Option<Collineation> {
    if depth == 4 {
        let targets: Vec<[u32; 3]> =
            tuple.iter().map(|&p| plane.point_triple(p).unwrap()).collect();
        let b = frame_matrix(f, &targets)?;
        let m = mat_mul(f, &b, a_inv);
        if det(f, &m) == 0 {
            return None;
        }
        let c = Collineation { matrix: m, frob_exp: e };
        if s1.iter().all(|&p| in_s2[c.apply_point(plane, p) as usize]) {
            return Some(c);
        }
        return None;
    }
    'cand: for &t in &candidates[depth] {
        for prev in &tuple[..depth] {
            if *prev == t {
                continue 'cand;
            }
        }
        // keep the partial tuple in general position
        if depth >= 2 {
            for i in 0..depth {
                for j in (i + 1)..depth {
                    if plane.incident(t, plane.line_through(tuple[i], tuple[j])) {
                        continue 'cand;
                    }
                }
            }
        }
        tuple[depth] = t;
        if let Some(c) = enumerate(plane, f, a_inv, e, candidates, tuple, depth + 1, s1, in_s2) {
            return Some(c);
        }
    }
    None
}

/// The matrix sending the standard frame e1, e2, e3, (1,1,1) to the four
/// given points (projectively). `None` if the four are not in general
/// position.
fn frame_matrix(f: &crate::field::FiniteField, pts: &[[u32; 3]]) -> Option<[[u32; 3]; 3]> {
    let a = [
        [pts[0][0], pts[1][0], pts[2][0]],
        [pts[0][1], pts[1][1], pts[2][1]],
        [pts[0][2], pts[1][2], pts[2][2]],
    ];
    if det(f, &a) == 0 {
        return None;
    }
    let mu = mat_vec(f, &mat_inv(f, &a), pts[3]);
    if mu.iter().any(|&x| x == 0) {
        return None;
    }
    let mut out = a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = f.mul(out[i][j], mu[j]);
        }
    }
    Some(out)
}

fn extends_general_position(plane: &Plane, chosen: &[u32], p: u32) -> bool {
    if chosen.contains(&p) {
        return false;
    }
    for i in 0..chosen.len() {
        for j in (i + 1)..chosen.len() {
            if plane.incident(p, plane.line_through(chosen[i], chosen[j])) {
                return false;
            }
        }
    }
    true
}

fn spectrum(counts: &[u32]) -> BTreeMap<u32, u32> {
    let mut out = BTreeMap::new();
    for &c in counts {
        if c > 0 {
            *out.entry(c).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::plane::Plane;

    fn pg(p: u32, r: u32) -> Plane {
        Plane::build_pg2(FiniteField::new(p, r).unwrap())
    }

    /// The projective triangle of side (q+3)/2 (odd q): the three frame
    /// vertices plus {(c,0,1), (0,−c,1), (c,1,0)} for c a nonzero square.
    fn projective_triangle(pl: &Plane) -> Vec<u32> {
        let f = pl.field().unwrap();
        let mut pts = vec![
            pl.point_index([1, 0, 0]),
            pl.point_index([0, 1, 0]),
            pl.point_index([0, 0, 1]),
        ];
        for c in f.squares() {
            pts.push(pl.point_index([c, 0, 1]));
            pts.push(pl.point_index([0, f.neg(c), 1]));
            pts.push(pl.point_index([c, 1, 0]));
        }
        pts.sort_unstable();
        pts
    }

    fn apply_all(pl: &Plane, c: &Collineation, pts: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = pts.iter().map(|&p| c.apply_point(pl, p)).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn triangle_is_equivalent_to_its_collineation_image() {
        let pl = pg(5, 1);
        let f = pl.field().unwrap();
        let s1 = projective_triangle(&pl);
        let c = Collineation { matrix: [[2, 1, 0], [1, 0, 3], [0, 4, 2]], frob_exp: 0 };
        assert_ne!(super::det(f, &c.matrix), 0);
        let s2 = apply_all(&pl, &c, &s1);
        let found = are_equivalent(&pl, &s1, &s2).unwrap().expect("conjugates are equivalent");
        assert_eq!(apply_all(&pl, &found, &s1), s2);
    }

    #[test]
    fn spectra_mismatch_is_decided_without_search() {
        let pl = pg(5, 1);
        // 4 points in general position vs 4 points with 3 collinear
        let s1 = vec![
            pl.point_index([1, 0, 0]),
            pl.point_index([0, 1, 0]),
            pl.point_index([0, 0, 1]),
            pl.point_index([1, 1, 1]),
        ];
        let s2 = vec![
            pl.point_index([1, 0, 0]),
            pl.point_index([0, 1, 0]),
            pl.point_index([1, 1, 0]),
            pl.point_index([0, 0, 1]),
        ];
        assert!(are_equivalent(&pl, &s1, &s2).unwrap().is_none());
    }

    #[test]
    fn loaded_planes_are_unsupported() {
        let pl = pg(2, 1);
        let mut buf = Vec::new();
        pl.write_incidence(&mut buf).unwrap();
        let loaded = Plane::load(&buf[..]).unwrap();
        assert!(matches!(
            are_equivalent(&loaded, &[0, 1], &[0, 2]),
            Err(PlaneError::UnsupportedPlaneKind)
        ));
    }

    #[test]
    fn size_mismatch_is_not_equivalent() {
        let pl = pg(3, 1);
        assert!(are_equivalent(&pl, &[0, 1, 2], &[0, 1]).unwrap().is_none());
    }

    #[test]
    fn empty_sets_are_trivially_equivalent() {
        let pl = pg(3, 1);
        let c = are_equivalent(&pl, &[], &[]).unwrap().unwrap();
        assert_eq!(c, Collineation::identity());
    }

    #[test]
    fn frobenius_twist_is_found_in_pg2_9() {
        let pl = pg(3, 2);
        let f = pl.field().unwrap();
        let s1 = projective_triangle(&pl);
        let c = Collineation { matrix: [[1, 3, 0], [0, 1, 5], [2, 0, 1]], frob_exp: 1 };
        assert_ne!(super::det(f, &c.matrix), 0);
        let s2 = apply_all(&pl, &c, &s1);
        let found = are_equivalent(&pl, &s1, &s2).unwrap().expect("conjugate via PΓL");
        assert_eq!(apply_all(&pl, &found, &s1), s2);
    }

    /// Four collinear points have no frame inside the set; the filler slots
    /// must complete the frame. Cross-ratio decides equivalence, and for q=7
    /// the parameter sets {0,1,2,3} (cross-ratio 4/3 = 6, harmonic orbit
    /// {2,4,6}) and {0,1,2,4} (cross-ratio 5, orbit {3,5}) are inequivalent
    /// while {0,1,2,6} (cross-ratio 4) is harmonic again.
    #[test]
    fn collinear_quadruples_are_separated_by_cross_ratio() {
        let pl = pg(7, 1);
        let on_infinity = |x: u32| pl.point_index([x, 1, 0]);
        let a: Vec<u32> = [0, 1, 2, 3].map(on_infinity).to_vec();
        let b: Vec<u32> = [0, 1, 2, 4].map(on_infinity).to_vec();
        let c: Vec<u32> = [0, 1, 2, 6].map(on_infinity).to_vec();
        assert!(are_equivalent(&pl, &a, &b).unwrap().is_none());
        let found = are_equivalent(&pl, &a, &c).unwrap().expect("same cross-ratio orbit");
        let mut image: Vec<u32> = a.iter().map(|&p| found.apply_point(&pl, p)).collect();
        image.sort_unstable();
        let mut cs = c.clone();
        cs.sort_unstable();
        assert_eq!(image, cs);
    }

    #[test]
    fn equivalence_is_symmetric_on_samples() {
        let pl = pg(5, 1);
        let s1 = projective_triangle(&pl);
        let c = Collineation { matrix: [[1, 1, 0], [0, 1, 1], [1, 0, 1]], frob_exp: 0 };
        let f = pl.field().unwrap();
        assert_ne!(super::det(f, &c.matrix), 0);
        let s2 = apply_all(&pl, &c, &s1);
        assert!(are_equivalent(&pl, &s1, &s2).unwrap().is_some());
        assert!(are_equivalent(&pl, &s2, &s1).unwrap().is_some());
        assert!(are_equivalent(&pl, &s1, &s1).unwrap().is_some());
    }
}
