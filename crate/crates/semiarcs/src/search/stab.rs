//! The stabilizer of the anchor line, acting on its q+1 points.
//!
//! For a generated plane the collineations fixing a line ℓ induce, on the
//! points of ℓ, the full group PΓL(2,q) — order q(q²−1)·r.  We build that
//! action explicitly: conjugate the block matrices that fix the coordinate
//! line z=0 by a collineation carrying z=0 onto ℓ, and record what each
//! element does to the points of ℓ.  Every permutation produced this way
//! genuinely extends to a collineation of the plane (the extension is the
//! element itself), which is what makes orbit reduction of removed-point
//! sets sound: solutions for one representative transfer to the whole orbit.
//!
//! Loaded planes carry no coordinate group, so their stabilizer is taken to
//! be trivial and no reduction happens.

use crate::plane::{Collineation, Plane, PlaneKind};
use std::collections::HashMap;

/// The induced action of the anchor-line stabilizer on the line's points.
pub struct LineStabilizer {
    pub line: u32,
    /// Points of the anchor line, in plane order; permutations act on
    /// positions into this slice.
    pub line_points: Vec<u32>,
    /// Permutations of positions 0..=q.  Contains only the identity when the
    /// plane has no usable group.
    pub perms: Vec<Vec<u32>>,
    /// Ambient collineations realizing `perms`, index-aligned; present for
    /// generated planes.
    pub elements: Option<Vec<Collineation>>,
    /// Whether a nontrivial group was built.
    pub reduced: bool,
}

/// One orbit of t-subsets of the anchor line under the stabilizer: a
/// canonical representative and the orbit length.
#[derive(Debug, Clone)]
pub struct DOrbit {
    /// Sorted positions into `line_points`.
    pub rep_positions: Vec<u32>,
    /// Ambient point indices of the representative, sorted.
    pub removed: Vec<u32>,
    pub orbit_size: u64,
}

impl LineStabilizer {
    pub fn for_anchor(plane: &Plane, line: u32) -> LineStabilizer {
        let line_points = plane.points_of_line(line).to_vec();
        if plane.kind() != PlaneKind::GeneratedDesarguesian {
            let identity: Vec<u32> = (0..line_points.len() as u32).collect();
            return LineStabilizer {
                line,
                line_points,
                perms: vec![identity],
                elements: None,
                reduced: false,
            };
        }

        let f = plane.field().expect("generated plane has a field").clone();
        let q = f.q();

        // γ maps the coordinate line z=0 onto the anchor: its matrix columns
        // are two anchor points and one point off the anchor.
        let a = plane.point_triple(line_points[0]).unwrap();
        let b = plane.point_triple(line_points[1]).unwrap();
        let off = (0..plane.n_points())
            .find(|&p| !plane.incident(p, line))
            .expect("a projective plane has points off any line");
        let c = plane.point_triple(off).unwrap();
        let gamma = Collineation {
            matrix: [[a[0], b[0], c[0]], [a[1], b[1], c[1]], [a[2], b[2], c[2]]],
            frob_exp: 0,
        };
        let gamma_inv = gamma.inverse(&f);

        let position: HashMap<u32, u32> = line_points
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i as u32))
            .collect();

        // PGL(2,q) as 2×2 matrices with the first nonzero entry scaled to 1,
        // crossed with the Frobenius exponent; each block matrix fixes z=0.
        let mut perms = Vec::new();
        let mut elements = Vec::new();
        for m in pgl2_representatives(&f) {
            for e in 0..f.r() {
                let sigma = Collineation {
                    matrix: [[m[0], m[1], 0], [m[2], m[3], 0], [0, 0, 1]],
                    frob_exp: e,
                };
                let g = gamma_inv.then(&f, &sigma).then(&f, &gamma);
                let perm: Vec<u32> = line_points
                    .iter()
                    .map(|&p| position[&g.apply_point(plane, p)])
                    .collect();
                perms.push(perm);
                elements.push(g);
            }
        }
        debug_assert_eq!(
            perms.len() as u64,
            u64::from(q) * (u64::from(q) * u64::from(q) - 1) * u64::from(f.r())
        );

        LineStabilizer {
            line,
            line_points,
            perms,
            elements: Some(elements),
            reduced: true,
        }
    }

    pub fn order(&self) -> u64 {
        self.perms.len() as u64
    }

    /// Orbit representatives of the t-subsets of the anchor line.  The
    /// representative of an orbit is its least member as a position bitmask,
    /// and orbit sizes sum to C(q+1, t).
    pub fn d_orbits(&self, t: u32) -> Vec<DOrbit> {
        let n = self.line_points.len() as u32;
        let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        let mut seen: HashMap<u32, ()> = HashMap::new();
        let mut out = Vec::new();
        for mask in 0..=full {
            if mask.count_ones() != t || seen.contains_key(&mask) {
                continue;
            }
            // BFS closure of the orbit under the permutation action.
            let mut orbit = vec![mask];
            seen.insert(mask, ());
            let mut head = 0;
            while head < orbit.len() {
                let cur = orbit[head];
                head += 1;
                for perm in &self.perms {
                    let img = permute_mask(cur, perm);
                    if seen.insert(img, ()).is_none() {
                        orbit.push(img);
                    }
                }
            }
            out.push(self.orbit_from_mask(mask, orbit.len() as u64));
        }
        out
    }

    /// Every t-subset as its own unit (no reduction), for audit reruns.
    pub fn all_d(&self, t: u32) -> Vec<DOrbit> {
        let n = self.line_points.len() as u32;
        let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        (0..=full)
            .filter(|m| m.count_ones() == t)
            .map(|m| self.orbit_from_mask(m, 1))
            .collect()
    }

    fn orbit_from_mask(&self, mask: u32, orbit_size: u64) -> DOrbit {
        let rep_positions: Vec<u32> = (0..self.line_points.len() as u32)
            .filter(|i| mask & (1 << i) != 0)
            .collect();
        let mut removed: Vec<u32> = rep_positions
            .iter()
            .map(|&i| self.line_points[i as usize])
            .collect();
        removed.sort_unstable();
        DOrbit { rep_positions, removed, orbit_size }
    }
}

fn permute_mask(mask: u32, perm: &[u32]) -> u32 {
    let mut out = 0;
    for (i, &pi) in perm.iter().enumerate() {
        if mask & (1 << i) != 0 {
            out |= 1 << pi;
        }
    }
    out
}

/// All of PGL(2,q): invertible [[a,b],[c,d]] with the first nonzero entry
/// (in reading order) equal to 1.
fn pgl2_representatives(f: &crate::field::FiniteField) -> Vec<[u32; 4]> {
    let q = f.q();
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let det = f.add(f.mul(a, d), f.neg(f.mul(b, c)));
                    if det == 0 {
                        continue;
                    }
                    let first = [a, b, c, d].into_iter().find(|&x| x != 0).unwrap();
                    if first != 1 {
                        continue;
                    }
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    debug_assert_eq!(
        out.len() as u64,
        u64::from(q) * (u64::from(q) * u64::from(q) - 1)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use std::sync::Arc;

    fn pg(q: u32) -> Arc<Plane> {
        Arc::new(Plane::build_pg2(FiniteField::for_order(q).unwrap()))
    }

    #[test]
    fn stabilizer_order_matches_pgammal2() {
        for (q, r) in [(2u32, 1u64), (4, 2), (5, 1), (9, 2)] {
            let plane = pg(q);
            let stab = LineStabilizer::for_anchor(&plane, 0);
            let expected = u64::from(q) * (u64::from(q) * u64::from(q) - 1) * r;
            assert_eq!(stab.order(), expected, "q={q}");
            assert!(stab.reduced);
        }
    }

    #[test]
    fn permutations_are_distinct_and_fix_the_anchor() {
        let plane = pg(5);
        let stab = LineStabilizer::for_anchor(&plane, 0);
        let mut seen = std::collections::HashSet::new();
        for perm in &stab.perms {
            assert!(seen.insert(perm.clone()), "duplicate induced permutation");
        }
        // Each realizing collineation maps anchor points to anchor points.
        let els = stab.elements.as_ref().unwrap();
        for (g, perm) in els.iter().zip(&stab.perms) {
            for (i, &p) in stab.line_points.iter().enumerate() {
                let img = g.apply_point(&plane, p);
                assert_eq!(img, stab.line_points[perm[i] as usize]);
            }
        }
    }

    #[test]
    fn small_subsets_form_single_orbits() {
        // PΓL(2,q) is 3-transitive, so subsets of size ≤ 3 (and their
        // complements) form one orbit each.
        let plane = pg(7);
        let stab = LineStabilizer::for_anchor(&plane, 0);
        for t in [1u32, 2, 3, 5] {
            let orbits = stab.d_orbits(t);
            assert_eq!(orbits.len(), 1, "t={t}");
            let total: u64 = orbits.iter().map(|o| o.orbit_size).sum();
            assert_eq!(total, binomial(8, t as u64), "t={t}");
        }
        // 4-subsets of the 8-point line split by cross ratio: 70 = 42 + 28.
        let orbits = stab.d_orbits(4);
        assert_eq!(orbits.len(), 2);
        let mut sizes: Vec<u64> = orbits.iter().map(|o| o.orbit_size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![28, 42]);
    }

    #[test]
    fn orbit_sizes_always_sum_to_all_subsets() {
        for q in [2u32, 3, 4, 8, 9] {
            let plane = pg(q);
            let stab = LineStabilizer::for_anchor(&plane, 0);
            for t in 1..=q {
                let total: u64 = stab.d_orbits(t).iter().map(|o| o.orbit_size).sum();
                assert_eq!(total, binomial(u64::from(q) + 1, u64::from(t)), "q={q} t={t}");
            }
        }
    }

    #[test]
    fn unreduced_units_enumerate_every_subset() {
        let plane = pg(3);
        let stab = LineStabilizer::for_anchor(&plane, 0);
        let all = stab.all_d(2);
        assert_eq!(all.len() as u64, binomial(4, 2));
        assert!(all.iter().all(|o| o.orbit_size == 1));
    }

    #[test]
    fn loaded_planes_get_the_trivial_stabilizer() {
        let generated = pg(3);
        let mut body = String::from("order 3\n");
        for l in 0..generated.n_lines() {
            let row: Vec<String> = generated
                .points_of_line(l)
                .iter()
                .map(|p| p.to_string())
                .collect();
            body.push_str(&row.join(" "));
            body.push('\n');
        }
        let loaded = Plane::load(std::io::Cursor::new(body)).unwrap();
        let stab = LineStabilizer::for_anchor(&loaded, 0);
        assert!(!stab.reduced);
        assert_eq!(stab.order(), 1);
        assert_eq!(stab.d_orbits(2).len() as u64, binomial(4, 2));
    }

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut out = 1u64;
        for i in 0..k {
            out = out * (n - i) / (i + 1);
        }
        out
    }
}
