//! Acceptance gate for the shipped claims.  One test per criterion; each
//! finishes by printing a single `criterion N: PASS — …` line (run with
//! `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Exhaustive censuses are computed once into a shared on-disk store and
//! reused by every criterion that needs them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiarcs::{
    base_secant_violations, build_group, census, centres, check_counting_identities,
    classify_centres, documented_grid, enumerate_small_semiarcs,
    enumerate_small_semiarcs_with_sets, group_centre_set, perspective_sets_from_orbits,
    projective_triangle, search_long_secant, verify_theorem, CaseWitness, CertStore,
    FiniteField, PerspectiveFrame, PerspectiveGroup, Plane, PointSet, SearchCertificate,
    SearchMode, TheoremId, TypeClaim,
};
use tempfile::TempDir;

fn plane_of(q: u32) -> Arc<Plane> {
    Arc::new(Plane::build_pg2(FiniteField::for_order(q).expect("prime power")))
}

/// Store shared by all criteria, so a census is computed exactly once even
/// though several criteria consume it.
fn store() -> &'static CertStore {
    static STORE: OnceLock<(TempDir, CertStore)> = OnceLock::new();
    let (_dir, store) = STORE.get_or_init(|| {
        let dir = TempDir::new().expect("create temp store");
        let store = CertStore::open(dir.path()).expect("open store");
        (dir, store)
    });
    store
}

/// Complete class-mode census of PG(2,q), q ∈ {5, 7}: every t from 1 to q−2,
/// witnesses retained and bucketed into projective-equivalence classes.
fn census_of(q: u32) -> &'static [SearchCertificate] {
    static C5: OnceLock<Vec<SearchCertificate>> = OnceLock::new();
    static C7: OnceLock<Vec<SearchCertificate>> = OnceLock::new();
    let cell = match q {
        5 => &C5,
        7 => &C7,
        _ => panic!("census_of is only provisioned for q ∈ {{5, 7}}"),
    };
    cell.get_or_init(|| {
        census(&plane_of(q), None, SearchMode::Classes, Some(store())).expect("census")
    })
}

/// The fifteen prime powers q ≤ 27 as (p, r).
const ORDERS: [(u32, u32); 15] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (13, 1),
    (2, 4),
    (17, 1),
    (19, 1),
    (23, 1),
    (5, 2),
    (3, 3),
];

/// Runs `f` on every admissible (n, d, h) tuple over every order in
/// [`ORDERS`]: d | r, n | p^d−1, and B the GF(p^d)-span of {1, x, …,
/// x^{h/d−1}} (the empty basis giving B = {0}).
fn for_each_admissible(mut f: impl FnMut(&FiniteField, &Arc<Plane>, &PerspectiveFrame, &PerspectiveGroup)) {
    for (p, r) in ORDERS {
        let field = FiniteField::new(p, r).unwrap();
        let plane = Arc::new(Plane::build_pg2(field.clone()));
        let frame = PerspectiveFrame::pinned(&plane).unwrap();
        for d in (1..=r).filter(|d| r % d == 0) {
            let pd1 = p.pow(d) - 1;
            for h1 in 0..=(r / d) {
                let basis: Vec<u32> = (0..h1).map(|k| p.pow(k)).collect();
                for n in (1..=pd1).filter(|n| pd1 % n == 0) {
                    let g = build_group(&field, n, d, &basis).unwrap();
                    f(&field, &plane, &frame, &g);
                }
            }
        }
    }
}

#[test]
fn criterion_1_projective_triangles() {
    let t0 = Instant::now();
    for q in [5u32, 7, 9, 11, 13] {
        let f = FiniteField::for_order(q).unwrap();
        let c = projective_triangle(&f).unwrap();
        let t = (q - 1) / 2;
        assert_eq!(c.verified_t, t, "q={q}: tangent count");
        assert_eq!(c.size(), 3 * (q + 1) / 2, "q={q}: size");

        let long = c.points.long_secants(t).unwrap();
        assert_eq!(long.len(), 3, "q={q}: three long secants");
        for &l in &long {
            let on = c
                .points
                .points()
                .iter()
                .filter(|&&p| c.points.plane().incident(p, l))
                .count() as u32;
            assert_eq!(on, q + 1 - t, "q={q}: long secant size");
        }

        let redei = c.points.redei_analysis();
        assert!(redei.is_blocking && redei.is_nontrivial, "q={q}: blocking");
        assert_eq!(redei.redei_lines, long, "q={q}: the long secants are the Rédei lines");
    }
    println!(
        "criterion 1: PASS — projective triangles for q ∈ {{5,7,9,11,13}} are (q−1)/2-semiarcs \
         of size 3(q+1)/2 whose three long secants are the Rédei lines of a non-trivial \
         blocking set ({:.2}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_2_small_t_emptiness() {
    let t0 = Instant::now();
    let report = verify_theorem(TheoremId::I0, &[2, 3, 4, 5, 7, 8], None).unwrap();
    assert!(report.pass, "counterexample: {:?}", report.counterexample);

    // The searches actually performed are exactly the t below the bound,
    // plus the two exceptional small orders where witnesses must exist.
    let expected_keys: BTreeSet<&str> = [
        "q2-t1-solutions",
        "q3-t1-solutions",
        "q4-t1-solutions",
        "q5-t1-solutions",
        "q7-t1-solutions",
        "q7-t2-solutions",
        "q8-t1-solutions",
        "q8-t2-solutions",
    ]
    .into_iter()
    .collect();
    let got: BTreeSet<&str> = report.stats.keys().map(String::as_str).collect();
    assert_eq!(got, expected_keys, "checked t-sets per order");

    assert_eq!(report.stats["q2-t1-solutions"], 12, "q=2, t=1 witness count");
    assert!(report.stats["q3-t1-solutions"] > 0, "q=3, t=1 realizable");
    for key in ["q4-t1", "q5-t1", "q7-t1", "q7-t2", "q8-t1", "q8-t2"] {
        assert_eq!(report.stats[&format!("{key}-solutions")], 0, "{key} must be empty");
    }
    println!(
        "criterion 2: PASS — complete anchored searches are empty for every t < √(q−1) at \
         q ∈ {{4,5,7,8}} (t ∈ {{1}},{{1}},{{1,2}},{{1,2}}) and non-empty for t = 1 at \
         q ∈ {{2,3}} ({} and {} solutions) ({:.2}s)",
        report.stats["q2-t1-solutions"],
        report.stats["q3-t1-solutions"],
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_3_census_lower_bound_and_equality() {
    let t0 = Instant::now();
    let mut nonempty: BTreeMap<String, u64> = BTreeMap::new();
    for q in [5u32, 7] {
        for cert in census_of(q) {
            assert!(cert.complete, "q={q}, t={}: census incomplete", cert.t);
            if cert.solutions_total > 0 {
                assert!(
                    2 * cert.t >= q - 1,
                    "q={q}: a {}-semiarc with a long secant violates the lower bound",
                    cert.t
                );
                nonempty.insert(format!("q{q}-t{}", cert.t), cert.solutions_total);
            }
        }
    }
    // Below the bound nothing exists; at the bound the census is non-empty.
    assert!(nonempty.contains_key("q5-t2"), "PG(2,5) equality witnesses");
    assert!(nonempty.contains_key("q7-t3"), "PG(2,7) equality witnesses");
    assert!(!nonempty.contains_key("q5-t1"));
    assert!(!nonempty.contains_key("q7-t1"));
    assert!(!nonempty.contains_key("q7-t2"));

    // Equality: every witness is a Rédei-type blocking set of size 3(q+1)/2
    // whose long secants are its Rédei lines …
    let bound = verify_theorem(TheoremId::Ii1, &[5, 7], Some(store())).unwrap();
    assert!(bound.pass, "counterexample: {:?}", bound.counterexample);
    // … and every equality class is the projective triangle.
    let classes = verify_theorem(TheoremId::CorollaryTriangle, &[5, 7], Some(store())).unwrap();
    assert!(classes.pass, "counterexample: {:?}", classes.counterexample);

    println!(
        "criterion 3: PASS — complete censuses of PG(2,5) and PG(2,7): every t-semiarc with a \
         long secant has t ≥ (q−1)/2 (non-empty cells: {:?}), and every equality witness is a \
         size-3(q+1)/2 Rédei blocking set projectively equivalent to the triangle ({:.2}s)",
        nonempty,
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_4_small_semiarc_censuses() {
    let t0 = Instant::now();
    // Ordered quadruples in general position, divided by |PGL(2)|-fold
    // overcount per unordered quadrangle.
    let quadrangles =
        |q: u64| (q * q + q + 1) * (q * q + q) * q * q * (q - 1) * (q - 1) / 24;
    let golden_fano: BTreeMap<u32, u64> = [(3, 0), (4, 360), (5, 0)].into_iter().collect();

    let mut summary = Vec::new();
    for q in [3u32, 4, 5] {
        let censusq = enumerate_small_semiarcs(&plane_of(q));
        assert!(censusq.unmatched.is_empty(), "q={q}: unmatched shapes {:?}", censusq.unmatched);
        let quad = censusq.counts.get("size4-quadrangle").copied().unwrap_or(0);
        let quadrilateral = censusq.counts.get("size6-quadrilateral").copied().unwrap_or(0);
        let fano = censusq.counts.get("size7-fano").copied().unwrap_or(0);
        assert_eq!(quad, quadrangles(u64::from(q)), "q={q}: quadrangle count");
        assert_eq!(quadrilateral, quad, "q={q}: duality pairs the two counts");
        assert_eq!(fano, golden_fano[&q], "q={q}: Fano count");
        assert_eq!(censusq.total, quad + quadrilateral + fano, "q={q}: no other shape");
        summary.push(format!("q={q}: {quad}+{quadrilateral}+{fano}"));
    }
    println!(
        "criterion 4: PASS — every (q−2)-semiarc at q ∈ {{3,4,5}} is a quadrangle, a \
         quadrilateral vertex set, or (q = 4 only) a Fano subplane \
         [quadrangles+quadrilaterals+Fano: {}] ({:.2}s)",
        summary.join(", "),
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_5_perspective_point_sets() {
    let t0 = Instant::now();
    let mut tuples = 0u64;
    let mut case_hist: BTreeMap<u8, u64> = BTreeMap::new();

    for_each_admissible(|field, _plane, frame, g| {
        let (p, r) = (field.p(), field.r());
        let (n, d, h, ph, m) = (g.n(), g.d(), g.h(), g.base_order(), g.m());

        // Orbit structure: base orbit B, then m regular orbits of size n·p^h
        // partitioning the rest of the field.
        assert_eq!(g.orbits()[0], g.b().elements, "base orbit is B");
        for orb in &g.orbits()[1..] {
            assert_eq!(orb.len() as u32, n * ph, "regular orbit size");
        }
        assert_eq!(g.orbits().len() as u32, m + 1, "orbit count");
        assert_eq!(m, (p.pow(r - h) - 1) / n, "m formula");
        let mut all: Vec<u32> = g.orbits().iter().flatten().copied().collect();
        all.sort_unstable();
        assert!(all.iter().copied().eq(0..field.q()), "orbits partition GF(q)");

        // The centre set has exact group size and classifies into one of the
        // five shapes — the one its parameters predict.
        let cs = group_centre_set(frame, g).unwrap();
        assert_eq!(cs.len() as u32, n * ph, "|U| = n·p^h");
        let cls = classify_centres(&cs, g).unwrap();
        assert_eq!(
            (cls.n, cls.d, cls.h, cls.m, cls.size),
            (n, d, h, m, n * ph),
            "classification echoes the parameters"
        );
        let canonical = if h >= 1 && r % h == 0 {
            Some(field.subfield_elements(h).unwrap())
        } else {
            None
        };
        let is_subfield_pair =
            h >= 1 && n + 1 == ph && canonical.as_deref() == Some(g.b().elements.as_slice());
        let expected = if n * ph == 1 {
            1
        } else if is_subfield_pair {
            4
        } else if n == 1 {
            2
        } else if ph == 1 {
            3
        } else {
            5
        };
        assert_eq!(cls.case, expected, "q={}, n={n}, d={d}, h={h}", field.q());
        match &cls.witness {
            CaseWitness::Subplane { points } => {
                assert_eq!(points.len() as u32, ph * ph + ph + 1, "full subplane of order p^h");
            }
            CaseWitness::HeavyPencil { lines } => {
                assert_eq!(lines.len() as u32, n, "n heavy lines through the vertex");
            }
            _ => {}
        }
        if cls.case == 5 {
            let allowed: BTreeSet<u32> = [0, 1, n, ph].into_iter().collect();
            assert!(
                cls.profile.keys().all(|k| allowed.contains(k)),
                "case 5 intersection numbers {:?} ⊄ {{0,1,n,p^h}}",
                cls.profile
            );
        }

        // Every ≥2-secant of U missing the vertex meets both leg copies of B.
        assert!(
            base_secant_violations(frame, g).unwrap().is_empty(),
            "base-secant property fails at q={}, n={n}, d={d}, h={h}",
            field.q()
        );

        // Realized orbit selections: the brute-force centre oracle recovers
        // at least the group's centre set.
        let mut selections: Vec<(Vec<u32>, bool)> = vec![(Vec::new(), true)];
        if m >= 1 {
            selections.push((vec![1], false));
            selections.push(((1..=m.min(2)).collect(), true));
        }
        for (sel, include_base) in selections {
            let (x1, x2) = perspective_sets_from_orbits(frame, g, &sel, include_base).unwrap();
            let oracle = centres(frame, &x1, &x2).unwrap();
            for &c in cs.points() {
                assert!(
                    oracle.contains(c),
                    "centre {c} missing for selection {sel:?} (base: {include_base}) at q={}",
                    field.q()
                );
            }
        }

        tuples += 1;
        *case_hist.entry(cls.case).or_insert(0) += 1;
    });

    for case in 1..=5u8 {
        assert!(case_hist.contains_key(&case), "case {case} never exercised");
    }
    println!(
        "criterion 5: PASS — {tuples} admissible (n,d,h) tuples across the 15 orders q ≤ 27: \
         orbit structure, |U| = n·p^h, case labels {:?}, base-secant property, and brute-force \
         centre containment for realized orbit selections ({:.2}s)",
        case_hist,
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_6_documented_constructions() {
    let t0 = Instant::now();
    let grid = documented_grid();
    assert!(grid.len() >= 100, "grid unexpectedly small: {}", grid.len());
    let mut by_type: BTreeMap<String, u64> = BTreeMap::new();
    for spec in &grid {
        let c = spec
            .build()
            .unwrap_or_else(|e| panic!("construction failed: {e} ({spec:?})"));
        assert_eq!(c.verified_t, spec.claimed_t, "classified t matches the claim");

        // Re-derive the configuration evidence independently of the builder.
        let vt = c.points.detect_vt(c.verified_t).unwrap();
        match c.type_claim {
            TypeClaim::VertexOutside => {
                assert!(vt.iter().any(|w| !w.vertex_in_s), "claimed V∘ configuration missing")
            }
            TypeClaim::VertexInside => {
                assert!(vt.iter().any(|w| w.vertex_in_s), "claimed V• configuration missing")
            }
            TypeClaim::NoneContained => {
                assert!(vt.is_empty(), "claimed configuration-free, found {:?}", vt.first())
            }
            TypeClaim::NoVertexOutside => {
                assert!(vt.iter().all(|w| w.vertex_in_s), "found a V∘ configuration")
            }
        }
        *by_type.entry(format!("{:?}", c.type_claim)).or_insert(0) += 1;
    }
    println!(
        "criterion 6: PASS — all {} documented constructions (q ≤ 16) build, classify at the \
         claimed t, and exhibit the claimed configuration type {:?} ({:.2}s)",
        grid.len(),
        by_type,
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_7_line_count_bound() {
    let t0 = Instant::now();
    const TRIALS: u32 = 10_000;
    for q in [4u32, 5, 7, 8, 9] {
        let plane = plane_of(q);
        let np = plane.n_points();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE55 + u64::from(q));
        for _ in 0..TRIALS {
            let size = rng.gen_range(1..=(2 * q) as usize);
            let picks = rand::seq::index::sample(&mut rng, np as usize, size);
            let points: Vec<u32> = picks.iter().map(|i| i as u32).collect();
            let set = PointSet::new(Arc::clone(&plane), points).unwrap();
            let p = loop {
                let cand = rng.gen_range(0..np);
                if !set.contains(cand) {
                    break cand;
                }
            };
            let b = set.line_meeting_bound(p).unwrap();
            assert!(
                b.holds && u64::from(b.lines_meeting) <= b.bound,
                "q={q}: bound violated for |U|={size}, r={}",
                b.r
            );
        }

        // Equality families: a single point (every line through it counts)
        // and a full line (every line of the plane meets it).
        let single = PointSet::new(Arc::clone(&plane), [0u32]).unwrap();
        let p = (1..np).find(|&p| !single.contains(p)).unwrap();
        let b = single.line_meeting_bound(p).unwrap();
        assert_eq!(u64::from(b.lines_meeting), b.bound, "q={q}: singleton attains the bound");
        assert_eq!(b.bound, u64::from(q) + 1);

        let line0: Vec<u32> = plane.points_of_line(0).to_vec();
        let full = PointSet::new(Arc::clone(&plane), line0).unwrap();
        let p = (0..np).find(|&p| !full.contains(p)).unwrap();
        let b = full.line_meeting_bound(p).unwrap();
        assert_eq!(u64::from(b.lines_meeting), b.bound, "q={q}: full line attains the bound");
        assert_eq!(b.bound, u64::from(q) * u64::from(q) + u64::from(q) + 1);
    }
    println!(
        "criterion 7: PASS — the line-count bound holds on {TRIALS} seeded-random (U, P) pairs \
         for each q ∈ {{4,5,7,8,9}} and is attained exactly by singletons and full lines \
         ({:.2}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_8_counting_identities_everywhere() {
    let t0 = Instant::now();
    let mut checked = 0u64;
    let mut check = |set: &PointSet, t: u32| {
        if let Err(e) = check_counting_identities(set, t) {
            panic!("identity failure on {:?} (t={t}): {e}", set.points());
        }
        checked += 1;
    };

    // Criterion 1: the triangles.
    for q in [5u32, 7, 9, 11, 13] {
        let c = projective_triangle(&FiniteField::for_order(q).unwrap()).unwrap();
        check(&c.points, c.verified_t);
    }
    // Criterion 2: the non-empty exceptional searches.
    for q in [2u32, 3] {
        let plane = plane_of(q);
        let cert = search_long_secant(&plane, 1, SearchMode::Witnesses).unwrap();
        assert!(cert.complete && !cert.witnesses.is_empty());
        for w in &cert.witnesses {
            let set = PointSet::new(Arc::clone(&plane), w.points.iter().copied()).unwrap();
            check(&set, 1);
        }
    }
    // Criterion 3: every census witness at q ∈ {5, 7}.
    for q in [5u32, 7] {
        let plane = plane_of(q);
        for cert in census_of(q) {
            for w in &cert.witnesses {
                let set = PointSet::new(Arc::clone(&plane), w.points.iter().copied()).unwrap();
                check(&set, cert.t);
            }
        }
    }
    // Criterion 4: every (q−2)-semiarc found at q ∈ {3, 4, 5}.
    for q in [3u32, 4, 5] {
        let plane = plane_of(q);
        let (_, sets) = enumerate_small_semiarcs_with_sets(&plane);
        for pts in sets {
            let set = PointSet::new(Arc::clone(&plane), pts).unwrap();
            check(&set, q - 2);
        }
    }
    // Criterion 5: centre-set line profiles double-count correctly.
    let mut profiles = 0u64;
    for_each_admissible(|field, _plane, frame, g| {
        let cs = group_centre_set(frame, g).unwrap();
        let q = u64::from(field.q());
        let u = cs.len() as u64;
        let total: u64 = cs.profile().iter().map(|(&c, &l)| u64::from(c) * u64::from(l)).sum();
        let pairs: u64 = cs
            .profile()
            .iter()
            .map(|(&c, &l)| u64::from(c) * u64::from(c.max(1) - 1) * u64::from(l))
            .sum();
        assert_eq!(total, u * (q + 1), "Σ|ℓ∩U| over lines");
        assert_eq!(pairs, u * (u - 1), "Σ|ℓ∩U|(|ℓ∩U|−1) over lines");
        profiles += 1;
    });
    // Criterion 6: every documented construction.
    for spec in documented_grid() {
        let c = spec.build().unwrap();
        check(&c.points, c.verified_t);
    }

    println!(
        "criterion 8: PASS — double-count and bound identities hold on {checked} semiarcs and \
         {profiles} centre-set profiles drawn from criteria 1–6 ({:.2}s)",
        t0.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_9_scope_note_in_readme() {
    let readme = include_str!("../../../README.md");
    assert!(
        readme.contains("not desk-reproducible"),
        "README must state which published claims are beyond desk-scale verification"
    );
    println!(
        "criterion 9: PASS — README documents the desk-scale reproducibility boundary \
         (square orders beyond 9 and general-q statements)"
    );
}
