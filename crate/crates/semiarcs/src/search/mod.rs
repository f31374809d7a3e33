//! Exhaustive search for t-semiarcs having a longest-possible secant.
//!
//! A line meets a t-semiarc in at most q+1−t points, so the interesting
//! extremal objects are semiarcs with a (q+1−t)-secant.  The search fixes an
//! anchor line ℓ (always the plane's first line), picks the t points of ℓ
//! left out of S, and extends S off the anchor.  Writing D for the t removed
//! anchor points, S₀ = ℓ∖D, and U = S∖ℓ, the set S = S₀ ∪ U is a t-semiarc
//! with ℓ as a (q+1−t)-secant **iff**
//!
//!  1. every line whose anchor point lies in D meets U in at most one point
//!     (so the t lines joining u ∈ U to D are precisely the t tangents at u),
//!     and
//!  2. through every point of S₀, exactly q−t of its q non-anchor lines meet
//!     U (leaving exactly t tangents there).
//!
//! Both directions are immediate: a non-anchor line through P ∈ S₀ meets S
//! beyond P only inside U, and every line through u ∈ U meets the anchor in
//! exactly one point, which is either in S₀ (a secant) or in D (a tangent
//! candidate).  Conditions 1–2 also force q−t ≤ |U| ≤ q.
//!
//! Symmetry is reduced only at the choice of D: removed-point sets are
//! enumerated up to the stabilizer of the anchor line (see [`stab`]), whose
//! elements extend to collineations of the plane, so solution counts
//! transfer along each orbit.  Class counting under the full collineation
//! group is a separate post-pass over the recorded witnesses.
//!
//! Every search emits a [`SearchCertificate`]: the exact units processed,
//! per-unit solution counts, the witness list (or a truncated sample), and a
//! completeness flag.  Certificates replay: rerunning with the same inputs
//! reproduces the counts byte for byte (wall time is stored outside the
//! hashed payload by the certificate store).

pub mod stab;
pub mod theorems;

use crate::cert::{plane_label, CertError, CertStore};
use crate::plane::{are_equivalent, Plane, PlaneError, PlaneKind};
use crate::semiarc::{PointSet, SemiarcError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stab::{DOrbit, LineStabilizer};
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("t must satisfy 1 ≤ t ≤ q−1, got t={t} for q={q}")]
    InvalidT { t: u32, q: u32 },
    #[error("the exhaustive no-prune audit handles at most 24 off-anchor points, this plane has {0}")]
    BruteTooLarge(u32),
    #[error("resume state does not match this search: {0}")]
    ResumeMismatch(String),
    #[error("census certificate for {plane} at t={t} is incomplete")]
    CensusIncomplete { plane: String, t: u32 },
    #[error("recorded witness failed verification: {0}")]
    VerifyFailed(String),
    #[error(transparent)]
    Semiarc(#[from] SemiarcError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Construction(#[from] crate::constructions::ConstructionError),
}

/// What a search keeps beyond exact counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Counts only.
    Count,
    /// Counts plus the witness sets.
    Witnesses,
    /// Witnesses bucketed into equivalence classes under the full
    /// collineation group.
    Classes,
}

impl std::str::FromStr for SearchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "count" => Ok(SearchMode::Count),
            "witnesses" => Ok(SearchMode::Witnesses),
            "classes" => Ok(SearchMode::Classes),
            other => Err(format!("unknown mode {other:?}: expected count, witnesses or classes")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Feasibility pruning during extension.  Disabling switches to a plain
    /// bitmask sweep over all off-anchor subsets (small planes only), which
    /// serves as the independent audit of the pruned search.
    pub prune: bool,
    /// Enumerate removed-point sets up to the anchor-line stabilizer.  When
    /// disabled every t-subset becomes its own unit.
    pub reduce: bool,
    /// Keep at most this many witnesses in the certificate (counts stay
    /// exact).  Ignored in classes mode, which needs the full list.
    pub witness_cap: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { mode: SearchMode::Witnesses, prune: true, reduce: true, witness_cap: None }
    }
}

/// One recorded solution: the full point set and the anchor points removed
/// from S (sorted ambient indices).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<u32>,
    pub removed: Vec<u32>,
}

/// One unit of work: a removed-point set (an orbit representative when
/// reduction is on) together with its orbit size and solution count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchUnit {
    pub removed: Vec<u32>,
    pub orbit_size: u64,
    pub solutions: u64,
    pub done: bool,
}

/// One equivalence class of witnesses under the collineation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessClass {
    /// Index of the class representative in `witnesses`.
    pub rep: usize,
    pub size: u64,
}

/// Complete, replayable record of one search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub plane: String,
    pub q: u32,
    pub t: u32,
    pub anchor_line: u32,
    /// q+1−t, the secant length every witness realizes on the anchor.
    pub long_secant_size: u32,
    pub mode: SearchMode,
    /// Names of the rules the run was allowed to use.
    pub pruning: Vec<String>,
    pub stabilizer_reduced: bool,
    pub stabilizer_order: u64,
    pub units: Vec<SearchUnit>,
    /// Solutions summed over units: the count up to the anchor-line
    /// stabilizer when reduction is on.
    pub solutions_mod_stabilizer: u64,
    /// Solutions summed with orbit multiplicity: the count over every choice
    /// of removed points on the anchor.
    pub solutions_total: u64,
    pub witnesses: Vec<Witness>,
    pub witnesses_truncated: bool,
    /// Present in classes mode.
    pub classes: Option<Vec<WitnessClass>>,
    pub complete: bool,
    pub wall_time_ms: u64,
}

impl SearchCertificate {
    /// Store label for this search: `<plane label>-t<t>`.
    pub fn label(&self) -> String {
        format!("{}-t{}", plane_label(&self.plane), self.t)
    }

    pub fn class_count(&self) -> Option<usize> {
        self.classes.as_ref().map(|c| c.len())
    }
}

/// Reference string for a plane we can rebuild (`pg:q`) or merely describe.
pub fn derived_plane_ref(plane: &Plane) -> String {
    match plane.kind() {
        PlaneKind::GeneratedDesarguesian => format!("pg:{}", plane.q()),
        PlaneKind::Loaded => format!("loaded:q{}", plane.q()),
    }
}

/// Searches for all t-semiarcs with the anchor (first) line as a
/// (q+1−t)-secant, with default options: pruning and stabilizer reduction
/// on, full witness retention.
pub fn search_long_secant(
    plane: &Arc<Plane>,
    t: u32,
    mode: SearchMode,
) -> Result<SearchCertificate, SearchError> {
    run_search(
        plane,
        None,
        t,
        &SearchOptions { mode, ..SearchOptions::default() },
        None,
        &mut |_| {},
    )
}

/// Shared geometry of one (plane, t) search, independent of the removed set.
struct Shared<'p> {
    plane: &'p Arc<Plane>,
    q: u32,
    t: u32,
    anchor: u32,
    /// Ambient indices of the q² points off the anchor, ascending.
    v_points: Vec<u32>,
    /// Per off-anchor point: its q+1 lines.
    v_lines: Vec<Vec<u32>>,
    /// Per line: greatest off-anchor point index on it, or -1.
    line_last: Vec<i64>,
}

impl<'p> Shared<'p> {
    fn build(plane: &'p Arc<Plane>, t: u32, anchor: u32) -> Shared<'p> {
        let q = plane.q();
        let v_points: Vec<u32> =
            (0..plane.n_points()).filter(|&p| !plane.incident(p, anchor)).collect();
        let v_lines: Vec<Vec<u32>> =
            v_points.iter().map(|&p| plane.lines_of_point(p).to_vec()).collect();
        let mut line_last = vec![-1i64; plane.n_lines() as usize];
        for (vi, lines) in v_lines.iter().enumerate() {
            for &l in lines {
                line_last[l as usize] = vi as i64;
            }
        }
        Shared { plane, q, t, anchor, v_points, v_lines, line_last }
    }
}

/// Data of one unit: which lines are footed in the removed set, and the
/// slot index of the anchor point for lines footed in S₀.
struct Unit {
    removed: Vec<u32>,
    d_line: Vec<bool>,
    slot_of_line: Vec<i32>,
    /// Lines of each S₀ point other than the anchor, per slot.
    slot_lines: Vec<Vec<u32>>,
    n_slots: usize,
    /// Lines through each S₀ point that must meet U: q−t.
    need: u16,
}

impl Unit {
    fn build(shared: &Shared, removed: &[u32]) -> Unit {
        let n_lines = shared.plane.n_lines() as usize;
        let mut d_line = vec![false; n_lines];
        let mut slot_of_line = vec![-1i32; n_lines];
        let mut slot_lines = Vec::new();
        let is_removed = |p: u32| removed.binary_search(&p).is_ok();
        for &a in shared.plane.points_of_line(shared.anchor) {
            let lines: Vec<u32> = shared
                .plane
                .lines_of_point(a)
                .iter()
                .copied()
                .filter(|&l| l != shared.anchor)
                .collect();
            if is_removed(a) {
                for &l in &lines {
                    d_line[l as usize] = true;
                }
            } else {
                let slot = slot_lines.len() as i32;
                for &l in &lines {
                    slot_of_line[l as usize] = slot;
                }
                slot_lines.push(lines);
            }
        }
        let n_slots = slot_lines.len();
        Unit {
            removed: removed.to_vec(),
            d_line,
            slot_of_line,
            slot_lines,
            n_slots,
            need: (shared.q - shared.t) as u16,
        }
    }
}

/// Mutable per-branch search state.
struct State {
    occ: Vec<u16>,
    met: Vec<u16>,
    slots_ok: usize,
    chosen: Vec<u32>,
}

impl State {
    fn fresh(shared: &Shared, unit: &Unit) -> State {
        State {
            occ: vec![0; shared.plane.n_lines() as usize],
            met: vec![0; unit.n_slots],
            slots_ok: 0,
            chosen: Vec::with_capacity(shared.q as usize),
        }
    }

    /// Whether `vi` can join U: its removed-footed lines are unoccupied and
    /// it opens no S₀ pencil line beyond the q−t budget.
    fn can_add(&self, shared: &Shared, unit: &Unit, vi: usize) -> bool {
        for &l in &shared.v_lines[vi] {
            let li = l as usize;
            if self.occ[li] == 0 {
                let slot = unit.slot_of_line[li];
                if slot >= 0 && self.met[slot as usize] == unit.need {
                    return false;
                }
            } else if unit.d_line[li] {
                return false;
            }
        }
        true
    }

    fn add(&mut self, shared: &Shared, unit: &Unit, vi: usize) {
        for &l in &shared.v_lines[vi] {
            let li = l as usize;
            self.occ[li] += 1;
            if self.occ[li] == 1 {
                let slot = unit.slot_of_line[li];
                if slot >= 0 {
                    let m = &mut self.met[slot as usize];
                    *m += 1;
                    if *m == unit.need {
                        self.slots_ok += 1;
                    }
                }
            }
        }
        self.chosen.push(vi as u32);
    }

    fn remove(&mut self, shared: &Shared, unit: &Unit, vi: usize) {
        for &l in &shared.v_lines[vi] {
            let li = l as usize;
            self.occ[li] -= 1;
            if self.occ[li] == 0 {
                let slot = unit.slot_of_line[li];
                if slot >= 0 {
                    let m = &mut self.met[slot as usize];
                    if *m == unit.need {
                        self.slots_ok -= 1;
                    }
                    *m -= 1;
                }
            }
        }
        self.chosen.pop();
    }

    /// Every slot must still be able to reach q−t meeting lines using only
    /// lines that are unoccupied and carry a candidate at or past `cursor`.
    fn demands_satisfiable(&self, shared: &Shared, unit: &Unit, cursor: usize) -> bool {
        for (slot, lines) in unit.slot_lines.iter().enumerate() {
            let mut avail = self.met[slot];
            if avail >= unit.need {
                continue;
            }
            for &l in lines {
                let li = l as usize;
                if self.occ[li] == 0 && shared.line_last[li] >= cursor as i64 {
                    avail += 1;
                    if avail >= unit.need {
                        break;
                    }
                }
            }
            if avail < unit.need {
                return false;
            }
        }
        true
    }
}

struct BranchResult {
    solutions: u64,
    witnesses: Vec<Witness>,
}

fn solve_unit(
    shared: &Shared,
    unit: &Unit,
    options: &SearchOptions,
) -> Result<BranchResult, SearchError> {
    if !options.prune {
        return brute_unit(shared, unit, options);
    }
    let keep = options.mode != SearchMode::Count;
    let v_len = shared.v_points.len();
    let branches: Vec<BranchResult> = (0..v_len)
        .into_par_iter()
        .map(|vi0| {
            let mut st = State::fresh(shared, unit);
            let mut out = BranchResult { solutions: 0, witnesses: Vec::new() };
            if st.can_add(shared, unit, vi0) {
                st.add(shared, unit, vi0);
                extend(shared, unit, &mut st, vi0 + 1, keep, &mut out);
            }
            out
        })
        .collect();
    let mut merged = BranchResult { solutions: 0, witnesses: Vec::new() };
    for mut b in branches {
        merged.solutions += b.solutions;
        merged.witnesses.append(&mut b.witnesses);
    }
    Ok(merged)
}

fn extend(
    shared: &Shared,
    unit: &Unit,
    st: &mut State,
    cursor: usize,
    keep: bool,
    out: &mut BranchResult,
) {
    if st.slots_ok == unit.n_slots {
        out.solutions += 1;
        if keep {
            out.witnesses.push(witness_from(shared, unit, &st.chosen));
        }
    }
    let v_len = shared.v_points.len();
    if cursor >= v_len {
        return;
    }
    // A solution needs q−t meeting lines through any one S₀ point, hence at
    // least q−t points in U.
    let min_size = unit.need as usize;
    if st.chosen.len() + (v_len - cursor) < min_size {
        return;
    }
    if !st.demands_satisfiable(shared, unit, cursor) {
        return;
    }
    for vi in cursor..v_len {
        if st.can_add(shared, unit, vi) {
            st.add(shared, unit, vi);
            extend(shared, unit, st, vi + 1, keep, out);
            st.remove(shared, unit, vi);
        }
    }
}

fn witness_from(shared: &Shared, unit: &Unit, chosen: &[u32]) -> Witness {
    let mut points: Vec<u32> = shared
        .plane
        .points_of_line(shared.anchor)
        .iter()
        .copied()
        .filter(|p| unit.removed.binary_search(p).is_err())
        .collect();
    points.extend(chosen.iter().map(|&vi| shared.v_points[vi as usize]));
    points.sort_unstable();
    Witness { points, removed: unit.removed.clone() }
}

/// Audit path: sweep every subset of the off-anchor points by bitmask and
/// test the two pencil conditions directly.  No pruning, no clever order.
fn brute_unit(
    shared: &Shared,
    unit: &Unit,
    options: &SearchOptions,
) -> Result<BranchResult, SearchError> {
    let v_len = shared.v_points.len();
    if v_len > 24 {
        return Err(SearchError::BruteTooLarge(v_len as u32));
    }
    let keep = options.mode != SearchMode::Count;
    let n_lines = shared.plane.n_lines() as usize;
    let mut line_mask = vec![0u32; n_lines];
    for (vi, lines) in shared.v_lines.iter().enumerate() {
        for &l in lines {
            line_mask[l as usize] |= 1 << vi;
        }
    }
    let lo = u64::from(shared.q - shared.t);
    let hi = u64::from(shared.q);
    let mut out = BranchResult { solutions: 0, witnesses: Vec::new() };
    for mask in 0u32..(1u32 << v_len) {
        let size = u64::from(mask.count_ones());
        if size < lo || size > hi {
            continue;
        }
        let mut ok = true;
        for li in 0..n_lines {
            if unit.d_line[li] && (line_mask[li] & mask).count_ones() > 1 {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        for lines in &unit.slot_lines {
            let meeting = lines
                .iter()
                .filter(|&&l| line_mask[l as usize] & mask != 0)
                .count() as u16;
            if meeting != unit.need {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        out.solutions += 1;
        if keep {
            let chosen: Vec<u32> = (0..v_len as u32).filter(|i| mask & (1 << i) != 0).collect();
            out.witnesses.push(witness_from(shared, unit, &chosen));
        }
    }
    Ok(out)
}

fn pruning_names(options: &SearchOptions) -> Vec<String> {
    let mut names = Vec::new();
    if options.reduce {
        names.push("anchor-point-orbit-reduction".to_string());
    }
    if options.prune {
        names.push("pencil-occupancy".to_string());
        names.push("tangent-budget".to_string());
        names.push("tangent-demand-lookahead".to_string());
        names.push("remaining-size".to_string());
    } else {
        names.push("exhaustive-bitmask".to_string());
    }
    names
}

/// Runs a search with explicit options, optional resume state, and a
/// checkpoint callback invoked with the partial certificate after every
/// completed unit (for frontier persistence).
pub fn run_search(
    plane: &Arc<Plane>,
    plane_ref: Option<&str>,
    t: u32,
    options: &SearchOptions,
    resume_from: Option<&SearchCertificate>,
    checkpoint: &mut dyn FnMut(&SearchCertificate),
) -> Result<SearchCertificate, SearchError> {
    let q = plane.q();
    if t < 1 || t > q - 1 {
        return Err(SearchError::InvalidT { t, q });
    }
    let started = Instant::now();
    let anchor = 0u32;
    let plane_ref = plane_ref.map(str::to_string).unwrap_or_else(|| derived_plane_ref(plane));

    let stabilizer = LineStabilizer::for_anchor(plane, anchor);
    let reduce = options.reduce && stabilizer.reduced;
    let orbits: Vec<DOrbit> =
        if reduce { stabilizer.d_orbits(t) } else { stabilizer.all_d(t) };

    let mut cert = SearchCertificate {
        plane: plane_ref,
        q,
        t,
        anchor_line: anchor,
        long_secant_size: q + 1 - t,
        mode: options.mode,
        pruning: pruning_names(options),
        stabilizer_reduced: reduce,
        stabilizer_order: stabilizer.order(),
        units: orbits
            .iter()
            .map(|o| SearchUnit {
                removed: o.removed.clone(),
                orbit_size: o.orbit_size,
                solutions: 0,
                done: false,
            })
            .collect(),
        solutions_mod_stabilizer: 0,
        solutions_total: 0,
        witnesses: Vec::new(),
        witnesses_truncated: false,
        classes: None,
        complete: false,
        wall_time_ms: 0,
    };

    // Adopt finished units from a prior partial run after checking it
    // describes the same search.
    if let Some(prior) = resume_from {
        let matches = prior.plane == cert.plane
            && prior.q == q
            && prior.t == t
            && prior.anchor_line == anchor
            && prior.mode == cert.mode
            && prior.pruning == cert.pruning
            && prior.stabilizer_reduced == cert.stabilizer_reduced
            && prior.units.len() == cert.units.len()
            && prior
                .units
                .iter()
                .zip(&cert.units)
                .all(|(a, b)| a.removed == b.removed && a.orbit_size == b.orbit_size);
        if !matches {
            return Err(SearchError::ResumeMismatch(format!(
                "prior certificate is for {} t={} mode={:?}",
                prior.plane, prior.t, prior.mode
            )));
        }
        for (i, prior_unit) in prior.units.iter().enumerate() {
            if prior_unit.done {
                cert.units[i].solutions = prior_unit.solutions;
                cert.units[i].done = true;
                cert.witnesses.extend(
                    prior
                        .witnesses
                        .iter()
                        .filter(|w| w.removed == prior_unit.removed)
                        .cloned(),
                );
            }
        }
    }

    let shared = Shared::build(plane, t, anchor);
    for i in 0..cert.units.len() {
        if cert.units[i].done {
            continue;
        }
        let unit = Unit::build(&shared, &orbits[i].removed);
        let result = solve_unit(&shared, &unit, options)?;
        // Belt and braces: recorded witnesses must classify as t-semiarcs
        // with the anchor as a (q+1−t)-secant.
        verify_witnesses(plane, t, anchor, &result.witnesses)?;
        cert.units[i].solutions = result.solutions;
        cert.units[i].done = true;
        cert.witnesses.extend(result.witnesses);
        cert.wall_time_ms = started.elapsed().as_millis() as u64;
        if i + 1 < cert.units.len() {
            checkpoint(&cert);
        }
    }

    cert.witnesses.sort();
    cert.solutions_mod_stabilizer = cert.units.iter().map(|u| u.solutions).sum();
    cert.solutions_total = cert.units.iter().map(|u| u.orbit_size * u.solutions).sum();
    cert.complete = cert.units.iter().all(|u| u.done);

    if options.mode == SearchMode::Classes {
        cert.classes = Some(bucket_classes(plane, &cert.witnesses)?);
    } else if let Some(cap) = options.witness_cap {
        if cert.witnesses.len() > cap {
            cert.witnesses.truncate(cap);
            cert.witnesses_truncated = true;
        }
    }
    if options.mode == SearchMode::Count {
        cert.witnesses.clear();
    }

    cert.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(cert)
}

fn verify_witnesses(
    plane: &Arc<Plane>,
    t: u32,
    anchor: u32,
    witnesses: &[Witness],
) -> Result<(), SearchError> {
    let q = plane.q();
    for w in witnesses {
        let set = PointSet::new(Arc::clone(plane), w.points.iter().copied())?;
        let report = set.classify_semiarc();
        if report.t() != Some(t) {
            return Err(SearchError::VerifyFailed(format!(
                "set {:?} does not classify as a {t}-semiarc",
                w.points
            )));
        }
        if set.line_counts()[anchor as usize] != q + 1 - t {
            return Err(SearchError::VerifyFailed(format!(
                "set {:?} does not have the anchor as a (q+1−t)-secant",
                w.points
            )));
        }
    }
    Ok(())
}

/// Buckets witnesses by equivalence under the collineation group.  A cheap
/// line-spectrum key filters candidates before the expensive test.
fn bucket_classes(
    plane: &Arc<Plane>,
    witnesses: &[Witness],
) -> Result<Vec<WitnessClass>, SearchError> {
    let mut classes: Vec<WitnessClass> = Vec::new();
    let mut keys: Vec<Vec<u32>> = Vec::new();
    for (i, w) in witnesses.iter().enumerate() {
        let set = PointSet::new(Arc::clone(plane), w.points.iter().copied())?;
        let mut key: Vec<u32> = set.line_counts().to_vec();
        key.sort_unstable();
        let mut placed = false;
        for (c, class) in classes.iter_mut().enumerate() {
            if keys[c] != key {
                continue;
            }
            let rep = &witnesses[class.rep];
            if are_equivalent(plane, &w.points, &rep.points)?.is_some() {
                class.size += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(WitnessClass { rep: i, size: 1 });
            keys.push(key);
        }
    }
    Ok(classes)
}

/// Runs [`run_search`] cheaply again and reports whether the counts agree
/// with the certificate — the replay invariant.
pub fn replay_matches(plane: &Arc<Plane>, cert: &SearchCertificate) -> Result<bool, SearchError> {
    let options = SearchOptions {
        mode: SearchMode::Count,
        prune: cert.pruning.iter().any(|p| p == "pencil-occupancy"),
        reduce: cert.stabilizer_reduced,
        witness_cap: None,
    };
    let rerun = run_search(plane, Some(&cert.plane), cert.t, &options, None, &mut |_| {})?;
    Ok(rerun.solutions_mod_stabilizer == cert.solutions_mod_stabilizer
        && rerun.solutions_total == cert.solutions_total
        && rerun.units.len() == cert.units.len()
        && rerun
            .units
            .iter()
            .zip(&cert.units)
            .all(|(a, b)| a.removed == b.removed && a.solutions == b.solutions))
}

fn mode_at_least(have: SearchMode, want: SearchMode) -> bool {
    have >= want
}

/// One search per admissible t (1 ≤ t ≤ q−2), optionally persisted to (and
/// reused from) a certificate store.  PG(2,2) admits no t and returns an
/// empty census.
pub fn census(
    plane: &Arc<Plane>,
    plane_ref: Option<&str>,
    mode: SearchMode,
    store: Option<&CertStore>,
) -> Result<Vec<SearchCertificate>, SearchError> {
    let q = plane.q();
    let plane_ref = plane_ref.map(str::to_string).unwrap_or_else(|| derived_plane_ref(plane));
    let mut out = Vec::new();
    if q < 3 {
        return Ok(out);
    }
    for t in 1..=q - 2 {
        let label = format!("{}-t{}", plane_label(&plane_ref), t);
        if let Some(store) = store {
            if let Ok(envelope) = store.find("search", &label) {
                if let Ok(cert) = envelope.decode::<SearchCertificate>() {
                    if cert.complete
                        && cert.plane == plane_ref
                        && cert.q == q
                        && cert.t == t
                        && mode_at_least(cert.mode, mode)
                    {
                        out.push(cert);
                        continue;
                    }
                }
            }
        }
        let options = SearchOptions { mode, ..SearchOptions::default() };
        let resume: Option<SearchCertificate> = match store {
            Some(store) => store
                .load_frontier::<SearchCertificate>("search", &label)?
                .filter(|c| c.plane == plane_ref && c.t == t && c.mode == mode),
            None => None,
        };
        let mut checkpoint: Box<dyn FnMut(&SearchCertificate)> = match store {
            Some(store) => {
                let label = label.clone();
                Box::new(move |partial: &SearchCertificate| {
                    let _ = store.save_frontier("search", &label, partial);
                })
            }
            None => Box::new(|_| {}),
        };
        let cert = run_search(
            plane,
            Some(&plane_ref),
            t,
            &options,
            resume.as_ref(),
            checkpoint.as_mut(),
        )?;
        if let Some(store) = store {
            store.put("search", &label, &cert, Some(cert.wall_time_ms))?;
            store.clear_frontier("search", &label)?;
        }
        out.push(cert);
    }
    Ok(out)
}
