//! Construction, verification, classification and exhaustive search of
//! t-semiarcs with long secants in finite projective planes.
//!
//! A t-semiarc in a projective plane of order q is a point set with exactly t
//! tangent lines at each of its points; a long secant is a (q+1−t)-secant,
//! the largest size a secant of a t-semiarc can have. The crate provides:
//!
//! - exact GF(p^r) arithmetic and the subfield lattice ([`field`]);
//! - generated PG(2,q) and loaded incidence structures, subplane embeddings,
//!   and projective-equivalence testing ([`plane`]);
//! - point-set analytics: tangent counts, secant spectra, semiarc
//!   classification, V_t-configuration detection, Rédei-type blocking-set
//!   analysis ([`semiarc`]);
//! - perspective point sets and the affine subgroups G(A,B) behind them
//!   ([`perspective`]);
//! - the known families with long secants as verified generators
//!   ([`constructions`]);
//! - an exhaustive, isomorph-reduced, certificate-producing search for
//!   t-semiarcs with a long secant, plus theorem-level checks ([`search`]);
//! - canonical JSON certificates and the on-disk store ([`cert`]);
//! - the `semiarcs` command-line interface ([`cli`]).

pub mod cert;
pub mod cli;
pub mod constructions;
pub mod field;
pub mod perspective;
pub mod plane;
pub mod search;
pub mod semiarc;

pub use cert::{canonical_json, content_hash, resolve_plane_ref, CertError, CertStore, Envelope};
pub use constructions::{
    build_thm_case, conic_example, documented_grid, km_example, projective_triangle,
    q_minus_2_family, suetake, vt_configuration, Construction, ConstructionError,
    ConstructionSpec, Family, QuadKind, TypeClaim,
};
pub use field::{AddSubgroup, FieldError, FiniteField, MultSubgroup};
pub use perspective::{
    base_secant_violations, build_group, centres, classify_centres, group_centre_set,
    perspective_sets_from_orbits, CaseWitness, CentreClassification, CentreSet,
    PerspectiveError, PerspectiveFrame, PerspectiveGroup,
};
pub use plane::{are_equivalent, Collineation, Plane, PlaneError, PlaneKind, Subplane};
pub use search::theorems::{
    check_counting_identities, enumerate_small_semiarcs, enumerate_small_semiarcs_with_sets,
    minimal_blocking_survey, verify_theorem, BlockingSurvey, Counterexample,
    SmallSemiarcCensus, TheoremId, TheoremReport,
};
pub use search::{
    census, replay_matches, run_search, search_long_secant, SearchCertificate, SearchError,
    SearchMode, SearchOptions, Witness, WitnessClass,
};
pub use semiarc::{PointSet, SemiarcError, SemiarcReport, Verdict, VtWitness};
