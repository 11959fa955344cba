//! Exact computations around orientation groups of K-theory.
//!
//! * [`fgab`]: finitely generated abelian groups and Smith normal form.
//! * [`topology`]: model manifolds with cohomology rings and characteristic classes.
//! * [`index`]: Euler forms of twisted elliptic operators from index densities.
//! * [`omega`]: the orientation group, its multiplication and trivializations.
//! * [`orientability`]: a rule engine returning orientability verdicts.
//! * [`skeleton`]: simplicial complexes, subdivisions, dual skeletons and prisms.
//! * [`cli`]: config parsing, job dispatch and report emission for `orient-calc`.

pub mod fgab;
pub mod topology;
pub mod index;
pub mod omega;
pub mod orientability;
pub mod skeleton;
pub mod cli;
