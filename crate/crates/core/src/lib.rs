//! Exact dimer statistics for planar bipartite ciliated graphs whose edges
//! carry matrix weights (the `M_n` dimer model, with mixed multiplicities).
//!
//! * [`graph`], [`spec`]: embedded graphs, faces and cilia; JSON documents.
//! * [`matrix`], [`scalar`], [`poly`], [`perm`]: exact linear algebra over
//!   rationals, floats and polynomials.
//! * [`kasteleyn`]: sign solutions and the block Kasteleyn matrix.
//! * [`stats`]: probability matrices, multiplicity laws, moments and
//!   joint expectations.
//! * [`oracle`]: brute-force enumeration of covers and colorings.
//! * [`moves`]: gauges and local moves with certificates.
//! * [`zoo`]: grids, snakes, q-Fibonacci weightings, six-vertex lattices.

pub mod error;
pub mod graph;
pub mod kasteleyn;
pub mod matrix;
pub mod moves;
pub mod oracle;
pub mod perm;
pub mod poly;
pub mod scalar;
pub mod spec;
pub mod stats;
pub mod zoo;
