//! Exact computation of the Shannon complexity of bipartite secret-sharing
//! access structures.
//!
//! A bipartite access structure is given by its staircase of minimal points.
//! The Shannon complexity `κ` is the optimum of a linear program over discrete
//! submodular rank functions on a grid; everything here is carried out in
//! exact rational arithmetic so values like `5/3` or `75/34` come out bit-exact.
//!
//! Modules:
//! - [`staircase`]: access structures, qualification maps, profiles
//! - [`ratlp`]: exact rational simplex with certificates
//! - [`shannon`]: the κ linear program, witnesses, closed-form bounds
//! - [`witness`]: edge-difference grids, the realization checker, explicit
//!   constructions matching the tight bounds
//! - [`idealgen`]: integer polymatroids, modular cuts, one-point extensions,
//!   the κ-ideal structure generator, Ingleton checks
//! - [`linrep`]: combined linear schemes and the 7-dimensional subspace scheme
//! - [`continuous`]: the continuous relaxation, curve bounds, discretization

pub mod continuous;
pub mod idealgen;
pub mod linrep;
pub mod rat;
pub mod ratlp;
pub mod shannon;
pub mod staircase;
pub mod witness;

pub use rat::Rational;
