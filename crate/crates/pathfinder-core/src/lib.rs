//! Core models for pathfinder operations under convective weather.
//!
//! The crate is organized around five building blocks:
//!
//! * [`markov`] — four-state availability chain for a departure fix, its
//!   stationary distribution, and the derived capacity/delay metrics.
//! * [`behavior`] — flight, ATC, and dispatcher utilities with the logistic
//!   acceptance model.
//! * [`worstcase`] — collective-rejection probability, tipping points, and
//!   their sensitivity to selfless behavior and shared environmental noise.
//! * [`depsim`] — seeded discrete-event simulation of departure operations
//!   (runway headways, fix gating, pathfinder interventions) and the paired
//!   runs that produce the sequencing parameter matrices.
//! * [`sequencer`] — exact optimization of ATC- and dispatcher-initiated
//!   offer sequences over those matrices.

pub mod behavior;
pub mod depsim;
pub mod markov;
pub mod numfmt;
pub mod quadrature;
pub mod sequencer;
pub mod worstcase;
