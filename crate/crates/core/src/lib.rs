//! Dynamical Lie algebras for rotational subsystems of a driven asymmetric top.
//!
//! A three-level rotational subsystem J/J+1/J+1 of an asymmetric top, driven by
//! four resonant fields, lives on a Hilbert space of dimension 6J+7. This crate
//! builds the drift and drive Hamiltonians for such a subsystem, computes the
//! Lie algebra they generate numerically ([`closure`]), and replays the exact
//! six-step argument showing that the algebra is all of su(6J+7) ([`proof`]).
//!
//! The exact side is built on arbitrary-precision rationals extended by square
//! roots of integers ([`exact`]), a generalized Pauli basis of su(n) with an
//! exact commutator engine ([`oplib`]), and the structural drive operators
//! ([`drives`]). The physical side ([`rotor`]) diagonalizes the rigid-rotor
//! Hamiltonian and assembles dipole matrix elements in double precision.

pub mod closure;
pub mod drives;
pub mod exact;
pub mod oplib;
pub mod proof;
pub mod rotor;
