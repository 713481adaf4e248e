//! Spin lifting and Stiefel-Whitney computations for orthogonal
//! representations, built on exact lattice arithmetic and a finite-group
//! 2-cohomology engine.

pub mod cli;
pub mod cliffpin;
pub mod exactlat;
pub mod gcoh;
pub mod rootdata;
pub mod selftest;
pub mod spincalc;
