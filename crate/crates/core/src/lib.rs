//! Mean-field technology adoption on networks.
//!
//! Agents of degree `d` choose between adopting a product early, at an
//! uncertain quality, or deferring and learning the quality from neighbors
//! who adopted early. A monopolist sets a first-period price `P0`, a
//! second-period price `P1` and a referral payment `eta` per late-adopting
//! neighbor. The crate computes the unique mean-field equilibrium for any
//! such policy, the resulting profit, and optimal policies within the
//! two-price class, the referral class and the unrestricted space.
//!
//! ```
//! use netadopt::{degree_dist, adoption_game::{self, GameParams, PricingPolicy}};
//!
//! let params = GameParams::default();
//! let f = degree_dist::make_regular(1).unwrap();
//! let policy = PricingPolicy::new(0.0, 0.0, 0.0).unwrap();
//! let eq = adoption_game::solve_equilibrium(&params, &policy, &f).unwrap();
//! assert!((eq.alpha_star - 0.75).abs() < 1e-9);
//! ```

pub mod adoption_game;
pub mod binomial;
pub mod degree_dist;
pub mod error;
pub mod finite_game;
pub mod format;
pub mod numeric;
pub mod optimizer;
pub mod patterns;
pub mod pricing;

pub use error::{Error, Result};
