//! Seeded random streams, time grids and the three walk simulators.

mod grid;
mod rng;
mod sphere;
mod walk;

pub use grid::{grid_dyadic, grid_geometric, grid_poisson, grid_uniform, TimeGrid};
pub use rng::RngStream;
pub use sphere::{simulate_sphere_walk, sphere_step, SphereStep, SphereWalker};
pub use walk::{simulate_bm, simulate_zn, WalkModel, WalkPath};
