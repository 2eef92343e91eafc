//! Exact rational polyhedral kernel.

pub mod dd;
pub mod inequality;
pub mod linalg;
pub mod polyhedron;
pub mod polytope;
pub mod vector;

pub use inequality::{LinearInequality, Triviality};
pub use polyhedron::{
    bounding_box, contains, dd_vertices, fm_eliminate, lattice_points, poly_equal, BoundingBox,
    CoordRange, HPolyhedron,
};
pub use polytope::{volume, VPolytope};
pub use vector::{fmt_rat, parse_rat, rat, rat_frac, Rat, RatVector};
