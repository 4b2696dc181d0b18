//! Exact Voronoi-Delaunay combinatorics of banana-graph tropical Jacobians,
//! their matroids, and certified KP multi-soliton tau functions.

pub mod equations;
pub mod error;
pub mod hirota;
pub mod jacobian;
pub mod limits;
pub mod linalg;
pub mod numeric;
pub mod orientation;
pub mod scalar;
pub mod subsets;
pub mod tau;
pub mod voronoi;

pub use equations::{
    face_direction_classes, instantiate_and_check, squared_set, QuarticRelation, QuarticTerm, SquaredPoint,
};
pub use error::{Error, Result};
pub use hirota::{
    alpha_from_beta, alpha_from_divisor, beta_from_abel, beta_from_lambda, check_dn_interlacing, invert_psi,
    lambda_from_beta, lambda_from_divisor, matrix_a, matrix_a_dual, matrix_a_tilde, psi, GrassmannPoint, HirotaPoint,
};
pub use jacobian::{
    build_banana, delaunay_set, vertices_equivalent, voronoi_contains, BananaData, DelaunaySet, VoronoiVertex,
};
pub use limits::{abel_map, limit_r, uvw, Component, Divisor, KappaConfig, PeriodVectors, RMatrix};
pub use linalg::Matrix;
pub use orientation::{MatroidBases, Orientation, VertexChoice};
pub use scalar::{LogRational, Scalar, SignedLog};
pub use subsets::Basis;
pub use tau::{
    evaluate_u, hirota_residual, kp_residual_numeric, spacetime_inversion_check, tau_from_grassmannian,
    tau_from_hirota_point, tau_from_hirota_point_at, tau_from_theta, TauFunction, TauTerm,
};
pub use voronoi::{canonical_vertex, f_vector, normalize_delaunay, shift_vector, voronoi_vertices};
