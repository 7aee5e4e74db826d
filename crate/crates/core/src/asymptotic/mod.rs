//! Asymptotic geometry of prime-power periods: the Laurent maps `g_d` and
//! `h_{rs}`, hypocycloid regions, and equidistribution of `Lambda_q`.

mod equidistribution;
mod hypocycloid;
mod laurent;

pub use equidistribution::{
    discrepancy_estimate, find_root_of_unity, lambda_set, weyl_sum, LambdaSet, RationalPoints, WeylSum,
};
pub use hypocycloid::{
    boundary_point, hypocycloid, in_hypocycloid, verify_hypocycloid, HypocycloidRegion, HypocycloidReport,
    DEFAULT_SAMPLES, MIN_SAMPLES,
};
pub use laurent::{
    e, eval_g, eval_h, eval_h_with, gauss17_check, h_image_heuristic, minkowski_decomposition_check,
    period_torus_point, prime_power_orbit, sample_torus, sfs_radius, verify_containment, ContainmentReport,
    Gauss17, HImageReport, HIndexing, LaurentMap, MinkowskiReport, PrimePowerOrbit, TorusPoint,
};
