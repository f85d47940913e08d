//! The sphere stays away from every torus orbit: variance bound and far points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use suborbit::torus::{
    chord_variance_integral, component_variance_report, far_point, QuadratureSpec, SubspaceIsometry,
};

fn main() -> suborbit::Result<()> {
    let c_star = std::f64::consts::FRAC_PI_4;
    println!(
        "min of the chord variance integral: {:.10} at c = pi/4",
        chord_variance_integral(c_star)
    );

    let q = QuadratureSpec::default();
    let rep = component_variance_report(&SubspaceIsometry::plane_and_axis(), &q);
    println!("plane + axis: total variance {:.10}", rep.total);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=5 {
        let lambda = SubspaceIsometry::random(n, &mut rng)?;
        let rep = component_variance_report(&lambda, &q);
        let far = far_point(&lambda, &rep.optimal_orbit())?;
        println!(
            "n = {n}: total variance {:.6} (>= 1/16), far point at distance {:.4} (>= 1/4)",
            rep.total, far.distance
        );
    }
    Ok(())
}
