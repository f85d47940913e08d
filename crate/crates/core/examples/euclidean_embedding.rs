//! Realizing small point sets as suborbits of Z_p^α actions.

use suborbit::euclid::{
    embed_simplex, min_prime_for, product_witness, two_point_orbit, EmbedOptions,
};
use suborbit::{verify_witness, PointConfiguration};

fn main() -> suborbit::Result<()> {
    let rect = product_witness(&two_point_orbit(3, 1.0)?, &two_point_orbit(3, 2.0)?, None)?;
    println!(
        "1x2 rectangle inside a Z_3^2 orbit: {:?}",
        verify_witness(&rect, 1e-10)?
    );

    let simplex = PointConfiguration::indexed(vec![
        vec![0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.5, 0.75f64.sqrt(), 0.0],
        vec![0.5, 0.75f64.sqrt() / 3.0, (2.0f64 / 3.0).sqrt()],
    ])?;
    let opts = EmbedOptions::default();
    let e = min_prime_for(&simplex, 50, &opts)?;
    println!(
        "regular tetrahedron: p = {}, {:?}, {} planes",
        e.p, e.method, e.planes
    );

    let right = PointConfiguration::indexed(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let e = embed_simplex(
        &right,
        101,
        &EmbedOptions {
            escalate: true,
            ..opts
        },
    )?;
    let rep = verify_witness(&e.witness, 1e-7)?;
    println!(
        "right triangle: p = {}, {:?}, dim {}, distance error {:.1e}",
        e.p,
        e.method,
        e.witness.dim(),
        rep.max_distance_error
    );
    Ok(())
}
