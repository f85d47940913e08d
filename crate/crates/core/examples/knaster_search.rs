//! Rotating an orbit so that a test map is constant on it.

use nalgebra::DMatrix;
use suborbit::euclid::two_point_orbit;
use suborbit::knaster::{
    euclidean_search, parse_test_map_minimal, search_constant_configuration,
    EuclideanSearchOptions, SearchOptions, TestMap,
};
use suborbit::PointConfiguration;

fn main() -> suborbit::Result<()> {
    // Antipodal pair, q = 2: any linear R^2 -> R^1 map has a kernel direction.
    let pair = PointConfiguration::indexed(vec![vec![1.0], vec![-1.0]])?;
    let w = two_point_orbit(2, 2.0)?.with_claim(pair.clone())?;
    let f = TestMap::linear(DMatrix::from_row_slice(1, 2, &[0.3, -1.1]))?;
    let r = search_constant_configuration(&pair, &w, &f, 2, &SearchOptions::default())?;
    println!("antipodal pair: phi = {:.2e}, images {:?}", r.phi, r.images);

    let tri = PointConfiguration::indexed(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.2, 0.8]])?;
    let f = parse_test_map_minimal("x1 * x2 + sin(x3)")?;
    let r = euclidean_search(&tri, 3, &f, 1, &EuclideanSearchOptions::default())?;
    println!(
        "triangle via Z_{}^{} orbit: n = {}, phi = {:.2e}, capped = {}",
        r.p, r.rank, r.search.n, r.search.phi, r.capped
    );
    Ok(())
}
