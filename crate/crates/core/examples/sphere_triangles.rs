//! Spherical triangles: exact circle classification and prime search for a
//! triangle of circumradius one.

use suborbit::sphere::{
    classify_circle_triangle, decompose_in_rp, find_prime_spherical, witness_from_certificate,
    Decomposition, TriangleSides,
};
use suborbit::verify_witness;

fn main() -> suborbit::Result<()> {
    for arcs in ["1/4,1/4,1/2", "1/5,1/5,3/5", "5/18,5/18,8/18"] {
        let c = classify_circle_triangle(&arcs.parse()?)?;
        println!("{arcs:>16}  {:?}", c.verdict);
    }

    // Not in the convex hull of the Z_5 atoms: the LP returns a separating functional.
    let t: TriangleSides = "4,3,3".parse()?;
    if let Decomposition::Infeasible { farkas, .. } = decompose_in_rp(&t, 5)? {
        println!("4,3,3 at p=5: infeasible, farkas = {farkas:?}");
    }

    let t = TriangleSides::new(2.5, 2.0, 1.8)?;
    let (p, cert) = find_prime_spherical(&t, 200)?;
    let w = witness_from_certificate(&cert)?;
    let rep = verify_witness(&w, 1e-8)?;
    println!(
        "{:?}: p = {p}, {} atoms, witness in R^{} verifies: {}",
        t.as_array(),
        cert.atoms.len(),
        w.dim(),
        rep.pass
    );
    Ok(())
}
