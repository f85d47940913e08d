//! Documents survive a JSON round trip bit for bit and re-verify.

use suborbit::io::{Document, WitnessDoc};
use suborbit::sphere::classify_circle_triangle;
use suborbit::verify_witness;

fn main() -> suborbit::Result<()> {
    let c = classify_circle_triangle(&"1/5,1/5,3/5".parse()?)?;
    let w = c.witness.expect("Z_5 suborbit comes with a witness");
    let text = Document::Witness(WitnessDoc::from_witness(&w)).to_json();
    println!("{text}");

    let back = Document::from_json(&text)?;
    let w2 = back.witness().expect("witness document").to_witness()?;
    assert_eq!(w, w2);
    println!("re-verified: {:?}", verify_witness(&w2, 1e-7)?);
    Ok(())
}
