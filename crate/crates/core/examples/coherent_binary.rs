//! The coherent {0,1} picture of a decomposition, and the weight criterion
//! for orthogonality.
//!
//!     cargo run --example coherent_binary

use symcycle::cycle::SymmetricCycle;
use symcycle::hypercube::{GroundSet, SignVector};
use symcycle::identities::{check_coherent_maps, check_weight_equivalences};

fn main() -> symcycle::Result<()> {
    let g = GroundSet::new(6)?;
    let r = SymmetricCycle::distinguished(g);
    let tope = SignVector::parse("-++-+-")?;
    let dec = r.decompose(&tope)?;
    println!("T = {tope}  binary {:?}", tope.to_binary().entries());
    for m in &dec.members {
        println!("  Q = {m}  binary {:?}", m.to_binary().entries());
    }
    println!("coherent identities: {:?}", check_coherent_maps(&tope, &r)?);

    let x = SignVector::parse("--++++")?;
    let mut orthogonal = 0;
    for y in g.vertices() {
        assert!(check_weight_equivalences(&x, &y)?.passed());
        if x.scalar_product(&y)? == 0 {
            orthogonal += 1;
        }
    }
    println!("{orthogonal} vertices are orthogonal to {x}");
    Ok(())
}
