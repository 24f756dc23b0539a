//! Decompose every vertex of {1,-1}^4 with respect to the distinguished cycle.
//!
//!     cargo run --example decompose_vertex

use symcycle::cycle::SymmetricCycle;
use symcycle::hypercube::GroundSet;

fn main() -> symcycle::Result<()> {
    let g = GroundSet::new(4)?;
    let r = SymmetricCycle::distinguished(g);
    for (k, v) in r.vertices().iter().enumerate() {
        println!("R^{k} = {v}");
    }
    println!();
    for v in g.vertices() {
        let dec = r.decompose(&v)?;
        let idx: Vec<String> = dec.q_indices.iter().map(|i| format!("R^{i}")).collect();
        println!("{v}  x = {:?}  q = {}  Q = {{{}}}", dec.x.coords(), dec.q(), idx.join(", "));
        assert_eq!(dec.sum_of_members(), v.entries().into_iter().map(i64::from).collect::<Vec<_>>());
    }
    Ok(())
}
