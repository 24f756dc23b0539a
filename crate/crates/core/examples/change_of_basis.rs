//! Re-express a decomposition from the distinguished cycle in a random one.
//!
//!     cargo run --example change_of_basis

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symcycle::cycle::{change_of_basis, SymmetricCycle};
use symcycle::hypercube::{GroundSet, SignVector};

fn main() -> symcycle::Result<()> {
    let g = GroundSet::new(5)?;
    let r = SymmetricCycle::distinguished(g);
    let d = SymmetricCycle::random(g, &mut ChaCha8Rng::seed_from_u64(7));
    println!("D starts at {} and flips {:?}", d.vertex(0), d.flip_order());

    let tope = SignVector::parse("-+--+")?;
    let in_r = r.decompose(&tope)?;
    let in_d = d.decompose(&tope)?;
    let moved = change_of_basis(&in_r.x, &r, &d)?;
    println!("x(T, R) = {:?}  q = {}", in_r.x.coords(), in_r.q());
    println!("x(T, D) = {:?}  q = {}", in_d.x.coords(), in_d.q());
    println!("transported from R: {:?}", moved.coords());
    assert_eq!(moved, in_d.x);

    let inner: i64 = in_d.members.iter().map(|m| tope.scalar_product(m)).sum::<symcycle::Result<i64>>()?;
    println!("sum of <T, Q> over Q(T, D) = {inner} = t");
    Ok(())
}
