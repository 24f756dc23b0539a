//! The x-vector of a union from the intersection poset of its members.
//!
//!     cargo run --example moebius_union

use symcycle::cycle::SymmetricCycle;
use symcycle::hypercube::{GroundSet, GroundSubset};
use symcycle::identities::{check_moebius, IntersectionPoset};

fn main() -> symcycle::Result<()> {
    let g = GroundSet::new(7)?;
    let family = [
        GroundSubset::from_members(g, &[1, 2, 3])?,
        GroundSubset::from_members(g, &[3, 4, 5])?,
        GroundSubset::from_members(g, &[2, 3, 6])?,
    ];
    let poset = IntersectionPoset::new(&family)?;
    println!("union {:?}", poset.top().members());
    for (b, mu) in poset.mu_values() {
        println!("  mu({:?}, top) = {mu}", b.members());
    }
    let r = SymmetricCycle::distinguished(g);
    println!("x(union) = -sum mu(B) x(B): {:?}", check_moebius(&family, &r)?);
    Ok(())
}
