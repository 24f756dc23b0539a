//! Smirnov words (no two equal adjacent letters) by Parikh vector and end letters.
//!
//!     cargo run --example smirnov_words

use symcycle::counting::{smirnov_bruteforce, ParikhVector, SmirnovCounter};

fn main() -> symcycle::Result<()> {
    let mut counter = SmirnovCounter::new();
    let theta = 0;
    let p = ParikhVector::new(vec![2, 1, 1]);
    println!("ternary, theta...theta, counts (2,1,1): {}", counter.count(3, &p, theta, theta)?);

    println!("\nquaternary words with counts (2,2,1,1), by first/last letter:");
    let p = ParikhVector::new(vec![2, 2, 1, 1]);
    for first in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|last| {
                let dp = counter.count(4, &p, first, last)?;
                assert_eq!(dp, smirnov_bruteforce(4, &p, first, last)?);
                Ok(format!("{dp:>4}"))
            })
            .collect::<symcycle::Result<_>>()?;
        println!("  {}", row.join(""));
    }

    let big = ParikhVector::new(vec![20, 20, 20]);
    println!("\ncounts (20,20,20), theta...alpha: {}", counter.count(3, &big, 0, 1)?);
    Ok(())
}
