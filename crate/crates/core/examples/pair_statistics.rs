//! Hamming and Johnson scheme counts next to their brute-force values.
//!
//!     cargo run --example pair_statistics

use symcycle::pairs::{self, PairQuery, PairStatistic};

fn main() -> symcycle::Result<()> {
    for (stat, partial) in [
        (PairStatistic::Distance, PairQuery::new(4)),
        (PairStatistic::Orthogonal, PairQuery::new(6)),
        (PairStatistic::Mutual, PairQuery::new(8)),
        (PairStatistic::NegpartOrthogonal, PairQuery { j_prime: Some(2), ..PairQuery::new(6) }),
        (PairStatistic::JohnsonLayer, PairQuery { s: Some(2), ..PairQuery::new(5) }),
        (PairStatistic::JohnsonMutual, PairQuery::new(8)),
    ] {
        println!("{}:", stat.name());
        for q in pairs::sweep_queries(stat, &partial) {
            let row = pairs::pair_row(stat, &q, true)?;
            println!(
                "  {}  closed form {}  oracle {}",
                serde_json::to_string(&q).unwrap(),
                row.closed_form,
                row.oracle.unwrap()
            );
        }
    }
    Ok(())
}
