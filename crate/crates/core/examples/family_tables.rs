//! Closed-form family statistics against the exhaustive oracle.
//!
//!     cargo run --example family_tables [t]

use symcycle::family::{self, FamilyKind, OracleBound};

fn main() -> symcycle::Result<()> {
    let t: usize = std::env::args().nth(1).map_or(5, |s| s.parse().expect("t must be an integer"));
    for kind in FamilyKind::ALL {
        let report = family::full_sweep(t, kind, OracleBound::default())?;
        println!(
            "{:<20} pairs {:>8}  keys matched {:>5}  mismatched {}  uncovered nonempty {}",
            kind.tag(),
            report.oracle_pairs,
            report.matched,
            report.mismatched,
            report.uncovered_nonempty
        );
    }

    let report = family::full_sweep(t, FamilyKind::IntersectCover2, OracleBound::default())?;
    println!("\nfirst rows for {}:", FamilyKind::IntersectCover2.tag());
    family::write_csv(report.rows.iter().take(6), std::io::stdout())?;
    Ok(())
}
