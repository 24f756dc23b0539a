//! Run every identity suite for t <= 6 and summarize the reports.
//!
//!     cargo run --example identity_suite

use symcycle::identities::{run_suites, Suite, SuiteConfig};

fn main() -> symcycle::Result<()> {
    let cfg = SuiteConfig::with_t_max(6);
    for r in run_suites(&Suite::ALL, &cfg)? {
        println!("{:<16} checked {:>7}  skipped {:>5}  failed {}", r.suite, r.checked, r.skipped, r.failed);
        for o in &r.observations {
            println!("    {}: {}", o.case, o.detail);
        }
    }
    Ok(())
}
