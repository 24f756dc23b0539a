//! Exhaustive and seeded-random verification of the decomposition identities.
//!
//! Each `check_*` function tests one instance. [`run_suite`] sweeps a suite
//! over a range of `t`, against the distinguished cycle and a fixed number of
//! random cycles drawn from a seeded ChaCha stream, and collects failures with
//! enough context to reproduce them.

mod checks;
mod poset;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cycle::{Decomposition, SymmetricCycle};
use crate::error::{invalid, Error, Result};
use crate::family::{self, FamilyKind, OracleBound};
use crate::hypercube::{GroundSet, GroundSubset, SignVector};
use crate::pairs;

pub use checks::{
    check_change_of_basis, check_circular_translations, check_coherent_maps, check_minimality, check_moebius,
    check_negpart_identities, check_pairwise_identities, check_two_tope, check_valuation, check_weight_equivalences,
    Check, OddSubsetTable, Violation, MINIMALITY_MAX_T,
};
pub use poset::IntersectionPoset;

pub const DEFAULT_SEED: u64 = 0x5eed_c1c1e;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Minimality,
    ChangeOfBasis,
    Circular,
    Valuation,
    Moebius,
    Negpart,
    Pairwise,
    TwoTope,
    Coherent,
    Weight,
    Readings,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Minimality,
        Suite::ChangeOfBasis,
        Suite::Circular,
        Suite::Valuation,
        Suite::Moebius,
        Suite::Negpart,
        Suite::Pairwise,
        Suite::TwoTope,
        Suite::Coherent,
        Suite::Weight,
        Suite::Readings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Minimality => "minimality",
            Suite::ChangeOfBasis => "change-of-basis",
            Suite::Circular => "circular",
            Suite::Valuation => "valuation",
            Suite::Moebius => "moebius",
            Suite::Negpart => "negpart",
            Suite::Pairwise => "pairwise",
            Suite::TwoTope => "two-tope",
            Suite::Coherent => "coherent",
            Suite::Weight => "weight",
            Suite::Readings => "readings",
        }
    }

    /// Parses a suite name, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| invalid(format!("unknown suite {s:?}")))
    }
}

/// Sweep parameters shared by all suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub t_min: usize,
    pub t_max: usize,
    pub seed: u64,
    /// Random cycles per `t`, on top of the distinguished one.
    pub random_cycles: usize,
    /// Random families per `t` for the Möbius suite.
    pub random_families: usize,
    /// Largest family size for the Möbius suite.
    pub max_family: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { t_min: 3, t_max: 6, seed: DEFAULT_SEED, random_cycles: 20, random_families: 200, max_family: 4 }
    }
}

impl SuiteConfig {
    pub fn with_t_max(t_max: usize) -> Self {
        SuiteConfig { t_max, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        GroundSet::new(self.t_min)?;
        GroundSet::new(self.t_max)?;
        if self.t_min > self.t_max {
            return Err(invalid(format!("empty t-range [{}, {}]", self.t_min, self.t_max)));
        }
        if self.max_family == 0 || self.max_family > 8 {
            return Err(invalid("family size must lie in [1, 8]"));
        }
        Ok(())
    }

    /// Independent stream per (suite, t) so suites can run in any order.
    fn rng(&self, suite: Suite, t: usize) -> ChaCha8Rng {
        let tag = (suite as u64) << 32 | t as u64;
        ChaCha8Rng::seed_from_u64(self.seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn cycles(&self, suite: Suite, t: GroundSet) -> Vec<SymmetricCycle> {
        let mut rng = self.rng(suite, t.t());
        std::iter::once(SymmetricCycle::distinguished(t))
            .chain((0..self.random_cycles).map(|_| SymmetricCycle::random(t, &mut rng)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub witness: Value,
}

/// A fact worth reporting that is not a failure of the checked reading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub case: String,
    pub detail: Value,
}

/// Largest number of failures kept verbatim in a report.
pub const MAX_RECORDED_FAILURES: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub t_range: [usize; 2],
    pub seed: u64,
    pub checked: u64,
    pub skipped: u64,
    pub failed: u64,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

impl VerificationReport {
    fn new(suite: Suite, cfg: &SuiteConfig, t_range: [usize; 2]) -> Self {
        VerificationReport {
            suite: suite.name().to_string(),
            t_range,
            seed: cfg.seed,
            checked: 0,
            skipped: 0,
            failed: 0,
            failures: Vec::new(),
            observations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, case: &str, check: Check, witness: impl FnOnce() -> Value) {
        match check {
            Check::Pass => self.checked += 1,
            Check::Skipped => self.skipped += 1,
            Check::Fail(v) => {
                self.checked += 1;
                self.failed += 1;
                if self.failures.len() < MAX_RECORDED_FAILURES {
                    let mut w = witness();
                    w["violations"] = json!(v);
                    self.failures.push(Failure { case: case.to_string(), witness: w });
                }
            }
        }
    }

    fn absorb(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failed += other.failed;
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        self.observations.extend(other.observations);
    }
}

fn cycle_witness(d: &SymmetricCycle) -> Value {
    json!({ "start": d.vertex(0).to_string(), "flip_order": d.flip_order() })
}

fn decompose_all(d: &SymmetricCycle) -> Result<Vec<Decomposition>> {
    d.ground().vertices().map(|v| d.decompose(&v)).collect()
}

/// Runs one suite. Per-`t` work runs in parallel and merges in `t` order,
/// so reports are identical for any worker count.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let (lo, hi) = match suite {
        Suite::Minimality => (cfg.t_min, cfg.t_max.min(MINIMALITY_MAX_T)),
        _ => (cfg.t_min, cfg.t_max),
    };
    let mut report = VerificationReport::new(suite, cfg, [lo, hi]);
    let parts: Vec<VerificationReport> =
        (lo..=hi).into_par_iter().map(|t| run_at(suite, cfg, GroundSet::new(t)?)).collect::<Result<_>>()?;
    for p in parts {
        report.absorb(p);
    }
    Ok(report)
}

pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn run_at(suite: Suite, cfg: &SuiteConfig, g: GroundSet) -> Result<VerificationReport> {
    let t = g.t();
    let mut rep = VerificationReport::new(suite, cfg, [t, t]);
    let per_vertex = |rep: &mut VerificationReport,
                      name: &str,
                      law: &dyn Fn(&Decomposition, &SymmetricCycle) -> Result<Check>|
     -> Result<()> {
        for d in cfg.cycles(suite, g) {
            for dec in decompose_all(&d)? {
                let check = law(&dec, &d)?;
                rep.record(
                    name,
                    check,
                    || json!({ "t": t, "vertex": dec.owner.to_string(), "cycle": cycle_witness(&d) }),
                );
            }
        }
        Ok(())
    };
    match suite {
        Suite::Minimality => {
            for d in std::iter::once(SymmetricCycle::distinguished(g))
                .chain(cfg.cycles(suite, g).into_iter().skip(1).take(2))
            {
                let table = OddSubsetTable::new(&d)?;
                for dec in decompose_all(&d)? {
                    rep.record(
                        "minimality",
                        checks::minimality_law(&dec, &table),
                        || json!({ "t": t, "vertex": dec.owner.to_string(), "cycle": cycle_witness(&d) }),
                    );
                }
            }
        }
        Suite::ChangeOfBasis => {
            let r = SymmetricCycle::distinguished(g);
            per_vertex(&mut rep, "change-of-basis", &|dec, d| checks::change_of_basis_law(dec, d, &r))?;
        }
        Suite::Circular => per_vertex(&mut rep, "circular", &|dec, d| Ok(checks::circular_law(dec, d)))?,
        Suite::Negpart => per_vertex(&mut rep, "negpart", &|dec, _| Ok(checks::negpart_law(dec)))?,
        Suite::Pairwise => {
            per_vertex(&mut rep, "pairwise", &|dec, d| Ok(checks::pairwise_law(dec, d.contains(&dec.owner))))?
        }
        Suite::Coherent => per_vertex(&mut rep, "coherent", &|dec, d| Ok(checks::coherent_law(dec, d)))?,
        Suite::Valuation => {
            for d in cfg.cycles(suite, g) {
                let xs: Vec<Vec<i64>> = decompose_all(&d)?.into_iter().map(|dec| dec.x.as_integers()).collect();
                let full = g.full_mask();
                for a in 0..=full {
                    for b in 0..=full {
                        let check = checks::valuation_law(a, b, d.is_distinguished(), |m| xs[m as usize].clone());
                        rep.record("valuation", check, || {
                            json!({
                                "t": t,
                                "a": GroundSubset::from_mask(g, a).members(),
                                "b": GroundSubset::from_mask(g, b).members(),
                                "cycle": cycle_witness(&d),
                            })
                        });
                    }
                }
            }
        }
        Suite::Moebius => {
            let mut rng = cfg.rng(suite, t);
            for d in cfg.cycles(suite, g) {
                let xs: Vec<Vec<i64>> = decompose_all(&d)?.into_iter().map(|dec| dec.x.as_integers()).collect();
                for _ in 0..cfg.random_families.div_ceil(cfg.random_cycles + 1) {
                    let alpha = rng.gen_range(1..=cfg.max_family);
                    let family: Vec<GroundSubset> =
                        (0..alpha).map(|_| GroundSubset::from_mask(g, rng.gen::<u32>() & g.full_mask())).collect();
                    let check = checks::moebius_law(&family, |m| xs[m as usize].clone())?;
                    rep.record("moebius", check, || {
                        json!({
                            "t": t,
                            "family": family.iter().map(|a| a.members()).collect::<Vec<_>>(),
                            "cycle": cycle_witness(&d),
                        })
                    });
                }
            }
        }
        Suite::TwoTope => {
            for d in cfg.cycles(suite, g).into_iter().take(3) {
                let decs = decompose_all(&d)?;
                for d1 in &decs {
                    for d2 in &decs {
                        rep.record("two-tope", checks::two_tope_law(d1, d2), || {
                            json!({
                                "t": t,
                                "first": d1.owner.to_string(),
                                "second": d2.owner.to_string(),
                                "cycle": cycle_witness(&d),
                            })
                        });
                    }
                }
            }
        }
        Suite::Weight => {
            if t.is_multiple_of(2) {
                for x in g.vertices() {
                    for y in g.vertices() {
                        rep.record(
                            "weight",
                            check_weight_equivalences(&x, &y)?,
                            || json!({ "t": t, "x": x.to_string(), "y": y.to_string() }),
                        );
                    }
                }
            }
        }
        Suite::Readings => readings_at(&mut rep, cfg, g)?,
    }
    Ok(rep)
}

/// Checks every chosen reading of an ambiguous statement against brute
/// force, and records how the alternative reading fares.
fn readings_at(rep: &mut VerificationReport, cfg: &SuiteConfig, g: GroundSet) -> Result<()> {
    let t = g.t();
    if t.is_multiple_of(2) && t <= pairs::ORACLE_MAX_T.min(8) {
        for j1 in 0..=t {
            for j2 in 0..=t {
                let closed = pairs::orthogonal_pairs_with_negparts(t, j1, j2)?;
                let oracle = pairs::oracle_orthogonal_pairs_with_negparts(t, j1, j2)?;
                let check = if closed == oracle {
                    Check::Pass
                } else {
                    Check::Fail(vec![Violation {
                        identity: "orthogonal pairs by negative-part sizes, third factor binom(t/2, (2j'-2j''+t)/4)",
                        lhs: closed.to_string(),
                        rhs: oracle.to_string(),
                    }])
                };
                rep.record("negpart-orthogonal reading", check, || json!({ "t": t, "j_prime": j1, "j_dblprime": j2 }));
            }
        }
    }
    if t.is_multiple_of(4) && t <= 8 {
        for s in t / 4..=3 * t / 4 {
            let closed = pairs::johnson_mutual_count(t, s)?;
            let oracle = pairs::oracle_johnson_mutual_count(t, s)?;
            let check = if closed == oracle {
                Check::Pass
            } else {
                Check::Fail(vec![Violation {
                    identity: "Johnson mutual count",
                    lhs: closed.to_string(),
                    rhs: oracle.to_string(),
                }])
            };
            rep.record("johnson-mutual for every s", check, || json!({ "t": t, "s": s }));
        }
    }
    if t <= 8 {
        for kind in [FamilyKind::IntersectCover2, FamilyKind::IntersectNotCover3] {
            let table = family::oracle_table(t, kind, OracleBound::default())?;
            let (mut bad, mut listed) = (0u64, 0u64);
            let mut identical_items_ok = true;
            for (key, observed) in &table.rows {
                let Some(unsplit) = family::unsplit_product(kind, key)? else { continue };
                listed += 1;
                if unsplit != *observed {
                    bad += 1;
                }
                let chosen = family::closed_form(kind, key)?;
                let ok = chosen.value() == Some(observed);
                identical_items_ok &= ok;
                let check = if ok {
                    Check::Pass
                } else {
                    Check::Fail(vec![Violation {
                        identity: "unsplit product times split factor",
                        lhs: format!("{chosen:?}"),
                        rhs: observed.to_string(),
                    }])
                };
                rep.record("split-factor reading", check, || json!({ "family": kind.tag(), "key": key }));
            }
            rep.observations.push(Observation {
                case: format!("{} without split factor", kind.tag()),
                detail: json!({
                    "t": t,
                    "listed_keys": listed,
                    "unsplit_mismatches": bad,
                    "with_split_factor_all_match": identical_items_ok,
                }),
            });
        }
    }
    let mut bad = 0u64;
    let mut off_cycle = 0u64;
    for d in cfg.cycles(Suite::Readings, g).into_iter().take(1) {
        for dec in decompose_all(&d)? {
            if d.contains(&dec.owner) {
                continue;
            }
            off_cycle += 1;
            let sums = checks::PairSums::of(&dec);
            if !sums.scalar_product_form_with_qt_holds() {
                bad += 1;
            }
            let check = if sums.scalar_product_form_holds() {
                Check::Pass
            } else {
                Check::Fail(vec![Violation {
                    identity: "scalar-product form with leading term C(q,2)t",
                    lhs: sums.q.to_string(),
                    rhs: String::new(),
                }])
            };
            rep.record("scalar-product reading", check, || json!({ "t": t, "vertex": dec.owner.to_string() }));
        }
    }
    rep.observations.push(Observation {
        case: "scalar-product form with leading term q·t".to_string(),
        detail: json!({ "t": t, "off_cycle_vertices": off_cycle, "qt_form_failures": bad }),
    });
    Ok(())
}

/// Suite over explicit vertices, used by the CLI's single-instance mode.
pub fn check_vertex(tope: &SignVector, d: &SymmetricCycle) -> Result<Vec<(&'static str, Check)>> {
    Ok(vec![
        ("negpart", check_negpart_identities(tope, d)?),
        ("pairwise", check_pairwise_identities(tope, d)?),
        ("coherent", check_coherent_maps(tope, d)?),
        ("circular", check_circular_translations(tope, d)?),
        ("change-of-basis", check_change_of_basis(tope, d)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), Suite::ALL.len());
        assert_eq!(Suite::parse_list("valuation,pairwise").unwrap(), vec![Suite::Valuation, Suite::Pairwise]);
        assert!(Suite::parse_list("nope").is_err());
    }

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig { t_max: 5, random_cycles: 3, ..SuiteConfig::default() };
        for s in Suite::ALL {
            let r = run_suite(s, &cfg).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.failures.first());
        }
    }

    #[test]
    fn pairwise_skips_cycle_vertices() {
        let cfg = SuiteConfig { t_max: 3, random_cycles: 0, ..SuiteConfig::default() };
        let r = run_suite(Suite::Pairwise, &cfg).unwrap();
        assert_eq!(r.skipped, 6);
        assert_eq!(r.checked, 2);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig { t_max: 5, random_cycles: 2, ..SuiteConfig::default() };
        let a = serde_json::to_string(&run_suite(Suite::Moebius, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(Suite::Moebius, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
