//! Self-checks behind the `verify` command.
//!
//! Each suite returns a [`SuiteReport`]: a list of pass/fail checks plus
//! free-form findings. Findings record measured facts that are reported
//! whether or not they agree with a reference value, such as the exact
//! maximum deviation between the Life and Lorentz laws.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::catalog;
use crate::chess::exhaustive_check;
use crate::detect::{detect_emissions, EmissionEvent};
use crate::kinematics::{
    compose_oblique, compose_parallel, deviation, galilean, invert_oblique, lorentz,
    max_deviation_scan, CompositionInput, Tangent, Velocity,
};
use crate::{Rational, Scalar, Velocity2};

/// Largest move count the token oracle enumerates by default.
pub const ORACLE_MAX_MOVES: u64 = 48;
/// Grid spacing of the default deviation scan.
pub const DEVIATION_STEP: (i128, i128) = (1, 1000);
/// Generations the Gosper gun runs in the emission suite.
pub const EMISSION_HORIZON: u64 = 300;
pub const EMISSION_MIN_EVENTS: usize = 9;
pub const GUN_PERIOD: u64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Catalog,
    Parallel,
    Oblique,
    Oracle,
    Deviation,
    Emissions,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Catalog,
        Suite::Parallel,
        Suite::Oblique,
        Suite::Oracle,
        Suite::Deviation,
        Suite::Emissions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Catalog => "catalog",
            Suite::Parallel => "parallel",
            Suite::Oblique => "oblique",
            Suite::Oracle => "oracle",
            Suite::Deviation => "deviation",
            Suite::Emissions => "emissions",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub findings: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checks: Vec::new(),
            findings: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn run(suite: Suite) -> SuiteReport {
    match suite {
        Suite::Catalog => catalog_suite(),
        Suite::Parallel => parallel_suite(),
        Suite::Oblique => oblique_suite(),
        Suite::Oracle => oracle_suite(ORACLE_MAX_MOVES),
        Suite::Deviation => deviation_suite(r(DEVIATION_STEP.0, DEVIATION_STEP.1)),
        Suite::Emissions => emissions_suite(EMISSION_HORIZON),
    }
}

/// Re-measures every catalog entry that carries an expected summary.
pub fn catalog_suite() -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Catalog);
    for entry in catalog::entries() {
        let Some(exp) = entry.expected else { continue };
        match entry.measure() {
            Some(m) => rep.check(
                entry.name,
                (m.kind, m.period, m.displacement) == (exp.kind, exp.period, exp.displacement),
                m.summary(),
            ),
            None => rep.check(entry.name, false, "not periodic"),
        }
    }
    rep
}

pub fn parallel_suite() -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Parallel);
    let life = |a, b| compose_parallel(a, b).expect("unit inputs");

    let v = life(r(1, 2), r(1, 2));
    rep.check(
        "life 1/2 + 1/2",
        v == r(3, 4),
        format!("v12={v} expected=3/4"),
    );

    let v = life(r(2, 5), r(1, 2));
    rep.check(
        "life 2/5 + 1/2",
        v == r(7, 10),
        format!("v12={v} expected=7/10"),
    );

    let g = galilean(r(2, 5), r(1, 2));
    let l = lorentz(r(2, 5), r(1, 2)).expect("regular");
    rep.check(
        "galilean vs lorentz 2/5 + 1/2",
        g == r(9, 10) && l == r(3, 4) && v < l && l < g,
        format!("galilean={g} lorentz={l} life={v}"),
    );
    rep
}

/// Rationals `n/d` in `[lo, 1]` with `d <= max_den`, deduplicated.
fn small_rationals(max_den: i128, signed: bool) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for d in 1..=max_den {
        let lo = if signed { -d } else { 0 };
        for n in lo..=d {
            out.push(r(n, d));
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn oblique_suite() -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Oblique);

    let input = CompositionInput::new(r(1, 4), Velocity::new(r(0, 1), r(1, 3))).expect("valid");
    let res = compose_oblique(&input);
    let magnitudes = (res.v12.vx.abs(), res.v12.vy.abs());
    rep.check(
        "sample v1=1/4 bullet=(0,1/3)",
        magnitudes == (r(1, 4), r(1, 4)),
        format!("v12={} |v12|=({},{})", res.v12, magnitudes.0, magnitudes.1),
    );
    let tan = res.tan_chi.clone();
    rep.check(
        "sample direction",
        tan == Some(Tangent::Slope(r(1, 1))),
        format!(
            "tan_chi={} degrees={:.1}",
            tan.map_or("none".to_string(), |t| t.to_string()),
            res.degrees().unwrap_or(f64::NAN)
        ),
    );
    let reference = Velocity::new(r(-1, 4), r(1, 4));
    if res.v12 != reference {
        rep.findings.push(format!(
            "convention-discrepancy: reference sample lists v12={reference} chi=135deg; \
             the composition formulas give v12={} tan_chi=1 chi={:.0}deg; \
             magnitudes agree, the x sign and angle do not",
            res.v12,
            res.degrees().unwrap_or(f64::NAN)
        ));
    }

    let grid = small_rationals(8, true);
    let carriers: Vec<Rational> = small_rationals(8, false)
        .into_iter()
        .filter(|v| *v < r(1, 1))
        .collect();
    let mut cases = 0u64;
    let mut reduction_failures = 0u64;
    let mut inverse_failures = 0u64;
    let mut bound_failures = 0u64;
    for v1 in &carriers {
        for vx in &grid {
            for vy in &grid {
                let Ok(input) = CompositionInput::new(*v1, Velocity::new(*vx, *vy)) else {
                    continue;
                };
                cases += 1;
                let res = compose_oblique(&input);
                if res.v12.chebyshev_speed() > r(1, 1) {
                    bound_failures += 1;
                }
                if invert_oblique(*v1, &res.v12).ok().as_ref() != Some(&input.bullet) {
                    inverse_failures += 1;
                }
                if vy.is_zero() && *vx >= r(0, 1) {
                    let expected = compose_parallel(*v1, *vx).expect("unit");
                    if res.v12 != Velocity::new(expected, r(0, 1)) {
                        reduction_failures += 1;
                    }
                }
            }
        }
    }
    rep.check(
        "reduction to parallel law",
        reduction_failures == 0,
        format!("{reduction_failures} failures"),
    );
    rep.check(
        "inverse round trip",
        inverse_failures == 0,
        format!("{inverse_failures} failures over {cases} cases"),
    );
    rep.check(
        "light-speed bound",
        bound_failures == 0,
        format!("{bound_failures} superluminal results over {cases} cases"),
    );
    rep
}

pub fn oracle_suite(max_moves: u64) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Oracle);
    let report = exhaustive_check(max_moves);
    let detail = format!(
        "{} counterexamples / P <= {} ({} triples, {} with n1 = P)",
        report.counterexamples.len(),
        max_moves,
        report.triples,
        report.degenerate
    );
    rep.check(
        "token model vs parallel law",
        report.counterexamples.is_empty(),
        detail,
    );
    for c in report.counterexamples.iter().take(5) {
        rep.findings.push(format!(
            "counterexample P={} n1={} n2={} simulated={} formula={}",
            c.total_moves, c.n1, c.n2, c.simulated, c.formula
        ));
    }
    rep
}

pub fn deviation_suite(step: Rational) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Deviation);
    let best = match max_deviation_scan(step) {
        Ok(b) => b,
        Err(e) => {
            rep.check("scan", false, e.to_string());
            return rep;
        }
    };
    let half = deviation(r(1, 2), r(1, 2)).expect("unit").delta;
    rep.check(
        "scan maximum dominates grid point (1/2,1/2)",
        best.delta >= half,
        format!("max={} at ({},{}) vs 1/20", best.delta, best.v1, best.v2),
    );
    let identity = lorentz(best.v1, best.v2).expect("regular")
        - compose_parallel(best.v1, best.v2).expect("unit");
    rep.check(
        "maximum equals lorentz - life",
        identity == best.delta,
        format!("lorentz-life={identity}"),
    );
    let claimed = 0.05f64;
    let max_f = best.delta.to_f64_lossy();
    rep.findings.push(format!(
        "max_delta={} ~{:.6} at v1={} v2={} step={}",
        best.delta, max_f, best.v1, best.v2, step
    ));
    rep.findings.push(format!(
        "claim delta<=0.05: {} (max exceeds 1/20: {})",
        if max_f <= claimed {
            "holds"
        } else {
            "violated"
        },
        best.delta > r(1, 20)
    ));
    rep
}

/// Emission census of the Gosper gun, a carrier at rest.
pub fn gun_emissions(horizon: u64) -> Vec<EmissionEvent> {
    let gun = catalog::pattern("gosper-gun");
    detect_emissions(&gun, horizon, &catalog::ship_reports()).expect("horizon covers a period")
}

pub fn emissions_suite(horizon: u64) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Emissions);
    let events = gun_emissions(horizon);
    rep.check(
        "gun emits gliders",
        events.len() >= EMISSION_MIN_EVENTS,
        format!("{} events in {} generations", events.len(), horizon),
    );

    let quarter = r(1, 4);
    let bad_speed = events
        .iter()
        .filter(|e| e.ground_velocity.vx.abs() != quarter || e.ground_velocity.vy.abs() != quarter)
        .count();
    rep.check(
        "measured components are exactly 1/4",
        !events.is_empty() && bad_speed == 0,
        format!("{bad_speed} events off 1/4"),
    );

    let stride_ok = events
        .windows(2)
        .all(|w| w[1].birth_generation - w[0].birth_generation == GUN_PERIOD);
    let births: Vec<String> = events
        .iter()
        .map(|e| e.birth_generation.to_string())
        .collect();
    rep.check(
        "births in steps of the gun period",
        stride_ok,
        format!("births={}", births.join(",")),
    );

    let zero = Rational::from_integer(0);
    let identity_failures = events
        .iter()
        .filter(|e| !carrier_at_rest_consistent(&e.ground_velocity, zero))
        .count();
    rep.check(
        "carrier at rest: inverse and composition are the identity",
        identity_failures == 0,
        format!("{identity_failures} failures"),
    );

    let glider_velocity = catalog::find("glider")
        .and_then(|e| e.measure())
        .map(|m| m.velocity);
    let catalog_ok = glider_velocity.as_ref().is_some_and(|gv| {
        events.iter().all(|e| {
            (e.ground_velocity.vx.abs(), e.ground_velocity.vy.abs()) == (gv.vx.abs(), gv.vy.abs())
        })
    });
    rep.check(
        "measured velocity matches catalog glider",
        catalog_ok,
        format!(
            "catalog v={}",
            glider_velocity.map_or("none".to_string(), |v| v.to_string())
        ),
    );
    rep
}

/// With `v1 = 0` the inverse transform and the composition law must both
/// return the measured velocity unchanged.
fn carrier_at_rest_consistent(v: &Velocity2, v1: Rational) -> bool {
    let Ok(inverse) = invert_oblique(v1, v) else {
        return false;
    };
    let Ok(input) = CompositionInput::new(v1, inverse.clone()) else {
        return false;
    };
    inverse == *v && compose_oblique(&input).v12 == *v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for s in [Suite::Catalog, Suite::Parallel, Suite::Oblique] {
            let rep = run(s);
            assert!(rep.passed(), "{s}: {:?}", rep.checks);
        }
    }

    #[test]
    fn parallel_has_three_checks() {
        let rep = parallel_suite();
        assert_eq!((rep.checks.len(), rep.passed_count()), (3, 3));
    }

    #[test]
    fn oblique_reports_the_sign_finding() {
        let rep = oblique_suite();
        assert!(rep
            .findings
            .iter()
            .any(|f| f.starts_with("convention-discrepancy")));
    }

    #[test]
    fn coarse_deviation_scan() {
        let rep = deviation_suite(r(1, 2));
        assert!(rep.passed());
        assert!(rep.findings[0].starts_with("max_delta=1/20"));
        assert!(rep.findings[1].contains("holds"));
    }

    #[test]
    fn small_oracle() {
        let rep = oracle_suite(6);
        assert!(rep.passed());
        assert!(rep.checks[0]
            .detail
            .starts_with("0 counterexamples / P <= 6"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
