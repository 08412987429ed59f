//! One line per acceptance criterion, at the criterion's own tolerances,
//! with the default suite configurations.

use std::io::Write;

use cvac::{run_suite, Suite, SuiteReport};

struct Line {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn run(suite: Suite) -> SuiteReport {
    run_suite(&suite.defaults()).unwrap_or_else(|e| panic!("{suite}: {e:#}"))
}

fn max(r: &SuiteReport, check: &str) -> f64 {
    r.check(check).unwrap_or_else(|| panic!("{} has no check {check}", r.suite)).max
}

fn count(r: &SuiteReport, check: &str) -> usize {
    r.check(check).unwrap().count
}

fn within(r: &SuiteReport, limit: f64) -> (bool, String) {
    (r.wall_time < limit, format!("{:.2} s / {limit} s", r.wall_time))
}

fn interval_law() -> Vec<Line> {
    let r = run(Suite::IntervalLaw);
    let n = count(&r, "accelerated-frame") + count(&r, "chains");
    let worst = max(&r, "accelerated-frame").max(max(&r, "chains"));
    let (fast, time) = within(&r, 5.0);
    vec![Line {
        id: "1 interval law",
        passed: n >= 10_000 && worst < 1e-9 && fast,
        detail: format!("{n} samples, max relative residual {worst:.3e} < 1e-9, {time}"),
    }]
}

fn ricci() -> Vec<Line> {
    let r = run(Suite::Ricci);
    let worst = max(&r, "flat-frames");
    let (fast, time) = within(&r, 10.0);
    vec![Line {
        id: "2 ricci flatness",
        passed: count(&r, "flat-frames") >= 50 && worst < 1e-7 && fast,
        detail: format!("{} factors, max |R| {worst:.3e} < 1e-7, {time}", count(&r, "flat-frames")),
    }]
}

fn abraham() -> Vec<Line> {
    let r = run(Suite::Abraham);
    let w = max(&r, "image-abraham");
    let hill = max(&r, "hill-agreement");
    let (fast, time) = within(&r, 30.0);
    vec![Line {
        id: "3 abraham invariance",
        passed: count(&r, "image-abraham") >= 20 && w < 1e-5 && hill < 1e-8 && fast,
        detail: format!("sup |w̄| {w:.3e} < 1e-5, hill laws {hill:.3e} < 1e-8, {time}"),
    }]
}

fn light_rays() -> Vec<Line> {
    let r = run(Suite::LightRays);
    let col = max(&r, "collinearity");
    let crossing = count(&r, "single-crossing");
    let ok = col < 1e-9
        && crossing > 0
        && max(&r, "single-crossing") == 0.0
        && max(&r, "sign-law-violations") == 0.0;
    let (fast, time) = within(&r, 5.0);
    vec![Line {
        id: "4 light rays",
        passed: ok && fast,
        detail: format!(
            "collinearity {col:.3e} < 1e-9, {crossing} single-crossing rays, sign-law violations {}, {time}",
            max(&r, "sign-law-violations")
        ),
    }]
}

fn scalar_invariance() -> Vec<Line> {
    let r = run(Suite::ScalarInvariance);
    let worst = max(&r, "extrapolated");
    let (fast, time) = within(&r, 10.0);
    vec![Line {
        id: "5 scalar invariance",
        passed: count(&r, "extrapolated") >= 1000 && worst < 1e-8 && fast,
        detail: format!("{} samples, extrapolated residual {worst:.3e} < 1e-8, {time}", count(&r, "extrapolated")),
    }]
}

fn tetrad() -> Vec<Line> {
    let r = run(Suite::Tetrad);
    let worst = max(&r, "contraction");
    let (fast, time) = within(&r, 5.0);
    vec![Line {
        id: "6 tetrad contraction",
        passed: count(&r, "contraction") >= 1000 && worst < 1e-10 && fast,
        detail: format!("{} samples, residual {worst:.3e} < 1e-10, {time}", count(&r, "contraction")),
    }]
}

fn em_invariance() -> Vec<Line> {
    let r = run(Suite::EmInvariance);
    assert_eq!((r.config.epsilon, r.config.h), (1e-2, 1e-4));
    let full = max(&r, "field-tensor");
    let half = max(&r, "field-tensor-half-step");
    let ablation = max(&r, "ablation-breaks-invariance");
    let (fast, time) = within(&r, 60.0);
    vec![
        Line {
            id: "7a em field-tensor invariance",
            passed: count(&r, "field-tensor") >= 100 && full < 1e-4 && fast,
            detail: format!("eps 1e-2, h 1e-4: residual {full:.3e} < 1e-4, {time}"),
        },
        Line {
            id: "7b em residual decreases under h -> h/2",
            passed: half < full,
            detail: format!("{full:.3e} -> {half:.3e}"),
        },
        Line {
            id: "7c em ablation without the phi phi' term exceeds 1e-4",
            passed: ablation >= 1e-4,
            detail: format!("ablation residual {ablation:.3e} (needs >= 1e-4)"),
        },
    ]
}

fn fdr() -> Vec<Line> {
    let r = run(Suite::Fdr);
    let ok = max(&r, "monotone-increases") == 0.0
        && max(&r, "coldest-gap") < 1e-12
        && max(&r, "vacuum-negative-frequency") == 0.0;
    vec![Line {
        id: "8 fluctuation-dissipation",
        passed: ok,
        detail: format!(
            "monotone in T for hbar*omega in {{-2,-1,1,2}}, gap at T=1e-6 {:.3e}, C(omega<0, T=0) = {}",
            max(&r, "coldest-gap"),
            max(&r, "vacuum-negative-frequency")
        ),
    }]
}

fn momentum_oracle() -> Vec<Line> {
    let r = run(Suite::MomentumOracle);
    let spread = max(&r, "ratio-spread");
    let (fast, time) = within(&r, 60.0);
    vec![Line {
        id: "9 momentum-space oracle",
        passed: count(&r, "ratio-spread") >= 20 && spread < 1e-2 && fast,
        detail: format!("ratio {} constant to {spread:.3e} < 1e-2, {time}", r.labels["ratio"]),
    }]
}

fn mirror() -> Vec<Line> {
    let r = run(Suite::Mirror2d);
    let labels_ok = r.labels.get("inertial").map(String::as_str) == Some("invariant")
        && r.labels.get("hyperbolic").map(String::as_str) == Some("invariant")
        && r.labels.get("sinusoidal").map(String::as_str) == Some("modified");
    let orders = max(&r, "evidence-orders-apart");
    let (fast, time) = within(&r, 5.0);
    vec![Line {
        id: "10 mirror verdicts",
        passed: labels_ok && orders >= 3.0 && fast,
        detail: format!("{:?}, evidence {orders:.1} orders apart, {time}", r.labels),
    }]
}

#[test]
fn acceptance_criteria() {
    let groups: [fn() -> Vec<Line>; 10] = [
        interval_law,
        ricci,
        abraham,
        light_rays,
        scalar_invariance,
        tetrad,
        em_invariance,
        fdr,
        momentum_oracle,
        mirror,
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for g in groups {
        for line in g() {
            let verdict = if line.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} criterion {}: {}", line.id, line.detail).unwrap();
            if !line.passed {
                failed.push(line.id);
            }
        }
    }
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
