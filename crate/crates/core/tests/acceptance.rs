//! One pass/fail line per acceptance criterion. Orders, bounds and time
//! limits are pinned below. Criteria listed in `KNOWN_RED` print FAIL
//! without failing the test run; every other criterion must pass.

use std::time::{Duration, Instant};

use twisted_yangian::cli::{body_bytes, emit_report, run_suite, Format, Record, Report, Suite, SuiteConfig};
use twisted_yangian::report::CheckVerdict;

const KNOWN_RED: [u32; 2] = [4, 6];

const TWIST_XI: usize = 6;
const TWIST_LIMIT: Duration = Duration::from_secs(10);
const COCYCLE_XI: usize = 5;
const COCYCLE_LIMIT: Duration = Duration::from_secs(60);
const CONTROL_MAX_ORDER: usize = 2;
const HOPF_XI: usize = 4;
const HOPF_DEGREE: usize = 5;
const CYBE_LIMIT: Duration = Duration::from_secs(30);
const FUNDREP_LIMIT: Duration = Duration::from_secs(5);
const RTT_MODE: usize = 3;
const RTT_DEGREE: usize = 4;
const RTT_XI: usize = 6;
const RTT_LIMIT: Duration = Duration::from_secs(600);
const FIELDS_MODE: usize = 2;
const FIELDS_XI: usize = 2;
const FIELDS_LIMIT: Duration = Duration::from_secs(900);

struct Run {
    report: Report,
    elapsed: Duration,
}

impl Run {
    fn new(suite: Suite, xi: usize, mode: usize, degree: usize) -> Run {
        let mut cfg = SuiteConfig::new(vec![suite]);
        let (x, m, d) = suite.defaults();
        cfg.xi_order = Some(if xi > 0 { xi } else { x });
        cfg.mode_order = Some(if mode > 0 { mode } else { m });
        cfg.degree_bound = Some(if degree > 0 { degree } else { d.max(2) });
        let t0 = Instant::now();
        let report = run_suite(&cfg).expect("valid config");
        Run { report, elapsed: t0.elapsed() }
    }

    fn records(&self, prefix: &str) -> Vec<&Record> {
        self.report.body.records.iter().filter(|r| r.check.id.starts_with(prefix)).collect()
    }

    fn one(&self, id: &str) -> &Record {
        self.report.body.records.iter().find(|r| r.check.id == id).unwrap_or_else(|| panic!("missing {id}"))
    }
}

fn all_pass(rs: &[&Record]) -> bool {
    !rs.is_empty() && rs.iter().all(|r| r.check.verdict == CheckVerdict::Pass)
}

fn all_success(rs: &[&Record]) -> bool {
    !rs.is_empty() && rs.iter().all(|r| r.check.verdict.is_success())
}

fn not_passing(rs: &[&Record]) -> String {
    let bad: Vec<String> =
        rs.iter().filter(|r| !r.check.verdict.is_success()).map(|r| format!("{} {}", r.check.id, r.check.verdict.as_str())).collect();
    if bad.is_empty() {
        String::new()
    } else {
        format!("; not passing: {}", bad.join(", "))
    }
}

struct Outcome {
    n: u32,
    ok: bool,
    note: String,
}

fn line(n: u32, ok: bool, note: impl Into<String>) -> Outcome {
    let o = Outcome { n, ok, note: note.into() };
    let red = if !o.ok && KNOWN_RED.contains(&n) { " (known)" } else { "" };
    println!("criterion {:>2}: {}{red}  {}", n, if o.ok { "PASS" } else { "FAIL" }, o.note);
    o
}

#[test]
fn acceptance() {
    let mut out = Vec::new();

    let twist = Run::new(Suite::Twist, TWIST_XI, 0, 0);
    let inverse = twist.records("twist/inverse/");
    out.push(line(
        1,
        all_pass(&inverse) && twist.elapsed < TWIST_LIMIT,
        format!("F F^-1 = F^-1 F = 1 to xi^{TWIST_XI}, twist suite {:.2?} (limit {TWIST_LIMIT:?}){}", twist.elapsed, not_passing(&inverse)),
    ));

    let cocycle: Vec<&Record> =
        (0..=COCYCLE_XI).map(|k| twist.one(&format!("twist/cocycle/order-{k}"))).collect();
    let control = twist.one("twist/cocycle/control/flipped");
    let control_order = control
        .check
        .details
        .as_deref()
        .and_then(|d| d.rsplit("xi^").next())
        .and_then(|s| s.trim().parse::<usize>().ok());
    let control_ok = control.check.verdict == CheckVerdict::Pass && matches!(control_order, Some(k) if k <= CONTROL_MAX_ORDER);
    out.push(line(
        2,
        all_pass(&cocycle) && control_ok && twist.elapsed < COCYCLE_LIMIT,
        format!(
            "cocycle orders 0..={COCYCLE_XI}, flipped control fails at xi^{}{}",
            control_order.map_or("?".to_string(), |k| k.to_string()),
            not_passing(&cocycle)
        ),
    ));

    let closed = twist.records("closed-form/");
    let exact: Vec<&Record> = closed
        .iter()
        .copied()
        .filter(|r| r.check.id.contains("/coproduct/") && ["h", "T", "Ti"].iter().any(|g| r.check.id.ends_with(&format!("/{g}"))))
        .collect();
    let corrected_emit = closed
        .iter()
        .filter(|r| r.check.verdict == CheckVerdict::CorrectedPass)
        .all(|r| r.check.oracle_form.is_some() && r.check.paper_form.is_some());
    let e_forms = [twist.one("closed-form/U(sl2)-twisted/coproduct/e"), twist.one("closed-form/Y-twisted/coproduct/d")];
    out.push(line(
        3,
        all_pass(&exact) && all_success(&closed) && all_success(&e_forms) && corrected_emit,
        format!(
            "h and T coproducts exact to xi^4; e: {}, e_(delta-alpha): {}{}",
            e_forms[0].check.verdict.as_str(),
            e_forms[1].check.verdict.as_str(),
            not_passing(&closed)
        ),
    ));

    let hopf = Run::new(Suite::HopfAxioms, HOPF_XI, 0, HOPF_DEGREE);
    let axioms = hopf.records("hopf/");
    let mut adjudicated = Vec::new();
    for alg in ["U(sl2)-twisted", "Y-twisted"] {
        let pair = hopf.records(&format!("antipode-axiom/{alg}/"));
        let passing = pair.iter().filter(|r| r.check.verdict.is_success()).count();
        adjudicated.push((alg, passing, pair.len()));
    }
    let exactly_one = adjudicated.iter().all(|&(_, p, n)| n == 2 && p == 1);
    let adj: Vec<String> = adjudicated.iter().map(|(a, p, n)| format!("{a} {p}/{n} passing")).collect();
    out.push(line(
        4,
        all_success(&axioms) && exactly_one,
        format!("axioms at xi^{HOPF_XI}, degree {HOPF_DEGREE}: {} checks{}; antipode adjudication: {}", axioms.len(), not_passing(&axioms), adj.join(", ")),
    ));

    let tri = twist.records("twist/triangular/");
    out.push(line(
        5,
        all_pass(&tri) && tri.len() == 4,
        format!("R21 R = 1 to xi^{TWIST_XI}, intertwining h, e, f to xi^4{}", not_passing(&tri)),
    ));

    let cybe = Run::new(Suite::Cybe, 0, 0, 0);
    let p1 = cybe.one("cybe/residual/P1");
    let p2 = cybe.one("cybe/residual/P2");
    let lagr = cybe.records("cybe/lagrangian/");
    let controls = cybe.records("cybe/control/");
    out.push(line(
        6,
        p1.check.verdict == CheckVerdict::Pass
            && p2.check.verdict == CheckVerdict::Pass
            && all_success(&lagr)
            && all_pass(&controls)
            && cybe.elapsed < CYBE_LIMIT,
        format!(
            "P1 {}, P2 {} ({}), W1/W2 {} checks{}, {:.2?}",
            p1.check.verdict.as_str(),
            p2.check.verdict.as_str(),
            p2.check.details.as_deref().unwrap_or(""),
            lagr.len(),
            not_passing(&lagr),
            cybe.elapsed
        ),
    ));

    let fund = Run::new(Suite::Fundrep, 0, 0, 0);
    let fund_all = fund.records("fundrep/");
    let lambda = fund.one("fundrep/projector/lambda");
    let image = fund.one("fundrep/projector/image");
    out.push(line(
        7,
        all_pass(&fund_all) && fund.elapsed < FUNDREP_LIMIT && image.check.details.as_deref() == Some(r#"[["0", "1", "-1", "-xi"]]"#),
        format!("{}; image {}, {:.2?}{}", lambda.check.details.as_deref().unwrap_or(""), image.check.details.as_deref().unwrap_or(""), fund.elapsed, not_passing(&fund_all)),
    ));

    let semi = fund.one("fundrep/semiclassical");
    out.push(line(8, semi.check.verdict == CheckVerdict::Pass, semi.check.details.clone().unwrap_or_default()));

    let rtt = Run::new(Suite::RttQdet, RTT_XI, RTT_MODE, RTT_DEGREE);
    let qdet: Vec<&Record> = rtt.records("rtt/xi0/").into_iter().chain(rtt.records("rtt/xi/")).collect();
    out.push(line(
        9,
        all_success(&qdet) && rtt.elapsed < RTT_LIMIT,
        format!("mode cutoff {RTT_MODE}, degree {RTT_DEGREE}: {} checks, {:.1?}{}", qdet.len(), rtt.elapsed, not_passing(&qdet)),
    ));

    let zs: Vec<&Record> = rtt.records("rtt/z-series/").into_iter().chain(rtt.records("rtt/constant-term/")).collect();
    out.push(line(10, all_pass(&zs), format!("z^2 to xi^{RTT_XI}, constant term to xi^4{}", not_passing(&zs))));

    let fields = Run::new(Suite::Fields, FIELDS_XI, FIELDS_MODE, 0);
    let f_all = fields.records("fields/");
    let undeformed = fields.records("fields/gauss/").into_iter().filter(|r| r.check.id.ends_with("rtt-undeformed")).collect::<Vec<_>>();
    let definite = f_all.iter().all(|r| r.check.verdict != CheckVerdict::InconclusiveAtBound);
    let ry = |tags: &[&str]| f_all.iter().copied().filter(|r| tags.contains(&r.check.tag.as_str())).collect::<Vec<_>>();
    let late = ry(&["RY11", "RY12", "RY13"]);
    let late_ok = late.len() == 3
        && late.iter().all(|r| r.check.verdict == CheckVerdict::Pass || (r.check.verdict == CheckVerdict::CorrectedPass && r.check.oracle_form.is_some()));
    let early = ry(&["RY5", "RY6", "RY7", "RY8", "RY9", "RY10"]);
    out.push(line(
        11,
        all_pass(&undeformed) && definite && !early.is_empty() && late_ok && all_success(&f_all) && fields.elapsed < FIELDS_LIMIT,
        format!("{} checks at mode cutoff {FIELDS_MODE}, xi^{FIELDS_XI}, {:.1?}{}", f_all.len(), fields.elapsed, not_passing(&f_all)),
    ));

    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let mut cfg = SuiteConfig::new(vec![Suite::Twist, Suite::Cybe, Suite::Fundrep]);
            cfg.seed = 7;
            cfg.workers = 4;
            cfg.format = Format::Structured;
            emit_report(&run_suite(&cfg).expect("valid config"), Format::Structured)
        })
        .collect();
    out.push(line(12, body_bytes(&runs[0]) == body_bytes(&runs[1]), format!("{} body bytes", body_bytes(&runs[0]).len())));

    let unexpected: Vec<u32> = out.iter().filter(|o| !o.ok && !KNOWN_RED.contains(&o.n)).map(|o| o.n).collect();
    assert!(unexpected.is_empty(), "criteria failing: {unexpected:?}");
}
