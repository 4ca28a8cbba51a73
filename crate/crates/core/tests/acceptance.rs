//! End-to-end acceptance run: one line per criterion.

use std::time::{Duration, Instant};

use quadform::cli;
use quadform::fields::FieldDesc;
use quadform::forms::QForm;
use quadform::localglobal as lg;
use quadform::pfister::{self, PfisterSpec};
use quadform::verify::gen::{random_rational, rational_pfister};
use quadform::verify::{instance_rng, run_suite, GenConfig, SuiteReport};
use rand::Rng;

struct Check {
    ok: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Check);

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check { ok, detail: detail.into() }
}

fn suite(id: &str, samples: usize, seed: u64) -> SuiteReport {
    run_suite(id, &GenConfig::new(seed, samples)).unwrap()
}

fn summary(r: &SuiteReport) -> String {
    format!(
        "{} n={} skipped={} replayed={} violations={}",
        r.suite,
        r.instances,
        r.skipped,
        r.certificates_replayed,
        r.violations.len()
    )
}

fn clean(reports: &[SuiteReport]) -> bool {
    reports.iter().all(|r| r.passed())
}

fn finite_ground_truth() -> Check {
    let t = Instant::now();
    let mut reports = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        let cfg = GenConfig::new(0, 400).with_field(FieldDesc::PrimeField(p));
        reports.push(run_suite("local-global", &cfg).unwrap());
    }
    let n: usize = reports.iter().map(|r| r.instances).sum();
    let bad: usize = reports.iter().map(|r| r.violations.len()).sum();
    let el = t.elapsed();
    check(
        clean(&reports) && n >= 2000 && el < Duration::from_secs(60),
        format!("{n} instances, {bad} disagreements, {el:.1?}"),
    )
}

fn rational_consistency() -> Check {
    let t = Instant::now();
    let cfg = GenConfig::new(0, 600).with_field(FieldDesc::Rationals).with_dims(1, 5);
    let r = run_suite("local-global", &cfg).unwrap();
    let el = t.elapsed();
    check(r.passed() && el < Duration::from_secs(120), format!("{}, {el:.1?}", summary(&r)))
}

fn springer() -> Check {
    let r = suite("springer", 1000, 0);
    check(r.passed(), format!("{} (every 10th instance brute-forced mod x^2)", summary(&r)))
}

fn hauptsatz() -> Check {
    let t = Instant::now();
    let r = suite("hauptsatz", 400, 0);
    let el = t.elapsed();
    check(r.passed() && el < Duration::from_secs(120), format!("{}, {el:.1?}", summary(&r)))
}

fn ekm_gen() -> Check {
    let r = suite("ekm-gen", 100, 0);
    check(r.passed() && r.certificates_replayed == 100, summary(&r))
}

fn division_round_trip() -> Check {
    let f = FieldDesc::Rationals;
    let mut bad = 0;
    for i in 0..200 {
        let mut rng = instance_rng(0, i);
        let n = rng.gen_range(1..=3);
        let pi: PfisterSpec = rational_pfister(&mut rng, n, 12);
        let dr = rng.gen_range(1..=3);
        let r: QForm = random_rational(&mut rng, dr, 12);
        let big = pi.expand(&f).unwrap();
        let q = big.tensor(&r).unwrap();
        let ok = match pfister::divide_by_pfister(&q, &pi).unwrap() {
            Some(quot) => lg::is_isometric(&big.tensor(&quot).unwrap(), &q).unwrap(),
            None => false,
        };
        bad += !ok as usize;
    }
    check(bad == 0, format!("200 instances, {bad} failures"))
}

fn quad_ext() -> Check {
    let r = suite("quad-ext", 600, 0);
    check(r.passed(), format!("{} (200 brute-force u+v*sqrt(a) checks)", summary(&r)))
}

fn i1_itrans() -> Check {
    let rs = [suite("i1", 200, 0), suite("itrans", 200, 0)];
    let ok = clean(&rs) && rs.iter().all(|r| r.skip_rate() < 0.5);
    check(ok, rs.iter().map(summary).collect::<Vec<_>>().join("; "))
}

fn becher_el73() -> Check {
    let rs = [suite("becher", 200, 0), suite("el73", 200, 0)];
    check(clean(&rs), rs.iter().map(summary).collect::<Vec<_>>().join("; "))
}

fn replay() -> Check {
    let ids = [
        "hauptsatz",
        "ekm-gen",
        "hyp-multiples",
        "quad-ext",
        "self-pfister",
        "f32",
        "hypchar-iv",
        "subform",
        "i1",
        "itrans",
    ];
    let rs: Vec<SuiteReport> = ids.iter().map(|id| suite(id, 200, 1)).collect();
    let replayed: usize = rs.iter().map(|r| r.certificates_replayed).sum();
    let failed: usize = rs.iter().flat_map(|r| &r.violations).filter(|v| v.message.contains("replay")).count();
    check(failed == 0 && replayed > 0 && clean(&rs), format!("{replayed} certificates replayed, {failed} failed"))
}

fn golden() -> Check {
    let cases: [(&str, &[&str]); 3] = [
        ("witt_laurent.json", &["witt", "--field", "Q((x))", "<1,-1> + x*<1,1>", "--json"]),
        ("hyp_over.json", &["hyp-over", "--field", "Q", "--q", "<1,1,1,1>", "--p", "<1,1>", "--json"]),
        ("verify_hauptsatz.json", &["verify", "hauptsatz", "--seed", "7", "--json"]),
    ];
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/");
    let mut mismatched = Vec::new();
    for (file, args) in cases {
        let want = std::fs::read_to_string(format!("{dir}{file}")).unwrap();
        let out = cli::run(std::iter::once("quadform").chain(args.iter().copied()));
        if out.code != 0 || out.stdout != want {
            mismatched.push(file);
        }
    }
    check(mismatched.is_empty(), format!("3 invocations, mismatched: {mismatched:?}"))
}

fn main() {
    // libtest flags such as --nocapture are accepted and ignored
    let criteria: [Criterion; 11] = [
        ("finite-field ground truth", finite_ground_truth),
        ("rational isotropy consistency", rational_consistency),
        ("Springer additivity", springer),
        ("Hauptsatz", hauptsatz),
        ("EKM generic values", ekm_gen),
        ("Pfister division round-trip", division_round_trip),
        ("quadratic extension", quad_ext),
        ("i1 / itrans", i1_itrans),
        ("Becher / Elman-Lam", becher_el73),
        ("certificate replay", replay),
        ("CLI golden files", golden),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let c = f();
        let tag = if c.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2}. {name}: {} ({:.1?})", k + 1, c.detail, t.elapsed());
        failed += !c.ok as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
