//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//! Builds the full catalog once; expect several minutes on one core.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nker::catalog;
use nker::group::MAX_ORDER;
use nker::schur::Field;
use nker::verify::{self, Context, Point};

const SHOWN_FAILURES: usize = 4;

/// Members the catalog must contain, one or more per required family.
const REQUIRED: &[&str] = &[
    "C1", "C64", "C2^6", "C4^3", "S3", "S4", "A4", "D4", "D6", "Q8", "Dic(2)", "Dic(16)",
    "GDic(6;3)", "GDic(4,2;2)", "GDic(8;4)", "GDic(4,4;2)", "GDic(12;6)",
    "C4 x Q8", "C4 x Q8 x C2", "C4 x Q8 x C2^2", "Q8 x Q8",
    "Q8 x C3", "Q8 x C2^2 x C3", "Q8 x C21", "Q8 x C2 x C7",
    "PQ(2,3,1,1)", "PQ(2,5,1,2)", "PQ(3,7,1,1)", "PQ(3,7,1,1) x C2",
];

struct Criterion {
    id: u8,
    what: &'static str,
    points: Vec<Point>,
    extra: Vec<String>,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.extra.is_empty() && self.points.iter().all(Point::passed)
    }

    fn line(&self) -> String {
        let failed: Vec<&Point> = self.points.iter().filter(|p| !p.passed()).collect();
        let head = format!(
            "criterion {}: {} - {} ({} checks, {} failed)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.what,
            self.points.len(),
            failed.len() + self.extra.len()
        );
        let mut reasons: Vec<String> = self.extra.clone();
        reasons.extend(failed.iter().map(|p| {
            let why = p.outcome.as_ref().err().map(String::as_str).unwrap_or("");
            format!("{} [{why}]", p.name)
        }));
        if reasons.is_empty() {
            return head;
        }
        let more = reasons.len().saturating_sub(SHOWN_FAILURES);
        reasons.truncate(SHOWN_FAILURES);
        let tail = if more > 0 { format!("; and {more} more") } else { String::new() };
        format!("{head}: {}{tail}", reasons.join("; "))
    }
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let start = Instant::now();
    let specs = catalog::curated();
    let ctx = Context::build(jobs());
    let catalog_time = start.elapsed();

    let mut c1 = Vec::new();
    if specs.len() < 60 {
        c1.push(format!("catalog has {} entries", specs.len()));
    }
    for r in REQUIRED {
        if !specs.iter().any(|s| s == r) {
            c1.push(format!("{r} missing from catalog"));
        }
    }
    let ortho = verify::orthogonality(&ctx);
    let (triviality, ortho): (Vec<Point>, Vec<Point>) =
        ortho.into_iter().partition(|p| p.name.contains("nonlinear kernels"));
    let c1_time = start.elapsed();
    if c1_time > Duration::from_secs(300) {
        c1.push(format!("took {:.0}s", c1_time.as_secs_f64()));
    }

    let mut c6 = verify::en_pairing(&ctx);
    c6.extend(triviality);
    c6.extend(verify::restriction(&ctx));

    let criteria = vec![
        Criterion { id: 1, what: "orthogonality and degree sums on the catalog", points: ortho, extra: c1 },
        Criterion {
            id: 2,
            what: "real kernels match the classifier",
            points: verify::classifier_points(&ctx, Field::Real),
            extra: vec![],
        },
        Criterion {
            id: 3,
            what: "rational kernels match the classifier, no unknown verdicts",
            points: verify::classifier_points(&ctx, Field::Rational),
            extra: vec![],
        },
        Criterion { id: 4, what: "division-product predicates on Q8 blocks", points: verify::sehgal(&ctx), extra: vec![] },
        Criterion { id: 5, what: "inclusion chain with strict witnesses", points: verify::inclusions(&ctx), extra: vec![] },
        Criterion { id: 6, what: "pairing, triviality, restriction, linearity, compositum", points: c6, extra: vec![] },
        Criterion {
            id: 7,
            what: "PQ closed form <g^(p^s)> (unproved; failures are counterexamples)",
            points: verify::pq_families(jobs(), MAX_ORDER),
            extra: vec![],
        },
    ];

    println!("acceptance: {} catalog entries analysed in {:.1}s", specs.len(), catalog_time.as_secs_f64());
    for c in &criteria {
        println!("{}", c.line());
    }
    let failed = criteria.iter().filter(|c| !c.passed()).count();
    println!("acceptance: {} of {} criteria pass ({:.0}s)", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
