//! Acceptance suite: one PASS/FAIL line per criterion at 128 digits.

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use sixvertex::checks::{run_group, CheckRecord, SuiteConfig};
use sixvertex::numerics::Precision;

struct Criterion {
    id: u32,
    title: &'static str,
    group: &'static str,
    records: &'static [&'static str],
}

const CRITERIA: [Criterion; 12] = [
    Criterion {
        id: 1,
        title: "partition function: oracle = determinant = QISM",
        group: "partition",
        records: &["z-oracle-vs-determinant", "z-oracle-vs-qism"],
    },
    Criterion {
        id: 2,
        title: "inhomogeneous EFP: oracle = multiple sum = QISM",
        group: "efp-inhom",
        records: &["efp-oracle-vs-sum", "efp-oracle-vs-qism"],
    },
    Criterion {
        id: 3,
        title: "homogeneous chain: determinant = MIR1 = MIR2 (= MIR3)",
        group: "homogeneous",
        records: &["hom-vs-mir1", "hom-vs-mir2", "hom-vs-mir3"],
    },
    Criterion {
        id: 4,
        title: "ice point: alternating sign matrix counts",
        group: "partition",
        records: &["ice-point-enumeration"],
    },
    Criterion {
        id: 5,
        title: "free-fermion point: Z_N = 1",
        group: "partition",
        records: &["free-fermion-z"],
    },
    Criterion {
        id: 6,
        title: "boundary polarization F_3^(r,1) = 2/7, 5/7, 1",
        group: "homogeneous",
        records: &["boundary-polarization"],
    },
    Criterion {
        id: 7,
        title: "recurrences in N for Z and F",
        group: "recurrences",
        records: &["recurrence-z", "recurrence-efp"],
    },
    Criterion {
        id: 8,
        title: "Yang-Baxter suite",
        group: "yang-baxter",
        records: &["rtt-16-entries", "bb-commute", "ab-exchange", "key-relation", "two-site-triangular"],
    },
    Criterion {
        id: 9,
        title: "orthogonal-polynomial identities",
        group: "orthopoly",
        records: &[
            "hankel-product",
            "bordered-hankel",
            "claim-residue",
            "v-equals-signed-ah",
            "a-matrix-power",
            "h-normalization",
            "hns-reduction",
        ],
    },
    Criterion {
        id: 10,
        title: "bare partition function vs near-homogeneous determinant",
        group: "bare-z",
        records: &["bare-z-vs-determinant"],
    },
    Criterion {
        id: 11,
        title: "Laplace grounding of phi and its moments",
        group: "laplace",
        records: &["laplace-phi", "laplace-moments"],
    },
    Criterion {
        id: 12,
        title: "antisymmetrization identity, s = 2, 3",
        group: "contour",
        records: &["antisymmetrization"],
    },
];

const PARTITION_BUDGET: Duration = Duration::from_secs(120);

fn line(pass: bool, id: u32, title: &str, detail: &str) {
    println!("{} {id:>2}. {title}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn summarize(recs: &[&CheckRecord]) -> String {
    recs.iter()
        .map(|r| format!("{} {:.2e} (tol {:.0e})", r.name, r.max_dev, r.tol))
        .collect::<Vec<_>>()
        .join("; ")
}

fn determinism() -> (bool, String) {
    let args = [
        "sweep", "--N", "5", "--smax", "3", "--lambda", "1.45", "--eta", "0.4", "--workers", "4",
    ];
    let run = || Command::new(env!("CARGO_BIN_EXE_sixvertex")).args(args).output();
    match (run(), run()) {
        (Ok(a), Ok(b)) if a.status.success() && b.status.success() => {
            let same = a.stdout == b.stdout && !a.stdout.is_empty();
            (same, format!("two sweeps, {} CSV bytes, identical = {same}", a.stdout.len()))
        }
        (Ok(a), _) if !a.status.success() => (false, format!("sweep failed: {}", String::from_utf8_lossy(&a.stderr))),
        (_, Ok(b)) if !b.status.success() => (false, format!("sweep failed: {}", String::from_utf8_lossy(&b.stderr))),
        (Err(e), _) | (_, Err(e)) => (false, format!("cannot run sweep: {e}")),
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::new(Precision::new(128));
    let mut groups: HashMap<&str, Result<Vec<CheckRecord>, String>> = HashMap::new();
    let mut elapsed: HashMap<&str, Duration> = HashMap::new();
    let mut all = true;

    for c in &CRITERIA {
        let result = groups.entry(c.group).or_insert_with(|| {
            let t = Instant::now();
            let res = run_group(&cfg, c.group).map_err(|e| e.to_string());
            elapsed.insert(c.group, t.elapsed());
            res
        });
        let (pass, detail) = match result {
            Err(e) => (false, format!("error: {e}")),
            Ok(records) => {
                let found: Vec<&CheckRecord> = c
                    .records
                    .iter()
                    .filter_map(|name| records.iter().find(|r| r.name == *name))
                    .collect();
                let mut pass = found.len() == c.records.len() && found.iter().all(|r| r.pass);
                let mut detail = summarize(&found);
                if found.len() != c.records.len() {
                    detail.push_str("; missing records");
                }
                if c.id == 1 {
                    let t = elapsed[c.group];
                    pass &= t < PARTITION_BUDGET;
                    detail.push_str(&format!("; runtime {:.1} s (budget {} s)", t.as_secs_f64(), PARTITION_BUDGET.as_secs()));
                }
                (pass, detail)
            }
        };
        all &= pass;
        line(pass, c.id, c.title, &detail);
    }

    let (pass, detail) = determinism();
    all &= pass;
    line(pass, 13, "determinism of sweep CSV output", &detail);

    if all {
        println!("acceptance: all 13 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
