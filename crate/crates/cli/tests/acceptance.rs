//! Acceptance run: every criterion at its stated tolerance, one PASS/FAIL
//! line each. Runs without the test harness so the lines always print.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use galmon::ends::{Reconstruction, TannakianContext, DEFAULT_MAX_FAMILIES};
use galmon::fixtures;
use galmon::galois::{self, connection_laws, galois_correspondence};
use galmon::monoid::{antipode, enumerate_submonoids, enumerate_subgroups, is_hopf, validate_monoid};
use galmon::{canonical_site, FinSet, Monoid, Site, SiteSpec};
use galmon_cli::report::{adjunction_sweep, SWEEP_INSTANCES, SWEEP_MAX_CARRIER};

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion(id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = budget.is_none_or(|b| elapsed < b);
    let pass = out.pass && in_time;
    let bound = budget.map(|b| format!(" (limit {:?})", b)).unwrap_or_default();
    println!(
        "{} {id}. {name}: {} [{:.2?}{bound}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed
    );
    pass
}

fn default_site(m: &Monoid) -> Site {
    canonical_site(m, &SiteSpec::default_for(m)).unwrap()
}

fn invariants_oracle() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, m) in fixtures::core_monoids() {
        let site = default_site(&m);
        for sub in enumerate_submonoids(&m) {
            let inv = galois::invariants(sub.inclusion(), &site).unwrap();
            let oracle = galois::invariants_oracle(sub.inclusion(), &site).unwrap();
            checked += 1;
            if inv != oracle {
                bad.push(format!("{name} {:?}", sub.labels()));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{checked} inclusions, mismatches {bad:?}") }
}

fn stabilizer_oracle() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, m) in fixtures::core_monoids() {
        let site = default_site(&m);
        let ctx = TannakianContext::new(&site, DEFAULT_MAX_FAMILIES).unwrap();
        let mut images = Vec::new();
        for sub in enumerate_submonoids(&m) {
            let inv = galois::invariants(sub.inclusion(), &site).unwrap();
            if !images.contains(&inv) {
                images.push(inv);
            }
        }
        for v in &images {
            checked += 1;
            if galois::stabilizer_in(&ctx, v).unwrap() != galois::stabilizer(v).unwrap() {
                bad.push(format!("{name} {v:?}"));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{checked} subfunctors, mismatches {bad:?}") }
}

fn classical_correspondence() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, m, expected) in [("S3", fixtures::s3(), 6), ("Z4", fixtures::z4(), 3)] {
        let site = canonical_site(&m, &"free+cosets".parse().unwrap()).unwrap();
        let subgroups = enumerate_subgroups(&m);
        let closed = subgroups
            .iter()
            .filter(|h| galois::stabilizer(&galois::invariants(h.inclusion(), &site).unwrap()).unwrap() == **h)
            .count();
        let c = galois_correspondence(&m, &site).unwrap();
        let ok = subgroups.len() == expected && closed == expected && c.order_reversing;
        pass &= ok;
        details.push(format!("{name}: {closed}/{} subgroups closed, order reversing {}", subgroups.len(), c.order_reversing));
    }
    Outcome { pass, detail: details.join("; ") }
}

fn reconstruction() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, m) in [("Z2", fixtures::z2()), ("Z3", fixtures::z3()), ("S3", fixtures::s3()), ("E2", fixtures::e2())] {
        let site = canonical_site(&m, &"free".parse().unwrap()).unwrap();
        let r = Reconstruction::new(&site, DEFAULT_MAX_FAMILIES).unwrap();
        let ok = r.rho.is_bijective() && r.monoid.len() == m.len();
        pass &= ok;
        details.push(format!("{name} {}", if ok { "≅" } else { "≇" }));
    }
    Outcome { pass, detail: details.join(", ") }
}

fn laws() -> Outcome {
    let mut runs = 0;
    let mut bad = Vec::new();
    for (name, m) in fixtures::core_monoids() {
        let mut sites = vec![
            ("default", default_site(&m)),
            ("free", canonical_site(&m, &"free".parse().unwrap()).unwrap()),
            ("trivial", canonical_site(&m, &"trivial".parse().unwrap()).unwrap()),
            ("free:2+trivial", canonical_site(&m, &"free:2+trivial".parse().unwrap()).unwrap()),
            ("empty", Site::new(&m, Vec::new()).unwrap()),
        ];
        if m.is_group() {
            sites.push(("cosets", canonical_site(&m, &"cosets".parse().unwrap()).unwrap()));
        }
        for (site_name, site) in sites {
            runs += 1;
            if !connection_laws(&m, &site).unwrap().all_hold() {
                bad.push(format!("{name}/{site_name}"));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{runs} monoid/site pairs, failures {bad:?}") }
}

/// Every monoid structure on `{0, …, n-1}` with unit `0`.
fn all_monoids(n: usize) -> Vec<Monoid> {
    let free_cells = (n - 1) * (n - 1);
    (0..n.pow(free_cells as u32))
        .filter_map(|code| {
            let mut rest = code;
            let table = (0..n * n)
                .map(|k| match (k / n, k % n) {
                    (0, b) => b,
                    (a, 0) => a,
                    _ => {
                        let v = rest % n;
                        rest /= n;
                        v
                    }
                })
                .collect();
            let m = Monoid::new_unchecked(FinSet::range(n), table, 0).unwrap();
            validate_monoid(&m).is_ok().then_some(m)
        })
        .collect()
}

fn hopf() -> Outcome {
    let invertible = |m: &Monoid| (0..m.len()).all(|a| (0..m.len()).any(|b| m.mul(a, b) == m.unit() && m.mul(b, a) == m.unit()));
    let antipode_ok = |m: &Monoid| match antipode(m) {
        Ok(s) => (0..m.len()).all(|a| m.mul(s.at(a), a) == m.unit() && m.mul(a, s.at(a)) == m.unit()),
        Err(_) => !is_hopf(m),
    };
    let mut monoids: Vec<Monoid> = (1..=4).flat_map(all_monoids).collect();
    let exhaustive = monoids.len();
    let named = fixtures::named_monoids();
    let non_groups = named.iter().filter(|(_, m)| !m.is_group()).count();
    monoids.extend(named.into_iter().map(|(_, m)| m));
    let bad = monoids.iter().filter(|m| is_hopf(m) != invertible(m) || !antipode_ok(m)).count();
    Outcome {
        pass: bad == 0 && non_groups >= 5,
        detail: format!(
            "{exhaustive} exhaustive tables (orders 1-4) plus {} named ({non_groups} non-groups), disagreements {bad}",
            monoids.len() - exhaustive
        ),
    }
}

fn adjunctions() -> Outcome {
    let sweep = adjunction_sweep(galmon::sampling::DEFAULT_SEED, SWEEP_INSTANCES, SWEEP_MAX_CARRIER).unwrap();
    Outcome {
        pass: sweep.failures.is_empty() && sweep.instances == 50,
        detail: format!("{}/{} instances, seed {:#x}", sweep.passed, sweep.instances, sweep.seed),
    }
}

fn determinism() -> Outcome {
    let s3 = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/s3.json");
    let run = || Command::new(env!("CARGO_BIN_EXE_galmon")).arg("corr").arg("--monoid").arg(&s3).output().unwrap();
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout;
    Outcome { pass: ok, detail: format!("{} bytes, identical {}", a.stdout.len(), a.stdout == b.stdout) }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "invariants equal the oracle", Some(secs(10)), invariants_oracle),
        criterion(2, "stabilizers through ends equal pointwise stabilizers", Some(secs(30)), stabilizer_oracle),
        criterion(3, "classical Galois correspondence for S3 and Z4", Some(secs(10)), classical_correspondence),
        criterion(4, "reconstruction over F(1)", Some(secs(10)), reconstruction),
        criterion(5, "Galois-connection laws", None, laws),
        criterion(6, "Hopf iff every element is invertible", None, hopf),
        criterion(7, "adjunction bijections and naturality", None, adjunctions),
        criterion(8, "byte-identical corr output", None, determinism),
    ];
    let failed: Vec<usize> = (0..results.len()).filter(|&i| !results[i]).map(|i| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
