//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modorbit::analytic::{
    abel_identity_check, bound_shadow, density_eps, density_gamma, log_grid, msum_bound_check, sumlogp_check,
};
use modorbit::baseline::{exhaustive_rho, sample_rho_with_jobs};
use modorbit::dynamics::{AffinePolyMap, ProjPointQ, ProjectiveMorphism};
use modorbit::experiments::{calibrate, table2, CalibrationReport, TABLE1_PARAMS, TABLE2};
use modorbit::heights::{d_m, dm_equivalence_check, dm_growth, min_loglog_ratio, ExactOrbit};
use modorbit::orbit::{orbit_census_with, Census, CensusOptions, CycleMethod};

struct Outcome {
    pass: bool,
    detail: String,
    csv: String,
}

struct Run {
    jobs: usize,
    census_1e4: Option<Census>,
    census_1e5: Option<Census>,
    calibration: Option<CalibrationReport>,
}

fn quad(c: i64) -> ProjectiveMorphism {
    AffinePolyMap::quadratic(c).to_morphism()
}

impl Run {
    fn new(jobs: usize) -> Self {
        Run {
            jobs,
            census_1e4: None,
            census_1e5: None,
            calibration: None,
        }
    }

    fn options(&self, method: CycleMethod) -> CensusOptions {
        CensusOptions {
            jobs: Some(self.jobs),
            method,
        }
    }

    fn census(&mut self, limit: u64) -> Census {
        let opts = self.options(CycleMethod::HashSet);
        let slot = if limit == 10_000 { &mut self.census_1e4 } else { &mut self.census_1e5 };
        slot.get_or_insert_with(|| orbit_census_with(&quad(1), &ProjPointQ::affine(0), limit, opts).unwrap())
            .clone()
    }

    fn calibration(&mut self) -> CalibrationReport {
        let opts = self.options(CycleMethod::HashSet);
        self.calibration
            .get_or_insert_with(|| calibrate(opts).unwrap())
            .clone()
    }
}

fn criterion1(run: &mut Run) -> Outcome {
    let mut csv = String::new();
    let mut mismatches = 0;
    let mut pairs = 0;
    for c in TABLE1_PARAMS {
        let phi = quad(c);
        for a in [0, 3] {
            let start = ProjPointQ::affine(a);
            if modorbit::experiments::require_infinite_orbit(&phi, &start).is_err() {
                continue;
            }
            pairs += 1;
            let h = orbit_census_with(&phi, &start, 2000, run.options(CycleMethod::HashSet)).unwrap();
            let b = orbit_census_with(&phi, &start, 2000, run.options(CycleMethod::Brent)).unwrap();
            mismatches += h
                .records
                .iter()
                .zip(&b.records)
                .filter(|(x, y)| x != y)
                .count();
            csv.push_str(&h.to_csv_string());
        }
    }
    Outcome {
        pass: mismatches == 0 && pairs > 0,
        detail: format!("{pairs} (map, start) pairs, {mismatches} hash-set/Brent mismatches"),
        csv,
    }
}

fn criterion2(run: &mut Run) -> Outcome {
    let census = run.census(10_000);
    let phi = quad(1);
    let mut orbit = ExactOrbit::new(&phi, ProjPointQ::affine(0)).unwrap();
    let mut csv = String::from("m,violations,unexplained\n");
    let mut ok = true;
    for m in 1..=10 {
        let dm = d_m(&mut orbit, m).unwrap();
        let report = dm_equivalence_check(&dm, &census);
        ok &= report.holds();
        let _ = writeln!(csv, "{m},{},{}", report.violations.len(), report.unexplained.len());
    }
    let d3 = d_m(&mut orbit, 3).unwrap();
    let anchor = d3.d == BigUint::from(60u32)
        && census.records.iter().filter(|r| d3.divisible_by(r.p)).map(|r| r.p).collect::<Vec<_>>() == [2, 3, 5];
    let exceptional = census.exceptional();
    Outcome {
        pass: ok && anchor,
        detail: format!(
            "m <= 10 over p <= 10^4: equivalence {}, D(3) = {} {}, exceptional set {:?}",
            if ok { "holds" } else { "violated" },
            d3.d,
            if anchor { "with primes {2,3,5}" } else { "(anchor mismatch)" },
            exceptional
        ),
        csv,
    }
}

fn criterion3(_run: &mut Run) -> Outcome {
    let phi = quad(1);
    let mut orbit = ExactOrbit::new(&phi, ProjPointQ::affine(0)).unwrap();
    let growth = dm_growth(&mut orbit, 14).unwrap();
    let slope = growth.slope(8, 14).unwrap();
    let (lo, hi) = (0.5 * 2f64.ln(), 1.1 * 2f64.ln());
    let mut buf = Vec::new();
    growth.write_csv(&mut buf).unwrap();
    Outcome {
        pass: (lo..=hi).contains(&slope),
        detail: format!("slope of log log D(m) on m in [8,14] = {slope:.4}, required [{lo:.4}, {hi:.4}]"),
        csv: String::from_utf8(buf).unwrap(),
    }
}

fn criterion4(run: &mut Run) -> Outcome {
    let report = run.calibration();
    let opts = run.options(CycleMethod::HashSet);
    let (candidate, dev) = report.table2.expect("z^2+1 column has candidates");
    let t = table2(&ProjPointQ::affine(candidate.alpha), candidate.convention, opts).unwrap();
    let values: Vec<String> = t.column(0).iter().map(|v| format!("{v:.4}")).collect();
    let exact = dev <= 1e-3;
    let structural = t.columns_nondecreasing() && t.column(0).iter().all(|v| (1.0..=3.0).contains(v));
    let detail = if exact {
        format!(
            "alpha={} {}: [{}] vs {:?}, max deviation {dev:.2e}",
            candidate.alpha,
            candidate.convention,
            values.join(", "),
            TABLE2
        )
    } else {
        format!(
            "NOT REPRODUCED (max deviation {dev:.2e}); structural fallback {}: [{}]",
            if structural { "holds" } else { "fails" },
            values.join(", ")
        )
    };
    Outcome {
        pass: exact || structural,
        detail,
        csv: format!("{report}{}", t.render(Default::default())),
    }
}

fn criterion5(run: &mut Run) -> Outcome {
    let report = run.calibration();
    let opts = run.options(CycleMethod::HashSet);
    let mut parts = Vec::new();
    for col in &report.columns {
        let b = col.best.unwrap();
        parts.push(format!(
            "{}: alpha={} {} dev {:.1e}",
            AffinePolyMap::quadratic(col.c),
            b.alpha,
            b.convention,
            b.max_deviation
        ));
    }
    let reproduced = report.columns.iter().all(|c| c.reproduced());
    let table = modorbit::experiments::table1(
        &ProjPointQ::affine(report.columns[3].best.unwrap().alpha),
        report.columns[3].best.unwrap().convention,
        opts,
    )
    .unwrap();
    let a1 = table.values[0][3];
    let a2 = table.values[10][0];
    let anchors = (a1 - 1.3539).abs() <= 1e-3 && (a2 - 2.4551).abs() <= 1e-3;
    let pass = if reproduced { anchors } else { table.columns_nondecreasing() };
    Outcome {
        pass,
        detail: format!(
            "{}; anchors (1223, z^2+1) = {a1:.4}, (19423, z^2-2) = {a2:.4}{}",
            parts.join("; "),
            if reproduced { "" } else { "; NOT REPRODUCED, structural fallback only" }
        ),
        csv: table.render(Default::default()),
    }
}

fn criterion6(run: &mut Run) -> Outcome {
    let census = run.census(10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    let mut csv = String::from("lambda,s,residual\n");
    for _ in 0..20 {
        let lambda = if rng.random_bool(0.5) { 1.0 } else { 2.0 };
        let s = rng.random_range(0.01..=2.0);
        let check = abel_identity_check(&census, lambda, s).unwrap();
        worst = worst.max(check.residual);
        let _ = writeln!(csv, "{lambda},{s},{:e}", check.residual);
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("20 random (lambda, s) pairs, max relative residual {worst:.2e}"),
        csv,
    }
}

fn criterion7(run: &mut Run) -> Outcome {
    let census = run.census(100_000);
    let grid = log_grid(1e-3, 1.0, 20);
    let mut csv = String::from("lambda,s,scaled\n");
    let mut parts = Vec::new();
    let mut pass = true;
    for lambda in [1.0, 2.0] {
        let shadow = bound_shadow(&census, lambda, &grid).unwrap();
        for (s, v) in &shadow.values {
            let _ = writeln!(csv, "{lambda},{s},{v}");
        }
        pass &= shadow.ratio() <= 10.0;
        parts.push(format!("lambda={lambda}: max/min = {:.2}", shadow.ratio()));
    }
    Outcome {
        pass,
        detail: format!("{} (required <= 10)", parts.join(", ")),
        csv,
    }
}

fn criterion8(run: &mut Run) -> Outcome {
    let census = run.census(100_000);
    let g = density_gamma(&census, 0.9).unwrap();
    let e = density_eps(&census, 0.5).unwrap();
    Outcome {
        pass: g.mass >= 0.95 && e.mass >= 0.90,
        detail: format!(
            "mass(m_p >= (log p)^0.9) = {:.5} (>= 0.95), mass(m_p >= 0.5 log p) = {:.5} (>= 0.90)",
            g.mass, e.mass
        ),
        csv: format!("{},{}\n{},{}\n", g.predicate, g.mass, e.predicate, e.mass),
    }
}

fn criterion9(run: &mut Run) -> Outcome {
    let census = run.census(100_000);
    let r = min_loglog_ratio(&census).unwrap();
    Outcome {
        pass: r.value > 0.0,
        detail: format!("min m_p / log log p over good p in [16, 10^5] = {:.4} at p = {}", r.value, r.p),
        csv: format!("{},{}\n", r.p, r.value),
    }
}

fn criterion10(run: &mut Run) -> Outcome {
    let grid = log_grid(1e-3, 1.0, 20);
    let mut csv = String::new();
    let mut pass = true;
    let mut parts = Vec::new();
    for (lambda, mu) in [(1.0, 0.0), (1.0, 1.0), (2.0, 2.0)] {
        let r = msum_bound_check(lambda, mu, &grid).unwrap();
        pass &= r.holds;
        parts.push(format!("msum({lambda},{mu}) {:.3} <= C0 {:.3}", r.worst, r.c0));
        let _ = writeln!(csv, "msum,{lambda},{mu},{},{}", r.worst, r.c0);
    }
    let census = run.census(100_000);
    let phi = quad(1);
    let mut orbit = ExactOrbit::new(&phi, ProjPointQ::affine(0)).unwrap();
    let mut checked = 0;
    let mut vacuous = Vec::new();
    for m in 1..=12 {
        let dm = d_m(&mut orbit, m).unwrap();
        match sumlogp_check(&dm, &census) {
            Some(r) => {
                checked += 1;
                pass &= r.holds;
                let _ = writeln!(csv, "sumlogp,{m},{},{}", r.lhs, r.rhs);
            }
            None => vacuous.push(m),
        }
    }
    parts.push(format!(
        "sumlogp holds for {checked} values of m (vacuous for m in {vacuous:?}, D(m) <= e)"
    ));
    Outcome {
        pass,
        detail: parts.join("; "),
        csv,
    }
}

fn criterion11(run: &mut Run) -> Outcome {
    let s = sample_rho_with_jobs(10_000, 2000, 42, Some(run.jobs)).unwrap();
    let ratio = s.mean_rho / 100.0;
    let (_, _, exact) = exhaustive_rho(2).unwrap();
    Outcome {
        pass: (1.19..=1.32).contains(&ratio) && exact == 1.5,
        detail: format!(
            "mean_rho/sqrt(n) = {ratio:.4} (target {:.4}, window [1.19, 1.32]); n=2 enumeration mean_rho = {exact}",
            (std::f64::consts::PI / 2.0).sqrt()
        ),
        csv: format!("{}\n", s.mean_rho),
    }
}

type Criterion = fn(&mut Run) -> Outcome;

const CRITERIA: [(Criterion, u64); 11] = [
    (criterion1, 10),
    (criterion2, 30),
    (criterion3, 120),
    (criterion4, 60),
    (criterion5, 60),
    (criterion6, 5),
    (criterion7, 60),
    (criterion8, 120),
    (criterion9, 120),
    (criterion10, 5),
    (criterion11, 30),
];

fn main() -> ExitCode {
    let mut primary = Run::new(4);
    let mut secondary = Run::new(1);
    let mut all_pass = true;
    let mut identical = 0;
    for (i, (criterion, budget)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = criterion(&mut primary);
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let pass = outcome.pass && in_time;
        all_pass &= pass;
        println!(
            "criterion {}: {} {} [{:.1}s of {budget}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
        if criterion(&mut secondary).csv == outcome.csv {
            identical += 1;
        }
    }
    let deterministic = identical == CRITERIA.len();
    all_pass &= deterministic;
    println!(
        "criterion 12: {} {identical}/{} criteria produced byte-identical CSV with 4 and 1 worker threads",
        if deterministic { "PASS" } else { "FAIL" },
        CRITERIA.len()
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
