//! Acceptance run: one PASS/FAIL line per criterion, indented detail lines
//! underneath. Exits non-zero if any criterion fails.
//!
//! cargo test --release --test acceptance [-- 2 5 ...]   (subset by number)

mod common;

use std::time::Instant;

use ipef::dist::DistSpec;
use ipef::empirical::{integrated_edf, integrated_edf_oracle};
use ipef::gaussproc::{
    bp_transform, sample_limit_ks, simulate_bridge, simulate_kiefer, tied_down_field,
};
use ipef::localtime::{growth_exponent, self_intersection, walk};
use ipef::montecarlo::{power_study, rate_study, Alternative, PowerStudyConfig, PowerTable};
use ipef::parallel::{available_threads, with_threads};
use ipef::rng::RngStream;
use ipef::sample::Sample;
use ipef::stats::estimated::{estimated_gof, ExponentialFamily};
use ipef::stats::twosample::{
    ksample_process, ksample_statistics, two_sample_process, two_sample_statistics, Integrator,
};
use ipef::stats::{cvm_integrated, StatKind};
use rand::Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use common::*;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }
}

fn uniform_sample<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

fn c1_closed_form() -> Outcome {
    let start = Instant::now();
    let mut rng = RngStream::new(101).rng();
    let mut worst = 0.0f64;
    for case in 0..500 {
        let n = rng.random_range(1..=8);
        let p = rng.random_range(0..=3);
        let x = uniform_sample(n, &mut rng);
        let t = if case % 3 == 0 {
            x[rng.random_range(0..n)]
        } else {
            rng.random_range(-0.1..1.1)
        };
        let s = Sample::new(x.clone()).unwrap();
        let closed = integrated_edf(&s, p, t).value;
        let nested = integrated_edf_oracle(&s, p, t).unwrap();
        let chains = chain_count_integrated_edf(&x, p, t);
        worst = worst
            .max((closed - nested).abs())
            .max((closed - chains).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        worst <= 1e-12 && secs < 5.0,
        format!(
            "closed form vs nested-sum oracles, 500 cases: max |diff| = {worst:.2e}, {secs:.2} s"
        ),
    )
}

fn table_row(t: &PowerTable, label: &str) -> [u32; 4] {
    let i = t.row_index(label).unwrap();
    [0, 1, 2, 3].map(|p| t.percent(i, t.col_index(p).unwrap()))
}

fn c2_power_table() -> Outcome {
    let t20 = power_study(&PowerStudyConfig::standard(20, 0.05, 42)).unwrap();
    let mut details = vec!["n=20 alpha=0.05: ours | reference".to_string()];
    // S^(3) cells are reported but do not decide the criterion.
    let (mut misses, mut flagged) = (Vec::new(), Vec::new());
    for (label, reference) in TABLE_N20 {
        let ours = table_row(&t20, label);
        let flags: Vec<&str> = ours
            .iter()
            .zip(reference)
            .map(|(&o, r)| if o.abs_diff(r) <= 3 { "" } else { "*" })
            .collect();
        for (p, f) in flags.iter().enumerate() {
            if !f.is_empty() {
                let cell = format!("{label}/S^({p})");
                if p == 3 {
                    flagged.push(cell);
                } else {
                    misses.push(cell);
                }
            }
        }
        details.push(format!(
            "  {label:<5} {:>3}{} {:>3}{} {:>3}{} {:>3}{} | {:>3} {:>3} {:>3} {:>3}",
            ours[0],
            flags[0],
            ours[1],
            flags[1],
            ours[2],
            flags[2],
            ours[3],
            flags[3],
            reference[0],
            reference[1],
            reference[2],
            reference[3]
        ));
    }
    let mut anchors_ok = true;
    for (label, p, want) in [("A2", 1, 83), ("A2", 0, 70), ("B3", 2, 78), ("C3", 0, 67)] {
        let got = table_row(&t20, label)[p];
        let ok = got.abs_diff(want) <= 3;
        anchors_ok &= ok;
        details.push(format!(
            "  anchor {label}/S^({p}): {got} vs {want} {}",
            if ok { "ok" } else { "MISS" }
        ));
    }

    let mut c100 = PowerStudyConfig::standard(100, 0.05, 42);
    c100.alternatives = vec![Alternative::a(2.0).unwrap(), Alternative::c(2.0).unwrap()];
    let t100 = power_study(&c100).unwrap();
    let a2 = table_row(&t100, "A2");
    let c2 = table_row(&t100, "C2")[0];
    let a2_ok = a2
        .iter()
        .zip([100, 100, 100, 99])
        .all(|(&o, r)| o.abs_diff(r) <= 2);
    let c2_ok = c2.abs_diff(96) <= 3;
    details.push(format!(
        "  n=100: A2 row {a2:?} vs [100, 100, 100, 99] {}; C2/S^(0) {c2} vs 96 {}",
        if a2_ok { "ok" } else { "MISS" },
        if c2_ok { "ok" } else { "MISS" }
    ));
    let cells_ok = misses.is_empty();
    Outcome {
        pass: cells_ok && anchors_ok && a2_ok && c2_ok,
        summary: format!(
            "power tables: {}/24 cells for p <= 2 within ±3pp at n=20 (outside: {}); S^(3) flagged: {}; anchors {}; n=100 {}",
            24 - misses.len(),
            if misses.is_empty() {
                "none".into()
            } else {
                misses.join(" ")
            },
            if flagged.is_empty() {
                "none".into()
            } else {
                flagged.join(" ")
            },
            if anchors_ok {
                "ok"
            } else {
                "not all within ±3pp"
            },
            if a2_ok && c2_ok {
                "ok"
            } else {
                "outside tolerance"
            }
        ),
        details,
    }
}

fn c3_size_control() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut details = Vec::new();
    for n in [10, 20, 40, 100] {
        for alpha in [0.01, 0.05, 0.10] {
            let config = PowerStudyConfig {
                n,
                p_list: vec![0, 1, 2, 3],
                alternatives: vec![Alternative::a(1.0).unwrap()],
                alpha,
                m_null: 10_000,
                m_power: 10_000,
                seed: 7,
                statistic: StatKind::Ks,
            };
            let t = power_study(&config).unwrap();
            let rates: Vec<f64> = (0..4).map(|j| t.rate(0, j)).collect();
            for (p, r) in rates.iter().enumerate() {
                let dev = (r - alpha).abs();
                if dev > worst.0 {
                    worst = (dev, format!("n={n} alpha={alpha} p={p}: {:.2}%", 100.0 * r));
                }
            }
            details.push(format!(
                "  n={n:<3} alpha={alpha:<4}: {}",
                rates
                    .iter()
                    .map(|r| format!("{:.2}%", 100.0 * r))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
    }
    Outcome {
        pass: worst.0 <= 0.015,
        summary: format!(
            "size under the null, 48 settings: worst |rate - alpha| = {:.2}pp ({})",
            100.0 * worst.0,
            worst.1
        ),
        details,
    }
}

struct CovCheck {
    name: String,
    emp: f64,
    se: f64,
    theory: f64,
}

fn c4_limit_laws() -> Outcome {
    const PATHS: usize = 100_000;
    let stream = RngStream::new(404);
    let m = 9; // u = k/8
    let u = |k: usize| k as f64 / 8.0;
    let pairs = [(2, 6), (4, 4), (1, 7), (3, 5), (6, 6)];
    let bcov = |a: f64, b: f64| a.min(b) - a * b;
    let mut checks = Vec::new();

    let s = stream.labeled("bridge");
    let paths: Vec<Vec<f64>> = (0..PATHS)
        .into_par_iter()
        .map(|i| {
            simulate_bridge(m, &mut s.substream(i as u64).rng())
                .unwrap()
                .values
        })
        .collect();
    let col = |ps: &[Vec<f64>], k: usize| ps.iter().map(|v| v[k]).collect::<Vec<f64>>();
    for &(i, j) in &pairs {
        let (c, se) = cov_with_se(&col(&paths, i), &col(&paths, j));
        checks.push(CovCheck {
            name: format!("B({},{})", u(i), u(j)),
            emp: c,
            se,
            theory: bcov(u(i), u(j)),
        });
    }

    let p = 2;
    let s = stream.labeled("bp");
    let bp: Vec<Vec<f64>> = (0..PATHS)
        .into_par_iter()
        .map(|i| {
            let path = simulate_bridge(m, &mut s.substream(i as u64).rng()).unwrap();
            bp_transform(&path, p).values
        })
        .collect();
    for &(i, j) in &pairs {
        let (c, se) = cov_with_se(&col(&bp, i), &col(&bp, j));
        checks.push(CovCheck {
            name: format!("B^(2)({},{})", u(i), u(j)),
            emp: c,
            se,
            theory: (u(i) * u(j)).powi(2) / 4.0 * bcov(u(i), u(j)),
        });
    }

    // Kiefer with 4 time steps, tied-down field over the same sheets.
    let n_steps = 4;
    let s = stream.labeled("kiefer");
    let sheets: Vec<(Vec<Vec<f64>>, Vec<Vec<f64>>)> = (0..PATHS)
        .into_par_iter()
        .map(|i| {
            let sheet = simulate_kiefer(n_steps, m, &mut s.substream(i as u64).rng()).unwrap();
            (sheet.partial_sums(), tied_down_field(&sheet))
        })
        .collect();
    let kpairs = [
        ((1, 2), (3, 6)),
        ((2, 4), (2, 4)),
        ((4, 1), (2, 7)),
        ((3, 3), (4, 5)),
        ((1, 6), (1, 6)),
    ];
    for &((k1, i), (k2, j)) in &kpairs {
        let a: Vec<f64> = sheets.iter().map(|(k, _)| k[k1][i]).collect();
        let b: Vec<f64> = sheets.iter().map(|(k, _)| k[k2][j]).collect();
        let (c, se) = cov_with_se(&a, &b);
        checks.push(CovCheck {
            name: format!("K(({k1},{}),({k2},{}))", u(i), u(j)),
            emp: c,
            se,
            theory: k1.min(k2) as f64 * bcov(u(i), u(j)),
        });
    }
    // K°^(1)(s,u) = u K°(s,u); covariance (s∧s'-ss') uu'(u∧u'-uu').
    for &((k1, i), (k2, j)) in &[
        ((1, 2), (3, 6)),
        ((2, 4), (2, 4)),
        ((1, 1), (2, 7)),
        ((3, 3), (2, 5)),
        ((1, 6), (1, 6)),
    ] {
        let (s1, s2) = (k1 as f64 / n_steps as f64, k2 as f64 / n_steps as f64);
        let a: Vec<f64> = sheets.iter().map(|(_, t)| u(i) * t[k1][i]).collect();
        let b: Vec<f64> = sheets.iter().map(|(_, t)| u(j) * t[k2][j]).collect();
        let (c, se) = cov_with_se(&a, &b);
        checks.push(CovCheck {
            name: format!("K°^(1)(({s1},{}),({s2},{}))", u(i), u(j)),
            emp: c,
            se,
            theory: (s1.min(s2) - s1 * s2) * u(i) * u(j) * bcov(u(i), u(j)),
        });
    }

    let mut worst_z = 0.0f64;
    let mut details = Vec::new();
    for c in &checks {
        let z = if c.se > 0.0 {
            (c.emp - c.theory).abs() / c.se
        } else if c.emp == c.theory {
            0.0
        } else {
            f64::INFINITY
        };
        worst_z = worst_z.max(z);
        details.push(format!(
            "  {:<28} emp {:+.5} theory {:+.5} z {:.2}",
            c.name, c.emp, c.theory, z
        ));
    }

    let grid = 8192;
    let s = stream.labeled("kolmogorov");
    let mut sup: Vec<f64> = (0..PATHS)
        .into_par_iter()
        .map(|i| sample_limit_ks(0, grid, &mut s.substream(i as u64).rng()).unwrap())
        .collect();
    sup.sort_by(f64::total_cmp);
    let q95 = sup[(0.95 * PATHS as f64).ceil() as usize - 1];
    let oracle = kolmogorov_quantile(0.95);
    let rel = (q95 - oracle).abs() / oracle;
    details.push(format!(
        "  sup|B| 0.95 quantile (grid {grid}): {q95:.4} vs series oracle {oracle:.4}, rel {rel:.4}"
    ));
    Outcome {
        pass: worst_z <= 4.0 && rel <= 0.01,
        summary: format!(
            "limit laws: {} covariance checks at 1e5 paths, max |z| = {worst_z:.2}; Kolmogorov quantile rel. error {rel:.4}",
            checks.len()
        ),
        details,
    }
}

fn c5_rate() -> Outcome {
    let m = 20_000;
    let n_list = [10, 50, 250, 1250];
    let noise = (2.0 / m as f64).sqrt();
    let mut pass = true;
    let mut details = Vec::new();
    for p in 0..=2 {
        let rows =
            rate_study(p, &n_list, m, 4096, RngStream::new(505).substream(p as u64)).unwrap();
        let d: Vec<f64> = rows.iter().map(|r| r.ks_distance).collect();
        let ok = d.windows(2).all(|w| w[1] < w[0] + 2.0 * noise);
        pass &= ok;
        details.push(format!(
            "  p={p}: {} {}",
            d.iter()
                .map(|v| format!("{v:.4}"))
                .collect::<Vec<_>>()
                .join(" > "),
            if ok { "ok" } else { "NOT DECREASING" }
        ));
    }
    Outcome {
        pass,
        summary: format!(
            "rate study, n = 10,50,250,1250, M = 2e4: KS distances decrease up to 2x noise ({:.4})",
            2.0 * noise
        ),
        details,
    }
}

fn c6_cvm() -> Outcome {
    let mut rng = RngStream::new(606).rng();
    let uniform = DistSpec::uniform();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=50);
        let p = rng.random_range(0..=3);
        let x = uniform_sample(n, &mut rng);
        let exact = cvm_integrated(&Sample::new(x.clone()).unwrap(), &uniform, p);
        let mut sorted = x;
        sorted.sort_by(f64::total_cmp);
        let quad = cvm_quadrature(&sorted, p);
        worst = worst.max((exact - quad).abs() / quad.abs().max(1.0));
    }
    let mut worst0 = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=50);
        let x = uniform_sample(n, &mut rng);
        let exact = cvm_integrated(&Sample::new(x.clone()).unwrap(), &uniform, 0);
        let mut sorted = x;
        sorted.sort_by(f64::total_cmp);
        worst0 = worst0.max((exact - classical_cvm(&sorted)).abs());
    }
    Outcome::new(
        worst <= 1e-10 && worst0 <= 1e-12,
        format!(
            "CvM exactness: vs quadrature max diff {worst:.2e} (200 cases); p=0 vs classical identity max diff {worst0:.2e}"
        ),
    )
}

fn c7_local_time() -> Outcome {
    let n_list: Vec<usize> = (9..=16).map(|k| 1usize << k).collect();
    let mut details = Vec::new();
    let mut pass = true;
    for p in [1, 2] {
        let est = growth_exponent(p, &n_list, 20, RngStream::new(707).substream(p as u64)).unwrap();
        let ok = (1.35..=1.65).contains(&est.slope);
        pass &= ok;
        details.push(format!(
            "  p={p}: slope {:.4} {}",
            est.slope,
            if ok { "ok" } else { "OUT OF RANGE" }
        ));
    }
    let mut worst = 0.0f64;
    let mut cases = 0;
    for p in [1, 2, 3] {
        for (i, n) in [2usize, 3, 10, 57, 200, 500].into_iter().enumerate() {
            let path = walk(
                p,
                n,
                &mut RngStream::new(708)
                    .substream(10 * p as u64 + i as u64)
                    .rng(),
            )
            .unwrap();
            let fast = self_intersection(&path, 1.0).unwrap();
            let naive = naive_self_intersection(&path.steps);
            worst = worst.max((fast - naive).abs() / naive.max(1.0));
            cases += 1;
        }
    }
    let same = worst <= 1e-12;
    pass &= same;
    details.push(format!(
        "  fast vs naive L over {cases} paths (n ≤ 500): max rel diff {worst:.2e} (summation-order rounding)"
    ));
    Outcome {
        pass,
        summary: "self-intersection local time growth exponent in [1.35, 1.65] for p = 1, 2; fast L = naive L".into(),
        details,
    }
}

fn c8_ksample_identities() -> Outcome {
    let mut rng = RngStream::new(808).rng();
    let uniform = DistSpec::uniform();
    let (mut worst_s, mut worst_xi) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let (n1, n2) = (rng.random_range(1..=30), rng.random_range(1..=30));
        let p = rng.random_range(0..=3);
        let x = Sample::new(uniform_sample(n1, &mut rng)).unwrap();
        let y = Sample::new(uniform_sample(n2, &mut rng)).unwrap();
        let pair = [x.clone(), y.clone()];
        let k = ksample_statistics(&pair, &uniform, p).unwrap();
        let two = two_sample_statistics(&x, &y, p, 1, Integrator::Pooled).unwrap();
        worst_s = worst_s.max((k.s - two.s * two.s).abs() / k.s.max(1.0));
        let mut ts: Vec<f64> = x.values().iter().chain(y.values()).copied().collect();
        ts.extend((0..10).map(|_| rng.random_range(-0.1..1.1)));
        for t in ts {
            let xi = ksample_process(&pair, p, t).unwrap();
            let b = two_sample_process(&x, &y, p, 1, t).unwrap();
            worst_xi = worst_xi.max((xi - b * b).abs() / xi.max(1.0));
        }
    }
    Outcome::new(
        worst_s <= 1e-10 && worst_xi <= 1e-10,
        format!("K=2 identities over 200 pairs: S max diff {worst_s:.2e}, xi pointwise max diff {worst_xi:.2e}"),
    )
}

fn c9_determinism() -> Outcome {
    let config = PowerStudyConfig {
        m_null: 2_000,
        m_power: 2_000,
        ..PowerStudyConfig::standard(20, 0.05, 909)
    };
    let many = available_threads().max(4);
    let one = with_threads(Some(1), || power_study(&config))
        .unwrap()
        .unwrap();
    let multi = with_threads(Some(many), || power_study(&config))
        .unwrap()
        .unwrap();
    let bits = |t: &PowerTable| {
        t.critical_values
            .iter()
            .map(|c| c.to_bits())
            .collect::<Vec<_>>()
    };
    let same = one.rows == multi.rows
        && bits(&one) == bits(&multi)
        && one.to_csv_string().unwrap() == multi.to_csv_string().unwrap();
    Outcome::new(
        same,
        format!("power study bit-identical with 1 and {many} threads (seed 909)"),
    )
}

fn c10_estimated() -> Outcome {
    let outer = 1000;
    let stream = RngStream::new(1010);
    let mut details = Vec::new();
    let mut pass = true;
    for p in [0, 1] {
        let rejections: usize = (0..outer)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream.labeled("data").substream(i as u64).rng();
                let exp = Exp::new(2.5).unwrap();
                let x = Sample::new((0..50).map(|_| exp.sample(&mut rng)).collect()).unwrap();
                let rep = estimated_gof(
                    &x,
                    &ExponentialFamily,
                    p,
                    0.05,
                    500,
                    stream.labeled("boot").substream(i as u64),
                )
                .unwrap();
                usize::from(rep.reject)
            })
            .sum();
        let rate = rejections as f64 / outer as f64;
        let ok = (rate - 0.05).abs() <= 0.02;
        pass &= ok;
        details.push(format!(
            "  p={p}: null rejection {:.1}% {}",
            100.0 * rate,
            if ok { "ok" } else { "OUTSIDE" }
        ));
    }
    Outcome {
        pass,
        summary: "estimated-parameter bootstrap, exponential family, n=50, B=500, 1000 outer reps: size within 5±2%".into(),
        details,
    }
}

fn main() {
    let selected: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, c1_closed_form),
        (2, c2_power_table),
        (3, c3_size_control),
        (4, c4_limit_laws),
        (5, c5_rate),
        (6, c6_cvm),
        (7, c7_local_time),
        (8, c8_ksample_identities),
        (9, c9_determinism),
        (10, c10_estimated),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        println!(
            "{} criterion {id}: {} [{:.1} s]",
            if out.pass { "PASS" } else { "FAIL" },
            out.summary,
            start.elapsed().as_secs_f64()
        );
        for d in &out.details {
            println!("{d}");
        }
        if !out.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
