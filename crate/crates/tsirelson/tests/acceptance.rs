//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use tsirelson_core::allowable::admissibility_budget;
use tsirelson_core::engine::{norm_bounds, toh_scalar_norm, xoh_norm_bounds, Level, SpaceSpec, Variant};
use tsirelson_core::rng::{complex_gaussian, gaussian_matrix, seeded, seeded_stream, unimodular};
use tsirelson_core::sum_spaces::{min_l2_norm_bounds, rp_plus_cp_norm, SolverOptions};
use tsirelson_core::verification::{
    block_instance, check_split_inequality, random_vector, run_suite, split_instance, SuiteGrid, SuiteReport, Verifier,
    MARGIN_SLACK,
};
use tsirelson_core::{CMatrix, Exponent, OpVector};

struct Outcome {
    pass: bool,
    note: String,
}

fn outcome(pass: bool, note: impl Into<String>) -> Outcome {
    Outcome { pass, note: note.into() }
}

fn default_suite() -> &'static SuiteReport {
    static SUITE: OnceLock<(SuiteReport, Duration)> = OnceLock::new();
    &SUITE
        .get_or_init(|| {
            let t = Instant::now();
            let r = run_suite(&SuiteGrid::default(), 42).expect("default grid runs");
            (r, t.elapsed())
        })
        .0
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scalar_collapse() -> Outcome {
    let t = Instant::now();
    let mut rng = seeded(42);
    let spec = SpaceSpec::x_oh(0.8).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let len = rng.random_range(1..=8);
        let x = OpVector::from_scalars((0..len).map(|_| (rng.random_range(1..=16), complex_gaussian(&mut rng)))).unwrap();
        let l2 = x.scalars().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for level in [Level::S2, Level::Operator] {
            let b = xoh_norm_bounds(&x, &spec, level).unwrap().bound;
            worst = worst.max(b.width()).max((b.lower - l2).abs()).max((b.upper - l2).abs());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(worst <= 1e-9 && secs <= 60.0, format!("200 vectors at both levels, worst deviation {worst:e}"))
}

/// Collections of disjoint nonempty subsets of `mask`.
fn collections(mask: u32) -> Vec<Vec<u32>> {
    if mask == 0 {
        return vec![vec![]];
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = collections(rest);
    let mut sub = rest;
    loop {
        for mut c in collections(rest & !sub) {
            c.push(low | sub);
            out.push(c);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// `(4k³)^k` in 128-bit arithmetic (exact for k ≤ 7).
fn f_exact(k: usize) -> u128 {
    (4 * (k as u128).pow(3)).pow(k as u32)
}

fn toh_oracle(x: &[(usize, f64)], theta: f64) -> f64 {
    let n = x.len();
    let full = (1u32 << n) - 1;
    let v0: Vec<f64> = (0..=full)
        .map(|s| (0..n).filter(|&j| s >> j & 1 == 1).map(|j| x[j].1).fold(0.0, f64::max))
        .collect();
    let mut v = v0.clone();
    for _ in 0..n + 2 {
        let mut next = v0.clone();
        for s in 1..=full {
            let mut best: f64 = 0.0;
            for fam in collections(s).into_iter().filter(|f| !f.is_empty()) {
                let union = fam.iter().fold(0, |a, b| a | b);
                if f_exact(x[union.trailing_zeros() as usize].0) < fam.len() as u128 {
                    continue;
                }
                best = best.max(fam.iter().map(|&b| v[b as usize].powi(2)).sum());
            }
            next[s as usize] = v0[s as usize].max(theta * best.sqrt());
        }
        v = next;
    }
    v[full as usize]
}

fn toh_exactness() -> Outcome {
    let mut rng = seeded(42);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for support in 1u32..64 {
        if support.count_ones() > 5 {
            continue;
        }
        let idx: Vec<usize> = (0..6).filter(|j| support >> j & 1 == 1).map(|j| j + 1).collect();
        for _ in 0..50 {
            let theta = rng.random_range(0.05..0.99);
            let x: Vec<(usize, f64)> = idx.iter().map(|&i| (i, rng.random_range(0.01..1.0))).collect();
            let v = OpVector::from_scalars(x.iter().map(|&(i, a)| (i, c(a, 0.0)))).unwrap();
            let b = toh_scalar_norm(&v, &SpaceSpec::t_oh(theta).unwrap()).unwrap().bound;
            worst = worst.max((b.lower - toh_oracle(&x, theta)).abs()).max(b.width());
            cases += 1;
        }
    }
    for theta in [0.5, 0.8, 0.95] {
        let v = OpVector::from_real_sequence(&[1.0, 1.0]).unwrap();
        let b = toh_scalar_norm(&v, &SpaceSpec::t_oh(theta).unwrap()).unwrap().bound;
        worst = worst.max((b.lower - f64::max(1.0, theta * 2f64.sqrt())).abs());
    }
    outcome(worst <= 1e-12, format!("{cases} draws plus t1+t2, worst deviation {worst:e}"))
}

fn sandwich_suite() -> Outcome {
    let r = default_suite();
    let sandwich: Vec<_> = r.checks.iter().filter(|c| c.check == "sandwich").collect();
    let min = sandwich.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
    let pass = !sandwich.is_empty() && min >= -MARGIN_SLACK && sandwich.iter().all(|c| c.passed);
    outcome(pass, format!("{} sandwich checks, least margin {min:e}", sandwich.len()))
}

fn block_isomorphism() -> Outcome {
    let v = Verifier::default();
    let mut count = 0;
    let mut failures = 0;
    let mut stream = 0;
    for theta in [0.5, 0.8, 0.95] {
        for (variant, p) in [(Variant::XCp, 1.0), (Variant::XCp, 1.5), (Variant::XRp, 1.0), (Variant::XRp, 1.5), (Variant::XOh, 2.0)] {
            let spec = SpaceSpec::new(variant, p, theta).unwrap();
            for _ in 0..8 {
                stream += 1;
                let mut rng = seeded_stream(4, stream);
                let (blocks, coeffs) = block_instance(&mut rng, variant, 3);
                let r = v.block_isomorphism(&blocks, &coeffs, &spec).unwrap();
                let detail = |k: &str| r.details.iter().find(|d| d.0 == k).map(|d| d.1).unwrap();
                let slack_ok = detail("epsilon") <= 1e-6 + detail("delta") * detail("A") + 1e-15;
                count += 1;
                if !(r.passed && slack_ok) {
                    failures += 1;
                }
            }
        }
    }
    outcome(failures == 0, format!("{count} block families, {failures} violations"))
}

fn split_inequality() -> Outcome {
    let mut failures = 0;
    let mut count = 0;
    let modes = [(Variant::TOh, 2.0), (Variant::XOh, 2.0), (Variant::XCp, 1.0), (Variant::XRp, 1.0)];
    for (m, (variant, p)) in modes.into_iter().enumerate() {
        for k in 0..100u64 {
            let theta = [0.5, 0.8, 0.95][(k % 3) as usize];
            let spec = SpaceSpec::new(variant, p, theta).unwrap();
            let mut rng = seeded_stream(5 + m as u64, k);
            let (y, z, big_n, n) = split_instance(&mut rng);
            let r = check_split_inequality(&y, &z, big_n, n, &spec).unwrap();
            let f = f_exact(big_n) as f64;
            let alpha = match variant {
                Variant::XCp | Variant::XRp => (theta * f).max(1.0),
                _ => (theta * f.sqrt()).max(1.0),
            };
            let used = r.details.iter().find(|d| d.0 == "alpha").unwrap().1;
            count += 1;
            if !r.passed || used != alpha {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{count} exact-mode instances over 4 variants, {failures} violations"))
}

fn theta_tail() -> Outcome {
    let r = default_suite();
    let tails: Vec<_> = r.checks.iter().filter(|c| c.check == "theta_tail").collect();
    let levels: std::collections::BTreeSet<&str> =
        tails.iter().filter_map(|c| c.instance.rsplit(' ').next()).collect();
    let failures = tails.iter().filter(|c| !c.passed).count();
    let all_levels = (0..=6).all(|n| levels.contains(format!("n={n}").as_str()));
    outcome(failures == 0 && all_levels && !tails.is_empty(), format!("{} tail checks for n = 0..6, {failures} violations", tails.len()))
}

fn f_table() -> Outcome {
    let got: Vec<String> = (1..=3).map(|k| admissibility_budget(k).to_string()).collect();
    outcome(got == ["4", "1024", "1259712"], format!("f(1..3) = {}", got.join(", ")))
}

/// `min_y ∑ |y|² + |x - y|²` for one complex entry, by zooming grid search over `y = x (a + ib)`.
fn entry_oracle(x: Complex64) -> f64 {
    let f = |a: f64, b: f64| {
        let y = x * c(a, b);
        y.norm_sqr() + (x - y).norm_sqr()
    };
    let (mut ca, mut cb, mut half) = (0.5, 0.0, 1.0);
    let mut best = f(ca, cb);
    for _ in 0..6 {
        let (mut ba, mut bb) = (ca, cb);
        for i in 0..=100 {
            for j in 0..=100 {
                let a = ca - half + 2.0 * half * i as f64 / 100.0;
                let b = cb - half + 2.0 * half * j as f64 / 100.0;
                let v = f(a, b);
                if v < best {
                    best = v;
                    ba = a;
                    bb = b;
                }
            }
        }
        ca = ba;
        cb = bb;
        half /= 20.0;
    }
    best
}

fn convex_solver() -> Outcome {
    let opts = SolverOptions::default();
    let mut worst_unit: f64 = 0.0;
    for p in [1.0, 1.25, 1.5, 2.0] {
        let b = rp_plus_cp_norm(&[CMatrix::scalar(c(1.0, 0.0))], Exponent::Finite(p), &opts).unwrap();
        let e = 2f64.powf(1.0 / p - 1.0);
        worst_unit = worst_unit.max((b.lower - e).abs()).max((b.upper - e).abs());
    }
    let mut rng = seeded(8);
    let mut worst_grid: f64 = 0.0;
    for _ in 0..20 {
        let xs = vec![gaussian_matrix(&mut rng, 2, 2), gaussian_matrix(&mut rng, 2, 2)];
        // At p = 2 the objective splits over matrix entries.
        let oracle = xs.iter().flat_map(|x| x.data().to_vec()).map(entry_oracle).sum::<f64>().sqrt();
        let b = rp_plus_cp_norm(&xs, Exponent::Finite(2.0), &opts).unwrap();
        worst_grid = worst_grid.max((b.lower - oracle).abs()).max((b.upper - oracle).abs());
    }
    outcome(
        worst_unit <= 1e-6 && worst_grid <= 1e-4,
        format!("unit scalar deviation {worst_unit:e}, grid deviation {worst_grid:e} on 20 instances"),
    )
}

fn min_l2_oracle(xs: &[CMatrix], rng: &mut impl Rng) -> f64 {
    let mats: Vec<DMatrix<Complex64>> = xs
        .iter()
        .map(|m| DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)]))
        .collect();
    let value = |xi: &[Complex64]| {
        let norm = xi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut acc = DMatrix::<Complex64>::zeros(mats[0].nrows(), mats[0].ncols());
        for (m, z) in mats.iter().zip(xi) {
            acc += m * (*z / norm);
        }
        acc.svd(false, false).singular_values.max()
    };
    let mut best = (0.0, vec![c(1.0, 0.0); xs.len()]);
    for _ in 0..3000 {
        let xi: Vec<Complex64> = (0..xs.len()).map(|_| complex_gaussian(rng)).collect();
        let v = value(&xi);
        if v > best.0 {
            best = (v, xi);
        }
    }
    let mut step = 0.1;
    while step > 1e-8 {
        let cand: Vec<Complex64> = best.1.iter().map(|&z| z + complex_gaussian(rng) * step).collect();
        let v = value(&cand);
        if v > best.0 {
            best = (v, cand);
        } else {
            step *= 0.97;
        }
    }
    best.0
}

fn min_l2_solver() -> Outcome {
    let mut rng = seeded(9);
    let opts = SolverOptions::default();
    let mut worst: f64 = 0.0;
    let mut ordered = true;
    for _ in 0..20 {
        let n = rng.random_range(1..=3);
        let (r, k) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let xs: Vec<CMatrix> = (0..n).map(|_| gaussian_matrix(&mut rng, r, k)).collect();
        let oracle = min_l2_oracle(&xs, &mut rng);
        let b = min_l2_norm_bounds(&xs, &opts).unwrap();
        worst = worst.max((b.lower - oracle).abs());
        ordered &= b.lower <= b.upper;
    }
    outcome(worst <= 1e-4 && ordered, format!("20 instances, worst deviation {worst:e}"))
}

fn unconditionality() -> Outcome {
    let modes = [
        (Variant::TOh, 2.0, Level::S2),
        (Variant::XOh, 2.0, Level::S2),
        (Variant::XOh, 2.0, Level::Operator),
        (Variant::XCp, 1.0, Level::Sp),
        (Variant::XCp, 1.5, Level::Sp),
        (Variant::XRp, 1.0, Level::Sp),
        (Variant::XRp, 1.5, Level::Sp),
    ];
    let mut worst: f64 = 0.0;
    for (m, (variant, p, level)) in modes.into_iter().enumerate() {
        let spec = SpaceSpec::new(variant, p, 0.8).unwrap();
        for k in 0..100u64 {
            let mut rng = seeded_stream(10 + m as u64, k);
            let len = rng.random_range(1..=4);
            let (r, cc) = match variant {
                Variant::TOh => (1, 1),
                Variant::XOh => {
                    let d = rng.random_range(1..=2);
                    (d, d)
                }
                _ => (rng.random_range(1..=2), rng.random_range(1..=2)),
            };
            let x = random_vector(&mut rng, len, 6, r, cc);
            let phases: BTreeMap<usize, Complex64> = x.support().into_iter().map(|i| (i, unimodular(&mut rng))).collect();
            let a = norm_bounds(&x, &spec, level).unwrap().bound;
            let b = norm_bounds(&x.phased(&phases), &spec, level).unwrap().bound;
            worst = worst.max((a.lower - b.lower).abs()).max((a.upper - b.upper).abs());
        }
    }
    outcome(worst <= 1e-9, format!("100 perturbations in each of 7 modes, worst difference {worst:e}"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tsirelson");
    let mut runs = Vec::new();
    let mut longest = Duration::ZERO;
    for _ in 0..2 {
        let t = Instant::now();
        let out = Command::new(bin).args(["verify", "--seed", "42"]).output().expect("binary runs");
        longest = longest.max(t.elapsed());
        runs.push(out);
    }
    let same = runs[0].stdout == runs[1].stdout && !runs[0].stdout.is_empty();
    let ok = runs.iter().all(|o| o.status.code() == Some(0));
    outcome(
        same && ok && longest <= Duration::from_secs(600),
        format!(
            "two runs, {} bytes, identical: {same}, exit 0: {ok}, slowest {:.1} s",
            runs[0].stdout.len(),
            longest.as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("scalar collapse", scalar_collapse),
        ("T_OH exactness", toh_exactness),
        ("sandwich suite", sandwich_suite),
        ("block isomorphism", block_isomorphism),
        ("split inequality", split_inequality),
        ("theta^n tail bound", theta_tail),
        ("f-table", f_table),
        ("convex solver", convex_solver),
        ("min-l2 solver", min_l2_solver),
        ("unconditionality", unconditionality),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let o = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<20} {}  {} [{:.1} s]",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.note,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
