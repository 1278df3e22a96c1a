//! Acceptance criteria, one line each. Criteria 1-4 and the data half of 5
//! read a local snapshot of the FRED series from `$VIXBOND_DATA_DIR` (or
//! `tests/data/fred`) and fail when it is absent.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use vixbond::diagnostics::{acf, adf_test, ljung_box, moments};
use vixbond::pipeline::{
    all_required_series, analyze_rates, analyze_returns, analyze_vix, fitted_joint_spec, Case, DataSource, Dataset,
    InnovationKind,
};
use vixbond::regression::{ols, t_test_pvalue, DesignMatrix};
use vixbond::simulator::{
    ergodicity_diagnostic, published_aaa_spec, simulate, stationary_moments, InitialState, InnovationSource,
    JointModelSpec,
};

type Outcome = Result<String, String>;

fn data_source() -> Result<DataSource, String> {
    let dir = std::env::var_os("VIXBOND_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/fred"));
    let source = DataSource::new(&dir);
    let missing: Vec<String> =
        all_required_series(&source).into_iter().filter(|s| !dir.join(format!("{s}.csv")).is_file()).collect();
    if missing.is_empty() {
        Ok(source)
    } else {
        Err(format!("FRED snapshot not found in {} (missing {}); set VIXBOND_DATA_DIR", dir.display(), missing.join(", ")))
    }
}

fn check(ok: bool, detail: String, failures: &mut Vec<String>) -> String {
    if !ok {
        failures.push(detail.clone());
    }
    detail
}

fn finish(details: Vec<String>, failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(details.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn criterion_1() -> Outcome {
    let source = data_source()?;
    let vix = source.vix(Dataset::MoodysAaa.default_window()).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let a = analyze_vix(&vix).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let (m, w) = (&a.model, &a.w_moments);
    let mut f = Vec::new();
    let d = vec![
        check(within(m.alpha, 0.347, 0.03), format!("alpha {:.4} (0.347 +- 0.03)", m.alpha), &mut f),
        check(within(m.beta, 0.881, 0.02), format!("beta {:.4} (0.881 +- 0.02)", m.beta), &mut f),
        check((1.5..=2.5).contains(&w.skewness), format!("W skewness {:.3} in [1.5, 2.5]", w.skewness), &mut f),
        check((7.0..=11.0).contains(&w.excess_kurtosis), format!("W kurtosis {:.3} in [7, 11]", w.excess_kurtosis), &mut f),
        check(secs < 1.0, format!("runtime {secs:.3}s < 1s"), &mut f),
    ];
    finish(d, f)
}

fn criterion_2() -> Outcome {
    let source = data_source()?;
    let mut f = Vec::new();
    let mut d = Vec::new();
    for (ds, (a, bm1, c), corr) in [
        (Dataset::MoodysAaa, (0.0258, -0.0654, 0.003), 0.22),
        (Dataset::MoodysBaa, (0.0487, -0.0822, 0.0069), 0.32),
    ] {
        let inputs = source.inputs(ds, None, None).map_err(|e| e.to_string())?;
        let r = analyze_rates(&inputs, 15).map_err(|e| e.to_string())?;
        for (name, got, want) in [("a", r.model.a, a), ("b-1", r.model.slope(), bm1), ("c", r.model.c, c)] {
            d.push(check(
                ((got - want) / want).abs() <= 0.2,
                format!("{} {name} {got:.4} ({want} +- 20%)", ds.label()),
                &mut f,
            ));
        }
        d.push(check(
            within(r.z_w_correlation, corr, 0.06),
            format!("{} corr(Z,W) {:.3} ({corr} +- 0.06)", ds.label(), r.z_w_correlation),
            &mut f,
        ));
    }
    finish(d, f)
}

fn criterion_3() -> Outcome {
    let source = data_source()?;
    let targets = [
        (Dataset::MoodysAaa, Case::Spread, -0.151, 1.079),
        (Dataset::MoodysBaa, Case::Spread, 0.051, 0.541),
        (Dataset::BofaQuality, Case::Yield, 0.27, 1.23),
        (Dataset::BofaQuality, Case::Spread, 0.43, 4.49),
        (Dataset::BofaQuality, Case::Excess, 0.53, 2.53),
        (Dataset::BofaJunk, Case::Yield, 0.25, 0.84),
        (Dataset::BofaJunk, Case::Spread, 0.43, 0.70),
        (Dataset::BofaJunk, Case::Excess, 0.57, 1.71),
    ];
    let mut f = Vec::new();
    let mut d = Vec::new();
    for (ds, case, skew, kurt) in targets {
        let inputs = source.inputs(ds, Some(case), None).map_err(|e| e.to_string())?;
        let c = analyze_rates(&inputs, 15).map_err(|e| e.to_string())?.comparison;
        let n = &c.normalized;
        d.push(check(
            c.normalization_improves()
                && within(n.skewness, skew, 0.3)
                && within(n.excess_kurtosis, kurt, 0.3),
            format!(
                "{} {}: skew {:.3} -> {:.3} ({skew}), kurt {:.3} -> {:.3} ({kurt})",
                ds.label(),
                case.label(),
                c.original.skewness,
                n.skewness,
                c.original.excess_kurtosis,
                n.excess_kurtosis
            ),
            &mut f,
        ));
    }
    finish(d, f)
}

fn criterion_4() -> Outcome {
    let source = data_source()?;
    let targets = [
        (Dataset::BofaQuality, Case::Yield, 50.6),
        (Dataset::BofaQuality, Case::Spread, 14.6),
        (Dataset::BofaQuality, Case::Excess, 25.8),
        (Dataset::BofaJunk, Case::Yield, 94.4),
        (Dataset::BofaJunk, Case::Spread, 75.1),
        (Dataset::BofaJunk, Case::Excess, 83.8),
    ];
    let mut f = Vec::new();
    let mut d = Vec::new();
    for (ds, case, r2) in targets {
        let inputs = source.inputs(ds, Some(case), None).map_err(|e| e.to_string())?;
        let r = analyze_returns(&inputs).map_err(|e| e.to_string())?;
        let got = 100.0 * r.single.fit.adj_r_squared;
        let p = r.with_rate.k_p_value().unwrap_or(f64::NAN);
        let junk_a = ds == Dataset::BofaJunk && case == Case::Yield;
        d.push(check(
            within(got, r2, 3.0) && (p < 0.01) == junk_a,
            format!("{} ({}) adj R2 {got:.1}% ({r2} +- 3), p(k=0) {p:.3}", ds.label(), case.letter()),
            &mut f,
        ));
    }
    finish(d, f)
}

fn random_walk(rng: &mut ChaCha8Rng, n: usize, phi: f64) -> Vec<f64> {
    let mut x = Vec::with_capacity(n);
    let mut prev = 0.0;
    for _ in 0..n {
        let e: f64 = rng.sample(StandardNormal);
        prev = phi * prev + e;
        x.push(prev);
    }
    x
}

fn criterion_5() -> Outcome {
    let mut f = Vec::new();
    let mut d = Vec::new();
    let seeds = 500;
    let mut size_rej = 0;
    let mut power_rej = 0;
    for s in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        if adf_test(&random_walk(&mut rng, 2000, 1.0), 15).unwrap().p_value < 0.05 {
            size_rej += 1;
        }
        if adf_test(&random_walk(&mut rng, 2000, 0.2), 15).unwrap().p_value < 0.05 {
            power_rej += 1;
        }
    }
    let size = 100.0 * size_rej as f64 / seeds as f64;
    let power = 100.0 * power_rej as f64 / seeds as f64;
    d.push(check(size <= 8.0, format!("random-walk rejection {size:.1}% <= 8%"), &mut f));
    d.push(check(power >= 90.0, format!("AR(0.2) rejection {power:.1}% >= 90%"), &mut f));
    match data_source() {
        Err(e) => d.push(check(false, format!("data: {e}"), &mut f)),
        Ok(source) => {
            for (case, lo, hi) in [(Case::Spread, 0.001, 0.03), (Case::Yield, 0.05, 0.25)] {
                let inputs = source.inputs(Dataset::BofaQuality, Some(case), None).map_err(|e| e.to_string())?;
                let p = adf_test(inputs.rate.values(), 15).map_err(|e| e.to_string())?.p_value;
                d.push(check(
                    (lo..=hi).contains(&p),
                    format!("Quality {} ADF p {p:.4} in [{lo}, {hi}]", case.label()),
                    &mut f,
                ));
            }
        }
    }
    finish(d, f)
}

/// Gaussian elimination with partial pivoting on `X'X b = X'y`.
fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let k = x[0].len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for (row, yi) in x.iter().zip(y) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += row[i] * row[j];
            }
            a[i][k] += row[i] * yi;
        }
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for r in col + 1..k {
            let m = a[r][col] / a[col][col];
            for c in col..=k {
                a[r][c] -= m * a[col][c];
            }
        }
    }
    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| a[i][j] * b[j]).sum();
        b[i] = (a[i][k] - s) / a[i][i];
    }
    b
}

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

/// Two-sided Student-t p-value by quadrature: with `x = sqrt(v) tan(u)` the
/// density becomes proportional to `cos(u)^(v-1)` on `(-pi/2, pi/2)`.
fn t_pvalue_quadrature(t: f64, dof: usize) -> f64 {
    let e = dof as f64 - 1.0;
    let g = move |u: f64| u.cos().max(0.0).powf(e);
    let upper = (t.abs() / (dof as f64).sqrt()).atan();
    let inside = simpson(&g, 0.0, upper, 1e-14);
    let total = simpson(&g, 0.0, std::f64::consts::FRAC_PI_2, 1e-14);
    1.0 - inside / total
}

fn criterion_6() -> Outcome {
    let mut f = Vec::new();
    let mut d = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(6..40);
        let k = rng.random_range(1..=4.min(n - 2));
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..k).map(|j| if j == 0 { 1.0 } else { rng.random_range(-3.0..3.0) }).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let cols: Vec<(String, Vec<f64>)> =
            (0..k).map(|j| (format!("x{j}"), rows.iter().map(|r| r[j]).collect())).collect();
        let fit = ols(&DesignMatrix::from_columns(cols).unwrap(), &y).unwrap();
        let oracle = normal_equations(&rows, &y);
        for (a, b) in fit.coefficients.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
    }
    d.push(check(worst <= 1e-8, format!("OLS vs normal equations max |diff| {worst:.2e} <= 1e-8"), &mut f));

    let x: Vec<f64> = (0..60).map(|_| rng.random_range(-2.0..2.0) + rng.random_range(0.0..1.0_f64).powi(3)).collect();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let cm = |p: i32| x.iter().map(|v| (v - mean).powi(p)).sum::<f64>() / n;
    let s = cm(2).sqrt();
    let m = moments(&x).unwrap();
    let mut err = (m.mean - mean).abs().max((m.std - s).abs());
    err = err.max((m.skewness - cm(3) / s.powi(3)).abs()).max((m.excess_kurtosis - (cm(4) / s.powi(4) - 3.0)).abs());
    let denom: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    let rho = |l: usize| (0..x.len() - l).map(|t| (x[t] - mean) * (x[t + l] - mean)).sum::<f64>() / denom;
    let a = acf(&x, 10).unwrap();
    for l in 0..=10 {
        err = err.max((a.values[l] - rho(l)).abs());
    }
    let q = n * (n + 2.0) * (1..=10).map(|l| rho(l).powi(2) / (n - l as f64)).sum::<f64>();
    err = err.max((ljung_box(&x, 10).unwrap().statistic - q).abs() / q.max(1.0));
    d.push(check(err <= 1e-10, format!("moments/ACF/Ljung-Box vs direct sums max |diff| {err:.2e} <= 1e-10"), &mut f));

    let mut worst_t: f64 = 0.0;
    for dof in [1, 2, 3, 5, 10, 30, 100, 460] {
        for t in [0.05, 0.5, 1.0, 1.96, 2.5, 4.0, 8.0] {
            worst_t = worst_t.max((t_test_pvalue(t, dof) - t_pvalue_quadrature(t, dof)).abs());
        }
    }
    d.push(check(worst_t <= 1e-6, format!("t p-values vs quadrature max |diff| {worst_t:.2e} <= 1e-6"), &mut f));
    finish(d, f)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut f = Vec::new();
    let mut d = Vec::new();
    let mut quiet = published_aaa_spec();
    quiet.innovations = InnovationSource::Gaussian { covariance: [[0.0; 3]; 3] };
    let path = simulate(&quiet, 3000, 1, InitialState { v: 5.0, r: 8.0, q: 0.0 }).unwrap();
    let (v_end, r_end) = (*path.v.last().unwrap(), *path.r.last().unwrap());
    let (vs, rs) = (quiet.long_run_vix(), quiet.long_run_rate());
    let s = quiet.spread;
    let (a, b) = (quiet.vix.alpha, quiet.vix.beta);
    let v_closed = (a / (1.0 - b)).exp();
    let r_closed = (s.a + s.c * v_closed) / (1.0 - s.b);
    d.push(check(
        (vs - v_closed).abs() <= 1e-8 && (v_end - v_closed).abs() <= 1e-8,
        format!("V* {v_end:.10} vs exp(alpha/(1-beta)) {v_closed:.10}"),
        &mut f,
    ));
    d.push(check(
        (rs - r_closed).abs() <= 1e-8 && (r_end - r_closed).abs() <= 1e-8,
        format!("R* {r_end:.10} vs (a+cV*)/(1-b) {r_closed:.10}"),
        &mut f,
    ));

    let spec = published_aaa_spec();
    let sd_w = spec.innovations.w_std();
    let m = stationary_moments(&spec, 100_000, 200, 1).map_err(|e| e.to_string())?;
    let lv = m.get("lnV").unwrap();
    let mean = a / (1.0 - b);
    let var = sd_w * sd_w / (1.0 - b * b);
    d.push(check(
        (lv.mean - mean).abs() <= 3.0 * lv.mean_se,
        format!("E[ln V] {:.4} vs {mean:.4} (3 SE = {:.4})", lv.mean, 3.0 * lv.mean_se),
        &mut f,
    ));
    d.push(check(
        (lv.variance - var).abs() <= 3.0 * lv.variance_se,
        format!("Var[ln V] {:.4} vs {var:.4} (3 SE = {:.4})", lv.variance, 3.0 * lv.variance_se),
        &mut f,
    ));
    let v = m.get("V").unwrap();
    let ev = (mean + var / 2.0).exp();
    d.push(check(
        (v.mean - ev).abs() <= 3.0 * v.mean_se,
        format!("E[V] {:.3} vs lognormal {ev:.3} (3 SE = {:.3})", v.mean, 3.0 * v.mean_se),
        &mut f,
    ));
    let secs = start.elapsed().as_secs_f64();
    d.push(check(secs < 30.0, format!("runtime {secs:.2}s < 30s"), &mut f));
    finish(d, f)
}

fn ergodicity_line(name: &str, spec: &JointModelSpec, f: &mut Vec<String>) -> String {
    match ergodicity_diagnostic(spec, 20_000, 2_000, 5, 1) {
        Ok(r) => check(r.passed, format!("{name}: max KS {:.4} < 0.05", r.max_ks), f),
        Err(e) => check(false, format!("{name}: {e}"), f),
    }
}

fn criterion_8() -> Outcome {
    let mut f = Vec::new();
    let mut d = Vec::new();
    d.push(ergodicity_line("published AAA coefficients", &published_aaa_spec(), &mut f));
    if let Ok(source) = data_source() {
        let spec = source
            .inputs(Dataset::MoodysAaa, None, None)
            .and_then(|i| fitted_joint_spec(&i, InnovationKind::Gaussian))
            .map_err(|e| e.to_string())?;
        d.push(ergodicity_line("fitted AAA", &spec, &mut f));
    }
    let mut explosive = published_aaa_spec();
    explosive.spread.b = 1.001;
    d.push(match ergodicity_diagnostic(&explosive, 20_000, 2_000, 5, 1) {
        Ok(r) => check(!r.passed, format!("b=1.001 fails: max KS {:.3}", r.max_ks), &mut f),
        Err(e) => format!("b=1.001 fails: {e}"),
    });
    let spec = published_aaa_spec();
    let init = InitialState { v: 20.0, r: 1.0, q: 0.0 };
    let (p1, p2) = (simulate(&spec, 5000, 99, init).unwrap(), simulate(&spec, 5000, 99, init).unwrap());
    let same = p1.v.iter().zip(&p2.v).chain(p1.r.iter().zip(&p2.r)).all(|(a, b)| a.to_bits() == b.to_bits());
    d.push(check(same, "identical seeds give bitwise-identical paths".into(), &mut f));
    finish(d, f)
}

fn criterion_9() -> Outcome {
    Ok("excluded: the stationarity/ergodicity theorems as mathematical statements (only the empirical proxies of 7-8 are tested), total-variation convergence rates, Shapiro-Wilk verdicts".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) if n == 9 => println!("criterion {n}: PASS (informational) {detail}"),
            Ok(detail) => println!("criterion {n}: PASS {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
