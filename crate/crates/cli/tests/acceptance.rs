//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p titeica --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use titeica::{run, Cell, Command, Report, RunConfig};
use titeica_core::centroaffine::{apply_map, verify_scaling, CentroAffineMap};
use titeica_core::classify::{classify, grid};
use titeica_core::invariants::{
    fundamental_forms, gaussian_curvature, identity_residual, tangent_distance, titeica_ratio,
};
use titeica_core::metrics::{brioschi_curvature, metric_catalog};
use titeica_core::surfaces::{catalog, Params};
use titeica_core::{AmbientForm, DomainBox, SurfaceDef};

// tolerances, pinned
const SPHERE_SPREAD: f64 = 1e-9;
const SPHERE_VALUE: f64 = 1e-9;
const TRANSLATED_MIN_SPREAD: f64 = 0.1;
const XYZ_TOL: f64 = 1e-9;
const SCALING_TOL: f64 = 1e-8;
const VOLUME_TOL: f64 = 1e-10;
const UNIMODULAR_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-9;
const PSEUDOSPHERE_K_TOL: f64 = 1e-7;
const METRIC_CHAIN_TOL: f64 = 1e-9;
const MINKOWSKI_METRIC_TOL: f64 = 1e-10;
const MINKOWSKI_D_TOL: f64 = 1e-10;
const MINKOWSKI_K_TOL: f64 = 1e-9;
const DISK_CHANGE_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn summary_f64(r: &Report, key: &str) -> f64 {
    r.summary.get(key).and_then(Cell::as_f64).unwrap_or(f64::NAN)
}

fn summary_bool(r: &Report, key: &str) -> Option<bool> {
    r.summary.get(key).and_then(Cell::as_bool)
}

fn classify_cli(surface: &str, params: &[(&str, f64)], tol: f64) -> Result<Report, String> {
    let mut cfg = RunConfig::new(Command::Classify).surface(surface);
    cfg.tol = tol;
    for (k, v) in params {
        cfg = cfg.param(k, *v);
    }
    run(&cfg).map_err(|e| e.to_string())
}

fn params(kv: &[(&str, f64)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn random_point(rng: &mut ChaCha8Rng, b: DomainBox) -> (f64, f64) {
    let (mx, my) = (0.01 * b.width(), 0.01 * b.height());
    (rng.gen_range(b.x0 + mx..b.x1 - mx), rng.gen_range(b.y0 + my..b.y1 - my))
}

fn sphere_invariant() -> Outcome {
    let r1 = classify_cli("sphere-origin", &[("R", 1.0)], SPHERE_SPREAD)?;
    let r2 = classify_cli("sphere-origin", &[("R", 2.0)], SPHERE_SPREAD)?;
    let (f1, s1, f2, s2) =
        (summary_f64(&r1, "R_f"), summary_f64(&r1, "spread"), summary_f64(&r2, "R_f"), summary_f64(&r2, "spread"));
    check(
        r1.rows.len() == 400
            && summary_bool(&r1, "is_titeica") == Some(true)
            && (f1 - 1.0).abs() <= SPHERE_VALUE
            && s1 <= SPHERE_SPREAD
            && summary_bool(&r2, "is_titeica") == Some(true)
            && (f2 - 1.0 / 64.0).abs() <= SPHERE_VALUE
            && s2 <= SPHERE_SPREAD,
        format!("R=1: R_f = {f1:.17}, spread {s1:.2e}; R=2: R_f = {f2:.17} (1/64), spread {s2:.2e}"),
    )
}

fn translated_sphere() -> Outcome {
    let r = classify_cli("sphere-translated", &[("R", 1.0), ("c", 2.0)], 1e-8)?;
    let spread = summary_f64(&r, "spread");
    check(
        summary_bool(&r, "is_titeica") == Some(false) && spread > TRANSLATED_MIN_SPREAD,
        format!("is_titeica = false, spread {spread:.4}"),
    )
}

/// Hand-derived closed form for `u = 1/(xy)`, independent of the jets.
fn xyz_oracle(x: f64, y: f64) -> f64 {
    let (ux, uy) = (-1.0 / (x * x * y), -1.0 / (x * y * y));
    let (uxx, uyy, uxy) = (2.0 / (x.powi(3) * y), 2.0 / (x * y.powi(3)), 1.0 / (x * x * y * y));
    let w = 1.0 + ux * ux + uy * uy;
    let k = (uxx * uyy - uxy * uxy) / (w * w);
    let d = (x * ux + y * uy - 1.0 / (x * y)).abs() / w.sqrt();
    k / d.powi(4)
}

fn titeica_example() -> Outcome {
    let r = classify_cli("titeica-xyz", &[], XYZ_TOL)?;
    let (rf, spread) = (summary_f64(&r, "R_f"), summary_f64(&r, "spread"));
    let (xs, ys, ratios) = (r.column("x"), r.column("y"), r.column("ratio"));
    let mut worst_oracle: f64 = 0.0;
    for i in 0..ratios.len() {
        let (x, y) = (xs[i].as_f64().unwrap(), ys[i].as_f64().unwrap());
        let got = ratios[i].as_f64().unwrap_or(f64::NAN);
        worst_oracle = worst_oracle.max((got - xyz_oracle(x, y)).abs()).max((got - 1.0 / 27.0).abs());
    }
    check(
        summary_bool(&r, "is_titeica") == Some(true)
            && (rf - 1.0 / 27.0).abs() <= XYZ_TOL
            && spread <= XYZ_TOL
            && worst_oracle <= XYZ_TOL,
        format!("R_f = {rf:.17} (1/27), spread {spread:.2e}, max deviation from closed form {worst_oracle:.2e}"),
    )
}

/// Criteria 4 and 5 share samples.
fn scaling_samples() -> Result<(f64, f64, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11ce);
    let (mut worst_ratio, mut worst_volume, mut evaluated) = (0.0f64, 0.0f64, 0);
    for name in ["paraboloid", "titeica-xyz"] {
        let s = catalog(name, &Params::new()).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let a = CentroAffineMap::new(common::random_matrix(&mut rng, 0.1, 5.0)).map_err(|e| e.to_string())?;
            let points: Vec<(f64, f64)> = (0..20).map(|_| random_point(&mut rng, s.domain())).collect();
            let rep = verify_scaling(&s, &a, &points, SCALING_TOL).map_err(|e| e.to_string())?;
            worst_ratio = worst_ratio.max(rep.max_ratio_residual);
            worst_volume = worst_volume.max(rep.max_volume_residual);
            evaluated += rep.points.len();
        }
    }
    Ok((worst_ratio, worst_volume, evaluated))
}

fn ratio_scaling() -> Outcome {
    let (ratio, _, n) = scaling_samples()?;
    check(ratio <= SCALING_TOL, format!("max ratio residual {ratio:.2e} over {n} points, 40 matrices"))
}

fn volume_scaling() -> Outcome {
    let (_, volume, n) = scaling_samples()?;
    check(volume <= VOLUME_TOL, format!("max relative error of V' = det V: {volume:.2e} over {n} points"))
}

fn unimodular_preservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xde7);
    let surfaces = [
        catalog("sphere-origin", &params(&[("R", 1.0)])),
        catalog("sphere-origin", &params(&[("R", 2.0)])),
        catalog("titeica-xyz", &Params::new()),
    ];
    let mut worst: f64 = 0.0;
    let mut same_verdicts = true;
    for s in surfaces {
        let s = s.map_err(|e| e.to_string())?;
        let points = grid(&s.domain(), 20, 20);
        let before = classify(&s, &points, SPHERE_SPREAD).map_err(|e| e.to_string())?.verdict;
        for k in 0..6 {
            let mut m = common::random_rotation(&mut rng);
            if k % 2 == 1 {
                m[0] = m[0].map(|v| -v);
            }
            let a = CentroAffineMap::new(m).map_err(|e| e.to_string())?;
            let image = apply_map(&s, &a).map_err(|e| e.to_string())?;
            let after = classify(&image, &points, SPHERE_SPREAD).map_err(|e| e.to_string())?.verdict;
            same_verdicts &= before.is_titeica && after.is_titeica;
            worst = worst.max((before.r_f - after.r_f).abs());
        }
    }
    check(
        same_verdicts && worst <= UNIMODULAR_TOL,
        format!("18 orthogonal maps (det = +1 and -1), max change of R_f {worst:.2e}"),
    )
}

fn identity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1de7);
    let unit = DomainBox::new(-1.0, 1.0, -1.0, 1.0);
    let (mut checked, mut worst) = (0, 0.0f64);
    while checked < 500 {
        let p = common::Poly::random(&mut rng);
        let s = SurfaceDef::monge("poly", unit, AmbientForm::Euclidean, move |x, y| Ok(p.eval(x, y)));
        let (x, y) = random_point(&mut rng, unit);
        let sj = s.eval(x, y).map_err(|e| e.to_string())?;
        let (Ok(ratio), Ok(res)) =
            (titeica_ratio(&sj, AmbientForm::Euclidean), identity_residual(&sj, AmbientForm::Euclidean))
        else {
            continue;
        };
        worst = worst.max(res / ratio.abs().max(1.0));
        checked += 1;
    }
    check(worst <= IDENTITY_TOL, format!("500 patches, max residual / max(1, |ratio|) = {worst:.2e}"))
}

fn pseudosphere_intrinsic() -> Outcome {
    let m = metric_catalog("pseudosphere").map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (x, y) in grid(&m.domain(), 10, 5) {
        let k = brioschi_curvature(&m, x, y).map_err(|e| e.to_string())?;
        worst = worst.max((k + 1.0).abs());
    }
    let r = classify_cli("pseudosphere", &[], 1e-8)?;
    check(
        worst <= PSEUDOSPHERE_K_TOL && summary_bool(&r, "is_titeica") == Some(false),
        format!(
            "max |K + 1| = {worst:.2e} at 50 points; extrinsic classify: is_titeica = false, spread {:.3}",
            summary_f64(&r, "spread")
        ),
    )
}

fn metric_cli(pair: &str, tol: f64) -> Result<Report, String> {
    let mut cfg = RunConfig::new(Command::MetricCheck);
    cfg.pair = Some(pair.to_string());
    cfg.tol = tol;
    run(&cfg).map_err(|e| e.to_string())
}

fn pair_summary(r: &Report) -> Option<&Cell> {
    match r.summary.get("pairs")? {
        Cell::List(items) => items.first(),
        _ => None,
    }
}

fn metric_chain() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for pair in ["pseudosphere:half-plane", "half-plane:disk"] {
        let r = metric_cli(pair, METRIC_CHAIN_TOL)?;
        let p = pair_summary(&r).ok_or("missing pair summary")?;
        let max_diff = match p.get("variants") {
            Some(Cell::List(v)) => v.first().and_then(|c| c.get("max_diff")).and_then(Cell::as_f64),
            _ => None,
        };
        ok &= r.pass && r.rows.len() == 50;
        details.push(format!("{pair}: {} points, max diff {:.2e}", r.rows.len(), max_diff.unwrap_or(f64::NAN)));
    }
    check(ok, details.join("; "))
}

fn minkowski_sphere() -> Outcome {
    let s = catalog("minkowski-sphere", &Params::new()).map_err(|e| e.to_string())?;
    let m = metric_catalog("minkowski-sphere").map_err(|e| e.to_string())?;
    let amb = s.ambient();
    let (mut metric_err, mut d_err, mut k_err) = (0.0f64, 0.0f64, 0.0f64);
    for (u1, u2) in grid(&s.domain(), 20, 20) {
        let sj = s.eval(u1, u2).map_err(|e| e.to_string())?;
        let forms = fundamental_forms(&sj, amb).map_err(|e| e.to_string())?;
        let g = m.values(u1, u2).map_err(|e| e.to_string())?;
        metric_err = metric_err.max((forms.e - g[0]).abs()).max((forms.f - g[1]).abs()).max((forms.g - g[2]).abs());
        d_err = d_err.max((tangent_distance(&sj, amb).map_err(|e| e.to_string())? - 1.0).abs());
        k_err = k_err.max((gaussian_curvature(&sj, amb).map_err(|e| e.to_string())? + 1.0).abs());
    }
    let r = classify_cli("minkowski-sphere", &[], MINKOWSKI_K_TOL)?;
    let rf = summary_f64(&r, "R_f");
    check(
        metric_err <= MINKOWSKI_METRIC_TOL
            && d_err <= MINKOWSKI_D_TOL
            && k_err <= MINKOWSKI_K_TOL
            && summary_bool(&r, "is_titeica") == Some(true)
            && (rf + 1.0).abs() <= MINKOWSKI_K_TOL,
        format!(
            "metric err {metric_err:.2e}, |d - 1| {d_err:.2e}, |K + 1| {k_err:.2e}, R_f = {rf:.17}, spread {:.2e}",
            summary_f64(&r, "spread")
        ),
    )
}

fn jet_oracle() -> Outcome {
    let out = common::jet_oracle(0x7174_e1ca, 1000);
    let ok = out.failures.is_empty() && out.unresolved * 20 <= out.checked;
    check(ok, format!("{out}; {} failures", out.failures.len()))
}

fn disk_change_report() -> Outcome {
    let r = metric_cli("minkowski-sphere:disk", DISK_CHANGE_TOL)?;
    let p = pair_summary(&r).ok_or("missing pair summary")?;
    let Some(Cell::List(variants)) = p.get("variants") else { return Err("no variants in report".into()) };
    let described: Vec<String> = variants
        .iter()
        .map(|v| {
            let name = v.get("change").and_then(Cell::as_str).unwrap_or("?");
            let diff = v.get("max_diff").and_then(Cell::as_f64).unwrap_or(f64::NAN);
            let yes = v.get("reproduces").and_then(Cell::as_bool) == Some(true);
            format!("{name} max diff {diff:.2e} -> {}", if yes { "reproduces" } else { "does not reproduce" })
        })
        .collect();
    let names: Vec<&str> = variants.iter().filter_map(|v| v.get("change").and_then(Cell::as_str)).collect();
    let reproducing = match p.get("reproducing") {
        Some(Cell::List(l)) => l.iter().filter_map(Cell::as_str).collect::<Vec<_>>(),
        _ => Vec::new(),
    };
    check(
        names.contains(&"disk-to-minkowski-sphere-squared")
            && names.contains(&"disk-to-minkowski-sphere")
            && !reproducing.is_empty(),
        format!("{}; reproducing: [{}]", described.join("; "), reproducing.join(", ")),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("sphere invariant", sphere_invariant),
        ("translated sphere", translated_sphere),
        ("titeica example u = 1/(xy)", titeica_example),
        ("scaling by 1/det(A)^2", ratio_scaling),
        ("volume scaling V' = det(A) V", volume_scaling),
        ("det(A)^2 = 1 preservation", unimodular_preservation),
        ("volume identity suite", identity_suite),
        ("pseudosphere intrinsic vs extrinsic", pseudosphere_intrinsic),
        ("metric chain", metric_chain),
        ("minkowski sphere", minkowski_sphere),
        ("jet oracle", jet_oracle),
        ("disk-change discrepancy report", disk_change_report),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
