use titeica_core::centroaffine::{verify_scaling, CentroAffineMap};
use titeica_core::classify::{evaluate_grid, grid, verdict_from_ratios, PointRecord};
use titeica_core::metrics::{
    change_catalog, check_pair, metric_catalog, metric_pair, PairReport, CHANGE_NAMES, METRIC_NAMES, METRIC_PAIRS,
};
use titeica_core::surfaces::{catalog, SurfaceDef, CATALOG};
use titeica_core::Error as CoreError;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::report::{config_cell, Cell, Report};

/// Execute `cfg` and build its report. Verification failures come back as a
/// report with `pass == false`; errors are reserved for runs that produced
/// nothing to report.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Catalog => Ok(catalog_listing(cfg)),
        Command::Invariants => invariants(cfg),
        Command::Classify => classify(cfg),
        Command::TransformCheck => transform_check(cfg),
        Command::MetricCheck => metric_check(cfg),
    }
}

fn surface(cfg: &RunConfig) -> Result<SurfaceDef, CliError> {
    let name = cfg.surface.as_deref().ok_or_else(|| CliError::config("surface", "missing"))?;
    Ok(catalog(name, &cfg.params)?)
}

fn surface_points(cfg: &RunConfig, s: &SurfaceDef) -> Vec<(f64, f64)> {
    grid(&s.domain(), cfg.grid.0, cfg.grid.1)
}

fn report(cfg: &RunConfig, columns: Vec<&'static str>, rows: Vec<Vec<Cell>>, summary: Cell, pass: bool) -> Report {
    Report { command: cfg.command.name(), config: config_cell(cfg), columns, rows, summary, pass }
}

fn catalog_listing(cfg: &RunConfig) -> Report {
    let mut rows = Vec::new();
    for e in CATALOG {
        let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let domain = catalog(e.name, &Default::default()).map(|s| s.domain().to_string()).ok();
        let ambient = catalog(e.name, &Default::default()).map(|s| s.ambient().name()).ok();
        rows.push(vec![
            "surface".into(),
            e.name.into(),
            params.join(" ").into(),
            domain.into(),
            ambient.into(),
            e.description.into(),
        ]);
    }
    for (name, desc) in METRIC_NAMES {
        let domain = metric_catalog(name).map(|m| m.domain().to_string()).ok();
        rows.push(vec!["metric".into(), (*name).into(), "".into(), domain.into(), Cell::Null, (*desc).into()]);
    }
    for (name, desc) in CHANGE_NAMES {
        let domain = change_catalog(name).map(|c| c.domain().to_string()).ok();
        rows.push(vec!["change".into(), (*name).into(), "".into(), domain.into(), Cell::Null, (*desc).into()]);
    }
    for p in METRIC_PAIRS {
        let desc = format!("{} = pullback of {} via {}", p.target, p.source, p.changes.join(" | "));
        rows.push(vec!["pair".into(), p.name.into(), "".into(), Cell::Null, Cell::Null, desc.into()]);
    }
    let summary = Cell::map([
        ("surfaces", Cell::from(CATALOG.len())),
        ("metrics", METRIC_NAMES.len().into()),
        ("changes", CHANGE_NAMES.len().into()),
        ("pairs", METRIC_PAIRS.len().into()),
    ]);
    report(cfg, vec!["kind", "name", "params", "domain", "ambient", "description"], rows, summary, true)
}

fn skipped_reason(r: &PointRecord) -> Cell {
    r.outcome.as_ref().err().map(String::as_str).into()
}

fn invariants(cfg: &RunConfig) -> Result<Report, CliError> {
    let s = surface(cfg)?;
    let points = match cfg.point {
        Some((x, y)) => {
            if !s.domain().contains(x, y) {
                return Err(CliError::config("point", format!("({x}, {y}) is outside the domain {}", s.domain())));
            }
            vec![(x, y)]
        }
        None => surface_points(cfg, &s),
    };
    let records = evaluate_grid(&s, &points);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut evaluated = 0;
    for r in &records {
        let mut row = vec![Cell::Num(r.x), Cell::Num(r.y)];
        match &r.outcome {
            Ok(rep) => {
                evaluated += 1;
                worst = worst.max(rep.identity_residual / rep.ratio.abs().max(1.0));
                let f = &rep.forms;
                let v = &rep.volumes;
                row.extend(
                    [
                        f.e,
                        f.f,
                        f.g,
                        f.l,
                        f.m,
                        f.n,
                        rep.k,
                        rep.d,
                        v.vx,
                        v.vy,
                        v.vxy,
                        v.v,
                        rep.ratio,
                        rep.identity_residual,
                    ]
                    .map(Cell::Num),
                );
            }
            Err(_) => row.extend(std::iter::repeat_n(Cell::Null, 14)),
        }
        row.push(skipped_reason(r));
        rows.push(row);
    }
    let pass = evaluated > 0 && worst <= cfg.tol;
    let summary = Cell::map([
        ("surface", Cell::from(s.name())),
        ("ambient", s.ambient().name().into()),
        ("domain", s.domain().to_string().into()),
        ("points_total", records.len().into()),
        ("points_evaluated", evaluated.into()),
        ("points_skipped", (records.len() - evaluated).into()),
        ("max_identity_residual", if evaluated > 0 { Cell::Num(worst) } else { Cell::Null }),
        ("tol", cfg.tol.into()),
        ("pass", pass.into()),
    ]);
    let columns = vec![
        "x",
        "y",
        "E",
        "F",
        "G",
        "L",
        "M",
        "N",
        "K",
        "d",
        "Vx",
        "Vy",
        "Vxy",
        "V",
        "ratio",
        "identity_residual",
        "skipped",
    ];
    Ok(report(cfg, columns, rows, summary, pass))
}

fn classify(cfg: &RunConfig) -> Result<Report, CliError> {
    let s = surface(cfg)?;
    let points = surface_points(cfg, &s);
    let records = evaluate_grid(&s, &points);
    let rows: Vec<Vec<Cell>> = records
        .iter()
        .map(|r| {
            let ok = r.outcome.as_ref().ok();
            vec![
                Cell::Num(r.x),
                Cell::Num(r.y),
                ok.map(|o| o.k).into(),
                ok.map(|o| o.d).into(),
                ok.map(|o| o.ratio).into(),
                skipped_reason(r),
            ]
        })
        .collect();
    let ratios: Vec<f64> = records.iter().filter_map(PointRecord::ratio).collect();
    let mut summary =
        vec![("surface".to_string(), Cell::from(s.name())), ("points_total".into(), records.len().into())];
    // a non-constant ratio is a valid answer; only a withheld verdict fails
    let pass = match verdict_from_ratios(&ratios, records.len(), cfg.tol) {
        Ok(v) => {
            summary.extend([
                ("verdict".to_string(), Cell::from(if v.is_titeica { "titeica" } else { "not-titeica" })),
                ("is_titeica".into(), v.is_titeica.into()),
                ("R_f".into(), v.r_f.into()),
                ("spread".into(), v.spread.into()),
                ("points_evaluated".into(), v.points_evaluated.into()),
                ("points_skipped".into(), v.points_skipped.into()),
            ]);
            true
        }
        Err(CoreError::Inconclusive { skipped, total }) => {
            summary.extend([
                ("verdict".to_string(), Cell::from("inconclusive")),
                ("is_titeica".into(), Cell::Null),
                ("points_evaluated".into(), (total - skipped).into()),
                ("points_skipped".into(), skipped.into()),
            ]);
            false
        }
        Err(e) => return Err(e.into()),
    };
    summary.push(("tol".into(), cfg.tol.into()));
    Ok(report(cfg, vec!["x", "y", "K", "d", "ratio", "skipped"], rows, Cell::Map(summary), pass))
}

fn transform_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let s = surface(cfg)?;
    let m = cfg.matrix.as_deref().ok_or_else(|| CliError::config("matrix", "missing"))?;
    let map = CentroAffineMap::from_row_major(m)?;
    let points = surface_points(cfg, &s);
    let rep = verify_scaling(&s, &map, &points, cfg.tol)?;
    // merge evaluated and skipped points back into grid order
    let (mut ok, mut skipped) = (rep.points.iter().peekable(), rep.skipped.iter().peekable());
    let mut rows = Vec::with_capacity(points.len());
    for &(x, y) in &points {
        if let Some(p) = ok.next_if(|p| p.x == x && p.y == y) {
            let mut row: Vec<Cell> = [
                x,
                y,
                p.ratio_before,
                p.ratio_after,
                p.expected_after,
                p.ratio_residual,
                p.volume_before,
                p.volume_after,
                p.volume_residual,
                p.numerator_residual,
            ]
            .map(Cell::Num)
            .into();
            row.push(Cell::Null);
            rows.push(row);
        } else if let Some(sk) = skipped.next_if(|k| k.x == x && k.y == y) {
            let mut row = vec![Cell::Num(x), Cell::Num(y)];
            row.extend(std::iter::repeat_n(Cell::Null, 8));
            row.push(sk.reason.as_str().into());
            rows.push(row);
        }
    }
    let summary = Cell::map([
        ("surface", Cell::from(s.name())),
        ("matrix", m.to_vec().into()),
        ("det", rep.det.into()),
        ("scale_factor", rep.scale_factor.into()),
        ("points_evaluated", rep.points.len().into()),
        ("points_skipped", rep.skipped.len().into()),
        ("max_ratio_residual", rep.max_ratio_residual.into()),
        ("max_volume_residual", rep.max_volume_residual.into()),
        ("max_numerator_residual", rep.max_numerator_residual.into()),
        ("tol", cfg.tol.into()),
        ("pass", rep.pass.into()),
    ]);
    let columns = vec![
        "x",
        "y",
        "ratio_before",
        "ratio_after",
        "expected_after",
        "ratio_residual",
        "V_before",
        "V_after",
        "volume_residual",
        "numerator_residual",
        "skipped",
    ];
    Ok(report(cfg, columns, rows, summary, rep.pass))
}

fn pair_summary(p: &PairReport) -> Cell {
    let variants: Vec<Cell> = p
        .variants
        .iter()
        .map(|v| {
            let (max_diff, error) = match &v.report {
                Ok(r) => (Cell::Num(r.max_diff), Cell::Null),
                Err(e) => (Cell::Null, Cell::from(e.as_str())),
            };
            Cell::map([
                ("change", Cell::from(v.change.as_str())),
                ("max_diff", max_diff),
                ("reproduces", v.passed().into()),
                ("error", error),
            ])
        })
        .collect();
    Cell::map([
        ("pair", Cell::from(p.pair)),
        ("target", p.target.into()),
        ("source", p.source.into()),
        ("variants", Cell::List(variants)),
        ("reproducing", p.reproducing.clone().into()),
        ("pass", p.pass.into()),
    ])
}

fn metric_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let pairs = match cfg.pair.as_deref() {
        None | Some("all") => METRIC_PAIRS.iter().collect::<Vec<_>>(),
        Some(name) => vec![metric_pair(name)?],
    };
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut pass = true;
    for pair in pairs {
        let rep = check_pair(pair, cfg.grid.0, cfg.grid.1, cfg.tol)?;
        for v in &rep.variants {
            let head = [Cell::from(rep.pair), Cell::from(v.change.as_str())];
            match &v.report {
                Ok(r) => {
                    for p in &r.points {
                        let mut row = head.to_vec();
                        row.extend(
                            [p.x, p.y, p.lhs[0], p.lhs[1], p.lhs[2], p.rhs[0], p.rhs[1], p.rhs[2], p.diff]
                                .map(Cell::Num),
                        );
                        row.push(Cell::Null);
                        rows.push(row);
                    }
                }
                Err(e) => {
                    let mut row = head.to_vec();
                    row.extend(std::iter::repeat_n(Cell::Null, 9));
                    row.push(e.as_str().into());
                    rows.push(row);
                }
            }
        }
        pass &= rep.pass;
        summaries.push(pair_summary(&rep));
    }
    let summary = Cell::map([("pairs", Cell::List(summaries)), ("tol", cfg.tol.into()), ("pass", pass.into())]);
    let columns = vec![
        "pair",
        "change",
        "x",
        "y",
        "target_g11",
        "target_g12",
        "target_g22",
        "pullback_g11",
        "pullback_g12",
        "pullback_g22",
        "diff",
        "error",
    ];
    Ok(report(cfg, columns, rows, summary, pass))
}
