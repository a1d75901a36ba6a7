use std::fmt::Write as _;

use randers::isometry::{check_commutativity_with, check_isometry_with};
use randers::measure::{density_sigma, density_sigma_closed, indicatrix};
use randers::paths::distance_estimate;
use randers::spectrum::{gap_experiment, GapOptions, GapReport};
use randers::{
    evaluate, jacobian, map_point, randers_bound, IsometryMap, ModelPoint, Precision,
    TangentVector, Truncation, Vec2,
};

use crate::args::*;
use crate::output::{cell, json_object, json_pair, num, write_atomic};
use crate::Failure;

/// What a successful command hands back to `main`.
pub enum Outcome {
    Ok,
    /// Ran to completion but a check did not pass.
    Fail,
}

pub fn eval(a: &EvalArgs) -> Result<Outcome, Failure> {
    let x = ModelPoint::from_vec(a.model.id(), a.point)?;
    let m = evaluate(a.model.id(), &TangentVector::new(x, a.vector)?)?;
    let bound = randers_bound(a.model.id(), &x)?;
    println!(
        "{}",
        json_object(&[
            ("F", num(m.f)),
            ("alpha", num(m.alpha)),
            ("beta", num(m.beta)),
            ("randers_bound", num(bound)),
        ])
    );
    Ok(Outcome::Ok)
}

pub fn map(a: &MapArgs) -> Result<Outcome, Failure> {
    let x = ModelPoint::from_vec(a.map.source(), a.point)?;
    let y = map_point(a.map, &x)?;
    let j = jacobian(a.map, &x)?;
    let w = j.entries.mul_vec(a.vector);
    println!(
        "{}",
        json_object(&[
            ("map", format!("\"{}\"", a.map.name())),
            ("point", json_pair(y.coords().0)),
            ("vector", json_pair(w.0)),
            ("det_jacobian", num(j.entries.det())),
        ])
    );
    Ok(Outcome::Ok)
}

pub fn density(a: &DensityArgs) -> Result<Outcome, Failure> {
    let x = ModelPoint::from_vec(a.model.id(), a.point)?;
    let q = density_sigma(a.model.id(), &x, a.nodes as usize)?;
    let c = density_sigma_closed(a.model.id(), &x)?;
    println!(
        "{}",
        json_object(&[("sigma", num(q)), ("sigma_closed", num(c)), ("nodes", a.nodes.to_string())])
    );
    Ok(Outcome::Ok)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let precision = if a.double { Precision::Double } else { Precision::DoubleDouble };
    let t = Truncation { disk: a.truncation, half_plane: a.band };
    let n = a.samples as usize;
    let mut csv = String::from("map,samples,max_rel_err,mean_rel_err,worst_x1,worst_x2,worst_v1,worst_v2\n");
    let mut pass = true;
    for map in IsometryMap::ALL {
        let r = check_isometry_with(map, n, a.seed, t.for_kind(map.source()), precision)?;
        pass &= r.passes(a.tol);
        let (x, v) = match r.worst {
            Some(w) => (w.base.coords(), w.v),
            None => (Vec2::new(f64::NAN, f64::NAN), Vec2::new(f64::NAN, f64::NAN)),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            map.name(),
            r.samples,
            cell(r.max_rel_err),
            cell(r.mean_rel_err),
            cell(x[0]),
            cell(x[1]),
            cell(v[0]),
            cell(v[1])
        );
    }
    let c = check_commutativity_with(n, a.seed, t, precision)?;
    pass &= c.max_err < a.comp_tol;
    let x = c.worst.map(|p| p.coords()).unwrap_or(Vec2::new(f64::NAN, f64::NAN));
    let _ = writeln!(
        csv,
        "composition,{},{},{},{},{},,",
        c.samples,
        cell(c.max_err),
        cell(c.mean_err),
        cell(x[0]),
        cell(x[1])
    );
    write_atomic(&a.out, &csv)?;
    println!(
        "{} samples={} seed={} tol={} comp_tol={}",
        if pass { "PASS" } else { "FAIL" },
        a.samples,
        a.seed,
        num(a.tol),
        num(a.comp_tol)
    );
    Ok(if pass { Outcome::Ok } else { Outcome::Fail })
}

pub fn indicatrix_svg(a: &IndicatrixArgs) -> Result<Outcome, Failure> {
    let model = a.model.id();
    let x = ModelPoint::from_vec(model, a.point)?;
    let prof = indicatrix(model, &x, a.nodes as usize)?;
    let radius = |e: Vec2| -> Result<f64, Failure> {
        Ok(1.0 / evaluate(model, &TangentVector::new(x, e)?)?.f)
    };
    let r0 = radius(Vec2::new(1.0, 0.0))?;
    let rpi = radius(Vec2::new(-1.0, 0.0))?;
    let deviation = prof.radii.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    let rmax = prof.radii.iter().copied().fold(1.0, f64::max);
    let half = 1.1 * rmax;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        num(-half),
        num(-half),
        num(2.0 * half),
        num(2.0 * half)
    );
    let _ = writeln!(
        svg,
        "<!-- model={} reversible={} point={},{} nodes={} -->",
        model.kind,
        model.reversible,
        num(a.point[0]),
        num(a.point[1]),
        a.nodes
    );
    let _ = writeln!(svg, "<!-- max_radial_deviation={} -->", num(deviation));
    let _ = writeln!(svg, "<!-- r_0={} r_pi={} asymmetry={} -->", num(r0), num(rpi), num(r0 - rpi));
    let _ = writeln!(svg, "<!-- area={} -->", num(prof.area()));
    let stroke = num(half / 200.0);
    let _ = writeln!(
        svg,
        r#"<circle cx="0" cy="0" r="1" fill="none" stroke="gray" stroke-width="{stroke}"/>"#
    );
    let pts: Vec<String> = prof
        .radii
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let p = *r * Vec2::polar(prof.angle(k));
            // SVG's y axis points down.
            format!("{},{}", num(p[0]), num(-p[1]))
        })
        .collect();
    let _ = writeln!(
        svg,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="{stroke}"/>"#,
        pts.join(" ")
    );
    svg.push_str("</svg>\n");
    write_atomic(&a.out, &svg)?;
    Ok(Outcome::Ok)
}

pub fn gap(a: &GapArgs) -> Result<Outcome, Failure> {
    let opts = GapOptions { iters: a.iters, levels: a.levels as usize };
    let report = gap_experiment(&a.models, &a.truncations, a.h, a.seed, &opts)?;
    let csv = gap_csv(&report, a.seed);
    match &a.out {
        Some(p) => write_atomic(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(if report.passes() { Outcome::Ok } else { Outcome::Fail })
}

pub fn gap_csv(r: &GapReport, seed: u64) -> String {
    let mut csv = String::from("model,reversible,truncation,h,final_quotient,iters_used\n");
    for row in &r.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.model,
            row.reversible,
            cell(row.truncation),
            cell(row.h),
            cell(row.final_quotient),
            row.iters_used
        );
    }
    if let Some(m) = r.monotone {
        let _ = writeln!(csv, "summary,monotone,,,{m},");
    }
    let _ = writeln!(csv, "summary,finsler_below,,,{},", r.finsler_below);
    let _ = writeln!(csv, "summary,reversible_floor,,,{},", r.reversible_floor);
    let _ = writeln!(csv, "summary,seed,,,{seed},");
    csv
}

pub fn distance(a: &DistanceArgs) -> Result<Outcome, Failure> {
    let model = a.model.id();
    let x = ModelPoint::from_vec(model, a.from)?;
    let y = ModelPoint::from_vec(model, a.to)?;
    let fwd = distance_estimate(model, &x, &y, a.control, a.iters)?;
    let rev = distance_estimate(model, &y, &x, a.control, a.iters)?;
    println!(
        "{}",
        json_object(&[
            ("forward", num(fwd.length)),
            ("reverse", num(rev.length)),
            ("asymmetry", num((fwd.length - rev.length).abs())),
        ])
    );
    Ok(Outcome::Ok)
}
