//! Command implementations: read inputs, call the library, emit summaries
//! and artifacts.

use std::fs;

use serde_json::json;

use eigres_core::blowup2::{self, best_patch, BlowupChartPoint};
use eigres_core::hermitian::{eigendecompose, HermitianMatrix};
use eigres_core::isotropy::{self, ResolutionKind};
use eigres_core::json::MatrixJson;
use eigres_core::linalg;
use eigres_core::path_track::{self, MatrixPath, MonodromyReport, PathName, PathParams, TrajectorySample};
use eigres_core::riesz;

use crate::csv;
use crate::CliError;

type CliResult = Result<(), CliError>;

/// Read and validate a Matrix JSON file.
pub fn read_matrix_json(path: &str, tol: f64) -> Result<HermitianMatrix, CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Parse("--tol must be positive".into()));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {path}: {e}")))?;
    let wire: MatrixJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
    Ok(wire.into_hermitian(tol)?)
}

fn write_artifact(out: Option<&str>, content: &str) -> CliResult {
    if let Some(path) = out {
        fs::write(path, content).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
    }
    Ok(())
}

pub fn analyze(input: &str, tol: f64, rel_tol: f64, out: Option<&str>) -> CliResult {
    if !(rel_tol > 0.0) {
        return Err(CliError::Parse("--rel-tol must be positive".into()));
    }
    let x = read_matrix_json(input, tol)?;
    let eig = eigendecompose(&x)?;
    let index = isotropy::isotropy_index(&eig.values, rel_tol)?;
    let partition = riesz::detect_gaps(&eig.values, rel_tol)?;

    println!("n: {}", x.n());
    println!(
        "eigenvalues: [{}]",
        eig.values
            .iter()
            .map(|v| format!("{v:.12e}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("isotropy index: {:?}", index.indices());
    println!("clusters: {} with sizes {:?}", partition.cluster_count(), partition.sizes);
    if !partition.cuts.is_empty() {
        println!(
            "cuts: [{}]",
            partition
                .cuts
                .iter()
                .map(|v| format!("{v:.12e}"))
                .collect::<Vec<_>>()
                .join(", ")
        );
    }

    let report = json!({
        "n": x.n(),
        "values": eig.values,
        "isotropy": index.indices(),
        "clusters": {
            "sizes": partition.sizes,
            "cuts": partition.cuts,
            "gap_widths": partition.gap_widths,
        },
    });
    write_artifact(out, &format!("{report:#}\n"))
}

pub fn split(input: &str, cuts: &[f64], nodes: usize, tol: f64, out: Option<&str>) -> CliResult {
    let x = read_matrix_json(input, tol)?;
    let mut cuts = cuts.to_vec();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    if cuts.len() == 1 {
        let s = riesz::split_at_gap(&x, cuts[0], nodes)?;
        let n = x.n();
        let sum_err = (s.l.as_matrix() + s.r.as_matrix() - x.as_matrix()).norm();
        let comm = (s.l.as_matrix() * s.r.as_matrix() - s.r.as_matrix() * s.l.as_matrix()).norm();
        println!("cut: {:.6e}", cuts[0]);
        println!("k: {} of {}", s.k, n);
        println!("residual |L+R-X|_F: {sum_err:.3e}");
        println!("residual |LR-RL|_F: {comm:.3e}");
        let report = json!({
            "cut": cuts[0],
            "k": s.k,
            "L": MatrixJson::from_hermitian(&s.l),
            "R": MatrixJson::from_hermitian(&s.r),
        });
        return write_artifact(out, &format!("{report:#}\n"));
    }

    let eig = eigendecompose(&x)?;
    let partition = partition_from_cuts(&eig.values, &cuts)?;
    let blocks = riesz::multi_split(&x, &partition, nodes)?;
    println!("cuts: {cuts:?}");
    println!("blocks: {} with sizes {:?}", blocks.len(), partition.sizes);
    let report = json!({
        "cuts": cuts,
        "sizes": partition.sizes,
        "blocks": blocks
            .iter()
            .map(|b| MatrixJson::from_hermitian(&b.block))
            .collect::<Vec<_>>(),
    });
    write_artifact(out, &format!("{report:#}\n"))
}

/// Build a cluster partition from explicit cut values, validating that each
/// cut separates the ascending spectrum.
fn partition_from_cuts(
    values: &[f64],
    cuts: &[f64],
) -> Result<riesz::ClusterPartition, CliError> {
    let mut sizes = Vec::with_capacity(cuts.len() + 1);
    let mut gap_widths = Vec::with_capacity(cuts.len());
    let mut start = 0usize;
    for &cut in cuts {
        let below = values.iter().filter(|&&v| v < cut).count();
        if below == start || below == values.len() {
            return Err(CliError::Core(eigres_core::Error::EigenvalueOnCut {
                cut,
                eigenvalue: f64::NAN,
            }));
        }
        let lower = values[below - 1];
        let upper = values[below];
        gap_widths.push(upper - lower);
        sizes.push(below - start);
        start = below;
    }
    sizes.push(values.len() - start);
    Ok(riesz::ClusterPartition {
        cuts: cuts.to_vec(),
        sizes,
        gap_widths,
    })
}

pub fn schedule(n: usize, kind: ResolutionKind, out: Option<&str>) -> CliResult {
    let s = isotropy::schedule(n, kind)?;
    let levels_json = serde_json::to_string(&s.levels)
        .map_err(|e| CliError::Io(format!("serialization: {e}")))?;
    println!(
        "{} resolution of S({n}): {} centers in {} levels",
        s.resolution.as_str(),
        s.center_count(),
        s.levels.len()
    );
    println!("{levels_json}");
    write_artifact(out, &format!("{levels_json}\n"))
}

pub fn lift(
    input: &str,
    bracket: Option<(f64, f64)>,
    tol: f64,
    out: Option<&str>,
) -> CliResult {
    let x = read_matrix_json(input, tol)?;
    if let Some(bracket) = bracket {
        let data = blowup2::resolve_local(&x, bracket)?;
        println!("bracket: ({:.6e}, {:.6e})", bracket.0, bracket.1);
        println!("mu: {:.12e}", data.mu);
        println!("r: {:.12e}", data.r);
        match data.theta {
            Some(theta) => println!("theta: [{:.12e}, {:.12e}, {:.12e}]", theta[0], theta[1], theta[2]),
            None => println!("theta: absent (exactly degenerate; approach along a path)"),
        }
        println!(
            "lifted: [{:.12e}, {:.12e}]",
            data.lifted_values.0, data.lifted_values.1
        );
        let report = json!({
            "bracket": [bracket.0, bracket.1],
            "mu": data.mu,
            "r": data.r,
            "theta": data.theta,
            "lifted": [data.lifted_values.0, data.lifted_values.1],
        });
        return write_artifact(out, &format!("{report:#}\n"));
    }

    if x.n() != 2 {
        return Err(CliError::Parse(
            "lift without --bracket needs a 2x2 matrix".into(),
        ));
    }
    let ball = blowup2::pauli_coords(&x)?;
    println!(
        "pauli: a = {:.12e}, c = {:.12e}, d = {:.12e}, tau = {:.12e}",
        ball.a, ball.c, ball.d, ball.tau
    );
    let radial = blowup2::radial_lift(&ball);
    let mut radial_json = serde_json::Value::Null;
    match &radial {
        Ok(BlowupChartPoint::Radial { r, theta, .. }) => {
            println!("radial: r = {r:.12e}, theta = [{:.12e}, {:.12e}, {:.12e}]", theta[0], theta[1], theta[2]);
            let (lo, hi) = radial.as_ref().unwrap().lifted_values();
            println!("lifted: [{lo:.12e}, {hi:.12e}]");
            radial_json = json!({ "r": r, "theta": theta, "lifted": [lo, hi] });
        }
        Ok(_) => unreachable!("radial_lift returns radial points"),
        Err(e) => println!("radial: {e}"),
    }
    let mut patches = Vec::new();
    for patch in [blowup2::ProjPatch::P1, blowup2::ProjPatch::P2, blowup2::ProjPatch::P3] {
        match blowup2::projective_chart(patch, &ball) {
            Ok(BlowupChartPoint::Projective { x, y, z, .. }) => {
                println!("proj{}: (x, y, z) = ({x:.12e}, {y:.12e}, {z:.12e})", patch.number());
                patches.push(json!({ "patch": patch.number(), "x": x, "y": y, "z": z }));
            }
            Ok(_) => unreachable!("projective_chart returns projective points"),
            Err(_) => println!("proj{}: undefined (dividing coordinate is zero)", patch.number()),
        }
    }
    println!("best patch: {}", best_patch(&ball).number());
    let report = json!({
        "pauli": { "a": ball.a, "c": ball.c, "d": ball.d, "tau": ball.tau },
        "radial": radial_json,
        "projective": patches,
        "best_patch": best_patch(&ball).number(),
    });
    write_artifact(out, &format!("{report:#}\n"))
}

pub enum TrackMode {
    Cluster(f64),
    Lines,
}

pub fn track(
    input: &str,
    mode: TrackMode,
    nodes: usize,
    tol: f64,
    out: Option<&str>,
) -> CliResult {
    let path = read_path_json(input, tol)?;
    let report = match mode {
        TrackMode::Cluster(cut) => path_track::track_cluster(&path, cut, nodes)?,
        TrackMode::Lines => path_track::track_eigenlines(&path)?,
    };
    print_report(&report, path.n());
    write_artifact(out, &csv::render(&report.trajectory, path.n()))
}

fn read_path_json(input: &str, tol: f64) -> Result<MatrixPath, CliError> {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Parse(format!("cannot read {input}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{input}: {e}")))?;
    let samples_json = value
        .get("samples")
        .and_then(|v| v.as_array())
        .ok_or_else(|| CliError::Parse(format!("{input}: missing \"samples\" array")))?;
    let mut samples = Vec::with_capacity(samples_json.len());
    for (i, entry) in samples_json.iter().enumerate() {
        let t = entry
            .get("t")
            .and_then(|v| v.as_f64())
            .ok_or_else(|| CliError::Parse(format!("{input}: sample {i} missing \"t\"")))?;
        let matrix = entry
            .get("matrix")
            .ok_or_else(|| CliError::Parse(format!("{input}: sample {i} missing \"matrix\"")))?;
        let wire: MatrixJson = serde_json::from_value(matrix.clone())
            .map_err(|e| CliError::Parse(format!("{input}: sample {i}: {e}")))?;
        samples.push((t, wire.into_hermitian(tol)?));
    }
    Ok(MatrixPath::new(samples)?)
}

fn print_report(report: &MonodromyReport, n: usize) {
    let kind = match report.kind {
        path_track::TrackKind::ClusterSubspace => "cluster-subspace",
        path_track::TrackKind::Eigenline => "eigenline",
    };
    println!("kind: {kind}");
    println!("samples: {}", report.trajectory.len());
    println!("closureResidual: {:.12e}", report.closure_residual);
    let one_based: Vec<usize> = report.permutation.iter().map(|&i| i + 1).collect();
    println!("permutation: {one_based:?}");
    println!(
        "principalAngles(deg): [{}]",
        report
            .principal_angles
            .iter()
            .map(|a| format!("{:.6e}", a.to_degrees()))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("swapDetected: {}", report.swap_detected);
    let _ = n;
}

pub fn demo(
    name: PathName,
    steps: usize,
    laps: u32,
    seed: u64,
    nodes: usize,
    out: Option<&str>,
) -> CliResult {
    let params = PathParams { laps, seed };
    let path = path_track::builtin_path(name, steps, &params)?;
    println!("demo: {} ({} samples)", name.as_str(), path.samples.len());

    match name {
        PathName::Loop2x2 => {
            let report = path_track::track_eigenlines(&path)?;
            print_report(&report, path.n());
            write_artifact(out, &csv::render(&report.trajectory, path.n()))
        }
        PathName::Curve4x4 => {
            let report = path_track::track_cluster(&path, 0.0, nodes)?;
            print_report(&report, path.n());
            write_artifact(out, &csv::render(&report.trajectory, path.n()))
        }
        PathName::Ray3 => {
            let trajectory = ray3_lifted_trajectory(&path)?;
            println!("lifted trajectory through the conical point (bracket -0.8..3.2)");
            let mid = &trajectory[trajectory.len() / 2];
            println!(
                "midpoint: t = {:.4}, lifted = [{:.12e}, {:.12e}]",
                mid.t, mid.f[0], mid.f[1]
            );
            write_artifact(out, &csv::render(&trajectory, path.n()))
        }
    }
}

/// Per-sample lifted values of the ray3 bottom cluster: f = (mu - r, mu + r,
/// far eigenvalue); angles measured against the initial cluster frame.
fn ray3_lifted_trajectory(path: &MatrixPath) -> Result<Vec<TrajectorySample>, CliError> {
    let bracket = (-0.8, 3.2);
    let mut resolved = Vec::with_capacity(path.samples.len());
    for (t, x) in &path.samples {
        let data = blowup2::resolve_local(x, bracket)?;
        let far = eigendecompose(x)?.values[2];
        resolved.push((*t, data, far));
    }
    let first_frame = resolved[0].1.cluster_frame.clone();
    let mut trajectory = Vec::with_capacity(resolved.len());
    for (idx, (t, data, far)) in resolved.iter().enumerate() {
        let angle_max = if idx == 0 {
            0.0
        } else {
            linalg::principal_angles(&data.cluster_frame, &first_frame)
                .into_iter()
                .fold(0.0, f64::max)
        };
        let overlap_min = if idx == 0 {
            1.0
        } else {
            let prev = &resolved[idx - 1].1.cluster_frame;
            linalg::smallest_singular_value(&(prev.adjoint() * &data.cluster_frame))
        };
        trajectory.push(TrajectorySample {
            t: *t,
            f: vec![data.lifted_values.0, data.lifted_values.1, *far],
            angle_max,
            overlap_min,
        });
    }
    Ok(trajectory)
}
