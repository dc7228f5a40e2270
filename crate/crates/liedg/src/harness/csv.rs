//! Deterministic CSV emission for the harness outputs. Every file starts
//! with the magic line `# liedg v1`, then a header naming each column,
//! then one row per record with every real printed to 17 significant
//! digits, so rerunning an identical spec reproduces the file byte for
//! byte.

use std::fmt::Write as _;

use super::{CompareTable, ConvergenceStudy, ProblemId, Trajectory};

/// First line of every file this module writes.
pub const MAGIC: &str = "# liedg v1";

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn state_columns(problem: ProblemId) -> &'static str {
    match problem {
        ProblemId::SphereRb => "p1,p2,p3",
        ProblemId::QuatRb => "q0,q1,q2,q3",
        ProblemId::PseudoRigid => {
            "F11,F12,F13,F21,F22,F23,F31,F32,F33,\
             P11,P12,P13,P21,P22,P23,P31,P32,P33"
        }
    }
}

fn invariant_column(problem: ProblemId) -> &'static str {
    match problem {
        ProblemId::SphereRb => "p_norm",
        ProblemId::QuatRb => "q_norm",
        ProblemId::PseudoRigid => "det_F",
    }
}

/// `t,<state...>,H,H_err,<invariant>` with one row per recorded step.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "t,{},H,H_err,{}",
        state_columns(traj.problem),
        invariant_column(traj.problem)
    );
    for r in &traj.records {
        let _ = write!(out, "{}", fmt(r.t));
        for x in &r.state {
            let _ = write!(out, ",{}", fmt(*x));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            fmt(r.energy),
            fmt(r.energy_err),
            fmt(r.invariant)
        );
    }
    out
}

/// `h,global_error` rows followed by a `# slope = ...` trailer.
pub fn convergence_csv(study: &ConvergenceStudy) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "h,global_error");
    for row in &study.rows {
        let _ = writeln!(out, "{},{}", fmt(row.h), fmt(row.global_error));
    }
    let _ = writeln!(out, "# slope = {}", fmt(study.slope));
    out
}

/// `t` plus one `H_err_<method>` column per compared method, and a
/// `det_F_sym_minus_ep` column when the elastic det-drift diagnostic is
/// present.
pub fn compare_csv(table: &CompareTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = write!(out, "t");
    for m in &table.methods {
        let _ = write!(out, ",H_err_{}", m.name().replace('-', "_"));
    }
    if table.det_diff.is_some() {
        let _ = write!(out, ",det_F_sym_minus_ep");
    }
    let _ = writeln!(out);
    for (i, &t) in table.t.iter().enumerate() {
        let _ = write!(out, "{}", fmt(t));
        for col in &table.energy_err {
            let _ = write!(out, ",{}", fmt(col[i]));
        }
        if let Some(det) = &table.det_diff {
            let _ = write!(out, ",{}", fmt(det[i]));
        }
        let _ = writeln!(out);
    }
    out
}
