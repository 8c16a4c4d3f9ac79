//! Plain-text tables for terminal output.

use std::fmt::Write;

use mvss::assembly::{Assembled, RunMode, SweepReport};
use mvss::simplex::SimplexReport;

use crate::report::{ExcisionSummary, RunReport, SnfReport};

fn assembled(a: &Assembled) -> String {
    match a {
        Assembled::Group { group } => group.to_string(),
        Assembled::AmbiguousExtension { pieces } => {
            let listed: Vec<String> = pieces
                .iter()
                .map(|p| format!("p{}: {}", p.p, p.group))
                .collect();
            format!("ambiguous extension of {}", listed.join(" by "))
        }
    }
}

pub fn run(r: &RunReport) -> String {
    let t = &r.target;
    let mut s = String::new();
    let mode = match r.mode {
        Some(RunMode::Truncated) => format!(", truncated at cap {}", t.cap),
        Some(RunMode::Exact) => ", exact".to_string(),
        None => String::new(),
    };
    writeln!(
        s,
        "source: {} (period {}, cap {}{mode})",
        r.source, t.period, t.cap
    )
    .unwrap();
    for w in &r.warnings {
        writeln!(s, "warning: {w}").unwrap();
    }
    if r.e1.is_empty() {
        writeln!(s, "E1: all cells zero").unwrap();
    } else {
        writeln!(s, "E1 nonzero cells:").unwrap();
        for c in &r.e1 {
            writeln!(s, "  ({}, {})  {}", c.p, c.q, c.group).unwrap();
        }
    }
    writeln!(s, "stabilized at page {}", t.stabilized_at).unwrap();
    writeln!(s, "{:<4} {:<32} K_s", "s", "E∞ pieces").unwrap();
    for d in &t.degrees {
        let pieces: Vec<String> = d
            .pieces
            .iter()
            .filter(|p| !p.group.is_zero())
            .map(|p| format!("p{}: {}", p.p, p.group))
            .collect();
        let pieces = if pieces.is_empty() {
            "-".to_string()
        } else {
            pieces.join(", ")
        };
        writeln!(s, "{:<4} {:<32} {}", d.s, pieces, assembled(&d.assembled)).unwrap();
    }
    s
}

pub fn snf(r: &SnfReport) -> String {
    let mut s = String::new();
    writeln!(s, "A =\n{}", r.matrix).unwrap();
    writeln!(s, "D =\n{}", r.d).unwrap();
    writeln!(s, "U =\n{}", r.u).unwrap();
    writeln!(s, "V =\n{}", r.v).unwrap();
    writeln!(
        s,
        "rank {}, invariant factors {:?}",
        r.rank, r.invariant_factors
    )
    .unwrap();
    writeln!(s, "cokernel {}", r.cokernel).unwrap();
    s
}

pub fn excision(r: &ExcisionSummary) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "cover {} in ℤ^{} under {}: R = {}, S = {}, box {}",
        r.cover, r.dim, r.metric, r.radius, r.s, r.box_half
    )
    .unwrap();
    for (i, m) in r.members.iter().enumerate() {
        writeln!(s, "  X{i} = {m}").unwrap();
    }
    for rep in &r.subfamilies {
        let status = if rep.holds { "PASS" } else { "FAIL" };
        let mut line = format!(
            "  J = {:?}  {status}  ({} points)",
            rep.set, rep.points_checked
        );
        if let Some(w) = &rep.witness {
            write!(line, "  witness {w:?}").unwrap();
        }
        writeln!(s, "{line}").unwrap();
    }
    writeln!(s, "{}", if r.passed { "PASS" } else { "FAIL" }).unwrap();
    s
}

pub fn simplex(r: &SimplexReport) -> String {
    let mut s = String::new();
    writeln!(s, "n = {}, {} samples, seed {}", r.n, r.samples, r.seed).unwrap();
    for c in &r.checks {
        let err = c
            .max_error
            .map(|e| format!("  max error {e:.3e}"))
            .unwrap_or_default();
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(s, "  {status}  {}{err}  ({} failures)", c.name, c.failures).unwrap();
    }
    writeln!(s, "{}", if r.passed() { "PASS" } else { "FAIL" }).unwrap();
    s
}

pub fn sweep(r: &SweepReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "family {} (period {}), caps {:?}",
        r.family, r.period, r.caps
    )
    .unwrap();
    for e in &r.entries {
        let mode = match e.mode {
            RunMode::Truncated => "truncated",
            RunMode::Exact => "exact",
        };
        let ks: Vec<String> = e
            .target
            .degrees
            .iter()
            .map(|d| format!("K{} = {}", d.s, assembled(&d.assembled)))
            .collect();
        writeln!(s, "  cap {:<3} {:<9} {}", e.cap, mode, ks.join(", ")).unwrap();
    }
    for c in &r.cells {
        writeln!(
            s,
            "  E1({}, {}) stable from cap {}",
            c.p, c.q, c.stable_from
        )
        .unwrap();
    }
    for t in &r.targets {
        writeln!(s, "  K{} stable from cap {}", t.s, t.stable_from).unwrap();
    }
    writeln!(s, "monotone: {}", if r.monotone { "yes" } else { "no" }).unwrap();
    if let Some(limit) = &r.declared_limit {
        writeln!(s, "declared limit: {limit}").unwrap();
    }
    s
}
