//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line and
//! fails on any violated threshold. Run with `--nocapture` to see the lines.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cosmic_code::algebra::{
    boson_ladder, effective_rest_mass, leap_fission, qvsl_transform, superluminal_energy, Kind,
    ParticleState, QvslDirection,
};
use cosmic_code::cascade::{
    default_initial, fractionalize_step, fractionalize_to, qvsl_entry, run_pipeline,
    simultaneous_fission, Count, EnsembleEntry, PipelineOptions, PipelineReport,
};
use cosmic_code::constants::{load_constants, AlphaScaled, PhysicalConstants};
use cosmic_code::hybrid::{
    collapse, environment_rng, gap_check, wavefunction_from_weights, GapStatus, Selector,
    SpaceValue, Violation,
};
use cosmic_code::report::{emit_report, Format};
use cosmic_code::scenario::{parse_scenario, run_scenario};

const REL_TOL: f64 = 1e-12;

fn verdict(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "[{}] criterion {id}: {name} :: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

fn canonical_report() -> (PipelineReport, Duration) {
    let c = PhysicalConstants::default();
    let start = Instant::now();
    let report = run_pipeline(&c, &default_initial(&c), &PipelineOptions::default()).unwrap();
    (report, start.elapsed())
}

fn milestone(report: &PipelineReport, state: &str) -> f64 {
    report
        .milestones
        .iter()
        .find(|m| m.state == state)
        .unwrap_or_else(|| panic!("no {state} milestone"))
        .energy_gev
}

#[test]
fn criterion_1_energy_milestone_4d10d() {
    let (report, took) = canonical_report();
    let e = milestone(&report, "4D10d");
    let dev = rel(e, 6e14);
    verdict(
        1,
        "4D10d milestone within 10% of 6e14 GeV in < 1 s",
        dev <= 0.10 && took < Duration::from_secs(1),
        format!("E = {e:.4e} GeV, deviation {:.2}%, {took:?}", dev * 100.0),
    );
}

#[test]
fn criterion_2_energy_milestone_4d9d() {
    let (report, took) = canonical_report();
    let e = milestone(&report, "4D9d");
    let dev = rel(e, 3e10);
    verdict(
        2,
        "4D9d milestone within 20% of 3e10 GeV in < 1 s",
        dev <= 0.20 && took < Duration::from_secs(1),
        format!("E = {e:.4e} GeV, deviation {:.2}%, {took:?}", dev * 100.0),
    );
}

#[test]
fn criterion_3_sector_ratio() {
    let c = load_constants(r#"{"dark_energy_fraction": 0.70}"#).unwrap();
    let report = run_pipeline(&c, &default_initial(&c), &PipelineOptions::default()).unwrap();
    let f = report.sector_fractions;
    let ok = report.dark_to_baryonic == 5.0
        && (f.dark - 0.25).abs() <= REL_TOL
        && (f.baryonic - 0.05).abs() <= REL_TOL
        && (f.dark_energy - 0.70).abs() <= REL_TOL
        && (f.dark + f.baryonic + f.dark_energy - 1.0).abs() <= REL_TOL;
    verdict(
        3,
        "dark:baryonic = 5 exactly, fractions (0.25, 0.05, 0.70)",
        ok,
        format!(
            "ratio {}, fractions ({}, {}, {})",
            report.dark_to_baryonic, f.dark, f.baryonic, f.dark_energy
        ),
    );
}

fn random_entry(rng: &mut ChaCha8Rng) -> EnsembleEntry {
    let dim = rng.gen_range(4..=11);
    let d = rng.gen_range(5..=11);
    let kind = if rng.gen_bool(0.5) {
        Kind::Boson
    } else {
        Kind::Fermion
    };
    let mass = 10f64.powf(rng.gen_range(-3.0..3.0));
    // up to 1e30 particles, exercising the log-space path
    let count = 10f64.powf(rng.gen_range(-2.0..30.0));
    EnsembleEntry::new(
        ParticleState::simple(dim, d, kind, mass).unwrap(),
        Count::new(count).unwrap(),
    )
}

#[test]
fn criterion_4_conservation_suite() {
    let c = PhysicalConstants::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut operations = 0u64;
    let mut check = |before: f64, after: f64| {
        worst = worst.max(rel(after, before));
        operations += 1;
    };
    for _ in 0..1000 {
        let entries: Vec<EnsembleEntry> = (0..rng.gen_range(1..=5))
            .map(|_| random_entry(&mut rng))
            .collect();
        for e in &entries {
            let before = e.energy_gev(&c);
            check(before, fractionalize_step(e).unwrap().energy_gev(&c));
            let target = rng.gen_range(4..=e.state.mass_dim() as i32);
            check(before, fractionalize_to(e, target).unwrap().energy_gev(&c));
            let n = rng.gen_range(1..=7u8);
            for dir in [QvslDirection::RaiseD, QvslDirection::LowerD] {
                if let Ok(moved) = qvsl_entry(e, n, dir) {
                    check(before, moved.energy_gev(&c));
                }
            }
            let species: Vec<u8> = (4..=e.state.mass_dim()).rev().collect();
            let r = rng.gen_range(0.0..0.99);
            let ens = simultaneous_fission(&c, e, &species, r).unwrap();
            check(before, ens.total_energy_gev(&c));
        }

        // whole pipeline from a random QVSL-reachable string state
        let dim = rng.gen_range(5..=11);
        let d = rng.gen_range(4..=(15 - dim));
        if d + dim - 4 >= 9 {
            let state =
                ParticleState::simple(dim, d, Kind::Boson, rng.gen_range(0.1..10.0)).unwrap();
            let initial = EnsembleEntry::new(state, Count::new(rng.gen_range(1.0..1e20)).unwrap());
            let options = PipelineOptions {
                radiation_fraction: rng.gen_range(0.0..0.9),
                ..Default::default()
            };
            let report = run_pipeline(&c, &initial, &options).unwrap();
            check(report.ledger.initial_gev, report.ledger.final_gev);
        }
    }
    let took = start.elapsed();
    verdict(
        4,
        "mass-energy conserved within 1e-12 over 1000 random ensembles in < 10 s",
        worst <= REL_TOL && took < Duration::from_secs(10),
        format!("{operations} operations, worst relative error {worst:e}, {took:?}"),
    );
}

#[test]
fn criterion_5_algebra_suite() {
    let c = PhysicalConstants::default();
    let mut failures = Vec::new();

    for m0 in [1e-3, 0.1, 1.0, 42.0, 1e3] {
        for dim in 4..=11 {
            let e = superluminal_energy(&c, m0, dim).unwrap();
            let m = effective_rest_mass(&c, m0, dim).unwrap();
            if rel(e, m * c.c() * c.c()) > REL_TOL {
                failures.push(format!("3a/3b M0={m0} D={dim}"));
            }
        }
    }

    for dim in 4..=11 {
        for d in 4..=11 {
            for n in 1..=7u8 {
                let s = ParticleState::simple(dim, d, Kind::Fermion, 3.7).unwrap();
                if let Ok(t) = qvsl_transform(&s, n, QvslDirection::RaiseD) {
                    if qvsl_transform(&t, n, QvslDirection::LowerD).unwrap() != s {
                        failures.push(format!("QVSL round trip {dim}D{d}d n={n}"));
                    }
                }
            }
        }
    }

    let ladder = boson_ladder(&c);
    let a = c.alpha();
    let bosons: Vec<_> = ladder.iter().filter(|e| e.kind == Kind::Boson).collect();
    for w in bosons.windows(2) {
        if rel(w[0].mass_gev / w[1].mass_gev, a * a) > REL_TOL {
            failures.push(format!("B{}/B{} ratio", w[0].mass_dim, w[1].mass_dim));
        }
    }
    for pair in ladder.chunks(2) {
        if rel(pair[0].mass_gev / pair[1].mass_gev, a) > REL_TOL {
            failures.push(format!("F{}/B{} ratio", pair[0].mass_dim, pair[1].mass_dim));
        }
    }

    let mut pairs = 0;
    for d in 4..=11i32 {
        for n in 0..=(d - 4) as u8 {
            let s = ParticleState::new(4, d, Kind::Boson, AlphaScaled::new(1.0), 0).unwrap();
            let (core, orbitals) = leap_fission(&s, n).unwrap();
            pairs += 1;
            if orbitals.count() as i32 != 11 - d + n as i32
                || core.mass_dim() as i32 + orbitals.count() as i32 != 11
            {
                failures.push(format!("orbital count d={d} n={n}"));
            }
        }
    }
    if pairs != 36 {
        failures.push(format!("{pairs} (d, n) pairs instead of 36"));
    }

    verdict(
        5,
        "energy forms, QVSL round trip, ladder ratios, 36 orbital-count pairs",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{pairs} fission pairs, {} ladder entries", ladder.len())
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_6_orbital_pattern() {
    let s = ParticleState::simple(4, 9, Kind::Boson, 1.0).unwrap();
    let (core, orbitals) = leap_fission(&s, 5).unwrap();
    let pattern = orbitals.pattern();
    verdict(
        6,
        "4D9d fission with n = 5 gives 7 orbitals B5F5B6F6B7F7B8F8B9F9B10F10B11",
        orbitals.count() == 7
            && core.label() == "4D4d"
            && pattern == "B5F5B6F6B7F7B8F8B9F9B10F10B11",
        format!(
            "core {}, {} orbitals, {pattern}",
            core.label(),
            orbitals.count()
        ),
    );
}

#[test]
fn criterion_7_collapse_statistics() {
    let wf = wavefunction_from_weights(&[0.8, 0.2]).unwrap();
    let mut rng = environment_rng(42);
    let trials = 100_000;
    let start = Instant::now();
    let mut hits = 0u64;
    let mut separated = 0u64;
    for _ in 0..trials {
        let out = collapse(&wf, Selector::Random(&mut rng)).unwrap();
        if out.chosen_index == 0 {
            hits += 1;
        }
        let ok = out.post_cells.iter().enumerate().all(|(i, v)| {
            *v == if i == out.chosen_index {
                SpaceValue::Attachment
            } else {
                SpaceValue::Detachment
            }
        });
        if ok && out.post_density.iter().sum::<f64>() == 1.0 {
            separated += 1;
        }
    }
    let took = start.elapsed();
    let freq = hits as f64 / trials as f64;
    let dev = (freq - 16.0 / 17.0).abs();
    verdict(
        7,
        "index-0 frequency within 0.01 of 16/17, 100% separated post-states, < 5 s",
        dev <= 0.01 && separated == trials && took < Duration::from_secs(5),
        format!(
            "frequency {freq:.5} (deviation {dev:.5}), {separated}/{trials} separated, {took:?}"
        ),
    );
}

/// Classification computed in log space, independent of `gap_check`'s
/// direct product.
fn gap_oracle(bound: f64, dx: f64, dp: f64) -> Option<GapStatus> {
    if dx == 0.0 {
        return Some(GapStatus::Violated(Violation::CompleteAttachment));
    }
    if dp == 0.0 {
        return Some(GapStatus::Violated(Violation::CompleteDetachment));
    }
    let delta = dx.ln() + dp.ln() - bound.ln();
    if delta.abs() <= 0.5e-12 {
        Some(GapStatus::Boundary)
    } else if delta.abs() < 2e-12 {
        None // too close to the tolerance edge to call independently
    } else if delta > 0.0 {
        Some(GapStatus::Satisfied)
    } else {
        Some(GapStatus::Violated(Violation::BelowBound))
    }
}

#[test]
fn criterion_8_gap_principle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for i in 0..10_000 {
        // vary h as well so the bound is not a single number
        let h = 10f64.powf(rng.gen_range(-3.0..3.0));
        let c = load_constants(&format!(r#"{{"h": {h}}}"#)).unwrap();
        let bound = c.gap_bound();
        let dx = 10f64.powf(rng.gen_range(-6.0..6.0));
        let (dx, dp) = match i % 5 {
            0 => (0.0, rng.gen_range(0.0..10.0)),
            1 => (dx, 0.0),
            2 => (dx, bound / dx),
            _ => (dx, 10f64.powf(rng.gen_range(-6.0..6.0))),
        };
        let got = gap_check(&c, dx, dp).unwrap();
        if let Some(expected) = gap_oracle(bound, dx, dp) {
            checked += 1;
            if got != expected {
                mismatches.push(format!("dx={dx:e} dp={dp:e}: {got:?} vs {expected:?}"));
            }
        }
    }
    let reasons = gap_check(&PhysicalConstants::default(), 0.0, 1.0).unwrap()
        == GapStatus::Violated(Violation::CompleteAttachment)
        && gap_check(&PhysicalConstants::default(), 1.0, 0.0).unwrap()
            == GapStatus::Violated(Violation::CompleteDetachment);
    verdict(
        8,
        "10^4 (dx, dp) pairs classified consistently; zero inputs give named reasons",
        mismatches.is_empty() && reasons && checked >= 9_900,
        format!(
            "{checked} pairs checked against oracle, {} mismatches {}",
            mismatches.len(),
            mismatches.first().cloned().unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_9_determinism() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut docs: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    docs.push(
        br#"{"wavefunction": {"cells": [0.1, 0.4, 0.7], "trials": 5000, "seed": 7}}"#.to_vec(),
    );
    let mut identical = 0;
    for doc in &docs {
        let run = |format| {
            emit_report(
                &run_scenario(&parse_scenario(doc).unwrap()).unwrap(),
                format,
            )
        };
        for format in [Format::Json, Format::Csv] {
            if run(format) == run(format) {
                identical += 1;
            }
        }
    }
    verdict(
        9,
        "same scenario and seed produce byte-identical reports",
        identical == docs.len() * 2,
        format!("{identical}/{} report pairs identical", docs.len() * 2),
    );
}
