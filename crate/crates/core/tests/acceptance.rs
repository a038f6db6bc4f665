//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::time::Instant;

use lxeb_core::bounds::{guarantee, Theorem};
use lxeb_core::ensembles::{required_depth_4design, EnsembleSpec, GateEnsemble};
use lxeb_core::experiments::{run_experiment, ExperimentConfig, ExperimentKind, MomentSettings};
use lxeb_core::moments::{
    collision_variance, haar_orthogonal_moment, orthogonal_moment_oracle, Group, IntegerPartition,
};
use lxeb_core::state::run_circuit;
use lxeb_core::SeedPlan;

type Outcome = Result<String, String>;

fn circuit_config(
    kind: ExperimentKind,
    gates: GateEnsemble,
    n: usize,
    depth: usize,
    trials: u64,
    seed: u64,
) -> ExperimentConfig {
    ExperimentConfig::new(kind, Some(EnsembleSpec::brickwork(gates, n, depth)), trials, seed)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_equality() -> Outcome {
    let mut checked = 0;
    for t in 1..=5 {
        for lambda in IntegerPartition::all_of(t) {
            for d in [2u64, 4, 8] {
                let a = orthogonal_moment_oracle(&lambda, d).map_err(|e| e.to_string())?;
                let b = haar_orthogonal_moment(&lambda, d).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("lambda={lambda} d={d}: matching count {a} vs closed form {b}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (lambda, d) pairs agree exactly"))
}

fn unitary_moments() -> Outcome {
    let mut c = ExperimentConfig::new(ExperimentKind::MomentValidation, None, 100_000, 2024);
    c.moments = Some(MomentSettings {
        group: Group::Unitary,
        dims: vec![2, 4, 8],
        orders: vec![1, 2, 3, 4],
        variance_of_variance: false,
    });
    let r = run_experiment(&c).map_err(|e| e.to_string())?;
    let rows: Vec<_> = r.moments.iter().filter(|m| !m.quantity.contains("p(1)")).collect();
    let worst = rows.iter().map(|m| m.z_score.abs()).fold(0.0, f64::max);
    let bad: Vec<_> = rows
        .iter()
        .filter(|m| m.flagged)
        .map(|m| format!("d={} {} z={:.2}", m.d, m.quantity, m.z_score))
        .collect();
    check(
        rows.len() == 12 && bad.is_empty(),
        format!("{} moments, max |z| = {worst:.2} {bad:?}", rows.len()),
    )
}

fn variance_of_variance_d2() -> Outcome {
    let mut c = ExperimentConfig::new(ExperimentKind::MomentValidation, None, 1_000_000, 77);
    c.moments = Some(MomentSettings {
        group: Group::Unitary,
        dims: vec![2],
        orders: vec![],
        variance_of_variance: true,
    });
    let r = run_experiment(&c).map_err(|e| e.to_string())?;
    let row = r
        .moments
        .iter()
        .find(|m| m.quantity == "Var_U[Var_x(p)]")
        .ok_or("missing variance row")?;
    check(
        row.exact == "1/2100" && !row.flagged,
        format!(
            "empirical {:.6e} vs {} = {:.6e}, z = {:.2}",
            row.empirical, row.exact, row.expected, row.z_score
        ),
    )
}

fn collision_unitary() -> Outcome {
    let c = circuit_config(ExperimentKind::Collision, GateEnsemble::HaarUnitary, 10, 30, 1000, 101);
    let r = run_experiment(&c).map_err(|e| e.to_string())?;
    let s = &r.aggregates["collision_prob"];
    let rel = s.relative_deviation(2.0 / 1025.0);
    let var_bound = 2.0 * collision_variance(1024, Group::Unitary).unwrap().to_f64();
    check(
        rel <= 0.01 && s.variance <= var_bound,
        format!(
            "mean {:.6e} (rel dev {rel:.4}), variance {:.3e} <= {var_bound:.3e}",
            s.mean, s.variance
        ),
    )
}

fn collision_orthogonal() -> Outcome {
    let c = circuit_config(
        ExperimentKind::OrthogonalCollision,
        GateEnsemble::HaarOrthogonal,
        10,
        50,
        1000,
        202,
    );
    let r = run_experiment(&c).map_err(|e| e.to_string())?;
    let s = &r.aggregates["collision_prob"];
    let rel = s.relative_deviation(3.0 / 1026.0);
    check(rel <= 0.02, format!("mean {:.6e} (rel dev {rel:.4})", s.mean))
}

fn lxeb_pass_rate() -> Outcome {
    let mut c = circuit_config(ExperimentKind::Lxeb, GateEnsemble::HaarUnitary, 12, 36, 200, 303);
    c.k = Some(500);
    c.b = 1.97;
    let r = run_experiment(&c).map_err(|e| e.to_string())?;
    let f = r.fractions["pass_fraction"];
    check(f >= 0.95, format!("pass fraction {f}"))
}

fn maxp_tail() -> Outcome {
    let c = circuit_config(ExperimentKind::Maxp, GateEnsemble::HaarUnitary, 12, 36, 1000, 404);
    let r = run_experiment(&c).map_err(|e| e.to_string())?;
    let f = r.fractions["exceed_fraction"];
    check(f <= 0.01, format!("exceed fraction {f}"))
}

fn clifford_uniformity() -> Outcome {
    let c = circuit_config(
        ExperimentKind::CliffordUniformity,
        GateEnsemble::Clifford,
        10,
        100,
        2000,
        505,
    );
    let r = run_experiment(&c).map_err(|e| e.to_string())?;
    let f = r.fractions["uniform_fraction"];
    check(
        (0.30..=0.50).contains(&f),
        format!("uniform fraction {f} (reference {:.4})", r.oracles["uniform_clifford_reference"].value),
    )
}

fn guarantee_transcription() -> Outcome {
    let g = guarantee(Theorem::Lindepth, 1_000_000, 20).map_err(|e| e.to_string())?;
    if (g.raw - 0.6695).abs() > 1e-4 {
        return Err(format!("lindepth(k=1e6, n=20) = {}", g.raw));
    }
    for n in 8..=20usize {
        let eps = (-5.0 * n as f64).exp2();
        let depth = required_depth_4design(n, eps).map_err(|e| e.to_string())?;
        if depth != 144 * n as u64 {
            return Err(format!("required_depth_4design({n}, 2^-{}) = {depth}", 5 * n));
        }
    }
    Ok(format!("lindepth = {:.6}; 4-design depth = 144n for n in 8..=20", g.raw))
}

fn determinism_and_performance() -> Outcome {
    let mut c = circuit_config(ExperimentKind::Lxeb, GateEnsemble::HaarUnitary, 10, 20, 64, 606);
    c.k = Some(200);
    let mut bytes = Vec::new();
    for workers in [1, 8] {
        c.workers = Some(workers);
        let r = run_experiment(&c).map_err(|e| e.to_string())?;
        let mut csv = Vec::new();
        r.write_trials(&mut csv).map_err(|e| e.to_string())?;
        bytes.push((r.to_json().map_err(|e| e.to_string())?, csv));
    }
    if bytes[0] != bytes[1] {
        return Err("reports differ between 1 and 8 workers".into());
    }

    let spec = EnsembleSpec::brickwork(GateEnsemble::HaarUnitary, 20, 60);
    let circuit = spec.build(&SeedPlan::new(1, 0)).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let state = run_circuit(&circuit).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let amps = state.amplitudes().len();
    let bytes_used = std::mem::size_of_val(state.amplitudes());
    let norm_ok = (state.norm_sqr() - 1.0).abs() < 1e-10;
    check(
        secs <= 10.0 && amps == 1 << 20 && bytes_used == (1 << 20) * 16 && norm_ok,
        format!("reports identical; n=20 depth 60 in {secs:.2} s, {bytes_used} bytes of amplitudes"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("orthogonal oracle equals closed form", oracle_equality),
        ("unitary moments within 5 SE", unitary_moments),
        ("variance of variance at d=2", variance_of_variance_d2),
        ("unitary collision concentration", collision_unitary),
        ("orthogonal collision mean", collision_orthogonal),
        ("lxeb pass rate", lxeb_pass_rate),
        ("max-probability tail", maxp_tail),
        ("clifford uniform fraction", clifford_uniformity),
        ("guarantee and depth formulas", guarantee_transcription),
        ("determinism and performance", determinism_and_performance),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
