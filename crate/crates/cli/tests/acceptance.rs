//! Acceptance gate: runs each criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangle3_cli::StateFile;
use tangle3_core::ckw::{pair_concurrences, wootters_concurrence};
use tangle3_core::family::{
    concurrence_sum_family, g1, g2, ghz_w_rank2, min_one_tangle_family, optimal_decomposition, p0, p1, p_c, rho_p,
    roof_axis_value, tangle_z,
};
use tangle3_core::measures::{concurrence_pure, monogamy_residual, three_tangle, three_tangle_unnormalized};
use tangle3_core::poly::backward_error;
use tangle3_core::roof::{ensemble_from_isometry, minimize_roof, minimize_roof_by, IsometryParams, Objective, RoofConfig};
use tangle3_core::sample::{haar_ket, haar_unitary2, random_rank2};
use tangle3_core::zero::{has_vanishing_tangle, polynomial_roots, tangle_polynomial};
use tangle3_core::{ghz, w, Ket, PureState3, Qubit, Rank2, Rank2State, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn c1_exact_anchors() -> Outcome {
    let g = three_tangle(&ghz());
    let t = three_tangle(&w());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = Ket::<4>::from_real([s, 0.0, 0.0, s]).unwrap();
    let cb = concurrence_pure(&bell);
    let cw = wootters_concurrence(&bell.density()).unwrap();
    check((g - 1.0).abs() <= 1e-12, format!("tau3(GHZ) = {g}"))?;
    check(t.abs() <= 1e-12, format!("tau3(W) = {t}"))?;
    check((cb - 1.0).abs() <= 1e-12 && (cw - 1.0).abs() <= 1e-12, format!("C(Bell) = {cb}, {cw}"))?;
    Ok(format!("tau3(GHZ)={g:.3e} tau3(W)={t:.1e} C(Bell)={cb}"))
}

fn c2_constants() -> Outcome {
    let (a, b, c) = (p0(), p1(), p_c());
    let tz = tangle_z(a, 0.0);
    let cs = concurrence_sum_family(c);
    check(tz <= 1e-12, format!("tangle_z(p0, 0) = {tz:e}"))?;
    check(format!("{a:.6}") == "0.626851", format!("p0 = {a}"))?;
    check(format!("{b:.5}") == "0.70868", format!("p1 = {b}"))?;
    check(cs <= 1e-12, format!("concurrence_sum(pC) = {cs:e}"))?;
    Ok(format!("p0={a:.10} p1={b:.10} pC={c:.10}"))
}

fn c3_continuity() -> Outcome {
    let at0 = g1(p0()).unwrap();
    let gap = (g1(p1()).unwrap() - g2(p1())).abs();
    check(at0.abs() <= 1e-10, format!("g1(p0) = {at0:e}"))?;
    check(gap <= 1e-10, format!("|g1(p1) - g2(p1)| = {gap:e}"))?;
    Ok(format!("g1(p0)={at0:.1e} g1(p1)={:.10} gap={gap:.1e}", g1(p1()).unwrap()))
}

fn c4_decompositions() -> Outcome {
    let mut worst_mix = 0.0f64;
    let mut worst_avg = 0.0f64;
    for i in 0..100 {
        let p = i as f64 / 99.0;
        let e = optimal_decomposition(p).map_err(|e| e.to_string())?;
        worst_mix = worst_mix.max(e.mix().max_abs_diff(&rho_p(p).unwrap()));
        worst_avg = worst_avg.max((e.average(three_tangle) - roof_axis_value(p).unwrap()).abs());
    }
    check(worst_mix <= 1e-10, format!("mix error {worst_mix:e}"))?;
    check(worst_avg <= 1e-10, format!("average error {worst_avg:e}"))?;
    Ok(format!("max mix error {worst_mix:.1e}, max average error {worst_avg:.1e}"))
}

fn c5_optimizer() -> Outcome {
    let points = [0.3, 0.55, p0(), 0.66, 0.70, p1(), 0.8, 0.9, 1.0];
    let cfg = RoofConfig::default();
    check(cfg.restarts == 64 && cfg.m_values.contains(&4), "default config changed")?;
    let mut worst_gap = 0.0f64;
    let mut slowest = Duration::ZERO;
    let mut failures = Vec::new();
    for p in points {
        let start = Instant::now();
        let r = minimize_roof(&ghz_w_rank2(p).unwrap(), Objective::Tau3, &cfg).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let want = roof_axis_value(p).unwrap();
        let gap = (r.value - want).abs();
        worst_gap = worst_gap.max(gap);
        slowest = slowest.max(took);
        if gap > 1e-5 {
            failures.push(format!("p={p}: {} vs {want}", r.value));
        }
        if took > Duration::from_secs(2) {
            failures.push(format!("p={p}: {took:?} > 2 s"));
        }
        let below = r.beating(want, 1e-8).count();
        if below > 0 {
            failures.push(format!("p={p}: {below} restarts below the analytic roof"));
        }
    }
    check(failures.is_empty(), failures.join("; "))?;
    Ok(format!("max gap {worst_gap:.1e}, slowest point {slowest:.2?}"))
}

fn c6_zero_decision() -> Outcome {
    let a = p0();
    let mut mismatches = Vec::new();
    for i in 0..200 {
        let p = i as f64 / 199.0;
        let d = has_vanishing_tangle(&ghz_w_rank2(p).unwrap()).map_err(|e| e.to_string())?;
        if (p - a).abs() > 1e-9 && d.vanishes != (p <= a) {
            mismatches.push(p);
        }
    }
    check(mismatches.is_empty(), format!("disagreement at p = {mismatches:?}"))?;
    check(has_vanishing_tangle(&ghz_w_rank2(a).unwrap()).unwrap().vanishes, "p0 itself not vanishing")?;

    let poly = tangle_polynomial(&ghz(), &w());
    let symbolic = [0.25, 0.0, 0.0, 2.0 * 6f64.sqrt() / 9.0, 0.0];
    let coeff_err = poly
        .coeffs
        .iter()
        .zip(symbolic)
        .map(|(c, s)| (c - C64::new(s, 0.0)).norm())
        .fold(0.0, f64::max);
    check(coeff_err < 1e-14, format!("coefficients differ from the expansion by {coeff_err:e}"))?;
    check(poly.degree(1e-12) == Some(3), format!("degree {:?}", poly.degree(1e-12)))?;
    let zs = polynomial_roots(&poly).map_err(|e| e.to_string())?;
    check(zs.finite_roots.len() == 3, format!("{} finite roots", zs.finite_roots.len()))?;
    let cube = C64::new(-3.0 * 6f64.sqrt() / 16.0, 0.0);
    let mut worst_be = 0.0f64;
    for r in &zs.finite_roots {
        check((r.value.powi(3) - cube).norm() < 1e-12, format!("root {} is not a cube root", r.value))?;
        worst_be = worst_be.max(backward_error(&poly.coeffs, r.value));
    }
    check(worst_be <= 1e-10, format!("backward error {worst_be:e}"))?;
    Ok(format!("200/200 grid points agree, root backward error {worst_be:.1e}"))
}

fn c7_monogamy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let psi: PureState3 = haar_ket(&mut rng);
        for q in Qubit::ALL {
            worst = worst.max(monogamy_residual(&psi, q).abs());
        }
    }
    check(worst <= 1e-9, format!("worst residual {worst:e}"))?;
    Ok(format!("worst residual {worst:.1e} over 3000 cases"))
}

fn c8_ckw_sweep() -> Outcome {
    let mut worst_wootters = 0.0f64;
    for p in grid(201) {
        let one = min_one_tangle_family(p);
        let pair = concurrence_sum_family(p);
        let tau = roof_axis_value(p).unwrap();
        check(one >= pair && pair >= 0.0 && one >= tau, format!("ordering fails at p = {p}"))?;
        let [cab, cac] = pair_concurrences(&rho_p(p).unwrap(), Qubit::A).map_err(|e| e.to_string())?;
        worst_wootters = worst_wootters.max((cab * cab + cac * cac - pair).abs());
    }
    let (one0, pair0) = (min_one_tangle_family(0.0), concurrence_sum_family(0.0));
    check((one0 - 8.0 / 9.0).abs() <= 1e-12 && (pair0 - 8.0 / 9.0).abs() <= 1e-12, "p = 0 values")?;
    check(worst_wootters <= 1e-9, format!("Wootters vs closed form {worst_wootters:e}"))?;
    Ok(format!("ordering holds on 201 points, Wootters gap {worst_wootters:.1e}"))
}

fn c9_calibration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let st: Rank2<4> = random_rank2(&mut rng);
        let want = wootters_concurrence(&st.density()).map_err(|e| e.to_string())?;
        let r = minimize_roof_by(&st, concurrence_pure, &RoofConfig::default()).map_err(|e| e.to_string())?;
        worst = worst.max((r.value - want).abs());
    }
    check(worst <= 1e-6, format!("worst gap {worst:e}"))?;
    Ok(format!("worst gap {worst:.1e} over 20 states"))
}

fn run_cli(args: &[&str], env_seed: Option<&str>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tangle3"));
    cmd.args(args).env_remove("TANGLE_SEED");
    if let Some(s) = env_seed {
        cmd.env("TANGLE_SEED", s);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c10_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    use Qubit::*;
    let mut worst_perm = 0.0f64;
    let mut worst_lu = 0.0f64;
    let mut worst_hom = 0.0f64;
    let mut worst_mix = 0.0f64;
    for k in 0..200 {
        let psi: PureState3 = haar_ket(&mut rng);
        let t = three_tangle(&psi);
        for perm in [[A, C, B], [B, A, C], [B, C, A], [C, A, B], [C, B, A]] {
            worst_perm = worst_perm.max((three_tangle(&psi.permute(perm)) - t).abs());
        }
        let mut moved = psi;
        for q in Qubit::ALL {
            moved = moved.apply_local(q, &haar_unitary2(&mut rng));
        }
        worst_lu = worst_lu.max((three_tangle(&moved) - t).abs());
        let lambda = C64::new(0.3 + 0.01 * k as f64, -1.1);
        let scaled = psi.amplitudes().map(|a| a * lambda);
        let want = lambda.norm().powi(4) * three_tangle_unnormalized(psi.amplitudes());
        worst_hom = worst_hom.max((three_tangle_unnormalized(&scaled) - want).abs() / (1.0 + want));
        let st: Rank2State = random_rank2(&mut rng);
        let iso = IsometryParams::random(2 + k % 3, &mut rng);
        let e = ensemble_from_isometry(&st, &iso).map_err(|e| e.to_string())?;
        worst_mix = worst_mix.max(e.mix().max_abs_diff(&st.density()));
    }
    check(worst_perm <= 1e-10, format!("permutation {worst_perm:e}"))?;
    check(worst_lu <= 1e-10, format!("local unitary {worst_lu:e}"))?;
    check(worst_hom <= 1e-12, format!("homogeneity {worst_hom:e}"))?;
    check(worst_mix <= 1e-12, format!("isometry mixture {worst_mix:e}"))?;

    // State-file round trip.
    let mut worst_rt = 0.0f64;
    for _ in 0..50 {
        let psi: PureState3 = haar_ket(&mut rng);
        let back = StateFile::parse(&StateFile::from_ket(&psi, None).to_json()).unwrap().to_state().unwrap();
        worst_rt = worst_rt.max(back.density().max_abs_diff(&psi.density()));
        let rho = random_rank2::<8, _>(&mut rng).density();
        let back = StateFile::parse(&StateFile::from_density(&rho, None).to_json()).unwrap().to_state().unwrap();
        worst_rt = worst_rt.max(back.density().max_abs_diff(&rho));
    }
    check(worst_rt <= 1e-12, format!("state-file round trip {worst_rt:e}"))?;

    // Exit codes and determinism of the binary.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, body: String| {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        path.to_string_lossy().into_owned()
    };
    let g = write("ghz.json", StateFile::from_ket(&ghz(), Some("ghz".into())).to_json());
    let wf = write("w.json", StateFile::from_ket(&w(), Some("w".into())).to_json());
    let bad = write("bad.json", "{ not json".into());
    let cases: [(&[&str], i32); 6] = [
        (&["measure", &g], 0),
        (&["measure", &bad], 2),
        (&["zerotest", &g, &wf, "--p", "0.5"], 0),
        (&["zerotest", &g, &wf, "--p", "0.7"], 1),
        (&["zerotest", &g, &g, "--p", "0.5"], 2),
        (&["sweep", "--what", "roof", "--grid", "1"], 2),
    ];
    for (args, want) in cases {
        let (code, _) = run_cli(args, None);
        check(code == want, format!("{args:?} exited {code}, expected {want}"))?;
    }
    let (_, out) = run_cli(&["measure", &g], None);
    check(
        String::from_utf8_lossy(&out).contains("tau3 = 1.000000000000"),
        "measure ghz.json lacks tau3 = 1.000000000000",
    )?;
    let roof_args = ["roofmin", "--family", "0.9", "--seed", "7"];
    let (c1, o1) = run_cli(&roof_args, None);
    let (c2, o2) = run_cli(&roof_args, None);
    check(c1 == 0 && c2 == 0 && o1 == o2, "roofmin --seed 7 output differs between runs")?;
    let (_, o3) = run_cli(&["roofmin", "--family", "0.9"], Some("7"));
    check(o3 == o1, "TANGLE_SEED=7 differs from --seed 7")?;
    Ok(format!(
        "perm {worst_perm:.1e}, LU {worst_lu:.1e}, homog {worst_hom:.1e}, mixture {worst_mix:.1e}, round trip {worst_rt:.1e}, CLI ok"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact anchors", c1_exact_anchors),
        ("closed-form constants", c2_constants),
        ("roof continuity and tangency", c3_continuity),
        ("decomposition validity", c4_decompositions),
        ("optimizer reproduces the roof", c5_optimizer),
        ("zero-decision oracle equivalence", c6_zero_decision),
        ("monogamy identity", c7_monogamy),
        ("CKW sweep", c8_ckw_sweep),
        ("two-qubit calibration", c9_calibration),
        ("property suites and CLI", c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match res {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
