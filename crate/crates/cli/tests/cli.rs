use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tangle3_cli::{LoadedState, StateFile};
use tangle3_core::family::{p0, rho_p};
use tangle3_core::sample::{haar_ket, random_rank2};
use tangle3_core::{ghz, w, DensityMatrix, PureState3, Rank2State};

fn tangle3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangle3"))
        .args(args)
        .env_remove("TANGLE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Files {
    dir: tempfile::TempDir,
}

impl Files {
    fn new() -> Self {
        Files {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn put(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn ket(&self, name: &str, k: &PureState3) -> String {
        path_str(&self.put(name, &StateFile::from_ket(k, Some(name.into())).to_json()))
    }

    fn density(&self, name: &str, rho: &DensityMatrix) -> String {
        path_str(&self.put(name, &StateFile::from_density(rho, None).to_json()))
    }
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn measure_reports() {
    let f = Files::new();
    let g = f.ket("ghz.json", &ghz());
    let out = tangle3(&["measure", &g]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("tau3 = 1.000000000000"));

    let wf = f.ket("w.json", &w());
    let out = tangle3(&["measure", &wf, "--qubit", "B"]);
    let text = stdout(&out);
    assert!(text.contains("tau3 = 0.000000000000"));
    assert!(text.contains("one_tangle_B = 0.888888888889"));

    let rho = f.density("rho.json", &rho_p(0.5).unwrap());
    let text = stdout(&tangle3(&["measure", &rho]));
    assert!(text.contains("family_p = 0.500000000000"));
    assert!(text.contains("tau3_vanishes = true"));
}

#[test]
fn exit_code_matrix() {
    let f = Files::new();
    let g = f.ket("ghz.json", &ghz());
    let wf = f.ket("w.json", &w());
    let rho_lo = f.density("lo.json", &rho_p(0.4).unwrap());
    let rho_hi = f.density("hi.json", &rho_p(0.9).unwrap());
    let mixed = f.density("mm.json", &DensityMatrix::maximally_mixed(8).unwrap());
    let bad = path_str(&f.put("bad.json", "{"));
    let both = path_str(&f.put("both.json", r#"{"amplitudes": [], "density": []}"#));
    let short = path_str(&f.put("short.json", r#"{"amplitudes": [[1, 0], [0, 0]]}"#));
    let zero = path_str(&f.put("zero.json", &format!(r#"{{"amplitudes": {}}}"#, "[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]")));
    let nonherm = {
        let mut sf = StateFile::from_density(&rho_p(0.5).unwrap(), None);
        sf.density.as_mut().unwrap()[0][1] = [0.3, 0.0];
        path_str(&f.put("nonherm.json", &sf.to_json()))
    };
    let missing = path_str(&f.dir.path().join("missing.json"));

    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["measure", &g], 0),
        (vec!["measure", &mixed], 0),
        (vec!["measure", &bad], 2),
        (vec!["measure", &both], 2),
        (vec!["measure", &short], 2),
        (vec!["measure", &zero], 2),
        (vec!["measure", &nonherm], 2),
        (vec!["measure", &missing], 2),
        (vec!["zerotest", &g, &wf, "--p", "0.5"], 0),
        (vec!["zerotest", &g, &wf, "--p", "0.7"], 1),
        (vec!["zerotest", &g, &g, "--p", "0.5"], 2),
        (vec!["zerotest", &g, &wf], 2),
        (vec!["zerotest", &g, &wf, "--p", "1.5"], 2),
        (vec!["zerotest", &rho_lo], 0),
        (vec!["zerotest", &rho_hi], 1),
        (vec!["zerotest", &mixed], 2),
        (vec!["sweep", "--what", "roof", "--grid", "3"], 0),
        (vec!["sweep", "--what", "roof", "--grid", "1"], 2),
        (vec!["sweep", "--what", "nonsense"], 2),
        (vec!["roofmin", "--family", "0.5", "--restarts", "4"], 0),
        (vec!["roofmin", "--family", "0.5", "--restarts", "0"], 2),
        (vec!["roofmin", "--family", "0.5", "--m", "5"], 2),
        (vec!["roofmin", "--family", "1.2"], 2),
        (vec!["roofmin", "--density", &mixed], 2),
        (vec!["roofmin"], 2),
        (vec!["bogus"], 2),
    ];
    for (args, want) in cases {
        let out = tangle3(&args);
        assert_eq!(out.status.code(), Some(want), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        if want == 2 {
            assert!(out.stdout.is_empty(), "{args:?} wrote to stdout on error");
            assert!(!out.stderr.is_empty(), "{args:?} gave no diagnostic");
        }
    }
}

#[test]
fn diagnostics_name_the_invariant() {
    let f = Files::new();
    let g = f.ket("ghz.json", &ghz());
    let err = String::from_utf8(tangle3(&["zerotest", &g, &g, "--p", "0.5"]).stderr).unwrap();
    assert!(err.contains("orthonormal"), "{err}");
    let mut sf = StateFile::from_density(&rho_p(0.5).unwrap(), None);
    sf.density.as_mut().unwrap()[0][0] = [2.0, 0.0];
    let p = path_str(&f.put("trace.json", &sf.to_json()));
    let err = String::from_utf8(tangle3(&["measure", &p]).stderr).unwrap();
    assert!(err.contains("trace"), "{err}");
}

#[test]
fn zerotest_prints_witness() {
    let f = Files::new();
    let (g, wf) = (f.ket("g.json", &ghz()), f.ket("w.json", &w()));
    let text = stdout(&tangle3(&["zerotest", &g, &wf, "--p", "0.5"]));
    assert!(text.contains("tau3_vanishes = true"));
    assert_eq!(text.matches("witness_weight").count(), 4);
    assert!(text.contains("root = infinity (multiplicity 1)"));
    let text = stdout(&tangle3(&["zerotest", &g, &wf, "--p", "0.7"]));
    assert!(!text.contains("witness_weight"));
}

fn csv(args: &[&str]) -> Vec<Vec<String>> {
    let out = tangle3(args);
    assert_eq!(out.status.code(), Some(0));
    stdout(&out).lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn sweep_tables() {
    let t = csv(&["sweep", "--what", "tangle-z", "--grid", "11"]);
    assert_eq!(t[0], ["p", "phi", "tau3"]);
    assert_eq!(t.len(), 1 + 5 * 11);
    assert!(t.iter().all(|r| r.len() == 3));
    let last = t.last().unwrap();
    assert_eq!((num(&last[0]), num(&last[1])), (1.0, 0.0));
    assert!((num(&last[2]) - 1.0).abs() < 1e-11);

    let t = csv(&["sweep", "--what", "tangle_z", "--grid", "2", "--phi-values", "0.5,-0.25"]);
    assert_eq!(t.len(), 5);

    // p0 lands on the grid only approximately; check the closest row.
    let t = csv(&["sweep", "--what", "roof", "--grid", "1001"]);
    assert_eq!(t[0], ["p", "roof", "g1_clamped", "trivial_bound"]);
    let near = t[1..].iter().min_by(|a, b| (num(&a[0]) - p0()).abs().total_cmp(&(num(&b[0]) - p0()).abs())).unwrap();
    assert!(num(&near[1]) < 2e-3);
    assert!(t[1..].iter().all(|r| num(&r[1]) <= num(&r[3]) + 1e-12));

    let t = csv(&["sweep", "--what", "ckw", "--grid", "5"]);
    assert_eq!(t[0], ["p", "one_tangle_min", "concurrence_sum", "tau3_roof"]);
    assert!((num(&t[1][1]) - 8.0 / 9.0).abs() < 1e-11);
    assert!((num(&t[1][2]) - 8.0 / 9.0).abs() < 1e-11);
    assert_eq!(num(&t[1][3]), 0.0);

    let a = tangle3(&["sweep", "--what", "ckw", "--grid", "51"]).stdout;
    let b = tangle3(&["sweep", "--what", "ckw", "--grid", "51"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn sweep_with_numeric_column() {
    let t = csv(&["sweep", "--what", "ckw", "--grid", "3", "--numeric", "--restarts", "8"]);
    assert_eq!(t[0].len(), 5);
    for r in &t[1..] {
        assert!((num(&r[4]) - num(&r[1])).abs() < 1e-5);
    }
}

#[test]
fn roofmin_examples_and_determinism() {
    let line = |text: &str, key: &str| -> f64 {
        let prefix = format!("{key} = ");
        num(text.lines().find_map(|l| l.strip_prefix(prefix.as_str())).unwrap())
    };
    let a = tangle3(&["roofmin", "--family", "0.9", "--seed", "7"]);
    let b = tangle3(&["roofmin", "--family", "0.9", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!((line(&text, "value") - 0.73020).abs() < 1e-5);
    assert_eq!(line(&text, "restarts_below_reference"), 0.0);

    let text = stdout(&tangle3(&["roofmin", "--family", "0.5"]));
    assert!(line(&text, "value") <= 1e-6);

    let env = Command::new(env!("CARGO_BIN_EXE_tangle3"))
        .args(["roofmin", "--family", "0.9"])
        .env("TANGLE_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);

    let text = stdout(&tangle3(&["roofmin", "--family", "0.3", "--objective", "one-tangle", "--restarts", "16"]));
    assert!((line(&text, "value") - (5.0 * 0.09 - 1.2 + 8.0) / 9.0).abs() < 1e-5);
}

#[test]
fn roofmin_from_files() {
    let f = Files::new();
    let (g, wf) = (f.ket("g.json", &ghz()), f.ket("w.json", &w()));
    let out = tangle3(&["roofmin", "--kets", &g, &wf, "--p", "0.68", "--restarts", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let rho = f.density("rho.json", &rho_p(0.68).unwrap());
    let out2 = tangle3(&["roofmin", "--density", &rho, "--restarts", "16"]);
    assert_eq!(out2.status.code(), Some(0));
    let v = |o: &Output| stdout(o).lines().find(|l| l.starts_with("value")).unwrap().to_string();
    assert_eq!(v(&out)[..16], v(&out2)[..16]);
}

#[test]
fn state_file_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let psi: PureState3 = haar_ket(&mut rng);
        let sf = StateFile::from_ket(&psi, Some("x".into()));
        let back = StateFile::parse(&sf.to_json()).unwrap();
        assert_eq!(back, sf);
        match back.to_state().unwrap() {
            LoadedState::Pure(k) => {
                let err = k.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(err <= 1e-12);
            }
            LoadedState::Mixed(_) => panic!("ket parsed as density"),
        }
        let st: Rank2State = random_rank2(&mut rng);
        let rho = st.density();
        let back = StateFile::parse(&StateFile::from_density(&rho, None).to_json()).unwrap().to_state().unwrap();
        assert!(back.density().max_abs_diff(&rho) <= 1e-12);
    }
}
