use std::path::PathBuf;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mre_core::io::StateFile;
use mre_core::qstates::{DensityMatrix, StateVector};
use mre_core::report::{report_mixed, report_pure, ReportOptions};

fn mre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mre")).args(args).output().expect("run mre")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mre-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ghz_file_reports_one() {
    let path = scratch(
        "ghz.json",
        r#"{"n_qubits": 3, "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0, 0],
                                          [0, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]}"#,
    );
    let out = mre(&["compute", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("mre = 1.000000000\n"), "{text}");
    assert!(text.contains("convention = pairing\n"));
    assert!(text.contains("tol.support = 1e-10\n"));
}

#[test]
fn extended_bell_and_product_files() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = StateVector::new(
        [s, 0.0, 0.0, 0.0, 0.0, 0.0, s, 0.0].iter().map(|&x| num_complex::Complex64::new(x, 0.0)).collect(),
    )
    .unwrap();
    let path = scratch("ext.json", &StateFile::from_state(&bell).to_json());
    let text = stdout(&mre(&["compute", path.to_str().unwrap(), "--measure", "mre"]));
    assert!(text.contains("mre = 0.792481250\n"), "{text}");

    let path = scratch("prod.json", &StateFile::from_state(&StateVector::basis(3, 5)).to_json());
    let text = stdout(&mre(&["compute", path.to_str().unwrap()]));
    assert!(text.contains("mre = 0.000000000\n"), "{text}");
}

#[test]
fn file_and_programmatic_agree_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 3, 4] {
        let psi = StateVector::random(n, &mut rng);
        let path = scratch(&format!("rand{n}.json"), &StateFile::from_state(&psi).to_json());
        let out = mre(&["compute", path.to_str().unwrap(), "--format", "json"]);
        assert_eq!(out.status.code(), Some(0));
        let expected = report_pure(&psi, &ReportOptions::default()).unwrap().to_json() + "\n";
        assert_eq!(stdout(&out), expected);
    }
    let rho = DensityMatrix::mixture([
        (0.25, &StateVector::random(2, &mut rng).density()),
        (0.75, &StateVector::random(2, &mut rng).density()),
    ])
    .unwrap();
    let path = scratch("mixed.json", &StateFile::from_density(&rho).to_json());
    let args = ["compute", path.to_str().unwrap(), "--format", "json", "--measure", "mre", "--restarts", "4"];
    let out = mre(&args);
    assert_eq!(out.status.code(), Some(0));
    let opts = ReportOptions {
        measure: mre_core::report::Measure::Mre,
        optimizer: mre_core::mixed_opt::OptimizerConfig { restarts: 4, ..Default::default() },
        ..Default::default()
    };
    assert_eq!(stdout(&out), report_mixed(&rho, &opts).unwrap().to_json() + "\n");
}

#[test]
fn exit_codes() {
    let malformed = scratch("bad.json", r#"{"n_qubits": 2, "amplitudes": [[1, 0]]}"#);
    assert_eq!(mre(&["compute", malformed.to_str().unwrap()]).status.code(), Some(2));
    let garbage = scratch("garbage.json", "{");
    assert_eq!(mre(&["compute", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(mre(&["compute", "/nonexistent/state.json"]).status.code(), Some(2));
    let one = scratch("one.json", r#"{"n_qubits": 1, "amplitudes": [[1, 0], [0, 0]]}"#);
    assert_eq!(mre(&["compute", one.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(mre(&["sweep", "--from", "0", "--to", "1.5", "--steps", "5"]).status.code(), Some(3));
    assert_eq!(mre(&["sweep", "--from", "0", "--to", "1", "--steps", "1"]).status.code(), Some(3));
}

#[test]
fn sweep_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("mre-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for p in [&a, &b] {
        let out = mre(&[
            "sweep",
            "--family",
            "eq15",
            "--from",
            "0",
            "--to",
            "1.2",
            "--steps",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&a).unwrap();
    assert_eq!(a, std::fs::read(&b).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("x,mre,e_air\n"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn verify_passes() {
    let out = mre(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).ends_with("0 failed\n"));
}
