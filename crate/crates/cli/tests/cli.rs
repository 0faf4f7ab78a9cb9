//! End-to-end tests of the `qsvand` binary: exit codes, file round-trips,
//! and output formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qsvand::dense::DenseMatrix;
use qsvand_cli::dump::parse_matrix;
use qsvand_cli::instance_file::InstanceFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsvand"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen_instance(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut args = vec![
        "gen",
        "--family",
        "qs",
        "--n",
        "8",
        "--alpha",
        "2",
        "--seed",
        "7",
        "--out",
        path_str(&out),
    ];
    args.extend_from_slice(extra);
    let res = run(&args);
    assert!(res.status.success(), "gen failed: {res:?}");
    out
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen_instance(dir.path(), "a.json", &[]);
    let b = gen_instance(dir.path(), "b.json", &[]);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same seed must give byte-identical files");

    let parsed: InstanceFile = serde_json::from_slice(&bytes_a).unwrap();
    let reserialized = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(String::from_utf8(bytes_a).unwrap(), reserialized);
    let inst = parsed.into_instance().unwrap();
    assert_eq!(inst.n(), 8);
    assert_eq!(inst.alpha_rank(), 2);
}

#[test]
fn gen_then_invert_verify_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_instance(dir.path(), "inst.json", &[]);
    let inv_path = dir.path().join("inv.txt");
    let res = run(&[
        "invert",
        path_str(&inst),
        "--verify",
        "--out",
        path_str(&inv_path),
    ]);
    assert_eq!(res.status.code(), Some(0), "{res:?}");
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("right_residual"));
    assert!(stdout.contains("oracle_deviation"));

    // the dumped inverse actually inverts the instance
    let inv = parse_matrix(&std::fs::read_to_string(&inv_path).unwrap()).unwrap();
    let file: InstanceFile =
        serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let r = qsvand::displacement::materialize(&file.into_instance().unwrap());
    let mut prod = r.matmul(&inv);
    for i in 0..8 {
        prod[(i, i)] -= 1.0;
    }
    assert!(prod.inf_norm() <= 1e-7);
}

#[test]
fn verify_subcommand_passes_on_generated_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_instance(dir.path(), "inst.json", &[]);
    let res = run(&["verify", path_str(&inst)]);
    assert_eq!(res.status.code(), Some(0), "{res:?}");
    let stdout = String::from_utf8(res.stdout).unwrap();
    for check in [
        "displacement_residual",
        "plu_residual",
        "l_subdiagonal_max",
        "inversion_residual",
        "all checks passed",
    ] {
        assert!(stdout.contains(check), "missing {check} in {stdout}");
    }
}

#[test]
fn canonical_instances_verify_for_every_family() {
    let dir = tempfile::tempdir().unwrap();
    for (i, fam) in ["qs", "ss", "wf"].iter().enumerate() {
        let out = dir.path().join(format!("canon-{fam}.json"));
        let res = run(&[
            "gen",
            "--family",
            fam,
            "--n",
            "6",
            "--seed",
            &(50 + i).to_string(),
            "--canonical",
            "--out",
            path_str(&out),
        ]);
        assert!(res.status.success(), "gen {fam}: {res:?}");
        let res = run(&["verify", path_str(&out)]);
        assert_eq!(res.status.code(), Some(0), "verify {fam}: {res:?}");
    }
}

#[test]
fn factor_dumps_parse_and_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_instance(dir.path(), "inst.json", &[]);
    let prefix = dir.path().join("fac");
    let res = run(&["factor", path_str(&inst), "--out-prefix", path_str(&prefix)]);
    assert_eq!(res.status.code(), Some(0), "{res:?}");

    let l = parse_matrix(&std::fs::read_to_string(dir.path().join("fac.l.txt")).unwrap()).unwrap();
    let u = parse_matrix(&std::fs::read_to_string(dir.path().join("fac.u.txt")).unwrap()).unwrap();
    let perm: Vec<usize> = std::fs::read_to_string(dir.path().join("fac.perm.txt"))
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(perm.len(), 8);

    // P L U == R: apply the recorded swaps to rows of L U in reverse
    let file: InstanceFile =
        serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let r = qsvand::displacement::materialize(&file.into_instance().unwrap());
    let mut plu = l.matmul(&u);
    for k in (0..8).rev() {
        plu.swap_rows(k, perm[k]);
    }
    assert!(plu.sub(&r).inf_norm() <= 1e-9 * r.inf_norm());
}

#[test]
fn malformed_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    for cmd in ["invert", "factor", "verify"] {
        let res = run(&[cmd, path_str(&bad)]);
        assert_eq!(res.status.code(), Some(3), "{cmd}: {res:?}");
    }
    let missing = dir.path().join("missing.json");
    let res = run(&["invert", path_str(&missing)]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn schema_and_shape_violations_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_instance(dir.path(), "inst.json", &[]);
    let text = std::fs::read_to_string(&inst).unwrap();

    let wrong_schema = text.replace("\"schema_version\": 1", "\"schema_version\": 99");
    let p = dir.path().join("schema.json");
    std::fs::write(&p, wrong_schema).unwrap();
    assert_eq!(run(&["invert", path_str(&p)]).status.code(), Some(3));

    let mut file: InstanceFile = serde_json::from_str(&text).unwrap();
    file.g.pop();
    let p = dir.path().join("shape.json");
    std::fs::write(&p, serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(run(&["invert", path_str(&p)]).status.code(), Some(3));
}

#[test]
fn singular_instance_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_instance(dir.path(), "inst.json", &[]);
    let mut file: InstanceFile =
        serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    // zero right generator makes the whole matrix zero
    for v in file.b.iter_mut() {
        *v = 0.0;
    }
    let p = dir.path().join("singular.json");
    std::fs::write(&p, serde_json::to_string(&file).unwrap()).unwrap();
    for cmd in ["invert", "factor"] {
        let res = run(&[cmd, path_str(&p)]);
        assert_eq!(res.status.code(), Some(2), "{cmd}: {res:?}");
    }
}

#[test]
fn tol_env_var_overrides_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_instance(dir.path(), "inst.json", &[]);
    let res = bin()
        .args(["invert", path_str(&inst)])
        .env("QSVAND_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2), "{res:?}");
    let res = bin()
        .args(["invert", path_str(&inst)])
        .env("QSVAND_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(3), "{res:?}");
}

#[test]
fn usage_errors_exit_3_and_help_exits_0() {
    let res = run(&["gen", "--family", "qs"]); // missing --n
    assert_eq!(res.status.code(), Some(3));
    let res = run(&["no-such-command"]);
    assert_eq!(res.status.code(), Some(3));
    let res = run(&["--help"]);
    assert_eq!(res.status.code(), Some(0));
    let res = run(&["gen", "--n", "0", "--out", "/dev/null"]);
    assert_eq!(res.status.code(), Some(3));
    let res = run(&["gen", "--n", "4", "--family", "nope"]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn bench_emits_csv_with_exponent_rules() {
    let res = run(&["bench", "--sizes", "24,48", "--reps", "1", "--seed", "5"]);
    assert_eq!(res.status.code(), Some(0), "{res:?}");
    let stdout = String::from_utf8(res.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "n,fast_seconds,oracle_seconds,fitted_exponent");
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4);
        cols[1].parse::<f64>().unwrap();
        cols[2].parse::<f64>().unwrap();
        cols[3].parse::<f64>().unwrap();
    }

    // single size: times present, exponent column empty
    let res = run(&["bench", "--sizes", "24", "--reps", "1", "--seed", "5"]);
    assert_eq!(res.status.code(), Some(0), "{res:?}");
    let stdout = String::from_utf8(res.stdout).unwrap();
    let line = stdout.lines().nth(1).unwrap();
    let cols: Vec<&str> = line.split(',').collect();
    assert_eq!(cols.len(), 4);
    cols[1].parse::<f64>().unwrap();
    assert_eq!(cols[3], "");
}

#[test]
fn dumped_matrices_round_trip_exactly() {
    let m = DenseMatrix::from_row_major(2, 2, vec![1.0 / 3.0, -2.5e-13, 7.0, 0.1]);
    let text = qsvand_cli::dump::format_matrix(&m);
    let back = parse_matrix(&text).unwrap();
    for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
