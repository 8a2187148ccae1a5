use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_drinfeld")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, err) = run(&all);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn expand_g_over_f3() {
    let v = json(&["expand", "g", "--q", "3", "--prec", "2"]);
    assert_eq!(v["coeffs"], serde_json::json!(["1", "0", "2*T^3+T"]));
}

#[test]
fn expand_e_over_f2() {
    let (code, out, _) = run(&["expand", "E", "--q", "2", "--prec", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "E = t + O(t^2)");
}

#[test]
fn expand_h_over_f2() {
    let v = json(&["expand", "h", "--q", "2", "--prec", "4"]);
    assert_eq!(v["coeffs"], serde_json::json!(["0", "1", "1", "T^2+T+1", "1"]));
}

#[test]
fn expand_csv() {
    let (code, out, _) = run(&["expand", "E", "--q", "2", "--prec", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,coeff\n0,0\n1,1\n");
}

#[test]
fn eigencheck_linear_prime() {
    let v = json(&["eigencheck", "--n", "1", "--prime", "T+1", "--q", "2"]);
    assert_eq!(v["exact"]["eigenform"], true);
    assert_eq!(v["exact"]["eigenvalue"], "T+1");
}

#[test]
fn eigencheck_alpha_nonzero() {
    let v = json(&["eigencheck", "--n", "3", "--prime", "T^2+T+1", "--q", "2"]);
    assert_eq!(v["alpha_1"], "1");
    assert_eq!(v["mod_t"]["eigenform"], false);
    assert_eq!(v["exact"]["eigenform"], false);
}

#[test]
fn eigencheck_alpha_zero_is_eigenform_mod_t() {
    let v = json(&["eigencheck", "--n", "3", "--prime", "T^3+T^2+1", "--q", "2"]);
    assert_eq!(v["alpha_1"], "0");
    assert_eq!(v["mod_t"]["eigenform"], true);
    // Exactly, the image of h^3 picks up T^9+T^7+T^3 on g^3 h^2.
    assert_eq!(v["exact"]["eigenform"], false);
    assert_eq!(v["exact"]["violating_basis_element"], "g^3*h^2");
}

#[test]
fn hecke_matrix_json_feeds_minpoly() {
    let dir = std::env::temp_dir().join(format!("drinfeld-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    let (code, _, err) =
        run(&["hecke-matrix", "--q", "2", "--k", "9", "--prime", "T+1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m["matrix"].as_array().unwrap().len(), 4);
    assert!(m["matrix"][0][0].is_string());
    let from_file = json(&["minpoly", "--q", "2", "--matrix", path.to_str().unwrap()]);
    let direct = json(&["minpoly", "--q", "2", "--k", "9", "--prime", "T+1"]);
    assert_eq!(from_file["minpoly"], direct["minpoly"]);
    assert_eq!(direct["separable"], false);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mod_theta_matrix_is_lower_triangular() {
    let v = json(&["hecke-matrix", "--q", "3", "--k", "16", "--prime", "T+1", "--mod-theta"]);
    let rows = v["matrix"].as_array().unwrap();
    for (i, row) in rows.iter().enumerate() {
        for (j, c) in row.as_array().unwrap().iter().enumerate() {
            if j > i {
                assert_eq!(c, "0");
            }
            if j == i {
                assert_eq!(c, &v["diagonal"]);
            }
        }
    }
}

#[test]
fn goss_mod_t_agrees_with_reduction() {
    let v = json(&["goss", "--q", "2", "--prime", "T+1", "--n", "3", "--mod-t"]);
    assert_eq!(v["polys"][0]["poly"], "X^3+X^2");
}

#[test]
fn scan_output_independent_of_jobs() {
    let base = ["scan-separability", "--q", "2", "--k-max", "13", "--prime-deg-max", "2", "--format", "csv"];
    let one = run(&[&base[..], &["--jobs", "1"]].concat());
    let four = run(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one.0, 0);
    assert_eq!(one.1, four.1);
    assert!(one.1.starts_with("q,k,m,prime,dim,minpoly_degree,separable,inseparable_for_all_primes_so_far,error\n"));
}

#[test]
fn verify_suites_pass() {
    for args in [
        ["verify", "vanishing-coefficients", "--q", "5"],
        ["verify", "mod-t-structure", "--q", "4"],
        ["verify", "eigenforms", "--q", "3"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
        assert!(out.lines().last().unwrap().starts_with("PASS"));
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "nonsense", "--q", "2"][..],
        &["expand", "g", "--p", "4", "--prec", "2"],
        &["hecke-matrix", "--q", "3", "--k", "4", "--m", "5", "--prime", "T+1"],
        &["hecke-matrix", "--q", "2", "--k", "9", "--prime", "T^2"],
        &["hecke-matrix", "--q", "2", "--k", "9", "--prime", "T", "--mod-theta"],
        &["expand", "g"],
        &["eigencheck", "--n", "1", "--prime", "T", "--q", "2", "--format", "xml"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
}
