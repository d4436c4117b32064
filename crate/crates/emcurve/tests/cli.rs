use std::path::Path;
use std::process::{Command, Output};

fn emcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emcurve")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value_after(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("{key} missing in {text}"))
        .trim()
        .parse()
        .unwrap()
}

const EQ2: &str = "0,1.7320508075688772,-1,0,1,0";

#[test]
fn epsilon0_prints_ten_decimals() {
    let o = emcurve(&["epsilon0", "--tol", "1e-4"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.8140420779).abs() < 1e-4);
}

#[test]
fn octic_lists_45_coefficients_and_vanishes_at_centre() {
    let o = emcurve(&["octic", "--triangle", EQ2, "--case", "+,+,+", "--eval", "0,0.5773502691896258"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("degree 8"));
    let rows = text.lines().skip_while(|l| *l != "i,j,coefficient").skip(1).take_while(|l| !l.starts_with("canonical"));
    assert_eq!(rows.count(), 45);
    assert!(value_after(&text, "relative ") < 1e-9);
}

#[test]
fn octic_rejects_bad_case() {
    let o = emcurve(&["octic", "--triangle", EQ2, "--case", "+,*,+"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_writes_branch_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = emcurve(&["trace", "--triangle", EQ2, "--domain", "-3,3,-3,3", "--cell", "0.02", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("branch_id,x,y"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect();
    assert!(rows.len() > 100);
    assert!(rows.iter().all(|r| r.len() == 3 && r[0] == 0.0));
}

#[test]
fn epsilon_methods_agree() {
    let p = emcurve(&["epsilon", "--triangle", EQ2, "--method", "pixel", "--domain", "-3,3,-3,3", "--step", "0.002"]);
    let s = emcurve(&["epsilon", "--triangle", EQ2, "--method", "scanline", "--tol", "1e-6"]);
    assert!(p.status.success() && s.status.success());
    let (ep, es) = (value_after(&stdout(&p), "epsilon "), value_after(&stdout(&s), "epsilon "));
    assert!((es - 0.8140420779).abs() < 1e-6);
    assert!((ep - es).abs() < 0.01);
}

#[test]
fn epsilon_of_open_curve_exits_1() {
    let o = emcurve(&["epsilon", "--triangle", "0,1,-100,0,100,0", "--domain", "-1000,1000,-1000,1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("closed false"));
}

#[test]
fn degenerate_triangle_exits_2() {
    let o = emcurve(&["epsilon", "--triangle", "0,3,0,0,0,5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn sweep_verify_render_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("field.csv");
    let f = field.to_str().unwrap();
    let o = emcurve(&["sweep", "--u", "-100:100:50", "--v", "100:200:50", "--pixel-step", "4", "--threads", "2", "--out", f]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&field).unwrap();
    assert!(csv.starts_with("u,v,closed,epsilon\n"));
    assert_eq!(csv.lines().count(), 1 + 15);

    let o = emcurve(&["verify", "--field", f, "--epsilon0", "0.8140420779", "--slack", "0.01"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("violations 0"));

    let img = dir.path().join("fig.ppm");
    let o = emcurve(&["render-field", "--field", f, "--eps-max", "2", "--bands", "64", "--cell-px", "4", "--out", img.to_str().unwrap()]);
    assert!(o.status.success());
    let bytes = std::fs::read(&img).unwrap();
    assert!(bytes.starts_with(b"P6\n20 12\n255\n"));
    assert_eq!(bytes.len(), 13 + 20 * 12 * 3);
}

#[test]
fn verify_fails_on_violation_and_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    write(&bad, "u,v,closed,epsilon\n0,150,true,0.85\n50,150,true,0.80\n");
    let o = emcurve(&["verify", "--field", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation u=50 v=150"));

    let broken = dir.path().join("broken.csv");
    write(&broken, "u,v,closed,epsilon\n0,150,true,0.85\nabc,150,false,\n");
    let o = emcurve(&["verify", "--field", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn render_curve_writes_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("curve.ppm");
    let o = emcurve(&["render-curve", "--triangle", EQ2, "--domain", "-3,3,-2,2", "--size", "120", "--out", img.to_str().unwrap()]);
    assert!(o.status.success());
    let bytes = std::fs::read(&img).unwrap();
    assert!(bytes.starts_with(b"P6\n120 80\n255\n"));
    assert_eq!(bytes.len(), 14 + 120 * 80 * 3);
}

#[test]
fn threads_env_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_emcurve"))
        .args(["sweep", "--u", "0:0:1", "--v", "150:150:1", "--out", out.to_str().unwrap()])
        .env("EMCURVE_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
}
