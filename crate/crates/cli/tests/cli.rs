//! End-to-end checks of the binary: exit codes, determinism, config echo.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cavent() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cavent"))
}

fn workdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cavent-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = workdir().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const GOOD: &str = r#"
[cavity]
length = 1e-6
z1 = 0.4e-6
z2 = 0.6e-6
n_max = 1

[layer1]
material = "graphene"
energy = 1e-3

[layer2]
material = "graphene"
energy = 1e-3

[time]
t = 3e-10

[sweep]
variable = "delta_phi"
start = 0.0
stop = 3.141592653589793
count = 24
"#;

fn run(args: &[&str]) -> Output {
    cavent().args(args).output().expect("binary runs")
}

#[test]
fn entropy_echoes_config_and_reports() {
    let config = write_config("good.toml", GOOD);
    let out = run(&[
        "entropy",
        "--config",
        config.to_str().unwrap(),
        "--t",
        "2e-10",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("cavity: length"), "echo missing:\n{stdout}");
    assert!(
        stdout.contains("defaults applied"),
        "defaults not echoed:\n{stdout}"
    );
    assert!(stdout.contains("\"exact\""), "report missing:\n{stdout}");
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["entropy"]);
    assert_eq!(out.status.code(), Some(1));
    // missing evolution time is a usage problem too
    let body = GOOD.replace("[time]\nt = 3e-10\n", "");
    let config = write_config("no-time.toml", &body);
    let out = run(&["entropy", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // sweep needs exactly one source
    let out = run(&["sweep", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn domain_errors_exit_two() {
    let bad = GOOD.replace("z1 = 0.4e-6", "z1 = 1.4e-6");
    let config = write_config("bad.toml", &bad);
    let out = run(&[
        "entropy",
        "--config",
        config.to_str().unwrap(),
        "--t",
        "1e-10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("z1"), "error should name the field: {msg}");

    // unknown recipe
    let out = run(&["sweep", "--recipe", "fig0", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));

    // inadmissible evolution time
    let config = write_config("good2.toml", GOOD);
    let out = run(&["rho", "--config", config.to_str().unwrap(), "--t", "1e-7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_is_byte_deterministic() {
    let dir = workdir();
    let a = dir.join("fig6-a.csv");
    let b = dir.join("fig6-b.csv");
    for path in [&a, &b] {
        let out = run(&["sweep", "--recipe", "fig6", "--out", path.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("sweep_var,value,S1_nats,S2_nats,concurrence,"));
    assert_eq!(text.lines().count(), 201);
}

#[test]
fn config_sweep_writes_rows() {
    let dir = workdir();
    let config = write_config("sweep.toml", GOOD);
    let out_path = dir.join("config-sweep.csv");
    let out = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 25);
}

#[test]
fn verify_small_run_passes() {
    let out = run(&["verify", "--seed", "3", "--cases", "25", "--skip-verdicts"]);
    assert!(
        out.status.success(),
        "verify failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"passed\": true"));
    assert!(stdout.contains("operator-assembly-vs-closed-form"));
}

#[test]
fn presets_and_recipes_list() {
    let out = run(&["presets"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("graphene") && stdout.contains("stanene"));
    assert!(stdout.contains("literature placeholder"));

    let out = run(&["recipes"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for name in [
        "fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9",
    ] {
        assert!(stdout.contains(name), "{name} missing from recipe list");
    }
}

#[test]
fn concurrence_selection_rule_notes_on_stderr() {
    let body = GOOD.replace(
        "[layer2]\nmaterial = \"graphene\"\nenergy = 1e-3",
        "[layer2]\nmaterial = \"graphene\"\nenergy = 1e-3\nspin = -1",
    );
    let config = write_config("blocked.toml", &body);
    let out = run(&[
        "concurrence",
        "--config",
        config.to_str().unwrap(),
        "--t",
        "1e-10",
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("selection rule"), "stderr: {stderr}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"closed_form\": 0.0"));
}
