use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use catgrid::io::parse_mask_dump;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_catgrid"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.toml"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn catgrid")
}

fn files_with(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    v.sort();
    v
}

fn run_c(out: &Path) -> Output {
    run(bin()
        .arg("run")
        .arg("--scenario")
        .arg(scenario("C"))
        .args(["--frames", "0..20", "--seed", "7", "--out"])
        .arg(out))
}

#[test]
fn run_writes_one_dump_and_image_per_frame_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let o = run_c(d);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let dumps = files_with(&a, "txt");
    let images = files_with(&a, "ppm");
    assert_eq!(dumps.len(), 21);
    assert_eq!(images.len(), 21);
    for p in dumps.iter().chain(&images) {
        let q = b.join(p.file_name().unwrap());
        assert_eq!(std::fs::read(p).unwrap(), std::fs::read(&q).unwrap(), "{}", p.display());
    }

    let o = run(bin().arg("validate").args(&dumps));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 21);
}

#[test]
fn validate_names_the_cell_with_two_labels_in_one_slot() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(bin()
        .arg("run")
        .arg("--scenario")
        .arg(scenario("C"))
        .args(["--frames", "0", "--no-render", "--out"])
        .arg(tmp.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dump = &files_with(tmp.path(), "txt")[0];
    let text = std::fs::read_to_string(dump).unwrap();

    // first data row holding a non-empty occlusion slot
    let line = text
        .lines()
        .find(|l| l.contains(",non_occluded,"))
        .expect("an unknown cell");
    let cell: Vec<&str> = line.split(',').take(2).collect();
    let corrupted = text.replacen(line, &line.replacen(",non_occluded,", ",non_occluded|occl_static,", 1), 1);
    let bad = tmp.path().join("bad.txt");
    std::fs::write(&bad, corrupted).unwrap();

    let o = run(bin().arg("validate").arg(dump).arg(&bad));
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(&format!("cell ({}, {})", cell[0], cell[1])), "{err}");
    assert!(err.contains("1 of 2 dumps are invalid"), "{err}");
}

#[test]
fn fov_writes_three_maps_with_f_fov_inside_o_fov() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(bin()
        .args(["fov", "--sensor", "ibeo_lux", "--n-iter", "2", "--out"])
        .arg(tmp.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let read = |n: &str| parse_mask_dump(&std::fs::read_to_string(tmp.path().join(n)).unwrap()).unwrap();
    let (m, ov, f) = (read("m_fov.txt"), read("o_fov.txt"), read("f_fov.txt"));
    assert_eq!(m, ov);
    assert!(f.is_subset(&ov));
    assert!(f.len() < ov.len() && !f.is_empty());
}

#[test]
fn render_rewrites_a_dump_as_ppm() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(bin()
        .arg("run")
        .arg("--scenario")
        .arg(scenario("B"))
        .args(["--frames", "0", "--no-render", "--out"])
        .arg(tmp.path()));
    assert!(o.status.success());
    let dump = &files_with(tmp.path(), "txt")[0];
    let img = tmp.path().join("again.ppm");
    let o = run(bin().arg("render").arg(dump).arg("--out").arg(&img).args(["--scale", "3"]));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&img).unwrap();
    let header = b"P6\n720 480 255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 720 * 480 * 3);
}

#[test]
fn bad_input_exits_nonzero_with_a_diagnostic() {
    let o = run(bin().args(["run", "--scenario", "does/not/exist.toml"]));
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));

    let tmp = tempfile::tempdir().unwrap();
    let o = run(bin()
        .arg("run")
        .arg("--scenario")
        .arg(scenario("C"))
        .args(["--frames", "0..500", "--out"])
        .arg(tmp.path()));
    assert!(!o.status.success());
}

#[test]
fn help_lists_every_subcommand() {
    let o = run(bin().arg("--help"));
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in ["run", "fov", "render", "validate"] {
        assert!(text.contains(sub), "{text}");
    }
    let o = run(bin().args(["run", "--help"]));
    let text = String::from_utf8_lossy(&o.stdout);
    for flag in ["--scenario", "--frames", "--seed", "--out", "--threshold", "--model"] {
        assert!(text.contains(flag), "{text}");
    }
}
