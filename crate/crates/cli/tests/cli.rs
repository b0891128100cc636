use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn gsmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsmatch"))
        .args(args)
        .output()
        .expect("run gsmatch")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

fn synth(dir: &Path, per_class: usize) {
    let o = gsmatch(&["synth", "--out", dir.to_str().unwrap(), "--per-class", &per_class.to_string(), "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect()
}

#[test]
fn self_match_skips_nothing_and_renders_svg() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), 1);
    let shape = dir.path().join("star-1.txt");
    let svg = dir.path().join("m.svg");
    let o = gsmatch(&["match", shape.to_str().unwrap(), shape.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let r = stdout(&o);
    assert_eq!(field(&r, "skipped_a"), Some(""));
    assert_eq!(field(&r, "skipped_b"), Some(""));
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
}

#[test]
fn occluded_copy_skips_on_one_side_at_the_occlusion() {
    let dir = tempfile::tempdir().unwrap();
    let occ = dir.path().join("occ");
    synth(dir.path(), 1);
    let o = gsmatch(&["perturb", dir.path().to_str().unwrap(), "--mode", "occlude", "--seed", "5", "--out", occ.to_str().unwrap()]);
    assert!(o.status.success());
    let list = std::fs::read_to_string(occ.join("occlusions.list")).unwrap();
    for line in list.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        let (id, n, first, count): (&str, usize, usize, usize) =
            (f[0], f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap());
        let removed: Vec<usize> = (0..count).map(|t| (first + t) % n).collect();
        let a = occ.join(format!("{id}.txt"));
        let b = dir.path().join(format!("{id}.txt"));
        let r = stdout(&gsmatch(&["match", a.to_str().unwrap(), b.to_str().unwrap()]));
        let skipped_a = field(&r, "skipped_a").unwrap();
        let skipped_b: Vec<usize> = field(&r, "skipped_b")
            .unwrap()
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().unwrap())
            .collect();
        // the original keeps the occluded run, so only its side has
        // segments without a partner, and they include the removed ones
        assert!(skipped_a.is_empty(), "{id}:\n{r}");
        assert!(skipped_b.iter().any(|s| removed.contains(s)), "{id}, removed {removed:?}:\n{r}");
    }
}

#[test]
fn missing_file_exits_with_2() {
    let o = gsmatch(&["match", "no-such-file.txt", "other.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-file.txt"));
}

#[test]
fn retrieve_reports_scores_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth(&data, 2);
    let out = dir.path().join("report.txt");
    let args = ["retrieve", data.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert!(gsmatch(&args).status.success());
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(field(&first, "shapes"), Some("6"));
    assert!(field(&first, "bullseye").is_some());
    assert!(field(&first, "top1").is_some());
    let matrix = std::fs::read_to_string(dir.path().join("report.txt.matrix")).unwrap();
    assert_eq!(matrix.lines().count(), 7);
    // the second run matches nothing new
    let t = std::time::Instant::now();
    let mut resumed = args.to_vec();
    resumed.push("--resume");
    assert!(gsmatch(&resumed).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    let cached = t.elapsed();
    assert!(cached.as_secs_f64() < 5.0, "{cached:?}");
}

#[test]
fn retrieve_on_empty_dir_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(gsmatch(&["retrieve", dir.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn occlusion_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth(&data, 2);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = gsmatch(&["perturb", data.to_str().unwrap(), "--mode", "occlude", "--seed", "9", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        tree(&out)
    };
    let a = run("a");
    assert_eq!(a.keys().filter(|k| k.ends_with(".txt")).count(), 6);
    assert_eq!(a, run("b"));
}

#[test]
fn merge_writes_100_shapes_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth(&data, 2);
    let out = dir.path().join("merged");
    let o = gsmatch(&["perturb", data.to_str().unwrap(), "--mode", "merge", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files = tree(&out);
    assert_eq!(files.keys().filter(|k| k.ends_with(".txt")).count(), 100);
    let list = String::from_utf8(files["constituents.list"].clone()).unwrap();
    assert_eq!(list.lines().count(), 100);
}

#[test]
fn unknown_mode_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = gsmatch(&["perturb", dir.path().to_str().unwrap(), "--mode", "shuffle", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), 1);
    let cfg = dir.path().join("params.cfg");
    std::fs::write(&cfg, "beta_skip = 0.5\n").unwrap();
    let a = dir.path().join("star-1.txt");
    let b = dir.path().join("fish-1.txt");
    let (a, b, cfg) = (a.to_str().unwrap(), b.to_str().unwrap(), cfg.to_str().unwrap());
    let cost = |extra: &[&str]| {
        let mut args = vec!["match", a, b];
        args.extend_from_slice(extra);
        let o = gsmatch(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        field(&stdout(&o), "total_cost").unwrap().parse::<f64>().unwrap()
    };
    let default = cost(&[]);
    let cheap_skips = cost(&["--config", cfg]);
    // skipping every segment of both shapes costs two beta_skip at most
    assert!(cheap_skips <= 1.0 + 1e-9 && cheap_skips < default);
    assert_eq!(cost(&["--config", cfg, "--set", "beta_skip=210"]), default);
    let bad = gsmatch(&["match", a, b, "--set", "beta_skip=-1"]);
    assert_eq!(bad.status.code(), Some(2));
}
