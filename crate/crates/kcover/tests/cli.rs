use std::path::Path;
use std::process::{Command, Output};

fn kcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_partition_validate_replay() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    let out = kcover(&[
        "generate",
        "--areas",
        "1000",
        "--subsets",
        "1000",
        "--edges",
        "5000",
        "--k",
        "10",
        "--seed",
        "4",
        "--out",
        p(&gen),
    ]);
    assert!(out.status.success());
    let instance = gen.join("instance.txt");

    let part = dir.path().join("part");
    let out = kcover(&[
        "partition",
        "--instance",
        p(&instance),
        "--alg",
        "cgreedy",
        "--out",
        p(&part),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("objective"));

    let out = kcover(&[
        "validate",
        "--instance",
        p(&instance),
        "--partition",
        p(&part.join("partition.txt")),
        "--report",
        p(&part.join("report.json")),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let again = dir.path().join("again");
    let out = kcover(&[
        "replay",
        "--manifest",
        p(&part.join("manifest.json")),
        "--out",
        p(&again),
    ]);
    assert!(out.status.success());
    for f in ["partition.txt", "report.json", "trace.json"] {
        assert_eq!(
            std::fs::read(part.join(f)).unwrap(),
            std::fs::read(again.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn random_partition_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    assert!(kcover(&[
        "generate",
        "--areas",
        "30",
        "--subsets",
        "40",
        "--edges",
        "200",
        "--k",
        "4",
        "--out",
        p(&gen)
    ])
    .status
    .success());
    let instance = gen.join("instance.txt");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = kcover(&[
            "partition",
            "--instance",
            p(&instance),
            "--alg",
            "random",
            "--seed",
            "1",
            "--out",
            p(d),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(a.join("partition.txt")).unwrap(),
        std::fs::read(b.join("partition.txt")).unwrap()
    );
}

#[test]
fn exit_codes_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    assert!(kcover(&[
        "generate",
        "--areas",
        "5",
        "--subsets",
        "13",
        "--edges",
        "30",
        "--k",
        "2",
        "--out",
        p(&gen)
    ])
    .status
    .success());
    let instance = gen.join("instance.txt");
    let out_dir = dir.path().join("o");

    let unknown = kcover(&[
        "partition",
        "--instance",
        p(&instance),
        "--alg",
        "greedy",
        "--out",
        p(&out_dir),
    ]);
    assert_eq!(unknown.status.code(), Some(3));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "kcover 1\n3 1 2\n1 1 0\n").unwrap();
    let malformed = kcover(&[
        "partition",
        "--instance",
        p(&bad),
        "--alg",
        "dgreedy",
        "--out",
        p(&out_dir),
    ]);
    assert_eq!(malformed.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains(":3:"));

    let budget = kcover(&["oracle", "--instance", p(&instance), "--out", p(&out_dir)]);
    assert_eq!(budget.status.code(), Some(5));

    let missing = kcover(&[
        "partition",
        "--instance",
        "/nonexistent/x.txt",
        "--alg",
        "dgreedy",
        "--out",
        p(&out_dir),
    ]);
    assert_eq!(missing.status.code(), Some(6));

    let part = dir.path().join("part.txt");
    std::fs::write(
        &part,
        "kpartition 1\n13 3\n".to_string()
            + &(1..=13).map(|j| format!("{j} 1\n")).collect::<String>(),
    )
    .unwrap();
    let invalid = kcover(&[
        "validate",
        "--instance",
        p(&instance),
        "--partition",
        p(&part),
    ]);
    assert_eq!(invalid.status.code(), Some(7));

    let usage = kcover(&["partition"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn oracle_and_netsim_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    assert!(kcover(&[
        "generate",
        "--areas",
        "6",
        "--subsets",
        "8",
        "--edges",
        "20",
        "--k",
        "3",
        "--out",
        p(&gen)
    ])
    .status
    .success());
    let o = dir.path().join("oracle");
    let out = kcover(&[
        "oracle",
        "--instance",
        p(&gen.join("instance.txt")),
        "--out",
        p(&o),
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(o.join("oracle.json")).unwrap()).unwrap();
    assert!(json["optimum_objective"].as_u64().unwrap() <= 20);

    let dep = dir.path().join("dep");
    assert!(kcover(&[
        "generate-deployment",
        "--sensors",
        "20",
        "--areas",
        "30",
        "--radius",
        "0.25",
        "--k",
        "3",
        "--out",
        p(&dep)
    ])
    .status
    .success());
    let n = dir.path().join("net");
    let out = kcover(&[
        "netsim",
        "--deployment",
        p(&dep.join("deployment.txt")),
        "--out",
        p(&n),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("20 HELLO + 20 DECISION"));
    let trace: serde_json::Value =
        serde_json::from_slice(&std::fs::read(n.join("trace.json")).unwrap()).unwrap();
    assert_eq!(trace["slots"].as_array().unwrap().len(), 20);
    assert!(n.join("partition.txt").exists());
}
