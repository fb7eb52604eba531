use std::fs;
use std::process::{Command, Output};

fn digitadd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitadd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = digitadd(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

const KEY: &str = "d00000000100000002000000030000000400000005";

#[test]
fn exit_codes() {
    assert_eq!(
        digitadd(&["add", "b=2 comp=1,1", "10", "10"]).status.code(),
        Some(0)
    );
    assert_eq!(
        digitadd(&["add", "b=2 comp=1,1", "10", "1x"]).status.code(),
        Some(1)
    );
    assert_eq!(digitadd(&["verify", "b=2 comp=13"]).status.code(), Some(1));
    assert_eq!(
        digitadd(&["derive", "2", "8", "--key", "00"]).status.code(),
        Some(1)
    );
    assert_eq!(digitadd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(digitadd(&["count", "2", "8"]).status.code(), Some(2));
    assert_eq!(digitadd(&["census", "2"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    for args in [
        &["census", "3", "2", "--twists"][..],
        &["classify", "2", "5"],
        &["verify", "b=3 comp=1,1 twist=2,1"],
        &["derive", "2", "8", "--key", KEY, "--transcript"],
        &["table", "b=2 comp=2,1 twist=3,1"],
    ] {
        assert_eq!(stdout_of(args), stdout_of(args), "{args:?}");
    }
}

#[test]
fn census_matches_golden() {
    let golden = include_str!("golden/census_twists.txt");
    let mut report = String::new();
    for p in ["2", "3"] {
        for m in ["1", "2", "3"] {
            report.push_str(&stdout_of(&["census", p, m, "--twists"]));
        }
    }
    assert_eq!(report, golden);
}

#[test]
fn text_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain.txt");
    let keystream = dir.path().join("ks.txt");
    let cipher = dir.path().join("cipher.txt");
    let back = dir.path().join("back.txt");
    fs::write(&input, "0120 2101\n1122\n").unwrap();
    fs::write(&keystream, "2211002112102222").unwrap();
    let key = "a0000000070000000b";

    let common = |inp: &std::path::Path, out: &std::path::Path| {
        vec![
            "3".to_string(),
            "4".into(),
            "--key".into(),
            key.into(),
            "--input".into(),
            inp.display().to_string(),
            "--keystream".into(),
            keystream.display().to_string(),
            "--output".into(),
            out.display().to_string(),
        ]
    };
    let run = |verb: &str, inp: &std::path::Path, out: &std::path::Path| {
        let mut args = vec![verb.to_string()];
        args.extend(common(inp, out));
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        stdout_of(&refs);
    };
    run("encrypt", &input, &cipher);
    run("decrypt", &cipher, &back);
    assert_eq!(fs::read_to_string(&back).unwrap(), "012021011122\n");
    assert_ne!(fs::read_to_string(&cipher).unwrap(), "012021011122\n");

    // stdout form matches the file form
    let out = stdout_of(&[
        "encrypt",
        "3",
        "4",
        "--key",
        key,
        "--input",
        input.to_str().unwrap(),
        "--keystream",
        keystream.to_str().unwrap(),
    ]);
    assert_eq!(out, fs::read_to_string(&cipher).unwrap());
}

#[test]
fn raw_byte_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain.bin");
    let keystream = dir.path().join("ks.bin");
    let cipher = dir.path().join("cipher.bin");
    let back = dir.path().join("back.bin");
    let plain: Vec<u8> = (0..=255).collect();
    let ks: Vec<u8> = (0..256u32).map(|i| (i * 97 + 13) as u8).collect();
    fs::write(&input, &plain).unwrap();
    fs::write(&keystream, &ks).unwrap();

    let p = |path: &std::path::Path| path.to_str().unwrap().to_string();
    for (verb, from, to) in [("encrypt", &input, &cipher), ("decrypt", &cipher, &back)] {
        stdout_of(&[
            verb,
            "2",
            "8",
            "--key",
            KEY,
            "--raw",
            "--input",
            &p(from),
            "--keystream",
            &p(&keystream),
            "--output",
            &p(to),
        ]);
    }
    assert_eq!(fs::read(&back).unwrap(), plain);
    assert_ne!(fs::read(&cipher).unwrap(), plain);

    // --raw is only defined for bytes as 8-bit blocks
    let out = digitadd(&[
        "encrypt",
        "2",
        "4",
        "--key",
        KEY,
        "--raw",
        "--input",
        &p(&input),
        "--keystream",
        &p(&keystream),
        "--output",
        &p(&cipher),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stream_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("plain.txt");
    let keystream = dir.path().join("ks.txt");
    fs::write(&input, "10110").unwrap();
    fs::write(&keystream, "1111111111").unwrap();
    let out = digitadd(&[
        "encrypt",
        "2",
        "4",
        "--key",
        KEY,
        "--input",
        input.to_str().unwrap(),
        "--keystream",
        keystream.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("multiple"));

    fs::write(&input, "10111011").unwrap();
    fs::write(&keystream, "1111").unwrap();
    let out = digitadd(&[
        "encrypt",
        "2",
        "4",
        "--key",
        KEY,
        "--input",
        input.to_str().unwrap(),
        "--keystream",
        keystream.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("keystream exhausted"));
}
