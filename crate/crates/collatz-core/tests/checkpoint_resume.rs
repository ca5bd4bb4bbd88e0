//! Resume semantics: an interrupted campaign continued from its checkpoint
//! must produce a report identical to an uninterrupted run.

use std::io::Write;

use collatz_core::histogram::HistogramConfig;
use collatz_core::verifier::{verify_random, verify_range, VerifyOptions};
use collatz_core::Error;
use num_bigint::BigUint;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn opts(chunk: u64) -> VerifyOptions {
    VerifyOptions {
        workers: 2,
        chunk,
        ..Default::default()
    }
}

#[test]
fn resume_after_truncation_matches_uninterrupted() {
    let dir = tempfile::tempdir().unwrap();
    let reference = verify_range(&big(1), &big(2_000), &opts(100)).unwrap();

    // Full run with a checkpoint, then cut the file back to simulate an
    // interruption after k chunks and resume.
    let path = dir.path().join("full.ckpt");
    let mut o = opts(100);
    o.checkpoint = Some(path.clone());
    let full = verify_range(&big(1), &big(2_000), &o).unwrap();
    assert!(full.same_outcome(&reference));

    let content = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines.len(), 1 + 20); // header + 20 chunks

    for keep_chunks in [0, 1, 7, 19] {
        let cut = dir.path().join(format!("cut{keep_chunks}.ckpt"));
        let mut f = std::fs::File::create(&cut).unwrap();
        for line in &lines[..1 + keep_chunks] {
            writeln!(f, "{line}").unwrap();
        }
        drop(f);
        let mut o = opts(100);
        o.checkpoint = Some(cut);
        let resumed = verify_range(&big(1), &big(2_000), &o).unwrap();
        assert!(
            resumed.same_outcome(&reference),
            "resume after {keep_chunks} chunks diverged"
        );
    }
}

#[test]
fn resume_on_completed_campaign_returns_final_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("done.ckpt");
    let mut o = opts(64);
    o.checkpoint = Some(path);
    let first = verify_range(&big(1), &big(500), &o).unwrap();
    let again = verify_range(&big(1), &big(500), &o).unwrap();
    assert!(first.same_outcome(&again));
}

#[test]
fn mismatched_campaign_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.ckpt");
    let mut o = opts(64);
    o.checkpoint = Some(path);
    verify_range(&big(1), &big(500), &o).unwrap();

    // Different range.
    let err = verify_range(&big(1), &big(600), &o).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch(_)), "{err:?}");

    // Different campaign kind entirely.
    let err = verify_random(10, 32, 1, &o).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch(_)));

    // Different chunk size.
    let mut o2 = opts(32);
    o2.checkpoint = o.checkpoint.clone();
    let err = verify_range(&big(1), &big(500), &o2).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch(_)));

    // Different histogram geometry.
    let mut o3 = opts(64);
    o3.checkpoint = o.checkpoint.clone();
    o3.histogram = HistogramConfig {
        bins: 100,
        ..Default::default()
    };
    let err = verify_range(&big(1), &big(500), &o3).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch(_)));
}

#[test]
fn random_campaign_checkpoints_too() {
    let dir = tempfile::tempdir().unwrap();
    let reference = verify_random(300, 96, 5, &opts(50)).unwrap();

    let path = dir.path().join("rand.ckpt");
    let mut o = opts(50);
    o.checkpoint = Some(path.clone());
    verify_random(300, 96, 5, &o).unwrap();

    let content = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    let cut = dir.path().join("rand_cut.ckpt");
    std::fs::write(&cut, lines[..4].join("\n") + "\n").unwrap();
    let mut o = opts(50);
    o.checkpoint = Some(cut);
    let resumed = verify_random(300, 96, 5, &o).unwrap();
    assert!(resumed.same_outcome(&reference));
}
