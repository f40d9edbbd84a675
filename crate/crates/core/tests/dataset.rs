use std::fs;
use std::path::Path;

use sheetqa::dataset::synth::write_synth_corpus;
use sheetqa::dataset::*;
use sheetqa::qgen::{verify_record, Category, Template};

const GOOD: [&str; 3] = [
    "X:1\nT:One\nM:3/4\nL:1/8\nK:G\n| G2 B2 d2 | c2 A2 F2 | G6 |\n",
    "X:2\nT:Two\nM:2/4\nL:1/8\nK:D\n| D2 F2 | A2 d2 | c2 B2 | A4 |\n",
    "X:3\nT:Three\nL:1/8\nK:Am\n| A2 c2 e2 | d2 c2 B2 | A4 |\n",
];
const BROKEN: &str = "X:4\nT:Broken\nM:4/4\nL:1/8\nK:C\n| C2 D2 E2 F2 | G2 A2 B2 | c8 | C8 |\n";

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn ingest_logs_broken_rhythm() {
    let dir = tempfile::tempdir().unwrap();
    for (i, t) in GOOD.iter().enumerate() {
        write(dir.path(), &format!("good{i}.abc"), t);
    }
    write(dir.path(), "broken.abc", BROKEN);
    let index = ingest_corpus(dir.path()).unwrap();
    assert_eq!(index.tunes.len(), 3);
    assert_eq!(index.rejections.len(), 1);
    assert!(index.rejections[0].path.ends_with("broken.abc"));
    assert!(
        index.rejections[0].reason.contains("measure 2"),
        "{}",
        index.rejections[0].reason
    );
}

#[test]
fn ingest_dedups_identical_content() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.abc", GOOD[0]);
    write(dir.path(), "b.abc", GOOD[0]);
    // Same music, different reference number: still a duplicate.
    write(dir.path(), "c.abc", &GOOD[0].replace("X:1", "X:9"));
    let index = ingest_corpus(dir.path()).unwrap();
    assert_eq!(index.tunes.len(), 1);
    assert_eq!(index.duplicates, 2);
}

#[test]
fn ingest_splits_multi_tune_files_and_skips_other_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "book.abc", &format!("{}\n{}", GOOD[0], GOOD[1]));
    write(dir.path(), "notes.txt", GOOD[2]);
    let index = ingest_corpus(dir.path()).unwrap();
    let ids: Vec<&str> = index.tunes.iter().map(|t| t.id.as_str()).collect();
    assert_eq!(ids, ["book.abc#1", "book.abc#2"]);
}

#[test]
fn empty_corpus_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(ingest_corpus(dir.path()), Err(DatasetError::EmptyCorpus)));
}

/// A tune without M: cannot carry the meter-based templates; the rest are
/// decided by their own content checks.
#[test]
fn eligibility_matrix_without_meter() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "free.abc", GOOD[2]);
    write(dir.path(), "metered.abc", GOOD[0]);
    let index = ingest_corpus(dir.path()).unwrap();
    let free = index.tunes.iter().find(|t| t.id == "free.abc").unwrap();
    let metered = index.tunes.iter().find(|t| t.id == "metered.abc").unwrap();
    let expect_free = [false, false, true, true, true, true, true, false, true];
    assert_eq!(free.eligible, expect_free);
    // Four full measures are needed for a time-signature window; this one has three.
    assert!(!metered.eligible_for(Template::TimeSignatureQuestion));
    assert!(metered.eligible_for(Template::IntervalNumberQuestion));
}

#[test]
fn default_configs() {
    let b = DatasetConfig::benchmark();
    assert_eq!(b.total(), 1600);
    assert!(b.counts.values().all(|&n| n == 400));
    assert_eq!(DatasetConfig::train().total(), 8000);
    let counts = b.template_counts();
    assert_eq!(counts.values().sum::<usize>(), 1600);
    assert_eq!(counts[&Template::ChordsCompletionQuestion], 134);
    assert_eq!(counts[&Template::ChordIdentificationQuestion], 133);
}

#[test]
fn catalog_preset_reproduces_counts() {
    let cfg = DatasetConfig::benchmark().with_preset(WeightPreset::Catalog);
    let counts = cfg.template_counts();
    for (t, n) in CATALOG_COUNTS {
        assert_eq!(counts[&t], n, "{t}");
    }
}

#[test]
fn config_toml_round_trip_and_validation() {
    let cfg = DatasetConfig::train().with_preset(WeightPreset::Catalog);
    assert_eq!(DatasetConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    let partial = DatasetConfig::from_toml("seed = 5\nsplit = \"train\"\n").unwrap();
    assert_eq!(partial.seed, 5);
    let mut bad = DatasetConfig::benchmark();
    bad.weights.insert(Template::ScaleSelectionQuestion, 0.9);
    assert!(matches!(bad.validate(), Err(DatasetError::Config(_))));
    assert!(DatasetConfig::from_toml("bogus = 1\n").is_err());
}

fn small_config(split: Split, per_category: usize) -> DatasetConfig {
    let mut cfg = DatasetConfig::for_split(split);
    for n in cfg.counts.values_mut() {
        *n = per_category;
    }
    cfg.seed = 17;
    cfg
}

#[test]
fn build_set_counts_disjointness_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    write_synth_corpus(dir.path(), 600, 1).unwrap();
    let index = ingest_corpus(dir.path()).unwrap();

    let bench = build_set(&index, &small_config(Split::Benchmark, 20)).unwrap();
    let train = build_set(&index, &small_config(Split::Train, 60)).unwrap();
    let (_, cats) = stats(&bench);
    assert!(cats.values().all(|&n| n == 20));
    assert_eq!(train.len(), 240);

    let bench_tunes: std::collections::HashSet<&str> = bench.iter().map(|r| r.source_tune_id.as_str()).collect();
    assert!(train.iter().all(|r| !bench_tunes.contains(r.source_tune_id.as_str())));
    assert!(bench.iter().chain(&train).all(|r| verify_record(r).pass));

    // Ids are numbered within each category.
    assert_eq!(bench[0].id, "rhythm-0001");
    assert!(bench.iter().any(|r| r.id == "chords-0020"));

    // A tune feeds at most one record per template.
    let mut seen = std::collections::HashSet::new();
    assert!(train
        .iter()
        .all(|r| seen.insert((r.class_name, r.source_tune_id.clone()))));
}

#[test]
fn build_set_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_synth_corpus(dir.path(), 200, 4).unwrap();
    let index = ingest_corpus(dir.path()).unwrap();
    let cfg = small_config(Split::Train, 15);
    assert_eq!(build_set(&index, &cfg).unwrap(), build_set(&index, &cfg).unwrap());
}

#[test]
fn undersized_corpus_names_the_category() {
    let dir = tempfile::tempdir().unwrap();
    write_synth_corpus(dir.path(), 10, 4).unwrap();
    let index = ingest_corpus(dir.path()).unwrap();
    let mut cfg = small_config(Split::Train, 50);
    cfg.disjoint = false;
    match build_set(&index, &cfg) {
        Err(DatasetError::InsufficientCorpus {
            category,
            needed,
            available,
            ..
        }) => {
            assert_eq!(category, Category::Rhythm);
            assert!(available < needed);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn jsonl_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write_synth_corpus(dir.path().join("corpus").as_path(), 100, 3).unwrap();
    let index = ingest_corpus(&dir.path().join("corpus")).unwrap();
    let mut cfg = small_config(Split::Train, 8);
    cfg.disjoint = false;
    let records = build_set(&index, &cfg).unwrap();
    let path = dir.path().join("out.jsonl");
    write_jsonl(&path, &records).unwrap();
    assert_eq!(read_jsonl(&path).unwrap(), records);

    let text = fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let keys: Vec<&str> = first.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "class_name",
        "question",
        "abc_context",
        "correct_answer",
        "incorrect_answer1",
        "incorrect_answer2",
        "incorrect_answer3",
        "category",
    ] {
        assert!(keys.contains(&k), "{k}");
    }
}

#[test]
fn reference_sample_object_round_trips() {
    let line = r#"{"class_name": "TimeSignatureQuestion", "question": "Select the correct time signature for the music score.", "abc_context": "L:1/8\nQ:1/4=120\nK:C\n| c3 c B2 G2 | A2 G2 TF3 E | E4 z2 G2 | A2 B2 c3 c |", "correct_answer": "2/2", "incorrect_answer1": "9/8", "incorrect_answer2": "12/8", "incorrect_answer3": "7/8", "category": "Rhythm"}"#;
    let rows = read_lines(line.as_bytes()).unwrap();
    assert_eq!(rows.len(), 1);
    let r = rows[0].to_record().unwrap();
    assert_eq!(r.class_name, Template::TimeSignatureQuestion);
    assert_eq!(r.correct_answer, "2/2");
    assert_eq!(r.incorrect_answers, ["9/8", "12/8", "7/8"]);
    assert_eq!(r.category, Category::Rhythm);

    let mut buf = Vec::new();
    write_lines(&mut buf, [StoredRecord::from(&r)]).unwrap();
    let again: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    let original: serde_json::Value = serde_json::from_str(line).unwrap();
    for (k, v) in original.as_object().unwrap() {
        assert_eq!(&again[k], v, "{k}");
    }
}

#[test]
fn schema_errors_name_the_line() {
    let text = "{\"class_name\": \"TimeSignatureQuestion\"}\n";
    match read_lines(text.as_bytes()) {
        Err(DatasetError::Schema { line, .. }) => assert_eq!(line, 1),
        other => panic!("{other:?}"),
    }
    let wrong_category = r#"{"class_name":"TimeSignatureQuestion","question":"q","abc_context":"c","correct_answer":"a","incorrect_answer1":"b","incorrect_answer2":"c","incorrect_answer3":"d","category":"Scale"}"#;
    assert!(read_lines(wrong_category.as_bytes()).unwrap()[0].to_record().is_err());
}

#[test]
fn split_assignment_follows_fraction() {
    let n = 5000;
    let bench = (0..n)
        .filter(|i| split_of(&format!("tune-{i}"), 0.2) == Split::Benchmark)
        .count();
    assert!((bench as f64 / n as f64 - 0.2).abs() < 0.02, "{bench}");
    assert_eq!(split_of("x", 0.0), Split::Train);
    assert_eq!(split_of("x", 1.0), Split::Benchmark);
}
