use tstkit::corpus::{read_corpus, render_pair, write_corpus};
use tstkit::format::{
    config_from_json, config_to_json, records_from_jsonl, trace_from_jsonl, trace_to_jsonl, FormatError, GenConfigJson,
};
use tstkit::parallel::run_corpus;
use tstkit::report::{report_to_json, RunInfo};
use tstkit_core::harness::{simulate, theorem_harness, DelayPolicy, GenConfig, Scheduler};
use tstkit_core::lang::parse_tst;
use tstkit_core::semantics::{Mode, SystemConfig};

fn config() -> GenConfig {
    GenConfig { max_depth: 4, clocks: 2, max_constant: 3, recursion: 0.3, ..GenConfig::default() }
}

#[test]
fn traces_round_trip() {
    for seed in 0..60 {
        let (p, q) = tstkit_core::harness::generate_pair(&config(), seed);
        let s = SystemConfig::initial(p, q);
        let mode = if seed % 2 == 0 { Mode::Sync } else { Mode::Async };
        let run = simulate(&s, &Scheduler::SeededRandom { seed, policy: DelayPolicy::Uniform }, mode, 30).unwrap();
        let text = trace_to_jsonl(&run.trace);
        assert_eq!(trace_from_jsonl(&text).unwrap(), run.trace);
        assert_eq!(config_from_json(&config_to_json(&run.end)).unwrap(), run.end);
    }
}

#[test]
fn malformed_traces() {
    assert!(matches!(trace_from_jsonl(r#"{"kind":"delay","delay":"1"}"#), Err(FormatError::MissingInitial)));
    assert!(matches!(records_from_jsonl(r#"{"kind":"delay","delay":"-1"}"#), Err(FormatError::Time(_))));
    assert!(matches!(records_from_jsonl(r#"{"kind":"commit","actor":"middle","action":"a"}"#), Err(FormatError::Side(_))));
    assert!(matches!(records_from_jsonl("{\n"), Err(FormatError::Json { line: 1, .. })));
    let init = r#"{"kind":"initial","left":{"term":"1"},"right":{"term":"1"}}"#;
    assert!(matches!(records_from_jsonl(&format!("{}\n{}", init, init)), Err(FormatError::DuplicateInitial(2))));
    let (initial, moves) = records_from_jsonl(&format!("{}\n\n", init)).unwrap();
    assert!(initial.is_some() && moves.is_empty());
}

#[test]
fn gen_config_json_round_trip() {
    let cfg = config();
    let json = GenConfigJson::from(&cfg);
    let back: GenConfigJson = serde_json::from_str(&serde_json::to_string(&json).unwrap()).unwrap();
    assert_eq!(GenConfig::from(&back), cfg);
    let partial: GenConfigJson = serde_json::from_str(r#"{"clocks": 2}"#).unwrap();
    assert_eq!(GenConfig::from(&partial), GenConfig { clocks: 2, ..GenConfig::default() });
}

#[test]
fn corpus_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report = theorem_harness(20, &config(), 11, 3, 500).unwrap();
    let cfg = GenConfigJson::from(&config());
    let written = write_corpus(dir.path(), &report, 11, 3, 500, &cfg).unwrap();
    let (manifest, pairs) = read_corpus(dir.path()).unwrap();
    assert_eq!(manifest, written);
    assert_eq!(GenConfig::from(&manifest.config), config());
    for (r, (p, q)) in report.records.iter().zip(&pairs) {
        assert_eq!((&r.p, &r.q), (p, q));
    }
    assert!(render_pair(&parse_tst("1").unwrap(), &parse_tst("1").unwrap()).starts_with("P = 1\nQ = 1"));
}

#[test]
fn parallel_runs_match_the_sequential_harness() {
    let cfg = config();
    let seq = theorem_harness(40, &cfg, 5, 3, 800).unwrap();
    let cfg_json = GenConfigJson::from(&cfg);
    let info = RunInfo { seed: 5, queue_bound: 3, depth: 800, config: &cfg_json };
    let expected = serde_json::to_string(&report_to_json(&seq, &info)).unwrap();
    for threads in [1, 2, 3, 8, 64] {
        let par = run_corpus(40, &cfg, 5, 3, 800, threads).unwrap();
        assert_eq!(serde_json::to_string(&report_to_json(&par, &info)).unwrap(), expected, "{} threads", threads);
    }
}
