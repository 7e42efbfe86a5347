use qsdc::config::{AttackKind, ModeArg, RunConfig, Settings};
use qsdc::reference::{RefRow, RefSet, THREE_PARTY};
use qsdc::tables::{check_rows, RowStatus, Waiver};
use qsdc::trials::{run_trial, run_trials, Estimate, TrialSummary};
use qsdc::{curves, transcript_io, CliError};
use qsdc_core::comms::{DecodeTable, Mode, SymbolLayout};
use qsdc_core::qcore::{PauliOp, Sign};

fn settings(seed: u64) -> Settings {
    Settings { seed: Some(seed), ..Settings::default() }
}

#[test]
fn flags_win_over_file_settings() {
    let flags = Settings { n_users: Some(4), ..settings(1) };
    let file = Settings { n_users: Some(3), mode: Some(ModeArg::Full), seed: Some(9), ..Settings::default() };
    let merged = flags.or(file);
    assert_eq!(merged.n_users, Some(4));
    assert_eq!(merged.mode, Some(ModeArg::Full));
    assert_eq!(merged.seed, Some(1));
}

#[test]
fn defaults_and_validation() {
    let cfg = RunConfig::from_settings(settings(1)).unwrap();
    assert_eq!((cfg.n_users, cfg.mode, cfg.trials, cfg.auth_rounds), (2, Mode::Partial, 1, 64));
    assert_eq!((cfg.threshold, cfg.check_fraction), (0.05, 0.1));
    assert_eq!(cfg.attack, AttackKind::None);
    for bad in [
        Settings { n_users: Some(1), ..settings(1) },
        Settings { trials: Some(0), ..settings(1) },
        Settings { threshold: Some(-0.1), ..settings(1) },
        Settings { message: Some(String::new()), ..settings(1) },
        Settings::default(),
    ] {
        assert!(matches!(RunConfig::from_settings(bad), Err(CliError::Usage(_))));
    }
}

#[test]
fn toml_keys_mirror_flags() {
    let s: Settings = toml::from_str("n-users = 5\nattack = \"twoway\"\ntheta-eps = 1.0\ncheck-fraction = 0.2\n").unwrap();
    assert_eq!(s.n_users, Some(5));
    assert_eq!(s.attack, Some(AttackKind::Twoway));
    assert_eq!(s.theta_eps, Some(1.0));
    assert_eq!(s.check_fraction, Some(0.2));
    assert!(toml::from_str::<Settings>("users = 5").is_err());
}

#[test]
fn bernoulli_estimate() {
    let e = Estimate::bernoulli(50, 100);
    assert_eq!((e.count, e.mean), (100, 0.5));
    assert!((e.sigma3 - 0.15).abs() < 1e-12);
    assert!(e.consistent_with(0.6));
    assert!(!e.consistent_with(0.7));
    assert_eq!(Estimate::bernoulli(0, 0).mean, 0.0);
}

#[test]
fn trials_are_order_independent() {
    let cfg = RunConfig::from_settings(Settings { n_users: Some(3), trials: Some(16), ..settings(40) }).unwrap();
    let run = run_trials(&cfg).unwrap();
    let table = DecodeTable::generate(&SymbolLayout::for_users(3).unwrap(), Mode::Partial).unwrap();
    for i in [15u64, 3, 0, 9] {
        let (r, _) = run_trial(&cfg, &table, i, false).unwrap();
        assert_eq!(r.seed, 40 ^ i);
        assert_eq!(r, run.records[i as usize]);
    }
    assert_eq!(run.summary, TrialSummary::from_records(&run.records));
    assert_eq!(run.summary.delivered, 16);
    assert!(!run.summary.alarmed());
}

#[test]
fn transcript_lines_keep_field_order() {
    let cfg = RunConfig::from_settings(Settings { message: Some("1011".into()), ..settings(2) }).unwrap();
    let run = run_trials(&cfg).unwrap();
    let text = transcript_io::to_jsonl(run.first.transcript()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], r#"{"n_users":2,"mode":"partial","seed":2,"pad_len":0}"#);
    for (k, line) in lines[1..lines.len() - 1].iter().enumerate() {
        assert!(line.starts_with(&format!(r#"{{"seq":{k},"actor":""#)), "{line}");
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["action"].is_string() && v["payload"].is_object());
    }
    assert_eq!(*lines.last().unwrap(), r#"{"final":{"u2":"1011"}}"#);
}

const BROKEN: RefSet = RefSet {
    name: "three-party partial",
    n_users: 3,
    rows: &[RefRow { publication: Sign::Plus, glyph: "phi", sign: Sign::Plus, ops: &[PauliOp::X, PauliOp::I], bits: "010" }],
};

#[test]
fn mismatches_are_reported_unless_waived() {
    let t = DecodeTable::generate(&SymbolLayout::for_users(3).unwrap(), Mode::Partial).unwrap();
    let ok = check_rows(&THREE_PARTY, &t, &[]).unwrap();
    assert!(ok.iter().all(|r| r.status == RowStatus::Match));
    let bad = check_rows(&BROKEN, &t, &[]).unwrap();
    assert_eq!(bad[0].status, RowStatus::Mismatch);
    assert_eq!(bad[0].generated, "+ phi+ IX 001");
    let waiver = Waiver { set: "three-party partial", row: 0, note: "typo" };
    let waived = check_rows(&BROKEN, &t, &[waiver]).unwrap();
    assert_eq!(waived[0].status, RowStatus::Waived("typo"));
}

#[test]
fn curve_grids() {
    let a = curves::joint_info_curve().unwrap();
    assert_eq!(a.len(), 101);
    assert_eq!(a[50].total, 0.25);
    assert!((a[50].joint_info_bits - 0.5).abs() < 1e-12);
    for (x, y) in a.iter().zip(a.iter().rev()) {
        assert!((x.joint_info_bits - y.joint_info_bits).abs() < 1e-12);
    }
    let c = curves::retrieval_curve().unwrap();
    for w in c.windows(2).filter(|w| w[0].n == w[1].n) {
        assert!(w[0].total < w[1].total);
    }
    assert!(curves::spot_checks().unwrap().iter().all(|s| s.passed()));
}
