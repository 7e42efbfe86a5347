use std::fmt;
use std::path::Path;

use qsdc_core::adversary::AttackModel;
use qsdc_core::auth::RoundOutcome;
use qsdc_core::comms::{bit_string, DecodeTable, Session, Status};
use qsdc_core::qcore::PartyId;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::Result;

/// Sample mean of a 0/1 quantity with its 3σ half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub count: usize,
    pub mean: f64,
    pub sigma3: f64,
}

impl Estimate {
    pub fn bernoulli(hits: usize, count: usize) -> Self {
        let mean = if count == 0 { 0.0 } else { hits as f64 / count as f64 };
        let sigma3 = if count == 0 { 0.0 } else { 3.0 * (mean * (1.0 - mean) / count as f64).sqrt() };
        Self { count, mean, sigma3 }
    }

    /// Is the mean within 3σ of `p`, σ taken under `p` itself?
    pub fn consistent_with(&self, p: f64) -> bool {
        self.count > 0 && (self.mean - p).abs() <= 3.0 * (p * (1.0 - p) / self.count as f64).sqrt() + 1e-12
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} ± {:.4} (3σ, n={})", self.mean, self.sigma3, self.count)
    }
}

/// What one seeded session produced.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub seed: u64,
    pub status: String,
    pub decoded: String,
    pub symbols: usize,
    pub symbol_errors: usize,
    pub target_rounds: usize,
    pub target_rejects: usize,
    pub guesses: usize,
    pub correct_guesses: usize,
}

pub fn status_name(s: &Status) -> String {
    match s {
        Status::Delivered => "delivered".into(),
        Status::AuthTerminated(p) => format!("auth_terminated:{p}"),
        Status::CheckTerminated => "check_terminated".into(),
        Status::TamperingAlarm(e) => format!("tampering_alarm:{e}"),
    }
}

/// Runs trial `index` with seed `cfg.seed ^ index`.
pub fn run_trial(cfg: &RunConfig, table: &DecodeTable, index: u64, keep_transcript: bool) -> Result<(TrialRecord, Session)> {
    let seed = cfg.seed ^ index;
    let mut sc = cfg.session_config();
    sc.mute_transcript = !keep_transcript;
    let mut session = Session::with_table(sc, seed, table.clone())?;
    let report = session.run(&cfg.message)?;
    let target = PartyId::User(cfg.target);
    let slots = report.transmission.as_ref().map(|t| t.slots.as_slice()).unwrap_or(&[]);
    let (target_rounds, target_rejects) = session
        .auth_results()
        .iter()
        .find(|r| r.user == target)
        .map(|r| (r.rounds.len(), r.rounds.iter().filter(|x| x.outcome == RoundOutcome::Reject).count()))
        .unwrap_or((0, 0));
    let (mut guesses, mut correct_guesses) = (0, 0);
    if let Some(AttackModel::Intercept(tap)) = session.tap(target) {
        let k = usize::from(cfg.target) - 1;
        for (g, slot) in tap.guesses().into_iter().zip(slots) {
            guesses += 1;
            correct_guesses += usize::from(slot.ops.get(k) == Some(&g));
        }
    }
    let record = TrialRecord {
        index,
        seed,
        status: status_name(&report.status),
        decoded: report.transmission.as_ref().map(|t| bit_string(&t.decoded_bits())).unwrap_or_default(),
        symbols: slots.len(),
        symbol_errors: slots.iter().filter(|s| s.sent != s.decoded).count(),
        target_rounds,
        target_rejects,
        guesses,
        correct_guesses,
    };
    Ok((record, session))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub trials: usize,
    pub delivered: usize,
    pub auth_terminated: usize,
    pub check_terminated: usize,
    pub tampering: usize,
    pub symbol_error: Estimate,
    pub auth_rejection: Estimate,
    pub guess_accuracy: Option<Estimate>,
}

impl TrialSummary {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let count = |prefix: &str| records.iter().filter(|r| r.status.starts_with(prefix)).count();
        let sum = |f: fn(&TrialRecord) -> usize| records.iter().map(f).sum::<usize>();
        let guesses = sum(|r| r.guesses);
        Self {
            trials: records.len(),
            delivered: count("delivered"),
            auth_terminated: count("auth_terminated"),
            check_terminated: count("check_terminated"),
            tampering: count("tampering_alarm"),
            symbol_error: Estimate::bernoulli(sum(|r| r.symbol_errors), sum(|r| r.symbols)),
            auth_rejection: Estimate::bernoulli(sum(|r| r.target_rejects), sum(|r| r.target_rounds)),
            guess_accuracy: (guesses > 0).then(|| Estimate::bernoulli(sum(|r| r.correct_guesses), guesses)),
        }
    }

    /// True when any trial ended in an alarm or termination.
    pub fn alarmed(&self) -> bool {
        self.delivered < self.trials
    }
}

pub struct TrialRun {
    pub records: Vec<TrialRecord>,
    pub summary: TrialSummary,
    /// Trial 0, with its transcript kept.
    pub first: Session,
}

/// Trial 0 runs on the calling thread with a full transcript; the rest fan
/// out over the rayon pool. Records come back in index order.
pub fn run_trials(cfg: &RunConfig) -> Result<TrialRun> {
    let table = Session::new(cfg.session_config(), cfg.seed)?.table().clone();
    let (first_record, first) = run_trial(cfg, &table, 0, true)?;
    let rest: Vec<TrialRecord> = (1..cfg.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(cfg, &table, i, false).map(|(r, _)| r))
        .collect::<Result<_>>()?;
    let mut records = Vec::with_capacity(cfg.trials);
    records.push(first_record);
    records.extend(rest);
    let summary = TrialSummary::from_records(&records);
    Ok(TrialRun { records, summary, first })
}

pub fn write_records(path: &Path, records: &[TrialRecord]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
