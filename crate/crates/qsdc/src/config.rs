use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qsdc_core::adversary::{AttackModel, InterceptParams, MasqueradeParams};
use qsdc_core::comms::{AttackSpec, Message, Mode, Session, SessionConfig};
use qsdc_core::qcore::PartyId;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::{CliError, Result};

pub const DEFAULT_MESSAGE: &str = "100111";

/// Mixed into the seed for drawing attack parameters, so they stay fixed
/// across trials.
const ATTACK_STREAM: u64 = 0x6174_7461_636b;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    #[default]
    Partial,
    Full,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Partial => Mode::Partial,
            ModeArg::Full => Mode::Full,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    #[default]
    None,
    Masquerade,
    Oneway,
    Twoway,
    Intercept,
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

/// Every `run` setting, each optional. Flags and the config file both
/// parse into this; flags win.
#[derive(Clone, Debug, Default, Deserialize, Args)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    /// Number of users, at least 2
    #[arg(long)]
    pub n_users: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Bit string or 0x-prefixed hex
    #[arg(long)]
    pub message: Option<String>,
    #[arg(long, value_enum)]
    pub attack: Option<AttackKind>,
    /// User whose channel the attacker taps
    #[arg(long)]
    pub target: Option<u16>,
    /// Two-way attack rotation angle in [0, pi]
    #[arg(long)]
    pub theta_eps: Option<f64>,
    #[arg(long, env = "QSDC_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Error rate above which authentication or the check terminates
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub auth_rounds: Option<usize>,
    #[arg(long)]
    pub check_fraction: Option<f64>,
    /// Transcript path (JSON Lines)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for per-trial CSV output
    #[arg(long)]
    pub csv_dir: Option<PathBuf>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Config { path: path.into(), source })?;
        Ok(toml::from_str(&text)?)
    }

    /// Fills every unset field from `fallback`.
    pub fn or(self, fallback: Settings) -> Settings {
        Settings {
            n_users: self.n_users.or(fallback.n_users),
            mode: self.mode.or(fallback.mode),
            message: self.message.or(fallback.message),
            attack: self.attack.or(fallback.attack),
            target: self.target.or(fallback.target),
            theta_eps: self.theta_eps.or(fallback.theta_eps),
            seed: self.seed.or(fallback.seed),
            trials: self.trials.or(fallback.trials),
            threshold: self.threshold.or(fallback.threshold),
            auth_rounds: self.auth_rounds.or(fallback.auth_rounds),
            check_fraction: self.check_fraction.or(fallback.check_fraction),
            out: self.out.or(fallback.out),
            csv_dir: self.csv_dir.or(fallback.csv_dir),
        }
    }
}

/// A validated `run` configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n_users: usize,
    pub mode: Mode,
    pub message: Message,
    pub attack: AttackKind,
    pub target: u16,
    pub theta_eps: f64,
    pub seed: u64,
    pub trials: usize,
    pub threshold: f64,
    pub auth_rounds: usize,
    pub check_fraction: f64,
    pub out: Option<PathBuf>,
    pub csv_dir: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunConfig {
    pub fn from_settings(s: Settings) -> Result<Self> {
        let defaults = SessionConfig::default();
        let seed = s.seed.ok_or_else(|| usage("a seed is required (--seed, QSDC_SEED or the config file)"))?;
        let n_users = s.n_users.unwrap_or(2);
        let message = s.message.as_deref().unwrap_or(DEFAULT_MESSAGE);
        let message = Message::parse(message).map_err(|e| usage(format!("message: {e}")))?;
        let attack = s.attack.unwrap_or_default();
        let target = s.target.unwrap_or(1);
        let theta_eps = s.theta_eps.unwrap_or(PI / 2.0);
        let cfg = RunConfig {
            n_users,
            mode: s.mode.unwrap_or_default().into(),
            message,
            attack,
            target,
            theta_eps,
            seed,
            trials: s.trials.unwrap_or(1),
            threshold: s.threshold.unwrap_or(defaults.threshold),
            auth_rounds: s.auth_rounds.unwrap_or(defaults.auth_rounds),
            check_fraction: s.check_fraction.unwrap_or(defaults.check_fraction),
            out: s.out,
            csv_dir: s.csv_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(usage("--trials must be at least 1"));
        }
        if !(0.0..=PI).contains(&self.theta_eps) {
            return Err(usage(format!("--theta-eps {} outside [0, pi]", self.theta_eps)));
        }
        let last = if self.attack == AttackKind::Intercept { self.n_users.saturating_sub(1) } else { self.n_users };
        if self.attack != AttackKind::None && !(1..=last).contains(&usize::from(self.target)) {
            return Err(usage(format!("--target {} must name a user in 1..={last}", self.target)));
        }
        let session = Session::new(self.session_config(), self.seed).map_err(|e| usage(e.to_string()))?;
        let layout = session.table().layout();
        let data = self.message.len().div_ceil(layout.width());
        let needed = data + session.check_count(data);
        if needed > self.auth_rounds {
            return Err(usage(format!(
                "{needed} symbols need at least {needed} authentication rounds per user, got {}",
                self.auth_rounds
            )));
        }
        Ok(())
    }

    pub fn attack_model(&self) -> Option<AttackModel> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ ATTACK_STREAM);
        match self.attack {
            AttackKind::None => None,
            AttackKind::Masquerade => Some(AttackModel::masquerade(MasqueradeParams::random(&mut rng))),
            AttackKind::Oneway => Some(AttackModel::one_way()),
            AttackKind::Twoway => AttackModel::two_way(self.theta_eps).ok(),
            AttackKind::Intercept => Some(AttackModel::intercept(InterceptParams::cnot_copy())),
        }
    }

    pub fn session_config(&self) -> SessionConfig {
        SessionConfig {
            n_users: self.n_users,
            mode: self.mode,
            auth_rounds: self.auth_rounds,
            threshold: self.threshold,
            check_fraction: self.check_fraction,
            attack: self.attack_model().map(|model| AttackSpec { model, target: PartyId::User(self.target) }),
            ..SessionConfig::default()
        }
    }
}
