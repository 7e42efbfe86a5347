use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::channel::{Channel, Runtime};
use super::decode::{DecodeTable, Mode};
use super::encoding::{bit_string, encode_symbol, Message, SymbolLayout};
use super::transcript::{Header, Transcript};
use crate::adversary::AttackModel;
use crate::auth::{authenticate_user, AuthKey, AuthResult, Verdict};
use crate::ghzfab::{allocate_ghz, EprInventory};
use crate::qcore::{GhzOutcome, PartyId, PauliOp, Sign, DEFAULT_MAX_QUBITS};
use crate::{Error, Result};

/// An adversary and the user whose channel it sits on. Intercept taps go on
/// the user's transmission channel, every other model on its
/// authentication channel.
#[derive(Clone, Debug)]
pub struct AttackSpec {
    pub model: AttackModel,
    pub target: PartyId,
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub n_users: usize,
    pub mode: Mode,
    pub auth_rounds: usize,
    pub threshold: f64,
    /// Share of GHZ allocations reserved as check symbols.
    pub check_fraction: f64,
    pub attack: Option<AttackSpec>,
    pub max_qubits: usize,
    /// Stores no transcript events when set.
    pub mute_transcript: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            n_users: 2,
            mode: Mode::Partial,
            auth_rounds: 64,
            threshold: 0.05,
            check_fraction: 0.1,
            attack: None,
            max_qubits: DEFAULT_MAX_QUBITS,
            mute_transcript: false,
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_users < 2 {
            return Err(Error::TooFewUsers(self.n_users));
        }
        // server + users + one ancilla during fabrication or interception
        if self.n_users + 3 > self.max_qubits {
            return Err(Error::TooManyQubits { requested: self.n_users + 3, cap: self.max_qubits });
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::OutOfRange { name: "threshold", value: self.threshold });
        }
        if !(0.0..1.0).contains(&self.check_fraction) {
            return Err(Error::OutOfRange { name: "check_fraction", value: self.check_fraction });
        }
        if let Some(a) = &self.attack {
            let ok = match (a.target, &a.model) {
                (PartyId::User(k), AttackModel::Intercept(_)) => k >= 1 && usize::from(k) < self.n_users,
                (PartyId::User(k), _) => k >= 1 && usize::from(k) <= self.n_users,
                _ => false,
            };
            if !ok {
                return Err(Error::NotAnEndpoint(a.target));
            }
        }
        Ok(())
    }

    pub fn users(&self) -> Vec<PartyId> {
        (1..=self.n_users as u16).map(PartyId::User).collect()
    }

    pub fn receiver(&self) -> PartyId {
        PartyId::User(self.n_users as u16)
    }
}

/// What happened to one GHZ symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct SlotRecord {
    pub slot: usize,
    pub check: bool,
    pub sent: u32,
    pub ops: Vec<PauliOp>,
    pub outcome: GhzOutcome,
    pub publication: Sign,
    pub decoded: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transmission {
    pub layout: SymbolLayout,
    pub slots: Vec<SlotRecord>,
    pub message_len: usize,
    pub pad_len: usize,
}

impl Transmission {
    /// The receiver's reading of the message, check symbols and padding
    /// removed.
    pub fn decoded_bits(&self) -> Vec<bool> {
        let mut bits: Vec<bool> = self
            .slots
            .iter()
            .filter(|s| !s.check)
            .flat_map(|s| self.layout.bits_of(s.decoded))
            .collect();
        bits.truncate(self.message_len);
        bits
    }

    pub fn data_slots(&self) -> impl Iterator<Item = &SlotRecord> {
        self.slots.iter().filter(|s| !s.check)
    }

    pub fn symbol_errors(&self) -> usize {
        self.slots.iter().filter(|s| s.sent != s.decoded).count()
    }

    pub fn symbol_error_rate(&self) -> f64 {
        if self.slots.is_empty() {
            0.0
        } else {
            self.symbol_errors() as f64 / self.slots.len() as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckVerdict {
    Pass,
    Terminated,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckReport {
    pub checked: usize,
    pub errors: usize,
    pub error_rate: f64,
    pub verdict: CheckVerdict,
}

/// Compares the revealed check symbols with what the receiver decoded and
/// terminates iff the error rate exceeds `threshold`.
pub fn eavesdrop_check(tx: &Transmission, threshold: f64) -> CheckReport {
    let checks: Vec<&SlotRecord> = tx.slots.iter().filter(|s| s.check).collect();
    let errors = checks.iter().filter(|s| s.sent != s.decoded).count();
    let error_rate = if checks.is_empty() { 0.0 } else { errors as f64 / checks.len() as f64 };
    let verdict = if error_rate > threshold { CheckVerdict::Terminated } else { CheckVerdict::Pass };
    CheckReport { checked: checks.len(), errors, error_rate, verdict }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Delivered,
    AuthTerminated(PartyId),
    CheckTerminated,
    TamperingAlarm(Error),
}

#[derive(Clone, Debug)]
pub struct SessionReport {
    pub status: Status,
    pub auth: Vec<(PartyId, f64, Verdict)>,
    pub transmission: Option<Transmission>,
    pub check: Option<CheckReport>,
}

/// One protocol run: authenticate every user, fabricate GHZ states, send a
/// message, then run the eavesdropping check.
pub struct Session {
    config: SessionConfig,
    table: DecodeTable,
    rt: Runtime<ChaCha8Rng>,
    auth_channels: Vec<Channel>,
    data_channels: Vec<Channel>,
    public: Channel,
    inventory: EprInventory,
    auth: Vec<AuthResult>,
}

impl Session {
    pub fn new(config: SessionConfig, seed: u64) -> Result<Self> {
        let table = DecodeTable::generate(&SymbolLayout::for_users(config.n_users)?, config.mode)?;
        Self::with_table(config, seed, table)
    }

    /// Reuses a decode table generated for the same user count and mode.
    pub fn with_table(config: SessionConfig, seed: u64, table: DecodeTable) -> Result<Self> {
        config.validate()?;
        if table.layout().n_users() != config.n_users || table.mode() != config.mode {
            return Err(Error::SymbolWidth { expected: config.n_users, got: table.layout().n_users() });
        }
        let transcript = if config.mute_transcript {
            Transcript::muted()
        } else {
            Transcript::with_header(Header { n_users: config.n_users, mode: config.mode, seed, pad_len: 0 })
        };
        let rt = Runtime::with_transcript(ChaCha8Rng::seed_from_u64(seed), transcript);
        let receiver = config.receiver();
        let (measurer, _) = config.mode.measurer_and_publisher(receiver);
        let users = config.users();
        let mut auth_channels: Vec<Channel> = users.iter().map(|&u| Channel::quantum(PartyId::Server, u)).collect();
        let mut data_channels: Vec<Channel> =
            users[..users.len() - 1].iter().map(|&u| Channel::quantum(u, measurer)).collect();
        if let Some(a) = &config.attack {
            if let PartyId::User(k) = a.target {
                let k = usize::from(k) - 1;
                match a.model {
                    AttackModel::Intercept(_) => data_channels[k].set_tap(Some(a.model.clone())),
                    _ => auth_channels[k].set_tap(Some(a.model.clone())),
                }
            }
        }
        Ok(Self {
            public: Channel::classical(PartyId::Server, receiver),
            config,
            table,
            rt,
            auth_channels,
            data_channels,
            inventory: EprInventory::new(),
            auth: Vec::new(),
        })
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn table(&self) -> &DecodeTable {
        &self.table
    }

    pub fn transcript(&self) -> &Transcript {
        &self.rt.transcript
    }

    pub fn auth_results(&self) -> &[AuthResult] {
        &self.auth
    }

    pub fn inventory(&self) -> &EprInventory {
        &self.inventory
    }

    /// The tap on `user`'s authentication or transmission channel.
    pub fn tap(&self, user: PartyId) -> Option<&AttackModel> {
        let k = match user {
            PartyId::User(k) if k >= 1 => usize::from(k) - 1,
            _ => return None,
        };
        self.auth_channels
            .get(k)
            .and_then(Channel::tap)
            .or_else(|| self.data_channels.get(k).and_then(Channel::tap))
    }

    /// Authenticates every user; the retained pairs of authenticated users
    /// go into the EPR inventory.
    pub fn authenticate(&mut self) -> Result<&[AuthResult]> {
        for (k, user) in self.config.users().into_iter().enumerate() {
            let mut key = AuthKey::random(self.config.auth_rounds, &mut self.rt.rng);
            let mut result = authenticate_user(
                user,
                &mut key,
                self.config.auth_rounds,
                self.config.threshold,
                &mut self.auth_channels[k],
                &mut self.rt,
            )?;
            if result.verdict == Verdict::Authenticated {
                self.inventory.deposit(user, core::mem::take(&mut result.pairs));
                self.inventory.mark_authenticated(user);
            }
            self.auth.push(result);
        }
        Ok(&self.auth)
    }

    /// Number of check symbols added to `data` message symbols.
    pub fn check_count(&self, data: usize) -> usize {
        let f = self.config.check_fraction;
        if f <= 0.0 {
            return 0;
        }
        libm::ceil(data as f64 * f / (1.0 - f) - 1e-9) as usize
    }

    pub fn transmit(&mut self, message: &Message) -> Result<Transmission> {
        let layout = self.table.layout().clone();
        let (symbols, pad_len) = message.frame(&layout);
        self.rt.transcript.set_pad_len(pad_len);
        let n_check = self.check_count(symbols.len());
        let total = symbols.len() + n_check;
        let mut is_check = vec![false; total];
        for k in sample(&mut self.rt.rng, total, n_check) {
            is_check[k] = true;
        }
        let mut data = symbols.into_iter();
        let mut slots = Vec::with_capacity(total);
        for (slot, &check) in is_check.iter().enumerate() {
            let sent = if check {
                self.rt.rng.gen_range(0..1u32 << layout.width())
            } else {
                data.next().expect("one data symbol per data slot")
            };
            slots.push(self.send_symbol(slot, check, sent)?);
        }
        let tx = Transmission { layout, slots, message_len: message.len(), pad_len };
        self.rt.transcript.set_final(self.config.receiver(), bit_string(&tx.decoded_bits()));
        Ok(tx)
    }

    fn send_symbol(&mut self, slot: usize, check: bool, sent: u32) -> Result<SlotRecord> {
        let users = self.config.users();
        let receiver = self.config.receiver();
        let mode = self.config.mode;
        let (measurer, publisher) = mode.measurer_and_publisher(receiver);
        let mut alloc = allocate_ghz(&mut self.inventory, &users, slot, &mut self.rt.rng)?;
        self.rt.transcript.record(PartyId::Server, "distribute_ghz", vec![("slot", slot.into())]);

        let layout = self.table.layout();
        let ops = encode_symbol(layout, &layout.bits_of(sent))?;
        let mut measured = Vec::with_capacity(users.len());
        for (k, &op) in ops.iter().enumerate() {
            let (sender, q) = alloc.users[k];
            alloc.register.apply_pauli(q, op)?;
            self.rt.transcript.record(sender, "encode", vec![("slot", slot.into()), ("op", format!("{op}").into())]);
            let arrived = self.data_channels[k].send_qubit(sender, Some(q), &mut alloc.register, &mut self.rt)?;
            measured.push(arrived.ok_or(Error::Tampering { symbol: slot })?);
        }
        let own = alloc.qubit_of(measurer).ok_or(Error::NotAnEndpoint(measurer))?;
        measured.push(own);
        let pub_qubit = alloc.qubit_of(publisher).ok_or(Error::NotAnEndpoint(publisher))?;

        let outcome = alloc.register.measure_ghz(&measured, &mut self.rt.rng)?;
        self.rt.transcript.record(
            measurer,
            "measure_ghz",
            vec![("slot", slot.into()), ("outcome", format!("{outcome}").into())],
        );
        let publication = alloc.register.measure_x(pub_qubit, &mut self.rt.rng)?;
        let sign = format!("{publication}");
        match mode {
            Mode::Partial => {
                self.public.publish(publisher, "publish_x", vec![("slot", slot.into()), ("sign", sign.into())], &mut self.rt)?;
            }
            Mode::Full => {
                let o = format!("{outcome}");
                self.public.publish(measurer, "publish_ghz", vec![("slot", slot.into()), ("outcome", o.into())], &mut self.rt)?;
                self.public.publish(publisher, "publish_x", vec![("slot", slot.into()), ("sign", sign.into())], &mut self.rt)?;
            }
        }
        let decoded = self.table.decode(outcome, publication).ok_or(Error::Tampering { symbol: slot })?;
        self.rt.transcript.record(
            receiver,
            "decode",
            vec![("slot", slot.into()), ("bits", bit_string(&layout.bits_of(decoded)).into())],
        );
        Ok(SlotRecord { slot, check, sent, ops, outcome, publication, decoded })
    }

    /// Senders reveal the check positions and their operations; the
    /// receiver compares.
    pub fn check(&mut self, tx: &Transmission) -> Result<CheckReport> {
        let receiver = self.config.receiver();
        for s in tx.slots.iter().filter(|s| s.check) {
            for (k, op) in s.ops.iter().enumerate() {
                self.rt.transcript.record(
                    PartyId::User(k as u16 + 1),
                    "reveal",
                    vec![("slot", s.slot.into()), ("op", format!("{op}").into())],
                );
            }
        }
        let report = eavesdrop_check(tx, self.config.threshold);
        self.rt.transcript.record(
            receiver,
            "check_result",
            vec![
                ("checked", report.checked.into()),
                ("errors", report.errors.into()),
                ("error_rate", report.error_rate.into()),
                ("pass", (report.verdict == CheckVerdict::Pass).into()),
            ],
        );
        Ok(report)
    }

    /// Full protocol. Protocol-level alarms end up in the report's status;
    /// only programming and configuration faults are returned as errors.
    pub fn run(&mut self, message: &Message) -> Result<SessionReport> {
        self.authenticate()?;
        let auth: Vec<_> = self.auth.iter().map(|r| (r.user, r.error_rate, r.verdict)).collect();
        if let Some(r) = self.auth.iter().find(|r| r.verdict == Verdict::Terminated) {
            let status = Status::AuthTerminated(r.user);
            return Ok(SessionReport { status, auth, transmission: None, check: None });
        }
        let tx = match self.transmit(message) {
            Ok(tx) => tx,
            Err(e @ (Error::Tampering { .. } | Error::NotBellPair(_) | Error::NotGhz(_))) => {
                return Ok(SessionReport { status: Status::TamperingAlarm(e), auth, transmission: None, check: None });
            }
            Err(e) => return Err(e),
        };
        let check = self.check(&tx)?;
        let status = match check.verdict {
            CheckVerdict::Pass => Status::Delivered,
            CheckVerdict::Terminated => Status::CheckTerminated,
        };
        Ok(SessionReport { status, auth, transmission: Some(tx), check: Some(check) })
    }
}
