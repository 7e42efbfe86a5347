use alloc::string::String;
use alloc::vec::Vec;

use super::Mode;
use crate::qcore::PartyId;

/// Scalar carried in an event payload.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v.into())
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.into())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

pub type Payload = Vec<(&'static str, Value)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub seq: u64,
    pub actor: PartyId,
    pub action: &'static str,
    pub payload: Payload,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub n_users: usize,
    pub mode: Mode,
    pub seed: u64,
    pub pad_len: usize,
}

/// Ordered record of everything the honest parties did and saw.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcript {
    header: Option<Header>,
    events: Vec<Event>,
    final_bits: Vec<(PartyId, String)>,
    muted: bool,
    count: u64,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_header(header: Header) -> Self {
        Self { header: Some(header), ..Self::default() }
    }

    /// A transcript that numbers events but stores none of them; for long
    /// Monte Carlo runs.
    pub fn muted() -> Self {
        Self { muted: true, ..Self::default() }
    }

    pub fn is_muted(&self) -> bool {
        self.muted
    }

    pub fn header(&self) -> Option<&Header> {
        self.header.as_ref()
    }

    pub fn set_pad_len(&mut self, pad_len: usize) {
        if let Some(h) = self.header.as_mut() {
            h.pad_len = pad_len;
        }
    }

    /// Appends an event and returns its sequence number.
    pub fn record(&mut self, actor: PartyId, action: &'static str, payload: Payload) -> u64 {
        let seq = self.count;
        self.count += 1;
        if !self.muted {
            self.events.push(Event { seq, actor, action, payload });
        }
        seq
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn set_final(&mut self, receiver: PartyId, bits: String) {
        match self.final_bits.iter_mut().find(|(p, _)| *p == receiver) {
            Some(slot) => slot.1 = bits,
            None => self.final_bits.push((receiver, bits)),
        }
    }

    pub fn final_bits(&self) -> &[(PartyId, String)] {
        &self.final_bits
    }
}

#[cfg(feature = "serde")]
mod ser {
    use super::*;
    use serde::ser::{SerializeMap, SerializeStruct};
    use serde::{Serialize, Serializer};

    impl Serialize for Value {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self {
                Value::Bool(v) => s.serialize_bool(*v),
                Value::Int(v) => s.serialize_i64(*v),
                Value::Float(v) => s.serialize_f64(*v),
                Value::Text(v) => s.serialize_str(v),
            }
        }
    }

    struct Fields<'a>(&'a [(&'static str, Value)]);

    impl Serialize for Fields<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut m = s.serialize_map(Some(self.0.len()))?;
            for (k, v) in self.0 {
                m.serialize_entry(k, v)?;
            }
            m.end()
        }
    }

    impl Serialize for Event {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut st = s.serialize_struct("Event", 4)?;
            st.serialize_field("seq", &self.seq)?;
            st.serialize_field("actor", &self.actor)?;
            st.serialize_field("action", self.action)?;
            st.serialize_field("payload", &Fields(&self.payload))?;
            st.end()
        }
    }

    impl Serialize for Header {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut st = s.serialize_struct("Header", 4)?;
            st.serialize_field("n_users", &self.n_users)?;
            st.serialize_field("mode", self.mode.name())?;
            st.serialize_field("seed", &self.seed)?;
            st.serialize_field("pad_len", &self.pad_len)?;
            st.end()
        }
    }

    /// The closing record: decoded bits per receiver.
    pub struct Final<'a>(pub &'a [(PartyId, String)]);

    impl Serialize for Final<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut st = s.serialize_struct("Final", 1)?;
            st.serialize_field("final", &Receivers(self.0))?;
            st.end()
        }
    }

    struct Receivers<'a>(&'a [(PartyId, String)]);

    impl Serialize for Receivers<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut m = s.serialize_map(Some(self.0.len()))?;
            for (p, bits) in self.0 {
                m.serialize_entry(p, bits)?;
            }
            m.end()
        }
    }
}

#[cfg(feature = "serde")]
pub use ser::Final;

impl Transcript {
    #[cfg(feature = "serde")]
    pub fn final_record(&self) -> Final<'_> {
        Final(&self.final_bits)
    }
}
