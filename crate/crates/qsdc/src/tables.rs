use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qsdc_core::comms::{bit_string, encode_symbol, DecodeTable, Mode, SymbolLayout};
use qsdc_core::qcore::{GhzOutcome, Sign};
use serde::Serialize;

use crate::reference::{RefRow, RefSet, REFERENCE_SETS};
use crate::Result;

/// Accepts a known mismatch in one reference row.
#[derive(Clone, Copy, Debug)]
pub struct Waiver {
    pub set: &'static str,
    pub row: usize,
    pub note: &'static str,
}

/// No reference row currently needs one.
pub const WAIVERS: &[Waiver] = &[];

#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Match,
    Mismatch,
    Waived(&'static str),
}

#[derive(Clone, Debug)]
pub struct RowCheck {
    pub set: &'static str,
    pub row: usize,
    pub expected: String,
    pub generated: String,
    pub status: RowStatus,
}

#[derive(Clone, Debug)]
pub struct ConformanceReport {
    pub rows: Vec<RowCheck>,
    /// Per user count: does the full table decode every (outcome,
    /// publication) exactly like the partial one?
    pub mirrored: Vec<(usize, bool)>,
}

impl ConformanceReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &RowCheck> {
        self.rows.iter().filter(|r| r.status == RowStatus::Mismatch)
    }

    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none() && self.mirrored.iter().all(|&(_, ok)| ok)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let tag = match &r.status {
                RowStatus::Match => "match".to_string(),
                RowStatus::Mismatch => "MISMATCH".to_string(),
                RowStatus::Waived(note) => format!("waived ({note})"),
            };
            let _ = writeln!(s, "{} row {:>2}: {:<8} expected {:<22} generated {:<22}", r.set, r.row + 1, tag, r.expected, r.generated);
        }
        for &(n, ok) in &self.mirrored {
            let _ = writeln!(s, "{n}-party full mirrors partial: {}", if ok { "yes" } else { "NO" });
        }
        let total = self.rows.len();
        let bad = self.mismatches().count();
        let _ = writeln!(s, "{} of {total} reference rows match, {bad} mismatched", total - bad);
        s
    }
}

fn describe(publication: Sign, outcome: &str, ops: &str, bits: &str) -> String {
    format!("{publication} {outcome} {ops} {bits}")
}

fn ops_string(ops: &[qsdc_core::qcore::PauliOp]) -> String {
    ops.iter().map(|op| op.to_string()).collect()
}

/// Compares one reference set against `table`.
pub fn check_rows(set: &RefSet, table: &DecodeTable, waivers: &[Waiver]) -> Result<Vec<RowCheck>> {
    let layout = table.layout();
    let mut out = Vec::with_capacity(set.rows.len());
    for (k, r) in set.rows.iter().enumerate() {
        let RefRow { publication, glyph, sign, ops, bits } = *r;
        let expected = describe(publication, &format!("{glyph}{sign}"), &ops_string(ops), bits);
        let decoded = GhzOutcome::from_glyph(set.n_users, glyph, sign).and_then(|o| table.decode(o, publication));
        let generated = match decoded {
            Some(s) => {
                let sent = layout.bits_of(s);
                let gen_ops = encode_symbol(layout, &sent)?;
                describe(publication, &format!("{glyph}{sign}"), &ops_string(&gen_ops), &bit_string(&sent))
            }
            None => describe(publication, &format!("{glyph}{sign}"), "?", "?"),
        };
        let status = if generated == expected {
            RowStatus::Match
        } else if let Some(w) = waivers.iter().find(|w| w.set == set.name && w.row == k) {
            RowStatus::Waived(w.note)
        } else {
            RowStatus::Mismatch
        };
        out.push(RowCheck { set: set.name, row: k, expected, generated, status });
    }
    Ok(out)
}

fn table(n: usize, mode: Mode) -> Result<DecodeTable> {
    Ok(DecodeTable::generate(&SymbolLayout::for_users(n)?, mode)?)
}

pub fn conformance_with(waivers: &[Waiver]) -> Result<ConformanceReport> {
    let mut rows = Vec::new();
    let mut mirrored = Vec::new();
    for set in &REFERENCE_SETS {
        let partial = table(set.n_users, Mode::Partial)?;
        rows.extend(check_rows(set, &partial, waivers)?);
        let full = table(set.n_users, Mode::Full)?;
        let ok = GhzOutcome::all(set.n_users)
            .into_iter()
            .all(|o| [Sign::Plus, Sign::Minus].iter().all(|&p| partial.decode(o, p) == full.decode(o, p)));
        mirrored.push((set.n_users, ok));
    }
    Ok(ConformanceReport { rows, mirrored })
}

pub fn conformance() -> Result<ConformanceReport> {
    conformance_with(WAIVERS)
}

#[derive(Serialize)]
struct TableRow<'a> {
    n_users: usize,
    mode: &'a str,
    publication: String,
    outcome: String,
    glyph: &'a str,
    ops: String,
    bits: String,
}

/// Writes `decode_tables.csv` for 2 and 3 users in both modes plus
/// `conformance.txt`, and returns the report.
pub fn write_tables(dir: &Path) -> Result<ConformanceReport> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("decode_tables.csv"))?;
    for n in [2, 3] {
        for mode in [Mode::Partial, Mode::Full] {
            let t = table(n, mode)?;
            for r in t.rows() {
                w.serialize(TableRow {
                    n_users: n,
                    mode: mode.name(),
                    publication: r.publication.to_string(),
                    outcome: r.outcome.to_string(),
                    glyph: r.outcome.glyph().unwrap_or(""),
                    ops: ops_string(&r.ops),
                    bits: bit_string(&t.layout().bits_of(r.symbol)),
                })?;
            }
        }
    }
    w.flush()?;
    let report = conformance()?;
    fs::write(dir.join("conformance.txt"), report.render())?;
    Ok(report)
}
