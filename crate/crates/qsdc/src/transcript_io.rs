use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use qsdc_core::comms::Transcript;

use crate::Result;

/// JSON Lines: the header, one line per event, then the final record.
pub fn write_jsonl<W: Write>(t: &Transcript, mut w: W) -> Result<()> {
    if let Some(h) = t.header() {
        serde_json::to_writer(&mut w, h)?;
        w.write_all(b"\n")?;
    }
    for e in t.events() {
        serde_json::to_writer(&mut w, e)?;
        w.write_all(b"\n")?;
    }
    serde_json::to_writer(&mut w, &t.final_record())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn to_jsonl(t: &Transcript) -> Result<String> {
    let mut buf = Vec::new();
    write_jsonl(t, &mut buf)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn save(t: &Transcript, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_jsonl(t, BufWriter::new(File::create(path)?))
}
