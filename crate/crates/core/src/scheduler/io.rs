//! Schedule serialization: JSON Lines (one entry per line) and a single JSON
//! document carrying the header and entries. Floats round-trip exactly.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{Schedule, ScheduleEntry};

pub fn to_jsonl(entries: &[ScheduleEntry]) -> Result<String> {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e)?);
        out.push('\n');
    }
    Ok(out)
}

/// Parses JSON Lines; blank lines are skipped.
pub fn from_jsonl(text: &str) -> Result<Vec<ScheduleEntry>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            serde_json::from_str(l).map_err(|e| Error::Schedule(format!("line {}: {e}", k + 1)))
        })
        .collect()
}

pub fn to_json(schedule: &Schedule) -> Result<String> {
    Ok(serde_json::to_string_pretty(schedule)?)
}

pub fn from_json(text: &str) -> Result<Schedule> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_jsonl(path: &Path, entries: &[ScheduleEntry]) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    f.write_all(to_jsonl(entries)?.as_bytes())?;
    f.flush()?;
    Ok(())
}

pub fn read_jsonl(path: &Path) -> Result<Vec<ScheduleEntry>> {
    let f = std::io::BufReader::new(fs::File::open(path)?);
    let mut text = String::new();
    for line in f.lines() {
        text.push_str(&line?);
        text.push('\n');
    }
    from_jsonl(&text)
}

pub fn write_json(path: &Path, schedule: &Schedule) -> Result<()> {
    fs::write(path, to_json(schedule)?)?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<Schedule> {
    from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::{compile, ArchitectureConstraints};

    #[test]
    fn round_trips_are_exact() {
        let s = compile(2, 3, ArchitectureConstraints::new(1e-3, 1e9).unwrap(), 1e-6).unwrap();
        assert_eq!(from_jsonl(&to_jsonl(&s.entries).unwrap()).unwrap(), s.entries);
        assert_eq!(from_json(&to_json(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn jsonl_has_named_fields() {
        let s = compile(1, 2, ArchitectureConstraints::new(1e-3, 1e9).unwrap(), 1e-6).unwrap();
        let line = to_jsonl(&s.entries[..1]).unwrap();
        for key in ["memory_id", "time_bin", "op", "freq_index", "target_bin", "param", "phase"] {
            assert!(line.contains(&format!("\"{key}\"")), "{line}");
        }
        assert!(from_jsonl("{\"memory_id\": 1}").is_err());
    }
}
