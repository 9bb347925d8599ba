//! The chart interchange format: a one-line header naming the prime, window
//! and generator choice, then one record per line.
//!
//! Two encodings share the record model. In `json-lines` the header and each
//! record are JSON objects. In `tsv` the header is
//! `#adams-workbench-chart\tversion=1\tprime=3\t...` and a record is
//! `kind \t ss \t degree \t names \t payload`, with the degree comma-separated,
//! the names `;`-separated and the payload compact JSON. Payloads are stored
//! as JSON values with sorted keys, so reading a file and writing it again
//! reproduces it byte for byte.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::config::{Format, WorkbenchConfig};
use crate::error::{Result, WorkbenchError};

pub const CHART_MAGIC: &str = "adams-workbench-chart";
pub const CHART_VERSION: u32 = 1;
pub const GENERATORS: &str = "hazewinkel";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartHeader {
    pub format: String,
    pub version: u32,
    pub prime: u32,
    pub s_max: u32,
    pub t_max: u32,
    pub k_max: u32,
    pub r_max: u32,
    pub precision: u32,
    pub generators: String,
}

impl ChartHeader {
    pub fn new(cfg: &WorkbenchConfig) -> Self {
        ChartHeader {
            format: CHART_MAGIC.into(),
            version: CHART_VERSION,
            prime: cfg.prime,
            s_max: cfg.s_max,
            t_max: cfg.t_max,
            k_max: cfg.k_max,
            r_max: cfg.r_max,
            precision: cfg.window().precision(),
            generators: GENERATORS.into(),
        }
    }

    fn tsv_fields(&self) -> [(&'static str, String); 8] {
        [
            ("version", self.version.to_string()),
            ("prime", self.prime.to_string()),
            ("s_max", self.s_max.to_string()),
            ("t_max", self.t_max.to_string()),
            ("k_max", self.k_max.to_string()),
            ("r_max", self.r_max.to_string()),
            ("precision", self.precision.to_string()),
            ("generators", self.generators.clone()),
        ]
    }

    fn to_tsv(&self) -> String {
        let mut line = format!("#{}", self.format);
        for (k, v) in self.tsv_fields() {
            line.push_str(&format!("\t{k}={v}"));
        }
        line
    }

    fn from_tsv(line: &str) -> Result<Self> {
        let mut parts = line.split('\t');
        let magic = parts.next().and_then(|m| m.strip_prefix('#'));
        if magic != Some(CHART_MAGIC) {
            return Err(WorkbenchError::Chart("missing chart header".into()));
        }
        let mut values = Vec::new();
        let template = ChartHeader::new(&WorkbenchConfig::default()).tsv_fields();
        for (key, _) in template {
            let field = parts.next().ok_or_else(|| WorkbenchError::Chart(format!("header lacks {key}")))?;
            let v = field
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| WorkbenchError::Chart(format!("expected {key}=..., found {field:?}")))?;
            values.push(v.to_string());
        }
        if parts.next().is_some() {
            return Err(WorkbenchError::Chart("trailing header fields".into()));
        }
        let num = |i: usize| {
            values[i]
                .parse::<u32>()
                .map_err(|_| WorkbenchError::Chart(format!("bad header value {:?}", values[i])))
        };
        Ok(ChartHeader {
            format: CHART_MAGIC.into(),
            version: num(0)?,
            prime: num(1)?,
            s_max: num(2)?,
            t_max: num(3)?,
            k_max: num(4)?,
            r_max: num(5)?,
            precision: num(6)?,
            generators: values[7].clone(),
        })
    }

    fn check(&self) -> Result<()> {
        if self.format != CHART_MAGIC {
            return Err(WorkbenchError::Chart(format!("unknown format {:?}", self.format)));
        }
        if self.version != CHART_VERSION {
            return Err(WorkbenchError::Chart(format!(
                "chart version {} is not supported (expected {CHART_VERSION})",
                self.version
            )));
        }
        if self.generators != GENERATORS {
            return Err(WorkbenchError::Chart(format!("generator tag {:?} is not {GENERATORS:?}", self.generators)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Class,
    Differential,
    Detection,
    Transfer,
    Audit,
}

/// Which spectral sequence a record belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SsTag {
    Adams,
    Algnov,
    Cess,
    Ctau,
}

macro_rules! str_enum {
    ($ty:ident { $($v:ident => $s:literal),* $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$v => $s),* })
            }
        }
        impl FromStr for $ty {
            type Err = WorkbenchError;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok($ty::$v),)*
                    _ => Err(WorkbenchError::Chart(format!("unknown {} {s:?}", stringify!($ty)))),
                }
            }
        }
    };
}

str_enum!(RecordKind {
    Class => "class",
    Differential => "differential",
    Detection => "detection",
    Transfer => "transfer",
    Audit => "audit",
});

str_enum!(SsTag {
    Adams => "adams",
    Algnov => "algnov",
    Cess => "cess",
    Ctau => "ctau",
});

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartRecord {
    pub kind: RecordKind,
    pub ss: SsTag,
    pub degree: Vec<i64>,
    pub names: Vec<String>,
    pub payload: serde_json::Value,
}

impl ChartRecord {
    pub fn new(kind: RecordKind, ss: SsTag, degree: Vec<i64>, names: Vec<String>, payload: &impl Serialize) -> Result<Self> {
        for n in &names {
            if n.is_empty() || n.contains(['\t', '\n', ';']) {
                return Err(WorkbenchError::Chart(format!("name {n:?} cannot be encoded")));
            }
        }
        let payload = serde_json::to_value(payload).map_err(|e| WorkbenchError::Chart(e.to_string()))?;
        Ok(ChartRecord {
            kind,
            ss,
            degree,
            names,
            payload,
        })
    }

    /// Decodes the payload.
    pub fn payload_as<T: serde::de::DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(self.payload.clone())
            .map_err(|e| WorkbenchError::Chart(format!("{} {} record: {e}", self.ss, self.kind)))
    }

    fn to_tsv(&self) -> String {
        let degree: Vec<String> = self.degree.iter().map(|d| d.to_string()).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.kind,
            self.ss,
            degree.join(","),
            self.names.join(";"),
            self.payload
        )
    }

    fn from_tsv(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.splitn(5, '\t').collect();
        let [kind, ss, degree, names, payload] = fields[..] else {
            return Err(WorkbenchError::Chart(format!("expected 5 fields in {line:?}")));
        };
        let degree = if degree.is_empty() {
            Vec::new()
        } else {
            degree
                .split(',')
                .map(|d| d.parse().map_err(|_| WorkbenchError::Chart(format!("bad degree {degree:?}"))))
                .collect::<Result<_>>()?
        };
        let names = if names.is_empty() {
            Vec::new()
        } else {
            names.split(';').map(String::from).collect()
        };
        Ok(ChartRecord {
            kind: kind.parse()?,
            ss: ss.parse()?,
            degree,
            names,
            payload: serde_json::from_str(payload).map_err(|e| WorkbenchError::Chart(e.to_string()))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub header: ChartHeader,
    pub records: Vec<ChartRecord>,
}

impl Chart {
    pub fn new(header: ChartHeader) -> Self {
        Chart {
            header,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: ChartRecord) {
        self.records.push(record);
    }

    pub fn records_of(&self, kind: RecordKind) -> impl Iterator<Item = &ChartRecord> {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn write_to(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::JsonLines => {
                writeln!(out, "{}", serde_json::to_string(&self.header).expect("header serializes"))?;
                for r in &self.records {
                    writeln!(out, "{}", serde_json::to_string(r).expect("record serializes"))?;
                }
            }
            Format::Tsv => {
                writeln!(out, "{}", self.header.to_tsv())?;
                for r in &self.records {
                    writeln!(out, "{}", r.to_tsv())?;
                }
            }
        }
        Ok(())
    }

    pub fn to_text(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write_to(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("chart text is utf-8")
    }

    /// Parses either encoding, detected from the header line.
    pub fn parse(text: &str) -> Result<(Chart, Format)> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| WorkbenchError::Chart("empty file, no header".into()))?;
        let (header, format) = if first.starts_with('{') {
            let h: ChartHeader = serde_json::from_str(first).map_err(|e| WorkbenchError::Chart(format!("header: {e}")))?;
            (h, Format::JsonLines)
        } else {
            (ChartHeader::from_tsv(first)?, Format::Tsv)
        };
        header.check()?;
        let mut chart = Chart::new(header);
        for (n, line) in lines.enumerate() {
            let rec = match format {
                Format::JsonLines => serde_json::from_str(line)
                    .map_err(|e| WorkbenchError::Chart(format!("line {}: {e}", n + 2)))?,
                Format::Tsv => ChartRecord::from_tsv(line)?,
            };
            chart.push(rec);
        }
        Ok((chart, format))
    }

    pub fn read_file(path: &Path) -> Result<(Chart, Format)> {
        let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::io(path, e))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Chart {
        let mut chart = Chart::new(ChartHeader::new(&WorkbenchConfig::default()));
        #[derive(Serialize)]
        struct P {
            zeta: u32,
            alpha: Vec<(u32, u32)>,
            text: String,
        }
        let payload = P {
            zeta: 1,
            alpha: vec![(0, 2)],
            text: "a\tb [t1|t1^2]".into(),
        };
        chart.push(ChartRecord::new(RecordKind::Class, SsTag::Adams, vec![1, 4], vec!["adams(1,4)#0".into(), "h_0".into()], &payload).unwrap());
        chart.push(ChartRecord::new(RecordKind::Audit, SsTag::Cess, vec![], vec![], &true).unwrap());
        chart
    }

    #[test]
    fn both_encodings_round_trip_byte_for_byte() {
        let chart = sample();
        for format in [Format::JsonLines, Format::Tsv] {
            let text = chart.to_text(format);
            let (back, f) = Chart::parse(&text).unwrap();
            assert_eq!(f, format);
            assert_eq!(back, chart);
            assert_eq!(back.to_text(format), text);
        }
    }

    #[test]
    fn header_only_file_is_valid() {
        let chart = Chart::new(ChartHeader::new(&WorkbenchConfig::default()));
        let text = chart.to_text(Format::Tsv);
        assert_eq!(text.lines().count(), 1);
        assert!(Chart::parse(&text).unwrap().0.records.is_empty());
    }

    #[test]
    fn rejects_foreign_versions_and_names() {
        let text = sample().to_text(Format::JsonLines).replacen("\"version\":1", "\"version\":9", 1);
        assert!(Chart::parse(&text).is_err());
        assert!(ChartRecord::new(RecordKind::Class, SsTag::Adams, vec![], vec!["a;b".into()], &0).is_err());
        assert!(Chart::parse("").is_err());
    }
}
