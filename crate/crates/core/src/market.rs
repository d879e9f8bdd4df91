//! Trade-record ingestion and time windowing into decision vectors.
//!
//! A trade file is delimiter-separated text with a header naming the
//! columns `trader_id`, `timestamp`, `side`, and `quantity` (any order,
//! extra columns ignored). Timestamps are ISO-8601 (assumed UTC when no
//! zone is given) or epoch seconds; sides are `buy`/`sell`,
//! case-insensitive. Windowing folds the records of each time slice into
//! one spin per tracked trader: the sign of the net signed quantity.

use std::collections::HashMap;
use std::io::{Read, Write};

use chrono::{DateTime, NaiveDateTime};
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::spin::{pair_sum, SpinConfiguration};

/// Trade direction. Determines the spin sign: buys are +1, sells -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    pub fn spin(&self) -> i8 {
        match self {
            Side::Buy => 1,
            Side::Sell => -1,
        }
    }

    fn parse(token: &str) -> Option<Self> {
        match token.trim().to_ascii_lowercase().as_str() {
            "buy" => Some(Side::Buy),
            "sell" => Some(Side::Sell),
            _ => None,
        }
    }
}

/// One validated trade.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeRecord {
    pub trader_id: String,
    /// Microseconds since the Unix epoch, UTC.
    pub timestamp_us: i64,
    pub side: Side,
    pub quantity: f64,
}

/// Input format controls. The default auto-detects the delimiter among
/// comma, semicolon, and tab from the header line.
#[derive(Debug, Clone, Copy, Default)]
pub struct TradeFormat {
    pub delimiter: Option<u8>,
}

/// A malformed row, kept out of the record stream with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

/// Outcome of parsing: time-sorted valid records plus the rows that failed.
#[derive(Debug, Clone)]
pub struct ParsedTrades {
    pub records: Vec<TradeRecord>,
    pub row_errors: Vec<RowError>,
}

/// Parses a trade stream. Rows that fail to parse become [`RowError`]s;
/// a missing required column fails the whole call.
pub fn parse_trades<R: Read>(reader: R, format: &TradeFormat) -> Result<ParsedTrades> {
    let mut text = String::new();
    let mut reader = reader;
    reader.read_to_string(&mut text)?;
    if text.trim().is_empty() {
        return Err(Error::Format("input is empty".into()));
    }
    let delimiter = match format.delimiter {
        Some(d) => d,
        None => detect_delimiter(&text),
    };

    let mut csv_reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .from_reader(text.as_bytes());

    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Format(format!("cannot read header: {e}")))?
        .clone();
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Format(format!("missing required column '{name}'")))
    };
    let trader_col = column("trader_id")?;
    let time_col = column("timestamp")?;
    let side_col = column("side")?;
    let quantity_col = column("quantity")?;

    let mut records = Vec::new();
    let mut row_errors = Vec::new();
    for (index, row) in csv_reader.records().enumerate() {
        // header is line 1
        let line = index as u64 + 2;
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                row_errors.push(RowError {
                    line,
                    message: format!("unreadable row: {e}"),
                });
                continue;
            }
        };
        match parse_row(&row, trader_col, time_col, side_col, quantity_col) {
            Ok(record) => records.push(record),
            Err(message) => row_errors.push(RowError { line, message }),
        }
    }
    records.sort_by(|a, b| {
        a.timestamp_us
            .cmp(&b.timestamp_us)
            .then_with(|| a.trader_id.cmp(&b.trader_id))
    });
    Ok(ParsedTrades {
        records,
        row_errors,
    })
}

fn detect_delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or("");
    let comma = header.matches(',').count();
    let semicolon = header.matches(';').count();
    let tab = header.matches('\t').count();
    if semicolon > comma && semicolon >= tab {
        b';'
    } else if tab > comma && tab > semicolon {
        b'\t'
    } else {
        b','
    }
}

fn parse_row(
    row: &csv::StringRecord,
    trader_col: usize,
    time_col: usize,
    side_col: usize,
    quantity_col: usize,
) -> std::result::Result<TradeRecord, String> {
    let field = |col: usize, name: &str| -> std::result::Result<&str, String> {
        row.get(col).ok_or_else(|| format!("missing {name} field"))
    };
    let trader_id = field(trader_col, "trader_id")?.trim();
    if trader_id.is_empty() {
        return Err("empty trader_id".into());
    }
    let timestamp_us = parse_timestamp(field(time_col, "timestamp")?)?;
    let side_token = field(side_col, "side")?;
    let side = Side::parse(side_token).ok_or_else(|| format!("unparseable side '{side_token}'"))?;
    let quantity_token = field(quantity_col, "quantity")?.trim();
    let quantity: f64 = quantity_token
        .parse()
        .map_err(|_| format!("unparseable quantity '{quantity_token}'"))?;
    if !(quantity > 0.0 && quantity.is_finite()) {
        return Err(format!("quantity must be positive (got {quantity})"));
    }
    Ok(TradeRecord {
        trader_id: trader_id.to_string(),
        timestamp_us,
        side,
        quantity,
    })
}

fn parse_timestamp(token: &str) -> std::result::Result<i64, String> {
    let token = token.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(token) {
        return Ok(dt.timestamp_micros());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(token, fmt) {
            return Ok(naive.and_utc().timestamp_micros());
        }
    }
    if let Ok(seconds) = token.parse::<i64>() {
        return seconds
            .checked_mul(1_000_000)
            .ok_or_else(|| format!("epoch seconds out of range: {token}"));
    }
    if let Ok(seconds) = token.parse::<f64>() {
        if seconds.is_finite() {
            return Ok((seconds * 1e6).round() as i64);
        }
    }
    Err(format!("unparseable timestamp '{token}'"))
}

/// How a tracked trader with no activity in a window is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InactiveRule {
    /// Use the trader's spin from the most recent resolved window; windows
    /// with no history to carry are dropped and reported.
    CarryForward,
    /// Drop the whole window.
    DropWindow,
}

/// How an exact zero net quantity is resolved for an active trader.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    /// Resolve ties to +1, the documented sign convention for zero.
    NetQuantity,
    /// Use the trader's previous spin; a first-window tie resolves to +1
    /// with a warning.
    CarryForward,
}

/// Windowing parameters: slice width, the tracked traders, and the
/// inactivity/tie rules.
#[derive(Debug, Clone)]
pub struct WindowingPolicy {
    width_us: i64,
    trader_set: Vec<String>,
    inactive_rule: InactiveRule,
    tie_rule: TieRule,
}

/// The worked examples slice time into ten-minute windows.
pub const DEFAULT_WINDOW_US: i64 = 10 * 60 * 1_000_000;

impl WindowingPolicy {
    pub fn new(
        width_us: i64,
        trader_set: Vec<String>,
        inactive_rule: InactiveRule,
        tie_rule: TieRule,
    ) -> Result<Self> {
        if width_us <= 0 {
            return Err(Error::Windowing(format!(
                "window width must be positive (got {width_us} us)"
            )));
        }
        if trader_set.is_empty() {
            return Err(Error::Windowing("trader set is empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for id in &trader_set {
            if !seen.insert(id) {
                return Err(Error::Windowing(format!("duplicate trader id '{id}'")));
            }
        }
        Ok(Self {
            width_us,
            trader_set,
            inactive_rule,
            tie_rule,
        })
    }

    pub fn width_us(&self) -> i64 {
        self.width_us
    }

    pub fn trader_set(&self) -> &[String] {
        &self.trader_set
    }

    pub fn inactive_rule(&self) -> InactiveRule {
        self.inactive_rule
    }

    pub fn tie_rule(&self) -> TieRule {
        self.tie_rule
    }
}

/// One resolved window.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinWindow {
    pub start_us: i64,
    pub config: SpinConfiguration,
}

/// The windowed decision series: one configuration per kept window, the
/// per-window count of traders with observed activity, and the windows
/// that had to be dropped.
#[derive(Debug, Clone)]
pub struct SpinSeries {
    trader_set: Vec<String>,
    windows: Vec<SpinWindow>,
    coverage: Vec<usize>,
    dropped: Vec<(i64, String)>,
    warnings: Vec<String>,
}

impl SpinSeries {
    pub fn trader_set(&self) -> &[String] {
        &self.trader_set
    }

    pub fn windows(&self) -> &[SpinWindow] {
        &self.windows
    }

    /// Per kept window: how many tracked traders actually traded.
    pub fn coverage(&self) -> &[usize] {
        &self.coverage
    }

    /// Dropped windows with the reason, in time order.
    pub fn dropped(&self) -> &[(i64, String)] {
        &self.dropped
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Writes the series as CSV: window start, one spin column per trader,
    /// and the coverage count. LF line endings, header always present.
    pub fn to_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        let mut header = vec!["window_start_us".to_string()];
        header.extend(self.trader_set.iter().cloned());
        header.push("coverage".into());
        writeln!(writer, "{}", header.join(","))?;
        for (window, coverage) in self.windows.iter().zip(&self.coverage) {
            let mut fields = vec![window.start_us.to_string()];
            fields.extend(window.config.spins().iter().map(|s| s.to_string()));
            fields.push(coverage.to_string());
            writeln!(writer, "{}", fields.join(","))?;
        }
        Ok(())
    }

    /// Reads a series back from [`to_csv`] output.
    ///
    /// [`to_csv`]: Self::to_csv
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut csv_reader = csv::ReaderBuilder::new().from_reader(reader);
        let headers = csv_reader
            .headers()
            .map_err(|e| Error::Format(format!("cannot read header: {e}")))?
            .clone();
        let fields: Vec<&str> = headers.iter().collect();
        if fields.len() < 3
            || fields[0] != "window_start_us"
            || *fields.last().unwrap() != "coverage"
        {
            return Err(Error::Format(
                "expected columns window_start_us, <traders...>, coverage".into(),
            ));
        }
        let trader_set: Vec<String> = fields[1..fields.len() - 1]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut windows = Vec::new();
        let mut coverage = Vec::new();
        for row in csv_reader.records() {
            let row = row.map_err(|e| Error::Format(format!("unreadable row: {e}")))?;
            let start_us: i64 = row
                .get(0)
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::Format("bad window start".into()))?;
            let spins: Vec<i8> = (1..=trader_set.len())
                .map(|i| {
                    row.get(i)
                        .and_then(|f| f.parse().ok())
                        .ok_or_else(|| Error::Format(format!("bad spin in column {i}")))
                })
                .collect::<Result<_>>()?;
            let cov: usize = row
                .get(trader_set.len() + 1)
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::Format("bad coverage".into()))?;
            windows.push(SpinWindow {
                start_us,
                config: SpinConfiguration::new(spins)?,
            });
            coverage.push(cov);
        }
        Ok(Self {
            trader_set,
            windows,
            coverage,
            dropped: Vec::new(),
            warnings: Vec::new(),
        })
    }
}

/// Folds sorted trade records into a spin series under the given policy.
pub fn windowize(records: &[TradeRecord], policy: &WindowingPolicy) -> Result<SpinSeries> {
    if records.is_empty() {
        return Err(Error::Windowing("empty record set".into()));
    }
    let mut sorted: Vec<&TradeRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.timestamp_us);
    let t0 = sorted[0].timestamp_us;
    let t_last = sorted.last().unwrap().timestamp_us;
    let window_count = ((t_last - t0) / policy.width_us + 1) as usize;

    let trader_index: HashMap<&str, usize> = policy
        .trader_set
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let n = policy.trader_set.len();

    // per window, per tracked trader: net signed quantity and activity
    let mut nets = vec![vec![0.0f64; n]; window_count];
    let mut active = vec![vec![false; n]; window_count];
    for record in &sorted {
        let Some(&trader) = trader_index.get(record.trader_id.as_str()) else {
            continue;
        };
        let w = ((record.timestamp_us - t0) / policy.width_us) as usize;
        nets[w][trader] += f64::from(record.side.spin()) * record.quantity;
        active[w][trader] = true;
    }

    let mut last_spin: Vec<Option<i8>> = vec![None; n];
    let mut windows = Vec::new();
    let mut coverage = Vec::new();
    let mut dropped = Vec::new();
    let mut warnings = Vec::new();
    for w in 0..window_count {
        let start_us = t0 + w as i64 * policy.width_us;
        let mut resolved: Vec<Option<i8>> = vec![None; n];
        let mut drop_reason: Option<String> = None;
        for trader in 0..n {
            let id = &policy.trader_set[trader];
            resolved[trader] = if active[w][trader] {
                let net = nets[w][trader];
                if net > 0.0 {
                    Some(1)
                } else if net < 0.0 {
                    Some(-1)
                } else {
                    match policy.tie_rule {
                        TieRule::NetQuantity => Some(1),
                        TieRule::CarryForward => match last_spin[trader] {
                            Some(prev) => Some(prev),
                            None => {
                                warnings.push(format!(
                                    "window {w}: first-window tie for '{id}' resolved to +1"
                                ));
                                Some(1)
                            }
                        },
                    }
                }
            } else {
                match policy.inactive_rule {
                    InactiveRule::DropWindow => {
                        drop_reason
                            .get_or_insert_with(|| format!("'{id}' inactive under drop-window"));
                        None
                    }
                    InactiveRule::CarryForward => match last_spin[trader] {
                        Some(prev) => Some(prev),
                        None => {
                            drop_reason.get_or_insert_with(|| {
                                format!("no history to carry forward for '{id}'")
                            });
                            None
                        }
                    },
                }
            };
        }
        // history follows observed activity whether or not the window is kept
        for trader in 0..n {
            if active[w][trader] {
                last_spin[trader] = resolved[trader];
            }
        }
        match drop_reason {
            Some(reason) => dropped.push((start_us, reason)),
            None => {
                let spins: Vec<i8> = resolved
                    .into_iter()
                    .map(|s| s.expect("undropped window resolves every trader"))
                    .collect();
                windows.push(SpinWindow {
                    start_us,
                    config: SpinConfiguration::new(spins)?,
                });
                coverage.push((0..n).filter(|&t| active[w][t]).count());
            }
        }
    }
    Ok(SpinSeries {
        trader_set: policy.trader_set.clone(),
        windows,
        coverage,
        dropped,
        warnings,
    })
}

/// Per-window raw pair sums `T` — the integer scale used by the numeric
/// tables. The scaled energy `H = -T/N` is available through
/// [`scaled_hamiltonian_series`].
pub fn hamiltonian_series(series: &SpinSeries) -> Vec<i64> {
    series.windows.iter().map(|w| pair_sum(&w.config)).collect()
}

/// Per-window scaled energies `H = -T/N`, exact.
pub fn scaled_hamiltonian_series(series: &SpinSeries) -> Vec<Ratio<i64>> {
    series
        .windows
        .iter()
        .map(|w| crate::spin::hamiltonian(&w.config))
        .collect()
}

/// The `k` most active traders by trade count, ties broken by identifier.
pub fn top_traders(records: &[TradeRecord], k: usize) -> Vec<String> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for record in records {
        *counts.entry(record.trader_id.as_str()).or_default() += 1;
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(id, _)| id.to_string())
        .collect()
}
